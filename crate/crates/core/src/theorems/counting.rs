//! Integer identities behind the cardinality arguments, each with a closed
//! form and a brute-force companion.

use super::gaps::{gaps_third_int, half_reduced_index_set};
use super::pq::POrder;
use super::TheoremError;

/// `sum_{t=0}^{n} floor(t/3)` by direct summation.
pub fn floor_sum(n: u64) -> u64 {
    (0..=n).map(|t| t / 3).sum()
}

/// `floor(n(n-1)/6)`.
pub fn floor_sum_closed(n: u64) -> u64 {
    n * n.saturating_sub(1) / 6
}

/// `(q-1)(q-3)/8` for odd `q >= 5`.
pub fn half_count_closed(q: u64) -> u64 {
    (q - 1) * (q - 3) / 8
}

/// `S(j) = sum_{l=1}^{floor((m-j)/(i+1))} (floor((m - j - (i+1) l)/3) + 1)`.
pub fn s_sum(m: u64, i: u64, j: u64) -> u64 {
    if j > m {
        return 0;
    }
    let top = (m - j) / (i + 1);
    (1..=top).map(|l| (m - j - (i + 1) * l) / 3 + 1).sum()
}

/// Whether `(m, i)` falls in the case `i <= m - 7`, `2i < m - 5`.
pub fn in_case_four(m: u64, i: u64) -> bool {
    i >= 1 && i + 7 <= m && 2 * i + 5 < m
}

/// A counting identity with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `sum_{t<=n} floor(t/3) = floor(n(n-1)/6)`.
    FloorSum { n: u64 },
    /// The repetition-free `m = (q+1)/2` tuple set has `(q-1)(q-3)/8`
    /// elements.
    HalfIndexSet { q: u64 },
    /// The `m = (q+1)/3` gap set has `(m-1)(m-2)/2` elements.
    ThirdGapCount { m: u64, stride: u64, order: POrder },
    /// `sum_{j=3}^{i+3} S(j) = floor((m-i-1)(m-i-2)/6)`.
    SSum { m: u64, i: u64 },
}

impl Identity {
    fn validate(&self) -> Result<(), TheoremError> {
        let bad = |msg: String| Err(TheoremError::OutOfRange(msg));
        match *self {
            Identity::HalfIndexSet { q } if q < 5 || q % 2 == 0 => {
                bad(format!("q = {q} must be odd and at least 5"))
            }
            Identity::ThirdGapCount { m, .. } if m < 2 => bad(format!("m = {m} below 2")),
            Identity::SSum { m, i } if !in_case_four(m, i) => {
                bad(format!("(m, i) = ({m}, {i}) outside i <= m-7, 2i < m-5"))
            }
            _ => Ok(()),
        }
    }

    /// The right-hand side.
    pub fn closed_form(&self) -> Result<u64, TheoremError> {
        self.validate()?;
        Ok(match *self {
            Identity::FloorSum { n } => floor_sum_closed(n),
            Identity::HalfIndexSet { q } => half_count_closed(q),
            Identity::ThirdGapCount { m, .. } => (m - 1) * (m - 2) / 2,
            Identity::SSum { m, i } => (m - i - 1) * (m - i - 2) / 6,
        })
    }

    /// The left-hand side, by enumeration or direct summation.
    pub fn brute_force(&self) -> Result<u64, TheoremError> {
        self.validate()?;
        Ok(match *self {
            Identity::FloorSum { n } => floor_sum(n),
            Identity::HalfIndexSet { q } => half_reduced_index_set(q).len() as u64,
            Identity::ThirdGapCount { m, stride, order } => {
                gaps_third_int(m, stride, order).len() as u64
            }
            Identity::SSum { m, i } => (3..=i + 3).map(|j| s_sum(m, i, j)).sum(),
        })
    }

    pub fn holds(&self) -> Result<bool, TheoremError> {
        Ok(self.closed_form()? == self.brute_force()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorems::gaps::gaps_half_int;

    #[test]
    fn small_values() {
        assert_eq!(floor_sum(5), 3);
        assert_eq!(floor_sum_closed(5), 3);
        assert_eq!(half_count_closed(7), 3);
        assert_eq!(Identity::HalfIndexSet { q: 7 }.brute_force().unwrap(), 3);
        assert!(Identity::HalfIndexSet { q: 8 }.closed_form().is_err());
        assert!(Identity::SSum { m: 10, i: 3 }.holds().is_err());
    }

    #[test]
    fn floor_sum_identity() {
        for n in 0..3000 {
            assert!(Identity::FloorSum { n }.holds().unwrap(), "n = {n}");
        }
    }

    #[test]
    fn half_index_set_identity() {
        for q in (5..=101).step_by(2) {
            assert!(Identity::HalfIndexSet { q }.holds().unwrap(), "q = {q}");
        }
    }

    #[test]
    fn half_gap_sets_are_as_large_as_index_sets() {
        for q in (7..60).step_by(2) {
            let m = (q + 1) / 2;
            assert_eq!(gaps_half_int(m, q + 1).len() as u64, half_count_closed(q));
        }
    }

    #[test]
    fn s_sum_identity_in_case_four() {
        let mut checked = 0;
        for m in 8..60 {
            for i in 1..m {
                if in_case_four(m, i) {
                    assert!(Identity::SSum { m, i }.holds().unwrap(), "m = {m}, i = {i}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 100);
    }
}
