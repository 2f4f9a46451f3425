//! Numerical semigroups given by their (finite) gap sets.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("0 cannot be a gap")]
    ZeroGap,
    #[error("{a} + {b} = {} is a gap, so the complement is not closed", a + b)]
    NotClosed { a: u64, b: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericalSemigroup {
    pub gaps: Vec<u64>,
    pub genus: u64,
    pub min_generators: Vec<u64>,
    /// Largest gap, or -1 for the full semigroup of nonnegative integers.
    pub frobenius_number: i64,
    pub conductor: u64,
    pub multiplicity: u64,
    /// Smallest element in each residue class modulo the multiplicity.
    pub apery_set: Vec<u64>,
}

impl NumericalSemigroup {
    pub fn contains(&self, n: u64) -> bool {
        self.gaps.binary_search(&n).is_err()
    }
}

/// The semigroup whose complement in the nonnegative integers is `gaps`.
pub fn semigroup_from_gaps(gaps: &[u64]) -> Result<NumericalSemigroup, SemigroupError> {
    let mut gaps = gaps.to_vec();
    gaps.sort_unstable();
    gaps.dedup();
    if gaps.first() == Some(&0) {
        return Err(SemigroupError::ZeroGap);
    }
    let is_gap = |n: u64| gaps.binary_search(&n).is_ok();
    let conductor = gaps.last().map_or(0, |&f| f + 1);
    let elems: Vec<u64> = (1..conductor).filter(|&n| !is_gap(n)).collect();
    for (k, &a) in elems.iter().enumerate() {
        for &b in &elems[k..] {
            if a + b >= conductor {
                break;
            }
            if is_gap(a + b) {
                return Err(SemigroupError::NotClosed { a, b });
            }
        }
    }
    let multiplicity = (1..).find(|&n| !is_gap(n)).expect("complement is cofinite");
    // generators are at most conductor + multiplicity
    let top = conductor + multiplicity;
    let member = |n: u64| n == 0 || !is_gap(n);
    let min_generators: Vec<u64> = (1..=top)
        .filter(|&n| member(n))
        .filter(|&n| !(1..n).any(|a| member(a) && member(n - a)))
        .collect();
    let apery_set: Vec<u64> = (0..multiplicity)
        .map(|r| {
            (0..)
                .map(|k| r + k * multiplicity)
                .find(|&n| member(n))
                .expect("every residue class meets the semigroup")
        })
        .collect();
    Ok(NumericalSemigroup {
        genus: gaps.len() as u64,
        frobenius_number: gaps.last().map_or(-1, |&f| f as i64),
        gaps,
        min_generators,
        conductor,
        multiplicity,
        apery_set,
    })
}

/// Gaps of the semigroup generated by `gens` (which must have gcd 1).
pub fn gaps_of_generated(gens: &[u64]) -> Vec<u64> {
    let min = *gens.iter().min().expect("at least one generator");
    // a run of `min` consecutive members means everything beyond is a member
    let mut member = vec![true];
    let mut run = 1;
    let mut n = 0u64;
    while run < min {
        n += 1;
        let inside = gens
            .iter()
            .any(|&g| g <= n && member[(n - g) as usize]);
        member.push(inside);
        run = if inside { run + 1 } else { 0 };
    }
    (1..member.len() as u64)
        .filter(|&k| !member[k as usize])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let s = semigroup_from_gaps(&[1, 2, 5]).unwrap();
        assert_eq!(s.min_generators, vec![3, 4]);
        assert_eq!((s.frobenius_number, s.conductor), (5, 6));
        assert_eq!(s.apery_set, vec![0, 4, 8]);
        let full = semigroup_from_gaps(&[]).unwrap();
        assert_eq!(full.min_generators, vec![1]);
        assert_eq!(full.frobenius_number, -1);
        assert_eq!(semigroup_from_gaps(&[1, 3]).unwrap().min_generators, vec![2, 5]);
        let s = semigroup_from_gaps(&[1, 2, 3]).unwrap();
        assert_eq!(s.min_generators, vec![4, 5, 6, 7]);
        assert_eq!(s.frobenius_number, 3);
        assert_eq!(
            semigroup_from_gaps(&[2, 4]).unwrap_err(),
            SemigroupError::NotClosed { a: 1, b: 1 }
        );
        assert_eq!(semigroup_from_gaps(&[0, 1]).unwrap_err(), SemigroupError::ZeroGap);
    }

    #[test]
    fn generated_semigroups() {
        assert_eq!(gaps_of_generated(&[3, 4]), vec![1, 2, 5]);
        assert_eq!(gaps_of_generated(&[4, 5]), vec![1, 2, 3, 6, 7, 11]);
        assert_eq!(gaps_of_generated(&[2, 3]), vec![1]);
        assert!(gaps_of_generated(&[1]).is_empty());
    }

    proptest! {
        #[test]
        fn round_trip(a in 2u64..12, b in 2u64..12, c in 2u64..30) {
            let gens: Vec<u64> = vec![a, b, c];
            prop_assume!(gens.iter().fold(0, |g, &x| num_gcd(g, x)) == 1);
            let gaps = gaps_of_generated(&gens);
            let s = semigroup_from_gaps(&gaps).unwrap();
            prop_assert_eq!(gaps_of_generated(&s.min_generators), gaps);
            // the minimal generating set sits inside every generating set
            for g in &s.min_generators {
                prop_assert!(gens.contains(g));
            }
        }
    }

    fn num_gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { num_gcd(b, a % b) }
    }
}
