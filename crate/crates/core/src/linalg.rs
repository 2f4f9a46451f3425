//! Row reduction over a finite field.

use crate::field::{FieldElem, FieldTower};

/// Pivot columns of the row echelon form of `rows`, ascending.
///
/// Columns are processed left to right, so the pivots are exactly the
/// distinct leading positions attained by the row space. Their number is
/// the rank.
pub fn leading_pivots(f: &FieldTower, mut rows: Vec<Vec<FieldElem>>) -> Vec<usize> {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut pivots = Vec::new();
    let mut active: Vec<usize> = (0..rows.len()).collect();
    for col in 0..ncols {
        let Some(pos) = active
            .iter()
            .position(|&r| rows[r].get(col).is_some_and(|c| !c.is_zero()))
        else {
            continue;
        };
        let pr = active.swap_remove(pos);
        let inv = f.inv(rows[pr][col]).expect("pivot is nonzero");
        let pivot_row = rows[pr].clone();
        for &r in &active {
            let Some(&c) = rows[r].get(col) else { continue };
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, inv);
            for (k, &pv) in pivot_row.iter().enumerate().skip(col) {
                if let Some(slot) = rows[r].get_mut(k) {
                    *slot = f.sub(*slot, f.mul(factor, pv));
                }
            }
        }
        pivots.push(col);
        if active.is_empty() {
            break;
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field_tower;

    #[test]
    fn pivots_of_small_matrix() {
        let f = make_field_tower(3, 1, 1).unwrap();
        let row = |ks: &[i64]| ks.iter().map(|&k| f.from_int(k)).collect::<Vec<_>>();
        // second row cancels against the first at column 1
        let rows = vec![row(&[0, 1, 1, 0]), row(&[0, 2, 2, 1]), row(&[0, 1, 1, 1])];
        assert_eq!(leading_pivots(&f, rows), vec![1, 3]);
        assert!(leading_pivots(&f, Vec::new()).is_empty());
    }
}
