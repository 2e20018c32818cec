//! Exact rank and nullity of integer matrices by fraction-free (Bareiss)
//! elimination over arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank over the rationals. Pivots are the first nonzero entry at or below
/// the current row; columns without a pivot are skipped.
///
/// After step `r` every live entry is a `(r+1) x (r+1)` minor of the input,
/// so the division by the previous pivot is exact.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot_row) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_vals = &head[rank];
        let pivot = &pivot_vals[col];
        let unit_ratio = *pivot == prev;
        for row in tail.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for j in col + 1..ncols {
                let lead_zero = factor.is_zero() || pivot_vals[j].is_zero();
                if row[j].is_zero() && lead_zero {
                    continue;
                }
                if lead_zero {
                    if !unit_ratio {
                        row[j] = &row[j] * pivot / &prev;
                    }
                    continue;
                }
                let t = &row[j] * pivot - &factor * &pivot_vals[j];
                row[j] = t / &prev;
            }
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}

/// `ncols - rank`, the dimension of the right null space.
pub fn nullity(rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    ncols - bareiss_rank(rows)
}

/// Nullity of the square integer matrix `m - lambda I`.
pub fn shifted_nullity(m: &[Vec<i64>], lambda: i64) -> usize {
    let rows = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| BigInt::from(if i == j { x - lambda } else { x }))
                .collect()
        })
        .collect();
    nullity(rows)
}
