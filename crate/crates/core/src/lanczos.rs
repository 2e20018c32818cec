//! Extremal eigenpairs of large symmetric operators.
//!
//! Thick-restart Lanczos with full reorthogonalisation inside a bounded
//! basis. The projected matrix is formed explicitly (`h = V^T A v` for every
//! new vector), so after a restart the couplings between kept Ritz vectors
//! and the residual direction come out of the same computation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Maximum basis size before a restart.
    pub max_basis: usize,
    /// Ritz vectors kept across a restart.
    pub keep: usize,
    /// Absolute residual `||A x - θ x||` accepted as converged.
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            max_basis: 40,
            keep: 12,
            tol: 1e-10,
            max_restarts: 2000,
            seed: 0x005e_ed0f_1a9c,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    /// Operator applications used.
    pub matvecs: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += alpha * x);
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn orthogonalise(w: &mut [f64], against: &[Vec<f64>]) {
    for v in against {
        let c = dot(v, w);
        axpy(-c, v, w);
    }
}

// splitmix64; a fixed, seedable start vector keeps runs reproducible.
fn start_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut state = seed;
    (0..dim)
        .map(|_| {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

/// Largest eigenpair of the symmetric operator `apply` restricted to the
/// orthogonal complement of `deflate` (which must be orthonormal).
pub fn largest_eigenpair<F>(
    dim: usize,
    apply: F,
    deflate: &[Vec<f64>],
    opts: &LanczosOptions,
) -> Result<Eigenpair>
where
    F: Fn(&[f64], &mut [f64]),
{
    let space = dim.saturating_sub(deflate.len());
    if space == 0 {
        return Err(Error::arg("no vectors left after deflation"));
    }
    let max_basis = opts.max_basis.clamp(2, space.max(2)).min(space);
    let keep = opts.keep.clamp(1, max_basis.saturating_sub(1).max(1));

    let mut v0 = start_vector(dim, opts.seed);
    orthogonalise(&mut v0, deflate);
    orthogonalise(&mut v0, deflate);
    let n0 = norm(&v0);
    if n0 == 0.0 {
        return Err(Error::Numeric(
            "start vector vanished after deflation".into(),
        ));
    }
    v0.iter_mut().for_each(|x| *x /= n0);

    let mut basis: Vec<Vec<f64>> = vec![v0];
    // Projected matrix over the expanded prefix of `basis`.
    let mut h: Vec<Vec<f64>> = Vec::new();
    let mut w = vec![0.0; dim];
    let mut matvecs = 0;
    let mut last_residual = f64::INFINITY;

    for _restart in 0..=opts.max_restarts {
        let mut beta = 0.0;
        let mut exhausted = false;
        while h.len() < max_basis {
            let j = h.len();
            apply(&basis[j], &mut w);
            matvecs += 1;
            orthogonalise(&mut w, deflate);
            let mut col: Vec<f64> = basis.iter().map(|v| dot(v, &w)).collect();
            for (c, v) in col.iter().zip(&basis) {
                axpy(-c, v, &mut w);
            }
            // second pass against cancellation
            for (c, v) in col.iter_mut().zip(&basis) {
                let d = dot(v, &w);
                *c += d;
                axpy(-d, v, &mut w);
            }
            orthogonalise(&mut w, deflate);
            for row in h.iter_mut() {
                row.push(0.0);
            }
            h.push(vec![0.0; j + 1]);
            for i in 0..=j {
                h[i][j] = col[i];
                h[j][i] = col[i];
            }
            beta = norm(&w);
            let scale = col.iter().fold(0.0f64, |a, c| a.max(c.abs())).max(1.0);
            if beta <= 1e-13 * scale || basis.len() == space {
                exhausted = true;
                break;
            }
            basis.push(w.iter().map(|x| x / beta).collect());
        }

        let p = h.len();
        let (theta, y) = jacobi_eigen(&h);
        // Ritz pairs sorted by value, largest first
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| theta[b].total_cmp(&theta[a]));
        let top = order[0];
        let residual = if exhausted {
            0.0
        } else {
            beta * y[p - 1][top].abs()
        };
        last_residual = residual;

        if residual <= opts.tol || exhausted {
            let mut vector = vec![0.0; dim];
            for (i, v) in basis.iter().take(p).enumerate() {
                axpy(y[i][top], v, &mut vector);
            }
            return Ok(Eigenpair {
                value: theta[top],
                vector,
                residual,
                matvecs,
            });
        }

        // Restart: keep the leading Ritz vectors plus the residual direction.
        let next = basis.pop().expect("residual direction");
        let kept: Vec<usize> = order.into_iter().take(keep).collect();
        let mut new_basis: Vec<Vec<f64>> = kept
            .iter()
            .map(|&col| {
                let mut u = vec![0.0; dim];
                for (i, v) in basis.iter().enumerate() {
                    axpy(y[i][col], v, &mut u);
                }
                u
            })
            .collect();
        new_basis.push(next);
        h = (0..kept.len())
            .map(|a| {
                (0..kept.len())
                    .map(|b| if a == b { theta[kept[a]] } else { 0.0 })
                    .collect()
            })
            .collect();
        basis = new_basis;
    }
    Err(Error::Numeric(format!(
        "Lanczos did not converge after {} restarts ({matvecs} matvecs); last residual {last_residual:e} > {:e}",
        opts.max_restarts, opts.tol
    )))
}

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi
/// rotations. Returns eigenvalues (unsorted) and the eigenvector matrix
/// with eigenvectors in columns.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    let total: f64 = a
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off <= 1e-30 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_apply(m: &[Vec<f64>]) -> impl Fn(&[f64], &mut [f64]) + '_ {
        move |x, y| {
            for (yi, row) in y.iter_mut().zip(m) {
                *yi = dot(row, x);
            }
        }
    }

    #[test]
    fn jacobi_on_2x2() {
        let (vals, vecs) = jacobi_eigen(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        let mut sorted = vals.clone();
        sorted.sort_by(f64::total_cmp);
        assert!((sorted[0]).abs() < 1e-14 && (sorted[1] - 2.0).abs() < 1e-14);
        let top = if vals[0] > vals[1] { 0 } else { 1 };
        assert!((vecs[0][top].abs() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn cycle_graph_top_pair() {
        // C_12: eigenvalues 2cos(2πj/12); the second largest is √3 (twice).
        let n = 12;
        let cycle = |x: &[f64], y: &mut [f64]| {
            for i in 0..n {
                y[i] = x[(i + 1) % n] + x[(i + n - 1) % n];
            }
        };
        let opts = LanczosOptions {
            max_basis: 6,
            keep: 3,
            ..Default::default()
        };
        let first = largest_eigenpair(n, cycle, &[], &opts).unwrap();
        assert!((first.value - 2.0).abs() < 1e-10);
        let nrm = norm(&first.vector);
        let u: Vec<f64> = first.vector.iter().map(|x| x / nrm).collect();
        let second = largest_eigenpair(n, cycle, &[u], &opts).unwrap();
        assert!(
            (second.value - 3f64.sqrt()).abs() < 1e-10,
            "{}",
            second.value
        );
    }

    #[test]
    fn small_dense_matrix_is_exhausted_exactly() {
        let m = vec![
            vec![2.0, 2.0, 2.0],
            vec![2.0, 4.0, 0.0],
            vec![2.0, 0.0, 4.0],
        ];
        let r = largest_eigenpair(3, dense_apply(&m), &[], &LanczosOptions::default()).unwrap();
        assert!((r.value - 6.0).abs() < 1e-12);
    }

    #[test]
    fn deflating_everything_is_an_error() {
        let m = vec![vec![1.0]];
        assert!(
            largest_eigenpair(1, dense_apply(&m), &[vec![1.0]], &LanczosOptions::default())
                .is_err()
        );
    }

    #[test]
    fn iteration_budget_reports_residual() {
        let n = 400;
        let diag = |x: &[f64], y: &mut [f64]| {
            for i in 0..n {
                y[i] = (i as f64).sqrt() * x[i];
            }
        };
        let opts = LanczosOptions {
            max_basis: 4,
            keep: 1,
            max_restarts: 1,
            tol: 1e-14,
            ..Default::default()
        };
        match largest_eigenpair(n, diag, &[], &opts) {
            Err(Error::Numeric(msg)) => assert!(msg.contains("residual")),
            other => panic!("expected numeric error, got {other:?}"),
        }
    }
}
