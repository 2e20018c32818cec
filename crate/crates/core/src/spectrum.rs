//! Spectra of the quotient matrix by three independent routes: a dense
//! symmetric eigensolve, the block-circulant decomposition into per-root
//! blocks `2D + 2cos(2πk/m) E`, and the closed form for `2D + 2E`.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::sig12;
use crate::matrix::RealMatrix;
use crate::partition::{d_block, e_block};
use crate::perm::GroupParams;

/// Symmetry tolerance accepted by [`symmetric_spectrum`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Absolute tolerance for elementwise comparison of sorted spectra.
pub const SPECTRUM_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    Direct,
    Decomposed,
    ClosedForm,
}

impl fmt::Display for SpectrumSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumSource::Direct => "direct",
            SpectrumSource::Decomposed => "decomposed",
            SpectrumSource::ClosedForm => "closed-form",
        })
    }
}

/// Eigenvalues sorted nonincreasing, with where they came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealSpectrum {
    eigenvalues: Vec<f64>,
    source: SpectrumSource,
    tolerance: f64,
}

impl RealSpectrum {
    pub fn new(mut eigenvalues: Vec<f64>, source: SpectrumSource, tolerance: f64) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self {
            eigenvalues,
            source,
            tolerance,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn source(&self) -> SpectrumSource {
        self.source
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `lambda_i`, 1-based.
    pub fn lambda(&self, i: usize) -> Option<f64> {
        i.checked_sub(1)
            .and_then(|i| self.eigenvalues.get(i))
            .copied()
    }

    /// `lambda_1 - lambda_2` counted with multiplicity.
    pub fn gap(&self) -> Option<f64> {
        Some(self.lambda(1)? - self.lambda(2)?)
    }

    /// Largest elementwise difference of two sorted spectra of equal length.
    pub fn max_abs_diff(&self, other: &RealSpectrum) -> Option<f64> {
        (self.len() == other.len()).then(|| {
            self.eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }

    pub fn matches(&self, other: &RealSpectrum, tol: f64) -> bool {
        self.max_abs_diff(other).is_some_and(|d| d <= tol)
    }

    /// Number of eigenvalues within `tol` of `x`.
    pub fn count_near(&self, x: f64, tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&v| (v - x).abs() <= tol)
            .count()
    }

    /// Groups consecutive eigenvalues whose gaps are below `tol`; returns the
    /// mean and size of each cluster, largest first.
    pub fn clusters(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        let mut start = 0;
        for i in 1..=self.len() {
            if i == self.len() || self.eigenvalues[i - 1] - self.eigenvalues[i] >= tol {
                let block = &self.eigenvalues[start..i];
                if !block.is_empty() {
                    out.push((block.iter().sum::<f64>() / block.len() as f64, block.len()));
                }
                start = i;
            }
        }
        out
    }

    /// CSV with columns `index,eigenvalue,source`; `index` is 1-based.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "index,eigenvalue,source")?;
        for (i, v) in self.eigenvalues.iter().enumerate() {
            writeln!(w, "{},{},{}", i + 1, sig12(*v), self.source)?;
        }
        Ok(())
    }
}

pub(crate) fn dense_eigenvalues(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let mat = faer::Mat::<f64>::from_fn(n, n, f);
    mat.self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::Numeric(format!("symmetric eigensolver failed: {e:?}")))
}

/// All eigenvalues of a real symmetric matrix, sorted nonincreasing.
pub fn symmetric_spectrum(m: &RealMatrix) -> Result<RealSpectrum> {
    if m.rows() != m.cols() {
        return Err(Error::arg(format!(
            "matrix is {}x{}, not square",
            m.rows(),
            m.cols()
        )));
    }
    let asym = m.max_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::arg(format!(
            "matrix is not symmetric: max |a_ij - a_ji| = {asym:e}"
        )));
    }
    let values = dense_eigenvalues(m.rows(), |i, j| m[(i, j)])?;
    Ok(RealSpectrum::new(
        values,
        SpectrumSource::Direct,
        1e-9 * m.norm_inf().max(1.0),
    ))
}

/// The scalar `2cos(2πk/m)` weighting `E_n` in the `k`-th diagonal block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosineCoefficient {
    pub k: usize,
    pub value: f64,
}

/// `2cos(2πk/m)`, exact at the quarter and half turns.
pub fn cosine_coefficient(k: usize, m: usize) -> CosineCoefficient {
    let k = k % m;
    let value = if k == 0 {
        2.0
    } else if 4 * k == m || 4 * k == 3 * m {
        0.0
    } else if 2 * k == m {
        -2.0
    } else {
        2.0 * (2.0 * PI * k as f64 / m as f64).cos()
    };
    CosineCoefficient { k, value }
}

/// `a * D_n + b * E_n` as a real matrix.
pub fn structured_block(n: usize, a: f64, b: f64) -> RealMatrix {
    let d = d_block(n);
    let e = e_block(n);
    RealMatrix::from_fn(n, n, |i, j| a * d[(i, j)] as f64 + b * e[(i, j)] as f64)
}

/// Spectrum of the quotient via its block-circulant structure: the union of
/// `Spec(D ± E)` for two colours and of `Spec(2D + 2cos(2πk/m) E)` over
/// `k = 0..m` otherwise.
pub fn block_circulant_spectrum(p: GroupParams) -> Result<RealSpectrum> {
    let (m, n) = (p.m(), p.n());
    if m < 2 {
        return Err(Error::Unsupported(
            "block-circulant decomposition requires m >= 2".into(),
        ));
    }
    let blocks: Vec<RealMatrix> = if m == 2 {
        vec![
            structured_block(n, 1.0, 1.0),
            structured_block(n, 1.0, -1.0),
        ]
    } else {
        (0..m)
            .map(|k| structured_block(n, 2.0, cosine_coefficient(k, m).value))
            .collect()
    };
    let parts: Vec<RealSpectrum> = blocks
        .par_iter()
        .map(symmetric_spectrum)
        .collect::<Result<_>>()?;
    let tolerance = parts.iter().map(|s| s.tolerance).fold(0.0, f64::max);
    let values = parts.into_iter().flat_map(|s| s.eigenvalues).collect();
    Ok(RealSpectrum::new(
        values,
        SpectrumSource::Decomposed,
        tolerance,
    ))
}

/// `Spec(2D_n + 2E_n) = {0, 2, ..., 2n} \ {2⌊n/2⌋}`.
pub fn gsw_spectrum(n: usize) -> Result<RealSpectrum> {
    if n == 0 {
        return Err(Error::arg("n must be at least 1"));
    }
    let skip = 2 * (n / 2);
    let values = (0..=n)
        .map(|k| 2 * k)
        .filter(|&v| v != skip)
        .map(|v| v as f64)
        .collect();
    Ok(RealSpectrum::new(values, SpectrumSource::ClosedForm, 0.0))
}

/// For `m ≡ 0 (mod 4)`: `Spec(2D) ⊎ Spec(2D) ⊎ Spec(2D + 2E)`, which the
/// quotient spectrum must contain (the blocks at `k = m/4, 3m/4, 0`).
pub fn mod4_guaranteed_sublist(p: GroupParams) -> Result<RealSpectrum> {
    if !p.m().is_multiple_of(4) {
        return Err(Error::arg(format!("m = {} is not divisible by 4", p.m())));
    }
    let n = p.n();
    let mut values: Vec<f64> = (0..n).map(|j| 2.0 * j as f64).collect();
    values.extend_from_within(..);
    values.extend(gsw_spectrum(n)?.eigenvalues);
    Ok(RealSpectrum::new(values, SpectrumSource::ClosedForm, 0.0))
}

/// Lower bound on `lambda_1(2D_n + tE_n)` from its principal submatrix
/// `[[t, t], [t, 2n-2]]` on the first and last indices.
pub fn submatrix_gap_bound(n: usize, t: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::arg("n must be at least 2"));
    }
    if t == 0.0 || !t.is_finite() {
        return Err(Error::arg("t must be finite and nonzero"));
    }
    let a = 2.0 * (n as f64 - 1.0);
    Ok((t + a + ((a - t).powi(2) + 4.0 * t * t).sqrt()) / 2.0)
}

/// Injectively matches every value of `sub` to a value of `sup` within
/// `tol`, returning the values of `sub` left unmatched.
///
/// Both inputs may be in any order. Greedy matching over ascending order is
/// optimal for equal-width tolerance windows on the line.
pub fn unmatched_in_superset(sub: &[f64], sup: &[f64], tol: f64) -> Vec<f64> {
    let mut a = sub.to_vec();
    let mut b = sup.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let mut unmatched = Vec::new();
    let mut j = 0;
    for &x in &a {
        while j < b.len() && b[j] < x - tol {
            j += 1;
        }
        if j < b.len() && b[j] <= x + tol {
            j += 1;
        } else {
            unmatched.push(x);
        }
    }
    unmatched
}

/// Checks `lambda_i(outer) >= lambda_i(inner) >= lambda_{N-M+i}(outer)` for
/// sorted-nonincreasing spectra, allowing `slack` for rounding.
pub fn interlaces(outer: &[f64], inner: &[f64], slack: f64) -> bool {
    let (big, small) = (outer.len(), inner.len());
    small <= big
        && (0..small)
            .all(|i| outer[i] + slack >= inner[i] && inner[i] + slack >= outer[big - small + i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(m: usize, n: usize) -> GroupParams {
        GroupParams::new(m, n).unwrap()
    }

    fn assert_close(actual: &[f64], expected: &[f64], tol: f64) {
        assert_eq!(actual.len(), expected.len(), "{actual:?} vs {expected:?}");
        for (a, e) in actual.iter().zip(expected) {
            assert!((a - e).abs() <= tol, "{actual:?} vs {expected:?}");
        }
    }

    #[test]
    fn diagonal_and_small_matrices() {
        let d = structured_block(4, 2.0, 0.0);
        assert_close(
            symmetric_spectrum(&d).unwrap().values(),
            &[6.0, 4.0, 2.0, 0.0],
            1e-12,
        );

        let s = symmetric_spectrum(&structured_block(2, 1.0, 1.0)).unwrap();
        assert_close(s.values(), &[2.0, 0.0], 1e-12);
        let s = symmetric_spectrum(&structured_block(2, 1.0, -1.0)).unwrap();
        assert_close(s.values(), &[2f64.sqrt(), -(2f64.sqrt())], 1e-12);

        let m = structured_block(3, 2.0, 2.0);
        assert_eq!(
            m.to_rows(),
            vec![
                vec![2.0, 2.0, 2.0],
                vec![2.0, 4.0, 0.0],
                vec![2.0, 0.0, 4.0]
            ]
        );
        let s = symmetric_spectrum(&m).unwrap();
        assert_close(s.values(), &[6.0, 4.0, 0.0], 1e-12);
        assert_eq!(s.source(), SpectrumSource::Direct);
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let m = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]);
        let err = symmetric_spectrum(&m).unwrap_err();
        assert!(err.to_string().contains("5e-1"), "{err}");
        assert!(symmetric_spectrum(&RealMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn cosine_coefficients() {
        assert_eq!(cosine_coefficient(0, 7).value, 2.0);
        assert_eq!(cosine_coefficient(2, 8).value, 0.0);
        assert_eq!(cosine_coefficient(6, 8).value, 0.0);
        assert_eq!(cosine_coefficient(3, 12).value, 0.0);
        assert_eq!(cosine_coefficient(2, 4).value, -2.0);
        assert!((cosine_coefficient(1, 3).value + 1.0).abs() < 1e-15);
        for m in 1..20 {
            for k in 0..m {
                let c = cosine_coefficient(k, m).value;
                assert!(c.abs() <= 2.0);
                assert_eq!(c == 2.0, k == 0);
                assert_eq!(c == 0.0, m % 4 == 0 && (4 * k == m || 4 * k == 3 * m));
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let s = block_circulant_spectrum(gp(2, 2)).unwrap();
        let r2 = 2f64.sqrt();
        assert_close(s.values(), &[2.0, r2, 0.0, -r2], 1e-12);

        // k=0: {4,0}; k=1,3: 2D = diag(0,2); k=2: [[-2,-2],[-2,2]] -> ±2√2.
        // The trace of the quotient is 4 * tr(2D_2) = 8.
        let s = block_circulant_spectrum(gp(4, 2)).unwrap();
        let r8 = 8f64.sqrt();
        assert_close(s.values(), &[4.0, r8, 2.0, 2.0, 0.0, 0.0, 0.0, -r8], 1e-12);
        assert!((s.values().iter().sum::<f64>() - 8.0).abs() < 1e-12);
        assert_eq!(s.source(), SpectrumSource::Decomposed);

        let s = block_circulant_spectrum(gp(3, 1)).unwrap();
        assert_close(s.values(), &[2.0, -1.0, -1.0], 1e-12);

        assert!(block_circulant_spectrum(gp(1, 3)).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(gsw_spectrum(1).unwrap().values(), &[2.0]);
        assert_eq!(gsw_spectrum(2).unwrap().values(), &[4.0, 0.0]);
        assert_eq!(gsw_spectrum(3).unwrap().values(), &[6.0, 4.0, 0.0]);
        assert_eq!(gsw_spectrum(4).unwrap().values(), &[8.0, 6.0, 2.0, 0.0]);
        assert!(gsw_spectrum(0).is_err());
    }

    #[test]
    fn mod4_sublists() {
        assert_eq!(
            mod4_guaranteed_sublist(gp(4, 2)).unwrap().values(),
            &[4.0, 2.0, 2.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            mod4_guaranteed_sublist(gp(8, 3)).unwrap().values(),
            &[6.0, 4.0, 4.0, 4.0, 2.0, 2.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            mod4_guaranteed_sublist(gp(4, 1)).unwrap().values(),
            &[2.0, 0.0, 0.0]
        );
        assert!(mod4_guaranteed_sublist(gp(6, 2)).is_err());

        let sub = mod4_guaranteed_sublist(gp(4, 2)).unwrap();
        let sup = block_circulant_spectrum(gp(4, 2)).unwrap();
        assert!(unmatched_in_superset(sub.values(), sup.values(), 1e-8).is_empty());
    }

    #[test]
    fn gap_bound_examples() {
        assert!((submatrix_gap_bound(2, 2.0).unwrap() - 4.0).abs() < 1e-15);
        let b = submatrix_gap_bound(3, 1.0).unwrap();
        assert!((b - (5.0 + 13f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!(b > 4.0);
        assert!(submatrix_gap_bound(5, -1e-3).unwrap() > 8.0);
        assert!(submatrix_gap_bound(3, 0.0).is_err());
        assert!(submatrix_gap_bound(1, 1.0).is_err());
    }

    #[test]
    fn gap_bound_submatrix_is_principal() {
        for n in 2..8 {
            let t = 1.3;
            let m = structured_block(n, 2.0, t);
            let sub = m.principal_submatrix(&[0, n - 1]);
            assert_eq!(
                sub.to_rows(),
                vec![vec![t, t], vec![t, 2.0 * (n as f64 - 1.0)]]
            );
            let top = symmetric_spectrum(&sub).unwrap().values()[0];
            assert!((top - submatrix_gap_bound(n, t).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn multiset_matching() {
        assert!(unmatched_in_superset(&[1.0, 1.0], &[1.0, 2.0, 1.0 + 1e-9], 1e-8).is_empty());
        assert_eq!(
            unmatched_in_superset(&[1.0, 1.0], &[1.0, 2.0], 1e-8),
            vec![1.0]
        );
        assert_eq!(unmatched_in_superset(&[3.0], &[], 1e-8), vec![3.0]);
    }

    #[test]
    fn clustering() {
        let s = RealSpectrum::new(
            vec![2.0, 1.0 + 1e-9, 1.0, 1.0 - 1e-9, 0.5],
            SpectrumSource::Direct,
            0.0,
        );
        let c = s.clusters(1e-6);
        assert_eq!(c.iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, 3, 1]);
        assert_eq!(s.count_near(1.0, 1e-6), 3);
        assert_eq!(s.lambda(1), Some(2.0));
        assert_eq!(s.lambda(0), None);
    }

    #[test]
    fn csv_output() {
        let mut buf = Vec::new();
        gsw_spectrum(2).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "index,eigenvalue,source\n1,4,closed-form\n2,0,closed-form\n"
        );
    }
}
