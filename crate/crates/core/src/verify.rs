//! Full-graph spectra and the checks run on them: the spectral gap bound,
//! containment of the quotient spectrum, multiplicities of the even integer
//! eigenvalues for `m ≡ 0 (mod 4)`, and report-only scans of the gap.

use std::io::{self, Write};
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact;
use crate::fmt::sig12;
use crate::graph::{build_graph_with_cap, CayleyGraph, DEFAULT_VERTEX_CAP};
use crate::lanczos::{largest_eigenpair, LanczosOptions};
use crate::partition::{build_partition, quotient_empirical, quotient_formula};
use crate::perm::GroupParams;
use crate::spectrum::{
    dense_eigenvalues, mod4_guaranteed_sublist, symmetric_spectrum, unmatched_in_superset,
    RealSpectrum, SpectrumSource,
};

pub const DEFAULT_DENSE_CAP: usize = 10_000;
pub const DEFAULT_EXACT_CAP: usize = 1_000;

/// Size limits for the three expensive paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Graph construction.
    pub vertex: usize,
    /// Dense eigensolves of the adjacency matrix.
    pub dense: usize,
    /// Exact elimination over the integers.
    pub exact: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            vertex: DEFAULT_VERTEX_CAP,
            dense: DEFAULT_DENSE_CAP,
            exact: DEFAULT_EXACT_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Matching quotient eigenvalues to graph eigenvalues.
    pub containment: f64,
    /// Gap below which neighbouring eigenvalues count as one cluster.
    pub cluster: f64,
    /// Required distance of the gap below its bound, and the equality
    /// threshold used by the scans.
    pub margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            containment: 1e-7,
            cluster: 1e-6,
            margin: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyConfig {
    pub caps: Caps,
    pub tol: Tolerances,
    pub lanczos: LanczosOptions,
}

/// All eigenvalues of the adjacency matrix by a dense symmetric solve.
pub fn full_spectrum(g: &CayleyGraph, dense_cap: usize) -> Result<RealSpectrum> {
    let n = g.vertex_count();
    if n > dense_cap {
        return Err(Error::Capacity {
            what: "vertex count for a dense eigensolve",
            required: n as u128,
            cap: dense_cap as u128,
            hint: Some("top_two_eigenvalues"),
        });
    }
    let values = dense_eigenvalues(n, |i, j| {
        f64::from(u8::from(g.row(i).binary_search(&(j as u32)).is_ok()))
    })?;
    Ok(RealSpectrum::new(
        values,
        SpectrumSource::Direct,
        1e-9 * (g.degree().max(1) as f64),
    ))
}

/// `(lambda_1, lambda_2)` by Lanczos: the top eigenpair first, then the top
/// eigenvalue on the complement of its eigenvector. Valid for connected
/// graphs, where `lambda_1` is simple.
pub fn top_two_eigenvalues(g: &CayleyGraph, opts: &LanczosOptions) -> Result<(f64, f64)> {
    let dim = g.vertex_count();
    if dim < 2 {
        return Err(Error::arg("graph has fewer than two vertices"));
    }
    let opts = LanczosOptions {
        tol: opts.tol * g.degree().max(1) as f64,
        ..*opts
    };
    let apply = |x: &[f64], y: &mut [f64]| g.apply_adjacency(x, y);
    let first = largest_eigenpair(dim, apply, &[], &opts)?;
    let norm = first.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    let u: Vec<f64> = first.vector.iter().map(|x| x / norm).collect();
    let second = largest_eigenpair(dim, apply, &[u], &opts)?;
    Ok((first.value, second.value))
}

/// Multiplicity of the integer `lambda` as an adjacency eigenvalue: the
/// rational nullity of `A - lambda I`, by fraction-free elimination.
pub fn exact_integer_multiplicity(g: &CayleyGraph, lambda: i64, exact_cap: usize) -> Result<usize> {
    let n = g.vertex_count();
    if n > exact_cap {
        return Err(Error::Capacity {
            what: "vertex count for exact elimination",
            required: n as u128,
            cap: exact_cap as u128,
            hint: Some("numeric clustering of the full spectrum"),
        });
    }
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|v| {
            let mut row = vec![BigInt::from(0); n];
            for &u in g.row(v) {
                row[u as usize] = BigInt::from(1);
            }
            row[v] -= lambda;
            row
        })
        .collect();
    Ok(exact::nullity(rows))
}

/// A graph with its lazily computed dense spectrum, shared across checks.
pub struct Analysis {
    graph: CayleyGraph,
    config: VerifyConfig,
    spectrum: OnceLock<RealSpectrum>,
}

impl Analysis {
    pub fn new(p: GroupParams, config: VerifyConfig) -> Result<Self> {
        Ok(Self::from_graph(
            build_graph_with_cap(p, config.caps.vertex)?,
            config,
        ))
    }

    pub fn from_graph(graph: CayleyGraph, config: VerifyConfig) -> Self {
        Self {
            graph,
            config,
            spectrum: OnceLock::new(),
        }
    }

    pub fn graph(&self) -> &CayleyGraph {
        &self.graph
    }

    pub fn config(&self) -> &VerifyConfig {
        &self.config
    }

    pub fn full_spectrum(&self) -> Result<&RealSpectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let s = full_spectrum(&self.graph, self.config.caps.dense)?;
        Ok(self.spectrum.get_or_init(|| s))
    }

    fn dense_available(&self) -> bool {
        self.spectrum.get().is_some() || self.graph.vertex_count() <= self.config.caps.dense
    }

    /// `(lambda_1, lambda_2, method)`: dense when within the cap, else Lanczos.
    pub fn top_two(&self) -> Result<(f64, f64, Method)> {
        if self.dense_available() {
            let s = self.full_spectrum()?;
            let (Some(a), Some(b)) = (s.lambda(1), s.lambda(2)) else {
                return Err(Error::arg("graph has fewer than two vertices"));
            };
            Ok((a, b, Method::Dense))
        } else {
            let (a, b) = top_two_eigenvalues(&self.graph, &self.config.lanczos)?;
            Ok((a, b, Method::Lanczos))
        }
    }

    pub fn gap_report(&self) -> Result<GapReport> {
        let p = self.graph.params();
        if p.m() < 2 || p.n() < 2 {
            return Err(Error::arg("the gap bound is stated for m >= 2 and n >= 2"));
        }
        let (lambda1, lambda2, method) = self.top_two()?;
        let bound = if p.m() == 2 { 1.0 } else { 2.0 };
        let gap = lambda1 - lambda2;
        let degree = self.graph.degree() as f64;
        Ok(GapReport {
            m: p.m(),
            n: p.n(),
            degree,
            lambda1,
            lambda2,
            gap,
            bound,
            margin: bound - gap,
            passed: gap < bound,
            margin_tol: self.config.tol.margin,
            clears_margin: gap < bound - self.config.tol.margin,
            lambda1_is_degree: (lambda1 - degree).abs() <= 1e-9 * degree.max(1.0),
            method,
        })
    }

    pub fn containment_report(&self) -> Result<ContainmentReport> {
        let p = self.graph.params();
        let quotient = symmetric_spectrum(&quotient_formula(p)?.matrix().map(|x| x as f64))?;
        let graph = self.full_spectrum()?;
        let unmatched = unmatched_in_superset(
            quotient.values(),
            graph.values(),
            self.config.tol.containment,
        );
        Ok(ContainmentReport {
            m: p.m(),
            n: p.n(),
            quotient,
            passed: unmatched.is_empty(),
            unmatched,
            tol: self.config.tol.containment,
        })
    }

    pub fn multiplicity_report(&self) -> Result<MultiplicityReport> {
        let p = self.graph.params();
        if !p.m().is_multiple_of(4) || p.n() < 2 {
            return Err(Error::arg(format!(
                "multiplicity bounds need m ≡ 0 (mod 4) and n >= 2, got {p}"
            )));
        }
        let n = p.n();
        let exact = self.graph.vertex_count() <= self.config.caps.exact;
        let mut entries = Vec::with_capacity(n - 1);
        for k in 1..n {
            let required = if k == n / 2 { 2 } else { 3 };
            let eigenvalue = 2 * k as i64;
            let (computed, method) = if exact {
                (
                    exact_integer_multiplicity(&self.graph, eigenvalue, self.config.caps.exact)?,
                    MultiplicityMethod::ExactNullity,
                )
            } else {
                (
                    self.numeric_multiplicity(eigenvalue as f64)?,
                    MultiplicityMethod::NumericCluster,
                )
            };
            entries.push(MultiplicityEntry {
                k,
                eigenvalue,
                required,
                computed,
                method,
                passed: computed >= required,
            });
        }
        Ok(MultiplicityReport {
            m: p.m(),
            n,
            entries,
        })
    }

    /// Size of the eigenvalue cluster containing `x`, or 0 if none is near.
    pub fn numeric_multiplicity(&self, x: f64) -> Result<usize> {
        let tol = self.config.tol.cluster;
        Ok(self
            .full_spectrum()?
            .clusters(tol)
            .into_iter()
            .find(|(centre, _)| (centre - x).abs() <= tol)
            .map_or(0, |(_, size)| size))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiplicityMethod {
    ExactNullity,
    NumericCluster,
}

/// `lambda_1 - lambda_2` against the bound 1 (two colours) or 2.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub m: usize,
    pub n: usize,
    pub degree: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
    pub bound: f64,
    pub margin: f64,
    /// `gap < bound`.
    pub passed: bool,
    /// Margin tolerance the report was made with.
    pub margin_tol: f64,
    /// `gap < bound - margin_tol`.
    pub clears_margin: bool,
    pub lambda1_is_degree: bool,
    pub method: Method,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContainmentReport {
    pub m: usize,
    pub n: usize,
    pub quotient: RealSpectrum,
    pub unmatched: Vec<f64>,
    pub passed: bool,
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityEntry {
    pub k: usize,
    pub eigenvalue: i64,
    pub required: usize,
    pub computed: usize,
    pub method: MultiplicityMethod,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityReport {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<MultiplicityEntry>,
}

impl MultiplicityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// Empirically counted quotient against the block-circulant formula.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientFormulaReport {
    pub m: usize,
    pub n: usize,
    pub order: usize,
    /// Entries where the two integer matrices differ.
    pub mismatches: usize,
    /// Set when the partition was not equitable at all.
    pub failure: Option<String>,
}

impl QuotientFormulaReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.mismatches == 0
    }
}

pub fn verify_gap(p: GroupParams, config: &VerifyConfig) -> Result<GapReport> {
    Analysis::new(p, *config)?.gap_report()
}

pub fn verify_quotient_containment(
    p: GroupParams,
    config: &VerifyConfig,
) -> Result<ContainmentReport> {
    Analysis::new(p, *config)?.containment_report()
}

pub fn verify_multiplicity(p: GroupParams, config: &VerifyConfig) -> Result<MultiplicityReport> {
    if !p.m().is_multiple_of(4) {
        return Err(Error::arg(format!("m = {} is not divisible by 4", p.m())));
    }
    Analysis::new(p, *config)?.multiplicity_report()
}

/// Builds the graph, counts the quotient and compares it with the formula.
pub fn verify_quotient_formula(
    p: GroupParams,
    config: &VerifyConfig,
) -> Result<QuotientFormulaReport> {
    let formula = quotient_formula(p)?;
    let g = build_graph_with_cap(p, config.caps.vertex)?;
    let part = build_partition(&g)?;
    let (mismatches, failure) = match quotient_empirical(&g, &part) {
        Ok(q) => (
            q.matrix()
                .as_slice()
                .iter()
                .zip(formula.matrix().as_slice())
                .filter(|(a, b)| a != b)
                .count(),
            None,
        ),
        Err(e @ Error::NotEquitable { .. }) => (0, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(QuotientFormulaReport {
        m: p.m(),
        n: p.n(),
        order: formula.order(),
        mismatches,
        failure,
    })
}

/// Mod-4 sublist against the decomposed quotient spectrum.
pub fn mod4_sublist_unmatched(p: GroupParams, tol: f64) -> Result<Vec<f64>> {
    let sub = mod4_guaranteed_sublist(p)?;
    let full = crate::spectrum::block_circulant_spectrum(p)?;
    Ok(unmatched_in_superset(sub.values(), full.values(), tol))
}

/// One `(m, n)` point of the graph-gap versus quotient-gap comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureRecord {
    pub m: usize,
    pub n: usize,
    pub vertices: usize,
    pub graph_gap: f64,
    pub quotient_gap: Option<f64>,
    pub abs_diff: Option<f64>,
    pub equal: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult<T> {
    pub rows: Vec<T>,
    /// Why the scan stopped early, if it did.
    pub note: Option<String>,
}

/// Compares the graph gap with the quotient gap for `n = 2..=n_max`.
/// Graphs above the dense cap end the scan. Nothing is asserted.
pub fn conjecture2_scan(
    m: usize,
    n_max: usize,
    config: &VerifyConfig,
) -> Result<ScanResult<ConjectureRecord>> {
    let mut rows = Vec::new();
    let mut note = None;
    for n in 2..=n_max {
        let p = GroupParams::new(m, n)?;
        match p.order() {
            Some(v) if v <= config.caps.dense.min(config.caps.vertex) => {}
            other => {
                note = Some(format!(
                    "stopped at n={n}: {} vertices exceeds the scan cap {}",
                    other.map_or_else(|| "too many".to_string(), |v| v.to_string()),
                    config.caps.dense.min(config.caps.vertex)
                ));
                break;
            }
        }
        let g = build_graph_with_cap(p, config.caps.vertex)?;
        let (l1, l2) = top_two_eigenvalues(&g, &config.lanczos)?;
        let graph_gap = l1 - l2;
        let quotient_gap = if m >= 2 {
            let q = symmetric_spectrum(&quotient_formula(p)?.matrix().map(|x| x as f64))?;
            q.gap()
        } else {
            None
        };
        let abs_diff = quotient_gap.map(|q| (graph_gap - q).abs());
        rows.push(ConjectureRecord {
            m,
            n,
            vertices: g.vertex_count(),
            graph_gap,
            quotient_gap,
            abs_diff,
            equal: abs_diff.map(|d| d <= config.tol.margin),
        });
    }
    Ok(ScanResult { rows, note })
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendRow {
    pub m: usize,
    pub n: usize,
    pub quotient_gap: f64,
    pub bound_minus_gap: f64,
    /// Whether the gap grew relative to `n - 1`; absent on the first row.
    pub gap_increased: Option<bool>,
}

/// Quotient gap for `n = 2..=n_max` as a finite-size trend toward the bound.
pub fn gap_trend(m: usize, n_max: usize) -> Result<Vec<TrendRow>> {
    if m < 2 {
        return Err(Error::arg("gap trend needs m >= 2"));
    }
    let bound = if m == 2 { 1.0 } else { 2.0 };
    let mut rows: Vec<TrendRow> = Vec::new();
    for n in 2..=n_max {
        let q = quotient_formula(GroupParams::new(m, n)?)?;
        let gap = symmetric_spectrum(&q.matrix().map(|x| x as f64))?
            .gap()
            .expect("order >= 2");
        let gap_increased = rows.last().map(|prev| gap > prev.quotient_gap);
        rows.push(TrendRow {
            m,
            n,
            quotient_gap: gap,
            bound_minus_gap: bound - gap,
            gap_increased,
        });
    }
    Ok(rows)
}

/// One line of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub m: usize,
    pub n: usize,
    pub check: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub passed: bool,
}

impl CheckRow {
    fn new(
        m: usize,
        n: usize,
        check: impl Into<String>,
        value: f64,
        bound: Option<f64>,
        passed: bool,
    ) -> Self {
        Self {
            m,
            n,
            check: check.into(),
            value,
            bound,
            passed,
        }
    }
}

/// Reports that flatten into [`CheckRow`]s.
pub trait Checks {
    fn rows(&self) -> Vec<CheckRow>;

    /// True iff every asserted check passed.
    fn all_passed(&self) -> bool;
}

impl Checks for GapReport {
    fn rows(&self) -> Vec<CheckRow> {
        let (m, n) = (self.m, self.n);
        vec![
            CheckRow::new(
                m,
                n,
                "lambda1",
                self.lambda1,
                Some(self.degree),
                self.lambda1_is_degree,
            ),
            CheckRow::new(m, n, "lambda2", self.lambda2, None, true),
            CheckRow::new(m, n, "gap", self.gap, Some(self.bound), self.passed),
            CheckRow::new(
                m,
                n,
                "gap-margin",
                self.margin,
                Some(self.margin_tol),
                self.clears_margin,
            ),
        ]
    }

    fn all_passed(&self) -> bool {
        self.passed && self.lambda1_is_degree
    }
}

impl Checks for ContainmentReport {
    fn rows(&self) -> Vec<CheckRow> {
        let mut rows = vec![CheckRow::new(
            self.m,
            self.n,
            "quotient-eigenvalues-matched",
            (self.quotient.len() - self.unmatched.len()) as f64,
            Some(self.quotient.len() as f64),
            self.passed,
        )];
        rows.extend(
            self.unmatched
                .iter()
                .map(|&x| CheckRow::new(self.m, self.n, "unmatched", x, None, false)),
        );
        rows
    }

    fn all_passed(&self) -> bool {
        self.passed
    }
}

impl Checks for MultiplicityReport {
    fn rows(&self) -> Vec<CheckRow> {
        self.entries
            .iter()
            .map(|e| {
                let method = match e.method {
                    MultiplicityMethod::ExactNullity => "exact",
                    MultiplicityMethod::NumericCluster => "numeric",
                };
                CheckRow::new(
                    self.m,
                    self.n,
                    format!("mult({})[{method}]", e.eigenvalue),
                    e.computed as f64,
                    Some(e.required as f64),
                    e.passed,
                )
            })
            .collect()
    }

    fn all_passed(&self) -> bool {
        self.passed()
    }
}

impl Checks for QuotientFormulaReport {
    fn rows(&self) -> Vec<CheckRow> {
        vec![CheckRow::new(
            self.m,
            self.n,
            "quotient-formula-mismatches",
            self.mismatches as f64,
            Some(0.0),
            self.passed(),
        )]
    }

    fn all_passed(&self) -> bool {
        self.passed()
    }
}

/// `m,n,check,value,bound,passed` with a header line.
pub fn write_checks_csv<W: Write>(rows: &[CheckRow], w: &mut W) -> io::Result<()> {
    writeln!(w, "m,n,check,value,bound,passed")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.m,
            r.n,
            r.check,
            sig12(r.value),
            r.bound.map(sig12).unwrap_or_default(),
            r.passed
        )?;
    }
    Ok(())
}

pub fn write_checks_text<W: Write>(rows: &[CheckRow], w: &mut W) -> io::Result<()> {
    for r in rows {
        let bound = r
            .bound
            .map(|b| format!(" (bound {})", sig12(b)))
            .unwrap_or_default();
        writeln!(
            w,
            "m={} n={} {:<32} {}{} {}",
            r.m,
            r.n,
            r.check,
            sig12(r.value),
            bound,
            if r.passed { "PASS" } else { "FAIL" }
        )?;
    }
    Ok(())
}

pub fn write_conjecture_csv<W: Write>(
    scan: &ScanResult<ConjectureRecord>,
    w: &mut W,
) -> io::Result<()> {
    writeln!(w, "m,n,vertices,graph_gap,quotient_gap,abs_diff,equal")?;
    let opt = |x: Option<f64>| x.map(sig12).unwrap_or_default();
    for r in &scan.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.m,
            r.n,
            r.vertices,
            sig12(r.graph_gap),
            opt(r.quotient_gap),
            opt(r.abs_diff),
            r.equal.map(|e| e.to_string()).unwrap_or_default()
        )?;
    }
    if let Some(note) = &scan.note {
        writeln!(w, "# {note}")?;
    }
    Ok(())
}

pub fn write_trend_csv<W: Write>(rows: &[TrendRow], w: &mut W) -> io::Result<()> {
    writeln!(w, "m,n,quotient_gap,bound_minus_gap,gap_increased")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.m,
            r.n,
            sig12(r.quotient_gap),
            sig12(r.bound_minus_gap),
            r.gap_increased.map(|b| b.to_string()).unwrap_or_default()
        )?;
    }
    Ok(())
}
