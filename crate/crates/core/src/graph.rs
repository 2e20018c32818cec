//! The generalised pancake graph `P_m(n) = Cay(S(m, n), R_m)`.

use std::collections::VecDeque;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{reverse_block, GroupParams, Indexer, Sign, VertexIndex};

/// Default upper bound on the vertex count for adjacency construction.
pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

/// A prefix reversal `r_k^eps` used as a Cayley generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub k: usize,
    pub sign: Sign,
}

/// The generator set `R_m`, ordered by `k` ascending with `+` before `-`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet(Vec<Generator>);

impl GeneratorSet {
    pub fn as_slice(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Each generator's inverse `r_k^{-eps}` is in the set (the same element when `m <= 2`).
    pub fn is_inverse_closed(&self, m: usize) -> bool {
        self.0.iter().all(|g| {
            m <= 2
                || self.0.contains(&Generator {
                    k: g.k,
                    sign: g.sign.flip(),
                })
        })
    }
}

/// `R_m`: for `m = 1` the flips `r_2..r_n` (`r_1` is trivial), for `m = 2` one
/// flip per `k`, and for `m >= 3` both signs per `k`.
pub fn generators(p: GroupParams) -> GeneratorSet {
    let n = p.n();
    let set = match p.m() {
        1 => (2..=n)
            .map(|k| Generator {
                k,
                sign: Sign::Plus,
            })
            .collect(),
        2 => (1..=n)
            .map(|k| Generator {
                k,
                sign: Sign::Plus,
            })
            .collect(),
        _ => (1..=n)
            .flat_map(|k| {
                [Sign::Plus, Sign::Minus]
                    .into_iter()
                    .map(move |sign| Generator { k, sign })
            })
            .collect(),
    };
    GeneratorSet(set)
}

/// Immutable regular graph in CSR layout with uniform row stride `degree`.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    params: GroupParams,
    generators: GeneratorSet,
    degree: usize,
    vertex_count: usize,
    adjacency: Vec<u32>,
}

/// Builds `P_m(n)` with the default vertex cap.
pub fn build_graph(p: GroupParams) -> Result<CayleyGraph> {
    build_graph_with_cap(p, DEFAULT_VERTEX_CAP)
}

/// Builds `P_m(n)` by unranking every vertex, applying each generator and
/// ranking the image. Rows are sorted ascending.
pub fn build_graph_with_cap(p: GroupParams, vertex_cap: usize) -> Result<CayleyGraph> {
    let cap = vertex_cap.min(u32::MAX as usize);
    let indexer = Indexer::new(p, cap).map_err(|e| match e {
        Error::Capacity { required, cap, .. } => Error::Capacity {
            what: "vertex count for graph construction",
            required,
            cap,
            hint: None,
        },
        other => other,
    })?;
    let gens = generators(p);
    let degree = gens.len();
    let vertex_count = indexer.order();
    let mut adjacency = vec![0u32; vertex_count * degree];

    if degree > 0 {
        adjacency
            .par_chunks_mut(degree)
            .enumerate()
            .try_for_each_init(
                || {
                    (
                        vec![0usize; p.n()],
                        vec![0usize; p.n()],
                        vec![0usize; p.n()],
                        vec![0usize; p.n()],
                    )
                },
                |(psi, chi, psi2, chi2), (v, row)| {
                    indexer.unrank_into(v, psi, chi);
                    for (slot, g) in row.iter_mut().zip(gens.as_slice()) {
                        psi2.copy_from_slice(psi);
                        chi2.copy_from_slice(chi);
                        reverse_block(psi2, chi2, 0, g.k, g.sign.shift(p.m()), p.m());
                        *slot = indexer.rank_parts(psi2, chi2) as u32;
                    }
                    row.sort_unstable();
                    if row.windows(2).any(|w| w[0] == w[1]) || row.contains(&(v as u32)) {
                        return Err(Error::Unsupported(format!(
                            "generator images of vertex {v} are not distinct non-loops in P_{}({})",
                            p.m(),
                            p.n()
                        )));
                    }
                    Ok(())
                },
            )?;
    }

    Ok(CayleyGraph {
        params: p,
        generators: gens,
        degree,
        vertex_count,
        adjacency,
    })
}

impl CayleyGraph {
    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count * self.degree / 2
    }

    /// Adjacency row of `v` as raw indices. Panics if `v` is out of range.
    pub fn row(&self, v: usize) -> &[u32] {
        &self.adjacency[v * self.degree..(v + 1) * self.degree]
    }

    pub fn neighbors(&self, v: VertexIndex) -> Result<Vec<VertexIndex>> {
        if v.0 >= self.vertex_count {
            return Err(Error::arg(format!(
                "vertex {} outside [0, {})",
                v.0, self.vertex_count
            )));
        }
        Ok(self
            .row(v.0)
            .iter()
            .map(|&u| VertexIndex(u as usize))
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.vertex_count).all(|v| {
            self.row(v)
                .iter()
                .all(|&u| self.row(u as usize).binary_search(&(v as u32)).is_ok())
        })
    }

    /// Number of vertices reached by a BFS from vertex 0.
    pub fn reachable_from_origin(&self) -> usize {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in self.row(v) {
                let u = u as usize;
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.reachable_from_origin() == self.vertex_count
    }

    /// `y = A x` for the adjacency matrix `A`.
    pub fn apply_adjacency(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(v, out)| {
            *out = self.row(v).iter().map(|&u| x[u as usize]).sum();
        });
    }

    /// Writes the edge list: a `m n vcount degree` header, then one `u v`
    /// line per edge with `u < v`, in ascending lexicographic order.
    pub fn write_edge_list<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(
            w,
            "{} {} {} {}",
            self.params.m(),
            self.params.n(),
            self.vertex_count,
            self.degree
        )?;
        for v in 0..self.vertex_count {
            for &u in self.row(v).iter().filter(|&&u| u as usize > v) {
                writeln!(w, "{v} {u}")?;
            }
        }
        Ok(())
    }
}
