//! The partition of `P_m(n)` by position and colour of the letter 1, and its
//! quotient matrix.
//!
//! Cell `V_{i,j}` holds the elements whose letter 1 sits at position `j` with
//! colour `i`. Cells are ordered lexicographically in `(i, j)`, so cell
//! `(i, j)` has index `i*n + (j-1)` and the quotient matrix is an `m x m`
//! grid of `n x n` blocks. With this ordering the quotient is block
//! circulant: `circ(D, E)` for two colours and `circ(2D, E, O, ..., O, E)`
//! otherwise, with `D = diag(0, 1, ..., n-1)` and `E` the 0/1 matrix with
//! ones where `i + j <= n + 1`.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::CayleyGraph;
use crate::matrix::IntMatrix;
use crate::perm::{ColouredPermutation, GroupParams, Indexer};

/// Label `(i, j)` of a cell: colour `i` in `0..m`, position `j` in `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellLabel {
    pub colour: usize,
    pub position: usize,
}

impl CellLabel {
    pub fn index(&self, n: usize) -> usize {
        self.colour * n + self.position - 1
    }
}

/// Cell of `sigma`: position `j` of the letter 1 and its colour `chi(j)`.
pub fn cell_index(sigma: &ColouredPermutation) -> CellLabel {
    let j = sigma.position_of(1);
    CellLabel {
        colour: sigma.colour(j),
        position: j,
    }
}

/// `D_n = diag(0, 1, ..., n-1)`.
pub fn d_block(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, n, |i, j| if i == j { i as i64 } else { 0 })
}

/// `E_n` with `e_ij = 1` iff `i + j <= n + 1` (1-based), i.e. `i + j <= n - 1` 0-based.
pub fn e_block(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, n, |i, j| i64::from(i + j < n))
}

/// A partition of the vertex set into cells.
#[derive(Debug, Clone)]
pub struct Partition {
    cells: Vec<Vec<u32>>,
    labels: Vec<Option<CellLabel>>,
    cell_of: Vec<u32>,
}

impl Partition {
    /// Validates that `cells` are disjoint and cover `0..vertex_count`.
    pub fn from_cells(vertex_count: usize, cells: Vec<Vec<u32>>) -> Result<Self> {
        let mut cell_of = vec![u32::MAX; vertex_count];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                let slot = cell_of
                    .get_mut(v as usize)
                    .ok_or_else(|| Error::arg(format!("vertex {v} out of range")))?;
                if *slot != u32::MAX {
                    return Err(Error::arg(format!("vertex {v} lies in two cells")));
                }
                *slot = c as u32;
            }
        }
        if let Some(v) = cell_of.iter().position(|&c| c == u32::MAX) {
            return Err(Error::arg(format!("vertex {v} is in no cell")));
        }
        let labels = vec![None; cells.len()];
        Ok(Self {
            cells,
            labels,
            cell_of,
        })
    }

    /// The one-cell partition `{V}`.
    pub fn trivial(g: &CayleyGraph) -> Self {
        let n = g.vertex_count();
        Self {
            cells: vec![(0..n as u32).collect()],
            labels: vec![None],
            cell_of: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    pub fn label(&self, cell: usize) -> Option<CellLabel> {
        self.labels[cell]
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v] as usize
    }
}

/// Builds the cells `V_{i,j}` of `P_m(n)` in lexicographic `(i, j)` order.
pub fn build_partition(g: &CayleyGraph) -> Result<Partition> {
    let p = g.params();
    if p.m() < 2 {
        return Err(Error::Unsupported(
            "the letter-1 partition is only defined for m >= 2".into(),
        ));
    }
    let (m, n) = (p.m(), p.n());
    let indexer = Indexer::new(p, g.vertex_count())?;
    let mut psi = vec![0; n];
    let mut chi = vec![0; n];
    let mut cells = vec![Vec::new(); m * n];
    let mut cell_of = vec![0u32; g.vertex_count()];
    for v in 0..g.vertex_count() {
        indexer.unrank_into(v, &mut psi, &mut chi);
        let pos = psi.iter().position(|&l| l == 0).expect("letter 1 present");
        let c = chi[pos] * n + pos;
        cells[c].push(v as u32);
        cell_of[v] = c as u32;
    }
    let labels = (0..m * n)
        .map(|c| {
            Some(CellLabel {
                colour: c / n,
                position: c % n + 1,
            })
        })
        .collect();
    Ok(Partition {
        cells,
        labels,
        cell_of,
    })
}

/// Integer quotient matrix of an equitable partition.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientMatrix {
    params: GroupParams,
    matrix: IntMatrix,
}

impl QuotientMatrix {
    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.matrix[(r, c)]
    }

    /// The `n x n` block in block-row `bi`, block-column `bj`. Only meaningful
    /// for the `mn x mn` quotient of the letter-1 partition.
    pub fn block(&self, bi: usize, bj: usize) -> IntMatrix {
        let n = self.params.n();
        IntMatrix::from_fn(n, n, |a, b| self.matrix[(bi * n + a, bj * n + b)])
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.order())
            .map(|r| self.matrix.row(r).iter().sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix.is_symmetric()
    }

    /// CSV of integers, row-major, preceded by `# Q m=<m> n=<n> order=<mn>`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(
            w,
            "# Q m={} n={} order={}",
            self.params.m(),
            self.params.n(),
            self.order()
        )?;
        for r in 0..self.order() {
            let line: Vec<String> = self.matrix.row(r).iter().map(i64::to_string).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Counts `|N(u) ∩ cell|` for every vertex `u` of every cell and returns the
/// quotient matrix if each count is constant over the source cell.
pub fn quotient_empirical(g: &CayleyGraph, partition: &Partition) -> Result<QuotientMatrix> {
    if partition.cell_of.len() != g.vertex_count() {
        return Err(Error::arg(format!(
            "partition covers {} vertices, graph has {}",
            partition.cell_of.len(),
            g.vertex_count()
        )));
    }
    let k = partition.len();
    let rows: Vec<Vec<i64>> = partition
        .cells
        .par_iter()
        .enumerate()
        .map(|(source, cell)| {
            let mut reference: Option<(usize, Vec<usize>)> = None;
            let mut counts = vec![0usize; k];
            for &u in cell {
                counts.iter_mut().for_each(|c| *c = 0);
                for &w in g.row(u as usize) {
                    counts[partition.cell_of(w as usize)] += 1;
                }
                match &reference {
                    None => reference = Some((u as usize, counts.clone())),
                    Some((first, expected)) => {
                        if let Some(target) = (0..k).find(|&t| counts[t] != expected[t]) {
                            return Err(Error::NotEquitable {
                                source_cell: source,
                                target_cell: target,
                                witness_a: *first,
                                count_a: expected[target],
                                witness_b: u as usize,
                                count_b: counts[target],
                            });
                        }
                    }
                }
            }
            let row = reference.map_or_else(|| vec![0; k], |(_, r)| r);
            Ok(row.into_iter().map(|c| c as i64).collect())
        })
        .collect::<Result<_>>()?;
    Ok(QuotientMatrix {
        params: g.params(),
        matrix: IntMatrix::from_rows(&rows),
    })
}

/// Assembles the block-circulant quotient directly from `D_n` and `E_n`.
pub fn quotient_formula(p: GroupParams) -> Result<QuotientMatrix> {
    let (m, n) = (p.m(), p.n());
    if m < 2 {
        return Err(Error::Unsupported(
            "the quotient formula requires m >= 2".into(),
        ));
    }
    let diag_scale = if m == 2 { 1 } else { 2 };
    let d = d_block(n);
    let e = e_block(n);
    let matrix = IntMatrix::from_fn(m * n, m * n, |r, c| {
        let (bi, a) = (r / n, r % n);
        let (bj, b) = (c / n, c % n);
        let offset = (bj + m - bi) % m;
        if offset == 0 {
            diag_scale * d[(a, b)]
        } else if offset == 1 || offset == m - 1 {
            e[(a, b)]
        } else {
            0
        }
    });
    Ok(QuotientMatrix { params: p, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::perm::Sign;

    fn gp(m: usize, n: usize) -> GroupParams {
        GroupParams::new(m, n).unwrap()
    }

    const Q22: [[i64; 4]; 4] = [[0, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 0], [1, 0, 0, 1]];

    fn rows_of(q: &QuotientMatrix) -> Vec<Vec<i64>> {
        q.matrix().to_rows()
    }

    #[test]
    fn structural_blocks() {
        let e = e_block(4);
        assert_eq!(
            e.to_rows(),
            vec![
                vec![1, 1, 1, 1],
                vec![1, 1, 1, 0],
                vec![1, 1, 0, 0],
                vec![1, 0, 0, 0]
            ]
        );
        assert!(e.is_symmetric());
        for i in 0..4 {
            assert_eq!(e.row(i).iter().sum::<i64>(), 4 - i as i64);
        }
        assert_eq!(
            d_block(3).to_rows(),
            vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]
        );
    }

    #[test]
    fn cell_index_examples() {
        let id = ColouredPermutation::identity(gp(3, 4));
        assert_eq!(
            cell_index(&id),
            CellLabel {
                colour: 0,
                position: 1
            }
        );
        let s = ColouredPermutation::parse(gp(4, 3), "2^0,1^3,3^1").unwrap();
        assert_eq!(
            cell_index(&s),
            CellLabel {
                colour: 3,
                position: 2
            }
        );
    }

    #[test]
    fn prefix_flip_moves_letter_one() {
        let p = gp(5, 4);
        let s = ColouredPermutation::parse(p, "3^1,1^2,4^0,2^4").unwrap();
        let CellLabel {
            colour: i,
            position: j,
        } = cell_index(&s);
        for k in j..=4 {
            let r = s.prefix_reversal(k, Sign::Plus).unwrap();
            assert_eq!(
                cell_index(&r),
                CellLabel {
                    colour: (i + 1) % 5,
                    position: k - j + 1
                }
            );
        }
        for k in 1..j {
            assert_eq!(
                cell_index(&s.prefix_reversal(k, Sign::Minus).unwrap()),
                cell_index(&s)
            );
        }
    }

    #[test]
    fn cell_sizes() {
        for (m, n, cells, size) in [(2, 2, 4, 2), (3, 3, 9, 18), (4, 2, 8, 4)] {
            let g = build_graph(gp(m, n)).unwrap();
            let part = build_partition(&g).unwrap();
            assert_eq!(part.len(), cells);
            assert!(part.cells().iter().all(|c| c.len() == size));
        }
        let g = build_graph(gp(1, 3)).unwrap();
        assert!(matches!(build_partition(&g), Err(Error::Unsupported(_))));
    }

    #[test]
    fn quotient_of_burnt_pancake_p2() {
        let g = build_graph(gp(2, 2)).unwrap();
        let part = build_partition(&g).unwrap();
        let q = quotient_empirical(&g, &part).unwrap();
        let expected: Vec<Vec<i64>> = Q22.iter().map(|r| r.to_vec()).collect();
        assert_eq!(rows_of(&q), expected);
        assert_eq!(rows_of(&quotient_formula(gp(2, 2)).unwrap()), expected);
    }

    #[test]
    fn trivial_partition_gives_degree() {
        for (m, n) in [(2, 3), (3, 2), (1, 4)] {
            let g = build_graph(gp(m, n)).unwrap();
            let q = quotient_empirical(&g, &Partition::trivial(&g)).unwrap();
            assert_eq!(rows_of(&q), vec![vec![g.degree() as i64]]);
        }
    }

    #[test]
    fn formula_shapes() {
        let q = quotient_formula(gp(4, 2)).unwrap();
        assert_eq!(q.order(), 8);
        assert_eq!(q.block(0, 0).to_rows(), vec![vec![0, 0], vec![0, 2]]);
        assert_eq!(q.block(0, 1), e_block(2));
        assert_eq!(q.block(0, 3), e_block(2));
        assert_eq!(q.block(0, 2), IntMatrix::zeros(2, 2));
        assert_eq!(q.block(2, 1), e_block(2));

        let tri = quotient_formula(gp(3, 1)).unwrap();
        assert_eq!(
            rows_of(&tri),
            vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );

        assert!(matches!(
            quotient_formula(gp(1, 3)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn empirical_matches_formula_on_p3_2() {
        let g = build_graph(gp(3, 2)).unwrap();
        let q = quotient_empirical(&g, &build_partition(&g).unwrap()).unwrap();
        assert_eq!(q, quotient_formula(gp(3, 2)).unwrap());
    }

    #[test]
    fn non_equitable_partition_is_reported() {
        let g = build_graph(gp(2, 2)).unwrap();
        // {0} vs the rest: vertex 0 has no neighbours in its own cell, but
        // vertex 2 (not adjacent to 0) and vertex 1 (adjacent) differ.
        let part = Partition::from_cells(8, vec![vec![0], (1..8).collect()]).unwrap();
        match quotient_empirical(&g, &part) {
            Err(Error::NotEquitable {
                source_cell,
                count_a,
                count_b,
                ..
            }) => {
                assert_eq!(source_cell, 1);
                assert_ne!(count_a, count_b);
            }
            other => panic!("expected NotEquitable, got {other:?}"),
        }
        assert!(Partition::from_cells(8, vec![vec![0, 1], (1..8).collect()]).is_err());
        assert!(Partition::from_cells(8, vec![vec![0], (1..7).collect()]).is_err());
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        quotient_formula(gp(2, 2))
            .unwrap()
            .write_csv(&mut buf)
            .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# Q m=2 n=2 order=4\n0,0,1,1\n0,1,1,0\n1,1,0,0\n1,0,0,1\n"
        );
    }
}
