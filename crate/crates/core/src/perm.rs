//! Coloured permutations: elements of the wreath product `Z_m wr S_n`.
//!
//! An element is a pair `(chi, psi)` where `psi` is a permutation of `1..=n`
//! and `chi` assigns a colour in `0..m` to every position. The one-line
//! notation writes position `t` as `psi(t)^chi(t)`, e.g. `(2^1,1^0,3^2)`.
//!
//! Positions and letters are 1-based at the API boundary; storage is 0-based.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Number of colours `m` and number of letters `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GroupParams {
    m: usize,
    n: usize,
}

impl GroupParams {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::arg("number of colours m must be at least 1"));
        }
        if n == 0 {
            return Err(Error::arg("number of letters n must be at least 1"));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m^n`, the number of colour functions, or `None` on overflow.
    pub fn colour_count(&self) -> Option<usize> {
        (0..self.n).try_fold(1usize, |acc, _| acc.checked_mul(self.m))
    }

    /// Group order `m^n * n!`, or `None` if it does not fit in a `usize`.
    pub fn order(&self) -> Option<usize> {
        let fact = (2..=self.n).try_fold(1usize, |acc, k| acc.checked_mul(k))?;
        self.colour_count()?.checked_mul(fact)
    }

    /// Group order, rejected when above `cap` (or unrepresentable).
    pub fn checked_order(&self, cap: usize) -> Result<usize> {
        match self.order() {
            Some(order) if order <= cap => Ok(order),
            other => Err(Error::Capacity {
                what: "group order",
                required: other.map_or_else(|| self.exact_order(), |o| o as u128),
                cap: cap as u128,
                hint: None,
            }),
        }
    }

    // Only used for error messages; saturates at u128::MAX.
    fn exact_order(&self) -> u128 {
        let mut acc: u128 = 1;
        for k in 1..=self.n as u128 {
            acc = acc.saturating_mul(k).saturating_mul(self.m as u128);
        }
        acc
    }

    /// Degree of the generalised pancake graph on these parameters.
    pub fn degree(&self) -> usize {
        match self.m {
            1 => self.n - 1,
            2 => self.n,
            _ => 2 * self.n,
        }
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} n={}", self.m, self.n)
    }
}

/// Sign `epsilon` of a reversal: which way the colours of the block are shifted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Colour shift as a canonical residue in `0..m`.
    pub fn shift(self, m: usize) -> usize {
        match self {
            Sign::Plus => 1 % m,
            Sign::Minus => (m - 1) % m,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Index of a group element in `[0, m^n * n!)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexIndex(pub usize);

/// An element `(chi, psi)` of `S(m, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColouredPermutation {
    m: usize,
    // 0-based letters by 0-based position
    psi: Vec<usize>,
    chi: Vec<usize>,
}

impl ColouredPermutation {
    /// Builds an element from 1-based letters and colours, validating both.
    pub fn new(p: GroupParams, letters: &[usize], colours: &[usize]) -> Result<Self> {
        let n = p.n();
        if letters.len() != n || colours.len() != n {
            return Err(Error::arg(format!(
                "expected {n} letters and colours, got {} and {}",
                letters.len(),
                colours.len()
            )));
        }
        let mut seen = vec![false; n];
        for &l in letters {
            if l == 0 || l > n || seen[l - 1] {
                return Err(Error::arg(format!(
                    "letters {letters:?} are not a permutation of 1..={n}"
                )));
            }
            seen[l - 1] = true;
        }
        if let Some(&c) = colours.iter().find(|&&c| c >= p.m()) {
            return Err(Error::arg(format!("colour {c} outside 0..{}", p.m())));
        }
        Ok(Self {
            m: p.m(),
            psi: letters.iter().map(|l| l - 1).collect(),
            chi: colours.to_vec(),
        })
    }

    pub fn identity(p: GroupParams) -> Self {
        Self {
            m: p.m(),
            psi: (0..p.n()).collect(),
            chi: vec![0; p.n()],
        }
    }

    /// Parses one-line notation such as `(2^1,1^0,3^2)`; a missing `^c` means colour 0.
    pub fn parse(p: GroupParams, s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut letters = Vec::new();
        let mut colours = Vec::new();
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (l, c) = tok.split_once('^').unwrap_or((tok, "0"));
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::arg(format!("bad token {tok:?} in {s:?}")))
            };
            letters.push(parse(l)?);
            colours.push(parse(c)?);
        }
        Self::new(p, &letters, &colours)
    }

    pub fn params(&self) -> GroupParams {
        GroupParams {
            m: self.m,
            n: self.psi.len(),
        }
    }

    pub fn n(&self) -> usize {
        self.psi.len()
    }

    /// `psi(t)` for a 1-based position `t`.
    pub fn letter(&self, t: usize) -> usize {
        self.psi[t - 1] + 1
    }

    /// `chi(t)` for a 1-based position `t`.
    pub fn colour(&self, t: usize) -> usize {
        self.chi[t - 1]
    }

    /// Letters in one-line order, 1-based.
    pub fn letters(&self) -> Vec<usize> {
        self.psi.iter().map(|l| l + 1).collect()
    }

    pub fn colours(&self) -> &[usize] {
        &self.chi
    }

    /// 1-based position of letter `letter`, i.e. `psi^{-1}(letter)`.
    pub fn position_of(&self, letter: usize) -> usize {
        self.psi
            .iter()
            .position(|&l| l + 1 == letter)
            .expect("letter in range")
            + 1
    }

    /// The generalised substring reversal `s_{i,j}^eps`.
    ///
    /// Positions `i..=j` are reversed and `eps` is added (mod `m`) to their
    /// colours; everything outside the block is untouched.
    pub fn substring_reversal(&self, i: usize, j: usize, eps: Sign) -> Result<Self> {
        let n = self.n();
        if i == 0 || i > j || j > n {
            return Err(Error::arg(format!(
                "reversal block [{i}, {j}] is not within 1 <= i <= j <= {n}"
            )));
        }
        let mut out = self.clone();
        reverse_block(
            &mut out.psi,
            &mut out.chi,
            i - 1,
            j,
            eps.shift(self.m),
            self.m,
        );
        Ok(out)
    }

    /// The prefix reversal `r_k^eps = s_{1,k}^eps`.
    pub fn prefix_reversal(&self, k: usize, eps: Sign) -> Result<Self> {
        self.substring_reversal(1, k, eps)
    }

    /// Wreath-product composition `self * other`.
    ///
    /// `other` acts on positions: the result has `psi = psi_self o psi_other`
    /// and `chi(t) = chi_self(psi_other(t)) + chi_other(t)`. With this
    /// convention `prefix_reversal(s, k, eps) == s.compose(&r_k^eps(id))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.params() != other.params() {
            return Err(Error::arg(format!(
                "cannot compose elements of S({}) and S({})",
                self.params(),
                other.params()
            )));
        }
        let psi = other.psi.iter().map(|&t| self.psi[t]).collect();
        let chi = other
            .psi
            .iter()
            .zip(&other.chi)
            .map(|(&t, &c)| (self.chi[t] + c) % self.m)
            .collect();
        Ok(Self {
            m: self.m,
            psi,
            chi,
        })
    }

    /// Group inverse with respect to [`compose`](Self::compose).
    pub fn inverse(&self) -> Self {
        let n = self.n();
        let mut psi = vec![0; n];
        let mut chi = vec![0; n];
        for (t, &l) in self.psi.iter().enumerate() {
            psi[l] = t;
            chi[l] = (self.m - self.chi[t]) % self.m;
        }
        Self {
            m: self.m,
            psi,
            chi,
        }
    }
}

impl fmt::Display for ColouredPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (t, (l, c)) in self.psi.iter().zip(&self.chi).enumerate() {
            if t > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}^{}", l + 1, c)?;
        }
        f.write_str(")")
    }
}

/// Reverses `psi[lo..hi]` and `chi[lo..hi]` and shifts the block's colours.
pub(crate) fn reverse_block(
    psi: &mut [usize],
    chi: &mut [usize],
    lo: usize,
    hi: usize,
    shift: usize,
    m: usize,
) {
    psi[lo..hi].reverse();
    chi[lo..hi].reverse();
    for c in &mut chi[lo..hi] {
        *c = (*c + shift) % m;
    }
}

/// Rank/unrank tables for a fixed `(m, n)`.
///
/// `rank = lehmer(psi) * m^n + sum_t chi(t) * m^(t-1)`, where `lehmer` is the
/// lexicographic rank of the underlying permutation.
#[derive(Debug, Clone)]
pub struct Indexer {
    params: GroupParams,
    order: usize,
    colour_count: usize,
    // factorials[t] = (n-1-t)!
    factorials: Vec<usize>,
}

impl Indexer {
    /// Fails with a capacity error when the group order exceeds `cap`.
    pub fn new(params: GroupParams, cap: usize) -> Result<Self> {
        let order = params.checked_order(cap)?;
        let n = params.n();
        let mut factorials = vec![1usize; n];
        for t in (0..n.saturating_sub(1)).rev() {
            factorials[t] = factorials[t + 1] * (n - 1 - t);
        }
        Ok(Self {
            params,
            order,
            colour_count: params.colour_count().expect("bounded by order"),
            factorials,
        })
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self, sigma: &ColouredPermutation) -> Result<VertexIndex> {
        if sigma.params() != self.params {
            return Err(Error::arg(format!(
                "element of S({}) ranked with tables for S({})",
                sigma.params(),
                self.params
            )));
        }
        Ok(VertexIndex(self.rank_parts(&sigma.psi, &sigma.chi)))
    }

    pub fn unrank(&self, v: VertexIndex) -> Result<ColouredPermutation> {
        if v.0 >= self.order {
            return Err(Error::arg(format!(
                "vertex index {} outside [0, {})",
                v.0, self.order
            )));
        }
        let n = self.params.n();
        let mut psi = vec![0; n];
        let mut chi = vec![0; n];
        self.unrank_into(v.0, &mut psi, &mut chi);
        Ok(ColouredPermutation {
            m: self.params.m(),
            psi,
            chi,
        })
    }

    pub(crate) fn rank_parts(&self, psi: &[usize], chi: &[usize]) -> usize {
        let n = psi.len();
        let mut lehmer = 0;
        for t in 0..n {
            let smaller = psi[t + 1..].iter().filter(|&&l| l < psi[t]).count();
            lehmer += smaller * self.factorials[t];
        }
        let mut colour = 0;
        for &c in chi.iter().rev() {
            colour = colour * self.params.m() + c;
        }
        lehmer * self.colour_count + colour
    }

    pub(crate) fn unrank_into(&self, idx: usize, psi: &mut [usize], chi: &mut [usize]) {
        let m = self.params.m();
        let n = self.params.n();
        let mut colour = idx % self.colour_count;
        let mut lehmer = idx / self.colour_count;
        for c in chi.iter_mut() {
            *c = colour % m;
            colour /= m;
        }
        // Decode the Lehmer digits, then pick the digit-th unused letter.
        let mut pool: Vec<usize> = Vec::with_capacity(n);
        pool.extend(0..n);
        for t in 0..n {
            let digit = lehmer / self.factorials[t];
            lehmer %= self.factorials[t];
            psi[t] = pool.remove(digit);
        }
    }
}

/// Rank of `sigma` without a capacity limit beyond `usize`.
pub fn rank(sigma: &ColouredPermutation) -> Result<VertexIndex> {
    Indexer::new(sigma.params(), usize::MAX)?.rank(sigma)
}

/// Inverse of [`rank`].
pub fn unrank(v: VertexIndex, p: GroupParams) -> Result<ColouredPermutation> {
    Indexer::new(p, usize::MAX)?.unrank(v)
}
