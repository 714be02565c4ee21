//! Lines, subspaces and matrix groups over F_p^n.
//!
//! Every line has a normalized representative (first nonzero coordinate 1)
//! and a global index in the lexicographic order of those representatives.
//! All orientation signs elsewhere in the crate refer to this order.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::scalar::{is_prime, FieldOps, PrimeField};

pub const MAX_LINES: u64 = 10_000;
pub const MAX_SUBSPACES: u64 = 100_000;
pub const MAX_GROUP_ORDER: u64 = 1_000_000;

fn check_params(n: usize, p: u64) -> Result<()> {
    if n == 0 {
        return Err(LabError::InvalidParameter("dimension must be at least 1".into()));
    }
    if !is_prime(p) || p > 251 {
        return Err(LabError::InvalidParameter(format!("p = {p} must be a prime below 256")));
    }
    Ok(())
}

/// `(p^n - 1) / (p - 1)`, saturating.
pub fn line_count(n: usize, p: u64) -> u64 {
    let mut total: u64 = 0;
    let mut pow: u64 = 1;
    for _ in 0..n {
        total = total.saturating_add(pow);
        pow = pow.saturating_mul(p);
    }
    total
}

/// Scales a nonzero vector so its first nonzero coordinate is 1.
pub fn normalize(v: &mut [u32], p: u64) -> bool {
    let f = PrimeField::new(p);
    match v.iter().position(|&x| x != 0) {
        None => false,
        Some(i) => {
            let inv = f.inv(&(v[i] as u64));
            for x in v.iter_mut() {
                *x = f.mul(&(*x as u64), &inv) as u32;
            }
            true
        }
    }
}

/// A line of F_p^n: normalized coordinates plus global index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjLine {
    pub index: usize,
    pub coords: Vec<u32>,
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// All lines of F_p^n with lookup by coordinates.
#[derive(Debug, Clone)]
pub struct LineSpace {
    pub n: usize,
    pub p: u64,
    lines: Vec<Vec<u32>>,
    index: FxHashMap<Vec<u32>, usize>,
}

impl LineSpace {
    pub fn new(n: usize, p: u64) -> Result<Self> {
        check_params(n, p)?;
        let count = line_count(n, p);
        if count > MAX_LINES {
            return Err(LabError::SizeBound {
                what: "line count",
                actual: count,
                limit: MAX_LINES,
            });
        }
        let mut lines = Vec::with_capacity(count as usize);
        // Odometer in lexicographic order; keep the normalized vectors.
        let mut v = vec![0u32; n];
        loop {
            if let Some(i) = v.iter().position(|&x| x != 0) {
                if v[i] == 1 {
                    lines.push(v.clone());
                }
            }
            let mut k = n;
            loop {
                if k == 0 {
                    let index = lines.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
                    return Ok(LineSpace { n, p, lines, index });
                }
                k -= 1;
                v[k] += 1;
                if (v[k] as u64) < p {
                    break;
                }
                v[k] = 0;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn coords(&self, idx: usize) -> &[u32] {
        &self.lines[idx]
    }

    pub fn line(&self, idx: usize) -> ProjLine {
        ProjLine {
            index: idx,
            coords: self.lines[idx].clone(),
        }
    }

    pub fn lines(&self) -> Vec<ProjLine> {
        (0..self.len()).map(|i| self.line(i)).collect()
    }

    /// Index of the line through a nonzero vector.
    pub fn index_of(&self, v: &[u32]) -> Option<usize> {
        let mut w: Vec<u32> = v.iter().map(|&x| (x as u64 % self.p) as u32).collect();
        if !normalize(&mut w, self.p) {
            return None;
        }
        self.index.get(&w).copied()
    }

    /// Index of the coordinate line `<e_i>` (0-based).
    pub fn basis_line(&self, i: usize) -> usize {
        let mut v = vec![0u32; self.n];
        v[i] = 1;
        self.index[&v]
    }

    /// Permutation of line indices induced by a matrix.
    pub fn permutation(&self, g: &FpMatrix) -> Vec<u32> {
        self.lines
            .iter()
            .map(|v| self.index_of(&g.apply(v)).expect("invertible matrix maps lines to lines") as u32)
            .collect()
    }

    /// Index map from lines of F_p^n to lines of F_p^m (m >= n), padding with zeros.
    pub fn embedding_into(&self, target: &LineSpace) -> Vec<u32> {
        assert!(target.n >= self.n && target.p == self.p);
        self.lines
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.resize(target.n, 0);
                target.index[&w] as u32
            })
            .collect()
    }

    /// Subspace spanned by a set of lines, given by index.
    pub fn span(&self, idxs: impl IntoIterator<Item = usize>) -> Subspace {
        Subspace::from_vectors(self.n, self.p, idxs.into_iter().map(|i| self.lines[i].clone()))
    }

    /// Rank of the vectors of a set of lines.
    pub fn rank_of(&self, idxs: impl IntoIterator<Item = usize>) -> usize {
        self.span(idxs).dim()
    }
}

/// All lines of F_p^n in the global order.
pub fn enumerate_lines(n: usize, p: u64) -> Result<Vec<ProjLine>> {
    Ok(LineSpace::new(n, p)?.lines())
}

/// A subspace of F_p^n in reduced row-echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    p: u64,
    rows: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn zero(n: usize, p: u64) -> Self {
        Subspace { n, p, rows: Vec::new() }
    }

    pub fn full(n: usize, p: u64) -> Self {
        Self::from_vectors(
            n,
            p,
            (0..n).map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            }),
        )
    }

    /// Canonical echelon form of the span of some vectors.
    pub fn from_vectors(n: usize, p: u64, vectors: impl IntoIterator<Item = Vec<u32>>) -> Self {
        let f = PrimeField::new(p);
        let mut rows: Vec<Vec<u64>> = vectors
            .into_iter()
            .map(|v| {
                assert_eq!(v.len(), n, "vector length");
                v.into_iter().map(|x| x as u64 % p).collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = f.inv(&rows[rank][col]);
            for x in rows[rank].iter_mut() {
                *x = f.mul(x, &inv);
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let factor = row[col];
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x = f.sub(x, &f.mul(&factor, y));
                    }
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        Subspace {
            n,
            p,
            rows: rows.into_iter().map(|r| r.into_iter().map(|x| x as u32).collect()).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn is_proper_nonzero(&self) -> bool {
        self.dim() > 0 && self.dim() < self.n
    }

    /// Sum of two subspaces.
    pub fn join(&self, other: &Subspace) -> Subspace {
        Self::from_vectors(self.n, self.p, self.rows.iter().chain(other.rows.iter()).cloned())
    }

    /// Sum with the line through `v`.
    pub fn plus_vector(&self, v: &[u32]) -> Subspace {
        Self::from_vectors(self.n, self.p, self.rows.iter().cloned().chain(std::iter::once(v.to_vec())))
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        self.plus_vector(v).dim() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.dim() <= other.dim() && self.rows.iter().all(|r| other.contains_vector(r))
    }

    /// Image under the standard inclusion F_p^n -> F_p^m (zero padding).
    pub fn embed(&self, m: usize) -> Subspace {
        assert!(m >= self.n);
        Subspace {
            n: m,
            p: self.p,
            rows: self
                .rows
                .iter()
                .map(|r| {
                    let mut w = r.clone();
                    w.resize(m, 0);
                    w
                })
                .collect(),
        }
    }

    /// Image under an invertible matrix.
    pub fn transform(&self, g: &FpMatrix) -> Subspace {
        Self::from_vectors(self.n, self.p, self.rows.iter().map(|r| g.apply(r)))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Span of a set of lines.
pub fn span(lines: &[ProjLine], n: usize, p: u64) -> Subspace {
    Subspace::from_vectors(n, p, lines.iter().map(|l| l.coords.clone()))
}

/// Number of `d`-dimensional subspaces of F_p^n (Gaussian binomial).
pub fn gaussian_binomial(n: usize, d: usize, p: u64) -> u64 {
    if d > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num *= (p as u128).pow((n - i) as u32) - 1;
        den *= (p as u128).pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

/// All subspaces of dimension `1..n-1`, ordered by dimension, pivot columns,
/// then free entries lexicographically.
pub fn enumerate_proper_subspaces(n: usize, p: u64) -> Result<Vec<Subspace>> {
    check_params(n, p)?;
    let total: u64 = (1..n).map(|d| gaussian_binomial(n, d, p)).sum();
    if total > MAX_SUBSPACES {
        return Err(LabError::SizeBound {
            what: "proper subspace count",
            actual: total,
            limit: MAX_SUBSPACES,
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    for d in 1..n {
        for pivots in combinations(n, d) {
            // Free slots: (row, col) with col > pivot of that row, col not a pivot.
            let slots: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| (pc + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
                .collect();
            let mut vals = vec![0u32; slots.len()];
            loop {
                let mut rows = vec![vec![0u32; n]; d];
                for (r, &pc) in pivots.iter().enumerate() {
                    rows[r][pc] = 1;
                }
                for (&(r, c), &v) in slots.iter().zip(&vals) {
                    rows[r][c] = v;
                }
                out.push(Subspace { n, p, rows });
                if !odometer(&mut vals, p) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Advances a base-`p` counter, most significant digit first; false on wrap.
fn odometer(vals: &mut [u32], p: u64) -> bool {
    for k in (0..vals.len()).rev() {
        vals[k] += 1;
        if (vals[k] as u64) < p {
            return true;
        }
        vals[k] = 0;
    }
    false
}

/// Increasing `d`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < d - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    rec(0, n, d, &mut cur, &mut out);
    out
}

/// Square matrix over F_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMatrix {
    pub n: usize,
    pub p: u64,
    pub data: Vec<u32>,
}

impl FpMatrix {
    pub fn identity(n: usize, p: u64) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        FpMatrix { n, p, data }
    }

    pub fn from_rows(rows: &[Vec<i64>], p: u64) -> Self {
        let n = rows.len();
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), n, "square matrix");
                r.iter().map(move |&x| x.rem_euclid(p as i64) as u32)
            })
            .collect();
        FpMatrix { n, p, data }
    }

    /// Elementary transvection `I + E_ij`.
    pub fn transvection(n: usize, p: u64, i: usize, j: usize) -> Self {
        let mut m = Self::identity(n, p);
        m.data[i * n + j] = 1;
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v.rem_euclid(self.p as i64) as u32;
    }

    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        let n = self.n;
        let mut data = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    data[idx] = ((data[idx] as u64 + a * rhs.data[k * n + j] as u64) % self.p) as u32;
                }
            }
        }
        FpMatrix { n, p: self.p, data }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        (0..self.n)
            .map(|i| {
                let s: u64 = (0..self.n).map(|j| self.data[i * self.n + j] as u64 * v[j] as u64).sum();
                (s % self.p) as u32
            })
            .collect()
    }

    pub fn det(&self) -> u32 {
        let f = PrimeField::new(self.p);
        let n = self.n;
        let mut a: Vec<u64> = self.data.iter().map(|&x| x as u64).collect();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = f.neg(&det);
            }
            let pv = a[col * n + col];
            det = f.mul(&det, &pv);
            let inv = f.inv(&pv);
            for r in col + 1..n {
                let factor = f.mul(&a[r * n + col], &inv);
                if factor != 0 {
                    for j in col..n {
                        a[r * n + j] = f.sub(&a[r * n + j], &f.mul(&factor, &a[col * n + j]));
                    }
                }
            }
        }
        det as u32
    }

    /// Multiplicative order (identity has order 1).
    pub fn order(&self) -> usize {
        let id = Self::identity(self.n, self.p);
        let mut acc = self.clone();
        let mut k = 1;
        while acc != id {
            acc = acc.mul(self);
            k += 1;
        }
        k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    Special,
    General,
}

/// A matrix group over F_p given by generators.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    pub n: usize,
    pub p: u64,
    pub kind: GroupKind,
    pub generators: Vec<FpMatrix>,
}

/// Smallest generator of the multiplicative group of F_p.
pub fn primitive_root(p: u64) -> u64 {
    let f = PrimeField::new(p);
    let phi = p - 1;
    let factors: Vec<u64> = (2..=phi).filter(|q| phi.is_multiple_of(*q) && is_prime(*q)).collect();
    (1..p)
        .find(|&g| factors.iter().all(|&q| f.pow(g, phi / q) != 1))
        .expect("prime field has a primitive root")
}

impl MatrixGroup {
    /// `SL_n(F_p)` generated by the transvections `I + E_ij`.
    pub fn special_linear(n: usize, p: u64) -> Result<Self> {
        check_params(n, p)?;
        let mut generators = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    generators.push(FpMatrix::transvection(n, p, i, j));
                }
            }
        }
        Ok(MatrixGroup {
            n,
            p,
            kind: GroupKind::Special,
            generators,
        })
    }

    /// `GL_n(F_p)`: transvections plus `diag(ω, 1, ..., 1)` for a primitive root ω.
    pub fn general_linear(n: usize, p: u64) -> Result<Self> {
        let mut g = Self::special_linear(n, p)?;
        g.kind = GroupKind::General;
        if p > 2 {
            let mut d = FpMatrix::identity(n, p);
            d.set(0, 0, primitive_root(p) as i64);
            g.generators.push(d);
        }
        Ok(g)
    }

    /// The trivial group acting on F_p^n.
    pub fn trivial(n: usize, p: u64) -> Result<Self> {
        check_params(n, p)?;
        Ok(MatrixGroup {
            n,
            p,
            kind: GroupKind::Special,
            generators: Vec::new(),
        })
    }

    pub fn with_generators(n: usize, p: u64, kind: GroupKind, generators: Vec<FpMatrix>) -> Result<Self> {
        check_params(n, p)?;
        for g in &generators {
            if g.n != n || g.p != p {
                return Err(LabError::InvalidParameter("generator shape mismatch".into()));
            }
            let det = g.det();
            let ok = match kind {
                GroupKind::Special => det == 1,
                GroupKind::General => det != 0,
            };
            if !ok {
                return Err(LabError::InvalidParameter(format!("generator has determinant {det}")));
            }
        }
        Ok(MatrixGroup { n, p, kind, generators })
    }

    /// Permutations of line indices induced by the generators.
    pub fn line_permutations(&self, lines: &LineSpace) -> Vec<Vec<u32>> {
        assert_eq!((lines.n, lines.p), (self.n, self.p));
        self.generators.iter().map(|g| lines.permutation(g)).collect()
    }
}

/// Breadth-first closure of the generators, starting from the identity.
pub fn enumerate_group(g: &MatrixGroup) -> Result<Vec<FpMatrix>> {
    let id = FpMatrix::identity(g.n, g.p);
    let mut seen: FxHashSet<FpMatrix> = FxHashSet::default();
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id.clone()]);
    seen.insert(id);
    while let Some(x) = queue.pop_front() {
        for s in &g.generators {
            let y = x.mul(s);
            if seen.insert(y.clone()) {
                if seen.len() as u64 > MAX_GROUP_ORDER {
                    return Err(LabError::SizeBound {
                        what: "group order",
                        actual: seen.len() as u64,
                        limit: MAX_GROUP_ORDER,
                    });
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_counts() {
        assert_eq!(enumerate_lines(3, 2).unwrap().len(), 7);
        assert_eq!(enumerate_lines(2, 3).unwrap().len(), 4);
        assert_eq!(enumerate_lines(4, 2).unwrap().len(), 15);
    }

    #[test]
    fn lines_are_lex_sorted_and_normalized() {
        let lines = enumerate_lines(3, 3).unwrap();
        for w in lines.windows(2) {
            assert!(w[0].coords < w[1].coords);
        }
        for l in &lines {
            assert_eq!(l.coords.iter().find(|&&x| x != 0), Some(&1));
        }
        assert_eq!(lines[0].to_string(), "0,0,1");
    }

    #[test]
    fn line_bound() {
        assert!(matches!(LineSpace::new(14, 2), Err(LabError::SizeBound { .. })));
        assert!(LineSpace::new(2, 4).is_err());
    }

    #[test]
    fn span_examples() {
        let ls = LineSpace::new(3, 2).unwrap();
        let e1 = ls.index_of(&[1, 0, 0]).unwrap();
        let e2 = ls.index_of(&[0, 1, 0]).unwrap();
        let e3 = ls.index_of(&[0, 0, 1]).unwrap();
        let s = ls.span([e1, e2]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.rows(), &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(ls.span([e3]).rows(), &[vec![0, 0, 1]]);
        assert_eq!(ls.span([e1, e2, e3]).dim(), 3);
        assert_eq!(s.to_string(), "1,0,0;0,1,0");
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(enumerate_proper_subspaces(3, 2).unwrap().len(), 14);
        assert_eq!(enumerate_proper_subspaces(2, 2).unwrap().len(), 3);
        let s42 = enumerate_proper_subspaces(4, 2).unwrap();
        assert_eq!(s42.len(), 65);
        let by_dim: Vec<usize> = (1..4).map(|d| s42.iter().filter(|s| s.dim() == d).count()).collect();
        assert_eq!(by_dim, vec![15, 35, 15]);
    }

    #[test]
    fn enumerated_subspaces_are_canonical_and_distinct() {
        let subs = enumerate_proper_subspaces(3, 3).unwrap();
        let set: FxHashSet<_> = subs.iter().cloned().collect();
        assert_eq!(set.len(), subs.len());
        for s in &subs {
            assert_eq!(&Subspace::from_vectors(3, 3, s.rows().to_vec()), s);
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_group(&MatrixGroup::special_linear(2, 2).unwrap()).unwrap().len(), 6);
        assert_eq!(enumerate_group(&MatrixGroup::special_linear(2, 3).unwrap()).unwrap().len(), 24);
        assert_eq!(enumerate_group(&MatrixGroup::general_linear(3, 2).unwrap()).unwrap().len(), 168);
        assert_eq!(enumerate_group(&MatrixGroup::general_linear(2, 3).unwrap()).unwrap().len(), 48);
    }

    #[test]
    fn determinant_and_order() {
        let m = FpMatrix::from_rows(&[vec![0, -1], vec![1, 0]], 5);
        assert_eq!(m.det(), 1);
        assert_eq!(m.order(), 4);
        let bad = FpMatrix::from_rows(&[vec![2, 0], vec![0, 1]], 5);
        assert!(MatrixGroup::with_generators(2, 5, GroupKind::Special, vec![bad]).is_err());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(2), 1);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
    }
}
