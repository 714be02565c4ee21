//! Exact arithmetic in ℤ[θ], θ⁴ = 2, and the special unitary group of the
//! hermitian form `Σ x̄_i x_i` with the involution θ ↦ -θ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::error::{LabError, Result};

/// `u + v√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Sqrt2Int {
    pub u: i64,
    pub v: i64,
}

impl Sqrt2Int {
    pub const ONE: Sqrt2Int = Sqrt2Int { u: 1, v: 0 };

    pub fn new(u: i64, v: i64) -> Self {
        Sqrt2Int { u, v }
    }

    /// Value under √2 ↦ √2.
    pub fn real(self) -> f64 {
        self.u as f64 + self.v as f64 * std::f64::consts::SQRT_2
    }

    /// Value under √2 ↦ -√2.
    pub fn conjugate_real(self) -> f64 {
        self.u as f64 - self.v as f64 * std::f64::consts::SQRT_2
    }
}

impl Add for Sqrt2Int {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Sqrt2Int::new(self.u + o.u, self.v + o.v)
    }
}

impl Sub for Sqrt2Int {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Sqrt2Int::new(self.u - o.u, self.v - o.v)
    }
}

impl Mul for Sqrt2Int {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Sqrt2Int::new(self.u * o.u + 2 * self.v * o.v, self.u * o.v + self.v * o.u)
    }
}

impl fmt::Display for Sqrt2Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}√2", self.u, self.v)
    }
}

/// `c0 + c1 θ + c2 θ² + c3 θ³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize)]
pub struct QuarticInt(pub [i64; 4]);

impl QuarticInt {
    pub const ZERO: QuarticInt = QuarticInt([0; 4]);
    pub const ONE: QuarticInt = QuarticInt([1, 0, 0, 0]);
    pub const THETA: QuarticInt = QuarticInt([0, 1, 0, 0]);

    pub fn from_int(c: i64) -> Self {
        QuarticInt([c, 0, 0, 0])
    }

    /// `a + bθ` with `a, b ∈ ℤ[√2]`.
    pub fn from_parts(a: Sqrt2Int, b: Sqrt2Int) -> Self {
        QuarticInt([a.u, b.u, a.v, b.v])
    }

    pub fn parts(self) -> (Sqrt2Int, Sqrt2Int) {
        let c = self.0;
        (Sqrt2Int::new(c[0], c[2]), Sqrt2Int::new(c[1], c[3]))
    }

    /// θ ↦ -θ.
    pub fn bar(self) -> Self {
        let c = self.0;
        QuarticInt([c[0], -c[1], c[2], -c[3]])
    }

    pub fn is_zero(self) -> bool {
        self.0 == [0; 4]
    }

    pub fn height(self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// `x x̄ = a² - √2 b²`.
    pub fn norm_form(self) -> Sqrt2Int {
        let (a, b) = self.parts();
        a * a - Sqrt2Int::new(0, 1) * b * b
    }

    /// Real embedding θ ↦ 2^{1/4}.
    pub fn real_embedding(self) -> f64 {
        let t = 2f64.powf(0.25);
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c as f64)
    }

    /// Complex embedding θ ↦ i 2^{1/4}.
    pub fn sigma(self) -> Complex64 {
        let t = Complex64::new(0.0, 2f64.powf(0.25));
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c as f64)
    }

    /// Reads back an element of ℤ[√2] if the odd coefficients vanish.
    pub fn as_sqrt2(self) -> Option<Sqrt2Int> {
        let (a, b) = self.parts();
        (b == Sqrt2Int::default()).then_some(a)
    }
}

impl Add for QuarticInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QuarticInt(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for QuarticInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QuarticInt(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for QuarticInt {
    type Output = Self;
    fn neg(self) -> Self {
        QuarticInt(self.0.map(|c| -c))
    }
}

impl Mul for QuarticInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = [0i64; 4];
        for i in 0..4 {
            for j in 0..4 {
                let t = self.0[i] * o.0[j];
                if i + j < 4 {
                    out[i + j] += t;
                } else {
                    out[i + j - 4] += 2 * t;
                }
            }
        }
        QuarticInt(out)
    }
}

impl fmt::Display for QuarticInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "({},{},{},{})", c[0], c[1], c[2], c[3])
    }
}

/// Square matrix over ℤ[θ], row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeMatrix {
    pub n: usize,
    pub entries: Vec<QuarticInt>,
}

impl Serialize for LatticeMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[i64; 4]>> = (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).0).collect()).collect();
        rows.serialize(s)
    }
}

impl LatticeMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = LatticeMatrix {
            n,
            entries: vec![QuarticInt::ZERO; n * n],
        };
        for i in 0..n {
            m.entries[i * n + i] = QuarticInt::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<QuarticInt>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LabError::Dimension("lattice matrix must be square".into()));
        }
        Ok(LatticeMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&c| QuarticInt::from_int(c)).collect()).collect())
    }

    pub fn get(&self, i: usize, j: usize) -> QuarticInt {
        self.entries[i * self.n + j]
    }

    pub fn mul(&self, o: &LatticeMatrix) -> LatticeMatrix {
        let n = self.n;
        let mut entries = vec![QuarticInt::ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] = entries[i * n + j] + a * o.get(k, j);
                }
            }
        }
        LatticeMatrix { n, entries }
    }

    pub fn sub(&self, o: &LatticeMatrix) -> LatticeMatrix {
        LatticeMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&o.entries).map(|(&a, &b)| a - b).collect(),
        }
    }

    /// `M̄ᵀ`.
    pub fn bar_transpose(&self) -> LatticeMatrix {
        let n = self.n;
        LatticeMatrix {
            n,
            entries: (0..n * n).map(|k| self.get(k % n, k / n).bar()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == LatticeMatrix::identity(self.n)
    }

    pub fn height(&self) -> i64 {
        self.entries.iter().map(|e| e.height()).max().unwrap_or(0)
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> QuarticInt {
        fn rec(m: &LatticeMatrix, rows: &[usize], cols: &[usize]) -> QuarticInt {
            if rows.is_empty() {
                return QuarticInt::ONE;
            }
            let r = rows[0];
            let mut acc = QuarticInt::ZERO;
            for (k, &c) in cols.iter().enumerate() {
                let e = m.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = e * rec(m, &rows[1..], &rest);
                acc = if k % 2 == 0 { acc + minor } else { acc - minor };
            }
            acc
        }
        let idx: Vec<usize> = (0..self.n).collect();
        rec(self, &idx, &idx)
    }

    pub fn sigma(&self) -> Vec<Complex64> {
        self.entries.iter().map(|e| e.sigma()).collect()
    }

    pub fn real_embedding(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.real_embedding()).collect()
    }
}

impl fmt::Display for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MembershipCertificate {
    pub preserves_form: bool,
    pub det_one: bool,
    pub pass: bool,
}

pub fn is_member(m: &LatticeMatrix) -> MembershipCertificate {
    let preserves_form = m.bar_transpose().mul(m).is_identity();
    let det_one = m.det() == QuarticInt::ONE;
    MembershipCertificate {
        preserves_form,
        det_one,
        pass: preserves_form && det_one,
    }
}

/// `(M - I)^n = 0`.
pub fn is_unipotent(m: &LatticeMatrix) -> bool {
    let x = m.sub(&LatticeMatrix::identity(m.n));
    let mut acc = LatticeMatrix::identity(m.n);
    for _ in 0..m.n {
        acc = acc.mul(&x);
    }
    acc.is_zero()
}

/// All elements of ℤ[θ] with coefficients in `[-h, h]`.
fn elements_of_height(h: i64) -> Vec<QuarticInt> {
    let range: Vec<i64> = (-h..=h).collect();
    let mut out = Vec::with_capacity(range.len().pow(4));
    for &a in &range {
        for &b in &range {
            for &c in &range {
                for &d in &range {
                    out.push(QuarticInt([a, b, c, d]));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub height: i64,
    /// Columns `(x, y)` with `x̄x + ȳy = 1`.
    pub unit_columns: usize,
    pub members: Vec<LatticeMatrix>,
    /// False when the pair budget cut the search short.
    pub complete: bool,
}

/// Default cap on column pairs examined.
pub const PAIR_BUDGET: u64 = 50_000_000;

/// Exhaustive search for 2x2 members with every coefficient in `[-h, h]`.
///
/// Columns are first restricted to unit vectors for the form, found by
/// matching norm values through a table; pairs of unit columns are then kept
/// when they are orthogonal and have determinant one.
pub fn search_members(h: i64, budget: u64) -> Result<SearchResult> {
    if !(0..=3).contains(&h) {
        return Err(LabError::InvalidParameter(format!("height must be in 0..=3, got {h}")));
    }
    let elems = elements_of_height(h);
    let mut by_norm: FxHashMap<Sqrt2Int, Vec<QuarticInt>> = FxHashMap::default();
    for &e in &elems {
        // The σ-image of a norm is |σ(e)|² >= 0, so norms above one cannot occur in a unit column.
        let nf = e.norm_form();
        if nf.conjugate_real() <= 1.0 + 1e-9 {
            by_norm.entry(nf).or_default().push(e);
        }
    }
    let mut columns: Vec<(QuarticInt, QuarticInt)> = Vec::new();
    for (nx, xs) in &by_norm {
        if let Some(ys) = by_norm.get(&(Sqrt2Int::ONE - *nx)) {
            for &x in xs {
                for &y in ys {
                    columns.push((x, y));
                }
            }
        }
    }
    columns.sort();
    let pairs = (columns.len() as u64).pow(2);
    let complete = pairs <= budget;
    let limit = if complete { columns.len() } else { (budget as f64).sqrt() as usize };
    let cols = &columns[..limit.min(columns.len())];
    let mut members: Vec<LatticeMatrix> = cols
        .par_iter()
        .flat_map_iter(|&(x1, y1)| {
            cols.iter().filter_map(move |&(x2, y2)| {
                let orth = x1.bar() * x2 + y1.bar() * y2;
                let det = x1 * y2 - x2 * y1;
                (orth.is_zero() && det == QuarticInt::ONE).then(|| LatticeMatrix {
                    n: 2,
                    entries: vec![x1, x2, y1, y2],
                })
            })
        })
        .collect();
    members.sort();
    Ok(SearchResult {
        height: h,
        unit_columns: columns.len(),
        members,
        complete,
    })
}

/// Largest word ball `word_ball` will hold.
pub const MAX_WORDS: usize = 2_000_000;

/// Distinct products of between 1 and `len` generators.
pub fn word_ball(generators: &[LatticeMatrix], len: usize) -> Result<Vec<LatticeMatrix>> {
    let mut seen: FxHashSet<LatticeMatrix> = FxHashSet::default();
    let mut frontier: Vec<LatticeMatrix> = Vec::new();
    for g in generators {
        if seen.insert(g.clone()) {
            frontier.push(g.clone());
        }
    }
    for _ in 1..len {
        let mut next = Vec::new();
        for chunk in frontier.chunks(4096) {
            let products: Vec<LatticeMatrix> = chunk
                .par_iter()
                .flat_map_iter(|w| generators.iter().map(move |g| w.mul(g)))
                .collect();
            for m in products {
                if seen.insert(m.clone()) {
                    next.push(m);
                }
            }
            if seen.len() > MAX_WORDS {
                return Err(LabError::SizeBound {
                    what: "distinct words",
                    actual: seen.len() as u64,
                    limit: MAX_WORDS as u64,
                });
            }
        }
        frontier = next;
    }
    let mut all: Vec<LatticeMatrix> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

#[derive(Debug, Clone, Serialize)]
pub struct UnipotentCertificate {
    pub generators: usize,
    pub word_length: usize,
    pub distinct_words: usize,
    pub witness: Option<LatticeMatrix>,
    pub pass: bool,
}

/// Passes iff no non-identity product of at most `len` generators is unipotent.
pub fn unipotent_free_check(generators: &[LatticeMatrix], len: usize) -> Result<UnipotentCertificate> {
    let ball = if len == 0 { Vec::new() } else { word_ball(generators, len)? };
    let witness = ball.par_iter().find_first(|m| !m.is_identity() && is_unipotent(m)).cloned();
    Ok(UnipotentCertificate {
        generators: generators.len(),
        word_length: len,
        distinct_words: ball.len(),
        pass: witness.is_none(),
        witness,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EmbeddingWitness {
    /// `max |σ(M)* σ(M) - I|`.
    pub unitarity_deviation: f64,
    /// `max |σ(M)_ij|`.
    pub max_modulus: f64,
    /// `max |R(M̄)ᵀ R(M) - I|` under θ ↦ 2^{1/4}, with the bar evaluated exactly first.
    pub real_form_deviation: f64,
}

pub fn embedding_witness(m: &LatticeMatrix) -> EmbeddingWitness {
    let n = m.n;
    let s = m.sigma();
    let mut unitarity_deviation = 0f64;
    for i in 0..n {
        for j in 0..n {
            let v: Complex64 = (0..n).map(|k| s[k * n + i].conj() * s[k * n + j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            unitarity_deviation = unitarity_deviation.max((v - target).norm());
        }
    }
    let r = m.real_embedding();
    let rb = m.bar_transpose().real_embedding();
    let mut real_form_deviation = 0f64;
    for i in 0..n {
        for j in 0..n {
            let v: f64 = (0..n).map(|k| rb[i * n + k] * r[k * n + j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            real_form_deviation = real_form_deviation.max((v - target).abs());
        }
    }
    EmbeddingWitness {
        unitarity_deviation,
        max_modulus: s.iter().map(|z| z.norm()).fold(0.0, f64::max),
        real_form_deviation,
    }
}

/// Smallest max-entry distance between two distinct matrices under the joint
/// real and complex embeddings; `None` for fewer than two matrices.
pub fn min_joint_distance(ms: &[LatticeMatrix]) -> Option<f64> {
    let images: Vec<(Vec<f64>, Vec<Complex64>)> = ms.iter().map(|m| (m.real_embedding(), m.sigma())).collect();
    (0..images.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let images = &images;
            (i + 1..images.len()).map(move |j| {
                let (ra, sa) = &images[i];
                let (rb, sb) = &images[j];
                let dr = ra.iter().zip(rb).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                let ds = sa.iter().zip(sb).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                dr.max(ds)
            })
        })
        .reduce_with(f64::min)
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeCertificate {
    pub height: i64,
    pub word_length: usize,
    pub search_complete: bool,
    pub unit_columns: usize,
    pub count: usize,
    pub non_monomial: usize,
    pub members: Vec<LatticeMatrix>,
    pub all_members_pass: bool,
    pub product_closure: bool,
    pub unipotent: UnipotentCertificate,
    pub max_unitarity_deviation: f64,
    pub max_sigma_modulus: f64,
    pub max_real_form_deviation: f64,
    pub min_joint_distance: Option<f64>,
    pub pass: bool,
}

pub const EMBEDDING_TOLERANCE: f64 = 1e-9;

fn is_monomial(m: &LatticeMatrix) -> bool {
    (0..m.n).all(|i| (0..m.n).filter(|&j| !m.get(i, j).is_zero()).count() == 1)
}

/// Search, membership, closure, unipotent-freeness and embedding witnesses for n = 2.
pub fn lattice_certificate(h: i64, word_length: usize) -> Result<LatticeCertificate> {
    let search = search_members(h, PAIR_BUDGET)?;
    let members = search.members;
    let all_members_pass = members.iter().all(|m| is_member(m).pass);
    let product_closure = members.par_iter().all(|a| members.iter().all(|b| is_member(&a.mul(b)).pass));
    let unipotent = unipotent_free_check(&members, word_length)?;
    let (mut dev, mut modulus, mut real_dev) = (0f64, 0f64, 0f64);
    for w in members.iter().map(embedding_witness) {
        dev = dev.max(w.unitarity_deviation);
        modulus = modulus.max(w.max_modulus);
        real_dev = real_dev.max(w.real_form_deviation);
    }
    let short_words = word_ball(&members, word_length.min(2))?;
    let min_dist = min_joint_distance(&short_words);
    let pass = search.complete
        && all_members_pass
        && product_closure
        && unipotent.pass
        && dev <= EMBEDDING_TOLERANCE
        && modulus <= 1.0 + EMBEDDING_TOLERANCE
        && min_dist.is_none_or(|d| d > 0.0);
    Ok(LatticeCertificate {
        height: h,
        word_length,
        search_complete: search.complete,
        unit_columns: search.unit_columns,
        count: members.len(),
        non_monomial: members.iter().filter(|m| !is_monomial(m)).count(),
        members,
        all_members_pass,
        product_closure,
        unipotent,
        max_unitarity_deviation: dev,
        max_sigma_modulus: modulus,
        max_real_form_deviation: real_dev,
        min_joint_distance: min_dist,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: [i64; 4]) -> QuarticInt {
        QuarticInt(c)
    }

    #[test]
    fn theta_to_the_fourth_is_two() {
        let t = QuarticInt::THETA;
        assert_eq!(t * t * t * t, QuarticInt::from_int(2));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(QuarticInt::THETA.norm_form(), Sqrt2Int::new(0, -1));
        assert_eq!(q([1, 1, 0, 0]).norm_form(), Sqrt2Int::new(1, -1));
        assert_eq!(q([3, 0, 1, 0]).norm_form(), Sqrt2Int::new(11, 6));
    }

    #[test]
    fn membership_examples() {
        assert!(is_member(&LatticeMatrix::identity(2)).pass);
        assert!(is_member(&LatticeMatrix::from_int_rows(&[vec![0, -1], vec![1, 0]]).unwrap()).pass);
        let shear = LatticeMatrix::from_int_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let cert = is_member(&shear);
        assert!(!cert.pass && cert.det_one && !cert.preserves_form);
    }

    #[test]
    fn unipotent_examples() {
        assert!(is_unipotent(&LatticeMatrix::identity(2)));
        assert!(is_unipotent(&LatticeMatrix::from_int_rows(&[vec![1, 1], vec![0, 1]]).unwrap()));
        assert!(!is_unipotent(&LatticeMatrix::from_int_rows(&[vec![0, -1], vec![1, 0]]).unwrap()));
    }

    #[test]
    fn height_one_contains_signed_permutations() {
        let res = search_members(1, PAIR_BUDGET).unwrap();
        assert!(res.complete);
        for rows in [[[1, 0], [0, 1]], [[-1, 0], [0, -1]], [[0, -1], [1, 0]], [[0, 1], [-1, 0]]] {
            let m = LatticeMatrix::from_int_rows(&[rows[0].to_vec(), rows[1].to_vec()]).unwrap();
            assert!(res.members.contains(&m), "{m}");
        }
        assert!(res.members.iter().all(|m| is_member(m).pass));
    }

    #[test]
    fn signed_permutations_are_unipotent_free() {
        let gens: Vec<LatticeMatrix> = [[[0, -1], [1, 0]], [[-1, 0], [0, -1]]]
            .iter()
            .map(|r| LatticeMatrix::from_int_rows(&[r[0].to_vec(), r[1].to_vec()]).unwrap())
            .collect();
        assert!(unipotent_free_check(&gens, 4).unwrap().pass);
        assert!(unipotent_free_check(&gens, 0).unwrap().pass);
    }

    #[test]
    fn embedding_of_permutation_is_unitary() {
        let w = embedding_witness(&LatticeMatrix::from_int_rows(&[vec![0, -1], vec![1, 0]]).unwrap());
        assert_eq!(w.unitarity_deviation, 0.0);
        assert_eq!(w.max_modulus, 1.0);
    }

    #[test]
    fn determinant_three_by_three() {
        let m = LatticeMatrix::from_rows(vec![
            vec![QuarticInt::THETA, QuarticInt::ZERO, QuarticInt::ZERO],
            vec![QuarticInt::ZERO, QuarticInt::THETA, QuarticInt::ZERO],
            vec![QuarticInt::ONE, QuarticInt::ONE, QuarticInt::THETA],
        ])
        .unwrap();
        assert_eq!(m.det(), QuarticInt::THETA * QuarticInt::THETA * QuarticInt::THETA);
    }
}
