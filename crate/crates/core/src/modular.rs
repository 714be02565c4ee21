//! Unimodular symbols for SL_2(ℤ) and its principal congruence subgroups.
//!
//! The coinvariants of the rank-two Steinberg module under Γ(N) are presented
//! on generators `x_g`, `g ∈ SL_2(ℤ/N)`, modulo `x_g + x_{gS}` and
//! `x_g + x_{gR} + x_{gR²}`. A unimodular pair of lines `(u, w)` names the
//! generator of the matrix with columns `u` and `±w`.

use num_integer::Integer;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::echelon::{Echelon, SparseRow};
use crate::error::{LabError, Result};
use crate::scalar::{Rat, RationalField};

/// Largest `|SL_2(ℤ/N)|` accepted.
pub const MAX_COSETS: u64 = 10_000;

/// A primitive integer vector with first nonzero coordinate positive.
pub type PrimitiveVector = [i64; 2];

/// Canonical primitive representative of the line through `v`.
pub fn primitive(v: [i64; 2]) -> Option<PrimitiveVector> {
    let g = v[0].gcd(&v[1]);
    if g == 0 {
        return None;
    }
    let (a, b) = (v[0] / g, v[1] / g);
    Some(if a < 0 || (a == 0 && b < 0) { [-a, -b] } else { [a, b] })
}

pub fn det2(u: PrimitiveVector, w: PrimitiveVector) -> i64 {
    u[0] * w[1] - u[1] * w[0]
}

/// An ordered pair of lines in ℚ².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RationalLinePair {
    pub first: PrimitiveVector,
    pub second: PrimitiveVector,
}

impl RationalLinePair {
    pub fn new(first: [i64; 2], second: [i64; 2]) -> Result<Self> {
        let f = primitive(first).ok_or_else(|| LabError::InvalidParameter("zero vector".into()))?;
        let s = primitive(second).ok_or_else(|| LabError::InvalidParameter("zero vector".into()))?;
        Ok(RationalLinePair { first: f, second: s })
    }

    pub fn det(&self) -> i64 {
        det2(self.first, self.second)
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }
}

/// Writes a symbol as a sum of unimodular symbols along the continued-fraction
/// convergents of the second line, read in a basis where the first line is `(1, 0)`.
pub fn manin_reduce(s: &RationalLinePair) -> Vec<(i64, RationalLinePair)> {
    if s.det() == 0 {
        return Vec::new();
    }
    let v = s.first;
    // g = [v | y] with det 1, so g (1,0) = v.
    let ext = v[0].extended_gcd(&v[1]);
    let y = [-ext.y, ext.x];
    let (a, b) = {
        // g^{-1} = [[y1, -y0], [-v1, v0]]
        let w = s.second;
        let a = y[1] * w[0] - y[0] * w[1];
        let b = -v[1] * w[0] + v[0] * w[1];
        if b < 0 {
            (-a, -b)
        } else {
            (a, b)
        }
    };
    let back = |p: i64, q: i64| primitive([v[0] * p + y[0] * q, v[1] * p + y[1] * q]).expect("nonzero convergent");

    let mut chain = vec![v];
    let (mut h_prev, mut k_prev, mut h, mut k) = (0i64, 1i64, 1i64, 0i64);
    let (mut num, mut den) = (a, b);
    while den != 0 {
        let q = Integer::div_floor(&num, &den);
        let (h_next, k_next) = (q * h + h_prev, q * k + k_prev);
        chain.push(back(h_next, k_next));
        (h_prev, k_prev, h, k) = (h, k, h_next, k_next);
        (num, den) = (den, num - q * den);
    }
    chain
        .windows(2)
        .map(|w| (1, RationalLinePair { first: w[0], second: w[1] }))
        .collect()
}

type Mat2 = [u32; 4];

fn mat_mul(x: Mat2, y: Mat2, n: u32) -> Mat2 {
    let m = |a: u32, b: u32| (a as u64 * b as u64 % n as u64) as u32;
    [
        (m(x[0], y[0]) + m(x[1], y[2])) % n,
        (m(x[0], y[1]) + m(x[1], y[3])) % n,
        (m(x[2], y[0]) + m(x[3], y[2])) % n,
        (m(x[2], y[1]) + m(x[3], y[3])) % n,
    ]
}

fn reduce_mat(m: [i64; 4], n: u32) -> Mat2 {
    m.map(|x| x.rem_euclid(n as i64) as u32)
}

/// `|SL_2(ℤ/N)| = N^3 Π_{p | N} (1 - 1/p^2)`.
pub fn sl2_order(level: u64) -> u64 {
    if level == 1 {
        return 1;
    }
    let mut order = level.pow(3);
    let mut m = level;
    let mut p = 2;
    while m > 1 {
        if m.is_multiple_of(p) {
            order = order / (p * p) * (p * p - 1);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    order
}

/// Manin presentation of the coinvariants at level `N`.
pub struct ManinPresentation {
    pub level: u64,
    generators: Vec<Mat2>,
    index: FxHashMap<Mat2, usize>,
    relations: usize,
    echelon: Echelon<RationalField>,
}

impl std::fmt::Debug for ManinPresentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ManinPresentation")
            .field("level", &self.level)
            .field("generators", &self.generators.len())
            .field("relation_rank", &self.echelon.rank())
            .finish()
    }
}

/// Equivalence class of a chain of symbols, as a reduced sparse vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolClass(SparseRow<Rat>);

impl SymbolClass {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

pub const S_MATRIX: [i64; 4] = [0, -1, 1, 0];
pub const R_MATRIX: [i64; 4] = [0, -1, 1, -1];

impl ManinPresentation {
    pub fn new(level: u64) -> Result<Self> {
        if level == 0 {
            return Err(LabError::InvalidParameter("level must be positive".into()));
        }
        let order = sl2_order(level);
        if order > MAX_COSETS {
            return Err(LabError::SizeBound {
                what: "|SL_2(Z/N)|",
                actual: order,
                limit: MAX_COSETS,
            });
        }
        let n = level as u32;
        let mut generators = Vec::with_capacity(order as usize);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if (a as u64 * d as u64 + (n - b) as u64 * c as u64) % n as u64 == 1 % n as u64 {
                            generators.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        debug_assert_eq!(generators.len() as u64, order);
        let index: FxHashMap<Mat2, usize> = generators.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let s = reduce_mat(S_MATRIX, n);
        let r = reduce_mat(R_MATRIX, n);
        let r2 = mat_mul(r, r, n);

        let f = RationalField;
        let mut rows: Vec<SparseRow<Rat>> = Vec::with_capacity(2 * generators.len());
        for &g in &generators {
            rows.push(combine(&[index[&g], index[&mat_mul(g, s, n)]]));
            rows.push(combine(&[index[&g], index[&mat_mul(g, r, n)], index[&mat_mul(g, r2, n)]]));
        }
        let relations = rows.len();
        let echelon = Echelon::build(&f, generators.len(), rows);
        Ok(ManinPresentation {
            level,
            generators,
            index,
            relations,
            echelon,
        })
    }

    pub fn coset_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations
    }

    pub fn relation_rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn dim(&self) -> usize {
        self.coset_count() - self.relation_rank()
    }

    /// Generator of a unimodular pair.
    pub fn generator_of(&self, s: &RationalLinePair) -> Option<usize> {
        let d = s.det();
        if d.abs() != 1 {
            return None;
        }
        let (u, w) = (s.first, s.second);
        let m = reduce_mat([u[0], d * w[0], u[1], d * w[1]], self.level as u32);
        self.index.get(&m).copied()
    }

    /// Class of an arbitrary symbol via its unimodular reduction.
    pub fn class_of(&self, symbols: &[(i64, RationalLinePair)]) -> SymbolClass {
        let mut acc: FxHashMap<usize, i64> = FxHashMap::default();
        for (c, s) in symbols {
            for (sign, piece) in manin_reduce(s) {
                let g = self.generator_of(&piece).expect("reduction yields unimodular pairs");
                *acc.entry(g).or_insert(0) += c * sign;
            }
        }
        let row: Vec<(usize, Rat)> = acc
            .into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|(g, v)| (g, Rat::from_int(v)))
            .collect();
        SymbolClass(self.echelon.reduce_full(&RationalField, self.echelon.relabel(&row)))
    }
}

fn combine(gens: &[usize]) -> SparseRow<Rat> {
    let mut acc: FxHashMap<usize, i64> = FxHashMap::default();
    for &g in gens {
        *acc.entry(g).or_insert(0) += 1;
    }
    let mut row: SparseRow<Rat> = acc.into_iter().map(|(g, v)| (g, Rat::from_int(v))).collect();
    row.sort_by_key(|e| e.0);
    row
}

/// Dimension of the Steinberg coinvariants of Γ(N), equivalently dim H^1(Γ(N); ℚ).
pub fn steinberg_coinvariants_dim(level: u64) -> Result<usize> {
    Ok(ManinPresentation::new(level)?.dim())
}

/// Rank of the free group Γ(N)/±1 from its Euler characteristic, for N ≥ 2:
/// `1 + [PSL_2(ℤ) : Γ̄(N)] / 6`.
pub fn euler_characteristic_rank(level: u64) -> Option<u64> {
    match level {
        0 | 1 => None,
        2 => Some(2),
        _ => Some(1 + sl2_order(level) / 2 / 6),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    pub level: u64,
    pub cosets: usize,
    pub relation_rank: usize,
    pub dim: usize,
    pub oracle: Option<u64>,
    pub pass: bool,
}

pub fn level_report(level: u64) -> Result<LevelReport> {
    let pres = ManinPresentation::new(level)?;
    let oracle = euler_characteristic_rank(level);
    let dim = pres.dim();
    Ok(LevelReport {
        level,
        cosets: pres.coset_count(),
        relation_rank: pres.relation_rank(),
        dim,
        oracle,
        pass: oracle.map_or(dim == 0, |o| o == dim as u64),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NonvanishingCertificate {
    pub levels: Vec<LevelReport>,
    /// Levels above 1 where the dimension vanished.
    pub vanishing: Vec<u64>,
    pub pass: bool,
}

pub fn nonvanishing_check(levels: impl IntoIterator<Item = u64>) -> Result<NonvanishingCertificate> {
    let levels: Vec<LevelReport> = levels.into_iter().map(level_report).collect::<Result<_>>()?;
    let vanishing: Vec<u64> = levels.iter().filter(|r| r.level > 1 && r.dim == 0).map(|r| r.level).collect();
    Ok(NonvanishingCertificate {
        pass: vanishing.is_empty(),
        levels,
        vanishing,
    })
}
