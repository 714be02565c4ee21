//! Chevalley–Eilenberg cohomology of the strictly upper-triangular Lie algebra.
//!
//! The algebra has basis `e_ij` (`i < j <= n`) with
//! `[e_ij, e_kl] = δ_jk e_il - δ_li e_kj`. Cochains are wedge monomials in the
//! dual basis, stored as bitmasks. On degree one, `(dξ)(x ∧ y) = -ξ([x, y])`,
//! extended to all degrees as a graded derivation.

use rustc_hash::FxHashMap;

use crate::complex::{alternating_sum, ChainComplex};
use crate::error::{LabError, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::FieldKind;

/// Basis of the nilpotent algebra, in lexicographic order of `(i, j)`.
#[derive(Debug, Clone)]
pub struct NilpotentAlgebra {
    pub n: usize,
    pub basis: Vec<(usize, usize)>,
    /// `bracket[a][b]` = `Some((sign, c))` when `[e_a, e_b] = sign * e_c`.
    bracket: Vec<Vec<Option<(i64, usize)>>>,
}

impl NilpotentAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=6).contains(&n) {
            return Err(LabError::InvalidParameter(format!("nilpotent algebra needs 2 <= n <= 6, got {n}")));
        }
        let basis: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        let index: FxHashMap<(usize, usize), usize> = basis.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let m = basis.len();
        let mut bracket = vec![vec![None; m]; m];
        for (a, &(i, j)) in basis.iter().enumerate() {
            for (b, &(k, l)) in basis.iter().enumerate() {
                // Only one of the two terms can be nonzero for strictly upper indices.
                if j == k {
                    bracket[a][b] = Some((1, index[&(i, l)]));
                } else if l == i {
                    bracket[a][b] = Some((-1, index[&(k, j)]));
                }
            }
        }
        Ok(NilpotentAlgebra { n, basis, bracket })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `[e_a, e_b]` as `(sign, c)`, or `None` when it vanishes.
    pub fn bracket(&self, a: usize, b: usize) -> Option<(i64, usize)> {
        self.bracket[a][b]
    }

    /// `d e^c` as a list of `(coefficient, a, b)` with `a < b`.
    fn differential_of_dual(&self, c: usize) -> Vec<(i64, usize, usize)> {
        let m = self.dim();
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if let Some((s, target)) = self.bracket[a][b] {
                    if target == c {
                        out.push((-s, a, b));
                    }
                }
            }
        }
        out
    }

    /// Cochain differential `d_k : Λ^k -> Λ^{k+1}` as matrices, plus the
    /// monomial bases of every degree.
    pub fn cochain_complex(&self) -> (Vec<Vec<u32>>, Vec<ExactMatrix>) {
        let m = self.dim();
        let mut bases: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
        for mask in 0u32..(1 << m) {
            bases[mask.count_ones() as usize].push(mask);
        }
        let index: Vec<FxHashMap<u32, usize>> = bases.iter().map(|b| b.iter().enumerate().map(|(i, &x)| (x, i)).collect()).collect();
        let dual: Vec<Vec<(i64, usize, usize)>> = (0..m).map(|c| self.differential_of_dual(c)).collect();

        let mut diffs = Vec::with_capacity(m);
        for k in 0..m {
            let mut triples = Vec::new();
            for (col, &mask) in bases[k].iter().enumerate() {
                let factors: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
                for (pos, &c) in factors.iter().enumerate() {
                    let pos_sign = if pos % 2 == 0 { 1 } else { -1 };
                    for &(coeff, a, b) in &dual[c] {
                        let mut seq: Vec<usize> = Vec::with_capacity(k + 1);
                        seq.extend_from_slice(&factors[..pos]);
                        seq.push(a);
                        seq.push(b);
                        seq.extend_from_slice(&factors[pos + 1..]);
                        if let Some((sort_sign, out)) = wedge_normalize(&seq) {
                            triples.push((index[k + 1][&out], col, pos_sign * coeff * sort_sign));
                        }
                    }
                }
            }
            diffs.push(ExactMatrix::from_int_triples(
                bases[k + 1].len(),
                bases[k].len(),
                FieldKind::Rational,
                triples,
            ));
        }
        (bases, diffs)
    }

    /// The cochain complex re-indexed as a chain complex with `C_j = Λ^{m-j}`.
    pub fn as_chain_complex(&self) -> Result<ChainComplex> {
        let m = self.dim();
        let (bases, diffs) = self.cochain_complex();
        let dims: Vec<usize> = (0..=m).map(|j| bases[m - j].len()).collect();
        // Boundary of degree j is d_{m-j} : Λ^{m-j} -> Λ^{m-j+1}.
        let boundaries: Vec<ExactMatrix> = (1..=m).map(|j| diffs[m - j].clone()).collect();
        ChainComplex::new(FieldKind::Rational, dims, boundaries)
    }
}

/// Sorts a wedge word; `None` if a factor repeats.
fn wedge_normalize(seq: &[usize]) -> Option<(i64, u32)> {
    let mut mask = 0u32;
    let mut inversions = 0usize;
    for (i, &x) in seq.iter().enumerate() {
        if mask >> x & 1 == 1 {
            return None;
        }
        mask |= 1 << x;
        inversions += seq[..i].iter().filter(|&&y| y > x).count();
    }
    Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, mask))
}

/// Betti numbers `b_0 .. b_{C(n,2)}` of the nilpotent Lie algebra cohomology.
pub fn chevalley_eilenberg_betti(n: usize) -> Result<Vec<usize>> {
    let alg = NilpotentAlgebra::new(n)?;
    let complex = alg.as_chain_complex()?;
    let mut betti = complex.homology_dimensions()?;
    betti.reverse();
    debug_assert_eq!(alternating_sum(&betti).abs(), complex.euler_characteristic().abs());
    Ok(betti)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_line() {
        assert_eq!(chevalley_eilenberg_betti(2).unwrap(), vec![1, 1]);
    }

    #[test]
    fn heisenberg() {
        assert_eq!(chevalley_eilenberg_betti(3).unwrap(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn n4_is_palindromic_with_unit_ends() {
        let b = chevalley_eilenberg_betti(4).unwrap();
        assert_eq!(b.len(), 7);
        assert_eq!((b[0], b[6]), (1, 1));
        let mut r = b.clone();
        r.reverse();
        assert_eq!(b, r);
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let alg = NilpotentAlgebra::new(4).unwrap();
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                let ab = alg.bracket(a, b).map(|(s, c)| (-s, c));
                assert_eq!(ab, alg.bracket(b, a));
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(chevalley_eilenberg_betti(1).is_err());
        assert!(chevalley_eilenberg_betti(7).is_err());
    }
}
