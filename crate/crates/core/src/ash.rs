//! Ash's complex over F_p: the free module on spanning sets of lines.
//!
//! Tuples of lines are quotiented by antisymmetry and by killing non-spanning
//! tuples, so degree `k` has one basis element per spanning set of `n + k`
//! distinct lines. Sets are bitmasks over the global line order and the
//! orientation of a set is its increasing order.

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::building::{apartment_class, chains_to_matrix, steinberg_space, Frame, TitsBuilding, TopChain};
use crate::complex::ChainComplex;
use crate::error::{LabError, Result};
use crate::matrix::ExactMatrix;
use crate::projective::{LineSpace, Subspace};
use crate::scalar::FieldKind;

pub const MAX_ASH_LINES: usize = 15;

/// A set of distinct lines as a bitmask of global line indices.
pub type LineSet = u64;

pub fn members(set: LineSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| set >> i & 1 == 1)
}

/// Sign of the permutation sorting a sequence of distinct indices.
pub fn sort_sign(seq: &[u32]) -> i64 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            inv += (seq[i] > seq[j]) as usize;
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Spanning test via hyperplane masks: a set spans iff it meets the complement
/// of every hyperplane.
#[derive(Debug, Clone)]
pub struct SpanOracle {
    hyperplanes: Vec<LineSet>,
}

impl SpanOracle {
    pub fn new(space: &LineSpace) -> Result<Self> {
        if space.len() > 64 {
            return Err(LabError::SizeBound {
                what: "line count for bitmask sets",
                actual: space.len() as u64,
                limit: 64,
            });
        }
        let n = space.n;
        let hyperplanes = if n == 1 {
            vec![0]
        } else {
            // Hyperplanes are kernels of the dual lines.
            (0..space.len())
                .map(|h| {
                    let normal = space.coords(h);
                    (0..space.len())
                        .filter(|&l| {
                            let v = space.coords(l);
                            normal.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % space.p == 0
                        })
                        .fold(0u64, |m, l| m | 1 << l)
                })
                .collect()
        };
        Ok(SpanOracle { hyperplanes })
    }

    pub fn spans(&self, set: LineSet) -> bool {
        self.hyperplanes.iter().all(|&h| set & !h != 0)
    }
}

/// Normalizes an ordered tuple of line indices: `None` if a line repeats or the
/// lines fail to span, otherwise the sign of the sorting permutation and the set.
pub fn normalize_tuple(lines: &[usize], oracle: &SpanOracle) -> Option<(i64, LineSet)> {
    let mut set: LineSet = 0;
    for &l in lines {
        if set >> l & 1 == 1 {
            return None;
        }
        set |= 1 << l;
    }
    if !oracle.spans(set) {
        return None;
    }
    let seq: Vec<u32> = lines.iter().map(|&l| l as u32).collect();
    Some((sort_sign(&seq), set))
}

/// Image of a set under a permutation of lines, with the induced sign.
pub fn act_on_set(perm: &[u32], set: LineSet) -> (i64, LineSet) {
    let images: Vec<u32> = members(set).map(|l| perm[l]).collect();
    let mask = images.iter().fold(0u64, |m, &l| m | 1 << l);
    (sort_sign(&images), mask)
}

/// Boundary of a set: `Σ_i (-1)^i [.. l̂_i ..]` over spanning faces.
pub fn boundary_terms(set: LineSet, oracle: &SpanOracle) -> Vec<(i64, LineSet)> {
    members(set)
        .enumerate()
        .filter_map(|(i, l)| {
            let face = set & !(1 << l);
            oracle.spans(face).then_some((if i % 2 == 0 { 1 } else { -1 }, face))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct AshComplex {
    pub n: usize,
    pub p: u64,
    lines: LineSpace,
    oracle: SpanOracle,
    bases: Vec<Vec<LineSet>>,
    index: Vec<FxHashMap<LineSet, usize>>,
    complex: ChainComplex,
}

fn set_key(set: LineSet) -> Vec<usize> {
    members(set).collect()
}

impl AshComplex {
    pub fn new(n: usize, p: u64) -> Result<Self> {
        let lines = LineSpace::new(n, p)?;
        let m = lines.len();
        if m > MAX_ASH_LINES {
            return Err(LabError::SizeBound {
                what: "line count",
                actual: m as u64,
                limit: MAX_ASH_LINES as u64,
            });
        }
        let oracle = SpanOracle::new(&lines)?;
        let top = m - n;
        let mut bases: Vec<Vec<LineSet>> = vec![Vec::new(); top + 1];
        for set in 0u64..(1 << m) {
            let size = set.count_ones() as usize;
            if size >= n && oracle.spans(set) {
                bases[size - n].push(set);
            }
        }
        for b in bases.iter_mut() {
            b.sort_by_key(|&s| set_key(s));
        }
        let index: Vec<FxHashMap<LineSet, usize>> = bases.iter().map(|b| b.iter().enumerate().map(|(i, &s)| (s, i)).collect()).collect();
        let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
        let boundaries: Vec<ExactMatrix> = (1..=top)
            .map(|k| {
                let triples = bases[k].iter().enumerate().flat_map(|(col, &set)| {
                    boundary_terms(set, &oracle)
                        .into_iter()
                        .map(|(s, face)| (index[k - 1][&face], col, s))
                        .collect::<Vec<_>>()
                });
                ExactMatrix::from_int_triples(dims[k - 1], dims[k], FieldKind::Rational, triples)
            })
            .collect();
        let complex = ChainComplex::new(FieldKind::Rational, dims, boundaries)?;
        Ok(AshComplex {
            n,
            p,
            lines,
            oracle,
            bases,
            index,
            complex,
        })
    }

    pub fn lines(&self) -> &LineSpace {
        &self.lines
    }

    pub fn oracle(&self) -> &SpanOracle {
        &self.oracle
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, k: usize) -> &[LineSet] {
        &self.bases[k]
    }

    pub fn basis_sizes(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, k: usize, set: LineSet) -> Option<usize> {
        self.index.get(k)?.get(&set).copied()
    }

    /// Degree of a set in this complex.
    pub fn degree_of(&self, set: LineSet) -> usize {
        set.count_ones() as usize - self.n
    }

    /// Basis element as sorted line indices.
    pub fn element_lines(&self, k: usize, i: usize) -> Vec<usize> {
        set_key(self.bases[k][i])
    }
}

pub fn build_ash_complex(n: usize, p: u64) -> Result<AshComplex> {
    AshComplex::new(n, p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessCertificate {
    pub n: usize,
    pub p: u64,
    pub basis_sizes: Vec<usize>,
    pub homology: Vec<usize>,
    pub euler_characteristic: i64,
    pub steinberg_dim: usize,
    pub pass: bool,
}

/// Higher homology vanishes and `H_0` has the Steinberg dimension.
pub fn exactness_check(n: usize, p: u64) -> Result<ExactnessCertificate> {
    let ash = AshComplex::new(n, p)?;
    let st = steinberg_space(&TitsBuilding::new(n, p)?)?.dim();
    exactness_of(&ash, st)
}

pub fn exactness_of(ash: &AshComplex, steinberg_dim: usize) -> Result<ExactnessCertificate> {
    let homology = ash.complex().homology_dimensions()?;
    let pass = homology[0] == steinberg_dim && homology[1..].iter().all(|&h| h == 0);
    Ok(ExactnessCertificate {
        n: ash.n,
        p: ash.p,
        basis_sizes: ash.basis_sizes(),
        homology,
        euler_characteristic: ash.complex().euler_characteristic(),
        steinberg_dim,
        pass,
    })
}

/// Apartment class of a degree-0 basis element, taking its lines in increasing order.
pub fn h0_image(set: LineSet, b: &TitsBuilding) -> Result<TopChain> {
    apartment_class(&Frame { lines: set_key(set) }, b)
}

/// The map `C_0 -> top chains of the building`, one column per frame.
pub fn h0_matrix(ash: &AshComplex, b: &TitsBuilding) -> Result<ExactMatrix> {
    let cols: Vec<TopChain> = ash.basis(0).iter().map(|&s| h0_image(s, b)).collect::<Result<_>>()?;
    Ok(chains_to_matrix(b.simplices(b.top_dim()).len(), &cols))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H0IsoCertificate {
    pub n: usize,
    pub p: u64,
    pub c0_dim: usize,
    pub steinberg_dim: usize,
    pub image_rank: usize,
    pub boundary_rank: usize,
    pub image_in_cycles: bool,
    pub relations_vanish: bool,
    pub surjective: bool,
    pub kernel_is_boundaries: bool,
    /// A vector of `C_0` witnessing the first failed condition.
    pub witness: Option<Vec<String>>,
    pub pass: bool,
}

/// Certifies that frames-to-apartments induces `H_0(C) ≅ St`.
pub fn h0_to_steinberg(n: usize, p: u64) -> Result<H0IsoCertificate> {
    let ash = AshComplex::new(n, p)?;
    let b = TitsBuilding::new(n, p)?;
    h0_iso_of(&ash, &b)
}

pub fn h0_iso_of(ash: &AshComplex, b: &TitsBuilding) -> Result<H0IsoCertificate> {
    let st = steinberg_space(b)?.dim();
    let a = h0_matrix(ash, b)?;
    let c0 = ash.basis(0).len();
    let mut witness = None;

    let top_boundary = b.augmented_complex().boundary(b.top_dim() + 1).expect("top boundary");
    let closure = top_boundary.mul(&a)?;
    let image_in_cycles = closure.is_zero();
    if let Some((_, c, _)) = closure.iter().next() {
        witness = Some(unit_witness(c0, c));
    }

    let relations_vanish = match ash.complex().boundary(1) {
        Some(d1) => {
            let comp = a.mul(d1)?;
            if let (None, Some((_, c, _))) = (&witness, comp.iter().next()) {
                witness = Some(d1.column(c).iter().map(ToString::to_string).collect());
            }
            comp.is_zero()
        }
        None => true,
    };
    let boundary_rank = ash.complex().boundary(1).map_or(0, ExactMatrix::rank);
    let image_rank = a.rank();
    let surjective = image_in_cycles && image_rank == st;
    let kernel_is_boundaries = relations_vanish && boundary_rank + image_rank == c0;
    if witness.is_none() && !kernel_is_boundaries {
        // A kernel vector of the map that is not a boundary.
        let d1 = ash
            .complex()
            .boundary(1)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(c0, 0, FieldKind::Rational));
        for v in a.kernel_basis() {
            let col = ExactMatrix::from_columns(c0, std::slice::from_ref(&v), FieldKind::Rational);
            if d1.hstack(&col)?.rank() > boundary_rank {
                witness = Some(v.iter().map(ToString::to_string).collect());
                break;
            }
        }
    }
    Ok(H0IsoCertificate {
        n: ash.n,
        p: ash.p,
        c0_dim: c0,
        steinberg_dim: st,
        image_rank,
        boundary_rank,
        image_in_cycles,
        relations_vanish,
        surjective,
        kernel_is_boundaries,
        witness,
        pass: surjective && kernel_is_boundaries,
    })
}

fn unit_witness(len: usize, at: usize) -> Vec<String> {
    (0..len).map(|i| if i == at { "1".into() } else { "0".into() }).collect()
}

/// Span of a line set as a subspace.
pub fn set_span(space: &LineSpace, set: LineSet) -> Subspace {
    space.span(members(set))
}
