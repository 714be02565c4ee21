//! Finite chain complexes and chain maps over an exact field.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::FieldKind;

/// Chain complex `C_K -> ... -> C_1 -> C_0` with explicit boundary matrices.
///
/// `boundary(k)` maps degree `k` to degree `k - 1`; `boundary(0)` is the zero
/// map out of `C_0`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    field: FieldKind,
    dims: Vec<usize>,
    boundaries: Vec<ExactMatrix>,
}

/// First nonzero entry of a composite `d_{degree-1} d_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexDefect {
    pub degree: usize,
    pub row: usize,
    pub col: usize,
    pub value: String,
}

/// Outcome of checking `d d = 0` on every consecutive pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexCertificate {
    pub pass: bool,
    pub failure: Option<ComplexDefect>,
}

impl ChainComplex {
    /// `boundaries[k - 1]` must be a `dims[k-1] x dims[k]` matrix.
    pub fn new(field: FieldKind, dims: Vec<usize>, boundaries: Vec<ExactMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(LabError::Dimension("complex needs at least one degree".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(LabError::Dimension(format!(
                "{} degrees need {} boundary maps, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            let k = i + 1;
            if b.rows() != dims[k - 1] || b.cols() != dims[k] || b.field() != field {
                return Err(LabError::Dimension(format!(
                    "boundary d_{k} is {}x{} over {}, expected {}x{} over {field}",
                    b.rows(),
                    b.cols(),
                    b.field(),
                    dims[k - 1],
                    dims[k]
                )));
            }
        }
        Ok(ChainComplex { field, dims, boundaries })
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    /// Top degree `K`.
    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `d_k : C_k -> C_{k-1}` for `1 <= k <= K`.
    pub fn boundary(&self, k: usize) -> Option<&ExactMatrix> {
        if k == 0 {
            None
        } else {
            self.boundaries.get(k - 1)
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.dims)
    }

    /// Checks every composite `d_k d_{k+1}` is the zero matrix.
    pub fn verify(&self) -> ComplexCertificate {
        let failure = (1..self.boundaries.len())
            .into_par_iter()
            .map(|k| {
                let prod = self.boundaries[k - 1]
                    .mul(&self.boundaries[k])
                    .expect("shapes checked at construction");
                let first = prod.iter().next().map(|(r, c, v)| ComplexDefect {
                    degree: k + 1,
                    row: r,
                    col: c,
                    value: v.to_string(),
                });
                first
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next();
        ComplexCertificate {
            pass: failure.is_none(),
            failure,
        }
    }

    /// Ranks of `d_1 .. d_K`, computed in parallel.
    pub fn boundary_ranks(&self) -> Vec<usize> {
        self.boundaries.par_iter().map(ExactMatrix::rank).collect()
    }

    /// `dim H_k = dim C_k - rank d_k - rank d_{k+1}` for every degree.
    pub fn homology_dimensions(&self) -> Result<Vec<usize>> {
        let cert = self.verify();
        if let Some(d) = cert.failure {
            return Err(LabError::NotAComplex {
                degree: d.degree,
                row: d.row,
                col: d.col,
                value: d.value,
            });
        }
        Ok(self.homology_from_ranks(&self.boundary_ranks()))
    }

    /// Homology dimensions from precomputed boundary ranks (`ranks[k-1] = rank d_k`).
    pub fn homology_from_ranks(&self, ranks: &[usize]) -> Vec<usize> {
        (0..self.dims.len())
            .map(|k| {
                let out = if k == 0 { 0 } else { ranks[k - 1] };
                let inc = ranks.get(k).copied().unwrap_or(0);
                self.dims[k] - out - inc
            })
            .collect()
    }
}

/// `sum_k (-1)^k v_k`.
pub fn alternating_sum(values: &[usize]) -> i64 {
    values
        .iter()
        .enumerate()
        .map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
        .sum()
}

pub fn verify_complex(c: &ChainComplex) -> ComplexCertificate {
    c.verify()
}

pub fn homology_dimensions(c: &ChainComplex) -> Result<Vec<usize>> {
    c.homology_dimensions()
}

/// Degree-preserving maps `f_k : C_k -> D_k` for `k = 0..=K` of the source.
#[derive(Debug, Clone)]
pub struct ChainMap {
    maps: Vec<ExactMatrix>,
}

/// Result of checking `d' f_k = f_{k-1} d` in every degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainMapCertificate {
    pub pass: bool,
    pub degrees_checked: usize,
    /// Degree and source basis index of the first failing column.
    pub failure: Option<(usize, usize)>,
}

impl ChainMap {
    pub fn new(source: &ChainComplex, target: &ChainComplex, maps: Vec<ExactMatrix>) -> Result<Self> {
        if maps.len() != source.dims().len() {
            return Err(LabError::Dimension(format!(
                "chain map needs {} components, got {}",
                source.dims().len(),
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.cols() != source.dim(k) || m.rows() != target.dim(k) {
                return Err(LabError::Dimension(format!(
                    "component f_{k} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(k),
                    source.dim(k)
                )));
            }
        }
        Ok(ChainMap { maps })
    }

    pub fn component(&self, k: usize) -> &ExactMatrix {
        &self.maps[k]
    }

    pub fn degrees(&self) -> usize {
        self.maps.len()
    }

    /// Exact commutation check against the complexes the map was built for.
    pub fn verify(&self, source: &ChainComplex, target: &ChainComplex) -> ChainMapCertificate {
        let failure = (1..self.maps.len())
            .into_par_iter()
            .map(|k| {
                let lhs = target.boundary(k).expect("target has degree k").mul(&self.maps[k]).expect("shapes");
                let rhs = self.maps[k - 1]
                    .mul(source.boundary(k).expect("source has degree k"))
                    .expect("shapes");
                let diff = lhs.sub(&rhs).expect("shapes");
                diff.iter().map(|(_, c, _)| c).min().map(|c| (k, c))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next();
        ChainMapCertificate {
            pass: failure.is_none(),
            degrees_checked: self.maps.len(),
            failure,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldKind = FieldKind::Rational;

    /// Boundary of a triangle: vertices 0,1,2; edges 01, 02, 12.
    fn triangle(flip: bool) -> (Vec<usize>, Vec<ExactMatrix>) {
        let d1 = ExactMatrix::from_int_triples(3, 3, Q, [(0, 0, -1), (1, 0, 1), (0, 1, -1), (2, 1, 1), (1, 2, -1), (2, 2, 1)]);
        let s = if flip { -1 } else { 1 };
        // d[012] = [12] - [02] + [01]
        let d2 = ExactMatrix::from_int_triples(3, 1, Q, [(2, 0, 1), (1, 0, -1), (0, 0, s)]);
        (vec![3, 3, 1], vec![d1, d2])
    }

    #[test]
    fn circle_homology() {
        let (dims, mut bs) = triangle(false);
        bs.pop();
        let c = ChainComplex::new(Q, dims[..2].to_vec(), bs).unwrap();
        assert_eq!(c.homology_dimensions().unwrap(), vec![1, 1]);
    }

    #[test]
    fn point_and_disk() {
        let pt = ChainComplex::new(Q, vec![1], vec![]).unwrap();
        assert_eq!(pt.homology_dimensions().unwrap(), vec![1]);
        assert!(pt.verify().pass);
        let (dims, bs) = triangle(false);
        let disk = ChainComplex::new(Q, dims, bs).unwrap();
        assert!(disk.verify().pass);
        assert_eq!(disk.homology_dimensions().unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn sign_flip_detected_at_degree_two() {
        let (dims, bs) = triangle(true);
        let c = ChainComplex::new(Q, dims, bs).unwrap();
        let cert = c.verify();
        assert!(!cert.pass);
        assert_eq!(cert.failure.unwrap().degree, 2);
        assert!(c.homology_dimensions().is_err());
    }

    #[test]
    fn shape_errors() {
        let bad = ExactMatrix::zeros(2, 2, Q);
        assert!(ChainComplex::new(Q, vec![3, 2], vec![bad]).is_err());
        assert!(ChainComplex::new(Q, vec![], vec![]).is_err());
    }

    #[test]
    fn identity_chain_map() {
        let (dims, bs) = triangle(false);
        let c = ChainComplex::new(Q, dims.clone(), bs).unwrap();
        let maps = dims.iter().map(|&d| ExactMatrix::identity(d, Q)).collect();
        let f = ChainMap::new(&c, &c, maps).unwrap();
        assert!(f.verify(&c, &c).pass);
    }
}
