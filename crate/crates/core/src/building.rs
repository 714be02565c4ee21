//! The Tits building of F_p^n and its top homology.
//!
//! Simplices are flags of proper nonzero subspaces, stored with vertices in
//! increasing dimension. The chain complex is augmented (degree 0 is the empty
//! simplex), so its homology in degree `d + 1` is the reduced homology of the
//! building in degree `d`.

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::complex::ChainComplex;
use crate::error::{LabError, Result};
use crate::matrix::ExactMatrix;
use crate::projective::{enumerate_proper_subspaces, FpMatrix, LineSpace, Subspace};
use crate::scalar::{ExactScalar, FieldKind};

/// Integer chain on the top simplices, indexed like [`TitsBuilding::simplices`].
pub type TopChain = Vec<i64>;

#[derive(Debug, Clone)]
pub struct TitsBuilding {
    pub n: usize,
    pub p: u64,
    lines: LineSpace,
    vertices: Vec<Subspace>,
    vertex_index: FxHashMap<Subspace, usize>,
    /// `simplices[d]` lists the d-simplices as increasing vertex-index chains.
    simplices: Vec<Vec<Vec<usize>>>,
    simplex_index: Vec<FxHashMap<Vec<usize>, usize>>,
    complex: ChainComplex,
}

impl TitsBuilding {
    pub fn new(n: usize, p: u64) -> Result<Self> {
        if !(2..=4).contains(&n) {
            return Err(LabError::InvalidParameter(format!("building needs 2 <= n <= 4, got {n}")));
        }
        let lines = LineSpace::new(n, p)?;
        let vertices = enumerate_proper_subspaces(n, p)?;
        let vertex_index: FxHashMap<Subspace, usize> = vertices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();

        // Strict containments, only between vertices of larger dimension.
        let up: Vec<Vec<usize>> = vertices
            .iter()
            .map(|v| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| w.dim() > v.dim() && v.is_subspace_of(w))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();

        let top = n - 2;
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 1];
        fn extend(chain: &mut Vec<usize>, up: &[Vec<usize>], out: &mut [Vec<Vec<usize>>]) {
            out[chain.len() - 1].push(chain.clone());
            if chain.len() == out.len() {
                return;
            }
            let last = *chain.last().expect("nonempty chain");
            for &w in &up[last] {
                chain.push(w);
                extend(chain, up, out);
                chain.pop();
            }
        }
        for v in 0..vertices.len() {
            extend(&mut vec![v], &up, &mut simplices);
        }
        for list in simplices.iter_mut() {
            list.sort();
        }
        let simplex_index: Vec<FxHashMap<Vec<usize>, usize>> = simplices
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();

        let mut dims = vec![1usize];
        dims.extend(simplices.iter().map(Vec::len));
        let mut boundaries = Vec::with_capacity(top + 1);
        // Augmentation: every vertex maps to the empty simplex.
        boundaries.push(ExactMatrix::from_int_triples(
            1,
            simplices[0].len(),
            FieldKind::Rational,
            (0..simplices[0].len()).map(|c| (0, c, 1)),
        ));
        for d in 1..=top {
            let mut triples = Vec::new();
            for (col, s) in simplices[d].iter().enumerate() {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    let row = simplex_index[d - 1][&face];
                    triples.push((row, col, if i % 2 == 0 { 1 } else { -1 }));
                }
            }
            boundaries.push(ExactMatrix::from_int_triples(
                simplices[d - 1].len(),
                simplices[d].len(),
                FieldKind::Rational,
                triples,
            ));
        }
        let complex = ChainComplex::new(FieldKind::Rational, dims, boundaries)?;
        Ok(TitsBuilding {
            n,
            p,
            lines,
            vertices,
            vertex_index,
            simplices,
            simplex_index,
            complex,
        })
    }

    pub fn lines(&self) -> &LineSpace {
        &self.lines
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn vertex_of(&self, s: &Subspace) -> Option<usize> {
        self.vertex_index.get(s).copied()
    }

    pub fn top_dim(&self) -> usize {
        self.n - 2
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        &self.simplices[d]
    }

    pub fn simplex_counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    /// Index of the top simplex given by a flag of subspaces.
    pub fn top_simplex_of(&self, flag: &[Subspace]) -> Option<usize> {
        let chain: Option<Vec<usize>> = flag.iter().map(|s| self.vertex_of(s)).collect();
        self.simplex_index[self.top_dim()].get(&chain?).copied()
    }

    /// The augmented chain complex (degree `d + 1` holds the d-simplices).
    pub fn augmented_complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// Boundary of a top chain, as a chain on (top - 1)-simplices (or on the
    /// empty simplex when the top dimension is 0).
    pub fn boundary_of_top(&self, chain: &[i64]) -> Vec<i64> {
        let top = self.top_dim();
        assert_eq!(chain.len(), self.simplices[top].len());
        if top == 0 {
            return vec![chain.iter().sum()];
        }
        let mut out = vec![0i64; self.simplices[top - 1].len()];
        for (s, &c) in self.simplices[top].iter().zip(chain) {
            if c == 0 {
                continue;
            }
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                out[self.simplex_index[top - 1][&face]] += sign * c;
            }
        }
        out
    }

    pub fn is_cycle(&self, chain: &[i64]) -> bool {
        self.boundary_of_top(chain).iter().all(|&x| x == 0)
    }

    /// Reduced Betti numbers in degrees `0..=n-2`.
    pub fn reduced_betti(&self) -> Result<Vec<usize>> {
        let h = self.complex.homology_dimensions()?;
        if h[0] != 0 {
            return Err(LabError::Dimension("augmentation not surjective".into()));
        }
        Ok(h[1..].to_vec())
    }

    /// Image of a top chain under a matrix acting on F_p^n.
    pub fn act_on_top_chain(&self, g: &FpMatrix, chain: &[i64]) -> TopChain {
        let top = self.top_dim();
        let vmap: Vec<usize> = self.vertices.iter().map(|v| self.vertex_index[&v.transform(g)]).collect();
        let mut out = vec![0i64; chain.len()];
        for (s, &c) in self.simplices[top].iter().zip(chain) {
            if c != 0 {
                let image: Vec<usize> = s.iter().map(|&v| vmap[v]).collect();
                out[self.simplex_index[top][&image]] += c;
            }
        }
        out
    }
}

pub fn build_building(n: usize, p: u64) -> Result<TitsBuilding> {
    TitsBuilding::new(n, p)
}

/// Top cycle space of the building.
#[derive(Debug, Clone)]
pub struct SteinbergSpace {
    pub n: usize,
    pub p: u64,
    pub basis: Vec<Vec<ExactScalar>>,
}

impl SteinbergSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `p^{n(n-1)/2}`, the expected Steinberg dimension.
pub fn steinberg_dimension_formula(n: usize, p: u64) -> u64 {
    p.pow((n * (n - 1) / 2) as u32)
}

/// Kernel of the top boundary map; also checks the lower reduced homology vanishes.
pub fn steinberg_space(b: &TitsBuilding) -> Result<SteinbergSpace> {
    let betti = b.reduced_betti()?;
    if let Some(d) = betti[..b.top_dim()].iter().position(|&x| x != 0) {
        return Err(LabError::Dimension(format!("reduced homology nonzero in degree {d}")));
    }
    let top = b.augmented_complex().boundary(b.top_dim() + 1).expect("top boundary");
    let basis = top.kernel_basis();
    debug_assert_eq!(basis.len(), betti[b.top_dim()]);
    Ok(SteinbergSpace { n: b.n, p: b.p, basis })
}

/// Ordered tuple of `n` lines spanning F_p^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Frame {
    pub lines: Vec<usize>,
}

impl Frame {
    pub fn new(lines: Vec<usize>, space: &LineSpace) -> Result<Self> {
        if lines.len() != space.n || space.rank_of(lines.iter().copied()) != space.n {
            return Err(LabError::NotSpanning);
        }
        Ok(Frame { lines })
    }
}

/// All permutations of `0..n` with their signs, in lexicographic order.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i64)>) {
        if cur.len() == n {
            out.push((cur.clone(), permutation_sign(cur)));
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Sign of a sequence of distinct keys relative to its sorted order.
pub fn permutation_sign<T: Ord>(seq: &[T]) -> i64 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Fundamental class of the apartment of a frame:
/// `Σ_σ sgn(σ) [V_{σ(1)} < V_{σ(1)σ(2)} < ... < V_{σ(1)..σ(n-1)}]`.
pub fn apartment_class(f: &Frame, b: &TitsBuilding) -> Result<TopChain> {
    let lines = b.lines();
    if f.lines.len() != b.n || lines.rank_of(f.lines.iter().copied()) != b.n {
        return Err(LabError::NotSpanning);
    }
    let top = b.top_dim();
    let mut chain = vec![0i64; b.simplices(top).len()];
    for (perm, sign) in signed_permutations(b.n) {
        let flag: Vec<Subspace> = (1..b.n).map(|i| lines.span(perm[..i].iter().map(|&k| f.lines[k]))).collect();
        let idx = b.top_simplex_of(&flag).expect("frame flags are building simplices");
        chain[idx] += sign;
    }
    Ok(chain)
}

/// All frames as sorted spanning `n`-subsets of lines.
pub fn sorted_frames(space: &LineSpace) -> Vec<Vec<usize>> {
    crate::projective::combinations(space.len(), space.n)
        .into_iter()
        .filter(|s| space.rank_of(s.iter().copied()) == space.n)
        .collect()
}

pub(crate) fn chains_to_matrix(rows: usize, chains: &[TopChain]) -> ExactMatrix {
    ExactMatrix::from_int_triples(
        rows,
        chains.len(),
        FieldKind::Rational,
        chains
            .iter()
            .enumerate()
            .flat_map(|(c, ch)| ch.iter().enumerate().filter(|(_, &v)| v != 0).map(move |(r, &v)| (r, c, v))),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApartmentSpanCertificate {
    pub n: usize,
    pub p: u64,
    pub frames: usize,
    pub rank: usize,
    pub steinberg_dim: usize,
    pub all_cycles: bool,
    pub pass: bool,
}

/// Apartment classes of all frames span the top cycle space.
pub fn apartment_span_check(n: usize, p: u64) -> Result<ApartmentSpanCertificate> {
    let b = TitsBuilding::new(n, p)?;
    let st = steinberg_space(&b)?;
    let frames = sorted_frames(b.lines());
    let classes: Vec<TopChain> = frames
        .iter()
        .map(|f| apartment_class(&Frame { lines: f.clone() }, &b))
        .collect::<Result<_>>()?;
    let all_cycles = classes.iter().all(|c| b.is_cycle(c));
    let rank = chains_to_matrix(b.simplices(b.top_dim()).len(), &classes).rank();
    Ok(ApartmentSpanCertificate {
        n,
        p,
        frames: frames.len(),
        rank,
        steinberg_dim: st.dim(),
        all_cycles,
        pass: all_cycles && rank == st.dim(),
    })
}

/// JSON-ready building summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildingSummary {
    pub n: usize,
    pub p: u64,
    pub vertices: usize,
    pub simplex_counts: Vec<usize>,
    pub reduced_betti: Vec<usize>,
    pub steinberg_dim: usize,
}

pub fn building_summary(b: &TitsBuilding) -> Result<BuildingSummary> {
    let reduced_betti = b.reduced_betti()?;
    Ok(BuildingSummary {
        n: b.n,
        p: b.p,
        vertices: b.vertices().len(),
        simplex_counts: b.simplex_counts(),
        steinberg_dim: reduced_betti[b.top_dim()],
        reduced_betti,
    })
}
