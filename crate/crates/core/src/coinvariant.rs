//! Coinvariants of Ash complexes under finite matrix groups.
//!
//! A group permuting lines acts on spanning sets with a sign. Over ℚ the
//! coinvariants of a signed permutation module have one basis vector per
//! orbit on which the sign character of the stabilizer is trivial; orbits
//! where some element fixes the set with odd sign die. Orbits are explored by
//! breadth-first search over generators only, labelling every member with its
//! sign relative to the starting set; a conflicting label on any edge is
//! exactly a stabilizer element with sign -1.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::ash::{act_on_set, boundary_terms, members, AshComplex, LineSet, SpanOracle};
use crate::complex::ChainComplex;
use crate::error::Result;
use crate::matrix::ExactMatrix;
use crate::projective::MatrixGroup;
use crate::scalar::FieldKind;

/// Class of a set in the coinvariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitClass {
    /// Sign-killed orbit: the set is zero in the coinvariants.
    Dead { orbit: usize },
    /// `[set] = sign * [rep of orbit]`.
    Alive { orbit: usize, sign: i64 },
}

impl OrbitClass {
    pub fn is_dead(self) -> bool {
        matches!(self, OrbitClass::Dead { .. })
    }

    pub fn orbit(self) -> usize {
        match self {
            OrbitClass::Dead { orbit } | OrbitClass::Alive { orbit, .. } => orbit,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitInfo {
    pub rep: LineSet,
    /// Orbit size; `None` when a dead orbit was abandoned early.
    pub size: Option<usize>,
    pub alive: bool,
}

#[derive(Debug, Clone, Copy)]
enum Entry {
    Dead(u32),
    Alive(u32, i8),
}

/// Lazily explores and caches orbits of line sets.
#[derive(Debug, Clone)]
pub struct OrbitClassifier {
    perms: Vec<Vec<u32>>,
    cache: FxHashMap<LineSet, Entry>,
    orbits: Vec<OrbitInfo>,
    /// Stop exploring an orbit as soon as it is known to die.
    early_exit: bool,
}

impl OrbitClassifier {
    pub fn new(perms: Vec<Vec<u32>>, early_exit: bool) -> Self {
        OrbitClassifier {
            perms,
            cache: FxHashMap::default(),
            orbits: Vec::new(),
            early_exit,
        }
    }

    pub fn orbits(&self) -> &[OrbitInfo] {
        &self.orbits
    }

    pub fn classify(&mut self, set: LineSet) -> OrbitClass {
        if let Some(e) = self.cache.get(&set) {
            return match *e {
                Entry::Dead(o) => OrbitClass::Dead { orbit: o as usize },
                Entry::Alive(o, s) => OrbitClass::Alive {
                    orbit: o as usize,
                    sign: s as i64,
                },
            };
        }
        self.explore(set);
        self.classify(set)
    }

    fn explore(&mut self, start: LineSet) {
        let mut label: FxHashMap<LineSet, i8> = FxHashMap::default();
        label.insert(start, 1);
        let mut queue = VecDeque::from([start]);
        let mut conflict = false;
        'bfs: while let Some(x) = queue.pop_front() {
            let lx = label[&x];
            for perm in &self.perms {
                let (s, y) = act_on_set(perm, x);
                // g·x = s·y and [g·x] = [x], so [y] = s·[x].
                let ly = (s as i8) * lx;
                match label.get(&y) {
                    None => {
                        label.insert(y, ly);
                        queue.push_back(y);
                    }
                    Some(&prev) if prev != ly => {
                        conflict = true;
                        if self.early_exit {
                            break 'bfs;
                        }
                    }
                    Some(_) => {}
                }
            }
        }
        let id = self.orbits.len() as u32;
        if conflict {
            let size = queue.is_empty().then_some(label.len());
            for y in label.keys() {
                self.cache.insert(*y, Entry::Dead(id));
            }
            self.orbits.push(OrbitInfo {
                rep: *label.keys().min().expect("nonempty orbit"),
                size,
                alive: false,
            });
        } else {
            let rep = *label.keys().min().expect("nonempty orbit");
            let lrep = label[&rep];
            for (y, ly) in &label {
                self.cache.insert(*y, Entry::Alive(id, ly * lrep));
            }
            self.orbits.push(OrbitInfo {
                rep,
                size: Some(label.len()),
                alive: true,
            });
        }
    }
}

/// Coinvariant complex with surviving orbit representatives per degree.
#[derive(Debug, Clone)]
pub struct CoinvariantComplex {
    pub n: usize,
    pub p: u64,
    /// Surviving orbit representatives, sorted, per degree.
    pub reps: Vec<Vec<LineSet>>,
    pub orbits_before: Vec<usize>,
    pub orbits_after: Vec<usize>,
    pub complex: ChainComplex,
}

impl CoinvariantComplex {
    pub fn homology(&self) -> Result<Vec<usize>> {
        self.complex.homology_dimensions()
    }
}

/// Builds `C ⊗_G ℚ` for a group acting on the ambient space of `c`.
pub fn coinvariant_complex(c: &AshComplex, g: &MatrixGroup) -> Result<CoinvariantComplex> {
    let perms = g.line_permutations(c.lines());
    let mut cls = OrbitClassifier::new(perms, false);
    let degrees = c.top_degree() + 1;
    let mut reps: Vec<Vec<LineSet>> = vec![Vec::new(); degrees];
    let mut orbits_before = vec![0usize; degrees];
    for (k, rep_list) in reps.iter_mut().enumerate() {
        let first_orbit = cls.orbits().len();
        for &set in c.basis(k) {
            cls.classify(set);
        }
        let new = &cls.orbits()[first_orbit..];
        orbits_before[k] = new.len();
        rep_list.extend(new.iter().filter(|o| o.alive).map(|o| o.rep));
        rep_list.sort_by_key(|&s| members(s).collect::<Vec<_>>());
    }
    let orbits_after: Vec<usize> = reps.iter().map(Vec::len).collect();
    let complex = induced_complex(&mut cls, &reps, c.oracle())?;
    Ok(CoinvariantComplex {
        n: c.n,
        p: c.p,
        reps,
        orbits_before,
        orbits_after,
        complex,
    })
}

fn induced_complex(cls: &mut OrbitClassifier, reps: &[Vec<LineSet>], oracle: &SpanOracle) -> Result<ChainComplex> {
    let mut position: FxHashMap<usize, usize> = FxHashMap::default();
    for list in reps {
        for (i, &r) in list.iter().enumerate() {
            if let OrbitClass::Alive { orbit, .. } = cls.classify(r) {
                position.insert(orbit, i);
            }
        }
    }
    let dims: Vec<usize> = reps.iter().map(Vec::len).collect();
    let mut boundaries = Vec::new();
    for k in 1..reps.len() {
        let mut triples = Vec::new();
        for (col, &r) in reps[k].iter().enumerate() {
            for (s, face) in boundary_terms(r, oracle) {
                if let OrbitClass::Alive { orbit, sign } = cls.classify(face) {
                    triples.push((position[&orbit], col, s * sign));
                }
            }
        }
        boundaries.push(ExactMatrix::from_int_triples(dims[k - 1], dims[k], FieldKind::Rational, triples));
    }
    ChainComplex::new(FieldKind::Rational, dims, boundaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::MatrixGroup;

    #[test]
    fn trivial_group_changes_nothing() {
        let ash = AshComplex::new(2, 3).unwrap();
        let co = coinvariant_complex(&ash, &MatrixGroup::trivial(2, 3).unwrap()).unwrap();
        assert_eq!(co.orbits_after, ash.basis_sizes());
        for k in 1..=ash.top_degree() {
            assert_eq!(co.complex.boundary(k), ash.complex().boundary(k));
        }
    }

    #[test]
    fn sl2_f2_kills_everything() {
        let ash = AshComplex::new(2, 2).unwrap();
        let co = coinvariant_complex(&ash, &MatrixGroup::special_linear(2, 2).unwrap()).unwrap();
        assert_eq!(co.orbits_before, vec![1, 1]);
        assert_eq!(co.orbits_after, vec![0, 0]);
    }

    #[test]
    fn gl3_f2_has_no_h0() {
        let ash = AshComplex::new(3, 2).unwrap();
        let co = coinvariant_complex(&ash, &MatrixGroup::general_linear(3, 2).unwrap()).unwrap();
        let h = co.homology().unwrap();
        assert!(h.iter().all(|&x| x == 0), "{h:?}");
    }

    #[test]
    fn early_exit_agrees_on_dead_orbits() {
        let ash = AshComplex::new(2, 3).unwrap();
        let perms = MatrixGroup::special_linear(2, 3).unwrap().line_permutations(ash.lines());
        let mut full = OrbitClassifier::new(perms.clone(), false);
        let mut fast = OrbitClassifier::new(perms, true);
        for k in 0..=ash.top_degree() {
            for &s in ash.basis(k) {
                let a = full.classify(s);
                let b = fast.classify(s);
                assert_eq!(a.is_dead(), b.is_dead());
            }
        }
    }
}
