//! Sparse row-echelon elimination over an exact field.
//!
//! Columns are relabelled so that sparse columns are eliminated first, which
//! keeps fill-in low on the boundary matrices this crate produces.

use rustc_hash::FxHashMap;

use crate::scalar::FieldOps;

pub(crate) type SparseRow<E> = Vec<(usize, E)>;

/// `dst - factor * src`, both sorted by column.
pub(crate) fn axpy<F: FieldOps>(f: &F, dst: &SparseRow<F::Elem>, factor: &F::Elem, src: &SparseRow<F::Elem>) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0);
        let take_src = i >= dst.len() || (j < src.len() && src[j].0 < dst[i].0);
        if take_dst {
            out.push(dst[i].clone());
            i += 1;
        } else if take_src {
            out.push((src[j].0, f.neg(&f.mul(factor, &src[j].1))));
            j += 1;
        } else {
            let v = f.sub(&dst[i].1, &f.mul(factor, &src[j].1));
            if !f.is_zero(&v) {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form in relabelled column coordinates.
pub(crate) struct Echelon<F: FieldOps> {
    /// `order[k]` is the original column at position `k`.
    pub order: Vec<usize>,
    /// Inverse of `order`.
    pub position: Vec<usize>,
    /// Pivot rows keyed by leading position, each scaled to a leading one.
    pub pivots: FxHashMap<usize, SparseRow<F::Elem>>,
}

impl<F: FieldOps> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Builds the echelon form of `rows`, given in original column labels.
    pub fn build(f: &F, cols: usize, rows: Vec<SparseRow<F::Elem>>) -> Self {
        let mut counts = vec![0usize; cols];
        for row in &rows {
            for (c, _) in row {
                counts[*c] += 1;
            }
        }
        let mut order: Vec<usize> = (0..cols).collect();
        order.sort_by_key(|&c| (counts[c], c));
        let mut position = vec![0usize; cols];
        for (k, &c) in order.iter().enumerate() {
            position[c] = k;
        }

        let mut relabelled: Vec<SparseRow<F::Elem>> = rows
            .into_iter()
            .map(|row| {
                let mut r: SparseRow<F::Elem> = row.into_iter().map(|(c, v)| (position[c], v)).collect::<Vec<_>>();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        relabelled.sort_by_key(|r| r.len());

        let mut ech = Echelon {
            order,
            position,
            pivots: FxHashMap::default(),
        };
        for row in relabelled {
            ech.insert(f, row);
        }
        ech
    }

    /// Reduces `row` (relabelled coordinates) by the pivots' leading terms.
    pub fn reduce_leading(&self, f: &F, mut row: SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        while let Some((lead, coeff)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => row = axpy(f, &row, &coeff, p),
                None => break,
            }
        }
        row
    }

    /// Fully reduces `row` against every pivot; the result is zero iff the row
    /// lies in the span.
    pub fn reduce_full(&self, f: &F, mut row: SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        let mut idx = 0;
        while idx < row.len() {
            let (col, coeff) = row[idx].clone();
            match self.pivots.get(&col) {
                Some(p) => row = axpy(f, &row, &coeff, p),
                None => idx += 1,
            }
        }
        row
    }

    /// Inserts a row, returning true if it increased the rank.
    pub fn insert(&mut self, f: &F, row: SparseRow<F::Elem>) -> bool {
        let row = self.reduce_leading(f, row);
        match row.first() {
            None => false,
            Some((lead, coeff)) => {
                let lead = *lead;
                let inv = f.inv(coeff);
                let scaled = row.into_iter().map(|(c, v)| (c, f.mul(&v, &inv))).collect();
                self.pivots.insert(lead, scaled);
                true
            }
        }
    }

    /// Back-substitutes so that every pivot column is zero outside its pivot row.
    pub fn into_reduced(mut self, f: &F) -> Self {
        let mut leads: Vec<usize> = self.pivots.keys().copied().collect();
        leads.sort_unstable();
        for &lead in leads.iter().rev() {
            let row = self.pivots.remove(&lead).expect("pivot present");
            let mut tail: SparseRow<F::Elem> = row[1..].to_vec();
            tail = self.reduce_full(f, tail);
            let mut full = Vec::with_capacity(tail.len() + 1);
            full.push(row[0].clone());
            full.extend(tail);
            self.pivots.insert(lead, full);
        }
        self
    }

    /// Basis of the right null space of the original matrix, as dense vectors
    /// in original column order. Requires `into_reduced` first.
    pub fn kernel(&self, f: &F) -> Vec<Vec<F::Elem>> {
        let cols = self.order.len();
        let mut free_entries: FxHashMap<usize, Vec<(usize, F::Elem)>> = FxHashMap::default();
        for (&lead, row) in &self.pivots {
            for (c, v) in &row[1..] {
                free_entries.entry(*c).or_default().push((lead, v.clone()));
            }
        }
        let mut frees: Vec<usize> = (0..cols).filter(|k| !self.pivots.contains_key(k)).collect();
        // Report kernel vectors ordered by original column of the free variable.
        frees.sort_by_key(|&k| self.order[k]);
        frees
            .into_iter()
            .map(|free| {
                let mut v = vec![f.zero(); cols];
                v[self.order[free]] = f.one();
                if let Some(list) = free_entries.get(&free) {
                    for (lead, coeff) in list {
                        v[self.order[*lead]] = f.neg(coeff);
                    }
                }
                v
            })
            .collect()
    }

    /// Relabels an original-coordinate sparse row into echelon coordinates.
    pub fn relabel(&self, row: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
        let mut r: SparseRow<F::Elem> = row.iter().map(|(c, v)| (self.position[*c], v.clone())).collect();
        r.sort_by_key(|e| e.0);
        r
    }
}
