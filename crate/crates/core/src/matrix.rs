//! Sparse matrices over ℚ or F_p with exact rank and kernel computations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::echelon::{Echelon, SparseRow};
use crate::error::{LabError, Result};
use crate::scalar::{ExactScalar, FieldKind, FieldOps, PrimeField, RationalField};

/// Sparse matrix; absent entries are zero and no zero is ever stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: FieldKind,
    entries: BTreeMap<(usize, usize), ExactScalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize, field: FieldKind) -> Self {
        ExactMatrix {
            rows,
            cols,
            field,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, field: FieldKind) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from dense integer rows, reduced into `field`.
    pub fn from_int_rows(rows: &[Vec<i64>], field: FieldKind) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols, field);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, field.from_int(v));
            }
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` integer triples; repeated
    /// positions accumulate.
    pub fn from_int_triples(rows: usize, cols: usize, field: FieldKind, triples: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (r, c, v) in triples {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            *acc.entry((r, c)).or_insert(0) += v;
        }
        let mut m = Self::zeros(rows, cols, field);
        for ((r, c), v) in acc {
            m.set(r, c, field.from_int(v));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sets an entry; storing zero removes it.
    pub fn set(&mut self, r: usize, c: usize, value: ExactScalar) {
        assert!(
            r < self.rows && c < self.cols,
            "entry ({r}, {c}) outside {}x{}",
            self.rows,
            self.cols
        );
        assert_eq!(value.field(), self.field, "scalar from a different field");
        if value.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), value);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> ExactScalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &ExactScalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    pub(crate) fn sparse_rows<F: FieldOps>(&self, f: &F) -> Vec<SparseRow<F::Elem>> {
        let mut rows: Vec<SparseRow<F::Elem>> = vec![Vec::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].push((c, f.lift(v)));
        }
        rows
    }

    fn with_field<T>(&self, rat: impl FnOnce(&RationalField) -> T, prime: impl FnOnce(&PrimeField) -> T) -> T {
        match self.field {
            FieldKind::Rational => rat(&RationalField),
            FieldKind::Prime(p) => prime(&PrimeField::new(p)),
        }
    }

    /// Rank over the matrix's own field.
    pub fn rank(&self) -> usize {
        fn go<F: FieldOps>(m: &ExactMatrix, f: &F) -> usize {
            // Eliminate along the shorter side.
            if m.rows <= m.cols {
                Echelon::build(f, m.cols, m.sparse_rows(f)).rank()
            } else {
                let t = m.transpose();
                Echelon::build(f, t.cols, t.sparse_rows(f)).rank()
            }
        }
        self.with_field(|f| go(self, f), |f| go(self, f))
    }

    /// Basis of the right null space as dense column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<ExactScalar>> {
        fn go<F: FieldOps>(m: &ExactMatrix, f: &F) -> Vec<Vec<ExactScalar>> {
            let ech = Echelon::build(f, m.cols, m.sparse_rows(f)).into_reduced(f);
            ech.kernel(f)
                .into_iter()
                .map(|v| v.iter().map(|x| f.to_scalar(x)).collect())
                .collect()
        }
        self.with_field(|f| go(self, f), |f| go(self, f))
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(LabError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.field != rhs.field {
            return Err(LabError::Dimension("field mismatch in product".into()));
        }
        fn go<F: FieldOps>(a: &ExactMatrix, b: &ExactMatrix, f: &F) -> ExactMatrix {
            let brows = b.sparse_rows(f);
            let mut acc: BTreeMap<(usize, usize), F::Elem> = BTreeMap::new();
            for (&(r, k), v) in &a.entries {
                let v = f.lift(v);
                for (c, w) in &brows[k] {
                    let e = acc.entry((r, *c)).or_insert_with(|| f.zero());
                    *e = f.add(e, &f.mul(&v, w));
                }
            }
            let mut out = ExactMatrix::zeros(a.rows, b.cols, a.field);
            for ((r, c), v) in acc {
                if !f.is_zero(&v) {
                    out.entries.insert((r, c), f.to_scalar(&v));
                }
            }
            out
        }
        Ok(self.with_field(|f| go(self, rhs, f), |f| go(self, rhs, f)))
    }

    /// `self - rhs`.
    pub fn sub(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if (self.rows, self.cols, self.field) != (rhs.rows, rhs.cols, rhs.field) {
            return Err(LabError::Dimension("shape mismatch in difference".into()));
        }
        fn go<F: FieldOps>(a: &ExactMatrix, b: &ExactMatrix, f: &F) -> ExactMatrix {
            let mut acc: BTreeMap<(usize, usize), F::Elem> = a.entries.iter().map(|(k, v)| (*k, f.lift(v))).collect();
            for (k, v) in &b.entries {
                let e = acc.entry(*k).or_insert_with(|| f.zero());
                *e = f.sub(e, &f.lift(v));
            }
            let mut out = ExactMatrix::zeros(a.rows, a.cols, a.field);
            for (k, v) in acc {
                if !f.is_zero(&v) {
                    out.entries.insert(k, f.to_scalar(&v));
                }
            }
            out
        }
        Ok(self.with_field(|f| go(self, rhs, f), |f| go(self, rhs, f)))
    }

    /// Product with a dense column vector.
    pub fn apply(&self, v: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        if v.len() != self.cols {
            return Err(LabError::Dimension(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        fn go<F: FieldOps>(m: &ExactMatrix, v: &[ExactScalar], f: &F) -> Vec<ExactScalar> {
            let v: Vec<F::Elem> = v.iter().map(|x| f.lift(x)).collect();
            let mut out = vec![f.zero(); m.rows];
            for (&(r, c), x) in &m.entries {
                out[r] = f.add(&out[r], &f.mul(&f.lift(x), &v[c]));
            }
            out.iter().map(|x| f.to_scalar(x)).collect()
        }
        Ok(self.with_field(|f| go(self, v, f), |f| go(self, v, f)))
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.rows != rhs.rows || self.field != rhs.field {
            return Err(LabError::Dimension("row mismatch in hstack".into()));
        }
        let mut out = ExactMatrix::zeros(self.rows, self.cols + rhs.cols, self.field);
        out.entries = self.entries.clone();
        for (&(r, c), v) in &rhs.entries {
            out.entries.insert((r, c + self.cols), v.clone());
        }
        Ok(out)
    }

    /// Matrix whose columns are the given dense vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<ExactScalar>], field: FieldKind) -> Self {
        let mut m = ExactMatrix::zeros(rows, columns.len(), field);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    /// Column `c` as a dense vector.
    pub fn column(&self, c: usize) -> Vec<ExactScalar> {
        let mut v = vec![self.field.zero(); self.rows];
        for (&(r, cc), x) in &self.entries {
            if cc == c {
                v[r] = x.clone();
            }
        }
        v
    }

    /// Line-oriented text form: `rows cols field` then one `r c value` per entry.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.field);
        for (&(r, c), v) in &self.entries {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| LabError::Parse("empty matrix text".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(LabError::Parse(format!("bad header `{header}`")));
        }
        let rows: usize = parts[0]
            .parse()
            .map_err(|_| LabError::Parse(format!("bad row count `{}`", parts[0])))?;
        let cols: usize = parts[1]
            .parse()
            .map_err(|_| LabError::Parse(format!("bad column count `{}`", parts[1])))?;
        let field: FieldKind = parts[2].parse()?;
        let mut m = ExactMatrix::zeros(rows, cols, field);
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(LabError::Parse(format!("bad entry line `{line}`")));
            }
            let r: usize = t[0].parse().map_err(|_| LabError::Parse(format!("bad row `{}`", t[0])))?;
            let c: usize = t[1].parse().map_err(|_| LabError::Parse(format!("bad column `{}`", t[1])))?;
            if r >= rows || c >= cols {
                return Err(LabError::Parse(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            m.set(r, c, ExactScalar::parse_in(field, t[2])?);
        }
        Ok(m)
    }
}

/// Rank of a matrix.
pub fn rank(m: &ExactMatrix) -> usize {
    m.rank()
}

/// Basis of the right null space of a matrix.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<ExactScalar>> {
    m.kernel_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldKind = FieldKind::Rational;

    #[test]
    fn rank_small_cases() {
        assert_eq!(ExactMatrix::identity(3, Q).rank(), 3);
        assert_eq!(ExactMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]], Q).rank(), 1);
        assert_eq!(ExactMatrix::from_int_rows(&[vec![1, 1], vec![1, 1]], FieldKind::Prime(2)).rank(), 1);
        assert_eq!(ExactMatrix::zeros(4, 2, Q).rank(), 0);
    }

    #[test]
    fn rank_depends_on_field() {
        let m = ExactMatrix::from_int_rows(&[vec![1, 1], vec![1, -1]], Q);
        assert_eq!(m.rank(), 2);
        let m2 = ExactMatrix::from_int_rows(&[vec![1, 1], vec![1, -1]], FieldKind::Prime(2));
        assert_eq!(m2.rank(), 1);
    }

    #[test]
    fn kernel_of_proportional_rows() {
        let m = ExactMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]], Q);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // Proportional to (2, -1).
        let v = &k[0];
        let two = ExactScalar::rational(2, 1);
        let lhs = m.apply(v).unwrap();
        assert!(lhs.iter().all(ExactScalar::is_zero));
        let scaled_first = match (&v[0], &v[1]) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => ExactScalar::Rational(-(a / b)),
            _ => unreachable!(),
        };
        assert_eq!(scaled_first, two);
    }

    #[test]
    fn kernel_trivial_and_full() {
        assert!(ExactMatrix::identity(2, Q).kernel_basis().is_empty());
        assert_eq!(ExactMatrix::zeros(2, 3, Q).kernel_basis().len(), 3);
    }

    #[test]
    fn text_format_round_trip() {
        let mut m = ExactMatrix::zeros(2, 3, Q);
        m.set(0, 1, ExactScalar::rational(-3, 4));
        m.set(1, 2, ExactScalar::rational(5, 1));
        let text = m.to_text();
        assert_eq!(text, "2 3 Q\n0 1 -3/4\n1 2 5\n");
        assert_eq!(ExactMatrix::from_text(&text).unwrap(), m);

        let fp = ExactMatrix::from_text("2 2 F5\n0 0 7\n1 1 -1\n").unwrap();
        assert_eq!(fp.get(0, 0), ExactScalar::residue(2, 5));
        assert_eq!(fp.get(1, 1), ExactScalar::residue(4, 5));
    }

    #[test]
    fn text_format_rejects_garbage() {
        assert!(ExactMatrix::from_text("").is_err());
        assert!(ExactMatrix::from_text("2 2 F4\n").is_err());
        assert!(ExactMatrix::from_text("2 2 Q\n3 0 1\n").is_err());
        assert!(ExactMatrix::from_text("2 2 Q\n0 0 1/0\n").is_err());
    }

    #[test]
    fn zero_entries_never_stored() {
        let m = ExactMatrix::from_int_triples(2, 2, Q, [(0, 0, 1), (0, 0, -1), (1, 1, 2)]);
        assert_eq!(m.nnz(), 1);
    }
}
