//! Exact dense linear algebra over a coefficient field.
//!
//! Everything is plain Gaussian elimination with deterministic pivoting
//! (first nonzero entry), which keeps results canonical across runs. The
//! matrices involved are desk-scale (hundreds of rows), so clarity wins over
//! asymptotics; the scalar fast path in [`crate::rat`] does the heavy lifting.

use crate::cancel::{check, CancelToken};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Dense matrix over a [`Field`], row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FMat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for FMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.at(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl FMat {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Self {
        FMat {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let _ = field;
        Ok(FMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self, field: &Field) -> FMat {
        let mut out = FMat::zero(field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &FMat, field: &Field) -> Result<FMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FMat::zero(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if field.is_zero(b) {
                        continue;
                    }
                    let cur = out.at(i, j).clone();
                    out.set(i, j, field.add(&cur, &field.mul(a, b)));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &FMat, field: &Field) -> Result<FMat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix add".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.data[i] = field.add(&self.data[i], &other.data[i]);
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &Scalar, field: &Field) -> FMat {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = field.mul(v, c);
        }
        out
    }

    pub fn is_zero(&self, field: &Field) -> bool {
        self.data.iter().all(|v| field.is_zero(v))
    }

    pub fn apply(&self, v: &[Scalar], field: &Field) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix apply".into()));
        }
        let mut out = vec![field.zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = field.zero();
            for j in 0..self.cols {
                let a = self.at(i, j);
                if !field.is_zero(a) && !field.is_zero(&v[j]) {
                    acc = field.add(&acc, &field.mul(a, &v[j]));
                }
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self, field: &Field, token: Option<&CancelToken>) -> Result<Vec<usize>> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            check(token)?;
            // Deterministic pivot: first row with a nonzero entry.
            let Some(p) = (r..self.rows).find(|&i| !field.is_zero(self.at(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = field.inv(self.at(r, c))?;
            for j in c..self.cols {
                let v = field.mul(self.at(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || field.is_zero(self.at(i, c)) {
                    continue;
                }
                let factor = self.at(i, c).clone();
                for j in c..self.cols {
                    let v = field.sub(self.at(i, j), &field.mul(&factor, self.at(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(pivots)
    }

    pub fn rank(&self, field: &Field) -> Result<usize> {
        let mut m = self.clone();
        Ok(m.rref(field, None)?.len())
    }

    /// Basis of the right kernel `{v : Av = 0}`.
    pub fn kernel_basis(&self, field: &Field, token: Option<&CancelToken>) -> Result<Vec<Vec<Scalar>>> {
        let mut m = self.clone();
        let pivots = m.rref(field, token)?;
        let mut basis = Vec::new();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![field.zero(); self.cols];
            v[free] = field.one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = field.neg(m.at(prow, free));
            }
            basis.push(v);
        }
        Ok(basis)
    }

    pub fn inverse(&self, field: &Field) -> Result<FMat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let mut aug = FMat::zero(field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, n + i, field.one());
        }
        let pivots = aug.rref(field, None)?;
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::NotInvertible("singular matrix".into()));
        }
        let mut out = FMat::zero(field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.at(i, n + j).clone());
            }
        }
        Ok(out)
    }

    pub fn determinant(&self, field: &Field) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !field.is_zero(m.at(i, c))) else {
                return Ok(field.zero());
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = field.neg(&det);
            }
            det = field.mul(&det, m.at(c, c));
            let inv = field.inv(m.at(c, c))?;
            for i in c + 1..n {
                if field.is_zero(m.at(i, c)) {
                    continue;
                }
                let factor = field.mul(m.at(i, c), &inv);
                for j in c..n {
                    let v = field.sub(m.at(i, j), &field.mul(&factor, m.at(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn trace(&self, field: &Field) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("trace of non-square".into()));
        }
        let mut t = field.zero();
        for i in 0..self.rows {
            t = field.add(&t, self.at(i, i));
        }
        Ok(t)
    }
}

/// Outcome of an exact linear solve.
#[derive(Clone, Debug)]
pub enum LinearSolution {
    /// One particular solution together with a basis of the kernel.
    Solved {
        particular: Vec<Scalar>,
        kernel: Vec<Vec<Scalar>>,
    },
    /// The system `Ax = b` has no solution.
    Inconsistent,
}

/// Solve `A x = b` exactly.
pub fn solve_linear(a: &FMat, b: &[Scalar], field: &Field) -> Result<LinearSolution> {
    solve_linear_cancellable(a, b, field, None)
}

pub fn solve_linear_cancellable(
    a: &FMat,
    b: &[Scalar],
    field: &Field,
    token: Option<&CancelToken>,
) -> Result<LinearSolution> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} for {} rows",
            b.len(),
            a.rows
        )));
    }
    let mut aug = FMat::zero(field, a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.at(i, j).clone());
        }
        aug.set(i, a.cols, b[i].clone());
    }
    let pivots = aug.rref(field, token)?;
    if pivots.last().is_some_and(|&p| p == a.cols) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut particular = vec![field.zero(); a.cols];
    for (prow, &pcol) in pivots.iter().enumerate() {
        particular[pcol] = aug.at(prow, a.cols).clone();
    }
    // Kernel from the same elimination.
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut kernel = Vec::new();
    for free in 0..a.cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); a.cols];
        v[free] = field.one();
        for (prow, &pcol) in pivots.iter().enumerate() {
            v[pcol] = field.neg(aug.at(prow, free));
        }
        kernel.push(v);
    }
    Ok(LinearSolution::Solved { particular, kernel })
}

/// Incrementally maintained row-echelon basis of a subspace of `k^n`.
///
/// Used for span computations: minimal generators, boundary subspaces,
/// quotient complements. Rows are kept reduced, pivots normalized to 1.
#[derive(Clone, Debug)]
pub struct Echelon {
    n: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(n: usize) -> Self {
        Echelon {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Reduce `v` against the current basis, returning the residual.
    pub fn reduce(&self, mut v: Vec<Scalar>, field: &Field) -> Vec<Scalar> {
        assert_eq!(v.len(), self.n, "ambient dimension mismatch");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if field.is_zero(&v[p]) {
                continue;
            }
            let factor = v[p].clone();
            for j in p..self.n {
                if !field.is_zero(&row[j]) {
                    v[j] = field.sub(&v[j], &field.mul(&factor, &row[j]));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar], field: &Field) -> bool {
        let r = self.reduce(v.to_vec(), field);
        r.iter().all(|c| field.is_zero(c))
    }

    /// Insert a vector. Returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: Vec<Scalar>, field: &Field) -> bool {
        let mut r = self.reduce(v, field);
        let Some(p) = r.iter().position(|c| !field.is_zero(c)) else {
            return false;
        };
        let inv = field.inv(&r[p]).expect("nonzero leading entry");
        for c in r.iter_mut() {
            *c = field.mul(c, &inv);
        }
        // Back-substitute into existing rows to keep full reduction.
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if field.is_zero(&row[p]) {
                continue;
            }
            let factor = row[p].clone();
            for j in 0..self.n {
                row[j] = field.sub(&row[j], &field.mul(&factor, &r[j]));
            }
        }
        // Keep rows sorted by pivot for determinism.
        let idx = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(idx, r);
        self.pivots.insert(idx, p);
        true
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Pivot positions, ascending; their complement indexes a basis of the
    /// quotient by the span.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

/// Coordinate solver for a fixed spanning set: factors `[A | I]` once and
/// answers `A x = v` queries repeatedly.
#[derive(Clone, Debug)]
pub struct ColumnSolver {
    n: usize,
    m: usize,
    /// RREF of A with the row transform applied.
    r: FMat,
    /// Accumulated row transform T with T*A = R.
    t: FMat,
    pivots: Vec<usize>,
}

impl ColumnSolver {
    /// `columns` are the spanning vectors (each of length `n`).
    pub fn new(columns: &[Vec<Scalar>], n: usize, field: &Field) -> Result<Self> {
        let m = columns.len();
        let mut aug = FMat::zero(field, n, m + n);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::DimensionMismatch("spanning vector length".into()));
            }
            for i in 0..n {
                aug.set(i, j, col[i].clone());
            }
        }
        for i in 0..n {
            aug.set(i, m + i, field.one());
        }
        // Eliminate only within the first m columns.
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            let Some(p) = (r..n).find(|&i| !field.is_zero(aug.at(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m + n {
                    let tmp = aug.at(p, j).clone();
                    aug.set(p, j, aug.at(r, j).clone());
                    aug.set(r, j, tmp);
                }
            }
            let inv = field.inv(aug.at(r, c))?;
            for j in 0..m + n {
                let v = field.mul(aug.at(r, j), &inv);
                aug.set(r, j, v);
            }
            for i in 0..n {
                if i == r || field.is_zero(aug.at(i, c)) {
                    continue;
                }
                let factor = aug.at(i, c).clone();
                for j in 0..m + n {
                    let v = field.sub(aug.at(i, j), &field.mul(&factor, aug.at(r, j)));
                    aug.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut rm = FMat::zero(field, n, m);
        let mut tm = FMat::zero(field, n, n);
        for i in 0..n {
            for j in 0..m {
                rm.set(i, j, aug.at(i, j).clone());
            }
            for j in 0..n {
                tm.set(i, j, aug.at(i, m + j).clone());
            }
        }
        Ok(ColumnSolver {
            n,
            m,
            r: rm,
            t: tm,
            pivots,
        })
    }

    pub fn span_dim(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of `v` in the spanning set, or `None` if outside the span.
    /// Free coordinates are set to zero, so answers are canonical.
    pub fn coordinates(&self, v: &[Scalar], field: &Field) -> Result<Option<Vec<Scalar>>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch("coordinate query length".into()));
        }
        let tv = self.t.apply(v, field)?;
        // Rows beyond the pivot count must vanish for consistency.
        for (i, val) in tv.iter().enumerate().skip(self.pivots.len()) {
            if !field.is_zero(val) {
                let _ = i;
                return Ok(None);
            }
        }
        let mut x = vec![field.zero(); self.m];
        for (prow, &pcol) in self.pivots.iter().enumerate() {
            x[pcol] = tv[prow].clone();
        }
        // Verify on non-pivot structure: R x must equal T v including rows
        // where R has non-pivot columns contributing.
        let rx = self.r.apply(&x, field)?;
        if rx != tv {
            return Ok(None);
        }
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq() -> Field {
        Field::rationals()
    }

    fn m(field: &Field, rows: &[&[i64]]) -> FMat {
        FMat::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn solve_with_kernel() {
        let f = qq();
        // A = [1 1], b = (1): particular (1,0), kernel {(-1,1)} direction.
        let a = m(&f, &[&[1, 1]]);
        let b = vec![f.from_i64(1)];
        match solve_linear(&a, &b, &f).unwrap() {
            LinearSolution::Solved { particular, kernel } => {
                assert_eq!(particular, vec![f.from_i64(1), f.from_i64(0)]);
                assert_eq!(kernel.len(), 1);
                // Kernel vector is proportional to (1, -1).
                let k = &kernel[0];
                let combo = f.add(&k[0], &k[1]);
                assert!(f.is_zero(&combo));
            }
            _ => panic!("expected solution"),
        }
    }

    #[test]
    fn inconsistent_detected() {
        let f = qq();
        let a = m(&f, &[&[1, 0], &[1, 0]]);
        let b = vec![f.from_i64(1), f.from_i64(2)];
        assert!(matches!(
            solve_linear(&a, &b, &f).unwrap(),
            LinearSolution::Inconsistent
        ));
    }

    #[test]
    fn rank_nullity() {
        let f = qq();
        let a = m(&f, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let rank = a.rank(&f).unwrap();
        let nullity = a.kernel_basis(&f, None).unwrap().len();
        assert_eq!(rank + nullity, 3);
        assert_eq!(rank, 2);
    }

    #[test]
    fn inverse_and_determinant() {
        let f = qq();
        let a = m(&f, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse(&f).unwrap();
        let prod = a.mul(&inv, &f).unwrap();
        assert_eq!(prod, FMat::identity(&f, 2));
        assert_eq!(a.determinant(&f).unwrap(), f.from_i64(1));
        let sing = m(&f, &[&[1, 2], &[2, 4]]);
        assert!(sing.inverse(&f).is_err());
        assert_eq!(sing.determinant(&f).unwrap(), f.from_i64(0));
    }

    #[test]
    fn echelon_span() {
        let f = qq();
        let mut e = Echelon::new(3);
        assert!(e.insert(vec![f.from_i64(1), f.from_i64(2), f.from_i64(0)], &f));
        assert!(e.insert(vec![f.from_i64(0), f.from_i64(1), f.from_i64(1)], &f));
        assert!(!e.insert(vec![f.from_i64(1), f.from_i64(3), f.from_i64(1)], &f));
        assert_eq!(e.dim(), 2);
        assert!(e.contains(&[f.from_i64(2), f.from_i64(5), f.from_i64(1)], &f));
        assert!(!e.contains(&[f.from_i64(0), f.from_i64(0), f.from_i64(1)], &f));
    }

    #[test]
    fn column_solver_coordinates() {
        let f = qq();
        let cols = vec![
            vec![f.from_i64(1), f.from_i64(0), f.from_i64(1)],
            vec![f.from_i64(0), f.from_i64(1), f.from_i64(1)],
        ];
        let solver = ColumnSolver::new(&cols, 3, &f).unwrap();
        assert_eq!(solver.span_dim(), 2);
        let v = vec![f.from_i64(2), f.from_i64(3), f.from_i64(5)];
        let coords = solver.coordinates(&v, &f).unwrap().unwrap();
        assert_eq!(coords, vec![f.from_i64(2), f.from_i64(3)]);
        let outside = vec![f.from_i64(1), f.from_i64(0), f.from_i64(0)];
        assert!(solver.coordinates(&outside, &f).unwrap().is_none());
    }

    #[test]
    fn cancellation_aborts() {
        let f = qq();
        let a = m(&f, &[&[1, 2], &[3, 4]]);
        let token = CancelToken::new();
        token.cancel();
        let res = solve_linear_cancellable(&a, &[f.from_i64(1), f.from_i64(2)], &f, Some(&token));
        assert!(matches!(res, Err(Error::Cancelled)));
    }

    #[test]
    fn prime_field_solving() {
        let f = Field::prime(5).unwrap();
        let a = m(&f, &[&[2, 1], &[1, 1]]);
        let b = vec![f.from_i64(1), f.from_i64(2)];
        match solve_linear(&a, &b, &f).unwrap() {
            LinearSolution::Solved { particular, .. } => {
                let ax = a.apply(&particular, &f).unwrap();
                assert_eq!(ax, b);
            }
            _ => panic!("solvable over F_5"),
        }
    }
}
