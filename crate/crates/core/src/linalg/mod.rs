//! Dense complex matrices sized for desk-scale quantum systems.
//!
//! Storage is row-major. Every matrix is capped at [`MAX_DIM`] rows and
//! columns; the scenarios this crate runs never need more than 16.
//!
//! Kronecker products use the convention that the composite index of
//! `(i_a, i_b)` is `i_a * dim_b + i_b`, so subsystem A is the slow index.

mod eigen;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use eigen::{eig_hermitian, trace_norm, HermitianEigen};

/// Largest supported row or column count.
pub const MAX_DIM: usize = 64;

/// Tolerance on `max |M - M^dag|` below which a matrix counts as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixLiteral", into = "MatrixLiteral")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// On-disk matrix form: `{"rows": n, "cols": m, "entries": [[re, im], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixLiteral {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixLiteral> for ComplexMatrix {
    type Error = Error;

    fn try_from(lit: MatrixLiteral) -> Result<Self> {
        let data = lit
            .entries
            .iter()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        ComplexMatrix::new(lit.rows, lit.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixLiteral {
    fn from(m: ComplexMatrix) -> Self {
        MatrixLiteral {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidShape(format!(
            "{rows}x{cols} matrix is empty"
        )));
    }
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::DimensionOverflow { rows, cols });
    }
    Ok(())
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        check_shape(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::InvalidShape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Builds from real entries in row-major order.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0 && rows <= MAX_DIM && cols <= MAX_DIM);
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `M - M^dag`; infinite for non-square input.
    pub fn hermitian_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(M + M^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] = C64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..self.cols {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    /// `A B A^dag`.
    pub fn sandwich(&self, inner: &ComplexMatrix) -> Self {
        &(self * inner) * &self.adjoint()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product of {}x{} and {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Local dimensions of a two-party system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct BipartiteDims {
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteDims {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a < 2 || dim_b < 2 {
            return Err(Error::InvalidArgument(format!(
                "subsystem dimensions must be at least 2, got {dim_a}x{dim_b}"
            )));
        }
        if dim_a * dim_b > MAX_DIM {
            return Err(Error::DimensionOverflow {
                rows: dim_a * dim_b,
                cols: dim_a * dim_b,
            });
        }
        Ok(BipartiteDims { dim_a, dim_b })
    }

    pub fn qubits() -> Self {
        BipartiteDims { dim_a: 2, dim_b: 2 }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }
}

impl TryFrom<(usize, usize)> for BipartiteDims {
    type Error = Error;

    fn try_from((a, b): (usize, usize)) -> Result<Self> {
        BipartiteDims::new(a, b)
    }
}

impl From<BipartiteDims> for (usize, usize) {
    fn from(d: BipartiteDims) -> Self {
        (d.dim_a, d.dim_b)
    }
}

/// Which subsystem a partial trace removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    check_shape(rows, cols)?;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a[(ia, ja)];
            if x == ZERO {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out[(ia * b.rows + ib, ja * b.cols + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of two vectors.
pub fn tensor_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Traces out subsystem `side`, returning the operator on the other one.
pub fn partial_trace(m: &ComplexMatrix, dims: BipartiteDims, side: Side) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::InvalidShape(format!(
            "partial trace needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if m.rows != dims.total() {
        return Err(Error::DimensionMismatch {
            context: "partial_trace",
            expected: dims.total(),
            found: m.rows,
        });
    }
    let (da, db) = (dims.dim_a, dims.dim_b);
    let out = match side {
        Side::A => {
            let mut out = ComplexMatrix::zeros(db, db);
            for b1 in 0..db {
                for b2 in 0..db {
                    out[(b1, b2)] = (0..da).map(|a| m[(a * db + b1, a * db + b2)]).sum();
                }
            }
            out
        }
        Side::B => {
            let mut out = ComplexMatrix::zeros(da, da);
            for a1 in 0..da {
                for a2 in 0..da {
                    out[(a1, a2)] = (0..db).map(|b| m[(a1 * db + b, a2 * db + b)]).sum();
                }
            }
            out
        }
    };
    Ok(out)
}

pub(crate) fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(bits: &[f64]) -> Vec<C64> {
        bits.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn basis_projector_product() {
        let p0 = ComplexMatrix::projector(&ket(&[1.0, 0.0]));
        let p1 = ComplexMatrix::projector(&ket(&[0.0, 1.0]));
        let t = tensor(&p0, &p1).unwrap();
        assert_eq!(t, ComplexMatrix::from_diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn lowering_operator_tensor_identity() {
        let k = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let t = tensor(&k, &ComplexMatrix::identity(2)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (0, 2) || (i, j) == (1, 3) {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(t[(i, j)], C64::new(expected, 0.0), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn tensor_rejects_overflow() {
        let big = ComplexMatrix::identity(16);
        let small = ComplexMatrix::identity(8);
        assert!(matches!(
            tensor(&big, &small),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn partial_trace_of_phi_plus_is_maximally_mixed() {
        let s = 0.5f64.sqrt();
        let phi = ket(&[s, 0.0, 0.0, s]);
        let rho = ComplexMatrix::projector(&phi);
        let dims = BipartiteDims::qubits();
        for side in [Side::A, Side::B] {
            let r = partial_trace(&rho, dims, side).unwrap();
            assert!(r.max_abs_diff(&ComplexMatrix::from_diag(&[0.5, 0.5])) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_size_mismatch() {
        let m = ComplexMatrix::identity(6);
        let err = partial_trace(&m, BipartiteDims::qubits(), Side::A).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 4,
                found: 6,
                ..
            }
        ));
    }

    #[test]
    fn partial_trace_asymmetric_dims() {
        // |0><0| on A (dim 2) with diag(0.2, 0.3, 0.5) on B (dim 3)
        let a = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let b = ComplexMatrix::from_diag(&[0.2, 0.3, 0.5]);
        let ab = tensor(&a, &b).unwrap();
        let dims = BipartiteDims::new(2, 3).unwrap();
        assert!(partial_trace(&ab, dims, Side::A).unwrap().max_abs_diff(&b) < 1e-15);
        assert!(partial_trace(&ab, dims, Side::B).unwrap().max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn bipartite_dims_validation() {
        assert!(BipartiteDims::new(1, 4).is_err());
        assert!(BipartiteDims::new(8, 9).is_err());
        assert!(BipartiteDims::new(8, 8).is_ok());
    }

    #[test]
    fn literal_rejects_wrong_entry_count() {
        let json = r#"{"rows": 2, "cols": 2, "entries": [[1, 0], [0, 0], [0, 0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(json).is_err());
        let json = r#"{"rows": 1, "cols": 2, "entries": [[1, 0.5], [0, -1]]}"#;
        let m: ComplexMatrix = serde_json::from_str(json).unwrap();
        assert_eq!(m[(0, 0)], C64::new(1.0, 0.5));
        assert_eq!(m[(0, 1)], C64::new(0.0, -1.0));
    }

    #[test]
    fn hermitian_part_removes_drift() {
        let mut m = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.5, 0.0]).unwrap();
        m[(0, 1)] += C64::new(1e-12, 0.0);
        let h = m.hermitian_part();
        assert_eq!(h.hermitian_asymmetry(), 0.0);
    }
}
