use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// A dense square complex matrix with finite entries.
///
/// Storage is delegated to `nalgebra`; the public surface and the JSON form
/// (`{"n": .., "entries": [[re, im], ...]}`, row-major) are independent of it.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Builds an `n × n` matrix from `n²` row-major entries.
    pub fn from_row_major(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::NotSquare { n, len: entries.len() });
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite);
        }
        Ok(Self { inner: DMatrix::from_row_slice(n, n, &entries) })
    }

    /// Builds a matrix from real rows; convenient for literals.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::from_row_major(n, entries)
    }

    /// Builds a matrix from complex rows.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let entries = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::from_row_major(n, entries)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Self { inner: DMatrix::from_fn(n, n, f) }
    }

    /// Wraps an `nalgebra` matrix. Panics if it is not square or empty.
    pub fn from_nalgebra(inner: DMatrix<Complex64>) -> Self {
        assert!(inner.is_square() && inner.nrows() > 0, "matrix must be square and non-empty");
        Self { inner }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| ZERO)
    }

    pub fn scalar(n: usize, z: Complex64) -> Self {
        Self::from_fn(n, |i, j| if i == j { z } else { ZERO })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { Complex64::new(diag[i], 0.0) } else { ZERO })
    }

    /// Block-diagonal matrix `diag(b₁, …, b_k)`.
    pub fn direct_sum(blocks: &[ComplexMatrix]) -> Self {
        let n: usize = blocks.iter().map(ComplexMatrix::dim).sum();
        let mut inner = DMatrix::zeros(n, n);
        let mut offset = 0;
        for b in blocks {
            let k = b.dim();
            inner.view_mut((offset, offset), (k, k)).copy_from(&b.inner);
            offset += k;
        }
        Self::from_nalgebra(inner)
    }

    /// Ordered product `m₁·m₂·…·m_k`; the identity for an empty list.
    pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> Self {
        factors.into_iter().fold(Self::identity(n), |acc, f| &acc * f)
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.inner[(i, j)] = z;
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_nalgebra(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.inner[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.inner[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self { inner: self.inner.adjoint() }
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.inner.clone().determinant()
    }

    pub fn inverse(&self) -> Result<Self> {
        let smallest = self.smallest_singular_value();
        if smallest <= crate::tolerance::tolerances().singular * self.norm() || smallest == 0.0 {
            return Err(Error::NotInvertible { smallest_singular: smallest });
        }
        self.inner
            .clone()
            .try_inverse()
            .map(Self::from_nalgebra)
            .ok_or(Error::NotInvertible { smallest_singular: smallest })
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self { inner: &self.inner * z }
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    /// `u·self·u*`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.inner.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Operator (spectral) norm.
    pub fn norm(&self) -> f64 {
        if self.inner.iter().all(|z| *z == ZERO) {
            return 0.0;
        }
        self.singular_values()[0]
    }

    pub fn smallest_singular_value(&self) -> f64 {
        *self.singular_values().last().expect("non-empty matrix")
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Operator-norm distance `‖self − other‖`.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        (self - other).norm()
    }

    /// `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self { inner: (&self.inner + self.inner.adjoint()) * Complex64::new(0.5, 0.0) }
    }

    /// `(A − A*)/(2i)`, so that `A = hermitian_part + i·skew_hermitian_part`.
    pub fn skew_hermitian_part(&self) -> Self {
        Self { inner: (&self.inner - self.inner.adjoint()) * Complex64::new(0.0, -0.5) }
    }

    /// `‖A − A*‖`.
    pub fn hermitian_defect(&self) -> f64 {
        Self { inner: &self.inner - self.inner.adjoint() }.norm()
    }

    /// `‖A*A − 1‖`.
    pub fn unitary_defect(&self) -> f64 {
        let n = self.dim();
        (&(&self.adjoint() * self) - &Self::identity(n)).norm()
    }

    /// `‖AA* − A*A‖`.
    pub fn normality_defect(&self) -> f64 {
        let a_star = self.adjoint();
        (&(self * &a_star) - &(&a_star * self)).norm()
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermitian_defect() <= rel_tol * self.norm().max(f64::MIN_POSITIVE)
    }

    pub fn is_zero(&self) -> bool {
        self.inner.iter().all(|z| *z == ZERO)
    }

    pub fn is_finite(&self) -> bool {
        self.inner.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Copies the `rows × cols` sub-block starting at `(r0, c0)`.
    pub(crate) fn sub_block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> DMatrix<Complex64> {
        self.inner.view((r0, c0), (rows, cols)).into_owned()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        writeln!(f, "ComplexMatrix({n}x{n}) [")?;
        for i in 0..n {
            write!(f, "  ")?;
            for j in 0..n {
                let z = self.inner[(i, j)];
                write!(f, "{:>11.4e}{:+.4e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
                ComplexMatrix { inner: &self.inner $op &rhs.inner }
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { inner: -&self.inner }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            n: self.dim(),
            entries: self.to_row_major().into_iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        let entries = raw.entries.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::from_row_major(raw.n, entries).map_err(serde::de::Error::custom)
    }
}
