//! Dense complex matrices of size 2 and 4.
//!
//! Every operator in the crate (projectors, propagators, spin operators,
//! density matrices) lives on a [`ComplexMatrix`]. Indices in the public
//! API are 1-based so that `m.get(1, 3)` reads the element that the physics
//! calls `p_13`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Default tolerance for operator equality.
pub const DEFAULT_TOL: f64 = 1e-12;

/// The two supported matrix sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Four,
}

impl Dim {
    pub fn size(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Four => 4,
        }
    }

    pub fn from_size(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            4 => Ok(Dim::Four),
            _ => Err(Error::UnsupportedDimension(n)),
        }
    }
}

/// Square complex matrix, row-major, dimension 2 or 4.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: Dim,
    data: [C64; 16],
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

impl ComplexMatrix {
    pub fn zeros(dim: Dim) -> Self {
        ComplexMatrix {
            dim,
            data: [ZERO; 16],
        }
    }

    pub fn identity(dim: Dim) -> Self {
        let mut m = Self::zeros(dim);
        for i in 1..=dim.size() {
            m.set(i, i, ONE);
        }
        m
    }

    /// The matrix with a single unit entry at `(row, col)`.
    pub fn unit(dim: Dim, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.set(row, col, ONE);
        m
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let dim = Dim::from_size(values.len())?;
        let mut m = Self::zeros(dim);
        for (i, &v) in values.iter().enumerate() {
            m.set(i + 1, i + 1, C64::new(v, 0.0));
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from rows; rejects ragged input, unsupported sizes
    /// and non-finite entries.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let dim = Dim::from_size(rows.len())?;
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != rows.len() {
                return Err(Error::DimensionMismatch {
                    left: rows.len(),
                    right: row.len(),
                });
            }
            for (j, &z) in row.iter().enumerate() {
                m.set(i + 1, j + 1, z);
            }
        }
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.dim.size()
    }

    #[inline]
    fn offset(&self, row: usize, col: usize) -> usize {
        let n = self.size();
        assert!(
            (1..=n).contains(&row) && (1..=n).contains(&col),
            "index ({row}, {col}) out of range for {n}x{n} matrix"
        );
        (row - 1) * n + (col - 1)
    }

    /// Element at 1-based `(row, col)`. Panics when out of range.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[self.offset(row, col)]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        let k = self.offset(row, col);
        self.data[k] = value;
    }

    /// Rows as owned vectors, 0-based, for serialization and display.
    pub fn rows(&self) -> Vec<Vec<C64>> {
        let n = self.size();
        (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].to_vec())
            .collect()
    }

    pub fn check_finite(&self) -> Result<()> {
        let n = self.size();
        for i in 1..=n {
            for j in 1..=n {
                let z = self.get(i, j);
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.size();
        let mut out = Self::zeros(self.dim);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.size();
        let mut out = Self::zeros(self.dim);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (1..=self.size()).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = *self;
        for z in out.data.iter_mut() {
            *z *= factor;
        }
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let mut out = *self;
        for (z, w) in out.data.iter_mut().zip(other.data.iter()) {
            *z += w;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let mut out = *self;
        for (z, w) in out.data.iter_mut().zip(other.data.iter()) {
            *z -= w;
        }
        Ok(out)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mat_mul(other)?.checked_sub(&other.mat_mul(self)?)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_dim(other)?;
        let n = self.size();
        Ok(self.data[..n * n]
            .iter()
            .zip(other.data[..n * n].iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Entrywise comparison; `false` on dimension mismatch.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d <= tol)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let product = self.mat_mul(&self.adjoint()).expect("same dimension");
        product.approx_eq(&Self::identity(self.dim), tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    /// Entries strictly off the main diagonal, as `(row, col, value)`.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        let n = self.size();
        (1..=n)
            .flat_map(move |i| (1..=n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| (i, j, self.get(i, j)))
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.mat_mul(self)?.mat_mul(&u.adjoint())
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.size(),
                right: other.size(),
            })
        }
    }
}

/// Kronecker product of two 2×2 factors.
///
/// Factor indices `(r, s)` land on row/column `2(r − 1) + s` of the result,
/// which is the level map used by [`crate::spin::embed_two_qubit`].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.dim != Dim::Two {
            return Err(Error::DimensionMismatch {
                left: 2,
                right: m.size(),
            });
        }
    }
    let mut out = ComplexMatrix::zeros(Dim::Four);
    for r1 in 1..=2 {
        for r2 in 1..=2 {
            for s1 in 1..=2 {
                for s2 in 1..=2 {
                    out.set(
                        2 * (r1 - 1) + s1,
                        2 * (r2 - 1) + s2,
                        a.get(r1, r2) * b.get(s1, s2),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Free-function spelling of [`ComplexMatrix::mat_mul`].
pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.mat_mul(b)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.trace()
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.max_abs_diff(b)
}

// Operator sugar for internal code where both operands are known to share a
// dimension. These panic on mismatch; use the `checked_*` methods otherwise.

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        self.mat_mul(&rhs)
            .expect("matrix product dimension mismatch")
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.mat_mul(rhs)
            .expect("matrix product dimension mismatch")
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        self.checked_add(&rhs)
            .expect("matrix sum dimension mismatch")
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        self.checked_sub(&rhs)
            .expect("matrix difference dimension mismatch")
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul<ComplexMatrix> for C64 {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        rhs.scale(self)
    }
}

impl Mul<ComplexMatrix> for f64 {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        rhs.scale_real(self)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.size(), self.size())?;
        for row in self.rows() {
            write!(f, " ")?;
            for z in row {
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: usize, n: usize) -> ComplexMatrix {
        ComplexMatrix::unit(Dim::Four, m, n)
    }

    #[test]
    fn identity_is_neutral() {
        let a = p(1, 3) + p(2, 2).scale(C64::new(0.5, -2.0));
        assert_eq!(ComplexMatrix::identity(Dim::Four) * a, a);
    }

    #[test]
    fn single_entry_products() {
        assert_eq!(p(1, 3) * p(3, 2), p(1, 2));
        assert_eq!(p(1, 2) * p(3, 2), ComplexMatrix::zeros(Dim::Four));
    }

    #[test]
    fn mismatched_product_is_rejected() {
        let a = ComplexMatrix::identity(Dim::Two);
        let b = ComplexMatrix::identity(Dim::Four);
        assert_eq!(
            a.mat_mul(&b),
            Err(Error::DimensionMismatch { left: 2, right: 4 })
        );
        assert!(a.max_abs_diff(&b).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let d = ComplexMatrix::diagonal(&[1.0, -2.0, 3.5, 0.0]).unwrap();
        assert_eq!(d.adjoint(), d);
        assert_eq!(p(2, 1).adjoint(), p(1, 2));
        let i = C64::i();
        assert_eq!(p(1, 2).scale(i).adjoint(), p(2, 1).scale(-i));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(
            ComplexMatrix::identity(Dim::Four).trace(),
            C64::new(4.0, 0.0)
        );
        for m in 1..=4 {
            assert_eq!(p(m, m).trace(), ONE);
        }
        assert_eq!(p(2, 1).trace(), ZERO);
    }

    #[test]
    fn max_abs_diff_examples() {
        let a = p(1, 2) + p(3, 4).scale(C64::new(0.0, 2.0));
        assert_eq!(a.max_abs_diff(&a).unwrap(), 0.0);
        let id = ComplexMatrix::identity(Dim::Four);
        assert_eq!(
            id.max_abs_diff(&ComplexMatrix::zeros(Dim::Four)).unwrap(),
            1.0
        );
        assert_eq!(p(1, 2).max_abs_diff(&p(2, 1)).unwrap(), 1.0);
    }

    #[test]
    fn kron_examples() {
        let one = ComplexMatrix::identity(Dim::Two);
        assert_eq!(
            kron(&one, &one).unwrap(),
            ComplexMatrix::identity(Dim::Four)
        );

        // R11 ⊗ (S12 + S21): only (r1, r2) = (1, 1) survives, so rows and
        // columns 2(1-1)+s land on levels 1 and 2.
        let r11 = ComplexMatrix::unit(Dim::Two, 1, 1);
        let sx = ComplexMatrix::unit(Dim::Two, 1, 2) + ComplexMatrix::unit(Dim::Two, 2, 1);
        assert_eq!(kron(&r11, &sx).unwrap(), p(1, 2) + p(2, 1));

        let r22 = ComplexMatrix::unit(Dim::Two, 2, 2);
        assert_eq!(kron(&r22, &one).unwrap(), p(3, 3) + p(4, 4));

        assert!(kron(&p(1, 1), &one).is_err());
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert_eq!(
            ComplexMatrix::diagonal(&[1.0, 2.0, 3.0]),
            Err(Error::UnsupportedDimension(3))
        );
        assert!(matches!(
            ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(
            ComplexMatrix::from_real_rows(&[[1.0, f64::NAN], [0.0, 1.0]]),
            Err(Error::NonFinite { row: 1, col: 2 })
        );
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn zero_index_panics() {
        ComplexMatrix::identity(Dim::Two).get(0, 1);
    }
}
