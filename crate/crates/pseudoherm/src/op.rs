//! Core value types: dense operators, state vectors, and validated metrics.

use crate::{C64, CMat, CVec, Error, Result, DEFAULT_TOL};

/// Dense complex square matrix representing a linear operator.
///
/// Invariants: square, all entries finite. Constructed values are immutable;
/// every operation returns a fresh `Op`, so values can be shared freely
/// between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    pub(crate) m: CMat,
}

impl Op {
    /// Validates squareness and finiteness.
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { m })
    }

    /// Wraps a matrix produced by internal arithmetic on already-validated inputs.
    pub(crate) fn from_valid(m: CMat) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { m }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: CMat::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: CMat::zeros(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(CMat::from_fn(dim, dim, f))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = CMat::zeros(n, n);
        for (i, z) in diag.iter().enumerate() {
            m[(i, i)] = *z;
        }
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn into_matrix(self) -> CMat {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        Self::from_valid(self.m.adjoint())
    }

    /// Entrywise complex conjugate (the position-basis time-reversal action).
    pub fn conjugate(&self) -> Self {
        Self::from_valid(self.m.map(|z| z.conj()))
    }

    pub fn scale(&self, z: C64) -> Self {
        Self::from_valid(self.m.map(|w| z * w))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn try_inverse(&self) -> Option<Self> {
        self.m.clone().try_inverse().map(Self::from_valid)
    }

    /// `‖A − A†‖ / ‖A‖` (0 for the zero matrix).
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.norm();
        if n == 0.0 {
            return 0.0;
        }
        Op::from_valid(&self.m - self.m.adjoint()).norm() / n
    }

    pub fn apply(&self, v: &StateVec) -> Result<StateVec> {
        check_dim(self.dim(), v.dim())?;
        Ok(StateVec::from_valid(&self.m * &v.v))
    }
}

impl std::ops::Index<(usize, usize)> for Op {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.m[idx]
    }
}

macro_rules! op_binop {
    ($trait:ident, $fn:ident, $sym:tt) => {
        impl std::ops::$trait<&Op> for &Op {
            type Output = Op;
            fn $fn(self, rhs: &Op) -> Op {
                Op::from_valid(&self.m $sym &rhs.m)
            }
        }
    };
}
op_binop!(Add, add, +);
op_binop!(Sub, sub, -);
op_binop!(Mul, mul, *);

impl std::ops::Neg for &Op {
    type Output = Op;
    fn neg(self) -> Op {
        Op::from_valid(-&self.m)
    }
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &Op, b: &Op) -> Result<Op> {
    check_dim(a.dim(), b.dim())?;
    Ok(Op::from_valid(&a.m * &b.m - &b.m * &a.m))
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Complex state vector with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVec {
    pub(crate) v: CVec,
}

impl StateVec {
    pub fn new(v: CVec) -> Result<Self> {
        for (i, z) in v.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: 0 });
            }
        }
        Ok(Self { v })
    }

    pub(crate) fn from_valid(v: CVec) -> Self {
        Self { v }
    }

    pub fn from_slice(entries: &[C64]) -> Self {
        Self {
            v: CVec::from_column_slice(entries),
        }
    }

    /// Standard basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = CVec::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        Self { v }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn vector(&self) -> &CVec {
        &self.v
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.v.norm()
    }
}

impl std::ops::Index<usize> for StateVec {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.v[i]
    }
}

/// Hermitian invertible operator defining an indefinite inner product.
///
/// Validation happens once at construction: the input is symmetrized to
/// `(η + η†)/2`, the pre-symmetrization Hermiticity residual is recorded, and
/// the inverse is computed and cached together with a Frobenius condition
/// estimate `‖η‖·‖η⁻¹‖ / dim`.
#[derive(Debug, Clone)]
pub struct Metric {
    op: Op,
    inverse: Op,
    hermiticity_residual: f64,
    condition_estimate: f64,
}

impl Metric {
    pub fn new(op: Op) -> Result<Self> {
        Self::with_tol(op, DEFAULT_TOL)
    }

    pub fn with_tol(op: Op, tol: f64) -> Result<Self> {
        let residual = op.hermiticity_residual();
        if residual > tol {
            return Err(Error::NotHermitian { residual, tol });
        }
        let sym = Op::from_valid((&op.m + op.m.adjoint()).map(|z| 0.5 * z));
        let inverse = sym.try_inverse().ok_or(Error::SingularMetric)?;
        let n = sym.dim().max(1) as f64;
        let condition_estimate = sym.norm() * inverse.norm() / n;
        // Refuse metrics whose inverse is unusable at double precision.
        if !condition_estimate.is_finite() || condition_estimate > 1e14 {
            return Err(Error::SingularMetric);
        }
        Ok(Self {
            op: sym,
            inverse,
            hermiticity_residual: residual,
            condition_estimate,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            op: Op::identity(dim),
            inverse: Op::identity(dim),
            hermiticity_residual: 0.0,
            condition_estimate: 1.0,
        }
    }

    /// Diagonal metric with entries ±1.
    pub fn from_signature(signs: &[i8]) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidParameter(
                "signature entries must be ±1".into(),
            ));
        }
        let diag: Vec<C64> = signs.iter().map(|s| C64::new(*s as f64, 0.0)).collect();
        let op = Op::from_diagonal(&diag);
        Ok(Self {
            inverse: op.clone(),
            op,
            hermiticity_residual: 0.0,
            condition_estimate: 1.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &Op {
        &self.op
    }

    pub fn inverse(&self) -> &Op {
        &self.inverse
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.hermiticity_residual
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }
}
