//! The pseudo-adjoint algebra: `O♯ = η₊⁻¹ O† η₋` and everything it buys.
//!
//! With `η₊ = η₋ = η` this is an involutive, antilinear, product-reversing
//! *-operation; `O♯ = O` is exactly the pseudo-Hermiticity condition
//! `η O = O† η`. All residuals returned here are Frobenius norms normalized
//! by the factor norms.

use crate::op::check_dim;
use crate::{C64, CMat, Error, Metric, Op, Result, StateVec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// `O♯ = η₊⁻¹ O† η₋`.
pub fn pseudo_adjoint(o: &Op, eta_plus: &Metric, eta_minus: &Metric) -> Result<Op> {
    check_dim(o.dim(), eta_plus.dim())?;
    check_dim(o.dim(), eta_minus.dim())?;
    Ok(Op::from_valid(
        eta_plus.inverse().matrix() * o.matrix().adjoint() * eta_minus.op().matrix(),
    ))
}

/// `‖ηH − H†η‖ / (‖η‖·‖H‖)`; zero exactly when `H` is η-pseudo-Hermitian.
pub fn pseudo_hermiticity_residual(h: &Op, eta: &Metric) -> Result<f64> {
    check_dim(h.dim(), eta.dim())?;
    let denom = eta.op().norm() * h.norm();
    if denom == 0.0 {
        return Ok(0.0);
    }
    let defect = eta.op().matrix() * h.matrix() - h.matrix().adjoint() * eta.op().matrix();
    Ok(Op::from_valid(defect).norm() / denom)
}

/// The indefinite inner product `⟨⟨ψ₁|ψ₂⟩⟩_η = ⟨ψ₁|η|ψ₂⟩`.
///
/// Conjugate-symmetric and sesquilinear (conjugate-linear in the first slot).
pub fn indefinite_inner(psi1: &StateVec, psi2: &StateVec, eta: &Metric) -> Result<C64> {
    check_dim(eta.dim(), psi1.dim())?;
    check_dim(eta.dim(), psi2.dim())?;
    let w = eta.op().matrix() * psi2.vector();
    Ok(psi1.vector().dotc(&w))
}

/// The η-semi-norm squared `⟨⟨ψ|ψ⟩⟩_η`, which may vanish or go negative.
pub fn eta_semi_norm_sq(psi: &StateVec, eta: &Metric) -> Result<f64> {
    let z = indefinite_inner(psi, psi, eta)?;
    // Conjugate symmetry forces a real value; a sizable imaginary part can
    // only come from a non-Hermitian metric, which Metric construction rules out.
    let scale = eta.op().norm() * psi.norm() * psi.norm();
    if z.im.abs() > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian {
            residual: z.im.abs() / scale,
            tol: 1e-10,
        });
    }
    Ok(z.re)
}

/// Conjugates the pair `(O, η)` by a unitary: `(U†OU, U†ηU)`.
///
/// Pseudo-Hermiticity is invariant under this transport; the returned pair has
/// the same residual as the input up to roundoff.
pub fn unitary_transport(o: &Op, eta: &Metric, u: &Op) -> Result<(Op, Metric)> {
    check_dim(o.dim(), eta.dim())?;
    check_dim(o.dim(), u.dim())?;
    let n = u.dim() as f64;
    let defect = Op::from_valid(u.matrix().adjoint() * u.matrix() - CMat::identity(u.dim(), u.dim()));
    let residual = defect.norm() / n.sqrt().max(1.0);
    if residual > 1e-10 {
        return Err(Error::NotUnitary {
            residual,
            tol: 1e-10,
        });
    }
    let o_u = Op::from_valid(u.matrix().adjoint() * o.matrix() * u.matrix());
    let eta_u = Op::from_valid(u.matrix().adjoint() * eta.op().matrix() * u.matrix());
    Ok((o_u, Metric::new(eta_u)?))
}

/// `S = η₂⁻¹ η₁`, which commutes with `H` whenever `H` is pseudo-Hermitian
/// with respect to both metrics. The caller checks `‖[H, S]‖`.
pub fn symmetry_candidate(eta1: &Metric, eta2: &Metric) -> Result<Op> {
    check_dim(eta1.dim(), eta2.dim())?;
    Ok(Op::from_valid(
        eta2.inverse().matrix() * eta1.op().matrix(),
    ))
}

/// Deterministic η-pseudo-Hermitian test instance: `H = ½(B + η⁻¹B†η)` for a
/// seeded complex Ginibre draw `B`.
pub fn random_pseudo_hermitian(eta: &Metric, dim: usize, seed: u64) -> Result<Op> {
    check_dim(eta.dim(), dim)?;
    let b = random_ginibre(dim, seed);
    let sym = eta.inverse().matrix() * b.adjoint() * eta.op().matrix();
    Ok(Op::from_valid((b + sym).map(|z| 0.5 * z)))
}

/// Seeded complex Ginibre matrix (independent standard normal entries).
pub fn random_ginibre(dim: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    CMat::from_fn(dim, dim, |_, _| {
        C64::new(normal.sample(&mut rng), normal.sample(&mut rng))
    })
}

/// Seeded Haar-ish unitary: Q factor of a Ginibre draw.
pub fn random_unitary(dim: usize, seed: u64) -> Op {
    let g = random_ginibre(dim, seed);
    let qr = g.qr();
    Op::from_valid(qr.q())
}

/// Seeded random metric `U diag(±1 scaled) U†`: Hermitian, indefinite in
/// general, and well conditioned.
pub fn random_metric(dim: usize, seed: u64, scaled: bool) -> Result<Metric> {
    use rand::RngExt;
    let u = random_unitary(dim, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let diag: Vec<C64> = (0..dim)
        .map(|_| {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let mag = if scaled {
                0.5 + 1.5 * rng.random::<f64>()
            } else {
                1.0
            };
            C64::new(sign * mag, 0.0)
        })
        .collect();
    let d = Op::from_diagonal(&diag);
    Metric::new(Op::from_valid(
        u.matrix() * d.matrix() * u.matrix().adjoint(),
    ))
}
