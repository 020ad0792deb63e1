//! Fixed-step RK4 integration of `i dψ/dt = H(t)ψ` and conservation checks.
//!
//! The indefinite inner product `⟨⟨ψ₁(t)|ψ₂(t)⟩⟩_η` is a constant of motion
//! exactly when the generator is η-pseudo-Hermitian at every instant, so the
//! measured drift doubles as a dynamical pseudo-Hermiticity detector. The
//! integrator is deliberately fixed-step (reproducible drift numbers); step
//! size guidance is `dt ≲ 0.1/‖H‖`.

use crate::op::check_dim;
use crate::operators::indefinite_inner;
use crate::{C64, CVec, Error, Metric, Op, Result, StateVec};

/// Time-dependent generator: applies `H(t)` to a state.
pub trait Generator {
    fn dim(&self) -> usize;
    fn apply(&self, t: f64, psi: &CVec, out: &mut CVec);
}

/// A constant matrix is a generator.
impl Generator for Op {
    fn dim(&self) -> usize {
        Op::dim(self)
    }
    fn apply(&self, _t: f64, psi: &CVec, out: &mut CVec) {
        self.matrix().mul_to(psi, out);
    }
}

/// Generator defined by a closure `(t, ψ, out)`.
pub struct FnGenerator<F: Fn(f64, &CVec, &mut CVec)> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &CVec, &mut CVec)> FnGenerator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(f64, &CVec, &mut CVec)> Generator for FnGenerator<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, t: f64, psi: &CVec, out: &mut CVec) {
        (self.f)(t, psi, out)
    }
}

/// States recorded at every accepted step, `t = 0, dt, 2dt, …`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVec>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &StateVec {
        self.states.last().expect("non-empty trajectory")
    }
}

/// Classical RK4 with the generator sampled at the stage times
/// `t, t + dt/2, t + dt`. Aborts with a diagnostic if the state leaves the
/// representable range (instability).
pub fn evolve<G: Generator + ?Sized>(
    h: &G,
    psi0: &StateVec,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !dt.is_finite() || dt <= 0.0 || !t_final.is_finite() || t_final < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need dt > 0 and t_final ≥ 0, got dt = {dt}, t_final = {t_final}"
        )));
    }
    check_dim(h.dim(), psi0.dim())?;
    let n = psi0.dim();
    let steps = (t_final / dt).round() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut psi = psi0.vector().clone();
    times.push(0.0);
    states.push(psi0.clone());

    let mut hk = CVec::zeros(n);
    let mut k1 = CVec::zeros(n);
    let mut k2 = CVec::zeros(n);
    let mut k3 = CVec::zeros(n);
    let mut k4 = CVec::zeros(n);
    let mut stage = CVec::zeros(n);
    let mi = C64::new(0.0, -1.0);

    for step in 0..steps {
        let t = step as f64 * dt;
        // k = −i H(t) ψ at the four stages
        h.apply(t, &psi, &mut hk);
        k1.zip_apply(&hk, |k, v| *k = mi * v);
        stage.zip_zip_apply(&psi, &k1, |s, p, k| *s = p + C64::new(0.5 * dt, 0.0) * k);
        h.apply(t + 0.5 * dt, &stage, &mut hk);
        k2.zip_apply(&hk, |k, v| *k = mi * v);
        stage.zip_zip_apply(&psi, &k2, |s, p, k| *s = p + C64::new(0.5 * dt, 0.0) * k);
        h.apply(t + 0.5 * dt, &stage, &mut hk);
        k3.zip_apply(&hk, |k, v| *k = mi * v);
        stage.zip_zip_apply(&psi, &k3, |s, p, k| *s = p + C64::new(dt, 0.0) * k);
        h.apply(t + dt, &stage, &mut hk);
        k4.zip_apply(&hk, |k, v| *k = mi * v);

        let w = dt / 6.0;
        for i in 0..n {
            psi[i] += C64::new(w, 0.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t_next = (step + 1) as f64 * dt;
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteState { t: t_next });
        }
        times.push(t_next);
        states.push(StateVec::from_valid(psi.clone()));
    }
    Ok(Trajectory { times, states })
}

/// Maximum deviation of `⟨⟨ψ₁(t)|ψ₂(t)⟩⟩_η` from its initial value, normalized
/// by the initial magnitude (absolute when the initial value vanishes).
pub fn inner_product_drift(
    traj1: &Trajectory,
    traj2: &Trajectory,
    eta: &Metric,
) -> Result<f64> {
    if traj1.len() != traj2.len() {
        return Err(Error::TrajectoryMismatch(format!(
            "lengths {} vs {}",
            traj1.len(),
            traj2.len()
        )));
    }
    for (a, b) in traj1.times.iter().zip(traj2.times.iter()) {
        if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
            return Err(Error::TrajectoryMismatch(format!(
                "time stamps differ: {a} vs {b}"
            )));
        }
    }
    if traj1.is_empty() {
        return Ok(0.0);
    }
    let initial = indefinite_inner(&traj1.states[0], &traj2.states[0], eta)?;
    let denom = if initial.norm() > 0.0 {
        initial.norm()
    } else {
        1.0
    };
    let mut max_drift = 0.0_f64;
    for (s1, s2) in traj1.states.iter().zip(traj2.states.iter()).skip(1) {
        let v = indefinite_inner(s1, s2, eta)?;
        max_drift = max_drift.max((v - initial).norm() / denom);
    }
    Ok(max_drift)
}

/// Inner-product time series `⟨⟨ψ₁(t)|ψ₂(t)⟩⟩_η`, one value per recorded step.
pub fn inner_product_series(
    traj1: &Trajectory,
    traj2: &Trajectory,
    eta: &Metric,
) -> Result<Vec<(f64, C64)>> {
    if traj1.len() != traj2.len() {
        return Err(Error::TrajectoryMismatch(format!(
            "lengths {} vs {}",
            traj1.len(),
            traj2.len()
        )));
    }
    traj1
        .times
        .iter()
        .zip(traj1.states.iter().zip(traj2.states.iter()))
        .map(|(&t, (s1, s2))| Ok((t, indefinite_inner(s1, s2, eta)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CMat;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_generator_keeps_state() {
        let h = Op::zeros(3);
        let psi0 = StateVec::from_slice(&[c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.5)]);
        let traj = evolve(&h, &psi0, 1.0, 0.01).unwrap();
        assert_eq!(traj.len(), 101);
        let diff: f64 = (traj.final_state().vector() - psi0.vector()).norm();
        assert_eq!(diff, 0.0);
    }

    #[test]
    fn hermitian_phases_match_exact_solution() {
        // H = diag(1, 2), t = π: phases e^{−iπ} and e^{−2πi}.
        let h = Op::from_diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let s = 1.0 / 2.0_f64.sqrt();
        let psi0 = StateVec::from_slice(&[c(s, 0.0), c(s, 0.0)]);
        // dt divides t_final exactly so the endpoint lands on π
        let dt = std::f64::consts::PI / 4000.0;
        let traj = evolve(&h, &psi0, std::f64::consts::PI, dt).unwrap();
        let fin = traj.final_state();
        let expect0 = c(s, 0.0) * c(-1.0, 0.0);
        let expect1 = c(s, 0.0) * c(1.0, 0.0);
        assert!((fin[0] - expect0).norm() < 1e-8);
        assert!((fin[1] - expect1).norm() < 1e-8);
    }

    #[test]
    fn anti_hermitian_growth_matches_exponential() {
        // H = diag(i): ψ(t) = e^{t}ψ(0).
        let h = Op::from_diagonal(&[c(0.0, 1.0)]);
        let psi0 = StateVec::from_slice(&[c(1.0, 0.0)]);
        let traj = evolve(&h, &psi0, 1.0, 1e-3).unwrap();
        let grown = traj.final_state()[0].norm();
        assert!(
            (grown - 1.0_f64.exp()).abs() / 1.0_f64.exp() < 1e-6,
            "norm grew to {grown}"
        );
    }

    #[test]
    fn drift_detects_pseudo_hermiticity() {
        // diag(i, −i) with the swap metric conserves the inner product…
        let h = Op::from_diagonal(&[c(0.0, 1.0), c(0.0, -1.0)]);
        let eta = Metric::new(
            Op::new(CMat::from_row_slice(
                2,
                2,
                &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            ))
            .unwrap(),
        )
        .unwrap();
        let psi0 = StateVec::from_slice(&[c(0.6, 0.0), c(0.0, 0.8)]);
        let traj = evolve(&h, &psi0, 10.0, 1e-3).unwrap();
        let drift = inner_product_drift(&traj, &traj, &eta).unwrap();
        assert!(drift <= 1e-8, "drift {drift}");

        // …while diag(i, 2i) against the Euclidean metric does not.
        let bad = Op::from_diagonal(&[c(0.0, 1.0), c(0.0, 2.0)]);
        let traj = evolve(&bad, &psi0, 10.0, 1e-3).unwrap();
        let drift = inner_product_drift(&traj, &traj, &Metric::identity(2)).unwrap();
        assert!(drift > 0.1, "violation detector drift {drift}");
    }

    #[test]
    fn rk4_global_error_is_fourth_order() {
        let h = Op::from_diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let psi0 = StateVec::from_slice(&[c(0.8, 0.0), c(0.0, 0.6)]);
        let exact = |t: f64| {
            StateVec::from_slice(&[
                c(0.8, 0.0) * (c(0.0, -t)).exp(),
                c(0.0, 0.6) * (c(0.0, -2.0 * t)).exp(),
            ])
        };
        let err = |dt: f64| {
            let traj = evolve(&h, &psi0, 1.0, dt).unwrap();
            (traj.final_state().vector() - exact(1.0).vector()).norm()
        };
        let e1 = err(2e-2);
        let e2 = err(1e-2);
        let ratio = e1 / e2;
        assert!(
            (10.0..24.0).contains(&ratio),
            "halving dt should cut the error ~16×, got {ratio:.1} ({e1:.3e} → {e2:.3e})"
        );
    }

    #[test]
    fn time_dependent_generator_stages() {
        // i dψ/dt = a(t) ψ with a(t) = t: ψ(t) = e^{−i t²/2} ψ(0).
        let gen = FnGenerator::new(1, |t: f64, psi: &CVec, out: &mut CVec| {
            out[0] = C64::new(t, 0.0) * psi[0];
        });
        let psi0 = StateVec::from_slice(&[c(1.0, 0.0)]);
        let traj = evolve(&gen, &psi0, 2.0, 1e-3).unwrap();
        let expect = (c(0.0, -2.0)).exp();
        assert!((traj.final_state()[0] - expect).norm() < 1e-9);
    }

    #[test]
    fn instability_is_reported() {
        // dt far beyond the stability limit on a growing generator
        let h = Op::from_diagonal(&[c(0.0, 200.0)]);
        let psi0 = StateVec::from_slice(&[c(1.0, 0.0)]);
        match evolve(&h, &psi0, 40.0, 0.5) {
            Err(Error::NonFiniteState { t }) => assert!(t > 0.0),
            other => panic!("expected instability abort, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_trajectories_rejected() {
        let h = Op::zeros(1);
        let psi0 = StateVec::from_slice(&[c(1.0, 0.0)]);
        let t1 = evolve(&h, &psi0, 1.0, 0.1).unwrap();
        let t2 = evolve(&h, &psi0, 1.0, 0.05).unwrap();
        assert!(matches!(
            inner_product_drift(&t1, &t2, &Metric::identity(1)),
            Err(Error::TrajectoryMismatch(_))
        ));
    }
}
