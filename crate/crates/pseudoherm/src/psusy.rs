//! Pseudo-supersymmetric pairs and the factory of non-Hermitian Hamiltonians
//! with real spectra.
//!
//! Given an intertwiner `D: ℋ₊ → ℋ₋` and metrics `η±`, the partner pair
//! `H₊ = ½D♯D`, `H₋ = ½DD♯` (with `D♯ = η₊⁻¹D†η₋`) satisfies the graded
//! algebra `Q² = 0`, `{Q, Q♯} = 2H` and the intertwining relations
//! `DH₊ = H₋D`, `D♯H₋ = H₊D♯` as exact matrix identities, so the two partners
//! are isospectral up to kernel modes.
//!
//! The first-order family lives on a parity-symmetric grid with `η± = ±P` and
//! `D = p + f(x) + ig(x)`. Demanding a Hermitian `H₊` fixes `g₊ = 0` and
//! `g₋ = −f₊′/(2f₊)`; writing `f₊ = λe^ξ` for an even ξ gives closed-form
//! partner potentials. `H₋` is then non-Hermitian with a provably real
//! spectrum, and ceases to be PT-symmetric as soon as `f₋ ≠ 0`.

use crate::discretize::{validate_parity, Grid1D, GridOps};
use crate::op::check_dim;
use crate::operators::pseudo_adjoint;
use crate::{C64, CMat, Error, Metric, Op, Result, DEFAULT_KERNEL_TOL};

/// The ℤ₂ grading `τ = diag(I, −I)`; exactly Hermitian, involutive, and
/// self-inverse by construction.
#[derive(Debug, Clone)]
pub struct Grading {
    pub tau: Op,
    pub n_plus: usize,
    pub n_minus: usize,
}

impl Grading {
    pub fn new(n_plus: usize, n_minus: usize) -> Self {
        let mut diag = vec![C64::new(1.0, 0.0); n_plus];
        diag.extend(std::iter::repeat_n(C64::new(-1.0, 0.0), n_minus));
        Self {
            tau: Op::from_diagonal(&diag),
            n_plus,
            n_minus,
        }
    }
}

/// A pseudo-supersymmetric partner pair with its two-block charge.
#[derive(Debug, Clone)]
pub struct SusyPair {
    pub d: Op,
    pub d_sharp: Op,
    pub h_plus: Op,
    pub h_minus: Op,
    pub eta_plus: Metric,
    pub eta_minus: Metric,
    /// `Q`: lower-left block `D`, odd with respect to the grading.
    pub charge: Op,
    /// `Q♯`: upper-right block `D♯`.
    pub charge_sharp: Op,
}

fn block_two(n: usize, ul: Option<&Op>, ur: Option<&Op>, ll: Option<&Op>, lr: Option<&Op>) -> Op {
    let mut m = CMat::zeros(2 * n, 2 * n);
    let mut put = |r0: usize, c0: usize, b: Option<&Op>| {
        if let Some(b) = b {
            for j in 0..n {
                for i in 0..n {
                    m[(r0 + i, c0 + j)] = b.matrix()[(i, j)];
                }
            }
        }
    };
    put(0, 0, ul);
    put(0, n, ur);
    put(n, 0, ll);
    put(n, n, lr);
    Op::from_valid(m)
}

/// Builds the pair from an intertwiner and the two metrics.
pub fn build_susy_pair(d: Op, eta_plus: Metric, eta_minus: Metric) -> Result<SusyPair> {
    check_dim(d.dim(), eta_plus.dim())?;
    check_dim(d.dim(), eta_minus.dim())?;
    let n = d.dim();
    let d_sharp = pseudo_adjoint(&d, &eta_plus, &eta_minus)?;
    let h_plus = (&d_sharp * &d).scale(C64::new(0.5, 0.0));
    let h_minus = (&d * &d_sharp).scale(C64::new(0.5, 0.0));
    let charge = block_two(n, None, None, Some(&d), None);
    let charge_sharp = block_two(n, None, Some(&d_sharp), None, None);
    Ok(SusyPair {
        d,
        d_sharp,
        h_plus,
        h_minus,
        eta_plus,
        eta_minus,
        charge,
        charge_sharp,
    })
}

impl SusyPair {
    pub fn dim(&self) -> usize {
        self.d.dim()
    }

    /// `H = diag(H₊, H₋)` on the graded space.
    pub fn hamiltonian(&self) -> Op {
        block_two(self.dim(), Some(&self.h_plus), None, None, Some(&self.h_minus))
    }

    /// `η = diag(η₊, η₋)`, even with respect to the grading.
    pub fn metric(&self) -> Result<Metric> {
        let block = block_two(
            self.dim(),
            Some(self.eta_plus.op()),
            None,
            None,
            Some(self.eta_minus.op()),
        );
        Metric::new(block)
    }

    pub fn grading(&self) -> Grading {
        Grading::new(self.dim(), self.dim())
    }

    /// `‖DH₊ − H₋D‖ / (‖D‖·‖H₊‖)`; a strict identity for product-built pairs.
    pub fn intertwining_residual(&self) -> f64 {
        let denom = self.d.norm() * self.h_plus.norm();
        if denom == 0.0 {
            return 0.0;
        }
        (&(&self.d * &self.h_plus) - &(&self.h_minus * &self.d)).norm() / denom
    }
}

/// How `D` and `D♯` transport eigenvectors between the partners.
#[derive(Debug, Clone)]
pub struct SpectralMap {
    /// `(H₊ level index, eigenvalue, eigenpair residual of D·v under H₋)`.
    pub mapped_plus: Vec<(usize, C64, f64)>,
    /// H₊ levels annihilated by `D` (eigenvalue forced to 0).
    pub zero_modes_plus: Vec<usize>,
    /// `(H₋ level index, eigenvalue, eigenpair residual of D♯·v under H₊)`.
    pub mapped_minus: Vec<(usize, C64, f64)>,
    pub zero_modes_minus: Vec<usize>,
}

type MappedLevels = Vec<(usize, C64, f64)>;

/// Checks the eigenvector transport level by level, flagging kernel vectors
/// (`‖Dv‖ ≤ tol·‖D‖·‖v‖`, which forces the eigenvalue to vanish).
pub fn spectral_map(pair: &SusyPair, kernel_tol: f64) -> Result<SpectralMap> {
    let map_side = |h_from: &Op, h_to: &Op, d: &Op| -> Result<(MappedLevels, Vec<usize>)> {
        let sys = crate::biorthogonal::eig_biorthonormal(
            h_from,
            crate::biorthogonal::default_cluster_tol(&[C64::new(h_from.norm(), 0.0)]),
        )?;
        let mut mapped = Vec::new();
        let mut zeros = Vec::new();
        let dnorm = d.norm();
        let scale = h_from.norm().max(1.0);
        for (k, &e) in sys.eigenvalues.iter().enumerate() {
            let v = sys.right_vector(k);
            let w = d.matrix() * &v;
            if w.norm() <= kernel_tol * dnorm * v.norm() {
                debug_assert!(e.norm() <= 1e-6 * scale, "kernel mode with E = {e}");
                zeros.push(k);
            } else {
                let resid = (h_to.matrix() * &w - w.map(|z| e * z)).norm() / (h_to.norm() * w.norm());
                mapped.push((k, e, resid));
            }
        }
        Ok((mapped, zeros))
    };
    let (mapped_plus, zero_modes_plus) = map_side(&pair.h_plus, &pair.h_minus, &pair.d)?;
    let (mapped_minus, zero_modes_minus) = map_side(&pair.h_minus, &pair.h_plus, &pair.d_sharp)?;
    Ok(SpectralMap {
        mapped_plus,
        zero_modes_plus,
        mapped_minus,
        zero_modes_minus,
    })
}

/// Shape of the even weight function ξ.
pub enum XiShape {
    /// `ξ(x) = −(x/ℓ)^{2n}` with analytic derivatives.
    PolyEven { n: u32, ell: f64 },
    /// Arbitrary even function; derivatives by central differences at the
    /// same second-order accuracy as the momentum stencil.
    Custom(Box<dyn Fn(f64) -> f64>),
}

/// Validated first-order data: λ, tabulated ξ and derivatives, odd `f₋`, and
/// an (ordinarily zero) even `g₊`.
pub struct FirstOrderData {
    grid: Grid1D,
    pub lambda: f64,
    xi: Vec<f64>,
    xi_prime: Vec<f64>,
    xi_second: Vec<f64>,
    f_minus: Vec<f64>,
    g_plus: Vec<f64>,
}

impl FirstOrderData {
    /// Builds and validates the data. `λ = 0` is rejected (the even part
    /// `f₊ = λe^ξ` must never vanish), as are parity violations of ξ or `f₋`.
    pub fn new(
        grid: &Grid1D,
        xi: XiShape,
        lambda: f64,
        f_minus: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidParameter(
                "lambda must be real and nonzero".into(),
            ));
        }
        let nodes = grid.nodes();
        let (xi_t, xi_p, xi_pp) = match xi {
            XiShape::PolyEven { n, ell } => {
                if n == 0 || !ell.is_finite() || ell <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "polynomial shape needs n ≥ 1 and ℓ > 0".into(),
                    ));
                }
                let n = n as i32;
                let scale = ell.powi(-2 * n);
                let xi_t: Vec<f64> = nodes.iter().map(|&x| -scale * x.powi(2 * n)).collect();
                let xi_p: Vec<f64> = nodes
                    .iter()
                    .map(|&x| -2.0 * n as f64 * scale * x.powi(2 * n - 1))
                    .collect();
                let xi_pp: Vec<f64> = nodes
                    .iter()
                    .map(|&x| -2.0 * n as f64 * (2 * n - 1) as f64 * scale * x.powi(2 * n - 2))
                    .collect();
                (xi_t, xi_p, xi_pp)
            }
            XiShape::Custom(f) => {
                let xi_t: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
                let (xi_p, xi_pp) = difference_derivatives(&xi_t, grid.spacing());
                (xi_t, xi_p, xi_pp)
            }
        };
        validate_parity(&xi_t, false, "xi")?;
        let f_minus_t: Vec<f64> = nodes.iter().map(|&x| f_minus(x)).collect();
        validate_parity(&f_minus_t, true, "f_minus")?;
        Ok(Self {
            grid: grid.clone(),
            lambda,
            xi: xi_t,
            xi_prime: xi_p,
            xi_second: xi_pp,
            f_minus: f_minus_t,
            g_plus: vec![0.0; nodes.len()],
        })
    }

    /// Injects a nonzero even `g₊`; downstream constructions reject it, since
    /// any `g₊ ≠ 0` spoils the Hermiticity of `H₊`.
    pub fn set_g_plus(&mut self, g: impl Fn(f64) -> f64) -> Result<()> {
        let table: Vec<f64> = self.grid.nodes().iter().map(|&x| g(x)).collect();
        validate_parity(&table, false, "g_plus")?;
        self.g_plus = table;
        Ok(())
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// `f₊ = λ e^ξ` on the nodes.
    pub fn f_plus(&self) -> Vec<f64> {
        self.xi.iter().map(|&x| self.lambda * x.exp()).collect()
    }

    pub fn f_minus(&self) -> &[f64] {
        &self.f_minus
    }

    pub fn xi_prime(&self) -> &[f64] {
        &self.xi_prime
    }

    /// ξ′ ≡ 0 means `g₋ = 0` and the partner `H₋` degenerates to a Hermitian
    /// operator (no non-Hermiticity left to transfer).
    pub fn xi_is_constant(&self) -> bool {
        self.xi_prime.iter().all(|&v| v == 0.0)
    }
}

/// Second-order difference derivatives with one-sided ends.
fn difference_derivatives(values: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let n = values.len();
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for j in 0..n {
        if j == 0 {
            d1[j] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
            d2[j] = (values[0] - 2.0 * values[1] + values[2]) / (h * h);
        } else if j == n - 1 {
            d1[j] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
            d2[j] = (values[n - 1] - 2.0 * values[n - 2] + values[n - 3]) / (h * h);
        } else {
            d1[j] = (values[j + 1] - values[j - 1]) / (2.0 * h);
            d2[j] = (values[j + 1] - 2.0 * values[j] + values[j - 1]) / (h * h);
        }
    }
    (d1, d2)
}

/// The Hermitian-`H₊` constraint: requires `g₊ ≡ 0` and `λ ≠ 0`, and returns
/// the forced odd part `g₋ = −f₊′/(2f₊) = −ξ′/2` on the nodes.
pub fn hermitian_plus_condition(data: &FirstOrderData) -> Result<Vec<f64>> {
    if data.lambda == 0.0 {
        return Err(Error::InvalidParameter(
            "lambda must be real and nonzero".into(),
        ));
    }
    if data.g_plus.iter().any(|&g| g != 0.0) {
        return Err(Error::InvalidParameter(
            "a nonzero even g₊ makes H₊ non-Hermitian; the construction requires g₊ = 0".into(),
        ));
    }
    Ok(data.xi_prime.iter().map(|&xp| -0.5 * xp).collect())
}

/// General first-order grid operator `D = p + diag(f + ig)` from tables.
pub fn first_order_d_from_tables(ops: &GridOps, f: &[f64], g: &[f64]) -> Result<Op> {
    check_dim(ops.dim(), f.len())?;
    check_dim(ops.dim(), g.len())?;
    let mut m = ops.momentum.matrix().clone();
    for j in 0..ops.dim() {
        m[(j, j)] += C64::new(f[j], g[j]);
    }
    Ok(Op::from_valid(m))
}

/// The metrics of the first-order family: `η₊ = +P`, `η₋ = −P`.
pub fn parity_metrics(ops: &GridOps) -> Result<(Metric, Metric)> {
    let plus = Metric::new(ops.parity.clone())?;
    let minus = Metric::new((-&ops.parity).clone())?;
    Ok((plus, minus))
}

/// Assembles `D` and its pseudo-adjoint for validated first-order data.
///
/// `D = p + f₊ + f₋ + ig₋` and `D♯ = p − f₊ + f₋ − ig₋`; the latter agrees
/// with `η₊⁻¹D†η₋` for `η± = ±P` to machine precision.
pub fn first_order_d(data: &FirstOrderData, ops: &GridOps) -> Result<(Op, Op)> {
    check_dim(ops.dim(), data.grid.n_points())?;
    let g_minus = hermitian_plus_condition(data)?;
    let f_plus = data.f_plus();
    let n = ops.dim();
    let f: Vec<f64> = (0..n).map(|j| f_plus[j] + data.f_minus[j]).collect();
    let d = first_order_d_from_tables(ops, &f, &g_minus)?;
    let f_sharp: Vec<f64> = (0..n).map(|j| -f_plus[j] + data.f_minus[j]).collect();
    let g_sharp: Vec<f64> = g_minus.iter().map(|&g| -g).collect();
    let d_sharp = first_order_d_from_tables(ops, &f_sharp, &g_sharp)?;
    Ok((d, d_sharp))
}

/// Closed-form partner Hamiltonians of the ξ-family:
///
/// `H₊ = ½[(p+f₋)² + ¼ξ′² − ½ξ″ − λ²e^{2ξ}]`
/// `H₋ = ½[(p+f₋)² + ¼ξ′² + ½ξ″ − λ²e^{2ξ} + 2iλe^ξ ξ′]`
///
/// The kinetic part uses the three-point second difference for `p²` (plus the
/// exact `pF + Fp` cross terms), so `H₊` is exactly Hermitian and the partner
/// spectra carry physical multiplicities. The two partners differ in the sign
/// of the derivative term `½ξ″`, the usual superpartner pattern; they agree
/// with the product construction `½D♯D`, `½DD♯` in the continuum limit, which
/// is verified as a convergence check rather than a grid identity.
pub fn xi_family_hamiltonians(data: &FirstOrderData, ops: &GridOps) -> Result<(Op, Op)> {
    check_dim(ops.dim(), data.grid.n_points())?;
    hermitian_plus_condition(data)?;
    let n = ops.dim();
    // (p + f₋)² = p² + pF + Fp + F², with p² as the 3-point Laplacian.
    let fdiag = Op::from_diagonal(
        &data
            .f_minus
            .iter()
            .map(|&v| C64::new(v, 0.0))
            .collect::<Vec<_>>(),
    );
    let mut kinetic = ops.laplacian().into_matrix();
    if data.f_minus.iter().any(|&v| v != 0.0) {
        kinetic += ops.momentum.matrix() * fdiag.matrix()
            + fdiag.matrix() * ops.momentum.matrix()
            + fdiag.matrix() * fdiag.matrix();
    }
    let f_plus = data.f_plus();
    let mut hp = kinetic.clone();
    let mut hm = kinetic;
    for j in 0..n {
        let xp2 = 0.25 * data.xi_prime[j] * data.xi_prime[j];
        let xs = 0.5 * data.xi_second[j];
        let well = data.lambda * data.lambda * (2.0 * data.xi[j]).exp();
        hp[(j, j)] += C64::new(xp2 - xs - well, 0.0);
        hm[(j, j)] += C64::new(xp2 + xs - well, 2.0 * f_plus[j] * data.xi_prime[j]);
    }
    Ok((
        Op::from_valid(hp.map(|z| 0.5 * z)),
        Op::from_valid(hm.map(|z| 0.5 * z)),
    ))
}

/// Product-built pair for the same data: `H± = ½D♯D, ½DD♯` with `η± = ±P`.
pub fn xi_family_susy_pair(data: &FirstOrderData, ops: &GridOps) -> Result<SusyPair> {
    let (d, _) = first_order_d(data, ops)?;
    let (eta_plus, eta_minus) = parity_metrics(ops)?;
    build_susy_pair(d, eta_plus, eta_minus)
}

/// Lowest `count` eigenvalues in `(Re, Im)` order (eigenvalues-only solve).
pub fn low_spectrum(h: &Op, count: usize) -> Result<Vec<C64>> {
    let vals = crate::eigen::eigenvalues_only(h.matrix())?;
    Ok(vals.into_iter().take(count).collect())
}

/// Default number of trustworthy low modes on an `n`-point grid.
pub fn resolved_mode_count(n: usize) -> usize {
    (n / 4).max(1)
}

/// Kernel-detection tolerance used by [`spectral_map`] callers.
pub const KERNEL_TOL: f64 = DEFAULT_KERNEL_TOL;
