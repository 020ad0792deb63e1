//! Two-component form of the minisuperspace wave equation.
//!
//! The second-order equation in the log scale factor α reduces to a
//! Schrödinger-type system `i dΨ/dα = H(α)Ψ` for the two-component combination
//! of (ψ, dψ/dα). The generator is built from one Hermitian block
//!
//! `𝒟 = −∂²/∂φ² + m²e^{6α}φ² − κe^{4α}`
//!
//! as `H = ½[[1+𝒟, −1+𝒟], [1−𝒟, −1−𝒟]]`, which is pseudo-Hermitian with
//! respect to the Klein-Gordon metric `diag(1, −1) ⊗ I` for any Hermitian 𝒟.
//! Eigenvalues of `H` are `±√d` over the eigenvalues `d` of 𝒟, so modes cross
//! from real to imaginary pairs exactly where 𝒟 loses positivity (closed
//! universes at large enough α).

use crate::discretize::{build_ops, Grid1D};
use crate::eigen::hermitian_eigen;
use crate::{C64, CMat, Error, Metric, Op, Result};

/// Curvature sign of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    Open,
    Flat,
    Closed,
}

impl Curvature {
    pub fn from_i8(kappa: i8) -> Result<Self> {
        match kappa {
            -1 => Ok(Curvature::Open),
            0 => Ok(Curvature::Flat),
            1 => Ok(Curvature::Closed),
            other => Err(Error::InvalidParameter(format!(
                "curvature must be −1, 0 or 1, got {other}"
            ))),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Curvature::Open => -1.0,
            Curvature::Flat => 0.0,
            Curvature::Closed => 1.0,
        }
    }
}

/// Model parameters plus the φ-grid (ħ = 1, mass dimensionless).
#[derive(Debug, Clone)]
pub struct WdwModel {
    pub curvature: Curvature,
    pub mass: f64,
    pub alpha: f64,
    pub phi_grid: Grid1D,
}

impl WdwModel {
    pub fn new(curvature: Curvature, mass: f64, alpha: f64, phi_grid: Grid1D) -> Result<Self> {
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive, got {mass}"
            )));
        }
        Ok(Self {
            curvature,
            mass,
            alpha,
            phi_grid,
        })
    }

    /// Effective oscillator frequency `ω = m·e^{3α}`.
    pub fn omega(&self) -> f64 {
        self.mass * (3.0 * self.alpha).exp()
    }

    /// Same model at a different α (the evolution parameter).
    pub fn at_alpha(&self, alpha: f64) -> Self {
        Self {
            alpha,
            ..self.clone()
        }
    }
}

/// Grid half-width that resolves the low modes across α sweeps:
/// `max(6, 6/√ω)` oscillator lengths, with oscillator length `1/√ω`.
pub fn suggested_half_width(mass: f64, alpha: f64) -> f64 {
    let omega = mass * (3.0 * alpha).exp();
    let osc_len = 1.0 / omega.sqrt();
    6.0_f64.max(6.0 / omega.sqrt()) * osc_len
}

/// The Hermitian block `𝒟` on the φ-grid.
pub fn d_operator(model: &WdwModel) -> Op {
    let ops = build_ops(&model.phi_grid);
    let m2e6 = model.mass * model.mass * (6.0 * model.alpha).exp();
    let kap_e4 = model.curvature.as_f64() * (4.0 * model.alpha).exp();
    let mut d = ops.laplacian().into_matrix();
    for (j, &phi) in model.phi_grid.nodes().iter().enumerate() {
        d[(j, j)] += C64::new(m2e6 * phi * phi - kap_e4, 0.0);
    }
    Op::from_valid(d)
}

/// Two-component generator `H = ½[[1+𝒟, −1+𝒟], [1−𝒟, −1−𝒟]]` (2N×2N, traceless).
pub fn hamiltonian(d: &Op) -> Op {
    let n = d.dim();
    let dm = d.matrix();
    let mut h = CMat::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            let dij = dm[(i, j)];
            let delta = if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            };
            h[(i, j)] = 0.5 * (delta + dij);
            h[(i, j + n)] = 0.5 * (dij - delta);
            h[(i + n, j)] = 0.5 * (delta - dij);
            h[(i + n, j + n)] = 0.5 * (-delta - dij);
        }
    }
    Op::from_valid(h)
}

/// Klein-Gordon metric `diag(1, −1) ⊗ I_n` on the two-component space.
pub fn metric(n: usize) -> Metric {
    let mut signs = vec![1_i8; n];
    signs.extend(std::iter::repeat_n(-1, n));
    Metric::from_signature(&signs).expect("±1 signature")
}

/// Spectrum of the two-component generator, computed through the Hermitian
/// block: each eigenvalue `d` of 𝒟 contributes the pair `±√d` (imaginary when
/// `d < 0`). A `d ≈ 0` mode makes the 2×2 block a Jordan cell; those are
/// reported as boundary modes rather than eigenpairs of a diagonalizable H.
#[derive(Debug, Clone)]
pub struct WdwSpectrum {
    /// Eigenvalues of 𝒟, ascending.
    pub d_eigenvalues: Vec<f64>,
    /// Eigenvalues of H: `(+√d, −√d)` per mode, in 𝒟 order.
    pub eigenvalues: Vec<C64>,
    /// Indices (into `d_eigenvalues`) with `d ≈ 0`: non-diagonalizable blocks.
    pub boundary_modes: Vec<usize>,
}

pub fn spectrum(model: &WdwModel) -> WdwSpectrum {
    let d = d_operator(model);
    let (d_eigenvalues, _) = hermitian_eigen(d.matrix());
    spectrum_from_d_eigenvalues(d_eigenvalues)
}

pub(crate) fn spectrum_from_d_eigenvalues(d_eigenvalues: Vec<f64>) -> WdwSpectrum {
    let scale = d_eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let boundary_tol = 1e-10 * scale.max(1.0);
    let mut eigenvalues = Vec::with_capacity(2 * d_eigenvalues.len());
    let mut boundary_modes = Vec::new();
    for (k, &d) in d_eigenvalues.iter().enumerate() {
        if d.abs() <= boundary_tol {
            boundary_modes.push(k);
            eigenvalues.push(C64::new(0.0, 0.0));
            eigenvalues.push(C64::new(0.0, 0.0));
        } else if d > 0.0 {
            let r = d.sqrt();
            eigenvalues.push(C64::new(r, 0.0));
            eigenvalues.push(C64::new(-r, 0.0));
        } else {
            let r = (-d).sqrt();
            eigenvalues.push(C64::new(0.0, r));
            eigenvalues.push(C64::new(0.0, -r));
        }
    }
    WdwSpectrum {
        d_eigenvalues,
        eigenvalues,
        boundary_modes,
    }
}

/// For a closed universe, the α beyond which mode `n` turns into an imaginary
/// pair: `α* = ln(m(2n+1))`, from `ω(2n+1) = e^{4α}`.
pub fn reality_boundary(model: &WdwModel, n: usize) -> Result<f64> {
    if model.curvature != Curvature::Closed {
        return Err(Error::InvalidParameter(
            "reality boundary exists only for the closed model (κ = +1)".into(),
        ));
    }
    Ok((model.mass * (2 * n + 1) as f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biorthogonal::{classify_spectrum, eig_biorthonormal, Classification};
    use crate::discretize::make_grid;
    use crate::eigen::general_eigen;
    use crate::operators::pseudo_hermiticity_residual;

    fn model(kappa: i8, mass: f64, alpha: f64, n: usize, l: f64) -> WdwModel {
        WdwModel::new(
            Curvature::from_i8(kappa).unwrap(),
            mass,
            alpha,
            make_grid(n, l).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn flat_model_oscillator_levels() {
        // κ = 0, m = 1, α = 0: 𝒟 is the unit oscillator, levels ≈ 1, 3, 5.
        let m = model(0, 1.0, 0.0, 301, 10.0);
        let d = d_operator(&m);
        assert!(d.hermiticity_residual() < 1e-14);
        let (vals, _) = hermitian_eigen(d.matrix());
        for (k, expect) in [1.0, 3.0, 5.0].iter().enumerate() {
            assert!(
                (vals[k] - expect).abs() < 1e-2,
                "level {k}: {} vs {expect}",
                vals[k]
            );
        }
    }

    #[test]
    fn closed_model_shifts_down_open_shifts_up() {
        let mc = model(1, 1.0, 0.0, 301, 10.0);
        let (vals, _) = hermitian_eigen(d_operator(&mc).matrix());
        for (k, expect) in [0.0, 2.0, 4.0].iter().enumerate() {
            assert!((vals[k] - expect).abs() < 1e-2);
        }
        let mo = model(-1, 1.0, 0.0, 301, 10.0);
        let (vals, _) = hermitian_eigen(d_operator(&mo).matrix());
        assert!(vals[0] > 1.9, "open model spectrum strictly positive");
    }

    #[test]
    fn block_hamiltonian_small_cases() {
        // scalar D = [d]: eigenvalues ±√d
        let d = Op::from_diagonal(&[C64::new(4.0, 0.0)]);
        let h = hamiltonian(&d);
        let (vals, _) = general_eigen(h.matrix()).unwrap();
        let mut re: Vec<f64> = vals.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] + 2.0).abs() < 1e-12 && (re[1] - 2.0).abs() < 1e-12);

        // D = 0: nilpotent block, double zero eigenvalue
        let d = Op::zeros(1);
        let h = hamiltonian(&d);
        assert!(h.norm() > 0.9); // not the zero matrix
        let e = general_eigen(h.matrix()).unwrap().0;
        assert!(e.iter().all(|z| z.norm() < 1e-10));

        // D = diag(1, 4): eigenvalues ±1, ±2; traceless
        let d = Op::from_diagonal(&[C64::new(1.0, 0.0), C64::new(4.0, 0.0)]);
        let h = hamiltonian(&d);
        let tr: C64 = (0..4).map(|i| h[(i, i)]).sum();
        assert!(tr.norm() < 1e-14);
        let mut vals: Vec<f64> = general_eigen(h.matrix())
            .unwrap()
            .0
            .iter()
            .map(|z| z.re)
            .collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [-2.0, -1.0, 1.0, 2.0];
        for (v, e) in vals.iter().zip(expect.iter()) {
            assert!((v - e).abs() < 1e-10);
        }
    }

    #[test]
    fn kg_metric_and_residual() {
        let eta = metric(1);
        assert_eq!(eta.op().matrix()[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(eta.op().matrix()[(1, 1)], C64::new(-1.0, 0.0));

        let m = model(0, 1.0, 0.0, 61, 8.0);
        let h = hamiltonian(&d_operator(&m));
        let eta = metric(61);
        assert_eq!(eta.op().hermiticity_residual(), 0.0);
        assert!(pseudo_hermiticity_residual(&h, &eta).unwrap() <= 1e-12);
    }

    #[test]
    fn spectrum_matches_direct_diagonalization() {
        // ±√d structure against the dense complex solver, mixed-sign d.
        let m = model(1, 1.0, 0.5, 61, suggested_half_width(1.0, 0.5));
        let h = hamiltonian(&d_operator(&m));
        let spec = spectrum(&m);
        let (direct, _) = general_eigen(h.matrix()).unwrap();
        let scale = spec
            .eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        for z in &spec.eigenvalues {
            let nearest = direct
                .iter()
                .map(|w| (z - w).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(
                nearest <= 1e-8 * scale,
                "predicted eigenvalue {z} missing from direct spectrum (dist {nearest:.3e})"
            );
        }
    }

    #[test]
    fn flat_and_open_spectra_are_real() {
        for kappa in [-1, 0] {
            let m = model(kappa, 1.0, 0.3, 101, suggested_half_width(1.0, 0.3));
            let spec = spectrum(&m);
            assert!(spec.boundary_modes.is_empty());
            let max_im = spec
                .eigenvalues
                .iter()
                .map(|z| z.im.abs())
                .fold(0.0, f64::max);
            let scale = spec
                .eigenvalues
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(max_im <= 1e-8 * scale, "κ={kappa}: max|Im| = {max_im}");
        }
    }

    #[test]
    fn closed_model_goes_imaginary_past_the_boundary() {
        let mass = 1.0;
        let m0 = model(1, mass, 0.0, 101, suggested_half_width(mass, 0.0));
        // α* for the lowest modes
        assert_eq!(reality_boundary(&m0, 0).unwrap(), 0.0);
        assert!((reality_boundary(&m0, 1).unwrap() - 3.0_f64.ln()).abs() < 1e-15);
        assert!(reality_boundary(&model(0, 1.0, 0.0, 61, 8.0), 0).is_err());

        // past α*(0) but before α*(1): exactly one imaginary pair
        let alpha = 0.5;
        assert!(alpha > 0.0 && alpha < 3.0_f64.ln());
        let m = model(1, mass, alpha, 201, suggested_half_width(mass, alpha));
        let spec = spectrum(&m);
        let imag_pairs = spec
            .eigenvalues
            .iter()
            .filter(|z| z.im > 1e-8 && z.re.abs() < 1e-8)
            .count();
        assert_eq!(imag_pairs, 1, "one mode past its reality boundary");
    }

    #[test]
    fn classification_never_fails_on_wdw_generators() {
        for (kappa, alpha) in [(-1, 0.2), (0, 0.0), (1, 0.5)] {
            let m = model(kappa, 1.0, alpha, 31, suggested_half_width(1.0, alpha));
            let h = hamiltonian(&d_operator(&m));
            let sys = eig_biorthonormal(&h, 1e-8 * h.norm().max(1.0)).unwrap();
            let cls = classify_spectrum(&sys, 1e-8);
            assert_ne!(cls.classification, Classification::NotPseudoHermitian);
        }
    }

    #[test]
    fn boundary_case_is_reported_not_classified() {
        // α = α*(0) = 0 for m = 1: lowest 𝒟 eigenvalue crosses zero. The grid
        // value is close to but not exactly zero, so force the exact case.
        let spec = spectrum_from_d_eigenvalues(vec![0.0, 2.0]);
        assert_eq!(spec.boundary_modes, vec![0]);
    }
}
