//! Uniform symmetric 1-D grids and the operators living on them.
//!
//! The grid is chosen so the parity identities are exact at matrix level:
//! nodes come in exact `±x` pairs around a center node at 0, the
//! central-difference momentum is exactly Hermitian, and `P X P = −X`,
//! `P Pmom P = −Pmom`, `P² = I` hold without tolerance. Dirichlet walls sit
//! one spacing outside the outermost nodes.

use crate::op::check_dim;
use crate::{C64, CMat, Error, Op, Result};

/// Uniform grid with an odd number of nodes, symmetric about 0.
#[derive(Debug, Clone)]
pub struct Grid1D {
    n_points: usize,
    half_width: f64,
    spacing: f64,
    nodes: Vec<f64>,
}

impl Grid1D {
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j]
    }
}

/// Builds the symmetric grid: spacing `Δ = 2L/(n+1)`, nodes `(j − (n−1)/2)·Δ`.
///
/// `n_points` must be odd (≥ 3) so a center node sits exactly at the origin
/// and parity is a pure permutation.
pub fn make_grid(n_points: usize, half_width: f64) -> Result<Grid1D> {
    if n_points < 3 || n_points.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "n_points must be odd and ≥ 3, got {n_points}"
        )));
    }
    if !half_width.is_finite() || half_width <= 0.0 {
        return Err(Error::InvalidGrid(format!(
            "half_width must be positive and finite, got {half_width}"
        )));
    }
    let spacing = 2.0 * half_width / (n_points as f64 + 1.0);
    let mid = (n_points - 1) / 2;
    let nodes = (0..n_points)
        .map(|j| (j as isize - mid as isize) as f64 * spacing)
        .collect();
    Ok(Grid1D {
        n_points,
        half_width,
        spacing,
        nodes,
    })
}

/// Position, momentum, and parity matrices on a grid (ħ = 1).
#[derive(Debug, Clone)]
pub struct GridOps {
    pub grid: Grid1D,
    /// `X = diag(x_j)`.
    pub position: Op,
    /// `Pmom = −i·(central first difference)/(2Δ)`; exactly Hermitian.
    pub momentum: Op,
    /// Parity permutation `x → −x` (the anti-identity).
    pub parity: Op,
}

pub fn build_ops(grid: &Grid1D) -> GridOps {
    let n = grid.n_points;
    let position = Op::from_diagonal(
        &grid
            .nodes
            .iter()
            .map(|&x| C64::new(x, 0.0))
            .collect::<Vec<_>>(),
    );
    let mut p = CMat::zeros(n, n);
    let coeff = 1.0 / (2.0 * grid.spacing);
    for j in 0..n {
        if j + 1 < n {
            p[(j, j + 1)] = C64::new(0.0, -coeff);
        }
        if j >= 1 {
            p[(j, j - 1)] = C64::new(0.0, coeff);
        }
    }
    let mut par = CMat::zeros(n, n);
    for j in 0..n {
        par[(j, n - 1 - j)] = C64::new(1.0, 0.0);
    }
    GridOps {
        grid: grid.clone(),
        position,
        momentum: Op::from_valid(p),
        parity: Op::from_valid(par),
    }
}

impl GridOps {
    pub fn dim(&self) -> usize {
        self.grid.n_points
    }

    /// Three-point discretization of `−d²/dx²` with Dirichlet walls.
    ///
    /// This is the kinetic stencil used for Hamiltonians assembled from a
    /// potential. (The literal square `Pmom·Pmom` couples only next-nearest
    /// neighbours, which decouples the even/odd sublattices and doubles every
    /// level; explicit operator products still use `Pmom` itself.)
    pub fn laplacian(&self) -> Op {
        let n = self.dim();
        let c = 1.0 / (self.grid.spacing * self.grid.spacing);
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            m[(j, j)] = C64::new(2.0 * c, 0.0);
            if j + 1 < n {
                m[(j, j + 1)] = C64::new(-c, 0.0);
            }
            if j >= 1 {
                m[(j, j - 1)] = C64::new(-c, 0.0);
            }
        }
        Op::from_valid(m)
    }

    /// Tabulates a function on the nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.grid.nodes.iter().map(|&x| f(x)).collect()
    }

    /// Diagonal operator from a complex-valued node table.
    pub fn diagonal(&self, values: &[C64]) -> Result<Op> {
        check_dim(self.dim(), values.len())?;
        Ok(Op::from_diagonal(values))
    }
}

/// Checks that a node table has the requested parity; returns offending nodes.
pub(crate) fn validate_parity(
    values: &[f64],
    odd: bool,
    what: &str,
) -> Result<()> {
    let n = values.len();
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut bad = Vec::new();
    for j in 0..n / 2 {
        let a = values[j];
        let b = values[n - 1 - j];
        let defect = if odd { (a + b).abs() } else { (a - b).abs() };
        if defect > 1e-12 * scale {
            bad.push(j);
            if bad.len() >= 8 {
                break;
            }
        }
    }
    if odd && values[n / 2].abs() > 1e-12 * scale {
        bad.push(n / 2);
    }
    if !bad.is_empty() {
        return Err(Error::ParityViolation {
            what: what.to_string(),
            parity: if odd { "odd" } else { "even" },
            nodes: bad,
        });
    }
    Ok(())
}

/// `H = K/(2m) + diag(V₊ + iV₋)` for an even real part and odd imaginary part
/// of the potential. The result is exactly P-pseudo-Hermitian and exactly
/// PT-symmetric at matrix level.
pub fn schrodinger_hamiltonian(
    ops: &GridOps,
    mass: f64,
    v_even: impl Fn(f64) -> f64,
    v_odd: impl Fn(f64) -> f64,
) -> Result<Op> {
    if !mass.is_finite() || mass <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mass must be positive, got {mass}"
        )));
    }
    let ve = ops.sample(&v_even);
    let vo = ops.sample(&v_odd);
    validate_parity(&ve, false, "V_even")?;
    validate_parity(&vo, true, "V_odd")?;
    let mut h = ops.laplacian().into_matrix().map(|z| z / (2.0 * mass));
    for j in 0..ops.dim() {
        h[(j, j)] += C64::new(ve[j], vo[j]);
    }
    Ok(Op::from_valid(h))
}

/// `H₁ = p² + x²p`: PT-symmetric but not P-pseudo-Hermitian.
///
/// All factors are the literal grid matrices, multiplied in the order written.
pub fn example_h1(ops: &GridOps) -> Op {
    let p = &ops.momentum;
    let x2 = &ops.position * &ops.position;
    &(p * p) + &(&x2 * p)
}

/// `H₂ = p² + i(x²p + px²)`: P-pseudo-Hermitian but not PT-symmetric.
pub fn example_h2(ops: &GridOps) -> Op {
    let p = &ops.momentum;
    let x2 = &ops.position * &ops.position;
    let sym = &(&x2 * p) + &(p * &x2);
    &(p * p) + &sym.scale(C64::new(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biorthogonal::pt_symmetry_residual;
    use crate::eigen::hermitian_eigen;
    use crate::operators::pseudo_hermiticity_residual;
    use crate::Metric;

    #[test]
    fn small_grids() {
        let g = make_grid(3, 2.0).unwrap();
        assert_eq!(g.nodes(), &[-1.0, 0.0, 1.0]);
        let g = make_grid(5, 3.0).unwrap();
        assert_eq!(g.nodes(), &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert!(make_grid(4, 2.0).is_err());
        assert!(make_grid(1, 2.0).is_err());
        assert!(make_grid(5, 0.0).is_err());
    }

    #[test]
    fn node_symmetry_is_exact() {
        let g = make_grid(401, 7.3).unwrap();
        let n = g.n_points();
        for j in 0..n {
            assert_eq!(g.node(j), -g.node(n - 1 - j));
        }
        assert_eq!(g.node(n / 2), 0.0);
    }

    #[test]
    fn grid_op_identities_exact() {
        let g = make_grid(41, 5.0).unwrap();
        let ops = build_ops(&g);
        let n = ops.dim();
        let par = &ops.parity;
        // P² = I exactly
        assert_eq!((&(par * par) - &Op::identity(n)).norm(), 0.0);
        // P X P = −X exactly
        assert_eq!((&(&(par * &ops.position) * par) + &ops.position).norm(), 0.0);
        // P p P = −p exactly
        assert_eq!((&(&(par * &ops.momentum) * par) + &ops.momentum).norm(), 0.0);
        // momentum exactly Hermitian
        assert_eq!((&ops.momentum - &ops.momentum.adjoint()).norm(), 0.0);
        // parity is the anti-identity
        for j in 0..n {
            assert_eq!(ops.parity[(j, n - 1 - j)], C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn standard_form_is_p_pseudo_hermitian_and_pt_symmetric() {
        let g = make_grid(101, 6.0).unwrap();
        let ops = build_ops(&g);
        let h = schrodinger_hamiltonian(&ops, 1.0, |x| x * x, |x| x * x * x).unwrap();
        let p_metric = Metric::new(ops.parity.clone()).unwrap();
        assert!(pseudo_hermiticity_residual(&h, &p_metric).unwrap() <= 1e-12);
        assert_eq!(pt_symmetry_residual(&h, &ops.parity).unwrap(), 0.0);
        assert!(h.hermiticity_residual() > 1e-2, "should be non-Hermitian");
    }

    #[test]
    fn parity_validation_rejects_wrong_inputs() {
        let g = make_grid(21, 4.0).unwrap();
        let ops = build_ops(&g);
        // x is odd, not even
        let err = schrodinger_hamiltonian(&ops, 1.0, |x| x, |_| 0.0);
        assert!(matches!(err, Err(Error::ParityViolation { .. })));
        // x² is even, not odd
        let err = schrodinger_hamiltonian(&ops, 1.0, |_| 0.0, |x| x * x);
        assert!(matches!(err, Err(Error::ParityViolation { .. })));
    }

    #[test]
    fn hermitian_oscillator_ground_state_converges_quadratically() {
        // m = 1, V = x²/2: lowest eigenvalue → 0.5 with O(Δ²) error.
        let mut errs = Vec::new();
        for n in [51_usize, 101, 201] {
            let g = make_grid(n, 8.0).unwrap();
            let ops = build_ops(&g);
            let h = schrodinger_hamiltonian(&ops, 1.0, |x| 0.5 * x * x, |_| 0.0).unwrap();
            assert!(h.hermiticity_residual() < 1e-14);
            let (vals, _) = hermitian_eigen(h.matrix());
            errs.push((vals[0] - 0.5).abs());
        }
        // halving Δ should shrink the error ~4×; allow a generous band
        let r1 = errs[0] / errs[1];
        let r2 = errs[1] / errs[2];
        assert!(
            (2.5..6.0).contains(&r1) && (2.5..6.0).contains(&r2),
            "convergence ratios {r1:.2}, {r2:.2} (errors {errs:?})"
        );
    }

    #[test]
    fn pt_examples_have_opposite_symmetries() {
        let g = make_grid(101, 6.0).unwrap();
        let ops = build_ops(&g);
        let p_metric = Metric::new(ops.parity.clone()).unwrap();
        let h1 = example_h1(&ops);
        let h2 = example_h2(&ops);
        assert!(pt_symmetry_residual(&h1, &ops.parity).unwrap() <= 1e-12);
        assert!(pseudo_hermiticity_residual(&h1, &p_metric).unwrap() > 0.1);
        assert!(pseudo_hermiticity_residual(&h2, &p_metric).unwrap() <= 1e-12);
        assert!(pt_symmetry_residual(&h2, &ops.parity).unwrap() > 0.1);
    }
}
