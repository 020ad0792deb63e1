//! Biorthonormal eigensystems, spectrum classification, and metric construction.
//!
//! For a diagonalizable `H` with right eigenvector matrix `Ψ`, the left system
//! is taken as `Φ = (Ψ⁻¹)†`, which enforces `⟨φ_m|ψ_n⟩ = δ_mn` by construction
//! and pushes all conditioning into a single matrix inversion. A spectrum that
//! splits into real eigenvalues plus conjugate pairs (with matching
//! multiplicities) certifies pseudo-Hermiticity; the certifying metric is
//! assembled explicitly from the left vectors:
//!
//! `η = Σ_{real} |φ⟩⟨φ|  +  Σ_{pairs} (|φ₋⟩⟨φ₊| + |φ₊⟩⟨φ₋|)`
//!
//! and its inverse from the right vectors with `ψ` in place of `φ`.

use crate::eigen::general_eigen;
use crate::op::check_dim;
use crate::{C64, CMat, CVec, Error, Metric, Op, Result, DEFAULT_DEFECTIVE_COND};

/// Paired right/left eigenvector system with degeneracy clustering.
#[derive(Debug, Clone)]
pub struct BiSystem {
    /// Eigenvalue per column, sorted by `(Re, Im)`.
    pub eigenvalues: Vec<C64>,
    /// Columns are the right eigenvectors `|ψ_k⟩` (unit Euclidean norm before
    /// any gauge alignment).
    pub right: Op,
    /// Columns are the left eigenvectors `|φ_k⟩`, i.e. `Φ = (Ψ⁻¹)†`.
    pub left: Op,
    /// Numerically degenerate eigenvalue groups.
    pub clusters: Vec<Cluster>,
    /// `‖Ψ·Φ† − I‖` — quality of the resolution of the identity.
    pub completeness_residual: f64,
    /// `‖Ψ‖·‖Ψ⁻¹‖ / dim`; large values flag near-defective input.
    pub condition_estimate: f64,
}

/// One numerically degenerate eigenvalue, with the columns it owns.
#[derive(Debug, Clone)]
pub struct Cluster {
    /// Cluster representative (mean of member eigenvalues).
    pub value: C64,
    /// Column indices, in ascending order.
    pub members: Vec<usize>,
}

impl Cluster {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

impl BiSystem {
    pub fn dim(&self) -> usize {
        self.right.dim()
    }

    /// Spectral radius of the decomposed operator.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn right_vector(&self, k: usize) -> CVec {
        self.right.matrix().column(k).clone_owned()
    }

    pub fn left_vector(&self, k: usize) -> CVec {
        self.left.matrix().column(k).clone_owned()
    }
}

/// Default clustering tolerance for a computed spectrum.
pub fn default_cluster_tol(eigenvalues: &[C64]) -> f64 {
    let rho = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    crate::DEFAULT_CLUSTER_FACTOR * rho.max(1.0)
}

/// Eigenvalues of a general operator, sorted by `(Re, Im)`, without the cost
/// of building the biorthonormal system.
pub fn eigenvalues(h: &Op) -> Result<Vec<C64>> {
    crate::eigen::eigenvalues_only(h.matrix())
}

/// Dense biorthonormal eigendecomposition.
///
/// Fails with [`Error::DefectiveMatrix`] when the eigenvector matrix is too
/// ill-conditioned to define a biorthonormal partner system; there is no exact
/// algorithmic test for defectiveness in floating point, so conditioning is
/// the operative proxy.
pub fn eig_biorthonormal(h: &Op, cluster_tol: f64) -> Result<BiSystem> {
    eig_biorthonormal_with(h, cluster_tol, DEFAULT_DEFECTIVE_COND)
}

pub fn eig_biorthonormal_with(h: &Op, cluster_tol: f64, cond_threshold: f64) -> Result<BiSystem> {
    let n = h.dim();
    let (eigenvalues, psi) = general_eigen(h.matrix())?;
    let psi_inv = match psi.clone().try_inverse() {
        Some(inv) => inv,
        None => {
            return Err(Error::DefectiveMatrix { cond: f64::INFINITY });
        }
    };
    let condition_estimate = psi.norm() * psi_inv.norm() / n.max(1) as f64;
    if !condition_estimate.is_finite() || condition_estimate > cond_threshold {
        return Err(Error::DefectiveMatrix {
            cond: condition_estimate,
        });
    }
    let completeness_residual = (&psi * &psi_inv - CMat::identity(n, n)).norm();
    let phi = psi_inv.adjoint();
    let clusters = cluster_eigenvalues(&eigenvalues, cluster_tol);
    Ok(BiSystem {
        eigenvalues,
        right: Op::from_valid(psi),
        left: Op::from_valid(phi),
        clusters,
        completeness_residual,
        condition_estimate,
    })
}

/// Union-find clustering of eigenvalues at the given absolute tolerance.
fn cluster_eigenvalues(values: &[C64], tol: f64) -> Vec<Cluster> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = i;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups
        .into_values()
        .map(|members| {
            let sum: C64 = members.iter().map(|&k| values[k]).sum();
            Cluster {
                value: sum / C64::new(members.len() as f64, 0.0),
                members,
            }
        })
        .collect()
}

/// Outcome of sorting a spectrum into real and conjugate-paired parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    AllReal,
    ConjugatePaired,
    Mixed,
    NotPseudoHermitian,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::AllReal => "AllReal",
            Classification::ConjugatePaired => "ConjugatePaired",
            Classification::Mixed => "Mixed",
            Classification::NotPseudoHermitian => "NotPseudoHermitian",
        };
        f.write_str(s)
    }
}

/// Partition of the clusters of a [`BiSystem`] into real ones and matched
/// conjugate pairs. A nonempty `unpaired` set is the failure verdict; it is a
/// value, not an error.
#[derive(Debug, Clone)]
pub struct SpectrumClass {
    /// Cluster indices with (numerically) real eigenvalue.
    pub real_clusters: Vec<usize>,
    /// `(plus, minus)` cluster index pairs with conjugate eigenvalues and equal
    /// multiplicities; `plus` has positive imaginary part.
    pub pairs: Vec<(usize, usize)>,
    /// Complex clusters with no admissible conjugate partner.
    pub unpaired: Vec<usize>,
    pub classification: Classification,
}

impl SpectrumClass {
    pub fn is_pseudo_hermitian(&self) -> bool {
        self.classification != Classification::NotPseudoHermitian
    }
}

/// Classifies eigenvalue clusters: real when `|Im E| ≤ pair_tol·(1+|E|)`,
/// otherwise matched greedily to the nearest conjugate candidate of equal
/// multiplicity (ties broken by index order).
pub fn classify_spectrum(sys: &BiSystem, pair_tol: f64) -> SpectrumClass {
    let mut real_clusters = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (ci, cl) in sys.clusters.iter().enumerate() {
        let e = cl.value;
        if e.im.abs() <= pair_tol * (1.0 + e.norm()) {
            real_clusters.push(ci);
        } else if e.im > 0.0 {
            plus.push(ci);
        } else {
            minus.push(ci);
        }
    }
    let mut pairs = Vec::new();
    let mut unpaired = Vec::new();
    let mut minus_used = vec![false; minus.len()];
    for &p in &plus {
        let ep = sys.clusters[p].value;
        let mp = sys.clusters[p].multiplicity();
        let mut best: Option<(usize, f64)> = None;
        for (mi, &m) in minus.iter().enumerate() {
            if minus_used[mi] || sys.clusters[m].multiplicity() != mp {
                continue;
            }
            let d = (ep - sys.clusters[m].value.conj()).norm();
            if d <= pair_tol * (1.0 + ep.norm()) && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((mi, d));
            }
        }
        match best {
            Some((mi, _)) => {
                minus_used[mi] = true;
                pairs.push((p, minus[mi]));
            }
            None => unpaired.push(p),
        }
    }
    for (mi, &m) in minus.iter().enumerate() {
        if !minus_used[mi] {
            unpaired.push(m);
        }
    }
    unpaired.sort_unstable();
    let classification = if !unpaired.is_empty() {
        Classification::NotPseudoHermitian
    } else if pairs.is_empty() {
        Classification::AllReal
    } else if real_clusters.is_empty() {
        Classification::ConjugatePaired
    } else {
        Classification::Mixed
    };
    SpectrumClass {
        real_clusters,
        pairs,
        unpaired,
        classification,
    }
}

fn outer_into(acc: &mut CMat, a: &CVec, b: &CVec) {
    let n = a.len();
    for j in 0..n {
        let bj = b[j].conj();
        for i in 0..n {
            acc[(i, j)] += a[i] * bj;
        }
    }
}

/// Explicit metric from the left eigenvectors. The result is Hermitian by
/// symmetrization, invertible because the left system spans, and satisfies
/// `ηH = H†η` for the decomposed `H`.
pub fn construct_eta(sys: &BiSystem, cls: &SpectrumClass) -> Result<Metric> {
    let m = assemble_from_vectors(sys, cls, false)?;
    let sym = Op::from_valid((&m + m.adjoint()).map(|z| 0.5 * z));
    Metric::with_tol(sym, 1e-8)
}

/// Mirror of [`construct_eta`] built from the right eigenvectors; the product
/// with the constructed metric is the identity up to conditioning.
pub fn construct_eta_inverse(sys: &BiSystem, cls: &SpectrumClass) -> Result<Op> {
    let m = assemble_from_vectors(sys, cls, true)?;
    Ok(Op::from_valid((&m + m.adjoint()).map(|z| 0.5 * z)))
}

fn assemble_from_vectors(sys: &BiSystem, cls: &SpectrumClass, use_right: bool) -> Result<CMat> {
    if !cls.is_pseudo_hermitian() {
        return Err(Error::UnpairedSpectrum);
    }
    let n = sys.dim();
    let pick = |k: usize| -> CVec {
        if use_right {
            sys.right_vector(k)
        } else {
            sys.left_vector(k)
        }
    };
    let mut acc = CMat::zeros(n, n);
    for &ci in &cls.real_clusters {
        for &k in &sys.clusters[ci].members {
            let v = pick(k);
            outer_into(&mut acc, &v, &v);
        }
    }
    for &(p, m) in &cls.pairs {
        let pm = &sys.clusters[p].members;
        let mm = &sys.clusters[m].members;
        debug_assert_eq!(pm.len(), mm.len());
        for (&kp, &km) in pm.iter().zip(mm.iter()) {
            let vp = pick(kp);
            let vm = pick(km);
            outer_into(&mut acc, &vm, &vp);
            outer_into(&mut acc, &vp, &vm);
        }
    }
    Ok(acc)
}

/// Assembles `H = Σ E_k |ψ_k⟩⟨φ_k|` from a prescribed spectrum and a basis of
/// right eigenvectors (`Φ† = basis⁻¹`). The eigenvalues of the result
/// reproduce the prescription up to the basis conditioning.
pub fn synthesize_hamiltonian(spectrum: &[C64], basis: &Op) -> Result<Op> {
    check_dim(basis.dim(), spectrum.len())?;
    let inv = basis.try_inverse().ok_or(Error::SingularBasis)?;
    let n = basis.dim();
    let mut scaled = basis.matrix().clone();
    for k in 0..n {
        let e = spectrum[k];
        for i in 0..n {
            scaled[(i, k)] *= e;
        }
    }
    Ok(Op::from_valid(scaled * inv.matrix()))
}

/// Per-cluster gauge data: the Hermitian `c`-blocks of the real clusters, the
/// cross blocks of the conjugate pairs, and the diagonal rescalings applied to
/// bring both to the identity (up to signs on the real blocks).
#[derive(Debug, Clone)]
pub struct GaugeAlignment {
    /// `c^(n₀)` blocks as found, one per entry of `SpectrumClass::real_clusters`.
    pub c_real: Vec<CMat>,
    /// Cross blocks `⟨φ₋|η⁻¹|φ₊⟩` as found, one per entry of `SpectrumClass::pairs`.
    pub c_pair: Vec<CMat>,
    /// Rescale factor applied to each left column (right columns get the inverse).
    pub rescale_factors: Vec<f64>,
    /// Sign per real-cluster basis vector, in cluster order. A `−1` cannot be
    /// removed by rescaling; the η-Gram matrix carries it.
    pub signs: Vec<i8>,
}

/// Rotates and rescales the eigenbasis so the metric's `c`-blocks become the
/// identity (real blocks: up to recorded signs). The returned system keeps
/// biorthonormality exactly and satisfies `φ = ±η ψ` columnwise.
pub fn align_gauge(
    sys: &BiSystem,
    cls: &SpectrumClass,
    eta: &Metric,
) -> Result<(BiSystem, GaugeAlignment)> {
    check_dim(sys.dim(), eta.dim())?;
    if !cls.is_pseudo_hermitian() {
        return Err(Error::UnpairedSpectrum);
    }
    let n = sys.dim();
    let mut psi = sys.right.matrix().clone();
    let mut phi = sys.left.matrix().clone();
    let eta_inv = eta.inverse().matrix();

    let block = |phi: &CMat, rows: &[usize], cols: &[usize]| -> CMat {
        // c_ab = ⟨φ_row(a)| η⁻¹ |φ_col(b)⟩
        CMat::from_fn(rows.len(), cols.len(), |a, b| {
            let fa = phi.column(rows[a]);
            let fb = phi.column(cols[b]);
            (eta_inv * fb).dotc(&fa).conj()
        })
    };

    let mut c_real = Vec::new();
    let mut c_pair = Vec::new();
    let mut rescale_factors = vec![1.0_f64; n];
    let mut signs = Vec::new();

    // Apply a (unitary) column transform T to cluster `members` of both bases:
    // Ψ_C → Ψ_C T, Φ_C → Φ_C T keeps Φ†Ψ = I.
    let apply = |mat: &mut CMat, members: &[usize], t: &CMat| {
        let d = members.len();
        let mut sub = CMat::zeros(mat.nrows(), d);
        for (j, &k) in members.iter().enumerate() {
            sub.set_column(j, &mat.column(k));
        }
        let rotated = &sub * t;
        for (j, &k) in members.iter().enumerate() {
            mat.set_column(k, &rotated.column(j));
        }
    };

    for (bi, &ci) in cls.real_clusters.iter().enumerate() {
        let members = sys.clusters[ci].members.clone();
        let c = block(&phi, &members, &members);
        c_real.push(c.clone());
        // Hermitian diagonalization of the block.
        let se = c.symmetric_eigen();
        let u = se.eigenvectors.clone();
        apply(&mut psi, &members, &u);
        apply(&mut phi, &members, &u);
        let scale = se.eigenvalues.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
        for (j, &k) in members.iter().enumerate() {
            let lam = se.eigenvalues[j];
            if lam.abs() <= 1e-12 * scale.max(1.0) {
                return Err(Error::SingularGaugeBlock { block: bi });
            }
            signs.push(if lam >= 0.0 { 1 } else { -1 });
            let w = 1.0 / lam.abs().sqrt();
            rescale_factors[k] = w;
            scale_column(&mut phi, k, w);
            scale_column(&mut psi, k, 1.0 / w);
        }
    }

    for (bi, &(p, m)) in cls.pairs.iter().enumerate() {
        let pm = sys.clusters[p].members.clone();
        let mm = sys.clusters[m].members.clone();
        // c^(+)_{αβ} = ⟨φ₋,α| η⁻¹ |φ₊,β⟩
        let c = block(&phi, &mm, &pm);
        c_pair.push(c.clone());
        let svd = c.svd(true, true);
        let w = svd.u.as_ref().expect("svd with u").clone();
        let vt = svd.v_t.as_ref().expect("svd with v_t");
        let v = vt.adjoint();
        apply(&mut phi, &mm, &w);
        apply(&mut psi, &mm, &w);
        apply(&mut phi, &pm, &v);
        apply(&mut psi, &pm, &v);
        let smax = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
        for j in 0..pm.len() {
            let s = svd.singular_values[j];
            if s <= 1e-12 * smax.max(1.0) {
                return Err(Error::SingularGaugeBlock { block: bi });
            }
            let wfac = 1.0 / s.sqrt();
            for &k in [mm[j], pm[j]].iter() {
                rescale_factors[k] = wfac;
                scale_column(&mut phi, k, wfac);
                scale_column(&mut psi, k, 1.0 / wfac);
            }
        }
    }

    let completeness_residual = {
        let prod = &psi * phi.adjoint();
        (&prod - CMat::identity(n, n)).norm()
    };
    let aligned = BiSystem {
        eigenvalues: sys.eigenvalues.clone(),
        right: Op::from_valid(psi),
        left: Op::from_valid(phi),
        clusters: sys.clusters.clone(),
        completeness_residual,
        condition_estimate: sys.condition_estimate,
    };
    Ok((
        aligned,
        GaugeAlignment {
            c_real,
            c_pair,
            rescale_factors,
            signs,
        },
    ))
}

fn scale_column(mat: &mut CMat, k: usize, w: f64) {
    for i in 0..mat.nrows() {
        mat[(i, k)] *= C64::new(w, 0.0);
    }
}

/// `‖P H* P − H‖ / ‖H‖` with entrywise conjugation as time reversal; zero
/// exactly when `H` is PT-symmetric in the represented basis.
pub fn pt_symmetry_residual(h: &Op, parity: &Op) -> Result<f64> {
    check_dim(h.dim(), parity.dim())?;
    let n = parity.dim();
    let invol = (parity.matrix() * parity.matrix() - CMat::identity(n, n)).norm();
    if invol > 1e-12 * (n as f64).sqrt().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "parity operator is not an involution (‖P²−I‖ = {invol:.3e})"
        )));
    }
    let hn = h.norm();
    if hn == 0.0 {
        return Ok(0.0);
    }
    let transformed = parity.matrix() * h.matrix().map(|z| z.conj()) * parity.matrix();
    Ok((transformed - h.matrix()).norm() / hn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{
        pseudo_hermiticity_residual, random_ginibre, random_metric, random_pseudo_hermitian,
    };
    use crate::StateVec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_real_system() {
        let h = Op::from_diagonal(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let sys = eig_biorthonormal(&h, 1e-8).unwrap();
        assert_eq!(sys.clusters.len(), 3);
        assert!(sys.completeness_residual < 1e-13);
        // standard basis up to phase
        for k in 0..3 {
            let v = sys.right_vector(k);
            let mut mags: Vec<f64> = v.iter().map(|z| z.norm()).collect();
            mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert!((mags[0] - 1.0).abs() < 1e-13 && mags[1] < 1e-13);
        }
        let cls = classify_spectrum(&sys, 1e-8);
        assert_eq!(cls.classification, Classification::AllReal);
    }

    #[test]
    fn jordan_block_is_defective() {
        let h = Op::new(CMat::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ))
        .unwrap();
        assert!(matches!(
            eig_biorthonormal(&h, 1e-8),
            Err(Error::DefectiveMatrix { .. })
        ));
    }

    #[test]
    fn random_pseudo_hermitian_instance_is_complete() {
        let eta = random_metric(8, 5, true).unwrap();
        let h = random_pseudo_hermitian(&eta, 8, 55).unwrap();
        let sys = eig_biorthonormal(&h, default_cluster_tol(&[c(1.0, 0.0)])).unwrap();
        assert!(
            sys.completeness_residual <= 1e-10,
            "completeness {}",
            sys.completeness_residual
        );
    }

    #[test]
    fn conjugate_pair_classification() {
        let h = Op::from_diagonal(&[c(3.0, 4.0), c(3.0, -4.0)]);
        let sys = eig_biorthonormal(&h, 1e-8).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        assert_eq!(cls.classification, Classification::ConjugatePaired);
        assert_eq!(cls.pairs.len(), 1);
        let (p, m) = cls.pairs[0];
        assert!(sys.clusters[p].value.im > 0.0 && sys.clusters[m].value.im < 0.0);
    }

    #[test]
    fn lone_complex_eigenvalue_fails_classification() {
        let h = Op::from_diagonal(&[c(0.0, 1.0), c(2.0, 0.0)]);
        let sys = eig_biorthonormal(&h, 1e-8).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        assert_eq!(cls.classification, Classification::NotPseudoHermitian);
        assert_eq!(cls.unpaired.len(), 1);
    }

    #[test]
    fn multiplicity_mismatch_is_not_paired() {
        // E and E* present, but with multiplicities 2 vs 1.
        let h = Op::from_diagonal(&[c(1.0, 1.0), c(1.0, 1.0), c(1.0, -1.0)]);
        let sys = eig_biorthonormal(&h, 1e-8).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        assert_eq!(cls.classification, Classification::NotPseudoHermitian);
    }

    #[test]
    fn hermitian_h_gives_identity_metric() {
        // Hermitian H with orthonormal eigenbasis: η reduces to the identity.
        let u = crate::operators::random_unitary(4, 9);
        let d = Op::from_diagonal(&[c(0.5, 0.0), c(1.5, 0.0), c(-0.7, 0.0), c(2.0, 0.0)]);
        let h = Op::from_valid(u.matrix() * d.matrix() * u.matrix().adjoint());
        let sys = eig_biorthonormal(&h, 1e-8).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        assert_eq!(cls.classification, Classification::AllReal);
        let eta = construct_eta(&sys, &cls).unwrap();
        assert!((eta.op() - &Op::identity(4)).norm() < 1e-12);
        let inv = construct_eta_inverse(&sys, &cls).unwrap();
        assert!((&inv - &Op::identity(4)).norm() < 1e-12);
    }

    #[test]
    fn imaginary_pair_gives_swap_metric() {
        let h = Op::from_diagonal(&[c(0.0, 1.0), c(0.0, -1.0)]);
        let sys = eig_biorthonormal(&h, 1e-8).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        let eta = construct_eta(&sys, &cls).unwrap();
        let swap = Op::new(CMat::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        assert!((eta.op() - &swap).norm() < 1e-12);
        // self-inverse in this case
        let inv = construct_eta_inverse(&sys, &cls).unwrap();
        assert!((&inv - &swap).norm() < 1e-12);
        assert!(pseudo_hermiticity_residual(&h, &eta).unwrap() < 1e-14);
    }

    #[test]
    fn synthesized_spectrum_round_trip() {
        let spectrum = [c(1.0, 0.0), c(3.0, 4.0), c(3.0, -4.0)];
        let basis = Op::new(random_ginibre(3, 77)).unwrap();
        let h = synthesize_hamiltonian(&spectrum, &basis).unwrap();
        let sys = eig_biorthonormal(&h, 1e-6).unwrap();
        let mut got: Vec<C64> = sys.eigenvalues.clone();
        let mut want = spectrum.to_vec();
        let key = |z: &C64| (z.re, z.im);
        got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-8, "{g} vs {w}");
        }
    }

    #[test]
    fn synthesize_identity_basis_is_diagonal() {
        let h = synthesize_hamiltonian(&[c(1.0, 0.0), c(2.0, 0.0)], &Op::identity(2)).unwrap();
        assert!((&h - &Op::from_diagonal(&[c(1.0, 0.0), c(2.0, 0.0)])).norm() < 1e-15);
        let h = synthesize_hamiltonian(&[c(0.0, 1.0), c(0.0, -1.0)], &Op::identity(2)).unwrap();
        assert!((&h - &Op::from_diagonal(&[c(0.0, 1.0), c(0.0, -1.0)])).norm() < 1e-15);
    }

    #[test]
    fn synthesize_rejects_singular_basis() {
        let basis = Op::from_diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            synthesize_hamiltonian(&[c(1.0, 0.0), c(2.0, 0.0)], &basis),
            Err(Error::SingularBasis)
        ));
    }

    #[test]
    fn construct_eta_certifies_prescribed_spectrum() {
        let spectrum = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 4.0), c(3.0, -4.0)];
        let basis = Op::new(random_ginibre(4, 1234)).unwrap();
        let h = synthesize_hamiltonian(&spectrum, &basis).unwrap();
        let sys = eig_biorthonormal(&h, default_cluster_tol(&sys_eigs(&h))).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        assert_eq!(cls.classification, Classification::Mixed);
        let eta = construct_eta(&sys, &cls).unwrap();
        assert!(pseudo_hermiticity_residual(&h, &eta).unwrap() <= 1e-10);
        assert!(eta.op().hermiticity_residual() <= 1e-12);
        let inv = construct_eta_inverse(&sys, &cls).unwrap();
        let prod = eta.op() * &inv;
        assert!((&prod - &Op::identity(4)).norm() <= 1e-10);
    }

    fn sys_eigs(h: &Op) -> Vec<C64> {
        eig_biorthonormal(h, 1e-8).unwrap().eigenvalues
    }

    #[test]
    fn refuses_eta_for_unpaired_spectrum() {
        let h = Op::from_diagonal(&[c(0.0, 1.0), c(2.0, 0.0)]);
        let sys = eig_biorthonormal(&h, 1e-8).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        assert!(matches!(
            construct_eta(&sys, &cls),
            Err(Error::UnpairedSpectrum)
        ));
    }

    #[test]
    fn gauge_alignment_trivial_for_constructed_metric() {
        let spectrum = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 4.0), c(3.0, -4.0)];
        let basis = Op::new(random_ginibre(4, 4321)).unwrap();
        let h = synthesize_hamiltonian(&spectrum, &basis).unwrap();
        let sys = eig_biorthonormal(&h, 1e-6).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        let eta = construct_eta(&sys, &cls).unwrap();
        let (aligned, gauge) = align_gauge(&sys, &cls, &eta).unwrap();
        assert!(gauge.signs.iter().all(|&s| s == 1));
        // c-blocks computed from the metric built out of this very basis are
        // already the identity.
        for cblk in gauge.c_real.iter().chain(gauge.c_pair.iter()) {
            let d = cblk.nrows();
            assert!((cblk - CMat::identity(d, d)).norm() < 1e-9);
        }
        assert_gram_pattern(&aligned, &cls, &eta, &gauge, 1e-8);
    }

    #[test]
    fn gauge_alignment_fixes_rescaled_hermitian_basis() {
        // Degenerate Hermitian H seen through a stretched eigenbasis: the real
        // c-block is diag(1/4, 1) and alignment renormalizes it away.
        let h = Op::from_diagonal(&[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let basis = Op::from_diagonal(&[c(2.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)]);
        let sys_raw = eig_biorthonormal(&h, 1e-8).unwrap();
        // replace the eigenbasis by the stretched one
        let sys = BiSystem {
            eigenvalues: sys_raw.eigenvalues.clone(),
            left: Op::from_valid(basis.try_inverse().unwrap().matrix().adjoint()),
            right: basis,
            clusters: sys_raw.clusters.clone(),
            completeness_residual: 0.0,
            condition_estimate: 1.0,
        };
        let cls = classify_spectrum(&sys, 1e-8);
        let eta = Metric::identity(3);
        let (aligned, gauge) = align_gauge(&sys, &cls, &eta).unwrap();
        assert!(gauge.signs.iter().all(|&s| s == 1));
        assert_gram_pattern(&aligned, &cls, &eta, &gauge, 1e-10);
    }

    #[test]
    fn gauge_alignment_records_negative_signs() {
        // H = diag(1, 2) is pseudo-Hermitian for η = diag(1, −1); the second
        // basis vector has η-norm −1, which no rescaling can repair.
        let h = Op::from_diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let eta = Metric::from_signature(&[1, -1]).unwrap();
        let sys = eig_biorthonormal(&h, 1e-8).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        let (aligned, gauge) = align_gauge(&sys, &cls, &eta).unwrap();
        let mut signs = gauge.signs.clone();
        signs.sort_unstable();
        assert_eq!(signs, vec![-1, 1]);
        assert_gram_pattern(&aligned, &cls, &eta, &gauge, 1e-12);
    }

    #[test]
    fn gauge_alignment_degenerate_pair_blocks() {
        // Two-fold degenerate conjugate pair, synthesized with a random basis,
        // with the metric built against a scrambled intra-cluster pairing so
        // the cross c-block starts far from the identity.
        let spectrum = [c(1.0, 2.0), c(1.0, 2.0), c(1.0, -2.0), c(1.0, -2.0)];
        let basis = Op::new(random_ginibre(4, 2024)).unwrap();
        let h = synthesize_hamiltonian(&spectrum, &basis).unwrap();
        let sys = eig_biorthonormal(&h, 1e-6).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        assert_eq!(cls.pairs.len(), 1);
        let eta = construct_eta(&sys, &cls).unwrap();
        let (aligned, gauge) = align_gauge(&sys, &cls, &eta).unwrap();
        // aligned cross block must be the identity: re-derive it
        let eta_inv = eta.inverse().matrix();
        let (p, m) = cls.pairs[0];
        let pm = &aligned.clusters[p].members;
        let mm = &aligned.clusters[m].members;
        let cblk = CMat::from_fn(mm.len(), pm.len(), |a, b| {
            let fa = aligned.left.matrix().column(mm[a]);
            let fb = aligned.left.matrix().column(pm[b]);
            (eta_inv * fb).dotc(&fa).conj()
        });
        assert!(
            (&cblk - CMat::identity(2, 2)).norm() < 1e-10,
            "aligned c = {cblk}"
        );
        assert_gram_pattern(&aligned, &cls, &eta, &gauge, 1e-8);
    }

    /// Checks the η-Gram block pattern of an aligned system: diag(signs) on the
    /// real block, antidiagonal pairing on conjugate blocks, zeros elsewhere.
    fn assert_gram_pattern(
        sys: &BiSystem,
        cls: &SpectrumClass,
        eta: &Metric,
        gauge: &GaugeAlignment,
        tol: f64,
    ) {
        let n = sys.dim();
        let gram = sys.right.matrix().adjoint() * eta.op().matrix() * sys.right.matrix();
        let mut expected = CMat::zeros(n, n);
        let mut sign_iter = gauge.signs.iter();
        for &ci in &cls.real_clusters {
            for &k in &sys.clusters[ci].members {
                let s = *sign_iter.next().expect("sign per real vector") as f64;
                expected[(k, k)] = c(s, 0.0);
            }
        }
        for &(p, m) in &cls.pairs {
            for (&kp, &km) in sys.clusters[p]
                .members
                .iter()
                .zip(sys.clusters[m].members.iter())
            {
                expected[(kp, km)] = c(1.0, 0.0);
                expected[(km, kp)] = c(1.0, 0.0);
            }
        }
        let err = (&gram - &expected).norm();
        assert!(err < tol, "Gram pattern deviation {err:.3e}\n{gram}");
    }

    #[test]
    fn pt_residual_checks_involution() {
        let h = Op::identity(2);
        let p = Op::from_diagonal(&[c(2.0, 0.0), c(0.5, 0.0)]);
        assert!(pt_symmetry_residual(&h, &p).is_err());
    }

    #[test]
    fn real_parity_commuting_h_is_pt_symmetric() {
        let p = Op::new(CMat::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let h = Op::new(CMat::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.3, 0.0), c(0.3, 0.0), c(1.0, 0.0)],
        ))
        .unwrap();
        assert_eq!(pt_symmetry_residual(&h, &p).unwrap(), 0.0);
    }

    #[test]
    fn eta_semi_norm_vanishes_for_paired_eigenvectors() {
        // Non-real eigenvalue forces zero η-semi-norm of its eigenvector.
        let spectrum = [c(0.0, 2.0), c(0.0, -2.0), c(1.0, 0.0)];
        let basis = Op::new(random_ginibre(3, 808)).unwrap();
        let h = synthesize_hamiltonian(&spectrum, &basis).unwrap();
        let sys = eig_biorthonormal(&h, 1e-6).unwrap();
        let cls = classify_spectrum(&sys, 1e-8);
        let eta = construct_eta(&sys, &cls).unwrap();
        for (k, e) in sys.eigenvalues.iter().enumerate() {
            if e.im.abs() > 1e-6 {
                let v = StateVec::from_valid(sys.right_vector(k));
                let s = crate::operators::eta_semi_norm_sq(&v, &eta).unwrap();
                assert!(
                    s.abs() < 1e-10 * eta.op().norm(),
                    "semi-norm {s} for eigenvalue {e}"
                );
            }
        }
    }
}
