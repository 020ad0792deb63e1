//! Dense complex eigensolver: Schur form plus triangular back-substitution.
//!
//! Right eigenvectors of the triangular factor are recovered column by column,
//! with the near-singular denominators regularized the same way dense LAPACK
//! solvers do, so exactly degenerate (but diagonalizable) matrices still yield
//! a spanning set. Defectiveness is surfaced by the caller through the
//! conditioning of the eigenvector matrix, not here.

use crate::{C64, CMat, CVec, Error, Result};

const SCHUR_EPS: f64 = 1e-14;

/// Eigenvalues and unit-norm right eigenvectors (as matrix columns), sorted by
/// `(Re, Im)` for deterministic downstream processing.
pub(crate) fn general_eigen(m: &CMat) -> Result<(Vec<C64>, CMat)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((vec![], CMat::zeros(0, 0)));
    }
    let max_iter = 200 * n.max(4);
    let schur = m
        .clone()
        .try_schur(SCHUR_EPS, max_iter)
        .ok_or(Error::SchurFailed)?;
    let (q, t) = schur.unpack();

    let tnorm = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let ulp = f64::EPSILON;
    let dmin = ulp * tnorm.max(1.0);

    let mut vectors = CMat::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    let mut y = CVec::zeros(n);
    for i in 0..n {
        let lam = t[(i, i)];
        values.push(lam);
        y.fill(C64::new(0.0, 0.0));
        y[i] = C64::new(1.0, 0.0);
        for k in (0..i).rev() {
            let mut s = C64::new(0.0, 0.0);
            for mcol in (k + 1)..=i {
                s += t[(k, mcol)] * y[mcol];
            }
            let mut den = t[(k, k)] - lam;
            if den.norm() < dmin {
                den = C64::new(dmin, 0.0);
            }
            y[k] = -s / den;
        }
        let x = &q * &y;
        let nrm = x.norm();
        vectors.set_column(i, &x.map(|z| z / nrm));
    }

    // Sort by (Re, Im); keeps conjugate partners adjacent and runs reproducible.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (values[a].re, values[a].im)
            .partial_cmp(&(values[b].re, values[b].im))
            .unwrap()
    });
    let sorted_values: Vec<C64> = order.iter().map(|&k| values[k]).collect();
    let mut sorted_vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.set_column(dst, &vectors.column(src));
    }
    Ok((sorted_values, sorted_vectors))
}

/// Eigenvalues only (sorted by `(Re, Im)`), skipping eigenvector extraction.
pub(crate) fn eigenvalues_only(m: &CMat) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(vec![]);
    }
    let max_iter = 200 * n.max(4);
    let schur = m
        .clone()
        .try_schur(SCHUR_EPS, max_iter)
        .ok_or(Error::SchurFailed)?;
    let (_, t) = schur.unpack();
    let mut values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    values.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(values)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub(crate) fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let se = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_reproduced() {
        let m = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(3.0, 0.0),
            c(1.0, 2.0),
            c(1.0, -2.0),
        ]));
        let (vals, vecs) = general_eigen(&m).unwrap();
        assert_eq!(vals.len(), 3);
        // residual ‖Mv − λv‖ per column
        for (k, lam) in vals.iter().enumerate() {
            let v = vecs.column(k).clone_owned();
            let r = (&m * &v - v.map(|z| lam * z)).norm();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn random_matrix_eigenpairs_accurate() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 24;
        let m = CMat::from_fn(n, n, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let (vals, vecs) = general_eigen(&m).unwrap();
        let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (k, lam) in vals.iter().enumerate() {
            let v = vecs.column(k).clone_owned();
            let r = (&m * &v - v.map(|z| lam * z)).norm();
            assert!(r < 1e-11 * scale, "residual {r}");
        }
    }

    #[test]
    fn exact_degeneracy_still_spans() {
        // diag(2, 2, 5) conjugated by a fixed invertible matrix.
        let s = CMat::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(1.0, 1.0),
                c(0.0, 2.0),
                c(0.0, 0.0),
                c(2.0, 0.0),
                c(1.0, -1.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(3.0, 0.0),
            ],
        );
        let sinv = s.clone().try_inverse().unwrap();
        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(2.0, 0.0),
            c(2.0, 0.0),
            c(5.0, 0.0),
        ]));
        let m = &s * d * &sinv;
        let (_, vecs) = general_eigen(&m).unwrap();
        let cond = vecs.norm() * vecs.clone().try_inverse().unwrap().norm();
        assert!(cond < 1e3, "eigenvector matrix should stay well conditioned, cond={cond}");
    }

    #[test]
    fn hermitian_path_sorted() {
        let m = CMat::from_row_slice(
            2,
            2,
            &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)],
        );
        let (vals, _) = hermitian_eigen(&m);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
    }
}
