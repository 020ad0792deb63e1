//! File formats: matrix JSON, spectrum CSV, certificate JSON, trajectory CSV.
//!
//! Matrix JSON is `{"dim": n, "re": [[…]], "im": [[…]]}` row-major; readers
//! reject ragged rows and non-finite entries. CSV outputs start with `#`
//! header lines carrying version, seed, and tolerances so every artifact is
//! reproducible from its own header.

use crate::biorthogonal::{BiSystem, SpectrumClass};
use crate::{C64, CMat, Error, Op, Result};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Serializes an operator as matrix JSON.
pub fn matrix_to_json(op: &Op) -> String {
    let n = op.dim();
    let mut re = vec![vec![0.0; n]; n];
    let mut im = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let z = op[(i, j)];
            re[i][j] = z.re;
            im[i][j] = z.im;
        }
    }
    serde_json::to_string(&MatrixJson { dim: n, re, im }).expect("matrix json")
}

/// Parses matrix JSON, rejecting ragged rows, wrong dimensions, and
/// non-finite entries.
pub fn matrix_from_json(s: &str) -> Result<Op> {
    let parsed: MatrixJson =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix json: {e}")))?;
    let n = parsed.dim;
    if parsed.re.len() != n || parsed.im.len() != n {
        return Err(Error::Parse(format!(
            "expected {n} rows, got re: {}, im: {}",
            parsed.re.len(),
            parsed.im.len()
        )));
    }
    for (name, part) in [("re", &parsed.re), ("im", &parsed.im)] {
        for (i, row) in part.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "ragged {name} row {i}: expected {n} entries, got {}",
                    row.len()
                )));
            }
        }
    }
    let m = CMat::from_fn(n, n, |i, j| C64::new(parsed.re[i][j], parsed.im[i][j]));
    Op::new(m)
}

#[derive(Debug, Serialize, Deserialize)]
struct VectorJson {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

/// Serializes a state vector as `{"dim": n, "re": […], "im": […]}`.
pub fn vector_to_json(v: &crate::StateVec) -> String {
    let n = v.dim();
    let re = (0..n).map(|i| v[i].re).collect();
    let im = (0..n).map(|i| v[i].im).collect();
    serde_json::to_string(&VectorJson { dim: n, re, im }).expect("vector json")
}

/// Parses vector JSON with the same validation rules as matrices.
pub fn vector_from_json(s: &str) -> Result<crate::StateVec> {
    let parsed: VectorJson =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("vector json: {e}")))?;
    if parsed.re.len() != parsed.dim || parsed.im.len() != parsed.dim {
        return Err(Error::Parse(format!(
            "expected {} entries, got re: {}, im: {}",
            parsed.dim,
            parsed.re.len(),
            parsed.im.len()
        )));
    }
    let entries: Vec<C64> = parsed
        .re
        .iter()
        .zip(parsed.im.iter())
        .map(|(&re, &im)| C64::new(re, im))
        .collect();
    crate::StateVec::new(crate::CVec::from_vec(entries))
}

/// Reproducibility header attached to every file output.
#[derive(Debug, Clone, Serialize)]
pub struct OutputHeader {
    pub version: String,
    pub seed: Option<u64>,
    pub tol: f64,
}

impl OutputHeader {
    pub fn new(seed: Option<u64>, tol: f64) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            tol,
        }
    }

    fn write_csv_comments<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "# version={}", self.version)?;
        match self.seed {
            Some(s) => writeln!(w, "# seed={s}")?,
            None => writeln!(w, "# seed=none")?,
        }
        writeln!(w, "# tol={:e}", self.tol)
    }
}

/// One row of the spectrum table.
#[derive(Debug, Clone)]
pub struct SpectrumRow {
    pub index: usize,
    pub value: C64,
    pub class: &'static str,
    pub pair_index: Option<usize>,
    pub multiplicity: usize,
}

/// Flattens a classified system into per-eigenvalue rows.
pub fn spectrum_rows(sys: &BiSystem, cls: &SpectrumClass) -> Vec<SpectrumRow> {
    let n = sys.eigenvalues.len();
    let mut class = vec!["unpaired"; n];
    let mut pair_index: Vec<Option<usize>> = vec![None; n];
    let mut multiplicity = vec![1usize; n];
    for cluster in &sys.clusters {
        for &k in &cluster.members {
            multiplicity[k] = cluster.multiplicity();
        }
    }
    for &ci in &cls.real_clusters {
        for &k in &sys.clusters[ci].members {
            class[k] = "real";
        }
    }
    for &(p, m) in &cls.pairs {
        for (&kp, &km) in sys.clusters[p]
            .members
            .iter()
            .zip(sys.clusters[m].members.iter())
        {
            class[kp] = "pair_plus";
            class[km] = "pair_minus";
            pair_index[kp] = Some(km);
            pair_index[km] = Some(kp);
        }
    }
    (0..n)
        .map(|k| SpectrumRow {
            index: k,
            value: sys.eigenvalues[k],
            class: class[k],
            pair_index: pair_index[k],
            multiplicity: multiplicity[k],
        })
        .collect()
}

/// Writes `index, re, im, class, pair_index, multiplicity` rows.
pub fn write_spectrum_csv<W: Write>(
    w: &mut W,
    header: &OutputHeader,
    rows: &[SpectrumRow],
) -> std::io::Result<()> {
    header.write_csv_comments(w)?;
    writeln!(w, "index,re,im,class,pair_index,multiplicity")?;
    for r in rows {
        let pair = r
            .pair_index
            .map(|p| p.to_string())
            .unwrap_or_else(|| "-".to_string());
        writeln!(
            w,
            "{},{:.17e},{:.17e},{},{},{}",
            r.index, r.value.re, r.value.im, r.class, pair, r.multiplicity
        )?;
    }
    Ok(())
}

/// Writes a plain eigenvalue table (no classification available).
pub fn write_eigenvalue_csv<W: Write>(
    w: &mut W,
    header: &OutputHeader,
    values: &[C64],
) -> std::io::Result<()> {
    header.write_csv_comments(w)?;
    writeln!(w, "index,re,im")?;
    for (k, z) in values.iter().enumerate() {
        writeln!(w, "{},{:.17e},{:.17e}", k, z.re, z.im)?;
    }
    Ok(())
}

/// Certificate JSON: the pseudo-Hermiticity residual together with the metric
/// that achieves it, plus the reproducibility header fields.
pub fn write_certificate<W: Write>(
    w: &mut W,
    header: &OutputHeader,
    residual: f64,
    eta: &Op,
) -> Result<()> {
    #[derive(Serialize)]
    struct Certificate<'a> {
        residual: f64,
        eta: serde_json::Value,
        version: &'a str,
        seed: Option<u64>,
        tol: f64,
    }
    let eta_json: serde_json::Value = serde_json::from_str(&matrix_to_json(eta))
        .map_err(|e| Error::Parse(format!("certificate: {e}")))?;
    let cert = Certificate {
        residual,
        eta: eta_json,
        version: &header.version,
        seed: header.seed,
        tol: header.tol,
    };
    let text = serde_json::to_string_pretty(&cert)
        .map_err(|e| Error::Parse(format!("certificate: {e}")))?;
    writeln!(w, "{text}")?;
    Ok(())
}

/// Trajectory CSV: `t, re(inner), im(inner)` for a sampled observable.
pub fn write_trajectory_csv<W: Write>(
    w: &mut W,
    header: &OutputHeader,
    series: &[(f64, C64)],
) -> std::io::Result<()> {
    header.write_csv_comments(w)?;
    writeln!(w, "t,re_inner,im_inner")?;
    for (t, z) in series {
        writeln!(w, "{:.12e},{:.17e},{:.17e}", t, z.re, z.im)?;
    }
    Ok(())
}
