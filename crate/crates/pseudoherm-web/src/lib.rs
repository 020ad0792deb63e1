//! Wasm surface for the browser demo. Three entry points, each returning a
//! JSON string the page renders onto canvases: the minisuperspace spectrum
//! explorer, the first-order partner factory, and the metric checker.

use pseudoherm::biorthogonal::{
    classify_spectrum, construct_eta, default_cluster_tol, eig_biorthonormal, eigenvalues,
    pt_symmetry_residual,
};
use pseudoherm::discretize::{build_ops, make_grid};
use pseudoherm::io::{matrix_from_json, matrix_to_json};
use pseudoherm::operators::pseudo_hermiticity_residual;
use pseudoherm::psusy::{
    low_spectrum, xi_family_hamiltonians, xi_family_susy_pair, FirstOrderData, XiShape,
};
use pseudoherm::{wdw, C64, Error};
use wasm_bindgen::prelude::wasm_bindgen;

fn err_json(e: &Error) -> String {
    let code = match e {
        Error::DefectiveMatrix { .. } => "defective",
        Error::UnpairedSpectrum => "unpaired",
        Error::Parse(_) => "parse",
        _ => "invalid",
    };
    serde_json::json!({ "error": e.to_string(), "code": code }).to_string()
}

fn pairs(values: &[C64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn odd_at_least(n: usize, floor: usize) -> usize {
    let n = n.max(floor);
    if n % 2 == 0 {
        n + 1
    } else {
        n
    }
}

/// Two-component model spectrum for the given parameters, with the per-mode
/// reality boundaries when the universe is closed.
#[wasm_bindgen]
pub fn wdw_explore(kappa: i32, mass: f64, alpha: f64, n_points: usize) -> String {
    match wdw_explore_inner(kappa, mass, alpha, odd_at_least(n_points, 31)) {
        Ok(s) => s,
        Err(e) => err_json(&e),
    }
}

fn wdw_explore_inner(
    kappa: i32,
    mass: f64,
    alpha: f64,
    n_points: usize,
) -> Result<String, Error> {
    let curvature = wdw::Curvature::from_i8(kappa as i8)?;
    let half_width = wdw::suggested_half_width(mass, alpha);
    let grid = make_grid(n_points, half_width)?;
    let model = wdw::WdwModel::new(curvature, mass, alpha, grid)?;
    let spec = wdw::spectrum(&model);
    let n_imag = spec.d_eigenvalues.iter().filter(|&&d| d < 0.0).count();
    let alpha_stars: Vec<f64> = if curvature == wdw::Curvature::Closed {
        (0..6)
            .map(|n| wdw::reality_boundary(&model, n))
            .collect::<Result<_, _>>()?
    } else {
        vec![]
    };
    Ok(serde_json::json!({
        "omega": model.omega(),
        "half_width": half_width,
        "eigenvalues": pairs(&spec.eigenvalues),
        "d_eigenvalues": spec.d_eigenvalues,
        "boundary_modes": spec.boundary_modes,
        "n_imaginary_pairs": n_imag,
        "alpha_stars": alpha_stars,
    })
    .to_string())
}

/// Partner potentials and spectra of the polynomial-ξ family with
/// `f₋(x) = slope·x`.
#[wasm_bindgen]
pub fn susy_explore(
    n: u32,
    ell: f64,
    lambda: f64,
    f_minus_slope: f64,
    n_points: usize,
    half_width: f64,
) -> String {
    match susy_explore_inner(
        n,
        ell,
        lambda,
        f_minus_slope,
        odd_at_least(n_points, 61),
        half_width,
    ) {
        Ok(s) => s,
        Err(e) => err_json(&e),
    }
}

fn susy_explore_inner(
    n: u32,
    ell: f64,
    lambda: f64,
    f_minus_slope: f64,
    n_points: usize,
    half_width: f64,
) -> Result<String, Error> {
    let grid = make_grid(n_points, half_width)?;
    let ops = build_ops(&grid);
    let data = FirstOrderData::new(&grid, XiShape::PolyEven { n, ell }, lambda, move |x| {
        f_minus_slope * x
    })?;
    let (hp, hm) = xi_family_hamiltonians(&data, &ops)?;
    let pair = xi_family_susy_pair(&data, &ops)?;

    let levels = 12.min(n_points / 8);
    let plus = low_spectrum(&hp, levels)?;
    let minus = low_spectrum(&hm, levels)?;
    let max_im = minus.iter().map(|z| z.im.abs()).fold(0.0, f64::max);

    // display decomposition: H± = ½(p+f₋)² + V±(x)
    let kin = ops.laplacian().scale(C64::new(0.5, 0.0));
    let mut v_plus = Vec::with_capacity(n_points);
    let mut v_minus_re = Vec::with_capacity(n_points);
    let mut v_minus_im = Vec::with_capacity(n_points);
    for j in 0..n_points {
        let vp = hp[(j, j)] - kin[(j, j)];
        let vm = hm[(j, j)] - kin[(j, j)];
        v_plus.push(vp.re);
        v_minus_re.push(vm.re);
        v_minus_im.push(vm.im);
    }

    Ok(serde_json::json!({
        "x": grid.nodes(),
        "v_plus": v_plus,
        "v_minus_re": v_minus_re,
        "v_minus_im": v_minus_im,
        "spectrum_plus": pairs(&plus),
        "spectrum_minus": pairs(&minus),
        "pt_residual": pt_symmetry_residual(&hm, &ops.parity)?,
        "h_plus_hermiticity": hp.hermiticity_residual(),
        "intertwining": pair.intertwining_residual(),
        "max_im_minus": max_im,
    })
    .to_string())
}

/// Classifies a matrix-JSON input and constructs a certifying metric when one
/// exists.
#[wasm_bindgen]
pub fn check_matrix(matrix_json: &str, tol: f64) -> String {
    match check_matrix_inner(matrix_json, tol) {
        Ok(s) => s,
        Err(e) => err_json(&e),
    }
}

fn check_matrix_inner(matrix_json: &str, tol: f64) -> Result<String, Error> {
    let h = matrix_from_json(matrix_json)?;
    let vals = eigenvalues(&h)?;
    let sys = eig_biorthonormal(&h, default_cluster_tol(&vals))?;
    let cls = classify_spectrum(&sys, if tol > 0.0 { tol } else { 1e-8 });
    if !cls.is_pseudo_hermitian() {
        return Ok(serde_json::json!({
            "classification": "NotPseudoHermitian",
            "eigenvalues": pairs(&sys.eigenvalues),
            "completeness": sys.completeness_residual,
        })
        .to_string());
    }
    let eta = construct_eta(&sys, &cls)?;
    let residual = pseudo_hermiticity_residual(&h, &eta)?;
    let eta_json: serde_json::Value = serde_json::from_str(&matrix_to_json(eta.op()))
        .map_err(|e| Error::Parse(e.to_string()))?;
    Ok(serde_json::json!({
        "classification": cls.classification.to_string(),
        "eigenvalues": pairs(&sys.eigenvalues),
        "residual": residual,
        "eta": eta_json,
        "completeness": sys.completeness_residual,
    })
    .to_string())
}
