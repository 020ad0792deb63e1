//! Command-line front end: metric certification, grid demos, model spectra,
//! and trajectory runs.
//!
//! Exit codes are a stable scripting contract:
//! 0 success (spectrum real or conjugate-paired), 1 usage/IO/parse error,
//! 2 not pseudo-Hermitian, 3 no complete biorthonormal eigensystem.

use clap::{Args, Parser, Subcommand};
use pseudoherm::biorthogonal::{
    classify_spectrum, construct_eta, default_cluster_tol, eig_biorthonormal, eigenvalues,
    pt_symmetry_residual,
};
use pseudoherm::discretize::{build_ops, example_h1, example_h2, make_grid};
use pseudoherm::evolution::{evolve, inner_product_series};
use pseudoherm::io::{
    matrix_from_json, spectrum_rows, vector_from_json, write_certificate, write_eigenvalue_csv,
    write_spectrum_csv, write_trajectory_csv, OutputHeader,
};
use pseudoherm::operators::pseudo_hermiticity_residual;
use pseudoherm::psusy::{
    low_spectrum, resolved_mode_count, xi_family_hamiltonians, xi_family_susy_pair,
    FirstOrderData, XiShape,
};
use pseudoherm::{wdw, C64, Error, Metric, Op, StateVec};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NOT_PSEUDO_HERMITIAN: u8 = 2;
const EXIT_DEFECTIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "pseudoherm", version, about = "Pseudo-Hermitian spectral toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative tolerance for algebraic identities and verdicts.
    #[arg(long, global = true, default_value_t = pseudoherm::DEFAULT_TOL)]
    tol: f64,

    /// Seed recorded in output headers (and used wherever randomness enters).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for file outputs; stdout is used when omitted.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Output format for spectra: csv or json.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check pseudo-Hermiticity: against a given metric, or by constructing one.
    Check {
        /// Matrix JSON file ({"dim": n, "re": [[…]], "im": [[…]]}).
        matrix: PathBuf,
        /// Optional metric JSON file; when present only the residual is reported.
        #[arg(long)]
        eta: Option<PathBuf>,
    },
    /// Reproduce a built-in scenario and write its spectra and residuals.
    Demo {
        #[command(subcommand)]
        which: DemoCommand,
    },
    /// Two-component minisuperspace model: spectrum or an α sweep.
    Wdw(WdwArgs),
    /// First-order pseudo-supersymmetric partner family.
    Susy(SusyArgs),
    /// Integrate i dψ/dt = Hψ and record the metric inner product.
    Evolve {
        /// Generator matrix JSON file.
        #[arg(long)]
        matrix: PathBuf,
        /// Metric JSON for the recorded inner product (identity when omitted).
        #[arg(long)]
        eta: Option<PathBuf>,
        /// Initial state JSON ({"dim": n, "re": […], "im": […]}); uniform when omitted.
        #[arg(long)]
        psi0: Option<PathBuf>,
        #[arg(long)]
        t_final: f64,
        #[arg(long)]
        dt: f64,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// The two cubic-potential examples with opposite PT/P-pseudo-Hermitian
    /// symmetries.
    PtExamples {
        #[arg(long, default_value_t = 201)]
        n_points: usize,
        #[arg(long, default_value_t = 10.0)]
        half_width: f64,
    },
    /// Closed/flat/open model spectrum with reality-boundary report.
    Wdw {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        kappa: i8,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 301)]
        n_points: usize,
        #[arg(long)]
        half_width: Option<f64>,
    },
    /// Polynomial-ξ partner pair with spectra and residual report.
    SusyPoly {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 201)]
        n_points: usize,
        #[arg(long, default_value_t = 8.0)]
        half_width: f64,
    },
}

#[derive(Args)]
struct WdwArgs {
    /// Curvature sign: -1, 0, or 1.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    kappa: i8,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 301)]
    n_points: usize,
    /// φ-grid half width; a resolution-based default is used when omitted.
    #[arg(long)]
    half_width: Option<f64>,
    /// α sweep `lo:hi:steps` producing a per-α classification table.
    #[command(subcommand)]
    sweep: Option<WdwSweep>,
}

#[derive(Subcommand)]
enum WdwSweep {
    Sweep {
        /// Range as lo:hi:steps.
        #[arg(long, allow_hyphen_values = true)]
        alpha_range: String,
    },
}

#[derive(Args)]
struct SusyArgs {
    /// Shape of ξ, e.g. `poly:1:1.0` for ξ = −(x/ℓ)^{2n}.
    #[arg(long)]
    xi: String,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Odd polynomial f₋ as coefficients `poly:c0,c1,…` (ascending powers).
    #[arg(long, default_value = "poly:0")]
    f_minus: String,
    #[arg(long, default_value_t = 201)]
    n_points: usize,
    #[arg(long, default_value_t = 8.0)]
    half_width: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's rendering but force the documented usage exit code
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::DefectiveMatrix { .. } => EXIT_DEFECTIVE,
        Error::UnpairedSpectrum => EXIT_NOT_PSEUDO_HERMITIAN,
        _ => EXIT_USAGE,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Check { matrix, eta } => cmd_check(cli, matrix, eta.as_deref()),
        Command::Demo { which } => cmd_demo(cli, which),
        Command::Wdw(args) => cmd_wdw(cli, args),
        Command::Susy(args) => cmd_susy(cli, args),
        Command::Evolve {
            matrix,
            eta,
            psi0,
            t_final,
            dt,
        } => cmd_evolve(cli, matrix, eta.as_deref(), psi0.as_deref(), *t_final, *dt),
    }
}

fn read_matrix(path: &Path) -> Result<Op, Error> {
    let text = fs::read_to_string(path)?;
    matrix_from_json(&text)
}

fn header(cli: &Cli) -> OutputHeader {
    OutputHeader::new(Some(cli.seed), cli.tol)
}

/// Writes to `<out_dir>/<name>` when an output directory was given, otherwise
/// streams to stdout with a `=== name ===` banner.
fn emit(cli: &Cli, name: &str, body: &[u8]) -> Result<Option<PathBuf>, Error> {
    match &cli.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(name);
            fs::write(&path, body)?;
            Ok(Some(path))
        }
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "=== {name} ===")?;
            out.write_all(body)?;
            Ok(None)
        }
    }
}

fn cmd_check(cli: &Cli, matrix: &Path, eta: Option<&Path>) -> Result<u8, Error> {
    let h = read_matrix(matrix)?;
    if let Some(eta_path) = eta {
        let eta_op = read_matrix(eta_path)?;
        let metric = Metric::with_tol(eta_op, cli.tol.max(1e-12))?;
        let residual = pseudo_hermiticity_residual(&h, &metric)?;
        let verdict = residual <= cli.tol;
        let report = serde_json::json!({
            "mode": "residual",
            "residual": residual,
            "pseudo_hermitian": verdict,
            "tol": cli.tol,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": cli.seed,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return Ok(if verdict { EXIT_OK } else { EXIT_NOT_PSEUDO_HERMITIAN });
    }

    let sys = eig_biorthonormal(&h, default_cluster_tol(&eigenvalues(&h)?))?;
    let cls = classify_spectrum(&sys, pseudoherm::DEFAULT_PAIR_TOL);
    if cli.out_dir.is_some() {
        let mut body = Vec::new();
        write_spectrum_csv(&mut body, &header(cli), &spectrum_rows(&sys, &cls))?;
        emit(cli, "spectrum.csv", &body)?;
    }
    if !cls.is_pseudo_hermitian() {
        let unpaired: Vec<String> = cls
            .unpaired
            .iter()
            .map(|&ci| format!("{}", sys.clusters[ci].value))
            .collect();
        let report = serde_json::json!({
            "mode": "verdict",
            "classification": "NotPseudoHermitian",
            "unpaired": unpaired,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": cli.seed,
            "tol": cli.tol,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return Ok(EXIT_NOT_PSEUDO_HERMITIAN);
    }
    let eta = construct_eta(&sys, &cls)?;
    let residual = pseudo_hermiticity_residual(&h, &eta)?;
    let mut cert = Vec::new();
    write_certificate(&mut cert, &header(cli), residual, eta.op())?;
    let mut report: serde_json::Value = serde_json::from_slice(&cert)
        .map_err(|e| Error::Parse(format!("certificate: {e}")))?;
    report["classification"] = serde_json::json!(cls.classification.to_string());
    report["completeness_residual"] = serde_json::json!(sys.completeness_residual);
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(EXIT_OK)
}

fn cmd_demo(cli: &Cli, which: &DemoCommand) -> Result<u8, Error> {
    match which {
        DemoCommand::PtExamples {
            n_points,
            half_width,
        } => {
            let grid = make_grid(*n_points, *half_width)?;
            let ops = build_ops(&grid);
            let p_metric = Metric::new(ops.parity.clone())?;
            let h1 = example_h1(&ops);
            let h2 = example_h2(&ops);
            let rows = [
                ("H1", &h1),
                ("H2", &h2),
            ];
            let mut table = String::new();
            table.push_str("hamiltonian,pt_residual,p_pseudo_hermiticity_residual\n");
            let mut summary = String::new();
            for (name, h) in rows {
                let pt = pt_symmetry_residual(h, &ops.parity)?;
                let ph = pseudo_hermiticity_residual(h, &p_metric)?;
                table.push_str(&format!("{name},{pt:.3e},{ph:.3e}\n"));
                summary.push_str(&format!(
                    "{name}: PT residual {pt:.3e} ({}), P-pseudo-Hermiticity residual {ph:.3e} ({})\n",
                    if pt <= cli.tol { "symmetric" } else { "broken" },
                    if ph <= cli.tol { "holds" } else { "fails" },
                ));
            }
            emit(cli, "pt_examples_residuals.csv", table.as_bytes())?;
            print!("{summary}");
            Ok(EXIT_OK)
        }
        DemoCommand::Wdw {
            kappa,
            mass,
            alpha,
            n_points,
            half_width,
        } => {
            let args = WdwArgs {
                kappa: *kappa,
                mass: *mass,
                alpha: *alpha,
                n_points: *n_points,
                half_width: *half_width,
                sweep: None,
            };
            cmd_wdw(cli, &args)
        }
        DemoCommand::SusyPoly {
            n,
            ell,
            lambda,
            n_points,
            half_width,
        } => {
            let args = SusyArgs {
                xi: format!("poly:{n}:{ell}"),
                lambda: *lambda,
                f_minus: "poly:0".into(),
                n_points: *n_points,
                half_width: *half_width,
            };
            cmd_susy(cli, &args)
        }
    }
}

fn cmd_wdw(cli: &Cli, args: &WdwArgs) -> Result<u8, Error> {
    let curvature = wdw::Curvature::from_i8(args.kappa)?;
    if let Some(WdwSweep::Sweep { alpha_range }) = &args.sweep {
        let (lo, hi, steps) = parse_range(alpha_range)?;
        let mut table = String::new();
        table.push_str("alpha,omega,n_real_pairs,n_imaginary_pairs,n_boundary,classification\n");
        for k in 0..=steps {
            let alpha = lo + (hi - lo) * k as f64 / steps.max(1) as f64;
            let half_width = args
                .half_width
                .unwrap_or_else(|| wdw::suggested_half_width(args.mass, alpha));
            let grid = make_grid(args.n_points, half_width)?;
            let model = wdw::WdwModel::new(curvature, args.mass, alpha, grid)?;
            let spec = wdw::spectrum(&model);
            let n_imag = spec
                .d_eigenvalues
                .iter()
                .filter(|&&d| d < 0.0)
                .count();
            let n_boundary = spec.boundary_modes.len();
            let n_real = spec.d_eigenvalues.len() - n_imag - n_boundary;
            let class = if n_boundary > 0 {
                "Boundary"
            } else if n_imag == 0 {
                "AllReal"
            } else {
                "Mixed"
            };
            table.push_str(&format!(
                "{alpha:.6},{:.6e},{n_real},{n_imag},{n_boundary},{class}\n",
                model.omega()
            ));
        }
        emit(cli, "wdw_sweep.csv", table.as_bytes())?;
        return Ok(EXIT_OK);
    }

    let half_width = args
        .half_width
        .unwrap_or_else(|| wdw::suggested_half_width(args.mass, args.alpha));
    let grid = make_grid(args.n_points, half_width)?;
    let model = wdw::WdwModel::new(curvature, args.mass, args.alpha, grid)?;
    let spec = wdw::spectrum(&model);

    let mut body = Vec::new();
    if cli.format == "json" {
        let values: Vec<[f64; 2]> = spec.eigenvalues.iter().map(|z| [z.re, z.im]).collect();
        let report = serde_json::json!({
            "eigenvalues": values,
            "d_eigenvalues": spec.d_eigenvalues,
            "boundary_modes": spec.boundary_modes,
            "omega": model.omega(),
            "version": env!("CARGO_PKG_VERSION"),
            "seed": cli.seed,
            "tol": cli.tol,
        });
        body.extend_from_slice(serde_json::to_string_pretty(&report).unwrap().as_bytes());
        body.push(b'\n');
        emit(cli, "wdw_spectrum.json", &body)?;
    } else {
        write_eigenvalue_csv(&mut body, &header(cli), &spec.eigenvalues)?;
        emit(cli, "wdw_spectrum.csv", &body)?;
    }
    let n_imag = spec.d_eigenvalues.iter().filter(|&&d| d < 0.0).count();
    eprintln!(
        "omega = {:.6}, modes: {} real pairs, {} imaginary pairs, {} boundary",
        model.omega(),
        spec.d_eigenvalues.len() - n_imag - spec.boundary_modes.len(),
        n_imag,
        spec.boundary_modes.len()
    );
    if curvature == wdw::Curvature::Closed {
        for n in 0..3 {
            eprintln!(
                "reality boundary of mode {n}: alpha* = {:.6}",
                wdw::reality_boundary(&model, n)?
            );
        }
    }
    Ok(EXIT_OK)
}

fn cmd_susy(cli: &Cli, args: &SusyArgs) -> Result<u8, Error> {
    let grid = make_grid(args.n_points, args.half_width)?;
    let xi = parse_xi(&args.xi)?;
    let coeffs = parse_poly(&args.f_minus)?;
    let f_minus = move |x: f64| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * x.powi(k as i32))
            .sum::<f64>()
    };
    let data = FirstOrderData::new(&grid, xi, args.lambda, f_minus)?;
    let ops = build_ops(&grid);

    let (hp, hm) = xi_family_hamiltonians(&data, &ops)?;
    let pair = xi_family_susy_pair(&data, &ops)?;

    let count = resolved_mode_count(args.n_points);
    let plus = low_spectrum(&hp, count)?;
    let minus = low_spectrum(&hm, count)?;

    let mut csv = String::new();
    csv.push_str(&format!(
        "# version={} seed={} tol={:e}\n",
        env!("CARGO_PKG_VERSION"),
        cli.seed,
        cli.tol
    ));
    csv.push_str("level,re_plus,im_plus,re_minus,im_minus\n");
    for (k, (a, b)) in plus.iter().zip(minus.iter()).enumerate() {
        csv.push_str(&format!(
            "{k},{:.17e},{:.17e},{:.17e},{:.17e}\n",
            a.re, a.im, b.re, b.im
        ));
    }
    emit(cli, "susy_partner_spectra.csv", csv.as_bytes())?;

    let max_im = minus.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let pt = pt_symmetry_residual(&hm, &ops.parity)?;
    let report = serde_json::json!({
        "intertwining_residual": pair.intertwining_residual(),
        "h_plus_hermiticity": hp.hermiticity_residual(),
        "h_minus_pt_residual": pt,
        "max_im_resolved_minus": max_im,
        "resolved_modes": count,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cli.seed,
        "tol": cli.tol,
    });
    let body = format!("{}\n", serde_json::to_string_pretty(&report).unwrap());
    emit(cli, "susy_residuals.json", body.as_bytes())?;
    eprintln!(
        "partners share {} resolved levels (max |Im E_-| = {max_im:.3e}); intertwining {:.3e}",
        count,
        pair.intertwining_residual()
    );
    Ok(EXIT_OK)
}

fn cmd_evolve(
    cli: &Cli,
    matrix: &Path,
    eta: Option<&Path>,
    psi0: Option<&Path>,
    t_final: f64,
    dt: f64,
) -> Result<u8, Error> {
    let h = read_matrix(matrix)?;
    let n = h.dim();
    let metric = match eta {
        Some(path) => Metric::with_tol(read_matrix(path)?, cli.tol.max(1e-12))?,
        None => Metric::identity(n),
    };
    let psi0 = match psi0 {
        Some(path) => vector_from_json(&fs::read_to_string(path)?)?,
        None => {
            let amp = 1.0 / (n as f64).sqrt();
            StateVec::from_slice(&vec![C64::new(amp, 0.0); n])
        }
    };
    let traj = evolve(&h, &psi0, t_final, dt)?;
    let series = inner_product_series(&traj, &traj, &metric)?;
    let drift = pseudoherm::evolution::inner_product_drift(&traj, &traj, &metric)?;
    let mut body = Vec::new();
    write_trajectory_csv(&mut body, &header(cli), &series)?;
    emit(cli, "trajectory.csv", &body)?;
    eprintln!("inner-product drift over [0, {t_final}]: {drift:.3e}");
    Ok(EXIT_OK)
}

fn parse_range(s: &str) -> Result<(f64, f64, usize), Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "range must be lo:hi:steps, got {s:?}"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|e| Error::Parse(format!("range lo: {e}")))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|e| Error::Parse(format!("range hi: {e}")))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|e| Error::Parse(format!("range steps: {e}")))?;
    Ok((lo, hi, steps))
}

fn parse_xi(s: &str) -> Result<XiShape, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["poly", n, ell] => {
            let n: u32 = n
                .parse()
                .map_err(|e| Error::Parse(format!("xi power: {e}")))?;
            let ell: f64 = ell
                .parse()
                .map_err(|e| Error::Parse(format!("xi length: {e}")))?;
            Ok(XiShape::PolyEven { n, ell })
        }
        _ => Err(Error::Parse(format!(
            "xi must be poly:<n>:<ell>, got {s:?}"
        ))),
    }
}

fn parse_poly(s: &str) -> Result<Vec<f64>, Error> {
    let body = s
        .strip_prefix("poly:")
        .ok_or_else(|| Error::Parse(format!("f-minus must be poly:c0,c1,…, got {s:?}")))?;
    body.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("coefficient {c:?}: {e}")))
        })
        .collect()
}
