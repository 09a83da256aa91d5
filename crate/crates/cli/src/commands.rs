use crate::config::{Format, RunConfig};
use crate::error::CliError;
use borel_pde::certificates::{sweep, sweep_csv, thresholds, CertificateModel};
use borel_pde::norm_suite::{norm_suite, NormSuiteConfig};
use borel_pde::oracles::{similarity_ode_ex1, similarity_ode_ex3};
use borel_pde::solver::{recover_physical, x_of_y};
use borel_pde::validation::{compare_similarity, geometric_points, pde_residual};
use borel_pde::{nu_norm, picard_solve, Certificate, Complex64, Constants, Example, Problem, SolveResult};
use serde::Serialize;
use std::path::Path;

const PDE_TOL: f64 = 1e-3;
const SIMILARITY_TOL: f64 = 1e-4;

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io { path: path.display().to_string(), reason: e.to_string() }
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| io_err(&path, e))
}

fn write_json<T: Serialize + ?Sized>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(&path, e))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| io_err(&path, e))
}

/// Flat rows as `<stem>.csv` or `<stem>.json`.
fn write_table<T: Serialize>(dir: &Path, stem: &str, rows: &[T], format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(dir, &format!("{stem}.json"), rows),
        Format::Csv => {
            let path = dir.join(format!("{stem}.csv"));
            let mut w = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
            for row in rows {
                w.serialize(row).map_err(|e| io_err(&path, e))?;
            }
            w.flush().map_err(|e| io_err(&path, e))
        }
    }
}

fn prepare_out(config: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&config.out).map_err(|e| io_err(&config.out, e))
}

fn model(config: &RunConfig) -> Result<CertificateModel, CliError> {
    match config.spec.example {
        Example::Ex1 { gamma } => Ok(CertificateModel::Ex1 { gamma }),
        Example::Ex2 => Ok(CertificateModel::Ex2),
        Example::Ex3 { delta, .. } => Ok(CertificateModel::Ex3 { delta, k_bound: config.ex3_k }),
        Example::Custom(_) => Err(CliError::Config("custom coefficients have no certificate model".into())),
    }
}

fn constants(config: &RunConfig) -> Constants {
    Constants { c: config.c, ..Constants::default() }
}

/// Physical sample points: geometric in `[y₀, 4y₀]` with `y₀ = max(10, 1.25ν)`.
fn y_points(config: &RunConfig) -> Vec<Complex64> {
    let y0 = (1.25 * config.spec.nu_run).max(10.0);
    geometric_points(y0, 4.0 * y0, 8).into_iter().map(|y| Complex64::new(y, 0.0)).collect()
}

fn solve_problem(config: &RunConfig) -> Result<(Problem, SolveResult), CliError> {
    let problem = Problem::new(config.spec.clone())?;
    let result = picard_solve(&problem)?;
    Ok((problem, result))
}

#[derive(Serialize)]
struct BorelRow {
    t_index: usize,
    t: f64,
    s: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct PhysicalRow {
    t_index: usize,
    t: f64,
    y: f64,
    f_re: f64,
    f_im: f64,
    tail: f64,
    x: Option<f64>,
    h_re: Option<f64>,
    h_im: Option<f64>,
}

#[derive(Serialize)]
struct GridInfo {
    theta: f64,
    nodes: usize,
    p_max: f64,
    grading: f64,
    time_steps: usize,
    dt: f64,
}

#[derive(Serialize)]
struct SolveStats {
    iterations: usize,
    contractive: bool,
    max_ratio: Option<f64>,
    final_nu_norm: f64,
    final_increment: f64,
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'static str,
    config: &'a RunConfig,
    grid: GridInfo,
    solve: SolveStats,
    certificate: Certificate,
    warning: Option<String>,
}

pub fn solve(config: &RunConfig) -> Result<(), CliError> {
    prepare_out(config)?;
    let (problem, result) = solve_problem(config)?;
    let f = &result.f;
    let times = problem.times.times();
    let nodes = problem.grid.nodes();

    let borel: Vec<BorelRow> = (0..times.len())
        .flat_map(|n| {
            nodes.iter().enumerate().map(move |(i, &s)| {
                let v = f.value(n, i);
                BorelRow { t_index: n, t: times[n], s, re: v.re, im: v.im }
            })
        })
        .collect();
    write_table(&config.out, "solution_borel", &borel, config.format)?;

    let t_indices: Vec<usize> = (0..times.len()).collect();
    let physical: Vec<PhysicalRow> = recover_physical(f, &config.spec, &y_points(config), &t_indices)?
        .into_iter()
        .map(|p| PhysicalRow {
            t_index: p.t_index,
            t: p.t,
            y: p.y.re,
            f_re: p.f.re,
            f_im: p.f.im,
            tail: p.tail,
            x: p.x.map(|x| x.re),
            h_re: p.h.map(|h| h.re),
            h_im: p.h.map(|h| h.im),
        })
        .collect();
    write_table(&config.out, "solution_physical", &physical, config.format)?;
    write_table(&config.out, "iterations", &result.records(), config.format)?;

    let nu = config.spec.nu_run;
    let f0 = nu_norm(&problem.f0, nu).value;
    let certificate = model(config)?.evaluate(config.spec.t_final, nu, config.b, Some(f0), constants(config))?;
    let warning = (!certificate.satisfied).then(|| {
        format!("run is not certified at nu = {nu}: {}", certificate.reason.clone().unwrap_or_default())
    });
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        config,
        grid: GridInfo {
            theta: problem.grid.theta(),
            nodes: nodes.len(),
            p_max: problem.grid.p_max(),
            grading: problem.grid.grading(),
            time_steps: times.len() - 1,
            dt: problem.times.step(),
        },
        solve: SolveStats {
            iterations: result.iterations,
            contractive: result.contractive,
            max_ratio: result.max_ratio(),
            final_nu_norm: *result.nu_norm_history.last().expect("initial norm recorded"),
            final_increment: *result.increments.last().unwrap_or(&0.0),
        },
        certificate,
        warning,
    };
    write_json(&config.out, "manifest.json", &manifest)?;
    println!(
        "{}: {} iterations, max ratio {}, nu-norm {:.6e}",
        config.spec.example.name(),
        manifest.solve.iterations,
        manifest.solve.max_ratio.map_or("n/a".to_string(), |r| format!("{r:.3}")),
        manifest.solve.final_nu_norm
    );
    if let Some(w) = &manifest.warning {
        eprintln!("warning: {w}");
    }
    println!("wrote {}", config.out.display());
    Ok(())
}

pub fn certify(config: &RunConfig) -> Result<(), CliError> {
    prepare_out(config)?;
    let model = model(config)?;
    let rows = sweep(&model, &config.sweep_t, &config.sweep_nu, config.b, constants(config))?;
    let limits = thresholds(&model, &config.sweep_t, config.b, constants(config))?;
    match config.format {
        Format::Csv => {
            write_text(&config.out, "certificate.csv", &sweep_csv(&rows))?;
            write_table(&config.out, "thresholds", &limits, Format::Csv)?;
        }
        Format::Json => {
            write_json(&config.out, "certificate.json", &rows)?;
            write_json(&config.out, "thresholds.json", &limits)?;
        }
    }
    let certified = rows.iter().filter(|c| c.satisfied).count();
    println!("{certified}/{} cells certified", rows.len());
    for row in &limits {
        println!("T = {:e}: least certified nu = {:.6e}", row.t_final, row.nu_certified);
    }
    println!("wrote {}", config.out.display());
    Ok(())
}

#[derive(Serialize)]
struct CheckRow {
    check: &'static str,
    t: f64,
    y: f64,
    relative: f64,
    tolerance: f64,
    passed: bool,
}

/// Interior time indices at fractions 1/4 to 3/4 of the run, away from the ends for the time stencil.
fn residual_indices(steps: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = [2, 3, 4, 5, 6].iter().map(|k| (k * steps + 4) / 8).filter(|&n| n >= 2 && n + 2 <= steps).collect();
    idx.dedup();
    idx
}

pub fn validate(config: &RunConfig) -> Result<(), CliError> {
    prepare_out(config)?;
    let (problem, result) = solve_problem(config)?;
    let ys = y_points(config);
    let steps = problem.times.len() - 1;
    let idx = residual_indices(steps);
    if idx.is_empty() {
        return Err(CliError::Config(format!("time-steps: need at least 8 for validation, got {steps}")));
    }
    let mut rows = Vec::new();
    for p in pde_residual(&result.f, &problem.coefficients, config.spec.nu_run, &ys, &idx)? {
        rows.push(CheckRow { check: "pde_residual", t: p.t, y: p.y.re, relative: p.relative, tolerance: PDE_TOL, passed: p.relative < PDE_TOL });
    }
    let t_final = config.spec.t_final;
    // (similarity time exponent b, default outer radius)
    let similarity = match config.spec.example {
        Example::Ex1 { gamma } => Some((1.0 / (3.0 * (1.0 - gamma)), 1e4)),
        Example::Ex3 { delta, .. } => Some((1.0 / (3.0 * (1.0 + delta)), 200.0)),
        _ => None,
    };
    if let (Some((b, eta_default)), true) = (similarity, t_final > 0.0) {
        let sim_idx = [steps / 2, steps];
        let xs: Vec<f64> = ys
            .iter()
            .filter_map(|&y| x_of_y(&config.spec.example, y, 0.0))
            .map(|x| x.norm())
            .collect();
        let t_min = problem.times.times()[sim_idx[0]];
        let x_max = xs.iter().copied().fold(0.0, f64::max);
        let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let eta_max = (1.01 * x_max / t_min.powf(b)).max(eta_default);
        let eta_min = (0.99 * x_min / t_final.powf(b)).min(1.0);
        let profile = match config.spec.example {
            Example::Ex1 { gamma } => similarity_ode_ex1(gamma, 0.0, eta_max, eta_min)?,
            Example::Ex3 { delta, .. } => similarity_ode_ex3(delta, 0.0, eta_max, eta_min)?,
            _ => unreachable!("similarity profiles exist for Examples 1 and 3"),
        };
        for c in compare_similarity(&result.f, &config.spec, &profile, &ys, &sim_idx)? {
            rows.push(CheckRow {
                check: "similarity",
                t: c.t,
                y: c.y.re,
                relative: c.relative,
                tolerance: SIMILARITY_TOL,
                passed: c.relative < SIMILARITY_TOL,
            });
        }
    }
    write_table(&config.out, "validation", &rows, config.format)?;
    let failed = rows.iter().filter(|r| !r.passed).count();
    for check in ["pde_residual", "similarity"] {
        let worst = rows.iter().filter(|r| r.check == check).map(|r| r.relative).reduce(f64::max);
        if let Some(w) = worst {
            println!("{check}: worst relative {w:.3e}");
        }
    }
    println!("wrote {}", config.out.display());
    if failed > 0 {
        return Err(CliError::Validation(format!("{failed} of {} checks exceed tolerance", rows.len())));
    }
    Ok(())
}

#[derive(Serialize)]
struct NormSummary {
    seed: u64,
    checks: usize,
    violations: usize,
    worst_banach: f64,
    worst_mixed: f64,
}

pub fn norms(config: &RunConfig) -> Result<(), CliError> {
    prepare_out(config)?;
    let suite = NormSuiteConfig { seed: config.seed, theta: config.spec.theta, nodes: config.spec.nodes, ..NormSuiteConfig::default() };
    let report = norm_suite(&suite)?;
    match config.format {
        Format::Json => write_json(&config.out, "norms.json", &report)?,
        Format::Csv => write_table(
            &config.out,
            "norms",
            &[NormSummary {
                seed: config.seed,
                checks: report.checks,
                violations: report.violations.len(),
                worst_banach: report.worst_banach,
                worst_mixed: report.worst_mixed,
            }],
            Format::Csv,
        )?,
    }
    println!(
        "{} checks, {} violations, worst ratios {:.6} (algebra) {:.6} (pointwise)",
        report.checks,
        report.violations.len(),
        report.worst_banach,
        report.worst_mixed
    );
    if !report.passed() {
        return Err(CliError::Validation(format!("{} norm inequality violations", report.violations.len())));
    }
    Ok(())
}
