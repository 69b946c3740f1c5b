//! `orbitquant`: group inspection, orbit reports, quantization and verification from the shell.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 usage error, 3 internal error.

mod io;
mod symbol;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use orbitquant::catalog::{self, LISTED_IDS};
use orbitquant::lie::scalar::format_rat;
use orbitquant::lie::{parse_rat, Group, LieAlgebraSpec};
use orbitquant::orbits::{orbit_report, FlatStructure};
use orbitquant::quantize::{
    op_g_gstar_apply, op_group_apply, pedersen_quantize, verify_suite, weyl_lambda, Axis, GridND, OperatorSymbol, SectionOptions,
    Suite, VerifyConfig,
};
use orbitquant::repcalc::{GridOperator, RepChart, RepGrid, RepModel};
use orbitquant::spectral::C64;
use orbitquant::symclasses::{seminorm_estimate, SeminormSpec};

#[derive(Debug)]
pub struct CliError {
    pub(crate) code: u8,
    msg: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError { code: 2, msg: msg.into() }
    }

    pub fn internal(e: impl std::fmt::Display) -> Self {
        CliError { code: 3, msg: e.to_string() }
    }
}

impl From<orbitquant::Error> for CliError {
    fn from(e: orbitquant::Error) -> Self {
        use orbitquant::Error as E;
        let code = match e {
            E::Parse(_) | E::UnknownGroup(_) | E::Dimension { .. } | E::InvalidAlgebra(_) | E::NoRepresentation(_) | E::Io(_) => 2,
            E::Unsupported(_) | E::NotFlat(_) | E::Degenerate(_) | E::Grid(_) | E::SupportMargin(_) => 2,
            _ => 3,
        };
        CliError { code, msg: e.to_string() }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "orbitquant", version, about = "Quantization on nilpotent Lie groups with flat coadjoint orbits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List or inspect built-in groups.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Coadjoint orbit through a point of the dual.
    Orbits {
        /// Catalog id or group-definition file.
        group: String,
        /// Comma-separated rational coordinates of the point.
        #[arg(long)]
        point: Option<String>,
        /// Print the Pfaffian polynomial of the flat orbits.
        #[arg(long)]
        pfaffian: bool,
    },
    /// Representations on a sampled line.
    Rep {
        group: String,
        /// First central coordinate.
        #[arg(long, allow_negative_numbers = true)]
        sigma: Option<f64>,
        /// Second central coordinate.
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<f64>,
        /// All central coordinates, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Representation grid `M,L`.
        #[arg(long, default_value = "64,8")]
        grid: String,
        #[command(subcommand)]
        action: RepAction,
    },
    /// Apply a quantized operator to sampled input.
    Quantize {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        scheme: Scheme,
        /// Symbol as JSON, or `@file.json`.
        #[arg(long)]
        symbol: String,
        /// Input samples (CSV with coordinate columns, re, im).
        #[arg(long)]
        apply: PathBuf,
        /// Output points (CSV with coordinate columns); defaults to the input points.
        #[arg(long)]
        at: Option<PathBuf>,
        /// Central coordinates of the orbit for `pedersen` and `weyl`.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Representation grid `M,L`.
        #[arg(long, default_value = "64,8")]
        grid: String,
        /// `𝔷*` grid `half,n` per central axis for `group`.
        #[arg(long, default_value = "12,64")]
        zgrid: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "all")]
        suite: String,
        /// Representation grid `M,L` for the orbit calculus.
        #[arg(long)]
        grid: Option<String>,
        /// Representation grid `M,L` for operator sections.
        #[arg(long)]
        section_grid: Option<String>,
        /// Nodes per central axis of the `𝔷*` grid.
        #[arg(long)]
        z_nodes: Option<usize>,
        /// Random points or pairs per sampled identity.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Skip the grid-refinement checks.
        #[arg(long)]
        no_refine: bool,
        /// Report path; printed to stdout when absent.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sampled symbol-class seminorms.
    Symclass {
        #[arg(long)]
        group: String,
        /// Joint symbol in `(x, 𝒳)` as JSON, or `@file.json`.
        #[arg(long)]
        symbol: String,
        #[arg(short = 'm', long = "order", allow_negative_numbers = true, default_value_t = 0.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Multi-index on the dual side, comma-separated.
        #[arg(long)]
        alpha: Option<String>,
        /// Multi-index on the group side, comma-separated.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        gamma: f64,
        /// Group sample points `x;x;...` with comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        x_points: Option<String>,
        /// Central sample points `z;z;...`.
        #[arg(long, allow_hyphen_values = true)]
        z_points: Option<String>,
        #[arg(long, default_value = "64,8")]
        grid: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Built-in group ids.
    List,
    /// Structure and reference data of one group.
    Show {
        id: String,
        /// Also write the group-definition file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RepAction {
    /// `π(x)φ` for sampled `φ`.
    Apply {
        /// Group element, comma-separated in basis order.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        /// CSV with columns `q, re, im` on the grid nodes.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    /// `Op_{G×𝔤*}` with the exact group law.
    Kn,
    /// `Op_{G×𝔷*}` with Pedersen sections on each orbit.
    Group,
    /// Pedersen quantization on one orbit.
    Pedersen,
    /// λ-Weyl quantization on one orbit.
    Weyl,
}

fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::usage(format!("{t:?} is not a number"))))
        .collect()
}

fn parse_indices(s: &str) -> CliResult<Vec<u32>> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| CliError::usage(format!("{t:?} is not a non-negative integer"))))
        .collect()
}

fn parse_points(s: &str) -> CliResult<Vec<Vec<f64>>> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_list).collect()
}

fn parse_grid(s: &str) -> CliResult<(usize, f64)> {
    let (m, l) = s.split_once(',').ok_or_else(|| CliError::usage(format!("grid {s:?} must be M,L")))?;
    let m = m.trim().parse().map_err(|_| CliError::usage(format!("bad M in {s:?}")))?;
    let l = l.trim().parse().map_err(|_| CliError::usage(format!("bad L in {s:?}")))?;
    Ok((m, l))
}

fn rep_grid(s: &str) -> CliResult<RepGrid> {
    let (m, l) = parse_grid(s)?;
    Ok(RepGrid::new(m, l)?)
}

fn load_spec(reference: &str) -> CliResult<LieAlgebraSpec> {
    Ok(catalog::resolve(reference)?)
}

fn print_json(v: &impl serde::Serialize) -> CliResult<()> {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).map_err(CliError::internal)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::internal(e)),
        _ => Ok(()),
    }
}

fn write_json(path: &Path, v: &impl serde::Serialize) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v).map_err(CliError::internal)?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn central_point(model: &RepModel, sigma: Option<f64>, tau: Option<f64>, z: Option<&str>) -> CliResult<Vec<f64>> {
    let z = match z {
        Some(s) => parse_list(s)?,
        None => [sigma, tau].into_iter().flatten().collect(),
    };
    if z.len() != model.m() {
        return Err(CliError::usage(format!("this group needs {} central coordinates, got {}", model.m(), z.len())));
    }
    Ok(z)
}

fn cmd_catalog(action: CatalogAction) -> CliResult<u8> {
    match action {
        CatalogAction::List => {
            let rows: Vec<Value> = LISTED_IDS
                .iter()
                .map(|id| {
                    let e = catalog::load(id).expect("listed ids load");
                    json!({ "id": id, "dim": e.spec.dim, "step": e.spec.step, "description": e.description })
                })
                .collect();
            print_json(&rows)?;
        }
        CatalogAction::Show { id, export } => {
            let e = catalog::load(&id)?;
            let spec = &e.spec;
            let flat = FlatStructure::new(spec).ok();
            let central_labels: Vec<String> =
                flat.as_ref().map(|f| f.central.iter().map(|&i| spec.labels[i].clone()).collect()).unwrap_or_default();
            let file = spec.to_file();
            let out = json!({
                "id": e.id,
                "description": e.description,
                "dim": spec.dim,
                "step": spec.step,
                "labels": spec.labels,
                "weights": spec.weights,
                "jh_order": spec.jh_order,
                "brackets": file.brackets,
                "pfaffian": flat.as_ref().map(|f| f.pf.display(&central_labels)),
                "plancherel_density": format!("{}·|Pf|", format_rat(&e.golden.plancherel_constant)),
                "rockland": e.golden.rockland.as_ref().map(|r| r.display(&spec.labels)),
                "has_rep": e.has_rep,
            });
            print_json(&out)?;
            if let Some(path) = export {
                std::fs::write(&path, spec.to_toml()).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            }
        }
    }
    Ok(0)
}

fn cmd_orbits(group: &str, point: Option<&str>, pf: bool) -> CliResult<u8> {
    let spec = load_spec(group)?;
    if pf {
        let flat = FlatStructure::new(&spec)?;
        let names: Vec<String> = flat.central.iter().map(|&i| spec.labels[i].clone()).collect();
        println!("{}", flat.pf.display(&names));
        if point.is_none() {
            return Ok(0);
        }
    }
    let point = point.ok_or_else(|| CliError::usage("--point or --pfaffian is required"))?;
    let u = point.split(',').map(|t| parse_rat(t.trim())).collect::<Result<Vec<_>, _>>()?;
    let g = Group::new(spec)?;
    let report = orbit_report(&g, &u)?;
    let mut v = serde_json::to_value(&report).map_err(CliError::internal)?;
    if let Value::Object(map) = &mut v {
        let pf = map.remove("pfaffian").unwrap_or(Value::Null);
        map.insert("Pf".into(), pf);
        map.insert("group".into(), json!(group));
    }
    print_json(&v)?;
    Ok(0)
}

fn cmd_rep(group: &str, z: Vec<f64>, model: &RepModel, grid: RepGrid, action: RepAction) -> CliResult<u8> {
    let chart = RepChart::new(model, grid, &z)?;
    match action {
        RepAction::Apply { element, input, output } => {
            let x = parse_list(&element)?;
            let phi = read_line_samples(&input, grid)?;
            let out = chart.apply(&x, &phi)?;
            let nodes: Vec<Vec<f64>> = grid.nodes().into_iter().map(|q| vec![q]).collect();
            io::write_samples(output.as_deref(), &["q".to_string()], &nodes, &out)?;
            let _ = group;
        }
    }
    Ok(0)
}

/// Samples on the representation grid, one row per node.
fn read_line_samples(path: &Path, grid: RepGrid) -> CliResult<Vec<C64>> {
    let s = io::read_samples(path, 1)?;
    if s.points.len() != grid.m {
        return Err(CliError::usage(format!("expected {} rows on the grid nodes, found {}", grid.m, s.points.len())));
    }
    let h = grid.h();
    let mut phi = vec![C64::new(0.0, 0.0); grid.m];
    let mut seen = vec![false; grid.m];
    for (p, v) in s.points.iter().zip(&s.values) {
        let k = ((p[0] + grid.l) / h).round();
        if k < 0.0 || k as usize >= grid.m || (grid.node(k as usize) - p[0]).abs() > 1e-9 * h.max(1.0) || seen[k as usize] {
            return Err(CliError::usage(format!("q = {} is not an unused grid node (step {h}, start {})", p[0], -grid.l)));
        }
        seen[k as usize] = true;
        phi[k as usize] = *v;
    }
    Ok(phi)
}

#[allow(clippy::too_many_arguments)]
fn cmd_quantize(
    group: &str,
    scheme: Scheme,
    symbol: &str,
    apply: &Path,
    at: Option<&Path>,
    z: Option<&str>,
    grid: &str,
    zgrid: &str,
    output: Option<&Path>,
) -> CliResult<u8> {
    let spec = load_spec(group)?;
    let n = spec.dim;
    match scheme {
        Scheme::Kn | Scheme::Group => {
            let g = Group::new(spec.clone())?;
            let field = symbol::field(symbol, n)?;
            let samples = io::read_samples(apply, n)?;
            let u = io::to_grid_function(&samples)?;
            let xs = match at {
                Some(p) => io::read_points(p, n)?,
                None => samples.points.clone(),
            };
            let values = if let Scheme::Kn = scheme {
                op_g_gstar_apply(&g, field.as_ref(), &u, &xs)?
            } else {
                let model = RepModel::new(&spec)?;
                let rep = rep_grid(grid)?;
                let (half, nodes) = match parse_list(zgrid)?.as_slice() {
                    [h, n] if n.fract() == 0.0 && *n >= 1.0 => (*h, *n as usize),
                    _ => return Err(CliError::usage(format!("zgrid {zgrid:?} must be half,n"))),
                };
                let zg = GridND::new((0..model.m()).map(|_| Axis::centered(half, nodes)).collect::<Result<Vec<_>, _>>()?)?;
                let sym = OperatorSymbol::Pedersen { f: field.as_ref(), model: &model, rep, zgrid: &zg, opts: SectionOptions::default() };
                op_group_apply(&g, &sym, &u, &xs)?
            };
            let names: Vec<String> = samples.header[..n].to_vec();
            io::write_samples(output, &names, &xs, &values)?;
        }
        Scheme::Pedersen | Scheme::Weyl => {
            let model = RepModel::new(&spec)?;
            let rep = rep_grid(grid)?;
            let zc = central_point(&model, None, None, Some(z.ok_or_else(|| CliError::usage("--z is required for this scheme"))?))?;
            let sym = symbol::gauss(symbol, 2)?;
            let op: GridOperator = match scheme {
                Scheme::Pedersen => {
                    let chart = RepChart::new(&model, rep, &zc)?;
                    pedersen_quantize(&chart, |r, t| sym.value(&[r, t]))?
                }
                _ => weyl_lambda(rep, model.lambda(&zc), |eta, v| sym.value(&[eta, v]))?,
            };
            let phi = read_line_samples(apply, rep)?;
            let out: Vec<C64> = (0..op.nrows()).map(|i| (0..op.ncols()).map(|j| op[(i, j)] * phi[j]).sum()).collect();
            let nodes: Vec<Vec<f64>> = rep.nodes().into_iter().map(|q| vec![q]).collect();
            io::write_samples(output, &["q".to_string()], &nodes, &out)?;
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    group: &str,
    suite: &str,
    grid: Option<&str>,
    section_grid: Option<&str>,
    z_nodes: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
    no_refine: bool,
    json_path: Option<&Path>,
) -> CliResult<u8> {
    let suite = Suite::parse(suite).map_err(|e| CliError::usage(e.to_string()))?;
    let mut cfg = VerifyConfig::default();
    if let Some(g) = grid {
        cfg.pedersen_grid = parse_grid(g)?;
    }
    if let Some(g) = section_grid {
        cfg.section_grid = parse_grid(g)?;
    }
    if let Some(n) = z_nodes {
        cfg.z_nodes = n;
    }
    if let Some(n) = samples {
        cfg.samples = n;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.refine = !no_refine;
    let emit = |v: &Value| -> CliResult<()> {
        match json_path {
            Some(p) => write_json(p, v),
            None => print_json(v),
        }
    };
    let spec = match load_spec(group) {
        Ok(s) => s,
        Err(e) => {
            emit(&json!({ "schema": orbitquant::quantize::verify::SCHEMA, "group": group, "suite": suite, "config": cfg, "error": e.msg }))?;
            return Err(e);
        }
    };
    match verify_suite(group, &spec, suite, &cfg) {
        Ok(report) => {
            emit(&serde_json::to_value(&report).map_err(CliError::internal)?)?;
            for c in report.checks.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}: {:.3e} (tolerance {:.0e}){}", c.name, c.max_rel_error, c.tolerance, c.note.as_deref().map(|n| format!(" {n}")).unwrap_or_default());
            }
            eprintln!("{} passed, {} failed", report.passed, report.failed);
            Ok(if report.pass { 0 } else { 1 })
        }
        Err(e) => {
            let e = CliError::from(e);
            emit(&json!({ "schema": orbitquant::quantize::verify::SCHEMA, "group": group, "suite": suite, "config": cfg, "error": e.msg }))?;
            Err(e)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_symclass(
    group: &str,
    symbol: &str,
    m: f64,
    rho: f64,
    delta: f64,
    alpha: Option<&str>,
    beta: Option<&str>,
    gamma: f64,
    x_points: Option<&str>,
    z_points: Option<&str>,
    grid: &str,
    json_path: Option<&Path>,
) -> CliResult<u8> {
    let spec = load_spec(group)?;
    let n = spec.dim;
    let g = Group::new(spec.clone())?;
    let model = RepModel::new(&spec)?;
    let f = symbol::gauss(symbol, 2 * n)?;
    let alpha = alpha.map(parse_indices).transpose()?.unwrap_or_else(|| vec![0; n]);
    let beta = beta.map(parse_indices).transpose()?.unwrap_or_else(|| vec![0; n]);
    let xs = x_points.map(parse_points).transpose()?.unwrap_or_else(|| vec![vec![0.0; n]]);
    let zs = match z_points {
        Some(s) => parse_points(s)?,
        None => {
            let k = model.lambda_coeffs.iter().position(|v| *v != 0.0).unwrap_or(0);
            [0.5, 1.0, 2.0, -1.0]
                .iter()
                .map(|l| {
                    let mut z = vec![0.0; model.m()];
                    z[k] = l / model.lambda_coeffs[k];
                    z
                })
                .collect()
        }
    };
    let (rep_m, rep_l) = parse_grid(grid)?;
    let s = SeminormSpec { m, rho, delta, alpha, beta, gamma, xs, zs, rep_m, rep_l };
    let report = seminorm_estimate(&g, &f, &s)?;
    let out = json!({ "group": group, "spec": s, "report": report });
    match json_path {
        Some(p) => write_json(p, &out)?,
        None => print_json(&out)?,
    }
    Ok(0)
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Catalog { action } => cmd_catalog(action),
        Command::Orbits { group, point, pfaffian } => cmd_orbits(&group, point.as_deref(), pfaffian),
        Command::Rep { group, sigma, tau, z, grid, action } => {
            let spec = load_spec(&group)?;
            let model = RepModel::new(&spec)?;
            let zc = central_point(&model, sigma, tau, z.as_deref())?;
            cmd_rep(&group, zc, &model, rep_grid(&grid)?, action)
        }
        Command::Quantize { group, scheme, symbol, apply, at, z, grid, zgrid, output } => {
            cmd_quantize(&group, scheme, &symbol, &apply, at.as_deref(), z.as_deref(), &grid, &zgrid, output.as_deref())
        }
        Command::Verify { group, suite, grid, section_grid, z_nodes, samples, seed, no_refine, json } => cmd_verify(
            &group,
            &suite,
            grid.as_deref(),
            section_grid.as_deref(),
            z_nodes,
            samples,
            seed,
            no_refine,
            json.as_deref(),
        ),
        Command::Symclass { group, symbol, m, rho, delta, alpha, beta, gamma, x_points, z_points, grid, json } => cmd_symclass(
            &group,
            &symbol,
            m,
            rho,
            delta,
            alpha.as_deref(),
            beta.as_deref(),
            gamma,
            x_points.as_deref(),
            z_points.as_deref(),
            &grid,
            json.as_deref(),
        ),
    }
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("ORBITQUANT_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| CliError::usage(format!("ORBITQUANT_THREADS={v:?} is not a positive integer")))?;
        if n == 0 {
            return Err(CliError::usage("ORBITQUANT_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(CliError::internal)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = configure_threads().and_then(|_| run(cli));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
