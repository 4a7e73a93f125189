//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 non-convergence or I/O
//! error, 3 validation failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::exact::exact_energy;
use crate::materials::{MaterialModel, Response};
use crate::output::{emit, Format, Row};
use crate::pws::{oracle_pws, pws_energy, pws_long_range, GeometryKind, GeometrySpec, PerUnit};
use crate::quadrature::QuadratureConfig;
use crate::ratios::{
    default_eps_grid, find_extremum, log_grid, ratio_long_range, ratio_sphere_pws_limits, sign_changes, sweep,
    SweepSpec, LARGE_SPHERE_L_OVER_R, SMALL_SPHERE_L_OVER_R,
};
use crate::validation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "casimir-pws", version, about = "Pairwise-summation versus exact Casimir energies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Relative tolerance of the adaptive quadratures.
    #[arg(long = "rel-tol", global = true)]
    rel_tol: Option<f64>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Length unit in metres; energies are then reported in J (J/m² per area)
    /// and lengths in m.
    #[arg(long = "unit-length", global = true)]
    unit_length: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Pws,
    Exact,
    Oracle,
    LongRange,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Energy of one configuration.
    Energy(EnergyArgs),
    /// Long-range PWS/exact ratio over a log grid of static permittivities.
    SweepEps(SweepEpsArgs),
    /// Long-range PWS/exact ratio over a log grid of relative thicknesses.
    SweepThickness(SweepThicknessArgs),
    /// Maximum of the long-range ratio over ε(0).
    FindMax(FindMaxArgs),
    /// Runs the acceptance criteria.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
struct MaterialArgs {
    /// Static permittivity.
    #[arg(long)]
    eps: Option<f64>,
    /// Lorentz permittivity as `eps0,u_res`.
    #[arg(long = "eps-lorentz")]
    eps_lorentz: Option<String>,
    /// Static reduced polarizability of the constituents.
    #[arg(long)]
    alpha: Option<f64>,
    /// Number density of the constituents.
    #[arg(long, default_value_t = 1.0)]
    nv: f64,
    #[arg(long = "perfect-mirror")]
    perfect_mirror: bool,
}

#[derive(Debug, Clone, Args)]
struct GeometryArgs {
    #[arg(long)]
    geometry: String,
    /// Surface separation.
    #[arg(long = "L")]
    l: Option<f64>,
    #[arg(long = "eA")]
    e_a: Option<f64>,
    #[arg(long = "eB")]
    e_b: Option<f64>,
    /// Sphere radius.
    #[arg(long = "R")]
    r: Option<f64>,
    /// Distance from the sphere center to the slab surface.
    #[arg(long = "Lcenter")]
    l_center: Option<f64>,
}

#[derive(Debug, Args)]
struct EnergyArgs {
    #[command(flatten)]
    geometry: GeometryArgs,
    #[command(flatten)]
    material: MaterialArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Pws)]
    method: MethodArg,
    /// Also report the PWS/exact ratio.
    #[arg(long)]
    ratio: bool,
}

#[derive(Debug, Args)]
struct SweepEpsArgs {
    #[arg(long)]
    geometry: String,
    /// Relative thicknesses e/L (slab geometries), comma separated.
    #[arg(long = "e-rel", value_delimiter = ',')]
    e_rel: Vec<f64>,
    /// Surface separation over radius (sphere–plate), comma separated.
    #[arg(long = "l-over-r", value_delimiter = ',')]
    l_over_r: Vec<f64>,
    #[arg(long = "eps-min", default_value_t = 1.001)]
    eps_min: f64,
    #[arg(long = "eps-max", default_value_t = 1e6)]
    eps_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, default_value_t = 1.0)]
    nv: f64,
    /// Accepted for symmetry with `energy`; sweeps always report the ratio.
    #[arg(long)]
    ratio: bool,
}

#[derive(Debug, Args)]
struct SweepThicknessArgs {
    #[arg(long)]
    geometry: String,
    #[command(flatten)]
    material: MaterialArgs,
    #[arg(long = "e-min", default_value_t = 1e-2)]
    e_min: f64,
    #[arg(long = "e-max", default_value_t = 1e2)]
    e_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long)]
    ratio: bool,
}

#[derive(Debug, Args)]
struct FindMaxArgs {
    #[arg(long)]
    geometry: String,
    #[arg(long = "e-rel")]
    e_rel: Option<f64>,
    #[arg(long, default_value_t = 1.001)]
    lo: f64,
    #[arg(long, default_value_t = 1e6)]
    hi: f64,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Run a single criterion.
    #[arg(long)]
    criterion: Option<u8>,
}

struct Outcome {
    rows: Vec<Row>,
    per_unit: PerUnit,
    validation_failed: bool,
}

impl Outcome {
    fn rows(rows: Vec<Row>, per_unit: PerUnit) -> Self {
        Outcome { rows, per_unit, validation_failed: false }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Quadrature(_) | Error::SpecialFunction(_) | Error::NoExtremum { .. } => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let mut cfg = QuadratureConfig::default();
    if let Some(t) = cli.rel_tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Usage(format!("--rel-tol must be in (0, 1), got {t}")));
        }
        cfg = cfg.with_rel_tol(t);
    }
    if let Some(u) = cli.unit_length {
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::Usage(format!("--unit-length must be positive, got {u}")));
        }
    }
    let outcome = match cli.jobs {
        Some(0) => return Err(Error::Usage("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {n} worker threads: {e}")))?
            .install(|| dispatch(&cli.command, &cfg))?,
        None => dispatch(&cli.command, &cfg)?,
    };

    let rows: Vec<Row> = match cli.unit_length {
        Some(u) => outcome.rows.into_iter().map(|r| r.to_si(u, outcome.per_unit)).collect(),
        None => outcome.rows,
    };
    let format = match cli.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    if !matches!(cli.command, Command::Validate(_)) {
        if let Err(e) = emit(&rows, format, cli.out.as_deref()) {
            eprintln!("error: cannot write output: {e}");
            return Ok(EXIT_NUMERIC);
        }
    }
    if outcome.validation_failed {
        return Ok(EXIT_VALIDATION);
    }
    let unconverged = rows.iter().filter(|r| !r.converged).count();
    if unconverged > 0 {
        eprintln!("error: {unconverged} result(s) did not reach the requested tolerance");
        return Ok(EXIT_NUMERIC);
    }
    Ok(EXIT_OK)
}

fn dispatch(command: &Command, cfg: &QuadratureConfig) -> Result<Outcome> {
    match command {
        Command::Energy(a) => energy(a, cfg),
        Command::SweepEps(a) => sweep_eps(a, cfg),
        Command::SweepThickness(a) => sweep_thickness(a, cfg),
        Command::FindMax(a) => find_max(a, cfg),
        Command::Validate(a) => validate(a, cfg),
    }
}

fn parse_kind(s: &str) -> Result<GeometryKind> {
    s.parse()
}

fn parse_response(m: &MaterialArgs) -> Result<Response> {
    let given = [m.eps.is_some(), m.eps_lorentz.is_some(), m.alpha.is_some(), m.perfect_mirror]
        .iter()
        .filter(|b| **b)
        .count();
    if given != 1 {
        return Err(Error::Usage(
            "give exactly one of --eps, --eps-lorentz, --alpha, --perfect-mirror".into(),
        ));
    }
    if let Some(eps0) = m.eps {
        return Ok(if eps0 == f64::INFINITY { Response::PerfectMirror } else { Response::Static { eps0 } });
    }
    if let Some(s) = &m.eps_lorentz {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let nums: Vec<f64> = parts.iter().filter_map(|p| p.parse().ok()).collect();
        return match (parts.len(), nums.as_slice()) {
            (2, [eps0, u_res]) => Ok(Response::LorentzEps { eps0: *eps0, u_res: *u_res }),
            _ => Err(Error::Usage(format!("--eps-lorentz expects eps0,u_res, got {s:?}"))),
        };
    }
    if let Some(a0) = m.alpha {
        return Ok(Response::StaticAlpha { a0 });
    }
    Ok(Response::PerfectMirror)
}

fn parse_material(m: &MaterialArgs) -> Result<MaterialModel> {
    Ok(MaterialModel::new(parse_response(m)?, m.nv)?)
}

fn required(v: Option<f64>, flag: &str, kind: GeometryKind) -> Result<f64> {
    v.ok_or_else(|| Error::Usage(format!("{kind} needs {flag}")))
}

fn parse_geometry(g: &GeometryArgs) -> Result<GeometrySpec> {
    let kind = parse_kind(&g.geometry)?;
    let l = || required(g.l, "--L", kind);
    let e_a = || required(g.e_a, "--eA", kind);
    let sphere = || -> Result<(f64, f64)> {
        let r = required(g.r, "--R", kind)?;
        let lc = match (g.l_center, g.l) {
            (Some(lc), _) => lc,
            (None, Some(l)) => l + r,
            (None, None) => return Err(Error::Usage(format!("{kind} needs --Lcenter or --L"))),
        };
        Ok((lc, r))
    };
    let spec = match kind {
        GeometryKind::AtomAtom => GeometrySpec::AtomAtom { d: l()? },
        GeometryKind::AtomSlab => GeometrySpec::AtomSlab { l: l()?, e_a: e_a()? },
        GeometryKind::AtomPlate => GeometrySpec::AtomPlate { l: l()? },
        GeometryKind::SlabSlab => {
            let e_a = e_a()?;
            GeometrySpec::SlabSlab { l: l()?, e_a, e_b: g.e_b.unwrap_or(e_a) }
        }
        GeometryKind::PlatePlate => GeometrySpec::PlatePlate { l: l()? },
        GeometryKind::SphereSlab => {
            let (l_center, radius) = sphere()?;
            GeometrySpec::SphereSlab { l_center, radius, e_a: e_a()? }
        }
        GeometryKind::SpherePlate => {
            let (l_center, radius) = sphere()?;
            GeometrySpec::SpherePlate { l_center, radius }
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn eps_column(m: &MaterialModel) -> Option<f64> {
    m.eps_iu(0.0).ok().filter(|e| e.is_finite())
}

fn energy(a: &EnergyArgs, cfg: &QuadratureConfig) -> Result<Outcome> {
    let geometry = parse_geometry(&a.geometry)?;
    let m = parse_material(&a.material)?;
    let result = match a.method {
        MethodArg::Pws => pws_energy(geometry, &m, &m, cfg)?,
        MethodArg::Exact => exact_energy(geometry, &m, &m, cfg)?,
        MethodArg::Oracle => oracle_pws(geometry, &m, &m, cfg)?,
        MethodArg::LongRange => pws_long_range(geometry, &m, &m)?,
    };
    let ratio = if a.ratio { energy_ratio(geometry, &m, a.method, cfg)? } else { None };
    let row = Row::from_energy(&result, eps_column(&m), ratio);
    if ratio.is_none() && a.ratio {
        eprintln!("warning: no exact value for this configuration; ratio is NA");
    }
    Ok(Outcome::rows(vec![row], geometry.per_unit()))
}

/// PWS over exact at the requested configuration. Long-range requests use
/// the static closed forms on both sides; spheres only within the anchor
/// limits.
fn energy_ratio(
    geometry: GeometrySpec,
    m: &MaterialModel,
    method: MethodArg,
    cfg: &QuadratureConfig,
) -> Result<Option<f64>> {
    let kind = geometry.kind();
    let e_rel = match geometry {
        GeometrySpec::AtomSlab { l, e_a } => Some(e_a / l),
        GeometrySpec::SlabSlab { l, e_a, e_b } if e_a == e_b => Some(e_a / l),
        _ => None,
    };
    match geometry {
        GeometrySpec::SpherePlate { l_center, radius } => {
            let l_over_r = (l_center - radius) / radius;
            if l_over_r < SMALL_SPHERE_L_OVER_R && l_over_r > LARGE_SPHERE_L_OVER_R {
                return Ok(None);
            }
            Ok(ratio_sphere_pws_limits(m, l_over_r, cfg)?.ratio)
        }
        GeometrySpec::SphereSlab { .. } => Ok(None),
        GeometrySpec::SlabSlab { e_a, e_b, .. } if method == MethodArg::LongRange && e_a != e_b => Ok(None),
        _ if method == MethodArg::LongRange && kind != GeometryKind::AtomAtom => {
            Ok(ratio_long_range(kind, m, e_rel, cfg)?.ratio)
        }
        _ => {
            let pws = pws_energy(geometry, m, m, cfg)?.value;
            let exact = exact_energy(geometry, m, m, cfg)?.value;
            Ok(Some(pws / exact))
        }
    }
}

fn sweep_eps(a: &SweepEpsArgs, cfg: &QuadratureConfig) -> Result<Outcome> {
    let kind = parse_kind(&a.geometry)?;
    let grid = if a.points == 0 {
        return Ok(Outcome::rows(Vec::new(), PerUnit::Total));
    } else if a.points == 200 && a.eps_min == 1.001 && a.eps_max == 1e6 {
        default_eps_grid()
    } else {
        log_grid(a.eps_min, a.eps_max, a.points)?
    };
    let parameters = match kind {
        GeometryKind::SpherePlate => a.l_over_r.clone(),
        _ => a.e_rel.clone(),
    };
    let mut spec = SweepSpec::new(kind, grid, parameters);
    spec.number_density = a.nv;
    ratio_rows(&spec, cfg)
}

fn sweep_thickness(a: &SweepThicknessArgs, cfg: &QuadratureConfig) -> Result<Outcome> {
    let kind = parse_kind(&a.geometry)?;
    if !matches!(kind, GeometryKind::AtomSlab | GeometryKind::SlabSlab) {
        return Err(Error::Usage(format!("sweep-thickness needs a slab geometry, got {kind}")));
    }
    let m = parse_material(&a.material)?;
    let params = if a.points == 0 { Vec::new() } else { log_grid(a.e_min, a.e_max, a.points)? };
    if params.is_empty() {
        return Ok(Outcome::rows(Vec::new(), PerUnit::Total));
    }
    let spec = SweepSpec {
        geometry: kind,
        material: m.response,
        number_density: m.number_density,
        eps_grid: Vec::new(),
        parameters: params,
    };
    ratio_rows(&spec, cfg)
}

fn ratio_rows(spec: &SweepSpec, cfg: &QuadratureConfig) -> Result<Outcome> {
    let points = sweep(spec, cfg)?;
    for block in points.chunk_by(|a, b| a.e_rel == b.e_rel && a.l_over_r == b.l_over_r) {
        let crossings = sign_changes(block);
        if crossings.len() > 1 {
            eprintln!("note: ratio crosses 1 in {} intervals", crossings.len());
        }
    }
    let rows = points.iter().map(Row::from_ratio).collect();
    Ok(Outcome::rows(rows, PerUnit::Total))
}

fn find_max(a: &FindMaxArgs, cfg: &QuadratureConfig) -> Result<Outcome> {
    let kind = parse_kind(&a.geometry)?;
    let curve = |eps0: f64| -> Result<f64> {
        let m = crate::ratios::material_from_eps(eps0)?;
        let p = ratio_long_range(kind, &m, a.e_rel, cfg)?;
        p.ratio.ok_or_else(|| Error::Usage(format!("no ratio for {kind}")))
    };
    let ext = find_extremum(curve, a.lo, a.hi)?;
    if ext.brackets.len() > 1 {
        eprintln!("note: {} local maxima in [{}, {}]; reporting the largest", ext.brackets.len(), a.lo, a.hi);
    }
    let m = crate::ratios::material_from_eps(ext.x)?;
    let p = ratio_long_range(kind, &m, a.e_rel, cfg)?;
    let mut row = Row::from_ratio(&p);
    row.method = "ratio-max".to_string();
    row.ratio = Some(ext.value);
    Ok(Outcome::rows(vec![row], PerUnit::Total))
}

fn validate(a: &ValidateArgs, cfg: &QuadratureConfig) -> Result<Outcome> {
    let outcomes = match a.criterion {
        Some(id) => vec![validation::run_criterion(id, cfg).ok_or_else(|| {
            Error::Usage(format!("no criterion {id}; there are {}", validation::criterion_count()))
        })?],
        None => validation::run_all(cfg),
    };
    for o in &outcomes {
        println!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed} of {} criteria passed", outcomes.len());
    Ok(Outcome { rows: Vec::new(), per_unit: PerUnit::Total, validation_failed: passed != outcomes.len() })
}
