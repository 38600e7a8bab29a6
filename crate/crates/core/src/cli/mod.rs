//! The `bose-eos` command line.
//!
//! stdout carries data, stderr diagnostics. Exit codes: 0 ok, 1 failed
//! verification check, 2 domain error, 3 convergence error, 4 config error.
//! `BOSE_EOS_THREADS` caps the worker threads used by sweeps and box sums.

pub mod config;
pub mod table;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::criticality::LandauModel;
use crate::error::{Error, Result};
use crate::gas::{GasSpec, UnitScale};
use crate::isobar::{critical_temperature_pressure, solve_gap_isobar};
use crate::isochore::{critical_temperature_density, solve_gap_isochore, Regime};

use config::ConfigFile;
use table::{fmt_num, Column, SweepRow, SweepTable, SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Convergence(_) => EXIT_CONVERGENCE,
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_DOMAIN,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bose-eos",
    version,
    about = "Ideal Bose gas equation of state, phase boundaries and critical analytics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical temperature at fixed density or pressure (JSON).
    Tc(TcArgs),
    /// Temperature sweep along an isochore or isobar (CSV or JSON).
    Sweep(SweepArgs),
    /// Landau-Ginzburg table at fixed density for a list of reduced temperatures (CSV).
    Landau(LandauArgs),
    /// Cross-module verification report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Spatial dimension d (real, > 0).
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Dispersion exponent sigma, 0 < sigma <= 2.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Particle mass (natural units, or kg with --units si).
    #[arg(long, allow_negative_numbers = true)]
    pub mass: Option<f64>,
    /// natural (hbar = k_B = 1) or si.
    #[arg(long)]
    pub units: Option<String>,
    /// Flat `key = value` config file; flags win on conflict.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstraintArgs {
    #[arg(long, conflicts_with = "pressure", allow_negative_numbers = true)]
    pub density: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub pressure: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TcArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub constraint: ConstraintArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub constraint: ConstraintArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub t_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    /// Read --t-min/--t-max as multiples of T_c.
    #[arg(long)]
    pub relative: bool,
    /// Comma-separated subset of T,t,r,mu,psi2,rho,P,regime.
    #[arg(long)]
    pub columns: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct LandauArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub density: Option<f64>,
    /// Comma-separated reduced temperatures.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t_list: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub level: Option<Level>,
    #[arg(long, conflicts_with_all = ["full", "level"])]
    pub quick: bool,
    #[arg(long, conflicts_with = "level")]
    pub full: bool,
    /// Optional config file, validated before any check runs.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let pool = match config::thread_cap().and_then(|cap| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cap {
            builder = builder.num_threads(n);
        }
        builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
    }) {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let result = pool.install(|| dispatch(&cli.command));
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: &Command) -> Result<(String, i32)> {
    match command {
        Command::Tc(args) => cmd_tc(args).map(|s| (s, EXIT_OK)),
        Command::Sweep(args) => cmd_sweep(args).map(|s| (s, EXIT_OK)),
        Command::Landau(args) => cmd_landau(args).map(|s| (s, EXIT_OK)),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn load_model(model: &ModelArgs) -> Result<(ConfigFile, GasSpec)> {
    let cfg = ConfigFile::load(model.config.as_deref())?;
    let spec = cfg.gas_spec(model.d, model.sigma, model.mass, model.units.as_deref())?;
    Ok((cfg, spec))
}

enum Constraint {
    Density(f64),
    Pressure(f64),
}

impl Constraint {
    fn resolve(cfg: &ConfigFile, args: &ConstraintArgs) -> Result<Self> {
        // a flag for one kind overrides a config entry for the other
        let density = cfg.real(args.density, "density")?;
        let pressure = cfg.real(args.pressure, "pressure")?;
        match (args.density, args.pressure, density, pressure) {
            (Some(rho), None, _, _) => Ok(Constraint::Density(rho)),
            (None, Some(p), _, _) => Ok(Constraint::Pressure(p)),
            (None, None, Some(rho), None) => Ok(Constraint::Density(rho)),
            (None, None, None, Some(p)) => Ok(Constraint::Pressure(p)),
            (None, None, Some(_), Some(_)) => Err(Error::Config("config sets both density and pressure".into())),
            _ => Err(Error::Config("one of --density or --pressure is required".into())),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Constraint::Density(_) => "density",
            Constraint::Pressure(_) => "pressure",
        }
    }

    /// Constraint value in natural units.
    fn natural(&self, scale: &UnitScale) -> f64 {
        match *self {
            Constraint::Density(rho) => scale.density_to_natural(rho),
            Constraint::Pressure(p) => scale.pressure_to_natural(p),
        }
    }

    fn user(&self) -> f64 {
        match *self {
            Constraint::Density(v) | Constraint::Pressure(v) => v,
        }
    }
}

#[derive(Debug, Serialize)]
struct TcReport {
    schema: &'static str,
    constraint: &'static str,
    value: f64,
    d: f64,
    sigma: f64,
    mass: f64,
    units: String,
    #[serde(rename = "T_c")]
    t_c: f64,
    regime: Regime,
}

pub fn cmd_tc(args: &TcArgs) -> Result<String> {
    let (cfg, spec) = load_model(&args.model)?;
    let constraint = Constraint::resolve(&cfg, &args.constraint)?;
    let scale = spec.unit_scale();
    let value = constraint.natural(&scale);
    let (t_c, regime) = match constraint {
        Constraint::Density(_) => match critical_temperature_density(&spec, value) {
            Ok(tc) => (scale.temperature_from_natural(tc), Regime::Critical),
            Err(Error::ZeroTemperatureBec { .. }) => (0.0, Regime::ZeroTemperatureBec),
            Err(e) => return Err(e),
        },
        Constraint::Pressure(_) => {
            (scale.temperature_from_natural(critical_temperature_pressure(&spec, value)?), Regime::Critical)
        }
    };
    let report = TcReport {
        schema: SCHEMA,
        constraint: constraint.name(),
        value: constraint.user(),
        d: spec.d,
        sigma: spec.sigma,
        mass: spec.mass,
        units: spec.units.to_string(),
        t_c,
        regime,
    };
    let mut s = serde_json::to_string_pretty(&report).map_err(|e| Error::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Builds the sweep table; temperatures and values in the spec's units.
pub fn sweep_table(args: &SweepArgs) -> Result<(SweepTable, Vec<Column>, Format)> {
    let (cfg, spec) = load_model(&args.model)?;
    let constraint = Constraint::resolve(&cfg, &args.constraint)?;
    let scale = spec.unit_scale();
    let value = constraint.natural(&scale);

    let t_min = cfg.real(args.t_min, "t_min")?.ok_or_else(|| Error::Config("missing --t-min".into()))?;
    let t_max = cfg.real(args.t_max, "t_max")?.ok_or_else(|| Error::Config("missing --t-max".into()))?;
    let points = cfg.count(args.points, "points")?.ok_or_else(|| Error::Config("missing --points".into()))?;
    let spacing = match cfg.string(None, "spacing") {
        _ if args.spacing.is_some() => args.spacing.unwrap(),
        Some(s) => Spacing::from_str(&s, true).map_err(|_| Error::Config(format!("unknown spacing '{s}'")))?,
        None => Spacing::Linear,
    };
    let relative = cfg.flag(args.relative, "relative")?;
    let columns = match cfg.string(args.columns.as_deref(), "columns") {
        Some(list) => Column::parse_list(&list)?,
        None => Column::ALL.to_vec(),
    };
    let format = match cfg.string(None, "format") {
        _ if args.format.is_some() => args.format.unwrap(),
        Some(s) => Format::from_str(&s, true).map_err(|_| Error::Config(format!("unknown format '{s}'")))?,
        None => Format::Csv,
    };
    if !(t_min > 0.0) || !(t_max >= t_min) || !t_max.is_finite() {
        return Err(Error::Config(format!("need 0 < t_min <= t_max, got [{t_min}, {t_max}]")));
    }
    if points < 2 {
        return Err(Error::Config(format!("need at least 2 points, got {points}")));
    }
    if !(value > 0.0) {
        return Err(Error::domain(format!("{} must be positive", constraint.name())));
    }

    let tc = match constraint {
        Constraint::Density(_) => critical_temperature_density(&spec, value)?,
        Constraint::Pressure(_) => critical_temperature_pressure(&spec, value)?,
    };
    let grid = temperature_grid(t_min, t_max, points, spacing)?;
    let temps: Vec<f64> =
        grid.into_iter().map(|x| if relative { x * tc } else { scale.temperature_to_natural(x) }).collect();

    let rows = temps
        .par_iter()
        .map(|&temp| sweep_row(&spec, &constraint, value, tc, temp, &scale))
        .collect::<Result<Vec<_>>>()?;

    let table = SweepTable {
        schema: SCHEMA,
        constraint: constraint.name(),
        value: constraint.user(),
        t_c: scale.temperature_from_natural(tc),
        rows,
    };
    Ok((table, columns, format))
}

fn sweep_row(
    spec: &GasSpec,
    constraint: &Constraint,
    value: f64,
    tc: f64,
    temp: f64,
    scale: &UnitScale,
) -> Result<SweepRow> {
    let user_t = scale.temperature_from_natural(temp);
    match constraint {
        Constraint::Density(_) => {
            let p = solve_gap_isochore(spec, temp, value)?;
            Ok(SweepRow {
                temperature: user_t,
                t: p.t,
                r: Some(scale.energy_from_natural(p.r)),
                mu: Some(scale.energy_from_natural(p.mu())),
                psi2: Some(p.psi2),
                rho: Some(scale.density_from_natural(p.rho)),
                pressure: Some(scale.pressure_from_natural(p.pressure)),
                regime: p.regime,
            })
        }
        Constraint::Pressure(_) => match solve_gap_isobar(spec, temp, value) {
            Ok(p) => Ok(SweepRow {
                temperature: user_t,
                t: p.t_p,
                r: Some(scale.energy_from_natural(p.r)),
                mu: Some(scale.energy_from_natural(0.0 - p.r)),
                psi2: Some(0.0),
                rho: Some(scale.density_from_natural(p.rho)),
                pressure: Some(scale.pressure_from_natural(p.pressure)),
                regime: p.regime,
            }),
            Err(Error::CondensedRegion { .. }) => Ok(SweepRow {
                temperature: user_t,
                t: temp / tc - 1.0,
                r: None,
                mu: None,
                psi2: None,
                rho: None,
                pressure: None,
                regime: Regime::CondensedBoundary,
            }),
            Err(e) => Err(e),
        },
    }
}

pub fn temperature_grid(lo: f64, hi: f64, points: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Config("need at least 2 points".into()));
    }
    let last = (points - 1) as f64;
    let grid = match spacing {
        Spacing::Linear => (0..points).map(|i| lo + (hi - lo) * i as f64 / last).collect(),
        Spacing::Log => {
            let ratio = (hi / lo).ln();
            (0..points).map(|i| lo * (ratio * i as f64 / last).exp()).collect::<Vec<_>>()
        }
    };
    let mut grid: Vec<f64> = grid;
    // pin the endpoints exactly
    grid[0] = lo;
    grid[points - 1] = hi;
    Ok(grid)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<String> {
    let (table, columns, format) = sweep_table(args)?;
    Ok(match format {
        Format::Csv => table.to_csv(&columns),
        Format::Json => table.to_json(),
    })
}

pub fn cmd_landau(args: &LandauArgs) -> Result<String> {
    let (cfg, spec) = load_model(&args.model)?;
    let scale = spec.unit_scale();
    let rho = cfg.real(args.density, "density")?.ok_or_else(|| Error::Config("missing --density".into()))?;
    let t_list = match (&args.t_list, cfg.string(None, "t_list")) {
        (Some(list), _) => list.clone(),
        (None, Some(s)) => s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad t_list entry '{v}'"))))
            .collect::<Result<Vec<_>>>()?,
        (None, None) => return Err(Error::Config("missing --t-list".into())),
    };
    let rho_nat = scale.density_to_natural(rho);

    let mut out = String::new();
    out.push_str(&format!("# {SCHEMA} landau columns: t,C_f,psi2_ordered,f_disordered,f_ordered,mu_asym\n"));
    out.push_str("t,C_f,psi2_ordered,f_disordered,f_ordered,mu_asym\n");
    for &t in &t_list {
        let m = LandauModel::new(&spec, rho_nat, t)?;
        let ordered = if t == 0.0 { Some(0.0) } else { m.ordered_root() };
        let f_dis = m.free_energy(0.0).ok();
        let f_ord = match ordered {
            Some(psi2) => Some(m.free_energy(psi2.sqrt())?),
            None => None,
        };
        let mu = m.chemical_potential(ordered.map_or(0.0, f64::sqrt))?;
        let cells = [
            fmt_num(t),
            fmt_num(scale.pressure_from_natural(m.c_f)),
            ordered.map(fmt_num).unwrap_or_default(),
            f_dis.map(|f| fmt_num(scale.pressure_from_natural(f))).unwrap_or_default(),
            f_ord.map(|f| fmt_num(scale.pressure_from_natural(f))).unwrap_or_default(),
            fmt_num(scale.energy_from_natural(mu)),
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(String, i32)> {
    let cfg = ConfigFile::load(args.config.as_deref())?;
    let level = if args.full {
        Level::Full
    } else if args.quick {
        Level::Quick
    } else {
        match (args.level, cfg.string(None, "level")) {
            (Some(l), _) => l,
            (None, Some(s)) => Level::from_str(&s, true).map_err(|_| Error::Config(format!("unknown level '{s}'")))?,
            (None, None) => Level::Quick,
        }
    };
    let report = verify::run_checks(level)?;
    let code = if report.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok((report.render(), code))
}
