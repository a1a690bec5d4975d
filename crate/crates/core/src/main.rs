use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xdiscord::discord::ETA_GRID_POINTS;
use xdiscord::groundstate::{critical_point, find_max_asymmetry, find_max_asymmetry_in};
use xdiscord::sweep::{
    eta_gap_both_sides, find_thermal_max, run_sweep_with, state_for, verify_with, write_csv, Axis,
    Mode, SampleFamily, Spacing, SweepSpec, ETA_TOL, REL_ASYM_CONVENTION,
};
use xdiscord::{discord_report, DiscordReport, Error, Execution, ModelParams};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "xdiscord",
    version,
    about = "Quantum discord asymmetry of an XY spin pair"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discord report for a single parameter point.
    Point(PointArgs),
    /// Discord report along a uniform grid, written as CSV.
    Sweep(SweepArgs),
    /// Closed-form and direct values on the level-crossing line.
    Critical {
        #[arg(long)]
        delta: f64,
    },
    /// Maximum of the zero-temperature asymmetry over delta.
    MaxDelta {
        #[arg(long)]
        start: Option<f64>,
        #[arg(long)]
        stop: Option<f64>,
    },
    /// Maximum of the thermal asymmetry over omega.
    ThermalMax {
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        tbar: f64,
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 1.5)]
        stop: f64,
    },
    /// Compare the analytic path with the brute-force oracle on random states.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        n_states: usize,
        /// Which states to sample.
        #[arg(long, value_enum, default_value = "x-state")]
        family: FamilyArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    XState,
    Gibbs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Thermal,
    Ground,
    CriticalLine,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Thermal => Mode::Thermal,
            ModeArg::Ground => Mode::Ground,
            ModeArg::CriticalLine => Mode::CriticalLine,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Delta,
    Omega,
    Tbar,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpacingArg {
    Linear,
    Log,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 0.0)]
    omega: f64,
    #[arg(long)]
    tbar: Option<f64>,
    /// Defaults to thermal when --tbar is given, ground otherwise.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Also check the eta endpoint reduction on a 1001-point grid.
    #[arg(long)]
    eta_grid: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    axis: AxisArg,
    #[arg(long)]
    start: f64,
    #[arg(long)]
    stop: f64,
    #[arg(long)]
    points: usize,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "linear")]
    spacing: SpacingArg,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    tbar: Option<f64>,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also check the eta endpoint reduction on a 1001-point grid per point.
    #[arg(long)]
    eta_grid: bool,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

fn print_report(out: &mut impl Write, r: &DiscordReport) -> io::Result<()> {
    let rows = [
        ("I", r.mutual_info),
        ("S_A", r.s_a),
        ("S_B", r.s_b),
        ("C_A", r.c_a),
        ("C_B", r.c_b),
        ("Q_A", r.q_a),
        ("Q_B", r.q_b),
        ("delta", r.delta),
        ("Q", r.q_min),
        ("eta_B", r.eta_argmin_b),
        ("eta_A", r.eta_argmin_a),
    ];
    for (name, v) in rows {
        writeln!(out, "{name:<6} = {v:.12}")?;
    }
    if r.tie {
        writeln!(out, "tie    = Q_A and Q_B coincide, Q taken from Q_B")?;
    }
    Ok(())
}

fn point(args: PointArgs) -> Result<(), Failure> {
    let mode = args.mode.map(Mode::from).unwrap_or(if args.tbar.is_some() {
        Mode::Thermal
    } else {
        Mode::Ground
    });
    let p = ModelParams {
        omega: args.omega,
        delta: args.delta,
        tbar: args.tbar,
    };
    let (eff, rho) = state_for(&p, mode)?;
    let report = discord_report(&rho)?;
    let mut out = io::stdout().lock();
    writeln!(out, "mode   = {}", mode.name())?;
    writeln!(out, "omega  = {:.12}", eff.omega)?;
    writeln!(out, "delta  = {:.12}", eff.delta)?;
    if let Some(t) = eff.tbar {
        writeln!(out, "tbar   = {t:.12}")?;
    }
    print_report(&mut out, &report)?;
    if args.eta_grid {
        let gap = eta_gap_both_sides(&rho)?;
        writeln!(
            out,
            "eta grid ({ETA_GRID_POINTS} points): endpoint - grid = {gap:.3e}"
        )?;
        if gap > ETA_TOL {
            return Err(Failure::Verification(format!(
                "eta endpoint gap {gap:e} exceeds {ETA_TOL:e}"
            )));
        }
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let axis = match args.axis {
        AxisArg::Delta => Axis::Delta,
        AxisArg::Omega => Axis::Omega,
        AxisArg::Tbar => Axis::Tbar,
    };
    let need = |v: Option<f64>, name: &str, swept: Axis| match v {
        Some(x) => Ok(x),
        None if axis == swept => Ok(0.0),
        None => Err(Failure::Usage(format!(
            "--{name} is required when not swept"
        ))),
    };
    let mode = Mode::from(args.mode);
    let omega = if mode == Mode::CriticalLine {
        args.omega.unwrap_or(0.0)
    } else {
        need(args.omega, "omega", Axis::Omega)?
    };
    let spec = SweepSpec {
        axis,
        start: args.start,
        stop: args.stop,
        points: args.points,
        fixed: ModelParams {
            omega,
            delta: need(args.delta, "delta", Axis::Delta)?,
            tbar: args.tbar,
        },
        mode,
        spacing: match args.spacing {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Log => Spacing::Log,
        },
    };
    let rows = run_sweep_with(&spec, Execution::default(), args.eta_grid)?;
    match &args.out {
        Some(path) => write_csv(BufWriter::new(File::create(path)?), &spec, &rows)?,
        None => write_csv(io::stdout().lock(), &spec, &rows)?,
    }
    let breaches: Vec<_> = rows
        .iter()
        .filter_map(|r| r.eta_gap.filter(|&g| g > ETA_TOL).map(|g| (r.x, g)))
        .collect();
    if !breaches.is_empty() {
        for (x, g) in &breaches {
            eprintln!("eta endpoint gap {g:.3e} at {} = {x}", spec.axis.name());
        }
        return Err(Failure::Verification(format!(
            "{} points exceed the eta tolerance",
            breaches.len()
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Point(args) => point(args),
        Command::Sweep(args) => sweep(args),
        Command::Critical { delta } => {
            let cp = critical_point(delta)?;
            let p = ModelParams::new(cp.omega_c, delta)?;
            let direct = xdiscord::sweep::run_point(&p, Mode::Ground)?;
            println!("delta    = {delta:.12}");
            println!("omega_c  = {:.12}", cp.omega_c);
            println!(
                "closed form: Q_B = {:.12}  Q_A = {:.12}  delta = {:.12}",
                cp.q_b_c, cp.q_a_c, cp.delta_asym
            );
            println!(
                "direct:      Q_B = {:.12}  Q_A = {:.12}  delta = {:.12}",
                direct.q_b, direct.q_a, direct.delta
            );
            Ok(())
        }
        Command::MaxDelta { start, stop } => {
            let (arg, max) = match (start, stop) {
                (None, None) => find_max_asymmetry(),
                (lo, hi) => {
                    let m = find_max_asymmetry_in(lo.unwrap_or(0.0), hi.unwrap_or(0.999_999))?;
                    (m.x, m.value)
                }
            };
            println!("delta_max = {arg:.9}");
            println!("omega_c   = {:.9}", xdiscord::critical_omega(arg)?);
            println!("asymmetry = {max:.9}");
            Ok(())
        }
        Command::ThermalMax {
            delta,
            tbar,
            start,
            stop,
        } => {
            let m = find_thermal_max(delta, tbar, (start, stop))?;
            println!("omega*    = {:.9}", m.omega);
            println!("delta*    = {:.9}", m.delta_asym);
            println!("Q*        = {:.9}", m.q_min);
            println!("Q_A, Q_B  = {:.9}, {:.9}", m.q_a, m.q_b);
            println!(
                "rel_asym  = {:.3}%  ({REL_ASYM_CONVENTION})",
                m.rel_asym_percent
            );
            Ok(())
        }
        Command::Verify {
            seed,
            n_states,
            family,
        } => {
            let family = match family {
                FamilyArg::XState => SampleFamily::XState,
                FamilyArg::Gibbs => SampleFamily::Gibbs,
            };
            let summary = verify_with(seed, n_states, family, Execution::default())?;
            println!("{summary}");
            if summary.passed() {
                Ok(())
            } else {
                Err(Failure::Verification("threshold breached".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
