//! Parameter sweeps, thermal extremum search and oracle verification runs.

use std::cell::RefCell;
use std::fmt;
use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::discord::{discord_report, eta_endpoint_gap, DiscordReport, ETA_GRID_POINTS};
use crate::error::{Error, Result};
use crate::model::{critical_omega, gibbs_state, ground_state, ModelParams, XDensityMatrix};
use crate::optimize::golden_section_max;
use crate::oracle::{
    brute_force_classical_correlation_with, dense_mutual_information, random_gibbs_state,
    random_x_state, Subsystem, DEFAULT_GRID,
};
use crate::par::{map_indexed, try_map_indexed, Execution};

/// Maximum allowed analytic-vs-oracle deviation in a verification run.
pub const ORACLE_TOL: f64 = 1e-6;
/// Maximum allowed endpoint-vs-grid gap of the `eta` reduction.
pub const ETA_TOL: f64 = 1e-9;
/// Bracket width for [`find_thermal_max`].
pub const THERMAL_ARGMAX_TOL: f64 = 1e-6;
const THERMAL_SCAN_POINTS: usize = 81;

/// Which state a point is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Gibbs state at `tbar > 0`.
    Thermal,
    /// Zero-temperature state.
    Ground,
    /// `omega` tied to the level crossing `omega_c(delta)`; ground state
    /// unless a positive `tbar` is given.
    CriticalLine,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Thermal => "thermal",
            Mode::Ground => "ground",
            Mode::CriticalLine => "critical-line",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Delta,
    Omega,
    Tbar,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Delta => "delta",
            Axis::Omega => "omega",
            Axis::Tbar => "tbar",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// Resolves the state for one parameter point.
///
/// Returns the effective parameters (with `omega` replaced on the critical
/// line) and the density matrix.
pub fn state_for(p: &ModelParams, mode: Mode) -> Result<(ModelParams, XDensityMatrix)> {
    p.validate()?;
    match mode {
        Mode::Thermal => match p.tbar {
            Some(t) if t > 0.0 => Ok((*p, gibbs_state(p)?)),
            _ => Err(Error::InvalidParams("thermal mode needs tbar > 0".into())),
        },
        Mode::Ground => {
            if matches!(p.tbar, Some(t) if t != 0.0) {
                return Err(Error::InvalidParams(
                    "ground mode does not take tbar".into(),
                ));
            }
            let q = ModelParams { tbar: None, ..*p };
            Ok((q, ground_state(&q)?))
        }
        Mode::CriticalLine => {
            let q = ModelParams {
                omega: critical_omega(p.delta)?,
                ..*p
            };
            match q.tbar {
                Some(t) if t > 0.0 => Ok((q, gibbs_state(&q)?)),
                _ => {
                    let q = ModelParams { tbar: None, ..q };
                    Ok((q, ground_state(&q)?))
                }
            }
        }
    }
}

pub fn run_point(p: &ModelParams, mode: Mode) -> Result<DiscordReport> {
    let (_, rho) = state_for(p, mode)?;
    discord_report(&rho)
}

/// Largest endpoint-vs-grid gap over both measurement sides.
pub fn eta_gap_both_sides(rho: &XDensityMatrix) -> Result<f64> {
    let b = eta_endpoint_gap(rho, ETA_GRID_POINTS)?.gap;
    let a = eta_endpoint_gap(&rho.swap_subsystems(), ETA_GRID_POINTS)?.gap;
    Ok(a.max(b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    /// Values of the parameters that are not swept.
    pub fixed: ModelParams,
    pub mode: Mode,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSweep(m));
        if self.points < 2 {
            return bad(format!("points = {} must be >= 2", self.points));
        }
        if !self.start.is_finite() || !self.stop.is_finite() || self.start >= self.stop {
            return bad(format!(
                "need start < stop, got [{}, {}]",
                self.start, self.stop
            ));
        }
        if self.spacing == Spacing::Log && self.start <= 0.0 {
            return bad("log spacing needs start > 0".into());
        }
        match self.axis {
            Axis::Delta if self.start < 0.0 || self.stop > 1.0 => {
                return bad("delta must lie in [0, 1]".into())
            }
            Axis::Omega | Axis::Tbar if self.start < 0.0 => {
                return bad(format!("{} must be >= 0", self.axis.name()))
            }
            _ => {}
        }
        match (self.mode, self.axis) {
            (Mode::Thermal, Axis::Tbar) if self.start <= 0.0 => {
                return bad("thermal sweeps exclude tbar = 0; use ground mode".into())
            }
            (Mode::Thermal, Axis::Delta) if self.stop >= 1.0 => {
                return bad("thermal sweeps exclude delta = 1".into())
            }
            (Mode::Ground, Axis::Tbar) => return bad("ground mode cannot sweep tbar".into()),
            (Mode::CriticalLine, Axis::Delta) if self.stop >= 1.0 => {
                return bad("critical line diverges at delta = 1".into())
            }
            (Mode::CriticalLine, Axis::Delta) => {}
            (Mode::CriticalLine, _) => return bad("critical-line mode sweeps delta".into()),
            _ => {}
        }
        Ok(())
    }

    /// Grid nodes in ascending order; the last node is exactly `stop`.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                if k == self.points - 1 {
                    return self.stop;
                }
                let f = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * f,
                    Spacing::Log => {
                        (self.start.ln() + (self.stop.ln() - self.start.ln()) * f).exp()
                    }
                }
            })
            .collect()
    }

    fn params_at(&self, x: f64) -> ModelParams {
        let mut p = self.fixed;
        match self.axis {
            Axis::Delta => p.delta = x,
            Axis::Omega => p.omega = x,
            Axis::Tbar => p.tbar = Some(x),
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    /// Parameters actually used, after critical-line substitution.
    pub params: ModelParams,
    pub report: DiscordReport,
    /// Largest `eta` endpoint gap when grid verification was requested.
    pub eta_gap: Option<f64>,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    run_sweep_with(spec, Execution::default(), false)
}

/// Evaluates every grid node; rows come back in grid order for any `exec`.
pub fn run_sweep_with(spec: &SweepSpec, exec: Execution, eta_grid: bool) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let grid = spec.grid();
    try_map_indexed(exec, grid.len(), |k| {
        let x = grid[k];
        let point = || -> Result<SweepRow> {
            let (params, rho) = state_for(&spec.params_at(x), spec.mode)?;
            let report = discord_report(&rho)?;
            let eta_gap = if eta_grid {
                Some(eta_gap_both_sides(&rho)?)
            } else {
                None
            };
            Ok(SweepRow {
                x,
                params,
                report,
                eta_gap,
            })
        };
        point().map_err(|e| Error::SweepPoint {
            axis: spec.axis.name(),
            value: x,
            source: Box::new(e),
        })
    })
}

pub const CSV_COLUMNS: &str = "x,I,S_A,S_B,C_A,C_B,Q_A,Q_B,delta,Q,eta_B,eta_A";

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), |v| format!("{v}"))
}

/// Writes the `# params:` line, the column header and one line per row.
pub fn write_csv<W: Write>(mut w: W, spec: &SweepSpec, rows: &[SweepRow]) -> io::Result<()> {
    let f = &spec.fixed;
    let fixed = |axis: Axis, v: String| {
        if spec.axis == axis {
            "swept".to_string()
        } else {
            v
        }
    };
    writeln!(
        w,
        "# params: mode={} axis={} start={} stop={} points={} spacing={} omega={} delta={} tbar={}",
        spec.mode.name(),
        spec.axis.name(),
        spec.start,
        spec.stop,
        spec.points,
        match spec.spacing {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        },
        if spec.mode == Mode::CriticalLine {
            "critical".to_string()
        } else {
            fixed(Axis::Omega, f.omega.to_string())
        },
        fixed(Axis::Delta, f.delta.to_string()),
        fixed(Axis::Tbar, fmt_opt(f.tbar)),
    )?;
    writeln!(w, "{CSV_COLUMNS}")?;
    for row in rows {
        writeln!(w, "{}", csv_line(row.x, &row.report))?;
    }
    Ok(())
}

pub fn csv_line(x: f64, r: &DiscordReport) -> String {
    let nums = [
        x,
        r.mutual_info,
        r.s_a,
        r.s_b,
        r.c_a,
        r.c_b,
        r.q_a,
        r.q_b,
        r.delta,
        r.q_min,
        r.eta_argmin_b,
        r.eta_argmin_a,
    ];
    nums.iter()
        .map(|v| format!("{v:.11e}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Peak of the thermal asymmetry along `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalMax {
    pub omega: f64,
    pub delta_asym: f64,
    pub q_min: f64,
    pub q_a: f64,
    pub q_b: f64,
    /// `100 * delta_asym / q_min`, both taken at the argmax.
    pub rel_asym_percent: f64,
}

/// Label for the normalization used in [`ThermalMax::rel_asym_percent`].
pub const REL_ASYM_CONVENTION: &str = "delta/min(Q_A,Q_B) at argmax";

pub fn find_thermal_max(delta: f64, tbar: f64, omega_range: (f64, f64)) -> Result<ThermalMax> {
    find_thermal_max_with(delta, tbar, omega_range, Execution::default())
}

/// Scans `omega` on a uniform grid, then refines the best cell pair by
/// golden-section search to [`THERMAL_ARGMAX_TOL`].
pub fn find_thermal_max_with(
    delta: f64,
    tbar: f64,
    omega_range: (f64, f64),
    exec: Execution,
) -> Result<ThermalMax> {
    let (lo, hi) = omega_range;
    if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "invalid omega range [{lo}, {hi}]"
        )));
    }
    if tbar.is_nan() || tbar <= 0.0 {
        return Err(Error::InvalidParams(format!("tbar = {tbar} must be > 0")));
    }
    ModelParams::thermal(lo, delta, tbar)?;

    let report_at = |omega: f64| {
        run_point(
            &ModelParams {
                omega,
                delta,
                tbar: Some(tbar),
            },
            Mode::Thermal,
        )
    };
    let step = (hi - lo) / (THERMAL_SCAN_POINTS - 1) as f64;
    let node = |k: usize| {
        if k == THERMAL_SCAN_POINTS - 1 {
            hi
        } else {
            lo + step * k as f64
        }
    };
    let scan = try_map_indexed(exec, THERMAL_SCAN_POINTS, |k| {
        report_at(node(k)).map(|r| r.delta)
    })?;
    let best = scan
        .iter()
        .enumerate()
        .fold(0, |b, (k, &v)| if v > scan[b] { k } else { b });

    let failure = RefCell::new(None);
    let objective = |omega: f64| match report_at(omega) {
        Ok(r) => r.delta,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NEG_INFINITY
        }
    };
    let a = node(best.saturating_sub(1));
    let b = node((best + 1).min(THERMAL_SCAN_POINTS - 1));
    let m = golden_section_max(objective, a, b, THERMAL_ARGMAX_TOL);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let omega = if scan[best] > m.value {
        node(best)
    } else {
        m.x
    };
    let r = report_at(omega)?;
    Ok(ThermalMax {
        omega,
        delta_asym: r.delta,
        q_min: r.q_min,
        q_a: r.q_a,
        q_b: r.q_b,
        rel_asym_percent: 100.0 * r.relative_asymmetry(),
    })
}

/// One state's worst deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateCheck {
    pub index: usize,
    pub state: XDensityMatrix,
    /// Max over C^B, C^A, Q^B, Q^A of |analytic - oracle|.
    pub oracle_dev: f64,
    /// Largest endpoint-vs-grid `eta` gap over both measurement sides.
    pub eta_gap: f64,
}

/// Which states a verification run samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleFamily {
    /// Uniform over valid real X states with zero outer coherence.
    #[default]
    XState,
    /// Thermal states of the XY pair at random parameters.
    Gibbs,
}

impl SampleFamily {
    pub fn name(self) -> &'static str {
        match self {
            SampleFamily::XState => "x-state",
            SampleFamily::Gibbs => "gibbs",
        }
    }
}

/// Deterministic sample of `n` states from `family`.
pub fn sample_states(seed: u64, n: usize, family: SampleFamily) -> Result<Vec<XDensityMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| match family {
            SampleFamily::XState => Ok(random_x_state(&mut rng)),
            SampleFamily::Gibbs => random_gibbs_state(&mut rng),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationSummary {
    pub seed: u64,
    pub family: SampleFamily,
    pub n_states: usize,
    pub worst_oracle: StateCheck,
    pub worst_eta: StateCheck,
    /// Every state whose `eta` gap exceeds [`ETA_TOL`], in sampling order.
    pub eta_counterexamples: Vec<StateCheck>,
}

impl VerificationSummary {
    pub fn oracle_passed(&self) -> bool {
        self.worst_oracle.oracle_dev <= ORACLE_TOL
    }

    pub fn eta_passed(&self) -> bool {
        self.worst_eta.eta_gap <= ETA_TOL
    }

    pub fn passed(&self) -> bool {
        self.oracle_passed() && self.eta_passed()
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// All five entries with enough digits to round-trip exactly.
pub fn format_state(s: &XDensityMatrix) -> String {
    format!(
        "r11={:.17e} r22={:.17e} r33={:.17e} r44={:.17e} r23={:.17e}",
        s.r11, s.r22, s.r33, s.r44, s.r23
    )
}

impl fmt::Display for VerificationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "seed = {}, states = {} ({})",
            self.seed,
            self.n_states,
            self.family.name()
        )?;
        writeln!(
            f,
            "oracle: max |analytic - brute force| = {:.3e} (tol {ORACLE_TOL:e}) {}",
            self.worst_oracle.oracle_dev,
            verdict(self.oracle_passed())
        )?;
        if !self.oracle_passed() {
            writeln!(
                f,
                "  worst state #{}: {}",
                self.worst_oracle.index,
                format_state(&self.worst_oracle.state)
            )?;
        }
        writeln!(
            f,
            "eta: max endpoint - grid = {:.3e} (tol {ETA_TOL:e}) {}",
            self.worst_eta.eta_gap,
            verdict(self.eta_passed())
        )?;
        for c in &self.eta_counterexamples {
            writeln!(
                f,
                "  counterexample #{} gap {:.3e}: {}",
                c.index,
                c.eta_gap,
                format_state(&c.state)
            )?;
        }
        write!(f, "verdict: {}", verdict(self.passed()))
    }
}

/// Checks one state against the brute-force oracle and the `eta` grid.
pub fn check_state(index: usize, state: &XDensityMatrix, exec: Execution) -> Result<StateCheck> {
    let analytic = discord_report(state)?;
    let c_b = brute_force_classical_correlation_with(state, Subsystem::B, DEFAULT_GRID, exec)?;
    let c_a = brute_force_classical_correlation_with(state, Subsystem::A, DEFAULT_GRID, exec)?;
    let info = dense_mutual_information(state)?;
    let oracle_dev = [
        analytic.c_b - c_b,
        analytic.c_a - c_a,
        analytic.q_b - (info - c_b),
        analytic.q_a - (info - c_a),
    ]
    .iter()
    .fold(0.0f64, |m, d| m.max(d.abs()));
    Ok(StateCheck {
        index,
        state: *state,
        oracle_dev,
        eta_gap: eta_gap_both_sides(state)?,
    })
}

/// Samples `n_states` seeded random X states and checks each one.
pub fn verify(seed: u64, n_states: usize) -> Result<VerificationSummary> {
    verify_with(seed, n_states, SampleFamily::XState, Execution::default())
}

pub fn verify_with(
    seed: u64,
    n_states: usize,
    family: SampleFamily,
    exec: Execution,
) -> Result<VerificationSummary> {
    if n_states == 0 {
        return Err(Error::InvalidParams("n_states must be >= 1".into()));
    }
    let states = sample_states(seed, n_states, family)?;
    // parallelism goes over states; each oracle search runs sequentially
    let checks = try_map_indexed(exec, n_states, |k| {
        check_state(k, &states[k], Execution::Sequential)
    })?;
    let worst_by = |key: fn(&StateCheck) -> f64| {
        *checks
            .iter()
            .reduce(|a, b| if key(b) > key(a) { b } else { a })
            .expect("n_states >= 1")
    };
    Ok(VerificationSummary {
        seed,
        family,
        n_states,
        worst_oracle: worst_by(|c| c.oracle_dev),
        worst_eta: worst_by(|c| c.eta_gap),
        eta_counterexamples: checks
            .iter()
            .filter(|c| c.eta_gap > ETA_TOL)
            .copied()
            .collect(),
    })
}

/// `eta` endpoint check alone, without the oracle; cheap enough for large
/// samples.
pub fn eta_survey(
    seed: u64,
    n_states: usize,
    family: SampleFamily,
    exec: Execution,
) -> Result<Vec<StateCheck>> {
    let states = sample_states(seed, n_states, family)?;
    let gaps = map_indexed(exec, n_states, |k| eta_gap_both_sides(&states[k]));
    gaps.into_iter()
        .enumerate()
        .map(|(k, g)| {
            Ok(StateCheck {
                index: k,
                state: states[k],
                oracle_dev: 0.0,
                eta_gap: g?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(axis: Axis, start: f64, stop: f64, mode: Mode) -> SweepSpec {
        SweepSpec {
            axis,
            start,
            stop,
            points: 5,
            fixed: ModelParams {
                omega: 0.5,
                delta: 0.683,
                tbar: Some(0.1),
            },
            mode,
            spacing: Spacing::Linear,
        }
    }

    #[test]
    fn linear_grid_is_exact_at_ends() {
        let g = spec(Axis::Omega, 0.0, 1.5, Mode::Thermal).grid();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[4], 1.5);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn log_grid() {
        let mut s = spec(Axis::Tbar, 0.005, 1.5, Mode::Thermal);
        s.spacing = Spacing::Log;
        let g = s.grid();
        assert!((g[0] - 0.005).abs() < 1e-17);
        assert_eq!(g[4], 1.5);
        assert!((g[1] / g[0] - g[4] / g[3]).abs() < 1e-12);
    }

    #[test]
    fn invalid_sweeps_are_rejected() {
        assert!(spec(Axis::Tbar, 0.0, 1.0, Mode::Thermal)
            .validate()
            .is_err());
        assert!(spec(Axis::Delta, 0.0, 1.0, Mode::Thermal)
            .validate()
            .is_err());
        assert!(spec(Axis::Delta, 0.0, 1.0, Mode::CriticalLine)
            .validate()
            .is_err());
        assert!(spec(Axis::Omega, 0.0, 1.0, Mode::CriticalLine)
            .validate()
            .is_err());
        assert!(spec(Axis::Tbar, 0.1, 1.0, Mode::Ground).validate().is_err());
        assert!(spec(Axis::Omega, 1.0, 0.5, Mode::Thermal)
            .validate()
            .is_err());
        let mut s = spec(Axis::Omega, 0.0, 1.0, Mode::Thermal);
        s.points = 1;
        assert!(s.validate().is_err());
        s.points = 2;
        s.spacing = Spacing::Log;
        assert!(s.validate().is_err());
    }

    #[test]
    fn point_modes() {
        let p = ModelParams {
            omega: 0.3,
            delta: 0.0,
            tbar: Some(0.5),
        };
        assert_eq!(run_point(&p, Mode::Thermal).unwrap().delta, 0.0);
        assert!(run_point(&p, Mode::Ground).is_err());
        let g = ModelParams { tbar: None, ..p };
        assert!(run_point(&g, Mode::Thermal).is_err());
        assert!(run_point(&g, Mode::Ground).is_ok());
        let (eff, _) = state_for(&ModelParams { omega: 9.0, ..g }, Mode::CriticalLine).unwrap();
        assert_eq!(eff.omega, 0.5);
    }

    #[test]
    fn csv_layout() {
        let s = spec(Axis::Omega, 0.2, 1.0, Mode::Thermal);
        let rows = run_sweep(&s).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &s, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# params: mode=thermal axis=omega"));
        assert!(lines[0].contains("omega=swept"));
        assert_eq!(lines[1], CSV_COLUMNS);
        assert_eq!(lines.len(), 2 + 5);
        assert!(lines[2..].iter().all(|l| l.split(',').count() == 12));
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn sweep_error_names_the_point() {
        let mut s = spec(Axis::Omega, 0.2, 1.0, Mode::Thermal);
        s.fixed.tbar = None;
        match run_sweep(&s) {
            Err(Error::SweepPoint { axis, value, .. }) => {
                assert_eq!(axis, "omega");
                assert_eq!(value, 0.2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn thermal_max_symmetric_system() {
        let m = find_thermal_max(0.0, 0.3, (0.0, 1.0)).unwrap();
        assert_eq!(m.delta_asym, 0.0);
        assert!(find_thermal_max(0.5, 0.0, (0.0, 1.0)).is_err());
        assert!(find_thermal_max(0.5, 0.1, (1.0, 0.0)).is_err());
    }

    #[test]
    fn verify_needs_states() {
        assert!(verify(42, 0).is_err());
    }
}
