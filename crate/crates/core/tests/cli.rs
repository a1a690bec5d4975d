//! End-to-end runs of the `xdiscord` binary.

use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_xdiscord");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Csv {
    params: String,
    columns: String,
    rows: Vec<Vec<f64>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut lines = text.lines();
        let params = lines.next().unwrap().to_string();
        let columns = lines.next().unwrap().to_string();
        let rows = lines
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        Csv {
            params,
            columns,
            rows,
        }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let i = self.columns.split(',').position(|c| c == name).unwrap();
        self.rows.iter().map(|r| r[i]).collect()
    }
}

fn sweep(args: &[&str]) -> Csv {
    let mut all = vec!["sweep"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    Csv::parse(&stdout(&o))
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b })
}

fn omega_c() -> f64 {
    xdiscord::critical_omega(0.683).unwrap()
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &[],
        &["bogus"],
        &["point"],
        &["point", "--delta", "1.5"],
        &["point", "--delta", "0.5", "--mode", "thermal"],
        &["critical", "--delta", "1.0"],
        &["verify", "--n-states", "0"],
        &[
            "sweep", "--axis", "omega", "--start", "0", "--stop", "1", "--points", "1", "--mode",
            "thermal", "--delta", "0.5", "--tbar", "0.1",
        ],
        &[
            "sweep", "--axis", "omega", "--start", "1", "--stop", "0", "--points", "5", "--mode",
            "thermal", "--delta", "0.5", "--tbar", "0.1",
        ],
        &[
            "sweep", "--axis", "tbar", "--start", "0", "--stop", "1", "--points", "5", "--mode",
            "thermal", "--delta", "0.5", "--omega", "0.3",
        ],
        &[
            "sweep", "--axis", "omega", "--start", "0", "--stop", "1", "--points", "5", "--mode",
            "thermal", "--tbar", "0.1",
        ],
        &[
            "thermal-max",
            "--delta",
            "0.683",
            "--tbar",
            "0.02",
            "--start",
            "1",
            "--stop",
            "0.5",
        ],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "args: {args:?}");
    }
}

#[test]
fn point_reports_critical_values() {
    let o = run(&[
        "point",
        "--delta",
        "0.683",
        "--omega",
        &omega_c().to_string(),
        "--mode",
        "ground",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let value = |key: &str| -> f64 {
        let line = text
            .lines()
            .rfind(|l| l.split('=').next().unwrap().trim() == key)
            .unwrap();
        line.split('=').nth(1).unwrap().trim().parse().unwrap()
    };
    assert!((value("Q_B") - 0.230).abs() < 1e-3);
    assert!((value("Q_A") - 0.282).abs() < 1e-3);
    assert!((value("delta") - 0.052).abs() < 1e-3);
}

#[test]
fn point_with_eta_grid_passes_on_thermal_state() {
    let o = run(&[
        "point",
        "--delta",
        "0.683",
        "--omega",
        "0.5",
        "--tbar",
        "0.02",
        "--eta-grid",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("eta grid (1001 points)"));
}

#[test]
fn symmetric_thermal_point_has_exactly_zero_asymmetry() {
    let o = run(&["point", "--delta", "0", "--omega", "0.3", "--tbar", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("delta  = 0.000000000000"));
    assert!(text.contains("tie"));
}

#[test]
fn critical_prints_matching_closed_form_and_direct_values() {
    let o = run(&["critical", "--delta", "0.683"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("closed form: Q_B = 0.2301"));
    assert!(text.contains("direct:      Q_B = 0.2301"));
}

#[test]
fn csv_is_byte_identical_across_runs_and_matches_schema() {
    let args = [
        "sweep", "--axis", "omega", "--start", "0", "--stop", "1.5", "--points", "40", "--mode",
        "thermal", "--delta", "0.683", "--tbar", "0.1",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let csv = Csv::parse(&text);
    assert!(csv.params.starts_with("# params: "));
    assert_eq!(
        csv.columns,
        "x,I,S_A,S_B,C_A,C_B,Q_A,Q_B,delta,Q,eta_B,eta_A"
    );
    assert_eq!(csv.rows.len(), 40);
    assert!(csv.rows.iter().all(|r| r.len() == 12));
    assert!(!text.contains('\r'));
    // 12 significant digits
    let first = text.lines().nth(2).unwrap().split(',').nth(1).unwrap();
    assert_eq!(
        first.split('e').next().unwrap().len(),
        "1.23456789012".len()
    );
    let x = csv.col("x");
    assert!(x.windows(2).all(|w| w[0] < w[1]));
    assert_eq!((x[0], x[39]), (0.0, 1.5));
}

#[test]
fn sweep_writes_to_file() {
    let path = std::env::temp_dir().join(format!("xdiscord-cli-{}.csv", std::process::id()));
    let args = [
        "sweep",
        "--axis",
        "delta",
        "--start",
        "0",
        "--stop",
        "0.9",
        "--points",
        "5",
        "--mode",
        "critical-line",
        "--out",
        path.to_str().unwrap(),
    ];
    let o = run(&args);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = Csv::parse(&std::fs::read_to_string(&path).unwrap());
    std::fs::remove_file(&path).ok();
    assert_eq!(csv.rows.len(), 5);
}

#[test]
fn asymmetry_along_the_critical_line() {
    let csv = sweep(&[
        "--axis",
        "delta",
        "--start",
        "0",
        "--stop",
        "0.99",
        "--points",
        "200",
        "--mode",
        "critical-line",
    ]);
    let (x, d, q) = (csv.col("x"), csv.col("delta"), csv.col("Q"));
    assert_eq!(x.len(), 200);
    let k = argmax(&d);
    assert!((x[k] - 0.683).abs() < 0.01, "peak at {}", x[k]);
    assert!((d[k] - 0.052).abs() < 1e-3);
    assert_eq!(d[0], 0.0);
    // Q is Q_B on the whole line since Q_A > Q_B
    assert!(csv.col("Q_A").iter().zip(&q).all(|(a, b)| a >= b));
}

fn temperature_sweep(omega: f64) -> Csv {
    sweep(&[
        "--axis",
        "tbar",
        "--start",
        "0.005",
        "--stop",
        "1.5",
        "--points",
        "300",
        "--spacing",
        "log",
        "--mode",
        "thermal",
        "--delta",
        "0.683",
        "--omega",
        &omega.to_string(),
    ])
}

#[test]
fn temperature_sweeps_approach_ground_state_limits() {
    let oc = omega_c();
    let at_c = temperature_sweep(oc);
    assert!((at_c.col("delta")[0] - 0.052).abs() <= 0.002);
    assert!((at_c.col("Q")[0] - 0.230).abs() <= 0.002);
    for o in [oc - 0.1, oc + 0.1] {
        let csv = temperature_sweep(o);
        assert!(csv.col("delta")[0].abs() <= 0.002, "omega = {o}");
    }
}

#[test]
fn discord_decreases_in_the_high_temperature_tail() {
    let oc = omega_c();
    for o in [oc - 0.1, oc, oc + 0.1] {
        let csv = temperature_sweep(o);
        let (t, q) = (csv.col("x"), csv.col("Q"));
        let tail: Vec<f64> = (0..t.len())
            .filter(|&i| t[i] >= 1.0)
            .map(|i| q[i])
            .collect();
        assert!(tail.len() > 10);
        assert!(tail.windows(2).all(|w| w[1] < w[0]), "omega = {o}");
    }
}

#[test]
fn field_sweep_at_low_temperature_peaks_near_thermal_max() {
    let csv = sweep(&[
        "--axis", "omega", "--start", "0", "--stop", "1.5", "--points", "300", "--mode", "thermal",
        "--delta", "0.683", "--tbar", "0.02",
    ]);
    let (x, d) = (csv.col("x"), csv.col("delta"));
    let k = argmax(&d);
    assert!((d[k] - 0.098).abs() < 1e-3);
    let m = xdiscord::sweep::find_thermal_max(0.683, 0.02, (0.2, 1.0)).unwrap();
    assert!((x[k] - m.omega).abs() <= 1.5 / 299.0);
    assert!(d[k] <= m.delta_asym);
}

#[test]
fn thermal_max_labels_its_convention() {
    let o = run(&[
        "thermal-max",
        "--delta",
        "0.683",
        "--tbar",
        "0.5",
        "--start",
        "0.2",
        "--stop",
        "1.5",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("delta/min(Q_A,Q_B) at argmax"));
}

#[test]
fn max_delta_reports_the_peak() {
    let o = run(&["max-delta"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("delta_max = 0.6828"));
    assert!(text.contains("asymmetry = 0.0517"));
}

#[test]
fn verify_passes_on_small_samples_and_thermal_states() {
    assert_eq!(
        run(&["verify", "--seed", "42", "--n-states", "100"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&[
            "verify",
            "--seed",
            "7",
            "--n-states",
            "100",
            "--family",
            "gibbs"
        ])
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn verify_reports_eta_counterexamples_in_full() {
    // seed 42 draws an interior-optimum state at index 961
    let o = run(&["verify", "--seed", "42", "--n-states", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("oracle: max |analytic - brute force|"));
    assert!(text.contains("counterexample #961"));
    assert!(text.contains("r23=-1.01903679306069403e-1"));
}
