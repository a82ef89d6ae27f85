use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use vortexlab_cli::commands::{kernel_table, KernelTableArgs};

fn vortexlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vortexlab"))
        .args(args)
        .env("VORTEXLAB_OUT", dir)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let (header, rows) = read_csv(path);
    let k = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

const COARSE_EXTERIOR: &str = "\
[exterior]
q0 = bump center=(1, 0) radius=0.4 amplitude=1 tilt=0
t_end = 0.5
dt = 0.05
dr = 0.025
n_theta = 256
n_modes = 127
snapshot_stride = 5
";

const COARSE_PLANE: &str = "\
[plane]
q0 = bump center=(1, 0) radius=0.4 amplitude=1 tilt=0
t_end = 0.5
dt = 0.05
h = 0.05
snapshot_stride = 5
";

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.ini");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn kernel_table_defaults() {
    let dir = TempDir::new().unwrap();
    let out = vortexlab(&["kernel-table", "--svg"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("kernel_table.csv");
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["r", "g_alpha", "k_theta", "bound_a_ratio", "bound_b_ratio", "cross_deriv"]);
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().flatten().all(|v| v.parse::<f64>().unwrap().is_finite()));
    assert!(fs::read_to_string(dir.path().join("kernel_table.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn kernel_table_single_sample() {
    let dir = TempDir::new().unwrap();
    let out = vortexlab(
        &["kernel-table", "--samples", "1", "--out", dir.path().to_str().unwrap()],
        Path::new("/nonexistent"),
    );
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("kernel_table.csv")).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("r,g_alpha,"));
}

#[test]
fn kernel_table_alpha_scaling() {
    // G_α(r) = G_1(r/√α)/α, hence M_α(r) = M_1(r/√α) and k_α(r) = k_1(r/√α)/√α
    let dir = TempDir::new().unwrap();
    let s = 2f64.sqrt();
    let unit = KernelTableArgs { samples: 50, r_min: 1e-3, r_max: 10.0, ..Default::default() };
    let scaled = KernelTableArgs { alpha: 2.0, r_min: unit.r_min * s, r_max: unit.r_max * s, ..unit.clone() };
    kernel_table(&dir.path().join("a1"), &unit).unwrap();
    kernel_table(&dir.path().join("a2"), &scaled).unwrap();
    let f = |d: &str, c: &str| column(&dir.path().join(d).join("kernel_table.csv"), c);
    for (a, b) in f("a1", "k_theta").iter().zip(f("a2", "k_theta")) {
        assert!((b * s - a).abs() <= 1e-12 * a, "{a} {b}");
    }
    for (a, b) in f("a1", "g_alpha").iter().zip(f("a2", "g_alpha")) {
        assert!((2.0 * b - a).abs() <= 1e-12 * a, "{a} {b}");
    }
}

#[test]
fn radial_verify_table() {
    let dir = TempDir::new().unwrap();
    let out = vortexlab(&["radial-verify"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("radial_verify.csv");
    let (header, rows) = read_csv(&path);
    assert_eq!(header.len(), 8);
    assert_eq!(rows.len(), 15);
    assert!(column(&path, "rel_gap").iter().all(|&g| g <= 1e-6));
    let (alpha, eps) = (column(&path, "alpha"), column(&path, "eps"));
    let k = (0..rows.len()).find(|&k| alpha[k] == 1.0 && eps[k] == 0.1).unwrap();
    assert!((column(&path, "a_eps")[k] + 0.0232614).abs() < 1e-6);
    assert!((column(&path, "b_eps")[k] - 0.0057295).abs() < 1e-6);
    assert!((column(&path, "energy_identity")[k] - 3.4836e-3).abs() < 1e-6);
    let rates: Vec<f64> =
        (0..rows.len()).filter(|&k| alpha[k] == 1.0).map(|k| column(&path, "rate_ratio")[k]).collect();
    let (lo, hi) = rates.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    assert!((hi - lo) / hi <= 0.25, "{rates:?}");
}

#[test]
fn simulate_plane_zero_time_and_determinism() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), &COARSE_PLANE.replace("t_end = 0.5", "t_end = 0"));
    let run = dir.path().join("zero");
    let out = vortexlab(&["simulate", "plane", "--config", &config, "--out", run.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_dir(run.join("snapshots")).unwrap().count(), 1);
    assert_eq!(read_csv(&run.join("diagnostics.csv")).1.len(), 1);

    let config = write_config(dir.path(), COARSE_PLANE);
    let mut diagnostics = Vec::new();
    for name in ["a", "b"] {
        let run = dir.path().join(name);
        let out = vortexlab(&["simulate", "plane", "--config", &config, "--out", run.to_str().unwrap()], dir.path());
        assert!(out.status.success());
        diagnostics.push(fs::read(run.join("diagnostics.csv")).unwrap());
        let echo = fs::read_to_string(run.join("config.echo")).unwrap();
        assert!(echo.contains("dt = 0.05\n") && echo.contains("solver = plane\n"));
        assert!(fs::read_to_string(run.join("provenance.txt")).unwrap().contains("tool_version"));
    }
    assert_eq!(diagnostics[0], diagnostics[1]);
    assert_eq!(fs::read_dir(dir.path().join("a/snapshots")).unwrap().count(), 3);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), &COARSE_PLANE.replace("t_end = 0.5\n", ""));
    let out = vortexlab(&["simulate", "plane", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`t_end`"));

    let config = write_config(dir.path(), &COARSE_PLANE.replace("h = 0.05", "h = small"));
    let out = vortexlab(&["simulate", "plane", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("run.ini:5:"));

    let out = vortexlab(&["simulate", "plane", "--config", "/nonexistent.ini"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_exterior_writes_polar_snapshots() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), COARSE_EXTERIOR);
    let out = vortexlab(&["simulate", "exterior", "--config", &config], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = column(&dir.path().join("diagnostics.csv"), "t");
    assert!(t.windows(2).all(|w| w[1] > w[0]));
    let (header, rows) = read_csv(&dir.path().join("snapshots/snapshot_000010.csv"));
    assert_eq!(header, ["r", "theta", "q"]);
    assert_eq!(rows.len(), 117 * 256);
}

#[test]
fn foot_crossing_abort_keeps_partial_output() {
    let dir = TempDir::new().unwrap();
    let text = COARSE_EXTERIOR
        .replace("center=(1, 0) radius=0.4 amplitude=1", "center=(0.5, 0) radius=0.35 amplitude=100")
        .replace("t_end = 0.5", "t_end = 2")
        .replace("dt = 0.05", "dt = 2")
        .replace("snapshot_stride = 5", "snapshot_stride = 1");
    let config = write_config(dir.path(), &text);
    let out = vortexlab(&["simulate", "exterior", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read_to_string(dir.path().join("provenance.txt")).unwrap().contains("aborted = "));
    assert!(!read_csv(&dir.path().join("diagnostics.csv")).1.is_empty());
}

#[test]
fn converge_needs_two_radii() {
    let dir = TempDir::new().unwrap();
    let text = format!("{COARSE_PLANE}{COARSE_EXTERIOR}[converge]\neps = 0.1\n");
    let out = vortexlab(&["converge", "--config", &write_config(dir.path(), &text)], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn converge_study() {
    let dir = TempDir::new().unwrap();
    let text = format!("{COARSE_PLANE}{COARSE_EXTERIOR}[converge]\neps = 0.2, 0.1\n");
    let out = vortexlab(&["converge", "--config", &write_config(dir.path(), &text)], dir.path());
    let code = out.status.code();
    assert!(code == Some(0) || code == Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("converge.csv");
    assert_eq!(read_csv(&path).0, ["eps", "e_T", "e_floor", "runtime_s"]);
    let floor = column(&path, "e_floor");
    assert!((floor[0] - floor[1]).abs() <= 1e-12 * floor[0], "{floor:?}");
    let e_t = column(&path, "e_T");
    assert_eq!(code == Some(0), e_t[1] < e_t[0]);
    assert!(dir.path().join("converge.svg").exists());
    assert!(dir.path().join("eps_0.1/diagnostics.csv").exists());
    assert!(dir.path().join("plane/config.echo").exists());
}

#[test]
fn picard_on_steady_and_moving_data() {
    let dir = TempDir::new().unwrap();
    let steady = COARSE_EXTERIOR.replace(
        "q0 = bump center=(1, 0) radius=0.4 amplitude=1 tilt=0",
        "q0 = ring radius=1 width=0.3 amplitude=1\ngamma = 0",
    ) + "[picard]\nn_iters = 3\nt0 = 0.2\n";
    let out = vortexlab(&["picard", "--config", &write_config(dir.path(), &steady)], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("picard.csv"));
    assert_eq!(header, ["iter", "d_n", "ratio"]);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][2], "");
    assert!(rows[1..].iter().all(|r| r[2] == "n/a"));

    let moving = format!("{COARSE_EXTERIOR}[picard]\nn_iters = 4\nt0 = 0.2\n");
    let out = vortexlab(&["picard", "--config", &write_config(dir.path(), &moving)], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join("picard.csv"));
    let ratios: Vec<f64> = rows[1..].iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(ratios.iter().all(|&r| r <= 0.6), "{ratios:?}");
}

#[test]
fn shipped_config_parses() {
    use vortexlab_cli::config::*;
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.ini");
    let file = ConfigFile::load(&path).unwrap();
    let plane = plane_config(&file).unwrap();
    let exterior = exterior_config(&file, true).unwrap();
    assert_eq!(plane.q0, exterior.q0);
    assert_eq!((plane.dt, plane.snapshot_stride), (exterior.dt, exterior.snapshot_stride));
    assert_eq!(picard_config(&file).unwrap().n_iters, 6);
    assert_eq!(converge_config(&file).unwrap().eps, vec![0.2, 0.1, 0.05]);
}
