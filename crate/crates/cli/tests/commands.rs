use std::process::Command;

use std::io::Write;
use tempfile::NamedTempFile;

const BARE_PI: &str = "[cable]\ndensity = 1\ntension = 1\nlength = 3.141592653589793\n";
const MIDPOINT: &str =
    "[cable]\ndensity = 1\ntension = 1\nlength = 1\n\n[[loads]]\nmass = 1\nposition = 0.5\n";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cableway(config: &str, args: &[&str]) -> Run {
    let mut file = NamedTempFile::new().unwrap();
    file.write_all(config.as_bytes()).unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_cableway"))
        .args(&args[..1])
        .arg("--config")
        .arg(file.path())
        .args(&args[1..])
        .output()
        .unwrap();
    Run {
        code: output.status.code().unwrap(),
        stdout: String::from_utf8(output.stdout).unwrap(),
        stderr: String::from_utf8(output.stderr).unwrap(),
    }
}

/// Data rows of a CSV report, parsed; empty cells become `None`.
fn csv_rows(text: &str) -> Vec<Vec<Option<f64>>> {
    text.lines()
        .skip(1)
        .filter(|line| !line.starts_with('#'))
        .map(|line| line.split(',').map(|c| c.parse().ok()).collect())
        .collect()
}

fn values(rows: &[Vec<Option<f64>>], column: usize) -> Vec<f64> {
    rows.iter().map(|r| r[column].unwrap()).collect()
}

#[test]
fn spectrum_bare_cable() {
    let run = cableway(BARE_PI, &["spectrum", "--format", "csv"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.starts_with("k,lambda,omega\n"));
    let rows = csv_rows(&run.stdout);
    assert_eq!(rows.len(), 3);
    for (k, row) in rows.iter().enumerate() {
        let exact = (k + 1) as f64;
        assert_eq!(row[0], Some(exact));
        assert!((row[1].unwrap() - exact).abs() < 1e-10);
        assert!((row[2].unwrap() - exact).abs() < 1e-10);
    }
    let table = cableway(BARE_PI, &["spectrum"]);
    assert_eq!(
        table
            .stdout
            .lines()
            .nth(1)
            .unwrap()
            .split_whitespace()
            .collect::<Vec<_>>(),
        ["1", "1.00000", "1.00000"]
    );
}

#[test]
fn spectrum_midpoint_mass() {
    let run = cableway(MIDPOINT, &["spectrum", "--format", "csv"]);
    assert_eq!(run.code, 0);
    let rows = csv_rows(&run.stdout);
    assert!((rows[0][1].unwrap() - 1.720_667_178_038_759_5).abs() < 1e-9);
}

#[test]
fn negative_tension_is_a_config_error() {
    let run = cableway(
        "[cable]\ndensity = 1\ntension = -1\nlength = 1\n",
        &["spectrum"],
    );
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("cable.tension"), "{}", run.stderr);
    assert!(run.stdout.is_empty());
}

#[test]
fn unknown_keys_and_bad_flags_are_config_errors() {
    let run = cableway(&format!("{BARE_PI}tensoin = 2\n"), &["spectrum"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("tensoin"));
    assert_eq!(cableway(BARE_PI, &["spectrum", "--format", "xml"]).code, 1);
    let missing = Command::new(env!("CARGO_BIN_EXE_cableway"))
        .args(["spectrum", "--config", "/nonexistent/cable.toml"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn supercritical_system_motion_rejected() {
    let config = format!("{BARE_PI}[motion]\nmode = \"system-moving\"\nspeed = 1.5\n");
    let run = cableway(&config, &["spectrum"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("supercritical speed"));
}

#[test]
fn root_shortfall_prints_partial_rows() {
    let config = format!("{BARE_PI}[solve]\ncount = 4\nlambda_max = 2.5\n");
    let run = cableway(&config, &["spectrum", "--format", "csv"]);
    assert_eq!(run.code, 2);
    let rows = csv_rows(&run.stdout);
    assert_eq!(rows.len(), 2);
    assert!(run.stdout.lines().last().unwrap().starts_with("# warning"));
}

#[test]
fn sweep_speed_row_count() {
    let config = format!(
        "{MIDPOINT}[motion]\nmode = \"loads-moving\"\n[solve]\ncount = 2\n\
         [sweep]\nparam = \"speed\"\nfrom = 0\nto = 1\nsteps = 3\n"
    );
    let run = cableway(&config, &["sweep"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.starts_with("param,k,lambda,omega\n"));
    assert_eq!(csv_rows(&run.stdout).len(), 6);
}

#[test]
fn sweep_position_is_mirror_symmetric() {
    let run = cableway(
        MIDPOINT,
        &[
            "sweep",
            "--param",
            "position:0",
            "--from",
            "0.1",
            "--to",
            "0.9",
            "--steps",
            "9",
        ],
    );
    assert_eq!(run.code, 0);
    let rows = csv_rows(&run.stdout);
    let lambdas = values(&rows, 2);
    let per_point = 3;
    for j in 0..9 {
        for k in 0..per_point {
            let a = lambdas[j * per_point + k];
            let b = lambdas[(8 - j) * per_point + k];
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn sweep_mass_from_zero_reproduces_bare_cable() {
    let run = cableway(
        MIDPOINT,
        &[
            "sweep", "--param", "mass:0", "--from", "0", "--to", "1", "--steps", "2",
        ],
    );
    assert_eq!(run.code, 0);
    let rows = csv_rows(&run.stdout);
    for (k, row) in rows[..3].iter().enumerate() {
        let exact = std::f64::consts::PI * (k + 1) as f64;
        assert!((row[2].unwrap() - exact).abs() < 1e-10);
    }
}

#[test]
fn sweep_gaps_are_empty_cells() {
    let run = cableway(
        MIDPOINT,
        &[
            "sweep",
            "--param",
            "position:0",
            "--from",
            "0.5",
            "--to",
            "1.5",
            "--steps",
            "2",
        ],
    );
    assert_eq!(run.code, 2);
    let gap_rows: Vec<&str> = run
        .stdout
        .lines()
        .filter(|l| l.starts_with("1.5"))
        .collect();
    assert_eq!(gap_rows.len(), 3);
    assert!(gap_rows.iter().all(|l| l.ends_with(",,")));
    assert!(run.stdout.contains("# warning: position:0"));
    assert_eq!(
        cableway(
            MIDPOINT,
            &["sweep", "--param", "mass:1", "--from", "0", "--to", "1", "--steps", "2"]
        )
        .code,
        1
    );
    assert_eq!(cableway(MIDPOINT, &["sweep", "--param", "mass:0"]).code, 1);
}

#[test]
fn oracle_bare_cable() {
    let config = format!("{BARE_PI}[oracle]\nnodes = 1000\n");
    let run = cableway(&config, &["oracle", "--format", "csv"]);
    assert_eq!(run.code, 0);
    assert!(run
        .stdout
        .starts_with("k,transfer,fd,abs_delta,rel_delta\n"));
    for row in csv_rows(&run.stdout) {
        assert!(row[3].unwrap() < 1e-4);
    }
}

#[test]
fn oracle_midpoint_mass() {
    let run = cableway(MIDPOINT, &["oracle", "--format", "csv", "--nodes", "2000"]);
    assert_eq!(run.code, 0);
    let rows = csv_rows(&run.stdout);
    assert!(rows[0][3].unwrap() < 5e-4);
}

#[test]
fn oracle_coarse_grid_mismatch() {
    let config = format!("{MIDPOINT}[oracle]\nnodes = 20\n");
    let run = cableway(&config, &["oracle", "--format", "csv"]);
    assert_eq!(run.code, 3);
    let rows = csv_rows(&run.stdout);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().any(|r| r[4].unwrap() > 5e-3));
    assert!(run.stdout.contains("# mismatch"));
}

#[test]
fn oracle_rejects_moving_instances_and_tiny_grids() {
    let moving = format!("{MIDPOINT}[motion]\nmode = \"loads-moving\"\n");
    assert_eq!(cableway(&moving, &["oracle"]).code, 1);
    assert_eq!(cableway(MIDPOINT, &["oracle", "--nodes", "4"]).code, 1);
}

#[test]
fn verify_default_seed_passes() {
    let run = cableway("", &["verify"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(run.stdout.lines().count(), 6);
    assert!(run.stdout.lines().skip(1).all(|l| l.ends_with("pass")));
}

#[test]
fn verify_fault_injection_fails_theorem_four() {
    let run = cableway(
        "",
        &[
            "verify",
            "--trials",
            "10",
            "--inject-fault",
            "interface-sign",
        ],
    );
    assert_eq!(run.code, 4);
    assert!(run.stdout.contains("# counterexample theorem-4"));
}

#[test]
fn verify_zero_trials_is_invalid() {
    assert_eq!(cableway("[verify]\ntrials = 0\n", &["verify"]).code, 1);
    assert_eq!(cableway("", &["verify", "--trials", "0"]).code, 1);
}

#[test]
fn moving_zero_speed_matches_static() {
    let config = format!(
        "{MIDPOINT}[motion]\nmode = \"loads-moving\"\nspeed = 0\n[window]\nt0 = 0\nt1 = 2\nsteps = 4\n"
    );
    let run = cableway(&config, &["moving"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("t,k,lambda,omega\n"));
    let fixed = csv_rows(&cableway(MIDPOINT, &["spectrum", "--format", "csv"]).stdout);
    let rows = csv_rows(&run.stdout);
    assert_eq!(rows.len(), 12);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[2], fixed[i % 3][1]);
    }
}

#[test]
fn moving_system_mode_closed_form() {
    let config = "[cable]\ndensity = 1\ntension = 4\nlength = 3.141592653589793\n\
                  [motion]\nmode = \"system-moving\"\nspeed = 1\n\
                  [window]\nt0 = 0\nt1 = 1\nsteps = 5\n";
    let run = cableway(config, &["moving"]);
    assert_eq!(run.code, 0);
    let rows = csv_rows(&run.stdout);
    let first: Vec<_> = rows.iter().filter(|r| r[1] == Some(1.0)).collect();
    assert_eq!(first.len(), 5);
    assert!(first.iter().all(|r| r[3] == Some(1.5)));
}

#[test]
fn moving_load_leaving_the_cable_is_rejected() {
    let config = format!(
        "{MIDPOINT}[motion]\nmode = \"loads-moving\"\nspeed = 1\n[window]\nt0 = 0\nt1 = 0.6\nsteps = 4\n"
    );
    let run = cableway(&config, &["moving"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("loads[0]"));
    assert_eq!(cableway(MIDPOINT, &["moving"]).code, 1);
}

#[test]
fn output_file_and_line_endings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let run = cableway(
        MIDPOINT,
        &[
            "spectrum",
            "--format",
            "csv",
            "--output",
            path.to_str().unwrap(),
        ],
    );
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("k,lambda,omega\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn help_documents_defaults() {
    let out = Command::new(env!("CARGO_BIN_EXE_cableway"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for key in [
        "oversample (16)",
        "nodes (2000)",
        "threshold (5e-3)",
        "trials (50)",
    ] {
        assert!(text.contains(key), "{key}");
    }
}
