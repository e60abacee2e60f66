use std::path::PathBuf;

use cableway::model::linspace;
use cableway::oracle::fd_spectrum;
use cableway::spectra::theorems::{theorem_checks, Fault};
use cableway::spectra::{spectrum_at, static_spectrum, sweep, SpectrumError, SweepParameter};
use cableway::{MotionMode, RootError, RootWarning, TimeWindow};

use crate::config::{parse_sweep_parameter, ConfigError, Format, RunConfig};
use crate::output::{Cell, Table};
use crate::{
    Cli, Command, FaultName, EXIT_CONFIG, EXIT_OK, EXIT_ORACLE_MISMATCH, EXIT_SHORTFALL,
    EXIT_THEOREM_FAILURE,
};

/// Result of one invocation: exit code, rendered report, diagnostics, and
/// where the report should go (`None` for standard output).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
    pub diagnostics: String,
    pub destination: Option<PathBuf>,
}

impl Outcome {
    fn config_error(err: ConfigError) -> Self {
        Outcome {
            code: EXIT_CONFIG,
            report: String::new(),
            diagnostics: format!("error: {err}\n"),
            destination: None,
        }
    }
}

type Report = Result<(i32, Table), ConfigError>;

pub fn run(cli: &Cli) -> Outcome {
    let common = cli.command.common();
    let config = match RunConfig::load(&common.config) {
        Ok(config) => config,
        Err(err) => return Outcome::config_error(err),
    };
    let default_format = match cli.command {
        Command::Sweep { .. } | Command::Moving { .. } => Format::Csv,
        _ => Format::Table,
    };
    let format = common
        .format
        .or(config.output.format)
        .unwrap_or(default_format);

    let report = match &cli.command {
        Command::Spectrum(_) => spectrum(&config),
        Command::Sweep {
            param,
            from,
            to,
            steps,
            ..
        } => run_sweep(&config, param.as_deref(), *from, *to, *steps),
        Command::Moving {
            from, to, steps, ..
        } => moving(&config, *from, *to, *steps),
        Command::Oracle { nodes, .. } => oracle(&config, *nodes),
        Command::Verify {
            seed,
            trials,
            inject_fault,
            ..
        } => verify(&config, *seed, *trials, *inject_fault),
    };
    match report {
        Ok((code, table)) => {
            let destination = common.output.clone().or(config.output.path);
            // Notes are part of the report; echo them when it goes to a file.
            let diagnostics = match destination {
                Some(_) => table.notes.iter().map(|note| format!("{note}\n")).collect(),
                None => String::new(),
            };
            Outcome {
                code,
                report: table.render(format),
                diagnostics,
                destination,
            }
        }
        Err(err) => Outcome::config_error(err),
    }
}

fn warning_notes(table: &mut Table, warnings: &[RootWarning]) {
    for w in warnings {
        match w {
            RootWarning::NearDoubleRoot { lambda, value } => table.note(format!(
                "warning: near-double root suspected at lambda = {lambda:.16e} (f = {value:e})"
            )),
            RootWarning::IterationCap { lambda } => table.note(format!(
                "warning: bisection hit max_iter near lambda = {lambda:.16e}"
            )),
        }
    }
}

fn spectrum_rows(table: &mut Table, lead: Option<f64>, lambdas: &[f64], wave_speed: f64) {
    for (k, &lambda) in lambdas.iter().enumerate() {
        let mut row: Vec<Cell> = lead.map(Cell::from).into_iter().collect();
        row.extend([(k + 1).into(), lambda.into(), (wave_speed * lambda).into()]);
        table.push(row);
    }
}

/// Handles one spectrum solve: rows on success, partial rows plus a warning
/// on a root-search shortfall, config error on an invalid instant.
fn solve_into(
    table: &mut Table,
    config: &RunConfig,
    lead: Option<f64>,
    t: f64,
) -> Result<i32, ConfigError> {
    let instance = config.instance()?;
    let search = config.search()?;
    let a = instance.wave_speed();
    match spectrum_at(&instance, t, &search) {
        Ok(result) => {
            spectrum_rows(table, lead, &result.lambdas, a);
            warning_notes(table, &result.diagnostics.warnings);
            Ok(EXIT_OK)
        }
        Err(SpectrumError::Model(err)) => Err(ConfigError::invalid(err.to_string())),
        Err(SpectrumError::Root(err)) => {
            spectrum_rows(table, lead, err.partial(), a);
            let at = lead
                .map(|t| format!(" at t = {t:.16e}"))
                .unwrap_or_default();
            table.note(format!("warning: {err}{at}"));
            if let RootError::FewerRootsFound { found, .. } = &err {
                warning_notes(table, &found.warnings);
            }
            Ok(EXIT_SHORTFALL)
        }
    }
}

fn spectrum(config: &RunConfig) -> Report {
    let mut table = Table::new(vec!["k", "lambda", "omega"]);
    let t = config.time_window()?.map_or(0.0, |w| w.t0);
    let code = solve_into(&mut table, config, None, t)?;
    Ok((code, table))
}

fn required<T>(value: Option<T>, key: &str) -> Result<T, ConfigError> {
    value.ok_or_else(|| ConfigError::invalid(format!("{key} is required")))
}

fn run_sweep(
    config: &RunConfig,
    param: Option<&str>,
    from: Option<f64>,
    to: Option<f64>,
    steps: Option<usize>,
) -> Report {
    let section = config.sweep.clone().unwrap_or_default();
    let name = required(param.map(str::to_string).or(section.param), "sweep.param")?;
    let parameter = parse_sweep_parameter(&name)?;
    let from = required(from.or(section.from), "sweep.from")?;
    let to = required(to.or(section.to), "sweep.to")?;
    let steps = required(steps.or(section.steps), "sweep.steps")?;
    if steps == 0 {
        return Err(ConfigError::invalid("sweep.steps must be at least 1"));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(ConfigError::invalid(
            "sweep.from and sweep.to must be finite",
        ));
    }
    let instance = config.instance()?;
    let search = config.search()?;
    if let SweepParameter::Mass(i) | SweepParameter::Position(i) = parameter {
        if i >= instance.loads().len() {
            return Err(ConfigError::invalid(format!(
                "sweep.param {name}: there is no loads[{i}]"
            )));
        }
    }

    let grid = linspace(from, to, steps);
    let result = sweep(&instance, parameter, &grid, &search);
    let mut table = Table::new(vec!["param", "k", "lambda", "omega"]);
    for (j, &value) in result.grid.iter().enumerate() {
        for (k, lambda) in result.lambdas[j].iter().enumerate() {
            table.push(vec![
                value.into(),
                (k + 1).into(),
                (*lambda).into(),
                lambda.map(|l| result.wave_speed * l).into(),
            ]);
        }
        if let Some(err) = &result.failures[j] {
            table.note(format!("warning: {name} = {value:.16e}: {err}"));
        }
    }
    let code = if result.is_complete() {
        EXIT_OK
    } else {
        EXIT_SHORTFALL
    };
    Ok((code, table))
}

fn moving(config: &RunConfig, from: Option<f64>, to: Option<f64>, steps: Option<usize>) -> Report {
    let window = config.window;
    let t0 = required(from.or(window.map(|w| w.t0)), "window.t0")?;
    let t1 = required(to.or(window.map(|w| w.t1)), "window.t1")?;
    let steps = required(steps.or(window.map(|w| w.steps)), "window.steps")?;
    let window = TimeWindow::new(t0, t1, steps).map_err(|e| ConfigError::invalid(e.to_string()))?;
    let instance = config.instance()?;
    instance
        .check_window(&window)
        .map_err(|e| ConfigError::invalid(e.to_string()))?;

    let mut table = Table::new(vec!["t", "k", "lambda", "omega"]);
    let mut code = EXIT_OK;
    for t in window.times() {
        if solve_into(&mut table, config, Some(t), t)? != EXIT_OK {
            code = EXIT_SHORTFALL;
        }
    }
    Ok((code, table))
}

fn oracle(config: &RunConfig, nodes: Option<usize>) -> Report {
    let instance = config.instance()?;
    if instance.motion().mode != MotionMode::Static {
        return Err(ConfigError::invalid(
            "oracle compares stationary instances only; set motion.mode = \"static\"",
        ));
    }
    let search = config.search()?;
    let nodes = nodes.unwrap_or(config.oracle.nodes);
    let threshold = config.oracle.threshold;
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(ConfigError::invalid("oracle.threshold must be positive"));
    }
    let fd = fd_spectrum(&instance, nodes, search.count)
        .map_err(|e| ConfigError::invalid(e.to_string()))?
        .roots;

    let mut table = Table::new(vec!["k", "transfer", "fd", "abs_delta", "rel_delta"]);
    let (transfer, mut code) = match static_spectrum(&instance, &search) {
        Ok(result) => {
            warning_notes(&mut table, &result.diagnostics.warnings);
            (result.lambdas, EXIT_OK)
        }
        Err(err) => {
            table.note(format!("warning: {err}"));
            (err.partial().to_vec(), EXIT_SHORTFALL)
        }
    };
    let mut mismatches = Vec::new();
    for (k, (&exact, &approx)) in transfer.iter().zip(&fd).enumerate() {
        let abs = (approx - exact).abs();
        let rel = abs / exact.abs();
        table.push(vec![
            (k + 1).into(),
            exact.into(),
            approx.into(),
            abs.into(),
            rel.into(),
        ]);
        if !(rel <= threshold) {
            mismatches.push(format!(
                "mismatch: k = {} rel_delta = {rel:e} exceeds threshold {threshold:e}",
                k + 1
            ));
        }
    }
    if !mismatches.is_empty() {
        mismatches.into_iter().for_each(|m| table.note(m));
        code = EXIT_ORACLE_MISMATCH;
    }
    Ok((code, table))
}

fn verify(
    config: &RunConfig,
    seed: Option<u64>,
    trials: Option<usize>,
    fault: Option<FaultName>,
) -> Report {
    let seed = seed.unwrap_or(config.verify.seed);
    let trials = trials.unwrap_or(config.verify.trials);
    if trials == 0 {
        return Err(ConfigError::invalid("verify.trials must be at least 1"));
    }
    let fault = match fault {
        Some(FaultName::InterfaceSign) => Fault::FlipInterfaceSign,
        None => Fault::None,
    };
    let report = theorem_checks(seed, trials, fault);
    let mut table = Table::new(vec!["check", "trials", "passed", "result"]);
    for check in &report.checks {
        table.push(vec![
            check.theorem.label().into(),
            check.trials.into(),
            check.passed.into(),
            if check.ok() { "pass" } else { "FAIL" }.into(),
        ]);
        if let Some(why) = &check.counterexample {
            table.note(format!("counterexample {}: {why}", check.theorem.label()));
        }
    }
    let code = if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_THEOREM_FAILURE
    };
    Ok((code, table))
}
