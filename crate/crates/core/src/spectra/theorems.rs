//! Randomized checks of the qualitative spectral properties of loaded cables.
//!
//! Each check draws `trials` random instances from a seeded ChaCha stream
//! (mass ratios `m / (ρl)` log-uniform in `[0.01, 100]`, positions uniform)
//! and tests one statement:
//!
//! - even eigenvalues of a midpoint-loaded cable equal the bare `2πk / l`;
//! - a single load lowers the first eigenvalue below `π / l`;
//! - among positions on a symmetric 21-point grid the midpoint minimizes `λ₁`;
//! - loads never raise any eigenvalue above the bare `kπ / l`;
//! - for one moving load every eigenvalue is non-increasing in the speed.
//!
//! Failures are data: the report carries the first counterexample found.

use super::layout_eigenvalues;
use crate::model::{CableSpec, LoadSpec, MotionSpec, ProblemInstance};
use crate::rootfind::RootSearchConfig;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tolerance on equality statements (relative).
pub const EQUALITY_TOL: f64 = 1e-9;
/// Allowed violation of inequality statements.
pub const INEQUALITY_MARGIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    EvenEigenvaluesUnchanged,
    FirstEigenvalueLowered,
    MidpointMinimizesFirst,
    LoadsNeverRaise,
    SpeedLowersEigenvalues,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::EvenEigenvaluesUnchanged,
        Theorem::FirstEigenvalueLowered,
        Theorem::MidpointMinimizesFirst,
        Theorem::LoadsNeverRaise,
        Theorem::SpeedLowersEigenvalues,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Theorem::EvenEigenvaluesUnchanged => "theorem-1 midpoint even eigenvalues",
            Theorem::FirstEigenvalueLowered => "theorem-2 first eigenvalue lowered",
            Theorem::MidpointMinimizesFirst => "theorem-3 midpoint minimizes first",
            Theorem::LoadsNeverRaise => "theorem-4 loads never raise",
            Theorem::SpeedLowersEigenvalues => "proposition speed lowers eigenvalues",
        }
    }
}

/// Deliberate corruption of the solver, used to confirm the checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Flip the sign of the slope jump at every load.
    FlipInterfaceSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCheck {
    pub theorem: Theorem,
    pub trials: usize,
    pub passed: usize,
    /// First failing instance, described.
    pub counterexample: Option<String>,
}

impl TheoremCheck {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<TheoremCheck>,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(TheoremCheck::ok)
    }
}

/// Random cable: `ρ ∈ [0.5, 2]`, `T ∈ [0.5, 5]`, `l ∈ [0.5, 3]`.
pub fn random_cable<R: Rng>(rng: &mut R) -> CableSpec {
    CableSpec {
        density: rng.random_range(0.5..2.0),
        tension: rng.random_range(0.5..5.0),
        length: rng.random_range(0.5..3.0),
    }
}

/// Mass with `m / (ρl)` log-uniform in `[0.01, 100]`.
pub fn random_mass<R: Rng>(rng: &mut R, cable: &CableSpec) -> f64 {
    let ratio = libm::pow(10.0, rng.random_range(-2.0..=2.0));
    ratio * cable.density * cable.length
}

/// Random static instance with `1..=max_loads` loads, positions uniform but
/// kept at least `0.02 l` from each other and from the supports.
pub fn random_instance<R: Rng>(rng: &mut R, max_loads: usize) -> ProblemInstance {
    let cable = random_cable(rng);
    let n = rng.random_range(1..=max_loads.max(1));
    let l = cable.length;
    let positions = loop {
        let mut p: Vec<f64> = (0..n)
            .map(|_| rng.random_range(0.02 * l..0.98 * l))
            .collect();
        p.sort_by(f64::total_cmp);
        if p.windows(2).all(|w| w[1] - w[0] >= 0.02 * l) {
            break p;
        }
    };
    let loads = positions
        .into_iter()
        .map(|position| LoadSpec::new(random_mass(rng, &cable), position))
        .collect();
    ProblemInstance::new(cable, loads, MotionSpec::default()).expect("random instance is valid")
}

struct Solver {
    coupling_sign: f64,
}

impl Solver {
    fn new(fault: Fault) -> Self {
        Solver {
            coupling_sign: match fault {
                Fault::None => 1.0,
                Fault::FlipInterfaceSign => -1.0,
            },
        }
    }

    fn eigenvalues(
        &self,
        cable: &CableSpec,
        positions: &[f64],
        masses: &[f64],
        coupling: f64,
        count: usize,
    ) -> Result<Vec<f64>, String> {
        let mut intervals = Vec::with_capacity(positions.len() + 1);
        let mut left = 0.0;
        for &p in positions {
            intervals.push(p - left);
            left = p;
        }
        intervals.push(cable.length - left);
        let config = RootSearchConfig::new(count);
        layout_eigenvalues(
            cable.density,
            &intervals,
            masses,
            self.coupling_sign * coupling,
            &config,
        )
        .map(|list| list.roots)
        .map_err(|err| format!("solver failed: {err}"))
    }
}

fn describe(cable: &CableSpec, positions: &[f64], masses: &[f64]) -> String {
    format!(
        "rho={} T={} l={} loads={:?}",
        cable.density,
        cable.tension,
        cable.length,
        positions
            .iter()
            .zip(masses)
            .map(|(p, m)| (*m, *p))
            .collect::<Vec<_>>()
    )
}

type TrialOutcome = Result<(), String>;

fn check_even(rng: &mut ChaCha8Rng, solver: &Solver) -> TrialOutcome {
    let cable = random_cable(rng);
    let mass = random_mass(rng, &cable);
    let l = cable.length;
    let positions = [0.5 * l];
    let roots = solver.eigenvalues(&cable, &positions, &[mass], 1.0, 10)?;
    for k in 1..=5 {
        let expect = 2.0 * PI * k as f64 / l;
        let got = roots[2 * k - 1];
        if (got - expect).abs() > EQUALITY_TOL * expect {
            return Err(format!(
                "{}: lambda_{} = {got}, expected {expect}",
                describe(&cable, &positions, &[mass]),
                2 * k
            ));
        }
    }
    Ok(())
}

fn check_first_lowered(rng: &mut ChaCha8Rng, solver: &Solver) -> TrialOutcome {
    let cable = random_cable(rng);
    let mass = random_mass(rng, &cable);
    let l = cable.length;
    let positions = [rng.random_range(0.01 * l..0.99 * l)];
    let roots = solver.eigenvalues(&cable, &positions, &[mass], 1.0, 1)?;
    let bare = PI / l;
    if bare - roots[0] < -INEQUALITY_MARGIN {
        return Err(format!(
            "{}: lambda_1 = {} is not below {bare}",
            describe(&cable, &positions, &[mass]),
            roots[0]
        ));
    }
    Ok(())
}

fn check_midpoint_minimizes(rng: &mut ChaCha8Rng, solver: &Solver) -> TrialOutcome {
    let cable = random_cable(rng);
    let mass = random_mass(rng, &cable);
    let l = cable.length;
    let first_at = |p: f64| -> Result<f64, String> {
        Ok(solver.eigenvalues(&cable, &[p], &[mass], 1.0, 1)?[0])
    };
    let centre = first_at(0.5 * l)?;
    for j in 1..=21 {
        let p = j as f64 * l / 22.0;
        let other = first_at(p)?;
        if other - centre < -INEQUALITY_MARGIN {
            return Err(format!(
                "{}: lambda_1 at {p} = {other} below midpoint value {centre}",
                describe(&cable, &[0.5 * l], &[mass])
            ));
        }
    }
    Ok(())
}

fn check_never_raise(rng: &mut ChaCha8Rng, solver: &Solver) -> TrialOutcome {
    let inst = random_instance(rng, 4);
    let cable = *inst.cable();
    let positions: Vec<f64> = inst.loads().iter().map(|load| load.position).collect();
    let masses = inst.masses();
    let roots = solver.eigenvalues(&cable, &positions, &masses, 1.0, 8)?;
    for (k, got) in roots.iter().enumerate() {
        let bare = PI * (k + 1) as f64 / cable.length;
        if bare - got < -INEQUALITY_MARGIN {
            return Err(format!(
                "{}: lambda_{} = {got} exceeds bare value {bare}",
                describe(&cable, &positions, &masses),
                k + 1
            ));
        }
    }
    Ok(())
}

fn check_speed(rng: &mut ChaCha8Rng, solver: &Solver) -> TrialOutcome {
    let cable = random_cable(rng);
    let mass = random_mass(rng, &cable);
    let l = cable.length;
    let positions = [rng.random_range(0.01 * l..0.99 * l)];
    let a = cable.wave_speed();
    let speeds = [0.0, 0.25 * a, 0.5 * a, 0.75 * a, a, 1.5 * a];
    let motion = |v| MotionSpec::loads_moving(v, Default::default());
    let mut previous: Option<(f64, Vec<f64>)> = None;
    for v in speeds {
        let coupling = crate::charfn::coupling_factor(&motion(v), a);
        let roots = solver.eigenvalues(&cable, &positions, &[mass], coupling, 3)?;
        if let Some((pv, prev)) = &previous {
            for k in 0..3 {
                if prev[k] - roots[k] < -INEQUALITY_MARGIN {
                    return Err(format!(
                        "{}: lambda_{} rises from {} at v={pv} to {} at v={v}",
                        describe(&cable, &positions, &[mass]),
                        k + 1,
                        prev[k],
                        roots[k]
                    ));
                }
            }
        }
        previous = Some((v, roots));
    }
    Ok(())
}

/// Runs every check on `trials` instances drawn from `seed`.
pub fn theorem_checks(seed: u64, trials: usize, fault: Fault) -> TheoremReport {
    let solver = Solver::new(fault);
    let checks = Theorem::ALL
        .iter()
        .enumerate()
        .map(|(index, &theorem)| {
            // Independent stream per theorem so adding trials to one check
            // does not reshuffle the others.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            let run = match theorem {
                Theorem::EvenEigenvaluesUnchanged => check_even,
                Theorem::FirstEigenvalueLowered => check_first_lowered,
                Theorem::MidpointMinimizesFirst => check_midpoint_minimizes,
                Theorem::LoadsNeverRaise => check_never_raise,
                Theorem::SpeedLowersEigenvalues => check_speed,
            };
            let mut passed = 0;
            let mut counterexample = None;
            for _ in 0..trials {
                match run(&mut rng, &solver) {
                    Ok(()) => passed += 1,
                    Err(why) => {
                        counterexample.get_or_insert(why);
                    }
                }
            }
            TheoremCheck {
                theorem,
                trials,
                passed,
                counterexample,
            }
        })
        .collect();
    TheoremReport {
        seed,
        trials,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_pass_on_small_run() {
        let report = theorem_checks(7, 5, Fault::None);
        for check in &report.checks {
            assert!(check.ok(), "{:?}", check);
        }
        assert_eq!(report.checks.len(), 5);
    }

    #[test]
    fn flipped_interface_breaks_loads_never_raise() {
        let report = theorem_checks(7, 3, Fault::FlipInterfaceSign);
        let t4 = report
            .checks
            .iter()
            .find(|c| c.theorem == Theorem::LoadsNeverRaise)
            .unwrap();
        assert!(!t4.ok());
        assert!(t4.counterexample.is_some());
    }

    #[test]
    fn reports_are_reproducible() {
        assert_eq!(
            theorem_checks(3, 4, Fault::None),
            theorem_checks(3, 4, Fault::None)
        );
    }

    #[test]
    fn random_instances_are_well_separated() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let inst = random_instance(&mut rng, 4);
            let l = inst.length();
            assert!(inst.intervals().iter().all(|&b| b >= 0.02 * l - 1e-12));
            let ratio_ok = inst.loads().iter().all(|load| {
                let r = load.mass / (inst.cable().density * l);
                (0.01 - 1e-12..=100.0 + 1e-9).contains(&r)
            });
            assert!(ratio_ok);
        }
    }
}
