//! Domain types and validation.
//!
//! Units are whatever the caller uses consistently; nothing is converted.
//! Every type here is immutable once constructed through its validating
//! constructor.

use alloc::vec::Vec;
use core::fmt;

/// Continuous parameters of the cable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CableSpec {
    /// Mass per unit length `ρ`.
    pub density: f64,
    /// Tension `T`.
    pub tension: f64,
    /// Span length `l`.
    pub length: f64,
}

impl CableSpec {
    pub fn new(density: f64, tension: f64, length: f64) -> Result<Self, ModelError> {
        let cable = CableSpec {
            density,
            tension,
            length,
        };
        cable.check()?;
        Ok(cable)
    }

    fn check(&self) -> Result<(), ModelError> {
        positive("cable.density", self.density)?;
        positive("cable.tension", self.tension)?;
        positive("cable.length", self.length)?;
        Ok(())
    }

    /// Wave speed `a = sqrt(T / ρ)`.
    pub fn wave_speed(&self) -> f64 {
        libm::sqrt(self.tension / self.density)
    }
}

/// Wave speed `a = sqrt(T / ρ)` of a cable.
pub fn wave_speed(cable: &CableSpec) -> f64 {
    cable.wave_speed()
}

/// A point mass attached to the cable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadSpec {
    pub mass: f64,
    /// Distance from the left support, strictly inside `(0, l)`.
    pub position: f64,
}

impl LoadSpec {
    pub fn new(mass: f64, position: f64) -> Self {
        LoadSpec { mass, position }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MotionMode {
    /// Loads fixed to a stationary cable.
    #[default]
    Static,
    /// Loads travel along the cable at speed `v`; positions are `l_i + v t`.
    LoadsMoving,
    /// The whole cable translates at speed `v` (bare cable only).
    SystemMoving,
}

/// Coupling factor applied to moving-load inertia.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorMode {
    /// `1 + v²/a²`; reduces to the static problem at `v = 0`.
    #[default]
    Normalized,
    /// `a² + v²`, the unnormalized factor, kept for comparison.
    AsPrinted,
}

/// Frequency formula for the whole-system motion without the Coriolis term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyFormula {
    /// `ω_k = (πk / l) sqrt(a² − v²)`.
    #[default]
    Corrected,
    /// `ω_k = (πk / l) sqrt((a² − v²) / a)`.
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionSpec {
    pub mode: MotionMode,
    /// Speed `v ≥ 0` of the loads or of the whole system.
    pub speed: f64,
    /// Keep the Coriolis term (system-moving only).
    pub coriolis: bool,
    pub factor_mode: FactorMode,
    pub frequency_formula: FrequencyFormula,
    /// `dl/dt` of the span for the system-moving mode.
    pub length_rate: f64,
}

impl Default for MotionSpec {
    fn default() -> Self {
        MotionSpec {
            mode: MotionMode::Static,
            speed: 0.0,
            coriolis: true,
            factor_mode: FactorMode::Normalized,
            frequency_formula: FrequencyFormula::Corrected,
            length_rate: 0.0,
        }
    }
}

impl MotionSpec {
    pub fn stationary() -> Self {
        Self::default()
    }

    pub fn loads_moving(speed: f64, factor_mode: FactorMode) -> Self {
        MotionSpec {
            mode: MotionMode::LoadsMoving,
            speed,
            factor_mode,
            ..Self::default()
        }
    }

    pub fn system_moving(speed: f64, coriolis: bool, formula: FrequencyFormula) -> Self {
        MotionSpec {
            mode: MotionMode::SystemMoving,
            speed,
            coriolis,
            frequency_formula: formula,
            ..Self::default()
        }
    }
}

/// Closed time interval sampled at `steps` evenly spaced instants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub t0: f64,
    pub t1: f64,
    /// Number of samples, endpoints included (1 means `t0` only).
    pub steps: usize,
}

impl TimeWindow {
    pub fn new(t0: f64, t1: f64, steps: usize) -> Result<Self, ModelError> {
        if !t0.is_finite() || !t1.is_finite() || t0 > t1 {
            return Err(ModelError::InvalidWindow { t0, t1 });
        }
        if steps == 0 {
            return Err(ModelError::NonPositive {
                field: "window.steps",
                value: 0.0,
            });
        }
        Ok(TimeWindow { t0, t1, steps })
    }

    /// The sample instants, in increasing order.
    pub fn times(&self) -> Vec<f64> {
        linspace(self.t0, self.t1, self.steps)
    }
}

/// `count` evenly spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![from],
        _ => {
            let step = (to - from) / (count - 1) as f64;
            (0..count)
                .map(|j| {
                    if j + 1 == count {
                        to
                    } else {
                        from + step * j as f64
                    }
                })
                .collect()
        }
    }
}

/// A validated problem: cable, ordered loads with nonzero mass, and motion.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    cable: CableSpec,
    loads: Vec<LoadSpec>,
    motion: MotionSpec,
    intervals: Vec<f64>,
}

impl ProblemInstance {
    /// Validates the inputs. Zero-mass loads are dropped after their
    /// positions have been checked.
    pub fn new(
        cable: CableSpec,
        loads: Vec<LoadSpec>,
        motion: MotionSpec,
    ) -> Result<Self, ModelError> {
        cable.check()?;
        let l = cable.length;
        for (index, load) in loads.iter().enumerate() {
            if !load.mass.is_finite() || load.mass < 0.0 {
                return Err(ModelError::InvalidMass {
                    index,
                    mass: load.mass,
                });
            }
            if !load.position.is_finite() || load.position <= 0.0 || load.position >= l {
                return Err(ModelError::LoadOutOfRange {
                    index,
                    position: load.position,
                    length: l,
                });
            }
            if index > 0 && load.position <= loads[index - 1].position {
                return Err(ModelError::LoadsNotIncreasing { index });
            }
        }
        if !motion.speed.is_finite() || motion.speed < 0.0 {
            return Err(ModelError::InvalidSpeed {
                speed: motion.speed,
            });
        }
        if !motion.length_rate.is_finite() {
            return Err(ModelError::NonFinite {
                field: "motion.length_rate",
            });
        }
        let loads: Vec<LoadSpec> = loads.into_iter().filter(|load| load.mass > 0.0).collect();
        if motion.mode == MotionMode::SystemMoving {
            let a = cable.wave_speed();
            if motion.speed >= a {
                return Err(ModelError::SupercriticalSpeed {
                    speed: motion.speed,
                    wave_speed: a,
                });
            }
            if !loads.is_empty() {
                return Err(ModelError::LoadedSystemMotion);
            }
        }
        let intervals = intervals_of(l, loads.iter().map(|load| load.position));
        Ok(ProblemInstance {
            cable,
            loads,
            motion,
            intervals,
        })
    }

    /// Bare cable in static mode.
    pub fn bare(cable: CableSpec) -> Self {
        ProblemInstance {
            intervals: alloc::vec![cable.length],
            cable,
            loads: Vec::new(),
            motion: MotionSpec::default(),
        }
    }

    /// Re-runs validation on an already validated instance.
    pub fn validate(&self) -> Result<Self, ModelError> {
        Self::new(self.cable, self.loads.clone(), self.motion)
    }

    pub fn cable(&self) -> &CableSpec {
        &self.cable
    }

    pub fn loads(&self) -> &[LoadSpec] {
        &self.loads
    }

    pub fn motion(&self) -> &MotionSpec {
        &self.motion
    }

    pub fn length(&self) -> f64 {
        self.cable.length
    }

    pub fn wave_speed(&self) -> f64 {
        self.cable.wave_speed()
    }

    /// Interval lengths `b_1 … b_n` between consecutive supports and loads.
    pub fn intervals(&self) -> &[f64] {
        &self.intervals
    }

    pub fn masses(&self) -> Vec<f64> {
        self.loads.iter().map(|load| load.mass).collect()
    }

    /// Load positions at time `t`: `l_i + v t` in loads-moving mode, fixed
    /// otherwise.
    pub fn positions_at(&self, t: f64) -> Vec<f64> {
        let shift = match self.motion.mode {
            MotionMode::LoadsMoving => self.motion.speed * t,
            _ => 0.0,
        };
        self.loads
            .iter()
            .map(|load| load.position + shift)
            .collect()
    }

    /// Interval lengths at time `t`, or an error if a load has left `(0, l)`.
    pub fn intervals_at(&self, t: f64) -> Result<Vec<f64>, ModelError> {
        let l = self.cable.length;
        let positions = self.positions_at(t);
        for (index, &p) in positions.iter().enumerate() {
            if !(p > 0.0 && p < l) {
                return Err(ModelError::LoadExitsCable { index, t });
            }
        }
        Ok(intervals_of(l, positions.into_iter()))
    }

    /// Span `l(t) = l + (dl/dt) t` used by the system-moving mode.
    pub fn length_at(&self, t: f64) -> f64 {
        match self.motion.mode {
            MotionMode::SystemMoving => self.cable.length + self.motion.length_rate * t,
            _ => self.cable.length,
        }
    }

    /// Checks that `window` keeps the instance valid at every instant.
    ///
    /// Positions and the span are affine in `t`, so the endpoints suffice.
    pub fn check_window(&self, window: &TimeWindow) -> Result<(), ModelError> {
        for t in [window.t0, window.t1] {
            match self.motion.mode {
                MotionMode::Static => {}
                MotionMode::LoadsMoving => {
                    self.intervals_at(t)?;
                }
                MotionMode::SystemMoving => {
                    let lt = self.length_at(t);
                    if !(lt > 0.0) {
                        return Err(ModelError::LengthCollapses { t, length: lt });
                    }
                }
            }
        }
        Ok(())
    }

    /// Copy with a different motion specification, revalidated.
    pub fn with_motion(&self, motion: MotionSpec) -> Result<Self, ModelError> {
        Self::new(self.cable, self.loads.clone(), motion)
    }

    /// Copy with a different load list, revalidated.
    pub fn with_loads(&self, loads: Vec<LoadSpec>) -> Result<Self, ModelError> {
        Self::new(self.cable, loads, self.motion)
    }
}

fn intervals_of(length: f64, positions: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut intervals = Vec::new();
    let mut left = 0.0;
    for p in positions {
        intervals.push(p - left);
        left = p;
    }
    intervals.push(length - left);
    intervals
}

fn positive(field: &'static str, value: f64) -> Result<(), ModelError> {
    if !value.is_finite() {
        return Err(ModelError::NonFinite { field });
    }
    if value <= 0.0 {
        return Err(ModelError::NonPositive { field, value });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    NonPositive {
        field: &'static str,
        value: f64,
    },
    NonFinite {
        field: &'static str,
    },
    InvalidMass {
        index: usize,
        mass: f64,
    },
    LoadOutOfRange {
        index: usize,
        position: f64,
        length: f64,
    },
    LoadsNotIncreasing {
        index: usize,
    },
    InvalidSpeed {
        speed: f64,
    },
    SupercriticalSpeed {
        speed: f64,
        wave_speed: f64,
    },
    LoadedSystemMotion,
    InvalidWindow {
        t0: f64,
        t1: f64,
    },
    LoadExitsCable {
        index: usize,
        t: f64,
    },
    LengthCollapses {
        t: f64,
        length: f64,
    },
    NoSuchLoad {
        index: usize,
    },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::NonPositive { field, value } => {
                write!(f, "{field} must be positive, got {value}")
            }
            ModelError::NonFinite { field } => write!(f, "{field} must be finite"),
            ModelError::InvalidMass { index, mass } => {
                write!(f, "loads[{index}].mass must be finite and >= 0, got {mass}")
            }
            ModelError::LoadOutOfRange {
                index,
                position,
                length,
            } => write!(
                f,
                "loads[{index}].position = {position} is not strictly inside (0, {length})"
            ),
            ModelError::LoadsNotIncreasing { index } => write!(
                f,
                "loads[{index}].position must be greater than the previous load position"
            ),
            ModelError::InvalidSpeed { speed } => {
                write!(f, "motion.speed must be finite and >= 0, got {speed}")
            }
            ModelError::SupercriticalSpeed { speed, wave_speed } => write!(
                f,
                "supercritical speed: motion.speed = {speed} must be below the wave speed {wave_speed}"
            ),
            ModelError::LoadedSystemMotion => write!(
                f,
                "system-moving mode supports the bare cable only; remove the loads"
            ),
            ModelError::InvalidWindow { t0, t1 } => {
                write!(f, "window needs finite t0 <= t1, got [{t0}, {t1}]")
            }
            ModelError::LoadExitsCable { index, t } => {
                write!(f, "loads[{index}] leaves the cable at t = {t}")
            }
            ModelError::LengthCollapses { t, length } => {
                write!(f, "span length l(t) = {length} is not positive at t = {t}")
            }
            ModelError::NoSuchLoad { index } => write!(f, "there is no loads[{index}]"),
        }
    }
}

impl core::error::Error for ModelError {}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn unit() -> CableSpec {
        CableSpec::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn wave_speed_cases() {
        assert_eq!(wave_speed(&CableSpec::new(1.0, 1.0, 1.0).unwrap()), 1.0);
        assert_eq!(wave_speed(&CableSpec::new(1.0, 4.0, 1.0).unwrap()), 2.0);
        assert!((wave_speed(&CableSpec::new(2.45, 9.8, 1.0).unwrap()) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bare_instance_has_one_interval() {
        let inst = ProblemInstance::new(unit(), vec![], MotionSpec::default()).unwrap();
        assert_eq!(inst.intervals(), &[1.0]);
        assert_eq!(inst, ProblemInstance::bare(unit()));
    }

    #[test]
    fn midpoint_load_splits_span() {
        let inst =
            ProblemInstance::new(unit(), vec![LoadSpec::new(1.0, 0.5)], MotionSpec::default())
                .unwrap();
        assert_eq!(inst.intervals(), &[0.5, 0.5]);
    }

    #[test]
    fn supercritical_system_motion_rejected() {
        let err = ProblemInstance::new(
            unit(),
            vec![],
            MotionSpec::system_moving(1.5, true, FrequencyFormula::Corrected),
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::SupercriticalSpeed { .. }));
        assert!(alloc::format!("{err}").contains("supercritical speed"));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            CableSpec::new(1.0, -1.0, 1.0),
            Err(ModelError::NonPositive {
                field: "cable.tension",
                ..
            })
        ));
        assert!(CableSpec::new(f64::NAN, 1.0, 1.0).is_err());
        let motion = MotionSpec::default();
        for loads in [
            vec![LoadSpec::new(1.0, 0.0)],
            vec![LoadSpec::new(1.0, 1.0)],
            vec![LoadSpec::new(-1.0, 0.5)],
            vec![LoadSpec::new(1.0, 0.5), LoadSpec::new(1.0, 0.5)],
            vec![LoadSpec::new(1.0, 0.6), LoadSpec::new(1.0, 0.4)],
        ] {
            assert!(ProblemInstance::new(unit(), loads, motion).is_err());
        }
    }

    #[test]
    fn zero_mass_loads_dropped_and_validation_idempotent() {
        let inst = ProblemInstance::new(
            unit(),
            vec![LoadSpec::new(0.0, 0.2), LoadSpec::new(2.0, 0.7)],
            MotionSpec::default(),
        )
        .unwrap();
        assert_eq!(inst.loads().len(), 1);
        assert_eq!(inst.intervals().len(), 2);
        assert!((inst.intervals()[0] - 0.7).abs() < 1e-15);
        assert_eq!(inst.validate().unwrap(), inst);
    }

    #[test]
    fn window_must_keep_loads_on_cable() {
        let inst = ProblemInstance::new(
            unit(),
            vec![LoadSpec::new(1.0, 0.5)],
            MotionSpec::loads_moving(1.0, FactorMode::Normalized),
        )
        .unwrap();
        assert!(inst
            .check_window(&TimeWindow::new(-0.4, 0.4, 5).unwrap())
            .is_ok());
        assert!(matches!(
            inst.check_window(&TimeWindow::new(0.0, 0.6, 5).unwrap()),
            Err(ModelError::LoadExitsCable { index: 0, .. })
        ));
        assert!(TimeWindow::new(1.0, 0.0, 3).is_err());
        assert!(TimeWindow::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn shrinking_span_checked() {
        let mut motion = MotionSpec::system_moving(0.5, true, FrequencyFormula::Corrected);
        motion.length_rate = -0.5;
        let inst = ProblemInstance::new(unit(), vec![], motion).unwrap();
        assert!(inst
            .check_window(&TimeWindow::new(0.0, 1.0, 3).unwrap())
            .is_ok());
        assert!(inst
            .check_window(&TimeWindow::new(0.0, 3.0, 3).unwrap())
            .is_err());
    }

    #[test]
    fn linspace_hits_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
    }
}
