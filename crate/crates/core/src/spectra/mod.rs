//! Spectra and natural frequencies for the three motion modes.

mod sweep;
pub mod theorems;

pub use sweep::{sweep, SweepParameter, SweepResult};

use crate::charfn;
use crate::model::{
    CableSpec, FrequencyFormula, ModelError, MotionMode, ProblemInstance, TimeWindow,
};
use crate::rootfind::{self, RootError, RootList, RootSearchConfig, RootWarning};
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

/// Solver metadata carried with a spectrum.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub brackets_scanned: usize,
    pub warnings: Vec<RootWarning>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub lambdas: Vec<f64>,
    /// `ω_k = a λ_k`.
    pub frequencies: Vec<f64>,
    pub mode: MotionMode,
    /// Evaluation time for the non-static modes.
    pub t: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl SpectrumResult {
    fn from_roots(list: RootList, wave_speed: f64, mode: MotionMode, t: Option<f64>) -> Self {
        let frequencies = list
            .roots
            .iter()
            .map(|lambda| wave_speed * lambda)
            .collect();
        SpectrumResult {
            lambdas: list.roots,
            frequencies,
            mode,
            t,
            diagnostics: Diagnostics {
                brackets_scanned: list.brackets_scanned,
                warnings: list.warnings,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumError {
    Model(ModelError),
    Root(RootError),
}

impl From<ModelError> for SpectrumError {
    fn from(err: ModelError) -> Self {
        SpectrumError::Model(err)
    }
}

impl From<RootError> for SpectrumError {
    fn from(err: RootError) -> Self {
        SpectrumError::Root(err)
    }
}

impl fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumError::Model(err) => err.fmt(f),
            SpectrumError::Root(err) => err.fmt(f),
        }
    }
}

impl core::error::Error for SpectrumError {}

/// Eigenvalues of a loaded layout: `intervals` has one more entry than
/// `masses`. Positive coupling enables the exact eigenvalue count, so
/// clustered roots are separated; otherwise a plain sign-change scan runs.
pub fn layout_eigenvalues(
    rho: f64,
    intervals: &[f64],
    masses: &[f64],
    coupling: f64,
    config: &RootSearchConfig,
) -> Result<RootList, RootError> {
    let length: f64 = intervals.iter().sum();
    let f = |lambda| charfn::propagate_characteristic(lambda, rho, intervals, masses, coupling);
    if coupling >= 0.0 {
        let count = |lambda| charfn::eigenvalue_count(lambda, rho, intervals, masses, coupling);
        rootfind::find_eigenvalues_counted(f, count, length, config)
    } else {
        rootfind::find_eigenvalues(f, length, config)
    }
}

/// Spectrum of the loads at their nominal positions with unit coupling.
pub fn static_spectrum(
    instance: &ProblemInstance,
    config: &RootSearchConfig,
) -> Result<SpectrumResult, RootError> {
    let list = layout_eigenvalues(
        instance.cable().density,
        instance.intervals(),
        &instance.masses(),
        1.0,
        config,
    )?;
    Ok(SpectrumResult::from_roots(
        list,
        instance.wave_speed(),
        MotionMode::Static,
        None,
    ))
}

/// Frozen-time spectrum of moving loads at time `t`.
pub fn frozen_spectrum(
    instance: &ProblemInstance,
    t: f64,
    config: &RootSearchConfig,
) -> Result<SpectrumResult, SpectrumError> {
    let intervals = instance.intervals_at(t)?;
    let coupling = charfn::coupling_factor(instance.motion(), instance.wave_speed());
    let list = layout_eigenvalues(
        instance.cable().density,
        &intervals,
        &instance.masses(),
        coupling,
        config,
    )?;
    Ok(SpectrumResult::from_roots(
        list,
        instance.wave_speed(),
        instance.motion().mode,
        Some(t),
    ))
}

/// One sample of a time-dependent spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSample {
    pub t: f64,
    pub result: Result<SpectrumResult, SpectrumError>,
}

/// Frozen-time spectra at every instant of `window`. The window is
/// validated up front; per-instant solver failures are kept per sample.
pub fn moving_load_spectrum(
    instance: &ProblemInstance,
    window: &TimeWindow,
    config: &RootSearchConfig,
) -> Result<Vec<TimeSample>, ModelError> {
    instance.check_window(window)?;
    Ok(window
        .times()
        .into_iter()
        .map(|t| TimeSample {
            t,
            result: frozen_spectrum(instance, t, config),
        })
        .collect())
}

/// Span `l(t) = initial + rate · t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthProfile {
    pub initial: f64,
    pub rate: f64,
}

impl LengthProfile {
    pub fn constant(length: f64) -> Self {
        LengthProfile {
            initial: length,
            rate: 0.0,
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        self.initial + self.rate * t
    }
}

/// Natural frequencies `ω_k(t)` of the bare cable translating at speed `v`:
///
/// - with Coriolis: `(πk / l(t)) (a² − v²) / a`
/// - without, corrected: `(πk / l(t)) sqrt(a² − v²)`
/// - without, as printed: `(πk / l(t)) sqrt((a² − v²) / a)`
pub fn moving_system_frequencies(
    cable: &CableSpec,
    speed: f64,
    modes: impl IntoIterator<Item = usize>,
    coriolis: bool,
    formula: FrequencyFormula,
    length: &LengthProfile,
    t: f64,
) -> Result<Vec<f64>, ModelError> {
    let a = cable.wave_speed();
    if !(speed >= 0.0) {
        return Err(ModelError::InvalidSpeed { speed });
    }
    if speed >= a {
        return Err(ModelError::SupercriticalSpeed {
            speed,
            wave_speed: a,
        });
    }
    let l = length.at(t);
    if !(l > 0.0) {
        return Err(ModelError::LengthCollapses { t, length: l });
    }
    let gap = a * a - speed * speed;
    let factor = if coriolis {
        gap / a
    } else {
        match formula {
            FrequencyFormula::Corrected => libm::sqrt(gap),
            FrequencyFormula::AsPrinted => libm::sqrt(gap / a),
        }
    };
    Ok(modes
        .into_iter()
        .map(|k| PI * k as f64 / l * factor)
        .collect())
}

/// Closed-form spectrum of a system-moving instance at time `t`, reported
/// as `λ_k = ω_k / a`.
pub fn system_spectrum(
    instance: &ProblemInstance,
    t: f64,
    count: usize,
) -> Result<SpectrumResult, ModelError> {
    let motion = instance.motion();
    let a = instance.wave_speed();
    let length = LengthProfile {
        initial: instance.length(),
        rate: motion.length_rate,
    };
    let omegas = moving_system_frequencies(
        instance.cable(),
        motion.speed,
        1..=count,
        motion.coriolis,
        motion.frequency_formula,
        &length,
        t,
    )?;
    let list = RootList {
        roots: omegas.iter().map(|w| w / a).collect(),
        ..RootList::default()
    };
    Ok(SpectrumResult::from_roots(
        list,
        a,
        MotionMode::SystemMoving,
        Some(t),
    ))
}

/// Spectrum at time `t` for whatever mode the instance is in.
pub fn spectrum_at(
    instance: &ProblemInstance,
    t: f64,
    config: &RootSearchConfig,
) -> Result<SpectrumResult, SpectrumError> {
    match instance.motion().mode {
        MotionMode::Static => Ok(static_spectrum(instance, config)?),
        MotionMode::LoadsMoving => frozen_spectrum(instance, t, config),
        MotionMode::SystemMoving => Ok(system_spectrum(instance, t, config.count)?),
    }
}
