use super::{spectrum_at, SpectrumError};
use crate::model::{LoadSpec, ModelError, MotionMode, MotionSpec, ProblemInstance};
use crate::rootfind::RootSearchConfig;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Parameter varied by a sweep. Load indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Speed `v`; a static instance is swept as moving loads at `t = 0`.
    Speed,
    Mass(usize),
    Position(usize),
}

impl SweepParameter {
    pub fn name(&self) -> String {
        match self {
            SweepParameter::Speed => String::from("speed"),
            SweepParameter::Mass(i) => alloc::format!("mass:{i}"),
            SweepParameter::Position(i) => alloc::format!("position:{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub grid: Vec<f64>,
    /// `lambdas[j][k]`: eigenvalue `k + 1` at grid point `j`; `None` where
    /// the point failed or fewer roots were found.
    pub lambdas: Vec<Vec<Option<f64>>>,
    pub wave_speed: f64,
    /// Why each failed grid point failed.
    pub failures: Vec<Option<SpectrumError>>,
}

impl SweepResult {
    pub fn is_complete(&self) -> bool {
        self.failures.iter().all(Option::is_none)
    }
}

fn instance_at(
    base: &ProblemInstance,
    parameter: SweepParameter,
    value: f64,
) -> Result<ProblemInstance, SpectrumError> {
    let mut loads: Vec<LoadSpec> = base.loads().to_vec();
    let missing = |index| SpectrumError::Model(ModelError::NoSuchLoad { index });
    match parameter {
        SweepParameter::Speed => {
            let mut motion = *base.motion();
            if motion.mode == MotionMode::Static {
                motion = MotionSpec {
                    mode: MotionMode::LoadsMoving,
                    ..motion
                };
            }
            motion.speed = value;
            Ok(base.with_motion(motion)?)
        }
        SweepParameter::Mass(i) => {
            loads.get_mut(i).ok_or_else(|| missing(i))?.mass = value;
            Ok(base.with_loads(loads)?)
        }
        SweepParameter::Position(i) => {
            loads.get_mut(i).ok_or_else(|| missing(i))?.position = value;
            Ok(base.with_loads(loads)?)
        }
    }
}

/// Spectra over `grid`, frozen at `t = 0` for moving modes.
///
/// Each point first scans only slightly past the previous point's highest
/// root, falling back to the full ceiling when that narrower scan comes up
/// short.
pub fn sweep(
    base: &ProblemInstance,
    parameter: SweepParameter,
    grid: &[f64],
    config: &RootSearchConfig,
) -> SweepResult {
    let count = config.count;
    let mut lambdas = Vec::with_capacity(grid.len());
    let mut failures = Vec::with_capacity(grid.len());
    let mut previous_top: Option<f64> = None;
    let step = PI / (base.length() * config.oversample as f64);
    let full = config.ceiling(base.length());

    for &value in grid {
        let outcome = instance_at(base, parameter, value).and_then(|inst| {
            let warm = previous_top
                .map(|top| (1.25 * top + 2.0 * step).min(full))
                .filter(|&ceiling| ceiling < full)
                .and_then(|ceiling| {
                    let narrow = RootSearchConfig {
                        lambda_max: Some(ceiling),
                        ..*config
                    };
                    spectrum_at(&inst, 0.0, &narrow).ok()
                });
            match warm {
                Some(result) => Ok(result),
                None => spectrum_at(&inst, 0.0, config),
            }
        });
        match outcome {
            Ok(result) => {
                previous_top = result.lambdas.last().copied();
                let mut row: Vec<Option<f64>> = result.lambdas.into_iter().map(Some).collect();
                row.resize(count, None);
                lambdas.push(row);
                failures.push(None);
            }
            Err(err) => {
                let mut row: Vec<Option<f64>> = match &err {
                    SpectrumError::Root(root) => root.partial().iter().copied().map(Some).collect(),
                    SpectrumError::Model(_) => Vec::new(),
                };
                row.resize(count, None);
                lambdas.push(row);
                failures.push(Some(err));
                previous_top = None;
            }
        }
    }
    SweepResult {
        parameter,
        grid: grid.to_vec(),
        lambdas,
        wave_speed: base.wave_speed(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CableSpec, FactorMode};
    use crate::spectra::static_spectrum;
    use alloc::vec;

    fn midpoint() -> ProblemInstance {
        ProblemInstance::new(
            CableSpec::new(1.0, 1.0, 1.0).unwrap(),
            vec![LoadSpec::new(1.0, 0.5)],
            MotionSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn mass_sweep_values() {
        let r = sweep(
            &midpoint(),
            SweepParameter::Mass(0),
            &[0.0, 1.0, 10.0],
            &RootSearchConfig::new(1),
        );
        let l1: Vec<f64> = r.lambdas.iter().map(|row| row[0].unwrap()).collect();
        assert!((l1[0] - PI).abs() < 1e-11);
        assert!((l1[1] - 1.720_667_178_038_759_5).abs() < 1e-9);
        // cot(λ/2) = 5λ
        assert!((l1[2] - 0.622_105_696_400_595_5).abs() < 1e-9);
    }

    #[test]
    fn position_sweep_minimum_at_centre() {
        let grid: Vec<f64> = (1..=9).map(|j| j as f64 / 10.0).collect();
        let r = sweep(
            &midpoint(),
            SweepParameter::Position(0),
            &grid,
            &RootSearchConfig::new(2),
        );
        assert!(r.is_complete());
        let l1: Vec<f64> = r.lambdas.iter().map(|row| row[0].unwrap()).collect();
        let argmin = (0..l1.len())
            .min_by(|&a, &b| l1[a].total_cmp(&l1[b]))
            .unwrap();
        assert_eq!(argmin, 4);
        for j in 0..4 {
            for k in 0..2 {
                let a = r.lambdas[j][k].unwrap();
                let b = r.lambdas[8 - j][k].unwrap();
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn speed_sweep_non_increasing() {
        let base = midpoint()
            .with_motion(MotionSpec::loads_moving(0.0, FactorMode::Normalized))
            .unwrap();
        let grid: Vec<f64> = (0..10).map(|j| 0.1 * j as f64).collect();
        let r = sweep(
            &base,
            SweepParameter::Speed,
            &grid,
            &RootSearchConfig::new(3),
        );
        for k in 0..3 {
            for j in 1..grid.len() {
                assert!(r.lambdas[j][k].unwrap() <= r.lambdas[j - 1][k].unwrap() + 1e-12);
            }
        }
        let fixed = static_spectrum(&midpoint(), &RootSearchConfig::new(3)).unwrap();
        assert_eq!(
            r.lambdas[0],
            fixed.lambdas.iter().copied().map(Some).collect::<Vec<_>>()
        );
    }

    #[test]
    fn invalid_points_become_gaps() {
        let r = sweep(
            &midpoint(),
            SweepParameter::Position(0),
            &[0.5, 1.5],
            &RootSearchConfig::new(2),
        );
        assert!(r.failures[0].is_none());
        assert!(r.failures[1].is_some());
        assert_eq!(r.lambdas[1], vec![None, None]);
        let r = sweep(
            &midpoint(),
            SweepParameter::Mass(3),
            &[1.0],
            &RootSearchConfig::new(1),
        );
        assert!(r.failures[0].is_some());
    }
}
