//! Normal fundamental functions, transfer maps and characteristic functions.
//!
//! On a continuity interval of length `b` the amplitude equation
//! `X'' + λ² X = 0` has the normal fundamental pair
//! `S(b) = cos λb`, `T(b) = sin(λb) / λ`, with `S(0) = 1, S'(0) = 0` and
//! `T(0) = 0, T'(0) = 1`. Propagating the state `(X, X')` from the left
//! support, where `X = 0, X' = 1`, through intervals and load interfaces
//! gives `X(l; λ)`; its zeros are the eigenvalues.

use crate::model::{FactorMode, ModelError, MotionMode, MotionSpec, ProblemInstance};
use core::f64::consts::PI;
use core::ops::Mul;

/// `S = cos λb`, `T = sin(λb)/λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalPair {
    pub s_value: f64,
    pub t_value: f64,
}

/// `sin(λb)/λ`, continuous through `λ = 0` where it equals `b`.
pub fn sin_over(lambda: f64, b: f64) -> f64 {
    let x = lambda * b;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        b * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0))
    } else {
        libm::sin(x) / lambda
    }
}

pub fn normal_fundamental_pair(lambda: f64, b: f64) -> FundamentalPair {
    FundamentalPair {
        s_value: libm::cos(lambda * b),
        t_value: sin_over(lambda, b),
    }
}

/// 2×2 map acting on the state `(X, X')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub entries: [[f64; 2]; 2],
}

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix {
        entries: [[1.0, 0.0], [0.0, 1.0]],
    };

    pub fn new(entries: [[f64; 2]; 2]) -> Self {
        TransferMatrix { entries }
    }

    pub fn determinant(&self) -> f64 {
        let [[a, b], [c, d]] = self.entries;
        a * d - b * c
    }

    pub fn apply(&self, state: [f64; 2]) -> [f64; 2] {
        let [[a, b], [c, d]] = self.entries;
        [a * state[0] + b * state[1], c * state[0] + d * state[1]]
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    /// `self * rhs` applies `rhs` first.
    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        let a = self.entries;
        let b = rhs.entries;
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        TransferMatrix { entries: out }
    }
}

/// Propagator of `(X, X')` across an interval of length `b`:
/// `[[cos λb, sin(λb)/λ], [−λ sin λb, cos λb]]`.
pub fn interval_transfer(lambda: f64, b: f64) -> TransferMatrix {
    let FundamentalPair { s_value, t_value } = normal_fundamental_pair(lambda, b);
    TransferMatrix::new([[s_value, t_value], [-lambda * lambda * t_value, s_value]])
}

/// Interface map of a point mass: displacement continuous, slope jumps by
/// `−coupling · m λ² X / ρ`.
pub fn load_interface(lambda: f64, mass: f64, rho: f64, coupling: f64) -> TransferMatrix {
    TransferMatrix::new([[1.0, 0.0], [-coupling * mass * lambda * lambda / rho, 1.0]])
}

/// `X(l; λ)` for the layout given by `intervals` (length `n`) and the masses
/// sitting between them (length `n − 1`), by matrix products.
pub fn propagate_characteristic(
    lambda: f64,
    rho: f64,
    intervals: &[f64],
    masses: &[f64],
    coupling: f64,
) -> f64 {
    debug_assert_eq!(intervals.len(), masses.len() + 1);
    let mut state = [0.0, 1.0];
    for (i, &b) in intervals.iter().enumerate() {
        state = interval_transfer(lambda, b).apply(state);
        if let Some(&m) = masses.get(i) {
            state = load_interface(lambda, m, rho, coupling).apply(state);
        }
    }
    state[0]
}

/// Characteristic function of the stationary problem (loads at their
/// nominal positions, unit coupling). Equals `sin(λl)/λ` for the bare cable.
pub fn characteristic_static(lambda: f64, instance: &ProblemInstance) -> f64 {
    propagate_characteristic(
        lambda,
        instance.cable().density,
        instance.intervals(),
        &instance.masses(),
        1.0,
    )
}

/// Same function as [`characteristic_static`], evaluated with the scalar
/// recurrence for `ψ⁽¹⁾ = X`, `ψ⁽²⁾ = X'` instead of matrix products.
pub fn characteristic_recurrence(lambda: f64, instance: &ProblemInstance) -> f64 {
    let rho = instance.cable().density;
    let intervals = instance.intervals();
    let loads = instance.loads();
    let l2 = lambda * lambda;
    let (mut psi1, mut psi2) = (0.0, 1.0);
    for (i, &b) in intervals.iter().enumerate() {
        let FundamentalPair {
            s_value: s,
            t_value: t,
        } = normal_fundamental_pair(lambda, b);
        match loads.get(i) {
            Some(load) => {
                let m = load.mass;
                let next1 = psi1 * s + psi2 * t;
                let next2 =
                    (-psi1 * (rho * l2 * t + m * l2 * s) + psi2 * (rho * s - m * l2 * t)) / rho;
                psi1 = next1;
                psi2 = next2;
            }
            None => {
                psi1 = psi1 * s + psi2 * t;
            }
        }
    }
    psi1
}

/// Expanded characteristic function for two masses with intervals
/// `b1, b2, b3`:
///
/// `sin(λl)/λ − (m1/ρ) sin λb1 sin λ(b2+b3) − (m2/ρ) sin λ(b1+b2) sin λb3
///  + (m1 m2 λ/ρ²) sin λb1 sin λb2 sin λb3`.
pub fn closed_form_two_mass(
    lambda: f64,
    m1: f64,
    m2: f64,
    b1: f64,
    b2: f64,
    b3: f64,
    rho: f64,
) -> f64 {
    let sin = |x: f64| libm::sin(lambda * x);
    let l = b1 + b2 + b3;
    sin_over(lambda, l) - m1 / rho * sin(b1) * sin(b2 + b3) - m2 / rho * sin(b1 + b2) * sin(b3)
        + m1 * m2 * lambda / (rho * rho) * sin(b1) * sin(b2) * sin(b3)
}

/// Inertia coupling of moving loads: `1 + v²/a²` (normalized) or `a² + v²`.
pub fn coupling_factor(motion: &MotionSpec, wave_speed: f64) -> f64 {
    match motion.mode {
        MotionMode::LoadsMoving => {
            let v = motion.speed;
            match motion.factor_mode {
                FactorMode::Normalized => 1.0 + v * v / (wave_speed * wave_speed),
                FactorMode::AsPrinted => wave_speed * wave_speed + v * v,
            }
        }
        _ => 1.0,
    }
}

/// Frozen-time characteristic function of loads moving at speed `v`:
/// positions `l_i + v t`, inertia scaled by [`coupling_factor`].
pub fn characteristic_moving_loads(
    lambda: f64,
    instance: &ProblemInstance,
    t: f64,
) -> Result<f64, ModelError> {
    let intervals = instance.intervals_at(t)?;
    let coupling = coupling_factor(instance.motion(), instance.wave_speed());
    Ok(propagate_characteristic(
        lambda,
        instance.cable().density,
        &intervals,
        &instance.masses(),
        coupling,
    ))
}

/// Number of eigenvalues strictly below `lambda` for a layout with
/// nonnegative coupling.
///
/// Tracks the Prüfer angle `θ` of `(X, X'/λ)`: it advances by exactly `λb`
/// across an interval and stays within its half-turn across a load, so
/// `⌊θ(l)/π⌋` counts the eigenvalues passed.
pub fn eigenvalue_count(
    lambda: f64,
    rho: f64,
    intervals: &[f64],
    masses: &[f64],
    coupling: f64,
) -> usize {
    debug_assert!(coupling >= 0.0);
    if !(lambda > 0.0) {
        return 0;
    }
    let (mut x, mut y) = (0.0f64, 1.0f64);
    let mut theta = 0.0f64;
    for (i, &b) in intervals.iter().enumerate() {
        let phi = lambda * b;
        let (s, c) = (libm::sin(phi), libm::cos(phi));
        let (nx, ny) = (x * c + y * s, -x * s + y * c);
        x = nx;
        y = ny;
        theta += phi;
        if let Some(&m) = masses.get(i) {
            if x != 0.0 {
                y -= coupling * m * lambda / rho * x;
                theta = resync_angle(theta, x, y);
            }
            let r = libm::hypot(x, y);
            x /= r;
            y /= r;
        }
    }
    let turns = libm::floor(theta / PI);
    if turns <= 0.0 {
        0
    } else {
        turns as usize
    }
}

/// Angle of `(x, y)` (as `x = r sin θ`, `y = r cos θ`) on the half-turn
/// branch that contains `near` and matches the sign of `x`.
fn resync_angle(near: f64, x: f64, y: f64) -> f64 {
    let turns = near / PI;
    let mut branch = libm::floor(turns);
    let branch_sign = if (branch as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    if branch_sign * x < 0.0 {
        // Rounding put `near` on the wrong side of a multiple of π.
        branch = if turns - branch < 0.5 {
            branch - 1.0
        } else {
            branch + 1.0
        };
    }
    let sx = if x > 0.0 { 1.0 } else { -1.0 };
    branch * PI + libm::atan2(x.abs(), y * sx)
}
