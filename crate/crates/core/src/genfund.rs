//! Normal fundamental systems for piecewise first-order linear systems.
//!
//! A system `φ' = A(y, λ) φ` of even dimension `N = 2m` lives on
//! breakpoints `y_0 < … < y_n`. On each interval the normal fundamental
//! matrix `Φ⁽ⁱ⁾` starts as the identity at `y_{i−1}` and is integrated with
//! classical fourth-order Runge–Kutta. Linear interface maps carry the state
//! across interior breakpoints. `m` components vanish at `y_0`, and `m`
//! components must vanish at `y_n`; the `m × m` determinant of those
//! components, taken over the `m` admissible solutions started at `y_0`,
//! vanishes exactly at the eigenvalues.

use crate::charfn;
use crate::model::ProblemInstance;
use crate::rootfind::{self, RootError, RootList, RootSearchConfig};
use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Default RK4 steps per interval.
pub const DEFAULT_STEPS: usize = 1000;

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows<const C: usize>(rows: &[[f64; C]]) -> Self {
        Matrix {
            rows: rows.len(),
            cols: C,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// `self + scale · other`.
    fn axpy(&self, scale: f64, other: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + scale * b)
                .collect(),
        }
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
                .unwrap();
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                for j in col..n {
                    a[r * n + j] -= factor * a[col * n + j];
                }
            }
        }
        det
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `A(y, λ)` on interval `interval` (0-based), written into an `N × N` matrix.
pub type CoefficientField = Box<dyn Fn(usize, f64, f64, &mut Matrix) + Send + Sync>;

/// Interface map at interior breakpoint `y_i` (`i` in `1..n`), written into
/// an `N × N` matrix that maps the state at the end of interval `i − 1`
/// (0-based) to the start of interval `i`.
pub type InterfaceMap = Box<dyn Fn(usize, f64, &mut Matrix) + Send + Sync>;

pub struct FirstOrderSystem {
    dimension: usize,
    breakpoints: Vec<f64>,
    coefficients: CoefficientField,
    interfaces: Option<InterfaceMap>,
    left_zero: Vec<usize>,
    right_zero: Vec<usize>,
}

impl fmt::Debug for FirstOrderSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FirstOrderSystem")
            .field("dimension", &self.dimension)
            .field("breakpoints", &self.breakpoints)
            .field("left_zero", &self.left_zero)
            .field("right_zero", &self.right_zero)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemError {
    OddDimension(usize),
    Breakpoints,
    BoundaryIndices,
}

impl fmt::Display for SystemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemError::OddDimension(n) => {
                write!(f, "dimension must be even and positive, got {n}")
            }
            SystemError::Breakpoints => {
                write!(
                    f,
                    "need at least two strictly increasing finite breakpoints"
                )
            }
            SystemError::BoundaryIndices => write!(
                f,
                "each boundary needs N/2 distinct component indices below N"
            ),
        }
    }
}

impl core::error::Error for SystemError {}

impl FirstOrderSystem {
    /// Interfaces default to the identity.
    pub fn new(
        dimension: usize,
        breakpoints: Vec<f64>,
        left_zero: Vec<usize>,
        right_zero: Vec<usize>,
        coefficients: CoefficientField,
    ) -> Result<Self, SystemError> {
        if dimension == 0 || !dimension.is_multiple_of(2) {
            return Err(SystemError::OddDimension(dimension));
        }
        if breakpoints.len() < 2
            || breakpoints.iter().any(|y| !y.is_finite())
            || breakpoints.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(SystemError::Breakpoints);
        }
        for set in [&left_zero, &right_zero] {
            let mut seen = vec![false; dimension];
            if set.len() != dimension / 2 {
                return Err(SystemError::BoundaryIndices);
            }
            for &i in set.iter() {
                if i >= dimension || seen[i] {
                    return Err(SystemError::BoundaryIndices);
                }
                seen[i] = true;
            }
        }
        Ok(FirstOrderSystem {
            dimension,
            breakpoints,
            coefficients,
            interfaces: None,
            left_zero,
            right_zero,
        })
    }

    pub fn with_interfaces(mut self, interfaces: InterfaceMap) -> Self {
        self.interfaces = Some(interfaces);
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn interval_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn span(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1] - self.breakpoints[0]
    }

    fn coefficient_matrix(&self, interval: usize, y: f64, lambda: f64) -> Matrix {
        let mut a = Matrix::zeros(self.dimension, self.dimension);
        (self.coefficients)(interval, y, lambda, &mut a);
        a
    }

    fn interface_matrix(&self, breakpoint: usize, lambda: f64) -> Option<Matrix> {
        self.interfaces.as_ref().map(|map| {
            let mut m = Matrix::identity(self.dimension);
            map(breakpoint, lambda, &mut m);
            m
        })
    }
}

/// Taut cable with point masses in state form `(X, X')`:
/// `A = [[0, 1], [−λ², 0]]`, slope jump `−coupling · m λ² X / ρ` at loads,
/// `X = 0` at both supports.
pub fn cable_system(instance: &ProblemInstance, coupling: f64) -> FirstOrderSystem {
    let mut breakpoints = vec![0.0];
    breakpoints.extend(instance.loads().iter().map(|load| load.position));
    breakpoints.push(instance.length());
    let masses = instance.masses();
    let rho = instance.cable().density;
    FirstOrderSystem::new(
        2,
        breakpoints,
        vec![0],
        vec![0],
        Box::new(cable_coefficients),
    )
    .expect("validated instance yields a valid cable system")
    .with_interfaces(Box::new(move |i, lambda, out| {
        out[(1, 0)] = -coupling * masses[i - 1] * lambda * lambda / rho;
    }))
}

/// Bare cable on `[0, length]` split at `cuts` with identity interfaces.
pub fn split_cable_system(length: f64, cuts: &[f64]) -> Result<FirstOrderSystem, SystemError> {
    let mut breakpoints = vec![0.0];
    breakpoints.extend_from_slice(cuts);
    breakpoints.push(length);
    FirstOrderSystem::new(
        2,
        breakpoints,
        vec![0],
        vec![0],
        Box::new(cable_coefficients),
    )
}

fn cable_coefficients(_interval: usize, _y: f64, lambda: f64, out: &mut Matrix) {
    out[(0, 1)] = 1.0;
    out[(1, 0)] = -lambda * lambda;
}

/// Normal fundamental matrix of interval `interval` (0-based) at its right
/// end, from the identity at its left end, with `steps` RK4 steps.
pub fn integrate_fundamental(
    system: &FirstOrderSystem,
    interval: usize,
    lambda: f64,
    steps: usize,
) -> Matrix {
    assert!(steps >= 1, "at least one integration step");
    let y0 = system.breakpoints[interval];
    let y1 = system.breakpoints[interval + 1];
    let h = (y1 - y0) / steps as f64;
    let mut phi = Matrix::identity(system.dimension);
    for step in 0..steps {
        let y = y0 + h * step as f64;
        let a0 = system.coefficient_matrix(interval, y, lambda);
        let am = system.coefficient_matrix(interval, y + 0.5 * h, lambda);
        let a1 = system.coefficient_matrix(interval, y + h, lambda);
        let k1 = a0.mul(&phi);
        let k2 = am.mul(&phi.axpy(0.5 * h, &k1));
        let k3 = am.mul(&phi.axpy(0.5 * h, &k2));
        let k4 = a1.mul(&phi.axpy(h, &k3));
        let incr = k1.axpy(2.0, &k2).axpy(2.0, &k3).axpy(1.0, &k4);
        phi = phi.axpy(h / 6.0, &incr);
    }
    phi
}

/// Boundary determinant `D(λ)`; its zeros are the eigenvalues.
///
/// Seeds the `m` unit solutions allowed at `y_0` (unit vectors on the
/// components not fixed to zero), carries them through every interval and
/// interface, and returns the determinant of their right-boundary
/// components.
pub fn determinant_d(system: &FirstOrderSystem, lambda: f64, steps_per_interval: usize) -> f64 {
    let n = system.dimension;
    let free: Vec<usize> = (0..n).filter(|i| !system.left_zero.contains(i)).collect();
    let mut columns = Matrix::zeros(n, free.len());
    for (j, &i) in free.iter().enumerate() {
        columns[(i, j)] = 1.0;
    }
    let intervals = system.interval_count();
    for interval in 0..intervals {
        let phi = integrate_fundamental(system, interval, lambda, steps_per_interval);
        columns = phi.mul(&columns);
        if interval + 1 < intervals {
            if let Some(map) = system.interface_matrix(interval + 1, lambda) {
                columns = map.mul(&columns);
            }
        }
    }
    let m = system.right_zero.len();
    let mut minor = Matrix::zeros(m, m);
    for (r, &row) in system.right_zero.iter().enumerate() {
        for c in 0..m {
            minor[(r, c)] = columns[(row, c)];
        }
    }
    minor.determinant()
}

/// Zeros of [`determinant_d`] located by [`rootfind::find_eigenvalues`].
pub fn eigenvalues_general(
    system: &FirstOrderSystem,
    config: &RootSearchConfig,
    steps_per_interval: usize,
) -> Result<RootList, RootError> {
    rootfind::find_eigenvalues(
        |lambda| determinant_d(system, lambda, steps_per_interval),
        system.span(),
        config,
    )
}

/// Closed-form interval propagator of the cable system, for comparison.
pub fn cable_fundamental_exact(lambda: f64, b: f64) -> Matrix {
    Matrix::from_rows(&charfn::interval_transfer(lambda, b).entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CableSpec, LoadSpec, MotionSpec};
    use core::f64::consts::PI;

    fn bare(length: f64) -> ProblemInstance {
        ProblemInstance::bare(CableSpec::new(1.0, 1.0, length).unwrap())
    }

    fn midpoint_unit() -> ProblemInstance {
        ProblemInstance::new(
            CableSpec::new(1.0, 1.0, 1.0).unwrap(),
            vec![LoadSpec::new(1.0, 0.5)],
            MotionSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_malformed_systems() {
        let coeffs = || -> CoefficientField { Box::new(cable_coefficients) };
        assert_eq!(
            FirstOrderSystem::new(3, vec![0.0, 1.0], vec![0], vec![0], coeffs()).unwrap_err(),
            SystemError::OddDimension(3)
        );
        assert_eq!(
            FirstOrderSystem::new(2, vec![1.0, 1.0], vec![0], vec![0], coeffs()).unwrap_err(),
            SystemError::Breakpoints
        );
        assert_eq!(
            FirstOrderSystem::new(2, vec![0.0, 1.0], vec![0, 1], vec![0], coeffs()).unwrap_err(),
            SystemError::BoundaryIndices
        );
        assert_eq!(
            FirstOrderSystem::new(2, vec![0.0, 1.0], vec![2], vec![0], coeffs()).unwrap_err(),
            SystemError::BoundaryIndices
        );
    }

    #[test]
    fn zero_lambda_is_exact_shear() {
        let sys = cable_system(&bare(3.0), 1.0);
        let exact = Matrix::from_rows(&[[1.0, 3.0], [0.0, 1.0]]);
        assert_eq!(integrate_fundamental(&sys, 0, 0.0, 4), exact);
        assert!(integrate_fundamental(&sys, 0, 0.0, 7).max_abs_diff(&exact) < 1e-14);
    }

    #[test]
    fn rk4_matches_closed_form_propagator() {
        let sys = cable_system(&bare(1.0), 1.0);
        let phi = integrate_fundamental(&sys, 0, PI, 1000);
        assert!(phi.max_abs_diff(&cable_fundamental_exact(PI, 1.0)) < 1e-8);
        assert!((phi.determinant() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn halving_the_step_gains_four_orders() {
        let sys = cable_system(&bare(1.0), 1.0);
        let exact = cable_fundamental_exact(PI, 1.0);
        let error = |steps| integrate_fundamental(&sys, 0, PI, steps).max_abs_diff(&exact);
        let (coarse, fine) = (error(20), error(40));
        let ratio = coarse / fine;
        assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn determinant_cases() {
        let sys = cable_system(&bare(PI), 1.0);
        assert!(determinant_d(&sys, 1.0, 1000).abs() < 1e-8);
        assert!(determinant_d(&sys, 1.5, 1000) < 0.0);

        let sys = cable_system(&midpoint_unit(), 1.0);
        assert!(determinant_d(&sys, 1.720_667_178_4, 2000).abs() < 1e-6);
    }

    #[test]
    fn splitting_intervals_leaves_determinant_unchanged() {
        let whole = split_cable_system(2.0, &[]).unwrap();
        let split = split_cable_system(2.0, &[0.3, 1.1, 1.7]).unwrap();
        for k in 1..20 {
            let lambda = 0.37 * k as f64;
            let a = determinant_d(&whole, lambda, 2000);
            let b = determinant_d(&split, lambda, 1000);
            assert!((a - b).abs() < 1e-9, "λ = {lambda}: {a} vs {b}");
        }
    }

    #[test]
    fn general_eigenvalues_of_bare_cable() {
        let sys = cable_system(&bare(PI), 1.0);
        let roots = eigenvalues_general(&sys, &RootSearchConfig::new(3), DEFAULT_STEPS).unwrap();
        for (k, r) in roots.roots.iter().enumerate() {
            assert!((r - (k + 1) as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn four_dimensional_uncoupled_pair() {
        // Two independent strings stacked in one system, wave numbers λ and
        // 1.5λ: eigenvalues are the union {kπ} ∪ {2kπ/3}.
        let sys = FirstOrderSystem::new(
            4,
            vec![0.0, 1.0],
            vec![0, 2],
            vec![0, 2],
            Box::new(|_, _, lambda, out: &mut Matrix| {
                out[(0, 1)] = 1.0;
                out[(1, 0)] = -lambda * lambda;
                out[(2, 3)] = 1.0;
                out[(3, 2)] = -2.25 * lambda * lambda;
            }),
        )
        .unwrap();
        let roots =
            eigenvalues_general(&sys, &RootSearchConfig::new(3).with_lambda_max(10.0), 1000)
                .unwrap();
        let expect = [2.0 * PI / 3.0, PI, 4.0 * PI / 3.0];
        for (r, e) in roots.roots.iter().zip(expect) {
            assert!((r - e).abs() < 1e-6, "{r} vs {e}");
        }
    }
}
