//! Finite-difference oracle for the stationary loaded cable.
//!
//! The span is cut into `M` cells of width `h = l / M`. Stiffness is the
//! three-point second difference scaled by `T / h`. The cable mass is lumped,
//! `ρh` per interior node and `ρh/2` at the two supports. A point mass at
//! `x = (j + f) h` acts on the linear interpolant `(1 − f) u_j + f u_{j+1}`,
//! which adds the rank-one block `m [(1 − f)², f(1 − f); f(1 − f), f²]` to
//! the mass matrix. Splitting the load diagonally instead would leave a
//! spurious mode of the two loaded nodes beating against each other.
//!
//! Both matrices are tridiagonal, so `K − xM` is too, and by Sylvester's law
//! of inertia the number of negative pivots of its `LDLᵀ` factorization
//! counts the eigenvalues `ω² < x`. Bisection on that count isolates the
//! smallest ones.

use crate::model::ProblemInstance;
use crate::rootfind::RootList;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub const MIN_NODES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedProblem {
    /// Grid points `x_j = j h`, `j = 0..=M`.
    pub nodes: Vec<f64>,
    pub h: f64,
    /// Diagonal of the interior stiffness (`M − 1` entries, `2T/h`).
    pub stiffness_diag: Vec<f64>,
    /// Off-diagonal of the interior stiffness (`M − 2` entries, `−T/h`).
    pub stiffness_off: Vec<f64>,
    /// Mass-matrix diagonal at every node, supports included.
    pub mass: Vec<f64>,
    /// Mass-matrix entry coupling node `j` to `j + 1` (`M` entries).
    pub mass_off: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    TooFewNodes {
        nodes: usize,
    },
    /// Fewer than two grid nodes separate loads `index` and `index + 1`.
    LoadsTooClose {
        index: usize,
    },
    TooManyModes {
        requested: usize,
        available: usize,
    },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooFewNodes { nodes } => {
                write!(f, "oracle.nodes must be at least {MIN_NODES}, got {nodes}")
            }
            OracleError::LoadsTooClose { index } => write!(
                f,
                "grid too coarse: fewer than 2 nodes between loads[{index}] and loads[{}]",
                index + 1
            ),
            OracleError::TooManyModes {
                requested,
                available,
            } => write!(
                f,
                "requested {requested} modes but the grid has {available} interior nodes"
            ),
        }
    }
}

impl core::error::Error for OracleError {}

pub fn discretize(
    instance: &ProblemInstance,
    cells: usize,
) -> Result<DiscretizedProblem, OracleError> {
    if cells < MIN_NODES {
        return Err(OracleError::TooFewNodes { nodes: cells });
    }
    let cable = instance.cable();
    let h = cable.length / cells as f64;
    let nodes: Vec<f64> = (0..=cells).map(|j| j as f64 * h).collect();

    let positions: Vec<f64> = instance.loads().iter().map(|load| load.position).collect();
    for (index, pair) in positions.windows(2).enumerate() {
        let between = nodes
            .iter()
            .filter(|&&x| x > pair[0] && x < pair[1])
            .count();
        if between < 2 {
            return Err(OracleError::LoadsTooClose { index });
        }
    }

    let mut mass = vec![cable.density * h; cells + 1];
    mass[0] *= 0.5;
    mass[cells] *= 0.5;
    let mut mass_off = vec![0.0; cells];
    for load in instance.loads() {
        let s = load.position / h;
        let left = (libm::floor(s) as usize).min(cells - 1);
        let frac = s - left as f64;
        mass[left] += load.mass * (1.0 - frac) * (1.0 - frac);
        mass[left + 1] += load.mass * frac * frac;
        mass_off[left] += load.mass * frac * (1.0 - frac);
    }

    let k = cable.tension / h;
    Ok(DiscretizedProblem {
        nodes,
        h,
        stiffness_diag: vec![2.0 * k; cells - 1],
        stiffness_off: vec![-k; cells - 2],
        mass,
        mass_off,
    })
}

impl DiscretizedProblem {
    /// Number of eigenvalues `ω²` of `K u = ω² M u` (interior nodes) below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let interior = self.stiffness_diag.len();
        let diag: Vec<f64> = (0..interior)
            .map(|i| self.stiffness_diag[i] - x * self.mass[i + 1])
            .collect();
        let off: Vec<f64> = (0..interior.saturating_sub(1))
            .map(|i| self.stiffness_off[i] - x * self.mass_off[i + 1])
            .collect();
        sturm_count(&diag, &off, 0.0)
    }
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`,
/// from the signs of the `LDLᵀ` pivots.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let coupling = if i == 0 {
            0.0
        } else {
            off[i - 1] * off[i - 1] / q
        };
        q = d - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (d.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` smallest points where `count_below` steps up, by bisection on
/// `[lo, hi]`.
fn bisect_eigenvalues(
    count_below: impl Fn(f64) -> usize,
    lo: f64,
    hi: f64,
    count: usize,
) -> Vec<f64> {
    (0..count)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if count_below(mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// The `count` smallest eigenvalues of a symmetric tridiagonal matrix.
pub fn smallest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    let n = diag.len();
    let mut lo_bound = f64::INFINITY;
    let mut hi_bound = f64::NEG_INFINITY;
    for i in 0..n {
        let radius =
            if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo_bound = lo_bound.min(diag[i] - radius);
        hi_bound = hi_bound.max(diag[i] + radius);
    }
    bisect_eigenvalues(
        |x| sturm_count(diag, off, x),
        lo_bound,
        hi_bound,
        count.min(n),
    )
}

/// The `count` smallest eigenvalues `λ = ω / a` of the discretized problem.
pub fn fd_spectrum(
    instance: &ProblemInstance,
    cells: usize,
    count: usize,
) -> Result<RootList, OracleError> {
    let problem = discretize(instance, cells)?;
    let available = problem.stiffness_diag.len();
    if count > available {
        return Err(OracleError::TooManyModes {
            requested: count,
            available,
        });
    }
    let mut ceiling = 1.0;
    while problem.count_below(ceiling) < count {
        ceiling *= 2.0;
    }
    let a = instance.wave_speed();
    let roots = bisect_eigenvalues(|x| problem.count_below(x), 0.0, ceiling, count)
        .into_iter()
        .map(|omega2| libm::sqrt(omega2) / a)
        .collect();
    Ok(RootList {
        roots,
        brackets_scanned: 0,
        warnings: Vec::new(),
    })
}
