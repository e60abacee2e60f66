//! First `K` positive zeros of a characteristic function.
//!
//! The scan walks a uniform grid of step `π / (l · oversample)` (the
//! bare-cable root spacing divided by `oversample`) and refines every sign
//! change by bisection. When an eigenvalue counting function is available
//! ([`find_eigenvalues_counted`]) each grid cell is also checked against the
//! count, so pairs of roots that fall inside one cell are split instead of
//! being missed.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearchConfig {
    /// Number of roots requested.
    pub count: usize,
    /// Scan ceiling; `None` uses `2 (count + 1) π / l`.
    pub lambda_max: Option<f64>,
    pub oversample: usize,
    pub tol_rel: f64,
    pub max_iter: usize,
}

impl Default for RootSearchConfig {
    fn default() -> Self {
        RootSearchConfig {
            count: 3,
            lambda_max: None,
            oversample: 16,
            tol_rel: 1e-12,
            max_iter: 200,
        }
    }
}

impl RootSearchConfig {
    pub fn new(count: usize) -> Self {
        RootSearchConfig {
            count,
            ..Self::default()
        }
    }

    pub fn with_lambda_max(mut self, lambda_max: f64) -> Self {
        self.lambda_max = Some(lambda_max);
        self
    }

    pub fn validate(&self) -> Result<(), RootError> {
        if self.count == 0 {
            return Err(RootError::InvalidConfig("solve.count must be at least 1"));
        }
        if let Some(max) = self.lambda_max {
            if !(max > 0.0 && max.is_finite()) {
                return Err(RootError::InvalidConfig(
                    "solve.lambda_max must be positive",
                ));
            }
        }
        if self.oversample == 0 {
            return Err(RootError::InvalidConfig(
                "solve.oversample must be at least 1",
            ));
        }
        if !(self.tol_rel > 10.0 * f64::EPSILON && self.tol_rel < 1.0) {
            return Err(RootError::InvalidConfig(
                "solve.tol_rel must lie between 10 machine epsilons and 1",
            ));
        }
        if self.max_iter == 0 {
            return Err(RootError::InvalidConfig(
                "solve.max_iter must be at least 1",
            ));
        }
        Ok(())
    }

    /// Effective scan ceiling for a span of length `length`.
    pub fn ceiling(&self, length: f64) -> f64 {
        self.lambda_max
            .unwrap_or(2.0 * (self.count + 1) as f64 * PI / length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootWarning {
    /// `|f|` dipped below `1e-9 · l` at a grid point without a sign change.
    NearDoubleRoot { lambda: f64, value: f64 },
    /// Bisection stopped at `max_iter` before reaching `tol_rel`.
    IterationCap { lambda: f64 },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootList {
    /// Strictly increasing positive roots.
    pub roots: Vec<f64>,
    /// Number of grid cells examined.
    pub brackets_scanned: usize,
    pub warnings: Vec<RootWarning>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RootError {
    InvalidConfig(&'static str),
    /// Fewer than the requested roots lie below the ceiling; `found` holds
    /// those that do.
    FewerRootsFound {
        requested: usize,
        lambda_max: f64,
        found: RootList,
    },
    /// Not a single root below the ceiling.
    NoSignChange {
        lambda_max: f64,
    },
    InvalidBracket {
        lo: f64,
        hi: f64,
    },
    NonFinite {
        lambda: f64,
    },
}

impl RootError {
    /// Roots located before the search gave up, if any.
    pub fn partial(&self) -> &[f64] {
        match self {
            RootError::FewerRootsFound { found, .. } => &found.roots,
            _ => &[],
        }
    }
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::InvalidConfig(msg) => write!(f, "{msg}"),
            RootError::FewerRootsFound {
                requested,
                lambda_max,
                found,
            } => write!(
                f,
                "found {} of {requested} roots below lambda_max = {lambda_max}",
                found.roots.len()
            ),
            RootError::NoSignChange { lambda_max } => {
                write!(f, "no sign change found below lambda_max = {lambda_max}")
            }
            RootError::InvalidBracket { lo, hi } => {
                write!(f, "no sign change on bracket [{lo}, {hi}]")
            }
            RootError::NonFinite { lambda } => {
                write!(
                    f,
                    "characteristic function is not finite at lambda = {lambda}"
                )
            }
        }
    }
}

impl core::error::Error for RootError {}

/// Bisection on `[lo, hi]` until the bracket is narrower than
/// `tol_rel · midpoint` or `max_iter` halvings were made. Returns the
/// midpoint.
pub fn refine_root<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol_rel: f64,
    max_iter: usize,
) -> Result<f64, RootError> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo * fhi < 0.0) {
        return Err(RootError::InvalidBracket { lo, hi });
    }
    Ok(bisect_sign(&mut f, lo, hi, flo, tol_rel, max_iter).0)
}

fn bisect_sign<F: FnMut(f64) -> f64>(
    f: &mut F,
    mut lo: f64,
    mut hi: f64,
    mut flo: f64,
    tol_rel: f64,
    max_iter: usize,
) -> (f64, bool) {
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol_rel * mid.abs() {
            return (mid, true);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return (mid, true);
        }
        if (fmid > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, hi - lo <= tol_rel * mid.abs())
}

/// Locates the jump of `count` from `base` to `base + 1` inside `[lo, hi]`.
fn bisect_count<C: FnMut(f64) -> usize>(
    count: &mut C,
    mut lo: f64,
    mut hi: f64,
    base: usize,
    tol_rel: f64,
    max_iter: usize,
) -> (f64, bool) {
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol_rel * mid.abs() {
            return (mid, true);
        }
        if count(mid) > base {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, hi - lo <= tol_rel * mid.abs())
}

/// First `config.count` sign-change roots of `f` on `(0, lambda_max]`.
///
/// `length` sets the grid scale `π / (length · oversample)`.
pub fn find_eigenvalues<F: FnMut(f64) -> f64>(
    f: F,
    length: f64,
    config: &RootSearchConfig,
) -> Result<RootList, RootError> {
    scan(f, None::<fn(f64) -> usize>, length, config)
}

/// Like [`find_eigenvalues`], with `count(λ)` giving the number of roots
/// strictly below `λ`. Cells where the count rises by more than the sign
/// changes reveal are subdivided until each root is isolated.
pub fn find_eigenvalues_counted<F, C>(
    f: F,
    count: C,
    length: f64,
    config: &RootSearchConfig,
) -> Result<RootList, RootError>
where
    F: FnMut(f64) -> f64,
    C: FnMut(f64) -> usize,
{
    scan(f, Some(count), length, config)
}

fn scan<F, C>(
    mut f: F,
    mut count: Option<C>,
    length: f64,
    config: &RootSearchConfig,
) -> Result<RootList, RootError>
where
    F: FnMut(f64) -> f64,
    C: FnMut(f64) -> usize,
{
    config.validate()?;
    let lambda_max = config.ceiling(length);
    let step = PI / (length * config.oversample as f64);
    let cells = libm::ceil(lambda_max / step) as usize;
    let near_zero = 1e-9 * length;

    let mut out = RootList::default();
    let mut a = 0.0;
    let mut fa = f(0.0);
    if fa == 0.0 {
        // λ = 0 is never reported.
        fa = f(step * 1e-6);
    }
    if !fa.is_finite() {
        return Err(RootError::NonFinite { lambda: a });
    }
    let mut ca = count.as_mut().map(|c| c(a)).unwrap_or(0);

    for j in 1..=cells {
        if out.roots.len() >= config.count {
            break;
        }
        let b = if j == cells {
            lambda_max
        } else {
            step * j as f64
        };
        let fb = f(b);
        if !fb.is_finite() {
            return Err(RootError::NonFinite { lambda: b });
        }
        out.brackets_scanned += 1;
        match count.as_mut() {
            Some(c) => {
                let cb = c(b);
                if cb > ca {
                    isolate(&mut f, c, a, b, fa, fb, ca, cb, config, &mut out);
                }
                ca = cb;
            }
            None => {
                if fb == 0.0 {
                    out.roots.push(b);
                } else if fa * fb < 0.0 {
                    let (root, converged) =
                        bisect_sign(&mut f, a, b, fa, config.tol_rel, config.max_iter);
                    if !converged {
                        out.warnings
                            .push(RootWarning::IterationCap { lambda: root });
                    }
                    out.roots.push(root);
                } else if fb.abs() < near_zero {
                    out.warnings.push(RootWarning::NearDoubleRoot {
                        lambda: b,
                        value: fb,
                    });
                }
            }
        }
        a = b;
        fa = fb;
    }

    out.roots.truncate(config.count);
    match out.roots.len() {
        n if n == config.count => Ok(out),
        0 => Err(RootError::NoSignChange { lambda_max }),
        _ => Err(RootError::FewerRootsFound {
            requested: config.count,
            lambda_max,
            found: out,
        }),
    }
}

/// Splits `[a, b]` by count until each piece holds one root, then refines.
#[allow(clippy::too_many_arguments)]
fn isolate<F, C>(
    f: &mut F,
    count: &mut C,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    ca: usize,
    cb: usize,
    config: &RootSearchConfig,
    out: &mut RootList,
) where
    F: FnMut(f64) -> f64,
    C: FnMut(f64) -> usize,
{
    if out.roots.len() >= config.count {
        return;
    }
    let tol = config.tol_rel;
    if cb == ca + 1 {
        let (root, converged) = if fa * fb < 0.0 {
            bisect_sign(f, a, b, fa, tol, config.max_iter)
        } else if fa == 0.0 {
            (a, true)
        } else if fb == 0.0 {
            (b, true)
        } else {
            bisect_count(count, a, b, ca, tol, config.max_iter)
        };
        if !converged {
            out.warnings
                .push(RootWarning::IterationCap { lambda: root });
        }
        out.roots.push(root);
        return;
    }
    let mid = 0.5 * (a + b);
    if b - a <= tol * mid {
        // Roots closer than the tolerance: report them as coincident.
        for _ in ca..cb {
            out.roots.push(mid);
        }
        out.warnings.push(RootWarning::NearDoubleRoot {
            lambda: mid,
            value: f(mid),
        });
        return;
    }
    let fm = f(mid);
    let cm = count(mid);
    if cm > ca {
        isolate(f, count, a, mid, fa, fm, ca, cm, config, out);
    }
    if cb > cm {
        isolate(f, count, mid, b, fm, fb, cm, cb, config, out);
    }
}
