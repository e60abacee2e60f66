//! Eigenvalues and natural frequencies of a taut cable carrying point loads.
//!
//! The cable is a fixed-fixed taut string of density `ρ`, tension `T` and
//! length `l`; loads are point masses attached at interior positions. Between
//! loads the displacement amplitude solves `X'' + λ² X = 0`, and at each load
//! the slope jumps by the inertial reaction `-m λ² X / ρ`. Eigenvalues `λ_k`
//! are the zeros of the characteristic function obtained by propagating the
//! state `(X, X')` from one end to the other; natural frequencies follow as
//! `ω_k = a λ_k` with wave speed `a = sqrt(T / ρ)`.
//!
//! Modules:
//!
//! - [`model`]: validated domain types.
//! - [`charfn`]: normal fundamental functions, transfer maps and characteristic
//!   functions (static loads, moving loads, two-mass closed form).
//! - [`rootfind`]: bracketing scan plus bisection for the first `K` zeros.
//! - [`genfund`]: general piecewise first-order systems integrated with RK4,
//!   with the boundary determinant whose zeros are eigenvalues.
//! - [`oracle`]: finite-difference discretization solved by Sturm bisection.
//! - [`spectra`]: spectra for every motion mode, sweeps and theorem checks.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod charfn;
pub mod genfund;
pub mod model;
pub mod oracle;
pub mod rootfind;
pub mod spectra;

pub use model::{
    wave_speed, CableSpec, FactorMode, FrequencyFormula, LoadSpec, ModelError, MotionMode,
    MotionSpec, ProblemInstance, TimeWindow,
};
pub use rootfind::{RootError, RootList, RootSearchConfig, RootWarning};
pub use spectra::{SpectrumResult, SweepParameter, SweepResult};
