//! Spectral toolkit for finite unions of real intervals: logarithmic
//! potential theory, hyperelliptic period data and Abel maps, Jacobi
//! recurrence coefficients for measures on the bands, Pell-type polynomial
//! pairs and the divisor flow they generate, and the torus dynamics that
//! ties the pieces together.

pub mod divisor;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod geometry;
pub mod measure;
pub mod orthopoly;
pub mod pell;
pub mod poly;
pub mod quad;
pub mod riemann;
pub mod series;
pub mod suite;
pub mod sysquad;
pub mod torus;
pub mod windows;

pub use divisor::GapDivisor;
pub use dynamics::{
    rotation_residuals, select_subsequence, star_discrepancy, theta_sequence, torus_orbit,
    window_convergence, SubsequenceReport, ThetaTrack,
};
pub use equilibrium::{equilibrium, EquilibriumData};
pub use error::{Error, Result};
pub use geometry::{IntervalSystem, Region};
pub use measure::{discretize, szego_integral, DiscreteMeasure, MeasureSpec, WeightKind};
pub use orthopoly::{gap_zeros, stieltjes, GapZeros, RecurrenceTable};
pub use pell::{divisor_to_pair, pair_to_divisor, pell_step, PellPair};
pub use poly::Poly;
pub use riemann::{riemann_data, RiemannData};
pub use windows::{
    extract_pair, imap, imap_inverse, moment_window, shift_window, window_from_table,
    window_residuals, CoeffWindow, MomentWindow,
};
