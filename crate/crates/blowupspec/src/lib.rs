//! Numerical spectral analysis for slightly mass-supercritical NLS self-similar
//! blow-up profiles.
//!
//! The library computes the radial self-similar profile `Q_b` together with the
//! parameter relation `s_c(b)`, builds interior and exterior fundamental
//! solutions of the two-component linearized spectral system on each spherical
//! class, evaluates the Jost determinant between them, and locates its zeros
//! (the eigenvalues, counted with multiplicity) by winding numbers and Newton
//! refinement. A bifurcation module predicts the two radial eigenvalues that
//! split off the imaginary axis and checks them against the located zeros.
//!
//! Module layout mirrors the pipeline stages:
//! `specfun` (complex Airy / modified Bessel / Gamma) -> `groundstate` (the
//! b = 0 soliton) -> `h0struct` (flat linearized operator structure) ->
//! `profile` (Q_b shooting) -> `wkb` (turning-point bases at infinity) ->
//! `odesys` (fundamental-solution frames) -> `jost` (zero location and
//! classification) -> `bifurc` (eigenvalue predictions) -> `pipeline`/`config`
//! (orchestration behind the `blowupspec` CLI).

pub mod bifurc;
pub mod config;
pub mod groundstate;
pub mod h0struct;
pub mod jost;
pub mod odesys;
pub mod pipeline;
pub mod profile;
pub mod specfun;
pub mod util;
pub mod wkb;

pub use num_complex::Complex64;
