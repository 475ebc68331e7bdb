//! Dilogarithms, braid words, and hyperbolic volume from saddle points.
//!
//! This crate evaluates the classical dilogarithm family and the Faddeev
//! quantum dilogarithm, assembles the classical-limit potential of a braid
//! closure directly from a braid word, and finds the complex critical points
//! whose imaginary parts give the hyperbolic volume of the knot complement.
//!
//! The pipeline is
//!
//! ```text
//! braid word ──▶ doubled crossing diagram ──▶ constraints + potential
//!                                                     │ exact elimination
//!                                                     ▼
//!             volume / CS report ◀── Newton multistart on ∇V = 0
//! ```
//!
//! Each stage is usable on its own:
//!
//! * [`dilog`] — Li₂, Rogers L, Bloch–Wigner D and Clausen Cl₂ with a fixed
//!   principal-branch convention, plus their identity suite.
//! * [`qdilog`] — the quantum dilogarithm Φ_γ by deformed-contour quadrature,
//!   the closed-form H integral and S-matrix amplitudes.
//! * [`braid`] — braid-word parsing and the doubled-strand crossing diagram.
//! * [`glue`] — momentum constraints and the saddle-point potential, with
//!   exact integer elimination to a free-variable basis.
//! * [`solve`] — damped-Newton multistart, solution classification and the
//!   volume report.
//! * [`cli`] — the `knotvol` command line front end.
//!
//! See the `examples/` directory for one runnable program per capability;
//! `cargo run --example figure_eight_volume` walks the whole pipeline.

pub mod braid;
pub mod checks;
pub mod cli;
pub mod dilog;
pub mod error;
pub mod glue;
pub mod qdilog;
pub mod solve;

pub use error::{Error, Result};

/// The universal scalar: a complex number with `f64` components.
pub type ComplexValue = num_complex::Complex64;
