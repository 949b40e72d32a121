//! Numerics for Fourier uniqueness pairs seen through the quantum harmonic
//! oscillator.
//!
//! The crate is organised bottom-up:
//!
//! * [`tridiag`]: symmetric tridiagonal eigenvalues by Sturm bisection and
//!   eigenvectors by inverse iteration. Shared by the quadrature and the
//!   confined solver.
//! * [`hermite`]: Hermite functions, Gauss–Hermite rules, expansions and the
//!   Fourier transform acting diagonally on the Hermite basis.
//! * [`sobolev`]: the Fourier-symmetric Sobolev norm computed spectrally and
//!   by quadrature, plus the uncertainty ratio.
//! * [`confined`]: the Dirichlet-confined oscillator `H_[a,b]`, its
//!   finite-difference spectrum and the analytic box-potential bounds.
//! * [`criticality`]: spacing-product and ground-state-energy criticality of
//!   point sets.
//! * [`certificate`]: the interval-decomposition inequality chain evaluated on
//!   concrete witness functions.
//! * [`cli`]: the `uniqpair` command-line front end.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificate;
pub mod cli;
pub mod confined;
pub mod criticality;
pub mod error;
pub mod hermite;
pub mod sobolev;
pub mod tridiag;

pub use certificate::{
    build_vanishing_function, certify, rayleigh_quotient, Certificate, CertifyOptions,
    DerivativeMode, FourierCheck, PiecewiseFunction, Verdict,
};
pub use confined::{
    box_bounds, box_bounds_with, box_eigenfunction, ground_energy, ground_state, solve_confined,
    BoxBounds, GroundState, Interval, SpectrumResult, ZeroPolicy,
};
pub use criticality::{
    convert_convention, gse_criticality, lemma_checks, spacing_products, Convention,
    CriticalityReport, GseReport, LemmaReport, PointSet, TailModel,
};
pub use error::{Error, Result};
pub use hermite::{
    eval_hermite, expand, fourier_diagonal, gauss_hermite, Expanded, HermiteExpansion,
    QuadratureRule,
};
pub use sobolev::{h_norm_sq_quadrature, h_norm_sq_spectral, uncertainty_ratio, NormReport};

pub use num_complex::Complex64;
