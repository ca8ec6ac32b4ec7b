//! Quantum Fisher information (QFI) toolkit for noise-parameter estimation.
//!
//! This crate computes how precisely the noise strength `p` of a local
//! quantum channel can be estimated, in the sense of the symmetric
//! logarithmic derivative (SLD) Cramér–Rao bound. It targets channels whose
//! Kraus decomposition factorizes into parameter-dependent scalar weights
//! and fixed operators ("weighted-Kraus" or vector-encoding channels), with
//! the qudit depolarizing channel and the qubit bit-flip channel built in.
//!
//! The main entry points are:
//!
//! - [`channels`]: channel descriptions with analytic `p`-derivatives and
//!   `n`-fold local application to a probe state,
//! - [`qfi`]: three independent QFI engines (spectral, commuting-eigenvalue,
//!   fidelity finite-difference) plus the continuous-commutativity test that
//!   filters candidate optimal probes,
//! - [`depol`]: closed-form QFI for Schmidt-rank-`m` two-qudit probes under
//!   local depolarizing noise, the optimal-rank staircase sweep, three-qubit
//!   probe-family thresholds, and the high-noise product-probe check,
//! - [`bitflip`]: the six commuting-geometry QFI formulas for two-qubit
//!   local bit-flip noise and the optimal probe family with QFI ceiling
//!   `2/(p(1-p))`,
//! - [`optimizer`]: derivative-free maximization of the spectral QFI over
//!   pure probe states, used as an independent numerical cross-check.
//!
//! The crate is `no_std` + `alloc`; all floating-point kernels go through
//! `libm` so results are identical with or without the standard library.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bitflip;
pub mod channels;
pub mod depol;
mod error;
pub mod expr;
pub mod linalg;
mod math;
pub mod optimizer;
pub mod probes;
pub mod qfi;
pub mod rng;

pub use error::{Error, Result};
