//! Exact arithmetic for weakly holomorphic modular forms of level one.
//!
//! The crate is organised around two models of the same objects and the maps
//! between them:
//!
//! * [`series`] — truncated Laurent expansions in `q` over arbitrary-precision
//!   rationals, with the Eisenstein series, the discriminant, and the operator
//!   `D = q d/dq`.
//! * [`ring`] — the graded ring `Q[u, v][1/Delta]` (`u`, `v` the weight-4 and
//!   weight-6 Eisenstein generators, `Delta = u^3 - 27 v^2`), whose
//!   weight-graded pieces are exactly the weakly holomorphic modular forms.
//!   Expansion into [`series`] and the inverse membership map connect the two.
//! * [`connection`] — sections of the symmetric powers of the rank-two bundle
//!   spanned by `S`, `T` over the moduli of elliptic curves, the flat
//!   connection in both the algebraic `(S, T)` frame and the `q`-adapted
//!   `(A, T)` frame, the gauge change `S = A + 2 G2 T`, residues, and the
//!   `(-1)^n`-symmetric inner product.
//! * [`cohomology`] — the first de Rham cohomology with coefficients in the
//!   `n`-th symmetric power, presented as weight-`n+2` forms modulo
//!   `D^(n+1)`-images: reduction of closed one-forms to their `T^n` tail,
//!   canonical representatives of pole order at most `ell = dim S_k`, the
//!   `f_m` basis, Hecke operators, and the Eisenstein/holomorphic/negative
//!   splitting.
//! * [`pairing`] — the exact residue pairing on cuspidal times full
//!   cohomology.
//! * [`periods`] — high-precision numerics: evaluation on the upper half
//!   plane, Eichler cocycles, cocycle and coboundary defect checks, period
//!   polynomials, and rational reconstruction.
//!
//! Everything outside [`periods`] is exact: no floating point, all rationals
//! fully reduced, and every series operation records the tightest provable
//! truncation window.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the command
//! line front end live in the companion `mfdr` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cohomology;
pub mod connection;
pub mod error;
mod linalg;
pub mod pairing;
pub mod periods;
pub mod rat;
pub mod ring;
pub mod sampling;
pub mod series;

pub use error::{Error, Result};
pub use rat::Rat;
