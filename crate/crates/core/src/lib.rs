//! Numerics for the three-mode enhanced squeezing operator
//! `S3 = exp{iλ[Q1(P2+P3) + Q2(P1+P3) + Q3(P1+P2)]}` and its squeezed
//! coherent states.
//!
//! The state `S3|α⟩` is Gaussian, so almost everything here is computed from
//! its phase-space mean and covariance ([`gaussian`]). The closed forms are
//! cross-checked against a brute-force truncated Fock-space engine
//! ([`fock`]) and, for the collective mode, an exact single-mode reduction
//! ([`photon`]).
//!
//! Conventions: ħ = 1, `[Q, P] = i`, `a = (Q + iP)/√2`, phase-space vectors
//! ordered `(q1, q2, q3, p1, p2, p3)`.

pub mod bell;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod grid;
pub mod photon;
pub mod symplectic;

pub use error::{Error, Result};
pub use num_complex::Complex64;
