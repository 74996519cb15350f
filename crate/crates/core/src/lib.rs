//! Exact computation of Kazhdan-Lusztig and Z-polynomials of uniform matroids, with
//! independent cross-checks and real-rootedness certificates.

mod error;

pub mod arith;
pub mod certificate;
pub mod cli;
pub mod hooklen;
pub mod klcoeff;
pub mod oracle;
pub mod polyring;
pub mod realroot;
pub mod seqfactor;
pub mod zcoeff;

pub use certificate::{Certificate, Method, Verdict};
pub use error::{Error, Result};
pub use polyring::{ParamPoly, Poly};
