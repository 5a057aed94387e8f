//! Kernels, outer functions and subnormality tests for Dirichlet-type spaces
//! `D(μ)` with finitely atomic `μ` on the unit circle.

pub mod cdsp;
pub mod cpoly;
pub mod dbr_ident;
pub mod dirichlet;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod pipeline;
pub mod reference;

pub type Complex = num_complex::Complex64;

pub use cdsp::{CdspVerdict, Verdict};
pub use cpoly::{ComplexPoly, Factorization, LaurentPoly};
pub use dbr_ident::SchurIdentification;
pub use dirichlet::CostaraModel;
pub use error::{Error, Result};
pub use measure::{parse_measure, Atom, MeasureSpec};
pub use pipeline::{Analysis, AnalysisOptions};
