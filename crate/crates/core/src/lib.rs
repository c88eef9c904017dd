//! Exact symbolic engine for the AKNS hierarchy: the Lax and phase-space
//! series, the variational bicomplex, Lagrangian, symplectic and Hamiltonian
//! multiforms, and the multi-time Poisson bracket, all over ℚ(i).
//!
//! The algebra is generic over [`Scalar`]; the aliases below fix the
//! canonical field [`GaussianRational`].

pub mod akns;
pub mod bicomplex;
pub mod error;
pub mod multiform;
pub mod poisson;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod series;

pub use akns::{build_frame, ChartDirection};
pub use bicomplex::{Generator, Leg, Legs};
pub use error::{Error, Result};
pub use report::Report;
pub use poly::{Jet, Kind, Monomial, Variable};
pub use scalar::{sqrt_two_i, GaussianRational, Scalar};

pub type Poly = poly::Poly<GaussianRational>;
pub type TruncSeries = series::TruncSeries<GaussianRational>;
pub type MatrixSeries = series::MatrixSeries<GaussianRational>;
pub type BiSeries = series::BiSeries<GaussianRational>;
pub type Mat2 = series::Mat2<GaussianRational>;
pub type AknsFrame = akns::AknsFrame<GaussianRational>;
pub type FlowTable = akns::FlowTable<GaussianRational>;
pub type Flows = akns::Flows<GaussianRational>;
pub type Hierarchy = akns::Hierarchy<GaussianRational>;
pub type QrChart = akns::QrChart<GaussianRational>;
pub type VBForm = bicomplex::VBForm<GaussianRational>;
pub type VectorField = bicomplex::VectorField<GaussianRational>;
pub type SymplecticCoeff = multiform::SymplecticCoeff<GaussianRational>;
pub type HamOneForm = poisson::HamOneForm<GaussianRational>;
pub type HamForm = poisson::HamForm<GaussianRational>;
