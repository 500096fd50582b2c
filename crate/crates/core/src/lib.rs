//! Explicit split-signature Zollfrei geometry on the Grassmannian of
//! oriented 2-planes, and the twistor correspondence that drives it.
//!
//! The crate is organised around one axisymmetric rapidly decreasing profile
//! `f` on the plane (and its partner, an odd imaginary profile `h` on the
//! line):
//!
//! - [`transforms`]: Radon / dual Radon / half-Radon / Hilbert transforms and
//!   the inversion formula connecting them;
//! - [`petean`]: the metric `2(dx₁dx₃+dx₂dx₄) + f(dx₁²+dx₂²)`, its
//!   orthonormal frame, closed-form connection, and curvature diagnostics;
//! - [`charts`]: the three-chart atlas on `TS²` and its embedding into the
//!   Grassmannian, including the two-sphere at infinity;
//! - [`surfaces`]: β-surface defining functions in both chart systems and
//!   their extension across the equator;
//! - [`geodesics`]: null geodesics inside β-surfaces and the closure
//!   (Zollfrei) harness;
//! - [`twistor`]: the `f ↔ h` correspondence, holomorphic disk families in
//!   `ℂP³`, the foliation probe, and the boundary-jump experiment.
//!
//! All numerics are generic over the scalar type through [`scalar::Real`];
//! the `f64` aliases below are what the CLI and the test suites use.

pub mod charts;
pub mod geodesics;
pub mod petean;
pub mod profile;
pub mod quad;
pub mod scalar;
pub mod spline;
pub mod surfaces;
pub mod transforms;
pub mod twistor;

pub use profile::{BivariateFn, OddProfile, PolyPatch, ProfileError, RadialProfile};
pub use quad::{QuadError, QuadratureConfig};
pub use scalar::Real;
pub use transforms::{HalfSign, TransformError};

/// `f64` aliases used by the CLI and the acceptance suite.
pub mod f64_types {
    pub type Quad = crate::quad::QuadratureConfig<f64>;
    pub type Radial = crate::profile::RadialProfile<f64>;
    pub type Odd = crate::profile::OddProfile<f64>;
    pub type Patch = crate::profile::PolyPatch<f64>;
    pub type Metric<'f> = crate::petean::PeteanMetric<'f, f64>;
    pub type Chart = crate::charts::ChartPoint<f64>;
    pub type Grass = crate::charts::GrassPoint<f64>;
    pub type Beta = crate::surfaces::BetaParams<f64>;
    pub type Nu0 = crate::geodesics::Nu0Solution<f64>;
    pub type Geodesic = crate::geodesics::GeodesicSpec<f64>;
    pub type Pair = crate::twistor::CorrespondencePair<f64>;
    pub type Twistor = crate::twistor::TwistorPoint<f64>;
    pub type Disk = crate::twistor::DiskParams<f64>;
}
