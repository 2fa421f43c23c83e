//! Theta sums over `SL(2,ℝ)⋉ℝ^{2k}`: group geometry and reduction, rational
//! orbits of the theta group, Jacobi theta evaluation, explicit constants and
//! numerical verification.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod orbits;
pub mod theta;
pub mod verify;

pub use bounds::{theta3_constant, BetaFactor, BoundReport, EtaMinimum};
pub use error::{Error, Result};
pub use geometry::{
    act, iwasawa_decompose, reduce_to_fundamental_domain, DomainTag, GElem, Generator, IwasawaPoint, Reduction, Sl2Mat,
};
pub use orbits::{classify_pair, gamma_theta_orbit, mk_exact, MkValue, OrbitRecord, PairClass, Rational, TorusPair};
pub use theta::{kappa_eta, theta3, theta_modulus, weyl_sum, Cutoff, KappaEstimate, Profile, TruncationBudget};
pub use verify::{Report, ReportItem, ScanResult, Verdict};
