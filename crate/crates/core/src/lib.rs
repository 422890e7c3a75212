//! Archimedean copulas through their ℓ1-norm symmetric stochastic representation.
//!
//! An Archimedean copula is built from a *generator* ψ: a continuous survival
//! function on `[0, ∞)` with `ψ(0) = 1`, strictly decreasing where positive and
//! vanishing at infinity. The copula is `C(u) = ψ(ψ⁻¹(u₁) + … + ψ⁻¹(u_d))`.
//! Such a ψ generates a d-dimensional copula exactly when it is d-monotone,
//! which happens exactly when ψ is the Williamson d-transform of a radial law
//! `F` on `(0, ∞)`. The corresponding random vector factors as `X = R·S` with
//! `R ~ F` and `S` uniform on the unit simplex, independent of `R`.
//!
//! This crate implements that circle of ideas as numerical machinery:
//!
//! * [`gen`] — generator families (Clayton, Gumbel, independence,
//!   countermonotone, a slowly varying family, an oscillating counterexample),
//!   derivatives, pseudo-inverses and d-monotonicity checks;
//! * [`radial`] — radial distributions, the Williamson d-transform and its
//!   exact inversion, Monte Carlo mixture oracles, Beta moment identities;
//! * [`sampler`] — reproducible exact sampling of simplex, ℓ1-norm symmetric
//!   and copula observations;
//! * [`copula`] — pointwise copula and survival evaluation, rectangle masses,
//!   rank-based empirical copulas;
//! * [`taildep`] — coefficients of tail dependence of the first and second
//!   kind, analytic limits and empirical exceedance curves;
//! * [`extremes`] — extreme-value rescalings, Gumbel-limit parameters, the
//!   Galambos copula and exponent-measure integrals;
//! * [`threshold`] — lower and upper threshold copula limits;
//! * [`regvar`] — regular-variation index estimation at infinity, the origin
//!   and finite endpoints, auxiliary functions and domain-of-attraction checks.

pub mod copula;
pub mod error;
pub mod extremes;
pub mod gen;
pub mod numeric;
pub mod radial;
pub mod regvar;
pub mod sampler;
pub mod taildep;
pub mod threshold;

pub use copula::EmpiricalCopula;
pub use error::{Error, Result};
pub use gen::{make_family, DMax, FamilySpec, Generator, GeneratorReport, OscillatorParams};
pub use radial::{DiscreteRadial, RadialDistribution};
pub use regvar::{RvEstimate, RvIndex};
pub use sampler::{SampleMatrix, SampleSpace};
pub use taildep::TailDepReport;
pub use threshold::ThresholdReport;
