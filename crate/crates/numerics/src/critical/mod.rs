//! Critical behaviour of the Burgers-type family at a gradient catastrophe.
//!
//! Near a generic catastrophe `(x0, t0, u0)` the solution is expected to
//! take the form `u = u0 + s3 eps^(1/4) U(X, T)` with
//! `U_XX + 3 U U_X + U^3 - U T = X`. The particular solution `U = P_X / P`
//! built from the Pearcey integral `P` is evaluated here, along with the
//! residuals of both universality ODEs and the hypergeometric audit.

mod catastrophe;
mod hyper;
mod ode;
mod pearcey;
mod poly;
mod universality;

pub use catastrophe::{critical_profile, find_catastrophe, CatastropheError, CatastrophePoint, CriticalScales, ProfilePoint};
pub use hyper::{audit_general_solution, general_solution_basis, hyper0f2, pochhammer, BasisTerm, GeneralSolutionAudit, GeneralSolutionRow, HyperError, Reading};
pub use ode::{combined_ode_residual, linear_ode_residual, nonlinear_ode_residual, Residual};
pub use pearcey::{GaussLegendre, Pearcey, PearceyValue};
pub use poly::Polynomial;
pub use universality::{universality_experiment, UniversalityConfig, UniversalityError, UniversalityReport, UniversalityRow};
