//! Quasi-Miura asymptotics of `v_t = d_x(v^2 + eps a(v) v_x + ...)` around
//! hodograph solutions `x + 2ut + f(u) = 0` of the Hopf equation.
//!
//! Transport equations are solved in the `(u, u_x)` form, where the flux
//! derivatives `f'', f''', ...` stand in for the higher jets; the results
//! are then turned into rational expressions in the jets by eliminating the
//! flux.

mod hodograph;
mod qexpr;
mod transport;

pub use hodograph::{hodograph_solve, HodographError, HodographSign};
pub use qexpr::{
    eval_current, flux, flux_from_jets, from_hodograph, hodograph_jet, to_hodograph, QExpr, QMonomial, QSeries,
};
pub use transport::{
    adjoint_hopf, alpha_row_expr, burgers_alpha, deformed_hodograph_residual, formal_solution_residual,
    initial_datum_fix, linear_hodograph_correction, quasi_miura, quasi_miura_series, quasi_miura_with,
    transport_quadrature, transport_rhs, transport_solve, DatumCorrection, HodographResidual, InvariantMode,
    QuasiMiuraTerm,
};
