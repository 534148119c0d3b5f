use crate::{lit, Real};

/// Absolute residual of an ODE together with a scale: the largest of its
/// terms and of the unknown and its first derivative. Including the unknown
/// keeps the scale meaningful where every term vanishes by symmetry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual<F> {
    pub absolute: F,
    pub scale: F,
}

impl<F: Real> Residual<F> {
    fn from_terms(absolute: F, terms: &[F]) -> Self {
        let scale = terms.iter().fold(F::zero(), |m, t| m.max(t.abs()));
        Residual { absolute: absolute.abs(), scale }
    }

    /// `absolute / scale`, zero when every term vanishes.
    pub fn relative(&self) -> F {
        if self.absolute == F::zero() {
            F::zero()
        } else {
            self.absolute / self.scale
        }
    }
}

/// `w_XXX - T w_X - X w` for `w = [w, w_X, w_XX, w_XXX]`.
pub fn linear_ode_residual<F: Real>(w: impl Fn(F, F) -> [F; 4], x: F, t: F) -> Residual<F> {
    let [w0, w1, _, w3] = w(x, t);
    Residual::from_terms(w3 - t * w1 - x * w0, &[w3, t * w1, x * w0, w0, w1])
}

/// `w_XXX - (X + T) w`, the equation in the single variable `X + T`.
pub fn combined_ode_residual<F: Real>(w: impl Fn(F, F) -> [F; 4], x: F, t: F) -> Residual<F> {
    let [w0, w1, _, w3] = w(x, t);
    Residual::from_terms(w3 - (x + t) * w0, &[w3, (x + t) * w0, w0, w1])
}

/// `U_XX + 3 U U_X + U^3 - U T - X` for `u = [U, U_X, U_XX]`.
pub fn nonlinear_ode_residual<F: Real>(u: impl Fn(F, F) -> [F; 3], x: F, t: F) -> Residual<F> {
    let [u0, u1, u2] = u(x, t);
    let terms = [u2, lit::<F>(3.0) * u0 * u1, u0 * u0 * u0, u0 * t, x];
    let absolute = terms[0] + terms[1] + terms[2] - terms[3] - terms[4];
    Residual::from_terms(absolute, &[terms[0], terms[1], terms[2], terms[3], terms[4], u0, u1])
}
