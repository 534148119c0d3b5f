use crate::Real;

/// Real polynomial, coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<F> {
    coeffs: Vec<F>,
}

impl<F: Real> Polynomial<F> {
    pub fn new(coeffs: Vec<F>) -> Self {
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn eval(&self, u: F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, &c| acc * u + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * F::from(k).unwrap()).collect();
        Polynomial { coeffs }
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![F::zero()];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, &c)| c / F::from(k + 1).unwrap()));
        Polynomial { coeffs }
    }

    /// `[f, f', f'', f''']` at `u`.
    pub fn jet(&self, u: F) -> [F; 4] {
        let d1 = self.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        [self.eval(u), d1.eval(u), d2.eval(u), d3.eval(u)]
    }

    /// `(u - center)^3 * lead + slope (u - center) + offset`, expanded.
    pub fn shifted_cubic(center: F, lead: F, slope: F, offset: F) -> Self {
        let c = center;
        let three = F::from(3.0).unwrap();
        Polynomial::new(vec![
            offset - slope * c - lead * c * c * c,
            slope + three * lead * c * c,
            -three * lead * c,
            lead,
        ])
    }
}
