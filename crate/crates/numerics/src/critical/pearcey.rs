use crate::{lit, Real};

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
                let pm = if n == 1 { 1.0 } else { p0 };
                dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }
}

/// `P` and its derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PearceyValue<F> {
    pub p: F,
    pub px: F,
    pub pxx: F,
    pub pxxx: F,
    pub pt: F,
}

/// `P(X, T) = int exp(-(4z^4 - 2T z^2 + 2X z)) dz` by composite
/// Gauss-Legendre quadrature on `[-Z, Z]`.
///
/// X-derivatives are moments of the same integrand, `d_X^k` bringing down
/// `(-2z)^k` and `d_T` bringing down `2z^2`.
#[derive(Clone, Debug)]
pub struct Pearcey<F> {
    z_max: F,
    box_half_width: F,
    nodes: Vec<F>,
    weights: Vec<F>,
}

impl<F: Real> Default for Pearcey<F> {
    fn default() -> Self {
        Pearcey::new(lit(4.0), 64, 16, lit(3.0))
    }
}

impl<F: Real> Pearcey<F> {
    /// `panels` panels of an `order`-point rule on `[-z_max, z_max]`;
    /// `box_half_width` bounds the validated `(X, T)` square.
    pub fn new(z_max: F, panels: usize, order: usize, box_half_width: F) -> Self {
        let rule = GaussLegendre::new(order);
        let width = lit::<F>(2.0) * z_max / F::from(panels).unwrap();
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let mid = -z_max + width * (F::from(p).unwrap() + lit(0.5));
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + width / lit(2.0) * lit(x));
                weights.push(width / lit(2.0) * lit(w));
            }
        }
        Pearcey { z_max, box_half_width, nodes, weights }
    }

    pub fn z_max(&self) -> F {
        self.z_max
    }

    /// `(2Z) exp(-4Z^4 + 2|T| Z^2 + 2|X| Z)`, bounding the truncated tails.
    pub fn tail_bound(&self, x: F, t: F) -> F {
        let z = self.z_max;
        let two = lit::<F>(2.0);
        two * z * (-lit::<F>(4.0) * z.powi(4) + two * t.abs() * z * z + two * x.abs() * z).exp()
    }

    /// Whether `(X, T)` lies in the validated box with a negligible tail.
    pub fn in_validated_box(&self, x: F, t: F) -> bool {
        x.abs() <= self.box_half_width && t.abs() <= self.box_half_width && self.tail_bound(x, t) < lit(1e-14)
    }

    fn integrate(&self, x: F, t: F, g: impl Fn(F) -> F) -> F {
        let two = lit::<F>(2.0);
        let four = lit::<F>(4.0);
        self.nodes.iter().zip(&self.weights).fold(F::zero(), |s, (&z, &w)| {
            let z2 = z * z;
            s + w * g(z) * (-(four * z2 * z2 - two * t * z2 + two * x * z)).exp()
        })
    }

    pub fn eval(&self, x: F, t: F) -> PearceyValue<F> {
        let two = lit::<F>(2.0);
        let four = lit::<F>(4.0);
        let (mut p, mut px, mut pxx, mut pxxx, mut pt) = (F::zero(), F::zero(), F::zero(), F::zero(), F::zero());
        for (&z, &w) in self.nodes.iter().zip(&self.weights) {
            let z2 = z * z;
            let e = w * (-(four * z2 * z2 - two * t * z2 + two * x * z)).exp();
            let m = -two * z;
            p = p + e;
            px = px + e * m;
            pxx = pxx + e * m * m;
            pxxx = pxxx + e * m * m * m;
            pt = pt + e * two * z2;
        }
        PearceyValue { p, px, pxx, pxxx, pt }
    }

    /// `int (-16z^3 + 4Tz - 2X) exp(...) dz`, which vanishes identically.
    pub fn identity_integral(&self, x: F, t: F) -> F {
        let two = lit::<F>(2.0);
        let four = lit::<F>(4.0);
        self.integrate(x, t, |z| -lit::<F>(16.0) * z * z * z + four * t * z - two * x)
    }

    /// `[U, U_X, U_XX]` for `U = P_X / P`.
    pub fn profile(&self, x: F, t: F) -> [F; 3] {
        let v = self.eval(x, t);
        let u = v.px / v.p;
        let r2 = v.pxx / v.p;
        let r3 = v.pxxx / v.p;
        let three = lit::<F>(3.0);
        [u, r2 - u * u, r3 - three * u * r2 + lit::<F>(2.0) * u * u * u]
    }

    /// `[P, P_X, P_XX, P_XXX]`.
    pub fn jet(&self, x: F, t: F) -> [F; 4] {
        let v = self.eval(x, t);
        [v.p, v.px, v.pxx, v.pxxx]
    }
}
