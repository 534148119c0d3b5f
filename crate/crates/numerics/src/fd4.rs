//! Fourth-order central differences on a periodic grid and the cyclic
//! banded solver for `(1 - eps D) P = q`.

use crate::Real;

/// Stencil weights of the fourth-order first derivative at offsets -2..=2,
/// in units of `1/h`.
const STENCIL: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];

pub fn derivative<F: Real>(f: &[F], h: F) -> Vec<F> {
    let n = f.len();
    let w: Vec<F> = STENCIL.iter().map(|&s| F::from(s).unwrap() / h).collect();
    (0..n)
        .map(|j| {
            (0..5).fold(F::zero(), |acc, d| {
                let idx = (j + n + d - 2) % n;
                acc + w[d] * f[idx]
            })
        })
        .collect()
}

/// LU factors of a (non-cyclic) pentadiagonal matrix, no pivoting.
#[derive(Clone, Debug)]
struct BandLu<F> {
    n: usize,
    /// Row `i`, band slot `d` holds column `i + d - 2`.
    band: Vec<[F; 5]>,
}

impl<F: Real> BandLu<F> {
    fn factor(mut band: Vec<[F; 5]>) -> Self {
        let n = band.len();
        for i in 0..n {
            let pivot = band[i][2];
            for r in (i + 1)..(i + 3).min(n) {
                let slot = i + 2 - r;
                let l = band[r][slot] / pivot;
                band[r][slot] = l;
                for c in (i + 1)..(i + 3).min(n) {
                    let from = c + 2 - i;
                    let to = c + 2 - r;
                    band[r][to] = band[r][to] - l * band[i][from];
                }
            }
        }
        BandLu { n, band }
    }

    fn solve(&self, rhs: &[F]) -> Vec<F> {
        let n = self.n;
        let mut y = rhs.to_vec();
        for i in 0..n {
            for c in i.saturating_sub(2)..i {
                y[i] = y[i] - self.band[i][c + 2 - i] * y[c];
            }
        }
        for i in (0..n).rev() {
            for c in (i + 1)..(i + 3).min(n) {
                y[i] = y[i] - self.band[i][c + 2 - i] * y[c];
            }
            y[i] = y[i] / self.band[i][2];
        }
        y
    }
}

/// Solver for the circulant system `(I - eps D4) P = q`.
///
/// The wrap-around entries form a rank-four correction of the banded part,
/// handled with the Sherman-Morrison-Woodbury identity.
#[derive(Clone, Debug)]
pub struct CyclicSolver<F> {
    lu: BandLu<F>,
    wrap: Vec<Vec<(usize, F)>>,
    z: Vec<Vec<F>>,
    capacitance: [[F; 4]; 4],
}

impl<F: Real> CyclicSolver<F> {
    pub fn new(n: usize, h: F, eps: F) -> Self {
        assert!(n >= 8, "cyclic solver needs at least 8 points");
        let coeff: Vec<F> = STENCIL
            .iter()
            .enumerate()
            .map(|(d, &s)| {
                let a = -eps * F::from(s).unwrap() / h;
                if d == 2 {
                    F::one() + a
                } else {
                    a
                }
            })
            .collect();
        let mut band = vec![[F::zero(); 5]; n];
        let mut wrap: Vec<Vec<(usize, F)>> = Vec::new();
        let rows = [0, 1, n - 2, n - 1];
        for (i, row) in band.iter_mut().enumerate() {
            let mut extra = Vec::new();
            for (d, &a) in coeff.iter().enumerate() {
                let col = i as i64 + d as i64 - 2;
                if (0..n as i64).contains(&col) {
                    row[d] = a;
                } else {
                    extra.push((col.rem_euclid(n as i64) as usize, a));
                }
            }
            if rows.contains(&i) {
                wrap.push(extra);
            }
        }
        let lu = BandLu::factor(band);
        let z: Vec<Vec<F>> = rows
            .iter()
            .map(|&r| {
                let mut e = vec![F::zero(); n];
                e[r] = F::one();
                lu.solve(&e)
            })
            .collect();
        let mut capacitance = [[F::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let dot = wrap[i].iter().fold(F::zero(), |s, &(c, a)| s + a * z[j][c]);
                capacitance[i][j] = dot + if i == j { F::one() } else { F::zero() };
            }
        }
        CyclicSolver { lu, wrap, z, capacitance }
    }

    pub fn solve(&self, rhs: &[F]) -> Vec<F> {
        let mut y = self.lu.solve(rhs);
        let mut g = [F::zero(); 4];
        for (gi, w) in g.iter_mut().zip(&self.wrap) {
            *gi = w.iter().fold(F::zero(), |s, &(c, a)| s + a * y[c]);
        }
        let h = solve4(self.capacitance, g);
        for (zj, hj) in self.z.iter().zip(h) {
            for (yk, &zk) in y.iter_mut().zip(zj) {
                *yk = *yk - zk * hj;
            }
        }
        y
    }
}

fn solve4<F: Real>(mut a: [[F; 4]; 4], mut b: [F; 4]) -> [F; 4] {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..4 {
            let l = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] = a[r][c] - l * a[col][c];
            }
            b[r] = b[r] - l * b[col];
        }
    }
    let mut x = [F::zero(); 4];
    for r in (0..4).rev() {
        let s = ((r + 1)..4).fold(b[r], |s, c| s - a[r][c] * x[c]);
        x[r] = s / a[r][r];
    }
    x
}
