//! Probabilists' Hermite polynomials `H_q(x) = (-1)^q e^{x²/2} dᵠ/dxᵠ e^{-x²/2}`
//! and Gauss–Hermite quadrature for the standard Gaussian measure.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 64;

/// Hermite degree, bounded by [`MAX_ORDER`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HermiteOrder(u32);

impl HermiteOrder {
    pub fn new(q: u32) -> Result<Self> {
        if q <= MAX_ORDER {
            Ok(Self(q))
        } else {
            Err(Error::InvalidArgument(format!(
                "Hermite order {q} exceeds {MAX_ORDER}"
            )))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// `H_q(x)` by the three-term recurrence `H_{m+1} = x H_m - m H_{m-1}`.
pub fn hermite_eval(q: HermiteOrder, x: f64) -> f64 {
    hermite(q.0 as usize, x)
}

#[inline]
pub(crate) fn hermite(q: usize, x: f64) -> f64 {
    match q {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for m in 1..q {
                let next = x * cur - m as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `[H_0(x), ..., H_q(x)]` in one pass.
pub fn hermite_table(q: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if q == 0 {
        return;
    }
    out.push(x);
    for m in 1..q {
        let next = x * out[m] - m as f64 * out[m - 1];
        out.push(next);
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Both sides of the linearisation
/// `H_p(x) H_q(x) = Σ_{r=0}^{p∧q} r! C(p,r) C(q,r) H_{p+q-2r}(x)`.
pub fn hermite_product_check(p: HermiteOrder, q: HermiteOrder, x: f64) -> Result<(f64, f64)> {
    if p.0 + q.0 > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "p + q = {} exceeds {MAX_ORDER}",
            p.0 + q.0
        )));
    }
    let lhs = hermite(p.0 as usize, x) * hermite(q.0 as usize, x);
    let rhs = (0..=p.0.min(q.0))
        .map(|r| {
            factorial(r)
                * binomial(p.0, r)
                * binomial(q.0, r)
                * hermite((p.0 + q.0 - 2 * r) as usize, x)
        })
        .sum();
    Ok((lhs, rhs))
}

/// Gauss–Hermite rule for the standard normal density: nodes `x_i` and
/// weights `w_i` with `Σ w_i = 1`, exact for polynomials of degree
/// `≤ 2·len - 1`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Golub–Welsch: eigen-decomposition of the Jacobi matrix of the monic
    /// probabilists' recurrence, off-diagonal `sqrt(k)`.
    pub fn new(points: usize) -> Self {
        assert!(points >= 1, "need at least one quadrature node");
        let jacobi = DMatrix::from_fn(points, points, |i, j| {
            if i.abs_diff(j) == 1 {
                (i.max(j) as f64).sqrt()
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Newton polish on H_m, then Christoffel weights 1 / Σ_{k<m} H_k²/k!
        for pair in &mut pairs {
            let mut x = pair.0;
            for _ in 0..3 {
                let (hm, hm1) = hermite_pair(points, x);
                let step = hm / (points as f64 * hm1);
                if !step.is_finite() {
                    break;
                }
                x -= step;
            }
            let (mut prev, mut cur) = (0.0, 1.0);
            let mut fact = 1.0;
            let mut norm = 0.0;
            for k in 0..points {
                if k > 0 {
                    fact *= k as f64;
                }
                norm += cur * cur / fact;
                let next = x * cur - k as f64 * prev;
                prev = cur;
                cur = next;
            }
            *pair = (x, 1.0 / norm);
        }
        // symmetrise: the rule is exactly symmetric about 0
        let len = pairs.len();
        for i in 0..len / 2 {
            let x = 0.5 * (pairs[len - 1 - i].0 - pairs[i].0);
            let w = 0.5 * (pairs[len - 1 - i].1 + pairs[i].1);
            pairs[i] = (-x, w);
            pairs[len - 1 - i] = (x, w);
        }
        if len % 2 == 1 {
            pairs[len / 2].0 = 0.0;
        }
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        }
    }

    /// `E[g(Z)]`, `Z ~ N(0,1)`.
    pub fn expect<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// `(H_m(x), H_{m-1}(x))`.
fn hermite_pair(m: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..m {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `∫ H_p H_q dγ` by Gauss–Hermite quadrature with enough nodes to be exact.
pub fn gauss_hermite_inner(p: HermiteOrder, q: HermiteOrder) -> Result<f64> {
    if p.0 + q.0 > 40 {
        return Err(Error::InvalidArgument(format!(
            "p + q = {} exceeds the quadrature budget 40",
            p.0 + q.0
        )));
    }
    let rule = GaussHermite::new(((p.0 + q.0) / 2 + 1) as usize);
    Ok(rule.expect(|x| hermite(p.0 as usize, x) * hermite(q.0 as usize, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ho(q: u32) -> HermiteOrder {
        HermiteOrder::new(q).unwrap()
    }

    /// Integer monomial coefficients of H_q from
    /// `H_q(x) = q! Σ_m (-1)^m x^{q-2m} / (m! (q-2m)! 2^m)`.
    fn monomial_coeffs(q: u32) -> Vec<(u32, f64)> {
        (0..=q / 2)
            .map(|m| {
                let c = factorial(q) / (factorial(m) * factorial(q - 2 * m) * 2f64.powi(m as i32));
                (q - 2 * m, if m % 2 == 0 { c } else { -c })
            })
            .collect()
    }

    fn monomial_eval(q: u32, x: f64) -> f64 {
        monomial_coeffs(q)
            .into_iter()
            .map(|(d, c)| c * x.powi(d as i32))
            .sum()
    }

    #[test]
    fn order_is_bounded() {
        assert!(HermiteOrder::new(64).is_ok());
        assert!(HermiteOrder::new(65).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(hermite_eval(ho(2), 0.0), -1.0);
        assert_eq!(hermite_eval(ho(3), 2.0), 2.0);
        let x: f64 = 1.3;
        let explicit = x.powi(5) - 10.0 * x.powi(3) + 15.0 * x;
        assert_relative_eq!(hermite_eval(ho(5), x), explicit, max_relative = 1e-14);
        assert_relative_eq!(monomial_eval(5, x), explicit, max_relative = 1e-14);
    }

    #[test]
    fn recurrence_matches_monomials() {
        for q in 0..=20 {
            for i in 0..=40 {
                let x = -10.0 + 0.5 * i as f64;
                let a = hermite(q, x);
                let b = monomial_eval(q as u32, x);
                let scale = monomial_coeffs(q as u32)
                    .iter()
                    .map(|(d, c)| (c * x.powi(*d as i32)).abs())
                    .sum::<f64>();
                assert!((a - b).abs() <= 1e-12 * scale.max(1.0), "q={q} x={x}");
            }
        }
    }

    #[test]
    fn parity() {
        for q in 0..=20 {
            for x in [0.3, 1.7, 4.2] {
                let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(hermite(q, -x), sign * hermite(q, x));
            }
        }
    }

    #[test]
    fn table_matches_eval() {
        let mut t = Vec::new();
        hermite_table(9, 0.77, &mut t);
        for (q, v) in t.iter().enumerate() {
            assert_eq!(*v, hermite(q, 0.77));
        }
    }

    #[test]
    fn product_examples() {
        let (l, r) = hermite_product_check(ho(1), ho(1), 1.9).unwrap();
        assert_relative_eq!(l, 1.9 * 1.9, max_relative = 1e-15);
        assert_relative_eq!(r, hermite(2, 1.9) + 1.0, max_relative = 1e-15);
        let (l, r) = hermite_product_check(ho(2), ho(0), -0.4).unwrap();
        assert_eq!(l, hermite(2, -0.4));
        assert_eq!(r, hermite(2, -0.4));
        let (l, r) = hermite_product_check(ho(3), ho(2), 0.7).unwrap();
        assert!((l - r).abs() <= 1e-9 * (1.0 + l.abs()));
        assert!(hermite_product_check(ho(40), ho(30), 0.0).is_err());
    }

    #[test]
    fn inner_examples() {
        assert_relative_eq!(gauss_hermite_inner(ho(2), ho(2)).unwrap(), 2.0, epsilon = 1e-12);
        assert!(gauss_hermite_inner(ho(3), ho(1)).unwrap().abs() < 1e-12);
        assert_relative_eq!(gauss_hermite_inner(ho(6), ho(6)).unwrap(), 720.0, max_relative = 1e-12);
        assert!(gauss_hermite_inner(ho(21), ho(20)).is_err());
    }

    #[test]
    fn quadrature_moments() {
        let rule = GaussHermite::new(10);
        assert_relative_eq!(rule.expect(|_| 1.0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(rule.expect(|x| x * x), 1.0, epsilon = 1e-13);
        assert_relative_eq!(rule.expect(|x| x.powi(4)), 3.0, epsilon = 1e-12);
        assert_relative_eq!(rule.expect(|x| x.powi(18)), 34_459_425.0, max_relative = 1e-10);
        assert!(rule.expect(|x| x.powi(3)).abs() < 1e-13);
    }
}
