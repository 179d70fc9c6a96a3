//! Truncated power series over [`CoefExpr`] and the Jackson q-exponential,
//! q-trigonometric and q-Euler series built from them.

use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::CoefExpr;
use crate::mpoly::MPoly;
use crate::qnum::{q_factorial_inv_base, q_int_base, q_triangular, QBase};

/// `c_0 + c_1 x + … + c_N x^N`, valid through degree `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries {
    var: String,
    coeffs: Vec<CoefExpr>,
}

impl TruncSeries {
    /// `coeffs[k]` is the coefficient of `x^k`; the order is `coeffs.len() - 1`.
    pub fn new(var: impl Into<String>, coeffs: Vec<CoefExpr>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least one coefficient"
        );
        TruncSeries {
            var: var.into(),
            coeffs,
        }
    }

    pub fn zero(var: impl Into<String>, order: u32) -> Self {
        TruncSeries::new(var, vec![CoefExpr::zero(); order as usize + 1])
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, k: u32) -> &CoefExpr {
        &self.coeffs[k as usize]
    }

    pub fn coeffs(&self) -> &[CoefExpr] {
        &self.coeffs
    }

    pub fn with_var(mut self, var: impl Into<String>) -> Self {
        self.var = var.into();
        self
    }

    pub fn truncate(&self, order: u32) -> Self {
        let n = (order.min(self.order()) + 1) as usize;
        TruncSeries::new(self.var.clone(), self.coeffs[..n].to_vec())
    }

    pub fn scale(&self, c: &CoefExpr) -> Self {
        TruncSeries::new(
            self.var.clone(),
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    /// Degree-by-degree q-derivative in base `b`: `x^n ↦ [n]_b x^{n-1}`.
    /// The result has order one less (order 0 maps to the zero series).
    pub fn q_derivative(&self, base: QBase) -> Self {
        if self.order() == 0 {
            return TruncSeries::zero(self.var.clone(), 0);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|n| &self.coeffs[n] * &CoefExpr::from(q_int_base(n as u32, base)))
            .collect();
        TruncSeries::new(self.var.clone(), coeffs)
    }

    /// Substitutes `x ↦ a·x^p`; coefficients beyond `order` are dropped.
    pub fn substitute_monomial(&self, a: &CoefExpr, p: u32, order: u32) -> Self {
        assert!(p >= 1);
        let mut out = vec![CoefExpr::zero(); order as usize + 1];
        let mut a_pow = CoefExpr::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            let deg = k * p as usize;
            if deg > order as usize {
                break;
            }
            out[deg] = c * &a_pow;
            a_pow = &a_pow * a;
        }
        let valid = (self.order() as usize * p as usize).min(order as usize);
        out.truncate(valid + 1);
        TruncSeries::new(self.var.clone(), out)
    }

    /// Partial sum at `x = value`.
    pub fn eval_at(&self, value: &CoefExpr) -> CoefExpr {
        let mut acc = CoefExpr::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// The truncated series as a univariate polynomial.
    pub fn to_mpoly(&self) -> MPoly {
        let mut p = MPoly::zero(&[self.var.as_str()]);
        for (k, c) in self.coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        p
    }

    /// Applies a coefficient map to every term.
    pub fn map_coeffs(&self, f: impl Fn(&CoefExpr) -> CoefExpr) -> Self {
        TruncSeries::new(self.var.clone(), self.coeffs.iter().map(f).collect())
    }

    /// Realizes `q ↦ 1/q` on every coefficient.
    pub fn substitute_inverse(&self) -> Self {
        self.map_coeffs(CoefExpr::substitute_inverse)
    }

    fn zip_with(&self, rhs: &TruncSeries, f: impl Fn(&CoefExpr, &CoefExpr) -> CoefExpr) -> Self {
        assert_eq!(self.var, rhs.var, "series in different variables");
        let n = self.coeffs.len().min(rhs.coeffs.len());
        TruncSeries::new(
            self.var.clone(),
            (0..n).map(|k| f(&self.coeffs[k], &rhs.coeffs[k])).collect(),
        )
    }
}

impl<'a> Add<&'a TruncSeries> for &'a TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a TruncSeries> for &'a TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        self.map_coeffs(|c| -c)
    }
}

impl<'a> Mul<&'a TruncSeries> for &'a TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        assert_eq!(self.var, rhs.var, "series in different variables");
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                (0..=k).fold(CoefExpr::zero(), |acc, j| {
                    let (a, b) = (&self.coeffs[j], &rhs.coeffs[k - j]);
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        &acc + &(a * b)
                    }
                })
            })
            .collect();
        TruncSeries::new(self.var.clone(), coeffs)
    }
}

/// Jackson's two q-exponentials.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExpKind {
    /// `e_q(x) = Σ x^n / [n]_q!`
    Small,
    /// `E_q(x) = Σ q^{n(n-1)/2} x^n / [n]_q!`
    Big,
}

/// `1 / [n]_b!`.
pub fn inv_q_factorial(n: u32, base: QBase) -> CoefExpr {
    q_factorial_inv_base(n, base)
}

/// `e_b(x)` truncated at `order`, for an arbitrary base `b`.
pub fn q_exp_series_base(base: QBase, order: u32) -> TruncSeries {
    TruncSeries::new("x", (0..=order).map(|n| inv_q_factorial(n, base)).collect())
}

/// `e_q(x)` or `E_q(x)` truncated at `order`.
pub fn q_exp_series(kind: ExpKind, order: u32) -> TruncSeries {
    let coeffs = (0..=order)
        .map(|n| {
            let c = inv_q_factorial(n, QBase::Q);
            match kind {
                ExpKind::Small => c,
                ExpKind::Big => &c * &CoefExpr::from(q_triangular(n)),
            }
        })
        .collect();
    TruncSeries::new("x", coeffs)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TrigKind {
    Cos,
    Sin,
}

/// `cos_q(x) = Σ (-1)^m x^{2m}/[2m]_q!` and `sin_q(x) = Σ (-1)^m x^{2m+1}/[2m+1]_q!`,
/// truncated at degree `order`. These satisfy `D_q sin_q = cos_q` and
/// `D_q cos_q = -sin_q` term by term.
pub fn q_trig_series(kind: TrigKind, order: u32) -> TruncSeries {
    let parity = match kind {
        TrigKind::Cos => 0,
        TrigKind::Sin => 1,
    };
    let coeffs = (0..=order)
        .map(|n| {
            if n % 2 != parity {
                return CoefExpr::zero();
            }
            let c = inv_q_factorial(n, QBase::Q);
            if (n / 2) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    TruncSeries::new("x", coeffs)
}

/// Partial sum `Σ_{n ≤ order} 1/[n]_q!` of the q-analogue of Euler's number.
pub fn q_euler_number(order: u32) -> CoefExpr {
    (0..=order).fold(CoefExpr::zero(), |acc, n| {
        &acc + &inv_q_factorial(n, QBase::Q)
    })
}

/// `[n]_q` as a coefficient.
pub fn q_int_coef(n: u32) -> CoefExpr {
    CoefExpr::from(q_int_base(n, QBase::Q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianRational;
    use crate::qnum::q_int;

    fn two() -> CoefExpr {
        CoefExpr::from(q_int(2))
    }

    #[test]
    fn small_and_big_exponentials() {
        let e = q_exp_series(ExpKind::Small, 2);
        assert!(e.coeff(0).is_one() && e.coeff(1).is_one());
        assert_eq!(e.coeff(2), &two().inv().unwrap());
        let big = q_exp_series(ExpKind::Big, 2);
        assert_eq!(big.coeff(2), &(&CoefExpr::q() * &two().inv().unwrap()));
    }

    #[test]
    fn small_exponential_at_q_two() {
        let e = q_exp_series(ExpKind::Small, 3);
        let q = GaussianRational::from_integer(2);
        let vals: Vec<_> = e
            .coeffs()
            .iter()
            .map(|c| c.eval(&q, None).unwrap())
            .collect();
        assert_eq!(
            vals,
            vec![
                GaussianRational::from_integer(1),
                GaussianRational::from_integer(1),
                GaussianRational::from_ratio(1, 3),
                GaussianRational::from_ratio(1, 21),
            ]
        );
    }

    #[test]
    fn trig_series() {
        let c = q_trig_series(TrigKind::Cos, 2);
        assert!(c.coeff(1).is_zero());
        assert_eq!(c.coeff(2), &(-&two().inv().unwrap()));
        let s = q_trig_series(TrigKind::Sin, 1);
        assert_eq!(s.coeffs(), &[CoefExpr::zero(), CoefExpr::one()]);
        let dcos = q_trig_series(TrigKind::Cos, 4).q_derivative(QBase::Q);
        assert_eq!(dcos, -&q_trig_series(TrigKind::Sin, 3));
        let dsin = q_trig_series(TrigKind::Sin, 9).q_derivative(QBase::Q);
        assert_eq!(dsin, q_trig_series(TrigKind::Cos, 8));
    }

    #[test]
    fn euler_partial_sums() {
        assert!(q_euler_number(0).is_one());
        let e2 = q_euler_number(2);
        assert_eq!(e2, &CoefExpr::from_integer(2) + &two().inv().unwrap());
        assert_eq!(e2.at_s_one().unwrap(), GaussianRational::from_ratio(5, 2));
    }

    #[test]
    fn product_order_is_minimum() {
        let a = q_exp_series(ExpKind::Small, 5);
        let b = q_exp_series(ExpKind::Small, 3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn monomial_substitution() {
        let e = q_exp_series(ExpKind::Small, 4);
        let g = e.substitute_monomial(&CoefExpr::from_integer(-1), 2, 6);
        assert_eq!(g.order(), 6);
        assert!(g.coeff(1).is_zero());
        assert_eq!(g.coeff(2), &CoefExpr::from_integer(-1));
        assert_eq!(g.coeff(4), &two().inv().unwrap());
    }
}
