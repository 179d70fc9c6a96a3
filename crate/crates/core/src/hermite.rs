//! Classical Hermite polynomials and the q-Hermite polynomials `H_n(x;q)`
//! defined by `e_q(-t²) e_q([2]_q t x) = Σ H_n(x;q) t^n/[n]_q!`.

use std::sync::{OnceLock, RwLock};

use crate::coeff::CoefExpr;
use crate::laurent::LaurentPoly;
use crate::mpoly::MPoly;
use crate::ops::scale_substitute;
use crate::qnum::{
    gauss_binomial, q_factorial, q_factorial_inv_base, q_int, q_int_inv_base, QBase,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum HermiteKind {
    /// `H_n(x)`, the physicists' Hermite polynomials.
    Classical,
    /// `H_n(x;q)`.
    Q,
    /// `H_n(x;1/q)`.
    InverseQ,
}

impl HermiteKind {
    fn build(self, n: u32) -> MPoly {
        match self {
            HermiteKind::Classical => classical_by_recurrence(n),
            HermiteKind::Q => q_hermite_closed(n),
            HermiteKind::InverseQ => q_hermite_closed(n).substitute_inverse_q(),
        }
    }
}

/// Append-only cache of one Hermite family, indexed by degree.
#[derive(Debug)]
pub struct HermiteFamily {
    kind: HermiteKind,
    cache: RwLock<Vec<MPoly>>,
}

impl HermiteFamily {
    pub fn new(kind: HermiteKind) -> Self {
        HermiteFamily {
            kind,
            cache: RwLock::new(Vec::new()),
        }
    }

    pub fn kind(&self) -> HermiteKind {
        self.kind
    }

    /// The degree-`n` member, in the variable `x`.
    pub fn get(&self, n: u32) -> MPoly {
        if let Some(p) = self.cache.read().unwrap().get(n as usize) {
            return p.clone();
        }
        let mut cache = self.cache.write().unwrap();
        while cache.len() <= n as usize {
            let next = self.kind.build(cache.len() as u32);
            cache.push(next);
        }
        cache[n as usize].clone()
    }
}

fn family(kind: HermiteKind) -> &'static HermiteFamily {
    static CLASSICAL: OnceLock<HermiteFamily> = OnceLock::new();
    static Q: OnceLock<HermiteFamily> = OnceLock::new();
    static INVERSE_Q: OnceLock<HermiteFamily> = OnceLock::new();
    let cell = match kind {
        HermiteKind::Classical => &CLASSICAL,
        HermiteKind::Q => &Q,
        HermiteKind::InverseQ => &INVERSE_Q,
    };
    cell.get_or_init(|| HermiteFamily::new(kind))
}

fn classical_by_recurrence(n: u32) -> MPoly {
    let x = MPoly::var(&["x"], "x");
    let two = CoefExpr::from_integer(2);
    let mut prev = MPoly::one(&["x"]);
    if n == 0 {
        return prev;
    }
    let mut cur = x.scale(&two);
    for k in 1..n {
        let next = &(&x * &cur).scale(&two) - &prev.scale(&CoefExpr::from_integer(2 * k as i64));
        prev = cur;
        cur = next;
    }
    cur
}

/// `[n]_q! / ([k]_q! [n-2k]_q!)` as an honest polynomial: the Gaussian
/// binomial `[n 2k]` times `[k+1]_q … [2k]_q`.
fn closed_form_weight(n: u32, k: u32) -> LaurentPoly {
    let tail = (k + 1..=2 * k).fold(LaurentPoly::one(), |acc, j| &acc * &q_int(j));
    &gauss_binomial(n, 2 * k).expect("2k <= n") * &tail
}

fn q_hermite_closed(n: u32) -> MPoly {
    let two = q_int(2);
    let mut p = MPoly::zero(&["x"]);
    for k in 0..=n / 2 {
        let mut c = &closed_form_weight(n, k) * &two.pow(n - 2 * k);
        if k % 2 == 1 {
            c = -c;
        }
        p.add_term(vec![n - 2 * k], CoefExpr::from(c));
    }
    p
}

/// Classical `H_n(x)` from `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite_classical(n: u32) -> MPoly {
    family(HermiteKind::Classical).get(n)
}

/// `H_n(x;q) = [n]_q! Σ_{k ≤ n/2} (-1)^k [2]_q^{n-2k} x^{n-2k} / ([k]_q! [n-2k]_q!)`.
pub fn q_hermite(n: u32) -> MPoly {
    family(HermiteKind::Q).get(n)
}

/// `H_n(x;1/q)`.
pub fn q_hermite_inverse(n: u32) -> MPoly {
    family(HermiteKind::InverseQ).get(n)
}

/// `H_k(qx;1/q)`.
pub fn q_hermite_dual(k: u32) -> MPoly {
    scale_substitute(&q_hermite_inverse(k), "x", 2)
}

/// `H_n(0;q)`: `(-1)^m [2m]_q!/[m]_q!` for `n = 2m`, zero for odd `n`.
pub fn q_hermite_special_values(n: u32) -> CoefExpr {
    q_hermite(n).constant_term()
}

/// `(-1)^m [2m]_q!/[m]_q!` and `0`, computed directly from the factorials.
pub fn q_hermite_special_value_formula(n: u32) -> CoefExpr {
    if n % 2 == 1 {
        return CoefExpr::zero();
    }
    let m = n / 2;
    let v = CoefExpr::from(q_factorial(n)) * q_factorial_inv_base(m, QBase::Q);
    if m % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Both sides of the q-Euler expansion as partial sums through order `n`:
/// `Σ_{k ≤ n} H_k(1/[2]_q;q)/[k]_q!` and the terms of `e_q(-t²)e_q(t)` at
/// `t = 1` with t-degree at most `n`, i.e. `Σ_{2a+b ≤ n} (-1)^a/([a]_q![b]_q!)`.
pub fn q_euler_partial_sums(n: u32) -> (CoefExpr, CoefExpr) {
    let point = [q_int_inv_base(2, QBase::Q)];
    let inv_fact: Vec<CoefExpr> = (0..=n).map(|k| q_factorial_inv_base(k, QBase::Q)).collect();
    let hermite_side = (0..=n).fold(CoefExpr::zero(), |acc, k| {
        &acc + &(&q_hermite(k).eval_coef(&point) * &inv_fact[k as usize])
    });
    // prefix[m] = Σ_{b ≤ m} 1/[b]_q!
    let mut prefix = vec![inv_fact[0].clone()];
    for b in 1..=n as usize {
        let next = &prefix[b - 1] + &inv_fact[b];
        prefix.push(next);
    }
    let mut product_side = CoefExpr::zero();
    for a in 0..=n / 2 {
        let term = &inv_fact[a as usize] * &prefix[(n - 2 * a) as usize];
        product_side = if a % 2 == 1 {
            &product_side - &term
        } else {
            &product_side + &term
        };
    }
    (hermite_side, product_side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianRational;
    use crate::ops::q_derivative;
    use crate::series::{q_exp_series, ExpKind};

    fn qi(n: u32) -> CoefExpr {
        CoefExpr::from(q_int(n))
    }

    fn x_poly(coeffs: &[(u32, CoefExpr)]) -> MPoly {
        let mut p = MPoly::zero(&["x"]);
        for (d, c) in coeffs {
            p.add_term(vec![*d], c.clone());
        }
        p
    }

    #[test]
    fn classical_values() {
        assert_eq!(hermite_classical(0), MPoly::one(&["x"]));
        assert_eq!(
            hermite_classical(1),
            x_poly(&[(1, CoefExpr::from_integer(2))])
        );
        assert_eq!(
            hermite_classical(3),
            x_poly(&[
                (3, CoefExpr::from_integer(8)),
                (1, CoefExpr::from_integer(-12))
            ])
        );
        // H_2(iξ/2) = -ξ² - 2
        let image = MPoly::var(&["xi"], "xi")
            .scale(&CoefExpr::constant(GaussianRational::from_ratio(1, 2)))
            .scale(&CoefExpr::i());
        let h2 = hermite_classical(2).compose("x", &image);
        let mut expected = MPoly::zero(&["xi"]);
        expected.add_term(vec![2], CoefExpr::from_integer(-1));
        expected.add_term(vec![0], CoefExpr::from_integer(-2));
        assert_eq!(h2, expected);
    }

    #[test]
    fn q_hermite_low_degrees() {
        let two = qi(2);
        assert_eq!(q_hermite(2), x_poly(&[(2, two.pow(2)), (0, -two.clone())]));
        assert_eq!(
            q_hermite(3),
            x_poly(&[(3, two.pow(3)), (1, -(&two.pow(2) * &qi(3)))])
        );
        let q2_two = CoefExpr::from(crate::qnum::q_int_base(2, QBase::Q_SQUARED));
        assert_eq!(q_hermite(4).constant_term(), &(&two * &qi(3)) * &q2_two);
    }

    #[test]
    fn degree_and_leading_coefficient() {
        for n in 0..=10 {
            let h = q_hermite(n);
            assert_eq!(h.total_degree(), Some(n));
            assert_eq!(h.coeff(&[n]), qi(2).pow(n));
            assert_eq!(
                hermite_classical(n).coeff(&[n]),
                CoefExpr::from_integer(1 << n)
            );
            assert!(h.terms().all(|(_, c)| c.to_laurent().is_some()));
        }
    }

    #[test]
    fn dual_family() {
        assert_eq!(q_hermite_dual(0), MPoly::one(&["x"]));
        assert_eq!(q_hermite_dual(1), x_poly(&[(1, qi(2))]));
        let inv_two = qi(2).substitute_inverse();
        assert_eq!(
            q_hermite_dual(2),
            x_poly(&[(2, &inv_two.pow(2) * &CoefExpr::q_pow(2)), (0, -inv_two)])
        );
    }

    #[test]
    fn special_values() {
        assert_eq!(q_hermite_special_values(2), -qi(2));
        assert!(q_hermite_special_values(3).is_zero());
        for n in 0..=12 {
            assert_eq!(
                q_hermite_special_values(n),
                q_hermite_special_value_formula(n),
                "n={n}"
            );
        }
    }

    #[test]
    fn derivative_recurrence() {
        for n in 1..=10 {
            let lhs = q_derivative(&q_hermite(n), "x", QBase::Q);
            let rhs = q_hermite(n - 1).scale(&(&qi(2) * &qi(n)));
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn half_power_recurrence() {
        let x = MPoly::var(&["x"], "x");
        for n in 1..10u32 {
            let prev = q_hermite(n - 1);
            let rhs = &(&(&x * &q_hermite(n)).scale(&qi(2))
                - &scale_substitute(&prev, "x", 2).scale(&qi(n)))
                - &scale_substitute(&prev, "x", 1)
                    .scale(&(&qi(n) * &CoefExpr::from(LaurentPoly::s_pow(n as i64 + 1))));
            assert_eq!(q_hermite(n + 1), rhs, "n={}", n + 1);
        }
    }

    #[test]
    fn parity() {
        let minus_x = MPoly::var(&["x"], "x").scale(&CoefExpr::from_integer(-1));
        for n in 0..=10 {
            let sign = if n % 2 == 1 { -1 } else { 1 };
            let h = q_hermite(n);
            assert_eq!(
                h.compose("x", &minus_x),
                h.scale(&CoefExpr::from_integer(sign))
            );
        }
    }

    #[test]
    fn classical_limit() {
        for n in 0..=10 {
            assert_eq!(
                q_hermite(n).at_s_one().unwrap(),
                hermite_classical(n),
                "n={n}"
            );
        }
    }

    #[test]
    fn generating_function() {
        let order = 10u32;
        let vars = ["x", "t"];
        let small = q_exp_series(ExpKind::Small, order);
        let mut left = MPoly::zero(&vars);
        let mut right = MPoly::zero(&vars);
        for k in 0..=order {
            let c = small.coeff(k).clone();
            if 2 * k <= order {
                let sign = if k % 2 == 1 {
                    -CoefExpr::one()
                } else {
                    CoefExpr::one()
                };
                left.add_term(vec![0, 2 * k], &sign * &c);
            }
            right.add_term(vec![k, k], &c * &qi(2).pow(k));
        }
        let product = (&left * &right).truncate_degree(&["t"], order);
        for n in 0..=order {
            let mut coeff = MPoly::zero(&["x"]);
            for (e, c) in product.terms() {
                if e[1] == n {
                    coeff.add_term(vec![e[0]], c.clone());
                }
            }
            let expected = q_hermite(n).scale(&CoefExpr::from(q_factorial(n)).inv().unwrap());
            assert_eq!(coeff, expected, "t^{n}");
        }
    }

    #[test]
    fn q_euler_expansion() {
        for n in [0, 1, 2, 5, 20] {
            let (h, p) = q_euler_partial_sums(n);
            assert_eq!(h, p, "order {n}");
        }
        let (_, p) = q_euler_partial_sums(2);
        // 1 + 1 + 1/[2] - 1
        assert_eq!(p, &CoefExpr::one() + &qi(2).inv().unwrap());
    }

    #[test]
    fn family_cache_is_consistent() {
        let fam = HermiteFamily::new(HermiteKind::Q);
        let h5 = fam.get(5);
        assert_eq!(fam.get(3), q_hermite(3));
        assert_eq!(h5, q_hermite(5));
        assert_eq!(fam.kind(), HermiteKind::Q);
    }
}
