//! q-difference operators on polynomials, q-binomials and Jackson
//! antidifferentiation.
//!
//! All operators act through the monomial rule `x^n ↦ [n]_b x^{n-1}`,
//! which agrees with the difference quotient `(f(bx) - f(x))/((b-1)x)` on
//! polynomials and stays defined at `x = 0`.

use crate::coeff::CoefExpr;
use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::qnum::{gauss_binomial, q_int_base, q_int_inv_base, q_triangular, QBase};

/// `D_b` with respect to `var`, for base `b = q` or `b = 1/q`.
pub fn q_derivative(p: &MPoly, var: &str, base: QBase) -> MPoly {
    let i = p.index_of(var);
    p.map_terms(|e, c| {
        if e[i] == 0 {
            return None;
        }
        let mut e2 = e.to_vec();
        e2[i] -= 1;
        Some((e2, c * &CoefExpr::from(q_int_base(e[i], base))))
    })
}

/// Substitutes `var ↦ s^k · var`: the coefficient of a degree-`d` monomial
/// gains `s^{d·k}`. With `k = 2` this is `x ↦ qx`, with `k = 1` it is `x ↦ √q x`.
pub fn scale_substitute(p: &MPoly, var: &str, s_power: i64) -> MPoly {
    let i = p.index_of(var);
    p.map_terms(|e, c| Some((e.to_vec(), c.shift(e[i] as i64 * s_power))))
}

/// `(a + b)_q^n = (a + b)(a + qb)…(a + q^{n-1}b)` by repeated multiplication.
pub fn q_binomial_product(a: &MPoly, b: &MPoly, n: u32) -> MPoly {
    let vars: Vec<&str> = a.vars().iter().map(String::as_str).collect();
    let mut acc = MPoly::one(&vars);
    for k in 0..n {
        let factor = a + &b.scale(&CoefExpr::q_pow(k as i64));
        acc = &acc * &factor;
    }
    acc
}

/// `(a + b)_q^n = Σ_k [n k]_q q^{k(k-1)/2} a^{n-k} b^k`.
pub fn q_binomial_closed(a: &MPoly, b: &MPoly, n: u32) -> MPoly {
    let vars: Vec<&str> = a.vars().iter().map(String::as_str).collect();
    let mut a_pows = vec![MPoly::one(&vars)];
    let mut b_pows = vec![MPoly::one(&vars)];
    for k in 1..=n as usize {
        a_pows.push(&a_pows[k - 1] * a);
        b_pows.push(&b_pows[k - 1] * b);
    }
    let mut out = MPoly::zero(&vars);
    for k in 0..=n {
        let c = &gauss_binomial(n, k).expect("k <= n") * &q_triangular(k);
        let term = (&a_pows[(n - k) as usize] * &b_pows[k as usize]).scale(&CoefExpr::from(c));
        out = &out + &term;
    }
    out
}

/// `(a + β b)_q^n` in the variables `[a_var, b_var]`.
pub fn q_binomial_power(a_var: &str, b_coef: &CoefExpr, b_var: &str, n: u32) -> MPoly {
    assert_ne!(a_var, b_var, "q-binomial needs two distinct variables");
    let vars = [a_var, b_var];
    let a = MPoly::var(&vars, a_var);
    let b = MPoly::var(&vars, b_var).scale(b_coef);
    q_binomial_product(&a, &b, n)
}

fn half() -> CoefExpr {
    CoefExpr::from_ratio(1, 2)
}

/// `½(D_q^z + i D_{1/q}^w)`; annihilates double q-analytic polynomials.
pub fn dbar_operator(p: &MPoly) -> MPoly {
    let dz = q_derivative(p, "z", QBase::Q);
    let dw = q_derivative(p, "w", QBase::INV_Q).scale(&CoefExpr::i());
    (&dz + &dw).scale(&half())
}

/// `½(D_q^z - i D_{1/q}^w)`.
pub fn d_operator(p: &MPoly) -> MPoly {
    let dz = q_derivative(p, "z", QBase::Q);
    let dw = q_derivative(p, "w", QBase::INV_Q).scale(&CoefExpr::i());
    (&dz - &dw).scale(&half())
}

/// `Δ_q^{(m)} = (D_q^z)² + q^m (D_{1/q}^w)²`.
pub fn q_laplacian(p: &MPoly, level: u32) -> MPoly {
    let zz = q_derivative(&q_derivative(p, "z", QBase::Q), "z", QBase::Q);
    let ww = q_derivative(&q_derivative(p, "w", QBase::INV_Q), "w", QBase::INV_Q);
    &zz + &ww.scale(&CoefExpr::q_pow(level as i64))
}

/// `(Δ_q)_q^m = Δ_q^{(0)} Δ_q^{(1)} … Δ_q^{(m-1)}`, applying the highest level first.
pub fn q_laplacian_chain(p: &MPoly, m: u32) -> MPoly {
    (0..m)
        .rev()
        .fold(p.clone(), |acc, level| q_laplacian(&acc, level))
}

/// Inverse of `D_q` on polynomials: `x^n ↦ x^{n+1}/[n+1]_q`, zero constant.
pub fn jackson_antiderivative(p: &MPoly, var: &str) -> MPoly {
    let i = p.index_of(var);
    p.map_terms(|e, c| {
        let mut e2 = e.to_vec();
        e2[i] += 1;
        let k = q_int_inv_base(e2[i], QBase::Q);
        Some((e2, c * &k))
    })
}

/// A real function the numeric Jackson sum can be applied to.
pub trait RealFunction {
    fn eval(&self, x: f64) -> f64;
    /// An upper bound for `|f|` on `[-radius, radius]`.
    fn sup_abs(&self, radius: f64) -> f64;
}

/// Univariate real polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPoly(pub Vec<f64>);

impl RealPoly {
    /// Evaluates the coefficients of a univariate exact polynomial at `q`
    /// (with `s = √q`). Imaginary parts are discarded.
    pub fn from_mpoly(p: &MPoly, q_value: f64) -> Self {
        assert_eq!(p.vars().len(), 1, "RealPoly needs a univariate polynomial");
        let s = q_value.sqrt();
        let deg = p.total_degree().unwrap_or(0) as usize;
        let mut c = vec![0.0; deg + 1];
        for (e, coef) in p.terms() {
            c[e[0] as usize] += coef.eval_f64(s).0;
        }
        RealPoly(c)
    }
}

impl RealFunction for RealPoly {
    fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn sup_abs(&self, radius: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * radius.powi(k as i32))
            .sum()
    }
}

/// Truncated Jackson sum and a bound on the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacksonSum {
    pub value: f64,
    pub tail_bound: f64,
}

/// `∫_a^b g d_q x ≈ (1-q) b Σ_{j<J} q^j g(q^j b) - (1-q) a Σ_{j<J} q^j g(q^j a)`.
///
/// The tail bound is `(|a| + |b|) q^J · sup|g|` over `[0, q^J max(|a|,|b|)]`.
pub fn jackson_integral_numeric(
    g: &dyn RealFunction,
    a: f64,
    b: f64,
    q: f64,
    terms: u32,
) -> Result<JacksonSum> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::OutOfRange(format!(
            "Jackson sum needs 0 < q < 1, got {q}"
        )));
    }
    let partial = |end: f64| {
        let mut acc = 0.0;
        let mut qj = 1.0;
        for _ in 0..terms {
            acc += qj * g.eval(qj * end);
            qj *= q;
        }
        (1.0 - q) * end * acc
    };
    let value = partial(b) - partial(a);
    let qj = q.powi(terms as i32);
    let radius = qj * a.abs().max(b.abs());
    let tail_bound = (a.abs() + b.abs()) * qj * g.sup_abs(radius);
    Ok(JacksonSum { value, tail_bound })
}
