//! Multivariate polynomials over [`CoefExpr`] in named variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::CoefExpr;
use crate::error::Result;
use crate::gaussian::GaussianRational;
use num_traits::Zero;

/// Polynomial in an ordered, fixed list of named variables.
///
/// Terms map exponent vectors (one entry per variable) to nonzero
/// coefficients.
#[derive(Clone, Debug)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, CoefExpr>,
}

impl MPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MPoly {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_var_names(vars: Vec<String>) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: CoefExpr) -> Self {
        let mut p = MPoly::zero(vars);
        let n = p.vars.len();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        MPoly::constant(vars, CoefExpr::one())
    }

    /// The polynomial consisting of variable `name` alone.
    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut p = MPoly::zero(vars);
        let mut exps = vec![0; vars.len()];
        exps[p.index_of(name)] = 1;
        p.add_term(exps, CoefExpr::one());
        p
    }

    pub fn monomial(vars: &[&str], exps: Vec<u32>, c: CoefExpr) -> Self {
        let mut p = MPoly::zero(vars);
        p.add_term(exps, c);
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Index of `name`; panics when the variable is not present.
    pub fn index_of(&self, name: &str) -> usize {
        self.var_index(name)
            .unwrap_or_else(|| panic!("variable `{name}` not in {:?}", self.vars))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &CoefExpr)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> CoefExpr {
        self.terms.get(exps).cloned().unwrap_or_else(CoefExpr::zero)
    }

    /// Adds `c · monomial(exps)` in place.
    pub fn add_term(&mut self, exps: Vec<u32>, c: CoefExpr) {
        assert_eq!(exps.len(), self.vars.len(), "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn scale(&self, c: &CoefExpr) -> Self {
        self.map_coeffs(|a| a * c)
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&CoefExpr) -> CoefExpr) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let v = f(c);
                (!v.is_zero()).then(|| (e.clone(), v))
            })
            .collect();
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Rebuilds the polynomial term by term through `f(exps, coeff)`.
    pub fn map_terms(&self, f: impl Fn(&[u32], &CoefExpr) -> Option<(Vec<u32>, CoefExpr)>) -> Self {
        let mut out = MPoly::from_var_names(self.vars.clone());
        for (e, c) in &self.terms {
            if let Some((e2, c2)) = f(e, c) {
                out.add_term(e2, c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MPoly::from_var_names(self.vars.clone());
        acc.add_term(vec![0; self.vars.len()], CoefExpr::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: &str) -> Option<u32> {
        let i = self.index_of(var);
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Keeps the terms whose degree, summed over `over`, is at most `max_deg`.
    pub fn truncate_degree(&self, over: &[&str], max_deg: u32) -> Self {
        let idx: Vec<usize> = over.iter().map(|v| self.index_of(v)).collect();
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| idx.iter().map(|&i| e[i]).sum::<u32>() <= max_deg)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Re-expresses the polynomial over a new variable list. Variables that
    /// occur with nonzero degree must be present in `vars`.
    pub fn embed(&self, vars: &[&str]) -> Self {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = MPoly::zero(vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                match map[i] {
                    Some(j) => ne[j] = k,
                    None => assert!(
                        k == 0,
                        "variable `{}` is not in the target list",
                        self.vars[i]
                    ),
                }
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    pub fn rename_var(&self, old: &str, new: &str) -> Self {
        let i = self.index_of(old);
        let mut out = self.clone();
        out.vars[i] = new.to_string();
        out
    }

    /// Substitutes `var := image`. The result lives in `image`'s variable
    /// list, which must contain every other variable of `self` that occurs.
    pub fn compose(&self, var: &str, image: &MPoly) -> Self {
        let vi = self.index_of(var);
        let target: Vec<&str> = image.vars.iter().map(String::as_str).collect();
        let mut powers: Vec<MPoly> = vec![MPoly::one(&target)];
        let mut out = MPoly::zero(&target);
        for (e, c) in &self.terms {
            while powers.len() <= e[vi] as usize {
                let next = powers.last().unwrap() * image;
                powers.push(next);
            }
            let mut rest = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                if i == vi || k == 0 {
                    continue;
                }
                let j = target
                    .iter()
                    .position(|w| *w == self.vars[i])
                    .unwrap_or_else(|| {
                        panic!("variable `{}` missing after substitution", self.vars[i])
                    });
                rest[j] += k;
            }
            let term = MPoly::monomial(&target, rest, c.clone());
            out = &out + &(&term * &powers[e[vi] as usize]);
        }
        out
    }

    /// Exact evaluation at a point (one value per variable) for a given `s`.
    pub fn eval_s(
        &self,
        s: &GaussianRational,
        point: &[GaussianRational],
    ) -> Result<GaussianRational> {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut v = c.eval_s(s)?;
            for (x, &k) in point.iter().zip(e) {
                v = &v * &x.pow(k);
            }
            acc += &v;
        }
        Ok(acc)
    }

    /// Evaluates at a point whose coordinates are themselves coefficients.
    pub fn eval_coef(&self, point: &[CoefExpr]) -> CoefExpr {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = CoefExpr::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    v = &v * &x.pow(k);
                }
            }
            acc = &acc + &v;
        }
        acc
    }

    /// Coefficients at `s = 1`, i.e. the classical limit `q → 1`.
    pub fn at_s_one(&self) -> Result<Self> {
        let mut out = MPoly::from_var_names(self.vars.clone());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), CoefExpr::constant(c.at_s_one()?));
        }
        Ok(out)
    }

    /// Realizes `q ↦ 1/q` on every coefficient.
    pub fn substitute_inverse_q(&self) -> Self {
        self.map_coeffs(CoefExpr::substitute_inverse)
    }

    /// `true` when every coefficient is free of `i`.
    pub fn is_real(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.num().is_real() && c.den().is_real())
    }

    /// Constant term (all exponents zero).
    pub fn constant_term(&self) -> CoefExpr {
        self.coeff(&vec![0; self.vars.len()])
    }

    fn assert_same_vars(&self, rhs: &MPoly) {
        assert_eq!(
            self.vars, rhs.vars,
            "polynomials over different variable lists"
        );
    }
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(other.terms.iter())
                .all(|((e1, c1), (e2, c2))| e1 == e2 && c1 == c2)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c}]")?;
            for (v, &k) in self.vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.assert_same_vars(rhs);
        let mut out = MPoly::from_var_names(self.vars.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XY: &[&str] = &["x", "y"];

    #[test]
    fn binomial_square() {
        let x = MPoly::var(XY, "x");
        let y = MPoly::var(XY, "y");
        let sum = &x + &y;
        let sq = sum.pow(2);
        assert_eq!(sq.num_terms(), 3);
        assert_eq!(sq.coeff(&[1, 1]), CoefExpr::from_integer(2));
        assert!((&sq - &sq).is_zero());
    }

    #[test]
    fn composition() {
        // p(x) = x^2 + 1 with x := 2y
        let mut p = MPoly::zero(&["x"]);
        p.add_term(vec![2], CoefExpr::one());
        p.add_term(vec![0], CoefExpr::one());
        let image = MPoly::var(&["y"], "y").scale(&CoefExpr::from_integer(2));
        let r = p.compose("x", &image);
        assert_eq!(r.vars(), &["y".to_string()]);
        assert_eq!(r.coeff(&[2]), CoefExpr::from_integer(4));
        assert_eq!(r.coeff(&[0]), CoefExpr::one());
    }

    #[test]
    fn embedding_and_truncation() {
        let x = MPoly::var(&["x"], "x");
        let e = x.embed(&["t", "x"]);
        assert_eq!(e.coeff(&[0, 1]), CoefExpr::one());
        let p = (&MPoly::var(XY, "x") + &MPoly::one(XY)).pow(4);
        assert_eq!(p.truncate_degree(&["x"], 2).num_terms(), 3);
    }

    #[test]
    fn evaluation() {
        let p = (&MPoly::var(XY, "x") + &MPoly::var(XY, "y").scale(&CoefExpr::q())).pow(2);
        let v = p
            .eval_s(
                &GaussianRational::from_integer(2),
                &[
                    GaussianRational::from_integer(1),
                    GaussianRational::from_integer(1),
                ],
            )
            .unwrap();
        assert_eq!(v, GaussianRational::from_integer(25));
    }
}
