//! The coefficient field: fractions of Laurent polynomials in `s`.
//!
//! Denominators are kept factored. Every factor is normalized to lowest
//! exponent zero and leading coefficient one; units and powers of `s` are
//! folded into the numerator. Cyclotomic factors `Φ_d(s)` are split out on
//! inversion, since q-integers `[n]_q = (s^{2n} - 1)/(s² - 1)` are products
//! of them. Numerators are divided by shared factors after every operation,
//! so sums of terms like `1/[k]_q!` keep their common denominator small.
//!
//! Equality is decided by cross-multiplication over the least common
//! multiple of the factored denominators and never depends on how far a
//! value has been reduced.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::laurent::LaurentPoly;

/// Largest `d` for which `Φ_d(s)` is recognized as a denominator factor.
const MAX_CYCLOTOMIC: u32 = 256;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Factor {
    Cyclotomic(u32),
    Other(Arc<LaurentPoly>),
}

impl Factor {
    fn poly(&self) -> Arc<LaurentPoly> {
        match self {
            Factor::Cyclotomic(d) => cyclotomic(*d),
            Factor::Other(p) => p.clone(),
        }
    }

    /// `true` when `p` is certainly not divisible by this factor.
    fn rules_out(&self, p: &LaurentPoly) -> bool {
        match self {
            Factor::Cyclotomic(d) => !maybe_root_of_unity(p, *d),
            Factor::Other(f) => p.span() < f.span(),
        }
    }
}

fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `Φ_d(s)`, cached.
fn cyclotomic(d: u32) -> Arc<LaurentPoly> {
    static CACHE: OnceLock<Mutex<Vec<Arc<LaurentPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some(p) = guard.get(d as usize - 1) {
            return p.clone();
        }
    }
    let mut built = Vec::new();
    {
        let guard = cache.lock().unwrap();
        built.extend(guard.iter().cloned());
    }
    for n in built.len() as u32 + 1..=d {
        // s^n - 1 divided by Φ_k for every proper divisor k
        let mut p = &LaurentPoly::s_pow(n as i64) - &LaurentPoly::one();
        for k in 1..n {
            if n % k == 0 {
                p = p
                    .div_exact(&built[k as usize - 1])
                    .expect("cyclotomic divisor");
            }
        }
        built.push(Arc::new(p));
    }
    let mut guard = cache.lock().unwrap();
    if guard.len() < built.len() {
        *guard = built;
    }
    guard[d as usize - 1].clone()
}

/// Floating-point screen: could `p` vanish at a primitive `d`-th root of unity?
fn maybe_root_of_unity(p: &LaurentPoly, d: u32) -> bool {
    let scale = p.abs_sum_f64();
    if !scale.is_finite() {
        return true;
    }
    let angle = std::f64::consts::TAU / d as f64;
    let (re, im) = p.eval_complex(angle.cos(), angle.sin());
    let mag = re.hypot(im);
    mag.is_nan() || mag <= 1e-7 * scale
}

/// Factors a nonzero Laurent polynomial as `unit · factors`, where `unit`
/// is a monomial returned as the first component.
fn factorize(p: &LaurentPoly) -> (LaurentPoly, Vec<(Factor, u32)>) {
    let (lead, shift, mut rest) = p.normalize().expect("factorize of zero");
    let unit = LaurentPoly::monomial(lead, shift);
    let mut factors: Vec<(Factor, u32)> = Vec::new();
    let mut d = 1;
    while rest.span() > 0 && d <= MAX_CYCLOTOMIC {
        if euler_phi(d) as usize <= rest.span() {
            let phi = cyclotomic(d);
            let mut e = 0;
            while rest.span() >= phi.span() && maybe_root_of_unity(&rest, d) {
                match rest.div_exact(&phi) {
                    Some(q) => {
                        rest = q;
                        e += 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                factors.push((Factor::Cyclotomic(d), e));
            }
        }
        d += 1;
    }
    if rest.span() > 0 {
        factors.push((Factor::Other(Arc::new(rest)), 1));
    }
    factors.sort();
    (unit, factors)
}

fn merge_add(a: &[(Factor, u32)], b: &[(Factor, u32)]) -> Vec<(Factor, u32)> {
    merge_with(a, b, |x, y| x + y)
}

fn merge_with(
    a: &[(Factor, u32)],
    b: &[(Factor, u32)],
    f: impl Fn(u32, u32) -> u32,
) -> Vec<(Factor, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0.clone(), f(a[i].1, 0)));
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0.clone(), f(0, b[j].1)));
            j += 1;
        } else {
            out.push((a[i].0.clone(), f(a[i].1, b[j].1)));
            i += 1;
            j += 1;
        }
    }
    out.retain(|(_, e)| *e > 0);
    out
}

/// Product of `f^(lcm_e - own_e)` over the lcm.
fn cofactor(own: &[(Factor, u32)], lcm: &[(Factor, u32)]) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for (f, e) in lcm {
        let mine = own
            .iter()
            .find(|(g, _)| g == f)
            .map(|(_, k)| *k)
            .unwrap_or(0);
        if *e > mine {
            acc = &acc * &f.poly().pow(e - mine);
        }
    }
    acc
}

fn expand(factors: &[(Factor, u32)]) -> LaurentPoly {
    factors
        .iter()
        .fold(LaurentPoly::one(), |acc, (f, e)| &acc * &f.poly().pow(*e))
}

/// Element of `Frac(Q(i)[s, s⁻¹])`, with `q = s²`.
#[derive(Clone, Debug)]
pub struct CoefExpr {
    num: LaurentPoly,
    den: Vec<(Factor, u32)>,
}

impl CoefExpr {
    pub fn zero() -> Self {
        CoefExpr::from_laurent(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        CoefExpr::from_laurent(LaurentPoly::one())
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        CoefExpr {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        CoefExpr::from_laurent(LaurentPoly::constant(c))
    }

    pub fn from_integer(n: i64) -> Self {
        CoefExpr::constant(GaussianRational::from_integer(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        CoefExpr::constant(GaussianRational::from_ratio(p, q))
    }

    pub fn i() -> Self {
        CoefExpr::constant(GaussianRational::i())
    }

    /// `s = √q`.
    pub fn sqrt_q() -> Self {
        CoefExpr::from_laurent(LaurentPoly::s_pow(1))
    }

    pub fn q() -> Self {
        CoefExpr::from_laurent(LaurentPoly::q_pow(1))
    }

    /// `q^e` for any integer `e`.
    pub fn q_pow(e: i64) -> Self {
        CoefExpr::from_laurent(LaurentPoly::q_pow(e))
    }

    /// `num / Π Φ_d(s)^e` for the given `(d, e)` pairs.
    pub(crate) fn over_cyclotomics(num: LaurentPoly, factors: &[(u32, u32)]) -> Self {
        let mut den: Vec<(Factor, u32)> = Vec::new();
        for &(d, e) in factors {
            assert!(d >= 1, "cyclotomic index starts at 1");
            if e == 0 {
                continue;
            }
            if d > MAX_CYCLOTOMIC {
                let poly = cyclotomic(d);
                for _ in 0..e {
                    den.push((Factor::Other(poly.clone()), 1));
                }
                continue;
            }
            match den.iter_mut().find(|(f, _)| *f == Factor::Cyclotomic(d)) {
                Some((_, k)) => *k += e,
                None => den.push((Factor::Cyclotomic(d), e)),
            }
        }
        den.sort();
        let mut merged: Vec<(Factor, u32)> = Vec::new();
        for (f, e) in den {
            match merged.last_mut() {
                Some((g, k)) if *g == f => *k += e,
                _ => merged.push((f, e)),
            }
        }
        CoefExpr::reduced(num, merged)
    }

    /// `num / den`.
    pub fn from_parts(num: LaurentPoly, den: &LaurentPoly) -> Result<Self> {
        let inv = CoefExpr::from_laurent(den.clone()).inv()?;
        Ok(&CoefExpr::from_laurent(num) * &inv)
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    /// The denominator multiplied out.
    pub fn den(&self) -> LaurentPoly {
        expand(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// Lowers to a Laurent polynomial when the denominator divides out.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        if self.den.is_empty() {
            Some(self.num.clone())
        } else {
            self.num.div_exact(&self.den())
        }
    }

    /// The value if `s` does not occur.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        self.to_laurent()?.as_constant()
    }

    fn reduced(mut num: LaurentPoly, mut den: Vec<(Factor, u32)>) -> Self {
        if num.is_zero() {
            return CoefExpr::zero();
        }
        for (f, e) in den.iter_mut() {
            if f.rules_out(&num) {
                continue;
            }
            let poly = f.poly();
            while *e > 0 && num.span() >= poly.span() {
                match num.div_exact(&poly) {
                    Some(q) => {
                        num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        den.retain(|(_, e)| *e > 0);
        CoefExpr { num, den }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (unit, factors) = factorize(&self.num);
        let unit_inv = match unit.as_monomial() {
            Some((e, c)) => LaurentPoly::monomial(c.inv()?, -e),
            None => unreachable!("unit is a monomial"),
        };
        Ok(CoefExpr::reduced(&expand(&self.den) * &unit_inv, factors))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = CoefExpr::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            Ok(self.inv()?.pow(n.unsigned_abs() as u32))
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        CoefExpr::reduced(self.num.scale(c), self.den.clone())
    }

    /// Multiplies by `s^k`.
    pub fn shift(&self, k: i64) -> Self {
        CoefExpr {
            num: self.num.shift(k),
            den: self.den.clone(),
        }
    }

    /// `s ↦ s⁻¹` on numerator and denominator: realizes `q ↦ 1/q`.
    pub fn substitute_inverse(&self) -> Self {
        let mut num = self.num.substitute_inverse();
        let mut den = Vec::with_capacity(self.den.len());
        for (f, e) in &self.den {
            let flipped = f.poly().substitute_inverse();
            let (lead, shift, normal) = flipped.normalize().expect("nonzero factor");
            // 1/f(1/s)^e = (lead · s^shift)^-e / normal^e
            let unit_inv = LaurentPoly::monomial(lead.inv().expect("nonzero"), -shift);
            num = &num * &unit_inv.pow(*e);
            let g = match f {
                Factor::Cyclotomic(d) => {
                    debug_assert_eq!(&*cyclotomic(*d), &normal);
                    Factor::Cyclotomic(*d)
                }
                Factor::Other(_) => Factor::Other(Arc::new(normal)),
            };
            den.push((g, *e));
        }
        den.sort();
        CoefExpr::reduced(num, den)
    }

    /// `s ↦ s^k` for nonzero `k` (e.g. `k = 2` maps `q` to `q²`).
    pub fn substitute_power(&self, k: i64) -> Self {
        let num = CoefExpr::from_laurent(self.num.substitute_power(k));
        if self.den.is_empty() {
            return num;
        }
        let den = CoefExpr::from_laurent(self.den().substitute_power(k));
        &num * &den.inv().expect("nonzero denominator")
    }

    /// Exact evaluation. `s_value` must be supplied when odd powers of `s`
    /// appear; otherwise `q_value` suffices.
    pub fn eval(
        &self,
        q_value: &GaussianRational,
        s_value: Option<&GaussianRational>,
    ) -> Result<GaussianRational> {
        let den = self.den();
        let (n, d) = match s_value {
            Some(s) => {
                if &(s * s) != q_value {
                    return Err(Error::InvalidArgument(
                        "sqrt(q) value does not square to q".into(),
                    ));
                }
                (self.num.eval(s), den.eval(s))
            }
            None => {
                if !self.num.is_even() || !den.is_even() {
                    return Err(Error::NeedsSquareRoot);
                }
                (self.num.eval_q(q_value), den.eval_q(q_value))
            }
        };
        let (n, d) = match (n, d) {
            (Some(n), Some(d)) => (n, d),
            _ => return Err(Error::Pole),
        };
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(&n * &d.inv()?)
    }

    /// Exact evaluation at a given `s`.
    pub fn eval_s(&self, s: &GaussianRational) -> Result<GaussianRational> {
        let n = self.num.eval(s).ok_or(Error::Pole)?;
        let mut d = GaussianRational::one();
        for (f, e) in &self.den {
            let v = f.poly().eval(s).ok_or(Error::Pole)?;
            d = &d * &v.pow(*e);
        }
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(&n * &d.inv()?)
    }

    /// The classical limit `q → 1` (`s = 1`).
    pub fn at_s_one(&self) -> Result<GaussianRational> {
        self.eval_s(&GaussianRational::one())
    }

    /// Floating-point value at a real `s`, as `(re, im)`.
    pub fn eval_f64(&self, s: f64) -> (f64, f64) {
        let (nr, ni) = self.num.eval_complex(s, 0.0);
        let (mut dr, mut di) = (1.0, 0.0);
        for (f, e) in &self.den {
            let (fr, fi) = f.poly().eval_complex(s, 0.0);
            for _ in 0..*e {
                let r = dr * fr - di * fi;
                let i = dr * fi + di * fr;
                dr = r;
                di = i;
            }
        }
        let n = dr * dr + di * di;
        ((nr * dr + ni * di) / n, (ni * dr - nr * di) / n)
    }

    /// Cross-multiplication over the lcm of denominators.
    pub fn cross_eq(&self, other: &CoefExpr) -> bool {
        if self.den.is_empty() && other.den.is_empty() {
            return self.num == other.num;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        let lcm = merge_with(&self.den, &other.den, u32::max);
        let x = cofactor(&self.den, &lcm);
        let y = cofactor(&other.den, &lcm);
        &self.num * &x == &other.num * &y
    }

    /// Equality decided by sampling the cross-product difference
    /// `a.num·b.den − b.num·a.den` at `s = 1, 2, …, D+1`, where `D` bounds
    /// its exponent span.
    pub fn eq_by_sampling(&self, other: &CoefExpr) -> bool {
        let a_den = self.den();
        let b_den = other.den();
        let bounds = |n: &LaurentPoly, d: &LaurentPoly| match (n.low_exp(), n.high_exp()) {
            (Some(lo), Some(hi)) => Some((lo + d.low_exp().unwrap(), hi + d.high_exp().unwrap())),
            _ => None,
        };
        let spans: Vec<(i64, i64)> = [bounds(&self.num, &b_den), bounds(&other.num, &a_den)]
            .into_iter()
            .flatten()
            .collect();
        if spans.is_empty() {
            return true;
        }
        let low = spans.iter().map(|s| s.0).min().unwrap();
        let high = spans.iter().map(|s| s.1).max().unwrap();
        let points = (high - low) + 1;
        (1..=points).all(|k| {
            let s = GaussianRational::from_integer(k);
            let l = &self.num.eval(&s).unwrap() * &b_den.eval(&s).unwrap();
            let r = &other.num.eval(&s).unwrap() * &a_den.eval(&s).unwrap();
            l == r
        })
    }

    /// `true` when every exponent of `s` appearing is even.
    pub fn is_even_in_s(&self) -> bool {
        self.num.is_even() && self.den().is_even()
    }
}

impl PartialEq for CoefExpr {
    fn eq(&self, other: &Self) -> bool {
        self.cross_eq(other)
    }
}

impl Zero for CoefExpr {
    fn zero() -> Self {
        CoefExpr::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for CoefExpr {
    fn one() -> Self {
        CoefExpr::one()
    }
}

impl From<LaurentPoly> for CoefExpr {
    fn from(p: LaurentPoly) -> Self {
        CoefExpr::from_laurent(p)
    }
}

impl From<GaussianRational> for CoefExpr {
    fn from(c: GaussianRational) -> Self {
        CoefExpr::constant(c)
    }
}

impl From<i64> for CoefExpr {
    fn from(n: i64) -> Self {
        CoefExpr::from_integer(n)
    }
}

impl fmt::Display for CoefExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den())
        }
    }
}

impl<'a> Add<&'a CoefExpr> for &'a CoefExpr {
    type Output = CoefExpr;
    fn add(self, rhs: &CoefExpr) -> CoefExpr {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            return CoefExpr::reduced(&self.num + &rhs.num, self.den.clone());
        }
        let lcm = merge_with(&self.den, &rhs.den, u32::max);
        let x = cofactor(&self.den, &lcm);
        let y = cofactor(&rhs.den, &lcm);
        CoefExpr::reduced(&(&self.num * &x) + &(&rhs.num * &y), lcm)
    }
}

impl Add for CoefExpr {
    type Output = CoefExpr;
    fn add(self, rhs: CoefExpr) -> CoefExpr {
        &self + &rhs
    }
}

impl<'a> Sub<&'a CoefExpr> for &'a CoefExpr {
    type Output = CoefExpr;
    fn sub(self, rhs: &CoefExpr) -> CoefExpr {
        self + &(-rhs)
    }
}

impl Sub for CoefExpr {
    type Output = CoefExpr;
    fn sub(self, rhs: CoefExpr) -> CoefExpr {
        &self - &rhs
    }
}

impl<'a> Mul<&'a CoefExpr> for &'a CoefExpr {
    type Output = CoefExpr;
    fn mul(self, rhs: &CoefExpr) -> CoefExpr {
        if self.is_zero() || rhs.is_zero() {
            return CoefExpr::zero();
        }
        let num = &self.num * &rhs.num;
        if self.den.is_empty() && rhs.den.is_empty() {
            return CoefExpr::from_laurent(num);
        }
        CoefExpr::reduced(num, merge_add(&self.den, &rhs.den))
    }
}

impl Mul for CoefExpr {
    type Output = CoefExpr;
    fn mul(self, rhs: CoefExpr) -> CoefExpr {
        &self * &rhs
    }
}

impl Neg for &CoefExpr {
    type Output = CoefExpr;
    fn neg(self) -> CoefExpr {
        CoefExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for CoefExpr {
    type Output = CoefExpr;
    fn neg(self) -> CoefExpr {
        -&self
    }
}
