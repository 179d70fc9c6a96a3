//! Laurent polynomials in the formal variable `s`, where `q = s²`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::gaussian::GaussianRational;

/// Coefficients scaled to Gaussian integers over one common denominator.
struct Integral {
    re: Vec<BigInt>,
    im: Option<Vec<BigInt>>,
    den: BigInt,
}

impl Integral {
    fn of(coeffs: &[GaussianRational]) -> Self {
        let mut den = BigInt::one();
        let mut has_im = false;
        for c in coeffs {
            if !c.re().denom().is_one() {
                den = den.lcm(c.re().denom());
            }
            if !c.im().is_zero() {
                has_im = true;
                if !c.im().denom().is_one() {
                    den = den.lcm(c.im().denom());
                }
            }
        }
        let scale = |r: &BigRational| -> BigInt {
            if r.denom().is_one() {
                r.numer() * &den
            } else {
                r.numer() * (&den / r.denom())
            }
        };
        let re = coeffs.iter().map(|c| scale(c.re())).collect();
        let im = has_im.then(|| coeffs.iter().map(|c| scale(c.im())).collect());
        Integral { re, im, den }
    }

    fn into_coeffs(self) -> Vec<GaussianRational> {
        let den = self.den;
        let part = |n: BigInt| -> BigRational {
            if n.is_zero() {
                BigRational::zero()
            } else if den.is_one() {
                BigRational::from_integer(n)
            } else {
                BigRational::new(n, den.clone())
            }
        };
        match self.im {
            None => self
                .re
                .into_iter()
                .map(|r| GaussianRational::real(part(r)))
                .collect(),
            Some(im) => self
                .re
                .into_iter()
                .zip(im)
                .map(|(r, i)| GaussianRational::new(part(r), part(i)))
                .collect(),
        }
    }
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}

/// Integer convolution, through `i128` when the result provably fits.
fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len() + b.len() - 1;
    let len_bits = 64 - (a.len().min(b.len()) as u64).leading_zeros() as u64;
    if max_bits(a) + max_bits(b) + len_bits < 126 {
        let a: Vec<i128> = a.iter().map(|x| x.to_i128().unwrap()).collect();
        let b: Vec<i128> = b.iter().map(|x| x.to_i128().unwrap()).collect();
        let mut out = vec![0i128; n];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        return out.into_iter().map(BigInt::from).collect();
    }
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn sub_in_place(a: &mut [BigInt], b: &[BigInt]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= y;
    }
}

fn add_in_place(a: &mut [BigInt], b: &[BigInt]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

/// Long division by a real integer polynomial with leading coefficient ±1.
/// Returns `None` on a nonzero remainder.
fn div_monic(dividend: &[BigInt], divisor: &[i64]) -> Option<Vec<BigInt>> {
    let dlen = divisor.len();
    let lead = divisor[dlen - 1];
    let mut rem = dividend.to_vec();
    let qlen = rem.len() - dlen + 1;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let top = std::mem::take(&mut rem[k + dlen - 1]);
        if top.is_zero() {
            continue;
        }
        let f = if lead == 1 { top } else { -top };
        for (j, &d) in divisor[..dlen - 1].iter().enumerate() {
            if d != 0 {
                rem[k + j] -= &f * d;
            }
        }
        quot[k] = f;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

/// Dense Laurent polynomial `Σ c_k s^k` over the Gaussian rationals.
///
/// Coefficients are stored from exponent `low` upward. The first and last
/// stored coefficients are nonzero; the zero polynomial stores nothing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    pub fn from_integer(n: i64) -> Self {
        LaurentPoly::constant(GaussianRational::from_integer(n))
    }

    pub fn monomial(c: GaussianRational, exp: i64) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            low: exp,
            coeffs: vec![c],
        }
    }

    /// `s^e`.
    pub fn s_pow(e: i64) -> Self {
        LaurentPoly::monomial(GaussianRational::one(), e)
    }

    /// `q^e = s^{2e}`.
    pub fn q_pow(e: i64) -> Self {
        LaurentPoly::s_pow(2 * e)
    }

    /// Builds a polynomial from `(s-exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, GaussianRational)>,
    {
        let terms: Vec<(i64, GaussianRational)> = terms.into_iter().collect();
        if terms.is_empty() {
            return LaurentPoly::zero();
        }
        let low = terms.iter().map(|(e, _)| *e).min().unwrap();
        let high = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![GaussianRational::zero(); (high - low + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - low) as usize] += &c;
        }
        LaurentPoly::from_dense(low, coeffs)
    }

    /// Polynomial in `q` given by its coefficient list, lowest power first.
    pub fn from_q_coeffs(coeffs: &[i64]) -> Self {
        LaurentPoly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (2 * k as i64, GaussianRational::from_integer(c))),
        )
    }

    fn from_dense(low: i64, mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return LaurentPoly::zero();
        }
        coeffs.drain(..lead);
        LaurentPoly {
            low: low + lead as i64,
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// The constant value if this polynomial has no `s` dependence.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.is_zero() {
            Some(GaussianRational::zero())
        } else if self.low == 0 && self.coeffs.len() == 1 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// `(exponent, coefficient)` if this is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(i64, &GaussianRational)> {
        if self.coeffs.len() == 1 {
            Some((self.low, &self.coeffs[0]))
        } else {
            None
        }
    }

    pub fn low_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// `high - low`, or 0 for the zero polynomial.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, exp: i64) -> GaussianRational {
        let idx = exp - self.low;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            GaussianRational::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    /// Nonzero terms as `(s-exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    pub fn is_even(&self) -> bool {
        self.terms().all(|(e, _)| e % 2 == 0)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies by `s^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// The involution `s ↦ s⁻¹`, i.e. `q ↦ 1/q`.
    pub fn substitute_inverse(&self) -> Self {
        match self.high_exp() {
            None => LaurentPoly::zero(),
            Some(high) => {
                let mut coeffs = self.coeffs.clone();
                coeffs.reverse();
                LaurentPoly { low: -high, coeffs }
            }
        }
    }

    /// Substitutes `s ↦ s^k` for nonzero `k`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0, "substitute_power needs a nonzero exponent");
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e * k, c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at `s`; `None` when `s = 0` and negative powers exist.
    pub fn eval(&self, s: &GaussianRational) -> Option<GaussianRational> {
        if self.is_zero() {
            return Some(GaussianRational::zero());
        }
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * s) + c;
        }
        let shift = if self.low >= 0 {
            s.pow(self.low as u32)
        } else {
            s.inv().ok()?.pow((-self.low) as u32)
        };
        Some(&acc * &shift)
    }

    /// Evaluation in `q` alone; `None` if an odd power of `s` is present or
    /// `q = 0` meets a negative power.
    pub fn eval_q(&self, q: &GaussianRational) -> Option<GaussianRational> {
        if !self.is_even() {
            return None;
        }
        let mut acc = GaussianRational::zero();
        for (e, c) in self.terms() {
            let half = e / 2;
            let p = if half >= 0 {
                q.pow(half as u32)
            } else {
                q.inv().ok()?.pow((-half) as u32)
            };
            acc += &(c * &p);
        }
        Some(acc)
    }

    /// Floating-point evaluation at the complex point `(re, im)`.
    pub fn eval_complex(&self, re: f64, im: f64) -> (f64, f64) {
        let (mut ar, mut ai) = (0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            let (cr, ci) = c.to_f64_pair();
            let nr = ar * re - ai * im + cr;
            let ni = ar * im + ai * re + ci;
            ar = nr;
            ai = ni;
        }
        let (mut pr, mut pi) = (1.0, 0.0);
        let (br, bi) = if self.low >= 0 {
            (re, im)
        } else {
            let n = re * re + im * im;
            (re / n, -im / n)
        };
        for _ in 0..self.low.unsigned_abs() {
            let nr = pr * br - pi * bi;
            let ni = pr * bi + pi * br;
            pr = nr;
            pi = ni;
        }
        (ar * pr - ai * pi, ar * pi + ai * pr)
    }

    /// Sum of the float magnitudes of all coefficients.
    pub fn abs_sum_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| {
                let (r, i) = c.to_f64_pair();
                r.abs() + i.abs()
            })
            .sum()
    }

    /// Splits `self = unit · s^shift · p` where `p` has lowest exponent 0 and
    /// leading coefficient 1. Returns `None` for the zero polynomial.
    pub fn normalize(&self) -> Option<(GaussianRational, i64, LaurentPoly)> {
        let lead = self.leading_coeff()?.clone();
        let inv = lead.inv().ok()?;
        let p = LaurentPoly {
            low: 0,
            coeffs: self.coeffs.iter().map(|c| c * &inv).collect(),
        };
        Some((lead, self.low, p))
    }

    /// The coefficients as machine integers when the polynomial is real,
    /// integral and has leading coefficient ±1.
    fn as_monic_integers(&self) -> Option<Vec<i64>> {
        let lead = self.coeffs.last()?;
        if !(lead.is_one() || (-lead).is_one()) {
            return None;
        }
        self.coeffs
            .iter()
            .map(|c| {
                (c.im().is_zero() && c.re().is_integer())
                    .then(|| c.re().numer().to_i64())
                    .flatten()
            })
            .collect()
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let dlen = divisor.coeffs.len();
        if dlen == 1 {
            let inv = divisor.coeffs[0].inv().ok()?;
            return Some(LaurentPoly {
                low: self.low - divisor.low,
                coeffs: self.coeffs.iter().map(|c| c * &inv).collect(),
            });
        }
        if self.coeffs.len() < dlen {
            return None;
        }
        if let Some(small) = divisor.as_monic_integers() {
            let a = Integral::of(&self.coeffs);
            let re = div_monic(&a.re, &small)?;
            let im = match &a.im {
                Some(im) => Some(div_monic(im, &small)?),
                None => None,
            };
            let quot = Integral { re, im, den: a.den };
            return Some(LaurentPoly::from_dense(
                self.low - divisor.low,
                quot.into_coeffs(),
            ));
        }
        let lead_inv = divisor.coeffs[dlen - 1].inv().ok()?;
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![GaussianRational::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = &rem[k + dlen - 1];
            if top.is_zero() {
                continue;
            }
            let f = top * &lead_inv;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + j] -= &(&f * d);
                }
            }
            quot[k] = f;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(LaurentPoly::from_dense(self.low - divisor.low, quot))
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*s")?,
                _ => write!(f, "{c}*s^{e}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high_exp().unwrap().max(rhs.high_exp().unwrap());
        let mut coeffs = vec![GaussianRational::zero(); (high - low + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + k] += c;
        }
        for (k, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.low - low) as usize + k] += c;
        }
        LaurentPoly::from_dense(low, coeffs)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if self.coeffs.len() == 1 {
            return rhs.scale(&self.coeffs[0]).shift(self.low);
        }
        if rhs.coeffs.len() == 1 {
            return self.scale(&rhs.coeffs[0]).shift(rhs.low);
        }
        let a = Integral::of(&self.coeffs);
        let b = Integral::of(&rhs.coeffs);
        let mut re = convolve(&a.re, &b.re);
        let im = match (&a.im, &b.im) {
            (None, None) => None,
            (Some(ai), None) => Some(convolve(ai, &b.re)),
            (None, Some(bi)) => Some(convolve(&a.re, bi)),
            (Some(ai), Some(bi)) => {
                sub_in_place(&mut re, &convolve(ai, bi));
                let mut im = convolve(&a.re, bi);
                add_in_place(&mut im, &convolve(ai, &b.re));
                Some(im)
            }
        };
        let product = Integral {
            re,
            im,
            den: a.den * b.den,
        };
        LaurentPoly::from_dense(self.low + rhs.low, product.into_coeffs())
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_poly(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_q_coeffs(c)
    }

    #[test]
    fn arithmetic_trims_zeros() {
        let a = q_poly(&[1, 1]);
        let b = q_poly(&[1, -1]);
        assert_eq!(&a * &b, q_poly(&[1, 0, -1]));
        assert!((&a - &a).is_zero());
        let c = &a + &q_poly(&[-1]);
        assert_eq!(c.low_exp(), Some(2));
        assert_eq!(c.as_monomial().map(|(e, _)| e), Some(2));
    }

    #[test]
    fn inverse_substitution_is_involution() {
        let p = LaurentPoly::from_terms([
            (-3, GaussianRational::from_integer(2)),
            (1, GaussianRational::i()),
            (4, GaussianRational::from_integer(-5)),
        ]);
        let r = p.substitute_inverse();
        assert_eq!(r.low_exp(), Some(-4));
        assert_eq!(r.substitute_inverse(), p);
    }

    #[test]
    fn exact_division() {
        let a = q_poly(&[1, 1]);
        let b = q_poly(&[1, 1, 1]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.shift(-3).div_exact(&b), Some(a.shift(-3)));
        assert_eq!(b.div_exact(&a), None);
    }

    #[test]
    fn evaluation() {
        let p = q_poly(&[1, 1, 1, 1]);
        let two = GaussianRational::from_integer(2);
        assert_eq!(p.eval_q(&two), Some(GaussianRational::from_integer(15)));
        assert_eq!(LaurentPoly::s_pow(1).eval_q(&two), None);
        let sqrt = LaurentPoly::s_pow(-1);
        assert_eq!(sqrt.eval(&two), Some(GaussianRational::from_ratio(1, 2)));
        assert_eq!(sqrt.eval(&GaussianRational::zero()), None);
    }
}
