//! q-integers, q-factorials and Gaussian binomial coefficients.

use crate::coeff::CoefExpr;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// The deformation base as a power of `s` (where `q = s²`).
///
/// `QBase::Q` is `q` itself, `QBase::INV_Q` is `1/q`, `QBase::Q_SQUARED` is `q²`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct QBase(i64);

impl QBase {
    pub const Q: QBase = QBase(2);
    pub const INV_Q: QBase = QBase(-2);
    pub const Q_SQUARED: QBase = QBase(4);

    /// Base `s^k`.
    pub fn from_s_power(k: i64) -> QBase {
        assert!(k != 0, "base must be a nonzero power of s");
        QBase(k)
    }

    pub fn s_power(self) -> i64 {
        self.0
    }

    /// `1/base`.
    pub fn inverse(self) -> QBase {
        QBase(-self.0)
    }
}

/// `[n]_b = 1 + b + … + b^{n-1}`.
pub fn q_int_base(n: u32, base: QBase) -> LaurentPoly {
    LaurentPoly::from_terms((0..n as i64).map(|j| {
        (
            base.0 * j,
            crate::gaussian::GaussianRational::from_integer(1),
        )
    }))
}

/// Cyclotomic factorization of `[n]_b` for `b = s^k`, `k > 0`:
/// `(s^{kn} - 1)/(s^k - 1) = Π Φ_d(s)` over `d | kn` with `d ∤ k`.
fn q_int_cyclotomics(n: u32, k: u32, out: &mut Vec<(u32, u32)>) {
    let m = k * n;
    for d in 1..=m {
        if m.is_multiple_of(d) && !k.is_multiple_of(d) {
            out.push((d, 1));
        }
    }
}

/// `1/[n]_b!` with the denominator already in factored form.
pub fn q_factorial_inv_base(n: u32, base: QBase) -> CoefExpr {
    let k = base.s_power().unsigned_abs() as u32;
    let mut factors = Vec::new();
    for j in 1..=n {
        q_int_cyclotomics(j, k, &mut factors);
    }
    // [j]_{s^{-k}} = s^{-k(j-1)} [j]_{s^k}
    let shift = if base.s_power() < 0 {
        (1..=n as i64).map(|j| base.s_power().abs() * (j - 1)).sum()
    } else {
        0
    };
    CoefExpr::over_cyclotomics(LaurentPoly::s_pow(shift), &factors)
}

/// `1/[n]_b` for `n ≥ 1`.
pub fn q_int_inv_base(n: u32, base: QBase) -> CoefExpr {
    assert!(n >= 1, "[0] has no inverse");
    let k = base.s_power().unsigned_abs() as u32;
    let mut factors = Vec::new();
    q_int_cyclotomics(n, k, &mut factors);
    let shift = if base.s_power() < 0 {
        base.s_power().abs() * (n as i64 - 1)
    } else {
        0
    };
    CoefExpr::over_cyclotomics(LaurentPoly::s_pow(shift), &factors)
}

/// `[n]_q = 1 + q + … + q^{n-1}`; `[0]_q = 0`.
pub fn q_int(n: u32) -> LaurentPoly {
    q_int_base(n, QBase::Q)
}

/// `[n]_q` for a signed argument; negative `n` is rejected.
pub fn q_int_checked(n: i64) -> Result<LaurentPoly> {
    if n < 0 {
        return Err(Error::Unsupported(format!(
            "q-integer with negative argument {n}"
        )));
    }
    Ok(q_int(n as u32))
}

pub fn q_factorial_base(n: u32, base: QBase) -> LaurentPoly {
    (1..=n).fold(LaurentPoly::one(), |acc, k| &acc * &q_int_base(k, base))
}

/// `[n]_q! = [1]_q [2]_q … [n]_q`; `[0]_q! = 1`.
pub fn q_factorial(n: u32) -> LaurentPoly {
    q_factorial_base(n, QBase::Q)
}

/// Gaussian binomial `[n k]_b`, obtained by exact division of q-factorials.
pub fn gauss_binomial_base(n: u32, k: u32, base: QBase) -> Result<LaurentPoly> {
    if k > n {
        return Err(Error::OutOfRange(format!(
            "Gaussian binomial needs 0 <= k <= n, got n={n}, k={k}"
        )));
    }
    let den = &q_factorial_base(k, base) * &q_factorial_base(n - k, base);
    Ok(q_factorial_base(n, base)
        .div_exact(&den)
        .expect("q-factorial quotient is a polynomial"))
}

/// Gaussian binomial `[n k]_q`.
pub fn gauss_binomial(n: u32, k: u32) -> Result<LaurentPoly> {
    gauss_binomial_base(n, k, QBase::Q)
}

/// `q^{k(k-1)/2}`.
pub fn q_triangular(k: u32) -> LaurentPoly {
    let k = k as i64;
    LaurentPoly::q_pow(k * (k - 1) / 2)
}
