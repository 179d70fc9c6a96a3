//! Exhaustive verification of the Hermite-binomial and q-exponential
//! identities at bounded degree.
//!
//! Every routine expands both sides exactly and reports the first nonzero
//! difference it meets.

use std::fmt;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rayon::prelude::*;

use crate::coeff::CoefExpr;
use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::hermite::{hermite_classical, q_hermite, q_hermite_dual, q_hermite_inverse};
use crate::mpoly::MPoly;
use crate::ops::{
    d_operator, dbar_operator, q_binomial_power, q_binomial_product, q_derivative,
    q_laplacian_chain,
};
use crate::qnum::{
    gauss_binomial, q_factorial_inv_base, q_int, q_int_inv_base, q_triangular, QBase,
};
use crate::qwave::Speed;
use crate::series::{q_exp_series, q_exp_series_base, ExpKind};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Verified,
    Failed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Failed => "failed",
        })
    }
}

/// Outcome of one identity check.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: String,
    /// Human-readable parameter range, e.g. `n=0..10`.
    pub range: String,
    pub status: Status,
    /// Where the first failure occurred, e.g. `n=3`.
    pub failed_at: Option<String>,
    /// LHS − RHS at the first failure.
    pub residual: Option<MPoly>,
    pub elapsed: Duration,
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }
}

type Failure = (String, MPoly);

fn run(id: &str, range: String, body: impl FnOnce() -> Option<Failure>) -> Verdict {
    let start = Instant::now();
    let failure = body();
    let elapsed = start.elapsed();
    let (status, failed_at, residual) = match failure {
        None => (Status::Verified, None, None),
        Some((at, r)) => (Status::Failed, Some(at), Some(r)),
    };
    Verdict {
        id: id.to_string(),
        range,
        status,
        failed_at,
        residual,
        elapsed,
    }
}

/// `Some(failure)` when `lhs != rhs`.
fn compare(at: impl FnOnce() -> String, lhs: &MPoly, rhs: &MPoly) -> Option<Failure> {
    let diff = lhs - rhs;
    (!diff.is_zero()).then(|| (at(), diff))
}

fn constant(c: GaussianRational) -> CoefExpr {
    CoefExpr::constant(c)
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

/// `H_n(a · v)` for the classical family, in the single variable `var`.
fn classical_at(n: u32, a: &CoefExpr, var: &str) -> MPoly {
    let image = MPoly::var(&[var], var).scale(a);
    hermite_classical(n).compose("x", &image)
}

fn classical_in(n: u32, var: &str, vars: &[&str]) -> MPoly {
    hermite_classical(n).rename_var("x", var).embed(vars)
}

/// `(z + iw)^n = 2^{-n} Σ_k C(n,k) i^k H_{n-k}(z) H_k(w)`.
pub fn hermite_binomial_rhs(n: u32) -> MPoly {
    let zw = ["z", "w"];
    let mut rhs = MPoly::zero(&zw);
    for k in 0..=n {
        let c = constant(
            &GaussianRational::i_pow(k as i64) * &GaussianRational::from_integer(binomial(n, k)),
        );
        rhs = &rhs + &(&classical_in(n - k, "z", &zw) * &classical_in(k, "w", &zw)).scale(&c);
    }
    rhs.scale(&CoefExpr::from_ratio(1, 1 << n))
}

pub fn verify_hermite_binomial(n_max: u32) -> Verdict {
    run("hermite-binomial", format!("n=0..{n_max}"), || {
        let zw = ["z", "w"];
        let z = MPoly::var(&zw, "z");
        let iw = MPoly::var(&zw, "w").scale(&CoefExpr::i());
        let base = &z + &iw;
        (0..=n_max)
            .find_map(|n| compare(|| format!("n={n}"), &base.pow(n), &hermite_binomial_rhs(n)))
    })
}

/// Which form of the ξ-identity to expand.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum XiForm {
    /// `2^{-n} Σ C(n,k) (-i)^{n-k} H_{n-k}(iξ/2) H_k(ξ/2) = ξ^n`.
    Main,
    /// `2^{-2n} Σ C(n,k) i^k H_{n-k}(z) H_k(-iz) = z^n`.
    RotatedArgument,
    /// `2^{-n} Σ C(n,k) (-i)^{n-k} H_{n-k}(ix/2) H_k(x/2) = x^n`.
    RealArgument,
    /// `2^{-n} Σ C(n,k) (-i)^{n-k} H_{n-k}(-y/2) H_k(iy/2) = i^n y^n`.
    ImaginaryArgument,
}

impl XiForm {
    pub const ALL: [XiForm; 4] = [
        XiForm::Main,
        XiForm::RotatedArgument,
        XiForm::RealArgument,
        XiForm::ImaginaryArgument,
    ];
}

/// `LHS − RHS` of a ξ-identity form at degree `n`. `phase` is the unit
/// raised to the power `n-k` in the real- and imaginary-argument sums
/// (`-i` makes them hold; `i` is the alternative sign).
pub fn xi_residual(form: XiForm, n: u32, phase: &GaussianRational) -> MPoly {
    let half = GaussianRational::from_ratio(1, 2);
    let i = GaussianRational::i();
    let minus_i = -&i;
    let (var, outer_arg, inner_arg, unit_power, prefactor_log2, rhs_coef): (
        &str,
        GaussianRational,
        GaussianRational,
        &dyn Fn(u32) -> GaussianRational,
        u32,
        GaussianRational,
    ) = match form {
        XiForm::Main => (
            "xi",
            &i * &half,
            half.clone(),
            &|j| minus_i.pow(j),
            n,
            GaussianRational::from_integer(1),
        ),
        XiForm::RotatedArgument => (
            "z",
            GaussianRational::from_integer(1),
            minus_i.clone(),
            &|_| GaussianRational::from_integer(1),
            2 * n,
            GaussianRational::from_integer(1),
        ),
        XiForm::RealArgument => (
            "x",
            &i * &half,
            half.clone(),
            &|j| phase.pow(j),
            n,
            GaussianRational::from_integer(1),
        ),
        XiForm::ImaginaryArgument => ("y", -&half, &i * &half, &|j| phase.pow(j), n, i.pow(n)),
    };
    let mut lhs = MPoly::zero(&[var]);
    for k in 0..=n {
        let mut c = &unit_power(n - k) * &GaussianRational::from_integer(binomial(n, k));
        if form == XiForm::RotatedArgument {
            c = &c * &i.pow(k);
        }
        let term = &classical_at(n - k, &constant(outer_arg.clone()), var)
            * &classical_at(k, &constant(inner_arg.clone()), var);
        lhs = &lhs + &term.scale(&constant(c));
    }
    let lhs = lhs.scale(&constant(GaussianRational::real(BigRational::new(
        1.into(),
        num_bigint::BigInt::from(2).pow(prefactor_log2),
    ))));
    let rhs = MPoly::monomial(&[var], vec![n], constant(rhs_coef));
    &lhs - &rhs
}

pub fn verify_xi_identity(n_max: u32) -> Verdict {
    run("xi", format!("n=0..{n_max}, four forms"), || {
        let phase = -GaussianRational::i();
        XiForm::ALL.iter().find_map(|&form| {
            (0..=n_max).find_map(|n| {
                let r = xi_residual(form, n, &phase);
                (!r.is_zero()).then(|| (format!("{form:?} n={n}"), r))
            })
        })
    })
}

/// `[2]_q^{-n} Σ_k [n k]_q i^k q^{k(k-1)/2} H_{n-k}(z;q) H_k(qw;1/q)`.
pub fn q_hermite_binomial_rhs(n: u32) -> MPoly {
    let zw = ["z", "w"];
    let mut rhs = MPoly::zero(&zw);
    for k in 0..=n {
        let weight = &gauss_binomial(n, k).expect("k <= n") * &q_triangular(k);
        let c = CoefExpr::from(weight.scale(&GaussianRational::i_pow(k as i64)));
        let hz = q_hermite(n - k).rename_var("x", "z").embed(&zw);
        let hw = q_hermite_dual(k).rename_var("x", "w").embed(&zw);
        rhs = &rhs + &(&hz * &hw).scale(&c);
    }
    rhs.scale(&q_int_inv_base(2, QBase::Q).pow(n))
}

pub fn verify_q_hermite_binomial(n_max: u32) -> Verdict {
    run("q-hermite-binomial", format!("n=0..{n_max}"), || {
        (0..=n_max).find_map(|n| {
            let lhs = q_binomial_power("z", &CoefExpr::i(), "w", n);
            compare(|| format!("n={n}"), &lhs, &q_hermite_binomial_rhs(n))
        })
    })
}

fn univariate(series: &crate::series::TruncSeries, var: &str) -> MPoly {
    series.to_mpoly().rename_var(series.var(), var)
}

/// `e_q(x) e_q(-x) − e_{q²}((1-q)/(1+q) x²)` through degree `order`.
pub fn exp_product_residual(order: u32) -> MPoly {
    let e = q_exp_series(ExpKind::Small, order);
    let lhs = &e * &e.substitute_monomial(&CoefExpr::from_integer(-1), 1, order);
    let ratio = &(&CoefExpr::one() - &CoefExpr::q()) * &q_int_inv_base(2, QBase::Q);
    let rhs = q_exp_series_base(QBase::Q_SQUARED, order).substitute_monomial(&ratio, 2, order);
    univariate(&(&lhs - &rhs), "x")
}

/// Checks the product identity symbolically and, coefficient by coefficient,
/// at every `q` sample. A sample at a pole of either side is rejected.
pub fn verify_exp_product(order: u32, q_samples: &[BigRational]) -> Result<Verdict> {
    let e = q_exp_series(ExpKind::Small, order);
    let ratio = &(&CoefExpr::one() - &CoefExpr::q()) * &q_int_inv_base(2, QBase::Q);
    let rhs = q_exp_series_base(QBase::Q_SQUARED, order).substitute_monomial(&ratio, 2, order);
    let lhs = &e * &e.substitute_monomial(&CoefExpr::from_integer(-1), 1, order);
    let samples: Vec<GaussianRational> = q_samples
        .iter()
        .cloned()
        .map(GaussianRational::real)
        .collect();
    let mut evaluated = Vec::with_capacity(samples.len());
    for q in &samples {
        let mut pairs = Vec::with_capacity(order as usize + 1);
        for k in 0..=order {
            let a = lhs.coeff(k).eval(q, None).map_err(|_| pole_at(q))?;
            let b = rhs.coeff(k).eval(q, None).map_err(|_| pole_at(q))?;
            pairs.push((a, b));
        }
        evaluated.push(pairs);
    }
    let list: Vec<String> = q_samples
        .iter()
        .map(crate::gaussian::format_ratio)
        .collect();
    let range = format!("x-order {order}, q samples [{}]", list.join(", "));
    Ok(run("exp-product", range, || {
        let diff = univariate(&(&lhs - &rhs), "x");
        if !diff.is_zero() {
            return Some(("symbolic".to_string(), diff));
        }
        for (q, pairs) in samples.iter().zip(&evaluated) {
            for (k, (a, b)) in pairs.iter().enumerate() {
                if a != b {
                    let r = MPoly::monomial(&["x"], vec![k as u32], CoefExpr::constant(a - b));
                    return Some((format!("q={q}, x^{k}"), r));
                }
            }
        }
        None
    }))
}

fn pole_at(q: &GaussianRational) -> Error {
    Error::InvalidArgument(format!("q sample {q} is a pole of the product identity"))
}

/// `e_q(x) e_{1/q}(y) − Σ (x+y)_q^n/[n]_q!` through total degree `order`.
pub fn exp_factorization_residual(order: u32) -> MPoly {
    let xy = ["x", "y"];
    let mut lhs = MPoly::zero(&xy);
    for a in 0..=order {
        let ca = q_factorial_inv_base(a, QBase::Q);
        for b in 0..=order - a {
            lhs.add_term(vec![a, b], &ca * &q_factorial_inv_base(b, QBase::INV_Q));
        }
    }
    let x = MPoly::var(&xy, "x");
    let y = MPoly::var(&xy, "y");
    let mut rhs = MPoly::zero(&xy);
    for n in 0..=order {
        rhs = &rhs + &q_binomial_product(&x, &y, n).scale(&q_factorial_inv_base(n, QBase::Q));
    }
    &lhs - &rhs
}

/// `e_q(-t²) e_{1/q}(t²) − 1` through t-degree `order`.
pub fn exp_corollary_residual(order: u32) -> MPoly {
    let small = q_exp_series(ExpKind::Small, order / 2).substitute_monomial(
        &CoefExpr::from_integer(-1),
        1,
        order / 2,
    );
    let inverse = q_exp_series_base(QBase::INV_Q, order / 2);
    let product = univariate(&(&small * &inverse), "u");
    let square = MPoly::monomial(&["t"], vec![2], CoefExpr::one());
    &product.compose("u", &square) - &MPoly::one(&["t"])
}

pub fn verify_exp_factorization(order: u32) -> Verdict {
    run(
        "exp-factorization",
        format!("total order {order}, corollary t-order {order}"),
        || {
            let r = exp_factorization_residual(order);
            if !r.is_zero() {
                return Some(("factorization".to_string(), r));
            }
            let r = exp_corollary_residual(order);
            (!r.is_zero()).then(|| ("corollary".to_string(), r))
        },
    )
}

pub fn verify_double_q_analytic(n_max: u32) -> Verdict {
    run("double-q-analytic", format!("n=1..{n_max}"), || {
        let mut prev = q_binomial_power("z", &CoefExpr::i(), "w", 0);
        for n in 1..=n_max {
            let p = q_binomial_power("z", &CoefExpr::i(), "w", n);
            let dbar = dbar_operator(&p);
            if !dbar.is_zero() {
                return Some((format!("dbar n={n}"), dbar));
            }
            let expected = prev.scale(&CoefExpr::from(q_int(n)));
            if let Some(f) = compare(|| format!("d n={n}"), &d_operator(&p), &expected) {
                return Some(f);
            }
            prev = p;
        }
        None
    })
}

/// `Σ_{m ≤ order} (-1/[2]_q²)^m / [m]_b! · D^{2m} v^n` with `D` the
/// q-derivative in base `b` along `var` of `p`.
fn exp_operator_single(p: &MPoly, var: &str, base: QBase, order: u32) -> MPoly {
    let step = -q_int_inv_base(2, QBase::Q).pow(2);
    let mut out = MPoly::from_var_names(p.vars().to_vec());
    let mut current = p.clone();
    for m in 0..=order {
        if current.is_zero() {
            break;
        }
        let c = &step.pow(m) * &q_factorial_inv_base(m, base);
        out = &out + &current.scale(&c);
        current = q_derivative(&q_derivative(&current, var, base), var, base);
    }
    out
}

/// `Σ_{m ≤ order} (-1/[2]_q²)^m / [m]_q! · (Δ_q)_q^m p`.
fn exp_operator_laplacian(p: &MPoly, order: u32) -> MPoly {
    let step = -q_int_inv_base(2, QBase::Q).pow(2);
    let mut out = MPoly::from_var_names(p.vars().to_vec());
    for m in 0..=order {
        let chained = q_laplacian_chain(p, m);
        if chained.is_zero() {
            continue;
        }
        out = &out + &chained.scale(&(&step.pow(m) * &q_factorial_inv_base(m, QBase::Q)));
    }
    out
}

pub fn verify_q_laplacian_identity(n_max: u32, order: u32) -> Verdict {
    run(
        "q-laplacian",
        format!("n=0..{n_max}, operator order {order}"),
        || {
            let zw = ["z", "w"];
            let inv_two = q_int_inv_base(2, QBase::Q);
            for n in 0..=n_max {
                let binom = q_binomial_power("z", &CoefExpr::i(), "w", n);
                for m in 1..=n / 2 + 1 {
                    let r = q_laplacian_chain(&binom, m);
                    if !r.is_zero() {
                        return Some((format!("chain n={n} m={m}"), r));
                    }
                }
                let termwise = exp_operator_laplacian(&binom, order);
                if let Some(f) = compare(|| format!("termwise n={n}"), &termwise, &binom) {
                    return Some(f);
                }
                let mut factorized = MPoly::zero(&zw);
                for k in 0..=n {
                    let weight = &gauss_binomial(n, k).expect("k <= n") * &q_triangular(k);
                    let c = CoefExpr::from(weight.scale(&GaussianRational::i_pow(k as i64)));
                    let zpart = exp_operator_single(
                        &MPoly::monomial(&zw, vec![n - k, 0], CoefExpr::one()),
                        "z",
                        QBase::Q,
                        order,
                    );
                    let wpart = exp_operator_single(
                        &MPoly::monomial(&zw, vec![0, k], CoefExpr::one()),
                        "w",
                        QBase::INV_Q,
                        order,
                    );
                    let hw = q_hermite_dual(k)
                        .rename_var("x", "w")
                        .embed(&zw)
                        .scale(&inv_two.pow(k));
                    if let Some(f) = compare(|| format!("w-operator k={k}"), &wpart, &hw) {
                        return Some(f);
                    }
                    factorized = &factorized + &(&zpart * &wpart).scale(&c);
                }
                if let Some(f) = compare(|| format!("factorized n={n}"), &factorized, &binom) {
                    return Some(f);
                }
                let x_n = MPoly::monomial(&["x"], vec![n], CoefExpr::one());
                let op = exp_operator_single(&x_n, "x", QBase::Q, order)
                    .scale(&CoefExpr::from(q_int(2).pow(n)));
                if let Some(f) = compare(|| format!("hermite operator n={n}"), &op, &q_hermite(n)) {
                    return Some(f);
                }
            }
            None
        },
    )
}

/// `[2]_q^{-n} Σ_k [n k]_q i^k q^{k(k-1)/2} H_{n-k}(x;q) H_k(-iqct;1/q)`.
pub fn traveling_hermite_rhs(n: u32, speed: &Speed) -> MPoly {
    let vars = speed.vars();
    let ct = &speed.as_poly(&vars) * &MPoly::var(&vars, "t");
    let image = ct.scale(&(&-CoefExpr::i() * &CoefExpr::q()));
    let mut rhs = MPoly::zero(&vars);
    for k in 0..=n {
        let weight = &gauss_binomial(n, k).expect("k <= n") * &q_triangular(k);
        let c = CoefExpr::from(weight.scale(&GaussianRational::i_pow(k as i64)));
        let hx = q_hermite(n - k).embed(&vars);
        let hk = q_hermite_inverse(k).compose("x", &image);
        rhs = &rhs + &(&hx * &hk).scale(&c);
    }
    rhs.scale(&q_int_inv_base(2, QBase::Q).pow(n))
}

pub fn verify_traveling_hermite_expansion(n_max: u32, speed: &Speed) -> Verdict {
    run(
        "traveling-hermite",
        format!("n=0..{n_max}, c={speed}"),
        || {
            let vars = speed.vars();
            let x = MPoly::var(&vars, "x");
            let ct = &speed.as_poly(&vars) * &MPoly::var(&vars, "t");
            for n in 0..=n_max {
                let lhs = q_binomial_product(&x, &ct, n);
                let rhs = traveling_hermite_rhs(n, speed);
                if let Some(f) = compare(|| format!("n={n}"), &lhs, &rhs) {
                    return Some(f);
                }
                if !rhs.is_real() {
                    return Some((format!("imaginary part n={n}"), rhs));
                }
            }
            None
        },
    )
}

/// Identity ids accepted by [`verify_by_id`], sorted.
pub const IDENTITY_IDS: [&str; 8] = [
    "double-q-analytic",
    "exp-factorization",
    "exp-product",
    "hermite-binomial",
    "q-hermite-binomial",
    "q-laplacian",
    "traveling-hermite",
    "xi",
];

/// Parameters shared by the identity checks.
#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub n_max: u32,
    pub order: u32,
    pub q_samples: Vec<BigRational>,
    pub speed: Speed,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            n_max: 10,
            order: 20,
            q_samples: vec![
                BigRational::new(1.into(), 2.into()),
                BigRational::from_integer(2.into()),
                BigRational::new(3.into(), 5.into()),
            ],
            speed: Speed::Symbolic,
        }
    }
}

/// Runs one identity check by id; `None` for an unknown id.
pub fn verify_by_id(id: &str, params: &VerifyParams) -> Option<Result<Verdict>> {
    let n = params.n_max;
    let verdict = match id {
        "hermite-binomial" => verify_hermite_binomial(n),
        "xi" => verify_xi_identity(n),
        "q-hermite-binomial" => verify_q_hermite_binomial(n),
        "exp-product" => return Some(verify_exp_product(params.order, &params.q_samples)),
        "exp-factorization" => verify_exp_factorization(params.order),
        "double-q-analytic" => verify_double_q_analytic(n),
        "q-laplacian" => verify_q_laplacian_identity(n, params.order.max(n)),
        "traveling-hermite" => verify_traveling_hermite_expansion(n, &params.speed),
        _ => return None,
    };
    Some(Ok(verdict))
}

/// Runs several checks concurrently; the result is sorted by id.
pub fn verify_many(ids: &[&str], params: &VerifyParams) -> Result<Vec<Verdict>> {
    let mut out: Vec<Verdict> = ids
        .par_iter()
        .map(|id| {
            verify_by_id(id, params)
                .unwrap_or_else(|| Err(Error::InvalidArgument(format!("unknown identity `{id}`"))))
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}
