//! q-traveling waves and the q-wave equation
//! `((D_{1/q}^t)² − c²(D_q^x)²) u = 0`.
//!
//! Solutions live in the variables `[x, t]` when the speed is a known
//! coefficient and `[x, t, c]` when it is kept symbolic.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::coeff::CoefExpr;
use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::ops::{jackson_antiderivative, q_derivative};
use crate::qnum::QBase;
use crate::series::{q_trig_series, TrigKind, TruncSeries};

/// The wave speed `c`.
#[derive(Clone, Debug, PartialEq)]
pub enum Speed {
    /// `c` kept as a polynomial variable.
    Symbolic,
    Value(CoefExpr),
}

impl Speed {
    pub fn vars(&self) -> Vec<&'static str> {
        match self {
            Speed::Symbolic => vec!["x", "t", "c"],
            Speed::Value(_) => vec!["x", "t"],
        }
    }

    /// `c` as a polynomial over `vars`.
    pub fn as_poly(&self, vars: &[&str]) -> MPoly {
        match self {
            Speed::Symbolic => MPoly::var(vars, "c"),
            Speed::Value(c) => MPoly::constant(vars, c.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Speed::Value(c) if c.is_zero())
    }
}

impl fmt::Display for Speed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Speed::Symbolic => f.write_str("c"),
            Speed::Value(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(self, c: &CoefExpr) -> CoefExpr {
        match self {
            Sign::Plus => c.clone(),
            Sign::Minus => -c,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    Dalembert,
    DirectBinomial,
    NamedSeries,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Dalembert => "dalembert",
            Provenance::DirectBinomial => "direct-binomial",
            Provenance::NamedSeries => "named-series",
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dalembert" => Ok(Provenance::Dalembert),
            "direct-binomial" => Ok(Provenance::DirectBinomial),
            "named-series" => Ok(Provenance::NamedSeries),
            _ => Err(Error::Parse(format!("unknown provenance `{s}`"))),
        }
    }
}

/// A solution `u(x, t)`.
///
/// `order` is `Some(N)` for truncated series bodies, which are meaningful
/// through total degree `N` in `x` and `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveSolution {
    pub body: MPoly,
    pub speed: Speed,
    pub order: Option<u32>,
    pub provenance: Provenance,
}

/// An initial profile in `x`: a polynomial, or a series with its order.
/// The coefficients may involve `c` when the speed is symbolic, in which
/// case the variable list is `[x, c]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    Poly(MPoly),
    Series { poly: MPoly, order: u32 },
}

impl Profile {
    pub fn from_series(s: &TruncSeries) -> Self {
        Profile::Series {
            poly: s.to_mpoly().rename_var(s.var(), "x"),
            order: s.order(),
        }
    }

    /// Polynomial with coefficients low degree first.
    pub fn from_coeffs(coeffs: &[CoefExpr]) -> Self {
        let mut p = MPoly::zero(&["x"]);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        Profile::Poly(p)
    }

    pub fn poly(&self) -> &MPoly {
        match self {
            Profile::Poly(p) | Profile::Series { poly: p, .. } => p,
        }
    }

    pub fn order(&self) -> Option<u32> {
        match self {
            Profile::Poly(_) => None,
            Profile::Series { order, .. } => Some(*order),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialData {
    pub f: Profile,
    pub g: Profile,
}

fn check_profile_vars(p: &MPoly, speed: &Speed) -> Result<()> {
    let allowed = speed.vars();
    for (i, v) in p.vars().iter().enumerate() {
        let used = p.terms().any(|(e, _)| e[i] > 0);
        if used && (v == "t" || !allowed.contains(&v.as_str())) {
            return Err(Error::InvalidArgument(format!(
                "initial data may only depend on x{}; found `{v}`",
                if matches!(speed, Speed::Symbolic) {
                    " and c"
                } else {
                    ""
                }
            )));
        }
    }
    Ok(())
}

/// `x^n ↦ (x ± ct)_q^n`, extended linearly. The input may carry `c` among
/// its variables when the speed is symbolic; the output is over `speed.vars()`.
pub fn q_binomial_substitute(p: &MPoly, sign: Sign, speed: &Speed) -> Result<MPoly> {
    check_profile_vars(p, speed)?;
    let vars = speed.vars();
    let src_vars: Vec<&str> = p.vars().iter().map(String::as_str).collect();
    let xi = p.index_of("x");
    let degree = p.degree_in("x").unwrap_or(0);
    let x = MPoly::var(&vars, "x");
    let ct = &speed.as_poly(&vars) * &MPoly::var(&vars, "t");
    let ct = ct.scale(&sign.apply(&CoefExpr::one()));
    let mut powers = vec![MPoly::one(&vars)];
    for k in 0..degree {
        let factor = &x + &ct.scale(&CoefExpr::q_pow(k as i64));
        let next = &powers[k as usize] * &factor;
        powers.push(next);
    }
    let mut out = MPoly::zero(&vars);
    for (e, c) in p.terms() {
        let mut rest = e.clone();
        rest[xi] = 0;
        let other = MPoly::monomial(&src_vars, rest, c.clone()).embed(&vars);
        out = &out + &(&other * &powers[e[xi] as usize]);
    }
    Ok(out)
}

/// `((D_{1/q}^t)² − c²(D_q^x)²) u`.
pub fn wave_operator(body: &MPoly, speed: &Speed) -> MPoly {
    let vars: Vec<&str> = body.vars().iter().map(String::as_str).collect();
    let tt = q_derivative(&q_derivative(body, "t", QBase::INV_Q), "t", QBase::INV_Q);
    let xx = q_derivative(&q_derivative(body, "x", QBase::Q), "x", QBase::Q);
    let c = speed.as_poly(&vars);
    &tt - &(&(&c * &c) * &xx)
}

/// The wave residual of a solution; for series bodies only monomials of
/// total `(x, t)` degree at most `order − 2` are kept.
pub fn qwave_operator(u: &WaveSolution) -> MPoly {
    let r = wave_operator(&u.body, &u.speed);
    match u.order {
        None => r,
        Some(n) if n >= 2 => r.truncate_degree(&["x", "t"], n - 2),
        Some(_) => MPoly::from_var_names(r.vars().to_vec()),
    }
}

/// `(D_{1/q}^t + σ c D_q^x) (x ± ct)_q^n` for the operator sign `σ`.
pub fn one_directional_residual(n: u32, binomial: Sign, operator: Sign, speed: &Speed) -> MPoly {
    let vars = speed.vars();
    let mut x_n = MPoly::zero(&["x"]);
    x_n.add_term(vec![n], CoefExpr::one());
    let b = q_binomial_substitute(&x_n, binomial, speed).expect("x-only input");
    let dt = q_derivative(&b, "t", QBase::INV_Q);
    let dx = &speed.as_poly(&vars) * &q_derivative(&b, "x", QBase::Q);
    match operator {
        Sign::Plus => &dt + &dx,
        Sign::Minus => &dt - &dx,
    }
}

/// Checks `(D_{1/q}^t ∓ c D_q^x)(x ± ct)_q^n = 0` for the matched operator
/// and returns the verdict together with the mismatched residual.
pub fn one_directional_check(
    n: u32,
    sign: Sign,
    speed: &Speed,
) -> (crate::identities::Verdict, MPoly) {
    let start = std::time::Instant::now();
    let matched = one_directional_residual(n, sign, sign.flip(), speed);
    let mismatched = one_directional_residual(n, sign, sign, speed);
    let ok = matched.is_zero();
    let verdict = crate::identities::Verdict {
        id: "one-directional".to_string(),
        range: format!("n={n}, sign={sign:?}"),
        status: if ok {
            crate::identities::Status::Verified
        } else {
            crate::identities::Status::Failed
        },
        failed_at: (!ok).then(|| format!("n={n}")),
        residual: (!ok).then_some(matched),
        elapsed: start.elapsed(),
    };
    (verdict, mismatched)
}

/// `p(x, t, …)` at `t = 0`, over the remaining variables.
pub fn at_t_zero(p: &MPoly) -> MPoly {
    let ti = p.index_of("t");
    let vars: Vec<&str> = p
        .vars()
        .iter()
        .map(String::as_str)
        .filter(|v| *v != "t")
        .collect();
    let mut out = MPoly::zero(&vars);
    for (e, c) in p.terms() {
        if e[ti] == 0 {
            let mut e2 = e.clone();
            e2.remove(ti);
            out.add_term(e2, c.clone());
        }
    }
    out
}

/// Divides by the variable `var`; `None` if some term does not contain it.
fn divide_by_var(p: &MPoly, var: &str) -> Option<MPoly> {
    let i = p.index_of(var);
    if p.terms().any(|(e, _)| e[i] == 0) {
        return None;
    }
    Some(p.map_terms(|e, c| {
        let mut e2 = e.to_vec();
        e2[i] -= 1;
        Some((e2, c.clone()))
    }))
}

fn profile_vars(speed: &Speed) -> Vec<&'static str> {
    match speed {
        Speed::Symbolic => vec!["x", "c"],
        Speed::Value(_) => vec!["x"],
    }
}

/// `u = ½[f(x+ct)_q + f(x−ct)_q] + (1/2c)[G(x+ct)_q − G(x−ct)_q]` with `G`
/// the Jackson antiderivative of `g`.
///
/// The result is checked before it is returned: `u(x,0) = f`,
/// `D_{1/q}^t u(x,0) = g` and a vanishing wave residual (degree-filtered for
/// series data).
pub fn dalembert_solve(data: &InitialData, speed: &Speed) -> Result<WaveSolution> {
    if speed.is_zero() {
        return Err(Error::InvalidArgument(
            "wave speed c must be nonzero".into(),
        ));
    }
    let order = match (data.f.order(), data.g.order()) {
        (None, None) => None,
        (a, b) => Some(a.unwrap_or(u32::MAX).min(b.unwrap_or(u32::MAX))),
    };
    let f = data.f.poly();
    let g = data.g.poly();
    let half = CoefExpr::from_ratio(1, 2);
    let even = (&q_binomial_substitute(f, Sign::Plus, speed)?
        + &q_binomial_substitute(f, Sign::Minus, speed)?)
        .scale(&half);
    let anti = jackson_antiderivative(g, "x");
    let odd = &q_binomial_substitute(&anti, Sign::Plus, speed)?
        - &q_binomial_substitute(&anti, Sign::Minus, speed)?;
    let odd = match speed {
        Speed::Value(c) => odd.scale(&(&half * &c.inv()?)),
        Speed::Symbolic => divide_by_var(&odd, "c")
            .ok_or_else(|| Error::Postcondition("integral term is not divisible by c".into()))?
            .scale(&half),
    };
    let mut body = &even + &odd;
    if let Some(n) = order {
        body = body.truncate_degree(&["x", "t"], n);
    }
    let u = WaveSolution {
        body,
        speed: speed.clone(),
        order,
        provenance: Provenance::Dalembert,
    };
    check_initial_conditions(&u, f, g)?;
    if !qwave_operator(&u).is_zero() {
        return Err(Error::Postcondition("nonzero q-wave residual".into()));
    }
    Ok(u)
}

/// Verifies `u(x,0) = f` and `D_{1/q}^t u(x,0) = g`, through degree
/// `order` and `order − 1` respectively for series solutions.
pub fn check_initial_conditions(u: &WaveSolution, f: &MPoly, g: &MPoly) -> Result<()> {
    let pvars = profile_vars(&u.speed);
    let f = f.embed(&pvars);
    let g = g.embed(&pvars);
    let u0 = at_t_zero(&u.body);
    let v0 = at_t_zero(&q_derivative(&u.body, "t", QBase::INV_Q));
    let (df, dg) = match u.order {
        None => (&u0 - &f, &v0 - &g),
        Some(n) => (
            (&u0 - &f).truncate_degree(&["x"], n),
            (&v0 - &g).truncate_degree(&["x"], n.saturating_sub(1)),
        ),
    };
    if !df.is_zero() {
        return Err(Error::Postcondition(format!(
            "u(x,0) differs from f by {df}"
        )));
    }
    if !dg.is_zero() {
        return Err(Error::Postcondition(format!(
            "D_t u(x,0) differs from g by {dg}"
        )));
    }
    Ok(())
}

/// Named series profiles.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NamedWave {
    /// `Σ (-1)^n x^{2n} / n!` with classical factorials.
    QGaussian,
    CosQ,
    SinQ,
}

impl FromStr for NamedWave {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q-gaussian" => Ok(NamedWave::QGaussian),
            "cos_q" | "cos-q" => Ok(NamedWave::CosQ),
            "sin_q" | "sin-q" => Ok(NamedWave::SinQ),
            _ => Err(Error::InvalidArgument(format!(
                "unknown wave profile `{s}`"
            ))),
        }
    }
}

impl NamedWave {
    /// The profile in `x`, truncated at degree `order`.
    pub fn series(self, order: u32) -> TruncSeries {
        match self {
            NamedWave::CosQ => q_trig_series(TrigKind::Cos, order).with_var("x"),
            NamedWave::SinQ => q_trig_series(TrigKind::Sin, order).with_var("x"),
            NamedWave::QGaussian => {
                let mut factorial = 1i64;
                let coeffs = (0..=order)
                    .map(|k| {
                        if k % 2 == 1 {
                            return CoefExpr::zero();
                        }
                        let n = k / 2;
                        if n > 0 {
                            factorial =
                                factorial.checked_mul(n as i64).expect("factorial overflow");
                        }
                        let c = CoefExpr::from_ratio(1, factorial);
                        if n % 2 == 1 {
                            -c
                        } else {
                            c
                        }
                    })
                    .collect();
                TruncSeries::new("x", coeffs)
            }
        }
    }
}

/// A named profile carried along `(x ± ct)_q`, termwise.
pub fn named_wave(name: NamedWave, sign: Sign, speed: &Speed, order: u32) -> Result<WaveSolution> {
    let profile = Profile::from_series(&name.series(order));
    let body = q_binomial_substitute(profile.poly(), sign, speed)?;
    Ok(WaveSolution {
        body,
        speed: speed.clone(),
        order: Some(order),
        provenance: Provenance::NamedSeries,
    })
}

/// `(x ± ct)_q^n` as a solution.
pub fn direct_binomial(n: u32, sign: Sign, speed: &Speed) -> WaveSolution {
    let mut x_n = MPoly::zero(&["x"]);
    x_n.add_term(vec![n], CoefExpr::one());
    WaveSolution {
        body: q_binomial_substitute(&x_n, sign, speed).expect("x-only input"),
        speed: speed.clone(),
        order: None,
        provenance: Provenance::DirectBinomial,
    }
}

/// Inclusive grid `start, start + step, …, ≤ end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

/// Largest number of points accepted per axis.
const MAX_GRID_POINTS: usize = 10_000_000;

impl GridRange {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && step.is_finite()) {
            return Err(Error::InvalidArgument("grid bounds must be finite".into()));
        }
        if step <= 0.0 || end < start {
            return Err(Error::InvalidArgument(format!(
                "grid needs start <= end and step > 0, got {start}:{end}:{step}"
            )));
        }
        let g = GridRange { start, end, step };
        if g.len() > MAX_GRID_POINTS {
            return Err(Error::InvalidArgument("grid has too many points".into()));
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

impl FromStr for GridRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let [a, b, h] = parts.as_slice() else {
            return Err(Error::Parse(format!("grid `{s}` is not start:end:step")));
        };
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{t}` in grid `{s}`")))
        };
        GridRange::new(num(a)?, num(b)?, num(h)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleRow {
    pub x: f64,
    pub t: f64,
    pub u: f64,
    pub valid: bool,
}

struct NumericTerm {
    x: i32,
    t: i32,
    c: i32,
    re: f64,
    im: f64,
    top: bool,
}

/// Evaluates `u` on the grid, x-major. Rows of series bodies whose top-degree
/// terms are not negligible, or whose imaginary part is not negligible, are
/// flagged invalid.
pub fn sample_grid(
    u: &WaveSolution,
    q_value: f64,
    c_value: f64,
    x_grid: &GridRange,
    t_grid: &GridRange,
) -> Result<Vec<SampleRow>> {
    if !(q_value > 0.0 && q_value.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "q must be positive, got {q_value}"
        )));
    }
    let s = q_value.sqrt();
    if let Speed::Value(c) = &u.speed {
        let (re, im) = c.eval_f64(s);
        if im.abs() > 1e-12 || (re - c_value).abs() > 1e-12 * re.abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "solution was built for c = {re}, sampling asked for c = {c_value}"
            )));
        }
    }
    let xi = u.body.index_of("x");
    let ti = u.body.index_of("t");
    let ci = u.body.var_index("c");
    let terms: Vec<NumericTerm> = u
        .body
        .terms()
        .map(|(e, coef)| {
            let (re, im) = coef.eval_f64(s);
            NumericTerm {
                x: e[xi] as i32,
                t: e[ti] as i32,
                c: ci.map_or(0, |i| e[i] as i32),
                re,
                im,
                top: u.order.is_some_and(|n| e[xi] + e[ti] == n),
            }
        })
        .collect();
    let ts = t_grid.points();
    let rows: Vec<Vec<SampleRow>> = x_grid
        .points()
        .into_par_iter()
        .map(|x| {
            ts.iter()
                .map(|&t| {
                    let (mut re, mut im, mut top) = (0.0, 0.0, 0.0f64);
                    for term in &terms {
                        let m = x.powi(term.x) * t.powi(term.t) * c_value.powi(term.c);
                        re += term.re * m;
                        im += term.im * m;
                        if term.top {
                            top += (term.re * m).abs() + (term.im * m).abs();
                        }
                    }
                    let scale = 1.0 + re.abs();
                    let valid = re.is_finite() && im.abs() <= 1e-9 * scale && top <= 1e-8 * scale;
                    SampleRow { x, t, u: re, valid }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Writes rows as CSV with header `x,t,u,valid`.
pub fn write_csv<W: Write>(rows: &[SampleRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "x,t,u,valid")?;
    for r in rows {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{}", r.x, r.t, r.u, r.valid)?;
    }
    Ok(())
}

/// Grid intervals `[x_k, x_{k+1}]` on which the samples change sign or hit zero.
pub fn zero_brackets(xs: &[f64], us: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for k in 0..xs.len().saturating_sub(1) {
        let (a, b) = (us[k], us[k + 1]);
        // an exact zero sample closes the interval to its left
        if a * b < 0.0 || b == 0.0 || (k == 0 && a == 0.0) {
            out.push((xs[k], xs[k + 1]));
        }
    }
    out
}

/// Trapezoid integral of the samples between two zero crossings, with the
/// endpoints located by linear interpolation.
pub fn trapezoid_between(xs: &[f64], us: &[f64], first: (f64, f64), second: (f64, f64)) -> f64 {
    let root = |(a, b): (f64, f64)| {
        let i = xs
            .iter()
            .position(|&x| x == a)
            .expect("bracket from the grid");
        let (ua, ub) = (us[i], us[i + 1]);
        if ub == 0.0 {
            b
        } else if ua == ub {
            a
        } else {
            a + (b - a) * ua / (ua - ub)
        }
    };
    let (r0, r1) = (root(first), root(second));
    let mut pts: Vec<(f64, f64)> = vec![(r0, 0.0)];
    pts.extend(
        xs.iter()
            .zip(us)
            .filter(|(x, _)| **x > r0 && **x < r1)
            .map(|(x, u)| (*x, *u)),
    );
    pts.push((r1, 0.0));
    pts.windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum()
}

/// Zeros `q^k c t` (`k < n`) of `(x − ct)_q^n` for numeric `q`, `c`, `t`.
pub fn traveling_zeros(n: u32, q: f64, c: f64, t: f64) -> Vec<f64> {
    (0..n as i32).map(|k| q.powi(k) * c * t).collect()
}
