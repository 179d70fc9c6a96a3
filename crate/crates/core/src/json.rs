//! JSON forms of coefficients, polynomials, wave solutions and verdicts.
//!
//! A coefficient is `{"num": [...], "den": [...]}` where each list holds
//! Laurent terms `{"s": exponent, "re": "p/q", "im": "p/q"}`. A polynomial is
//! `{"vars": [...], "terms": [{"deg": [...], "coef": ...}]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coeff::CoefExpr;
use crate::error::{Error, Result};
use crate::gaussian::{format_ratio, parse_ratio, GaussianRational};
use crate::identities::Verdict;
use crate::laurent::LaurentPoly;
use crate::mpoly::MPoly;
use crate::qwave::{Provenance, Speed, WaveSolution};

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct TermJson {
    s: i64,
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct CoefJson {
    num: Vec<TermJson>,
    den: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct MonomialJson {
    deg: Vec<u32>,
    coef: CoefJson,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct MPolyJson {
    vars: Vec<String>,
    terms: Vec<MonomialJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(untagged)]
enum SpeedJson {
    Named(String),
    Value(CoefJson),
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct WaveJson {
    vars: Vec<String>,
    terms: Vec<MonomialJson>,
    c: SpeedJson,
    order: Option<u32>,
    provenance: String,
}

#[derive(Serialize, Debug)]
struct VerdictJson<'a> {
    id: &'a str,
    range: &'a str,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    at: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<MPolyJson>,
    ms: f64,
}

fn laurent_to_json(p: &LaurentPoly) -> Vec<TermJson> {
    p.terms()
        .map(|(s, c)| TermJson {
            s,
            re: format_ratio(c.re()),
            im: format_ratio(c.im()),
        })
        .collect()
}

fn laurent_from_json(terms: &[TermJson]) -> Result<LaurentPoly> {
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        parsed.push((
            t.s,
            GaussianRational::new(parse_ratio(&t.re)?, parse_ratio(&t.im)?),
        ));
    }
    Ok(LaurentPoly::from_terms(parsed))
}

fn coef_dto(c: &CoefExpr) -> CoefJson {
    CoefJson {
        num: laurent_to_json(c.num()),
        den: laurent_to_json(&c.den()),
    }
}

fn coef_from_dto(c: &CoefJson) -> Result<CoefExpr> {
    let num = laurent_from_json(&c.num)?;
    let den = laurent_from_json(&c.den)?;
    if den.is_zero() {
        return Err(Error::Parse("coefficient with zero denominator".into()));
    }
    CoefExpr::from_parts(num, &den)
}

fn terms_dto(p: &MPoly) -> Vec<MonomialJson> {
    p.terms()
        .map(|(e, c)| MonomialJson {
            deg: e.clone(),
            coef: coef_dto(c),
        })
        .collect()
}

fn mpoly_dto(p: &MPoly) -> MPolyJson {
    MPolyJson {
        vars: p.vars().to_vec(),
        terms: terms_dto(p),
    }
}

fn mpoly_from_parts(vars: &[String], terms: &[MonomialJson]) -> Result<MPoly> {
    let mut seen = std::collections::HashSet::new();
    if !vars.iter().all(|v| seen.insert(v.as_str())) {
        return Err(Error::Parse("repeated variable name".into()));
    }
    let mut p = MPoly::from_var_names(vars.to_vec());
    for t in terms {
        if t.deg.len() != vars.len() {
            return Err(Error::Parse(format!(
                "term has {} exponents for {} variables",
                t.deg.len(),
                vars.len()
            )));
        }
        p.add_term(t.deg.clone(), coef_from_dto(&t.coef)?);
    }
    Ok(p)
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn coef_to_json(c: &CoefExpr) -> Value {
    serde_json::to_value(coef_dto(c)).expect("serializable")
}

pub fn coef_from_json(v: &Value) -> Result<CoefExpr> {
    let dto: CoefJson = serde_json::from_value(v.clone()).map_err(parse_err)?;
    coef_from_dto(&dto)
}

pub fn mpoly_to_json(p: &MPoly) -> Value {
    serde_json::to_value(mpoly_dto(p)).expect("serializable")
}

pub fn mpoly_from_json(v: &Value) -> Result<MPoly> {
    let dto: MPolyJson = serde_json::from_value(v.clone()).map_err(parse_err)?;
    mpoly_from_parts(&dto.vars, &dto.terms)
}

pub fn wave_to_json(u: &WaveSolution) -> Value {
    let dto = WaveJson {
        vars: u.body.vars().to_vec(),
        terms: terms_dto(&u.body),
        c: match &u.speed {
            Speed::Symbolic => SpeedJson::Named("symbolic".into()),
            Speed::Value(c) => SpeedJson::Value(coef_dto(c)),
        },
        order: u.order,
        provenance: u.provenance.as_str().into(),
    };
    serde_json::to_value(dto).expect("serializable")
}

pub fn wave_from_json(v: &Value) -> Result<WaveSolution> {
    let dto: WaveJson = serde_json::from_value(v.clone()).map_err(parse_err)?;
    let body = mpoly_from_parts(&dto.vars, &dto.terms)?;
    let speed = match &dto.c {
        SpeedJson::Named(s) if s == "symbolic" => Speed::Symbolic,
        SpeedJson::Named(s) => return Err(Error::Parse(format!("unknown speed `{s}`"))),
        SpeedJson::Value(c) => Speed::Value(coef_from_dto(c)?),
    };
    let expected: Vec<&str> = speed.vars();
    if dto.vars != expected {
        return Err(Error::Parse(format!(
            "wave solution variables must be {expected:?}, got {:?}",
            dto.vars
        )));
    }
    Ok(WaveSolution {
        body,
        speed,
        order: dto.order,
        provenance: dto.provenance.parse::<Provenance>()?,
    })
}

pub fn verdict_to_json(v: &Verdict) -> Value {
    let dto = VerdictJson {
        id: &v.id,
        range: &v.range,
        status: v.status.to_string(),
        at: v.failed_at.as_deref(),
        residual: v.residual.as_ref().map(mpoly_dto),
        ms: v.elapsed.as_secs_f64() * 1000.0,
    };
    serde_json::to_value(dto).expect("serializable")
}
