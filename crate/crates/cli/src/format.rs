//! Polynomial input (text or JSON) and root output.

use std::str::FromStr;

use knomial_core::{
    clear_denominators, parse_rational_terms, Dyadic, IsolatedRoot, RationalTerm, SparsePolynomial, Stats,
    VerifyReport,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Fractional digits of the `approx` field.
pub const APPROX_DIGITS: usize = 15;

#[derive(Deserialize)]
struct JsonPoly {
    terms: Vec<(u64, JsonCoeff)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonCoeff {
    Text(String),
    Int(i64),
}

/// Terms from either the text grammar or `{"terms": [[exp, "coeff"], ...]}`.
/// Coefficients may be rational in both forms.
pub fn parse_terms(input: &str) -> Result<Vec<RationalTerm>, CliError> {
    let s = input.trim();
    if !s.starts_with('{') {
        return Ok(parse_rational_terms(s)?);
    }
    let j: JsonPoly = serde_json::from_str(s).map_err(|e| CliError::Parse(format!("json: {e}")))?;
    j.terms
        .into_iter()
        .map(|(exp, c)| {
            let coeff = match c {
                JsonCoeff::Int(v) => BigRational::from_integer(BigInt::from(v)),
                JsonCoeff::Text(t) => parse_ratio(&t)?,
            };
            Ok(RationalTerm { exp, coeff })
        })
        .collect()
}

fn parse_ratio(t: &str) -> Result<BigRational, CliError> {
    let t = t.trim();
    let bad = || CliError::Parse(format!("json: bad coefficient {t:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(knomial_core::Error::ZeroDenominator.into());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// Integer polynomial with the same roots as the input.
pub fn parse_polynomial(input: &str) -> Result<SparsePolynomial, CliError> {
    let p = clear_denominators(&parse_terms(input)?)?;
    if p.is_zero() {
        return Err(knomial_core::Error::ZeroPolynomial.into());
    }
    Ok(p)
}

/// JSON form of a polynomial, integer coefficients as strings.
pub fn polynomial_json(p: &SparsePolynomial) -> String {
    let terms: Vec<(u64, String)> = p.terms().iter().map(|t| (t.exp, t.coeff.to_string())).collect();
    serde_json::json!({ "terms": terms }).to_string()
}

/// `"lo,hi"` with dyadic endpoints `m*2^e`.
pub fn parse_interval(s: &str) -> Result<(Dyadic, Dyadic), CliError> {
    let (a, b) = s.split_once(',').ok_or_else(|| CliError::Usage(format!("interval {s:?} is not \"lo,hi\"")))?;
    let lo: Dyadic = a.parse()?;
    let hi: Dyadic = b.parse()?;
    if lo >= hi {
        return Err(CliError::Usage(format!("interval {s:?} is empty")));
    }
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootJson {
    pub lo: String,
    pub hi: String,
    pub exact: bool,
    pub multiplicity: u32,
    /// Truncated decimal of the midpoint; not authoritative.
    pub approx: String,
}

impl RootJson {
    pub fn new(lo: &Dyadic, hi: &Dyadic, multiplicity: u32) -> Self {
        RootJson {
            lo: lo.to_string(),
            hi: hi.to_string(),
            exact: lo == hi,
            multiplicity,
            approx: Dyadic::midpoint(lo, hi).to_decimal(APPROX_DIGITS),
        }
    }

    pub fn bounds(&self) -> Result<(Dyadic, Dyadic), CliError> {
        Ok((self.lo.parse()?, self.hi.parse()?))
    }
}

impl From<&IsolatedRoot> for RootJson {
    fn from(r: &IsolatedRoot) -> Self {
        RootJson::new(&r.interval.lo, &r.interval.hi, r.multiplicity)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsJson {
    pub evaluations: u64,
    pub iterations: u64,
    pub max_precision_bits: u64,
}

impl From<&Stats> for StatsJson {
    fn from(s: &Stats) -> Self {
        StatsJson {
            evaluations: s.evaluations,
            iterations: s.refinement_iterations,
            max_precision_bits: s.max_precision_bits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsJson {
    pub roots: Vec<RootJson>,
    pub stats: StatsJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub count_match: bool,
    pub multiplicity_match: bool,
    pub containment: bool,
    pub disjointness: bool,
    pub diagnostics: Vec<String>,
}

impl From<&VerifyReport> for ReportJson {
    fn from(r: &VerifyReport) -> Self {
        ReportJson {
            count_match: r.count_match,
            multiplicity_match: r.multiplicity_match,
            containment: r.containment,
            disjointness: r.disjointness,
            diagnostics: r.diagnostics.clone(),
        }
    }
}

/// One line per root: approximation, multiplicity, exact interval.
pub fn roots_text(roots: &[RootJson]) -> String {
    let mut out = String::new();
    for r in roots {
        if r.exact {
            out.push_str(&format!("{}  m={}  exact {}\n", r.approx, r.multiplicity, r.lo));
        } else {
            out.push_str(&format!("{}  m={}  ({}, {})\n", r.approx, r.multiplicity, r.lo, r.hi));
        }
    }
    out
}

pub fn stats_text(s: &StatsJson) -> String {
    format!(
        "evaluations {}  iterations {}  max precision {} bits\n",
        s.evaluations, s.iterations, s.max_precision_bits
    )
}
