//! Text and JSON encodings of the core types.
//!
//! The text formats are line-oriented and bit-exact under round-trip:
//! rationals print as `p/q` with `q > 1` and as a bare integer otherwise;
//! parsers accept both. JSON mirrors use string-encoded rationals and
//! deterministic (sorted) key order.

use mfdr_core::cohomology::CohClass;
use mfdr_core::connection::{AlgSection, Frame, QSection};
use mfdr_core::periods::{ComplexPoly, PrecCtx};
use mfdr_core::rat::Rat;
use mfdr_core::ring::{AlgForm, UvPoly};
use mfdr_core::series::QSeries;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug)]
pub struct ParseError(pub String);

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

fn err<T>(msg: impl Into<String>) -> PResult<T> {
    Err(ParseError(msg.into()))
}

fn parse_rat(s: &str) -> PResult<Rat> {
    Rat::from_str(s.trim()).map_err(|e| ParseError(format!("bad rational '{s}': {e}")))
}

// ---------------------------------------------------------------- QSeries

pub fn series_to_text(s: &QSeries) -> String {
    let mut out = format!("valuation={} trunc={}\n", s.valuation(), s.trunc());
    for (m, c) in s.terms() {
        let _ = writeln!(out, "{m}: {c}");
    }
    out
}

pub fn series_from_text(text: &str) -> PResult<QSeries> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = match lines.next() {
        Some(h) => h.trim(),
        None => return err("empty series input"),
    };
    let mut valuation: Option<i64> = None;
    let mut trunc: Option<i64> = None;
    for part in header.split_whitespace() {
        if let Some(v) = part.strip_prefix("valuation=") {
            valuation = Some(v.parse().map_err(|e| ParseError(format!("bad valuation: {e}")))?);
        } else if let Some(v) = part.strip_prefix("trunc=") {
            trunc = Some(v.parse().map_err(|e| ParseError(format!("bad trunc: {e}")))?);
        } else {
            return err(format!("unexpected header field '{part}'"));
        }
    }
    let (Some(_), Some(trunc)) = (valuation, trunc) else {
        return err("header must be 'valuation=<v> trunc=<N>'");
    };
    let mut terms = Vec::new();
    for line in lines {
        let Some((m, c)) = line.split_once(':') else {
            return err(format!("bad term line '{line}', expected 'm: p/q'"));
        };
        let m: i64 = m.trim().parse().map_err(|e| ParseError(format!("bad exponent: {e}")))?;
        terms.push((m, parse_rat(c)?));
    }
    QSeries::from_terms(trunc, terms).map_err(|e| ParseError(e.to_string()))
}

pub fn series_to_json(s: &QSeries) -> Value {
    let mut coeffs = Map::new();
    for (m, c) in s.terms() {
        coeffs.insert(m.to_string(), Value::String(c.to_string()));
    }
    json!({
        "valuation": s.valuation(),
        "trunc": s.trunc(),
        "coeffs": coeffs,
    })
}

pub fn series_from_json(v: &Value) -> PResult<QSeries> {
    let trunc = v
        .get("trunc")
        .and_then(Value::as_i64)
        .ok_or_else(|| ParseError("missing 'trunc'".into()))?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_object)
        .ok_or_else(|| ParseError("missing 'coeffs' object".into()))?;
    let mut terms = Vec::new();
    for (k, val) in coeffs {
        let m: i64 = k.parse().map_err(|e| ParseError(format!("bad exponent '{k}': {e}")))?;
        let c = val
            .as_str()
            .ok_or_else(|| ParseError("coefficient must be a string".into()))?;
        terms.push((m, parse_rat(c)?));
    }
    QSeries::from_terms(trunc, terms).map_err(|e| ParseError(e.to_string()))
}

// ---------------------------------------------------------------- AlgForm

pub fn alg_to_text(f: &AlgForm) -> String {
    let mut out = format!("weight={} denom_pow={}; ", f.weight(), f.den_pow());
    if f.is_zero() {
        out.push('0');
        return out;
    }
    let mut terms: Vec<_> = f.num().terms().collect();
    terms.sort_by(|a, b| b.0.cmp(a.0));
    let mut first = true;
    for (&(a, b), c) in terms {
        if !first {
            out.push_str(" + ");
        }
        first = false;
        let _ = write!(out, "{c}*u^{a}*v^{b}");
    }
    out
}

pub fn alg_from_text(text: &str) -> PResult<AlgForm> {
    let text = text.trim();
    let Some((header, body)) = text.split_once(';') else {
        return err("expected 'weight=<m> denom_pow=<c>; <terms>'");
    };
    let mut weight: Option<i64> = None;
    let mut denom_pow: Option<u32> = None;
    for part in header.split_whitespace() {
        if let Some(v) = part.strip_prefix("weight=") {
            weight = Some(v.parse().map_err(|e| ParseError(format!("bad weight: {e}")))?);
        } else if let Some(v) = part.strip_prefix("denom_pow=") {
            denom_pow = Some(v.parse().map_err(|e| ParseError(format!("bad denom_pow: {e}")))?);
        } else {
            return err(format!("unexpected header field '{part}'"));
        }
    }
    let (Some(weight), Some(denom_pow)) = (weight, denom_pow) else {
        return err("header must contain weight= and denom_pow=");
    };
    let mut poly = UvPoly::zero();
    for term in body.split('+') {
        let term = term.trim();
        if term.is_empty() || term == "0" {
            continue;
        }
        // <coeff>*u^<a>*v^<b>, with the variable parts optional
        let mut coeff = Rat::from_integer(1.into());
        let mut a = 0u32;
        let mut b = 0u32;
        for factor in term.split('*') {
            let factor = factor.trim();
            if let Some(e) = factor.strip_prefix("u^") {
                a = e.parse().map_err(|e| ParseError(format!("bad u exponent: {e}")))?;
            } else if let Some(e) = factor.strip_prefix("v^") {
                b = e.parse().map_err(|e| ParseError(format!("bad v exponent: {e}")))?;
            } else if factor == "u" {
                a = 1;
            } else if factor == "v" {
                b = 1;
            } else {
                coeff = parse_rat(factor)?;
            }
        }
        poly = poly.add(&UvPoly::monomial(a, b, coeff));
    }
    AlgForm::new(poly, denom_pow, weight).map_err(|e| ParseError(e.to_string()))
}

pub fn alg_to_json(f: &AlgForm) -> Value {
    let mut coeffs = Map::new();
    for (&(a, b), c) in f.num().terms() {
        coeffs.insert(format!("{a},{b}"), Value::String(c.to_string()));
    }
    json!({
        "weight": f.weight(),
        "denom_pow": f.den_pow(),
        "coeffs": coeffs,
    })
}

pub fn alg_from_json(v: &Value) -> PResult<AlgForm> {
    let weight = v
        .get("weight")
        .and_then(Value::as_i64)
        .ok_or_else(|| ParseError("missing 'weight'".into()))?;
    let denom_pow = v
        .get("denom_pow")
        .and_then(Value::as_u64)
        .ok_or_else(|| ParseError("missing 'denom_pow'".into()))? as u32;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_object)
        .ok_or_else(|| ParseError("missing 'coeffs' object".into()))?;
    let mut poly = UvPoly::zero();
    for (k, val) in coeffs {
        let Some((a, b)) = k.split_once(',') else {
            return err(format!("bad monomial key '{k}'"));
        };
        let a: u32 = a.trim().parse().map_err(|e| ParseError(format!("bad exponent: {e}")))?;
        let b: u32 = b.trim().parse().map_err(|e| ParseError(format!("bad exponent: {e}")))?;
        let c = val
            .as_str()
            .ok_or_else(|| ParseError("coefficient must be a string".into()))?;
        poly = poly.add(&UvPoly::monomial(a, b, parse_rat(c)?));
    }
    AlgForm::new(poly, denom_pow, weight).map_err(|e| ParseError(e.to_string()))
}

// ---------------------------------------------------------------- sections

pub fn alg_section_to_json(s: &AlgSection) -> Value {
    let n = s.degree();
    let mut coeffs = Map::new();
    for j in 0..=n {
        coeffs.insert(format!("{j},{}", n - j), alg_to_json(s.coeff(j)));
    }
    json!({
        "degree": n,
        "frame": "ST",
        "base_weight": s.base_weight(),
        "coeffs": coeffs,
    })
}

pub fn q_section_to_json(s: &QSection) -> Value {
    let n = s.degree();
    let frame = match s.frame() {
        Frame::St => "ST",
        Frame::At => "AT",
    };
    let mut coeffs = Map::new();
    for j in 0..=n {
        coeffs.insert(format!("{j},{}", n - j), series_to_json(s.coeff(j)));
    }
    json!({
        "degree": n,
        "frame": frame,
        "base_weight": s.base_weight(),
        "coeffs": coeffs,
    })
}

// ---------------------------------------------------------------- classes

pub fn class_to_json(c: &CohClass) -> Value {
    let mut coeffs = Map::new();
    for (m, x) in c.rep().terms() {
        coeffs.insert(m.to_string(), Value::String(x.to_string()));
    }
    json!({
        "weight": c.weight(),
        "ell": c.ell(),
        "trunc": c.rep().trunc(),
        "coeffs": coeffs,
        "certificate": c.certificate().map(alg_to_json).unwrap_or(Value::Null),
    })
}

pub fn class_to_text(c: &CohClass) -> String {
    let mut out = format!("weight={} ell={}\n", c.weight(), c.ell());
    out.push_str(&series_to_text(c.rep()));
    if let Some(g) = c.certificate() {
        let _ = writeln!(out, "certificate: {}", alg_to_text(g));
    }
    out
}

// ---------------------------------------------------------------- numerics

pub fn complex_poly_to_json(p: &ComplexPoly, ctx: &mut PrecCtx) -> Value {
    let digits = ctx.digits();
    let coeffs: Vec<Value> = p
        .coeffs()
        .iter()
        .map(|c| {
            json!({
                "re": ctx.decimal_string(&c.re, digits).unwrap_or_else(|_| "nan".into()),
                "im": ctx.decimal_string(&c.im, digits).unwrap_or_else(|_| "nan".into()),
            })
        })
        .collect();
    json!({
        "degree": p.degree(),
        "prec": digits,
        "coeffs": coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mfdr_core::rat::{rat, rat_i};
    use mfdr_core::series::delta_series_product;

    #[test]
    fn series_text_round_trip_is_bit_exact() {
        let d = delta_series_product(7).unwrap().invert().unwrap();
        let text = series_to_text(&d);
        let back = series_from_text(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(series_to_text(&back), text);
    }

    #[test]
    fn series_json_round_trip() {
        let s = QSeries::from_terms(9, [(-2, rat(3, 4)), (0, rat_i(-7)), (5, rat(1, 3))]).unwrap();
        let v = series_to_json(&s);
        let back = series_from_json(&v).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn series_text_accepts_bare_integers() {
        let text = "valuation=0 trunc=3\n0: 5\n1: -2/3\n";
        let s = series_from_text(text).unwrap();
        assert_eq!(s.coeff(0).unwrap(), rat_i(5));
        assert_eq!(s.coeff(1).unwrap(), rat(-2, 3));
    }

    #[test]
    fn alg_text_round_trip() {
        let f = AlgForm::delta().mul(&AlgForm::delta_inv()).mul(&AlgForm::v()).add(&AlgForm::v()).unwrap();
        let text = alg_to_text(&f);
        let back = alg_from_text(&text).unwrap();
        assert_eq!(back, f);
        let zero = AlgForm::zero(8);
        assert_eq!(alg_from_text(&alg_to_text(&zero)).unwrap(), zero);
    }

    #[test]
    fn alg_json_round_trip() {
        let f = AlgForm::j_function();
        let back = alg_from_json(&alg_to_json(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn alg_text_shape() {
        assert_eq!(alg_to_text(&AlgForm::delta()), "weight=12 denom_pow=0; 1*u^3*v^0 + -27*u^0*v^2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(series_from_text("nonsense").is_err());
        assert!(series_from_text("valuation=0 trunc=2\nx: 3\n").is_err());
        assert!(alg_from_text("weight=4; u").is_err());
    }
}
