use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{SymbolError, SymbolSpec};
use crate::series::GaussianRational;

fn syntax(msg: impl Into<String>) -> SymbolError {
    SymbolError::Syntax(msg.into())
}

/// Reads `"3"`, `"-1/2"` or `"0.25"` exactly.
fn parse_rational(s: &str) -> Result<BigRational, SymbolError> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| syntax(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| syntax(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(syntax(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(BigRational::from_integer(n));
    }
    let x: f64 = s.parse().map_err(|_| syntax(format!("not a number: {s:?}")))?;
    BigRational::from_float(x).ok_or_else(|| syntax(format!("not finite: {s:?}")))
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

fn parse_real(s: &str) -> Result<f64, SymbolError> {
    parse_rational(s).map(|q| rational_to_f64(&q))
}

fn rational_from_json(v: &Value) -> Result<BigRational, SymbolError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigRational::from_integer(i.into())),
            None => parse_rational(&n.to_string()),
        },
        Value::String(s) => parse_rational(s),
        other => Err(syntax(format!("expected a number, got {other}"))),
    }
}

fn coeff_from_json(v: &Value) -> Result<GaussianRational, SymbolError> {
    match v {
        Value::Array(pair) if pair.len() == 2 => Ok(GaussianRational::new(
            rational_from_json(&pair[0])?,
            rational_from_json(&pair[1])?,
        )),
        other => Ok(GaussianRational::real(rational_from_json(other)?)),
    }
}

fn rational_to_json(q: &BigRational) -> Value {
    if q.is_integer() {
        if let Some(i) = q.numer().to_i64() {
            return json!(i);
        }
    }
    json!(format!("{}/{}", q.numer(), q.denom()))
}

fn f64_field(obj: &Value, key: &str) -> Result<f64, SymbolError> {
    match obj.get(key) {
        Some(Value::Number(n)) => n.as_f64().ok_or_else(|| syntax(format!("bad {key}"))),
        Some(Value::String(s)) => parse_real(s),
        _ => Err(syntax(format!("missing numeric field {key:?}"))),
    }
}

/// Builds a symbol from its JSON literal, e.g. `{"kind":"powlog","beta":0.5}`.
pub fn symbol_from_json(v: &Value) -> Result<SymbolSpec<f64>, SymbolError> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| syntax("missing \"kind\""))?;
    let base = match kind {
        "z" | "identity" => SymbolSpec::identity(),
        "loge" => SymbolSpec::LogE,
        "powlog" => SymbolSpec::PowOfLogE(f64_field(v, "beta")?),
        "poly" => {
            let coeffs = v
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| syntax("poly needs \"coeffs\""))?;
            SymbolSpec::polynomial(coeffs.iter().map(coeff_from_json).collect::<Result<_, _>>()?)
        }
        "blaschke" => match v.get("zeros") {
            None => SymbolSpec::default_blaschke(),
            Some(Value::Array(zs)) => {
                let zeros = zs
                    .iter()
                    .map(|z| match z {
                        Value::Array(p) if p.len() == 2 => Ok(Complex::new(
                            p[0].as_f64().ok_or_else(|| syntax("bad zero"))?,
                            p[1].as_f64().ok_or_else(|| syntax("bad zero"))?,
                        )),
                        Value::Number(n) => Ok(Complex::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
                        _ => Err(syntax("zeros are [re, im] pairs")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                SymbolSpec::blaschke(zeros)?
            }
            Some(_) => return Err(syntax("\"zeros\" must be an array")),
        },
        "power" => {
            let inner = v.get("inner").ok_or_else(|| syntax("power needs \"inner\""))?;
            symbol_from_json(inner)?.power(f64_field(v, "exponent")?)?
        }
        other => return Err(syntax(format!("unknown kind {other:?}"))),
    };
    match v.get("dilate") {
        None | Some(Value::Null) => Ok(base),
        Some(_) => base.dilate(f64_field(v, "dilate")?),
    }
}

pub fn symbol_to_json(g: &SymbolSpec<f64>) -> Value {
    match g {
        SymbolSpec::Polynomial(p) => json!({
            "kind": "poly",
            "coeffs": p
                .exact_coeffs()
                .iter()
                .map(|c| {
                    if c.im.is_zero() {
                        rational_to_json(&c.re)
                    } else {
                        json!([rational_to_json(&c.re), rational_to_json(&c.im)])
                    }
                })
                .collect::<Vec<_>>(),
        }),
        SymbolSpec::LogE => json!({"kind": "loge"}),
        SymbolSpec::PowOfLogE(b) => json!({"kind": "powlog", "beta": b}),
        SymbolSpec::Blaschke(z) => json!({
            "kind": "blaschke",
            "zeros": z.iter().map(|a| [a.re, a.im]).collect::<Vec<_>>(),
        }),
        SymbolSpec::Dilated(inner, r) => {
            let mut v = symbol_to_json(inner);
            v["dilate"] = json!(r);
            v
        }
        SymbolSpec::Power(inner, p) => json!({
            "kind": "power",
            "inner": symbol_to_json(inner),
            "exponent": p,
        }),
    }
}

pub(super) fn parse_symbol(s: &str) -> Result<SymbolSpec<f64>, SymbolError> {
    let s = s.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| syntax(e.to_string()))?;
        return symbol_from_json(&v);
    }
    if let Some((body, r)) = s.rsplit_once('@') {
        return parse_symbol(body)?.dilate(parse_real(r)?);
    }
    let (head, arg) = match s.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (s, None),
    };
    match (head, arg) {
        ("z", None) => Ok(SymbolSpec::identity()),
        ("loge", None) => Ok(SymbolSpec::LogE),
        ("powlog", Some(b)) => Ok(SymbolSpec::PowOfLogE(parse_real(b)?)),
        ("blaschke", None) => Ok(SymbolSpec::default_blaschke()),
        ("blaschke", Some(zs)) => SymbolSpec::blaschke(
            zs.split(',')
                .map(|x| parse_real(x).map(|x| Complex::new(x, 0.0)))
                .collect::<Result<_, _>>()?,
        ),
        ("poly", Some(cs)) => Ok(SymbolSpec::polynomial(
            cs.split(',')
                .map(|c| parse_rational(c).map(GaussianRational::real))
                .collect::<Result<_, _>>()?,
        )),
        ("power", Some(rest)) => {
            let (p, inner) = rest
                .split_once(':')
                .ok_or_else(|| syntax("power:<exponent>:<symbol>"))?;
            parse_symbol(inner)?.power(parse_real(p)?)
        }
        _ => Err(syntax(format!("unknown symbol {s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_forms() {
        let g: SymbolSpec<f64> = "powlog:7/12".parse().unwrap();
        assert_eq!(g, SymbolSpec::PowOfLogE(7.0 / 12.0));
        let g: SymbolSpec<f64> = "loge@0.99".parse().unwrap();
        assert_eq!(g, SymbolSpec::LogE.dilate(0.99).unwrap());
        let g: SymbolSpec<f64> = "poly:0,1,1/2".parse().unwrap();
        assert_eq!(g.exact_taylor().unwrap().coeffs().len(), 3);
        assert!("blaschke:1.5".parse::<SymbolSpec<f64>>().is_err());
        assert!("wat".parse::<SymbolSpec<f64>>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let gs = vec![
            SymbolSpec::PowOfLogE(0.5833333),
            SymbolSpec::default_blaschke(),
            SymbolSpec::polynomial(vec![
                GaussianRational::from_ints(1, 3, 0, 1),
                GaussianRational::from_ints(0, 1, 2, 1),
            ]),
            SymbolSpec::LogE.dilate(0.9).unwrap(),
            SymbolSpec::LogE.power(2.0).unwrap(),
        ];
        for g in gs {
            let v = symbol_to_json(&g);
            assert_eq!(symbol_from_json(&v).unwrap(), g, "{v}");
            assert_eq!(parse_symbol(&v.to_string()).unwrap(), g);
        }
    }

    #[test]
    fn literal_from_config() {
        let v: Value = serde_json::from_str(r#"{"kind":"blaschke","zeros":[[0.5,0.0]],"dilate":0.9}"#).unwrap();
        let g = symbol_from_json(&v).unwrap();
        assert!(matches!(g, SymbolSpec::Dilated(_, r) if r == 0.9));
    }
}
