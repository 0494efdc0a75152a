use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::Value;

use super::{ExactSeries, GaussianRational, PowerSeries, SeriesError};

fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt, SeriesError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| SeriesError::Json(format!("not an integer: {n}"))),
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|e| SeriesError::Json(format!("bad integer {s:?}: {e}"))),
        other => Err(SeriesError::Json(format!("expected integer, got {other}"))),
    }
}

/// `[[re_num, re_den, im_num, im_den], ...]`; integers that overflow `i64`
/// are written as decimal strings.
pub fn exact_series_to_json(s: &ExactSeries) -> Value {
    Value::Array(
        s.coeffs()
            .iter()
            .map(|c| {
                Value::Array(vec![
                    int_to_json(c.re.numer()),
                    int_to_json(c.re.denom()),
                    int_to_json(c.im.numer()),
                    int_to_json(c.im.denom()),
                ])
            })
            .collect(),
    )
}

pub fn exact_series_from_json(v: &Value) -> Result<ExactSeries, SeriesError> {
    let arr = v
        .as_array()
        .ok_or_else(|| SeriesError::Json("expected an array".into()))?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for entry in arr {
        let quad = entry
            .as_array()
            .filter(|q| q.len() == 4)
            .ok_or_else(|| SeriesError::Json(format!("expected 4 integers, got {entry}")))?;
        let ints = quad.iter().map(int_from_json).collect::<Result<Vec<_>, _>>()?;
        if ints[1] == BigInt::from(0) || ints[3] == BigInt::from(0) {
            return Err(SeriesError::Json("zero denominator".into()));
        }
        coeffs.push(GaussianRational::new(
            BigRational::new(ints[0].clone(), ints[1].clone()),
            BigRational::new(ints[2].clone(), ints[3].clone()),
        ));
    }
    Ok(PowerSeries::polynomial(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let big = BigInt::from(i64::MAX) * 7;
        let s = PowerSeries::polynomial(vec![
            GaussianRational::from_ints(1, 2, -3, 4),
            GaussianRational::new(BigRational::new(big, 3.into()), BigRational::from_integer(0.into())),
        ]);
        let v = exact_series_to_json(&s);
        assert_eq!(v[0], serde_json::json!([1, 2, -3, 4]));
        assert!(v[1][0].is_string());
        assert_eq!(exact_series_from_json(&v).unwrap(), s);
    }
}
