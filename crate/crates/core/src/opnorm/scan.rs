use rayon::prelude::*;
use serde::Serialize;

use super::{op_lower_bound, OpNormError, TestFamily};
use crate::geometry::DiscGrid;
use crate::norms::{bloch_q_seminorm, bold_seminorm, default_a_grid};
use crate::scalar::{lit, to_f64, Real};
use crate::symbols::SymbolSpec;
use crate::wordalg::{OperatorExpr, Word};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub r: f64,
    pub opnorm_lb: f64,
    #[serde(rename = "seminorm_pow_N")]
    pub seminorm_pow_n: f64,
    pub ratio: f64,
}

/// Operator-norm lower bounds against seminorm powers along dilations `g_r`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanTable {
    pub word: String,
    pub symbol: String,
    pub p: f64,
    pub alpha: f64,
    pub s: f64,
    #[serde(rename = "N")]
    pub n_power: usize,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn radii(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.r).collect()
    }

    pub fn opnorm_column(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.opnorm_lb).collect()
    }

    pub fn seminorm_column(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.seminorm_pow_n).collect()
    }

    pub fn ratio_column(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.ratio).collect()
    }

    /// Plateau verdicts `(opnorm, seminorm)`; see [`plateaus`].
    pub fn plateau(&self) -> (Option<bool>, Option<bool>) {
        let r = self.radii();
        (
            plateaus(&r, &self.opnorm_column()),
            plateaus(&r, &self.seminorm_column()),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("in-memory CSV write");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("CSV is UTF-8")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("table serialises");
        let (op, sem) = self.plateau();
        v["plateau"] = serde_json::json!({ "opnorm_lb": op, "seminorm_pow_N": sem });
        v
    }
}

/// A column plateaus when its value at `r = 0.999` is below 1.5 times its
/// value at `r = 0.99`; `None` if either radius is missing.
pub fn plateaus(r: &[f64], values: &[f64]) -> Option<bool> {
    let at = |x: f64| r.iter().position(|&y| (y - x).abs() < 1e-9).map(|k| values[k]);
    Some(at(0.999)? < 1.5 * at(0.99)?)
}

/// `s = (l + m)/n + 1` and `N = l + m + n` for a word with `l` M's, `m` S's
/// and `n >= 1` T's.
pub fn scan_exponents(word: &Word) -> Result<(f64, usize), OpNormError> {
    let (l, m, n) = word.counts();
    if n == 0 {
        return Err(OpNormError::Invalid(format!("word {word} has no T letter")));
    }
    Ok(((l + m) as f64 / n as f64 + 1.0, l + m + n))
}

/// For each `r` in `r_list`: the operator-norm lower bound of `word` with
/// symbol `g_r` and the `N`-th power of the matching seminorm of `g_r`
/// (Bloch-type of order `s` for `alpha > -1`, the area-Garsia functional at
/// `alpha = -1`).
#[allow(clippy::too_many_arguments)]
pub fn equivalence_scan<F: Real>(
    word: &Word,
    g: &SymbolSpec<F>,
    p: F,
    alpha: F,
    r_list: &[F],
    n_trunc: Option<usize>,
    family: &TestFamily,
    grid: &DiscGrid<F>,
) -> Result<ScanTable, OpNormError> {
    let (s, big_n) = scan_exponents(word)?;
    if r_list.windows(2).any(|w| !(w[0] < w[1])) || r_list.iter().any(|r| !(*r > F::zero() && *r < F::one())) {
        return Err(OpNormError::Invalid("r_list must be increasing inside (0, 1)".into()));
    }
    let e = OperatorExpr::from_word(word.clone());
    let sq = lit::<F>(s);
    let a_grid = default_a_grid::<F>();
    let rows = r_list
        .par_iter()
        .map(|&r| {
            let gr = g.dilate(r)?;
            let op = op_lower_bound(&e, &gr, p, alpha, family, n_trunc, false, grid)?;
            let sem = if alpha <= -F::one() {
                bold_seminorm(&gr, alpha, sq, &a_grid, grid)?
            } else {
                bloch_q_seminorm(&gr, sq, grid, true)?
            };
            let pow = sem.value.powi(big_n as i32);
            let row = ScanRow {
                r: to_f64(r),
                opnorm_lb: op.value,
                seminorm_pow_n: pow,
                ratio: op.value / pow,
            };
            if [row.opnorm_lb, row.seminorm_pow_n, row.ratio]
                .iter()
                .all(|x| x.is_finite() && *x > 0.0)
            {
                Ok(row)
            } else {
                Err(OpNormError::Invalid(format!(
                    "non-positive or non-finite scan row at r = {}",
                    row.r
                )))
            }
        })
        .collect::<Result<Vec<_>, OpNormError>>()?;
    Ok(ScanTable {
        word: word.to_string(),
        symbol: g.label(),
        p: to_f64(p),
        alpha: to_f64(alpha),
        s,
        n_power: big_n,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        assert_eq!(scan_exponents(&Word::parse("S T T").unwrap()).unwrap(), (1.5, 3));
        assert_eq!(scan_exponents(&Word::parse("M S T").unwrap()).unwrap(), (3.0, 3));
        assert!(scan_exponents(&Word::parse("S M").unwrap()).is_err());
    }

    #[test]
    fn plateau_detector() {
        let r = [0.9, 0.99, 0.999];
        assert_eq!(plateaus(&r, &[1.0, 2.0, 2.9]), Some(true));
        assert_eq!(plateaus(&r, &[1.0, 2.0, 3.0]), Some(false));
        assert_eq!(plateaus(&[0.5], &[1.0]), None);
    }

    #[test]
    fn identity_symbol_ratio_is_stable() {
        let grid = DiscGrid::new(48, 64, 0.999, &[0.0]).unwrap();
        let t = equivalence_scan(
            &Word::parse("T").unwrap(),
            &SymbolSpec::identity(),
            2.0,
            0.0,
            &[0.5, 0.7, 0.9],
            None,
            &TestFamily::standard(),
            &grid,
        )
        .unwrap();
        let ratios = t.ratio_column();
        for x in &ratios {
            assert!((x / ratios[0] - 1.0).abs() < 0.05, "{ratios:?}");
        }
        let csv = t.to_csv();
        assert!(csv.starts_with("r,opnorm_lb,seminorm_pow_N,ratio\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
