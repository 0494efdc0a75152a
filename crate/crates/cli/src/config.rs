use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use paraword_core::geometry::GridSpec;

/// Options shared by every subcommand. Each one may also come from the JSON
/// file given with `--config`; flags win over the file.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Symbol: z, loge, powlog:7/12, blaschke, blaschke:0.5,0.9, poly:0,1,1/2,
    /// power:3:loge, any of them followed by @r for a dilation [default: z]
    #[arg(long)]
    #[serde(deserialize_with = "symbol_literal")]
    pub symbol: Option<String>,

    /// Operator word or expression, e.g. "S T T" or "2 S T - T Pi0"
    #[arg(long)]
    pub word: Option<String>,

    /// Integrability exponent p [default: 2]
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,

    /// Seminorm / gradient exponent q [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,

    /// Weight exponent alpha >= -1; -1 selects Hardy/BMOA-type quantities [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    /// Exponent tau > 0 of the Q operator [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,

    /// Power l >= 1 of T in the Q operator [default: 1]
    #[arg(long)]
    pub ell: Option<usize>,

    /// Radial Gauss-Legendre nodes [default: 400]
    #[arg(long)]
    pub n_r: Option<usize>,

    /// Angular trapezoid nodes [default: 512]
    #[arg(long)]
    pub n_theta: Option<usize>,

    /// Outer grid radius [default: 0.9995]
    #[arg(long)]
    pub r_max: Option<f64>,

    /// Comma-separated dilation radii for scans [default: 0.9,0.95,0.99,0.995,0.999]
    #[arg(long, value_delimiter = ',')]
    pub r_list: Option<Vec<f64>>,

    /// Test family: standard, restricted, monomials:N, kernels [default: standard]
    #[arg(long)]
    pub family: Option<String>,

    /// Series truncation degree [default: chosen from the symbol]
    #[arg(long)]
    pub n_trunc: Option<usize>,

    /// Use test functions vanishing at 0 (restricted operator norm)
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted: Option<bool>,

    /// Functional for `seminorm`: bloch, garsia, bold, apalpha, carleson-box,
    /// carleson-berezin, ntmax [default: bloch]
    #[arg(long)]
    pub functional: Option<String>,

    /// Also report the `seminorm` value at r_max = 0.995, 0.999, 0.9995
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<bool>,

    /// Longest S/T word for `verify`; M/S/T words go one shorter [default: 6]
    #[arg(long)]
    pub max_len: Option<usize>,

    /// Random (g, f) pairs per identity, or random symbols for band reports [default: 20 / 10]
    #[arg(long)]
    pub trials: Option<usize>,

    /// Largest degree of random polynomials [default: 8 for verify, 6 otherwise]
    #[arg(long)]
    pub max_deg: Option<usize>,

    /// Seed of every random choice [default: 7]
    #[arg(long)]
    pub seed: Option<u64>,

    /// Band edge C for `calderon` or bound for the `hardystein` residual
    /// [default: 32 / 1e-6]
    #[arg(long)]
    pub tol: Option<f64>,

    /// Write the report (JSON envelope, or CSV for scans with a .csv path) here
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Config files may give the symbol as a string or as a JSON literal object.
fn symbol_literal<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    Ok(match Option::<serde_json::Value>::deserialize(d)? {
        None => None,
        Some(serde_json::Value::String(s)) => Some(s),
        Some(v) => Some(v.to_string()),
    })
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// `self` with every field set in `top` replaced.
    pub fn merged(mut self, top: &RunConfig) -> Self {
        overlay!(
            self,
            top,
            symbol,
            word,
            p,
            q,
            alpha,
            tau,
            ell,
            n_r,
            n_theta,
            r_max,
            r_list,
            family,
            n_trunc,
            restricted,
            functional,
            convergence,
            max_len,
            trials,
            max_deg,
            seed,
            tol,
            output
        );
        self
    }

    pub fn grid_spec(&self) -> GridSpec {
        let d = GridSpec::default();
        GridSpec {
            n_r: self.n_r.unwrap_or(d.n_r),
            n_theta: self.n_theta.unwrap_or(d.n_theta),
            r_max: self.r_max.unwrap_or(d.r_max),
        }
    }

    pub fn p(&self) -> f64 {
        self.p.unwrap_or(2.0)
    }

    pub fn q(&self) -> f64 {
        self.q.unwrap_or(1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(0.0)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(7)
    }

    pub fn r_list(&self) -> Vec<f64> {
        self.r_list
            .clone()
            .unwrap_or_else(|| vec![0.9, 0.95, 0.99, 0.995, 0.999])
    }
}
