use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use paraword_core::geometry::{r_max_convergence, GridError};
use paraword_core::norms::{
    apalpha_norm, bloch_q_seminorm, bold_seminorm, calderon_ratio, carleson_norm, default_a_grid, garsia_seminorm,
    hardy_stein_sides, nt_maximal_lp, CarlesonMode, MeasureField, NormReport,
};
use paraword_core::opnorm::{equivalence_scan, op_lower_bound, q_op_lower_bound, ScanTable, TestFamily};
use paraword_core::wordalg::{
    parse_expr, random_polynomial, st_form_full, st_form_h0, verify_identity, Letter, OperatorExpr, Word,
};
use paraword_core::{Grid, Symbol};

use crate::config::RunConfig;

/// Why a subcommand could not produce its report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Compute(_) => "compute",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Compute(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute(e: impl std::fmt::Display) -> Failure {
    Failure::Compute(e.to_string())
}

/// What a subcommand produced. `violation` is set when a checked property
/// does not hold.
#[derive(Default)]
pub struct Outcome {
    pub results: Vec<Value>,
    pub text: String,
    pub csv: Option<String>,
    pub violation: Option<String>,
}

type Run = Result<Outcome, Failure>;

fn symbol(cfg: &RunConfig) -> Result<Symbol, Failure> {
    cfg.symbol.as_deref().unwrap_or("z").parse().map_err(usage)
}

fn grid(cfg: &RunConfig) -> Result<Grid, Failure> {
    Ok(Grid::from_spec(cfg.grid_spec(), &alphas(cfg))?)
}

fn family(cfg: &RunConfig) -> Result<TestFamily, Failure> {
    let restricted = cfg.restricted.unwrap_or(false);
    let text = cfg
        .family
        .as_deref()
        .unwrap_or(if restricted { "restricted" } else { "standard" });
    match text.split_once(':') {
        None if text == "standard" => Ok(TestFamily::standard()),
        None if text == "restricted" => Ok(TestFamily::standard_restricted()),
        None if text == "kernels" => match TestFamily::standard() {
            TestFamily::Union(mut parts) => Ok(parts.pop().expect("standard family has kernels")),
            other => Ok(other),
        },
        Some(("monomials", n)) => {
            let n = n
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad monomial degree '{n}'")))?;
            Ok(if restricted {
                TestFamily::RestrictedMonomials(n)
            } else {
                TestFamily::Monomials(n)
            })
        }
        _ => Err(usage(format!("unknown family '{text}'"))),
    }
}

fn random_symbols(cfg: &RunConfig, default_count: usize) -> Result<Vec<Symbol>, Failure> {
    if cfg.symbol.is_some() {
        return Ok(vec![symbol(cfg)?]);
    }
    let count = cfg.trials.unwrap_or(default_count);
    let deg = cfg.max_deg.unwrap_or(6);
    if count == 0 || deg == 0 {
        return Err(usage("trials and max-deg must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    Ok((0..count)
        .map(|_| Symbol::polynomial(random_polynomial(&mut rng, deg, false).coeffs().to_vec()))
        .collect())
}

pub fn stform(cfg: &RunConfig) -> Run {
    let text = cfg.word.as_deref().ok_or_else(|| usage("stform needs a word"))?;
    let w = Word::parse(text).map_err(usage)?;
    let full = st_form_full(&w).map_err(usage)?;
    let h0 = st_form_h0(&w).map_err(usage)?;
    let mut out = Outcome::default();
    writeln!(out.text, "word  {w}").unwrap();
    writeln!(out.text, "full  {full}").unwrap();
    writeln!(out.text, "h0    {h0}").unwrap();
    out.results.push(json!({
        "word": w.to_string(),
        "st_form": full,
        "expr": full.to_expr().to_string(),
        "h0": h0.to_string(),
    }));
    Ok(out)
}

pub fn verify(cfg: &RunConfig) -> Run {
    let max_len = cfg.max_len.unwrap_or(6);
    let trials = cfg.trials.unwrap_or(20);
    let deg = cfg.max_deg.unwrap_or(8);
    let seed = cfg.seed();
    if max_len == 0 {
        return Err(usage("max-len must be positive"));
    }
    let mut checks: Vec<(String, OperatorExpr, OperatorExpr, bool)> = Vec::new();
    for len in 1..=max_len {
        for w in Word::enumerate(&[Letter::S, Letter::T], len) {
            if w.counts().2 >= 1 {
                let h0 = st_form_h0(&w).map_err(compute)?;
                checks.push((format!("h0 {w}"), OperatorExpr::from_word(w), h0, true));
            }
        }
    }
    let n_st = checks.len();
    let mut n_mst = 0;
    for len in 1..max_len {
        for w in Word::enumerate(&Letter::ALL, len) {
            let (l, m, n) = w.counts();
            if m + n == 0 || l + m == 0 {
                continue;
            }
            n_mst += 1;
            let full = st_form_full(&w).map_err(compute)?.to_expr();
            let h0 = st_form_h0(&w).map_err(compute)?;
            checks.push((format!("full {w}"), OperatorExpr::from_word(w.clone()), full, false));
            checks.push((format!("h0 {w}"), OperatorExpr::from_word(w), h0, true));
        }
    }
    let mut failed = Vec::new();
    for (k, (name, lhs, rhs, h0_only)) in checks.iter().enumerate() {
        let verdict = verify_identity(lhs, rhs, trials, deg, *h0_only, seed.wrapping_add(k as u64)).map_err(usage)?;
        if !verdict.is_equal() {
            failed.push(name.clone());
        }
    }
    let mut out = Outcome::default();
    if failed.is_empty() {
        writeln!(
            out.text,
            "all identities exact: {n_st} S/T words, {n_mst} M/S/T words, {trials} trials each (seed {seed})"
        )
        .unwrap();
    } else {
        writeln!(out.text, "{} identities failed: {}", failed.len(), failed.join(", ")).unwrap();
        out.violation = Some(format!("{} identities not exact", failed.len()));
    }
    out.results.push(json!({
        "st_words": n_st,
        "mst_words": n_mst,
        "identities": checks.len(),
        "trials": trials,
        "failed": failed,
    }));
    Ok(out)
}

fn report_outcome(rep: NormReport) -> Outcome {
    let text = format!("{} of {} = {:.12e}\n", rep.functional, rep.symbol, rep.value);
    Outcome {
        results: vec![rep.to_json()],
        text,
        ..Default::default()
    }
}

impl From<GridError> for Failure {
    fn from(e: GridError) -> Self {
        usage(e)
    }
}

fn alphas(cfg: &RunConfig) -> Vec<f64> {
    let mut alphas = vec![0.0];
    if cfg.alpha() > -1.0 && cfg.alpha() != 0.0 {
        alphas.push(cfg.alpha());
    }
    alphas
}

pub fn seminorm(cfg: &RunConfig) -> Run {
    let g = symbol(cfg)?;
    let rep = functional(cfg, &g, &grid(cfg)?)?;
    let mut out = report_outcome(rep);
    if cfg.convergence.unwrap_or(false) {
        let values = r_max_convergence(cfg.grid_spec(), &alphas(cfg), |grid| {
            Ok::<f64, Failure>(functional(cfg, &g, grid)?.value)
        })?;
        for (r, v) in &values {
            writeln!(out.text, "  r_max = {r}: {v:.12e}").unwrap();
        }
        out.results.push(json!({ "r_max_convergence": values }));
    }
    Ok(out)
}

fn functional(cfg: &RunConfig, g: &Symbol, grid: &Grid) -> Result<NormReport, Failure> {
    let (p, q, alpha) = (cfg.p(), cfg.q(), cfg.alpha());
    let a_grid = default_a_grid::<f64>();
    let rep = match cfg.functional.as_deref().unwrap_or("bloch") {
        "bloch" => bloch_q_seminorm(g, q, grid, false).map_err(compute)?,
        "garsia" => garsia_seminorm(g, alpha, q, &a_grid, grid).map_err(compute)?,
        "bold" => bold_seminorm(g, alpha, q, &a_grid, grid).map_err(compute)?,
        "apalpha" => {
            let mut r = NormReport::new("apalpha_norm", g.label(), grid.spec())
                .param("p", p)
                .param("alpha", alpha);
            r.value = apalpha_norm(g, p, alpha, grid).map_err(compute)?;
            r
        }
        "ntmax" => {
            let mut r = NormReport::new("nt_maximal_lp", g.label(), grid.spec()).param("p", p);
            r.value = nt_maximal_lp(g, p, grid).map_err(compute)?;
            r
        }
        mode @ ("carleson-box" | "carleson-berezin") => {
            let mu = MeasureField::mu(g, q, alpha, grid).map_err(compute)?;
            let mode = if mode == "carleson-box" {
                CarlesonMode::Box
            } else {
                CarlesonMode::Berezin
            };
            carleson_norm(&mu, alpha, mode, &a_grid).map_err(compute)?
        }
        other => return Err(usage(format!("unknown functional '{other}'"))),
    };
    Ok(rep)
}

pub fn opnorm(cfg: &RunConfig) -> Run {
    let e = parse_expr(cfg.word.as_deref().unwrap_or("T")).map_err(usage)?;
    let g = symbol(cfg)?;
    let rep = op_lower_bound(
        &e,
        &g,
        cfg.p(),
        cfg.alpha(),
        &family(cfg)?,
        cfg.n_trunc,
        cfg.restricted.unwrap_or(false),
        &grid(cfg)?,
    )
    .map_err(compute)?;
    Ok(report_outcome(rep))
}

pub fn qnorm(cfg: &RunConfig) -> Run {
    let g = symbol(cfg)?;
    let rep = q_op_lower_bound(
        cfg.tau.unwrap_or(1.0),
        cfg.ell.unwrap_or(1),
        &g,
        cfg.p(),
        cfg.alpha(),
        &family(cfg)?,
        cfg.n_trunc,
        cfg.restricted.unwrap_or(false),
        &grid(cfg)?,
    )
    .map_err(compute)?;
    Ok(report_outcome(rep))
}

fn verdict(x: Option<bool>) -> &'static str {
    match x {
        Some(true) => "plateau",
        Some(false) => "growth",
        None => "undecided",
    }
}

fn run_scan(cfg: &RunConfig, word: &Word, g: &Symbol, grid: &Grid) -> Result<ScanTable, Failure> {
    equivalence_scan(
        word,
        g,
        cfg.p(),
        cfg.alpha(),
        &cfg.r_list(),
        cfg.n_trunc,
        &family(cfg)?,
        grid,
    )
    .map_err(compute)
}

fn scan_text(t: &ScanTable) -> String {
    let (op, sem) = t.plateau();
    format!(
        "{}# plateau: opnorm_lb {}, seminorm_pow_N {}\n",
        t.to_csv(),
        verdict(op),
        verdict(sem)
    )
}

pub fn scan(cfg: &RunConfig) -> Run {
    let word = Word::parse(cfg.word.as_deref().unwrap_or("S T T")).map_err(usage)?;
    let t = run_scan(cfg, &word, &symbol(cfg)?, &grid(cfg)?)?;
    Ok(Outcome {
        text: scan_text(&t),
        csv: Some(t.to_csv()),
        results: vec![t.to_json()],
        violation: None,
    })
}

/// `S T^2` along dilations of `h^{7/12}` (bounded) and of `h = 1 + log(1/(1-z))`
/// (unbounded).
pub fn counterexample(cfg: &RunConfig) -> Run {
    let r = cfg.r_list();
    if ![0.99, 0.999].iter().all(|x| r.iter().any(|y| (x - y).abs() < 1e-9)) {
        return Err(usage("r-list must contain 0.99 and 0.999"));
    }
    let word = Word::parse(cfg.word.as_deref().unwrap_or("S T T")).map_err(usage)?;
    let grid = grid(cfg)?;
    let cases = [(Symbol::pow_log_e(7.0 / 12.0), true), (Symbol::log_e(), false)];
    let mut out = Outcome::default();
    let mut csv = String::new();
    let mut wrong = Vec::new();
    for (g, bounded) in cases {
        let t = run_scan(cfg, &word, &g, &grid)?;
        let (op, sem) = t.plateau();
        if op != Some(bounded) || sem != Some(bounded) {
            wrong.push(g.label());
        }
        writeln!(out.text, "# symbol {}", g.label()).unwrap();
        out.text.push_str(&scan_text(&t));
        csv.push_str(&t.to_csv());
        out.results.push(t.to_json());
    }
    if !wrong.is_empty() {
        out.violation = Some(format!("unexpected plateau verdict for {}", wrong.join(", ")));
    }
    out.csv = Some(csv);
    Ok(out)
}

pub fn calderon(cfg: &RunConfig) -> Run {
    let symbols = random_symbols(cfg, 10)?;
    let grid = grid(cfg)?;
    let pairs = match (cfg.p, cfg.q) {
        (None, None) => vec![(2.0, 1.0), (2.0, 2.0), (1.0, 0.5), (4.0, 2.0)],
        _ => vec![(cfg.p(), cfg.q())],
    };
    let band = cfg.tol.unwrap_or(32.0);
    let mut worst = 1.0f64;
    let mut out = Outcome::default();
    for (p, q) in pairs {
        let ratios = symbols
            .iter()
            .map(|g| calderon_ratio(g, p, q, &grid))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(compute)?;
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        let c = hi.max(1.0 / lo);
        worst = worst.max(c);
        writeln!(out.text, "p = {p}, q = {q}: ratio in [{lo:.6}, {hi:.6}], C = {c:.6}").unwrap();
        out.results
            .push(json!({ "p": p, "q": q, "ratios": ratios, "min": lo, "max": hi, "band": c }));
    }
    writeln!(out.text, "C = {worst:.6} (limit {band})").unwrap();
    if !(worst <= band) {
        out.violation = Some(format!("Calderon band {worst} exceeds {band}"));
    }
    Ok(out)
}

pub fn hardystein(cfg: &RunConfig) -> Run {
    let symbols = random_symbols(cfg, 10)?;
    let grid = grid(cfg)?;
    let qs = cfg.q.map_or_else(|| vec![0.5, 1.0, 2.0], |q| vec![q]);
    let tol = cfg.tol.unwrap_or(1e-6);
    let mut worst = 0.0f64;
    let mut out = Outcome::default();
    for (k, g) in symbols.iter().enumerate() {
        for &q in &qs {
            let (lhs, rhs) = hardy_stein_sides(g, q, &grid).map_err(compute)?;
            let residual = (lhs - rhs).abs() / lhs.max(1e-300);
            worst = worst.max(residual);
            writeln!(
                out.text,
                "{k:>3} q = {q:<4} lhs = {lhs:.15e} rhs = {rhs:.15e} residual = {residual:.3e}"
            )
            .unwrap();
            out.results.push(json!({
                "symbol": g.label(), "q": q, "lhs": lhs, "rhs": rhs, "residual": residual,
            }));
        }
    }
    writeln!(out.text, "max residual {worst:.3e} (limit {tol:e})").unwrap();
    if !(worst <= tol) {
        out.violation = Some(format!("Hardy-Stein residual {worst:e} exceeds {tol:e}"));
    }
    Ok(out)
}
