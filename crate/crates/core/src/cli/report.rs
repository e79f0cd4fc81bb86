use std::io::{self, Write};

use serde::Serialize;

use crate::cli::config::ProblemConfig;
use crate::functional::FunctionalSpec;
use crate::wh::BlockFactorization;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "AGREE")]
    Agree,
    #[serde(rename = "DISAGREE")]
    Disagree,
    /// A factorization value outside `[0, 1]` beyond the inversion tolerance.
    #[serde(rename = "OUT_OF_RANGE")]
    OutOfRange,
}

/// One machine-readable result. Fields serialize in declaration order.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub command: String,
    pub inputs_digest: String,
    pub value: Option<f64>,
    pub std_error: Option<f64>,
    pub residual: Option<f64>,
    pub method: Option<String>,
    #[serde(rename = "M")]
    pub terms: Option<usize>,
    pub seed: Option<u64>,
    /// Only filled with `--timings`, so default output is reproducible.
    pub wall_ms: Option<f64>,
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_value: Option<f64>,
    #[serde(skip)]
    pub functional: Option<String>,
    #[serde(skip)]
    pub paths: Option<usize>,
    #[serde(skip)]
    pub censored: Option<usize>,
    #[serde(skip)]
    pub bias_bound: Option<f64>,
    #[serde(skip)]
    pub out_of_range: bool,
    #[serde(skip)]
    pub inverted: bool,
    #[serde(skip)]
    pub elapsed_ms: (f64, f64),
}

impl Record {
    pub fn new(command: &str, digest: &str) -> Self {
        Record {
            command: command.into(),
            inputs_digest: digest.into(),
            value: None,
            std_error: None,
            residual: None,
            method: None,
            terms: None,
            seed: None,
            wall_ms: None,
            verdict: None,
            mc_value: None,
            functional: None,
            paths: None,
            censored: None,
            bias_bound: None,
            out_of_range: false,
            inverted: false,
            elapsed_ms: (0.0, 0.0),
        }
    }

    /// Factorization value with the Monte Carlo spread and a verdict.
    pub fn combine(wh: Record, mc: Record, gate: f64) -> Record {
        let (v, m, se) = (wh.value.unwrap_or(f64::NAN), mc.value.unwrap_or(f64::NAN), mc.std_error.unwrap_or(0.0));
        let diff = (v - m).abs();
        let agree = if se > 0.0 { diff <= gate * se } else { diff <= 1e-12 };
        Record {
            std_error: mc.std_error,
            seed: mc.seed,
            wall_ms: match (wh.wall_ms, mc.wall_ms) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            verdict: Some(if agree { Verdict::Agree } else { Verdict::Disagree }),
            mc_value: mc.value,
            paths: mc.paths,
            censored: mc.censored,
            bias_bound: mc.bias_bound,
            elapsed_ms: (wh.elapsed_ms.0, mc.elapsed_ms.0),
            ..wh
        }
    }

    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        serde_json::to_writer(&mut *out, self)?;
        writeln!(out)
    }
}

pub(crate) fn describe(spec: &FunctionalSpec, states: &[String]) -> String {
    let (i, j) = (&states[spec.from], &states[spec.to]);
    match spec.level {
        Some(l) => format!("{}(level {l}; {i} -> {j})", spec.kind),
        None => format!("{}({i} -> {j})", spec.kind),
    }
}

fn sci(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.1e}")).unwrap_or_else(|| "-".into())
}

pub(crate) fn check_table(out: &mut dyn Write, cfg: &ProblemConfig) -> io::Result<()> {
    let plus: Vec<&str> = cfg.drift.plus_states().iter().map(|&i| cfg.drift.label(i)).collect();
    let minus: Vec<&str> = cfg.drift.minus_states().iter().map(|&i| cfg.drift.label(i)).collect();
    writeln!(out, "config ok ({})", &cfg.digest[..12])?;
    writeln!(out, "  states       {} (E+: {}; E-: {})", cfg.states().len(), plus.join(", "), minus.join(", "))?;
    writeln!(out, "  regimes      {} (breakpoints {:?})", cfg.schedule.n_regimes(), cfg.schedule.breakpoints())?;
    writeln!(out, "  discount     {}", cfg.discount)?;
    match &cfg.functional {
        Some(f) => writeln!(out, "  functional   {}", describe(f, cfg.states()))?,
        None => writeln!(out, "  functional   (none)")?,
    }
    writeln!(
        out,
        "  inversion    {} M={} ({} digits)",
        cfg.inversion.method, cfg.inversion.terms, cfg.inversion.precision
    )?;
    writeln!(out, "  monte carlo  {} paths, seed {}, horizon {}", cfg.mc.paths, cfg.mc.seed, cfg.mc.horizon)
}

pub(crate) fn factorize_table(
    out: &mut dyn Write,
    cfg: &ProblemConfig,
    bf: &BlockFactorization,
    residual: f64,
) -> io::Result<()> {
    writeln!(out, "block factorization, c = {}", bf.killing())?;
    writeln!(out, "  rates q            {:?}", bf.rates())?;
    writeln!(out, "  shifted killings   {:?}", bf.shifted_killings())?;
    writeln!(out, "  augmented residual {residual:.2e} (gate 1e-8)")?;
    writeln!(out, "  block   |Lambda~|_max  |G~|_max")?;
    for k in 0..bf.levels() {
        for l in k..bf.levels() {
            writeln!(
                out,
                "  ({k},{l})   {:<14.6e} {:.6e}",
                bf.lambda_block(k, l).abs().max(),
                bf.g_block(k, l).abs().max()
            )?;
        }
    }
    let sum = bf.level_sum_lambda();
    writeln!(out, "  level-summed Lambda~ from level 0 (rows E-, columns E+):")?;
    for (r, &i) in bf.minus_states().iter().enumerate() {
        let row: Vec<String> = (0..bf.n_plus()).map(|c| format!("{:.8}", sum[(r, c)])).collect();
        writeln!(out, "    {:<8} {}", cfg.drift.label(i), row.join("  "))?;
    }
    Ok(())
}

pub(crate) fn passage_table(out: &mut dyn Write, rec: &Record, c: f64) -> io::Result<()> {
    writeln!(out, "{}, c = {c}", rec.functional.as_deref().unwrap_or("functional"))?;
    writeln!(out, "  value      {:.6}", rec.value.unwrap_or(f64::NAN))?;
    if rec.inverted {
        writeln!(
            out,
            "  method     {} M={} (max node residual {})",
            rec.method.as_deref().unwrap_or("-"),
            rec.terms.unwrap_or(0),
            sci(rec.residual)
        )?;
    } else {
        writeln!(out, "  method     classical factorization, no inversion (residual {})", sci(rec.residual))?;
    }
    if rec.out_of_range {
        writeln!(out, "  warning    value lies outside [0, 1] beyond the inversion tolerance")?;
    }
    Ok(())
}

pub(crate) fn mc_table(out: &mut dyn Write, rec: &Record, c: f64) -> io::Result<()> {
    writeln!(out, "{}, c = {c}", rec.functional.as_deref().unwrap_or("functional"))?;
    writeln!(
        out,
        "  estimate   {:.6} +- {:.6} (1 SE)",
        rec.value.unwrap_or(f64::NAN),
        rec.std_error.unwrap_or(f64::NAN)
    )?;
    writeln!(
        out,
        "  paths      {} (seed {}, {} censored, truncation bias <= {})",
        rec.paths.unwrap_or(0),
        rec.seed.unwrap_or(0),
        rec.censored.unwrap_or(0),
        sci(rec.bias_bound)
    )
}

pub(crate) fn compare_table(out: &mut dyn Write, rec: &Record, c: f64) -> io::Result<()> {
    let v = rec.value.unwrap_or(f64::NAN);
    let m = rec.mc_value.unwrap_or(f64::NAN);
    let se = rec.std_error.unwrap_or(f64::NAN);
    writeln!(out, "Numerical results: {}, c = {c}", rec.functional.as_deref().unwrap_or("functional"))?;
    writeln!(out, "  {:<14} {:<10} context", "method", "value")?;
    writeln!(
        out,
        "  {:<14} {:<10.6} {} M={}, max node residual {}",
        "Wiener-Hopf",
        v,
        rec.method.as_deref().unwrap_or("-"),
        rec.terms.unwrap_or(0),
        sci(rec.residual)
    )?;
    writeln!(
        out,
        "  {:<14} {:<10.6} +- {:.6} (1 SE, {} paths, seed {})",
        "Monte-Carlo",
        m,
        se,
        rec.paths.unwrap_or(0),
        rec.seed.unwrap_or(0)
    )?;
    let z = if se > 0.0 { (v - m).abs() / se } else { f64::INFINITY };
    writeln!(out, "  {:<14} {:<10.6} {:.2} SE", "difference", (v - m).abs(), z)?;
    writeln!(
        out,
        "  {:<14} {:.1} ms (Wiener-Hopf), {:.1} ms (Monte-Carlo)",
        "execution time", rec.elapsed_ms.0, rec.elapsed_ms.1
    )?;
    let verdict = match rec.verdict {
        Some(Verdict::Agree) => format!("AGREE (within {} SE)", super::AGREEMENT_SE),
        _ => format!("DISAGREE (beyond {} SE)", super::AGREEMENT_SE),
    };
    writeln!(out, "  {:<14} {verdict}", "verdict")
}
