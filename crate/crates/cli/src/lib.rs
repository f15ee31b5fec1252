//! Command implementations behind the `gridlinks` binary.
//!
//! Everything here returns plain rows so that tests can drive the same code
//! paths as the binary without spawning it.

use std::fmt;
use std::io::{self, Read, Write};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use gridlinks::enumerate::{exact_table_by_enumeration_with, EnumerationRow};
use gridlinks::exact::{
    bound_margin, cbar_links, cbar_table_recurrence, expected_components, knot_size_distribution,
    to_decimal, variance_components, BigInt, BigRational, CountTable,
};
use gridlinks::experiment::{grid_sweep, length_sweep, Experiment};
use gridlinks::stats::{ols_fit, FitResult, SampleSummary};
use num_traits::ToPrimitive;
use serde::Serialize;

/// Inclusive range of grid sizes, `START..END[:STEP]` or a single `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl NRange {
    pub fn single(n: usize) -> Self {
        NRange {
            start: n,
            end: n,
            step: 1,
        }
    }

    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.end).step_by(self.step).collect()
    }
}

impl FromStr for NRange {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (range, step) = match s.split_once(':') {
            Some((r, st)) => (r, st.trim().parse().context("bad step")?),
            None => (s, 1),
        };
        let (start, end) = match range.split_once("..") {
            Some((a, b)) => (
                a.trim().parse().context("bad range start")?,
                b.trim().parse().context("bad range end")?,
            ),
            None => {
                let n = range.trim().parse().context("bad grid size")?;
                (n, n)
            }
        };
        if step == 0 {
            bail!("step must be positive");
        }
        if start > end {
            bail!("empty range {s:?}");
        }
        Ok(NRange { start, end, step })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}:{}", self.start, self.end, self.step)
    }
}

// ---------------------------------------------------------------- enumerate

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerateRow {
    pub n: usize,
    pub c_n1: u64,
    pub c_n2: u64,
    pub c_n3: u64,
    pub c_n: u64,
    pub mean_k: String,
    pub mean_k_exact: String,
}

impl EnumerateRow {
    fn from_row(row: &EnumerationRow) -> Self {
        let mean = row.mean_components();
        EnumerateRow {
            n: row.n,
            c_n1: row.c(1),
            c_n2: row.c(2),
            c_n3: row.c(3),
            c_n: row.total(),
            mean_k: to_decimal(&mean, 4),
            mean_k_exact: mean.to_string(),
        }
    }
}

/// Brute-force component tallies, one row per grid size.
pub fn enumerate_rows(
    ns: &[usize],
    allow_large: bool,
) -> gridlinks::Result<Vec<(EnumerationRow, EnumerateRow)>> {
    ns.iter()
        .map(|&n| {
            let row = exact_table_by_enumeration_with(n, allow_large)?;
            let out = EnumerateRow::from_row(&row);
            Ok((row, out))
        })
        .collect()
}

/// Compares enumerated rows with the exact counts. Returns one message per
/// mismatch.
pub fn verify_enumeration(rows: &[EnumerationRow]) -> Vec<String> {
    let n_max = rows.iter().map(|r| r.n).max().unwrap_or(2);
    let table = cbar_table_recurrence(n_max, n_max / 2);
    let mut bad = Vec::new();
    for row in rows {
        for k in 1..=row.n / 2 {
            let want = table.c(row.n, k);
            if BigInt::from(row.c(k)) != want {
                bad.push(format!(
                    "n={} k={}: enumerated {} exact {}",
                    row.n,
                    k,
                    row.c(k),
                    want
                ));
            }
        }
        if BigInt::from(row.total()) != table.row_sum(row.n) {
            bad.push(format!(
                "n={}: total {} exact {}",
                row.n,
                row.total(),
                table.row_sum(row.n)
            ));
        }
        if row.mean_components() != expected_components(row.n) {
            bad.push(format!(
                "n={}: mean {} exact {}",
                row.n,
                row.mean_components(),
                expected_components(row.n)
            ));
        }
    }
    bad
}

pub fn write_enumerate_csv<W: Write>(w: W, rows: &[EnumerateRow]) -> Result<()> {
    write_csv("enumerate", w, rows)
}

// ------------------------------------------------------------------- sample

/// One summary row of a sampling sweep. `key` is the grid size, or the bin
/// centre for the writhe-vs-length experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub key: u64,
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub m4: f64,
    pub kurtosis: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SampleRow {
    pub fn from_summary(key: u64, s: &SampleSummary) -> Self {
        let (ci_low, ci_high) = s.mean_ci95();
        SampleRow {
            key,
            count: s.count,
            mean: s.mean,
            variance: s.variance(),
            m4: s.fourth_moment(),
            kurtosis: s.kurtosis().ok(),
            ci_low,
            ci_high,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampleParams {
    pub experiment: Experiment,
    pub ns: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub bin_width: u64,
    pub length_cap: u64,
}

impl SampleParams {
    /// Full-scale settings for each experiment.
    pub fn preset(experiment: Experiment) -> Self {
        let (ns, samples) = match experiment {
            Experiment::WritheLength => (vec![1000], 1_000_000),
            _ => (
                NRange {
                    start: 10,
                    end: 1000,
                    step: 10,
                }
                .values(),
                10_000,
            ),
        };
        SampleParams {
            experiment,
            ns,
            samples,
            seed: 0,
            bin_width: 10_000,
            length_cap: 650_000,
        }
    }
}

pub fn run_sample(p: &SampleParams) -> Result<Vec<SampleRow>> {
    if p.samples == 0 {
        bail!("--samples must be positive");
    }
    if let Some(&n) = p.ns.iter().find(|&&n| n < 2) {
        bail!("grid size {n} is below the minimum of 2");
    }
    Ok(match p.experiment {
        Experiment::WritheLength => {
            let n_max = *p.ns.iter().max().ok_or_else(|| anyhow!("empty n-range"))?;
            if p.bin_width == 0 {
                bail!("--bin-width must be positive");
            }
            length_sweep(n_max, p.samples, p.seed, p.bin_width, p.length_cap)
                .iter()
                .map(|(&bin, s)| SampleRow::from_summary(bin, s))
                .collect()
        }
        e => grid_sweep(e, &p.ns, p.samples, p.seed)
            .iter()
            .map(|(n, s)| SampleRow::from_summary(*n as u64, s))
            .collect(),
    })
}

/// Checks sampled means against closed forms where they exist. Returns one
/// message per row outside four standard errors.
pub fn verify_sample(experiment: Experiment, rows: &[SampleRow]) -> Vec<String> {
    let mut bad = Vec::new();
    for row in rows {
        let n = row.key as usize;
        let (ev, var) = match experiment {
            Experiment::KnotSize => {
                let d = knot_size_distribution(n);
                (to_f64(&d.ev), to_f64(&d.var))
            }
            Experiment::Components => (component_mean_f64(n), component_variance_f64(n)),
            Experiment::WritheGrid | Experiment::WritheLength => (0.0, f64::NAN),
        };
        if var.is_nan() {
            continue;
        }
        let se = (var / row.count as f64).sqrt();
        let tol = (4.0 * se).max(1e-12);
        if (row.mean - ev).abs() > tol {
            bad.push(format!(
                "n={n}: mean {:.6} vs exact {:.6} (4 sigma = {:.6})",
                row.mean, ev, tol
            ));
        }
    }
    bad
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rationals are too slow to build for every large grid size, so the
/// alternating sums are evaluated in floating point beyond this size. The
/// terms decay factorially and never cancel badly.
const EXACT_MOMENT_LIMIT: usize = 120;

fn harmonic(n: usize) -> (f64, f64) {
    (1..=n).fold((0.0, 0.0), |(h1, h2), i| {
        let x = 1.0 / i as f64;
        (h1 + x, h2 + x * x)
    })
}

fn cbar_f64(n: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..=n {
        term = -term / i as f64;
        sum += term;
    }
    sum
}

pub fn component_mean_f64(n: usize) -> f64 {
    if n <= EXACT_MOMENT_LIMIT {
        return to_f64(&expected_components(n));
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for i in 0..n {
        if i > 0 {
            sign = -sign / i as f64;
        }
        if sign.abs() < 1e-300 {
            break;
        }
        sum += (harmonic(n - i).0 - 1.0) * sign;
    }
    sum / cbar_f64(n)
}

pub fn component_variance_f64(n: usize) -> f64 {
    if n <= EXACT_MOMENT_LIMIT {
        return to_f64(&variance_components(n));
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for i in 0..=n {
        if i > 0 {
            sign = -sign / i as f64;
        }
        if sign.abs() < 1e-300 {
            break;
        }
        let (h1, h2) = harmonic(n - i);
        let fi = i as f64;
        sum += (h1 * h1 - h2 + 2.0 * fi * h1 + fi * (fi - 1.0)) * sign;
    }
    let ev = component_mean_f64(n);
    sum / cbar_f64(n) + ev - ev * ev
}

pub fn write_sample_csv<W: Write>(
    mut w: W,
    experiment: Experiment,
    rows: &[SampleRow],
) -> Result<()> {
    let key = if experiment == Experiment::WritheLength {
        "bin"
    } else {
        "n"
    };
    writeln!(w, "# gridlinks v1 {experiment}")?;
    writeln!(w, "# variance is population-normalised (divided by count)")?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        key, "count", "mean", "variance", "m4", "kurtosis", "ci_low", "ci_high",
    ])?;
    for r in rows {
        out.write_record([
            r.key.to_string(),
            r.count.to_string(),
            r.mean.to_string(),
            r.variance.to_string(),
            r.m4.to_string(),
            r.kurtosis.map(|k| k.to_string()).unwrap_or_default(),
            r.ci_low.to_string(),
            r.ci_high.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SampleJson<'a> {
    format: &'static str,
    experiment: String,
    seed: u64,
    samples: usize,
    variance: &'static str,
    rows: &'a [SampleRow],
}

pub fn write_sample_json<W: Write>(w: W, p: &SampleParams, rows: &[SampleRow]) -> Result<()> {
    let doc = SampleJson {
        format: "gridlinks v1",
        experiment: p.experiment.to_string(),
        seed: p.seed,
        samples: p.samples,
        variance: "population",
        rows,
    };
    serde_json::to_writer_pretty(w, &doc)?;
    Ok(())
}

// -------------------------------------------------------------------- exact

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactRow {
    pub n: usize,
    pub c_n: String,
    /// `c(n, k)` for `k = 1..=k_max`.
    pub c_nk: Vec<String>,
    pub ev: String,
    pub ev_decimal: String,
    pub var: String,
    pub var_decimal: String,
    pub cbar_decimal: String,
    /// Smallest bound margin over `k = 1..=k_max`.
    pub min_margin: f64,
    /// Every margin in the row is provably nonnegative.
    pub margins_certified: bool,
}

pub fn exact_rows(
    ns: &[usize],
    k_max: usize,
    digits: usize,
) -> Result<(CountTable, Vec<ExactRow>)> {
    let n_max = *ns.iter().max().ok_or_else(|| anyhow!("empty n-range"))?;
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        bail!("grid size {n} is below the minimum of 2");
    }
    if k_max == 0 {
        bail!("--k-max must be positive");
    }
    let table = cbar_table_recurrence(n_max, k_max);
    let rows = ns
        .iter()
        .map(|&n| {
            let ev = table.mean_components(n);
            let var = table.variance_components(n);
            let margins: Vec<_> = (1..=k_max)
                .map(|k| bound_margin(n, k, table.cbar(n, k)))
                .collect();
            ExactRow {
                n,
                c_n: table.row_sum(n).to_string(),
                c_nk: (1..=k_max).map(|k| table.c(n, k).to_string()).collect(),
                ev_decimal: to_decimal(&ev, digits),
                ev: ev.to_string(),
                var_decimal: to_decimal(&var, digits),
                var: var.to_string(),
                cbar_decimal: to_decimal(&cbar_links(n), digits),
                min_margin: margins
                    .iter()
                    .map(|m| m.value)
                    .fold(f64::INFINITY, f64::min),
                margins_certified: margins.iter().all(|m| m.certified),
            }
        })
        .collect();
    Ok((table, rows))
}

pub fn write_exact_csv<W: Write>(mut w: W, k_max: usize, rows: &[ExactRow]) -> Result<()> {
    writeln!(w, "# gridlinks v1 exact")?;
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["n".to_string(), "c_n".to_string()];
    header.extend((1..=k_max).map(|k| format!("c_n{k}")));
    header.extend(
        [
            "ev",
            "ev_decimal",
            "var",
            "var_decimal",
            "cbar_decimal",
            "min_margin",
            "margins_certified",
        ]
        .map(String::from),
    );
    out.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.n.to_string(), r.c_n.clone()];
        rec.extend(r.c_nk.iter().cloned());
        rec.extend([
            r.ev.clone(),
            r.ev_decimal.clone(),
            r.var.clone(),
            r.var_decimal.clone(),
            r.cbar_decimal.clone(),
            r.min_margin.to_string(),
            r.margins_certified.to_string(),
        ]);
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------- fit

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitModel {
    Linear,
    Log2,
    Ln,
    ZeroIntercept,
}

impl FromStr for FitModel {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "linear" => FitModel::Linear,
            "log2" => FitModel::Log2,
            "ln" => FitModel::Ln,
            "zero-intercept" => FitModel::ZeroIntercept,
            other => bail!("unknown model {other:?} (linear, log2, ln, zero-intercept)"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutput {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
    pub residual_std_error: f64,
    pub model: FitModel,
}

/// Reads two numeric columns from a CSV, skipping `#` comment lines and
/// rows where either field is empty.
pub fn read_columns<R: Read>(input: R, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
    let mut text = String::new();
    io::BufReader::new(input).read_to_string(&mut text)?;
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            anyhow!(
                "column {name:?} not found (have {:?})",
                headers.iter().collect::<Vec<_>>()
            )
        })
    };
    let (ix, iy) = (col(x)?, col(y)?);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let (fx, fy) = (rec.get(ix).unwrap_or(""), rec.get(iy).unwrap_or(""));
        if fx.is_empty() || fy.is_empty() {
            continue;
        }
        out.push((
            fx.parse().context("non-numeric x")?,
            fy.parse().context("non-numeric y")?,
        ));
    }
    Ok(out)
}

/// Fits `y^y_pow` against `x^x_pow` (then transformed by the model).
pub fn fit_points(
    points: &[(f64, f64)],
    model: FitModel,
    x_pow: f64,
    y_pow: f64,
) -> Result<FitOutput> {
    let xf = |x: f64| {
        let x = x.powf(x_pow);
        match model {
            FitModel::Log2 => x.log2(),
            FitModel::Ln => x.ln(),
            FitModel::Linear | FitModel::ZeroIntercept => x,
        }
    };
    let pts: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| (xf(x), y.powf(y_pow)))
        .collect();
    if pts.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        bail!("transformed data contains non-finite values");
    }
    let FitResult {
        slope,
        intercept,
        r_squared,
        n_points,
        residual_std_error,
    } = ols_fit(&pts, model == FitModel::ZeroIntercept)?;
    Ok(FitOutput {
        slope,
        intercept,
        r_squared,
        n_points,
        residual_std_error,
        model,
    })
}

fn write_csv<W: Write, T: Serialize>(label: &str, mut w: W, rows: &[T]) -> Result<()> {
    writeln!(w, "# gridlinks v1 {label}")?;
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
