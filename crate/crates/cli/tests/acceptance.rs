//! Acceptance suite: one numbered check per target result, each printed as
//! a single PASS/FAIL line. Runs as a plain binary so the report is always
//! visible; exits nonzero if any check fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use gridlinks::enumerate::{enumerate_links, tally};
use gridlinks::exact::{
    bound_margin, cbar_links, cbar_partition, cbar_table_recurrence, cbar_table_series,
    expected_components, factorial, inverse_e_bracket, subfactorial, to_decimal, BigInt,
    BigRational,
};
use gridlinks::experiment::{grid_sweep, length_sweep, Experiment};
use gridlinks::invariants::{component_count, component_count_geometric, writhe};
use gridlinks::sampler::{sample_closing_knot, sample_link, RandomStream};
use gridlinks_cli::{fit_points, run_sample, FitModel, NRange, SampleParams, SampleRow};
use num_traits::{One, Signed};
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

const SMALL_GRID_COUNTS: [(usize, [u64; 3], u64, &str); 6] = [
    (2, [2, 0, 0], 2, "1.0000"),
    (3, [12, 0, 0], 12, "1.0000"),
    (4, [144, 72, 0], 216, "1.3333"),
    (5, [2_880, 2_400, 0], 5_280, "1.4545"),
    (6, [86_400, 93_600, 10_800], 190_800, "1.6038"),
    (7, [3_628_800, 4_656_960, 1_058_400], 9_344_160, "1.7249"),
];

fn small_grid_counts() -> Check {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_gridlinks"))
        .args(["enumerate", "--n", "2..7", "--verify"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    let mut matched = 0;
    for ((n, c, total, mean), row) in SMALL_GRID_COUNTS.iter().zip(&rows) {
        let got: Vec<u64> = row[1..5].iter().map(|f| f.parse().unwrap()).collect();
        // Missing component counts are zero.
        if row[0] != n.to_string() || got[..3] != c[..] || got[3] != *total || row[5] != *mean {
            return Err(format!("row n={n} is {row:?}"));
        }
        matched += 1;
    }
    ensure(
        matched == 6 && elapsed < Duration::from_secs(120),
        format!("6 rows, 18 counts and 6 means exact; enumeration took {elapsed:.1?}"),
    )
}

fn three_routes() -> Check {
    let start = Instant::now();
    let rec = cbar_table_recurrence(60, 30);
    let ser = cbar_table_series(60, 30);
    for n in 0..=60 {
        for k in 0..=30 {
            if rec.cbar(n, k) != ser.cbar(n, k) {
                return Err(format!("recurrence and series differ at n={n} k={k}"));
            }
        }
    }
    for n in 2..=15 {
        for k in 1..=n {
            let rk = if k <= 30 {
                rec.cbar(n, k).clone()
            } else {
                BigRational::default()
            };
            if rk != cbar_partition(n, k) {
                return Err(format!("partition sum differs at n={n} k={k}"));
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(10),
        format!("three routes equal for n<=15, recurrence = series for n<=60, in {elapsed:.1?}"),
    )
}

fn closed_forms() -> Check {
    let table = cbar_table_recurrence(60, 30);
    for n in 2..=60 {
        let knots = factorial(n) * factorial(n - 1);
        if table.c(n, 1) != knots {
            return Err(format!("c(n,1) != n!(n-1)! at n={n}"));
        }
        if table.row_sum(n) != factorial(n) * subfactorial(n) {
            return Err(format!("row sum != n! * !n at n={n}"));
        }
    }
    for (n, c, total, _) in SMALL_GRID_COUNTS {
        let mut counts = BTreeMap::new();
        enumerate_links(n, false, |d| {
            *counts.entry(component_count(d)).or_insert(0u64) += 1
        })
        .map_err(|e| e.to_string())?;
        let sum: u64 = counts.values().sum();
        if counts.get(&1) != Some(&c[0])
            || BigInt::from(sum) != factorial(n) * subfactorial(n)
            || sum != total
        {
            return Err(format!("enumeration disagrees at n={n}: {counts:?}"));
        }
    }
    Ok("c(n,1) = n!(n-1)! and sum = n! * !n for n<=60; enumeration agrees for n<=7".into())
}

fn inverse_e_limit() -> Check {
    // A 30-digit interval is far wider than 1/51!, so the check uses a
    // bracket accurate to well over 100 digits and also confirms the first
    // 30 digits of the limit.
    let (lo, hi) = inverse_e_bracket(80);
    let digits = "0.367879441171442321595523770161";
    if to_decimal(&lo, 30) != digits || to_decimal(&hi, 30) != digits {
        return Err("1/e bracket does not match its 30-digit expansion".into());
    }
    for n in 1..=50 {
        let c = cbar_links(n);
        let eps = BigRational::new(BigInt::one(), factorial(n + 1));
        // [lo, hi] inside [c - eps, c + eps] puts 1/e there too.
        if !(&c - &eps <= lo && hi <= &c + &eps) {
            return Err(format!("|cbar_n - 1/e| > 1/(n+1)! at n={n}"));
        }
    }
    let gap = (&cbar_links(50) - &lo).abs();
    ensure(
        to_decimal(&cbar_links(50), 30) == digits,
        format!(
            "holds for n<=50; |cbar_50 - 1/e| ~ {:.3e}",
            num_traits::ToPrimitive::to_f64(&gap).unwrap()
        ),
    )
}

fn component_bound() -> Check {
    let table = cbar_table_recurrence(200, 20);
    let mut checked = 0;
    let mut smallest = f64::INFINITY;
    for n in 2..=200 {
        for k in 1..=20 {
            let m = bound_margin(n, k, table.cbar(n, k));
            if !m.certified {
                return Err(format!("margin negative at n={n} k={k}: {}", m.value));
            }
            if k == 1 && m.exact != Some(BigRational::default()) {
                return Err(format!("bound not sharp at n={n} k=1"));
            }
            if k > 1 {
                smallest = smallest.min(m.value);
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} margins >= 0, zero at k=1; smallest k>1 margin {smallest:.3e}"
    ))
}

fn knot_size_distribution() -> Check {
    let n = 100;
    let draws = 100_000;
    let mut rs = RandomStream::new(6, 0);
    let mut hist = vec![0u64; n + 1];
    for _ in 0..draws {
        hist[sample_closing_knot(n, &mut rs).size()] += 1;
    }
    let expected = draws as f64 / (n - 1) as f64;
    let chi2: f64 = hist[2..]
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    let q999 = ChiSquared::new(97.0).unwrap().inverse_cdf(0.999);
    let xs: Vec<f64> = hist
        .iter()
        .enumerate()
        .flat_map(|(s, &c)| std::iter::repeat_n(s as f64, c as usize))
        .collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
    let target_var = 9800.0 / 12.0;
    ensure(
        hist[..2].iter().all(|&c| c == 0)
            && chi2 < q999
            && (mean - 51.0).abs() <= 0.3
            && (var / target_var - 1.0).abs() <= 0.03,
        format!("chi2 {chi2:.1} < {q999:.1}; mean {mean:.3}; variance {var:.1} vs {target_var:.1}"),
    )
}

fn sweep(experiment: Experiment) -> Vec<SampleRow> {
    let mut p = SampleParams::preset(experiment);
    p.ns = NRange {
        start: 10,
        end: 500,
        step: 10,
    }
    .values();
    run_sample(&p).unwrap()
}

fn fit(
    rows: &[SampleRow],
    model: FitModel,
    x_pow: f64,
    pick: impl Fn(&SampleRow) -> (f64, f64),
) -> gridlinks_cli::FitOutput {
    let pts: Vec<(f64, f64)> = rows.iter().map(pick).collect();
    fit_points(&pts, model, x_pow, 1.0).unwrap()
}

fn knot_size_regression() -> Check {
    let rows = sweep(Experiment::KnotSize);
    let f = fit(&rows, FitModel::Linear, 1.0, |r| (r.key as f64, r.mean));
    ensure(
        (0.495..=0.505).contains(&f.slope) && f.r_squared > 0.999,
        format!(
            "slope {:.5}, intercept {:.4}, R^2 {:.6}",
            f.slope, f.intercept, f.r_squared
        ),
    )
}

fn component_moments() -> Check {
    let table = cbar_table_recurrence(30, 15);
    for n in 2..=30 {
        if expected_components(n) != table.mean_components(n) {
            return Err(format!("EV formula differs from table at n={n}"));
        }
    }
    let mut detail = vec!["EV exact for n<=30".to_string()];
    for (n, s) in grid_sweep(Experiment::Components, &[64, 256], 10_000, 8) {
        let ev = num_traits::ToPrimitive::to_f64(&expected_components(n)).unwrap();
        let se = (s.variance() / s.count as f64).sqrt();
        let z = (s.mean - ev) / se;
        detail.push(format!("n={n}: mean {:.4} vs {ev:.4} ({z:+.2} se)", s.mean));
        if z.abs() > 3.0 {
            return Err(detail.join("; "));
        }
    }
    Ok(detail.join("; "))
}

fn component_regression() -> Check {
    let rows = sweep(Experiment::Components);
    let fm = fit(&rows, FitModel::Log2, 1.0, |r| (r.key as f64, r.mean));
    let fv = fit(&rows, FitModel::Log2, 1.0, |r| (r.key as f64, r.variance));
    ensure(
        (0.63..=0.74).contains(&fm.slope) && (0.60..=0.73).contains(&fv.slope),
        format!("mean slope {:.4}, variance slope {:.4}", fm.slope, fv.slope),
    )
}

fn writhe_grid() -> Check {
    let start = Instant::now();
    let rows = sweep(Experiment::WritheGrid);
    let elapsed = start.elapsed();
    let covered = rows
        .iter()
        .filter(|r| r.ci_low <= 0.0 && 0.0 <= r.ci_high)
        .count();
    let frac = covered as f64 / rows.len() as f64;
    let fv = fit(&rows, FitModel::ZeroIntercept, 2.0, |r| {
        (r.key as f64, r.variance)
    });
    let fk = fit(&rows, FitModel::ZeroIntercept, 2.0, |r| (r.variance, r.m4));
    // Budget is for one worker; more workers only make this faster.
    ensure(
        frac >= 0.85
            && (0.050..=0.061).contains(&fv.slope)
            && (3.2..=3.8).contains(&fk.slope)
            && elapsed < Duration::from_secs(30 * 60),
        format!(
            "CI covers 0 at {covered}/{}; var/n^2 slope {:.5}; m4/var^2 slope {:.4}; {elapsed:.1?}",
            rows.len(),
            fv.slope,
            fk.slope
        ),
    )
}

fn writhe_length() -> Check {
    let bins = length_sweep(500, 200_000, 0, 10_000, 160_000);
    let rows: Vec<SampleRow> = bins
        .iter()
        .map(|(&b, s)| SampleRow::from_summary(b, s))
        .collect();
    let fv = fit(&rows, FitModel::ZeroIntercept, 1.0, |r| {
        (r.key as f64, r.variance)
    });
    let fk = fit(&rows, FitModel::ZeroIntercept, 2.0, |r| (r.variance, r.m4));
    ensure(
        (0.070..=0.096).contains(&fv.slope) && (3.1..=3.9).contains(&fk.slope),
        format!(
            "{} bins; var/l slope {:.5}; m4/var^2 slope {:.4}",
            rows.len(),
            fv.slope,
            fk.slope
        ),
    )
}

fn writhe_symmetry() -> Check {
    let mut total = 0u64;
    for n in 2..=5 {
        let hist = tally(n, false, writhe).map_err(|e| e.to_string())?;
        for (w, c) in &hist {
            if hist.get(&-w) != Some(c) {
                return Err(format!(
                    "n={n}: count of writhe {w} is {c} but of {} is {:?}",
                    -w,
                    hist.get(&-w)
                ));
            }
        }
        for p in [1u32, 3, 5, 7] {
            let m: i128 = hist
                .iter()
                .map(|(w, c)| (*w as i128).pow(p) * *c as i128)
                .sum();
            if m != 0 {
                return Err(format!("n={n}: odd moment {p} is {m}"));
            }
        }
        total += hist.values().sum::<u64>();
    }
    Ok(format!(
        "{total} diagrams (n=2..5): histograms symmetric, odd moments zero"
    ))
}

fn oracle_suite() -> Check {
    let mut checked = 0u64;
    for n in 2..=4 {
        let mut bad = None;
        enumerate_links(n, false, |d| {
            checked += 1;
            if component_count(d) != component_count_geometric(d) {
                bad = Some(d.to_string());
            }
        })
        .map_err(|e| e.to_string())?;
        if let Some(d) = bad {
            return Err(format!("component oracles differ on {d}"));
        }
    }
    for (lane, n) in [10usize, 100, 500].into_iter().enumerate() {
        let mut rs = RandomStream::new(13, lane as u64);
        for _ in 0..100_000 {
            let d = sample_link(n, &mut rs);
            if component_count(&d) != component_count_geometric(&d) {
                return Err(format!("component oracles differ on {d}"));
            }
            checked += 1;
        }
    }
    let mut rs = RandomStream::new(13, 99);
    for i in 0..10_000 {
        let d = sample_link(2 + i % 199, &mut rs);
        if writhe(&d.mirror()) != -writhe(&d) {
            return Err(format!("mirror does not negate writhe on {d}"));
        }
    }
    Ok(format!(
        "{checked} diagrams agree; mirror negates writhe on 10000"
    ))
}

fn main() {
    let checks: [Criterion; 13] = [
        ("small-grid count table", small_grid_counts),
        ("three-route c(n,k) agreement", three_routes),
        ("closed-form counts", closed_forms),
        ("1/e limit", inverse_e_limit),
        ("component-count bound", component_bound),
        ("knot-size distribution", knot_size_distribution),
        ("knot-size regression", knot_size_regression),
        ("component-count moments", component_moments),
        ("component-count regression", component_regression),
        ("writhe vs grid size", writhe_grid),
        ("writhe vs knot length", writhe_length),
        ("exhaustive writhe symmetry", writhe_symmetry),
        ("oracle suite", oracle_suite),
    ];
    // `cargo test` passes harness flags; a bare argument filters by number.
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "[{tag}] {id:>2}. {name}: {detail} ({:.1?})",
            start.elapsed()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
