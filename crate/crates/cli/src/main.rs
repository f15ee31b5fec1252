use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gridlinks::experiment::Experiment;
use gridlinks_cli::*;

/// Random knots and links as grid diagrams.
#[derive(Parser)]
#[command(name = "gridlinks", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Count every diagram of small grids by component number.
    Enumerate {
        /// Grid sizes, START..END or N.
        #[arg(long)]
        n: NRange,
        /// Compare with the exact counts; exit 1 on any mismatch.
        #[arg(long)]
        verify: bool,
        /// Permit n = 8 (about 595 million diagrams).
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo sweep: knot-size, components, writhe-grid or writhe-length.
    Sample {
        experiment: Experiment,
        /// Grid sizes START..END[:STEP]; for writhe-length the largest value
        /// is the upper end of the uniform grid size.
        #[arg(long, alias = "n-range")]
        n: Option<NRange>,
        /// Samples per grid size (writhe-length: in total).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check sampled means against closed forms at four standard errors.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 10_000)]
        bin_width: u64,
        #[arg(long, default_value_t = 650_000)]
        length_cap: u64,
    },
    /// Exact counts, component moments and bound margins.
    Exact {
        #[arg(long)]
        n: NRange,
        #[arg(long, default_value_t = 5)]
        k_max: usize,
        /// Decimal places for the approximations.
        #[arg(long, default_value_t = 20)]
        digits: usize,
        /// Also write the long-form (n, k, c_nk) table here.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least-squares fit of two columns of a sample CSV.
    Fit {
        input: PathBuf,
        #[arg(long, default_value = "linear")]
        model: FitModel,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Raise x to this power before the model transform.
        #[arg(long, default_value_t = 1.0)]
        x_pow: f64,
        /// Raise y to this power.
        #[arg(long, default_value_t = 1.0)]
        y_pow: f64,
    },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Exit status for a command that ran: success or a failed verification.
enum Outcome {
    Ok,
    VerifyFailed(Vec<String>),
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()?;
    }
    match cli.command {
        Command::Enumerate {
            n,
            verify,
            allow_large,
            out,
        } => {
            let rows = enumerate_rows(&n.values(), allow_large)?;
            let (raw, table): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
            write_enumerate_csv(output(&out)?, &table)?;
            if verify {
                let bad = verify_enumeration(&raw);
                if !bad.is_empty() {
                    return Ok(Outcome::VerifyFailed(bad));
                }
            }
        }
        Command::Sample {
            experiment,
            n,
            samples,
            seed,
            format,
            out,
            verify,
            bin_width,
            length_cap,
        } => {
            let mut p = SampleParams::preset(experiment);
            if let Some(n) = n {
                p.ns = n.values();
            }
            if let Some(s) = samples {
                p.samples = s;
            }
            p.seed = seed;
            p.bin_width = bin_width;
            p.length_cap = length_cap;
            let rows = run_sample(&p)?;
            let w = output(&out)?;
            match format {
                Format::Csv => write_sample_csv(w, experiment, &rows)?,
                Format::Json => write_sample_json(w, &p, &rows)?,
            }
            if verify {
                let bad = verify_sample(experiment, &rows);
                if !bad.is_empty() {
                    return Ok(Outcome::VerifyFailed(bad));
                }
            }
        }
        Command::Exact {
            n,
            k_max,
            digits,
            table,
            out,
        } => {
            let (counts, rows) = exact_rows(&n.values(), k_max, digits)?;
            write_exact_csv(output(&out)?, k_max, &rows)?;
            if let Some(path) = table {
                counts.write_csv(BufWriter::new(File::create(&path)?))?;
            }
        }
        Command::Fit {
            input,
            model,
            x,
            y,
            x_pow,
            y_pow,
        } => {
            let file =
                File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let points = read_columns(file, &x, &y)?;
            let fit = fit_points(&points, model, x_pow, y_pow)?;
            let mut w = output(&None)?;
            serde_json::to_writer_pretty(&mut w, &fit)?;
            writeln!(w)?;
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerifyFailed(msgs)) => {
            for m in msgs {
                eprintln!("verify: {m}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
