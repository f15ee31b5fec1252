//! Deterministic parallel Monte Carlo sweeps.
//!
//! Each grid size is split into fixed chunks of [`CHUNK`] samples and every
//! chunk draws from its own [`RandomStream`], indexed by (point, chunk).
//! Chunk results are merged in chunk order, so the output depends only on
//! the seed and never on the number of worker threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::GridError;
use crate::invariants::{component_count, knot_length, writhe};
use crate::sampler::{sample_closing_knot, sample_full_knot, sample_link, RandomStream};
use crate::stats::SampleSummary;

pub const CHUNK: usize = 1000;

/// Stream lane used by the writhe-vs-length experiment.
const LENGTH_LANE: u64 = u32::MAX as u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Size of closing knots against grid size.
    KnotSize,
    /// Component count of uniform diagrams against grid size.
    Components,
    /// Writhe of full-grid knots against grid size.
    WritheGrid,
    /// Writhe of full-grid knots on a uniform grid size, binned by length.
    WritheLength,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::KnotSize => "knot-size",
            Experiment::Components => "components",
            Experiment::WritheGrid => "writhe-grid",
            Experiment::WritheLength => "writhe-length",
        }
    }

    /// One observation at grid size `n`. Not used for `WritheLength`.
    pub fn observe(&self, n: usize, rs: &mut RandomStream) -> f64 {
        match self {
            Experiment::KnotSize => sample_closing_knot(n, rs).size() as f64,
            Experiment::Components => component_count(&sample_link(n, rs)) as f64,
            Experiment::WritheGrid | Experiment::WritheLength => {
                writhe(&sample_full_knot(n, rs).to_link()) as f64
            }
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, GridError> {
        match s {
            "knot-size" => Ok(Experiment::KnotSize),
            "components" => Ok(Experiment::Components),
            "writhe-grid" => Ok(Experiment::WritheGrid),
            "writhe-length" => Ok(Experiment::WritheLength),
            other => Err(GridError::Parse(format!("unknown experiment {other:?}"))),
        }
    }
}

fn chunks(samples: usize) -> Vec<(u64, usize)> {
    (0..samples.div_ceil(CHUNK))
        .map(|j| (j as u64, CHUNK.min(samples - j * CHUNK)))
        .collect()
}

/// Runs `samples` observations at each grid size in `ns`. Point `p` of
/// `ns` uses stream indices `p << 32 | chunk`.
pub fn grid_sweep(
    experiment: Experiment,
    ns: &[usize],
    samples: usize,
    seed: u64,
) -> Vec<(usize, SampleSummary)> {
    assert!(
        experiment != Experiment::WritheLength,
        "use length_sweep for the writhe-vs-length experiment"
    );
    let units: Vec<(usize, u64, usize)> = ns
        .iter()
        .enumerate()
        .flat_map(|(p, _)| chunks(samples).into_iter().map(move |(j, m)| (p, j, m)))
        .collect();
    let parts: Vec<(usize, SampleSummary)> = units
        .par_iter()
        .map(|&(p, j, m)| {
            let mut rs = RandomStream::new(seed, (p as u64) << 32 | j);
            let mut s = SampleSummary::new();
            for _ in 0..m {
                s.accumulate(experiment.observe(ns[p], &mut rs));
            }
            (p, s)
        })
        .collect();

    let mut out: Vec<(usize, SampleSummary)> =
        ns.iter().map(|&n| (n, SampleSummary::new())).collect();
    for (p, s) in parts {
        out[p].1 = out[p].1.merge(&s);
    }
    out
}

/// Writhe of `samples` full-grid knots with grid size uniform on
/// `2..=n_max`, grouped by knot length rounded to the nearest `bin_width`.
/// Bins above `length_cap` are dropped. Keys are bin centres.
pub fn length_sweep(
    n_max: usize,
    samples: usize,
    seed: u64,
    bin_width: u64,
    length_cap: u64,
) -> BTreeMap<u64, SampleSummary> {
    assert!(n_max >= 2 && bin_width > 0);
    let parts: Vec<BTreeMap<u64, SampleSummary>> = chunks(samples)
        .par_iter()
        .map(|&(j, m)| {
            let mut rs = RandomStream::new(seed, LENGTH_LANE << 32 | j);
            let mut bins: BTreeMap<u64, SampleSummary> = BTreeMap::new();
            for _ in 0..m {
                let n = rs.below(2, n_max + 1);
                let knot = sample_full_knot(n, &mut rs);
                let len = knot_length(&knot) as u64;
                let centre = (len + bin_width / 2) / bin_width * bin_width;
                let w = writhe(&knot.to_link()) as f64;
                if centre <= length_cap {
                    bins.entry(centre).or_default().accumulate(w);
                }
            }
            bins
        })
        .collect();

    let mut out: BTreeMap<u64, SampleSummary> = BTreeMap::new();
    for part in parts {
        for (bin, s) in part {
            let merged = out.get(&bin).map_or_else(|| s.clone(), |acc| acc.merge(&s));
            out.insert(bin, merged);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunking_covers_all_samples() {
        assert_eq!(chunks(2500), vec![(0, 1000), (1, 1000), (2, 500)]);
        assert!(chunks(0).is_empty());
    }

    #[test]
    fn sweep_is_independent_of_thread_count() {
        let ns = [10, 20, 30];
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| grid_sweep(Experiment::WritheGrid, &ns, 2500, 9))
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one, four);
        assert_eq!(one[1].1.count, 2500);
    }

    #[test]
    fn length_bins_are_rounded_and_capped() {
        let bins = length_sweep(40, 3000, 1, 100, 700);
        assert!(bins.keys().all(|b| b % 100 == 0 && *b <= 700));
        let total: u64 = bins.values().map(|s| s.count).sum();
        assert!(total > 0 && total <= 3000);
    }

    #[test]
    fn experiment_names_round_trip() {
        for e in [
            Experiment::KnotSize,
            Experiment::Components,
            Experiment::WritheGrid,
            Experiment::WritheLength,
        ] {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!("writhe".parse::<Experiment>().is_err());
    }
}
