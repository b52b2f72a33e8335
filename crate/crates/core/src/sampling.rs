//! Sample-point sets: explicit lists or seeded uniform draws from a box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SampleSpec {
    Points(Vec<Vec<f64>>),
    Box {
        ranges: Vec<(f64, f64)>,
        count: usize,
        seed: u64,
    },
}

impl SampleSpec {
    pub fn dim(&self) -> Option<usize> {
        match self {
            SampleSpec::Points(p) => p.first().map(Vec::len),
            SampleSpec::Box { ranges, .. } => Some(ranges.len()),
        }
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        match self {
            SampleSpec::Points(p) => p.clone(),
            SampleSpec::Box {
                ranges,
                count,
                seed,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..*count)
                    .map(|_| {
                        ranges
                            .iter()
                            .map(|&(lo, hi)| if lo == hi { lo } else { rng.random_range(lo..hi) })
                            .collect()
                    })
                    .collect()
            }
        }
    }
}

/// Parse `lo:hi,lo:hi,...`.
pub fn parse_box(text: &str) -> Result<Vec<(f64, f64)>> {
    text.split(',')
        .map(|part| {
            let bad = || Error::Invalid(format!("box entry `{part}` is not lo:hi"));
            let (lo, hi) = part.split_once(':').ok_or_else(bad)?;
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            if !(lo <= hi) {
                return Err(Error::Invalid(format!("box entry `{part}` has lo > hi")));
            }
            Ok((lo, hi))
        })
        .collect()
}

/// Parse `x,y,z` into one point.
pub fn parse_point(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Invalid(format!("`{v}` is not a number")))
        })
        .collect()
}
