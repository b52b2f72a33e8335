//! Consistency checks across a set of sample points.

use crate::error::{Error, Result};

use super::CaseTag;

/// The common ε of a sample set.
pub fn common_epsilon(eps: &[i8]) -> Result<i8> {
    let first = *eps.first().ok_or_else(|| Error::Invalid("no sample points".into()))?;
    if eps.iter().any(|&e| e != first) {
        return Err(Error::MixedEpsilon);
    }
    Ok(first)
}

/// The majority case tag, or `AmbiguousCase` with the indices that disagree.
pub fn common_case(tags: &[CaseTag]) -> Result<CaseTag> {
    if tags.is_empty() {
        return Err(Error::Invalid("no sample points".into()));
    }
    let mut counts = std::collections::BTreeMap::new();
    for t in tags {
        *counts.entry(*t).or_insert(0usize) += 1;
    }
    let (&major, _) = counts.iter().max_by_key(|(_, n)| **n).unwrap();
    let off: Vec<usize> = tags
        .iter()
        .enumerate()
        .filter(|(_, t)| **t != major)
        .map(|(i, _)| i)
        .collect();
    if off.is_empty() {
        Ok(major)
    } else {
        Err(Error::AmbiguousCase(off))
    }
}

/// `(sgn(1+C), sgn(1−C))`, required to be the same at every sample.
pub fn common_branch(cs: &[f64]) -> Result<(i8, i8)> {
    let sign = |v: f64| if v > 0.0 { 1i8 } else { -1 };
    let first = *cs.first().ok_or_else(|| Error::Invalid("no sample points".into()))?;
    let b = (sign(1.0 + first), sign(1.0 - first));
    for &c in cs {
        if (sign(1.0 + c), sign(1.0 - c)) != b {
            return Err(Error::Branch);
        }
    }
    Ok(b)
}
