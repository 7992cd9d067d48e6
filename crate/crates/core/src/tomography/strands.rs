use std::f64::consts::PI;

use super::grid::TomogramGrid;
use crate::error::{Error, Result};

/// Local maxima below this fraction of the slice maximum are ignored.
pub const DEFAULT_PROMINENCE: f64 = 0.05;
/// A slice whose peak is below this fraction of 1/√π counts as washed out.
pub const COLLAPSE_PEAK_FRACTION: f64 = 0.5;
/// Share of slices that must look washed out or fringed for a collapse.
pub const COLLAPSE_SLICE_FRACTION: f64 = 0.9;

/// Number of strands crossing the lattice angle `theta`.
pub fn count_strands(tg: &TomogramGrid, theta: f64, prominence: f64) -> Result<usize> {
    let i = tg.grid().theta_index(theta)?;
    count_strands_at(tg, i, prominence)
}

/// Counts local maxima of ω(·, θ_i) above `prominence · max_X ω(·, θ_i)`.
/// Runs of equal samples count as a single maximum.
pub fn count_strands_at(tg: &TomogramGrid, i_theta: usize, prominence: f64) -> Result<usize> {
    if i_theta >= tg.grid().n_theta() {
        return Err(Error::Domain(format!("θ index {i_theta} out of range")));
    }
    count_peaks(tg.slice(i_theta), prominence)
}

fn count_peaks(slice: &[f64], prominence: f64) -> Result<usize> {
    if slice.is_empty() {
        return Err(Error::Domain("empty tomogram slice".into()));
    }
    if slice.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("tomogram slice contains non-finite values".into()));
    }
    let peak = slice.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak <= 0.0 {
        return Ok(0);
    }
    let threshold = prominence * peak;
    let mut count = 0;
    let mut start = 0;
    while start < slice.len() {
        let v = slice[start];
        let mut end = start;
        while end + 1 < slice.len() && slice[end + 1] == v {
            end += 1;
        }
        let left_lower = start == 0 || slice[start - 1] < v;
        let right_lower = end + 1 == slice.len() || slice[end + 1] < v;
        if left_lower && right_lower && v > threshold {
            count += 1;
        }
        start = end + 1;
    }
    Ok(count)
}

/// Strand count on every θ row.
pub fn strand_counts(tg: &TomogramGrid, prominence: f64) -> Result<Vec<usize>> {
    (0..tg.grid().n_theta())
        .map(|i| count_strands_at(tg, i, prominence))
        .collect()
}

/// Most frequent value; ties go to the smaller count.
pub fn modal_count(counts: &[usize]) -> Option<usize> {
    let max = *counts.iter().max()?;
    let mut hist = vec![0usize; max + 1];
    for &c in counts {
        hist[c] += 1;
    }
    hist.iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(c, _)| c)
}

/// Share of θ rows that show no clean few-strand structure: more than four
/// maxima, or a peak below half the coherent-state maximum 1/√π.
pub fn collapse_fraction(tg: &TomogramGrid, prominence: f64) -> Result<f64> {
    let n = tg.grid().n_theta();
    let floor = COLLAPSE_PEAK_FRACTION / PI.sqrt();
    let mut hits = 0;
    for i in 0..n {
        let slice = tg.slice(i);
        let peak = slice.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if count_peaks(slice, prominence)? > 4 || peak < floor {
            hits += 1;
        }
    }
    Ok(hits as f64 / n as f64)
}
