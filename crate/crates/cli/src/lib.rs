//! Scenario-driven front end for the tomogram engine.

pub mod config;
pub mod error;
pub mod expr;
pub mod output;
pub mod verify;

use std::fmt::Write as _;

use serde::Serialize;

use tomoscope_core::decoherence::{longtime_amplitude_tomogram, longtime_phase_tomogram, ChannelKind};
use tomoscope_core::fock::{outer_product, TruncationPolicy};
use tomoscope_core::kerr::evolve;
use tomoscope_core::states::mean_photon_number;
use tomoscope_core::tomography::{
    collapse_fraction, count_strands_at, modal_count, strand_counts, tomogram_mixed, tomogram_pure, verify_tomogram,
    Provenance, TomogramGrid, TomogramReport, COLLAPSE_SLICE_FRACTION, DEFAULT_PROMINENCE,
};

pub use config::{Scenario, ScenarioConfig};
pub use error::CliError;

use crate::expr::{eval, Symbols};

/// Evaluates the tomogram a scenario describes.
pub fn compute_tomogram(s: &Scenario) -> Result<TomogramGrid, CliError> {
    let v = s.state.build_with(&TruncationPolicy::default())?;
    let g = s.quadrature_grid(mean_photon_number(&v))?;
    let mut meta = Provenance::new(s.state.to_string()).at_time(s.time);
    let mut tg = match s.channel {
        None => tomogram_pure(&v, s.time, &s.kerr, &g)?,
        Some(c) if c.is_long_time() => match c.kind() {
            ChannelKind::Amplitude => longtime_amplitude_tomogram(&g),
            ChannelKind::Phase => longtime_phase_tomogram(&s.state, &g)?,
        },
        Some(c) => {
            let rho = outer_product(&evolve(&v, s.time, &s.kerr));
            tomogram_mixed(&c.apply(&rho)?, &g)?
        }
    };
    if let Some(c) = s.channel {
        meta = meta.with_channel(c.kind().to_string(), c.scaled_time());
    }
    tg.meta = meta;
    Ok(tg)
}

#[derive(Debug, Serialize)]
pub struct TomogramSummary {
    pub state: String,
    pub chi: f64,
    pub time: f64,
    pub channel: Option<String>,
    /// Absent for the long-time limit.
    pub scaled_time: Option<f64>,
    pub n_theta: usize,
    pub n_x: usize,
    pub x_max: f64,
    pub max_value: f64,
    pub outputs: Vec<String>,
    #[serde(flatten)]
    pub report: TomogramReport,
}

/// Computes the scenario's tomogram, writes every configured output and
/// returns the axiom report.
pub fn run_tomogram(s: &Scenario) -> Result<TomogramSummary, CliError> {
    let tg = compute_tomogram(s)?;
    for out in &s.outputs {
        output::write_output(&tg, out.format, &out.path)?;
    }
    let g = tg.grid();
    Ok(TomogramSummary {
        state: s.state.to_string(),
        chi: s.kerr.chi(),
        time: s.time,
        channel: s.channel.map(|c| c.kind().to_string()),
        scaled_time: s.channel.map(|c| c.scaled_time()).filter(|t| t.is_finite()),
        n_theta: g.n_theta(),
        n_x: g.n_x(),
        x_max: g.x_max(),
        max_value: tg.max_value(),
        outputs: s.outputs.iter().map(|o| o.path.display().to_string()).collect(),
        report: verify_tomogram(&tg),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrandRow {
    pub requested: f64,
    /// Lattice angle actually used.
    pub theta: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrandReport {
    pub rows: Vec<StrandRow>,
    /// Modal count over the requested rows.
    pub modal: Option<usize>,
    /// Modal count over every lattice row.
    pub modal_all: Option<usize>,
    pub collapse_fraction: f64,
    /// Collapse fraction at or above threshold and no modal count of 4 or less.
    pub collapsed: bool,
}

impl StrandReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:>12}  {:>12}  {:>5}", "theta", "theta_grid", "count").unwrap();
        for r in &self.rows {
            writeln!(out, "{:>12.6}  {:>12.6}  {:>5}", r.requested, r.theta, r.count).unwrap();
        }
        let modal = self.modal.map_or("none".to_string(), |m| m.to_string());
        let modal_all = self.modal_all.map_or("none".to_string(), |m| m.to_string());
        writeln!(out, "modal: {modal} (all rows: {modal_all})").unwrap();
        writeln!(
            out,
            "collapse: {} (fraction {:.3})",
            self.collapsed, self.collapse_fraction
        )
        .unwrap();
        out
    }
}

/// Parses a comma-separated θ list; entries may be expressions like `pi/4`.
pub fn parse_thetas(list: &str, s: &Scenario) -> Result<Vec<f64>, CliError> {
    let symbols = Symbols {
        t_rev: Some(std::f64::consts::PI / s.kerr.chi()),
    };
    list.split(',')
        .map(|item| eval(item.trim(), &symbols).map_err(|e| CliError::config("theta", e.to_string())))
        .collect()
}

/// Strand counts at the requested angles (snapped to the nearest lattice
/// angle), or at every lattice angle when `thetas` is None.
pub fn run_strands(s: &Scenario, thetas: Option<&[f64]>) -> Result<StrandReport, CliError> {
    let tg = compute_tomogram(s)?;
    let g = *tg.grid();
    let picks: Vec<(f64, usize)> = match thetas {
        Some(list) => list.iter().map(|&t| (t, g.nearest_theta_index(t))).collect(),
        None => (0..g.n_theta()).map(|i| (g.theta(i), i)).collect(),
    };
    let mut rows = Vec::with_capacity(picks.len());
    for (requested, i) in picks {
        rows.push(StrandRow {
            requested,
            theta: g.theta(i),
            count: count_strands_at(&tg, i, DEFAULT_PROMINENCE)?,
        });
    }
    let counts: Vec<usize> = rows.iter().map(|r| r.count).collect();
    let fraction = collapse_fraction(&tg, DEFAULT_PROMINENCE)?;
    let modal_all = modal_count(&strand_counts(&tg, DEFAULT_PROMINENCE)?);
    Ok(StrandReport {
        modal: modal_count(&counts),
        modal_all,
        rows,
        collapse_fraction: fraction,
        collapsed: fraction >= COLLAPSE_SLICE_FRACTION && modal_all.is_none_or(|m| m > 4),
    })
}
