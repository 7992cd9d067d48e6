//! Built-in invariant suites.

use std::f64::consts::PI;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;

use tomoscope_core::decoherence::{
    amplitude_decay, amplitude_decay_closed, longtime_amplitude_tomogram, longtime_phase_tomogram,
    phase_damping, phase_damping_closed,
};
use tomoscope_core::fock::{outer_product, FockVector, TruncationPolicy};
use tomoscope_core::kerr::{
    decompose_fractional, evolve, fourier_coefficients, fractional_revival_time, revival_time, Flavor,
    KerrParams,
};
use tomoscope_core::states::{
    cat_state, mean_photon_number, CatParams, CoherentParams, InitialState, Parity, PhotonAddedParams,
};
use tomoscope_core::tomography::{
    tomogram_coherent_t0, tomogram_fractional_closed, tomogram_mixed, tomogram_pure, verify_tomogram,
    QuadratureGrid, TomogramGrid, NONNEG_TOL, NORM_TOL, SYMMETRY_TOL,
};
use tomoscope_core::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// |α|² ≤ 5, l ≤ 3, reduced grids.
    Fast,
    /// |α|² = 20, l ≤ 5, default grids.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Knobs for exercising the harness itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct Faults {
    /// Evolve the series tomograms with the wrong sign of the Kerr phase.
    pub flip_phase_sign: bool,
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    /// Residuals that are NaN fail.
    fn push(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        });
    }

    fn axioms(&mut self, label: &str, tg: &TomogramGrid) {
        let r = verify_tomogram(tg);
        self.push(format!("tomography.normalization.{label}"), r.max_norm_residual, NORM_TOL);
        if let Some(s) = r.symmetry_residual {
            self.push(format!("tomography.symmetry.{label}"), s, SYMMETRY_TOL);
        }
        self.push(format!("tomography.nonnegativity.{label}"), (-r.min_value).max(0.0), NONNEG_TOL);
    }
}

struct Params {
    coherent_mu: f64,
    photon_added_mu: f64,
    cat_mu: f64,
    max_l: usize,
    grid: Option<(usize, usize)>,
}

fn params(suite: Suite) -> Params {
    match suite {
        Suite::Fast => Params {
            coherent_mu: 5.0,
            photon_added_mu: 2.0,
            cat_mu: 5.0,
            max_l: 3,
            grid: Some((64, 257)),
        },
        Suite::Full => Params {
            coherent_mu: 20.0,
            photon_added_mu: 5.0,
            cat_mu: 20.0,
            max_l: 5,
            grid: None,
        },
    }
}

fn grid_for(p: &Params, mean_photon: f64) -> Result<QuadratureGrid> {
    let default = QuadratureGrid::default_for(mean_photon)?;
    match p.grid {
        Some((t, m)) => QuadratureGrid::new(t, m, default.x_max()),
        None => Ok(default),
    }
}

fn label(s: &InitialState) -> &'static str {
    match s {
        InitialState::Coherent(_) => "coherent",
        InitialState::PhotonAdded(_) => "photon_added",
        InitialState::Cat(_) => "cat",
    }
}

fn decomposition_fidelity(s: &InitialState, v: &FockVector, l: usize, k: &KerrParams) -> Result<f64> {
    let target = evolve(v, PI / (l as f64 * k.chi()), k);
    let n_max = v.n_max();
    let expanded = match s {
        InitialState::Coherent(p) => decompose_fractional(Flavor::Coherent, p.alpha(), l)?.expand(n_max)?,
        InitialState::PhotonAdded(p) => {
            decompose_fractional(Flavor::PhotonAdded(p.m), p.base.alpha(), l)?.expand(n_max)?
        }
        InitialState::Cat(p) => decompose_fractional(Flavor::Coherent, p.base.alpha(), l)?.expand_with(n_max, |a| {
            cat_state(
                &CatParams {
                    base: CoherentParams::from_alpha(a)?,
                    parity: p.parity,
                },
                n_max,
            )
        })?,
    };
    Ok(target.fidelity(&expanded))
}

fn inverse_dft_residual(max_l: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for l in 2..=max_l.max(7) {
        let f = fourier_coefficients(l)?;
        for k in 0..l {
            let rebuilt: Complex64 = f
                .iter()
                .enumerate()
                .map(|(r, fr)| fr * Complex64::from_polar(1.0, -2.0 * PI * (r * k) as f64 / l as f64))
                .sum();
            let e = if l % 2 == 1 { k * k.saturating_sub(1) } else { k * k };
            worst = worst.max((rebuilt - Complex64::from_polar(1.0, -PI * e as f64 / l as f64)).norm());
        }
    }
    Ok(worst)
}

/// Runs every check of the suite.
pub fn run_verify(suite: Suite, faults: Faults) -> Result<VerifyReport> {
    let p = params(suite);
    let k = KerrParams::default();
    let policy = TruncationPolicy::default();
    let mut rec = Recorder { checks: Vec::new() };
    let series_sign = if faults.flip_phase_sign { -1.0 } else { 1.0 };

    let coherent = CoherentParams::with_default_phase(p.coherent_mu)?;
    let states = [
        InitialState::Coherent(coherent),
        InitialState::PhotonAdded(PhotonAddedParams {
            base: CoherentParams::with_default_phase(p.photon_added_mu)?,
            m: 1,
        }),
        InitialState::Cat(CatParams {
            base: CoherentParams::with_default_phase(p.cat_mu)?,
            parity: Parity::Even,
        }),
    ];

    let f2 = fourier_coefficients(2)?;
    let weights = (f2[0] - Complex64::new(0.5, -0.5)).norm().max((f2[1] - Complex64::new(0.5, 0.5)).norm());
    rec.push("kerr.two_packet_weights", weights, 1e-14);
    rec.push("kerr.inverse_dft", inverse_dft_residual(p.max_l)?, 1e-13);

    for s in &states {
        let name = label(s);
        let v = s.build_with(&policy)?;
        rec.push(format!("states.norm.{name}"), (1.0 - v.norm_sqr()).abs(), 1e-12);
        let back = evolve(&v, revival_time(&k), &k);
        rec.push(format!("kerr.revival.{name}"), (1.0 - v.fidelity(&back)).abs(), 1e-12);
        for l in 2..=p.max_l {
            let fid = decomposition_fidelity(s, &v, l, &k)?;
            rec.push(format!("kerr.decomposition.{name}.l{l}"), 1.0 - fid, 1e-10);
        }

        let g = grid_for(&p, mean_photon_number(&v))?;
        let t_half = revival_time(&k) / 2.0;
        let pure = tomogram_pure(&v, t_half, &k, &g)?;
        let mixed = tomogram_mixed(&outer_product(&evolve(&v, t_half, &k)), &g)?;
        rec.push(format!("tomography.pure_vs_mixed.{name}"), pure.max_abs_diff(&mixed)?, 1e-10);
        rec.axioms(&format!("{name}.half_revival"), &pure);

        let t_sub = if matches!(s, InitialState::Cat(_)) {
            revival_time(&k) / 8.0
        } else {
            revival_time(&k) / 2.0
        };
        let rho = outer_product(&evolve(&v, t_sub, &k));
        let n_max = v.n_max();
        let mut worst_amp: f64 = 0.0;
        let mut worst_trace: f64 = 0.0;
        for gt in [0.01, 0.1, 1.0] {
            let generic = amplitude_decay(&rho, gt)?;
            let closed = amplitude_decay_closed(s, &k, t_sub, gt, n_max)?;
            worst_amp = worst_amp.max(generic.max_abs_diff(&closed));
            worst_trace = worst_trace.max((generic.trace() - 1.0).abs());
        }
        let mut worst_phase: f64 = 0.0;
        for kt in [0.01, 0.1, 0.3] {
            let generic = phase_damping(&rho, kt)?;
            let closed = phase_damping_closed(s, &k, t_sub, kt, n_max)?;
            worst_phase = worst_phase.max(generic.max_abs_diff(&closed));
            worst_trace = worst_trace.max((generic.trace() - 1.0).abs());
        }
        rec.push(format!("decoherence.amplitude_closed_vs_generic.{name}"), worst_amp, 1e-9);
        rec.push(format!("decoherence.phase_closed_vs_generic.{name}"), worst_phase, 1e-9);
        rec.push(format!("decoherence.trace.{name}"), worst_trace, 1e-10);

        let damped = tomogram_mixed(&amplitude_decay(&rho, 20.0)?, &g)?;
        rec.push(
            format!("decoherence.amplitude_long_time.{name}"),
            damped.max_abs_diff(&longtime_amplitude_tomogram(&g))?,
            1e-6,
        );
        let dephased = tomogram_mixed(&phase_damping(&rho, 50.0)?, &g)?;
        rec.push(
            format!("decoherence.phase_long_time.{name}"),
            dephased.max_abs_diff(&longtime_phase_tomogram(s, &g)?)?,
            1e-6,
        );
        rec.push(format!("decoherence.phase_theta_variation.{name}"), dephased.max_theta_variation(), 1e-8);
    }

    let v = InitialState::Coherent(coherent).build_with(&policy)?;
    let g = grid_for(&p, coherent.mean_photon())?;
    let series = tomogram_pure(&v, 0.0, &k, &g)?;
    rec.push(
        "tomography.closed_vs_series.t0",
        series.max_abs_diff(&tomogram_coherent_t0(&coherent, &g))?,
        1e-8,
    );
    rec.axioms("coherent.t0", &series);
    for l in 2..=p.max_l {
        let t = fractional_revival_time(l as u32, 1, &k)?;
        let series = tomogram_pure(&v, series_sign * t, &k, &g)?;
        let closed = tomogram_fractional_closed(&coherent, l, &g)?;
        rec.push(format!("tomography.closed_vs_series.l{l}"), series.max_abs_diff(&closed)?, 1e-8);
        rec.axioms(&format!("coherent.l{l}"), &series);
    }

    let passed = rec.checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        suite,
        passed,
        checks: rec.checks,
    })
}
