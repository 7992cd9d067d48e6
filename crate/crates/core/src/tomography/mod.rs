//! Optical tomograms ω(X_θ, θ) of pure and mixed states, closed-form
//! reference tomograms, strand analysis and the tomogram axiom checks.

mod check;
mod grid;
mod strands;

pub use check::{verify_tomogram, TomogramReport, NONNEG_TOL, NORM_TOL, SYMMETRY_TOL};
pub use grid::{
    Provenance, QuadratureGrid, TomogramGrid, DEFAULT_THETA_COUNT, DEFAULT_X_COUNT,
    DEFAULT_X_PADDING,
};
pub use strands::{
    collapse_fraction, count_strands, count_strands_at, modal_count, strand_counts,
    COLLAPSE_PEAK_FRACTION, COLLAPSE_SLICE_FRACTION, DEFAULT_PROMINENCE,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{oscillator_functions_into, DensityMatrix, FockVector, TRACE_TOL};
use crate::kerr::{evolve, fourier_coefficients, KerrParams};
use crate::special::roots_of_unity_conj;
use crate::states::CoherentParams;

/// u_n(X_j) for every lattice X, laid out X-major with `n_max + 1` entries
/// per node.
fn oscillator_table(g: &QuadratureGrid, n_max: usize) -> Vec<f64> {
    let width = n_max + 1;
    let mut table = vec![0.0; g.n_x() * width];
    table
        .par_chunks_mut(width)
        .enumerate()
        .for_each(|(j, row)| oscillator_functions_into(g.x(j), row));
    table
}

/// Evaluates `f(θ-index, X-index)` over the lattice, one θ row per task.
fn fill_grid<F>(g: &QuadratureGrid, f: F) -> Vec<f64>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let mut values = vec![0.0; g.n_theta() * g.n_x()];
    values
        .par_chunks_mut(g.n_x())
        .enumerate()
        .for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = f(i, j);
            }
        });
    values
}

/// ω = |Σ_n C_n e^{−inθ} u_n(X)|² for amplitudes already carrying any Kerr phase.
fn pure_values(coeffs: &[Complex64], g: &QuadratureGrid) -> Vec<f64> {
    let width = coeffs.len();
    let table = oscillator_table(g, width - 1);
    let roots = roots_of_unity_conj(g.n_theta());
    let t = g.n_theta();
    let mut values = vec![0.0; g.n_theta() * g.n_x()];
    values
        .par_chunks_mut(g.n_x())
        .enumerate()
        .for_each(|(i, row)| {
            let phased: Vec<Complex64> = coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| c * roots[(n * i) % t])
                .collect();
            for (j, slot) in row.iter_mut().enumerate() {
                let u = &table[j * width..(j + 1) * width];
                let amp: Complex64 = phased.iter().zip(u).map(|(a, &un)| a * un).sum();
                *slot = amp.norm_sqr();
            }
        });
    values
}

/// Tomogram of the Kerr-evolved pure state ψ(t).
pub fn tomogram_pure(
    v: &FockVector,
    t: f64,
    k: &KerrParams,
    g: &QuadratureGrid,
) -> Result<TomogramGrid> {
    if !v.is_normalized(TRACE_TOL) {
        return Err(Error::Precondition(format!(
            "state must be normalized, Σ|C_n|² = {}",
            v.norm_sqr()
        )));
    }
    let evolved = evolve(v, t, k);
    let values = pure_values(evolved.coeffs(), g);
    TomogramGrid::from_values(*g, values, Provenance::new("pure").at_time(t))
}

/// Tomogram Σ_{n,n′} ρ_{n,n′} u_n u_{n′} e^{−i(n−n′)θ} of a mixed state.
///
/// The sum is regrouped by diagonal offset d = n − n′: for each X the
/// Hermitian band sums S_d(X) = Σ_{n′} ρ_{n′+d,n′} u_{n′+d} u_{n′} are formed
/// once, then ω(X, θ) = S_0 + 2 Re Σ_{d>0} e^{−idθ} S_d.
pub fn tomogram_mixed(rho: &DensityMatrix, g: &QuadratureGrid) -> Result<TomogramGrid> {
    rho.validate()?;
    let dim = rho.n_max() + 1;
    let table = oscillator_table(g, dim - 1);
    let elems = rho.elems();

    let mut bands = vec![Complex64::new(0.0, 0.0); g.n_x() * dim];
    bands
        .par_chunks_mut(dim)
        .enumerate()
        .for_each(|(j, band)| {
            let u = &table[j * dim..(j + 1) * dim];
            for (d, slot) in band.iter_mut().enumerate() {
                let mut s = Complex64::new(0.0, 0.0);
                for np in 0..(dim - d) {
                    s += elems[[np + d, np]] * (u[np + d] * u[np]);
                }
                *slot = s;
            }
        });

    let roots = roots_of_unity_conj(g.n_theta());
    let t = g.n_theta();
    let values = fill_grid(g, |i, j| {
        let band = &bands[j * dim..(j + 1) * dim];
        let mut acc = band[0].re;
        for (d, s) in band.iter().enumerate().skip(1) {
            acc += 2.0 * (roots[(d * i) % t] * s).re;
        }
        acc
    });
    TomogramGrid::from_values(*g, values, Provenance::new("mixed"))
}

/// ω = π^{−1/2} exp[−(X − √(2|α|²) cos(δ − θ))²].
pub fn tomogram_coherent_t0(p: &CoherentParams, g: &QuadratureGrid) -> TomogramGrid {
    let radius = (2.0 * p.mean_photon()).sqrt();
    let delta = p.delta();
    let norm = PI.sqrt().recip();
    let values = fill_grid(g, |i, j| {
        let shift = g.x(j) - radius * (delta - g.theta(i)).cos();
        norm * (-shift * shift).exp()
    });
    TomogramGrid::from_values(*g, values, Provenance::new("coherent closed form").at_time(0.0))
        .expect("grid-sized buffer")
}

/// Closed form at the l-sub-packet instant t = π/(lχ):
/// ω = π^{−1/2} |Σ_r f_{r,l} exp[−X²/2 − |α|²/2 − α_r² e^{−2iθ}/2 + √2 α_r X e^{−iθ}]|².
pub fn tomogram_fractional_closed(
    p: &CoherentParams,
    l: usize,
    g: &QuadratureGrid,
) -> Result<TomogramGrid> {
    let weights = fourier_coefficients(l)?;
    let alpha = p.alpha();
    let lf = l as f64;
    let amplitudes: Vec<Complex64> = (0..l)
        .map(|r| {
            let angle = if l % 2 == 1 {
                -2.0 * PI * r as f64 / lf
            } else {
                -PI * (2.0 * r as f64 - 1.0) / lf
            };
            alpha * Complex64::from_polar(1.0, angle)
        })
        .collect();
    let half_mu = 0.5 * p.mean_photon();
    let norm = PI.sqrt().recip();
    let values = fill_grid(g, |i, j| {
        let theta = g.theta(i);
        let x = g.x(j);
        let rot = Complex64::from_polar(1.0, -theta);
        let rot2 = Complex64::from_polar(1.0, -2.0 * theta);
        let amp: Complex64 = weights
            .iter()
            .zip(&amplitudes)
            .map(|(&f, &a)| {
                let exponent = Complex64::new(-0.5 * x * x - half_mu, 0.0) - 0.5 * a * a * rot2
                    + std::f64::consts::SQRT_2 * x * a * rot;
                f * exponent.exp()
            })
            .sum();
        norm * amp.norm_sqr()
    });
    TomogramGrid::from_values(
        *g,
        values,
        Provenance::new(format!("coherent {l}-packet closed form")),
    )
}

/// Vacuum tomogram e^{−X²}/√π on every θ.
pub fn tomogram_vacuum(g: &QuadratureGrid) -> TomogramGrid {
    let norm = PI.sqrt().recip();
    let values = fill_grid(g, |_, j| {
        let x = g.x(j);
        norm * (-x * x).exp()
    });
    TomogramGrid::from_values(*g, values, Provenance::new("vacuum")).expect("grid-sized buffer")
}

/// θ-independent tomogram Σ_n p_n u_n(X)² of a Fock-diagonal state.
pub fn tomogram_from_populations(populations: &[f64], g: &QuadratureGrid) -> TomogramGrid {
    let width = populations.len();
    let table = oscillator_table(g, width - 1);
    let column: Vec<f64> = (0..g.n_x())
        .map(|j| {
            let u = &table[j * width..(j + 1) * width];
            populations.iter().zip(u).map(|(p, un)| p * un * un).sum()
        })
        .collect();
    let values = fill_grid(g, |_, j| column[j]);
    TomogramGrid::from_values(*g, values, Provenance::new("Fock-diagonal")).expect("grid-sized buffer")
}
