//! Zero-temperature amplitude decay and phase damping acting on Fock-basis
//! density matrices, the closed-form decohered elements of each initial-state
//! family, and the long-time tomograms.
//!
//! Channels act on a state prepared by Kerr evolution up to time t; the Kerr
//! phases are frozen at t while the channel runs.

use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::kerr::KerrParams;
use crate::special::{kerr_phase, laguerre, LnFactorial};
use crate::states::InitialState;
use crate::tomography::{tomogram_from_populations, tomogram_vacuum, Provenance, QuadratureGrid, TomogramGrid};

/// Closed-form r-sums stop after this many consecutive negligible terms.
const NEGLIGIBLE_RUN: usize = 5;
/// A term is negligible below this fraction of the running sum.
const NEGLIGIBLE_REL: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Amplitude,
    Phase,
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelKind::Amplitude => "amplitude",
            ChannelKind::Phase => "phase",
        })
    }
}

/// A channel at dimensionless time γτ (amplitude) or κτ (phase).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    kind: ChannelKind,
    scaled_time: f64,
}

impl ChannelParams {
    /// `scaled_time` may be +∞, meaning the long-time limit.
    pub fn new(kind: ChannelKind, scaled_time: f64) -> Result<Self> {
        check_time(scaled_time, true)?;
        Ok(ChannelParams { kind, scaled_time })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn scaled_time(&self) -> f64 {
        self.scaled_time
    }

    pub fn is_long_time(&self) -> bool {
        self.scaled_time == f64::INFINITY
    }

    /// Applies the channel to a finite-time state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self.kind {
            ChannelKind::Amplitude => amplitude_decay(rho, self.scaled_time),
            ChannelKind::Phase => phase_damping(rho, self.scaled_time),
        }
    }
}

fn check_time(tau: f64, allow_infinite: bool) -> Result<()> {
    if tau.is_nan() || tau < 0.0 || (!allow_infinite && tau.is_infinite()) {
        return Err(Error::Domain(format!("scaled channel time must be ≥ 0, got {tau}")));
    }
    Ok(())
}

/// k · ln x with the convention 0 · ln 0 = 0.
fn ln_pow(k: usize, ln_x: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * ln_x
    }
}

fn build_matrix<F>(dim: usize, f: F) -> DensityMatrix
where
    F: Fn(usize, usize) -> Complex64 + Sync,
{
    let data: Vec<Complex64> = (0..dim * dim)
        .into_par_iter()
        .map(|idx| f(idx / dim, idx % dim))
        .collect();
    DensityMatrix::new(Array2::from_shape_vec((dim, dim), data).expect("square buffer"))
        .expect("non-empty square matrix")
}

/// ρ_{n,n′}(τ) = e^{−γτ(n+n′)} Σ_r √(C(n+r,r) C(n′+r,r)) (1 − e^{−2γτ})^r ρ_{n+r,n′+r}(0),
/// with r running to the edge of the stored basis.
pub fn amplitude_decay(rho: &DensityMatrix, gt: f64) -> Result<DensityMatrix> {
    check_time(gt, false)?;
    if gt == 0.0 {
        return Ok(rho.clone());
    }
    let dim = rho.n_max() + 1;
    let lnf = LnFactorial::new(2 * dim);
    let ln_loss = (-(-2.0 * gt).exp_m1()).ln();
    let elems = rho.elems();
    Ok(build_matrix(dim, |n, np| {
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..dim - n.max(np) {
            let ln_w = 0.5 * (lnf.ln_binomial(n + r, r) + lnf.ln_binomial(np + r, r))
                + ln_pow(r, ln_loss);
            acc += elems[[n + r, np + r]] * ln_w.exp();
        }
        acc * (-gt * (n + np) as f64).exp()
    }))
}

/// Phase of ψ_n(t)·conj(ψ_{n′}(t)) picked up from Kerr evolution.
fn kerr_phase_diff(n: usize, np: usize, chi_t: f64) -> f64 {
    kerr_phase(np, chi_t) - kerr_phase(n, chi_t)
}

/// Analytic log-magnitudes of the initial-state amplitudes.
struct Amplitudes {
    state: InitialState,
    ln_mu: f64,
    mu: f64,
    delta: f64,
    ln_prefactor: f64,
    lnf: LnFactorial,
}

impl Amplitudes {
    fn new(state: &InitialState, max_level: usize) -> Result<Self> {
        let base = state.base();
        let mu = base.mean_photon();
        let ln_prefactor = match state {
            InitialState::Coherent(_) => -mu,
            InitialState::PhotonAdded(p) => {
                -mu - LnFactorial::new(p.m).get(p.m) - laguerre(p.m, -mu).ln()
            }
            InitialState::Cat(p) => -mu + (4.0 * p.normalization()?.powi(2)).ln(),
        };
        Ok(Amplitudes {
            state: *state,
            ln_mu: mu.ln(),
            mu,
            delta: base.delta(),
            ln_prefactor,
            lnf: LnFactorial::new(max_level + 1),
        })
    }

    /// Lowest occupied level.
    fn floor(&self) -> usize {
        match self.state {
            InitialState::PhotonAdded(p) => p.m,
            _ => 0,
        }
    }

    /// ln |C_a C_b| for occupied levels a, b, or None if either is empty.
    fn ln_pair(&self, a: usize, b: usize) -> Option<f64> {
        let lnf = &self.lnf;
        match self.state {
            InitialState::Coherent(_) => Some(
                self.ln_prefactor + ln_pow(a + b, self.ln_mu) * 0.5
                    - 0.5 * (lnf.get(a) + lnf.get(b)),
            ),
            InitialState::PhotonAdded(p) => {
                let m = p.m;
                if a < m || b < m {
                    return None;
                }
                Some(
                    self.ln_prefactor + 0.5 * ln_pow(a + b - 2 * m, self.ln_mu)
                        + 0.5 * (lnf.get(a) + lnf.get(b))
                        - lnf.get(a - m)
                        - lnf.get(b - m),
                )
            }
            InitialState::Cat(p) => {
                if !p.parity.admits(a) || !p.parity.admits(b) {
                    return None;
                }
                Some(
                    self.ln_prefactor + 0.5 * ln_pow(a + b, self.ln_mu)
                        - 0.5 * (lnf.get(a) + lnf.get(b)),
                )
            }
        }
    }

    /// arg(C_a conj(C_b)) before Kerr evolution.
    fn phase_pair(&self, a: usize, b: usize) -> f64 {
        self.delta * (a as f64 - b as f64)
    }
}

/// Closed-form ρ_{n,n′}(τ) for the state Kerr-evolved to time t, then
/// amplitude-damped for γτ = `gt`, on levels 0..=n_max.
///
/// The r-sum runs over the analytic amplitudes, stopping once
/// five consecutive terms fall below 1e−16 of the running sum (r ≤ n_max).
pub fn amplitude_decay_closed(
    state: &InitialState,
    k: &KerrParams,
    t: f64,
    gt: f64,
    n_max: usize,
) -> Result<DensityMatrix> {
    check_time(gt, false)?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("Kerr time must be finite, got {t}")));
    }
    let amps = Amplitudes::new(state, 2 * n_max + 1)?;
    let chi_t = k.chi() * t;
    let ln_loss = if gt == 0.0 { f64::NEG_INFINITY } else { (-(-2.0 * gt).exp_m1()).ln() };
    let r_step = if matches!(state, InitialState::Cat(_)) { 2 } else { 1 };
    let lnf = LnFactorial::new(2 * n_max + 1);
    Ok(build_matrix(n_max + 1, |n, np| {
        if r_step == 2 && (n + np) % 2 == 1 {
            return Complex64::new(0.0, 0.0);
        }
        let mut r = amps.floor().saturating_sub(n.min(np));
        if let InitialState::Cat(p) = state {
            if !p.parity.admits(n + r) {
                r += 1;
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut quiet = 0;
        while r <= n_max {
            let (a, b) = (n + r, np + r);
            if r > 0 && gt == 0.0 {
                break;
            }
            if let Some(ln_c) = amps.ln_pair(a, b) {
                let ln_w = ln_c
                    + 0.5 * (lnf.ln_binomial(a, r) + lnf.ln_binomial(b, r))
                    + ln_pow(r, ln_loss);
                let phase = amps.phase_pair(a, b) + kerr_phase_diff(a, b, chi_t);
                let term = Complex64::from_polar(ln_w.exp(), phase);
                acc += term;
                let scale = acc.norm();
                if scale > 0.0 && term.norm() < NEGLIGIBLE_REL * scale {
                    quiet += 1;
                    if quiet >= NEGLIGIBLE_RUN {
                        break;
                    }
                } else {
                    quiet = 0;
                }
            }
            r += r_step;
        }
        acc * (-gt * (n + np) as f64).exp()
    }))
}

/// ρ_{n,n′}(τ) = e^{−κτ(n−n′)²} ρ_{n,n′}(0).
pub fn phase_damping(rho: &DensityMatrix, kt: f64) -> Result<DensityMatrix> {
    check_time(kt, false)?;
    let dim = rho.n_max() + 1;
    let elems = rho.elems();
    Ok(build_matrix(dim, |n, np| {
        if n == np {
            return elems[[n, n]];
        }
        let d = n as f64 - np as f64;
        elems[[n, np]] * (-kt * d * d).exp()
    }))
}

/// Closed-form e^{−κτ(n−n′)²} C_n(t) conj(C_{n′}(t)) for the state
/// Kerr-evolved to time t, on levels 0..=n_max.
pub fn phase_damping_closed(
    state: &InitialState,
    k: &KerrParams,
    t: f64,
    kt: f64,
    n_max: usize,
) -> Result<DensityMatrix> {
    check_time(kt, false)?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("Kerr time must be finite, got {t}")));
    }
    let amps = Amplitudes::new(state, n_max)?;
    let chi_t = k.chi() * t;
    Ok(build_matrix(n_max + 1, |n, np| match amps.ln_pair(n, np) {
        None => Complex64::new(0.0, 0.0),
        Some(ln_c) => {
            let d = n as f64 - np as f64;
            let phase = amps.phase_pair(n, np) + kerr_phase_diff(n, np, chi_t);
            Complex64::from_polar((ln_c - kt * d * d).exp(), phase)
        }
    }))
}

/// γτ → ∞: every state relaxes to the vacuum, ω = e^{−X²}/√π.
pub fn longtime_amplitude_tomogram(g: &QuadratureGrid) -> TomogramGrid {
    let mut tg = tomogram_vacuum(g);
    tg.meta = Provenance::new("vacuum").with_channel("amplitude", f64::INFINITY);
    tg
}

/// Analytic photon-number distribution p_n = |C_n|², summed until the tail
/// past the peak is negligible.
pub fn photon_number_distribution(state: &InitialState) -> Result<Vec<f64>> {
    const CAP: usize = 4096;
    let amps = Amplitudes::new(state, CAP)?;
    let peak = (amps.mu + amps.floor() as f64).ceil() as usize;
    let mut pops = Vec::new();
    let mut total = 0.0;
    for n in 0..=CAP {
        let p = amps.ln_pair(n, n).map_or(0.0, f64::exp);
        total += p;
        pops.push(p);
        if n > peak && p > 0.0 && p < 1e-18 * total {
            return Ok(pops);
        }
        if n > peak && amps.mu == 0.0 {
            return Ok(pops);
        }
    }
    Err(Error::Capacity {
        mean_photon: amps.mu,
        cap: CAP,
    })
}

/// κτ → ∞: coherences vanish, ω(X) = Σ_n p_n u_n(X)², independent of θ.
pub fn longtime_phase_tomogram(state: &InitialState, g: &QuadratureGrid) -> Result<TomogramGrid> {
    let pops = photon_number_distribution(state)?;
    let mut tg = tomogram_from_populations(&pops, g);
    tg.meta = Provenance::new(state.to_string()).with_channel("phase", f64::INFINITY);
    Ok(tg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{outer_product, FockVector, TruncationPolicy};
    use crate::kerr::evolve;
    use crate::states::{coherent_state, CatParams, CoherentParams, Parity, PhotonAddedParams};
    use crate::tomography::tomogram_mixed;

    fn coherent(mu: f64) -> InitialState {
        InitialState::Coherent(CoherentParams::with_default_phase(mu).unwrap())
    }

    #[test]
    fn negative_times_are_rejected() {
        let rho = outer_product(&FockVector::basis(0, 3).unwrap());
        assert!(amplitude_decay(&rho, -0.1).is_err());
        assert!(phase_damping(&rho, -0.1).is_err());
        assert!(amplitude_decay(&rho, f64::NAN).is_err());
        assert!(ChannelParams::new(ChannelKind::Phase, -1.0).is_err());
        assert!(ChannelParams::new(ChannelKind::Phase, f64::INFINITY).unwrap().is_long_time());
    }

    #[test]
    fn zero_time_is_identity() {
        let v = coherent(3.0).build_with(&TruncationPolicy::default()).unwrap();
        let rho = outer_product(&v);
        assert_eq!(amplitude_decay(&rho, 0.0).unwrap(), rho);
        assert_eq!(phase_damping(&rho, 0.0).unwrap(), rho);
    }

    #[test]
    fn vacuum_is_a_fixed_point() {
        let rho = outer_product(&FockVector::basis(0, 6).unwrap());
        for gt in [0.1, 1.0, 20.0] {
            assert!(amplitude_decay(&rho, gt).unwrap().max_abs_diff(&rho) < 1e-15);
        }
    }

    #[test]
    fn damped_coherent_state_stays_coherent() {
        let p = CoherentParams::with_default_phase(5.0).unwrap();
        let n_max = InitialState::Coherent(p).required_n_max(&TruncationPolicy::default()).unwrap();
        let rho = outer_product(&coherent_state(&p, n_max).unwrap());
        let out = amplitude_decay(&rho, 0.3).unwrap();
        let damped = CoherentParams::from_alpha(p.alpha() * (-0.3f64).exp()).unwrap();
        let target = coherent_state(&damped, n_max).unwrap();
        assert!(out.expectation_in(&target) >= 1.0 - 1e-8);
    }

    #[test]
    fn phase_damping_keeps_diagonal() {
        let v = coherent(4.0).build_with(&TruncationPolicy::default()).unwrap();
        let rho = outer_product(&evolve(&v, 0.2, &KerrParams::default()));
        let out = phase_damping(&rho, 0.7).unwrap();
        assert_eq!(out.diagonal(), rho.diagonal());
    }

    #[test]
    fn closed_forms_match_channels_on_a_small_case() {
        let k = KerrParams::default();
        let t = 0.1;
        let states = [
            coherent(2.0),
            InitialState::PhotonAdded(PhotonAddedParams {
                base: CoherentParams::with_default_phase(2.0).unwrap(),
                m: 2,
            }),
            InitialState::Cat(CatParams {
                base: CoherentParams::with_default_phase(2.0).unwrap(),
                parity: Parity::Odd,
            }),
        ];
        for s in states {
            let n_max = s.required_n_max(&TruncationPolicy::default()).unwrap();
            let rho = outer_product(&evolve(&s.build(n_max).unwrap(), t, &k));
            let a = amplitude_decay(&rho, 0.2).unwrap();
            let a_closed = amplitude_decay_closed(&s, &k, t, 0.2, n_max).unwrap();
            assert!(a.max_abs_diff(&a_closed) < 1e-10, "{s}");
            let p = phase_damping(&rho, 0.2).unwrap();
            let p_closed = phase_damping_closed(&s, &k, t, 0.2, n_max).unwrap();
            assert!(p.max_abs_diff(&p_closed) < 1e-10, "{s}");
        }
    }

    #[test]
    fn long_time_phase_tomogram_of_vacuum() {
        let g = QuadratureGrid::new(8, 41, 6.0).unwrap();
        let tg = longtime_phase_tomogram(&coherent(0.0), &g).unwrap();
        assert!(tg.max_abs_diff(&tomogram_vacuum(&g)).unwrap() < 1e-15);
    }

    #[test]
    fn populations_are_normalized() {
        for s in [
            coherent(20.0),
            InitialState::PhotonAdded(PhotonAddedParams {
                base: CoherentParams::with_default_phase(5.0).unwrap(),
                m: 3,
            }),
            InitialState::Cat(CatParams {
                base: CoherentParams::with_default_phase(0.3).unwrap(),
                parity: Parity::Odd,
            }),
        ] {
            let total: f64 = photon_number_distribution(&s).unwrap().iter().sum();
            assert!((total - 1.0).abs() < 1e-13, "{s}: {total}");
        }
    }

    #[test]
    fn long_amplitude_decay_reaches_vacuum_tomogram() {
        let g = QuadratureGrid::new(8, 41, 8.0).unwrap();
        let v = coherent(5.0).build_with(&TruncationPolicy::default()).unwrap();
        let out = amplitude_decay(&outer_product(&v), 20.0).unwrap();
        let tg = tomogram_mixed(&out, &g).unwrap();
        assert!(tg.max_abs_diff(&longtime_amplitude_tomogram(&g)).unwrap() < 1e-6);
    }
}
