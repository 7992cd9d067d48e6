//! Initial-state families: coherent, m-photon-added coherent, and even/odd
//! coherent (cat) states.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{truncation_dim, truncation_dim_shifted, FockVector, TruncationPolicy};
use crate::special::laguerre;

/// Default phase δ of the coherent amplitude.
pub const DEFAULT_DELTA: f64 = FRAC_PI_4;

/// α = √(mean_photon) · e^{iδ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentParams {
    mean_photon: f64,
    delta: f64,
}

impl CoherentParams {
    /// `delta` is wrapped into [0, 2π).
    pub fn new(mean_photon: f64, delta: f64) -> Result<Self> {
        if !mean_photon.is_finite() || mean_photon < 0.0 {
            return Err(Error::Domain(format!(
                "mean photon number must be finite and non-negative, got {mean_photon}"
            )));
        }
        if !delta.is_finite() {
            return Err(Error::Domain(format!("phase δ must be finite, got {delta}")));
        }
        let mut delta = delta.rem_euclid(TAU);
        if delta >= TAU {
            delta = 0.0;
        }
        Ok(CoherentParams { mean_photon, delta })
    }

    /// |α|² with the default phase δ = π/4.
    pub fn with_default_phase(mean_photon: f64) -> Result<Self> {
        Self::new(mean_photon, DEFAULT_DELTA)
    }

    pub fn from_alpha(alpha: Complex64) -> Result<Self> {
        Self::new(alpha.norm_sqr(), alpha.arg())
    }

    pub fn mean_photon(&self) -> f64 {
        self.mean_photon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.mean_photon.sqrt(), self.delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonAddedParams {
    pub base: CoherentParams,
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_flag(h: u8) -> Result<Self> {
        match h {
            0 => Ok(Parity::Even),
            1 => Ok(Parity::Odd),
            _ => Err(Error::Domain(format!("parity flag must be 0 or 1, got {h}"))),
        }
    }

    pub fn flag(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// Whether Fock level `n` carries weight in a cat state of this parity.
    pub fn admits(self, n: usize) -> bool {
        n % 2 == self.flag()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatParams {
    pub base: CoherentParams,
    pub parity: Parity,
}

impl CatParams {
    /// N_h = [2(1 + (−1)^h e^{−2|α|²})]^{−1/2}.
    pub fn normalization(&self) -> Result<f64> {
        let mu = self.base.mean_photon();
        let overlap_term = match self.parity {
            Parity::Even => 1.0 + (-2.0 * mu).exp(),
            Parity::Odd => -(-2.0 * mu).exp_m1(),
        };
        if !(overlap_term > 0.0) {
            return Err(Error::Domain(
                "odd coherent state of the vacuum is the zero vector".into(),
            ));
        }
        Ok((2.0 * overlap_term).powf(-0.5))
    }
}

/// Any of the three supported initial states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum InitialState {
    Coherent(CoherentParams),
    PhotonAdded(PhotonAddedParams),
    Cat(CatParams),
}

impl InitialState {
    pub fn base(&self) -> CoherentParams {
        match self {
            InitialState::Coherent(p) => *p,
            InitialState::PhotonAdded(p) => p.base,
            InitialState::Cat(p) => p.base,
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.base().alpha()
    }

    /// Same family and m/h, with a different coherent amplitude.
    pub fn with_alpha(&self, alpha: Complex64) -> Result<Self> {
        let base = CoherentParams::from_alpha(alpha)?;
        Ok(match self {
            InitialState::Coherent(_) => InitialState::Coherent(base),
            InitialState::PhotonAdded(p) => InitialState::PhotonAdded(PhotonAddedParams { base, m: p.m }),
            InitialState::Cat(p) => InitialState::Cat(CatParams { base, parity: p.parity }),
        })
    }

    /// n_max prescribed by the truncation policy for this state.
    pub fn required_n_max(&self, policy: &TruncationPolicy) -> Result<usize> {
        let mu = self.base().mean_photon();
        match self {
            InitialState::PhotonAdded(p) => truncation_dim_shifted(mu, p.m, policy),
            _ => truncation_dim(mu, policy),
        }
    }

    pub fn build(&self, n_max: usize) -> Result<FockVector> {
        match self {
            InitialState::Coherent(p) => coherent_state(p, n_max),
            InitialState::PhotonAdded(p) => photon_added_state(p, n_max),
            InitialState::Cat(p) => cat_state(p, n_max),
        }
    }

    /// Builds the state at the n_max the policy prescribes.
    pub fn build_with(&self, policy: &TruncationPolicy) -> Result<FockVector> {
        self.build(self.required_n_max(policy)?)
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.base();
        match self {
            InitialState::Coherent(_) => {
                write!(f, "coherent(|α|²={}, δ={})", b.mean_photon(), b.delta())
            }
            InitialState::PhotonAdded(p) => write!(
                f,
                "photon_added(|α|²={}, δ={}, m={})",
                b.mean_photon(),
                b.delta(),
                p.m
            ),
            InitialState::Cat(p) => write!(
                f,
                "cat(|α|²={}, δ={}, h={})",
                b.mean_photon(),
                b.delta(),
                p.parity.flag()
            ),
        }
    }
}

fn check_deficit(norm_sqr: f64, n_max: usize) -> Result<()> {
    let bound = crate::fock::DEFAULT_TAIL_BOUND;
    let deficit = 1.0 - norm_sqr;
    if deficit > bound {
        return Err(Error::Precision { n_max, deficit, bound });
    }
    Ok(())
}

/// C_n = e^{−|α|²/2} αⁿ/√(n!), by the ratio recurrence C_n = C_{n−1}·α/√n.
pub fn coherent_state(p: &CoherentParams, n_max: usize) -> Result<FockVector> {
    let alpha = p.alpha();
    let mut coeffs = Vec::with_capacity(n_max + 1);
    let mut c = Complex64::new((-0.5 * p.mean_photon()).exp(), 0.0);
    coeffs.push(c);
    for n in 1..=n_max {
        c = c * alpha / (n as f64).sqrt();
        coeffs.push(c);
    }
    let v = FockVector::new(coeffs);
    check_deficit(v.norm_sqr(), n_max)?;
    Ok(v)
}

/// Normalized (a†)^m|α⟩:
/// C_n = e^{−|α|²/2} α^{n−m} √(n!) / (√(m! L_m(−|α|²)) (n−m)!) for n ≥ m.
pub fn photon_added_state(p: &PhotonAddedParams, n_max: usize) -> Result<FockVector> {
    let m = p.m;
    if n_max < m {
        return Err(Error::Precision {
            n_max,
            deficit: 1.0,
            bound: crate::fock::DEFAULT_TAIL_BOUND,
        });
    }
    let mu = p.base.mean_photon();
    let alpha = p.base.alpha();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let mut c = Complex64::new((-0.5 * mu).exp() / laguerre(m, -mu).sqrt(), 0.0);
    coeffs[m] = c;
    for n in (m + 1)..=n_max {
        c = c * alpha * ((n as f64).sqrt() / (n - m) as f64);
        coeffs[n] = c;
    }
    let v = FockVector::new(coeffs);
    check_deficit(v.norm_sqr(), n_max)?;
    Ok(v)
}

/// Even (h = 0) or odd (h = 1) coherent state N_h(|α⟩ + (−1)^h|−α⟩):
/// C_n = 2 N_h e^{−|α|²/2} αⁿ/√(n!) on levels with n ≡ h (mod 2).
///
/// The analytic N_h is applied first, then the vector is renormalized to
/// absorb the truncation loss.
pub fn cat_state(p: &CatParams, n_max: usize) -> Result<FockVector> {
    let norm = p.normalization()?;
    let alpha = p.base.alpha();
    let mut coeffs = Vec::with_capacity(n_max + 1);
    let mut c = Complex64::new(2.0 * norm * (-0.5 * p.base.mean_photon()).exp(), 0.0);
    for n in 0..=n_max {
        if n > 0 {
            c = c * alpha / (n as f64).sqrt();
        }
        coeffs.push(if p.parity.admits(n) { c } else { Complex64::new(0.0, 0.0) });
    }
    let v = FockVector::new(coeffs);
    check_deficit(v.norm_sqr(), n_max)?;
    FockVector::normalized(v.into_coeffs())
}

/// ⟨N⟩ = Σ n |C_n|².
pub fn mean_photon_number(v: &FockVector) -> f64 {
    v.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| n as f64 * c.norm_sqr())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn vacuum_coherent_state() {
        let p = CoherentParams::with_default_phase(0.0).unwrap();
        let v = coherent_state(&p, 10).unwrap();
        assert_eq!(v.coeffs()[0], Complex64::new(1.0, 0.0));
        assert!(v.coeffs()[1..].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn coherent_mode_sits_at_floor_of_mean() {
        let p = CoherentParams::new(4.0, 0.0).unwrap();
        let v = InitialState::Coherent(p).build_with(&policy()).unwrap();
        let argmax = v
            .coeffs()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .unwrap()
            .0;
        assert!(argmax == 3 || argmax == 4);
    }

    #[test]
    fn coherent_mean_photon_number() {
        let p = CoherentParams::with_default_phase(20.0).unwrap();
        let v = InitialState::Coherent(p).build_with(&policy()).unwrap();
        assert_relative_eq!(mean_photon_number(&v), 20.0, epsilon = 1e-9);
    }

    #[test]
    fn short_basis_is_a_precision_error() {
        let p = CoherentParams::with_default_phase(20.0).unwrap();
        assert!(matches!(coherent_state(&p, 20), Err(Error::Precision { .. })));
        let pa = PhotonAddedParams { base: p, m: 2 };
        assert!(matches!(photon_added_state(&pa, 1), Err(Error::Precision { .. })));
        let cat = CatParams { base: p, parity: Parity::Even };
        assert!(matches!(cat_state(&cat, 20), Err(Error::Precision { .. })));
    }

    #[test]
    fn one_photon_added_vacuum_is_fock_one() {
        let p = PhotonAddedParams {
            base: CoherentParams::with_default_phase(0.0).unwrap(),
            m: 1,
        };
        let v = photon_added_state(&p, 12).unwrap();
        assert_relative_eq!(v.coeffs()[1].re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(v.norm_sqr(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(mean_photon_number(&v), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_photons_added_is_the_coherent_state() {
        let base = CoherentParams::with_default_phase(7.5).unwrap();
        let n_max = truncation_dim(7.5, &policy()).unwrap();
        let a = coherent_state(&base, n_max).unwrap();
        let b = photon_added_state(&PhotonAddedParams { base, m: 0 }, n_max).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() <= 1e-14);
        }
    }

    #[test]
    fn even_cat_of_vacuum_is_vacuum() {
        let p = CatParams {
            base: CoherentParams::with_default_phase(0.0).unwrap(),
            parity: Parity::Even,
        };
        let v = cat_state(&p, 10).unwrap();
        assert_relative_eq!(v.coeffs()[0].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn odd_cat_of_vacuum_is_rejected() {
        let p = CatParams {
            base: CoherentParams::with_default_phase(0.0).unwrap(),
            parity: Parity::Odd,
        };
        assert!(matches!(cat_state(&p, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn cat_parity_and_norm() {
        for parity in [Parity::Even, Parity::Odd] {
            let p = CatParams {
                base: CoherentParams::with_default_phase(20.0).unwrap(),
                parity,
            };
            let v = InitialState::Cat(p).build_with(&policy()).unwrap();
            assert_relative_eq!(v.norm_sqr(), 1.0, epsilon = 1e-12);
            for (n, c) in v.coeffs().iter().enumerate() {
                if !parity.admits(n) {
                    assert_eq!(c.norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn tiny_odd_cat_is_fock_one() {
        let p = CatParams {
            base: CoherentParams::new(1e-10, 0.0).unwrap(),
            parity: Parity::Odd,
        };
        let v = cat_state(&p, 10).unwrap();
        assert_relative_eq!(v.coeffs()[1].norm(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn parity_flags() {
        assert_eq!(Parity::from_flag(0).unwrap(), Parity::Even);
        assert_eq!(Parity::from_flag(1).unwrap(), Parity::Odd);
        assert!(Parity::from_flag(2).is_err());
    }

    #[test]
    fn coherent_params_validation() {
        assert!(CoherentParams::new(-1.0, 0.0).is_err());
        assert!(CoherentParams::new(1.0, f64::INFINITY).is_err());
        let p = CoherentParams::new(1.0, -std::f64::consts::FRAC_PI_2).unwrap();
        assert_relative_eq!(p.delta(), 1.5 * std::f64::consts::PI, epsilon = 1e-15);
    }
}
