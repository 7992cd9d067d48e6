//! Kerr evolution e^{−iχt n(n−1)}, revival times, and the Fourier
//! decomposition of fractional-revival states into rotated copies.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::special::{gcd, kerr_phase};
use crate::states::{
    coherent_state, photon_added_state, CoherentParams, PhotonAddedParams,
};

/// Default Kerr coupling.
pub const DEFAULT_CHI: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrParams {
    chi: f64,
}

impl Default for KerrParams {
    fn default() -> Self {
        KerrParams { chi: DEFAULT_CHI }
    }
}

impl KerrParams {
    pub fn new(chi: f64) -> Result<Self> {
        if !(chi > 0.0) || !chi.is_finite() {
            return Err(Error::Domain(format!("Kerr coupling χ must be positive and finite, got {chi}")));
        }
        Ok(KerrParams { chi })
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }
}

/// C_n ← C_n e^{−iχt n(n−1)}.
pub fn evolve(v: &FockVector, t: f64, k: &KerrParams) -> FockVector {
    let chi_t = k.chi * t;
    let coeffs = v
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, &c)| c * Complex64::from_polar(1.0, -kerr_phase(n, chi_t)))
        .collect();
    FockVector::new(coeffs)
}

/// T_rev = π/χ.
pub fn revival_time(k: &KerrParams) -> f64 {
    PI / k.chi
}

/// t = πj/(lχ) for coprime 1 ≤ j < l.
pub fn fractional_revival_time(l: u32, j: u32, k: &KerrParams) -> Result<f64> {
    if l < 2 {
        return Err(Error::Domain(format!("sub-packet count l must be ≥ 2, got {l}")));
    }
    if j < 1 || j >= l {
        return Err(Error::Domain(format!("j must satisfy 1 ≤ j ≤ l − 1, got j = {j}, l = {l}")));
    }
    if gcd(j as u64, l as u64) != 1 {
        return Err(Error::Domain(format!("j = {j} and l = {l} are not coprime")));
    }
    Ok(PI * j as f64 / (l as f64 * k.chi))
}

/// Kerr phase pattern over one period of k: e^{−iπk(k−1)/l} (odd l) or
/// e^{−iπk²/l} (even l).
fn revival_phase(k: usize, l: usize) -> Complex64 {
    let (num, den) = if l % 2 == 1 {
        ((k * k.saturating_sub(1)) % (2 * l), l)
    } else {
        ((k * k) % (2 * l), l)
    };
    Complex64::from_polar(1.0, -PI * num as f64 / den as f64)
}

/// Fourier weights f_{r,l}, r = 0..l:
/// f_r = (1/l) Σ_k e^{2πirk/l} · (Kerr phase pattern at k).
pub fn fourier_coefficients(l: usize) -> Result<Vec<Complex64>> {
    if l < 2 {
        return Err(Error::Domain(format!("sub-packet count l must be ≥ 2, got {l}")));
    }
    let inv_l = 1.0 / l as f64;
    Ok((0..l)
        .map(|r| {
            let sum: Complex64 = (0..l)
                .map(|k| {
                    let turn = (r * k) % l;
                    Complex64::from_polar(1.0, 2.0 * PI * turn as f64 * inv_l) * revival_phase(k, l)
                })
                .sum();
            sum * inv_l
        })
        .collect())
}

/// Which family the rotated components belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Coherent,
    PhotonAdded(usize),
}

impl Flavor {
    fn photons_added(self) -> usize {
        match self {
            Flavor::Coherent => 0,
            Flavor::PhotonAdded(m) => m,
        }
    }
}

/// One weighted component of a fractional-revival superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub weight: Complex64,
    pub amplitude: Complex64,
}

/// ψ(π/lχ) = Σ_r weight_r · |amplitude_r (, m)⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionDecomposition {
    pub l: usize,
    pub flavor: Flavor,
    pub terms: Vec<Component>,
}

impl SuperpositionDecomposition {
    /// Fock expansion Σ_r w_r |component_r⟩ with components built by `build`.
    pub fn expand_with<F>(&self, n_max: usize, mut build: F) -> Result<FockVector>
    where
        F: FnMut(Complex64) -> Result<FockVector>,
    {
        let mut acc = vec![Complex64::new(0.0, 0.0); n_max + 1];
        for term in &self.terms {
            let comp = build(term.amplitude)?;
            for (slot, c) in acc.iter_mut().zip(comp.coeffs()) {
                *slot += term.weight * c;
            }
        }
        Ok(FockVector::new(acc))
    }

    /// Fock expansion with coherent or photon-added components.
    pub fn expand(&self, n_max: usize) -> Result<FockVector> {
        let m = self.flavor.photons_added();
        self.expand_with(n_max, |amp| {
            let base = CoherentParams::from_alpha(amp)?;
            match self.flavor {
                Flavor::Coherent => coherent_state(&base, n_max),
                Flavor::PhotonAdded(_) => photon_added_state(&PhotonAddedParams { base, m }, n_max),
            }
        })
    }
}

/// Decomposes the state at t = π/(lχ) (j = 1) into l rotated copies.
///
/// Odd l: weights f_r e^{−2πirm/l}, amplitudes α e^{−2πir/l}.
/// Even l: weights f_r e^{−iπm(2r−1)/l}, amplitudes α e^{−iπ(2r−1)/l}.
pub fn decompose_fractional(flavor: Flavor, alpha: Complex64, l: usize) -> Result<SuperpositionDecomposition> {
    let f = fourier_coefficients(l)?;
    let m = flavor.photons_added() as f64;
    let lf = l as f64;
    let terms = f
        .into_iter()
        .enumerate()
        .map(|(r, fr)| {
            let angle = if l % 2 == 1 {
                -2.0 * PI * r as f64 / lf
            } else {
                -PI * (2.0 * r as f64 - 1.0) / lf
            };
            Component {
                weight: fr * Complex64::from_polar(1.0, m * angle),
                amplitude: alpha * Complex64::from_polar(1.0, angle),
            }
        })
        .collect();
    Ok(SuperpositionDecomposition { l, flavor, terms })
}
