//! Truncated Fock-space vectors and density matrices, plus the normalized
//! oscillator functions that give the quadrature representation ⟨X_θ,θ|n⟩.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::LnFactorial;

/// Probability mass allowed outside the truncated basis.
pub const DEFAULT_TAIL_BOUND: f64 = 1e-12;
/// Largest n_max the engine will allocate.
pub const DEFAULT_HARD_CAP: usize = 512;
/// Extra levels added above the Poisson tail cut.
pub const TRUNCATION_MARGIN: usize = 10;

/// Tolerance on Hermiticity and on diagonal reality/positivity.
pub const ELEMENT_TOL: f64 = 1e-12;
/// Tolerance on traces and norms.
pub const TRACE_TOL: f64 = 1e-10;

/// How far to extend the Fock basis for a given mean photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    tail_bound: f64,
    hard_cap: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tail_bound: DEFAULT_TAIL_BOUND,
            hard_cap: DEFAULT_HARD_CAP,
        }
    }
}

impl TruncationPolicy {
    pub fn new(tail_bound: f64, hard_cap: usize) -> Result<Self> {
        if !(tail_bound > 0.0 && tail_bound < 1.0) {
            return Err(Error::Domain(format!(
                "tail bound must lie in (0, 1), got {tail_bound}"
            )));
        }
        if hard_cap < 1 {
            return Err(Error::Domain("hard cap must be at least 1".into()));
        }
        Ok(TruncationPolicy { tail_bound, hard_cap })
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn hard_cap(&self) -> usize {
        self.hard_cap
    }
}

/// Smallest n_max for which the Poisson(μ) tail beyond `n_max − 10` is
/// below the policy's tail bound.
pub fn truncation_dim(mean_photon: f64, policy: &TruncationPolicy) -> Result<usize> {
    truncation_dim_shifted(mean_photon, 0, policy)
}

/// Same as [`truncation_dim`] with `extra` additional levels on top, used for
/// m-photon-added states (whose support starts at n = m).
pub fn truncation_dim_shifted(
    mean_photon: f64,
    extra: usize,
    policy: &TruncationPolicy,
) -> Result<usize> {
    if !mean_photon.is_finite() || mean_photon < 0.0 {
        return Err(Error::Domain(format!(
            "mean photon number must be finite and non-negative, got {mean_photon}"
        )));
    }
    let capacity = Error::Capacity {
        mean_photon,
        cap: policy.hard_cap,
    };
    let overhead = TRUNCATION_MARGIN + extra;
    if overhead > policy.hard_cap || mean_photon.floor() > (policy.hard_cap - overhead) as f64 {
        return Err(capacity);
    }
    let start = mean_photon.floor() as usize;
    let lnf = LnFactorial::new(policy.hard_cap + 1);
    for n in start..=(policy.hard_cap - overhead) {
        if poisson_tail_above(mean_photon, n, &lnf) < policy.tail_bound {
            return Ok(n + overhead);
        }
    }
    Err(capacity)
}

/// Σ_{k>n} e^{−μ} μ^k / k!, summed directly from the first tail term.
/// Valid for n ≥ ⌊μ⌋, where the terms decrease monotonically.
fn poisson_tail_above(mu: f64, n: usize, lnf: &LnFactorial) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let first = n + 1;
    let mut term = (-mu + first as f64 * mu.ln() - lnf.get(first)).exp();
    let mut sum = 0.0;
    let mut k = first;
    while term > 0.0 {
        sum += term;
        if term < 1e-20 * sum {
            break;
        }
        k += 1;
        term *= mu / k as f64;
    }
    sum
}

/// Normalized oscillator functions u_0(x)..u_{n_max}(x), where
/// u_n(x) = π^{−1/4} 2^{−n/2} (n!)^{−1/2} e^{−x²/2} H_n(x).
///
/// Evaluated by the three-term recurrence on the normalized functions, which
/// stays O(1) where raw Hermite values and factorials overflow.
pub fn oscillator_functions(x: f64, n_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    oscillator_functions_into(x, &mut out);
    out
}

/// In-place variant of [`oscillator_functions`]; fills `out[0..len]`.
pub fn oscillator_functions_into(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let u0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out[0] = u0;
    if out.len() == 1 {
        return;
    }
    out[1] = std::f64::consts::SQRT_2 * x * u0;
    for n in 2..out.len() {
        let nf = n as f64;
        out[n] = (2.0 / nf).sqrt() * x * out[n - 1] - ((nf - 1.0) / nf).sqrt() * out[n - 2];
    }
}

/// ⟨X_θ, θ | n⟩ = u_n(x) e^{−inθ}.
pub fn quadrature_wavefunction(n: i64, x: f64, theta: f64) -> Result<Complex64> {
    if n < 0 {
        return Err(Error::Domain(format!("Fock index must be non-negative, got {n}")));
    }
    if !x.is_finite() || !theta.is_finite() {
        return Err(Error::Domain(format!(
            "quadrature point must be finite, got x = {x}, θ = {theta}"
        )));
    }
    let n = n as usize;
    let u = oscillator_functions(x, n)[n];
    Ok(Complex64::from_polar(u, -(n as f64 * theta)))
}

/// A pure state: complex Fock amplitudes C_0..C_{n_max}.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: Vec<Complex64>,
}

impl FockVector {
    /// Wraps raw amplitudes without normalizing them.
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a Fock vector needs at least one amplitude");
        FockVector { coeffs }
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(coeffs: Vec<Complex64>) -> Result<Self> {
        let mut v = FockVector::new(coeffs);
        let norm = v.norm_sqr().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        for c in &mut v.coeffs {
            *c /= norm;
        }
        Ok(v)
    }

    /// The Fock state |n⟩ in a basis truncated at `n_max`.
    pub fn basis(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::Domain(format!("|{n}⟩ does not fit below n_max = {n_max}")));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n_max + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Ok(FockVector { coeffs })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// True when Σ|C_n|² lies within `tol` of one.
    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// ⟨self|other⟩ over the common support.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &FockVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Pads with zeros (or truncates) to a new n_max.
    pub fn resized(&self, n_max: usize) -> FockVector {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n_max + 1, Complex64::new(0.0, 0.0));
        FockVector { coeffs }
    }

    pub(crate) fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }
}

/// A mixed state ρ_{n,n′} over a truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    elems: Array2<Complex64>,
}

impl DensityMatrix {
    /// Wraps a square matrix. Physical invariants are checked by
    /// [`DensityMatrix::validate`], not here.
    pub fn new(elems: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = elems.dim();
        if rows != cols || rows == 0 {
            return Err(Error::Input(format!(
                "density matrix must be square and non-empty, got {rows}×{cols}"
            )));
        }
        Ok(DensityMatrix { elems })
    }

    pub fn elems(&self) -> &Array2<Complex64> {
        &self.elems
    }

    pub fn n_max(&self) -> usize {
        self.elems.nrows() - 1
    }

    pub fn get(&self, n: usize, n_prime: usize) -> Complex64 {
        self.elems[[n, n_prime]]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.elems.nrows()).map(|n| self.elems[[n, n]].re).collect()
    }

    pub fn trace(&self) -> f64 {
        trace(self)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(self)
    }

    /// Checks Hermiticity and real, non-negative diagonals.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_residual();
        if herm > ELEMENT_TOL {
            return Err(Error::Input(format!(
                "density matrix is not Hermitian (residual {herm:e})"
            )));
        }
        for n in 0..self.elems.nrows() {
            let d = self.elems[[n, n]];
            if d.im.abs() > ELEMENT_TOL || d.re < -ELEMENT_TOL {
                return Err(Error::Input(format!(
                    "diagonal entry ρ[{n},{n}] = {d} is not a probability"
                )));
            }
        }
        Ok(())
    }

    /// ⟨ψ|ρ|ψ⟩ for a pure reference state (zero-padded to a common size).
    pub fn expectation_in(&self, psi: &FockVector) -> f64 {
        let dim = self.elems.nrows().min(psi.coeffs().len());
        let c = psi.coeffs();
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 0..dim {
            let mut row = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                row += self.elems[[n, k]] * c[k];
            }
            acc += c[n].conj() * row;
        }
        acc.re
    }

    /// Largest element-wise modulus of `self − other` over the common block.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        let dim = self.elems.nrows().min(other.elems.nrows());
        let mut worst: f64 = 0.0;
        for n in 0..dim {
            for k in 0..dim {
                worst = worst.max((self.elems[[n, k]] - other.elems[[n, k]]).norm());
            }
        }
        worst
    }
}

/// ρ = |v⟩⟨v|.
pub fn outer_product(v: &FockVector) -> DensityMatrix {
    let c = v.coeffs();
    let dim = c.len();
    let elems = Array2::from_shape_fn((dim, dim), |(n, k)| c[n] * c[k].conj());
    DensityMatrix { elems }
}

/// Σ_n Re ρ_{n,n}.
pub fn trace(rho: &DensityMatrix) -> f64 {
    rho.elems.diag().iter().map(|z| z.re).sum()
}

/// max_{n,n′} |ρ_{n,n′} − conj(ρ_{n′,n})|.
pub fn hermiticity_residual(rho: &DensityMatrix) -> f64 {
    let dim = rho.elems.nrows();
    let mut worst: f64 = 0.0;
    for n in 0..dim {
        for k in n..dim {
            let d = rho.elems[[n, k]] - rho.elems[[k, n]].conj();
            worst = worst.max(d.norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ground_state_at_origin() {
        let v = quadrature_wavefunction(0, 0.0, 0.0).unwrap();
        assert_relative_eq!(v.re, PI.powf(-0.25), epsilon = 1e-15);
        assert_relative_eq!(v.re, 0.751_125_5, epsilon = 1e-7);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn odd_functions_vanish_at_origin() {
        for theta in [0.0, 0.7, 3.0] {
            let v = quadrature_wavefunction(1, 0.0, theta).unwrap();
            assert_eq!(v.norm(), 0.0);
        }
    }

    #[test]
    fn second_function_at_origin() {
        let v = quadrature_wavefunction(2, 0.0, 0.0).unwrap();
        assert_relative_eq!(v.re, -PI.powf(-0.25) / 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(v.re, -0.531_125_9, epsilon = 1e-7);
    }

    #[test]
    fn negative_index_is_a_domain_error() {
        assert!(matches!(quadrature_wavefunction(-1, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(quadrature_wavefunction(0, f64::NAN, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn phase_factor_is_applied() {
        let theta = 0.3;
        let v = quadrature_wavefunction(3, 0.8, theta).unwrap();
        let u = oscillator_functions(0.8, 3)[3];
        assert_relative_eq!(v.re, u * (3.0 * theta).cos(), epsilon = 1e-15);
        assert_relative_eq!(v.im, -u * (3.0 * theta).sin(), epsilon = 1e-15);
    }

    #[test]
    fn truncation_for_vacuum_is_margin_only() {
        assert_eq!(truncation_dim(0.0, &TruncationPolicy::default()).unwrap(), 10);
        assert_eq!(
            truncation_dim_shifted(0.0, 3, &TruncationPolicy::default()).unwrap(),
            13
        );
    }

    #[test]
    fn truncation_beyond_cap_is_a_capacity_error() {
        let err = truncation_dim(1e6, &TruncationPolicy::default()).unwrap_err();
        match err {
            Error::Capacity { mean_photon, .. } => assert_eq!(mean_photon, 1e6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("1000000"));
    }

    #[test]
    fn truncation_rejects_bad_input() {
        assert!(truncation_dim(-1.0, &TruncationPolicy::default()).is_err());
        assert!(truncation_dim(f64::NAN, &TruncationPolicy::default()).is_err());
        assert!(TruncationPolicy::new(0.0, 10).is_err());
        assert!(TruncationPolicy::new(1e-12, 0).is_err());
    }

    #[test]
    fn outer_product_of_vacuum() {
        let rho = outer_product(&FockVector::basis(0, 4).unwrap());
        assert_eq!(rho.get(0, 0), c(1.0, 0.0));
        let off: f64 = rho.elems().iter().skip(1).map(|z| z.norm()).sum();
        assert_eq!(off, 0.0);
    }

    #[test]
    fn outer_product_of_uniform_superposition() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = FockVector::new(vec![c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]);
        let rho = outer_product(&v);
        for n in 0..2 {
            for k in 0..2 {
                assert_relative_eq!(rho.get(n, k).re, 0.5, epsilon = 1e-15);
            }
        }
        assert_relative_eq!(rho.trace(), 1.0, epsilon = 1e-15);
        assert!(rho.hermiticity_residual() <= 1e-14);
        rho.validate().unwrap();
    }

    #[test]
    fn maximally_mixed_qubit_has_unit_trace() {
        let mut m = Array2::zeros((2, 2));
        m[[0, 0]] = c(0.5, 0.0);
        m[[1, 1]] = c(0.5, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        assert_eq!(trace(&rho), 1.0);
        assert_eq!(hermiticity_residual(&rho), 0.0);
    }

    #[test]
    fn constructed_hermitian_matrix_has_known_trace() {
        // ρ = A + A† with diag(A) chosen so that tr ρ = 2·Σ Re A_nn.
        let a = Array2::from_shape_fn((5, 5), |(n, k)| {
            c((n as f64 + 1.0) * 0.1 + k as f64 * 0.03, (n as f64 - k as f64) * 0.07)
        });
        let herm = &a + &a.t().mapv(|z| z.conj());
        let expected: f64 = (0..5).map(|n| 2.0 * a[[n, n]].re).sum();
        let rho = DensityMatrix::new(herm).unwrap();
        assert_relative_eq!(trace(&rho), expected, epsilon = 1e-14);
        assert!(hermiticity_residual(&rho) < 1e-15);
    }

    #[test]
    fn non_hermitian_matrix_fails_validation() {
        let mut m = Array2::zeros((2, 2));
        m[[0, 0]] = c(1.0, 0.0);
        m[[0, 1]] = c(0.2, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(rho.hermiticity_residual() > 0.1);
        assert!(matches!(rho.validate(), Err(Error::Input(_))));
    }

    #[test]
    fn non_square_matrix_is_rejected() {
        assert!(DensityMatrix::new(Array2::zeros((2, 3))).is_err());
    }

    #[test]
    fn normalizing_zero_vector_fails() {
        assert!(FockVector::normalized(vec![c(0.0, 0.0); 3]).is_err());
    }
}
