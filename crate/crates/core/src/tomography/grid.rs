use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_THETA_COUNT: usize = 256;
pub const DEFAULT_X_COUNT: usize = 513;
/// Vacuum widths added beyond the coherent ring when choosing X_max.
pub const DEFAULT_X_PADDING: f64 = 5.0;

/// Uniform (θ, X) lattice: θ_i = 2πi/T for i < T, X_j uniform on
/// [−X_max, X_max] with M points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    n_theta: usize,
    n_x: usize,
    x_max: f64,
}

impl QuadratureGrid {
    pub fn new(n_theta: usize, n_x: usize, x_max: f64) -> Result<Self> {
        if n_theta < 4 {
            return Err(Error::Domain(format!("need at least 4 θ samples, got {n_theta}")));
        }
        if n_x < 3 || n_x.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "X sample count must be odd and ≥ 3 so X = 0 is a node, got {n_x}"
            )));
        }
        if !(x_max > 0.0) || !x_max.is_finite() {
            return Err(Error::Domain(format!("X_max must be positive and finite, got {x_max}")));
        }
        Ok(QuadratureGrid { n_theta, n_x, x_max })
    }

    /// Default lattice for a state with the given mean photon number:
    /// 256 × 513 with X_max = √(2μ) + 5.
    pub fn default_for(mean_photon: f64) -> Result<Self> {
        Self::new(
            DEFAULT_THETA_COUNT,
            DEFAULT_X_COUNT,
            (2.0 * mean_photon.max(0.0)).sqrt() + DEFAULT_X_PADDING,
        )
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn theta(&self, i: usize) -> f64 {
        TAU * i as f64 / self.n_theta as f64
    }

    /// X_j = X_max (2j − (M−1)) / (M−1); exactly antisymmetric about the
    /// centre node.
    pub fn x(&self, j: usize) -> f64 {
        let half = (self.n_x - 1) as f64;
        self.x_max * (2.0 * j as f64 - half) / half
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.x_max / (self.n_x - 1) as f64
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n_theta).map(|i| self.theta(i)).collect()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_x).map(|j| self.x(j)).collect()
    }

    /// Index of the lattice angle equal to `theta` (mod 2π), within 1e-9 rad.
    pub fn theta_index(&self, theta: f64) -> Result<usize> {
        if !theta.is_finite() {
            return Err(Error::Domain(format!("θ must be finite, got {theta}")));
        }
        let step = TAU / self.n_theta as f64;
        let pos = theta.rem_euclid(TAU) / step;
        let i = pos.round() as usize % self.n_theta;
        let off = (pos - pos.round()).abs() * step;
        if off > 1e-9 {
            return Err(Error::Domain(format!("θ = {theta} is not a lattice angle")));
        }
        Ok(i)
    }

    /// Index of the lattice angle closest to `theta` (mod 2π).
    pub fn nearest_theta_index(&self, theta: f64) -> usize {
        let step = TAU / self.n_theta as f64;
        (theta.rem_euclid(TAU) / step).round() as usize % self.n_theta
    }
}

/// Where a tomogram came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub state: String,
    pub time: Option<f64>,
    pub channel: Option<String>,
    pub channel_time: Option<f64>,
}

impl Provenance {
    pub fn new(state: impl Into<String>) -> Self {
        Provenance {
            state: state.into(),
            ..Default::default()
        }
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.time = Some(t);
        self
    }

    pub fn with_channel(mut self, kind: impl Into<String>, scaled_time: f64) -> Self {
        self.channel = Some(kind.into());
        self.channel_time = Some(scaled_time);
        self
    }
}

/// ω sampled on a [`QuadratureGrid`], stored θ-major (one row per θ).
#[derive(Debug, Clone, PartialEq)]
pub struct TomogramGrid {
    grid: QuadratureGrid,
    values: Vec<f64>,
    pub meta: Provenance,
}

impl TomogramGrid {
    pub fn from_values(grid: QuadratureGrid, values: Vec<f64>, meta: Provenance) -> Result<Self> {
        if values.len() != grid.n_theta * grid.n_x {
            return Err(Error::Input(format!(
                "expected {} samples, got {}",
                grid.n_theta * grid.n_x,
                values.len()
            )));
        }
        Ok(TomogramGrid { grid, values, meta })
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i_theta: usize, j_x: usize) -> f64 {
        self.values[i_theta * self.grid.n_x + j_x]
    }

    /// ω(·, θ_i).
    pub fn slice(&self, i_theta: usize) -> &[f64] {
        let n = self.grid.n_x;
        &self.values[i_theta * n..(i_theta + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.grid.n_x)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// max |self − other| over the lattice; grids must agree.
    pub fn max_abs_diff(&self, other: &TomogramGrid) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Input("tomograms live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// max over X of (max_θ ω − min_θ ω).
    pub fn max_theta_variation(&self) -> f64 {
        let g = self.grid;
        (0..g.n_x)
            .map(|j| {
                let (lo, hi) = (0..g.n_theta).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
                    let v = self.get(i, j);
                    (lo.min(v), hi.max(v))
                });
                hi - lo
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(QuadratureGrid::new(3, 5, 1.0).is_err());
        assert!(QuadratureGrid::new(4, 4, 1.0).is_err());
        assert!(QuadratureGrid::new(4, 1, 1.0).is_err());
        assert!(QuadratureGrid::new(4, 5, 0.0).is_err());
        assert!(QuadratureGrid::new(4, 5, 1.0).is_ok());
    }

    #[test]
    fn x_lattice_is_symmetric_with_centre_node() {
        let g = QuadratureGrid::new(8, 9, 3.7).unwrap();
        assert_eq!(g.x(4), 0.0);
        for j in 0..9 {
            assert_eq!(g.x(j), -g.x(8 - j));
        }
        assert_eq!(g.x(0), -3.7);
        assert_eq!(g.x(8), 3.7);
    }

    #[test]
    fn default_grid() {
        let g = QuadratureGrid::default_for(20.0).unwrap();
        assert_eq!((g.n_theta(), g.n_x()), (256, 513));
        assert!((g.x_max() - (40f64.sqrt() + 5.0)).abs() < 1e-14);
    }

    #[test]
    fn theta_lookup() {
        let g = QuadratureGrid::new(8, 3, 1.0).unwrap();
        assert_eq!(g.theta_index(std::f64::consts::FRAC_PI_4).unwrap(), 1);
        assert_eq!(g.theta_index(TAU).unwrap(), 0);
        assert!(g.theta_index(0.3).is_err());
        assert_eq!(g.nearest_theta_index(0.3), 0);
    }

    #[test]
    fn mismatched_value_count_is_rejected() {
        let g = QuadratureGrid::new(4, 3, 1.0).unwrap();
        assert!(TomogramGrid::from_values(g, vec![0.0; 11], Provenance::default()).is_err());
    }
}
