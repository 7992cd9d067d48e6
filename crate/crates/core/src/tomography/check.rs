use serde::Serialize;

use super::grid::TomogramGrid;

/// Allowed deviation of the per-θ trapezoidal integral from one.
pub const NORM_TOL: f64 = 1e-6;
/// Allowed |ω(X, θ+π) − ω(−X, θ)|.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Allowed negative roundoff.
pub const NONNEG_TOL: f64 = 1e-12;

/// Residuals of the tomogram axioms: normalization, symmetry, positivity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomogramReport {
    /// |∫ω dX − 1| for every θ row.
    pub norm_residuals: Vec<f64>,
    pub max_norm_residual: f64,
    /// None when the θ lattice has no antipodal pairs (odd T).
    pub symmetry_residual: Option<f64>,
    pub min_value: f64,
    /// The X window cuts off probability mass.
    pub clipped: bool,
    pub passes: bool,
}

pub fn verify_tomogram(tg: &TomogramGrid) -> TomogramReport {
    let g = *tg.grid();
    let dx = g.dx();
    let norm_residuals: Vec<f64> = tg
        .rows()
        .map(|row| {
            let inner: f64 = row[1..row.len() - 1].iter().sum();
            let integral = dx * (inner + 0.5 * (row[0] + row[row.len() - 1]));
            (integral - 1.0).abs()
        })
        .collect();
    let max_norm_residual = norm_residuals.iter().copied().fold(0.0, f64::max);

    let symmetry_residual = g.n_theta().is_multiple_of(2).then(|| {
        let half = g.n_theta() / 2;
        let m = g.n_x();
        let mut worst: f64 = 0.0;
        for i in 0..g.n_theta() {
            let shifted = (i + half) % g.n_theta();
            for j in 0..m {
                worst = worst.max((tg.get(shifted, j) - tg.get(i, m - 1 - j)).abs());
            }
        }
        worst
    });

    let min_value = tg.values().iter().copied().fold(f64::INFINITY, f64::min);
    let clipped = max_norm_residual > NORM_TOL;
    let passes = !clipped
        && min_value >= -NONNEG_TOL
        && symmetry_residual.is_none_or(|s| s <= SYMMETRY_TOL);
    TomogramReport {
        norm_residuals,
        max_norm_residual,
        symmetry_residual,
        min_value,
        clipped,
        passes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tomography::{tomogram_coherent_t0, tomogram_vacuum, QuadratureGrid};
    use crate::states::CoherentParams;

    #[test]
    fn vacuum_passes_every_check() {
        let g = QuadratureGrid::default_for(0.0).unwrap();
        let r = verify_tomogram(&tomogram_vacuum(&g));
        assert!(r.max_norm_residual < 1e-10);
        assert!(r.symmetry_residual.unwrap() < 1e-10);
        assert!(r.min_value >= 0.0);
        assert!(r.passes && !r.clipped);
    }

    #[test]
    fn narrow_window_is_flagged_as_clipped() {
        let p = CoherentParams::with_default_phase(20.0).unwrap();
        let g = QuadratureGrid::new(64, 101, 1.0).unwrap();
        let r = verify_tomogram(&tomogram_coherent_t0(&p, &g));
        assert!(r.clipped);
        assert!(!r.passes);
        assert!(r.max_norm_residual > 0.5);
    }
}
