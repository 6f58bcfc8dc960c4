//! Resolvent-norm fields over a complex rectangle: 1/σ_min(A - λI) next to
//! the normal-matrix quantity 1/dist(λ, spectrum). The two agree only for
//! normal matrices; their ratio is a nonnormality diagnostic.

use super::{eigvals_with_source, smallest_singular_shifted, Mat};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Complex rectangle sampling grid.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl GridSpec {
    pub fn re_points(&self) -> Vec<f64> {
        linspace(self.re_min, self.re_max, self.n_re)
    }

    pub fn im_points(&self) -> Vec<f64> {
        linspace(self.im_min, self.im_max, self.n_im)
    }

    /// Rectangle covering the eigenvalue bounding box inflated by `factor`.
    pub fn around_spectrum(eigs: &[(f64, f64)], factor: f64, n_re: usize, n_im: usize) -> Self {
        let mut re_min = f64::INFINITY;
        let mut re_max = f64::NEG_INFINITY;
        let mut im_min = f64::INFINITY;
        let mut im_max = f64::NEG_INFINITY;
        for &(re, im) in eigs {
            re_min = re_min.min(re);
            re_max = re_max.max(re);
            im_min = im_min.min(im);
            im_max = im_max.max(im);
        }
        let cx = 0.5 * (re_min + re_max);
        let cy = 0.5 * (im_min + im_max);
        let hx = (0.5 * (re_max - re_min) * factor).max(1e-3);
        let hy = (0.5 * (im_max - im_min) * factor).max(1e-3);
        GridSpec {
            re_min: cx - hx,
            re_max: cx + hx,
            im_min: cy - hy,
            im_max: cy + hy,
            n_re,
            n_im,
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + step * i as f64).collect()
}

/// Resolvent-norm samples; `values[(i, j)]` is 1/σ_min(A - λI) at
/// λ = re[j] + i·im[i], `dist_values` the spectral-distance counterpart.
/// Grid points within `1e-12·‖A‖` of an eigenvalue carry `f64::INFINITY`.
#[derive(Clone, Debug)]
pub struct ResolventField {
    pub grid: GridSpec,
    pub values: Mat<f64>,
    pub dist_values: Mat<f64>,
}

pub fn resolvent_field(a: &Mat<f64>, grid: GridSpec) -> Result<ResolventField> {
    if grid.n_re > 400 || grid.n_im > 400 {
        return Err(Error::InvalidParameter(format!(
            "resolvent grid {}x{} exceeds the 400x400 cap",
            grid.n_re, grid.n_im
        )));
    }
    if !(grid.re_min.is_finite()
        && grid.re_max.is_finite()
        && grid.im_min.is_finite()
        && grid.im_max.is_finite())
    {
        return Err(Error::InvalidParameter("resolvent grid bounds must be finite".into()));
    }
    let spectrum = eigvals_with_source(a, "resolvent source")?;
    let eig_tol = 1e-12 * a.norm_inf().max(f64::MIN_POSITIVE);
    let res = grid.re_points();
    let ims = grid.im_points();
    let mut values = Mat::zeros(ims.len(), res.len());
    let mut dist_values = Mat::zeros(ims.len(), res.len());
    for (i, &im) in ims.iter().enumerate() {
        for (j, &re) in res.iter().enumerate() {
            let lam = Complex64::new(re, im);
            let dist = spectrum
                .eigenvalues
                .iter()
                .map(|&(er, ei)| ((re - er).powi(2) + (im - ei).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            if dist <= eig_tol {
                values[(i, j)] = f64::INFINITY;
                dist_values[(i, j)] = f64::INFINITY;
                continue;
            }
            dist_values[(i, j)] = 1.0 / dist;
            let sigma = smallest_singular_shifted(a, lam);
            values[(i, j)] = if sigma <= f64::MIN_POSITIVE {
                f64::INFINITY
            } else {
                1.0 / sigma
            };
        }
    }
    Ok(ResolventField {
        grid,
        values,
        dist_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_matrix_agrees_with_distance() {
        let a = Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]);
        let grid = GridSpec {
            re_min: 2.0,
            re_max: 3.0,
            im_min: 0.0,
            im_max: 0.5,
            n_re: 3,
            n_im: 2,
        };
        let f = resolvent_field(&a, grid).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                let v = f.values[(i, j)];
                let d = f.dist_values[(i, j)];
                assert!((v - d).abs() <= 1e-6 * d, "normal case mismatch {v} vs {d}");
            }
        }
    }

    #[test]
    fn resolvent_dominates_distance() {
        // sigma_min(A - lambda I) <= dist(lambda, spectrum) always
        let a = Mat::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        let grid = GridSpec {
            re_min: -1.0,
            re_max: 2.0,
            im_min: -1.0,
            im_max: 1.0,
            n_re: 5,
            n_im: 5,
        };
        let f = resolvent_field(&a, grid).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let v = f.values[(i, j)];
                let d = f.dist_values[(i, j)];
                if v.is_finite() && d.is_finite() {
                    assert!(v >= d * (1.0 - 1e-6), "{v} < {d}");
                }
            }
        }
    }

    #[test]
    fn eigenvalue_cell_flagged_infinite() {
        let a = Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]);
        let grid = GridSpec {
            re_min: 1.0,
            re_max: 2.0,
            im_min: 0.0,
            im_max: 0.0,
            n_re: 2,
            n_im: 1,
        };
        let f = resolvent_field(&a, grid).unwrap();
        assert!(f.values[(0, 0)].is_infinite());
        assert!(f.values[(0, 1)].is_infinite());
    }
}
