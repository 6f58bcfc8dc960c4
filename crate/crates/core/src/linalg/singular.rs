//! Smallest singular values via inverse iteration on AᵀA with LU-backed
//! solves; closed forms for m <= 3. Complex shifts A - λI are handled
//! through the real 2m x 2m embedding, keeping all arithmetic real.

use super::{Lu, Mat};
use crate::error::Error;
use crate::linalg::DetRng;
use num_complex::Complex64;

const MAX_ITER: usize = 300;
const REL_TOL: f64 = 1e-9;

/// σ_min of a square real matrix. Exactly singular inputs return 0.
pub fn smallest_singular(a: &Mat<f64>) -> f64 {
    assert!(a.is_square(), "smallest_singular requires a square matrix");
    let n = a.nrows();
    match n {
        0 => 0.0,
        1 => a[(0, 0)].abs(),
        2 | 3 => small_sigma_min(a),
        _ => sigma_min_inverse_iteration(a),
    }
}

/// σ_min(A - λ I) for complex λ, via the real embedding
/// [[A-aI, bI], [-bI, A-aI]] whose singular values are those of A-λI doubled.
pub fn smallest_singular_shifted(a: &Mat<f64>, lambda: Complex64) -> f64 {
    let n = a.nrows();
    if lambda.im == 0.0 {
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] -= lambda.re;
        }
        return smallest_singular(&shifted);
    }
    let mut z = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = a[(i, j)] - if i == j { lambda.re } else { 0.0 };
            z[(i, j)] = v;
            z[(n + i, n + j)] = v;
        }
        z[(i, n + i)] = lambda.im;
        z[(n + i, i)] = -lambda.im;
    }
    sigma_min_inverse_iteration(&z)
}

/// Closed-form σ_min for 2x2 / 3x3 through the eigenvalues of AᵀA.
fn small_sigma_min(a: &Mat<f64>) -> f64 {
    let n = a.nrows();
    let ata = a.transpose().matmul(a);
    if n == 2 {
        let (p, q, r) = (ata[(0, 0)], ata[(0, 1)], ata[(1, 1)]);
        let tr = p + r;
        let disc = ((p - r) * (p - r) + 4.0 * q * q).sqrt();
        let lam = 0.5 * (tr - disc);
        return lam.max(0.0).sqrt();
    }
    // symmetric 3x3: trigonometric solution of the characteristic cubic
    let (a11, a12, a13) = (ata[(0, 0)], ata[(0, 1)], ata[(0, 2)]);
    let (a22, a23, a33) = (ata[(1, 1)], ata[(1, 2)], ata[(2, 2)]);
    let q = (a11 + a22 + a33) / 3.0;
    let p1 = a12 * a12 + a13 * a13 + a23 * a23;
    if p1 == 0.0 {
        return a11.min(a22).min(a33).max(0.0).sqrt();
    }
    let p2 =
        (a11 - q).powi(2) + (a22 - q).powi(2) + (a33 - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let inv_p = 1.0 / p;
    // B = (AtA - qI)/p, det(B)/2 clamped into [-1,1]
    let b11 = (a11 - q) * inv_p;
    let b22 = (a22 - q) * inv_p;
    let b33 = (a33 - q) * inv_p;
    let b12 = a12 * inv_p;
    let b13 = a13 * inv_p;
    let b23 = a23 * inv_p;
    let detb = b11 * (b22 * b33 - b23 * b23) - b12 * (b12 * b33 - b23 * b13)
        + b13 * (b12 * b23 - b22 * b13);
    let phi = (detb / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    let lam_min = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    lam_min.max(0.0).sqrt()
}

/// Power iteration on (AᵀA)⁻¹ through alternating transpose/plain LU solves.
fn sigma_min_inverse_iteration(a: &Mat<f64>) -> f64 {
    let n = a.nrows();
    let lu = match Lu::factor(a) {
        Ok(lu) => lu,
        Err(Error::Singular { .. }) => return 0.0,
        Err(_) => return 0.0,
    };
    let mut rng = DetRng::new(0x5EED);
    let mut x: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
    normalize(&mut x);
    let mut rho_prev = 0.0;
    for _ in 0..MAX_ITER {
        // z = A⁻¹ A⁻ᵀ x  (one application of (AᵀA)⁻¹)
        let y = lu.solve_transposed(&x);
        let mut z = lu.solve(&y);
        let rho = dot(&x, &z); // Rayleigh quotient of (AᵀA)⁻¹ at unit x
        let norm = normalize(&mut z);
        if norm == 0.0 {
            return 0.0;
        }
        x = z;
        if rho > 0.0 && (rho - rho_prev).abs() <= REL_TOL * rho {
            return 1.0 / rho.sqrt();
        }
        rho_prev = rho;
    }
    if rho_prev > 0.0 {
        1.0 / rho_prev.sqrt()
    } else {
        0.0
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_one() {
        let a = Mat::<f64>::identity(5);
        assert!((smallest_singular(&a) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn diagonal_three_two() {
        let a = Mat::from_rows(&[vec![3.0, 0.0], vec![0.0, 2.0]]);
        assert!((smallest_singular(&a) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn singular_returns_zero() {
        let a = Mat::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert_eq!(smallest_singular(&a), 0.0);
    }

    #[test]
    fn random_matches_symmetric_eigen_oracle() {
        // oracle: sqrt(min eigenvalue of AᵀA) via the dense eigensolver
        let mut rng = DetRng::new(99);
        for _ in 0..4 {
            let n = 6;
            let mut a = Mat::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = rng.next_f64();
                }
            }
            let sig = smallest_singular(&a);
            let ata = a.transpose().matmul(&a);
            let spec = crate::linalg::eigvals(&ata).unwrap();
            let lam_min = spec
                .eigenvalues
                .iter()
                .map(|e| e.0)
                .fold(f64::INFINITY, f64::min)
                .max(0.0);
            let oracle = lam_min.sqrt();
            assert!(
                (sig - oracle).abs() <= 1e-6 * oracle.max(1e-12),
                "sigma {sig} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn shifted_nonnormal_two_by_two() {
        // A = [[0,1],[0,0]], lambda = 2: sigma_min([[-2,1],[0,-2]])
        let a = Mat::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        let sig = smallest_singular_shifted(&a, Complex64::new(2.0, 0.0));
        // closed form for [[-2,1],[0,-2]]: singular values of that matrix
        let m = Mat::from_rows(&[vec![-2.0, 1.0], vec![0.0, -2.0]]);
        let oracle = small_sigma_min(&m);
        assert!((sig - oracle).abs() < 1e-9);
        assert!(sig < 2.0, "nonnormal: sigma_min {sig} < dist 2");
    }
}
