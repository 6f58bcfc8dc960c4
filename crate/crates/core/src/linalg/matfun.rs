//! Matrix functions F(A) through the eigendecomposition X diag(F(λ)) X⁻¹,
//! with eigenvectors recovered by inverse iteration on the Hessenberg form.

use super::{balance, eigvals_with_source, francis_qr, hessenberg, Lu, Mat};
use crate::error::{Error, Result};
use crate::linalg::DetRng;
use num_complex::Complex64;

/// Eigenvalues plus (complex) eigenvector matrix of a real square matrix.
#[derive(Clone, Debug)]
pub struct EigDecomposition {
    pub eigenvalues: Vec<Complex64>,
    pub vectors: Mat<Complex64>,
    pub condition_estimate: f64,
    inverse: Mat<Complex64>,
}

/// Inverse-iteration eigenvectors on the Hessenberg form; conjugate pairs
/// share one solve. Seeded deterministically (0x5EED).
pub fn eig_decomposition(a: &Mat<f64>) -> Result<EigDecomposition> {
    assert!(a.is_square());
    let n = a.nrows();
    let mut bal = a.clone();
    let scale = balance(&mut bal);
    let mut hess = bal.clone();
    let q = hessenberg(&mut hess, true).unwrap_or_else(|| Mat::identity(n));
    let mut hwork = hess.clone();
    let (mut lambda, _) = francis_qr(&mut hwork, 30 * n.max(1))?;
    // canonical order pairs conjugates adjacently
    lambda.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.abs().total_cmp(&y.im.abs())));

    let hnorm = hess.norm_inf().max(f64::MIN_POSITIVE);
    let hc = complexify(&hess);
    let mut rng = DetRng::new(0x5EED);
    let mut vectors = Mat::<Complex64>::zeros(n, n);

    let mut col = 0;
    while col < n {
        let lam = lambda[col];
        let v = inverse_iteration(&hc, lam, hnorm, &mut rng)?;
        // back-transform: x = D · Q · v
        let x = back_transform(&q, &scale, &v);
        for i in 0..n {
            vectors[(i, col)] = x[i];
        }
        if lam.im != 0.0 && col + 1 < n && (lambda[col + 1] - lam.conj()).norm() < 1e-8 * hnorm {
            for i in 0..n {
                vectors[(i, col + 1)] = x[i].conj();
            }
            lambda[col + 1] = lam.conj();
            col += 2;
        } else {
            col += 1;
        }
    }

    let lu = Lu::factor(&vectors)
        .map_err(|_| Error::IllConditioned("eigenvector matrix is numerically singular".into()))?;
    let inverse = lu.inverse();
    let condition_estimate = vectors.norm_inf() * inverse.norm_inf();
    Ok(EigDecomposition {
        eigenvalues: lambda,
        vectors,
        condition_estimate,
        inverse,
    })
}

/// F(A) = X diag(F(λ)) X⁻¹. Requires the eigenvector condition estimate to
/// stay within 1e8 and the imaginary residue of the result within
/// 1e-8 relative; the verified-imaginary part is then discarded.
pub fn mat_function(
    a: &Mat<f64>,
    f: &dyn Fn(Complex64) -> Complex64,
) -> Result<Mat<f64>> {
    let dec = eig_decomposition(a)?;
    if dec.condition_estimate > 1e8 {
        return Err(Error::IllConditioned(format!(
            "eigenvector condition estimate {:.3e} exceeds 1e8; reduce the matrix size",
            dec.condition_estimate
        )));
    }
    let n = a.nrows();
    // M = diag(F(lambda)) X^{-1}, result = X M
    let mut m = dec.inverse.clone();
    for i in 0..n {
        let fl = f(dec.eigenvalues[i]);
        for j in 0..n {
            m[(i, j)] = fl * m[(i, j)];
        }
    }
    let full = dec.vectors.matmul(&m);
    let mut re_norm = 0.0_f64;
    let mut im_norm = 0.0_f64;
    for v in full.data() {
        re_norm = re_norm.max(v.re.abs());
        im_norm = im_norm.max(v.im.abs());
    }
    if im_norm > 1e-8 * re_norm.max(f64::MIN_POSITIVE) {
        return Err(Error::IllConditioned(format!(
            "matrix function left imaginary residue {:.3e} (relative {:.3e}); \
             transform may not map conjugates to conjugates",
            im_norm,
            im_norm / re_norm.max(f64::MIN_POSITIVE)
        )));
    }
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = full[(i, j)].re;
        }
    }
    Ok(out)
}

fn complexify(a: &Mat<f64>) -> Mat<Complex64> {
    a.to_complex()
}

fn inverse_iteration(
    h: &Mat<Complex64>,
    lambda: Complex64,
    hnorm: f64,
    rng: &mut DetRng,
) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let mut shift = lambda;
    let mut lu = None;
    // nudge the shift off the exactly-singular point if needed
    for attempt in 0..6 {
        let mut m = h.clone();
        for i in 0..n {
            m[(i, i)] = m[(i, i)] - shift;
        }
        match Lu::factor(&m) {
            Ok(f) => {
                lu = Some(f);
                break;
            }
            Err(_) => {
                let bump = hnorm * 1e-13 * 2f64.powi(attempt);
                shift = lambda + Complex64::new(bump, bump);
            }
        }
    }
    let lu = lu.ok_or_else(|| Error::IllConditioned("inverse iteration shift kept singular".into()))?;
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.next_f64(), rng.next_f64()))
        .collect();
    cnormalize(&mut v);
    for _ in 0..2 {
        v = lu.solve(&v);
        cnormalize(&mut v);
    }
    Ok(v)
}

fn back_transform(q: &Mat<f64>, scale: &[f64], v: &[Complex64]) -> Vec<Complex64> {
    let n = q.nrows();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += Complex64::new(q[(i, j)], 0.0) * v[j];
        }
        out[i] = acc * Complex64::new(scale[i], 0.0);
    }
    let mut o = out;
    cnormalize(&mut o);
    o
}

fn cnormalize(v: &mut [Complex64]) {
    let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

/// Verify A x = λ x residuals for the decomposition (test support).
#[allow(dead_code)]
pub(crate) fn residual(a: &Mat<f64>, dec: &EigDecomposition) -> f64 {
    let n = a.nrows();
    let ac = a.to_complex();
    let mut worst = 0.0_f64;
    for c in 0..n {
        let x: Vec<Complex64> = (0..n).map(|i| dec.vectors[(i, c)]).collect();
        let ax = ac.matvec(&x);
        for i in 0..n {
            worst = worst.max((ax[i] - dec.eigenvalues[c] * x[i]).norm());
        }
    }
    worst
}
