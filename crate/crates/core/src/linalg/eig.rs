//! Nonsymmetric eigenvalues: balancing, Householder reduction to upper
//! Hessenberg form, and the Francis implicit double-shift QR iteration.
//!
//! The QR core follows the classic EISPACK `hqr` organization (see also the
//! JAMA port): all arithmetic stays real, complex pairs emerge from deflated
//! 2x2 blocks and are exactly conjugate by construction.

use super::Mat;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Eigenvalues of a real matrix plus convergence diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Spectrum {
    pub m: usize,
    pub eigenvalues: Vec<(f64, f64)>,
    pub min_real_part: f64,
    pub iterations: usize,
    pub converged: bool,
    pub source: String,
}

impl Spectrum {
    pub fn complex_eigenvalues(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect()
    }

    pub fn min_real_part(&self) -> f64 {
        self.min_real_part
    }

    /// Sort by (Re, Im); the canonical order used in reports and
    /// multiset comparisons.
    pub fn sorted(&self) -> Vec<(f64, f64)> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        v
    }
}

/// Parlett–Reinsch balancing: diagonal similarity with radix-2 powers so row
/// and column norms roughly match. Returns the scaling vector `d` such that
/// balanced = D⁻¹ A D with D = diag(d).
pub fn balance(a: &mut Mat<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut scale = vec![1.0; n];
    let radix: f64 = 2.0;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let mut cc = c;
            let g = r / radix;
            while cc < g {
                f *= radix;
                cc *= sqrdx;
            }
            let g = r * radix;
            while cc >= g {
                f /= radix;
                cc /= sqrdx;
            }
            if (cc + r) / f < 0.95 * (c + r) {
                done = false;
                let ginv = 1.0 / f;
                scale[i] *= f;
                for j in 0..n {
                    a[(i, j)] *= ginv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
    scale
}

/// Householder reduction to upper Hessenberg form, in place. When `accumulate`
/// is set, also returns the orthogonal Q with `A = Q H Qᵀ`.
pub fn hessenberg(a: &mut Mat<f64>, accumulate: bool) -> Option<Mat<f64>> {
    let n = a.nrows();
    let mut vs: Vec<(usize, Vec<f64>)> = Vec::new();

    for k in 1..n.saturating_sub(1) {
        // Householder vector annihilating column k-1 below row k
        let mut alpha = 0.0;
        for i in k..n {
            alpha += a[(i, k - 1)] * a[(i, k - 1)];
        }
        if alpha == 0.0 {
            continue;
        }
        let a0 = a[(k, k - 1)];
        let mut alpha = alpha.sqrt();
        if a0 > 0.0 {
            alpha = -alpha;
        }
        let mut v: Vec<f64> = (k..n).map(|i| a[(i, k - 1)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A <- (I - 2vvᵀ/vᵀv) A
        for j in k - 1..n {
            let mut dot = 0.0;
            for (idx, i) in (k..n).enumerate() {
                dot += v[idx] * a[(i, j)];
            }
            let t = 2.0 * dot / vnorm2;
            for (idx, i) in (k..n).enumerate() {
                a[(i, j)] -= t * v[idx];
            }
        }
        // A <- A (I - 2vvᵀ/vᵀv)
        for i in 0..n {
            let mut dot = 0.0;
            for (idx, j) in (k..n).enumerate() {
                dot += a[(i, j)] * v[idx];
            }
            let t = 2.0 * dot / vnorm2;
            for (idx, j) in (k..n).enumerate() {
                a[(i, j)] -= t * v[idx];
            }
        }
        if accumulate {
            vs.push((k, v));
        }
        // clean the annihilated part exactly
        a[(k, k - 1)] = alpha;
        for i in k + 1..n {
            a[(i, k - 1)] = 0.0;
        }
    }

    if !accumulate {
        return None;
    }
    let mut q = Mat::identity(n);
    // Q = H_1 H_2 ... applied to I from the left, reversed accumulation
    for (k, v) in vs.iter().rev() {
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        for j in 0..n {
            let mut dot = 0.0;
            for (idx, i) in (*k..n).enumerate() {
                dot += v[idx] * q[(i, j)];
            }
            let t = 2.0 * dot / vnorm2;
            for (idx, i) in (*k..n).enumerate() {
                q[(i, j)] -= t * v[idx];
            }
        }
    }
    Some(q)
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
/// Returns eigenvalues and the total sweep count.
pub fn francis_qr(h: &mut Mat<f64>, max_total: usize) -> Result<(Vec<Complex64>, usize)> {
    let n = h.nrows();
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok((d, 0));
    }

    let eps = f64::EPSILON;
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += h[(i, j)].abs();
        }
    }
    if anorm == 0.0 {
        return Ok((d, 0));
    }

    let low = 0usize;
    let mut nn = n as isize - 1;
    let mut exshift = 0.0;
    let mut iter = 0usize;
    let mut total = 0usize;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w): (f64, f64, f64, f64);

    while nn >= low as isize {
        let en = nn as usize;
        // find a negligible subdiagonal element
        let mut l = en;
        while l > low {
            let mut s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = anorm;
            }
            if h[(l, l - 1)].abs() <= eps * s {
                h[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }

        if l == en {
            // single real root
            d[en] = Complex64::new(h[(en, en)] + exshift, 0.0);
            nn -= 1;
            iter = 0;
        } else if l + 1 == en {
            // 2x2 block: real pair or exact conjugate complex pair
            w = h[(en, en - 1)] * h[(en - 1, en)];
            p = 0.5 * (h[(en - 1, en - 1)] - h[(en, en)]);
            q = p * p + w;
            z = q.abs().sqrt();
            x = h[(en, en)] + exshift;
            if q >= 0.0 {
                z = p + z.copysign(p);
                let r1 = x + z;
                let r2 = if z != 0.0 { x - w / z } else { r1 };
                d[en - 1] = Complex64::new(r1, 0.0);
                d[en] = Complex64::new(r2, 0.0);
            } else {
                d[en - 1] = Complex64::new(x + p, z);
                d[en] = Complex64::new(x + p, -z);
            }
            nn -= 2;
            iter = 0;
        } else {
            // QR sweep on rows l..=en
            x = h[(en, en)];
            y = h[(en - 1, en - 1)];
            w = h[(en, en - 1)] * h[(en - 1, en)];
            if iter == 10 || iter == 20 {
                // exceptional shift
                exshift += x;
                for i in low..=en {
                    h[(i, i)] -= x;
                }
                let s = h[(en, en - 1)].abs() + h[(en - 1, en - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            iter += 1;
            total += 1;
            if total > max_total {
                // partial results: remaining diagonal entries as best guess
                for i in 0..=en {
                    d[i] = Complex64::new(h[(i, i)] + exshift, 0.0);
                }
                return Err(Error::NonConvergence {
                    iterations: total,
                    context: format!("Francis QR exceeded {max_total} sweeps at block size {}", en + 1),
                });
            }

            // two consecutive small subdiagonals give a cheaper start
            let mut m = en - 2;
            loop {
                z = h[(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - rr - ss;
                r = h[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = h[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=en {
                h[(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // double QR step on rows m..=en, columns en-? (bulge chase)
            for k in m..en {
                let notlast = k != en - 1;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k != m {
                    h[(k, k - 1)] = -s * x;
                } else if l != m {
                    h[(k, k - 1)] = -h[(k, k - 1)];
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;

                // row modification
                for j in k..=en {
                    let mut pp = h[(k, j)] + q * h[(k + 1, j)];
                    if notlast {
                        pp += r * h[(k + 2, j)];
                        h[(k + 2, j)] -= pp * z;
                    }
                    h[(k + 1, j)] -= pp * y;
                    h[(k, j)] -= pp * x;
                }
                // column modification
                let upper = en.min(k + 3);
                for i in l..=upper {
                    let mut pp = x * h[(i, k)] + y * h[(i, k + 1)];
                    if notlast {
                        pp += z * h[(i, k + 2)];
                        h[(i, k + 2)] -= pp * r;
                    }
                    h[(i, k + 1)] -= pp * q;
                    h[(i, k)] -= pp;
                }
            }
        }
    }
    Ok((d, total))
}

/// All eigenvalues of a dense real matrix.
pub fn eigvals(a: &Mat<f64>) -> Result<Spectrum> {
    eigvals_with_source(a, "matrix")
}

pub fn eigvals_with_source(a: &Mat<f64>, source: &str) -> Result<Spectrum> {
    assert!(a.is_square(), "eigvals requires a square matrix");
    let n = a.nrows();
    if n > 1000 {
        return Err(Error::Unsupported(format!(
            "matrix dimension {n} exceeds the m <= 1000 cap"
        )));
    }
    let mut work = a.clone();
    balance(&mut work);
    hessenberg(&mut work, false);
    let max_total = 30 * n.max(1);
    let (vals, iterations) = match francis_qr(&mut work, max_total) {
        Ok(v) => v,
        Err(e) => return Err(e),
    };
    let mut eigenvalues: Vec<(f64, f64)> = vals.iter().map(|c| (c.re, c.im)).collect();
    eigenvalues.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let min_real_part = eigenvalues
        .iter()
        .map(|e| e.0)
        .fold(f64::INFINITY, f64::min);
    Ok(Spectrum {
        m: n,
        eigenvalues,
        min_real_part,
        iterations,
        converged: true,
        source: source.to_string(),
    })
}

/// Greedy nearest multiset match of two spectra; returns the max pairwise
/// distance. Both lists must have equal length.
pub fn multiset_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    assert_eq!(a.len(), b.len(), "multiset size mismatch");
    let mut taken = vec![false; b.len()];
    let mut sorted: Vec<(f64, f64)> = a.to_vec();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut worst = 0.0_f64;
    for &(re, im) in &sorted {
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for (j, &(br, bi)) in b.iter().enumerate() {
            if taken[j] {
                continue;
            }
            let d = ((re - br) * (re - br) + (im - bi) * (im - bi)).sqrt();
            if d < best {
                best = d;
                best_j = j;
            }
        }
        taken[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let a = Mat::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]);
        let s = eigvals(&a).unwrap();
        assert_eq!(s.sorted(), vec![(2.0, 0.0), (3.0, 0.0)]);
        assert_eq!(s.min_real_part, 2.0);
    }

    #[test]
    fn rotation_matrix_pure_imaginary() {
        let a = Mat::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let s = eigvals(&a).unwrap();
        let e = s.sorted();
        assert!((e[0].0).abs() < 1e-14 && (e[0].1 + 1.0).abs() < 1e-14);
        assert!((e[1].0).abs() < 1e-14 && (e[1].1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn conjugate_pairs_exact() {
        // companion-type matrix with complex spectrum
        let a = Mat::from_rows(&[
            vec![0.0, 0.0, -1.0],
            vec![1.0, 0.0, -1.0],
            vec![0.0, 1.0, -1.0],
        ]);
        let s = eigvals(&a).unwrap();
        let evs = s.complex_eigenvalues();
        for e in &evs {
            if e.im != 0.0 {
                assert!(
                    evs.iter().any(|f| f.re == e.re && f.im == -e.im),
                    "unpaired {e}"
                );
            }
        }
    }

    #[test]
    fn trace_consistency_random() {
        let mut rng = crate::linalg::DetRng::new(11);
        for n in [3usize, 6, 12, 25] {
            let mut a = Mat::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = rng.next_f64();
                }
            }
            let s = eigvals(&a).unwrap();
            let tr: f64 = a.trace();
            let sum: f64 = s.eigenvalues.iter().map(|e| e.0).sum();
            assert!(
                (tr - sum).abs() <= 1e-8 * tr.abs().max(1.0),
                "n={n}: trace {tr} vs sum {sum}"
            );
        }
    }

    #[test]
    fn graded_matrix_keeps_tiny_eigenvalue() {
        // balancing should let the tiny decoupled-ish eigenvalue survive
        let a = Mat::from_rows(&[
            vec![1e-12, 1e-14, 0.0],
            vec![1e-10, 2e-6, 1e-8],
            vec![0.1, 0.2, 0.5],
        ]);
        let s = eigvals(&a).unwrap();
        let smallest = s
            .eigenvalues
            .iter()
            .map(|e| (e.0 * e.0 + e.1 * e.1).sqrt())
            .fold(f64::INFINITY, f64::min);
        assert!(smallest < 1e-10, "tiny eigenvalue lost: {smallest}");
    }
}
