//! Twiddle tables and real symmetric circulant algebra.
//!
//! Circulant systems here are tiny (a few hundred unknowns), so transforms are
//! plain O(N^2) sums over a precomputed table. Indices are always reduced mod N
//! before the lookup, which keeps `cos(2 pi p k / N)` exact in its symmetry
//! instead of accumulating phase error at large `p * k`.

use std::f64::consts::TAU;

/// `cos(2 pi m / n)` and `sin(2 pi m / n)` for `m = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Twiddles {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Twiddles {
    pub fn new(n: usize) -> Self {
        let mut cos = vec![0.0; n];
        let mut sin = vec![0.0; n];
        // Fill the first half and mirror so that cos[n-m] == cos[m] and
        // sin[n-m] == -sin[m] hold bit for bit.
        for m in 0..=n / 2 {
            let t = TAU * m as f64 / n as f64;
            cos[m] = t.cos();
            sin[m] = t.sin();
        }
        for m in n / 2 + 1..n {
            cos[m] = cos[n - m];
            sin[m] = -sin[n - m];
        }
        if n.is_multiple_of(2) && n > 0 {
            sin[n / 2] = 0.0;
        }
        Twiddles { cos, sin }
    }

    pub fn len(&self) -> usize {
        self.cos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cos.is_empty()
    }

    /// `cos(2 pi (p k mod n) / n)`.
    #[inline]
    pub fn cos(&self, p: usize, k: usize) -> f64 {
        self.cos[(p * k) % self.cos.len()]
    }

    #[inline]
    pub fn sin(&self, p: usize, k: usize) -> f64 {
        self.sin[(p * k) % self.sin.len()]
    }

    pub fn cos_table(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_table(&self) -> &[f64] {
        &self.sin
    }
}

/// Eigenvalues `sum_m c_m cos(2 pi p m / n)` of the symmetric circulant with first row `c`.
pub fn symmetric_spectrum(tw: &Twiddles, c: &[f64]) -> Vec<f64> {
    let n = c.len();
    (0..n).map(|p| (0..n).map(|m| c[m] * tw.cos(p, m)).sum()).collect()
}

/// Forward transform `fhat_p = sum_j f_j exp(-2 pi i p j / n)` split into real and imaginary parts.
pub fn forward(tw: &Twiddles, f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = f.len();
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    for p in 0..n {
        let (mut a, mut b) = (0.0, 0.0);
        for (j, &fj) in f.iter().enumerate() {
            a += tw.cos(p, j) * fj;
            b -= tw.sin(p, j) * fj;
        }
        re[p] = a;
        im[p] = b;
    }
    (re, im)
}

/// Inverse transform `(1/n) sum_p ghat_p exp(2 pi i p k / n)` of a spectrum.
pub fn inverse(tw: &Twiddles, re: &[f64], im: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = re.len();
    let scale = 1.0 / n as f64;
    let mut out_re = vec![0.0; n];
    let mut out_im = vec![0.0; n];
    for k in 0..n {
        let (mut a, mut b) = (0.0, 0.0);
        for p in 0..n {
            let (c, s) = (tw.cos(p, k), tw.sin(p, k));
            a += re[p] * c - im[p] * s;
            b += re[p] * s + im[p] * c;
        }
        out_re[k] = a * scale;
        out_im[k] = b * scale;
    }
    (out_re, out_im)
}

/// First row of the inverse of a symmetric circulant given its spectrum.
pub fn inverse_kernel(tw: &Twiddles, spectrum: &[f64]) -> Vec<f64> {
    let n = spectrum.len();
    let scale = 1.0 / n as f64;
    (0..n).map(|d| (0..n).map(|p| tw.cos(p, d) / spectrum[p]).sum::<f64>() * scale).collect()
}

/// Solve `C x = b` for a real symmetric circulant `C_{jk} = c[(k - j) mod n]`.
///
/// Returns `None` if any eigenvalue vanishes relative to the largest.
pub fn solve_symmetric(c: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = c.len();
    debug_assert_eq!(n, b.len());
    let tw = Twiddles::new(n);
    let lam = symmetric_spectrum(&tw, c);
    let scale = lam.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    if lam.iter().any(|l| l.abs() <= 1e-13 * scale) {
        return None;
    }
    let h = inverse_kernel(&tw, &lam);
    Some((0..n).map(|k| (0..n).map(|j| h[(k + n - j) % n] * b[j]).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twiddles_are_exactly_symmetric() {
        for n in [4, 7, 16, 33, 256] {
            let tw = Twiddles::new(n);
            for m in 1..n {
                assert_eq!(tw.cos_table()[m], tw.cos_table()[n - m]);
                assert_eq!(tw.sin_table()[m], -tw.sin_table()[n - m]);
            }
        }
    }

    #[test]
    fn forward_then_inverse_is_identity() {
        let f: Vec<f64> = (0..11).map(|i| (i as f64 * 0.7).sin() + 0.1 * i as f64).collect();
        let tw = Twiddles::new(f.len());
        let (re, im) = forward(&tw, &f);
        let (g, gi) = inverse(&tw, &re, &im);
        for (a, b) in f.iter().zip(&g) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(gi.iter().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn symmetric_solve_matches_direct_product() {
        let c = [4.0, 1.0, 0.5, 0.5, 1.0];
        let x = [1.0, -2.0, 0.25, 3.0, 0.0];
        let n = c.len();
        let b: Vec<f64> = (0..n).map(|j| (0..n).map(|k| c[(k + n - j) % n] * x[k]).sum()).collect();
        let y = solve_symmetric(&c, &b).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_circulant_is_rejected() {
        // all-ones kernel has rank one
        assert!(solve_symmetric(&[1.0; 4], &[1.0; 4]).is_none());
    }
}
