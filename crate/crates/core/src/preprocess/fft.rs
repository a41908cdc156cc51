//! Discrete Fourier transform for arbitrary lengths.
//!
//! Power-of-two lengths use an iterative radix-2 FFT. Every other length is
//! mapped onto a power-of-two circular convolution with Bluestein's chirp-z
//! identity, so no zero padding leaks into the spectrum of the original
//! series.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance for the conjugate-symmetry check in [`idft`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Forward transform, `X[k] = Σ x[j]·exp(−2πi·jk/N)`.
pub fn dft(values: &[f64]) -> Result<Vec<Complex64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut buf);
    Ok(buf)
}

/// Inverse of [`dft`] for a conjugate-symmetric spectrum; returns the real series.
pub fn idft(spectrum: &[Complex64]) -> Result<Vec<f64>> {
    let n = spectrum.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let scale = spectrum
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for k in 0..n {
        let mirror = spectrum[(n - k) % n].conj();
        if (spectrum[k] - mirror).norm() > SYMMETRY_TOLERANCE * scale {
            return Err(Error::NotConjugateSymmetric { bin: k });
        }
    }
    Ok(inverse_complex(spectrum).into_iter().map(|c| c.re).collect())
}

/// Complex inverse transform including the 1/N factor.
pub fn inverse_complex(spectrum: &[Complex64]) -> Vec<Complex64> {
    let n = spectrum.len() as f64;
    let mut buf: Vec<Complex64> = spectrum.iter().map(|c| c.conj()).collect();
    fft(&mut buf);
    buf.iter().map(|c| c.conj() / n).collect()
}

/// In-place forward FFT of any length.
pub fn fft(buf: &mut [Complex64]) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(buf);
    } else {
        bluestein(buf);
    }
}

fn twiddle(k: usize, n: usize) -> Complex64 {
    let angle = -2.0 * PI * k as f64 / n as f64;
    Complex64::new(angle.cos(), angle.sin())
}

fn radix2(buf: &mut [Complex64]) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let twiddles: Vec<Complex64> = (0..n / 2).map(|k| twiddle(k, n)).collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for chunk in buf.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let t = hi[k] * twiddles[k * stride];
                hi[k] = lo[k] - t;
                lo[k] += t;
            }
        }
        len <<= 1;
    }
}

fn bluestein(buf: &mut [Complex64]) {
    let n = buf.len();
    let m = (2 * n - 1).next_power_of_two();
    // chirp[k] = exp(−iπk²/n); reduce k² mod 2n first so the angle stays small.
    let two_n = 2 * n as u128;
    let chirp: Vec<Complex64> = (0..n)
        .map(|k| {
            let k2 = (k as u128 * k as u128) % two_n;
            let angle = -PI * k2 as f64 / n as f64;
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..n {
        a[k] = buf[k] * chirp[k];
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = chirp[0].conj();
    for k in 1..n {
        let c = chirp[k].conj();
        b[k] = c;
        b[m - k] = c;
    }
    radix2(&mut a);
    radix2(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= *y;
    }
    // Inverse via conjugation.
    for x in a.iter_mut() {
        *x = x.conj();
    }
    radix2(&mut a);
    let inv_m = 1.0 / m as f64;
    for k in 0..n {
        buf[k] = a[k].conj() * inv_m * chirp[k];
    }
}
