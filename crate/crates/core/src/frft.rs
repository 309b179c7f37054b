//! Unitary fractional Fourier transform on a uniform grid.
//!
//! `F_α` is defined by the kernel
//! `K_α(u, x) = √((1 - i cot α)/2π) · exp(i cot α (u² + x²)/2 - i u x csc α)`,
//! which reduces to the plain Fourier transform `e^{-iux}/√(2π)` at
//! `α = π/2` and has the oscillator eigenfunctions as eigenvectors with
//! eigenvalues `e^{-inα}`. Composing transforms adds angles.
//!
//! The kernel integral is evaluated by a chirp–convolution (Bluestein)
//! stage, exact for the trapezoidal quadrature at any angle whose
//! cotangent stays bounded. Angles are therefore reduced modulo exact
//! quarter turns so the single remaining stage runs at `α ∈ (π/4, 3π/4]`,
//! away from the singular orders near `0` and `π`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::rc::Rc;

use num_complex::Complex64;

use crate::fft_util::{fft_forward, fft_inverse};

/// Angles closer than this to a multiple of π/2 are treated as exact
/// quarter turns.
const QUARTER_SNAP: f64 = 1e-12;

/// Fractional Fourier transform of samples on the grid `x_k = x0 + k dx`,
/// returned on the same grid.
pub fn fractional_fourier(samples: &[Complex64], x0: f64, dx: f64, angle: f64) -> Vec<Complex64> {
    let t = angle.rem_euclid(TAU);
    let m = (t / FRAC_PI_2).round() as i64;
    let residual = t - m as f64 * FRAC_PI_2;
    let (turns, stage) = if residual.abs() < QUARTER_SNAP {
        ((m.rem_euclid(4)) as usize, None)
    } else {
        // Borrow one quarter turn so the stage angle lands in (π/4, 3π/4).
        (((m + 3).rem_euclid(4)) as usize, Some(residual + FRAC_PI_2))
    };

    let mut current = samples.to_vec();
    for _ in 0..turns {
        current = chirp_stage(&current, x0, dx, FRAC_PI_2);
    }
    if let Some(alpha) = stage {
        current = chirp_stage(&current, x0, dx, alpha);
    }
    current
}

/// Single chirp–FFT–chirp evaluation of `F_α` for `α` bounded away from the
/// singular orders (`|sin α|` of order one).
fn chirp_stage(input: &[Complex64], x0: f64, dx: f64, alpha: f64) -> Vec<Complex64> {
    let m = input.len();
    let (sin_a, cos_a) = alpha.sin_cos();
    let cot = cos_a / sin_a;
    let csc = 1.0 / sin_a;
    let beta = csc * dx * dx;

    // a_k = ψ_k · dx · exp(i [cot x_k²/2 - csc x0 dx k - β k²/2])
    let mut a: Vec<Complex64> = (0..m)
        .map(|k| {
            let x = x0 + k as f64 * dx;
            let kf = k as f64;
            let phase = 0.5 * cot * x * x - csc * x0 * dx * kf - 0.5 * beta * kf * kf;
            input[k] * Complex64::from_polar(dx, phase)
        })
        .collect();

    let conv = chirp_convolution(&mut a, beta, m);

    // Prefactor √((1 - i cot α)/2π); its phase matters for composing stages.
    let scale = (Complex64::new(1.0, -cot) / TAU).sqrt();
    (0..m)
        .map(|j| {
            let u = x0 + j as f64 * dx;
            let jf = j as f64;
            let phase = 0.5 * cot * u * u - csc * x0 * x0 - csc * x0 * dx * jf
                - 0.5 * beta * jf * jf;
            scale * Complex64::from_polar(1.0, phase) * conv[j]
        })
        .collect()
}

/// Linear convolution of `a` (length m) with the chirp `e^{iβ n²/2}`,
/// `n = -(m-1)..m`, evaluated at lags `0..m` via zero-padded FFTs.
fn chirp_convolution(a: &mut Vec<Complex64>, beta: f64, m: usize) -> Vec<Complex64> {
    let padded = (2 * m - 1).next_power_of_two();
    a.resize(padded, Complex64::new(0.0, 0.0));
    fft_forward(a);
    let kernel = chirp_kernel_fft(beta, m, padded);
    for (x, k) in a.iter_mut().zip(kernel.iter()) {
        *x *= k;
    }
    fft_inverse(a);
    a[..m].to_vec()
}

thread_local! {
    static KERNEL_CACHE: RefCell<HashMap<(u64, usize, usize), Rc<Vec<Complex64>>>> =
        RefCell::new(HashMap::new());
}

/// FFT of the wrapped chirp kernel, cached per (β, m, padding): scan loops
/// revisit the same few angles thousands of times.
fn chirp_kernel_fft(beta: f64, m: usize, padded: usize) -> Rc<Vec<Complex64>> {
    KERNEL_CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        if cache.len() > 64 {
            cache.clear();
        }
        cache
            .entry((beta.to_bits(), m, padded))
            .or_insert_with(|| {
                let mut kernel = vec![Complex64::new(0.0, 0.0); padded];
                for n in 0..m {
                    let nf = n as f64;
                    let value = Complex64::from_polar(1.0, 0.5 * beta * nf * nf);
                    kernel[n] = value;
                    if n > 0 {
                        kernel[padded - n] = value;
                    }
                }
                fft_forward(&mut kernel);
                Rc::new(kernel)
            })
            .clone()
    })
}
