//! Harmonic-oscillator eigenfunctions on a grid.
//!
//! Dimensionless form: `h_0(x) = π^{-1/4} e^{-x²/2}` and the stable two-term
//! recurrence `h_{n+1}(x) = x √(2/(n+1)) h_n(x) − √(n/(n+1)) h_{n-1}(x)`.
//! With an explicit `ħ` the eigenfunction is `φ_n(q) = ħ^{-1/4} h_n(q/√ħ)`.

/// Values of `h_0 .. h_{n_max}` at the given dimensionless points; the outer
/// index is the excitation level.
pub fn eigenfunction_table(n_max: usize, xs: &[f64]) -> Vec<Vec<f64>> {
    let norm0 = std::f64::consts::PI.powf(-0.25);
    let mut table = Vec::with_capacity(n_max + 1);
    table.push(xs.iter().map(|&x| norm0 * (-0.5 * x * x).exp()).collect::<Vec<_>>());
    if n_max >= 1 {
        let prev: &Vec<f64> = &table[0];
        let first: Vec<f64> = xs
            .iter()
            .zip(prev)
            .map(|(&x, &h0)| x * std::f64::consts::SQRT_2 * h0)
            .collect();
        table.push(first);
    }
    for n in 1..n_max {
        let coeff_x = (2.0 / (n as f64 + 1.0)).sqrt();
        let coeff_prev = (n as f64 / (n as f64 + 1.0)).sqrt();
        let next: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(k, &x)| coeff_x * x * table[n][k] - coeff_prev * table[n - 1][k])
            .collect();
        table.push(next);
    }
    table
}
