//! Cross-checks against independent reference computations.

use num_complex::Complex64;
use std::f64::consts::PI;
use uniqpair::certificate::{rayleigh_quotient_with, DerivativeMode};
use uniqpair::confined::{box_bounds_with, box_eigenfunction, ground_energy, solve_confined, Interval, ZeroPolicy};
use uniqpair::hermite::{expand, fourier_diagonal, HermiteExpansion};
use uniqpair::sobolev::h_norm_sq_spectral;

/// Number of sign changes of the RK4 shooting solution of
/// `ψ'' = 2(V − E)ψ`, `ψ(a) = 0`, `ψ'(a) = 1`, on `(a, b]`.
fn shooting_nodes(iv: Interval, e: f64, steps: usize) -> usize {
    let h = iv.len() / steps as f64;
    let rhs = |x: f64, y: [f64; 2]| [y[1], (x * x - 2.0 * e) * y[0]];
    let mut y = [0.0, 1.0];
    let mut nodes = 0;
    for i in 0..steps {
        let x = iv.a() + i as f64 * h;
        let k1 = rhs(x, y);
        let k2 = rhs(x + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = rhs(x + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = rhs(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        let next = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if next[0] <= 0.0 && y[0] > 0.0 || next[0] >= 0.0 && y[0] < 0.0 {
            nodes += 1;
        }
        y = next;
    }
    nodes
}

/// Ground energy by node-counting bisection on the shooting solution.
fn shooting_ground_energy(iv: Interval) -> f64 {
    let b = box_bounds_with(iv, 0, ZeroPolicy::Relaxed).unwrap();
    let (mut lo, mut hi) = (b.e_down, b.e_up + 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if shooting_nodes(iv, mid, 20_000) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn ground_energies_match_shooting() {
    for (a, b) in [(1.0, 2.0), (0.0, 1.0), (-2.0, 5.0), (3.0, 3.5), (10.0, 10.3), (-8.0, 8.0)] {
        let iv = Interval::new(a, b).unwrap();
        let reference = shooting_ground_energy(iv);
        let e = ground_energy(iv, 1e-10).unwrap();
        assert!(
            (e - reference).abs() <= 1e-8 * reference.max(1.0),
            "{iv}: solver {e}, shooting {reference}"
        );
    }
}

#[test]
fn unit_interval_reference_value() {
    // independent high-order shooting value
    let e = ground_energy(Interval::new(1.0, 2.0).unwrap(), 1e-10).unwrap();
    assert!((e - 6.071204344134902).abs() < 1e-9, "{e}");
}

#[test]
fn excited_energies_match_shooting() {
    let iv = Interval::new(-1.0, 3.0).unwrap();
    let r = solve_confined(iv, 3, 4096).unwrap();
    for (n, &e) in r.energies.iter().enumerate() {
        // the n-th level sits where the node count steps from n to n + 1
        assert_eq!(shooting_nodes(iv, e - 1e-6, 20_000), n, "level {n}");
        assert_eq!(shooting_nodes(iv, e + 1e-6, 20_000), n + 1, "level {n}");
    }
}

#[test]
fn rayleigh_quotient_of_box_sine_matches_closed_form() {
    for (a, b) in [(1.0, 2.0), (-3.0, -1.0), (0.5, 4.0)] {
        let iv = Interval::new(a, b).unwrap();
        let l: f64 = b - a;
        // ∫ψ'² = π²/L², ∫x²ψ² = (a² + ab + b²)/3 − L²/(2π²)
        let exact = PI * PI / (2.0 * l * l) + 0.5 * ((a * a + a * b + b * b) / 3.0 - l * l / (2.0 * PI * PI));
        let xs: Vec<f64> = (0..=4096).map(|i| a + l * i as f64 / 4096.0).collect();
        let psi = box_eigenfunction(iv, 0, &xs).unwrap();
        let q = rayleigh_quotient_with(iv, &psi, DerivativeMode::Spectral).unwrap();
        assert!((q - exact).abs() < 1e-7 * exact, "{iv}: {q} vs {exact}");
    }
}

#[test]
fn coherent_state_coefficients() {
    // e^{−(x−s)²/2} = π^{1/4} e^{−s²/4} Σ (s/√2)^n / sqrt(n!) φ_n
    let s: f64 = 1.3;
    let out = expand(|x| Complex64::new((-(x - s).powi(2) / 2.0).exp(), 0.0), 30, 80).unwrap();
    let mut expected = PI.powf(0.25) * (-s * s / 4.0).exp();
    for (n, c) in out.expansion.coeffs().iter().enumerate() {
        if n > 0 {
            expected *= s / 2f64.sqrt() / (n as f64).sqrt();
        }
        assert!((c - expected).norm() < 1e-12, "n = {n}: {c} vs {expected}");
    }
    assert!(out.residual.abs() < 1e-12);
}

#[test]
fn diagonal_fourier_matches_trapezoid_transform() {
    let e = HermiteExpansion::new(vec![
        Complex64::new(0.3, 0.1),
        Complex64::new(-0.2, 0.5),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.7, -0.4),
        Complex64::new(0.1, 0.2),
    ])
    .unwrap();
    let f_hat = fourier_diagonal(&e);
    let h = 0.02;
    let xs: Vec<f64> = (-1200..=1200).map(|i| i as f64 * h).collect();
    let fx = e.eval(&xs);
    for k in [-4.0, -1.5, 0.0, 0.3, 2.0, 5.0] {
        let ft: Complex64 = xs
            .iter()
            .zip(&fx)
            .map(|(&x, &v)| v * Complex64::from_polar(h, -k * x))
            .sum::<Complex64>()
            / (2.0 * PI).sqrt();
        assert!((ft - f_hat.eval_at(k)).norm() < 1e-12, "k = {k}");
    }
}

#[test]
fn spectral_norm_matches_direct_integrals() {
    // ‖f‖²_𝓗 = ∫x²|f|² + ∫|f'|² (Plancherel), by trapezoid on a fine grid
    let e = HermiteExpansion::from_real(&[0.5, -1.0, 0.25, 0.0, 0.8]).unwrap();
    let h = 1e-3;
    let xs: Vec<f64> = (-15_000..=15_000).map(|i| i as f64 * h).collect();
    let f: Vec<f64> = e.eval(&xs).iter().map(|c| c.re).collect();
    let x_moment: f64 = xs.iter().zip(&f).map(|(x, v)| x * x * v * v).sum::<f64>() * h;
    let kinetic: f64 = f.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / h;
    let direct = x_moment + kinetic;
    let spectral = h_norm_sq_spectral(&e);
    assert!((direct - spectral).abs() < 1e-5 * spectral, "{direct} vs {spectral}");
}
