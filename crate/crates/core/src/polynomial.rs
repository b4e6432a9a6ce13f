//! Root checks for lag polynomials of the form `1 − a₁z − … − a_kz^k`.

use num_complex::Complex64;

/// True when every root of `1 − Σ a_i z^i` lies strictly outside the unit
/// circle, decided by the step-down (reverse Levinson) recursion.
pub fn roots_outside_unit_circle(coeffs: &[f64]) -> bool {
    let mut a: Vec<f64> = trimmed(coeffs).to_vec();
    while let Some(&kappa) = a.last() {
        if !kappa.is_finite() || kappa.abs() >= 1.0 {
            return false;
        }
        let k = a.len();
        let denom = 1.0 - kappa * kappa;
        let next: Vec<f64> = (0..k - 1)
            .map(|j| (a[j] + kappa * a[k - 2 - j]) / denom)
            .collect();
        a = next;
    }
    true
}

fn trimmed(coeffs: &[f64]) -> &[f64] {
    let len = coeffs.iter().rposition(|c| *c != 0.0).map_or(0, |i| i + 1);
    &coeffs[..len]
}

/// Roots of `1 − Σ a_i z^i` by Durand-Kerner iteration.
pub fn lag_polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let a = trimmed(coeffs);
    let degree = a.len();
    if degree == 0 {
        return Vec::new();
    }
    // Monic form: z^k + b_{k-1} z^{k-1} + … + b_0, dividing through by −a_k.
    let lead = -a[degree - 1];
    let mut monic = vec![0.0; degree + 1];
    monic[0] = 1.0 / lead;
    for (i, ai) in a.iter().enumerate() {
        monic[i + 1] = -ai / lead;
    }
    let eval = |z: Complex64| {
        monic
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    };

    let bound = 1.0 + monic[..degree].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| seed.powu(k as u32) * bound.clamp(0.5, 2.0))
        .collect();
    for _ in 0..500 {
        let mut delta = 0.0_f64;
        for i in 0..degree {
            let zi = roots[i];
            let denom = roots
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, zj)| acc * (zi - zj));
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    roots
}

/// How far the smallest root modulus falls short of 1 (zero when all roots are
/// outside the unit circle).
pub fn unit_circle_violation(coeffs: &[f64]) -> f64 {
    if roots_outside_unit_circle(coeffs) {
        return 0.0;
    }
    let min_modulus = lag_polynomial_roots(coeffs)
        .iter()
        .map(|r| r.norm())
        .fold(f64::INFINITY, f64::min);
    if min_modulus.is_finite() {
        (1.0 - min_modulus).max(0.0)
    } else {
        1.0
    }
}
