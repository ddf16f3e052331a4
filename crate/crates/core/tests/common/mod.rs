//! Reference models and independent oracles shared by the integration tests.
#![allow(dead_code)]

use aperiodic_spectra::operator::{assemble_coefficients, CoefficientWindow, SamplingFunctions};
use aperiodic_spectra::subshift::SubshiftSpec;

/// `a ≡ 1`, `b ≡ 0` on `[−r, r]`.
pub fn free(r: i64) -> CoefficientWindow<f64> {
    CoefficientWindow::constant(1.0, 0.0, -r, r).unwrap()
}

/// Alternating `a = 1, 2`, `b ≡ 0`; bands `1 ≤ |E| ≤ 3`.
pub fn period_two(r: i64) -> CoefficientWindow<f64> {
    CoefficientWindow::periodic(&[1.0, 2.0], &[0.0], -r, r).unwrap()
}

/// Fibonacci subshift with `p(a) = 1`, `p(b) = 2`, `q ≡ 0`.
pub fn fibonacci(r: i64) -> CoefficientWindow<f64> {
    let orbit = SubshiftSpec::fibonacci().orbit(r as usize).unwrap();
    let sampling = SamplingFunctions::from_letters(&[1.0, 2.0], &[0.0, 0.0]).unwrap();
    assemble_coefficients(&orbit, &sampling, -r, r).unwrap()
}

/// `γ(E) = arccosh(|E|/2)` for the free Laplacian off `[−2, 2]`.
pub fn free_lyapunov(e: f64) -> f64 {
    if e.abs() <= 2.0 {
        0.0
    } else {
        (e.abs() / 2.0).acosh()
    }
}

/// Coefficients of `det(J − x)` in the monomial basis, lowest degree
/// first, from the three-term recurrence of leading minors.
pub fn char_poly(diag: &[f64], offdiag: &[f64]) -> Vec<f64> {
    // p_k(x) = (d_k − x)·p_{k−1}(x) − e_{k−1}²·p_{k−2}(x)
    let mut prev: Vec<f64> = vec![1.0];
    let mut cur: Vec<f64> = vec![diag[0], -1.0];
    for k in 1..diag.len() {
        let mut next = vec![0.0; k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i] += diag[k] * c;
            next[i + 1] -= c;
        }
        let e2 = offdiag[k - 1] * offdiag[k - 1];
        for (i, c) in prev.iter().enumerate() {
            next[i] -= e2 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `det(J − x)` and its derivative, evaluated by the recurrence itself
/// (better conditioned than the expanded coefficients).
fn char_poly_eval(diag: &[f64], offdiag: &[f64], x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, diag[0] - x);
    let (mut d0, mut d1) = (0.0, -1.0);
    for k in 1..diag.len() {
        let e2 = offdiag[k - 1] * offdiag[k - 1];
        let p2 = (diag[k] - x) * p1 - e2 * p0;
        let d2 = (diag[k] - x) * d1 - p1 - e2 * d0;
        (p0, p1, d0, d1) = (p1, p2, d1, d2);
    }
    (p1, d1)
}

/// Roots of the characteristic polynomial: Durand–Kerner on the monomial
/// coefficients, then Newton steps on the recurrence. Ascending.
pub fn char_poly_roots(diag: &[f64], offdiag: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![diag[0]];
    }
    let coeffs = char_poly(diag, offdiag);
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: (f64, f64)| {
        let mut acc = (1.0, 0.0);
        for c in monic[..n].iter().rev() {
            acc = (acc.0 * z.0 - acc.1 * z.1 + c, acc.0 * z.1 + acc.1 * z.0);
        }
        acc
    };
    let radius = 1.0 + monic[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            (radius * t.cos(), radius * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let num = eval(z[i]);
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    den = (den.0 * d.0 - den.1 * d.1, den.0 * d.1 + den.1 * d.0);
                }
            }
            let norm = den.0 * den.0 + den.1 * den.1;
            let step = (
                (num.0 * den.0 + num.1 * den.1) / norm,
                (num.1 * den.0 - num.0 * den.1) / norm,
            );
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            moved = moved.max(step.0.hypot(step.1));
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    let mut roots: Vec<f64> = z
        .into_iter()
        .map(|(re, _)| {
            let mut x = re;
            for _ in 0..8 {
                let (p, dp) = char_poly_eval(diag, offdiag, x);
                if dp == 0.0 {
                    break;
                }
                let step = p / dp;
                x -= step;
                if step.abs() < 1e-16 * (1.0 + x.abs()) {
                    break;
                }
            }
            x
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots
}
