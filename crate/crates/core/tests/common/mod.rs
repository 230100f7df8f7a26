#![allow(dead_code)]

use pasec::config::RunConfig;

/// Adaptive tanh-sinh integration: bisects until each subinterval's error
/// estimate is below its share of `tol`.
pub fn adaptive<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    adaptive_depth(f, a, b, tol, 0)
}

fn adaptive_depth<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let out = quadrature::integrate(f, a, b, tol);
    if out.error_estimate <= tol || depth >= 40 {
        return out.integral;
    }
    let m = 0.5 * (a + b);
    adaptive_depth(f, a, m, 0.5 * tol, depth + 1) + adaptive_depth(f, m, b, 0.5 * tol, depth + 1)
}

/// `|a − b| / |b|`, zero when both vanish.
pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Reference deployment with the SNR grid from −10 to 50 dB.
pub fn reference() -> RunConfig {
    RunConfig::default()
}

pub fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}
