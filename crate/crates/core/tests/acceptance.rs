mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use pasec::bounds::{esc_terms, sop_terms};
use pasec::config::db_to_linear;
use pasec::sweep::{run_sweep, SweepRecord};
use pasec::validate::{continuity_residuals, derivative_mismatch, validate_stats};
use pasec::{
    diversity_estimate, esc_asymptotic, esc_bounds, make_rule, slope_estimate, sop_asymptotic, sop_bounds,
    sop_threshold, BoundCoefficients, ChannelParams, Scenario, SecrecyTarget, TermSums, ZbDistribution, ZwDistribution,
};

use common::{adaptive, rel_err, report, reference};

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed(id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed < budget;
    let pass = out.pass && in_time;
    report(
        id,
        name,
        pass,
        &format!(
            "{} ({:.2}s, budget {}s)",
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        ),
    );
    pass
}

fn distribution_correctness() -> Outcome {
    let cfg = reference();
    let s = cfg.scenario().unwrap();
    let zb = ZbDistribution::new(&s);
    let zw = ZwDistribution::new(&s);
    let h2 = s.waveguide_height().powi(2);
    let side = s.side_length();

    let (blo, bhi) = zb.support();
    // With z = d² + u², Bob's density becomes the constant 2/D on [0, D/2].
    let bob = adaptive(|_| 2.0 / side, 0.0, (bhi - h2).sqrt(), 1e-13);
    let (wlo, whi) = zw.support();
    let [b1, b2] = zw.breakpoints();
    let edges = [wlo, b1, b2, whi];
    let willie: f64 = edges
        .windows(2)
        .map(|w| adaptive(|z| zw.pdf(z), w[0], w[1], 1e-13))
        .sum();
    let norm = (bob - 1.0).abs().max((willie - 1.0).abs());

    let cont = continuity_residuals(&s).into_iter().fold(0.0, f64::max);

    let excl = 1e-6 * side * side;
    let db = derivative_mismatch(|z| 1.0 - zb.cdf(z), |z| zb.pdf(z), blo, bhi, &[], excl, 1000);
    let dw = derivative_mismatch(|z| zw.sf(z), |z| zw.pdf(z), wlo, whi, &[b1, b2], excl, 1000);
    let deriv = db.max(dw);

    Outcome {
        pass: norm < 1e-8 && cont < 1e-9 && deriv < 1e-5,
        detail: format!("normalization {norm:.2e}, continuity {cont:.2e}, cdf'/pdf {deriv:.2e}"),
    }
}

fn sampler_ks() -> Outcome {
    let cfg = reference();
    assert_eq!(cfg.ks_samples, 200_000);
    let r = validate_stats(&cfg).unwrap();
    let kb = r.get("KS Zb").unwrap();
    let kw = r.get("KS Zw").unwrap();
    Outcome {
        pass: kb.passed() && kw.passed(),
        detail: format!(
            "D(Zb) {:.3e}, D(Zw) {:.3e}, critical {:.3e}",
            kb.value, kw.value, kb.limit
        ),
    }
}

fn lossless_collapse() -> Outcome {
    let cfg = pasec::config::RunConfig {
        attenuation_alpha: 0.0,
        ..reference()
    };
    let recs = run_sweep(&cfg).unwrap();
    let mut gap: f64 = 0.0;
    let mut misses = Vec::new();
    for r in &recs {
        gap = gap.max((r.sop_ub - r.sop_lb).abs()).max((r.esc_ub - r.esc_lb).abs());
        let sop_ok = (r.sop_mc - r.sop_ub).abs() <= 3.0 * r.sop_mc_se;
        let esc_ok = (r.esc_mc - r.esc_ub).abs() <= 3.0 * r.esc_mc_se;
        if !sop_ok || !esc_ok {
            misses.push(r.snr_db);
        }
    }
    Outcome {
        pass: gap < 1e-12 && misses.is_empty(),
        detail: format!("max |ub - lb| {gap:.2e}, MC outside 3 SE at {misses:?} dB"),
    }
}

fn bracketing(recs: &[SweepRecord]) -> Outcome {
    let mut outside = Vec::new();
    let mut tight = 0;
    for r in recs {
        let sop_in = r.sop_mc >= r.sop_lb - 3.0 * r.sop_mc_se && r.sop_mc <= r.sop_ub + 3.0 * r.sop_mc_se;
        let esc_in = r.esc_mc >= r.esc_lb - 3.0 * r.esc_mc_se && r.esc_mc <= r.esc_ub + 3.0 * r.esc_mc_se;
        if !sop_in || !esc_in {
            outside.push(r.snr_db);
        }
        if (r.esc_ub - r.esc_mc).abs() <= (r.esc_lb - r.esc_mc).abs() {
            tight += 1;
        }
    }
    let frac = f64::from(tight) / recs.len() as f64;
    Outcome {
        pass: outside.is_empty() && frac >= 0.8,
        detail: format!(
            "outside bounds at {outside:?} dB, ESC upper tighter at {tight}/{} points",
            recs.len()
        ),
    }
}

fn saturation() -> Outcome {
    let cfg = reference();
    let s = cfg.scenario().unwrap();
    let t = cfg.target().unwrap();
    let rule = cfg.rule().unwrap();
    let chan = |rho: f64| ChannelParams::with_snr(cfg.carrier_freq_fc, cfg.attenuation_alpha, rho).unwrap();
    let sop = |rho: f64| sop_bounds(&s, &chan(rho), &t, &rule).unwrap();
    let esc = |rho: f64| esc_bounds(&s, &chan(rho), &rule).unwrap();
    let (r1, r2) = (1e12, 1e14);
    let du = diversity_estimate(|r| sop(r).upper, r1, r2).unwrap();
    let dl = diversity_estimate(|r| sop(r).lower, r1, r2).unwrap();
    let su = slope_estimate(|r| esc(r).upper, r1, r2).unwrap();
    let sl = slope_estimate(|r| esc(r).lower, r1, r2).unwrap();
    let sop_inf = sop_asymptotic(&s, &chan(r2), &t, &rule).unwrap();
    let esc_inf = esc_asymptotic(&s, &chan(r2), &rule).unwrap();
    let (sf, ef) = (sop(r2), esc(r2));
    let dev = [
        rel_err(sf.upper, sop_inf.upper),
        rel_err(sf.lower, sop_inf.lower),
        rel_err(ef.upper, esc_inf.upper),
        rel_err(ef.lower, esc_inf.lower),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let worst = [du, dl, su, sl].into_iter().map(f64::abs).fold(0.0, f64::max);
    Outcome {
        pass: worst < 0.01 && dev < 1e-2,
        detail: format!("D(ub) {du:.2e}, D(lb) {dl:.2e}, S(ub) {su:.2e}, S(lb) {sl:.2e}, asymptote rel dev {dev:.2e}"),
    }
}

fn pa_beats_fa(recs: &[SweepRecord]) -> Outcome {
    let sop_fail: Vec<f64> = recs
        .iter()
        .filter(|r| r.sop_mc >= r.fa_sop_mc)
        .map(|r| r.snr_db)
        .collect();
    let esc_fail: Vec<f64> = recs
        .iter()
        .filter(|r| r.esc_mc <= r.fa_esc_mc)
        .map(|r| r.snr_db)
        .collect();
    Outcome {
        pass: sop_fail.is_empty() && esc_fail.is_empty(),
        detail: format!("SOP not lower at {sop_fail:?} dB, ESC not higher at {esc_fail:?} dB"),
    }
}

/// Term sums for all four coefficient pairs at one SNR: SOP upper, SOP
/// lower, ESC upper, ESC lower.
fn all_terms(s: &Scenario<f64>, c: &ChannelParams<f64>, t: &SecrecyTarget<f64>, n: usize) -> [TermSums<f64>; 4] {
    let rule = make_rule(n).unwrap();
    [
        sop_terms(s, c, t, &BoundCoefficients::sop_upper(s, c), &rule).unwrap(),
        sop_terms(s, c, t, &BoundCoefficients::sop_lower(s, c), &rule).unwrap(),
        esc_terms(s, c, &BoundCoefficients::esc_upper(s, c), &rule).unwrap(),
        esc_terms(s, c, &BoundCoefficients::esc_lower(s, c), &rule).unwrap(),
    ]
}

/// The same term sums by adaptive integration in `z`.
fn oracle_terms(
    s: &Scenario<f64>,
    c: &ChannelParams<f64>,
    t: &SecrecyTarget<f64>,
    scale: &[TermSums<f64>; 4],
) -> [TermSums<f64>; 4] {
    let zb = ZbDistribution::new(s);
    let zw = ZwDistribution::new(s);
    let (wlo, whi) = zw.support();
    let [b1, b2] = zw.breakpoints();
    let pieces = [(wlo, b1), (b1, b2), (b2, whi)];
    let (_, bhi) = zb.support();
    let h2 = s.waveguide_height().powi(2);
    let side = s.side_length();
    let eta_rho = c.eta() * c.snr().unwrap();
    let log2_1p = |x: f64| x.ln_1p() / std::f64::consts::LN_2;
    let tol = |x: f64| (1e-10 * x.abs()).max(1e-300);

    let coeffs = [
        BoundCoefficients::sop_upper(s, c),
        BoundCoefficients::sop_lower(s, c),
        BoundCoefficients::esc_upper(s, c),
        BoundCoefficients::esc_lower(s, c),
    ];
    let mut out = [TermSums {
        j: 0.0,
        k: 0.0,
        l: 0.0,
        c: 0.0,
    }; 4];
    for (i, coeff) in coeffs.iter().enumerate() {
        let reference = scale[i].as_array();
        let mut w = [0.0; 3];
        for (p, &(a, b)) in pieces.iter().enumerate() {
            w[p] = if i < 2 {
                let g = |z: f64| zb.cdf(sop_threshold(z, coeff, c, t).unwrap()) * zw.pdf(z);
                adaptive(g, a, b, tol(reference[p]))
            } else {
                let g = |z: f64| log2_1p(eta_rho * coeff.willie / z) * zw.pdf(z);
                adaptive(g, a, b, tol(reference[p]))
            };
        }
        let bob = if i < 2 {
            0.0
        } else {
            // z = d² + u² removes the inverse square root at the lower end.
            let g = |u: f64| 2.0 / side * log2_1p(eta_rho * coeff.bob / (u * u + h2));
            adaptive(g, 0.0, (bhi - h2).sqrt(), tol(reference[3]))
        };
        out[i] = TermSums {
            j: w[0],
            k: w[1],
            l: w[2],
            c: bob,
        };
    }
    out
}

fn quadrature_fidelity() -> Outcome {
    let cfg = reference();
    let s = cfg.scenario().unwrap();
    let t = cfg.target().unwrap();
    let mut vs_fine: f64 = 0.0;
    let mut vs_oracle: f64 = 0.0;
    let mut fine_vs_oracle: f64 = 0.0;
    let mut worst_at = (0.0, "");
    let labels = ["sop ub", "sop lb", "esc ub", "esc lb"];
    for &db in &cfg.snr_db_grid {
        let c = cfg.channel(db).unwrap();
        let coarse = all_terms(&s, &c, &t, 1000);
        let fine = all_terms(&s, &c, &t, 8000);
        let oracle = oracle_terms(&s, &c, &t, &fine);
        for i in 0..4 {
            let (a, f, o) = (coarse[i].as_array(), fine[i].as_array(), oracle[i].as_array());
            for k in 0..4 {
                vs_fine = vs_fine.max(rel_err(a[k], f[k]));
                fine_vs_oracle = fine_vs_oracle.max(rel_err(f[k], o[k]));
                let e = rel_err(a[k], o[k]);
                if e > vs_oracle {
                    vs_oracle = e;
                    worst_at = (db, labels[i]);
                }
            }
        }
    }
    Outcome {
        pass: vs_fine < 1e-6 && vs_oracle < 1e-6,
        detail: format!(
            "max rel n=1000 vs 8000 {vs_fine:.2e}, vs adaptive oracle {vs_oracle:.2e} (worst {} at {} dB); n=8000 vs oracle {fine_vs_oracle:.2e}",
            worst_at.1, worst_at.0
        ),
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_pasec"))
            .args(["sweep", "--out"])
            .arg(&path)
            .env("RAYON_NUM_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("1", "a.csv");
    let b = run("1", "b.csv");
    let c = run("7", "c.csv");
    Outcome {
        pass: a == b && a == c,
        detail: format!(
            "{} bytes, same-config rerun equal {}, 1 vs 7 workers equal {}",
            a.len(),
            a == b,
            a == c
        ),
    }
}

#[test]
fn acceptance() {
    assert_eq!(reference().snr_db_grid.first(), Some(&-10.0));
    assert_eq!(reference().snr_db_grid.last(), Some(&50.0));
    assert_eq!(db_to_linear(50.0), 1e5);

    println!();
    let secs = Duration::from_secs;
    let mut results = vec![
        timed(1, "distribution correctness", secs(5), distribution_correctness),
        timed(2, "sampler vs closed form", secs(5), sampler_ks),
        timed(3, "lossless collapse", secs(30), lossless_collapse),
    ];
    let start = Instant::now();
    let recs = run_sweep(&reference()).unwrap();
    let sweep_time = start.elapsed();
    results.push(timed(4, "bracketing", secs(60) - sweep_time, || bracketing(&recs)));
    results.push(timed(5, "saturation", secs(10), saturation));
    results.push(timed(6, "PA beats FA", secs(60) - sweep_time, || pa_beats_fa(&recs)));
    results.push(timed(7, "quadrature fidelity", secs(30), quadrature_fidelity));
    results.push(timed(8, "determinism", secs(60), determinism));

    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    assert!(results.iter().all(|&p| p), "{} criteria failed", results.len() - passed);
}
