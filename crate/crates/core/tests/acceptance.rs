//! Acceptance suite: ten criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so every criterion reports
//! even when an earlier one fails; the process exits nonzero if any fails.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use aperiodic_spectra::cli::{self, RunManifest, MANIFEST_FILE};
use aperiodic_spectra::cocycle::{
    closed_form_lyapunov_periodic, cocycle_identity_residual, cocycle_product, conjugation_residual, lyapunov_estimate,
    spread_offsets, Variant,
};
use aperiodic_spectra::operator::{
    combes_thomas_check, greens_function, weyl_residual, CoefficientWindow, CombesThomasOptions, FiniteSection,
};
use aperiodic_spectra::spectrum::{
    cantor_diagnostic, classify_energy, finite_section_spectrum, gamma_curve, measure_trend, zero_set_estimate,
    EnergyGrid, LyapunovCurve, Method, SpectrumEstimate, Threshold, TrendOrder, Verdict,
};
use aperiodic_spectra::subshift::{boshernitzan_sequence, SubshiftSpec};
use aperiodic_spectra::Error;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{char_poly_roots, fibonacci, free, free_lyapunov, period_two};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Every `γ̂` value produced by the criteria, for the sign check in C8.
static GAMMA_SEEN: Mutex<Vec<f64>> = Mutex::new(Vec::new());

fn record(curve: &LyapunovCurve) {
    GAMMA_SEEN.lock().unwrap().extend_from_slice(&curve.gamma);
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_log() -> f64 {
    ((3.0 + 5f64.sqrt()) / 2.0).ln()
}

fn c1_constant_lyapunov() -> Outcome {
    let oracle = closed_form_lyapunov_periodic(&[1.0], &[0.0], 3.0).map_err(|e| e.to_string())?;
    check((oracle - golden_log()).abs() < 1e-14, || {
        format!("closed form {oracle}")
    })?;
    let n = 10_000;
    let c = free(n + 10);
    let start = Instant::now();
    let s = lyapunov_estimate(&c, 3.0, n, &[0]).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    GAMMA_SEEN.lock().unwrap().push(s.value);
    check((s.value - oracle).abs() <= 1e-3, || {
        format!("gamma {} vs {oracle}", s.value)
    })?;
    check(secs < 1.0, || format!("took {secs:.3} s"))?;
    Ok(format!("gamma={:.6} oracle={oracle:.6} time={secs:.3}s", s.value))
}

fn c2_free_spectrum() -> Outcome {
    let n = 10_000u64;
    let c = free(2 * n as i64 + 2);
    let grid = EnergyGrid::auto(c.bound(), 0.01).map_err(|e| e.to_string())?;
    let offsets = spread_offsets(&c, n as i64, 8).map_err(|e| e.to_string())?;
    let curve = gamma_curve(&c, &grid, n, &offsets).map_err(|e| e.to_string())?;
    record(&curve);
    let worst = curve
        .energies()
        .iter()
        .zip(&curve.gamma)
        .map(|(&e, &g)| (g - free_lyapunov(e)).abs())
        .fold(0.0, f64::max);
    let est = zero_set_estimate(&curve, Threshold::Auto).map_err(|e| e.to_string())?;
    let truth = SpectrumEstimate::new(Method::GammaZeroSet, [[-2.0, 2.0]]);
    let h = est.hausdorff(&truth);
    check(est.len() == 1, || {
        format!("{} intervals: {:?}", est.len(), est.intervals())
    })?;
    check(h <= 0.05, || format!("Hausdorff to [-2,2] = {h}"))?;
    let sections = finite_section_spectrum(&c, &[1000], 1e-10).map_err(|e| e.to_string())?;
    let h_sec = sections.estimate.hausdorff(&est);
    check(h_sec <= 0.1, || format!("section vs zero set Hausdorff = {h_sec}"))?;
    Ok(format!(
        "interval={:?} H={h:.4} section_H={h_sec:.4} max|gamma-arccosh|={worst:.2e}",
        est.intervals()[0]
    ))
}

fn c3_period_two() -> Outcome {
    let n = 10_000u64;
    let c = period_two(2 * n as i64 + 2);
    // Band oracle: E is in the spectrum iff |E² − 5| ≤ 4.
    let truth = SpectrumEstimate::new(Method::GammaZeroSet, [[-3.0, -1.0], [1.0, 3.0]]);
    for e in [-3.0, -2.0, -1.0, 1.0, 1.5, 3.0] {
        check((e * e - 5.0_f64).abs() <= 4.0 && truth.contains(e), || {
            format!("band oracle at {e}")
        })?;
    }
    let grid = EnergyGrid::auto(c.bound(), 0.01).map_err(|e| e.to_string())?;
    let offsets = spread_offsets(&c, n as i64, 8).map_err(|e| e.to_string())?;
    let curve = gamma_curve(&c, &grid, n, &offsets).map_err(|e| e.to_string())?;
    record(&curve);
    let est = zero_set_estimate(&curve, Threshold::Auto).map_err(|e| e.to_string())?;
    let h = est.hausdorff(&truth);
    let measure = est.measure();
    check(est.len() == 2, || {
        format!("{} intervals: {:?}", est.len(), est.intervals())
    })?;
    check(h <= 0.1, || format!("Hausdorff to bands = {h}"))?;
    check((measure - 4.0).abs() <= 0.1, || format!("measure {measure}"))?;
    let cls = classify_energy(&c, 0.0, n, &[200, 1000]).map_err(|e| e.to_string())?;
    check(cls.verdict == Verdict::LikelyResolvent, || {
        format!("classify(0) = {cls:?}")
    })?;
    Ok(format!(
        "intervals={:?} measure={measure:.4} H={h:.4} classify(0)={:?} gamma(0)={:.4}",
        est.intervals(),
        cls.verdict,
        cls.gamma_hat
    ))
}

fn c4_fibonacci_trend() -> Outcome {
    let start = Instant::now();
    let orders = [
        TrendOrder {
            step: 0.01,
            n_steps: 1000,
        },
        TrendOrder {
            step: 0.005,
            n_steps: 4000,
        },
        TrendOrder {
            step: 0.0025,
            n_steps: 16_000,
        },
    ];
    let c = fibonacci(2 * 16_000 + 2);
    let grid = EnergyGrid::auto(c.bound(), 0.01).map_err(|e| e.to_string())?;
    let trend = measure_trend(
        &c,
        grid.lo(),
        grid.hi(),
        &orders,
        |n| spread_offsets(&c, n as i64, 8),
        Threshold::Auto,
    )
    .map_err(|e| e.to_string())?;
    record(&trend.finest_curve);
    let m = trend.measures();
    let cantor = cantor_diagnostic(&trend.estimate, &trend.finest_curve, 0.05);
    let secs = start.elapsed().as_secs_f64();
    check(m.windows(2).all(|w| w[1] < w[0]), || {
        format!("not strictly decreasing: {m:?}")
    })?;
    check(m[2] <= 0.7 * m[0], || format!("final/first = {}", m[2] / m[0]))?;
    check(cantor.isolated_points.is_empty(), || {
        format!("isolated points {:?}", cantor.isolated_points)
    })?;
    check(secs <= 600.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "measures={m:.4?} ratio={:.3} widest={:.4} time={secs:.1}s",
        m[2] / m[0],
        cantor.max_contained_width
    ))
}

/// Frozen from the brute-force count below and an independent Python count:
/// the minimum sits at n = 1, where `b` fills 38196 of the 10⁵ positions.
const FIBONACCI_MIN_N_ETA: f64 = 0.38196;

fn c5_boshernitzan() -> Outcome {
    let l = 100_000;
    let orbit = SubshiftSpec::fibonacci().orbit(l).map_err(|e| e.to_string())?;
    let seq = boshernitzan_sequence(&orbit, 30, l).map_err(|e| e.to_string())?;
    let (n_at, min) = seq
        .iter()
        .map(|p| (p.n, p.n_eta))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });

    // Brute-force oracle on an independently built word: s_{k+1} = s_k s_{k−1}.
    let (mut prev, mut word) = (b"a".to_vec(), b"ab".to_vec());
    while word.len() < l {
        let next = [word.as_slice(), prev.as_slice()].concat();
        prev = std::mem::replace(&mut word, next);
    }
    word.truncate(l);
    let ours: Vec<u8> = orbit
        .slice(0, l as i64 - 1)
        .unwrap()
        .iter()
        .map(|&s| b"ab"[s])
        .collect();
    check(ours == word, || "orbit prefix differs from the Fibonacci word".into())?;
    let brute = (1..=30)
        .map(|n| {
            let mut counts: HashMap<&[u8], usize> = HashMap::new();
            for w in word.windows(n) {
                *counts.entry(w).or_default() += 1;
            }
            let rarest = *counts.values().min().unwrap();
            n as f64 * rarest as f64 / (l - n + 1) as f64
        })
        .fold(f64::INFINITY, f64::min);

    check((min - brute).abs() < 1e-12, || {
        format!("library {min} vs brute force {brute}")
    })?;
    check((min - FIBONACCI_MIN_N_ETA).abs() < 1e-12, || {
        format!("regression value moved: {min}")
    })?;
    check(min >= 0.2, || format!("min n*eta = {min}"))?;
    Ok(format!("min n*eta={min:.6} at n={n_at} (brute force {brute:.6})"))
}

fn c6_combes_thomas() -> Outcome {
    let r = 200;
    let c = free(r + 2);
    let report = combes_thomas_check(&c, 3.0, -r, r, 0, CombesThomasOptions::default()).map_err(|e| e.to_string())?;
    let kappa = report.kappa_fit;
    let target = golden_log();
    check(kappa > 0.0, || format!("kappa_fit = {kappa}"))?;
    check((kappa - target).abs() <= 0.01, || {
        format!("kappa_fit {kappa} vs {target}")
    })?;
    let g = greens_function(&c, 3.0, -r, r, 0).map_err(|e| e.to_string())?;
    let mut worst = f64::NEG_INFINITY;
    for n in (-30..=30i64).filter(|n| n.abs() >= 3) {
        let ratio = g.get(n).abs() / (2.0 * (-kappa * n.abs() as f64).exp());
        worst = worst.max(ratio);
    }
    check(worst <= 1.0, || format!("|G(n,0)| / 2e^(-kappa|n|) reaches {worst}"))?;
    Ok(format!(
        "eta={:.5} kappa_fit={kappa:.6} target={target:.6} max ratio={worst:.3}",
        report.eta
    ))
}

fn c7_weyl() -> Outcome {
    let ls = [100usize, 1000, 10_000];
    let c = free(10_010);
    let residuals: Vec<f64> = ls
        .iter()
        .map(|&l| weyl_residual(&c, 0.0, 1.0, 0.0, l))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    check(residuals[2] <= 0.03, || format!("residual at 1e4 = {}", residuals[2]))?;
    check(residuals.windows(2).all(|w| w[1] <= 2.0 * w[0]), || {
        format!("not monotone up to factor 2: {residuals:?}")
    })?;
    let mut at_three = Vec::new();
    for &l in &ls {
        match weyl_residual(&c, 3.0, 1.0, 0.0, l) {
            Ok(r) => {
                check(r >= 0.1, || format!("E=3 residual {r} at l={l}"))?;
                at_three.push(format!("{r:.3}"));
            }
            Err(Error::OverflowGuard { .. }) => at_three.push("overflow-guard".into()),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("E=0 residuals={residuals:.4?} E=3: {}", at_three.join(", ")))
}

/// Random bounded Jacobi coefficients on `[0, len)`, `1/K ≤ |a| ≤ K`,
/// `|b| ≤ K`.
fn random_window(rng: &mut ChaCha8Rng, k: f64, len: i64) -> CoefficientWindow<f64> {
    CoefficientWindow::from_fn(0, len - 1, |_| {
        let a = (rng.gen_range(-1.0..=1.0) * k.ln()).exp();
        let a = if rng.gen_bool(0.2) { -a } else { a };
        (a, rng.gen_range(-k..=k))
    })
    .unwrap()
}

fn c8_cocycle_algebra() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let worst = Mutex::new([0.0f64; 4]);
    let strategy = (any::<u64>(), 1.0f64..3.0, 0.0f64..1.0, 1u64..=1000);
    runner
        .run(&strategy, |(seed, k, t, n)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_window(&mut rng, k, 1100);
            let reach = 3.0 * k + 0.5;
            let e = -reach + 2.0 * reach * t;
            let tol_n = n as f64;

            let acc = cocycle_product(&c, e, n as i64, 0, Variant::Sl2).unwrap();
            let tracked = (acc.log_det().exp() - 1.0).abs();
            // det B against 4^{−exponent}; the rounding in a formed product
            // scales with ‖B‖², hence the factor on the right.
            let scale = (-2 * acc.exponent) as f64;
            let expected = 2f64.powf(scale);
            let direct = (acc.unit.det() - expected).abs();
            let allowance = tol_n * 1e-12 * expected.max(acc.unit.op_norm().powi(2));
            prop_assert!(tracked <= tol_n * 1e-12, "tracked det off by {tracked} at n={n}");
            prop_assert!(
                direct <= allowance,
                "direct det off by {direct} (allowance {allowance})"
            );
            let log_norm = acc.log_norm();
            prop_assert!(log_norm >= (1.0 - 1e-12f64).ln(), "norm below one: log {log_norm}");

            let mut id = 0.0f64;
            for variant in [Variant::Sl2, Variant::Plain] {
                id = id.max(cocycle_identity_residual(&c, e, 500, 500, variant).unwrap());
            }
            prop_assert!(id <= 1e-9, "identity residual {id}");
            let conj = conjugation_residual(&c, e, n).unwrap();
            prop_assert!(conj <= tol_n * 1e-13, "conjugation residual {conj} at n={n}");

            let mut w = worst.lock().unwrap();
            w[0] = w[0].max(tracked / tol_n);
            w[1] = w[1].max(id);
            w[2] = w[2].max(conj / tol_n);
            w[3] = w[3].max(direct / allowance);
            Ok(())
        })
        .map_err(|e| e.to_string())?;

    let seen = GAMMA_SEEN.lock().unwrap();
    let min_gamma = seen.iter().copied().fold(f64::INFINITY, f64::min);
    check(min_gamma >= -1e-9, || format!("negative gamma {min_gamma}"))?;
    let w = worst.into_inner().unwrap();
    Ok(format!(
        "1000 cases; max |det-1|/n={:.1e} identity={:.1e} conj/n={:.1e} direct/allowance={:.1e}; min gamma over {} points={min_gamma:.2e}",
        w[0],
        w[1],
        w[2],
        w[3],
        seen.len()
    ))
}

fn random_section(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let size = rng.gen_range(1..=8);
    let diag = (0..size).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let offdiag = (1..size)
        .map(|_| {
            let a: f64 = rng.gen_range(0.2..3.0);
            if rng.gen_bool(0.5) {
                a
            } else {
                -a
            }
        })
        .collect();
    (diag, offdiag)
}

/// `N_small(x) ≤ N_big(x) ≤ N_small(x) + 1` at every probe.
fn interlaces(small: &FiniteSection<f64>, big: &FiniteSection<f64>, probes: &[f64]) -> bool {
    probes.iter().all(|&x| {
        let (s, b) = (small.sturm_count(x), big.sturm_count(x));
        s <= b && b <= s + 1
    })
}

fn c9_eigensolver() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for case in 0..500 {
        let (diag, offdiag) = random_section(&mut rng);
        let section = FiniteSection::from_parts(diag.clone(), offdiag.clone()).map_err(|e| e.to_string())?;
        let ev = section.eigenvalues_bisection(1e-13).map_err(|e| e.to_string())?;
        let roots = char_poly_roots(&diag, &offdiag);
        let err = ev.iter().zip(&roots).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        check(ev.len() == roots.len() && err <= 1e-8, || {
            format!("case {case}: {ev:?} vs {roots:?}")
        })?;
        worst = worst.max(err);

        let size = diag.len();
        let mut probes: Vec<f64> = ev.iter().flat_map(|&l| [l - 1e-9, l, l + 1e-9]).collect();
        probes.extend((0..16).map(|_| rng.gen_range(-10.0..10.0)));
        for k in 1..size {
            let leading = section.leading(k).map_err(|e| e.to_string())?;
            let bigger = section.leading(k + 1).map_err(|e| e.to_string())?;
            let trailing = FiniteSection::from_parts(diag[size - k..].to_vec(), offdiag[size - k..].to_vec())
                .map_err(|e| e.to_string())?;
            let trailing_bigger =
                FiniteSection::from_parts(diag[size - k - 1..].to_vec(), offdiag[size - k - 1..].to_vec())
                    .map_err(|e| e.to_string())?;
            let mut local = probes.clone();
            for s in [&leading, &bigger, &trailing, &trailing_bigger] {
                local.extend(s.eigenvalues_bisection(1e-13).map_err(|e| e.to_string())?);
            }
            check(interlaces(&leading, &bigger, &local), || {
                format!("case {case}: leading {k}/{} do not interlace", k + 1)
            })?;
            check(interlaces(&trailing, &trailing_bigger, &local), || {
                format!("case {case}: trailing {k}/{} do not interlace", k + 1)
            })?;
            pairs += 2;
        }
    }
    Ok(format!(
        "500 sections, max |bisection - root|={worst:.1e}, {pairs} nested pairs interlace"
    ))
}

const DETERMINISM_CONFIGS: [(&str, &str); 2] = [
    (
        "fibonacci.json",
        r#"{
  "subshift": { "kind": "fibonacci" },
  "sampling": { "p": { "a": 1.0, "b": 2.0 } },
  "grid": { "lo": -4.0, "hi": 4.0, "step": 0.02 },
  "n_steps": 400,
  "sizes": [100, 300],
  "orders": [ { "step": 0.04, "n_steps": 200 }, { "step": 0.02, "n_steps": 400 } ],
  "sample_length": 5000,
  "uniformity": { "energies": [0.0, 10.0], "n": 200 },
  "energy": 10.0,
  "seed": 3
}
"#,
    ),
    (
        "sturmian.json",
        r#"{
  "subshift": { "kind": "sturmian", "alpha": { "continued_fraction": [0, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1] }, "theta": 0.1 },
  "sampling": { "p": { "0": 1.0, "1": 1.0 }, "q": { "0": 0.0, "1": 1.0 } },
  "grid": { "step": 0.05 },
  "n_steps": 300,
  "sizes": [150],
  "offsets": { "count": 8, "mode": "random" },
  "sample_length": 5000,
  "energy": -4.0,
  "seed": 42
}
"#,
    ),
];

const SUBCOMMANDS: [&str; 6] = [
    "orbit",
    "lyapunov",
    "spectrum",
    "boshernitzan",
    "combes-thomas",
    "uniformity",
];

fn run_cli(config: &Path, out: &Path, command: &str, threads: &str) -> Result<(), String> {
    let args = [
        "aperiodic-spectra",
        command,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--threads",
        threads,
    ];
    match cli::run_from(args) {
        0 => Ok(()),
        code => Err(format!("{command} on {} exited {code}", config.display())),
    }
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for (name, text) in DETERMINISM_CONFIGS {
        let config = dir.path().join(name);
        std::fs::write(&config, text).map_err(|e| e.to_string())?;
        for command in SUBCOMMANDS {
            let tag = format!("{name}-{command}");
            let (first, second) = (dir.path().join(format!("{tag}-1")), dir.path().join(format!("{tag}-2")));
            // Different worker counts as well: parallelism must not change bytes.
            run_cli(&config, &first, command, "1")?;
            run_cli(&config, &second, command, "3")?;
            let m1 = RunManifest::load(&first).map_err(|e| e.to_string())?;
            let m2 = RunManifest::load(&second).map_err(|e| e.to_string())?;
            check(m1.outputs == m2.outputs, || format!("{tag}: checksum lists differ"))?;
            check(m1.mismatches(&first).is_empty(), || {
                format!("{tag}: manifest does not verify")
            })?;
            for out in &m1.outputs {
                let a = std::fs::read(first.join(&out.file)).map_err(|e| e.to_string())?;
                let b = std::fs::read(second.join(&out.file)).map_err(|e| e.to_string())?;
                check(a == b, || format!("{tag}: {} differs", out.file))?;
                files += 1;
            }
            let mut listed: Vec<String> = std::fs::read_dir(&first)
                .map_err(|e| e.to_string())?
                .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
                .filter(|f| f != MANIFEST_FILE)
                .collect();
            listed.sort();
            let mut recorded: Vec<String> = m1.outputs.iter().map(|o| o.file.clone()).collect();
            recorded.sort();
            check(listed == recorded, || format!("{tag}: unrecorded files {listed:?}"))?;
        }
    }
    Ok(format!(
        "{} runs repeated, {files} files byte-identical",
        2 * SUBCOMMANDS.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("C1 constant-coefficient Lyapunov", c1_constant_lyapunov),
        ("C2 free-Laplacian spectrum", c2_free_spectrum),
        ("C3 period-2 bands and gap", c3_period_two),
        ("C4 Fibonacci measure trend", c4_fibonacci_trend),
        ("C5 Boshernitzan probe", c5_boshernitzan),
        ("C6 Combes-Thomas decay", c6_combes_thomas),
        ("C7 Weyl sequence", c7_weyl),
        ("C8 cocycle algebra suite", c8_cocycle_algebra),
        ("C9 eigensolver oracle", c9_eigensolver),
        ("C10 CLI determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
