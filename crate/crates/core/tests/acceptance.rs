//! Acceptance gate: one line per criterion, then a verdict.
//!
//! Criteria listed in `EXPECTED_FAILURES` are implemented at their stated
//! parameters and are known not to hold for this model; see the README.
//! Any other failure, or an expected failure that starts passing, makes the
//! target exit non-zero.

use std::f64::consts::PI;
use std::time::Instant;

use minlab::experiments::*;
use minlab::forcing::*;
use minlab::omega::{diameter_cells, omega_set_at};
use minlab::oracle::run_suite;
use minlab::solver::{backtrack, evolve, SolverConfig};

const EXPECTED_FAILURES: &[u32] = &[2];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn circle(m: usize) -> PotentialBasis {
    PotentialBasis::fourier(&[FourierMode::cos(1), FourierMode::sin(1)], m).unwrap()
}

fn setup(m: usize, sigma: f64, seed: u64) -> Setup {
    Setup::new(circle(m), CoefficientDist::Uniform(sigma), 0.0, seed)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let report = run_suite(16, 4, 50, 1e-12);
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: report.passed() && secs < 60.0,
        detail: format!(
            "{} cases, {} value / {} path mismatches, max rel err {:.1e}, {secs:.1}s",
            report.cases, report.value_mismatches, report.path_mismatches, report.max_relative_error
        ),
    }
}

fn fit_at(m: usize, sigma: f64) -> (DecaySeries, Result<DecayFit, minlab::Error>) {
    let horizons: Vec<i64> = (1..=30).collect();
    let series = decay_experiment(&setup(m, sigma, 1), 200, &horizons).unwrap();
    let fit = fit_lambda(&series, default_burn_in(horizons.len()));
    (series, fit)
}

fn contraction_with(sigma: f64) -> Outcome {
    let (s256, f256) = fit_at(256, sigma);
    let (_, f512) = fit_at(512, sigma);
    let cells: Vec<String> = s256.mean.iter().take(5).map(|d| format!("{:.2}", d * 256.0)).collect();
    match (f256, f512) {
        (Ok(a), Ok(b)) => {
            let drift = (a.lambda_hat - b.lambda_hat).abs() / a.lambda_hat.abs();
            Outcome {
                pass: a.lambda_hat > 0.0 && a.r_squared >= 0.9 && drift <= 0.2,
                detail: format!(
                    "sigma={sigma}: lambda_hat {:.4} (r2 {:.4}, {} pts) at M=256, {:.4} at M=512, drift {:.1}%",
                    a.lambda_hat, a.r_squared, a.used, b.lambda_hat, 100.0 * drift
                ),
            }
        }
        (a, b) => Outcome {
            pass: false,
            detail: format!(
                "sigma={sigma}: fit impossible (M=256: {:?}, M=512: {:?}); mean diameter in cells for h=1..5 at M=256: [{}]",
                a.err(),
                b.err(),
                cells.join(", ")
            ),
        },
    }
}

fn monotonicity_and_nesting() -> Outcome {
    let m = 256;
    let (mut strict, mut slack, mut diam) = (0, 0, 0);
    for seed in 0..100 {
        let s = setup(m, 1.0, 1000 + seed);
        let ev = s.run(0, 30).unwrap();
        let mut prev = omega_set_at(&ev, s.s(), s.time_at(0)).unwrap();
        for h in 1..=30 {
            let cur = omega_set_at(&ev, s.s(), s.time_at(h)).unwrap();
            for &p in &cur.points {
                if !prev.contains(p) {
                    if prev.contains((p + 1) % m) || prev.contains((p + m - 1) % m) {
                        slack += 1;
                    } else {
                        strict += 1;
                    }
                }
            }
            if diameter_cells(&cur).unwrap() > diameter_cells(&prev).unwrap() + 1 {
                diam += 1;
            }
            prev = cur;
        }
    }
    Outcome {
        pass: strict == 0 && diam == 0,
        detail: format!("100 seeds x 30 horizons: {strict} nesting and {diam} diameter violations, {slack} one-cell slips"),
    }
}

fn halving() -> Outcome {
    let s = setup(256, 1.0, 5);
    let base = HalvingConfig { t_gap: 1, past_len: 1, n_pasts: 10, n_futures: 20 };
    let scan = scan_halving(&s, &base, &(1..=10).collect::<Vec<_>>()).unwrap();
    let best = scan
        .iter()
        .filter(|e| e.frequency > 0.0 && e.min_over_pasts > 0.0)
        .min_by_key(|e| e.t_gap);
    match best {
        Some(e) => Outcome {
            pass: true,
            detail: format!(
                "T={}: pooled {:.3} +/- {:.3} over {} trials ({} excluded), min over 10 pasts {:.2}",
                e.t_gap, e.frequency, e.half_width, e.trials, e.excluded, e.min_over_pasts
            ),
        },
        None => Outcome { pass: false, detail: "no T in 1..10 with positive pooled and per-past frequency".into() },
    }
}

fn b_mod_one() -> Outcome {
    let m = 64;
    let basis = circle(m);
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let b = -1.0 + 2.0 * (seed as f64 + 0.5) / 20.0;
        let seq = KickSequence::new(seed, CoefficientDist::Uniform(1.0), ForcingMode::Kicked, 2);
        let field = Forcing::new(&seq, &basis).unwrap();
        let psi: Vec<f64> = (0..m).map(|i| 0.3 * (2.0 * PI * i as f64 / m as f64).sin()).collect();
        let run = |b: f64| {
            let mut cfg = SolverConfig::kicked(m, b, 0, 12);
            cfg.winding_max = 4;
            cfg.psi = psi.clone();
            evolve(&cfg, &field).unwrap()
        };
        let (a, c) = (run(b), run(b + 1.0));
        for (x, y) in a.phi.last().unwrap().iter().zip(c.phi.last().unwrap()) {
            worst = worst.max((x - y).abs() / x.abs().max(1.0));
        }
    }
    Outcome { pass: worst <= 1e-10, detail: format!("20 seeds, max relative action gap {worst:.2e}") }
}

fn hyperbolicity() -> Outcome {
    let m = 256;
    let s = setup(m, 1.0, 11);
    let seq = s.sequence(0);
    let ev = evolve(&s.solver_config(500), &Forcing::new(&seq, &s.basis).unwrap()).unwrap();
    let path = backtrack(&ev, 0).unwrap();
    let est = lyapunov_exponent(&path, &seq, &s.basis).unwrap();
    Outcome {
        pass: est.exponent > 0.0 && est.max_det_error <= 1e-10 && est.max_log_det_residual <= 1e-10,
        detail: format!(
            "{} kicks: exponent {:.4} (second {:.4}), max |det-1| {:.1e}, max log-det residual {:.1e}",
            est.kicks, est.exponent, est.second, est.max_det_error, est.max_log_det_residual
        ),
    }
}

fn separation() -> Outcome {
    let spec: BasisSpec = "fourier:1c,1s".parse().unwrap();
    let cands = rotated_cosine_triple(&spec).unwrap();
    let certs: Vec<_> = [256, 512]
        .iter()
        .map(|&m| separation_check(&spec.build(m).unwrap(), &cands, None))
        .collect();
    let (c1, c2) = match (&certs[0], &certs[1]) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Outcome { pass: false, detail: format!("certification failed: {:?}", certs) },
    };
    let drift = (c1.alpha0 - c2.alpha0).abs() / c2.alpha0;
    let maxima_ok = (0..3).all(|i| (c1.maxima[i] as f64 / 256.0 - c2.maxima[i] as f64 / 512.0).abs() <= 1.0 / 256.0);
    let k = proof_constants(c1, &spec.build(256).unwrap(), None);
    let constants_ok = k.as_ref().is_ok_and(|k| k.alpha < 1.0 / 30.0);
    Outcome {
        pass: c1.alpha0 > 0.0 && drift <= 0.05 && maxima_ok && constants_ok,
        detail: format!(
            "alpha0 {:.4} (M=256) vs {:.4} (M=512), drift {:.2}%, maxima at {:?}; {}",
            c1.alpha0,
            c2.alpha0,
            100.0 * drift,
            c1.maxima,
            match &k {
                Ok(k) => format!("alpha {:.6} ({}), N' = {}, N = {}", k.alpha, k.alpha_exact, k.n_prime, k.n),
                Err(e) => format!("constants: {e}"),
            }
        ),
    }
}

fn two_solution(amplitude: f64) -> (usize, usize) {
    let m = 256;
    let s = setup(m, 1.0, 3);
    let psi1 = vec![0.0; m];
    let psi2: Vec<f64> = (0..m).map(|i| amplitude * (2.0 * PI * i as f64 / m as f64).sin()).collect();
    let ok = (0..50)
        .filter(|&k| two_solution_convergence(&s, &psi1, &psi2, k, &[30]).unwrap()[0] < 2.0 / m as f64)
        .count();
    (ok, 50)
}

fn collapse() -> Outcome {
    let (ok, n) = two_solution(0.1);
    let (wide, _) = two_solution(0.5);
    Outcome {
        pass: ok * 10 >= n * 9,
        detail: format!(
            "psi = 0 vs 0.1 sin 2pi x: {ok}/{n} seeds below 2/M at horizon 30 (with 0.5 sin 2pi x: {wide}/{n})"
        ),
    }
}

/// Fraction of a dense midpoint grid over the coefficient box whose kick has
/// grid sup-norm at most `eps`.
fn quadrature(basis: &PotentialBasis, sigma: f64, eps: f64, n: usize) -> f64 {
    let mut hits = 0usize;
    for i in 0..n {
        for j in 0..n {
            let c1 = sigma * (-1.0 + (2 * i + 1) as f64 / n as f64);
            let c2 = sigma * (-1.0 + (2 * j + 1) as f64 / n as f64);
            if sup_norm(basis, &[c1, c2]) <= eps {
                hits += 1;
            }
        }
    }
    hits as f64 / (n * n) as f64
}

fn small_events() -> Outcome {
    let basis = circle(64);
    let mut lines = Vec::new();
    let mut pass = true;
    for (eps, kicks) in [(0.5, 1), (0.8, 2), (0.3, 1)] {
        let exact = quadrature(&basis, 1.0, eps, 600).powi(kicks as i32);
        let est = event_probability(&basis, CoefficientDist::Uniform(1.0), eps, kicks, 20_000, 9).unwrap();
        let ok = (est.probability - exact).abs() <= 3.0 * est.half_width;
        pass &= ok;
        lines.push(format!("eps {eps} x{kicks}: {:.4} vs {:.4}", est.probability, exact));
    }
    Outcome { pass, detail: format!("{} (within 3 half-widths: {pass})", lines.join("; ")) }
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "oracle equivalence", oracle_equivalence),
        (2, "exponential contraction", || contraction_with(1.0)),
        (3, "monotonicity and nesting", monotonicity_and_nesting),
        (4, "halving frequency", halving),
        (5, "b mod 1 invariance", b_mod_one),
        (6, "hyperbolicity proxy", hyperbolicity),
        (7, "separation certificate", separation),
        (8, "two-solution collapse", collapse),
        (9, "user-scale event probability", small_events),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        let tag = match (out.pass, expected_fail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        if out.pass == expected_fail {
            unexpected.push(id);
        }
        println!("criterion {id} {tag}: {name}: {} [{:.1}s]", out.detail, start.elapsed().as_secs_f64());
    }
    let weak = contraction_with(0.02);
    println!("supplementary: contraction at weak forcing: {} ({})", if weak.pass { "PASS" } else { "FAIL" }, weak.detail);
    if unexpected.is_empty() {
        println!("acceptance: all criteria match their recorded status");
    } else {
        println!("acceptance: unexpected status for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
