//! Acceptance suite. One PASS/FAIL line per criterion; exits non-zero if any fails.

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pgrand_cli::run_args;
use pgrand_cli::tables::best_block_for_t;
use pgrand_core::analytic::*;
use pgrand_core::compare::*;
use pgrand_core::noise::werner_from_fidelity;
use pgrand_core::sim::{estimate_error_probability, SimConfig};
use pgrand_core::*;

struct Verdict {
    pass: bool,
    lines: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict { pass: true, lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "MISS" }));
    }

    fn info(&mut self, line: String) {
        self.lines.push(format!("     {line}"));
    }
}

fn within(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn c1_min_fidelity() -> Verdict {
    let mut v = Verdict::new();
    let want = [
        (6, 0.8695),
        (7, 0.8642),
        (8, 0.8601),
        (9, 0.8578),
        (10, 0.8542),
        (11, 0.8512),
        (12, 0.8499),
    ];
    let start = Instant::now();
    for (t, f) in want {
        let (n, got) = best_block_for_t(t, 120).unwrap().unwrap();
        v.check(within(got, f, 0.002), format!("t={t}: n={n} F_min={got:.5} target {f} +-0.002"));
    }
    let took = start.elapsed();
    v.check(took < Duration::from_secs(60), format!("search over n<=120 took {took:.2?} (limit 60s)"));
    v
}

fn c2_min_pairs() -> Verdict {
    let mut v = Verdict::new();
    for (f, want) in [(0.83, 251), (0.85, 60), (0.90, 16), (0.95, 10), (0.99, 8)] {
        let got = min_pairs(f, None, 20_000).unwrap();
        v.check(got.abs_diff(want) <= 1, format!("F={f}: {got} pairs, target {want} +-1"));
    }
    v
}

fn c3_hashing() -> Verdict {
    let mut v = Verdict::new();
    let fs = [0.83, 0.85, 0.90, 0.95, 0.99];
    for (strategy, want) in [
        (DeltaStrategy::Optimal, [2326, 637, 153, 71, 45]),
        (DeltaStrategy::Reference, [8116, 2027, 412, 164, 82]),
    ] {
        for (f, w) in fs.iter().zip(want) {
            let got = hashing_min_pairs(*f, strategy, FinalTermSign::Corrected, 20_000).unwrap();
            v.check(got.abs_diff(w) <= 2, format!("{strategy:?} F={f}: {got} pairs, target {w} +-2"));
        }
    }
    v
}

fn c4_monte_carlo() -> Verdict {
    let mut v = Verdict::new();
    let (n, p, t) = (32, 0.01, 4);
    for k in [16, 8, 4] {
        let analytic = error_probability(&PgrandModelPoint::new(n, k, p, t).unwrap()).unwrap();
        let run = |gates: usize| {
            let mut c = SimConfig::new(n, k, t, p, gates);
            c.encoders = 20;
            c.trials = 1000;
            c.seed = 2024;
            estimate_error_probability(&c).unwrap()
        };
        let r = run(120);
        let sigma = (analytic * (1.0 - analytic) / r.trials as f64).sqrt();
        let z = (r.pe_hat - analytic) / sigma;
        v.check(
            z.abs() <= 3.0,
            format!(
                "k={k}, 120 gates: p_e={:.5} analytic={analytic:.5} sigma={sigma:.2e} z={z:.1}",
                r.pe_hat
            ),
        );
        if k == 16 {
            let control = run(1000);
            let zc = (control.pe_hat - analytic) / sigma;
            v.info(format!(
                "k={k}, 1000 gates (control): p_e={:.5} z={zc:.1}",
                control.pe_hat
            ));
        }
    }
    if !v.pass {
        v.info("120 gates leave a 32-qubit encoder far from a random Clifford; the closed form assumes one".into());
    }
    v
}

fn c5_thresholds() -> Verdict {
    let mut v = Verdict::new();
    let q = mb_threshold_q(0.8107).unwrap();
    v.check(within(q, 0.0859, 1e-4), format!("q threshold at F=0.8107: {q:.7} target 0.0859 +-0.0001"));
    v.info(format!("closed form check: F_floor=0.8107 is reached at q={q:.7}, not at 0.0859"));
    let root = hamming_bound_root();
    v.check(within(root, 0.1893, 5e-4), format!("Hamming-bound root: {root:.7} target 0.1893 +-0.0005"));
    v
}

fn c6_block_thresholds() -> Verdict {
    let mut v = Verdict::new();
    for (n, pct) in [(16, 1.72), (32, 3.39), (64, 4.79), (128, 5.96), (256, 6.89)] {
        let got = 100.0 * mb_threshold_for_n(n).unwrap();
        v.check(within(got, pct, 0.15), format!("n={n}: q threshold {got:.4}% target {pct}% +-0.15pp"));
    }
    v
}

fn c7_spot_checks() -> Verdict {
    let mut v = Verdict::new();
    for (n, q, lo, hi) in [(128, 0.01, 0.8479, 0.9899), (64, 0.04, 0.9072, 0.9587)] {
        match mb_purification_range(n, q, None, 1).unwrap() {
            Some(r) => {
                v.check(within(r.f_min, lo, 0.002), format!("n={n} q={q}: F_min={:.5} target {lo} +-0.002", r.f_min));
                v.check(within(r.f_max, hi, 0.002), format!("n={n} q={q}: F_max={:.5} target {hi} +-0.002", r.f_max));
            }
            None => v.check(false, format!("n={n} q={q}: empty range")),
        }
    }
    v
}

fn setup(n: usize, k: usize, gates: usize, seed: u64) -> ParityCheckMatrix {
    let c = sample_random_encoder(n, gates, seed).unwrap();
    build_parity_check(&c, &default_measured_qubits(n, k)).unwrap()
}

fn pe(n: usize, k: usize, p: f64, t: usize) -> f64 {
    error_probability(&PgrandModelPoint::new(n, k, p, t).unwrap()).unwrap()
}

/// Condensed re-run of the core property suites on fixed grids.
fn c8_properties() -> Verdict {
    let mut v = Verdict::new();

    let mut ok = true;
    for seed in 0..8 {
        let n = 6;
        let c = sample_random_encoder(n, 40, seed).unwrap();
        let all: Vec<PauliString> = enumerate_patterns(n, 2).unwrap().collect();
        for a in all.iter().step_by(7) {
            let there = c.conjugate_pauli(a).unwrap();
            ok &= c.inverse().conjugate_pauli(&there).unwrap() == *a;
            ok &= there.weight() > 0 || a.weight() == 0;
            for b in all.iter().step_by(11) {
                let after = c.conjugate_pauli(b).unwrap();
                ok &= a.symplectic_product(b).unwrap() == there.symplectic_product(&after).unwrap();
            }
        }
    }
    v.check(ok, "Clifford conjugation inverts and preserves commutation".into());

    let h = setup(20, 6, 200, 9);
    let pats: Vec<PauliString> = enumerate_patterns(20, 2).unwrap().step_by(13).collect();
    let cols = h.syndrome_columns();
    let linear = pats.iter().zip(pats.iter().rev()).all(|(a, b)| {
        let lhs = h.syndrome(&a.compose(b).unwrap()).unwrap();
        lhs == h.syndrome(a).unwrap().xor(&h.syndrome(b).unwrap()).unwrap()
            && cols.syndrome_of(a).unwrap() == h.syndrome(a).unwrap()
    });
    v.check(linear, format!("syndrome linear on {} pairs", pats.len()));

    let mut ok = true;
    for (n, k, seed) in [(4, 1, 1u64), (5, 2, 2), (6, 3, 3), (6, 1, 4), (6, 5, 5)] {
        let h = setup(n, k, 30, seed);
        let noise = DepolarizingParams::new(n, 0.1).unwrap();
        let table = build_table(&h, n, &noise, &BuildOptions::default()).unwrap();
        let mut seen = std::collections::HashSet::new();
        for e in enumerate_patterns(n, n).unwrap() {
            let s = h.syndrome(&e).unwrap();
            if seen.insert(s.clone()) {
                ok &= table.decode(&s).unwrap().as_ref() == Some(&e);
            }
        }
        ok &= table.len() == seen.len();
    }
    v.check(ok, "tables hold the first lightest pattern per syndrome (exhaustive, n<=6)".into());

    let h = setup(14, 5, 80, 3);
    let noise = DepolarizingParams::new(14, 0.05).unwrap();
    let opts = BuildOptions::default();
    let fresh = build_table(&h, 3, &noise, &opts).unwrap();
    let resumed = resume_table(build_table(&h, 1, &noise, &opts).unwrap(), &h, 3, &noise, &opts, |_| Ok(())).unwrap();
    let back = SyndromeTable::from_bytes(&fresh.to_bytes()).unwrap();
    v.check(
        resumed.to_bytes() == fresh.to_bytes() && back.entries() == fresh.entries(),
        "resume and serialization reproduce the table".into(),
    );

    let mut ok = true;
    for i in 1..100 {
        let f = 0.5 + 0.005 * i as f64;
        let mut s = werner_from_fidelity(f).unwrap();
        for _ in 0..400 {
            let (next, _) = oxford_round(&s).unwrap();
            ok &= (next.total() - 1.0).abs() < 1e-12;
            s = next;
        }
        ok &= 1.0 - s.fidelity() < 1e-9;
    }
    v.check(ok, "recurrence rounds stay normalized and converge".into());

    let mut ok = true;
    for n in [8, 16, 32, 64, 120] {
        for k in [1, n / 4, n / 2] {
            for p in [0.001, 0.01, 0.05] {
                for t in 0..n.min(12) {
                    let base = pe(n, k, p, t);
                    ok &= (0.0..=1.0).contains(&base);
                    ok &= pe(n, k, p, t + 1) <= base * (1.0 + 1e-12) + 1e-300;
                    ok &= pe(n, k + 1, p, t) >= base * (1.0 - 1e-12);
                    ok &= pe(n, k, p * 1.1, t) >= base * (1.0 - 1e-12);
                }
            }
        }
    }
    v.check(ok, "p_e monotone in t, k and p".into());

    let fs = [0.83, 0.84, 0.85, 0.9, 0.95, 0.99];
    let pairs: Vec<usize> = fs.iter().map(|&f| min_pairs(f, None, 20_000).unwrap()).collect();
    let hashing_ok = fs.iter().all(|&f| {
        hashing_min_pairs(f, DeltaStrategy::Optimal, FinalTermSign::Corrected, 20_000).unwrap()
            <= hashing_min_pairs(f, DeltaStrategy::Reference, FinalTermSign::Corrected, 20_000).unwrap()
    });
    v.check(
        pairs.windows(2).all(|w| w[1] <= w[0]) && hashing_ok,
        format!("ensemble sizes non-increasing in F {pairs:?}; optimal delta never worse"),
    );

    let fmins: Vec<f64> = (8..=60).map(|n| min_fidelity(n, n).unwrap()).collect();
    let ok = fmins.windows(2).all(|w| w[1] <= w[0] + 1e-9)
        && fmins.iter().all(|&f| f > 1.0 - hamming_bound_root())
        && [16, 48, 100].iter().all(|&n| {
            (1..20).all(|i| {
                let f = 1.0 - 0.005 * i as f64;
                max_yield(n, f, 0.01).unwrap().yield_ < hamming_bound_yield(1.0 - f)
            })
        });
    v.check(ok, "F_min at t = n non-increasing in n; yield below the Hamming bound".into());

    let ok = [16, 32, 64].iter().all(|&n| {
        let q = mb_threshold_for_n(n).unwrap();
        mb_purification_range(n, q + 0.002, None, 1).unwrap().is_none()
            && mb_purification_range(n, (q - 0.002).max(1e-4), None, 1).unwrap().is_some()
    });
    v.check(ok, "purification range closes at the q threshold".into());
    v
}

fn c9_determinism() -> Verdict {
    let mut v = Verdict::new();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let commands: [&[&str]; 3] = [
        &["build-lut", "--n", "32", "--k", "16", "--t", "4", "--seed", "7"],
        &["simulate", "--n", "16", "--k", "4,8", "--t", "3", "--encoders", "3", "--trials", "500", "--seed", "7"],
        &["tables", "--which", "2,3,5"],
    ];
    for cmd in commands {
        let mut outputs = Vec::new();
        for dir in &dirs {
            let mut args = vec!["pgrand"];
            args.extend_from_slice(cmd);
            args.extend_from_slice(&["--workers", "1", "--out", dir.path().to_str().unwrap()]);
            let o = run_args(args).unwrap();
            let mut files: Vec<(String, Vec<u8>)> = o
                .files
                .iter()
                .chain(std::iter::once(&o.manifest))
                .map(|f| (f.file_name().unwrap().to_string_lossy().into_owned(), fs::read(f).unwrap()))
                .collect();
            files.sort();
            outputs.push(files);
        }
        let names: Vec<&str> = outputs[0].iter().map(|(n, _)| n.as_str()).collect();
        v.check(outputs[0] == outputs[1], format!("{}: {} byte-identical", cmd[0], names.join(", ")));
    }
    v
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("smallest F_min per t", c1_min_fidelity),
        ("guessing ensemble sizes", c2_min_pairs),
        ("hashing ensemble sizes", c3_hashing),
        ("Monte Carlo vs closed form", c4_monte_carlo),
        ("thresholds", c5_thresholds),
        ("q threshold per block size", c6_block_thresholds),
        ("purification range spot checks", c7_spot_checks),
        ("property suites", c8_properties),
        ("determinism at one worker", c9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f();
        let took = start.elapsed();
        println!("{} criterion {}: {name} ({took:.2?})", if v.pass { "PASS" } else { "FAIL" }, i + 1);
        for line in &v.lines {
            println!("    {line}");
        }
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
