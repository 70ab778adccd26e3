//! `hashing`, `compare` and `mb-range`.

use std::path::Path;

use anyhow::{bail, Context};
use pgrand_core::analytic::{hamming_bound_root, hashing_min_pairs, delta_optimal, delta_reference, CorrectableFractions, DeltaStrategy};
use pgrand_core::compare::*;
use pgrand_core::Error;
use rayon::prelude::*;
use serde_json::{json, Map};

use crate::figures::{linspace, sign_of};
use crate::output::{cell, Outcome, Run};
use crate::params::{list, single, Params, Sign, Strategy};

pub fn hashing(params: &Params) -> anyhow::Result<Outcome> {
    let fs = list(&params.f, &[0.83, 0.85, 0.9, 0.95, 0.99]);
    let strategies = list(&params.strategy, &[Strategy::Optimal, Strategy::Reference]);
    let sign = sign_of(params);
    let max_n = params.max_n.unwrap_or(20_000);
    let settings = json!({
        "f": fs,
        "strategy": strategies,
        "sign": params.sign.unwrap_or(Sign::Corrected),
        "max-n": max_n,
    });
    let mut run = Run::new("hashing", &params.out_dir(), &settings, params.workers.unwrap_or(0))?;
    let jobs: Vec<(Strategy, f64)> = strategies.iter().flat_map(|&s| fs.iter().map(move |&f| (s, f))).collect();
    let results = jobs
        .par_iter()
        .map(|&(s, f)| {
            let strategy = match s {
                Strategy::Optimal => DeltaStrategy::Optimal,
                Strategy::Reference => DeltaStrategy::Reference,
            };
            match hashing_min_pairs(f, strategy, sign, max_n) {
                Ok(n) => {
                    let (delta, bound) = match s {
                        Strategy::Optimal => {
                            let d = delta_optimal(n, 1, f, sign)?;
                            (d.delta, d.bound)
                        }
                        Strategy::Reference => {
                            let d = delta_reference(n, f)?;
                            let p = pgrand_core::analytic::HashingBoundParams::new(n, 1, f, d)?;
                            (d, pgrand_core::analytic::hashing_fidelity_bound(&p, sign)?)
                        }
                    };
                    Ok(Some((n, delta, bound)))
                }
                Err(Error::Unattainable(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut rows = Vec::new();
    for (&(s, f), r) in jobs.iter().zip(&results) {
        let name = serde_json::to_value(s)?.as_str().unwrap_or_default().to_string();
        match r {
            Some((n, d, b)) => rows.push(format!("{f},{name},{n},{d},{b}")),
            None => {
                run.warn(format!("F={f} ({name}): no ensemble up to {max_n} pairs purifies"));
                rows.push(format!("{f},{name},,,"));
            }
        }
    }
    run.csv("hashing", "f,strategy,n_min,delta,bound", rows)?;
    run.finish()
}

/// Reads `f_in,p_suc,f_out,yield` rows; `#` lines and a header are skipped.
pub fn load_external(path: &Path) -> anyhow::Result<ExternalProtocol> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(|c: char| c.is_ascii_alphabetic()) {
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .with_context(|| format!("{}:{}: expected four numbers", path.display(), i + 1))?;
        let [f_in, p_suc, f_out, yield_] = v[..] else {
            bail!("{}:{}: expected f_in,p_suc,f_out,yield", path.display(), i + 1);
        };
        points.push(OutcomePoint { f_in, p_suc, f_out, yield_ });
    }
    let name = path
        .file_stem()
        .map_or_else(|| "external".to_string(), |s| s.to_string_lossy().into_owned());
    Ok(ExternalProtocol::new(name, points)?)
}

/// Best effective yield over `k` for an `n`-pair block; `(k, f_out, Y_E)`.
fn best_block(fr: &[CorrectableFractions], n: usize, f_in: f64, q: f64) -> (usize, f64, f64) {
    let p_eff = 1.0 - mb_input_fidelity(1.0 - f_in, q);
    let mut best = (0, f_in, 0.0);
    for (i, c) in fr.iter().enumerate() {
        let k = i + 1;
        let f_out = mb_output_fidelity(c.error_probability(p_eff, n), q);
        let ye = (k as f64 / n as f64 * (f_out - f_in)).max(0.0);
        if ye > best.2 {
            best = (k, f_out, ye);
        }
    }
    best
}

fn block_fractions(n: usize) -> anyhow::Result<Vec<CorrectableFractions>> {
    if n < 2 {
        bail!("invalid parameter `n`: need n >= 2, got {n}");
    }
    let counts = pgrand_core::noise::PatternCounts::new(n);
    Ok((1..n)
        .map(|k| CorrectableFractions::with_counts(&counts, k))
        .collect::<Result<_, _>>()?)
}

/// Protocol outcome seen through resource noise `q`.
fn through_q(o: ProtocolOutcome, f_in: f64, q: f64) -> ProtocolOutcome {
    ProtocolOutcome {
        f_in,
        f_out: mb_output_fidelity(1.0 - o.f_out, q),
        ..o
    }
}

pub fn compare(params: &Params) -> anyhow::Result<Outcome> {
    let figs = list(&params.fig, &[9, 11, 14]);
    if let Some(f) = figs.iter().find(|f| ![9, 11, 14].contains(*f)) {
        bail!("invalid parameter `fig`: {f} is not one of [9, 11, 14]");
    }
    let rounds = list(&params.rounds, &[1, 2, 3]);
    let ns = list(&params.n, &[16, 32, 64]);
    let mut registry = ProtocolRegistry::new();
    for path in params.external.iter().flatten() {
        let ext = load_external(path)?;
        let name = ext.name().to_string();
        registry.register_external_protocol(name, ext.points().to_vec())?;
    }
    let externals: Vec<String> = registry.iter().map(|(_, p)| p.name().to_string()).collect();
    let f9 = params.f.clone().unwrap_or_else(|| linspace(0.51, 0.995, params.steps.unwrap_or(98)));
    let f11 = params.f.clone().unwrap_or_else(|| linspace(0.75, 0.995, params.steps.unwrap_or(50)));
    let f14 = params.f.clone().unwrap_or_else(|| linspace(0.5, 1.0, params.steps.unwrap_or(51)));
    let qs = list(&params.q, &linspace(0.0, 0.06, 13));
    let mut settings = Map::new();
    settings.insert("fig".into(), json!(figs));
    settings.insert("rounds".into(), json!(rounds));
    settings.insert("n".into(), json!(ns));
    settings.insert("external".into(), json!(externals));
    if figs.contains(&9) {
        settings.insert("fig9-f".into(), json!(f9));
    }
    if figs.contains(&11) {
        settings.insert("fig11-f".into(), json!(f11));
        settings.insert("fig11-q".into(), json!(qs));
    }
    if figs.contains(&14) {
        settings.insert("fig14-f".into(), json!(f14));
    }
    let mut run = Run::new("compare", &params.out_dir(), &settings, params.workers.unwrap_or(0))?;
    let blocks: Vec<(usize, Vec<CorrectableFractions>)> =
        ns.iter().map(|&n| Ok((n, block_fractions(n)?))).collect::<anyhow::Result<_>>()?;
    let mut outside = 0usize;

    if figs.contains(&9) {
        let mut rows = Vec::new();
        for &r in &rounds {
            for &f in &f9 {
                let o = oxford_protocol(f, r)?;
                rows.push(format!("{f},oxford-r{r},,{},{},{},{}", o.p_suc, o.f_out, o.yield_, effective_yield(&o)));
            }
        }
        for (n, fr) in &blocks {
            let curve: Vec<String> = f9
                .par_iter()
                .map(|&f| {
                    let (k, f_out, ye) = best_block(fr, *n, f, 0.0);
                    format!("{f},pgrand-n{n},{k},1,{f_out},{},{ye}", k as f64 / *n as f64)
                })
                .collect();
            rows.extend(curve);
        }
        for (_, ext) in registry.iter() {
            for &f in &f9 {
                match ext.outcome(f) {
                    Ok(o) => rows.push(format!(
                        "{f},{},,{},{},{},{}",
                        ext.name(),
                        o.p_suc,
                        o.f_out,
                        o.yield_,
                        effective_yield(&o)
                    )),
                    Err(_) => outside += 1,
                }
            }
        }
        run.csv("fig9", "f_in,protocol,k,p_suc,f_out,yield,effective_yield", rows)?;
    }

    if figs.contains(&11) {
        let mut rows = Vec::new();
        for &q in &qs {
            for &f in &f11 {
                let f_eff = mb_input_fidelity(1.0 - f, q);
                for &r in &rounds {
                    let ye = if f_eff > 0.25 {
                        effective_yield(&through_q(oxford_protocol(f_eff, r)?, f, q))
                    } else {
                        0.0
                    };
                    rows.push(format!("{f},{q},oxford-r{r},,{ye}"));
                }
                for (n, fr) in &blocks {
                    let (k, _, ye) = best_block(fr, *n, f, q);
                    rows.push(format!("{f},{q},pgrand-n{n},{k},{ye}"));
                }
                for (_, ext) in registry.iter() {
                    match ext.outcome(f_eff) {
                        Ok(o) => rows.push(format!("{f},{q},{},,{}", ext.name(), effective_yield(&through_q(o, f, q)))),
                        Err(_) => outside += 1,
                    }
                }
            }
        }
        run.csv("fig11", "f_in,q,protocol,k,effective_yield", rows)?;
    }

    if figs.contains(&14) {
        let mut rows = Vec::new();
        for &r in &rounds {
            for &f in &f14 {
                let o = oxford_protocol(f, r)?;
                rows.push(format!("{f},{r},{},{},{}", o.p_suc, o.f_out, o.converges));
            }
        }
        run.csv("fig14", "f_in,rounds,p_suc,f_out,converges", rows)?;
    }
    if outside > 0 {
        run.warn(format!("{outside} external-protocol queries fell outside their tables and were skipped"));
    }
    run.finish()
}

pub fn mb_range(params: &Params) -> anyhow::Result<Outcome> {
    let ns = list(&params.n, &[16, 32, 64, 128, 256]);
    let qs = list(&params.q, &linspace(0.0, 0.07, 29));
    let t = params.t.as_ref().map(|_| single(&params.t, "t", 0)).transpose()?;
    let settings = json!({"n": ns, "q": qs, "t": t});
    let mut run = Run::new("mb-range", &params.out_dir(), &settings, params.workers.unwrap_or(0))?;
    let jobs: Vec<(usize, f64)> = ns.iter().flat_map(|&n| qs.iter().map(move |&q| (n, q))).collect();
    let ranges = jobs
        .par_iter()
        .map(|&(n, q)| mb_purification_range(n, q, t.map(|t| t.min(n)), 1))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = jobs.iter().zip(&ranges).map(|(&(n, q), r)| {
        format!(
            "{n},{q},{},{},{},{}",
            cell(r.map(|r| r.f_min)),
            cell(r.map(|r| r.f_max)),
            cell(r.map(|r| r.p_low)),
            cell(r.map(|r| r.p_high))
        )
    });
    let rows: Vec<String> = rows.collect();
    let empty = ranges.iter().filter(|r| r.is_none()).count();
    if empty > 0 {
        run.warn(format!("{empty} of {} (n, q) points admit no purification (empty cells)", jobs.len()));
    }
    run.csv("mb-range", "n,q,f_min,f_max,p_low,p_high", rows)?;
    let thresholds = ns
        .par_iter()
        .map(|&n| mb_threshold_for_n(n).map(|q| format!("{n},{q}")))
        .collect::<Result<Vec<_>, _>>()?;
    run.csv("mb-thresholds", "n,q_threshold", thresholds)?;
    run.note("q_floor", mb_threshold_q(1.0 - hamming_bound_root())?)?;
    run.finish()
}
