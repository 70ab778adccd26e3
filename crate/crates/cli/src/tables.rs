//! `tables`: the six summary tables.
//!
//! 1. smallest `F_min` over `n` for each `t`, with the minimising `n`
//! 2. smallest ensemble (one output pair) for guessing and hashing
//! 3. resource-noise threshold per block size
//! 4. measurement-based purification ranges, long form
//! 5. `F_min` grid (block size by resource noise)
//! 6. `F_max` grid

use anyhow::bail;
use pgrand_core::analytic::{hashing_min_pairs, min_fidelity, min_pairs, DeltaStrategy};
use pgrand_core::compare::{mb_purification_range, mb_threshold_for_n, MbRange};
use pgrand_core::Error;
use rayon::prelude::*;
use serde_json::{json, Map};

use crate::figures::sign_of;
use crate::output::{cell, Outcome, Run};
use crate::params::{list, Params, Sign};

pub const TABLE2_F: [f64; 5] = [0.83, 0.85, 0.90, 0.95, 0.99];
pub const MB_N: [usize; 5] = [16, 32, 64, 128, 256];
pub const MB_Q: [f64; 6] = [0.01, 0.02, 0.03, 0.04, 0.05, 0.06];

/// `(n, F_min)` minimising over `n` in `t+1..=max_n`; `None` if nothing purifies.
pub fn best_block_for_t(t: usize, max_n: usize) -> Result<Option<(usize, f64)>, Error> {
    let cells = (t.max(1) + 1..=max_n)
        .into_par_iter()
        .map(|n| match min_fidelity(n, t) {
            Ok(f) => Ok(Some((n, f))),
            Err(Error::Unattainable(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(cells.into_iter().flatten().fold(None, |best: Option<(usize, f64)>, c| match best {
        Some(b) if b.1 <= c.1 => Some(b),
        _ => Some(c),
    }))
}

fn unattainable_as_none(r: pgrand_core::Result<usize>) -> pgrand_core::Result<Option<usize>> {
    match r {
        Ok(n) => Ok(Some(n)),
        Err(Error::Unattainable(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn opt(n: Option<usize>) -> String {
    n.map_or_else(String::new, |n| n.to_string())
}

pub fn tables(params: &Params) -> anyhow::Result<Outcome> {
    let which = list(&params.which, &[1, 2, 3, 4, 5, 6]);
    if let Some(w) = which.iter().find(|w| !(1..=6).contains(*w)) {
        bail!("invalid parameter `which`: {w} is not a table in 1-6");
    }
    let ts = list(&params.t, &[6, 7, 8, 9, 10, 11, 12]);
    let max_n = params.max_n.unwrap_or(120);
    let fs = list(&params.f, &TABLE2_F);
    let ns = list(&params.n, &MB_N);
    let qs = list(&params.q, &MB_Q);
    let sign = sign_of(params);
    let mut settings = Map::new();
    settings.insert("which".into(), json!(which));
    if which.contains(&1) {
        settings.insert("table1".into(), json!({"t": ts, "max-n": max_n}));
    }
    if which.contains(&2) {
        settings.insert("table2".into(), json!({"f": fs, "sign": params.sign.unwrap_or(Sign::Corrected), "max-n": 20_000}));
    }
    if which.iter().any(|w| (3..=6).contains(w)) {
        settings.insert("table3-6".into(), json!({"n": ns, "q": qs}));
    }
    let mut run = Run::new("tables", &params.out_dir(), &settings, params.workers.unwrap_or(0))?;

    if which.contains(&1) {
        let mut rows = Vec::new();
        for &t in &ts {
            match best_block_for_t(t, max_n)? {
                Some((n, f)) => rows.push(format!("{t},{n},{f}")),
                None => {
                    run.warn(format!("table 1: no block up to {max_n} pairs purifies at t={t}"));
                    rows.push(format!("{t},,"));
                }
            }
        }
        run.csv("table1", "t,n,f_min", rows)?;
    }

    if which.contains(&2) {
        let cols: Vec<[Option<usize>; 3]> = fs
            .par_iter()
            .map(|&f| {
                Ok([
                    unattainable_as_none(min_pairs(f, None, 20_000))?,
                    unattainable_as_none(hashing_min_pairs(f, DeltaStrategy::Optimal, sign, 20_000))?,
                    unattainable_as_none(hashing_min_pairs(f, DeltaStrategy::Reference, sign, 20_000))?,
                ])
            })
            .collect::<Result<_, Error>>()?;
        let header = std::iter::once("protocol".to_string())
            .chain(fs.iter().map(|f| f.to_string()))
            .collect::<Vec<_>>()
            .join(",");
        let rows: Vec<String> = ["pgrand", "hashing-optimal", "hashing-reference"]
            .iter()
            .enumerate()
            .map(|(i, name)| {
                std::iter::once(name.to_string())
                    .chain(cols.iter().map(|c| opt(c[i])))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        if cols.iter().flatten().any(Option::is_none) {
            run.warn("table 2: some ensembles exceed 20000 pairs (empty cells)");
        }
        run.csv("table2", &header, rows)?;
    }

    if which.contains(&3) {
        let rows = ns
            .par_iter()
            .map(|&n| mb_threshold_for_n(n).map(|q| format!("{n},{q},{}", 100.0 * q)))
            .collect::<Result<Vec<_>, _>>()?;
        run.csv("table3", "n,q_threshold,q_threshold_percent", rows)?;
    }

    if which.iter().any(|w| (4..=6).contains(w)) {
        let jobs: Vec<(usize, f64)> = ns.iter().flat_map(|&n| qs.iter().map(move |&q| (n, q))).collect();
        let ranges: Vec<Option<MbRange>> = jobs
            .par_iter()
            .map(|&(n, q)| mb_purification_range(n, q, None, 1))
            .collect::<Result<_, _>>()?;
        let empty = ranges.iter().filter(|r| r.is_none()).count();
        if empty > 0 {
            run.warn(format!("tables 4-6: {empty} of {} cells admit no purification (empty)", jobs.len()));
        }
        if which.contains(&4) {
            let rows: Vec<String> = jobs
                .iter()
                .zip(&ranges)
                .map(|(&(n, q), r)| format!("{n},{q},{},{}", cell(r.map(|r| r.f_min)), cell(r.map(|r| r.f_max))))
                .collect();
            run.csv("table4", "n,q,f_min,f_max", rows)?;
        }
        let header = std::iter::once("n".to_string())
            .chain(qs.iter().map(|q| format!("q={q}")))
            .collect::<Vec<_>>()
            .join(",");
        for (table, pick) in [(5, (|r: &MbRange| r.f_min) as fn(&MbRange) -> f64), (6, |r: &MbRange| r.f_max)] {
            if !which.contains(&table) {
                continue;
            }
            let rows: Vec<String> = ns
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let cells = ranges[i * qs.len()..(i + 1) * qs.len()].iter().map(|r| cell(r.as_ref().map(pick)));
                    std::iter::once(n.to_string()).chain(cells).collect::<Vec<_>>().join(",")
                })
                .collect();
            run.csv(&format!("table{table}"), &header, rows)?;
        }
    }
    run.finish()
}
