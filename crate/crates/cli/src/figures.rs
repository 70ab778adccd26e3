//! `analytic`: closed-form figure data.
//!
//! | fig | content | knobs (defaults) |
//! |-----|---------|------------------|
//! | 2 | `p_e` against yield | `--n` 32,128 `--t` 4,5 `--p` 0.01 |
//! | 3 | largest yield under an error target | `--f` 0.9,0.95,0.975,0.99 `--pe-target` 1e-2,1e-3,1e-4 `--max-n` 500 |
//! | 4 | `F_min` against `n` | `--t` 3,5,7,9,12 `--max-n` 150 |
//! | 5 | output fidelity against yield, hashing and guessing | `--n` 128,256 `--f` 0.95 `--delta-exp` 2,2.5,3,3.5 |
//! | 6 | yield needed to purify against `n` | `--p` 0.01,0.05 `--max-n` 2048 |
//! | 7 | smallest ensemble against `F_i` | `--steps` 35 `--max-n` 20000 |
//! | 8 | output fidelity at equal correction budget | `--n` 32,64,128 `--t` 2,3,4 `--steps` 40 |
//! | 12 | `p_e` against yield over noise and `t` | `--n` 32,64,128,256 `--p` 0.1,0.05,0.025,0.01 `--t` 2,3,4,5 |
//! | 13 | typical-set mass per weight class | `--n` 128 `--f` 0.9 `--delta-exp` 2,2.5,3,3.5 |

use anyhow::bail;
use pgrand_core::analytic::*;
use pgrand_core::noise::PatternCounts;
use pgrand_core::Error;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::output::{cell, Outcome, Run};
use crate::params::{list, single, Params, Sign};

pub const FIGURES: [u32; 9] = [2, 3, 4, 5, 6, 7, 8, 12, 13];

pub struct Table {
    pub name: String,
    pub columns: &'static str,
    pub rows: Vec<String>,
}

/// One figure's resolved settings, tables and warnings.
pub struct Figure {
    pub settings: Value,
    pub tables: Vec<Table>,
    pub warnings: Vec<String>,
}

pub fn sign_of(params: &Params) -> FinalTermSign {
    match params.sign.unwrap_or(Sign::Corrected) {
        Sign::Corrected => FinalTermSign::Corrected,
        Sign::Printed => FinalTermSign::Printed,
    }
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect(),
    }
}

/// Largest `k` in `1..n` with `ok(k)`, assuming `ok` only fails above some `k`.
fn largest_k(n: usize, ok: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, n);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn figure(fig: u32, params: &Params) -> anyhow::Result<Figure> {
    match fig {
        2 => fig2(params),
        3 => fig3(params),
        4 => fig4(params),
        5 => fig5(params),
        6 => fig6(params),
        7 => fig7(params),
        8 => fig8(params),
        12 => fig12(params),
        13 => fig13(params),
        _ => bail!("invalid parameter `fig`: {fig} is not one of {FIGURES:?}"),
    }
}

pub fn analytic(params: &Params) -> anyhow::Result<Outcome> {
    let figs = list(&params.fig, &[4]);
    let mut settings = Map::new();
    let mut built = Vec::new();
    for &fig in &figs {
        let f = figure(fig, params)?;
        settings.insert(format!("fig{fig}"), f.settings.clone());
        built.push((fig, f));
    }
    let mut run = Run::new("analytic", &params.out_dir(), &settings, params.workers.unwrap_or(0))?;
    for (fig, f) in built {
        for w in f.warnings {
            run.warn(format!("fig {fig}: {w}"));
        }
        for t in f.tables {
            run.csv(&t.name, t.columns, t.rows)?;
        }
    }
    run.finish()
}

fn pe_curve_rows(ns: &[usize], ts: &[usize], ps: &[f64]) -> anyhow::Result<Vec<String>> {
    let mut rows = Vec::new();
    for &n in ns {
        if n < 2 {
            bail!("invalid parameter `n`: need n >= 2, got {n}");
        }
        let counts = PatternCounts::new(n);
        let per_k: Vec<Vec<String>> = (1..n)
            .into_par_iter()
            .map(|k| {
                let fr = CorrectableFractions::with_counts(&counts, k).expect("k in range");
                let y = k as f64 / n as f64;
                let mut out = Vec::new();
                for &p in ps {
                    for &t in ts.iter().filter(|&&t| t <= n) {
                        out.push(format!("{n},{t},{p},{k},{y},{}", fr.error_probability(p, t)));
                    }
                }
                out
            })
            .collect();
        // regroup so each (p, t) curve is contiguous
        let width = per_k.first().map_or(0, Vec::len);
        for j in 0..width {
            rows.extend(per_k.iter().map(|r| r[j].clone()));
        }
    }
    Ok(rows)
}

fn check_p(ps: &[f64]) -> anyhow::Result<()> {
    if let Some(p) = ps.iter().find(|p| !(**p > 0.0 && **p < 0.75)) {
        bail!("invalid parameter `p`: need 0 < p < 3/4, got {p}");
    }
    Ok(())
}

fn check_f(fs: &[f64]) -> anyhow::Result<()> {
    if let Some(f) = fs.iter().find(|f| !(**f > 0.25 && **f < 1.0)) {
        bail!("invalid parameter `f`: need 1/4 < F < 1, got {f}");
    }
    Ok(())
}

fn fig2(params: &Params) -> anyhow::Result<Figure> {
    let ns = list(&params.n, &[32, 128]);
    let ts = list(&params.t, &[4, 5]);
    let ps = list(&params.p, &[0.01]);
    check_p(&ps)?;
    Ok(Figure {
        settings: json!({"n": ns, "t": ts, "p": ps}),
        tables: vec![Table {
            name: "fig2".into(),
            columns: "n,t,p,k,yield,p_e",
            rows: pe_curve_rows(&ns, &ts, &ps)?,
        }],
        warnings: Vec::new(),
    })
}

fn fig3(params: &Params) -> anyhow::Result<Figure> {
    let fs = list(&params.f, &[0.9, 0.95, 0.975, 0.99]);
    check_f(&fs)?;
    let targets = list(&params.pe_target, &[1e-2, 1e-3, 1e-4]);
    let max_n = params.max_n.unwrap_or(500);
    let ns = params.n.clone().unwrap_or_else(|| (10..=max_n).step_by(10).collect());
    let mut jobs = Vec::new();
    for &f in &fs {
        for &e in &targets {
            jobs.extend(ns.iter().map(|&n| (f, e, n)));
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(f, e, n)| {
            let my = max_yield(n, f, e)?;
            Ok(format!("{f},{e},{n},{},{},{}", my.k, my.yield_, hamming_bound_yield(1.0 - f)))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Figure {
        settings: json!({"f": fs, "pe-target": targets, "n": ns}),
        tables: vec![Table {
            name: "fig3".into(),
            columns: "f,pe_target,n,k,yield,hamming_bound",
            rows,
        }],
        warnings: Vec::new(),
    })
}

fn fig4(params: &Params) -> anyhow::Result<Figure> {
    let ts = list(&params.t, &[3, 5, 7, 9, 12]);
    let ns = params
        .n
        .clone()
        .unwrap_or_else(|| (2..=params.max_n.unwrap_or(150)).collect());
    let jobs: Vec<(usize, usize)> = ts.iter().flat_map(|&t| ns.iter().map(move |&n| (t, n))).collect();
    let cells = jobs
        .par_iter()
        .map(|&(t, n)| match min_fidelity(n, t.min(n)) {
            Ok(f) => Ok(Some(f)),
            Err(Error::Unattainable(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let missing = cells.iter().filter(|c| c.is_none()).count();
    let rows = jobs
        .iter()
        .zip(&cells)
        .map(|(&(t, n), f)| format!("{t},{n},{}", cell(*f)))
        .collect();
    let warnings = if missing > 0 {
        vec![format!("{missing} of {} points admit no purifying fidelity (empty f_min)", jobs.len())]
    } else {
        Vec::new()
    };
    Ok(Figure {
        settings: json!({"t": ts, "n": ns}),
        tables: vec![Table {
            name: "fig4".into(),
            columns: "t,n,f_min",
            rows,
        }],
        warnings,
    })
}

fn fig5(params: &Params) -> anyhow::Result<Figure> {
    let ns = list(&params.n, &[128, 256]);
    let fs = list(&params.f, &[0.95]);
    check_f(&fs)?;
    let exps = list(&params.delta_exp, &[2.0, 2.5, 3.0, 3.5]);
    let sign = sign_of(params);
    let mut rows = Vec::new();
    for &n in &ns {
        for &f in &fs {
            let counts = PatternCounts::new(n);
            let block: Vec<Vec<String>> = (1..n)
                .into_par_iter()
                .map(|k| {
                    let y = k as f64 / n as f64;
                    let fr = CorrectableFractions::with_counts(&counts, k)?;
                    let mut out = vec![format!("{n},{f},{k},{y},pgrand,,{}", 1.0 - fr.error_probability(1.0 - f, n))];
                    for &x in &exps {
                        let delta = (n as f64).powf(-1.0 / x);
                        let b = hashing_fidelity_bound(&HashingBoundParams::new(n, k, f, delta)?, sign)?;
                        out.push(format!("{n},{f},{k},{y},hashing-x{x},{delta},{b}"));
                    }
                    Ok(out)
                })
                .collect::<Result<_, Error>>()?;
            let width = exps.len() + 1;
            for j in 0..width {
                rows.extend(block.iter().map(|r| r[j].clone()));
            }
        }
    }
    Ok(Figure {
        settings: json!({"n": ns, "f": fs, "delta-exp": exps, "sign": params.sign.unwrap_or(Sign::Corrected)}),
        tables: vec![Table {
            name: "fig5".into(),
            columns: "n,f,k,yield,protocol,delta,f_out",
            rows,
        }],
        warnings: Vec::new(),
    })
}

fn fig6(params: &Params) -> anyhow::Result<Figure> {
    let ps = list(&params.p, &[0.01, 0.05]);
    check_p(&ps)?;
    let max_n = params.max_n.unwrap_or(2048);
    let ns = params.n.clone().unwrap_or_else(|| {
        let mut v = Vec::new();
        let mut n = 8usize;
        while n <= max_n {
            v.push(n);
            if n * 3 / 2 <= max_n && (n * 3 / 2) % 2 == 0 {
                v.push(n * 3 / 2);
            }
            n *= 2;
        }
        v
    });
    let sign = sign_of(params);
    let jobs: Vec<(f64, usize)> = ps.iter().flat_map(|&p| ns.iter().map(move |&n| (p, n))).collect();
    let rows: Vec<Vec<String>> = jobs
        .par_iter()
        .map(|&(p, n)| {
            let counts = PatternCounts::new(n);
            let pg = largest_k(n, |k| {
                CorrectableFractions::with_counts(&counts, k).is_ok_and(|fr| fr.error_probability(p, n) < p)
            });
            let h = largest_k(n, |k| delta_optimal(n, k, 1.0 - p, sign).is_ok_and(|d| d.bound > 1.0 - p));
            [("pgrand", pg), ("hashing-optimal", h)]
                .iter()
                .map(|&(name, k)| format!("{p},{n},{name},{k},{}", k as f64 / n as f64))
                .collect()
        })
        .collect();
    Ok(Figure {
        settings: json!({"p": ps, "n": ns, "sign": params.sign.unwrap_or(Sign::Corrected)}),
        tables: vec![Table {
            name: "fig6".into(),
            columns: "p,n,protocol,k,yield",
            rows: rows.concat(),
        }],
        warnings: Vec::new(),
    })
}

fn fig7(params: &Params) -> anyhow::Result<Figure> {
    let fs = params
        .f
        .clone()
        .unwrap_or_else(|| linspace(0.82, 0.99, params.steps.unwrap_or(35)));
    check_f(&fs)?;
    let max_n = params.max_n.unwrap_or(20_000);
    let sign = sign_of(params);
    let cells: Vec<[Option<usize>; 3]> = fs
        .par_iter()
        .map(|&f| {
            let keep = |r: pgrand_core::Result<usize>| match r {
                Ok(n) => Ok(Some(n)),
                Err(Error::Unattainable(_)) => Ok(None),
                Err(e) => Err(e),
            };
            Ok([
                keep(min_pairs(f, None, max_n))?,
                keep(hashing_min_pairs(f, DeltaStrategy::Optimal, sign, max_n))?,
                keep(hashing_min_pairs(f, DeltaStrategy::Reference, sign, max_n))?,
            ])
        })
        .collect::<Result<_, Error>>()?;
    let names = ["pgrand", "hashing-optimal", "hashing-reference"];
    let mut rows = Vec::new();
    let mut missing = 0;
    for (i, name) in names.iter().enumerate() {
        for (f, c) in fs.iter().zip(&cells) {
            missing += usize::from(c[i].is_none());
            rows.push(format!("{f},{name},{}", c[i].map_or_else(String::new, |n| n.to_string())));
        }
    }
    let warnings = if missing > 0 {
        vec![format!("{missing} points need more than {max_n} pairs (empty n_min)")]
    } else {
        Vec::new()
    };
    Ok(Figure {
        settings: json!({"f": fs, "max-n": max_n, "sign": params.sign.unwrap_or(Sign::Corrected)}),
        tables: vec![Table {
            name: "fig7".into(),
            columns: "f,protocol,n_min",
            rows,
        }],
        warnings,
    })
}

fn fig8(params: &Params) -> anyhow::Result<Figure> {
    let ns = list(&params.n, &[32, 64, 128]);
    let ts = list(&params.t, &[2, 3, 4]);
    let fs = params
        .f
        .clone()
        .unwrap_or_else(|| linspace(0.8, 0.999, params.steps.unwrap_or(40)));
    check_f(&fs)?;
    let sign = sign_of(params);
    let mut rows = Vec::new();
    for &n in &ns {
        let fr = CorrectableFractions::new(n, 1)?;
        for &t in ts.iter().filter(|&&t| t <= n) {
            for &f in &fs {
                let pg = 1.0 - fr.error_probability(1.0 - f, t);
                let d = delta_prime(n, t, f)?;
                let h = if d > 0.0 {
                    Some(hashing_fidelity_bound(&HashingBoundParams::new(n, 1, f, d)?, sign)?)
                } else {
                    None
                };
                rows.push(format!("{n},{t},{f},{d},{pg},{}", cell(h)));
            }
        }
    }
    Ok(Figure {
        settings: json!({"n": ns, "t": ts, "f": fs, "sign": params.sign.unwrap_or(Sign::Corrected)}),
        tables: vec![Table {
            name: "fig8".into(),
            columns: "n,t,f_in,delta_prime,pgrand_f_out,hashing_f_out",
            rows,
        }],
        warnings: Vec::new(),
    })
}

fn fig12(params: &Params) -> anyhow::Result<Figure> {
    let ns = list(&params.n, &[32, 64, 128, 256]);
    let ts = list(&params.t, &[2, 3, 4, 5]);
    let ps = list(&params.p, &[0.1, 0.05, 0.025, 0.01]);
    check_p(&ps)?;
    Ok(Figure {
        settings: json!({"n": ns, "t": ts, "p": ps}),
        tables: vec![Table {
            name: "fig12".into(),
            columns: "n,t,p,k,yield,p_e",
            rows: pe_curve_rows(&ns, &ts, &ps)?,
        }],
        warnings: Vec::new(),
    })
}

fn fig13(params: &Params) -> anyhow::Result<Figure> {
    let n = single(&params.n, "n", 128)?;
    let f = single(&params.f, "f", 0.9)?;
    check_f(&[f])?;
    let exps = list(&params.delta_exp, &[2.0, 2.5, 3.0, 3.5]);
    let counts = PatternCounts::new(n);
    let mut classes = Vec::new();
    let mut summary = Vec::new();
    for &x in &exps {
        let delta = (n as f64).powf(-1.0 / x);
        let ts = typical_set_bounds(n, f, delta)?;
        for c in &ts.classes {
            classes.push(format!(
                "{x},{delta},{},{},{},{},{}",
                c.weight,
                c.log2_pattern_probability,
                counts.ln_weight(c.weight) / std::f64::consts::LN_2,
                c.mass,
                c.included
            ));
        }
        summary.push(format!(
            "{x},{delta},{},{},{},{},{}",
            ts.log2_p_low, ts.log2_p_high, ts.log2_max_count, ts.mass_inside, ts.mass_outside
        ));
    }
    Ok(Figure {
        settings: json!({"n": n, "f": f, "delta-exp": exps}),
        tables: vec![
            Table {
                name: "fig13".into(),
                columns: "delta_exp,delta,weight,log2_pattern_probability,log2_count,mass,included",
                rows: classes,
            },
            Table {
                name: "fig13-summary".into(),
                columns: "delta_exp,delta,log2_p_low,log2_p_high,log2_max_count,mass_inside,mass_outside",
                rows: summary,
            },
        ],
        warnings: Vec::new(),
    })
}
