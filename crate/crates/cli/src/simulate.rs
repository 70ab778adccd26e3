//! `simulate`: Monte Carlo error probability against the closed form.

use anyhow::bail;
use pgrand_core::analytic::{error_probability, PgrandModelPoint};
use pgrand_core::sim::{estimate_error_probability, SimConfig, SimResult, SuccessCriterion};
use pgrand_core::{default_gate_budget, BuildOptions};
use serde::Serialize;

use crate::output::{Outcome, Run};
use crate::params::{single, Criterion, Params};

#[derive(Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
struct Settings {
    n: usize,
    k: Vec<usize>,
    t: usize,
    p: f64,
    gates: usize,
    encoders: usize,
    trials: u64,
    seed: u64,
    criterion: Criterion,
    masking: bool,
    mem_budget: u64,
}

pub fn simulate(params: &Params) -> anyhow::Result<Outcome> {
    let n = single(&params.n, "n", 32)?;
    let k = params
        .k
        .clone()
        .unwrap_or_else(|| [n / 2, n / 4, n / 8].into_iter().filter(|&k| k > 0).collect());
    if k.is_empty() {
        bail!("invalid parameter `k`: need at least one value");
    }
    let settings = Settings {
        n,
        t: single(&params.t, "t", 4)?,
        p: single(&params.p, "p", 0.01)?,
        gates: params.gates.unwrap_or_else(|| default_gate_budget(n)),
        encoders: params.encoders.unwrap_or(20),
        trials: params.trials.unwrap_or(1000),
        seed: params.seed.unwrap_or(0),
        criterion: params.criterion.unwrap_or(Criterion::Exact),
        masking: params.masking.unwrap_or(false),
        mem_budget: params.mem_budget_bytes()?,
        k,
    };
    let configs: Vec<SimConfig> = settings
        .k
        .iter()
        .map(|&k| SimConfig {
            encoders: settings.encoders,
            trials: settings.trials,
            seed: settings.seed,
            criterion: match settings.criterion {
                Criterion::Exact => SuccessCriterion::ExactIdentification,
                Criterion::Logical => SuccessCriterion::LogicalEquivalence,
            },
            explicit_masking: settings.masking,
            build: BuildOptions {
                memory_budget_bytes: settings.mem_budget,
            },
            ..SimConfig::new(n, k, settings.t, settings.p, settings.gates)
        })
        .collect();
    for c in &configs {
        c.validate()?;
    }

    let mut run = Run::new("simulate", &params.out_dir(), &settings, params.workers.unwrap_or(0))?;
    let mut rows = Vec::new();
    let mut weights = Vec::new();
    for c in &configs {
        let r = estimate_error_probability(c)?;
        let analytic = error_probability(&PgrandModelPoint::new(c.n, c.k, c.p, c.t)?)?;
        let sigma = (analytic * (1.0 - analytic) / r.trials as f64).sqrt();
        let z = if sigma > 0.0 { (r.pe_hat - analytic) / sigma } else { f64::NAN };
        if z.abs() > 3.0 {
            run.warn(format!(
                "k={}: estimate {} is {z:.1} standard deviations from the closed form {analytic}",
                c.k, r.pe_hat
            ));
        }
        rows.push(format!("{},{analytic},{z}", r.csv_row()));
        for (w, wt) in r.per_weight.iter().enumerate().filter(|(_, wt)| wt.trials > 0) {
            weights.push(format!("{},{w},{},{}", c.k, wt.trials, wt.successes));
        }
        for (i, (f, prov)) in r.per_encoder_failures.iter().zip(&r.provenance).enumerate() {
            run.note(&format!("k{}_encoder{i}", c.k), serde_json::json!({"seed": prov.encoder_seed, "failures": f}))?;
        }
    }
    run.csv("simulate", &format!("{},analytic_pe,z", SimResult::CSV_HEADER), rows)?;
    run.csv("simulate-weights", "k,weight,trials,successes", weights)?;
    run.finish()
}
