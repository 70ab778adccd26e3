//! `build-lut`: one encoder, one table, checkpointed per weight class.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use pgrand_core::analytic::{avg_correctable_fraction, PgrandModelPoint};
use pgrand_core::*;
use serde::Serialize;

use crate::output::{Outcome, Run};
use crate::params::{single, Params};

#[derive(Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
struct Settings {
    n: usize,
    k: usize,
    t: usize,
    p: f64,
    gates: usize,
    seed: u64,
    mem_budget: u64,
    lut: String,
}

/// Sidecar written after every completed weight class.
pub fn checkpoint_path(lut: &Path) -> PathBuf {
    let mut s = lut.as_os_str().to_owned();
    s.push(".partial");
    PathBuf::from(s)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

pub fn build_lut(params: &Params) -> anyhow::Result<Outcome> {
    let n = single(&params.n, "n", 32)?;
    let k = single(&params.k, "k", n / 2)?;
    let t = single(&params.t, "t", 4)?;
    let p = single(&params.p, "p", 0.01)?;
    if n < 2 || k == 0 || k >= n {
        bail!("invalid parameter `k`: need 1 <= k < n, got k={k}, n={n}");
    }
    if t > n {
        bail!("invalid parameter `t`: need t <= n, got t={t}, n={n}");
    }
    let gates = params.gates.unwrap_or_else(|| default_gate_budget(n));
    let seed = params.seed.unwrap_or(0);
    let budget = params.mem_budget_bytes()?;
    let out = params.out_dir();
    let path = params
        .lut
        .clone()
        .unwrap_or_else(|| out.join(format!("lut-n{n}-k{k}-t{t}-seed{seed}.bin")));
    let settings = Settings {
        n,
        k,
        t,
        p,
        gates,
        seed,
        mem_budget: budget,
        lut: path.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned()),
    };
    let mut run = Run::new("build-lut", &out, &settings, params.workers.unwrap_or(0))?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }

    let circuit = sample_random_encoder(n, gates, seed)?;
    let h = build_parity_check(&circuit, &default_measured_qubits(n, k))?;
    let noise = DepolarizingParams::new(n, p)?;
    let opts = BuildOptions { memory_budget_bytes: budget };
    let checkpoint = checkpoint_path(&path);
    let save = |table: &SyndromeTable| {
        write_atomic(&checkpoint, &table.to_bytes())
            .map_err(|e| Error::Format(format!("writing checkpoint {}: {e}", checkpoint.display())))
    };

    let table = if checkpoint.exists() {
        let partial = SyndromeTable::from_bytes(&fs::read(&checkpoint)?)
            .with_context(|| format!("reading checkpoint {}", checkpoint.display()))?;
        let from = partial.max_weight();
        let table = resume_table(partial, &h, t, &noise, &opts, save)
            .with_context(|| format!("resuming from {}; delete it to start over", checkpoint.display()))?;
        run.note("resumed_from_weight", from)?;
        table
    } else {
        build_table_with(&h, t, &noise, &opts, save)?
    };
    write_atomic(&path, &table.to_bytes()).with_context(|| format!("writing {}", path.display()))?;
    if checkpoint.exists() {
        fs::remove_file(&checkpoint)?;
    }
    run.record(&path)?;
    run.note("entries", table.len())?;

    let point = PgrandModelPoint::new(n, k, p, t)?;
    let rows = (0..=t).map(|w| {
        format!(
            "{w},{},{},{},{}",
            table.patterns_seen()[w],
            table.patterns_stored()[w],
            table.empirical_correctable_fraction(w),
            avg_correctable_fraction(&point, w)
        )
    });
    let rows: Vec<String> = rows.collect();
    run.csv(
        "build-lut",
        "weight,patterns,stored,empirical_fraction,analytic_fraction",
        rows,
    )?;
    run.finish()
}
