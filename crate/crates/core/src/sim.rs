//! Monte Carlo estimate of the protocol's error probability.
//!
//! Every encoder seed gets a fresh random encoder and lookup table; its shots
//! are split into fixed-size chunks, each driven by its own ChaCha stream, so
//! the counts do not depend on how many worker threads run the chunks.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::clifford::{
    apply_measurement_update, build_parity_check, default_measured_qubits, sample_random_encoder, CliffordCircuit,
    ParityCheckMatrix, SyndromeColumns,
};
use crate::decoder::{build_table, BuildOptions, Provenance, SyndromeTable};
use crate::error::{check_dim, invalid, Result};
use crate::noise::{sample_error, DepolarizingParams};
use crate::pauli::{BitString, Pauli, PauliString};

/// Shots per RNG stream.
pub const CHUNK_TRIALS: u64 = 256;

/// When a decoded pattern counts as a success.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SuccessCriterion {
    /// The decoded pattern equals the sampled one.
    #[default]
    ExactIdentification,
    /// The residual error is a stabilizer-like operator that leaves the kept qubits' logicals intact.
    LogicalEquivalence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub p: f64,
    pub num_gates: usize,
    /// Independent encoders (and tables) averaged over.
    pub encoders: usize,
    /// Shots per encoder.
    pub trials: u64,
    pub seed: u64,
    pub criterion: SuccessCriterion,
    /// Draw and cancel the measurement-outcome mask instead of using the net syndrome directly.
    pub explicit_masking: bool,
    pub build: BuildOptions,
}

impl SimConfig {
    pub fn new(n: usize, k: usize, t: usize, p: f64, num_gates: usize) -> Self {
        Self {
            n,
            k,
            t,
            p,
            num_gates,
            encoders: 20,
            trials: 1000,
            seed: 0,
            criterion: SuccessCriterion::default(),
            explicit_masking: false,
            build: BuildOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k >= self.n {
            return Err(invalid("k", format!("need 1 <= k < n, got k={}, n={}", self.k, self.n)));
        }
        if self.t > self.n {
            return Err(invalid("t", format!("need t <= n, got t={}, n={}", self.t, self.n)));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "need at least one trial"));
        }
        if self.encoders == 0 {
            return Err(invalid("encoders", "need at least one encoder"));
        }
        if self.num_gates == 0 {
            return Err(invalid("num_gates", "need at least one gate"));
        }
        DepolarizingParams::new(self.n, self.p).map(|_| ())
    }
}

/// Shots and successes for one error weight.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WeightTally {
    pub trials: u64,
    pub successes: u64,
}

/// Shot counts accumulated over any number of trials.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrialTally {
    pub trials: u64,
    pub failures: u64,
    pub per_weight: Vec<WeightTally>,
}

impl TrialTally {
    fn new(n: usize) -> Self {
        Self {
            trials: 0,
            failures: 0,
            per_weight: vec![WeightTally::default(); n + 1],
        }
    }

    fn record(&mut self, weight: usize, success: bool) {
        self.trials += 1;
        self.failures += u64::from(!success);
        let slot = &mut self.per_weight[weight];
        slot.trials += 1;
        slot.successes += u64::from(success);
    }

    fn merge(&mut self, other: &TrialTally) {
        self.trials += other.trials;
        self.failures += other.failures;
        for (a, b) in self.per_weight.iter_mut().zip(&other.per_weight) {
            a.trials += b.trials;
            a.successes += b.successes;
        }
    }
}

/// Everything a single shot needs, shared read-only across workers.
#[derive(Debug)]
pub struct TrialContext<'a> {
    h: &'a ParityCheckMatrix,
    columns: SyndromeColumns,
    table: &'a SyndromeTable,
    noise: DepolarizingParams,
    criterion: SuccessCriterion,
    explicit_masking: bool,
    logicals: Vec<PauliString>,
}

impl<'a> TrialContext<'a> {
    /// `circuit` is required for [`SuccessCriterion::LogicalEquivalence`].
    pub fn new(
        h: &'a ParityCheckMatrix,
        circuit: Option<&CliffordCircuit>,
        table: &'a SyndromeTable,
        noise: DepolarizingParams,
        criterion: SuccessCriterion,
        explicit_masking: bool,
    ) -> Result<Self> {
        check_dim(h.num_qubits(), noise.num_qubits())?;
        check_dim(h.num_qubits(), table.num_qubits())?;
        check_dim(h.num_checks(), table.syndrome_len())?;
        let logicals = match criterion {
            SuccessCriterion::ExactIdentification => Vec::new(),
            SuccessCriterion::LogicalEquivalence => {
                let c = circuit.ok_or_else(|| invalid("circuit", "logical equivalence needs the encoder"))?;
                logical_operators(c, h)?
            }
        };
        Ok(Self {
            h,
            columns: h.syndrome_columns(),
            table,
            noise,
            criterion,
            explicit_masking,
            logicals,
        })
    }

    /// Encoded `X_i`, `Z_i` of every kept qubit.
    pub fn logicals(&self) -> &[PauliString] {
        &self.logicals
    }
}

/// Encoded single-qubit `X` and `Z` on every qubit the parity check leaves unmeasured.
pub fn logical_operators(circuit: &CliffordCircuit, h: &ParityCheckMatrix) -> Result<Vec<PauliString>> {
    let n = h.num_qubits();
    let mut measured = vec![false; n];
    for &q in h.measured_qubits() {
        measured[q] = true;
    }
    let mut out = Vec::new();
    for q in (0..n).filter(|&q| !measured[q]) {
        for p in [Pauli::X, Pauli::Z] {
            out.push(circuit.conjugate_pauli(&PauliString::single(n, q, p)?)?);
        }
    }
    Ok(out)
}

/// One shot: sample, extract the syndrome, decode and judge. Returns `(weight, success)`.
pub fn run_trial<R: Rng + ?Sized>(ctx: &TrialContext<'_>, rng: &mut R) -> (usize, bool) {
    let e = sample_error(&ctx.noise, rng);
    let weight = e.weight();
    let mut s = ctx.columns.syndrome_of(&e).expect("sized by construction");
    if ctx.explicit_masking {
        let mask: Vec<bool> = (0..s.len()).map(|_| rng.random()).collect();
        let mask = BitString::from_bools(&mask);
        let bob = apply_measurement_update(&s, &mask).expect("same length");
        s = apply_measurement_update(&bob, &mask).expect("same length");
    }
    let guess = ctx.table.decode(&s).expect("sized by construction");
    let success = match (ctx.criterion, guess) {
        (_, None) => false,
        (SuccessCriterion::ExactIdentification, Some(g)) => g == e,
        (SuccessCriterion::LogicalEquivalence, Some(g)) => {
            let residual = g.compose(&e).expect("same length");
            ctx.h.syndrome(&residual).expect("same length").is_zero()
                && ctx
                    .logicals
                    .iter()
                    .all(|l| !l.symplectic_product_unchecked(&residual))
        }
    };
    (weight, success)
}

/// Runs `trials` shots in [`CHUNK_TRIALS`]-sized streams derived from `seed`.
pub fn run_trials(ctx: &TrialContext<'_>, trials: u64, seed: u64) -> TrialTally {
    let n = ctx.h.num_qubits();
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let tallies: Vec<TrialTally> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let shots = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
            let mut tally = TrialTally::new(n);
            for _ in 0..shots {
                let (w, ok) = run_trial(ctx, &mut rng);
                tally.record(w, ok);
            }
            tally
        })
        .collect();
    let mut total = TrialTally::new(n);
    for t in &tallies {
        total.merge(t);
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub config: SimConfig,
    pub trials: u64,
    pub failures: u64,
    pub pe_hat: f64,
    /// Wald binomial standard error.
    pub stderr: f64,
    pub fidelity_lb: f64,
    pub yield_: f64,
    pub per_weight: Vec<WeightTally>,
    pub per_encoder_failures: Vec<u64>,
    pub provenance: Vec<Provenance>,
}

impl SimResult {
    pub const CSV_HEADER: &'static str = "n,k,t,p,num_gates,trials,pe_hat,stderr,fidelity_lb,yield";

    pub fn csv_row(&self) -> String {
        let c = &self.config;
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            c.n, c.k, c.t, c.p, c.num_gates, self.trials, self.pe_hat, self.stderr, self.fidelity_lb, self.yield_
        )
    }
}

/// `1 - p_e`, a lower bound on the average output fidelity.
pub fn fidelity_lower_bound(p_e: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_e) {
        return Err(invalid("p_e", format!("need 0 <= p_e <= 1, got {p_e}")));
    }
    Ok(1.0 - p_e)
}

/// Encoder and shot seeds for encoder number `i`, drawn in order from the master seed.
pub fn encoder_seeds(master: u64, encoders: usize) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..encoders).map(|_| (rng.next_u64(), rng.next_u64())).collect()
}

pub fn estimate_error_probability(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let noise = DepolarizingParams::new(config.n, config.p)?;
    let measured = default_measured_qubits(config.n, config.k);
    let mut total = TrialTally::new(config.n);
    let mut per_encoder_failures = Vec::with_capacity(config.encoders);
    let mut provenance = Vec::with_capacity(config.encoders);
    for (enc_seed, shot_seed) in encoder_seeds(config.seed, config.encoders) {
        let circuit = sample_random_encoder(config.n, config.num_gates, enc_seed)?;
        let h = build_parity_check(&circuit, &measured)?;
        let table = build_table(&h, config.t, &noise, &config.build)?;
        let ctx = TrialContext::new(
            &h,
            Some(&circuit),
            &table,
            noise.clone(),
            config.criterion,
            config.explicit_masking,
        )?;
        let tally = run_trials(&ctx, config.trials, shot_seed);
        per_encoder_failures.push(tally.failures);
        total.merge(&tally);
        provenance.push(table.provenance().clone());
    }
    let pe_hat = total.failures as f64 / total.trials as f64;
    Ok(SimResult {
        config: config.clone(),
        trials: total.trials,
        failures: total.failures,
        pe_hat,
        stderr: (pe_hat * (1.0 - pe_hat) / total.trials as f64).sqrt(),
        fidelity_lb: 1.0 - pe_hat,
        yield_: config.k as f64 / config.n as f64,
        per_weight: total.per_weight,
        per_encoder_failures,
        provenance,
    })
}
