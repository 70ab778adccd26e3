//! Baselines and cross-protocol metrics: the Oxford recurrence map, tabulated
//! external protocols, the effective yield, and the measurement-based noise
//! transfer with its purification ranges and thresholds.

use crate::analytic::{hamming_bound_root, positive_window, CorrectableFractions};
use crate::error::{invalid, Error, Result};
use crate::noise::{werner_from_fidelity, BellDiagonalState};
use crate::numeric::{bisect_boundary, golden_section_max};

/// Result of running a purification protocol on one input fidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolOutcome {
    pub p_suc: f64,
    pub f_in: f64,
    pub f_out: f64,
    /// Input pairs per output pair, when the protocol consumes whole pairs.
    pub n_in: Option<u64>,
    pub k_out: Option<u64>,
    pub yield_: f64,
    /// False when the input lies outside the protocol's convergence region.
    pub converges: bool,
}

impl ProtocolOutcome {
    /// Deterministic block protocol whose output fidelity is bounded by `1 - p_e`.
    pub fn block(n: usize, k: usize, f_in: f64, p_e: f64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(invalid("k", format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        Ok(Self {
            p_suc: 1.0,
            f_in,
            f_out: 1.0 - p_e,
            n_in: Some(n as u64),
            k_out: Some(k as u64),
            yield_: k as f64 / n as f64,
            converges: true,
        })
    }
}

/// One successful round of the Oxford recurrence; returns the new state and the success probability.
pub fn oxford_round(state: &BellDiagonalState) -> Result<(BellDiagonalState, f64)> {
    let BellDiagonalState { a, b, c, d } = *state;
    let norm = (a + b).powi(2) + (c + d).powi(2);
    if !(norm > 0.0) {
        return Err(Error::Degenerate(format!("zero success probability for {state:?}")));
    }
    let next = BellDiagonalState {
        a: (a * a + b * b) / norm,
        b: 2.0 * c * d / norm,
        c: (c * c + d * d) / norm,
        d: 2.0 * a * b / norm,
    };
    Ok((next, norm))
}

/// `rounds` chained Oxford rounds on Werner pairs of fidelity `f_i`.
pub fn oxford_protocol(f_i: f64, rounds: u32) -> Result<ProtocolOutcome> {
    if rounds == 0 || rounds > 63 {
        return Err(invalid("rounds", format!("need 1 <= rounds <= 63, got {rounds}")));
    }
    if !(f_i > 0.25 && f_i <= 1.0) {
        return Err(invalid("F", format!("need 1/4 < F <= 1, got {f_i}")));
    }
    let mut state = werner_from_fidelity(f_i)?;
    let mut p_suc = 1.0;
    for _ in 0..rounds {
        let (next, n) = oxford_round(&state)?;
        state = next;
        p_suc *= n;
    }
    let n_in = 1u64 << rounds;
    Ok(ProtocolOutcome {
        p_suc,
        f_in: f_i,
        f_out: state.fidelity(),
        n_in: Some(n_in),
        k_out: Some(1),
        yield_: 1.0 / n_in as f64,
        converges: f_i > 0.5,
    })
}

/// `Y_E = P_suc · Y · max(0, F_out - F_in)`.
pub fn effective_yield(outcome: &ProtocolOutcome) -> f64 {
    (outcome.p_suc * outcome.yield_ * (outcome.f_out - outcome.f_in).max(0.0)).clamp(0.0, 1.0)
}

/// One row of an externally supplied outcome table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomePoint {
    pub f_in: f64,
    pub p_suc: f64,
    pub f_out: f64,
    pub yield_: f64,
}

/// Protocol known only through a tabulated `F_in -> (P_suc, F_out, yield)` map.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalProtocol {
    name: String,
    points: Vec<OutcomePoint>,
}

impl ExternalProtocol {
    pub fn new(name: impl Into<String>, points: Vec<OutcomePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("points", "outcome table is empty"));
        }
        if points.windows(2).any(|w| !(w[1].f_in > w[0].f_in)) {
            return Err(invalid("points", "F_in grid must be strictly increasing"));
        }
        for pt in &points {
            if !(0.0..=1.0).contains(&pt.p_suc) || !(pt.yield_ > 0.0 && pt.yield_ <= 1.0) {
                return Err(invalid("points", format!("out-of-range entry {pt:?}")));
            }
        }
        Ok(Self {
            name: name.into(),
            points,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[OutcomePoint] {
        &self.points
    }

    /// Linear interpolation on the `F_in` grid; errors outside the tabulated range.
    pub fn outcome(&self, f_in: f64) -> Result<ProtocolOutcome> {
        let pts = &self.points;
        let (first, last) = (pts[0].f_in, pts[pts.len() - 1].f_in);
        if !(f_in >= first && f_in <= last) {
            return Err(invalid("F", format!("{f_in} outside tabulated range [{first}, {last}]")));
        }
        let i = pts.partition_point(|p| p.f_in < f_in);
        let pt = if pts[i.min(pts.len() - 1)].f_in == f_in || i == 0 {
            pts[i.min(pts.len() - 1)]
        } else {
            let (l, r) = (pts[i - 1], pts[i]);
            let w = (f_in - l.f_in) / (r.f_in - l.f_in);
            let lerp = |a: f64, b: f64| a + w * (b - a);
            OutcomePoint {
                f_in,
                p_suc: lerp(l.p_suc, r.p_suc),
                f_out: lerp(l.f_out, r.f_out),
                yield_: lerp(l.yield_, r.yield_),
            }
        };
        Ok(ProtocolOutcome {
            p_suc: pt.p_suc,
            f_in,
            f_out: pt.f_out,
            n_in: None,
            k_out: None,
            yield_: pt.yield_,
            converges: true,
        })
    }
}

/// Handle returned by [`ProtocolRegistry::register_external_protocol`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProtocolHandle(usize);

#[derive(Debug, Clone, Default)]
pub struct ProtocolRegistry {
    protocols: Vec<ExternalProtocol>,
}

impl ProtocolRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_external_protocol(
        &mut self,
        name: impl Into<String>,
        points: Vec<OutcomePoint>,
    ) -> Result<ProtocolHandle> {
        let name = name.into();
        if self.protocols.iter().any(|p| p.name == name) {
            return Err(invalid("name", format!("protocol {name:?} already registered")));
        }
        self.protocols.push(ExternalProtocol::new(name, points)?);
        Ok(ProtocolHandle(self.protocols.len() - 1))
    }

    pub fn get(&self, handle: ProtocolHandle) -> &ExternalProtocol {
        &self.protocols[handle.0]
    }

    pub fn find(&self, name: &str) -> Option<ProtocolHandle> {
        self.protocols.iter().position(|p| p.name == name).map(ProtocolHandle)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ProtocolHandle, &ExternalProtocol)> {
        self.protocols.iter().enumerate().map(|(i, p)| (ProtocolHandle(i), p))
    }
}

/// Werner fidelity seen by the protocol when pairs (noise `p`) are coupled through
/// resource qubits with noise `q`: `1 - p - q + (4/3)pq`.
pub fn mb_input_fidelity(p: f64, q: f64) -> f64 {
    1.0 - p - q + 4.0 / 3.0 * p * q
}

/// Output fidelity after the measurement-based stage: `1 - p_e - q + (4/3)p_e q`.
pub fn mb_output_fidelity(p_e: f64, q: f64) -> f64 {
    mb_input_fidelity(p_e, q)
}

/// Smaller root of `(4/3)q^2 - 2q + (1 - F_floor) = 0`.
pub fn mb_threshold_q(f_floor: f64) -> Result<f64> {
    if !(f_floor > 0.75 && f_floor <= 1.0) {
        return Err(invalid("F_floor", format!("need 3/4 < F <= 1, got {f_floor}")));
    }
    let c = 1.0 - f_floor;
    let disc = 4.0 - 16.0 / 3.0 * c;
    if disc < 0.0 {
        return Err(Error::Unattainable(format!("no real threshold for F_floor={f_floor}")));
    }
    Ok(2.0 * c / (2.0 + disc.sqrt()))
}

/// Raw-pair fidelities between which the measurement-based protocol purifies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbRange {
    pub f_min: f64,
    /// Best output fidelity, reached at the cleanest purifying input.
    pub f_max: f64,
    pub p_low: f64,
    pub p_high: f64,
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0..0.75).contains(&q) {
        return Err(invalid("q", format!("need 0 <= q < 3/4, got {q}")));
    }
    Ok(())
}

/// Purification margin `F_a - (1 - p)` at raw pair noise `p`.
fn mb_margin(fr: &CorrectableFractions, t: usize, p: f64, q: f64) -> f64 {
    let p_e = fr.error_probability(1.0 - mb_input_fidelity(p, q), t);
    mb_output_fidelity(p_e, q) - (1.0 - p)
}

/// Range of raw Bell-pair fidelities `1 - p` whose output `F_a` beats the raw fidelity.
/// `None` when no such pair noise exists.
pub fn mb_purification_range(n: usize, q: f64, t: Option<usize>, k: usize) -> Result<Option<MbRange>> {
    check_q(q)?;
    let t = t.unwrap_or(n);
    if t > n {
        return Err(invalid("t", format!("need t <= n, got t={t}, n={n}")));
    }
    let fr = CorrectableFractions::new(n, k)?;
    Ok(positive_window(|p| mb_margin(&fr, t, p, q), 0.75).map(|(lo, hi)| {
        let p_e = fr.error_probability(1.0 - mb_input_fidelity(lo, q), t);
        MbRange {
            f_min: 1.0 - hi,
            f_max: mb_output_fidelity(p_e, q),
            p_low: lo,
            p_high: hi,
        }
    }))
}

fn mb_best_margin(fr: &CorrectableFractions, t: usize, q: f64) -> f64 {
    let steps = 1500;
    let h = 0.75 / steps as f64;
    let (best, _) = (1..steps)
        .map(|i| {
            let p = i as f64 * h;
            (i, mb_margin(fr, t, p, q))
        })
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let centre = best as f64 * h;
    golden_section_max(|p| mb_margin(fr, t, p, q), (centre - h).max(0.0), centre + h, 1e-10).1
}

/// Largest resource-state noise `q` for which some pair noise is still purified (one output pair, `t = n`).
pub fn mb_threshold_for_n(n: usize) -> Result<f64> {
    let fr = CorrectableFractions::new(n, 1)?;
    let q_cap = mb_threshold_q(1.0 - hamming_bound_root())?;
    if mb_best_margin(&fr, n, 0.0) <= 0.0 {
        return Err(Error::Unattainable(format!("no purification at n={n} even with q=0")));
    }
    Ok(bisect_boundary(|q| mb_best_margin(&fr, n, q) > 0.0, 0.0, q_cap, 1e-7))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oxford_fixpoint_and_werner_example() {
        let perfect = BellDiagonalState::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let (s, n) = oxford_round(&perfect).unwrap();
        assert_eq!((s, n), (perfect, 1.0));
        let w = werner_from_fidelity(0.7).unwrap();
        let (s, n) = oxford_round(&w).unwrap();
        assert!((n - 0.68).abs() < 1e-12);
        assert!((s.a - 0.5 / 0.68).abs() < 1e-12);
        assert!((s.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oxford_protocol_examples() {
        let o = oxford_protocol(0.7, 1).unwrap();
        assert!((o.f_out - 0.7353).abs() < 1e-4);
        assert!((o.p_suc - 0.68).abs() < 1e-12);
        assert_eq!(o.yield_, 0.5);
        assert!((effective_yield(&o) - 0.0120).abs() < 1e-4);
        let o = oxford_protocol(1.0, 5).unwrap();
        assert_eq!((o.f_out, o.p_suc), (1.0, 1.0));
        assert!(!oxford_protocol(0.5, 3).unwrap().converges);
        assert!(oxford_round(&BellDiagonalState { a: 0.0, b: 0.0, c: 0.0, d: 0.0 }).is_err());
    }

    #[test]
    fn effective_yield_floors_at_zero() {
        let o = ProtocolOutcome::block(10, 1, 0.95, 0.2).unwrap();
        assert_eq!(effective_yield(&o), 0.0);
        let o = ProtocolOutcome::block(10, 2, 0.9, 0.05).unwrap();
        assert!((effective_yield(&o) - 0.2 * 0.05).abs() < 1e-15);
    }

    #[test]
    fn transfer_maps() {
        assert_eq!(mb_input_fidelity(0.1, 0.0), 0.9);
        assert!((mb_input_fidelity(0.05, 0.02) - 0.931_333_333_333_333_3).abs() < 1e-15);
        assert_eq!(mb_input_fidelity(0.03, 0.07), mb_input_fidelity(0.07, 0.03));
    }

    #[test]
    fn threshold_q_roots() {
        assert_eq!(mb_threshold_q(1.0).unwrap(), 0.0);
        // quadratic-formula reference for F_floor = 0.8107
        assert!((mb_threshold_q(0.8107).unwrap() - 0.101_521_0).abs() < 1e-6);
        assert!((mb_threshold_q(0.9).unwrap() - 0.0518).abs() < 1e-4);
        assert!(mb_threshold_q(0.7).is_err());
    }

    #[test]
    fn external_protocol_interpolates() {
        let mk = |f_in, f_out| OutcomePoint {
            f_in,
            p_suc: 0.5,
            f_out,
            yield_: 0.5,
        };
        let mut reg = ProtocolRegistry::new();
        let h = reg
            .register_external_protocol("two-point", vec![mk(0.6, 0.7), mk(0.9, 0.95)])
            .unwrap();
        let o = reg.get(h).outcome(0.75).unwrap();
        assert!((o.f_out - 0.825).abs() < 1e-12);
        assert!(reg.get(h).outcome(0.95).is_err());
        assert!(reg.register_external_protocol("empty", vec![]).is_err());
        assert!(reg
            .register_external_protocol("bad", vec![mk(0.9, 0.9), mk(0.6, 0.7)])
            .is_err());
    }

    #[test]
    fn range_spot_checks() {
        let r = mb_purification_range(128, 0.01, None, 1).unwrap().unwrap();
        assert!((r.f_min - 0.8479).abs() < 0.002, "{r:?}");
        assert!((r.f_max - 0.9899).abs() < 0.002, "{r:?}");
        assert!(mb_purification_range(16, 0.02, None, 1).unwrap().is_none());
    }
}
