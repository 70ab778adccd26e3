//! Closed-form performance models: average correctable fractions, protocol
//! error probability, the quantum Hamming bound, the fidelity/size solvers
//! built on them, and the hashing-protocol bound with its slack strategies.

use crate::error::{invalid, Error, Result};
use crate::noise::{ln_binomial_pmf, werner_entropy, PatternCounts};
use crate::numeric::{
    binary_entropy, bisect_boundary, ln_choose, golden_section_max, one_minus_exp_over_x, one_minus_one_minus_exp_over_x,
    CompensatedSum,
};

const LN2: f64 = std::f64::consts::LN_2;

/// One `(n, k, p, t)` operating point of the guessing decoder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgrandModelPoint {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub t: usize,
}

impl PgrandModelPoint {
    pub fn new(n: usize, k: usize, p: f64, t: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(invalid("k", format!("need 1 <= k < n, got k={k}, n={n}")));
        }
        if !(0.0..0.75).contains(&p) {
            return Err(invalid("p", format!("need 0 <= p < 3/4, got {p}")));
        }
        if t > n {
            return Err(invalid("t", format!("need t <= n, got t={t}, n={n}")));
        }
        Ok(Self { n, k, p, t })
    }
}

/// `⟨f_w⟩` for every weight of one code size, reusable across noise levels.
#[derive(Debug, Clone)]
pub struct CorrectableFractions {
    n: usize,
    k: usize,
    fraction: Vec<f64>,
    miss: Vec<f64>,
    ln_choose: Vec<f64>,
}

impl CorrectableFractions {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Self::with_counts(&PatternCounts::new(n), k)
    }

    pub fn with_counts(counts: &PatternCounts, k: usize) -> Result<Self> {
        let n = counts.n();
        if k == 0 || k >= n {
            return Err(invalid("k", format!("need 1 <= k < n, got k={k}, n={n}")));
        }
        let ln_s = (n - k) as f64 * LN2;
        let mut fraction = Vec::with_capacity(n + 1);
        let mut miss = Vec::with_capacity(n + 1);
        for w in 0..=n {
            let x = (counts.ln_weight(w) - ln_s).exp();
            let a = (counts.ln_cumulative(w as isize - 1) - ln_s).exp();
            let h = one_minus_exp_over_x(x);
            fraction.push(((-a).exp() * h).clamp(0.0, 1.0));
            // 1 - e^{-a} h = (1 - h) + h (1 - e^{-a})
            miss.push((one_minus_one_minus_exp_over_x(x) + h * -(-a).exp_m1()).clamp(0.0, 1.0));
        }
        // the identity always owns the zero syndrome
        miss[0] = 0.0;
        let ln_choose = (0..=n).map(|w| ln_choose(n, w)).collect();
        Ok(Self {
            n,
            k,
            fraction,
            miss,
            ln_choose,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_logical(&self) -> usize {
        self.k
    }

    /// Asymptotic `⟨f_w⟩`, zero above `t`.
    pub fn fraction(&self, w: usize, t: usize) -> f64 {
        if w > t || w > self.n {
            0.0
        } else {
            self.fraction[w]
        }
    }

    /// `p_e = Σ_w Bin(n,p)(w) (1 - ⟨f_w⟩)`, with `⟨f_w⟩ = 0` above `t`.
    pub fn error_probability(&self, p: f64, t: usize) -> f64 {
        if p == 0.0 {
            return self.miss[0];
        }
        if p >= 1.0 {
            return if t >= self.n { self.miss[self.n] } else { 1.0 };
        }
        let (lp, lq) = (p.ln(), (-p).ln_1p());
        let mut acc = CompensatedSum::default();
        for w in 0..=self.n {
            let pmf = (self.ln_choose[w] + w as f64 * lp + (self.n - w) as f64 * lq).exp();
            if pmf == 0.0 {
                continue;
            }
            acc.add(if w <= t { pmf * self.miss[w] } else { pmf });
        }
        acc.value().clamp(0.0, 1.0)
    }
}

/// Average fraction of weight-`w` patterns the table can correct, `0` for `w > t`.
pub fn avg_correctable_fraction(point: &PgrandModelPoint, w: usize) -> f64 {
    match CorrectableFractions::new(point.n, point.k) {
        Ok(f) => f.fraction(w, point.t),
        Err(_) => 0.0,
    }
}

/// Probability that the decoder misidentifies the error pattern.
pub fn error_probability(point: &PgrandModelPoint) -> Result<f64> {
    Ok(CorrectableFractions::new(point.n, point.k)?.error_probability(point.p, point.t))
}

/// `1 - p log2(3) - H(p)`.
pub fn hamming_bound_yield(p: f64) -> f64 {
    1.0 - p * 3f64.log2() - binary_entropy(p)
}

/// Noise level where the Hamming bound reaches zero yield (about 0.1893).
pub fn hamming_bound_root() -> f64 {
    bisect_boundary(|p| hamming_bound_yield(p) > 0.0, 0.0, 0.5, 1e-14)
}

/// Edges of the noise interval on which `margin > 0`, found by a scan of `(0, p_max)` and bisection.
pub(crate) fn positive_window<F: FnMut(f64) -> f64>(mut margin: F, p_max: f64) -> Option<(f64, f64)> {
    let mut grid: Vec<f64> = (0..=120).map(|i| 10f64.powf(-12.0 + 9.0 * i as f64 / 120.0)).collect();
    let steps = 2000;
    grid.extend((1..steps).map(|i| 1e-3 + (p_max - 1e-3) * i as f64 / steps as f64));
    let inside: Vec<bool> = grid.iter().map(|&p| margin(p) > 0.0).collect();
    let first = inside.iter().position(|&b| b)?;
    let last = inside.iter().rposition(|&b| b)?;
    let tol = 1e-11;
    let lo = if first == 0 {
        grid[0]
    } else {
        bisect_boundary(|p| margin(p) > 0.0, grid[first], grid[first - 1], tol)
    };
    let hi_out = grid.get(last + 1).copied().unwrap_or(p_max);
    let hi = bisect_boundary(|p| margin(p) > 0.0, grid[last], hi_out, tol);
    Some((lo, hi))
}

/// Smallest input fidelity `F = 1 - p` for which `1 - p_e > F` with `k = 1`.
pub fn min_fidelity(n: usize, t: usize) -> Result<f64> {
    if n < 2 {
        return Err(invalid("n", format!("need n >= 2, got {n}")));
    }
    if t > n {
        return Err(invalid("t", format!("need t <= n, got t={t}, n={n}")));
    }
    let fr = CorrectableFractions::new(n, 1)?;
    positive_window(|p| p - fr.error_probability(p, t), 0.75)
        .map(|(_, p_hi)| 1.0 - p_hi)
        .ok_or_else(|| Error::Unattainable(format!("no purifying fidelity for n={n}, t={t}")))
}

/// Smallest `n` that purifies `F_i` with one output pair; `t_cap` limits the guessed weight.
pub fn min_pairs(f_i: f64, t_cap: Option<usize>, max_n: usize) -> Result<usize> {
    if !(f_i > 0.25 && f_i < 1.0) {
        return Err(invalid("F", format!("need 1/4 < F < 1, got {f_i}")));
    }
    if f_i <= 1.0 - hamming_bound_root() {
        return Err(Error::Unattainable(format!("F={f_i} is below the purification floor")));
    }
    let p = 1.0 - f_i;
    for n in 2..=max_n {
        let t = t_cap.map_or(n, |c| c.min(n));
        if CorrectableFractions::new(n, 1)?.error_probability(p, t) < p {
            return Ok(n);
        }
    }
    Err(Error::Unattainable(format!("no n <= {max_n} purifies F={f_i}")))
}

/// Largest achievable `k` and its yield.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxYield {
    pub k: usize,
    pub yield_: f64,
}

/// Largest `k` with `p_e <= target` at `t = n`, kept strictly below the Hamming bound.
pub fn max_yield(n: usize, f_i: f64, pe_target: f64) -> Result<MaxYield> {
    if n < 2 {
        return Err(invalid("n", format!("need n >= 2, got {n}")));
    }
    if !(f_i > 0.25 && f_i <= 1.0) {
        return Err(invalid("F", format!("need 1/4 < F <= 1, got {f_i}")));
    }
    let p = 1.0 - f_i;
    let cap = hamming_bound_yield(p);
    let counts = PatternCounts::new(n);
    for k in (1..n).rev() {
        let y = k as f64 / n as f64;
        if y >= cap {
            continue;
        }
        if CorrectableFractions::with_counts(&counts, k)?.error_probability(p, n) <= pe_target {
            return Ok(MaxYield { k, yield_: y });
        }
    }
    Ok(MaxYield { k: 0, yield_: 0.0 })
}

/// Exponent convention for the syndrome-collision term of the hashing bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FinalTermSign {
    /// `2^{n(S+δ) - (n-k)}`: typical-set size over syndrome count.
    #[default]
    Corrected,
    /// `2^{-n(S+δ) - (n-k)}`.
    Printed,
}

/// Werner-state entropy and the two spread constants of the hashing bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HashingConstants {
    pub s: f64,
    pub a: f64,
    pub g: f64,
}

impl HashingConstants {
    pub fn new(f: f64) -> Result<Self> {
        if !(f > 0.0 && f < 1.0) {
            return Err(invalid("F", format!("need 0 < F < 1, got {f}")));
        }
        let s = werner_entropy(f)?;
        let l_err = ((1.0 - f) / 3.0).log2();
        let a = l_err.abs() + s;
        let g = (f * f.log2().powi(2) + (1.0 - f) * l_err * l_err - s * s) / a;
        Ok(Self { s, a, g })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HashingBoundParams {
    pub n: usize,
    pub k: usize,
    pub f: f64,
    pub delta: f64,
}

impl HashingBoundParams {
    pub fn new(n: usize, k: usize, f: f64, delta: f64) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(invalid("k", format!("need 1 <= k < n, got k={k}, n={n}")));
        }
        if !(delta > 0.0) {
            return Err(invalid("delta", format!("need delta > 0, got {delta}")));
        }
        HashingConstants::new(f)?;
        Ok(Self { n, k, f, delta })
    }
}

fn hashing_raw(n: usize, k: usize, c: &HashingConstants, delta: f64, sign: FinalTermSign) -> f64 {
    let nf = n as f64;
    let spread = (c.g + delta) * (delta / c.g).ln_1p() - delta;
    let t1 = 2.0 * (-(nf / c.a) * spread).exp();
    let e = match sign {
        FinalTermSign::Corrected => nf * (c.s + delta) - (n - k) as f64,
        FinalTermSign::Printed => -nf * (c.s + delta) - (n - k) as f64,
    };
    1.0 - t1 - e.exp2()
}

/// Lower bound on the hashing protocol's output fidelity, clamped to `[0, 1]`.
pub fn hashing_fidelity_bound(params: &HashingBoundParams, sign: FinalTermSign) -> Result<f64> {
    let c = HashingConstants::new(params.f)?;
    if !(c.g > 0.0) {
        return Err(Error::Degenerate(format!("g(F) = {} is not positive", c.g)));
    }
    Ok(hashing_raw(params.n, params.k, &c, params.delta, sign).clamp(0.0, 1.0))
}

/// `½((n-1)/n - S(F))`; may be non-positive for small `n`.
pub fn delta_reference(n: usize, f: f64) -> Result<f64> {
    let c = HashingConstants::new(f)?;
    Ok(0.5 * ((n as f64 - 1.0) / n as f64 - c.s))
}

/// `(1/n) log2 N_{<=t} - S(F)`.
pub fn delta_prime(n: usize, t: usize, f: f64) -> Result<f64> {
    if t > n {
        return Err(invalid("t", format!("need t <= n, got t={t}, n={n}")));
    }
    let c = HashingConstants::new(f)?;
    let counts = PatternCounts::new(n);
    Ok(counts.ln_cumulative(t as isize) / LN2 / n as f64 - c.s)
}

/// Result of the slack optimisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaOptimum {
    pub delta: f64,
    pub bound: f64,
    /// Whether the sampled bound was unimodal; otherwise the search was seeded from the grid maximum.
    pub unimodal: bool,
}

/// Slack in `(0, 1 - S(F))` maximising the hashing bound.
pub fn delta_optimal(n: usize, k: usize, f: f64, sign: FinalTermSign) -> Result<DeltaOptimum> {
    if k == 0 || k >= n {
        return Err(invalid("k", format!("need 1 <= k < n, got k={k}, n={n}")));
    }
    let c = HashingConstants::new(f)?;
    let hi = 1.0 - c.s;
    if !(hi > 0.0) || !(c.g > 0.0) {
        return Err(Error::Unattainable(format!("empty slack interval at F={f}")));
    }
    let eval = |d: f64| hashing_raw(n, k, &c, d, sign);
    let m = 256;
    let grid: Vec<f64> = (1..m).map(|i| hi * i as f64 / m as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&d| eval(d)).collect();
    let best = (0..vals.len())
        .max_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .expect("non-empty grid");
    let slack = 1e-12;
    let unimodal = vals[..best].windows(2).all(|w| w[1] >= w[0] - slack)
        && vals[best..].windows(2).all(|w| w[1] <= w[0] + slack);
    let (lo, up) = if unimodal {
        (0.0, hi)
    } else {
        let lo = if best == 0 { 0.0 } else { grid[best - 1] };
        (lo, grid.get(best + 1).copied().unwrap_or(hi))
    };
    let (delta, raw) = golden_section_max(eval, lo.max(1e-12), up, 1e-9);
    let (delta, raw) = if raw >= vals[best] { (delta, raw) } else { (grid[best], vals[best]) };
    Ok(DeltaOptimum {
        delta,
        bound: raw.clamp(0.0, 1.0),
        unimodal,
    })
}

/// How the hashing slack is chosen when sizing a protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaStrategy {
    Reference,
    Optimal,
}

/// Smallest `n` whose hashing bound (one output pair) exceeds `F_i`.
pub fn hashing_min_pairs(f_i: f64, strategy: DeltaStrategy, sign: FinalTermSign, max_n: usize) -> Result<usize> {
    let c = HashingConstants::new(f_i)?;
    for n in 2..=max_n {
        let bound = match strategy {
            DeltaStrategy::Reference => {
                let d = delta_reference(n, f_i)?;
                if d <= 0.0 {
                    continue;
                }
                hashing_raw(n, 1, &c, d, sign)
            }
            DeltaStrategy::Optimal => match delta_optimal(n, 1, f_i, sign) {
                Ok(opt) => opt.bound,
                Err(Error::Unattainable(_)) => return Err(Error::Unattainable(format!("S(F) >= 1 at F={f_i}"))),
                Err(e) => return Err(e),
            },
        };
        if bound > f_i {
            return Ok(n);
        }
    }
    Err(Error::Unattainable(format!("no n <= {max_n} reaches F={f_i}")))
}

/// Probability carried by one weight class and whether it lies in the typical set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightClassMass {
    pub weight: usize,
    pub log2_pattern_probability: f64,
    pub included: bool,
    pub mass: f64,
}

/// Typical-set window `2^{-n(S+δ)} <= P <= 2^{-n(S-δ)}` for Werner noise.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalSet {
    pub log2_p_low: f64,
    pub log2_p_high: f64,
    pub log2_max_count: f64,
    pub classes: Vec<WeightClassMass>,
    pub mass_inside: f64,
    pub mass_outside: f64,
}

pub fn typical_set_bounds(n: usize, f: f64, delta: f64) -> Result<TypicalSet> {
    if !(delta > 0.0) {
        return Err(invalid("delta", format!("need delta > 0, got {delta}")));
    }
    let c = HashingConstants::new(f)?;
    let nf = n as f64;
    let (lo, hi) = (-nf * (c.s + delta), -nf * (c.s - delta));
    let p = 1.0 - f;
    let mut inside = CompensatedSum::default();
    let mut outside = CompensatedSum::default();
    let classes = (0..=n)
        .map(|w| {
            let lp = (n - w) as f64 * f.log2() + w as f64 * (p / 3.0).log2();
            let included = lp >= lo && lp <= hi;
            let mass = ln_binomial_pmf(n, p, w).exp();
            if included {
                inside.add(mass);
            } else {
                outside.add(mass);
            }
            WeightClassMass {
                weight: w,
                log2_pattern_probability: lp,
                included,
                mass,
            }
        })
        .collect();
    Ok(TypicalSet {
        log2_p_low: lo,
        log2_p_high: hi,
        log2_max_count: -lo,
        classes,
        mass_inside: inside.value(),
        mass_outside: outside.value(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weight_fraction_tends_to_one() {
        let pt = PgrandModelPoint::new(32, 1, 0.01, 3).unwrap();
        assert!((avg_correctable_fraction(&pt, 0) - 1.0).abs() < 1e-9);
        assert_eq!(avg_correctable_fraction(&pt, 4), 0.0);
    }

    #[test]
    fn t_zero_is_no_error_probability() {
        let n = 32;
        let pt = PgrandModelPoint::new(n, 1, 0.01, 0).unwrap();
        let want = 1.0 - 0.99f64.powi(n as i32);
        assert!((error_probability(&pt).unwrap() - want).abs() < 1e-12);
        let pt = PgrandModelPoint::new(n, 1, 0.0, 5).unwrap();
        assert_eq!(error_probability(&pt).unwrap(), 0.0);
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_bound_yield(0.0), 1.0);
        assert!((hamming_bound_root() - 0.1893).abs() < 5e-4);
        let want = 1.0 - 0.01 * 3f64.log2() - binary_entropy(0.01);
        assert!((hamming_bound_yield(0.01) - want).abs() < 1e-15);
        assert!((hamming_bound_yield(0.01) - 0.9034).abs() < 1e-4);
    }

    #[test]
    fn min_fidelity_table_corners() {
        assert!((min_fidelity(30, 6).unwrap() - 0.8695).abs() < 0.001);
        assert!((min_fidelity(61, 12).unwrap() - 0.8499).abs() < 0.001);
        assert!(min_fidelity(1, 1).is_err());
    }

    #[test]
    fn min_pairs_rows() {
        assert_eq!(min_pairs(0.95, None, 1000).unwrap(), 10);
        assert_eq!(min_pairs(0.90, None, 1000).unwrap(), 16);
        assert!(matches!(min_pairs(0.80, None, 1000), Err(Error::Unattainable(_))));
    }

    #[test]
    fn max_yield_noiseless_and_capped() {
        let y = max_yield(20, 1.0, 0.01).unwrap();
        assert_eq!(y.k, 19);
        // high-precision reference: p_e(k=275) = 0.0495150, p_e(k=276) = 0.0532643
        let y = max_yield(500, 0.95, 0.05).unwrap();
        assert_eq!(y.k, 275);
        let cap = hamming_bound_yield(0.05);
        assert!(y.yield_ < cap && cap - y.yield_ < 0.09);
    }

    #[test]
    fn hashing_constants_are_positive() {
        let c = HashingConstants::new(0.9).unwrap();
        assert!(c.a > 0.0 && c.g > 0.0 && c.s > 0.0);
        assert!(HashingConstants::new(1.0).is_err());
    }

    #[test]
    fn delta_prime_at_full_weight() {
        let f = 0.9;
        let s = werner_entropy(f).unwrap();
        assert!((delta_prime(40, 40, f).unwrap() - (2.0 - s)).abs() < 1e-12);
    }

    #[test]
    fn hashing_rows_spot_checks() {
        let c = FinalTermSign::Corrected;
        assert_eq!(hashing_min_pairs(0.95, DeltaStrategy::Optimal, c, 10_000).unwrap(), 71);
        assert_eq!(hashing_min_pairs(0.99, DeltaStrategy::Optimal, c, 10_000).unwrap(), 45);
        assert_eq!(hashing_min_pairs(0.90, DeltaStrategy::Reference, c, 10_000).unwrap(), 412);
    }

    #[test]
    fn hashing_bound_tends_to_one() {
        let f = 0.95;
        let s = werner_entropy(f).unwrap();
        let p = HashingBoundParams::new(20_000, 2_000, f, 0.5 * (0.9 - s)).unwrap();
        assert!(hashing_fidelity_bound(&p, FinalTermSign::Corrected).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn typical_set_vacuous_window() {
        let ts = typical_set_bounds(16, 0.9, 1e6).unwrap();
        assert!(ts.classes.iter().all(|c| c.included));
        assert!((ts.mass_inside - 1.0).abs() < 1e-12);
        let ts = typical_set_bounds(128, 0.9, 0.1).unwrap();
        for c in &ts.classes {
            assert_eq!(c.included, c.log2_pattern_probability >= ts.log2_p_low && c.log2_pattern_probability <= ts.log2_p_high);
        }
    }
}
