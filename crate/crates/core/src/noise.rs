//! Local depolarizing noise: sampling, pattern statistics and likelihood-ordered enumeration.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{check_dim, invalid, Error, Result};
use crate::numeric::{ln_add_exp, ln_choose, xlnx, CompensatedSum};
use crate::pauli::{Pauli, PauliString};

/// i.i.d. depolarizing channel with parameter `p` on each of `n` qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarizingParams {
    n: usize,
    p: f64,
}

impl DepolarizingParams {
    /// Requires `0 <= p < 3/4`, the range where likelihood order equals weight order.
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if !(0.0..0.75).contains(&p) {
            return Err(invalid("p", format!("need 0 <= p < 0.75, got {p}")));
        }
        Ok(Self { n, p })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Draws one error pattern: each qubit independently gets X, Y or Z with probability `p/3` each.
pub fn sample_error<R: Rng + ?Sized>(params: &DepolarizingParams, rng: &mut R) -> PauliString {
    let mut e = PauliString::identity(params.n);
    if params.p == 0.0 {
        return e;
    }
    for q in 0..params.n {
        let u: f64 = rng.random();
        if u < params.p {
            let which = ((3.0 * u / params.p) as usize).min(2);
            e.set_unchecked(q, Pauli::ERRORS[which]);
        }
    }
    e
}

/// `log2 P(E) = w·log2(p/3) + (n-w)·log2(1-p)` for a pattern of weight `w`.
pub fn log2_weight_probability(n: usize, p: f64, w: usize) -> f64 {
    let per_error = if w == 0 { 0.0 } else { w as f64 * (p / 3.0).log2() };
    let clean = if w == n { 0.0 } else { (n - w) as f64 * (-p).ln_1p() / std::f64::consts::LN_2 };
    per_error + clean
}

/// Probability of the exact pattern `e` under the channel.
pub fn pattern_probability(e: &PauliString, params: &DepolarizingParams) -> Result<f64> {
    Ok(log2_pattern_probability(e, params)?.exp2())
}

pub fn log2_pattern_probability(e: &PauliString, params: &DepolarizingParams) -> Result<f64> {
    check_dim(params.n, e.num_qubits())?;
    Ok(log2_weight_probability(params.n, params.p, e.weight()))
}

/// `N_w = C(n, w)·3^w` as an exact integer together with its base-2 logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternCount {
    pub exact: BigUint,
    pub log2: f64,
}

pub fn count_patterns(n: usize, w: usize) -> Result<PatternCount> {
    if w > n {
        return Err(Error::IndexOutOfRange { index: w, size: n + 1 });
    }
    Ok(PatternCount {
        exact: exact_pattern_count(n, w),
        log2: ln_pattern_count(n, w) / std::f64::consts::LN_2,
    })
}

pub(crate) fn exact_pattern_count(n: usize, w: usize) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..w {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c * BigUint::from(3u32).pow(w as u32)
}

pub(crate) fn ln_pattern_count(n: usize, w: usize) -> f64 {
    ln_choose(n, w) + w as f64 * 3f64.ln()
}

/// Exact `N_{<=w}`.
pub fn cumulative_pattern_count(n: usize, w: usize) -> BigUint {
    (0..=w.min(n)).fold(BigUint::zero(), |acc, i| acc + exact_pattern_count(n, i))
}

/// Natural-log pattern counts `ln N_w` and `ln N_{<=w}` for every `w` in `0..=n`.
#[derive(Debug, Clone)]
pub struct PatternCounts {
    ln_weight: Vec<f64>,
    ln_cumulative: Vec<f64>,
}

impl PatternCounts {
    pub fn new(n: usize) -> Self {
        let ln_weight: Vec<f64> = (0..=n).map(|w| ln_pattern_count(n, w)).collect();
        let mut ln_cumulative = Vec::with_capacity(n + 1);
        let mut acc = f64::NEG_INFINITY;
        for &lw in &ln_weight {
            acc = ln_add_exp(acc, lw);
            ln_cumulative.push(acc);
        }
        Self {
            ln_weight,
            ln_cumulative,
        }
    }

    pub fn n(&self) -> usize {
        self.ln_weight.len() - 1
    }

    pub fn ln_weight(&self, w: usize) -> f64 {
        self.ln_weight[w]
    }

    /// `ln N_{<=w}`; `-inf` for negative `w`.
    pub fn ln_cumulative(&self, w: isize) -> f64 {
        if w < 0 {
            f64::NEG_INFINITY
        } else {
            self.ln_cumulative[(w as usize).min(self.n())]
        }
    }
}

pub fn ln_binomial_pmf(n: usize, p: f64, w: usize) -> f64 {
    if w > n {
        return f64::NEG_INFINITY;
    }
    let succ = if w == 0 { 0.0 } else { w as f64 * p.ln() };
    let fail = if w == n { 0.0 } else { (n - w) as f64 * (-p).ln_1p() };
    ln_choose(n, w) + succ + fail
}

/// `C(n, w) p^w (1-p)^(n-w)` evaluated in log space.
pub fn binomial_pmf(n: usize, p: f64, w: usize) -> Result<f64> {
    if w > n {
        return Err(Error::IndexOutOfRange { index: w, size: n + 1 });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("p", format!("need 0 <= p <= 1, got {p}")));
    }
    Ok(ln_binomial_pmf(n, p, w).exp())
}

/// Binomial pmf for every weight `0..=n`.
pub fn binomial_pmf_all(n: usize, p: f64) -> Vec<f64> {
    (0..=n).map(|w| ln_binomial_pmf(n, p, w).exp()).collect()
}

/// Lexicographic successor of a strictly increasing index tuple drawn from `0..n`.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let w = combo.len();
    let mut i = w;
    while i > 0 {
        i -= 1;
        if combo[i] < n - w + i {
            combo[i] += 1;
            for j in i + 1..w {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Advances per-position Pauli codes through X < Z < Y, last position fastest.
/// Returns the first position whose code changed, or `None` on wrap-around.
pub(crate) fn next_codes(codes: &mut [Pauli]) -> Option<usize> {
    let mut i = codes.len();
    while i > 0 {
        i -= 1;
        match codes[i] {
            Pauli::X => {
                codes[i] = Pauli::Z;
                return Some(i);
            }
            Pauli::Z => {
                codes[i] = Pauli::Y;
                return Some(i);
            }
            _ => codes[i] = Pauli::X,
        }
    }
    None
}

/// Every Pauli pattern of weight `<= t`, lightest first.
///
/// Within a weight class the order is lexicographic in the ascending support
/// tuple, then in the per-qubit codes with `X < Z < Y`.
#[derive(Debug, Clone)]
pub struct PatternStream {
    n: usize,
    t: usize,
    combo: Vec<usize>,
    codes: Vec<Pauli>,
    started: bool,
    done: bool,
}

pub fn enumerate_patterns(n: usize, t: usize) -> Result<PatternStream> {
    if t > n {
        return Err(invalid("t", format!("need t <= n, got t={t}, n={n}")));
    }
    Ok(PatternStream {
        n,
        t,
        combo: Vec::new(),
        codes: Vec::new(),
        started: false,
        done: false,
    })
}

impl PatternStream {
    fn current(&self) -> PauliString {
        let mut e = PauliString::identity(self.n);
        for (&q, &p) in self.combo.iter().zip(&self.codes) {
            e.set_unchecked(q, p);
        }
        e
    }

    fn advance(&mut self) -> bool {
        if next_codes(&mut self.codes).is_some() {
            return true;
        }
        if next_combination(&mut self.combo, self.n) {
            return true;
        }
        let w = self.combo.len() + 1;
        if w > self.t {
            return false;
        }
        self.combo = (0..w).collect();
        self.codes = vec![Pauli::X; w];
        true
    }
}

impl Iterator for PatternStream {
    type Item = PauliString;

    fn next(&mut self) -> Option<PauliString> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        if self.advance() {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}

/// Bell-diagonal two-qubit state with weights on `Φ+, Ψ-, Ψ+, Φ-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalState {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl BellDiagonalState {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let s = Self { a, b, c, d };
        if [a, b, c, d].iter().any(|&x| !(x >= 0.0)) {
            return Err(invalid("state", format!("negative component in {s:?}")));
        }
        if (a + b + c + d - 1.0).abs() > 1e-12 {
            return Err(invalid("state", format!("components sum to {}", a + b + c + d)));
        }
        Ok(s)
    }

    /// Overlap with `Φ+`.
    pub fn fidelity(&self) -> f64 {
        self.a
    }

    pub fn total(&self) -> f64 {
        self.a + self.b + self.c + self.d
    }
}

/// Werner state `(F, (1-F)/3, (1-F)/3, (1-F)/3)`, valid for `1/4 <= F <= 1`.
pub fn werner_from_fidelity(f: f64) -> Result<BellDiagonalState> {
    if !(0.25..=1.0).contains(&f) {
        return Err(invalid("F", format!("need 1/4 <= F <= 1, got {f}")));
    }
    let e = (1.0 - f) / 3.0;
    BellDiagonalState::new(f, e, e, e)
}

/// Von Neumann entropy of the Werner state in bits, `S(1) = 0`.
pub fn werner_entropy(f: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&f) {
        return Err(invalid("F", format!("need 0 <= F <= 1, got {f}")));
    }
    let e = (1.0 - f) / 3.0;
    let nats: CompensatedSum = [-xlnx(f), -3.0 * xlnx(e)].into_iter().collect();
    Ok(nats.value() / std::f64::consts::LN_2)
}
