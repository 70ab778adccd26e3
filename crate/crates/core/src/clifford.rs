//! Random two-qubit Clifford encoders and Heisenberg-picture stabilizer evolution.
//!
//! The two-qubit Clifford group (11520 elements, global phase dropped) is
//! enumerated once by breadth-first closure over `{H, S, CNOT}` words, with
//! each element identified by the images of `X0, Z0, X1, Z1` including their
//! signs. Element indices follow the ascending order of that canonical key.
//! Conjugation itself is phase-free, so each element reduces to a 16-entry
//! lookup table over the local 4-bit pattern `(x_a, z_a, x_b, z_b)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, invalid, Error, Result};
use crate::pauli::{words_for, BitMatrix, BitString, Pauli, PauliString};

/// Order of the two-qubit Clifford group modulo global phase.
pub const TWO_QUBIT_CLIFFORD_COUNT: usize = 11520;

/// Elementary generator used to build group elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    H0,
    H1,
    S0,
    S1,
    Cnot01,
}

impl Generator {
    const ALL: [Generator; 5] = [
        Generator::H0,
        Generator::H1,
        Generator::S0,
        Generator::S1,
        Generator::Cnot01,
    ];

    // Sign-tracking update of one signed local Pauli (bit 4 = sign).
    fn apply(self, row: u8) -> u8 {
        let bit = |i: u8| (row >> i) & 1;
        let (xa, za, xb, zb, mut r) = (bit(0), bit(1), bit(2), bit(3), bit(4));
        let (mut nxa, mut nza, mut nxb, mut nzb) = (xa, za, xb, zb);
        match self {
            Generator::H0 => {
                r ^= xa & za;
                nxa = za;
                nza = xa;
            }
            Generator::H1 => {
                r ^= xb & zb;
                nxb = zb;
                nzb = xb;
            }
            Generator::S0 => {
                r ^= xa & za;
                nza = za ^ xa;
            }
            Generator::S1 => {
                r ^= xb & zb;
                nzb = zb ^ xb;
            }
            Generator::Cnot01 => {
                r ^= xa & zb & (xb ^ za ^ 1);
                nxb = xb ^ xa;
                nza = za ^ zb;
            }
        }
        nxa | nza << 1 | nxb << 2 | nzb << 3 | r << 4
    }

    fn inverse_word(self) -> &'static [Generator] {
        match self {
            Generator::S0 => &[Generator::S0, Generator::S0, Generator::S0],
            Generator::S1 => &[Generator::S1, Generator::S1, Generator::S1],
            Generator::H0 => &[Generator::H0],
            Generator::H1 => &[Generator::H1],
            Generator::Cnot01 => &[Generator::Cnot01],
        }
    }
}

/// One element of the two-qubit Clifford group.
#[derive(Debug, Clone)]
pub struct TwoQubitClifford {
    /// Signed images of `X0, Z0, X1, Z1`, five bits each.
    pub key: u32,
    /// Phase-free action on local patterns `x_a | z_a<<1 | x_b<<2 | z_b<<3`.
    pub map: [u8; 16],
    /// Generators in application order (first entry acts first).
    pub word: Vec<Generator>,
    pub inverse: u16,
}

const IDENTITY_ROWS: [u8; 4] = [0b0001, 0b0010, 0b0100, 0b1000];

fn rows_key(rows: &[u8; 4]) -> u32 {
    rows.iter()
        .enumerate()
        .fold(0u32, |acc, (i, &r)| acc | (r as u32) << (5 * i))
}

fn rows_of_word(word: &[Generator]) -> [u8; 4] {
    let mut rows = IDENTITY_ROWS;
    for g in word {
        for r in rows.iter_mut() {
            *r = g.apply(*r);
        }
    }
    rows
}

fn phase_free_map(rows: &[u8; 4]) -> [u8; 16] {
    let mut map = [0u8; 16];
    for (v, slot) in map.iter_mut().enumerate() {
        *slot = (0..4)
            .filter(|i| v >> i & 1 == 1)
            .fold(0u8, |acc, i| acc ^ (rows[i] & 0xF));
    }
    map
}

fn enumerate_group() -> Vec<TwoQubitClifford> {
    let mut seen: HashMap<u32, Vec<Generator>> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(rows_key(&IDENTITY_ROWS), Vec::new());
    queue.push_back((IDENTITY_ROWS, Vec::new()));
    while let Some((rows, word)) = queue.pop_front() {
        for g in Generator::ALL {
            let next = rows.map(|r| g.apply(r));
            let key = rows_key(&next);
            if !seen.contains_key(&key) {
                let mut w: Vec<Generator> = word.clone();
                w.push(g);
                seen.insert(key, w.clone());
                queue.push_back((next, w));
            }
        }
    }
    let mut elements: Vec<(u32, Vec<Generator>)> = seen.into_iter().collect();
    elements.sort_unstable_by_key(|(k, _)| *k);
    let index_of: HashMap<u32, u16> = elements
        .iter()
        .enumerate()
        .map(|(i, (k, _))| (*k, i as u16))
        .collect();
    elements
        .into_iter()
        .map(|(key, word)| {
            let inv_word: Vec<Generator> = word
                .iter()
                .rev()
                .flat_map(|g| g.inverse_word().iter().copied())
                .collect();
            let inverse = index_of[&rows_key(&rows_of_word(&inv_word))];
            let rows = rows_of_word(&word);
            TwoQubitClifford {
                key,
                map: phase_free_map(&rows),
                word,
                inverse,
            }
        })
        .collect()
}

/// The enumerated two-qubit Clifford group, built on first use.
pub fn two_qubit_cliffords() -> &'static [TwoQubitClifford] {
    static GROUP: OnceLock<Vec<TwoQubitClifford>> = OnceLock::new();
    GROUP.get_or_init(enumerate_group)
}

fn index_for_word(word: &[Generator]) -> u16 {
    let key = rows_key(&rows_of_word(word));
    two_qubit_cliffords()
        .binary_search_by_key(&key, |c| c.key)
        .expect("every generator word is a group element") as u16
}

/// A Clifford gate with its target qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    /// Element `index` of the enumerated group acting on `(a, b)`, `a` playing qubit 0.
    TwoQubit { index: u16, a: usize, b: usize },
}

impl CliffordGate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            CliffordGate::H(q) | CliffordGate::S(q) => (q, None),
            CliffordGate::Cnot { control, target } => (control, Some(target)),
            CliffordGate::Cz(a, b) | CliffordGate::TwoQubit { a, b, .. } => (a, Some(b)),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, size: n });
            }
        }
        if b == Some(a) {
            return Err(Error::DuplicateIndex(a));
        }
        if let CliffordGate::TwoQubit { index, .. } = self {
            if *index as usize >= TWO_QUBIT_CLIFFORD_COUNT {
                return Err(Error::IndexOutOfRange {
                    index: *index as usize,
                    size: TWO_QUBIT_CLIFFORD_COUNT,
                });
            }
        }
        Ok(())
    }

    /// Phase-free inverse.
    pub fn inverse(&self) -> CliffordGate {
        match *self {
            CliffordGate::TwoQubit { index, a, b } => CliffordGate::TwoQubit {
                index: two_qubit_cliffords()[index as usize].inverse,
                a,
                b,
            },
            other => other,
        }
    }

    /// Equivalent indexed form; single-qubit gates borrow `partner` as the idle second qubit.
    pub fn to_indexed(&self, partner: usize) -> CliffordGate {
        match *self {
            CliffordGate::H(q) => CliffordGate::TwoQubit {
                index: index_for_word(&[Generator::H0]),
                a: q,
                b: partner,
            },
            CliffordGate::S(q) => CliffordGate::TwoQubit {
                index: index_for_word(&[Generator::S0]),
                a: q,
                b: partner,
            },
            CliffordGate::Cnot { control, target } => CliffordGate::TwoQubit {
                index: index_for_word(&[Generator::Cnot01]),
                a: control,
                b: target,
            },
            CliffordGate::Cz(a, b) => CliffordGate::TwoQubit {
                index: index_for_word(&[Generator::H1, Generator::Cnot01, Generator::H1]),
                a,
                b,
            },
            g @ CliffordGate::TwoQubit { .. } => g,
        }
    }

    /// Conjugates `p` in place: `p -> G p G^-1`, phase dropped.
    #[inline]
    pub(crate) fn conjugate_in_place(&self, p: &mut PauliString) {
        match *self {
            CliffordGate::H(q) => {
                let v = p.get_unchecked(q);
                p.set_unchecked(q, Pauli::from_bits(v.z(), v.x()));
            }
            CliffordGate::S(q) => {
                let v = p.get_unchecked(q);
                p.set_unchecked(q, Pauli::from_bits(v.x(), v.z() ^ v.x()));
            }
            CliffordGate::Cnot { control, target } => {
                let (c, t) = (p.get_unchecked(control), p.get_unchecked(target));
                p.set_unchecked(control, Pauli::from_bits(c.x(), c.z() ^ t.z()));
                p.set_unchecked(target, Pauli::from_bits(t.x() ^ c.x(), t.z()));
            }
            CliffordGate::Cz(a, b) => {
                let (va, vb) = (p.get_unchecked(a), p.get_unchecked(b));
                p.set_unchecked(a, Pauli::from_bits(va.x(), va.z() ^ vb.x()));
                p.set_unchecked(b, Pauli::from_bits(vb.x(), vb.z() ^ va.x()));
            }
            CliffordGate::TwoQubit { index, a, b } => {
                let local = p.get_unchecked(a).code() | p.get_unchecked(b).code() << 2;
                let image = two_qubit_cliffords()[index as usize].map[local as usize];
                p.set_unchecked(a, Pauli::from_code(image & 3));
                p.set_unchecked(b, Pauli::from_code(image >> 2));
            }
        }
    }
}

/// Ordered gate list acting on `n` qubits; the first gate acts first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<CliffordGate>,
    seed: u64,
}

/// Default encoder size `ceil(0.14 · n · log2(n)^2)`.
pub fn default_gate_budget(n: usize) -> usize {
    let l = (n as f64).log2();
    // trim float noise so exact products such as 112.000...01 do not round up
    (0.14 * n as f64 * l * l - 1e-9).ceil().max(1.0) as usize
}

/// Draws `num_gates` uniformly random two-qubit Cliffords on uniformly random qubit pairs.
pub fn sample_random_encoder(n: usize, num_gates: usize, seed: u64) -> Result<CliffordCircuit> {
    if n < 2 {
        return Err(invalid("n", format!("need at least 2 qubits, got {n}")));
    }
    if num_gates == 0 {
        return Err(invalid("num_gates", "need at least one gate"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gates = (0..num_gates)
        .map(|_| {
            let index = rng.random_range(0..TWO_QUBIT_CLIFFORD_COUNT) as u16;
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            CliffordGate::TwoQubit { index, a, b }
        })
        .collect();
    Ok(CliffordCircuit { n, gates, seed })
}

impl CliffordCircuit {
    pub fn new(n: usize, gates: Vec<CliffordGate>, seed: u64) -> Result<Self> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(Self { n, gates, seed })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
            seed: 0,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Circuit implementing `U^-1` up to phase.
    pub fn inverse(&self) -> CliffordCircuit {
        CliffordCircuit {
            n: self.n,
            gates: self.gates.iter().rev().map(CliffordGate::inverse).collect(),
            seed: self.seed,
        }
    }

    /// `U P U^-1` with phase dropped.
    pub fn conjugate_pauli(&self, p: &PauliString) -> Result<PauliString> {
        check_dim(self.n, p.num_qubits())?;
        let mut out = p.clone();
        for g in &self.gates {
            g.conjugate_in_place(&mut out);
        }
        Ok(out)
    }

    /// Writes `n=<n> seed=<seed>` followed by one `<index> <a> <b>` line per gate.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n={} seed={}", self.n, self.seed)?;
        for g in &self.gates {
            let partner = if g.qubits().0 == 0 { 1 } else { 0 };
            if let CliffordGate::TwoQubit { index, a, b } = g.to_indexed(partner) {
                writeln!(w, "{index} {a} {b}")?;
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty circuit file".into()))?
            .map_err(|e| Error::Format(e.to_string()))?;
        let mut n = None;
        let mut seed = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("n", v)) => n = v.parse::<usize>().ok(),
                Some(("seed", v)) => seed = v.parse::<u64>().ok(),
                _ => return Err(Error::Format(format!("bad header field {field:?}"))),
            }
        }
        let (n, seed) = n
            .zip(seed)
            .ok_or_else(|| Error::Format(format!("bad circuit header {header:?}")))?;
        let mut gates = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::Format(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Format(format!("bad gate line {line:?}: {e}")))?;
            let [index, a, b] = nums[..] else {
                return Err(Error::Format(format!("bad gate line {line:?}")));
            };
            if index >= TWO_QUBIT_CLIFFORD_COUNT {
                return Err(Error::Format(format!("clifford index {index} out of range")));
            }
            gates.push(CliffordGate::TwoQubit {
                index: index as u16,
                a,
                b,
            });
        }
        Self::new(n, gates, seed)
    }
}

impl fmt::Display for CliffordCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Evolved `Z` checks of the measured qubits, one row per check in `[x | z]` layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n: usize,
    k: usize,
    encoder_seed: u64,
    num_gates: usize,
    measured: Vec<usize>,
    checks: Vec<PauliString>,
    matrix: BitMatrix,
}

/// Default measured set: the last `n - k` qubits.
pub fn default_measured_qubits(n: usize, k: usize) -> Vec<usize> {
    (k..n).collect()
}

pub fn build_parity_check(circuit: &CliffordCircuit, measured: &[usize]) -> Result<ParityCheckMatrix> {
    let n = circuit.num_qubits();
    let mut seen = vec![false; n];
    for &q in measured {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, size: n });
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::DuplicateIndex(q));
        }
    }
    if measured.is_empty() || measured.len() >= n {
        return Err(invalid(
            "measured_qubits",
            format!("need between 1 and {} measured qubits, got {}", n - 1, measured.len()),
        ));
    }
    let checks = measured
        .iter()
        .map(|&q| circuit.conjugate_pauli(&PauliString::single(n, q, Pauli::Z)?))
        .collect::<Result<Vec<_>>>()?;
    let mut matrix = BitMatrix::zeros(checks.len(), 2 * n);
    for (r, c) in checks.iter().enumerate() {
        for q in c.support() {
            let p = c.get_unchecked(q);
            if p.x() {
                matrix.set(r, q, true)?;
            }
            if p.z() {
                matrix.set(r, n + q, true)?;
            }
        }
    }
    Ok(ParityCheckMatrix {
        n,
        k: n - measured.len(),
        encoder_seed: circuit.seed(),
        num_gates: circuit.len(),
        measured: measured.to_vec(),
        checks,
        matrix,
    })
}

impl ParityCheckMatrix {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_logical(&self) -> usize {
        self.k
    }

    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    /// Seed of the encoder this matrix was derived from.
    pub fn encoder_seed(&self) -> u64 {
        self.encoder_seed
    }

    pub fn encoder_gates(&self) -> usize {
        self.num_gates
    }

    pub fn measured_qubits(&self) -> &[usize] {
        &self.measured
    }

    pub fn checks(&self) -> &[PauliString] {
        &self.checks
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Bit `i` is the symplectic product of check `i` with `e`.
    pub fn syndrome(&self, e: &PauliString) -> Result<BitString> {
        check_dim(self.n, e.num_qubits())?;
        let bits: Vec<bool> = self
            .checks
            .iter()
            .map(|c| c.symplectic_product_unchecked(e))
            .collect();
        Ok(BitString::from_bools(&bits))
    }

    /// Syndrome contributions of every single-qubit error, for incremental evaluation.
    pub fn syndrome_columns(&self) -> SyndromeColumns {
        let m = self.checks.len();
        let stride = words_for(m);
        let mut data = vec![0u64; self.n * 4 * stride];
        for (i, c) in self.checks.iter().enumerate() {
            for q in c.support() {
                let p = c.get_unchecked(q);
                for e in Pauli::ERRORS {
                    // sp(check, E_q) on a single qubit
                    if (p.x() & e.z()) ^ (p.z() & e.x()) {
                        let slot = (q * 4 + e.code() as usize) * stride;
                        data[slot + i / 64] |= 1 << (i % 64);
                    }
                }
            }
        }
        SyndromeColumns {
            n: self.n,
            m,
            stride,
            data,
        }
    }
}

/// `column(q, P)` is the syndrome of the single-qubit error `P` on qubit `q`.
#[derive(Debug, Clone)]
pub struct SyndromeColumns {
    n: usize,
    m: usize,
    stride: usize,
    data: Vec<u64>,
}

impl SyndromeColumns {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn syndrome_len(&self) -> usize {
        self.m
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn column(&self, qubit: usize, p: Pauli) -> &[u64] {
        let slot = (qubit * 4 + p.code() as usize) * self.stride;
        &self.data[slot..slot + self.stride]
    }

    pub fn syndrome_of(&self, e: &PauliString) -> Result<BitString> {
        check_dim(self.n, e.num_qubits())?;
        let mut s = BitString::zeros(self.m);
        for q in e.support() {
            s.xor_assign_words(self.column(q, e.get_unchecked(q)));
        }
        Ok(s)
    }
}

/// Componentwise XOR of a syndrome with a measurement outcome word.
pub fn apply_measurement_update(syndrome: &BitString, outcome: &BitString) -> Result<BitString> {
    syndrome.xor(outcome)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateCost {
    pub overhead_per_pair: f64,
    pub expected_cnots: f64,
    pub expected_single_qubit: f64,
}

/// Qubit overhead `3(n/k - 1)` and average syndrome-extraction gate counts.
pub fn gate_cost_estimate(n: usize, k: usize) -> Result<GateCost> {
    if k < 1 || k >= n {
        return Err(invalid("k", format!("need 1 <= k < n, got k={k}, n={n}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    Ok(GateCost {
        overhead_per_pair: 3.0 * (nf / kf - 1.0),
        expected_cnots: (nf - kf) * (3.0 * nf / 4.0),
        expected_single_qubit: (nf - kf) * (7.0 * nf / 2.0),
    })
}
