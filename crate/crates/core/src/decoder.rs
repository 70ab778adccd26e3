//! Syndrome lookup tables built by guessing noise patterns in likelihood order.
//!
//! Patterns are enumerated lightest first (see [`crate::noise::enumerate_patterns`])
//! and each one is stored only if its syndrome has not been claimed yet, so the
//! table maps every reachable syndrome to a minimum-weight representative.
//!
//! A weight class is split into shards by its first two support positions.
//! Shards are scanned in parallel against the read-only table of lighter
//! patterns and merged back in enumeration order, which keeps the build
//! deterministic for any thread count.

use std::hash::Hasher;
use std::io::{Read, Write};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use rustc_hash::FxHasher;

use crate::clifford::{default_measured_qubits, ParityCheckMatrix, SyndromeColumns};
use crate::error::{check_dim, invalid, Error, Result};
use crate::noise::{cumulative_pattern_count, exact_pattern_count, next_codes, next_combination, DepolarizingParams};
use crate::pauli::{words_for, BitString, Pauli, PauliString};

/// File magic of the serialized table.
pub const LUT_MAGIC: &[u8; 8] = b"PGRANDv1";

const EMPTY: u32 = u32::MAX;

/// Open-addressing index from packed syndrome words to entry numbers.
#[derive(Debug, Clone)]
struct SyndromeIndex {
    stride: usize,
    keys: Vec<u64>,
    slots: Vec<u32>,
    shift: u32,
}

impl SyndromeIndex {
    fn new(stride: usize) -> Self {
        let mut index = Self {
            stride,
            keys: Vec::new(),
            slots: Vec::new(),
            shift: 0,
        };
        index.resize(16);
        index
    }

    fn len(&self) -> usize {
        self.keys.len() / self.stride.max(1)
    }

    #[inline]
    fn key(&self, i: u32) -> &[u64] {
        let i = i as usize * self.stride;
        &self.keys[i..i + self.stride]
    }

    #[inline]
    fn home(&self, key: &[u64]) -> usize {
        let mut h = FxHasher::default();
        for &w in key {
            h.write_u64(w);
        }
        (h.finish().wrapping_mul(0x9E37_79B9_7F4A_7C15) >> self.shift) as usize
    }

    fn resize(&mut self, capacity: usize) {
        self.slots = vec![EMPTY; capacity];
        self.shift = 64 - capacity.trailing_zeros();
        let mask = capacity - 1;
        for i in 0..self.len() as u32 {
            let mut pos = self.home(self.key(i));
            while self.slots[pos] != EMPTY {
                pos = (pos + 1) & mask;
            }
            self.slots[pos] = i;
        }
    }

    #[inline]
    fn find(&self, key: &[u64]) -> Option<u32> {
        let mask = self.slots.len() - 1;
        let mut pos = self.home(key);
        loop {
            match self.slots[pos] {
                EMPTY => return None,
                i if self.key(i) == key => return Some(i),
                _ => pos = (pos + 1) & mask,
            }
        }
    }

    /// Inserts `key` unless present; returns whether it was new.
    #[inline]
    fn insert(&mut self, key: &[u64]) -> bool {
        if 2 * (self.len() + 1) > self.slots.len() {
            self.resize(self.slots.len() * 2);
        }
        let mask = self.slots.len() - 1;
        let mut pos = self.home(key);
        loop {
            match self.slots[pos] {
                EMPTY => {
                    self.slots[pos] = self.len() as u32;
                    self.keys.extend_from_slice(key);
                    return true;
                }
                i if self.key(i) == key => return false,
                _ => pos = (pos + 1) & mask,
            }
        }
    }
}

/// Where a table came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub encoder_seed: u64,
    pub num_gates: usize,
    pub measured_qubits: Vec<usize>,
}

/// Knobs for [`build_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Upper bound on the table's memory footprint in bytes.
    pub memory_budget_bytes: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            memory_budget_bytes: 8 << 30,
        }
    }
}

/// Map from syndrome to the most likely (lightest, first enumerated) error pattern.
#[derive(Debug, Clone)]
pub struct SyndromeTable {
    n: usize,
    k: usize,
    t: usize,
    index: SyndromeIndex,
    pattern_stride: usize,
    patterns: Vec<u64>,
    patterns_seen: Vec<u128>,
    patterns_stored: Vec<u64>,
    provenance: Provenance,
    build_p: Option<f64>,
}

impl SyndromeTable {
    fn with_identity(n: usize, k: usize, provenance: Provenance) -> Self {
        let m = n - k;
        let mut table = Self {
            n,
            k,
            t: 0,
            index: SyndromeIndex::new(words_for(m)),
            pattern_stride: 2 * words_for(n),
            patterns: Vec::new(),
            patterns_seen: vec![1],
            patterns_stored: vec![0],
            provenance,
            build_p: None,
        };
        let zero = vec![0u64; words_for(m)];
        let id = vec![0u64; table.pattern_stride];
        table.push(&zero, &id, 0);
        table
    }

    fn push(&mut self, syndrome: &[u64], pattern: &[u64], weight: usize) -> bool {
        if self.index.insert(syndrome) {
            self.patterns.extend_from_slice(pattern);
            self.patterns_stored[weight] += 1;
            true
        } else {
            false
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_logical(&self) -> usize {
        self.k
    }

    pub fn syndrome_len(&self) -> usize {
        self.n - self.k
    }

    /// Largest enumerated weight.
    pub fn max_weight(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Depolarizing parameter the table was built for, when known.
    pub fn build_p(&self) -> Option<f64> {
        self.build_p
    }

    pub fn patterns_seen(&self) -> &[u128] {
        &self.patterns_seen
    }

    pub fn patterns_stored(&self) -> &[u64] {
        &self.patterns_stored
    }

    fn pattern(&self, entry: u32) -> PauliString {
        let words = words_for(self.n);
        let base = entry as usize * self.pattern_stride;
        PauliString::from_words(
            self.n,
            self.patterns[base..base + words].to_vec(),
            self.patterns[base + words..base + 2 * words].to_vec(),
        )
    }

    fn is_full(&self) -> bool {
        let m = self.syndrome_len();
        m < 64 && self.len() as u64 == 1u64 << m
    }

    /// Stored pattern for `s`, or `None` when no pattern of weight `<= t` produces it.
    pub fn decode(&self, s: &BitString) -> Result<Option<PauliString>> {
        check_dim(self.syndrome_len(), s.len())?;
        Ok(self.index.find(s.words()).map(|i| self.pattern(i)))
    }

    /// `patterns_stored[w] / N_w`; zero above the weight cap.
    pub fn empirical_correctable_fraction(&self, w: usize) -> f64 {
        if w > self.t || w > self.n {
            return 0.0;
        }
        let total = exact_pattern_count(self.n, w).to_f64().unwrap_or(f64::INFINITY);
        self.patterns_stored[w] as f64 / total
    }

    /// All entries as `(syndrome, pattern)`, sorted by syndrome value.
    pub fn entries(&self) -> Vec<(BitString, PauliString)> {
        let m = self.syndrome_len();
        let mut order: Vec<u32> = (0..self.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| self.index.key(a).iter().rev().cmp(self.index.key(b).iter().rev()));
        order
            .into_iter()
            .map(|i| (BitString::from_words(m, self.index.key(i)), self.pattern(i)))
            .collect()
    }

    /// Continues enumeration up to weight `t`, calling `on_weight` after each finished class.
    pub fn extend_to<F>(
        &mut self,
        columns: &SyndromeColumns,
        t: usize,
        opts: &BuildOptions,
        mut on_weight: F,
    ) -> Result<()>
    where
        F: FnMut(&SyndromeTable) -> Result<()>,
    {
        check_dim(self.n, columns.num_qubits())?;
        check_dim(self.syndrome_len(), columns.syndrome_len())?;
        if t > self.n {
            return Err(invalid("t", format!("need t <= n, got t={t}, n={}", self.n)));
        }
        check_budget(self.n, self.k, t, opts)?;
        for w in self.t + 1..=t {
            self.patterns_seen.push(0);
            self.patterns_stored.push(0);
            if self.is_full() {
                self.patterns_seen[w] = exact_pattern_count(self.n, w).to_u128().unwrap_or(u128::MAX);
            } else {
                self.extend_weight(columns, w);
            }
            self.t = w;
            on_weight(self)?;
        }
        Ok(())
    }

    fn extend_weight(&mut self, columns: &SyndromeColumns, w: usize) {
        let n = self.n;
        let prefixes = shard_prefixes(n, w);
        let this = &*self;
        let shards: Vec<Shard> = prefixes
            .par_iter()
            .map(|prefix| scan_shard(this, columns, w, prefix))
            .collect();
        for shard in shards {
            self.patterns_seen[w] += shard.seen;
            let ks = self.index.stride;
            for (key, pat) in shard
                .keys
                .chunks_exact(ks)
                .zip(shard.patterns.chunks_exact(self.pattern_stride))
            {
                self.push(key, pat, w);
            }
        }
    }

    /// Little-endian binary image; see [`LUT_MAGIC`].
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let num_gates = u32::try_from(self.provenance.num_gates).unwrap_or(u32::MAX);
        out.write_all(LUT_MAGIC)?;
        out.write_all(&(self.n as u32).to_le_bytes())?;
        out.write_all(&(self.k as u32).to_le_bytes())?;
        out.write_all(&(self.t as u32).to_le_bytes())?;
        out.write_all(&self.provenance.encoder_seed.to_le_bytes())?;
        out.write_all(&num_gates.to_le_bytes())?;
        out.write_all(&(self.len() as u32).to_le_bytes())?;
        for (s, e) in self.entries() {
            out.write_all(&s.to_le_bytes())?;
            out.write_all(&e.to_code_bytes())?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        buf
    }

    /// Reads a table; counters are rebuilt assuming a complete build up to the stored `t`.
    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut buf = Vec::new();
        input
            .read_to_end(&mut buf)
            .map_err(|e| Error::Format(e.to_string()))?;
        Self::from_bytes(&buf)
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self> {
        let mut cur = buf;
        let mut take = |len: usize| -> Result<&[u8]> {
            if cur.len() < len {
                return Err(Error::Format("truncated lookup table".into()));
            }
            let (head, tail) = cur.split_at(len);
            cur = tail;
            Ok(head)
        };
        if take(8)? != LUT_MAGIC {
            return Err(Error::Format("bad lookup table magic".into()));
        }
        let u32_at = |b: &[u8]| u32::from_le_bytes(b.try_into().expect("4 bytes")) as usize;
        let n = u32_at(take(4)?);
        let k = u32_at(take(4)?);
        let t = u32_at(take(4)?);
        let seed = u64::from_le_bytes(take(8)?.try_into().expect("8 bytes"));
        let num_gates = u32_at(take(4)?);
        let count = u32_at(take(4)?);
        if k >= n || t > n {
            return Err(Error::Format(format!("inconsistent header n={n} k={k} t={t}")));
        }
        let m = n - k;
        let provenance = Provenance {
            encoder_seed: seed,
            num_gates,
            measured_qubits: default_measured_qubits(n, k),
        };
        let mut table = Self::with_identity(n, k, provenance);
        table.patterns_stored = vec![0; t + 1];
        table.patterns_seen = (0..=t)
            .map(|w| exact_pattern_count(n, w).to_u128().unwrap_or(u128::MAX))
            .collect();
        table.t = t;
        table.index = SyndromeIndex::new(words_for(m));
        table.patterns.clear();
        let (sb, pb) = (m.div_ceil(8), (2 * n).div_ceil(8));
        for _ in 0..count {
            let s = BitString::from_le_bytes(m, take(sb)?)?;
            let e = PauliString::from_code_bytes(n, take(pb)?)?;
            let w = e.weight();
            if w > t {
                return Err(Error::Format(format!("stored pattern {e} heavier than t={t}")));
            }
            let mut words = e.x_words().to_vec();
            words.extend_from_slice(e.z_words());
            if !table.push(s.words(), &words, w) {
                return Err(Error::Format(format!("duplicate syndrome {s}")));
            }
        }
        if !cur.is_empty() {
            return Err(Error::Format("trailing bytes after lookup table".into()));
        }
        Ok(table)
    }
}

fn check_budget(n: usize, k: usize, t: usize, opts: &BuildOptions) -> Result<()> {
    let m = n - k;
    let reachable = cumulative_pattern_count(n, t).to_u128().unwrap_or(u128::MAX);
    let entries = if m < 127 { reachable.min(1u128 << m) } else { reachable };
    let per_entry = 8 * (words_for(m) + 2 * words_for(n)) as u128 + 8;
    let required = entries.saturating_mul(per_entry);
    if required > opts.memory_budget_bytes as u128 {
        return Err(Error::ResourceLimit {
            required_bytes: required,
            budget_bytes: opts.memory_budget_bytes as u128,
        });
    }
    Ok(())
}

fn shard_prefixes(n: usize, w: usize) -> Vec<Vec<usize>> {
    match w {
        0 => vec![vec![]],
        1 => (0..n).map(|q| vec![q]).collect(),
        _ => (0..=n - w)
            .flat_map(|a| (a + 1..=n - w + 1).map(move |b| vec![a, b]))
            .collect(),
    }
}

struct Shard {
    seen: u128,
    keys: Vec<u64>,
    patterns: Vec<u64>,
}

fn scan_shard(table: &SyndromeTable, columns: &SyndromeColumns, w: usize, prefix: &[usize]) -> Shard {
    let n = table.n;
    let stride = columns.stride();
    let mut local = SyndromeIndex::new(stride);
    let mut shard = Shard {
        seen: 0,
        keys: Vec::new(),
        patterns: Vec::new(),
    };
    let rest = w - prefix.len();
    let base = prefix.last().map_or(0, |&q| q + 1);
    let mut suffix: Vec<usize> = (0..rest).collect();
    let mut support = vec![0usize; w];
    support[..prefix.len()].copy_from_slice(prefix);
    let mut s = vec![0u64; stride];
    let xor = |s: &mut [u64], col: &[u64]| {
        for (a, b) in s.iter_mut().zip(col) {
            *a ^= b;
        }
    };
    loop {
        for (slot, &off) in support[prefix.len()..].iter_mut().zip(&suffix) {
            *slot = base + off;
        }
        s.iter_mut().for_each(|x| *x = 0);
        for &q in &support {
            xor(&mut s, columns.column(q, Pauli::X));
        }
        let mut codes = vec![Pauli::X; w];
        loop {
            shard.seen += 1;
            if table.index.find(&s).is_none() && local.insert(&s) {
                shard.keys.extend_from_slice(&s);
                let mut pattern = PauliString::identity(n);
                for (&q, &p) in support.iter().zip(&codes) {
                    pattern.set_unchecked(q, p);
                }
                shard.patterns.extend_from_slice(pattern.x_words());
                shard.patterns.extend_from_slice(pattern.z_words());
            }
            let Some(i) = next_codes(&mut codes) else { break };
            // X->Z adds col(Y), Z->Y adds col(X), wrapped Y->X adds col(Z)
            let delta = if codes[i] == Pauli::Z { Pauli::Y } else { Pauli::X };
            xor(&mut s, columns.column(support[i], delta));
            for &q in &support[i + 1..] {
                xor(&mut s, columns.column(q, Pauli::Z));
            }
        }
        if rest == 0 || !next_combination(&mut suffix, n - base) {
            break;
        }
    }
    shard
}

/// Builds the table for `h`, enumerating every pattern of weight `<= t`.
pub fn build_table(
    h: &ParityCheckMatrix,
    t: usize,
    noise: &DepolarizingParams,
    opts: &BuildOptions,
) -> Result<SyndromeTable> {
    build_table_with(h, t, noise, opts, |_| Ok(()))
}

/// [`build_table`] with a hook after each completed weight class (used for checkpoints).
pub fn build_table_with<F>(
    h: &ParityCheckMatrix,
    t: usize,
    noise: &DepolarizingParams,
    opts: &BuildOptions,
    on_weight: F,
) -> Result<SyndromeTable>
where
    F: FnMut(&SyndromeTable) -> Result<()>,
{
    check_dim(h.num_qubits(), noise.num_qubits())?;
    let mut table = SyndromeTable::with_identity(h.num_qubits(), h.num_logical(), provenance_of(h));
    table.build_p = Some(noise.p());
    table.extend_to(&h.syndrome_columns(), t, opts, on_weight)?;
    Ok(table)
}

/// Resumes a partially built table (a complete table for some smaller `t`).
pub fn resume_table<F>(
    mut partial: SyndromeTable,
    h: &ParityCheckMatrix,
    t: usize,
    noise: &DepolarizingParams,
    opts: &BuildOptions,
    on_weight: F,
) -> Result<SyndromeTable>
where
    F: FnMut(&SyndromeTable) -> Result<()>,
{
    check_dim(h.num_qubits(), partial.n)?;
    check_dim(h.num_logical(), partial.k)?;
    if partial.provenance.encoder_seed != h.encoder_seed() || partial.provenance.num_gates != h.encoder_gates() {
        return Err(invalid("partial", "checkpoint belongs to a different encoder"));
    }
    if partial.t > t {
        return Err(invalid("t", format!("checkpoint already covers t={}", partial.t)));
    }
    partial.provenance = provenance_of(h);
    partial.build_p = Some(noise.p());
    partial.extend_to(&h.syndrome_columns(), t, opts, on_weight)?;
    Ok(partial)
}

fn provenance_of(h: &ParityCheckMatrix) -> Provenance {
    Provenance {
        encoder_seed: h.encoder_seed(),
        num_gates: h.encoder_gates(),
        measured_qubits: h.measured_qubits().to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_parity_check, sample_random_encoder, CliffordCircuit};
    use crate::noise::enumerate_patterns;

    fn code(n: usize, k: usize, gates: usize, seed: u64) -> ParityCheckMatrix {
        let c = sample_random_encoder(n, gates, seed).unwrap();
        build_parity_check(&c, &default_measured_qubits(n, k)).unwrap()
    }

    fn noise(n: usize) -> DepolarizingParams {
        DepolarizingParams::new(n, 0.01).unwrap()
    }

    #[test]
    fn t_zero_holds_only_identity() {
        let h = code(6, 2, 20, 1);
        let t = build_table(&h, 0, &noise(6), &BuildOptions::default()).unwrap();
        assert_eq!(t.len(), 1);
        let e = t.decode(&BitString::zeros(4)).unwrap().unwrap();
        assert!(e.is_identity());
        assert_eq!(t.empirical_correctable_fraction(0), 1.0);
        assert_eq!(t.empirical_correctable_fraction(1), 0.0);
    }

    #[test]
    fn unique_weight_one_syndromes_are_stored() {
        let h = code(5, 1, 30, 4);
        let table = build_table(&h, 5, &noise(5), &BuildOptions::default()).unwrap();
        assert!(table.len() <= 16);
        let singles: Vec<PauliString> = enumerate_patterns(5, 1).unwrap().skip(1).collect();
        for e in &singles {
            let s = h.syndrome(e).unwrap();
            let sharing = singles.iter().filter(|o| h.syndrome(o).unwrap() == s).count();
            let zero = s.is_zero();
            if sharing == 1 && !zero {
                assert_eq!(table.decode(&s).unwrap().as_ref(), Some(e));
            }
        }
        let total: u64 = table.patterns_stored().iter().sum();
        assert_eq!(total as usize, table.len());
    }

    #[test]
    fn weight_three_count_at_n32() {
        let h = code(32, 12, 120, 9);
        let table = build_table(&h, 3, &noise(32), &BuildOptions::default()).unwrap();
        assert_eq!(table.patterns_seen()[3], 133_920);
        assert_eq!(table.patterns_seen()[2], 4_464);
    }

    #[test]
    fn decode_contract() {
        let h = code(10, 4, 50, 2);
        let table = build_table(&h, 1, &noise(10), &BuildOptions::default()).unwrap();
        let e: PauliString = "IIIYIIIIII".parse().unwrap();
        let s = h.syndrome(&e).unwrap();
        let got = table.decode(&s).unwrap().unwrap();
        assert_eq!(h.syndrome(&got).unwrap(), s);
        assert!(table.decode(&BitString::zeros(5)).is_err());
        // find a syndrome no weight-<=1 pattern reaches
        let missing = (0..64u32)
            .map(|v| BitString::from_bools(&(0..6).map(|i| v >> i & 1 == 1).collect::<Vec<_>>()))
            .find(|s| table.decode(s).unwrap().is_none());
        assert!(missing.is_some());
    }

    #[test]
    fn budget_is_enforced() {
        let h = code(20, 1, 60, 3);
        let opts = BuildOptions {
            memory_budget_bytes: 1024,
        };
        assert!(matches!(
            build_table(&h, 3, &noise(20), &opts),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn serialization_round_trip_and_header() {
        let h = code(9, 3, 40, 5);
        let table = build_table(&h, 2, &noise(9), &BuildOptions::default()).unwrap();
        let bytes = table.to_bytes();
        assert_eq!(&bytes[..8], b"PGRANDv1");
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 9);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 3);
        assert_eq!(u32::from_le_bytes(bytes[16..20].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(bytes[20..28].try_into().unwrap()), 5);
        assert_eq!(u32::from_le_bytes(bytes[28..32].try_into().unwrap()), 40);
        let count = u32::from_le_bytes(bytes[32..36].try_into().unwrap()) as usize;
        assert_eq!(count, table.len());
        assert_eq!(bytes.len(), 36 + count * (1 + 3));
        let back = SyndromeTable::from_bytes(&bytes).unwrap();
        assert_eq!(back.to_bytes(), bytes);
        assert_eq!(back.patterns_stored(), table.patterns_stored());
        assert!(SyndromeTable::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(SyndromeTable::from_bytes(&bad).is_err());
    }

    #[test]
    fn resume_matches_single_build() {
        let h = code(12, 4, 60, 8);
        let full = build_table(&h, 3, &noise(12), &BuildOptions::default()).unwrap();
        let partial = build_table(&h, 1, &noise(12), &BuildOptions::default()).unwrap();
        let reloaded = SyndromeTable::from_bytes(&partial.to_bytes()).unwrap();
        let mut classes = Vec::new();
        let resumed = resume_table(reloaded, &h, 3, &noise(12), &BuildOptions::default(), |t| {
            classes.push(t.max_weight());
            Ok(())
        })
        .unwrap();
        assert_eq!(classes, vec![2, 3]);
        assert_eq!(resumed.to_bytes(), full.to_bytes());
        let other = code(12, 4, 60, 9);
        let p2 = build_table(&h, 1, &noise(12), &BuildOptions::default()).unwrap();
        assert!(resume_table(p2, &other, 3, &noise(12), &BuildOptions::default(), |_| Ok(())).is_err());
    }

    #[test]
    fn full_table_short_circuits_enumeration() {
        let h = code(10, 7, 50, 6);
        let table = build_table(&h, 4, &noise(10), &BuildOptions::default()).unwrap();
        assert_eq!(table.len(), 8);
        assert_eq!(table.patterns_seen()[4], 210 * 81);
    }

    #[test]
    fn identity_encoder_stores_z_free_singles() {
        // without gates the checks are Z on the measured qubits: only X/Y there flip syndromes
        let c = CliffordCircuit::empty(3);
        let h = build_parity_check(&c, &[1, 2]).unwrap();
        let table = build_table(&h, 3, &noise(3), &BuildOptions::default()).unwrap();
        assert_eq!(table.len(), 4);
        let s: BitString = "10".parse().unwrap();
        assert_eq!(table.decode(&s).unwrap().unwrap().to_string(), "IXI");
    }
}
