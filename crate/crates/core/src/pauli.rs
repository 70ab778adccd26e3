//! Phase-free Pauli strings and dense GF(2) matrices.
//!
//! A Pauli string on `n` qubits is stored as two packed bit vectors, one for
//! the X component and one for the Z component of every qubit. Phases are
//! never tracked: every algorithm in this crate depends only on the error
//! pattern, and a global phase does not change a measured syndrome.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{check_dim, Error, Result};

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Single-qubit Pauli operator, discriminant equal to its canonical 2-bit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Pauli {
    I = 0,
    X = 1,
    Z = 2,
    Y = 3,
}

impl Pauli {
    /// Non-identity Paulis in enumeration order.
    pub const ERRORS: [Pauli; 3] = [Pauli::X, Pauli::Z, Pauli::Y];

    pub fn from_bits(x: bool, z: bool) -> Self {
        Self::from_code(x as u8 | ((z as u8) << 1))
    }

    pub fn from_code(code: u8) -> Self {
        match code & 3 {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Z,
            _ => Pauli::Y,
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn x(self) -> bool {
        self.code() & 1 == 1
    }

    pub fn z(self) -> bool {
        self.code() & 2 == 2
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Z => 'Z',
            Pauli::Y => 'Y',
        }
    }
}

/// Packed bit string of arbitrary length. Used for syndromes and measurement words.
///
/// Bit `i` lives in word `i / 64` at position `i % 64`; unused high bits of the
/// last word are always zero so that equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    len: usize,
    words: SmallVec<[u64; 4]>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: SmallVec::from_elem(0, words_for(len)),
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut out = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                out.words[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    pub(crate) fn from_words(len: usize, words: &[u64]) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        let mut out = Self {
            len,
            words: SmallVec::from_slice(words),
        };
        out.mask_tail();
        out
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> Result<bool> {
        if i >= self.len {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.len,
            });
        }
        Ok(self.words[i / 64] >> (i % 64) & 1 == 1)
    }

    pub fn set(&mut self, i: usize, value: bool) -> Result<()> {
        if i >= self.len {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.len,
            });
        }
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        check_dim(self.len, other.len)?;
        let mut out = self.clone();
        out.xor_assign_words(&other.words);
        Ok(out)
    }

    #[inline]
    pub(crate) fn xor_assign_words(&mut self, words: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(words) {
            *a ^= b;
        }
    }

    /// Little-endian byte image: bit `i` is bit `i % 8` of byte `i / 8`.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        for i in 0..nbytes {
            out.push((self.words[i / 8] >> ((i % 8) * 8)) as u8);
        }
        out
    }

    pub fn from_le_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        check_dim(len.div_ceil(8), bytes.len())?;
        let mut out = Self::zeros(len);
        for (i, &b) in bytes.iter().enumerate() {
            out.words[i / 8] |= (b as u64) << ((i % 8) * 8);
        }
        let before = out.clone();
        out.mask_tail();
        if out != before {
            return Err(Error::Format("bits set beyond declared length".into()));
        }
        Ok(out)
    }

    /// Ordering by the unsigned integer whose bit `i` has weight `2^i`.
    pub fn cmp_value(&self, other: &BitString) -> std::cmp::Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            let bit = self.words[i / 64] >> (i % 64) & 1;
            f.write_str(if bit == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Format(format!("unexpected bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }
}

/// An n-qubit Pauli error pattern with phase dropped.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    /// A single Pauli acting on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, p: Pauli) -> Result<Self> {
        let mut out = Self::identity(n);
        out.set(qubit, p)?;
        Ok(out)
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut out = Self::identity(paulis.len());
        for (q, &p) in paulis.iter().enumerate() {
            out.set_unchecked(q, p);
        }
        out
    }

    pub(crate) fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>) -> Self {
        debug_assert_eq!(x.len(), words_for(n));
        debug_assert_eq!(z.len(), words_for(n));
        Self { n, x, z }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn get(&self, qubit: usize) -> Result<Pauli> {
        if qubit >= self.n {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                size: self.n,
            });
        }
        Ok(self.get_unchecked(qubit))
    }

    #[inline]
    pub(crate) fn get_unchecked(&self, qubit: usize) -> Pauli {
        let (w, b) = (qubit / 64, qubit % 64);
        Pauli::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, p: Pauli) -> Result<()> {
        if qubit >= self.n {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                size: self.n,
            });
        }
        self.set_unchecked(qubit, p);
        Ok(())
    }

    #[inline]
    pub(crate) fn set_unchecked(&mut self, qubit: usize, p: Pauli) {
        let (w, mask) = (qubit / 64, 1u64 << (qubit % 64));
        if p.x() {
            self.x[w] |= mask;
        } else {
            self.x[w] &= !mask;
        }
        if p.z() {
            self.z[w] |= mask;
        } else {
            self.z[w] &= !mask;
        }
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Qubits on which the string acts non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.get_unchecked(q) != Pauli::I)
            .collect()
    }

    /// Phase-free product `P·Q`.
    pub fn compose(&self, other: &PauliString) -> Result<PauliString> {
        check_dim(self.n, other.n)?;
        let mut out = self.clone();
        out.compose_assign_unchecked(other);
        Ok(out)
    }

    #[inline]
    pub(crate) fn compose_assign_unchecked(&mut self, other: &PauliString) {
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
    }

    /// `false` when the two strings commute, `true` when they anticommute.
    pub fn symplectic_product(&self, other: &PauliString) -> Result<bool> {
        check_dim(self.n, other.n)?;
        Ok(self.symplectic_product_unchecked(other))
    }

    #[inline]
    pub(crate) fn symplectic_product_unchecked(&self, other: &PauliString) -> bool {
        let mut acc = 0u32;
        for i in 0..self.x.len() {
            acc ^= ((self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i])).count_ones();
        }
        acc & 1 == 1
    }

    /// Dense index: 2-bit code per qubit (I=00, X=01, Z=10, Y=11), qubit 0 in the low bits.
    pub fn to_code_bits(&self) -> BitString {
        let mut out = BitString::zeros(2 * self.n);
        for q in 0..self.n {
            let code = self.get_unchecked(q).code() as u64;
            out.words[(2 * q) / 64] |= code << ((2 * q) % 64);
        }
        out
    }

    pub fn from_code_bits(n: usize, bits: &BitString) -> Result<Self> {
        check_dim(2 * n, bits.len())?;
        let mut out = Self::identity(n);
        for q in 0..n {
            let code = (bits.words[(2 * q) / 64] >> ((2 * q) % 64)) & 3;
            out.set_unchecked(q, Pauli::from_code(code as u8));
        }
        Ok(out)
    }

    /// Canonical byte image used by the lookup-table file format.
    pub fn to_code_bytes(&self) -> Vec<u8> {
        self.to_code_bits().to_le_bytes()
    }

    pub fn from_code_bytes(n: usize, bytes: &[u8]) -> Result<Self> {
        Self::from_code_bits(n, &BitString::from_le_bytes(2 * n, bytes)?)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.get_unchecked(q).symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let paulis = s
            .chars()
            .map(|c| match c {
                'I' | 'i' | '_' => Ok(Pauli::I),
                'X' | 'x' => Ok(Pauli::X),
                'Y' | 'y' => Ok(Pauli::Y),
                'Z' | 'z' => Ok(Pauli::Z),
                other => Err(Error::Format(format!("unexpected Pauli symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_paulis(&paulis))
    }
}

/// Row-major packed binary matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn check(&self, r: usize, c: usize) -> Result<()> {
        if r >= self.rows {
            return Err(Error::IndexOutOfRange {
                index: r,
                size: self.rows,
            });
        }
        if c >= self.cols {
            return Err(Error::IndexOutOfRange {
                index: c,
                size: self.cols,
            });
        }
        Ok(())
    }

    pub fn get(&self, r: usize, c: usize) -> Result<bool> {
        self.check(r, c)?;
        Ok(self.data[r * self.stride + c / 64] >> (c % 64) & 1 == 1)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) -> Result<()> {
        self.check(r, c)?;
        let word = &mut self.data[r * self.stride + c / 64];
        let mask = 1u64 << (c % 64);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
        Ok(())
    }

    pub fn row_words(&self, r: usize) -> Result<&[u64]> {
        self.check(r, 0)?;
        Ok(&self.data[r * self.stride..(r + 1) * self.stride])
    }

    pub fn row(&self, r: usize) -> Result<BitString> {
        Ok(BitString::from_words(self.cols, self.row_words(r)?))
    }

    pub fn set_row(&mut self, r: usize, bits: &BitString) -> Result<()> {
        self.check(r, 0)?;
        check_dim(self.cols, bits.len())?;
        self.data[r * self.stride..(r + 1) * self.stride].copy_from_slice(bits.words());
        Ok(())
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) -> Result<()> {
        self.check(src, 0)?;
        self.check(dst, 0)?;
        if src == dst {
            self.data[dst * self.stride..(dst + 1) * self.stride].fill(0);
            return Ok(());
        }
        for i in 0..self.stride {
            let v = self.data[src * self.stride + i];
            self.data[dst * self.stride + i] ^= v;
        }
        Ok(())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) -> Result<()> {
        self.check(a, 0)?;
        self.check(b, 0)?;
        for i in 0..self.stride {
            self.data.swap(a * self.stride + i, b * self.stride + i);
        }
        Ok(())
    }

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| m.data[r * m.stride + c / 64] >> (c % 64) & 1 == 1)
            else {
                continue;
            };
            m.swap_rows(pivot, rank).expect("in range");
            for r in 0..m.rows {
                if r != rank && m.data[r * m.stride + c / 64] >> (c % 64) & 1 == 1 {
                    m.add_row(rank, r).expect("in range");
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, v: &BitString) -> Result<BitString> {
        check_dim(self.cols, v.len())?;
        let mut out = BitString::zeros(self.rows);
        for r in 0..self.rows {
            let row = &self.data[r * self.stride..(r + 1) * self.stride];
            let parity = row
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            if parity == 1 {
                out.set(r, true)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r).map_err(|_| fmt::Error)?)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(PauliString::identity(4).weight(), 0);
        assert_eq!(ps("XIZ").weight(), 2);
        assert_eq!(ps("YYYY").weight(), 4);
    }

    #[test]
    fn compose_examples() {
        assert!(ps("X").compose(&ps("X")).unwrap().is_identity());
        assert_eq!(ps("X").compose(&ps("Z")).unwrap(), ps("Y"));
        let p = ps("XYZI");
        assert_eq!(p.compose(&PauliString::identity(4)).unwrap(), p);
    }

    #[test]
    fn symplectic_examples() {
        assert!(ps("X").symplectic_product(&ps("Z")).unwrap());
        assert!(!ps("XI").symplectic_product(&ps("IZ")).unwrap());
        assert!(!ps("Y").symplectic_product(&ps("Y")).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            ps("XX").compose(&ps("X")),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(ps("XX").symplectic_product(&ps("XXX")).is_err());
    }

    #[test]
    fn display_round_trip_and_code_bits() {
        let p = ps("IXZY");
        assert_eq!(p.to_string(), "IXZY");
        // codes 0,1,2,3 at 2 bits each, qubit 0 lowest: 0b11_10_01_00
        assert_eq!(p.to_code_bytes(), vec![0b1110_0100]);
        assert_eq!(PauliString::from_code_bytes(4, &[0b1110_0100]).unwrap(), p);
    }

    #[test]
    fn wide_strings_cross_word_boundaries() {
        let mut p = PauliString::identity(130);
        p.set(0, Pauli::X).unwrap();
        p.set(64, Pauli::Y).unwrap();
        p.set(129, Pauli::Z).unwrap();
        assert_eq!(p.weight(), 3);
        assert_eq!(p.support(), vec![0, 64, 129]);
        let q = PauliString::single(130, 129, Pauli::X).unwrap();
        assert!(p.symplectic_product(&q).unwrap());
        assert!(p.get(130).is_err());
    }

    #[test]
    fn bitstring_xor_and_order() {
        let a: BitString = "1011".parse().unwrap();
        let b: BitString = "0110".parse().unwrap();
        assert_eq!(a.xor(&b).unwrap().to_string(), "1101");
        // "1000" is value 1, "0001" is value 8
        let one: BitString = "1000".parse().unwrap();
        let eight: BitString = "0001".parse().unwrap();
        assert_eq!(one.cmp_value(&eight), std::cmp::Ordering::Less);
        assert_eq!(a.to_le_bytes(), vec![0b1101]);
        assert!(BitString::from_le_bytes(4, &[0b1_0000]).is_err());
    }

    #[test]
    fn bitmatrix_bounds_and_rank() {
        let mut m = BitMatrix::zeros(3, 70);
        assert!(m.get(3, 0).is_err());
        assert!(m.set(0, 70, true).is_err());
        m.set(0, 1, true).unwrap();
        m.set(1, 69, true).unwrap();
        m.set(2, 1, true).unwrap();
        m.set(2, 69, true).unwrap();
        assert_eq!(m.rank(), 2);
        m.add_row(0, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 70));
        assert_eq!(m.row(2).unwrap(), m.row(1).unwrap());
        let v = BitString::from_bools(&(0..70).map(|i| i == 69).collect::<Vec<_>>());
        assert_eq!(m.mul_vec(&v).unwrap().to_string(), "011");
    }
}
