//! Boolean functions on `n ≤ 12` bits stored as truth tables.
//!
//! Inputs are addressed by their index `idx(x) = Σ x_i · 2^{n-i}`, so `x_1` is the
//! most significant bit. Coordinates are 1-based everywhere in the public API.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported number of input bits.
pub const MAX_BITS: usize = 12;

/// Hamming distance between two indices of the same length.
#[inline]
pub fn distance(a: u32, b: u32) -> u32 {
    (a ^ b).count_ones()
}

/// Bit mask selecting coordinate `i` (1-based, `x_1` most significant).
#[inline]
pub(crate) fn coordinate_mask(n: usize, i: usize) -> u32 {
    1 << (n - i)
}

/// An `n`-bit string, `x_1` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    n: usize,
    idx: u32,
}

impl BitString {
    pub fn new(n: usize, idx: u32) -> Result<Self> {
        if n == 0 || n > 31 || (idx as u64) >> n != 0 {
            return Err(Error::InvalidTruthTable(format!("index {idx} is not an {n}-bit string")));
        }
        Ok(BitString { n, idx })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn index(&self) -> u32 {
        self.idx
    }

    /// Value of coordinate `i` (1-based).
    pub fn bit(&self, i: usize) -> bool {
        self.idx & coordinate_mask(self.n, i) != 0
    }

    pub fn complement(&self) -> Self {
        let all = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        BitString { n: self.n, idx: !self.idx & all }
    }

    pub fn weight(&self) -> u32 {
        self.idx.count_ones()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 31 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::InvalidTruthTable(format!("`{s}` is not a bit string")));
        }
        let idx = s.bytes().fold(0u32, |acc, b| (acc << 1) | u32::from(b == b'1'));
        BitString::new(s.len(), idx)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Hamming distance between two bit strings of equal length.
pub fn hamming(x: &BitString, y: &BitString) -> Result<u32> {
    if x.n != y.n {
        return Err(Error::LengthMismatch(x.n, y.n));
    }
    Ok(distance(x.idx, y.idx))
}

/// Named function families accepted on the command line.
///
/// Grammar: `const0|const1|and|or|maj|parity[:<bitmask>]|raw:<n>:<hex>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descriptor {
    Const0,
    Const1,
    And,
    Or,
    Maj,
    /// Parity of the coordinates whose mask bit is set; `None` means all coordinates.
    Parity(Option<BitString>),
    Raw {
        n: usize,
        hex: String,
    },
}

impl Descriptor {
    /// Arity fixed by the descriptor itself, if any.
    pub fn arity(&self) -> Option<usize> {
        match self {
            Descriptor::Parity(Some(mask)) => Some(mask.len()),
            Descriptor::Raw { n, .. } => Some(*n),
            _ => None,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Descriptor::Const0 => "const0",
            Descriptor::Const1 => "const1",
            Descriptor::And => "and",
            Descriptor::Or => "or",
            Descriptor::Maj => "maj",
            Descriptor::Parity(_) => "parity",
            Descriptor::Raw { .. } => "raw",
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Parity(Some(mask)) => write!(f, "parity:{mask}"),
            Descriptor::Raw { n, hex } => write!(f, "raw:{n}:{hex}"),
            other => f.write_str(other.family()),
        }
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidDescriptor(s.to_string());
        let lower = s.trim().to_ascii_lowercase();
        let mut parts = lower.split(':');
        let head = parts.next().ok_or_else(bad)?;
        let rest: Vec<&str> = parts.collect();
        let d = match (head, rest.as_slice()) {
            ("const0", []) => Descriptor::Const0,
            ("const1", []) => Descriptor::Const1,
            ("and", []) => Descriptor::And,
            ("or", []) => Descriptor::Or,
            ("maj", []) => Descriptor::Maj,
            ("parity", []) => Descriptor::Parity(None),
            ("parity", [mask]) => Descriptor::Parity(Some(mask.parse().map_err(|_| bad())?)),
            ("raw", [n, hex]) => Descriptor::Raw { n: n.parse().map_err(|_| bad())?, hex: hex.to_string() },
            _ => return Err(bad()),
        };
        Ok(d)
    }
}

/// Preimages of 0 and 1, each in increasing index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preimages {
    pub zeros: Vec<u32>,
    pub ones: Vec<u32>,
}

/// Coefficients of `f(x) = b0 ⊕ b1 x1 ⊕ … ⊕ bn xn`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineCoefficients {
    pub b0: bool,
    /// `b[i-1]` is the coefficient of `x_i`.
    pub b: Vec<bool>,
    /// Number of nonzero `b_i`.
    pub m: usize,
}

impl AffineCoefficients {
    pub fn new(b0: bool, b: Vec<bool>) -> Self {
        let m = b.iter().filter(|&&v| v).count();
        AffineCoefficients { b0, b, m }
    }

    /// Evaluate the affine form on index `idx`.
    pub fn eval(&self, idx: u32) -> bool {
        let n = self.b.len();
        self.b.iter().enumerate().fold(self.b0, |acc, (k, &bk)| acc ^ (bk && idx & coordinate_mask(n, k + 1) != 0))
    }
}

/// A Boolean function on `n` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolFunc {
    n: usize,
    table: Vec<bool>,
}

impl BoolFunc {
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self> {
        check_arity(n)?;
        if table.len() != 1 << n {
            return Err(Error::InvalidTruthTable(format!("table of length {} for n={n}", table.len())));
        }
        Ok(BoolFunc { n, table })
    }

    /// Build from a predicate on the input index.
    pub fn from_fn(n: usize, f: impl Fn(u32) -> bool) -> Result<Self> {
        check_arity(n)?;
        Ok(BoolFunc { n, table: (0..1u32 << n).map(f).collect() })
    }

    /// Function whose table is the low `2^n` bits of `bits` (index 0 = bit 0). `n ≤ 6`.
    pub fn from_table_bits(n: usize, bits: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::InvalidArity(n));
        }
        Self::from_fn(n, |x| (bits >> x) & 1 == 1)
    }

    /// Build a member of a named family. `n` is required unless the descriptor fixes it,
    /// and must agree with it when both are given.
    pub fn from_descriptor(desc: &Descriptor, n: Option<usize>) -> Result<Self> {
        let n = match (desc.arity(), n) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::InvalidDescriptor(format!("{desc} has {a} bits but n={b} was requested")))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Error::InvalidDescriptor(format!("{desc} needs an explicit n"))),
        };
        check_arity(n)?;
        let full = (1u32 << n) - 1;
        match desc {
            Descriptor::Const0 => Self::from_fn(n, |_| false),
            Descriptor::Const1 => Self::from_fn(n, |_| true),
            Descriptor::And => Self::from_fn(n, |x| x == full),
            Descriptor::Or => Self::from_fn(n, |x| x != 0),
            Descriptor::Maj => {
                if n % 2 == 0 {
                    return Err(Error::EvenMajority(n));
                }
                Self::from_fn(n, |x| x.count_ones() as usize > n / 2)
            }
            Descriptor::Parity(mask) => {
                let m = mask.map_or(full, |b| b.index());
                Self::from_fn(n, |x| (x & m).count_ones() % 2 == 1)
            }
            Descriptor::Raw { hex, .. } => Self::from_hex(n, hex),
        }
    }

    /// Decode a hex truth table: digit `k` holds `table[4k..4k+4]`, least significant bit first.
    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        check_arity(n)?;
        let expected = hex_digits(n);
        if hex.len() != expected {
            return Err(Error::HexLength { n, expected, got: hex.len() });
        }
        let size = 1usize << n;
        let mut table = vec![false; size];
        for (k, c) in hex.chars().enumerate() {
            let digit = c.to_digit(16).ok_or_else(|| Error::InvalidTruthTable(format!("`{c}` is not a hex digit")))?;
            for j in 0..4 {
                let bit = (digit >> j) & 1 == 1;
                match table.get_mut(4 * k + j) {
                    Some(slot) => *slot = bit,
                    None if bit => {
                        return Err(Error::InvalidTruthTable(format!(
                            "hex digit `{c}` sets bits beyond the {size}-entry table"
                        )))
                    }
                    None => {}
                }
            }
        }
        Ok(BoolFunc { n, table })
    }

    pub fn to_hex(&self) -> String {
        (0..hex_digits(self.n))
            .map(|k| {
                let digit = (0..4)
                    .fold(0u32, |acc, j| acc | (u32::from(self.table.get(4 * k + j).copied().unwrap_or(false)) << j));
                char::from_digit(digit, 16).expect("digit below 16")
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn eval(&self, idx: u32) -> bool {
        self.table[idx as usize]
    }

    pub fn eval_bits(&self, x: &BitString) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch(x.len(), self.n));
        }
        Ok(self.eval(x.index()))
    }

    /// `1 ⊕ f`.
    pub fn complement(&self) -> Self {
        BoolFunc { n: self.n, table: self.table.iter().map(|&v| !v).collect() }
    }

    /// Number of inputs mapped to 1.
    pub fn ones(&self) -> usize {
        self.table.iter().filter(|&&v| v).count()
    }

    pub fn is_constant(&self) -> bool {
        let w = self.ones();
        w == 0 || w == self.size()
    }

    pub fn preimages(&self) -> Preimages {
        let (ones, zeros): (Vec<u32>, Vec<u32>) = (0..self.size() as u32).partition(|&x| self.eval(x));
        Preimages { zeros, ones }
    }

    /// Affine coefficients if `f` is affine. Candidates are read off `f(0)` and `f(e_i)`
    /// and then verified on every input.
    pub fn is_affine(&self) -> Option<AffineCoefficients> {
        let b0 = self.eval(0);
        let b = (1..=self.n).map(|i| self.eval(coordinate_mask(self.n, i)) ^ b0).collect();
        let coeffs = AffineCoefficients::new(b0, b);
        (0..self.size() as u32).all(|x| coeffs.eval(x) == self.eval(x)).then_some(coeffs)
    }

    /// If flipping coordinate `i` swaps the two preimages, returns `g` on the remaining
    /// `n-1` bits with `f = g ⊕ x_i`, where `g` is `f` restricted to `x_i = 0`.
    pub fn xor_decompose(&self, i: usize) -> Option<BoolFunc> {
        if self.n < 2 || i == 0 || i > self.n {
            return None;
        }
        let mask = coordinate_mask(self.n, i);
        if !(0..self.size() as u32).all(|x| self.eval(x) != self.eval(x ^ mask)) {
            return None;
        }
        // Bits above coordinate i stay put, bits below shift down by one.
        let low = mask - 1;
        let table = (0..1u32 << (self.n - 1)).map(|y| self.eval(((y & !low) << 1) | (y & low))).collect();
        Some(BoolFunc { n: self.n - 1, table })
    }

    /// Walsh coefficients of `h = (-1)^f`, normalized so their squares sum to 1.
    ///
    /// Entry `S` is the coefficient of the character `χ_S(x) = (-1)^{popcount(x & S)}`,
    /// where `S` uses the same index layout as inputs.
    pub fn walsh_spectrum(&self) -> Vec<f64> {
        let mut h: Vec<f64> = self.table.iter().map(|&v| if v { -1.0 } else { 1.0 }).collect();
        let len = h.len();
        let mut half = 1;
        while half < len {
            for block in h.chunks_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (u, v) = (*a, *b);
                    *a = u + v;
                    *b = u - v;
                }
            }
            half *= 2;
        }
        let scale = 1.0 / len as f64;
        h.iter_mut().for_each(|c| *c *= scale);
        h
    }
}

/// Text form `n:<n>;tt:<hex>`.
impl fmt::Display for BoolFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n:{};tt:{}", self.n, self.to_hex())
    }
}

impl FromStr for BoolFunc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidTruthTable(s.to_string());
        let (n_part, tt_part) = s.trim().split_once(';').ok_or_else(bad)?;
        let n = n_part.strip_prefix("n:").and_then(|v| v.parse::<usize>().ok()).ok_or_else(bad)?;
        let hex = tt_part.strip_prefix("tt:").ok_or_else(bad)?;
        BoolFunc::from_hex(n, hex)
    }
}

fn check_arity(n: usize) -> Result<()> {
    if n == 0 || n > MAX_BITS {
        return Err(Error::InvalidArity(n));
    }
    Ok(())
}

/// Hex digits in a truth table: `2^n / 4`, at least one.
pub fn hex_digits(n: usize) -> usize {
    ((1usize << n) / 4).max(1)
}
