//! Bit strings, exact dyadic rationals and the self-delimiting codes built
//! on top of them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A finite binary word.
///
/// Ordering is length-lex: shorter strings first, equal lengths compared
/// lexicographically with `0 < 1`. This is the enumeration order of the
/// dovetailer.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    /// The `width`-bit big-endian binary representation of `value`.
    pub fn from_uint(value: u64, width: usize) -> Self {
        let bits = (0..width)
            .rev()
            .map(|k| k < 64 && (value >> k) & 1 == 1)
            .collect();
        BitString { bits }
    }

    /// The string at position `index` of the length-lex enumeration
    /// (ε, 0, 1, 00, 01, ...).
    pub fn from_index(index: u64) -> Self {
        let len = 63 - (index + 1).leading_zeros() as usize;
        let value = index + 1 - (1u64 << len);
        BitString::from_uint(value, len)
    }

    /// Position of this string in the length-lex enumeration.
    pub fn index(&self) -> u64 {
        assert!(self.len() < 63, "bit string too long to index");
        (1u64 << self.len()) - 1 + self.to_uint()
    }

    /// Big-endian value of the bits; the empty string is 0.
    pub fn to_uint(&self) -> u64 {
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// All strings of length exactly `n`, in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 63);
        (0..(1u64 << n)).map(move |v| BitString::from_uint(v, n))
    }

    /// All strings of length at most `n`, in length-lex order.
    pub fn all_up_to(n: usize) -> impl Iterator<Item = BitString> {
        (0..=n).flat_map(BitString::all_of_length)
    }

    /// Parses `'0'/'1'` text, accepting `-` for the empty string.
    pub fn parse_or_dash(s: &str) -> Result<Self> {
        if s == "-" {
            Ok(BitString::new())
        } else {
            s.parse()
        }
    }

    /// Renders the bits, using `-` for the empty string.
    pub fn to_string_or_dash(&self) -> String {
        if self.is_empty() {
            "-".to_string()
        } else {
            self.to_string()
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    pub fn prefix(&self, n: usize) -> BitString {
        BitString::from_bits(self.bits[..n.min(self.len())].to_vec())
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString::from_bits(self.bits[start..end].to_vec())
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// Length of the longest common prefix.
    pub fn common_prefix_len(&self, other: &BitString) -> usize {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("not a bit string: {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::from_bits)
    }
}

impl From<&[bool]> for BitString {
    fn from(bits: &[bool]) -> Self {
        BitString::from_bits(bits.to_vec())
    }
}

/// Number of bits in the binary representation of `n`; zero for `n = 0`.
pub fn bit_length(n: u64) -> usize {
    (64 - n.leading_zeros()) as usize
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: u64) -> usize {
    assert!(n >= 1);
    bit_length(n - 1)
}

/// Self-delimiting code of a natural number: `1^{||n||} 0 bin(n)`, where
/// `bin(n)` has exactly `||n||` bits (no leading zero) and `bin(0)` is empty.
pub fn encode_number(n: u64) -> BitString {
    let width = bit_length(n);
    let mut bits = vec![true; width];
    bits.push(false);
    bits.extend_from_slice(BitString::from_uint(n, width).bits());
    BitString::from_bits(bits)
}

/// Decodes a number written by [`encode_number`] starting at `pos`; returns
/// the number and the position just past it.
pub fn decode_number(code: &BitString, pos: usize) -> Result<(u64, usize)> {
    let bits = code.bits();
    let mut width = 0;
    loop {
        match bits.get(pos + width) {
            Some(true) => width += 1,
            Some(false) => break,
            None => return Err(Error::MalformedCode("unterminated length header".into())),
        }
    }
    if width > 63 {
        return Err(Error::MalformedCode("length header too wide".into()));
    }
    let start = pos + width + 1;
    let end = start + width;
    if end > bits.len() {
        return Err(Error::MalformedCode("length field overruns code".into()));
    }
    if width > 0 && !bits[start] {
        return Err(Error::MalformedCode("length field has a leading zero".into()));
    }
    let n = BitString::from(&bits[start..end]).to_uint();
    Ok((n, end))
}

/// Self-delimiting pair code `1^{||x||} 0 bin(|x|) x y`.
pub fn pair_encode(x: &BitString, y: &BitString) -> BitString {
    let mut code = encode_number(x.len() as u64);
    code.extend_from(x);
    code.extend_from(y);
    code
}

/// Inverse of [`pair_encode`].
pub fn pair_decode(code: &BitString) -> Result<(BitString, BitString)> {
    let (n, pos) = decode_number(code, 0)?;
    let n = n as usize;
    if pos + n > code.len() {
        return Err(Error::MalformedCode("payload shorter than declared |x|".into()));
    }
    Ok((
        code.slice(pos, pos + n),
        code.slice(pos + n, code.len()),
    ))
}

/// An exact nonnegative rational `numerator / 2^exponent` in canonical form
/// (odd numerator, or zero with exponent 0).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { num: BigUint::zero(), exp: 0 }
    }

    pub fn new(num: BigUint, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.normalize();
        d
    }

    pub fn from_u64(num: u64, exp: u32) -> Self {
        Dyadic::new(BigUint::from(num), exp)
    }

    /// The mass `2^{-len}` of a program of length `len`.
    pub fn mass(len: usize) -> Self {
        Dyadic { num: BigUint::one(), exp: len as u32 }
    }

    /// `0.b₁b₂…bₙ` in binary.
    pub fn from_fraction_bits(bits: &BitString) -> Self {
        let mut num = BigUint::zero();
        for &b in bits.bits() {
            num <<= 1u32;
            if b {
                num += 1u32;
            }
        }
        Dyadic::new(num, bits.len() as u32)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp as u64) as u32;
        if tz > 0 {
            self.num >>= tz;
            self.exp -= tz;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `⌊value · 2^i⌋`.
    pub fn floor_scaled(&self, i: u32) -> BigUint {
        if i >= self.exp {
            &self.num << (i - self.exp)
        } else {
            &self.num >> (self.exp - i)
        }
    }

    /// Fractional bit `i` (1-based) of the binary expansion.
    pub fn bit(&self, i: u32) -> bool {
        assert!(i >= 1);
        self.floor_scaled(i).bit(0)
    }

    /// The first `n` fractional bits.
    pub fn prefix_bits(&self, n: u32) -> BitString {
        BitString::from_bits((1..=n).map(|i| self.bit(i)).collect())
    }

    /// `self - other`, or `None` if the result would be negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        if a < b {
            None
        } else {
            Some(Dyadic::new(a - b, e))
        }
    }

    /// `self · k` for a natural number `k`.
    pub fn scale(&self, k: u64) -> Dyadic {
        Dyadic::new(&self.num * BigUint::from(k), self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(self.exp as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let a = &self.num << (e - self.exp);
        let b = &rhs.num << (e - rhs.exp);
        Dyadic::new(a + b, e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        if rhs.exp <= self.exp {
            self.num += &rhs.num << (self.exp - rhs.exp);
        } else {
            self.num <<= rhs.exp - self.exp;
            self.exp = rhs.exp;
            self.num += &rhs.num;
        }
        self.normalize();
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
        let (num, exp) = s.split_once("/2^").ok_or_else(bad)?;
        let num: BigUint = num.parse().map_err(|_| bad())?;
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        let d = Dyadic::new(num.clone(), exp);
        if d.num != num || d.exp != exp {
            return Err(Error::Parse(format!("dyadic not in canonical form: {s:?}")));
        }
        Ok(d)
    }
}

macro_rules! serde_as_string {
    ($t:ty) => {
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_as_string!(BitString);
serde_as_string!(Dyadic);
