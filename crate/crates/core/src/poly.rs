//! Arithmetic in the truncated polynomial ring F₂[X]/(X^w).
//!
//! An element is a bit vector of exactly `w` bits, bit `i` holding the
//! coefficient of `X^i`. Bits are packed into `u64` words, least significant
//! word first; the unused high bits of the top word are always clear. Addition
//! is XOR and multiplication is a sum of shifted copies, so every operation
//! maps directly onto fixed-width machine arithmetic with the overflow
//! discarded.

use std::fmt;
use std::ops::{Add, Mul};

use smallvec::SmallVec;

use crate::error::{Error, Result};

mod clmul;

const WORD_BITS: usize = 64;

/// Inline storage covers widths up to 512 bits without a heap allocation.
type Words = SmallVec<[u64; 8]>;

/// An element of F₂[X]/(X^width).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedPoly {
    width: usize,
    words: Words,
}

#[inline]
fn word_count(width: usize) -> usize {
    width.div_ceil(WORD_BITS)
}

#[inline]
fn top_mask(width: usize) -> u64 {
    match width % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl TruncatedPoly {
    /// The zero polynomial.
    ///
    /// # Panics
    /// If `width == 0`.
    pub fn zero(width: usize) -> Self {
        assert!(width >= 1, "truncation width must be at least 1");
        Self {
            width,
            words: SmallVec::from_elem(0, word_count(width)),
        }
    }

    pub fn one(width: usize) -> Self {
        Self::monomial(0, width)
    }

    /// `X^exponent`, or zero when `exponent >= width`.
    pub fn monomial(exponent: usize, width: usize) -> Self {
        let mut p = Self::zero(width);
        if exponent < width {
            p.words[exponent / WORD_BITS] = 1u64 << (exponent % WORD_BITS);
        }
        p
    }

    /// Sum of `X^e` over the given exponents (repeated exponents cancel).
    /// Exponents at or above `width` are dropped.
    pub fn from_exponents(exponents: &[usize], width: usize) -> Self {
        let mut p = Self::zero(width);
        for &e in exponents {
            if e < width {
                p.words[e / WORD_BITS] ^= 1u64 << (e % WORD_BITS);
            }
        }
        p
    }

    /// Builds a polynomial from packed words (least significant first); bits
    /// beyond `width` are discarded.
    pub fn from_words(words: &[u64], width: usize) -> Self {
        let mut p = Self::zero(width);
        let n = p.words.len();
        for (dst, src) in p.words.iter_mut().zip(words) {
            *dst = *src;
        }
        p.words[n - 1] &= top_mask(width);
        p
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn coefficient(&self, i: usize) -> bool {
        i < self.width && (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn popcount(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(k * WORD_BITS + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    /// Lowest exponent with a nonzero coefficient; `None` for zero.
    pub fn min_degree(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Image under the projection onto F₂[X]/(X^width) for a smaller (or
    /// equal) width. Widening pads with zero coefficients.
    pub fn truncate(&self, width: usize) -> Self {
        Self::from_words(&self.words, width)
    }

    fn check_width(&self, other: &Self) -> Result<()> {
        if self.width == other.width {
            Ok(())
        } else {
            Err(Error::WidthMismatch {
                left: self.width,
                right: other.width,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// In-place `self += other`.
    ///
    /// # Panics
    /// On mismatched widths.
    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.width, other.width, "truncation widths differ");
        self.add_assign_unchecked(other);
    }

    #[inline]
    fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// `self · X^shift`.
    pub fn shl(&self, shift: usize) -> Self {
        let mut out = Self::zero(self.width);
        xor_shifted(&mut out.words, &self.words, shift);
        let n = out.words.len();
        out.words[n - 1] &= top_mask(self.width);
        out
    }

    /// Multiplication exactly as a sum of left shifts: `⊕ over set bits i of
    /// other of (self << i)`, each shift truncated to the width. This is the
    /// reference path; [`TruncatedPoly::mul_unchecked`] may take a faster
    /// route with identical results.
    pub fn mul_shift_xor(&self, other: &Self) -> Self {
        assert_eq!(self.width, other.width, "truncation widths differ");
        let mut out = Self::zero(self.width);
        for i in other.exponents() {
            xor_shifted(&mut out.words, &self.words, i);
        }
        let n = out.words.len();
        out.words[n - 1] &= top_mask(self.width);
        out
    }

    /// Product without the width check.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.width);
        out.mul_add_unchecked(self, other);
        out
    }

    /// `self += a · b` without the width check. Sparse operands (few set
    /// bits) go through the shift-XOR path with the sparser one as the shift
    /// source; dense products use a word-level carry-less schoolbook
    /// restricted to the window that survives truncation.
    pub(crate) fn mul_add_unchecked(&mut self, a: &Self, b: &Self) {
        debug_assert!(self.width == a.width && a.width == b.width);
        let n = self.words.len();
        let (Some(la), Some(lb)) = (lowest_word(&a.words), lowest_word(&b.words)) else {
            return;
        };
        if la + lb >= n {
            return;
        }
        let pa = bits_up_to(&a.words[la..], SPARSE_LIMIT);
        let pb = bits_up_to(&b.words[lb..], pa.unwrap_or(SPARSE_LIMIT));
        let sparse_side = match (pa, pb) {
            (Some(x), Some(y)) => Some(x <= y),
            (Some(_), None) => Some(true),
            (None, Some(_)) => Some(false),
            (None, None) => None,
        };
        if let Some(a_is_sparse) = sparse_side {
            let (dense, sparse, ls) = if a_is_sparse { (b, a, la) } else { (a, b, lb) };
            for (k, &w) in sparse.words.iter().enumerate().skip(ls) {
                let mut w = w;
                while w != 0 {
                    let i = k * WORD_BITS + w.trailing_zeros() as usize;
                    xor_shifted(&mut self.words, &dense.words, i);
                    w &= w - 1;
                }
            }
        } else {
            clmul::mul_words(&mut self.words, &a.words[..], la, &b.words[..], lb);
        }
        self.words[n - 1] &= top_mask(self.width);
    }
}

impl TruncatedPoly {
    /// `self += y · X^shift`.
    pub(crate) fn add_shifted_unchecked(&mut self, y: &Self, shift: usize) {
        debug_assert_eq!(self.width, y.width);
        xor_shifted(&mut self.words, &y.words, shift);
        let n = self.words.len();
        self.words[n - 1] &= top_mask(self.width);
    }

    /// Exponent of the single set bit, if `self` is a monomial.
    pub fn monomial_exponent(&self) -> Option<usize> {
        let k = lowest_word(&self.words)?;
        let w = self.words[k];
        if !w.is_power_of_two() || self.words[k + 1..].iter().any(|&x| x != 0) {
            return None;
        }
        Some(k * WORD_BITS + w.trailing_zeros() as usize)
    }
}

/// Operands with at most this many set bits are multiplied by shifting.
const SPARSE_LIMIT: u32 = 6;

/// Number of set bits in `words` if it is at most `limit`.
#[inline]
fn bits_up_to(words: &[u64], limit: u32) -> Option<u32> {
    let mut count = 0;
    for &w in words {
        count += w.count_ones();
        if count > limit {
            return None;
        }
    }
    Some(count)
}

#[inline]
fn lowest_word(words: &[u64]) -> Option<usize> {
    words.iter().position(|&w| w != 0)
}

/// `dst ^= src << shift`, truncated to `dst.len()` words (the caller masks
/// the top word).
#[inline]
fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let n = dst.len();
    let ws = shift / WORD_BITS;
    if ws >= n {
        return;
    }
    let bs = shift % WORD_BITS;
    let start = lowest_word(src).unwrap_or(src.len());
    if bs == 0 {
        for k in (start + ws)..n {
            dst[k] ^= src[k - ws];
        }
    } else {
        for k in (start + ws)..n {
            let j = k - ws;
            let mut v = src[j] << bs;
            if j > 0 {
                v |= src[j - 1] >> (WORD_BITS - bs);
            }
            dst[k] ^= v;
        }
    }
}

impl Add for &TruncatedPoly {
    type Output = TruncatedPoly;

    /// # Panics
    /// On mismatched widths; use [`TruncatedPoly::try_add`] to recover.
    fn add(self, rhs: Self) -> TruncatedPoly {
        self.try_add(rhs).expect("truncation widths differ")
    }
}

impl Mul for &TruncatedPoly {
    type Output = TruncatedPoly;

    /// # Panics
    /// On mismatched widths; use [`TruncatedPoly::try_mul`] to recover.
    fn mul(self, rhs: Self) -> TruncatedPoly {
        self.try_mul(rhs).expect("truncation widths differ")
    }
}

// Hex form: the bit vector read as a binary number, so the constant term is
// the least significant bit of the last hex digit. Always ceil(width/4)
// digits, zero padded.
impl TruncatedPoly {
    pub fn to_hex(&self) -> String {
        let digits = self.width.div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let bit = d * 4;
            let nibble = (self.words[bit / WORD_BITS] >> (bit % WORD_BITS)) & 0xf;
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(hex: &str, width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::ZeroWidth);
        }
        let mut p = Self::zero(width);
        for (d, c) in hex.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidHex(hex.to_string()))? as u64;
            if nibble == 0 {
                continue;
            }
            let bit = d * 4;
            if bit + (64 - nibble.leading_zeros() as usize) > width {
                return Err(Error::InvalidHex(format!(
                    "{hex} has bits beyond width {width}"
                )));
            }
            p.words[bit / WORD_BITS] |= nibble << (bit % WORD_BITS);
        }
        Ok(p)
    }
}

impl fmt::Debug for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedPoly(w={}, {})", self.width, self)
    }
}

impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps = self.exponents();
        if exps.is_empty() {
            return f.write_str("0");
        }
        for (k, e) in exps.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("X")?,
                _ => write!(f, "X^{e}")?,
            }
        }
        Ok(())
    }
}
