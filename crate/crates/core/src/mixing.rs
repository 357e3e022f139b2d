//! Mixing numbers: the least `r` with `M^r` entrywise positive, and the
//! translation-length lower bound `1/r` they give.
//!
//! Positivity of a power only depends on the zero pattern, so powers are
//! taken on the boolean shadow of the matrix with bitset rows.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::TransitionMatrix;

/// Square boolean matrix with rows packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    dim: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(dim: usize) -> Self {
        let words = dim.div_ceil(64);
        Self {
            dim,
            words,
            bits: vec![0; dim * words],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.set(k, k);
        }
        m
    }

    /// Nonzero pattern of a transition matrix.
    pub fn shadow(m: &TransitionMatrix) -> Self {
        let mut out = Self::zeros(m.dim());
        for (r, row) in m.rows().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if *x != num_bigint::BigUint::ZERO {
                    out.set(r, c);
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    fn full_row(&self) -> Vec<u64> {
        let mut row = vec![u64::MAX; self.words];
        let tail = self.dim % 64;
        if tail != 0 {
            if let Some(last) = row.last_mut() {
                *last = (1u64 << tail) - 1;
            }
        }
        row
    }

    pub fn is_positive(&self) -> bool {
        let full = self.full_row();
        (0..self.dim).all(|r| self.row(r) == full.as_slice())
    }

    pub fn has_zero_column(&self) -> bool {
        let mut seen = vec![0u64; self.words];
        for r in 0..self.dim {
            for (s, w) in seen.iter_mut().zip(self.row(r)) {
                *s |= w;
            }
        }
        seen != self.full_row()
    }

    /// Boolean product: row `r` of `self · rhs` is the union of the rows of
    /// `rhs` selected by row `r` of `self`.
    pub fn mul(&self, rhs: &BoolMatrix) -> BoolMatrix {
        assert_eq!(
            self.dim, rhs.dim,
            "boolean product of mismatched dimensions"
        );
        let words = self.words;
        let mut bits = vec![0u64; self.bits.len()];
        bits.par_chunks_mut(words.max(1))
            .take(self.dim)
            .enumerate()
            .for_each(|(r, out)| {
                for (wi, &word) in self.row(r).iter().enumerate() {
                    let mut word = word;
                    while word != 0 {
                        let k = wi * 64 + word.trailing_zeros() as usize;
                        word &= word - 1;
                        for (o, x) in out.iter_mut().zip(rhs.row(k)) {
                            *o |= x;
                        }
                    }
                }
            });
        BoolMatrix {
            dim: self.dim,
            words,
            bits,
        }
    }

    pub fn pow(&self, mut exp: u64) -> BoolMatrix {
        let mut base = self.clone();
        let mut acc = BoolMatrix::identity(self.dim);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixingResult {
    /// Least `r <= cap` with `M^r > 0`, if any.
    pub mixing_number: Option<usize>,
    pub cap: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub translation_lower_bound: Option<Ratio<u64>>,
}

fn serialize_ratio<S: serde::Serializer>(r: &Option<Ratio<u64>>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
        None => s.serialize_none(),
    }
}

impl MixingResult {
    fn new(mixing_number: Option<usize>, cap: usize) -> Self {
        Self {
            mixing_number,
            cap,
            translation_lower_bound: mixing_number.map(|r| Ratio::new(1, r as u64)),
        }
    }
}

/// Least `r <= cap` with `m^r` entrywise positive.
///
/// If no column of `m` is zero, positivity of `m^r` implies positivity of
/// `m^(r+1)`, and the search uses repeated squaring. Otherwise powers are
/// scanned one at a time.
pub fn mixing_number(m: &TransitionMatrix, cap: usize) -> Result<MixingResult> {
    if cap == 0 {
        return Err(Error::InvalidArgument(
            "mixing cap must be at least 1".into(),
        ));
    }
    let b = BoolMatrix::shadow(m);
    let r = if b.has_zero_column() {
        linear_search(&b, cap)
    } else {
        monotone_search(&b, cap)
    };
    Ok(MixingResult::new(r, cap))
}

fn linear_search(b: &BoolMatrix, cap: usize) -> Option<usize> {
    let mut p = b.clone();
    for r in 1..=cap {
        if p.is_positive() {
            return Some(r);
        }
        if r < cap {
            p = p.mul(b);
        }
    }
    None
}

fn monotone_search(b: &BoolMatrix, cap: usize) -> Option<usize> {
    // squares[k] = b^(2^k), up to the first power reaching the cap.
    let mut squares = vec![b.clone()];
    while (1usize << (squares.len() - 1)) < cap {
        let last = squares.last().expect("non-empty");
        squares.push(last.mul(last));
    }
    // Largest r with b^r not positive, built greedily from the top bit.
    let mut acc = BoolMatrix::identity(b.dim());
    let mut r = 0usize;
    for k in (0..squares.len()).rev() {
        if r + (1 << k) > cap {
            continue;
        }
        let next = acc.mul(&squares[k]);
        if !next.is_positive() {
            acc = next;
            r += 1 << k;
        }
    }
    if r >= cap {
        return None;
    }
    // acc = b^r is not positive; confirm b^(r+1) is, rather than trusting
    // monotonicity alone.
    acc.mul(b).is_positive().then_some(r + 1)
}

/// `1/r` for a present mixing number `r`.
pub fn translation_length_lower_bound(result: &MixingResult) -> Result<Ratio<u64>> {
    result
        .translation_lower_bound
        .ok_or(Error::MixingAbsent { cap: result.cap })
}
