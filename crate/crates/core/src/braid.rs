//! Toric and quasitoric braids.
//!
//! The toric braid of type `(k, n)` is `(σ_1 σ_2 ⋯ σ_{k-1})^n` on `k`
//! strands. A quasitoric braid keeps that letter sequence and chooses a sign
//! for every letter, so it is fully described by an `n × (k-1)` sign matrix
//! read row by row.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i64() as i8
    }
}

/// `σ_generator^{±1}`, generators numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BraidLetter {
    pub generator: usize,
    pub sign: Sign,
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Positive => write!(f, "s{}", self.generator),
            Sign::Negative => write!(f, "S{}", self.generator),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PatternJson", into = "PatternJson")]
pub struct QuasitoricPattern {
    strands: usize,
    repetitions: usize,
    /// row-major, `repetitions` rows of `strands - 1` entries
    signs: Vec<Sign>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatternJson {
    pub strands: usize,
    pub repetitions: usize,
    pub signs: Vec<Vec<Sign>>,
}

impl TryFrom<PatternJson> for QuasitoricPattern {
    type Error = Error;
    fn try_from(p: PatternJson) -> Result<Self> {
        QuasitoricPattern::new(p.strands, p.repetitions, p.signs)
    }
}

impl From<QuasitoricPattern> for PatternJson {
    fn from(p: QuasitoricPattern) -> Self {
        PatternJson { strands: p.strands, repetitions: p.repetitions, signs: p.sign_rows() }
    }
}

impl QuasitoricPattern {
    pub fn new(strands: usize, repetitions: usize, rows: Vec<Vec<Sign>>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::Domain("strands must be ≥ 2".into()));
        }
        if repetitions < 1 {
            return Err(Error::Domain("repetitions must be ≥ 1".into()));
        }
        if rows.len() != repetitions {
            return Err(Error::DimensionMismatch(format!(
                "sign matrix has {} rows, expected {repetitions}",
                rows.len()
            )));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != strands - 1) {
            return Err(Error::DimensionMismatch(format!(
                "sign row {i} has {} entries, expected {}",
                r.len(),
                strands - 1
            )));
        }
        Ok(QuasitoricPattern { strands, repetitions, signs: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from `±1` integers.
    pub fn from_ints(strands: usize, repetitions: usize, rows: &[&[i8]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Sign::try_from(v).map_err(Error::Domain)).collect())
            .collect::<Result<Vec<Vec<Sign>>>>()?;
        Self::new(strands, repetitions, rows)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    pub fn sign(&self, row: usize, col: usize) -> Sign {
        self.signs[row * (self.strands - 1) + col]
    }

    pub fn sign_rows(&self) -> Vec<Vec<Sign>> {
        self.signs.chunks(self.strands - 1).map(|c| c.to_vec()).collect()
    }

    pub fn is_toric(&self) -> bool {
        self.signs.iter().all(|&s| s == Sign::Positive)
    }

    /// Row-major braid word; row `r` reads `σ_1^{±} ⋯ σ_{k-1}^{±}`.
    pub fn word(&self) -> Vec<BraidLetter> {
        self.signs
            .iter()
            .enumerate()
            .map(|(i, &sign)| BraidLetter { generator: i % (self.strands - 1) + 1, sign })
            .collect()
    }

    pub fn closure_permutation(&self) -> StrandPermutation {
        let mut images: Vec<usize> = (0..self.strands).collect();
        // track where the strand starting at each bottom position ends up
        let mut position_of: Vec<usize> = (0..self.strands).collect();
        for letter in self.word() {
            let (l, r) = (letter.generator - 1, letter.generator);
            for p in position_of.iter_mut() {
                if *p == l {
                    *p = r;
                } else if *p == r {
                    *p = l;
                }
            }
        }
        for (start, &end) in position_of.iter().enumerate() {
            images[start] = end;
        }
        StrandPermutation { images }
    }

    pub fn component_count(&self) -> usize {
        self.closure_permutation().cycles().len()
    }

    /// Append trivial blocks `Δ² · Δ^{-2}` until `repetitions ≥ 2·strands + 1`.
    ///
    /// A block is `k` all-positive rows followed by `k` all-negative rows:
    /// `(σ_1⋯σ_{k-1})^k` is the full twist, so the block is the identity braid.
    pub fn pad_to_min_repetitions(&self) -> QuasitoricPattern {
        let k = self.strands;
        let target = 2 * k + 1;
        let mut padded = self.clone();
        while padded.repetitions < target {
            padded.signs.extend(std::iter::repeat(Sign::Positive).take(k * (k - 1)));
            padded.signs.extend(std::iter::repeat(Sign::Negative).take(k * (k - 1)));
            padded.repetitions += 2 * k;
        }
        padded
    }

    /// The padding block alone, as a pattern of type `(k, 2k)`.
    pub fn trivial_block(strands: usize) -> Result<QuasitoricPattern> {
        let k = strands;
        let mut rows = vec![vec![Sign::Positive; k.saturating_sub(1)]; k];
        rows.extend(vec![vec![Sign::Negative; k.saturating_sub(1)]; k]);
        Self::new(k, 2 * k, rows)
    }
}

pub fn toric_pattern(k: usize, n: usize) -> Result<QuasitoricPattern> {
    if k < 2 {
        return Err(Error::Domain("strands must be ≥ 2".into()));
    }
    if n < 1 {
        return Err(Error::Domain("repetitions must be ≥ 1".into()));
    }
    QuasitoricPattern::new(k, n, vec![vec![Sign::Positive; k - 1]; n])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandPermutation {
    images: Vec<usize>,
}

impl StrandPermutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Domain(format!("not a permutation: {images:?}")));
            }
        }
        Ok(StrandPermutation { images })
    }

    pub fn identity(n: usize) -> Self {
        StrandPermutation { images: (0..n).collect() }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }
}
