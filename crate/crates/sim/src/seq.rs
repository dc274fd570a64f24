//! Source sequences as integers, random bin assignments, and per-letter
//! samplers.

use crate::config::TABLE_LIMIT;
use crate::error::{Result, SimError};
use rand::Rng;

/// All sequences of length `len` over an alphabet of size `alphabet`,
/// numbered with the first letter most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeqSpace {
    pub alphabet: usize,
    pub len: usize,
    pub count: usize,
}

impl SeqSpace {
    pub fn new(alphabet: usize, len: usize, what: &str) -> Result<Self> {
        let count = checked_pow(alphabet, len, what)?;
        Ok(SeqSpace {
            alphabet,
            len,
            count,
        })
    }

    pub fn index(&self, seq: &[u8]) -> usize {
        seq.iter()
            .fold(0, |acc, &s| acc * self.alphabet + s as usize)
    }

    pub fn write(&self, mut index: usize, out: &mut [u8]) {
        for slot in out.iter_mut().rev() {
            *slot = (index % self.alphabet) as u8;
            index /= self.alphabet;
        }
    }

    pub fn sequence(&self, index: usize) -> Vec<u8> {
        let mut out = vec![0; self.len];
        self.write(index, &mut out);
        out
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize, what: &str) -> Result<usize> {
    let mut total: u128 = 1;
    for _ in 0..exp {
        total *= base as u128;
        if total > TABLE_LIMIT {
            break;
        }
    }
    if total > TABLE_LIMIT {
        return Err(SimError::Budget {
            table: what.into(),
            size: (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX),
            limit: TABLE_LIMIT,
        });
    }
    Ok(total as usize)
}

/// A uniform random assignment of every sequence to one of `2^bits` bins,
/// with the inverse lists kept for source decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinMap {
    pub bits: u32,
    pub map: Vec<u32>,
    lists: Vec<Vec<u32>>,
}

impl BinMap {
    pub fn random<R: Rng + ?Sized>(sequences: usize, bits: u32, rng: &mut R) -> Result<Self> {
        let bins = checked_pow(2, bits as usize, "bin index set")?;
        let map: Vec<u32> = (0..sequences)
            .map(|_| rng.random_range(0..bins) as u32)
            .collect();
        Ok(Self::from_map(bits, map))
    }

    pub fn from_map(bits: u32, map: Vec<u32>) -> Self {
        let mut lists = vec![Vec::new(); 1usize << bits];
        for (s, &b) in map.iter().enumerate() {
            lists[b as usize].push(s as u32);
        }
        BinMap { bits, map, lists }
    }

    pub fn num_bins(&self) -> usize {
        1 << self.bits
    }

    pub fn bin(&self, sequence: usize) -> usize {
        self.map[sequence] as usize
    }

    /// Sequences assigned to `bin`, in increasing order.
    pub fn members(&self, bin: usize) -> &[u32] {
        &self.lists[bin]
    }
}

/// Cumulative rows of a kernel, for drawing one letter given a row index.
#[derive(Debug, Clone)]
pub struct LetterSampler {
    cdf: Vec<f64>,
    width: usize,
}

impl LetterSampler {
    pub fn new(kernel: &[f64], width: usize) -> Self {
        let mut cdf = Vec::with_capacity(kernel.len());
        for row in kernel.chunks(width) {
            let mut acc = 0.0;
            for &p in row {
                acc += p;
                cdf.push(acc);
            }
        }
        LetterSampler { cdf, width }
    }

    pub fn sample<R: Rng + ?Sized>(&self, row: usize, rng: &mut R) -> usize {
        let cdf = &self.cdf[row * self.width..(row + 1) * self.width];
        if self.width == 1 {
            return 0;
        }
        let u = rng.random::<f64>() * cdf[self.width - 1];
        // The last letter with positive mass absorbs rounding at the top.
        let mut last = 0;
        for (i, &c) in cdf.iter().enumerate() {
            let p = if i == 0 { c } else { c - cdf[i - 1] };
            if p > 0.0 {
                if u < c {
                    return i;
                }
                last = i;
            }
        }
        last
    }
}
