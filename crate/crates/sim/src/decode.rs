//! Pieces shared by the block-Markov simulators: the memoryless channel,
//! unique-candidate search and the Slepian-Wolf source decoder.

use marc_core::{sample_with, JointPmf};
use marc_rates::model::{S1, S2};
use marc_rates::{DmChannel, SourceSideInfoModel};
use rand::Rng;

use crate::error::Result;
use crate::seq::{BinMap, LetterSampler, SeqSpace};
use crate::typicality::Tester;

pub(crate) const STREAM_TRIAL: u64 = 0x7A1;

/// Draws channel outputs letter by letter.
pub(crate) struct ChannelSim {
    sampler: LetterSampler,
    x_sizes: [usize; 3],
    ny3: usize,
}

impl ChannelSim {
    pub fn new(ch: &DmChannel) -> Self {
        let law = ch.law();
        ChannelSim {
            sampler: LetterSampler::new(law.kernel(), law.output_cells()),
            x_sizes: ch.input_sizes(),
            ny3: ch.output_sizes().1,
        }
    }

    /// Returns `(y, y3)` for one block of inputs.
    pub fn send<R: Rng + ?Sized>(
        &self,
        x1: &[u8],
        x2: &[u8],
        x3: &[u8],
        rng: &mut R,
    ) -> (Vec<u8>, Vec<u8>) {
        let [_, n2, n3] = self.x_sizes;
        let mut y = Vec::with_capacity(x1.len());
        let mut y3 = Vec::with_capacity(x1.len());
        for k in 0..x1.len() {
            let row = (x1[k] as usize * n2 + x2[k] as usize) * n3 + x3[k] as usize;
            let cell = self.sampler.sample(row, rng);
            y.push((cell / self.ny3) as u8);
            y3.push((cell % self.ny3) as u8);
        }
        (y, y3)
    }
}

/// Source and side-information blocks for one trial.
pub(crate) struct SourceBlocks {
    pub s1: Vec<Vec<u8>>,
    pub s2: Vec<Vec<u8>>,
    pub w: Vec<Vec<u8>>,
    pub w3: Vec<Vec<u8>>,
}

impl SourceBlocks {
    pub fn draw<R: Rng + ?Sized>(
        model: &SourceSideInfoModel,
        blocks: usize,
        len: usize,
        rng: &mut R,
    ) -> Result<Self> {
        // The model joint is ordered S1, S2, W, W3.
        let draws = sample_with(model.joint(), blocks * len, rng)?;
        let split = |v: &Vec<usize>| -> Vec<Vec<u8>> {
            v.chunks(len)
                .map(|c| c.iter().map(|&a| a as u8).collect())
                .collect()
        };
        Ok(SourceBlocks {
            s1: split(&draws[0]),
            s2: split(&draws[1]),
            w: split(&draws[2]),
            w3: split(&draws[3]),
        })
    }
}

/// The only pair `(a, b)` accepted by `ok`, or `None` when there are zero or
/// several. The search stops at the second hit.
pub(crate) fn unique_pair<A: Copy, B: Copy>(
    first: &[A],
    second: &[B],
    mut ok: impl FnMut(A, B) -> bool,
) -> Option<(A, B)> {
    let mut found = None;
    for &a in first {
        for &b in second {
            if ok(a, b) {
                if found.is_some() {
                    return None;
                }
                found = Some((a, b));
            }
        }
    }
    found
}

/// Typicality tests for recovering a source pair from its bins and one
/// side-information sequence (`W` or `W3`).
pub(crate) struct SourceDecoder {
    s1: SeqSpace,
    s2: SeqSpace,
    one: Tester,
    two: Tester,
    pair: Tester,
}

impl SourceDecoder {
    pub fn new(
        model: &SourceSideInfoModel,
        side: &str,
        s1: SeqSpace,
        s2: SeqSpace,
        epsilon: Option<f64>,
    ) -> Result<Self> {
        let joint: &JointPmf = model.joint();
        Ok(SourceDecoder {
            s1,
            s2,
            one: Tester::new(joint, &[S1, side], epsilon)?,
            two: Tester::new(joint, &[S2, side], epsilon)?,
            pair: Tester::new(joint, &[S1, S2, side], epsilon)?,
        })
    }

    /// The unique pair of sequence indices in bins `(u1, u2)` jointly typical
    /// with `side`.
    pub fn decode(
        &self,
        f1: &BinMap,
        u1: usize,
        f2: &BinMap,
        u2: usize,
        side: &[u8],
        scratch: &mut Vec<usize>,
    ) -> Option<(usize, usize)> {
        if self.s1.count * self.s2.count == 1 {
            return (f1.bin(0) == u1 && f2.bin(0) == u2).then_some((0, 0));
        }
        let survivors =
            |space: &SeqSpace, members: &[u32], t: &Tester, scratch: &mut Vec<usize>| {
                let mut seq = vec![0u8; space.len];
                let mut out = Vec::new();
                for &s in members {
                    space.write(s as usize, &mut seq);
                    if t.test(&[&seq, side], scratch) {
                        out.push((s as usize, seq.clone()));
                    }
                }
                out
            };
        let c1 = survivors(&self.s1, f1.members(u1), &self.one, scratch);
        if c1.is_empty() {
            return None;
        }
        let c2 = survivors(&self.s2, f2.members(u2), &self.two, scratch);
        let i1: Vec<usize> = (0..c1.len()).collect();
        let i2: Vec<usize> = (0..c2.len()).collect();
        unique_pair(&i1, &i2, |a, b| {
            self.pair.test(&[&c1[a].1, &c2[b].1, side], scratch)
        })
        .map(|(a, b)| (c1[a].0, c2[b].0))
    }
}

/// Indices of `0..count` accepted by `ok`.
pub(crate) fn survivors(count: usize, mut ok: impl FnMut(usize) -> bool) -> Vec<usize> {
    (0..count).filter(|&i| ok(i)).collect()
}
