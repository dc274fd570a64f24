//! Slepian-Wolf binning with irregular block-Markov decode-and-forward.

use std::time::Instant;

use marc_core::derive_seed;
use marc_rates::model::{V1, V2, W, W3, X1, X2, X3, Y, Y3};
use marc_rates::{DmChannel, SeparationInput, SourceSideInfoModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codebook::{build_codebook, CodebookSpec, Scheme, SchemeInput, SeparationCodebook};
use crate::config::BlockMarkovConfig;
use crate::decode::{
    survivors, unique_pair, ChannelSim, SourceBlocks, SourceDecoder, STREAM_TRIAL,
};
use crate::error::Result;
use crate::report::{SimReport, TrialOutcome};
use crate::typicality::Tester;

struct Decoders {
    relay_1: Tester,
    relay_2: Tester,
    relay_pair: Tester,
    dest_1: Tester,
    dest_2: Tester,
    dest_pair: Tester,
    relay_src: SourceDecoder,
    dest_src: SourceDecoder,
}

/// Simulates `trials` independent transmissions of `B` source blocks.
///
/// Block `b` carries fresh relay-bin indices and the destination-bin
/// indices of block `b - 1`; the first block uses destination index 0 and
/// the extra block `B + 1` relay index 0. The relay decodes forward, the
/// destination backward, and each uses its own earlier decisions.
pub fn run_separation_df(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    input: &SeparationInput,
    cfg: &BlockMarkovConfig,
    trials: usize,
) -> Result<SimReport> {
    let start = Instant::now();
    let CodebookSpec::Separation(book) =
        build_codebook(SchemeInput::Separation(input), model, ch, cfg)?
    else {
        unreachable!("a separation input builds a separation codebook");
    };
    let eps = cfg.epsilon;
    let chan = input.joint()?.compose(ch.law())?;
    let dec = Decoders {
        relay_1: Tester::new(&chan, &[V1, V2, X1, X3, Y3], eps)?,
        relay_2: Tester::new(&chan, &[V1, V2, X2, X3, Y3], eps)?,
        relay_pair: Tester::new(&chan, &[V1, V2, X1, X2, X3, Y3], eps)?,
        dest_1: Tester::new(&chan, &[V1, X1, Y], eps)?,
        dest_2: Tester::new(&chan, &[V2, X2, Y], eps)?,
        dest_pair: Tester::new(&chan, &[V1, V2, X1, X2, X3, Y], eps)?,
        relay_src: SourceDecoder::new(model, W3, book.s1, book.s2, eps)?,
        dest_src: SourceDecoder::new(model, W, book.s1, book.s2, eps)?,
    };
    let sim = ChannelSim::new(ch);
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, STREAM_TRIAL, t as u64));
            run_trial(model, &book, &dec, &sim, cfg, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let config = serde_json::json!({ "block_markov": cfg, "trials": trials });
    let mut report = SimReport::aggregate(
        Scheme::Separation,
        config,
        cfg.criterion,
        &outcomes,
        cfg.blocks,
    );
    report.codewords = CodebookSpec::Separation(book).total_codewords();
    report.notes.push(typicality_note(cfg));
    report.wall_clock_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

pub(crate) fn typicality_note(cfg: &BlockMarkovConfig) -> String {
    match cfg.epsilon {
        None => "typicality: support membership only".into(),
        Some(e) => format!("typicality: strong, epsilon = {e}"),
    }
}

fn run_trial(
    model: &SourceSideInfoModel,
    book: &SeparationCodebook,
    dec: &Decoders,
    sim: &ChannelSim,
    cfg: &BlockMarkovConfig,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome> {
    let blocks = cfg.blocks;
    let src = SourceBlocks::draw(model, blocks, cfg.m, rng)?;
    let truth: Vec<(usize, usize)> = (0..blocks)
        .map(|b| (book.s1.index(&src.s1[b]), book.s2.index(&src.s2[b])))
        .collect();
    let (n1d, n2d) = (book.f1d.num_bins(), book.f2d.num_bins());
    let (n1r, n2r) = (book.f1r.num_bins(), book.f2r.num_bins());
    let d_bins = |s: (usize, usize)| (book.f1d.bin(s.0), book.f2d.bin(s.1));
    let r_bins = |s: (usize, usize)| (book.f1r.bin(s.0), book.f2r.bin(s.1));
    let mut scratch = Vec::new();
    let mut out = TrialOutcome::new(blocks);
    let mut received = Vec::with_capacity(blocks + 1);

    // Destination-bin indices the relay believes were sent in the previous
    // block; index 0 before the first block.
    let mut relay_d = (0, 0);
    for cb in 0..=blocks {
        let ur = if cb < blocks {
            r_bins(truth[cb])
        } else {
            (0, 0)
        };
        let ud = if cb == 0 {
            (0, 0)
        } else {
            d_bins(truth[cb - 1])
        };
        let x1 = book.x1.row(ur.0 * n1d + ud.0);
        let x2 = book.x2.row(ur.1 * n2d + ud.1);
        let x3 = book.x3.row(relay_d.0 * n2d + relay_d.1);
        let (y, y3) = sim.send(x1, x2, x3, rng);
        if cb < blocks {
            let (v1, v2) = (book.v1.row(relay_d.0), book.v2.row(relay_d.1));
            let c1 = survivors(n1r, |u| {
                dec.relay_1.test(
                    &[v1, v2, book.x1.row(u * n1d + relay_d.0), x3, &y3],
                    &mut scratch,
                )
            });
            let c2 = survivors(n2r, |u| {
                dec.relay_2.test(
                    &[v1, v2, book.x2.row(u * n2d + relay_d.1), x3, &y3],
                    &mut scratch,
                )
            });
            let bins = if n1r * n2r == 1 {
                Some((0, 0))
            } else {
                unique_pair(&c1, &c2, |a, b| {
                    dec.relay_pair.test(
                        &[
                            v1,
                            v2,
                            book.x1.row(a * n1d + relay_d.0),
                            book.x2.row(b * n2d + relay_d.1),
                            x3,
                            &y3,
                        ],
                        &mut scratch,
                    )
                })
            };
            let est = bins.and_then(|(u1, u2)| {
                dec.relay_src
                    .decode(&book.f1r, u1, &book.f2r, u2, &src.w3[cb], &mut scratch)
            });
            out.relay_wrong[cb] = est != Some(truth[cb]);
            relay_d = est.map(d_bins).unwrap_or((0, 0));
        }
        received.push(y);
    }

    // Relay-bin indices of the block after the one being decoded; index 0
    // in the extra final block.
    let mut next_r = (0, 0);
    for b in (0..blocks).rev() {
        let y = &received[b + 1];
        let c1 = survivors(n1d, |u| {
            dec.dest_1.test(
                &[book.v1.row(u), book.x1.row(next_r.0 * n1d + u), y],
                &mut scratch,
            )
        });
        let c2 = survivors(n2d, |u| {
            dec.dest_2.test(
                &[book.v2.row(u), book.x2.row(next_r.1 * n2d + u), y],
                &mut scratch,
            )
        });
        let bins = if n1d * n2d == 1 {
            Some((0, 0))
        } else {
            unique_pair(&c1, &c2, |a, b| {
                dec.dest_pair.test(
                    &[
                        book.v1.row(a),
                        book.v2.row(b),
                        book.x1.row(next_r.0 * n1d + a),
                        book.x2.row(next_r.1 * n2d + b),
                        book.x3.row(a * n2d + b),
                        y,
                    ],
                    &mut scratch,
                )
            })
        };
        let est = bins.and_then(|(u1, u2)| {
            dec.dest_src
                .decode(&book.f1d, u1, &book.f2d, u2, &src.w[b], &mut scratch)
        });
        out.dest_wrong[b] = est != Some(truth[b]);
        next_r = est.map(r_bins).unwrap_or((0, 0));
    }
    Ok(out)
}
