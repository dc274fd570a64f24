//! The two correlation-preserving block-Markov schemes.
//!
//! In scheme A the sources cooperate through bin indices: the relay decodes
//! the source pair directly and the destination decodes bin indices, then
//! bins. Scheme B reverses the roles: the relay decodes bin indices and
//! forwards its estimate of the sources themselves, which the destination
//! decodes directly.

use std::time::Instant;

use marc_core::derive_seed;
use marc_rates::model::{Q, S1, S2, T, V1, V2, W, W3, X1, X2, X3, Y, Y3};
use marc_rates::{CpmInputA, CpmInputB, DmChannel, SourceSideInfoModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codebook::{
    build_codebook, CodeTable, CodebookSpec, CpmACodebook, CpmBCodebook, Scheme, SchemeInput,
};
use crate::config::BlockMarkovConfig;
use crate::decode::{
    survivors, unique_pair, ChannelSim, SourceBlocks, SourceDecoder, STREAM_TRIAL,
};
use crate::error::Result;
use crate::report::{SimReport, TrialOutcome};
use crate::separation::typicality_note;
use crate::seq::SeqSpace;
use crate::typicality::Tester;

/// Every sequence of one source with its common-part sequence.
struct SourceTable {
    n: usize,
    seqs: Vec<u8>,
    t_seqs: Vec<u8>,
    t_index: Vec<usize>,
}

impl SourceTable {
    fn new(space: &SeqSpace, h: &[u8], t: &SeqSpace) -> Self {
        let n = space.len;
        let mut seqs = vec![0u8; space.count * n];
        let mut t_seqs = vec![0u8; space.count * n];
        let mut t_index = Vec::with_capacity(space.count);
        for s in 0..space.count {
            let seq = &mut seqs[s * n..(s + 1) * n];
            space.write(s, seq);
            let ts = &mut t_seqs[s * n..(s + 1) * n];
            for (d, &a) in ts.iter_mut().zip(seq.iter()) {
                *d = h[a as usize];
            }
            t_index.push(t.index(ts));
        }
        SourceTable {
            n,
            seqs,
            t_seqs,
            t_index,
        }
    }

    fn seq(&self, s: usize) -> &[u8] {
        &self.seqs[s * self.n..(s + 1) * self.n]
    }

    fn t(&self, s: usize) -> &[u8] {
        &self.t_seqs[s * self.n..(s + 1) * self.n]
    }

    fn q<'a>(&self, q: &'a CodeTable, s: usize) -> &'a [u8] {
        q.row(self.t_index[s])
    }
}

fn finish(
    scheme: Scheme,
    cfg: &BlockMarkovConfig,
    trials: usize,
    outcomes: &[TrialOutcome],
    codewords: usize,
    start: Instant,
) -> SimReport {
    let config = serde_json::json!({ "block_markov": cfg, "trials": trials });
    let mut report = SimReport::aggregate(scheme, config, cfg.criterion, outcomes, cfg.blocks);
    report.codewords = codewords;
    report.notes.push(typicality_note(cfg));
    report.wall_clock_secs = start.elapsed().as_secs_f64();
    report
}

struct DecodersA {
    relay_1: Tester,
    relay_2: Tester,
    relay_pair: Tester,
    dest_1: Tester,
    dest_2: Tester,
    dest_pair: Tester,
    dest_src: SourceDecoder,
}

/// Simulates the scheme in which the relay forwards bin indices.
///
/// The extra block `B + 1` carries fixed filler source sequences known to
/// every node, and the destination starts backward decoding from them.
pub fn run_cpm_scheme_a(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    input: &CpmInputA,
    cfg: &BlockMarkovConfig,
    trials: usize,
) -> Result<SimReport> {
    let start = Instant::now();
    let spec = build_codebook(SchemeInput::CpmA(input), model, ch, cfg)?;
    let codewords = spec.total_codewords();
    let CodebookSpec::CpmA(book) = spec else {
        unreachable!("scheme A input builds a scheme A codebook");
    };
    let eps = cfg.epsilon;
    let base = input.joint(model)?;
    let relay = base.compose(ch.to_relay())?;
    let dest = base.compose(ch.to_destination())?;
    let dec = DecodersA {
        relay_1: Tester::new(&relay, &[S1, T, Q, V1, V2, X1, X3, W3, Y3], eps)?,
        relay_2: Tester::new(&relay, &[S2, T, Q, V1, V2, X2, X3, W3, Y3], eps)?,
        relay_pair: Tester::new(&relay, &[S1, S2, T, Q, V1, V2, X1, X2, X3, W3, Y3], eps)?,
        dest_1: Tester::new(&dest, &[S1, S2, T, Q, V1, X1, W, Y], eps)?,
        dest_2: Tester::new(&dest, &[S1, S2, T, Q, V2, X2, W, Y], eps)?,
        dest_pair: Tester::new(&dest, &[S1, S2, T, Q, V1, V2, X1, X2, X3, W, Y], eps)?,
        dest_src: SourceDecoder::new(model, W, book.s1, book.s2, eps)?,
    };
    let tables = (
        SourceTable::new(&book.s1, &book.h1, &book.t),
        SourceTable::new(&book.s2, &book.h2, &book.t),
    );
    let sim = ChannelSim::new(ch);
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, STREAM_TRIAL, t as u64));
            trial_a(model, &book, &tables, &dec, &sim, cfg, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = finish(Scheme::CpmA, cfg, trials, &outcomes, codewords, start);
    report
        .notes
        .push("final block carries the shared filler source pair".into());
    Ok(report)
}

fn trial_a(
    model: &SourceSideInfoModel,
    book: &CpmACodebook,
    (tab1, tab2): &(SourceTable, SourceTable),
    dec: &DecodersA,
    sim: &ChannelSim,
    cfg: &BlockMarkovConfig,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome> {
    let blocks = cfg.blocks;
    let src = SourceBlocks::draw(model, blocks, cfg.n, rng)?;
    let truth: Vec<(usize, usize)> = (0..blocks)
        .map(|b| (book.s1.index(&src.s1[b]), book.s2.index(&src.s2[b])))
        .collect();
    let filler = (
        book.s1.index(&book.filler.s1),
        book.s2.index(&book.filler.s2),
    );
    let (nb1, nb2) = (book.f1.num_bins(), book.f2.num_bins());
    let (ns1, ns2) = (book.s1.count, book.s2.count);
    let bins = |s: (usize, usize)| (book.f1.bin(s.0), book.f2.bin(s.1));
    let mut scratch = Vec::new();
    let mut out = TrialOutcome::new(blocks);
    let mut received = Vec::with_capacity(blocks + 1);

    // Bin indices the relay believes were sent one block earlier.
    let mut relay_u = (0, 0);
    for cb in 0..=blocks {
        let s = if cb < blocks { truth[cb] } else { filler };
        let u = if cb == 0 { (0, 0) } else { bins(truth[cb - 1]) };
        let x1 = book.x1.row(s.0 * nb1 + u.0);
        let x2 = book.x2.row(s.1 * nb2 + u.1);
        let x3 = book.x3.row(relay_u.0 * nb2 + relay_u.1);
        let (y, y3) = sim.send(x1, x2, x3, rng);
        if cb < blocks {
            let (v1, v2) = (book.v1.row(relay_u.0), book.v2.row(relay_u.1));
            let w3 = &src.w3[cb][..];
            let est = if ns1 * ns2 == 1 {
                Some((0, 0))
            } else {
                let c1 = survivors(ns1, |a| {
                    let x = book.x1.row(a * nb1 + relay_u.0);
                    dec.relay_1.test(
                        &[
                            tab1.seq(a),
                            tab1.t(a),
                            tab1.q(&book.q, a),
                            v1,
                            v2,
                            x,
                            x3,
                            w3,
                            &y3,
                        ],
                        &mut scratch,
                    )
                });
                let c2 = survivors(ns2, |b| {
                    let x = book.x2.row(b * nb2 + relay_u.1);
                    dec.relay_2.test(
                        &[
                            tab2.seq(b),
                            tab2.t(b),
                            tab2.q(&book.q, b),
                            v1,
                            v2,
                            x,
                            x3,
                            w3,
                            &y3,
                        ],
                        &mut scratch,
                    )
                });
                unique_pair(&c1, &c2, |a, b| {
                    tab1.t_index[a] == tab2.t_index[b]
                        && dec.relay_pair.test(
                            &[
                                tab1.seq(a),
                                tab2.seq(b),
                                tab1.t(a),
                                tab1.q(&book.q, a),
                                v1,
                                v2,
                                book.x1.row(a * nb1 + relay_u.0),
                                book.x2.row(b * nb2 + relay_u.1),
                                x3,
                                w3,
                                &y3,
                            ],
                            &mut scratch,
                        )
                })
            };
            out.relay_wrong[cb] = est != Some(truth[cb]);
            relay_u = est.map(bins).unwrap_or((0, 0));
        }
        received.push(y);
    }

    // Backward decoding starts from the filler pair and its side
    // information.
    let mut next = filler;
    let mut next_w = book.filler.w.clone();
    for b in (0..blocks).rev() {
        let y = &received[b + 1][..];
        let (s1, s2) = (tab1.seq(next.0), tab2.seq(next.1));
        let (t, q) = (tab1.t(next.0), tab1.q(&book.q, next.0));
        let u = if nb1 * nb2 == 1 {
            Some((0, 0))
        } else {
            let c1 = survivors(nb1, |a| {
                let x = book.x1.row(next.0 * nb1 + a);
                dec.dest_1
                    .test(&[s1, s2, t, q, book.v1.row(a), x, &next_w, y], &mut scratch)
            });
            let c2 = survivors(nb2, |c| {
                let x = book.x2.row(next.1 * nb2 + c);
                dec.dest_2
                    .test(&[s1, s2, t, q, book.v2.row(c), x, &next_w, y], &mut scratch)
            });
            unique_pair(&c1, &c2, |a, c| {
                dec.dest_pair.test(
                    &[
                        s1,
                        s2,
                        t,
                        q,
                        book.v1.row(a),
                        book.v2.row(c),
                        book.x1.row(next.0 * nb1 + a),
                        book.x2.row(next.1 * nb2 + c),
                        book.x3.row(a * nb2 + c),
                        &next_w,
                        y,
                    ],
                    &mut scratch,
                )
            })
        };
        let est = u.and_then(|(u1, u2)| {
            dec.dest_src
                .decode(&book.f1, u1, &book.f2, u2, &src.w[b], &mut scratch)
        });
        out.dest_wrong[b] = est != Some(truth[b]);
        next = est.unwrap_or((0, 0));
        next_w = src.w[b].clone();
    }
    Ok(out)
}

struct DecodersB {
    relay_1: Tester,
    relay_2: Tester,
    relay_pair: Tester,
    relay_src: SourceDecoder,
    dest_1: Tester,
    dest_2: Tester,
    dest_pair: Tester,
}

/// Simulates the scheme in which the relay forwards source estimates.
///
/// The relay's channel decoder at block `b` uses the side information of
/// block `b - 1`. Before the first block there is none, so it uses the
/// filler side information drawn with the filler sources.
pub fn run_cpm_scheme_b(
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    input: &CpmInputB,
    cfg: &BlockMarkovConfig,
    trials: usize,
) -> Result<SimReport> {
    let start = Instant::now();
    let spec = build_codebook(SchemeInput::CpmB(input), model, ch, cfg)?;
    let codewords = spec.total_codewords();
    let CodebookSpec::CpmB(book) = spec else {
        unreachable!("scheme B input builds a scheme B codebook");
    };
    let eps = cfg.epsilon;
    let base = input.joint(model)?;
    let relay = base.compose(ch.to_relay())?;
    let dest = base.compose(ch.to_destination())?;
    let dec = DecodersB {
        relay_1: Tester::new(&relay, &[S1, S2, T, Q, X1, X3, W3, Y3], eps)?,
        relay_2: Tester::new(&relay, &[S1, S2, T, Q, X2, X3, W3, Y3], eps)?,
        relay_pair: Tester::new(&relay, &[S1, S2, T, Q, X1, X2, X3, W3, Y3], eps)?,
        relay_src: SourceDecoder::new(model, W3, book.s1, book.s2, eps)?,
        dest_1: Tester::new(&dest, &[S1, T, Q, X1, W, Y], eps)?,
        dest_2: Tester::new(&dest, &[S2, T, Q, X2, W, Y], eps)?,
        dest_pair: Tester::new(&dest, &[S1, S2, T, Q, X1, X2, X3, W, Y], eps)?,
    };
    let tables = (
        SourceTable::new(&book.s1, &book.h1, &book.t),
        SourceTable::new(&book.s2, &book.h2, &book.t),
    );
    let sim = ChannelSim::new(ch);
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, STREAM_TRIAL, t as u64));
            trial_b(model, &book, &tables, &dec, &sim, cfg, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = finish(Scheme::CpmB, cfg, trials, &outcomes, codewords, start);
    report
        .notes
        .push("relay side information before the first block: shared filler sequence".into());
    Ok(report)
}

fn trial_b(
    model: &SourceSideInfoModel,
    book: &CpmBCodebook,
    (tab1, tab2): &(SourceTable, SourceTable),
    dec: &DecodersB,
    sim: &ChannelSim,
    cfg: &BlockMarkovConfig,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome> {
    let blocks = cfg.blocks;
    let src = SourceBlocks::draw(model, blocks, cfg.n, rng)?;
    let truth: Vec<(usize, usize)> = (0..blocks)
        .map(|b| (book.s1.index(&src.s1[b]), book.s2.index(&src.s2[b])))
        .collect();
    let filler = (
        book.s1.index(&book.filler.s1),
        book.s2.index(&book.filler.s2),
    );
    let (nb1, nb2) = (book.f1.num_bins(), book.f2.num_bins());
    let (ns1, ns2) = (book.s1.count, book.s2.count);
    let bins = |s: (usize, usize)| (book.f1.bin(s.0), book.f2.bin(s.1));
    let mut scratch = Vec::new();
    let mut out = TrialOutcome::new(blocks);
    let mut received = Vec::with_capacity(blocks + 1);

    // The relay's estimate of the previous source block.
    let mut relay_s = filler;
    for cb in 0..=blocks {
        let u = if cb < blocks { bins(truth[cb]) } else { (0, 0) };
        let prev = if cb == 0 { filler } else { truth[cb - 1] };
        let x1 = book.x1.row(u.0 * ns1 + prev.0);
        let x2 = book.x2.row(u.1 * ns2 + prev.1);
        let x3 = book.x3.row(relay_s.0 * ns2 + relay_s.1);
        let (y, y3) = sim.send(x1, x2, x3, rng);
        if cb < blocks {
            let w3_prev = if cb == 0 {
                &book.filler.w3[..]
            } else {
                &src.w3[cb - 1][..]
            };
            let (s1, s2) = (tab1.seq(relay_s.0), tab2.seq(relay_s.1));
            let (t, q) = (tab1.t(relay_s.0), tab1.q(&book.q, relay_s.0));
            let u_est = if nb1 * nb2 == 1 {
                Some((0, 0))
            } else {
                let c1 = survivors(nb1, |a| {
                    let x = book.x1.row(a * ns1 + relay_s.0);
                    dec.relay_1
                        .test(&[s1, s2, t, q, x, x3, w3_prev, &y3], &mut scratch)
                });
                let c2 = survivors(nb2, |c| {
                    let x = book.x2.row(c * ns2 + relay_s.1);
                    dec.relay_2
                        .test(&[s1, s2, t, q, x, x3, w3_prev, &y3], &mut scratch)
                });
                unique_pair(&c1, &c2, |a, c| {
                    dec.relay_pair.test(
                        &[
                            s1,
                            s2,
                            t,
                            q,
                            book.x1.row(a * ns1 + relay_s.0),
                            book.x2.row(c * ns2 + relay_s.1),
                            x3,
                            w3_prev,
                            &y3,
                        ],
                        &mut scratch,
                    )
                })
            };
            let est = u_est.and_then(|(u1, u2)| {
                dec.relay_src
                    .decode(&book.f1, u1, &book.f2, u2, &src.w3[cb], &mut scratch)
            });
            out.relay_wrong[cb] = est != Some(truth[cb]);
            relay_s = est.unwrap_or((0, 0));
        }
        received.push(y);
    }

    // Bin indices of the block after the one being decoded; index 0 in the
    // extra final block.
    let mut next_u = (0, 0);
    for b in (0..blocks).rev() {
        let y = &received[b + 1][..];
        let w = &src.w[b][..];
        let est = if ns1 * ns2 == 1 {
            Some((0, 0))
        } else {
            let c1 = survivors(ns1, |a| {
                let x = book.x1.row(next_u.0 * ns1 + a);
                dec.dest_1.test(
                    &[tab1.seq(a), tab1.t(a), tab1.q(&book.q, a), x, w, y],
                    &mut scratch,
                )
            });
            let c2 = survivors(ns2, |c| {
                let x = book.x2.row(next_u.1 * ns2 + c);
                dec.dest_2.test(
                    &[tab2.seq(c), tab2.t(c), tab2.q(&book.q, c), x, w, y],
                    &mut scratch,
                )
            });
            unique_pair(&c1, &c2, |a, c| {
                tab1.t_index[a] == tab2.t_index[c]
                    && dec.dest_pair.test(
                        &[
                            tab1.seq(a),
                            tab2.seq(c),
                            tab1.t(a),
                            tab1.q(&book.q, a),
                            book.x1.row(next_u.0 * ns1 + a),
                            book.x2.row(next_u.1 * ns2 + c),
                            book.x3.row(a * ns2 + c),
                            w,
                            y,
                        ],
                        &mut scratch,
                    )
            })
        };
        out.dest_wrong[b] = est != Some(truth[b]);
        next_u = est.map(bins).unwrap_or((0, 0));
    }
    Ok(out)
}
