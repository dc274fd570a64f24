//! Random bins and codeword tables for the three block-Markov schemes.

use marc_core::{derive_seed, sample_with, ConditionalPmf, JointPmf};
use marc_rates::model::{S1, S2, W, W3};
use marc_rates::{CpmInputA, CpmInputB, DmChannel, SeparationInput, SourceSideInfoModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{index_bits, BlockMarkovConfig, Rates, TABLE_LIMIT};
use crate::error::{Result, SimError};
use crate::seq::{checked_pow, BinMap, LetterSampler, SeqSpace};

const STREAM_CODEBOOK: u64 = 0xC0DE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Separation,
    CpmA,
    CpmB,
    UncodedSomarc,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Separation => "separation",
            Scheme::CpmA => "cpm_a",
            Scheme::CpmB => "cpm_b",
            Scheme::UncodedSomarc => "uncoded_somarc",
        })
    }
}

/// The generating distribution of a codebook.
#[derive(Debug, Clone, Copy)]
pub enum SchemeInput<'a> {
    Separation(&'a SeparationInput),
    CpmA(&'a CpmInputA),
    CpmB(&'a CpmInputB),
}

impl SchemeInput<'_> {
    pub fn scheme(&self) -> Scheme {
        match self {
            SchemeInput::Separation(_) => Scheme::Separation,
            SchemeInput::CpmA(_) => Scheme::CpmA,
            SchemeInput::CpmB(_) => Scheme::CpmB,
        }
    }
}

/// `rows` codewords of length `n`, stored contiguously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeTable {
    pub n: usize,
    pub rows: usize,
    letters: Vec<u8>,
}

impl CodeTable {
    pub fn row(&self, i: usize) -> &[u8] {
        &self.letters[i * self.n..(i + 1) * self.n]
    }

    fn generate(
        rows: usize,
        n: usize,
        sampler: &LetterSampler,
        rng: &mut ChaCha8Rng,
        mut kernel_row: impl FnMut(usize, usize) -> usize,
    ) -> Self {
        let mut letters = Vec::with_capacity(rows * n);
        for r in 0..rows {
            for k in 0..n {
                letters.push(sampler.sample(kernel_row(r, k), rng) as u8);
            }
        }
        CodeTable { n, rows, letters }
    }
}

/// Source and side-information sequences known to every node, used where
/// the schedule has no real block to refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filler {
    pub s1: Vec<u8>,
    pub s2: Vec<u8>,
    pub w: Vec<u8>,
    pub w3: Vec<u8>,
}

/// Irregular binning with a superposition channel code.
///
/// `x_i` is indexed by `u_r * |U_d| + u_d` and `x3` by `u1d * |U2d| + u2d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCodebook {
    pub s1: SeqSpace,
    pub s2: SeqSpace,
    pub f1r: BinMap,
    pub f2r: BinMap,
    pub f1d: BinMap,
    pub f2d: BinMap,
    pub v1: CodeTable,
    pub v2: CodeTable,
    pub x1: CodeTable,
    pub x2: CodeTable,
    pub x3: CodeTable,
}

/// Correlation-preserving codebook with bin-indexed cooperation.
///
/// `x_i` is indexed by `s_i * |U_i| + u_i`, `x3` by `u1 * |U2| + u2` and
/// `q` by the index of the common-part sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpmACodebook {
    pub s1: SeqSpace,
    pub s2: SeqSpace,
    pub t: SeqSpace,
    pub h1: Vec<u8>,
    pub h2: Vec<u8>,
    pub f1: BinMap,
    pub f2: BinMap,
    pub q: CodeTable,
    pub v1: CodeTable,
    pub v2: CodeTable,
    pub x1: CodeTable,
    pub x2: CodeTable,
    pub x3: CodeTable,
    pub filler: Filler,
}

/// Correlation-preserving codebook with source-indexed cooperation.
///
/// `x_i` is indexed by `u_i * |S_i^n| + s_i` and `x3` by
/// `s1 * |S2^n| + s2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpmBCodebook {
    pub s1: SeqSpace,
    pub s2: SeqSpace,
    pub t: SeqSpace,
    pub h1: Vec<u8>,
    pub h2: Vec<u8>,
    pub f1: BinMap,
    pub f2: BinMap,
    pub q: CodeTable,
    pub x1: CodeTable,
    pub x2: CodeTable,
    pub x3: CodeTable,
    pub filler: Filler,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodebookSpec {
    Separation(SeparationCodebook),
    CpmA(CpmACodebook),
    CpmB(CpmBCodebook),
}

impl CodebookSpec {
    pub fn scheme(&self) -> Scheme {
        match self {
            CodebookSpec::Separation(_) => Scheme::Separation,
            CodebookSpec::CpmA(_) => Scheme::CpmA,
            CodebookSpec::CpmB(_) => Scheme::CpmB,
        }
    }

    pub fn total_codewords(&self) -> usize {
        match self {
            CodebookSpec::Separation(c) => {
                c.v1.rows + c.v2.rows + c.x1.rows + c.x2.rows + c.x3.rows
            }
            CodebookSpec::CpmA(c) => {
                c.q.rows + c.v1.rows + c.v2.rows + c.x1.rows + c.x2.rows + c.x3.rows
            }
            CodebookSpec::CpmB(c) => c.q.rows + c.x1.rows + c.x2.rows + c.x3.rows,
        }
    }
}

/// Draws the bins and codeword tables of the scheme selected by `input`.
/// The result depends only on the arguments and `cfg.seed`.
pub fn build_codebook(
    input: SchemeInput<'_>,
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    cfg: &BlockMarkovConfig,
) -> Result<CodebookSpec> {
    cfg.validate()?;
    check_alphabets(model, ch)?;
    match input {
        SchemeInput::Separation(inp) => {
            build_separation(inp, model, ch, cfg).map(CodebookSpec::Separation)
        }
        SchemeInput::CpmA(inp) => build_cpm_a(inp, model, ch, cfg).map(CodebookSpec::CpmA),
        SchemeInput::CpmB(inp) => build_cpm_b(inp, model, ch, cfg).map(CodebookSpec::CpmB),
    }
}

fn check_alphabets(model: &SourceSideInfoModel, ch: &DmChannel) -> Result<()> {
    let (ny, ny3) = ch.output_sizes();
    let mut sizes = vec![("Y", ny), ("Y3", ny3)];
    for (name, s) in ["X1", "X2", "X3"].into_iter().zip(ch.input_sizes()) {
        sizes.push((name, s));
    }
    for name in [S1, S2, W, W3] {
        sizes.push((name, model.size(name)));
    }
    if let Some((name, s)) = sizes.into_iter().find(|(_, s)| *s > 256) {
        return Err(SimError::InvalidConfig(format!(
            "alphabet of {name} has {s} letters; the simulator stores letters as bytes"
        )));
    }
    Ok(())
}

fn check_input_sizes(ch: &DmChannel, kernels: [&ConditionalPmf; 3]) -> Result<()> {
    for ((k, size), name) in kernels.iter().zip(ch.input_sizes()).zip(["X1", "X2", "X3"]) {
        let got = k.outputs()[0].size;
        if got != size {
            return Err(SimError::InvalidConfig(format!(
                "the input distribution has {got} letters for {name}, the channel {size}"
            )));
        }
    }
    Ok(())
}

fn table_rng(seed: u64, table: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, STREAM_CODEBOOK, table))
}

fn check_budget(sizes: &[(&str, usize)]) -> Result<()> {
    let total: u128 = sizes.iter().map(|(_, s)| *s as u128).sum();
    if total > TABLE_LIMIT {
        let (name, size) = sizes.iter().max_by_key(|(_, s)| *s).expect("non-empty");
        return Err(SimError::Budget {
            table: format!("codebook ({name} is the largest table with {size} codewords)"),
            size: total,
            limit: TABLE_LIMIT,
        });
    }
    Ok(())
}

fn table_rows(a: usize, b: usize, what: &str) -> Result<usize> {
    let rows = a as u128 * b as u128;
    if rows > TABLE_LIMIT {
        return Err(SimError::Budget {
            table: what.into(),
            size: rows,
            limit: TABLE_LIMIT,
        });
    }
    Ok(rows as usize)
}

fn source_spaces(model: &SourceSideInfoModel, len: usize) -> Result<(SeqSpace, SeqSpace)> {
    let s1 = SeqSpace::new(model.size(S1), len, "source 1 sequence space")?;
    let s2 = SeqSpace::new(model.size(S2), len, "source 2 sequence space")?;
    table_rows(s1.count, s2.count, "source pair enumeration")?;
    Ok((s1, s2))
}

fn sampler(k: &ConditionalPmf) -> LetterSampler {
    LetterSampler::new(k.kernel(), k.output_cells())
}

fn marginal_sampler(p: &JointPmf) -> LetterSampler {
    LetterSampler::new(p.weights(), p.num_cells())
}

fn bins(space: &SeqSpace, bits: u32, seed: u64, table: u64) -> Result<BinMap> {
    BinMap::random(space.count, bits, &mut table_rng(seed, table))
}

fn build_separation(
    inp: &SeparationInput,
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    cfg: &BlockMarkovConfig,
) -> Result<SeparationCodebook> {
    inp.validate()?;
    check_input_sizes(ch, [&inp.k_x1, &inp.k_x2, &inp.k_x3])?;
    let Rates::Separation { r1r, r2r, r1d, r2d } = cfg.rates else {
        return Err(SimError::InvalidConfig(
            "the separation scheme needs separation rates".into(),
        ));
    };
    let (m, n) = (cfg.m, cfg.n);
    let (s1, s2) = source_spaces(model, m)?;
    let bits = [r1r, r2r, r1d, r2d].map(|r| index_bits(m, r));
    let count = |b: u32| checked_pow(2, b as usize, "bin index set");
    let (n1r, n2r, n1d, n2d) = (
        count(bits[0])?,
        count(bits[1])?,
        count(bits[2])?,
        count(bits[3])?,
    );
    let rows = [
        ("v1", n1d),
        ("v2", n2d),
        ("x1", table_rows(n1r, n1d, "x1 table")?),
        ("x2", table_rows(n2r, n2d, "x2 table")?),
        ("x3", table_rows(n1d, n2d, "x3 table")?),
    ];
    check_budget(&rows)?;

    let seed = cfg.seed;
    let f1r = bins(&s1, bits[0], seed, 0)?;
    let f2r = bins(&s2, bits[1], seed, 1)?;
    let f1d = bins(&s1, bits[2], seed, 2)?;
    let f2d = bins(&s2, bits[3], seed, 3)?;

    let v1 = CodeTable::generate(
        n1d,
        n,
        &marginal_sampler(&inp.p_v1),
        &mut table_rng(seed, 4),
        |_, _| 0,
    );
    let v2 = CodeTable::generate(
        n2d,
        n,
        &marginal_sampler(&inp.p_v2),
        &mut table_rng(seed, 5),
        |_, _| 0,
    );
    // Kernels are conditioned on V1, V2 and (V1, V2) respectively.
    let x1 = CodeTable::generate(
        n1r * n1d,
        n,
        &sampler(&inp.k_x1),
        &mut table_rng(seed, 6),
        |r, k| v1.row(r % n1d)[k] as usize,
    );
    let x2 = CodeTable::generate(
        n2r * n2d,
        n,
        &sampler(&inp.k_x2),
        &mut table_rng(seed, 7),
        |r, k| v2.row(r % n2d)[k] as usize,
    );
    let nv2 = inp.p_v2.num_cells();
    let x3 = CodeTable::generate(
        n1d * n2d,
        n,
        &sampler(&inp.k_x3),
        &mut table_rng(seed, 8),
        |r, k| v1.row(r / n2d)[k] as usize * nv2 + v2.row(r % n2d)[k] as usize,
    );
    Ok(SeparationCodebook {
        s1,
        s2,
        f1r,
        f2r,
        f1d,
        f2d,
        v1,
        v2,
        x1,
        x2,
        x3,
    })
}

struct CpmCommon {
    s1: SeqSpace,
    s2: SeqSpace,
    t: SeqSpace,
    h1: Vec<u8>,
    h2: Vec<u8>,
    f1: BinMap,
    f2: BinMap,
    q: CodeTable,
    filler: Filler,
}

impl CpmCommon {
    fn t_index_1(&self, s: usize) -> usize {
        let seq = self.s1.sequence(s);
        self.t
            .index(&seq.iter().map(|&a| self.h1[a as usize]).collect::<Vec<_>>())
    }

    fn t_index_2(&self, s: usize) -> usize {
        let seq = self.s2.sequence(s);
        self.t
            .index(&seq.iter().map(|&a| self.h2[a as usize]).collect::<Vec<_>>())
    }
}

fn cpm_common(
    model: &SourceSideInfoModel,
    p_q: &JointPmf,
    cfg: &BlockMarkovConfig,
) -> Result<CpmCommon> {
    let Rates::Cpm { r1, r2 } = cfg.rates else {
        return Err(SimError::InvalidConfig(
            "the joint source-channel schemes need CPM rates".into(),
        ));
    };
    if cfg.m != cfg.n {
        return Err(SimError::InvalidConfig(format!(
            "the joint source-channel schemes use m = n, got m={} n={}",
            cfg.m, cfg.n
        )));
    }
    let n = cfg.n;
    let (s1, s2) = source_spaces(model, n)?;
    let cp = model.common_part();
    let t = SeqSpace::new(cp.t_size.max(1), n, "common-part sequence space")?;
    let seed = cfg.seed;
    let f1 = bins(&s1, index_bits(n, r1), seed, 10)?;
    let f2 = bins(&s2, index_bits(n, r2), seed, 11)?;
    let q = CodeTable::generate(
        t.count,
        n,
        &marginal_sampler(p_q),
        &mut table_rng(seed, 12),
        |_, _| 0,
    );
    let draws = sample_with(model.joint(), n, &mut table_rng(seed, 13))?;
    let to_u8 = |v: &Vec<usize>| v.iter().map(|&a| a as u8).collect::<Vec<u8>>();
    let filler = Filler {
        s1: to_u8(&draws[0]),
        s2: to_u8(&draws[1]),
        w: to_u8(&draws[2]),
        w3: to_u8(&draws[3]),
    };
    Ok(CpmCommon {
        s1,
        s2,
        t,
        h1: cp.h1.iter().map(|&x| x as u8).collect(),
        h2: cp.h2.iter().map(|&x| x as u8).collect(),
        f1,
        f2,
        q,
        filler,
    })
}

fn build_cpm_a(
    inp: &CpmInputA,
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    cfg: &BlockMarkovConfig,
) -> Result<CpmACodebook> {
    inp.joint(model)?;
    check_input_sizes(ch, [&inp.k_x1, &inp.k_x2, &inp.k_x3])?;
    let c = cpm_common(model, &inp.p_q, cfg)?;
    let (nb1, nb2) = (c.f1.num_bins(), c.f2.num_bins());
    let rows = [
        ("q", c.q.rows),
        ("v1", nb1),
        ("v2", nb2),
        ("x1", table_rows(c.s1.count, nb1, "x1 table")?),
        ("x2", table_rows(c.s2.count, nb2, "x2 table")?),
        ("x3", table_rows(nb1, nb2, "x3 table")?),
    ];
    check_budget(&rows)?;
    let (n, seed) = (cfg.n, cfg.seed);
    let v1 = CodeTable::generate(
        nb1,
        n,
        &marginal_sampler(&inp.p_v1),
        &mut table_rng(seed, 14),
        |_, _| 0,
    );
    let v2 = CodeTable::generate(
        nb2,
        n,
        &marginal_sampler(&inp.p_v2),
        &mut table_rng(seed, 15),
        |_, _| 0,
    );

    let user = |space: &SeqSpace,
                nb: usize,
                v: &CodeTable,
                k: &ConditionalPmf,
                t_of: &dyn Fn(usize) -> usize,
                table: u64| {
        // Kernel rows are ordered (S_i, V_i, Q).
        let (nv, nq) = (k.given()[1].size, k.given()[2].size);
        let mut seq = vec![0u8; n];
        let mut q_row = 0;
        let mut last = usize::MAX;
        CodeTable::generate(
            space.count * nb,
            n,
            &sampler(k),
            &mut table_rng(seed, table),
            |r, kk| {
                let s = r / nb;
                if s != last {
                    space.write(s, &mut seq);
                    q_row = t_of(s);
                    last = s;
                }
                (seq[kk] as usize * nv + v.row(r % nb)[kk] as usize) * nq
                    + c.q.row(q_row)[kk] as usize
            },
        )
    };
    let x1 = user(&c.s1, nb1, &v1, &inp.k_x1, &|s| c.t_index_1(s), 16);
    let x2 = user(&c.s2, nb2, &v2, &inp.k_x2, &|s| c.t_index_2(s), 17);
    let nv2 = inp.p_v2.num_cells();
    let x3 = CodeTable::generate(
        nb1 * nb2,
        n,
        &sampler(&inp.k_x3),
        &mut table_rng(seed, 18),
        |r, k| v1.row(r / nb2)[k] as usize * nv2 + v2.row(r % nb2)[k] as usize,
    );
    Ok(CpmACodebook {
        s1: c.s1,
        s2: c.s2,
        t: c.t,
        h1: c.h1,
        h2: c.h2,
        f1: c.f1,
        f2: c.f2,
        q: c.q,
        v1,
        v2,
        x1,
        x2,
        x3,
        filler: c.filler,
    })
}

fn build_cpm_b(
    inp: &CpmInputB,
    model: &SourceSideInfoModel,
    ch: &DmChannel,
    cfg: &BlockMarkovConfig,
) -> Result<CpmBCodebook> {
    inp.joint(model)?;
    check_input_sizes(ch, [&inp.k_x1, &inp.k_x2, &inp.k_x3])?;
    let c = cpm_common(model, &inp.p_q, cfg)?;
    let (nb1, nb2) = (c.f1.num_bins(), c.f2.num_bins());
    let rows = [
        ("q", c.q.rows),
        ("x1", table_rows(nb1, c.s1.count, "x1 table")?),
        ("x2", table_rows(nb2, c.s2.count, "x2 table")?),
        ("x3", table_rows(c.s1.count, c.s2.count, "x3 table")?),
    ];
    check_budget(&rows)?;
    let (n, seed) = (cfg.n, cfg.seed);
    let nq = inp.p_q.num_cells();

    let user = |space: &SeqSpace,
                nb: usize,
                k: &ConditionalPmf,
                t_of: &dyn Fn(usize) -> usize,
                table: u64| {
        // Kernel rows are ordered (S_i, Q).
        let t_rows: Vec<usize> = (0..space.count).map(t_of).collect();
        let mut seq = vec![0u8; n];
        let mut last = usize::MAX;
        CodeTable::generate(
            nb * space.count,
            n,
            &sampler(k),
            &mut table_rng(seed, table),
            |r, kk| {
                let s = r % space.count;
                if s != last {
                    space.write(s, &mut seq);
                    last = s;
                }
                seq[kk] as usize * nq + c.q.row(t_rows[s])[kk] as usize
            },
        )
    };
    let x1 = user(&c.s1, nb1, &inp.k_x1, &|s| c.t_index_1(s), 20);
    let x2 = user(&c.s2, nb2, &inp.k_x2, &|s| c.t_index_2(s), 21);

    // Kernel rows are ordered (S1, S2, Q). The common-part sequence of a
    // pair is taken from the first source; pairs where the two disagree
    // have zero probability and their codewords are never compared.
    let n_s2 = model.size(S2);
    let mut seq1 = vec![0u8; n];
    let mut seq2 = vec![0u8; n];
    let mut q_row = 0;
    let mut last = usize::MAX;
    let x3 = CodeTable::generate(
        c.s1.count * c.s2.count,
        n,
        &sampler(&inp.k_x3),
        &mut table_rng(seed, 22),
        |r, k| {
            if r != last {
                c.s1.write(r / c.s2.count, &mut seq1);
                c.s2.write(r % c.s2.count, &mut seq2);
                q_row = c.t_index_1(r / c.s2.count);
                last = r;
            }
            (seq1[k] as usize * n_s2 + seq2[k] as usize) * nq + c.q.row(q_row)[k] as usize
        },
    );
    Ok(CpmBCodebook {
        s1: c.s1,
        s2: c.s2,
        t: c.t,
        h1: c.h1,
        h2: c.h2,
        f1: c.f1,
        f2: c.f2,
        q: c.q,
        x1,
        x2,
        x3,
        filler: c.filler,
    })
}
