//! Monte Carlo frame-error runs and kernel benchmarks.
//!
//! Trials are split into fixed-size chunks; chunk `i` draws from a ChaCha
//! stream `i` under the master seed, so a report depends only on the
//! configuration and never on thread count or scheduling.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channels::{
    sample_channel, sample_isi, Channel, ChannelConfig, ChannelSpec, DiscreteChannel, ErasureChannel,
    ErasureObservation, IsiChannel,
};
use crate::codes::{
    build_bipolar_codebook, build_codebook_matrix, build_codebook_matrix_isi, enumerate_codewords,
    hamming_distance, Code, Limits, LinearCode, Symbol,
};
use crate::decoder::{
    argmax_scan, erasure_decode, isi_score_vector, score_vector, top_list, SyndromeDecoder, TieTolerance,
};
use crate::error::{Error, Result};
use crate::mailman::{self, BinaryMatrix, OpCount};
use crate::{io, oracle};

/// Trials per independently seeded chunk.
pub const CHUNK: u64 = 4096;

#[derive(Clone, Debug, PartialEq)]
pub enum CodeSource {
    Codebook(PathBuf),
    Linear(PathBuf),
    RandomLinear { q: usize, n: usize, k: usize, seed: u64 },
    Builtin(BuiltinCode),
}

/// Codes available by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinCode {
    /// The `[7,4]` binary Hamming code.
    Hamming74,
    /// The nonlinear code `{001, 010, 100, 111}`.
    Example1,
}

impl BuiltinCode {
    pub fn load(self) -> (Code, Option<LinearCode>) {
        match self {
            Self::Hamming74 => {
                let lin = LinearCode::hamming_7_4();
                let code = enumerate_codewords(&lin, &Limits::default()).expect("16 codewords");
                (code, Some(lin))
            }
            Self::Example1 => (Code::binary(&["001", "010", "100", "111"]).expect("valid code"), None),
        }
    }
}

impl fmt::Display for BuiltinCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hamming74 => "hamming74",
            Self::Example1 => "example1",
        })
    }
}

impl FromStr for BuiltinCode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming74" => Ok(Self::Hamming74),
            "example1" => Ok(Self::Example1),
            _ => Err(Error::InvalidParams(format!(
                "unknown built-in code {s:?} (expected hamming74 or example1)"
            ))),
        }
    }
}

impl CodeSource {
    /// The explicit codebook, plus the linear structure when there is one.
    pub fn load(&self, limits: &Limits) -> Result<(Code, Option<LinearCode>)> {
        let linear = match self {
            Self::Codebook(path) => return Ok((io::read_code(path)?, None)),
            Self::Linear(path) => io::read_linear_code(path)?,
            Self::RandomLinear { q, n, k, seed } => {
                LinearCode::random(*q, *n, *k, &mut ChaCha8Rng::seed_from_u64(*seed))?
            }
            Self::Builtin(b) => return Ok(b.load()),
        };
        Ok((enumerate_codewords(&linear, limits)?, Some(linear)))
    }
}

impl fmt::Display for CodeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Codebook(p) => write!(f, "codebook {}", p.display()),
            Self::Linear(p) => write!(f, "linear {}", p.display()),
            Self::RandomLinear { q, n, k, seed } => write!(f, "random [{n},{k}]_{q} seed {seed}"),
            Self::Builtin(b) => write!(f, "builtin {b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Ml,
    Erasure,
    Syndrome,
    Isi,
}

impl Variant {
    /// The natural decoder for a channel kind.
    pub fn default_for(channel: &ChannelSpec) -> Self {
        match channel {
            ChannelSpec::Erasure(_) => Self::Erasure,
            ChannelSpec::IsiDiscrete(_) => Self::Isi,
            _ => Self::Ml,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ml => "ml",
            Self::Erasure => "erasure",
            Self::Syndrome => "syndrome",
            Self::Isi => "isi",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ml" => Ok(Self::Ml),
            "erasure" => Ok(Self::Erasure),
            "syndrome" => Ok(Self::Syndrome),
            "isi" => Ok(Self::Isi),
            _ => Err(Error::InvalidParams(format!("unknown decoder variant {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub code: CodeSource,
    pub channel: ChannelConfig,
    pub trials: u64,
    pub seed: u64,
    pub list_size: Option<usize>,
    /// `None` picks [`Variant::default_for`] the channel.
    pub variant: Option<Variant>,
    pub oracle: bool,
    pub tolerance: TieTolerance,
    /// Adds wall time per trial to the report (which then stops being reproducible).
    pub timing: bool,
    pub limits: Limits,
}

impl SimConfig {
    pub fn new(code: CodeSource, channel: ChannelConfig, trials: u64, seed: u64) -> Self {
        Self {
            code,
            channel,
            trials,
            seed,
            list_size: None,
            variant: None,
            oracle: false,
            tolerance: TieTolerance::default(),
            timing: false,
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub code: String,
    pub q: usize,
    pub n: usize,
    pub codewords: usize,
    pub channel: String,
    pub decoder: Variant,
    pub seed: u64,
    pub trials: u64,
    pub word_errors: u64,
    pub frame_error_rate: f64,
    pub tie_events: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub list_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub list_errors: Option<u64>,
    pub mean_decode_additions: f64,
    pub oracle_checked: bool,
    pub oracle_disagreements: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds_per_trial: Option<f64>,
}

impl SimReport {
    pub fn to_table(&self) -> String {
        let mut out = String::from("# frame error = transmitted codeword not in the decoder's tie set\n");
        let mut row = |k: &str, v: String| writeln!(out, "{k:<24}{v}").unwrap();
        row("code", format!("{} (q={} n={} S={})", self.code, self.q, self.n, self.codewords));
        row("channel", self.channel.clone());
        row("decoder", self.decoder.to_string());
        row("seed", self.seed.to_string());
        row("trials", self.trials.to_string());
        row("word_errors", self.word_errors.to_string());
        row("frame_error_rate", format!("{:.6e}", self.frame_error_rate));
        row("tie_events", self.tie_events.to_string());
        if let (Some(l), Some(e)) = (self.list_size, self.list_errors) {
            row("list_size", l.to_string());
            row("list_errors", e.to_string());
        }
        row("mean_decode_additions", format!("{:.1}", self.mean_decode_additions));
        row(
            "oracle_disagreements",
            if self.oracle_checked {
                self.oracle_disagreements.to_string()
            } else {
                "unchecked".into()
            },
        );
        if let Some(t) = self.seconds_per_trial {
            row("seconds_per_trial", format!("{t:.3e}"));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut head = String::from(
            "trials,word_errors,frame_error_rate,tie_events,list_size,list_errors,mean_decode_additions,oracle_disagreements",
        );
        let opt = |x: Option<u64>| x.map_or(String::new(), |v| v.to_string());
        let mut line = format!(
            "{},{},{:e},{},{},{},{},{}",
            self.trials,
            self.word_errors,
            self.frame_error_rate,
            self.tie_events,
            opt(self.list_size.map(|l| l as u64)),
            opt(self.list_errors),
            self.mean_decode_additions,
            if self.oracle_checked {
                self.oracle_disagreements.to_string()
            } else {
                String::new()
            }
        );
        if let Some(t) = self.seconds_per_trial {
            head.push_str(",seconds_per_trial");
            write!(line, ",{t:e}").unwrap();
        }
        format!("{head}\n{line}\n")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    errors: u64,
    ties: u64,
    list_errors: u64,
    disagreements: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            errors: self.errors + o.errors,
            ties: self.ties + o.ties,
            list_errors: self.list_errors + o.list_errors,
            disagreements: self.disagreements + o.disagreements,
        }
    }
}

/// Scores one trial; `ties` must be ascending.
fn outcome(
    sent: usize,
    ties: &[usize],
    scores: &[f64],
    list: Option<usize>,
    tol: TieTolerance,
    disagree: bool,
) -> Result<Tally> {
    let list_errors = match list {
        Some(ell) => !top_list(scores, ell, tol)?.iter().any(|e| e.0 == sent) as u64,
        None => 0,
    };
    Ok(Tally {
        errors: ties.binary_search(&sent).is_err() as u64,
        ties: (ties.len() > 1) as u64,
        list_errors,
        disagreements: disagree as u64,
    })
}

fn run_chunks<F>(trials: u64, seed: u64, trial: F) -> Result<Tally>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Tally> + Sync + Send,
{
    let chunks: Vec<u64> = (0..trials.div_ceil(CHUNK)).collect();
    let parts = crate::par::map(&chunks, |&c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c);
        let mut tally = Tally::default();
        for _ in 0..CHUNK.min(trials - c * CHUNK) {
            tally = tally + trial(&mut rng)?;
        }
        Ok(tally)
    });
    parts.into_iter().try_fold(Tally::default(), |acc, p: Result<Tally>| Ok(acc + p?))
}

fn ml_trials<C: Channel>(code: &Code, channel: &C, cfg: &SimConfig) -> Result<(Tally, OpCount)> {
    let codebook = build_codebook_matrix(code, &cfg.limits)?;
    let tol = cfg.tolerance;
    let tally = run_chunks(cfg.trials, cfg.seed, |rng| {
        let sent = rng.random_range(0..code.len());
        let y = sample_channel(channel, code.codeword(sent), rng);
        let scores = score_vector(&codebook, code, channel, &y)?;
        let (_, ties) = argmax_scan(&scores, tol);
        let disagree = cfg.oracle && oracle::esd_decode(code, channel, &y, tol)?.ties != ties;
        outcome(sent, &ties, &scores, cfg.list_size, tol, disagree)
    })?;
    Ok((tally, codebook.op_count()))
}

fn erasure_trials(code: &Code, channel: &ErasureChannel, cfg: &SimConfig) -> Result<(Tally, OpCount)> {
    let codebook = build_bipolar_codebook(code, &cfg.limits)?;
    let tol = cfg.tolerance;
    let tally = run_chunks(cfg.trials, cfg.seed, |rng| {
        let sent = rng.random_range(0..code.len());
        let y = sample_channel(channel, code.codeword(sent), rng);
        let r = erasure_decode(&codebook, code, &ErasureObservation(y.clone()), tol)?;
        let disagree = cfg.oracle && oracle::esd_decode(code, channel, &y, tol)?.ties != r.ties;
        outcome(sent, &r.ties, &r.scores, cfg.list_size, tol, disagree)
    })?;
    Ok((tally, codebook.op_count()))
}

fn isi_trials(
    code: &Code,
    channel: &IsiChannel<DiscreteChannel>,
    cfg: &SimConfig,
) -> Result<(Tally, OpCount)> {
    let codebook = build_codebook_matrix_isi(code, channel.memory(), channel.initial_symbol(), &cfg.limits)?;
    let tol = cfg.tolerance;
    let tally = run_chunks(cfg.trials, cfg.seed, |rng| {
        let sent = rng.random_range(0..code.len());
        let y = sample_isi(channel, code.codeword(sent), rng);
        let scores = isi_score_vector(&codebook, code, channel, &y)?;
        let (_, ties) = argmax_scan(&scores, tol);
        let disagree = cfg.oracle && oracle::esd_decode_isi(code, channel, &y, tol)?.ties != ties;
        outcome(sent, &ties, &scores, cfg.list_size, tol, disagree)
    })?;
    Ok((tally, codebook.op_count()))
}

fn syndrome_trials(
    code: &Code,
    linear: LinearCode,
    channel: &DiscreteChannel,
    cfg: &SimConfig,
) -> Result<(Tally, OpCount)> {
    if channel.outputs() != 2 {
        return Err(Error::ChannelMismatch("syndrome decoding needs a binary-output channel".into()));
    }
    if cfg.list_size.is_some() {
        return Err(Error::InvalidParams("list size is not supported by the syndrome decoder".into()));
    }
    let dec = SyndromeDecoder::new(linear, &cfg.limits)?;
    let tally = run_chunks(cfg.trials, cfg.seed, |rng| {
        let sent = rng.random_range(0..code.len());
        let y: Vec<Symbol> = sample_channel(channel, code.codeword(sent), rng)
            .into_iter()
            .map(|b| b as Symbol)
            .collect();
        let r = dec.decode(&y)?;
        let disagree = cfg.oracle && {
            let best = oracle::min_distance_decode(code, &y)?.best_score;
            hamming_distance(&r.codeword, &y) as f64 != -best
        };
        Ok(Tally {
            errors: (r.codeword != code.codeword(sent)) as u64,
            disagreements: disagree as u64,
            ..Tally::default()
        })
    })?;
    Ok((tally, dec.op_count()))
}

pub fn run_monte_carlo(cfg: &SimConfig) -> Result<SimReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let (code, linear) = cfg.code.load(&cfg.limits)?;
    if let Some(ell) = cfg.list_size {
        if ell == 0 || ell > code.len() {
            return Err(Error::ListSizeOutOfRange {
                list: ell,
                max: code.len(),
            });
        }
    }
    let spec = cfg.channel.build()?;
    let variant = cfg.variant.unwrap_or_else(|| Variant::default_for(&spec));
    let start = Instant::now();
    let (tally, ops) = match (variant, &spec) {
        (Variant::Ml, ChannelSpec::Discrete(ch)) => ml_trials(&code, ch, cfg)?,
        (Variant::Ml, ChannelSpec::Gaussian(ch)) => ml_trials(&code, ch, cfg)?,
        (Variant::Ml, ChannelSpec::Erasure(ch)) => ml_trials(&code, ch, cfg)?,
        (Variant::Erasure, ChannelSpec::Erasure(ch)) => erasure_trials(&code, ch, cfg)?,
        (Variant::Isi, ChannelSpec::IsiDiscrete(ch)) => isi_trials(&code, ch, cfg)?,
        (Variant::Syndrome, ChannelSpec::Discrete(ch)) => {
            let linear = linear.ok_or_else(|| {
                Error::InvalidParams("syndrome decoding needs a linear code source".into())
            })?;
            syndrome_trials(&code, linear, ch, cfg)?
        }
        (v, s) => {
            return Err(Error::ChannelMismatch(format!(
                "decoder {v} cannot run on a {} channel",
                s.kind()
            )))
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    Ok(SimReport {
        code: cfg.code.to_string(),
        q: code.q(),
        n: code.n(),
        codewords: code.len(),
        channel: serde_json::to_string(&cfg.channel).expect("config serializes"),
        decoder: variant,
        seed: cfg.seed,
        trials: cfg.trials,
        word_errors: tally.errors,
        frame_error_rate: tally.errors as f64 / cfg.trials as f64,
        tie_events: tally.ties,
        list_size: cfg.list_size,
        list_errors: cfg.list_size.map(|_| tally.list_errors),
        mean_decode_additions: ops.additions as f64,
        oracle_checked: cfg.oracle,
        oracle_disagreements: tally.disagreements,
        seconds_per_trial: cfg.timing.then(|| elapsed / cfg.trials as f64),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub m: usize,
    pub s: usize,
    /// Dense product cost: `m S` multiplications plus `m S` additions.
    pub naive_ops: u64,
    pub mailman_additions: u64,
    pub bound: f64,
    pub ratio: f64,
    pub naive_seconds: f64,
    pub mailman_seconds: f64,
    pub parallel_seconds: f64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str =
        "m,S,naive_ops,mailman_additions,bound,ratio,naive_seconds,mailman_seconds,parallel_seconds";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.1},{:.4},{:e},{:e},{:e}",
            self.m,
            self.s,
            self.naive_ops,
            self.mailman_additions,
            self.bound,
            self.ratio,
            self.naive_seconds,
            self.mailman_seconds,
            self.parallel_seconds
        )
    }
}

fn median_seconds(reps: usize, mut f: impl FnMut()) -> f64 {
    let mut times: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[times.len() / 2]
}

/// Random `m x S` matrices and vectors: checks both products agree, then
/// records exact operation counts and median wall times.
pub fn bench_multiply(m_list: &[usize], s_list: &[usize], repetitions: usize, seed: u64) -> Result<Vec<BenchRow>> {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &m in m_list {
        for &s in s_list {
            let bits = m as u128 * s as u128;
            if bits > limits.max_matrix_bits as u128 {
                return Err(Error::CapacityExceeded {
                    what: "bench matrix bits",
                    requested: bits,
                    limit: limits.max_matrix_bits as u128,
                });
            }
            let mut mat = BinaryMatrix::zeros(m, s);
            for c in 0..s {
                for r in 0..m {
                    if rng.random::<bool>() {
                        mat.set(r, c, true);
                    }
                }
            }
            let v: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let f = mailman::factorize(&mat)?;
            let naive = mailman::vec_times_matrix_naive(&v, &mat)?;
            let fast = mailman::vec_times_matrix(&v, &f)?;
            let par = mailman::vec_times_matrix_parallel(&v, &f)?;
            for (j, ((a, b), c)) in naive.iter().zip(&fast).zip(&par).enumerate() {
                if (a - b).abs() > 1e-12 * (1.0 + a.abs()) || b != c {
                    return Err(Error::KernelMismatch { column: j });
                }
            }
            let naive_ops = OpCount::dense_product(m, s).total();
            let mailman_additions = mailman::op_count(&f).additions;
            rows.push(BenchRow {
                m,
                s,
                naive_ops,
                mailman_additions,
                bound: mailman::addition_bound(m, s),
                ratio: naive_ops as f64 / mailman_additions as f64,
                naive_seconds: median_seconds(repetitions, || {
                    std::hint::black_box(mailman::vec_times_matrix_naive(&v, &mat).unwrap());
                }),
                mailman_seconds: median_seconds(repetitions, || {
                    std::hint::black_box(mailman::vec_times_matrix(&v, &f).unwrap());
                }),
                parallel_seconds: median_seconds(repetitions, || {
                    std::hint::black_box(mailman::vec_times_matrix_parallel(&v, &f).unwrap());
                }),
            });
        }
    }
    Ok(rows)
}
