//! Command-line front end. Exit status: 0 success, 1 decoding or data error,
//! 2 usage error. Codeword indices are printed 1-based.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mldec::channels::{Channel, ChannelConfig, ChannelSpec, ErasureChannel, ErasureObservation, IsiChannel};
use mldec::codes::{
    build_bipolar_codebook, build_codebook_matrix, build_codebook_matrix_isi, hamming_distance, Code, Limits,
    LinearCode,
};
use mldec::decoder::{self, DecodeResult, SyndromeDecoder, TieTolerance};
use mldec::io::{self, format_word};
use mldec::mailman;
use mldec::oracle;
use mldec::simulate::{self, BenchRow, BuiltinCode, CodeSource, SimConfig, Variant};
use mldec::Error;

#[derive(Parser)]
#[command(name = "mldec", version, about = "Maximum-likelihood block decoding via fast binary vector-matrix products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Unique ML decoding of one received word.
    Decode(DecodeArgs),
    /// The ℓ most likely codewords.
    ListDecode {
        #[command(flatten)]
        decode: DecodeArgs,
        #[arg(long, short = 'l')]
        list: usize,
    },
    /// Binary erasure decoding; `e` marks an erased position.
    ErasureDecode(ErasureArgs),
    /// Coset-leader decoding of a binary linear code.
    SyndromeDecode(SyndromeArgs),
    /// ML decoding over a channel with memory.
    IsiDecode(DecodeArgs),
    /// Monte Carlo frame error rate.
    Simulate(SimulateArgs),
    /// Operation counts and timings of fast versus naive products.
    Bench(BenchArgs),
    /// Random linear code with a full-rank generator.
    GenCode(GenCodeArgs),
    /// Summary of a code and its factorized codebook matrix.
    Inspect {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, short)]
        verbose: bool,
    },
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct CodeArgs {
    /// Codebook file: `q n S`, then S rows of symbols in 1..=q.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Linear-code file: `q n k`, then k generator rows over 0..q.
    #[arg(long)]
    linear: Option<PathBuf>,
    /// Built-in code: hamming74 or example1.
    #[arg(long, value_parser = parse_builtin)]
    builtin: Option<BuiltinCode>,
    /// Random linear code `q,n,k[,seed]`.
    #[arg(long, value_parser = parse_random)]
    random: Option<CodeSource>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// `kind:params` shorthand (bsc:0.1, qsc:3,0.1, awgn:1.0, bec:0.2, noiseless:2) or a TOML file.
    #[arg(long)]
    channel: String,
    /// Received word: whitespace- or comma-separated, or one character per position.
    #[arg(long)]
    rx: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Relative tie tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Also run the brute-force decoder and fail on disagreement.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ErasureArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    rx: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SyndromeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    rx: String,
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    channel: String,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also count list-ℓ errors.
    #[arg(long)]
    list: Option<usize>,
    /// ml, erasure, syndrome or isi; defaults to the channel's natural decoder.
    #[arg(long, value_parser = parse_variant)]
    decoder: Option<Variant>,
    #[arg(long)]
    oracle: bool,
    /// Include wall time per trial (the report is then no longer reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    /// Row counts.
    #[arg(long, value_delimiter = ',', default_value = "64")]
    m: Vec<usize>,
    /// Column counts.
    #[arg(long, value_delimiter = ',', default_value = "1024,4096,16384,65536")]
    s: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct GenCodeArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write here instead of standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Write the enumerated codebook instead of the generator.
    #[arg(long)]
    codebook: bool,
}

fn parse_builtin(s: &str) -> Result<BuiltinCode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_random(s: &str) -> Result<CodeSource, String> {
    let nums: Vec<u64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("{t:?} is not a non-negative integer")))
        .collect::<Result<_, _>>()?;
    match nums.as_slice() {
        [q, n, k] | [q, n, k, _] => Ok(CodeSource::RandomLinear {
            q: *q as usize,
            n: *n as usize,
            k: *k as usize,
            seed: nums.get(3).copied().unwrap_or(1),
        }),
        _ => Err("expected q,n,k[,seed]".into()),
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CliResult = Result<String, Failure>;

impl CodeArgs {
    fn source(&self) -> CodeSource {
        if let Some(p) = &self.code {
            CodeSource::Codebook(p.clone())
        } else if let Some(p) = &self.linear {
            CodeSource::Linear(p.clone())
        } else if let Some(b) = self.builtin {
            CodeSource::Builtin(b)
        } else {
            self.random.clone().expect("clap enforces one code source")
        }
    }

    fn load(&self) -> Result<(Code, Option<LinearCode>), Failure> {
        Ok(self.source().load(&Limits::default())?)
    }
}

fn tolerance(rel: f64) -> Result<TieTolerance, Failure> {
    TieTolerance::relative(rel).map_err(|e| Failure::Usage(e.to_string()))
}

fn indices(ix: &[usize]) -> String {
    ix.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn json_result(r: &DecodeResult, q: usize) -> serde_json::Value {
    serde_json::json!({
        "best_index": r.best_index + 1,
        "best_codeword": format_word(&r.best_codeword, q),
        "best_score": r.best_score,
        "ties": r.ties.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "scores": r.scores,
        "implausible": r.implausible,
    })
}

/// Prints a decode result, then the oracle's when given; fails on disagreement.
fn report(r: &DecodeResult, q: usize, oracle: Option<DecodeResult>, json: bool) -> CliResult {
    if r.implausible {
        eprintln!("warning: every codeword has zero likelihood; returning codeword 1");
    }
    let agrees = oracle.as_ref().map(|o| o.ties == r.ties);
    let mut out = String::new();
    if json {
        let mut v = json_result(r, q);
        if let Some(o) = &oracle {
            v["oracle"] = json_result(o, q);
            v["oracle_agrees"] = agrees.into();
        }
        out = serde_json::to_string_pretty(&v).expect("json") + "\n";
    } else {
        writeln!(out, "best_index {}", r.best_index + 1).unwrap();
        writeln!(out, "best_codeword {}", format_word(&r.best_codeword, q)).unwrap();
        writeln!(out, "best_score {}", r.best_score).unwrap();
        writeln!(out, "ties {}", indices(&r.ties)).unwrap();
        let scores: Vec<String> = r.scores.iter().map(|s| s.to_string()).collect();
        writeln!(out, "scores {}", scores.join(" ")).unwrap();
        if r.implausible {
            writeln!(out, "implausible true").unwrap();
        }
        if let Some(o) = &oracle {
            writeln!(out, "oracle_best_index {}", o.best_index + 1).unwrap();
            writeln!(out, "oracle_ties {}", indices(&o.ties)).unwrap();
            writeln!(out, "oracle_agrees {}", agrees.unwrap()).unwrap();
        }
    }
    if agrees == Some(false) {
        print!("{out}");
        return Err(Failure::Domain("oracle disagrees with the fast decoder".into()));
    }
    Ok(out)
}

fn decode_with<C: Channel>(code: &Code, ch: &C, args: &DecodeArgs) -> CliResult {
    let tol = tolerance(args.common.tolerance)?;
    let y = io::parse_observation(ch, &args.rx, code.n())?;
    let m = build_codebook_matrix(code, &Limits::default())?;
    let r = decoder::ml_decode(&m, code, ch, &y, tol)?;
    let o = match args.common.oracle {
        true => Some(oracle::esd_decode(code, ch, &y, tol)?),
        false => None,
    };
    report(&r, code.q(), o, args.common.json)
}

fn list_with<C: Channel>(code: &Code, ch: &C, args: &DecodeArgs, ell: usize) -> CliResult {
    let tol = tolerance(args.common.tolerance)?;
    let y = io::parse_observation(ch, &args.rx, code.n())?;
    let m = build_codebook_matrix(code, &Limits::default())?;
    let list = decoder::list_decode(&m, code, ch, &y, ell, tol)?;
    let expected = match args.common.oracle {
        true => {
            let scores = oracle::esd_scores(code, ch, &y)?;
            Some(oracle::full_ranking(&scores, tol)[..ell].to_vec())
        }
        false => None,
    };
    let agrees = expected.as_ref().map(|e| list.indices().eq(e.iter().copied()));
    let mut out = String::new();
    if args.common.json {
        let entries: Vec<_> = list
            .entries
            .iter()
            .map(|&(j, s)| serde_json::json!({"index": j + 1, "score": s, "codeword": format_word(code.codeword(j), code.q())}))
            .collect();
        let mut v = serde_json::json!({ "entries": entries });
        if let Some(a) = agrees {
            v["oracle_agrees"] = a.into();
        }
        out = serde_json::to_string_pretty(&v).expect("json") + "\n";
    } else {
        writeln!(out, "rank index score codeword").unwrap();
        for (rank, &(j, s)) in list.entries.iter().enumerate() {
            writeln!(out, "{} {} {} {}", rank + 1, j + 1, s, format_word(code.codeword(j), code.q())).unwrap();
        }
        if let Some(a) = agrees {
            writeln!(out, "oracle_agrees {a}").unwrap();
        }
    }
    if agrees == Some(false) {
        print!("{out}");
        return Err(Failure::Domain("oracle ranking disagrees with the list decoder".into()));
    }
    Ok(out)
}

fn isi_with<C: Channel>(code: &Code, ch: &IsiChannel<C>, args: &DecodeArgs) -> CliResult {
    let tol = tolerance(args.common.tolerance)?;
    let y = io::parse_observation(ch.tuple_channel(), &args.rx, code.n())?;
    let m = build_codebook_matrix_isi(code, ch.memory(), ch.initial_symbol(), &Limits::default())?;
    let r = decoder::isi_ml_decode(&m, code, ch, &y, tol)?;
    let o = match args.common.oracle {
        true => Some(oracle::esd_decode_isi(code, ch, &y, tol)?),
        false => None,
    };
    report(&r, code.q(), o, args.common.json)
}

fn channel(arg: &str) -> Result<ChannelSpec, Failure> {
    Ok(ChannelConfig::load(arg)?.build()?)
}

fn wrong_channel(sub: &str, spec: &ChannelSpec) -> Failure {
    Failure::Usage(format!("{sub} does not accept a {} channel", spec.kind()))
}

fn cmd_decode(args: &DecodeArgs) -> CliResult {
    let (code, _) = args.code.load()?;
    match channel(&args.channel)? {
        ChannelSpec::Discrete(ch) => decode_with(&code, &ch, args),
        ChannelSpec::Gaussian(ch) => decode_with(&code, &ch, args),
        ChannelSpec::Erasure(ch) => decode_with(&code, &ch, args),
        spec => Err(wrong_channel("decode (use isi-decode)", &spec)),
    }
}

fn cmd_list(args: &DecodeArgs, ell: usize) -> CliResult {
    let (code, _) = args.code.load()?;
    match channel(&args.channel)? {
        ChannelSpec::Discrete(ch) => list_with(&code, &ch, args, ell),
        ChannelSpec::Gaussian(ch) => list_with(&code, &ch, args, ell),
        ChannelSpec::Erasure(ch) => list_with(&code, &ch, args, ell),
        spec => Err(wrong_channel("list-decode", &spec)),
    }
}

fn cmd_isi(args: &DecodeArgs) -> CliResult {
    let (code, _) = args.code.load()?;
    match channel(&args.channel)? {
        ChannelSpec::IsiDiscrete(ch) => isi_with(&code, &ch, args),
        spec => Err(wrong_channel("isi-decode (needs an isi-dmc channel file)", &spec)),
    }
}

fn cmd_erasure(args: &ErasureArgs) -> CliResult {
    let tol = tolerance(args.common.tolerance)?;
    let (code, _) = args.code.load()?;
    let b = build_bipolar_codebook(&code, &Limits::default())?;
    // The erasure probability only scales likelihoods; any value in (0, 1) parses and ranks alike.
    let bec = ErasureChannel::new(0.5)?;
    let y = io::parse_observation(&bec, &args.rx, code.n())?;
    let r = decoder::erasure_decode(&b, &code, &ErasureObservation(y.clone()), tol)?;
    let o = match args.common.oracle {
        true => Some(oracle::esd_decode(&code, &bec, &y, tol)?),
        false => None,
    };
    report(&r, code.q(), o, args.common.json)
}

fn cmd_syndrome(args: &SyndromeArgs) -> CliResult {
    let (code, linear) = args.code.load()?;
    let linear = linear.ok_or_else(|| Failure::Usage("syndrome-decode needs a linear code (--linear, --random or --builtin hamming74)".into()))?;
    let y = io::parse_binary_word(&args.rx, code.n())?;
    let dec = SyndromeDecoder::new(linear, &Limits::default())?;
    let r = dec.decode(&y)?;
    let distance = hamming_distance(&r.codeword, &y);
    let oracle_distance = match args.oracle {
        true => Some(-oracle::min_distance_decode(&code, &y)?.best_score as usize),
        false => None,
    };
    let agrees = oracle_distance.map(|d| d == distance);
    let leader = &dec.leaders()[r.leader_index];
    let mut out = String::new();
    if args.json {
        let mut v = serde_json::json!({
            "codeword": format_word(&r.codeword, 2),
            "leader_index": r.leader_index + 1,
            "leader": format_word(leader, 2),
            "distance": distance,
            "coset_distance": r.coset_distance,
        });
        if let Some(a) = agrees {
            v["oracle_distance"] = oracle_distance.into();
            v["oracle_agrees"] = a.into();
        }
        out = serde_json::to_string_pretty(&v).expect("json") + "\n";
    } else {
        writeln!(out, "codeword {}", format_word(&r.codeword, 2)).unwrap();
        writeln!(out, "leader_index {}", r.leader_index + 1).unwrap();
        writeln!(out, "leader {}", format_word(leader, 2)).unwrap();
        writeln!(out, "distance {distance}").unwrap();
        writeln!(out, "coset_distance {}", r.coset_distance).unwrap();
        if let (Some(d), Some(a)) = (oracle_distance, agrees) {
            writeln!(out, "oracle_distance {d}").unwrap();
            writeln!(out, "oracle_agrees {a}").unwrap();
        }
    }
    if agrees == Some(false) {
        print!("{out}");
        return Err(Failure::Domain("oracle distance differs from the syndrome decoder".into()));
    }
    Ok(out)
}

fn cmd_simulate(args: &SimulateArgs) -> CliResult {
    let mut cfg = SimConfig::new(
        args.code.source(),
        ChannelConfig::load(&args.channel)?,
        args.trials,
        args.seed,
    );
    cfg.list_size = args.list;
    cfg.variant = args.decoder;
    cfg.oracle = args.oracle;
    cfg.timing = args.timing;
    cfg.tolerance = tolerance(args.tolerance)?;
    if args.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let r = simulate::run_monte_carlo(&cfg)?;
    let out = match args.format {
        Format::Table => r.to_table(),
        Format::Csv => r.to_csv(),
        Format::Json => r.to_json(),
    };
    if r.oracle_disagreements > 0 {
        print!("{out}");
        return Err(Failure::Domain(format!("{} oracle disagreements", r.oracle_disagreements)));
    }
    Ok(out)
}

fn cmd_bench(args: &BenchArgs) -> CliResult {
    if args.m.iter().chain(&args.s).any(|&x| x < 2) {
        return Err(Failure::Usage("--m and --s values must be at least 2".into()));
    }
    let rows = simulate::bench_multiply(&args.m, &args.s, args.reps, args.seed)?;
    let mut out = String::new();
    match args.format {
        Format::Json => out = serde_json::to_string_pretty(&rows).expect("json") + "\n",
        Format::Csv => {
            writeln!(out, "{}", BenchRow::CSV_HEADER).unwrap();
            for r in &rows {
                writeln!(out, "{}", r.to_csv()).unwrap();
            }
        }
        Format::Table => {
            writeln!(
                out,
                "{:>5} {:>7} {:>12} {:>12} {:>12} {:>7} {:>11} {:>11} {:>11}",
                "m", "S", "naive_ops", "mailman_add", "bound", "ratio", "naive_s", "mailman_s", "parallel_s"
            )
            .unwrap();
            for r in &rows {
                writeln!(
                    out,
                    "{:>5} {:>7} {:>12} {:>12} {:>12.0} {:>7.2} {:>11.3e} {:>11.3e} {:>11.3e}",
                    r.m, r.s, r.naive_ops, r.mailman_additions, r.bound, r.ratio, r.naive_seconds, r.mailman_seconds, r.parallel_seconds
                )
                .unwrap();
            }
        }
    }
    Ok(out)
}

fn cmd_gen_code(args: &GenCodeArgs) -> CliResult {
    let source = CodeSource::RandomLinear {
        q: args.q,
        n: args.n,
        k: args.k,
        seed: args.seed,
    };
    let (code, linear) = source.load(&Limits::default())?;
    let text = if args.codebook {
        io::format_code(&code)
    } else {
        io::format_linear_code(&linear.expect("random codes are linear"))
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, text).map_err(Error::from)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_inspect(code_args: &CodeArgs, verbose: bool) -> CliResult {
    let (code, linear) = code_args.load()?;
    let m = build_codebook_matrix(&code, &Limits::default())?;
    let blocks = m.factorization().map_or(0, |f| f.blocks().len());
    let mut out = format!(
        "q={} n={} S={}, M: {}x{}, blocks={}\n",
        code.q(),
        code.n(),
        code.len(),
        m.rows(),
        m.cols(),
        blocks
    );
    if verbose {
        if let Some(f) = m.factorization() {
            let heights: Vec<String> = f.blocks().iter().map(|b| b.height().to_string()).collect();
            writeln!(out, "block heights {}", heights.join(" ")).unwrap();
        }
        let ops = m.op_count();
        writeln!(out, "additions per decode {}", ops.additions).unwrap();
        writeln!(out, "addition bound {:.1}", mailman::addition_bound(m.rows(), m.cols())).unwrap();
        writeln!(out, "dense product ops {}", mailman::OpCount::dense_product(m.rows(), m.cols()).total()).unwrap();
        match code.minimum_distance() {
            Some(d) => writeln!(out, "minimum distance {d}").unwrap(),
            None => writeln!(out, "minimum distance undefined (one codeword)").unwrap(),
        }
        if let Some(l) = linear {
            writeln!(out, "linear [{}, {}]_{}", l.n(), l.k(), l.q()).unwrap();
        }
    }
    Ok(out)
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Decode(a) => cmd_decode(a),
        Command::ListDecode { decode, list } => cmd_list(decode, *list),
        Command::ErasureDecode(a) => cmd_erasure(a),
        Command::SyndromeDecode(a) => cmd_syndrome(a),
        Command::IsiDecode(a) => cmd_isi(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bench(a) => cmd_bench(a),
        Command::GenCode(a) => cmd_gen_code(a),
        Command::Inspect { code, verbose } => cmd_inspect(code, *verbose),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
