use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ralp::aux_graph::{build_aux_graph, extract_witness, Hyperpromenade};
use ralp::bounds::{awgn_bound_with_girth, bsc_bound_with_girth, BoundReport};
use ralp::channel::LlrVector;
use ralp::encoder::encode;
use ralp::error::{Error, Result};
use ralp::girth::{build_matching, parse_interleaver, target_girth, write_interleaver, BuildOptions, HyperGraphLine};
use ralp::lp::Decoder;
use ralp::sim::{append_results, results_row, run_with_code, SimConfig, Transmit};

#[derive(Parser)]
#[command(name = "ralp", version, about = "Repeat-accumulate codes: girth construction, LP decoding and error bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Greedy,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    Bsc,
    Awgn,
}

#[derive(Subcommand)]
enum Command {
    /// Build a high-girth interleaver for a regular code.
    BuildInterleaver {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "greedy")]
        policy: PolicyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Re-measure the girth after every augmentation.
        #[arg(long)]
        verified: bool,
    },
    /// Encode information bits given as a 0/1 string.
    Encode {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        info: String,
    },
    /// LP-decode a file of whitespace-separated LLRs.
    Decode {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        llrs: PathBuf,
    },
    /// Estimate the word error rate and append a row to a results CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        /// Transmit uniformly random codewords instead of the all-zero word.
        #[arg(long)]
        random_codeword: bool,
    },
    /// Evaluate the union bound and threshold.
    Bounds {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        channel: ChannelArg,
        /// Crossover probability or noise variance.
        #[arg(long)]
        param: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Measured girth, when below the design value.
        #[arg(long)]
        girth: Option<usize>,
    },
    /// Measure the girth of an interleaver file and compare it with the header.
    VerifyGirth {
        #[arg(long)]
        interleaver: PathBuf,
    },
    /// Extract a failure witness from a non-positive hyperpromenade.
    ExtractWitness {
        #[arg(long)]
        config: PathBuf,
        /// One atom per line, two 1-based vertices.
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        llrs: PathBuf,
        /// Transmitted information bits; all zero when omitted.
        #[arg(long)]
        info: Option<String>,
        /// Girth for the window length; the measured girth when omitted.
        #[arg(long)]
        girth: Option<usize>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("`{c}` is not a bit"))),
        })
        .collect()
}

fn read_llrs(path: &Path) -> Result<LlrVector> {
    let values = read(path)?
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("`{t}` is not a number"))))
        .collect::<Result<Vec<_>>>()?;
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Parse(format!("LLR {v} is not finite")));
    }
    Ok(LlrVector::rescaled(values))
}

fn bits_string(bits: &[u8]) -> String {
    bits.iter().map(|b| char::from(b'0' + b)).collect()
}

fn girth_string(g: Option<usize>) -> String {
    g.map_or_else(|| "inf".into(), |g| g.to_string())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildInterleaver { q, k, policy, seed, out, verified } => {
            let mut opts = match policy {
                PolicyArg::Greedy => BuildOptions::greedy(),
                PolicyArg::Random => BuildOptions::random(),
            };
            if verified {
                opts = opts.verified();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = build_matching(q, k, opts, &mut rng)?;
            let il = c.interleaver();
            std::fs::write(&out, write_interleaver(&il, c.girth))
                .map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            println!("n={} target_girth={} girth={}", il.n(), c.target_girth, girth_string(c.girth));
        }
        Command::Encode { config, info } => {
            let code = SimConfig::from_file(&config)?.build_code()?;
            let cw = encode(&parse_bits(&info)?, &code.dd, &code.il)?;
            println!("{}", bits_string(&cw.bits));
        }
        Command::Decode { config, llrs } => {
            let cfg = SimConfig::from_file(&config)?;
            let code = cfg.build_code()?;
            let llrs = read_llrs(&llrs)?;
            let r = Decoder::new(&code.dd, &code.il, cfg.decoder)?.decode(&llrs)?;
            match r.info() {
                Some(info) => {
                    let cw = encode(info, &code.dd, &code.il)?;
                    println!("info={}", bits_string(info));
                    println!("codeword={}", bits_string(&cw.bits));
                }
                None => println!("info=error"),
            }
            println!("objective={}", r.solution.objective);
            println!("ml_certificate={}", r.certificate);
        }
        Command::Simulate { config, out, workers, random_codeword } => {
            let mut cfg = SimConfig::from_file(&config)?;
            if random_codeword {
                cfg.transmit = Transmit::RandomCodeword;
            }
            let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let code = cfg.build_code()?;
            let est = run_with_code(&cfg, &code, workers)?;
            let row = results_row(&cfg, &code, &est);
            append_results(&out, &row)?;
            log::info!("{} trials in {:.2?}, {} solver failures", est.trials_run, est.wall_time, est.solver_failures);
            println!("{row}");
        }
        Command::Bounds { q, n, channel, param, epsilon, girth } => {
            let r = match channel {
                ChannelArg::Bsc => bsc_bound_with_girth(q, n, param, epsilon, girth)?,
                ChannelArg::Awgn => awgn_bound_with_girth(q, n, param, epsilon, girth)?,
            };
            println!("{}", BoundReport::CSV_HEADER);
            println!("{}", r.csv_row());
        }
        Command::VerifyGirth { interleaver } => {
            let (il, declared) = parse_interleaver(&read(&interleaver)?)?;
            let measured = HyperGraphLine::from_interleaver(&il).girth();
            let dd = il.degree_distribution()?;
            let mut line =
                format!("n={} measured={} declared={}", il.n(), girth_string(measured), girth_string(declared));
            if dd.is_regular() {
                line += &format!(" target={}", target_girth(dd.q_max(), il.n()));
            }
            println!("{line}");
            // `None` means no cycle, which is at least any declared value.
            if let (Some(m), Some(d)) = (measured, declared) {
                if m < d {
                    return Err(Error::InvalidInterleaver(format!("measured girth {m} is below the declared {d}")));
                }
            } else if measured.is_some() && declared.is_none() {
                return Err(Error::InvalidInterleaver("the file declares no cycles but one exists".into()));
            }
        }
        Command::ExtractWitness { config, psi, llrs, info, girth } => {
            let code = SimConfig::from_file(&config)?.build_code()?;
            let info = match info {
                Some(s) => parse_bits(&s)?,
                None => vec![0; code.dd.k()],
            };
            let cw = encode(&info, &code.dd, &code.il)?;
            let theta = build_aux_graph(&cw, &read_llrs(&llrs)?, &code.il)?;
            let psi = Hyperpromenade::parse(&read(&psi)?)?;
            let g = girth
                .or(code.girth)
                .ok_or_else(|| Error::Witness("the hypergraph has no cycle; pass --girth".into()))?;
            let ex = extract_witness(&theta, &psi, g)?;
            print!("{}", ex.witness.dump());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
