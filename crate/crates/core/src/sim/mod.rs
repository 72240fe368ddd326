//! Seeded Monte Carlo estimation of the word error rate.
//!
//! Trial `i` draws all of its randomness from a generator seeded with
//! [`trial_seed`]`(seed, i)`. Trials run in fixed-size batches on a rayon
//! pool and are tallied in index order, so the estimate (apart from
//! `wall_time`) does not depend on the number of workers.

mod config;

pub use config::{Code, CodeSpec, InterleaverSpec, SimConfig, Ties, Transmit};

use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{awgn_bound_with_girth, bsc_bound_with_girth, even_girth, mbios_bound};
use crate::channel::{ChannelModel, LlrConvention, LlrVector};
use crate::encoder::encode;
use crate::error::{Error, Result};
use crate::lp::Decoder;

/// Trials handed to the pool at a time.
const BATCH: u64 = 256;

/// Relative cost shift used by [`Ties::Against`].
pub const TIE_SHIFT: f64 = 1e-6;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

pub const RESULTS_HEADER: &str =
    "channel,param,q,k,n,girth,seed,trials,errors,wer,ci_lo,ci_hi,bound_exact,bound_asymptotic";

#[derive(Debug, Clone, PartialEq)]
pub struct WerEstimate {
    pub trials_run: u64,
    /// Includes solver failures.
    pub errors: u64,
    pub solver_failures: u64,
    pub wer: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
    pub wall_time: Duration,
}

impl WerEstimate {
    /// Equality on everything except `wall_time`.
    pub fn same_counts(&self, other: &Self) -> bool {
        WerEstimate { wall_time: Duration::ZERO, ..self.clone() }
            == WerEstimate { wall_time: Duration::ZERO, ..other.clone() }
    }
}

/// Per-trial seed: SplitMix64 finalizer applied to the master seed and index.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut z = master ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Wilson score interval for `errors` successes in `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TrialResult {
    Correct,
    WrongWord,
    SolverFailure,
}

/// Shifts every cost towards flipping the transmitted bit by `TIE_SHIFT`
/// times the mean magnitude.
pub fn shift_against(llrs: &LlrVector, bits: &[u8]) -> LlrVector {
    let scale = llrs.values.iter().map(|v| v.abs()).sum::<f64>() / llrs.len().max(1) as f64;
    let d = TIE_SHIFT * scale.max(f64::MIN_POSITIVE);
    LlrVector::rescaled(llrs.values.iter().zip(bits).map(|(&v, &b)| if b == 1 { v + d } else { v - d }).collect())
}

fn run_trial(cfg: &SimConfig, code: &Code, decoder: &Decoder, seed: u64) -> TrialResult {
    let (channel, transmit) = (&cfg.channel, cfg.transmit);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = code.dd.k();
    let info: Vec<u8> = match transmit {
        Transmit::AllZero => vec![0; k],
        Transmit::RandomCodeword => (0..k).map(|_| rng.random_range(0..=1u8)).collect(),
    };
    let Ok(cw) = encode(&info, &code.dd, &code.il) else {
        return TrialResult::SolverFailure;
    };
    let rx = channel.transmit(&cw.bits[..code.dd.n()], &mut rng);
    let Ok(mut llrs) = channel.llrs(&rx, LlrConvention::Rescaled) else {
        return TrialResult::SolverFailure;
    };
    if cfg.ties == Ties::Against {
        llrs = shift_against(&llrs, &cw.bits);
    }
    match decoder.decode(&llrs) {
        Ok(r) if r.info() == Some(&info[..]) => TrialResult::Correct,
        Ok(_) => TrialResult::WrongWord,
        Err(e) => {
            log::debug!("trial seed {seed:#x}: {e}");
            TrialResult::SolverFailure
        }
    }
}

/// Runs trials until `cfg.trials` have been decoded or `cfg.min_errors`
/// errors have been seen, whichever comes first.
pub fn run_monte_carlo(cfg: &SimConfig, workers: usize) -> Result<WerEstimate> {
    let code = cfg.build_code()?;
    run_with_code(cfg, &code, workers)
}

/// As [`run_monte_carlo`] for an already built code.
pub fn run_with_code(cfg: &SimConfig, code: &Code, workers: usize) -> Result<WerEstimate> {
    let start = Instant::now();
    let decoder = Decoder::new(&code.dd, &code.il, cfg.decoder)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Io(format!("thread pool: {e}")))?;
    let (mut trials_run, mut errors, mut solver_failures) = (0u64, 0u64, 0u64);
    'outer: while trials_run < cfg.trials {
        let end = (trials_run + BATCH).min(cfg.trials);
        let results: Vec<TrialResult> = pool.install(|| {
            (trials_run..end).into_par_iter().map(|i| run_trial(cfg, code, &decoder, trial_seed(cfg.seed, i))).collect()
        });
        for r in results {
            trials_run += 1;
            match r {
                TrialResult::Correct => {}
                TrialResult::WrongWord => errors += 1,
                TrialResult::SolverFailure => {
                    errors += 1;
                    solver_failures += 1;
                }
            }
            if errors >= cfg.min_errors {
                break 'outer;
            }
        }
    }
    let wer = errors as f64 / trials_run as f64;
    let (ci_lo, ci_hi) = wilson_interval(errors, trials_run);
    if solver_failures > 0 {
        log::warn!("{solver_failures} solver failures counted as errors");
    }
    Ok(WerEstimate {
        trials_run,
        errors,
        solver_failures,
        wer,
        ci_lo,
        ci_hi,
        seed: cfg.seed,
        wall_time: start.elapsed(),
    })
}

/// `(exact, asymptotic)` union bound for the simulated code, or NaN where
/// no bound applies.
pub fn bound_columns(cfg: &SimConfig, code: &Code) -> (f64, f64) {
    let n = code.dd.n();
    let q_max = code.dd.q_max();
    if code.dd.is_regular() {
        let report = match cfg.channel {
            ChannelModel::Bsc { p } => bsc_bound_with_girth(q_max, n, p, cfg.epsilon, code.girth),
            ChannelModel::Awgn { sigma2 } => awgn_bound_with_girth(q_max, n, sigma2, cfg.epsilon, code.girth),
        };
        return report.map_or((f64::NAN, f64::NAN), |r| (r.wep_exact, r.wep_asymptotic));
    }
    let Some(girth) = code.girth else {
        return (f64::NAN, f64::NAN);
    };
    let (g, _) = even_girth(girth);
    if g < 2 {
        return (f64::NAN, f64::NAN);
    }
    let dist = cfg.channel.llr_distribution(LlrConvention::Rescaled);
    mbios_bound(q_max, g / 2, n, &dist).map_or((f64::NAN, f64::NAN), |b| (b.value, f64::NAN))
}

/// One results row, without a trailing newline.
pub fn results_row(cfg: &SimConfig, code: &Code, est: &WerEstimate) -> String {
    let (exact, asym) = bound_columns(cfg, code);
    let q = match &cfg.code {
        CodeSpec::Regular { q, .. } => q.to_string(),
        CodeSpec::Degrees(_) => format!("max{}", code.dd.q_max()),
    };
    let girth = code.girth.map_or_else(|| "inf".to_string(), |g| g.to_string());
    let mut s = String::new();
    write!(
        s,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        cfg.channel.name(),
        cfg.channel.param(),
        q,
        code.dd.k(),
        code.dd.n(),
        girth,
        est.seed,
        est.trials_run,
        est.errors,
        est.wer,
        est.ci_lo,
        est.ci_hi,
        fmt_float(exact),
        fmt_float(asym)
    )
    .expect("writing to a String");
    s
}

fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        x.to_string()
    }
}

/// Appends `row` to a results file, writing the header when the file is new
/// or empty and refusing files whose header differs.
pub fn append_results(path: &Path, row: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let existing_header = match std::fs::File::open(path) {
        Ok(f) => {
            let mut line = String::new();
            BufReader::new(f).read_line(&mut line).map_err(io)?;
            Some(line.trim_end().to_string()).filter(|l| !l.is_empty())
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(io(e)),
    };
    if let Some(h) = &existing_header {
        if h != RESULTS_HEADER {
            return Err(Error::Parse(format!("{} has header `{h}`, expected `{RESULTS_HEADER}`", path.display())));
        }
    }
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    let mut out = String::new();
    if existing_header.is_none() {
        out.push_str(RESULTS_HEADER);
        out.push('\n');
    }
    out.push_str(row);
    out.push('\n');
    f.write_all(out.as_bytes()).map_err(io)
}
