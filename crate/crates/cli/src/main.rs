//! Command-line front end: identity verifications, decomposition checks,
//! growth probes, special-function evaluation, and expansion dumps, with
//! reproducible seeded configuration.
//!
//! Exit codes: 0 on success/pass, 1 when a verification ran but failed its
//! acceptance rule, 2 on usage errors. Usage errors never write output.

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use std::path::PathBuf;
use std::process::ExitCode;
use trigbessel::balanced::{self, AxisSign, CellKind};
use trigbessel::experiments::{
    growth_probe, verify_decomposition, verify_identity, DecompositionId, GrowthConfig,
    GrowthKind, IdentitySpec, SweepConfig,
};
use trigbessel::series::BalancedSeriesKind;
use trigbessel::specfun::{self, BesselOrder, DerivKind};
use trigbessel::sums;

#[derive(Parser)]
#[command(name = "trigbessel", version, about = "Trigonometric-sum / Bessel-series workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed recorded in the report
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate J, Y, K, the -Y-(2/pi)K combination, its derivative, or T32
    SpecfunEval {
        /// one of: j, y, k, icomb, dj, dicomb, t32
        #[arg(long)]
        func: String,
        /// integer order (ignored by t32)
        #[arg(long, default_value_t = 0)]
        order: i32,
        /// half-integer orders for j as 2*nu (overrides --order when set)
        #[arg(long)]
        twice_order: Option<i32>,
        /// argument z > 0 (or v > 0 for t32)
        #[arg(long)]
        z: f64,
    },
    /// Verify a floor-trig series identity over a truncation sweep
    VerifyEntry {
        /// entry1 (floor-sine) or entry2 (floor-cosine)
        #[arg(long)]
        id: String,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        x: f64,
        /// sweep exponents lo:hi, schedules (2^j, aspect*2^j)
        #[arg(long, default_value = "6:12")]
        sweep: String,
        #[arg(long, default_value_t = 1)]
        aspect: u32,
        /// absolute error cap in the pass rule final < max(cap, first/5)
        #[arg(long, default_value_t = 1e-2)]
        cap: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify a four-corner balanced identity (k = 0 series or k = 1 cells)
    VerifyBalanced {
        /// bi, ti, tt, or k1 (pointwise first balanced derivative)
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 0.3)]
        sigma: f64,
        #[arg(long, default_value_t = 0.4)]
        theta: f64,
        #[arg(long, default_value_t = 2.5)]
        x: f64,
        #[arg(long, default_value = "6:12")]
        sweep: String,
        /// n_max / m_max for the series sweeps
        #[arg(long, default_value_t = 4)]
        aspect: u32,
        #[arg(long, default_value_t = 1e-2)]
        cap: f64,
        /// number of random cells for id = k1
        #[arg(long, default_value_t = 10)]
        cells: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify a character decomposition exactly
    VerifyDecomposition {
        /// cc, cs, ss, floorcos, floorsin, lemma25, lemma26
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 7)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        a: u64,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long)]
        x: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify the degree-two Riesz identity at rho = 0
    VerifyRiesz {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 7)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        a: u64,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value = "4:10")]
        sweep: String,
        #[arg(long, default_value_t = 4)]
        aspect: u32,
        #[arg(long, default_value_t = 1e-2)]
        cap: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Growth-evidence probe: |A(x)|/x^theta traces to CSV
    Growth {
        /// delta, p-circle, d-chi2, dstar-chi2, ss-quarter, dk
        #[arg(long)]
        kind: String,
        /// exponent theta, as a fraction like 1/4 or a decimal
        #[arg(long)]
        exponent: String,
        #[arg(long)]
        xmax: f64,
        #[arg(long, default_value_t = 200)]
        points: u32,
        /// prime moduli for the character kinds, comma separated
        #[arg(long, value_delimiter = ',')]
        moduli: Vec<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the growth-exponent pair for the k-fold sine sums
    Exponents {
        #[arg(long)]
        k: u64,
    },
    /// Print the exact term expansion of a mixed partial derivative
    Expand {
        /// j, icomb, or t
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[arg(long, default_value_t = 1)]
        beta: u32,
        /// exponent s as a fraction, default 1/2
        #[arg(long, default_value = "1/2")]
        s: String,
        #[arg(long, default_value = "1/2")]
        w: String,
        /// use the 1-sigma (mirrored) factor
        #[arg(long)]
        minus_sigma: bool,
        #[arg(long)]
        minus_theta: bool,
    },
}

fn parse_sweep(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("sweep must be lo:hi, got {s}"))?;
    let lo = lo.parse().map_err(|e| format!("bad sweep lower bound: {e}"))?;
    let hi = hi.parse().map_err(|e| format!("bad sweep upper bound: {e}"))?;
    Ok((lo, hi))
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>, String> {
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
        let d: i64 = d.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
        if d == 0 {
            return Err("zero denominator".into());
        }
        return Ok(Ratio::new(n, d));
    }
    let v: f64 = s.parse().map_err(|e| format!("bad exponent: {e}"))?;
    // continued-fraction rationalization with a small denominator bound
    let (mut n0, mut d0, mut n1, mut d1) = (0i64, 1i64, 1i64, 0i64);
    let mut frac = v;
    for _ in 0..24 {
        let a = frac.floor();
        let (n2, d2) = (n0 + a as i64 * n1, d0 + a as i64 * d1);
        if d2 > 1_000_000 {
            break;
        }
        (n0, d0, n1, d1) = (n1, d1, n2, d2);
        let rem = frac - a;
        if rem.abs() < 1e-12 {
            break;
        }
        frac = 1.0 / rem;
    }
    if d1 == 0 || (n1 as f64 / d1 as f64 - v).abs() > 1e-9 {
        return Err(format!("cannot express {s} as a small fraction"));
    }
    Ok(Ratio::new(n1, d1))
}

/// Pre-validated payload write: everything is computed before anything is
/// written, so a failed run leaves no partial file behind.
fn emit(out: &Option<PathBuf>, payload: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, payload).map_err(|e| format!("write {path:?}: {e}")),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::SpecfunEval {
            func,
            order,
            twice_order,
            z,
        } => {
            let report = match func.as_str() {
                "j" => {
                    let ord = twice_order
                        .map(BesselOrder::from_twice)
                        .unwrap_or(BesselOrder::integer(order));
                    specfun::bessel_j(ord, z)
                }
                "y" => specfun::bessel_y(order, z),
                "k" => specfun::bessel_k_mod(order, z),
                "icomb" => specfun::i_comb(order, z),
                "dj" => specfun::d_bessel(DerivKind::J, order, z),
                "dicomb" => specfun::d_bessel(DerivKind::Icomb, order, z),
                "t32" => specfun::t_three_half(z),
                other => return Err(format!("unknown function {other}")),
            }
            .map_err(|e| e.to_string())?;
            println!(
                "value={:.17e} est_abs_error={:.3e} method={}",
                report.value,
                report.est_abs_error,
                serde_json::to_string(&report.method).unwrap().trim_matches('"')
            );
            Ok(true)
        }
        Command::VerifyEntry {
            id,
            theta,
            x,
            sweep,
            aspect,
            cap,
            output,
        } => {
            let (lo, hi) = parse_sweep(&sweep)?;
            let spec = match id.as_str() {
                "entry1" => IdentitySpec::Entry1 { theta, x },
                "entry2" => IdentitySpec::Entry2 { theta, x },
                other => return Err(format!("unknown entry id {other}")),
            };
            let cfg = SweepConfig {
                seed: output.seed,
                ..SweepConfig::new(lo, hi, aspect, cap)
            };
            let report = verify_identity(&spec, &cfg).map_err(|e| e.to_string())?;
            let passed = report.passed;
            emit(&output.out, &serde_json::to_string_pretty(&report).unwrap())?;
            Ok(passed)
        }
        Command::VerifyBalanced {
            id,
            sigma,
            theta,
            x,
            sweep,
            aspect,
            cap,
            cells,
            output,
        } => {
            let (lo, hi) = parse_sweep(&sweep)?;
            let spec = match id.as_str() {
                "bi" => IdentitySpec::BalancedK0 {
                    kind: BalancedSeriesKind::BiJ,
                    sigma,
                    theta,
                    x,
                },
                "ti" => IdentitySpec::BalancedK0 {
                    kind: BalancedSeriesKind::TiI,
                    sigma,
                    theta,
                    x,
                },
                "tt" => IdentitySpec::BalancedK0 {
                    kind: BalancedSeriesKind::TtT,
                    sigma,
                    theta,
                    x,
                },
                "k1" => IdentitySpec::BalancedK1 { cells },
                other => return Err(format!("unknown balanced id {other}")),
            };
            let cfg = SweepConfig {
                seed: output.seed,
                ..SweepConfig::new(lo, hi, aspect, cap)
            };
            let report = verify_identity(&spec, &cfg).map_err(|e| e.to_string())?;
            let passed = report.passed;
            emit(&output.out, &serde_json::to_string_pretty(&report).unwrap())?;
            Ok(passed)
        }
        Command::VerifyDecomposition {
            id,
            p,
            q,
            a,
            b,
            x,
            output,
        } => {
            let id = match id.as_str() {
                "cc" => DecompositionId::CcEvenEven,
                "cs" => DecompositionId::CsEvenOdd,
                "ss" => DecompositionId::SsOddOdd,
                "floorcos" => DecompositionId::FloorCos,
                "floorsin" => DecompositionId::FloorSin,
                "lemma25" => DecompositionId::Lemma25,
                "lemma26" => DecompositionId::Lemma26,
                other => return Err(format!("unknown decomposition id {other}")),
            };
            let report = verify_decomposition(id, p, q, a, b, x).map_err(|e| e.to_string())?;
            let passed = report.passed;
            emit(&output.out, &serde_json::to_string_pretty(&report).unwrap())?;
            Ok(passed)
        }
        Command::VerifyRiesz {
            p,
            q,
            a,
            b,
            x,
            sweep,
            aspect,
            cap,
            output,
        } => {
            let (lo, hi) = parse_sweep(&sweep)?;
            let spec = IdentitySpec::RieszK2 { p, q, a, b, x };
            let cfg = SweepConfig {
                seed: output.seed,
                ..SweepConfig::new(lo, hi, aspect, cap)
            };
            let report = verify_identity(&spec, &cfg).map_err(|e| e.to_string())?;
            let passed = report.passed;
            emit(&output.out, &serde_json::to_string_pretty(&report).unwrap())?;
            Ok(passed)
        }
        Command::Growth {
            kind,
            exponent,
            xmax,
            points,
            moduli,
            output,
        } => {
            let kind = match kind.as_str() {
                "delta" => GrowthKind::Delta,
                "p-circle" => GrowthKind::PCircle,
                "d-chi2" => GrowthKind::DChi2,
                "dstar-chi2" => GrowthKind::DstarChi2,
                "ss-quarter" => GrowthKind::SsQuarter,
                "dk" => GrowthKind::Dk,
                other => return Err(format!("unknown probe kind {other}")),
            };
            let cfg = GrowthConfig {
                seed: output.seed,
                moduli,
                ..GrowthConfig::new(kind, parse_ratio(&exponent)?, xmax, points)
            };
            let probe = growth_probe(&cfg).map_err(|e| e.to_string())?;
            emit(&output.out, &probe.to_csv())?;
            Ok(true)
        }
        Command::Exponents { k } => {
            if k == 0 {
                return Err("k must be >= 1".into());
            }
            let (omega, big_o) = sums::cn_exponents(k);
            println!("omega={omega} bigO={big_o}");
            Ok(true)
        }
        Command::Expand {
            kind,
            alpha,
            beta,
            s,
            w,
            minus_sigma,
            minus_theta,
        } => {
            let kind = match kind.as_str() {
                "j" => CellKind::J,
                "icomb" => CellKind::Icomb,
                "t" => CellKind::T,
                other => return Err(format!("unknown cell kind {other}")),
            };
            let sgn = |minus: bool| if minus { AxisSign::Minus } else { AxisSign::Plus };
            let e = balanced::expand_mixed_partial(
                kind,
                alpha,
                beta,
                parse_ratio(&s)?,
                parse_ratio(&w)?,
                sgn(minus_sigma),
                sgn(minus_theta),
            )
            .map_err(|e| e.to_string())?;
            println!("{e}");
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
