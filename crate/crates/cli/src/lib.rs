//! Command-line front end for the `fourpsq` tool.

pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fourpsq_core::analysis::{self, IntegralKind};
use fourpsq_core::arith::mult_order2;
use fourpsq_core::lemma51::{self, MarginInput};
use fourpsq_core::localsums;
use fourpsq_core::powers2;
use fourpsq_core::series::{self, R7Mode};
use fourpsq_core::RInterval;
use serde::Serialize;
use serde_json::json;

pub use verify::{verify_all, EntryVerdict, VerifyConfig, VerifyReport};

#[derive(Parser, Debug)]
#[command(name = "fourpsq", version, about = "Rigorous numerics for sums of four prime squares and powers of two")]
pub struct Cli {
    /// Print single-line JSON instead of pretty JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    I,
    J,
    Jplus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum R7Arg {
    Kappa,
    KappaC4,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every constant check and write a JSON report.
    VerifyAll {
        /// Include the statistical counting suite.
        #[arg(long)]
        full: bool,
        /// TOML file overriding the default configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Where to write the report; timings go to `<out>.timings.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiplicative order of 2 modulo an odd q.
    Order {
        #[arg(long)]
        q: u64,
    },
    /// Maximum of |Σ_j e(a·2^j/q)| over a ≢ 0 and the resulting slack.
    Maxexp {
        #[arg(long, default_value_t = lemma51::Q3_51)]
        q: u64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![35u32, 44])]
        k: Vec<u32>,
    },
    /// Singular series 𝔖(n).
    Sseries {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = series::SERIES_PMAX)]
        pmax: u64,
    },
    /// The series 𝔖(h) attached to a difference h.
    Sbold {
        #[arg(long, allow_negative_numbers = true)]
        h: i64,
        #[arg(long, default_value_t = series::SERIES_PMAX)]
        pmax: u64,
    },
    /// Exact 𝐁(p, h) against its closed form.
    Bbold {
        #[arg(long, alias = "p")]
        q: u64,
        #[arg(long, allow_negative_numbers = true)]
        h: i64,
    },
    /// Histogram of r_t(h).
    Rt {
        #[arg(long)]
        t: u32,
        #[arg(long = "L")]
        l: u32,
        #[arg(long)]
        csv: bool,
    },
    /// Number of solutions of 2^{x1}+...+2^{xt} ≡ 2^{y1}+...+2^{yt} mod q.
    Pcc {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: u32,
    },
    /// β(d) as an exact rational.
    Beta {
        #[arg(long, alias = "d")]
        q: u64,
    },
    /// Enclosures of c₁, c₂ and c₀.
    C1c2 {
        #[arg(long = "M", default_value_t = 40)]
        m: u64,
        #[arg(long, default_value_t = powers2::DP_MODULUS_CAP)]
        dp_cap: u64,
    },
    /// Enclosures of c₃ and c₄.
    C3c4 {
        #[arg(long)]
        pmax: Option<u64>,
    },
    /// Weighted sum of r₇(h) divided by L^14.
    SumR7 {
        #[arg(long = "L")]
        l: u32,
        #[arg(long, value_enum, default_value_t = R7Arg::KappaC4)]
        mode: R7Arg,
    },
    /// Head, tail and C₁ of the prime product over 17 <= p.
    Primeprod51,
    /// Exact residue counts against the Fourier band.
    ResidueCount {
        #[arg(long, default_value_t = lemma51::Q3_51)]
        q: u64,
        #[arg(long, default_value_t = 35)]
        k: u32,
        /// A single residue; without it every class a ≡ 0 mod step is swept.
        #[arg(long)]
        a: Option<u64>,
        #[arg(long, default_value_t = 3)]
        step: u64,
    },
    /// Σ_{j=1}^{p} (1 + A(j, p)) for a prime p.
    #[command(name = "sumA")]
    SumA {
        #[arg(long, alias = "p")]
        q: u64,
    },
    /// Major-arc floor minus the minor-arc coefficient at k.
    Margin {
        #[arg(long, default_value_t = 44)]
        k: u32,
        #[arg(long, default_value_t = lemma51::DEFAULT_LAMBDA)]
        lambda: f64,
        /// Defaults to 0.69; `computed` uses the c₁/c₂ enclosure at M = 40.
        #[arg(long, default_value = "0.69")]
        c0: String,
        /// η for the ratio 𝔍(0)/𝔦(1).
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
    },
    /// Windowed weighted counts of n = p1² + p2² + p3² + p4².
    Count4 {
        #[arg(long = "N")]
        n_big: u64,
        #[arg(long, default_value_t = 0.05)]
        eta: f64,
        /// Range `a:b`; every n ≡ 4 mod 24 inside is a target.
        #[arg(long)]
        window: String,
        #[arg(long)]
        csv: bool,
    },
    /// Σ r(n)² style sum over the window.
    Rieger {
        #[arg(long = "N")]
        n_big: u64,
        #[arg(long, default_value_t = 0.05)]
        eta: f64,
    },
    /// Quadruple counts J(P).
    Lemmaj {
        #[arg(long = "P")]
        p: u64,
    },
    /// Singular integral 𝔦(h), 𝔍(h) or 𝔍⁺(h).
    Integral {
        #[arg(long, value_enum, default_value_t = KindArg::I)]
        kind: KindArg,
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
        #[arg(long, default_value_t = 0.01)]
        eta: f64,
    },
    /// ∏_{p<z}(1 − 1/p) against e^{−γ}/log z.
    Mertens {
        #[arg(long, alias = "n")]
        z: u64,
    },
    /// m(x)/φ(m(x)) <= e^γ log x for 9 <= x <= xmax.
    Mratio {
        #[arg(long, default_value_t = 40)]
        x: u32,
    },
    /// Σ_{k<=kmax} of the dyadic local terms.
    Dyadic {
        #[arg(long)]
        k: u32,
    },
    /// Ω(p, h) and the local identity.
    Omega {
        #[arg(long, alias = "p")]
        q: u64,
        #[arg(long, allow_negative_numbers = true)]
        h: i64,
    },
}

/// Outcome of a subcommand: the exit code to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, String>;

fn emit<T: Serialize>(out: &mut dyn Write, compact: bool, v: &T) -> CliResult<()> {
    let s = if compact {
        serde_json::to_string(v)
    } else {
        serde_json::to_string_pretty(v)
    }
    .map_err(|e| e.to_string())?;
    writeln!(out, "{s}").map_err(|e| e.to_string())
}

fn io<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

pub fn load_config(path: Option<&PathBuf>) -> CliResult<VerifyConfig> {
    let cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            toml::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => VerifyConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn parse_window(s: &str) -> CliResult<(u64, u64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("window {s:?} must be a:b"))?;
    let a: u64 = a.trim().parse().map_err(io)?;
    let b: u64 = b.trim().parse().map_err(io)?;
    if a > b {
        return Err(format!("window {s:?} is empty"));
    }
    Ok((a, b))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<Outcome> {
    let c = cli.json;
    let core = |e: fourpsq_core::Error| e.to_string();
    match cli.command {
        Command::VerifyAll { full, config, out: path } => {
            let mut cfg = load_config(config.as_ref())?;
            cfg.full |= full;
            let report = verify_all(&cfg);
            let text = serde_json::to_string_pretty(&report).map_err(io)?;
            if let Some(p) = &path {
                std::fs::write(p, format!("{text}\n")).map_err(io)?;
                let mut tp = p.clone().into_os_string();
                tp.push(".timings.json");
                std::fs::write(tp, serde_json::to_string_pretty(&report.timings).map_err(io)?).map_err(io)?;
            }
            emit(out, c, &report)?;
            Ok(verdict(report.overall == EntryVerdict::Pass))
        }
        Command::Order { q } => {
            let rho = mult_order2(q).map_err(core)?;
            emit(out, c, &json!({ "q": q, "rho": rho }))?;
            Ok(Outcome::Pass)
        }
        Command::Maxexp { q, k } => {
            let r = lemma51::maxexp(q, &k).map_err(core)?;
            emit(out, c, &r)?;
            Ok(Outcome::Pass)
        }
        Command::Sseries { n, pmax } => {
            emit(out, c, &series::singular_series(n, pmax).map_err(core)?)?;
            Ok(Outcome::Pass)
        }
        Command::Sbold { h, pmax } => {
            emit(out, c, &series::sbold(h, pmax).map_err(core)?)?;
            Ok(Outcome::Pass)
        }
        Command::Bbold { q, h } => {
            let v = localsums::bbold(q, h).map_err(core)?;
            emit(out, c, &json!({ "p": q, "h": h, "exact": v.exact.to_string(), "closed_form": v.closed_form.to_string() }))?;
            Ok(verdict(v.exact == v.closed_form))
        }
        Command::Rt { t, l, csv } => {
            let hist = powers2::r_t_histogram(t, l).map_err(core)?;
            if csv {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["h", "r"]).map_err(io)?;
                for (h, r) in hist.iter().filter(|&(_, r)| r != 0) {
                    w.write_record([h.to_string(), r.to_string()]).map_err(io)?;
                }
                w.flush().map_err(io)?;
            } else {
                let rows: Vec<(i64, String)> = hist.iter().filter(|&(_, r)| r != 0).map(|(h, r)| (h, r.to_string())).collect();
                emit(out, c, &json!({ "t": t, "L": l, "total": hist.total().to_string(), "support": rows }))?;
            }
            Ok(Outcome::Pass)
        }
        Command::Pcc { q, t } => {
            let (d, n) = powers2::power_congruence_count(q, t).map_err(core)?;
            let (lo, hi) = d.extremes();
            emit(out, c, &json!({ "q": q, "t": t, "rho": d.rho, "count": n.to_string(), "min_class": lo.to_string(), "max_class": hi.to_string() }))?;
            Ok(Outcome::Pass)
        }
        Command::Beta { q } => {
            let b = powers2::beta(q).map_err(core)?;
            emit(out, c, &json!({ "d": q, "beta": b.to_string(), "enclosure": RInterval::from_ratio(&b) }))?;
            Ok(Outcome::Pass)
        }
        Command::C1c2 { m, dp_cap } => {
            let r = powers2::c1_c2_with(m, dp_cap, None).map_err(core)?;
            emit(out, c, &r)?;
            Ok(verdict(r.report.all_pass()))
        }
        Command::C3c4 { pmax } => {
            let r = match pmax {
                Some(p) => series::c3_c4_with(p),
                None => series::c3_c4(),
            }
            .map_err(core)?;
            emit(out, c, &r)?;
            Ok(verdict(r.c3.hi() <= 1.3904 && r.c4.hi() <= 0.9743))
        }
        Command::SumR7 { l, mode } => {
            let mode = match mode {
                R7Arg::Kappa => R7Mode::Kappa,
                R7Arg::KappaC4 => R7Mode::KappaC4,
            };
            emit(out, c, &series::sum_r7_weighted(l, mode).map_err(core)?)?;
            Ok(Outcome::Pass)
        }
        Command::Primeprod51 => {
            let r = lemma51::prime_product_51().map_err(core)?;
            emit(out, c, &r)?;
            Ok(verdict(r.head.lo() >= lemma51::HEAD_TARGET && r.c1.lo() >= lemma51::C1_TARGET))
        }
        Command::ResidueCount { q, k, a, step } => match a {
            Some(a) => {
                let r = lemma51::residue_count(q, k, a).map_err(core)?;
                emit(out, c, &r)?;
                Ok(verdict(r.holds))
            }
            None => {
                let r = lemma51::residue_sweep(q, k, step).map_err(core)?;
                emit(out, c, &r)?;
                Ok(verdict(r.all_hold))
            }
        },
        Command::SumA { q } => {
            let r = lemma51::sum_a_identity(q).map_err(core)?;
            emit(out, c, &r)?;
            Ok(verdict(r.holds))
        }
        Command::Margin { k, lambda, c0, eta } => {
            let c0 = if c0 == "computed" {
                powers2::c1_c2(40).map_err(core)?.c0
            } else {
                RInterval::around(c0.parse::<f64>().map_err(io)?)
            };
            let ji = analysis::ji_ratio(eta).map_err(core)?;
            let r = lemma51::final_margin(MarginInput {
                k,
                lambda,
                c0,
                ji_ratio: ji,
                major_floor: 0.9,
            })
            .map_err(core)?;
            emit(out, c, &r)?;
            Ok(verdict(r.margin.lo() > 0.0))
        }
        Command::Count4 { n_big, eta, window, csv } => {
            let (a, b) = parse_window(&window)?;
            let first = a + (24 + 4 - a % 24) % 24;
            let targets: Vec<u64> = (first..=b).step_by(24).collect();
            if targets.is_empty() {
                return Err(format!("window {window} holds no n ≡ 4 mod 24"));
            }
            let s = analysis::count4_window(n_big, eta, &targets).map_err(core)?;
            if csv {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["n", "count", "weighted", "prediction_lo", "prediction_hi", "ratio"]).map_err(io)?;
                for r in &s.rows {
                    w.write_record([
                        r.n.to_string(),
                        r.count.to_string(),
                        r.weighted.to_string(),
                        r.prediction.lo().to_string(),
                        r.prediction.hi().to_string(),
                        r.ratio.map(|x| x.to_string()).unwrap_or_default(),
                    ])
                    .map_err(io)?;
                }
                w.flush().map_err(io)?;
            } else {
                emit(out, c, &s)?;
            }
            Ok(Outcome::Pass)
        }
        Command::Rieger { n_big, eta } => {
            emit(out, c, &analysis::rieger_sum(n_big, eta).map_err(core)?)?;
            Ok(Outcome::Pass)
        }
        Command::Lemmaj { p } => {
            emit(out, c, &analysis::lemma_j(p).map_err(core)?)?;
            Ok(Outcome::Pass)
        }
        Command::Integral { kind, h, eta } => {
            let kind = match kind {
                KindArg::I => IntegralKind::I,
                KindArg::J => IntegralKind::J,
                KindArg::Jplus => IntegralKind::Jplus,
            };
            let v = analysis::singular_integral(h, eta, kind).map_err(core)?;
            emit(out, c, &json!({ "kind": kind, "h": h, "eta": eta, "value": v }))?;
            Ok(Outcome::Pass)
        }
        Command::Mertens { z } => {
            emit(out, c, &analysis::mertens_check(z).map_err(core)?)?;
            Ok(Outcome::Pass)
        }
        Command::Mratio { x } => {
            let r = powers2::m_ratio_check(x).map_err(core)?;
            emit(out, c, &r)?;
            Ok(verdict(r.all_hold))
        }
        Command::Dyadic { k } => {
            let v = localsums::dyadic_factor(k).map_err(core)?;
            emit(out, c, &json!({ "k": k, "factor": v.to_string() }))?;
            Ok(Outcome::Pass)
        }
        Command::Omega { q, h } => {
            let r = localsums::omega_local(q, h).map_err(core)?;
            emit(out, c, &r)?;
            Ok(verdict(r.identity_holds))
        }
    }
}
