//! The `verify-all` pipeline: every named constant with its enclosure, target
//! and verdict, in a fixed order.

use std::time::Instant;

use fourpsq_core::analysis::{self, IntegralKind};
use fourpsq_core::arith::{mult_order2, primes_up_to, DEFAULT_RHO_SEED};
use fourpsq_core::lemma51::{self, MarginInput};
use fourpsq_core::localsums::{bbold, dyadic_factor, omega_local};
use fourpsq_core::powers2::{self, Comparison, Verdict};
use fourpsq_core::series::{self, R7Mode};
use fourpsq_core::{ExactRational, RInterval, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Window half-width for the counting checks.
    pub eta_count: f64,
    /// `η` for the singular integrals.
    pub eta_integral: f64,
    pub pmax_series: u64,
    pub dp_modulus_cap: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub lambda: f64,
    #[serde(rename = "L_values")]
    pub l_values: Vec<u32>,
    pub seed: u64,
    /// Run the statistical counting suite as well.
    pub full: bool,
    /// `N` for the windowed four-square counts.
    pub count_n: u64,
    pub count_targets: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            eta_count: 0.05,
            eta_integral: 0.01,
            pmax_series: series::SERIES_PMAX,
            dp_modulus_cap: powers2::DP_MODULUS_CAP,
            m: 40,
            lambda: lemma51::DEFAULT_LAMBDA,
            l_values: vec![10, 12],
            seed: DEFAULT_RHO_SEED,
            full: false,
            count_n: 400_000_000,
            count_targets: 200,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(format!("lambda = {} must lie in (0, 1)", self.lambda));
        }
        if self.pmax_series == 0 || self.dp_modulus_cap == 0 || self.m < 2 || self.count_n == 0 || self.count_targets == 0 {
            return Err("caps must be positive and M >= 2".into());
        }
        if !(self.eta_count > 0.0 && self.eta_count < 0.2 && self.eta_integral > 0.0 && self.eta_integral < 0.2) {
            return Err("eta values must lie in (0, 0.2)".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryVerdict {
    Pass,
    Fail,
    Info,
    Skipped,
}

impl From<Verdict> for EntryVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => EntryVerdict::Pass,
            Verdict::Fail => EntryVerdict::Fail,
            Verdict::Info => EntryVerdict::Info,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyEntry {
    pub name: String,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub target: Option<f64>,
    pub comparison: Comparison,
    pub verdict: EntryVerdict,
    pub mandatory: bool,
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub step: String,
    pub runtime_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub version: String,
    pub config: VerifyConfig,
    pub entries: Vec<VerifyEntry>,
    pub overall: EntryVerdict,
    /// Wall-clock times, kept out of the serialized report.
    #[serde(skip)]
    pub timings: Vec<Timing>,
}

impl VerifyReport {
    pub fn entry(&self, name: &str) -> Option<&VerifyEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

struct Builder {
    entries: Vec<VerifyEntry>,
    timings: Vec<Timing>,
}

impl Builder {
    fn push(&mut self, name: &str, enc: RInterval, target: Option<f64>, cmp: Comparison, mandatory: bool, notes: String) {
        self.entries.push(VerifyEntry {
            name: name.into(),
            lo: Some(enc.lo()),
            hi: Some(enc.hi()),
            target,
            comparison: cmp,
            verdict: cmp.holds(&enc, target).into(),
            mandatory,
            notes,
        });
    }

    fn skip(&mut self, names: &[(&str, bool)], reason: &str) {
        for &(name, mandatory) in names {
            self.entries.push(VerifyEntry {
                name: name.into(),
                lo: None,
                hi: None,
                target: None,
                comparison: Comparison::None,
                verdict: EntryVerdict::Skipped,
                mandatory,
                notes: format!("skipped: {reason}"),
            });
        }
    }

    /// Runs one step; on error every entry it would have produced is skipped.
    fn step<F>(&mut self, label: &str, names: &[(&str, bool)], f: F)
    where
        F: FnOnce(&mut Builder) -> Result<()>,
    {
        let t = Instant::now();
        let before = self.entries.len();
        if let Err(e) = f(self) {
            self.entries.truncate(before);
            self.skip(names, &e.to_string());
        }
        self.timings.push(Timing {
            step: label.into(),
            runtime_ms: t.elapsed().as_millis(),
        });
    }
}

fn count(n: usize) -> RInterval {
    RInterval::from_u64(n as u64)
}

pub fn verify_all(config: &VerifyConfig) -> VerifyReport {
    let mut b = Builder {
        entries: Vec::new(),
        timings: Vec::new(),
    };

    b.step("dyadic_factor", &[("dyadic_factor_3_to_40", true)], |b| {
        let four = ExactRational::from_integer(4.into());
        let bad = (3..=40).filter(|&k| dyadic_factor(k).map(|v| v != four).unwrap_or(true)).count();
        b.push("dyadic_factor_3_to_40", count(bad), Some(0.0), Comparison::Equals, true, "number of k in 3..=40 with factor != 4".into());
        Ok(())
    });

    b.step("sum_a_identity", &[("sum_a_identity_p_le_100", true)], |b| {
        let mut bad = 0;
        for p in primes_up_to(100)? {
            if !lemma51::sum_a_identity(p)?.holds {
                bad += 1;
            }
        }
        b.push("sum_a_identity_p_le_100", count(bad), Some(0.0), Comparison::Equals, true, "primes p <= 100 where the sum differs from p".into());
        Ok(())
    });

    b.step("local_identity", &[("local_identity_p_le_199", true)], |b| {
        let mut bad = 0;
        let mut degenerate = 0;
        for p in primes_up_to(199)?.into_iter().filter(|&p| p > 2) {
            for h in -50..=50 {
                let o = omega_local(p, h)?;
                if !o.identity_holds {
                    bad += 1;
                }
                if o.degenerate {
                    degenerate += 1;
                }
            }
        }
        b.push("local_identity_p_le_199", count(bad), Some(0.0), Comparison::Equals, true, format!("mismatches over 2 < p <= 199, |h| <= 50; {degenerate} degenerate cases with Ω = 0"));
        Ok(())
    });

    b.step("bbold_table", &[("bbold_table_p_le_500", true)], |b| {
        let mut bad = 0;
        for p in primes_up_to(500)?.into_iter().filter(|&p| p > 2) {
            for h in -50..=50 {
                let v = bbold(p, h)?;
                if v.exact != v.closed_form {
                    bad += 1;
                }
            }
        }
        b.push("bbold_table_p_le_500", count(bad), Some(0.0), Comparison::Equals, true, "exact vs four-case closed form, odd primes p <= 500, |h| <= 50".into());
        Ok(())
    });

    let mut c3 = None;
    b.step("c3_c4", &[("c3", true), ("c4", true)], |b| {
        let c = series::c3_c4()?;
        c3 = Some(c.c3);
        b.push("c3", c.c3, Some(1.3904), Comparison::AtMost, true, format!("Euler product to {} with tail", c.pmax));
        b.push("c4", c.c4, Some(0.9743), Comparison::AtMost, true, format!("Euler product to {} with tail", c.pmax));
        Ok(())
    });

    let mut c0 = None;
    b.step("c1_c2", &[("c1", false), ("c2", false), ("c0", true), ("c1c2_tail", false)], |b| {
        let r = powers2::c1_c2_with(config.m, config.dp_modulus_cap, c3)?;
        c0 = Some(r.c0);
        let skipped = r.terms1.iter().chain(&r.terms2).filter(|t| t.fallback).count();
        let rho_ok = r.terms1.iter().chain(&r.terms2).all(|t| t.beta_ge_rho != Some(false));
        let note = format!("M = {}, {} + {} candidates, {} bounded by β >= ρ; β >= ρ on every exact term: {}", config.m, r.terms1.len(), r.terms2.len(), skipped, rho_ok);
        b.push("c1", r.c1, None, Comparison::None, false, note.clone());
        b.push("c2", r.c2, None, Comparison::None, false, note);
        b.push("c0", r.c0, Some(0.69), Comparison::Below, true, "(25/32)c1 + (23/32)c2".into());
        b.push("c1c2_tail", r.tail, None, Comparison::None, false, "(8c3/15)e^γ(1 + log M)/M".into());
        Ok(())
    });

    let mut c1_51 = None;
    b.step("prime_product_51", &[("prime_product_head", true), ("C1", true), ("prime_product_tail", false)], |b| {
        let r = lemma51::prime_product_51()?;
        c1_51 = Some(r.c1);
        b.push("prime_product_head", r.head, Some(lemma51::HEAD_TARGET), Comparison::AtLeast, true, format!("{} primes in 17 <= p < {}", r.primes_used, r.cutoff));
        b.push("C1", r.c1, Some(lemma51::C1_TARGET), Comparison::AtLeast, true, "head times telescoped tail".into());
        b.push("prime_product_tail", r.tail, Some(r.tail_reference), Comparison::Above, false, "(1 − 1/(p_5000 − 1))^6; the reference figure 0.99994271 does not match".into());
        Ok(())
    });

    b.step(
        "maxexp",
        &[("rho_15015", true), ("maxexp_15015", true), ("slack_35", false), ("slack_44", false), ("downstream_8C1", true)],
        |b| {
            let rho = mult_order2(lemma51::Q3_51)?;
            b.push("rho_15015", RInterval::from_u64(rho), Some(60.0), Comparison::Equals, true, String::new());
            let m = lemma51::maxexp(lemma51::Q3_51, &[35, 44])?;
            b.push("maxexp_15015", m.max_abs, None, Comparison::Inside(34.5, 34.6), true, format!("attained at j = {}", m.attaining_j));
            let (s35, s44) = (m.slack[0].slack, m.slack[1].slack);
            b.push("slack_35", s35, Some(lemma51::SLACK_REFERENCE), Comparison::Below, false, "(3q − 1)(max/ρ)^35 against the reference 1e-7".into());
            b.push("slack_44", s44, None, Comparison::None, false, "(3q − 1)(max/ρ)^44".into());
            let c1 = match c1_51 {
                Some(c) => c,
                None => lemma51::prime_product_51()?.c1,
            };
            let (v, _) = lemma51::downstream_bound(c1, s44);
            b.push("downstream_8C1", v, Some(7.2), Comparison::AtLeast, true, "8·C1·(1 − slack_44)".into());
            Ok(())
        },
    );

    b.step("residue_count", &[("residue_count_15015_35", true)], |b| {
        let s = lemma51::residue_sweep(lemma51::Q3_51, 35, 3)?;
        let ratio = RInterval::from_biguint(&s.min_count) / s.lower_bound;
        b.push("residue_count_15015_35", ratio, Some(1.0), Comparison::AtLeast, true, format!("min over {} classes a ≡ 0 mod 3 of count / lower bound (argmin a = {})", s.classes, s.argmin));
        Ok(())
    });

    b.step("m_ratio", &[("m_ratio_9_to_40", true)], |b| {
        let r = powers2::m_ratio_check(40)?;
        let worst = r
            .rows
            .iter()
            .filter(|row| row.checked)
            .map(|row| row.ratio_enclosure / row.bound)
            .fold(RInterval::ZERO, |a, x| a.max(x));
        b.push("m_ratio_9_to_40", worst, Some(1.0), Comparison::AtMost, true, "max over 9 <= x <= 40 of (m/φ(m)) / (e^γ log x)".into());
        Ok(())
    });

    let mut ji = None;
    b.step(
        "integrals",
        &[("integral_I1", true), ("integral_J0", false), ("integral_Jplus0", false), ("integral_chain", true), ("ji_ratio", false)],
        |b| {
            let eta = config.eta_integral;
            let i1 = analysis::singular_integral(1.0, eta, IntegralKind::I)?;
            let j0 = analysis::singular_integral(0.0, eta, IntegralKind::J)?;
            let jp = analysis::singular_integral(0.0, eta, IntegralKind::Jplus)?;
            let oracle = 2.0 / 3.0 * (2.0 * eta).powi(3);
            b.push("integral_I1", i1, None, Comparison::Inside(0.95 * oracle, 1.05 * oracle), true, format!("η = {eta}; uniform-density value (2/3)(2η)^3 = {oracle:.6e}"));
            b.push("integral_J0", j0, None, Comparison::None, false, String::new());
            b.push("integral_Jplus0", jp, None, Comparison::None, false, String::new());
            // Both gaps of the chain must be certainly nonnegative.
            let gap = (j0.lo() - i1.hi()).min(jp.lo() - j0.hi());
            b.push("integral_chain", RInterval::point(gap), Some(0.0), Comparison::AtLeast, true, "min(J0.lo − I1.hi, J+0.lo − J0.hi)".into());
            let r = j0 / i1;
            ji = Some(r);
            b.push("ji_ratio", r, Some(1.0), Comparison::AtLeast, false, "𝔍(0)/𝔦(1)".into());
            Ok(())
        },
    );

    b.step(
        "final_margin",
        &[("minimal_k", true), ("margin_44", true), ("margin_43", true), ("minimal_k_computed_c0", false), ("margin_44_computed_c0", false)],
        |b| {
            let ratio = ji.unwrap_or(RInterval::ONE);
            let nominal = MarginInput {
                k: 44,
                lambda: config.lambda,
                c0: RInterval::around(0.69),
                ji_ratio: ratio,
                major_floor: 0.9,
            };
            let r44 = lemma51::final_margin(nominal)?;
            let r43 = lemma51::final_margin(MarginInput { k: 43, ..nominal })?;
            let mk = r44.minimal_k.map(|k| RInterval::from_u64(k as u64)).unwrap_or(RInterval::ENTIRE);
            b.push("minimal_k", mk, Some(44.0), Comparison::Equals, true, "c0 = 0.69, ratio from the integrals".into());
            b.push("margin_44", r44.margin, Some(0.0), Comparison::Above, true, "0.9 − λ^30·45·c0·ratio".into());
            b.push("margin_43", r43.margin, Some(0.0), Comparison::Below, true, "0.9 − λ^29·45·c0·ratio".into());
            if let Some(c) = c0 {
                let comp = lemma51::final_margin(MarginInput { c0: c, ..nominal })?;
                let mk = comp.minimal_k.map(|k| RInterval::from_u64(k as u64)).unwrap_or(RInterval::ENTIRE);
                b.push("minimal_k_computed_c0", mk, Some(44.0), Comparison::Equals, false, "same chain with the computed c0 enclosure".into());
                b.push("margin_44_computed_c0", comp.margin, Some(0.0), Comparison::Above, false, String::new());
            }
            Ok(())
        },
    );

    b.step("mertens", &[("mertens_100", true), ("mertens_10000", true)], |b| {
        let m = analysis::mertens_check(100)?;
        b.push("mertens_100", m.ratio, None, Comparison::Inside(0.95, 1.05), true, "∏(1 − 1/p) / (e^{−γ}/log z)".into());
        let m = analysis::mertens_check(10_000)?;
        b.push("mertens_10000", m.ratio, None, Comparison::Inside(0.99, 1.01), true, String::new());
        Ok(())
    });

    if config.full {
        b.step("count4_window", &[("count4_mean_ratio", false)], |b| {
            let n = config.count_n;
            let start = n - (n % 24) + 4;
            let targets: Vec<u64> = (0..config.count_targets as u64).map(|i| start - 24 * (i + 1)).collect();
            let w = analysis::count4_window(n, config.eta_count, &targets)?;
            b.push("count4_mean_ratio", RInterval::point(w.mean_ratio), None, Comparison::Inside(0.5, 1.5), false, format!("N = {n}, η = {}, {} targets, dispersion {:.4}", config.eta_count, targets.len(), w.dispersion));
            Ok(())
        });
        b.step("rieger", &[("rieger_trend", false)], |b| {
            let small = analysis::rieger_sum(1_000_000, config.eta_count)?;
            let large = analysis::rieger_sum(16_000_000, config.eta_count)?;
            let r = large.ratio_to_n_log_sq_n / small.ratio_to_n_log_sq_n;
            b.push("rieger_trend", RInterval::point(r), Some(2.0), Comparison::AtMost, false, "ratio at 1.6e7 over ratio at 1e6".into());
            Ok(())
        });
        b.step("avg_singular_series", &[("avg_singular_series", false)], |b| {
            let r = lemma51::avg_singular_series(1_000_004, 3, config.pmax_series)?;
            b.push("avg_singular_series", r.ratio, Some(0.5), Comparison::AtLeast, false, format!("N = 1000004, k = 3; asymptotic target {}", r.target));
            Ok(())
        });
        for &l in &config.l_values {
            let name = format!("sum_r7_L{l}");
            b.step(&name, &[(name.as_str(), false)], |b| {
                let r = series::sum_r7_weighted(l, R7Mode::KappaC4)?;
                b.push(&name, r.ratio_l14, None, Comparison::Inside(0.0, 2.0), false, "Σ r7(h)·bound(h) / L^14".into());
                Ok(())
            });
        }
    }

    let overall = if b
        .entries
        .iter()
        .filter(|e| e.mandatory)
        .all(|e| e.verdict == EntryVerdict::Pass || e.verdict == EntryVerdict::Info)
    {
        EntryVerdict::Pass
    } else {
        EntryVerdict::Fail
    };
    VerifyReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        entries: b.entries,
        overall,
        timings: b.timings,
    }
}
