use std::fmt::Write as _;
use std::str::FromStr;

use beldef::oracle::{self, OracleReport};
use beldef::{gen, zcore, KnowledgeBase, LcdModel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::query::id_list;

pub const DEFAULT_EPS: &str = "1/100,1/10000,1/1000000";

/// Parses a comma-separated list of rationals (`1/100`, `0.01`, `3e-4`),
/// each strictly between 0 and 1.
pub fn parse_eps(text: &str) -> Result<Vec<BigRational>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let e = parse_rational(part)
            .ok_or_else(|| CliError::Usage(format!("invalid epsilon `{part}`")))?;
        if e <= BigRational::zero() || e >= BigRational::one() {
            return Err(CliError::Usage(format!("epsilon `{part}` must lie strictly between 0 and 1")));
        }
        out.push(e);
    }
    if out.is_empty() {
        return Err(CliError::Usage("no epsilon given".into()));
    }
    Ok(out)
}

fn parse_rational(text: &str) -> Option<BigRational> {
    if text.contains('/') {
        return BigRational::from_str(text).ok();
    }
    let (mantissa, exp) = match text.split_once(['e', 'E']) {
        Some((m, x)) => (m, x.parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer = BigInt::from_str(&digits).ok()?;
    let scale = exp - i32::try_from(frac.len()).ok()?;
    let ten = BigInt::from(10);
    let factor = BigRational::from_integer(Pow::pow(&ten, scale.unsigned_abs()));
    let value = BigRational::from_integer(numer);
    Some(if scale >= 0 { value * factor } else { value / factor })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RungLine {
    pub e: String,
    pub max_deviation: String,
    pub bound: String,
    pub within_bound: bool,
    pub confirmed: usize,
    pub refuted: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCheck {
    pub kb: String,
    pub exponents: Vec<(String, u64)>,
    pub rungs: Vec<RungLine>,
    pub shrinking: bool,
    /// Term pairs of equal order.
    pub same_order: Vec<(String, String)>,
    /// Set when the check could not run, e.g. a conflict in combination.
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRun {
    pub eps: Vec<String>,
    pub bases: Vec<BaseCheck>,
    pub passed: bool,
}

impl BaseCheck {
    fn from_report(kb: String, r: &OracleReport) -> Self {
        Self {
            kb,
            exponents: r.exponents.iter().map(|(s, k)| (s.to_string(), *k)).collect(),
            rungs: r
                .rungs
                .iter()
                .map(|g| RungLine {
                    e: g.e.to_string(),
                    max_deviation: g.max_deviation.to_string(),
                    bound: g.bound.to_string(),
                    within_bound: g.within_bound(),
                    confirmed: g.confirmed,
                    refuted: g.refuted.clone(),
                })
                .collect(),
            shrinking: r.shrinking,
            same_order: r
                .same_order
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            error: None,
            passed: r.passed(),
        }
    }

    fn failed(kb: String, error: String) -> Self {
        Self {
            kb,
            exponents: Vec::new(),
            rungs: Vec::new(),
            shrinking: false,
            same_order: Vec::new(),
            error: Some(error),
            passed: false,
        }
    }
}

/// Checks one base; inconsistent bases are rejected.
pub fn check(kb: &KnowledgeBase, ladder: &[BigRational]) -> Result<BaseCheck, CliError> {
    let atoms = kb.vocab.len();
    let strat = zcore::stratify(&kb.base, atoms);
    if !strat.is_consistent() {
        return Err(CliError::Inconsistent(id_list(strat.residue())));
    }
    let text = kb.to_kb_string();
    let outcome = LcdModel::build(&kb.base, atoms)
        .and_then(|model| oracle::run(&kb.base, &model, ladder));
    Ok(match outcome {
        Ok(report) => BaseCheck::from_report(text, &report),
        Err(e) => BaseCheck::failed(text, e.to_string()),
    })
}

/// Checks `count` random consistent bases (at most 4 atoms, 4 rules).
pub fn random(count: usize, seed: u64, ladder: &[BigRational]) -> Result<Vec<BaseCheck>, CliError> {
    let mut rng = gen::rng(seed);
    (0..count)
        .map(|_| check(&gen::consistent_sample(&mut rng, 4, 4).knowledge_base(), ladder))
        .collect()
}

impl OracleRun {
    pub fn new(ladder: &[BigRational], bases: Vec<BaseCheck>) -> Self {
        Self {
            eps: ladder.iter().map(ToString::to_string).collect(),
            passed: bases.iter().all(|b| b.passed),
            bases,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let many = self.bases.len() > 1;
        for (i, b) in self.bases.iter().enumerate() {
            if many {
                let _ = writeln!(out, "base {}:", i + 1);
                for line in b.kb.lines() {
                    let _ = writeln!(out, "  | {line}");
                }
            }
            render_base(&mut out, b);
        }
        let passed = self.bases.iter().filter(|b| b.passed).count();
        let _ = writeln!(
            out,
            "result: {} ({passed}/{} bases passed)",
            if self.passed { "PASS" } else { "FAIL" },
            self.bases.len()
        );
        out
    }
}

fn render_base(out: &mut String, b: &BaseCheck) {
    if let Some(e) = &b.error {
        let _ = writeln!(out, "error: {e}");
        return;
    }
    let exps: Vec<String> = b.exponents.iter().map(|(s, k)| format!("{s} = e^{k}")).collect();
    let _ = writeln!(
        out,
        "exponents: {}",
        if exps.is_empty() { "(none)".into() } else { exps.join(", ") }
    );
    for r in &b.rungs {
        let _ = writeln!(
            out,
            "e = {}: max |pl/viol - 1| = {} (bound {}, {}); {} Greater verdicts confirmed, {} refuted",
            r.e,
            r.max_deviation,
            r.bound,
            if r.within_bound { "ok" } else { "exceeded" },
            r.confirmed,
            r.refuted.len()
        );
        for f in &r.refuted {
            let _ = writeln!(out, "  refuted: {f}");
        }
    }
    let _ = writeln!(
        out,
        "deviation non-increasing as e shrinks: {}",
        if b.shrinking { "yes" } else { "no" }
    );
    for (a, c) in &b.same_order {
        let _ = writeln!(out, "same order {a} ~ {c}: no strict numeric separation expected");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_fractions_and_decimals() {
        let got = parse_eps("1/100, 0.0001,1e-6,2.5E-1").unwrap();
        assert_eq!(got, vec![q(1, 100), q(1, 10_000), q(1, 1_000_000), q(1, 4)]);
    }

    #[test]
    fn rejects_out_of_range() {
        for bad in ["0", "1", "3/2", "-0.1", "abc", ""] {
            assert!(parse_eps(bad).is_err(), "{bad}");
        }
    }
}
