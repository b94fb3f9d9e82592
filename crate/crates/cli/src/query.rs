use std::fmt::Write as _;

use beldef::altorders::StratifiedBase;
use beldef::zcore::{self, ZModel};
use beldef::{Formula, KnowledgeBase, LcdModel, OrderVerdict, World, WorldSet};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    P,
    Z,
    Lcd,
    Penalty,
    Lex,
    Brewka,
}

impl Engine {
    pub const ALL: [Engine; 6] = [
        Engine::P,
        Engine::Z,
        Engine::Lcd,
        Engine::Penalty,
        Engine::Lex,
        Engine::Brewka,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::P => "p",
            Engine::Z => "z",
            Engine::Lcd => "lcd",
            Engine::Penalty => "penalty",
            Engine::Lex => "lex",
            Engine::Brewka => "brewka",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Entailed,
    NotEntailed,
    /// LCD only: the two plausibilities have the same order.
    NotEntailedAmbiguous,
    /// LCD only: no uniform order between the two plausibilities.
    NotEntailedIncomparable,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Entailed => "entailed",
            Verdict::NotEntailed => "not-entailed",
            Verdict::NotEntailedAmbiguous => "not-entailed-ambiguous",
            Verdict::NotEntailedIncomparable => "not-entailed-incomparable",
        }
    }

    pub fn is_entailed(self) -> bool {
        self == Verdict::Entailed
    }
}

/// Least level (rank or cost) of the models of `alpha & beta` and of
/// `alpha & !beta`; `None` when there is no such model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Levels {
    pub with_beta: Option<u64>,
    pub without_beta: Option<u64>,
}

/// Violation terms of the models of `alpha & beta` and `alpha & !beta`,
/// pruned to their maximal elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationTerms {
    pub with_beta: Vec<String>,
    pub without_beta: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Z-strata as rule ids, lowest stratum first.
    pub strata: Vec<Vec<u32>>,
    /// LCD classes, most plausible first.
    pub classes: Vec<Vec<String>>,
    /// Preferred models of `alpha` under the engine's order.
    pub witness_worlds: Vec<String>,
    pub violation_terms: Option<ViolationTerms>,
    /// Order of `pl(alpha & beta)` against `pl(alpha & !beta)`.
    pub order: Option<String>,
    pub levels: Option<Levels>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryResult {
    pub engine: Engine,
    pub alpha: String,
    pub beta: String,
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
}

/// A knowledge base with a parsed query, checked for consistency.
pub struct Prepared {
    pub kb: KnowledgeBase,
    pub alpha_text: String,
    pub beta_text: String,
    pub alpha: Formula,
    pub beta: Formula,
    pub strata: Vec<Vec<u32>>,
}

impl Prepared {
    /// Parses the query against the vocabulary (registering new atoms) and
    /// rejects inconsistent bases.
    pub fn new(mut kb: KnowledgeBase, alpha: &str, beta: &str) -> Result<Self, CliError> {
        let a = kb.parse_formula(alpha)?;
        let b = kb.parse_formula(beta)?;
        let strat = zcore::stratify(&kb.base, kb.vocab.len());
        if !strat.is_consistent() {
            return Err(CliError::Inconsistent(id_list(strat.residue())));
        }
        Ok(Self {
            strata: strat.strata().to_vec(),
            kb,
            alpha_text: alpha.trim().to_string(),
            beta_text: beta.trim().to_string(),
            alpha: a,
            beta: b,
        })
    }

    fn atoms(&self) -> usize {
        self.kb.vocab.len()
    }

    fn describe(&self, worlds: impl IntoIterator<Item = World>) -> Vec<String> {
        worlds.into_iter().map(|w| self.kb.vocab.describe(w)).collect()
    }

    fn alpha_models(&self) -> WorldSet {
        WorldSet::models(&self.alpha, self.atoms())
    }

    fn split(&self) -> (WorldSet, WorldSet) {
        let a = self.alpha_models();
        let b = WorldSet::models(&self.beta, self.atoms());
        (a.intersection(&b), a.difference(&b))
    }

    pub fn run(&self, engine: Engine) -> Result<QueryResult, CliError> {
        let mut diagnostics = Diagnostics {
            strata: self.strata.clone(),
            ..Diagnostics::default()
        };
        let entailed = match engine {
            Engine::P => zcore::entails_p(&self.kb.base, self.atoms(), &self.alpha, &self.beta)?,
            Engine::Z => self.run_z(&mut diagnostics)?,
            Engine::Lcd => return self.run_lcd(diagnostics),
            Engine::Penalty | Engine::Lex | Engine::Brewka => {
                self.run_ordered(engine, &mut diagnostics)?
            }
        };
        Ok(self.result(engine, plain(entailed), diagnostics))
    }

    fn result(&self, engine: Engine, verdict: Verdict, diagnostics: Diagnostics) -> QueryResult {
        QueryResult {
            engine,
            alpha: self.alpha_text.clone(),
            beta: self.beta_text.clone(),
            verdict,
            diagnostics,
        }
    }

    fn run_z(&self, d: &mut Diagnostics) -> Result<bool, CliError> {
        let z = ZModel::new(&self.kb.base, self.atoms())?;
        let (yes, no) = self.split();
        let least = |s: &WorldSet| s.iter().map(|w| u64::from(z.rank(w))).min();
        d.levels = Some(Levels {
            with_beta: least(&yes),
            without_beta: least(&no),
        });
        let models = self.alpha_models();
        let best = least(&models);
        d.witness_worlds =
            self.describe(models.iter().filter(|&w| Some(u64::from(z.rank(w))) == best));
        Ok(z.entails(&self.alpha, &self.beta)?)
    }

    fn run_lcd(&self, mut d: Diagnostics) -> Result<QueryResult, CliError> {
        let model = LcdModel::build(&self.kb.base, self.atoms())?;
        d.classes = class_strings(model.classes());
        let answer = model.query(&self.alpha, &self.beta)?;
        d.violation_terms = Some(ViolationTerms {
            with_beta: answer.lhs.iter().map(ToString::to_string).collect(),
            without_beta: answer.rhs.iter().map(ToString::to_string).collect(),
        });
        d.order = answer.verdict.map(|v| format!("{v:?}"));
        d.witness_worlds = self.describe(model.preferred_models(&self.alpha)?);
        let verdict = if answer.entailed {
            Verdict::Entailed
        } else {
            match answer.verdict {
                Some(OrderVerdict::SameOrder) => Verdict::NotEntailedAmbiguous,
                Some(OrderVerdict::Incomparable) => Verdict::NotEntailedIncomparable,
                _ => Verdict::NotEntailed,
            }
        };
        Ok(self.result(Engine::Lcd, verdict, d))
    }

    fn run_ordered(&self, engine: Engine, d: &mut Diagnostics) -> Result<bool, CliError> {
        let sb = StratifiedBase::new(&self.kb.base, self.atoms())?;
        let (entailed, preferred) = match engine {
            Engine::Penalty => {
                let (yes, no) = self.split();
                let least = |s: &WorldSet| s.iter().map(|w| sb.penalty_cost(w)).min();
                d.levels = Some(Levels {
                    with_beta: least(&yes),
                    without_beta: least(&no),
                });
                let models = self.alpha_models();
                let best = least(&models);
                let preferred: Vec<World> =
                    models.iter().filter(|&w| Some(sb.penalty_cost(w)) == best).collect();
                (sb.entails_penalty(&self.alpha, &self.beta)?, preferred)
            }
            Engine::Lex => (
                sb.entails_lex(&self.alpha, &self.beta)?,
                sb.lex_preferred(&self.alpha)?,
            ),
            _ => (
                sb.entails_brewka(&self.alpha, &self.beta)?,
                sb.brewka_preferred(&self.alpha)?,
            ),
        };
        d.witness_worlds = self.describe(preferred);
        Ok(entailed)
    }
}

fn plain(entailed: bool) -> Verdict {
    if entailed {
        Verdict::Entailed
    } else {
        Verdict::NotEntailed
    }
}

pub fn id_list(ids: &[u32]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

pub fn class_strings(classes: &[Vec<beldef::EpsTerm>]) -> Vec<Vec<String>> {
    classes
        .iter()
        .map(|c| c.iter().map(ToString::to_string).collect())
        .collect()
}

/// `Δ1 = {1}; Δ2 = {2, 3}`, or `(none)`.
pub fn strata_line(strata: &[Vec<u32>]) -> String {
    if strata.is_empty() {
        return "(none)".into();
    }
    strata
        .iter()
        .enumerate()
        .map(|(i, s)| format!("Δ{} = {{{}}}", i + 1, id_list(s)))
        .collect::<Vec<_>>()
        .join("; ")
}

/// `ξ0 = {e1}; ξ1 = {e2, e3}`, or `(none)`.
pub fn classes_line(classes: &[Vec<String>]) -> String {
    if classes.is_empty() {
        return "(none)".into();
    }
    classes
        .iter()
        .enumerate()
        .map(|(i, c)| format!("ξ{i} = {{{}}}", c.join(", ")))
        .collect::<Vec<_>>()
        .join("; ")
}

fn level(v: Option<u64>) -> String {
    v.map_or_else(|| "inf".into(), |x| x.to_string())
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "(none)".into()
    } else {
        items.join(", ")
    }
}

impl QueryResult {
    pub fn render_text(&self) -> String {
        let d = &self.diagnostics;
        let mut out = String::new();
        let _ = writeln!(out, "engine: {}", self.engine.name());
        let _ = writeln!(out, "query: {} |~ {}", self.alpha, self.beta);
        let _ = writeln!(out, "verdict: {}", self.verdict.label());
        let _ = writeln!(out, "strata: {}", strata_line(&d.strata));
        if self.engine == Engine::Lcd {
            let _ = writeln!(out, "classes: {}", classes_line(&d.classes));
        }
        if let Some(t) = &d.violation_terms {
            let _ = writeln!(out, "terms of alpha & beta: {}", list(&t.with_beta));
            let _ = writeln!(out, "terms of alpha & !beta: {}", list(&t.without_beta));
        }
        if let Some(o) = &d.order {
            let _ = writeln!(out, "order: {o}");
        }
        if let Some(l) = &d.levels {
            let name = if self.engine == Engine::Z { "rank" } else { "cost" };
            let _ = writeln!(
                out,
                "least {name}: alpha & beta {}, alpha & !beta {}",
                level(l.with_beta),
                level(l.without_beta)
            );
        }
        if self.engine != Engine::P {
            let _ = writeln!(out, "preferred models of alpha:");
            if d.witness_worlds.is_empty() {
                let _ = writeln!(out, "  (none)");
            }
            for w in &d.witness_worlds {
                let _ = writeln!(out, "  {w}");
            }
        }
        out
    }
}

/// Verdicts of all engines on one query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub alpha: String,
    pub beta: String,
    pub results: Vec<QueryResult>,
}

impl Comparison {
    pub fn run(prepared: &Prepared) -> Result<Self, CliError> {
        let results = Engine::ALL
            .iter()
            .map(|&e| prepared.run(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            alpha: prepared.alpha_text.clone(),
            beta: prepared.beta_text.clone(),
            results,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "query: {} |~ {}", self.alpha, self.beta);
        for r in &self.results {
            let yes = if r.verdict.is_entailed() { "yes" } else { "no" };
            let _ = writeln!(out, "{:<8} {:<4} {}", format!("{}:", r.engine.name()), yes, r.verdict.label());
        }
        out
    }
}
