use std::fmt::Write as _;

use beldef::altorders::StratifiedBase;
use beldef::lcd;
use beldef::zcore::{self, lc_build};
use beldef::{KnowledgeBase, LcdModel};
use serde::{Deserialize, Serialize};

use crate::query::{class_strings, classes_line, id_list, strata_line};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleLine {
    pub id: u32,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLevel {
    pub level: usize,
    pub focal_worlds: usize,
    pub satisfied: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLine {
    pub round: usize,
    pub discharged: Vec<u32>,
    pub class: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcdReport {
    pub constraints: Vec<String>,
    pub rounds: Vec<RoundLine>,
    pub classes: Vec<Vec<String>>,
    pub loose: Vec<String>,
    pub attached: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldRow {
    pub world: String,
    pub term: String,
    /// `None` for inconsistent bases.
    pub rank: Option<u32>,
    pub cost: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub atoms: Vec<String>,
    pub rules: Vec<RuleLine>,
    pub consistent: bool,
    pub strata: Vec<Vec<u32>>,
    /// Rules left once no more can be peeled; empty for consistent bases.
    pub residue: Vec<u32>,
    pub lc_chain: Vec<ChainLevel>,
    pub lcd: Option<LcdReport>,
    /// Set when the LCD model cannot be built.
    pub lcd_error: Option<String>,
    pub worlds: Vec<WorldRow>,
}

impl Analysis {
    pub fn new(kb: &KnowledgeBase) -> Self {
        let base = &kb.base;
        let atoms = kb.vocab.len();
        let strat = zcore::stratify(base, atoms);
        let consistent = strat.is_consistent();
        let rules = base
            .rules()
            .iter()
            .map(|r| RuleLine { id: r.id, text: r.display(&kb.vocab) })
            .collect();

        let mut lc_chain = Vec::new();
        let mut lcd_report = None;
        let mut lcd_error = None;
        let mut ordered = None;
        if consistent {
            if let Ok(chain) = lc_build(base, atoms) {
                lc_chain = chain
                    .levels()
                    .iter()
                    .enumerate()
                    .map(|(i, l)| ChainLevel {
                        level: i + 1,
                        focal_worlds: l.focal.len(),
                        satisfied: l.satisfied.clone(),
                    })
                    .collect();
            }
            match LcdModel::build(base, atoms) {
                Ok(model) => lcd_report = Some(lcd_of(&model)),
                Err(e) => lcd_error = Some(e.to_string()),
            }
            ordered = StratifiedBase::new(base, atoms).ok();
        }

        let worlds = kb
            .vocab
            .worlds()
            .map(|w| WorldRow {
                world: kb.vocab.describe(w),
                term: lcd::viol_term(base, w).to_string(),
                rank: consistent.then(|| zcore::world_rank(&strat, base, w)),
                cost: ordered.as_ref().map(|o| o.penalty_cost(w)),
            })
            .collect();

        Self {
            atoms: kb.vocab.atoms().to_vec(),
            rules,
            consistent,
            strata: if consistent { strat.strata().to_vec() } else { Vec::new() },
            residue: strat.residue().to_vec(),
            lc_chain,
            lcd: lcd_report,
            lcd_error,
            worlds,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "atoms: {}", self.atoms.join(" "));
        let _ = writeln!(out, "rules:");
        if self.rules.is_empty() {
            let _ = writeln!(out, "  (none)");
        }
        for r in &self.rules {
            let _ = writeln!(out, "  e{}: {}", r.id, r.text);
        }
        if self.consistent {
            let _ = writeln!(out, "strata: {}", strata_line(&self.strata));
            let _ = writeln!(out, "LC chain:");
            if self.lc_chain.is_empty() {
                let _ = writeln!(out, "  (none)");
            }
            for l in &self.lc_chain {
                let _ = writeln!(
                    out,
                    "  level {}: {} focal worlds, satisfies {{{}}}",
                    l.level,
                    l.focal_worlds,
                    id_list(&l.satisfied)
                );
            }
        } else {
            let _ = writeln!(out, "strata: inconsistent, residue {{{}}}", id_list(&self.residue));
        }
        if let Some(e) = &self.lcd_error {
            let _ = writeln!(out, "LCD: {e}");
        }
        if let Some(l) = &self.lcd {
            render_lcd(&mut out, l);
        }
        let _ = writeln!(out, "worlds:");
        let width = self.worlds.iter().map(|w| w.world.len()).max().unwrap_or(0).max(5);
        let term_width = self.worlds.iter().map(|w| w.term.len()).max().unwrap_or(0).max(4);
        let _ = writeln!(out, "  {:<width$}  {:<term_width$}  rank  cost", "world", "term");
        for w in &self.worlds {
            let show = |v: Option<String>| v.unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "  {:<width$}  {:<term_width$}  {:<4}  {}",
                w.world,
                w.term,
                show(w.rank.map(|r| r.to_string())),
                show(w.cost.map(|c| c.to_string()))
            );
        }
        out
    }
}

fn lcd_of(model: &LcdModel) -> LcdReport {
    LcdReport {
        constraints: model.constraints().iter().map(|c| c.render()).collect(),
        rounds: model
            .rounds()
            .iter()
            .map(|r| RoundLine {
                round: r.round,
                discharged: r.discharged.clone(),
                class: r.class.iter().map(ToString::to_string).collect(),
            })
            .collect(),
        classes: class_strings(model.classes()),
        loose: model.loose().iter().map(|(k, t)| format!("ξ{k}: {t}")).collect(),
        attached: model.attached().iter().map(ToString::to_string).collect(),
        warnings: model.warnings().to_vec(),
    }
}

fn render_lcd(out: &mut String, l: &LcdReport) {
    let _ = writeln!(out, "LCD constraints:");
    if l.constraints.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for c in &l.constraints {
        let _ = writeln!(out, "  {c}");
    }
    let _ = writeln!(out, "solver rounds:");
    if l.rounds.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for r in &l.rounds {
        let class = if r.class.is_empty() {
            "no new class".to_string()
        } else {
            format!("opens {{{}}}", r.class.join(", "))
        };
        let _ = writeln!(
            out,
            "  round {}: discharged {{{}}}, {class}",
            r.round,
            id_list(&r.discharged)
        );
    }
    let _ = writeln!(out, "classes: {}", classes_line(&l.classes));
    if !l.loose.is_empty() {
        let _ = writeln!(out, "loose terms: {}", l.loose.join("; "));
    }
    if !l.attached.is_empty() {
        let _ = writeln!(out, "attached to the last class: {}", l.attached.join(", "));
    }
    for w in &l.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}
