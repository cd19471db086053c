//! Rule schemas, logic presets, backward instance generation and the
//! single-step checker.
//!
//! Every calculus is handled in hypersequent form: a sequent calculus is the
//! special case in which all hypersequents have exactly one component. The
//! generator ([`backward_instances`]) and the checker ([`check_instance`]) are
//! written independently of each other so that their agreement is a
//! meaningful test.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{Const, Formula};
use crate::multiset::Multiset;
use crate::sequent::{FormulaBag, Hypersequent, Sequent};

/// Inference rules of all supported calculi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Ax,
    L0,
    R0,
    L1,
    R1,
    LBot,
    RTop,
    LTensor,
    RTensor,
    LPar,
    RPar,
    LWith1,
    LWith2,
    RWith,
    LPlus,
    RPlus1,
    RPlus2,
    LNeg,
    RNeg,
    LLimp,
    RLimp,
    LDiaT,
    RDiaT,
    LBoxT,
    RBoxT,
    KBox,
    KBoxPrime,
    Mingle,
    LWeak,
    RWeak,
    LContr,
    RContr,
    LAntiContr,
    RAntiContr,
    EW,
    EC,
    Com,
    Cut,
    /// Leaf closed by a user-supplied axiom.
    Hyp,
}

impl RuleId {
    pub const ALL: [RuleId; 39] = [
        RuleId::Ax,
        RuleId::L0,
        RuleId::R0,
        RuleId::L1,
        RuleId::R1,
        RuleId::LBot,
        RuleId::RTop,
        RuleId::LTensor,
        RuleId::RTensor,
        RuleId::LPar,
        RuleId::RPar,
        RuleId::LWith1,
        RuleId::LWith2,
        RuleId::RWith,
        RuleId::LPlus,
        RuleId::RPlus1,
        RuleId::RPlus2,
        RuleId::LNeg,
        RuleId::RNeg,
        RuleId::LLimp,
        RuleId::RLimp,
        RuleId::LDiaT,
        RuleId::RDiaT,
        RuleId::LBoxT,
        RuleId::RBoxT,
        RuleId::KBox,
        RuleId::KBoxPrime,
        RuleId::Mingle,
        RuleId::LWeak,
        RuleId::RWeak,
        RuleId::LContr,
        RuleId::RContr,
        RuleId::LAntiContr,
        RuleId::RAntiContr,
        RuleId::EW,
        RuleId::EC,
        RuleId::Com,
        RuleId::Cut,
        RuleId::Hyp,
    ];

    /// Rules of the basic multiplicative-additive calculus.
    pub const MALL_BASE: [RuleId; 20] = [
        RuleId::L0,
        RuleId::R0,
        RuleId::L1,
        RuleId::R1,
        RuleId::LBot,
        RuleId::RTop,
        RuleId::LTensor,
        RuleId::RTensor,
        RuleId::LPar,
        RuleId::RPar,
        RuleId::LWith1,
        RuleId::LWith2,
        RuleId::RWith,
        RuleId::LPlus,
        RuleId::RPlus1,
        RuleId::RPlus2,
        RuleId::LNeg,
        RuleId::RNeg,
        RuleId::LLimp,
        RuleId::RLimp,
    ];

    /// Rules for the Tarskian modalities.
    pub const TARSKIAN: [RuleId; 4] = [RuleId::LDiaT, RuleId::RDiaT, RuleId::LBoxT, RuleId::RBoxT];

    /// Identifier used in proof files and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            RuleId::Ax => "Ax",
            RuleId::L0 => "L0",
            RuleId::R0 => "R0",
            RuleId::L1 => "L1",
            RuleId::R1 => "R1",
            RuleId::LBot => "LBot",
            RuleId::RTop => "RTop",
            RuleId::LTensor => "LTensor",
            RuleId::RTensor => "RTensor",
            RuleId::LPar => "LPar",
            RuleId::RPar => "RPar",
            RuleId::LWith1 => "LWith1",
            RuleId::LWith2 => "LWith2",
            RuleId::RWith => "RWith",
            RuleId::LPlus => "LPlus",
            RuleId::RPlus1 => "RPlus1",
            RuleId::RPlus2 => "RPlus2",
            RuleId::LNeg => "LNeg",
            RuleId::RNeg => "RNeg",
            RuleId::LLimp => "LLimp",
            RuleId::RLimp => "RLimp",
            RuleId::LDiaT => "LDiaT",
            RuleId::RDiaT => "RDiaT",
            RuleId::LBoxT => "LBoxT",
            RuleId::RBoxT => "RBoxT",
            RuleId::KBox => "KBox",
            RuleId::KBoxPrime => "KBoxPrime",
            RuleId::Mingle => "Mingle",
            RuleId::LWeak => "LWeak",
            RuleId::RWeak => "RWeak",
            RuleId::LContr => "LContr",
            RuleId::RContr => "RContr",
            RuleId::LAntiContr => "LAntiContr",
            RuleId::RAntiContr => "RAntiContr",
            RuleId::EW => "EW",
            RuleId::EC => "EC",
            RuleId::Com => "Com",
            RuleId::Cut => "Cut",
            RuleId::Hyp => "Hyp",
        }
    }

    /// Conventional typeset label, e.g. `R◇̇`.
    pub fn label(self) -> &'static str {
        match self {
            RuleId::Ax => "Ax",
            RuleId::L0 => "L0",
            RuleId::R0 => "R0",
            RuleId::L1 => "L1",
            RuleId::R1 => "R1",
            RuleId::LBot => "L⊥",
            RuleId::RTop => "R⊤",
            RuleId::LTensor => "L⊗",
            RuleId::RTensor => "R⊗",
            RuleId::LPar => "L⊕",
            RuleId::RPar => "R⊕",
            RuleId::LWith1 => "L∧₁",
            RuleId::LWith2 => "L∧₂",
            RuleId::RWith => "R∧",
            RuleId::LPlus => "L∨",
            RuleId::RPlus1 => "R∨₁",
            RuleId::RPlus2 => "R∨₂",
            RuleId::LNeg => "L¬",
            RuleId::RNeg => "R¬",
            RuleId::LLimp => "L→",
            RuleId::RLimp => "R→",
            RuleId::LDiaT => "L◇\u{307}",
            RuleId::RDiaT => "R◇\u{307}",
            RuleId::LBoxT => "L□\u{307}",
            RuleId::RBoxT => "R□\u{307}",
            RuleId::KBox => "K□",
            RuleId::KBoxPrime => "K□′",
            RuleId::Mingle => "M",
            RuleId::LWeak => "LW",
            RuleId::RWeak => "RW",
            RuleId::LContr => "LC",
            RuleId::RContr => "RC",
            RuleId::LAntiContr => "LC⁻¹",
            RuleId::RAntiContr => "RC⁻¹",
            RuleId::EW => "EW",
            RuleId::EC => "EC",
            RuleId::Com => "Com",
            RuleId::Cut => "Cut",
            RuleId::Hyp => "Hyp",
        }
    }

    /// Label in LaTeX math notation.
    pub fn latex_label(self) -> &'static str {
        match self {
            RuleId::LBot => "L\\bot",
            RuleId::RTop => "R\\top",
            RuleId::LTensor => "L\\otimes",
            RuleId::RTensor => "R\\otimes",
            RuleId::LPar => "L\\oplus",
            RuleId::RPar => "R\\oplus",
            RuleId::LWith1 => "L\\land_1",
            RuleId::LWith2 => "L\\land_2",
            RuleId::RWith => "R\\land",
            RuleId::LPlus => "L\\lor",
            RuleId::RPlus1 => "R\\lor_1",
            RuleId::RPlus2 => "R\\lor_2",
            RuleId::LNeg => "L\\neg",
            RuleId::RNeg => "R\\neg",
            RuleId::LLimp => "L\\imp",
            RuleId::RLimp => "R\\imp",
            RuleId::LDiaT => "L\\Diamonddot",
            RuleId::RDiaT => "R\\Diamonddot",
            RuleId::LBoxT => "L\\boxdot",
            RuleId::RBoxT => "R\\boxdot",
            RuleId::KBox => "K\\Box",
            RuleId::KBoxPrime => "K\\Box'",
            RuleId::LAntiContr => "LC^{-1}",
            RuleId::RAntiContr => "RC^{-1}",
            RuleId::Cut => "cut",
            other => other.label(),
        }
    }

    /// Number of premisses the schema has.
    pub fn arity(self) -> usize {
        match self {
            RuleId::Ax | RuleId::L0 | RuleId::R1 | RuleId::LBot | RuleId::RTop | RuleId::Hyp => 0,
            RuleId::RTensor
            | RuleId::LPar
            | RuleId::RWith
            | RuleId::LPlus
            | RuleId::LLimp
            | RuleId::LDiaT
            | RuleId::RBoxT
            | RuleId::Mingle
            | RuleId::Com
            | RuleId::Cut => 2,
            _ => 1,
        }
    }

    /// Search order: axioms, invertible rules, non-invertible logical rules,
    /// context-splitting rules, then structural rules.
    pub fn priority(self) -> u8 {
        match self {
            RuleId::Ax | RuleId::L0 | RuleId::R1 | RuleId::LBot | RuleId::RTop | RuleId::Hyp => 0,
            RuleId::L1
            | RuleId::R0
            | RuleId::LTensor
            | RuleId::RPar
            | RuleId::LNeg
            | RuleId::RNeg
            | RuleId::RLimp
            | RuleId::RDiaT
            | RuleId::LBoxT => 1,
            RuleId::RWith | RuleId::LPlus => 2,
            RuleId::LWith1
            | RuleId::LWith2
            | RuleId::RPlus1
            | RuleId::RPlus2
            | RuleId::KBox
            | RuleId::KBoxPrime => 3,
            RuleId::RTensor
            | RuleId::LPar
            | RuleId::LLimp
            | RuleId::LDiaT
            | RuleId::RBoxT => 4,
            RuleId::EW | RuleId::LAntiContr | RuleId::RAntiContr | RuleId::LWeak | RuleId::RWeak => 5,
            RuleId::Mingle => 6,
            RuleId::LContr | RuleId::RContr | RuleId::EC | RuleId::Com | RuleId::Cut => 7,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule name '{0}'")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

/// Limits that keep backward search finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchBudget {
    /// Longest branch explored.
    pub max_depth: usize,
    /// Contraction steps allowed on one branch.
    pub contraction_budget: u32,
    /// External contraction steps allowed on one branch.
    pub ec_budget: u32,
    /// Communication steps allowed on one branch.
    pub com_budget: u32,
    /// Total node expansions before giving up.
    pub node_limit: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 40,
            contraction_budget: 2,
            ec_budget: 2,
            com_budget: 3,
            node_limit: 5_000_000,
        }
    }
}

/// The named calculi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Preset {
    Mall,
    Kmall,
    KmallPrime,
    MallM,
    MallAnticontr,
    Amall,
    Sll,
    Iul,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Mall,
        Preset::Kmall,
        Preset::KmallPrime,
        Preset::MallM,
        Preset::MallAnticontr,
        Preset::Amall,
        Preset::Sll,
        Preset::Iul,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Preset::Mall => "mall",
            Preset::Kmall => "kmall",
            Preset::KmallPrime => "kmall-prime",
            Preset::MallM => "mall-m",
            Preset::MallAnticontr => "mall-anticontr",
            Preset::Amall => "amall",
            Preset::Sll => "sll",
            Preset::Iul => "iul",
        }
    }

    pub fn logic(self) -> LogicSpec {
        let mut rules: BTreeSet<RuleId> = RuleId::MALL_BASE.into_iter().collect();
        rules.extend(RuleId::TARSKIAN);
        rules.insert(RuleId::Ax);
        let extra: &[RuleId] = match self {
            Preset::Mall => &[],
            Preset::Kmall => &[RuleId::KBox],
            Preset::KmallPrime => &[RuleId::KBoxPrime],
            Preset::MallM => &[RuleId::Mingle],
            Preset::MallAnticontr => &[RuleId::LAntiContr, RuleId::RAntiContr],
            Preset::Amall => &[RuleId::LWeak, RuleId::RWeak],
            Preset::Sll => &[RuleId::LContr, RuleId::RContr],
            Preset::Iul => &[RuleId::EW, RuleId::EC, RuleId::Com],
        };
        rules.extend(extra.iter().copied());
        LogicSpec {
            name: self.name().to_string(),
            rules,
            hypersequent: self == Preset::Iul,
            budgets: SearchBudget::default(),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown logic '{0}' (expected one of mall, kmall, kmall-prime, mall-m, mall-anticontr, amall, sll, iul)")]
pub struct UnknownPreset(pub String);

impl FromStr for Preset {
    type Err = UnknownPreset;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Preset::ALL
            .iter()
            .copied()
            .find(|p| p.name() == norm)
            .ok_or_else(|| UnknownPreset(s.to_string()))
    }
}

/// A calculus: enabled rules, sequent shape and search budgets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicSpec {
    pub name: String,
    pub rules: BTreeSet<RuleId>,
    pub hypersequent: bool,
    pub budgets: SearchBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidLogic {
    #[error("hypersequent logic '{0}' must enable EW and EC")]
    MissingExternalRules(String),
    #[error("logic '{0}' enables both K□ and K□′")]
    ConflictingBoxRules(String),
    #[error("logic '{0}' enables hypersequent rules but is not a hypersequent calculus")]
    StrayHypersequentRule(String),
}

impl LogicSpec {
    pub fn preset(name: &str) -> Result<LogicSpec, UnknownPreset> {
        Ok(name.parse::<Preset>()?.logic())
    }

    /// A preset name, optionally followed by `+cut` to enable the cut rule.
    pub fn parse(name: &str) -> Result<LogicSpec, UnknownPreset> {
        match name.trim().strip_suffix("+cut") {
            Some(base) => {
                let mut logic = Self::preset(base)?.with_rule(RuleId::Cut);
                logic.name = format!("{}+cut", logic.name);
                Ok(logic)
            }
            None => Self::preset(name),
        }
    }

    pub fn has(&self, rule: RuleId) -> bool {
        self.rules.contains(&rule)
    }

    pub fn with_rule(mut self, rule: RuleId) -> Self {
        self.rules.insert(rule);
        self
    }

    pub fn without_rule(mut self, rule: RuleId) -> Self {
        self.rules.remove(&rule);
        self
    }

    pub fn with_budgets(mut self, budgets: SearchBudget) -> Self {
        self.budgets = budgets;
        self
    }

    pub fn validate(&self) -> Result<(), InvalidLogic> {
        if self.hypersequent && !(self.has(RuleId::EW) && self.has(RuleId::EC)) {
            return Err(InvalidLogic::MissingExternalRules(self.name.clone()));
        }
        if self.has(RuleId::KBox) && self.has(RuleId::KBoxPrime) {
            return Err(InvalidLogic::ConflictingBoxRules(self.name.clone()));
        }
        if !self.hypersequent && [RuleId::EW, RuleId::EC, RuleId::Com].iter().any(|r| self.has(*r)) {
            return Err(InvalidLogic::StrayHypersequentRule(self.name.clone()));
        }
        Ok(())
    }
}

/// One backward application of a rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub conclusion: Hypersequent,
    /// Index into [`Hypersequent::components`] of the active component.
    pub active_component: usize,
    /// Principal formulas; empty for structural rules.
    pub principal: Vec<Formula>,
    pub premises: Vec<Hypersequent>,
}

// ---------------------------------------------------------------------------
// Backward generation
// ---------------------------------------------------------------------------

fn bag(fs: &[Formula]) -> FormulaBag {
    fs.iter().cloned().collect()
}

fn add_ant(s: &Sequent, fs: &[Formula]) -> Sequent {
    Sequent::from_bags(s.ant.sum(&bag(fs)), s.succ.clone())
}

fn add_succ(s: &Sequent, fs: &[Formula]) -> Sequent {
    Sequent::from_bags(s.ant.clone(), s.succ.sum(&bag(fs)))
}

fn unbox(f: &Formula) -> Option<Formula> {
    match f {
        Formula::BoxK(a) => Some((**a).clone()),
        _ => None,
    }
}

/// Single-component backward steps: `(rule, principal, premisses)`.
fn component_steps(s: &Sequent, logic: &LogicSpec) -> Vec<(RuleId, Vec<Formula>, Vec<Sequent>)> {
    let mut out = Vec::new();
    let on = |r: RuleId| logic.has(r);

    // zero-premiss axioms
    if on(RuleId::Ax) && s.ant.len() == 1 && s.succ.len() == 1 && s.ant == s.succ {
        let a = s.ant.iter().next().unwrap().clone();
        out.push((RuleId::Ax, vec![a], vec![]));
    }
    if on(RuleId::L0) && s.succ.is_empty() && s.ant.len() == 1 && s.ant.contains(&Formula::zero()) {
        out.push((RuleId::L0, vec![Formula::zero()], vec![]));
    }
    if on(RuleId::R1) && s.ant.is_empty() && s.succ.len() == 1 && s.succ.contains(&Formula::one()) {
        out.push((RuleId::R1, vec![Formula::one()], vec![]));
    }
    if on(RuleId::LBot) && s.ant.contains(&Formula::bot()) {
        out.push((RuleId::LBot, vec![Formula::bot()], vec![]));
    }
    if on(RuleId::RTop) && s.succ.contains(&Formula::top()) {
        out.push((RuleId::RTop, vec![Formula::top()], vec![]));
    }

    // left logical rules
    for (f, _) in s.ant.distinct() {
        let rest = Sequent::from_bags(s.ant.without(f).unwrap(), s.succ.clone());
        let p = vec![f.clone()];
        match f {
            Formula::Const(Const::One) if on(RuleId::L1) => {
                out.push((RuleId::L1, p, vec![rest]));
            }
            Formula::Tensor(a, b) if on(RuleId::LTensor) => {
                out.push((RuleId::LTensor, p, vec![add_ant(&rest, &[(**a).clone(), (**b).clone()])]));
            }
            Formula::Par(a, b) if on(RuleId::LPar) => {
                for (g1, g2) in rest.ant.splits() {
                    for (d1, d2) in rest.succ.splits() {
                        out.push((
                            RuleId::LPar,
                            p.clone(),
                            vec![
                                Sequent::from_bags(g1.with((**a).clone()), d1),
                                Sequent::from_bags(g2.with((**b).clone()), d2),
                            ],
                        ));
                    }
                }
            }
            Formula::With(a, b) => {
                if on(RuleId::LWith1) {
                    out.push((RuleId::LWith1, p.clone(), vec![add_ant(&rest, &[(**a).clone()])]));
                }
                if on(RuleId::LWith2) {
                    out.push((RuleId::LWith2, p, vec![add_ant(&rest, &[(**b).clone()])]));
                }
            }
            Formula::Plus(a, b) if on(RuleId::LPlus) => {
                out.push((
                    RuleId::LPlus,
                    p,
                    vec![add_ant(&rest, &[(**a).clone()]), add_ant(&rest, &[(**b).clone()])],
                ));
            }
            Formula::Neg(a) if on(RuleId::LNeg) => {
                out.push((RuleId::LNeg, p, vec![add_succ(&rest, &[(**a).clone()])]));
            }
            Formula::Limp(a, b) if on(RuleId::LLimp) => {
                for (g1, g2) in rest.ant.splits() {
                    for (d1, d2) in rest.succ.splits() {
                        out.push((
                            RuleId::LLimp,
                            p.clone(),
                            vec![
                                Sequent::from_bags(g1.clone(), d1.with((**a).clone())),
                                Sequent::from_bags(g2.with((**b).clone()), d2),
                            ],
                        ));
                    }
                }
            }
            Formula::DiaT(a) if on(RuleId::LDiaT) => {
                for (g1, g2) in rest.ant.splits() {
                    for (d1, d2) in rest.succ.splits() {
                        out.push((
                            RuleId::LDiaT,
                            p.clone(),
                            vec![
                                Sequent::from_bags(g1.with((**a).clone()), d1),
                                Sequent::from_bags(g2.with((**a).clone()), d2),
                            ],
                        ));
                    }
                }
            }
            Formula::BoxT(a) if on(RuleId::LBoxT) => {
                out.push((RuleId::LBoxT, p, vec![add_ant(&rest, &[(**a).clone(), (**a).clone()])]));
            }
            _ => {}
        }
    }

    // right logical rules
    for (f, _) in s.succ.distinct() {
        let rest = Sequent::from_bags(s.ant.clone(), s.succ.without(f).unwrap());
        let p = vec![f.clone()];
        match f {
            Formula::Const(Const::Zero) if on(RuleId::R0) => {
                out.push((RuleId::R0, p, vec![rest]));
            }
            Formula::Tensor(a, b) if on(RuleId::RTensor) => {
                for (g1, g2) in rest.ant.splits() {
                    for (d1, d2) in rest.succ.splits() {
                        out.push((
                            RuleId::RTensor,
                            p.clone(),
                            vec![
                                Sequent::from_bags(g1.clone(), d1.with((**a).clone())),
                                Sequent::from_bags(g2.clone(), d2.with((**b).clone())),
                            ],
                        ));
                    }
                }
            }
            Formula::Par(a, b) if on(RuleId::RPar) => {
                out.push((RuleId::RPar, p, vec![add_succ(&rest, &[(**a).clone(), (**b).clone()])]));
            }
            Formula::With(a, b) if on(RuleId::RWith) => {
                out.push((
                    RuleId::RWith,
                    p,
                    vec![add_succ(&rest, &[(**a).clone()]), add_succ(&rest, &[(**b).clone()])],
                ));
            }
            Formula::Plus(a, b) => {
                if on(RuleId::RPlus1) {
                    out.push((RuleId::RPlus1, p.clone(), vec![add_succ(&rest, &[(**a).clone()])]));
                }
                if on(RuleId::RPlus2) {
                    out.push((RuleId::RPlus2, p, vec![add_succ(&rest, &[(**b).clone()])]));
                }
            }
            Formula::Neg(a) if on(RuleId::RNeg) => {
                out.push((RuleId::RNeg, p, vec![add_ant(&rest, &[(**a).clone()])]));
            }
            Formula::Limp(a, b) if on(RuleId::RLimp) => {
                let prem = add_succ(&add_ant(&rest, &[(**a).clone()]), &[(**b).clone()]);
                out.push((RuleId::RLimp, p, vec![prem]));
            }
            Formula::DiaT(a) if on(RuleId::RDiaT) => {
                out.push((RuleId::RDiaT, p, vec![add_succ(&rest, &[(**a).clone(), (**a).clone()])]));
            }
            Formula::BoxT(a) if on(RuleId::RBoxT) => {
                for (g1, g2) in rest.ant.splits() {
                    for (d1, d2) in rest.succ.splits() {
                        out.push((
                            RuleId::RBoxT,
                            p.clone(),
                            vec![
                                Sequent::from_bags(g1.clone(), d1.with((**a).clone())),
                                Sequent::from_bags(g2.clone(), d2.with((**a).clone())),
                            ],
                        ));
                    }
                }
            }
            _ => {}
        }
    }

    // modal box rules
    let unboxed_ant: Option<Vec<Formula>> = s.ant.iter().map(unbox).collect();
    let unboxed_succ: Option<Vec<Formula>> = s.succ.iter().map(unbox).collect();
    if let (Some(ant), Some(succ)) = (unboxed_ant, unboxed_succ) {
        if on(RuleId::KBox) && succ.len() == 1 {
            let principal = s.succ.iter().cloned().collect();
            out.push((RuleId::KBox, principal, vec![Sequent::new(ant.clone(), succ.clone())]));
        }
        if on(RuleId::KBoxPrime) && succ.len() <= 1 {
            let principal = s.succ.iter().cloned().collect();
            out.push((RuleId::KBoxPrime, principal, vec![Sequent::new(ant, succ)]));
        }
    }

    // structural rules
    if on(RuleId::Mingle) {
        for (g1, g2) in s.ant.splits() {
            for (d1, d2) in s.succ.splits() {
                let p1 = Sequent::from_bags(g1.clone(), d1);
                let p2 = Sequent::from_bags(g2.clone(), d2);
                if !p1.is_empty() && !p2.is_empty() {
                    out.push((RuleId::Mingle, vec![], vec![p1, p2]));
                }
            }
        }
    }
    for (f, n) in s.ant.distinct() {
        let smaller = Sequent::from_bags(s.ant.without(f).unwrap(), s.succ.clone());
        if on(RuleId::LWeak) {
            out.push((RuleId::LWeak, vec![f.clone()], vec![smaller.clone()]));
        }
        if on(RuleId::LAntiContr) && n >= 2 {
            out.push((RuleId::LAntiContr, vec![f.clone()], vec![smaller]));
        }
        if on(RuleId::LContr) {
            out.push((RuleId::LContr, vec![f.clone()], vec![add_ant(s, std::slice::from_ref(f))]));
        }
    }
    for (f, n) in s.succ.distinct() {
        let smaller = Sequent::from_bags(s.ant.clone(), s.succ.without(f).unwrap());
        if on(RuleId::RWeak) {
            out.push((RuleId::RWeak, vec![f.clone()], vec![smaller.clone()]));
        }
        if on(RuleId::RAntiContr) && n >= 2 {
            out.push((RuleId::RAntiContr, vec![f.clone()], vec![smaller]));
        }
        if on(RuleId::RContr) {
            out.push((RuleId::RContr, vec![f.clone()], vec![add_succ(s, std::slice::from_ref(f))]));
        }
    }
    out
}

fn lift(context: &Multiset<Sequent>, s: Sequent) -> Hypersequent {
    Hypersequent::from_multiset(context.with(s)).expect("nonempty")
}

fn component_index(goal: &Hypersequent, s: &Sequent) -> usize {
    goal.components().iter().position(|c| *c == s).unwrap_or(0)
}

/// Every rule instance whose conclusion is `goal`.
///
/// Zero-premiss rules (including user axioms, reported as [`RuleId::Hyp`])
/// only close single-component goals; larger hypersequents reach them through
/// EW. Cut is never generated.
pub fn backward_instances(goal: &Hypersequent, logic: &LogicSpec, axioms: &[Hypersequent]) -> Vec<RuleInstance> {
    let mut out = local_instances(goal, logic, axioms);
    out.extend(external_instances(goal, logic));
    out.sort_by_key(|inst| inst.rule.priority());
    out
}

/// The instances of [`backward_instances`] that act inside one component,
/// plus hypothesis leaves.
pub fn local_instances(goal: &Hypersequent, logic: &LogicSpec, axioms: &[Hypersequent]) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    let mut seen = rustc_hash::FxHashSet::default();
    let mut push = |inst: RuleInstance, out: &mut Vec<RuleInstance>| {
        if seen.insert((inst.rule, inst.premises.clone())) {
            out.push(inst);
        }
    };

    if axioms.contains(goal) {
        push(
            RuleInstance {
                rule: RuleId::Hyp,
                conclusion: goal.clone(),
                active_component: 0,
                principal: vec![],
                premises: vec![],
            },
            &mut out,
        );
    }

    for (comp, _) in goal.multiset().distinct() {
        let context = goal.context_without(comp).unwrap();
        let index = component_index(goal, comp);
        for (rule, principal, prems) in component_steps(comp, logic) {
            if rule.arity() == 0 && !context.is_empty() {
                continue;
            }
            let premises = prems.into_iter().map(|p| lift(&context, p)).collect();
            push(
                RuleInstance { rule, conclusion: goal.clone(), active_component: index, principal, premises },
                &mut out,
            );
        }
    }
    out.sort_by_key(|inst| inst.rule.priority());
    out
}

/// EW, EC and Com instances; empty unless `logic` is a hypersequent calculus.
pub fn external_instances(goal: &Hypersequent, logic: &LogicSpec) -> Vec<RuleInstance> {
    let mut out = Vec::new();
    if !logic.hypersequent {
        return out;
    }
    emit_external(goal, logic, &mut |inst| out.push(inst));
    out.sort_by_key(|inst| inst.rule.priority());
    out
}

fn emit_external(goal: &Hypersequent, logic: &LogicSpec, emit: &mut dyn FnMut(RuleInstance)) {
    let comps = goal.multiset();
    if logic.has(RuleId::EW) && goal.len() >= 2 {
        for (c, _) in comps.distinct() {
            let rest = Hypersequent::from_multiset(comps.without(c).unwrap()).unwrap();
            emit(RuleInstance {
                rule: RuleId::EW,
                conclusion: goal.clone(),
                active_component: component_index(goal, c),
                principal: vec![],
                premises: vec![rest],
            });
        }
    }
    if logic.has(RuleId::EC) {
        for (c, _) in comps.distinct() {
            emit(RuleInstance {
                rule: RuleId::EC,
                conclusion: goal.clone(),
                active_component: component_index(goal, c),
                principal: vec![],
                premises: vec![Hypersequent::from_multiset(comps.with(c.clone())).unwrap()],
            });
        }
    }
    if logic.has(RuleId::Com) {
        let distinct: Vec<(&Sequent, usize)> = comps.distinct().collect();
        for (i, (c1, n1)) in distinct.iter().enumerate() {
            for (c2, _) in distinct.iter().skip(i) {
                if c1 == c2 && *n1 < 2 {
                    continue;
                }
                let h = comps.without(c1).unwrap().without(c2).unwrap();
                let (c1a, c1s, c2a, c2s) = (c1.ant.splits(), c1.succ.splits(), c2.ant.splits(), c2.succ.splits());
                let mut seen = rustc_hash::FxHashSet::default();
                for (g1, g2) in &c1a {
                    for (d1, d2) in &c1s {
                        for (p1, p2) in &c2a {
                            for (s1, s2) in &c2s {
                                let t1 = Sequent::from_bags(g1.sum(p1), s1.sum(d1));
                                let t2 = Sequent::from_bags(g2.sum(p2), s2.sum(d2));
                                // exchanging nothing restates the conclusion
                                if (t1 == **c1 && t2 == **c2) || (t1 == **c2 && t2 == **c1) {
                                    continue;
                                }
                                let (t1, t2) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
                                if !seen.insert((t1.clone(), t2.clone())) {
                                    continue;
                                }
                                let premises = vec![lift(&h, t1), lift(&h, t2)];
                                emit(RuleInstance {
                                    rule: RuleId::Com,
                                    conclusion: goal.clone(),
                                    active_component: component_index(goal, c1),
                                    principal: vec![],
                                    premises,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

/// Which side of a sequent a formula occurrence sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Ant,
    Succ,
}

/// How a single-component rule application divides its conclusion.
///
/// `context` is the conclusion minus the principal formula; for each premiss,
/// `premise_context[i]` is the part of it inherited from `context` (for
/// shared-context rules this is all of `context`, for splitting rules one
/// part of a partition).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub principal: Option<(Side, Formula)>,
    pub context: Sequent,
    pub premise_context: Vec<Sequent>,
    /// The rule constrains its context (axioms without context, K□), so it
    /// cannot absorb extra formulas.
    pub context_restricted: bool,
}

fn minus(s: &Sequent, ant: &[Formula], succ: &[Formula]) -> Option<Sequent> {
    s.difference(&Sequent::new(ant.iter().cloned(), succ.iter().cloned()))
}

fn one_sided(
    rule: RuleId,
    side: Side,
    f: &Formula,
    ctx: Sequent,
    prems: &[Sequent],
    actives: &[(&[Formula], &[Formula])],
    shared: bool,
) -> Option<Analysis> {
    let mut pcs = Vec::with_capacity(prems.len());
    for (p, (a, s)) in prems.iter().zip(actives) {
        pcs.push(minus(p, a, s)?);
    }
    let ok = if shared {
        pcs.iter().all(|pc| *pc == ctx)
    } else {
        pcs.iter().skip(1).fold(pcs[0].clone(), |acc, pc| acc.sum(pc)) == ctx
    };
    let _ = rule;
    ok.then(|| Analysis {
        principal: Some((side, f.clone())),
        context: ctx,
        premise_context: pcs,
        context_restricted: false,
    })
}

/// Matches a single-component rule application against its schema.
///
/// Returns the decomposition on success, or a description of the violated
/// side condition. Hypersequent context is handled by the caller.
pub fn analyze_step(rule: RuleId, s: &Sequent, prems: &[Sequent]) -> Result<Analysis, String> {
    let label = rule.label();
    if prems.len() != rule.arity() {
        return Err(format!("{label} expects {} premisses, found {}", rule.arity(), prems.len()));
    }
    let restricted = |principal: Option<(Side, Formula)>| Analysis {
        principal,
        context: Sequent::default(),
        premise_context: vec![],
        context_restricted: true,
    };
    match rule {
        RuleId::Ax => {
            if s.ant.len() == 1 && s.succ.len() == 1 && s.ant == s.succ {
                let mut a = restricted(None);
                a.context = s.clone();
                Ok(a)
            } else {
                Err("Ax requires a sequent of the form A => A".into())
            }
        }
        RuleId::L0 => {
            if !s.ant.contains(&Formula::zero()) {
                Err("L0 requires 0 in the antecedent".into())
            } else if s.len() != 1 {
                Err("L0 requires empty context".into())
            } else {
                Ok(restricted(Some((Side::Ant, Formula::zero()))))
            }
        }
        RuleId::R1 => {
            if !s.succ.contains(&Formula::one()) {
                Err("R1 requires 1 in the succedent".into())
            } else if s.len() != 1 {
                Err("R1 requires empty context".into())
            } else {
                Ok(restricted(Some((Side::Succ, Formula::one()))))
            }
        }
        RuleId::LBot => match minus(s, &[Formula::bot()], &[]) {
            Some(ctx) => Ok(Analysis {
                principal: Some((Side::Ant, Formula::bot())),
                context: ctx,
                premise_context: vec![],
                context_restricted: false,
            }),
            None => Err("L⊥ requires ⊥ in the antecedent".into()),
        },
        RuleId::RTop => match minus(s, &[], &[Formula::top()]) {
            Some(ctx) => Ok(Analysis {
                principal: Some((Side::Succ, Formula::top())),
                context: ctx,
                premise_context: vec![],
                context_restricted: false,
            }),
            None => Err("R⊤ requires ⊤ in the succedent".into()),
        },
        RuleId::KBox | RuleId::KBoxPrime => {
            let ant: Option<Vec<Formula>> = s.ant.iter().map(unbox).collect();
            let Some(ant) = ant else {
                return Err(format!("{label} requires every antecedent formula to be boxed"));
            };
            if rule == RuleId::KBox && s.succ.len() != 1 {
                return Err("K□ succedent not singleton".into());
            }
            if s.succ.len() > 1 {
                return Err("K□′ allows at most one succedent formula".into());
            }
            let succ: Option<Vec<Formula>> = s.succ.iter().map(unbox).collect();
            let Some(succ) = succ else {
                return Err(format!("{label} requires a boxed succedent"));
            };
            if prems[0] != Sequent::new(ant, succ) {
                return Err(format!("{label} premiss must be the conclusion with all boxes removed"));
            }
            let principal = s.succ.iter().next().map(|f| (Side::Succ, f.clone()));
            let mut a = restricted(principal);
            a.context = Sequent::from_bags(s.ant.clone(), FormulaBag::new());
            a.premise_context = vec![Sequent::from_bags(prems[0].ant.clone(), FormulaBag::new())];
            Ok(a)
        }
        RuleId::Mingle => {
            if prems.iter().any(Sequent::is_empty) {
                return Err("M premisses must be nonempty".into());
            }
            if prems[0].sum(&prems[1]) != *s {
                return Err("M conclusion must be the union of its premisses".into());
            }
            Ok(Analysis {
                principal: None,
                context: s.clone(),
                premise_context: prems.to_vec(),
                context_restricted: false,
            })
        }
        RuleId::Cut => {
            let candidates: Vec<&Formula> =
                prems[0].succ.distinct().map(|(f, _)| f).filter(|f| prems[1].ant.contains(f)).collect();
            for x in candidates {
                let l = minus(&prems[0], &[], std::slice::from_ref(x)).unwrap();
                let r = minus(&prems[1], std::slice::from_ref(x), &[]).unwrap();
                if l.sum(&r) == *s {
                    return Ok(Analysis {
                        principal: Some((Side::Succ, x.clone())),
                        context: s.clone(),
                        premise_context: vec![l, r],
                        context_restricted: false,
                    });
                }
            }
            Err("premisses do not form a cut with this conclusion".into())
        }
        RuleId::LWeak | RuleId::RWeak | RuleId::LAntiContr | RuleId::RAntiContr => {
            let side = if matches!(rule, RuleId::LWeak | RuleId::LAntiContr) { Side::Ant } else { Side::Succ };
            let removed = s.difference(&prems[0]).filter(|d| d.len() == 1);
            let Some(removed) = removed else {
                return Err(format!("{label} premiss must be the conclusion minus one formula"));
            };
            let (bag_r, bag_p) = match side {
                Side::Ant => (&removed.ant, &prems[0].ant),
                Side::Succ => (&removed.succ, &prems[0].succ),
            };
            let Some(f) = bag_r.iter().next().cloned() else {
                return Err(format!("{label} removes a formula from the wrong side"));
            };
            if matches!(rule, RuleId::LAntiContr | RuleId::RAntiContr) && !bag_p.contains(&f) {
                return Err(format!("{label} requires a duplicated formula"));
            }
            Ok(Analysis {
                principal: Some((side, f)),
                context: prems[0].clone(),
                premise_context: vec![prems[0].clone()],
                context_restricted: false,
            })
        }
        RuleId::LContr | RuleId::RContr => {
            let side = if rule == RuleId::LContr { Side::Ant } else { Side::Succ };
            let added = prems[0].difference(s).filter(|d| d.len() == 1);
            let Some(added) = added else {
                return Err(format!("{label} premiss must duplicate one formula of the conclusion"));
            };
            let (bag_a, bag_s) = match side {
                Side::Ant => (&added.ant, &s.ant),
                Side::Succ => (&added.succ, &s.succ),
            };
            let first = bag_a.iter().next().cloned();
            match first {
                Some(f) if bag_s.contains(&f) => {
                    let ctx = match side {
                        Side::Ant => minus(s, std::slice::from_ref(&f), &[]).unwrap(),
                        Side::Succ => minus(s, &[], std::slice::from_ref(&f)).unwrap(),
                    };
                    Ok(Analysis {
                        principal: Some((side, f.clone())),
                        context: ctx.clone(),
                        premise_context: vec![ctx],
                        context_restricted: false,
                    })
                }
                _ => Err(format!("{label} premiss must duplicate one formula of the conclusion")),
            }
        }
        RuleId::EW | RuleId::EC | RuleId::Com | RuleId::Hyp => {
            Err(format!("{label} is not a single-component rule"))
        }
        _ => logical_step(rule, s, prems),
    }
}

fn logical_step(rule: RuleId, s: &Sequent, prems: &[Sequent]) -> Result<Analysis, String> {
    let label = rule.label();
    let left = matches!(
        rule,
        RuleId::L1
            | RuleId::LTensor
            | RuleId::LPar
            | RuleId::LWith1
            | RuleId::LWith2
            | RuleId::LPlus
            | RuleId::LNeg
            | RuleId::LLimp
            | RuleId::LDiaT
            | RuleId::LBoxT
    );
    let (side, bag) = if left { (Side::Ant, &s.ant) } else { (Side::Succ, &s.succ) };
    let mut found_shape = false;
    for (f, _) in bag.distinct() {
        let ctx = match side {
            Side::Ant => minus(s, std::slice::from_ref(f), &[]).unwrap(),
            Side::Succ => minus(s, &[], std::slice::from_ref(f)).unwrap(),
        };
        let e: &[Formula] = &[];
        let attempt = match (rule, f) {
            (RuleId::L1, Formula::Const(Const::One)) | (RuleId::R0, Formula::Const(Const::Zero)) => {
                Some(one_sided(rule, side, f, ctx, prems, &[(e, e)], true))
            }
            (RuleId::LTensor, Formula::Tensor(a, b)) => {
                let ab = [(**a).clone(), (**b).clone()];
                Some(one_sided(rule, side, f, ctx, prems, &[(&ab, e)], true))
            }
            (RuleId::LPar, Formula::Par(a, b)) => {
                let (a, b) = ([(**a).clone()], [(**b).clone()]);
                Some(one_sided(rule, side, f, ctx, prems, &[(&a, e), (&b, e)], false))
            }
            (RuleId::LWith1, Formula::With(a, _)) | (RuleId::LWith2, Formula::With(_, a)) => {
                let a = [(**a).clone()];
                Some(one_sided(rule, side, f, ctx, prems, &[(&a, e)], true))
            }
            (RuleId::LPlus, Formula::Plus(a, b)) => {
                let (a, b) = ([(**a).clone()], [(**b).clone()]);
                Some(one_sided(rule, side, f, ctx, prems, &[(&a, e), (&b, e)], true))
            }
            (RuleId::LNeg, Formula::Neg(a)) => {
                let a = [(**a).clone()];
                Some(one_sided(rule, side, f, ctx, prems, &[(e, &a)], true))
            }
            (RuleId::LLimp, Formula::Limp(a, b)) => {
                let (a, b) = ([(**a).clone()], [(**b).clone()]);
                Some(one_sided(rule, side, f, ctx, prems, &[(e, &a), (&b, e)], false))
            }
            (RuleId::LDiaT, Formula::DiaT(a)) => {
                let a = [(**a).clone()];
                Some(one_sided(rule, side, f, ctx, prems, &[(&a, e), (&a, e)], false))
            }
            (RuleId::LBoxT, Formula::BoxT(a)) => {
                let aa = [(**a).clone(), (**a).clone()];
                Some(one_sided(rule, side, f, ctx, prems, &[(&aa, e)], true))
            }
            (RuleId::RTensor, Formula::Tensor(a, b)) => {
                let (a, b) = ([(**a).clone()], [(**b).clone()]);
                Some(one_sided(rule, side, f, ctx, prems, &[(e, &a), (e, &b)], false))
            }
            (RuleId::RPar, Formula::Par(a, b)) => {
                let ab = [(**a).clone(), (**b).clone()];
                Some(one_sided(rule, side, f, ctx, prems, &[(e, &ab)], true))
            }
            (RuleId::RWith, Formula::With(a, b)) => {
                let (a, b) = ([(**a).clone()], [(**b).clone()]);
                Some(one_sided(rule, side, f, ctx, prems, &[(e, &a), (e, &b)], true))
            }
            (RuleId::RPlus1, Formula::Plus(a, _)) | (RuleId::RPlus2, Formula::Plus(_, a)) => {
                let a = [(**a).clone()];
                Some(one_sided(rule, side, f, ctx, prems, &[(e, &a)], true))
            }
            (RuleId::RNeg, Formula::Neg(a)) => {
                let a = [(**a).clone()];
                Some(one_sided(rule, side, f, ctx, prems, &[(&a, e)], true))
            }
            (RuleId::RLimp, Formula::Limp(a, b)) => {
                let (a, b) = ([(**a).clone()], [(**b).clone()]);
                Some(one_sided(rule, side, f, ctx, prems, &[(&a, &b)], true))
            }
            (RuleId::RDiaT, Formula::DiaT(a)) => {
                let aa = [(**a).clone(), (**a).clone()];
                Some(one_sided(rule, side, f, ctx, prems, &[(e, &aa)], true))
            }
            (RuleId::RBoxT, Formula::BoxT(a)) => {
                let a = [(**a).clone()];
                Some(one_sided(rule, side, f, ctx, prems, &[(e, &a), (e, &a)], false))
            }
            _ => None,
        };
        if let Some(result) = attempt {
            found_shape = true;
            if let Some(analysis) = result {
                return Ok(analysis);
            }
        }
    }
    let where_ = if left { "antecedent" } else { "succedent" };
    if found_shape {
        Err(format!("premisses do not match {label}"))
    } else {
        Err(format!("{label} has no principal formula of the right shape in the {where_}"))
    }
}

fn single_component_of(p: &Hypersequent, context: &Multiset<Sequent>) -> Option<Sequent> {
    if p.len() != context.len() + 1 {
        return None;
    }
    let rest = p.multiset().difference(context)?;
    let first = rest.iter().next().cloned();
    first
}

/// Checks one inference step against the schemas of `logic`.
///
/// `axioms` are the hypersequents a [`RuleId::Hyp`] leaf may close.
pub fn check_step(
    rule: RuleId,
    conclusion: &Hypersequent,
    premises: &[Hypersequent],
    logic: &LogicSpec,
    axioms: &[Hypersequent],
) -> Result<(), String> {
    if rule == RuleId::Hyp {
        if !premises.is_empty() {
            return Err("Hyp leaves have no premisses".into());
        }
        return if axioms.contains(conclusion) {
            Ok(())
        } else {
            Err(format!("'{conclusion}' is not one of the supplied axioms"))
        };
    }
    if !logic.has(rule) {
        return Err(format!("rule {} is not enabled in logic {}", rule.label(), logic.name));
    }
    if !logic.hypersequent {
        if let Some(h) = std::iter::once(conclusion).chain(premises).find(|h| h.len() != 1) {
            return Err(format!(
                "'{h}' has {} components but {} is a sequent calculus",
                h.len(),
                logic.name
            ));
        }
    }
    if premises.len() != rule.arity() {
        return Err(format!("{} expects {} premisses, found {}", rule.label(), rule.arity(), premises.len()));
    }
    match rule {
        RuleId::EW => check_ew(conclusion, &premises[0]),
        RuleId::EC => check_ec(conclusion, &premises[0]),
        RuleId::Com => check_com(conclusion, premises),
        _ if rule.arity() == 0 => {
            let Some(s) = conclusion.as_sequent() else {
                return Err(format!("{} closes single-component hypersequents only", rule.label()));
            };
            analyze_step(rule, s, &[]).map(|_| ())
        }
        _ => {
            let mut last_err = None;
            for (comp, _) in conclusion.multiset().distinct() {
                let context = conclusion.context_without(comp).unwrap();
                let parts: Option<Vec<Sequent>> =
                    premises.iter().map(|p| single_component_of(p, &context)).collect();
                let Some(parts) = parts else {
                    last_err.get_or_insert_with(|| {
                        "premisses must share the side components of the conclusion".to_string()
                    });
                    continue;
                };
                match analyze_step(rule, comp, &parts) {
                    Ok(_) => return Ok(()),
                    Err(e) => last_err = Some(e),
                }
            }
            Err(last_err.unwrap_or_else(|| "no active component".into()))
        }
    }
}

fn check_ew(conclusion: &Hypersequent, premise: &Hypersequent) -> Result<(), String> {
    if conclusion.len() < 2 {
        return Err("EW needs at least two components in its conclusion".into());
    }
    let ok = conclusion
        .multiset()
        .distinct()
        .any(|(c, _)| conclusion.context_without(c).as_ref() == Some(premise.multiset()));
    if ok {
        Ok(())
    } else {
        Err("EW premiss must be the conclusion minus one component".into())
    }
}

fn check_ec(conclusion: &Hypersequent, premise: &Hypersequent) -> Result<(), String> {
    let extra = premise.multiset().difference(conclusion.multiset());
    match extra {
        Some(extra) if extra.len() == 1 && conclusion.multiset().contains(extra.iter().next().unwrap()) => Ok(()),
        _ => Err("EC premiss must be the conclusion with one component duplicated".into()),
    }
}

/// Is there `x ⊆ from_a`, `y ⊆ from_b` with `x ⊎ y = target`?
fn splits_between(target: &FormulaBag, from_a: &FormulaBag, from_b: &FormulaBag) -> bool {
    target.submultisets().iter().any(|x| {
        x.is_subset(from_a) && target.difference(x).is_some_and(|y| y.is_subset(from_b))
    })
}

fn check_com(conclusion: &Hypersequent, premises: &[Hypersequent]) -> Result<(), String> {
    let comps = conclusion.multiset();
    let distinct: Vec<(&Sequent, usize)> = comps.distinct().collect();
    for (i, (c1, n1)) in distinct.iter().enumerate() {
        for (c2, _) in distinct.iter().skip(i) {
            if c1 == c2 && *n1 < 2 {
                continue;
            }
            let h = comps.without(c1).unwrap().without(c2).unwrap();
            let (Some(t1), Some(t2)) =
                (single_component_of(&premises[0], &h), single_component_of(&premises[1], &h))
            else {
                continue;
            };
            let ant_ok = t1.ant.sum(&t2.ant) == c1.ant.sum(&c2.ant) && splits_between(&t1.ant, &c1.ant, &c2.ant);
            let succ_ok =
                t1.succ.sum(&t2.succ) == c1.succ.sum(&c2.succ) && splits_between(&t1.succ, &c2.succ, &c1.succ);
            if ant_ok && succ_ok {
                return Ok(());
            }
        }
    }
    Err("premisses do not match Com for any pair of components".into())
}

/// Checks a generated or hand-built instance. Cut is accepted when enabled.
pub fn check_instance(inst: &RuleInstance, logic: &LogicSpec) -> Result<(), String> {
    check_step(inst.rule, &inst.conclusion, &inst.premises, logic, &[])
}

/// [`check_instance`] with user axioms available to [`RuleId::Hyp`].
pub fn check_instance_with_axioms(inst: &RuleInstance, logic: &LogicSpec, axioms: &[Hypersequent]) -> Result<(), String> {
    check_step(inst.rule, &inst.conclusion, &inst.premises, logic, axioms)
}
