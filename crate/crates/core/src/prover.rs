//! Backward proof search.
//!
//! Search is iterative deepening over [`backward_instances`] with a failure
//! memo keyed on the goal and the remaining contraction/EC/Com budgets, a
//! success cache, and a branch-local loop check. A failure is *tainted* when
//! some branch below it was cut off by the depth bound or by the loop check;
//! only an untainted failure in a terminating calculus is reported as
//! [`Verdict::NotDerivable`].

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::fmt;

use crate::calculus::{analyze_step, external_instances, local_instances, LogicSpec, RuleId, SearchBudget};
use crate::proof::Derivation;
use crate::sequent::{Hypersequent, Sequent};

/// Statistics backing a refutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Goal expansions over all deepening rounds.
    pub nodes: usize,
    /// Depth bound of the round that exhausted the search.
    pub depth: usize,
    /// Weight of the goal; no branch of a terminating search is longer.
    pub measure: usize,
    pub memo_entries: usize,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "search exhausted: {} nodes, depth bound {}, goal measure {}, {} memoized failures",
            self.nodes, self.depth, self.measure, self.memo_entries
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Derivable(Derivation),
    NotDerivable(Certificate),
    Unknown(String),
}

impl Verdict {
    pub fn is_derivable(&self) -> bool {
        matches!(self, Verdict::Derivable(_))
    }

    pub fn is_not_derivable(&self) -> bool {
        matches!(self, Verdict::NotDerivable(_))
    }

    pub fn proof(&self) -> Option<&Derivation> {
        match self {
            Verdict::Derivable(d) => Some(d),
            _ => None,
        }
    }

    /// `derivable`, `not-derivable` or `unknown`.
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Derivable(_) => "derivable",
            Verdict::NotDerivable(_) => "not-derivable",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Derivable(_) => f.write_str("derivable"),
            Verdict::NotDerivable(_) => f.write_str("not derivable (search exhausted)"),
            Verdict::Unknown(reason) => write!(f, "unknown ({reason})"),
        }
    }
}

/// Whether every backward step strictly decreases the goal weight, so that
/// exhaustive search halts without budgets.
pub fn is_terminating(logic: &LogicSpec) -> bool {
    const GROWING: [RuleId; 7] = [
        RuleId::LContr,
        RuleId::RContr,
        RuleId::LAntiContr,
        RuleId::RAntiContr,
        RuleId::EC,
        RuleId::Com,
        RuleId::Cut,
    ];
    !GROWING.iter().any(|r| logic.has(*r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Remaining {
    contraction: u32,
    ec: u32,
    com: u32,
}

impl Remaining {
    fn mask(self) -> usize {
        usize::from(self.contraction > 0) | usize::from(self.ec > 0) << 1 | usize::from(self.com > 0) << 2
    }
}

fn budget_variants(logic: &LogicSpec) -> Vec<LogicSpec> {
    (0..8)
        .map(|mask: usize| {
            let mut l = logic.clone();
            if mask & 1 == 0 {
                l = l.without_rule(RuleId::LContr).without_rule(RuleId::RContr);
            }
            if mask & 2 == 0 {
                l = l.without_rule(RuleId::EC);
            }
            if mask & 4 == 0 {
                l = l.without_rule(RuleId::Com);
            }
            l
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct Failure {
    depth: usize,
    tainted: bool,
}

enum Outcome {
    Proved(Derivation),
    Failed { tainted: bool },
    Aborted,
}

struct Search<'a> {
    logic: &'a LogicSpec,
    /// `logic` minus the rules whose budget is spent, indexed by [`Remaining::mask`].
    variants: Vec<LogicSpec>,
    axioms: &'a [Hypersequent],
    node_limit: usize,
    nodes: usize,
    failures: HashMap<(Hypersequent, Remaining), Failure>,
    proved: HashMap<Hypersequent, Derivation>,
    ancestors: HashSet<Hypersequent>,
}

impl Search<'_> {
    fn closes_alone(&self, s: &Sequent) -> Option<RuleId> {
        let h = Hypersequent::single(s.clone());
        if self.axioms.contains(&h) {
            return Some(RuleId::Hyp);
        }
        [RuleId::Ax, RuleId::L0, RuleId::R1, RuleId::LBot, RuleId::RTop]
            .into_iter()
            .find(|r| self.logic.has(*r) && analyze_step(*r, s, &[]).is_ok())
    }

    /// EW steps down to a component that is an axiom on its own.
    fn weakening_chain(&self, goal: &Hypersequent) -> Option<Derivation> {
        if goal.len() < 2 || !self.logic.has(RuleId::EW) {
            return None;
        }
        let (target, rule) = goal
            .multiset()
            .distinct()
            .find_map(|(c, _)| self.closes_alone(c).map(|r| (c.clone(), r)))?;
        let mut chain: Vec<Hypersequent> = vec![goal.clone()];
        let mut current = goal.multiset().clone();
        while current.len() > 1 {
            let drop = current.iter().find(|c| **c != target || current.count(&target) > 1)?.clone();
            current = current.without(&drop)?;
            chain.push(Hypersequent::from_multiset(current.clone())?);
        }
        let mut d = Derivation::leaf(rule, chain.pop()?);
        while let Some(h) = chain.pop() {
            d = Derivation::node(RuleId::EW, h, vec![d]);
        }
        Some(d)
    }

    fn search(&mut self, goal: &Hypersequent, depth: usize, rem: Remaining) -> Outcome {
        if let Some(d) = self.proved.get(goal) {
            return Outcome::Proved(d.clone());
        }
        if self.ancestors.contains(goal) {
            return Outcome::Failed { tainted: true };
        }
        let key = (goal.clone(), rem);
        if let Some(f) = self.failures.get(&key) {
            if !f.tainted || f.depth >= depth {
                return Outcome::Failed { tainted: f.tainted };
            }
        }
        if depth == 0 {
            return Outcome::Failed { tainted: true };
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Outcome::Aborted;
        }
        if let Some(d) = self.weakening_chain(goal) {
            self.proved.insert(goal.clone(), d.clone());
            return Outcome::Proved(d);
        }

        let mut tainted = false;
        let mut loop_pruned = false;
        self.ancestors.insert(goal.clone());
        let logic = &self.variants[rem.mask()];
        let mut instances = local_instances(goal, logic, self.axioms);
        // an invertible rule loses nothing, so try it alone; hypotheses are
        // not closed under inversion
        let invertible = if self.axioms.is_empty() { instances.iter().position(|i| is_invertible(i.rule)) } else { None };
        match invertible {
            Some(i) if !instances[..i].iter().any(|j| j.premises.is_empty()) => {
                instances = vec![instances.swap_remove(i)];
            }
            _ => {
                instances.extend(external_instances(goal, logic));
                instances.sort_by_key(|inst| inst.rule.priority());
            }
        }
        'instances: for inst in instances {
            let mut child = rem;
            match inst.rule {
                RuleId::LContr | RuleId::RContr => {
                    if rem.contraction == 0 {
                        continue;
                    }
                    child.contraction -= 1;
                }
                RuleId::EC => {
                    if rem.ec == 0 {
                        continue;
                    }
                    child.ec -= 1;
                }
                RuleId::Com => {
                    if rem.com == 0 {
                        continue;
                    }
                    child.com -= 1;
                }
                _ => {}
            }
            let mut subproofs = Vec::with_capacity(inst.premises.len());
            for p in &inst.premises {
                if self.ancestors.contains(p) {
                    loop_pruned = true;
                    tainted = true;
                    continue 'instances;
                }
                match self.search(p, depth - 1, child) {
                    Outcome::Proved(d) => subproofs.push(d),
                    Outcome::Failed { tainted: t } => {
                        tainted |= t;
                        continue 'instances;
                    }
                    Outcome::Aborted => {
                        self.ancestors.remove(goal);
                        return Outcome::Aborted;
                    }
                }
            }
            self.ancestors.remove(goal);
            let d = Derivation::node(inst.rule, goal.clone(), subproofs);
            self.proved.insert(goal.clone(), d.clone());
            return Outcome::Proved(d);
        }
        self.ancestors.remove(goal);
        // failures that depend on the current branch are not reusable
        if !loop_pruned {
            self.failures.insert(key, Failure { depth, tainted });
        }
        Outcome::Failed { tainted }
    }
}

/// Searches for a derivation of `goal`.
///
/// Primitive diamonds are expanded to `¬□¬` first, so proofs are stated for
/// the expanded goal. `axioms` may close leaves via [`RuleId::Hyp`].
pub fn prove(goal: &Hypersequent, logic: &LogicSpec, budget: &SearchBudget, axioms: &[Hypersequent]) -> Verdict {
    if !logic.hypersequent && goal.len() != 1 {
        return Verdict::Unknown(format!(
            "goal has {} components but {} is a sequent calculus",
            goal.len(),
            logic.name
        ));
    }
    let goal = goal.map(|f| f.expand_dia_k());
    let axioms: Vec<Hypersequent> = axioms.iter().map(|a| a.map(|f| f.expand_dia_k())).collect();
    let mut search = Search {
        logic,
        variants: budget_variants(logic),
        axioms: &axioms,
        node_limit: budget.node_limit,
        nodes: 0,
        failures: HashMap::default(),
        proved: HashMap::default(),
        ancestors: HashSet::default(),
    };
    let rem = Remaining {
        contraction: budget.contraction_budget,
        ec: budget.ec_budget,
        com: budget.com_budget,
    };
    let terminating = is_terminating(logic);
    for depth in 1..=budget.max_depth {
        match search.search(&goal, depth, rem) {
            Outcome::Proved(d) => return Verdict::Derivable(d),
            Outcome::Aborted => {
                return Verdict::Unknown(format!("node limit of {} expansions reached", budget.node_limit))
            }
            Outcome::Failed { tainted: false } => {
                return if terminating {
                    Verdict::NotDerivable(Certificate {
                        nodes: search.nodes,
                        depth,
                        measure: goal.components().iter().map(|c| c.weight()).sum(),
                        memo_entries: search.failures.len(),
                    })
                } else {
                    Verdict::Unknown("search exhausted within the contraction, EC and Com budgets".into())
                };
            }
            Outcome::Failed { tainted: true } => {}
        }
    }
    Verdict::Unknown(format!("depth bound {} reached", budget.max_depth))
}

/// Rules whose premisses are derivable whenever the conclusion is.
fn is_invertible(rule: RuleId) -> bool {
    matches!(
        rule,
        RuleId::L1
            | RuleId::R0
            | RuleId::LTensor
            | RuleId::RPar
            | RuleId::LNeg
            | RuleId::RNeg
            | RuleId::RLimp
            | RuleId::RDiaT
            | RuleId::LBoxT
            | RuleId::RWith
            | RuleId::LPlus
    )
}

/// Derivability of a rule instance: the conclusion with the premisses as
/// extra axioms.
pub fn prove_rule(premises: &[Sequent], conclusion: &Hypersequent, logic: &LogicSpec, budget: &SearchBudget) -> Verdict {
    let axioms: Vec<Hypersequent> = premises.iter().cloned().map(Hypersequent::single).collect();
    prove(conclusion, logic, budget, &axioms)
}
