//! Registry of derivability claims about the Tarskian modalities and a
//! runner that checks them.
//!
//! Schema letters are instantiated with the atoms `a`, `b`; rule schemas
//! with side contexts use the fresh atoms `g`, `d` for Γ, Δ and `h => k` for
//! a hypersequent context.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::calculus::{Preset, RuleId, SearchBudget};
use crate::proof::{check_derivation, Derivation};
use crate::prover::{is_terminating, prove, Verdict};
use crate::sequent::{parse_hypersequent, Hypersequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntryKind {
    FormulaDerivable,
    FormulaUnderivable,
    RuleDerivable,
    ProofTranscription,
}

impl EntryKind {
    pub const ALL: [EntryKind; 4] = [
        EntryKind::FormulaDerivable,
        EntryKind::FormulaUnderivable,
        EntryKind::RuleDerivable,
        EntryKind::ProofTranscription,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntryKind::FormulaDerivable => "formula-derivable",
            EntryKind::FormulaUnderivable => "formula-underivable",
            EntryKind::RuleDerivable => "rule-derivable",
            EntryKind::ProofTranscription => "proof-transcription",
        }
    }

    /// What a passing run reports.
    pub fn expected(self) -> &'static str {
        match self {
            EntryKind::FormulaDerivable | EntryKind::RuleDerivable => "derivable",
            EntryKind::FormulaUnderivable => "not-derivable",
            EntryKind::ProofTranscription => "checks",
        }
    }
}

impl fmt::Display for EntryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Goal(Hypersequent),
    Rule { premises: Vec<Hypersequent>, conclusion: Hypersequent },
    Proof(Derivation),
}

impl Statement {
    pub fn conclusion(&self) -> &Hypersequent {
        match self {
            Statement::Goal(g) => g,
            Statement::Rule { conclusion, .. } => conclusion,
            Statement::Proof(d) => &d.conclusion,
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Goal(g) => write!(f, "{g}"),
            Statement::Rule { premises, conclusion } => {
                let ps: Vec<String> = premises.iter().map(|p| format!("[{p}]")).collect();
                write!(f, "{} / {}", ps.join(" "), conclusion)
            }
            Statement::Proof(d) => write!(f, "proof of {}", d.conclusion),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    pub kind: EntryKind,
    pub logic: Preset,
    pub statement: Statement,
    /// Which claim of the source the entry encodes.
    pub anchor: String,
    /// Normalizations applied to the source statement, if any.
    pub notes: String,
    /// The verdict is established here by search rather than asserted by
    /// the source.
    pub derived: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("unknown filter key '{0}' (expected logic or kind)")]
    Key(String),
    #[error("unknown logic '{0}'")]
    Logic(String),
    #[error("unknown kind '{0}' (expected formula-derivable, formula-underivable, rule-derivable or proof-transcription)")]
    Kind(String),
    #[error("filter term '{0}' is not of the form key=value")]
    Syntax(String),
}

/// Restricts the registry by logic and/or kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Filter {
    pub logic: Option<Preset>,
    pub kind: Option<EntryKind>,
}

impl Filter {
    pub fn matches(&self, e: &CorpusEntry) -> bool {
        self.logic.is_none_or(|l| l == e.logic) && self.kind.is_none_or(|k| k == e.kind)
    }
}

impl FromStr for Filter {
    type Err = FilterError;

    /// Comma-separated `key=value` terms, e.g. `logic=iul,kind=rule-derivable`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut filter = Filter::default();
        for term in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, value) = term.split_once('=').ok_or_else(|| FilterError::Syntax(term.to_string()))?;
            match key.trim() {
                "logic" => {
                    filter.logic = Some(value.parse().map_err(|_| FilterError::Logic(value.to_string()))?);
                }
                "kind" => {
                    let kind = EntryKind::ALL
                        .into_iter()
                        .find(|k| k.name() == value.trim())
                        .ok_or_else(|| FilterError::Kind(value.to_string()))?;
                    filter.kind = Some(kind);
                }
                other => return Err(FilterError::Key(other.to_string())),
            }
        }
        Ok(filter)
    }
}

fn hs(text: &str) -> Hypersequent {
    parse_hypersequent(text).unwrap_or_else(|e| panic!("corpus statement '{text}': {e}"))
}

struct Builder {
    entries: Vec<CorpusEntry>,
}

impl Builder {
    fn push(&mut self, id: &str, kind: EntryKind, logic: Preset, statement: Statement, anchor: &str) -> &mut CorpusEntry {
        self.entries.push(CorpusEntry {
            id: id.to_string(),
            kind,
            logic,
            statement,
            anchor: anchor.to_string(),
            notes: String::new(),
            derived: false,
        });
        self.entries.last_mut().unwrap()
    }

    fn derivable(&mut self, id: &str, logic: Preset, goal: &str, anchor: &str) -> &mut CorpusEntry {
        self.push(id, EntryKind::FormulaDerivable, logic, Statement::Goal(hs(goal)), anchor)
    }

    fn underivable(&mut self, id: &str, logic: Preset, goal: &str, anchor: &str) -> &mut CorpusEntry {
        self.push(id, EntryKind::FormulaUnderivable, logic, Statement::Goal(hs(goal)), anchor)
    }

    fn rule(&mut self, id: &str, logic: Preset, premises: &[&str], conclusion: &str, anchor: &str) -> &mut CorpusEntry {
        let statement = Statement::Rule {
            premises: premises.iter().map(|p| hs(p)).collect(),
            conclusion: hs(conclusion),
        };
        self.push(id, EntryKind::RuleDerivable, logic, statement, anchor)
    }
}

fn n(rule: RuleId, conclusion: &str, premises: Vec<Derivation>) -> Derivation {
    Derivation::node(rule, hs(conclusion), premises)
}

/// The displayed IUL derivation of `(□̇a ∧ □̇b) → □̇(a ∧ b)`, written with
/// primitive rules: the derived rule L∧′ becomes EC followed by L∧₁ and
/// L∧₂, and each one-premiss R□̇ becomes R□̇ over two copies of its premiss.
pub fn iul_converse_proof() -> Derivation {
    let ax = |s: &str| n(RuleId::Ax, s, vec![]);
    let inner = || {
        n(
            RuleId::RWith,
            "a => a /\\ b | b => a /\\ b",
            vec![
                n(RuleId::EW, "a => a | b => a /\\ b", vec![ax("a => a")]),
                n(
                    RuleId::RWith,
                    "a => b | b => a /\\ b",
                    vec![
                        n(RuleId::Com, "a => b | b => a", vec![ax("a => a"), ax("b => b")]),
                        n(RuleId::EW, "a => b | b => b", vec![ax("b => b")]),
                    ],
                ),
            ],
        )
    };
    let right_box = || {
        n(
            RuleId::RBoxT,
            "a => a /\\ b | b, b => [.](a /\\ b)",
            vec![inner(), inner()],
        )
    };
    n(
        RuleId::RLimp,
        "=> [.]a /\\ [.]b -> [.](a /\\ b)",
        vec![n(
            RuleId::EC,
            "[.]a /\\ [.]b => [.](a /\\ b)",
            vec![n(
                RuleId::LWith1,
                "[.]a /\\ [.]b => [.](a /\\ b) | [.]a /\\ [.]b => [.](a /\\ b)",
                vec![n(
                    RuleId::LWith2,
                    "[.]a => [.](a /\\ b) | [.]a /\\ [.]b => [.](a /\\ b)",
                    vec![n(
                        RuleId::LBoxT,
                        "[.]a => [.](a /\\ b) | [.]b => [.](a /\\ b)",
                        vec![n(
                            RuleId::LBoxT,
                            "a, a => [.](a /\\ b) | [.]b => [.](a /\\ b)",
                            vec![n(
                                RuleId::RBoxT,
                                "a, a => [.](a /\\ b) | b, b => [.](a /\\ b)",
                                vec![right_box(), right_box()],
                            )],
                        )],
                    )],
                )],
            )],
        )],
    )
}

/// Every registered claim, in a fixed order.
pub fn all_entries() -> Vec<CorpusEntry> {
    use EntryKind::*;
    use Preset::*;
    let mut b = Builder { entries: Vec::new() };

    // MALL
    let alt = "MALL: equivalent alternative definitions of the Tarskian modalities";
    b.derivable("mall-dia-par-1", Mall, "=> <.>a -> a + a", alt);
    b.derivable("mall-dia-par-2", Mall, "=> a + a -> <.>a", alt);
    b.derivable("mall-box-tensor-1", Mall, "=> [.]a -> a * a", alt);
    b.derivable("mall-box-tensor-2", Mall, "=> a * a -> [.]a", alt);
    let d = "MALL: the four theorems around the intuitionistic D axiom";
    b.derivable("mall-anti-int-d", Mall, "=> ~[.]bot", d);
    b.derivable("mall-int-d", Mall, "=> <.>top", d);
    b.derivable("mall-anti-dn", Mall, "=> ~[.](a /\\ ~a)", d);
    b.derivable("mall-dn", Mall, "=> <.>(a \\/ ~a)", d);
    let k = "MALL: the K rule for the Tarskian box and its dual";
    b.rule("mall-k-box", Mall, &["a => b"], "[.]a => [.]b", k);
    b.rule("mall-k-box-ctx", Mall, &["g, d => b"], "[.]g, [.]d => [.]b", k);
    b.rule("mall-k-box-empty", Mall, &["=> b"], "=> [.]b", k);
    b.rule("mall-k-dia", Mall, &["a => b"], "<.>a => <.>b", k);
    b.rule("mall-k-dia-ctx", Mall, &["a => g, d"], "<.>a => <.>g, <.>d", k);
    let dist = "MALL: distribution theorems";
    b.derivable("mall-dist-k", Mall, "=> [.](a -> b) -> [.]a -> [.]b", dist);
    b.derivable("mall-dist-box-with", Mall, "=> [.](a /\\ b) -> [.]a /\\ [.]b", dist);
    b.derivable("mall-dist-dia-with", Mall, "=> <.>(a /\\ b) -> <.>a /\\ <.>b", dist);
    b.derivable("mall-dist-box-plus", Mall, "=> [.]a \\/ [.]b -> [.](a \\/ b)", dist);
    b.derivable("mall-dist-dia-plus", Mall, "=> <.>a \\/ <.>b -> <.>(a \\/ b)", dist);
    let conv = "MALL and KMALL: the converse of box-with distribution is underivable";
    b.underivable("mall-converse-box-with", Mall, "=> [.]a /\\ [.]b -> [.](a /\\ b)", conv);

    // KMALL
    let rem = "KMALL: the four D-style theorems fail for the primitive modalities";
    b.underivable("kmall-anti-int-d", Kmall, "=> ~[]bot", rem);
    b.underivable("kmall-int-d", Kmall, "=> <>top", rem);
    b.underivable("kmall-anti-dn", Kmall, "=> ~[](a /\\ ~a)", rem);
    b.underivable("kmall-dn", Kmall, "=> <>(a \\/ ~a)", rem);
    b.underivable("kmall-converse-box-with", Kmall, "=> []a /\\ []b -> [](a /\\ b)", conv);
    let kdef = "KMALL: the K□ rule yields necessitation and the K axiom";
    b.rule("kmall-k-rule", Kmall, &["a => b"], "[]a => []b", kdef);
    b.rule("kmall-n-rule", Kmall, &["=> a"], "=> []a", kdef);
    b.derivable("kmall-k-axiom", Kmall, "=> [](a -> b) -> []a -> []b", kdef);

    // KMALL with K□′
    let prime = "KMALL with K□′: empty succedents give the first two D-style theorems only";
    b.derivable("kmall-prime-anti-int-d", KmallPrime, "=> ~[]bot", prime);
    b.derivable("kmall-prime-int-d", KmallPrime, "=> <>top", prime);
    b.underivable("kmall-prime-anti-dn", KmallPrime, "=> ~[](a /\\ ~a)", prime);
    b.underivable("kmall-prime-dn", KmallPrime, "=> <>(a \\/ ~a)", prime);

    // mingle and anti-contraction
    let m = "MALL + M: a D axiom form and a dual K form";
    let ac = "MALL + anti-contraction: the same two formulas via duplication";
    for (logic, prefix, anchor) in [(MallM, "mall-m", m), (MallAnticontr, "mall-anticontr", ac)] {
        b.derivable(&format!("{prefix}-d"), logic, "=> [.]a -> <.>a", anchor);
        b.derivable(&format!("{prefix}-k-dual"), logic, "=> (<.>a -> <.>b) -> <.>(a -> b)", anchor);
    }
    let plain = "MALL: the two mingle formulas need M";
    b.underivable("mall-d", Mall, "=> [.]a -> <.>a", plain).derived = true;
    b.underivable("mall-k-dual", Mall, "=> (<.>a -> <.>b) -> <.>(a -> b)", plain).derived = true;

    // AMALL
    let add = "AMALL: additive modal rules";
    b.rule("amall-r-dia-prime", Amall, &["g => d, a"], "g => d, <.>a", add);
    b.rule("amall-l-box-prime", Amall, &["g, a => d"], "g, [.]a => d", add);
    let t = "AMALL: T axiom and its dual";
    b.derivable("amall-t", Amall, "=> [.]a -> a", t);
    b.derivable("amall-t-dual", Amall, "=> a -> <.>a", t);
    let rr = "AMALL: the rules R◇̇R□̇ and R◇̇L◇̇";
    b.rule("amall-r-dia-r-box", Amall, &["a => b"], "=> <.>(a -> [.]b)", rr);
    b.rule("amall-r-dia-l-dia", Amall, &["a => b"], "=> <.>(<.>a -> b)", rr);
    let forms = "AMALL: diamond forms of the S4, S5 and B axioms";
    b.derivable("amall-s4-form", Amall, "=> <.>([.]a -> [.][.]a)", forms).notes =
        "second modality of the consequent read as the Tarskian box".into();
    b.derivable("amall-s5-form", Amall, "=> <.>(<.>a -> [.]<.>a)", forms);
    b.derivable("amall-b-form", Amall, "=> <.>(a -> [.]<.>a)", forms);
    b.derivable("amall-dia-form-4", Amall, "=> <.>(<.>a -> a)", forms);
    b.derivable("amall-dia-form-5", Amall, "=> <.>(a -> [.]a)", forms);
    b.derivable("amall-dia-form-6", Amall, "=> <.>(a -> [.]b) -> <.>([.]a -> b)", forms);
    let adm = "AMALL: M is admissible, so the mingle formulas hold";
    b.derivable("amall-d", Amall, "=> [.]a -> <.>a", adm);
    b.derivable("amall-k-dual", Amall, "=> (<.>a -> <.>b) -> <.>(a -> b)", adm);

    // SLL
    let sll = "SLL: modal formulas for the S4, B and S5 axioms";
    b.derivable("sll-box-intro", Sll, "=> a -> [.]a", sll);
    b.derivable("sll-dia-elim", Sll, "=> <.>a -> a", sll);
    b.derivable("sll-s4", Sll, "=> [.]a -> [.][.]a", sll);
    b.derivable("sll-dia-dia-elim", Sll, "=> <.><.>a -> a", sll).notes =
        "stray trailing diamond on the consequent dropped".into();
    b.derivable("sll-b", Sll, "=> <.>a -> [.]<.>a", sll);
    b.derivable("sll-s5", Sll, "=> a -> [.]<.>a", sll);
    let sconv = "SLL: the converse distributions, one of them the introduction's paradoxical theorem";
    b.derivable("sll-converse-box-with", Sll, "=> [.]a /\\ [.]b -> [.](a /\\ b)", sconv);
    b.derivable("sll-converse-dia-with", Sll, "=> <.>a /\\ <.>b -> <.>(a /\\ b)", sconv);
    b.derivable("sll-converse-box-plus", Sll, "=> [.](a \\/ b) -> [.]a \\/ [.]b", sconv);
    b.derivable("sll-converse-dia-plus", Sll, "=> <.>(a \\/ b) -> <.>a \\/ <.>b", sconv);

    // IUL
    let ec = "IUL: the derived rules L∧′ and R∨′ via EC";
    b.rule("iul-l-with-prime", Iul, &["h => k | a, g => d | b, g => d"], "h => k | a /\\ b, g => d", ec);
    b.rule("iul-r-plus-prime", Iul, &["h => k | g => d, a | g => d, b"], "h => k | g => d, a \\/ b", ec);
    let iconv = "IUL: the converse distributions via L∧′, R∨′ and Com";
    b.derivable("iul-converse-box-with", Iul, "=> [.]a /\\ [.]b -> [.](a /\\ b)", iconv);
    b.derivable("iul-converse-dia-with", Iul, "=> <.>a /\\ <.>b -> <.>(a /\\ b)", iconv);
    b.derivable("iul-converse-box-plus", Iul, "=> [.](a \\/ b) -> [.]a \\/ [.]b", iconv);
    b.derivable("iul-converse-dia-plus", Iul, "=> <.>(a \\/ b) -> <.>a \\/ <.>b", iconv);
    b.push(
        "iul-converse-box-with-proof",
        ProofTranscription,
        Iul,
        Statement::Proof(iul_converse_proof()),
        "IUL: the displayed proof of the converse box-with distribution",
    )
    .notes = "L∧′ expanded to EC, L∧₁, L∧₂; one-premiss R□̇ expanded to R□̇ over two copies".into();

    b.entries
}

pub fn corpus_entries(filter: &Filter) -> Vec<CorpusEntry> {
    all_entries().into_iter().filter(|e| filter.matches(e)).collect()
}

#[derive(Clone, Debug)]
pub struct EntryResult {
    pub id: String,
    pub logic: Preset,
    pub kind: EntryKind,
    pub expected: &'static str,
    /// `derivable`, `not-derivable`, `unknown`, `checks` or `violation`.
    pub actual: String,
    pub passed: bool,
    pub millis: u128,
    pub detail: String,
    pub derived: bool,
    pub proof: Option<Derivation>,
    pub axioms: Vec<Hypersequent>,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub results: Vec<EntryResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EntryResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn table(&self) -> String {
        let width = self.results.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
        let mut out = format!(
            "{:<width$}  {:<14}  {:<13}  {:<13}  {:>7}  result\n",
            "id", "logic", "expected", "actual", "ms"
        );
        for r in &self.results {
            let mark = if r.passed { "pass" } else { "FAIL" };
            let note = if r.derived { "  (verdict established by search)" } else { "" };
            out.push_str(&format!(
                "{:<width$}  {:<14}  {:<13}  {:<13}  {:>7}  {mark}{note}\n",
                r.id,
                r.logic.name(),
                r.expected,
                r.actual,
                r.millis
            ));
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        out.push_str(&format!("{passed}/{} entries passed\n", self.results.len()));
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.results
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "expected": r.expected,
                        "actual": r.actual,
                        "millis": r.millis,
                    })
                })
                .collect(),
        )
    }
}

fn run_entry(entry: &CorpusEntry, budget: &SearchBudget) -> EntryResult {
    let start = Instant::now();
    let logic = entry.logic.logic();
    let axioms: Vec<Hypersequent> = match &entry.statement {
        Statement::Rule { premises, .. } => premises.clone(),
        _ => vec![],
    };
    let (actual, detail, proof) = match &entry.statement {
        Statement::Proof(d) => match check_derivation(d, &logic, &[]) {
            Ok(()) => ("checks".to_string(), String::new(), Some(d.clone())),
            Err(v) => ("violation".to_string(), v.to_string(), None),
        },
        Statement::Goal(goal) | Statement::Rule { conclusion: goal, .. } => {
            let verdict = prove(goal, &logic, budget, &axioms);
            match verdict {
                Verdict::Derivable(d) => match check_derivation(&d, &logic, &axioms) {
                    Ok(()) => ("derivable".to_string(), String::new(), Some(d)),
                    Err(v) => ("violation".to_string(), v.to_string(), None),
                },
                Verdict::NotDerivable(c) => ("not-derivable".to_string(), c.to_string(), None),
                Verdict::Unknown(reason) => ("unknown".to_string(), reason, None),
            }
        }
    };
    let expected = entry.kind.expected();
    EntryResult {
        id: entry.id.clone(),
        logic: entry.logic,
        kind: entry.kind,
        expected,
        passed: actual == expected,
        actual,
        millis: start.elapsed().as_millis(),
        detail,
        derived: entry.derived,
        proof,
        axioms,
    }
}

/// Runs the entries concurrently; results keep the order of `entries`.
pub fn run_corpus(entries: &[CorpusEntry], budget: &SearchBudget) -> Report {
    let results = entries.par_iter().map(|e| run_entry(e, budget)).collect();
    Report { results }
}

/// Underivability claims only make sense where refutations are sound.
pub fn registry_is_well_formed(entries: &[CorpusEntry]) -> Result<(), String> {
    let mut ids = std::collections::HashSet::new();
    for e in entries {
        if !ids.insert(&e.id) {
            return Err(format!("duplicate id {}", e.id));
        }
        if e.anchor.is_empty() {
            return Err(format!("{} has no anchor", e.id));
        }
        if e.kind == EntryKind::FormulaUnderivable && !is_terminating(&e.logic.logic()) {
            return Err(format!("{} claims underivability in non-terminating {}", e.id, e.logic));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_shape() {
        let all = all_entries();
        registry_is_well_formed(&all).unwrap();
        let f = |s: &str| corpus_entries(&s.parse().unwrap()).len();
        assert_eq!(f("kind=formula-underivable"), 10);
        assert_eq!(f("logic=sll"), 10);
        assert_eq!(f("logic=iul"), 7);
        assert_eq!(f("logic=mall"), 21);
        assert_eq!(f(""), all.len());
    }

    #[test]
    fn filter_errors() {
        assert_eq!("logic=s5".parse::<Filter>(), Err(FilterError::Logic("s5".into())));
        assert!(matches!("kind=theorem".parse::<Filter>(), Err(FilterError::Kind(_))));
        assert!(matches!("colour=red".parse::<Filter>(), Err(FilterError::Key(_))));
        assert!(matches!("iul".parse::<Filter>(), Err(FilterError::Syntax(_))));
    }

    #[test]
    fn transcribed_proof_checks() {
        let d = iul_converse_proof();
        assert_eq!(check_derivation(&d, &Preset::Iul.logic(), &[]), Ok(()));
        for r in [RuleId::RLimp, RuleId::LBoxT, RuleId::RBoxT, RuleId::RWith, RuleId::EW, RuleId::Com] {
            assert!(d.contains_rule(r), "{r}");
        }
    }
}
