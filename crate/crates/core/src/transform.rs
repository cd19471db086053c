//! Proof transformations: the box translation from KMALL into MALL and cut
//! elimination for KMALL.

use thiserror::Error;

use crate::calculus::{analyze_step, Analysis, LogicSpec, Preset, RuleId, Side};
use crate::formula::{box_substitute, Formula};
use crate::proof::{check_derivation, Derivation, Violation};
use crate::sequent::{Hypersequent, Sequent};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("input does not check: {0}")]
    Unchecked(Violation),
    #[error("derivation contains a hypersequent step or a multi-component sequent")]
    Hypersequent,
    #[error("derivation contains a cut")]
    HasCut,
    #[error("derivation contains no cut")]
    NoCut,
    #[error("malformed step {rule}: {message}")]
    Malformed { rule: RuleId, message: String },
    #[error("cut elimination exceeded {0} reduction steps")]
    StepLimit(usize),
}

fn malformed(rule: RuleId, message: impl Into<String>) -> TransformError {
    TransformError::Malformed { rule, message: message.into() }
}

fn seq(d: &Derivation) -> Result<&Sequent, TransformError> {
    d.conclusion.as_sequent().ok_or(TransformError::Hypersequent)
}

fn ensure_sequential(d: &Derivation) -> Result<(), TransformError> {
    let mut ok = true;
    d.walk(&mut |n| {
        if n.conclusion.len() != 1 || matches!(n.rule, RuleId::EW | RuleId::EC | RuleId::Com | RuleId::Hyp) {
            ok = false;
        }
    });
    if ok {
        Ok(())
    } else {
        Err(TransformError::Hypersequent)
    }
}

fn kmall_with_cut() -> LogicSpec {
    Preset::Kmall.logic().with_rule(RuleId::Cut)
}

// ---------------------------------------------------------------------------
// Box translation
// ---------------------------------------------------------------------------

/// Rewrites a cut-free KMALL derivation into a MALL derivation of the
/// box-substituted endsequent. Each K□ step becomes an R□̇ over two copies
/// of the translated premiss followed by one L□̇ per context formula.
pub fn translate_kmall_to_mall(d: &Derivation) -> Result<Derivation, TransformError> {
    translate_kmall_to_mall_with_axioms(d, &[])
}

/// As [`translate_kmall_to_mall`] for derivations whose leaves may close on
/// `axioms`; the result closes on the box-substituted axioms.
pub fn translate_kmall_to_mall_with_axioms(d: &Derivation, axioms: &[Hypersequent]) -> Result<Derivation, TransformError> {
    if !axioms.is_empty() && d.contains_rule(RuleId::Hyp) {
        ensure_sequential(&strip_hyp(d))?;
    } else {
        ensure_sequential(d)?;
    }
    if d.contains_rule(RuleId::Cut) {
        return Err(TransformError::HasCut);
    }
    check_derivation(d, &Preset::Kmall.logic(), axioms).map_err(TransformError::Unchecked)?;
    Ok(translate(d))
}

// Hypothesis leaves are sequents too; relabel them so the shape test passes.
fn strip_hyp(d: &Derivation) -> Derivation {
    Derivation {
        rule: if d.rule == RuleId::Hyp { RuleId::Ax } else { d.rule },
        conclusion: d.conclusion.clone(),
        premises: d.premises.iter().map(strip_hyp).collect(),
    }
}

fn translate(d: &Derivation) -> Derivation {
    let s = d.conclusion.as_sequent().expect("checked as sequential");
    if d.rule != RuleId::KBox {
        return Derivation {
            rule: d.rule,
            conclusion: Hypersequent::single(s.map(box_substitute)),
            premises: d.premises.iter().map(translate).collect(),
        };
    }
    let sub = translate(&d.premises[0]);
    let prem = sub.conclusion.as_sequent().expect("checked as sequential").clone();
    let a = prem.succ.iter().next().expect("K□ premiss has one succedent formula").clone();
    let ctx: Vec<Formula> = prem.ant.iter().cloned().collect();
    let mut ant = prem.ant.sum(&prem.ant);
    let mut cur = Derivation::node(
        RuleId::RBoxT,
        Sequent::from_bags(ant.clone(), [Formula::box_t(a.clone())].into_iter().collect()),
        vec![sub.clone(), sub],
    );
    for g in ctx {
        ant.remove_one(&g);
        ant.remove_one(&g);
        ant.insert(Formula::box_t(g));
        cur = Derivation::node(
            RuleId::LBoxT,
            Sequent::from_bags(ant.clone(), [Formula::box_t(a.clone())].into_iter().collect()),
            vec![cur],
        );
    }
    cur
}

// ---------------------------------------------------------------------------
// Cut elimination
// ---------------------------------------------------------------------------

fn cut_formula(d: &Derivation) -> Result<Formula, TransformError> {
    let prems = [seq(&d.premises[0])?.clone(), seq(&d.premises[1])?.clone()];
    let a = analyze_step(RuleId::Cut, seq(d)?, &prems).map_err(|m| malformed(RuleId::Cut, m))?;
    Ok(a.principal.expect("cut analysis names the cut formula").1)
}

/// Builds a cut node, computing its conclusion from the premisses.
fn mk_cut(left: Derivation, right: Derivation, a: &Formula) -> Derivation {
    let l = left.conclusion.as_sequent().expect("sequential");
    let r = right.conclusion.as_sequent().expect("sequential");
    let l_rest = Sequent::from_bags(l.ant.clone(), l.succ.without(a).expect("cut formula on the right of left premiss"));
    let r_rest = Sequent::from_bags(r.ant.without(a).expect("cut formula on the left of right premiss"), r.succ.clone());
    Derivation::node(RuleId::Cut, l_rest.sum(&r_rest), vec![left, right])
}

fn analysis_of(d: &Derivation) -> Result<Analysis, TransformError> {
    let prems: Vec<Sequent> = d.premises.iter().map(|p| seq(p).cloned()).collect::<Result<_, _>>()?;
    analyze_step(d.rule, seq(d)?, &prems).map_err(|m| malformed(d.rule, m))
}

/// Whether the occurrence of `a` on `side` of the last step of `d` is
/// principal, i.e. not available from the context.
fn is_principal(d: &Derivation, an: &Analysis, side: Side, a: &Formula) -> bool {
    if d.rule == RuleId::Cut || d.rule == RuleId::Ax {
        return d.rule == RuleId::Ax;
    }
    let in_ctx = match side {
        Side::Ant => an.context.ant.contains(a),
        Side::Succ => an.context.succ.contains(a),
    };
    !in_ctx && an.principal.as_ref() == Some(&(side, a.clone()))
}

/// Moves the cut above the last step of one premiss. `into_left` selects
/// which premiss; `other` is the untouched premiss.
fn commute(
    host: &Derivation,
    an: &Analysis,
    other: &Derivation,
    a: &Formula,
    into_left: bool,
    target: &Sequent,
) -> Result<Derivation, TransformError> {
    if host.premises.is_empty() {
        // L⊥ / R⊤ with the cut formula in its context: the conclusion is an
        // instance of the same axiom.
        return match host.rule {
            RuleId::LBot | RuleId::RTop => Ok(Derivation::leaf(host.rule, target.clone())),
            r => Err(malformed(r, "cut formula in the context of a context-free axiom")),
        };
    }
    let side_has = |s: &Sequent| if into_left { s.succ.contains(a) } else { s.ant.contains(a) };
    let mut premises = host.premises.clone();
    let mut done = false;
    for (i, pc) in an.premise_context.iter().enumerate() {
        if !side_has(pc) {
            continue;
        }
        let p = premises[i].clone();
        premises[i] = if into_left { mk_cut(p, other.clone(), a) } else { mk_cut(other.clone(), p, a) };
        done = true;
        // A splitting rule passes each context formula to one premiss only.
        let splitting = an.premise_context.len() > 1
            && an.premise_context.iter().skip(1).fold(an.premise_context[0].clone(), |x, y| x.sum(y)) == an.context;
        if splitting {
            break;
        }
    }
    if !done {
        return Err(malformed(host.rule, "cut formula not found in any premiss context"));
    }
    Ok(Derivation::node(host.rule, target.clone(), premises))
}

fn sub_of(d: &Derivation, i: usize) -> Derivation {
    d.premises[i].clone()
}

/// Principal reduction: both premisses introduce the cut formula.
fn principal(l: &Derivation, r: &Derivation, a: &Formula) -> Result<Derivation, TransformError> {
    use RuleId::*;
    let parts = |f: &Formula| -> (Formula, Formula) {
        match f {
            Formula::Tensor(x, y) | Formula::Par(x, y) | Formula::With(x, y) | Formula::Plus(x, y) | Formula::Limp(x, y) => {
                ((**x).clone(), (**y).clone())
            }
            Formula::Neg(x) | Formula::DiaT(x) | Formula::BoxT(x) | Formula::BoxK(x) | Formula::DiaK(x) => {
                ((**x).clone(), (**x).clone())
            }
            _ => (f.clone(), f.clone()),
        }
    };
    let (b, c) = parts(a);
    let out = match (l.rule, r.rule) {
        (R1, L1) => sub_of(r, 0),
        (R0, L0) => sub_of(l, 0),
        (RTensor, LTensor) => mk_cut(sub_of(l, 1), mk_cut(sub_of(l, 0), sub_of(r, 0), &b), &c),
        (RPar, LPar) => mk_cut(mk_cut(sub_of(l, 0), sub_of(r, 0), &b), sub_of(r, 1), &c),
        (RWith, LWith1) => mk_cut(sub_of(l, 0), sub_of(r, 0), &b),
        (RWith, LWith2) => mk_cut(sub_of(l, 1), sub_of(r, 0), &c),
        (RPlus1, LPlus) => mk_cut(sub_of(l, 0), sub_of(r, 0), &b),
        (RPlus2, LPlus) => mk_cut(sub_of(l, 0), sub_of(r, 1), &c),
        (RNeg, LNeg) => mk_cut(sub_of(r, 0), sub_of(l, 0), &b),
        (RLimp, LLimp) => mk_cut(mk_cut(sub_of(r, 0), sub_of(l, 0), &b), sub_of(r, 1), &c),
        (RDiaT, LDiaT) => mk_cut(mk_cut(sub_of(l, 0), sub_of(r, 0), &b), sub_of(r, 1), &b),
        (RBoxT, LBoxT) => mk_cut(sub_of(l, 1), mk_cut(sub_of(l, 0), sub_of(r, 0), &b), &b),
        (x, y) => return Err(malformed(Cut, format!("no reduction for {} against {}", x.name(), y.name()))),
    };
    Ok(out)
}

/// Rewrites a single cut node whose premisses are arbitrary derivations.
fn reduce_cut(d: &Derivation) -> Result<Derivation, TransformError> {
    let a = cut_formula(d)?;
    let (l, r) = (&d.premises[0], &d.premises[1]);
    let target = seq(d)?.clone();
    if l.rule == RuleId::Ax {
        return Ok(r.clone());
    }
    if r.rule == RuleId::Ax {
        return Ok(l.clone());
    }
    let la = analysis_of(l)?;
    if !is_principal(l, &la, Side::Succ, &a) {
        return commute(l, &la, r, &a, true, &target);
    }
    if r.rule == RuleId::KBox {
        if l.rule != RuleId::KBox {
            return Err(malformed(RuleId::Cut, "boxed cut formula introduced by a rule other than K□"));
        }
        let Formula::BoxK(inner) = &a else {
            return Err(malformed(RuleId::KBox, "cut formula is not boxed"));
        };
        let cut = mk_cut(sub_of(l, 0), sub_of(r, 0), inner);
        return Ok(Derivation::node(RuleId::KBox, target, vec![cut]));
    }
    let ra = analysis_of(r)?;
    if !is_principal(r, &ra, Side::Ant, &a) {
        return commute(r, &ra, l, &a, false, &target);
    }
    principal(l, r, &a)
}

fn collect_cuts(d: &Derivation, path: &mut Vec<usize>, out: &mut Vec<(usize, Vec<usize>)>) -> Result<(), TransformError> {
    if d.rule == RuleId::Cut {
        out.push((cut_formula(d)?.size(), path.clone()));
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        collect_cuts(p, path, out)?;
        path.pop();
    }
    Ok(())
}

fn replace_at(d: &Derivation, path: &[usize], new: Derivation) -> Derivation {
    match path.split_first() {
        None => new,
        Some((&i, rest)) => {
            let mut out = d.clone();
            out.premises[i] = replace_at(&d.premises[i], rest, new);
            out
        }
    }
}

fn reduce_step(d: &Derivation) -> Result<Derivation, TransformError> {
    let mut cuts = Vec::new();
    collect_cuts(d, &mut Vec::new(), &mut cuts)?;
    let rank = cuts.iter().map(|c| c.0).max().ok_or(TransformError::NoCut)?;
    // Among the cuts of maximal rank, the deepest has none of that rank above.
    let path = cuts
        .into_iter()
        .filter(|c| c.0 == rank)
        .max_by(|x, y| x.1.len().cmp(&y.1.len()).then_with(|| y.1.cmp(&x.1)))
        .map(|c| c.1)
        .expect("nonempty");
    let node = d.at_path(&path).expect("path from traversal");
    Ok(replace_at(d, &path, reduce_cut(node)?))
}

/// Performs one reduction on the topmost cut of maximal rank.
pub fn reduce_one_cut(d: &Derivation) -> Result<Derivation, TransformError> {
    ensure_sequential(d)?;
    if !d.contains_rule(RuleId::Cut) {
        return Err(TransformError::NoCut);
    }
    check_derivation(d, &kmall_with_cut(), &[]).map_err(TransformError::Unchecked)?;
    reduce_step(d)
}

/// Result of [`eliminate_cuts_counted`].
#[derive(Clone, Debug)]
pub struct Elimination {
    pub proof: Derivation,
    pub steps: usize,
}

/// Hard ceiling on reduction steps; generous against the `10·n²` target.
const STEP_CEILING: usize = 2_000_000;

/// Removes every cut from a KMALL+Cut derivation, reporting the number of
/// reduction steps taken.
pub fn eliminate_cuts_counted(d: &Derivation) -> Result<Elimination, TransformError> {
    ensure_sequential(d)?;
    check_derivation(d, &kmall_with_cut(), &[]).map_err(TransformError::Unchecked)?;
    let mut cur = d.clone();
    let mut steps = 0;
    while cur.contains_rule(RuleId::Cut) {
        if steps >= STEP_CEILING {
            return Err(TransformError::StepLimit(STEP_CEILING));
        }
        cur = reduce_step(&cur)?;
        steps += 1;
    }
    Ok(Elimination { proof: cur, steps })
}

/// Removes every cut from a KMALL+Cut derivation.
pub fn eliminate_cuts(d: &Derivation) -> Result<Derivation, TransformError> {
    eliminate_cuts_counted(d).map(|e| e.proof)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequent::parse_sequent;

    fn s(text: &str) -> Sequent {
        parse_sequent(text).unwrap()
    }

    fn ax(text: &str) -> Derivation {
        Derivation::leaf(RuleId::Ax, s(text))
    }

    #[test]
    fn kbox_over_axiom() {
        let d = Derivation::node(RuleId::KBox, s("[]a => []a"), vec![ax("a => a")]);
        let t = translate_kmall_to_mall(&d).unwrap();
        assert_eq!(t.conclusion, Hypersequent::single(s("[.]a => [.]a")));
        assert_eq!(t.rule, RuleId::LBoxT);
        assert_eq!(t.premises[0].rule, RuleId::RBoxT);
        check_derivation(&t, &Preset::Mall.logic(), &[]).unwrap();
    }

    #[test]
    fn box_free_unchanged() {
        let d = Derivation::node(
            RuleId::RTensor,
            s("a, b => a * b"),
            vec![ax("a => a"), ax("b => b")],
        );
        assert_eq!(translate_kmall_to_mall(&d).unwrap(), d);
    }

    #[test]
    fn nested_kbox_duplicates() {
        let inner = Derivation::node(RuleId::KBox, s("[]a => []a"), vec![ax("a => a")]);
        let d = Derivation::node(RuleId::KBox, s("[][]a => [][]a"), vec![inner]);
        let t = translate_kmall_to_mall(&d).unwrap();
        assert_eq!(t.conclusion, Hypersequent::single(s("[.][.]a => [.][.]a")));
        assert!(t.size() > d.size());
        assert_eq!(t.count_rule(RuleId::Ax), 4);
        check_derivation(&t, &Preset::Mall.logic(), &[]).unwrap();
    }

    #[test]
    fn translation_rejects_cut() {
        let d = Derivation::node(RuleId::Cut, s("a => a"), vec![ax("a => a"), ax("a => a")]);
        assert!(matches!(translate_kmall_to_mall(&d), Err(TransformError::HasCut)));
    }

    #[test]
    fn axiom_cut_collapses() {
        let d = Derivation::node(RuleId::Cut, s("a => a"), vec![ax("a => a"), ax("a => a")]);
        assert_eq!(eliminate_cuts(&d).unwrap(), ax("a => a"));
    }

    #[test]
    fn kbox_cut_pushed_up() {
        let l = Derivation::node(RuleId::KBox, s("[]a => []a"), vec![ax("a => a")]);
        let r = Derivation::node(RuleId::KBox, s("[]a => []a"), vec![ax("a => a")]);
        let d = Derivation::node(RuleId::Cut, s("[]a => []a"), vec![l, r]);
        let once = reduce_one_cut(&d).unwrap();
        assert_eq!(once.rule, RuleId::KBox);
        assert_eq!(once.premises[0].rule, RuleId::Cut);
        let done = eliminate_cuts(&d).unwrap();
        assert!(!done.contains_rule(RuleId::Cut));
        check_derivation(&done, &Preset::Kmall.logic(), &[]).unwrap();
    }

    #[test]
    fn commutes_above_left_rule() {
        // Left premiss ends in L⊗ on b * c, which is not the cut formula.
        let l = Derivation::node(
            RuleId::LTensor,
            s("b * c => b * c"),
            vec![Derivation::node(RuleId::RTensor, s("b, c => b * c"), vec![ax("b => b"), ax("c => c")])],
        );
        let r = Derivation::node(
            RuleId::RPlus1,
            s("b * c => (b * c) \\/ d"),
            vec![ax("b * c => b * c")],
        );
        let d = Derivation::node(RuleId::Cut, s("b * c => (b * c) \\/ d"), vec![l, r]);
        check_derivation(&d, &kmall_with_cut(), &[]).unwrap();
        let once = reduce_one_cut(&d).unwrap();
        assert_eq!(once.rule, RuleId::LTensor);
        assert_eq!(once.premises[0].rule, RuleId::Cut);
    }

    #[test]
    fn top_context_absorbs_cut() {
        let l = Derivation::leaf(RuleId::RTop, s("b => top, a"));
        let r = Derivation::node(RuleId::RPlus1, s("a => a \\/ c"), vec![ax("a => a")]);
        let d = Derivation::node(RuleId::Cut, s("b => top, a \\/ c"), vec![l, r]);
        let once = reduce_one_cut(&d).unwrap();
        assert_eq!(once, Derivation::leaf(RuleId::RTop, s("b => top, a \\/ c")));
    }

    #[test]
    fn principal_tensor_cut_splits() {
        let l = Derivation::node(RuleId::RTensor, s("a, b => a * b"), vec![ax("a => a"), ax("b => b")]);
        let r = Derivation::node(
            RuleId::LTensor,
            s("a * b => b * a"),
            vec![Derivation::node(RuleId::RTensor, s("a, b => b * a"), vec![ax("b => b"), ax("a => a")])],
        );
        let d = Derivation::node(RuleId::Cut, s("a, b => b * a"), vec![l, r]);
        let once = reduce_one_cut(&d).unwrap();
        assert_eq!(once.rule, RuleId::Cut);
        assert_eq!(once.count_rule(RuleId::Cut), 2);
        check_derivation(&once, &kmall_with_cut(), &[]).unwrap();
        let done = eliminate_cuts(&d).unwrap();
        assert!(!done.contains_rule(RuleId::Cut));
        assert_eq!(done.conclusion, d.conclusion);
        check_derivation(&done, &Preset::Kmall.logic(), &[]).unwrap();
    }

    #[test]
    fn no_cut_is_an_error() {
        assert!(matches!(reduce_one_cut(&ax("a => a")), Err(TransformError::NoCut)));
    }
}
