//! Random formulas, multisets and derivations for property tests.
//!
//! Derivations are grown forwards from leaves, applying rules to the
//! conclusion built so far, so every output is correct by construction.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::calculus::{RuleId, Side};
use crate::formula::Formula;
use crate::multiset::Multiset;
use crate::proof::Derivation;
use crate::sequent::Sequent;

const ATOMS: [&str; 3] = ["a", "b", "c"];

/// Which connectives the formula generator may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vocabulary {
    /// MALL connectives with the Tarskian modalities.
    Tarskian,
    /// The above plus the primitive box.
    Kmall,
}

pub fn random_atom(rng: &mut impl Rng) -> Formula {
    Formula::atom(ATOMS.choose(rng).expect("nonempty"))
}

/// A random formula of depth at most `depth`.
pub fn random_formula(rng: &mut impl Rng, depth: usize, vocab: Vocabulary) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Formula::zero(),
            1 => Formula::one(),
            2 => Formula::bot(),
            3 => Formula::top(),
            _ => random_atom(rng),
        };
    }
    let d = depth - 1;
    let unary = if vocab == Vocabulary::Kmall { 4 } else { 3 };
    match rng.gen_range(0..5 + unary) {
        0 => Formula::tensor(random_formula(rng, d, vocab), random_formula(rng, d, vocab)),
        1 => Formula::par(random_formula(rng, d, vocab), random_formula(rng, d, vocab)),
        2 => Formula::with(random_formula(rng, d, vocab), random_formula(rng, d, vocab)),
        3 => Formula::plus(random_formula(rng, d, vocab), random_formula(rng, d, vocab)),
        4 => Formula::limp(random_formula(rng, d, vocab), random_formula(rng, d, vocab)),
        5 => Formula::neg(random_formula(rng, d, vocab)),
        6 => Formula::dia_t(random_formula(rng, d, vocab)),
        7 => Formula::box_t(random_formula(rng, d, vocab)),
        _ => Formula::box_k(random_formula(rng, d, vocab)),
    }
}

/// A random sequent with at most `max_side` formulas per side.
pub fn random_sequent(rng: &mut impl Rng, depth: usize, max_side: usize, vocab: Vocabulary) -> Sequent {
    let n = rng.gen_range(0..=max_side);
    let m = rng.gen_range(0..=max_side);
    let ant: Vec<Formula> = (0..n).map(|_| random_formula(rng, depth, vocab)).collect();
    let succ: Vec<Formula> = (0..m).map(|_| random_formula(rng, depth, vocab)).collect();
    Sequent::new(ant, succ)
}

/// A random multiset over `0..alphabet` with at most `max_len` elements.
pub fn random_multiset(rng: &mut impl Rng, max_len: usize, alphabet: u8) -> Multiset<u8> {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| rng.gen_range(0..alphabet)).collect()
}

/// The expanded cut-free proof of `A ⇒ A`, using Ax only on atoms.
pub fn identity_derivation(f: &Formula) -> Derivation {
    use RuleId::*;
    let s = |ant: Vec<Formula>, succ: Vec<Formula>| Sequent::new(ant, succ);
    let fa = f.clone();
    let id = |x: &Formula, y: &Formula| (identity_derivation(x), identity_derivation(y));
    match f {
        Formula::Atom(_) | Formula::DiaK(_) => Derivation::leaf(Ax, s(vec![fa.clone()], vec![fa])),
        Formula::Const(c) => {
            use crate::formula::Const;
            match c {
                Const::Zero => Derivation::node(R0, s(vec![fa.clone()], vec![fa]), vec![Derivation::leaf(L0, s(vec![Formula::zero()], vec![]))]),
                Const::One => Derivation::node(L1, s(vec![fa.clone()], vec![fa]), vec![Derivation::leaf(R1, s(vec![], vec![Formula::one()]))]),
                Const::Bot => Derivation::leaf(LBot, s(vec![fa.clone()], vec![fa])),
                Const::Top => Derivation::leaf(RTop, s(vec![fa.clone()], vec![fa])),
            }
        }
        Formula::Tensor(a, b) => {
            let (da, db) = id(a, b);
            let inner = Derivation::node(RTensor, s(vec![(**a).clone(), (**b).clone()], vec![fa.clone()]), vec![da, db]);
            Derivation::node(LTensor, s(vec![fa.clone()], vec![fa]), vec![inner])
        }
        Formula::Par(a, b) => {
            let (da, db) = id(a, b);
            let inner = Derivation::node(LPar, s(vec![fa.clone()], vec![(**a).clone(), (**b).clone()]), vec![da, db]);
            Derivation::node(RPar, s(vec![fa.clone()], vec![fa]), vec![inner])
        }
        Formula::With(a, b) => {
            let (da, db) = id(a, b);
            let l = Derivation::node(LWith1, s(vec![fa.clone()], vec![(**a).clone()]), vec![da]);
            let r = Derivation::node(LWith2, s(vec![fa.clone()], vec![(**b).clone()]), vec![db]);
            Derivation::node(RWith, s(vec![fa.clone()], vec![fa]), vec![l, r])
        }
        Formula::Plus(a, b) => {
            let (da, db) = id(a, b);
            let l = Derivation::node(RPlus1, s(vec![(**a).clone()], vec![fa.clone()]), vec![da]);
            let r = Derivation::node(RPlus2, s(vec![(**b).clone()], vec![fa.clone()]), vec![db]);
            Derivation::node(LPlus, s(vec![fa.clone()], vec![fa]), vec![l, r])
        }
        Formula::Neg(a) => {
            let inner = Derivation::node(LNeg, s(vec![fa.clone(), (**a).clone()], vec![]), vec![identity_derivation(a)]);
            Derivation::node(RNeg, s(vec![fa.clone()], vec![fa]), vec![inner])
        }
        Formula::Limp(a, b) => {
            let (da, db) = id(a, b);
            let inner = Derivation::node(LLimp, s(vec![fa.clone(), (**a).clone()], vec![(**b).clone()]), vec![da, db]);
            Derivation::node(RLimp, s(vec![fa.clone()], vec![fa]), vec![inner])
        }
        Formula::DiaT(a) => {
            let da = identity_derivation(a);
            let inner = Derivation::node(LDiaT, s(vec![fa.clone()], vec![(**a).clone(), (**a).clone()]), vec![da.clone(), da]);
            Derivation::node(RDiaT, s(vec![fa.clone()], vec![fa]), vec![inner])
        }
        Formula::BoxT(a) => {
            let da = identity_derivation(a);
            let inner = Derivation::node(RBoxT, s(vec![(**a).clone(), (**a).clone()], vec![fa.clone()]), vec![da.clone(), da]);
            Derivation::node(LBoxT, s(vec![fa.clone()], vec![fa]), vec![inner])
        }
        Formula::BoxK(a) => Derivation::node(KBox, s(vec![fa.clone()], vec![fa]), vec![identity_derivation(a)]),
    }
}

fn concl(d: &Derivation) -> Sequent {
    d.conclusion.as_sequent().expect("generated derivations are sequents").clone()
}

/// Formula occurrences on one side, minus one protected occurrence.
fn available(s: &Sequent, side: Side, protect: &Option<(Side, Formula)>) -> Vec<Formula> {
    let bag = match side {
        Side::Ant => &s.ant,
        Side::Succ => &s.succ,
    };
    let mut v: Vec<Formula> = bag.iter().cloned().collect();
    if let Some((ps, pf)) = protect {
        if *ps == side {
            if let Some(i) = v.iter().position(|f| f == pf) {
                v.remove(i);
            }
        }
    }
    v
}

fn pick(rng: &mut impl Rng, v: &mut Vec<Formula>) -> Option<Formula> {
    if v.is_empty() {
        return None;
    }
    let i = rng.gen_range(0..v.len());
    Some(v.swap_remove(i))
}

fn replace(bag: &Multiset<Formula>, remove: &[&Formula], add: Formula) -> Multiset<Formula> {
    let mut out = bag.clone();
    for f in remove {
        out.remove_one(f);
    }
    out.insert(add);
    out
}

fn small_formula(rng: &mut impl Rng) -> Formula {
    random_formula(rng, 1, Vocabulary::Kmall)
}

fn leaf(rng: &mut impl Rng, height: usize, protect: &Option<(Side, Formula)>) -> Derivation {
    use RuleId::*;
    if let Some((_, f)) = protect {
        let id = identity_derivation(f);
        return if id.height() <= height { id } else { Derivation::leaf(Ax, Sequent::new([f.clone()], [f.clone()])) };
    }
    match rng.gen_range(0..8) {
        0 => Derivation::leaf(R1, Sequent::new([], [Formula::one()])),
        1 => Derivation::leaf(L0, Sequent::new([Formula::zero()], [])),
        2 => {
            let ctx = Sequent::new([small_formula(rng)], [small_formula(rng)]);
            Derivation::leaf(RTop, ctx.sum(&Sequent::new([], [Formula::top()])))
        }
        3 => {
            let ctx = Sequent::new([small_formula(rng)], []);
            Derivation::leaf(LBot, ctx.sum(&Sequent::new([Formula::bot()], [])))
        }
        4 => {
            let f = small_formula(rng);
            Derivation::leaf(Ax, Sequent::new([f.clone()], [f]))
        }
        _ => {
            let f = random_atom(rng);
            Derivation::leaf(Ax, Sequent::new([f.clone()], [f]))
        }
    }
}

/// Tries one unary forward step on `p`.
fn unary(rng: &mut impl Rng, p: Derivation, protect: &Option<(Side, Formula)>) -> Result<Derivation, Derivation> {
    use RuleId::*;
    let s = concl(&p);
    let mut ant = available(&s, Side::Ant, protect);
    let mut succ = available(&s, Side::Succ, protect);
    // K□ only fits single-succedent premises, so favour it when it does
    let rule = if protect.is_none() && s.succ.len() == 1 && rng.gen_bool(0.3) {
        KBox
    } else {
        *[L1, R0, LTensor, RPar, LWith1, LWith2, RPlus1, RPlus2, LNeg, RNeg, RLimp, RDiaT, LBoxT, KBox]
            .choose(rng)
            .expect("nonempty")
    };
    let new = match rule {
        L1 => Some(Sequent::from_bags(s.ant.with(Formula::one()), s.succ.clone())),
        R0 => Some(Sequent::from_bags(s.ant.clone(), s.succ.with(Formula::zero()))),
        LTensor => match (pick(rng, &mut ant), pick(rng, &mut ant)) {
            (Some(a), Some(b)) => Some(Sequent::from_bags(replace(&s.ant, &[&a, &b], Formula::tensor(a.clone(), b.clone())), s.succ.clone())),
            _ => None,
        },
        RPar => match (pick(rng, &mut succ), pick(rng, &mut succ)) {
            (Some(a), Some(b)) => Some(Sequent::from_bags(s.ant.clone(), replace(&s.succ, &[&a, &b], Formula::par(a.clone(), b.clone())))),
            _ => None,
        },
        LWith1 | LWith2 => pick(rng, &mut ant).map(|a| {
            let o = small_formula(rng);
            let w = if rule == LWith1 { Formula::with(a.clone(), o) } else { Formula::with(o, a.clone()) };
            Sequent::from_bags(replace(&s.ant, &[&a], w), s.succ.clone())
        }),
        RPlus1 | RPlus2 => pick(rng, &mut succ).map(|a| {
            let o = small_formula(rng);
            let w = if rule == RPlus1 { Formula::plus(a.clone(), o) } else { Formula::plus(o, a.clone()) };
            Sequent::from_bags(s.ant.clone(), replace(&s.succ, &[&a], w))
        }),
        LNeg => pick(rng, &mut succ).map(|a| {
            Sequent::from_bags(s.ant.with(Formula::neg(a.clone())), s.succ.without(&a).expect("picked"))
        }),
        RNeg => pick(rng, &mut ant).map(|a| {
            Sequent::from_bags(s.ant.without(&a).expect("picked"), s.succ.with(Formula::neg(a.clone())))
        }),
        RLimp => match (pick(rng, &mut ant), pick(rng, &mut succ)) {
            (Some(a), Some(b)) => Some(Sequent::from_bags(
                s.ant.without(&a).expect("picked"),
                replace(&s.succ, &[&b], Formula::limp(a.clone(), b.clone())),
            )),
            _ => None,
        },
        RDiaT => {
            let twice = succ.iter().find(|f| succ.iter().filter(|g| g == f).count() >= 2).cloned();
            twice.map(|a| Sequent::from_bags(s.ant.clone(), replace(&s.succ, &[&a, &a], Formula::dia_t(a.clone()))))
        }
        LBoxT => {
            let twice = ant.iter().find(|f| ant.iter().filter(|g| g == f).count() >= 2).cloned();
            twice.map(|a| Sequent::from_bags(replace(&s.ant, &[&a, &a], Formula::box_t(a.clone())), s.succ.clone()))
        }
        _ => {
            if protect.is_none() && s.succ.len() == 1 {
                Some(s.map(|f| Formula::box_k(f.clone())))
            } else {
                None
            }
        }
    };
    match new {
        Some(c) => Ok(Derivation::node(rule, c, vec![p])),
        None => Err(p),
    }
}

/// Tries one binary forward step; `p` carries the protected occurrence.
fn binary(
    rng: &mut impl Rng,
    p: Derivation,
    q: Derivation,
    protect: &Option<(Side, Formula)>,
) -> Result<Derivation, Derivation> {
    use RuleId::*;
    let s = concl(&p);
    let t = concl(&q);
    let mut pa = available(&s, Side::Ant, protect);
    let mut ps = available(&s, Side::Succ, protect);
    let mut qa = available(&t, Side::Ant, &None);
    let mut qs = available(&t, Side::Succ, &None);
    let rule = *[RTensor, LPar, LLimp, LDiaT, RBoxT, RWith, LPlus].choose(rng).expect("nonempty");
    let out = match rule {
        RTensor => match (pick(rng, &mut ps), pick(rng, &mut qs)) {
            (Some(a), Some(b)) => {
                let ctx = Sequent::from_bags(s.ant.clone(), s.succ.without(&a).expect("picked"))
                    .sum(&Sequent::from_bags(t.ant.clone(), t.succ.without(&b).expect("picked")));
                let c = Sequent::from_bags(ctx.ant, ctx.succ.with(Formula::tensor(a, b)));
                Some(Derivation::node(rule, c, vec![p.clone(), q]))
            }
            _ => None,
        },
        LPar => match (pick(rng, &mut pa), pick(rng, &mut qa)) {
            (Some(a), Some(b)) => {
                let ctx = Sequent::from_bags(s.ant.without(&a).expect("picked"), s.succ.clone())
                    .sum(&Sequent::from_bags(t.ant.without(&b).expect("picked"), t.succ.clone()));
                let c = Sequent::from_bags(ctx.ant.with(Formula::par(a, b)), ctx.succ);
                Some(Derivation::node(rule, c, vec![p.clone(), q]))
            }
            _ => None,
        },
        LLimp => match (pick(rng, &mut qs), pick(rng, &mut pa)) {
            (Some(a), Some(b)) => {
                let ctx = Sequent::from_bags(t.ant.clone(), t.succ.without(&a).expect("picked"))
                    .sum(&Sequent::from_bags(s.ant.without(&b).expect("picked"), s.succ.clone()));
                let c = Sequent::from_bags(ctx.ant.with(Formula::limp(a, b)), ctx.succ);
                Some(Derivation::node(rule, c, vec![q, p.clone()]))
            }
            _ => None,
        },
        LDiaT => pick(rng, &mut pa).map(|a| {
            let ax = Derivation::leaf(Ax, Sequent::new([a.clone()], [a.clone()]));
            let ctx = Sequent::from_bags(s.ant.without(&a).expect("picked"), s.succ.with(a.clone()));
            let c = Sequent::from_bags(ctx.ant.with(Formula::dia_t(a)), ctx.succ);
            Derivation::node(rule, c, vec![p.clone(), ax])
        }),
        RBoxT => pick(rng, &mut ps).map(|a| {
            let ax = Derivation::leaf(Ax, Sequent::new([a.clone()], [a.clone()]));
            let ctx = Sequent::from_bags(s.ant.with(a.clone()), s.succ.without(&a).expect("picked"));
            let c = Sequent::from_bags(ctx.ant, ctx.succ.with(Formula::box_t(a)));
            Derivation::node(rule, c, vec![p.clone(), ax])
        }),
        RWith => pick(rng, &mut ps).map(|a| {
            let rest = s.succ.without(&a).expect("picked");
            let (other, b) = if rng.gen_bool(0.5) {
                (p.clone(), a.clone())
            } else {
                let leaf = Sequent::from_bags(s.ant.clone(), rest.with(Formula::top()));
                (Derivation::leaf(RTop, leaf), Formula::top())
            };
            let c = Sequent::from_bags(s.ant.clone(), rest.with(Formula::with(a, b)));
            Derivation::node(rule, c, vec![p.clone(), other])
        }),
        _ => pick(rng, &mut pa).map(|a| {
            let rest = s.ant.without(&a).expect("picked");
            let (other, b) = if rng.gen_bool(0.5) {
                (p.clone(), a.clone())
            } else {
                let leaf = Sequent::from_bags(rest.with(Formula::bot()), s.succ.clone());
                (Derivation::leaf(LBot, leaf), Formula::bot())
            };
            let c = Sequent::from_bags(rest.with(Formula::plus(a, b)), s.succ.clone());
            Derivation::node(rule, c, vec![p.clone(), other])
        }),
    };
    out.ok_or(p)
}

fn grow(rng: &mut impl Rng, height: usize, protect: &Option<(Side, Formula)>) -> Derivation {
    if height <= 1 || rng.gen_bool(0.15) {
        return leaf(rng, height.max(1), protect);
    }
    if rng.gen_bool(0.6) {
        let p = grow(rng, height - 1, protect);
        unary(rng, p, protect).unwrap_or_else(|p| p)
    } else {
        let p = grow(rng, height - 1, protect);
        let q = grow(rng, height - 1, &None);
        binary(rng, p, q, protect).unwrap_or_else(|p| p)
    }
}

/// A cut-free KMALL derivation of height at most `max_height` and at least
/// two nodes.
pub fn random_kmall_derivation(rng: &mut impl Rng, max_height: usize) -> Derivation {
    loop {
        let d = grow(rng, max_height, &None);
        if d.size() > 1 && d.height() <= max_height {
            return d;
        }
    }
}

fn cut_on(left: Derivation, right: Derivation, a: &Formula) -> Derivation {
    let l = concl(&left);
    let r = concl(&right);
    let c = Sequent::from_bags(l.ant.clone(), l.succ.without(a).expect("cut formula present"))
        .sum(&Sequent::from_bags(r.ant.without(a).expect("cut formula present"), r.succ.clone()));
    Derivation::node(RuleId::Cut, c, vec![left, right])
}

/// A KMALL+Cut derivation with between one and `max_cuts` cuts and height
/// at most `max_height`.
pub fn random_cut_derivation(rng: &mut impl Rng, max_height: usize, max_cuts: usize) -> Derivation {
    let sub = max_height.saturating_sub(max_cuts).max(2);
    loop {
        let left = grow(rng, sub, &None);
        let Some(a) = concl(&left).succ.iter().collect::<Vec<_>>().choose(rng).map(|f| (*f).clone()) else {
            continue;
        };
        let right = grow(rng, sub, &Some((Side::Ant, a.clone())));
        let mut d = cut_on(left, right, &a);
        let extra = rng.gen_range(0..max_cuts.max(1));
        for _ in 0..extra {
            let s = concl(&d);
            if rng.gen_bool(0.5) {
                if let Some(b) = s.succ.iter().collect::<Vec<_>>().choose(rng).map(|f| (*f).clone()) {
                    let right = grow(rng, sub, &Some((Side::Ant, b.clone())));
                    d = cut_on(d, right, &b);
                }
            } else if let Some(b) = s.ant.iter().collect::<Vec<_>>().choose(rng).map(|f| (*f).clone()) {
                let left = grow(rng, sub, &Some((Side::Succ, b.clone())));
                d = cut_on(left, d, &b);
            }
        }
        if d.height() <= max_height {
            return d;
        }
    }
}
