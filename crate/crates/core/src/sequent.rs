//! Sequents `Γ ⇒ Δ` and hypersequents `G₁ | … | Gₙ`.
//!
//! Both sides of a sequent and the components of a hypersequent are
//! multisets, so exchange is implicit.

use std::fmt;

use crate::formula::{Formula, Style};
use crate::multiset::Multiset;

pub use crate::syntax::{parse_hypersequent, parse_sequent};

pub type FormulaBag = Multiset<Formula>;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub ant: FormulaBag,
    pub succ: FormulaBag,
}

impl Sequent {
    pub fn new(ant: impl IntoIterator<Item = Formula>, succ: impl IntoIterator<Item = Formula>) -> Self {
        Sequent { ant: ant.into_iter().collect(), succ: succ.into_iter().collect() }
    }

    pub fn from_bags(ant: FormulaBag, succ: FormulaBag) -> Self {
        Sequent { ant, succ }
    }

    pub fn is_empty(&self) -> bool {
        self.ant.is_empty() && self.succ.is_empty()
    }

    /// Total number of formula occurrences on both sides.
    pub fn len(&self) -> usize {
        self.ant.len() + self.succ.len()
    }

    /// Sum of formula weights, the termination measure for backward search.
    pub fn weight(&self) -> usize {
        self.ant.iter().chain(self.succ.iter()).map(Formula::weight).sum()
    }

    /// Componentwise multiset union.
    pub fn sum(&self, other: &Sequent) -> Sequent {
        Sequent { ant: self.ant.sum(&other.ant), succ: self.succ.sum(&other.succ) }
    }

    /// Componentwise difference, when `other` is contained in `self`.
    pub fn difference(&self, other: &Sequent) -> Option<Sequent> {
        Some(Sequent { ant: self.ant.difference(&other.ant)?, succ: self.succ.difference(&other.succ)? })
    }

    pub fn map(&self, f: impl Fn(&Formula) -> Formula) -> Sequent {
        Sequent { ant: self.ant.iter().map(&f).collect(), succ: self.succ.iter().map(&f).collect() }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.ant.iter().chain(self.succ.iter())
    }

    pub fn render(&self, style: Style) -> String {
        let sep = match style {
            Style::Ascii => "=>",
            Style::Unicode => "⇒",
            Style::Latex => "\\seq",
        };
        let side = |bag: &FormulaBag| {
            bag.iter().map(|f| f.render(style)).collect::<Vec<_>>().join(", ")
        };
        let (l, r) = (side(&self.ant), side(&self.succ));
        match (l.is_empty(), r.is_empty()) {
            (true, true) => sep.to_string(),
            (true, false) => format!("{sep} {r}"),
            (false, true) => format!("{l} {sep}"),
            (false, false) => format!("{l} {sep} {r}"),
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Ascii))
    }
}

/// A nonempty multiset of sequents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hypersequent {
    comps: Multiset<Sequent>,
}

impl From<Sequent> for Hypersequent {
    fn from(s: Sequent) -> Self {
        Hypersequent::single(s)
    }
}

impl Hypersequent {
    /// # Panics
    /// If `comps` is empty.
    pub fn new(comps: impl IntoIterator<Item = Sequent>) -> Self {
        let comps: Multiset<Sequent> = comps.into_iter().collect();
        assert!(!comps.is_empty(), "a hypersequent needs at least one component");
        Hypersequent { comps }
    }

    pub fn single(s: Sequent) -> Self {
        Hypersequent::new([s])
    }

    pub fn from_multiset(comps: Multiset<Sequent>) -> Option<Self> {
        (!comps.is_empty()).then_some(Hypersequent { comps })
    }

    pub fn multiset(&self) -> &Multiset<Sequent> {
        &self.comps
    }

    /// Number of components, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Components with repetition, in canonical order. Indices into this
    /// listing identify active components.
    pub fn components(&self) -> Vec<&Sequent> {
        self.comps.iter().collect()
    }

    /// The only component of a single-component hypersequent.
    pub fn as_sequent(&self) -> Option<&Sequent> {
        if self.len() == 1 {
            self.comps.iter().next()
        } else {
            None
        }
    }

    /// The remaining components after removing one copy of `s`; `None` when
    /// `s` is absent. The result may be empty.
    pub fn context_without(&self, s: &Sequent) -> Option<Multiset<Sequent>> {
        self.comps.without(s)
    }

    pub fn map(&self, f: impl Fn(&Formula) -> Formula) -> Hypersequent {
        Hypersequent { comps: self.comps.iter().map(|s| s.map(&f)).collect() }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.comps.iter().flat_map(|s| s.formulas())
    }

    pub fn render(&self, style: Style) -> String {
        let sep = match style {
            Style::Latex => " \\mid ",
            _ => " | ",
        };
        self.comps.iter().map(|s| s.render(style)).collect::<Vec<_>>().join(sep)
    }
}

impl fmt::Display for Hypersequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Ascii))
    }
}

/// Every way of dividing `m` between two premisses; see [`Multiset::splits`].
pub fn enumerate_splits(m: &FormulaBag) -> Vec<(FormulaBag, FormulaBag)> {
    m.splits()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str) -> Sequent {
        parse_sequent(text).unwrap()
    }

    #[test]
    fn render_examples() {
        assert_eq!(Sequent::new([], [Formula::one()]).to_string(), "=> 1");
        assert_eq!(
            Sequent::new([Formula::bot(), Formula::atom("a")], []).to_string(),
            "bot, a =>"
        );
        assert_eq!(Sequent::default().to_string(), "=>");
        assert_eq!(seq("a, b => c").render(Style::Unicode), "a, b ⇒ c");
        assert_eq!(seq("a => [.]b").render(Style::Latex), "a \\seq \\boxdot b");
    }

    #[test]
    fn parse_examples() {
        let s = seq("a => a");
        assert_eq!(s.ant.len(), 1);
        assert_eq!(s.succ.len(), 1);
        let s = seq("0 =>");
        assert_eq!(s.ant.count(&Formula::zero()), 1);
        assert!(s.succ.is_empty());
    }

    #[test]
    fn order_insensitive() {
        assert_eq!(seq("a, b, a => c"), seq("b, a, a => c"));
        assert_ne!(seq("a, b => c"), seq("a, b, b => c"));
        let h1 = parse_hypersequent("a => b | c => d").unwrap();
        let h2 = parse_hypersequent("c => d | a => b").unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1.to_string(), h2.to_string());
    }

    #[test]
    fn hypersequent_round_trip() {
        let h = parse_hypersequent("a => a /\\ b | b => a /\\ b").unwrap();
        assert_eq!(h.len(), 2);
        for style in [Style::Ascii, Style::Unicode, Style::Latex] {
            assert_eq!(parse_hypersequent(&h.render(style)).unwrap(), h);
        }
    }

    #[test]
    fn splits_of_formula_bags() {
        let m = seq("a, a, b =>").ant;
        assert_eq!(enumerate_splits(&m).len(), 6);
        let (first, rest) = enumerate_splits(&m)[0].clone();
        assert_eq!(first, m);
        assert!(rest.is_empty());
    }

    #[test]
    fn context_without_component() {
        let h = parse_hypersequent("a => b | a => b | c =>").unwrap();
        let s = seq("a => b");
        let rest = h.context_without(&s).unwrap();
        assert_eq!(rest.len(), 2);
        assert!(h.context_without(&seq("x =>")).is_none());
    }
}
