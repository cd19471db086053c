//! Formulas of MALL extended with the Tarskian modalities and the primitive
//! KMALL box.
//!
//! Formulas are immutable trees with structural equality, ordering and
//! hashing. Subterms sit behind [`Arc`] so cloning is cheap and values can be
//! shared between threads.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use crate::syntax::{parse_formula, ParseError};

/// The four propositional constants.
///
/// `Zero` is the unit of par (`0 =>` is an axiom), `One` the unit of tensor,
/// `Bot` and `Top` the additive units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Const {
    Zero,
    One,
    Bot,
    Top,
}

/// A formula.
///
/// Variant order matters: the derived [`Ord`] is the canonical order used for
/// multisets and therefore for rendering, so constants sort before atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Const(Const),
    Atom(Arc<str>),
    Neg(Arc<Formula>),
    /// Multiplicative conjunction `A ⊗ B`.
    Tensor(Arc<Formula>, Arc<Formula>),
    /// Multiplicative disjunction `A ⊕ B` (par).
    Par(Arc<Formula>, Arc<Formula>),
    /// Additive conjunction `A ∧ B`.
    With(Arc<Formula>, Arc<Formula>),
    /// Additive disjunction `A ∨ B`.
    Plus(Arc<Formula>, Arc<Formula>),
    /// Linear implication `A → B`.
    Limp(Arc<Formula>, Arc<Formula>),
    /// Tarskian possibility, behaves like `A ⊕ A`.
    DiaT(Arc<Formula>),
    /// Tarskian necessity, behaves like `A ⊗ A`.
    BoxT(Arc<Formula>),
    /// Primitive KMALL box.
    BoxK(Arc<Formula>),
    /// Dual of the KMALL box, an abbreviation for `¬□¬A`.
    DiaK(Arc<Formula>),
}

/// Output notation for formulas, sequents and hypersequents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Style {
    Ascii,
    Unicode,
    Latex,
}

impl std::str::FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Style::Ascii),
            "unicode" => Ok(Style::Unicode),
            "latex" => Ok(Style::Latex),
            other => Err(format!("unknown style '{other}' (expected ascii, unicode or latex)")),
        }
    }
}

/// How the Tarskian modalities are unfolded by [`expand_tarskian`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionMode {
    /// `◇̇A ↦ A ⊕ A`, `□̇A ↦ A ⊗ A`.
    ParDef,
    /// `◇̇A ↦ ¬A → A`, `□̇A ↦ ¬(¬¬A → ¬A)`.
    ImplicationDef,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("Tarskian expansion is undefined for the primitive modality in `{0}`")]
    PrimitiveModality(String),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn zero() -> Formula {
        Formula::Const(Const::Zero)
    }

    pub fn one() -> Formula {
        Formula::Const(Const::One)
    }

    pub fn bot() -> Formula {
        Formula::Const(Const::Bot)
    }

    pub fn top() -> Formula {
        Formula::Const(Const::Top)
    }

    pub fn neg(a: Formula) -> Formula {
        Formula::Neg(Arc::new(a))
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Arc::new(a), Arc::new(b))
    }

    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Par(Arc::new(a), Arc::new(b))
    }

    pub fn with(a: Formula, b: Formula) -> Formula {
        Formula::With(Arc::new(a), Arc::new(b))
    }

    pub fn plus(a: Formula, b: Formula) -> Formula {
        Formula::Plus(Arc::new(a), Arc::new(b))
    }

    pub fn limp(a: Formula, b: Formula) -> Formula {
        Formula::Limp(Arc::new(a), Arc::new(b))
    }

    pub fn dia_t(a: Formula) -> Formula {
        Formula::DiaT(Arc::new(a))
    }

    pub fn box_t(a: Formula) -> Formula {
        Formula::BoxT(Arc::new(a))
    }

    pub fn box_k(a: Formula) -> Formula {
        Formula::BoxK(Arc::new(a))
    }

    pub fn dia_k(a: Formula) -> Formula {
        Formula::DiaK(Arc::new(a))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Atom(_) => 1,
            Formula::Neg(a)
            | Formula::DiaT(a)
            | Formula::BoxT(a)
            | Formula::BoxK(a)
            | Formula::DiaK(a) => 1 + a.size(),
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b)
            | Formula::Limp(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Size with the operand of a Tarskian modality counted twice.
    ///
    /// Every backward rule of the terminating calculi strictly decreases the
    /// sum of weights over a sequent, including the Tarskian rules, which
    /// duplicate their operand.
    pub fn weight(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Atom(_) => 1,
            Formula::DiaT(a) | Formula::BoxT(a) => 1 + 2 * a.weight(),
            Formula::Neg(a) | Formula::BoxK(a) | Formula::DiaK(a) => 1 + a.weight(),
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b)
            | Formula::Limp(a, b) => 1 + a.weight() + b.weight(),
        }
    }

    /// Nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Atom(_) => 0,
            Formula::Neg(a)
            | Formula::DiaT(a)
            | Formula::BoxT(a)
            | Formula::BoxK(a)
            | Formula::DiaK(a) => 1 + a.depth(),
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b)
            | Formula::Limp(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn has_primitive_modality(&self) -> bool {
        self.any(&|f| matches!(f, Formula::BoxK(_) | Formula::DiaK(_)))
    }

    pub fn has_tarskian_modality(&self) -> bool {
        self.any(&|f| matches!(f, Formula::BoxT(_) | Formula::DiaT(_)))
    }

    fn any(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Formula::Const(_) | Formula::Atom(_) => false,
            Formula::Neg(a)
            | Formula::DiaT(a)
            | Formula::BoxT(a)
            | Formula::BoxK(a)
            | Formula::DiaK(a) => a.any(pred),
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b)
            | Formula::Limp(a, b) => a.any(pred) || b.any(pred),
        }
    }

    /// Rebuilds the tree bottom-up, letting `f` rewrite every node after its
    /// children have been rewritten.
    pub fn map_bottom_up(&self, f: &dyn Fn(Formula) -> Formula) -> Formula {
        let rebuilt = match self {
            Formula::Const(_) | Formula::Atom(_) => self.clone(),
            Formula::Neg(a) => Formula::neg(a.map_bottom_up(f)),
            Formula::DiaT(a) => Formula::dia_t(a.map_bottom_up(f)),
            Formula::BoxT(a) => Formula::box_t(a.map_bottom_up(f)),
            Formula::BoxK(a) => Formula::box_k(a.map_bottom_up(f)),
            Formula::DiaK(a) => Formula::dia_k(a.map_bottom_up(f)),
            Formula::Tensor(a, b) => Formula::tensor(a.map_bottom_up(f), b.map_bottom_up(f)),
            Formula::Par(a, b) => Formula::par(a.map_bottom_up(f), b.map_bottom_up(f)),
            Formula::With(a, b) => Formula::with(a.map_bottom_up(f), b.map_bottom_up(f)),
            Formula::Plus(a, b) => Formula::plus(a.map_bottom_up(f), b.map_bottom_up(f)),
            Formula::Limp(a, b) => Formula::limp(a.map_bottom_up(f), b.map_bottom_up(f)),
        };
        f(rebuilt)
    }

    /// Replaces every `◇A` by `¬□¬A`.
    pub fn expand_dia_k(&self) -> Formula {
        self.map_bottom_up(&|g| match g {
            Formula::DiaK(a) => Formula::neg(Formula::box_k(Formula::neg((*a).clone()))),
            other => other,
        })
    }

    pub fn render(&self, style: Style) -> String {
        let mut out = String::new();
        write_formula(&mut out, self, style);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Ascii))
    }
}

/// Unfolds the Tarskian modalities bottom-up.
pub fn expand_tarskian(f: &Formula, mode: ExpansionMode) -> Result<Formula, ExpansionError> {
    if f.has_primitive_modality() {
        return Err(ExpansionError::PrimitiveModality(f.to_string()));
    }
    Ok(f.map_bottom_up(&|g| match g {
        Formula::DiaT(a) => {
            let a = (*a).clone();
            match mode {
                ExpansionMode::ParDef => Formula::par(a.clone(), a),
                ExpansionMode::ImplicationDef => Formula::limp(Formula::neg(a.clone()), a),
            }
        }
        Formula::BoxT(a) => {
            let a = (*a).clone();
            match mode {
                ExpansionMode::ParDef => Formula::tensor(a.clone(), a),
                // □̇A = ¬◇̇¬A = ¬(¬¬A → ¬A)
                ExpansionMode::ImplicationDef => Formula::neg(Formula::limp(
                    Formula::neg(Formula::neg(a.clone())),
                    Formula::neg(a),
                )),
            }
        }
        other => other,
    }))
}

/// Replaces the primitive modalities by their Tarskian counterparts.
pub fn box_substitute(f: &Formula) -> Formula {
    f.map_bottom_up(&|g| match g {
        Formula::BoxK(a) => Formula::BoxT(a),
        Formula::DiaK(a) => Formula::DiaT(a),
        other => other,
    })
}

// Binding strength, loosest first.
const PREC_LIMP: u8 = 1;
const PREC_PLUS: u8 = 2;
const PREC_WITH: u8 = 3;
const PREC_PAR: u8 = 4;
const PREC_TENSOR: u8 = 5;
const PREC_PREFIX: u8 = 6;
const PREC_ATOM: u8 = 7;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Const(_) | Formula::Atom(_) => PREC_ATOM,
        Formula::Neg(_)
        | Formula::DiaT(_)
        | Formula::BoxT(_)
        | Formula::BoxK(_)
        | Formula::DiaK(_) => PREC_PREFIX,
        Formula::Tensor(..) => PREC_TENSOR,
        Formula::Par(..) => PREC_PAR,
        Formula::With(..) => PREC_WITH,
        Formula::Plus(..) => PREC_PLUS,
        Formula::Limp(..) => PREC_LIMP,
    }
}

fn const_symbol(c: Const, style: Style) -> &'static str {
    match (c, style) {
        (Const::Zero, _) => "0",
        (Const::One, _) => "1",
        (Const::Bot, Style::Ascii) => "bot",
        (Const::Top, Style::Ascii) => "top",
        (Const::Bot, Style::Unicode) => "⊥",
        (Const::Top, Style::Unicode) => "⊤",
        (Const::Bot, Style::Latex) => "\\bot",
        (Const::Top, Style::Latex) => "\\top",
    }
}

fn prefix_symbol(f: &Formula, style: Style) -> &'static str {
    match (f, style) {
        (Formula::Neg(_), Style::Ascii) => "~",
        (Formula::DiaT(_), Style::Ascii) => "<.>",
        (Formula::BoxT(_), Style::Ascii) => "[.]",
        (Formula::BoxK(_), Style::Ascii) => "[]",
        (Formula::DiaK(_), Style::Ascii) => "<>",
        (Formula::Neg(_), Style::Unicode) => "¬",
        (Formula::DiaT(_), Style::Unicode) => "◇\u{307}",
        (Formula::BoxT(_), Style::Unicode) => "□\u{307}",
        (Formula::BoxK(_), Style::Unicode) => "□",
        (Formula::DiaK(_), Style::Unicode) => "◇",
        (Formula::Neg(_), Style::Latex) => "\\neg ",
        (Formula::DiaT(_), Style::Latex) => "\\Diamonddot ",
        (Formula::BoxT(_), Style::Latex) => "\\boxdot ",
        (Formula::BoxK(_), Style::Latex) => "\\Box ",
        (Formula::DiaK(_), Style::Latex) => "\\Diamond ",
        _ => unreachable!("not a prefix operator"),
    }
}

fn infix_symbol(f: &Formula, style: Style) -> &'static str {
    match (f, style) {
        (Formula::Tensor(..), Style::Ascii) => " * ",
        (Formula::Par(..), Style::Ascii) => " + ",
        (Formula::With(..), Style::Ascii) => " /\\ ",
        (Formula::Plus(..), Style::Ascii) => " \\/ ",
        (Formula::Limp(..), Style::Ascii) => " -> ",
        (Formula::Tensor(..), Style::Unicode) => " ⊗ ",
        (Formula::Par(..), Style::Unicode) => " ⊕ ",
        (Formula::With(..), Style::Unicode) => " ∧ ",
        (Formula::Plus(..), Style::Unicode) => " ∨ ",
        (Formula::Limp(..), Style::Unicode) => " → ",
        (Formula::Tensor(..), Style::Latex) => " \\otimes ",
        (Formula::Par(..), Style::Latex) => " \\oplus ",
        (Formula::With(..), Style::Latex) => " \\land ",
        (Formula::Plus(..), Style::Latex) => " \\lor ",
        (Formula::Limp(..), Style::Latex) => " \\imp ",
        _ => unreachable!("not an infix operator"),
    }
}

fn write_wrapped(out: &mut String, f: &Formula, style: Style, parens: bool) {
    if parens {
        out.push('(');
        write_formula(out, f, style);
        out.push(')');
    } else {
        write_formula(out, f, style);
    }
}

fn write_formula(out: &mut String, f: &Formula, style: Style) {
    match f {
        Formula::Const(c) => out.push_str(const_symbol(*c, style)),
        Formula::Atom(name) => out.push_str(name),
        Formula::Neg(a)
        | Formula::DiaT(a)
        | Formula::BoxT(a)
        | Formula::BoxK(a)
        | Formula::DiaK(a) => {
            out.push_str(prefix_symbol(f, style));
            write_wrapped(out, a, style, precedence(a) < PREC_PREFIX);
        }
        Formula::Limp(a, b) => {
            // right associative
            write_wrapped(out, a, style, precedence(a) <= PREC_LIMP);
            out.push_str(infix_symbol(f, style));
            write_wrapped(out, b, style, precedence(b) < PREC_LIMP);
        }
        Formula::Tensor(a, b) | Formula::Par(a, b) | Formula::With(a, b) | Formula::Plus(a, b) => {
            // left associative
            let p = precedence(f);
            write_wrapped(out, a, style, precedence(a) < p);
            out.push_str(infix_symbol(f, style));
            write_wrapped(out, b, style, precedence(b) <= p);
        }
    }
}
