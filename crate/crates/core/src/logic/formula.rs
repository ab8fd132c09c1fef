use std::fmt;

use super::{LogicError, Signature, WorldSet};

/// Propositional formula over a [`Signature`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Self {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Self {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Self {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn iff(f: Formula, g: Formula) -> Self {
        Formula::Iff(Box::new(f), Box::new(g))
    }

    /// Checks that every atom occurs in `sig`.
    pub fn check(&self, sig: &Signature) -> Result<(), LogicError> {
        match self {
            Formula::Atom(a) => sig
                .index_of(a)
                .map(|_| ())
                .ok_or_else(|| LogicError::UnknownAtom(a.clone())),
            Formula::Top | Formula::Bot => Ok(()),
            Formula::Not(f) => f.check(sig),
            Formula::And(f, g)
            | Formula::Or(f, g)
            | Formula::Implies(f, g)
            | Formula::Iff(f, g) => {
                f.check(sig)?;
                g.check(sig)
            }
        }
    }

    /// `Mod(self)`: the worlds of `sig` satisfying the formula.
    pub fn models(&self, sig: &Signature) -> Result<WorldSet, LogicError> {
        let width = sig.world_count();
        Ok(match self {
            Formula::Atom(a) => {
                let i = sig
                    .index_of(a)
                    .ok_or_else(|| LogicError::UnknownAtom(a.clone()))?;
                sig.atom_models(i).clone()
            }
            Formula::Top => WorldSet::full(width),
            Formula::Bot => WorldSet::empty(width),
            Formula::Not(f) => f.models(sig)?.complement(),
            Formula::And(f, g) => f.models(sig)?.intersection(&g.models(sig)?),
            Formula::Or(f, g) => f.models(sig)?.union(&g.models(sig)?),
            Formula::Implies(f, g) => f.models(sig)?.complement().union(&g.models(sig)?),
            Formula::Iff(f, g) => {
                let (m, n) = (f.models(sig)?, g.models(sig)?);
                m.intersection(&n)
                    .union(&m.complement().intersection(&n.complement()))
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            _ => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, child: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Formula {
    /// Prints in the parser's concrete syntax with only the parentheses
    /// precedence and associativity require.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        let binary = |f: &mut fmt::Formatter<'_>, l: &Formula, op: &str, r: &Formula, right_assoc: bool| {
            let (lp, rp) = (l.precedence(), r.precedence());
            let (lparen, rparen) = if right_assoc {
                (lp <= p, rp < p)
            } else {
                (lp < p, rp <= p)
            };
            write_operand(f, l, lparen)?;
            write!(f, " {op} ")?;
            write_operand(f, r, rparen)
        };
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Top => write!(f, "top"),
            Formula::Bot => write!(f, "bot"),
            Formula::Not(g) => {
                write!(f, "!")?;
                write_operand(f, g, g.precedence() < 5)
            }
            Formula::And(l, r) => binary(f, l, "&", r, false),
            Formula::Or(l, r) => binary(f, l, "|", r, false),
            Formula::Implies(l, r) => binary(f, l, "->", r, true),
            Formula::Iff(l, r) => binary(f, l, "<->", r, false),
        }
    }
}

/// All worlds of the signature.
pub fn all_worlds(sig: &Signature) -> WorldSet {
    WorldSet::full(sig.world_count())
}

/// Whether the conjunction of `premises` entails `f`; with no premises,
/// whether `f` is a tautology. This is membership of `f` in `Cn(premises)`.
pub fn entails(premises: &[Formula], f: &Formula, sig: &Signature) -> Result<bool, LogicError> {
    let mut common = all_worlds(sig);
    for p in premises {
        common = common.intersection(&p.models(sig)?);
    }
    Ok(common.is_subset(&f.models(sig)?))
}

/// Disjunction of the complete conjunctions of the worlds in `ws`, in
/// truth-table order; `Bot` for the empty set and `Top` for all worlds.
pub fn formula_from_worldset(ws: &WorldSet, sig: &Signature) -> Formula {
    if ws.is_empty() {
        return Formula::Bot;
    }
    if ws.is_full() {
        return Formula::Top;
    }
    ws.display_order(sig.len())
        .into_iter()
        .map(|w| {
            sig.atoms()
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let lit = Formula::atom(a.clone());
                    if w.holds(i) {
                        lit
                    } else {
                        Formula::not(lit)
                    }
                })
                .reduce(Formula::and)
                .expect("signature is non-empty")
        })
        .reduce(Formula::or)
        .expect("world-set is non-empty")
}
