use std::cell::OnceCell;
use std::rc::Rc;

use super::{PostulateId, Var};
use crate::change::{
    beliefs_included, conditional_accepted, contractional_accepted, ChangeError, ChangeKind,
    ChangeOperator,
};
use crate::logic::{World, WorldSet};
use crate::states::EpistemicState;

/// Largest world count for which posteriors are memoized by class index.
const DENSE_CACHE_WORLDS: usize = 8;

type Posterior = Result<Rc<EpistemicState>, ChangeError>;

/// Posteriors of one prior state, memoized for one- and two-step changes.
pub(crate) struct Posteriors<'a> {
    op: &'a dyn ChangeOperator,
    prior: &'a EpistemicState,
    first: Vec<OnceCell<Posterior>>,
    second: Vec<OnceCell<Vec<OnceCell<Posterior>>>>,
}

impl<'a> Posteriors<'a> {
    pub(crate) fn new(op: &'a dyn ChangeOperator, prior: &'a EpistemicState) -> Self {
        let worlds = prior.signature().world_count();
        let classes = if worlds <= DENSE_CACHE_WORLDS { 1usize << worlds } else { 0 };
        Posteriors {
            op,
            prior,
            first: (0..classes).map(|_| OnceCell::new()).collect(),
            second: (0..classes).map(|_| OnceCell::new()).collect(),
        }
    }

    fn slot(&self, input: &WorldSet) -> Option<usize> {
        let class = input.class()? as usize;
        (class < self.first.len()).then_some(class)
    }

    pub(crate) fn prior(&self) -> &EpistemicState {
        self.prior
    }

    pub(crate) fn kind(&self) -> ChangeKind {
        self.op.kind()
    }

    /// `Ψ∘a`.
    pub(crate) fn once(&self, a: &WorldSet) -> Posterior {
        match self.slot(a) {
            Some(i) => self.first[i]
                .get_or_init(|| self.op.apply(self.prior, a).map(Rc::new))
                .clone(),
            None => self.op.apply(self.prior, a).map(Rc::new),
        }
    }

    /// `Ψ∘a∘b`.
    pub(crate) fn twice(&self, a: &WorldSet, b: &WorldSet) -> Posterior {
        match (self.slot(a), self.slot(b)) {
            (Some(i), Some(j)) => {
                let row = self.second[i]
                    .get_or_init(|| (0..self.first.len()).map(|_| OnceCell::new()).collect());
                match row[j].get() {
                    Some(p) => p.clone(),
                    None => {
                        let p = self.once(a).and_then(|s| self.op.apply(&s, b).map(Rc::new));
                        row[j].get_or_init(|| p).clone()
                    }
                }
            }
            _ => self.op.apply(&*self.once(a)?, b).map(Rc::new),
        }
    }
}

/// A postulate instance with formulas as model sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct ModelBinding {
    pub alpha: Option<WorldSet>,
    pub beta: Option<WorldSet>,
    pub gamma: Option<WorldSet>,
    pub mu: Option<WorldSet>,
    pub w1: Option<World>,
    pub w2: Option<World>,
}

impl ModelBinding {
    pub(crate) fn formula_mut(&mut self, var: Var) -> &mut Option<WorldSet> {
        match var {
            Var::Alpha => &mut self.alpha,
            Var::Beta => &mut self.beta,
            Var::Gamma => &mut self.gamma,
            Var::Mu => &mut self.mu,
            Var::W1 | Var::W2 => panic!("{var} is a world variable"),
        }
    }

    fn set(&self, var: Var) -> &WorldSet {
        match var {
            Var::Alpha => &self.alpha,
            Var::Beta => &self.beta,
            Var::Gamma => &self.gamma,
            Var::Mu => &self.mu,
            Var::W1 | Var::W2 => &None,
        }
        .as_ref()
        .expect("arity checked before evaluation")
    }

    fn world(&self, var: Var) -> World {
        match var {
            Var::W1 => self.w1,
            _ => self.w2,
        }
        .expect("arity checked before evaluation")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Holds,
    Vacuous,
    Fails,
}

fn guarded(guard: bool, body: impl FnOnce() -> Result<bool, ChangeError>) -> Result<Outcome, ChangeError> {
    if !guard {
        return Ok(Outcome::Vacuous);
    }
    Ok(if body()? { Outcome::Holds } else { Outcome::Fails })
}

fn implies(a: bool, b: bool) -> bool {
    !a || b
}

/// `Bel(x) ⊆ Bel(y)`.
fn sub(x: &EpistemicState, y: &EpistemicState) -> bool {
    beliefs_included(x, y)
}

/// Evaluates one instance. The binding must match the postulate's arity.
pub(crate) fn evaluate(
    p: PostulateId,
    ctx: &Posteriors<'_>,
    b: &ModelBinding,
) -> Result<Outcome, ChangeError> {
    use PostulateId::*;

    let psi = ctx.prior();
    let a = || b.set(Var::Alpha);
    let be = || b.set(Var::Beta);
    let c = || b.set(Var::Gamma);
    let mu = || b.set(Var::Mu);
    let w1 = || b.world(Var::W1);
    let w2 = || b.world(Var::W2);
    let revision = ctx.kind() == ChangeKind::Revision;

    match p {
        FA1 | FA2 => {
            if revision && a().is_empty() {
                return Ok(Outcome::Vacuous);
            }
            let post = ctx.once(a())?;
            let bel = post.belief_models();
            let (in1, in2) = (bel.contains(w1()), bel.contains(w2()));
            if p == FA1 {
                guarded(in1 && in2, || Ok(post.rank(w1()) == post.rank(w2())))
            } else {
                guarded(in1 && !in2, || Ok(post.less(w1(), w2())))
            }
        }
        C1 => guarded(true, || Ok(sub(&*ctx.once(a())?, psi))),
        C2 => guarded(!psi.believes_models(a()), || Ok(sub(psi, &*ctx.once(a())?))),
        C3 => guarded(!a().is_full(), || Ok(!ctx.once(a())?.believes_models(a()))),
        C4 => guarded(true, || {
            let post = ctx.once(a())?;
            Ok(post.belief_models().intersection(a()).is_subset(psi.belief_models()))
        }),
        C5 => guarded(a() == be(), || {
            Ok(ctx.once(a())?.belief_models() == ctx.once(be())?.belief_models())
        }),
        C6 => guarded(true, || {
            let both = ctx.once(&a().intersection(be()))?;
            let either = ctx.once(a())?.belief_models().union(ctx.once(be())?.belief_models());
            Ok(both.belief_models().is_subset(&either))
        }),
        C7 => {
            let both = ctx.once(&a().intersection(be()))?;
            guarded(!both.believes_models(be()), || Ok(sub(&both, &*ctx.once(be())?)))
        }
        C8 | C9 | C9Prime => {
            let (guard, region) = match p {
                C8 => (a().union(be()).is_full(), a().clone()),
                C9 => (a().is_subset(be()), be().complement()),
                _ => (a().is_subset(be()), a().complement()),
            };
            guarded(guard, || {
                let iterated = ctx.twice(a(), be())?;
                let direct = ctx.once(be())?;
                Ok(iterated.belief_models().intersection(&region)
                    == direct.belief_models().intersection(&region))
            })
        }
        C10 => guarded(a().union(c()).is_full(), || {
            Ok(implies(
                ctx.once(be())?.believes_models(c()),
                ctx.twice(a(), be())?.believes_models(c()),
            ))
        }),
        C11 => guarded(a().is_subset(c()), || {
            Ok(implies(
                ctx.twice(a(), be())?.believes_models(c()),
                ctx.once(be())?.believes_models(c()),
            ))
        }),
        C8Cond | C9Cond => {
            let (guard, kept) = if p == C8Cond {
                (a().union(be()).is_full(), c().union(&a().complement()))
            } else {
                (a().is_subset(be()), c().union(be()))
            };
            guarded(guard, || {
                let post = ctx.once(a())?;
                Ok(contractional_accepted(&post, be(), &kept)
                    == contractional_accepted(psi, be(), &kept))
            })
        }
        C10Cond => guarded(a().union(c()).is_full(), || {
            Ok(implies(
                contractional_accepted(psi, be(), c()),
                contractional_accepted(&*ctx.once(a())?, be(), c()),
            ))
        }),
        C11Cond => guarded(a().is_subset(c()), || {
            Ok(implies(
                contractional_accepted(&*ctx.once(a())?, be(), c()),
                contractional_accepted(psi, be(), c()),
            ))
        }),
        IC8 | IC9 | IC10 | IC11 => {
            let guard = match p {
                IC8 => a().union(c()).is_full(),
                IC9 => c().is_subset(a()),
                IC10 => be().union(c()).is_full(),
                _ => c().is_subset(be()),
            };
            guarded(guard, || {
                let ab = a().union(be());
                let left = sub(&*ctx.once(a())?, &*ctx.once(&ab)?);
                let right = sub(&*ctx.twice(c(), a())?, &*ctx.twice(c(), &ab)?);
                Ok(match p {
                    IC8 | IC9 => left == right,
                    IC10 => implies(right, left),
                    _ => implies(left, right),
                })
            })
        }
        DP1 | DP2 => {
            let guard = !a().is_empty()
                && !mu().is_empty()
                && if p == DP1 {
                    a().is_subset(mu())
                } else {
                    a().is_disjoint(mu())
                };
            guarded(guard, || {
                Ok(ctx.twice(mu(), a())?.belief_models() == ctx.once(a())?.belief_models())
            })
        }
        DP3 | DP4 => {
            if a().is_empty() || mu().is_empty() {
                return Ok(Outcome::Vacuous);
            }
            let single = ctx.once(a())?;
            if p == DP3 {
                guarded(single.believes_models(mu()), || {
                    Ok(ctx.twice(mu(), a())?.believes_models(mu()))
                })
            } else {
                let not_mu = mu().complement();
                guarded(!single.believes_models(&not_mu), || {
                    Ok(!ctx.twice(mu(), a())?.believes_models(&not_mu))
                })
            }
        }
        DP1Cond | DP2Cond => {
            let guard = !mu().is_empty()
                && if p == DP1Cond {
                    a().is_subset(mu())
                } else {
                    a().is_disjoint(mu())
                };
            guarded(guard, || {
                Ok(conditional_accepted(psi, a(), be())
                    == conditional_accepted(&*ctx.once(mu())?, a(), be()))
            })
        }
        DP3Cond => guarded(
            !mu().is_empty() && conditional_accepted(psi, a(), mu()),
            || Ok(conditional_accepted(&*ctx.once(mu())?, a(), mu())),
        ),
        DP4Cond => {
            let not_mu = mu().complement();
            guarded(
                !mu().is_empty() && !conditional_accepted(psi, a(), &not_mu),
                || Ok(!conditional_accepted(&*ctx.once(mu())?, a(), &not_mu)),
            )
        }
        CR8 | CR9 | CR10 | CR11 | RR8 | RR9 | RR10 | RR11 => {
            if revision && a().is_empty() {
                return Ok(Outcome::Vacuous);
            }
            let (x, y) = (w1(), w2());
            let (in1, in2) = (a().contains(x), a().contains(y));
            let guard = match p {
                CR8 | RR8 => in1 && in2,
                CR9 | RR9 => !in1 && !in2,
                CR10 | CR11 => !in1 && in2,
                _ => in1 && !in2,
            };
            guarded(guard, || {
                let post = ctx.once(a())?;
                Ok(match p {
                    CR8 | CR9 | RR8 | RR9 => {
                        psi.leq(x, y) == post.leq(x, y) && psi.leq(y, x) == post.leq(y, x)
                    }
                    CR10 | RR10 => implies(psi.less(x, y), post.less(x, y)),
                    _ => implies(psi.leq(x, y), post.leq(x, y)),
                })
            })
        }
    }
}
