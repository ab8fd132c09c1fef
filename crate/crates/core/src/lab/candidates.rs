use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::LabError;
use crate::change::{ChangeError, ChangeKind, ChangeOperator};
use crate::logic::{Formula, Signature, WorldSet};
use crate::states::{enumerate_states, EpistemicState};

/// Largest world count for which posteriors are enumerated.
pub const CANDIDATE_WORLD_LIMIT: usize = 4;

/// The four order-preservation constraints relating a prior and the
/// posterior of a contraction by α.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CrConstraint {
    CR8,
    CR9,
    CR10,
    CR11,
}

impl CrConstraint {
    pub const ALL: [CrConstraint; 4] = [
        CrConstraint::CR8,
        CrConstraint::CR9,
        CrConstraint::CR10,
        CrConstraint::CR11,
    ];

    /// All constraints except `self`.
    pub fn others(self) -> Vec<CrConstraint> {
        Self::ALL.into_iter().filter(|&c| c != self).collect()
    }

    /// Whether `post` relates to `prior` as required, for every world pair.
    pub fn holds(self, prior: &EpistemicState, post: &EpistemicState, alpha: &WorldSet) -> bool {
        let sig = prior.signature();
        sig.worlds().all(|w1| {
            sig.worlds().all(|w2| {
                let (in1, in2) = (alpha.contains(w1), alpha.contains(w2));
                match self {
                    CrConstraint::CR8 if in1 && in2 => prior.leq(w1, w2) == post.leq(w1, w2),
                    CrConstraint::CR9 if !in1 && !in2 => prior.leq(w1, w2) == post.leq(w1, w2),
                    CrConstraint::CR10 if !in1 && in2 => !prior.less(w1, w2) || post.less(w1, w2),
                    CrConstraint::CR11 if !in1 && in2 => !prior.leq(w1, w2) || post.leq(w1, w2),
                    _ => true,
                }
            })
        })
    }
}

impl fmt::Display for CrConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn check_size(sig: &Signature) -> Result<(), LabError> {
    if sig.world_count() > CANDIDATE_WORLD_LIMIT {
        return Err(LabError::TooLarge(format!(
            "posterior enumeration needs at most {CANDIDATE_WORLD_LIMIT} worlds, got {}",
            sig.world_count()
        )));
    }
    Ok(())
}

/// Layer 0 every AGM contraction of `s` by α must produce.
fn required_bottom(s: &EpistemicState, alpha: &WorldSet) -> WorldSet {
    s.belief_models().union(&s.min_worlds(&alpha.complement()))
}

fn filter_candidates<'a>(
    s: &'a EpistemicState,
    alpha: &'a WorldSet,
    constraints: &'a [CrConstraint],
    all: &'a [EpistemicState],
) -> impl Iterator<Item = &'a EpistemicState> + 'a {
    let bottom = required_bottom(s, alpha);
    all.iter().filter(move |t| {
        t.belief_models() == &bottom && constraints.iter().all(|c| c.holds(s, t, alpha))
    })
}

/// Every total preorder that can follow `s` after contracting by `a` under an
/// AGM contraction satisfying the selected constraints.
pub fn posterior_candidates(
    s: &EpistemicState,
    a: &Formula,
    constraints: &[CrConstraint],
) -> Result<Vec<EpistemicState>, LabError> {
    let alpha = a.models(s.signature())?;
    posterior_candidates_models(s, &alpha, constraints)
}

pub fn posterior_candidates_models(
    s: &EpistemicState,
    alpha: &WorldSet,
    constraints: &[CrConstraint],
) -> Result<Vec<EpistemicState>, LabError> {
    check_size(s.signature())?;
    let all: Vec<EpistemicState> = enumerate_states(s.signature_arc().clone())?.collect();
    Ok(filter_candidates(s, alpha, constraints, &all).cloned().collect())
}

/// How [`TableOperator::assemble`] picks one posterior per cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableChoice {
    /// Uniformly among the candidates.
    Uniform,
    /// Uniformly among candidates violating the given constraint where
    /// there are any, otherwise uniformly.
    Violating(CrConstraint),
}

/// A contraction operator given by a lookup table from (prior state,
/// input model class) to posterior, covering every state of a signature.
pub struct TableOperator {
    name: String,
    index: HashMap<EpistemicState, usize>,
    /// `cells[state index][input class]`.
    cells: Vec<Vec<EpistemicState>>,
    violating_cells: usize,
}

impl TableOperator {
    pub fn assemble(
        sig: Arc<Signature>,
        constraints: &[CrConstraint],
        choice: TableChoice,
        seed: u64,
    ) -> Result<Self, LabError> {
        check_size(&sig)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<EpistemicState> = enumerate_states(sig.clone())?.collect();
        let classes = 1u64 << sig.world_count();
        let mut cells = Vec::with_capacity(states.len());
        let mut violating_cells = 0;
        for s in &states {
            let mut row = Vec::with_capacity(classes as usize);
            for class in 0..classes {
                let alpha = WorldSet::from_class(sig.world_count(), class);
                let pool: Vec<&EpistemicState> =
                    filter_candidates(s, &alpha, constraints, &states).collect();
                let preferred: Vec<&EpistemicState> = match choice {
                    TableChoice::Uniform => Vec::new(),
                    TableChoice::Violating(c) => {
                        pool.iter().copied().filter(|t| !c.holds(s, t, &alpha)).collect()
                    }
                };
                let from = if preferred.is_empty() { &pool } else { &preferred };
                violating_cells += usize::from(!preferred.is_empty());
                let post = from
                    .choose(&mut rng)
                    .expect("the natural contraction is always a candidate");
                row.push((*post).clone());
            }
            cells.push(row);
        }
        let constraint_names: Vec<String> = constraints.iter().map(|c| c.to_string()).collect();
        let name = match choice {
            TableChoice::Uniform => format!(
                "table contraction ({}; seed {seed})",
                constraint_names.join(", ")
            ),
            TableChoice::Violating(c) => format!(
                "table contraction ({}; violating {c}; seed {seed})",
                constraint_names.join(", ")
            ),
        };
        let index = states.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(TableOperator {
            name,
            index,
            cells,
            violating_cells,
        })
    }

    /// Number of cells filled with a posterior violating the constraint
    /// named in [`TableChoice::Violating`].
    pub fn violating_cells(&self) -> usize {
        self.violating_cells
    }

    /// Canonical content of the table, for comparing operators.
    pub fn fingerprint(&self) -> Vec<(Vec<u32>, u64, Vec<u32>)> {
        let mut out = Vec::new();
        for (s, &i) in &self.index {
            for (c, t) in self.cells[i].iter().enumerate() {
                out.push((s.ranks().to_vec(), c as u64, t.ranks().to_vec()));
            }
        }
        out.sort();
        out
    }
}

impl ChangeOperator for TableOperator {
    fn kind(&self) -> ChangeKind {
        ChangeKind::Contraction
    }

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn apply(&self, state: &EpistemicState, input: &WorldSet) -> Result<EpistemicState, ChangeError> {
        let class = input.class().expect("tables cover at most 4 worlds");
        let i = self.index[state];
        Ok(self.cells[i][class as usize].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::change::contract_models;
    use crate::logic::parse_formula;
    use crate::states::fixtures::{sig_ab, state, worked_psi};

    #[test]
    fn natural_contraction_is_always_a_candidate() {
        let sig = sig_ab();
        for s in enumerate_states(sig.clone()).unwrap() {
            for class in 0..16 {
                let alpha = WorldSet::from_class(4, class);
                let cands = posterior_candidates_models(&s, &alpha, &CrConstraint::ALL).unwrap();
                assert!(cands.contains(&contract_models(&s, &alpha)));
            }
        }
    }

    #[test]
    fn worked_column_is_a_candidate() {
        let sig = sig_ab();
        let a = parse_formula("a", &sig).unwrap();
        let cands = posterior_candidates(&worked_psi(), &a, &CrConstraint::ALL).unwrap();
        assert!(cands.contains(&state(&sig, &["11 01 00", "10"])));
    }

    #[test]
    fn contraction_by_top_has_one_candidate() {
        let sig = sig_ab();
        let top = parse_formula("top", &sig).unwrap();
        for s in enumerate_states(sig).unwrap() {
            assert_eq!(posterior_candidates(&s, &top, &CrConstraint::ALL).unwrap(), vec![s]);
        }
    }

    #[test]
    fn dropping_cr9_admits_more() {
        let sig = sig_ab();
        // All ¬a worlds are minimal in the prior 11 < 10 01 00, so CR9 is idle there.
        let a = parse_formula("a", &sig).unwrap();
        let all = posterior_candidates(&worked_psi(), &a, &CrConstraint::ALL).unwrap();
        let fewer = posterior_candidates(&worked_psi(), &a, &CrConstraint::CR9.others()).unwrap();
        assert_eq!(all, fewer);

        let s = state(&sig, &["11", "10", "01", "00"]);
        let ab = parse_formula("a & b", &sig).unwrap();
        let all = posterior_candidates(&s, &ab, &CrConstraint::ALL).unwrap();
        let fewer = posterior_candidates(&s, &ab, &CrConstraint::CR9.others()).unwrap();
        assert_eq!((all.len(), fewer.len()), (1, 3));
        assert!(all.iter().all(|t| fewer.contains(t)));
    }

    #[test]
    fn too_large() {
        let sig = Arc::new(Signature::standard(3).unwrap());
        let s = EpistemicState::uniform(sig.clone());
        assert!(matches!(
            posterior_candidates_models(&s, &WorldSet::full(8), &CrConstraint::ALL),
            Err(LabError::TooLarge(_))
        ));
    }

    #[test]
    fn tables_are_seeded() {
        let a = TableOperator::assemble(sig_ab(), &CrConstraint::ALL, TableChoice::Uniform, 3).unwrap();
        let b = TableOperator::assemble(sig_ab(), &CrConstraint::ALL, TableChoice::Uniform, 3).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        let v = TableOperator::assemble(
            sig_ab(),
            &CrConstraint::CR9.others(),
            TableChoice::Violating(CrConstraint::CR9),
            3,
        )
        .unwrap();
        assert!(v.violating_cells() > 0);
    }
}
