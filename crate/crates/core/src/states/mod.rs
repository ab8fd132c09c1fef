//! Epistemic states as ranked total preorders over the worlds of a signature.
//!
//! A state *is* its plausibility order: rank 0 holds the most plausible
//! worlds, which are also the models of the belief set. Ranks are contiguous,
//! so two states are equal exactly when their orders are.

mod enumerate;
mod text;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::logic::{Formula, LogicError, Signature, World, WorldSet};

pub use enumerate::{enumerate_states, ordered_partition_count, random_state, random_state_with, RankVectors, StateEnumerator, EXHAUSTIVE_WORLD_LIMIT};
pub use text::parse_state;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("{worlds} worlds exceed the exhaustive enumeration limit of {limit}")]
    TooLarge { worlds: usize, limit: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// A ranked total preorder over all worlds of a signature.
#[derive(Clone)]
pub struct EpistemicState {
    sig: Arc<Signature>,
    rank: SmallVec<[u32; 8]>,
    layers: SmallVec<[WorldSet; 4]>,
}

impl EpistemicState {
    /// Builds a state from an ordered partition of Ω, most plausible first.
    pub fn from_layers(sig: Arc<Signature>, layers: Vec<WorldSet>) -> Result<Self, StateError> {
        let width = sig.world_count();
        let mut seen = WorldSet::empty(width);
        for (i, layer) in layers.iter().enumerate() {
            if layer.width() != width {
                return Err(StateError::InvalidPartition(format!(
                    "layer {i} is over {} worlds, signature has {width}",
                    layer.width()
                )));
            }
            if layer.is_empty() {
                return Err(StateError::InvalidPartition(format!("layer {i} is empty")));
            }
            if !layer.is_disjoint(&seen) {
                return Err(StateError::InvalidPartition(format!(
                    "layer {i} overlaps an earlier layer"
                )));
            }
            seen = seen.union(layer);
        }
        if !seen.is_full() {
            let missing = seen.complement().to_bitstrings(sig.len());
            return Err(StateError::InvalidPartition(format!(
                "worlds not ranked: {missing}"
            )));
        }
        let mut rank: SmallVec<[u32; 8]> = SmallVec::from_elem(0, width);
        for (i, layer) in layers.iter().enumerate() {
            for w in layer.iter() {
                rank[w.index() as usize] = i as u32;
            }
        }
        Ok(EpistemicState {
            sig,
            rank,
            layers: layers.into_iter().collect(),
        })
    }

    /// Builds a state from one rank per world (indexed by world), which
    /// must already be contiguous from 0.
    pub fn from_ranks(sig: Arc<Signature>, ranks: &[u32]) -> Result<Self, StateError> {
        if ranks.len() != sig.world_count() {
            return Err(StateError::InvalidPartition(format!(
                "{} ranks given for {} worlds",
                ranks.len(),
                sig.world_count()
            )));
        }
        let levels = ranks.iter().max().map_or(0, |m| m + 1);
        let mut hit = vec![false; levels as usize];
        for &r in ranks {
            hit[r as usize] = true;
        }
        if let Some(gap) = hit.iter().position(|h| !h) {
            return Err(StateError::InvalidPartition(format!("layer {gap} is empty")));
        }
        Ok(Self::from_ranks_unchecked(sig, ranks, levels as usize))
    }

    /// Compresses arbitrary non-negative scores into contiguous ranks,
    /// preserving their order.
    pub fn from_scores(sig: Arc<Signature>, scores: &[u64]) -> Self {
        assert_eq!(scores.len(), sig.world_count());
        let mut distinct: SmallVec<[u64; 8]> = scores.iter().copied().collect();
        distinct.sort_unstable();
        distinct.dedup();
        let ranks: SmallVec<[u32; 8]> = scores
            .iter()
            .map(|s| distinct.binary_search(s).expect("score present") as u32)
            .collect();
        Self::from_ranks_unchecked(sig, &ranks, distinct.len())
    }

    fn from_ranks_unchecked(sig: Arc<Signature>, ranks: &[u32], levels: usize) -> Self {
        let width = sig.world_count();
        let mut layers: SmallVec<[WorldSet; 4]> =
            (0..levels).map(|_| WorldSet::empty(width)).collect();
        for (w, &r) in ranks.iter().enumerate() {
            layers[r as usize].insert(World::new(w as u32));
        }
        EpistemicState {
            sig,
            rank: ranks.iter().copied().collect(),
            layers,
        }
    }

    /// The state with every world equally plausible.
    pub fn uniform(sig: Arc<Signature>) -> Self {
        let zeros = vec![0; sig.world_count()];
        Self::from_ranks_unchecked(sig, &zeros, 1)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn rank(&self, w: World) -> u32 {
        self.rank[w.index() as usize]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }

    pub fn layers(&self) -> &[WorldSet] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// `⟦Ψ⟧`: the rank-0 worlds.
    pub fn belief_models(&self) -> &WorldSet {
        &self.layers[0]
    }

    /// `Ψ ⊨ f`.
    pub fn believes(&self, f: &Formula) -> Result<bool, LogicError> {
        Ok(self.believes_models(&f.models(&self.sig)?))
    }

    pub fn believes_models(&self, models: &WorldSet) -> bool {
        self.belief_models().is_subset(models)
    }

    /// The minimal elements of `candidates` under this order; empty iff
    /// `candidates` is.
    pub fn min_worlds(&self, candidates: &WorldSet) -> WorldSet {
        self.layers
            .iter()
            .map(|layer| layer.intersection(candidates))
            .find(|hit| !hit.is_empty())
            .unwrap_or_else(|| WorldSet::empty(self.sig.world_count()))
    }

    /// `Less` encodes the strict order `w1 < w2`, `Equal` encodes `w1 ≃ w2`.
    pub fn compare(&self, w1: World, w2: World) -> Ordering {
        self.rank(w1).cmp(&self.rank(w2))
    }

    pub fn leq(&self, w1: World, w2: World) -> bool {
        self.rank(w1) <= self.rank(w2)
    }

    pub fn less(&self, w1: World, w2: World) -> bool {
        self.rank(w1) < self.rank(w2)
    }

    /// Checks both faithfulness conditions of the identity assignment against
    /// a claimed belief-model set: all of `bel` is equally plausible, and
    /// strictly more plausible than everything outside it.
    pub fn check_faithful(&self, bel: &WorldSet) -> bool {
        let inside: Vec<World> = bel.iter().collect();
        let Some(&first) = inside.first() else {
            return false;
        };
        let equal_inside = inside
            .iter()
            .all(|&w| self.compare(first, w) == Ordering::Equal);
        let below_outside = bel.complement().iter().all(|out| {
            inside.iter().all(|&w| self.less(w, out))
        });
        equal_inside && below_outside
    }

    /// Serializes to the line-oriented state-file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("sig: {}\n", self.sig);
        out.push_str(&self.layers_text());
        out
    }

    /// The `<rank>: <bitstring> ...` lines without the signature header.
    pub fn layers_text(&self) -> String {
        let mut out = String::new();
        for (i, layer) in self.layers.iter().enumerate() {
            out.push_str(&format!("{i}: {}\n", layer.to_bitstrings(self.sig.len())));
        }
        out
    }

    /// Single-line form, most plausible layer first: `11 < 10 01 00`.
    pub fn compact(&self) -> String {
        let layers: Vec<String> = self
            .layers
            .iter()
            .map(|l| l.to_bitstrings(self.sig.len()))
            .collect();
        layers.join(" < ")
    }

    /// Layers with worlds written as literals, e.g. `0: a b`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (i, layer) in self.layers.iter().enumerate() {
            let worlds: Vec<String> = layer
                .display_order(self.sig.len())
                .into_iter()
                .map(|w| format!("[{}]", self.sig.pretty_world(w)))
                .collect();
            out.push_str(&format!("{i}: {}\n", worlds.join(" ")));
        }
        out
    }
}

impl PartialEq for EpistemicState {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && (Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig)
    }
}

impl Eq for EpistemicState {}

impl Hash for EpistemicState {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
    }
}

impl fmt::Debug for EpistemicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let layers: Vec<String> = self
            .layers
            .iter()
            .map(|l| format!("{{{}}}", l.to_bitstrings(self.sig.len())))
            .collect();
        write!(f, "EpistemicState[{}]", layers.join(" < "))
    }
}

impl fmt::Display for EpistemicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A belief set, represented by the models of its deductive closure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BeliefSet {
    pub model_set: WorldSet,
}

impl BeliefSet {
    pub fn of(state: &EpistemicState) -> Self {
        BeliefSet {
            model_set: state.belief_models().clone(),
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::logic::parse_formula;

    #[test]
    fn belief_models_examples() {
        let sig = sig_ab();
        assert_eq!(worked_psi().belief_models(), &ws(&sig, "11"));
        assert!(EpistemicState::uniform(sig.clone()).belief_models().is_full());
        let contracted = state(&sig, &["11 00", "10 01"]);
        assert_eq!(contracted.belief_models(), &ws(&sig, "11 00"));
    }

    #[test]
    fn believes_examples() {
        let sig = sig_ab();
        let psi = worked_psi();
        assert!(psi.believes(&parse_formula("a&b", &sig).unwrap()).unwrap());
        assert!(psi.believes(&Formula::Top).unwrap());
        let contracted = state(&sig, &["11 00", "10 01"]);
        assert!(contracted.believes(&parse_formula("a<->b", &sig).unwrap()).unwrap());
        assert!(!contracted.believes(&parse_formula("a", &sig).unwrap()).unwrap());
    }

    #[test]
    fn min_worlds_examples() {
        let sig = sig_ab();
        let psi = worked_psi();
        assert_eq!(psi.min_worlds(&ws(&sig, "01 00")), ws(&sig, "01 00"));
        assert!(psi.min_worlds(&WorldSet::empty(4)).is_empty());
        assert_eq!(psi.min_worlds(&WorldSet::full(4)), *psi.belief_models());
    }

    #[test]
    fn compare_examples() {
        let sig = sig_ab();
        let psi = worked_psi();
        let w = |b: &str| sig.parse_world(b).unwrap();
        assert_eq!(psi.compare(w("11"), w("10")), Ordering::Less);
        assert_eq!(psi.compare(w("10"), w("10")), Ordering::Equal);
        assert_eq!(psi.compare(w("01"), w("00")), Ordering::Equal);
        assert_eq!(psi.compare(w("00"), w("11")), Ordering::Greater);
    }

    #[test]
    fn from_layers_rejects_bad_partitions() {
        let sig = sig_ab();
        let bad = |layers: &[&str]| {
            EpistemicState::from_layers(sig.clone(), layers.iter().map(|l| ws(&sig, l)).collect())
        };
        assert!(matches!(bad(&["11", "11 10 01 00"]), Err(StateError::InvalidPartition(_))));
        assert!(matches!(bad(&["11", "10 01"]), Err(StateError::InvalidPartition(_))));
        assert!(matches!(bad(&["11", "", "10 01 00"]), Err(StateError::InvalidPartition(_))));
        assert!(matches!(bad(&[]), Err(StateError::InvalidPartition(_))));
    }

    #[test]
    fn from_ranks_requires_contiguity() {
        let sig = sig_ab();
        assert!(EpistemicState::from_ranks(sig.clone(), &[0, 2, 2, 2]).is_err());
        assert!(EpistemicState::from_ranks(sig.clone(), &[0, 1]).is_err());
        let s = EpistemicState::from_ranks(sig.clone(), &[1, 1, 1, 0]).unwrap();
        assert_eq!(s, worked_psi());
    }

    #[test]
    fn from_scores_compresses() {
        let sig = sig_ab();
        let s = EpistemicState::from_scores(sig.clone(), &[7, 7, 7, 2]);
        assert_eq!(s, worked_psi());
    }

    #[test]
    fn faithfulness_examples() {
        let sig = sig_ab();
        let psi = worked_psi();
        assert!(psi.check_faithful(&ws(&sig, "11")));
        assert!(!psi.check_faithful(&ws(&sig, "10")));
        assert!(!psi.check_faithful(&ws(&sig, "11 10")));
        assert!(!psi.check_faithful(&WorldSet::empty(4)));
        let flat = EpistemicState::uniform(sig.clone());
        assert!(flat.check_faithful(&WorldSet::full(4)));
    }
}
