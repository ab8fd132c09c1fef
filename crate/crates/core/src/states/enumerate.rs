use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EpistemicState, StateError};
use crate::logic::Signature;

/// Largest `|Ω|` for which all ordered partitions are enumerated (545835 states).
pub const EXHAUSTIVE_WORLD_LIMIT: usize = 8;

/// Streams every contiguous rank vector of length `n` (each an ordered
/// partition of `n` elements) exactly once, in lexicographic order.
#[derive(Clone, Debug)]
pub struct RankVectors {
    ranks: Vec<u32>,
    started: bool,
    done: bool,
}

impl RankVectors {
    pub fn new(n: usize) -> Self {
        RankVectors {
            ranks: vec![0; n],
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.ranks.len();
        for i in (0..n).rev() {
            let (used, max) = prefix_usage(&self.ranks[..i]);
            for v in self.ranks[i] + 1..n as u32 {
                let (u, m) = (used | 1 << v, max.max(v));
                if completable(u, m, n - i - 1) {
                    self.ranks[i] = v;
                    self.fill_from(i + 1);
                    return true;
                }
            }
        }
        false
    }

    /// Fills positions `from..` with the lexicographically smallest completion.
    fn fill_from(&mut self, from: usize) {
        let n = self.ranks.len();
        for j in from..n {
            let (used, max) = prefix_usage(&self.ranks[..j]);
            let v = (0..n as u32)
                .find(|&v| completable(used | 1 << v, max.max(v), n - j - 1))
                .expect("a completion always exists");
            self.ranks[j] = v;
        }
    }

    /// Advances and returns the next rank vector without allocating.
    pub fn next_ranks(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.advance() {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        Some(&self.ranks)
    }
}

impl Iterator for RankVectors {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        self.next_ranks().map(<[u32]>::to_vec)
    }
}

/// Streams every ordered partition of Ω exactly once, as contiguous rank
/// vectors in lexicographic order. The first state is the single-layer one.
pub struct StateEnumerator {
    sig: Arc<Signature>,
    ranks: RankVectors,
}

/// Enumerates all epistemic states over `sig`; fails when `|Ω|` exceeds
/// [`EXHAUSTIVE_WORLD_LIMIT`].
pub fn enumerate_states(sig: Arc<Signature>) -> Result<StateEnumerator, StateError> {
    let worlds = sig.world_count();
    if worlds > EXHAUSTIVE_WORLD_LIMIT {
        return Err(StateError::TooLarge {
            worlds,
            limit: EXHAUSTIVE_WORLD_LIMIT,
        });
    }
    Ok(StateEnumerator {
        ranks: RankVectors::new(worlds),
        sig,
    })
}

/// Whether a prefix with rank-usage `used` and maximum `max` can still be
/// extended to a contiguous rank vector using `remaining` more positions.
fn completable(used: u32, max: u32, remaining: usize) -> bool {
    let wanted = if max == 31 { u32::MAX } else { (1u32 << (max + 1)) - 1 };
    ((wanted & !used).count_ones() as usize) <= remaining
}

fn prefix_usage(prefix: &[u32]) -> (u32, u32) {
    prefix
        .iter()
        .fold((0u32, 0u32), |(used, max), &r| (used | 1 << r, max.max(r)))
}

/// Number of ordered partitions of an `n`-element set (the Fubini number),
/// by `a(n) = Σ_{k=1..n} C(n,k) a(n-k)`. Exact up to `n = 20`.
pub fn ordered_partition_count(n: usize) -> u128 {
    let mut a = vec![1u128; n + 1];
    for m in 1..=n {
        let mut binom = 1u128;
        let mut sum = 0u128;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u128 / k as u128;
            sum += binom * a[m - k];
        }
        a[m] = sum;
    }
    a[n]
}

impl Iterator for StateEnumerator {
    type Item = EpistemicState;

    fn next(&mut self) -> Option<EpistemicState> {
        let ranks = self.ranks.next_ranks()?;
        Some(
            EpistemicState::from_ranks(self.sig.clone(), ranks)
                .expect("enumerator yields contiguous ranks"),
        )
    }
}

/// A state drawn from a seeded generator. Every ordered partition has
/// positive probability.
pub fn random_state(sig: Arc<Signature>, seed: u64) -> EpistemicState {
    random_state_with(sig, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_state_with<R: Rng + ?Sized>(sig: Arc<Signature>, rng: &mut R) -> EpistemicState {
    let n = sig.world_count() as u64;
    let scores: Vec<u64> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    EpistemicState::from_scores(sig, &scores)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    /// Ordered Bell numbers by brute force: count rank vectors in `0..n`
    /// whose image is an initial segment.
    fn brute_force_weak_orders(n: usize) -> usize {
        (0..(n as u32).pow(n as u32))
            .filter(|&code| {
                let mut used = vec![false; n];
                let mut c = code;
                for _ in 0..n {
                    used[(c % n as u32) as usize] = true;
                    c /= n as u32;
                }
                let top = used.iter().rposition(|&u| u).unwrap();
                used[..=top].iter().all(|&u| u)
            })
            .count()
    }

    #[test]
    fn enumeration_is_complete_and_duplicate_free() {
        for atoms in 1..=2 {
            let sig = Arc::new(Signature::standard(atoms).unwrap());
            let states: Vec<_> = enumerate_states(sig.clone()).unwrap().collect();
            let distinct: HashSet<_> = states.iter().cloned().collect();
            assert_eq!(states.len(), distinct.len());
            assert_eq!(states.len(), brute_force_weak_orders(sig.world_count()));
            for s in &states {
                assert!(s.check_faithful(s.belief_models()));
                assert!(s.layers().iter().all(|l| !l.is_empty()));
            }
        }
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let sig = Arc::new(Signature::standard(2).unwrap());
        let ranks: Vec<Vec<u32>> = enumerate_states(sig)
            .unwrap()
            .map(|s| s.ranks().to_vec())
            .collect();
        assert_eq!(ranks[0], vec![0, 0, 0, 0]);
        assert!(ranks.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn ordered_partition_counts() {
        let counts: Vec<u128> = (0..=8).map(ordered_partition_count).collect();
        assert_eq!(counts, [1, 1, 3, 13, 75, 541, 4683, 47293, 545835]);
        for n in 1..=5 {
            assert_eq!(ordered_partition_count(n), brute_force_weak_orders(n) as u128);
        }
    }

    #[test]
    fn rank_vectors_count_small_sets() {
        for n in 0..=5 {
            assert_eq!(RankVectors::new(n).count() as u128, ordered_partition_count(n));
        }
    }

    #[test]
    fn too_large() {
        let sig = Arc::new(Signature::standard(4).unwrap());
        assert!(matches!(
            enumerate_states(sig),
            Err(StateError::TooLarge { worlds: 16, limit: 8 })
        ));
    }

    #[test]
    fn random_states_are_seeded() {
        let sig = Arc::new(Signature::standard(3).unwrap());
        assert_eq!(random_state(sig.clone(), 7), random_state(sig.clone(), 7));
        let distinct: HashSet<_> = (0..50).map(|s| random_state(sig.clone(), s)).collect();
        assert!(distinct.len() > 40);
    }

    #[test]
    fn random_states_cover_all_orders_on_two_worlds() {
        let sig = Arc::new(Signature::standard(1).unwrap());
        let seen: HashSet<_> = (0..200).map(|s| random_state(sig.clone(), s)).collect();
        assert_eq!(seen.len(), 3);
    }
}
