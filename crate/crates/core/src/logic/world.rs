//! Worlds and bitset world-sets.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

/// A complete truth assignment. Bit `i` holds the truth value of atom `i`
/// in signature order, so the world index is also its position in the
/// world-set bitset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct World(u32);

impl World {
    pub const fn new(index: u32) -> Self {
        World(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    /// Truth value of the atom at position `atom`.
    pub fn holds(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }

    /// Parses a fixed-width bitstring; character `i` is atom `i`.
    pub fn from_bitstring(text: &str, width: usize) -> Option<World> {
        if text.len() != width || width > 16 {
            return None;
        }
        let mut index = 0u32;
        for (i, c) in text.chars().enumerate() {
            match c {
                '1' => index |= 1 << i,
                '0' => {}
                _ => return None,
            }
        }
        Some(World(index))
    }

    pub fn to_bitstring(self, width: usize) -> String {
        (0..width)
            .map(|i| if self.holds(i) { '1' } else { '0' })
            .collect()
    }

    /// Sort key that lists worlds in truth-table order (`11`, `10`, `01`, `00`):
    /// ascending key means descending bitstring.
    pub fn table_key(self, width: usize) -> u32 {
        let mut reversed = 0u32;
        for i in 0..width {
            if !self.holds(i) {
                reversed |= 1 << (width - 1 - i);
            }
        }
        reversed
    }
}

/// A subset of the worlds of one signature, stored as a flat bitset.
///
/// `width` is the number of worlds (`2^|atoms|`); all binary operations
/// expect both operands to share it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WorldSet {
    width: u32,
    words: SmallVec<[u64; 2]>,
}

fn word_count(width: u32) -> usize {
    (width as usize).div_ceil(64)
}

impl WorldSet {
    pub fn empty(width: usize) -> Self {
        let width = width as u32;
        WorldSet {
            width,
            words: smallvec![0; word_count(width)],
        }
    }

    pub fn full(width: usize) -> Self {
        let mut set = WorldSet::empty(width);
        for w in set.words.iter_mut() {
            *w = u64::MAX;
        }
        set.trim();
        set
    }

    /// The world-set whose bitset, read as an integer, equals `class`.
    /// Only defined for at most 64 worlds.
    pub fn from_class(width: usize, class: u64) -> Self {
        assert!(width <= 64, "class encoding needs at most 64 worlds");
        let mut set = WorldSet::empty(width);
        set.words[0] = class;
        set.trim();
        set
    }

    pub fn from_worlds<I: IntoIterator<Item = World>>(width: usize, worlds: I) -> Self {
        let mut set = WorldSet::empty(width);
        for w in worlds {
            set.insert(w);
        }
        set
    }

    /// Integer value of the bitset, when it fits in a `u64`.
    pub fn class(&self) -> Option<u64> {
        (self.width <= 64).then(|| self.words[0])
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    fn trim(&mut self) {
        let rem = self.width % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn contains(&self, w: World) -> bool {
        let i = w.index() as usize;
        i < self.width as usize && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, w: World) {
        let i = w.index() as usize;
        assert!(i < self.width as usize, "world {i} out of range");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, w: World) {
        let i = w.index() as usize;
        if i < self.width as usize {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == WorldSet::full(self.width as usize)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn zip_with(&self, other: &WorldSet, f: impl Fn(u64, u64) -> u64) -> WorldSet {
        debug_assert_eq!(self.width, other.width);
        WorldSet {
            width: self.width,
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> WorldSet {
        let mut set = WorldSet {
            width: self.width,
            words: self.words.iter().map(|w| !w).collect(),
        };
        set.trim();
        set
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &WorldSet) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & b == 0)
    }

    /// Worlds in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = World> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros();
                rest &= rest - 1;
                Some(World::new(wi as u32 * 64 + bit))
            })
        })
    }

    /// Worlds in truth-table order (`11`, `10`, `01`, `00` for two atoms).
    pub fn display_order(&self, atoms: usize) -> Vec<World> {
        let mut worlds: Vec<World> = self.iter().collect();
        worlds.sort_by_key(|w| w.table_key(atoms));
        worlds
    }

    /// Space-separated bitstrings in truth-table order.
    pub fn to_bitstrings(&self, atoms: usize) -> String {
        self.display_order(atoms)
            .into_iter()
            .map(|w| w.to_bitstring(atoms))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|w| w.index())).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstring_round_trip() {
        let w = World::from_bitstring("10", 2).unwrap();
        assert!(w.holds(0));
        assert!(!w.holds(1));
        assert_eq!(w.to_bitstring(2), "10");
        assert_eq!(World::from_bitstring("1", 2), None);
        assert_eq!(World::from_bitstring("1x", 2), None);
    }

    #[test]
    fn truth_table_order() {
        let all = WorldSet::full(4);
        assert_eq!(all.to_bitstrings(2), "11 10 01 00");
    }

    #[test]
    fn set_algebra() {
        let a = WorldSet::from_class(4, 0b0011);
        let b = WorldSet::from_class(4, 0b0110);
        assert_eq!(a.union(&b).class(), Some(0b0111));
        assert_eq!(a.intersection(&b).class(), Some(0b0010));
        assert_eq!(a.difference(&b).class(), Some(0b0001));
        assert_eq!(a.complement().class(), Some(0b1100));
        assert!(a.intersection(&b).is_subset(&a));
        assert!(a.difference(&b).is_disjoint(&b));
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn wide_sets_trim_and_iterate() {
        let full = WorldSet::full(130);
        assert_eq!(full.len(), 130);
        assert!(full.complement().is_empty());
        let mut s = WorldSet::empty(130);
        s.insert(World::new(129));
        s.insert(World::new(3));
        assert_eq!(s.iter().map(World::index).collect::<Vec<_>>(), vec![3, 129]);
        assert!(!s.contains(World::new(200)));
    }
}
