use std::fmt;

use super::{LogicError, World, WorldSet};

/// Largest supported number of atoms; keeps a world-set at 65536 bits.
pub const MAX_ATOMS: usize = 16;

/// An ordered, finite set of propositional atoms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    atoms: Vec<String>,
    masks: Vec<WorldSet>,
}

fn valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && name != "top"
        && name != "bot"
}

impl Signature {
    pub fn new<I, S>(atoms: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(LogicError::EmptySignature);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(LogicError::TooManyAtoms(atoms.len()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if !valid_atom_name(a) {
                return Err(LogicError::InvalidAtomName(a.clone()));
            }
            if atoms[..i].contains(a) {
                return Err(LogicError::DuplicateAtom(a.clone()));
            }
        }
        let width = 1usize << atoms.len();
        let masks = (0..atoms.len())
            .map(|i| {
                WorldSet::from_worlds(
                    width,
                    (0..width as u32).map(World::new).filter(|w| w.holds(i)),
                )
            })
            .collect();
        Ok(Signature { atoms, masks })
    }

    /// Whitespace-separated atom names, e.g. `"a b"`.
    pub fn parse(text: &str) -> Result<Self, LogicError> {
        Signature::new(text.split_whitespace())
    }

    /// The first `n` letters of the alphabet: `a`, `b`, `c`, ...
    pub fn standard(n: usize) -> Result<Self, LogicError> {
        if n > MAX_ATOMS {
            return Err(LogicError::TooManyAtoms(n));
        }
        Signature::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `|Ω| = 2^|atoms|`.
    pub fn world_count(&self) -> usize {
        1 << self.atoms.len()
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    /// Worlds in which the atom at `index` is true.
    pub fn atom_models(&self, index: usize) -> &WorldSet {
        &self.masks[index]
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (0..self.world_count() as u32).map(World::new)
    }

    /// Human-readable literal form of a world, e.g. `a -b`.
    pub fn pretty_world(&self, w: World) -> String {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if w.holds(i) {
                    a.clone()
                } else {
                    format!("-{a}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_world(&self, text: &str) -> Option<World> {
        World::from_bitstring(text, self.len())
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Signature").field(&self.atoms).finish()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.atoms.join(" "))
    }
}
