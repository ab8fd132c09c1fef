//! State-file format:
//!
//! ```text
//! sig: a b
//! 0: 11
//! 1: 10 01 00
//! ```
//!
//! Blank lines and `#` comments are ignored. Layers must appear in rank order.

use std::sync::Arc;

use super::{EpistemicState, StateError};
use crate::logic::{Signature, WorldSet};

fn parse_err(line: usize, message: impl Into<String>) -> StateError {
    StateError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_state(text: &str) -> Result<EpistemicState, StateError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty state file"))?;
    let atoms = header
        .strip_prefix("sig:")
        .ok_or_else(|| parse_err(line_no, "expected `sig: <atom> ...`"))?;
    let sig = Arc::new(Signature::parse(atoms)?);

    let mut layers = Vec::new();
    for (line_no, line) in lines {
        let (rank, worlds) = line
            .split_once(':')
            .ok_or_else(|| parse_err(line_no, "expected `<rank>: <bitstring> ...`"))?;
        let rank: usize = rank
            .trim()
            .parse()
            .map_err(|_| parse_err(line_no, format!("invalid rank `{}`", rank.trim())))?;
        if rank != layers.len() {
            return Err(parse_err(
                line_no,
                format!("expected rank {}, found {rank}", layers.len()),
            ));
        }
        let mut layer = WorldSet::empty(sig.world_count());
        for token in worlds.split_whitespace() {
            let w = sig.parse_world(token).ok_or_else(|| {
                parse_err(
                    line_no,
                    format!("`{token}` is not a {}-bit world", sig.len()),
                )
            })?;
            layer.insert(w);
        }
        layers.push(layer);
    }
    EpistemicState::from_layers(sig, layers)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::states::fixtures::worked_psi;
    use crate::states::random_state;

    #[test]
    fn worked_state_file() {
        let text = "sig: a b\n0: 11\n1: 10 01 00\n";
        let s = parse_state(text).unwrap();
        assert_eq!(s, worked_psi());
        assert_eq!(s.to_text(), text);
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = parse_state("# prior\nsig: a b\n\n0: 11   # believed\n1: 10 01 00\n").unwrap();
        assert_eq!(s, worked_psi());
    }

    #[test]
    fn malformed_files() {
        for (text, line) in [
            ("", 1),
            ("0: 11", 1),
            ("sig: a b\n0 11", 2),
            ("sig: a b\n1: 11", 2),
            ("sig: a b\n0: 11\n1: 10 01 0", 3),
            ("sig: a b\nx: 11", 2),
        ] {
            match parse_state(text) {
                Err(StateError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
        assert!(matches!(
            parse_state("sig: a b\n0: 11\n1: 10 01"),
            Err(StateError::InvalidPartition(_))
        ));
        assert!(matches!(
            parse_state("sig: a b\n0: 11\n1: 11 10 01 00"),
            Err(StateError::InvalidPartition(_))
        ));
        assert!(matches!(parse_state("sig: a a\n0: 11"), Err(StateError::Logic(_))));
    }

    proptest! {
        #[test]
        fn save_load_round_trip(atoms in 1usize..=5, seed in any::<u64>()) {
            let sig = Arc::new(Signature::standard(atoms).unwrap());
            let s = random_state(sig, seed);
            let back = parse_state(&s.to_text()).unwrap();
            prop_assert_eq!(back.ranks(), s.ranks());
            prop_assert_eq!(back, s);
        }
    }
}
