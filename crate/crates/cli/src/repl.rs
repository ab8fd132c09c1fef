use std::fs;
use std::io::{BufRead, IsTerminal, Write};

use ibc_core::change::{
    accepts_conditional, accepts_contractional, natural_contraction, natural_revision, Conditional,
    Contractional,
};
use ibc_core::logic::{formula_from_worldset, parse_formula, Formula};
use ibc_core::states::EpistemicState;

use crate::Failure;

const HELP: &str = "\
commands:
  show                  print the current state
  contract <f>          contract by f
  revise <f>            revise by f
  ask-cond <a> <b>      is the conditional (b | a) accepted?
  ask-contr <a> <b>     is the contractional (b <= a) accepted?
  beliefs               models of the current beliefs and a formula for them
  undo                  restore the previous state
  save <path>           write the current state file
  quit                  leave
Formulas containing spaces go in double quotes when a command takes two.";

/// A current state with the history of states it was reached from.
pub struct Session {
    current: EpistemicState,
    history: Vec<EpistemicState>,
}

impl Session {
    pub fn new(initial: EpistemicState) -> Self {
        Session {
            current: initial,
            history: Vec::new(),
        }
    }

    pub fn current(&self) -> &EpistemicState {
        &self.current
    }

    pub fn depth(&self) -> usize {
        self.history.len()
    }

    fn parse(&self, text: &str) -> Result<Formula, String> {
        parse_formula(text, self.current.signature()).map_err(|e| format!("`{text}`: {e}"))
    }

    fn push(&mut self, next: EpistemicState) {
        let prev = std::mem::replace(&mut self.current, next);
        self.history.push(prev);
    }

    pub fn contract(&mut self, f: &str) -> Result<(), String> {
        let f = self.parse(f)?;
        let next = natural_contraction(&self.current, &f).map_err(|e| e.to_string())?;
        self.push(next);
        Ok(())
    }

    pub fn revise(&mut self, f: &str) -> Result<(), String> {
        let f = self.parse(f)?;
        let next = natural_revision(&self.current, &f).map_err(|e| e.to_string())?;
        self.push(next);
        Ok(())
    }

    /// Returns false when there is nothing to undo.
    pub fn undo(&mut self) -> bool {
        match self.history.pop() {
            Some(prev) => {
                self.current = prev;
                true
            }
            None => false,
        }
    }

    pub fn ask_conditional(&self, alpha: &str, beta: &str) -> Result<bool, String> {
        let c = Conditional {
            antecedent: self.parse(alpha)?,
            consequent: self.parse(beta)?,
        };
        accepts_conditional(&self.current, &c).map_err(|e| e.to_string())
    }

    pub fn ask_contractional(&self, alpha: &str, beta: &str) -> Result<bool, String> {
        let c = Contractional {
            removed: self.parse(alpha)?,
            kept: self.parse(beta)?,
        };
        accepts_contractional(&self.current, &c).map_err(|e| e.to_string())
    }
}

/// Splits on whitespace, keeping double-quoted runs together.
fn split_args(line: &str) -> Result<Vec<String>, String> {
    let mut args = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut arg = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some(c) => arg.push(c),
                    None => return Err("unterminated quote".into()),
                }
            }
            args.push(arg);
        } else {
            let mut arg = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                arg.push(c);
                chars.next();
            }
            args.push(arg);
        }
    }
    Ok(args)
}

fn verdict(accepted: bool) -> &'static str {
    if accepted {
        "accepted"
    } else {
        "rejected"
    }
}

/// Runs one command line. Returns `Ok(false)` on quit.
fn step(session: &mut Session, line: &str, out: &mut dyn Write) -> std::io::Result<bool> {
    let line = line.trim();
    let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
    let rest = rest.trim();
    let two = |rest: &str| -> Result<(String, String), String> {
        match split_args(rest)?.as_slice() {
            [a, b] => Ok((a.clone(), b.clone())),
            _ => Err("expected two formulas".into()),
        }
    };
    let result: Result<(), String> = match cmd {
        "" => Ok(()),
        "quit" | "exit" => return Ok(false),
        "help" => {
            writeln!(out, "{HELP}")?;
            Ok(())
        }
        "show" => {
            write!(out, "{}", session.current().to_text())?;
            Ok(())
        }
        "contract" | "revise" if rest.is_empty() => Err(format!("usage: {cmd} <formula>")),
        "contract" | "revise" => {
            let r = if cmd == "contract" {
                session.contract(rest)
            } else {
                session.revise(rest)
            };
            if r.is_ok() {
                write!(out, "{}", session.current().layers_text())?;
            }
            r
        }
        "ask-cond" => two(rest)
            .and_then(|(a, b)| session.ask_conditional(&a, &b))
            .map(|v| writeln!(out, "{}", verdict(v)))
            .and_then(|r| r.map_err(|e| e.to_string())),
        "ask-contr" => two(rest)
            .and_then(|(a, b)| session.ask_contractional(&a, &b))
            .map(|v| writeln!(out, "{}", verdict(v)))
            .and_then(|r| r.map_err(|e| e.to_string())),
        "beliefs" => {
            let s = session.current();
            let bel = s.belief_models();
            writeln!(out, "models: {}", bel.to_bitstrings(s.signature().len()))?;
            writeln!(out, "formula: {}", formula_from_worldset(bel, s.signature()))?;
            Ok(())
        }
        "undo" => {
            if session.undo() {
                write!(out, "{}", session.current().layers_text())?;
                Ok(())
            } else {
                Err("nothing to undo".into())
            }
        }
        "save" if rest.is_empty() => Err("usage: save <path>".into()),
        "save" => fs::write(rest, session.current().to_text()).map_err(|e| format!("{rest}: {e}")),
        other => Err(format!("unknown command `{other}`; try `help`")),
    };
    if let Err(e) = result {
        writeln!(out, "error: {e}")?;
    }
    Ok(true)
}

/// Reads commands from `input` until `quit` or end of input. A prompt is
/// shown only when standard input is a terminal.
pub fn run_repl(mut session: Session, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), Failure> {
    let prompt = std::io::stdin().is_terminal();
    write!(out, "{}", session.current().to_text())?;
    let mut line = String::new();
    loop {
        if prompt {
            write!(out, "ibc> ")?;
            out.flush()?;
        }
        line.clear();
        if input.read_line(&mut line)? == 0 || !step(&mut session, &line, out)? {
            return Ok(());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ibc_core::states::parse_state;

    fn psi() -> EpistemicState {
        parse_state("sig: a b\n0: 11\n1: 10 01 00\n").unwrap()
    }

    #[test]
    fn session_history() {
        let mut s = Session::new(psi());
        s.contract("a").unwrap();
        s.contract("a | b").unwrap();
        assert_eq!(s.depth(), 2);
        assert_eq!(s.current().layers_text(), "0: 11 01 00\n1: 10\n");
        assert!(s.undo() && s.undo());
        assert_eq!(s.current(), &psi());
        assert!(!s.undo());
        assert!(s.revise("bot").is_err());
        assert_eq!(s.depth(), 0);
    }

    #[test]
    fn quoted_arguments() {
        assert_eq!(split_args(r#""a | b" b"#).unwrap(), vec!["a | b", "b"]);
        assert_eq!(split_args("a  b").unwrap(), vec!["a", "b"]);
        assert!(split_args("\"a").is_err());
    }

    #[test]
    fn scripted_session() {
        let script = "contract a\nask-contr a b\nask-cond \"!a\" b\nbeliefs\nundo\nundo\nfrob\nquit\nshow\n";
        let mut out = Vec::new();
        run_repl(Session::new(psi()), &mut script.as_bytes(), &mut out).unwrap();
        let out = String::from_utf8(out).unwrap();
        let want = "sig: a b\n0: 11\n1: 10 01 00\n\
                    0: 11 01 00\n1: 10\n\
                    rejected\n\
                    rejected\n\
                    models: 11 01 00\nformula: a & b | !a & b | !a & !b\n\
                    0: 11\n1: 10 01 00\n\
                    error: nothing to undo\n\
                    error: unknown command `frob`; try `help`\n";
        assert_eq!(out, want);
    }
}
