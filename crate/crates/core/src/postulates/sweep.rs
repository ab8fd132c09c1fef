use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{
    binding_from_models, check_kind, evaluate, ModelBinding, Outcome, PostulateError,
    PostulateId, Posteriors, Var, Verdict,
};
use crate::change::ChangeOperator;
use crate::logic::{Signature, World, WorldSet};
use crate::states::{
    enumerate_states, ordered_partition_count, random_state_with, EpistemicState,
};

/// Upper bound on the number of instances an exhaustive sweep may visit.
pub const MAX_EXHAUSTIVE_INSTANCES: u128 = 1 << 30;

/// States handed to the worker pool at a time.
const CHUNK: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Exhaustive => f.write_str("exhaustive"),
            Strategy::Random { samples, seed } => write!(f, "random ({samples} samples, seed {seed})"),
        }
    }
}

fn millis<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

#[derive(Clone, Debug, Serialize)]
pub struct PostulateReport {
    pub postulate: PostulateId,
    pub statement: &'static str,
    pub operator: String,
    pub signature: Vec<String>,
    pub strategy: Strategy,
    /// Size of the quantification domain in exhaustive mode.
    pub domain: Option<u128>,
    pub instances_checked: u64,
    pub vacuous: u64,
    pub verdict: Verdict,
    #[serde(rename = "elapsed_ms", serialize_with = "millis")]
    pub elapsed: Duration,
}

impl PostulateReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "postulate  {}: {}", self.postulate, self.statement);
        let _ = writeln!(out, "operator   {}", self.operator);
        let _ = writeln!(out, "signature  {}", self.signature.join(" "));
        let _ = writeln!(out, "strategy   {}", self.strategy);
        let _ = writeln!(
            out,
            "instances  {} checked, {} vacuous",
            self.instances_checked, self.vacuous
        );
        let _ = writeln!(out, "elapsed    {:.1} ms", self.elapsed.as_secs_f64() * 1e3);
        let _ = writeln!(
            out,
            "verdict    {}",
            if self.verdict.holds { "holds" } else { "counterexample found" }
        );
        if let Some(w) = &self.verdict.witness {
            let n = w.state.signature().len();
            out.push_str("witness\n");
            for line in w.state.to_text().lines() {
                let _ = writeln!(out, "  {line}");
            }
            for (var, f) in w.formulas() {
                let _ = writeln!(out, "  {var} = {f}");
            }
            for (var, world) in w.worlds() {
                let _ = writeln!(out, "  {var} = {}", world.to_bitstring(n));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

impl fmt::Display for PostulateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Outcome of one unit of work: all instances of one prior state, or one
/// random sample.
struct Tally {
    checked: u64,
    vacuous: u64,
    failure: Option<(EpistemicState, ModelBinding)>,
}

struct Domain {
    formula_vars: Vec<Var>,
    world_vars: usize,
    classes: u64,
    worlds: u64,
}

impl Domain {
    fn new(p: PostulateId, worlds: usize) -> Self {
        let formula_vars: Vec<Var> = p.arity().iter().copied().filter(|v| v.is_formula()).collect();
        Domain {
            world_vars: p.arity().len() - formula_vars.len(),
            formula_vars,
            classes: 1u64 << worlds,
            worlds: worlds as u64,
        }
    }

    fn per_state(&self) -> u128 {
        (self.classes as u128).pow(self.formula_vars.len() as u32)
            * (self.worlds as u128).pow(self.world_vars as u32)
    }

    /// The `index`-th binding, first variable most significant.
    fn decode(&self, mut index: u64, width: usize) -> ModelBinding {
        let mut digits = [0u64; 6];
        let radices: Vec<u64> = self
            .formula_vars
            .iter()
            .map(|_| self.classes)
            .chain((0..self.world_vars).map(|_| self.worlds))
            .collect();
        for (slot, radix) in radices.iter().enumerate().rev() {
            digits[slot] = index % radix;
            index /= radix;
        }
        let mut m = ModelBinding::default();
        for (slot, &var) in self.formula_vars.iter().enumerate() {
            *m.formula_mut(var) = Some(WorldSet::from_class(width, digits[slot]));
        }
        let k = self.formula_vars.len();
        if self.world_vars == 2 {
            m.w1 = Some(World::new(digits[k] as u32));
            m.w2 = Some(World::new(digits[k + 1] as u32));
        }
        m
    }
}

fn run_state(p: PostulateId, op: &dyn ChangeOperator, domain: &Domain, state: &EpistemicState) -> Result<Tally, PostulateError> {
    let width = state.signature().world_count();
    let ctx = Posteriors::new(op, state);
    let total = domain.per_state() as u64;
    let mut tally = Tally {
        checked: 0,
        vacuous: 0,
        failure: None,
    };
    for index in 0..total {
        let m = domain.decode(index, width);
        tally.checked += 1;
        match evaluate(p, &ctx, &m)? {
            Outcome::Holds => {}
            Outcome::Vacuous => tally.vacuous += 1,
            Outcome::Fails => {
                tally.failure = Some((state.clone(), m));
                break;
            }
        }
    }
    Ok(tally)
}

fn random_set<R: Rng>(width: usize, rng: &mut R) -> WorldSet {
    WorldSet::from_worlds(width, (0..width as u32).filter(|_| rng.gen()).map(World::new))
}

fn run_sample(
    p: PostulateId,
    op: &dyn ChangeOperator,
    sig: &Arc<Signature>,
    seed: u64,
    sample: u64,
) -> Result<Tally, PostulateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    let width = sig.world_count();
    let state = random_state_with(sig.clone(), &mut rng);
    let mut m = ModelBinding::default();
    for &var in p.arity() {
        match var {
            Var::W1 => m.w1 = Some(World::new(rng.gen_range(0..width as u32))),
            Var::W2 => m.w2 = Some(World::new(rng.gen_range(0..width as u32))),
            _ => *m.formula_mut(var) = Some(random_set(width, &mut rng)),
        }
    }
    let ctx = Posteriors::new(op, &state);
    let outcome = evaluate(p, &ctx, &m)?;
    Ok(Tally {
        checked: 1,
        vacuous: u64::from(outcome == Outcome::Vacuous),
        failure: (outcome == Outcome::Fails).then_some((state, m)),
    })
}

/// Runs `work` over `units` in chunks, in parallel when `pool` is given, and
/// folds the results in unit order up to the first failure.
fn fold_units<U, F>(
    units: impl Iterator<Item = U>,
    pool: Option<&rayon::ThreadPool>,
    work: F,
) -> Result<Tally, PostulateError>
where
    U: Send + Sync,
    F: Fn(&U) -> Result<Tally, PostulateError> + Sync,
{
    let mut total = Tally {
        checked: 0,
        vacuous: 0,
        failure: None,
    };
    let mut units = units.peekable();
    while units.peek().is_some() {
        let chunk: Vec<U> = units.by_ref().take(CHUNK).collect();
        let results: Vec<Result<Tally, PostulateError>> = match pool {
            Some(pool) => pool.install(|| chunk.par_iter().map(&work).collect()),
            None => chunk.iter().map(&work).collect(),
        };
        for r in results {
            let t = r?;
            total.checked += t.checked;
            total.vacuous += t.vacuous;
            if t.failure.is_some() {
                total.failure = t.failure;
                return Ok(total);
            }
        }
    }
    Ok(total)
}

/// Checks `p` for `op` over every (or a sample of every) instance on `sig`.
pub fn sweep(
    p: PostulateId,
    op: &dyn ChangeOperator,
    sig: Arc<Signature>,
    strategy: Strategy,
) -> Result<PostulateReport, PostulateError> {
    sweep_with(p, op, sig, strategy, 1)
}

/// [`sweep`] on `jobs` worker threads. The report is identical for every
/// `jobs` value apart from the elapsed time.
pub fn sweep_with(
    p: PostulateId,
    op: &dyn ChangeOperator,
    sig: Arc<Signature>,
    strategy: Strategy,
    jobs: usize,
) -> Result<PostulateReport, PostulateError> {
    check_kind(p, op)?;
    let start = Instant::now();
    let width = sig.world_count();
    let pool = if jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| PostulateError::TooLarge {
                    reason: format!("cannot start {jobs} workers: {e}"),
                })?,
        )
    } else {
        None
    };

    let (tally, domain_size) = match strategy {
        Strategy::Exhaustive => {
            let max_atoms = if p.formula_arity() >= 3 { 2 } else { 3 };
            if sig.len() > max_atoms {
                return Err(PostulateError::TooLarge {
                    reason: format!(
                        "{p} binds {} formulas; exhaustive sweeps allow at most {max_atoms} atoms, got {}",
                        p.formula_arity(),
                        sig.len()
                    ),
                });
            }
            let domain = Domain::new(p, width);
            let size = ordered_partition_count(width) * domain.per_state();
            if size > MAX_EXHAUSTIVE_INSTANCES {
                return Err(PostulateError::TooLarge {
                    reason: format!(
                        "{size} instances exceed the limit of {MAX_EXHAUSTIVE_INSTANCES}; use sampling"
                    ),
                });
            }
            let states = enumerate_states(sig.clone())?;
            let tally = fold_units(states, pool.as_ref(), |s| run_state(p, op, &domain, s))?;
            (tally, Some(size))
        }
        Strategy::Random { samples, seed } => {
            let tally = fold_units(0..samples, pool.as_ref(), |&i| run_sample(p, op, &sig, seed, i))?;
            (tally, None)
        }
    };

    let verdict = match &tally.failure {
        None => Verdict::holds(),
        Some((state, m)) => Verdict {
            holds: false,
            vacuous: false,
            witness: Some(binding_from_models(state, m)),
        },
    };
    Ok(PostulateReport {
        postulate: p,
        statement: p.statement(),
        operator: op.describe(),
        signature: sig.atoms().to_vec(),
        strategy,
        domain: domain_size,
        instances_checked: tally.checked,
        vacuous: tally.vacuous,
        verdict,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::change::{NaturalContraction, NaturalRevision};
    use crate::postulates::check_instance;

    fn sig(n: usize) -> Arc<Signature> {
        Arc::new(Signature::standard(n).unwrap())
    }

    #[test]
    fn c1_holds_over_full_domain() {
        let r = sweep(PostulateId::C1, &NaturalContraction, sig(2), Strategy::Exhaustive).unwrap();
        assert!(r.verdict.holds);
        assert_eq!(r.instances_checked, 75 * 16);
        assert_eq!(r.domain, Some(75 * 16));
        assert_eq!(r.vacuous, 0);
    }

    #[test]
    fn c9prime_fails_with_rechecking_witness() {
        let r = sweep(PostulateId::C9Prime, &NaturalContraction, sig(2), Strategy::Exhaustive).unwrap();
        assert!(!r.verdict.holds);
        let w = r.verdict.witness.unwrap();
        let again = check_instance(PostulateId::C9Prime, &NaturalContraction, &w).unwrap();
        assert!(!again.holds);
        assert!(r.instances_checked < 75 * 256);
    }

    #[test]
    fn dp2_holds_for_revision() {
        let r = sweep(PostulateId::DP2, &NaturalRevision, sig(2), Strategy::Exhaustive).unwrap();
        assert!(r.verdict.holds);
        assert_eq!(r.instances_checked, 75 * 256);
        assert!(r.vacuous > 0);
    }

    #[test]
    fn budget_guard() {
        for (p, n) in [(PostulateId::IC8, 3), (PostulateId::C1, 4), (PostulateId::C8, 3)] {
            assert!(matches!(
                sweep(p, &NaturalContraction, sig(n), Strategy::Exhaustive),
                Err(PostulateError::TooLarge { .. })
            ));
        }
        assert!(matches!(
            sweep(PostulateId::DP1, &NaturalContraction, sig(2), Strategy::Exhaustive),
            Err(PostulateError::WrongOperatorKind { .. })
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        for strategy in [Strategy::Exhaustive, Strategy::Random { samples: 3000, seed: 9 }] {
            let a = sweep_with(PostulateId::C9Prime, &NaturalContraction, sig(2), strategy, 1).unwrap();
            let b = sweep_with(PostulateId::C9Prime, &NaturalContraction, sig(2), strategy, 4).unwrap();
            assert_eq!(a.instances_checked, b.instances_checked);
            assert_eq!(a.vacuous, b.vacuous);
            assert_eq!(a.verdict, b.verdict);
        }
    }

    #[test]
    fn random_sweeps_are_seeded() {
        let run = |seed| {
            sweep(PostulateId::C9Prime, &NaturalContraction, sig(3), Strategy::Random { samples: 20_000, seed })
                .unwrap()
        };
        let (a, b) = (run(5), run(5));
        assert_eq!(a.verdict, b.verdict);
        assert_eq!(a.instances_checked, b.instances_checked);
        assert!(!a.verdict.holds);
    }

    #[test]
    fn report_formats() {
        let r = sweep(PostulateId::C9Prime, &NaturalContraction, sig(2), Strategy::Exhaustive).unwrap();
        let text = r.to_text();
        assert!(text.contains("counterexample found"));
        assert!(text.contains("  sig: a b"));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["postulate"], "C9PRIME");
        assert_eq!(json["strategy"]["mode"], "exhaustive");
        assert_eq!(json["verdict"]["holds"], false);
        assert!(json["verdict"]["witness"]["state"].as_str().unwrap().starts_with("sig: a b"));
    }
}
