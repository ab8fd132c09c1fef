use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;

use super::{CrConstraint, LabError, LabReport, TableChoice, TableOperator};
use crate::change::ChangeOperator;
use crate::logic::Signature;
use crate::postulates::{sweep, PostulateId, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theorem1Budget {
    /// Compliant operators assembled for the forward direction.
    pub operators: usize,
    /// Sampled instances per postulate in the reverse direction.
    pub reverse_samples: u64,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for Theorem1Budget {
    fn default() -> Self {
        Theorem1Budget {
            operators: 100,
            reverse_samples: 10_000,
            seed: crate::DEFAULT_SEED,
            jobs: 1,
        }
    }
}

const FORWARD: [PostulateId; 16] = {
    use PostulateId::*;
    [
        C8, C9, C10, C11, C8Cond, C9Cond, C10Cond, C11Cond, IC8, IC9, IC10, IC11, CR8, CR9, CR10,
        CR11,
    ]
};

fn cr_postulate(c: CrConstraint) -> PostulateId {
    match c {
        CrConstraint::CR8 => PostulateId::CR8,
        CrConstraint::CR9 => PostulateId::CR9,
        CrConstraint::CR10 => PostulateId::CR10,
        CrConstraint::CR11 => PostulateId::CR11,
    }
}

/// Exhaustive sweeps of `ps`; returns the failing postulates and the
/// number of instances visited.
fn exhaustive(
    op: &dyn ChangeOperator,
    sig: &Arc<Signature>,
    ps: &[PostulateId],
) -> Result<(Vec<PostulateId>, u64), LabError> {
    let mut failing = Vec::new();
    let mut instances = 0;
    for &p in ps {
        let r = sweep(p, op, sig.clone(), Strategy::Exhaustive)?;
        instances += r.instances_checked;
        if !r.verdict.holds {
            failing.push(p);
        }
    }
    Ok((failing, instances))
}

fn names(ps: &[PostulateId]) -> String {
    if ps.is_empty() {
        return "none".into();
    }
    ps.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
}

/// Checks the equivalence of the syntactic, contractional, intended
/// iteration and order-based postulate groups on assembled operators.
///
/// Forward: operators drawn from all-constraint posterior tables pass every
/// iteration postulate exhaustively. Reverse: for each single dropped
/// constraint, an operator violating it is assembled and the sweep engine
/// must find a violation of the matching syntactic pair within
/// `reverse_samples` sampled instances.
pub fn verify_theorem1(sig: Arc<Signature>, budget: Theorem1Budget) -> Result<LabReport, LabError> {
    if sig.len() > 2 {
        return Err(LabError::TooLarge(format!(
            "operator tables are assembled for at most 2 atoms, got {}",
            sig.len()
        )));
    }
    let mut report = LabReport::new(format!(
        "Extended representation theorem over {{{}}}",
        sig.atoms().join(", ")
    ));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(budget.jobs.max(1))
        .build()
        .map_err(|e| LabError::TooLarge(format!("cannot start {} workers: {e}", budget.jobs)))?;

    report.run("forward: CR-compliant tables satisfy all iteration postulates", || {
        let results: Vec<Result<(Vec<PostulateId>, u64, _), LabError>> = pool.install(|| {
            (0..budget.operators)
                .into_par_iter()
                .map(|i| {
                    let seed = budget.seed.wrapping_add(i as u64);
                    let op = TableOperator::assemble(
                        sig.clone(),
                        &CrConstraint::ALL,
                        TableChoice::Uniform,
                        seed,
                    )?;
                    let (failing, n) = exhaustive(&op, &sig, &FORWARD)?;
                    Ok((failing, n, op.fingerprint()))
                })
                .collect()
        });
        let mut instances = 0;
        let mut distinct = HashSet::new();
        let mut bad = Vec::new();
        for (i, r) in results.into_iter().enumerate() {
            let (failing, n, fp) = r?;
            instances += n;
            distinct.insert(fp);
            if !failing.is_empty() {
                bad.push(format!("operator {i} fails {}", names(&failing)));
            }
        }
        let mut detail = format!(
            "{} operators ({} distinct tables), {} postulates each, exhaustive",
            budget.operators,
            distinct.len(),
            FORWARD.len()
        );
        for b in &bad {
            detail.push('\n');
            detail.push_str(b);
        }
        Ok((bad.is_empty(), instances, detail))
    })?;

    for dropped in CrConstraint::ALL {
        let op = TableOperator::assemble(
            sig.clone(),
            &dropped.others(),
            TableChoice::Violating(dropped),
            budget.seed,
        )?;
        let pair: [PostulateId; 2] = match dropped {
            CrConstraint::CR8 | CrConstraint::CR9 => [PostulateId::C8, PostulateId::C9],
            _ => [PostulateId::C10, PostulateId::C11],
        };

        report.run(format!("reverse: dropping {dropped} yields a violating operator"), || {
            let (failing, n) = exhaustive(&op, &sig, &[cr_postulate(dropped)])?;
            Ok((
                !failing.is_empty(),
                n,
                format!("{} violating table cells", op.violating_cells()),
            ))
        })?;

        report.run(
            format!("reverse: dropping {dropped} breaks {} or {}", pair[0], pair[1]),
            || {
                let mut instances = 0;
                let mut found = Vec::new();
                for p in pair {
                    let r = sweep(
                        p,
                        &op,
                        sig.clone(),
                        Strategy::Random {
                            samples: budget.reverse_samples,
                            seed: budget.seed,
                        },
                    )?;
                    instances += r.instances_checked;
                    if let Some(w) = r.verdict.witness {
                        found.push(format!("{p} fails after {} samples: {w}", r.instances_checked));
                    }
                }
                let passed = !found.is_empty();
                let detail = if passed {
                    found.join("\n")
                } else {
                    format!(
                        "budget exceeded: no violation within {} samples per postulate",
                        budget.reverse_samples
                    )
                };
                Ok((passed, instances, detail))
            },
        )?;

        if matches!(dropped, CrConstraint::CR10 | CrConstraint::CR11) {
            report.run(format!("reverse: dropping {dropped} keeps C1-C9 intact"), || {
                use PostulateId::*;
                let (failing, n) = exhaustive(&op, &sig, &[C1, C2, C3, C4, C5, C6, C7, C8, C9])?;
                Ok((failing.is_empty(), n, format!("failing: {}", names(&failing))))
            })?;
        }

        report.run(
            format!("reverse: dropping {dropped}, plain and contractional forms agree"),
            || {
                use PostulateId::*;
                let mut instances = 0;
                let mut mismatches = Vec::new();
                let mut verdicts = Vec::new();
                for (plain, cond) in [(C8, C8Cond), (C9, C9Cond), (C10, C10Cond), (C11, C11Cond)] {
                    let (fa, na) = exhaustive(&op, &sig, &[plain])?;
                    let (fb, nb) = exhaustive(&op, &sig, &[cond])?;
                    instances += na + nb;
                    let (ha, hb) = (fa.is_empty(), fb.is_empty());
                    verdicts.push(format!("{plain}={ha} {cond}={hb}"));
                    if ha != hb {
                        mismatches.push(plain);
                    }
                }
                Ok((mismatches.is_empty(), instances, verdicts.join(", ")))
            },
        )?;

        report.run(format!("reverse: dropping {dropped} breaks IC8-IC11"), || {
            use PostulateId::*;
            let (failing, n) = exhaustive(&op, &sig, &[IC8, IC9, IC10, IC11])?;
            Ok((!failing.is_empty(), n, format!("failing: {}", names(&failing))))
        })?;
    }

    report.notes.push(
        "Operators are lookup tables from (state, input class) to posterior, so each operator is \
         its own faithful assignment; the order-based conditions are checked on that assignment."
            .into(),
    );
    report.notes.push(super::SCOPE_NOTE.into());
    Ok(report)
}
