//! One PASS/FAIL line per acceptance criterion, with pinned time bounds.
//!
//! `cargo test --test acceptance` runs criteria 1-8. The 8-world
//! enumeration (7b) is opt-in: `cargo test --test acceptance -- --ignored`.
//! Set `IBC_ACCEPTANCE_VERBOSE=1` to print every report in full.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ibc_core::lab::*;
use ibc_core::logic::Signature;
use ibc_core::DEFAULT_SEED;

const TABLE1_BOUND: Duration = Duration::from_secs(1);
const BASE_BOUND: Duration = Duration::from_secs(5);
const ITERATION_BOUND: Duration = Duration::from_secs(60);
const LONG_ENUMERATION_BOUND: Duration = Duration::from_secs(120);
const CN_SAMPLES: u64 = 1000;

struct Line {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn sig(n: usize) -> Arc<Signature> {
    Arc::new(Signature::standard(n).expect("standard signature"))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn failing(r: &LabReport) -> String {
    let names: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if names.is_empty() {
        String::new()
    } else {
        format!("; failing: {}", names.join(" | "))
    }
}

fn summary(r: &LabReport) -> String {
    let passed = r.checks.iter().filter(|c| c.passed).count();
    let instances: u64 = r.checks.iter().map(|c| c.instances).sum();
    format!("{passed}/{} checks, {instances} instances{}", r.checks.len(), failing(r))
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

struct Suite {
    lines: Vec<Line>,
    reports: Vec<(&'static str, LabReport)>,
    verbose: bool,
}

impl Suite {
    fn record(&mut self, id: &'static str, title: &'static str, passed: bool, detail: String) {
        let line = Line {
            id,
            title,
            passed,
            detail,
        };
        println!(
            "{}  {:<3} {}: {}",
            if line.passed { "PASS" } else { "FAIL" },
            line.id,
            line.title,
            line.detail
        );
        self.lines.push(line);
    }

    /// Records a lab report, optionally under a wall-clock bound.
    fn report(
        &mut self,
        id: &'static str,
        title: &'static str,
        bound: Option<Duration>,
        run: impl FnOnce() -> Result<LabReport, LabError>,
    ) {
        let (result, elapsed) = timed(run);
        match result {
            Ok(r) => {
                let in_time = bound.is_none_or(|b| elapsed < b);
                let timing = match bound {
                    Some(b) => format!("{} (bound {})", secs(elapsed), secs(b)),
                    None => secs(elapsed),
                };
                if self.verbose || !r.passed() {
                    print!("{}", r.to_text());
                }
                self.record(id, title, r.passed() && in_time, format!("{}, {timing}", summary(&r)));
                self.reports.push((id, r));
            }
            Err(e) => self.record(id, title, false, format!("error: {e}")),
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let long = args.iter().any(|a| a == "--ignored" || a == "--include-ignored");
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut suite = Suite {
        lines: Vec::new(),
        reports: Vec::new(),
        verbose: std::env::var_os("IBC_ACCEPTANCE_VERBOSE").is_some(),
    };

    suite.report("1", "worked trace reproduced, C9PRIME refuted, C9 and CR9 intact", Some(TABLE1_BOUND), reproduce_table1);
    suite.report("2", "single-step postulates and representation at 2 atoms", Some(BASE_BOUND), || {
        verify_base(sig(2), 1)
    });
    suite.report("3", "iteration postulates at 2 atoms, single-threaded", Some(ITERATION_BOUND), || {
        verify_iteration(sig(2), 1)
    });
    suite.report("4", "representation theorem, forward and reverse", None, || {
        verify_theorem1(sig(2), Theorem1Budget { jobs, ..Default::default() })
    });
    suite.report("5", "acceptance correspondences at 2 atoms", None, || verify_acceptance(sig(2)));
    suite.report("6", "α-equivalence: example, consequence sets, relation", None, || {
        let mut r = verify_alpha_equivalence(sig(2))?;
        r.absorb(verify_cn_formulation(sig(3), CN_SAMPLES, DEFAULT_SEED)?);
        Ok(r)
    });
    suite.report("7", "enumeration counts for 1, 2 and 4 worlds", None, || verify_enumeration(&[1, 2, 4]));
    if long {
        suite.report("7b", "enumeration count for 8 worlds", Some(LONG_ENUMERATION_BOUND), || {
            verify_enumeration(&[8])
        });
    } else {
        println!("SKIP  7b  enumeration count for 8 worlds: opt-in, pass --ignored");
    }

    // Criteria 2-6 rest on exhaustive checks at two atoms and sampling at
    // three; each of their reports must say so.
    let scoped = suite
        .reports
        .iter()
        .filter(|(id, r)| ["2", "3", "4", "5", "6"].contains(id) && r.notes.iter().any(|n| n == SCOPE_NOTE))
        .count();
    suite.record(
        "8",
        "scope of the checks stated in the reports",
        scoped == 5,
        format!("{scoped}/5 reports carry the note"),
    );

    let failed = suite.lines.iter().filter(|l| !l.passed).count();
    println!("{} criteria, {failed} failed", suite.lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
