//! Acceptance suite. Each test checks one criterion, prints a single
//! `criterion N: PASS|FAIL` line and asserts. Indented detail lines are
//! shown for failures, or for everything with `--nocapture`.
//!
//! Run with `cargo test -p tdqmf-core --test acceptance -- --nocapture
//! --test-threads 1` to see the report in order.

mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use common::gen::{self, RawQbpa};
use tdqmf_core::datasets::{phase_distance, reproduce, App, Stage, Status};
use tdqmf_core::decision::decide_ranking;
use tdqmf_core::io::Evidence;
use tdqmf_core::{
    combine_pair, decide, pipeline, rank, DecisionPolicy, Error, Qbpa, QuantumAmplitude, ReliabilityQbpa,
    Tdqmf,
};

const CASES: u32 = 256;

/// Written to the stdout handle rather than through `println!`, so the line
/// shows up even when the harness captures output of passing tests.
fn verdict(criterion: u8, ok: bool, summary: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {criterion}: {status} ({summary})").unwrap();
}

fn polar_of(a: QuantumAmplitude) -> String {
    format!("{:.4}e^{{{:.4}j}}", a.psi(), a.theta())
}

#[test]
fn criterion_1_worked_derivation() {
    let evidence = App::TargetRecognition.evidence();
    let modified = evidence.tdqmfs[0].modify();
    let printed: [(&[&str], f64, f64); 5] = [
        (&["x1"], 1.0493, 1.2172),
        (&["x2"], 1.0708, 1.2290),
        (&["x3"], 1.0024, 1.1736),
        (&["x1", "x2"], 0.1565, 1.3038),
        (&["x1", "x2", "x3"], 0.3162, 0.3217),
    ];
    let mut misses = Vec::new();
    for (names, psi, theta) in printed {
        let p = evidence.frame.proposition(names).unwrap();
        let a = modified.get(p);
        let ok = (a.psi() - psi).abs() <= 2e-3 && phase_distance(a.theta(), theta) <= 2e-3;
        println!(
            "  {:<10} printed {psi:.4}e^{{{theta:.4}j}}  computed {}  {}",
            evidence.name_of(p),
            polar_of(a),
            if ok { "ok" } else { "OUT" }
        );
        if !ok {
            misses.push(evidence.name_of(p));
        }
    }
    let ok = misses.is_empty();
    verdict(
        1,
        ok,
        &format!("{} of 5 printed values within 2e-3 / 2e-3 rad", 5 - misses.len()),
    );
    assert!(ok, "out of tolerance: {misses:?}");
}

#[test]
fn criterion_2_modified_tables() {
    let mut total = 0;
    let mut misses = Vec::new();
    for app in App::ALL {
        let rep = reproduce(app, None).unwrap();
        for c in rep.stage(Stage::Modified) {
            total += 1;
            if !c.within_tolerance() {
                println!(
                    "  {app} evidence {} {}: printed {:.4}e^{{{:.4}j}}  computed {:.4}e^{{{:.4}j}}",
                    c.evidence.unwrap() + 1,
                    c.proposition,
                    c.expected,
                    c.expected_phase.unwrap(),
                    c.actual,
                    c.actual_phase.unwrap()
                );
                misses.push(format!("{app} ev{} {}", c.evidence.unwrap() + 1, c.proposition));
            }
        }
    }

    // The three independently checked entries of the second case study.
    let evidence = App::StockDecision.evidence();
    let first = evidence.tdqmfs[0].modify();
    for (names, psi, theta) in [
        (&["P"][..], 1.0115, 1.4983),
        (&["S"], 0.8369, 1.4011),
        (&["P", "S", "D"], 0.5749, 0.5725),
    ] {
        let a = first.get(evidence.frame.proposition(names).unwrap());
        let ok = (a.psi() - psi).abs() <= 2e-3 && phase_distance(a.theta(), theta) <= 5e-3;
        println!(
            "  spot check {}: {} {}",
            names.join(""),
            polar_of(a),
            if ok { "ok" } else { "OUT" }
        );
        if !ok {
            misses.push(format!("spot check {}", names.join("")));
        }
    }

    let table_misses = misses.iter().filter(|m| !m.starts_with("spot")).count();
    let ok = misses.is_empty();
    verdict(
        2,
        ok,
        &format!(
            "{} of {total} printed modified entries within 2e-3 / 5e-3 rad",
            total - table_misses
        ),
    );
    assert!(ok, "out of tolerance: {misses:?}");
}

#[test]
fn criterion_3_normalization() {
    let mut invariant_failures = Vec::new();
    let mut misses = Vec::new();
    let mut total = 0;
    for app in App::ALL {
        let rep = reproduce(app, None).unwrap();
        for (i, (raw, norm)) in rep.run.modified.iter().zip(&rep.run.normalized).enumerate() {
            let sum_err = (norm.modulus_sum() - 1.0).abs();
            let phase_err = raw
                .focal()
                .map(|(p, a)| phase_distance(a.theta(), norm.get(p).theta()))
                .fold(0.0, f64::max);
            if sum_err > 1e-9 || phase_err > 1e-12 {
                invariant_failures.push(format!(
                    "{app} ev{}: |Σ−1| = {sum_err:e}, phase drift {phase_err:e}",
                    i + 1
                ));
            }
        }
        for c in rep.stage(Stage::Normalized) {
            total += 1;
            if !c.within_tolerance() {
                println!(
                    "  {app} evidence {} {}: printed {:.4}e^{{{:.4}j}}  computed {:.4}e^{{{:.4}j}}",
                    c.evidence.unwrap() + 1,
                    c.proposition,
                    c.expected,
                    c.expected_phase.unwrap(),
                    c.actual,
                    c.actual_phase.unwrap()
                );
                misses.push(format!("{app} ev{} {}", c.evidence.unwrap() + 1, c.proposition));
            }
        }
    }

    // The misprinted x2 entry of the first modified table must be flagged in
    // the reproduction report.
    let rep = reproduce(App::TargetRecognition, None).unwrap();
    let flagged = rep
        .stage(Stage::Modified)
        .any(|c| c.evidence == Some(0) && c.proposition == "x2" && c.status() == Status::Erratum);
    println!("  first-table x2 inconsistency flagged in report: {flagged}");
    for f in &invariant_failures {
        println!("  invariant: {f}");
    }

    let ok = invariant_failures.is_empty() && misses.is_empty() && flagged;
    verdict(
        3,
        ok,
        &format!(
            "unit sum and phase invariants {}; {} of {total} printed normalized entries within 2e-2 / 5e-2 rad",
            if invariant_failures.is_empty() { "hold" } else { "broken" },
            total - misses.len()
        ),
    );
    assert!(invariant_failures.is_empty(), "{invariant_failures:?}");
    assert!(flagged, "x2 erratum not reported");
    assert!(misses.is_empty(), "out of tolerance: {misses:?}");
}

#[test]
fn criterion_4_end_to_end() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for app in App::ALL {
        let rep = reproduce(app, None).unwrap();
        let worst = rep
            .stage(Stage::Moduli)
            .map(|c| c.magnitude_error())
            .fold(0.0, f64::max);
        let moduli: Vec<String> = rep
            .stage(Stage::Moduli)
            .map(|c| format!("{}={:.4}", c.proposition, c.actual))
            .collect();
        println!(
            "  {app}: selected {:?} (expected {}), moduli {}, worst deviation {worst:.4}",
            rep.selected,
            rep.expected_decision,
            moduli.join(" ")
        );
        if !rep.decision_matches() {
            failures.push(format!("{app}: selected {:?}", rep.selected));
        }
        if worst > 5e-2 {
            failures.push(format!("{app}: modulus deviation {worst}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        failures.push(format!("runtime {elapsed:?}"));
    }
    let ok = failures.is_empty();
    verdict(
        4,
        ok,
        &format!("4 decisions and final moduli within 5e-2, {elapsed:.2?}"),
    );
    assert!(ok, "{failures:?}");
}

fn dense_input(evidence: &Evidence) -> Vec<(common::Dense, common::Rel)> {
    let n = evidence.frame.len();
    evidence
        .tdqmfs
        .iter()
        .map(|t| {
            let mut q1 = common::Dense::zero(n);
            for (p, a) in t.original.iter() {
                q1.v[p.mask() as usize] = (a.re(), a.im());
            }
            let r = &t.indicative;
            let rel = (
                (r.yes().re(), r.yes().im()),
                (r.no().re(), r.no().im()),
                (r.undecided().re(), r.undecided().im()),
            );
            (q1, rel)
        })
        .collect()
}

fn component_gap(lib: &Qbpa, oracle: &common::Dense) -> f64 {
    (1..oracle.v.len())
        .map(|m| {
            let a = lib.get(tdqmf_core::Proposition::from_mask(m as u32));
            let (re, im) = oracle.v[m];
            (a.re() - re).abs().max((a.im() - im).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_5_oracle_equivalence() {
    let mut worst_overall: f64 = 0.0;
    for app in App::ALL {
        let evidence = app.evidence();
        let run = pipeline(&evidence.tdqmfs, DecisionPolicy::argmax()).unwrap();
        let oracle = common::run(&dense_input(&evidence));
        let mut worst: f64 = 0.0;
        for (lib, ora) in run.modified.iter().zip(&oracle.modified) {
            worst = worst.max(component_gap(lib, ora));
        }
        for (lib, ora) in run.normalized.iter().zip(&oracle.normalized) {
            worst = worst.max(component_gap(lib, ora));
        }
        worst = worst.max(component_gap(&run.combined, &oracle.combined));
        println!("  {app}: largest component gap {worst:.3e}");
        worst_overall = worst_overall.max(worst);
    }
    let ok = worst_overall <= 1e-9;
    verdict(
        5,
        ok,
        &format!("library matches brute-force reference, largest gap {worst_overall:.3e} <= 1e-9"),
    );
    assert!(ok);
}

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        max_global_rejects: 1 << 20,
        failure_persistence: None,
        ..Config::default()
    })
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn conflict_skip(e: Error) -> TestCaseError {
    match e {
        Error::TotalConflict { .. } => TestCaseError::reject("total conflict"),
        other => TestCaseError::fail(other.to_string()),
    }
}

fn prop_commutativity() -> Result<(), String> {
    runner()
        .run(&gen::qbpa_pair(), |(a, b)| {
            let (a, b) = (a.build(), b.build());
            let ab = combine_pair(&a, &b).map_err(conflict_skip)?;
            let ba = combine_pair(&b, &a).map_err(conflict_skip)?;
            let d = ab.max_abs_diff(&ba);
            if d > 1e-12 {
                return Err(fail(format!("Q1⊕Q2 and Q2⊕Q1 differ by {d:e}")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn prop_vacuous_identity() -> Result<(), String> {
    runner()
        .run(&gen::qbpa(), |q| {
            let q = q.build();
            let v = Qbpa::vacuous(q.frame().clone());
            for combined in [combine_pair(&q, &v), combine_pair(&v, &q)] {
                let d = combined.map_err(conflict_skip)?.max_abs_diff(&q);
                if d > 1e-12 {
                    return Err(fail(format!("vacuous combination moved Q by {d:e}")));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn prop_normalize() -> Result<(), String> {
    let strategy = (2usize..=4).prop_flat_map(|n| gen::raw_qbpa(n, 0.01..3.0, false));
    runner()
        .run(&strategy, |raw: RawQbpa| {
            let q = raw.build();
            let once = q.normalize_moduli().unwrap();
            let twice = once.normalize_moduli().unwrap();
            let sum_err = (once.modulus_sum() - 1.0).abs();
            let idem = twice.max_abs_diff(&once);
            if sum_err > 1e-9 || idem > 1e-9 {
                return Err(fail(format!("|Σ−1| = {sum_err:e}, second pass moved {idem:e}")));
            }
            for (p, a) in q.focal() {
                let d = phase_distance(a.theta(), once.get(p).theta());
                if d > 1e-12 {
                    return Err(fail(format!("phase moved by {d:e}")));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn prop_multiplicative() -> Result<(), String> {
    let amp = (1e-3f64..10.0, -PI..PI);
    runner()
        .run(&(amp.clone(), amp), |((pa, ta), (pb, tb))| {
            let a = QuantumAmplitude::from_polar(pa, ta).unwrap();
            let b = QuantumAmplitude::from_polar(pb, tb).unwrap();
            let ab = a * b;
            let expected = a.modulus() * b.modulus();
            let rel = (ab.modulus() - expected).abs() / expected;
            let phase = phase_distance(ab.theta(), a.theta() + b.theta());
            if rel > 1e-12 || phase > 1e-12 {
                return Err(fail(format!(
                    "relative modulus error {rel:e}, phase error {phase:e}"
                )));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn prop_embed_round_trip() -> Result<(), String> {
    runner()
        .run(&(0.0f64..=1.0), |m| {
            let a = QuantumAmplitude::embed_real(m).unwrap();
            let err = (a.modulus() - m).abs();
            if err > 1e-12 {
                return Err(fail(format!("embed_real({m}) has modulus error {err:e}")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn prop_rotation_invariance() -> Result<(), String> {
    runner()
        .run(&(gen::qbpa(), gen::reliability(), -PI..PI), |(raw, rel, phi)| {
            let q1 = raw.build();
            let rotation = QuantumAmplitude::from_polar(1.0, phi).unwrap();
            let rotated = q1.map_amplitudes(|a| a * rotation);
            let r = gen::build_reliability(&rel);
            let base = Tdqmf::new(q1.clone(), r.clone()).modify();
            let turned = Tdqmf::new(rotated, r).modify();
            for p in q1.frame().nonempty_propositions() {
                if q1.frame().is_universe(p) {
                    continue;
                }
                let d = (base.get(p).modulus() - turned.get(p).modulus()).abs();
                if d > 1e-12 {
                    return Err(fail(format!("modulus of {p:?} moved by {d:e}")));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Every nonempty intersection arises from exactly one focal pair.
fn unique_pairs(a: &RawQbpa, b: &RawQbpa) -> bool {
    let focal = |q: &RawQbpa| -> Vec<usize> {
        q.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_some())
            .map(|(i, _)| i + 1)
            .collect()
    };
    let mut seen = std::collections::HashSet::new();
    let mut any = false;
    for x in focal(a) {
        for y in focal(b) {
            if x & y != 0 {
                any = true;
                if !seen.insert(x & y) {
                    return false;
                }
            }
        }
    }
    any
}

fn prop_classical_equivalence() -> Result<(), String> {
    let sparse = |n: usize| {
        proptest::sample::subsequence((1..(1usize << n)).collect::<Vec<_>>(), 1..=3).prop_flat_map(
            move |subsets| {
                proptest::collection::vec(0.05f64..1.0, subsets.len()).prop_map(move |psis| {
                    let mut entries = vec![None; (1 << n) - 1];
                    for (&s, psi) in subsets.iter().zip(psis) {
                        entries[s - 1] = Some((psi, 0.0));
                    }
                    RawQbpa { n, entries }.normalized()
                })
            },
        )
    };
    let strategy = (2usize..=4)
        .prop_flat_map(move |n| (sparse(n), sparse(n)))
        .prop_filter("unique focal pairs", |(a, b)| unique_pairs(a, b));
    runner()
        .run(&strategy, |(a, b)| {
            let quantum = combine_pair(&a.build(), &b.build()).map_err(conflict_skip)?;
            let masses = |q: &RawQbpa| -> Vec<f64> { q.dense().v.iter().map(|&c| common::sq(c)).collect() };
            let classical = common::classical_dempster(&masses(&a), &masses(&b));
            for (m, &expected) in classical.iter().enumerate().skip(1) {
                let got = quantum
                    .get(tdqmf_core::Proposition::from_mask(m as u32))
                    .modulus();
                if (got - expected).abs() > 1e-9 {
                    return Err(fail(format!(
                        "mask {m:b}: quantum modulus {got}, classical mass {expected}"
                    )));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn prop_pignistic_reduction() -> Result<(), String> {
    runner()
        .run(&gen::qbpa(), |raw| {
            let q1 = raw.build();
            let modified = Tdqmf::new(q1.clone(), ReliabilityQbpa::trusted()).modify();
            let dense = raw.dense();
            for i in 0..raw.n {
                let x = 1usize << i;
                // Betting share: each focal set hands 1/|A| to every member.
                let mut expected = common::ZERO;
                for (a, &amp) in dense.v.iter().enumerate() {
                    if a & x != 0 {
                        expected = common::add(expected, common::scale(amp, 1.0 / a.count_ones() as f64));
                    }
                }
                let got = modified.get(tdqmf_core::Proposition::from_mask(x as u32));
                let d = (got.re() - expected.0).abs().max((got.im() - expected.1).abs());
                if d > 1e-9 {
                    return Err(fail(format!("singleton {i}: gap {d:e}")));
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn prop_argmax_scaling() -> Result<(), String> {
    runner()
        .run(&(gen::qbpa(), 1e-3f64..1e3), |(raw, c)| {
            let q = raw.build();
            let before = decide(&q, DecisionPolicy::argmax());
            let scaled = rank(&q).into_iter().map(|(p, m)| (p, m * c)).collect();
            let after = decide_ranking(scaled, DecisionPolicy::argmax());
            let order =
                |o: &tdqmf_core::DecisionOutcome| o.ranking.iter().map(|(p, _)| *p).collect::<Vec<_>>();
            if before.selected != after.selected || order(&before) != order(&after) {
                return Err(fail(format!("scaling by {c} changed the decision")));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

type Suite = fn() -> Result<(), String>;

#[test]
fn criterion_6_property_suites() {
    let suites: [(&str, Suite); 9] = [
        ("combine commutativity (1e-12)", prop_commutativity),
        ("vacuous identity (1e-12)", prop_vacuous_identity),
        ("normalize idempotence and unit sum (1e-9)", prop_normalize),
        (
            "modulus multiplicativity and phase additivity (1e-12)",
            prop_multiplicative,
        ),
        ("embed_real modulus round trip (1e-12)", prop_embed_round_trip),
        (
            "phase-rotation invariance of non-universe moduli (1e-12)",
            prop_rotation_invariance,
        ),
        (
            "classical Dempster equivalence (1e-9)",
            prop_classical_equivalence,
        ),
        (
            "pignistic reduction under full trust (1e-9)",
            prop_pignistic_reduction,
        ),
        ("argmax invariance under rescaling (exact)", prop_argmax_scaling),
    ];
    let mut failed = Vec::new();
    for (name, suite) in suites {
        match suite() {
            Ok(()) => println!("  {name}: {CASES} cases ok"),
            Err(e) => {
                println!("  {name}: {e}");
                failed.push(name);
            }
        }
    }
    let ok = failed.is_empty();
    verdict(
        6,
        ok,
        &format!("{} of 9 suites, {CASES} cases each", 9 - failed.len()),
    );
    assert!(ok, "failed suites: {failed:?}");
}

#[test]
fn criterion_7_threshold_policy() {
    let strict = DecisionPolicy::with_threshold(0.5).unwrap();
    let open = DecisionPolicy::with_threshold(0.0).unwrap();
    let mut failures = Vec::new();
    for app in App::ALL {
        let evidence = app.evidence();
        let high = pipeline(&evidence.tdqmfs, strict).unwrap().outcome;
        let low = pipeline(&evidence.tdqmfs, open).unwrap().outcome;
        let picked = low.selected.map(|p| evidence.name_of(p));
        println!(
            "  {app}: top modulus {:.4}; at 0.5 {:?}; at 0 {:?}",
            high.selected_modulus,
            high.selected.map(|p| evidence.name_of(p)),
            picked
        );
        if high.selected.is_some() {
            failures.push(format!("{app}: decision issued at 0.5"));
        }
        if picked.as_deref() != Some(app.golden().decision) {
            failures.push(format!("{app}: selected {picked:?} at 0"));
        }
    }
    let ok = failures.is_empty();
    verdict(7, ok, "no decision at 0.5, criterion 4 decisions at 0");
    assert!(ok, "{failures:?}");
}
