//! Acceptance criteria 1 to 10, run in order with one PASS/FAIL line each.
//! Runs without the libtest harness so every line is printed; exits 1 if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use burnside_core::report::{Status, VerificationReport};
use burnside_core::verify::{self, SuiteOptions};

fn suite(name: &str, opts: &SuiteOptions) -> VerificationReport {
    verify::run_suite(name, opts).unwrap_or_else(|e| panic!("suite {name}: {e}"))
}

fn failures(r: &VerificationReport) -> Vec<String> {
    r.records
        .iter()
        .filter(|x| x.status != Status::Pass)
        .map(|x| format!("{} [{}]: expected {}, computed {}", x.name, x.status.as_str(), x.expected, x.computed))
        .collect()
}

fn within(t: Duration, limit: Duration, what: &str) -> Vec<String> {
    if t < limit {
        Vec::new()
    } else {
        vec![format!("{what} took {t:?}, target {limit:?}")]
    }
}

fn criterion_01_idempotent_certification() -> Vec<String> {
    let t = Instant::now();
    let r = suite("idempotents", &SuiteOptions::default());
    let mut p = failures(&r);
    p.extend(within(t.elapsed(), Duration::from_secs(60), "certification"));
    if r.records.len() != 21 {
        p.push(format!("{} groups certified, expected 21", r.records.len()));
    }
    p
}

fn criterion_02_lin_on_idempotents() -> Vec<String> {
    let r = suite("linearization", &SuiteOptions::default());
    let mut p = failures(&r);
    for s in ["C2xC2", "C3xC3"] {
        if r.record(&format!("lin-kernel-dim/{s}")).is_none() {
            p.push(format!("no kernel dimension record for {s}"));
        }
    }
    p
}

fn criterion_03_biset_action_equivalence() -> Vec<String> {
    let r = suite("bisetactions", &SuiteOptions::default());
    let mut p = failures(&r);
    let def_tops = r.records.iter().filter(|x| x.name.starts_with("def-top/")).count();
    if def_tops != verify::abelian_up_to_32().len() {
        p.push(format!("{def_tops} deflation-diagonal records"));
    }
    for kind in ["res", "ind", "inf", "iso"] {
        if !r.records.iter().any(|x| x.name.starts_with(&format!("{kind}/"))) {
            p.push(format!("no {kind} records"));
        }
    }
    p
}

fn criterion_04_deflation_number_lemmas() -> Vec<String> {
    let r = suite("deflation-lemmas", &SuiteOptions::default());
    let mut p = failures(&r);
    for name in ["lemma-derived/D8", "lemma-derived/Q8", "lemma-derived/Hei3", "lemma-elementary/C5xC5xC5xC5"] {
        if r.record(name).is_none() {
            p.push(format!("missing {name}"));
        }
    }
    p
}

fn criterion_05_phi1_behaviour() -> Vec<String> {
    let r = suite("phi1", &SuiteOptions::default());
    let mut p = failures(&r);
    if r.records.len() != 12 {
        p.push(format!("{} records, expected 12", r.records.len()));
    }
    p
}

fn criterion_06_nonzero_kernel_sweep() -> Vec<String> {
    let t = Instant::now();
    let r = suite("theorem1", &SuiteOptions::default());
    let mut p = failures(&r);
    p.extend(within(t.elapsed(), Duration::from_secs(300), "sweep"));
    let nonzero: BTreeSet<String> = r
        .records
        .iter()
        .filter(|x| x.name.starts_with("kernel-nonzero/") && x.computed != "dim 0")
        .map(|x| x.name.trim_start_matches("kernel-nonzero/").to_string())
        .collect();
    let want: BTreeSet<String> = ["C2", "C4", "C8", "C16", "C2xC2", "C4xC2", "C8xC2", "C3", "C9", "C27", "C3xC3", "C9xC3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if nonzero != want {
        p.push(format!("nonzero kernels on {nonzero:?}"));
    }
    for s in ["D8", "Q8", "Hei3"] {
        match r.record(&format!("kernel-nonzero/{s}")) {
            Some(x) if x.computed == "dim 0" => {}
            other => p.push(format!("{s}: {:?}", other.map(|x| &x.computed))),
        }
    }
    p
}

fn criterion_07_kernel_dimensions() -> Vec<String> {
    let r = suite("kernel-dims", &SuiteOptions::default());
    let mut p = failures(&r);
    let frozen = [("C2xC2", 1), ("C3xC3", 5), ("C4xC2", 2), ("C8xC2", 4), ("C9xC3", 12), ("C9", 2), ("C8", 2)];
    for (s, d) in frozen {
        match r.record(&format!("kernel-dim/{s}")) {
            Some(x) if x.computed == d.to_string() => {}
            other => p.push(format!("{s}: expected {d}, got {:?}", other.map(|x| &x.computed))),
        }
    }
    let c8 = suite(
        "appendix-c",
        &SuiteOptions {
            case: Some("C8".into()),
            ..SuiteOptions::default()
        },
    );
    match c8.record("appendix-c/C8/factors") {
        Some(x) if x.status == Status::PaperDiscrepancy => {}
        other => p.push(format!("C8 discrepancy not flagged: {other:?}")),
    }
    p
}

fn criterion_08_decompositions() -> Vec<String> {
    let r = suite("theorem2", &SuiteOptions::default());
    let mut p = failures(&r);
    for s in ["C3xC3", "C4xC2", "C8xC2", "C9xC3"] {
        if r.record(&format!("decompose/{s}")).is_none() {
            p.push(format!("missing decomposition of {s}"));
        }
    }
    p
}

fn criterion_09_condition_a() -> Vec<String> {
    let r = suite("condition-a", &SuiteOptions::default());
    let mut p = failures(&r);
    if r.records.iter().filter(|x| x.name.starts_with("e2-complement/")).count() != 2 {
        p.push("missing C_p x C_p complement records".into());
    }
    p
}

fn criterion_10_property_suites() -> Vec<String> {
    let opts = SuiteOptions {
        seed: 20240917,
        instances: 1000,
        ..SuiteOptions::default()
    };
    let a = suite("properties", &opts);
    let b = suite("properties", &opts);
    let mut p = failures(&a);
    if a.to_json() != b.to_json() {
        p.push("reports differ between identical runs".into());
    }
    if a.to_csv().unwrap().lines().count() != a.records.len() + 1 {
        p.push("csv row count differs from record count".into());
    }
    p
}

type Criterion = fn() -> Vec<String>;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("idempotent certification", criterion_01_idempotent_certification),
        ("Lin on idempotents", criterion_02_lin_on_idempotents),
        ("biset-action equivalence", criterion_03_biset_action_equivalence),
        ("deflation-number lemmas", criterion_04_deflation_number_lemmas),
        ("phi1 behaviour", criterion_05_phi1_behaviour),
        ("nonzero restriction kernels", criterion_06_nonzero_kernel_sweep),
        ("kernel dimensions", criterion_07_kernel_dimensions),
        ("decompositions", criterion_08_decompositions),
        ("condition A and the C_p x C_p complement", criterion_09_condition_a),
        ("property suites", criterion_10_property_suites),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let problems = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            vec![format!("panicked: {}", msg.unwrap_or_default())]
        });
        let ok = problems.is_empty();
        println!("criterion {}: {} {title}", i + 1, if ok { "PASS" } else { "FAIL" });
        for p in &problems {
            println!("    {p}");
        }
        failed += usize::from(!ok);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
