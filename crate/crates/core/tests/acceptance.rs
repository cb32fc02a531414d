//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use kmn::audit::{run_audit, AuditOptions, AuditReport, CellStatus, ClaimStatus};
use kmn::axioms::replay_axiom_witness;
use kmn::catalog::{builtin_a3, builtin_examples, builtin_r4, default_catalog, CatalogEntry, DEFAULT_SEED};
use kmn::classify::{is_delta_j, is_j, is_kn_absorbing_delta_j, Verdict};
use kmn::expansion::{registry, Expansion};
use kmn::{verify_canonical_hypergroup, verify_krasner, Analysis, Limits};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| default_catalog(DEFAULT_SEED, &Limits::default()).expect("default catalog"))
}

fn analyses() -> &'static [Analysis] {
    static ANALYSES: OnceLock<Vec<Analysis>> = OnceLock::new();
    ANALYSES.get_or_init(|| {
        catalog()
            .iter()
            .filter_map(|e| e.ring.clone())
            .map(|r| Analysis::new(r).expect("analysis"))
            .collect()
    })
}

fn audit() -> &'static (AuditReport, Duration) {
    static REPORT: OnceLock<(AuditReport, Duration)> = OnceLock::new();
    REPORT.get_or_init(|| {
        let t = Instant::now();
        let r = run_audit(catalog(), &AuditOptions::default()).expect("audit");
        (r, t.elapsed())
    })
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    if e < limit {
        Ok(())
    } else {
        Err(format!("{what} took {e:?}, limit {limit:?}"))
    }
}

fn criterion_1() -> Check {
    let mut notes = vec![];
    let t = Instant::now();
    let a3 = builtin_a3();
    let r = verify_krasner(&a3);
    within(t, Duration::from_secs(1), "verify_krasner(a3)")?;
    if r.passed() {
        notes.push("a3 passes".to_string());
    } else {
        for f in r.failures().filter(|f| f.witness.is_some()) {
            if !replay_axiom_witness(&a3, f) {
                return Err(format!("a3 {} witness does not replay", f.axiom));
            }
        }
        notes.push(format!(
            "a3 discrepancy: {} replayed",
            r.failures().map(|f| f.axiom.as_str()).collect::<Vec<_>>().join(",")
        ));
    }
    let t = Instant::now();
    let r4 = builtin_r4();
    let c = verify_canonical_hypergroup(&r4);
    within(t, Duration::from_secs(1), "verify_canonical_hypergroup(r4)")?;
    if c.passed() {
        notes.push("r4 canonical hypergroup passes".into());
    } else {
        for f in c.failures().filter(|f| f.witness.is_some()) {
            if !replay_axiom_witness(&r4, f) {
                return Err(format!("r4 {} witness does not replay", f.axiom));
            }
        }
        notes.push("r4 discrepancy replayed".into());
    }
    let k = verify_krasner(&r4);
    notes.push(format!("r4 Krasner {}", if k.passed() { "passes" } else { "fails" }));
    Ok(notes.join("; "))
}

fn criterion_2() -> Check {
    let t = Instant::now();
    let opts = AuditOptions {
        theorems: vec!["T01".into()],
        ..AuditOptions::default()
    };
    let report = run_audit(&builtin_examples(), &opts).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(1), "claim comparison")?;
    let mut notes = vec![];
    for id in ["a3-33/j-zero", "a3-33/j-zero-x", "r4-24/j-zero"] {
        let c = report
            .claims
            .iter()
            .find(|c| c.id == id)
            .ok_or(format!("no record for {id}"))?;
        match c.status {
            ClaimStatus::Agree => notes.push(format!("{id} agrees")),
            ClaimStatus::Discrepancy => match c.replayed {
                Some(true) => notes.push(format!("{id} discrepancy replayed")),
                Some(false) => return Err(format!("{id}: witness does not replay")),
                // No witness exists when the predicate does not apply; the
                // cause is the missing scalar identity, checked directly.
                None if c.computed.contains("no scalar identity") && builtin_r4().scalar_identities().is_empty() => {
                    notes.push(format!("{id} discrepancy (no scalar identity, confirmed)"))
                }
                None => return Err(format!("{id}: unexplained discrepancy {}", c.computed)),
            },
        }
    }
    Ok(notes.join("; "))
}

fn criterion_3() -> Check {
    let t = Instant::now();
    let (mut structures, mut ideals) = (0, 0);
    for an in analyses().iter().filter(|a| a.ring().one().is_some()) {
        structures += 1;
        for &i in an.lattice().members() {
            ideals += 1;
            let p = an.radical_by_primes(i).map_err(|e| e.to_string())?;
            let q = an.radical_by_powers(i).map_err(|e| e.to_string())?;
            if p != q {
                return Err(format!("{}: radicals of {} differ", an.ring().name(), an.ring().show_set(i)));
            }
        }
    }
    within(t, Duration::from_secs(60), "radical comparison")?;
    Ok(format!("{ideals} hyperideals in {structures} structures, zero mismatches"))
}

fn criterion_4() -> Check {
    let (r, elapsed) = audit();
    if *elapsed > Duration::from_secs(600) {
        return Err(format!("audit took {elapsed:?}"));
    }
    for c in &r.cells {
        match &c.status {
            CellStatus::Fail { replayed: false, .. } => {
                return Err(format!("{} {} fails without replay", c.theorem, c.structure))
            }
            CellStatus::Skip { reason } if reason.is_empty() => {
                return Err(format!("{} {} skipped without reason", c.theorem, c.structure))
            }
            _ => {}
        }
    }
    let s = &r.summary;
    Ok(format!(
        "{} cells in {elapsed:.1?}: {} pass, {} fail (all replayed), {} skip",
        r.cells.len(),
        s.pass,
        s.fail,
        s.skip
    ))
}

fn criterion_5() -> Check {
    let limits = Limits::default();
    let mut checked = 0;
    for an in analyses() {
        let d0 = Expansion::delta0(an);
        let dr = Expansion::delta_r(an);
        let name = an.ring().name();
        for q in an.lattice().proper() {
            checked += 1;
            let a = is_delta_j(an, q, &d0).map_err(|e| e.to_string())?;
            let b = is_j(an, q).map_err(|e| e.to_string())?;
            if a.holds() != b.holds() || a.decided() != b.decided() {
                return Err(format!("{name}: delta0-J and J differ on {}", an.ring().show_set(q)));
            }
            if an.ring().one().is_some() && !is_delta_j(an, q, &dr).map_err(|e| e.to_string())?.holds() {
                return Err(format!("{name}: {} is not deltaR-J", an.ring().show_set(q)));
            }
            for k in 2..=3 {
                let v = is_kn_absorbing_delta_j(an, q, &dr, k, &limits).map_err(|e| e.to_string())?;
                if !v.holds() {
                    return Err(format!("{name}: {} is not ({k},n)-absorbing deltaR-J: {v}", an.ring().show_set(q)));
                }
            }
        }
    }
    Ok(format!("{checked} proper hyperideals, zero exceptions"))
}

fn criterion_6() -> Check {
    let limits = Limits::default();
    let mut links = 0;
    for an in analyses() {
        for d in registry(an) {
            for q in an.lattice().proper() {
                let dj = is_delta_j(an, q, &d).map_err(|e| e.to_string())?;
                let a2 = is_kn_absorbing_delta_j(an, q, &d, 2, &limits).map_err(|e| e.to_string())?;
                let a3 = is_kn_absorbing_delta_j(an, q, &d, 3, &limits).map_err(|e| e.to_string())?;
                let at = || format!("{} {} under {}", an.ring().name(), an.ring().show_set(q), d.name());
                if matches!(a2, Verdict::NotApplicable { .. }) || matches!(a3, Verdict::NotApplicable { .. }) {
                    return Err(format!("absorbing predicate undecided at {}", at()));
                }
                if dj.holds() {
                    links += 1;
                    if !a2.holds() {
                        return Err(format!("delta-J but not (2,n)-absorbing at {}", at()));
                    }
                }
                if a2.holds() {
                    links += 1;
                    if !a3.holds() {
                        return Err(format!("(2,n)- but not (3,n)-absorbing at {}", at()));
                    }
                }
            }
        }
    }
    Ok(format!("{links} implication instances, zero counterexamples"))
}

fn criterion_7() -> Check {
    let (r, _) = audit();
    let (mut cells, mut instances, mut explained) = (0, 0, 0);
    for c in r.cells.iter().filter(|c| ["T20", "T21", "T27"].contains(&c.theorem)) {
        cells += 1;
        match &c.status {
            CellStatus::Pass { instances: n, .. } => instances += n,
            CellStatus::Fail {
                instances: n,
                violations,
                improper,
                replayed,
                ..
            } => {
                instances += n;
                // A proper hyperideal pulled back onto the whole carrier by
                // a non-unital monomorphism; anything else is unexplained.
                if c.theorem == "T21" || violations != improper || !replayed {
                    return Err(format!(
                        "{} {}: {violations} violations, {improper} onto the whole carrier",
                        c.theorem, c.structure
                    ));
                }
                explained += violations;
            }
            CellStatus::Skip { .. } => {}
        }
    }
    Ok(format!(
        "{cells} cells, {instances} instances; {explained} explained violations (preimage is the whole carrier), zero unexplained"
    ))
}

fn criterion_8() -> Check {
    let (first, _) = audit();
    let second = run_audit(catalog(), &AuditOptions::default()).map_err(|e| e.to_string())?;
    let (a, b) = (first.to_jsonl(), second.to_jsonl());
    if a != b || first.render() != second.render() {
        return Err("reports differ between runs".into());
    }
    Ok(format!("{} bytes, identical", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("axiom verification", criterion_1),
        ("built-in claim classification", criterion_2),
        ("radical by primes equals radical by powers", criterion_3),
        ("theorem audit", criterion_4),
        ("definitional coincidences", criterion_5),
        ("implication chain", criterion_6),
        ("morphology transfers", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match r {
            Ok(detail) => println!("criterion {}: PASS {name} ({:.2?}): {detail}", i + 1, t.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({:.2?}): {detail}", i + 1, t.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
