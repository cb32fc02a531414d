//! Counterexample search for implications between hyperideal predicates.
//!
//! An implication is written `P1 & P2 => C1 & C2`. Atoms:
//!
//! | atom | meaning for a proper hyperideal `Q` |
//! |------|-------------------------------------|
//! | `prime`, `primary`, `maximal`, `J` | the predicate on `Q` |
//! | `delta-J(NAME)`, `delta-primary(NAME)` | with a built-in expansion |
//! | `absorbing(K,NAME)` | (K,n)-absorbing NAME-J |
//! | `in-jacobson` | `Q ⊆ J(R)` |
//! | `jacobson` | `Q = J(R)` |
//! | `local` | `R` has a single maximal hyperideal |
//!
//! Any atom may be negated with a leading `!`. `⇒` and `∧` are accepted
//! for `=>` and `&`.

use std::fmt;

use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::classify::{self, Verdict, Witness};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::ideals::Analysis;
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomKind {
    Prime,
    Primary,
    Maximal,
    J,
    DeltaJ(String),
    DeltaPrimary(String),
    Absorbing(usize, String),
    InJacobson,
    IsJacobson,
    Local,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub negated: bool,
    pub kind: AtomKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Implication {
    pub premises: Vec<Atom>,
    pub conclusions: Vec<Atom>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        match &self.kind {
            AtomKind::Prime => f.write_str("prime"),
            AtomKind::Primary => f.write_str("primary"),
            AtomKind::Maximal => f.write_str("maximal"),
            AtomKind::J => f.write_str("J"),
            AtomKind::DeltaJ(d) => write!(f, "delta-J({d})"),
            AtomKind::DeltaPrimary(d) => write!(f, "delta-primary({d})"),
            AtomKind::Absorbing(k, d) => write!(f, "absorbing({k},{d})"),
            AtomKind::InJacobson => f.write_str("in-jacobson"),
            AtomKind::IsJacobson => f.write_str("jacobson"),
            AtomKind::Local => f.write_str("local"),
        }
    }
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |atoms: &[Atom]| atoms.iter().map(Atom::to_string).collect::<Vec<_>>().join(" & ");
        write!(f, "{} => {}", join(&self.premises), join(&self.conclusions))
    }
}

fn parse_atom(spec: &str, raw: &str) -> Result<Atom> {
    let bad = || Error::BadImplication(spec.to_string());
    let raw = raw.trim();
    let (negated, body) = match raw.strip_prefix('!') {
        Some(rest) => (true, rest.trim()),
        None => (false, raw),
    };
    let (head, args) = match body.find('(') {
        Some(open) => {
            let inner = body[open + 1..].strip_suffix(')').ok_or_else(bad)?;
            let args: Vec<&str> = inner.split(',').map(str::trim).collect();
            (body[..open].trim(), args)
        }
        None => (body, vec![]),
    };
    let kind = match (head, args.as_slice()) {
        ("prime", []) => AtomKind::Prime,
        ("primary", []) => AtomKind::Primary,
        ("maximal", []) => AtomKind::Maximal,
        ("J", []) => AtomKind::J,
        ("delta-J", [d]) => AtomKind::DeltaJ(d.to_string()),
        ("delta-primary", [d]) => AtomKind::DeltaPrimary(d.to_string()),
        ("absorbing", [k, d]) => AtomKind::Absorbing(k.parse().map_err(|_| bad())?, d.to_string()),
        ("in-jacobson", []) => AtomKind::InJacobson,
        ("jacobson", []) => AtomKind::IsJacobson,
        ("local", []) => AtomKind::Local,
        _ => return Err(bad()),
    };
    Ok(Atom { negated, kind })
}

fn parse_side(spec: &str, side: &str) -> Result<Vec<Atom>> {
    let side = side.replace('∧', "&");
    let atoms = side
        .split('&')
        .map(|a| parse_atom(spec, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(atoms)
}

pub fn parse_implication(spec: &str) -> Result<Implication> {
    let norm = spec.replace('⇒', "=>");
    let (lhs, rhs) = norm
        .split_once("=>")
        .ok_or_else(|| Error::BadImplication(spec.to_string()))?;
    if rhs.contains("=>") {
        return Err(Error::BadImplication(spec.to_string()));
    }
    Ok(Implication {
        premises: parse_side(spec, lhs)?,
        conclusions: parse_side(spec, rhs)?,
    })
}

/// The first catalog instance where every premise holds and some
/// conclusion fails.
#[derive(Clone, Debug, Serialize)]
pub struct SearchHit {
    pub structure: String,
    pub ideal: Vec<String>,
    /// The conclusion atom that fails.
    pub failed: String,
    /// Definition witness for the failing atom, when it has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub implication: String,
    pub structures: usize,
    /// Instances whose premises held and every atom was decidable.
    pub instances: usize,
    /// Instances where some atom did not apply, for example without a
    /// scalar identity.
    pub undecided: usize,
    pub counterexample: Option<SearchHit>,
}

struct Eval {
    holds: Option<bool>,
    witness: Option<Witness>,
}

fn from_verdict(v: Result<Verdict>, negated: bool) -> Eval {
    match v {
        Ok(Verdict::True) => Eval {
            holds: Some(!negated),
            witness: None,
        },
        Ok(Verdict::False { witness }) => Eval {
            holds: Some(negated),
            witness: (!negated).then_some(witness),
        },
        Ok(Verdict::Improper) => Eval {
            holds: Some(negated),
            witness: None,
        },
        _ => Eval {
            holds: None,
            witness: None,
        },
    }
}

fn expansion(an: &Analysis, name: &str) -> Result<Expansion> {
    Expansion::builtin(an, name)
}

fn eval(an: &Analysis, q: crate::elem::ElemSet, atom: &Atom, limits: &Limits) -> Result<Eval> {
    let plain = |b: bool| Eval {
        holds: Some(b != atom.negated),
        witness: None,
    };
    let lat = an.lattice();
    Ok(match &atom.kind {
        AtomKind::Prime => from_verdict(classify::prime_verdict(an, q), atom.negated),
        AtomKind::Primary => from_verdict(classify::primary_verdict(an, q), atom.negated),
        AtomKind::J => from_verdict(classify::is_j(an, q), atom.negated),
        AtomKind::DeltaJ(d) => from_verdict(classify::is_delta_j(an, q, &expansion(an, d)?), atom.negated),
        AtomKind::DeltaPrimary(d) => {
            from_verdict(classify::is_delta_primary(an, q, &expansion(an, d)?), atom.negated)
        }
        AtomKind::Absorbing(k, d) => from_verdict(
            classify::is_kn_absorbing_delta_j(an, q, &expansion(an, d)?, *k, limits),
            atom.negated,
        ),
        AtomKind::Maximal => plain(lat.is_maximal(q)),
        AtomKind::InJacobson => plain(q.is_subset(lat.jacobson())),
        AtomKind::IsJacobson => plain(q == lat.jacobson()),
        AtomKind::Local => plain(lat.is_local()),
    })
}

/// Scans the proper hyperideals of every verified catalog structure, in
/// catalog order. Unknown expansion names and `k < 2` are errors.
pub fn search_counterexample(imp: &Implication, catalog: &[CatalogEntry], limits: &Limits) -> Result<SearchReport> {
    for a in imp.premises.iter().chain(&imp.conclusions) {
        match &a.kind {
            AtomKind::DeltaJ(d) | AtomKind::DeltaPrimary(d) | AtomKind::Absorbing(_, d)
                if !crate::expansion::BUILTIN_EXPANSIONS.contains(&d.as_str()) =>
            {
                return Err(Error::UnknownExpansion(d.clone()));
            }
            AtomKind::Absorbing(k, _) if *k < 2 => return Err(Error::DegenerateK(*k)),
            _ => {}
        }
    }
    let mut report = SearchReport {
        implication: imp.to_string(),
        structures: 0,
        instances: 0,
        undecided: 0,
        counterexample: None,
    };
    for e in catalog {
        let Some(ring) = &e.ring else { continue };
        let Ok(an) = Analysis::with_limits(ring.clone(), limits) else { continue };
        report.structures += 1;
        let s = an.ring();
        for q in an.lattice().proper() {
            let mut decided = true;
            let mut premises = true;
            for a in &imp.premises {
                match eval(&an, q, a, limits)?.holds {
                    Some(true) => {}
                    Some(false) => premises = false,
                    None => decided = false,
                }
            }
            if !premises {
                continue;
            }
            let mut failed = None;
            for a in &imp.conclusions {
                let r = eval(&an, q, a, limits)?;
                match r.holds {
                    Some(true) => {}
                    Some(false) => {
                        failed.get_or_insert((a, r.witness));
                    }
                    None => decided = false,
                }
            }
            if !decided {
                report.undecided += 1;
                continue;
            }
            report.instances += 1;
            if let Some((a, witness)) = failed {
                report.counterexample = Some(SearchHit {
                    structure: s.name().to_string(),
                    ideal: s.set_labels(q),
                    failed: a.to_string(),
                    witness,
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_examples, enumerate_structures, CatalogEntry, Provenance};

    fn catalog() -> Vec<CatalogEntry> {
        let mut out = builtin_examples();
        for order in 1..=3 {
            for s in enumerate_structures(2, 2, order, &Limits::default()).unwrap().structures {
                out.push(CatalogEntry::new(s, Provenance::Enumerated, vec![]));
            }
        }
        out.push(CatalogEntry::new(
            crate::testing::f2_squared(),
            Provenance::Enumerated,
            vec![],
        ));
        out
    }

    #[test]
    fn parses_and_prints() {
        let imp = parse_implication("J & !local => in-jacobson ∧ absorbing(2, delta1)").unwrap();
        assert_eq!(imp.to_string(), "J & !local => in-jacobson & absorbing(2,delta1)");
        for bad in ["J", "J => K", "J => prime => J", "absorbing(x,delta0) => J", "delta-J => J"] {
            assert!(parse_implication(bad).is_err(), "{bad}");
        }
        let unknown = parse_implication("delta-J(delta9) => J").unwrap();
        assert!(matches!(
            search_counterexample(&unknown, &[], &Limits::default()),
            Err(Error::UnknownExpansion(_))
        ));
    }

    #[test]
    fn j_inside_jacobson_has_no_counterexample() {
        let imp = parse_implication("J => in-jacobson").unwrap();
        let r = search_counterexample(&imp, &catalog(), &Limits::default()).unwrap();
        assert!(r.counterexample.is_none());
        assert!(r.instances > 0);
    }

    #[test]
    fn prime_does_not_imply_j_off_local_structures() {
        let imp = parse_implication("prime => J").unwrap();
        let cat = catalog();
        let hit = search_counterexample(&imp, &cat, &Limits::default())
            .unwrap()
            .counterexample
            .expect("a non-local structure is in the catalog");
        let e = cat.iter().find(|e| e.name() == hit.structure).unwrap();
        let an = Analysis::new(e.ring.clone().unwrap()).unwrap();
        assert!(!an.is_local());
        let q = an.ring().parse_set(&hit.ideal.join(",")).unwrap();
        assert!(an.is_prime(q).unwrap());
        assert!(classify::replay(&an, q, None, hit.witness.as_ref().unwrap()));
    }
}
