//! Exhaustive verification of the canonical hypergroup and Krasner axioms.
//!
//! Every check scans its tuple space in lexicographic order and stops at the
//! first violation, so a failing axiom carries the lexicographically least
//! witness tuple.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::elem::{for_each_tuple, Elem, ElemSet};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::structure::FiniteStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomStatus {
    Pass,
    Fail,
    /// Not evaluated because a prerequisite axiom failed.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub status: AxiomStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Elem>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub structure: String,
    pub checks: Vec<AxiomCheck>,
    /// Detected scalar identity of `g` (least index when several exist).
    pub scalar_identity: Option<String>,
    pub scalar_identity_candidates: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == AxiomStatus::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| c.status != AxiomStatus::Pass)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.axiom.cmp(&b.axiom).then_with(|| a.witness.cmp(&b.witness)));
        self
    }
}

/// A violation found by one axiom scan: the witness tuple and a note.
pub(crate) type Violation = (Vec<Elem>, String);

pub const F_ASSOCIATIVITY: &str = "f.associativity";
pub const F_COMMUTATIVITY: &str = "f.commutativity";
pub const F_INVERSES: &str = "f.inverses";
pub const F_NEUTRAL: &str = "f.neutral";
pub const F_REVERSIBILITY: &str = "f.reversibility";
pub const F_SOLVABILITY: &str = "f.solvability";
pub const G_ASSOCIATIVITY: &str = "g.associativity";
pub const G_COMMUTATIVITY: &str = "g.commutativity";
pub const G_DISTRIBUTIVITY: &str = "g.distributivity";
pub const G_ZERO: &str = "g.zero";

fn record(s: &FiniteStructure, axiom: &str, outcome: Option<Violation>) -> AxiomCheck {
    match outcome {
        None => AxiomCheck {
            axiom: axiom.to_string(),
            status: AxiomStatus::Pass,
            witness: None,
            witness_labels: None,
            detail: None,
        },
        Some((w, detail)) => AxiomCheck {
            axiom: axiom.to_string(),
            status: AxiomStatus::Fail,
            witness_labels: Some(s.tuple_labels(&w)),
            witness: Some(w),
            detail: Some(detail),
        },
    }
}

fn skipped(axiom: &str, why: &str) -> AxiomCheck {
    AxiomCheck {
        axiom: axiom.to_string(),
        status: AxiomStatus::Skipped,
        witness: None,
        witness_labels: None,
        detail: Some(why.to_string()),
    }
}

/// Checks the canonical m-ary hypergroup axioms of `(R, f)` with the
/// structure's zero as the candidate scalar neutral element.
pub fn verify_canonical_hypergroup(s: &FiniteStructure) -> AxiomReport {
    let mut checks = vec![
        AxiomCheck {
            axiom: F_COMMUTATIVITY.into(),
            status: AxiomStatus::Pass,
            witness: None,
            witness_labels: None,
            detail: Some("table keyed by multisets".into()),
        },
        record(s, F_ASSOCIATIVITY, f_associativity(s)),
        record(s, F_NEUTRAL, f_neutral(s)),
        record(s, F_SOLVABILITY, f_solvability(s)),
    ];
    match inverses(s) {
        Ok(inv) => {
            checks.push(record(s, F_INVERSES, None));
            checks.push(record(s, F_REVERSIBILITY, f_reversibility(s, &inv)));
        }
        Err(v) => {
            checks.push(record(s, F_INVERSES, Some(v)));
            checks.push(skipped(F_REVERSIBILITY, "requires unique inverses"));
        }
    }
    AxiomReport {
        structure: s.name().to_string(),
        checks,
        scalar_identity: s.one().map(|e| s.label(e).to_string()),
        scalar_identity_candidates: s
            .scalar_identities()
            .into_iter()
            .map(|e| s.label(e).to_string())
            .collect(),
    }
    .finish()
}

/// Checks the full Krasner (m,n)-hyperring axiom set.
pub fn verify_krasner(s: &FiniteStructure) -> AxiomReport {
    let mut report = verify_canonical_hypergroup(s);
    report.checks.push(AxiomCheck {
        axiom: G_COMMUTATIVITY.into(),
        status: AxiomStatus::Pass,
        witness: None,
        witness_labels: None,
        detail: Some("table keyed by multisets".into()),
    });
    report.checks.push(record(s, G_ASSOCIATIVITY, g_associativity(s)));
    report.checks.push(record(s, G_DISTRIBUTIVITY, g_distributivity(s)));
    report.checks.push(record(s, G_ZERO, g_zero(s)));
    report.finish()
}

/// Fast yes/no form used by enumeration; cheapest checks first.
pub(crate) fn is_canonical_hypergroup(s: &FiniteStructure) -> bool {
    f_neutral(s).is_none()
        && match inverses(s) {
            Ok(inv) => f_reversibility(s, &inv).is_none(),
            Err(_) => false,
        }
        && f_solvability(s).is_none()
        && f_associativity(s).is_none()
}

/// Fast yes/no form of the multiplicative axioms, assuming `(R, f)` passed.
pub(crate) fn is_krasner_given_hypergroup(s: &FiniteStructure) -> bool {
    g_zero(s).is_none() && g_associativity(s).is_none() && g_distributivity(s).is_none()
}

pub(crate) fn f_associativity(s: &FiniteStructure) -> Option<Violation> {
    assoc_scan(s.size(), s.m(), |args, i| {
        let inner = s.f_at(&args[i..i + s.m()]);
        let mut outer: Vec<ElemSet> = Vec::with_capacity(s.m());
        outer.extend(args[..i].iter().map(|&a| ElemSet::singleton(a)));
        outer.push(inner);
        outer.extend(args[i + s.m()..].iter().map(|&a| ElemSet::singleton(a)));
        s.f_sets(&outer).0
    })
}

pub(crate) fn g_associativity(s: &FiniteStructure) -> Option<Violation> {
    let n = s.n();
    let mut buf = Vec::with_capacity(n);
    assoc_scan(s.size(), n, |args, i| {
        let inner = s.g_at(&args[i..i + n]);
        buf.clear();
        buf.extend_from_slice(&args[..i]);
        buf.push(inner);
        buf.extend_from_slice(&args[i + n..]);
        s.g_at(&buf).0 as u32
    })
}

/// Compares every bracketing position of a `(2k-1)`-tuple with the first.
fn assoc_scan(size: usize, k: usize, mut eval: impl FnMut(&[Elem], usize) -> u32) -> Option<Violation> {
    let mut found = None;
    for_each_tuple(size, 2 * k - 1, |t| {
        let first = eval(t, 0);
        for i in 1..k {
            if eval(t, i) != first {
                found = Some((t.to_vec(), format!("bracketing at position 1 differs from position {}", i + 1)));
                return false;
            }
        }
        true
    });
    found
}

pub(crate) fn f_neutral(s: &FiniteStructure) -> Option<Violation> {
    let zero = s.zero();
    let mut args = vec![zero; s.m()];
    let neutral = |e: Elem, x: Elem, args: &mut Vec<Elem>| {
        args.fill(e);
        args[0] = x;
        s.f_at(args) == ElemSet::singleton(x)
    };
    if let Some(a) = s.elements().find(|&a| !neutral(zero, a, &mut args)) {
        return Some((vec![a], format!("f({}, 0^(m-1)) is not {{{}}}", s.label(a), s.label(a))));
    }
    s.elements()
        .filter(|&e| e != zero)
        .find(|&e| s.elements().all(|x| neutral(e, x, &mut args)))
        .map(|e| (vec![e], "scalar neutral element is not unique".to_string()))
}

/// The inverse map `x -> x^-1`, or the least element whose inverse is
/// missing or ambiguous.
pub(crate) fn inverses(s: &FiniteStructure) -> Result<Vec<Elem>, Violation> {
    let zero = s.zero();
    let mut args = vec![zero; s.m()];
    let mut inv = Vec::with_capacity(s.size());
    for x in s.elements() {
        let ys: Vec<Elem> = s
            .elements()
            .filter(|&y| {
                args.fill(zero);
                args[0] = x;
                args[1] = y;
                s.f_at(&args).contains(zero)
            })
            .collect();
        match ys.as_slice() {
            [y] => inv.push(*y),
            [] => return Err((vec![x], "no inverse".to_string())),
            _ => return Err((ys.iter().fold(vec![x], |mut w, y| {
                w.push(*y);
                w
            }), "inverse is not unique".to_string())),
        }
    }
    Ok(inv)
}

pub(crate) fn f_reversibility(s: &FiniteStructure, inv: &[Elem]) -> Option<Violation> {
    let m = s.m();
    let mut found = None;
    let mut rev = vec![Elem(0); m];
    for_each_tuple(s.size(), m, |t| {
        for a in s.f_at(t).iter() {
            for i in 0..m {
                rev[0] = a;
                let mut k = 1;
                for (j, &x) in t.iter().enumerate() {
                    if j != i {
                        rev[k] = inv[x.index()];
                        k += 1;
                    }
                }
                if !s.f_at(&rev).contains(t[i]) {
                    let mut w = t.to_vec();
                    w.push(a);
                    found = Some((w, format!("argument {} is not recovered from the value", i + 1)));
                    return false;
                }
            }
        }
        true
    });
    found
}

pub(crate) fn f_solvability(s: &FiniteStructure) -> Option<Violation> {
    let m = s.m();
    let mut found = None;
    let mut args = vec![Elem(0); m];
    for_each_tuple(s.size(), m, |t| {
        // t = (a_1, .., a_{m-1}, b)
        let b = t[m - 1];
        args[..m - 1].copy_from_slice(&t[..m - 1]);
        let solvable = s.elements().any(|y| {
            args[m - 1] = y;
            s.f_at(&args).contains(b)
        });
        if !solvable {
            found = Some((t.to_vec(), "no solution for the last argument".to_string()));
        }
        solvable
    });
    found
}

pub(crate) fn g_distributivity(s: &FiniteStructure) -> Option<Violation> {
    let (m, n) = (s.m(), s.n());
    let mut found = None;
    let mut gargs = vec![Elem(0); n];
    let mut rhs_args = vec![ElemSet::EMPTY; m];
    for_each_tuple(s.size(), n - 1 + m, |t| {
        let (a, x) = t.split_at(n - 1);
        gargs[..n - 1].copy_from_slice(a);
        let mut lhs = ElemSet::EMPTY;
        for z in s.f_at(x).iter() {
            gargs[n - 1] = z;
            lhs.insert(s.g_at(&gargs));
        }
        for (slot, &xi) in rhs_args.iter_mut().zip(x) {
            gargs[n - 1] = xi;
            *slot = ElemSet::singleton(s.g_at(&gargs));
        }
        let rhs = s.f_sets(&rhs_args);
        if lhs != rhs {
            found = Some((
                t.to_vec(),
                format!(
                    "g(a, f(x)) = {} but f(g(a,x_1), .., g(a,x_m)) = {}",
                    s.show_set(lhs),
                    s.show_set(rhs)
                ),
            ));
            return false;
        }
        true
    });
    found
}

pub(crate) fn g_zero(s: &FiniteStructure) -> Option<Violation> {
    let n = s.n();
    let zero = s.zero();
    let mut found = None;
    let mut args = vec![zero; n];
    for_each_tuple(s.size(), n - 1, |t| {
        args[1..].copy_from_slice(t);
        if s.g_at(&args) != zero {
            found = Some((args.clone(), "zero is not absorbing".to_string()));
            return false;
        }
        true
    });
    found
}

/// Re-evaluates a failed check's witness and reports whether it still
/// exhibits the violation.
pub fn replay_axiom_witness(s: &FiniteStructure, check: &AxiomCheck) -> bool {
    let Some(w) = &check.witness else {
        return false;
    };
    if w.iter().any(|e| e.index() >= s.size()) {
        return false;
    }
    let (m, n) = (s.m(), s.n());
    match check.axiom.as_str() {
        F_ASSOCIATIVITY => {
            w.len() == 2 * m - 1 && {
                let val = |i: usize| {
                    let mut outer: Vec<ElemSet> = w[..i].iter().map(|&a| ElemSet::singleton(a)).collect();
                    outer.push(s.f_at(&w[i..i + m]));
                    outer.extend(w[i + m..].iter().map(|&a| ElemSet::singleton(a)));
                    s.f_sets(&outer)
                };
                (1..m).any(|i| val(i) != val(0))
            }
        }
        G_ASSOCIATIVITY => {
            w.len() == 2 * n - 1 && {
                let val = |i: usize| {
                    let mut outer = w[..i].to_vec();
                    outer.push(s.g_at(&w[i..i + n]));
                    outer.extend_from_slice(&w[i + n..]);
                    s.g_at(&outer)
                };
                (1..n).any(|i| val(i) != val(0))
            }
        }
        F_NEUTRAL => {
            w.len() == 1 && {
                let mut args = vec![s.zero(); m];
                args[0] = w[0];
                let zero_fails = s.f_at(&args) != ElemSet::singleton(w[0]);
                let other_neutral = w[0] != s.zero()
                    && s.elements().all(|x| {
                        let mut a = vec![w[0]; m];
                        a[0] = x;
                        s.f_at(&a) == ElemSet::singleton(x)
                    });
                zero_fails || other_neutral
            }
        }
        F_INVERSES => {
            !w.is_empty() && {
                let x = w[0];
                let count = s
                    .elements()
                    .filter(|&y| {
                        let mut a = vec![s.zero(); m];
                        a[0] = x;
                        a[1] = y;
                        s.f_at(&a).contains(s.zero())
                    })
                    .count();
                count != 1
            }
        }
        F_REVERSIBILITY => match inverses(s) {
            Ok(inv) if w.len() == m + 1 => {
                let (t, a) = (&w[..m], w[m]);
                s.f_at(t).contains(a)
                    && (0..m).any(|i| {
                        let mut rev = vec![a];
                        rev.extend(t.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| inv[x.index()]));
                        !s.f_at(&rev).contains(t[i])
                    })
            }
            _ => false,
        },
        F_SOLVABILITY => {
            w.len() == m && {
                let b = w[m - 1];
                !s.elements().any(|y| {
                    let mut a = w[..m - 1].to_vec();
                    a.push(y);
                    s.f_at(&a).contains(b)
                })
            }
        }
        G_DISTRIBUTIVITY => {
            w.len() == n - 1 + m && {
                let (a, x) = w.split_at(n - 1);
                let prod = |z: Elem| {
                    let mut args = a.to_vec();
                    args.push(z);
                    s.g_at(&args)
                };
                let lhs: ElemSet = s.f_at(x).iter().map(prod).collect();
                let rhs_args: Vec<ElemSet> = x.iter().map(|&xi| ElemSet::singleton(prod(xi))).collect();
                lhs != s.f_sets(&rhs_args)
            }
        }
        G_ZERO => w.len() == n && w.contains(&s.zero()) && s.g_at(w) != s.zero(),
        _ => false,
    }
}

/// A structure that has passed [`verify_krasner`]. Downstream analysis only
/// accepts this type.
#[derive(Clone, Debug)]
pub struct Hyperring {
    inner: FiniteStructure,
    report: AxiomReport,
}

impl Hyperring {
    /// Verifies under the default limits.
    pub fn new(s: FiniteStructure) -> Result<Self> {
        Self::with_limits(s, &Limits::default())
    }

    pub fn with_limits(s: FiniteStructure, limits: &Limits) -> Result<Self> {
        limits.check_shape(s.size(), s.m(), s.n())?;
        let report = verify_krasner(&s);
        if let Some(bad) = report.failures().next() {
            let witness = bad
                .witness_labels
                .as_ref()
                .map(|w| format!(" at ({})", w.join(",")))
                .unwrap_or_default();
            return Err(Error::NotKrasner {
                name: s.name().to_string(),
                detail: format!(
                    "{} failed{witness}: {}",
                    bad.axiom,
                    bad.detail.clone().unwrap_or_default()
                ),
            });
        }
        Ok(Hyperring { inner: s, report })
    }

    /// Wraps a structure already known to pass; used by enumeration, which
    /// has just run the same checks.
    pub(crate) fn trusted(s: FiniteStructure) -> Self {
        let report = verify_krasner(&s);
        debug_assert!(report.passed());
        Hyperring { inner: s, report }
    }

    pub fn report(&self) -> &AxiomReport {
        &self.report
    }

    pub fn structure(&self) -> &FiniteStructure {
        &self.inner
    }

    pub fn into_structure(self) -> FiniteStructure {
        self.inner
    }
}

impl Deref for Hyperring {
    type Target = FiniteStructure;

    fn deref(&self) -> &FiniteStructure {
        &self.inner
    }
}
