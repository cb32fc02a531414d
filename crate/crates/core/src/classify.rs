//! J-hyperideals and their expansions: J, δ-J, δ-primary and
//! (k,n)-absorbing δ-J, with replayable witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::elem::{for_each_combination, for_each_multiset, Elem, ElemSet};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::ideals::Analysis;
use crate::limits::{pow_sat, Limits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    Prime,
    Primary,
    J,
    DeltaJ,
    DeltaPrimary,
    Absorbing,
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::Prime => "prime",
            Predicate::Primary => "primary",
            Predicate::J => "J",
            Predicate::DeltaJ => "delta-J",
            Predicate::DeltaPrimary => "delta-primary",
            Predicate::Absorbing => "absorbing",
        })
    }
}

/// A tuple on which a predicate fails.
///
/// For the n-ary predicates `index` is the position whose replacement by 1
/// leaves the target; for the absorbing predicate the tuple has
/// `k(n-1)+1` entries and no index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub predicate: Predicate,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expansion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    pub tuple: Vec<Elem>,
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    True,
    False { witness: Witness },
    NotApplicable { reason: String },
    Improper,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::True)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::False { .. })
    }

    /// `Some` for decided verdicts.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False { .. } => Some(false),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::False { witness } => Some(witness),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::True => f.write_str("true"),
            Verdict::False { witness } => {
                write!(f, "false at ({})", witness.labels.join(","))?;
                if let Some(i) = witness.index {
                    write!(f, " index {}", i + 1)?;
                }
                Ok(())
            }
            Verdict::NotApplicable { reason } => write!(f, "not applicable ({reason})"),
            Verdict::Improper => f.write_str("improper"),
        }
    }
}

const NO_IDENTITY: &str = "no scalar identity";

/// Gate shared by the predicates that need a proper member and `1_R`.
fn gate(an: &Analysis, q: ElemSet, needs_one: bool) -> Result<Option<Verdict>> {
    an.require_member(q)?;
    if q == an.ring().carrier() {
        return Ok(Some(Verdict::Improper));
    }
    if needs_one && an.ring().one().is_none() {
        return Ok(Some(Verdict::NotApplicable {
            reason: NO_IDENTITY.into(),
        }));
    }
    Ok(None)
}

fn witness(an: &Analysis, predicate: Predicate, expansion: Option<&str>, tuple: Vec<Elem>, index: Option<usize>) -> Witness {
    Witness {
        predicate,
        expansion: expansion.map(str::to_string),
        k: None,
        labels: an.ring().tuple_labels(&tuple),
        tuple,
        index,
    }
}

/// First `(tuple, i)` with `g(tuple)` in `q` and `bad(tuple, i, drop_i)`.
/// Every predicate here is symmetric in the tuple, so sorted multisets
/// suffice and the first hit is the lexicographically least tuple.
fn drop_scan(an: &Analysis, q: ElemSet, bad: impl Fn(&[Elem], usize, Elem) -> bool) -> Option<(Vec<Elem>, usize)> {
    let s = an.ring();
    let one = s.one().expect("gated");
    let mut found = None;
    for_each_multiset(s.size(), s.n(), |t| {
        if q.contains(s.g_at(t)) {
            for i in 0..t.len() {
                if bad(t, i, s.g_drop(one, t, i)) {
                    found = Some((t.to_vec(), i));
                    return false;
                }
            }
        }
        true
    });
    found
}

fn from_scan(an: &Analysis, p: Predicate, d: Option<&str>, hit: Option<(Vec<Elem>, usize)>) -> Verdict {
    match hit {
        None => Verdict::True,
        Some((t, i)) => Verdict::False {
            witness: witness(an, p, d, t, Some(i)),
        },
    }
}

pub fn prime_verdict(an: &Analysis, q: ElemSet) -> Result<Verdict> {
    if let Some(v) = gate(an, q, false)? {
        return Ok(v);
    }
    Ok(match an.prime_counterexample(q)? {
        None => Verdict::True,
        Some(t) => Verdict::False {
            witness: witness(an, Predicate::Prime, None, t, None),
        },
    })
}

pub fn primary_verdict(an: &Analysis, q: ElemSet) -> Result<Verdict> {
    if let Some(v) = gate(an, q, true)? {
        return Ok(v);
    }
    Ok(from_scan(an, Predicate::Primary, None, an.primary_counterexample(q)?))
}

/// `g(x) ∈ Q` and `x_i ∉ J(R)` force `g(x_1, .., 1, .., x_n) ∈ Q`.
pub fn is_j(an: &Analysis, q: ElemSet) -> Result<Verdict> {
    if let Some(v) = gate(an, q, true)? {
        return Ok(v);
    }
    let jac = an.jacobson();
    let hit = drop_scan(an, q, |t, i, d| !jac.contains(t[i]) && !q.contains(d));
    Ok(from_scan(an, Predicate::J, None, hit))
}

/// `g(x) ∈ Q` forces `x_i ∈ J(R)` or `g(x_1, .., 1, .., x_n) ∈ δ(Q)`.
pub fn is_delta_j(an: &Analysis, q: ElemSet, delta: &Expansion) -> Result<Verdict> {
    if let Some(v) = gate(an, q, true)? {
        return Ok(v);
    }
    let jac = an.jacobson();
    let dq = delta.at(q);
    let hit = drop_scan(an, q, |t, i, d| !jac.contains(t[i]) && !dq.contains(d));
    Ok(from_scan(an, Predicate::DeltaJ, Some(delta.name()), hit))
}

/// `g(x) ∈ Q` forces `x_i ∈ Q` or `g(x_1, .., 1, .., x_n) ∈ δ(Q)`, for
/// every index `i`.
pub fn is_delta_primary(an: &Analysis, q: ElemSet, delta: &Expansion) -> Result<Verdict> {
    if let Some(v) = gate(an, q, true)? {
        return Ok(v);
    }
    let dq = delta.at(q);
    let hit = drop_scan(an, q, |t, i, d| !q.contains(t[i]) && !dq.contains(d));
    Ok(from_scan(an, Predicate::DeltaPrimary, Some(delta.name()), hit))
}

/// Tuple length and subproduct length of the (k,n)-absorbing predicate.
pub fn absorbing_arities(k: usize, n: usize) -> (usize, usize) {
    (k * (n - 1) + 1, (k - 1) * (n - 1) + 1)
}

/// For every tuple of `k(n-1)+1` elements with product in `Q`: the product
/// of the first `(k-1)(n-1)+1` entries lies in `J(R)`, or the product over
/// some other index set of that size lies in `δ(Q)`.
pub fn is_kn_absorbing_delta_j(
    an: &Analysis,
    q: ElemSet,
    delta: &Expansion,
    k: usize,
    limits: &Limits,
) -> Result<Verdict> {
    if k < 2 {
        return Err(Error::DegenerateK(k));
    }
    if let Some(v) = gate(an, q, false)? {
        return Ok(v);
    }
    let s = an.ring();
    let (len, sub) = absorbing_arities(k, s.n());
    let space = pow_sat(s.size(), len);
    if space > limits.tuple_cap {
        return Ok(Verdict::NotApplicable {
            reason: format!("tuple space {space} exceeds cap {}", limits.tuple_cap),
        });
    }
    let jac = an.jacobson();
    let dq = delta.at(q);
    let mut others: Vec<Vec<usize>> = Vec::new();
    for_each_combination(len, sub, |c| {
        if c[sub - 1] != sub - 1 {
            others.push(c.to_vec());
        }
        true
    });

    let mut t = vec![Elem(0); len];
    let mut pick = vec![Elem(0); sub];
    let mut found = None;
    for_each_multiset(s.size(), sub, |prefix| {
        if jac.contains(s.g_iter_raw(prefix)) {
            return true;
        }
        t[..sub].copy_from_slice(prefix);
        for_each_multiset(s.size(), len - sub, |suffix| {
            t[sub..].copy_from_slice(suffix);
            if !q.contains(s.g_iter_raw(&t)) {
                return true;
            }
            let rescued = others.iter().any(|c| {
                for (p, &i) in pick.iter_mut().zip(c) {
                    *p = t[i];
                }
                dq.contains(s.g_iter_raw(&pick))
            });
            if !rescued {
                found = Some(t.clone());
            }
            rescued
        });
        found.is_none()
    });
    Ok(match found {
        None => Verdict::True,
        Some(t) => {
            let mut w = witness(an, Predicate::Absorbing, Some(delta.name()), t, None);
            w.k = Some(k);
            Verdict::False { witness: w }
        }
    })
}

/// Re-evaluates the clause a witness claims is violated. `delta` must be
/// the expansion named in the witness, when it names one.
pub fn replay(an: &Analysis, q: ElemSet, delta: Option<&Expansion>, w: &Witness) -> bool {
    let s = an.ring();
    if w.tuple.iter().any(|e| e.index() >= s.size()) || !an.lattice().contains(q) {
        return false;
    }
    if w.expansion.as_deref() != delta.map(Expansion::name) {
        return false;
    }
    let dq = delta.and_then(|d| d.apply(q));
    let jac = an.jacobson();
    let t = &w.tuple;
    if w.predicate == Predicate::Absorbing {
        let (Some(k), Some(dq)) = (w.k, dq) else {
            return false;
        };
        let (len, sub) = absorbing_arities(k, s.n());
        if t.len() != len || !q.contains(s.g_iter_raw(t)) || jac.contains(s.g_iter_raw(&t[..sub])) {
            return false;
        }
        let mut rescued = false;
        for_each_combination(len, sub, |c| {
            if c[sub - 1] != sub - 1 {
                let pick: Vec<Elem> = c.iter().map(|&i| t[i]).collect();
                rescued = dq.contains(s.g_iter_raw(&pick));
            }
            !rescued
        });
        return !rescued;
    }
    if t.len() != s.n() || !q.contains(s.g_at(t)) {
        return false;
    }
    if w.predicate == Predicate::Prime {
        return !t.iter().any(|&x| q.contains(x));
    }
    let (Some(one), Some(i)) = (s.one(), w.index) else {
        return false;
    };
    if i >= t.len() {
        return false;
    }
    let d = s.g_drop(one, t, i);
    match w.predicate {
        Predicate::Primary => !q.contains(t[i]) && !an.lattice().radical(q).is_some_and(|r| r.contains(d)),
        Predicate::J => !jac.contains(t[i]) && !q.contains(d),
        Predicate::DeltaJ => dq.is_some_and(|dq| !jac.contains(t[i]) && !dq.contains(d)),
        Predicate::DeltaPrimary => dq.is_some_and(|dq| !q.contains(t[i]) && !dq.contains(d)),
        Predicate::Prime | Predicate::Absorbing => unreachable!(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorbingVerdict {
    pub k: usize,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionVerdicts {
    pub expansion: String,
    pub image: Vec<String>,
    pub delta_j: Verdict,
    pub delta_primary: Verdict,
    pub absorbing: Vec<AbsorbingVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub structure: String,
    pub ideal: Vec<String>,
    pub proper: bool,
    pub jacobson: Vec<String>,
    pub radical: Vec<String>,
    pub maximal: bool,
    pub prime: Verdict,
    pub primary: Verdict,
    pub j: Verdict,
    pub expansions: Vec<ExpansionVerdicts>,
}

/// Runs every predicate on `q` under each expansion in `registry`.
pub fn classify(
    an: &Analysis,
    q: ElemSet,
    registry: &[Expansion],
    k_max: usize,
    limits: &Limits,
) -> Result<ClassificationReport> {
    an.require_member(q)?;
    let s = an.ring();
    let mut expansions = Vec::new();
    for d in registry {
        let mut absorbing = Vec::new();
        for k in 2..=k_max {
            absorbing.push(AbsorbingVerdict {
                k,
                verdict: is_kn_absorbing_delta_j(an, q, d, k, limits)?,
            });
        }
        expansions.push(ExpansionVerdicts {
            expansion: d.name().to_string(),
            image: s.set_labels(d.at(q)),
            delta_j: is_delta_j(an, q, d)?,
            delta_primary: is_delta_primary(an, q, d)?,
            absorbing,
        });
    }
    Ok(ClassificationReport {
        structure: s.name().to_string(),
        ideal: s.set_labels(q),
        proper: q != s.carrier(),
        jacobson: s.set_labels(an.jacobson()),
        radical: s.set_labels(an.radical_by_primes(q)?),
        maximal: an.lattice().is_maximal(q),
        prime: prime_verdict(an, q)?,
        primary: primary_verdict(an, q)?,
        j: is_j(an, q)?,
        expansions,
    })
}
