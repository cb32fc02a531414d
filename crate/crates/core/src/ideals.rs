//! Hyperideals: membership test, lattice enumeration, and the classical
//! predicates and constructions built on the lattice.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::axioms::Hyperring;
use crate::elem::{for_each_multiset, for_each_tuple, Elem, ElemSet};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::structure::FiniteStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealClause {
    ContainsZero,
    Closure,
    Absorption,
    Solvability,
}

impl fmt::Display for IdealClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealClause::ContainsZero => "contains-zero",
            IdealClause::Closure => "closure",
            IdealClause::Absorption => "absorption",
            IdealClause::Solvability => "solvability",
        })
    }
}

/// First violated hyperideal clause, with the offending tuple.
///
/// * closure: `m` members whose f-value leaves the set;
/// * absorption: `(x_1, .., x_{n-1}, i)` with `g(x, i)` outside the set;
/// * solvability: `(b_1, .., b_{m-1}, b)` with no member `y` such that
///   `b` is in `f(b_1, .., b_{m-1}, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealViolation {
    pub clause: IdealClause,
    pub tuple: Vec<Elem>,
}

impl IdealViolation {
    pub fn describe(&self, s: &FiniteStructure) -> String {
        format!("{} fails at {}", self.clause, s.show_tuple(&self.tuple))
    }
}

/// Checks every hyperideal clause, in the order contains-zero, closure,
/// absorption, solvability.
pub fn check_hyperideal(s: &FiniteStructure, set: ElemSet) -> std::result::Result<(), IdealViolation> {
    let (m, n) = (s.m(), s.n());
    if !set.contains(s.zero()) || !set.is_subset(s.carrier()) {
        return Err(IdealViolation {
            clause: IdealClause::ContainsZero,
            tuple: vec![],
        });
    }
    let members = set.to_vec();
    let k = members.len();
    let mut buf = vec![Elem(0); m.max(n)];

    let mut bad = None;
    for_each_tuple(k, m, |t| {
        for (b, &i) in buf.iter_mut().zip(t) {
            *b = members[i.index()];
        }
        if !s.f_at(&buf[..m]).is_subset(set) {
            bad = Some(buf[..m].to_vec());
        }
        bad.is_none()
    });
    if let Some(tuple) = bad {
        return Err(IdealViolation {
            clause: IdealClause::Closure,
            tuple,
        });
    }

    for_each_tuple(s.size(), n - 1, |t| {
        buf[..n - 1].copy_from_slice(t);
        for &i in &members {
            buf[n - 1] = i;
            if !set.contains(s.g_at(&buf[..n])) {
                bad = Some(buf[..n].to_vec());
                return false;
            }
        }
        true
    });
    if let Some(tuple) = bad {
        return Err(IdealViolation {
            clause: IdealClause::Absorption,
            tuple,
        });
    }

    for_each_tuple(k, m, |t| {
        for (b, &i) in buf.iter_mut().zip(t) {
            *b = members[i.index()];
        }
        let target = buf[m - 1];
        let solvable = members.iter().any(|&y| {
            buf[m - 1] = y;
            s.f_at(&buf[..m]).contains(target)
        });
        if !solvable {
            buf[m - 1] = target;
            bad = Some(buf[..m].to_vec());
        }
        solvable
    });
    if let Some(tuple) = bad {
        return Err(IdealViolation {
            clause: IdealClause::Solvability,
            tuple,
        });
    }
    Ok(())
}

pub fn is_hyperideal(s: &FiniteStructure, set: ElemSet) -> bool {
    check_hyperideal(s, set).is_ok()
}

/// All hyperideals by scanning every subset that contains zero.
pub fn hyperideals_by_subsets(s: &FiniteStructure) -> Vec<ElemSet> {
    let size = s.size();
    let zero = ElemSet::singleton(s.zero());
    let mut out: Vec<ElemSet> = (0..1u64 << size)
        .map(|bits| ElemSet(bits as u32))
        .filter(|&c| zero.is_subset(c) && is_hyperideal(s, c))
        .collect();
    out.sort_by(ElemSet::canonical_cmp);
    out
}

/// Smallest superset of `seed` containing zero that is closed under f,
/// additive inverses, and g-absorption.
pub fn closure(s: &FiniteStructure, seed: ElemSet, inverse: &[Elem]) -> ElemSet {
    let (m, n) = (s.m(), s.n());
    let full = s.carrier();
    let mut cur = seed.union(ElemSet::singleton(s.zero()));
    loop {
        let mut next = cur;
        next = next.union(s.f_sets(&vec![cur; m]));
        let mut absorb = vec![full; n];
        absorb[n - 1] = cur;
        next = next.union(s.g_sets(&absorb));
        for x in cur.iter() {
            next.insert(inverse[x.index()]);
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// All hyperideals as closures of generator sets, grown one generator at a
/// time from the closure of `{0}`.
pub fn hyperideals_by_closures(h: &Hyperring) -> Vec<ElemSet> {
    let inverse = crate::axioms::inverses(h).expect("verified structure has unique inverses");
    let start = closure(h, ElemSet::EMPTY, &inverse);
    let mut seen = HashSet::from([start.0]);
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(c) = queue.pop_front() {
        if is_hyperideal(h, c) {
            out.push(c);
        }
        for x in h.carrier().difference(c).iter() {
            let mut seed = c;
            seed.insert(x);
            let next = closure(h, seed, &inverse);
            if seen.insert(next.0) {
                queue.push_back(next);
            }
        }
    }
    out.sort_by(ElemSet::canonical_cmp);
    out
}

/// The hyperideal lattice of a verified structure, with the derived
/// maximal ideals, Jacobson radical, primes and radicals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealLattice {
    carrier: ElemSet,
    members: Vec<ElemSet>,
    maximal: Vec<ElemSet>,
    jacobson: ElemSet,
    primes: Vec<ElemSet>,
    radicals: Vec<ElemSet>,
}

impl IdealLattice {
    pub fn compute(h: &Hyperring, limits: &Limits) -> Result<Self> {
        limits.check_shape(h.size(), h.m(), h.n())?;
        let members = if h.size() > limits.raw_subset_scan_max {
            hyperideals_by_closures(h)
        } else {
            hyperideals_by_subsets(h)
        };
        Ok(Self::from_members(h, members))
    }

    fn from_members(h: &Hyperring, members: Vec<ElemSet>) -> Self {
        let carrier = h.carrier();
        let proper: Vec<ElemSet> = members.iter().copied().filter(|&i| i != carrier).collect();
        let maximal: Vec<ElemSet> = proper
            .iter()
            .copied()
            .filter(|&i| !proper.iter().any(|&j| j != i && i.is_subset(j)))
            .collect();
        let jacobson = if maximal.is_empty() {
            carrier
        } else {
            maximal.iter().fold(carrier, |acc, &mx| acc.intersection(mx))
        };
        let primes: Vec<ElemSet> = proper
            .iter()
            .copied()
            .filter(|&p| prime_counterexample_unchecked(h, p).is_none())
            .collect();
        let radicals = members
            .iter()
            .map(|&i| {
                primes
                    .iter()
                    .filter(|&&p| i.is_subset(p))
                    .fold(None, |acc: Option<ElemSet>, &p| Some(acc.map_or(p, |a| a.intersection(p))))
                    .unwrap_or(carrier)
            })
            .collect();
        IdealLattice {
            carrier,
            members,
            maximal,
            jacobson,
            primes,
            radicals,
        }
    }

    pub fn members(&self) -> &[ElemSet] {
        &self.members
    }

    pub fn proper(&self) -> impl Iterator<Item = ElemSet> + '_ {
        self.members.iter().copied().filter(move |&i| i != self.carrier)
    }

    pub fn contains(&self, set: ElemSet) -> bool {
        self.members.contains(&set)
    }

    pub fn carrier(&self) -> ElemSet {
        self.carrier
    }

    pub fn maximal(&self) -> &[ElemSet] {
        &self.maximal
    }

    pub fn jacobson(&self) -> ElemSet {
        self.jacobson
    }

    pub fn primes(&self) -> &[ElemSet] {
        &self.primes
    }

    pub fn is_prime(&self, p: ElemSet) -> bool {
        self.primes.contains(&p)
    }

    pub fn is_maximal(&self, q: ElemSet) -> bool {
        self.maximal.contains(&q)
    }

    /// Exactly one maximal hyperideal. The one-element structure has none,
    /// so it is not local.
    pub fn is_local(&self) -> bool {
        self.maximal.len() == 1
    }

    /// Radical as the intersection of the primes containing `i`, or the
    /// carrier when no prime contains it.
    pub fn radical(&self, i: ElemSet) -> Option<ElemSet> {
        self.members.iter().position(|&x| x == i).map(|k| self.radicals[k])
    }

    /// Smallest lattice member containing `set`.
    pub fn enclosing(&self, set: ElemSet) -> ElemSet {
        self.members
            .iter()
            .filter(|&&i| set.is_subset(i))
            .fold(self.carrier, |acc, &i| acc.intersection(i))
    }

    /// Intersection of the maximal hyperideals containing `q`.
    pub fn maximal_above(&self, q: ElemSet) -> ElemSet {
        self.maximal
            .iter()
            .filter(|&&mx| q.is_subset(mx))
            .fold(self.carrier, |acc, &mx| acc.intersection(mx))
    }

    /// Re-runs the closure-based enumeration and compares it with the
    /// stored members.
    pub fn agrees_with_closures(&self, h: &Hyperring) -> bool {
        hyperideals_by_closures(h) == self.members
    }
}

/// A verified structure bundled with its hyperideal lattice.
#[derive(Clone, Debug)]
pub struct Analysis {
    ring: Hyperring,
    lattice: IdealLattice,
}

impl Analysis {
    pub fn new(ring: Hyperring) -> Result<Self> {
        Self::with_limits(ring, &Limits::default())
    }

    pub fn with_limits(ring: Hyperring, limits: &Limits) -> Result<Self> {
        let lattice = IdealLattice::compute(&ring, limits)?;
        Ok(Analysis { ring, lattice })
    }

    pub fn ring(&self) -> &Hyperring {
        &self.ring
    }

    pub fn lattice(&self) -> &IdealLattice {
        &self.lattice
    }

    pub fn one(&self) -> Result<Elem> {
        self.ring.one().ok_or(Error::NoScalarIdentity)
    }

    pub fn jacobson(&self) -> ElemSet {
        self.lattice.jacobson
    }

    pub fn require_member(&self, q: ElemSet) -> Result<()> {
        if self.lattice.contains(q) {
            Ok(())
        } else {
            let detail = match check_hyperideal(&self.ring, q) {
                Err(v) => v.describe(&self.ring),
                Ok(()) => "not in the lattice".to_string(),
            };
            Err(Error::NotAHyperideal {
                set: self.ring.show_set(q),
                detail,
            })
        }
    }

    pub fn require_proper(&self, q: ElemSet) -> Result<()> {
        self.require_member(q)?;
        if q == self.ring.carrier() {
            Err(Error::Improper)
        } else {
            Ok(())
        }
    }

    pub fn maximal_hyperideals(&self) -> &[ElemSet] {
        &self.lattice.maximal
    }

    pub fn is_local(&self) -> bool {
        self.lattice.is_local()
    }

    /// Element form of primeness: the least n-tuple whose product lies in
    /// `p` while no factor does.
    pub fn prime_counterexample(&self, p: ElemSet) -> Result<Option<Vec<Elem>>> {
        self.require_proper(p)?;
        Ok(prime_counterexample_unchecked(&self.ring, p))
    }

    pub fn is_prime(&self, p: ElemSet) -> Result<bool> {
        Ok(self.prime_counterexample(p)?.is_none())
    }

    /// Ideal form of primeness: hyperideals `U_1..U_n` with every product
    /// in `p` and no `U_i` inside `p`.
    pub fn prime_counterexample_by_ideals(&self, p: ElemSet) -> Result<Option<Vec<ElemSet>>> {
        self.require_proper(p)?;
        let members = &self.lattice.members;
        let n = self.ring.n();
        let mut found = None;
        for_each_multiset(members.len(), n, |t| {
            let us: Vec<ElemSet> = t.iter().map(|i| members[i.index()]).collect();
            if self.ring.g_sets(&us).is_subset(p) && !us.iter().any(|u| u.is_subset(p)) {
                found = Some(us);
            }
            found.is_none()
        });
        Ok(found)
    }

    pub fn radical_by_primes(&self, i: ElemSet) -> Result<ElemSet> {
        self.require_member(i)?;
        Ok(self.lattice.radical(i).expect("member"))
    }

    /// Largest power exponent scanned by [`Analysis::radical_by_powers`].
    pub fn power_bound(&self) -> usize {
        self.ring.size() * (self.ring.n() - 1) + 1
    }

    /// `x^t`: `g(x^(t), 1^(n-t))` for `t <= n`, else the iterated product of
    /// `t = l(n-1)+1` copies.
    pub fn power(&self, x: Elem, t: usize) -> Result<Elem> {
        let one = self.one()?;
        let n = self.ring.n();
        if t <= n {
            let mut args = vec![one; n];
            args[..t].fill(x);
            Ok(self.ring.g_at(&args))
        } else {
            Ok(self.ring.eval_g_iter(&vec![x; t])?)
        }
    }

    /// Exponents scanned for the power characterization: every `t <= n`,
    /// then every `t = l(n-1)+1` up to [`Analysis::power_bound`].
    pub fn power_exponents(&self) -> Vec<usize> {
        let n = self.ring.n();
        (1..=self.power_bound())
            .filter(|&t| t <= n || (t - 1) % (n - 1) == 0)
            .collect()
    }

    /// Elements some power of which lies in `i`.
    pub fn radical_by_powers(&self, i: ElemSet) -> Result<ElemSet> {
        self.one()?;
        let exps = self.power_exponents();
        let mut out = ElemSet::EMPTY;
        for x in self.ring.elements() {
            for &t in &exps {
                if i.contains(self.power(x, t)?) {
                    out.insert(x);
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Least `(tuple, i)` with product in `q`, `x_i` outside `q`, and the
    /// product with `x_i` replaced by 1 outside the radical of `q`.
    pub fn primary_counterexample(&self, q: ElemSet) -> Result<Option<(Vec<Elem>, usize)>> {
        self.require_proper(q)?;
        let one = self.one()?;
        let rad = self.lattice.radical(q).expect("member");
        let mut found = None;
        for_each_multiset(self.ring.size(), self.ring.n(), |t| {
            if q.contains(self.ring.g_at(t)) {
                for (i, &xi) in t.iter().enumerate() {
                    if !q.contains(xi) && !rad.contains(self.ring.g_drop(one, t, i)) {
                        found = Some((t.to_vec(), i));
                        return false;
                    }
                }
            }
            true
        });
        Ok(found)
    }

    pub fn is_primary(&self, q: ElemSet) -> Result<bool> {
        Ok(self.primary_counterexample(q)?.is_none())
    }

    /// `{x | g(x, s, 1^(n-2)) in q for every s in t}`.
    pub fn residual(&self, q: ElemSet, t: ElemSet) -> Result<ElemSet> {
        let one = self.one()?;
        if t.is_empty() {
            return Err(Error::EmptyArgument);
        }
        self.require_member(q)?;
        Ok(self
            .ring
            .elements()
            .filter(|&x| t.iter().all(|s| q.contains(self.ring.g_pair(one, x, s))))
            .collect())
    }

    /// The set `{g(r, x, 1^(n-2)) | r in R}` and the smallest hyperideal
    /// containing it.
    pub fn principal_ideal(&self, x: Elem) -> Result<PrincipalIdeal> {
        let one = self.one()?;
        if x.index() >= self.ring.size() {
            return Err(Error::ForeignElement(x.index()));
        }
        let multiples: ElemSet = self.ring.elements().map(|r| self.ring.g_pair(one, r, x)).collect();
        let closed = self.lattice.contains(multiples);
        Ok(PrincipalIdeal {
            generator: x,
            multiples,
            ideal: if closed { multiples } else { self.lattice.enclosing(multiples) },
            formula_closed: closed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalIdeal {
    pub generator: Elem,
    /// The multiples of the generator.
    pub multiples: ElemSet,
    /// Smallest hyperideal containing `multiples`.
    pub ideal: ElemSet,
    /// Whether the multiples already formed a hyperideal.
    pub formula_closed: bool,
}

fn prime_counterexample_unchecked(s: &FiniteStructure, p: ElemSet) -> Option<Vec<Elem>> {
    let mut found = None;
    for_each_multiset(s.size(), s.n(), |t| {
        if p.contains(s.g_at(t)) && !t.iter().any(|&x| p.contains(x)) {
            found = Some(t.to_vec());
        }
        found.is_none()
    });
    found
}
