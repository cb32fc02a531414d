//! Quotients by hyperideals, homomorphisms, and the expansions they
//! induce.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::axioms::{verify_krasner, Hyperring};
use crate::elem::{for_each_multiset, for_each_tuple, Elem, ElemSet};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::ideals::{check_hyperideal, Analysis};
use crate::limits::{pow_sat, Limits};
use crate::structure::FiniteStructure;

/// Why a quotient could not be formed. Carries labels from the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "defect", rename_all = "kebab-case")]
pub enum QuotientDefect {
    /// Two cosets meet without being equal.
    Overlap { first: Vec<String>, second: Vec<String> },
    /// Two representative tuples of the same cosets give different values.
    IllDefined {
        op: &'static str,
        tuple: Vec<String>,
        other: Vec<String>,
    },
    /// The induced tables are well defined but fail the axioms.
    NotKrasner { failed: Vec<String> },
}

impl fmt::Display for QuotientDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientDefect::Overlap { first, second } => {
                write!(f, "cosets {{{}}} and {{{}}} overlap", first.join(","), second.join(","))
            }
            QuotientDefect::IllDefined { op, tuple, other } => write!(
                f,
                "induced {op} differs on representatives ({}) and ({})",
                tuple.join(","),
                other.join(",")
            ),
            QuotientDefect::NotKrasner { failed } => write!(f, "quotient fails {}", failed.join(", ")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub modulus: ElemSet,
    /// Distinct cosets ordered by least representative.
    pub cosets: Vec<ElemSet>,
    /// Element of the base to the quotient element of its coset.
    pub projection: Vec<Elem>,
    pub ring: Hyperring,
}

impl Quotient {
    pub fn projection_map(&self, base: &FiniteStructure) -> Homomorphism {
        Homomorphism::unchecked(self.projection.clone(), &self.ring, base.size())
    }

    pub fn coset_of(&self, r: Elem) -> ElemSet {
        self.cosets[self.projection[r.index()].index()]
    }
}

/// `f(r, I, 0^(m-2))`.
pub fn coset(s: &FiniteStructure, r: Elem, i: ElemSet) -> ElemSet {
    let mut args = vec![s.zero(); s.m()];
    args[0] = r;
    let mut out = ElemSet::EMPTY;
    for a in i.iter() {
        args[1] = a;
        out = out.union(s.f_at(&args));
    }
    out
}

fn coset_label(s: &FiniteStructure, c: ElemSet) -> String {
    format!("[{}]", s.set_labels(c).join(","))
}

/// Builds `R/I`. The outer error rejects a modulus that is not a
/// hyperideal; the inner one reports a quotient that does not exist.
pub fn quotient(ring: &Hyperring, i: ElemSet) -> Result<std::result::Result<Quotient, QuotientDefect>> {
    if let Err(v) = check_hyperideal(ring, i) {
        return Err(Error::NotAHyperideal {
            set: ring.show_set(i),
            detail: v.describe(ring),
        });
    }
    let size = ring.size();
    let per_elem: Vec<ElemSet> = ring.elements().map(|r| coset(ring, r, i)).collect();
    let mut cosets: Vec<ElemSet> = Vec::new();
    for &c in &per_elem {
        if let Some(&d) = cosets.iter().find(|&&d| d != c && !d.intersection(c).is_empty()) {
            return Ok(Err(QuotientDefect::Overlap {
                first: ring.set_labels(d),
                second: ring.set_labels(c),
            }));
        }
        if !cosets.contains(&c) {
            cosets.push(c);
        }
    }
    cosets.sort_by_key(|c| c.first());
    let projection: Vec<Elem> = per_elem
        .iter()
        .map(|c| Elem::from(cosets.iter().position(|d| d == c).expect("listed")))
        .collect();
    let project = |t: &[Elem]| -> Vec<Elem> {
        let mut k: Vec<Elem> = t.iter().map(|e| projection[e.index()]).collect();
        k.sort();
        k
    };

    let mut f_map: BTreeMap<Vec<Elem>, (ElemSet, Vec<Elem>)> = BTreeMap::new();
    let mut defect = None;
    for_each_multiset(size, ring.m(), |t| {
        let v: ElemSet = ring.f_at(t).iter().map(|z| projection[z.index()]).collect();
        match f_map.get(&project(t)) {
            Some((w, rep)) if *w != v => {
                defect = Some(QuotientDefect::IllDefined {
                    op: "f",
                    tuple: ring.tuple_labels(rep),
                    other: ring.tuple_labels(t),
                });
            }
            Some(_) => {}
            None => {
                f_map.insert(project(t), (v, t.to_vec()));
            }
        }
        defect.is_none()
    });
    let mut g_map: BTreeMap<Vec<Elem>, (Elem, Vec<Elem>)> = BTreeMap::new();
    if defect.is_none() {
        for_each_multiset(size, ring.n(), |t| {
            let v = projection[ring.g_at(t).index()];
            match g_map.get(&project(t)) {
                Some((w, rep)) if *w != v => {
                    defect = Some(QuotientDefect::IllDefined {
                        op: "g",
                        tuple: ring.tuple_labels(rep),
                        other: ring.tuple_labels(t),
                    });
                }
                Some(_) => {}
                None => {
                    g_map.insert(project(t), (v, t.to_vec()));
                }
            }
            defect.is_none()
        });
    }
    if let Some(d) = defect {
        return Ok(Err(d));
    }

    let labels = cosets.iter().map(|&c| coset_label(ring, c)).collect();
    let name = format!("{}/{}", ring.name(), coset_label(ring, i));
    let s = FiniteStructure::from_fns(
        name,
        labels,
        ring.m(),
        ring.n(),
        projection[ring.zero().index()],
        |t| f_map[t].0,
        |t| g_map[t].0,
    )?;
    let report = verify_krasner(&s);
    if !report.passed() {
        return Ok(Err(QuotientDefect::NotKrasner {
            failed: report.failures().map(|c| c.axiom.to_string()).collect(),
        }));
    }
    Ok(Ok(Quotient {
        modulus: i,
        cosets,
        projection,
        ring: Hyperring::trusted(s),
    }))
}

/// A tuple on which `h` fails to commute with `f` or `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomViolation {
    pub op: &'static str,
    pub tuple: Vec<Elem>,
    pub labels: Vec<String>,
}

/// Least multiset with `h(f(x)) != f(h(x))`, then likewise for `g`.
pub fn hom_violation(src: &FiniteStructure, tgt: &FiniteStructure, map: &[Elem]) -> Result<Option<HomViolation>> {
    if src.m() != tgt.m() || src.n() != tgt.n() {
        return Err(Error::NotHomomorphism(format!(
            "arities ({},{}) and ({},{}) differ",
            src.m(),
            src.n(),
            tgt.m(),
            tgt.n()
        )));
    }
    if map.len() != src.size() {
        return Err(Error::NotHomomorphism(format!(
            "map has {} entries for {} elements",
            map.len(),
            src.size()
        )));
    }
    if let Some(e) = map.iter().find(|e| e.index() >= tgt.size()) {
        return Err(Error::ForeignElement(e.index()));
    }
    let h = |t: &[Elem]| -> Vec<Elem> { t.iter().map(|e| map[e.index()]).collect() };
    let mut found = None;
    for_each_multiset(src.size(), src.m(), |t| {
        let lhs: ElemSet = src.f_at(t).iter().map(|z| map[z.index()]).collect();
        if lhs != tgt.f_at(&h(t)) {
            found = Some(("f", t.to_vec()));
        }
        found.is_none()
    });
    if found.is_none() {
        for_each_multiset(src.size(), src.n(), |t| {
            if map[src.g_at(t).index()] != tgt.g_at(&h(t)) {
                found = Some(("g", t.to_vec()));
            }
            found.is_none()
        });
    }
    Ok(found.map(|(op, tuple)| HomViolation {
        op,
        labels: src.tuple_labels(&tuple),
        tuple,
    }))
}

/// A verified homomorphism, stored as its table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    map: Vec<Elem>,
    target_size: usize,
    target_zero: Elem,
}

impl Homomorphism {
    pub fn new(src: &FiniteStructure, tgt: &FiniteStructure, map: Vec<Elem>) -> Result<Self> {
        if let Some(v) = hom_violation(src, tgt, &map)? {
            return Err(Error::NotHomomorphism(format!("{} at ({})", v.op, v.labels.join(","))));
        }
        Ok(Self::unchecked(map, tgt, src.size()))
    }

    fn unchecked(map: Vec<Elem>, tgt: &FiniteStructure, src_size: usize) -> Self {
        debug_assert_eq!(map.len(), src_size);
        Homomorphism {
            map,
            target_size: tgt.size(),
            target_zero: tgt.zero(),
        }
    }

    pub fn identity(s: &FiniteStructure) -> Self {
        Self::unchecked(s.elements().collect(), s, s.size())
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn apply(&self, e: Elem) -> Elem {
        self.map[e.index()]
    }

    pub fn image(&self, set: ElemSet) -> ElemSet {
        set.iter().map(|e| self.apply(e)).collect()
    }

    pub fn preimage(&self, set: ElemSet) -> ElemSet {
        (0..self.map.len())
            .map(Elem::from)
            .filter(|&e| set.contains(self.apply(e)))
            .collect()
    }

    pub fn kernel(&self) -> ElemSet {
        self.preimage(ElemSet::singleton(self.target_zero))
    }

    pub fn is_injective(&self) -> bool {
        let img: ElemSet = self.map.iter().copied().collect();
        img.len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        let img: ElemSet = self.map.iter().copied().collect();
        img.len() == self.target_size
    }
}

/// A target member at which `δ(h⁻¹(I)) = h⁻¹(γ(I))` breaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DeltaGammaViolation {
    /// `h⁻¹(I)` is not a hyperideal of the source, so `δ` is undefined there.
    PreimageNotIdeal { ideal: ElemSet },
    Mismatch { ideal: ElemSet, lhs: ElemSet, rhs: ElemSet },
}

impl DeltaGammaViolation {
    pub fn ideal(&self) -> ElemSet {
        match self {
            DeltaGammaViolation::PreimageNotIdeal { ideal } | DeltaGammaViolation::Mismatch { ideal, .. } => *ideal,
        }
    }
}

/// First target member, in lattice order, violating the δγ condition.
pub fn delta_gamma_violation(
    h: &Homomorphism,
    src: &Analysis,
    tgt: &Analysis,
    delta: &Expansion,
    gamma: &Expansion,
) -> Option<DeltaGammaViolation> {
    for &ideal in tgt.lattice().members() {
        let pre = h.preimage(ideal);
        let Some(lhs) = delta.apply(pre) else {
            debug_assert!(!src.lattice().contains(pre));
            return Some(DeltaGammaViolation::PreimageNotIdeal { ideal });
        };
        let rhs = h.preimage(gamma.at(ideal));
        if lhs != rhs {
            return Some(DeltaGammaViolation::Mismatch { ideal, lhs, rhs });
        }
    }
    None
}

pub fn is_delta_gamma_hom(h: &Homomorphism, src: &Analysis, tgt: &Analysis, delta: &Expansion, gamma: &Expansion) -> bool {
    delta_gamma_violation(h, src, tgt, delta, gamma).is_none()
}

/// The expansion `K ↦ π(δ(π⁻¹(K)))` on the quotient lattice.
pub fn delta_q(base: &Analysis, q: &Quotient, quotient: &Analysis, delta: &Expansion) -> Result<Expansion> {
    let pi = q.projection_map(base.ring());
    let name = format!("{}_q", delta.name());
    for &k in quotient.lattice().members() {
        if delta.apply(pi.preimage(k)).is_none() {
            return Err(Error::InvalidExpansion {
                name,
                detail: format!("preimage of {} is not a hyperideal", quotient.ring().show_set(k)),
            });
        }
    }
    Ok(Expansion::from_fn(name, quotient, |k| pi.image(delta.at(pi.preimage(k)))))
}

/// Every zero-preserving homomorphism from `src` to `tgt`, in
/// lexicographic order of their tables.
pub fn homomorphisms(src: &FiniteStructure, tgt: &FiniteStructure, limits: &Limits) -> Result<Vec<Homomorphism>> {
    let space = pow_sat(tgt.size(), src.size());
    if space > limits.map_cap {
        return Err(Error::CapExceeded {
            what: "map space",
            size: space,
            cap: limits.map_cap,
        });
    }
    if src.m() != tgt.m() || src.n() != tgt.n() {
        return Ok(vec![]);
    }
    let z = src.zero().index();
    let mut out = vec![];
    let mut map = vec![tgt.zero(); src.size()];
    let mut err = None;
    for_each_tuple(tgt.size(), src.size() - 1, |rest| {
        map[..z].copy_from_slice(&rest[..z]);
        map[z + 1..].copy_from_slice(&rest[z..]);
        match hom_violation(src, tgt, &map) {
            Ok(None) => out.push(Homomorphism::unchecked(map.clone(), tgt, src.size())),
            Ok(Some(_)) => {}
            Err(e) => err = Some(e),
        }
        err.is_none()
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_r4, enumerate_structures, isomorphic, DEFAULT_SHAPES};
    use crate::expansion::registry;

    fn rings() -> Vec<Hyperring> {
        let mut out = vec![Hyperring::new(builtin_r4()).unwrap()];
        for &(m, n) in &DEFAULT_SHAPES {
            for k in 1..=3 {
                for s in enumerate_structures(m, n, k, &Limits::default()).unwrap().structures {
                    out.push(Hyperring::new(s).unwrap());
                }
            }
        }
        out
    }

    /// Coset oracle: `y ~ r` iff `f(y, -r, 0^(m-2))` meets `I`.
    fn coset_oracle(s: &Hyperring, r: Elem, i: ElemSet) -> ElemSet {
        let neg = crate::axioms::inverses(s).ok().unwrap()[r.index()];
        s.elements()
            .filter(|&y| {
                let mut args = vec![s.zero(); s.m()];
                args[0] = y;
                args[1] = neg;
                !s.f_at(&args).intersection(i).is_empty()
            })
            .collect()
    }

    #[test]
    fn quotients_across_catalog() {
        let mut built = 0;
        for ring in rings() {
            let an = Analysis::new(ring.clone()).unwrap();
            for &i in an.lattice().members() {
                for r in ring.elements() {
                    assert_eq!(coset(&ring, r, i), coset_oracle(&ring, r, i));
                }
                let Ok(q) = quotient(&ring, i).unwrap() else { continue };
                built += 1;
                let pi = q.projection_map(&ring);
                assert!(hom_violation(&ring, &q.ring, pi.map()).unwrap().is_none());
                assert!(pi.is_surjective());
                assert_eq!(pi.kernel(), i);
                assert_eq!(pi.image(i), ElemSet::singleton(q.ring.zero()));
                assert_eq!(pi.preimage(ElemSet::singleton(q.ring.zero())), i);
                let union = q.cosets.iter().fold(ElemSet::EMPTY, |a, &c| a.union(c));
                assert_eq!(union, ring.carrier());
                let total: usize = q.cosets.iter().map(|c| c.len()).sum();
                assert_eq!(total, ring.size());
            }
        }
        assert!(built > 0);
    }

    #[test]
    fn trivial_moduli() {
        for ring in rings() {
            let zero = ElemSet::singleton(ring.zero());
            let q = quotient(&ring, zero).unwrap().unwrap();
            assert!(q.cosets.iter().all(|c| c.len() == 1));
            assert!(isomorphic(&ring, &q.ring));
            let full = quotient(&ring, ring.carrier()).unwrap().unwrap();
            assert_eq!(full.ring.size(), 1);
        }
    }

    #[test]
    fn r4_quotient_labels() {
        let r = Hyperring::new(builtin_r4()).unwrap();
        let i = r.parse_set("0,1").unwrap();
        match quotient(&r, i).unwrap() {
            Ok(q) => assert_eq!(q.ring.label(q.ring.zero()), "[0,1]"),
            Err(d) => panic!("{d}"),
        }
        assert!(quotient(&r, r.parse_set("1").unwrap()).is_err());
    }

    #[test]
    fn mutated_identity_is_rejected() {
        let mut checked = 0;
        for ring in rings() {
            let Some(one) = ring.one() else { continue };
            let mut map: Vec<Elem> = ring.elements().collect();
            if ring.size() == 2 {
                // the mutated map is the zero map, which is a homomorphism
                map[one.index()] = ring.zero();
                assert!(Homomorphism::new(&ring, &ring, map).is_ok());
                continue;
            }
            if one == ring.zero() {
                continue;
            }
            assert!(Homomorphism::new(&ring, &ring, map.clone()).is_ok());
            map[one.index()] = ring.zero();
            assert!(hom_violation(&ring, &ring, &map).unwrap().is_some());
            assert!(Homomorphism::new(&ring, &ring, map).is_err());
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn delta_gamma_fixtures() {
        for ring in rings() {
            let an = Analysis::new(ring.clone()).unwrap();
            let id = Homomorphism::identity(&ring);
            assert_eq!(id.kernel(), ElemSet::singleton(ring.zero()));
            let [d0, _, dr] = <[Expansion; 3]>::try_from(registry(&an)).unwrap();
            assert!(is_delta_gamma_hom(&id, &an, &an, &d0, &d0));
            let v = delta_gamma_violation(&id, &an, &an, &d0, &dr);
            if ring.size() > 1 {
                assert_eq!(v.unwrap().ideal(), ElemSet::singleton(ring.zero()));
            }
        }
    }

    #[test]
    fn enumerated_homs_include_identity_and_projections() {
        let all = rings();
        for ring in all.iter().filter(|r| r.size() <= 3) {
            let homs = homomorphisms(ring, ring, &Limits::default()).unwrap();
            assert!(homs.contains(&Homomorphism::identity(ring)));
            let an = Analysis::new(ring.clone()).unwrap();
            for &i in an.lattice().members() {
                if let Ok(q) = quotient(ring, i).unwrap() {
                    let homs = homomorphisms(ring, &q.ring, &Limits::default()).unwrap();
                    assert!(homs.contains(&q.projection_map(ring)));
                }
            }
        }
        let capped = Limits {
            map_cap: 2,
            ..Limits::default()
        };
        assert!(homomorphisms(&all[0], &all[0], &capped).is_err());
    }

    #[test]
    fn delta_q_is_an_expansion() {
        for ring in rings() {
            let an = Analysis::new(ring.clone()).unwrap();
            for &i in an.lattice().members() {
                let Ok(q) = quotient(&ring, i).unwrap() else { continue };
                let qa = Analysis::new(q.ring.clone()).unwrap();
                for d in registry(&an) {
                    let dq = delta_q(&an, &q, &qa, &d).unwrap();
                    assert!(dq.validate().passed(), "{} on {}", dq.name(), q.ring.name());
                    if d.name() == "delta0" {
                        assert!(dq.entries().all(|(k, v)| k == v));
                    }
                }
            }
        }
    }
}
