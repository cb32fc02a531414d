//! Built-in example structures and exhaustive enumeration of small
//! Krasner (m,n)-hyperrings up to relabelling.

use std::collections::{BTreeMap, HashMap};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::axioms::{self, verify_krasner, AxiomReport, Hyperring};
use crate::elem::{for_each_tuple, multisets, Elem, ElemSet};
use crate::error::{Error, Result};
use crate::limits::{pow_sat, Limits};
use crate::structure::{dense_index, FiniteStructure};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Three elements `{0, 1, x}` with ternary f and ternary g.
pub fn builtin_a3() -> FiniteStructure {
    let (z, o, x) = (Elem(0), Elem(1), Elem(2));
    let all = ElemSet::full(3);
    FiniteStructure::from_fns(
        "a3-33",
        labels(&["0", "1", "x"]),
        3,
        3,
        z,
        |t| match (t[0].0, t[1].0, t[2].0) {
            (0, 0, 0) => ElemSet::singleton(z),
            (0, 0, 1) | (0, 1, 1) | (1, 1, 1) => ElemSet::singleton(o),
            (0, 0, 2) | (0, 2, 2) | (2, 2, 2) => ElemSet::singleton(x),
            _ => all,
        },
        |t| {
            if t.contains(&z) {
                z
            } else if t.iter().all(|&e| e == o) {
                o
            } else {
                x
            }
        },
    )
    .expect("built-in table is total")
}

/// Four elements `{0, 1, alpha, beta}` with binary f and 4-ary g that is
/// `alpha` on products of `alpha`/`beta` only and 0 otherwise.
pub fn builtin_r4() -> FiniteStructure {
    let set = |ids: &[u8]| ids.iter().map(|&i| Elem(i)).collect::<ElemSet>();
    FiniteStructure::from_fns(
        "r4-24",
        labels(&["0", "1", "alpha", "beta"]),
        2,
        4,
        Elem(0),
        |t| match (t[0].0, t[1].0) {
            (0, b) => set(&[b]),
            (1, 1) => set(&[0, 1]),
            (1, 2) => set(&[3]),
            (1, 3) => set(&[2, 3]),
            (2, 2) => set(&[0]),
            (2, 3) => set(&[1]),
            (3, 3) => set(&[0, 1]),
            _ => unreachable!("arguments are sorted"),
        },
        |t| {
            if t.iter().all(|e| e.0 >= 2) {
                Elem(2)
            } else {
                Elem(0)
            }
        },
    )
    .expect("built-in table is total")
}

/// The one-element structure `{0}`.
pub fn trivial_structure(m: usize, n: usize) -> FiniteStructure {
    FiniteStructure::from_fns(
        format!("trivial-m{m}n{n}"),
        labels(&["0"]),
        m,
        n,
        Elem(0),
        |_| ElemSet::singleton(Elem(0)),
        |_| Elem(0),
    )
    .expect("trivial table is total")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Builtin,
    Enumerated,
    Sampled,
}

/// A statement about a built-in structure that the audit checks rather
/// than assumes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Claim {
    /// The structure satisfies every Krasner axiom.
    Krasner,
    /// `(R, f)` is a canonical m-ary hypergroup.
    CanonicalHypergroup,
    /// The listed labels form a J-hyperideal.
    JHyperideal { ideal: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedClaim {
    pub id: String,
    pub statement: String,
    pub claim: Claim,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub structure: FiniteStructure,
    pub provenance: Provenance,
    pub report: AxiomReport,
    pub ring: Option<Hyperring>,
    pub claims: Vec<ExpectedClaim>,
}

impl CatalogEntry {
    pub fn new(structure: FiniteStructure, provenance: Provenance, claims: Vec<ExpectedClaim>) -> Self {
        let report = verify_krasner(&structure);
        let ring = report.passed().then(|| Hyperring::trusted(structure.clone()));
        CatalogEntry {
            structure,
            provenance,
            report,
            ring,
            claims,
        }
    }

    pub fn name(&self) -> &str {
        self.structure.name()
    }
}

/// The two built-in examples with their expected claims.
pub fn builtin_examples() -> Vec<CatalogEntry> {
    let claim = |id: &str, statement: &str, claim: Claim| ExpectedClaim {
        id: id.to_string(),
        statement: statement.to_string(),
        claim,
    };
    let j = |ids: &[&str]| Claim::JHyperideal { ideal: labels(ids) };
    vec![
        CatalogEntry::new(
            builtin_a3(),
            Provenance::Builtin,
            vec![
                claim("a3-33/krasner", "the tables define a Krasner (3,3)-hyperring", Claim::Krasner),
                claim("a3-33/j-zero", "{0} is a J-hyperideal", j(&["0"])),
                claim("a3-33/j-zero-x", "{0,x} is a J-hyperideal", j(&["0", "x"])),
            ],
        ),
        CatalogEntry::new(
            builtin_r4(),
            Provenance::Builtin,
            vec![
                claim(
                    "r4-24/canonical",
                    "(R, f) is a canonical 2-ary hypergroup",
                    Claim::CanonicalHypergroup,
                ),
                claim("r4-24/krasner", "the tables define a Krasner (2,4)-hyperring", Claim::Krasner),
                claim("r4-24/j-zero", "{0} is a 4-ary J-hyperideal", j(&["0"])),
            ],
        ),
    ]
}

/// Arity pairs covered exhaustively by the default catalog.
pub const DEFAULT_SHAPES: [(usize, usize); 4] = [(2, 2), (3, 2), (2, 3), (3, 3)];
/// Largest order enumerated exhaustively by the default catalog.
pub const DEFAULT_MAX_ORDER: usize = 3;
/// Number of identity-free structures drawn for the order-4 slice of the
/// default catalog.
pub const DEFAULT_SAMPLE: usize = 16;
pub const DEFAULT_SEED: u64 = 0x6b6d6e;

/// Built-ins, every verified structure of order at most 3 for the
/// default arity pairs, and an order-4 (2,2) slice: every structure with a
/// scalar identity plus a seeded sample of the rest.
pub fn default_catalog(seed: u64, limits: &Limits) -> Result<Vec<CatalogEntry>> {
    let mut out = builtin_examples();
    for &(m, n) in &DEFAULT_SHAPES {
        for order in 1..=DEFAULT_MAX_ORDER {
            let e = enumerate_structures(m, n, order, limits)?;
            out.extend(
                e.structures
                    .into_iter()
                    .map(|s| CatalogEntry::new(s, Provenance::Enumerated, vec![])),
            );
        }
    }
    let (unital, rest): (Vec<_>, Vec<_>) = enumerate_structures(2, 2, 4, limits)?
        .structures
        .into_iter()
        .partition(|s| s.one().is_some());
    let mut slice = unital;
    slice.extend(sample_of(rest, DEFAULT_SAMPLE, seed));
    // names carry the enumeration index
    slice.sort_by(|a, b| a.name().cmp(b.name()));
    out.extend(slice.into_iter().map(|s| CatalogEntry::new(s, Provenance::Sampled, vec![])));
    Ok(out)
}

/// `count` structures drawn without replacement from the enumeration of
/// `(m, n, order)`, in enumeration order.
pub fn sampled_slice(
    m: usize,
    n: usize,
    order: usize,
    count: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<FiniteStructure>> {
    let all = enumerate_structures(m, n, order, limits)?.structures;
    Ok(sample_of(all, count, seed))
}

/// `count` items without replacement, in their original order.
fn sample_of<T>(all: Vec<T>, count: usize, seed: u64) -> Vec<T> {
    if all.len() <= count {
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = vec![false; all.len()];
    for i in sample(&mut rng, all.len(), count) {
        keep[i] = true;
    }
    all.into_iter().zip(keep).filter_map(|(x, k)| k.then_some(x)).collect()
}

/// Result of enumerating all Krasner structures of one shape.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub m: usize,
    pub n: usize,
    pub order: usize,
    /// One canonical representative per isomorphism class, sorted by
    /// canonical key.
    pub structures: Vec<FiniteStructure>,
    /// Verified structures with zero at index 0, before identifying
    /// relabellings.
    pub raw_count: u64,
    /// Sum of the orbit sizes of the representatives; equals `raw_count`.
    pub orbit_sum: u64,
    /// Hyperoperation tables visited.
    pub candidates: u128,
    /// Set when the candidate cap stopped the scan early.
    pub truncated: bool,
}

type CanonicalKey = (Vec<u32>, Vec<u8>);

/// Permutations of `0..k` that send `zero` to 0.
fn zero_fixing_perms(k: usize, zero: Elem) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let rest: Vec<usize> = (0..k).filter(|&i| i != zero.index()).collect();
    let mut images: Vec<usize> = (1..k).collect();
    permute_all(&mut images, 0, &mut |img| {
        let mut p = vec![Elem(0); k];
        for (&old, &new) in rest.iter().zip(img) {
            p[old] = Elem::from(new);
        }
        out.push(p);
    });
    out.sort();
    out
}

fn permute_all(v: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start >= v.len() {
        visit(v);
        return;
    }
    for i in start..v.len() {
        v.swap(start, i);
        permute_all(v, start + 1, visit);
        v.swap(start, i);
    }
}

fn permuted_key(s: &FiniteStructure, perm: &[Elem]) -> CanonicalKey {
    let k = s.size();
    let (f, g) = s.raw_tables();
    let mut nf = vec![0u32; f.len()];
    let mut ng = vec![0u8; g.len()];
    let mut buf = Vec::new();
    for_each_tuple(k, s.m(), |t| {
        buf.clear();
        buf.extend(t.iter().map(|e| perm[e.index()]));
        let v: ElemSet = f[dense_index(k, t)].iter().map(|e| perm[e.index()]).collect();
        nf[dense_index(k, &buf)] = v.0;
        true
    });
    for_each_tuple(k, s.n(), |t| {
        buf.clear();
        buf.extend(t.iter().map(|e| perm[e.index()]));
        ng[dense_index(k, &buf)] = perm[g[dense_index(k, t)].index()].0;
        true
    });
    (nf, ng)
}

/// The lexicographically least `(f, g)` dense tables over all relabellings
/// that move zero to index 0, with the permutation achieving it.
fn canonical_key(s: &FiniteStructure) -> (CanonicalKey, Vec<Elem>) {
    zero_fixing_perms(s.size(), s.zero())
        .into_iter()
        .map(|p| (permuted_key(s, &p), p))
        .min()
        .expect("at least the identity relabelling")
}

/// Relabels `s` into its canonical form; labels stay attached to their
/// elements.
pub fn canonical_form(s: &FiniteStructure) -> FiniteStructure {
    let (_, perm) = canonical_key(s);
    s.permuted(&perm)
}

/// Whether two structures agree up to a relabelling (labels ignored).
pub fn isomorphic(a: &FiniteStructure, b: &FiniteStructure) -> bool {
    a.size() == b.size() && a.m() == b.m() && a.n() == b.n() && canonical_key(a).0 == canonical_key(b).0
}

/// Number of distinct tables among the relabellings of `s` fixing zero.
pub fn orbit_size(s: &FiniteStructure) -> u64 {
    let mut keys: Vec<CanonicalKey> = zero_fixing_perms(s.size(), s.zero())
        .iter()
        .map(|p| permuted_key(s, p))
        .collect();
    keys.sort();
    keys.dedup();
    keys.len() as u64
}

/// Every Krasner (m,n)-hyperring of the given order up to relabelling.
///
/// Zero is fixed at index 0. The additive inverse map is chosen first as an
/// involution, which fixes whether each `f(a, b, 0, ..)` contains zero; the
/// remaining f entries range over all nonempty subsets. Surviving canonical
/// hypergroups are then paired with every zero-absorbing g.
pub fn enumerate_structures(m: usize, n: usize, order: usize, limits: &Limits) -> Result<Enumeration> {
    if order == 0 {
        return Err(Error::InvalidStructure("order must be at least 1".into()));
    }
    limits.check_shape(order, m, n)?;
    let k = order;
    let names: Vec<String> = (0..k).map(|i| i.to_string()).collect();

    let f_ms = multisets(k, m);
    let f_slot = slot_map(k, m, &f_ms);
    let g_ms = multisets(k, n);
    let g_slot = slot_map(k, n, &g_ms);
    let nonempty: Vec<ElemSet> = (1..1u32 << k).map(ElemSet).collect();
    let zero = ElemSet::singleton(Elem(0));

    let mut work = FiniteStructure::from_dense(
        String::new(),
        names.clone(),
        m,
        n,
        Elem(0),
        vec![ElemSet::EMPTY; f_slot.len()],
        vec![Elem(0); g_slot.len()],
    );

    let mut hypergroups: Vec<Vec<ElemSet>> = Vec::new();
    let mut candidates: u128 = 0;
    let mut truncated = false;
    'inv: for sigma in involutions(k) {
        let allowed: Vec<Vec<ElemSet>> = f_ms
            .iter()
            .map(|t| {
                let nz: Vec<Elem> = t.iter().copied().filter(|e| e.0 != 0).collect();
                match nz.len() {
                    0 => vec![zero],
                    1 => vec![ElemSet::singleton(nz[0])],
                    2 => {
                        let want_zero = sigma[nz[0].index()] == nz[1];
                        nonempty.iter().copied().filter(|v| v.contains(Elem(0)) == want_zero).collect()
                    }
                    _ => nonempty.clone(),
                }
            })
            .collect();
        let mut choice = vec![0usize; allowed.len()];
        loop {
            candidates += 1;
            if candidates > limits.enum_candidate_cap {
                truncated = true;
                break 'inv;
            }
            {
                let (f, _) = work.tables_mut();
                for (d, &slot) in f_slot.iter().enumerate() {
                    f[d] = allowed[slot][choice[slot]];
                }
            }
            if axioms::is_canonical_hypergroup(&work) {
                hypergroups.push(work.raw_tables().0.to_vec());
            }
            if !advance(&mut choice, |i| allowed[i].len()) {
                break;
            }
        }
    }

    let free_g: Vec<bool> = g_ms.iter().map(|t| t.iter().all(|e| e.0 != 0)).collect();
    let mut reps: BTreeMap<CanonicalKey, FiniteStructure> = BTreeMap::new();
    let mut raw_count = 0u64;
    for f in &hypergroups {
        work.tables_mut().0.copy_from_slice(f);
        let mut choice = vec![0usize; g_ms.len()];
        loop {
            {
                let (_, g) = work.tables_mut();
                for (d, &slot) in g_slot.iter().enumerate() {
                    g[d] = Elem(choice[slot] as u8);
                }
            }
            if axioms::is_krasner_given_hypergroup(&work) {
                raw_count += 1;
                let mut found = work.clone();
                found.redetect_one();
                let (key, perm) = canonical_key(&found);
                reps.entry(key).or_insert_with(|| found.permuted(&perm).with_labels(names.clone()));
            }
            if !advance(&mut choice, |i| if free_g[i] { k } else { 1 }) {
                break;
            }
        }
    }

    let structures: Vec<FiniteStructure> = reps
        .into_values()
        .enumerate()
        .map(|(i, s)| s.with_name(format!("o{k}-m{m}n{n}-{i:03}")))
        .collect();
    let orbit_sum = structures.iter().map(orbit_size).sum();
    Ok(Enumeration {
        m,
        n,
        order,
        structures,
        raw_count,
        orbit_sum,
        candidates,
        truncated,
    })
}

/// Upper bound on hyperoperation tables an unpruned scan would visit.
pub fn raw_table_space(m: usize, order: usize) -> u128 {
    pow_sat((1usize << order) - 1, multisets(order, m).len())
}

/// Dense index -> multiset slot.
fn slot_map(k: usize, arity: usize, ms: &[Vec<Elem>]) -> Vec<usize> {
    let index: HashMap<&[Elem], usize> = ms.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut out = vec![0; k.pow(arity as u32)];
    let mut key = Vec::with_capacity(arity);
    for_each_tuple(k, arity, |t| {
        key.clear();
        key.extend_from_slice(t);
        key.sort_unstable();
        out[dense_index(k, t)] = index[key.as_slice()];
        true
    });
    out
}

/// Odometer step; returns false after the last assignment.
fn advance(choice: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in (0..choice.len()).rev() {
        if choice[i] + 1 < radix(i) {
            choice[i] += 1;
            return true;
        }
        choice[i] = 0;
    }
    false
}

/// Involutions of `0..k` fixing 0.
fn involutions(k: usize) -> Vec<Vec<Elem>> {
    fn go(p: &mut Vec<Option<usize>>, out: &mut Vec<Vec<Elem>>) {
        match p.iter().position(Option::is_none) {
            None => out.push(p.iter().map(|v| Elem::from(v.unwrap())).collect()),
            Some(i) => {
                p[i] = Some(i);
                go(p, out);
                for j in i + 1..p.len() {
                    if p[j].is_none() {
                        p[i] = Some(j);
                        p[j] = Some(i);
                        go(p, out);
                        p[j] = None;
                    }
                }
                p[i] = None;
            }
        }
    }
    let mut p = vec![None; k];
    p[0] = Some(0);
    let mut out = Vec::new();
    go(&mut p, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_krasner;
    use crate::elem::for_each_multiset;

    /// Oracle without pruning or symmetry breaking: every f table with zero
    /// neutral and every zero-absorbing g table, run through the full
    /// verifier.
    fn brute_force_count(m: usize, n: usize, k: usize) -> u64 {
        let names: Vec<String> = (0..k).map(|i| i.to_string()).collect();
        let f_ms = multisets(k, m);
        let g_ms = multisets(k, n);
        let f_free: Vec<usize> = (0..f_ms.len())
            .filter(|&i| f_ms[i].iter().filter(|e| e.0 != 0).count() >= 2)
            .collect();
        let g_free: Vec<usize> = (0..g_ms.len()).filter(|&i| g_ms[i].iter().all(|e| e.0 != 0)).collect();
        let subsets = (1u32 << k) - 1;
        let mut count = 0;
        let mut fc = vec![0usize; f_free.len()];
        loop {
            let mut gc = vec![0usize; g_free.len()];
            loop {
                let f_of = |t: &[Elem]| -> ElemSet {
                    let i = f_ms.iter().position(|x| x == t).unwrap();
                    match f_free.iter().position(|&j| j == i) {
                        Some(p) => ElemSet(fc[p] as u32 + 1),
                        None => t.iter().copied().filter(|e| e.0 != 0).collect::<ElemSet>().union(
                            if t.iter().all(|e| e.0 == 0) {
                                ElemSet::singleton(Elem(0))
                            } else {
                                ElemSet::EMPTY
                            },
                        ),
                    }
                };
                let g_of = |t: &[Elem]| -> Elem {
                    let i = g_ms.iter().position(|x| x == t).unwrap();
                    match g_free.iter().position(|&j| j == i) {
                        Some(p) => Elem(gc[p] as u8),
                        None => Elem(0),
                    }
                };
                let s = FiniteStructure::from_fns("b", names.clone(), m, n, Elem(0), f_of, g_of).unwrap();
                if verify_krasner(&s).passed() {
                    count += 1;
                }
                if !advance(&mut gc, |_| k) {
                    break;
                }
            }
            if !advance(&mut fc, |_| subsets as usize) {
                break;
            }
        }
        count
    }

    #[test]
    fn builtin_tables_match_their_transcription() {
        let a = builtin_a3();
        let x = a.elem("x").unwrap();
        assert_eq!(a.eval_f(&[Elem(1), Elem(1), x]).unwrap(), a.carrier());
        let r = builtin_r4();
        let (al, be) = (r.elem("alpha").unwrap(), r.elem("beta").unwrap());
        assert_eq!(r.eval_f(&[al, be]).unwrap(), ElemSet::singleton(Elem(1)));
        assert_eq!(r.eval_g(&[Elem(1), al, be, al]).unwrap(), Elem(0));
        // every multiset containing zero is absorbed
        for_each_multiset(4, 4, |t| {
            if t.contains(&Elem(0)) {
                assert_eq!(r.g_at(t), Elem(0));
            }
            true
        });
    }

    #[test]
    fn builtin_entries_record_their_verdicts() {
        let b = builtin_examples();
        assert_eq!(b.len(), 2);
        assert!(b[0].ring.is_none());
        assert!(!b[0].report.passed());
        assert!(b[1].ring.is_some());
        assert_eq!(b[1].ring.as_ref().unwrap().one(), None);
    }

    #[test]
    fn order_one_has_exactly_one_structure() {
        for &(m, n) in &DEFAULT_SHAPES {
            let e = enumerate_structures(m, n, 1, &Limits::default()).unwrap();
            assert_eq!(e.structures.len(), 1);
            assert_eq!(e.raw_count, 1);
        }
    }

    #[test]
    fn pruned_enumeration_agrees_with_brute_force() {
        for &(m, n, k) in &[(2, 2, 2), (3, 2, 2), (2, 3, 2), (3, 3, 2), (2, 2, 3), (2, 3, 3)] {
            let e = enumerate_structures(m, n, k, &Limits::default()).unwrap();
            assert!(!e.truncated);
            assert_eq!(e.raw_count, brute_force_count(m, n, k), "({m},{n}) order {k}");
            assert_eq!(e.orbit_sum, e.raw_count, "({m},{n}) order {k}");
        }
    }

    #[test]
    fn orbit_sums_match_raw_counts_up_to_order_three() {
        for &(m, n) in &DEFAULT_SHAPES {
            for k in 1..=3 {
                let e = enumerate_structures(m, n, k, &Limits::default()).unwrap();
                assert_eq!(e.orbit_sum, e.raw_count, "({m},{n}) order {k}");
                for s in &e.structures {
                    assert!(verify_krasner(s).passed(), "{}", s.name());
                    assert_eq!(canonical_key(s).0, permuted_key(s, &(0..k).map(Elem::from).collect::<Vec<_>>()));
                }
            }
        }
    }

    #[test]
    fn order_two_binary_contains_the_two_element_field() {
        let e = enumerate_structures(2, 2, 2, &Limits::default()).unwrap();
        let field = FiniteStructure::from_fns(
            "f2",
            labels(&["0", "1"]),
            2,
            2,
            Elem(0),
            |t| ElemSet::singleton(Elem(t[0].0 ^ t[1].0)),
            |t| Elem(t[0].0 & t[1].0),
        )
        .unwrap();
        assert!(e.structures.iter().any(|s| isomorphic(s, &field)));
    }

    #[test]
    fn relabelled_structures_are_rediscovered() {
        let e = enumerate_structures(3, 3, 3, &Limits::default()).unwrap();
        for s in &e.structures {
            let shuffled = s.permuted(&[Elem(0), Elem(2), Elem(1)]);
            let hit = e.structures.iter().filter(|t| isomorphic(t, &shuffled)).count();
            assert_eq!(hit, 1);
        }
        // The three-element example fails distributivity, so it is absent.
        let a = builtin_a3();
        assert!(!e.structures.iter().any(|s| isomorphic(s, &a)));
    }

    #[test]
    fn canonical_form_is_idempotent() {
        for s in [builtin_a3(), builtin_r4()] {
            let c = canonical_form(&s);
            assert_eq!(canonical_form(&c), c);
            assert!(isomorphic(&c, &s));
        }
    }

    #[test]
    fn involutions_fix_zero() {
        assert_eq!(involutions(1).len(), 1);
        assert_eq!(involutions(3).len(), 2);
        assert_eq!(involutions(4).len(), 4);
        for p in involutions(5) {
            assert_eq!(p[0], Elem(0));
            for (i, &j) in p.iter().enumerate() {
                assert_eq!(p[j.index()], Elem::from(i));
            }
        }
    }

    #[test]
    fn sample_is_seeded_and_deterministic() {
        let l = Limits::default();
        let a = sampled_slice(2, 2, 4, 5, 7, &l).unwrap();
        let b = sampled_slice(2, 2, 4, 5, 7, &l).unwrap();
        assert_eq!(a, b);
        assert!(a.len() <= 5);
    }

    #[test]
    fn candidate_cap_truncates() {
        let l = Limits {
            enum_candidate_cap: 10,
            ..Limits::default()
        };
        let e = enumerate_structures(2, 2, 3, &l).unwrap();
        assert!(e.truncated);
    }
}
