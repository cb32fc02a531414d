use std::sync::OnceLock;

use proptest::prelude::*;

use kmn::catalog::{canonical_form, default_catalog, isomorphic, DEFAULT_SEED};
use kmn::classify::{is_delta_j, is_j};
use kmn::expansion::Expansion;
use kmn::format::{export_structure, parse_structure};
use kmn::{Analysis, Elem, ElemSet, FiniteStructure, Limits};

fn rings() -> &'static [Analysis] {
    static RINGS: OnceLock<Vec<Analysis>> = OnceLock::new();
    RINGS.get_or_init(|| {
        default_catalog(DEFAULT_SEED, &Limits::default())
            .unwrap()
            .into_iter()
            .filter_map(|e| e.ring)
            .map(|r| Analysis::new(r).unwrap())
            .collect()
    })
}

fn pick(i: usize) -> &'static Analysis {
    let r = rings();
    &r[i % r.len()]
}

/// Collapses `arity` adjacent arguments at the positions drawn from
/// `cuts` until one value is left.
fn bracketed<T: Clone>(mut args: Vec<T>, arity: usize, cuts: &[usize], op: impl Fn(&[T]) -> T) -> T {
    let mut k = 0;
    while args.len() > 1 {
        let at = cuts[k % cuts.len()] % (args.len() - arity + 1);
        k += 1;
        let v = op(&args[at..at + arity]);
        args.splice(at..at + arity, [v]);
    }
    args.pop().unwrap()
}

fn elems(an: &Analysis, raw: &[usize], arity: usize, steps: usize) -> Vec<Elem> {
    let len = steps * (arity - 1) + 1;
    raw.iter().cycle().take(len).map(|&x| Elem::from(x % an.ring().size())).collect()
}

fn perm_from(size: usize, keys: &[u64]) -> Vec<Elem> {
    let mut idx: Vec<usize> = (0..size).collect();
    idx.sort_by_key(|&i| (keys[i % keys.len()].wrapping_mul(i as u64 + 1), i));
    let mut perm = vec![Elem(0); size];
    for (new, &old) in idx.iter().enumerate() {
        perm[old] = Elem::from(new);
    }
    perm
}

fn zero_fixing(s: &FiniteStructure, keys: &[u64]) -> Vec<Elem> {
    let mut p = perm_from(s.size(), keys);
    let z = s.zero().index();
    let at = p.iter().position(|&e| e.index() == z).unwrap();
    p.swap(z, at);
    p
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn iterated_g_ignores_bracketing(
        i in any::<usize>(),
        raw in prop::collection::vec(any::<usize>(), 1..12),
        steps in 1usize..4,
        cuts in prop::collection::vec(any::<usize>(), 1..6),
    ) {
        let an = pick(i);
        let s = an.ring();
        let args = elems(an, &raw, s.n(), steps);
        let left = s.eval_g_iter(&args).unwrap();
        prop_assert_eq!(bracketed(args, s.n(), &cuts, |t| s.g_at(t)), left);
    }

    #[test]
    fn iterated_f_ignores_bracketing(
        i in any::<usize>(),
        raw in prop::collection::vec(any::<usize>(), 1..12),
        steps in 1usize..4,
        cuts in prop::collection::vec(any::<usize>(), 1..6),
    ) {
        let an = pick(i);
        let s = an.ring();
        let args = elems(an, &raw, s.m(), steps);
        let left = s.eval_f_iter(&args).unwrap();
        let sets: Vec<ElemSet> = args.iter().map(|&x| ElemSet::singleton(x)).collect();
        prop_assert_eq!(bracketed(sets, s.m(), &cuts, |t| s.f_sets(t)), left);
    }

    #[test]
    fn relabelled_structures_round_trip(i in any::<usize>(), keys in prop::collection::vec(any::<u64>(), 1..6)) {
        let s = pick(i).ring().structure();
        let p = s.permuted(&perm_from(s.size(), &keys));
        let text = export_structure(&p);
        prop_assert_eq!(parse_structure(&text).unwrap(), p);
    }

    #[test]
    fn canonical_form_is_idempotent_and_invariant(i in any::<usize>(), keys in prop::collection::vec(any::<u64>(), 1..6)) {
        let s = pick(i).ring().structure();
        let c = canonical_form(s);
        prop_assert_eq!(&canonical_form(&c), &c);
        let p = s.permuted(&zero_fixing(s, &keys));
        prop_assert!(isomorphic(&p, s));
        prop_assert_eq!(canonical_form(&p).f_entries(), c.f_entries());
        prop_assert_eq!(canonical_form(&p).g_entries(), c.g_entries());
    }

    #[test]
    fn lattice_and_radical_laws(i in any::<usize>(), a in any::<usize>(), b in any::<usize>()) {
        let an = pick(i);
        let lat = an.lattice();
        let ms = lat.members();
        let (x, y) = (ms[a % ms.len()], ms[b % ms.len()]);
        prop_assert!(lat.contains(x.intersection(y)));
        let r = lat.radical(x).unwrap();
        prop_assert!(x.is_subset(r));
        prop_assert_eq!(lat.radical(r), Some(r));
        if x.is_subset(y) {
            prop_assert!(r.is_subset(lat.radical(y).unwrap()));
        }
    }

    #[test]
    fn delta0_j_is_j(i in any::<usize>(), a in any::<usize>()) {
        let an = pick(i);
        let ms = an.lattice().members();
        let q = ms[a % ms.len()];
        let d0 = Expansion::delta0(an);
        let (a, b) = (is_delta_j(an, q, &d0).unwrap(), is_j(an, q).unwrap());
        prop_assert_eq!(a.holds(), b.holds());
        prop_assert_eq!(a.witness().map(|w| &w.tuple), b.witness().map(|w| &w.tuple));
    }
}
