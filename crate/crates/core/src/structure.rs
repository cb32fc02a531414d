//! Finite (m,n)-hyperstructures as dense operation tables.
//!
//! `f` is an m-ary hyperoperation (values are nonempty subsets) and `g` an
//! n-ary single-valued operation. Both are commutative: tables are specified
//! per multiset and expanded to every ordering, so lookups by any argument
//! order agree by construction.

use std::collections::BTreeMap;

use crate::elem::{for_each_multiset, for_each_tuple, Elem, ElemSet, MAX_CARRIER};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    name: String,
    labels: Vec<String>,
    m: usize,
    n: usize,
    f: Vec<ElemSet>,
    g: Vec<Elem>,
    zero: Elem,
    one: Option<Elem>,
}

pub(crate) fn dense_index(size: usize, args: &[Elem]) -> usize {
    args.iter().fold(0, |acc, a| acc * size + a.index())
}

impl FiniteStructure {
    /// Builds a structure from functions over sorted multisets.
    ///
    /// `f` and `g` are called once per multiset (arguments in nondecreasing
    /// order). The scalar identity of `g` is detected, not declared.
    pub fn from_fns(
        name: impl Into<String>,
        labels: Vec<String>,
        m: usize,
        n: usize,
        zero: Elem,
        mut f: impl FnMut(&[Elem]) -> ElemSet,
        mut g: impl FnMut(&[Elem]) -> Elem,
    ) -> Result<Self> {
        let size = labels.len();
        check_shape(&labels, m, n, zero)?;
        let mut f_ms = BTreeMap::new();
        for_each_multiset(size, m, |t| {
            f_ms.insert(t.to_vec(), f(t));
            true
        });
        let mut g_ms = BTreeMap::new();
        for_each_multiset(size, n, |t| {
            g_ms.insert(t.to_vec(), g(t));
            true
        });
        Self::from_multiset_tables(name, labels, m, n, zero, &f_ms, &g_ms)
    }

    /// Builds a structure from tables keyed by sorted multisets.
    pub fn from_multiset_tables(
        name: impl Into<String>,
        labels: Vec<String>,
        m: usize,
        n: usize,
        zero: Elem,
        f: &BTreeMap<Vec<Elem>, ElemSet>,
        g: &BTreeMap<Vec<Elem>, Elem>,
    ) -> Result<Self> {
        check_shape(&labels, m, n, zero)?;
        let size = labels.len();
        let full = ElemSet::full(size);
        let show = |t: &[Elem]| {
            t.iter()
                .map(|e| labels[e.index()].as_str())
                .collect::<Vec<_>>()
                .join(",")
        };

        let mut f_dense = vec![ElemSet::EMPTY; size.pow(m as u32)];
        let mut err = None;
        let mut key = Vec::with_capacity(m.max(n));
        for_each_tuple(size, m, |t| {
            key.clear();
            key.extend_from_slice(t);
            key.sort_unstable();
            match f.get(&key) {
                None => {
                    err = Some(Error::IncompleteTable {
                        table: "f",
                        multiset: show(&key),
                    })
                }
                Some(v) if v.is_empty() => err = Some(Error::EmptyValue(show(&key))),
                Some(v) if !v.is_subset(full) => {
                    err = Some(Error::InvalidStructure(format!(
                        "f({}) names an element outside the carrier",
                        show(&key)
                    )))
                }
                Some(v) => f_dense[dense_index(size, t)] = *v,
            }
            err.is_none()
        });
        if let Some(e) = err {
            return Err(e);
        }

        let mut g_dense = vec![Elem(0); size.pow(n as u32)];
        for_each_tuple(size, n, |t| {
            key.clear();
            key.extend_from_slice(t);
            key.sort_unstable();
            match g.get(&key) {
                None => {
                    err = Some(Error::IncompleteTable {
                        table: "g",
                        multiset: show(&key),
                    })
                }
                Some(v) if v.index() >= size => {
                    err = Some(Error::InvalidStructure(format!(
                        "g({}) names an element outside the carrier",
                        show(&key)
                    )))
                }
                Some(v) => g_dense[dense_index(size, t)] = *v,
            }
            err.is_none()
        });
        if let Some(e) = err {
            return Err(e);
        }

        let mut s = FiniteStructure {
            name: name.into(),
            labels,
            m,
            n,
            f: f_dense,
            g: g_dense,
            zero,
            one: None,
        };
        s.one = s.scalar_identities().first().copied();
        Ok(s)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.labels[e.index()]
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Arity of the hyperoperation `f`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Arity of the operation `g`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    /// The detected scalar identity of `g` (least index when several exist).
    pub fn one(&self) -> Option<Elem> {
        self.one
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size()).map(Elem::from)
    }

    pub fn elem(&self, label: &str) -> Result<Elem> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(Elem::from)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Parses a comma-separated label list into a subset.
    pub fn parse_set(&self, labels: &str) -> Result<ElemSet> {
        labels
            .split(',')
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| self.elem(l))
            .collect()
    }

    pub fn show_set(&self, s: ElemSet) -> String {
        let inner: Vec<&str> = s.iter().map(|e| self.label(e)).collect();
        format!("{{{}}}", inner.join(","))
    }

    pub fn show_tuple(&self, t: &[Elem]) -> String {
        let inner: Vec<&str> = t.iter().map(|e| self.label(*e)).collect();
        format!("({})", inner.join(","))
    }

    pub fn set_labels(&self, s: ElemSet) -> Vec<String> {
        s.iter().map(|e| self.label(e).to_string()).collect()
    }

    pub fn tuple_labels(&self, t: &[Elem]) -> Vec<String> {
        t.iter().map(|e| self.label(*e).to_string()).collect()
    }

    /// Raw f lookup; arguments in any order, length `m`, all in range.
    #[inline]
    pub fn f_at(&self, args: &[Elem]) -> ElemSet {
        self.f[dense_index(self.size(), args)]
    }

    /// Raw g lookup; arguments in any order, length `n`, all in range.
    #[inline]
    pub fn g_at(&self, args: &[Elem]) -> Elem {
        self.g[dense_index(self.size(), args)]
    }

    /// f over subsets: the union of f over the Cartesian product.
    pub fn f_sets(&self, args: &[ElemSet]) -> ElemSet {
        let mut buf = vec![Elem(0); args.len()];
        let mut acc = ElemSet::EMPTY;
        product_fold(args, 0, &mut buf, &mut |t| acc = acc.union(self.f_at(t)));
        acc
    }

    /// g over subsets: the set of all products.
    pub fn g_sets(&self, args: &[ElemSet]) -> ElemSet {
        let mut buf = vec![Elem(0); args.len()];
        let mut acc = ElemSet::EMPTY;
        product_fold(args, 0, &mut buf, &mut |t| acc.insert(self.g_at(t)));
        acc
    }

    /// Left-nested iterated g over any valid number of arguments; no checks.
    pub fn g_iter_raw(&self, args: &[Elem]) -> Elem {
        let n = self.n;
        if args.len() == 1 {
            return args[0];
        }
        let mut buf = Vec::with_capacity(n);
        let mut acc = self.g_at(&args[..n]);
        let mut rest = &args[n..];
        while !rest.is_empty() {
            buf.clear();
            buf.push(acc);
            buf.extend_from_slice(&rest[..n - 1]);
            acc = self.g_at(&buf);
            rest = &rest[n - 1..];
        }
        acc
    }

    /// `g(x, y, 1^(n-2))`.
    pub fn g_pair(&self, one: Elem, x: Elem, y: Elem) -> Elem {
        let mut args = vec![one; self.n];
        args[0] = x;
        args[1] = y;
        self.g_at(&args)
    }

    /// `g(x_1, .., x_{i-1}, 1, x_{i+1}, .., x_n)`.
    pub fn g_drop(&self, one: Elem, args: &[Elem], i: usize) -> Elem {
        let mut t = args.to_vec();
        t[i] = one;
        self.g_at(&t)
    }

    fn check_args(&self, args: &[Elem], arity: usize) -> Result<()> {
        if args.len() != arity {
            return Err(Error::Arity {
                expected: arity,
                got: args.len(),
            });
        }
        match args.iter().find(|a| a.index() >= self.size()) {
            Some(a) => Err(Error::ForeignElement(a.index())),
            None => Ok(()),
        }
    }

    pub fn eval_f(&self, args: &[Elem]) -> Result<ElemSet> {
        self.check_args(args, self.m)?;
        Ok(self.f_at(args))
    }

    pub fn eval_f_subsets(&self, args: &[ElemSet]) -> Result<ElemSet> {
        if args.len() != self.m {
            return Err(Error::Arity {
                expected: self.m,
                got: args.len(),
            });
        }
        let full = self.carrier();
        if args.iter().any(|a| a.is_empty() || !a.is_subset(full)) {
            return Err(Error::EmptyArgument);
        }
        Ok(self.f_sets(args))
    }

    /// Iterated hyperoperation `f_(l)` over `l(m-1)+1` arguments, nested to
    /// the left.
    pub fn eval_f_iter(&self, args: &[Elem]) -> Result<ElemSet> {
        let t = args.len();
        check_iter_arity(t, self.m)?;
        self.check_args(args, t)?;
        let m = self.m;
        let mut acc = ElemSet::singleton(args[0]);
        let mut rest = &args[1..];
        let mut sets = Vec::with_capacity(m);
        while !rest.is_empty() {
            sets.clear();
            sets.push(acc);
            sets.extend(rest[..m - 1].iter().map(|&a| ElemSet::singleton(a)));
            acc = self.f_sets(&sets);
            rest = &rest[m - 1..];
        }
        Ok(acc)
    }

    pub fn eval_g(&self, args: &[Elem]) -> Result<Elem> {
        self.check_args(args, self.n)?;
        Ok(self.g_at(args))
    }

    /// Iterated operation `g_(l)` over `l(n-1)+1` arguments.
    pub fn eval_g_iter(&self, args: &[Elem]) -> Result<Elem> {
        let t = args.len();
        check_iter_arity(t, self.n)?;
        self.check_args(args, t)?;
        Ok(self.g_iter_raw(args))
    }

    /// Every element `e` with `g(e^(n-1), x) = x` for all `x`.
    pub fn scalar_identities(&self) -> Vec<Elem> {
        let mut args = vec![Elem(0); self.n];
        self.elements()
            .filter(|&e| {
                self.elements().all(|x| {
                    args.fill(e);
                    args[self.n - 1] = x;
                    self.g_at(&args) == x
                })
            })
            .collect()
    }

    /// Some `y` with `g(x, y, 1^(n-2)) = 1`, if `x` is invertible.
    pub fn inverse_of_g(&self, x: Elem) -> Result<Option<Elem>> {
        let one = self.one.ok_or(Error::NoScalarIdentity)?;
        self.check_args(&[x], 1)?;
        Ok(self.elements().find(|&y| self.g_pair(one, x, y) == one))
    }

    pub fn is_invertible(&self, x: Elem) -> Result<bool> {
        Ok(self.inverse_of_g(x)?.is_some())
    }

    /// The f-table as sorted multiset entries.
    pub fn f_entries(&self) -> Vec<(Vec<Elem>, ElemSet)> {
        let mut out = Vec::new();
        for_each_multiset(self.size(), self.m, |t| {
            out.push((t.to_vec(), self.f_at(t)));
            true
        });
        out
    }

    pub fn g_entries(&self) -> Vec<(Vec<Elem>, Elem)> {
        let mut out = Vec::new();
        for_each_multiset(self.size(), self.n, |t| {
            out.push((t.to_vec(), self.g_at(t)));
            true
        });
        out
    }

    /// Relabels elements by `perm` (old index -> new index), keeping labels
    /// attached to their elements.
    pub fn permuted(&self, perm: &[Elem]) -> FiniteStructure {
        let size = self.size();
        let mut inv = vec![Elem(0); size];
        for (old, &new) in perm.iter().enumerate() {
            inv[new.index()] = Elem::from(old);
        }
        let map_set = |s: ElemSet| s.iter().map(|e| perm[e.index()]).collect::<ElemSet>();
        let mut labels = vec![String::new(); size];
        for (old, &new) in perm.iter().enumerate() {
            labels[new.index()] = self.labels[old].clone();
        }
        let mut buf = Vec::new();
        FiniteStructure::from_fns(
            self.name.clone(),
            labels,
            self.m,
            self.n,
            perm[self.zero.index()],
            |t| {
                buf.clear();
                buf.extend(t.iter().map(|e| inv[e.index()]));
                map_set(self.f_at(&buf))
            },
            |t| {
                let old: Vec<Elem> = t.iter().map(|e| inv[e.index()]).collect();
                perm[self.g_at(&old).index()]
            },
        )
        .expect("relabelling preserves table totality")
    }

    /// Builds from dense tables without validation; the caller guarantees
    /// shape, totality and commutativity.
    pub(crate) fn from_dense(
        name: String,
        labels: Vec<String>,
        m: usize,
        n: usize,
        zero: Elem,
        f: Vec<ElemSet>,
        g: Vec<Elem>,
    ) -> Self {
        let mut s = FiniteStructure {
            name,
            labels,
            m,
            n,
            f,
            g,
            zero,
            one: None,
        };
        s.redetect_one();
        s
    }

    pub(crate) fn tables_mut(&mut self) -> (&mut [ElemSet], &mut [Elem]) {
        (&mut self.f, &mut self.g)
    }

    pub(crate) fn redetect_one(&mut self) {
        self.one = self.scalar_identities().first().copied();
    }

    /// Overrides the detected identity with another scalar identity.
    pub(crate) fn with_one(mut self, one: Elem) -> Result<Self> {
        if !self.scalar_identities().contains(&one) {
            return Err(Error::InvalidStructure(format!(
                "{} is not a scalar identity of g",
                self.label(one)
            )));
        }
        self.one = Some(one);
        Ok(self)
    }

    pub(crate) fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.size());
        self.labels = labels;
        self
    }

    /// Dense tables, for canonical-form comparisons.
    pub(crate) fn raw_tables(&self) -> (&[ElemSet], &[Elem]) {
        (&self.f, &self.g)
    }
}

fn check_shape(labels: &[String], m: usize, n: usize, zero: Elem) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::InvalidStructure("empty carrier".into()));
    }
    if labels.len() > MAX_CARRIER {
        return Err(Error::InvalidStructure(format!(
            "carrier of {} exceeds {MAX_CARRIER} elements",
            labels.len()
        )));
    }
    if m < 2 || n < 2 {
        return Err(Error::InvalidStructure(format!(
            "arities must be at least 2 (m={m}, n={n})"
        )));
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
        return Err(Error::InvalidStructure(format!("duplicate label {dup:?}")));
    }
    if zero.index() >= labels.len() {
        return Err(Error::ForeignElement(zero.index()));
    }
    Ok(())
}

pub(crate) fn check_iter_arity(t: usize, arity: usize) -> Result<()> {
    if t == 0 || !(t - 1).is_multiple_of(arity - 1) {
        return Err(Error::IteratedArity { t, arity });
    }
    Ok(())
}

fn product_fold(args: &[ElemSet], pos: usize, buf: &mut [Elem], visit: &mut impl FnMut(&[Elem])) {
    if pos == args.len() {
        visit(buf);
        return;
    }
    for e in args[pos].iter() {
        buf[pos] = e;
        product_fold(args, pos + 1, buf, visit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_a3, builtin_r4};

    fn e(i: u8) -> Elem {
        Elem(i)
    }

    fn set(ids: &[u8]) -> ElemSet {
        ids.iter().map(|&i| Elem(i)).collect()
    }

    #[test]
    fn eval_f_reads_the_transcribed_tables() {
        let a = builtin_a3();
        let x = a.elem("x").unwrap();
        assert_eq!(a.eval_f(&[e(0), e(0), x]).unwrap(), ElemSet::singleton(x));
        // f(1,1,x) = A
        assert_eq!(a.eval_f(&[e(1), e(1), x]).unwrap(), a.carrier());
        let r = builtin_r4();
        assert_eq!(r.eval_f(&[e(1), e(1)]).unwrap(), set(&[0, 1]));
        for s in [&a, &r] {
            for v in s.elements() {
                let mut args = vec![s.zero(); s.m()];
                args[0] = v;
                assert_eq!(s.eval_f(&args).unwrap(), ElemSet::singleton(v));
            }
        }
    }

    #[test]
    fn eval_errors() {
        let a = builtin_a3();
        assert!(matches!(a.eval_f(&[e(0), e(0)]), Err(Error::Arity { expected: 3, got: 2 })));
        assert!(matches!(a.eval_f(&[e(0), e(0), e(7)]), Err(Error::ForeignElement(7))));
        assert!(matches!(
            a.eval_f_subsets(&[ElemSet::EMPTY, set(&[0]), set(&[0])]),
            Err(Error::EmptyArgument)
        ));
        assert!(matches!(
            a.eval_f_iter(&[e(0), e(0), e(0), e(0)]),
            Err(Error::IteratedArity { t: 4, arity: 3 })
        ));
        assert!(matches!(a.eval_g(&[e(0); 4]), Err(Error::Arity { .. })));
    }

    #[test]
    fn eval_f_subsets_is_a_union() {
        let a = builtin_a3();
        let x = a.elem("x").unwrap();
        assert_eq!(
            a.eval_f_subsets(&[set(&[0]), set(&[0]), ElemSet::singleton(x)]).unwrap(),
            ElemSet::singleton(x)
        );
        // {1,x} + 0 + 0 = {1} u {x}
        assert_eq!(
            a.eval_f_subsets(&[set(&[1, 2]), set(&[0]), set(&[0])]).unwrap(),
            set(&[1, 2])
        );
        for b in 1..8u32 {
            let b = ElemSet(b);
            assert_eq!(a.eval_f_subsets(&[b, set(&[0]), set(&[0])]).unwrap(), b);
        }
    }

    #[test]
    fn iterated_f() {
        let a = builtin_a3();
        let x = a.elem("x").unwrap();
        assert_eq!(a.eval_f_iter(&[x]).unwrap(), ElemSet::singleton(x));
        assert_eq!(a.eval_f_iter(&[e(1), e(1), x]).unwrap(), a.eval_f(&[e(1), e(1), x]).unwrap());
        assert_eq!(
            a.eval_f_iter(&[e(0), e(0), e(0), e(0), x]).unwrap(),
            ElemSet::singleton(x)
        );
        assert_eq!(a.eval_f_iter(&[e(0); 7]).unwrap(), set(&[0]));
    }

    #[test]
    fn g_and_iterated_g() {
        let a = builtin_a3();
        let x = a.elem("x").unwrap();
        assert_eq!(a.eval_g(&[e(1), e(1), x]).unwrap(), x);
        assert_eq!(a.eval_g(&[x, e(0), e(1)]).unwrap(), e(0));
        assert_eq!(a.eval_g_iter(&[e(1), e(1), x, x, e(0)]).unwrap(), e(0));
        assert_eq!(a.eval_g_iter(&[e(1), e(1), x, x, x]).unwrap(), x);
        let r = builtin_r4();
        let (al, be) = (r.elem("alpha").unwrap(), r.elem("beta").unwrap());
        assert_eq!(r.eval_g(&[al, be, al, be]).unwrap(), al);
        assert_eq!(r.eval_g(&[e(1), al, be, al]).unwrap(), e(0));
    }

    #[test]
    fn identity_detection_and_invertibility() {
        let a = builtin_a3();
        assert_eq!(a.one(), Some(e(1)));
        assert_eq!(a.inverse_of_g(e(1)).unwrap(), Some(e(1)));
        assert!(!a.is_invertible(e(0)).unwrap());
        // g(x, y, 1) is 0 or x for every y, never 1.
        assert!(!a.is_invertible(a.elem("x").unwrap()).unwrap());
        let r = builtin_r4();
        assert_eq!(r.one(), None);
        assert!(matches!(r.is_invertible(e(1)), Err(Error::NoScalarIdentity)));
    }

    #[test]
    fn incomplete_and_empty_tables_are_rejected() {
        let labels: Vec<String> = vec!["0".into(), "1".into()];
        let mut f = BTreeMap::new();
        for t in crate::elem::multisets(2, 2) {
            f.insert(t, ElemSet::singleton(e(0)));
        }
        let mut g = BTreeMap::new();
        g.insert(vec![e(0), e(0)], e(0));
        g.insert(vec![e(0), e(1)], e(0));
        let err = FiniteStructure::from_multiset_tables("t", labels.clone(), 2, 2, e(0), &f, &g)
            .unwrap_err();
        assert!(matches!(err, Error::IncompleteTable { table: "g", ref multiset } if multiset == "1,1"));
        g.insert(vec![e(1), e(1)], e(1));
        f.insert(vec![e(0), e(1)], ElemSet::EMPTY);
        let err = FiniteStructure::from_multiset_tables("t", labels, 2, 2, e(0), &f, &g).unwrap_err();
        assert!(matches!(err, Error::EmptyValue(_)));
    }

    #[test]
    fn permutation_round_trip() {
        let r = builtin_r4();
        let perm = [e(0), e(3), e(1), e(2)];
        let p = r.permuted(&perm);
        let mut inv = [e(0); 4];
        for (o, &nw) in perm.iter().enumerate() {
            inv[nw.index()] = Elem::from(o);
        }
        assert_eq!(p.permuted(&inv), r);
        assert_eq!(p.label(e(3)), "1");
    }
}
