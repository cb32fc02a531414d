//! The `.kmn` structure file: a JSON document listing both tables as
//! entries keyed by sorted argument multisets.
//!
//! ```json
//! {
//!   "name": "f2",
//!   "m": 2,
//!   "n": 2,
//!   "elements": ["0", "1"],
//!   "zero": "0",
//!   "one": "1",
//!   "f": [
//!     {"args": ["0", "0"], "value": ["0"]},
//!     ...
//!   ],
//!   "g": [
//!     {"args": ["0", "0"], "value": "0"},
//!     ...
//!   ]
//! }
//! ```
//!
//! `one` is optional; when present it must be a scalar identity of `g`.
//! Entries may list arguments in any order and repeat, as long as repeats
//! agree.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;

use crate::elem::{for_each_multiset, Elem, ElemSet};
use crate::error::{Error, Result};
use crate::structure::FiniteStructure;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDoc {
    name: String,
    m: usize,
    n: usize,
    elements: Vec<String>,
    zero: String,
    #[serde(default)]
    one: Option<String>,
    f: Vec<Entry<Vec<String>>>,
    g: Vec<Entry<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry<V> {
    args: Vec<String>,
    value: V,
}

struct Resolver<'a> {
    labels: &'a [String],
}

impl Resolver<'_> {
    fn elem(&self, l: &str) -> Result<Elem> {
        self.labels
            .iter()
            .position(|x| x == l)
            .map(Elem::from)
            .ok_or_else(|| Error::UnknownLabel(l.to_string()))
    }

    fn key(&self, args: &[String], arity: usize) -> Result<Vec<Elem>> {
        if args.len() != arity {
            return Err(Error::Arity {
                expected: arity,
                got: args.len(),
            });
        }
        let mut k = args.iter().map(|a| self.elem(a)).collect::<Result<Vec<_>>>()?;
        k.sort_unstable();
        Ok(k)
    }
}

fn insert<V: PartialEq>(
    table: &'static str,
    map: &mut BTreeMap<Vec<Elem>, V>,
    key: Vec<Elem>,
    value: V,
    args: &[String],
) -> Result<()> {
    match map.get(&key) {
        Some(prev) if *prev != value => Err(Error::ConflictingEntry {
            table,
            multiset: args.join(","),
        }),
        Some(_) => Ok(()),
        None => {
            map.insert(key, value);
            Ok(())
        }
    }
}

/// Parses a `.kmn` document. The result is not verified against the
/// Krasner axioms.
pub fn parse_structure(text: &str) -> Result<FiniteStructure> {
    let doc: FileDoc = serde_json::from_str(text)?;
    let r = Resolver { labels: &doc.elements };
    let zero = r.elem(&doc.zero)?;
    let mut f = BTreeMap::new();
    for e in &doc.f {
        let key = r.key(&e.args, doc.m)?;
        if e.value.is_empty() {
            return Err(Error::EmptyValue(e.args.join(",")));
        }
        let v = e.value.iter().map(|l| r.elem(l)).collect::<Result<ElemSet>>()?;
        insert("f", &mut f, key, v, &e.args)?;
    }
    let mut g = BTreeMap::new();
    for e in &doc.g {
        let key = r.key(&e.args, doc.n)?;
        insert("g", &mut g, key, r.elem(&e.value)?, &e.args)?;
    }
    let one = doc.one.as_deref().map(|l| r.elem(l)).transpose()?;
    let s = FiniteStructure::from_multiset_tables(doc.name, doc.elements.clone(), doc.m, doc.n, zero, &f, &g)?;
    match one {
        Some(one) => s.with_one(one),
        None => Ok(s),
    }
}

pub fn read_structure(path: &std::path::Path) -> Result<FiniteStructure> {
    parse_structure(&std::fs::read_to_string(path)?)
}

fn json(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_list<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    let inner: Vec<String> = items.into_iter().map(json).collect();
    format!("[{}]", inner.join(", "))
}

/// Writes `s` with one table entry per line, multisets in lexicographic
/// order. Parsing the output gives back `s`.
pub fn export_structure(s: &FiniteStructure) -> String {
    let label = |e: Elem| s.label(e);
    let args = |t: &[Elem]| json_list(t.iter().map(|&e| label(e)));
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"name\": {},", json(s.name()));
    let _ = writeln!(out, "  \"m\": {},", s.m());
    let _ = writeln!(out, "  \"n\": {},", s.n());
    let _ = writeln!(out, "  \"elements\": {},", json_list(s.labels().iter().map(String::as_str)));
    let _ = writeln!(out, "  \"zero\": {},", json(label(s.zero())));
    if let Some(one) = s.one() {
        let _ = writeln!(out, "  \"one\": {},", json(label(one)));
    }
    let mut lines = vec![];
    for_each_multiset(s.size(), s.m(), |t| {
        let v = json_list(s.f_at(t).iter().map(label));
        lines.push(format!("    {{\"args\": {}, \"value\": {v}}}", args(t)));
        true
    });
    let _ = writeln!(out, "  \"f\": [\n{}\n  ],", lines.join(",\n"));
    lines.clear();
    for_each_multiset(s.size(), s.n(), |t| {
        let v = json(label(s.g_at(t)));
        lines.push(format!("    {{\"args\": {}, \"value\": {v}}}", args(t)));
        true
    });
    let _ = writeln!(out, "  \"g\": [\n{}\n  ]", lines.join(",\n"));
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_a3, builtin_r4, trivial_structure};

    #[test]
    fn builtins_round_trip() {
        for s in [builtin_a3(), builtin_r4(), trivial_structure(3, 2)] {
            let text = export_structure(&s);
            let back = parse_structure(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(export_structure(&back), text);
        }
    }

    fn r4_text() -> String {
        export_structure(&crate::catalog::builtin_r4())
    }

    #[test]
    fn missing_g_entry_names_the_multiset() {
        let text = r4_text();
        let last = text.rfind("    {\"args\": [\"beta\", \"beta\", \"beta\", \"beta\"]").unwrap();
        let end = text[last..].find('\n').unwrap();
        let mut cut = text[..last].trim_end().trim_end_matches(',').to_string();
        cut.push_str(&text[last + end..]);
        match parse_structure(&cut) {
            Err(Error::IncompleteTable { table: "g", multiset }) => assert_eq!(multiset, "beta,beta,beta,beta"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_entries() {
        let base = r#"{"name":"t","m":2,"n":2,"elements":["0","1"],"zero":"0","f":[F],"g":[
            {"args":["0","0"],"value":"0"},{"args":["0","1"],"value":"0"},{"args":["1","1"],"value":"1"}]}"#;
        let good = r#"{"args":["0","0"],"value":["0"]},{"args":["1","0"],"value":["1"]},{"args":["1","1"],"value":["0"]}"#;
        let s = parse_structure(&base.replace('F', good)).unwrap();
        assert_eq!(s.one(), Some(Elem(1)));

        let empty = good.replace(r#"["1","1"],"value":["0"]"#, r#"["1","1"],"value":[]"#);
        assert!(matches!(parse_structure(&base.replace('F', &empty)), Err(Error::EmptyValue(_))));
        let conflict = format!(r#"{good},{{"args":["0","1"],"value":["0"]}}"#);
        assert!(matches!(
            parse_structure(&base.replace('F', &conflict)),
            Err(Error::ConflictingEntry { table: "f", .. })
        ));
        let repeat = format!(r#"{good},{{"args":["0","1"],"value":["1"]}}"#);
        assert!(parse_structure(&base.replace('F', &repeat)).is_ok());
        let unknown = good.replace(r#"["0"]}"#, r#"["z"]}"#);
        assert!(matches!(parse_structure(&base.replace('F', &unknown)), Err(Error::UnknownLabel(_))));
        let arity = good.replace(r#"["0","0"]"#, r#"["0","0","0"]"#);
        assert!(matches!(parse_structure(&base.replace('F', &arity)), Err(Error::Arity { .. })));
        let bad_one = base.replace(r#""zero":"0","#, r#""zero":"0","one":"0","#).replace('F', good);
        assert!(parse_structure(&bad_one).is_err());
        assert!(matches!(parse_structure("{"), Err(Error::Json(_))));
    }
}
