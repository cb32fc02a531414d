//! Theorem audit over a catalog.
//!
//! Every theorem is checked instance by instance: an instance fixes the
//! hyperideals, expansions, homomorphism and `k` the statement quantifies
//! over. A cell (structure, theorem) passes when no instance meeting the
//! hypotheses violates the conclusion. The first violation is re-evaluated
//! from scratch, and any predicate witness attached to it is replayed
//! against the definition, before the cell is reported as failed.

use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::axioms::{replay_axiom_witness, verify_canonical_hypergroup, AxiomCheck, AxiomReport};
use crate::catalog::{CatalogEntry, Claim, ExpectedClaim};
use crate::classify::{self, Predicate, Verdict, Witness};
use crate::elem::{for_each_multiset, ElemSet};
use crate::error::{Error, Result};
use crate::expansion::{registry, Expansion, DELTA0, DELTA1};
use crate::format::export_structure;
use crate::ideals::{check_hyperideal, Analysis};
use crate::limits::Limits;
use crate::morphology::{delta_gamma_violation, delta_q, homomorphisms, quotient, Homomorphism};
use crate::structure::FiniteStructure;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TheoremInfo {
    pub id: &'static str,
    pub statement: &'static str,
    pub needs_identity: bool,
    /// Statements about locality are vacuous on the one-element structure.
    pub needs_two_elements: bool,
}

const fn th(id: &'static str, statement: &'static str, needs_identity: bool, needs_two_elements: bool) -> TheoremInfo {
    TheoremInfo {
        id,
        statement,
        needs_identity,
        needs_two_elements,
    }
}

pub const THEOREMS: [TheoremInfo; 27] = [
    th("T01", "a J-hyperideal lies inside J(R)", true, false),
    th("T02", "R is local iff every proper hyperideal is J", true, true),
    th("T03", "the intersection of two J-hyperideals is J", true, false),
    th(
        "T04",
        "Q is J iff U_x = Q for all x outside J(R) iff the hyperideal form of the J condition holds",
        true,
        false,
    ),
    th("T05", "Q is J iff U_x lies in J(R) for all x outside Q", true, false),
    th("T06", "U_S is J when Q is J and S is a nonempty subset not inside Q", true, false),
    th("T07", "a J-hyperideal with no J-hyperideal properly above it is prime", true, false),
    th("T08", "if J(R) is prime then J(R) is J with no J-hyperideal properly above it", true, false),
    th("T09", "Q is delta-J when delta(Q) is J", true, false),
    th("T10", "the radical of a delta1-J hyperideal is J", true, false),
    th("T11", "Q is (gamma o delta)-J when delta(Q) is gamma-J", true, false),
    th("T12", "Q1 <= Q2 <= Q3 with Q3 delta-J and delta(Q1) = delta(Q3) makes Q2 delta-J", true, false),
    th("T13", "the radical of a delta-J Q is delta-J when rad(delta(Q)) <= delta(rad(Q))", true, false),
    th("T14", "for intersection-preserving delta, an intersection of n delta-J hyperideals is delta-J", true, false),
    th(
        "T15",
        "Q is delta-J iff the (n-1)-hyperideal form holds iff the n-hyperideal form holds",
        true,
        false,
    ),
    th(
        "T16",
        "Q is delta-J iff Q <= J(R) and excused factors lie in every maximal hyperideal above Q",
        true,
        false,
    ),
    th(
        "T17",
        "R is local with maximal J(R) iff proper principal hyperideals are delta-J iff proper hyperideals are delta-J",
        true,
        true,
    ),
    th("T18", "a delta-primary Q is delta-J iff Q <= J(R)", true, false),
    th("T19", "a maximal Q is delta-J iff Q = J(R)", true, false),
    th("T20", "delta-gamma homomorphisms pull back and push forward delta-J hyperideals", true, false),
    th("T21", "Q/I is delta_q-J when Q contains I and is delta-J", true, false),
    th("T22", "delta-J implies (2,n)-absorbing delta-J", true, false),
    th("T23", "(k,n)-absorbing delta-J implies (k+1,n)-absorbing delta-J", false, false),
    th("T24", "the radical of a (k,n)-absorbing J-hyperideal is (k,n)-absorbing delta-J", true, false),
    th("T25", "Q is (3,n)-absorbing delta-J when delta(Q) is (2,n)-absorbing J", false, false),
    th("T26", "Q is (k+1,n)-absorbing delta-J when delta(Q) is", false, false),
    th(
        "T27",
        "delta-gamma homomorphisms pull back and push forward (k,n)-absorbing delta-J hyperideals",
        false,
        false,
    ),
];

pub fn theorem(id: &str) -> Result<&'static TheoremInfo> {
    THEOREMS
        .iter()
        .find(|t| t.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownTheorem(id.to_string()))
}

#[derive(Clone, Debug)]
pub struct AuditOptions {
    /// Theorem ids to run; empty means all.
    pub theorems: Vec<String>,
    pub k_max: usize,
    pub limits: Limits,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            theorems: vec![],
            k_max: 3,
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub record: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub catalog_hash: String,
    pub structures: usize,
    pub theorems: Vec<&'static str>,
    pub k_max: usize,
    pub expansions: Vec<&'static str>,
}

/// Where a predicate witness lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Source,
    Fixture(usize),
    Quotient(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Evidence {
    pub structure: String,
    pub ideal: Vec<String>,
    #[serde(flatten)]
    pub witness: Witness,
    #[serde(skip)]
    side: Option<Side>,
    #[serde(skip)]
    q: ElemSet,
}

#[derive(Clone, Debug)]
struct Finding {
    detail: String,
    evidence: Option<Evidence>,
    /// The conclusion names the whole carrier rather than failing on a
    /// witness.
    improper: bool,
}

#[derive(Clone, Debug)]
enum Outcome {
    Unmet,
    Holds,
    Undecided,
    Violated(Finding),
}

#[derive(Clone, Debug, Default)]
struct Inst {
    ideals: Vec<ElemSet>,
    exps: Vec<usize>,
    k: Option<usize>,
    subset: Option<ElemSet>,
    fixture: Option<usize>,
    part: Option<u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ideals: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub expansions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homomorphism: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part: Option<u8>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CellStatus {
    Pass {
        instances: usize,
        #[serde(skip_serializing_if = "is_zero")]
        undecided: usize,
    },
    Fail {
        instances: usize,
        violations: usize,
        /// Violations whose conclusion hyperideal is the whole carrier.
        improper: usize,
        instance: InstanceRecord,
        detail: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Evidence>,
        replayed: bool,
    },
    Skip {
        reason: String,
    },
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub record: &'static str,
    pub structure: String,
    pub theorem: &'static str,
    #[serde(flatten)]
    pub status: CellStatus,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Agree,
    Discrepancy,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimRecord {
    pub record: &'static str,
    pub id: String,
    pub structure: String,
    pub statement: String,
    pub status: ClaimStatus,
    pub computed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replayed: Option<bool>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub record: &'static str,
    pub pass: usize,
    pub fail: usize,
    pub fail_replayed: usize,
    pub skip: usize,
    pub claims_agree: usize,
    pub discrepancies: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub header: Header,
    pub cells: Vec<Cell>,
    pub claims: Vec<ClaimRecord>,
    pub summary: Summary,
}

impl AuditReport {
    /// One JSON record per line: header, cells, claims, summary.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut line = |v: String| {
            out.push_str(&v);
            out.push('\n');
        };
        line(serde_json::to_string(&self.header).expect("serializable"));
        for c in &self.cells {
            line(serde_json::to_string(c).expect("serializable"));
        }
        for c in &self.claims {
            line(serde_json::to_string(c).expect("serializable"));
        }
        line(serde_json::to_string(&self.summary).expect("serializable"));
        out
    }

    /// Per-theorem counts and the list of failures and discrepancies.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "catalog {} ({} structures)",
            &self.header.catalog_hash[..16],
            self.header.structures
        );
        let _ = writeln!(out, "{:<6}{:>6}{:>6}{:>6}", "id", "pass", "fail", "skip");
        for &id in &self.header.theorems {
            let (mut p, mut f, mut s) = (0, 0, 0);
            for c in self.cells.iter().filter(|c| c.theorem == id) {
                match c.status {
                    CellStatus::Pass { .. } => p += 1,
                    CellStatus::Fail { .. } => f += 1,
                    CellStatus::Skip { .. } => s += 1,
                }
            }
            let _ = writeln!(out, "{id:<6}{p:>6}{f:>6}{s:>6}");
        }
        for c in &self.cells {
            if let CellStatus::Fail {
                detail, replayed, witness, ..
            } = &c.status
            {
                let w = witness
                    .as_ref()
                    .map(|w| format!(" at ({})", w.witness.labels.join(",")))
                    .unwrap_or_default();
                let r = if *replayed { "replayed" } else { "NOT replayed" };
                let _ = writeln!(out, "FAIL {} {}: {detail}{w} [{r}]", c.theorem, c.structure);
            }
        }
        for c in &self.claims {
            if matches!(c.status, ClaimStatus::Discrepancy) {
                let _ = writeln!(out, "DISCREPANCY {} ({}): {}", c.id, c.statement, c.computed);
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "cells: {} pass, {} fail ({} replayed), {} skip; claims: {} agree, {} discrepancies",
            s.pass, s.fail, s.fail_replayed, s.skip, s.claims_agree, s.discrepancies
        );
        out
    }
}

/// SHA-256 over the exported structure files, in catalog order.
pub fn catalog_hash(entries: &[CatalogEntry]) -> String {
    let mut h = Sha256::new();
    for e in entries {
        h.update(export_structure(&e.structure).as_bytes());
    }
    hex::encode(h.finalize())
}

struct Target {
    an: Arc<Analysis>,
    exps: Vec<Expansion>,
}

enum FixtureKind {
    Identity,
    Projection(ElemSet),
    Enumerated,
}

struct Fixture {
    kind: FixtureKind,
    target: Target,
    hom: Homomorphism,
}

struct QuotientFixture {
    an: Arc<Analysis>,
    hom: Homomorphism,
    /// `delta_q` for each source expansion, when defined.
    dq: Vec<Option<Expansion>>,
}

type MemoKey = (usize, Predicate, u32, String, usize);

struct Ctx<'a> {
    an: Arc<Analysis>,
    exps: Vec<Expansion>,
    /// `gamma o delta` at `gamma * len + delta`.
    comps: Vec<Expansion>,
    proper: Vec<ElemSet>,
    limits: &'a Limits,
    k_max: usize,
    peers: &'a [Option<Arc<Analysis>>],
    memo: RefCell<HashMap<MemoKey, Verdict>>,
    fixtures: OnceCell<Vec<Fixture>>,
    quotients: OnceCell<Vec<QuotientFixture>>,
}

const ENUMERATED_FIXTURE_ORDER: usize = 3;

impl<'a> Ctx<'a> {
    fn new(an: Arc<Analysis>, limits: &'a Limits, k_max: usize, peers: &'a [Option<Arc<Analysis>>]) -> Self {
        let exps = registry(&an);
        let mut comps = vec![];
        for g in &exps {
            for d in &exps {
                comps.push(Expansion::compose(g, d).expect("built-in expansions stay in the lattice"));
            }
        }
        let proper = an.lattice().proper().collect();
        Ctx {
            an,
            exps,
            comps,
            proper,
            limits,
            k_max,
            peers,
            memo: RefCell::default(),
            fixtures: OnceCell::new(),
            quotients: OnceCell::new(),
        }
    }

    fn s(&self) -> &FiniteStructure {
        self.an.ring()
    }

    fn verdict(&self, an: &Analysis, p: Predicate, q: ElemSet, d: Option<&Expansion>, k: usize) -> Verdict {
        let key = (
            an as *const Analysis as usize,
            p,
            q.0,
            d.map(|d| d.name().to_string()).unwrap_or_default(),
            k,
        );
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        let r = match (p, d) {
            (Predicate::Prime, _) => classify::prime_verdict(an, q),
            (Predicate::Primary, _) => classify::primary_verdict(an, q),
            (Predicate::J, _) => classify::is_j(an, q),
            (Predicate::DeltaJ, Some(d)) => classify::is_delta_j(an, q, d),
            (Predicate::DeltaPrimary, Some(d)) => classify::is_delta_primary(an, q, d),
            (Predicate::Absorbing, Some(d)) => classify::is_kn_absorbing_delta_j(an, q, d, k, self.limits),
            _ => unreachable!("expansion required"),
        };
        let v = r.unwrap_or_else(|e| Verdict::NotApplicable { reason: e.to_string() });
        self.memo.borrow_mut().insert(key, v.clone());
        v
    }

    fn j(&self, q: ElemSet) -> Verdict {
        self.verdict(&self.an, Predicate::J, q, None, 0)
    }

    fn dj(&self, q: ElemSet, e: &Expansion) -> Verdict {
        self.verdict(&self.an, Predicate::DeltaJ, q, Some(e), 0)
    }

    fn abs(&self, q: ElemSet, e: &Expansion, k: usize) -> Verdict {
        self.verdict(&self.an, Predicate::Absorbing, q, Some(e), k)
    }

    fn delta0(&self) -> &Expansion {
        &self.exps[0]
    }

    fn delta1(&self) -> &Expansion {
        &self.exps[1]
    }

    fn side_an(&self, side: Side) -> &Analysis {
        match side {
            Side::Source => &self.an,
            Side::Fixture(i) => &self.fixtures()[i].target.an,
            Side::Quotient(i) => &self.quotients()[i].an,
        }
    }

    fn side_exps(&self, side: Side) -> Vec<&Expansion> {
        match side {
            Side::Source => self.exps.iter().chain(&self.comps).collect(),
            Side::Fixture(i) => self.fixtures()[i].target.exps.iter().collect(),
            Side::Quotient(i) => self.quotients()[i].dq.iter().flatten().collect(),
        }
    }

    /// Turns the verdict on a conclusion into an outcome.
    fn conclude(&self, side: Side, v: Verdict, q: ElemSet, what: &str) -> Outcome {
        let s = self.side_an(side).ring();
        match v {
            Verdict::True => Outcome::Holds,
            Verdict::NotApplicable { .. } => Outcome::Undecided,
            Verdict::Improper => Outcome::Violated(Finding {
                detail: format!("{what} fails: {} is the whole carrier", s.show_set(q)),
                evidence: None,
                improper: true,
            }),
            Verdict::False { witness } => Outcome::Violated(Finding {
                detail: format!("{what} fails for {}", s.show_set(q)),
                evidence: Some(Evidence {
                    structure: s.name().to_string(),
                    ideal: s.set_labels(q),
                    witness,
                    side: Some(side),
                    q,
                }),
                improper: false,
            }),
        }
    }

    /// Outcome of an equivalence between the listed statements.
    fn equivalent(&self, parts: &[(&str, bool)], evidence: Option<Evidence>) -> Outcome {
        if parts.iter().all(|p| p.1 == parts[0].1) {
            return Outcome::Holds;
        }
        let detail = parts
            .iter()
            .map(|(name, v)| format!("{name}={v}"))
            .collect::<Vec<_>>()
            .join(", ");
        Outcome::Violated(Finding {
            detail: format!("statements disagree: {detail}"),
            evidence,
            improper: false,
        })
    }

    fn evidence_of(&self, side: Side, v: &Verdict, q: ElemSet) -> Option<Evidence> {
        let s = self.side_an(side).ring();
        v.witness().map(|w| Evidence {
            structure: s.name().to_string(),
            ideal: s.set_labels(q),
            witness: w.clone(),
            side: Some(side),
            q,
        })
    }

    fn fixtures(&self) -> &[Fixture] {
        self.fixtures.get_or_init(|| self.build_fixtures())
    }

    fn quotients(&self) -> &[QuotientFixture] {
        self.quotients.get_or_init(|| self.build_quotients())
    }

    fn build_quotients(&self) -> Vec<QuotientFixture> {
        let mut out = vec![];
        for &i in &self.proper {
            let Ok(Ok(q)) = quotient(self.an.ring(), i) else { continue };
            let Ok(qa) = Analysis::with_limits(q.ring.clone(), self.limits) else { continue };
            let dq = self.exps.iter().map(|d| delta_q(&self.an, &q, &qa, d).ok()).collect();
            out.push(QuotientFixture {
                an: Arc::new(qa),
                hom: q.projection_map(self.an.ring()),
                dq,
            });
        }
        out
    }

    fn build_fixtures(&self) -> Vec<Fixture> {
        let s = self.s();
        let mut out = vec![Fixture {
            kind: FixtureKind::Identity,
            target: Target {
                an: self.an.clone(),
                exps: registry(&self.an),
            },
            hom: Homomorphism::identity(s),
        }];
        for qf in self.quotients() {
            let mut exps = registry(&qf.an);
            exps.extend(qf.dq.iter().flatten().cloned());
            out.push(Fixture {
                kind: FixtureKind::Projection(qf.hom.kernel()),
                target: Target {
                    an: qf.an.clone(),
                    exps,
                },
                hom: qf.hom.clone(),
            });
        }
        if s.size() <= ENUMERATED_FIXTURE_ORDER {
            for peer in self.peers.iter().flatten() {
                let t = peer.ring();
                if Arc::ptr_eq(peer, &self.an) || t.size() > ENUMERATED_FIXTURE_ORDER || t.m() != s.m() || t.n() != s.n() {
                    continue;
                }
                let Ok(homs) = homomorphisms(s, t, self.limits) else { continue };
                for hom in homs {
                    if hom.is_injective() || hom.is_surjective() {
                        out.push(Fixture {
                            kind: FixtureKind::Enumerated,
                            target: Target {
                                an: peer.clone(),
                                exps: registry(peer),
                            },
                            hom,
                        });
                    }
                }
            }
        }
        out
    }

    fn is_dg(&self, f: &Fixture, d: &Expansion, g: &Expansion) -> bool {
        delta_gamma_violation(&f.hom, &self.an, &f.target.an, d, g).is_none()
    }

    fn ks(&self) -> impl Iterator<Item = usize> {
        2..=self.k_max.max(2)
    }

    fn instances(&self, id: &str) -> Vec<Inst> {
        let p = &self.proper;
        let ne = self.exps.len();
        let per_q = || p.iter().map(|&q| Inst { ideals: vec![q], ..Inst::default() }).collect::<Vec<_>>();
        let per_qe = || {
            let mut v = vec![];
            for &q in p {
                for e in 0..ne {
                    v.push(Inst {
                        ideals: vec![q],
                        exps: vec![e],
                        ..Inst::default()
                    });
                }
            }
            v
        };
        let per_qek = |ks: Vec<usize>| {
            let mut v = vec![];
            for &q in p {
                for e in 0..ne {
                    for &k in &ks {
                        v.push(Inst {
                            ideals: vec![q],
                            exps: vec![e],
                            k: Some(k),
                            ..Inst::default()
                        });
                    }
                }
            }
            v
        };
        match id {
            "T01" | "T04" | "T05" | "T07" | "T10" => per_q(),
            "T02" | "T08" => vec![Inst::default()],
            "T03" => {
                let mut v = vec![];
                for (a, &x) in p.iter().enumerate() {
                    for &y in &p[a..] {
                        v.push(Inst {
                            ideals: vec![x, y],
                            ..Inst::default()
                        });
                    }
                }
                v
            }
            "T06" => {
                let size = self.s().size();
                let mut v = vec![];
                for &q in p {
                    for mask in 1u32..(1 << size) {
                        v.push(Inst {
                            ideals: vec![q],
                            subset: Some(ElemSet(mask)),
                            ..Inst::default()
                        });
                    }
                }
                v
            }
            "T09" | "T13" | "T15" | "T16" | "T18" | "T22" | "T25" => per_qe(),
            "T11" => {
                let mut v = vec![];
                for &q in p {
                    for g in 0..ne {
                        for d in 0..ne {
                            v.push(Inst {
                                ideals: vec![q],
                                exps: vec![g, d],
                                ..Inst::default()
                            });
                        }
                    }
                }
                v
            }
            "T12" => {
                let mut v = vec![];
                for &a in p {
                    for &b in p.iter().filter(|&&b| a.is_subset(b)) {
                        for &c in p.iter().filter(|&&c| b.is_subset(c)) {
                            for e in 0..ne {
                                v.push(Inst {
                                    ideals: vec![a, b, c],
                                    exps: vec![e],
                                    ..Inst::default()
                                });
                            }
                        }
                    }
                }
                v
            }
            "T14" => {
                let mut v = vec![];
                for e in (0..ne).filter(|&e| self.exps[e].preserves_intersections()) {
                    for_each_multiset(p.len(), self.s().n(), |t| {
                        v.push(Inst {
                            ideals: t.iter().map(|i| p[i.index()]).collect(),
                            exps: vec![e],
                            ..Inst::default()
                        });
                        true
                    });
                }
                v
            }
            "T17" => (0..ne)
                .map(|e| Inst {
                    exps: vec![e],
                    ..Inst::default()
                })
                .collect(),
            "T19" => {
                let mut v = vec![];
                for &q in self.an.lattice().maximal() {
                    for e in 0..ne {
                        v.push(Inst {
                            ideals: vec![q],
                            exps: vec![e],
                            ..Inst::default()
                        });
                    }
                }
                v
            }
            "T20" | "T27" => {
                let ks: Vec<Option<usize>> = if id == "T27" {
                    self.ks().map(Some).collect()
                } else {
                    vec![None]
                };
                let mut v = vec![];
                for (fi, f) in self.fixtures().iter().enumerate() {
                    for d in 0..ne {
                        for g in 0..f.target.exps.len() {
                            if !self.is_dg(f, &self.exps[d], &f.target.exps[g]) {
                                continue;
                            }
                            for &k in &ks {
                                if f.hom.is_injective() {
                                    for q in f.target.an.lattice().proper() {
                                        v.push(Inst {
                                            ideals: vec![q],
                                            exps: vec![d, g],
                                            k,
                                            fixture: Some(fi),
                                            part: Some(1),
                                            ..Inst::default()
                                        });
                                    }
                                }
                                if f.hom.is_surjective() {
                                    let ker = f.hom.kernel();
                                    for &q in p.iter().filter(|&&q| ker.is_subset(q)) {
                                        v.push(Inst {
                                            ideals: vec![q],
                                            exps: vec![d, g],
                                            k,
                                            fixture: Some(fi),
                                            part: Some(2),
                                            ..Inst::default()
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
                v
            }
            "T21" => {
                let mut v = vec![];
                for (qi, qf) in self.quotients().iter().enumerate() {
                    let i = qf.hom.kernel();
                    for &q in p.iter().filter(|&&q| i.is_subset(q)) {
                        for e in 0..ne {
                            v.push(Inst {
                                ideals: vec![i, q],
                                exps: vec![e],
                                fixture: Some(qi),
                                ..Inst::default()
                            });
                        }
                    }
                }
                v
            }
            "T23" => per_qek(self.ks().filter(|&k| k < self.k_max).collect()),
            "T24" | "T26" => per_qek(self.ks().collect()),
            _ => unreachable!("registered theorem"),
        }
    }

    fn check(&self, id: &str, inst: &Inst) -> Outcome {
        let an = &*self.an;
        let s = self.s();
        let jac = an.jacobson();
        let full = s.carrier();
        let q = inst.ideals.first().copied().unwrap_or(ElemSet::EMPTY);
        let e = inst.exps.first().map(|&i| &self.exps[i]);
        let hold = |v: &Verdict| v.holds();
        let src = Side::Source;
        match id {
            "T01" => {
                if !hold(&self.j(q)) {
                    return Outcome::Unmet;
                }
                if q.is_subset(jac) {
                    Outcome::Holds
                } else {
                    Outcome::Violated(Finding {
                        detail: format!("{} is J but not inside J(R) = {}", s.show_set(q), s.show_set(jac)),
                        evidence: None,
                        improper: false,
                    })
                }
            }
            "T02" => {
                let bad = self.proper.iter().map(|&q| (q, self.j(q))).find(|(_, v)| !v.holds());
                let ev = bad.as_ref().and_then(|(q, v)| self.evidence_of(src, v, *q));
                self.equivalent(&[("local", an.is_local()), ("all proper J", bad.is_none())], ev)
            }
            "T03" => {
                let (a, b) = (inst.ideals[0], inst.ideals[1]);
                if !(hold(&self.j(a)) && hold(&self.j(b))) {
                    return Outcome::Unmet;
                }
                let c = a.intersection(b);
                self.conclude(src, self.j(c), c, "J")
            }
            "T04" => {
                let v = self.j(q);
                let residual = s
                    .elements()
                    .filter(|&x| !jac.contains(x))
                    .all(|x| an.residual(q, ElemSet::singleton(x)).ok() == Some(q));
                let ideal_form = self.ideal_form(q, q, |i| !i.is_subset(jac));
                let ev = self.evidence_of(src, &v, q);
                self.equivalent(&[("J", v.holds()), ("residual form", residual), ("hyperideal form", ideal_form)], ev)
            }
            "T05" => {
                let v = self.j(q);
                let residual = s
                    .elements()
                    .filter(|&x| !q.contains(x))
                    .all(|x| an.residual(q, ElemSet::singleton(x)).is_ok_and(|u| u.is_subset(jac)));
                let ev = self.evidence_of(src, &v, q);
                self.equivalent(&[("J", v.holds()), ("residual form", residual)], ev)
            }
            "T06" => {
                let sub = inst.subset.expect("subset");
                if sub.is_subset(q) || !hold(&self.j(q)) {
                    return Outcome::Unmet;
                }
                let Ok(u) = an.residual(q, sub) else { return Outcome::Undecided };
                if !an.lattice().contains(u) {
                    return Outcome::Violated(Finding {
                        detail: format!("U_S = {} is not a hyperideal", s.show_set(u)),
                        evidence: None,
                        improper: false,
                    });
                }
                self.conclude(src, self.j(u), u, "J")
            }
            "T07" => {
                if !hold(&self.j(q)) {
                    return Outcome::Unmet;
                }
                if self.proper.iter().any(|&p| p != q && q.is_subset(p) && hold(&self.j(p))) {
                    return Outcome::Unmet;
                }
                let v = classify::prime_verdict(an, q).unwrap_or(Verdict::Improper);
                self.conclude(src, v, q, "prime")
            }
            "T08" => {
                if jac == full || !classify::prime_verdict(an, jac).is_ok_and(|v| v.holds()) {
                    return Outcome::Unmet;
                }
                let out = self.conclude(src, self.j(jac), jac, "J");
                if !matches!(out, Outcome::Holds) {
                    return out;
                }
                match self.proper.iter().find(|&&p| p != jac && jac.is_subset(p) && hold(&self.j(p))) {
                    Some(&p) => Outcome::Violated(Finding {
                        detail: format!("J-hyperideal {} properly contains J(R)", s.show_set(p)),
                        evidence: None,
                        improper: false,
                    }),
                    None => Outcome::Holds,
                }
            }
            "T09" => {
                let e = e.expect("expansion");
                let dq = e.at(q);
                if dq == full || !hold(&self.j(dq)) {
                    return Outcome::Unmet;
                }
                self.conclude(src, self.dj(q, e), q, e.name())
            }
            "T10" => {
                if !hold(&self.dj(q, self.delta1())) {
                    return Outcome::Unmet;
                }
                let r = self.delta1().at(q);
                self.conclude(src, self.j(r), r, "J")
            }
            "T11" => {
                let (g, d) = (inst.exps[0], inst.exps[1]);
                let dq = self.exps[d].at(q);
                if dq == full || !hold(&self.dj(dq, &self.exps[g])) {
                    return Outcome::Unmet;
                }
                let c = &self.comps[g * self.exps.len() + d];
                self.conclude(src, self.dj(q, c), q, c.name())
            }
            "T12" => {
                let e = e.expect("expansion");
                let (a, b, c) = (inst.ideals[0], inst.ideals[1], inst.ideals[2]);
                if e.at(a) != e.at(c) || !hold(&self.dj(c, e)) {
                    return Outcome::Unmet;
                }
                self.conclude(src, self.dj(b, e), b, e.name())
            }
            "T13" => {
                let e = e.expect("expansion");
                let r = self.delta1().at(q);
                let rad_dq = self.delta1().at(e.at(q));
                if !rad_dq.is_subset(e.at(r)) || !hold(&self.dj(q, e)) {
                    return Outcome::Unmet;
                }
                self.conclude(src, self.dj(r, e), r, e.name())
            }
            "T14" => {
                let e = e.expect("expansion");
                if !inst.ideals.iter().all(|&i| hold(&self.dj(i, e))) {
                    return Outcome::Unmet;
                }
                let c = inst.ideals.iter().fold(full, |a, &i| a.intersection(i));
                self.conclude(src, self.dj(c, e), c, e.name())
            }
            "T15" => {
                let e = e.expect("expansion");
                let v = self.dj(q, e);
                let dq = e.at(q);
                let one = ElemSet::singleton(s.one().expect("identity"));
                let members = an.lattice().members();
                let mut form2 = true;
                for_each_multiset(members.len(), s.n() - 1, |t| {
                    let mut args: Vec<ElemSet> = t.iter().map(|i| members[i.index()]).collect();
                    args.push(one);
                    let excused = s.g_sets(&args).is_subset(dq);
                    for x in s.elements() {
                        *args.last_mut().expect("n >= 2") = ElemSet::singleton(x);
                        if s.g_sets(&args).is_subset(q) && !jac.contains(x) && !excused {
                            form2 = false;
                        }
                    }
                    form2
                });
                let form3 = self.ideal_form(q, dq, |i| !i.is_subset(jac));
                let ev = self.evidence_of(src, &v, q);
                self.equivalent(
                    &[(e.name(), v.holds()), ("element-and-hyperideal form", form2), ("hyperideal form", form3)],
                    ev,
                )
            }
            "T16" => {
                let e = e.expect("expansion");
                let v = self.dj(q, e);
                let above = an.lattice().maximal_above(q);
                let dq = e.at(q);
                let one = s.one().expect("identity");
                let mut form = q.is_subset(jac);
                if form {
                    for_each_multiset(s.size(), s.n(), |t| {
                        if q.contains(s.g_at(t)) {
                            for i in 0..t.len() {
                                if !above.contains(t[i]) && !dq.contains(s.g_drop(one, t, i)) {
                                    form = false;
                                }
                            }
                        }
                        form
                    });
                }
                let ev = self.evidence_of(src, &v, q);
                self.equivalent(&[(e.name(), v.holds()), ("maximal-above form", form)], ev)
            }
            "T17" => {
                let e = e.expect("expansion");
                let local = an.is_local() && an.lattice().maximal() == [jac];
                let mut principal = true;
                let mut ev = None;
                for x in s.elements() {
                    let Ok(pi) = an.principal_ideal(x) else { return Outcome::Undecided };
                    if pi.ideal != full {
                        let v = self.dj(pi.ideal, e);
                        if !v.holds() {
                            principal = false;
                            ev = ev.or_else(|| self.evidence_of(src, &v, pi.ideal));
                        }
                    }
                }
                let bad = self.proper.iter().map(|&q| (q, self.dj(q, e))).find(|(_, v)| !v.holds());
                if ev.is_none() {
                    ev = bad.as_ref().and_then(|(q, v)| self.evidence_of(src, v, *q));
                }
                self.equivalent(
                    &[("local", local), ("principal form", principal), ("all proper", bad.is_none())],
                    ev,
                )
            }
            "T18" => {
                let e = e.expect("expansion");
                if !hold(&self.verdict(an, Predicate::DeltaPrimary, q, Some(e), 0)) {
                    return Outcome::Unmet;
                }
                let v = self.dj(q, e);
                let ev = self.evidence_of(src, &v, q);
                self.equivalent(&[(e.name(), v.holds()), ("inside J(R)", q.is_subset(jac))], ev)
            }
            "T19" => {
                let e = e.expect("expansion");
                let v = self.dj(q, e);
                let ev = self.evidence_of(src, &v, q);
                self.equivalent(&[(e.name(), v.holds()), ("equals J(R)", q == jac)], ev)
            }
            "T20" | "T27" => self.check_transfer(inst, id == "T27"),
            "T21" => {
                let e = e.expect("expansion");
                let qi = inst.fixture.expect("quotient");
                let qf = &self.quotients()[qi];
                let q = inst.ideals[1];
                if !hold(&self.dj(q, e)) {
                    return Outcome::Unmet;
                }
                let Some(dq) = &qf.dq[inst.exps[0]] else {
                    return Outcome::Violated(Finding {
                        detail: format!("{}_q is undefined on the quotient", e.name()),
                        evidence: None,
                        improper: false,
                    });
                };
                let img = qf.hom.image(q);
                let v = self.verdict(&qf.an, Predicate::DeltaJ, img, Some(dq), 0);
                self.conclude(Side::Quotient(qi), v, img, dq.name())
            }
            "T22" => {
                let e = e.expect("expansion");
                if !hold(&self.dj(q, e)) {
                    return Outcome::Unmet;
                }
                self.conclude(src, self.abs(q, e, 2), q, "(2,n)-absorbing")
            }
            "T23" => {
                let e = e.expect("expansion");
                let k = inst.k.expect("k");
                if !hold(&self.abs(q, e, k)) {
                    return Outcome::Unmet;
                }
                self.conclude(src, self.abs(q, e, k + 1), q, &format!("({},n)-absorbing", k + 1))
            }
            "T24" => {
                let e = e.expect("expansion");
                let k = inst.k.expect("k");
                if !hold(&self.abs(q, self.delta0(), k)) {
                    return Outcome::Unmet;
                }
                let r = self.delta1().at(q);
                self.conclude(src, self.abs(r, e, k), r, &format!("({k},n)-absorbing"))
            }
            "T25" => {
                let e = e.expect("expansion");
                let dq = e.at(q);
                if dq == full || !hold(&self.abs(dq, self.delta0(), 2)) {
                    return Outcome::Unmet;
                }
                self.conclude(src, self.abs(q, e, 3), q, "(3,n)-absorbing")
            }
            "T26" => {
                let e = e.expect("expansion");
                let k = inst.k.expect("k");
                let dq = e.at(q);
                if dq == full || !hold(&self.abs(dq, e, k)) {
                    return Outcome::Unmet;
                }
                self.conclude(src, self.abs(q, e, k), q, &format!("({k},n)-absorbing"))
            }
            _ => unreachable!("registered theorem"),
        }
    }

    /// For every multiset of `n` lattice members with product inside `q`
    /// and every position `i` with `open(I_i)`, the product with `I_i`
    /// replaced by `{1}` lies inside `target`.
    fn ideal_form(&self, q: ElemSet, target: ElemSet, open: impl Fn(ElemSet) -> bool) -> bool {
        let s = self.s();
        let one = ElemSet::singleton(s.one().expect("identity"));
        let members = self.an.lattice().members();
        let mut ok = true;
        for_each_multiset(members.len(), s.n(), |t| {
            let mut args: Vec<ElemSet> = t.iter().map(|i| members[i.index()]).collect();
            if s.g_sets(&args).is_subset(q) {
                for i in 0..args.len() {
                    if open(args[i]) {
                        let keep = args[i];
                        args[i] = one;
                        ok &= s.g_sets(&args).is_subset(target);
                        args[i] = keep;
                    }
                }
            }
            ok
        });
        ok
    }

    fn check_transfer(&self, inst: &Inst, absorbing: bool) -> Outcome {
        let fi = inst.fixture.expect("fixture");
        let f = &self.fixtures()[fi];
        let (d, g) = (&self.exps[inst.exps[0]], &f.target.exps[inst.exps[1]]);
        if !self.is_dg(f, d, g) {
            return Outcome::Unmet;
        }
        let tgt = &*f.target.an;
        let pred = |an: &Analysis, q: ElemSet, e: &Expansion| match inst.k {
            Some(k) if absorbing => self.verdict(an, Predicate::Absorbing, q, Some(e), k),
            _ => self.verdict(an, Predicate::DeltaJ, q, Some(e), 0),
        };
        let q = inst.ideals[0];
        match inst.part {
            Some(1) => {
                if !f.hom.is_injective() || !pred(tgt, q, g).holds() {
                    return Outcome::Unmet;
                }
                let pre = f.hom.preimage(q);
                self.conclude(Side::Source, pred(&self.an, pre, d), pre, d.name())
            }
            _ => {
                if !f.hom.is_surjective() || !f.hom.kernel().is_subset(q) || !pred(&self.an, q, d).holds() {
                    return Outcome::Unmet;
                }
                let img = f.hom.image(q);
                if !tgt.lattice().contains(img) {
                    return Outcome::Violated(Finding {
                        detail: format!("image {} is not a hyperideal", tgt.ring().show_set(img)),
                        evidence: None,
                        improper: false,
                    });
                }
                self.conclude(Side::Fixture(fi), pred(tgt, img, g), img, g.name())
            }
        }
    }

    fn describe(&self, id: &str, inst: &Inst) -> InstanceRecord {
        let fixture = inst.fixture.filter(|_| id != "T21").map(|i| &self.fixtures()[i]);
        let label_side = match (fixture, inst.part) {
            (Some(f), Some(1)) => f.target.an.ring(),
            _ => self.s(),
        };
        let expansions = match (id, fixture) {
            ("T11", _) => inst.exps.iter().map(|&e| self.exps[e].name().to_string()).collect(),
            (_, Some(f)) => vec![
                self.exps[inst.exps[0]].name().to_string(),
                f.target.exps[inst.exps[1]].name().to_string(),
            ],
            _ => inst.exps.iter().map(|&e| self.exps[e].name().to_string()).collect(),
        };
        let homomorphism = match id {
            "T21" => inst
                .fixture
                .map(|i| format!("projection to {}", self.quotients()[i].an.ring().name())),
            _ => fixture.map(|f| {
                let t = f.target.an.ring();
                let map = self
                    .s()
                    .elements()
                    .map(|x| format!("{}->{}", self.s().label(x), t.label(f.hom.apply(x))))
                    .collect::<Vec<_>>()
                    .join(",");
                let kind = match f.kind {
                    FixtureKind::Identity => "identity".to_string(),
                    FixtureKind::Projection(i) => format!("projection by {}", self.s().show_set(i)),
                    FixtureKind::Enumerated => "enumerated".to_string(),
                };
                format!("{kind} to {} ({map})", t.name())
            }),
        };
        InstanceRecord {
            ideals: inst.ideals.iter().map(|&i| label_side.set_labels(i)).collect(),
            expansions,
            k: inst.k,
            subset: inst.subset.map(|s| self.s().set_labels(s)),
            homomorphism,
            part: inst.part,
        }
    }

    /// Checks a witness against the definition of its predicate.
    fn replay(&self, ev: &Evidence) -> bool {
        let Some(side) = ev.side else { return false };
        let an = self.side_an(side);
        let exps = self.side_exps(side);
        let delta = match &ev.witness.expansion {
            Some(name) => match exps.into_iter().find(|e| e.name() == name) {
                Some(e) => Some(e),
                None => return false,
            },
            None => None,
        };
        classify::replay(an, ev.q, delta, &ev.witness)
    }

    fn run(&self, t: &TheoremInfo) -> CellStatus {
        let s = self.s();
        if t.needs_identity && s.one().is_none() {
            return CellStatus::Skip {
                reason: "no scalar identity".into(),
            };
        }
        if t.needs_two_elements && s.size() < 2 {
            return CellStatus::Skip {
                reason: "one-element structure".into(),
            };
        }
        let (mut met, mut undecided, mut violations, mut improper) = (0, 0, 0, 0);
        let mut first: Option<(Inst, Finding)> = None;
        for inst in self.instances(t.id) {
            match self.check(t.id, &inst) {
                Outcome::Unmet => {}
                Outcome::Undecided => undecided += 1,
                Outcome::Holds => met += 1,
                Outcome::Violated(f) => {
                    met += 1;
                    violations += 1;
                    improper += usize::from(f.improper);
                    if first.is_none() {
                        first = Some((inst, f));
                    }
                }
            }
        }
        let Some((inst, finding)) = first else {
            return CellStatus::Pass {
                instances: met,
                undecided,
            };
        };
        // Re-evaluate with a fresh memo so the failure does not rest on
        // cached verdicts.
        let fresh = Ctx::new(self.an.clone(), self.limits, self.k_max, self.peers);
        let again = matches!(fresh.check(t.id, &inst), Outcome::Violated(ref f) if f.detail == finding.detail);
        let witness_ok = finding.evidence.as_ref().is_none_or(|ev| self.replay(ev));
        CellStatus::Fail {
            instances: met,
            violations,
            improper,
            instance: self.describe(t.id, &inst),
            detail: finding.detail,
            witness: finding.evidence,
            replayed: again && witness_ok,
        }
    }

    /// First pair of members on which delta1 fails to preserve
    /// intersections.
    fn delta1_intersection_issue(&self) -> Option<String> {
        self.delta1()
            .intersection_counterexample()
            .map(|(a, b)| format!("{}: {} and {}", self.s().name(), self.s().show_set(a), self.s().show_set(b)))
    }

    /// First fixture that is not a delta1-delta1 homomorphism.
    fn delta1_hom_issue(&self) -> Option<String> {
        for f in self.fixtures() {
            let g = &f.target.exps[1];
            debug_assert_eq!(g.name(), DELTA1);
            if let Some(v) = delta_gamma_violation(&f.hom, &self.an, &f.target.an, self.delta1(), g) {
                let t = f.target.an.ring();
                return Some(format!(
                    "{} -> {} at {}",
                    self.s().name(),
                    t.name(),
                    t.show_set(v.ideal())
                ));
            }
        }
        None
    }
}

fn first_failure(r: &AxiomReport) -> Option<&AxiomCheck> {
    r.failures().next()
}

fn axiom_claim(c: &ExpectedClaim, s: &FiniteStructure, r: &AxiomReport) -> ClaimRecord {
    match first_failure(r) {
        None => claim_record(c, s, ClaimStatus::Agree, "all axioms pass".into(), None, None),
        Some(f) => claim_record(
            c,
            s,
            ClaimStatus::Discrepancy,
            format!("fails {}", f.axiom),
            serde_json::to_value(f).ok(),
            Some(replay_axiom_witness(s, f)),
        ),
    }
}

fn claim_record(
    c: &ExpectedClaim,
    s: &FiniteStructure,
    status: ClaimStatus,
    computed: String,
    evidence: Option<serde_json::Value>,
    replayed: Option<bool>,
) -> ClaimRecord {
    ClaimRecord {
        record: "claim",
        id: c.id.clone(),
        structure: s.name().to_string(),
        statement: c.statement.clone(),
        status,
        computed,
        evidence,
        replayed,
    }
}

fn evaluate_claim(e: &CatalogEntry, an: Option<&Analysis>, c: &ExpectedClaim) -> ClaimRecord {
    let s = &e.structure;
    match &c.claim {
        Claim::Krasner => axiom_claim(c, s, &e.report),
        Claim::CanonicalHypergroup => axiom_claim(c, s, &verify_canonical_hypergroup(s)),
        Claim::JHyperideal { ideal } => {
            let set = match s.parse_set(&ideal.join(",")) {
                Ok(set) => set,
                Err(err) => return claim_record(c, s, ClaimStatus::Discrepancy, err.to_string(), None, None),
            };
            if let Err(v) = check_hyperideal(s, set) {
                let replayed = check_hyperideal(s, set).err().is_some_and(|w| w.tuple == v.tuple);
                let evidence = serde_json::json!({
                    "clause": format!("{:?}", v.clause),
                    "tuple": s.tuple_labels(&v.tuple),
                });
                return claim_record(
                    c,
                    s,
                    ClaimStatus::Discrepancy,
                    format!("{} is not a hyperideal: {}", s.show_set(set), v.describe(s)),
                    Some(evidence),
                    Some(replayed),
                );
            }
            let Some(an) = an else {
                let f = first_failure(&e.report);
                return claim_record(
                    c,
                    s,
                    ClaimStatus::Discrepancy,
                    format!(
                        "structure is not a Krasner hyperring (fails {})",
                        f.map(|f| f.axiom.as_str()).unwrap_or("verification")
                    ),
                    f.and_then(|f| serde_json::to_value(f).ok()),
                    f.map(|f| replay_axiom_witness(s, f)),
                );
            };
            match classify::is_j(an, set) {
                Ok(Verdict::True) => claim_record(c, s, ClaimStatus::Agree, "J".into(), None, None),
                Ok(Verdict::False { witness }) => {
                    let replayed = classify::replay(an, set, None, &witness);
                    claim_record(
                        c,
                        s,
                        ClaimStatus::Discrepancy,
                        format!("not J: fails at ({})", witness.labels.join(",")),
                        serde_json::to_value(&witness).ok(),
                        Some(replayed),
                    )
                }
                Ok(v) => claim_record(c, s, ClaimStatus::Discrepancy, v.to_string(), None, None),
                Err(err) => claim_record(c, s, ClaimStatus::Discrepancy, err.to_string(), None, None),
            }
        }
    }
}

struct EntryResult {
    cells: Vec<Cell>,
    claims: Vec<ClaimRecord>,
    delta1_intersection: Option<String>,
    delta1_hom: Option<String>,
}

fn audit_entry(
    e: &CatalogEntry,
    an: &Option<Arc<Analysis>>,
    an_err: Option<&str>,
    theorems: &[&'static TheoremInfo],
    peers: &[Option<Arc<Analysis>>],
    opts: &AuditOptions,
) -> EntryResult {
    let name = e.name().to_string();
    let claims = e.claims.iter().map(|c| evaluate_claim(e, an.as_deref(), c)).collect();
    let Some(an) = an else {
        let reason = match (first_failure(&e.report), an_err) {
            (Some(f), _) => format!("not a Krasner hyperring: fails {}", f.axiom),
            (None, Some(err)) => err.to_string(),
            (None, None) => "not analysed".to_string(),
        };
        return EntryResult {
            cells: theorems
                .iter()
                .map(|t| Cell {
                    record: "cell",
                    structure: name.clone(),
                    theorem: t.id,
                    status: CellStatus::Skip { reason: reason.clone() },
                })
                .collect(),
            claims,
            delta1_intersection: None,
            delta1_hom: None,
        };
    };
    let ctx = Ctx::new(an.clone(), &opts.limits, opts.k_max, peers);
    let cells = theorems
        .iter()
        .map(|t| Cell {
            record: "cell",
            structure: name.clone(),
            theorem: t.id,
            status: ctx.run(t),
        })
        .collect();
    EntryResult {
        cells,
        claims,
        delta1_intersection: ctx.delta1_intersection_issue(),
        delta1_hom: ctx.delta1_hom_issue(),
    }
}

fn global_claim(id: &str, statement: &str, issue: Option<String>, scope: &str) -> ClaimRecord {
    let (status, computed) = match issue {
        None => (ClaimStatus::Agree, format!("holds on every {scope}")),
        Some(i) => (ClaimStatus::Discrepancy, format!("fails: {i}")),
    };
    ClaimRecord {
        record: "claim",
        id: id.to_string(),
        structure: "*".to_string(),
        statement: statement.to_string(),
        status,
        computed,
        evidence: None,
        replayed: None,
    }
}

pub fn run_audit(entries: &[CatalogEntry], opts: &AuditOptions) -> Result<AuditReport> {
    let theorems: Vec<&'static TheoremInfo> = if opts.theorems.is_empty() {
        THEOREMS.iter().collect()
    } else {
        opts.theorems.iter().map(|id| theorem(id)).collect::<Result<_>>()?
    };
    let analysed: Vec<(Option<Arc<Analysis>>, Option<String>)> = entries
        .par_iter()
        .map(|e| match &e.ring {
            None => (None, None),
            Some(r) => match Analysis::with_limits(r.clone(), &opts.limits) {
                Ok(an) => (Some(Arc::new(an)), None),
                Err(err) => (None, Some(err.to_string())),
            },
        })
        .collect();
    let peers: Vec<Option<Arc<Analysis>>> = analysed.iter().map(|(a, _)| a.clone()).collect();
    let results: Vec<EntryResult> = entries
        .par_iter()
        .zip(&analysed)
        .map(|(e, (an, err))| audit_entry(e, an, err.as_deref(), &theorems, &peers, opts))
        .collect();

    let mut cells = vec![];
    let mut claims = vec![];
    let mut d1_int = None;
    let mut d1_hom = None;
    for r in results {
        cells.extend(r.cells);
        claims.extend(r.claims);
        d1_int = d1_int.or(r.delta1_intersection);
        d1_hom = d1_hom.or(r.delta1_hom);
    }
    claims.push(global_claim(
        "delta1/intersections",
        "the radical expansion preserves intersections",
        d1_int,
        "verified structure",
    ));
    claims.push(global_claim(
        "delta1/homomorphisms",
        "every homomorphism is a delta1-delta1 homomorphism",
        d1_hom,
        "homomorphism fixture",
    ));

    let mut summary = Summary {
        record: "summary",
        ..Summary::default()
    };
    for c in &cells {
        match c.status {
            CellStatus::Pass { .. } => summary.pass += 1,
            CellStatus::Fail { replayed, .. } => {
                summary.fail += 1;
                summary.fail_replayed += usize::from(replayed);
            }
            CellStatus::Skip { .. } => summary.skip += 1,
        }
    }
    for c in &claims {
        match c.status {
            ClaimStatus::Agree => summary.claims_agree += 1,
            ClaimStatus::Discrepancy => summary.discrepancies += 1,
        }
    }
    Ok(AuditReport {
        header: Header {
            record: "header",
            tool: "kmn",
            version: env!("CARGO_PKG_VERSION"),
            catalog_hash: catalog_hash(entries),
            structures: entries.len(),
            theorems: theorems.iter().map(|t| t.id).collect(),
            k_max: opts.k_max,
            expansions: vec![DELTA0, DELTA1, crate::expansion::DELTA_R],
        },
        cells,
        claims,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_examples, enumerate_structures, Provenance};

    fn small_catalog() -> Vec<CatalogEntry> {
        let mut out = builtin_examples();
        for (m, n) in [(2, 2), (2, 3)] {
            for k in 1..=3 {
                for s in enumerate_structures(m, n, k, &Limits::default()).unwrap().structures {
                    out.push(CatalogEntry::new(s, Provenance::Enumerated, vec![]));
                }
            }
        }
        out
    }

    #[test]
    fn registry_ids_are_ordered_and_unique() {
        for (i, t) in THEOREMS.iter().enumerate() {
            assert_eq!(t.id, format!("T{:02}", i + 1));
        }
        assert!(theorem("t05").is_ok());
        assert!(matches!(theorem("T99"), Err(Error::UnknownTheorem(_))));
    }

    #[test]
    fn small_audit_is_deterministic_and_replays() {
        let cat = small_catalog();
        let opts = AuditOptions::default();
        let a = run_audit(&cat, &opts).unwrap();
        let b = run_audit(&cat, &opts).unwrap();
        assert_eq!(a.to_jsonl(), b.to_jsonl());
        assert_eq!(a.summary.fail, a.summary.fail_replayed);
        assert_eq!(a.cells.len(), cat.len() * THEOREMS.len());
        for c in &a.cells {
            if ["T01", "T03", "T22"].contains(&c.theorem) {
                assert!(!matches!(c.status, CellStatus::Fail { .. }), "{c:?}");
            }
        }
    }

    #[test]
    fn builtin_claims_are_compared() {
        let cat = builtin_examples();
        let opts = AuditOptions {
            theorems: vec!["T01".into()],
            ..AuditOptions::default()
        };
        let r = run_audit(&cat, &opts).unwrap();
        let get = |id: &str| r.claims.iter().find(|c| c.id == id).unwrap();
        assert!(matches!(get("a3-33/krasner").status, ClaimStatus::Discrepancy));
        assert_eq!(get("a3-33/krasner").replayed, Some(true));
        assert!(matches!(get("a3-33/j-zero-x").status, ClaimStatus::Discrepancy));
        assert!(matches!(get("r4-24/canonical").status, ClaimStatus::Agree));
        assert!(matches!(get("r4-24/krasner").status, ClaimStatus::Agree));
        let j = get("r4-24/j-zero");
        assert!(matches!(j.status, ClaimStatus::Discrepancy));
        assert!(j.computed.contains("not applicable"));
        // a3-33 cells are skipped with the failing axiom as the reason
        let cell = r.cells.iter().find(|c| c.structure == "a3-33").unwrap();
        match &cell.status {
            CellStatus::Skip { reason } => assert!(reason.contains("distributivity"), "{reason}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_theorem_is_an_error() {
        let opts = AuditOptions {
            theorems: vec!["T00".into()],
            ..AuditOptions::default()
        };
        assert!(run_audit(&builtin_examples(), &opts).is_err());
    }
}
