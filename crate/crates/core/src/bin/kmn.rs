use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kmn::audit::{run_audit, AuditOptions};
use kmn::catalog::{builtin_examples, default_catalog, enumerate_structures, CatalogEntry, Provenance, DEFAULT_SEED};
use kmn::classify::{classify, Verdict};
use kmn::expansion::{registry, Expansion};
use kmn::format::{export_structure, read_structure};
use kmn::morphology::quotient;
use kmn::search::{parse_implication, search_counterexample};
use kmn::{verify_canonical_hypergroup, verify_krasner, Analysis, AxiomReport, ElemSet, Error, Hyperring, Limits};

/// Verification and hyperideal classification for finite Krasner
/// (m,n)-hyperrings.
#[derive(Parser)]
#[command(name = "kmn", version)]
struct Cli {
    /// Largest carrier accepted (also KMN_MAX_CARRIER).
    #[arg(long, global = true)]
    max_carrier: Option<usize>,
    /// Largest arity accepted (also KMN_MAX_ARITY).
    #[arg(long, global = true)]
    max_arity: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Krasner axioms.
    Verify { file: PathBuf },
    /// List the hyperideals with their basic properties.
    Ideals { file: PathBuf },
    /// Run every predicate on one hyperideal.
    Classify {
        file: PathBuf,
        /// Comma-separated element labels.
        #[arg(long)]
        ideal: String,
        /// Built-in expansion (delta0, delta1, deltaR); all when omitted.
        #[arg(long)]
        delta: Option<String>,
        /// Largest k for the (k,n)-absorbing predicate.
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the Jacobson radical and the maximal hyperideals.
    Jacobson { file: PathBuf },
    /// Print the radical of a hyperideal.
    Radical {
        file: PathBuf,
        #[arg(long)]
        ideal: String,
    },
    /// Build the quotient by a hyperideal.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        ideal: String,
        /// Write the quotient structure file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every theorem over a catalog.
    Audit {
        #[command(flatten)]
        source: Source,
        /// Comma-separated theorem ids; all when omitted.
        #[arg(long, value_delimiter = ',')]
        theorems: Vec<String>,
        /// Write line-delimited records here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// Catalog maintenance.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
    /// Find the first catalog hyperideal violating an implication.
    Search {
        /// For example "prime => J" or "J & !local => in-jacobson".
        #[arg(long)]
        implication: String,
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Write every catalog structure as a .kmn file.
    Export {
        dir: PathBuf,
        #[command(flatten)]
        source: Source,
    },
}

/// Catalog selection; the default catalog when nothing is given.
#[derive(Args)]
struct Source {
    /// Structure files.
    files: Vec<PathBuf>,
    /// The two built-in examples.
    #[arg(long)]
    builtin: bool,
    /// All verified structures of one shape.
    #[arg(long, num_args = 3, value_names = ["M", "N", "ORDER"])]
    enumerate: Option<Vec<usize>>,
    /// Seed for the sampled order-4 slice of the default catalog.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// Exit 1: the structure or ideal fails what was asked of it.
struct Negative;

enum Failure {
    Negative,
    Tool(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotKrasner { .. } => {
                eprintln!("kmn: {e}");
                Failure::Negative
            }
            e => Failure::Tool(e),
        }
    }
}

impl From<Negative> for Failure {
    fn from(_: Negative) -> Self {
        Failure::Negative
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Tool(Error::Io(e))
    }
}

type Outcome = Result<(), Failure>;

impl Source {
    fn catalog(&self, limits: &Limits) -> Result<Vec<CatalogEntry>, Error> {
        let mut out = vec![];
        if self.builtin {
            out.extend(builtin_examples());
        }
        if let Some(shape) = &self.enumerate {
            let e = enumerate_structures(shape[0], shape[1], shape[2], limits)?;
            if e.truncated {
                eprintln!(
                    "kmn: enumeration stopped at the candidate cap after {} tables",
                    e.candidates
                );
            }
            out.extend(
                e.structures
                    .into_iter()
                    .map(|s| CatalogEntry::new(s, Provenance::Enumerated, vec![])),
            );
        }
        for f in &self.files {
            let s = read_structure(f).map_err(|e| with_path(f, e))?;
            limits.check_shape(s.size(), s.m(), s.n())?;
            out.push(CatalogEntry::new(s, Provenance::Builtin, vec![]));
        }
        if !self.builtin && self.enumerate.is_none() && self.files.is_empty() {
            out = default_catalog(self.seed, limits)?;
        }
        Ok(out)
    }
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        e => Error::InvalidStructure(format!("{}: {e}", path.display())),
    }
}

fn load(path: &Path, limits: &Limits) -> Result<Analysis, Error> {
    let s = read_structure(path).map_err(|e| with_path(path, e))?;
    let ring = Hyperring::with_limits(s, limits)?;
    Analysis::with_limits(ring, limits)
}

/// Parses `labels` and insists on a hyperideal.
fn member(an: &Analysis, labels: &str) -> Result<ElemSet, Error> {
    let q = an.ring().parse_set(labels)?;
    an.require_member(q)?;
    Ok(q)
}

fn print_report(r: &AxiomReport, title: &str) {
    for c in &r.checks {
        let w = c
            .witness_labels
            .as_ref()
            .map(|w| format!(" at ({})", w.join(",")))
            .unwrap_or_default();
        let d = c.detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default();
        println!("  {:<28} {:?}{w}{d}", c.axiom, c.status);
    }
    println!("{title}: {}", if r.passed() { "pass" } else { "FAIL" });
}

fn verify(path: &Path, limits: &Limits) -> Outcome {
    let s = read_structure(path).map_err(|e| with_path(path, e))?;
    limits.check_shape(s.size(), s.m(), s.n())?;
    println!("{} (m={}, n={}, {} elements)", s.name(), s.m(), s.n(), s.size());
    print_report(&verify_canonical_hypergroup(&s), "canonical hypergroup");
    let r = verify_krasner(&s);
    print_report(&r, "Krasner axioms");
    match &r.scalar_identity {
        Some(one) => println!("scalar identity: {one}"),
        None => println!("scalar identity: none"),
    }
    if r.passed() {
        Ok(())
    } else {
        Err(Negative.into())
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ideals(path: &Path, limits: &Limits) -> Outcome {
    let an = load(path, limits)?;
    let s = an.ring();
    let lat = an.lattice();
    println!("{} hyperideals of {}", lat.members().len(), s.name());
    for &q in lat.members() {
        let mut tags = vec![];
        if q == s.carrier() {
            tags.push("whole".to_string());
        }
        if lat.is_maximal(q) {
            tags.push("maximal".into());
        }
        if lat.is_prime(q) {
            tags.push("prime".into());
        }
        if q != s.carrier() && s.one().is_some() {
            if an.is_primary(q)? {
                tags.push("primary".into());
            }
            if kmn::classify::is_j(&an, q)?.holds() {
                tags.push("J".into());
            }
        }
        println!("  {:<20} {}", s.show_set(q), tags.join(" "));
    }
    println!("J(R) = {}", s.show_set(an.jacobson()));
    println!("local: {}", yes(an.is_local()));
    Ok(())
}

fn classify_cmd(path: &Path, ideal: &str, delta: Option<&str>, kmax: usize, json: bool, limits: &Limits) -> Outcome {
    let an = load(path, limits)?;
    let q = member(&an, ideal)?;
    let exps = match delta {
        Some(d) => vec![Expansion::builtin(&an, d)?],
        None => registry(&an),
    };
    let r = classify(&an, q, &exps, kmax, limits)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&r).map_err(Error::Json)?);
    } else {
        let show = |v: &[String]| format!("{{{}}}", v.join(","));
        println!("structure: {}", r.structure);
        println!("ideal: {}", show(&r.ideal));
        println!("proper: {}", yes(r.proper));
        println!("J(R): {}", show(&r.jacobson));
        println!("radical: {}", show(&r.radical));
        println!("maximal: {}", yes(r.maximal));
        println!("prime: {}", r.prime);
        println!("primary: {}", r.primary);
        println!("J: {}", r.j);
        for e in &r.expansions {
            println!("{} (image {}):", e.expansion, show(&e.image));
            println!("  delta-J: {}", e.delta_j);
            println!("  delta-primary: {}", e.delta_primary);
            for a in &e.absorbing {
                println!("  ({},n)-absorbing delta-J: {}", a.k, a.verdict);
            }
        }
    }
    let verdict = match delta {
        Some(_) => &r.expansions[0].delta_j,
        None => &r.j,
    };
    match verdict {
        Verdict::True => Ok(()),
        _ => Err(Negative.into()),
    }
}

fn jacobson(path: &Path, limits: &Limits) -> Outcome {
    let an = load(path, limits)?;
    let s = an.ring();
    for &m in an.maximal_hyperideals() {
        println!("maximal: {}", s.show_set(m));
    }
    println!("J(R) = {}", s.show_set(an.jacobson()));
    Ok(())
}

fn radical(path: &Path, ideal: &str, limits: &Limits) -> Outcome {
    let an = load(path, limits)?;
    let q = member(&an, ideal)?;
    let s = an.ring();
    let by_primes = an.radical_by_primes(q)?;
    println!("radical (primes): {}", s.show_set(by_primes));
    match an.radical_by_powers(q) {
        Ok(r) => {
            println!("radical (powers): {}", s.show_set(r));
            if r != by_primes {
                eprintln!("kmn: the two radicals disagree");
                return Err(Negative.into());
            }
        }
        Err(Error::NoScalarIdentity) => println!("radical (powers): not applicable (no scalar identity)"),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn quotient_cmd(path: &Path, ideal: &str, out: Option<&Path>, limits: &Limits) -> Outcome {
    let an = load(path, limits)?;
    let i = member(&an, ideal)?;
    let s = an.ring();
    match quotient(s, i)? {
        Err(defect) => {
            println!("quotient by {}: {defect}", s.show_set(i));
            Err(Negative.into())
        }
        Ok(q) => {
            for (k, c) in q.cosets.iter().enumerate() {
                println!("{:<12} = {}", q.ring.label(kmn::Elem::from(k)), s.show_set(*c));
            }
            let text = export_structure(&q.ring);
            match out {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

fn audit(source: &Source, theorems: &[String], out: Option<&Path>, kmax: usize, limits: &Limits) -> Outcome {
    let catalog = source.catalog(limits)?;
    let opts = AuditOptions {
        theorems: theorems.to_vec(),
        k_max: kmax,
        limits: limits.clone(),
    };
    let report = run_audit(&catalog, &opts)?;
    if let Some(p) = out {
        fs::write(p, report.to_jsonl())?;
    }
    print!("{}", report.render());
    Ok(())
}

fn export(dir: &Path, source: &Source, limits: &Limits) -> Outcome {
    let catalog = source.catalog(limits)?;
    fs::create_dir_all(dir)?;
    for e in &catalog {
        fs::write(dir.join(format!("{}.kmn", e.name())), export_structure(&e.structure))?;
    }
    println!("wrote {} structures to {}", catalog.len(), dir.display());
    Ok(())
}

fn search(spec: &str, source: &Source, json: bool, limits: &Limits) -> Outcome {
    let imp = parse_implication(spec)?;
    let catalog = source.catalog(limits)?;
    let r = search_counterexample(&imp, &catalog, limits)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&r).map_err(Error::Json)?);
    } else {
        println!("{} over {} structures", r.implication, r.structures);
        println!("instances: {} ({} undecided)", r.instances, r.undecided);
        match &r.counterexample {
            None => println!("no counterexample"),
            Some(hit) => {
                let w = hit
                    .witness
                    .as_ref()
                    .map(|w| format!(" at ({})", w.labels.join(",")))
                    .unwrap_or_default();
                println!(
                    "counterexample: {} {{{}}}: {} fails{w}",
                    hit.structure,
                    hit.ideal.join(","),
                    hit.failed
                );
            }
        }
    }
    match r.counterexample {
        None => Ok(()),
        Some(_) => Err(Negative.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::from_env();
    if let Some(c) = cli.max_carrier {
        limits.max_carrier = c;
    }
    if let Some(a) = cli.max_arity {
        limits.max_arity = a;
    }
    let l = &limits;
    let r = match &cli.command {
        Command::Verify { file } => verify(file, l),
        Command::Ideals { file } => ideals(file, l),
        Command::Classify {
            file,
            ideal,
            delta,
            kmax,
            json,
        } => classify_cmd(file, ideal, delta.as_deref(), *kmax, *json, l),
        Command::Jacobson { file } => jacobson(file, l),
        Command::Radical { file, ideal } => radical(file, ideal, l),
        Command::Quotient { file, ideal, out } => quotient_cmd(file, ideal, out.as_deref(), l),
        Command::Audit {
            source,
            theorems,
            out,
            kmax,
        } => audit(source, theorems, out.as_deref(), *kmax, l),
        Command::Catalog {
            command: CatalogCommand::Export { dir, source },
        } => export(dir, source, l),
        Command::Search {
            implication,
            source,
            json,
        } => search(implication, source, *json, l),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Tool(e)) => {
            eprintln!("kmn: {e}");
            ExitCode::from(2)
        }
    }
}
