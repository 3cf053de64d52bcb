//! The analyses behind each subcommand. Every command produces a text
//! rendering and a JSON value; `main` picks one.

use std::fmt::{self, Write as _};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use coprod::catalog::{self, CatalogId};
use coprod::piggyback::{CarrierMap, GeneratorSet, OmegaChoice};
use coprod::{
    coproduct, d_reduct, flowchart_classify, flowchart_classify_with, free_algebra, priestley_dual, reveng_priestley,
    Algebra, Caps, ClassificationReport, DReductSpec, Elem, Error, FiniteAlgebra,
};

use crate::format::AlgebraFile;

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: unreadable file, parse error, invalid algebra or parameter.
    Input(String),
    /// A resource cap stopped the analysis; the answer is unknown.
    Unknown(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unknown(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Unknown(m) => write!(f, "unknown: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_cap() {
            CliError::Unknown(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// A command's result in both renderings.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub json: Value,
}

impl Output {
    fn new(command: &str, text: String, result: Value) -> Self {
        Output {
            text,
            json: json!({ "schema": SCHEMA, "command": command, "result": result }),
        }
    }
}

/// Algebras read from one `.alg` file or catalog id.
#[derive(Clone, Debug)]
pub struct Input {
    pub source: String,
    pub file: AlgebraFile,
}

/// Reads `arg` as a file if one exists at that path, and as a catalog id otherwise.
pub fn load(arg: &str) -> Result<Input> {
    let path = Path::new(arg);
    let file = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
        AlgebraFile::parse(&text).map_err(|e| CliError::Input(format!("{arg}: {e}")))?
    } else {
        let id: CatalogId = arg
            .parse()
            .map_err(|e| CliError::Input(format!("`{arg}` is neither a file nor a catalog id ({e})")))?;
        AlgebraFile::from_entry(&catalog::make(id)?)
    };
    Ok(Input {
        source: arg.to_string(),
        file,
    })
}

/// All algebras of the inputs, with the reduct of the first input.
pub fn gather(inputs: &[Input]) -> Result<(Vec<FiniteAlgebra>, DReductSpec)> {
    let first = inputs.first().ok_or_else(|| CliError::Input("no input given".into()))?;
    let spec = first.file.spec();
    for i in &inputs[1..] {
        if i.file.reduct.is_some() && i.file.spec() != spec {
            return Err(CliError::Input(format!(
                "{} declares a different reduct from {}",
                i.source, first.source
            )));
        }
    }
    let algebras = inputs.iter().flat_map(|i| i.file.algebras.iter().cloned()).collect();
    Ok((algebras, spec))
}

/// How Ω is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OmegaArg {
    Auto,
    /// `[SORT:]L,L;[SORT:]L,...`, one prime filter per item.
    List(String),
}

impl std::str::FromStr for OmegaArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            Ok(OmegaArg::Auto)
        } else if s.trim().is_empty() {
            Err("empty carrier list".into())
        } else {
            Ok(OmegaArg::List(s.to_string()))
        }
    }
}

pub fn parse_omega(text: &str, gens: &GeneratorSet) -> coprod::Result<Vec<CarrierMap>> {
    let mut out = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (sort, rest) = match item.split_once(':') {
            Some((s, r)) if s.trim().parse::<usize>().is_ok() => (s.trim().parse::<usize>().unwrap(), r),
            _ => (0, item),
        };
        if sort >= gens.len() {
            return Err(Error::InvalidParameter(format!("no sort {sort}; there are {}", gens.len())));
        }
        let a = gens.algebra(sort);
        let inner = rest.trim().trim_start_matches('{').trim_end_matches('}');
        let mut members = Vec::new();
        let is_label = |l: &str| a.element_by_label(l).is_some();
        let parts: Vec<&str> = inner
            .split_whitespace()
            .flat_map(|t| crate::format::split_members(t, is_label))
            .collect();
        for l in parts {
            let e = a
                .element_by_label(l)
                .or_else(|| l.parse::<usize>().ok().filter(|&e| e < a.size()))
                .ok_or_else(|| Error::InvalidParameter(format!("`{l}` is not an element of {}", a.name())))?;
            members.push(e);
        }
        let c = gens.carrier_with_members(sort, &members).ok_or_else(|| {
            Error::InvalidParameter(format!("{{{inner}}} is not a prime filter of {}", a.name()))
        })?;
        out.push(c);
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::EmptyInput("carrier list"));
    }
    Ok(out)
}

fn classify_report(algebras: &[FiniteAlgebra], spec: &DReductSpec, omega: &OmegaArg, caps: &Caps) -> Result<ClassificationReport> {
    Ok(match omega {
        OmegaArg::Auto => flowchart_classify(algebras, spec, caps)?,
        OmegaArg::List(text) => flowchart_classify_with(algebras, spec, caps, |gens| {
            let omega = parse_omega(text, gens)?;
            Ok(OmegaChoice {
                alternatives: vec![omega.clone()],
                omega,
            })
        })?,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pairs_text(a: &FiniteAlgebra, b: &FiniteAlgebra, pairs: &[(Elem, Elem)]) -> String {
    let items: Vec<String> = pairs.iter().map(|&(x, y)| format!("({},{})", a.label(x), b.label(y))).collect();
    format!("{{{}}}", items.join(","))
}

pub fn classify(inputs: &[Input], omega: &OmegaArg, caps: &Caps) -> Result<Output> {
    let (algebras, spec) = gather(inputs)?;
    let r = classify_report(&algebras, &spec, omega, caps)?;
    let mut t = String::new();
    let _ = writeln!(t, "quasivariety generated by: {}", r.input.join(", "));
    let _ = writeln!(t, "simplified generators: {}", r.simplified.join(", "));
    match &r.single_generator {
        Some(g) => {
            let _ = writeln!(t, "single generator: {} ({} elements)", g.name, g.size);
        }
        None => {
            let _ = writeln!(t, "single generator: none");
        }
    }
    let _ = writeln!(t, "carriers ({} valid choices of this size):", r.omega_alternatives);
    for (i, w) in r.omega.iter().enumerate() {
        let _ = writeln!(t, "  ω{i} = {} = {{{}}}", w.label, w.member_labels.join(", "));
    }
    let _ = writeln!(t, "relation counts:");
    for rel in &r.relation_sizes {
        let _ = writeln!(t, "  |R(ω{},ω{})| = {}", rel.carriers.0, rel.carriers.1, rel.size);
    }
    let _ = writeln!(t, "route:");
    for step in &r.route {
        let _ = writeln!(t, "  {} {} ({})", step.question, yes_no(step.answer), step.detail);
    }
    let _ = writeln!(t, "coproducts preserved: {}", yes_no(r.preserves_coproducts));
    let _ = writeln!(t, "E: {}, S: {}", yes_no(r.verdict_e), yes_no(r.verdict_s));
    Ok(Output::new("classify", t, serde_json::to_value(&r).expect("report serializes")))
}

#[derive(Serialize)]
struct RelationOut {
    carriers: (usize, usize),
    source: String,
    target: String,
    pairs: Vec<(Elem, Elem)>,
}

#[derive(Serialize)]
struct OperationOut {
    source: String,
    target: String,
    map: Vec<Elem>,
}

pub fn duality(inputs: &[Input], omega: &OmegaArg, caps: &Caps) -> Result<Output> {
    let (algebras, spec) = gather(inputs)?;
    let r = classify_report(&algebras, &spec, omega, caps)?;
    let ego = &r.ego;
    let gens = &ego.generators;
    let mut t = String::new();
    let _ = writeln!(t, "sorts:");
    for (s, g) in gens.generators().iter().enumerate() {
        let _ = writeln!(t, "  {s}: {} ({} elements)", g.algebra.name(), g.algebra.size());
    }
    let _ = writeln!(t, "carriers:");
    for (i, w) in r.omega.iter().enumerate() {
        let _ = writeln!(t, "  ω{i} = {} = {{{}}}", w.label, w.member_labels.join(", "));
    }
    let _ = writeln!(t, "relations:");
    let mut relations = Vec::new();
    for rel in &ego.relations {
        let (a, b) = (gens.algebra(rel.source), gens.algebra(rel.target));
        let _ = writeln!(
            t,
            "  R(ω{},ω{}): {}",
            rel.carriers.0,
            rel.carriers.1,
            pairs_text(a, b, &rel.pairs)
        );
        relations.push(RelationOut {
            carriers: rel.carriers,
            source: a.name().to_string(),
            target: b.name().to_string(),
            pairs: rel.pairs.clone(),
        });
    }
    let _ = writeln!(t, "operations:");
    let mut operations = Vec::new();
    for g in &ego.operations {
        let (a, b) = (gens.algebra(g.source), gens.algebra(g.target));
        let images: Vec<String> = g.map.map.iter().map(|&v| b.label(v)).collect();
        let _ = writeln!(t, "  {} → {}: [{}]", a.name(), b.name(), images.join(" "));
        operations.push(OperationOut {
            source: a.name().to_string(),
            target: b.name().to_string(),
            map: g.map.map.clone(),
        });
    }
    let result = json!({
        "sorts": r.sorts,
        "omega": r.omega,
        "relations": relations,
        "operations": operations,
    });
    Ok(Output::new("duality", t, result))
}

fn tables_json(a: &FiniteAlgebra) -> Value {
    let ops: Vec<Value> = a
        .signature()
        .symbols()
        .iter()
        .enumerate()
        .map(|(op, s)| json!({ "symbol": s.name, "arity": s.arity, "table": a.table(op) }))
        .collect();
    json!({ "name": a.name(), "size": a.size(), "labels": a.labels(), "operations": ops })
}

/// `family` are the algebras to combine; `variety`, if given, generates the
/// quasivariety (otherwise the family does).
pub fn coproduct_cmd(family: &[Input], variety: &[Input], caps: &Caps) -> Result<Output> {
    let (ks, spec) = gather(family)?;
    let gens = if variety.is_empty() { ks.clone() } else { gather(variety)?.0 };
    let r = flowchart_classify(&gens, &spec, caps)?;
    let c = coproduct(&r.ego, &ks, caps)?;
    let mut t = String::new();
    let _ = writeln!(t, "coproduct of {} in ISP({})", names(&ks), r.sorts.join(", "));
    let _ = writeln!(t, "size {}", c.algebra.size());
    let mut injections = Vec::new();
    for (i, (b, e)) in ks.iter().zip(&c.injections).enumerate() {
        let cells: Vec<String> = (0..b.size()).map(|x| format!("{}↦{}", b.label(x), e.apply(x))).collect();
        let _ = writeln!(t, "ε{i} ({}): {}", b.name(), cells.join(" "));
        injections.push(json!({ "algebra": b.name(), "map": e.map }));
    }
    let result = json!({
        "size": c.algebra.size(),
        "injections": injections,
        "algebra": tables_json(&c.algebra),
    });
    Ok(Output::new("coproduct", t, result))
}

fn names(algebras: &[FiniteAlgebra]) -> String {
    algebras.iter().map(|a| a.name()).collect::<Vec<_>>().join(", ")
}

pub fn free(n: usize, inputs: &[Input], caps: &Caps) -> Result<Output> {
    let (ms, _) = gather(inputs)?;
    let f = free_algebra(&ms, n, caps)?;
    let mut t = String::new();
    let _ = writeln!(t, "free algebra on {n} generators in ISP({})", names(&ms));
    let _ = writeln!(t, "size {}", f.algebra.size());
    let gens: Vec<String> = f
        .generators
        .iter()
        .enumerate()
        .map(|(j, &g)| format!("x{j} = {}", f.algebra.label(g)))
        .collect();
    if !gens.is_empty() {
        let _ = writeln!(t, "generators: {}", gens.join(", "));
    }
    let result = json!({
        "n": n,
        "size": f.algebra.size(),
        "generators": f.generators,
        "algebra": tables_json(&f.algebra),
    });
    Ok(Output::new("free", t, result))
}

pub fn reveng_check(input: &Input, variety: &[Input], omega: &OmegaArg, caps: &Caps) -> Result<Output> {
    let (algebras, spec) = gather(std::slice::from_ref(input))?;
    let gens = if variety.is_empty() { algebras.clone() } else { gather(variety)?.0 };
    let r = classify_report(&gens, &spec, omega, caps)?;
    let mut t = String::new();
    let mut results = Vec::new();
    for a in &algebras {
        let rec = reveng_priestley(a, &r.ego, caps)?;
        let _ = writeln!(t, "{}: |Y| = {}, classes = {}", a.name(), rec.space.elements.len(), rec.classes.len());
        let covers: Vec<String> = rec
            .quotient
            .covers()
            .iter()
            .map(|&(x, y)| format!("{} < {}", rec.quotient.labels()[x], rec.quotient.labels()[y]))
            .collect();
        let _ = writeln!(t, "  Y/≈ points: {}", rec.quotient.labels().join(" "));
        let _ = writeln!(t, "  covers: {}", if covers.is_empty() { "none".into() } else { covers.join(", ") });
        let _ = writeln!(t, "  isomorphic to the Priestley dual of U({}): yes", a.name());
        results.push(json!({ "algebra": a.name(), "reconstruction": rec }));
    }
    Ok(Output::new("reveng-check", t, Value::Array(results)))
}

#[derive(Serialize)]
struct Table1Row {
    id: String,
    expected: String,
    computed: String,
    #[serde(rename = "match")]
    matches: bool,
}

pub fn table1(caps: &Caps) -> Result<Output> {
    let mut t = String::new();
    let mut rows = Vec::new();
    for (entry, expected) in catalog::table1_suite() {
        let computed = match flowchart_classify(std::slice::from_ref(&entry.algebra), &entry.spec, caps) {
            Ok(r) => r.verdict_label(),
            Err(e) if e.is_cap() => "unknown".to_string(),
            Err(e) => return Err(e.into()),
        };
        let row = Table1Row {
            id: entry.id.to_string(),
            expected: expected.to_string(),
            matches: computed == expected.to_string(),
            computed,
        };
        let _ = writeln!(
            t,
            "{:<20} expected {}  computed {}  {}",
            row.id,
            row.expected,
            row.computed,
            if row.matches { "match" } else { "MISMATCH" }
        );
        rows.push(row);
    }
    let all = rows.iter().all(|r| r.matches);
    let _ = writeln!(t, "{} of {} rows match", rows.iter().filter(|r| r.matches).count(), rows.len());
    Ok(Output::new("table1", t, json!({ "rows": rows, "all_match": all })))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum DotKind {
    /// Prime-filter poset of the lattice reduct.
    Priestley,
    /// Hasse diagram of the lattice reduct itself.
    Lattice,
    /// The poset Y/≈ reconstructed from the natural dual.
    Reconstructed,
}

pub fn export_dot(input: &Input, kind: DotKind, caps: &Caps) -> Result<Output> {
    let (algebras, spec) = gather(std::slice::from_ref(input))?;
    let a = &algebras[0];
    let dot = match kind {
        DotKind::Priestley => priestley_dual(&d_reduct(a, &spec)?).to_dot(&format!("H(U({}))", a.name())),
        DotKind::Lattice => d_reduct(a, &spec)?.order().to_dot(&format!("U({})", a.name())),
        DotKind::Reconstructed => {
            let r = flowchart_classify(&algebras, &spec, caps)?;
            reveng_priestley(a, &r.ego, caps)?.quotient.to_dot(&format!("Y/≈ for {}", a.name()))
        }
    };
    Ok(Output::new("export-dot", dot.clone(), json!({ "dot": dot })))
}
