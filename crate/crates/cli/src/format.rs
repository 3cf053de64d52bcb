//! The line-oriented `.alg` algebra definition format.
//!
//! ```text
//! # comment
//! algebra NAME size N
//! elements L0 L1 ...                 optional, before any table
//! op SYM ARITY
//! table SYM = v0 v1 ...              row-major, leftmost argument most significant
//! carrier {L, ...}                   optional, attaches to the current algebra
//! reduct meet=TERM join=TERM bot=TERM top=TERM
//! ```
//!
//! Table and carrier values are element labels when an `elements` line is
//! present (falling back to indices for tokens that are not labels) and
//! indices otherwise. TERMs are prefix expressions such as `(meet x0 x1)`.

use std::fmt::{self, Write as _};

use coprod::catalog::CatalogEntry;
use coprod::{Algebra, DReductSpec, Elem, FiniteAlgebra, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierDecl {
    /// Index into `AlgebraFile::algebras`.
    pub algebra: usize,
    pub members: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub algebras: Vec<FiniteAlgebra>,
    pub reduct: Option<DReductSpec>,
    pub carriers: Vec<CarrierDecl>,
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(token(line, s, i));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(token(line, s, line.len()));
    }
    out
}

fn token(line: &str, start: usize, end: usize) -> Token<'_> {
    Token {
        text: &line[start..end],
        column: line[..start].chars().count() + 1,
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(before, _)| before)
}

struct Draft {
    line: usize,
    name: String,
    size: usize,
    labels: Option<Vec<String>>,
    ops: Vec<(String, usize)>,
    tables: Vec<Option<Vec<Elem>>>,
}

impl Draft {
    fn resolve(&self, tok: Token<'_>, line: usize) -> Result<Elem, ParseError> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == tok.text) {
                return Ok(i);
            }
        }
        match tok.text.parse::<usize>() {
            Ok(v) if v < self.size => Ok(v),
            Ok(v) => Err(err(line, tok.column, format!("value {v} outside 0..{}", self.size))),
            Err(_) => Err(err(line, tok.column, format!("unknown element `{}`", tok.text))),
        }
    }

    fn finish(self) -> Result<FiniteAlgebra, ParseError> {
        let at = |message: String| err(self.line, 1, message);
        let mut tables = Vec::with_capacity(self.ops.len());
        for ((name, _), t) in self.ops.iter().zip(self.tables) {
            tables.push(t.ok_or_else(|| at(format!("missing table for `{name}` in `{}`", self.name)))?);
        }
        let signature = Signature::new(self.ops.clone()).map_err(|e| at(e.to_string()))?;
        let a = FiniteAlgebra::new(self.name, signature, self.size, tables).map_err(|e| at(e.to_string()))?;
        match self.labels {
            Some(labels) => a.with_labels(labels).map_err(|e| at(e.to_string())),
            None => Ok(a),
        }
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut algebras = Vec::new();
        let mut reduct = None;
        let mut carriers = Vec::new();
        let mut current: Option<Draft> = None;
        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            let line = strip_comment(raw);
            let toks = tokens(line);
            let Some(&head) = toks.first() else { continue };
            match head.text {
                "algebra" => {
                    if let Some(d) = current.take() {
                        algebras.push(d.finish()?);
                    }
                    let [_, name, kw, n] = toks[..] else {
                        return Err(err(ln, head.column, "expected `algebra NAME size N`"));
                    };
                    if kw.text != "size" {
                        return Err(err(ln, kw.column, format!("expected `size`, found `{}`", kw.text)));
                    }
                    let size = n
                        .text
                        .parse::<usize>()
                        .ok()
                        .filter(|&s| s > 0)
                        .ok_or_else(|| err(ln, n.column, format!("invalid size `{}`", n.text)))?;
                    current = Some(Draft {
                        line: ln,
                        name: name.text.to_string(),
                        size,
                        labels: None,
                        ops: Vec::new(),
                        tables: Vec::new(),
                    });
                }
                "elements" => {
                    let d = need(&mut current, ln, head)?;
                    if d.tables.iter().any(Option::is_some) {
                        return Err(err(ln, head.column, "`elements` must precede all tables"));
                    }
                    if toks.len() - 1 != d.size {
                        return Err(err(
                            ln,
                            head.column,
                            format!("{} labels for {} elements", toks.len() - 1, d.size),
                        ));
                    }
                    d.labels = Some(toks[1..].iter().map(|t| t.text.to_string()).collect());
                }
                "op" => {
                    let d = need(&mut current, ln, head)?;
                    let [_, sym, ar] = toks[..] else {
                        return Err(err(ln, head.column, "expected `op SYM ARITY`"));
                    };
                    let arity = ar
                        .text
                        .parse::<usize>()
                        .map_err(|_| err(ln, ar.column, format!("invalid arity `{}`", ar.text)))?;
                    if d.ops.iter().any(|(n, _)| n == sym.text) {
                        return Err(err(ln, sym.column, format!("symbol `{}` declared twice", sym.text)));
                    }
                    d.ops.push((sym.text.to_string(), arity));
                    d.tables.push(None);
                }
                "table" => {
                    let d = need(&mut current, ln, head)?;
                    if toks.len() < 3 || toks[2].text != "=" {
                        return Err(err(ln, head.column, "expected `table SYM = v0 v1 ...`"));
                    }
                    let sym = toks[1];
                    let op = d
                        .ops
                        .iter()
                        .position(|(n, _)| n == sym.text)
                        .ok_or_else(|| err(ln, sym.column, format!("undefined symbol `{}`", sym.text)))?;
                    let arity = d.ops[op].1;
                    let expected = u32::try_from(arity)
                        .ok()
                        .and_then(|a| d.size.checked_pow(a))
                        .ok_or_else(|| err(ln, sym.column, "table too large"))?;
                    let values = &toks[3..];
                    if values.len() != expected {
                        return Err(err(
                            ln,
                            sym.column,
                            format!("table length {}, expected {expected}", values.len()),
                        ));
                    }
                    if d.tables[op].is_some() {
                        return Err(err(ln, sym.column, format!("second table for `{}`", sym.text)));
                    }
                    let t = values.iter().map(|&v| d.resolve(v, ln)).collect::<Result<_, _>>()?;
                    d.tables[op] = Some(t);
                }
                "carrier" => {
                    let d = need(&mut current, ln, head)?;
                    let body_start = line.find("carrier").expect("head token") + "carrier".len();
                    let body = line[body_start..].trim();
                    let inner = body
                        .strip_prefix('{')
                        .and_then(|b| b.strip_suffix('}'))
                        .ok_or_else(|| err(ln, head.column, "expected `carrier {L, ...}`"))?;
                    let brace = line.find('{').expect("checked above");
                    let offset = line[..=brace].chars().count();
                    let mut members = Vec::new();
                    let is_label = |l: &str| d.labels.as_ref().is_some_and(|ls| ls.iter().any(|x| x == l));
                    for t in tokens(inner) {
                        for part in split_members(t.text, is_label) {
                            members.push(d.resolve(
                                Token {
                                    text: part,
                                    column: offset + t.column,
                                },
                                ln,
                            )?);
                        }
                    }
                    members.sort_unstable();
                    members.dedup();
                    carriers.push(CarrierDecl {
                        algebra: algebras.len(),
                        members,
                    });
                }
                "reduct" => {
                    if reduct.is_some() {
                        return Err(err(ln, head.column, "second `reduct` line"));
                    }
                    reduct = Some(parse_reduct(line, ln)?);
                }
                other => {
                    return Err(err(ln, head.column, format!("unknown directive `{other}`")));
                }
            }
        }
        if let Some(d) = current.take() {
            algebras.push(d.finish()?);
        }
        if algebras.is_empty() {
            return Err(err(1, 1, "no `algebra` definition"));
        }
        Ok(AlgebraFile {
            algebras,
            reduct,
            carriers,
        })
    }

    pub fn from_entry(entry: &CatalogEntry) -> Self {
        AlgebraFile {
            algebras: vec![entry.algebra.clone()],
            reduct: Some(entry.spec.clone()),
            carriers: entry
                .carriers
                .iter()
                .map(|c| CarrierDecl {
                    algebra: 0,
                    members: c.members.clone(),
                })
                .collect(),
        }
    }

    /// The declared reduct, or the basic symbols `meet join bot top`.
    pub fn spec(&self) -> DReductSpec {
        self.reduct.clone().unwrap_or_else(DReductSpec::literal)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, a) in self.algebras.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            write_algebra(&mut s, a);
            for c in self.carriers.iter().filter(|c| c.algebra == i) {
                let labels: Vec<String> = c.members.iter().map(|&e| value(a, e)).collect();
                let _ = writeln!(s, "carrier {{{}}}", labels.join(", "));
            }
        }
        if let Some(r) = &self.reduct {
            let _ = writeln!(s, "\nreduct meet={} join={} bot={} top={}", r.meet, r.join, r.bot, r.top);
        }
        s
    }
}

/// Splits a whitespace-free token of a comma-separated member list. Labels may
/// themselves contain commas, so a token (or the token minus a trailing comma)
/// that is a label is kept whole.
pub fn split_members(token: &str, is_label: impl Fn(&str) -> bool) -> Vec<&str> {
    if is_label(token) {
        return vec![token];
    }
    if let Some(t) = token.strip_suffix(',') {
        if is_label(t) {
            return vec![t];
        }
    }
    token.split(',').filter(|p| !p.is_empty()).collect()
}

fn need<'d>(current: &'d mut Option<Draft>, ln: usize, head: Token<'_>) -> Result<&'d mut Draft, ParseError> {
    current
        .as_mut()
        .ok_or_else(|| err(ln, head.column, format!("`{}` before any `algebra` line", head.text)))
}

fn has_default_labels(a: &FiniteAlgebra) -> bool {
    a.labels().iter().enumerate().all(|(i, l)| *l == i.to_string())
}

fn value(a: &FiniteAlgebra, e: Elem) -> String {
    if has_default_labels(a) {
        e.to_string()
    } else {
        a.label(e)
    }
}

fn write_algebra(s: &mut String, a: &FiniteAlgebra) {
    let _ = writeln!(s, "algebra {} size {}", a.name(), a.size());
    if !has_default_labels(a) {
        let _ = writeln!(s, "elements {}", a.labels().join(" "));
    }
    for sym in a.signature().symbols() {
        let _ = writeln!(s, "op {} {}", sym.name, sym.arity);
    }
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        let vals: Vec<String> = a.table(op).iter().map(|&v| value(a, v)).collect();
        let _ = writeln!(s, "table {} = {}", sym.name, vals.join(" "));
    }
}

fn parse_reduct(line: &str, ln: usize) -> Result<DReductSpec, ParseError> {
    let start = line.find("reduct").expect("head token") + "reduct".len();
    let mut rest = &line[start..];
    let mut found: [Option<Term>; 4] = Default::default();
    const KEYS: [&str; 4] = ["meet", "join", "bot", "top"];
    loop {
        let trimmed = rest.trim_start();
        if trimmed.is_empty() {
            break;
        }
        let col = line.len() - trimmed.len();
        let column = line[..col].chars().count() + 1;
        let (key, after) = trimmed
            .split_once('=')
            .ok_or_else(|| err(ln, column, "expected KEY=TERM"))?;
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| err(ln, column, format!("unknown reduct key `{key}`")))?;
        let len = term_extent(after).ok_or_else(|| err(ln, column, "unbalanced parentheses"))?;
        let term_col = column + key.chars().count() + 1;
        let t = Term::parse(&after[..len]).map_err(|e| err(ln, term_col + e.offset, e.message))?;
        if found[slot].replace(t).is_some() {
            return Err(err(ln, column, format!("`{key}` given twice")));
        }
        rest = &after[len..];
    }
    let [Some(meet), Some(join), Some(bot), Some(top)] = found else {
        return Err(err(ln, 1, "reduct needs meet=, join=, bot= and top="));
    };
    Ok(DReductSpec { meet, join, bot, top })
}

/// Byte length of the term at the start of `s`: a balanced parenthesised
/// expression, or a run of non-whitespace.
fn term_extent(s: &str) -> Option<usize> {
    if !s.starts_with('(') {
        return Some(s.find(char::is_whitespace).unwrap_or(s.len()));
    }
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
            _ => {}
        }
    }
    None
}
