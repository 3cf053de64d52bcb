//! Finite algebras as operation tables over a shared signature.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Elements of every algebra live on `0..size`.
pub type Elem = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let symbols: Vec<Symbol> = symbols
            .into_iter()
            .map(|(name, arity)| Symbol {
                name: name.into(),
                arity,
            })
            .collect();
        for (i, s) in symbols.iter().enumerate() {
            if s.name.is_empty() {
                return Err(Error::InvalidSignature("empty symbol name".into()));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate symbol `{}`",
                    s.name
                )));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn arity(&self, op: usize) -> usize {
        self.symbols[op].arity
    }
}

/// Read access shared by tabled algebras and lazily computed products.
pub trait Algebra {
    fn name(&self) -> &str;
    fn signature(&self) -> &Signature;
    fn size(&self) -> usize;
    /// Applies operation `op` (an index into the signature) to `args`.
    fn apply(&self, op: usize, args: &[Elem]) -> Elem;

    fn label(&self, e: Elem) -> String {
        e.to_string()
    }
}

/// Number of argument tuples of length `arity` over a universe of size `n`.
pub(crate) fn tuple_count(n: usize, arity: usize) -> Option<usize> {
    let mut c: usize = 1;
    for _ in 0..arity {
        c = c.checked_mul(n)?;
    }
    Some(c)
}

/// Row-major index of an argument tuple, leftmost argument most significant.
#[inline]
pub(crate) fn table_index(n: usize, args: &[Elem]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// Calls `f` on every tuple of length `arity` over `0..n`, in lexicographic order.
pub(crate) fn for_each_tuple(n: usize, arity: usize, mut f: impl FnMut(&[Elem])) {
    if arity == 0 {
        f(&[]);
        return;
    }
    if n == 0 {
        return;
    }
    let mut t = vec![0; arity];
    loop {
        f(&t);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// An algebra stored as explicit operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    size: usize,
    tables: Vec<Vec<Elem>>,
    labels: Vec<String>,
}

impl FiniteAlgebra {
    /// Builds an algebra from row-major tables, one per symbol in signature order.
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        tables: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidAlgebra {
            name: name.clone(),
            reason,
        };
        if size == 0 {
            return Err(invalid("universe must be non-empty".into()));
        }
        if tables.len() != signature.len() {
            return Err(invalid(format!(
                "{} tables for {} symbols",
                tables.len(),
                signature.len()
            )));
        }
        for (sym, table) in signature.symbols().iter().zip(&tables) {
            let expected = tuple_count(size, sym.arity)
                .ok_or_else(|| invalid(format!("table for `{}` too large", sym.name)))?;
            if table.len() != expected {
                return Err(invalid(format!(
                    "table `{}` has length {}, expected {}",
                    sym.name,
                    table.len(),
                    expected
                )));
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= size) {
                return Err(invalid(format!(
                    "table `{}` has entry {} outside 0..{}",
                    sym.name, bad, size
                )));
            }
        }
        let labels = (0..size).map(|i| i.to_string()).collect();
        Ok(FiniteAlgebra {
            name,
            signature,
            size,
            tables,
            labels,
        })
    }

    /// Builds an algebra by evaluating `f(op, args)` on every argument tuple.
    pub fn from_fn(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        mut f: impl FnMut(usize, &[Elem]) -> Elem,
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(signature.len());
        for (op, sym) in signature.symbols().iter().enumerate() {
            let mut table = Vec::with_capacity(tuple_count(size, sym.arity).unwrap_or(0));
            for_each_tuple(size, sym.arity, |args| table.push(f(op, args)));
            tables.push(table);
        }
        Self::new(name, signature, size, tables)
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.size {
            return Err(Error::InvalidAlgebra {
                name: self.name,
                reason: format!("{} labels for {} elements", labels.len(), self.size),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(|c| c.is_whitespace() || "{}#=".contains(c)) {
                return Err(Error::InvalidAlgebra {
                    name: self.name,
                    reason: format!("label `{l}` must be non-empty without spaces, braces, `#` or `=`"),
                });
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidAlgebra {
                    name: self.name,
                    reason: format!("duplicate label `{l}`"),
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn tables(&self) -> &[Vec<Elem>] {
        &self.tables
    }

    pub fn table(&self, op: usize) -> &[Elem] {
        &self.tables[op]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    /// Looks up an operation by name and applies it.
    pub fn op(&self, name: &str, args: &[Elem]) -> Result<Elem> {
        let op = self
            .signature
            .index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        let arity = self.signature.arity(op);
        if args.len() != arity {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        check_args(self.size, args)?;
        Ok(self.apply(op, args))
    }

    /// The one-element algebra of the given signature.
    pub fn trivial(name: impl Into<String>, signature: Signature) -> Self {
        FiniteAlgebra::from_fn(name, signature, 1, |_, _| 0).expect("trivial algebra is valid")
    }
}

impl Algebra for FiniteAlgebra {
    fn name(&self) -> &str {
        &self.name
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        self.tables[op][table_index(self.size, args)]
    }

    fn label(&self, e: Elem) -> String {
        self.labels[e].clone()
    }
}

fn check_args(size: usize, args: &[Elem]) -> Result<()> {
    match args.iter().find(|&&a| a >= size) {
        Some(&element) => Err(Error::ArgumentOutOfRange { element, size }),
        None => Ok(()),
    }
}

pub(crate) fn same_signature<A: Algebra + ?Sized, B: Algebra + ?Sized>(a: &A, b: &B) -> Result<()> {
    if a.signature() == b.signature() {
        Ok(())
    } else {
        Err(Error::SignatureMismatch(
            a.name().to_string(),
            b.name().to_string(),
        ))
    }
}

/// A term over a signature: variables `x0, x1, ...` and applied symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    /// `name(x0, ..., x{arity-1})`.
    pub fn basic(name: impl Into<String>, arity: usize) -> Term {
        Term::App(name.into(), (0..arity).map(Term::Var).collect())
    }

    /// Number of variables needed to evaluate the term.
    pub fn var_count(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::var_count).max().unwrap_or(0),
        }
    }

    /// Checks every symbol exists with matching child count.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(name, args) => {
                let op = sig
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                if sig.arity(op) != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: name.clone(),
                        expected: sig.arity(op),
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|t| t.check(sig))
            }
        }
    }

    /// If the term is `sym(x0, ..., x{k-1})` returns `sym`.
    pub fn as_basic(&self) -> Option<&str> {
        match self {
            Term::App(name, args)
                if args.iter().enumerate().all(|(i, t)| *t == Term::Var(i)) =>
            {
                Some(name)
            }
            _ => None,
        }
    }

    /// Resolves symbol names to signature indices for repeated evaluation.
    pub fn compile(&self, sig: &Signature) -> Result<CompiledTerm> {
        self.check(sig)?;
        Ok(CompiledTerm {
            node: compile_node(self, sig),
            vars: self.var_count(),
        })
    }

    /// Parses the prefix form `(sym t1 ... tk)`, `sym` for nullary symbols, or `xN`.
    pub fn parse(text: &str) -> std::result::Result<Term, TermParseError> {
        let mut p = TermParser {
            chars: text.char_indices().peekable(),
            text,
        };
        let t = p.term()?;
        p.skip_ws();
        match p.chars.peek() {
            None => Ok(t),
            Some(&(pos, _)) => Err(TermParseError {
                offset: pos,
                message: "trailing input after term".into(),
            }),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermParseError {
    pub offset: usize,
    pub message: String,
}

struct TermParser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
}

impl TermParser<'_> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn ident(&mut self) -> std::result::Result<String, TermParseError> {
        let start = match self.chars.peek() {
            Some(&(pos, _)) => pos,
            None => {
                return Err(TermParseError {
                    offset: self.text.len(),
                    message: "unexpected end of term".into(),
                })
            }
        };
        let mut end = start;
        while let Some(&(pos, c)) = self.chars.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            end = pos + c.len_utf8();
            self.chars.next();
        }
        if end == start {
            return Err(TermParseError {
                offset: start,
                message: "expected a symbol or variable".into(),
            });
        }
        Ok(self.text[start..end].to_string())
    }

    fn term(&mut self) -> std::result::Result<Term, TermParseError> {
        self.skip_ws();
        match self.chars.peek() {
            Some(&(_, '(')) => {
                self.chars.next();
                self.skip_ws();
                let name = self.ident()?;
                let mut args = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.peek() {
                        Some(&(_, ')')) => {
                            self.chars.next();
                            break;
                        }
                        Some(_) => args.push(self.term()?),
                        None => {
                            return Err(TermParseError {
                                offset: self.text.len(),
                                message: "unclosed parenthesis".into(),
                            })
                        }
                    }
                }
                Ok(Term::App(name, args))
            }
            Some(&(pos, ')')) => Err(TermParseError {
                offset: pos,
                message: "unexpected `)`".into(),
            }),
            _ => {
                let name = self.ident()?;
                Ok(parse_atom(name))
            }
        }
    }
}

fn parse_atom(name: String) -> Term {
    if let Some(rest) = name.strip_prefix('x') {
        if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
            if let Ok(i) = rest.parse() {
                return Term::Var(i);
            }
        }
    }
    Term::App(name, Vec::new())
}

#[derive(Clone, Debug)]
enum Node {
    Var(usize),
    App(usize, Vec<Node>),
}

fn compile_node(t: &Term, sig: &Signature) -> Node {
    match t {
        Term::Var(i) => Node::Var(*i),
        Term::App(name, args) => Node::App(
            sig.index_of(name).expect("checked"),
            args.iter().map(|a| compile_node(a, sig)).collect(),
        ),
    }
}

/// A term with symbols resolved against a signature.
#[derive(Clone, Debug)]
pub struct CompiledTerm {
    node: Node,
    vars: usize,
}

impl CompiledTerm {
    pub fn var_count(&self) -> usize {
        self.vars
    }

    /// Evaluates without range checks; `args` must cover every variable.
    pub fn eval<A: Algebra + ?Sized>(&self, a: &A, args: &[Elem]) -> Elem {
        fn go<A: Algebra + ?Sized>(n: &Node, a: &A, args: &[Elem]) -> Elem {
            match n {
                Node::Var(i) => args[*i],
                Node::App(op, children) => match children.len() {
                    0 => a.apply(*op, &[]),
                    1 => {
                        let x = go(&children[0], a, args);
                        a.apply(*op, &[x])
                    }
                    2 => {
                        let x = go(&children[0], a, args);
                        let y = go(&children[1], a, args);
                        a.apply(*op, &[x, y])
                    }
                    _ => {
                        let vals: Vec<Elem> = children.iter().map(|c| go(c, a, args)).collect();
                        a.apply(*op, &vals)
                    }
                },
            }
        }
        go(&self.node, a, args)
    }
}

/// Value of `t` in `a` at `args`.
pub fn eval_term<A: Algebra + ?Sized>(a: &A, t: &Term, args: &[Elem]) -> Result<Elem> {
    let c = t.compile(a.signature())?;
    if args.len() < c.var_count() {
        return Err(Error::MissingArgument {
            needed: c.var_count() - 1,
            given: args.len(),
        });
    }
    check_args(a.size(), args)?;
    Ok(c.eval(a, args))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3_with_neg() -> FiniteAlgebra {
        let sig = Signature::new([("meet", 2), ("join", 2), ("neg", 1), ("bot", 0), ("top", 0)]).unwrap();
        FiniteAlgebra::from_fn("k3", sig, 3, |op, a| match op {
            0 => a[0].min(a[1]),
            1 => a[0].max(a[1]),
            2 => 2 - a[0],
            3 => 0,
            _ => 2,
        })
        .unwrap()
    }

    #[test]
    fn duplicate_symbols_rejected() {
        assert!(Signature::new([("f", 1), ("f", 2)]).is_err());
    }

    #[test]
    fn table_length_checked() {
        let sig = Signature::new([("meet", 2)]).unwrap();
        let err = FiniteAlgebra::new("bad", sig, 2, vec![vec![0, 0, 0]]).unwrap_err();
        assert!(err.to_string().contains("length 3, expected 4"), "{err}");
    }

    #[test]
    fn entries_out_of_range_rejected() {
        let sig = Signature::new([("c", 0)]).unwrap();
        assert!(FiniteAlgebra::new("bad", sig, 2, vec![vec![2]]).is_err());
    }

    #[test]
    fn eval_variable_and_negation() {
        let k = chain3_with_neg();
        assert_eq!(eval_term(&k, &Term::var(0), &[1]).unwrap(), 1);
        let neg = Term::app("neg", vec![Term::var(0)]);
        assert_eq!(eval_term(&k, &neg, &[1]).unwrap(), 1);
        assert_eq!(eval_term(&k, &neg, &[0]).unwrap(), 2);
    }

    #[test]
    fn eval_errors() {
        let k = chain3_with_neg();
        assert!(matches!(
            eval_term(&k, &Term::app("imp", vec![]), &[]),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            eval_term(&k, &Term::var(0), &[5]),
            Err(Error::ArgumentOutOfRange { .. })
        ));
        assert!(matches!(
            eval_term(&k, &Term::var(1), &[0]),
            Err(Error::MissingArgument { .. })
        ));
        assert!(matches!(
            eval_term(&k, &Term::app("neg", vec![]), &[]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn term_parse_and_display() {
        let t = Term::parse("(plus (neg (plus (neg x0) x1)) x1)").unwrap();
        assert_eq!(t.to_string(), "(plus (neg (plus (neg x0) x1)) x1)");
        assert_eq!(t.var_count(), 2);
        assert_eq!(Term::parse("bot").unwrap(), Term::constant("bot"));
        assert_eq!(Term::parse("(bot)").unwrap(), Term::constant("bot"));
        assert!(Term::parse("(meet x0").is_err());
        assert!(Term::parse("x0 x1").is_err());
        assert_eq!(Term::basic("meet", 2).as_basic(), Some("meet"));
        assert_eq!(Term::parse("(meet x1 x0)").unwrap().as_basic(), None);
    }

    #[test]
    fn tuples_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_tuple(2, 2, |t| seen.push(t.to_vec()));
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let mut n = 0;
        for_each_tuple(3, 0, |_| n += 1);
        assert_eq!(n, 1);
    }
}
