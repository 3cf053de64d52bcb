//! Constructors for the named example algebras, with their lattice reducts,
//! documented carriers and expected classifications.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra, Signature, Term};
use crate::distlat::DReductSpec;
use crate::error::{Error, Result};

/// Largest parameter accepted by the parametrised families.
pub const MAX_PARAM: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogId {
    Bool2,
    DeMorgan4,
    Kleene3,
    HeytingChain(usize),
    PseudoB(usize),
    MvChain(usize),
    MoisilL(usize),
    MoisilM(usize),
    PreMoisilL0(usize),
    PreMoisilM0(usize),
}

impl CatalogId {
    pub fn family(&self) -> &'static str {
        match self {
            CatalogId::Bool2 => "bool2",
            CatalogId::DeMorgan4 => "demorgan4",
            CatalogId::Kleene3 => "kleene3",
            CatalogId::HeytingChain(_) => "heyting_chain",
            CatalogId::PseudoB(_) => "pseudo_b",
            CatalogId::MvChain(_) => "mv_chain",
            CatalogId::MoisilL(_) => "moisil_L",
            CatalogId::MoisilM(_) => "moisil_M",
            CatalogId::PreMoisilL0(_) => "pre_moisil_L0",
            CatalogId::PreMoisilM0(_) => "pre_moisil_M0",
        }
    }

    pub fn param(&self) -> Option<usize> {
        match *self {
            CatalogId::Bool2 | CatalogId::DeMorgan4 | CatalogId::Kleene3 => None,
            CatalogId::HeytingChain(n)
            | CatalogId::PseudoB(n)
            | CatalogId::MvChain(n)
            | CatalogId::MoisilL(n)
            | CatalogId::MoisilM(n)
            | CatalogId::PreMoisilL0(n)
            | CatalogId::PreMoisilM0(n) => Some(n),
        }
    }

    /// Every family name, for help texts.
    pub fn families() -> &'static [&'static str] {
        &[
            "bool2",
            "demorgan4",
            "kleene3",
            "heyting_chain",
            "pseudo_b",
            "mv_chain",
            "moisil_L",
            "moisil_M",
            "pre_moisil_L0",
            "pre_moisil_M0",
        ]
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            Some(n) => write!(f, "{}({})", self.family(), n),
            None => write!(f, "{}", self.family()),
        }
    }
}

impl Serialize for CatalogId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    /// Accepts `name`, `name:N` and `name(N)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, param) = if let Some((name, rest)) = s.split_once(':') {
            (name, Some(rest))
        } else if let Some((name, rest)) = s.split_once('(') {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::InvalidParameter(format!("unbalanced parenthesis in `{s}`")))?;
            (name, Some(inner))
        } else {
            (s, None)
        };
        let n = match param {
            Some(p) => Some(
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad parameter `{p}` in `{s}`")))?,
            ),
            None => None,
        };
        let need = |n: Option<usize>| n.ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs a parameter")));
        let none = |n: Option<usize>| match n {
            Some(_) => Err(Error::InvalidParameter(format!("`{name}` takes no parameter"))),
            None => Ok(()),
        };
        let id = match name {
            "bool2" => none(n).map(|_| CatalogId::Bool2)?,
            "demorgan4" => none(n).map(|_| CatalogId::DeMorgan4)?,
            "kleene3" => none(n).map(|_| CatalogId::Kleene3)?,
            "heyting_chain" => CatalogId::HeytingChain(need(n)?),
            "pseudo_b" => CatalogId::PseudoB(need(n)?),
            "mv_chain" => CatalogId::MvChain(need(n)?),
            "moisil_L" => CatalogId::MoisilL(need(n)?),
            "moisil_M" => CatalogId::MoisilM(need(n)?),
            "pre_moisil_L0" => CatalogId::PreMoisilL0(need(n)?),
            "pre_moisil_M0" => CatalogId::PreMoisilM0(need(n)?),
            _ => return Err(Error::InvalidParameter(format!("unknown catalog id `{name}`"))),
        };
        id.check()?;
        Ok(id)
    }
}

impl CatalogId {
    fn check(&self) -> Result<()> {
        let (lo, hi) = match self {
            CatalogId::HeytingChain(_) | CatalogId::MoisilL(_) | CatalogId::MoisilM(_) => (2, MAX_PARAM),
            CatalogId::PreMoisilL0(_) | CatalogId::PreMoisilM0(_) => (2, MAX_PARAM),
            CatalogId::PseudoB(_) => (0, 10),
            CatalogId::MvChain(_) => (1, MAX_PARAM),
            _ => return Ok(()),
        };
        let n = self.param().unwrap();
        if n < lo || n > hi {
            return Err(Error::InvalidParameter(format!(
                "{} requires {lo} ≤ n ≤ {hi}, got {n}",
                self.family()
            )));
        }
        Ok(())
    }
}

/// Expected E/S verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub e: bool,
    pub s: bool,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "✓" } else { "×" };
        write!(f, "E{}S{}", mark(self.e), mark(self.s))
    }
}

/// A prime filter documented for the entry's algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DocumentedCarrier {
    pub description: String,
    pub members: Vec<Elem>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: CatalogId,
    pub algebra: FiniteAlgebra,
    pub spec: DReductSpec,
    pub carriers: Vec<DocumentedCarrier>,
    pub expected: Option<Expected>,
    /// Why no expectation is recorded, when `expected` is empty.
    pub note: Option<&'static str>,
}

const MOISIL_TWO_NOTE: &str = "n = 2: the E×S✓ classification stated for all n ≥ 2 conflicts with \
     (Sep) holding for a single carrier exactly when n ≤ 2; \
     the computed verdict is reported without an expectation";

fn sig(symbols: Vec<(String, usize)>) -> Signature {
    Signature::new(symbols).expect("catalog signatures are well formed")
}

fn named(names: &[(&str, usize)]) -> Vec<(String, usize)> {
    names.iter().map(|&(n, a)| (n.to_string(), a)).collect()
}

fn lattice_ops(x: Elem, y: Elem, op: &str) -> Elem {
    match op {
        "meet" => x.min(y),
        _ => x.max(y),
    }
}

/// Builds the entry for `id`.
pub fn make(id: CatalogId) -> Result<CatalogEntry> {
    id.check()?;
    let literal = DReductSpec::literal();
    let entry = |algebra, spec, carriers, expected| CatalogEntry {
        id,
        algebra,
        spec,
        carriers,
        expected,
        note: None,
    };
    let carrier = |description: &str, members: Vec<Elem>| DocumentedCarrier {
        description: description.to_string(),
        members,
    };
    let yes_yes = Some(Expected { e: true, s: true });
    Ok(match id {
        CatalogId::Bool2 => entry(
            chain_with_neg("bool2", 2)?,
            literal,
            vec![carrier("{1}", vec![1])],
            yes_yes,
        ),
        CatalogId::DeMorgan4 => entry(demorgan4()?, literal, vec![carrier("{a,1}", vec![1, 3])], yes_yes),
        CatalogId::Kleene3 => entry(
            chain_with_neg("kleene3", 3)?.with_labels(["0", "a", "1"])?,
            literal,
            vec![carrier("{a,1}", vec![1, 2]), carrier("{1}", vec![2])],
            Some(Expected { e: false, s: true }),
        ),
        CatalogId::HeytingChain(n) => entry(
            heyting_chain(n)?,
            literal,
            vec![carrier("{1}", vec![n - 1])],
            Some(Expected { e: true, s: n == 2 }),
        ),
        CatalogId::PseudoB(n) => entry(pseudo_b(n)?, literal, vec![], Some(Expected { e: true, s: n <= 1 })),
        CatalogId::MvChain(k) => {
            let expected = if k == 1 {
                Expected { e: true, s: true }
            } else {
                Expected {
                    e: false,
                    s: is_prime_power(k),
                }
            };
            entry(mv_chain(k)?, mv_spec(), vec![], Some(expected))
        }
        CatalogId::MoisilL(n) | CatalogId::MoisilM(n) => {
            let algebra = if matches!(id, CatalogId::MoisilL(_)) {
                moisil_l(n)?
            } else {
                moisil_m(n)?
            };
            let mut e = entry(algebra, literal, vec![], (n >= 3).then_some(Expected { e: false, s: true }));
            if n == 2 {
                e.note = Some(MOISIL_TWO_NOTE);
            }
            e
        }
        CatalogId::PreMoisilL0(n) => entry(
            pre_moisil_l0(n)?,
            literal,
            vec![carrier("{(x,y) | x = 1}", (n..2 * n).collect())],
            yes_yes,
        ),
        CatalogId::PreMoisilM0(n) => entry(
            pre_moisil_m0(n)?,
            literal,
            vec![carrier(
                "{(x,y) | x ∈ {a,1}}",
                (n..2 * n).chain(3 * n..4 * n).collect(),
            )],
            yes_yes,
        ),
    })
}

/// Convenience: parse and build.
pub fn make_str(id: &str) -> Result<CatalogEntry> {
    make(id.parse()?)
}

fn is_prime_power(k: usize) -> bool {
    if k < 2 {
        return false;
    }
    let p = (2..=k).find(|p| k.is_multiple_of(*p)).unwrap();
    let mut m = k;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

/// The De Morgan signature `meet, join, neg, bot, top` on a chain 0 < … < n-1 with ¬x = n-1-x.
fn chain_with_neg(name: &str, n: usize) -> Result<FiniteAlgebra> {
    let s = sig(named(&[("meet", 2), ("join", 2), ("neg", 1), ("bot", 0), ("top", 0)]));
    FiniteAlgebra::from_fn(name, s, n, |op, a| match op {
        0 => lattice_ops(a[0], a[1], "meet"),
        1 => lattice_ops(a[0], a[1], "join"),
        2 => n - 1 - a[0],
        3 => 0,
        _ => n - 1,
    })
}

/// 0, a, b, 1 as 0..3 with a, b incomparable and fixed by ¬.
fn demorgan4() -> Result<FiniteAlgebra> {
    let s = sig(named(&[("meet", 2), ("join", 2), ("neg", 1), ("bot", 0), ("top", 0)]));
    // bit encoding: 0 = 00, a = 01, b = 10, 1 = 11
    FiniteAlgebra::from_fn("demorgan4", s, 4, |op, x| match op {
        0 => x[0] & x[1],
        1 => x[0] | x[1],
        2 => [3, 1, 2, 0][x[0]],
        3 => 0,
        _ => 3,
    })?
    .with_labels(["0", "a", "b", "1"])
}

fn heyting_chain(n: usize) -> Result<FiniteAlgebra> {
    let s = sig(named(&[("meet", 2), ("join", 2), ("imp", 2), ("bot", 0), ("top", 0)]));
    let a = FiniteAlgebra::from_fn(format!("heyting_chain({n})"), s, n, |op, x| match op {
        0 => x[0].min(x[1]),
        1 => x[0].max(x[1]),
        2 => {
            if x[0] <= x[1] {
                n - 1
            } else {
                x[1]
            }
        }
        3 => 0,
        _ => n - 1,
    })?;
    let labels: Vec<String> = (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            _ if i == n - 1 => "1".to_string(),
            _ if n == 3 => "d".to_string(),
            _ => format!("d{i}"),
        })
        .collect();
    a.with_labels(labels)
}

/// Boolean lattice on `n` atoms (elements are bit masks) with a new top `2^n`.
fn pseudo_b(n: usize) -> Result<FiniteAlgebra> {
    let s = sig(named(&[("meet", 2), ("join", 2), ("star", 1), ("bot", 0), ("top", 0)]));
    let full = (1usize << n) - 1;
    let top = 1usize << n;
    let a = FiniteAlgebra::from_fn(format!("pseudo_b({n})"), s, top + 1, |op, x| match op {
        0 => {
            if x[0] == top {
                x[1]
            } else if x[1] == top {
                x[0]
            } else {
                x[0] & x[1]
            }
        }
        1 => {
            if x[0] == top || x[1] == top {
                top
            } else {
                x[0] | x[1]
            }
        }
        2 => {
            if x[0] == 0 {
                top
            } else if x[0] == top {
                0
            } else {
                full & !x[0]
            }
        }
        3 => 0,
        _ => top,
    })?;
    let labels: Vec<String> = (0..=top)
        .map(|m| {
            if m == 0 {
                "0".to_string()
            } else if m == top {
                "1".to_string()
            } else {
                (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(atom_name)
                    .collect::<String>()
            }
        })
        .collect();
    a.with_labels(labels)
}

fn atom_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("a{i}")
    }
}

fn mv_chain(k: usize) -> Result<FiniteAlgebra> {
    let s = sig(named(&[("plus", 2), ("neg", 1), ("zero", 0)]));
    let a = FiniteAlgebra::from_fn(format!("mv_chain({k})"), s, k + 1, |op, x| match op {
        0 => (x[0] + x[1]).min(k),
        1 => k - x[0],
        _ => 0,
    })?;
    let labels: Vec<String> = (0..=k)
        .map(|j| match j {
            0 => "0".to_string(),
            _ if j == k => "1".to_string(),
            _ => {
                let g = gcd(j, k);
                format!("{}/{}", j / g, k / g)
            }
        })
        .collect();
    a.with_labels(labels)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Lattice terms of an MV-chain: x∨y = ¬(¬x⊕y)⊕y, x∧y = ¬(¬(x⊕¬y)⊕¬y),
/// bounds 0 and ¬0.
pub fn mv_spec() -> DReductSpec {
    DReductSpec::parse(
        "(neg (plus (neg (plus x0 (neg x1))) (neg x1)))",
        "(plus (neg (plus (neg x0) x1)) x1)",
        "zero",
        "(neg zero)",
    )
    .expect("well-formed MV terms")
}

/// The term ¬(x⊕¬y)⊕¬y taken verbatim as a meet candidate. On MV-chains it
/// evaluates to ¬x∨¬y, so it does not define the meet.
pub fn mv_literal_meet_term() -> Term {
    Term::parse("(plus (neg (plus x0 (neg x1))) (neg x1))").expect("well-formed")
}

fn threshold(n: usize, i: usize, j: usize) -> bool {
    j >= n - i
}

fn moisil_l(n: usize) -> Result<FiniteAlgebra> {
    let mut names = named(&[("meet", 2), ("join", 2), ("bot", 0), ("top", 0)]);
    names.extend((1..n).map(|i| (format!("d{i}"), 1)));
    names.extend((1..n).map(|i| (format!("dbar{i}"), 1)));
    FiniteAlgebra::from_fn(format!("moisil_L({n})"), sig(names), n, |op, x| match op {
        0 => x[0].min(x[1]),
        1 => x[0].max(x[1]),
        2 => 0,
        3 => n - 1,
        _ => {
            let k = op - 4;
            let (i, bar) = if k < n - 1 { (k + 1, false) } else { (k - (n - 1) + 1, true) };
            if threshold(n, i, x[0]) != bar {
                n - 1
            } else {
                0
            }
        }
    })
}

fn moisil_m(n: usize) -> Result<FiniteAlgebra> {
    let mut names = named(&[("meet", 2), ("join", 2), ("neg", 1), ("bot", 0), ("top", 0)]);
    names.extend((1..n).map(|i| (format!("d{i}"), 1)));
    FiniteAlgebra::from_fn(format!("moisil_M({n})"), sig(names), n, |op, x| match op {
        0 => x[0].min(x[1]),
        1 => x[0].max(x[1]),
        2 => n - 1 - x[0],
        3 => 0,
        4 => n - 1,
        _ => {
            if threshold(n, op - 4, x[0]) {
                n - 1
            } else {
                0
            }
        }
    })
}

/// {0,1} × {0,…,n-1}, element (j,k) encoded as j·n + k.
fn pre_moisil_l0(n: usize) -> Result<FiniteAlgebra> {
    let mut names = named(&[("meet", 2), ("join", 2), ("bot", 0), ("top", 0)]);
    names.extend((1..n).map(|i| (format!("e{i}"), 1)));
    names.extend((1..n).map(|i| (format!("ebar{i}"), 1)));
    let top = 2 * n - 1;
    let a = FiniteAlgebra::from_fn(format!("pre_moisil_L0({n})"), sig(names), 2 * n, |op, x| {
        let pair = |e: Elem| (e / n, e % n);
        match op {
            0 | 1 => {
                let ((j1, k1), (j2, k2)) = (pair(x[0]), pair(x[1]));
                if op == 0 {
                    j1.min(j2) * n + k1.min(k2)
                } else {
                    j1.max(j2) * n + k1.max(k2)
                }
            }
            2 => 0,
            3 => top,
            _ => {
                let k = op - 4;
                let (i, bar) = if k < n - 1 { (k + 1, false) } else { (k - (n - 1) + 1, true) };
                if threshold(n, i, pair(x[0]).1) != bar {
                    top
                } else {
                    0
                }
            }
        }
    })?;
    a.with_labels((0..2 * n).map(|e| format!("({},{})", e / n, e % n)))
}

/// {0,a,b,1} × {0,…,n-1}, element (j,k) encoded as j·n + k with j in the
/// De Morgan bit encoding.
fn pre_moisil_m0(n: usize) -> Result<FiniteAlgebra> {
    let mut names = named(&[("meet", 2), ("join", 2), ("neg", 1), ("bot", 0), ("top", 0)]);
    names.extend((1..n).map(|i| (format!("f{i}"), 1)));
    let top = 4 * n - 1;
    let dm_neg = [3, 1, 2, 0];
    let a = FiniteAlgebra::from_fn(format!("pre_moisil_M0({n})"), sig(names), 4 * n, |op, x| {
        let pair = |e: Elem| (e / n, e % n);
        match op {
            0 | 1 => {
                let ((j1, k1), (j2, k2)) = (pair(x[0]), pair(x[1]));
                if op == 0 {
                    (j1 & j2) * n + k1.min(k2)
                } else {
                    (j1 | j2) * n + k1.max(k2)
                }
            }
            2 => {
                let (j, k) = pair(x[0]);
                dm_neg[j] * n + (n - 1 - k)
            }
            3 => 0,
            4 => top,
            _ => {
                if threshold(n, op - 4, pair(x[0]).1) {
                    top
                } else {
                    0
                }
            }
        }
    })?;
    let dm = ["0", "a", "b", "1"];
    a.with_labels((0..4 * n).map(|e| format!("({},{})", dm[e / n], e % n)))
}

/// The catalog instances that carry an expected verdict. Q-lattices and
/// Heyting varieties that are not singly generated are absent: their
/// generators are not constructed here, so their verdicts stay unverified.
pub fn table1_suite() -> Vec<(CatalogEntry, Expected)> {
    use CatalogId::*;
    let ids = [
        DeMorgan4,
        Kleene3,
        PseudoB(0),
        PseudoB(1),
        PseudoB(2),
        PseudoB(3),
        HeytingChain(3),
        HeytingChain(4),
        MvChain(1),
        MvChain(2),
        MvChain(3),
        MvChain(4),
        MvChain(6),
        MoisilL(3),
        MoisilM(3),
        PreMoisilL0(2),
        PreMoisilL0(3),
        PreMoisilM0(2),
    ];
    ids.iter()
        .map(|&id| {
            let e = make(id).expect("suite ids are valid");
            let exp = e.expected.expect("suite entries carry expectations");
            (e, exp)
        })
        .collect()
}

/// Every catalog instance whose universe has at most `max_size` elements.
pub fn instances_up_to(max_size: usize) -> Vec<CatalogId> {
    use CatalogId::*;
    let mut out = vec![];
    if max_size >= 2 {
        out.push(Bool2);
    }
    if max_size >= 4 {
        out.push(DeMorgan4);
    }
    if max_size >= 3 {
        out.push(Kleene3);
    }
    out.extend((2..=max_size.min(MAX_PARAM)).map(HeytingChain));
    out.extend((0..=10).filter(|&n| (1usize << n) < max_size).map(PseudoB));
    out.extend((1..max_size.min(MAX_PARAM + 1)).map(MvChain));
    out.extend((2..=max_size.min(MAX_PARAM)).map(MoisilL));
    out.extend((2..=max_size.min(MAX_PARAM)).map(MoisilM));
    out.extend((2..=(max_size / 2).min(MAX_PARAM)).map(PreMoisilL0));
    out.extend((2..=(max_size / 4).min(MAX_PARAM)).map(PreMoisilM0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;

    #[test]
    fn id_syntax() {
        assert_eq!("heyting_chain:3".parse::<CatalogId>().unwrap(), CatalogId::HeytingChain(3));
        assert_eq!("mv_chain(6)".parse::<CatalogId>().unwrap(), CatalogId::MvChain(6));
        assert_eq!("kleene3".parse::<CatalogId>().unwrap(), CatalogId::Kleene3);
        assert!("kleene3:2".parse::<CatalogId>().is_err());
        assert!("heyting_chain".parse::<CatalogId>().is_err());
        assert!("heyting_chain:1".parse::<CatalogId>().is_err());
        assert!("nope".parse::<CatalogId>().is_err());
        assert_eq!(CatalogId::PreMoisilL0(2).to_string(), "pre_moisil_L0(2)");
    }

    #[test]
    fn sizes() {
        let size = |s: &str| make_str(s).unwrap().algebra.size();
        assert_eq!(size("pseudo_b:3"), 9);
        assert_eq!(size("mv_chain:4"), 5);
        assert_eq!(size("pre_moisil_M0:2"), 8);
        assert_eq!(size("pre_moisil_L0:3"), 6);
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<usize> = (1..=12).filter(|&k| is_prime_power(k)).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11]);
    }
}
