//! Bounded distributive lattice reducts and finite Priestley duality.

use serde::Serialize;

use crate::algebra::{Algebra, CompiledTerm, Elem, FiniteAlgebra, Signature, Term};
use crate::bitset::ElemSet;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// Terms defining ∧, ∨, 0, 1 in an algebra's language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DReductSpec {
    pub meet: Term,
    pub join: Term,
    pub bot: Term,
    pub top: Term,
}

impl DReductSpec {
    /// The basic symbols `meet`, `join`, `bot`, `top`.
    pub fn literal() -> Self {
        DReductSpec {
            meet: Term::basic("meet", 2),
            join: Term::basic("join", 2),
            bot: Term::constant("bot"),
            top: Term::constant("top"),
        }
    }

    /// Parses four prefix-form terms.
    pub fn parse(meet: &str, join: &str, bot: &str, top: &str) -> Result<Self> {
        let p = |s: &str| {
            Term::parse(s).map_err(|e| Error::InvalidParameter(format!("term `{s}`: {} at {}", e.message, e.offset)))
        };
        Ok(DReductSpec {
            meet: p(meet)?,
            join: p(join)?,
            bot: p(bot)?,
            top: p(top)?,
        })
    }

    /// Names of symbols used verbatim as a lattice operation or bound.
    pub fn lattice_symbols(&self) -> Vec<&str> {
        [&self.meet, &self.join, &self.bot, &self.top]
            .into_iter()
            .filter_map(Term::as_basic)
            .collect()
    }
}

/// A validated bounded distributive lattice, stored as meet/join tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistLatticeReduct {
    name: String,
    size: usize,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    bot: Elem,
    top: Elem,
    up: Vec<ElemSet>,
    labels: Vec<String>,
}

fn violation(algebra: &str, identity: &'static str, witness: Vec<Elem>) -> Error {
    Error::AxiomViolation {
        algebra: algebra.to_string(),
        identity,
        witness,
    }
}

impl DistLatticeReduct {
    /// Validates tables against the bounded distributive lattice axioms.
    pub fn from_tables(
        name: impl Into<String>,
        size: usize,
        meet: Vec<Elem>,
        join: Vec<Elem>,
        bot: Elem,
        top: Elem,
        labels: Vec<String>,
    ) -> Result<Self> {
        let name = name.into();
        let n = size;
        if n == 0 || meet.len() != n * n || join.len() != n * n || labels.len() != n || bot >= n || top >= n {
            return Err(Error::InvalidAlgebra {
                name,
                reason: "malformed lattice tables".into(),
            });
        }
        if meet.iter().chain(&join).any(|&v| v >= n) {
            return Err(Error::InvalidAlgebra {
                name,
                reason: "lattice table entry out of range".into(),
            });
        }
        let m = |x: usize, y: usize| meet[x * n + y];
        let j = |x: usize, y: usize| join[x * n + y];
        for x in 0..n {
            for y in 0..n {
                if m(x, y) != m(y, x) {
                    return Err(violation(&name, "meet commutativity", vec![x, y]));
                }
                if j(x, y) != j(y, x) {
                    return Err(violation(&name, "join commutativity", vec![x, y]));
                }
                if m(x, j(x, y)) != x {
                    return Err(violation(&name, "absorption x∧(x∨y)=x", vec![x, y]));
                }
                if j(x, m(x, y)) != x {
                    return Err(violation(&name, "absorption x∨(x∧y)=x", vec![x, y]));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if m(m(x, y), z) != m(x, m(y, z)) {
                        return Err(violation(&name, "meet associativity", vec![x, y, z]));
                    }
                    if j(j(x, y), z) != j(x, j(y, z)) {
                        return Err(violation(&name, "join associativity", vec![x, y, z]));
                    }
                    if m(x, j(y, z)) != j(m(x, y), m(x, z)) {
                        return Err(violation(&name, "distributivity x∧(y∨z)=(x∧y)∨(x∧z)", vec![x, y, z]));
                    }
                }
            }
        }
        for x in 0..n {
            if m(x, bot) != bot {
                return Err(violation(&name, "bottom x∧0=0", vec![x]));
            }
            if j(x, top) != top {
                return Err(violation(&name, "top x∨1=1", vec![x]));
            }
        }
        let up = (0..n)
            .map(|x| ElemSet::from_elems(n, (0..n).filter(|&y| m(x, y) == x)))
            .collect();
        Ok(DistLatticeReduct {
            name,
            size,
            meet,
            join,
            bot,
            top,
            up,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x * self.size + y]
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.size + y]
    }

    pub fn bot(&self) -> Elem {
        self.bot
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.up[x].contains(y)
    }

    /// Principal filter of `x`.
    pub fn up(&self, x: Elem) -> &ElemSet {
        &self.up[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn order(&self) -> FinitePoset {
        FinitePoset::from_fn(self.labels.clone(), |x, y| self.leq(x, y)).expect("lattice order")
    }

    /// Nonzero elements that are not the join of two strictly smaller elements.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        (0..self.size)
            .filter(|&x| {
                if x == self.bot {
                    return false;
                }
                let below = (0..self.size)
                    .filter(|&y| y != x && self.leq(y, x))
                    .fold(self.bot, |acc, y| self.join(acc, y));
                below != x
            })
            .collect()
    }

    /// Whether `f` preserves ∧, ∨ and both bounds into `other`.
    pub fn is_bounded_hom(&self, other: &DistLatticeReduct, f: &[Elem]) -> bool {
        f.len() == self.size
            && f.iter().all(|&v| v < other.size)
            && f[self.bot] == other.bot
            && f[self.top] == other.top
            && self.preserves(other, f, false)
    }

    /// Whether `f` preserves ∧ and ∨ (or swaps them when `dual`).
    pub fn preserves(&self, other: &DistLatticeReduct, f: &[Elem], dual: bool) -> bool {
        (0..self.size).all(|x| {
            (0..self.size).all(|y| {
                let (m, j) = (f[self.meet(x, y)], f[self.join(x, y)]);
                let (fm, fj) = (other.meet(f[x], f[y]), other.join(f[x], f[y]));
                if dual {
                    m == fj && j == fm
                } else {
                    m == fm && j == fj
                }
            })
        })
    }

    /// The lattice as an algebra in the signature `meet, join, bot, top`.
    pub fn to_algebra(&self) -> FiniteAlgebra {
        let sig = lattice_signature();
        FiniteAlgebra::from_fn(self.name.clone(), sig, self.size, |op, a| match op {
            0 => self.meet(a[0], a[1]),
            1 => self.join(a[0], a[1]),
            2 => self.bot,
            _ => self.top,
        })
        .and_then(|a| a.with_labels(self.labels.clone()))
        .expect("lattice tables are valid")
    }
}

pub fn lattice_signature() -> Signature {
    Signature::new([("meet", 2), ("join", 2), ("bot", 0), ("top", 0)]).expect("lattice signature")
}

fn compile(a: &FiniteAlgebra, t: &Term, max_vars: usize, role: &str) -> Result<CompiledTerm> {
    let c = t.compile(a.signature())?;
    if c.var_count() > max_vars {
        return Err(Error::InvalidParameter(format!(
            "{role} term `{t}` uses {} variables, at most {max_vars} allowed",
            c.var_count()
        )));
    }
    Ok(c)
}

/// Extracts and validates the bounded distributive lattice reduct.
pub fn d_reduct(a: &FiniteAlgebra, spec: &DReductSpec) -> Result<DistLatticeReduct> {
    let meet_t = compile(a, &spec.meet, 2, "meet")?;
    let join_t = compile(a, &spec.join, 2, "join")?;
    let bot_t = compile(a, &spec.bot, 0, "bot")?;
    let top_t = compile(a, &spec.top, 0, "top")?;
    let n = a.size();
    let mut meet = Vec::with_capacity(n * n);
    let mut join = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            meet.push(meet_t.eval(a, &[x, y]));
            join.push(join_t.eval(a, &[x, y]));
        }
    }
    let labels = (0..n).map(|e| a.label(e)).collect();
    DistLatticeReduct::from_tables(
        a.name(),
        n,
        meet,
        join,
        bot_t.eval(a, &[]),
        top_t.eval(a, &[]),
        labels,
    )
}

/// A prime filter, identified by the join-irreducible generating it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeFilter {
    pub generator: Elem,
    #[serde(serialize_with = "serialize_set")]
    pub members: ElemSet,
}

impl PrimeFilter {
    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x)
    }
}

pub(crate) fn serialize_set<S: serde::Serializer>(s: &ElemSet, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(s.iter())
}

/// All prime filters, one per join-irreducible, ordered by generator.
pub fn prime_filters(l: &DistLatticeReduct) -> Vec<PrimeFilter> {
    l.join_irreducibles()
        .into_iter()
        .map(|j| PrimeFilter {
            generator: j,
            members: l.up(j).clone(),
        })
        .collect()
}

/// Prime filters ordered by inclusion, labelled by their generators.
pub fn priestley_dual(l: &DistLatticeReduct) -> FinitePoset {
    let pf = prime_filters(l);
    let labels = pf.iter().map(|f| format!("↑{}", l.labels()[f.generator])).collect();
    FinitePoset::from_fn(labels, |x, y| pf[x].members.is_subset(&pf[y].members)).expect("inclusion order")
}

/// H(f) for a bounded lattice homomorphism `f: l1 → l2`: sends the `i`-th prime
/// filter of `l2` to the index of its preimage among the prime filters of `l1`.
pub fn dual_of_hom(l1: &DistLatticeReduct, l2: &DistLatticeReduct, f: &[Elem]) -> Result<Vec<usize>> {
    if !l1.is_bounded_hom(l2, f) {
        return Err(Error::NotHomomorphism(format!(
            "{:?} is not a bounded lattice homomorphism `{}` → `{}`",
            f,
            l1.name(),
            l2.name()
        )));
    }
    let pf1 = prime_filters(l1);
    Ok(prime_filters(l2)
        .iter()
        .map(|g| {
            let pre = ElemSet::from_elems(l1.size(), (0..l1.size()).filter(|&x| g.contains(f[x])));
            pf1.iter()
                .position(|p| p.members == pre)
                .expect("preimage of a prime filter is prime")
        })
        .collect())
}

/// Index of the prime filter equal to `members`, if any.
pub fn filter_index(filters: &[PrimeFilter], members: &ElemSet) -> Option<usize> {
    filters.iter().position(|f| f.members == *members)
}

/// The lattice of up-sets of `p` under ∩ and ∪, together with the up-sets
/// (ordered by size, then lexicographically).
pub fn upset_lattice(p: &FinitePoset, caps: &Caps) -> Result<(DistLatticeReduct, Vec<ElemSet>)> {
    let ups = p.upsets(caps)?;
    let k = ups.len();
    let index: std::collections::HashMap<&ElemSet, usize> = ups.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let mut meet = Vec::with_capacity(k * k);
    let mut join = Vec::with_capacity(k * k);
    for a in &ups {
        for b in &ups {
            let mut m = a.clone();
            m.intersect_with(b);
            let mut j = a.clone();
            j.union_with(b);
            meet.push(index[&m]);
            join.push(index[&j]);
        }
    }
    let labels = ups
        .iter()
        .map(|u| {
            let mins: Vec<&str> = u
                .iter()
                .filter(|&x| u.iter().all(|y| y == x || !p.leq(y, x)))
                .map(|x| p.labels()[x].as_str())
                .collect();
            if mins.is_empty() {
                "∅".to_string()
            } else {
                mins.join("|")
            }
        })
        .collect();
    let l = DistLatticeReduct::from_tables("K(P)", k, meet, join, 0, k - 1, labels)?;
    Ok((l, ups))
}

/// Coproduct in bounded distributive lattices: up-sets of the product of the duals.
pub fn lattice_coproduct(ls: &[&DistLatticeReduct], caps: &Caps) -> Result<DistLatticeReduct> {
    let duals: Vec<FinitePoset> = ls.iter().map(|l| priestley_dual(l)).collect();
    let refs: Vec<&FinitePoset> = duals.iter().collect();
    Ok(upset_lattice(&FinitePoset::product_all(&refs), caps)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> DistLatticeReduct {
        let mut meet = Vec::new();
        let mut join = Vec::new();
        for x in 0..n {
            for y in 0..n {
                meet.push(x.min(y));
                join.push(x.max(y));
            }
        }
        DistLatticeReduct::from_tables("c", n, meet, join, 0, n - 1, (0..n).map(|i| i.to_string()).collect())
            .unwrap()
    }

    #[test]
    fn chain_prime_filters() {
        let c = chain(4);
        let pf = prime_filters(&c);
        assert_eq!(pf.len(), 3);
        assert_eq!(pf[0].members.to_vec(), vec![1, 2, 3]);
        let d = priestley_dual(&c);
        assert!(d.leq(2, 0) && !d.leq(0, 2));
    }

    #[test]
    fn one_element_lattice_has_no_prime_filters() {
        assert!(prime_filters(&chain(1)).is_empty());
    }

    #[test]
    fn nonlattice_tables_rejected() {
        // meet = join = first projection
        let proj = vec![0, 0, 1, 1];
        let err = DistLatticeReduct::from_tables("p", 2, proj.clone(), proj, 0, 1, vec!["0".into(), "1".into()])
            .unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { identity: "meet commutativity", .. }));
    }

    #[test]
    fn chain_upsets_give_longer_chain() {
        let (l, ups) = upset_lattice(&FinitePoset::chain(2), &Caps::default()).unwrap();
        assert_eq!(l.size(), 3);
        assert_eq!(ups[0].count(), 0);
        assert!(crate::poset::poset_isomorphic(&l.order(), &FinitePoset::chain(3)).is_some());
    }
}
