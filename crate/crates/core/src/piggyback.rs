//! Carrier maps, the separation condition, maximal algebraic relations and
//! alter egos for piggyback dualities.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::{Algebra, Elem, FiniteAlgebra};
use crate::bitset::ElemSet;
use crate::caps::Caps;
use crate::distlat::{d_reduct, prime_filters, DReductSpec, DistLatticeReduct, PrimeFilter};
use crate::error::{Error, Result};
use crate::hom::{hom_enumerate, Homomorphism};
use crate::product::direct_product;

/// A generating algebra with its lattice reduct and prime filters.
#[derive(Clone, Debug)]
pub struct Generator {
    pub algebra: FiniteAlgebra,
    pub lattice: DistLatticeReduct,
    pub filters: Vec<PrimeFilter>,
}

/// The generators 𝕄 with all homomorphisms between them.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub spec: DReductSpec,
    generators: Vec<Generator>,
    homs: Vec<Vec<Vec<Homomorphism>>>,
}

impl GeneratorSet {
    pub fn new(algebras: Vec<FiniteAlgebra>, spec: &DReductSpec) -> Result<Self> {
        if algebras.is_empty() {
            return Err(Error::EmptyInput("generator set"));
        }
        let mut generators = Vec::with_capacity(algebras.len());
        for a in algebras {
            let lattice = d_reduct(&a, spec)?;
            let filters = prime_filters(&lattice);
            generators.push(Generator {
                algebra: a,
                lattice,
                filters,
            });
        }
        let mut homs = Vec::with_capacity(generators.len());
        for g in &generators {
            let mut row = Vec::with_capacity(generators.len());
            for h in &generators {
                row.push(hom_enumerate(&g.algebra, &h.algebra)?);
            }
            homs.push(row);
        }
        Ok(GeneratorSet {
            spec: spec.clone(),
            generators,
            homs,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn get(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn algebra(&self, i: usize) -> &FiniteAlgebra {
        &self.generators[i].algebra
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn algebras(&self) -> Vec<FiniteAlgebra> {
        self.generators.iter().map(|g| g.algebra.clone()).collect()
    }

    /// Homomorphisms from sort `i` to sort `j`, sorted.
    pub fn homs(&self, i: usize, j: usize) -> &[Homomorphism] {
        &self.homs[i][j]
    }

    /// Carrier with the given prime filter index on `sort`.
    pub fn carrier(&self, sort: usize, index: usize) -> CarrierMap {
        CarrierMap {
            sort,
            index,
            filter: self.generators[sort].filters[index].clone(),
        }
    }

    /// The carrier on `sort` whose filter is exactly `members`.
    pub fn carrier_with_members(&self, sort: usize, members: &[Elem]) -> Option<CarrierMap> {
        let set = ElemSet::from_elems(self.algebra(sort).size(), members.iter().copied());
        let idx = self.generators[sort].filters.iter().position(|f| f.members == set)?;
        Some(self.carrier(sort, idx))
    }

    /// Human-readable name of a carrier, e.g. `↑a@demorgan4`.
    pub fn carrier_label(&self, c: &CarrierMap) -> String {
        let a = self.algebra(c.sort);
        format!("↑{}@{}", a.label(c.filter.generator), a.name())
    }

    pub fn carrier_members_labels(&self, c: &CarrierMap) -> Vec<String> {
        let a = self.algebra(c.sort);
        c.filter.members.iter().map(|e| a.label(e)).collect()
    }
}

/// A bounded lattice homomorphism ω: U(M) → 2, stored as its prime filter.
/// Carriers are ordered by sort and then by the filter's generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CarrierMap {
    pub sort: usize,
    /// Position of the filter in the sort's canonical prime-filter list.
    pub index: usize,
    pub filter: PrimeFilter,
}

impl CarrierMap {
    #[inline]
    pub fn eval(&self, x: Elem) -> bool {
        self.filter.contains(x)
    }
}

impl PartialOrd for CarrierMap {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CarrierMap {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.sort, self.index).cmp(&(other.sort, other.index))
    }
}

/// Every carrier of every sort, in canonical order.
pub fn all_carriers(gens: &GeneratorSet) -> Vec<CarrierMap> {
    (0..gens.len())
        .flat_map(|s| (0..gens.get(s).filters.len()).map(move |i| (s, i)))
        .map(|(s, i)| gens.carrier(s, i))
        .collect()
}

/// Outcome of checking (Sep), with the first unseparated pair on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SepResult {
    pub holds: bool,
    pub unseparated: Option<(usize, Elem, Elem)>,
}

/// For every `a ≠ b` in every sort M some `ω ∘ u` with `u: M → M'` and
/// `ω ∈ Ω` on M' separates them.
pub fn sep_condition(gens: &GeneratorSet, omega: &[CarrierMap]) -> SepResult {
    for s in 0..gens.len() {
        let n = gens.algebra(s).size();
        let mut tests: Vec<ElemSet> = Vec::new();
        for w in omega {
            for u in gens.homs(s, w.sort) {
                tests.push(ElemSet::from_elems(n, (0..n).filter(|&x| w.eval(u.apply(x)))));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if !tests.iter().any(|t| t.contains(a) != t.contains(b)) {
                    return SepResult {
                        holds: false,
                        unseparated: Some((s, a, b)),
                    };
                }
            }
        }
    }
    SepResult {
        holds: true,
        unseparated: None,
    }
}

/// A minimum-size Ω satisfying (Sep), together with every valid Ω of that size.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaChoice {
    pub omega: Vec<CarrierMap>,
    /// All valid carrier sets of the minimum size, in lexicographic order
    /// (the chosen one is the first).
    pub alternatives: Vec<Vec<CarrierMap>>,
}

/// Searches carrier sets by increasing size, lexicographically within a size.
pub fn minimal_omega(gens: &GeneratorSet) -> Result<OmegaChoice> {
    let all = all_carriers(gens);
    let full = sep_condition(gens, &all);
    if let Some((sort, a, b)) = full.unseparated {
        return Err(Error::SeparationFailure { sort, a, b });
    }
    for k in 1..=all.len() {
        let mut found = Vec::new();
        for_each_combination(all.len(), k, |idx| {
            let omega: Vec<CarrierMap> = idx.iter().map(|&i| all[i].clone()).collect();
            if sep_condition(gens, &omega).holds {
                found.push(omega);
            }
        });
        if let Some(first) = found.first() {
            return Ok(OmegaChoice {
                omega: first.clone(),
                alternatives: found,
            });
        }
    }
    // only reachable when there are no carriers at all, i.e. every sort is trivial
    Ok(OmegaChoice {
        omega: Vec::new(),
        alternatives: vec![Vec::new()],
    })
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// (ω1, ω2)⁻¹(≤) as a subset of M1 × M2, pair `(a, b)` coded as `a·|M2| + b`.
pub fn leq_sublattice(gens: &GeneratorSet, w1: &CarrierMap, w2: &CarrierMap) -> ElemSet {
    let n1 = gens.algebra(w1.sort).size();
    let n2 = gens.algebra(w2.sort).size();
    ElemSet::from_elems(
        n1 * n2,
        (0..n1 * n2).filter(|&e| !w1.eval(e / n2) || w2.eval(e % n2)),
    )
}

/// All maximal subuniverses of `p` contained in `l`, by branch and bound:
/// a closed candidate is emitted; otherwise the lexicographically least
/// operation instance leaving the candidate is found and each of its distinct
/// inputs is deleted in turn. Results are sorted by size (descending) and then
/// lexicographically.
pub fn maximal_subuniverses_in<A: Algebra + ?Sized>(p: &A, l: &ElemSet) -> Vec<ElemSet> {
    let n = p.size();
    let arities: Vec<usize> = p.signature().symbols().iter().map(|s| s.arity).collect();
    let constants: Vec<Elem> = arities
        .iter()
        .enumerate()
        .filter(|(_, &m)| m == 0)
        .map(|(op, _)| p.apply(op, &[]))
        .collect();
    let mut start = ElemSet::empty(n);
    for e in l.iter().filter(|&e| e < n) {
        start.insert(e);
    }
    let mut visited: HashSet<ElemSet> = HashSet::new();
    let mut found: Vec<ElemSet> = Vec::new();
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        if s.is_empty() || !visited.insert(s.clone()) {
            continue;
        }
        if constants.iter().any(|&c| !s.contains(c)) {
            continue;
        }
        if found.iter().any(|f| s.is_subset(f)) {
            continue;
        }
        match least_violation(p, &arities, &s) {
            None => found.push(s),
            Some(inputs) => {
                let mut distinct = inputs;
                distinct.sort_unstable();
                distinct.dedup();
                for &x in distinct.iter().rev() {
                    let mut t = s.clone();
                    t.remove(x);
                    stack.push(t);
                }
            }
        }
    }
    let mut out: Vec<ElemSet> = found
        .iter()
        .filter(|s| !found.iter().any(|t| t != *s && s.is_subset(t)))
        .cloned()
        .collect();
    out.sort_by(|a, b| b.count().cmp(&a.count()).then_with(|| a.to_vec().cmp(&b.to_vec())));
    out.dedup();
    out
}

/// The lexicographically least input tuple (over all non-nullary operations)
/// whose output leaves `s`.
fn least_violation<A: Algebra + ?Sized>(p: &A, arities: &[usize], s: &ElemSet) -> Option<Vec<Elem>> {
    let elems = s.to_vec();
    let mut best: Option<Vec<Elem>> = None;
    let mut args = Vec::new();
    for (op, &m) in arities.iter().enumerate() {
        if m == 0 || elems.is_empty() {
            continue;
        }
        let mut idx = vec![0usize; m];
        'tuples: loop {
            args.clear();
            args.extend(idx.iter().map(|&i| elems[i]));
            if let Some(b) = &best {
                if args.as_slice() >= b.as_slice() {
                    break 'tuples;
                }
            }
            if !s.contains(p.apply(op, &args)) {
                best = Some(args.clone());
                break 'tuples;
            }
            let mut q = m;
            loop {
                if q == 0 {
                    break 'tuples;
                }
                q -= 1;
                idx[q] += 1;
                if idx[q] < elems.len() {
                    continue 'tuples;
                }
                idx[q] = 0;
            }
        }
    }
    best
}

/// A binary algebraic relation between two sorts, labelled by the carrier pair
/// it was computed for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SortedRelation {
    pub source: usize,
    pub target: usize,
    /// Indices into Ω of the carriers (ω1, ω2).
    pub carriers: (usize, usize),
    pub pairs: Vec<(Elem, Elem)>,
}

impl SortedRelation {
    pub fn contains(&self, a: Elem, b: Elem) -> bool {
        self.pairs.binary_search(&(a, b)).is_ok()
    }
}

/// R_{ω1,ω2}: the maximal subuniverses of M1 × M2 inside (ω1, ω2)⁻¹(≤).
pub fn relations_for(
    gens: &GeneratorSet,
    w1: &CarrierMap,
    w2: &CarrierMap,
    labels: (usize, usize),
    caps: &Caps,
) -> Result<Vec<SortedRelation>> {
    let m1 = gens.algebra(w1.sort);
    let m2 = gens.algebra(w2.sort);
    let prod = direct_product(m1.signature(), &[m1, m2], caps)?;
    let l = leq_sublattice(gens, w1, w2);
    let n2 = m2.size();
    Ok(maximal_subuniverses_in(&prod.algebra, &l)
        .into_iter()
        .map(|s| SortedRelation {
            source: w1.sort,
            target: w2.sort,
            carriers: labels,
            pairs: s.iter().map(|e| (e / n2, e % n2)).collect(),
        })
        .collect())
}

/// Number of classes of `rels` under the action of Aut(M1) × Aut(M2),
/// `(σ, τ)·r = {(σa, τb) | (a, b) ∈ r}`.
pub fn relation_orbits(gens: &GeneratorSet, rels: &[SortedRelation]) -> usize {
    let auts = |s: usize| -> Vec<Homomorphism> {
        gens.homs(s, s).iter().filter(|h| h.is_injective()).cloned().collect()
    };
    let mut seen: HashSet<Vec<(Elem, Elem)>> = HashSet::new();
    let mut orbits = 0;
    for r in rels {
        if seen.contains(&r.pairs) {
            continue;
        }
        orbits += 1;
        let (left, right) = (auts(r.source), auts(r.target));
        for g in &left {
            for h in &right {
                let mut img: Vec<(Elem, Elem)> = r.pairs.iter().map(|&(a, b)| (g.apply(a), h.apply(b))).collect();
                img.sort_unstable();
                seen.insert(img);
            }
        }
    }
    orbits
}

/// A homomorphism between two sorts, one of the unary operations of the alter ego.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SortOperation {
    pub source: usize,
    pub target: usize,
    pub map: Homomorphism,
}

/// The multisorted alter ego: sorts 𝕄, relations ⋃ R_{ω1,ω2}, all homs between sorts.
#[derive(Clone, Debug)]
pub struct AlterEgo {
    pub generators: GeneratorSet,
    pub omega: Vec<CarrierMap>,
    pub relations: Vec<SortedRelation>,
    pub operations: Vec<SortOperation>,
}

impl AlterEgo {
    pub fn sorts(&self) -> usize {
        self.generators.len()
    }

    /// Relations computed for the carrier pair `(i, j)` of Ω.
    pub fn relations_between(&self, i: usize, j: usize) -> impl Iterator<Item = &SortedRelation> {
        self.relations.iter().filter(move |r| r.carriers == (i, j))
    }

    /// Carriers of Ω living on `sort`, with their indices in Ω.
    pub fn carriers_on(&self, sort: usize) -> impl Iterator<Item = (usize, &CarrierMap)> {
        self.omega.iter().enumerate().filter(move |(_, w)| w.sort == sort)
    }
}

pub fn build_alter_ego(gens: GeneratorSet, omega: Vec<CarrierMap>, caps: &Caps) -> Result<AlterEgo> {
    let sep = sep_condition(&gens, &omega);
    if let Some((sort, a, b)) = sep.unseparated {
        return Err(Error::SeparationFailure { sort, a, b });
    }
    let mut relations = Vec::new();
    for (i, w1) in omega.iter().enumerate() {
        for (j, w2) in omega.iter().enumerate() {
            relations.extend(relations_for(&gens, w1, w2, (i, j), caps)?);
        }
    }
    let mut operations = Vec::new();
    for s in 0..gens.len() {
        for t in 0..gens.len() {
            for h in gens.homs(s, t) {
                operations.push(SortOperation {
                    source: s,
                    target: t,
                    map: h.clone(),
                });
            }
        }
    }
    Ok(AlterEgo {
        generators: gens,
        omega,
        relations,
        operations,
    })
}

/// Whether every basic operation not used verbatim by the lattice terms is
/// unary and a lattice endomorphism or dual endomorphism of the reduct.
pub fn unique_max_applicable(a: &FiniteAlgebra, spec: &DReductSpec) -> Result<bool> {
    let l = d_reduct(a, spec)?;
    let lattice = spec.lattice_symbols();
    for (op, sym) in a.signature().symbols().iter().enumerate() {
        if lattice.contains(&sym.name.as_str()) {
            continue;
        }
        if sym.arity != 1 {
            return Ok(false);
        }
        let f: Vec<Elem> = (0..a.size()).map(|x| a.apply(op, &[x])).collect();
        if !l.preserves(&l, &f, false) && !l.preserves(&l, &f, true) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for SortedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}
