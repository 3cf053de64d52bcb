//! The hom-functors D and E at finite scale, coproducts computed on the dual
//! side, the reconstruction of the Priestley dual from D(A), and the maps ι and Λ.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::algebra::{for_each_tuple, Algebra, Elem, FiniteAlgebra};
use crate::bitset::ElemSet;
use crate::caps::Caps;
use crate::congruence::{hom_kernels, in_isp, kernel_meet, quotient, Partition, Quotient};
use crate::distlat::{d_reduct, filter_index, priestley_dual, prime_filters};
use crate::error::{Error, Result};
use crate::hom::{hom_enumerate, is_homomorphism, Homomorphism};
use crate::piggyback::AlterEgo;
use crate::poset::{poset_isomorphic, FinitePoset};
use crate::product::check_table_cap;

/// A structure in the signature of an alter ego. Points of sort `s` are
/// coordinate vectors with values in the `s`-th generator; relations and
/// operations are the pointwise lifts of those of the alter ego.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultisortedStructure {
    pub coordinates: usize,
    pub points: Vec<Vec<Vec<Elem>>>,
    /// One entry per relation of the alter ego: related pairs of point indices.
    pub relations: Vec<Vec<(usize, usize)>>,
    /// One entry per operation of the alter ego: image index of each source point.
    pub operations: Vec<Vec<usize>>,
}

impl MultisortedStructure {
    /// Lifts the alter ego's relations and operations to the given points.
    pub fn from_points(ego: &AlterEgo, coordinates: usize, points: Vec<Vec<Vec<Elem>>>) -> Result<Self> {
        if points.len() != ego.sorts() {
            return Err(Error::InvalidParameter(format!(
                "{} point sets for {} sorts",
                points.len(),
                ego.sorts()
            )));
        }
        for (s, ps) in points.iter().enumerate() {
            let n = ego.generators.algebra(s).size();
            if ps.iter().any(|p| p.len() != coordinates || p.iter().any(|&v| v >= n)) {
                return Err(Error::InvalidParameter(format!("malformed point in sort {s}")));
            }
        }
        let mut relations = Vec::with_capacity(ego.relations.len());
        for r in &ego.relations {
            let n2 = ego.generators.algebra(r.target).size();
            let n1 = ego.generators.algebra(r.source).size();
            let set = ElemSet::from_elems(n1 * n2, r.pairs.iter().map(|&(a, b)| a * n2 + b));
            let mut pairs = Vec::new();
            for (i, x) in points[r.source].iter().enumerate() {
                for (j, y) in points[r.target].iter().enumerate() {
                    if x.iter().zip(y).all(|(&a, &b)| set.contains(a * n2 + b)) {
                        pairs.push((i, j));
                    }
                }
            }
            relations.push(pairs);
        }
        let index: Vec<HashMap<&[Elem], usize>> = points
            .iter()
            .map(|ps| ps.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect())
            .collect();
        let mut operations = Vec::with_capacity(ego.operations.len());
        for g in &ego.operations {
            let mut images = Vec::with_capacity(points[g.source].len());
            for p in &points[g.source] {
                let img: Vec<Elem> = p.iter().map(|&v| g.map.apply(v)).collect();
                let &k = index[g.target].get(img.as_slice()).ok_or_else(|| {
                    Error::Consistency(format!(
                        "points of sort {} are not closed under an operation into sort {}",
                        g.source, g.target
                    ))
                })?;
                images.push(k);
            }
            operations.push(images);
        }
        Ok(MultisortedStructure {
            coordinates,
            points,
            relations,
            operations,
        })
    }

    pub fn sorts(&self) -> usize {
        self.points.len()
    }

    pub fn point_count(&self, sort: usize) -> usize {
        self.points[sort].len()
    }

    /// The structure with no points at all.
    pub fn empty(ego: &AlterEgo) -> Self {
        MultisortedStructure {
            coordinates: 0,
            points: vec![Vec::new(); ego.sorts()],
            relations: vec![Vec::new(); ego.relations.len()],
            operations: vec![Vec::new(); ego.operations.len()],
        }
    }
}

/// D(A): the points of sort M are the homomorphisms A → M, in sorted order.
pub fn natural_dual(a: &FiniteAlgebra, ego: &AlterEgo, caps: &Caps) -> Result<MultisortedStructure> {
    let sorts = ego.generators.algebras();
    if !in_isp(a, &sorts)? {
        return Err(Error::NotInQuasivariety(a.name().to_string()));
    }
    let mut points = Vec::with_capacity(sorts.len());
    for m in &sorts {
        let homs = hom_enumerate(a, m)?;
        check_points(homs.len() as u128, caps)?;
        points.push(homs.into_iter().map(|h| h.map).collect());
    }
    MultisortedStructure::from_points(ego, a.size(), points)
}

fn check_points(required: u128, caps: &Caps) -> Result<()> {
    if required > caps.points_per_sort {
        return Err(Error::CapExceeded {
            what: "points per sort",
            required,
            cap: caps.points_per_sort,
        });
    }
    Ok(())
}

/// Cartesian product; a point of the product is the concatenation of one
/// point from each factor, leftmost factor first.
pub fn structure_product(xs: &[MultisortedStructure], ego: &AlterEgo, caps: &Caps) -> Result<MultisortedStructure> {
    let mut points = Vec::with_capacity(ego.sorts());
    for s in 0..ego.sorts() {
        let required = xs
            .iter()
            .try_fold(1u128, |acc, x| acc.checked_mul(x.point_count(s) as u128))
            .unwrap_or(u128::MAX);
        check_points(required, caps)?;
        let mut acc: Vec<Vec<Elem>> = vec![Vec::new()];
        for x in xs {
            let mut next = Vec::with_capacity(acc.len() * x.point_count(s));
            for prefix in &acc {
                for p in &x.points[s] {
                    let mut q = prefix.clone();
                    q.extend_from_slice(p);
                    next.push(q);
                }
            }
            acc = next;
        }
        points.push(acc);
    }
    let coordinates = xs.iter().map(|x| x.coordinates).sum();
    MultisortedStructure::from_points(ego, coordinates, points)
}

/// Binary constraint satisfaction over variables with small finite domains.
struct Csp {
    domains: Vec<ElemSet>,
    /// Per variable: (other variable, table) with `tables[t][a]` the values of
    /// the other variable compatible with value `a` here.
    arcs: Vec<Vec<(usize, usize)>>,
    tables: Vec<Vec<ElemSet>>,
}

impl Csp {
    fn add_table(&mut self, rows: Vec<ElemSet>) -> usize {
        self.tables.push(rows);
        self.tables.len() - 1
    }

    fn constrain(&mut self, u: usize, v: usize, fwd: usize, bwd: usize) {
        if u == v {
            let t = &self.tables[fwd];
            let keep: Vec<usize> = self.domains[u].iter().filter(|&a| t[a].contains(a)).collect();
            self.domains[u] = ElemSet::from_elems(self.domains[u].universe(), keep);
        } else {
            self.arcs[u].push((v, fwd));
            self.arcs[v].push((u, bwd));
        }
    }

    /// Removes values without support; false if a domain empties.
    fn arc_consistency(&mut self) -> bool {
        let n = self.domains.len();
        let mut queued = vec![true; n];
        let mut queue: VecDeque<usize> = (0..n).collect();
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            let mut changed = false;
            for &(v, t) in &self.arcs[u] {
                let unsupported: Vec<usize> = self.domains[u]
                    .iter()
                    .filter(|&a| !self.tables[t][a].intersects(&self.domains[v]))
                    .collect();
                for a in unsupported {
                    self.domains[u].remove(a);
                    changed = true;
                }
            }
            if self.domains[u].is_empty() {
                return false;
            }
            if changed {
                for &(v, _) in &self.arcs[u] {
                    if !queued[v] {
                        queued[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        true
    }

    /// All solutions in lexicographic order, by forward checking.
    fn solve(mut self, caps: &Caps) -> Result<Vec<Vec<Elem>>> {
        let n = self.domains.len();
        if n == 0 {
            return Ok(vec![Vec::new()]);
        }
        if !self.arc_consistency() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut value = vec![0; n];
        let mut trail: Vec<(usize, ElemSet)> = Vec::new();
        let mut cands: Vec<Vec<Elem>> = vec![self.domains[0].to_vec()];
        let mut pos = vec![0usize];
        let mut marks = vec![0usize];
        let mut visits: u64 = 0;
        while let Some(d) = cands.len().checked_sub(1) {
            while trail.len() > marks[d] {
                let (v, dom) = trail.pop().expect("trail entry");
                self.domains[v] = dom;
            }
            if pos[d] == cands[d].len() {
                cands.pop();
                pos.pop();
                marks.pop();
                continue;
            }
            let a = cands[d][pos[d]];
            pos[d] += 1;
            visits += 1;
            if visits > caps.morphism_visits {
                return Err(Error::CapExceeded {
                    what: "morphism search visits",
                    required: visits as u128,
                    cap: caps.morphism_visits as u128,
                });
            }
            value[d] = a;
            let mut ok = true;
            for &(v, t) in &self.arcs[d] {
                if v <= d {
                    continue;
                }
                let row = &self.tables[t][a];
                if self.domains[v].is_subset(row) {
                    continue;
                }
                let mut dom = self.domains[v].clone();
                dom.intersect_with(row);
                let empty = dom.is_empty();
                trail.push((v, std::mem::replace(&mut self.domains[v], dom)));
                if empty {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            if d + 1 == n {
                out.push(value.clone());
                continue;
            }
            cands.push(self.domains[d + 1].to_vec());
            pos.push(0);
            marks.push(trail.len());
        }
        Ok(out)
    }
}

/// E(X): the morphisms X → alter ego, as an algebra with pointwise operations.
/// A morphism is stored as the concatenation over sorts of its point values.
#[derive(Clone, Debug)]
pub struct EAlgebra {
    pub algebra: FiniteAlgebra,
    pub morphisms: Vec<Vec<Elem>>,
    /// First variable of each sort in a morphism vector.
    pub offsets: Vec<usize>,
    index: HashMap<Vec<Elem>, usize>,
}

impl EAlgebra {
    pub fn index_of(&self, morphism: &[Elem]) -> Option<usize> {
        self.index.get(morphism).copied()
    }

    /// Value of morphism `k` at point `p` of `sort`.
    pub fn value(&self, k: Elem, sort: usize, p: usize) -> Elem {
        self.morphisms[k][self.offsets[sort] + p]
    }
}

pub fn e_functor(x: &MultisortedStructure, ego: &AlterEgo, caps: &Caps) -> Result<EAlgebra> {
    let gens = &ego.generators;
    let mut offsets = Vec::with_capacity(x.sorts());
    let mut sort_of = Vec::new();
    for s in 0..x.sorts() {
        offsets.push(sort_of.len());
        sort_of.extend(std::iter::repeat_n(s, x.point_count(s)));
    }
    let mut csp = Csp {
        domains: sort_of.iter().map(|&s| ElemSet::full(gens.algebra(s).size())).collect(),
        arcs: vec![Vec::new(); sort_of.len()],
        tables: Vec::new(),
    };
    for (r, lifted) in ego.relations.iter().zip(&x.relations) {
        let n1 = gens.algebra(r.source).size();
        let n2 = gens.algebra(r.target).size();
        let mut fwd = vec![ElemSet::empty(n2); n1];
        let mut bwd = vec![ElemSet::empty(n1); n2];
        for &(a, b) in &r.pairs {
            fwd[a].insert(b);
            bwd[b].insert(a);
        }
        let (f, b) = (csp.add_table(fwd), csp.add_table(bwd));
        for &(i, j) in lifted {
            csp.constrain(offsets[r.source] + i, offsets[r.target] + j, f, b);
        }
    }
    for (g, lifted) in ego.operations.iter().zip(&x.operations) {
        let n1 = gens.algebra(g.source).size();
        let n2 = gens.algebra(g.target).size();
        let mut fwd = vec![ElemSet::empty(n2); n1];
        let mut bwd = vec![ElemSet::empty(n1); n2];
        for a in 0..n1 {
            fwd[a].insert(g.map.apply(a));
            bwd[g.map.apply(a)].insert(a);
        }
        let (f, b) = (csp.add_table(fwd), csp.add_table(bwd));
        for (i, &j) in lifted.iter().enumerate() {
            csp.constrain(offsets[g.source] + i, offsets[g.target] + j, f, b);
        }
    }
    let morphisms = csp.solve(caps)?;
    let size = morphisms.len();
    if size == 0 {
        return Err(Error::Consistency("structure admits no morphism into the alter ego".into()));
    }
    let signature = gens.algebra(0).signature().clone();
    check_table_cap(&signature, size, caps)?;
    let index: HashMap<Vec<Elem>, usize> = morphisms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut tables = Vec::with_capacity(signature.len());
    let mut scratch = Vec::new();
    let mut img = vec![0; sort_of.len()];
    for (op, sym) in signature.symbols().iter().enumerate() {
        let mut table = Vec::new();
        let mut missing = false;
        for_each_tuple(size, sym.arity, |args| {
            for (v, &s) in sort_of.iter().enumerate() {
                scratch.clear();
                scratch.extend(args.iter().map(|&k| morphisms[k][v]));
                img[v] = gens.algebra(s).apply(op, &scratch);
            }
            match index.get(&img) {
                Some(&k) => table.push(k),
                None => {
                    missing = true;
                    table.push(0);
                }
            }
        });
        if missing {
            return Err(Error::Consistency(format!(
                "morphisms are not closed under `{}`",
                sym.name
            )));
        }
        tables.push(table);
    }
    let algebra = FiniteAlgebra::new("E(X)", signature, size, tables)?;
    Ok(EAlgebra {
        algebra,
        morphisms,
        offsets,
        index,
    })
}

/// The evaluation map e_A: A → E(D(A)), with `x = D(A)` and `e = E(x)`.
pub fn evaluation(a: &FiniteAlgebra, x: &MultisortedStructure, e: &EAlgebra) -> Result<Homomorphism> {
    let mut map = Vec::with_capacity(a.size());
    for el in 0..a.size() {
        let m: Vec<Elem> = x.points.iter().flat_map(|ps| ps.iter().map(move |p| p[el])).collect();
        map.push(
            e.index_of(&m)
                .ok_or_else(|| Error::Consistency(format!("evaluation at {} is not a morphism", a.label(el))))?,
        );
    }
    Ok(Homomorphism::new(map, e.algebra.size()))
}

/// A coproduct with its injections, computed as E of the product of the duals.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub algebra: FiniteAlgebra,
    pub injections: Vec<Homomorphism>,
    pub dual: MultisortedStructure,
}

/// ∐𝒦 in ISP(sorts of `ego`). Checks that every injection is a homomorphism
/// and that homs from the coproduct into each generator correspond
/// bijectively to families of homs from the members of 𝒦.
pub fn coproduct(ego: &AlterEgo, ks: &[FiniteAlgebra], caps: &Caps) -> Result<Coproduct> {
    let mut duals = Vec::with_capacity(ks.len());
    for b in ks {
        duals.push(natural_dual(b, ego, caps)?);
    }
    let dual = structure_product(&duals, ego, caps)?;
    let e = e_functor(&dual, ego, caps)?;
    let names: Vec<&str> = ks.iter().map(|b| b.name()).collect();
    let algebra = e.algebra.clone().renamed(format!("∐({})", names.join(",")));
    let mut injections = Vec::with_capacity(ks.len());
    let mut offset = 0;
    for b in ks {
        let mut map = Vec::with_capacity(b.size());
        for el in 0..b.size() {
            let m: Vec<Elem> = dual
                .points
                .iter()
                .flat_map(|ps| ps.iter().map(move |p| p[offset + el]))
                .collect();
            map.push(
                e.index_of(&m)
                    .ok_or_else(|| Error::Consistency(format!("injection of {} leaves E(X)", b.name())))?,
            );
        }
        if !is_homomorphism(b, &algebra, &map) {
            return Err(Error::Consistency(format!("injection of {} is not a homomorphism", b.name())));
        }
        injections.push(Homomorphism::new(map, algebra.size()));
        offset += b.size();
    }
    for m in ego.generators.algebras() {
        let homs = hom_enumerate(&algebra, &m)?;
        let expected: usize = ks
            .iter()
            .map(|b| hom_enumerate(b, &m).map(|h| h.len()))
            .product::<Result<usize>>()?;
        let restrictions: HashSet<Vec<Homomorphism>> = homs
            .iter()
            .map(|h| injections.iter().map(|e| e.then(h)).collect())
            .collect();
        if homs.len() != expected || restrictions.len() != expected {
            return Err(Error::Consistency(format!(
                "universal property fails against {}: {} homs out, {} families",
                m.name(),
                homs.len(),
                expected
            )));
        }
    }
    Ok(Coproduct {
        algebra,
        injections,
        dual,
    })
}

/// Y = ⋃ X_M × Ω_M with its pre-order.
#[derive(Clone, Debug, Serialize)]
pub struct PreorderSpace {
    /// (sort, point index, index into Ω)
    pub elements: Vec<(usize, usize, usize)>,
    pub preceq: Vec<Vec<bool>>,
}

impl PreorderSpace {
    pub fn is_preorder(&self) -> bool {
        let n = self.elements.len();
        (0..n).all(|i| self.preceq[i][i])
            && (0..n).all(|i| {
                (0..n).all(|j| !self.preceq[i][j] || (0..n).all(|k| !self.preceq[j][k] || self.preceq[i][k]))
            })
    }

    /// The equivalence ≼ ∩ ≽.
    pub fn equivalence(&self) -> Partition {
        let n = self.elements.len();
        let labels: Vec<usize> = (0..n)
            .map(|i| (0..n).find(|&j| self.preceq[i][j] && self.preceq[j][i]).unwrap_or(i))
            .collect();
        Partition::from_labels(&labels)
    }
}

/// The reconstruction of H(U(A)) from D(A).
#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    pub space: PreorderSpace,
    pub classes: Vec<Vec<usize>>,
    pub quotient: FinitePoset,
    /// Index of the prime filter ω∘x of U(A) for each element of Y.
    pub phi: Vec<usize>,
    /// Order isomorphism from the quotient onto the Priestley dual of U(A).
    pub isomorphism: Vec<usize>,
}

/// Builds (Y, ≼) from D(A) and the relations of the alter ego, then checks
/// that Y/≈ is isomorphic to the Priestley dual of U(A) and that ω∘x
/// realises the isomorphism.
pub fn reveng_priestley(a: &FiniteAlgebra, ego: &AlterEgo, caps: &Caps) -> Result<Reconstruction> {
    let gens = &ego.generators;
    let sep = crate::piggyback::sep_condition(gens, &ego.omega);
    if let Some((sort, a, b)) = sep.unseparated {
        return Err(Error::SeparationFailure { sort, a, b });
    }
    let x = natural_dual(a, ego, caps)?;
    let mut elements = Vec::new();
    for s in 0..x.sorts() {
        for p in 0..x.point_count(s) {
            for (k, _) in ego.carriers_on(s) {
                elements.push((s, p, k));
            }
        }
    }
    let lifted: Vec<HashSet<(usize, usize)>> = x.relations.iter().map(|r| r.iter().copied().collect()).collect();
    let n = elements.len();
    let mut preceq = vec![vec![false; n]; n];
    for (i, &(_, p, k1)) in elements.iter().enumerate() {
        for (j, &(_, q, k2)) in elements.iter().enumerate() {
            preceq[i][j] = ego
                .relations
                .iter()
                .zip(&lifted)
                .any(|(r, l)| r.carriers == (k1, k2) && l.contains(&(p, q)));
        }
    }
    let space = PreorderSpace { elements, preceq };
    if !space.is_preorder() {
        return Err(Error::Consistency("≼ on Y is not a pre-order".into()));
    }

    let lattice = d_reduct(a, &gens.spec)?;
    let filters = prime_filters(&lattice);
    let mut phi = Vec::with_capacity(n);
    for &(s, p, k) in &space.elements {
        let w = &ego.omega[k];
        debug_assert_eq!(w.sort, s);
        let point = &x.points[s][p];
        let set = ElemSet::from_elems(a.size(), (0..a.size()).filter(|&el| w.eval(point[el])));
        phi.push(
            filter_index(&filters, &set)
                .ok_or_else(|| Error::Consistency("ω∘x is not a prime filter".into()))?,
        );
    }
    for i in 0..n {
        for j in 0..n {
            let sub = filters[phi[i]].members.is_subset(&filters[phi[j]].members);
            if sub != space.preceq[i][j] {
                return Err(Error::Consistency("≼ disagrees with inclusion of ω∘x".into()));
            }
        }
    }
    let classes = space.equivalence();
    let reps = classes.representatives();
    let labels: Vec<String> = reps.iter().map(|&r| lattice_filter_label(a, &filters[phi[r]])).collect();
    let quotient = FinitePoset::from_fn(labels, |i, j| space.preceq[reps[i]][reps[j]])?;
    let dual = priestley_dual(&lattice);
    let isomorphism = poset_isomorphic(&quotient, &dual)
        .ok_or_else(|| Error::Consistency("Y/≈ is not isomorphic to the Priestley dual".into()))?;
    Ok(Reconstruction {
        space,
        classes: classes.blocks(),
        quotient,
        phi,
        isomorphism,
    })
}

fn lattice_filter_label(a: &FiniteAlgebra, f: &crate::distlat::PrimeFilter) -> String {
    format!("↑{}", a.label(f.generator))
}

/// Λ_B: for each prime filter of U(B) (canonical order), the indices of the
/// carriers ω with ω∘x equal to it for some x ∈ D(B).
pub fn lambda_map(b: &FiniteAlgebra, ego: &AlterEgo) -> Result<Vec<Vec<usize>>> {
    let gens = &ego.generators;
    let filters = prime_filters(&d_reduct(b, &gens.spec)?);
    let mut out = vec![Vec::new(); filters.len()];
    for (k, w) in ego.omega.iter().enumerate() {
        for h in hom_enumerate(b, gens.algebra(w.sort))? {
            let set = ElemSet::from_elems(b.size(), (0..b.size()).filter(|&el| w.eval(h.apply(el))));
            let i = filter_index(&filters, &set)
                .ok_or_else(|| Error::Consistency("ω∘x is not a prime filter".into()))?;
            if out[i].last() != Some(&k) {
                out[i].push(k);
            }
        }
    }
    if out.iter().any(|l| l.is_empty()) {
        return Err(Error::Consistency(format!(
            "some prime filter of {} is not of the form ω∘x",
            b.name()
        )));
    }
    Ok(out)
}

/// ι_𝒦 on the prime filters of U(∐𝒦).
#[derive(Clone, Debug, Serialize)]
pub struct IotaCheck {
    pub family: Vec<String>,
    pub coproduct_size: usize,
    /// Number of prime filters of each U(B).
    pub filter_counts: Vec<usize>,
    /// For each prime filter F of U(∐𝒦), the filter indices of ε_B⁻¹(F).
    pub map: Vec<Vec<usize>>,
    pub surjective: bool,
    pub order_embedding: bool,
    /// Distinct tuples hit, sorted.
    pub image: Vec<Vec<usize>>,
    pub injections_injective: bool,
}

pub fn iota_check(ego: &AlterEgo, ks: &[FiniteAlgebra], caps: &Caps) -> Result<IotaCheck> {
    let spec = &ego.generators.spec;
    let c = coproduct(ego, ks, caps)?;
    let lc = d_reduct(&c.algebra, spec)?;
    let fc = prime_filters(&lc);
    let fbs: Vec<_> = ks
        .iter()
        .map(|b| d_reduct(b, spec).map(|l| prime_filters(&l)))
        .collect::<Result<_>>()?;
    let mut map = Vec::with_capacity(fc.len());
    for f in &fc {
        let mut tuple = Vec::with_capacity(ks.len());
        for ((b, eps), fb) in ks.iter().zip(&c.injections).zip(&fbs) {
            let pre = ElemSet::from_elems(b.size(), (0..b.size()).filter(|&el| f.contains(eps.apply(el))));
            tuple.push(
                filter_index(fb, &pre)
                    .ok_or_else(|| Error::Consistency("preimage of a prime filter is not prime".into()))?,
            );
        }
        map.push(tuple);
    }
    let mut image = map.clone();
    image.sort();
    image.dedup();
    let filter_counts: Vec<usize> = fbs.iter().map(|f| f.len()).collect();
    let total: usize = filter_counts.iter().product();
    let mut order_embedding = true;
    for i in 0..fc.len() {
        for j in 0..fc.len() {
            let below = map[i]
                .iter()
                .zip(&map[j])
                .zip(&fbs)
                .all(|((&x, &y), fb)| fb[x].members.is_subset(&fb[y].members));
            if below != fc[i].members.is_subset(&fc[j].members) {
                order_embedding = false;
            }
        }
    }
    Ok(IotaCheck {
        family: ks.iter().map(|b| b.name().to_string()).collect(),
        coproduct_size: c.algebra.size(),
        filter_counts,
        surjective: image.len() == total,
        order_embedding,
        image,
        injections_injective: c.injections.iter().all(|e| e.is_injective()),
        map,
    })
}

/// The reflection of `a` into ISP(ms): the quotient by the meet of all kernels
/// of homs into `ms`. `collapsed` is set when there are no such homs.
#[derive(Clone, Debug)]
pub struct Reflection {
    pub quotient: Quotient,
    pub collapsed: bool,
}

pub fn reflector(a: &FiniteAlgebra, ms: &[FiniteAlgebra]) -> Result<Reflection> {
    for m in ms {
        crate::algebra::same_signature(a, m)?;
    }
    let theta = kernel_meet(a, ms)?;
    let collapsed = hom_kernels(a, ms)?.is_empty();
    Ok(Reflection {
        quotient: quotient(a, &theta)?,
        collapsed,
    })
}
