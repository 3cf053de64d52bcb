//! The E/S classification flowchart and the coproduct-preservation test.

use serde::Serialize;

use crate::algebra::{same_signature, Algebra, Elem, FiniteAlgebra};
use crate::caps::Caps;
use crate::congruence::{in_isp, is_rel_subdirectly_irreducible, Partition};
use crate::distlat::DReductSpec;
use crate::error::{Error, Result};
use crate::hom::{embeds, hom_enumerate, isomorphic};
use crate::piggyback::{
    build_alter_ego, maximal_subuniverses_in, minimal_omega, sep_condition, unique_max_applicable, AlterEgo,
    GeneratorSet, OmegaChoice,
};
use crate::product::{direct_product, subalgebras_up_to_iso};

/// Subalgebras of the members, one per isomorphism class, in input order
/// and by size within each member.
fn subalgebra_classes(ms: &[FiniteAlgebra], caps: &Caps) -> Result<Vec<FiniteAlgebra>> {
    let mut out: Vec<FiniteAlgebra> = Vec::new();
    for m in ms {
        for (sub, _) in subalgebras_up_to_iso(m, caps)? {
            if !out.iter().any(|c| isomorphic(c, &sub).is_some()) {
                out.push(sub);
            }
        }
    }
    Ok(out)
}

fn check_shared_signature(ms: &[FiniteAlgebra]) -> Result<()> {
    let first = ms.first().ok_or(Error::EmptyInput("generating algebras"))?;
    ms.iter().try_for_each(|m| same_signature(first, m))
}

/// Replaces 𝕄 by relatively subdirectly irreducible subalgebras of its members
/// generating the same quasivariety, dropping (smallest first) any algebra that
/// lies in the quasivariety generated by the others.
pub fn simplify_generators(ms: &[FiniteAlgebra], caps: &Caps) -> Result<Vec<FiniteAlgebra>> {
    check_shared_signature(ms)?;
    let mut keep = Vec::new();
    for c in subalgebra_classes(ms, caps)? {
        if c.size() > 1 && is_rel_subdirectly_irreducible(&c, ms)? {
            keep.push(c);
        }
    }
    keep.sort_by_key(|c| c.size());
    let mut i = 0;
    while i < keep.len() {
        let rest: Vec<FiniteAlgebra> = keep
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, c)| c.clone())
            .collect();
        if !rest.is_empty() && in_isp(&keep[i], &rest)? {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    if keep.is_empty() {
        return Err(Error::InvalidParameter(
            "the generated quasivariety is trivial".into(),
        ));
    }
    for m in ms {
        if m.size() > 1 && !in_isp(m, &keep)? {
            return Err(Error::Consistency(format!(
                "`{}` is not recovered by the simplified generators",
                m.name()
            )));
        }
    }
    Ok(keep)
}

/// Homomorphisms witnessing that `algebra` embeds into a power of the single generator.
#[derive(Clone, Debug, Serialize)]
pub struct SeparatingFamily {
    pub algebra: String,
    pub homs: Vec<Vec<Elem>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorSource {
    Subalgebra,
    Product,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingleGenerator {
    #[serde(skip)]
    pub algebra: FiniteAlgebra,
    pub name: String,
    pub size: usize,
    pub source: GeneratorSource,
    pub witnesses: Vec<SeparatingFamily>,
}

/// Greedy separating family of homs `n → m`, in hom order.
fn separating_family(n: &FiniteAlgebra, m: &FiniteAlgebra) -> Result<Option<Vec<Vec<Elem>>>> {
    let mut current = Partition::total(n.size());
    let mut chosen = Vec::new();
    for h in hom_enumerate(n, m)? {
        let next = current.meet(&Partition::kernel(&h));
        if next != current {
            current = next;
            chosen.push(h.map);
        }
        if current.is_discrete() {
            return Ok(Some(chosen));
        }
    }
    Ok(current.is_discrete().then_some(chosen))
}

fn generates(candidate: &FiniteAlgebra, ms: &[FiniteAlgebra]) -> Result<Option<Vec<SeparatingFamily>>> {
    let mut witnesses = Vec::new();
    for n in ms {
        match separating_family(n, candidate)? {
            Some(homs) => witnesses.push(SeparatingFamily {
                algebra: n.name().to_string(),
                homs,
            }),
            None => return Ok(None),
        }
    }
    Ok(Some(witnesses))
}

fn admits_single_carrier(m: &FiniteAlgebra, spec: &DReductSpec) -> Result<bool> {
    let gens = GeneratorSet::new(vec![m.clone()], spec)?;
    Ok((0..gens.get(0).filters.len()).any(|i| sep_condition(&gens, &[gens.carrier(0, i)]).holds))
}

/// A single algebra generating ISP(ms), searched among subalgebras of the
/// members (preferring one that admits a single separating carrier) and then
/// the product of all members. Cap violations are errors, distinct from `None`.
pub fn find_single_generator(
    ms: &[FiniteAlgebra],
    spec: &DReductSpec,
    caps: &Caps,
) -> Result<Option<SingleGenerator>> {
    check_shared_signature(ms)?;
    let mut candidates = Vec::new();
    for c in subalgebra_classes(ms, caps)? {
        let si = c.size() > 1 && is_rel_subdirectly_irreducible(&c, ms)?;
        candidates.push((!si, c.size(), c));
    }
    candidates.sort_by_key(|(not_si, size, _)| (*not_si, *size));
    let mut first: Option<SingleGenerator> = None;
    for (_, _, c) in candidates {
        if let Some(witnesses) = generates(&c, ms)? {
            let found = SingleGenerator {
                name: c.name().to_string(),
                size: c.size(),
                source: GeneratorSource::Subalgebra,
                witnesses,
                algebra: c,
            };
            if admits_single_carrier(&found.algebra, spec)? {
                return Ok(Some(found));
            }
            first.get_or_insert(found);
        }
    }
    if first.is_some() || ms.len() < 2 {
        return Ok(first);
    }
    let refs: Vec<&FiniteAlgebra> = ms.iter().collect();
    let product = direct_product(ms[0].signature(), &refs, caps)?.algebra;
    Ok(generates(&product, ms)?.map(|witnesses| SingleGenerator {
        name: product.name().to_string(),
        size: product.size(),
        source: GeneratorSource::Product,
        witnesses,
        algebra: product,
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct CarrierReport {
    pub sort: usize,
    pub sort_name: String,
    pub label: String,
    pub members: Vec<Elem>,
    pub member_labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    /// Indices into Ω of (ω1, ω2).
    pub carriers: (usize, usize),
    pub size: usize,
    pub relations: Vec<Vec<(Elem, Elem)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RouteStep {
    pub question: String,
    pub answer: bool,
    pub detail: String,
}

/// Everything the flowchart computed, with witnesses.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub input: Vec<String>,
    pub simplified: Vec<String>,
    pub single_generator: Option<SingleGenerator>,
    pub sorts: Vec<String>,
    pub omega: Vec<CarrierReport>,
    /// Number of carrier sets of the same minimum size that also satisfy (Sep).
    pub omega_alternatives: usize,
    pub relation_sizes: Vec<RelationReport>,
    pub unique_max_applicable: bool,
    pub verdict_e: bool,
    pub verdict_s: bool,
    pub preserves_coproducts: bool,
    pub route: Vec<RouteStep>,
    #[serde(skip)]
    pub ego: AlterEgo,
}

impl ClassificationReport {
    /// |R_{ω1,ω2}| for carrier indices `(i, j)`.
    pub fn relation_count(&self, i: usize, j: usize) -> usize {
        self.relation_sizes
            .iter()
            .find(|r| r.carriers == (i, j))
            .map_or(0, |r| r.size)
    }

    pub fn max_relation_count(&self) -> usize {
        self.relation_sizes.iter().map(|r| r.size).max().unwrap_or(0)
    }

    pub fn verdict_label(&self) -> String {
        crate::catalog::Expected {
            e: self.verdict_e,
            s: self.verdict_s,
        }
        .to_string()
    }
}

/// Builds the report for an already assembled alter ego.
fn report_for(
    input: &[FiniteAlgebra],
    simplified: &[FiniteAlgebra],
    single: Option<SingleGenerator>,
    ego: AlterEgo,
    omega_alternatives: usize,
    spec: &DReductSpec,
) -> Result<ClassificationReport> {
    let gens = &ego.generators;
    let omega: Vec<CarrierReport> = ego
        .omega
        .iter()
        .map(|w| CarrierReport {
            sort: w.sort,
            sort_name: gens.algebra(w.sort).name().to_string(),
            label: gens.carrier_label(w),
            members: w.filter.members.to_vec(),
            member_labels: gens.carrier_members_labels(w),
        })
        .collect();
    let k = ego.omega.len();
    let mut relation_sizes = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let rels: Vec<Vec<(Elem, Elem)>> = ego.relations_between(i, j).map(|r| r.pairs.clone()).collect();
            relation_sizes.push(RelationReport {
                carriers: (i, j),
                size: rels.len(),
                relations: rels,
            });
        }
    }
    let mut uma = true;
    for g in gens.generators() {
        uma &= unique_max_applicable(&g.algebra, spec)?;
    }
    let max_r = relation_sizes.iter().map(|r| r.size).max().unwrap_or(0);
    let q1 = single.is_some();
    let q2 = k == 1;
    let mut route = vec![RouteStep {
        question: "(1) single generator M?".into(),
        answer: q1,
        detail: match &single {
            Some(g) => format!("M = {}, {} elements", g.name, g.size),
            None => format!("{} generators after simplification", simplified.len()),
        },
    }];
    if q1 {
        route.push(RouteStep {
            question: "(2) single carrier ω with (Sep)?".into(),
            answer: q2,
            detail: format!("minimal |Ω| = {k}"),
        });
    }
    let verdict_e = q1 && q2;
    let verdict_s = max_r <= 1;
    if verdict_e {
        route.push(RouteStep {
            question: "(3) |R_{ω,ω}| = 1?".into(),
            answer: relation_sizes[0].size == 1,
            detail: format!("|R_{{ω,ω}}| = {}", relation_sizes[0].size),
        });
    } else {
        route.push(RouteStep {
            question: "(3) |R_{ω1,ω2}| ≤ 1 for all ω1, ω2?".into(),
            answer: verdict_s,
            detail: format!("max |R| = {max_r} over {} carrier pairs", k * k),
        });
    }
    Ok(ClassificationReport {
        input: input.iter().map(|m| m.name().to_string()).collect(),
        simplified: simplified.iter().map(|m| m.name().to_string()).collect(),
        single_generator: single,
        sorts: gens.generators().iter().map(|g| g.algebra.name().to_string()).collect(),
        omega,
        omega_alternatives,
        relation_sizes,
        unique_max_applicable: uma,
        verdict_e,
        verdict_s,
        preserves_coproducts: verdict_e && verdict_s,
        route,
        ego,
    })
}

/// Runs the flowchart on ISP(ms) with the lattice reduct given by `spec`.
pub fn flowchart_classify(ms: &[FiniteAlgebra], spec: &DReductSpec, caps: &Caps) -> Result<ClassificationReport> {
    flowchart_classify_with(ms, spec, caps, minimal_omega)
}

/// The flowchart with Ω chosen by `choose` from the sorts the flowchart settles on.
pub fn flowchart_classify_with(
    ms: &[FiniteAlgebra],
    spec: &DReductSpec,
    caps: &Caps,
    choose: impl FnOnce(&GeneratorSet) -> Result<OmegaChoice>,
) -> Result<ClassificationReport> {
    let simplified = simplify_generators(ms, caps)?;
    let single = find_single_generator(&simplified, spec, caps)?;
    let sorts = match &single {
        Some(g) => vec![g.algebra.clone()],
        None => simplified.clone(),
    };
    let gens = GeneratorSet::new(sorts, spec)?;
    let choice = choose(&gens)?;
    let ego = build_alter_ego(gens, choice.omega, caps)?;
    report_for(ms, &simplified, single, ego, choice.alternatives.len(), spec)
}

/// Runs the flowchart with a caller-chosen Ω on the given sorts (no
/// simplification or generator search). Used to compare carrier choices.
pub fn classify_with_omega(
    sorts: Vec<FiniteAlgebra>,
    omega: Vec<crate::piggyback::CarrierMap>,
    spec: &DReductSpec,
    caps: &Caps,
) -> Result<ClassificationReport> {
    let gens = GeneratorSet::new(sorts.clone(), spec)?;
    let single = if sorts.len() == 1 {
        Some(SingleGenerator {
            name: sorts[0].name().to_string(),
            size: sorts[0].size(),
            source: GeneratorSource::Subalgebra,
            witnesses: Vec::new(),
            algebra: sorts[0].clone(),
        })
    } else {
        None
    };
    let ego = build_alter_ego(gens, omega, caps)?;
    report_for(&sorts, &sorts, single, ego, 1, spec)
}

/// The three parts of condition (C) for a pair (M, ω).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionC {
    /// Every relatively subdirectly irreducible algebra embeds in M.
    pub si_embed: bool,
    /// (Sep) holds for M and ω alone.
    pub sep: bool,
    /// The subuniverses of M² inside (ω,ω)⁻¹(≤) have a largest element.
    pub top_relation: bool,
}

impl ConditionC {
    pub fn all(&self) -> bool {
        self.si_embed && self.sep && self.top_relation
    }
}

/// Checks condition (C) for `m` (assumed in ISP(ambient)) and its `filter`-th prime filter.
pub fn check_condition_c(
    ambient: &[FiniteAlgebra],
    m: &FiniteAlgebra,
    filter: usize,
    spec: &DReductSpec,
    caps: &Caps,
) -> Result<ConditionC> {
    let mut si_embed = true;
    for c in subalgebra_classes(ambient, caps)? {
        if c.size() > 1 && is_rel_subdirectly_irreducible(&c, ambient)? && !embeds(&c, m) {
            si_embed = false;
            break;
        }
    }
    let gens = GeneratorSet::new(vec![m.clone()], spec)?;
    let w = gens.carrier(0, filter);
    let sep = sep_condition(&gens, std::slice::from_ref(&w)).holds;
    let sq = direct_product(m.signature(), &[m, m], caps)?;
    let l = crate::piggyback::leq_sublattice(&gens, &w, &w);
    let top_relation = maximal_subuniverses_in(&sq.algebra, &l).len() == 1;
    Ok(ConditionC {
        si_embed,
        sep,
        top_relation,
    })
}

/// Scans every relatively subdirectly irreducible subalgebra M of the
/// generators and every carrier of M for condition (C); returns the first
/// satisfying pair (M, filter index).
pub fn condition_c_scan(
    ambient: &[FiniteAlgebra],
    spec: &DReductSpec,
    caps: &Caps,
) -> Result<Option<(FiniteAlgebra, usize)>> {
    check_shared_signature(ambient)?;
    for c in subalgebra_classes(ambient, caps)? {
        if c.size() < 2 || !is_rel_subdirectly_irreducible(&c, ambient)? {
            continue;
        }
        let filters = crate::distlat::prime_filters(&crate::distlat::d_reduct(&c, spec)?).len();
        for f in 0..filters {
            if check_condition_c(ambient, &c, f, spec, caps)?.all() {
                return Ok(Some((c, f)));
            }
        }
    }
    Ok(None)
}
