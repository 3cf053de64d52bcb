//! Direct products, subuniverses, subalgebras and free algebras.

use std::collections::{HashMap, HashSet};

use crate::algebra::{same_signature, tuple_count, Algebra, Elem, FiniteAlgebra, Signature};
use crate::bitset::ElemSet;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::hom::{isomorphic, Homomorphism};

/// Mixed-radix coding of tuples, leftmost factor most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCodec {
    radices: Vec<usize>,
    size: usize,
}

impl ProductCodec {
    pub fn new(radices: Vec<usize>) -> Option<Self> {
        let mut size: usize = 1;
        for &r in &radices {
            size = size.checked_mul(r)?;
        }
        Some(ProductCodec { radices, size })
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn encode(&self, t: &[Elem]) -> Elem {
        debug_assert_eq!(t.len(), self.radices.len());
        t.iter().zip(&self.radices).fold(0, |acc, (&x, &r)| acc * r + x)
    }

    pub fn decode(&self, mut e: Elem) -> Vec<Elem> {
        let mut t = vec![0; self.radices.len()];
        self.decode_into(&mut e, &mut t);
        t
    }

    #[inline]
    fn decode_into(&self, e: &mut Elem, t: &mut [Elem]) {
        for (slot, &r) in t.iter_mut().zip(&self.radices).rev() {
            *slot = *e % r;
            *e /= r;
        }
    }
}

fn product_size(radices: impl IntoIterator<Item = usize>) -> u128 {
    radices
        .into_iter()
        .try_fold(1u128, |acc, r| acc.checked_mul(r as u128))
        .unwrap_or(u128::MAX)
}

fn check_product_cap(what: &'static str, required: u128, caps: &Caps) -> Result<()> {
    if required > caps.product_size || required > usize::MAX as u128 {
        return Err(Error::CapExceeded {
            what,
            required,
            cap: caps.product_size,
        });
    }
    Ok(())
}

/// A product whose operations are computed on demand from the factors.
#[derive(Clone, Debug)]
pub struct ProductAlgebra<'a> {
    name: String,
    signature: Signature,
    factors: Vec<&'a FiniteAlgebra>,
    codec: ProductCodec,
}

impl<'a> ProductAlgebra<'a> {
    pub fn new(signature: &Signature, factors: Vec<&'a FiniteAlgebra>, caps: &Caps) -> Result<Self> {
        for f in &factors {
            if f.signature() != signature {
                return Err(Error::SignatureMismatch(f.name().to_string(), "product".into()));
            }
        }
        check_product_cap("direct product", product_size(factors.iter().map(|f| f.size())), caps)?;
        let codec = ProductCodec::new(factors.iter().map(|f| f.size()).collect()).expect("checked against cap");
        let name = if factors.is_empty() {
            "1".to_string()
        } else {
            factors.iter().map(|f| f.name()).collect::<Vec<_>>().join("×")
        };
        Ok(ProductAlgebra {
            name,
            signature: signature.clone(),
            factors,
            codec,
        })
    }

    pub fn codec(&self) -> &ProductCodec {
        &self.codec
    }

    pub fn factors(&self) -> &[&'a FiniteAlgebra] {
        &self.factors
    }

    /// Builds explicit tables, subject to the table-entry cap.
    pub fn materialize(&self, caps: &Caps) -> Result<FiniteAlgebra> {
        check_table_cap(&self.signature, self.size(), caps)?;
        let labels: Vec<String> = (0..self.size()).map(|e| self.label(e)).collect();
        FiniteAlgebra::from_fn(self.name.clone(), self.signature.clone(), self.size(), |op, args| self.apply(op, args))?
            .with_labels(labels)
    }
}

impl Algebra for ProductAlgebra<'_> {
    fn name(&self) -> &str {
        &self.name
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn size(&self) -> usize {
        self.codec.size
    }

    fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        let k = self.factors.len();
        let mut coords = vec![0; k * args.len()];
        for (i, &a) in args.iter().enumerate() {
            let mut e = a;
            self.codec.decode_into(&mut e, &mut coords[i * k..(i + 1) * k]);
        }
        let mut out = vec![0; k];
        let mut local = Vec::with_capacity(args.len());
        for (j, f) in self.factors.iter().enumerate() {
            local.clear();
            local.extend((0..args.len()).map(|i| coords[i * k + j]));
            out[j] = f.apply(op, &local);
        }
        self.codec.encode(&out)
    }

    fn label(&self, e: Elem) -> String {
        let t = self.codec.decode(e);
        let parts: Vec<String> = t.iter().zip(&self.factors).map(|(&x, f)| f.label(x)).collect();
        format!("({})", parts.join(","))
    }
}

pub(crate) fn check_table_cap(sig: &Signature, size: usize, caps: &Caps) -> Result<()> {
    let mut total: u128 = 0;
    for s in sig.symbols() {
        let c = tuple_count(size, s.arity).map_or(u128::MAX, |c| c as u128);
        total = total.saturating_add(c);
    }
    if total > caps.table_entries {
        return Err(Error::CapExceeded {
            what: "operation table entries",
            required: total,
            cap: caps.table_entries,
        });
    }
    Ok(())
}

/// A materialized product with its tuple codec.
#[derive(Clone, Debug)]
pub struct Product {
    pub algebra: FiniteAlgebra,
    pub codec: ProductCodec,
}

impl Product {
    pub fn encode(&self, t: &[Elem]) -> Elem {
        self.codec.encode(t)
    }

    pub fn decode(&self, e: Elem) -> Vec<Elem> {
        self.codec.decode(e)
    }
}

/// Componentwise product. The empty product is the one-element algebra of `signature`.
pub fn direct_product(signature: &Signature, factors: &[&FiniteAlgebra], caps: &Caps) -> Result<Product> {
    let p = ProductAlgebra::new(signature, factors.to_vec(), caps)?;
    let algebra = p.materialize(caps)?;
    Ok(Product {
        algebra,
        codec: p.codec.clone(),
    })
}

/// Least subuniverse containing `seeds` and the constants, in discovery order.
/// Fails once more than `limit` elements have been generated.
pub fn closure<A: Algebra + ?Sized>(a: &A, seeds: impl IntoIterator<Item = Elem>, limit: usize) -> Result<Vec<Elem>> {
    let mut elems: Vec<Elem> = Vec::new();
    let mut seen: HashSet<Elem> = HashSet::new();
    let mut push = |e: Elem, elems: &mut Vec<Elem>| -> Result<()> {
        if seen.insert(e) {
            elems.push(e);
            if elems.len() > limit {
                return Err(Error::CapExceeded {
                    what: "subuniverse closure",
                    required: elems.len() as u128,
                    cap: limit as u128,
                });
            }
        }
        Ok(())
    };
    for e in seeds {
        if e >= a.size() {
            return Err(Error::ArgumentOutOfRange { element: e, size: a.size() });
        }
        push(e, &mut elems)?;
    }
    let arities: Vec<usize> = a.signature().symbols().iter().map(|s| s.arity).collect();
    for (op, &m) in arities.iter().enumerate() {
        if m == 0 {
            push(a.apply(op, &[]), &mut elems)?;
        }
    }
    let mut idx = Vec::new();
    let mut args = Vec::new();
    let mut k = 0;
    while k < elems.len() {
        for (op, &m) in arities.iter().enumerate() {
            if m == 0 {
                continue;
            }
            idx.clear();
            idx.resize(m, 0);
            'tuples: loop {
                if idx.contains(&k) {
                    args.clear();
                    args.extend(idx.iter().map(|&i| elems[i]));
                    let r = a.apply(op, &args);
                    push(r, &mut elems)?;
                }
                let mut p = m;
                loop {
                    if p == 0 {
                        break 'tuples;
                    }
                    p -= 1;
                    idx[p] += 1;
                    if idx[p] <= k {
                        continue 'tuples;
                    }
                    idx[p] = 0;
                }
            }
        }
        k += 1;
    }
    Ok(elems)
}

/// The subuniverse of `a` generated by `s`.
pub fn subuniverse_closure(a: &FiniteAlgebra, s: &ElemSet) -> ElemSet {
    let elems = closure(a, s.iter(), usize::MAX).expect("closure within a finite algebra");
    ElemSet::from_elems(a.size(), elems)
}

/// The subalgebra on a closed subset, with its inclusion map. Elements keep
/// their relative order and labels.
pub fn subalgebra(a: &FiniteAlgebra, s: &ElemSet) -> Result<(FiniteAlgebra, Homomorphism)> {
    if s.universe() != a.size() || s.is_empty() || subuniverse_closure(a, s) != *s {
        return Err(Error::InvalidParameter(format!(
            "{:?} is not a non-empty subuniverse of `{}`",
            s,
            a.name()
        )));
    }
    let elems = s.to_vec();
    let mut index = vec![usize::MAX; a.size()];
    for (i, &e) in elems.iter().enumerate() {
        index[e] = i;
    }
    let labels: Vec<String> = elems.iter().map(|&e| a.label(e)).collect();
    let name = if elems.len() == a.size() {
        a.name().to_string()
    } else {
        format!("{}[{}]", a.name(), labels.join(","))
    };
    let sub = FiniteAlgebra::from_fn(name, a.signature().clone(), elems.len(), |op, args| {
        let lifted: Vec<Elem> = args.iter().map(|&x| elems[x]).collect();
        index[a.apply(op, &lifted)]
    })?
    .with_labels(labels)?;
    Ok((sub, Homomorphism::new(elems, a.size())))
}

/// All non-empty subuniverses, ordered by size and then lexicographically.
pub fn subuniverses(a: &FiniteAlgebra, caps: &Caps) -> Result<Vec<ElemSet>> {
    if a.size() > caps.subalgebra_generator_size {
        return Err(Error::CapExceeded {
            what: "subalgebra enumeration (algebra size)",
            required: a.size() as u128,
            cap: caps.subalgebra_generator_size as u128,
        });
    }
    let n = a.size();
    let start = subuniverse_closure(a, &ElemSet::empty(n));
    let mut seen: HashSet<ElemSet> = HashSet::new();
    let mut queue = vec![start.clone()];
    seen.insert(start);
    while let Some(s) = queue.pop() {
        for x in 0..n {
            if s.contains(x) {
                continue;
            }
            let mut t = s.clone();
            t.insert(x);
            let t = subuniverse_closure(a, &t);
            if seen.insert(t.clone()) {
                queue.push(t);
            }
        }
    }
    let mut out: Vec<ElemSet> = seen.into_iter().filter(|s| !s.is_empty()).collect();
    out.sort_by_key(|s| (s.count(), s.to_vec()));
    Ok(out)
}

/// One representative subalgebra per isomorphism class, with its inclusion map,
/// ordered by size.
pub fn subalgebras_up_to_iso(a: &FiniteAlgebra, caps: &Caps) -> Result<Vec<(FiniteAlgebra, Homomorphism)>> {
    let mut reps: Vec<(FiniteAlgebra, Homomorphism)> = Vec::new();
    for s in subuniverses(a, caps)? {
        let (sub, inc) = subalgebra(a, &s)?;
        if !reps.iter().any(|(r, _)| isomorphic(r, &sub).is_some()) {
            reps.push((sub, inc));
        }
    }
    Ok(reps)
}

/// A free algebra realised inside a power of the generators.
#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    pub algebra: FiniteAlgebra,
    /// Elements corresponding to the free generators x0, x1, ...
    pub generators: Vec<Elem>,
    /// For each coordinate of the ambient product: the generator index and the
    /// assignment of the free generators it evaluates at.
    pub coordinates: Vec<(usize, Vec<Elem>)>,
    /// Coordinate tuple of each element.
    pub values: Vec<Vec<Elem>>,
}

/// The free algebra on `n` generators in ISP(ms): the subalgebra of
/// ∏_M M^(M^n) generated by the projections.
pub fn free_algebra(ms: &[FiniteAlgebra], n: usize, caps: &Caps) -> Result<FreeAlgebra> {
    let first = ms.first().ok_or(Error::EmptyInput("generating algebras"))?;
    for m in ms {
        same_signature(first, m)?;
    }
    check_product_cap("free algebra ambient product", ambient_size(ms, n), caps)?;
    let mut coordinates: Vec<(usize, Vec<Elem>)> = Vec::new();
    let mut factors: Vec<&FiniteAlgebra> = Vec::new();
    for (mi, m) in ms.iter().enumerate() {
        crate::algebra::for_each_tuple(m.size(), n, |t| {
            coordinates.push((mi, t.to_vec()));
            factors.push(m);
        });
    }
    let ambient = ProductAlgebra::new(first.signature(), factors, caps)?;
    let gens: Vec<Elem> = (0..n)
        .map(|i| {
            let t: Vec<Elem> = coordinates.iter().map(|(_, a)| a[i]).collect();
            ambient.codec().encode(&t)
        })
        .collect();
    let mut elems = closure(&ambient, gens.iter().copied(), usize::MAX)?;
    if elems.is_empty() {
        return Err(Error::InvalidParameter(
            "free algebra on no generators is empty without constants".into(),
        ));
    }
    elems.sort_unstable();
    check_table_cap(first.signature(), elems.len(), caps)?;
    let index: HashMap<Elem, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let name = format!(
        "Free({};{})",
        ms.iter().map(|m| m.name()).collect::<Vec<_>>().join(","),
        n
    );
    let algebra = FiniteAlgebra::from_fn(name, first.signature().clone(), elems.len(), |op, args| {
        let lifted: Vec<Elem> = args.iter().map(|&x| elems[x]).collect();
        index[&ambient.apply(op, &lifted)]
    })?;
    let generators: Vec<Elem> = gens.iter().map(|g| index[g]).collect();
    let mut labels: Vec<String> = (0..elems.len()).map(|i| format!("f{i}")).collect();
    for (j, &g) in generators.iter().enumerate() {
        if !generators[..j].contains(&g) {
            labels[g] = format!("x{j}");
        }
    }
    let algebra = algebra.with_labels(labels)?;
    let values = elems.iter().map(|&e| ambient.codec().decode(e)).collect();
    Ok(FreeAlgebra {
        algebra,
        generators,
        coordinates,
        values,
    })
}

fn ambient_size(ms: &[FiniteAlgebra], n: usize) -> u128 {
    let mut total: u128 = 1;
    for m in ms {
        if m.size() == 1 {
            continue;
        }
        let factor = tuple_count(m.size(), n)
            .and_then(|p| u32::try_from(p).ok())
            .and_then(|p| (m.size() as u128).checked_pow(p));
        match factor.and_then(|f| total.checked_mul(f)) {
            Some(t) => total = t,
            None => return u128::MAX,
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codec_round_trip() {
        let c = ProductCodec::new(vec![2, 3, 4]).unwrap();
        assert_eq!(c.size(), 24);
        for e in 0..24 {
            assert_eq!(c.encode(&c.decode(e)), e);
        }
        assert_eq!(c.decode(23), vec![1, 2, 3]);
        assert_eq!(c.encode(&[1, 0, 0]), 12);
    }
}
