//! Finite posets: products, covers, up-sets, isomorphism and DOT output.

use std::fmt::Write as _;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::bitset::ElemSet;
use crate::caps::Caps;
use crate::error::{Error, Result};

/// A finite partial order; `up[x]` is the principal up-set of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    up: Vec<ElemSet>,
    labels: Vec<String>,
}

impl FinitePoset {
    /// Builds a poset from an order predicate, checking the partial-order axioms.
    pub fn from_fn(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let up: Vec<ElemSet> = (0..n)
            .map(|x| ElemSet::from_elems(n, (0..n).filter(|&y| leq(x, y))))
            .collect();
        let p = FinitePoset { up, labels };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.size();
        for x in 0..n {
            if !self.leq(x, x) {
                return Err(Error::InvalidPoset(format!("not reflexive at {}", self.labels[x])));
            }
            for y in self.up[x].iter() {
                if y != x && self.leq(y, x) {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric at {}, {}",
                        self.labels[x], self.labels[y]
                    )));
                }
                if !self.up[y].is_subset(&self.up[x]) {
                    return Err(Error::InvalidPoset(format!("not transitive through {}", self.labels[y])));
                }
            }
        }
        Ok(())
    }

    pub fn chain(n: usize) -> Self {
        Self::from_fn((0..n).map(|i| i.to_string()).collect(), |x, y| x <= y).expect("chain")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_fn((0..n).map(|i| i.to_string()).collect(), |x, y| x == y).expect("antichain")
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn up(&self, x: usize) -> &ElemSet {
        &self.up[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.size());
        self.labels = labels;
        self
    }

    /// Covering pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for x in 0..n {
            for y in self.up[x].iter() {
                if y == x {
                    continue;
                }
                let between = self.up[x].iter().any(|z| z != x && z != y && self.leq(z, y));
                if !between {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Cartesian product with the componentwise order; element `(p, q)` has
    /// index `p * |other| + q`.
    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        let m = other.size();
        let labels = (0..self.size() * m)
            .map(|e| format!("({},{})", self.labels[e / m], other.labels[e % m]))
            .collect();
        FinitePoset::from_fn(labels, |x, y| self.leq(x / m, y / m) && other.leq(x % m, y % m))
            .expect("product of posets is a poset")
    }

    /// Product of a list of posets, leftmost factor most significant.
    pub fn product_all(factors: &[&FinitePoset]) -> FinitePoset {
        let mut acc = FinitePoset::from_fn(vec!["()".into()], |_, _| true).expect("one point");
        for (i, f) in factors.iter().enumerate() {
            acc = if i == 0 { (*f).clone() } else { acc.product(f) };
        }
        acc
    }

    /// All up-sets, ordered by size and then lexicographically.
    pub fn upsets(&self, caps: &Caps) -> Result<Vec<ElemSet>> {
        let n = self.size();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| self.up[x].count());
        let mut out = Vec::new();
        let mut current = ElemSet::empty(n);
        self.upsets_rec(&order, 0, &mut current, &mut out, caps)?;
        out.sort_by_key(|s| (s.count(), s.to_vec()));
        Ok(out)
    }

    fn upsets_rec(
        &self,
        order: &[usize],
        i: usize,
        current: &mut ElemSet,
        out: &mut Vec<ElemSet>,
        caps: &Caps,
    ) -> Result<()> {
        if i == order.len() {
            out.push(current.clone());
            if out.len() as u128 > caps.upsets {
                return Err(Error::CapExceeded {
                    what: "up-set enumeration",
                    required: out.len() as u128,
                    cap: caps.upsets,
                });
            }
            return Ok(());
        }
        let x = order[i];
        self.upsets_rec(order, i + 1, current, out, caps)?;
        if self.up[x].iter().all(|y| y == x || current.contains(y)) {
            current.insert(x);
            self.upsets_rec(order, i + 1, current, out, caps)?;
            current.remove(x);
        }
        Ok(())
    }

    /// Hasse diagram in DOT, edges drawn upwards along covers.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(s, "  rankdir=BT;");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", escape(l));
        }
        for (x, y) in self.covers() {
            let _ = writeln!(s, "  n{x} -> n{y};");
        }
        s.push_str("}\n");
        s
    }

    fn invariants(&self) -> Vec<(usize, usize, usize)> {
        let n = self.size();
        let mut height = vec![0usize; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(self.up[x].count()));
        for &x in &order {
            height[x] = (0..n)
                .filter(|&z| z != x && self.leq(z, x))
                .map(|z| height[z] + 1)
                .max()
                .unwrap_or(0);
        }
        (0..n)
            .map(|x| {
                let below = (0..n).filter(|&z| self.leq(z, x)).count();
                (self.up[x].count(), below, height[x])
            })
            .collect()
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Serialize for FinitePoset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("FinitePoset", 3)?;
        st.serialize_field("size", &self.size())?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("covers", &self.covers())?;
        st.end()
    }
}

/// An order isomorphism `p → q`, if one exists.
pub fn poset_isomorphic(p: &FinitePoset, q: &FinitePoset) -> Option<Vec<usize>> {
    let n = p.size();
    if n != q.size() {
        return None;
    }
    let ip = p.invariants();
    let iq = q.invariants();
    let mut sp = ip.clone();
    let mut sq = iq.clone();
    sp.sort();
    sq.sort();
    if sp != sq {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        x: usize,
        p: &FinitePoset,
        q: &FinitePoset,
        ip: &[(usize, usize, usize)],
        iq: &[(usize, usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if x == p.size() {
            return true;
        }
        for y in 0..q.size() {
            if used[y] || ip[x] != iq[y] {
                continue;
            }
            let consistent =
                (0..x).all(|z| p.leq(z, x) == q.leq(map[z], y) && p.leq(x, z) == q.leq(y, map[z]));
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if go(x + 1, p, q, ip, iq, map, used) {
                return true;
            }
            used[y] = false;
        }
        false
    }
    go(0, p, q, &ip, &iq, &mut map, &mut used).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_orders() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(FinitePoset::from_fn(labels.clone(), |_, _| true).is_err());
        assert!(FinitePoset::from_fn(labels, |x, y| x < y).is_err());
    }

    #[test]
    fn covers_of_chain_skip_transitive_edges() {
        assert_eq!(FinitePoset::chain(3).covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn upsets_of_small_posets() {
        let caps = Caps::default();
        assert_eq!(FinitePoset::antichain(2).upsets(&caps).unwrap().len(), 4);
        assert_eq!(FinitePoset::chain(2).upsets(&caps).unwrap().len(), 3);
        assert_eq!(FinitePoset::antichain(0).upsets(&caps).unwrap().len(), 1);
        let tight = Caps { upsets: 3, ..Caps::default() };
        assert!(FinitePoset::antichain(2).upsets(&tight).unwrap_err().is_cap());
    }

    #[test]
    fn isomorphism() {
        let c = FinitePoset::chain(2);
        assert_eq!(poset_isomorphic(&c, &c), Some(vec![0, 1]));
        assert!(poset_isomorphic(&c, &FinitePoset::antichain(2)).is_none());
        let square = c.product(&c);
        assert_eq!(square.covers().len(), 4);
        assert!(poset_isomorphic(&square, &FinitePoset::chain(4)).is_none());
    }

    #[test]
    fn dot_lists_covers_only() {
        let dot = FinitePoset::chain(3).to_dot("c3");
        assert!(dot.contains("n0 -> n1;") && dot.contains("n1 -> n2;"));
        assert!(!dot.contains("n0 -> n2;"));
    }
}
