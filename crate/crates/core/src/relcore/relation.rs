use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

use super::capacity;
use super::domain::{all_tuples, Domain, Elem};
use crate::error::{invalid, Result};

/// A relation of fixed arity over a domain, stored as a bitset indexed by the
/// radix-`|A|` encoding of its tuples (first coordinate most significant).
#[derive(Clone)]
pub struct Relation {
    domain: Domain,
    arity: usize,
    bits: FixedBitSet,
}

impl Relation {
    pub fn empty(domain: &Domain, arity: usize) -> Result<Relation> {
        let n = capacity::slots(domain.size(), arity, "relation table")?;
        Ok(Relation {
            domain: domain.clone(),
            arity,
            bits: FixedBitSet::with_capacity(n),
        })
    }

    pub fn full(domain: &Domain, arity: usize) -> Result<Relation> {
        let mut r = Relation::empty(domain, arity)?;
        r.bits.insert_range(..);
        Ok(r)
    }

    pub fn from_tuples<I, T>(domain: &Domain, arity: usize, tuples: I) -> Result<Relation>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[Elem]>,
    {
        let mut r = Relation::empty(domain, arity)?;
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return invalid(format!("tuple {t:?} does not have arity {arity}"));
            }
            if t.iter().any(|&e| e as usize >= domain.size()) {
                return invalid(format!("tuple {t:?} leaves the domain"));
            }
            r.insert(t);
        }
        Ok(r)
    }

    /// The relation `{t : f(t)}`.
    pub fn from_fn(domain: &Domain, arity: usize, mut f: impl FnMut(&[Elem]) -> bool) -> Result<Relation> {
        let mut r = Relation::empty(domain, arity)?;
        for (i, t) in all_tuples(domain.size(), arity).enumerate() {
            if f(&t) {
                r.bits.insert(i);
            }
        }
        Ok(r)
    }

    pub fn unary(domain: &Domain, elems: impl IntoIterator<Item = Elem>) -> Result<Relation> {
        Relation::from_tuples(domain, 1, elems.into_iter().map(|e| [e]))
    }

    pub fn singleton(domain: &Domain, e: Elem) -> Result<Relation> {
        Relation::unary(domain, [e])
    }

    /// Arity-0 relation: `{Λ}` when `nonempty`, otherwise `∅`.
    pub fn nullary(domain: &Domain, nonempty: bool) -> Relation {
        let mut r = Relation::empty(domain, 0).expect("one slot");
        r.bits.set(0, nonempty);
        r
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.size()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn slots(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.slots()
    }

    pub fn encode(&self, t: &[Elem]) -> usize {
        debug_assert_eq!(t.len(), self.arity);
        let n = self.size();
        t.iter().fold(0usize, |acc, &e| acc * n + e as usize)
    }

    pub fn decode(&self, mut idx: usize) -> Vec<Elem> {
        let n = self.size();
        let mut t = vec![0; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = (idx % n) as Elem;
            idx /= n;
        }
        t
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        t.len() == self.arity && self.bits.contains(self.encode(t))
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.bits.contains(idx)
    }

    pub fn insert(&mut self, t: &[Elem]) {
        let i = self.encode(t);
        self.bits.insert(i);
    }

    pub fn remove(&mut self, t: &[Elem]) {
        let i = self.encode(t);
        self.bits.set(i, false);
    }

    pub fn set_index(&mut self, idx: usize, on: bool) {
        self.bits.set(idx, on);
    }

    /// Tuples in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        self.bits.ones().map(move |i| self.decode(i))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn tuples(&self) -> Vec<Vec<Elem>> {
        self.iter().collect()
    }

    pub fn same_shape(&self, other: &Relation) -> bool {
        self.arity == other.arity && self.domain.same_size(&other.domain)
    }

    fn check_shape(&self, other: &Relation, op: &str) {
        assert!(
            self.same_shape(other),
            "{op}: shape mismatch (arity {} over {} vs arity {} over {})",
            self.arity,
            self.size(),
            other.arity,
            other.size()
        );
    }

    /// Set intersection. Panics if the shapes differ.
    pub fn intersect(&self, other: &Relation) -> Relation {
        self.check_shape(other, "intersect");
        let mut r = self.clone();
        r.bits.intersect_with(&other.bits);
        r
    }

    /// Set union. Panics if the shapes differ.
    pub fn union(&self, other: &Relation) -> Relation {
        self.check_shape(other, "union");
        let mut r = self.clone();
        r.bits.union_with(&other.bits);
        r
    }

    /// Set difference. Panics if the shapes differ.
    pub fn difference(&self, other: &Relation) -> Relation {
        self.check_shape(other, "difference");
        let mut r = self.clone();
        r.bits.difference_with(&other.bits);
        r
    }

    pub fn complement(&self) -> Relation {
        let mut r = self.clone();
        r.bits.toggle_range(..);
        r
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.same_shape(other) && self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Relation) -> bool {
        self.same_shape(other) && self.bits.is_disjoint(&other.bits)
    }

    /// Elements of a unary relation.
    pub fn elems(&self) -> Vec<Elem> {
        assert_eq!(self.arity, 1, "elems on non-unary relation");
        self.bits.ones().map(|i| i as Elem).collect()
    }

    /// Elements of a unary relation as a bitmask.
    pub fn mask(&self) -> u64 {
        assert_eq!(self.arity, 1, "mask on non-unary relation");
        self.bits.ones().fold(0u64, |m, i| m | (1 << i))
    }

    pub fn from_mask(domain: &Domain, mask: u64) -> Relation {
        let mut r = Relation::empty(domain, 1).expect("unary fits");
        for e in domain.elements() {
            if mask >> e & 1 == 1 {
                r.bits.insert(e as usize);
            }
        }
        r
    }

    /// `{(x,x) : x ∈ d}` for a unary `d`.
    pub fn diagonal_on(d: &Relation) -> Relation {
        let mut r = Relation::empty(d.domain(), 2).expect("binary fits");
        for x in d.elems() {
            r.insert(&[x, x]);
        }
        r
    }

    /// `d1 × d2` for unary relations.
    pub fn product(d1: &Relation, d2: &Relation) -> Relation {
        let a = d1.elems();
        let b = d2.elems();
        let mut r = Relation::empty(d1.domain(), 2).expect("binary fits");
        for &x in &a {
            for &y in &b {
                r.insert(&[x, y]);
            }
        }
        r
    }

    pub fn converse(&self) -> Relation {
        assert_eq!(self.arity, 2, "converse on non-binary relation");
        let mut r = Relation::empty(&self.domain, 2).expect("binary fits");
        for t in self.iter() {
            r.insert(&[t[1], t[0]]);
        }
        r
    }

    pub fn is_symmetric(&self) -> bool {
        self.arity == 2 && self.iter().all(|t| self.contains(&[t[1], t[0]]))
    }

    pub fn is_transitive(&self) -> bool {
        if self.arity != 2 {
            return false;
        }
        let ts = self.tuples();
        ts.iter().all(|a| {
            ts.iter()
                .filter(|b| b[0] == a[1])
                .all(|b| self.contains(&[a[0], b[1]]))
        })
    }

    pub fn is_reflexive_on(&self, d: &Relation) -> bool {
        self.arity == 2 && d.elems().into_iter().all(|x| self.contains(&[x, x]))
    }

    /// Equivalence relation whose field is exactly `d`.
    pub fn is_equivalence_on(&self, d: &Relation) -> bool {
        self.arity == 2
            && self.is_subset(&Relation::product(d, d))
            && self.is_reflexive_on(d)
            && self.is_symmetric()
            && self.is_transitive()
    }

    /// The class `{y : (x,y) ∈ self}`.
    pub fn class_of(&self, x: Elem) -> Relation {
        assert_eq!(self.arity, 2);
        let mut r = Relation::empty(&self.domain, 1).expect("unary fits");
        for y in self.domain.elements() {
            if self.contains(&[x, y]) {
                r.insert(&[y]);
            }
        }
        r
    }

    pub fn has_loop(&self) -> bool {
        self.arity == 2 && self.domain.elements().any(|x| self.contains(&[x, x]))
    }

    /// Same tuples viewed over another domain value of the same size, e.g. to
    /// attach labels.
    pub fn with_domain(&self, domain: &Domain) -> Result<Relation> {
        if !domain.same_size(&self.domain) {
            return invalid("domain size mismatch");
        }
        Ok(Relation {
            domain: domain.clone(),
            arity: self.arity,
            bits: self.bits.clone(),
        })
    }

    /// Readable listing such as `{(1,2),(2,1)}` using domain labels.
    pub fn display(&self) -> String {
        let items: Vec<String> = self
            .iter()
            .map(|t| {
                let parts: Vec<String> = t.iter().map(|&e| self.domain.label(e)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        format!("{{{}}}", items.join(","))
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.same_shape(other) && self.bits == other.bits
    }
}

impl Eq for Relation {}

impl Hash for Relation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.size().hash(state);
        self.bits.as_slice().hash(state);
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation[{}]{}", self.arity, self.display())
    }
}
