use super::domain::{all_tuples, Domain, Elem};
use super::relation::Relation;
use crate::error::{invalid, Result};

/// Lengths of the coordinate groups of a parameterized relation, in the fixed
/// order z, δ, α, value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    pub z: usize,
    pub delta: usize,
    pub alpha: usize,
    pub value: usize,
}

impl Signature {
    pub fn new(z: usize, delta: usize, alpha: usize, value: usize) -> Signature {
        Signature { z, delta, alpha, value }
    }

    pub fn plain(value: usize) -> Signature {
        Signature::new(0, 0, 0, value)
    }

    pub fn arity(&self) -> usize {
        self.z + self.delta + self.alpha + self.value
    }

    pub fn is_plain(&self) -> bool {
        self.z == 0 && self.delta == 0 && self.alpha == 0
    }
}

/// A relation whose leading coordinates are parameters. Fixing every
/// parameter group leaves the value relation of arity `sig.value`.
///
/// The z-group is either absent (length 0, the relation does not depend on z)
/// or has length `|A|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamRelation {
    base: Relation,
    sig: Signature,
}

impl ParamRelation {
    pub fn new(base: Relation, sig: Signature) -> Result<ParamRelation> {
        if sig.arity() != base.arity() {
            return invalid(format!(
                "signature covers {} coordinates but the relation has arity {}",
                sig.arity(),
                base.arity()
            ));
        }
        if sig.z != 0 && sig.z != base.size() {
            return invalid(format!(
                "z-group must have length 0 or |A| = {}, got {}",
                base.size(),
                sig.z
            ));
        }
        Ok(ParamRelation { base, sig })
    }

    pub fn plain(base: Relation) -> ParamRelation {
        let sig = Signature::plain(base.arity());
        ParamRelation { base, sig }
    }

    /// Builds `{(z,δ,α,v) : f(z,δ,α,v)}`.
    pub fn from_fn(
        domain: &Domain,
        sig: Signature,
        mut f: impl FnMut(&[Elem], &[Elem], &[Elem], &[Elem]) -> bool,
    ) -> Result<ParamRelation> {
        let (a, b, c) = (sig.z, sig.z + sig.delta, sig.z + sig.delta + sig.alpha);
        let base = Relation::from_fn(domain, sig.arity(), |t| {
            f(&t[..a], &t[a..b], &t[b..c], &t[c..])
        })?;
        ParamRelation::new(base, sig)
    }

    /// Assembles a parameterized relation from its value slices, indexed by
    /// the parameter tuple `(z,δ,α)` in lexicographic order.
    pub fn from_slices(
        domain: &Domain,
        sig: Signature,
        mut slice: impl FnMut(&[Elem], &[Elem], &[Elem]) -> Result<Relation>,
    ) -> Result<ParamRelation> {
        let mut base = Relation::empty(domain, sig.arity())?;
        let width = domain.size().pow(sig.value as u32);
        let params = sig.z + sig.delta + sig.alpha;
        for (pi, p) in all_tuples(domain.size(), params).enumerate() {
            let (z, rest) = p.split_at(sig.z);
            let (d, al) = rest.split_at(sig.delta);
            let s = slice(z, d, al)?;
            if s.arity() != sig.value || !s.domain().same_size(domain) {
                return invalid("slice has the wrong shape");
            }
            for i in s.indices() {
                base.set_index(pi * width + i, true);
            }
        }
        ParamRelation::new(base, sig)
    }

    pub fn base(&self) -> &Relation {
        &self.base
    }

    pub fn into_base(self) -> Relation {
        self.base
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn domain(&self) -> &Domain {
        self.base.domain()
    }

    pub fn size(&self) -> usize {
        self.base.size()
    }

    /// The value relation at fixed parameters. An empty `z` is accepted when
    /// the relation has no z-group; otherwise lengths must match exactly.
    pub fn slice(&self, z: &[Elem], delta: &[Elem], alpha: &[Elem]) -> Relation {
        let z = if self.sig.z == 0 { &[][..] } else { z };
        assert_eq!(z.len(), self.sig.z, "z length");
        assert_eq!(delta.len(), self.sig.delta, "delta length");
        assert_eq!(alpha.len(), self.sig.alpha, "alpha length");
        let n = self.size();
        let prefix = z
            .iter()
            .chain(delta)
            .chain(alpha)
            .fold(0usize, |acc, &e| acc * n + e as usize);
        let width = n.pow(self.sig.value as u32);
        let mut out = Relation::empty(self.domain(), self.sig.value).expect("value slice fits");
        let start = prefix * width;
        for i in 0..width {
            if self.base.contains_index(start + i) {
                out.set_index(i, true);
            }
        }
        out
    }

    /// Fixes the supplied groups and keeps the wildcards (`None`) as
    /// parameters of the result. With every group fixed the result is plain.
    pub fn instantiate(
        &self,
        z: Option<&[Elem]>,
        delta: Option<&[Elem]>,
        alpha: Option<&[Elem]>,
    ) -> Result<ParamRelation> {
        let check = |g: Option<&[Elem]>, len: usize, name: &str| -> Result<()> {
            match g {
                Some(t) if t.len() != len => invalid(format!(
                    "{name} has length {} but the group has length {len}",
                    t.len()
                )),
                Some(t) if t.iter().any(|&e| e as usize >= self.size()) => {
                    invalid(format!("{name} leaves the domain"))
                }
                _ => Ok(()),
            }
        };
        check(z, self.sig.z, "z")?;
        check(delta, self.sig.delta, "delta")?;
        check(alpha, self.sig.alpha, "alpha")?;
        let sig = Signature {
            z: if z.is_some() { 0 } else { self.sig.z },
            delta: if delta.is_some() { 0 } else { self.sig.delta },
            alpha: if alpha.is_some() { 0 } else { self.sig.alpha },
            value: self.sig.value,
        };
        ParamRelation::from_slices(self.domain(), sig, |zz, dd, aa| {
            Ok(self.slice(z.unwrap_or(zz), delta.unwrap_or(dd), alpha.unwrap_or(aa)))
        })
    }

    /// `Q^∀`: intersection over the constant α-tuples `(a,…,a)`.
    pub fn q_forall(&self) -> Result<ParamRelation> {
        if self.sig.alpha == 0 {
            return invalid("q_forall needs a nonempty alpha group");
        }
        let m = self.sig.alpha;
        let sig = Signature { alpha: 0, ..self.sig };
        ParamRelation::from_slices(self.domain(), sig, |z, d, _| {
            let mut acc = Relation::full(self.domain(), self.sig.value)?;
            for a in self.domain().elements() {
                acc = acc.intersect(&self.slice(z, d, &vec![a; m]));
            }
            Ok(acc)
        })
    }

    /// `Q^∀∀`: intersection over all α ∈ A^m.
    pub fn q_forallforall(&self) -> Result<ParamRelation> {
        if self.sig.alpha == 0 {
            return invalid("q_forallforall needs a nonempty alpha group");
        }
        let sig = Signature { alpha: 0, ..self.sig };
        ParamRelation::from_slices(self.domain(), sig, |z, d, _| {
            let mut acc = Relation::full(self.domain(), self.sig.value)?;
            for a in all_tuples(self.size(), self.sig.alpha) {
                acc = acc.intersect(&self.slice(z, d, &a));
            }
            Ok(acc)
        })
    }

    /// All z-tuples to enumerate: `A^{|A|}` when z is present, else the empty tuple.
    pub fn z_values(&self) -> Vec<Vec<Elem>> {
        all_tuples(self.size(), self.sig.z).collect()
    }
}
