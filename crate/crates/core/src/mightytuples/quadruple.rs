use std::fmt;
use std::str::FromStr;

use super::common::{alpha_index, at, bundle_zlen, constant_indices, from_z_parts, intersect_all, same_domain, stack_alpha};
use crate::error::{invalid, Error, Result};
use crate::relcore::{all_tuples, compose, project, rel_then_unary, unary_compose, Domain, Elem, ParamRelation, Relation, Signature};

/// `(R, D, B, C)`: `R` is a (z,α)-parameterized binary relation and
/// `D`, `B`, `C` are z-parameterized unary relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadruple {
    pub r: ParamRelation,
    pub d: ParamRelation,
    pub b: ParamRelation,
    pub c: ParamRelation,
}

/// Slices of a quadruple at one z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFrame {
    pub z: Vec<Elem>,
    /// Width of the α-group.
    pub k: usize,
    /// `R^α` for α ∈ A^k in lexicographic order.
    pub alphas: Vec<Relation>,
    pub d: Relation,
    pub b: Relation,
    pub c: Relation,
}

impl QFrame {
    pub fn forall(&self) -> Relation {
        let n = self.d.size();
        let k = self.k();
        intersect_all(self.d.domain(), 2, constant_indices(n, k).into_iter().map(|i| &self.alphas[i]))
    }

    pub fn forallforall(&self) -> Relation {
        intersect_all(self.d.domain(), 2, &self.alphas)
    }

    /// `R^κ`, defined when `k = |A|`.
    pub fn kappa(&self) -> Option<Relation> {
        let dom = self.d.domain();
        (self.k() == dom.size()).then(|| self.alphas[alpha_index(dom.size(), &dom.kappa())].clone())
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl Quadruple {
    pub fn new(r: ParamRelation, d: ParamRelation, b: ParamRelation, c: ParamRelation) -> Result<Quadruple> {
        same_domain(&[&r, &d, &b, &c])?;
        let s = r.sig();
        if s.delta != 0 || s.alpha == 0 || s.value != 2 {
            return invalid("R must be a (z,α)-parameterized binary relation with α-width ≥ 1");
        }
        for (p, name) in [(&d, "D"), (&b, "B"), (&c, "C")] {
            let s = p.sig();
            if s.delta != 0 || s.alpha != 0 || s.value != 1 {
                return invalid(format!("{name} must be a z-parameterized unary relation"));
            }
        }
        Ok(Quadruple { r, d, b, c })
    }

    /// The quadruple `(Q, A, B, C)` of a mighty tuple III.
    pub fn from_iii(q: ParamRelation, b: ParamRelation, c: ParamRelation) -> Result<Quadruple> {
        let d = ParamRelation::plain(Relation::full(q.domain(), 1)?);
        Quadruple::new(q, d, b, c)
    }

    pub fn domain(&self) -> &Domain {
        self.r.domain()
    }

    /// Width of the α-group.
    pub fn k(&self) -> usize {
        self.r.sig().alpha
    }

    pub fn zlen(&self) -> usize {
        bundle_zlen(&[&self.r, &self.d, &self.b, &self.c])
    }

    pub fn frames(&self) -> Vec<QFrame> {
        let n = self.domain().size();
        all_tuples(n, self.zlen())
            .map(|z| QFrame {
                k: self.k(),
                alphas: all_tuples(n, self.k()).map(|a| self.r.slice(&z, &[], &a)).collect(),
                d: self.d.slice(&z, &[], &[]),
                b: self.b.slice(&z, &[], &[]),
                c: self.c.slice(&z, &[], &[]),
                z,
            })
            .collect()
    }

    /// Rebuilds a quadruple from per-z frames (one per z-tuple of length
    /// `zlen`, lexicographic). All frames share the α-width.
    pub fn from_frames(domain: &Domain, zlen: usize, frames: &[QFrame]) -> Result<Quadruple> {
        let k = frames.first().map(QFrame::k).ok_or_else(|| Error::Internal("no frames".into()))?;
        let rs = frames
            .iter()
            .map(|f| stack_alpha(domain, k, &f.alphas))
            .collect::<Result<Vec<_>>>()?;
        let pick = |g: fn(&QFrame) -> &Relation| frames.iter().map(|f| g(f).clone()).collect::<Vec<_>>();
        Quadruple::new(
            from_z_parts(domain, Signature::new(zlen, 0, k, 2), &rs)?,
            from_z_parts(domain, Signature::new(zlen, 0, 0, 1), &pick(|f| &f.d))?,
            from_z_parts(domain, Signature::new(zlen, 0, 0, 1), &pick(|f| &f.b))?,
            from_z_parts(domain, Signature::new(zlen, 0, 0, 1), &pick(|f| &f.c))?,
        )
    }

    /// `Σ_{z ∈ A^{|A|}} |D_z|`, over the full z-space even when D ignores z.
    pub fn sum_d(&self) -> usize {
        self.sum(&self.d)
    }

    pub fn sum_c(&self) -> usize {
        self.sum(&self.c)
    }

    fn sum(&self, p: &ParamRelation) -> usize {
        let n = self.domain().size();
        let per: usize = all_tuples(n, p.sig().z).map(|z| p.slice(&z, &[], &[]).len()).sum();
        per * n.pow((n - p.sig().z) as u32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Kappa,
    DPlus,
    Un,
    Bc,
    Empty,
    BPlus,
    PlusC,
    T,
    Sd,
    R,
    Bd,
    Cd,
    CPlus,
    S,
}

impl Property {
    pub const ALL: [Property; 14] = [
        Property::Kappa,
        Property::DPlus,
        Property::Un,
        Property::Bc,
        Property::Empty,
        Property::BPlus,
        Property::PlusC,
        Property::T,
        Property::Sd,
        Property::R,
        Property::Bd,
        Property::Cd,
        Property::CPlus,
        Property::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Kappa => "κ",
            Property::DPlus => "d+",
            Property::Un => "un",
            Property::Bc => "bc",
            Property::Empty => "∅",
            Property::BPlus => "b+",
            Property::PlusC => "+c",
            Property::T => "t",
            Property::Sd => "sd",
            Property::R => "r",
            Property::Bd => "bd",
            Property::Cd => "cd",
            Property::CPlus => "c+",
            Property::S => "s",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Property> {
        let t = match s.trim() {
            "kappa" => "κ",
            "empty" | "disjoint" => "∅",
            other => other,
        };
        Property::ALL
            .into_iter()
            .find(|p| p.name() == t)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown quadruple property {s:?}")))
    }
}

/// Properties of a mighty tuple III viewed as a quadruple.
pub const PROPS_III: [Property; 5] = [Property::Un, Property::Bc, Property::Empty, Property::BPlus, Property::PlusC];
pub const PROPS_IV: [Property; 6] = [Property::DPlus, Property::Un, Property::Bc, Property::Empty, Property::BPlus, Property::Bd];
/// Every property except κ.
pub const PROPS_II: [Property; 13] = [
    Property::DPlus,
    Property::Un,
    Property::Bc,
    Property::Empty,
    Property::BPlus,
    Property::PlusC,
    Property::T,
    Property::Sd,
    Property::R,
    Property::Bd,
    Property::Cd,
    Property::CPlus,
    Property::S,
];
pub const PROPS_J: [Property; 10] = [
    Property::Kappa,
    Property::DPlus,
    Property::Un,
    Property::Bc,
    Property::Empty,
    Property::BPlus,
    Property::PlusC,
    Property::T,
    Property::R,
    Property::Sd,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub holds: bool,
    pub witness: String,
}

fn first_z(dom: &Domain, frames: &[QFrame], mut f: impl FnMut(&QFrame) -> Option<String>) -> PropertyCheck {
    match frames.iter().find_map(|fr| f(fr).map(|w| format!("{}: {w}", at(dom, &fr.z, &[], None)))) {
        Some(w) => PropertyCheck { holds: false, witness: w },
        None => PropertyCheck { holds: true, witness: String::new() },
    }
}

fn first_alpha(dom: &Domain, frames: &[QFrame], mut f: impl FnMut(&QFrame, &Relation) -> Option<String>) -> PropertyCheck {
    let n = dom.size();
    let k = frames[0].k();
    let alphas: Vec<Vec<Elem>> = all_tuples(n, k).collect();
    let w = frames.iter().find_map(|fr| {
        alphas
            .iter()
            .find_map(|a| f(fr, &fr.alphas[alpha_index(n, a)]).map(|w| format!("{}: {w}", at(dom, &fr.z, &[], Some(a)))))
    });
    match w {
        Some(w) => PropertyCheck { holds: false, witness: w },
        None => PropertyCheck { holds: true, witness: String::new() },
    }
}

fn some_z(dom: &Domain, frames: &[QFrame], what: &str, mut f: impl FnMut(&QFrame) -> bool) -> PropertyCheck {
    match frames.iter().find(|fr| f(fr)) {
        Some(fr) => PropertyCheck { holds: true, witness: format!("at {}", at(dom, &fr.z, &[], None)) },
        None => PropertyCheck { holds: false, witness: format!("no z with {what}") },
    }
}

fn fail_if(bad: bool, msg: &str) -> Option<String> {
    bad.then(|| msg.to_string())
}

/// Checks one property literally over every z (and α where quantified).
pub fn check_quadruple_property(q: &Quadruple, p: Property) -> Result<PropertyCheck> {
    let frames = q.frames();
    let guard_all = q.r.q_forall()?;
    let guard_allall = q.r.q_forallforall()?;
    for fr in &frames {
        if !guard_allall.slice(&fr.z, &[], &[]).is_subset(&guard_all.slice(&fr.z, &[], &[])) {
            return Err(Error::Internal(format!("R^∀∀ ⊄ R^∀ at {}", at(q.domain(), &fr.z, &[], None))));
        }
    }
    Ok(check_on_frames(q.domain(), &frames, p))
}

pub(crate) fn check_on_frames(dom: &Domain, frames: &[QFrame], p: Property) -> PropertyCheck {
    let uc = |u: &Relation, s: &Relation| unary_compose(u, s).expect("shapes");
    let ru = |s: &Relation, u: &Relation| rel_then_unary(s, u).expect("shapes");
    match p {
        Property::Kappa => {
            if frames[0].k() != dom.size() {
                return PropertyCheck {
                    holds: false,
                    witness: format!("α-width {} ≠ |A| = {}", frames[0].k(), dom.size()),
                };
            }
            first_alpha(dom, frames, |fr, ra| fail_if(!fr.kappa().expect("k = |A|").is_subset(ra), "R^κ ⊄ R^α"))
        }
        Property::DPlus => first_z(dom, frames, |fr| fail_if(uc(&fr.d, &fr.forallforall()) != fr.d, "D+R^∀∀ ≠ D")),
        Property::Un => first_z(dom, frames, |fr| {
            fail_if(
                fr.b.is_empty() || fr.c.is_empty() || !fr.b.is_subset(&fr.d) || !fr.c.is_subset(&fr.d),
                "B, C must be nonempty subsets of D",
            )
        }),
        Property::Bc => first_z(dom, frames, |fr| {
            fail_if(fr.forall().is_disjoint(&Relation::product(&fr.b, &fr.c)), "R^∀ ∩ (B×C) = ∅")
        }),
        Property::Empty => some_z(dom, frames, "B ∩ C = ∅", |fr| fr.b.is_disjoint(&fr.c)),
        Property::BPlus => first_z(dom, frames, |fr| fail_if(uc(&fr.b, &fr.forallforall()) != fr.b, "B+R^∀∀ ≠ B")),
        Property::PlusC => first_z(dom, frames, |fr| fail_if(ru(&fr.forallforall(), &fr.c) != fr.c, "R^∀∀+C ≠ C")),
        Property::T => first_alpha(dom, frames, |_, ra| fail_if(compose(ra, ra).expect("binary") != *ra, "R^α+R^α ≠ R^α")),
        Property::Sd => first_alpha(dom, frames, |fr, ra| {
            fail_if(
                project(ra, &[0]).expect("binary") != fr.d || project(ra, &[1]).expect("binary") != fr.d,
                "a projection of R^α differs from D",
            )
        }),
        Property::R => first_alpha(dom, frames, |fr, ra| fail_if(!Relation::diagonal_on(&fr.d).is_subset(ra), "R^α is not reflexive on D")),
        Property::Bd => first_z(dom, frames, |fr| fail_if(uc(&fr.b, &fr.forall()) != fr.d, "B+R^∀ ≠ D")),
        Property::Cd => first_z(dom, frames, |fr| fail_if(ru(&fr.forall(), &fr.c) != fr.d, "R^∀+C ≠ D")),
        Property::CPlus => some_z(dom, frames, "C+R^∀∀ = C", |fr| uc(&fr.c, &fr.forallforall()) == fr.c),
        Property::S => first_alpha(dom, frames, |_, ra| fail_if(!ra.is_symmetric(), "R^α is not symmetric")),
    }
}

/// The subset of `props` the quadruple satisfies.
pub fn holding_properties(q: &Quadruple, props: &[Property]) -> Result<Vec<Property>> {
    let mut out = Vec::new();
    for &p in props {
        if check_quadruple_property(q, p)?.holds {
            out.push(p);
        }
    }
    Ok(out)
}
