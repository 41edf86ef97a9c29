use std::fmt;
use std::str::FromStr;

use super::common::{alpha_index, at, bundle_zlen, check_sig, is_class, same_domain};
use crate::error::{invalid, Error, Result};
use crate::relcore::{all_tuples, project, rel_then_unary, unary_compose, Domain, Elem, ParamRelation, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MightyKind {
    I,
    IPrime,
    II,
    III,
    IV,
    V,
    VPrime,
}

impl MightyKind {
    pub const ALL: [MightyKind; 7] = [
        MightyKind::I,
        MightyKind::IPrime,
        MightyKind::II,
        MightyKind::III,
        MightyKind::IV,
        MightyKind::V,
        MightyKind::VPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MightyKind::I => "I",
            MightyKind::IPrime => "I'",
            MightyKind::II => "II",
            MightyKind::III => "III",
            MightyKind::IV => "IV",
            MightyKind::V => "V",
            MightyKind::VPrime => "V'",
        }
    }

    pub fn condition_count(self) -> usize {
        match self {
            MightyKind::I => 6,
            MightyKind::IPrime => 7,
            MightyKind::II | MightyKind::III | MightyKind::IV | MightyKind::VPrime => 5,
            MightyKind::V => 3,
        }
    }

    /// Relation roles in the order the CLI reads them.
    pub fn roles(self) -> &'static [&'static str] {
        match self {
            MightyKind::I | MightyKind::IPrime => &["Q", "D", "B", "C", "Delta"],
            MightyKind::II | MightyKind::IV => &["Q", "D", "B", "C"],
            MightyKind::III => &["Q", "B", "C"],
            MightyKind::V => &["Q", "D"],
            MightyKind::VPrime => &["Q", "D", "Delta"],
        }
    }
}

impl fmt::Display for MightyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MightyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<MightyKind> {
        let t = s.trim().to_ascii_uppercase().replace("PRIME", "'").replace('′', "'");
        let t = t.trim_start_matches("KIND").trim_start_matches('-').trim();
        MightyKind::ALL
            .into_iter()
            .find(|k| k.name() == t || k.name().replace('\'', "P") == t)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown mighty tuple kind {s:?}")))
    }
}

/// A bundle of parameterized relations claimed to form a mighty tuple of
/// the given kind. Roles a kind does not use are `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MightyTuple {
    pub kind: MightyKind,
    pub q: ParamRelation,
    pub d: Option<ParamRelation>,
    pub b: Option<ParamRelation>,
    pub c: Option<ParamRelation>,
    pub delta: Option<ParamRelation>,
    pub note: String,
}

impl MightyTuple {
    pub fn kind_i(q: ParamRelation, d: ParamRelation, b: ParamRelation, c: ParamRelation, delta: ParamRelation) -> Result<MightyTuple> {
        MightyTuple::assemble(MightyKind::I, q, Some(d), Some(b), Some(c), Some(delta))
    }

    pub fn kind_i_prime(
        q: ParamRelation,
        d: ParamRelation,
        b: ParamRelation,
        c: ParamRelation,
        delta: ParamRelation,
    ) -> Result<MightyTuple> {
        MightyTuple::assemble(MightyKind::IPrime, q, Some(d), Some(b), Some(c), Some(delta))
    }

    pub fn kind_ii(q: ParamRelation, d: ParamRelation, b: ParamRelation, c: ParamRelation) -> Result<MightyTuple> {
        MightyTuple::assemble(MightyKind::II, q, Some(d), Some(b), Some(c), None)
    }

    pub fn kind_iii(q: ParamRelation, b: ParamRelation, c: ParamRelation) -> Result<MightyTuple> {
        MightyTuple::assemble(MightyKind::III, q, None, Some(b), Some(c), None)
    }

    pub fn kind_iv(q: ParamRelation, d: ParamRelation, b: ParamRelation, c: ParamRelation) -> Result<MightyTuple> {
        MightyTuple::assemble(MightyKind::IV, q, Some(d), Some(b), Some(c), None)
    }

    pub fn kind_v(q: ParamRelation, d: ParamRelation) -> Result<MightyTuple> {
        MightyTuple::assemble(MightyKind::V, q, Some(d), None, None, None)
    }

    pub fn kind_v_prime(q: ParamRelation, d: ParamRelation, delta: ParamRelation) -> Result<MightyTuple> {
        MightyTuple::assemble(MightyKind::VPrime, q, Some(d), None, None, Some(delta))
    }

    /// Builds a tuple of `kind` from relations listed in `kind.roles()` order.
    pub fn from_roles(kind: MightyKind, rels: Vec<ParamRelation>) -> Result<MightyTuple> {
        if rels.len() != kind.roles().len() {
            return invalid(format!(
                "kind {kind} takes {} relations ({}), got {}",
                kind.roles().len(),
                kind.roles().join(", "),
                rels.len()
            ));
        }
        let mut it = rels.into_iter();
        let q = it.next().expect("Q");
        match kind {
            MightyKind::I | MightyKind::IPrime => {
                let (d, b, c, delta) = (it.next(), it.next(), it.next(), it.next());
                MightyTuple::assemble(kind, q, d, b, c, delta)
            }
            MightyKind::II | MightyKind::IV => {
                let (d, b, c) = (it.next(), it.next(), it.next());
                MightyTuple::assemble(kind, q, d, b, c, None)
            }
            MightyKind::III => {
                let (b, c) = (it.next(), it.next());
                MightyTuple::assemble(kind, q, None, b, c, None)
            }
            MightyKind::V => MightyTuple::assemble(kind, q, it.next(), None, None, None),
            MightyKind::VPrime => {
                let (d, delta) = (it.next(), it.next());
                MightyTuple::assemble(kind, q, d, None, None, delta)
            }
        }
    }

    fn assemble(
        kind: MightyKind,
        q: ParamRelation,
        d: Option<ParamRelation>,
        b: Option<ParamRelation>,
        c: Option<ParamRelation>,
        delta: Option<ParamRelation>,
    ) -> Result<MightyTuple> {
        let t = MightyTuple {
            kind,
            q,
            d,
            b,
            c,
            delta,
            note: String::new(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> MightyTuple {
        self.note = note.into();
        self
    }

    pub fn domain(&self) -> &Domain {
        self.q.domain()
    }

    fn members(&self) -> Vec<&ParamRelation> {
        [Some(&self.q), self.d.as_ref(), self.b.as_ref(), self.c.as_ref(), self.delta.as_ref()]
            .into_iter()
            .flatten()
            .collect()
    }

    /// Signatures must match the kind's definition.
    pub fn validate(&self) -> Result<()> {
        same_domain(&self.members())?;
        let n = self.domain().size();
        let k = self.q.sig().delta;
        let need = |r: &Option<ParamRelation>, name: &str, used: bool| -> Result<()> {
            match (r.is_some(), used) {
                (true, false) => invalid(format!("kind {} has no {name}", self.kind)),
                (false, true) => invalid(format!("kind {} needs {name}", self.kind)),
                _ => Ok(()),
            }
        };
        let roles = self.kind.roles();
        need(&self.d, "D", roles.contains(&"D"))?;
        need(&self.b, "B", roles.contains(&"B"))?;
        need(&self.c, "C", roles.contains(&"C"))?;
        need(&self.delta, "Delta", roles.contains(&"Delta"))?;
        let width = match self.kind {
            MightyKind::IPrime | MightyKind::VPrime => Some(n),
            _ => None,
        };
        let with_delta = matches!(self.kind, MightyKind::I | MightyKind::IPrime | MightyKind::VPrime);
        if !with_delta && k != 0 {
            return invalid(format!("kind {} has no δ-parameter", self.kind));
        }
        check_sig(&self.q, "Q", k, width, 2)?;
        for (r, name) in [(&self.d, "D"), (&self.b, "B"), (&self.c, "C")] {
            if let Some(r) = r {
                let s = r.sig();
                if s.delta != k || s.alpha != 0 || s.value != 1 {
                    return invalid(format!("{name} must be a unary relation with δ-group {k} and no α-group"));
                }
            }
        }
        if let Some(dl) = &self.delta {
            let s = dl.sig();
            if s.delta != 0 || s.alpha != 0 || s.value != k {
                return invalid(format!("Delta must be a z-parameterized {k}-ary relation"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionCheck {
    pub index: usize,
    pub pass: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MightyReport {
    pub kind: MightyKind,
    pub conditions: Vec<ConditionCheck>,
}

impl MightyReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<usize> {
        self.conditions.iter().filter(|c| !c.pass).map(|c| c.index).collect()
    }

    pub fn condition(&self, i: usize) -> &ConditionCheck {
        &self.conditions[i - 1]
    }

    /// `cond<i> PASS|FAIL [witness]`, one line per condition.
    pub fn lines(&self) -> Vec<String> {
        self.conditions
            .iter()
            .map(|c| {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                if c.witness.is_empty() {
                    format!("cond{} {verdict}", c.index)
                } else {
                    format!("cond{} {verdict} {}", c.index, c.witness)
                }
            })
            .collect()
    }
}

/// Slices at one `(z, δ)`.
struct Frame {
    delta: Vec<Elem>,
    alphas: Vec<Relation>,
    forall: Relation,
    forallforall: Relation,
    d: Option<Relation>,
    b: Option<Relation>,
    c: Option<Relation>,
}

struct ZGroup {
    z: Vec<Elem>,
    /// False when Δ_z is empty.
    has_delta: bool,
    frames: Vec<Frame>,
}

fn groups(t: &MightyTuple) -> Result<Vec<ZGroup>> {
    let n = t.domain().size();
    let zlen = bundle_zlen(&t.members());
    let qa = t.q.q_forall()?;
    let qaa = t.q.q_forallforall()?;
    let mut out = Vec::new();
    for z in all_tuples(n, zlen) {
        let deltas: Vec<Vec<Elem>> = match &t.delta {
            Some(dl) => dl.slice(&z, &[], &[]).tuples(),
            None => vec![Vec::new()],
        };
        let mut frames = Vec::new();
        for delta in &deltas {
            let forall = qa.slice(&z, delta, &[]);
            let forallforall = qaa.slice(&z, delta, &[]);
            if !forallforall.is_subset(&forall) {
                return Err(Error::Internal(format!(
                    "Q^∀∀ ⊄ Q^∀ at {}",
                    at(t.domain(), &z, delta, None)
                )));
            }
            let sl = |r: &Option<ParamRelation>| r.as_ref().map(|r| r.slice(&z, delta, &[]));
            frames.push(Frame {
                delta: delta.clone(),
                alphas: all_tuples(n, t.q.sig().alpha).map(|a| t.q.slice(&z, delta, &a)).collect(),
                forall,
                forallforall,
                d: sl(&t.d),
                b: sl(&t.b),
                c: sl(&t.c),
            });
        }
        out.push(ZGroup {
            z,
            has_delta: !deltas.is_empty(),
            frames,
        });
    }
    Ok(out)
}

struct Checker<'a> {
    domain: &'a Domain,
    groups: Vec<ZGroup>,
    alpha_width: usize,
    out: Vec<ConditionCheck>,
}

impl<'a> Checker<'a> {
    fn push(&mut self, pass: bool, witness: String) {
        let index = self.out.len() + 1;
        self.out.push(ConditionCheck { index, pass, witness });
    }

    /// A condition over every z: fails at the first z where `f` reports a problem.
    fn every_z(&mut self, mut f: impl FnMut(&ZGroup) -> Option<String>) {
        let w = self.groups.iter().find_map(|g| f(g).map(|why| format!("{}: {why}", at(self.domain, &g.z, &[], None))));
        self.push(w.is_none(), w.unwrap_or_default());
    }

    /// A condition over every z and δ ∈ Δ_z.
    fn every_frame(&mut self, mut f: impl FnMut(&Frame) -> Option<String>) {
        let dom = self.domain;
        let w = self.groups.iter().find_map(|g| {
            g.frames
                .iter()
                .find_map(|fr| f(fr).map(|why| format!("{}: {why}", at(dom, &g.z, &fr.delta, None))))
        });
        self.push(w.is_none(), w.unwrap_or_default());
    }

    /// A condition over every z, δ ∈ Δ_z and α.
    fn every_alpha(&mut self, mut f: impl FnMut(&Frame, &Relation) -> Option<String>) {
        let dom = self.domain;
        let n = dom.size();
        let alphas: Vec<Vec<Elem>> = all_tuples(n, self.alpha_width).collect();
        let w = self.groups.iter().find_map(|g| {
            g.frames.iter().find_map(|fr| {
                alphas.iter().find_map(|a| {
                    f(fr, &fr.alphas[alpha_index(n, a)]).map(|why| format!("{}: {why}", at(dom, &g.z, &fr.delta, Some(a))))
                })
            })
        });
        self.push(w.is_none(), w.unwrap_or_default());
    }

    /// A condition asking for some z with `f` true for every δ ∈ Δ_z.
    fn some_z(&mut self, what: &str, mut f: impl FnMut(&Frame) -> bool) {
        let found = self.groups.iter().find(|g| g.frames.iter().all(&mut f)).map(|g| g.z.clone());
        match found {
            Some(z) => {
                let w = format!("at {}", at(self.domain, &z, &[], None));
                self.push(true, w);
            }
            None => self.push(false, format!("no z with {what}")),
        }
    }
}

fn why(ok: bool, msg: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(msg())
    }
}

fn show(r: &Relation) -> String {
    format!("{{{}}}", r.display())
}

/// Evaluates every condition of the tuple's kind by enumeration of all
/// parameters. Failing conditions carry a witnessing parameter choice.
pub fn check_mighty(t: &MightyTuple) -> Result<MightyReport> {
    t.validate()?;
    let domain = t.domain().clone();
    let n = domain.size();
    let mut ck = Checker {
        domain: &domain,
        groups: groups(t)?,
        alpha_width: t.q.sig().alpha,
        out: Vec::new(),
    };
    let b = |f: &Frame| f.b.clone().expect("B");
    let c = |f: &Frame| f.c.clone().expect("C");
    let d = |f: &Frame| f.d.clone().expect("D");
    let kappa = alpha_index(n, &domain.kappa());
    match t.kind {
        MightyKind::I | MightyKind::IPrime => {
            ck.every_z(|g| why(g.has_delta, || "Δ is empty".into()));
            ck.every_frame(|f| {
                let empty: Vec<&str> = [("B", b(f)), ("C", c(f)), ("D", d(f))]
                    .iter()
                    .filter(|(_, r)| r.is_empty())
                    .map(|(name, _)| *name)
                    .collect();
                why(empty.is_empty(), || format!("{} empty", empty.join(",")))
            });
            ck.every_alpha(|f, qa| why(qa.is_equivalence_on(&d(f)), || format!("Q^α = {} is not an equivalence on D = {}", show(qa), show(&d(f)))));
            ck.every_frame(|f| {
                let dd = d(f);
                why(f.forall == Relation::product(&dd, &dd), || format!("Q^∀ = {} ≠ D×D", show(&f.forall)))
            });
            ck.every_frame(|f| {
                let (bb, cc) = (b(f), c(f));
                why(is_class(&bb, &f.forallforall) && is_class(&cc, &f.forallforall), || {
                    format!("B = {} or C = {} is not a class of Q^∀∀ = {}", show(&bb), show(&cc), show(&f.forallforall))
                })
            });
            ck.some_z("B ≠ C for every δ", |f| b(f) != c(f));
            if t.kind == MightyKind::IPrime {
                ck.every_alpha(|f, qa| why(f.alphas[kappa].is_subset(qa), || "Q^κ ⊄ Q^α".into()));
            }
        }
        MightyKind::II => {
            ck.every_frame(|f| why(!b(f).is_empty() && !c(f).is_empty(), || "B or C empty".into()));
            ck.every_alpha(|f, qa| why(qa.is_equivalence_on(&d(f)), || format!("Q^α = {} is not an equivalence on D = {}", show(qa), show(&d(f)))));
            ck.every_frame(|f| {
                let ok = unary_compose(&b(f), &f.forallforall).ok() == Some(b(f))
                    && unary_compose(&c(f), &f.forallforall).ok() == Some(c(f));
                why(ok, || "B+Q^∀∀ ≠ B or C+Q^∀∀ ≠ C".into())
            });
            ck.every_frame(|f| {
                let ok = unary_compose(&b(f), &f.forall).ok() == Some(d(f))
                    && unary_compose(&c(f), &f.forall).ok() == Some(d(f));
                why(ok, || "B+Q^∀ or C+Q^∀ differs from D".into())
            });
            ck.some_z("B ∩ C = ∅", |f| b(f).is_disjoint(&c(f)));
        }
        MightyKind::III => {
            ck.every_frame(|f| why(!b(f).is_empty() && !c(f).is_empty(), || "B or C empty".into()));
            ck.every_frame(|f| why(unary_compose(&b(f), &f.forallforall).ok() == Some(b(f)), || "B+Q^∀∀ ≠ B".into()));
            ck.every_frame(|f| why(rel_then_unary(&f.forallforall, &c(f)).ok() == Some(c(f)), || "Q^∀∀+C ≠ C".into()));
            ck.every_frame(|f| {
                why(!f.forall.is_disjoint(&Relation::product(&b(f), &c(f))), || "Q^∀ ∩ (B×C) = ∅".into())
            });
            ck.some_z("B ∩ C = ∅", |f| b(f).is_disjoint(&c(f)));
        }
        MightyKind::IV => {
            ck.every_frame(|f| {
                let (bb, cc, dd) = (b(f), c(f), d(f));
                why(!bb.is_empty() && !cc.is_empty() && bb.is_subset(&dd) && cc.is_subset(&dd), || {
                    "B, C must be nonempty subsets of D".into()
                })
            });
            ck.every_frame(|f| why(unary_compose(&b(f), &f.forallforall).ok() == Some(b(f)), || "B+Q^∀∀ ≠ B".into()));
            ck.every_frame(|f| why(unary_compose(&b(f), &f.forall).ok() == Some(d(f)), || "B+Q^∀ ≠ D".into()));
            ck.every_frame(|f| why(unary_compose(&d(f), &f.forallforall).ok() == Some(d(f)), || "D+Q^∀∀ ≠ D".into()));
            ck.some_z("B ∩ C = ∅", |f| b(f).is_disjoint(&c(f)));
        }
        MightyKind::V => {
            if t.d.as_ref().expect("D").base().is_empty() {
                return Err(Error::Precondition("D must be nonempty".into()));
            }
            ck.every_frame(|f| why(Relation::diagonal_on(&d(f)).is_subset(&f.forall), || "Q^∀ is not reflexive on D".into()));
            ck.every_frame(|f| {
                let ok = project(&f.forallforall, &[0]).ok() == Some(d(f)) && project(&f.forallforall, &[1]).ok() == Some(d(f));
                why(ok, || format!("projections of Q^∀∀ = {} differ from D", show(&f.forallforall)))
            });
            ck.some_z("a loopless Q^∀∀", |f| !f.forallforall.has_loop());
        }
        MightyKind::VPrime => {
            ck.every_z(|g| why(g.has_delta, || "Δ is empty".into()));
            ck.every_alpha(|f, qa| why(f.alphas[kappa].is_subset(qa), || "Q^κ ⊄ Q^α".into()));
            ck.every_frame(|f| why(Relation::diagonal_on(&d(f)).is_subset(&f.forall), || "Q^∀ is not reflexive on D".into()));
            ck.every_alpha(|f, qa| {
                let ok = project(qa, &[0]).ok() == f.d && project(qa, &[1]).ok() == f.d;
                why(ok, || format!("projections of Q^α = {} differ from D", show(qa)))
            });
            ck.some_z("a loopless Q^∀∀ for every δ", |f| !f.forallforall.has_loop());
        }
    }
    Ok(MightyReport {
        kind: t.kind,
        conditions: ck.out,
    })
}
