use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::common::kappa_expand_slices;
use super::quadruple::{check_on_frames, check_quadruple_property, holding_properties, Property, QFrame, Quadruple, PROPS_II, PROPS_III, PROPS_IV, PROPS_J};
use crate::error::{Error, Result};
use crate::relcore::{compose, compose_inv, factorial_exponent, rel_then_unary, repeat, unary_compose, unary_compose_inv, Relation};

/// One step of the quadruple calculus: a hypothesis set, an explicit
/// construction, and the property set the result is guaranteed to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    AddKappa,
    TransitiveIII,
    TransitiveIV,
    PlusCIV,
    AddSdr,
    ReduceDBRight,
    ReduceDCLeft,
    ReduceDCRight,
    IncreaseC,
    MakeSymmetricOne,
    MakeSymmetricTwo,
}

/// A hypothesis or conclusion item: a listed property, its negation, or one
/// of the statements about `C + R^κ` used by the J-claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Requirement {
    Has(Property),
    Lacks(Property),
    /// `(C + R^κ) ∩ B ≠ ∅` for every z.
    KappaCMeetsB,
    /// `(C + R^κ) ∩ B = ∅` and `C + R^κ ≠ C` at one z.
    KappaCMissesB,
    /// `C + R^∀∀ = C` and `B ∩ C = ∅` at one z.
    CPlusDisjoint,
    /// `C + R^κ ≠ D` for some z.
    KappaCShortOfD,
    /// `C + R^κ = D` for every z.
    KappaCIsD,
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::Has(p) => write!(f, "({p})"),
            Requirement::Lacks(p) => write!(f, "¬({p})"),
            Requirement::KappaCMeetsB => f.write_str("∀z (C+R^κ)∩B≠∅"),
            Requirement::KappaCMissesB => f.write_str("∃z (C+R^κ)∩B=∅ ∧ C+R^κ≠C"),
            Requirement::CPlusDisjoint => f.write_str("∃z C+R^∀∀=C ∧ B∩C=∅"),
            Requirement::KappaCShortOfD => f.write_str("∃z C+R^κ≠D"),
            Requirement::KappaCIsD => f.write_str("∀z C+R^κ=D"),
        }
    }
}

/// Required movement of `Σ_z|D_z|` and `Σ_z|C_z|` (None: unconstrained).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureEffect {
    pub d: Option<Ordering>,
    pub c: Option<Ordering>,
}

fn has(ps: &[Property]) -> Vec<Requirement> {
    ps.iter().map(|&p| Requirement::Has(p)).collect()
}

fn with(base: &[Property], extra: &[Property]) -> Vec<Property> {
    let mut v = base.to_vec();
    for p in extra {
        if !v.contains(p) {
            v.push(*p);
        }
    }
    v
}

impl Claim {
    pub const ALL: [Claim; 11] = [
        Claim::AddKappa,
        Claim::TransitiveIII,
        Claim::TransitiveIV,
        Claim::PlusCIV,
        Claim::AddSdr,
        Claim::ReduceDBRight,
        Claim::ReduceDCLeft,
        Claim::ReduceDCRight,
        Claim::IncreaseC,
        Claim::MakeSymmetricOne,
        Claim::MakeSymmetricTwo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::AddKappa => "add-kappa",
            Claim::TransitiveIII => "transitive-iii",
            Claim::TransitiveIV => "transitive-iv",
            Claim::PlusCIV => "plus-c-iv",
            Claim::AddSdr => "add-sdr",
            Claim::ReduceDBRight => "reduce-d-b-right",
            Claim::ReduceDCLeft => "reduce-d-c-left",
            Claim::ReduceDCRight => "reduce-d-c-right",
            Claim::IncreaseC => "increase-c",
            Claim::MakeSymmetricOne => "make-symmetric-one",
            Claim::MakeSymmetricTwo => "make-symmetric-two",
        }
    }

    pub fn hypothesis(self) -> Vec<Requirement> {
        use Property::*;
        match self {
            Claim::AddKappa => Vec::new(),
            Claim::TransitiveIII => has(&with(&PROPS_III, &[Kappa])),
            Claim::TransitiveIV => has(&with(&PROPS_IV, &[Kappa])),
            Claim::PlusCIV => has(&with(&PROPS_IV, &[Kappa, T])),
            Claim::AddSdr => has(&with(&PROPS_III, &[Kappa, T])),
            Claim::ReduceDBRight => {
                let mut v = has(&PROPS_J);
                v.push(Requirement::Lacks(Bd));
                v
            }
            Claim::ReduceDCLeft => {
                let mut v = has(&PROPS_J);
                v.push(Requirement::Lacks(Cd));
                v
            }
            Claim::ReduceDCRight => {
                let mut v = has(&with(&PROPS_J, &[Bd, Cd]));
                v.push(Requirement::KappaCMeetsB);
                v.push(Requirement::KappaCShortOfD);
                v
            }
            Claim::IncreaseC => {
                let mut v = has(&PROPS_J);
                v.push(Requirement::KappaCMissesB);
                v
            }
            Claim::MakeSymmetricOne => {
                let mut v = has(&with(&PROPS_J, &[Bd, Cd]));
                v.push(Requirement::KappaCIsD);
                v
            }
            Claim::MakeSymmetricTwo => {
                let mut v = has(&with(&PROPS_J, &[Bd, Cd]));
                v.push(Requirement::CPlusDisjoint);
                v
            }
        }
    }

    /// Properties guaranteed after the claim. `held` lists the properties
    /// the input satisfied; only the add-κ claim depends on it.
    pub fn conclusion(self, held: &[Property]) -> Vec<Property> {
        use Property::*;
        match self {
            Claim::AddKappa => {
                let mut v: Vec<Property> = held
                    .iter()
                    .copied()
                    .filter(|p| PROPS_III.contains(p) || PROPS_IV.contains(p))
                    .collect();
                v.push(Kappa);
                v
            }
            Claim::TransitiveIII => with(&PROPS_III, &[Kappa, T]),
            Claim::TransitiveIV => with(&PROPS_IV, &[Kappa, T]),
            Claim::PlusCIV => with(&PROPS_IV, &[Kappa, T, PlusC]),
            Claim::AddSdr => with(&PROPS_III, &[Kappa, T, DPlus, R, Sd]),
            Claim::ReduceDBRight => with(&PROPS_J, &[Bd]),
            Claim::ReduceDCLeft => with(&PROPS_J, &[Cd]),
            Claim::ReduceDCRight | Claim::IncreaseC => PROPS_J.to_vec(),
            Claim::MakeSymmetricOne => with(&PROPS_J, &[CPlus, S]),
            Claim::MakeSymmetricTwo => with(&PROPS_J, &[Bd, Cd, CPlus, S]),
        }
    }

    pub fn measure(self) -> MeasureEffect {
        use Ordering::*;
        match self {
            Claim::ReduceDBRight | Claim::ReduceDCLeft | Claim::ReduceDCRight => MeasureEffect { d: Some(Less), c: None },
            Claim::IncreaseC => MeasureEffect {
                d: Some(Equal),
                c: Some(Greater),
            },
            Claim::MakeSymmetricOne => MeasureEffect { d: Some(Equal), c: None },
            _ => MeasureEffect { d: None, c: None },
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Claim> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown claim {s:?}")))
    }
}

fn kappa_of(fr: &QFrame) -> Relation {
    fr.kappa().expect("κ-width checked by the hypothesis")
}

/// Truth of one requirement on a quadruple, with a witness when it fails.
pub fn check_requirement(q: &Quadruple, r: Requirement) -> Result<(bool, String)> {
    match r {
        Requirement::Has(p) => {
            let c = check_quadruple_property(q, p)?;
            Ok((c.holds, c.witness))
        }
        Requirement::Lacks(p) => {
            let c = check_quadruple_property(q, p)?;
            Ok((!c.holds, if c.holds { format!("({p}) holds") } else { String::new() }))
        }
        _ => {
            if q.k() != q.domain().size() {
                return Ok((false, "R^κ undefined: α-width ≠ |A|".into()));
            }
            let frames = q.frames();
            let ck = |fr: &QFrame| unary_compose(&fr.c, &kappa_of(fr)).expect("shapes");
            let ok = match r {
                Requirement::KappaCMeetsB => frames.iter().all(|fr| !ck(fr).is_disjoint(&fr.b)),
                Requirement::KappaCMissesB => frames.iter().any(|fr| {
                    let c0 = ck(fr);
                    c0.is_disjoint(&fr.b) && c0 != fr.c
                }),
                Requirement::CPlusDisjoint => frames
                    .iter()
                    .any(|fr| unary_compose(&fr.c, &fr.forallforall()).expect("shapes") == fr.c && fr.b.is_disjoint(&fr.c)),
                Requirement::KappaCShortOfD => frames.iter().any(|fr| ck(fr) != fr.d),
                Requirement::KappaCIsD => frames.iter().all(|fr| ck(fr) == fr.d),
                _ => unreachable!(),
            };
            Ok((ok, if ok { String::new() } else { format!("{r} fails") }))
        }
    }
}

fn restrict(fr: &QFrame, d0: &Relation) -> Vec<Relation> {
    let sq = Relation::product(d0, d0);
    fr.alphas.iter().map(|a| a.intersect(&sq)).collect()
}

fn transform(q: &Quadruple, claim: Claim) -> Result<Quadruple> {
    let dom = q.domain().clone();
    let n = dom.size();
    let frames = q.frames();
    let uc = |u: &Relation, s: &Relation| unary_compose(u, s).expect("shapes");
    let out: Vec<QFrame> = match claim {
        Claim::AddKappa => frames
            .iter()
            .map(|fr| QFrame {
                k: n,
                alphas: kappa_expand_slices(&dom, fr.k, &fr.alphas),
                ..fr.clone()
            })
            .collect(),
        Claim::TransitiveIII | Claim::TransitiveIV => {
            let nn = factorial_exponent(n);
            frames
                .iter()
                .map(|fr| {
                    Ok(QFrame {
                        alphas: fr.alphas.iter().map(|a| repeat(a, nn)).collect::<Result<_>>()?,
                        ..fr.clone()
                    })
                })
                .collect::<Result<_>>()?
        }
        Claim::PlusCIV => frames
            .iter()
            .map(|fr| QFrame {
                c: rel_then_unary(&kappa_of(fr), &fr.c).expect("shapes").intersect(&fr.d),
                alphas: restrict(fr, &fr.d),
                ..fr.clone()
            })
            .collect(),
        Claim::AddSdr => frames
            .iter()
            .map(|fr| {
                let rk = kappa_of(fr);
                let d0 = Relation::from_fn(&dom, 1, |t| rk.contains(&[t[0], t[0]])).expect("unary");
                QFrame {
                    b: fr.b.intersect(&d0),
                    c: fr.c.intersect(&d0),
                    alphas: restrict(fr, &d0),
                    d: d0,
                    ..fr.clone()
                }
            })
            .collect(),
        Claim::ReduceDBRight | Claim::ReduceDCLeft | Claim::ReduceDCRight => frames
            .iter()
            .map(|fr| {
                let d0 = match claim {
                    Claim::ReduceDBRight => uc(&fr.b, &fr.forall()),
                    Claim::ReduceDCLeft => rel_then_unary(&fr.forall(), &fr.c).expect("shapes"),
                    _ => uc(&fr.c, &kappa_of(fr)),
                };
                QFrame {
                    b: fr.b.intersect(&d0),
                    c: fr.c.intersect(&d0),
                    alphas: restrict(fr, &d0),
                    d: d0,
                    ..fr.clone()
                }
            })
            .collect(),
        Claim::IncreaseC => frames
            .iter()
            .map(|fr| {
                let rk = kappa_of(fr);
                let c0 = uc(&fr.c, &rk);
                QFrame {
                    c: rel_then_unary(&rk, &c0).expect("shapes"),
                    ..fr.clone()
                }
            })
            .collect(),
        Claim::MakeSymmetricOne => frames
            .iter()
            .map(|fr| QFrame {
                alphas: fr.alphas.iter().map(|a| a.intersect(&a.converse())).collect(),
                ..fr.clone()
            })
            .collect(),
        Claim::MakeSymmetricTwo => frames
            .iter()
            .map(|fr| {
                let rk = kappa_of(fr);
                let mut b = fr.b.clone();
                let mut alphas = fr.alphas.clone();
                loop {
                    let nb = uc(&unary_compose_inv(&b, &rk)?, &rk);
                    let na = alphas
                        .iter()
                        .zip(&fr.alphas)
                        .map(|(ri, r)| compose(&compose_inv(ri, r)?, r))
                        .collect::<Result<Vec<_>>>()?;
                    if nb == b && na == alphas {
                        break;
                    }
                    b = nb;
                    alphas = na;
                }
                Ok(QFrame { b, alphas, ..fr.clone() })
            })
            .collect::<Result<_>>()?,
    };
    Quadruple::from_frames(&dom, q.zlen(), &out)
}

/// Applies a claim: checks its hypothesis, runs the construction from the
/// claim's proof, then re-verifies the conclusion and the measure movement.
pub fn apply_claim(q: &Quadruple, claim: Claim) -> Result<Quadruple> {
    for r in claim.hypothesis() {
        let (ok, w) = check_requirement(q, r)?;
        if !ok {
            let w = if w.is_empty() { String::new() } else { format!(" ({w})") };
            return Err(Error::Precondition(format!("{claim} needs {r}{w}")));
        }
    }
    let held = if claim == Claim::AddKappa {
        holding_properties(q, &Property::ALL)?
    } else {
        Vec::new()
    };
    if claim == Claim::AddKappa && q.k() == 0 {
        return Err(Error::Precondition("add-kappa needs an α-group".into()));
    }
    let out = transform(q, claim)?;
    let frames = out.frames();
    for p in claim.conclusion(&held) {
        let c = check_on_frames(out.domain(), &frames, p);
        if !c.holds {
            return Err(Error::Internal(format!("{claim} produced a quadruple without ({p}): {}", c.witness)));
        }
    }
    let m = claim.measure();
    let moves = [(m.d, q.sum_d(), out.sum_d(), "Σ|D|"), (m.c, q.sum_c(), out.sum_c(), "Σ|C|")];
    for (want, before, after, what) in moves {
        if let Some(o) = want {
            if after.cmp(&before) != o {
                return Err(Error::Internal(format!("{claim} moved {what} from {before} to {after}")));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub claim: Claim,
    pub sum_d: usize,
    pub sum_c: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub quadruple: Quadruple,
    pub steps: Vec<DerivationStep>,
}

/// All of `II ∪ {κ}`.
pub fn props_ii_kappa() -> Vec<Property> {
    with(&PROPS_II, &[Property::Kappa])
}

fn satisfies(q: &Quadruple, props: &[Property]) -> Result<bool> {
    let frames = q.frames();
    Ok(props.iter().all(|&p| check_on_frames(q.domain(), &frames, p).holds))
}

/// Runs the claims from a quadruple satisfying the properties of a mighty
/// tuple III until it satisfies `II ∪ {κ}`. After the three setup claims,
/// each round either lowers `Σ|D|`, raises `Σ|C|` at fixed `Σ|D|`, or
/// symmetrizes once; anything else is reported as an internal error.
pub fn derive_ii_from_iii(q: &Quadruple) -> Result<Derivation> {
    for p in PROPS_III {
        let c = check_quadruple_property(q, p)?;
        if !c.holds {
            return Err(Error::Precondition(format!("input lacks ({p}): {}", c.witness)));
        }
    }
    let target = props_ii_kappa();
    let mut steps = Vec::new();
    let mut cur = q.clone();
    if satisfies(&cur, &target)? {
        return Ok(Derivation { quadruple: cur, steps });
    }
    let run = |cur: &Quadruple, claim: Claim, steps: &mut Vec<DerivationStep>| -> Result<Quadruple> {
        let next = apply_claim(cur, claim)?;
        steps.push(DerivationStep {
            claim,
            sum_d: next.sum_d(),
            sum_c: next.sum_c(),
        });
        Ok(next)
    };
    for claim in [Claim::AddKappa, Claim::TransitiveIII, Claim::AddSdr] {
        cur = run(&cur, claim, &mut steps)?;
    }
    let mut last_idle = false;
    let (mut best_d, mut best_c) = (cur.sum_d(), cur.sum_c());
    loop {
        if satisfies(&cur, &target)? {
            return Ok(Derivation { quadruple: cur, steps });
        }
        let holds = |p| check_quadruple_property(&cur, p).map(|c| c.holds);
        let claim = if !holds(Property::Bd)? {
            Claim::ReduceDBRight
        } else if !holds(Property::Cd)? {
            Claim::ReduceDCLeft
        } else if check_requirement(&cur, Requirement::CPlusDisjoint)?.0 {
            Claim::MakeSymmetricTwo
        } else if check_requirement(&cur, Requirement::KappaCMissesB)?.0 {
            Claim::IncreaseC
        } else if check_requirement(&cur, Requirement::KappaCShortOfD)?.0 {
            Claim::ReduceDCRight
        } else {
            Claim::MakeSymmetricOne
        };
        cur = run(&cur, claim, &mut steps)?;
        let (d, c) = (cur.sum_d(), cur.sum_c());
        let progressed = d < best_d || (d == best_d && c > best_c);
        if progressed {
            last_idle = false;
            best_d = d;
            best_c = c;
        } else if claim == Claim::MakeSymmetricOne && !last_idle {
            last_idle = true;
        } else if claim != Claim::MakeSymmetricTwo {
            return Err(Error::Internal(format!(
                "derivation measure stalled after {claim} (Σ|D| = {d}, Σ|C| = {c})"
            )));
        }
    }
}

/// The setup claims for a mighty tuple IV: κ, transitivity, then `(+c)`.
/// The result satisfies every property of a mighty tuple III.
pub fn derive_iii_from_iv(q: &Quadruple) -> Result<Derivation> {
    let mut steps = Vec::new();
    let mut cur = q.clone();
    for claim in [Claim::AddKappa, Claim::TransitiveIV, Claim::PlusCIV] {
        cur = apply_claim(&cur, claim)?;
        steps.push(DerivationStep {
            claim,
            sum_d: cur.sum_d(),
            sum_c: cur.sum_c(),
        });
    }
    Ok(Derivation { quadruple: cur, steps })
}

/// True when `q` satisfies every property in `props`.
pub fn satisfies_all(q: &Quadruple, props: &[Property]) -> Result<bool> {
    satisfies(q, props)
}
