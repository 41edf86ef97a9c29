use std::collections::VecDeque;

use super::gamma::gamma4;
use super::qbf::{MatrixKind, QBoolFormula};
use crate::error::{invalid, Result};
use crate::gamesolver::eval_formula_by_game;
use crate::qcspmodel::{Constraint, Library, QcFormula, QcspInstance, Quantifier};
use crate::relcore::{project, trans_sym_closure, ParamRelation, Relation, Signature};

/// A quantified variable of the gadget: a chain node or a control variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Node(usize),
    Control(usize),
}

/// `Υ_rel^{x_control}(from, to)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GadgetEdge {
    pub rel: usize,
    pub from: usize,
    pub to: usize,
    pub control: usize,
}

/// Chain nodes `y0 … y_last` joined by edges labelled with `Υ₀`/`Υ₁` and a
/// controlling variable of the source formula. The two ends stay free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetGraph {
    pub nodes: usize,
    /// Variables of the source formula, 1-based, as used by `Slot::Control`.
    pub controls: usize,
    pub edges: Vec<GadgetEdge>,
    /// Quantified slots, outermost first.
    pub schedule: Vec<(Quantifier, Slot)>,
    pub ends: (usize, usize),
}

impl GadgetGraph {
    /// Builds `Ψ₀` from a 3-DNF with at least one term: one chain segment
    /// per term carrying three parallel edges, then the quantifier steps from
    /// the innermost variable outwards. A universal `x_k` is quantified as
    /// is; an existential one becomes `∃y_{r_k} ∀x_k ∃y_{l_k}` and adds
    /// `Υ₀^{x_k}(y_{l_k−1}, y_{l_k})` and `Υ₁^{x_k}(y_{r_k+1}, y_{l_k})`.
    pub fn from_dnf(f: &QBoolFormula) -> Result<GadgetGraph> {
        if f.kind != MatrixKind::Dnf {
            return invalid("the gadget chain is built from a DNF");
        }
        f.validate()?;
        let s = f.items.len() as i64;
        if s == 0 {
            return invalid("the DNF needs at least one term");
        }
        let exist = f.prefix.iter().filter(|(q, _)| *q == Quantifier::Exists).count() as i64;
        // Chain index i is stored as node i + exist.
        let node = |i: i64| (i + exist) as usize;
        let mut edges = Vec::new();
        for (i, term) in f.items.iter().enumerate() {
            let i = i as i64 + 1;
            for &lit in term {
                edges.push(GadgetEdge {
                    rel: if lit > 0 { 0 } else { 1 },
                    from: node(i - 1),
                    to: node(i),
                    control: lit.unsigned_abs() as usize,
                });
            }
        }
        let mut schedule: VecDeque<(Quantifier, Slot)> = (1..s).map(|i| (Quantifier::Exists, Slot::Node(node(i)))).collect();
        let (mut l, mut r) = (0i64, s);
        for &(q, v) in f.prefix.iter().rev() {
            match q {
                Quantifier::Forall => schedule.push_front((Quantifier::Forall, Slot::Control(v))),
                Quantifier::Exists => {
                    schedule.push_front((Quantifier::Exists, Slot::Node(node(l))));
                    schedule.push_front((Quantifier::Forall, Slot::Control(v)));
                    schedule.push_front((Quantifier::Exists, Slot::Node(node(r))));
                    edges.push(GadgetEdge { rel: 0, from: node(l - 1), to: node(l), control: v });
                    edges.push(GadgetEdge { rel: 1, from: node(r + 1), to: node(l), control: v });
                    l -= 1;
                    r += 1;
                }
            }
        }
        Ok(GadgetGraph {
            nodes: (s + 2 * exist + 1) as usize,
            controls: f.nvars,
            edges,
            schedule: schedule.into(),
            ends: (node(l), node(r)),
        })
    }

    pub fn node_name(i: usize) -> String {
        format!("y{i}")
    }

    /// Name of coordinate `j` of the control tuple `x_v`; plain `x<v>` when
    /// controls are single values.
    pub fn control_name(v: usize, j: usize, width: usize) -> String {
        if width == 1 {
            format!("x{v}")
        } else {
            format!("x{v}_{j}")
        }
    }

    /// `𝒬^Φ` over relation symbols `U0`, `U1` of arity `width + 2`, α first.
    pub fn formula(&self, width: usize) -> QcFormula {
        let mut f = QcFormula::new([Self::node_name(self.ends.0), Self::node_name(self.ends.1)]);
        for &(q, slot) in &self.schedule {
            match slot {
                Slot::Node(i) => f.quantified.push((q, Self::node_name(i))),
                Slot::Control(v) => {
                    for j in 0..width {
                        f.quantified.push((q, Self::control_name(v, j, width)));
                    }
                }
            }
        }
        for e in &self.edges {
            let mut vars: Vec<String> = (0..width).map(|j| Self::control_name(e.control, j, width)).collect();
            vars.push(Self::node_name(e.from));
            vars.push(Self::node_name(e.to));
            f = f.atom(format!("U{}", e.rel), vars);
        }
        f
    }
}

/// The Γ₄ instance for the complement of a 3-CNF sentence: the gadget chain of
/// its negation with ends pinned to `+` and `−`. It is true iff the CNF
/// sentence is false. A CNF without clauses maps to a sentence whose chain
/// cannot be built; its complement is false, encoded as `plus(y) ∧ minus(y)`.
pub fn encode_q3cnf_complement(f: &QBoolFormula) -> Result<QcspInstance> {
    if f.kind != MatrixKind::Cnf {
        return invalid("encode_q3cnf_complement takes a CNF");
    }
    f.validate()?;
    let lang = gamma4();
    if f.items.is_empty() {
        return QcspInstance::new(
            lang.domain,
            lang.library,
            vec![(Quantifier::Exists, "y0".into())],
            vec![Constraint::new("plus", ["y0"]), Constraint::new("minus", ["y0"])],
        );
    }
    let g = GadgetGraph::from_dnf(&f.negated())?;
    let name = GadgetGraph::node_name;
    let mut prefix = vec![(Quantifier::Exists, name(g.ends.0)), (Quantifier::Exists, name(g.ends.1))];
    for &(q, slot) in &g.schedule {
        prefix.push((
            q,
            match slot {
                Slot::Node(i) => name(i),
                Slot::Control(v) => GadgetGraph::control_name(v, 0, 1),
            },
        ));
    }
    let mut constraints = vec![Constraint::new("plus", [name(g.ends.0)]), Constraint::new("minus", [name(g.ends.1)])];
    for e in &g.edges {
        constraints.push(Constraint::new(
            format!("R{}", e.rel),
            [name(e.from), name(e.to), GadgetGraph::control_name(e.control, 0, 1)],
        ));
    }
    QcspInstance::new(lang.domain, lang.library, prefix, constraints)
}

fn check_operand(r: &ParamRelation, which: &str) -> Result<usize> {
    let sig = r.sig();
    if sig.z != 0 || sig.delta != 0 || sig.value != 2 || sig.alpha == 0 {
        return invalid(format!("{which} must be an α-parameterized binary relation (signature 0,0,m,2 with m ≥ 1)"));
    }
    Ok(sig.alpha)
}

/// `σ = 𝒬^Φ(R₀,R₁)` before closure.
pub fn q_phi_relation(f: &QBoolFormula, r0: &ParamRelation, r1: &ParamRelation) -> Result<Relation> {
    let m = check_operand(r0, "r0")?;
    if check_operand(r1, "r1")? != m || r0.sig() != r1.sig() {
        return invalid("r0 and r1 must share their α-signature");
    }
    if !r0.domain().same_size(r1.domain()) {
        return invalid("r0 and r1 live over different domains");
    }
    let g = GadgetGraph::from_dnf(f)?;
    let mut lib = Library::new();
    lib.insert("U0".into(), r0.base().clone());
    lib.insert("U1".into(), r1.base().clone());
    eval_formula_by_game(&g.formula(m), &lib, r0.domain())
}

/// `𝒯^Φ(R₀,R₁)`: the transitive symmetric closure of `𝒬^Φ(R₀,R₁)`.
pub fn q_phi_operator(f: &QBoolFormula, r0: &ParamRelation, r1: &ParamRelation) -> Result<Relation> {
    let sigma = q_phi_relation(f, r0, r1)?;
    let support = project(&sigma, &[0])?.union(&project(&sigma, &[1])?);
    trans_sym_closure(&sigma, &support)
}

/// Signature shared by the operator's operands with α-width `m`.
pub fn operand_signature(m: usize) -> Signature {
    Signature::new(0, 0, m, 2)
}
