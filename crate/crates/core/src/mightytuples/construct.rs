use std::cmp::Reverse;

use super::claims::{props_ii_kappa, satisfies_all};
use super::common::{alpha_index, bundle_zlen, constant_indices, from_z_parts, intersect_all, kappa_expand_slices, odd_girth, stack_alpha};
use super::quadruple::Quadruple;
use super::tuple::{check_mighty, MightyKind, MightyTuple};
use crate::error::{invalid, Error, Result};
use crate::qcspmodel::{eval_qc_formula, Library, QcFormula};
use crate::relcore::{all_tuples, factorial_exponent, repeat, Elem, ParamRelation, Relation, Signature};

fn require_pass(t: &MightyTuple) -> Result<()> {
    let rep = check_mighty(t)?;
    if !rep.passed() {
        return Err(Error::Precondition(format!(
            "input is not a mighty tuple {}: {}",
            t.kind,
            rep.lines().into_iter().filter(|l| l.contains("FAIL")).collect::<Vec<_>>().join("; ")
        )));
    }
    Ok(())
}

fn verify_output(t: &MightyTuple) -> Result<()> {
    let rep = check_mighty(t)?;
    if !rep.passed() {
        return Err(Error::Internal(format!(
            "constructed tuple of kind {} fails: {}",
            t.kind,
            rep.lines().join("; ")
        )));
    }
    Ok(())
}

/// Applies `f` to the value slice at every `(z, δ, α)` and reassembles.
fn map_slices(p: &ParamRelation, zlen: usize, alpha: usize, mut f: impl FnMut(&[Elem], &[Elem], &[Relation]) -> Vec<Relation>) -> Result<ParamRelation> {
    let dom = p.domain();
    let n = dom.size();
    let s = p.sig();
    let parts = all_tuples(n, zlen)
        .map(|z| {
            let per_delta = all_tuples(n, s.delta)
                .map(|d| {
                    let slices: Vec<Relation> = all_tuples(n, s.alpha).map(|a| p.slice(&z, &d, &a)).collect();
                    stack_alpha(dom, alpha, &f(&z, &d, &slices))
                })
                .collect::<Result<Vec<_>>>()?;
            stack_alpha(dom, s.delta, &per_delta)
        })
        .collect::<Result<Vec<_>>>()?;
    from_z_parts(dom, Signature::new(zlen, s.delta, alpha, s.value), &parts)
}

/// Mighty tuple I → I′ and V → V′ by the `|A|`-fold α expansion
/// `R^{x₁…x_{|A|}} = ⋀_{i ∈ [|A|]^k} Q^{x_{i₁}…x_{i_k}}` (for V also
/// restricted to `D × D`, with `Δ = {Λ}`).
pub fn tuple_to_prime(t: &MightyTuple) -> Result<MightyTuple> {
    if !matches!(t.kind, MightyKind::I | MightyKind::V) {
        return invalid(format!("tuple_to_prime takes kind I or V, not {}", t.kind));
    }
    require_pass(t)?;
    let dom = t.domain().clone();
    let n = dom.size();
    let k = t.q.sig().alpha;
    crate::relcore::capacity::slots(n, t.q.sig().arity() - k + n, "primed relation")?;
    let zlen = bundle_zlen(&[&t.q, t.d.as_ref().expect("D")]);
    let d = t.d.clone().expect("D");
    let r = map_slices(&t.q, zlen, n, |z, delta, slices| {
        let mut out = kappa_expand_slices(&dom, k, slices);
        if t.kind == MightyKind::V {
            let dz = d.slice(z, delta, &[]);
            let sq = Relation::product(&dz, &dz);
            out.iter_mut().for_each(|s| *s = s.intersect(&sq));
        }
        out
    })?;
    let (ra, raa) = (r.q_forall()?, r.q_forallforall()?);
    let (qa, qaa) = (t.q.q_forall()?, t.q.q_forallforall()?);
    let kappa = dom.kappa();
    for z in all_tuples(n, zlen) {
        for delta in all_tuples(n, t.q.sig().delta) {
            let dz = d.slice(&z, &delta, &[]);
            let sq = Relation::product(&dz, &dz);
            let rk = r.slice(&z, &delta, &kappa);
            let want_all = match t.kind {
                MightyKind::V => qa.slice(&z, &delta, &[]).intersect(&sq),
                _ => qa.slice(&z, &delta, &[]),
            };
            if rk != raa.slice(&z, &delta, &[]) || rk != qaa.slice(&z, &delta, &[]) || ra.slice(&z, &delta, &[]) != want_all {
                return Err(Error::Internal("primed relation breaks R^κ = R^∀∀ = Q^∀∀ or R^∀ = Q^∀".into()));
            }
        }
    }
    let out = match t.kind {
        MightyKind::I => MightyTuple::kind_i_prime(
            r,
            d,
            t.b.clone().expect("B"),
            t.c.clone().expect("C"),
            t.delta.clone().expect("Delta"),
        )?,
        _ => MightyTuple::kind_v_prime(r, d, ParamRelation::plain(Relation::nullary(&dom, true)))?,
    };
    verify_output(&out)?;
    Ok(out.with_note(format!("primed from kind {}", t.kind)))
}

/// The mighty tuple I defined from a quadruple with every property of
/// `II ∪ {κ}`: `Δ₁(u,v) = ∃x B(u) ∧ C(v) ∧ R^∀(u,x) ∧ R^∀(v,x)` and
/// `D₁`, `R₁`, `B₁`, `C₁` parameterized by `(u,v)`.
pub fn tuple_i_from_quadruple(q: &Quadruple) -> Result<MightyTuple> {
    if !satisfies_all(q, &props_ii_kappa())? {
        return Err(Error::Precondition("the quadruple must satisfy every property of II ∪ {κ}".into()));
    }
    let dom = q.domain().clone();
    let n = dom.size();
    let zlen = q.zlen();
    let k = q.k();
    let body = |f: QcFormula, ku: &str, kv: &str| {
        f.atom("B", ["u"]).atom("C", ["v"]).atom(ku, ["u", "x"]).atom(kv, ["v", "x"])
    };
    let f_delta = body(QcFormula::new(["u", "v"]).exists(["x"]), "RA", "RA");
    let f_d = body(QcFormula::new(["u", "v", "x"]), "RA", "RA");
    let f_b = body(QcFormula::new(["u", "v", "x"]), "RK", "RA");
    let f_c = body(QcFormula::new(["u", "v", "x"]), "RA", "RK");
    let (mut deltas, mut ds, mut bs, mut cs, mut qs) = (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for fr in q.frames() {
        let mut lib = Library::new();
        lib.insert("B".into(), fr.b.clone());
        lib.insert("C".into(), fr.c.clone());
        lib.insert("RA".into(), fr.forall());
        lib.insert("RK".into(), fr.kappa().expect("κ holds"));
        let d1 = eval_qc_formula(&f_d, &lib, &dom)?;
        deltas.push(eval_qc_formula(&f_delta, &lib, &dom)?);
        bs.push(eval_qc_formula(&f_b, &lib, &dom)?);
        cs.push(eval_qc_formula(&f_c, &lib, &dom)?);
        let per_uv: Vec<Relation> = all_tuples(n, 2)
            .map(|uv| {
                let du = Relation::from_fn(&dom, 1, |x| d1.contains(&[uv[0], uv[1], x[0]])).expect("unary");
                let sq = Relation::product(&du, &du);
                let slices: Vec<Relation> = fr.alphas.iter().map(|a| a.intersect(&sq)).collect();
                stack_alpha(&dom, k, &slices)
            })
            .collect::<Result<_>>()?;
        qs.push(stack_alpha(&dom, 2, &per_uv)?);
        ds.push(d1);
    }
    let t = MightyTuple::kind_i(
        from_z_parts(&dom, Signature::new(zlen, 2, k, 2), &qs)?,
        from_z_parts(&dom, Signature::new(zlen, 2, 0, 1), &ds)?,
        from_z_parts(&dom, Signature::new(zlen, 2, 0, 1), &bs)?,
        from_z_parts(&dom, Signature::new(zlen, 2, 0, 1), &cs)?,
        from_z_parts(&dom, Signature::new(zlen, 0, 0, 2), &deltas)?,
    )?;
    verify_output(&t)?;
    Ok(t.with_note("defined from a quadruple satisfying II ∪ {κ}"))
}

/// The mighty tuple II `(Q, D, B′, C′)` built from `L(y₁,y₂,x) = y₁,y₂ ∈ D ∧
/// (σ(y₁,y₂) ∨ x ∈ B)` and `R` likewise with `C`:
/// `Q^{x₁,x₂}(y₁,y₂) = ∃y L(y₁,y,x₁) ∧ R(y,y₂,x₂)`, `B′ = ∃y′∀x (y′=b) ∧
/// L(y,y′,x)`, `C′` likewise with `c`, for σ-inequivalent `b, c ∈ D`.
/// Every relation ignores z.
pub fn tuple_ii_from_classification(sigma: &Relation, d: &Relation, b: &Relation, c: &Relation) -> Result<MightyTuple> {
    let dom = sigma.domain().clone();
    if sigma.arity() != 2 || d.arity() != 1 || b.arity() != 1 || c.arity() != 1 {
        return invalid("σ must be binary and D, B, C unary");
    }
    if [d, b, c].iter().any(|r| !r.domain().same_size(&dom)) {
        return invalid("σ, D, B, C live over different domains");
    }
    if !sigma.is_equivalence_on(d) {
        return Err(Error::Precondition("σ is not an equivalence relation on D".into()));
    }
    if b.is_full() {
        return Err(Error::Precondition("B must be a proper subset of A".into()));
    }
    if c.is_full() {
        return Err(Error::Precondition("C must be a proper subset of A".into()));
    }
    if !b.union(c).is_full() {
        return Err(Error::Precondition("B ∪ C must be A".into()));
    }
    let de = d.elems();
    let pair = de
        .iter()
        .flat_map(|&x| de.iter().map(move |&y| (x, y)))
        .find(|&(x, y)| !sigma.contains(&[x, y]));
    let Some((be, ce)) = pair else {
        return Err(Error::Precondition("D has no two σ-inequivalent elements".into()));
    };
    let gate = |s: &Relation| {
        Relation::from_fn(&dom, 3, |t| {
            d.contains(&[t[0]]) && d.contains(&[t[1]]) && (sigma.contains(&[t[0], t[1]]) || s.contains(&[t[2]]))
        })
    };
    let mut lib = Library::new();
    lib.insert("L".into(), gate(b)?);
    lib.insert("R".into(), gate(c)?);
    lib.insert("Kb".into(), Relation::singleton(&dom, be)?);
    lib.insert("Kc".into(), Relation::singleton(&dom, ce)?);
    let fq = QcFormula::new(["x1", "x2", "y1", "y2"])
        .exists(["y"])
        .atom("L", ["y1", "y", "x1"])
        .atom("R", ["y", "y2", "x2"]);
    let q = ParamRelation::new(eval_qc_formula(&fq, &lib, &dom)?, Signature::new(0, 0, 2, 2))?;
    let class = |k: &str| {
        let f = QcFormula::new(["y"])
            .exists(["yp"])
            .forall(["x"])
            .atom(k, ["yp"])
            .atom("L", ["y", "yp", "x"]);
        eval_qc_formula(&f, &lib, &dom)
    };
    let bp = class("Kb")?;
    let cp = class("Kc")?;

    let qa = q.q_forall()?.into_base();
    let qaa = q.q_forallforall()?.into_base();
    let fdiag = QcFormula::new(["x", "y1", "y2"])
        .exists(["y"])
        .atom("L", ["y1", "y", "x"])
        .atom("R", ["y", "y2", "x"]);
    let diag = eval_qc_formula(&fdiag, &lib, &dom)?;
    let unfolded = intersect_all(
        &dom,
        2,
        &dom.elements()
            .map(|a| Relation::from_fn(&dom, 2, |t| diag.contains(&[a, t[0], t[1]])))
            .collect::<Result<Vec<_>>>()?,
    );
    if unfolded != qa {
        return Err(Error::Internal("Q^∀ differs between q_forall and the unfolded definition".into()));
    }
    if qa != Relation::product(d, d) || qaa != *sigma {
        return Err(Error::Internal("expected Q^∀ = D×D and Q^∀∀ = σ".into()));
    }
    let t = MightyTuple::kind_ii(q, ParamRelation::plain(d.clone()), ParamRelation::plain(bp), ParamRelation::plain(cp))?;
    verify_output(&t)?;
    Ok(t.with_note(format!(
        "classification data with b = {}, c = {}",
        dom.label(be),
        dom.label(ce)
    )))
}

/// `φ¹(z,δ)`: the shortest odd closed walk of `R^κ`, `None` for ∞.
fn phi_pairs(t: &MightyTuple) -> Vec<(Vec<Elem>, Vec<(Vec<Elem>, Option<usize>, usize)>)> {
    let dom = t.domain();
    let n = dom.size();
    let kappa = dom.kappa();
    let zlen = bundle_zlen(&[&t.q, t.d.as_ref().expect("D"), t.delta.as_ref().expect("Delta")]);
    all_tuples(n, zlen)
        .map(|z| {
            let deltas = t.delta.as_ref().expect("Delta").slice(&z, &[], &[]).tuples();
            let per = deltas
                .into_iter()
                .map(|dl| {
                    let rk = t.q.slice(&z, &dl, &kappa);
                    let size = t.d.as_ref().expect("D").slice(&z, &dl, &[]).len();
                    (dl, odd_girth(&rk), size)
                })
                .collect();
            (z, per)
        })
        .collect()
}

/// Sort key of a pair `(m, s)`: larger m is larger, then smaller s.
fn phi_key(m: Option<usize>, s: usize) -> (usize, Reverse<usize>) {
    (m.unwrap_or(usize::MAX), Reverse(s))
}

/// `φ = max_z min_{δ ∈ Δ_z} (m, |D|)` of a mighty tuple V′, with `m = None`
/// standing for ∞.
pub fn phi(t: &MightyTuple) -> Result<(Option<usize>, usize)> {
    if t.kind != MightyKind::VPrime {
        return invalid("φ is defined for mighty tuples V′");
    }
    phi_pairs(t)
        .into_iter()
        .filter_map(|(_, per)| per.into_iter().map(|(_, m, s)| (m, s)).min_by_key(|&(m, s)| phi_key(m, s)))
        .max_by_key(|&(m, s)| phi_key(m, s))
        .ok_or_else(|| Error::Precondition("Δ is empty for every z".into()))
}

fn symmetric_input(t: &MightyTuple) -> Result<()> {
    if t.kind != MightyKind::VPrime {
        return invalid("the symmetric-case constructions take a mighty tuple V′");
    }
    if t.domain().size() > 3 {
        return Err(Error::Precondition("the symmetric-case constructions are limited to |A| ≤ 3".into()));
    }
    require_pass(t)?;
    if !t.q.base().tuples().iter().all(|tp| {
        let mut sw = tp.clone();
        let l = sw.len();
        sw.swap(l - 2, l - 1);
        t.q.base().contains(&sw)
    }) {
        return Err(Error::Precondition("every Q^α must be symmetric".into()));
    }
    Ok(())
}

struct VFrame {
    alphas: Vec<Relation>,
    rk: Relation,
}

fn v_frames(t: &MightyTuple, z: &[Elem], dl: &[Elem]) -> VFrame {
    let dom = t.domain();
    let alphas: Vec<Relation> = all_tuples(dom.size(), t.q.sig().alpha).map(|a| t.q.slice(z, dl, &a)).collect();
    let rk = alphas[alpha_index(dom.size(), &dom.kappa())].clone();
    VFrame { alphas, rk }
}

/// Base case for a symmetric mighty tuple V′ where some z has only
/// bipartite `R^κ` slices: with `R₀ = N·R`, the tuple I
/// `Δ₁(δ,u,v) = R^κ(u,v) ∧ Δ(δ)`, `D₁ = {x : R₀^∀(u,x)}`, `R₁ = R₀ ∩ D₁²`,
/// `B₁ = {x : R₀^κ(u,x)}`, `C₁ = {x : R₀^κ(v,x)}`.
pub fn symmetric_even_case(t: &MightyTuple) -> Result<MightyTuple> {
    symmetric_input(t)?;
    if phi(t)?.0.is_some() {
        return Err(Error::Precondition("every z has an odd closed walk in some R^κ slice".into()));
    }
    let dom = t.domain().clone();
    let n = dom.size();
    let k = t.q.sig().delta;
    let width = t.q.sig().alpha;
    let zlen = bundle_zlen(&[&t.q, t.d.as_ref().expect("D"), t.delta.as_ref().expect("Delta")]);
    let nn = factorial_exponent(n);
    let consts = constant_indices(n, width);
    let kappa_i = alpha_index(n, &dom.kappa());
    let (mut deltas, mut ds, mut bs, mut cs, mut qs) = (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for z in all_tuples(n, zlen) {
        let delta_z = t.delta.as_ref().expect("Delta").slice(&z, &[], &[]);
        let mut dz = Vec::new();
        let (mut dd, mut bb, mut cc, mut qq) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for dl in all_tuples(n, k) {
            let vf = v_frames(t, &z, &dl);
            let r0: Vec<Relation> = vf.alphas.iter().map(|a| repeat(a, nn)).collect::<Result<_>>()?;
            let r0_all = intersect_all(&dom, 2, consts.iter().map(|&i| &r0[i]));
            let r0k = &r0[kappa_i];
            for uv in all_tuples(n, 2) {
                let on = delta_z.contains(&dl) && vf.rk.contains(&uv);
                let mut full = dl.clone();
                full.extend(&uv);
                if on {
                    dz.push(full);
                }
                let row = |r: &Relation, x: Elem| Relation::from_fn(&dom, 1, |y| on && r.contains(&[x, y[0]]));
                let d1 = row(&r0_all, uv[0])?;
                let sq = Relation::product(&d1, &d1);
                qq.push(stack_alpha(&dom, width, &r0.iter().map(|a| a.intersect(&sq)).collect::<Vec<_>>())?);
                bb.push(row(r0k, uv[0])?);
                cc.push(row(r0k, uv[1])?);
                dd.push(d1);
            }
        }
        deltas.push(Relation::from_tuples(&dom, k + 2, dz)?);
        qs.push(stack_alpha(&dom, k + 2, &qq)?);
        ds.push(stack_alpha(&dom, k + 2, &dd)?);
        bs.push(stack_alpha(&dom, k + 2, &bb)?);
        cs.push(stack_alpha(&dom, k + 2, &cc)?);
    }
    let out = MightyTuple::kind_i(
        from_z_parts(&dom, Signature::new(zlen, k + 2, width, 2), &qs)?,
        from_z_parts(&dom, Signature::new(zlen, k + 2, 0, 1), &ds)?,
        from_z_parts(&dom, Signature::new(zlen, k + 2, 0, 1), &bs)?,
        from_z_parts(&dom, Signature::new(zlen, k + 2, 0, 1), &cs)?,
        from_z_parts(&dom, Signature::new(zlen, 0, 0, k + 2), &deltas)?,
    )?;
    verify_output(&out)?;
    Ok(out.with_note("even case of a symmetric mighty tuple V'"))
}

/// Inductive step for a symmetric mighty tuple V′ whose `φ` has finite
/// `m`: with `R₀ = ⌊m/2⌋·R`, the tuple V′ parameterized by `(δ, y)` where
/// `y` lies on an m-cycle of `R^κ`, with `D₁ = {x : ∃x′ R₀^κ(y,x) ∧
/// R₀^κ(y,x′) ∧ R^κ(x,x′)}` and `R₁ = R ∩ D₁²`. Its `φ` is strictly larger.
pub fn symmetric_odd_step(t: &MightyTuple) -> Result<MightyTuple> {
    symmetric_input(t)?;
    let before = phi(t)?;
    let Some(m) = before.0 else {
        return Err(Error::Precondition("some z has only bipartite R^κ slices; use the even case".into()));
    };
    let dom = t.domain().clone();
    let n = dom.size();
    let k = t.q.sig().delta;
    let width = t.q.sig().alpha;
    let zlen = bundle_zlen(&[&t.q, t.d.as_ref().expect("D"), t.delta.as_ref().expect("Delta")]);
    let (mut deltas, mut ds, mut qs) = (Vec::new(), Vec::new(), Vec::new());
    for z in all_tuples(n, zlen) {
        let delta_z = t.delta.as_ref().expect("Delta").slice(&z, &[], &[]);
        let mut dz = Vec::new();
        let (mut dd, mut qq) = (Vec::new(), Vec::new());
        for dl in all_tuples(n, k) {
            let vf = v_frames(t, &z, &dl);
            let r0k = repeat(&vf.rk, m / 2)?;
            for y in dom.elements() {
                let d1 = Relation::from_fn(&dom, 1, |x| {
                    r0k.contains(&[y, x[0]]) && dom.elements().any(|xp| r0k.contains(&[y, xp]) && vf.rk.contains(&[x[0], xp]))
                })?;
                if delta_z.contains(&dl) && !d1.is_empty() {
                    let mut full = dl.clone();
                    full.push(y);
                    dz.push(full);
                }
                let sq = Relation::product(&d1, &d1);
                qq.push(stack_alpha(&dom, width, &vf.alphas.iter().map(|a| a.intersect(&sq)).collect::<Vec<_>>())?);
                dd.push(d1);
            }
        }
        deltas.push(Relation::from_tuples(&dom, k + 1, dz)?);
        qs.push(stack_alpha(&dom, k + 1, &qq)?);
        ds.push(stack_alpha(&dom, k + 1, &dd)?);
    }
    let out = MightyTuple::kind_v_prime(
        from_z_parts(&dom, Signature::new(zlen, k + 1, width, 2), &qs)?,
        from_z_parts(&dom, Signature::new(zlen, k + 1, 0, 1), &ds)?,
        from_z_parts(&dom, Signature::new(zlen, 0, 0, k + 1), &deltas)?,
    )?;
    verify_output(&out)?;
    let after = phi(&out)?;
    if phi_key(after.0, after.1) <= phi_key(before.0, before.1) {
        return Err(Error::Internal(format!("φ did not grow: {before:?} → {after:?}")));
    }
    Ok(out.with_note("odd step of a symmetric mighty tuple V'"))
}
