use std::collections::HashMap;
use std::sync::Arc;

use super::relations::{game_length, s_relation};
use crate::error::{invalid, Error, Result};
use crate::gamesolver::{arc_consistency, eval_qcsp, solve_csp, CspInstance};
use crate::qcspmodel::{Constraint, Library, QcspInstance, Quantifier};
use crate::relcore::{all_tuples, capacity, Domain, Elem, Relation};

/// `𝓘_R`: one variable `y_m^{a₁…a_m}` per node of the |A|-ary tree of depth
/// n, and one constraint `𝓢_R^m(y₀, y₁^{a₁}, …, y_m^{a₁…a_m}, z_{a₁}…z_{a_m})`
/// per node. The parameters `z` are not variables of the instance.
#[derive(Clone, Debug)]
pub struct InducedInstance {
    pub domain: Domain,
    pub n: usize,
    pub r: Relation,
    /// `𝓢_R^m` for `m = 0..=n`.
    pub levels: Vec<Arc<Relation>>,
}

/// One tree constraint: level, path `a₁…a_m`, and variable scope along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedConstraint {
    pub level: usize,
    pub path: Vec<Elem>,
    pub scope: Vec<usize>,
}

fn level_offset(size: usize, m: usize) -> usize {
    (0..m).map(|i| size.pow(i as u32)).sum()
}

pub fn build_induced(r: &Relation, n: usize) -> Result<InducedInstance> {
    if game_length(r)? != n {
        return invalid(format!("relation arity {} is not 2·{n}+1", r.arity()));
    }
    let size = r.size();
    let count = (0..=n as u32).try_fold(0u64, |acc, i| (size as u64).checked_pow(i).and_then(|p| acc.checked_add(p)));
    match count {
        Some(c) if c <= capacity::max_slots() => {}
        _ => {
            return Err(Error::Capacity {
                what: "induced instance variables".into(),
                size: format!("Σ_{{m≤{n}}} {size}^m"),
                limit: capacity::max_slots().to_string(),
            })
        }
    }
    let levels = (0..=n).map(|m| s_relation(r, m).map(Arc::new)).collect::<Result<_>>()?;
    Ok(InducedInstance {
        domain: r.domain().clone(),
        n,
        r: r.clone(),
        levels,
    })
}

impl InducedInstance {
    pub fn var_count(&self) -> usize {
        level_offset(self.domain.size(), self.n + 1)
    }

    pub fn constraint_count(&self) -> usize {
        self.var_count()
    }

    /// Index of `y_m^{path}`; levels are stored in order, paths in radix order.
    pub fn node(&self, path: &[Elem]) -> usize {
        let size = self.domain.size();
        level_offset(size, path.len()) + path.iter().fold(0usize, |acc, &a| acc * size + a as usize)
    }

    pub fn path_of(&self, mut idx: usize) -> Vec<Elem> {
        let size = self.domain.size();
        let mut m = 0;
        while idx >= size.pow(m as u32) {
            idx -= size.pow(m as u32);
            m += 1;
        }
        let mut path = vec![0; m];
        for slot in path.iter_mut().rev() {
            *slot = (idx % size) as Elem;
            idx /= size;
        }
        path
    }

    /// `y0`, or `y<m>_<digits>` with 0-based base-|A| digits of the path.
    pub fn var_name(&self, idx: usize) -> String {
        let path = self.path_of(idx);
        if path.is_empty() {
            return "y0".into();
        }
        let digits: String = path
            .iter()
            .map(|&a| std::char::from_digit(a as u32, 36).expect("domain ≤ 36 for names"))
            .collect();
        format!("y{}_{digits}", path.len())
    }

    pub fn constraints(&self) -> Vec<InducedConstraint> {
        (0..self.var_count())
            .map(|idx| {
                let path = self.path_of(idx);
                let scope = (0..=path.len()).map(|i| self.node(&path[..i])).collect();
                InducedConstraint {
                    level: path.len(),
                    path,
                    scope,
                }
            })
            .collect()
    }

    fn csp_with(&self, rel_at: &dyn Fn(usize) -> Arc<Relation>, xs_of: &dyn Fn(&[Elem]) -> Vec<Elem>, leaves_only: bool) -> Result<CspInstance> {
        let mut csp = CspInstance::new(self.domain.clone());
        for i in 0..self.var_count() {
            csp.add_var(self.var_name(i));
        }
        let mut cache: HashMap<(usize, Vec<Elem>), Arc<Relation>> = HashMap::new();
        for c in self.constraints() {
            if leaves_only && c.level != self.n {
                continue;
            }
            let xs = xs_of(&c.path);
            let key = (c.level, xs.clone());
            let rel = match cache.get(&key) {
                Some(r) => r.clone(),
                None => {
                    let full = rel_at(c.level);
                    let pinned = Arc::new(Relation::from_fn(&self.domain, c.level + 1, |ys| {
                        let mut t = ys.to_vec();
                        t.extend_from_slice(&xs);
                        full.contains(&t)
                    })?);
                    cache.insert(key, pinned.clone());
                    pinned
                }
            };
            csp.add_constraint(rel, c.scope)?;
        }
        Ok(csp)
    }

    fn check_z(&self, z: &[Elem]) -> Result<()> {
        if z.len() != self.domain.size() || z.iter().any(|&e| e as usize >= self.domain.size()) {
            return invalid(format!("z must be a tuple in A^{}", self.domain.size()));
        }
        Ok(())
    }

    /// `𝓘_R` at a fixed `z`, every level constrained by `𝓢_R^m`.
    pub fn csp_for(&self, z: &[Elem]) -> Result<CspInstance> {
        self.check_z(z)?;
        self.csp_with(&|m| self.levels[m].clone(), &|p| p.iter().map(|&a| z[a as usize]).collect(), false)
    }

    /// Leaf constraints `R(y₀, …, y_n^{a₁…a_n}, x)` with `x = a` when `z` is
    /// absent and `x = z_a` otherwise.
    pub fn leaf_csp(&self, z: Option<&[Elem]>) -> Result<CspInstance> {
        if let Some(z) = z {
            self.check_z(z)?;
        }
        let r = Arc::new(self.r.clone());
        self.csp_with(
            &|_| r.clone(),
            &|p| p.iter().map(|&a| z.map_or(a, |z| z[a as usize])).collect(),
            true,
        )
    }

    /// `∀z₁…z_{|A|} ∃(tree variables) ⋀ S_m(path, z_{a₁}…z_{a_m})`, with the
    /// relations named `S0…Sn`.
    pub fn to_qcsp(&self) -> Result<QcspInstance> {
        let size = self.domain.size();
        let mut library = Library::new();
        for (m, rel) in self.levels.iter().enumerate() {
            library.insert(format!("S{m}"), (**rel).clone());
        }
        let mut prefix: Vec<(Quantifier, String)> = (1..=size).map(|i| (Quantifier::Forall, format!("z{i}"))).collect();
        prefix.extend((0..self.var_count()).map(|i| (Quantifier::Exists, self.var_name(i))));
        let constraints = self
            .constraints()
            .into_iter()
            .map(|c| {
                let vars = c
                    .scope
                    .iter()
                    .map(|&v| self.var_name(v))
                    .chain(c.path.iter().map(|&a| format!("z{}", a as usize + 1)));
                Constraint::new(format!("S{}", c.level), vars)
            })
            .collect();
        QcspInstance::new(self.domain.clone(), library, prefix, constraints)
    }

    /// The sentence `∃y₀ ∀x₁ ∃y₁ … ∀x_n ∃y_n R(y₀…y_n, x₁…x_n)`.
    pub fn sentence(&self) -> Result<QcspInstance> {
        let mut prefix = vec![(Quantifier::Exists, "y0".to_string())];
        for i in 1..=self.n {
            prefix.push((Quantifier::Forall, format!("x{i}")));
            prefix.push((Quantifier::Exists, format!("y{i}")));
        }
        let vars = (0..=self.n).map(|i| format!("y{i}")).chain((1..=self.n).map(|i| format!("x{i}")));
        QcspInstance::new(
            self.domain.clone(),
            Library::from([("R".to_string(), self.r.clone())]),
            prefix,
            vec![Constraint::new("R", vars)],
        )
    }

    pub fn z_values(&self) -> Vec<Vec<Elem>> {
        all_tuples(self.domain.size(), self.domain.size()).collect()
    }
}

/// Verdicts of the four independently computed items.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// The sentence holds (game search).
    pub game: bool,
    /// The leaf CSP with constants `x = a` has a solution.
    pub plain: bool,
    /// The leaf CSP with `x = z_a` has a solution for every `z`.
    pub parameterized: bool,
    /// `𝓘_R` has a solution for every `z`.
    pub strengthened: bool,
}

impl EquivalenceReport {
    pub fn agree(&self) -> bool {
        self.game == self.plain && self.plain == self.parameterized && self.parameterized == self.strengthened
    }
}

pub fn check_equivalence_lemma(r: &Relation, n: usize) -> Result<EquivalenceReport> {
    let inst = build_induced(r, n)?;
    let game = eval_qcsp(&inst.sentence()?, false)?.truth;
    let plain = solve_csp(&inst.leaf_csp(None)?).is_some();
    let mut parameterized = true;
    let mut strengthened = true;
    for z in inst.z_values() {
        parameterized &= solve_csp(&inst.leaf_csp(Some(&z))?).is_some();
        strengthened &= solve_csp(&inst.csp_for(&z)?).is_some();
    }
    Ok(EquivalenceReport {
        game,
        plain,
        parameterized,
        strengthened,
    })
}

/// A z-parameterized reduction: for every z, one domain bitmask per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PReduction {
    pub domain: Domain,
    pub z_values: Vec<Vec<Elem>>,
    /// `domains[zi][var]`.
    pub domains: Vec<Vec<u64>>,
}

impl PReduction {
    pub fn full(inst: &InducedInstance) -> PReduction {
        let full = u64::MAX >> (64 - inst.domain.size());
        let z_values = inst.z_values();
        let domains = vec![vec![full; inst.var_count()]; z_values.len()];
        PReduction {
            domain: inst.domain.clone(),
            z_values,
            domains,
        }
    }

    pub fn get(&self, var: usize, zi: usize) -> Relation {
        Relation::from_mask(&self.domain, self.domains[zi][var])
    }

    /// The z values for which some domain is empty.
    pub fn failed(&self) -> Vec<Vec<Elem>> {
        self.z_values
            .iter()
            .zip(&self.domains)
            .filter(|(_, d)| d.contains(&0))
            .map(|(z, _)| z.clone())
            .collect()
    }

    pub fn is_nonempty(&self) -> bool {
        self.failed().is_empty()
    }

    /// Pointwise inclusion in `other`.
    pub fn is_below(&self, other: &PReduction) -> bool {
        self.domains
            .iter()
            .zip(&other.domains)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x & !y == 0))
    }
}

/// The largest 1-consistent reduction of `𝓘_R`, computed separately per z.
/// A z whose propagation empties a domain gets all-empty domains.
pub fn param_arc_consistency(inst: &InducedInstance) -> Result<PReduction> {
    param_arc_consistency_from(inst, &PReduction::full(inst))
}

/// As `param_arc_consistency`, below the given initial reduction.
pub fn param_arc_consistency_from(inst: &InducedInstance, initial: &PReduction) -> Result<PReduction> {
    let z_values = inst.z_values();
    if initial.z_values != z_values || initial.domains.iter().any(|d| d.len() != inst.var_count()) {
        return invalid("initial reduction does not match the instance");
    }
    let mut domains = Vec::with_capacity(z_values.len());
    for (zi, z) in z_values.iter().enumerate() {
        let mut csp = inst.csp_for(z)?;
        for (v, &m) in initial.domains[zi].iter().enumerate() {
            csp.restrict(v, m);
        }
        domains.push(arc_consistency(&csp).unwrap_or_else(|| vec![0; inst.var_count()]));
    }
    Ok(PReduction {
        domain: inst.domain.clone(),
        z_values,
        domains,
    })
}
