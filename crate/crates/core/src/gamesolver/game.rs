use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::qcspmodel::{Constraint, Library, QcFormula, QcspInstance, Quantifier};
use crate::relcore::{all_tuples, Domain, Elem, Relation};

/// Memo entries allowed before the solver reports a capacity error.
const MEMO_LIMIT: usize = 1 << 26;

/// Skolem table of one existential variable: universal values played before
/// it (in prefix order) mapped to its move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExistentialTable {
    pub var: String,
    pub position: usize,
    pub moves: BTreeMap<Vec<Elem>, Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub tables: Vec<ExistentialTable>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameResult {
    pub truth: bool,
    pub strategy: Option<Strategy>,
}

struct Game<'a> {
    n: Elem,
    quants: Vec<Quantifier>,
    /// Constraints whose last variable sits at this position.
    checks: Vec<Vec<(&'a Relation, Vec<usize>)>>,
    /// Assigned positions that still occur in constraints checked later.
    relevant: Vec<Vec<usize>>,
    memo: Vec<HashMap<Vec<Elem>, bool>>,
    entries: usize,
}

impl<'a> Game<'a> {
    fn new(inst: &'a QcspInstance) -> Game<'a> {
        let len = inst.prefix.len();
        let compiled = inst.compiled();
        let mut checks = vec![Vec::new(); len + 1];
        let mut relevant = vec![Vec::new(); len + 1];
        for (r, scope) in compiled {
            // Nullary constraints are checked before the first move.
            let last = scope.iter().map(|&p| p + 1).max().unwrap_or(0);
            for pos in 1..=len {
                if last > pos {
                    for &v in &scope {
                        if v < pos && !relevant[pos].contains(&v) {
                            relevant[pos].push(v);
                        }
                    }
                }
            }
            checks[last].push((r, scope));
        }
        for r in relevant.iter_mut() {
            r.sort_unstable();
        }
        Game {
            n: inst.domain.size() as Elem,
            quants: inst.prefix.iter().map(|(q, _)| *q).collect(),
            checks,
            relevant,
            memo: vec![HashMap::new(); len + 1],
            entries: 0,
        }
    }

    fn holds(&self, level: usize, vals: &[Elem]) -> bool {
        self.checks[level].iter().all(|(r, scope)| {
            let t: Vec<Elem> = scope.iter().map(|&p| vals[p]).collect();
            r.contains(&t)
        })
    }

    /// Whether the EP wins from position `pos` with `vals[..pos]` played.
    fn win(&mut self, pos: usize, vals: &mut Vec<Elem>) -> Result<bool> {
        if pos == self.quants.len() {
            return Ok(true);
        }
        let key: Vec<Elem> = self.relevant[pos].iter().map(|&p| vals[p]).collect();
        if let Some(&b) = self.memo[pos].get(&key) {
            return Ok(b);
        }
        let q = self.quants[pos];
        let mut result = q == Quantifier::Forall;
        for a in 0..self.n {
            vals.push(a);
            let ok = self.holds(pos + 1, vals) && self.win(pos + 1, vals)?;
            vals.pop();
            if (q == Quantifier::Exists) == ok {
                result = ok;
                break;
            }
        }
        self.entries += 1;
        if self.entries > MEMO_LIMIT {
            return Err(Error::Capacity {
                what: "game memo table".into(),
                size: format!("more than {MEMO_LIMIT} entries"),
                limit: MEMO_LIMIT.to_string(),
            });
        }
        self.memo[pos].insert(key, result);
        Ok(result)
    }

    /// Fills the Skolem tables below a winning position.
    fn extract(
        &mut self,
        pos: usize,
        vals: &mut Vec<Elem>,
        played: &mut Vec<Elem>,
        tables: &mut [ExistentialTable],
        table_of: &[Option<usize>],
    ) -> Result<()> {
        if pos == self.quants.len() {
            return Ok(());
        }
        match self.quants[pos] {
            Quantifier::Forall => {
                for a in 0..self.n {
                    vals.push(a);
                    played.push(a);
                    self.extract(pos + 1, vals, played, tables, table_of)?;
                    played.pop();
                    vals.pop();
                }
            }
            Quantifier::Exists => {
                let mut chosen = None;
                for a in 0..self.n {
                    vals.push(a);
                    let ok = self.holds(pos + 1, vals) && self.win(pos + 1, vals)?;
                    vals.pop();
                    if ok {
                        chosen = Some(a);
                        break;
                    }
                }
                let a = chosen.ok_or_else(|| Error::Internal("strategy walk reached a lost position".into()))?;
                let t = table_of[pos].expect("existential has a table");
                tables[t].moves.insert(played.clone(), a);
                vals.push(a);
                self.extract(pos + 1, vals, played, tables, table_of)?;
                vals.pop();
            }
        }
        Ok(())
    }
}

/// Decides the instance by exhaustive game search. Universal moves are tried
/// in increasing order, so extracted strategies are deterministic.
pub fn eval_qcsp(inst: &QcspInstance, want_strategy: bool) -> Result<GameResult> {
    let mut game = Game::new(inst);
    let mut vals = Vec::with_capacity(inst.prefix.len());
    let truth = game.holds(0, &vals) && game.win(0, &mut vals)?;
    if !truth || !want_strategy {
        return Ok(GameResult { truth, strategy: None });
    }
    let mut tables = Vec::new();
    let mut table_of = vec![None; inst.prefix.len()];
    for (i, (q, v)) in inst.prefix.iter().enumerate() {
        if *q == Quantifier::Exists {
            table_of[i] = Some(tables.len());
            tables.push(ExistentialTable {
                var: v.clone(),
                position: i,
                moves: BTreeMap::new(),
            });
        }
    }
    game.extract(0, &mut vals, &mut Vec::new(), &mut tables, &table_of)?;
    Ok(GameResult {
        truth,
        strategy: Some(Strategy { tables }),
    })
}

/// Plays the strategy against every universal play (lexicographic order) and
/// returns the first play whose outcome violates the matrix.
pub fn replay_strategy(inst: &QcspInstance, s: &Strategy) -> Option<Vec<Elem>> {
    let univ = inst.universals();
    let table_at: BTreeMap<usize, &ExistentialTable> = s.tables.iter().map(|t| (t.position, t)).collect();
    for play in all_tuples(inst.domain.size(), univ.len()) {
        let mut vals = Vec::with_capacity(inst.prefix.len());
        let mut ui = 0;
        let mut ok = true;
        for (i, (q, _)) in inst.prefix.iter().enumerate() {
            match q {
                Quantifier::Forall => {
                    vals.push(play[ui]);
                    ui += 1;
                }
                Quantifier::Exists => match table_at.get(&i).and_then(|t| t.moves.get(&play[..ui])) {
                    Some(&a) => vals.push(a),
                    None => {
                        ok = false;
                        break;
                    }
                },
            }
        }
        if !ok || !inst.satisfied_by(&vals) {
            return Some(play);
        }
    }
    None
}

/// The relation over `f.free` defined by `f`, decided per free tuple by the
/// memoized game search. One memo table serves every tuple.
pub fn eval_formula_by_game(f: &QcFormula, lib: &Library, domain: &Domain) -> Result<Relation> {
    let mut prefix: Vec<(Quantifier, String)> = f.free.iter().map(|v| (Quantifier::Exists, v.clone())).collect();
    prefix.extend(f.quantified.iter().cloned());
    let constraints = f.atoms.iter().map(|a| Constraint::new(a.rel.clone(), a.vars.iter().cloned())).collect();
    let inst = QcspInstance::new(domain.clone(), lib.clone(), prefix, constraints)?;
    let nfree = f.free.len();
    let mut game = Game::new(&inst);
    let mut out = Relation::empty(domain, nfree)?;
    if !game.holds(0, &[]) {
        return Ok(out);
    }
    for (i, t) in all_tuples(domain.size(), nfree).enumerate() {
        let mut vals = Vec::with_capacity(inst.prefix.len());
        let mut ok = true;
        for (d, &e) in t.iter().enumerate() {
            vals.push(e);
            if !game.holds(d + 1, &vals) {
                ok = false;
                break;
            }
        }
        if ok && game.win(nfree, &mut vals)? {
            out.set_index(i, true);
        }
    }
    Ok(out)
}
