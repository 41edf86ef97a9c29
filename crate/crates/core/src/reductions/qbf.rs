use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{invalid, parse_err, Result};
use crate::qcspmodel::Quantifier;

/// Whether the matrix is a conjunction of clauses or a disjunction of terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    Cnf,
    Dnf,
}

/// A prenex Boolean formula with a 3-literal matrix.
///
/// Literals follow DIMACS: `v` is the variable `x_v`, `-v` its negation.
/// In a DNF term the literal `v` reads `x_v = 1` and `-v` reads `x_v = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QBoolFormula {
    pub nvars: usize,
    /// Every variable exactly once, outermost first.
    pub prefix: Vec<(Quantifier, usize)>,
    pub kind: MatrixKind,
    pub items: Vec<[i32; 3]>,
}

impl QBoolFormula {
    pub fn new(nvars: usize, prefix: Vec<(Quantifier, usize)>, kind: MatrixKind, items: Vec<[i32; 3]>) -> Result<QBoolFormula> {
        let f = QBoolFormula { nvars, prefix, kind, items };
        f.validate()?;
        Ok(f)
    }

    /// The prefix `Q₁x₁ … Qₙxₙ` in variable order.
    pub fn ordered(quants: &[Quantifier], kind: MatrixKind, items: Vec<[i32; 3]>) -> Result<QBoolFormula> {
        let prefix = quants.iter().enumerate().map(|(i, q)| (*q, i + 1)).collect();
        QBoolFormula::new(quants.len(), prefix, kind, items)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &(_, v) in &self.prefix {
            if v == 0 || v > self.nvars {
                return invalid(format!("prefix variable {v} outside 1..{}", self.nvars));
            }
            if !seen.insert(v) {
                return invalid(format!("variable {v} quantified twice"));
            }
        }
        if seen.len() != self.nvars {
            return invalid("prefix must quantify every variable");
        }
        for item in &self.items {
            for &l in item {
                if l == 0 || l.unsigned_abs() as usize > self.nvars {
                    return invalid(format!("literal {l} outside 1..{}", self.nvars));
                }
            }
        }
        Ok(())
    }

    fn matrix(&self, vals: &[bool]) -> bool {
        let lit = |l: i32| vals[l.unsigned_abs() as usize - 1] == (l > 0);
        match self.kind {
            MatrixKind::Cnf => self.items.iter().all(|c| c.iter().any(|&l| lit(l))),
            MatrixKind::Dnf => self.items.iter().any(|t| t.iter().all(|&l| lit(l))),
        }
    }

    /// Truth by expanding every quantifier.
    pub fn truth(&self) -> bool {
        fn rec(f: &QBoolFormula, pos: usize, vals: &mut [bool]) -> bool {
            let Some(&(q, v)) = f.prefix.get(pos) else {
                return f.matrix(vals);
            };
            let mut branch = |b: bool| {
                vals[v - 1] = b;
                rec(f, pos + 1, vals)
            };
            match q {
                Quantifier::Exists => branch(false) || branch(true),
                Quantifier::Forall => branch(false) && branch(true),
            }
        }
        rec(self, 0, &mut vec![false; self.nvars])
    }

    /// The negation: dual quantifiers and dual matrix kind, literals flipped.
    pub fn negated(&self) -> QBoolFormula {
        let dual = |q: Quantifier| match q {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        };
        QBoolFormula {
            nvars: self.nvars,
            prefix: self.prefix.iter().map(|&(q, v)| (dual(q), v)).collect(),
            kind: match self.kind {
                MatrixKind::Cnf => MatrixKind::Dnf,
                MatrixKind::Dnf => MatrixKind::Cnf,
            },
            items: self.items.iter().map(|t| t.map(|l| -l)).collect(),
        }
    }
}

fn ints(tokens: &[&str], line: usize) -> Result<Vec<i64>> {
    tokens
        .iter()
        .map(|t| t.parse::<i64>().or_else(|_| parse_err(line, format!("expected an integer, found {t:?}"))))
        .collect()
}

fn three_literals(nums: &[i64], nvars: usize, line: usize) -> Result<[i32; 3]> {
    let lits = match nums.split_last() {
        Some((0, lits)) => lits,
        _ => return parse_err(line, "line must end with 0"),
    };
    if lits.len() != 3 {
        return parse_err(line, format!("expected exactly 3 literals, found {}", lits.len()));
    }
    let mut out = [0i32; 3];
    for (o, &l) in out.iter_mut().zip(lits) {
        if l == 0 || l.unsigned_abs() as usize > nvars {
            return parse_err(line, format!("literal {l} outside 1..{nvars}"));
        }
        *o = l as i32;
    }
    Ok(out)
}

/// Reads the QDIMACS subset: `p cnf|dnf <vars> <items>`, `a`/`e` lines, then
/// 3-literal lines ending in `0`. Variables missing from every quantifier line
/// are existential and outermost.
pub fn parse_qdimacs(text: &str) -> Result<QBoolFormula> {
    let mut header: Option<(MatrixKind, usize, usize)> = None;
    let mut blocks: Vec<(Quantifier, usize)> = Vec::new();
    let mut items = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return parse_err(line, "duplicate header");
                }
                if toks.len() != 4 {
                    return parse_err(line, "header is `p cnf|dnf <vars> <items>`");
                }
                let kind = match toks[1] {
                    "cnf" => MatrixKind::Cnf,
                    "dnf" => MatrixKind::Dnf,
                    k => return parse_err(line, format!("unknown format {k:?}")),
                };
                let n = ints(&toks[2..], line)?;
                if n.iter().any(|&x| x < 0) {
                    return parse_err(line, "negative count");
                }
                header = Some((kind, n[0] as usize, n[1] as usize));
            }
            Some(q @ ("a" | "e")) => {
                let Some((_, nvars, _)) = header else {
                    return parse_err(line, "quantifier line before header");
                };
                if !items.is_empty() {
                    return parse_err(line, "quantifier line after the matrix");
                }
                let quant = if q == "a" { Quantifier::Forall } else { Quantifier::Exists };
                let nums = ints(&toks[1..], line)?;
                match nums.split_last() {
                    Some((0, vars)) => {
                        for &v in vars {
                            if v <= 0 || v as usize > nvars {
                                return parse_err(line, format!("variable {v} outside 1..{nvars}"));
                            }
                            if blocks.iter().any(|&(_, w)| w == v as usize) {
                                return parse_err(line, format!("variable {v} quantified twice"));
                            }
                            blocks.push((quant, v as usize));
                        }
                    }
                    _ => return parse_err(line, "line must end with 0"),
                }
            }
            Some(_) => {
                let Some((_, nvars, _)) = header else {
                    return parse_err(line, "matrix line before header");
                };
                items.push(three_literals(&ints(&toks, line)?, nvars, line)?);
            }
        }
    }
    let Some((kind, nvars, count)) = header else {
        return parse_err(1, "missing `p` header");
    };
    if items.len() != count {
        return parse_err(text.lines().count().max(1), format!("header announces {count} items, found {}", items.len()));
    }
    let mut prefix: Vec<(Quantifier, usize)> = (1..=nvars)
        .filter(|v| blocks.iter().all(|&(_, w)| w != *v))
        .map(|v| (Quantifier::Exists, v))
        .collect();
    prefix.extend(blocks);
    QBoolFormula::new(nvars, prefix, kind, items)
}

pub fn write_qdimacs(f: &QBoolFormula) -> String {
    let mut out = String::new();
    let kind = match f.kind {
        MatrixKind::Cnf => "cnf",
        MatrixKind::Dnf => "dnf",
    };
    let _ = writeln!(out, "p {kind} {} {}", f.nvars, f.items.len());
    let mut i = 0;
    while i < f.prefix.len() {
        let q = f.prefix[i].0;
        let letter = if q == Quantifier::Forall { "a" } else { "e" };
        out.push_str(letter);
        while i < f.prefix.len() && f.prefix[i].0 == q {
            let _ = write!(out, " {}", f.prefix[i].1);
            i += 1;
        }
        out.push_str(" 0\n");
    }
    for t in &f.items {
        let _ = writeln!(out, "{} {} {} 0", t[0], t[1], t[2]);
    }
    out
}

/// `∀x₁…∀x_m ∃x_{m+1}…∃x_n ⋀ 1IN3(x_i,x_j,x_k)`, variables 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OneInThree {
    pub n: usize,
    pub m: usize,
    pub clauses: Vec<[usize; 3]>,
}

impl OneInThree {
    pub fn new(n: usize, m: usize, clauses: Vec<[usize; 3]>) -> Result<OneInThree> {
        if m > n {
            return invalid(format!("{m} universal variables out of {n}"));
        }
        for c in &clauses {
            if c.iter().any(|&v| v == 0 || v > n) {
                return invalid(format!("clause {c:?} uses a variable outside 1..{n}"));
            }
        }
        Ok(OneInThree { n, m, clauses })
    }

    fn holds(&self, vals: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().filter(|&&v| vals[v - 1]).count() == 1)
    }

    pub fn truth(&self) -> bool {
        let n = self.n;
        let m = self.m;
        (0u64..1 << m).all(|u| {
            (0u64..1 << (n - m)).any(|e| {
                let vals: Vec<bool> = (0..n)
                    .map(|i| if i < m { u >> i & 1 == 1 } else { e >> (i - m) & 1 == 1 })
                    .collect();
                self.holds(&vals)
            })
        })
    }
}

/// Reads `p 1in3 <n> <s>`, one `a <m>` line giving the universal count, then
/// `s` lines of three positive variables ending in `0`.
pub fn parse_1in3(text: &str) -> Result<OneInThree> {
    let mut header: Option<(usize, usize)> = None;
    let mut m: Option<usize> = None;
    let mut clauses = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if toks.len() != 4 || toks[1] != "1in3" {
                    return parse_err(line, "header is `p 1in3 <vars> <clauses>`");
                }
                let nums = ints(&toks[2..], line)?;
                if nums.iter().any(|&x| x < 0) {
                    return parse_err(line, "negative count");
                }
                header = Some((nums[0] as usize, nums[1] as usize));
            }
            Some("a") => {
                let nums = ints(&toks[1..], line)?;
                match nums.as_slice() {
                    [k] if *k >= 0 => m = Some(*k as usize),
                    _ => return parse_err(line, "expected `a <universal count>`"),
                }
            }
            Some(_) => {
                let Some((n, _)) = header else {
                    return parse_err(line, "clause before header");
                };
                let lits = three_literals(&ints(&toks, line)?, n, line)?;
                if lits.iter().any(|&l| l < 0) {
                    return parse_err(line, "1in3 clauses take positive variables only");
                }
                clauses.push(lits.map(|l| l as usize));
            }
        }
    }
    let Some((n, s)) = header else {
        return parse_err(1, "missing `p 1in3` header");
    };
    if clauses.len() != s {
        return parse_err(text.lines().count().max(1), format!("header announces {s} clauses, found {}", clauses.len()));
    }
    OneInThree::new(n, m.unwrap_or(0), clauses)
}

pub fn write_1in3(f: &OneInThree) -> String {
    let mut out = format!("p 1in3 {} {}\na {}\n", f.n, f.clauses.len(), f.m);
    for c in &f.clauses {
        let _ = writeln!(out, "{} {} {} 0", c[0], c[1], c[2]);
    }
    out
}
