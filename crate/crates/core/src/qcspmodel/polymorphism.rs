use crate::error::{invalid, Result};
use crate::reductions::six_domain;
use crate::relcore::{all_tuples, Domain, Elem, Relation};

/// An operation `A^n → A`, stored as a table in lexicographic argument order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteOperation {
    domain: Domain,
    arity: usize,
    table: Vec<Elem>,
}

impl FiniteOperation {
    pub fn from_fn(domain: &Domain, arity: usize, mut f: impl FnMut(&[Elem]) -> Elem) -> Result<FiniteOperation> {
        let mut table = Vec::new();
        for t in all_tuples(domain.size(), arity) {
            let v = f(&t);
            if v as usize >= domain.size() {
                return invalid(format!("operation value {v} leaves the domain"));
            }
            table.push(v);
        }
        Ok(FiniteOperation {
            domain: domain.clone(),
            arity,
            table,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn apply(&self, args: &[Elem]) -> Elem {
        assert_eq!(args.len(), self.arity);
        let n = self.domain.size();
        self.table[args.iter().fold(0usize, |a, &e| a * n + e as usize)]
    }
}

/// Outcome of a polymorphism check. On failure, `rows` are the tuples of the
/// relation the operation was applied to and `image` is the result outside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCheck {
    pub holds: bool,
    pub rows: Vec<Vec<Elem>>,
    pub image: Vec<Elem>,
}

/// Whether `op` applied coordinate-wise to any `n` tuples of `r` stays in `r`.
pub fn check_polymorphism(op: &FiniteOperation, r: &Relation) -> Result<PolyCheck> {
    if !op.domain.same_size(r.domain()) {
        return invalid("check_polymorphism: domain mismatch");
    }
    let tuples = r.tuples();
    let n = op.arity;
    let mut pick = vec![0usize; n];
    let mut args = vec![0; n];
    let mut image = vec![0; r.arity()];
    if tuples.is_empty() {
        return Ok(PolyCheck { holds: true, rows: vec![], image: vec![] });
    }
    loop {
        for (c, slot) in image.iter_mut().enumerate() {
            for (i, &p) in pick.iter().enumerate() {
                args[i] = tuples[p][c];
            }
            *slot = op.apply(&args);
        }
        if !r.contains(&image) {
            return Ok(PolyCheck {
                holds: false,
                rows: pick.iter().map(|&p| tuples[p].clone()).collect(),
                image,
            });
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(PolyCheck { holds: true, rows: vec![], image: vec![] });
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < tuples.len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// The binary operation `g` on `{0,1,2,0′,1′,2′}`. Cases are tried in order:
/// `x` if `y = 1`; `x` if `x = y`; `y` if `y ∈ {0′,1′}`; `x` if `x ∈ {0′,1′}`
/// and `y = 2′`; otherwise `2`.
pub fn g_operation() -> FiniteOperation {
    let d = six_domain();
    let one = d.elem("1");
    let two = d.elem("2");
    let primes01 = [d.elem("0'"), d.elem("1'")];
    let two_p = d.elem("2'");
    FiniteOperation::from_fn(&d, 2, |a| {
        let (x, y) = (a[0], a[1]);
        if y == one || x == y {
            x
        } else if primes01.contains(&y) {
            y
        } else if primes01.contains(&x) && y == two_p {
            x
        } else {
            two
        }
    })
    .expect("g is total")
}
