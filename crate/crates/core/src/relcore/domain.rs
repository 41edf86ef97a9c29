use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};

/// A domain element, stored 0-based.
pub type Elem = u8;

/// Largest supported domain; per-variable domains are packed into a `u64`.
pub const MAX_DOMAIN: usize = 64;

/// The domain `A`, with optional printable labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    size: usize,
    labels: Option<Arc<[String]>>,
}

impl Domain {
    pub fn new(size: usize) -> Result<Domain> {
        if size == 0 || size > MAX_DOMAIN {
            return invalid(format!("domain size must be in 1..={MAX_DOMAIN}, got {size}"));
        }
        Ok(Domain { size, labels: None })
    }

    pub fn with_labels<S: AsRef<str>>(labels: &[S]) -> Result<Domain> {
        let mut d = Domain::new(labels.len())?;
        let owned: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, l) in owned.iter().enumerate() {
            if l.is_empty() || l.contains(char::is_whitespace) || l.starts_with('#') {
                return invalid(format!("bad label {l:?}"));
            }
            if owned[..i].contains(l) {
                return invalid(format!("duplicate label {l:?}"));
            }
        }
        d.labels = Some(owned.into());
        Ok(d)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn same_size(&self, other: &Domain) -> bool {
        self.size == other.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.size as Elem
    }

    /// Printable name of an element: its label, or its 1-based number.
    pub fn label(&self, e: Elem) -> String {
        match &self.labels {
            Some(l) => l[e as usize].clone(),
            None => (e as usize + 1).to_string(),
        }
    }

    /// Parses one token. Labelled domains accept only labels; unlabelled
    /// domains accept integers `1..=size`.
    pub fn parse_elem(&self, tok: &str) -> Option<Elem> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == tok).map(|p| p as Elem),
            None => tok
                .parse::<usize>()
                .ok()
                .filter(|&v| v >= 1 && v <= self.size)
                .map(|v| (v - 1) as Elem),
        }
    }

    /// Element by label; panics on an unknown label. Meant for fixed built-in domains.
    pub fn elem(&self, label: &str) -> Elem {
        self.parse_elem(label)
            .unwrap_or_else(|| panic!("unknown element {label:?}"))
    }

    /// κ = (1,…,|A|), every element once in order.
    pub fn kappa(&self) -> Vec<Elem> {
        self.elements().collect()
    }

    pub fn format_tuple(&self, t: &[Elem]) -> String {
        if t.is_empty() {
            return "()".to_string();
        }
        t.iter().map(|&e| self.label(e)).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.labels {
            Some(l) => write!(f, "Domain{:?}", l),
            None => write!(f, "Domain({})", self.size),
        }
    }
}

/// Lexicographic enumeration of `A^len`; `len = 0` yields the empty tuple once.
#[derive(Clone, Debug)]
pub struct Tuples {
    size: Elem,
    cur: Vec<Elem>,
    done: bool,
}

impl Iterator for Tuples {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let mut i = self.cur.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.cur[i] += 1;
            if self.cur[i] < self.size {
                break;
            }
            self.cur[i] = 0;
        }
        Some(out)
    }
}

pub fn all_tuples(size: usize, len: usize) -> Tuples {
    Tuples {
        size: size as Elem,
        cur: vec![0; len],
        done: size == 0 && len > 0,
    }
}
