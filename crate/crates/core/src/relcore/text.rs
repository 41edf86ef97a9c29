//! The line-oriented `.rel` format.
//!
//! ```text
//! domain 4 + - 0 1
//! relation R0 3
//! + + 0
//! ...
//! end
//! ```
//!
//! A `param z <n> delta <k> alpha <m> value <t>` line may follow the
//! `relation` line. Tuple tokens are labels when the domain declares them and
//! 1-based integers otherwise. The empty tuple of an arity-0 relation is
//! written `()`. `#` starts a comment.

use super::domain::{Domain, Elem};
use super::param::{ParamRelation, Signature};
use super::relation::Relation;
use crate::error::{parse_err, Error, Result};

/// Named relations sharing one domain, in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelFile {
    pub domain: Domain,
    pub entries: Vec<(String, ParamRelation)>,
}

impl RelFile {
    pub fn new(domain: Domain) -> RelFile {
        RelFile {
            domain,
            entries: Vec::new(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&ParamRelation> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }

    pub fn push(&mut self, name: impl Into<String>, rel: ParamRelation) {
        self.entries.push((name.into(), rel));
    }

    pub fn push_plain(&mut self, name: impl Into<String>, rel: Relation) {
        self.push(name, ParamRelation::plain(rel));
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses one token list as a tuple.
pub fn parse_tuple(domain: &Domain, toks: &[&str], line: usize) -> Result<Vec<Elem>> {
    if toks == ["()"] {
        return Ok(Vec::new());
    }
    toks.iter()
        .map(|t| match domain.parse_elem(t) {
            Some(e) => Ok(e),
            None => parse_err(line, format!("unknown element {t:?}")),
        })
        .collect()
}

pub fn parse_rel(text: &str) -> Result<RelFile> {
    let mut file: Option<RelFile> = None;
    // (name, arity, signature, tuples, start line)
    let mut open: Option<(String, usize, Option<Signature>, Vec<Vec<Elem>>, usize)> = None;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let Some(f) = file.as_mut() else {
            if toks[0] != "domain" || toks.len() < 2 {
                return parse_err(ln, "expected `domain <k> [labels]`");
            }
            let k: usize = toks[1]
                .parse()
                .map_err(|_| Error::Parse { line: ln, msg: "bad domain size".into() })?;
            let d = if toks.len() == 2 {
                Domain::new(k)
            } else if toks.len() == 2 + k {
                Domain::with_labels(&toks[2..])
            } else {
                return parse_err(ln, format!("domain {k} needs {k} labels, got {}", toks.len() - 2));
            };
            file = Some(RelFile::new(d.map_err(|e| Error::Parse { line: ln, msg: e.to_string() })?));
            continue;
        };

        match (&mut open, toks[0]) {
            (None, "relation") => {
                if toks.len() != 3 {
                    return parse_err(ln, "expected `relation <name> <arity>`");
                }
                let arity: usize = toks[2]
                    .parse()
                    .map_err(|_| Error::Parse { line: ln, msg: "bad arity".into() })?;
                if f.get(toks[1]).is_some() {
                    return parse_err(ln, format!("duplicate relation {}", toks[1]));
                }
                open = Some((toks[1].to_string(), arity, None, Vec::new(), ln));
            }
            (None, _) => return parse_err(ln, format!("unexpected {:?} outside a relation", toks[0])),
            (Some((_, arity, sig, tuples, _)), "param") => {
                if sig.is_some() || !tuples.is_empty() {
                    return parse_err(ln, "`param` must directly follow `relation`");
                }
                let s = parse_param(&toks, ln)?;
                if s.arity() != *arity {
                    return parse_err(ln, format!("param groups sum to {} but arity is {arity}", s.arity()));
                }
                *sig = Some(s);
            }
            (Some(_), "end") => {
                let (name, arity, sig, tuples, start) = open.take().expect("open relation");
                let rel = Relation::from_tuples(&f.domain, arity, &tuples)
                    .map_err(|e| Error::Parse { line: start, msg: e.to_string() })?;
                let p = match sig {
                    Some(s) => ParamRelation::new(rel, s)
                        .map_err(|e| Error::Parse { line: start, msg: e.to_string() })?,
                    None => ParamRelation::plain(rel),
                };
                f.push(name, p);
            }
            (Some((_, arity, _, tuples, _)), _) => {
                let t = parse_tuple(&f.domain, &toks, ln)?;
                if t.len() != *arity {
                    return parse_err(ln, format!("tuple has {} entries, arity is {arity}", t.len()));
                }
                tuples.push(t);
            }
        }
    }
    if let Some((name, _, _, _, start)) = open {
        return parse_err(start, format!("relation {name} is missing `end`"));
    }
    file.ok_or(Error::Parse { line: 0, msg: "missing `domain` line".into() })
}

fn parse_param(toks: &[&str], ln: usize) -> Result<Signature> {
    let keys = ["param", "z", "delta", "alpha", "value"];
    if toks.len() != 9 || (0..5).any(|i| toks[if i == 0 { 0 } else { 2 * i - 1 }] != keys[i]) {
        return parse_err(ln, "expected `param z <n> delta <k> alpha <m> value <t>`");
    }
    let num = |s: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| Error::Parse { line: ln, msg: format!("bad number {s:?}") })
    };
    Ok(Signature::new(num(toks[2])?, num(toks[4])?, num(toks[6])?, num(toks[8])?))
}

pub fn write_rel(file: &RelFile) -> String {
    let d = &file.domain;
    let mut out = format!("domain {}", d.size());
    if let Some(labels) = d.labels() {
        out.push(' ');
        out.push_str(&labels.join(" "));
    }
    out.push('\n');
    for (name, p) in &file.entries {
        let r = p.base();
        out.push_str(&format!("relation {name} {}\n", r.arity()));
        let s = p.sig();
        if !s.is_plain() {
            out.push_str(&format!(
                "param z {} delta {} alpha {} value {}\n",
                s.z, s.delta, s.alpha, s.value
            ));
        }
        for t in r.iter() {
            out.push_str(&d.format_tuple(&t));
            out.push('\n');
        }
        out.push_str("end\n");
    }
    out
}
