//! The `.qcsp` instance format.
//!
//! ```text
//! domain 2
//! use eq.rel
//! prefix A x E y
//! cons EQ x y
//! ```
//!
//! `use` paths are resolved by the caller-supplied loader, normally relative
//! to the instance file. Several `prefix` lines concatenate.

use std::path::Path;

use super::instance::{Constraint, Library, QcspInstance, Quantifier};
use crate::error::{parse_err, Error, Result};
use crate::relcore::text::{parse_rel, write_rel, RelFile};
use crate::relcore::Domain;

pub fn parse_qcsp(text: &str, load: &mut dyn FnMut(&str) -> Result<String>) -> Result<QcspInstance> {
    let mut size: Option<usize> = None;
    let mut domain: Option<Domain> = None;
    let mut library = Library::new();
    let mut prefix = Vec::new();
    let mut constraints = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if size.is_none() && toks[0] != "domain" {
            return parse_err(ln, "expected `domain <k>` first");
        }
        match toks[0] {
            "domain" => {
                if size.is_some() || toks.len() != 2 {
                    return parse_err(ln, "expected a single `domain <k>` line");
                }
                let k: usize = toks[1]
                    .parse()
                    .map_err(|_| Error::Parse { line: ln, msg: "bad domain size".into() })?;
                size = Some(k);
            }
            "use" => {
                if toks.len() != 2 {
                    return parse_err(ln, "expected `use <file.rel>`");
                }
                let body = load(toks[1]).map_err(|e| Error::Parse { line: ln, msg: format!("{}: {e}", toks[1]) })?;
                let f = parse_rel(&body).map_err(|e| Error::Parse { line: ln, msg: format!("{}: {e}", toks[1]) })?;
                if Some(f.domain.size()) != size {
                    return parse_err(ln, format!("{} has domain size {}", toks[1], f.domain.size()));
                }
                match &domain {
                    None => domain = Some(f.domain.clone()),
                    Some(d) if d.labels() != f.domain.labels() => {
                        return parse_err(ln, format!("{} uses different labels", toks[1]));
                    }
                    _ => {}
                }
                for (name, p) in f.entries {
                    if library.insert(name.clone(), p.into_base()).is_some() {
                        return parse_err(ln, format!("relation {name} defined twice"));
                    }
                }
            }
            "prefix" => {
                if toks.len() % 2 != 1 {
                    return parse_err(ln, "prefix tokens come in pairs `A v` / `E v`");
                }
                for pair in toks[1..].chunks(2) {
                    let q = match pair[0] {
                        "A" => Quantifier::Forall,
                        "E" => Quantifier::Exists,
                        other => return parse_err(ln, format!("unknown quantifier {other:?}")),
                    };
                    prefix.push((q, pair[1].to_string()));
                }
            }
            "cons" => {
                if toks.len() < 2 {
                    return parse_err(ln, "expected `cons <rel> <vars…>`");
                }
                constraints.push(Constraint::new(toks[1], toks[2..].iter().copied()));
            }
            other => return parse_err(ln, format!("unknown directive {other:?}")),
        }
    }
    let Some(k) = size else {
        return parse_err(last_line, "missing `domain` line");
    };
    let domain = match domain {
        Some(d) => d,
        None => Domain::new(k).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?,
    };
    QcspInstance::new(domain, library, prefix, constraints)
        .map_err(|e| Error::Parse { line: last_line, msg: e.to_string() })
}

/// Reads an instance file, resolving `use` lines relative to its directory.
pub fn read_qcsp(path: &Path) -> Result<QcspInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_qcsp(&text, &mut |name| {
        let p = dir.join(name);
        std::fs::read_to_string(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
    })
}

/// Renders an instance as a `.qcsp` text referring to `rel_name`, plus the
/// `.rel` text holding its library.
pub fn write_qcsp(inst: &QcspInstance, rel_name: &str) -> (String, String) {
    let mut q = format!("domain {}\nuse {rel_name}\n", inst.domain.size());
    if !inst.prefix.is_empty() {
        q.push_str("prefix");
        for (quant, v) in &inst.prefix {
            q.push_str(&format!(" {} {v}", quant.letter()));
        }
        q.push('\n');
    }
    for c in &inst.constraints {
        q.push_str(&format!("cons {}", c.rel));
        for v in &c.vars {
            q.push(' ');
            q.push_str(v);
        }
        q.push('\n');
    }
    let mut rf = RelFile::new(inst.domain.clone());
    for (name, r) in &inst.library {
        rf.push_plain(name.clone(), r.clone());
    }
    (q, write_rel(&rf))
}
