use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};

use qcsp_core::corpus;
use qcsp_core::gamesolver::{arc_consistency, eval_qcsp, eval_restricted, solve_csp, solve_pi2_style, CspInstance};
use qcsp_core::inducedcsp::{build_induced, check_equivalence_lemma};
use qcsp_core::mightytuples::{check_mighty, MightyKind, MightyTuple};
use qcsp_core::qcspmodel::text::{read_qcsp, write_qcsp};
use qcsp_core::qcspmodel::{check_polymorphism, g_operation, QcspInstance, Quantifier};
use qcsp_core::reductions::{
    canonical_v_relations, encode_pi2_1in3, encode_q3cnf_complement, parse_1in3, parse_qdimacs, q_phi_operator,
};
use qcsp_core::relcore::capacity::set_max_positions;
use qcsp_core::relcore::text::{parse_rel, parse_tuple, RelFile};
use qcsp_core::verify::{self, Suite, SuiteOptions};
use qcsp_core::Elem;

use super::{Command, Global, MightyAction, ReduceKind};

const ENCODER_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs one command. `Ok(true)` maps to exit 0 and `Ok(false)` to exit 1.
pub fn run(g: &Global, cmd: Command) -> Result<bool> {
    if let Some(n) = g.max_positions {
        set_max_positions(n)?;
    }
    let start = Instant::now();
    let res = match cmd {
        Command::Solve {
            path,
            strategy,
            restrict,
            pi2,
        } => solve(&path, strategy, restrict.as_deref(), pi2),
        Command::Csp { path, ac } => csp(&path, ac),
        Command::Induced {
            rel,
            relation,
            rounds,
            check,
        } => induced(g, &rel, relation.as_deref(), rounds, check),
        Command::Reduce { kind, input } => reduce(g, kind, &input),
        Command::Tphi { input } => tphi(&input),
        Command::Mighty {
            action: MightyAction::Check { kind, rel },
        } => mighty_check(&kind, &rel),
        Command::Poly { rel } => poly(rel.as_deref()),
        Command::Verify {
            suite,
            samples,
            size,
            max_vars,
        } => verify_cmd(g, &suite, samples, size, max_vars),
        Command::Bench { samples } => bench(g, samples),
    };
    if g.verbose > 0 {
        eprintln!("elapsed {:.3?}", start.elapsed());
    }
    res
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> Result<QcspInstance> {
    read_qcsp(path).with_context(|| format!("loading {}", path.display()))
}

fn truth_line(t: bool) -> &'static str {
    if t {
        "TRUE"
    } else {
        "FALSE"
    }
}

fn fmt_tuple(inst: &QcspInstance, t: &[Elem]) -> String {
    if t.is_empty() {
        "()".into()
    } else {
        inst.domain.format_tuple(t)
    }
}

/// Universal plays, one per line, written like `.rel` tuples.
fn read_plays(path: &Path, inst: &QcspInstance) -> Result<Vec<Vec<Elem>>> {
    let text = read(path)?;
    let mut plays = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks == ["()"] {
            plays.push(Vec::new());
            continue;
        }
        plays.push(parse_tuple(&inst.domain, &toks, i + 1).with_context(|| format!("in {}", path.display()))?);
    }
    Ok(plays)
}

fn solve(path: &Path, strategy: bool, restrict: Option<&Path>, pi2: bool) -> Result<bool> {
    let inst = load_instance(path)?;
    if pi2 {
        let t = solve_pi2_style(&inst).context("the Π₂ solver needs a sentence over the six-element language")?;
        println!("{}", truth_line(t));
        return Ok(t);
    }
    if let Some(r) = restrict {
        let plays = read_plays(r, &inst)?;
        let t = eval_restricted(&inst, &plays)?;
        println!("{}", truth_line(t));
        return Ok(t);
    }
    let res = eval_qcsp(&inst, strategy)?;
    println!("{}", truth_line(res.truth));
    if let Some(s) = res.strategy.filter(|_| strategy) {
        let univ: Vec<&str> = inst
            .prefix
            .iter()
            .filter(|(q, _)| *q == Quantifier::Forall)
            .map(|(_, v)| v.as_str())
            .collect();
        for t in &s.tables {
            let seen = &univ[..t.moves.keys().next().map_or(0, |k| k.len())];
            println!("table {} ({})", t.var, seen.join(" "));
            for (play, v) in &t.moves {
                println!("  {} -> {}", fmt_tuple(&inst, play), inst.domain.label(*v));
            }
        }
    }
    Ok(res.truth)
}

fn csp(path: &Path, ac: bool) -> Result<bool> {
    let inst = load_instance(path)?;
    if let Some((_, v)) = inst.prefix.iter().find(|(q, _)| *q == Quantifier::Forall) {
        bail!("{v} is universally quantified; use `solve` for quantified sentences");
    }
    let mut c = CspInstance::new(inst.domain.clone());
    for (_, v) in &inst.prefix {
        c.add_var(v.clone());
    }
    for (r, scope) in inst.compiled() {
        c.add_constraint(Arc::new(r.clone()), scope)?;
    }
    if ac {
        match arc_consistency(&c) {
            None => println!("arc consistency: wipe-out"),
            Some(doms) => {
                for ((_, v), m) in inst.prefix.iter().zip(doms) {
                    let vals: Vec<String> = (0..inst.domain.size() as Elem)
                        .filter(|&e| m >> e & 1 == 1)
                        .map(|e| inst.domain.label(e))
                        .collect();
                    println!("domain {v} {{{}}}", vals.join(" "));
                }
            }
        }
    }
    match solve_csp(&c) {
        Some(sol) => {
            println!("SAT");
            for ((_, v), e) in inst.prefix.iter().zip(sol) {
                println!("{v} = {}", inst.domain.label(e));
            }
            Ok(true)
        }
        None => {
            println!("UNSAT");
            Ok(false)
        }
    }
}

fn load_rel(path: &Path) -> Result<RelFile> {
    parse_rel(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn out_dir(g: &Global) -> Result<PathBuf> {
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn induced(g: &Global, rel: &Path, name: Option<&str>, rounds: usize, check: bool) -> Result<bool> {
    let rf = load_rel(rel)?;
    let (rname, r) = match name {
        Some(n) => (n, rf.get(n).with_context(|| format!("no relation {n} in {}", rel.display()))?),
        None => {
            let (n, r) = rf.entries.first().with_context(|| format!("{} holds no relation", rel.display()))?;
            (n.as_str(), r)
        }
    };
    if !r.sig().is_plain() {
        bail!("{rname} has parameter groups; the induced CSP takes a plain relation");
    }
    let inst = build_induced(r.base(), rounds)?;
    let q = inst.to_qcsp()?;
    let stem = format!("induced_{rname}_{rounds}");
    let (qtext, rtext) = write_qcsp(&q, &format!("{stem}.rel"));
    if g.out.is_some() {
        let dir = out_dir(g)?;
        fs::write(dir.join(format!("{stem}.qcsp")), &qtext)?;
        fs::write(dir.join(format!("{stem}.rel")), &rtext)?;
        println!("wrote {stem}.qcsp and {stem}.rel ({} variables, {} constraints)", inst.var_count(), inst.constraint_count());
    } else {
        print!("{qtext}");
    }
    if check {
        let rep = check_equivalence_lemma(r.base(), rounds)?;
        println!(
            "game {} plain {} parameterized {} strengthened {}",
            truth_line(rep.game),
            truth_line(rep.plain),
            truth_line(rep.parameterized),
            truth_line(rep.strengthened)
        );
        return Ok(rep.agree());
    }
    Ok(true)
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn reduce(g: &Global, kind: ReduceKind, input: &Path) -> Result<bool> {
    let src = read(input)?;
    let (inst, encoder) = match kind {
        ReduceKind::Q3cnf => {
            let f = parse_qdimacs(&src).with_context(|| format!("parsing {}", input.display()))?;
            (encode_q3cnf_complement(&f)?, "q3cnf-complement")
        }
        ReduceKind::Pi21in3 => {
            let f = parse_1in3(&src).with_context(|| format!("parsing {}", input.display()))?;
            (encode_pi2_1in3(&f)?, "pi2-1in3")
        }
    };
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    let dir = out_dir(g)?;
    let (qtext, rtext) = write_qcsp(&inst, &format!("{stem}.rel"));
    fs::write(dir.join(format!("{stem}.qcsp")), qtext)?;
    fs::write(dir.join(format!("{stem}.rel")), rtext)?;
    let line = format!(
        "{stem}.qcsp {stem}.rel source={} sha256={} encoder={encoder}/{ENCODER_VERSION} seed={}\n",
        input.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        sha256_hex(src.as_bytes()),
        g.seed
    );
    fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(dir.join("MANIFEST"))?
        .write_all(line.as_bytes())?;
    print!("{line}");
    Ok(true)
}

fn tphi(input: &Path) -> Result<bool> {
    let f = parse_qdimacs(&read(input)?).with_context(|| format!("parsing {}", input.display()))?;
    let (v0, v1) = canonical_v_relations();
    let out = q_phi_operator(&f, &v0, &v1)?;
    println!("formula {}", truth_line(f.truth()));
    println!("closure {}", out.display());
    Ok(true)
}

fn mighty_check(kind: &str, rel: &Path) -> Result<bool> {
    let kind: MightyKind = kind.parse()?;
    let rf = load_rel(rel)?;
    let rels = kind
        .roles()
        .iter()
        .map(|role| {
            rf.get(role)
                .cloned()
                .with_context(|| format!("kind {kind} needs a relation named {role} in {}", rel.display()))
        })
        .collect::<Result<Vec<_>>>()?;
    let t = MightyTuple::from_roles(kind, rels)?;
    let rep = check_mighty(&t)?;
    for l in rep.lines() {
        println!("{l}");
    }
    Ok(rep.passed())
}

fn poly(rel: Option<&Path>) -> Result<bool> {
    let checks = match rel {
        None => verify::polymorphism_suite()?,
        Some(p) => {
            let rf = load_rel(p)?;
            let g = g_operation();
            let mut out = Vec::new();
            for (name, r) in &rf.entries {
                let res = check_polymorphism(&g, r.base())?;
                let line = if res.holds {
                    format!("polymorphism/{name} PASS")
                } else {
                    format!(
                        "polymorphism/{name} FAIL rows ({}) map to ({})",
                        res.rows.iter().map(|t| rf.domain.format_tuple(t)).collect::<Vec<_>>().join("; "),
                        rf.domain.format_tuple(&res.image)
                    )
                };
                println!("{line}");
                out.push(res.holds);
            }
            return Ok(out.iter().all(|&b| b));
        }
    };
    for c in &checks {
        println!("{c}");
    }
    Ok(verify::all_pass(&checks))
}

fn verify_cmd(g: &Global, suite: &str, samples: Option<usize>, size: Option<usize>, max_vars: Option<usize>) -> Result<bool> {
    let suite: Suite = suite.parse()?;
    let opts = SuiteOptions {
        seed: g.seed,
        samples,
        size,
        max_vars,
    };
    let checks = verify::run_suite(suite, &opts)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "# suite {suite} seed {}", g.seed)?;
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    writeln!(out, "# {} checks, {failed} failed", checks.len())?;
    Ok(failed == 0)
}

fn bench(g: &Global, samples: usize) -> Result<bool> {
    println!("# bench seed {} samples {samples}", g.seed);
    let mut rng = corpus::rng(g.seed);
    let gamma: Vec<QcspInstance> = (0..samples).map(|_| corpus::random_gamma6_instance(&mut rng)).collect();
    let small: Vec<QcspInstance> = (0..samples).map(|_| corpus::random_qcsp(&mut rng, 3, 3, 3, 4)).collect();
    let csps: Vec<CspInstance> = (0..samples).map(|_| corpus::random_csp(&mut rng)).collect();

    let t = Instant::now();
    let mut agree = true;
    for inst in &gamma {
        agree &= eval_qcsp(inst, false)?.truth == solve_pi2_style(inst)?;
    }
    println!("game+pi2 six-element {samples} instances {:.3?}", t.elapsed());
    let t = Instant::now();
    let mut trues = 0;
    for inst in &small {
        trues += eval_qcsp(inst, false)?.truth as usize;
    }
    println!("game three-element {samples} instances {:.3?} ({trues} true)", t.elapsed());
    let t = Instant::now();
    let sat = csps.iter().filter(|c| solve_csp(c).is_some()).count();
    println!("csp {samples} instances {:.3?} ({sat} satisfiable)", t.elapsed());
    if !agree {
        println!("pi2 solver disagrees with game search");
    }
    Ok(agree)
}
