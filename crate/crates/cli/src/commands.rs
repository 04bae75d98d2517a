use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use grigorchuk::cosets::{abelian_invariants, quotient_group, reidemeister_schreier, todd_coxeter, TableStatus};
use grigorchuk::grig::{certify_torsion, split, verify_nball_proposition, GrigError, OrderSolver};
use grigorchuk::growth::{ball_free_product, ball_grigorchuk, free_product_table, GrowthTable};
use grigorchuk::lambda::{lambda_length, radius_index};
use grigorchuk::permgrp::{check_core_lemma, corpus, enumerate_subgroups, small_isomorphic, LemmaStatus, PermGroup};
use grigorchuk::presentations::{
    gamma0_coxeter_presentation, gamma_presentation, relator_u, relator_v, xi_generators, Presentation, Relator,
};
use grigorchuk::Word;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Cli, Command, Format, GroupArg, PresSource};
use crate::checks::{check_all, overall, Status};
use crate::config::Config;
use crate::{CliError, Outcome};

fn parse_word(s: &str) -> Result<Word, CliError> {
    s.parse().map_err(|e| CliError::Usage(format!("word {s:?}: {e}")))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(format: Format, value: &Value, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => to_json(value),
        Format::Text | Format::Csv => text(),
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let f = cli.format;
    match cli.command {
        Command::Reduce { words } => {
            let mut rows = Vec::new();
            for s in &words {
                let w = parse_word(s)?;
                rows.push(json!({ "input": s, "reduced": w, "length": w.len(), "lambda_length": lambda_length(&w) }));
            }
            let text = || {
                rows.iter().fold(String::new(), |mut out, r| {
                    let _ = writeln!(out, "{}", r["reduced"].as_str().unwrap_or(""));
                    out
                })
            };
            let csv = || {
                let mut out = String::from("input,reduced,length\n");
                for r in &rows {
                    let _ = writeln!(out, "{},{},{}", r["input"].as_str().unwrap_or(""), r["reduced"].as_str().unwrap_or(""), r["length"]);
                }
                out
            };
            let body = match f {
                Format::Csv => csv(),
                _ => emit(f, &json!(rows), text),
            };
            Ok(Outcome::ok(body))
        }
        Command::Order { word, depth_cap } => {
            let w = parse_word(&word)?;
            match OrderSolver::new(depth_cap).order(&w) {
                Ok(o) => Ok(Outcome::ok(emit(f, &json!({ "word": w, "order": o }), || format!("{o}\n")))),
                Err(GrigError::ExceedsCap(x)) => Err(CliError::Cap(format!("order recursion exceeded its cap at {x}"))),
                Err(e) => Err(CliError::Usage(e.to_string())),
            }
        }
        Command::Split { word } => {
            let w = parse_word(&word)?;
            let s = split(&w).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Outcome::ok(emit(f, &json!({ "word": w, "w0": s.w0, "w1": s.w1 }), || format!("({}, {})\n", s.w0, s.w1))))
        }
        Command::Certify { word, level } => {
            let w = parse_word(&word)?;
            let level = level.unwrap_or_else(|| radius_index(w.len().max(1) as u64));
            match certify_torsion(&w, level) {
                Ok(cert) => {
                    let text = || {
                        format!(
                            "{w}: order divides 2^{} at level {level} (rule {}, depth {}, {} nodes)\n",
                            cert.exponent,
                            json!(cert.rule).as_str().unwrap_or("?"),
                            cert.depth(),
                            cert.node_count()
                        )
                    };
                    Ok(Outcome::ok(emit(f, &json!(cert), text)))
                }
                Err(fail) => {
                    let text = || format!("{w}: not certified at level {level} (|w| = {}, radius {})\n", fail.lambda_length, fail.radius);
                    Ok(Outcome { stdout: emit(f, &json!({ "failure": fail }), text), code: 1 })
                }
            }
        }
        Command::VerifyNball { n, cap } => {
            let r = verify_nball_proposition(n, cap).map_err(|e| CliError::Cap(e.to_string()))?;
            let pass = r.all_certified() && r.above_level_plus_one == 0;
            let text = || {
                let mut s = format!(
                    "{} n={n} level={} words={} certified={} max_exponent={} (bound {})\n",
                    if pass { "pass" } else { "fail" },
                    r.level,
                    r.words,
                    r.certified,
                    r.max_exponent,
                    r.level + 1
                );
                if r.above_level_plus_one > 0 {
                    let wit: Vec<String> = r.above_level_plus_one_witnesses.iter().map(|w| w.to_string()).collect();
                    let _ = writeln!(s, "exponent above level+1 for {} words: {}", r.above_level_plus_one, wit.join(" "));
                }
                for fl in &r.failures {
                    let _ = writeln!(s, "uncertified: {}", fl.word);
                }
                s
            };
            Ok(Outcome { stdout: emit(f, &json!({ "pass": pass, "report": r }), text), code: if pass { 0 } else { 1 } })
        }
        Command::Ball { n, group, budget, words } => match group {
            GroupArg::Free => {
                let b = ball_free_product(n);
                Ok(Outcome::ok(emit(f, &json!({ "group": "free", "radius": n, "ball": b.to_string() }), || format!("{b}\n"))))
            }
            GroupArg::Grig => {
                let ball = ball_grigorchuk(n, budget);
                let last = ball.table.rows.last().expect("radius 0 row");
                let reps: Vec<&Word> = if words { ball.representatives().collect() } else { Vec::new() };
                let value = json!({
                    "group": "grig",
                    "radius": n,
                    "ball": last.ball.to_string(),
                    "complete": ball.table.complete,
                    "words": reps,
                });
                let text = || {
                    let mut s = format!("{}{}\n", last.ball, if ball.table.complete { "" } else { " (partial)" });
                    for w in &reps {
                        let _ = writeln!(s, "{w}");
                    }
                    s
                };
                let body = emit(f, &value, text);
                if ball.table.complete {
                    Ok(Outcome::ok(body))
                } else {
                    Ok(Outcome { stdout: body, code: 3 })
                }
            }
        },
        Command::Growth { group, maxn, budget } => {
            let table = match group {
                GroupArg::Grig => ball_grigorchuk(maxn, budget).table,
                GroupArg::Free => free_product_table(maxn),
            };
            let body = match f {
                Format::Json => to_json(&table),
                Format::Csv => table.to_csv(),
                Format::Text => growth_text(&table),
            };
            Ok(Outcome { stdout: body, code: if table.complete { 0 } else { 3 } })
        }
        Command::Relators { level } => {
            let rows: Vec<Value> = [("u", relator_u(level)), ("v", relator_v(level))]
                .into_iter()
                .map(|(name, w)| {
                    let c = w.letter_counts();
                    json!({ "name": format!("{name}_{level}"), "word": w, "length": w.len(), "counts": { "a": c[0], "b": c[1], "c": c[2], "d": c[3] } })
                })
                .collect();
            let text = || {
                rows.iter().fold(String::new(), |mut s, r| {
                    let c = &r["counts"];
                    let _ = writeln!(
                        s,
                        "{} = {} (length {}; a:{} b:{} c:{} d:{})",
                        r["name"].as_str().unwrap_or(""),
                        r["word"].as_str().unwrap_or(""),
                        r["length"],
                        c["a"],
                        c["b"],
                        c["c"],
                        c["d"]
                    );
                    s
                })
            };
            Ok(Outcome::ok(emit(f, &json!(rows), text)))
        }
        Command::Present { level, coxeter } => {
            if level < -1 {
                return Err(CliError::Usage(format!("level must be ≥ -1, got {level}")));
            }
            let p = if coxeter { gamma0_coxeter_presentation() } else { gamma_presentation(level) };
            Ok(Outcome::ok(emit(f, &json!(p.to_string()), || p.to_string())))
        }
        Command::Coset { source, close, subgroup, xi, cap, emit_quotient, emit_subgroup_pres } => {
            coset(f, &source, &close, &subgroup, xi, cap, emit_quotient, emit_subgroup_pres)
        }
        Command::Abelianize { source, close } => {
            let p = load(&source)?;
            let p = p.with_relators(&relators(&p, &close)?);
            let inv = abelian_invariants(&p);
            Ok(Outcome::ok(emit(f, &json!({ "invariants": inv, "text": inv.to_string() }), || format!("{inv}\n"))))
        }
        Command::CoreLemma => core_lemma(f),
        Command::CheckAll { config, nball, no_timestamp } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
                    text.parse::<Config>().map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?
                }
                None => Config::default(),
            };
            if let Some(radii) = nball {
                cfg.set_nball(&radii);
            }
            let mut reports = check_all(&cfg);
            if no_timestamp {
                for r in &mut reports {
                    r.wall_ms = None;
                }
            }
            let status = overall(&reports);
            let body = match f {
                Format::Json => {
                    let mut doc = json!({ "status": status, "checks": reports });
                    if !no_timestamp {
                        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                        doc["generated_at"] = json!(secs);
                    }
                    to_json(&doc)
                }
                Format::Csv => {
                    let mut s = String::from("id,status,wall_ms\n");
                    for r in &reports {
                        let ms = r.wall_ms.map(|m| format!("{m:.3}")).unwrap_or_default();
                        let _ = writeln!(s, "{},{},{ms}", r.id, r.status.label());
                    }
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    for r in &reports {
                        let ms = r.wall_ms.map(|m| format!(" ({m:.1} ms)")).unwrap_or_default();
                        let _ = writeln!(s, "{:<12} {}{ms}", r.status.label(), r.id);
                        if r.status == Status::Fail {
                            let _ = writeln!(s, "  {}", r.anchor);
                            let _ = writeln!(s, "  {}", r.witnesses);
                        }
                    }
                    let _ = writeln!(s, "overall: {}", status.label());
                    s
                }
            };
            Ok(Outcome { stdout: body, code: if status == Status::Fail { 1 } else { 0 } })
        }
    }
}

fn growth_text(t: &GrowthTable) -> String {
    let wb = t.rows.iter().map(|r| r.ball.to_string().len()).max().unwrap_or(0).max(4);
    let ws = t.rows.iter().map(|r| r.sphere.to_string().len()).max().unwrap_or(0).max(6);
    let mut s = format!("radius  {:>wb$}  {:>ws$}  ln(ball)/radius\n", "ball", "sphere");
    for r in &t.rows {
        let e = r.entropy.map(|e| e.to_decimal(6)).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "{:>6}  {:>wb$}  {:>ws$}  {e}", r.radius, r.ball.to_string(), r.sphere.to_string());
    }
    if !t.complete {
        s.push_str("(budget exceeded; last row is partial)\n");
    }
    s
}

fn load(source: &PresSource) -> Result<Presentation, CliError> {
    if let Some(path) = &source.pres {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        return text.parse().map_err(|e| CliError::Usage(format!("{}: {e}", path.display())));
    }
    match source.level {
        Some(n) if n < -1 => Err(CliError::Usage(format!("level must be ≥ -1, got {n}"))),
        Some(n) => Ok(gamma_presentation(n)),
        None => Ok(gamma0_coxeter_presentation()),
    }
}

/// Words over `abcd` are mapped into the presentation (so `c` becomes `bd`
/// in the Coxeter form of Γ_0); anything else uses the `rel:` syntax.
fn relators(p: &Presentation, words: &[String]) -> Result<Vec<Relator>, CliError> {
    words
        .iter()
        .map(|s| {
            let s = s.trim();
            if let Ok(w) = s.parse::<Word>() {
                if let Ok(r) = p.relator_from_word(&w) {
                    return Ok(r);
                }
            }
            p.parse_relator(s).map_err(|e| CliError::Usage(format!("relator {s:?}: {e}")))
        })
        .collect()
}

fn identify(q: &PermGroup) -> Option<&'static str> {
    if q.order() > 64 {
        return None;
    }
    let mut known: Vec<(&'static str, PermGroup)> = vec![
        ("1", corpus::cyclic(1)),
        ("Z/2", corpus::cyclic(2)),
        ("Z/4", corpus::cyclic(4)),
        ("Z/2 x Z/2", corpus::klein_four()),
        ("Z/8", corpus::cyclic(8)),
        ("D_8", corpus::dihedral(4)),
        ("(Z/2)^3", corpus::elementary_abelian_8()),
        ("A_4", corpus::a4()),
        ("Z/2 x D_8", corpus::z2_times_d8()),
        ("D_16", corpus::d16()),
        ("Z/16", corpus::cyclic(16)),
    ];
    known.retain(|(_, g)| g.order() == q.order());
    known.into_iter().find(|(_, g)| small_isomorphic(q, g)).map(|(name, _)| name)
}

#[allow(clippy::too_many_arguments)]
fn coset(
    f: Format,
    source: &PresSource,
    close: &[String],
    subgroup: &[String],
    xi: bool,
    cap: usize,
    emit_quotient: bool,
    emit_subgroup_pres: bool,
) -> Result<Outcome, CliError> {
    let base = load(source)?;
    let p = base.with_relators(&relators(&base, close)?);
    let sub = if xi {
        xi_generators().iter().map(|w| p.relator_from_word(w)).collect::<Result<Vec<_>, _>>().map_err(|e| CliError::Usage(e.to_string()))?
    } else {
        relators(&p, subgroup)?
    };
    let t = todd_coxeter(&p, &sub, cap);
    if t.status == TableStatus::Overflowed {
        let value = json!({ "index": Value::Null, "status": t.status, "live_cosets": t.index(), "defined": t.total_defined, "cap": cap });
        let body = emit(f, &value, || format!("overflowed: {} live cosets at cap {cap}\n", t.index()));
        return Ok(Outcome { stdout: body, code: 3 });
    }
    let mut value = json!({ "index": t.index(), "status": t.status, "consistent": t.is_consistent(&p) });
    let mut text = format!("index {}\n", t.index());
    if emit_quotient {
        let q = quotient_group(&t).map_err(|e| CliError::Usage(e.to_string()))?;
        let gens: Vec<String> = q.generators().iter().map(|g| g.to_string()).collect();
        let iso = if sub.is_empty() { identify(&q) } else { None };
        value["quotient"] = json!({
            "order": q.order(),
            "generators": p.generators.iter().zip(&gens).map(|(n, g)| json!({ "name": n, "permutation": g })).collect::<Vec<_>>(),
            "isomorphic_to": iso,
        });
        for (n, g) in p.generators.iter().zip(&gens) {
            let _ = writeln!(text, "{n} -> {g}");
        }
        if let Some(name) = iso {
            let _ = writeln!(text, "quotient ≅ {name}");
        }
    }
    if emit_subgroup_pres {
        // the table is also a coset table of the base group, for the preimage
        // of the enumerated subgroup; rewrite against the base relators
        let sp = reidemeister_schreier(&base, &t).map_err(|e| CliError::Usage(e.to_string()))?;
        value["subgroup_presentation"] = json!(sp.to_string());
        text.push_str(&sp.to_string());
    }
    Ok(Outcome::ok(emit(f, &value, || text)))
}

fn core_lemma(f: Format) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut failed = false;
    let mut groups = corpus::two_groups();
    groups.push(("A4", corpus::a4()));
    for (name, g) in groups {
        let subs = enumerate_subgroups(&g).map_err(|e| CliError::Cap(e.to_string()))?;
        let (mut pass, mut fail, mut inapplicable) = (0, 0, 0);
        for h in &subs {
            match check_core_lemma(&g, h).map_err(|e| CliError::Cap(e.to_string()))?.status {
                LemmaStatus::Pass => pass += 1,
                LemmaStatus::Fail => fail += 1,
                LemmaStatus::Inapplicable => inapplicable += 1,
            }
        }
        failed |= fail > 0;
        rows.push(json!({ "group": name, "order": g.order(), "subgroups": subs.len(), "pass": pass, "fail": fail, "inapplicable": inapplicable }));
    }
    let text = || {
        let mut s = String::from("group      order  subgroups  pass  fail  inapplicable\n");
        for r in &rows {
            let _ = writeln!(
                s,
                "{:<10} {:>5}  {:>9}  {:>4}  {:>4}  {:>12}",
                r["group"].as_str().unwrap_or(""),
                r["order"].as_u64().unwrap_or(0),
                r["subgroups"].as_u64().unwrap_or(0),
                r["pass"].as_u64().unwrap_or(0),
                r["fail"].as_u64().unwrap_or(0),
                r["inapplicable"].as_u64().unwrap_or(0)
            );
        }
        s
    };
    let body = emit(f, &json!(rows), text);
    Ok(Outcome { stdout: body, code: if failed { 1 } else { 0 } })
}
