//! The `check-all` suite: every verification in a fixed order.

use std::time::Instant;

use grigorchuk::cosets::{abelian_invariants, quotient_group, reidemeister_schreier, todd_coxeter, CosetTable};
use grigorchuk::grig::{
    contraction_check_with, letter_contraction_sides, random_reduced_word, verify_nball_proposition, OrderSolver,
};
use grigorchuk::growth::{ball_free_product_series, ball_grigorchuk_with, distinct_signatures, Pipeline};
use grigorchuk::lambda::{lambda_power, log_lambda, power_brackets, radius_index, standard_weights};
use grigorchuk::permgrp::{check_core_lemma, corpus, enumerate_subgroups, small_isomorphic, LemmaStatus, PermGroup, Permutation};
use grigorchuk::presentations::{
    closed_form_check, gamma0_coxeter_presentation, gamma_presentation, index_bounds, xi_generators, Presentation,
    Relator,
};
use grigorchuk::{Cubic, Int as BigInt, Letter, Weights, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Skipped,
    Inapplicable,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Skipped => "skipped",
            Status::Inapplicable => "inapplicable",
            Status::Fail => "fail",
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    /// The statement being checked, or "plumbing" for internal consistency.
    pub anchor: String,
    pub status: Status,
    pub witnesses: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

fn report(id: &str, anchor: &str, status: Status, witnesses: Value) -> CheckReport {
    CheckReport { id: id.to_string(), anchor: anchor.to_string(), status, witnesses, wall_ms: None }
}

fn weights(cfg: &Config) -> Weights {
    match &cfg.weight_c {
        Some(c) => standard_weights().with_weight(Letter::C, c.clone()),
        None => standard_weights().clone(),
    }
}

fn check_weights(cfg: &Config) -> CheckReport {
    let t = weights(cfg);
    let [a, b, c, d] = Letter::ALL.map(|l| t.weight(l).clone());
    let identities = [
        ("|a|+|c| = λ^-1", &a + &c, lambda_power(-1)),
        ("|a|+|d| = λ^-2", &a + &d, lambda_power(-2)),
        ("|b| = 1-|a|", b.clone(), &Cubic::one() - &a),
        ("|b| = λ^-3", b.clone(), lambda_power(-3)),
        ("|b| = |c|+|d|", b.clone(), &c + &d),
    ];
    let failed: Vec<Value> = identities
        .iter()
        .filter(|(_, l, r)| l != r)
        .map(|(name, l, r)| json!({ "identity": name, "lhs": l.to_string(), "rhs": r.to_string() }))
        .collect();
    report(
        "weights",
        "Letter weights in Q(λ): |a|+|c| = λ^-1, |a|+|d| = λ^-2, |b| = 1-|a| = λ^-3 = |c|+|d|",
        Status::of(failed.is_empty()),
        json!({ "weights": [a.to_string(), b.to_string(), c.to_string(), d.to_string()], "failed": failed }),
    )
}

fn check_eq1(cfg: &Config) -> CheckReport {
    let t = weights(cfg);
    let mut rows = Vec::new();
    let mut ok = true;
    for xi in [Letter::B, Letter::C, Letter::D] {
        let (lhs, rhs) = letter_contraction_sides(xi, &t);
        let eq = lhs == rhs;
        ok &= eq;
        rows.push(json!({ "letter": xi.as_char().to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string(), "equal": eq }));
    }
    report("eq1", "For ξ in {b,c,d}: |ξ_0|+|ξ_1| = λ^-1(|ξ|+|a|), exactly", Status::of(ok), json!(rows))
}

fn check_lemma_ineq(cfg: &Config) -> CheckReport {
    let t = weights(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut strict = 0usize;
    let mut violations = Vec::new();
    for _ in 0..cfg.samples {
        let len = rng.gen_range(1..=40);
        let w = random_reduced_word(&mut rng, len);
        let r = contraction_check_with(&w, &t);
        if !r.weak_holds {
            violations.push(json!({ "word": w, "kind": "weak", "lhs": r.lhs, "bound": r.weak_bound }));
        }
        let m = contraction_check_with(&w.min_conjugate(), &t);
        if let (Some(false), Some(bound)) = (m.strict_holds, &m.strict_bound) {
            violations.push(json!({ "word": m.x, "kind": "strict", "lhs": m.lhs, "bound": bound }));
        }
        strict += usize::from(m.strict_holds.is_some());
    }
    violations.truncate(16);
    report(
        "lemma-ineq",
        "|x_0|+|x_1| ≤ λ^-1(|x|+|a|) for all x; ≤ λ^-1|x| for minimal conjugates outside {b,c,d}",
        Status::of(violations.is_empty()),
        json!({ "samples": cfg.samples, "strict_checked": strict, "seed": cfg.seed, "violations": violations }),
    )
}

fn check_orders() -> CheckReport {
    let mut solver = OrderSolver::default();
    let table = [("a", 2u64), ("b", 2), ("c", 2), ("d", 2), ("ad", 4), ("ac", 8), ("ab", 16)];
    let mut ok = true;
    let mut rows = serde_json::Map::new();
    for (s, want) in table {
        let w: Word = s.parse().expect("literal");
        let got = solver.order(&w).ok();
        ok &= got == Some(want);
        rows.insert(s.to_string(), json!(got));
    }
    report("order-table", "Generators have order 2 and ad has order 4 in Γ; ac: 8, ab: 16", Status::of(ok), Value::Object(rows))
}

fn check_nball(n: usize, cfg: &Config) -> CheckReport {
    let id = format!("nball-{n}");
    let anchor = "Every element of the n-ball of Γ_{i(n)} is 2^{i(n)+1}-torsion, i(n) = ⌊log_λ(n) - 1⌋";
    match verify_nball_proposition(n, cfg.bfs_budget) {
        Ok(r) => {
            let ok = r.all_certified() && r.above_level_plus_one == 0;
            report(
                &id,
                anchor,
                Status::of(ok),
                json!({
                    "n": n,
                    "level": r.level,
                    "words": r.words,
                    "certified": r.certified,
                    "failures": r.failures,
                    "max_exponent": r.max_exponent,
                    "exponent_histogram": r.exponent_histogram,
                    "above_level_plus_one": r.above_level_plus_one,
                    "above_level_plus_one_witnesses": r.above_level_plus_one_witnesses,
                    "above_level_plus_two": r.above_level_plus_two,
                }),
            )
        }
        Err(e) => report(&id, anchor, Status::Fail, json!({ "error": e.to_string() })),
    }
}

fn closure(p: &Presentation, words: &[&str]) -> Presentation {
    let extra: Vec<Relator> = words.iter().map(|s| p.relator_from_word(&s.parse().expect("literal")).expect("letters")).collect();
    p.with_relators(&extra)
}

fn check_cosets(cfg: &Config) -> Vec<CheckReport> {
    let g0 = gamma0_coxeter_presentation();
    let l = todd_coxeter(&closure(&g0, &["ab"]), &[], cfg.coset_cap);
    let h = todd_coxeter(&closure(&g0, &["abab"]), &[], cfg.coset_cap);
    let iso = h.is_complete()
        && quotient_group(&h).map(|q| small_isomorphic(&q, &corpus::z2_times_d8())).unwrap_or(false);
    let sub: Vec<Relator> = xi_generators().iter().map(|w| g0.relator_from_word(w).expect("letters")).collect();
    let xi = todd_coxeter(&g0, &sub, cfg.coset_cap);
    vec![
        report(
            "coset-l-index",
            "L = ⟨⟨ab⟩⟩ has index 4 in Γ_0",
            Status::of(l.is_complete() && l.index() == 4),
            json!({ "index": l.index(), "status": l.status }),
        ),
        report(
            "coset-h0-quotient",
            "Γ_0/⟨⟨(ab)^2⟩⟩ ≅ Z/2 × D_8 (order 16)",
            Status::of(h.is_complete() && h.index() == 16 && iso),
            json!({ "index": h.index(), "status": h.status, "isomorphic_to_z2_x_d8": iso }),
        ),
        report(
            "coset-xi-index",
            "The parity kernel Ξ_0 has index 2 in Γ_0",
            Status::of(xi.is_complete() && xi.index() == 2),
            json!({ "index": xi.index(), "status": xi.status }),
        ),
    ]
}

fn check_h0(cfg: &Config) -> CheckReport {
    let anchor = "H_0 = ⟨⟨(ab)^2⟩⟩ is free of rank 3, so its abelianization is Z^3";
    let g0 = gamma0_coxeter_presentation();
    let h0 = vec![g0.relator_from_word(&"abab".parse().expect("literal")).expect("letters")];
    let q = todd_coxeter(&g0.with_relators(&h0), &[], cfg.coset_cap);
    let table = CosetTable { subgroup: h0, ..q };
    match reidemeister_schreier(&g0, &table) {
        Ok(sub) => {
            let inv = abelian_invariants(&sub);
            report(
                "h0-abelianization",
                anchor,
                Status::of(inv.is_free_abelian(3)),
                json!({ "schreier_generators": sub.num_generators(), "relators": sub.relators.len(), "invariants": inv, "text": inv.to_string() }),
            )
        }
        Err(e) => report("h0-abelianization", anchor, Status::Fail, json!({ "error": e.to_string() })),
    }
}

fn check_abelianization() -> CheckReport {
    let two = BigInt::from(2);
    let mut rows = serde_json::Map::new();
    let mut ok = true;
    for (name, p) in [("gamma_-1", gamma_presentation(-1)), ("gamma_0", gamma_presentation(0)), ("gamma_0_coxeter", gamma0_coxeter_presentation())] {
        let inv = abelian_invariants(&p);
        ok &= inv.free_rank == 0 && inv.torsion == vec![two.clone(), two.clone(), two.clone()];
        rows.insert(name.to_string(), json!(inv.to_string()));
    }
    report("abelianization", "The abelianization of Γ_{-1} is the F_2-vector space on a, b, d", Status::of(ok), Value::Object(rows))
}

fn check_index_bounds() -> CheckReport {
    let b0 = index_bounds(0);
    let base = b0.alpha == BigInt::from(4) && b0.beta == BigInt::from(0);
    let bad: Vec<u32> = (0..=20).filter(|&n| !closed_form_check(n)).collect();
    report(
        "index-bounds",
        "α'_n = 4α'_{n-1}+1 = (13·4^n-1)/3 and β'_n = 2α'_{n-1}+2β'_{n-1} = (13·4^n-15·2^n+2)/3",
        Status::of(base && bad.is_empty()),
        json!({ "alpha_0": b0.alpha.to_string(), "beta_0": b0.beta.to_string(), "alpha_20": index_bounds(20).alpha.to_string(), "mismatches": bad }),
    )
}

fn check_core_lemma_corpus() -> CheckReport {
    let mut applicable = 0usize;
    let mut violations = Vec::new();
    let mut groups = serde_json::Map::new();
    for (name, g) in corpus::two_groups() {
        let subs = enumerate_subgroups(&g).expect("small group");
        let mut pass = 0;
        for h in &subs {
            let r = check_core_lemma(&g, h).expect("subgroup");
            match r.status {
                LemmaStatus::Pass => pass += 1,
                LemmaStatus::Fail => violations.push(json!({ "group": name, "report": r, "subgroup": h.to_cycle_notation() })),
                LemmaStatus::Inapplicable => {}
            }
        }
        applicable += pass;
        groups.insert(name.to_string(), json!({ "order": g.order(), "subgroups": subs.len(), "applicable": pass }));
    }
    let h = PermGroup::generate(vec![Permutation::from_cycles(4, &[&[0, 1, 2]]).expect("cycle")]).expect("small");
    let a4 = check_core_lemma(&corpus::a4(), &h).expect("subgroup");
    let sharp = a4.status == LemmaStatus::Inapplicable && a4.core_index == 12;
    report(
        "core-lemma",
        "If H has index 2^a and its normalizer index ≤ 2, the core has index 2^b with b ≤ 2a-1; A_4 ⊃ C_3 gives core index 12",
        Status::of(violations.is_empty() && sharp),
        json!({ "groups": groups, "applicable": applicable, "violations": violations, "a4": a4 }),
    )
}

fn check_growth(cfg: &Config) -> CheckReport {
    let s = ball_grigorchuk_with(8, Pipeline::Signature, Letter::ALL, cfg.bfs_budget);
    let p = ball_grigorchuk_with(8, Pipeline::Pure, Letter::ALL, cfg.bfs_budget);
    let free = ball_free_product_series(8);
    let sig: Vec<usize> = (0..=8).map(distinct_signatures).collect();
    let balls: Vec<String> = s.table.rows.iter().map(|r| r.ball.to_string()).collect();
    let agree = s.table == p.table && s.spheres == p.spheres;
    let sig_agree = s.table.rows.iter().all(|r| r.ball == BigInt::from(sig[r.radius]));
    let bounded = s.table.rows.iter().all(|r| r.ball <= free[r.radius]);
    report(
        "growth-pipelines",
        "plumbing: BFS ball sizes of Γ for n ≤ 8 agree across pipelines and stay below Γ_{-1}",
        Status::of(s.table.complete && agree && sig_agree && bounded),
        json!({ "balls": balls, "pipelines_agree": agree, "signature_counts_agree": sig_agree, "below_free_product": bounded }),
    )
}

fn check_radius_index(cfg: &Config) -> CheckReport {
    let mut bad = Vec::new();
    let mut prev = i32::MIN;
    for n in 1..=cfg.radius_max {
        let i = radius_index(n);
        if i < prev || !power_brackets(n, i + 1, i + 2) {
            bad.push(n);
            if bad.len() >= 16 {
                break;
            }
        }
        prev = i;
    }
    let examples: Vec<i32> = [2u64, 5, 10, 20].into_iter().map(radius_index).collect();
    report(
        "radius-index",
        "i(n) = ⌊log_λ(n) - 1⌋ satisfies λ^{i(n)+1} ≤ n < λ^{i(n)+2}",
        Status::of(bad.is_empty()),
        json!({ "checked_up_to": cfg.radius_max, "i_of_2_5_10_20": examples, "violations": bad }),
    )
}

fn check_log_lambda_4() -> CheckReport {
    let e = log_lambda(4);
    report(
        "log-lambda-4",
        "log_λ(4) ≅ 6.60",
        Status::of(e.rounds_to(6.60, 2)),
        json!({ "enclosure": e.to_decimal(8) }),
    )
}

fn timed(run: impl FnOnce() -> CheckReport) -> CheckReport {
    let start = Instant::now();
    let mut r = run();
    r.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    r
}

fn timed_many(run: impl FnOnce() -> Vec<CheckReport>) -> Vec<CheckReport> {
    let start = Instant::now();
    let mut rs = run();
    let share = start.elapsed().as_secs_f64() * 1e3 / rs.len().max(1) as f64;
    for r in &mut rs {
        r.wall_ms = Some(share);
    }
    rs
}

/// Run every check in order.
pub fn check_all(cfg: &Config) -> Vec<CheckReport> {
    let mut out = vec![
        timed(|| check_weights(cfg)),
        timed(|| check_eq1(cfg)),
        timed(|| check_lemma_ineq(cfg)),
        timed(check_orders),
    ];
    if cfg.nball.is_empty() {
        out.push(report("nball", "Every element of the n-ball of Γ_{i(n)} is 2^{i(n)+1}-torsion", Status::Skipped, json!("skipped: no radii configured")));
    } else {
        out.extend(cfg.nball.iter().map(|&n| timed(|| check_nball(n, cfg))));
    }
    out.extend(timed_many(|| check_cosets(cfg)));
    out.push(timed(|| check_h0(cfg)));
    out.push(timed(check_abelianization));
    out.push(timed(check_index_bounds));
    out.push(timed(check_core_lemma_corpus));
    out.push(timed(|| check_growth(cfg)));
    out.push(timed(|| check_radius_index(cfg)));
    out.push(timed(check_log_lambda_4));
    out
}

/// Worst status of a run; skipped and inapplicable checks do not fail it.
pub fn overall(reports: &[CheckReport]) -> Status {
    if reports.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    }
}
