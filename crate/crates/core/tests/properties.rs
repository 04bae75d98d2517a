use grigorchuk::cosets::{abelian_invariants, quotient_group, todd_coxeter};
use grigorchuk::grig::{
    certify_torsion, is_trivial, lemma_split_contraction_check, letter_contraction_sides, level_action, order,
    random_reduced_word, split, OrderSolver,
};
use grigorchuk::growth::{ball_free_product_series, ball_grigorchuk, ball_grigorchuk_with, Pipeline};
use grigorchuk::lambda::{lambda_length, lambda_power, radius_index, standard_weights};
use grigorchuk::permgrp::{self, check_core_lemma, corpus, enumerate_subgroups, LemmaStatus};
use grigorchuk::presentations::{
    closed_form_check, gamma0_coxeter_presentation, gamma_presentation, index_bounds, relator_u, relator_v, sigma,
    Presentation,
};
use grigorchuk::smith::smith_normal_form;
use grigorchuk::words::{enumerate_ball_free, is_reduced};
use grigorchuk::{Cubic, Int, Letter, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(0usize..4, 0..50).prop_map(|v| v.into_iter().map(|i| Letter::ALL[i]).collect())
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..4, 0..max).prop_map(|v| Word::reduce(v.into_iter().map(|i| Letter::ALL[i])))
}

fn even_word(max: usize) -> impl Strategy<Value = Word> {
    word(max).prop_map(|w| if w.a_parity() == 1 { w.times(Letter::A) } else { w })
}

fn cubic() -> impl Strategy<Value = Cubic> {
    let q = (-50i64..50, 1i64..20).prop_map(|(n, d)| BigRational::new(n.into(), d.into()));
    (q.clone(), q.clone(), q).prop_map(|(a, b, c)| Cubic::new(a, b, c))
}

fn raw_weight(raw: &[Letter]) -> Cubic {
    let mut counts = [0u64; 4];
    for l in raw {
        counts[l.index()] += 1;
    }
    standard_weights().length_of_counts(&counts)
}

// ---- words ----

#[test]
fn reduce_idempotent_exhaustive_to_twelve() {
    let mut raw = Vec::with_capacity(12);
    for len in 0..=12u32 {
        for code in 0..4u32.pow(len) {
            raw.clear();
            let mut c = code;
            for _ in 0..len {
                raw.push(Letter::ALL[(c % 4) as usize]);
                c /= 4;
            }
            let w = Word::reduce(raw.iter().copied());
            assert!(is_reduced(w.letters()));
            assert_eq!(Word::reduce(w.letters().iter().copied()), w);
        }
    }
}

#[test]
fn free_ball_matches_recurrence() {
    let series = ball_free_product_series(20);
    assert_eq!(enumerate_ball_free(20, 1 << 20).unwrap().len(), series[20].to_string().parse::<usize>().unwrap());
    for n in [0usize, 1, 2, 3, 7, 12] {
        assert_eq!(BigInt::from(enumerate_ball_free(n, 1 << 20).unwrap().len()), series[n]);
    }
}

proptest! {
    #[test]
    fn inverse_cancels(w in word(50)) {
        prop_assert!(w.multiply(&w.invert()).is_empty());
        prop_assert!(w.invert().multiply(&w).is_empty());
    }

    #[test]
    fn parity_is_a_homomorphism(u in word(30), v in word(30)) {
        prop_assert_eq!(u.multiply(&v).a_parity(), u.a_parity() ^ v.a_parity());
    }

    #[test]
    fn normal_form_is_geodesic(w in word(30), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let patterns: [&[Letter]; 7] = [
            &[Letter::A, Letter::A], &[Letter::B, Letter::B], &[Letter::C, Letter::C], &[Letter::D, Letter::D],
            &[Letter::B, Letter::C, Letter::D], &[Letter::C, Letter::D, Letter::B], &[Letter::D, Letter::B, Letter::C],
        ];
        let mut raw = w.letters().to_vec();
        for _ in 0..rng.gen_range(1..5) {
            let at = rng.gen_range(0..=raw.len());
            let p = patterns.choose(&mut rng).unwrap();
            raw.splice(at..at, p.iter().copied());
        }
        let reduced = Word::reduce(raw.iter().copied());
        prop_assert!(lambda_length(&reduced).le(&raw_weight(&raw)));
    }

    #[test]
    fn min_conjugate_minimizes_length(w in word(24), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = lambda_length(&w.min_conjugate());
        for _ in 0..100 {
            let len = rng.gen_range(0..=6);
            let g = random_reduced_word(&mut rng, len);
            prop_assert!(m.le(&lambda_length(&w.conjugate_by(&g))));
        }
    }

    // ---- lambda ----

    #[test]
    fn field_axioms(x in cubic(), y in cubic(), z in cubic()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inverse().unwrap(), Cubic::one());
        }
    }

    // ---- presentations ----

    #[test]
    fn sigma_respects_reduction(raw in letters()) {
        let raw: Vec<Letter> = raw.into_iter().take(30).collect();
        let expanded: Vec<Letter> = raw.iter().flat_map(|&l| sigma(&Word::from_reduced_unchecked(vec![l])).into_letters()).collect();
        prop_assert_eq!(Word::reduce(expanded), sigma(&Word::reduce(raw)));
    }

    #[test]
    fn sigma_is_an_endomorphism(u in word(20), v in word(20)) {
        prop_assert_eq!(sigma(&u.multiply(&v)), sigma(&u).multiply(&sigma(&v)));
    }

    // ---- grig ----

    #[test]
    fn split_is_a_homomorphism(u in even_word(30), v in even_word(30)) {
        let lhs = split(&u.multiply(&v)).unwrap();
        let rhs = split(&u).unwrap().multiply(&split(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn swap_law(w in even_word(30)) {
        let conj = Word::letter(Letter::A).multiply(&w).times(Letter::A);
        prop_assert_eq!(split(&conj).unwrap(), split(&w).unwrap().swapped());
    }

    #[test]
    fn split_contracts_word_length(w in even_word(41)) {
        let s = split(&w).unwrap();
        prop_assert!(s.w0.len() <= w.len().div_ceil(2));
        prop_assert!(s.w1.len() <= w.len().div_ceil(2));
    }

    #[test]
    fn triviality_matches_tree_action_random(w in word(24)) {
        // trivial ⇒ trivial action; nontrivial short words are separated by level 8
        if is_trivial(&w) {
            prop_assert!(level_action(&w, 8).is_identity());
        }
        if w.len() <= 16 {
            prop_assert_eq!(is_trivial(&w), level_action(&w, 8).is_identity());
        }
    }

    #[test]
    fn certificates_are_sound(w in word(30), level in 0i32..14) {
        if let Ok(cert) = certify_torsion(&w, level) {
            prop_assert!(cert.validate());
            let e = OrderSolver::default().order_log2(&w).unwrap();
            prop_assert!(e <= cert.exponent, "order 2^{} exceeds certificate 2^{}", e, cert.exponent);
        }
    }
}

#[test]
fn triviality_matches_tree_action_exhaustive() {
    for w in enumerate_ball_free(10, 1 << 20).unwrap() {
        assert_eq!(is_trivial(&w), level_action(&w, 8).is_identity(), "{w}");
    }
}

#[test]
fn orders_match_repeated_squaring() {
    let mut solver = OrderSolver::default();
    for w in enumerate_ball_free(6, 1 << 20).unwrap() {
        let e = solver.order_log2(&w).unwrap();
        let mut p = w.clone();
        let mut k = 0;
        while !is_trivial(&p) {
            p = p.multiply(&p);
            k += 1;
            assert!(k <= 16, "{w} has no small 2-power order");
        }
        assert_eq!(e, k, "{w}");
    }
}

#[test]
fn lemma_inequality_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut strict = 0;
    for _ in 0..10_000 {
        let len = rng.gen_range(1..=40);
        let w = random_reduced_word(&mut rng, len);
        let r = lemma_split_contraction_check(&w);
        assert!(r.weak_holds, "{w}");
        let m = lemma_split_contraction_check(&w.min_conjugate());
        if let Some(h) = m.strict_holds {
            assert!(h, "{}", m.x);
            strict += 1;
        }
    }
    assert!(strict > 9_000);
}

#[test]
fn eq_one_for_each_letter() {
    for xi in [Letter::B, Letter::C, Letter::D] {
        let (lhs, rhs) = letter_contraction_sides(xi, standard_weights());
        assert_eq!(lhs, rhs, "{xi:?}");
    }
}

#[test]
fn radius_index_brackets_and_is_monotone() {
    let mut prev = radius_index(2);
    let b = lambda_length(&Word::letter(Letter::B));
    for n in 2..=20_000u64 {
        let i = radius_index(n);
        assert!(i >= prev);
        prev = i;
        let nn = Cubic::from_int(n as i64);
        assert!(lambda_power(i + 1).le(&nn) && nn.lt(&lambda_power(i + 2)), "n = {n}");
        assert!(b.scale(&BigRational::from_integer(n.into())).lt(&lambda_power(i - 1)), "n = {n}");
    }
}

#[test]
fn sigma_maps_relators_forward() {
    for n in 0..8 {
        assert_eq!(sigma(&relator_u(n)), relator_u(n + 1));
        assert_eq!(sigma(&relator_v(n)), relator_v(n + 1));
    }
}

#[test]
fn index_bounds_closed_forms() {
    let b0 = index_bounds(0);
    assert_eq!((b0.alpha, b0.beta), (Int::from(4), Int::from(0)));
    assert!((0..=20).all(closed_form_check));
}

// ---- permgrp ----

#[test]
fn subgroup_orders_and_cores() {
    let mut groups = corpus::two_groups();
    groups.push(("A4", corpus::a4()));
    for (name, g) in groups {
        let subs = enumerate_subgroups(&g).unwrap();
        for h in &subs {
            assert_eq!(g.order(), permgrp::index(&g, h).unwrap() * h.order(), "{name}");
            let c = permgrp::core(&g, h).unwrap();
            assert!(c.is_normal_in(&g) && c.is_subgroup_of(h), "{name}");
            let largest = subs.iter().filter(|k| k.is_normal_in(&g) && k.is_subgroup_of(h)).map(|k| k.order()).max();
            assert_eq!(Some(c.order()), largest, "{name}");
            let report = check_core_lemma(&g, h).unwrap();
            assert_ne!(report.status, LemmaStatus::Fail, "{name}: {report:?}");
        }
    }
}

// ---- cosets ----

fn closure(p: &Presentation, words: &[&str]) -> Presentation {
    let extra: Vec<_> = words.iter().map(|s| p.relator_from_word(&s.parse().unwrap()).unwrap()).collect();
    p.with_relators(&extra)
}

#[test]
fn coset_count_ignores_relator_order() {
    let base = closure(&gamma0_coxeter_presentation(), &["abab"]);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let mut p = base.clone();
        p.relators.shuffle(&mut rng);
        let t = todd_coxeter(&p, &[], 10_000);
        assert_eq!(t.index(), 16);
        assert!(t.is_consistent(&p));
        let q = quotient_group(&t).unwrap();
        assert_eq!(q.order(), t.index());
    }
}

#[test]
fn quotient_generators_satisfy_relators() {
    for words in [&["ab"][..], &["abab"][..]] {
        let p = closure(&gamma0_coxeter_presentation(), words);
        let t = todd_coxeter(&p, &[], 10_000);
        let q = quotient_group(&t).unwrap();
        let gens = q.generators();
        for r in p.effective_relators() {
            let img = r.iter().fold(permgrp::Permutation::identity(t.index()), |acc, l| acc.compose(&gens[l.gen]));
            assert!(img.is_identity());
        }
    }
}

#[test]
fn small_indices_agree_with_permutation_groups() {
    // index of Ξ_0 and of ⟨⟨ab⟩⟩, recomputed inside the order-16 quotient
    let g0 = gamma0_coxeter_presentation();
    let q16 = quotient_group(&todd_coxeter(&closure(&g0, &["abab"]), &[], 10_000)).unwrap();
    let gens = q16.generators();
    let (a, b, d) = (&gens[0], &gens[1], &gens[2]);
    let xi = permgrp::PermGroup::generate(vec![b.clone(), d.clone(), a.compose(b).compose(a), a.compose(d).compose(a)]).unwrap();
    assert_eq!(permgrp::index(&q16, &xi).unwrap(), 2);
    let ab = a.compose(b);
    let conj: Vec<_> = q16.elements().iter().map(|g| g.inverse().compose(&ab).compose(g)).collect();
    let l = permgrp::PermGroup::generate(conj).unwrap();
    assert_eq!(permgrp::index(&q16, &l).unwrap(), 4);
}

#[test]
fn abelianized_free_product_is_elementary_abelian() {
    let p = closure(&gamma_presentation(-1), &["abab", "adad", "bdbd"]);
    let t = todd_coxeter(&p, &[], 10_000);
    let q = quotient_group(&t).unwrap();
    assert_eq!(q.order(), 8);
    assert!(permgrp::small_isomorphic(&q, &corpus::elementary_abelian_8()));
    assert_eq!(abelian_invariants(&p).torsion.len(), 3);
}

#[test]
fn smith_form_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (rows, cols) in [(5, 7), (12, 9), (30, 30), (50, 50)] {
        let m: Vec<Vec<BigInt>> =
            (0..rows).map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect()).collect();
        let s = smith_normal_form(&m, cols);
        assert!(s.verify(&m), "{rows}x{cols}");
    }
}

// ---- growth ----

#[test]
fn grig_ball_bounded_by_free_ball() {
    let g = ball_grigorchuk(12, 1 << 22);
    let f = ball_free_product_series(12);
    for row in &g.table.rows {
        assert!(row.ball <= f[row.radius]);
        assert!(row.radius == 0 || row.sphere > BigInt::from(0));
    }
}

#[test]
fn pipelines_agree_to_radius_eight() {
    let s = ball_grigorchuk_with(8, Pipeline::Signature, Letter::ALL, 1 << 22);
    let p = ball_grigorchuk_with(8, Pipeline::Pure, Letter::ALL, 1 << 22);
    let r = ball_grigorchuk_with(8, Pipeline::Signature, [Letter::C, Letter::A, Letter::D, Letter::B], 1 << 22);
    assert_eq!(s.table, p.table);
    assert_eq!(s.table, r.table);
    assert_eq!(s.spheres, r.spheres);
    for (k, sphere) in s.spheres.iter().enumerate() {
        assert!(sphere.iter().all(|w| w.len() == k));
    }
}

#[test]
fn entropy_estimates() {
    let g = ball_grigorchuk(16, 1 << 22).table;
    let f = grigorchuk::growth::free_product_table(16);
    assert!(g.rows[8].entropy.unwrap().hi < f.rows[8].entropy.unwrap().lo);
    // non-increasing over the computed tail
    for n in 10..16 {
        assert!(g.rows[n + 1].entropy.unwrap().lo <= g.rows[n].entropy.unwrap().hi, "n = {n}");
    }
}

#[test]
fn order_of_generators_and_products() {
    for (s, o) in [("a", 2), ("b", 2), ("c", 2), ("d", 2), ("ad", 4), ("ac", 8), ("ab", 16)] {
        assert_eq!(order(&s.parse().unwrap()).unwrap(), o, "{s}");
    }
}
