//! Wreath recursion of the Grigorchuk group.
//!
//! On the parity kernel Ξ the splitting `i_0` sends
//! `b ↦ (a, c)`, `c ↦ (a, d)`, `d ↦ (1, b)` and `axa ↦ (x_1, x_0)`. In the
//! limit group `Γ = Γ_∞` it is injective, which gives a word problem, exact
//! 2-power orders and a tree action. In the finite truncations `Γ_n` only
//! the recursive torsion certificate is available.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lambda::{lambda_length, lambda_power, standard_weights, CubicNumber, WeightTable};
use crate::permgrp::Permutation;
use crate::words::{enumerate_ball_free, BallOverflow, Letter, Word};
use crate::Cubic;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrigError {
    #[error("split needs an even number of a's, got {0}")]
    OddParity(Word),
    #[error("order computation exceeded its recursion cap at {0}")]
    ExceedsCap(Word),
}

/// Components `(w0, w1)` of `i_0(w)`, both reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitPair {
    pub w0: Word,
    pub w1: Word,
}

impl SplitPair {
    pub fn swapped(&self) -> SplitPair {
        SplitPair { w0: self.w1.clone(), w1: self.w0.clone() }
    }

    pub fn multiply(&self, other: &SplitPair) -> SplitPair {
        SplitPair { w0: self.w0.multiply(&other.w0), w1: self.w1.multiply(&other.w1) }
    }
}

/// Images of `b, c, d` under the splitting; `None` is the identity.
pub fn letter_sections(l: Letter) -> (Option<Letter>, Option<Letter>) {
    match l {
        Letter::A => (None, None),
        Letter::B => (Some(Letter::A), Some(Letter::C)),
        Letter::C => (Some(Letter::A), Some(Letter::D)),
        Letter::D => (None, Some(Letter::B)),
    }
}

/// `i_0(w)` for `w` with an even number of `a`s.
///
/// Scanning left to right with `p` the parity of `a`s seen so far, each
/// `ξ ∈ {b,c,d}` contributes `ξ_0` to side `p` and `ξ_1` to side `1-p`.
pub fn split(w: &Word) -> Result<SplitPair, GrigError> {
    if w.a_parity() != 0 {
        return Err(GrigError::OddParity(w.clone()));
    }
    let mut sides: [Vec<Letter>; 2] = [Vec::with_capacity(w.len() / 2 + 1), Vec::with_capacity(w.len() / 2 + 1)];
    let mut p = 0usize;
    for &l in w.letters() {
        if l.is_a() {
            p ^= 1;
            continue;
        }
        let (x0, x1) = letter_sections(l);
        if let Some(x) = x0 {
            sides[p].push(x);
        }
        if let Some(x) = x1 {
            sides[1 - p].push(x);
        }
    }
    let [s0, s1] = sides;
    Ok(SplitPair { w0: Word::reduce(s0), w1: Word::reduce(s1) })
}

/// Word problem in `Γ_∞`.
pub fn is_trivial(w: &Word) -> bool {
    if w.is_empty() {
        return true;
    }
    if w.a_parity() == 1 {
        return false;
    }
    // Reduced parity-0 words of length ≥ 2 split into strictly shorter
    // components; single letters b, c, d reach an `a` within three steps.
    let s = split(w).expect("parity checked");
    is_trivial(&s.w0) && is_trivial(&s.w1)
}

/// Equality of two words in `Γ_∞`.
pub fn equal_in_gamma(u: &Word, v: &Word) -> bool {
    is_trivial(&u.multiply(&v.invert()))
}

/// Exact orders in `Γ_∞`, memoized on minimal conjugates.
#[derive(Debug)]
pub struct OrderSolver {
    memo: HashMap<Word, u32>,
    depth_cap: usize,
}

impl Default for OrderSolver {
    fn default() -> Self {
        Self::new(512)
    }
}

impl OrderSolver {
    pub fn new(depth_cap: usize) -> Self {
        OrderSolver { memo: HashMap::new(), depth_cap }
    }

    /// `log2` of the order of `w` in `Γ_∞`.
    pub fn order_log2(&mut self, w: &Word) -> Result<u32, GrigError> {
        self.order_rec(w, 0)
    }

    pub fn order(&mut self, w: &Word) -> Result<u64, GrigError> {
        let e = self.order_log2(w)?;
        1u64.checked_shl(e).ok_or_else(|| GrigError::ExceedsCap(w.clone()))
    }

    fn order_rec(&mut self, w: &Word, depth: usize) -> Result<u32, GrigError> {
        // order is a conjugacy invariant
        let x = w.min_conjugate();
        match x.len() {
            0 => return Ok(0),
            1 => return Ok(1),
            _ => {}
        }
        if let Some(&e) = self.memo.get(&x) {
            return Ok(e);
        }
        if depth > self.depth_cap {
            return Err(GrigError::ExceedsCap(x));
        }
        let e = if x.a_parity() == 1 {
            // Odd parity means x ∉ Ξ, so x has even order and ord(x) = 2·ord(x²).
            // i_0(x²) = (x_0x_1, x_1x_0) has conjugate components, so the
            // order of x² equals the order of its first component.
            let sq = split(&x.multiply(&x)).expect("square has even parity");
            1 + self.order_rec(&sq.w0, depth + 1)?
        } else {
            // i_0 is injective on Ξ in Γ_∞, so ord(x) = lcm of component orders.
            let s = split(&x).expect("parity checked");
            let e0 = self.order_rec(&s.w0, depth + 1)?;
            let e1 = self.order_rec(&s.w1, depth + 1)?;
            e0.max(e1)
        };
        self.memo.insert(x, e);
        Ok(e)
    }
}

/// Order in `Γ_∞` with a fresh solver.
pub fn order(w: &Word) -> Result<u64, GrigError> {
    OrderSolver::default().order(w)
}

/// Image of the leaf `path` (depth `k`, top level in the high bit) under one generator.
#[inline]
pub fn act_letter(l: Letter, path: u32, k: u32) -> u32 {
    let mut cur = l;
    for depth in 0..k {
        let bit = 1u32 << (k - 1 - depth);
        let right = path & bit != 0;
        cur = match (cur, right) {
            (Letter::A, _) => return path ^ bit,
            (Letter::B, false) | (Letter::C, false) => Letter::A,
            (Letter::B, true) => Letter::C,
            (Letter::C, true) => Letter::D,
            (Letter::D, false) => return path,
            (Letter::D, true) => Letter::B,
        };
    }
    path
}

/// Permutation of the `2^k` leaves at depth `k` induced by `w` (letters act
/// left to right).
pub fn level_action(w: &Word, k: u32) -> Permutation {
    assert!(k <= 20, "level_action depth too large");
    let n = 1u32 << k;
    let images = (0..n)
        .map(|leaf| w.letters().iter().fold(leaf, |p, &l| act_letter(l, p, k)) as usize)
        .collect();
    Permutation::from_images_unchecked(images)
}

/// Outcome of checking `|x_0| + |x_1| ≤ λ⁻¹(|x| + |a|)` and, for minimal
/// conjugates outside `{b, c, d}`, `|x_0| + |x_1| ≤ λ⁻¹|x|`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContractionReport {
    pub x: Word,
    pub x_prime: Word,
    pub split: SplitPair,
    pub lhs: Cubic,
    pub weak_bound: Cubic,
    pub weak_holds: bool,
    pub minimal: bool,
    pub strict_bound: Option<Cubic>,
    pub strict_holds: Option<bool>,
}

pub fn lemma_split_contraction_check(x: &Word) -> ContractionReport {
    contraction_check_with(x, standard_weights())
}

pub fn contraction_check_with(x: &Word, weights: &WeightTable<BigRational>) -> ContractionReport {
    let x_prime = if x.a_parity() == 0 { x.clone() } else { x.times(Letter::A) };
    let s = split(&x_prime).expect("x' has even parity");
    let lhs = &weights.lambda_length(&s.w0) + &weights.lambda_length(&s.w1);
    let len_x = weights.lambda_length(x);
    let inv = lambda_power(-1);
    let weak_bound = &inv * &(&len_x + weights.weight(Letter::A));
    let weak_holds = lhs.le(&weak_bound);
    let excluded = x.len() == 1 && x.letters()[0].is_bcd();
    let min_len = weights.lambda_length(&x.min_conjugate());
    let minimal = min_len.compare(&len_x).is_eq();
    let (strict_bound, strict_holds) = if minimal && !excluded {
        let b = &inv * &len_x;
        let holds = lhs.le(&b);
        (Some(b), Some(holds))
    } else {
        (None, None)
    };
    ContractionReport { x: x.clone(), x_prime, split: s, lhs, weak_bound, weak_holds, minimal, strict_bound, strict_holds }
}

/// `|ξ_0| + |ξ_1|` and `λ⁻¹(|ξ| + |a|)` for a letter of `{b, c, d}`.
pub fn letter_contraction_sides(xi: Letter, weights: &WeightTable<BigRational>) -> (Cubic, Cubic) {
    let (x0, x1) = letter_sections(xi);
    let part = |l: Option<Letter>| l.map(|l| weights.weight(l).clone()).unwrap_or_else(CubicNumber::zero);
    let lhs = &part(x0) + &part(x1);
    let rhs = &lambda_power(-1) * &(weights.weight(xi) + weights.weight(Letter::A));
    (lhs, rhs)
}

/// Proof step recorded at a certificate node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Level -1 or 0: the element is one of the listed short words.
    BaseCase,
    /// The minimal conjugate is `1` or a generator.
    LetterCase,
    /// Even parity: split and certify both components one level down.
    InactiveSplit,
    /// Odd parity: square, split, and certify the product component.
    ActiveSquare,
}

/// Recursion tree establishing that `word` has order dividing `2^exponent`
/// in `Γ_level`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionCertificate {
    pub word: Word,
    pub level: i32,
    pub exponent: u32,
    pub rule: Rule,
    pub lambda_length: Cubic,
    pub radius: Cubic,
    /// Minimal conjugate the step was applied to.
    pub conjugate: Word,
    pub children: Vec<TorsionCertificate>,
}

impl TorsionCertificate {
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Re-check the structural invariants and every recorded comparison.
    pub fn validate(&self) -> bool {
        if !self.lambda_length.lt(&self.radius) {
            return false;
        }
        if self.lambda_length != lambda_length(&self.word) || self.radius != lambda_power(self.level - 1) {
            return false;
        }
        let kids_ok = self.children.iter().all(|c| c.level == self.level - 1 && c.validate());
        let max_child = self.children.iter().map(|c| c.exponent).max().unwrap_or(0);
        let shape_ok = match self.rule {
            Rule::BaseCase | Rule::LetterCase => self.children.is_empty(),
            Rule::InactiveSplit => self.children.len() == 2 && self.exponent == max_child,
            Rule::ActiveSquare => self.children.len() == 1 && self.exponent == max_child + 1,
        };
        kids_ok && shape_ok
    }
}

/// Radius precondition failure: `|word| ≥ λ^(level−1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Error)]
#[error("{word} at level {level}: λ-length {lambda_length} is not below radius {radius}")]
pub struct CertifyFailure {
    pub word: Word,
    pub level: i32,
    pub lambda_length: Cubic,
    pub radius: Cubic,
}

fn base_exponent(w: &Word, level: i32) -> Option<u32> {
    match w.len() {
        0 => Some(0),
        1 => Some(1),
        2 if level >= 0 => {
            // ad and da have order 4 already in Γ_0: u_0 = (ad)^4.
            let l = w.letters();
            let ad = (l[0] == Letter::A && l[1] == Letter::D) || (l[0] == Letter::D && l[1] == Letter::A);
            ad.then_some(2)
        }
        _ => None,
    }
}

/// Certify that the image of `w` in `Γ_level` has 2-power order, following
/// the induction on the open `λ^(level−1)`-ball of `Γ_{-1}`.
///
/// Exponents are tight with respect to the recursion: an even-parity node
/// takes the maximum of its children (the splitting is injective on the
/// parity kernel of `Γ_level`), an odd-parity node adds one for the square.
pub fn certify_torsion(w: &Word, level: i32) -> Result<TorsionCertificate, CertifyFailure> {
    assert!(level >= -1, "levels start at -1");
    let len = lambda_length(w);
    let radius = lambda_power(level - 1);
    if !len.lt(&radius) {
        return Err(CertifyFailure { word: w.clone(), level, lambda_length: len, radius });
    }
    let node = |exponent, rule, conjugate, children| TorsionCertificate {
        word: w.clone(),
        level,
        exponent,
        rule,
        lambda_length: len.clone(),
        radius: radius.clone(),
        conjugate,
        children,
    };
    if level <= 0 {
        // The open λ^-2 ball is {1, a, b, c, d}; the open λ^-1 ball adds ad, da.
        return match base_exponent(w, level) {
            Some(e) => Ok(node(e, Rule::BaseCase, w.clone(), Vec::new())),
            None => Err(CertifyFailure { word: w.clone(), level, lambda_length: len.clone(), radius: radius.clone() }),
        };
    }
    let x = w.min_conjugate();
    if x.len() <= 1 {
        let e = x.len() as u32;
        return Ok(node(e, Rule::LetterCase, x, Vec::new()));
    }
    if x.a_parity() == 0 {
        let s = split(&x).expect("parity checked");
        let c0 = certify_torsion(&s.w0, level - 1)?;
        let c1 = certify_torsion(&s.w1, level - 1)?;
        let e = c0.exponent.max(c1.exponent);
        Ok(node(e, Rule::InactiveSplit, x, vec![c0, c1]))
    } else {
        let s = split(&x.multiply(&x)).expect("square has even parity");
        let c = certify_torsion(&s.w0, level - 1)?;
        let e = c.exponent + 1;
        Ok(node(e, Rule::ActiveSquare, x, vec![c]))
    }
}

/// Outcome of certifying every word of a ball (or a sample of it).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NballReport {
    /// Word-length radius `n`.
    pub radius: usize,
    /// `i(n)`.
    pub level: i32,
    pub words: usize,
    pub certified: usize,
    pub failures: Vec<CertifyFailure>,
    pub failure_count: usize,
    pub max_depth: usize,
    pub exponent_histogram: BTreeMap<u32, usize>,
    pub max_exponent: u32,
    /// Words whose certified exponent exceeds `i(n) + 1`, shortlex-first.
    pub above_level_plus_one: usize,
    pub above_level_plus_one_witnesses: Vec<Word>,
    /// Words whose certified exponent exceeds `i(n) + 2`.
    pub above_level_plus_two: usize,
}

impl NballReport {
    pub fn all_certified(&self) -> bool {
        self.failure_count == 0 && self.certified == self.words
    }

    fn merge(mut self, other: NballReport) -> NballReport {
        self.words += other.words;
        self.certified += other.certified;
        self.failures.extend(other.failures);
        self.failure_count += other.failure_count;
        self.max_depth = self.max_depth.max(other.max_depth);
        for (e, c) in other.exponent_histogram {
            *self.exponent_histogram.entry(e).or_insert(0) += c;
        }
        self.max_exponent = self.max_exponent.max(other.max_exponent);
        self.above_level_plus_one += other.above_level_plus_one;
        self.above_level_plus_one_witnesses.extend(other.above_level_plus_one_witnesses);
        self.above_level_plus_two += other.above_level_plus_two;
        self
    }
}

const WITNESS_LIMIT: usize = 16;

/// Certify each word at `level`; the result does not depend on iteration order.
pub fn certify_all(words: &[Word], radius: usize, level: i32) -> NballReport {
    let mut report = words
        .par_iter()
        .fold(NballReport::default, |mut acc, w| {
            acc.words += 1;
            match certify_torsion(w, level) {
                Ok(cert) => {
                    acc.certified += 1;
                    acc.max_depth = acc.max_depth.max(cert.depth());
                    *acc.exponent_histogram.entry(cert.exponent).or_insert(0) += 1;
                    acc.max_exponent = acc.max_exponent.max(cert.exponent);
                    if cert.exponent as i64 > level as i64 + 1 {
                        acc.above_level_plus_one += 1;
                        acc.above_level_plus_one_witnesses.push(w.clone());
                    }
                    if cert.exponent as i64 > level as i64 + 2 {
                        acc.above_level_plus_two += 1;
                    }
                }
                Err(f) => {
                    acc.failure_count += 1;
                    acc.failures.push(f);
                }
            }
            acc
        })
        .reduce(NballReport::default, NballReport::merge);
    report.radius = radius;
    report.level = level;
    report.above_level_plus_one_witnesses.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    report.above_level_plus_one_witnesses.dedup();
    report.above_level_plus_one_witnesses.truncate(WITNESS_LIMIT);
    report.failures.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
    report.failures.truncate(WITNESS_LIMIT);
    report
}

/// Certify every reduced word of word length at most `n` at level `i(n)`.
pub fn verify_nball_proposition(n: usize, cap: usize) -> Result<NballReport, BallOverflow> {
    assert!(n >= 1);
    let level = crate::lambda::radius_index(n as u64);
    let ball = enumerate_ball_free(n, cap)?;
    Ok(certify_all(&ball, n, level))
}

/// Uniform random reduced word of exactly `len` letters.
pub fn random_reduced_word<R: rand::Rng + ?Sized>(rng: &mut R, len: usize) -> Word {
    let mut v: Vec<Letter> = Vec::with_capacity(len);
    for _ in 0..len {
        let next = match v.last() {
            None => Letter::ALL[rng.gen_range(0..4)],
            Some(l) if l.is_bcd() => Letter::A,
            Some(_) => Letter::ALL[rng.gen_range(1..4)],
        };
        v.push(next);
    }
    Word::from_reduced_unchecked(v)
}
