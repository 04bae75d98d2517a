//! Balls and growth series of `Γ_∞` and of the free product `Γ_{-1}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::grig::{act_letter, equal_in_gamma};
use crate::lambda::FloatEnclosure;
use crate::presentations::bigint_string;
use crate::words::{Letter, Word};

/// Depth of the tree level whose action buckets candidates.
pub const SIGNATURE_LEVEL: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    Grig,
    Free,
}

/// How new BFS candidates are compared with known elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    /// Bucket by level-8 action, confirm with the word problem.
    Signature,
    /// Solve the word problem against every known element.
    Pure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub radius: usize,
    #[serde(with = "bigint_string")]
    pub ball: BigInt,
    #[serde(with = "bigint_string")]
    pub sphere: BigInt,
    /// `ln(ball) / radius`; absent at radius 0.
    pub entropy: Option<FloatEnclosure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub group: GroupKind,
    pub rows: Vec<GrowthRow>,
    /// False when the element budget stopped the enumeration early; the
    /// last row is then a lower bound.
    pub complete: bool,
}

impl GrowthTable {
    fn from_balls(group: GroupKind, balls: &[BigInt], complete: bool) -> Self {
        let rows = balls
            .iter()
            .enumerate()
            .map(|(r, b)| GrowthRow {
                radius: r,
                ball: b.clone(),
                sphere: if r == 0 { b.clone() } else { b - &balls[r - 1] },
                entropy: (r > 0).then(|| FloatEnclosure::ln_of(b).div_int(r as u64)),
            })
            .collect();
        GrowthTable { group, rows, complete }
    }

    pub fn ball(&self, r: usize) -> Option<&BigInt> {
        self.rows.get(r).map(|row| &row.ball)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,ball,sphere,entropy_lo,entropy_hi\n");
        for row in &self.rows {
            let (lo, hi) = row.entropy.map_or((String::new(), String::new()), |e| (format!("{:.12}", e.lo), format!("{:.12}", e.hi)));
            out.push_str(&format!("{},{},{},{},{}\n", row.radius, row.ball, row.sphere, lo, hi));
        }
        out
    }
}

/// Result of a BFS in the Cayley graph of `Γ_∞`.
#[derive(Clone, Debug)]
pub struct GrigBall {
    pub table: GrowthTable,
    /// Shortlex-least geodesic of every element found, grouped by sphere.
    pub spheres: Vec<Vec<Word>>,
    /// Word-problem calls made while deduplicating.
    pub comparisons: u64,
}

impl GrigBall {
    pub fn representatives(&self) -> impl Iterator<Item = &Word> {
        self.spheres.iter().flatten()
    }
}

type Signature = Vec<u8>;

fn signature_step(sig: &[u8], g: Letter) -> Signature {
    sig.iter().map(|&p| act_letter(g, p as u32, SIGNATURE_LEVEL) as u8).collect()
}

fn shortlex_less(u: &Word, v: &Word) -> bool {
    (u.len(), u.letters()) < (v.len(), v.letters())
}

/// Ball of radius `n` in `Γ_∞` for generators `{a, b, c, d}`.
///
/// `generator_order` fixes the order in which edges are explored; counts and
/// representatives do not depend on it. `budget` bounds the number of
/// elements kept.
pub fn ball_grigorchuk_with(n: usize, pipeline: Pipeline, generator_order: [Letter; 4], budget: usize) -> GrigBall {
    let identity_sig: Signature = (0..1u32 << SIGNATURE_LEVEL).map(|p| p as u8).collect();
    let mut elements: Vec<(Word, Signature)> = vec![(Word::identity(), identity_sig.clone())];
    let mut buckets: HashMap<Signature, Vec<usize>> = HashMap::from([(identity_sig, vec![0])]);
    let mut spheres: Vec<Vec<usize>> = vec![vec![0]];
    let mut balls = vec![BigInt::one()];
    let mut comparisons = 0u64;
    let mut complete = true;

    'radius: for k in 0..n {
        let mut next: Vec<usize> = Vec::new();
        for idx in 0..spheres[k].len() {
            let u = spheres[k][idx];
            for &g in &generator_order {
                let cand = elements[u].0.times(g);
                // shorter reduced words lie in the ball already
                if cand.len() <= k {
                    continue;
                }
                let sig = signature_step(&elements[u].1, g);
                let found = match pipeline {
                    Pipeline::Signature => buckets.get(&sig).and_then(|bucket| {
                        bucket.iter().copied().find(|&j| {
                            comparisons += 1;
                            equal_in_gamma(&elements[j].0, &cand)
                        })
                    }),
                    Pipeline::Pure => (0..elements.len()).find(|&j| {
                        comparisons += 1;
                        equal_in_gamma(&elements[j].0, &cand)
                    }),
                };
                match found {
                    Some(j) => {
                        // another geodesic of an element on this sphere
                        if elements[j].0.len() == cand.len() && shortlex_less(&cand, &elements[j].0) {
                            elements[j].0 = cand;
                        }
                    }
                    None => {
                        if elements.len() >= budget {
                            complete = false;
                            spheres.push(next);
                            break 'radius;
                        }
                        let j = elements.len();
                        buckets.entry(sig.clone()).or_default().push(j);
                        elements.push((cand, sig));
                        next.push(j);
                    }
                }
            }
        }
        spheres.push(next);
        balls.push(BigInt::from(elements.len()));
    }
    if !complete {
        balls.push(BigInt::from(elements.len()));
    }
    let spheres: Vec<Vec<Word>> = spheres
        .iter()
        .map(|s| {
            let mut ws: Vec<Word> = s.iter().map(|&j| elements[j].0.clone()).collect();
            ws.sort_by(|u, v| u.letters().cmp(v.letters()));
            ws
        })
        .collect();
    GrigBall { table: GrowthTable::from_balls(GroupKind::Grig, &balls, complete), spheres, comparisons }
}

pub fn ball_grigorchuk(n: usize, budget: usize) -> GrigBall {
    ball_grigorchuk_with(n, Pipeline::Signature, Letter::ALL, budget)
}

/// Number of distinct level-`SIGNATURE_LEVEL` actions among the words of
/// the free-product ball. A lower bound for the ball size in `Γ_∞`, with
/// equality as long as the tree level separates the elements.
pub fn distinct_signatures(n: usize) -> usize {
    let identity_sig: Signature = (0..1u32 << SIGNATURE_LEVEL).map(|p| p as u8).collect();
    let mut seen: std::collections::HashSet<Signature> = std::collections::HashSet::from([identity_sig.clone()]);
    // frontier of (last letter, signature) for reduced words of each length
    let mut frontier: Vec<(Option<Letter>, Signature)> = vec![(None, identity_sig)];
    for _ in 0..n {
        let mut next = Vec::new();
        for (last, sig) in &frontier {
            for g in Letter::ALL {
                let ok = match last {
                    None => true,
                    Some(l) => l.is_a() != g.is_a(),
                };
                if ok {
                    let s = signature_step(sig, g);
                    seen.insert(s.clone());
                    next.push((Some(g), s));
                }
            }
        }
        frontier = next;
    }
    seen.len()
}

/// Ball sizes of `Γ_{-1} = Z/2 * (Z/2)²` for radii `0..=n`.
///
/// Reduced words alternate between `a` and `{b, c, d}`; with `a_k`, `b_k`
/// counting words of length `k` ending in either kind, `a_{k+1} = b_k` and
/// `b_{k+1} = 3a_k`.
pub fn ball_free_product_series(n: usize) -> Vec<BigInt> {
    let mut balls = vec![BigInt::one()];
    if n == 0 {
        return balls;
    }
    let (mut ak, mut bk) = (BigInt::one(), BigInt::from(3));
    let mut total = BigInt::from(5);
    balls.push(total.clone());
    for _ in 1..n {
        let next_a = bk.clone();
        let next_b = ak * 3;
        ak = next_a;
        bk = next_b;
        total += &ak + &bk;
        balls.push(total.clone());
    }
    balls
}

pub fn ball_free_product(n: usize) -> BigInt {
    ball_free_product_series(n).pop().unwrap_or_else(BigInt::zero)
}

pub fn free_product_table(n: usize) -> GrowthTable {
    GrowthTable::from_balls(GroupKind::Free, &ball_free_product_series(n), true)
}

/// `ln(ball(r)) / r` for `r = 1..=maxn`, for `Γ_∞` and `Γ_{-1}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntropySeries {
    pub grig: Vec<FloatEnclosure>,
    pub free: Vec<FloatEnclosure>,
    pub grig_complete: bool,
}

pub fn entropy_series(maxn: usize, budget: usize) -> EntropySeries {
    let g = ball_grigorchuk(maxn, budget).table;
    let f = free_product_table(maxn);
    let tail = |t: &GrowthTable| t.rows.iter().filter_map(|r| r.entropy).collect();
    EntropySeries { grig: tail(&g), free: tail(&f), grig_complete: g.complete }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grig::is_trivial;
    use crate::words::enumerate_ball_free;

    #[test]
    fn small_balls() {
        let b = ball_grigorchuk(3, 1 << 20);
        assert_eq!(b.table.ball(1), Some(&BigInt::from(5)));
        assert_eq!(b.table.ball(2), Some(&BigInt::from(11)));
    }

    #[test]
    fn radius_two_oracle() {
        // pairwise word problem over the reduced words of length ≤ 2 (1 + 4 + 6)
        let words = enumerate_ball_free(2, 100).unwrap();
        assert_eq!(words.len(), 11);
        let mut classes: Vec<Word> = Vec::new();
        for w in words {
            if !classes.iter().any(|c| is_trivial(&c.multiply(&w.invert()))) {
                classes.push(w);
            }
        }
        assert_eq!(classes.len(), 11);
    }

    #[test]
    fn free_product_recurrence() {
        assert_eq!(ball_free_product(2), BigInt::from(11));
        assert_eq!(ball_free_product(3), BigInt::from(23));
        let series = ball_free_product_series(8);
        for (r, b) in series.iter().enumerate() {
            assert_eq!(*b, BigInt::from(enumerate_ball_free(r, 1 << 20).unwrap().len()));
        }
    }

    #[test]
    fn pipelines_agree() {
        let s = ball_grigorchuk_with(6, Pipeline::Signature, Letter::ALL, 1 << 20);
        let p = ball_grigorchuk_with(6, Pipeline::Pure, Letter::ALL, 1 << 20);
        assert_eq!(s.table, p.table);
        assert_eq!(s.spheres, p.spheres);
    }

    #[test]
    fn generator_order_is_irrelevant() {
        let base = ball_grigorchuk_with(6, Pipeline::Signature, Letter::ALL, 1 << 20);
        let rev = ball_grigorchuk_with(6, Pipeline::Signature, [Letter::D, Letter::C, Letter::B, Letter::A], 1 << 20);
        assert_eq!(base.table, rev.table);
        assert_eq!(base.spheres, rev.spheres);
    }

    #[test]
    fn representatives_are_geodesic() {
        let b = ball_grigorchuk(6, 1 << 20);
        for (r, sphere) in b.spheres.iter().enumerate() {
            assert!(sphere.iter().all(|w| w.len() == r));
        }
    }

    #[test]
    fn budget_flags_partial_table() {
        let b = ball_grigorchuk(10, 50);
        assert!(!b.table.complete);
        assert_eq!(b.table.rows.last().unwrap().ball, BigInt::from(50));
    }

    #[test]
    fn free_entropy_tends_to_log_sqrt3() {
        let t = free_product_table(400);
        let e = t.rows[400].entropy.unwrap();
        let target = 3f64.ln() / 2.0;
        assert!(e.lo > target && e.hi < target + 0.01, "{e:?}");
    }
}
