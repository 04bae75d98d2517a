//! Small permutation groups held as explicit element lists.
//!
//! Permutations act on the right: `(p * q)(i) = q(p(i))`, matching the
//! left-to-right reading of words elsewhere in the crate.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("images do not form a bijection of 0..{0}")]
    NotBijective(usize),
    #[error("generators act on different degrees")]
    DegreeMismatch,
    #[error("group closure exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("not a subgroup of the ambient group")]
    NotSubgroup,
    #[error("cycle notation: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(PermError::NotBijective(n));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        Permutation(images)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Build from disjoint cycles, e.g. `&[&[0, 1, 2], &[3, 4]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut p: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if x >= n {
                    return Err(PermError::NotBijective(n));
                }
                p[x] = c[(i + 1) % c.len()];
            }
        }
        Permutation::new(p)
    }

    /// Parse cycle notation like `(0 1 2)(3 4)` or `()`.
    pub fn parse_cycles(n: usize, s: &str) -> Result<Self, PermError> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| PermError::Parse(s.to_string()))?;
            let end = body.find(')').ok_or_else(|| PermError::Parse(s.to_string()))?;
            let cyc = body[..end]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| PermError::Parse(s.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cyc);
            rest = body[end + 1..].trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Permutation::from_cycles(n, &refs)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut r = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            r[j] = i;
        }
        Permutation(r)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.0.len()];
        let mut ord = 1usize;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut c = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                c.push(i);
                i = self.0[i];
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub const DEFAULT_CAP: usize = 100_000;

/// A permutation group with its full element list (in breadth-first order
/// from the identity) and a lookup index.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.order() == other.order() && self.elements.iter().all(|e| other.contains(e))
    }
}

impl PermGroup {
    /// Breadth-first closure under right multiplication by generators.
    pub fn closure(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Self, PermError> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch);
        }
        let id = Permutation::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &generators {
                let p = elements[i].compose(g);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(PermError::CapExceeded { cap });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        Ok(PermGroup { degree, generators, elements, index })
    }

    pub fn generate(generators: Vec<Permutation>) -> Result<Self, PermError> {
        let degree = generators.first().map(|g| g.degree()).unwrap_or(0);
        Self::closure(degree, generators, DEFAULT_CAP)
    }

    /// Subgroup given by an element set already known to be closed.
    fn from_closed_set(degree: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        let generators = elements.iter().filter(|e| !e.is_identity()).cloned().collect();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        PermGroup { degree, generators, elements, index }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_closed_set(degree, vec![Permutation::identity(degree)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn is_subgroup_of(&self, g: &PermGroup) -> bool {
        self.degree == g.degree && self.elements.iter().all(|e| g.contains(e))
    }

    pub fn is_normal_in(&self, g: &PermGroup) -> bool {
        g.generators.iter().all(|x| {
            let xi = x.inverse();
            self.generators.iter().all(|h| self.contains(&xi.compose(h).compose(x)))
        })
    }

    pub fn element_orders(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements.iter().map(|e| e.order()).collect();
        v.sort_unstable();
        v
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|x| self.generators.iter().all(|y| x.compose(y) == y.compose(x)))
    }

    /// Generators in cycle notation, one per line.
    pub fn to_cycle_notation(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_string()).collect()
    }
}

/// `[G : H]`.
pub fn index(g: &PermGroup, h: &PermGroup) -> Result<usize, PermError> {
    if !h.is_subgroup_of(g) {
        return Err(PermError::NotSubgroup);
    }
    Ok(g.order() / h.order())
}

/// `N_G(H) = { x ∈ G : x⁻¹ H x = H }`.
pub fn normalizer(g: &PermGroup, h: &PermGroup) -> Result<PermGroup, PermError> {
    if !h.is_subgroup_of(g) {
        return Err(PermError::NotSubgroup);
    }
    let elems = g
        .elements
        .iter()
        .filter(|x| {
            let xi = x.inverse();
            h.generators.iter().all(|y| h.contains(&xi.compose(y).compose(x)))
        })
        .cloned()
        .collect();
    Ok(PermGroup::from_closed_set(g.degree, elems))
}

/// Intersection of all `G`-conjugates of `H`.
pub fn core(g: &PermGroup, h: &PermGroup) -> Result<PermGroup, PermError> {
    if !h.is_subgroup_of(g) {
        return Err(PermError::NotSubgroup);
    }
    let elems = h
        .elements
        .iter()
        .filter(|y| {
            g.elements.iter().all(|x| h.contains(&x.compose(y).compose(&x.inverse())))
        })
        .cloned()
        .collect();
    Ok(PermGroup::from_closed_set(g.degree, elems))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaStatus {
    Pass,
    Fail,
    Inapplicable,
}

/// Outcome of checking that the core of a 2-power-index subgroup whose
/// normalizer has index at most two has index `2^b` with `b ≤ 2a − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreLemmaReport {
    pub group_order: usize,
    pub subgroup_order: usize,
    pub index: usize,
    pub a: Option<u32>,
    pub normalizer_index: usize,
    pub core_index: usize,
    pub b: Option<u32>,
    pub status: LemmaStatus,
}

fn log2_exact(n: usize) -> Option<u32> {
    n.is_power_of_two().then(|| n.trailing_zeros())
}

pub fn check_core_lemma(g: &PermGroup, h: &PermGroup) -> Result<CoreLemmaReport, PermError> {
    let idx = index(g, h)?;
    let n = normalizer(g, h)?;
    let c = core(g, h)?;
    let normalizer_index = g.order() / n.order();
    let core_index = g.order() / c.order();
    let a = log2_exact(idx).filter(|&a| a >= 1);
    let b = log2_exact(core_index);
    let status = match a {
        Some(a) if normalizer_index <= 2 => match b {
            Some(b) if b <= 2 * a - 1 => LemmaStatus::Pass,
            _ => LemmaStatus::Fail,
        },
        _ => LemmaStatus::Inapplicable,
    };
    Ok(CoreLemmaReport {
        group_order: g.order(),
        subgroup_order: h.order(),
        index: idx,
        a,
        normalizer_index,
        core_index,
        b,
        status,
    })
}

/// All subgroups of a group of order at most 64, sorted by order and then
/// by element set.
pub fn enumerate_subgroups(g: &PermGroup) -> Result<Vec<PermGroup>, PermError> {
    let n = g.order();
    if n > 64 {
        return Err(PermError::CapExceeded { cap: 64 });
    }
    // Cayley table on element indices; subgroups are bitmasks.
    let table: Vec<Vec<usize>> = g
        .elements
        .iter()
        .map(|x| g.elements.iter().map(|y| g.index[&x.compose(y)]).collect())
        .collect();
    let close = |mut mask: u64| -> u64 {
        loop {
            let mut next = mask | 1;
            for i in 0..n {
                if mask >> i & 1 == 0 {
                    continue;
                }
                for j in 0..n {
                    if mask >> j & 1 == 1 {
                        next |= 1u64 << table[i][j];
                    }
                }
            }
            if next == mask {
                return mask;
            }
            mask = next;
        }
    };
    let cyclic: BTreeSet<u64> = (0..n).map(|i| close(1u64 << i | 1)).collect();
    let mut all: BTreeSet<u64> = cyclic.clone();
    let mut frontier: Vec<u64> = all.iter().copied().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &s in &frontier {
            for &c in &cyclic {
                let j = close(s | c);
                if all.insert(j) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut subs: Vec<PermGroup> = all
        .into_iter()
        .map(|mask| {
            let elems = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| g.elements[i].clone()).collect();
            PermGroup::from_closed_set(g.degree, elems)
        })
        .collect();
    subs.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    Ok(subs)
}

/// A small generating set, chosen greedily from the element list.
fn small_generating_set(g: &PermGroup) -> Vec<Permutation> {
    let mut gens: Vec<Permutation> = g.generators.iter().filter(|x| !x.is_identity()).cloned().collect();
    // drop redundant generators
    let mut i = 0;
    while i < gens.len() {
        let mut rest = gens.clone();
        rest.remove(i);
        let ord = PermGroup::closure(g.degree, rest, g.order() + 1).map(|h| h.order()).unwrap_or(0);
        if ord == g.order() {
            gens.remove(i);
        } else {
            i += 1;
        }
    }
    gens
}

/// Isomorphism test for groups of equal order at most 64, by searching
/// generator images with matching element orders.
pub fn small_isomorphic(g1: &PermGroup, g2: &PermGroup) -> bool {
    if g1.order() != g2.order() || g1.element_orders() != g2.element_orders() {
        return false;
    }
    assert!(g1.order() <= 64, "small_isomorphic is limited to order 64");
    let gens = small_generating_set(g1);
    if gens.is_empty() {
        return true;
    }
    // Spanning tree of the Cayley graph of g1 w.r.t. gens.
    let mut word_of: Vec<Option<(usize, usize)>> = vec![None; g1.order()];
    let mut order_bfs = vec![0usize];
    let mut seen = vec![false; g1.order()];
    seen[0] = true;
    let mut k = 0;
    while k < order_bfs.len() {
        let e = order_bfs[k];
        for (gi, gen) in gens.iter().enumerate() {
            let t = g1.index[&g1.elements[e].compose(gen)];
            if !seen[t] {
                seen[t] = true;
                word_of[t] = Some((e, gi));
                order_bfs.push(t);
            }
        }
        k += 1;
    }
    let candidates: Vec<Vec<&Permutation>> = gens
        .iter()
        .map(|x| g2.elements.iter().filter(|y| y.order() == x.order()).collect())
        .collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<&Permutation> = choice.iter().zip(&candidates).map(|(&c, cs)| cs[c]).collect();
        if extends_to_isomorphism(g1, g2, &gens, &images, &order_bfs, &word_of) {
            return true;
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return false;
            }
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn extends_to_isomorphism(
    g1: &PermGroup,
    g2: &PermGroup,
    gens: &[Permutation],
    images: &[&Permutation],
    order_bfs: &[usize],
    word_of: &[Option<(usize, usize)>],
) -> bool {
    let n = g1.order();
    let mut phi: Vec<Option<Permutation>> = vec![None; n];
    phi[0] = Some(Permutation::identity(g2.degree));
    for &e in &order_bfs[1..] {
        let (parent, gi) = word_of[e].expect("tree edge");
        let img = phi[parent].as_ref().expect("parent mapped").compose(images[gi]);
        phi[e] = Some(img);
    }
    // homomorphism: every Cayley edge is respected
    for e in 0..n {
        let pe = phi[e].as_ref().expect("all mapped");
        for (gi, gen) in gens.iter().enumerate() {
            let t = g1.index[&g1.elements[e].compose(gen)];
            if pe.compose(images[gi]) != *phi[t].as_ref().expect("mapped") {
                return false;
            }
        }
    }
    let distinct: BTreeSet<&Permutation> = phi.iter().map(|p| p.as_ref().expect("mapped")).collect();
    distinct.len() == n && distinct.iter().all(|p| g2.contains(p))
}

/// Small groups used to exercise the core lemma.
pub mod corpus {
    use super::*;

    fn perm(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).expect("valid cycles")
    }

    /// `Z/2 × D_8`: D_8 as symmetries of a square on points 0–3, the direct
    /// factor a transposition of points 4 and 5.
    pub fn z2_times_d8() -> PermGroup {
        PermGroup::generate(vec![perm(6, &[&[0, 1, 2, 3]]), perm(6, &[&[1, 3]]), perm(6, &[&[4, 5]])])
            .expect("small")
    }

    /// `D_8 × C_2` with the cyclic factor acting by a double transposition.
    pub fn d8_times_c2() -> PermGroup {
        PermGroup::generate(vec![perm(8, &[&[0, 1, 2, 3]]), perm(8, &[&[0, 2]]), perm(8, &[&[4, 5], &[6, 7]])])
            .expect("small")
    }

    /// Dihedral group of order `2m` on `m` points.
    pub fn dihedral(m: usize) -> PermGroup {
        let rot: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        let refl: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
        PermGroup::generate(vec![Permutation::new(rot).expect("bijection"), Permutation::new(refl).expect("bijection")])
            .expect("small")
    }

    pub fn d16() -> PermGroup {
        dihedral(8)
    }

    pub fn elementary_abelian_8() -> PermGroup {
        PermGroup::generate(vec![perm(6, &[&[0, 1]]), perm(6, &[&[2, 3]]), perm(6, &[&[4, 5]])]).expect("small")
    }

    pub fn klein_four() -> PermGroup {
        PermGroup::generate(vec![perm(4, &[&[0, 1]]), perm(4, &[&[2, 3]])]).expect("small")
    }

    pub fn cyclic(m: usize) -> PermGroup {
        let rot: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        PermGroup::generate(vec![Permutation::new(rot).expect("bijection")]).expect("small")
    }

    /// `A_4` from `(0 1 2)` and `(0 1)(2 3)`.
    pub fn a4() -> PermGroup {
        PermGroup::generate(vec![perm(4, &[&[0, 1, 2]]), perm(4, &[&[0, 1], &[2, 3]])]).expect("small")
    }

    /// The 2-groups whose subgroup pairs exercise the lemma.
    pub fn two_groups() -> Vec<(&'static str, PermGroup)> {
        vec![
            ("Z2xD8", z2_times_d8()),
            ("D16", d16()),
            ("C2xC2xC2", elementary_abelian_8()),
            ("D8xC2", d8_times_c2()),
        ]
    }
}
