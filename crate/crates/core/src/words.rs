//! Reduced words in the free product `Z/2 * (Z/2 x Z/2) = <a,b,c,d | a²=b²=c²=d²=bcd=1>`.
//!
//! Every element has a unique normal form in which no two adjacent letters
//! are both `a` and no two adjacent letters both lie in `{b,c,d}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the four involutive generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    B = 1,
    C = 2,
    D = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::C, Letter::D];

    #[inline]
    pub fn is_a(self) -> bool {
        self == Letter::A
    }

    /// Member of the Klein four-group `{b, c, d}`.
    #[inline]
    pub fn is_bcd(self) -> bool {
        self != Letter::A
    }

    /// Product of two distinct letters of `{b,c,d}`: the third one.
    ///
    /// With `b=1, c=2, d=3` the Klein group law is bitwise xor.
    #[inline]
    pub fn klein_product(self, other: Letter) -> Option<Letter> {
        match (self as u8) ^ (other as u8) {
            0 => None,
            1 => Some(Letter::B),
            2 => Some(Letter::C),
            3 => Some(Letter::D),
            _ => unreachable!(),
        }
    }

    pub fn as_char(self) -> char {
        (b'a' + self as u8) as char
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        match ch {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'c' => Some(Letter::C),
            'd' => Some(Letter::D),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseWordError {
    #[error("empty input (the identity is written \"1\")")]
    Empty,
    #[error("unexpected character {ch:?} at byte offset {offset}")]
    BadChar { ch: char, offset: usize },
}

/// A word in reduced normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Normal form of an arbitrary letter sequence.
    ///
    /// One left-to-right stack pass suffices: the free product of two finite
    /// groups has a confluent length-reducing rewriting system, and each
    /// incoming letter only interacts with the current top of the stack.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for x in raw {
            push_reduced(&mut stack, x);
        }
        Word(stack)
    }

    /// Wrap letters that are already known to be reduced.
    pub fn from_reduced_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(is_reduced(&letters));
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut stack = self.0.clone();
        stack.reserve(other.len());
        for &x in &other.0 {
            push_reduced(&mut stack, x);
        }
        Word(stack)
    }

    /// Multiply on the right by a single generator.
    pub fn times(&self, x: Letter) -> Word {
        let mut stack = self.0.clone();
        push_reduced(&mut stack, x);
        Word(stack)
    }

    /// All generators are involutions, so the inverse is the reversed word.
    pub fn invert(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn pow(&self, e: u32) -> Word {
        let mut acc = Word::identity();
        for _ in 0..e {
            acc = acc.multiply(self);
        }
        acc
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.multiply(self).multiply(&g.invert())
    }

    /// Number of `a` letters modulo 2: the homomorphism onto `Z/2`
    /// sending `a ↦ 1` and `b, c, d ↦ 0`.
    pub fn a_parity(&self) -> u8 {
        (self.0.iter().filter(|l| l.is_a()).count() % 2) as u8
    }

    /// Counts of `a`, `b`, `c`, `d` in the word.
    pub fn letter_counts(&self) -> [u64; 4] {
        let mut counts = [0u64; 4];
        for l in &self.0 {
            counts[l.index()] += 1;
        }
        counts
    }

    /// Cyclic reduction: conjugate until the first and last letters lie in
    /// different free factors (or the word has length at most one).
    pub fn cyclically_reduce(&self) -> Word {
        let mut v: Vec<Letter> = self.0.clone();
        let mut start = 0usize;
        loop {
            let len = v.len() - start;
            if len < 2 {
                break;
            }
            let first = v[start];
            let last = v[v.len() - 1];
            if first == last {
                start += 1;
                v.pop();
            } else if first.is_bcd() && last.is_bcd() {
                // ξ u η ~ u (ηξ)
                let merged = last.klein_product(first).expect("distinct letters");
                start += 1;
                let n = v.len();
                v[n - 1] = merged;
            } else {
                break;
            }
        }
        Word(v.split_off(start))
    }

    /// A conjugate of minimal λ-length, made canonical by taking the
    /// lexicographically least cyclic rotation of the cyclic reduction.
    ///
    /// All rotations of a cyclically reduced word share the same letter
    /// multiset, hence the same λ-length and word length, so the
    /// (λ-length, length, lexicographic) ordering collapses to the last key.
    pub fn min_conjugate(&self) -> Word {
        let cr = self.cyclically_reduce();
        let n = cr.len();
        if n < 2 {
            return cr;
        }
        let letters = cr.letters();
        let mut best = 0usize;
        for r in 1..n {
            let better = (0..n)
                .map(|i| (letters[(r + i) % n], letters[(best + i) % n]))
                .find(|(x, y)| x != y)
                .is_some_and(|(x, y)| x < y);
            if better {
                best = r;
            }
        }
        let mut rotated = Vec::with_capacity(n);
        rotated.extend_from_slice(&letters[best..]);
        rotated.extend_from_slice(&letters[..best]);
        Word(rotated)
    }

    /// All cyclic rotations (only meaningful for cyclically reduced words).
    pub fn rotations(&self) -> Vec<Word> {
        let n = self.len();
        (0..n.max(1))
            .map(|r| {
                let mut v = Vec::with_capacity(n);
                v.extend_from_slice(&self.0[r.min(n)..]);
                v.extend_from_slice(&self.0[..r.min(n)]);
                Word::reduce(v)
            })
            .collect()
    }
}

#[inline]
fn push_reduced(stack: &mut Vec<Letter>, x: Letter) {
    match stack.last().copied() {
        Some(top) if top == x => {
            stack.pop();
        }
        Some(top) if top.is_bcd() && x.is_bcd() => {
            let n = stack.len();
            stack[n - 1] = top.klein_product(x).expect("distinct letters");
        }
        _ => stack.push(x),
    }
}

/// True when no two adjacent letters lie in the same free factor.
pub fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[0].is_a() != w[1].is_a())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Parse a letter sequence over `abcd` (identity `"1"`) without reducing it.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>, ParseWordError> {
    if s.is_empty() {
        return Err(ParseWordError::Empty);
    }
    if s == "1" {
        return Ok(Vec::new());
    }
    s.char_indices()
        .map(|(offset, ch)| Letter::from_char(ch).ok_or(ParseWordError::BadChar { ch, offset }))
        .collect()
}

impl FromStr for Word {
    type Err = ParseWordError;

    /// Parses and reduces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_letters(s).map(Word::reduce)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ball enumeration exceeded cap of {cap} words ({partial} enumerated)")]
pub struct BallOverflow {
    pub cap: usize,
    pub partial: usize,
}

/// All reduced words of word length at most `radius`, ordered by length and
/// then lexicographically.
pub fn enumerate_ball_free(radius: usize, cap: usize) -> Result<Vec<Word>, BallOverflow> {
    let mut out = vec![Word::identity()];
    let mut sphere_start = 0usize;
    for _ in 0..radius {
        let sphere_end = out.len();
        for i in sphere_start..sphere_end {
            let w = out[i].clone();
            for x in Letter::ALL {
                let extends = match w.last() {
                    None => true,
                    Some(l) => l.is_a() != x.is_a(),
                };
                if !extends {
                    continue;
                }
                if out.len() >= cap {
                    return Err(BallOverflow { cap, partial: out.len() });
                }
                let mut v = w.0.clone();
                v.push(x);
                out.push(Word(v));
            }
        }
        sphere_start = sphere_end;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("bcd"), Word::identity());
        assert_eq!(w("abba"), Word::identity());
        assert_eq!(w("adacac").to_string(), "adacac");
        assert_eq!(w("bc").to_string(), "d");
        assert_eq!(w("abcab").to_string(), "adab");
    }

    #[test]
    fn multiply_and_invert() {
        assert_eq!(w("ad").multiply(&w("da")), Word::identity());
        assert_eq!(w("ab").invert().to_string(), "ba");
        assert_eq!(w("ab").multiply(&w("ab")).to_string(), "abab");
    }

    #[test]
    fn parity() {
        assert_eq!(Word::identity().a_parity(), 0);
        assert_eq!(w("a").a_parity(), 1);
        assert_eq!(w("abab").a_parity(), 0);
    }

    #[test]
    fn min_conjugate_strips_conjugators() {
        assert_eq!(w("aba").min_conjugate().to_string(), "b");
        assert_eq!(w("bab").min_conjugate().to_string(), "a");
        assert_eq!(w("cabad").min_conjugate().to_string(), "abab");
        assert_eq!(w("bcb").min_conjugate().to_string(), "c");
        assert_eq!(w("adac").min_conjugate().to_string(), "acad");
    }

    #[test]
    fn parse_errors_report_offset() {
        assert_eq!("abx".parse::<Word>(), Err(ParseWordError::BadChar { ch: 'x', offset: 2 }));
        assert_eq!("".parse::<Word>(), Err(ParseWordError::Empty));
        assert_eq!(Word::identity().to_string(), "1");
        assert_eq!(w("1"), Word::identity());
    }

    #[test]
    fn small_balls() {
        assert_eq!(enumerate_ball_free(0, 100).unwrap().len(), 1);
        assert_eq!(enumerate_ball_free(1, 100).unwrap().len(), 5);
        let b2 = enumerate_ball_free(2, 100).unwrap();
        assert_eq!(b2.len(), 11);
        for s in ["ab", "ac", "ad", "ba", "ca", "da"] {
            assert!(b2.contains(&w(s)));
        }
        let err = enumerate_ball_free(5, 20).unwrap_err();
        assert_eq!(err.partial, 20);
    }

    #[test]
    fn reduce_idempotent_exhaustive() {
        // every letter sequence of length ≤ 8
        let mut seqs: Vec<Vec<Letter>> = vec![vec![]];
        for _ in 0..8 {
            let mut next = Vec::new();
            for s in &seqs {
                for x in Letter::ALL {
                    let mut t = s.clone();
                    t.push(x);
                    next.push(t);
                }
            }
            for s in &next {
                let r = Word::reduce(s.iter().copied());
                assert!(is_reduced(r.letters()));
                assert_eq!(Word::reduce(r.letters().iter().copied()), r);
            }
            seqs = next;
        }
    }
}
