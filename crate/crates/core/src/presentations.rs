//! Lysionok's presentation of the Grigorchuk group and its truncations.
//!
//! `Γ_n` is `Γ_{-1}` modulo `u_0..u_n` and `v_0..v_{n-1}`, where
//! `u_k = σ^k((ad)^4)`, `v_k = σ^k((adacac)^4)` and `σ` is the substitution
//! `a ↦ aca, b ↦ d, c ↦ b, d ↦ c`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Letter, Word};

/// One letter of a relator: a generator index, possibly inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenLetter {
    pub gen: usize,
    pub inverse: bool,
}

impl GenLetter {
    pub fn pos(gen: usize) -> Self {
        GenLetter { gen, inverse: false }
    }

    pub fn neg(gen: usize) -> Self {
        GenLetter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        GenLetter { gen: self.gen, inverse: !self.inverse }
    }
}

pub type Relator = Vec<GenLetter>;

/// A finite presentation. Generators flagged as involutions satisfy `x² = 1`
/// implicitly; coset enumeration folds their inverse columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub involutions: Vec<bool>,
    pub relators: Vec<Relator>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown generator {name:?} in relator on line {line}")]
    UnknownGenerator { name: String, line: usize },
    #[error("word letter {0:?} is not a generator of this presentation")]
    LetterNotGenerator(char),
}

impl Presentation {
    pub fn new(generators: Vec<String>, involutions: Vec<bool>, relators: Vec<Relator>) -> Self {
        assert_eq!(generators.len(), involutions.len());
        Presentation { generators, involutions, relators }
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Map a word over `abcd` to a relator over this presentation's generators.
    /// `c` is rewritten as `bd` when the presentation has no generator `c`.
    pub fn relator_from_word(&self, w: &Word) -> Result<Relator, PresentationError> {
        let mut out = Vec::with_capacity(w.len());
        for l in w.letters() {
            let name = l.as_char().to_string();
            match self.generator_index(&name) {
                Some(i) => out.push(GenLetter::pos(i)),
                None if *l == Letter::C => {
                    let b = self.generator_index("b").ok_or(PresentationError::LetterNotGenerator('b'))?;
                    let d = self.generator_index("d").ok_or(PresentationError::LetterNotGenerator('d'))?;
                    out.push(GenLetter::pos(b));
                    out.push(GenLetter::pos(d));
                }
                None => return Err(PresentationError::LetterNotGenerator(l.as_char())),
            }
        }
        Ok(out)
    }

    /// Parse one relator in the `rel:` syntax, e.g. `abab` or `s1 s2^-1`.
    pub fn parse_relator(&self, text: &str) -> Result<Relator, PresentationError> {
        parse_relator(self, text, 0)
    }

    pub fn with_relators(&self, extra: &[Relator]) -> Self {
        let mut p = self.clone();
        p.relators.extend(extra.iter().cloned());
        p
    }

    /// Relators together with `x²` for each involution not already listed.
    pub fn effective_relators(&self) -> Vec<Relator> {
        let mut rels = self.relators.clone();
        for (g, &inv) in self.involutions.iter().enumerate() {
            let sq = vec![GenLetter::pos(g), GenLetter::pos(g)];
            if inv && !rels.contains(&sq) {
                rels.push(sq);
            }
        }
        rels
    }

    pub fn format_relator(&self, r: &Relator) -> String {
        if r.is_empty() {
            return "1".to_string();
        }
        let single = self.generators.iter().all(|g| g.chars().count() == 1);
        let mut tokens: Vec<String> = Vec::new();
        let mut run = String::new();
        for l in r {
            let name = &self.generators[l.gen];
            if l.inverse && !self.involutions[l.gen] {
                if !run.is_empty() {
                    tokens.push(std::mem::take(&mut run));
                }
                tokens.push(format!("{name}^-1"));
            } else if single {
                run.push_str(name);
            } else {
                tokens.push(name.clone());
            }
        }
        if !run.is_empty() {
            tokens.push(run);
        }
        tokens.join(" ")
    }
}

/// Line-oriented text form:
///
/// ```text
/// gens: a b c d
/// involutions: a b c d
/// rel: adadadad
/// rel: s1 s2^-1 s1^2
/// ```
///
/// `involutions:` is optional. A relator is a list of whitespace-separated
/// tokens `name`, `name^k`; when every generator name is a single character
/// a token may also be a run of names such as `bcd`.
impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.generators.join(" "))?;
        let invs: Vec<&str> = self
            .generators
            .iter()
            .zip(&self.involutions)
            .filter(|(_, &i)| i)
            .map(|(g, _)| g.as_str())
            .collect();
        if !invs.is_empty() {
            writeln!(f, "involutions: {}", invs.join(" "))?;
        }
        for r in &self.relators {
            writeln!(f, "rel: {}", self.format_relator(r))?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut generators: Option<Vec<String>> = None;
        let mut involution_names: Vec<(String, usize)> = Vec::new();
        let mut raw_relators: Vec<(String, usize)> = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line_no = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| PresentationError::Syntax {
                line: line_no,
                msg: "expected `key: value`".into(),
            })?;
            match key.trim() {
                "gens" => {
                    if generators.is_some() {
                        return Err(PresentationError::Syntax { line: line_no, msg: "duplicate gens line".into() });
                    }
                    // an empty list is the trivial group
                    generators = Some(value.split_whitespace().map(String::from).collect());
                }
                "involutions" => {
                    involution_names.extend(value.split_whitespace().map(|n| (n.to_string(), line_no)));
                }
                "rel" => raw_relators.push((value.trim().to_string(), line_no)),
                other => {
                    return Err(PresentationError::Syntax { line: line_no, msg: format!("unknown key {other:?}") })
                }
            }
        }
        let generators = generators.ok_or(PresentationError::Syntax { line: 0, msg: "missing gens line".into() })?;
        let mut p = Presentation::new(generators.clone(), vec![false; generators.len()], Vec::new());
        for (name, line) in involution_names {
            let g = p.generator_index(&name).ok_or(PresentationError::UnknownGenerator { name, line })?;
            p.involutions[g] = true;
        }
        for (text, line) in raw_relators {
            let r = parse_relator(&p, &text, line)?;
            if r.is_empty() {
                return Err(PresentationError::Syntax { line, msg: "empty relator".into() });
            }
            p.relators.push(r);
        }
        Ok(p)
    }
}

fn parse_relator(p: &Presentation, text: &str, line: usize) -> Result<Relator, PresentationError> {
    let single = p.generators.iter().all(|g| g.chars().count() == 1);
    let mut out = Vec::new();
    for token in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        let (base, exp) = match token.split_once('^') {
            Some((b, e)) => {
                let e: i64 = e.parse().map_err(|_| PresentationError::Syntax {
                    line,
                    msg: format!("bad exponent in {token:?}"),
                })?;
                (b, e)
            }
            None => (token, 1),
        };
        let letters: Vec<usize> = if let Some(g) = p.generator_index(base) {
            vec![g]
        } else if single {
            base.chars()
                .map(|ch| {
                    p.generator_index(&ch.to_string())
                        .ok_or(PresentationError::UnknownGenerator { name: ch.to_string(), line })
                })
                .collect::<Result<_, _>>()?
        } else {
            return Err(PresentationError::UnknownGenerator { name: base.to_string(), line });
        };
        // An exponent applies to the whole token.
        let unit: Vec<GenLetter> = letters.into_iter().map(GenLetter::pos).collect();
        let block: Vec<GenLetter> = if exp < 0 {
            unit.iter().rev().map(|l| l.inv()).collect()
        } else {
            unit
        };
        for _ in 0..exp.unsigned_abs() {
            out.extend_from_slice(&block);
        }
    }
    Ok(out)
}

/// The substitution `a ↦ aca, b ↦ d, c ↦ b, d ↦ c`, followed by reduction.
pub fn sigma(w: &Word) -> Word {
    Word::reduce(w.letters().iter().flat_map(|&l| sigma_letter(l)))
}

fn sigma_letter(l: Letter) -> Vec<Letter> {
    match l {
        Letter::A => vec![Letter::A, Letter::C, Letter::A],
        Letter::B => vec![Letter::D],
        Letter::C => vec![Letter::B],
        Letter::D => vec![Letter::C],
    }
}

pub fn sigma_pow(w: &Word, n: u32) -> Word {
    (0..n).fold(w.clone(), |acc, _| sigma(&acc))
}

/// `u_n = σ^n((ad)^4)`.
pub fn relator_u(n: u32) -> Word {
    sigma_pow(&"adadadad".parse().expect("literal"), n)
}

/// `v_n = σ^n((adacac)^4)`.
pub fn relator_v(n: u32) -> Word {
    sigma_pow(&"adacac".parse::<Word>().expect("literal").pow(4), n)
}

fn abcd_base() -> Presentation {
    let gens = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let mut p = Presentation::new(gens, vec![true; 4], Vec::new());
    for g in 0..4 {
        p.relators.push(vec![GenLetter::pos(g), GenLetter::pos(g)]);
    }
    p.relators.push(vec![GenLetter::pos(1), GenLetter::pos(2), GenLetter::pos(3)]);
    p
}

/// `Γ_n` on generators `a, b, c, d` for `n ≥ -1`.
pub fn gamma_presentation(n: i32) -> Presentation {
    assert!(n >= -1, "Γ_n is defined for n ≥ -1");
    let mut p = abcd_base();
    for i in 0..=n {
        let r = p.relator_from_word(&relator_u(i as u32)).expect("abcd word");
        p.relators.push(r);
    }
    for i in 0..n {
        let r = p.relator_from_word(&relator_v(i as u32)).expect("abcd word");
        p.relators.push(r);
    }
    p
}

/// `Γ_0 = ⟨a, b, d | a², b², d², (bd)², (ad)^4⟩`, with `c = bd` eliminated.
pub fn gamma0_coxeter_presentation() -> Presentation {
    let gens = ["a", "b", "d"].iter().map(|s| s.to_string()).collect();
    let (a, b, d) = (GenLetter::pos(0), GenLetter::pos(1), GenLetter::pos(2));
    Presentation::new(
        gens,
        vec![true; 3],
        vec![vec![a, a], vec![b, b], vec![d, d], vec![b, d, b, d], [a, d].repeat(4)],
    )
}

/// Generators of the parity kernel Ξ: `b, c, d, aba, aca, ada`.
pub fn xi_generators() -> Vec<Word> {
    ["b", "c", "d", "aba", "aca", "ada"].iter().map(|s| s.parse().expect("literal")).collect()
}

/// Recursively defined index bounds `α'_n`, `β'_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexBounds {
    pub n: u32,
    #[serde(with = "bigint_string")]
    pub alpha: BigInt,
    #[serde(with = "bigint_string")]
    pub beta: BigInt,
}

/// `α'_0 = 4, β'_0 = 0, α'_n = 4α'_{n-1} + 1, β'_n = 2α'_{n-1} + 2β'_{n-1}`.
pub fn index_bounds(n: u32) -> IndexBounds {
    let mut alpha = BigInt::from(4);
    let mut beta = BigInt::from(0);
    for _ in 0..n {
        let next_alpha = &alpha * 4 + 1;
        let next_beta = &alpha * 2 + &beta * 2;
        alpha = next_alpha;
        beta = next_beta;
    }
    IndexBounds { n, alpha, beta }
}

/// `((13·4^n − 1)/3, (13·4^n − 15·2^n + 2)/3)`.
pub fn index_closed_forms(n: u32) -> (BigInt, BigInt) {
    let four_n: BigInt = Pow::pow(BigInt::from(4), n);
    let two_n: BigInt = Pow::pow(BigInt::from(2), n);
    let alpha = (&four_n * 13 - BigInt::one()) / 3;
    let beta = (&four_n * 13 - &two_n * 15 + 2) / 3;
    (alpha, beta)
}

pub fn closed_form_check(n: u32) -> bool {
    let b = index_bounds(n);
    let four_n: BigInt = Pow::pow(BigInt::from(4), n);
    let two_n: BigInt = Pow::pow(BigInt::from(2), n);
    // exact divisibility, not just truncated division
    let num_a = &four_n * 13 - 1;
    let num_b = &four_n * 13 - &two_n * 15 + 2;
    num_a == &b.alpha * 3 && num_b == &b.beta * 3
}

pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
