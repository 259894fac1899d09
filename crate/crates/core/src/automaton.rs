//! Complete deterministic automata without initial or final states.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stateset::{StateSet, MAX_STATES};
use crate::transform::Transformation;

/// A finite word over the letters `0..k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters.into_iter().map(|x| x as u8).collect())
    }

    /// Builds a word from alphabetic letter names, `a` being letter 0.
    pub fn from_letters(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok(c as u8 - b'a')
                } else {
                    Err(Error::Parse(format!("unexpected letter {c:?} in word")))
                }
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&x| x as usize)
    }

    pub fn push(&mut self, x: usize) {
        self.0.push(x as u8);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Alphabetic rendering (`a`, `b`, ...), for alphabets of at most 26 letters.
    pub fn to_letters(&self) -> String {
        self.0.iter().map(|&x| (b'a' + x) as char).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(|t| {
                t.parse::<u8>()
                    .map_err(|_| Error::Parse(format!("bad letter index {t:?}")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// A complete deterministic automaton `(Q, Sigma, delta)` with `n` states and
/// `k` letters, stored as a `k x n` table: `delta[x][q]` is the successor of
/// state `q` under letter `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automaton {
    n: usize,
    k: usize,
    delta: Vec<u8>,
}

impl Automaton {
    /// Builds an automaton from its letter rows.
    pub fn new(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 || n > MAX_STATES {
            return Err(Error::InvalidParameter(format!(
                "state count must be in 1..={MAX_STATES}, got {n}"
            )));
        }
        let k = rows.len();
        let mut delta = Vec::with_capacity(k * n);
        for (x, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "letter {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for t in row {
                if t >= n {
                    return Err(Error::StateOutOfRange { state: t, n });
                }
                delta.push(t as u8);
            }
        }
        Ok(Automaton { n, k, delta })
    }

    pub(crate) fn from_table(n: usize, k: usize, delta: Vec<u8>) -> Self {
        debug_assert_eq!(delta.len(), n * k);
        debug_assert!(delta.iter().all(|&t| (t as usize) < n));
        Automaton { n, k, delta }
    }

    /// The automaton with `n` states and an empty alphabet.
    pub fn empty(n: usize) -> Self {
        assert!((1..=MAX_STATES).contains(&n));
        Automaton { n, k: 0, delta: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The whole table, letter-major.
    pub fn table(&self) -> &[u8] {
        &self.delta
    }

    pub fn row(&self, x: usize) -> &[u8] {
        &self.delta[x * self.n..(x + 1) * self.n]
    }

    #[inline]
    pub fn next(&self, q: usize, x: usize) -> usize {
        self.delta[x * self.n + q] as usize
    }

    pub fn letter(&self, x: usize) -> Transformation {
        Transformation::from_bytes(self.row(x).to_vec())
    }

    pub fn letters(&self) -> impl Iterator<Item = Transformation> + '_ {
        (0..self.k).map(|x| self.letter(x))
    }

    pub fn full_set(&self) -> StateSet {
        StateSet::full(self.n)
    }

    /// Image `Sx` of a state set under a single letter.
    #[inline]
    pub fn image(&self, set: StateSet, x: usize) -> StateSet {
        let row = self.row(x);
        let mut out = 0u64;
        let mut bits = set.bits();
        while bits != 0 {
            let q = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out |= 1u64 << row[q];
        }
        StateSet::from_bits(out)
    }

    /// Preimage `S x^-1 = {q : qx in S}`.
    #[inline]
    pub fn preimage(&self, set: StateSet, x: usize) -> StateSet {
        let row = self.row(x);
        let mut out = 0u64;
        for (q, &t) in row.iter().enumerate() {
            if set.contains(t as usize) {
                out |= 1u64 << q;
            }
        }
        StateSet::from_bits(out)
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.letters().find(|&x| x >= self.k) {
            Some(letter) => Err(Error::LetterOutOfRange { letter, k: self.k }),
            None => Ok(()),
        }
    }

    /// `Sw`, the image of `set` under the word `w`.
    pub fn apply(&self, set: StateSet, w: &Word) -> Result<StateSet> {
        self.check_word(w)?;
        if let Some(q) = set.iter().find(|&q| q >= self.n) {
            return Err(Error::StateOutOfRange { state: q, n: self.n });
        }
        Ok(w.letters().fold(set, |s, x| self.image(s, x)))
    }

    /// `|Qw|`.
    pub fn word_rank(&self, w: &Word) -> Result<usize> {
        self.apply(self.full_set(), w).map(StateSet::len)
    }

    /// The transformation induced by `w`.
    pub fn word_action(&self, w: &Word) -> Result<Transformation> {
        self.check_word(w)?;
        Ok(w.letters().fold(Transformation::identity(self.n), |t, x| {
            t.then(&self.letter(x))
        }))
    }

    /// The restriction of `delta` to the given sub-alphabet, letters kept in
    /// the given order.
    pub fn restrict(&self, letters: &[usize]) -> Result<Automaton> {
        if letters.is_empty() {
            return Err(Error::InvalidParameter(
                "restriction needs a non-empty sub-alphabet".into(),
            ));
        }
        let mut delta = Vec::with_capacity(letters.len() * self.n);
        for &x in letters {
            if x >= self.k {
                return Err(Error::LetterOutOfRange { letter: x, k: self.k });
            }
            delta.extend_from_slice(self.row(x));
        }
        Ok(Automaton { n: self.n, k: letters.len(), delta })
    }

    /// One-letter extension: appends `row` as letter `k`.
    pub fn with_letter(&self, row: &[u8]) -> Automaton {
        assert_eq!(row.len(), self.n);
        let mut delta = Vec::with_capacity(self.delta.len() + self.n);
        delta.extend_from_slice(&self.delta);
        delta.extend_from_slice(row);
        Automaton { n: self.n, k: self.k + 1, delta }
    }

    /// The isomorphic copy in which state `q` is renamed `perm[q]`.
    pub fn relabel_states(&self, perm: &[usize]) -> Automaton {
        assert_eq!(perm.len(), self.n);
        let mut delta = vec![0u8; self.delta.len()];
        for x in 0..self.k {
            for q in 0..self.n {
                delta[x * self.n + perm[q]] = perm[self.next(q, x)] as u8;
            }
        }
        Automaton { n: self.n, k: self.k, delta }
    }

    /// The automaton whose letter `i` is this automaton's letter `order[i]`.
    pub fn reorder_letters(&self, order: &[usize]) -> Automaton {
        assert_eq!(order.len(), self.k);
        self.restrict(order).expect("letter order must be a permutation")
    }

    /// Renders the automaton in the corpus line format
    /// `n k : r0 ; r1 ; ... ; r(k-1)`.
    pub fn to_line(&self) -> String {
        self.to_string()
    }

    pub fn parse_line(line: &str) -> Result<Automaton> {
        line.parse()
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} :", self.n, self.k)?;
        for x in 0..self.k {
            if x > 0 {
                write!(f, " ;")?;
            }
            for &t in self.row(x) {
                write!(f, " {t}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Automaton({self})")
    }
}

fn parse_usize(tok: &str, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::Parse(format!("bad {what} {tok:?}")))
}

impl FromStr for Automaton {
    type Err = Error;

    fn from_str(line: &str) -> Result<Automaton> {
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse("missing ':' separator".into()))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        if head.len() != 2 {
            return Err(Error::Parse(format!(
                "header must be `n k`, got {:?}",
                head.join(" ")
            )));
        }
        let n = parse_usize(head[0], "state count")?;
        let k = parse_usize(head[1], "alphabet size")?;
        let rows: Vec<&str> = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(';').collect()
        };
        if rows.len() != k {
            return Err(Error::Parse(format!(
                "expected {k} letter rows, found {}",
                rows.len()
            )));
        }
        let rows = rows
            .into_iter()
            .map(|r| {
                r.split_whitespace()
                    .map(|t| parse_usize(t, "state"))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Automaton::new(n, rows)
    }
}

impl Serialize for Automaton {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_line())
    }
}

impl<'de> Deserialize<'de> for Automaton {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
