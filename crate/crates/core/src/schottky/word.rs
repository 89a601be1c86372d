use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// `g_i` or its inverse. Generators are indexed from zero internally and
/// printed from one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub gen: u16,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen: gen as u16, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// `2 gen + inverse`, the enumeration order.
    pub fn code(self) -> usize {
        2 * self.gen as usize + self.inverse as usize
    }

    pub fn from_code(c: usize) -> Self {
        Letter { gen: (c / 2) as u16, inverse: c % 2 == 1 }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "g{}^-1", self.gen + 1)
        } else {
            write!(f, "g{}", self.gen + 1)
        }
    }
}

/// A reduced word in the free generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Append with free cancellation.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inv()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn mul(&self, o: &Word) -> Word {
        let mut w = self.clone();
        for &l in &o.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, n: i32) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => self.0.len() == 1 || *a != b.inv(),
            _ => true,
        }
    }

    /// Parse `g1 g2^-1 ...`; `e` is the identity.
    pub fn parse(s: &str, n_gens: usize) -> Result<Word> {
        let mut w = Word::identity();
        for tok in s.split_whitespace() {
            if tok == "e" {
                continue;
            }
            let (body, inverse) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let idx: usize = body
                .strip_prefix('g')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad letter '{tok}'")))?;
            if idx == 0 || idx > n_gens {
                return Err(Error::Parse(format!("generator index {idx} out of range")));
            }
            w.push(Letter::new(idx - 1, inverse));
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Reduced words of length `1..=max_len` by length, then by letter codes.
pub fn reduced_words(n_gens: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for c in 0..2 * n_gens {
                let l = Letter::from_code(c);
                if w.0.last() == Some(&l.inv()) {
                    continue;
                }
                let mut x = w.clone();
                x.0.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
