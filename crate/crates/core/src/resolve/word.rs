//! Cyclic scheme words.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::letters::{Family, Letter};
use crate::error::Error;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SchemeWord {
    pub letters: Vec<Letter>,
}

impl SchemeWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn rotate(&self, k: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let n = letters.len();
            letters.rotate_left(k % n);
        }
        Self { letters }
    }

    /// The lexicographically least rotation.
    pub fn canonical(&self) -> Self {
        (0..self.letters.len().max(1))
            .map(|k| self.rotate(k))
            .min_by(|a, b| a.letters.cmp(&b.letters))
            .unwrap_or_default()
    }
}

/// Prints the canonical rotation.
impl fmt::Display for SchemeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        let parts: Vec<String> = c.letters.iter().map(Letter::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for SchemeWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(Self {
            letters: s
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()?,
        })
    }
}

impl Serialize for SchemeWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Only `V3`/`C3` letters; the empty word counts as degenerated.
pub fn is_degenerated(w: &SchemeWord) -> bool {
    w.letters
        .iter()
        .all(|l| matches!(l.family, Family::V3 | Family::C3))
}

/// Equality up to cyclic rotation.
pub fn words_equivalent(a: &SchemeWord, b: &SchemeWord) -> bool {
    a.len() == b.len() && a.canonical() == b.canonical()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> SchemeWord {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_rotation() {
        let cusp = w("C3+ V1-+ C3+ V1-+ C3+ C3-");
        assert_eq!(cusp.to_string(), "C3+ C3- C3+ V1-+ C3+ V1-+");
        assert!(words_equivalent(&cusp, &cusp.rotate(2)));
        assert!(!words_equivalent(&cusp, &w("C3+ V1-+ C3+ V1-+ C3+ C3+")));
        assert!(!words_equivalent(&w("C3+ C3- V3+"), &w("V3+ C3- C3+ C3+")));
    }

    #[test]
    fn reversal_is_not_a_rotation() {
        let a = w("C3+ V1-+ V3+");
        let rev = SchemeWord::new(a.letters.iter().rev().copied().collect());
        assert!(!words_equivalent(&a, &rev));
    }

    #[test]
    fn degeneracy() {
        assert!(!is_degenerated(&w("C3+ V1-+ C3+ V1-+ C3+ C3-")));
        assert!(is_degenerated(&w("C3+ C3+ C3-")));
        assert!(is_degenerated(&SchemeWord::default()));
    }
}
