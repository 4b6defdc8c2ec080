//! Words of the unital free semigroup on `N` generators.
//!
//! Words are ordered graded-lexicographically: shorter words come first and
//! words of equal length compare letter by letter. `Ord` on [`Word`] is this
//! order, so ordered maps keyed by words iterate in enumeration order.
//!
//! The alphabet size travels alongside words as a separate argument.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Letters are 1-based. No alphabet check here; see [`Word::check`].
    pub fn new(letters: Vec<usize>) -> Self {
        Word { letters }
    }

    pub fn from_letters(letters: &[usize]) -> Self {
        Word { letters: letters.to_vec() }
    }

    pub fn letter(k: usize) -> Self {
        Word { letters: alloc::vec![k] }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.letters.first().copied()
    }

    /// The word with its first letter removed (`∅` stays `∅`).
    pub fn tail(&self) -> Word {
        Word { letters: self.letters.get(1..).unwrap_or(&[]).to_vec() }
    }

    /// `k` followed by the letters of `self`.
    pub fn prepend(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(k);
        letters.extend_from_slice(&self.letters);
        Word { letters }
    }

    pub fn check(&self, n_letters: usize) -> Result<()> {
        match self.letters.iter().find(|&&l| l == 0 || l > n_letters) {
            Some(&letter) => Err(Error::LetterOutOfRange { letter, n_letters }),
            None => Ok(()),
        }
    }

    /// String form: digits for `N <= 9`, dot-separated decimals otherwise.
    pub fn encode(&self, n_letters: usize) -> String {
        if n_letters <= 9 {
            self.letters.iter().map(|l| char::from(b'0' + *l as u8)).collect()
        } else {
            let parts: Vec<String> = self.letters.iter().map(|l| format!("{l}")).collect();
            parts.join(".")
        }
    }

    pub fn parse(s: &str, n_letters: usize) -> Result<Word> {
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let letters: Option<Vec<usize>> = if n_letters <= 9 {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        } else {
            s.split('.').map(|p| p.parse::<usize>().ok()).collect()
        };
        let word = Word { letters: letters.ok_or_else(|| Error::BadWord(s.into()))? };
        word.check(n_letters)?;
        Ok(word)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| format!("{l}")).collect();
        f.write_str(&parts.join("."))
    }
}

/// Number of words of length at most `max_len`: `Σ_{k ≤ max_len} N^k`.
pub fn word_count(n_letters: usize, max_len: usize) -> usize {
    let mut total = 0;
    let mut level = 1;
    for _ in 0..=max_len {
        total += level;
        level *= n_letters;
    }
    total
}

/// All words of length at most `max_len`, in increasing order.
pub fn enumerate_words(n_letters: usize, max_len: usize) -> Vec<Word> {
    assert!(n_letters >= 1, "alphabet must have at least one letter");
    let mut out = Vec::with_capacity(word_count(n_letters, max_len));
    out.push(Word::empty());
    let mut level_start = 0;
    for _ in 0..max_len {
        let level_end = out.len();
        // words of the next length, in order: first letter major
        for k in 1..=n_letters {
            for i in level_start..level_end {
                let w = out[i].prepend(k);
                out.push(w);
            }
        }
        level_start = level_end;
    }
    out
}

/// Words of length exactly `len`, in increasing order.
pub fn words_of_length(n_letters: usize, len: usize) -> Vec<Word> {
    let mut out = alloc::vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * n_letters);
        for k in 1..=n_letters {
            next.extend(out.iter().map(|w| w.prepend(k)));
        }
        out = next;
    }
    out
}

pub fn compare(u: &Word, v: &Word) -> Ordering {
    u.cmp(v)
}

/// Position of `w` in [`enumerate_words`].
pub fn index_of(w: &Word, n_letters: usize) -> usize {
    let shorter = if w.is_empty() { 0 } else { word_count(n_letters, w.len() - 1) };
    shorter + w.letters.iter().fold(0, |acc, &l| acc * n_letters + (l - 1))
}

/// Next word in the graded-lexicographic order.
pub fn successor(w: &Word, n_letters: usize) -> Word {
    let mut letters = w.letters.clone();
    for pos in (0..letters.len()).rev() {
        if letters[pos] < n_letters {
            letters[pos] += 1;
            for l in &mut letters[pos + 1..] {
                *l = 1;
            }
            return Word { letters };
        }
    }
    Word { letters: alloc::vec![1; w.len() + 1] }
}

/// Previous word in the graded-lexicographic order; `∅` has none.
pub fn predecessor(w: &Word, n_letters: usize) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::Domain("the empty word has no predecessor"));
    }
    let mut letters = w.letters.clone();
    for pos in (0..letters.len()).rev() {
        if letters[pos] > 1 {
            letters[pos] -= 1;
            for l in &mut letters[pos + 1..] {
                *l = n_letters;
            }
            return Ok(Word { letters });
        }
    }
    Ok(sigma_max(n_letters, w.len() - 1))
}

/// The largest word of length `n`: the letter `N` repeated `n` times.
pub fn sigma_max(n_letters: usize, n: usize) -> Word {
    Word { letters: alloc::vec![n_letters; n] }
}

pub fn concat(u: &Word, v: &Word) -> Word {
    let mut letters = u.letters.clone();
    letters.extend_from_slice(&v.letters);
    Word { letters }
}
