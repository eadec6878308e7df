//! Letter ranking and q-gram encoding.
//!
//! A q-gram `g` over an alphabet of size `σ` encodes to the big-endian base-σ
//! number `Σ rank(g[i]) · σ^(q-1-i)`, so enumeration order is lexicographic
//! order under the rank.

use std::fmt;

use crate::error::{Error, Result};

const FOREIGN: u16 = u16::MAX;

#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<u8>,
    ranks: [u16; 256],
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Alphabet")
            .field(&String::from_utf8_lossy(&self.letters))
            .finish()
    }
}

impl Alphabet {
    /// Ranks are assigned in list order.
    pub fn from_letters(letters: &[u8]) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut ranks = [FOREIGN; 256];
        for (r, &b) in letters.iter().enumerate() {
            if ranks[b as usize] != FOREIGN {
                return Err(Error::DuplicateLetter(b));
            }
            ranks[b as usize] = r as u16;
        }
        if letters.len() < 2 {
            return Err(Error::AlphabetTooSmall(letters.len()));
        }
        Ok(Alphabet {
            letters: letters.to_vec(),
            ranks,
        })
    }

    pub fn dna() -> Self {
        Self::from_letters(b"ACGT").expect("preset is valid")
    }

    /// Sorted distinct letters of all the given sequences.
    pub fn auto<'a>(sequences: impl IntoIterator<Item = &'a [u8]>) -> Result<Self> {
        let mut seen = [false; 256];
        for s in sequences {
            for &b in s {
                seen[b as usize] = true;
            }
        }
        let letters: Vec<u8> = (0..=255u8).filter(|&b| seen[b as usize]).collect();
        Self::from_letters(&letters)
    }

    /// Resolves `dna` or `letters:STR`. `auto` needs the input sequences and
    /// is handled by [`Alphabet::auto`].
    pub fn from_preset(name: &str) -> Result<Self> {
        match name {
            "dna" => Ok(Self::dna()),
            _ => match name.strip_prefix("letters:") {
                Some(letters) => Self::from_letters(letters.as_bytes()),
                None => Err(Error::UnknownAlphabet(name.to_string())),
            },
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    #[inline]
    pub fn rank(&self, letter: u8) -> Option<usize> {
        match self.ranks[letter as usize] {
            FOREIGN => None,
            r => Some(r as usize),
        }
    }

    pub fn unrank(&self, rank: usize) -> u8 {
        self.letters[rank]
    }

    pub fn contains(&self, letter: u8) -> bool {
        self.rank(letter).is_some()
    }

    /// `σ^q`, or `None` on overflow.
    pub fn qgram_space(&self, q: usize) -> Option<usize> {
        self.size().checked_pow(u32::try_from(q).ok()?)
    }

    /// Returns `None` when `gram` holds a letter outside the alphabet.
    #[inline]
    pub fn encode(&self, gram: &[u8]) -> Option<usize> {
        let sigma = self.size();
        let mut code = 0usize;
        for &b in gram {
            code = code * sigma + self.rank(b)?;
        }
        Some(code)
    }

    pub fn decode(&self, mut code: usize, q: usize) -> Vec<u8> {
        let sigma = self.size();
        let mut gram = vec![0u8; q];
        for slot in gram.iter_mut().rev() {
            *slot = self.letters[code % sigma];
            code /= sigma;
        }
        gram
    }

    /// All `σ^q` q-grams in encoding order.
    pub fn qgrams(&self, q: usize) -> QGrams<'_> {
        QGrams {
            alphabet: self,
            digits: vec![0; q],
            done: false,
        }
    }
}

/// Odometer over `Σ^q`.
pub struct QGrams<'a> {
    alphabet: &'a Alphabet,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for QGrams<'_> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let gram = self
            .digits
            .iter()
            .map(|&r| self.alphabet.unrank(r))
            .collect();
        self.done = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.alphabet.size() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(gram)
    }
}
