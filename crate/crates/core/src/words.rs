//! Free-group word algebra over an interned generator alphabet.
//!
//! Words are kept freely reduced at all times; the empty word is the
//! identity and prints as `e`. The text grammar is whitespace-separated
//! tokens, each a generator name optionally followed by `^-1`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered, interned generator alphabet. Words carry a reference to
/// their alphabet so that words from different presentations cannot be
/// silently mixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateGenerator(n.clone()));
            }
        }
        Ok(Arc::new(Alphabet { names }))
    }

    /// The alphabet x1, x2, ..., x{count}.
    pub fn x_gens(count: usize) -> Arc<Self> {
        Alphabet::new((1..=count).map(|i| format!("x{i}"))).expect("x-names are unique")
    }

    /// The alphabet s1, s2, ..., s{count} used for braid letters.
    pub fn s_gens(count: usize) -> Arc<Self> {
        Alphabet::new((1..=count).map(|i| format!("s{i}"))).expect("s-names are unique")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A signed letter: generator index into the alphabet plus exponent ±1.
pub type Letter = (usize, i8);

/// A freely reduced word in the free group on an [`Alphabet`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    match out.last() {
        Some(&(g, e)) if g == l.0 && e == -l.1 => {
            out.pop();
        }
        _ => out.push(l),
    }
}

impl Word {
    /// The identity element.
    pub fn identity(alphabet: Arc<Alphabet>) -> Self {
        Word { alphabet, letters: Vec::new() }
    }

    /// Freely reduce a raw letter sequence.
    pub fn reduce(alphabet: Arc<Alphabet>, raw: &[Letter]) -> Result<Self> {
        let mut letters = Vec::with_capacity(raw.len());
        for &(g, e) in raw {
            if g >= alphabet.len() {
                return Err(Error::IndexRange(format!("generator index {g}")));
            }
            debug_assert!(e == 1 || e == -1);
            push_reduced(&mut letters, (g, e));
        }
        Ok(Word { alphabet, letters })
    }

    /// The single-letter word for one generator.
    pub fn generator(alphabet: Arc<Alphabet>, idx: usize, sign: i8) -> Result<Self> {
        Word::reduce(alphabet, &[(idx, sign)])
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_alphabet(&self, other: &Word) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(
                self.alphabet.names.join(" "),
                other.alphabet.names.join(" "),
            ))
        }
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_alphabet(other)?;
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(Word { alphabet: self.alphabet.clone(), letters })
    }

    pub fn invert(&self) -> Word {
        let letters = self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect();
        Word { alphabet: self.alphabet.clone(), letters }
    }

    /// u·w·u⁻¹ — the `^u w` convention used throughout the crate.
    pub fn conjugate(u: &Word, w: &Word) -> Result<Word> {
        u.multiply(w)?.multiply(&u.invert())
    }

    /// a·b·a⁻¹·b⁻¹.
    pub fn commutator(a: &Word, b: &Word) -> Result<Word> {
        a.multiply(b)?.multiply(&a.invert())?.multiply(&b.invert())
    }

    pub fn pow_sign(&self, sign: i8) -> Word {
        if sign >= 0 {
            self.clone()
        } else {
            self.invert()
        }
    }

    /// Signed generator counts; a homomorphism onto ℤ^|alphabet|.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.alphabet.len()];
        for &(g, e) in &self.letters {
            out[g] += e as i64;
        }
        out
    }

    /// Parse the text grammar. `e` (alone) and the empty string denote
    /// the identity.
    pub fn parse(alphabet: Arc<Alphabet>, text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.is_empty() || tokens == ["e"] {
            return Ok(Word::identity(alphabet));
        }
        let mut raw = Vec::with_capacity(tokens.len());
        for tok in tokens {
            let (name, sign) = match tok.strip_suffix("^-1") {
                Some(base) => (base, -1),
                None => (tok, 1),
            };
            let idx = alphabet
                .index_of(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            raw.push((idx, sign));
        }
        Word::reduce(alphabet, &raw)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, &(g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.alphabet.name(g))?;
            if e < 0 {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}
