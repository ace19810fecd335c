//! Word problem in the braid group Bₙ via Dehornoy handle reduction,
//! plus the permutation projection σᵢ ↦ (i, i+1).
//!
//! A σᵢ-handle is a subword σᵢ^e v σᵢ^{-e} where v contains no letter
//! of index ≤ i. Reducing it drops the bounding letters and rewrites
//! each σᵢ₊₁^d inside as σᵢ₊₁^{-e} σᵢ^d σᵢ₊₁^{e}. A freely reduced
//! word with no handles is either empty or σ-definite in its lowest
//! index, hence nontrivial.

use crate::error::{Error, Result};
use crate::words::Word;

/// Default bound on handle-reduction steps. Handle reduction provably
/// terminates, so hitting this is a hard error.
pub const DEFAULT_STEP_BUDGET: usize = 10_000_000;

/// A word in the Artin generators of Bₙ; letters are (index, exponent)
/// with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    n: usize,
    letters: Vec<(usize, i8)>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::StrandCount { min: 2, got: n });
        }
        for &(i, e) in &letters {
            if i == 0 || i >= n {
                return Err(Error::IndexRange(format!("braid letter s{i} in B{n}")));
            }
            debug_assert!(e == 1 || e == -1);
        }
        Ok(BraidWord { n, letters: free_reduce(letters) })
    }

    /// Parse letters written `s1 s2^-1 ...`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "e" {
                continue;
            }
            let (name, sign) = match tok.strip_suffix("^-1") {
                Some(base) => (base, -1),
                None => (tok, 1),
            };
            let idx: usize = name
                .strip_prefix('s')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::UnknownGenerator(tok.to_string()))?;
            letters.push((idx, sign));
        }
        BraidWord::new(n, letters)
    }

    /// Interpret a free-group word whose i-th generator is σᵢ₊₁.
    pub fn from_word(n: usize, w: &Word) -> Result<Self> {
        let letters = w.letters().iter().map(|&(g, e)| (g + 1, e)).collect();
        BraidWord::new(n, letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn multiply(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.n != other.n {
            return Err(Error::IndexRange(format!(
                "strand mismatch {} vs {}",
                self.n, other.n
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        BraidWord::new(self.n, letters)
    }

    pub fn invert(&self) -> BraidWord {
        let letters = self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect();
        BraidWord { n: self.n, letters }
    }

    /// Image under the quotient Bₙ → Sₙ, σᵢ ↦ (i, i+1); returned as the
    /// image vector perm[p] of points 0..n-1.
    pub fn permutation_image(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.n).collect();
        // right-to-left composition: apply first letter first
        for &(i, _) in &self.letters {
            perm.swap(i - 1, i);
        }
        perm
    }

    pub fn is_trivial(&self) -> Result<bool> {
        Ok(self.handle_reduce_with_budget(DEFAULT_STEP_BUDGET)?.is_empty())
    }

    /// Run handle reduction to a handle-free word.
    pub fn handle_reduce(&self) -> Result<Vec<(usize, i8)>> {
        self.handle_reduce_with_budget(DEFAULT_STEP_BUDGET)
    }

    pub fn handle_reduce_with_budget(&self, budget: usize) -> Result<Vec<(usize, i8)>> {
        let mut w = self.letters.clone();
        let mut steps = 0usize;
        while let Some((p, q)) = find_handle(&w) {
            steps += 1;
            if steps > budget {
                return Err(Error::StepBudget(budget));
            }
            let (main, e) = w[p];
            let mut next = Vec::with_capacity(w.len() + 4);
            next.extend_from_slice(&w[..p]);
            for &(i, d) in &w[p + 1..q] {
                if i == main + 1 {
                    next.push((i, -e));
                    next.push((main, d));
                    next.push((i, e));
                } else {
                    next.push((i, d));
                }
            }
            next.extend_from_slice(&w[q + 1..]);
            w = free_reduce(next);
        }
        Ok(w)
    }
}

fn free_reduce(letters: Vec<(usize, i8)>) -> Vec<(usize, i8)> {
    let mut out: Vec<(usize, i8)> = Vec::with_capacity(letters.len());
    for l in letters {
        match out.last() {
            Some(&(i, e)) if i == l.0 && e == -l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

/// Find the handle with the leftmost closing letter. Returns positions
/// (p, q) of the bounding letters. Minimality of q guarantees the
/// interior contains no nested handle, the condition under which
/// repeated reduction terminates.
fn find_handle(w: &[(usize, i8)]) -> Option<(usize, usize)> {
    // last occurrence position of each generator index seen so far
    let mut last: Vec<Option<usize>> = Vec::new();
    for (q, &(i, _)) in w.iter().enumerate() {
        if i >= last.len() {
            last.resize(i + 1, None);
        }
        if let Some(p) = last[i] {
            // letters strictly between p and q all have index > i by
            // construction of `last` (any index ≤ i would have reset it)
            if w[p].1 == -w[q].1 {
                return Some((p, q));
            }
        }
        last[i] = Some(q);
        // any occurrence of index i invalidates pending handles of
        // higher index that would span it
        for j in (i + 1)..last.len() {
            last[j] = None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn bw(n: usize, s: &str) -> BraidWord {
        BraidWord::parse(n, s).unwrap()
    }

    #[test]
    fn permutation_examples() {
        let w = bw(3, "s1 s2 s1");
        assert_eq!(w.permutation_image(), vec![2, 1, 0]); // (1 3)
        let rel = bw(4, "s1 s2 s1 s2^-1 s1^-1 s2^-1");
        assert_eq!(rel.permutation_image(), vec![0, 1, 2, 3]);
        assert_eq!(bw(4, "s1").permutation_image(), vec![1, 0, 2, 3]);
    }

    #[test]
    fn triviality_examples() {
        assert!(bw(4, "s1 s2 s1 s2^-1 s1^-1 s2^-1").is_trivial().unwrap());
        assert!(bw(4, "s3 s1 s3^-1 s1^-1").is_trivial().unwrap());
        assert!(!bw(4, "s1 s2").is_trivial().unwrap());
        assert!(!bw(4, "s1").is_trivial().unwrap());
        assert!(bw(4, "e").is_trivial().unwrap());
    }

    fn random_word(rng: &mut impl Rng, n: usize, len: usize) -> BraidWord {
        let letters = (0..len)
            .map(|_| (rng.gen_range(1..n), *[1i8, -1].choose(rng).unwrap()))
            .collect();
        BraidWord::new(n, letters).unwrap()
    }

    #[test]
    fn random_conjugates_of_relators_are_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let relators = [
            bw(6, "s1 s2 s1 s2^-1 s1^-1 s2^-1"),
            bw(6, "s3 s4 s3 s4^-1 s3^-1 s4^-1"),
            bw(6, "s1 s4 s1^-1 s4^-1"),
            bw(6, "s2 s5 s2^-1 s5^-1"),
        ];
        for _ in 0..100 {
            let len = rng.gen_range(0..10);
            let w = random_word(&mut rng, 6, len);
            let r = relators.choose(&mut rng).unwrap();
            let conj = w.multiply(r).unwrap().multiply(&w.invert()).unwrap();
            assert!(conj.is_trivial().unwrap());
        }
    }

    #[test]
    fn w_winv_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let len = rng.gen_range(0..14);
            let w = random_word(&mut rng, 5, len);
            assert!(w.multiply(&w.invert()).unwrap().is_trivial().unwrap());
        }
    }

    #[test]
    fn trivial_implies_trivial_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let id: Vec<usize> = (0..5).collect();
        for _ in 0..300 {
            let len = rng.gen_range(0..8);
            let w = random_word(&mut rng, 5, len);
            if w.is_trivial().unwrap() {
                assert_eq!(w.permutation_image(), id);
            }
        }
    }
}
