//! Group presentations, the Artin presentation of the braid group Bₙ,
//! and abelianized boundary matrices.
//!
//! The Artin presentation splits its relators into the braid relators
//! r_{j,j+1} = x_j x_{j+1} x_j x_{j+1}⁻¹ x_j⁻¹ x_{j+1}⁻¹ and the
//! commuting relators r_{j,k} = [x_j, x_k] for k − j ≥ 2.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::intlin::{cokernel_invariants, IntMatrix};
use crate::words::{Alphabet, Word};

/// Generators plus an ordered list of named relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Arc<Alphabet>,
    relators: Vec<(String, Word)>,
}

impl Presentation {
    pub fn new(alphabet: Arc<Alphabet>, relators: Vec<(String, Word)>) -> Result<Self> {
        for (i, (name, word)) in relators.iter().enumerate() {
            if relators[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::DuplicateRelator(name.clone()));
            }
            if word.is_identity() {
                return Err(Error::EmptyRelator(name.clone()));
            }
            if *word.alphabet() != alphabet {
                return Err(Error::AlphabetMismatch(
                    alphabet.names().join(" "),
                    word.alphabet().names().join(" "),
                ));
            }
        }
        Ok(Presentation { alphabet, relators })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn relators(&self) -> &[(String, Word)] {
        &self.relators
    }

    pub fn relator(&self, name: &str) -> Option<&Word> {
        self.relators.iter().find(|(n, _)| n == name).map(|(_, w)| w)
    }

    /// Append a relator, keeping names unique.
    pub fn with_relator(&self, name: &str, word: Word) -> Result<Presentation> {
        let mut relators = self.relators.clone();
        relators.push((name.to_string(), word));
        Presentation::new(self.alphabet.clone(), relators)
    }

    /// One row per relator, one column per generator, entries the
    /// exponent sums of the relator.
    pub fn abelianized_boundary(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.relators.len(), self.alphabet.len());
        for (i, (_, w)) in self.relators.iter().enumerate() {
            for (j, s) in w.exponent_sums().into_iter().enumerate() {
                m.set(i, j, BigInt::from(s));
            }
        }
        m
    }

    /// Invariant factors of the abelianization of the presented group,
    /// unit factors dropped, one 0 per free rank.
    pub fn h1(&self) -> Vec<BigInt> {
        cokernel_invariants(&self.abelianized_boundary().transpose())
    }

    /// Line-oriented text format: `gens: x1 x2` then `rel <name>: <word>`
    /// per relator.
    pub fn emit(&self) -> String {
        let mut out = format!("gens: {}\n", self.alphabet.names().join(" "));
        for (name, word) in &self.relators {
            out.push_str(&format!("rel {name}: {word}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Presentation> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or_else(|| Error::Parse("empty presentation file".into()))?;
        let gens = head
            .strip_prefix("gens:")
            .ok_or_else(|| Error::Parse("first line must start with `gens:`".into()))?;
        let alphabet = Alphabet::new(gens.split_whitespace().map(str::to_string))?;
        let mut relators = Vec::new();
        for line in lines {
            let rest = line
                .strip_prefix("rel ")
                .ok_or_else(|| Error::Parse(format!("expected `rel <name>: <word>`: {line}")))?;
            let (name, word) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("missing `:` in relator line: {line}")))?;
            relators.push((name.trim().to_string(), Word::parse(alphabet.clone(), word)?));
        }
        Presentation::new(alphabet, relators)
    }
}

/// The Artin presentation of Bₙ with the braid/commuting relator split.
#[derive(Debug, Clone)]
pub struct ArtinPresentation {
    n: usize,
    presentation: Presentation,
    braid_relators: Vec<String>,
    commuting_relators: Vec<String>,
}

/// Relator naming scheme `r_{j,k}` with j < k; part of the file format.
pub fn relator_name(j: usize, k: usize) -> String {
    format!("r_{{{j},{k}}}")
}

pub fn artin_presentation(n: usize) -> Result<ArtinPresentation> {
    if n < 3 {
        return Err(Error::StrandCount { min: 3, got: n });
    }
    let alphabet = Alphabet::x_gens(n - 1);
    let gen = |j: usize| Word::generator(alphabet.clone(), j - 1, 1).expect("in range");
    let mut relators = Vec::new();
    let mut braid_relators = Vec::new();
    let mut commuting_relators = Vec::new();
    // braid relators first, then commuting relators, each in
    // lexicographic (j, k) order
    for j in 1..n - 1 {
        let k = j + 1;
        let name = relator_name(j, k);
        // x_j x_{j+1} x_j x_{j+1}^-1 x_j^-1 x_{j+1}^-1
        let (a, b) = (gen(j), gen(k));
        let word = a
            .multiply(&b)?
            .multiply(&a)?
            .multiply(&b.invert())?
            .multiply(&a.invert())?
            .multiply(&b.invert())?;
        braid_relators.push(name.clone());
        relators.push((name, word));
    }
    for j in 1..n - 1 {
        for k in (j + 2)..n {
            let name = relator_name(j, k);
            commuting_relators.push(name.clone());
            relators.push((name, Word::commutator(&gen(j), &gen(k))?));
        }
    }
    Ok(ArtinPresentation {
        n,
        presentation: Presentation::new(alphabet, relators)?,
        braid_relators,
        commuting_relators,
    })
}

impl ArtinPresentation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn braid_relators(&self) -> &[String] {
        &self.braid_relators
    }

    pub fn commuting_relators(&self) -> &[String] {
        &self.commuting_relators
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn artin_4() {
        let a = artin_presentation(4).unwrap();
        assert_eq!(a.presentation().alphabet().names(), &["x1", "x2", "x3"]);
        assert_eq!(a.braid_relators(), &[relator_name(1, 2), relator_name(2, 3)]);
        assert_eq!(a.commuting_relators(), &[relator_name(1, 3)]);
        assert_eq!(
            a.presentation().relator(&relator_name(1, 2)).unwrap().to_string(),
            "x1 x2 x1 x2^-1 x1^-1 x2^-1"
        );
        assert_eq!(
            a.presentation().relator(&relator_name(1, 3)).unwrap().to_string(),
            "x1 x3 x1^-1 x3^-1"
        );
    }

    #[test]
    fn artin_counts() {
        let a = artin_presentation(3).unwrap();
        assert_eq!(a.braid_relators().len(), 1);
        assert!(a.commuting_relators().is_empty());
        let a = artin_presentation(6).unwrap();
        assert_eq!(a.commuting_relators().len(), 6);
        assert!(artin_presentation(2).is_err());
    }

    #[test]
    fn boundary_artin() {
        let a = artin_presentation(4).unwrap();
        let m = a.presentation().abelianized_boundary();
        // rows: r_{1,2}, r_{2,3}, r_{1,3}
        assert_eq!(
            m,
            IntMatrix::from_rows_i64(&[vec![1, -1, 0], vec![0, 1, -1], vec![0, 0, 0]])
        );
        let a3 = artin_presentation(3).unwrap();
        assert_eq!(
            a3.presentation().abelianized_boundary(),
            IntMatrix::from_rows_i64(&[vec![1, -1]])
        );
    }

    #[test]
    fn boundary_torsion_example() {
        let alphabet = Alphabet::new(["x"]).unwrap();
        let x2 = Word::parse(alphabet.clone(), "x x").unwrap();
        let p = Presentation::new(alphabet, vec![("sq".into(), x2)]).unwrap();
        assert_eq!(p.abelianized_boundary(), IntMatrix::from_rows_i64(&[vec![2]]));
        assert_eq!(p.h1(), big(&[2]));
    }

    #[test]
    fn h1_examples() {
        for n in 3..=8 {
            let a = artin_presentation(n).unwrap();
            assert_eq!(a.presentation().h1(), big(&[0]), "H1(B{n})");
        }
        let free2 = Presentation::new(Alphabet::new(["x", "y"]).unwrap(), vec![]).unwrap();
        assert_eq!(free2.h1(), big(&[0, 0]));
    }

    #[test]
    fn exponent_vectors_all_n() {
        for n in 3..=12 {
            let a = artin_presentation(n).unwrap();
            for name in a.braid_relators() {
                let sums = a.presentation().relator(name).unwrap().exponent_sums();
                let j = name[3..].split(',').next().unwrap().parse::<usize>().unwrap();
                let mut expect = vec![0i64; n - 1];
                expect[j - 1] = 1;
                expect[j] = -1;
                assert_eq!(sums, expect);
            }
            for name in a.commuting_relators() {
                let sums = a.presentation().relator(name).unwrap().exponent_sums();
                assert!(sums.iter().all(|s| *s == 0));
            }
        }
    }

    #[test]
    fn h1_invariance() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = artin_presentation(5).unwrap();
        let p = a.presentation();
        let base = p.h1();
        for _ in 0..20 {
            // permute relators
            let mut relators = p.relators().to_vec();
            relators.shuffle(&mut rng);
            let q = Presentation::new(p.alphabet().clone(), relators).unwrap();
            assert_eq!(q.h1(), base);
            // replace one relator by a conjugate
            let mut relators = p.relators().to_vec();
            let i = rng.gen_range(0..relators.len());
            let raw: Vec<_> = (0..3)
                .map(|_| (rng.gen_range(0..p.alphabet().len()), *[1i8, -1].choose(&mut rng).unwrap()))
                .collect();
            let u = Word::reduce(p.alphabet().clone(), &raw).unwrap();
            relators[i].1 = Word::conjugate(&u, &relators[i].1).unwrap();
            if relators[i].1.is_identity() {
                continue;
            }
            let q = Presentation::new(p.alphabet().clone(), relators).unwrap();
            assert_eq!(q.h1(), base);
        }
        let _ = BigInt::zero();
    }

    #[test]
    fn file_round_trip() {
        let a = artin_presentation(4).unwrap();
        let text = a.presentation().emit();
        assert_eq!(&Presentation::parse(&text).unwrap(), a.presentation());
    }
}
