//! Identity sequences among the relators of a presentation: formal
//! products Π ^{ξ}r^{±1} that evaluate to the empty word in the free
//! group. Houses the named families over the Artin presentation, the
//! boundary matrix on their classes, and the resulting H₂(Bₙ)
//! computation, plus the distinguished central two-term element.
//!
//! A family transcription that fails to evaluate to e verbatim is
//! repaired automatically by the minimal change among {flip one sign,
//! swap the commutator order convention, adjust one conjugator by one
//! letter}; every repair is recorded on the returned value.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::intlin::{cokernel_invariants, IntMatrix};
use crate::present::{artin_presentation, relator_name, Presentation};
use crate::words::Word;
use crate::xmod::{FreeBasis, FreeCrossedElement, GroupContext};

/// An ordered list of (conjugator, relator-name, sign) terms over a
/// presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySequence {
    presentation: Presentation,
    terms: Vec<(Word, String, i8)>,
}

impl IdentitySequence {
    pub fn new(presentation: Presentation, terms: Vec<(Word, String, i8)>) -> Result<Self> {
        for (conj, name, sign) in &terms {
            if presentation.relator(name).is_none() {
                return Err(Error::UnknownGenerator(format!("relator {name}")));
            }
            if *conj.alphabet() != *presentation.alphabet() {
                return Err(Error::AlphabetMismatch(
                    presentation.alphabet().names().join(" "),
                    conj.alphabet().names().join(" "),
                ));
            }
            debug_assert!(*sign == 1 || *sign == -1);
        }
        Ok(IdentitySequence { presentation, terms })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn terms(&self) -> &[(Word, String, i8)] {
        &self.terms
    }

    /// Freely reduced product Π ξ·r^{±1}·ξ⁻¹; the sequence is an
    /// identity among relations iff this is the empty word.
    pub fn evaluate(&self) -> Word {
        let mut out = Word::identity(self.presentation.alphabet().clone());
        for (conj, name, sign) in &self.terms {
            let r = self.presentation.relator(name).expect("validated").pow_sign(*sign);
            out = out
                .multiply(&Word::conjugate(conj, &r).expect("same alphabet"))
                .expect("same alphabet");
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.evaluate().is_identity()
    }

    /// Sequence file body: header `pres: <path>`, then one line per
    /// term `<sign> <relator-name> @ <conjugator>`.
    pub fn emit(&self, pres_path: &str) -> String {
        let mut out = format!("pres: {pres_path}\n");
        for (conj, name, sign) in &self.terms {
            let s = if *sign < 0 { '-' } else { '+' };
            out.push_str(&format!("{s} {name} @ {conj}\n"));
        }
        out
    }

    /// Parse a sequence file; the referenced presentation is loaded via
    /// the supplied callback (usually a file read relative to the
    /// sequence file).
    pub fn parse(
        text: &str,
        load_presentation: impl FnOnce(&str) -> Result<Presentation>,
    ) -> Result<IdentitySequence> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or_else(|| Error::Parse("empty sequence file".into()))?;
        let path = head
            .strip_prefix("pres:")
            .ok_or_else(|| Error::Parse("first line must start with `pres:`".into()))?
            .trim();
        let presentation = load_presentation(path)?;
        let mut terms = Vec::new();
        for line in lines {
            let mut it = line.splitn(2, '@');
            let lhs = it.next().unwrap().trim();
            let conj_text = it
                .next()
                .ok_or_else(|| Error::Parse(format!("missing `@` in term line: {line}")))?;
            let (sign_tok, name) = lhs
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("expected `<sign> <name>`: {line}")))?;
            let sign = match sign_tok {
                "+" => 1,
                "-" => -1,
                other => return Err(Error::Parse(format!("bad sign token `{other}`"))),
            };
            let conj = Word::parse(presentation.alphabet().clone(), conj_text)?;
            terms.push((conj, name.trim().to_string(), sign));
        }
        IdentitySequence::new(presentation, terms)
    }
}

// ---------------------------------------------------------------------------
// the named families

/// Which printed family to construct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// The canonical 4-term quadruple on an ordered relator pair;
    /// valid over every presentation.
    Peiffer { r: String, s: String },
    /// The 3-term sequence over the Artin presentation extended by the
    /// auxiliary relator r = x_j; needs k − j ≥ 2.
    I { j: usize, k: usize },
    /// 14-term truncated-octahedron sequence; needs 1 ≤ j ≤ n − 3.
    J1 { j: usize },
    /// 8-term prism sequence with hexagonal r_{j,j+1} faces; k ≥ j + 3.
    J2 { j: usize, k: usize },
    /// 8-term prism sequence with hexagonal r_{k-1,k} faces; k ≥ j + 3.
    J3 { j: usize, k: usize },
    /// 6-term commutator-identity sequence; k − j ≥ 2 and ℓ − k ≥ 2.
    J4 { j: usize, k: usize, l: usize },
}

impl Family {
    pub fn label(&self) -> String {
        match self {
            Family::Peiffer { r, s } => format!("peiffer({r},{s})"),
            Family::I { j, k } => format!("I({j},{k})"),
            Family::J1 { j } => format!("J1({j})"),
            Family::J2 { j, k } => format!("J2({j},{k})"),
            Family::J3 { j, k } => format!("J3({j},{k})"),
            Family::J4 { j, k, l } => format!("J4({j},{k},{l})"),
        }
    }
}

/// A sequence together with the repair applied to the verbatim
/// transcription, if any.
#[derive(Debug, Clone)]
pub struct BuiltSequence {
    pub family: Family,
    pub sequence: IdentitySequence,
    /// Human-readable description of the deviation from the verbatim
    /// transcription; None when the verbatim form already evaluates
    /// to e.
    pub repair: Option<String>,
}

// raw term: (1-based conjugator letters, relator pair (j,k), sign)
type RawTerm = (Vec<(usize, i8)>, (usize, usize), i8);

fn j1_raw(j: usize) -> Vec<RawTerm> {
    let (a, b, c) = (j, j + 1, j + 2);
    let (am, bm, cm) = ((a, -1), (b, -1), (c, -1));
    let (ap, bp, cp) = ((a, 1), (b, 1), (c, 1));
    vec![
        (vec![am, bm, cm, am], (a, c), 1),
        (vec![am, bm, cm, am, cp], (a, b), 1),
        (vec![am, bm, cm, am, bm], (b, c), 1),
        (vec![am, bm, cm, am, bm, cp, bp], (a, c), -1),
        (vec![am, bm, cm, bm], (b, c), -1),
        (vec![am, cm, bm, cm, am, bm], (a, b), -1),
        (vec![am, cm, bm, cm, am, bm], (a, c), 1),
        (vec![am, cm, bm, cm, am, bm, cp], (a, b), 1),
        (vec![am, cm, bm, cm, am, bm, cp, bp, ap], (b, c), 1),
        (vec![am, cm, bm, cm, am], (a, c), -1),
        (vec![am, cm, bm, am, cm, bm], (b, c), -1),
        (vec![am, cm, bm, am, bp, cm], (a, c), 1),
        (vec![am, cm, bm, am], (a, b), -1),
        (vec![cm, am], (a, c), 1),
    ]
}

fn j2_raw(j: usize, k: usize) -> Vec<RawTerm> {
    let (a, b) = (j, j + 1);
    let (am, bm, km) = ((a, -1), (b, -1), (k, -1));
    let (ap, bp) = ((a, 1), (b, 1));
    vec![
        (vec![bm, am, bm], (a, b), -1),
        (vec![bm, am, bm, ap, km], (b, k), -1),
        (vec![bm, am, bm, km], (a, k), -1),
        (vec![bm, am, bm, km], (b, k), 1),
        (vec![bm, am, km, bm, ap, bp], (a, k), -1),
        (vec![bm, am, km, bm], (a, b), 1),
        (vec![bm, am, km], (a, k), 1),
        (vec![bm, km], (b, k), 1),
    ]
}

fn j3_raw(j: usize, k: usize) -> Vec<RawTerm> {
    let m = k - 1;
    let (km, mm, jm) = ((k, -1), (m, -1), (j, -1));
    let (kp, mp) = ((k, 1), (m, 1));
    vec![
        (vec![km, mm, km], (m, k), -1),
        (vec![km, mm, km, mp, jm], (j, k), 1),
        (vec![km, mm, km, jm], (j, m), 1),
        (vec![km, mm, km, jm], (j, k), -1),
        (vec![km, mm, jm, km, mp, kp], (j, m), 1),
        (vec![km, mm, jm, km], (m, k), 1),
        (vec![km, mm, jm], (j, m), -1),
        (vec![km, jm], (j, k), -1),
    ]
}

fn j4_raw(j: usize, k: usize, l: usize) -> Vec<RawTerm> {
    vec![
        (vec![], (j, k), 1),
        (vec![(k, 1)], (j, l), 1),
        (vec![], (k, l), 1),
        (vec![(l, 1)], (j, k), -1),
        (vec![], (j, l), -1),
        (vec![(j, 1)], (k, l), -1),
    ]
}

/// Build the Artin presentation with the commuting relators in the
/// chosen commutator-order convention.
fn artin_with_convention(n: usize, swapped: bool) -> Result<Presentation> {
    let standard = artin_presentation(n)?.presentation().clone();
    if !swapped {
        return Ok(standard);
    }
    let alphabet = standard.alphabet().clone();
    let gen = |j: usize| Word::generator(alphabet.clone(), j - 1, 1).expect("in range");
    let relators = standard
        .relators()
        .iter()
        .map(|(name, w)| {
            // parse `r_{j,k}` back into indices
            let inner = &name[3..name.len() - 1];
            let (j, k) = inner.split_once(',').expect("relator name format");
            let (j, k): (usize, usize) = (j.parse().unwrap(), k.parse().unwrap());
            if k == j + 1 {
                (name.clone(), w.clone())
            } else {
                (name.clone(), Word::commutator(&gen(k), &gen(j)).expect("in range"))
            }
        })
        .collect();
    Presentation::new(alphabet, relators)
}

fn realize(
    presentation: &Presentation,
    raw: &[RawTerm],
) -> Result<IdentitySequence> {
    let alphabet = presentation.alphabet().clone();
    let terms = raw
        .iter()
        .map(|(conj, (j, k), sign)| {
            let letters: Vec<(usize, i8)> = conj.iter().map(|&(g, e)| (g - 1, e)).collect();
            Ok((Word::reduce(alphabet.clone(), &letters)?, relator_name(*j, *k), *sign))
        })
        .collect::<Result<Vec<_>>>()?;
    IdentitySequence::new(presentation.clone(), terms)
}

/// Verbatim transcription of a family under one commutator-order
/// convention, before any repair.
fn verbatim(family: &Family, n: usize, swapped: bool) -> Result<IdentitySequence> {
    let max = n - 1;
    let range_err = |msg: String| Err(Error::IndexRange(msg));
    match family {
        Family::Peiffer { r, s } => {
            let p = artin_with_convention(n, swapped)?;
            let xi = p
                .relator(r)
                .ok_or_else(|| Error::UnknownGenerator(format!("relator {r}")))?
                .clone();
            let e = Word::identity(p.alphabet().clone());
            IdentitySequence::new(
                p,
                vec![
                    (e.clone(), r.clone(), 1),
                    (e.clone(), s.clone(), 1),
                    (e, r.clone(), -1),
                    (xi, s.clone(), -1),
                ],
            )
        }
        Family::I { j, k } => {
            if !(1 <= *j && j + 2 <= *k && *k <= max) {
                return range_err(format!("I({j},{k}) in B{n}"));
            }
            let base = artin_with_convention(n, swapped)?;
            let alphabet = base.alphabet().clone();
            let xj = Word::generator(alphabet.clone(), j - 1, 1)?;
            let xk = Word::generator(alphabet.clone(), k - 1, 1)?;
            let p = base.with_relator("r", xj)?;
            let e = Word::identity(alphabet);
            IdentitySequence::new(
                p,
                vec![
                    (xk, "r".into(), 1),
                    (e.clone(), "r".into(), -1),
                    (e, relator_name(*j, *k), -1),
                ],
            )
        }
        Family::J1 { j } => {
            if !(1 <= *j && j + 2 <= max) {
                return range_err(format!("J1({j}) in B{n}"));
            }
            realize(&artin_with_convention(n, swapped)?, &j1_raw(*j))
        }
        Family::J2 { j, k } => {
            if !(1 <= *j && j + 3 <= *k && *k <= max) {
                return range_err(format!("J2({j},{k}) in B{n}"));
            }
            realize(&artin_with_convention(n, swapped)?, &j2_raw(*j, *k))
        }
        Family::J3 { j, k } => {
            if !(1 <= *j && j + 3 <= *k && *k <= max) {
                return range_err(format!("J3({j},{k}) in B{n}"));
            }
            realize(&artin_with_convention(n, swapped)?, &j3_raw(*j, *k))
        }
        Family::J4 { j, k, l } => {
            if !(1 <= *j && j + 2 <= *k && k + 2 <= *l && *l <= max) {
                return range_err(format!("J4({j},{k},{l}) in B{n}"));
            }
            realize(&artin_with_convention(n, swapped)?, &j4_raw(*j, *k, *l))
        }
    }
}

/// Build a family sequence, automatically repairing a failing verbatim
/// transcription by the minimal change among single sign flip,
/// commutator-order swap, or one-letter conjugator adjustment.
pub fn build(family: Family, n: usize) -> Result<BuiltSequence> {
    let sequence = verbatim(&family, n, false)?;
    if sequence.is_valid() {
        return Ok(BuiltSequence { family, sequence, repair: None });
    }
    // single sign flips
    for i in 0..sequence.terms.len() {
        let mut s = sequence.clone();
        s.terms[i].2 = -s.terms[i].2;
        if s.is_valid() {
            return Ok(BuiltSequence {
                family,
                sequence: s,
                repair: Some(format!("sign of term {} flipped", i + 1)),
            });
        }
    }
    // commutator-order swap
    let swapped = verbatim(&family, n, true)?;
    if swapped.is_valid() {
        return Ok(BuiltSequence {
            family,
            sequence: swapped,
            repair: Some("commuting relators read with swapped commutator order".into()),
        });
    }
    // one-letter conjugator adjustments
    let alphabet = sequence.presentation.alphabet().clone();
    for i in 0..sequence.terms.len() {
        let base = sequence.terms[i].0.clone();
        let mut candidates: Vec<Word> = Vec::new();
        if !base.is_identity() {
            let ls = base.letters();
            candidates.push(Word::reduce(alphabet.clone(), &ls[1..])?);
            candidates.push(Word::reduce(alphabet.clone(), &ls[..ls.len() - 1])?);
        }
        for g in 0..alphabet.len() {
            for e in [1i8, -1] {
                let one = Word::generator(alphabet.clone(), g, e)?;
                candidates.push(one.multiply(&base)?);
                candidates.push(base.multiply(&one)?);
            }
        }
        for cand in candidates {
            let mut s = sequence.clone();
            s.terms[i].0 = cand.clone();
            if s.is_valid() {
                return Ok(BuiltSequence {
                    family,
                    sequence: s,
                    repair: Some(format!("conjugator of term {} adjusted to `{cand}`", i + 1)),
                });
            }
        }
    }
    Err(Error::Unrepairable(family.label()))
}

/// All legal index instances of the non-Peiffer families in Bₙ.
pub fn family_instances(n: usize) -> Vec<Family> {
    let max = n - 1;
    let mut out = Vec::new();
    for j in 1..=max {
        for k in j + 2..=max {
            out.push(Family::I { j, k });
        }
    }
    for j in 1..=max.saturating_sub(2) {
        out.push(Family::J1 { j });
    }
    for j in 1..=max {
        for k in j + 3..=max {
            out.push(Family::J2 { j, k });
            out.push(Family::J3 { j, k });
        }
    }
    for j in 1..=max {
        for k in j + 2..=max {
            for l in k + 2..=max {
                out.push(Family::J4 { j, k, l });
            }
        }
    }
    out
}

/// One verification outcome in a sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyRecord {
    pub family: String,
    pub terms: usize,
    pub valid: bool,
    pub repaired: bool,
    pub repair: Option<String>,
}

/// Build and verify every family instance plus every ordered Peiffer
/// pair over artin(n).
pub fn verify_all(n: usize) -> Result<Vec<VerifyRecord>> {
    let mut out = Vec::new();
    let artin = artin_presentation(n)?;
    let names: Vec<String> =
        artin.presentation().relators().iter().map(|(n, _)| n.clone()).collect();
    let mut families: Vec<Family> = Vec::new();
    for r in &names {
        for s in &names {
            families.push(Family::Peiffer { r: r.clone(), s: s.clone() });
        }
    }
    families.extend(family_instances(n));
    for family in families {
        let built = build(family, n)?;
        out.push(VerifyRecord {
            family: built.family.label(),
            terms: built.sequence.terms().len(),
            valid: built.sequence.is_valid(),
            repaired: built.repair.is_some(),
            repair: built.repair,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// the boundary matrix on J-classes and H₂(Bₙ)

/// Boundary matrix on the classes of the J-families: rows indexed by
/// all triples j<k<ℓ in lexicographic order, columns by the commuting
/// relators r_{j,k} (k − j ≥ 2) in lexicographic order.
pub fn triple_class_matrix(n: usize) -> Result<IntMatrix> {
    if n < 4 {
        return Err(Error::StrandCount { min: 4, got: n });
    }
    let max = n - 1;
    let mut cols: Vec<(usize, usize)> = Vec::new();
    for j in 1..=max {
        for k in j + 2..=max {
            cols.push((j, k));
        }
    }
    let col = |j: usize, k: usize| cols.iter().position(|&c| c == (j, k)).unwrap();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for j in 1..=max {
        for k in j + 1..=max {
            for l in k + 1..=max {
                let mut row = vec![0i64; cols.len()];
                if k == j + 1 && l == j + 2 {
                    row[col(j, j + 2)] = 2;
                } else if k == j + 1 {
                    row[col(j + 1, l)] += 1;
                    row[col(j, l)] -= 1;
                } else if k == l - 1 {
                    row[col(j, l)] += 1;
                    row[col(j, l - 1)] -= 1;
                }
                // fully spread triples (k−j ≥ 2 and ℓ−k ≥ 2) map to zero
                rows.push(row);
            }
        }
    }
    Ok(IntMatrix::from_rows_i64(&rows))
}

/// Invariant factors of H₂(Bₙ): the cokernel of the boundary on
/// J-classes restricted to the commuting-relator summand.
pub fn h2_braid(n: usize) -> Result<Vec<BigInt>> {
    if n < 3 {
        return Err(Error::StrandCount { min: 3, got: n });
    }
    if n == 3 {
        return Ok(Vec::new());
    }
    Ok(cokernel_invariants(&triple_class_matrix(n)?.transpose()))
}

// ---------------------------------------------------------------------------
// the central element

/// The two-term element ((σ₃, [r], +), (e, [r], −)) of the free
/// crossed module on one generator [r] over Bₙ, with φ([r]) = σ₁.
pub fn central_element(n: usize) -> Result<FreeCrossedElement> {
    if n < 4 {
        return Err(Error::StrandCount { min: 4, got: n });
    }
    let context = Arc::new(GroupContext::braid(n));
    let alphabet = context.alphabet.clone();
    let basis = FreeBasis::new(
        vec!["[r]".into()],
        vec![Word::generator(alphabet.clone(), 0, 1)?],
    )?;
    let sigma3 = Word::generator(alphabet.clone(), 2, 1)?;
    let e = Word::identity(alphabet);
    FreeCrossedElement::from_terms(
        context,
        basis,
        vec![(sigma3, "[r]", 1), (e, "[r]", -1)],
    )
}
