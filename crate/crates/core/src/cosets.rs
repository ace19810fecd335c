//! Todd–Coxeter coset enumeration (HLT with row filling and immediate
//! coincidence processing) and the finite quotients of Bₙ it produces:
//! the symmetric group Sₙ and its Schur double cover 2·Sₙ.

use std::collections::VecDeque;

use crate::cayley::CayleyTable;
use crate::error::{Error, Result};
use crate::present::{artin_presentation, Presentation};
use crate::words::{Alphabet, Word};

/// Default cap on allocated cosets.
pub const DEFAULT_COSET_CAP: usize = 1_000_000;

/// A complete, collapsed coset table: `order` cosets acted on by the
/// generators on the right; coset 0 is the subgroup itself.
#[derive(Debug, Clone)]
pub struct CosetTable {
    gens: Vec<String>,
    /// order × (2·gens): columns 2g (generator) and 2g+1 (inverse).
    table: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.gens
    }

    pub fn apply(&self, coset: usize, gen: usize, sign: i8) -> usize {
        let col = if sign >= 0 { 2 * gen } else { 2 * gen + 1 };
        self.table[coset][col]
    }

    pub fn apply_word(&self, coset: usize, w: &Word) -> usize {
        let mut c = coset;
        for &(g, e) in w.letters() {
            c = self.apply(c, g, e);
        }
        c
    }

    /// For a trivial-subgroup enumeration the cosets are the group
    /// elements; expand the regular representation into a full
    /// multiplication table.
    pub fn to_cayley_table(&self) -> Result<CayleyTable> {
        let order = self.order();
        // BFS words from coset 0, stored as column sequences
        let mut path: Vec<Option<(usize, usize)>> = vec![None; order]; // (prev coset, col)
        let mut seen = vec![false; order];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for col in 0..self.table[c].len() {
                let d = self.table[c][col];
                if !seen[d] {
                    seen[d] = true;
                    path[d] = Some((c, col));
                    queue.push_back(d);
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::MalformedTable("coset graph is not connected".into()));
        }
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); order];
        for c in 0..order {
            let mut cols = Vec::new();
            let mut cur = c;
            while let Some((prev, col)) = path[cur] {
                cols.push(col);
                cur = prev;
            }
            cols.reverse();
            words[c] = cols;
        }
        let mut mult = vec![vec![0usize; order]; order];
        for (a, row) in mult.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                let mut c = a;
                for &col in &words[b] {
                    c = self.table[c][col];
                }
                *cell = c;
            }
        }
        let gens = self
            .gens
            .iter()
            .enumerate()
            .map(|(g, name)| (name.clone(), self.table[0][2 * g]))
            .collect();
        Ok(CayleyTable::new(mult)?.with_generators(gens))
    }
}

struct Enumerator {
    ngens: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    live: usize,
    cap: usize,
    pending: VecDeque<(usize, usize)>,
}

impl Enumerator {
    fn new(ngens: usize, cap: usize) -> Self {
        Enumerator {
            ngens,
            table: vec![vec![None; 2 * ngens]],
            parent: vec![0],
            live: 1,
            cap,
            pending: VecDeque::new(),
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            let g = self.parent[self.parent[a]];
            self.parent[a] = g;
            a = g;
        }
        a
    }

    fn alive(&self, a: usize) -> bool {
        self.parent[a] == a
    }

    fn define(&mut self, a: usize, col: usize) -> Result<usize> {
        if self.table.len() >= self.cap {
            return Err(Error::CosetCap {
                cap: self.cap,
                live: self.live,
                defined: self.table.len(),
            });
        }
        let b = self.table.len();
        self.table.push(vec![None; 2 * self.ngens]);
        self.parent.push(b);
        self.live += 1;
        self.set(a, col, b);
        Ok(b)
    }

    fn set(&mut self, a: usize, col: usize, b: usize) {
        self.table[a][col] = Some(b);
        self.table[b][col ^ 1] = Some(a);
    }

    fn queue_coincidence(&mut self, a: usize, b: usize) {
        self.pending.push_back((a, b));
    }

    fn process_coincidences(&mut self) {
        while let Some((a, b)) = self.pending.pop_front() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            self.parent[b] = a;
            self.live -= 1;
            for col in 0..2 * self.ngens {
                if let Some(d) = self.table[b][col].take() {
                    let d = self.find(d);
                    // drop the back-reference to b
                    if self.table[d][col ^ 1] == Some(b) {
                        self.table[d][col ^ 1] = None;
                    }
                    match self.table[a][col] {
                        Some(m) => {
                            let m = self.find(m);
                            if m != d {
                                self.queue_coincidence(m, d);
                            }
                            // keep the back-reference consistent
                            self.table[d][col ^ 1].get_or_insert(a);
                        }
                        None => self.set(a, col, d),
                    }
                }
            }
        }
    }

    /// Scan-and-fill one word at one coset (HLT).
    fn scan_and_fill(&mut self, alpha: usize, word: &[(usize, i8)]) -> Result<()> {
        let col = |(g, e): (usize, i8)| if e >= 0 { 2 * g } else { 2 * g + 1 };
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0usize;
        let mut j = word.len(); // exclusive
        loop {
            while i < j {
                match self.table[f][col(word[i])] {
                    Some(next) => {
                        f = self.find(next);
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == j {
                if f != b {
                    self.queue_coincidence(f, b);
                    self.process_coincidences();
                }
                return Ok(());
            }
            while j > i {
                match self.table[b][col(word[j - 1]) ^ 1] {
                    Some(next) => {
                        b = self.find(next);
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i {
                if f != b {
                    self.queue_coincidence(f, b);
                    self.process_coincidences();
                }
                return Ok(());
            }
            if j == i + 1 {
                // deduction closing the scan
                self.set(f, col(word[i]), b);
                return Ok(());
            }
            self.define(f, col(word[i]))?;
        }
    }
}

/// Enumerate cosets of the subgroup generated by `subgroup` in the
/// group given by `presentation`. The quotient must be finite;
/// `cap` bounds the number of allocated cosets.
pub fn todd_coxeter(
    presentation: &Presentation,
    subgroup: &[Word],
    cap: usize,
) -> Result<CosetTable> {
    let ngens = presentation.alphabet().len();
    let mut e = Enumerator::new(ngens, cap);
    let as_letters =
        |w: &Word| w.letters().iter().map(|&(g, s)| (g, s)).collect::<Vec<(usize, i8)>>();
    let relators: Vec<Vec<(usize, i8)>> =
        presentation.relators().iter().map(|(_, w)| as_letters(w)).collect();

    for w in subgroup {
        e.scan_and_fill(0, &as_letters(w))?;
        e.process_coincidences();
    }
    let mut alpha = 0usize;
    while alpha < e.table.len() {
        if e.alive(alpha) {
            for r in &relators {
                e.scan_and_fill(alpha, r)?;
                e.process_coincidences();
                if !e.alive(alpha) {
                    break;
                }
            }
            if e.alive(alpha) {
                for col in 0..2 * ngens {
                    if e.table[alpha][col].is_none() {
                        e.define(alpha, col)?;
                    }
                }
            }
        }
        alpha += 1;
    }

    // compact live cosets, order-preserving
    let mut index = vec![usize::MAX; e.table.len()];
    let mut count = 0usize;
    for c in 0..e.table.len() {
        if e.alive(c) {
            index[c] = count;
            count += 1;
        }
    }
    let mut table = Vec::with_capacity(count);
    for c in 0..e.table.len() {
        if !e.alive(c) {
            continue;
        }
        let mut row = Vec::with_capacity(2 * ngens);
        for col in 0..2 * ngens {
            let d = e.table[c][col]
                .ok_or_else(|| Error::MalformedTable("incomplete coset table".into()))?;
            row.push(index[e.find(d)]);
        }
        table.push(row);
    }
    Ok(CosetTable { gens: presentation.alphabet().names().to_vec(), table })
}

/// The symmetric quotient of Bₙ: Artin presentation plus xⱼ², regular
/// representation.
pub fn symmetric_quotient(n: usize, cap: usize) -> Result<CayleyTable> {
    let artin = artin_presentation(n)?;
    let mut p = artin.presentation().clone();
    let alphabet = p.alphabet().clone();
    for j in 0..n - 1 {
        let x = Word::generator(alphabet.clone(), j, 1)?;
        p = p.with_relator(&format!("sq_{}", j + 1), x.multiply(&x)?)?;
    }
    let table = todd_coxeter(&p, &[], cap)?.to_cayley_table()?;
    let expected: usize = (1..=n).product();
    if table.order() != expected {
        return Err(Error::UnexpectedOrder { got: table.order(), expected });
    }
    // rename generators x_j -> t_j for use as a cover quotient target
    let gens = table
        .generators()
        .iter()
        .map(|(name, i)| (name.replacen('x', "t", 1), *i))
        .collect();
    Ok(table.clone().with_generators(gens))
}

/// The Schur double cover 2·Sₙ with tᵢ² = z, (tᵢtᵢ₊₁)³ = z, and
/// (tᵢtⱼ)² = z for |i−j| ≥ 2; z is central of order 2.
pub fn schur_double_cover(n: usize, cap: usize) -> Result<CayleyTable> {
    if n < 4 {
        return Err(Error::StrandCount { min: 4, got: n });
    }
    let mut names = vec!["z".to_string()];
    names.extend((1..n).map(|i| format!("t{i}")));
    let alphabet = Alphabet::new(names)?;
    let z = Word::generator(alphabet.clone(), 0, 1)?;
    let t = |i: usize| Word::generator(alphabet.clone(), i, 1).expect("in range");
    let zinv = z.invert();
    let mut relators = vec![("z2".to_string(), z.multiply(&z)?)];
    for i in 1..n {
        relators.push((
            format!("central_{i}"),
            Word::commutator(&z, &t(i))?,
        ));
        relators.push((format!("sq_{i}"), t(i).multiply(&t(i))?.multiply(&zinv)?));
    }
    for i in 1..n - 1 {
        let ab = t(i).multiply(&t(i + 1))?;
        let cube = ab.multiply(&ab)?.multiply(&ab)?;
        relators.push((format!("braid_{i}"), cube.multiply(&zinv)?));
    }
    for i in 1..n {
        for j in i + 2..n {
            let ab = t(i).multiply(&t(j))?;
            relators.push((
                format!("comm_{i}_{j}"),
                ab.multiply(&ab)?.multiply(&zinv)?,
            ));
        }
    }
    let p = Presentation::new(alphabet.clone(), relators)?;
    let mut table = todd_coxeter(&p, &[], cap)?.to_cayley_table()?;
    let expected: usize = 2 * (1..=n).product::<usize>();
    if table.order() != expected {
        return Err(Error::UnexpectedOrder { got: table.order(), expected });
    }
    let z_elem = table.evaluate_word(&z)?;
    if z_elem == 0 {
        return Err(Error::MalformedTable("central element collapsed to identity".into()));
    }
    table.z_index = Some(z_elem);
    Ok(table)
}
