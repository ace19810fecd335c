//! Finite groups as complete multiplication tables. Element 0 is the
//! identity; the file format is one line with the order, then order
//! lines of order indices.

use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    mult: Vec<Vec<usize>>,
    /// Element index of each named generator (empty if unnamed).
    gen_elements: Vec<(String, usize)>,
    /// Distinguished central element for double covers.
    pub z_index: Option<usize>,
}

impl CayleyTable {
    pub fn new(mult: Vec<Vec<usize>>) -> Result<Self> {
        let order = mult.len();
        if order == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        for (i, row) in mult.iter().enumerate() {
            if row.len() != order {
                return Err(Error::MalformedTable(format!("row {i} has length {}", row.len())));
            }
            let mut seen = vec![false; order];
            for &v in row {
                if v >= order {
                    return Err(Error::MalformedTable(format!("entry {v} out of range")));
                }
                if seen[v] {
                    return Err(Error::MalformedTable(format!("row {i} is not a permutation")));
                }
                seen[v] = true;
            }
        }
        for i in 0..order {
            if mult[i][0] != i || mult[0][i] != i {
                return Err(Error::MalformedTable("element 0 is not the identity".into()));
            }
        }
        Ok(CayleyTable { mult, gen_elements: Vec::new(), z_index: None })
    }

    pub fn with_generators(mut self, gens: Vec<(String, usize)>) -> Self {
        self.gen_elements = gens;
        self
    }

    pub fn cyclic(n: usize) -> Self {
        let mult = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        CayleyTable::new(mult).expect("cyclic table is valid")
    }

    /// The symmetric group on `n` points by exhaustive permutation
    /// enumeration; identity first, then sorted one-line notation.
    pub fn symmetric(n: usize) -> Self {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            let mut out = vec![(0..n).collect::<Vec<_>>()];
            // lexicographic successor
            loop {
                let mut p = out.last().unwrap().clone();
                let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
                    break;
                };
                let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
                p.swap(i, j);
                p[i + 1..].reverse();
                out.push(p);
            }
            out
        }
        let ps = perms(n);
        let index = |p: &Vec<usize>| ps.iter().position(|q| q == p).unwrap();
        let mult = ps
            .iter()
            .map(|a| {
                ps.iter()
                    .map(|b| {
                        // (a*b)(x) = a(b(x)): b applied first
                        let comp: Vec<usize> = (0..n).map(|x| a[b[x]]).collect();
                        index(&comp)
                    })
                    .collect()
            })
            .collect();
        let table = CayleyTable::new(mult).expect("symmetric table is valid");
        let gens = (1..n)
            .map(|i| {
                let mut t: Vec<usize> = (0..n).collect();
                t.swap(i - 1, i);
                (format!("t{i}"), index(&t))
            })
            .collect();
        table.with_generators(gens)
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mult[a][b] == 0).expect("rows are permutations")
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.gen_elements
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.gen_elements.iter().find(|(n, _)| n == name).map(|&(_, i)| i)
    }

    /// Evaluate a word over the named generators by table application
    /// from the identity.
    pub fn evaluate_word(&self, w: &Word) -> Result<usize> {
        let mut acc = 0usize;
        for &(g, e) in w.letters() {
            let name = w.alphabet().name(g);
            let idx = self
                .generator(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            let idx = if e < 0 { self.inv(idx) } else { idx };
            acc = self.mul(acc, idx);
        }
        Ok(acc)
    }

    /// Quotient by a central subgroup (given by its element set).
    /// Returns the quotient table and the projection map.
    pub fn quotient_by_central(&self, center: &[usize]) -> Result<(CayleyTable, Vec<usize>)> {
        let order = self.order();
        // verify subgroup and centrality
        for &a in center {
            for &b in center {
                if !center.contains(&self.mul(a, b)) {
                    return Err(Error::MalformedTable("kernel is not a subgroup".into()));
                }
            }
            for g in 0..order {
                if self.mul(a, g) != self.mul(g, a) {
                    return Err(Error::MalformedTable("kernel is not central".into()));
                }
            }
        }
        // coset representative: minimal element index in xA
        let coset_min = |x: usize| center.iter().map(|&a| self.mul(x, a)).min().unwrap();
        let mut reps: Vec<usize> = Vec::new();
        let mut proj = vec![usize::MAX; order];
        for x in 0..order {
            let m = coset_min(x);
            let idx = match reps.iter().position(|&r| r == m) {
                Some(i) => i,
                None => {
                    reps.push(m);
                    reps.len() - 1
                }
            };
            proj[x] = idx;
        }
        let q = reps.len();
        let mut mult = vec![vec![0usize; q]; q];
        for i in 0..q {
            for j in 0..q {
                mult[i][j] = proj[self.mul(reps[i], reps[j])];
            }
        }
        let gens = self
            .gen_elements
            .iter()
            .map(|(n, i)| (n.clone(), proj[*i]))
            .collect();
        Ok((CayleyTable::new(mult)?.with_generators(gens), proj))
    }

    /// A lift of quotient element `q` under `proj` (smallest preimage).
    pub fn lift(proj: &[usize], q: usize) -> usize {
        proj.iter().position(|&p| p == q).expect("projection is onto")
    }

    pub fn emit(&self) -> String {
        let mut out = format!("{}\n", self.order());
        for row in &self.mult {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<CayleyTable> {
        let mut it = text.split_whitespace();
        let order: usize = it
            .next()
            .ok_or_else(|| Error::Parse("missing order".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("order: {e}")))?;
        let mut mult = vec![vec![0usize; order]; order];
        for (i, row) in mult.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let tok = it
                    .next()
                    .ok_or_else(|| Error::Parse(format!("missing entry ({i},{j})")))?;
                *cell = tok.parse().map_err(|e| Error::Parse(format!("entry ({i},{j}): {e}")))?;
            }
        }
        CayleyTable::new(mult)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_basics() {
        let c4 = CayleyTable::cyclic(4);
        assert_eq!(c4.order(), 4);
        assert_eq!(c4.mul(3, 2), 1);
        assert_eq!(c4.inv(1), 3);
        assert_eq!(c4.element_order(1), 4);
        assert_eq!(c4.element_order(2), 2);
    }

    #[test]
    fn symmetric_s3() {
        let s3 = CayleyTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        let t1 = s3.generator("t1").unwrap();
        let t2 = s3.generator("t2").unwrap();
        assert_eq!(s3.element_order(t1), 2);
        assert_eq!(s3.element_order(s3.mul(t1, t2)), 3);
    }

    #[test]
    fn quotient_z4_by_z2() {
        let c4 = CayleyTable::cyclic(4);
        let (q, proj) = c4.quotient_by_central(&[0, 2]).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj, vec![0, 1, 0, 1]);
    }

    #[test]
    fn table_round_trip() {
        let s3 = CayleyTable::symmetric(3);
        let parsed = CayleyTable::parse(&s3.emit()).unwrap();
        assert_eq!(parsed.order(), 6);
        assert_eq!(parsed.mul(1, 2), s3.mul(1, 2));
    }

    #[test]
    fn malformed_rejected() {
        assert!(CayleyTable::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(CayleyTable::new(vec![vec![1, 0], vec![0, 1]]).is_err());
    }
}
