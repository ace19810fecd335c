//! Exact integer linear algebra: dense matrices over arbitrary-precision
//! integers, Smith normal form with unimodular transforms, and cokernel
//! invariant factors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn matmul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Cofactor-expansion determinant; exponential, for small matrices
    /// and test assertions only.
    pub fn det_cofactor(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return self.get(0, 0).clone();
        }
        let mut det = BigInt::zero();
        for j in 0..n {
            let a = self.get(0, j);
            if a.is_zero() {
                continue;
            }
            let mut minor = IntMatrix::zero(n - 1, n - 1);
            for i in 1..n {
                let mut jj = 0;
                for k in 0..n {
                    if k == j {
                        continue;
                    }
                    minor.set(i - 1, jj, self.get(i, k).clone());
                    jj += 1;
                }
            }
            let term = a * minor.det_cofactor();
            if j % 2 == 0 {
                det += term;
            } else {
                det -= term;
            }
        }
        det
    }

    /// Matrix file format: first line `rows cols`, then row-major
    /// integers, whitespace-separated.
    pub fn parse(text: &str) -> Result<IntMatrix> {
        let mut it = text.split_whitespace();
        let rows: usize = it
            .next()
            .ok_or_else(|| Error::Parse("missing row count".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("row count: {e}")))?;
        let cols: usize = it
            .next()
            .ok_or_else(|| Error::Parse("missing column count".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("column count: {e}")))?;
        let mut m = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let tok = it
                    .next()
                    .ok_or_else(|| Error::Parse(format!("missing entry ({i},{j})")))?;
                let v: BigInt =
                    tok.parse().map_err(|e| Error::Parse(format!("entry ({i},{j}): {e}")))?;
                m.set(i, j, v);
            }
        }
        if it.next().is_some() {
            return Err(Error::Parse("trailing data after matrix entries".into()));
        }
        Ok(m)
    }

    pub fn emit(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} {:?}", self.rows, self.cols, self.data)
    }
}

/// Result of [`smith_normal_form`]: `s = u * m * v` with `u`, `v`
/// unimodular and `s` diagonal, diagonal entries nonnegative and each
/// dividing the next.
pub struct SmithNormalForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

fn find_pivot(m: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in from..m.rows() {
        for j in from..m.cols() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            match &best {
                Some((ba, _, _)) if *ba <= a => {}
                _ => best = Some((a, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let n = m.rows().min(m.cols());

    let swap_rows = |s: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..s.cols() {
            let t = s.get(a, j).clone();
            s.set(a, j, s.get(b, j).clone());
            s.set(b, j, t);
        }
        for j in 0..u.cols() {
            let t = u.get(a, j).clone();
            u.set(a, j, u.get(b, j).clone());
            u.set(b, j, t);
        }
    };
    let swap_cols = |s: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for i in 0..s.rows() {
            let t = s.get(i, a).clone();
            s.set(i, a, s.get(i, b).clone());
            s.set(i, b, t);
        }
        for i in 0..v.rows() {
            let t = v.get(i, a).clone();
            v.set(i, a, v.get(i, b).clone());
            v.set(i, b, t);
        }
    };
    // row_a -= q * row_b
    let add_row = |s: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        for j in 0..s.cols() {
            let t = s.get(a, j) - q * s.get(b, j);
            s.set(a, j, t);
        }
        for j in 0..u.cols() {
            let t = u.get(a, j) - q * u.get(b, j);
            u.set(a, j, t);
        }
    };
    let add_col = |s: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        for i in 0..s.rows() {
            let t = s.get(i, a) - q * s.get(i, b);
            s.set(i, a, t);
        }
        for i in 0..v.rows() {
            let t = v.get(i, a) - q * v.get(i, b);
            v.set(i, a, t);
        }
    };

    for t in 0..n {
        'step: loop {
            let Some((pi, pj)) = find_pivot(&s, t) else {
                break;
            };
            swap_rows(&mut s, &mut u, t, pi);
            swap_cols(&mut s, &mut v, t, pj);

            // clear column t
            let mut dirty = false;
            for i in (t + 1)..s.rows() {
                if !s.get(i, t).is_zero() {
                    let q = div_round(s.get(i, t), s.get(t, t));
                    if !q.is_zero() {
                        add_row(&mut s, &mut u, i, t, &q);
                    }
                    if !s.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            // clear row t
            for j in (t + 1)..s.cols() {
                if !s.get(t, j).is_zero() {
                    let q = div_round(s.get(t, j), s.get(t, t));
                    if !q.is_zero() {
                        add_col(&mut s, &mut v, j, t, &q);
                    }
                    if !s.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'step;
            }
            // ensure the pivot divides the rest of the submatrix
            for i in (t + 1)..s.rows() {
                for j in (t + 1)..s.cols() {
                    if !(s.get(i, j) % s.get(t, t)).is_zero() {
                        let minus_one = -BigInt::one();
                        add_row(&mut s, &mut u, t, i, &minus_one);
                        continue 'step;
                    }
                }
            }
            break;
        }
        if s.get(t, t).is_negative() {
            for j in 0..s.cols() {
                let neg = -s.get(t, j);
                s.set(t, j, neg);
            }
            for j in 0..u.cols() {
                let neg = -u.get(t, j);
                u.set(t, j, neg);
            }
        }
    }
    SmithNormalForm { s, u, v }
}

/// Quotient rounded to nearest (halves toward the floor quotient);
/// keeps remainders small during elimination.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) ^ (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Invariant factors of ℤ^rows / colspace(m): nonzero SNF diagonal
/// entries with units dropped, then one 0 per free cokernel generator.
pub fn cokernel_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let snf = smith_normal_form(m);
    let diag = snf.s.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let mut out: Vec<BigInt> =
        diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
    out.extend(std::iter::repeat(BigInt::zero()).take(m.rows() - rank));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: invariant factors via determinantal divisors
    /// d_k = gcd of all k×k minors, s_k = d_k / d_{k-1}.
    fn invariants_by_minors(m: &IntMatrix) -> Vec<BigInt> {
        fn minors_gcd(m: &IntMatrix, k: usize) -> BigInt {
            fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
                if k == 0 {
                    return vec![vec![]];
                }
                let mut out = Vec::new();
                for first in 0..=(n.saturating_sub(k)) {
                    for mut rest in combos(n - first - 1, k - 1) {
                        for r in rest.iter_mut() {
                            *r += first + 1;
                        }
                        rest.insert(0, first);
                        out.push(rest);
                    }
                }
                out
            }
            let mut g = BigInt::zero();
            for ri in combos(m.rows(), k) {
                for ci in combos(m.cols(), k) {
                    let mut sub = IntMatrix::zero(k, k);
                    for (a, &i) in ri.iter().enumerate() {
                        for (b, &j) in ci.iter().enumerate() {
                            sub.set(a, b, m.get(i, j).clone());
                        }
                    }
                    g = g.gcd(&sub.det_cofactor());
                }
            }
            g
        }
        let mut out = Vec::new();
        let mut prev = BigInt::one();
        for k in 1..=m.rows().min(m.cols()) {
            let d = minors_gcd(m, k);
            if d.is_zero() {
                break;
            }
            out.push(&d / &prev);
            prev = d;
        }
        out
    }

    fn assert_snf(m: &IntMatrix) -> Vec<BigInt> {
        let SmithNormalForm { s, u, v } = smith_normal_form(m);
        assert_eq!(u.matmul(m).matmul(&v), s, "S = U m V");
        if u.rows() <= 6 {
            let du = u.det_cofactor();
            assert!(du.abs().is_one(), "det U = {du}");
        }
        if v.rows() <= 6 {
            let dv = v.det_cofactor();
            assert!(dv.abs().is_one(), "det V = {dv}");
        }
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                if i != j {
                    assert!(s.get(i, j).is_zero(), "off-diagonal at ({i},{j})");
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility {} | {}", w[0], w[1]);
            } else {
                assert!(w[1].is_zero());
            }
        }
        diag
    }

    #[test]
    fn snf_scalar() {
        let m = IntMatrix::from_rows_i64(&[vec![2]]);
        assert_eq!(assert_snf(&m), vec![BigInt::from(2)]);
    }

    #[test]
    fn snf_example_matrix() {
        // expected values frozen from the determinantal-divisor oracle
        let m = IntMatrix::from_rows_i64(&[
            vec![2, 0, 0],
            vec![0, 0, 2],
            vec![0, -1, 1],
            vec![-1, 1, 0],
        ]);
        let oracle = invariants_by_minors(&m);
        assert_eq!(oracle, vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)]);
        assert_eq!(assert_snf(&m), oracle);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zero(2, 3);
        assert_eq!(assert_snf(&m), vec![BigInt::zero(), BigInt::zero()]);
    }

    #[test]
    fn cokernel_examples() {
        let m = IntMatrix::from_rows_i64(&[vec![2]]);
        assert_eq!(cokernel_invariants(&m), vec![BigInt::from(2)]);
        assert_eq!(cokernel_invariants(&IntMatrix::identity(3)), Vec::<BigInt>::new());
        let m = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(cokernel_invariants(&m), vec![BigInt::from(6)]);
    }

    #[test]
    fn matrix_file_round_trip() {
        let m = IntMatrix::from_rows_i64(&[vec![1, -2], vec![3, 0]]);
        assert_eq!(IntMatrix::parse(&m.emit()).unwrap(), m);
        assert!(IntMatrix::parse("2 2 1 2 3").is_err());
    }

    mod prop {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = IntMatrix> {
            (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
                proptest::collection::vec(-9i64..=9, r * c).prop_map(move |vals| {
                    let rows: Vec<Vec<i64>> =
                        vals.chunks(c).map(|ch| ch.to_vec()).collect();
                    IntMatrix::from_rows_i64(&rows)
                })
            })
        }

        fn random_unimodular(n: usize, ops: &[(usize, usize, i64)], seedswap: bool) -> IntMatrix {
            let mut m = IntMatrix::identity(n);
            for &(a, b, q) in ops {
                let (a, b) = (a % n, b % n);
                if a == b {
                    continue;
                }
                for j in 0..n {
                    let t = m.get(a, j) + BigInt::from(q) * m.get(b, j);
                    m.set(a, j, t);
                }
            }
            if seedswap && n >= 2 {
                for j in 0..n {
                    let t = m.get(0, j).clone();
                    m.set(0, j, m.get(1, j).clone());
                    m.set(1, j, t);
                }
            }
            m
        }

        proptest! {
            #[test]
            fn snf_certificate(m in small_matrix()) {
                let diag = assert_snf(&m);
                prop_assert_eq!(diag, invariants_by_minors(&m).into_iter()
                    .chain(std::iter::repeat(BigInt::zero()))
                    .take(m.rows().min(m.cols())).collect::<Vec<_>>());
            }

            #[test]
            fn invariants_stable_under_unimodular(
                m in small_matrix(),
                ops in proptest::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..6),
                sw in any::<bool>(),
            ) {
                let p = random_unimodular(m.rows(), &ops, sw);
                let q = random_unimodular(m.cols(), &ops, !sw);
                let pmq = p.matmul(&m).matmul(&q);
                prop_assert_eq!(cokernel_invariants(&pmq), cokernel_invariants(&m));
            }
        }
    }
}
