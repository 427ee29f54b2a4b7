//! Exact integer linear algebra with checked `i64` arithmetic: Bareiss
//! determinant, Smith normal form diagonal, and a column-Hermite solver
//! for `A x = b` over ℤ.

use crate::error::{checked_add, checked_mul, checked_sub, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).try_fold(0i64, |acc, j| checked_add(acc, checked_mul(self.get(i, j), x[j])?))
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Column ops `(col_a, col_b) ← (p·a + q·b, r·a + s·b)`.
    fn combine_cols(&mut self, a: usize, b: usize, p: i64, q: i64, r: i64, s: i64) -> Result<()> {
        for i in 0..self.rows {
            let (x, y) = (self.get(i, a), self.get(i, b));
            let na = checked_add(checked_mul(p, x)?, checked_mul(q, y)?)?;
            let nb = checked_add(checked_mul(r, x)?, checked_mul(s, y)?)?;
            self.set(i, a, na);
            self.set(i, b, nb);
        }
        Ok(())
    }

    fn combine_rows(&mut self, a: usize, b: usize, p: i64, q: i64, r: i64, s: i64) -> Result<()> {
        for j in 0..self.cols {
            let (x, y) = (self.get(a, j), self.get(b, j));
            let na = checked_add(checked_mul(p, x)?, checked_mul(q, y)?)?;
            let nb = checked_add(checked_mul(r, x)?, checked_mul(s, y)?)?;
            self.set(a, j, na);
            self.set(b, j, nb);
        }
        Ok(())
    }

    /// `col_dst −= k · col_src`
    fn axpy_col(&mut self, dst: usize, src: usize, k: i64) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let v = checked_sub(self.get(i, dst), checked_mul(k, self.get(i, src))?)?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_col(&mut self, c: usize) -> Result<()> {
        for i in 0..self.rows {
            let v = self.get(i, c).checked_neg().ok_or(Error::Overflow)?;
            self.set(i, c, v);
        }
        Ok(())
    }
}

/// Returns `(g, s, t)` with `s·a + t·b = g = gcd(a, b) ≥ 0`.
pub fn extended_gcd(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, checked_sub(old_r, checked_mul(q, r)?)?);
        (old_s, s) = (s, checked_sub(old_s, checked_mul(q, s)?)?);
        (old_t, t) = (t, checked_sub(old_t, checked_mul(q, t)?)?);
    }
    if old_r < 0 {
        let neg = |x: i64| x.checked_neg().ok_or(Error::Overflow);
        Ok((neg(old_r)?, neg(old_s)?, neg(old_t)?))
    } else {
        Ok((old_r, old_s, old_t))
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix.
pub fn determinant(m: &IntMatrix) -> Result<i64> {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return Ok(1);
    }
    let mut a = m.clone();
    let mut sign = 1i64;
    let mut prev = 1i64;
    for k in 0..n - 1 {
        if a.get(k, k) == 0 {
            match (k + 1..n).find(|&i| a.get(i, k) != 0) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = checked_sub(
                    checked_mul(a.get(i, j), a.get(k, k))?,
                    checked_mul(a.get(i, k), a.get(k, j))?,
                )?;
                a.set(i, j, num / prev);
            }
        }
        prev = a.get(k, k);
    }
    checked_mul(sign, a.get(n - 1, n - 1))
}

/// Diagonal of the Smith normal form: nonnegative invariant factors
/// `d_1 | d_2 | …`, one per `min(rows, cols)` position (zeros last).
pub fn smith_diagonal(m: &IntMatrix) -> Result<Vec<i64>> {
    let mut a = m.clone();
    let k = a.rows.min(a.cols);
    for t in 0..k {
        // pivot: smallest nonzero magnitude in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                let x = a.get(i, j);
                if x != 0 && best.is_none_or(|(bi, bj)| x.unsigned_abs() < a.get(bi, bj).unsigned_abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..a.rows {
                let x = a.get(i, t);
                if x != 0 {
                    let piv = a.get(t, t);
                    if x % piv == 0 {
                        a.combine_rows(t, i, 1, 0, -(x / piv), 1)?;
                    } else {
                        let (g, s, u) = extended_gcd(piv, x)?;
                        a.combine_rows(t, i, s, u, -(x / g), piv / g)?;
                    }
                    changed = true;
                }
            }
            for j in t + 1..a.cols {
                let x = a.get(t, j);
                if x != 0 {
                    let piv = a.get(t, t);
                    if x % piv == 0 {
                        a.combine_cols(t, j, 1, 0, -(x / piv), 1)?;
                    } else {
                        let (g, s, u) = extended_gcd(piv, x)?;
                        a.combine_cols(t, j, s, u, -(x / g), piv / g)?;
                    }
                    changed = true;
                }
            }
            if !changed {
                // divisibility of the remaining block by the pivot
                let piv = a.get(t, t);
                let offender = (t + 1..a.rows)
                    .flat_map(|i| (t + 1..a.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a.get(i, j) % piv != 0);
                match offender {
                    Some((i, _)) => {
                        // fold row i into row t and repeat
                        for j in t..a.cols {
                            let v = checked_add(a.get(t, j), a.get(i, j))?;
                            a.set(t, j, v);
                        }
                    }
                    None => break,
                }
            }
        }
        if a.get(t, t) < 0 {
            for j in t..a.cols {
                let v = a.get(t, j).checked_neg().ok_or(Error::Overflow)?;
                a.set(t, j, v);
            }
        }
    }
    let mut diag: Vec<i64> = (0..k).map(|i| a.get(i, i)).collect();
    // invariant factors are nonzero-first in divisibility order
    diag.sort_by_key(|&d| if d == 0 { i64::MAX } else { d });
    Ok(diag)
}

/// Solves `A x = b` over ℤ by reducing `A` to column Hermite form
/// `A·V = H` (V unimodular, H lower echelon), forward-substituting
/// `H y = b`, and returning `x = V y`. `None` when no integer solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[i64]) -> Result<Option<Vec<i64>>> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let mut h = a.clone();
    let mut v = IntMatrix::identity(n);
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; a.rows];
    let mut r = 0usize;
    for i in 0..h.rows {
        if r == n {
            break;
        }
        for j in r + 1..n {
            let x = h.get(i, j);
            if x == 0 {
                continue;
            }
            let (g, s, t) = extended_gcd(h.get(i, r), x)?;
            let (p, q) = (h.get(i, r) / g, x / g);
            h.combine_cols(r, j, s, t, -q, p)?;
            v.combine_cols(r, j, s, t, -q, p)?;
        }
        let piv = h.get(i, r);
        if piv == 0 {
            continue;
        }
        if piv < 0 {
            h.negate_col(r)?;
            v.negate_col(r)?;
        }
        let piv = h.get(i, r);
        for c in 0..r {
            let k = h.get(i, c).div_euclid(piv);
            h.axpy_col(c, r, k)?;
            v.axpy_col(c, r, k)?;
        }
        pivot_of_row[i] = Some(r);
        r += 1;
    }
    let mut y = vec![0i64; n];
    for i in 0..h.rows {
        let mut acc = 0i64;
        let upto = pivot_of_row[i].unwrap_or(r);
        for (c, &yc) in y.iter().enumerate().take(upto) {
            acc = checked_add(acc, checked_mul(h.get(i, c), yc)?)?;
        }
        let rest = checked_sub(b[i], acc)?;
        match pivot_of_row[i] {
            Some(c) => {
                let piv = h.get(i, c);
                if rest % piv != 0 {
                    return Ok(None);
                }
                y[c] = rest / piv;
            }
            None => {
                if rest != 0 {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(v.mul_vec(&y)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det_oracle(m: &[Vec<i64>]) -> i64 {
        // Laplace expansion
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_oracle(&minor)
            })
            .sum()
    }

    #[test]
    fn smith_examples() {
        let m = IntMatrix::from_rows(&[vec![0, -1, -1], vec![-1, 0, -1], vec![-1, -1, 0]]);
        assert_eq!(smith_diagonal(&m).unwrap(), vec![1, 1, 2]);
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(smith_diagonal(&m).unwrap(), vec![2, 4]);
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_diagonal(&m).unwrap(), vec![1, 6]);
        let m = IntMatrix::from_rows(&[vec![0, 0], vec![0, 5]]);
        assert_eq!(smith_diagonal(&m).unwrap(), vec![5, 0]);
    }

    #[test]
    fn solve_simple() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(solve_integer(&a, &[4, 9]).unwrap(), Some(vec![2, 3]));
        assert_eq!(solve_integer(&a, &[3, 9]).unwrap(), None);
        let a = IntMatrix::from_rows(&[vec![2, 4]]);
        let x = solve_integer(&a, &[6]).unwrap().unwrap();
        assert_eq!(2 * x[0] + 4 * x[1], 6);
        assert_eq!(solve_integer(&a, &[5]).unwrap(), None);
    }

    proptest! {
        #[test]
        fn determinant_matches_laplace(rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 4)) {
            let m = IntMatrix::from_rows(&rows);
            prop_assert_eq!(determinant(&m).unwrap(), det_oracle(&rows));
        }

        #[test]
        fn smith_product_is_abs_det(rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 3)) {
            let m = IntMatrix::from_rows(&rows);
            let d = smith_diagonal(&m).unwrap();
            prop_assert_eq!(d.iter().product::<i64>(), det_oracle(&rows).abs());
            for w in d.windows(2) {
                if w[1] != 0 {
                    prop_assert_eq!(w[1] % w[0], 0);
                }
            }
        }

        #[test]
        fn solver_finds_planted_solutions(rows in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 4), 5),
                                          x in proptest::collection::vec(-5i64..=5, 4)) {
            let a = IntMatrix::from_rows(&rows);
            let b = a.mul_vec(&x).unwrap();
            let sol = solve_integer(&a, &b).unwrap();
            prop_assert!(sol.is_some());
            prop_assert_eq!(a.mul_vec(&sol.unwrap()).unwrap(), b);
        }
    }
}
