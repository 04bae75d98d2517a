//! Smith normal form over exact integers.

use crate::scalar::Integer;

pub type Matrix<Z> = Vec<Vec<Z>>;

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal, each
/// diagonal entry non-negative and dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<Z> {
    pub d: Matrix<Z>,
    pub u: Matrix<Z>,
    pub v: Matrix<Z>,
}

impl<Z: Integer> SmithForm<Z> {
    pub fn diagonal(&self) -> Vec<Z> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }

    /// Recompute `u * m * v` and compare it with `d`, and check the
    /// diagonal and divisibility conditions.
    pub fn verify(&self, m: &Matrix<Z>) -> bool {
        let cols = self.v.len();
        if matmul(&matmul(&self.u, m, cols), &self.v, cols) != self.d {
            return false;
        }
        for (i, row) in self.d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j && !x.is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        diag.iter().all(|x| !x.is_negative())
            && diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) })
            && is_unimodular(&self.u)
            && is_unimodular(&self.v)
    }
}

fn identity<Z: Integer>(n: usize) -> Matrix<Z> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Z::one() } else { Z::zero() }).collect()).collect()
}

fn matmul<Z: Integer>(a: &Matrix<Z>, b: &Matrix<Z>, b_cols: usize) -> Matrix<Z> {
    let cols = b.first().map_or(b_cols, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().enumerate().fold(Z::zero(), |acc, (k, x)| acc + x.clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

/// Determinant ±1, by fraction-free Bareiss elimination.
fn is_unimodular<Z: Integer>(m: &Matrix<Z>) -> bool {
    let n = m.len();
    if n == 0 {
        return true;
    }
    let mut a = m.clone();
    let mut sign = Z::one();
    let mut prev = Z::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return false,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone()) / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    (sign * a[n - 1][n - 1].clone()).abs().is_one()
}

/// Smith normal form of a `rows × cols` matrix. `cols` is needed when the
/// matrix has no rows.
pub fn smith_normal_form<Z: Integer>(m: &Matrix<Z>, cols: usize) -> SmithForm<Z> {
    let rows = m.len();
    let mut d = m.clone();
    let mut u = identity::<Z>(rows);
    let mut v = identity::<Z>(cols);

    let row_op = |a: &mut Matrix<Z>, dst: usize, src: usize, q: &Z| {
        for j in 0..a[src].len() {
            let t = a[src][j].clone() * q.clone();
            a[dst][j] = a[dst][j].clone() - t;
        }
    };
    let col_op = |a: &mut Matrix<Z>, dst: usize, src: usize, q: &Z| {
        for row in a.iter_mut() {
            let t = row[src].clone() * q.clone();
            row[dst] = row[dst].clone() - t;
        }
    };
    let swap_cols = |a: &mut Matrix<Z>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    };

    let k_max = rows.min(cols);
    for t in 0..k_max {
        // pivot: smallest non-zero absolute value in the remaining block
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[i][j].is_zero())
                .min_by(|&(i1, j1), &(i2, j2)| d[i1][j1].abs().cmp(&d[i2][j2].abs()));
            let Some((pi, pj)) = pivot else { break };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_floor(&d[t][t]);
                if !q.is_zero() {
                    row_op(&mut d, i, t, &q);
                    row_op(&mut u, i, t, &q);
                }
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = d[t][j].div_floor(&d[t][t]);
                if !q.is_zero() {
                    col_op(&mut d, j, t, &q);
                    col_op(&mut v, j, t, &q);
                }
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold a non-multiple row into row t and retry
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[i][j].is_multiple_of(&d[t][t]));
            match bad {
                Some((i, _)) => {
                    let one = Z::int(-1);
                    row_op(&mut d, t, i, &one);
                    row_op(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if t < rows && d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    SmithForm { d, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn small_examples() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a, 3);
        assert!(s.verify(&a));
        assert_eq!(s.diagonal(), vec![2, 6, 12]);

        let b = m(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&b, 2);
        assert!(s.verify(&b));
        assert_eq!(s.diagonal(), vec![1, 6]);
    }

    #[test]
    fn rectangular_and_empty() {
        let a = m(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, 0], &[4, 0, 0]]);
        let s = smith_normal_form(&a, 3);
        assert!(s.verify(&a));
        assert_eq!(s.diagonal(), vec![2, 0, 0]);
        let e: Matrix<i64> = Vec::new();
        let s = smith_normal_form(&e, 4);
        assert_eq!(s.v.len(), 4);
        assert!(s.diagonal().is_empty());
    }

    #[test]
    fn bigint_backend() {
        let a: Matrix<BigInt> =
            vec![vec![BigInt::from(12), BigInt::from(18)], vec![BigInt::from(30), BigInt::from(42)]];
        let s = smith_normal_form(&a, 2);
        assert!(s.verify(&a));
        assert_eq!(s.diagonal(), vec![BigInt::from(6), BigInt::from(6)]);
    }
}
