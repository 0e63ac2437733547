//! Integer Smith normal form with a tracked column transform.
//!
//! Pivot rule: smallest nonzero absolute value in the remaining block.
//! Matrices here are tiny, so this favours a simple exact loop over
//! modular tricks.

/// Result of reducing an `m × n` integer matrix `A` to `U·A·V = D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    /// Nonzero diagonal entries `d₁ | d₂ | …`, all positive.
    pub diagonal: Vec<i128>,
    /// The unimodular `n × n` column transform `V`.
    pub col_transform: Vec<Vec<i128>>,
    /// `V⁻¹`; row `i` expresses the `i`-th new basis vector in the old generators.
    pub col_inverse: Vec<Vec<i128>>,
    pub ncols: usize,
}

impl Snf {
    /// Number of free (`ℤ`) summands of `ℤⁿ / rowspace(A)`.
    pub fn rank(&self) -> usize {
        self.ncols - self.diagonal.len()
    }

    /// Invariant factors `≥ 2` of the torsion part.
    pub fn torsion(&self) -> Vec<i128> {
        self.diagonal.iter().copied().filter(|&d| d > 1).collect()
    }
}

#[track_caller]
fn ck(v: Option<i128>) -> i128 {
    v.expect("integer overflow in Smith normal form")
}

pub fn smith_normal_form(rows: &[Vec<i128>], ncols: usize) -> Snf {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    for r in &a {
        assert_eq!(r.len(), ncols, "ragged relation matrix");
    }
    let m = a.len();
    let mut v: Vec<Vec<i128>> = (0..ncols).map(|i| (0..ncols).map(|j| (i == j) as i128).collect()).collect();
    let mut vinv = v.clone();
    let mut diagonal = Vec::new();

    type M = Vec<Vec<i128>>;
    let swap_cols = |a: &mut M, v: &mut M, vinv: &mut M, i: usize, j: usize| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row.swap(i, j);
        }
        vinv.swap(i, j);
    };
    // col_j -= q * col_i, and row_i += q * row_j in the inverse
    let col_axpy = |a: &mut M, v: &mut M, vinv: &mut M, j: usize, i: usize, q: i128| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            row[j] = ck(row[j].checked_sub(ck(q.checked_mul(row[i]))));
        }
        for k in 0..vinv[i].len() {
            vinv[i][k] = ck(vinv[i][k].checked_add(ck(q.checked_mul(vinv[j][k]))));
        }
    };

    let mut t = 0;
    while t < m.min(ncols) {
        loop {
            // smallest nonzero pivot in the block
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Snf { diagonal, col_transform: v, col_inverse: vinv, ncols };
            };
            a.swap(t, pi);
            if pj != t {
                swap_cols(&mut a, &mut v, &mut vinv, t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..ncols {
                        a[i][j] = ck(a[i][j].checked_sub(ck(q.checked_mul(a[t][j]))));
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..ncols {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    col_axpy(&mut a, &mut v, &mut vinv, j, t, q);
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let bad = (t + 1..m).find(|&i| (t + 1..ncols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..ncols {
                        a[t][j] = ck(a[t][j].checked_add(a[i][j]));
                    }
                }
                None => break,
            }
        }
        diagonal.push(a[t][t].abs());
        t += 1;
    }
    Snf { diagonal, col_transform: v, col_inverse: vinv, ncols }
}
