use std::fmt;
use std::ops::Mul;

use crate::exactnum::QSqrt2;

/// A 4×4 matrix over Q(√2) acting on coordinates `(1, i, j, k)`.
///
/// Produced by projecting Pin elements, so it is orthogonal by construction;
/// [`OrthMatrix4::is_orthogonal`] checks this exactly.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrthMatrix4 {
    rows: [[QSqrt2; 4]; 4],
}

impl OrthMatrix4 {
    pub fn from_rows(rows: [[QSqrt2; 4]; 4]) -> Self {
        OrthMatrix4 { rows }
    }

    pub fn from_columns(cols: [[QSqrt2; 4]; 4]) -> Self {
        let mut rows = [[QSqrt2::ZERO; 4]; 4];
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                rows[i][j] = *x;
            }
        }
        OrthMatrix4 { rows }
    }

    pub fn identity() -> Self {
        OrthMatrix4::diag([1, 1, 1, 1])
    }

    pub fn diag(d: [i64; 4]) -> Self {
        let mut rows = [[QSqrt2::ZERO; 4]; 4];
        for (i, x) in d.into_iter().enumerate() {
            rows[i][i] = x.into();
        }
        OrthMatrix4 { rows }
    }

    /// `R_n`: reflection in coordinate `n` (1-based, as in `R₁ = diag[-1,1,1,1]`).
    pub fn reflection(n: usize) -> Self {
        let mut d = [1; 4];
        d[n - 1] = -1;
        OrthMatrix4::diag(d)
    }

    pub fn rows(&self) -> &[[QSqrt2; 4]; 4] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> QSqrt2 {
        self.rows[i][j]
    }

    pub fn neg(&self) -> Self {
        OrthMatrix4 { rows: self.rows.map(|r| r.map(|x| -x)) }
    }

    pub fn transpose(&self) -> Self {
        let mut rows = [[QSqrt2::ZERO; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.rows[j][i];
            }
        }
        OrthMatrix4 { rows }
    }

    pub fn trace(&self) -> QSqrt2 {
        (0..4).fold(QSqrt2::ZERO, |acc, i| acc + self.rows[i][i])
    }

    /// Exact determinant by cofactor expansion.
    pub fn det(&self) -> QSqrt2 {
        fn minor(m: &[[QSqrt2; 4]; 4], rows: &[usize], cols: &[usize]) -> QSqrt2 {
            if rows.len() == 1 {
                return m[rows[0]][cols[0]];
            }
            let mut acc = QSqrt2::ZERO;
            for (idx, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = m[rows[0]][c] * minor(m, &rows[1..], &rest);
                acc = if idx % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
        minor(&self.rows, &[0, 1, 2, 3], &[0, 1, 2, 3])
    }

    pub fn is_identity(&self) -> bool {
        *self == OrthMatrix4::identity()
    }

    pub fn is_orthogonal(&self) -> bool {
        (self.transpose() * *self).is_identity()
    }
}

impl Mul for OrthMatrix4 {
    type Output = OrthMatrix4;
    fn mul(self, o: OrthMatrix4) -> OrthMatrix4 {
        let mut rows = [[QSqrt2::ZERO; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..4).fold(QSqrt2::ZERO, |acc, k| acc + self.rows[i][k] * o.rows[k][j]);
            }
        }
        OrthMatrix4 { rows }
    }
}

impl fmt::Debug for OrthMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for OrthMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}
