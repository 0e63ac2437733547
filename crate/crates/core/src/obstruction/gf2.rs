//! Gaussian elimination over 𝔽₂ with leftmost pivots.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Solution {
    /// Rank of `A`.
    pub rank: usize,
    /// Rank of `[A | b]`; equals `rank` iff the system is consistent.
    pub augmented_rank: usize,
    /// The solution with every free variable set to 0, when one exists.
    pub solution: Option<Vec<u8>>,
}

impl Gf2Solution {
    pub fn nullity(&self, ncols: usize) -> usize {
        ncols - self.rank
    }
}

/// Solve `A·x = b` over 𝔽₂ for an `m × ncols` matrix of 0/1 entries.
pub fn solve(a: &[Vec<u8>], b: &[u8], ncols: usize) -> Gf2Solution {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let mut rows: Vec<Vec<u8>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row: Vec<u8> = r.iter().map(|x| x & 1).collect();
            row.push(bi & 1);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] == 1 {
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let rank = r;
    let inconsistent = rows[rank..].iter().any(|row| row[ncols] == 1);
    let augmented_rank = rank + inconsistent as usize;
    let solution = (!inconsistent).then(|| {
        let mut x = vec![0u8; ncols];
        for (i, &col) in pivots.iter().enumerate() {
            x[col] = rows[i][ncols];
        }
        x
    });
    Gf2Solution { rank, augmented_rank, solution }
}
