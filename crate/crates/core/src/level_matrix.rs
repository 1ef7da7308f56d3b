//! The level matrix `l_ij = |l(v_i) - l(v_j)|` and the aggregates the
//! bounds are stated in: row sums `L_i`, level index `LI`, and `H`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tree::{LevelVector, RootedTree};

/// Dense symmetric integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|&x| x as f64).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Principal submatrix with row and column `v` removed.
    pub fn without(&self, v: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&i| i != v).collect();
        let mut out = IntMatrix::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    /// `n` on the first line, then one whitespace-separated row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }
}

/// Level matrix of a rooted tree together with its cached aggregates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMatrix {
    entries: IntMatrix,
    levels: LevelVector,
    row_sums: Vec<i64>,
    level_index: i64,
    h_value: i64,
}

impl LevelMatrix {
    pub fn new(tree: &RootedTree) -> Self {
        Self::from_levels(tree.levels())
    }

    pub fn from_levels(levels: LevelVector) -> Self {
        let l = levels.as_slice();
        let n = l.len();
        let mut entries = IntMatrix::zeros(n);
        let mut row_sums = vec![0i64; n];
        let mut total = 0i64;
        let mut squares = 0i64;
        for i in 0..n {
            for j in 0..n {
                let d = (l[i] as i64 - l[j] as i64).abs();
                entries.set(i, j, d);
                row_sums[i] += d;
                squares += d * d;
            }
            total += row_sums[i];
        }
        LevelMatrix {
            entries,
            levels,
            row_sums,
            level_index: total / 2,
            h_value: squares,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries.get(i, j)
    }

    pub fn levels(&self) -> &LevelVector {
        &self.levels
    }

    pub fn max_level(&self) -> usize {
        self.levels.max_level()
    }

    /// `L_i`, the row sums.
    pub fn row_sums(&self) -> &[i64] {
        &self.row_sums
    }

    /// `LI`, half the sum of all entries.
    pub fn level_index(&self) -> i64 {
        self.level_index
    }

    /// `H = trace(L^2) = 2 * sum_{i<j} l_ij^2`.
    pub fn h_value(&self) -> i64 {
        self.h_value
    }

    /// `Q_i = sum_j l_ij L_j`.
    pub fn q_vector(&self) -> Vec<i64> {
        self.entries
            .rows()
            .map(|row| row.iter().zip(&self.row_sums).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sum_row_sums_squared(&self) -> i64 {
        self.row_sums.iter().map(|x| x * x).sum()
    }

    /// True when the graph on nonzero entries is connected.
    pub fn is_irreducible(&self) -> bool {
        let n = self.dim();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for (j, &x) in self.entries.row(i).iter().enumerate() {
                if x != 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_text(&self) -> String {
        self.entries.to_text()
    }
}

/// Tree distance matrix via `d_ij = l_i + l_j - 2 l_lca(i,j)`, with the
/// common ancestor found by walking parent pointers.
pub fn distance_matrix(tree: &RootedTree) -> IntMatrix {
    let n = tree.len();
    let levels = tree.levels();
    let l = levels.as_slice();
    let mut d = IntMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (mut a, mut b) = (i, j);
            while l[a] > l[b] {
                a = tree.parent(a).expect("non-root");
            }
            while l[b] > l[a] {
                b = tree.parent(b).expect("non-root");
            }
            while a != b {
                a = tree.parent(a).expect("non-root");
                b = tree.parent(b).expect("non-root");
            }
            let dist = (l[i] + l[j] - 2 * l[a]) as i64;
            d.set(i, j, dist);
            d.set(j, i, dist);
        }
    }
    d
}

/// Closed form for `L_i - L_k` when levels are sorted non-increasing:
/// `(n - 2i) l_i - 2 sum_{i<j<k} l_j - (n - 2k + 2) l_k`, with one-based `i < k`.
pub fn row_sum_difference(sorted_levels: &[usize], i: usize, k: usize) -> Result<i64> {
    let n = sorted_levels.len();
    if i < 1 || i >= k || k > n {
        return Err(Error::IndexError(format!(
            "need 1 <= i < k <= n, got i={i}, k={k}, n={n}"
        )));
    }
    let n = n as i64;
    let li = sorted_levels[i - 1] as i64;
    let lk = sorted_levels[k - 1] as i64;
    let middle: i64 = sorted_levels[i..k - 1].iter().map(|&x| x as i64).sum();
    Ok((n - 2 * i as i64) * li - 2 * middle - (n - 2 * k as i64 + 2) * lk)
}
