use num_bigint::BigInt;
use num_traits::Zero;

use crate::level_matrix::IntMatrix;

/// Rank by fraction-free (Bareiss) elimination. Every intermediate entry is
/// a minor of the input, so each division is exact.
pub fn integer_rank(matrix: &IntMatrix) -> usize {
    let n = matrix.dim();
    let mut m: Vec<Vec<BigInt>> = matrix
        .rows()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut prev = BigInt::from(1);
    let mut row = 0;
    for col in 0..n {
        if row == n {
            break;
        }
        let Some(pivot) = (row..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot);
        for i in (row + 1)..n {
            for j in (col + 1)..n {
                let v = &m[row][col] * &m[i][j] - &m[i][col] * &m[row][j];
                debug_assert!((&v % &prev).is_zero());
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        row += 1;
    }
    row
}

/// Multiplicity of the eigenvalue zero, `n - rank`.
pub fn exact_zero_multiplicity(matrix: &IntMatrix) -> usize {
    matrix.dim() - integer_rank(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(integer_rank(&IntMatrix::zeros(3)), 0);
        assert_eq!(integer_rank(&IntMatrix::zeros(0)), 0);
        let full = IntMatrix::from_rows(&[vec![2, 1], vec![1, 3]]);
        assert_eq!(integer_rank(&full), 2);
        let one = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![3, 6, 9]]);
        assert_eq!(integer_rank(&one), 1);
        // zero first column forces a skipped column
        let skip = IntMatrix::from_rows(&[vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 7]]);
        assert_eq!(integer_rank(&skip), 2);
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(integer_rank(&swap), 2);
        assert_eq!(exact_zero_multiplicity(&one), 2);
    }
}
