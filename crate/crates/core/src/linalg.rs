//! Exact dense linear algebra over [`Rational`].

use crate::scalar::Rational;

/// Determinant by Gaussian elimination with first-nonzero pivoting.
/// The empty matrix has determinant one.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut m: Vec<Vec<Rational>> = matrix.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= &delta;
            }
        }
    }
    det
}

/// Leading principal minors `det(M[..k][..k])` for `k = 0..=n`.
pub fn leading_minors(matrix: &[Vec<Rational>]) -> Vec<Rational> {
    (0..=matrix.len())
        .map(|k| {
            let sub: Vec<Vec<Rational>> = matrix[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}
