//! Dense Gaussian elimination over an exact field.

use crate::scalar::{Field, Scalar};

/// Solves `a · x = b` for one solution (free variables set to zero), or
/// `None` when the system is inconsistent. `a` is row-major.
pub fn solve(field: Field, a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(f: Field, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&n| f.from_i64(n)).collect()
    }

    #[test]
    fn solves_square_system() {
        let q = Field::Rational;
        let a = vec![row(q, &[2, 1]), row(q, &[1, 3])];
        let x = solve(q, &a, &row(q, &[3, 5])).unwrap();
        assert_eq!(x, vec![q.parse("4/5").unwrap(), q.parse("7/5").unwrap()]);
    }

    #[test]
    fn detects_inconsistency_and_handles_free_columns() {
        let q = Field::Rational;
        let a = vec![row(q, &[1, 1]), row(q, &[2, 2])];
        assert!(solve(q, &a, &row(q, &[1, 3])).is_none());
        let x = solve(q, &a, &row(q, &[1, 2])).unwrap();
        assert_eq!(x, row(q, &[1, 0]));
    }

    #[test]
    fn works_over_gf_p() {
        let f = Field::Prime(5);
        let a = vec![row(f, &[2])];
        assert_eq!(solve(f, &a, &row(f, &[1])).unwrap(), row(f, &[3]));
    }
}
