//! Exact linear algebra over the rationals: reduced row echelon form,
//! kernel bases, rank, and small dense solves. Sizes here are tiny (at most
//! a few hundred rows), so plain Gaussian elimination over `Rat` is both
//! exact and fast.

use num_traits::Zero;

use crate::exactnum::Rat;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(mat: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let nrows = mat.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = mat[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].recip();
        for x in mat[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..nrows {
            if r != row && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in 0..ncols {
                    let delta = &f * &mat[row][c];
                    mat[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    pivots
}

/// Basis of the null space of `mat` (columns are the unknowns).
///
/// Each basis vector is scaled so its first nonzero entry is 1, and vectors
/// are ordered by the index of that entry, so the output is deterministic.
pub fn kernel_basis(mut mat: Vec<Vec<Rat>>, ncols: usize) -> Vec<Vec<Rat>> {
    let pivots = rref(&mut mat);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Rat::zero(); ncols];
        v[fc] = Rat::from_integer(1.into());
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -mat[i][fc].clone();
        }
        let lead = v
            .iter()
            .find(|x| !x.is_zero())
            .expect("kernel vector is nonzero")
            .clone();
        for x in v.iter_mut() {
            *x /= &lead;
        }
        basis.push(v);
    }
    basis.sort_by_key(|v| v.iter().position(|x| !x.is_zero()).unwrap_or(ncols));
    basis
}

/// Rank of the matrix formed by the given rows.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Solves the square system `a x = b` exactly; `None` if singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::RatExt;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn kernel_of_simple_system() {
        // x + y + z = 0, x - z = 0 -> kernel spanned by (1, -2, 1)
        let rows = vec![vec![r(1), r(1), r(1)], vec![r(1), r(0), r(-1)]];
        let basis = kernel_basis(rows, 3);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![r(1), r(-2), r(1)]);
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        let b = vec![r(5), r(10)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![r(1), r(3)]);
        // singular
        let a = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        assert!(solve(&a, &vec![r(1), r(1)]).is_none());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let rows = vec![
            vec![r(1), r(2), r(3)],
            vec![r(2), r(4), r(6)],
            vec![r(0), r(1), r(1)],
        ];
        assert_eq!(rank(&rows), 2);
    }
}
