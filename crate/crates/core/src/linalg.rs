//! Elimination over a scalar field and symmetric spectral helpers.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::polycore::{Mat, Scalar};

/// Reduced row echelon form with pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<C> {
    pub m: Mat<C>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. Exact scalars use the first non-zero pivot;
/// floats use partial pivoting and treat entries below `tol * max|a|` as zero.
pub fn rref<C: Scalar>(a: &Mat<C>, tol: f64) -> Rref<C> {
    let mut m = a.clone();
    let (rows, cols) = m.shape();
    let cutoff = tol * m.max_abs().max(1.0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pick = if C::EXACT {
            (r..rows).find(|&i| !m.get(i, c).is_zero())
        } else {
            (r..rows)
                .map(|i| (i, m.get(i, c).to_f64().abs()))
                .filter(|&(_, v)| v > cutoff)
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .map(|(i, _)| i)
        };
        let Some(p) = pick else {
            if !C::EXACT {
                for i in r..rows {
                    m.set(i, c, C::zero());
                }
            }
            continue;
        };
        if p != r {
            for j in 0..cols {
                let t = m.get(p, j).clone();
                m.set(p, j, m.get(r, j).clone());
                m.set(r, j, t);
            }
        }
        let inv = m.get(r, c).recip().expect("pivot is non-zero");
        for j in 0..cols {
            let v = m.get(r, j).times(&inv);
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..cols {
                let v = m.get(i, j).minus(&f.times(m.get(r, j)));
                m.set(i, j, v);
            }
            if !C::EXACT {
                m.set(i, c, C::zero());
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { m, pivots }
}

pub fn rank<C: Scalar>(a: &Mat<C>, tol: f64) -> usize {
    rref(a, tol).pivots.len()
}

/// Basis of `{v : a v = 0}`, one vector per free column.
pub fn nullspace<C: Scalar>(a: &Mat<C>, tol: f64) -> Vec<Vec<C>> {
    let Rref { m, pivots } = rref(a, tol);
    let cols = a.cols();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![C::zero(); cols];
        v[free] = C::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = m.get(r, free).negated();
        }
        basis.push(v);
    }
    basis
}

/// Indices of a maximal set of linearly independent columns (leftmost first).
pub fn independent_columns<C: Scalar>(a: &Mat<C>, tol: f64) -> Vec<usize> {
    rref(a, tol).pivots
}

/// Some solution of `a x = b`, or `None` if the system is inconsistent.
pub fn solve<C: Scalar>(a: &Mat<C>, b: &[C], tol: f64) -> Option<Vec<C>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    let cols = a.cols();
    let aug = Mat::from_fn(a.rows(), cols + 1, |i, j| if j < cols { a.get(i, j).clone() } else { b[i].clone() });
    let Rref { m, pivots } = rref(&aug, tol);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![C::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m.get(r, cols).clone();
    }
    Some(x)
}

pub fn inverse<C: Scalar>(a: &Mat<C>, tol: f64) -> Option<Mat<C>> {
    let n = a.rows();
    if !a.is_square() {
        return None;
    }
    let aug = Mat::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else if j - n == i {
            C::one()
        } else {
            C::zero()
        }
    });
    let Rref { m, pivots } = rref(&aug, tol);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(m.block(0, n, n, n))
}

pub(crate) fn to_dmatrix(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j))
}

/// Eigen-decomposition of a symmetric matrix: eigenvalues in descending order and
/// orthonormal eigenvectors as columns, each with its first non-negligible entry positive.
pub fn sym_eigen(m: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let n = m.rows();
    let sym = DMatrix::from_fn(n, n, |i, j| 0.5 * (m.get(i, j) + m.get(j, i)));
    let eig = SymmetricEigen::try_new(sym, 1e-15, 10_000)
        .ok_or_else(|| Error::NumericFailure("symmetric eigen-solver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = Mat::zeros(n, n);
    for (c, &k) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(k);
        let sign = col.iter().find(|v| v.abs() > 1e-12).map_or(1.0, |v| v.signum());
        for i in 0..n {
            vecs.set(i, c, sign * col[i]);
        }
    }
    Ok((values, vecs))
}

/// `f(M)` for symmetric `M` through its eigen-decomposition.
pub fn sym_apply(m: &Mat<f64>, f: impl Fn(f64) -> f64) -> Result<Mat<f64>> {
    let (vals, vecs) = sym_eigen(m)?;
    let d: Vec<f64> = vals.into_iter().map(f).collect();
    Ok(&(&vecs * &Mat::diag(&d)) * &vecs.transpose())
}

/// Singular values in descending order.
pub fn singular_values(m: &Mat<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = to_dmatrix(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::Coeff;

    fn q(rows: &[&[i64]]) -> Mat<Coeff> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| Coeff::integer(v)).collect()).collect())
    }

    #[test]
    fn exact_rank_and_kernel() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a, 0.0), 2);
        let ker = nullspace(&a, 0.0);
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn exact_solve_and_inverse() {
        let a = q(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a, 0.0).unwrap();
        assert_eq!(&a * &inv, Mat::identity(2));
        let x = solve(&a, &[Coeff::integer(3), Coeff::integer(2)], 0.0).unwrap();
        assert_eq!(x, vec![Coeff::integer(1), Coeff::integer(1)]);
        let sing = q(&[&[1, 1], &[1, 1]]);
        assert!(inverse(&sing, 0.0).is_none());
        assert!(solve(&sing, &[Coeff::integer(1), Coeff::integer(2)], 0.0).is_none());
    }

    #[test]
    fn float_rank_tolerates_rounding() {
        let a = Mat::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-14]]);
        assert_eq!(rank(&a, 1e-10), 1);
        assert_eq!(rank(&a, 0.0), 2);
    }

    #[test]
    fn eigen_order_and_signs() {
        let m = Mat::from_rows(vec![vec![2.0, 0.0], vec![0.0, 5.0]]);
        let (vals, vecs) = sym_eigen(&m).unwrap();
        assert_eq!(vals, vec![5.0, 2.0]);
        assert_eq!(vecs.col(0), vec![0.0, 1.0]);
        let sq = sym_apply(&m, f64::sqrt).unwrap();
        assert!((sq.get(1, 1) - 5f64.sqrt()).abs() < 1e-14);
    }
}
