//! Dense matrices over a scalar ring and matrices/vectors of polynomials.

use std::fmt;

use serde::Serialize;

use super::{Coeff, Poly, Scalar, Vars};
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Scalar> Mat<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<C>]) -> Self {
        Mat::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    /// The symplectic unit `[[0, I], [-I, 0]]` of size `2n`.
    pub fn j(n: usize) -> Self {
        Mat::from_fn(2 * n, 2 * n, |i, k| {
            if i < n && k == i + n {
                C::one()
            } else if i >= n && k + n == i {
                C::one().negated()
            } else {
                C::zero()
            }
        })
    }

    pub fn diag(d: &[C]) -> Self {
        Mat::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { C::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<C> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[C] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out: Mat<C> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j).plus(&a.times(rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&C, &C) -> C) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.plus(b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.minus(b))
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Mat<D> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(C::zero(), |acc, j| acc.plus(&self.get(i, j).times(&v[j])))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.data.iter().all(|c| c.is_negligible(tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self.get(i, j).minus(self.get(j, i)).is_negligible(tol)))
    }

    /// Largest `|M - Mᵀ|` entry.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max(self.get(i, j).minus(self.get(j, i)).to_f64().abs());
            }
        }
        worst
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Mat::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `[[a, b], [c, d]]` from four equally sized blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (r, k) = a.shape();
        assert!(b.rows == r && c.cols == k && d.rows == c.rows && d.cols == b.cols, "block shapes");
        Mat::from_fn(r + c.rows, k + b.cols, |i, j| match (i < r, j < k) {
            (true, true) => a.get(i, j).clone(),
            (true, false) => b.get(i, j - k).clone(),
            (false, true) => c.get(i - r, j).clone(),
            (false, false) => d.get(i - r, j - k).clone(),
        })
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|c| c.to_f64())
    }

    /// Rows as printable strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|c| c.to_string()).collect()).collect()
    }
}

impl<C: Scalar> Serialize for Mat<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<C: Scalar> fmt::Display for Mat<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_strings();
        let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

macro_rules! mat_binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a, C: Scalar> std::ops::$tr<&'a Mat<C>> for &'a Mat<C> {
            type Output = Mat<C>;
            fn $m(self, rhs: &'a Mat<C>) -> Mat<C> {
                self.$try(rhs).expect("matrix shapes agree")
            }
        }
    };
}
mat_binop!(Add, add, try_add);
mat_binop!(Sub, sub, try_sub);
mat_binop!(Mul, mul, try_mul);

impl<C: Scalar> std::ops::Neg for &Mat<C> {
    type Output = Mat<C>;
    fn neg(self) -> Mat<C> {
        self.map(|c| c.negated())
    }
}

/// A vector of polynomials, used for vector fields and polynomial maps.
pub type PolyVec<C> = Vec<Poly<C>>;

/// The identity map on the `2n` principal variables of `vars`.
pub fn identity_map<C: Scalar>(vars: Vars, len: usize) -> PolyVec<C> {
    (0..len).map(|i| Poly::var(vars, i)).collect()
}

/// `F ∘ G`, substituting the entries of `G` into every entry of `F`.
pub fn compose_map<C: Scalar>(f: &[Poly<C>], g: &[Poly<C>]) -> Result<PolyVec<C>> {
    f.iter().map(|fi| fi.compose(g)).collect()
}

pub fn vec_is_zero<C: Scalar>(v: &[Poly<C>]) -> bool {
    v.iter().all(|p| p.is_zero())
}

pub fn vec_sub<C: Scalar>(a: &[Poly<C>], b: &[Poly<C>]) -> Result<PolyVec<C>> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!("vectors of length {} and {}", a.len(), b.len())));
    }
    a.iter().zip(b).map(|(x, y)| x.try_sub(y)).collect()
}

pub fn vec_add<C: Scalar>(a: &[Poly<C>], b: &[Poly<C>]) -> Result<PolyVec<C>> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!("vectors of length {} and {}", a.len(), b.len())));
    }
    a.iter().zip(b).map(|(x, y)| x.try_add(y)).collect()
}

pub fn evaluate_vec<C: Scalar>(v: &[Poly<C>], x: &[C]) -> Result<Vec<C>> {
    v.iter().map(|p| p.evaluate(x)).collect()
}

/// Dot product `Σ a_i b_i`.
pub fn dot<C: Scalar>(a: &[Poly<C>], b: &[Poly<C>]) -> Result<Poly<C>> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::ShapeMismatch(format!("dot of lengths {} and {}", a.len(), b.len())));
    }
    let mut acc = Poly::zero(a[0].vars());
    for (x, y) in a.iter().zip(b) {
        acc = acc.try_add(&x.try_mul(y)?)?;
    }
    Ok(acc)
}

/// `(e1, e2, ...)`.
pub fn format_vec<C: Scalar>(v: &[Poly<C>]) -> String {
    let parts: Vec<String> = v.iter().map(|p| p.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn vec_to_float(v: &[Poly<Coeff>]) -> PolyVec<f64> {
    v.iter().map(|p| p.to_float()).collect()
}

/// Matrix with polynomial entries over a common variable layout.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<C> {
    rows: usize,
    cols: usize,
    vars: Vars,
    data: Vec<Poly<C>>,
}

impl<C: Scalar> PolyMatrix<C> {
    pub fn zeros(vars: Vars, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, vars, data: vec![Poly::zero(vars); rows * cols] }
    }

    pub fn from_fn(vars: Vars, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly<C>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let p = f(i, j);
                assert_eq!(p.vars(), vars, "entry over a different layout");
                data.push(p);
            }
        }
        PolyMatrix { rows, cols, vars, data }
    }

    /// Constant matrix lifted to polynomials.
    pub fn constant(vars: Vars, m: &Mat<C>) -> Self {
        PolyMatrix::from_fn(vars, m.rows(), m.cols(), |i, j| Poly::constant(vars, m.get(i, j).clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<C> {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Poly<C>] {
        &self.data
    }

    pub fn col(&self, j: usize) -> PolyVec<C> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        PolyMatrix::from_fn(self.vars, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows || self.vars != rhs.vars {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = PolyMatrix::zeros(self.vars, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&Poly<C>, &Poly<C>) -> Result<Poly<C>>) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) || self.vars != rhs.vars {
            return Err(Error::ShapeMismatch("polynomial matrices of different shapes".into()));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, vars: self.vars, data })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.try_add(b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.try_sub(b))
    }

    pub fn scale(&self, c: &C) -> Self {
        PolyMatrix::from_fn(self.vars, self.rows, self.cols, |i, j| self.get(i, j).scale(c))
    }

    pub fn mul_vec(&self, v: &[Poly<C>]) -> Result<PolyVec<C>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!("{} columns, vector of {}", self.cols, v.len())));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.vars);
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc = acc.try_add(&a.try_mul(vj)?)?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    /// First non-zero entry as `(row, col)`.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        let k = self.data.iter().position(|p| !p.is_zero())?;
        Some((k / self.cols, k % self.cols))
    }

    pub fn evaluate(&self, x: &[C]) -> Result<Mat<C>> {
        let vals = self.data.iter().map(|p| p.evaluate(x)).collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_fn(self.rows, self.cols, |i, j| vals[i * self.cols + j].clone()))
    }

    /// Entrywise substitution.
    pub fn compose(&self, subs: &[Poly<C>]) -> Result<Self> {
        let vars = subs.first().map(|p| p.vars()).ok_or_else(|| Error::ShapeMismatch("no substitutions".into()))?;
        let data = self.data.iter().map(|p| p.compose(subs)).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, vars, data })
    }

    pub fn embed(&self, vars: Vars, offset: usize) -> Self {
        PolyMatrix::from_fn(vars, self.rows, self.cols, |i, j| self.get(i, j).embed(vars, offset))
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        PolyMatrix::from_fn(self.vars, nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn max_degree(&self) -> u32 {
        self.data.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn total_terms(&self) -> usize {
        self.data.iter().map(|p| p.len()).sum()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}

impl PolyMatrix<Coeff> {
    pub fn to_float(&self) -> PolyMatrix<f64> {
        PolyMatrix::from_fn(self.vars, self.rows, self.cols, |i, j| self.get(i, j).to_float())
    }
}

impl<C: Scalar> fmt::Display for PolyMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[ {} ]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_squares_to_minus_identity() {
        for n in 1..4 {
            let j = Mat::<Coeff>::j(n);
            assert_eq!(&j * &j, -&Mat::identity(2 * n));
            assert_eq!(j.transpose(), -&j);
        }
    }

    #[test]
    fn block_assembly() {
        let a = Mat::from_rows(vec![vec![Coeff::integer(1)]]);
        let b = Mat::from_rows(vec![vec![Coeff::integer(2)]]);
        let c = Mat::from_rows(vec![vec![Coeff::integer(3)]]);
        let d = Mat::from_rows(vec![vec![Coeff::integer(4)]]);
        let m = Mat::from_blocks(&a, &b, &c, &d);
        assert_eq!(m.block(1, 0, 1, 1), c);
        assert_eq!(*m.get(0, 1), Coeff::integer(2));
        assert!(!m.is_symmetric(0.0));
        assert!(matches!(m.try_mul(&Mat::zeros(3, 1)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn poly_matrix_product_and_evaluation() {
        let vars = Vars::principal(1);
        let q = Poly::<Coeff>::var(vars, 0);
        let p = Poly::<Coeff>::var(vars, 1);
        let m = PolyMatrix::from_fn(vars, 2, 2, |i, j| if i == j { q.clone() } else { p.clone() });
        let sq = m.try_mul(&m).unwrap();
        assert_eq!(*sq.get(0, 0), &q.pow(2) + &p.pow(2));
        let at = sq.evaluate(&[Coeff::integer(1), Coeff::integer(2)]).unwrap();
        assert_eq!(*at.get(0, 1), Coeff::integer(4));
    }

    #[test]
    fn identity_substitution() {
        let vars = Vars::principal(1);
        let q = Poly::<Coeff>::var(vars, 0);
        let p = Poly::<Coeff>::var(vars, 1);
        let f = vec![&q + &p.pow(2), p.clone()];
        assert_eq!(compose_map(&f, &identity_map(vars, 2)).unwrap(), f);
    }
}
