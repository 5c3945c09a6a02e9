//! Hamiltonian calculus in canonical coordinates `(q1..qn, p1..pn)` with
//! `J = [[0, I], [-I, 0]]` and `X = J∇H`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::{Coeff, FieldSpec, Mat, Poly, PolyMatrix, PolyVec, Scalar, Vars};

/// Default bound on the number of Lie-series terms.
pub const LIE_CAP: usize = 64;

/// A polynomial Hamiltonian on `R^2n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian<C = Coeff> {
    n: usize,
    h: Poly<C>,
}

impl<C: Scalar> Hamiltonian<C> {
    pub fn new(n: usize, h: Poly<C>) -> Result<Self> {
        if n == 0 || h.vars() != Vars::principal(n) {
            return Err(Error::ShapeMismatch(format!(
                "Hamiltonian for n={n} given a polynomial in {} variables",
                h.nvars()
            )));
        }
        Ok(Hamiltonian { n, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly<C> {
        &self.h
    }

    pub fn vars(&self) -> Vars {
        self.h.vars()
    }

    pub fn vector_field(&self) -> PolyVec<C> {
        vector_field(&self.h)
    }

    pub fn gradient(&self) -> PolyVec<C> {
        (0..2 * self.n).map(|i| self.h.d(i)).collect()
    }

    pub fn hessian(&self) -> PolyMatrix<C> {
        jacobian(&self.gradient()).expect("gradient has 2n entries")
    }

    /// `DX = Jℍ`.
    pub fn dx(&self) -> PolyMatrix<C> {
        jacobian(&self.vector_field()).expect("vector field has 2n entries")
    }

    pub fn blocks(&self) -> HessianBlocks<PolyMatrix<C>> {
        let hess = self.hessian();
        let n = self.n;
        HessianBlocks { a: hess.block(n, n, n, n), b: hess.block(0, 0, n, n), z: hess.block(0, n, n, n) }
    }

    pub fn blocks_at(&self, x: &[C]) -> Result<HessianBlocks<Mat<C>>> {
        let hess = self.hessian().evaluate(x)?;
        let n = self.n;
        Ok(HessianBlocks { a: hess.block(n, n, n, n), b: hess.block(0, 0, n, n), z: hess.block(0, n, n, n) })
    }

    pub fn degree(&self) -> Option<u32> {
        self.h.degree()
    }

    pub fn is_homogeneous(&self) -> bool {
        !self.h.is_zero() && self.h.is_homogeneous()
    }
}

impl Hamiltonian<Coeff> {
    pub fn parse(text: &str, n: usize, field: FieldSpec) -> Result<Self> {
        Hamiltonian::new(n, crate::polycore::parse(text, n, field)?)
    }

    pub fn to_float(&self) -> Hamiltonian<f64> {
        Hamiltonian { n: self.n, h: self.h.to_float() }
    }
}

/// Blocks of `ℍ = [[B, Z], [Zᵀ, A]]`: `A = ∂p∂p H`, `B = ∂q∂q H`, `Z = ∂q∂p H`.
#[derive(Clone, Debug, PartialEq)]
pub struct HessianBlocks<M> {
    pub a: M,
    pub b: M,
    pub z: M,
}

impl<C: Scalar> HessianBlocks<Mat<C>> {
    pub fn hessian(&self) -> Mat<C> {
        Mat::from_blocks(&self.b, &self.z, &self.z.transpose(), &self.a)
    }

    /// `DX = [[Zᵀ, A], [-B, -Z]]`.
    pub fn dx(&self) -> Mat<C> {
        Mat::from_blocks(&self.z.transpose(), &self.a, &-&self.b, &-&self.z)
    }
}

/// `X = (∂H/∂p, -∂H/∂q)` for a polynomial whose layout has `n > 0`.
/// Auxiliary variables (such as `t`) are treated as parameters.
pub fn vector_field<C: Scalar>(h: &Poly<C>) -> PolyVec<C> {
    let n = h.vars().n();
    let mut x: PolyVec<C> = (0..n).map(|i| h.d(n + i)).collect();
    x.extend((0..n).map(|i| h.d(i).neg()));
    x
}

/// Jacobian with respect to the first `f.len()` variables.
pub fn jacobian<C: Scalar>(f: &[Poly<C>]) -> Result<PolyMatrix<C>> {
    jacobian_block(f, 0)
}

/// Jacobian with respect to variables `offset .. offset + f.len()`.
pub fn jacobian_block<C: Scalar>(f: &[Poly<C>], offset: usize) -> Result<PolyMatrix<C>> {
    let vars = f.first().map(|p| p.vars()).ok_or_else(|| Error::ShapeMismatch("empty map".into()))?;
    let m = f.len();
    if f.iter().any(|p| p.vars() != vars) || offset + m > vars.count() {
        return Err(Error::ShapeMismatch(format!(
            "map with {m} entries over {} variables",
            vars.count()
        )));
    }
    Ok(PolyMatrix::from_fn(vars, m, m, |i, j| f[i].d(offset + j)))
}

pub fn hessian<C: Scalar>(h: &Hamiltonian<C>) -> PolyMatrix<C> {
    h.hessian()
}

/// `{F, G} = Σ ∂F/∂q_j ∂G/∂p_j - ∂F/∂p_j ∂G/∂q_j` over the principal variables.
pub fn poisson<C: Scalar>(f: &Poly<C>, g: &Poly<C>) -> Result<Poly<C>> {
    if f.vars() != g.vars() {
        return Err(Error::ShapeMismatch("bracket of polynomials over different layouts".into()));
    }
    let n = f.vars().n();
    if n == 0 {
        return Err(Error::ShapeMismatch("bracket needs a phase-space layout".into()));
    }
    let mut acc = Poly::zero(f.vars());
    for j in 0..n {
        let (fq, fp) = (f.d(j), f.d(n + j));
        if !fq.is_zero() {
            acc = &acc + &(&fq * &g.d(n + j));
        }
        if !fp.is_zero() {
            acc = &acc - &(&fp * &g.d(j));
        }
    }
    Ok(acc)
}

/// Matrix `E` of the bracket of the quadratic forms `½xᵀFx` and `½xᵀGx`,
/// so that `{½xᵀFx, ½xᵀGx} = ½xᵀEx`. Equivalently `JE = (JF)(JG) - (JG)(JF)`.
pub fn quad_bracket<C: Scalar>(f: &Mat<C>, g: &Mat<C>) -> Result<Mat<C>> {
    if f.shape() != g.shape() || !f.is_square() || !f.rows().is_multiple_of(2) {
        return Err(Error::ShapeMismatch("quad_bracket needs two 2n x 2n matrices".into()));
    }
    let tol = 1e-12 * f.max_abs().max(g.max_abs()).max(1.0);
    if !f.is_symmetric(tol) || !g.is_symmetric(tol) {
        return Err(Error::AsymmetricInput);
    }
    let j = Mat::j(f.rows() / 2);
    let fjg = &(f * &j) * g;
    let gjf = &(g * &j) * f;
    Ok(&fjg - &gjf)
}

/// The quadratic form `½xᵀMx` over the principal variables of `vars`.
pub fn quadratic_form<C: Scalar>(vars: Vars, m: &Mat<C>) -> Poly<C> {
    let half = C::from_ratio(1, 2);
    let mut acc = Poly::zero(vars);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let c = m.get(i, j);
            if !c.is_zero() {
                let term = &Poly::var(vars, i) * &Poly::var(vars, j);
                acc = &acc + &term.scale(&c.times(&half));
            }
        }
    }
    acc
}

/// `e^{t[[H]]} f = Σ t^k/k! [[H]]^k f` with `[[H]]f = {f, H}`.
///
/// `t` may be a constant or a polynomial (e.g. a flow-parameter variable); it must share
/// the layout of `h` and `f`.
pub fn lie_exp<C: Scalar>(h: &Poly<C>, f: &Poly<C>, t: &Poly<C>) -> Result<Poly<C>> {
    lie_exp_capped(h, f, t, LIE_CAP)
}

pub fn lie_exp_capped<C: Scalar>(h: &Poly<C>, f: &Poly<C>, t: &Poly<C>, cap: usize) -> Result<Poly<C>> {
    if h.vars() != f.vars() || t.vars() != f.vars() {
        return Err(Error::ShapeMismatch("lie_exp operands over different layouts".into()));
    }
    let mut acc = f.clone();
    let mut term = f.clone();
    let mut tk = Poly::one(f.vars());
    for k in 1..=cap {
        term = poisson(&term, h)?;
        if term.is_zero() {
            return Ok(acc);
        }
        tk = &tk * t;
        let coef = C::from_ratio(1, k as i64);
        tk = tk.scale(&coef);
        acc = &acc + &(&tk * &term);
    }
    Err(Error::NonNilpotent { cap })
}

/// The map `I + tX` over the layout of `t`.
pub fn linear_flow<C: Scalar>(h: &Hamiltonian<C>, t: &Poly<C>) -> Result<PolyVec<C>> {
    let vars = t.vars();
    if vars.n() != h.n() {
        return Err(Error::ShapeMismatch("flow parameter over a different phase space".into()));
    }
    h.vector_field()
        .iter()
        .enumerate()
        .map(|(i, xi)| Ok(&Poly::var(vars, i) + &(t * &xi.embed(vars, 0))))
        .collect()
}

/// Exact check of `DFᵀ J DF = J`; returns the residual `DFᵀ J DF - J`.
pub fn is_symplectic<C: Scalar>(f: &[Poly<C>]) -> Result<(bool, PolyMatrix<C>)> {
    if !f.len().is_multiple_of(2) || f.is_empty() {
        return Err(Error::ShapeMismatch(format!("map with {} entries", f.len())));
    }
    let df = jacobian(f)?;
    let vars = df.vars();
    let j = PolyMatrix::constant(vars, &Mat::j(f.len() / 2));
    let res = df.transpose().try_mul(&j)?.try_mul(&df)?.try_sub(&j)?;
    let ok = if C::EXACT { res.is_zero() } else { res.entries().iter().all(|p| p.max_abs_coeff() <= 1e-9) };
    Ok((ok, res))
}

/// Whether `UᵀJU = J` (exactly, or within `tol` for floats).
pub fn is_symplectic_matrix<C: Scalar>(u: &Mat<C>, tol: f64) -> bool {
    if !u.is_square() || !u.rows().is_multiple_of(2) {
        return false;
    }
    let j = Mat::j(u.rows() / 2);
    (&(&u.transpose() * &j) * u).try_sub(&j).is_ok_and(|r| r.is_negligible(tol))
}

/// `H ∘ U`, i.e. `x ↦ H(Ux)`.
pub fn apply_linear<C: Scalar>(h: &Hamiltonian<C>, u: &Mat<C>, tol: f64) -> Result<Hamiltonian<C>> {
    if u.shape() != (2 * h.n(), 2 * h.n()) {
        return Err(Error::ShapeMismatch(format!("{}x{} matrix for n={}", u.rows(), u.cols(), h.n())));
    }
    if !is_symplectic_matrix(u, tol) {
        return Err(Error::NotSymplectic);
    }
    let out = substitute_linear(h.poly(), u)?;
    Hamiltonian::new(h.n(), out.prune(tol * h.poly().max_abs_coeff().max(1.0)))
}

/// `P(Ux)` for a square matrix `U` acting on the first `U.rows()` variables.
pub fn substitute_linear<C: Scalar>(p: &Poly<C>, u: &Mat<C>) -> Result<Poly<C>> {
    let vars = p.vars();
    let m = u.rows();
    let mut subs: PolyVec<C> = (0..m)
        .map(|i| {
            let mut acc = Poly::zero(vars);
            for j in 0..u.cols() {
                let c = u.get(i, j);
                if !c.is_zero() {
                    acc = &acc + &Poly::var(vars, j).scale(c);
                }
            }
            acc
        })
        .collect();
    subs.extend((m..vars.count()).map(|i| Poly::var(vars, i)));
    p.compose(&subs)
}

/// A unitary matrix `U = [[S, T], [-T, S]]` (orthogonal and symplectic).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Unitary<C: Scalar = Coeff> {
    #[serde(rename = "S")]
    pub s: Mat<C>,
    #[serde(rename = "T")]
    pub t: Mat<C>,
}

impl<C: Scalar> Unitary<C> {
    pub fn new(s: Mat<C>, t: Mat<C>) -> Self {
        assert_eq!(s.shape(), t.shape(), "S and T shapes");
        Unitary { s, t }
    }

    pub fn identity(n: usize) -> Self {
        Unitary { s: Mat::identity(n), t: Mat::zeros(n, n) }
    }

    /// `S = 0, T = I`, i.e. `U = J`.
    pub fn quarter_turn(n: usize) -> Self {
        Unitary { s: Mat::zeros(n, n), t: Mat::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.s.rows()
    }

    pub fn matrix(&self) -> Mat<C> {
        Mat::from_blocks(&self.s, &self.t, &-&self.t, &self.s)
    }

    /// `U⁻¹ = Uᵀ`.
    pub fn inverse(&self) -> Self {
        Unitary { s: self.s.transpose(), t: -&self.t.transpose() }
    }

    /// `(UV)` as a unitary.
    pub fn then(&self, v: &Unitary<C>) -> Self {
        let s = &(&self.s * &v.s) - &(&self.t * &v.t);
        let t = &(&self.s * &v.t) + &(&self.t * &v.s);
        Unitary { s, t }
    }

    /// Largest entry of `SᵀS + TᵀT - I` and `SᵀT - TᵀS`.
    pub fn defect(&self) -> f64 {
        let n = self.n();
        let a = &(&(&self.s.transpose() * &self.s) + &(&self.t.transpose() * &self.t)) - &Mat::identity(n);
        let b = &(&self.s.transpose() * &self.t) - &(&self.t.transpose() * &self.s);
        a.max_abs().max(b.max_abs())
    }

    pub fn is_exactly_unitary(&self) -> bool
    where
        C: Scalar,
    {
        let n = self.n();
        let a = &(&(&self.s.transpose() * &self.s) + &(&self.t.transpose() * &self.t)) - &Mat::identity(n);
        let b = &(&self.s.transpose() * &self.t) - &(&self.t.transpose() * &self.s);
        a.is_zero() && b.is_zero()
    }
}

impl Unitary<Coeff> {
    pub fn to_float(&self) -> Unitary<f64> {
        Unitary { s: self.s.to_f64(), t: self.t.to_f64() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ham(s: &str, n: usize) -> Hamiltonian {
        Hamiltonian::parse(s, n, FieldSpec::Sqrt(3)).unwrap()
    }

    fn poly(s: &str, n: usize) -> Poly<Coeff> {
        crate::polycore::parse(s, n, FieldSpec::Sqrt(3)).unwrap()
    }

    #[test]
    fn vector_fields() {
        assert_eq!(ham("p1^2", 1).vector_field(), vec![poly("2*p1", 1), poly("0", 1)]);
        assert_eq!(ham("q1^2", 1).vector_field(), vec![poly("0", 1), poly("-2*q1", 1)]);
    }

    #[test]
    fn hessian_of_q1p1() {
        let h = ham("q1*p1", 1);
        let at = h.hessian().evaluate(&[Coeff::integer(3), Coeff::integer(-1)]).unwrap();
        assert_eq!(at, Mat::from_rows(vec![vec![Coeff::zero(), Coeff::one()], vec![Coeff::one(), Coeff::zero()]]));
        let blocks = h.blocks_at(&[Coeff::zero(), Coeff::zero()]).unwrap();
        assert_eq!(*blocks.z.get(0, 0), Coeff::one());
        assert!(blocks.a.is_zero() && blocks.b.is_zero());
        assert_eq!(blocks.hessian(), at);
    }

    #[test]
    fn brackets() {
        assert_eq!(poisson(&poly("q1", 1), &poly("p1", 1)).unwrap(), poly("1", 1));
        assert_eq!(poisson(&poly("q1*p1", 1), &poly("p1^2", 1)).unwrap(), poly("2*p1^2", 1));
    }

    #[test]
    fn quadratic_bracket_matches_poisson() {
        let f = Mat::from_rows(vec![vec![Coeff::integer(2), Coeff::zero()], vec![Coeff::zero(), Coeff::zero()]]);
        let g = Mat::from_rows(vec![vec![Coeff::zero(), Coeff::zero()], vec![Coeff::zero(), Coeff::integer(2)]]);
        let e = quad_bracket(&f, &g).unwrap();
        let vars = Vars::principal(1);
        assert_eq!(quadratic_form(vars, &e), poly("4*q1*p1", 1));
        assert!(quad_bracket(&f, &f).unwrap().is_zero());
        let asym = Mat::from_rows(vec![vec![Coeff::zero(), Coeff::one()], vec![Coeff::zero(), Coeff::zero()]]);
        assert_eq!(quad_bracket(&asym, &g), Err(Error::AsymmetricInput));
    }

    #[test]
    fn lie_series() {
        let one = Poly::one(Vars::principal(1));
        assert_eq!(lie_exp(&poly("p1^2", 1), &poly("q1", 1), &one).unwrap(), poly("q1 + 2*p1", 1));
        assert_eq!(lie_exp(&poly("q1^2", 1), &poly("q1", 1), &one).unwrap(), poly("q1", 1));
        assert_eq!(lie_exp(&poly("q1*p1", 1), &poly("7", 1), &one).unwrap(), poly("7", 1));
        assert_eq!(
            lie_exp(&poly("q1*p1", 1), &poly("q1", 1), &one),
            Err(Error::NonNilpotent { cap: LIE_CAP })
        );
    }

    #[test]
    fn flows_and_symplecticity() {
        let h = ham("p1^2", 1);
        let half = Poly::constant(Vars::principal(1), Coeff::ratio(1, 2));
        let f = linear_flow(&h, &half).unwrap();
        assert_eq!(f, vec![poly("q1 + p1", 1), poly("p1", 1)]);
        assert!(is_symplectic(&f).unwrap().0);
        let zero = Poly::zero(Vars::principal(1));
        assert_eq!(linear_flow(&h, &zero).unwrap(), vec![poly("q1", 1), poly("p1", 1)]);
        let (ok, res) = is_symplectic(&[poly("2*q1", 1), poly("p1", 1)]).unwrap();
        assert!(!ok && !res.is_zero());
    }

    #[test]
    fn quarter_turn_swaps_blocks() {
        let h = ham("p1^2", 1);
        let u = Unitary::<Coeff>::quarter_turn(1).matrix();
        assert_eq!(apply_linear(&h, &u, 0.0).unwrap().poly(), &poly("q1^2", 1));
        assert_eq!(apply_linear(&h, &Mat::identity(2), 0.0).unwrap(), h);
        let scale = Mat::diag(&[Coeff::integer(2), Coeff::integer(1)]);
        assert_eq!(apply_linear(&h, &scale, 0.0), Err(Error::NotSymplectic));
    }

    #[test]
    fn unitary_inverse() {
        let u = Unitary::new(
            Mat::diag(&[Coeff::ratio(3, 5), Coeff::one()]),
            Mat::diag(&[Coeff::ratio(4, 5), Coeff::zero()]),
        );
        assert!(u.is_exactly_unitary());
        assert_eq!(&u.matrix() * &u.inverse().matrix(), Mat::identity(4));
        assert!(is_symplectic_matrix(&u.matrix(), 0.0));
    }
}
