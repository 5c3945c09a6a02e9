//! Unitary normal forms: pointwise, seminormal (ζ), shear conjugators and the
//! simple form `K(p̄) + Σ Q_i V_i(p̄) + Σ P_i W_i(p̄)`.

use serde::Serialize;

use crate::classify::{coefficient_matrices, is_affine_integrable, is_nondegenerate, is_shear, is_triple_nilpotent, Tri};
use crate::error::{Error, Result};
use crate::hamalg::{substitute_linear, Hamiltonian, Unitary};
use crate::linalg::{inverse, nullspace, rref, singular_values, sym_eigen};
use crate::polycore::{Coeff, Mat, Monomial, Poly, PolyVec, Scalar, Vars};
use crate::sampling::SampleBudget;

pub const DEFAULT_TOL: f64 = 1e-9;

fn dot<C: Scalar>(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).fold(C::zero(), |acc, (x, y)| acc.plus(&x.times(y)))
}

/// `Jv` for `v = (v_q, v_p)`: `(v_p, -v_q)`.
fn j_apply<C: Scalar>(v: &[C]) -> Vec<C> {
    let n = v.len() / 2;
    v[n..].iter().cloned().chain(v[..n].iter().map(|c| c.negated())).collect()
}

/// Square roots for Gram-Schmidt: exact in one quadratic field, or plain `f64`.
pub(crate) trait Roots<C> {
    fn sqrt(&mut self, c: &C) -> Option<C>;
}

pub(crate) struct FloatRoots;

impl Roots<f64> for FloatRoots {
    fn sqrt(&mut self, c: &f64) -> Option<f64> {
        (*c >= 0.0).then(|| c.sqrt())
    }
}

/// Exact roots inside `Q(√d)`. A rational problem adopts the radicand of the first
/// irrational root it needs; after that the field is fixed.
pub(crate) struct FieldRoots {
    pub radicand: Option<u32>,
}

impl Roots<Coeff> for FieldRoots {
    fn sqrt(&mut self, c: &Coeff) -> Option<Coeff> {
        if let Some(r) = c.sqrt_in_field(self.radicand) {
            if !r.is_rational() {
                self.radicand = Some(r.radicand());
            }
            return Some(r);
        }
        if self.radicand.is_none() {
            let d = c.square_class()?;
            let r = c.sqrt_in_field(Some(d))?;
            self.radicand = Some(d);
            return Some(r);
        }
        None
    }
}

fn negligible<C: Scalar>(v: &[C], scale: f64) -> bool {
    if C::EXACT {
        v.iter().all(|c| c.is_zero())
    } else {
        v.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max) <= 1e-8 * scale.max(1.0)
    }
}

/// Orthonormalize `vectors` against `frame` (already orthonormal), appending survivors.
/// With `symplectic`, each accepted `v` also appends `Jv`. Returns the accepted `v`s, or
/// `None` if a square root leaves the field.
fn extend_orthonormal<C: Scalar>(
    frame: &mut Vec<Vec<C>>,
    vectors: &[Vec<C>],
    symplectic: bool,
    limit: usize,
    roots: &mut dyn Roots<C>,
) -> Option<Vec<Vec<C>>> {
    let mut accepted = Vec::new();
    for v in vectors {
        if accepted.len() == limit {
            break;
        }
        let scale = v.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        let mut w = v.clone();
        // two passes keep the float version orthogonal to rounding level
        for _ in 0..if C::EXACT { 1 } else { 2 } {
            for f in frame.iter() {
                let c = dot(&w, f);
                if !c.is_zero() {
                    w = w.iter().zip(f).map(|(a, b)| a.minus(&c.times(b))).collect();
                }
            }
        }
        if negligible(&w, scale) {
            continue;
        }
        let norm = roots.sqrt(&dot(&w, &w))?;
        let inv = norm.recip()?;
        let w: Vec<C> = w.iter().map(|c| c.times(&inv)).collect();
        if symplectic {
            frame.push(j_apply(&w));
        }
        frame.push(w.clone());
        accepted.push(w);
    }
    Some(accepted)
}

fn standard_basis<C: Scalar>(dim: usize) -> Vec<Vec<C>> {
    (0..dim)
        .map(|k| (0..dim).map(|i| if i == k { C::one() } else { C::zero() }).collect())
        .collect()
}

/// Complete an orthonormal isotropic family `us` to `n` vectors with `{u_i, Ju_i}` orthonormal.
fn complete_lagrangian<C: Scalar>(us: Vec<Vec<C>>, n: usize, roots: &mut dyn Roots<C>) -> Option<Vec<Vec<C>>> {
    let mut frame: Vec<Vec<C>> = us.iter().flat_map(|u| [u.clone(), j_apply(u)]).collect();
    let need = n - us.len();
    let extra = extend_orthonormal(&mut frame, &standard_basis(2 * n), true, need, roots)?;
    let mut out = us;
    out.extend(extra);
    (out.len() == n).then_some(out)
}

/// `U = [Ju_1 … Ju_n, u_1 … u_n]`: `T` holds the upper halves of the `u_j`, `S` the lower.
fn unitary_from_columns<C: Scalar>(us: &[Vec<C>]) -> Unitary<C> {
    let n = us.len();
    let t = Mat::from_fn(n, n, |i, j| us[j][i].clone());
    let s = Mat::from_fn(n, n, |i, j| us[j][n + i].clone());
    Unitary::new(s, t)
}

/// Unitary whose `u`-columns come from J-invariant Gram-Schmidt on `vectors`, completed
/// by the standard basis.
pub fn unitary_from_frame(vectors: &[Vec<f64>], n: usize) -> Option<Unitary<f64>> {
    let us = extend_orthonormal(&mut Vec::new(), vectors, true, n, &mut FloatRoots)?;
    complete_lagrangian(us, n, &mut FloatRoots).map(|us| unitary_from_columns(&us))
}

/// Nonzero rows of the reduced echelon form of the matrix whose rows are `vectors`.
fn canonical_basis<C: Scalar>(vectors: &[Vec<C>], dim: usize, tol: f64) -> Vec<Vec<C>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Mat::from_rows(vectors.to_vec());
    let r = rref(&m, tol);
    (0..r.pivots.len()).map(|i| (0..dim).map(|j| r.m.get(i, j).clone()).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PointwiseNormal {
    pub u: Unitary<f64>,
    /// Diagonal of the `A` block; zeros after the first `rank` entries.
    pub a: Vec<f64>,
    pub rank: usize,
    pub residual: f64,
}

/// Unitary `U` with `UᵀℍU = [[0,0],[0,A]]`, `A` diagonal, at a point where `ℍJℍ = 0`.
pub fn pointwise_normal_form<C: Scalar>(h: &Hamiltonian<C>, x: &[C], tol: f64) -> Result<PointwiseNormal> {
    let n = h.n();
    let m = h.hessian().evaluate(x)?;
    let mjm = &(&m * &Mat::j(n)) * &m;
    let scale = m.max_abs().max(1.0);
    let bad = if C::EXACT { !mjm.is_zero() } else { mjm.max_abs() > tol * scale * scale };
    if bad {
        return Err(Error::PreconditionMJM);
    }
    let mf = m.to_f64();
    let (vals, vecs) = sym_eigen(&mf)?;
    let picked: Vec<usize> = (0..2 * n).filter(|&k| vals[k].abs() > tol * scale).collect();
    if picked.len() > n {
        return Err(Error::NumericFailure(format!("{} nonzero eigenvalues exceed n = {n}", picked.len())));
    }
    let mut us: Vec<Vec<f64>> = Vec::new();
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for &k in &picked {
        let got = extend_orthonormal(&mut frame, &[vecs.col(k)], true, 1, &mut FloatRoots).unwrap_or_default();
        if got.is_empty() {
            return Err(Error::NumericFailure("eigenvectors are not isotropic".into()));
        }
        us.extend(got);
    }
    let rank = us.len();
    let mut a: Vec<f64> = picked.iter().map(|&k| vals[k]).collect();
    let us = complete_lagrangian(us, n, &mut FloatRoots)
        .ok_or_else(|| Error::NumericFailure("symplectic completion failed".into()))?;
    a.resize(n, 0.0);
    let u = unitary_from_columns(&us);
    let um = u.matrix();
    let target = Mat::from_blocks(&Mat::zeros(n, n), &Mat::zeros(n, n), &Mat::zeros(n, n), &Mat::diag(&a));
    let conj = &(&um.transpose() * &mf) * &um;
    let dx = &Mat::j(n) * &mf;
    let dxn = &(&um.transpose() * &dx) * &um;
    let dx_target = Mat::from_blocks(&Mat::zeros(n, n), &Mat::diag(&a), &Mat::zeros(n, n), &Mat::zeros(n, n));
    let residual = (&conj - &target).max_abs().max((&dxn - &dx_target).max_abs());
    if residual > 1e3 * tol * scale {
        return Err(Error::NumericFailure(format!("pointwise residual {residual:.3e}")));
    }
    Ok(PointwiseNormal { u, a, rank, residual })
}

/// `ζ = Z A⁻¹` at `x`, checked for invertibility of `A` and symmetry of `ζ`.
pub fn zeta_at<C: Scalar>(h: &Hamiltonian<C>, x: &[C], tol: f64) -> Result<Mat<C>> {
    let blocks = h.blocks_at(x)?;
    if !C::EXACT {
        let sv = singular_values(&blocks.a.to_f64());
        let (hi, lo) = (sv.first().copied().unwrap_or(0.0), sv.last().copied().unwrap_or(0.0));
        if hi == 0.0 || lo < 1e-10 * hi {
            return Err(Error::SingularA);
        }
    }
    let ainv = inverse(&blocks.a, 1e-14).ok_or(Error::SingularA)?;
    let zeta = &blocks.z * &ainv;
    let asym = zeta.asymmetry();
    let bad = if C::EXACT { !(&zeta - &zeta.transpose()).is_zero() } else { asym > tol * zeta.max_abs().max(1.0) };
    if bad {
        return Err(Error::AsymmetricZeta { asymmetry: asym });
    }
    Ok(zeta)
}

#[derive(Clone, Debug, Serialize)]
pub struct SemiNormal<C: Scalar> {
    pub point: Vec<C>,
    pub zeta: Mat<C>,
    pub theta: Mat<f64>,
    pub u: Unitary<f64>,
    /// Largest entry of the `Z` block of `UᵀℍU`.
    pub residual_z: f64,
    /// Largest entry of the `B` block of `UᵀℍU`.
    pub residual_b: f64,
    /// `B = Zζ` at the point.
    pub b_equals_z_zeta: bool,
}

/// Seminormal form at `x`: `S = cos θ`, `T = sin θ` with `tan θ = ζ`.
pub fn seminormal_at<C: Scalar>(h: &Hamiltonian<C>, x: &[C], tol: f64) -> Result<SemiNormal<C>> {
    let n = h.n();
    let zeta = zeta_at(h, x, tol)?;
    let blocks = h.blocks_at(x)?;
    let zf = zeta.to_f64();
    let zs = Mat::from_fn(n, n, |i, j| 0.5 * (zf.get(i, j) + zf.get(j, i)));
    let (vals, v) = sym_eigen(&zs)?;
    let conj = |f: &dyn Fn(f64) -> f64| {
        let d: Vec<f64> = vals.iter().map(|&l| f(l)).collect();
        &(&v * &Mat::diag(&d)) * &v.transpose()
    };
    let theta = conj(&|l: f64| l.atan());
    let s = conj(&|l: f64| l.atan().cos());
    let t = conj(&|l: f64| l.atan().sin());
    let u = Unitary::new(s, t);
    let hf = blocks.hessian().to_f64();
    let um = u.matrix();
    let r = &(&um.transpose() * &hf) * &um;
    let residual_z = r.block(0, n, n, n).max_abs();
    let residual_b = r.block(0, 0, n, n).max_abs();
    let scale = hf.max_abs().max(1.0);
    if residual_z.max(residual_b) > 1e3 * tol * scale {
        return Err(Error::NumericFailure(format!(
            "seminormal residuals Z {residual_z:.3e}, B {residual_b:.3e}"
        )));
    }
    let bz = &blocks.b - &(&blocks.z * &zeta);
    let b_equals_z_zeta = if C::EXACT { bz.is_zero() } else { bz.max_abs() <= tol * scale };
    Ok(SemiNormal { point: x.to_vec(), zeta, theta, u, residual_z, residual_b, b_equals_z_zeta })
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaScan<C: Scalar> {
    pub constant: bool,
    pub base: Vec<C>,
    pub base_zeta: Mat<C>,
    pub samples: usize,
    pub max_variation: f64,
    /// A neighbour where `ζ` differs from its base value.
    pub witness: Option<Vec<C>>,
}

/// Compare `ζ` at a base point with `ζ` at nearby sample points `x0 + εr`.
pub fn zeta_constancy_scan<C: Scalar>(h: &Hamiltonian<C>, budget: &SampleBudget, tol: f64) -> Result<ZetaScan<C>> {
    let dim = 2 * h.n();
    let pts: Vec<Vec<C>> = budget.points(dim).iter().map(|p| p.iter().map(C::from_coeff).collect()).collect();
    let (base, base_zeta) = pts
        .iter()
        .find_map(|p| zeta_at(h, p, tol).ok().map(|z| (p.clone(), z)))
        .ok_or(Error::NoValidPoint)?;
    let eps = C::from_ratio(1, 64);
    let scale = base_zeta.max_abs().max(1.0);
    let mut samples = 0;
    let mut max_variation: f64 = 0.0;
    let mut witness = None;
    for r in pts.iter().skip(budget.grid).take(24) {
        let y: Vec<C> = base.iter().zip(r).map(|(b, d)| b.plus(&eps.times(d))).collect();
        let Ok(z) = zeta_at(h, &y, tol) else { continue };
        samples += 1;
        let diff = &z - &base_zeta;
        let moved = if C::EXACT { !diff.is_zero() } else { diff.max_abs() > tol * scale };
        max_variation = max_variation.max(diff.max_abs());
        if moved && witness.is_none() {
            witness = Some(y);
        }
    }
    Ok(ZetaScan { constant: witness.is_none(), base, base_zeta, samples, max_variation, witness })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShearConjugator {
    /// Whether `U` and `K` are exact field elements.
    pub exact: bool,
    pub u: Unitary<f64>,
    pub k: Poly<f64>,
    #[serde(skip)]
    pub u_exact: Option<Unitary<Coeff>>,
    #[serde(skip)]
    pub k_exact: Option<Poly<Coeff>>,
    pub range_dim: usize,
    /// Largest `q`-dependent coefficient left in `H ∘ U`.
    pub q_residual: f64,
}

/// Constant unitary `U` with `H ∘ U` independent of `q`, for a shear `H`.
pub fn shear_conjugator(h: &Hamiltonian, budget: &SampleBudget) -> Result<ShearConjugator> {
    if is_shear(h, budget)?.verdict != Tri::Yes {
        return Err(Error::NotAShear);
    }
    let n = h.n();
    let mats = coefficient_matrices(&h.hessian());
    let cols: Vec<Vec<Coeff>> = mats.iter().flat_map(|m| (0..m.cols()).map(|j| m.col(j))).collect();
    let basis = canonical_basis(&cols, 2 * n, 0.0);
    let range_dim = basis.len();
    let mut roots = FieldRoots { radicand: Some(h.poly().field_radicand()).filter(|&r| r != 0) };
    let exact = extend_orthonormal(&mut Vec::new(), &basis, true, n, &mut roots)
        .and_then(|us| complete_lagrangian(us, n, &mut roots));
    if let Some(us) = exact {
        let u = unitary_from_columns(&us);
        let k = substitute_linear(h.poly(), &u.matrix())?;
        if (0..n).any(|i| k.depends_on(i)) {
            return Err(Error::VerificationFailed("conjugated shear still depends on q".into()));
        }
        return Ok(ShearConjugator {
            exact: true,
            u: u.to_float(),
            k: k.to_float(),
            u_exact: Some(u),
            k_exact: Some(k),
            range_dim,
            q_residual: 0.0,
        });
    }
    let fbasis: Vec<Vec<f64>> = basis.iter().map(|v| v.iter().map(|c| c.to_f64()).collect()).collect();
    let us = extend_orthonormal(&mut Vec::new(), &fbasis, true, n, &mut FloatRoots)
        .and_then(|us| complete_lagrangian(us, n, &mut FloatRoots))
        .ok_or_else(|| Error::NumericFailure("range basis is not isotropic".into()))?;
    let u = unitary_from_columns(&us);
    let hf = h.poly().to_float();
    let full = substitute_linear(&hf, &u.matrix())?.prune(1e-12 * hf.max_abs_coeff().max(1.0));
    let q_part = full.filter_terms(|m| (0..n).any(|i| m.exp(i) > 0));
    let q_residual = q_part.max_abs_coeff();
    if q_residual > DEFAULT_TOL * hf.max_abs_coeff().max(1.0) {
        return Err(Error::NumericFailure(format!("q-dependent residue {q_residual:.3e}")));
    }
    let k = full.filter_terms(|m| (0..n).all(|i| m.exp(i) == 0));
    Ok(ShearConjugator { exact: false, u, k, u_exact: None, k_exact: None, range_dim, q_residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionPath {
    /// Signed quarter turns and a permutation.
    Structural,
    /// Exact orthonormal frames in a quadratic field.
    ExactUnitary,
    /// Floating-point frames.
    FloatUnitary,
}

/// `K(p̄) + Σ_{i<d} (q_i V_i(p̄) + p_i W_i(p̄))` over `n` degrees of freedom, with
/// `p̄ = (p_{d+1}, …, p_n)`, together with the unitary `U` such that `H ∘ U` equals it.
#[derive(Clone, Debug, Serialize)]
pub struct SimpleForm<C: Scalar> {
    pub n: usize,
    pub d: usize,
    pub k: Poly<C>,
    pub v: PolyVec<C>,
    pub w: PolyVec<C>,
    pub u: Unitary<C>,
    /// Largest coefficient of `H ∘ U` minus the reassembled form.
    pub residual: f64,
    pub path: ReductionPath,
}

impl<C: Scalar> SimpleForm<C> {
    /// A simple form with `U = I`. `K`, `V`, `W` must live over `principal(n)` and depend on `p̄` only.
    pub fn new(n: usize, d: usize, k: Poly<C>, v: PolyVec<C>, w: PolyVec<C>) -> Result<Self> {
        if d >= n || v.len() != d || w.len() != d {
            return Err(Error::Precondition(format!("need d < n and d components, got d = {d}, n = {n}")));
        }
        let vars = Vars::principal(n);
        for p in std::iter::once(&k).chain(&v).chain(&w) {
            if p.vars() != vars {
                return Err(Error::ShapeMismatch("simple-form parts must use the principal layout".into()));
            }
            if (0..n + d).any(|i| p.depends_on(i)) {
                return Err(Error::Precondition("K, V, W may depend on p_{d+1..n} only".into()));
            }
        }
        Ok(SimpleForm { n, d, k, v, w, u: Unitary::identity(n), residual: 0.0, path: ReductionPath::Structural })
    }

    pub fn vars(&self) -> Vars {
        Vars::principal(self.n)
    }

    /// `K + Σ q_i V_i + Σ p_i W_i`.
    pub fn reassemble(&self) -> Poly<C> {
        let vars = self.vars();
        let mut out = self.k.clone();
        for i in 0..self.d {
            out = &out + &(&Poly::var(vars, i) * &self.v[i]);
            out = &out + &(&Poly::var(vars, self.n + i) * &self.w[i]);
        }
        out
    }

    pub fn hamiltonian(&self) -> Hamiltonian<C> {
        Hamiltonian::new(self.n, self.reassemble()).expect("principal layout")
    }

    /// `Σ_i (W_i ∂_j V_i - V_i ∂_j W_i)` for each `p̄_j`; zero iff the form is affine-integrable.
    pub fn integrability_residual(&self) -> PolyVec<C> {
        let vars = self.vars();
        (self.n + self.d..2 * self.n)
            .map(|j| {
                let mut acc = Poly::zero(vars);
                for i in 0..self.d {
                    acc = &acc + &(&self.w[i] * &self.v[i].d(j));
                    acc = &acc - &(&self.v[i] * &self.w[i].d(j));
                }
                acc
            })
            .collect()
    }

    pub fn integrability_holds(&self, tol: f64) -> bool {
        self.integrability_residual().iter().all(|p| {
            if C::EXACT {
                p.is_zero()
            } else {
                p.max_abs_coeff() <= tol * self.scale()
            }
        })
    }

    fn scale(&self) -> f64 {
        std::iter::once(&self.k)
            .chain(&self.v)
            .chain(&self.w)
            .map(|p| p.max_abs_coeff())
            .fold(1.0, f64::max)
    }

    /// Rank of the coefficient vectors of `V` (the dimension of its linear span).
    pub fn v_rank(&self, tol: f64) -> usize {
        let m = coefficient_matrix(&self.v);
        if m.cols() == 0 {
            0
        } else {
            crate::linalg::rank(&m, tol)
        }
    }
}

impl SimpleForm<f64> {
    /// Rational approximations of `K`, `V`, `W` with bounded denominators, kept only if every
    /// coefficient moves by at most `tol`. `U` stays in floating point and is not returned.
    pub fn rationalized_parts(&self, max_den: i64, tol: f64) -> Option<SimpleForm<Coeff>> {
        let close = |p: &Poly<f64>| {
            let r = p.rationalize(max_den);
            let back = r.to_float();
            ((&back - p).max_abs_coeff() <= tol).then_some(r)
        };
        let k = close(&self.k)?;
        let v = self.v.iter().map(close).collect::<Option<Vec<_>>>()?;
        let w = self.w.iter().map(close).collect::<Option<Vec<_>>>()?;
        SimpleForm::new(self.n, self.d, k, v, w).ok()
    }
}

/// Rows are the components, columns the monomials appearing anywhere.
fn coefficient_matrix<C: Scalar>(v: &[Poly<C>]) -> Mat<C> {
    let mut monos: Vec<Monomial> = v.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    monos.sort();
    monos.dedup();
    Mat::from_fn(v.len(), monos.len(), |i, j| v[i].coeff(&monos[j]))
}

/// Split `p` into `(K, V, W, leftover)` for the block `Q = q_1..q_d`, `P = p_1..p_d`.
fn decompose<C: Scalar>(p: &Poly<C>, n: usize, d: usize) -> (Poly<C>, PolyVec<C>, PolyVec<C>, Poly<C>) {
    let vars = p.vars();
    let mut k = Poly::zero(vars);
    let mut v = vec![Poly::zero(vars); d];
    let mut w = vec![Poly::zero(vars); d];
    let mut rest = Poly::zero(vars);
    for (m, c) in p.terms() {
        let qbar: u32 = (d..n).map(|i| m.exp(i) as u32).sum();
        let qdeg: u32 = (0..d).map(|i| m.exp(i) as u32).sum();
        let pdeg: u32 = (0..d).map(|i| m.exp(n + i) as u32).sum();
        if qbar > 0 || qdeg + pdeg > 1 {
            rest.add_term(m.clone(), c.clone());
            continue;
        }
        let strip = |idx: usize| {
            let mut e = m.exps().to_vec();
            e[idx] -= 1;
            Monomial::new(e)
        };
        if let Some(i) = (0..d).find(|&i| m.exp(i) == 1) {
            v[i].add_term(strip(i), c.clone());
        } else if let Some(i) = (0..d).find(|&i| m.exp(n + i) == 1) {
            w[i].add_term(strip(n + i), c.clone());
        } else {
            k.add_term(m.clone(), c.clone());
        }
    }
    (k, v, w, rest)
}

pub enum Reduction {
    Exact(SimpleForm<Coeff>),
    Float(SimpleForm<f64>),
}

impl Reduction {
    pub fn d(&self) -> usize {
        match self {
            Reduction::Exact(s) => s.d,
            Reduction::Float(s) => s.d,
        }
    }

    pub fn path(&self) -> ReductionPath {
        match self {
            Reduction::Exact(s) => s.path,
            Reduction::Float(s) => s.path,
        }
    }

    pub fn residual(&self) -> f64 {
        match self {
            Reduction::Exact(s) => s.residual,
            Reduction::Float(s) => s.residual,
        }
    }

    /// The integrability condition in exact arithmetic: directly for an exact form, after
    /// rationalization for a float form. `None` when the float coefficients are not close to
    /// small-denominator rationals.
    pub fn exact_integrability(&self) -> Option<bool> {
        match self {
            Reduction::Exact(s) => Some(s.integrability_holds(0.0)),
            Reduction::Float(s) => s.rationalized_parts(1_000_000, 1e-9).map(|r| r.integrability_holds(0.0)),
        }
    }

    pub fn to_float(&self) -> SimpleForm<f64> {
        match self {
            Reduction::Exact(s) => SimpleForm {
                n: s.n,
                d: s.d,
                k: s.k.to_float(),
                v: s.v.iter().map(Poly::to_float).collect(),
                w: s.w.iter().map(Poly::to_float).collect(),
                u: s.u.to_float(),
                residual: s.residual,
                path: s.path,
            },
            Reduction::Float(s) => s.clone(),
        }
    }
}

/// Reduce an affine-integrable, triple-nilpotent `H` to simple form by a unitary `U`.
pub fn simple_form_reduction(h: &Hamiltonian, budget: &SampleBudget) -> Result<Reduction> {
    if !is_affine_integrable(h).integrable {
        return Err(Error::NotAffineIntegrable);
    }
    if !is_triple_nilpotent(h, budget).nilpotent {
        return Err(Error::NotTripleNilpotent);
    }
    if let Some(sf) = structural_reduction(h) {
        return Ok(Reduction::Exact(sf));
    }
    let x0 = is_nondegenerate(h, budget).witness.ok_or(Error::NoRankNPoint)?;
    if let Some(sf) = exact_reduction(h, &x0)? {
        return Ok(Reduction::Exact(sf));
    }
    float_reduction(h, &x0).map(Reduction::Float)
}

fn signed_turn(n: usize, mask: u32) -> Unitary<Coeff> {
    let on = |i: usize| mask >> i & 1 == 1;
    let s = Mat::from_fn(n, n, |i, j| Coeff::integer((i == j && !on(i)) as i64));
    let t = Mat::from_fn(n, n, |i, j| Coeff::integer((i == j && on(i)) as i64));
    Unitary::new(s, t)
}

/// Quarter turns on a subset of the pairs `(q_i, p_i)` followed by a permutation
/// that moves the `q`-dependent indices to the front.
fn structural_reduction(h: &Hamiltonian) -> Option<SimpleForm<Coeff>> {
    let n = h.n();
    if n > 12 {
        return None;
    }
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let orient = signed_turn(n, mask);
        let h1 = substitute_linear(h.poly(), &orient.matrix()).ok()?;
        let present: Vec<usize> = (0..n).filter(|&i| h1.depends_on(i)).collect();
        let d = present.len();
        if d >= n {
            continue;
        }
        let order: Vec<usize> = present.iter().copied().chain((0..n).filter(|i| !present.contains(i))).collect();
        let s = Mat::from_fn(n, n, |i, k| Coeff::integer((order[k] == i) as i64));
        let perm = Unitary::new(s, Mat::zeros(n, n));
        let u = orient.then(&perm);
        let h2 = substitute_linear(h.poly(), &u.matrix()).ok()?;
        let (k, v, w, rest) = decompose(&h2, n, d);
        if !rest.is_zero() {
            continue;
        }
        let sf = SimpleForm { n, d, k, v, w, u, residual: 0.0, path: ReductionPath::Structural };
        if sf.v_rank(0.0) == d && sf.integrability_holds(0.0) {
            return Some(sf);
        }
    }
    None
}

/// Rotate `p`-block coordinates so that the span of the `V` coefficients is `e_1..e_d`.
fn align_v<C: Scalar>(
    n: usize,
    spanning: Vec<Vec<C>>,
    roots: &mut dyn Roots<C>,
) -> Option<(Unitary<C>, usize)> {
    let basis = extend_orthonormal(&mut Vec::new(), &spanning, false, n, roots)?;
    let d = basis.len();
    let mut frame = basis.clone();
    let rest = extend_orthonormal(&mut frame, &standard_basis(n), false, n - d, roots)?;
    let cols: Vec<Vec<C>> = basis.into_iter().chain(rest).collect();
    if cols.len() != n {
        return None;
    }
    let s = Mat::from_fn(n, n, |i, j| cols[j][i].clone());
    Some((Unitary::new(s, Mat::zeros(n, n)), d))
}

/// `V_i` = coefficient of `q_i` in a polynomial of `q`-degree at most one.
fn q_coefficients<C: Scalar>(p: &Poly<C>, n: usize) -> PolyVec<C> {
    let vars = p.vars();
    let mut v = vec![Poly::zero(vars); n];
    for (m, c) in p.terms() {
        if let Some(i) = (0..n).find(|&i| m.exp(i) == 1) {
            let mut e = m.exps().to_vec();
            e[i] -= 1;
            v[i].add_term(Monomial::new(e), c.clone());
        }
    }
    v
}

fn q_degree(m: &Monomial, n: usize) -> u32 {
    (0..n).map(|i| m.exp(i) as u32).sum()
}

/// Lagrangian frame `E = ker ℍ(x0)` in exact arithmetic, then alignment of `V`.
fn exact_reduction(h: &Hamiltonian, x0: &[Coeff]) -> Result<Option<SimpleForm<Coeff>>> {
    let n = h.n();
    let m = h.hessian().evaluate(x0)?;
    let kernel = nullspace(&m, 0.0);
    let mut roots = FieldRoots { radicand: Some(h.poly().field_radicand()).filter(|&r| r != 0) };
    let Some(es) = extend_orthonormal(&mut Vec::new(), &kernel, false, n, &mut roots) else {
        return Ok(None);
    };
    if es.len() != n {
        return Err(Error::VerificationFailed(format!("kernel of dimension {} at a rank-n point", es.len())));
    }
    // u_j = -J e_j so that the q-columns of U are the e_j
    let us: Vec<Vec<Coeff>> = es.iter().map(|e| j_apply(e).iter().map(|c| -c).collect()).collect();
    let u0 = unitary_from_columns(&us);
    let h1 = substitute_linear(h.poly(), &u0.matrix())?;
    if h1.terms().any(|(m, _)| q_degree(m, n) > 1) {
        return Err(Error::VerificationFailed("H ∘ U0 is not affine in q".into()));
    }
    let v = q_coefficients(&h1, n);
    let cm = coefficient_matrix(&v);
    let spanning: Vec<Vec<Coeff>> = canonical_basis(&(0..cm.cols()).map(|j| cm.col(j)).collect::<Vec<_>>(), n, 0.0);
    let Some((rot, d)) = align_v(n, spanning, &mut roots) else {
        return Ok(None);
    };
    if d >= n {
        return Err(Error::VerificationFailed("V spans all of R^n".into()));
    }
    let u = u0.then(&rot);
    let h2 = substitute_linear(h.poly(), &u.matrix())?;
    let (k, v, w, rest) = decompose(&h2, n, d);
    if !rest.is_zero() {
        return Err(Error::VerificationFailed(format!("{} terms outside the simple form", rest.len())));
    }
    let sf = SimpleForm { n, d, k, v, w, u, residual: 0.0, path: ReductionPath::ExactUnitary };
    if !sf.integrability_holds(0.0) {
        return Err(Error::VerificationFailed("reduced form violates integrability".into()));
    }
    Ok(Some(sf))
}

fn float_reduction(h: &Hamiltonian, x0: &[Coeff]) -> Result<SimpleForm<f64>> {
    let n = h.n();
    let hf = h.to_float();
    let scale = hf.poly().max_abs_coeff().max(1.0);
    let x: Vec<f64> = x0.iter().map(|c| c.to_f64()).collect();
    let pn = pointwise_normal_form(&hf, &x, DEFAULT_TOL)?;
    if pn.rank != n {
        return Err(Error::NoRankNPoint);
    }
    let h1 = substitute_linear(hf.poly(), &pn.u.matrix())?.prune(1e-13 * scale);
    let high = h1.filter_terms(|m| q_degree(m, n) > 1).max_abs_coeff();
    if high > DEFAULT_TOL * scale {
        return Err(Error::NumericFailure(format!("H ∘ U0 keeps q-quadratic terms of size {high:.3e}")));
    }
    let v = q_coefficients(&h1, n);
    let cm = coefficient_matrix(&v);
    let gram = &cm * &cm.transpose();
    let (vals, vecs) = sym_eigen(&gram)?;
    let top = vals.first().copied().unwrap_or(0.0).max(1.0);
    let d = vals.iter().filter(|&&l| l > 1e-14 * top).count();
    if d >= n {
        return Err(Error::NumericFailure("V spans all of R^n".into()));
    }
    let u = pn.u.then(&Unitary::new(vecs, Mat::zeros(n, n)));
    let h2 = substitute_linear(hf.poly(), &u.matrix())?.prune(1e-13 * scale);
    let (k, v, w, rest) = decompose(&h2, n, d);
    let mut sf = SimpleForm { n, d, k, v, w, u, residual: rest.max_abs_coeff(), path: ReductionPath::FloatUnitary };
    if sf.residual > DEFAULT_TOL * scale {
        return Err(Error::NumericFailure(format!("simple-form residual {:.3e}", sf.residual)));
    }
    let tidy = 1e-10 * scale;
    sf.k = sf.k.prune(tidy);
    sf.v = sf.v.iter().map(|p| p.prune(tidy)).collect();
    sf.w = sf.w.iter().map(|p| p.prune(tidy)).collect();
    Ok(sf)
}
