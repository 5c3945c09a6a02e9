//! Decision procedures with certificates: affine integrability, regularity,
//! nondegeneracy, shears and triple nilpotency.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hamalg::{linear_flow, is_symplectic, poisson, Hamiltonian};
use crate::linalg::{independent_columns, nullspace, rank, solve};
use crate::polycore::{
    evaluate_vec, format_vec, vec_is_zero, vec_sub, Coeff, Mat, Monomial, Poly, PolyMatrix, PolyVec, Scalar,
    Vars,
};
use crate::sampling::{integer_points, schwartz_zippel, SampleBudget};

/// Three-valued verdict for existential properties; serialized as `true`, `false` or `null`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }
}

impl Serialize for Tri {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tri::Yes => s.serialize_bool(true),
            Tri::No => s.serialize_bool(false),
            Tri::Unknown => s.serialize_none(),
        }
    }
}

impl std::fmt::Display for Tri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        })
    }
}

/// Sample points at which a cited expression is non-zero, with the entry and its value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub points: Vec<Vec<Coeff>>,
    pub entry: Vec<usize>,
    pub value: Coeff,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineCheck {
    pub integrable: bool,
    /// `(DX)X`, canonical zero when integrable.
    pub residual: PolyVec<Coeff>,
    pub dx_squared_zero: bool,
}

impl AffineCheck {
    /// `(DX)X ≡ 0` forces `(DX)² ≡ 0`; the converse fails for non-homogeneous `H`.
    pub fn consistent(&self) -> bool {
        !self.integrable || self.dx_squared_zero
    }
}

/// `(DX)X ≡ 0`, together with `(DX)² ≡ 0` as a cross-check.
pub fn is_affine_integrable(h: &Hamiltonian) -> AffineCheck {
    let x = h.vector_field();
    let dx = h.dx();
    let residual = dx.mul_vec(&x).expect("shapes agree");
    let integrable = vec_is_zero(&residual);
    let dx_squared_zero = dx.try_mul(&dx).expect("square").is_zero();
    AffineCheck { integrable, residual, dx_squared_zero }
}

fn require_affine(h: &Hamiltonian) -> Result<()> {
    if is_affine_integrable(h).integrable {
        Ok(())
    } else {
        Err(Error::NotAffineIntegrable)
    }
}

/// Whether the candidate flow `I + tX` is symplectic for symbolic `t`.
pub fn flow_is_symplectic(h: &Hamiltonian) -> bool {
    let vars = h.vars().with_time();
    let t = Poly::var(vars, 2 * h.n());
    let f = linear_flow(h, &t).expect("layouts agree");
    is_symplectic(&f).map(|r| r.0).unwrap_or(false)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularCheck {
    pub verdict: Tri,
    pub witness: Option<Vec<Coeff>>,
}

/// Search for a point with `X(x) ∈ range DX(x)`.
pub fn is_regular(h: &Hamiltonian, budget: &SampleBudget) -> RegularCheck {
    let dim = 2 * h.n();
    let origin = vec![Coeff::zero(); dim];
    if h.is_homogeneous() && h.degree().unwrap_or(0) >= 2 {
        return RegularCheck { verdict: Tri::Yes, witness: Some(origin) };
    }
    let x = h.vector_field();
    let dx = h.dx();
    if dx.is_zero() {
        // X is constant; the range of DX is {0}
        let verdict = Tri::from_bool(vec_is_zero(&x));
        return RegularCheck { verdict, witness: verdict.is_yes().then_some(origin) };
    }
    let candidates = std::iter::once(origin).chain(budget.points(dim));
    for pt in candidates {
        let xv = evaluate_vec(&x, &pt).expect("dimension");
        if xv.iter().all(|c| c.is_zero()) {
            return RegularCheck { verdict: Tri::Yes, witness: Some(pt) };
        }
        let m = dx.evaluate(&pt).expect("dimension");
        if solve(&m, &xv, 0.0).is_some() {
            return RegularCheck { verdict: Tri::Yes, witness: Some(pt) };
        }
    }
    RegularCheck { verdict: Tri::Unknown, witness: None }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NondegenerateCheck {
    pub verdict: Tri,
    /// Rank at the witness, or the largest rank seen when the budget is exhausted.
    pub rank: usize,
    pub witness: Option<Vec<Coeff>>,
}

/// First sample point where `ℍ(x)` has rank at least `n`. Never answers `No`.
pub fn is_nondegenerate(h: &Hamiltonian, budget: &SampleBudget) -> NondegenerateCheck {
    let hess = h.hessian();
    let mut best = 0;
    if !hess.is_zero() {
        for pt in budget.points(2 * h.n()) {
            let r = rank(&hess.evaluate(&pt).expect("dimension"), 0.0);
            if r >= h.n() {
                return NondegenerateCheck { verdict: Tri::Yes, rank: r, witness: Some(pt) };
            }
            best = best.max(r);
        }
    }
    NondegenerateCheck { verdict: Tri::Unknown, rank: best, witness: None }
}

/// Exact rank of `ℍ` at a point.
pub fn hessian_rank_at(h: &Hamiltonian, x: &[Coeff]) -> Result<usize> {
    Ok(rank(&h.hessian().evaluate(x)?, 0.0))
}

/// `DX(x)` times copies of `DX` in further disjoint variable blocks.
pub fn dx_product_symbolic(h: &Hamiltonian, factors: usize, term_cap: usize) -> Result<PolyMatrix<Coeff>> {
    let n = h.n();
    let vars = Vars::blocks(n, factors, false);
    let dx = h.dx();
    let per_entry = dx.entries().iter().map(|p| p.len()).max().unwrap_or(0).max(1);
    let estimate = (per_entry as f64).powi(factors as i32) * ((2 * n) as f64).powi(factors as i32 + 1);
    if estimate > term_cap as f64 {
        return Err(Error::ExpansionCapExceeded { terms: estimate as u64, cap: term_cap as u64 });
    }
    let mut acc = dx.embed(vars, 0);
    for k in 1..factors {
        acc = acc.try_mul(&dx.embed(vars, 2 * n * k))?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShearCheck {
    pub verdict: Tri,
    /// Pair `(x, y)` with `DX(x)DX(y) ≠ 0` when the verdict is `No`.
    pub witness: Option<Witness>,
    /// Regularity certificate used for a `Yes`.
    pub regular_witness: Option<Vec<Coeff>>,
}

/// Shear test via `DX(x)DX(y) ≡ 0` over `4n` variables.
pub fn is_shear(h: &Hamiltonian, budget: &SampleBudget) -> Result<ShearCheck> {
    let n = h.n();
    if (0..n).all(|i| !h.poly().depends_on(i)) {
        return Ok(ShearCheck { verdict: Tri::Yes, witness: None, regular_witness: None });
    }
    let product = dx_product_symbolic(h, 2, usize::MAX)?;
    if !product.is_zero() {
        let witness = product_witness(h, 2, budget);
        return Ok(ShearCheck { verdict: Tri::No, witness, regular_witness: None });
    }
    let reg = is_regular(h, budget);
    match reg.verdict {
        Tri::Yes => Ok(ShearCheck { verdict: Tri::Yes, witness: None, regular_witness: reg.witness }),
        _ => Err(Error::RegularityUnknown),
    }
}

/// Coefficient matrices `D_α` with `DX(x) = Σ D_α x^α`.
pub fn coefficient_matrices(m: &PolyMatrix<Coeff>) -> Vec<Mat<Coeff>> {
    let mut monos: Vec<Monomial> = m.entries().iter().flat_map(|p| p.terms().map(|(k, _)| k.clone())).collect();
    monos.sort();
    monos.dedup();
    monos
        .iter()
        .map(|mono| Mat::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).coeff(mono)))
        .collect()
}

fn reduce_to_basis(vectors: Vec<Vec<Coeff>>, dim: usize) -> Vec<Vec<Coeff>> {
    if vectors.is_empty() {
        return vectors;
    }
    let m = Mat::from_cols(dim, &vectors);
    independent_columns(&m, 0.0).into_iter().map(|j| vectors[j].clone()).collect()
}

/// Basis of `span{D_α1 ⋯ D_αk v}` over all coefficient matrices, for `k = depth`.
pub fn image_chain(mats: &[Mat<Coeff>], depth: usize) -> Vec<Vec<Coeff>> {
    let Some(dim) = mats.first().map(|m| m.rows()) else {
        return Vec::new();
    };
    let mut span: Vec<Vec<Coeff>> = reduce_to_basis(mats.iter().flat_map(|m| (0..m.cols()).map(|j| m.col(j))).collect(), dim);
    for _ in 1..depth {
        if span.is_empty() {
            break;
        }
        let images = mats.iter().flat_map(|m| span.iter().map(move |v| m.mul_vec(v))).collect();
        span = reduce_to_basis(images, dim);
    }
    span
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TripleCheck {
    pub nilpotent: bool,
    /// Dimensions of the image chain `R1 ⊇ ... ⊇ R3`.
    pub chain: Vec<usize>,
    pub witness: Option<Witness>,
}

/// Exact test of `DX(x)DX(y)DX(z) ≡ 0`.
///
/// Since the three factors use disjoint variables, the identity holds iff
/// `D_α D_β D_γ = 0` for all coefficient matrices, i.e. iff the image chain
/// of the coefficient matrices dies at depth 3.
pub fn is_triple_nilpotent(h: &Hamiltonian, budget: &SampleBudget) -> TripleCheck {
    let mats = coefficient_matrices(&h.dx());
    let chain: Vec<usize> = (1..=3).map(|k| image_chain(&mats, k).len()).collect();
    let nilpotent = chain[2] == 0;
    let witness = if nilpotent { None } else { product_witness(h, 3, budget) };
    TripleCheck { nilpotent, chain, witness }
}

/// `DX(x)DX(y) ≡ 0` by the same coefficient argument.
pub fn is_shear_product_zero(h: &Hamiltonian) -> bool {
    image_chain(&coefficient_matrices(&h.dx()), 2).is_empty()
}

/// Search consecutive sample points for a non-zero `DX(x1)⋯DX(xk)`.
fn product_witness(h: &Hamiltonian, k: usize, budget: &SampleBudget) -> Option<Witness> {
    let dx = h.dx();
    let pts = budget.points(2 * h.n());
    let evals: Vec<Mat<Coeff>> = pts.iter().map(|p| dx.evaluate(p).expect("dimension")).collect();
    for start in 0..pts.len() {
        let idx: Vec<usize> = (0..k).map(|i| (start + i) % pts.len()).collect();
        let mut prod = evals[idx[0]].clone();
        for &i in &idx[1..] {
            prod = &prod * &evals[i];
        }
        if let Some(pos) = prod.entries().iter().position(|c| !c.is_zero()) {
            let cols = prod.cols();
            return Some(Witness {
                points: idx.iter().map(|&i| pts[i].clone()).collect(),
                entry: vec![pos / cols, pos % cols],
                value: prod.entries()[pos].clone(),
            });
        }
    }
    None
}

/// Evaluate `DX(x1)⋯DX(xk)` at the witness points.
pub fn recheck_product(h: &Hamiltonian, w: &Witness) -> Result<Coeff> {
    let dx = h.dx();
    let mut prod = dx.evaluate(&w.points[0])?;
    for p in &w.points[1..] {
        prod = prod.try_mul(&dx.evaluate(p)?)?;
    }
    Ok(prod.get(w.entry[0], w.entry[1]).clone())
}

/// `X(x + DX(x)w) - X(x) ≡ 0` and `H(x + DX(x)w) - H(x) ≡ 0` in `4n` variables.
pub fn affine_subspace_invariance(h: &Hamiltonian) -> Result<bool> {
    require_affine(h)?;
    let n = h.n();
    let vars = Vars::blocks(n, 2, false);
    let dx = h.dx().embed(vars, 0);
    let w: PolyVec<Coeff> = (0..2 * n).map(|i| Poly::var(vars, 2 * n + i)).collect();
    let shift = dx.mul_vec(&w)?;
    let mut subs: PolyVec<Coeff> = (0..2 * n).map(|i| &Poly::var(vars, i) + &shift[i]).collect();
    subs.extend((2 * n..4 * n).map(|i| Poly::var(vars, i)));
    let x: PolyVec<Coeff> = h.vector_field().iter().map(|p| p.embed(vars, 0)).collect();
    let hx = h.poly().embed(vars, 0);
    let x_moved: PolyVec<Coeff> = x.iter().map(|p| p.compose(&subs)).collect::<Result<_>>()?;
    let h_moved = hx.compose(&subs)?;
    Ok(vec_is_zero(&vec_sub(&x_moved, &x)?) && (&h_moved - &hx).is_zero())
}

/// Sampled check that `x + range DX(x)` is locally the level set of `X` through `x`.
///
/// Moves along the range leave `X` unchanged exactly; small moves with a non-zero
/// component orthogonal to the range change `X`.
pub fn local_level_set_check(h: &Hamiltonian, x: &[Coeff], budget: &SampleBudget) -> Result<bool> {
    require_affine(h)?;
    let n = h.n();
    let dxm = h.dx().evaluate(x)?;
    if rank(&dxm, 0.0) != n {
        return Err(Error::Precondition(format!("rank of the Hessian at the point is not {n}")));
    }
    let range: Vec<Vec<Coeff>> = independent_columns(&dxm, 0.0).into_iter().map(|j| dxm.col(j)).collect();
    let normal = nullspace(&dxm.transpose(), 0.0);
    let field = h.vector_field();
    let x0 = evaluate_vec(&field, x)?;
    let eps = Coeff::ratio(1, 1000);
    let coeffs = budget.points(2 * n);
    for (k, c) in coeffs.iter().enumerate().take(budget.total().min(24)) {
        let mut y: Vec<Coeff> = x.to_vec();
        for (r, v) in range.iter().enumerate() {
            let s = &eps * &c[r];
            for i in 0..2 * n {
                y[i] = &y[i] + &(&s * &v[i]);
            }
        }
        if evaluate_vec(&field, &y)? != x0 {
            return Ok(false);
        }
        // every other sample also moves off the range
        if k % 2 == 1 {
            for (r, v) in normal.iter().enumerate() {
                let s = &eps * &c[n + r];
                for i in 0..2 * n {
                    y[i] = &y[i] + &(&s * &v[i]);
                }
            }
            if evaluate_vec(&field, &y)? == x0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `{∂_u H, H} = 0`, `{∂_u∂_v H, H} = 0` and `{∂_u H, ∂_v H} = 0` over coordinate directions.
pub fn commutation_report(h: &Hamiltonian) -> Result<bool> {
    require_affine(h)?;
    let hp = h.poly();
    let grad = h.gradient();
    for (u, du) in grad.iter().enumerate() {
        if !poisson(du, hp)?.is_zero() {
            return Ok(false);
        }
        for (v, dv) in grad.iter().enumerate().skip(u) {
            if !poisson(&du.d(v), hp)?.is_zero() || !poisson(du, dv)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of evaluating an identity at random integer points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledCheck {
    pub holds: bool,
    pub trials: usize,
    /// Upper bound on the chance that a false identity passed every trial.
    pub failure_bound: f64,
    pub witness: Option<Witness>,
}

/// `(DX)X = 0` at `trials` random points.
pub fn sampled_affine(h: &Hamiltonian, trials: usize, seed: u64) -> SampledCheck {
    let x = h.vector_field();
    let dx = h.dx();
    let d = h.degree().unwrap_or(0);
    for pt in integer_points(2 * h.n(), trials, seed) {
        let v = dx.evaluate(&pt).expect("dimension").mul_vec(&evaluate_vec(&x, &pt).expect("dimension"));
        if let Some(i) = v.iter().position(|c| !c.is_zero()) {
            let value = v[i].clone();
            return SampledCheck { holds: false, trials, failure_bound: 0.0, witness: Some(Witness { points: vec![pt], entry: vec![i], value }) };
        }
    }
    SampledCheck { holds: true, trials, failure_bound: schwartz_zippel((2 * d).saturating_sub(3), trials), witness: None }
}

/// `DX(x1)⋯DX(xk) = 0` at `trials` random tuples.
pub fn sampled_product(h: &Hamiltonian, k: usize, trials: usize, seed: u64) -> SampledCheck {
    let dx = h.dx();
    let dim = 2 * h.n();
    let d = h.degree().unwrap_or(0);
    let pts = integer_points(dim, trials * k, seed);
    for chunk in pts.chunks(k) {
        let mut prod = dx.evaluate(&chunk[0]).expect("dimension");
        for p in &chunk[1..] {
            prod = &prod * &dx.evaluate(p).expect("dimension");
        }
        if let Some(pos) = prod.entries().iter().position(|c| !c.is_zero()) {
            let cols = prod.cols();
            let witness = Witness { points: chunk.to_vec(), entry: vec![pos / cols, pos % cols], value: prod.entries()[pos].clone() };
            return SampledCheck { holds: false, trials, failure_bound: 0.0, witness: Some(witness) };
        }
    }
    let degree = (k as u32) * d.saturating_sub(2);
    SampledCheck { holds: true, trials, failure_bound: schwartz_zippel(degree, trials), witness: None }
}

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct ClassifyOptions {
    pub budget: SampleBudget,
    /// Number of random trials for the probabilistic mode; `None` for exact symbolic tests.
    pub numeric: Option<usize>,
}


#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub degrees: Vec<u32>,
    pub homogeneous: bool,
    pub mode: &'static str,
    pub symplectic_flow: bool,
    pub affine_integrable: bool,
    pub affine_residual: Vec<String>,
    pub dx_squared_zero: bool,
    pub regular: Tri,
    pub regular_witness: Option<Vec<Coeff>>,
    pub nondegenerate: Tri,
    pub rank: usize,
    pub nondegenerate_witness: Option<Vec<Coeff>>,
    pub shear: Tri,
    pub shear_witness: Option<Witness>,
    pub triple_nilpotent: bool,
    pub triple_witness: Option<Witness>,
    pub failure_bound: Option<f64>,
    pub notes: Vec<String>,
}

pub fn classify(h: &Hamiltonian, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let n = h.n();
    let budget = &opts.budget;
    let degrees: Vec<u32> = h.poly().homogeneous_components().iter().map(|(d, _)| *d).collect();
    let mut notes = Vec::new();

    let affine = is_affine_integrable(h);
    if !affine.consistent() {
        return Err(Error::VerificationFailed("(DX)X vanishes but (DX)^2 does not".into()));
    }
    let regular = is_regular(h, budget);
    let nondeg = is_nondegenerate(h, budget);

    let (mode, affine_integrable, shear, shear_witness, triple, triple_witness, failure_bound) = match opts.numeric {
        None => {
            let tri = is_triple_nilpotent(h, budget);
            let (shear, shear_witness) = match is_shear(h, budget) {
                Ok(s) => (s.verdict, s.witness),
                Err(Error::RegularityUnknown) => {
                    notes.push("shear verdict needs a regularity certificate".into());
                    (Tri::Unknown, None)
                }
                Err(e) => return Err(e),
            };
            ("symbolic", affine.integrable, shear, shear_witness, tri.nilpotent, tri.witness, None)
        }
        Some(trials) => {
            let seed = budget.seed;
            let a = sampled_affine(h, trials, seed);
            let s = sampled_product(h, 2, trials, seed.wrapping_add(1));
            let t = sampled_product(h, 3, trials, seed.wrapping_add(2));
            let shear = if !s.holds {
                Tri::No
            } else if regular.verdict.is_yes() {
                Tri::Yes
            } else {
                Tri::Unknown
            };
            let bound = [&a, &s, &t].iter().map(|c| c.failure_bound).fold(0.0, f64::max);
            ("numeric", a.holds, shear, s.witness, t.holds, t.witness, Some(bound))
        }
    };
    if shear.is_yes() && !triple {
        return Err(Error::VerificationFailed("shear without triple nilpotency".into()));
    }
    if nondeg.verdict.is_yes() && nondeg.rank < n {
        return Err(Error::VerificationFailed("nondegeneracy witness below rank n".into()));
    }
    if affine.integrable && !affine.dx_squared_zero {
        notes.push("(DX)X and (DX)^2 disagree".into());
    }
    Ok(ClassificationReport {
        n,
        homogeneous: h.is_homogeneous(),
        degrees,
        mode,
        symplectic_flow: flow_is_symplectic(h),
        affine_integrable,
        affine_residual: affine.residual.iter().map(|p| p.to_string()).collect(),
        dx_squared_zero: affine.dx_squared_zero,
        regular: regular.verdict,
        regular_witness: regular.witness,
        nondegenerate: nondeg.verdict,
        rank: nondeg.rank,
        nondegenerate_witness: nondeg.witness,
        shear,
        shear_witness,
        triple_nilpotent: triple,
        triple_witness,
        failure_bound,
        notes,
    })
}

/// `(DX)X` printed as a vector.
pub fn format_residual(check: &AffineCheck) -> String {
    format_vec(&check.residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::FieldSpec;

    const EQ14: &str = "q1*p3^3 + sqrt(3)*q2*p3^2*p4 + p1*p4^3 - sqrt(3)*p2*p3*p4^2";

    fn ham(s: &str, n: usize) -> Hamiltonian {
        Hamiltonian::parse(s, n, FieldSpec::Sqrt(3)).unwrap()
    }

    #[test]
    fn affine_integrability_examples() {
        assert!(is_affine_integrable(&ham("p1^2", 1)).integrable);
        assert!(is_affine_integrable(&ham(EQ14, 4)).integrable);
        let bad = is_affine_integrable(&ham("q1^2*p1", 1));
        assert!(!bad.integrable);
        assert_eq!(format_residual(&bad), "(2*q1^3, 2*q1^2*p1)");
    }

    #[test]
    fn dx_squared_alone_is_weaker() {
        let c = is_affine_integrable(&ham("p1^2 + q1", 1));
        assert!(c.dx_squared_zero && !c.integrable && c.consistent());
    }

    #[test]
    fn shear_examples() {
        let b = SampleBudget::default();
        assert_eq!(is_shear(&ham("p1^2 + p1*p2", 2), &b).unwrap().verdict, Tri::Yes);
        assert_eq!(is_shear(&ham("q1*p2^2", 2), &b).unwrap().verdict, Tri::Yes);
        let h = ham(EQ14, 4);
        let s = is_shear(&h, &b).unwrap();
        assert_eq!(s.verdict, Tri::No);
        let w = s.witness.unwrap();
        assert_eq!(recheck_product(&h, &w).unwrap(), w.value);
        assert!(!w.value.is_zero());
    }

    #[test]
    fn regularity() {
        let b = SampleBudget::default();
        let r = is_regular(&ham(EQ14, 4), &b);
        assert_eq!(r.verdict, Tri::Yes);
        assert!(r.witness.unwrap().iter().all(|c| c.is_zero()));
        assert_eq!(is_regular(&ham("p1", 1), &b).verdict, Tri::No);
        assert_eq!(is_regular(&ham("p1^2 + p1", 1), &b).verdict, Tri::Yes);
    }

    #[test]
    fn nondegeneracy() {
        let b = SampleBudget::default();
        let c = is_nondegenerate(&ham(EQ14, 4), &b);
        assert_eq!((c.verdict, c.rank), (Tri::Yes, 4));
        let w = c.witness.unwrap();
        assert!(!(&w[6] * &w[7]).is_zero());
        assert_eq!(is_nondegenerate(&ham("0", 2), &b).verdict, Tri::Unknown);
        assert_eq!(is_nondegenerate(&ham("p1^2 + p2^2", 2), &b).rank, 2);
    }

    #[test]
    fn triple_nilpotency_matches_symbolic_product() {
        let b = SampleBudget::default();
        for (s, n) in [(EQ14, 4), ("q1*p2^2", 2), ("q1^2*p1", 1), ("q1*p1", 1)] {
            let h = ham(s, n);
            let chain = is_triple_nilpotent(&h, &b);
            let sym = dx_product_symbolic(&h, 3, usize::MAX).unwrap();
            assert_eq!(chain.nilpotent, sym.is_zero(), "{s}");
            assert_eq!(is_shear_product_zero(&h), dx_product_symbolic(&h, 2, usize::MAX).unwrap().is_zero());
            if let Some(w) = chain.witness {
                assert_eq!(recheck_product(&h, &w).unwrap(), w.value);
            }
        }
        assert!(is_triple_nilpotent(&ham(EQ14, 4), &b).nilpotent);
    }

    #[test]
    fn theorem_identities_on_counterexample() {
        let h = ham(EQ14, 4);
        assert!(affine_subspace_invariance(&h).unwrap());
        assert!(commutation_report(&h).unwrap());
        let x = is_nondegenerate(&h, &SampleBudget::default()).witness.unwrap();
        assert!(local_level_set_check(&h, &x, &SampleBudget::default()).unwrap());
        let corrupted = ham(&format!("{EQ14} + q1^3"), 4);
        assert_eq!(affine_subspace_invariance(&corrupted), Err(Error::NotAffineIntegrable));
        assert_eq!(commutation_report(&ham("q1^2*p1", 1)), Err(Error::NotAffineIntegrable));
    }

    #[test]
    fn full_reports() {
        let r = classify(&ham(EQ14, 4), &ClassifyOptions::default()).unwrap();
        assert!(r.affine_integrable && r.triple_nilpotent && r.symplectic_flow);
        assert_eq!(r.shear, Tri::No);
        assert_eq!((r.nondegenerate, r.rank), (Tri::Yes, 4));
        let num = classify(&ham(EQ14, 4), &ClassifyOptions { numeric: Some(20), ..Default::default() }).unwrap();
        assert_eq!((num.affine_integrable, num.shear, num.triple_nilpotent), (true, Tri::No, true));
        let trivial = classify(&ham("p1^2", 1), &ClassifyOptions::default()).unwrap();
        assert!(trivial.shear.is_yes() && trivial.affine_integrable);
    }
}
