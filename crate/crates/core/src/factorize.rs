//! Map-to-Hamiltonian recovery, the splitting `H0 = H1 + H2` of a simple form, and
//! the factorization of a cubic symplectic map into two time-one shear maps.

use serde::{Serialize, Serializer};

use crate::classify::{is_affine_integrable, is_nondegenerate};
use crate::error::{Error, Result};
use crate::hamalg::{is_symplectic, lie_exp, poisson, substitute_linear, Hamiltonian, Unitary};
use crate::normalform::{simple_form_reduction, Reduction, SimpleForm, DEFAULT_TOL};
use crate::polycore::{compose_map, identity_map, vec_sub, Coeff, Poly, PolyVec, Scalar, Vars};
use crate::sampling::SampleBudget;

/// `F - I` for a map over the principal layout of `n = len/2` degrees of freedom.
fn displacement<C: Scalar>(f: &[Poly<C>]) -> Result<PolyVec<C>> {
    let Some(first) = f.first() else {
        return Err(Error::ShapeMismatch("empty map".into()));
    };
    let vars = first.vars();
    if !f.len().is_multiple_of(2) || vars != Vars::principal(f.len() / 2) {
        return Err(Error::ShapeMismatch(format!("map with {} components over {} variables", f.len(), vars.count())));
    }
    vec_sub(f, &identity_map(vars, f.len()))
}

/// Common degree of a non-zero homogeneous vector, if any.
fn homogeneous_degree<C: Scalar>(x: &[Poly<C>]) -> Option<u32> {
    let mut deg = None;
    for p in x.iter().filter(|p| !p.is_zero()) {
        if !p.is_homogeneous() {
            return None;
        }
        match deg {
            None => deg = p.degree(),
            Some(d) if Some(d) != p.degree() => return None,
            _ => {}
        }
    }
    deg
}

/// `I + X` for the vector field of `h`, over the principal layout.
pub fn time_one_map<C: Scalar>(h: &Hamiltonian<C>) -> PolyVec<C> {
    let x = h.vector_field();
    identity_map(h.vars(), 2 * h.n()).iter().zip(&x).map(|(a, b)| a + b).collect()
}

/// `H = -xᵀJX/(m+1)` for a symplectic `F = I + X` with `X` homogeneous of degree `m`.
pub fn hamiltonian_from_map(f: &[Poly<Coeff>]) -> Result<Hamiltonian> {
    let x = displacement(f)?;
    if !is_symplectic(f)?.0 {
        return Err(Error::NotSymplectic);
    }
    let m = homogeneous_degree(&x).ok_or(Error::NotHomogeneous)?;
    let n = f.len() / 2;
    let vars = Vars::principal(n);
    let mut xjx = Poly::zero(vars);
    for i in 0..n {
        xjx = &xjx + &(&Poly::var(vars, i) * &x[n + i]);
        xjx = &xjx - &(&Poly::var(vars, n + i) * &x[i]);
    }
    let h = Hamiltonian::new(n, xjx.scale(&Coeff::ratio(-1, m as i64 + 1)))?;
    if h.vector_field() != x {
        return Err(Error::VerificationFailed("J∇H differs from F - I".into()));
    }
    if !is_affine_integrable(&h).integrable {
        return Err(Error::VerificationFailed("recovered Hamiltonian is not affine-integrable".into()));
    }
    Ok(h)
}

/// `H0 = H1 + H2` with `H1 = QᵀV`, `H2 = K + PᵀW`, `H3 = ½{H1, H2}`, `H4 = H2 - H3`.
#[derive(Clone, Debug, Serialize)]
pub struct SplitResult<C: Scalar> {
    pub n: usize,
    pub d: usize,
    pub h0: Poly<C>,
    pub h1: Poly<C>,
    pub h2: Poly<C>,
    pub h3: Poly<C>,
    pub h4: Poly<C>,
}

pub fn split_simple<C: Scalar>(s: &SimpleForm<C>) -> Result<SplitResult<C>> {
    if !s.integrability_holds(DEFAULT_TOL) {
        return Err(Error::IntegrabilityViolated);
    }
    let vars = s.vars();
    let mut h1 = Poly::zero(vars);
    let mut h2 = s.k.clone();
    let mut vw = Poly::zero(vars);
    for i in 0..s.d {
        h1 = &h1 + &(&Poly::var(vars, i) * &s.v[i]);
        h2 = &h2 + &(&Poly::var(vars, s.n + i) * &s.w[i]);
        vw = &vw + &(&s.v[i] * &s.w[i]);
    }
    let half = C::from_ratio(1, 2);
    let h3 = poisson(&h1, &h2)?.scale(&half);
    let closed = vw.scale(&half);
    let tol = DEFAULT_TOL * h3.max_abs_coeff().max(1.0);
    if !(&h3 - &closed).prune(tol).is_zero() {
        return Err(Error::VerificationFailed("½{H1,H2} differs from ½VᵀW".into()));
    }
    for (name, g) in [("H1", &h1), ("H2", &h2)] {
        if !poisson(g, &h3)?.prune(tol).is_zero() {
            return Err(Error::VerificationFailed(format!("{name} does not commute with H3")));
        }
    }
    let h4 = &h2 - &h3;
    let h0 = &h1 + &h2;
    Ok(SplitResult { n: s.n, d: s.d, h0, h1, h2, h3, h4 })
}

/// The three sides of the BCH identity for `f`, over the layout of `t`:
/// `e^{t[[H0]]}f`, the product with the `-t²` correction by `H3`, and the merged form with `H2 - tH3`.
/// Exponentials act in substitution order: the `H1` series is applied to `f` first.
pub fn bch_sides<C: Scalar>(s: &SplitResult<C>, f: &Poly<C>, t: &Poly<C>) -> Result<[Poly<C>; 3]> {
    let vars = t.vars();
    if vars.n() != s.n || f.nvars() > vars.count() {
        return Err(Error::ShapeMismatch("time parameter over a different phase space".into()));
    }
    let lift = |p: &Poly<C>| p.embed(vars, 0);
    let (h0, h1, h2, h3) = (lift(&s.h0), lift(&s.h1), lift(&s.h2), lift(&s.h3));
    let f = lift(f);
    let lhs = lie_exp(&h0, &f, t)?;
    let after1 = lie_exp(&h1, &f, t)?;
    let t2 = -(t * t);
    let split = lie_exp(&h3, &lie_exp(&h2, &after1, t)?, &t2)?;
    let merged_h = &h2 - &(t * &h3);
    let merged = lie_exp(&merged_h, &after1, t)?;
    Ok([lhs, split, merged])
}

/// Both equalities of the BCH identity, exactly (or within tolerance for floats).
pub fn verify_bch_identity<C: Scalar>(s: &SplitResult<C>, f: &Poly<C>, t: &Poly<C>) -> Result<bool> {
    let [lhs, split, merged] = bch_sides(s, f, t)?;
    let tol = DEFAULT_TOL * lhs.max_abs_coeff().max(1.0);
    Ok((&lhs - &split).prune(tol).is_zero() && (&lhs - &merged).prune(tol).is_zero())
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionCheck<C: Scalar> {
    pub equal: bool,
    /// `(I + X1)∘(I + X4) - (I + X0)`.
    pub residual: PolyVec<C>,
}

/// `(I + X_a)∘(I + X_b)` compared with `I + X_0`; `b` acts first.
pub fn composition_residual<C: Scalar>(h0: &Poly<C>, a: &Poly<C>, b: &Poly<C>, n: usize) -> Result<PolyVec<C>> {
    let f0 = time_one_map(&Hamiltonian::new(n, h0.clone())?);
    let fa = time_one_map(&Hamiltonian::new(n, a.clone())?);
    let fb = time_one_map(&Hamiltonian::new(n, b.clone())?);
    vec_sub(&compose_map(&fa, &fb)?, &f0)
}

/// `Φ¹_{H0} = Φ¹_{H1}∘Φ¹_{H4}` as polynomial maps.
pub fn time_one_composition_check(s: &SplitResult<Coeff>) -> Result<CompositionCheck<Coeff>> {
    for (name, h) in [("H0", &s.h0), ("H1", &s.h1), ("H4", &s.h4)] {
        if !is_affine_integrable(&Hamiltonian::new(s.n, h.clone())?).integrable {
            return Err(Error::Precondition(format!("{name} is not affine-integrable")));
        }
    }
    let residual = composition_residual(&s.h0, &s.h1, &s.h4, s.n)?;
    let equal = residual.iter().all(|p| p.is_zero());
    Ok(CompositionCheck { equal, residual })
}

/// `h(p) = H(p, p)`: every `q_i` replaced by `p_i`.
pub fn diagonal_potential<C: Scalar>(h: &Poly<C>, n: usize) -> Result<Poly<C>> {
    let vars = h.vars();
    let subs: PolyVec<C> = (0..vars.count()).map(|i| Poly::var(vars, if i < n { n + i } else { i })).collect();
    h.compose(&subs)
}

/// Residual of a factorization: exactly zero, or the largest coefficient of the mismatch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Residual {
    Exact,
    Float(f64),
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Residual::Exact => s.serialize_str("exact"),
            Residual::Float(r) => s.serialize_f64(*r),
        }
    }
}

impl std::fmt::Display for Residual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Residual::Exact => f.write_str("exact"),
            Residual::Float(r) => write!(f, "{r:.3e}"),
        }
    }
}

/// `F = F1∘F4` with `F1`, `F4` the time-one maps of `H1∘U⁻¹` and `H4∘U⁻¹`.
#[derive(Clone, Debug, Serialize)]
pub struct JoltFactorization<C: Scalar> {
    pub n: usize,
    pub d: usize,
    /// `H∘U` is the simple form.
    pub u: Unitary<C>,
    pub split: SplitResult<C>,
    pub h1u: Poly<C>,
    pub h4u: Poly<C>,
    pub f1: PolyVec<C>,
    pub f4: PolyVec<C>,
    pub h1: Poly<C>,
    pub h4: Poly<C>,
    pub residual: Residual,
}

pub enum Factorization {
    Exact(JoltFactorization<Coeff>),
    Float(JoltFactorization<f64>),
}

impl Factorization {
    pub fn residual(&self) -> Residual {
        match self {
            Factorization::Exact(j) => j.residual,
            Factorization::Float(j) => j.residual,
        }
    }
}

fn factor_parts<C: Scalar>(sf: &SimpleForm<C>) -> Result<JoltFactorization<C>> {
    let n = sf.n;
    let split = split_simple(sf)?;
    let back = sf.u.inverse().matrix();
    let h1u = substitute_linear(&split.h1, &back)?;
    let h4u = substitute_linear(&split.h4, &back)?;
    let (h1u, h4u) = if C::EXACT {
        (h1u, h4u)
    } else {
        let tol = 1e-13 * split.h0.max_abs_coeff().max(1.0);
        (h1u.prune(tol), h4u.prune(tol))
    };
    let f1 = time_one_map(&Hamiltonian::new(n, h1u.clone())?);
    let f4 = time_one_map(&Hamiltonian::new(n, h4u.clone())?);
    let h1 = diagonal_potential(&split.h1, n)?;
    let h4 = diagonal_potential(&split.h4, n)?;
    Ok(JoltFactorization { n, d: sf.d, u: sf.u.clone(), split, h1u, h4u, f1, f4, h1, h4, residual: Residual::Exact })
}

/// Factor a symplectic `F = I + X`, `X` homogeneous cubic and nondegenerate, into two shear maps.
pub fn jolt_factorize(f: &[Poly<Coeff>], budget: &SampleBudget) -> Result<Factorization> {
    let x = displacement(f)?;
    match homogeneous_degree(&x) {
        Some(3) => {}
        Some(degree) => return Err(Error::NotCubic { degree }),
        None => {
            let degree = x.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
            return Err(if degree == 3 { Error::NotHomogeneous } else { Error::NotCubic { degree } });
        }
    }
    let h = hamiltonian_from_map(f)?;
    if is_nondegenerate(&h, budget).witness.is_none() {
        return Err(Error::DegenerateMap);
    }
    let reduction = simple_form_reduction(&h, budget).map_err(|e| match e {
        Error::NoRankNPoint => Error::DegenerateMap,
        other => other,
    })?;
    match reduction {
        Reduction::Exact(sf) => {
            let out = factor_parts(&sf)?;
            let residual = vec_sub(&compose_map(&out.f1, &out.f4)?, f)?;
            if !residual.iter().all(|p| p.is_zero()) {
                return Err(Error::VerificationFailed("F1∘F4 differs from F".into()));
            }
            Ok(Factorization::Exact(out))
        }
        Reduction::Float(sf) => {
            let mut out = factor_parts(&sf)?;
            let ff: PolyVec<f64> = f.iter().map(|p| p.to_float()).collect();
            let diff = vec_sub(&compose_map(&out.f1, &out.f4)?, &ff)?;
            let r = diff.iter().map(|p| p.max_abs_coeff()).fold(0.0, f64::max);
            if r > 1e-8 * ff.iter().map(|p| p.max_abs_coeff()).fold(1.0, f64::max) {
                return Err(Error::NumericFailure(format!("composition residual {r:.3e}")));
            }
            out.residual = Residual::Float(r);
            Ok(Factorization::Float(out))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::is_shear;
    use crate::polycore::{parse, FieldSpec};

    const EQ14: &str = "q1*p3^3 + sqrt(3)*q2*p3^2*p4 + p1*p4^3 - sqrt(3)*p2*p3*p4^2";

    fn poly(text: &str, n: usize) -> Poly<Coeff> {
        parse(text, n, FieldSpec::default()).unwrap()
    }

    fn ham(text: &str, n: usize) -> Hamiltonian {
        Hamiltonian::new(n, poly(text, n)).unwrap()
    }

    fn eq14_split() -> SplitResult<Coeff> {
        let Reduction::Exact(sf) = simple_form_reduction(&ham(EQ14, 4), &SampleBudget::default()).unwrap() else {
            panic!("exact reduction expected");
        };
        split_simple(&sf).unwrap()
    }

    #[test]
    fn recovers_from_maps() {
        let f = vec![poly("q1 + 2*p1", 1), poly("p1", 1)];
        assert_eq!(*hamiltonian_from_map(&f).unwrap().poly(), poly("p1^2", 1));
        let h = ham(EQ14, 4);
        assert_eq!(hamiltonian_from_map(&time_one_map(&h)).unwrap(), h);
        let bad = vec![poly("2*q1", 1), poly("p1", 1)];
        assert!(matches!(hamiltonian_from_map(&bad), Err(Error::NotSymplectic)));
    }

    #[test]
    fn split_of_counterexample() {
        let s = eq14_split();
        assert_eq!(s.h1, poly("q1*p3^3 + sqrt(3)*q2*p3^2*p4", 4));
        assert_eq!(s.h2, poly("p1*p4^3 - sqrt(3)*p2*p3*p4^2", 4));
        assert_eq!(s.h3, poly("-p3^3*p4^3", 4));
        assert_eq!(s.h4, poly("p1*p4^3 - sqrt(3)*p2*p3*p4^2 + p3^3*p4^3", 4));
        assert_eq!(poisson(&s.h1, &s.h2).unwrap(), poly("-2*p3^3*p4^3", 4));
        let b = SampleBudget::default();
        for h in [&s.h1, &s.h4] {
            assert!(is_shear(&Hamiltonian::new(4, h.clone()).unwrap(), &b).unwrap().verdict.is_yes());
        }
        assert!(time_one_composition_check(&s).unwrap().equal);
    }

    #[test]
    fn dropping_the_correction_is_detected() {
        let s = eq14_split();
        let r = composition_residual(&s.h0, &s.h1, &s.h2, 4).unwrap();
        assert!(r.iter().any(|p| !p.is_zero()));
    }

    #[test]
    fn degenerate_splits() {
        let k = SimpleForm::new(2, 0, poly("p1^3 + p2^2*p1", 2), vec![], vec![]).unwrap();
        let s = split_simple(&k).unwrap();
        assert!(s.h1.is_zero());
        assert_eq!(s.h4, k.k);
        let sh = SimpleForm::new(2, 1, Poly::zero(Vars::principal(2)), vec![poly("p2^2", 2)], vec![Poly::zero(Vars::principal(2))])
            .unwrap();
        let s = split_simple(&sh).unwrap();
        assert!(s.h3.is_zero() && s.h4.is_zero());
        assert_eq!(s.h1, poly("q1*p2^2", 2));
    }

    #[test]
    fn bch_with_symbolic_time() {
        let s = eq14_split();
        let vars = Vars::principal(4).with_time();
        let t = Poly::var(vars, 8);
        for i in 0..8 {
            let f = Poly::var(Vars::principal(4), i);
            assert!(verify_bch_identity(&s, &f, &t).unwrap(), "coordinate {i}");
        }
        let one = Poly::one(Vars::principal(4));
        assert!(verify_bch_identity(&s, &one, &one).unwrap());
    }

    #[test]
    fn factorizes_counterexample_exactly() {
        let f = time_one_map(&ham(EQ14, 4));
        let Factorization::Exact(j) = jolt_factorize(&f, &SampleBudget::default()).unwrap() else {
            panic!("exact factorization expected");
        };
        assert_eq!(j.residual, Residual::Exact);
        assert_eq!(compose_map(&j.f1, &j.f4).unwrap(), f);
        assert!(is_symplectic(&j.f1).unwrap().0 && is_symplectic(&j.f4).unwrap().0);
        assert_eq!(j.h4, j.split.h4);
    }

    #[test]
    fn factorization_gates() {
        let shear = time_one_map(&ham("p1^4 + p1*p2^3", 2));
        let Factorization::Exact(j) = jolt_factorize(&shear, &SampleBudget::default()).unwrap() else {
            panic!("exact factorization expected");
        };
        assert!(j.split.h1.is_zero());
        assert_eq!(j.f4, shear);
        let quad = time_one_map(&ham("p1^3", 1));
        assert!(matches!(jolt_factorize(&quad, &SampleBudget::default()), Err(Error::NotCubic { degree: 2 })));
    }
}
