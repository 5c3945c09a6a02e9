//! Named example Hamiltonians and seeded random families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamalg::{substitute_linear, Hamiltonian, Unitary};
use crate::linalg::{inverse, rank};
use crate::normalform::{unitary_from_frame, SimpleForm};
use crate::polycore::{Coeff, FieldSpec, Mat, Monomial, Poly, PolyVec, Vars};

/// The affine-integrable Hamiltonian on `R^8` that is not a shear.
pub const COUNTEREXAMPLE_1_4: &str = "q1*p3^3 + sqrt(3)*q2*p3^2*p4 + p1*p4^3 - sqrt(3)*p2*p3*p4^2";

pub fn counterexample_1_4() -> Hamiltonian {
    Hamiltonian::parse(COUNTEREXAMPLE_1_4, 4, FieldSpec::Sqrt(3)).expect("corpus text parses")
}

/// `H(q,p) = pᵀf(Mq)` with the unitary built from `T = Mᵀ(MMᵀ)⁻¹M`, `S = I - T`.
#[derive(Clone, Debug)]
pub struct TrivialExample {
    pub m: Mat<Coeff>,
    pub h: Hamiltonian,
    pub u: Unitary,
}

/// `f` maps `R^m` to `R^n` and is given over `Vars::plain(m)`; `M` is `m × n` of full rank with `Mf = 0`.
pub fn trivial_family(m: &Mat<Coeff>, f: &[Poly<Coeff>]) -> Result<TrivialExample> {
    let (rows, n) = m.shape();
    if f.len() != n || f.iter().any(|fj| fj.nvars() != rows) {
        return Err(Error::ShapeMismatch(format!("f must have {n} components in {rows} variables")));
    }
    if rows > n || rank(m, 0.0) != rows {
        return Err(Error::Precondition("M must have full rank m <= n".into()));
    }
    for k in 0..rows {
        let mut acc = Poly::zero(f[0].vars());
        for (j, fj) in f.iter().enumerate() {
            acc = &acc + &fj.scale(m.get(k, j));
        }
        if !acc.is_zero() {
            return Err(Error::Precondition("Mf must vanish identically".into()));
        }
    }
    let vars = Vars::principal(n);
    let subs: PolyVec<Coeff> = (0..rows)
        .map(|k| (0..n).fold(Poly::zero(vars), |acc, j| &acc + &Poly::var(vars, j).scale(m.get(k, j))))
        .collect();
    let mut h = Poly::zero(vars);
    for (j, fj) in f.iter().enumerate() {
        h = &h + &(&Poly::var(vars, n + j) * &fj.compose(&subs)?);
    }
    let mt = m.transpose();
    let gram_inv = inverse(&(m * &mt), 0.0).expect("full rank");
    let t = &(&mt * &gram_inv) * m;
    let s = &Mat::identity(n) - &t;
    Ok(TrivialExample { m: m.clone(), h: Hamiltonian::new(n, h)?, u: Unitary::new(s, t) })
}

/// `M = (1, -1)`, `f(s) = (s², s²)`.
pub fn default_trivial() -> TrivialExample {
    let m = Mat::from_rows(vec![vec![Coeff::integer(1), Coeff::integer(-1)]]);
    let s = Poly::var(Vars::plain(1), 0);
    let s2 = &s * &s;
    trivial_family(&m, &[s2.clone(), s2]).expect("Mf = 0")
}

/// The Hamiltonian `K + Σ q_i V_i + Σ p_i W_i`, rejected unless the integrability condition holds.
pub fn simple_form(d: usize, k: Poly<Coeff>, v: PolyVec<Coeff>, w: PolyVec<Coeff>) -> Result<Hamiltonian> {
    let sf = SimpleForm::new(k.vars().n(), d, k, v, w)?;
    if !sf.integrability_holds(0.0) {
        return Err(Error::IntegrabilityViolated);
    }
    Ok(sf.hamiltonian())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_coeff<R: Rng>(rng: &mut R) -> Coeff {
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-5..=5);
    }
    Coeff::ratio(num, rng.gen_range(1..=3))
}

fn monomials_of_degree(indices: &[usize], degree: u32, out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
    if degree == 0 {
        out.push(prefix.clone());
        return;
    }
    for (k, &i) in indices.iter().enumerate() {
        prefix.push(i);
        monomials_of_degree(&indices[k..], degree - 1, out, prefix);
        prefix.pop();
    }
}

/// Homogeneous form of the given degree in the listed variables; each monomial is
/// kept with probability `density` and gets a random rational coefficient.
pub fn random_form<R: Rng>(vars: Vars, indices: &[usize], degree: u32, density: f64, rng: &mut R) -> Poly<Coeff> {
    let mut monos = Vec::new();
    monomials_of_degree(indices, degree, &mut monos, &mut Vec::new());
    let mut out = Poly::zero(vars);
    for (k, mono) in monos.iter().enumerate() {
        let keep = rng.gen_bool(density);
        if !keep && !(out.is_zero() && k + 1 == monos.len()) {
            continue;
        }
        let mut e = vec![0u16; vars.count()];
        for &i in mono {
            e[i] += 1;
        }
        out.add_term(Monomial::new(e), random_coeff(rng));
    }
    out
}

const PYTHAGOREAN: [(i64, i64, i64); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];

/// `S = P·diag(±1)`, `T = 0`.
pub fn random_signed_permutation<R: Rng>(n: usize, rng: &mut R) -> Unitary {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let signs: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let s = Mat::from_fn(n, n, |i, k| Coeff::integer(if perm[k] == i { signs[k] } else { 0 }));
    Unitary::new(s, Mat::zeros(n, n))
}

/// A signed permutation of all `2n` coordinates that commutes with `J`: a signed
/// permutation of the pairs followed by signed quarter turns on a non-empty subset.
pub fn random_unitary_permutation<R: Rng>(n: usize, rng: &mut R) -> Unitary {
    let perm = random_signed_permutation(n, rng);
    let mut mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let pick = rng.gen_range(0..n);
    mask[pick] = true;
    let sign: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let s = Mat::from_fn(n, n, |i, j| Coeff::integer((i == j && !mask[i]) as i64 * sign[i]));
    let t = Mat::from_fn(n, n, |i, j| Coeff::integer((i == j && mask[i]) as i64 * sign[i]));
    perm.then(&Unitary::new(s, t))
}

/// Product of signed permutations, quarter turns, Pythagorean plane rotations and
/// Pythagorean phases; all entries rational.
pub fn random_exact_unitary<R: Rng>(n: usize, rng: &mut R) -> Unitary {
    let mut u = random_signed_permutation(n, rng);
    for _ in 0..3 {
        let (a, b, c) = PYTHAGOREAN[rng.gen_range(0..PYTHAGOREAN.len())];
        let (ca, cb) = (Coeff::ratio(a, c), Coeff::ratio(b, c));
        let factor = match rng.gen_range(0..3) {
            0 => {
                let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
                let s = Mat::from_fn(n, n, |i, j| Coeff::integer((i == j && !mask[i]) as i64));
                let t = Mat::from_fn(n, n, |i, j| Coeff::integer((i == j && mask[i]) as i64));
                Unitary::new(s, t)
            }
            1 if n >= 2 => {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                let mut s = Mat::identity(n);
                s.set(i, i, ca.clone());
                s.set(j, j, ca.clone());
                s.set(i, j, -&cb);
                s.set(j, i, cb.clone());
                Unitary::new(s, Mat::zeros(n, n))
            }
            _ => {
                let i = rng.gen_range(0..n);
                let mut s = Mat::identity(n);
                let mut t = Mat::zeros(n, n);
                s.set(i, i, ca.clone());
                t.set(i, i, cb.clone());
                Unitary::new(s, t)
            }
        };
        u = u.then(&factor);
    }
    u
}

/// Unitary from J-invariant Gram-Schmidt on uniform random vectors.
pub fn random_float_unitary(n: usize, seed: u64) -> Unitary<f64> {
    let mut r = rng(seed);
    loop {
        let vecs: Vec<Vec<f64>> = (0..n).map(|_| (0..2 * n).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
        if let Some(u) = unitary_from_frame(&vecs, n) {
            return u;
        }
    }
}

/// `H ∘ U`.
pub fn conjugate(h: &Hamiltonian, u: &Unitary) -> Hamiltonian {
    let p = substitute_linear(h.poly(), &u.matrix()).expect("unitary of matching size");
    Hamiltonian::new(h.n(), p).expect("principal layout")
}

/// Random cubic `K(p)` with `n` degrees of freedom.
pub fn random_cubic_shear(n: usize, seed: u64) -> Poly<Coeff> {
    let vars = Vars::principal(n);
    let idx: Vec<usize> = (n..2 * n).collect();
    random_form(vars, &idx, 3, 0.7, &mut rng(seed))
}

/// `K ∘ U` for a seeded exact unitary `U`.
pub fn conjugated_shear(k: &Poly<Coeff>, seed: u64) -> (Hamiltonian, Unitary) {
    let n = k.vars().n();
    let u = random_exact_unitary(n, &mut rng(seed ^ 0x5eed));
    let h = conjugate(&Hamiltonian::new(n, k.clone()).expect("principal layout"), &u);
    (h, u)
}

/// Random simple form: `W = W0 + BV` with `B` symmetric, where `W0` is non-zero only for the
/// rational non-shear pair `V = c(z1³, 3z1²z2)`, `W0 = c(z2³, -z1z2²)`.
pub fn random_simple_form(n: usize, d: usize, degree: u32, seed: u64) -> SimpleForm<Coeff> {
    assert!(d < n && degree >= 2, "need d < n and degree >= 2");
    let mut r = rng(seed);
    let vars = Vars::principal(n);
    let bar: Vec<usize> = (n + d..2 * n).collect();
    let special = d == 2 && bar.len() >= 2 && degree == 4 && r.gen_bool(0.5);
    let (v, w0): (PolyVec<Coeff>, PolyVec<Coeff>) = if special {
        let c = random_coeff(&mut r);
        let (z1, z2) = (Poly::var(vars, bar[0]), Poly::var(vars, bar[1]));
        let z1sq = &z1 * &z1;
        let z2sq = &z2 * &z2;
        let v = vec![(&z1sq * &z1).scale(&c), (&z1sq * &z2).scale(&(&c * &Coeff::integer(3)))];
        let w = vec![(&z2sq * &z2).scale(&c), (&z1 * &z2sq).scale(&-&c)];
        (v, w)
    } else {
        let v = (0..d).map(|_| random_form(vars, &bar, degree - 1, 0.6, &mut r)).collect();
        (v, vec![Poly::zero(vars); d])
    };
    let mut b = Mat::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let c = if r.gen_bool(0.7) { random_coeff(&mut r) } else { Coeff::integer(0) };
            b.set(i, j, c.clone());
            b.set(j, i, c);
        }
    }
    let w = (0..d)
        .map(|i| (0..d).fold(w0[i].clone(), |acc, j| &acc + &v[j].scale(b.get(i, j))))
        .collect();
    let k = random_form(vars, &bar, degree, 0.5, &mut r);
    SimpleForm::new(n, d, k, v, w).expect("simple form by construction")
}

/// A simple form together with `H = H0 ∘ U` for a seeded exact unitary `U`.
#[derive(Clone, Debug)]
pub struct SimpleInstance {
    pub form: SimpleForm<Coeff>,
    pub u: Unitary,
    pub h: Hamiltonian,
}

/// Quartic simple form with `n ∈ {3, 4}`, `d ∈ {1, 2}`, conjugated by an exact unitary.
pub fn conjugated_simple(seed: u64) -> SimpleInstance {
    let mut r = rng(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let n = r.gen_range(3..=4);
    let d = r.gen_range(1..=2);
    let form = random_simple_form(n, d, 4, seed);
    let u = random_exact_unitary(n, &mut r);
    let h = conjugate(&form.hamiltonian(), &u);
    SimpleInstance { form, u, h }
}

/// The rational analogue of the counterexample: `V = (z1³, 3z1²z2)`, `W = (z2³, -z1z2²)`.
pub fn rational_nonshear() -> Hamiltonian {
    Hamiltonian::parse("q1*p3^3 + 3*q2*p3^2*p4 + p1*p4^3 - p2*p3*p4^2", 4, FieldSpec::Rational).expect("parses")
}

/// A named Hamiltonian with the classification it is expected to have.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub hamiltonian: Hamiltonian,
    pub affine_integrable: bool,
    pub shear: Option<bool>,
    pub triple_nilpotent: bool,
}

pub fn entries() -> Vec<CorpusEntry> {
    let entry = |name, hamiltonian, affine_integrable, shear, triple_nilpotent| CorpusEntry {
        name,
        hamiltonian,
        affine_integrable,
        shear,
        triple_nilpotent,
    };
    let text = |s: &str, n| Hamiltonian::parse(s, n, FieldSpec::Rational).expect("corpus text parses");
    vec![
        entry("counterexample_1_4", counterexample_1_4(), true, Some(false), true),
        entry("trivial", default_trivial().h, true, Some(true), true),
        entry("rational_nonshear", rational_nonshear(), true, Some(false), true),
        entry("quadratic_shear", text("p1^2", 1), true, Some(true), true),
        entry("q1p2sq", text("q1*p2^2", 2), true, Some(true), true),
        entry("cubic_shear", conjugated_shear(&random_cubic_shear(2, 1), 1).0, true, Some(true), true),
        entry("simple_quartic", conjugated_simple(7).h, true, None, true),
        entry("not_affine", text("q1^2*p1", 1), false, None, false),
    ]
}

/// Look up `name` among [`entries`].
pub fn lookup(name: &str) -> Option<Hamiltonian> {
    entries().into_iter().find(|e| e.name == name).map(|e| e.hamiltonian)
}

pub fn names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{is_affine_integrable, is_shear, is_triple_nilpotent};
    use crate::sampling::SampleBudget;

    #[test]
    fn counterexample_text_matches_parts() {
        let h = counterexample_1_4();
        let vars = Vars::principal(4);
        let v = |i| Poly::var(vars, i);
        let s3 = Coeff::sqrt_of(3);
        let expect = &(&(&(&v(0) * &(&(&v(6) * &v(6)) * &v(6))) + &(&(&v(1) * &(&(&v(6) * &v(6)) * &v(7))).scale(&s3)))
            + &(&v(4) * &(&(&v(7) * &v(7)) * &v(7))))
            - &(&(&v(5) * &(&(&v(6) * &v(7)) * &v(7))).scale(&s3));
        assert_eq!(*h.poly(), expect);
    }

    #[test]
    fn trivial_family_checks() {
        let t = default_trivial();
        assert_eq!(t.u.t.get(0, 1), &Coeff::ratio(-1, 2));
        assert!(t.u.is_exactly_unitary());
        let m = Mat::from_rows(vec![vec![Coeff::integer(1), Coeff::integer(1)]]);
        let s = Poly::var(Vars::plain(1), 0);
        assert!(matches!(trivial_family(&m, &[s.clone(), s]), Err(Error::Precondition(_))));
    }

    #[test]
    fn random_unitaries_are_unitary() {
        for seed in 0..10 {
            let u = random_exact_unitary(3, &mut rng(seed));
            assert!(u.is_exactly_unitary());
            assert!(random_unitary_permutation(3, &mut rng(seed)).is_exactly_unitary());
            assert!(random_float_unitary(3, seed).defect() < 1e-12);
        }
    }

    #[test]
    fn simple_forms_are_integrable() {
        for seed in 0..10 {
            let inst = conjugated_simple(seed);
            assert!(inst.form.integrability_holds(0.0));
            assert!(is_affine_integrable(&inst.h).integrable);
        }
    }

    #[test]
    fn corpus_integrity() {
        let b = SampleBudget::default();
        for e in entries() {
            let h = &e.hamiltonian;
            assert_eq!(is_affine_integrable(h).integrable, e.affine_integrable, "{}", e.name);
            assert_eq!(is_triple_nilpotent(h, &b).nilpotent, e.triple_nilpotent, "{}", e.name);
            if let Some(s) = e.shear {
                assert_eq!(is_shear(h, &b).unwrap().verdict.is_yes(), s, "{}", e.name);
            }
        }
        assert!(lookup("counterexample_1_4").is_some());
    }
}
