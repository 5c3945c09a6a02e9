mod oracle;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jolt_core::classify::{
    affine_subspace_invariance, is_affine_integrable, is_shear, is_triple_nilpotent, recheck_product,
    sampled_affine, sampled_product, Tri,
};
use jolt_core::corpus;
use jolt_core::factorize::{split_simple, time_one_map};
use jolt_core::hamalg::{
    apply_linear, is_symplectic, lie_exp, linear_flow, poisson, quad_bracket, quadratic_form, Hamiltonian,
};
use jolt_core::normalform::{
    pointwise_normal_form, seminormal_at, shear_conjugator, simple_form_reduction, Reduction,
};
use jolt_core::polycore::{parse, Coeff, FieldSpec, Mat, Poly, PolyMatrix, Vars};
use jolt_core::sampling::{random_rational_point, SampleBudget};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

/// Random polynomial in the `2n` phase variables with small integer (or `√2`) coefficients.
fn arb_poly(n: usize, max_deg: u16, max_terms: usize, sqrt2: bool) -> impl Strategy<Value = Poly<Coeff>> {
    let term = (prop::collection::vec(0..=max_deg, 2 * n), -4i64..=4, if sqrt2 { -2i64..=2 } else { 0i64..=0 });
    prop::collection::vec(term, 0..=max_terms).prop_map(move |ts| {
        let vars = Vars::principal(n);
        let ts = ts.into_iter().filter(|(e, _, _)| e.iter().sum::<u16>() <= max_deg).map(|(e, a, b)| {
            let c = &Coeff::integer(a) + &(&Coeff::integer(b) * &Coeff::sqrt_of(2));
            (e, c)
        });
        Poly::from_terms(vars, ts.collect::<Vec<_>>())
    })
}

fn arb_point(dim: usize) -> impl Strategy<Value = Vec<Coeff>> {
    prop::collection::vec((-6i64..=6, 1i64..=4), dim)
        .prop_map(|v| v.into_iter().map(|(a, b)| Coeff::ratio(a, b)).collect())
}

fn arb_symmetric(n: usize) -> impl Strategy<Value = Mat<Coeff>> {
    prop::collection::vec(-3i64..=3, 4 * n * n).prop_map(move |v| {
        let m = 2 * n;
        Mat::from_fn(m, m, |i, j| {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            Coeff::integer(v[a * m + b])
        })
    })
}

fn budget() -> SampleBudget {
    SampleBudget::default()
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn print_parse_round_trip(p in arb_poly(2, 3, 6, true)) {
        let back = parse(&p.to_string(), 2, FieldSpec::Sqrt(2)).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn ring_laws(a in arb_poly(1, 2, 4, true), b in arb_poly(1, 2, 4, false), c in arb_poly(1, 2, 4, true)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn euler_identity(p in arb_poly(2, 4, 6, false)) {
        for (deg, comp) in p.homogeneous_components() {
            let vars = comp.vars();
            let mut acc = Poly::zero(vars);
            for i in 0..vars.count() {
                acc = &acc + &(&Poly::var(vars, i) * &comp.d(i));
            }
            prop_assert_eq!(acc, comp.scale(&Coeff::integer(deg as i64)));
        }
    }

    #[test]
    fn derivatives_commute(p in arb_poly(2, 4, 6, true), i in 0usize..4, j in 0usize..4) {
        prop_assert_eq!(p.d(i).d(j), p.d(j).d(i));
    }

    #[test]
    fn compose_is_a_ring_map(a in arb_poly(1, 2, 3, false), b in arb_poly(1, 2, 3, true),
                             s0 in arb_poly(1, 2, 3, false), s1 in arb_poly(1, 1, 3, false)) {
        let subs = [s0, s1];
        let lhs = (&a * &b).compose(&subs).unwrap();
        let rhs = &a.compose(&subs).unwrap() * &b.compose(&subs).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = (&a + &b).compose(&subs).unwrap();
        prop_assert_eq!(sum, &a.compose(&subs).unwrap() + &b.compose(&subs).unwrap());
    }

    #[test]
    fn evaluation_matches_oracle(p in arb_poly(2, 3, 6, true), x in arb_point(4)) {
        prop_assert_eq!(p.evaluate(&x).unwrap(), oracle::P::from_lib(&p).eval(&x));
    }

    #[test]
    fn bracket_antisymmetric_and_matches_oracle(f in arb_poly(2, 3, 5, true), g in arb_poly(2, 3, 5, false)) {
        let fg = poisson(&f, &g).unwrap();
        prop_assert_eq!(&fg, &poisson(&g, &f).unwrap().neg());
        let o = oracle::bracket(&oracle::P::from_lib(&f), &oracle::P::from_lib(&g), 2);
        prop_assert_eq!(oracle::P::from_lib(&fg), o);
    }

    #[test]
    fn jacobi_identity(f in arb_poly(2, 2, 4, false), g in arb_poly(2, 2, 4, true), h in arb_poly(2, 2, 4, false)) {
        let br = |a: &Poly<Coeff>, b: &Poly<Coeff>| poisson(a, b).unwrap();
        let total = &(&br(&f, &br(&g, &h)) + &br(&g, &br(&h, &f))) + &br(&h, &br(&f, &g));
        prop_assert!(total.is_zero());
    }

    #[test]
    fn field_derivative_is_infinitesimally_symplectic(p in arb_poly(2, 4, 6, true)) {
        let h = Hamiltonian::new(2, p).unwrap();
        let dx = h.dx();
        let j = PolyMatrix::constant(h.vars(), &Mat::j(2));
        let lhs = dx.transpose().try_mul(&j).unwrap().try_add(&j.try_mul(&dx).unwrap()).unwrap();
        prop_assert!(lhs.is_zero());
    }

    #[test]
    fn quad_bracket_agrees_with_poisson(f in arb_symmetric(2), g in arb_symmetric(2)) {
        let vars = Vars::principal(2);
        let e = quad_bracket(&f, &g).unwrap();
        let lhs = poisson(&quadratic_form(vars, &f), &quadratic_form(vars, &g)).unwrap();
        prop_assert_eq!(lhs, quadratic_form(vars, &e));
    }

    #[test]
    fn sampled_affine_agrees_with_symbolic(p in arb_poly(2, 3, 4, false)) {
        let h = Hamiltonian::new(2, p).unwrap();
        let exact = is_affine_integrable(&h).integrable;
        let sampled = sampled_affine(&h, 12, 5);
        prop_assert!(!exact || sampled.holds);
        if !sampled.holds {
            prop_assert!(!exact);
        }
    }
}

proptest! {
    #![proptest_config(cases(16))]

    #[test]
    fn lie_series_is_the_linear_flow(seed in any::<u64>(), coord in 0usize..4, t in -3i64..=3) {
        let (h, _) = corpus::conjugated_shear(&corpus::random_cubic_shear(2, seed), seed);
        let tc = Poly::constant(h.vars(), Coeff::ratio(t, 2));
        let f = Poly::var(h.vars(), coord);
        let series = lie_exp(h.poly(), &f, &tc).unwrap();
        let flow = linear_flow(&h, &tc).unwrap();
        prop_assert_eq!(series, f.compose(&flow).unwrap());
    }

    #[test]
    fn substitution_is_contravariant(seed in any::<u64>(), p in arb_poly(2, 3, 5, false)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = (corpus::random_exact_unitary(2, &mut rng), corpus::random_exact_unitary(2, &mut rng));
        let h = Hamiltonian::new(2, p).unwrap();
        let stepwise = apply_linear(&apply_linear(&h, &u.matrix(), 0.0).unwrap(), &v.matrix(), 0.0).unwrap();
        let at_once = apply_linear(&h, &u.then(&v).matrix(), 0.0).unwrap();
        prop_assert_eq!(stepwise, at_once);
        prop_assert!(u.is_exactly_unitary());
    }

    #[test]
    fn float_unitaries_are_unitary(seed in any::<u64>(), n in 1usize..5) {
        let u = corpus::random_float_unitary(n, seed);
        prop_assert!(u.defect() < 1e-12);
    }

    #[test]
    fn degree_three_is_a_shear(seed in any::<u64>(), n in 2usize..4) {
        let (h, _) = corpus::conjugated_shear(&corpus::random_cubic_shear(n, seed), seed);
        prop_assert_eq!(is_shear(&h, &budget()).unwrap().verdict, Tri::Yes);
        prop_assert!(is_triple_nilpotent(&h, &budget()).nilpotent);
    }

    #[test]
    fn shear_conjugator_removes_q(seed in any::<u64>()) {
        let (h, _) = corpus::conjugated_shear(&corpus::random_cubic_shear(2, seed), seed);
        let c = shear_conjugator(&h, &budget()).unwrap();
        prop_assert!(c.u.defect() < 1e-10);
        prop_assert!(c.q_residual < 1e-9);
        if let Some(k) = &c.k_exact {
            prop_assert!((0..2).all(|i| !k.depends_on(i)));
        }
    }

    #[test]
    fn pointwise_and_seminormal_forms(seed in any::<u64>()) {
        let (h, _) = corpus::conjugated_shear(&corpus::random_cubic_shear(2, seed), seed);
        let hf = h.to_float();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let x: Vec<f64> = random_rational_point(&mut rng, 4, 5).iter().map(|c| {
            use jolt_core::polycore::Scalar;
            c.to_f64()
        }).collect();
        let pn = pointwise_normal_form(&hf, &x, 1e-9).unwrap();
        prop_assert!(pn.u.defect() < 1e-10);
        prop_assert!(pn.residual < 1e-6 * (1.0 + pn.a.iter().fold(0.0f64, |m, a| m.max(a.abs()))));
        if let Ok(s) = seminormal_at(&hf, &x, 1e-9) {
            prop_assert!(s.b_equals_z_zeta);
            prop_assert!(s.zeta.is_symmetric(1e-8));
        }
    }

    #[test]
    fn split_pieces_commute_with_the_correction(seed in any::<u64>(), n in 2usize..4, d in 1usize..3) {
        prop_assume!(d < n);
        let form = corpus::random_simple_form(n, d, 4, seed);
        let s = split_simple(&form).unwrap();
        prop_assert!(poisson(&s.h1, &s.h3).unwrap().is_zero());
        prop_assert!(poisson(&s.h2, &s.h3).unwrap().is_zero());
        prop_assert_eq!(&s.h1 + &s.h2, s.h0.clone());
        for piece in [&s.h1, &s.h4] {
            let map = time_one_map(&Hamiltonian::new(n, piece.clone()).unwrap());
            prop_assert!(is_symplectic(&map).unwrap().0);
        }
        let deg = s.h0.degree().unwrap_or(0);
        prop_assert!(s.h3.degree().unwrap_or(0) <= 2 * deg.saturating_sub(1));
    }

    #[test]
    fn reduction_satisfies_integrability(seed in 0u64..400) {
        let inst = corpus::conjugated_simple(seed);
        match simple_form_reduction(&inst.h, &budget()) {
            Ok(Reduction::Exact(sf)) => {
                prop_assert!(sf.integrability_residual().iter().all(|p| p.is_zero()));
                prop_assert!(sf.d <= inst.form.d);
            }
            Ok(Reduction::Float(sf)) => {
                prop_assert!(sf.integrability_holds(1e-6));
                prop_assert!(sf.d <= inst.form.d);
            }
            Err(e) => prop_assert!(matches!(e, jolt_core::Error::NoRankNPoint), "{e}"),
        }
    }

    #[test]
    fn shear_witnesses_recheck(seed in any::<u64>()) {
        let inst = corpus::conjugated_simple(seed % 200);
        let s = is_shear(&inst.h, &budget());
        if let Ok(s) = s {
            if s.verdict == Tri::No {
                let w = s.witness.expect("witness for a non-shear");
                let v = recheck_product(&inst.h, &w).unwrap();
                prop_assert!(!v.is_zero());
                prop_assert_eq!(v, w.value);
            }
        }
    }
}

#[test]
fn implication_chain_on_corpus() {
    for e in corpus::entries() {
        let h = &e.hamiltonian;
        let tri = is_triple_nilpotent(h, &budget()).nilpotent;
        if let Ok(s) = is_shear(h, &budget()) {
            if s.verdict == Tri::Yes {
                assert!(tri, "{}: shear without triple nilpotency", e.name);
            }
        }
        if e.affine_integrable && tri {
            assert!(affine_subspace_invariance(h).unwrap(), "{}", e.name);
        }
        assert_eq!(is_affine_integrable(h).integrable, e.affine_integrable, "{}", e.name);
    }
}

#[test]
fn quartics_in_corpus_are_triple_nilpotent() {
    for e in corpus::entries() {
        let h = &e.hamiltonian;
        if e.affine_integrable && h.is_homogeneous() && h.degree() == Some(4) {
            assert!(is_triple_nilpotent(h, &budget()).nilpotent, "{}", e.name);
        }
        if e.affine_integrable && h.is_homogeneous() && h.degree() == Some(3) {
            assert_eq!(is_shear(h, &budget()).unwrap().verdict, Tri::Yes, "{}", e.name);
        }
    }
}

#[test]
fn sampled_products_agree_on_corpus() {
    for e in corpus::entries().into_iter().filter(|e| e.affine_integrable) {
        let h = &e.hamiltonian;
        let exact3 = is_triple_nilpotent(h, &budget()).nilpotent;
        assert_eq!(sampled_product(h, 3, 10, 1).holds, exact3, "{}", e.name);
        if let Ok(s) = is_shear(h, &budget()) {
            if s.verdict != Tri::Unknown {
                assert_eq!(sampled_product(h, 2, 10, 1).holds, s.verdict == Tri::Yes, "{}", e.name);
            }
        }
    }
}
