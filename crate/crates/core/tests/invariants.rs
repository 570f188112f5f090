//! Property-based checks of the algebraic invariants.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use voa_tensor::dual::functional::LambdaSpec;
use voa_tensor::dual::properties::{verify_property, PropertyContext};
use voa_tensor::dual::report::PropertyReport;
use voa_tensor::dual::{DualFunctional, Flavor, PairCtx};
use voa_tensor::instances::{CommAlgebra, CommModule, Instance};
use voa_tensor::linalg::Matrix;
use voa_tensor::scalar::{format_rational, parse_rational};
use voa_tensor::series::{fs_mul, mk_binomial, mk_delta, Dir, Mono, RationalFn, Series, Vars};
use voa_tensor::tensor::{algebra_tensor_oracle, compat_subspace, find_isomorphism, tensor_product, FusionInput};
use voa_tensor::{gen_binom, ParamScalar, Rational, ZParam};

fn rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn laurent() -> impl Strategy<Value = ParamScalar> {
    prop::collection::vec((-4i32..=4, rat()), 0..4).prop_map(ParamScalar::from_terms)
}

fn zp() -> ZParam<ParamScalar> {
    ZParam::new(ParamScalar::var()).unwrap()
}

fn xy() -> Vars {
    Vars::new(&["x", "y"]).unwrap()
}

fn poly(vars: &Vars, terms: &[(Vec<i64>, Rational)]) -> Series<ParamScalar> {
    Series::polynomial(vars.clone(), terms.iter().map(|(e, c)| (e.clone(), ParamScalar::constant(c.clone()))).collect())
}

fn poly2() -> impl Strategy<Value = Vec<(Vec<i64>, Rational)>> {
    prop::collection::vec(((-3i64..=3, -3i64..=3), rat()), 1..4).prop_map(|v| v.into_iter().map(|((a, b), c)| (vec![a, b], c)).collect())
}

fn window2(r: i64) -> Vec<Vec<i64>> {
    (-r..=r).flat_map(|a| (-r..=r).map(move |b| vec![a, b])).collect()
}

proptest! {
    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() * b.clone(), b * a);
    }

    #[test]
    fn eval_is_a_ring_homomorphism(a in laurent(), b in laurent(), z0 in rat().prop_filter("nonzero", |r| !r.is_zero())) {
        let (ea, eb) = (a.eval(&z0).unwrap(), b.eval(&z0).unwrap());
        prop_assert_eq!((a.clone() * b.clone()).eval(&z0).unwrap(), &ea * &eb);
        prop_assert_eq!((a + b).eval(&z0).unwrap(), ea + eb);
    }

    #[test]
    fn rationals_are_reduced(p in -1000i64..1000, q in prop_oneof![-50i64..-1, 1i64..50]) {
        let r = parse_rational(&format!("{p}/{q}")).unwrap();
        prop_assert!(r.denom().is_positive());
        prop_assert!(r.numer().gcd(r.denom()).is_one());
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn delta_support_certificate(
        t in prop::collection::vec(-2i64..=2, 3),
        u in prop::collection::vec(-2i64..=2, 3),
        v in prop::option::of(prop::collection::vec(-2i64..=2, 3)),
        samples in prop::collection::vec(prop::collection::vec(-12i64..=12, 3), 200),
    ) {
        let vars = Vars::new(&["x", "y", "w"]).unwrap();
        let mono = |e: &Vec<i64>| Mono { c: Rational::one(), zpow: 0, exps: e.clone() };
        let Ok(s) = mk_delta(&vars, mono(&t), mono(&u), v.as_ref().map(mono), &zp()) else { return Ok(()) };
        for e in &samples {
            if !s.in_support(e) {
                prop_assert!(s.coeff(e).unwrap().is_zero(), "{e:?}");
            }
        }
    }

    #[test]
    fn binomial_support_certificate(m in -4i64..=4, samples in prop::collection::vec(prop::collection::vec(-12i64..=12, 2), 200)) {
        let vars = xy();
        let s = mk_binomial(&vars, Mono::var(&vars, "x").unwrap(), Mono::var(&vars, "y").unwrap(), m, &zp()).unwrap();
        for e in &samples {
            if !s.in_support(e) {
                prop_assert!(s.coeff(e).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn binomial_products_commute_and_associate(m1 in -3i64..=3, m2 in -3i64..=3, p in poly2()) {
        let vars = xy();
        let (x, y) = (Mono::var(&vars, "x").unwrap(), Mono::var(&vars, "y").unwrap());
        let a = mk_binomial(&vars, x.clone(), y.clone(), m1, &zp()).unwrap();
        let b = mk_binomial(&vars, x.clone(), y.clone(), m2, &zp()).unwrap();
        let c = poly(&vars, &p);
        let sum = mk_binomial(&vars, x, y, m1 + m2, &zp()).unwrap();
        let ab = fs_mul(&a, &b).unwrap();
        let ba = fs_mul(&b, &a).unwrap();
        let ab_c = fs_mul(&ab, &c).unwrap();
        let a_bc = fs_mul(&a, &fs_mul(&b, &c).unwrap()).unwrap();
        for e in window2(4) {
            prop_assert_eq!(ab.coeff(&e).unwrap(), ba.coeff(&e).unwrap());
            prop_assert_eq!(ab.coeff(&e).unwrap(), sum.coeff(&e).unwrap());
            prop_assert_eq!(ab_c.coeff(&e).unwrap(), a_bc.coeff(&e).unwrap());
        }
    }

    #[test]
    fn delta_products_commute_and_associate(p in poly2(), q in poly2()) {
        let vars = xy();
        let d = mk_delta(&vars, Mono::var(&vars, "x").unwrap(), Mono::var(&vars, "y").unwrap(), None, &zp()).unwrap();
        let (a, b) = (poly(&vars, &p), poly(&vars, &q));
        let l = fs_mul(&fs_mul(&d, &a).unwrap(), &b).unwrap();
        let r = fs_mul(&d, &fs_mul(&a, &b).unwrap()).unwrap();
        let s = fs_mul(&b, &fs_mul(&a, &d).unwrap()).unwrap();
        for e in window2(4) {
            prop_assert_eq!(l.coeff(&e).unwrap(), r.coeff(&e).unwrap());
            prop_assert_eq!(l.coeff(&e).unwrap(), s.coeff(&e).unwrap());
        }
    }

    #[test]
    fn substitution_principle(p in prop::collection::vec((-6i64..=6, rat()), 1..6)) {
        let vars = xy();
        let d = mk_delta(&vars, Mono::var(&vars, "x").unwrap(), Mono::var(&vars, "y").unwrap(), None, &zp()).unwrap();
        let px: Vec<_> = p.iter().map(|(k, c)| (vec![*k, 0], c.clone())).collect();
        let res = fs_mul(&d, &poly(&vars, &px)).unwrap().residue("x").unwrap();
        for k in -8..=8 {
            let want: Rational = p.iter().filter(|(e, _)| *e == k).map(|(_, c)| c.clone()).sum();
            prop_assert_eq!(res.coeff(&[k]).unwrap(), ParamScalar::constant(want));
        }
    }

    #[test]
    fn iota_difference_pairs_to_minus_p_of_minus_z(p in prop::collection::vec((-5i64..=5, rat()), 1..5)) {
        // ι₊ − ι₋ of 1/(z + t) is Σ_k (-1)^k z^{-k-1} t^k
        let z = ParamScalar::var();
        let f = RationalFn::factor(z.clone(), ParamScalar::one(), 1).unwrap();
        let diff = |k: i64| f.iota_coeff(Dir::Plus, k).unwrap() - f.iota_coeff(Dir::Minus, k).unwrap();
        for k in -8i64..=8 {
            let sign = if k.rem_euclid(2) == 0 { Rational::one() } else { -Rational::one() };
            prop_assert_eq!(diff(k), ParamScalar::monomial((-k - 1) as i32, sign));
        }
        let mut paired = ParamScalar::zero();
        let mut minus_p = ParamScalar::zero();
        for (k, c) in &p {
            paired = paired + ParamScalar::constant(c.clone()) * diff(-1 - k);
            let sign = if k.rem_euclid(2) == 0 { -c.clone() } else { c.clone() };
            minus_p = minus_p + ParamScalar::monomial(*k as i32, sign);
        }
        prop_assert_eq!(paired, minus_p);
    }

    #[test]
    fn lambda_specs_round_trip(seed in any::<u64>(), which in 0usize..4) {
        let spec = match which {
            0 => LambdaSpec::Zero,
            1 => LambdaSpec::Random { seed },
            2 => LambdaSpec::Balanced { seed },
            _ => LambdaSpec::Canonical { w_prime: format!("w{}", seed % 7) },
        };
        prop_assert_eq!(LambdaSpec::parse(&spec.render()).unwrap(), spec);
    }

    #[test]
    fn pass_iff_no_witnesses(pairs in prop::collection::vec((-3i64..=3, -3i64..=3), 0..20)) {
        let mut rep = PropertyReport::new("X", "anchor", "ctx", "window");
        for (a, b) in &pairs {
            rep.compare(&[*a], || "at".into(), a, b);
        }
        prop_assert_eq!(rep.pass, rep.witnesses.is_empty());
        prop_assert_eq!(rep.pass, pairs.iter().all(|(a, b)| a == b));
        prop_assert_eq!(rep.checked, pairs.len());
    }
}

#[test]
fn gen_binom_pascal() {
    for n in -10i64..=10 {
        assert!(gen_binom(n, 0).is_one());
        for k in 1u64..=10 {
            assert_eq!(gen_binom(n, k), gen_binom(n - 1, k) + gen_binom(n - 1, k - 1), "n={n} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn laws_hold_for_every_lambda(seed in any::<u64>()) {
        let h = Instance::heisenberg(4).unwrap();
        let f0 = h.adjoint();
        let ctx = PairCtx::new(h.voa.clone(), f0.clone(), f0, ParamScalar::var()).unwrap();
        let lambdas = vec![DualFunctional::random(&ctx, seed, 2)];
        let pc = PropertyContext { ctx: Arc::clone(&ctx), lambdas, gens: h.voa.spanning(2), jacobi_gens: h.voa.spanning(1), pair_bound: 2, radius: 2, cutoff: 4 };
        for id in ["P-IDENT", "P-DERIV", "P-COMM", "Q-IDENT", "Q-DERIV", "Q-COMM"] {
            let rep = verify_property(id, &pc).unwrap();
            prop_assert!(rep.pass, "{:?}", rep);
        }
    }
}

fn block_sum(alg: &CommAlgebra, label: &str, parts: &[CommModule]) -> CommModule {
    let n: usize = parts.iter().map(CommModule::dim).sum();
    let mut names = Vec::new();
    let mut degrees = Vec::new();
    let mut action: Vec<Matrix> = vec![vec![vec![Rational::zero(); n]; n]; alg.dim()];
    let mut off = 0;
    for (i, p) in parts.iter().enumerate() {
        names.extend(p.names.iter().map(|x| format!("{x}_{i}")));
        degrees.extend(&p.degrees);
        for (v, m) in p.action.iter().enumerate() {
            for (r, row) in m.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    action[v][off + r][off + c] = x.clone();
                }
            }
        }
        off += p.dim();
    }
    alg.module(label, names, degrees, action).unwrap()
}

fn summands(alg: &CommAlgebra, counts: &[(usize, &str)]) -> Vec<CommModule> {
    counts.iter().flat_map(|(k, name)| std::iter::repeat_n(alg.builtin_module(name).unwrap(), *k)).collect()
}

fn fuse_dims(alg: CommAlgebra, c1: &[(usize, &str)], c2: &[(usize, &str)]) -> (usize, usize, usize, bool) {
    let w1 = block_sum(&alg, "W1", &summands(&alg, c1));
    let w2 = block_sum(&alg, "W2", &summands(&alg, c2));
    let input = FusionInput { alg, w1, w2 };
    let p = compat_subspace(&input, Flavor::P).unwrap();
    let q = compat_subspace(&input, Flavor::Q).unwrap();
    assert!(p.verified && q.verified);
    let oracle = algebra_tensor_oracle(&input);
    let res = tensor_product(&input, Flavor::P).unwrap();
    let iso = find_isomorphism(&res.module.action, &oracle.action, 1).is_some();
    (p.dim(), q.dim(), oracle.dim(), iso)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn a2_fusion_dimensions(r1 in 0usize..=1, q1 in 0usize..=1, r2 in 0usize..=1, q2 in 0usize..=2) {
        prop_assume!(r1 + q1 > 0 && r2 + q2 > 0);
        // R ⊗ R = R, R ⊗ k = k, k ⊗ k = k over R = Q[s]/(s²), k = R/(s)
        let want = 2 * r1 * r2 + r1 * q2 + q1 * r2 + q1 * q2;
        let (p, q, o, iso) = fuse_dims(CommAlgebra::a2(), &[(r1, "regular"), (q1, "quotient")], &[(r2, "regular"), (q2, "quotient")]);
        prop_assert_eq!((p, q, o), (want, want, want));
        prop_assert!(iso);
    }

    #[test]
    fn qxq_fusion_dimensions(a1 in 0usize..=2, b1 in 0usize..=2, a2 in 0usize..=2, b2 in 0usize..=1) {
        prop_assume!(a1 + b1 > 0 && a2 + b2 > 0);
        let want = a1 * a2 + b1 * b2;
        let (p, q, o, iso) = fuse_dims(CommAlgebra::qxq(), &[(a1, "e1"), (b1, "e2")], &[(a2, "e1"), (b2, "e2")]);
        prop_assert_eq!((p, q, o), (want, want, want));
        prop_assert!(iso);
    }

    #[test]
    fn z2_fusion_dimensions(r1 in 0usize..=1, s1 in 0usize..=1, r2 in 0usize..=1, s2 in 0usize..=1) {
        prop_assume!(r1 + s1 > 0 && r2 + s2 > 0);
        let want = 2 * (r1 + s1) * (r2 + s2);
        let (p, q, o, iso) = fuse_dims(CommAlgebra::z2(), &[(r1, "regular"), (s1, "shifted")], &[(r2, "regular"), (s2, "shifted")]);
        prop_assert_eq!((p, q, o), (want, want, want));
        prop_assert!(iso);
    }
}
