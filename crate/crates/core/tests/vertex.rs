use std::sync::Arc;

use num_traits::One;
use voa_tensor::instances::{CommAlgebra, Instance};
use voa_tensor::series::{Dir, RationalFn};
use voa_tensor::vertex::axioms::{module_suite, skew_symmetry};
use voa_tensor::vertex::{
    conjugate_vo, o_involution, opposite_mode, tau_w, translate_pm, y_opposite, Contragredient, GradedSpace,
    LoopElement, RVec, Translation, VModule, Voa,
};
use voa_tensor::{ParamScalar, Rational, Scalar, ZParam};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn heis() -> Instance {
    Instance::heisenberg(4).unwrap()
}

fn id(v: &Voa, name: &str) -> u32 {
    v.adjoint.find(name).unwrap()
}

fn zp() -> ZParam<ParamScalar> {
    ZParam::new(ParamScalar::var()).unwrap()
}

#[test]
fn conjugate_vertex_operator_examples() {
    let h = heis();
    let v = &h.voa;
    let vac = id(v, "1");
    assert_eq!(conjugate_vo(v, vac).unwrap(), vec![(0, RVec::basis(vac))]);
    let a1 = id(v, "a(-1)1");
    assert_eq!(conjugate_vo(v, a1).unwrap(), vec![(-2, RVec::basis(a1).neg())]);
    let a2 = id(v, "a(-2)1");
    let got = conjugate_vo(v, a2).unwrap();
    assert_eq!(got, vec![(-4, RVec::basis(a2)), (-3, RVec::single(a1, q(2)))]);
}

#[test]
fn opposite_vertex_operator_examples() {
    let h = heis();
    let v = &h.voa;
    let f0 = v.adjoint.as_ref();
    let vac = id(v, "1");
    let a1 = id(v, "a(-1)1");
    for w in f0.basis_upto(3) {
        let y = y_opposite(v, f0, vac, w, 4).unwrap();
        assert_eq!(y, vec![(0, RVec::basis(w))]);
        // the n-th component of Y°(α(-1)𝟙, x) is -α(-n)
        for n in -4..=4 {
            let lhs = opposite_mode(v, f0, a1, n, w).unwrap();
            assert_eq!(lhs, f0.act(a1, -n, w).unwrap().neg());
        }
    }
    let a2 = CommAlgebra::a2();
    let inst = Instance::from_commalg(a2.clone(), vec![a2.regular_module()]).unwrap();
    let reg = inst.modules[0].1.clone();
    for v_ in 0..2u32 {
        for w in 0..2u32 {
            let y = y_opposite(&inst.voa, reg.as_ref(), v_, w, 0).unwrap();
            let prod = a2.mul(&RVec::basis(v_), &RVec::basis(w));
            let expect = if prod.is_zero() { vec![] } else { vec![(0, prod)] };
            assert_eq!(y, expect);
        }
    }
}

/// `Y(e^{xL(1)}(-x^{-2})^{L(0)}v, x^{-1})°` reassembled from components
/// equals `Y(v, x)`.
#[test]
fn opposite_of_opposite_is_original() {
    let h = heis();
    let v = &h.voa;
    let f0 = v.adjoint.as_ref();
    for vb in v.spanning(3) {
        let conj = conjugate_vo(v, vb).unwrap();
        for w in f0.basis_upto(2) {
            for k in -6..=6 {
                let mut lhs = RVec::new();
                for (e, u) in &conj {
                    let n = k - e - 1;
                    for (b, c) in u.entries() {
                        lhs.add_scaled(&opposite_mode(v, f0, *b, n, w).unwrap(), c);
                    }
                }
                assert_eq!(lhs, *f0.act(vb, -k - 1, w).unwrap(), "v={} w={} k={k}", f0.basis_name(vb), f0.basis_name(w));
            }
        }
    }
}

#[test]
fn contragredient_examples() {
    let a2 = CommAlgebra::a2();
    let inst = Instance::from_commalg(a2.clone(), vec![a2.regular_module()]).unwrap();
    let reg = inst.modules[0].1.clone();
    let dual: Arc<dyn VModule> = Arc::new(Contragredient::new(inst.voa.clone(), reg.clone()));
    let ddual = Contragredient::new(inst.voa.clone(), dual.clone());
    for v_ in 0..2u32 {
        for w in 0..2u32 {
            assert_eq!(ddual.act(v_, -1, w).unwrap(), reg.act(v_, -1, w).unwrap());
            // ⟨Y′(v,x)w′, w⟩ = ⟨w′, Y°(v,x)w⟩ = ⟨w′, v·w⟩
            for wp in 0..2u32 {
                let lhs = dual.act(v_, -1, wp).unwrap().get(w);
                let rhs = reg.act(v_, -1, w).unwrap().get(wp);
                assert_eq!(lhs, rhs);
            }
        }
    }
    // vacuum pairing
    let h = heis();
    let f0 = h.voa.adjoint.clone();
    let fd = Contragredient::new(h.voa.clone(), f0.clone());
    let vac = id(&h.voa, "1");
    for wp in f0.basis_upto(3) {
        for n in -3..=3 {
            let r = fd.act(vac, n, wp).unwrap();
            let expect = if n == -1 { RVec::basis(wp) } else { RVec::new() };
            assert_eq!(*r, expect);
        }
    }
    assert_eq!(fd.degree(vac), 0);
    assert_eq!(fd.basis_name(vac), "1'");
}

#[test]
fn contragredient_of_fock_satisfies_jacobi() {
    let h = heis();
    let f0 = h.voa.adjoint.clone();
    let fd = Contragredient::new(h.voa.clone(), f0.clone());
    let us = h.voa.spanning(2);
    let ws = f0.basis_upto(2);
    for rep in module_suite(&h.voa, &fd, &us, &ws, 4) {
        assert!(rep.pass(), "{rep:?}");
        assert!(rep.checked > 0);
    }
    let fdd = Contragredient::new(h.voa.clone(), Arc::new(fd) as Arc<dyn VModule>);
    for u in &us {
        for w in &ws {
            for n in -3..=3 {
                assert_eq!(fdd.act(*u, n, *w).unwrap(), f0.act(*u, n, *w).unwrap());
            }
        }
    }
}

#[test]
fn o_involution_examples() {
    let h = heis();
    let v = &h.voa;
    let vac = id(v, "1");
    let a1 = id(v, "a(-1)1");
    for n in -5..=5 {
        let e = LoopElement::<ParamScalar>::mode(vac, n);
        assert_eq!(o_involution(v, &e).unwrap(), LoopElement::mode(vac, -n - 2));
        let e = LoopElement::<ParamScalar>::mode(a1, n);
        assert_eq!(o_involution(v, &e).unwrap(), LoopElement::mode(a1, -n).scale(&ParamScalar::from_i64(-1)));
    }
}

#[test]
fn o_involution_squares_to_identity() {
    let h = heis();
    let v = &h.voa;
    let z = zp();
    let basis = v.spanning(3);
    // elements mixing Laurent monomials with (z^{-1} - t)^{-k} and (z + t)^{-k}
    for seed in 0..20u64 {
        let mut e = LoopElement::<ParamScalar>::new();
        for (i, &b) in basis.iter().enumerate() {
            if (seed + i as u64).is_multiple_of(3) {
                continue;
            }
            let k = (seed as i64 * 7 + i as i64 * 3) % 5 - 2;
            let mut f = RationalFn::monomial(k, ParamScalar::from_i64(1 + i as i64));
            if seed % 2 == 0 {
                let a = z.pow(-1).rneg();
                f = f.mul(&RationalFn::factor(a, ParamScalar::one(), 1 + (seed % 3) as i64).unwrap()).unwrap();
            } else {
                f = f.mul(&RationalFn::factor(z.z().clone(), ParamScalar::one(), 1).unwrap()).unwrap();
            }
            e.push(b, f).unwrap();
        }
        let oo = o_involution(v, &o_involution(v, &e).unwrap()).unwrap();
        assert_eq!(oo, e, "seed {seed}");
    }
}

#[test]
fn tau_w_examples() {
    let h = heis();
    let v = &h.voa;
    let f0 = v.adjoint.as_ref();
    let vac = id(v, "1");
    let z = zp();
    for vb in v.spanning(2) {
        for w in f0.basis_upto(2) {
            let r = tau_w(v, f0, &LoopElement::<ParamScalar>::mode(vb, 0), Dir::Plus, w, None).unwrap();
            let expect = f0.act(vb, 0, w).unwrap().map_scalars(ParamScalar::from_rational);
            assert_eq!(r, expect);
        }
    }
    // τ_W(𝟙 ⊗ f) w = (coefficient of t^{-1} in ι₊ f) w
    let f = RationalFn::factor(z.z().clone(), ParamScalar::one(), 1).unwrap().shift_t(-2);
    let c = f.iota_coeff(Dir::Plus, -1).unwrap();
    for w in f0.basis_upto(2) {
        let r = tau_w(v, f0, &LoopElement::single(vac, f.clone()), Dir::Plus, w, None).unwrap();
        assert_eq!(r, voa_tensor::vector::SparseVec::single(w, c.clone()));
    }
    // weight-zero collapse for the commutative algebra
    let a2 = CommAlgebra::a2();
    let inst = Instance::from_commalg(a2.clone(), vec![a2.regular_module()]).unwrap();
    let reg = inst.modules[0].1.clone();
    let s = 1u32;
    let r = tau_w(&inst.voa, reg.as_ref(), &LoopElement::single(s, f.clone()), Dir::Plus, s, None).unwrap();
    assert!(r.is_zero());
    let r = tau_w(&inst.voa, reg.as_ref(), &LoopElement::single(s, f.clone()), Dir::Plus, 0, None).unwrap();
    assert_eq!(r, voa_tensor::vector::SparseVec::single(s, c));
    // ι₋ expansions of a true rational function need a weight bound on F₀
    let err = tau_w(v, f0, &LoopElement::single(vac, f.clone()), Dir::Minus, vac, None);
    assert!(matches!(err, Err(voa_tensor::Error::TruncationOverflow { .. })));
}

#[test]
fn translate_pm_examples() {
    let h = heis();
    let v = &h.voa;
    let z = zp();
    let a1 = id(v, "a(-1)1");
    let e = LoopElement::single(a1, RationalFn::factor(z.z().clone(), ParamScalar::one(), 1).unwrap());
    let (r, dir) = translate_pm(v, &e, Translation::Plus, &z).unwrap();
    assert_eq!(dir, Dir::Plus);
    assert_eq!(r, LoopElement::mode(a1, -1));
    let (r, dir) = translate_pm(v, &e, Translation::O, &z).unwrap();
    assert_eq!(dir, Dir::Plus);
    // (α(-1)𝟙 ⊗ t^{-1})° = -α(-1)𝟙 ⊗ t
    assert_eq!(r, LoopElement::mode(a1, 1).scale(&ParamScalar::from_i64(-1)));
    let bad = LoopElement::single(a1, RationalFn::factor(z.z().clone(), ParamScalar::from_i64(-1), 1).unwrap());
    assert!(matches!(translate_pm(v, &bad, Translation::Minus, &z), Err(voa_tensor::Error::WrongLocalization(_))));
}

#[test]
fn weak_module_axioms_for_instances() {
    let h = heis();
    let f0 = h.voa.adjoint.clone();
    let us = h.voa.spanning(2);
    let ws = f0.basis_upto(3);
    for rep in module_suite(&h.voa, f0.as_ref(), &us, &ws, 4) {
        assert!(rep.pass(), "{rep:?}");
    }
    for name in ["a2", "z2", "qxq", "q"] {
        let inst = Instance::commalg(name).unwrap();
        let us = inst.voa.spanning(0);
        for (_, m) in &inst.modules {
            let ws = m.basis_upto(0);
            for rep in module_suite(&inst.voa, m.as_ref(), &us, &ws, 3) {
                assert!(rep.pass(), "{name}: {rep:?}");
            }
            let dual = Contragredient::new(inst.voa.clone(), m.clone());
            for rep in module_suite(&inst.voa, &dual, &us, &ws, 3) {
                assert!(rep.pass(), "{name}′: {rep:?}");
            }
        }
    }
}

#[test]
fn heisenberg_skew_symmetry() {
    let h = heis();
    let rep = skew_symmetry(&h.voa, &h.voa.spanning(3), 4);
    assert!(rep.pass(), "{rep:?}");
}

