use voa_tensor::instances::{CommAlgebra, DefFile, Instance};
use voa_tensor::vertex::{apply_mode, apply_virasoro, RVec};
use voa_tensor::{Error, Rational};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn b(i: u32) -> RVec {
    RVec::basis(i)
}

#[test]
fn trivial_algebra() {
    let inst = Instance::commalg("q").unwrap();
    let one = inst.adjoint().find("1").unwrap();
    assert_eq!(*inst.adjoint().act(one, -1, one).unwrap(), b(one));
    assert_eq!(inst.voa.vacuum, b(one));
}

#[test]
fn a2_products() {
    let inst = Instance::commalg("a2").unwrap();
    let v = inst.adjoint();
    let s = v.find("s").unwrap();
    assert!(v.act(s, -1, s).unwrap().is_zero());
    let one = v.find("1").unwrap();
    assert_eq!(*v.act(s, -1, one).unwrap(), b(s));
}

#[test]
fn commalg_vertex_operators_are_constant() {
    for name in ["q", "a2", "z2", "qxq"] {
        let inst = Instance::commalg(name).unwrap();
        for (_, m) in &inst.modules {
            for u in inst.voa.spanning(0) {
                for w in m.basis_upto(0) {
                    for n in -6..=6 {
                        if n != -1 {
                            assert!(m.act(u, n, w).unwrap().is_zero(), "{name} {} n={n}", m.label());
                        }
                    }
                }
                for j in -2..=2 {
                    assert!(inst.voa.adjoint.virasoro(j, u).unwrap().is_zero());
                }
                assert_eq!(inst.voa.weight(u), 0);
            }
        }
    }
}

#[test]
fn z2_degrees_add() {
    let inst = Instance::commalg("z2").unwrap();
    let v = inst.adjoint();
    for (_, m) in &inst.modules {
        for u in 0..2u32 {
            for w in 0..m.basis_upto(0).len() as u32 {
                for (x, _) in m.act(u, -1, w).unwrap().entries() {
                    assert_eq!(m.degree(*x), m.reduce_degree(v.degree(u) + m.degree(w)));
                }
            }
        }
    }
    let g = v.find("g").unwrap();
    assert_eq!(v.degree(g), 1);
    assert_eq!(*v.act(g, -1, g).unwrap(), b(v.find("1").unwrap()));
}

#[test]
fn builtin_modules() {
    let a2 = Instance::commalg("a2").unwrap();
    assert_eq!(a2.module("regular").unwrap().basis_upto(0).len(), 2);
    let quo = a2.module("quotient").unwrap();
    assert_eq!(quo.basis_upto(0).len(), 1);
    let s = a2.adjoint().find("s").unwrap();
    assert!(quo.act(s, -1, 0).unwrap().is_zero());
    let qxq = Instance::commalg("qxq").unwrap();
    let reg = qxq.module("regular").unwrap();
    let (e1, e2) = (qxq.adjoint().find("e1").unwrap(), qxq.adjoint().find("e2").unwrap());
    let x = apply_mode(reg.as_ref(), &b(e1), -1, &reg.act(e2, -1, e1).unwrap()).unwrap();
    assert!(x.is_zero());
    assert_eq!(*reg.act(e1, -1, e1).unwrap(), b(e1));
}

#[test]
fn constructor_rejects_bad_tables() {
    let names = || vec!["1".to_string(), "x".to_string()];
    let noncomm = CommAlgebra::new("bad", names(), vec![vec![b(0), b(1)], vec![b(0), b(0)]], vec![0, 0], 1);
    assert!(matches!(noncomm, Err(Error::NotCommutative(_, _))));
    // 1·1 = x, x·x = 1, 1·x = 0
    let nonassoc = CommAlgebra::new("bad", names(), vec![vec![b(1), RVec::new()], vec![RVec::new(), b(0)]], vec![0, 0], 1);
    assert!(matches!(nonassoc, Err(Error::NotAssociative(_, _, _))));
    let nounit = CommAlgebra::new("bad", names(), vec![vec![RVec::new(), RVec::new()], vec![RVec::new(), RVec::new()]], vec![0, 0], 1);
    assert!(matches!(nounit, Err(Error::NoUnit)));
    let a2 = CommAlgebra::a2();
    // s acting invertibly violates s² = 0
    let bad = a2.module("bad", vec!["w".into()], vec![0], vec![vec![vec![q(1)]], vec![vec![q(1)]]]);
    assert!(matches!(bad, Err(Error::NotAModule(_))));
}

fn alpha(n: i64, x: &RVec, inst: &Instance) -> RVec {
    let f0 = inst.adjoint();
    let a = f0.find("a(-1)1").unwrap();
    apply_mode(f0.as_ref(), &b(a), n, x).unwrap()
}

#[test]
fn heisenberg_commutator() {
    let h = Instance::heisenberg(5).unwrap();
    let f0 = h.adjoint();
    for w in f0.basis_upto(3) {
        for m in -2i64..=2 {
            for n in -2i64..=2 {
                if f0.weight(w) - m - n > 5 || f0.weight(w) - m > 5 || f0.weight(w) - n > 5 {
                    continue;
                }
                let x = b(w);
                let lhs = alpha(m, &alpha(n, &x, &h), &h).sub(&alpha(n, &alpha(m, &x, &h), &h));
                let rhs = if m + n == 0 { x.scale(&q(m)) } else { RVec::new() };
                assert_eq!(lhs, rhs, "m={m} n={n} w={}", f0.basis_name(w));
            }
        }
    }
    let vac = f0.find("1").unwrap();
    for n in 0..4 {
        assert!(alpha(n, &b(vac), &h).is_zero());
    }
}

#[test]
fn heisenberg_virasoro_examples() {
    let h = Instance::heisenberg(4).unwrap();
    let f0 = h.adjoint();
    let a1 = f0.find("a(-1)1").unwrap();
    let a2 = f0.find("a(-2)1").unwrap();
    assert_eq!(apply_virasoro(f0.as_ref(), 0, &b(a1)).unwrap(), b(a1));
    assert_eq!(apply_virasoro(f0.as_ref(), 1, &b(a2)).unwrap(), b(a1).scale(&q(2)));
    let vac = f0.find("1").unwrap();
    assert_eq!(*f0.act(a1, 1, a1).unwrap(), b(vac));
    for w in f0.basis_upto(4) {
        let l0 = apply_virasoro(f0.as_ref(), 0, &b(w)).unwrap();
        assert_eq!(l0, b(w).scale(&q(f0.weight(w))));
    }
}

#[test]
fn heisenberg_needs_cutoff_two() {
    assert!(matches!(Instance::heisenberg(1), Err(Error::Config(_))));
}

#[test]
fn definition_files_round_trip() {
    for name in ["a2", "z2", "qxq"] {
        let inst = Instance::commalg(name).unwrap();
        let (alg, mods) = inst.commalg.clone().unwrap();
        let def = voa_tensor::instances::defs::commalg_def(&alg, &mods).unwrap();
        let back = Instance::from_def(&DefFile::parse(&def.to_json()).unwrap()).unwrap();
        assert!(back.is_commalg());
        assert_eq!(back.modules.len(), inst.modules.len());
        for ((_, m), (_, n)) in inst.modules.iter().zip(&back.modules) {
            for u in inst.voa.spanning(0) {
                for w in m.basis_upto(0) {
                    assert_eq!(m.act(u, -1, w).unwrap(), n.act(u, -1, w).unwrap());
                }
            }
        }
    }
}
