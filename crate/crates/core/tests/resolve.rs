use std::sync::Arc;

use dgha_core::dgmod::*;
use dgha_core::exactla::SparseVec;
use dgha_core::gralg::{
    cohomology_algebra, enveloping, validate_and_truncate, AlgebraPresentation, TruncatedDgAlgebra,
};
use dgha_core::resolve::*;
use dgha_core::Rational as Q;

type Alg = Arc<TruncatedDgAlgebra<Q>>;

fn build(p: AlgebraPresentation<Q>, top: usize) -> Alg {
    Arc::new(validate_and_truncate(&p, top).unwrap())
}

fn square_differential(top: usize) -> Alg {
    build(AlgebraPresentation::new(&[("x", 1), ("y", 1)]).with_differential("x", "y*y").unwrap(), top)
}

fn free(n: usize, top: usize) -> Alg {
    let names = ["x", "y", "z"];
    let gens: Vec<(&str, usize)> = names[..n].iter().map(|s| (*s, 1)).collect();
    build(AlgebraPresentation::new(&gens), top)
}

fn exterior(top: usize) -> Alg {
    build(AlgebraPresentation::new(&[("y", 1)]).with_relation("y*y").unwrap(), top)
}

fn sym_exterior(top: usize) -> Alg {
    build(
        AlgebraPresentation::new(&[("y", 1), ("z", 2)]).with_relation("y*y").unwrap().with_relation("y*z - z*y").unwrap(),
        top,
    )
}

fn resolve_k(a: &Alg) -> ResolutionResult<Q> {
    minimal_semifree_resolution(Arc::new(ExplicitDgModule::trivial(a.clone())), ResolveOptions::default()).unwrap()
}

#[test]
fn trivial_module_over_square_differential_algebra() {
    let a = square_differential(8);
    let res = resolve_k(&a);
    assert_eq!(res.f.len(), 3);
    assert!(res.f.gens().iter().all(|g| g.degree == 0));
    assert_eq!(res.f.stages(), vec![0, 1, 2]);
    assert!(res.f.is_minimal());
    assert!(!res.saturated);
    assert_eq!(res.certified_upto, 7);
    assert!(res.verify_quasi_iso().unwrap().is_quasi_iso());
    assert_eq!(res.f.format_d(1), "y*e0");
    assert_eq!(res.f.format_d(2), "x*e0 + y*e1");
    for v in deletion_check(&res).unwrap() {
        assert!(v.breaks_at.is_some(), "{v:?}");
    }
}

#[test]
fn trivial_module_over_free_algebras() {
    let res = resolve_k(&free(1, 6));
    assert_eq!(res.f.len(), 2);
    assert_eq!(res.f.format_d(1), "x*e0");
    let res = resolve_k(&free(2, 6));
    assert_eq!(res.f.len(), 3);
    assert_eq!(res.stage_profile(), vec![1, 2]);
}

#[test]
fn regular_module_needs_one_generator() {
    let a = square_differential(6);
    let res = minimal_semifree_resolution(Arc::new(ExplicitDgModule::regular(a)), ResolveOptions::default()).unwrap();
    assert_eq!(res.f.len(), 1);
    assert!(res.f.has_zero_differential());
    assert_eq!(res.eps, vec![SparseVec::unit(0)]);
}

#[test]
fn exterior_algebra_saturates_with_one_generator_per_stage() {
    let a = exterior(8);
    let res = resolve_k(&a);
    assert!(res.saturated);
    assert_eq!(res.stage_profile(), vec![1; 8]);
    for v in deletion_check(&res).unwrap() {
        assert!(v.breaks_at.is_some(), "{v:?}");
    }
}

#[test]
fn diagonal_bimodule_resolution() {
    let a = square_differential(6);
    let ae = Arc::new(enveloping(&a));
    let m = Arc::new(ExplicitDgModule::diagonal(a, ae));
    let res = minimal_semifree_resolution(m, ResolveOptions::default()).unwrap();
    assert_eq!(res.f.len(), 3);
    assert_eq!(res.f.stages(), vec![0, 1, 2]);
    assert!(res.f.is_minimal());
    assert!(res.verify_quasi_iso().unwrap().is_quasi_iso());
}

#[test]
fn betti_numbers_over_cohomology_ring() {
    let a = square_differential(10);
    let ha = cohomology_algebra(&a);
    let k = cohomology_module(&ExplicitDgModule::trivial(a.clone()), &ha);
    let r = graded_minimal_free_resolution(&k, 6, 8).unwrap();
    assert_eq!(r.betti_dims(), vec![1, 2, 2, 2, 2, 2, 2]);
    assert!(!r.terminated);
    assert!(r.is_minimal());
    r.check_exactness().unwrap();
    assert_eq!(r.tor_dims(), r.betti_dims());
    let expected: Vec<Vec<i32>> = (0..7).map(|i| if i == 0 { vec![0] } else { vec![i, i + 1] }).collect();
    assert_eq!(r.betti(), expected);
    assert_eq!(r.proj_dim(), ProjDim::AtLeast(6));
}

#[test]
fn betti_numbers_over_free_and_exterior() {
    let a = free(2, 8);
    let ha = cohomology_algebra(&a);
    let k = cohomology_module(&ExplicitDgModule::trivial(a.clone()), &ha);
    let r = graded_minimal_free_resolution(&k, 6, 7).unwrap();
    assert_eq!(r.betti_dims(), vec![1, 2]);
    assert!(r.terminated);
    assert_eq!(r.proj_dim(), ProjDim::Finite(1));
    r.check_exactness().unwrap();
    let e = exterior(9);
    let ha = cohomology_algebra(&e);
    let k = cohomology_module(&ExplicitDgModule::trivial(e.clone()), &ha);
    let r = graded_minimal_free_resolution(&k, 6, 7).unwrap();
    assert_eq!(r.betti_dims(), vec![1; 7]);
    let s = sym_exterior(9);
    let ha = cohomology_algebra(&s);
    let k = cohomology_module(&ExplicitDgModule::trivial(s.clone()), &ha);
    let r = graded_minimal_free_resolution(&k, 5, 7).unwrap();
    assert_eq!(r.betti_dims(), vec![1, 2, 2, 2, 2, 2]);
}

#[test]
fn eilenberg_moore_round_trip() {
    let a = square_differential(10);
    let ha = cohomology_algebra(&a);
    let m = Arc::new(ExplicitDgModule::trivial(a.clone()));
    let k = cohomology_module(&m, &ha);
    let r = graded_minimal_free_resolution(&k, 6, 8).unwrap();
    let em = eilenberg_moore(m.clone(), &ha, &r, 3).unwrap();
    em.f.verify().unwrap();
    let ex = ExplicitDgModule::expand(&em.f);
    ex.verify().unwrap();
    let eps = DgMorphism::from_generators(Arc::new(ex), m.clone(), em.eps.clone());
    eps.verify().unwrap();
    assert_eq!(em.f.len(), 5);
    // The first three stages carry no unit coefficients; one is forced as
    // soon as stage 3 is attached.
    assert!(em.f.is_minimal());
    let longer = eilenberg_moore(m.clone(), &ha, &r, 4).unwrap();
    assert_eq!(longer.f.unit_coefficients(), vec![(5, 2)]);
    let split = split_minimal(&longer.f, ResolveOptions::default()).unwrap();
    assert_eq!(split.minimal.f.len(), 5);
    assert!(matches!(split.verdict, HomotopyVerdict::TrivialOnWindow { .. }));
    let e1 = e1_complex(&em.f, &em.eps, &m, &ha, 8).unwrap();
    assert_eq!(e1.betti(), r.betti()[..3].to_vec());
    assert_eq!(e1.d, r.d[..2].to_vec());
    assert_eq!(e1.eps, r.eps);
    assert_eq!(check_minimal_em_conditions(&m, &r), EmCondition::NotGuaranteed);
}

#[test]
fn e1_of_minimal_resolution_is_not_exact() {
    let a = square_differential(10);
    let ha = cohomology_algebra(&a);
    let res = resolve_k(&a);
    let e1 = e1_complex(&res.f, &res.eps, &res.module, &ha, 8).unwrap();
    assert_eq!(e1.betti_dims(), vec![1, 1, 1]);
    // Exact at stage 1 only: y·R(-1) is both kernel and image there, while
    // z is not hit at stage 0 and y·w2 survives at the end.
    assert_eq!(e1.non_exact_stages().unwrap(), vec![0, 2]);
}

#[test]
fn split_minimal_cases() {
    let a = square_differential(7);
    let fk = resolve_k(&a).f;
    let s = split_minimal(&fk, ResolveOptions::default()).unwrap();
    assert_eq!(s.minimal.f.len(), 3);
    assert!(matches!(s.verdict, HomotopyVerdict::TrivialOnWindow { .. }), "{:?}", s.verdict);
    let mut c = SemiFreeDgModule::new(a.clone());
    c.push("u", 0, FreeElement::zero()).unwrap();
    c.push("v", -1, FreeElement::term(0, SparseVec::unit(0))).unwrap();
    let sum = fk.direct_sum(&c);
    let s = split_minimal(&sum, ResolveOptions::default()).unwrap();
    assert_eq!(s.minimal.f.len(), 3);
    assert!(matches!(s.verdict, HomotopyVerdict::TrivialOnWindow { .. }), "{:?}", s.verdict);
}
