use std::sync::Arc;

use dgha_core::dgmod::*;
use dgha_core::exactla::SparseVec;
use dgha_core::gralg::{cohomology_algebra, enveloping, validate_and_truncate, AlgebraPresentation, TruncatedDgAlgebra};
use dgha_core::Rational as Q;

fn tensor_with_square_differential(top: usize) -> Arc<TruncatedDgAlgebra<Q>> {
    let p = AlgebraPresentation::<Q>::new(&[("x", 1), ("y", 1)]).with_differential("x", "y*y").unwrap();
    Arc::new(validate_and_truncate(&p, top).unwrap())
}

fn exterior(top: usize) -> Arc<TruncatedDgAlgebra<Q>> {
    let p = AlgebraPresentation::<Q>::new(&[("y", 1)]).with_relation("y*y").unwrap();
    Arc::new(validate_and_truncate(&p, top).unwrap())
}

fn q(n: i64) -> Q {
    Q::new(n, 1)
}

/// Basis index of a word in the lexicographic word basis of the free algebra on x < y.
fn word(letters: &str) -> usize {
    letters.chars().fold(0, |acc, c| 2 * acc + usize::from(c == 'y'))
}

/// Three generators in degree 0: `∂e1 = y e0`, `∂e2 = y e1 + x e0`.
fn resolution_of_k(a: &Arc<TruncatedDgAlgebra<Q>>) -> SemiFreeDgModule<Q> {
    let mut f = SemiFreeDgModule::new(a.clone());
    f.push("e0", 0, FreeElement::zero()).unwrap();
    f.push("e1", 0, FreeElement::term(0, SparseVec::unit(word("y")))).unwrap();
    f.push(
        "e2",
        0,
        FreeElement::from_terms(vec![(1, SparseVec::unit(word("y"))), (0, SparseVec::unit(word("x")))]),
    )
    .unwrap();
    f
}

#[test]
fn word_index_matches_algebra_names() {
    let a = tensor_with_square_differential(4);
    assert_eq!(a.name(1, word("y")), "y");
    assert_eq!(a.name(3, word("xyx")), "x*y*x");
}

#[test]
fn expanded_resolution_has_expected_dimensions_and_verifies() {
    let a = tensor_with_square_differential(6);
    let f = resolution_of_k(&a);
    f.verify().unwrap();
    assert!(f.is_minimal());
    assert_eq!(f.stages(), vec![0, 1, 2]);
    let m = ExplicitDgModule::expand(&f);
    m.verify().unwrap();
    let dims: Vec<usize> = (0..=6).map(|n| m.dim(n)).collect();
    assert_eq!(dims, vec![3, 6, 12, 24, 48, 96, 192]);
}

#[test]
fn augmentation_from_resolution_is_a_quasi_isomorphism() {
    let a = tensor_with_square_differential(6);
    let f = Arc::new(ExplicitDgModule::expand(&resolution_of_k(&a)));
    let k = Arc::new(ExplicitDgModule::trivial(a.clone()));
    let eps = DgMorphism::from_generators(f, k, vec![SparseVec::unit(0), SparseVec::zero(), SparseVec::zero()]);
    eps.verify().unwrap();
    let report = is_quasi_iso_upto(&eps, 5).unwrap();
    assert!(report.is_quasi_iso(), "{report:?}");
    assert!(matches!(is_quasi_iso_upto(&eps, 6), Err(ModuleError::RangeExceeded { .. })));
}

#[test]
fn hom_into_k_and_tensor_with_k_have_zero_differential() {
    let a = tensor_with_square_differential(5);
    let f = resolution_of_k(&a);
    let hom = hom_complex(&f, &ExplicitDgModule::trivial(a.clone()));
    assert_eq!(hom.total_dim(), 3);
    assert_eq!(hom.dim(0), 3);
    assert!(hom.differential_is_zero());
    let t = tensor_k(&f);
    assert_eq!(t.dims, vec![3]);
    assert!(t.differential_is_zero());
}

#[test]
fn truncated_generator_list_is_not_a_resolution() {
    let a = tensor_with_square_differential(6);
    let mut f = SemiFreeDgModule::new(a.clone());
    f.push("e0", 0, FreeElement::zero()).unwrap();
    f.push("e1", 0, FreeElement::term(0, SparseVec::unit(word("y")))).unwrap();
    let src = Arc::new(ExplicitDgModule::expand(&f));
    let k = Arc::new(ExplicitDgModule::trivial(a));
    let eps = DgMorphism::from_generators(src, k, vec![SparseVec::unit(0), SparseVec::zero()]);
    assert!(!is_quasi_iso_upto(&eps, 4).unwrap().is_quasi_iso());
}

#[test]
fn hom_complex_squares_to_zero() {
    let a = tensor_with_square_differential(5);
    let f = resolution_of_k(&a);
    let hom = hom_complex(&f, &ExplicitDgModule::expand(&f));
    assert!(hom.check_d_squared());
    let hom_reg = hom_complex(&f, &ExplicitDgModule::regular(a));
    assert!(hom_reg.check_d_squared());
}

#[test]
fn cone_on_identity_is_contractible() {
    let a = tensor_with_square_differential(5);
    let f = resolution_of_k(&a);
    let images: Vec<_> = (0..f.len()).map(|i| FreeElement::term(i, SparseVec::unit(0))).collect();
    let c = f.mapping_cone(&f, &images).unwrap();
    c.verify().unwrap();
    let m = ExplicitDgModule::expand(&c);
    m.verify().unwrap();
    for n in m.low()..m.top() {
        assert_eq!(module_cohomology(&m, n).dim(), 0, "degree {n}");
    }
    assert!(matches!(is_homotopically_trivial(&c, (-3, 3)), HomotopyVerdict::TrivialOnWindow { .. }));
    assert_eq!(is_homotopically_trivial(&f, (-3, 3)), HomotopyVerdict::NontrivialClassFound(0));
}

#[test]
fn suspension_shifts_cohomology() {
    let a = tensor_with_square_differential(5);
    let f = resolution_of_k(&a);
    let s = f.suspension(2);
    s.verify().unwrap();
    let m = ExplicitDgModule::expand(&s);
    m.verify().unwrap();
    assert_eq!(m.low(), -2);
    assert_eq!(module_cohomology(&m, -2).dim(), 1);
    for n in -1..m.top() {
        assert_eq!(module_cohomology(&m, n).dim(), 0);
    }
    let back = s.suspension(-2);
    assert_eq!(back.gens().iter().map(|g| g.degree).collect::<Vec<_>>(), vec![0, 0, 0]);
    for (g, h) in back.gens().iter().zip(f.gens()) {
        assert_eq!(g.d, h.d);
    }
    let shifted = ExplicitDgModule::regular(a.clone()).suspension(3);
    shifted.verify().unwrap();
    assert_eq!(shifted.low(), -3);
}

#[test]
fn diagonal_bimodule_verifies() {
    let a = tensor_with_square_differential(3);
    let ae = Arc::new(enveloping(&a));
    let m = ExplicitDgModule::diagonal(a.clone(), ae);
    m.verify().unwrap();
    assert_eq!(m.dims(), vec![1, 2, 4, 8]);
    let e = exterior(4);
    let m = ExplicitDgModule::diagonal(e.clone(), Arc::new(enveloping(&e)));
    m.verify().unwrap();
}

#[test]
fn cohomology_module_of_k_over_exterior_algebra() {
    let e = exterior(4);
    let ha = cohomology_algebra(&e);
    let k = ExplicitDgModule::trivial(e.clone());
    let hk = cohomology_module(&k, &ha);
    assert_eq!(hk.dim(0), 1);
    let r = ExplicitDgModule::regular(e);
    let hr = cohomology_module(&r, &ha);
    assert_eq!(hr.dims(), vec![1, 1, 0, 0]);
    let y = SparseVec::unit(0);
    assert_eq!(hr.act(1, &y, 0, &SparseVec::unit(0)), SparseVec::unit(0));
}

#[test]
fn free_graded_module_dimensions() {
    let a = tensor_with_square_differential(4);
    let ha = cohomology_algebra(&a);
    let m = GradedModule::free(ha.algebra_ref(), ha.certified_upto(), &[0, 1]);
    assert_eq!(m.dim(0), 1);
    assert_eq!(m.dim(1), 2);
    assert_eq!(m.dim(2), 2);
    assert!(m.verify().is_ok());
}

#[test]
fn unit_coefficients_flag_non_minimal_generators() {
    let a = tensor_with_square_differential(4);
    let mut f = SemiFreeDgModule::new(a);
    f.push("u", 0, FreeElement::zero()).unwrap();
    f.push("v", -1, FreeElement::term(0, SparseVec::single(0, q(2)))).unwrap();
    assert!(!f.is_minimal());
    assert_eq!(f.unit_coefficients(), vec![(1, 0)]);
    let m = ExplicitDgModule::expand(&f);
    for n in m.low()..m.top() {
        assert_eq!(module_cohomology(&m, n).dim(), 0);
    }
}

#[test]
fn push_rejects_forward_references_and_bad_stages() {
    let a = tensor_with_square_differential(4);
    let mut f = SemiFreeDgModule::new(a);
    f.push("e0", 0, FreeElement::zero()).unwrap();
    assert!(matches!(
        f.push("e1", 0, FreeElement::term(3, SparseVec::unit(0))),
        Err(ModuleError::NotTriangular { .. })
    ));
    assert!(matches!(
        f.push_with_stage("e1", 0, 0, FreeElement::term(0, SparseVec::unit(word("y")))),
        Err(ModuleError::StageInconsistent { .. })
    ));
}
