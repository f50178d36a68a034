//! Property tests over a random family of small DG algebras.
//!
//! Generators come in two kinds: cycles, which satisfy every relation and
//! have zero differential, and the rest, whose differentials are random
//! polynomials in the cycles. Any such presentation has `∂² = 0` and a
//! `∂`-stable ideal, so every sample is a valid input.

use std::sync::Arc;

use dgha_core::dgmod::*;
use dgha_core::exactla::{rank, Matrix, SparseVec};
use dgha_core::gralg::{cohomology_algebra, enveloping, opposite, validate_and_truncate, AlgebraPresentation, TruncatedDgAlgebra};
use dgha_core::invariants::*;
use dgha_core::resolve::*;
use dgha_core::{Fp, Rational, Scalar};
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Sample {
    cycles: Vec<usize>,
    others: Vec<usize>,
    relations: Vec<String>,
    differential: Vec<String>,
    top: usize,
}

impl Sample {
    fn names(&self) -> Vec<(String, usize)> {
        let c = self.cycles.iter().enumerate().map(|(i, &d)| (format!("c{i}"), d));
        let x = self.others.iter().enumerate().map(|(i, &d)| (format!("x{i}"), d));
        c.chain(x).collect()
    }

    fn build<S: Scalar>(&self) -> Arc<TruncatedDgAlgebra<S>> {
        let names = self.names();
        let gens: Vec<(&str, usize)> = names.iter().map(|(n, d)| (n.as_str(), *d)).collect();
        let mut p = AlgebraPresentation::<S>::new(&gens);
        for r in &self.relations {
            p = p.with_relation(r).unwrap();
        }
        for (i, d) in self.differential.iter().enumerate() {
            p = p.with_differential(&format!("x{i}"), d).unwrap();
        }
        Arc::new(validate_and_truncate(&p, self.top).unwrap())
    }
}

/// Words in the cycles of total degree `n`.
fn words(degrees: &[usize], n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (g, &d) in degrees.iter().enumerate() {
        if d <= n {
            for mut w in words(degrees, n - d) {
                w.insert(0, g);
                out.push(w);
            }
        }
    }
    out
}

fn spell(w: &[usize]) -> String {
    w.iter().map(|g| format!("c{g}")).collect::<Vec<_>>().join("*")
}

/// A homogeneous polynomial in the cycles of degree `n`, or "0".
fn polynomial(degrees: &[usize], n: usize, picks: &[(usize, i64)]) -> String {
    let ws = words(degrees, n);
    if ws.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in picks.iter().filter(|(_, c)| *c != 0) {
        let sign = match (out.is_empty(), *c < 0) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(&format!("{sign}{}*{}", c.abs(), spell(&ws[i % ws.len()])));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn sample(max_top: usize) -> impl Strategy<Value = Sample> {
    let cycles = prop::collection::vec(1usize..=2, 1..=2);
    let others = prop::collection::vec(1usize..=2, 0..=2);
    let picks = prop::collection::vec((0usize..16, -2i64..=2), 0..=3);
    (
        cycles,
        others,
        prop::collection::vec((2usize..=3, picks.clone()), 0..=2),
        prop::collection::vec(picks, 2),
        4..=max_top,
    )
        .prop_map(|(cycles, others, rels, diffs, top)| {
            let relations = rels
                .iter()
                .map(|(n, picks)| polynomial(&cycles, *n, picks))
                .filter(|r| r != "0")
                .collect();
            let differential = others.iter().zip(&diffs).map(|(&d, picks)| polynomial(&cycles, d + 1, picks)).collect();
            Sample { cycles, others, relations, differential, top }
        })
}

/// Leibniz, associativity, unit and `∂² = 0` on every basis tuple.
fn check_tables<S: Scalar>(a: &TruncatedDgAlgebra<S>) -> Result<(), TestCaseError> {
    let top = a.top();
    let unit = SparseVec::<S>::unit(0);
    for n in 0..=top {
        for i in 0..a.dim(n) {
            let x = SparseVec::unit(i);
            prop_assert_eq!(&a.mul(0, &unit, n, &x), &x);
            prop_assert_eq!(&a.mul(n, &x, 0, &unit), &x);
            if n + 2 <= top {
                prop_assert!(a.d(n + 1, &a.d(n, &x)).is_zero());
            }
            for m in 0..=top - n {
                for j in 0..a.dim(m) {
                    let y = SparseVec::unit(j);
                    let xy = a.mul(n, &x, m, &y);
                    if n + m < top {
                        let mut rhs = a.mul(n + 1, &a.d(n, &x), m, &y);
                        rhs.add_scaled(&a.mul(n, &x, m + 1, &a.d(m, &y)), &S::sign(n as i64));
                        prop_assert_eq!(a.d(n + m, &xy), rhs);
                    }
                    for l in 0..=top - n - m {
                        for k in 0..a.dim(l) {
                            let z = SparseVec::unit(k);
                            prop_assert_eq!(a.mul(n + m, &xy, l, &z), a.mul(n, &x, m + l, &a.mul(m, &y, l, &z)));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn dense_rank<S: Scalar>(m: &Matrix<S>) -> usize {
    rank(m)
}

/// Betti numbers from a graded resolution by tensoring with `k` directly:
/// the reduced differential keeps the degree-0 coefficient between
/// generators of equal internal degree.
fn tor_by_tensoring<S: Scalar>(r: &MinimalFreeResolution<S>) -> Vec<usize> {
    let ring = r.ring();
    let reduced: Vec<Matrix<S>> = (1..r.stages())
        .map(|i| {
            let (src, tgt) = (&r.layouts[i], &r.layouts[i - 1]);
            let rows: Vec<Vec<S>> = (0..tgt.len())
                .map(|h| {
                    (0..src.len())
                        .map(|g| {
                            let t = src.degrees[g];
                            if tgt.degrees[h] != t {
                                return S::zero();
                            }
                            let off = tgt.offset(ring, t, h).unwrap();
                            r.d[i - 1][g].get(off)
                        })
                        .collect()
                })
                .collect();
            if rows.is_empty() || src.is_empty() {
                Matrix::zero(tgt.len(), src.len())
            } else {
                Matrix::from_rows(&rows)
            }
        })
        .collect();
    (0..r.stages())
        .map(|i| {
            let n = r.layouts[i].len();
            let out = if i > 0 { dense_rank(&reduced[i - 1]) } else { 0 };
            let inc = reduced.get(i).map_or(0, dense_rank);
            n - out - inc
        })
        .collect()
}

fn opts() -> InvariantOptions {
    InvariantOptions { stages: 4, ..InvariantOptions::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn algebra_tables_satisfy_the_dga_axioms(s in sample(5)) {
        check_tables(&*s.build::<Rational>())?;
        check_tables(&*s.build::<Fp<3>>())?;
        let a = s.build::<Rational>();
        check_tables(&opposite(&a))?;
        prop_assert!(a.verify().is_ok());
    }

    #[test]
    fn cohomology_of_the_envelope_is_the_envelope_of_cohomology(s in sample(4)) {
        let a = s.build::<Rational>();
        let h = cohomology_algebra(&a).dims();
        let he = cohomology_algebra(&enveloping(&a));
        for n in 0..=he.certified_upto().min(h.len() - 1) {
            let expected: usize = (0..=n).map(|i| h[i] * h[n - i]).sum();
            prop_assert_eq!(he.dim(n), expected, "degree {}", n);
        }
    }

    #[test]
    fn minimal_resolutions_of_k(s in sample(5)) {
        let a = s.build::<Rational>();
        let k = Arc::new(ExplicitDgModule::trivial(a.clone()));
        let res = minimal_semifree_resolution(k.clone(), ResolveOptions::default()).unwrap();
        res.f.verify().unwrap();
        // coefficientwise minimality: no coefficient of degree 0
        for (i, g) in res.f.gens().iter().enumerate() {
            for (j, c) in g.d.terms() {
                prop_assert!(c.is_zero() || g.degree + 1 - res.f.degree(*j) > 0, "generator {}", i);
            }
        }
        prop_assert!(tensor_k(&res.f).differential_is_zero());
        prop_assert!(hom_complex(&res.f, &k).differential_is_zero());
        prop_assert!(res.verify_quasi_iso().unwrap().is_quasi_iso());
        for v in deletion_check(&res).unwrap() {
            prop_assert!(v.breaks_at.is_some(), "{} is redundant", v.generator);
        }
        // k ⊗ F has one basis vector per generator
        let tk = tensor_k(&res.f);
        for (n, c) in res.degree_profile() {
            prop_assert_eq!(tk.dim(n), c);
        }
        // expand has the free-module dimensions
        let fx = ExplicitDgModule::expand(&res.f);
        for n in fx.low()..fx.top() {
            let expected: usize = res.f.gens().iter()
                .filter(|g| n >= g.degree && ((n - g.degree) as usize) <= a.top())
                .map(|g| a.dim((n - g.degree) as usize)).sum();
            prop_assert_eq!(fx.dim(n), expected);
        }
        // suspension round trip
        let shape = |f: &SemiFreeDgModule<Rational>| -> Vec<(i32, usize, FreeElement<Rational>)> {
            f.gens().iter().map(|g| (g.degree, g.stage, g.d.clone())).collect()
        };
        let back = res.f.suspension(3).suspension(-3);
        prop_assert_eq!(shape(&back), shape(&res.f));
        // determinism
        let again = minimal_semifree_resolution(k, ResolveOptions::default()).unwrap();
        prop_assert_eq!(again.f.gens(), res.f.gens());
        prop_assert_eq!(again.eps, res.eps);
    }

    #[test]
    fn graded_resolutions_and_em(s in sample(6)) {
        let a = s.build::<Rational>();
        let k = Arc::new(ExplicitDgModule::trivial(a.clone()));
        let ha = cohomology_algebra(&a);
        let r = cohomology_resolution(&k, &ha, &opts()).unwrap();
        r.check_exactness().unwrap();
        prop_assert!(r.is_minimal());
        prop_assert_eq!(tor_by_tensoring(&r), r.betti_dims());
        prop_assert_eq!(r.tor_dims(), r.betti_dims());
        let stages = r.stages().min(3);
        let em = eilenberg_moore(k.clone(), &ha, &r, stages).unwrap();
        em.f.verify().unwrap();
        let e1 = e1_complex(&em.f, &em.eps, &k, &ha, r.window).unwrap();
        prop_assert_eq!(e1.betti(), r.betti()[..stages].to_vec());
        prop_assert_eq!(&e1.d[..], &r.d[..stages - 1]);
        prop_assert_eq!(e1.eps, r.eps.clone());
    }

    #[test]
    fn cone_length_bounds_are_ordered(s in sample(6)) {
        let a = s.build::<Rational>();
        let k = Arc::new(ExplicitDgModule::trivial(a.clone()));
        let analysis = cone_length_report(k, &opts()).unwrap();
        let r = &analysis.report;
        prop_assert!(r.grade.lower() <= r.lower);
        if let Some(u) = r.upper.finite() {
            prop_assert!(r.lower <= u);
        }
        if let (Some(u), ProjDim::Finite(p)) = (r.upper.finite(), &r.pd) {
            prop_assert!(u <= *p);
        }
        prop_assert!(!r.exact || r.upper.finite() == Some(r.lower));
        // greedy layers form a filtration: differentials only reach lower layers
        if let Some(g) = &r.greedy {
            let f = &analysis.resolution.f;
            for (i, gen) in f.gens().iter().enumerate() {
                for j in gen.d.generators() {
                    prop_assert!(g.layers[j] < g.layers[i]);
                }
            }
            prop_assert_eq!(g.length, g.layers.iter().copied().max().unwrap_or(0));
        }
    }

    #[test]
    fn cited_rules_hold(s in sample(5)) {
        let a = s.build::<Rational>();
        for side in [Side::Left, Side::Right] {
            let g = global_dimension_report(a.clone(), side, &opts(), false).unwrap();
            if g.rule.is_some() {
                prop_assert!(g.rule_holds(), "{:?}", g);
            }
        }
        let sm = smoothness_report(a, &opts(), false).unwrap();
        if sm.verdict == SmoothnessVerdict::SmoothEvidence {
            prop_assert!(sm.stabilization_window.is_some());
        }
    }
}

#[test]
fn free_algebras_have_power_dimensions() {
    for g in 1..=3usize {
        let names: Vec<String> = (0..g).map(|i| format!("t{i}")).collect();
        let gens: Vec<(&str, usize)> = names.iter().map(|n| (n.as_str(), 1)).collect();
        let a = validate_and_truncate(&AlgebraPresentation::<Rational>::new(&gens), 5).unwrap();
        assert_eq!(a.dims(), (0..=5).map(|n| g.pow(n as u32)).collect::<Vec<_>>());
        assert_eq!(cohomology_algebra(&a).dims()[..5], a.dims()[..5]);
    }
}

