use std::collections::HashMap;

use crate::exactla::{Matrix, Quotient, SparseVec};
use crate::scalar::Scalar;

use super::algebra::TruncatedDgAlgebra;
use super::poly::{parse_poly, NcPolynomial, PolyParseError};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: usize,
}

/// Generators, relations and differential of a DG algebra.
///
/// `differential[g]` is the image of generator `g`; zero when absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation<S> {
    pub generators: Vec<GeneratorSpec>,
    pub relations: Vec<NcPolynomial<S>>,
    pub differential: Vec<NcPolynomial<S>>,
    pub asserts_h_noetherian: bool,
}

impl<S: Scalar> AlgebraPresentation<S> {
    pub fn new(generators: &[(&str, usize)]) -> Self {
        AlgebraPresentation {
            generators: generators.iter().map(|&(n, d)| GeneratorSpec { name: n.to_string(), degree: d }).collect(),
            relations: Vec::new(),
            differential: vec![NcPolynomial::zero(); generators.len()],
            asserts_h_noetherian: false,
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn parse(&self, text: &str) -> Result<NcPolynomial<S>, PolyParseError> {
        parse_poly(text, &self.names())
    }

    /// Adds a relation given in surface syntax.
    pub fn with_relation(mut self, text: &str) -> Result<Self, PolyParseError> {
        let p = self.parse(text)?;
        self.relations.push(p);
        Ok(self)
    }

    /// Sets the differential of the named generator.
    pub fn with_differential(mut self, name: &str, text: &str) -> Result<Self, PolyParseError> {
        let p = self.parse(text)?;
        let g = self.generator_index(name).ok_or(PolyParseError {
            col: 1,
            kind: super::poly::PolyParseErrorKind::UnknownGenerator(name.to_string()),
        })?;
        self.differential[g] = p;
        Ok(self)
    }

    pub fn with_noetherian_assertion(mut self, flag: bool) -> Self {
        self.asserts_h_noetherian = flag;
        self
    }

    /// Checks the degree conditions that do not need the truncation.
    pub fn check_degrees(&self) -> Result<(), AlgebraError> {
        let degrees = self.degrees();
        if let Some(g) = self.generators.iter().find(|g| g.degree == 0) {
            return Err(AlgebraError::NotConnected { generator: g.name.clone() });
        }
        for (index, r) in self.relations.iter().enumerate() {
            if r.homogeneous_degree(&degrees).is_err() {
                return Err(AlgebraError::InhomogeneousRelation { index });
            }
        }
        for (g, p) in self.differential.iter().enumerate() {
            let expected = degrees[g] + 1;
            match p.homogeneous_degree(&degrees) {
                Ok(None) => {}
                Ok(Some(d)) if d == expected => {}
                Ok(Some(d)) => {
                    return Err(AlgebraError::DifferentialDegreeMismatch {
                        generator: self.generators[g].name.clone(),
                        expected,
                        found: Some(d),
                    })
                }
                Err(_) => {
                    return Err(AlgebraError::DifferentialDegreeMismatch {
                        generator: self.generators[g].name.clone(),
                        expected,
                        found: None,
                    })
                }
            }
        }
        Ok(())
    }
}

/// Words in the generators, degree by degree, in lexicographic order of
/// generator indices.
struct Words {
    by_degree: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Words {
    fn new(degrees: &[usize], top: usize) -> Self {
        let mut by_degree: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
        for n in 1..=top {
            let mut words = Vec::new();
            for (g, &d) in degrees.iter().enumerate() {
                if d <= n {
                    for tail in &by_degree[n - d] {
                        let mut w = Vec::with_capacity(tail.len() + 1);
                        w.push(g);
                        w.extend_from_slice(tail);
                        words.push(w);
                    }
                }
            }
            by_degree.push(words);
        }
        let index = by_degree
            .iter()
            .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
            .collect();
        Words { by_degree, index }
    }

    fn dim(&self, n: usize) -> usize {
        self.by_degree[n].len()
    }

    fn find(&self, n: usize, w: &[usize]) -> usize {
        self.index[n][w]
    }

    fn poly_vec<S: Scalar>(&self, n: usize, p: &NcPolynomial<S>) -> SparseVec<S> {
        p.terms.iter().map(|(c, w)| (self.find(n, w), c.clone())).collect()
    }
}

struct FreeDifferential<'a, S> {
    words: &'a Words,
    degrees: &'a [usize],
    /// `delta[g]` as a vector on words of degree `|g| + 1`.
    delta: Vec<SparseVec<S>>,
}

impl<S: Scalar> FreeDifferential<'_, S> {
    /// Leibniz extension on a word of degree `n`; lands in degree `n + 1`.
    fn on_word(&self, n: usize, w: &[usize]) -> SparseVec<S> {
        let mut pairs = Vec::new();
        let mut prefix_degree = 0;
        for (p, &g) in w.iter().enumerate() {
            let sign = S::sign(prefix_degree as i64);
            for (idx, c) in self.delta[g].iter() {
                let mid = &self.words.by_degree[self.degrees[g] + 1][idx];
                let mut word = Vec::with_capacity(w.len() + mid.len());
                word.extend_from_slice(&w[..p]);
                word.extend_from_slice(mid);
                word.extend_from_slice(&w[p + 1..]);
                pairs.push((self.words.find(n + 1, &word), sign.clone() * c.clone()));
            }
            prefix_degree += self.degrees[g];
        }
        SparseVec::from_pairs(pairs)
    }

    fn on_vec(&self, n: usize, v: &SparseVec<S>) -> SparseVec<S> {
        let mut out = SparseVec::zero();
        for (i, c) in v.iter() {
            out.add_scaled(&self.on_word(n, &self.words.by_degree[n][i]), c);
        }
        out
    }
}

/// Materializes the presentation in degrees `0..=top`.
///
/// Degree `n` of the algebra is the span of words of degree `n` modulo the
/// ideal slice spanned by `u r v`; the basis is the lexicographically
/// smallest set of words completing that slice.
pub fn validate_and_truncate<S: Scalar>(
    p: &AlgebraPresentation<S>,
    top: usize,
) -> Result<TruncatedDgAlgebra<S>, AlgebraError> {
    if top < 1 {
        return Err(AlgebraError::TruncationTooSmall { requested: top, minimum: 1 });
    }
    p.check_degrees()?;
    let degrees = p.degrees();
    let words = Words::new(&degrees, top);
    let delta: Vec<SparseVec<S>> = p
        .differential
        .iter()
        .enumerate()
        .map(|(g, poly)| if degrees[g] < top { words.poly_vec(degrees[g] + 1, poly) } else { SparseVec::zero() })
        .collect();
    let free_d = FreeDifferential { words: &words, degrees: &degrees, delta };

    let relations: Vec<(usize, &NcPolynomial<S>)> = p
        .relations
        .iter()
        .filter_map(|r| r.homogeneous_degree(&degrees).ok().flatten().map(|d| (d, r)))
        .collect();

    // Ideal slices and normal-form bases.
    let mut quotients: Vec<Option<Quotient<S>>> = Vec::with_capacity(top + 1);
    let mut basis_words: Vec<Vec<usize>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut ideal = Vec::new();
        for &(d, r) in &relations {
            if d > n {
                continue;
            }
            for a in 0..=n - d {
                for u in &words.by_degree[a] {
                    for v in &words.by_degree[n - d - a] {
                        let pairs = r
                            .terms
                            .iter()
                            .map(|(c, w)| {
                                let mut word = u.clone();
                                word.extend_from_slice(w);
                                word.extend_from_slice(v);
                                (words.find(n, &word), c.clone())
                            })
                            .collect();
                        ideal.push(SparseVec::from_pairs(pairs));
                    }
                }
            }
        }
        if ideal.is_empty() {
            basis_words.push((0..words.dim(n)).collect());
            quotients.push(None);
        } else {
            let units: Vec<SparseVec<S>> = (0..words.dim(n)).map(SparseVec::unit).collect();
            let q = Quotient::new_unchecked(words.dim(n), &units, &ideal);
            basis_words.push(q.representatives().iter().map(|r| r.leading().unwrap().0).collect());
            quotients.push(Some(q));
        }
    }
    if basis_words[0].is_empty() {
        return Err(AlgebraError::NotConnected { generator: String::new() });
    }
    let reduce = |n: usize, v: &SparseVec<S>| -> SparseVec<S> {
        match &quotients[n] {
            None => v.clone(),
            Some(q) => q.classify(v).expect("every word lies in the free algebra"),
        }
    };

    for (g, spec) in p.generators.iter().enumerate() {
        if degrees[g] + 2 <= top {
            let dd = free_d.on_vec(degrees[g] + 1, &free_d.delta[g]);
            if !reduce(degrees[g] + 2, &dd).is_zero() {
                return Err(AlgebraError::LeibnizSquareNonzero { generator: spec.name.clone() });
            }
        }
    }
    for (index, &(d, r)) in relations.iter().enumerate() {
        if d < top {
            let dr = free_d.on_vec(d, &words.poly_vec(d, r));
            if !reduce(d + 1, &dr).is_zero() {
                return Err(AlgebraError::DifferentialNotIdealCompatible { index });
            }
        }
    }

    let names: Vec<Vec<String>> = (0..=top)
        .map(|n| {
            basis_words[n]
                .iter()
                .map(|&w| {
                    let word = &words.by_degree[n][w];
                    if word.is_empty() {
                        "1".to_string()
                    } else {
                        word.iter().map(|&g| p.generators[g].name.as_str()).collect::<Vec<_>>().join("*")
                    }
                })
                .collect()
        })
        .collect();

    let mut products = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut row = Vec::with_capacity(top - n + 1);
        for m in 0..=top - n {
            let mut table = Vec::with_capacity(basis_words[n].len() * basis_words[m].len());
            for &u in &basis_words[n] {
                for &v in &basis_words[m] {
                    let mut word = words.by_degree[n][u].clone();
                    word.extend_from_slice(&words.by_degree[m][v]);
                    table.push(reduce(n + m, &SparseVec::unit(words.find(n + m, &word))));
                }
            }
            row.push(table);
        }
        products.push(row);
    }

    let diff = (0..top)
        .map(|n| {
            let cols = basis_words[n]
                .iter()
                .map(|&w| reduce(n + 1, &free_d.on_word(n, &words.by_degree[n][w])))
                .collect();
            Matrix::from_columns(basis_words[n + 1].len(), cols)
        })
        .collect();

    let generators = degrees
        .iter()
        .enumerate()
        .map(|(g, &d)| (d <= top).then(|| (d, reduce(d, &SparseVec::unit(words.find(d, &[g]))))))
        .collect();
    let alg = TruncatedDgAlgebra::from_tables(top, names, products, diff)?;
    Ok(alg.with_noetherian_assertion(p.asserts_h_noetherian).with_generators(generators))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn example() -> AlgebraPresentation<Q> {
        AlgebraPresentation::new(&[("x", 1), ("y", 1)]).with_differential("x", "y*y").unwrap()
    }

    #[test]
    fn free_word_counts() {
        let a = validate_and_truncate(&example(), 6).unwrap();
        assert_eq!(a.dims(), vec![1, 2, 4, 8, 16, 32, 64]);
        let one = validate_and_truncate(&AlgebraPresentation::<Q>::new(&[("x", 1)]), 5).unwrap();
        assert_eq!(one.dims(), vec![1; 6]);
        assert!(one.is_zero_differential());
    }

    #[test]
    fn exterior_relation_kills_everything_above_one() {
        let p = AlgebraPresentation::<Q>::new(&[("y", 1)]).with_relation("y*y").unwrap();
        let a = validate_and_truncate(&p, 5).unwrap();
        assert_eq!(a.dims(), vec![1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn commutation_relation_gives_commutative_monomials() {
        let p = AlgebraPresentation::<Q>::new(&[("y", 1), ("z", 2)])
            .with_relation("y*y")
            .unwrap()
            .with_relation("y*z - z*y")
            .unwrap();
        let a = validate_and_truncate(&p, 6).unwrap();
        assert_eq!(a.dims(), vec![1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(a.name(3, 0), "y*z");
    }

    #[test]
    fn differential_on_words() {
        let a = validate_and_truncate(&example(), 4).unwrap();
        // ∂(x*y) = y*y*y since ∂y = 0; ∂(y*x) = -y*y*y.
        let xy = a.names(2).iter().position(|n| n == "x*y").unwrap();
        let yx = a.names(2).iter().position(|n| n == "y*x").unwrap();
        let yyy = a.names(3).iter().position(|n| n == "y*y*y").unwrap();
        assert_eq!(a.d(2, &SparseVec::unit(xy)), SparseVec::unit(yyy));
        assert_eq!(a.d(2, &SparseVec::unit(yx)), SparseVec::unit(yyy).neg());
    }

    #[test]
    fn presentation_errors() {
        let p = AlgebraPresentation::<Q>::new(&[("x", 1), ("y", 3)]).with_relation("x*x + y").unwrap();
        assert_eq!(validate_and_truncate(&p, 4).unwrap_err(), AlgebraError::InhomogeneousRelation { index: 0 });

        let p = AlgebraPresentation::<Q>::new(&[("x", 1), ("y", 1)]).with_differential("y", "x").unwrap();
        assert!(matches!(validate_and_truncate(&p, 4), Err(AlgebraError::DifferentialDegreeMismatch { .. })));

        // ∂²x = x*x*x.
        let p = AlgebraPresentation::<Q>::new(&[("x", 1), ("y", 1), ("z", 2)])
            .with_differential("x", "z")
            .unwrap()
            .with_differential("z", "x*x*x")
            .unwrap();
        assert_eq!(validate_and_truncate(&p, 4).unwrap_err(), AlgebraError::LeibnizSquareNonzero { generator: "x".into() });

        let p = AlgebraPresentation::<Q>::new(&[("x", 0)]);
        assert!(matches!(validate_and_truncate(&p, 3), Err(AlgebraError::NotConnected { .. })));

        let p = AlgebraPresentation::<Q>::new(&[("x", 1), ("y", 1)])
            .with_relation("x*x")
            .unwrap()
            .with_differential("x", "y*y")
            .unwrap();
        assert_eq!(validate_and_truncate(&p, 4).unwrap_err(), AlgebraError::DifferentialNotIdealCompatible { index: 0 });
    }
}
