//! Free commutative differential graded algebras.
//!
//! A [`FreeCdga`] is a free graded-commutative algebra together with a degree
//! +1 differential given by its values on generators; the differential need
//! not be decomposable. Sullivan models and Chevalley-Eilenberg cochain
//! algebras are both carried by this type.

use crate::algebra::{Algebra, AlgebraError, Element, GenId, Generator, Q};
use crate::linalg::{sparse_from_dense, Homology, QMatrix, SparseVec};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CdgaError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("differential of `{gen}` must be homogeneous of degree {expected}")]
    DifferentialDegree { gen: String, expected: usize },
    #[error("d∘d ≠ 0 on generator `{0}`")]
    DSquared(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeCdga {
    algebra: Algebra,
    diff: Vec<Element>,
}

impl FreeCdga {
    /// Builds the CDGA, checking that every differential value is homogeneous
    /// of the right degree. d² is not checked here; see [`FreeCdga::d_squared_zero`].
    pub fn new(algebra: Algebra, diff: Vec<Element>) -> Result<Self, CdgaError> {
        assert_eq!(algebra.num_gens(), diff.len());
        for (id, g) in algebra.gens() {
            let v = &diff[id.0];
            if !v.is_zero() && !v.is_homogeneous_of_degree(g.degree + 1) {
                return Err(CdgaError::DifferentialDegree {
                    gen: g.name.clone(),
                    expected: g.degree + 1,
                });
            }
        }
        Ok(FreeCdga { algebra, diff })
    }

    pub fn from_named(
        gens: Vec<(String, usize)>,
        diff_of: impl Fn(&Algebra, GenId) -> Element,
    ) -> Result<Self, CdgaError> {
        let algebra = Algebra::new(
            gens.into_iter()
                .map(|(name, degree)| Generator { name, degree })
                .collect(),
        )?;
        let diff = algebra.gens().map(|(id, _)| diff_of(&algebra, id)).collect();
        FreeCdga::new(algebra, diff)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn num_gens(&self) -> usize {
        self.algebra.num_gens()
    }

    pub fn diff_of(&self, id: GenId) -> &Element {
        &self.diff[id.0]
    }

    pub fn diffs(&self) -> &[Element] {
        &self.diff
    }

    /// d extended to all of ΛV by the Leibniz rule.
    pub fn differentiate(&self, e: &Element) -> Element {
        self.algebra
            .apply_derivation(&|id| self.diff[id.0].clone(), true, e)
    }

    /// Checks d∘d = 0 on every generator.
    pub fn d_squared_zero(&self) -> Result<(), CdgaError> {
        for (id, g) in self.algebra.gens() {
            if !self.differentiate(&self.diff[id.0]).is_zero() {
                return Err(CdgaError::DSquared(g.name.clone()));
            }
        }
        Ok(())
    }

    pub fn is_zero_differential(&self) -> bool {
        self.diff.iter().all(Element::is_zero)
    }

    /// True when every differential value lies in word length ≥ 2.
    pub fn is_decomposable(&self) -> bool {
        self.diff.iter().all(|v| {
            v.terms().all(|(m, _)| m.word_length() >= 2)
        })
    }

    /// True when every differential value is purely word length 2.
    pub fn is_quadratic(&self) -> bool {
        self.diff.iter().all(|v| {
            v.terms().all(|(m, _)| m.word_length() == 2)
        })
    }

    pub fn generator_degrees(&self) -> Vec<usize> {
        self.algebra.gens().map(|(_, g)| g.degree).collect()
    }

    /// Sorted generator degree multiset.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d = self.generator_degrees();
        d.sort();
        d
    }

    /// The matrix of d: (ΛV)^k -> (ΛV)^{k+1} over the canonical monomial bases.
    pub fn diff_matrix(&self, k: usize) -> QMatrix {
        let dom = self.algebra.monomials_of_degree(k);
        let cod = self.algebra.monomials_of_degree(k + 1);
        let mut cols: Vec<SparseVec> = Vec::with_capacity(dom.len());
        for m in &dom {
            let e = self.algebra.from_monomial(m.clone(), num_traits::One::one());
            let de = self.differentiate(&e);
            let mut col = SparseVec::new();
            for (mm, c) in de.terms() {
                let idx = cod.binary_search(mm).expect("monomial in codomain basis");
                col.push((idx, c.clone()));
            }
            col.sort_by_key(|&(i, _)| i);
            cols.push(col);
        }
        QMatrix::from_columns(cod.len(), &cols)
    }

    /// dim H^k for k = 0..=max, by exact degreewise kernel/image ranks.
    pub fn hilbert(&self, max: usize) -> Vec<usize> {
        let mut dims = Vec::with_capacity(max + 1);
        let mut prev_rank = 0usize; // rank of d_{k-1}
        for k in 0..=max {
            let dim_k = self.algebra.monomials_of_degree(k).len();
            let rank_k = if dim_k == 0 { 0 } else { self.diff_matrix(k).rank() };
            dims.push(dim_k - rank_k - prev_rank);
            prev_rank = rank_k;
        }
        dims
    }

    /// Total dimension of (ΛV)^k for k ≤ max; used to budget hilbert runs.
    pub fn chain_dims(&self, max: usize) -> Vec<usize> {
        (0..=max)
            .map(|k| self.algebra.monomials_of_degree(k).len())
            .collect()
    }

    /// Full cohomology data in degree k, with canonical representatives.
    pub fn cohomology_space(&self, k: usize) -> CohomologySpace {
        let basis = self.algebra.monomials_of_degree(k);
        let cycles = if basis.is_empty() {
            Vec::new()
        } else {
            self.diff_matrix(k).kernel_basis()
        };
        let boundaries = if k == 0 || basis.is_empty() {
            Vec::new()
        } else {
            self.diff_matrix(k - 1).image_basis()
        };
        let homology = Homology::new(basis.len(), cycles, boundaries);
        CohomologySpace { degree: k, basis, homology }
    }

    /// The linear part of the differential as a map of generator spaces:
    /// entry (a, c) is the coefficient of generator a in d(generator c).
    pub fn linear_diff_coefficient(&self, a: GenId, c: GenId) -> Q {
        let v = &self.diff[c.0];
        let mut out = Q::zero();
        for (m, coeff) in v.terms() {
            if m.word_length() == 1 && m.contains(a) {
                out = coeff.clone();
            }
        }
        out
    }
}

/// Cocycles mod coboundaries in one degree, tied to the monomial basis.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    pub degree: usize,
    pub basis: Vec<crate::algebra::Monomial>,
    pub homology: Homology,
}

impl CohomologySpace {
    pub fn dim(&self) -> usize {
        self.homology.dim()
    }

    pub fn representatives(&self, algebra: &Algebra) -> Vec<Element> {
        self.homology
            .representatives()
            .iter()
            .map(|v| {
                let mut e = algebra.zero();
                for (i, c) in v {
                    e = algebra.add(&e, &algebra.from_monomial(self.basis[i.to_owned()].clone(), c.clone()));
                }
                e
            })
            .collect()
    }

    pub fn vector_of(&self, algebra: &Algebra, e: &Element) -> Result<SparseVec, AlgebraError> {
        let dense = algebra.coeff_vector(e, self.degree)?;
        Ok(sparse_from_dense(&dense))
    }
}
