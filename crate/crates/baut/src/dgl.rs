//! Finite differential graded Lie algebras and the Chevalley-Eilenberg
//! cochain functor producing the Sullivan model of the classifying space.

use crate::algebra::{Algebra, Element, GenId, Generator, Q};
use crate::cdga::FreeCdga;
use crate::derivation::{block_of, derivation_coords, Block, DerComplex};
use crate::linalg::{sparse_add_scaled, sparse_scale, SparseVec};
use crate::model::SullivanModel;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DglError {
    #[error("DGL axioms fail: {0}")]
    AxiomFailure(String),
}

/// A finite DGL on a graded basis: boundary coefficients and bracket
/// structure constants, all exact.
#[derive(Clone, Debug)]
pub struct FiniteDgl {
    /// Degree of each basis element (all ≥ 1).
    pub degrees: Vec<usize>,
    /// Display label per basis element.
    pub labels: Vec<String>,
    /// Block label per basis element (all A unless built over a product).
    pub blocks: Vec<Block>,
    /// boundary[j] = ∂(e_j) in basis coordinates (degree drops by one).
    pub boundary: Vec<SparseVec>,
    /// brackets[i][j] = [e_i, e_j] in basis coordinates.
    pub brackets: Vec<Vec<SparseVec>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DglReport {
    pub antisymmetry_failures: Vec<(usize, usize)>,
    pub jacobi_failures: Vec<(usize, usize, usize)>,
    pub leibniz_failures: Vec<(usize, usize)>,
}

impl DglReport {
    pub fn all_ok(&self) -> bool {
        self.antisymmetry_failures.is_empty()
            && self.jacobi_failures.is_empty()
            && self.leibniz_failures.is_empty()
    }
}

impl FiniteDgl {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees_multiset(&self) -> Vec<usize> {
        let mut d = self.degrees.clone();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    fn bracket_coords(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, ci) in a {
            for (j, cj) in b {
                let c = ci * cj;
                out = sparse_add_scaled(&out, &c, &self.brackets[*i][*j]);
            }
        }
        out
    }

    fn boundary_coords(&self, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in a {
            out = sparse_add_scaled(&out, c, &self.boundary[*j]);
        }
        out
    }

    /// Verifies graded antisymmetry, the graded Jacobi identity, and the
    /// Leibniz rule of the boundary, exactly on all basis tuples.
    pub fn validate(&self) -> DglReport {
        let n = self.len();
        let mut report = DglReport::default();
        for i in 0..n {
            for j in 0..n {
                // [e_i, e_j] + (−1)^{|i||j|} [e_j, e_i] = 0
                let sign = if (self.degrees[i] * self.degrees[j]) % 2 == 1 {
                    -Q::one()
                } else {
                    Q::one()
                };
                let lhs = sparse_add_scaled(
                    &self.brackets[i][j],
                    &sign,
                    &self.brackets[j][i],
                );
                if !lhs.is_empty() {
                    report.antisymmetry_failures.push((i, j));
                }
                // ∂[e_i,e_j] = [∂e_i, e_j] + (−1)^{|i|} [e_i, ∂e_j]
                let lhs = self.boundary_coords(&self.brackets[i][j]);
                let first = self.bracket_coords(&self.boundary[i], &vec![(j, Q::one())]);
                let second = self.bracket_coords(&vec![(i, Q::one())], &self.boundary[j]);
                let s = if self.degrees[i] % 2 == 1 { -Q::one() } else { Q::one() };
                let rhs = sparse_add_scaled(&first, &s, &second);
                let diff = sparse_add_scaled(&lhs, &-Q::one(), &rhs);
                if !diff.is_empty() {
                    report.leibniz_failures.push((i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // [e_i,[e_j,e_k]] = [[e_i,e_j],e_k] + (−1)^{|i||j|}[e_j,[e_i,e_k]]
                    let lhs = self.bracket_coords(&vec![(i, Q::one())], &self.brackets[j][k]);
                    let first = self.bracket_coords(&self.brackets[i][j], &vec![(k, Q::one())]);
                    let second = self.bracket_coords(&vec![(j, Q::one())], &self.brackets[i][k]);
                    let s = if (self.degrees[i] * self.degrees[j]) % 2 == 1 {
                        -Q::one()
                    } else {
                        Q::one()
                    };
                    let rhs = sparse_add_scaled(&first, &s, &second);
                    let diff = sparse_add_scaled(&lhs, &-Q::one(), &rhs);
                    if !diff.is_empty() {
                        report.jacobi_failures.push((i, j, k));
                    }
                }
            }
        }
        report
    }
}

/// Extracts the chain-level DGL of negative derivations from the complex:
/// basis per degree (degree one restricted to cycles), boundary matrices,
/// and bracket structure constants in basis coordinates.
pub fn der_dgl(complex: &DerComplex<'_>) -> FiniteDgl {
    let model = complex.model;
    // global basis order: degree descending, then block order within degree
    let mut degrees = Vec::new();
    let mut labels = Vec::new();
    let mut blocks = Vec::new();
    let mut chain: Vec<(usize, SparseVec)> = Vec::new(); // (shift, coords)
    for shift in (1..=complex.max_shift).rev() {
        for coords in &complex.chain_bases[shift] {
            degrees.push(shift);
            blocks.push(block_of(
                complex.marked,
                &complex.basis(shift)[coords[0].0],
            ));
            labels.push(chain_label(complex, shift, coords));
            chain.push((shift, coords.clone()));
        }
    }
    let n = degrees.len();

    // index from (shift, elementary index) into the global basis for fast
    // coordinate conversion; degree-one entries may be combinations, so keep
    // the per-shift coordinate bases as row data.
    let express = |shift: usize, v: &SparseVec| -> SparseVec {
        // solve v = Σ c_b chain_b over the chain basis of this shift
        let members: Vec<(usize, &SparseVec)> = chain
            .iter()
            .enumerate()
            .filter(|(_, (s, _))| *s == shift)
            .map(|(g, (_, coords))| (g, coords))
            .collect();
        if members.is_empty() {
            assert!(v.is_empty(), "chain not expressible in empty basis");
            return SparseVec::new();
        }
        // For shift ≥ 2 the chain basis is the elementary basis.
        if shift >= 2 {
            return v
                .iter()
                .map(|(j, c)| (members[*j].0, c.clone()))
                .collect();
        }
        // Degree one: kernel vectors in echelon form; solve by elimination.
        let mut work = v.clone();
        let mut out = SparseVec::new();
        for (g, coords) in &members {
            let pivot = coords.first().expect("nonempty kernel vector");
            if let Some((_, c)) = work.iter().find(|(i, _)| *i == pivot.0) {
                let f = c / &pivot.1;
                work = sparse_add_scaled(&work, &-f.clone(), coords);
                out.push((*g, f));
            }
        }
        assert!(work.is_empty(), "degree-one chain outside the cycle space");
        out.sort_by_key(|&(g, _)| g);
        out
    };

    let mut boundary = vec![SparseVec::new(); n];
    let mut brackets = vec![vec![SparseVec::new(); n]; n];
    let derivations: Vec<crate::derivation::Derivation> = chain
        .iter()
        .map(|(shift, coords)| complex.derivation_from_coords(*shift, coords))
        .collect();
    for (gi, (shift, _)) in chain.iter().enumerate() {
        // degree-one basis vectors are cycles; higher boundaries come from
        // the stored matrices
        if *shift >= 2 {
            let b = derivations[gi].boundary(model);
            if !b.is_zero() {
                let coords = derivation_coords(model, &b, complex.basis(shift - 1));
                boundary[gi] = express(shift - 1, &coords);
            }
        }
    }
    for gi in 0..n {
        for gj in 0..n {
            let s = degrees[gi] + degrees[gj];
            let b = derivations[gi].bracket(model, &derivations[gj]);
            if b.is_zero() {
                continue;
            }
            assert!(s >= 2 && s <= complex.max_shift, "bracket lands outside the basis range");
            let coords = derivation_coords(model, &b, complex.basis(s));
            brackets[gi][gj] = express(s, &coords);
        }
    }
    FiniteDgl { degrees, labels, blocks, boundary, brackets }
}

fn chain_label(complex: &DerComplex<'_>, shift: usize, coords: &SparseVec) -> String {
    let basis = complex.basis(shift);
    let model = complex.model;
    if coords.len() == 1 && coords[0].1.is_one() {
        basis[coords[0].0].label(model)
    } else {
        // label a combination by its pivot elementary
        basis[coords[0].0].label(model)
    }
}

/// The Chevalley-Eilenberg cochain algebra C*(L, ∂) = (Λ s⁻¹♯L, d₁ + d₂):
/// one generator of degree |x|+1 per basis element, the linear part dual to
/// the boundary and the quadratic part dual to the bracket.
pub fn chevalley_eilenberg(dgl: &FiniteDgl) -> Result<FreeCdga, DglError> {
    let report = dgl.validate();
    if !report.all_ok() {
        return Err(DglError::AxiomFailure(format!("{report:?}")));
    }
    Ok(chevalley_eilenberg_unchecked(dgl))
}

pub fn chevalley_eilenberg_unchecked(dgl: &FiniteDgl) -> FreeCdga {
    let n = dgl.len();
    let gens: Vec<Generator> = (0..n)
        .map(|i| Generator {
            name: format!("V{}", dgl.labels[i]),
            degree: dgl.degrees[i] + 1,
        })
        .collect();
    let algebra = Algebra::new(gens).expect("derivation labels are unique");
    let mut diff: Vec<Element> = vec![algebra.zero(); n];
    // d₁ V_a = Σ_c (−1)^{|x_c|+1} ⟨∂x_c, x_a⟩ V_c
    for c in 0..n {
        for (a, coeff) in &dgl.boundary[c] {
            let s = if dgl.degrees[c] % 2 == 0 { -Q::one() } else { Q::one() };
            let term = algebra.scale(&(s * coeff), &algebra.gen_element(GenId(c)));
            diff[*a] = algebra.add(&diff[*a], &term);
        }
    }
    // d₂ V_k ⊇ ½ (−1)^{|x_i|+1} c_{ij}^k V_i V_j over all ordered pairs
    let half = Q::new(1.into(), 2.into());
    for i in 0..n {
        for j in 0..n {
            for (k, c) in &dgl.brackets[i][j] {
                let s = if dgl.degrees[i] % 2 == 0 { -Q::one() } else { Q::one() };
                let coeff = &half * &s * c;
                let vi = algebra.gen_element(GenId(i));
                let vj = algebra.gen_element(GenId(j));
                let term = algebra.scale(&coeff, &algebra.mul(&vi, &vj));
                diff[*k] = algebra.add(&diff[*k], &term);
            }
        }
    }
    FreeCdga::new(algebra, diff).expect("CE differential raises degree by one")
}

/// The Sullivan model of Baut₁X: the Chevalley-Eilenberg algebra of the
/// chain-level derivation DGL of the model.
pub fn baut_model(model: &SullivanModel) -> FreeCdga {
    let complex = DerComplex::new(model);
    let dgl = der_dgl(&complex);
    let ce = chevalley_eilenberg_unchecked(&dgl);
    debug_assert!(ce.d_squared_zero().is_ok());
    ce
}

/// baut_model together with the DGL and its block labels; used by the
/// sphere-product diagnostics.
pub fn baut_model_with_dgl(complex: &DerComplex<'_>) -> (FiniteDgl, FreeCdga) {
    let dgl = der_dgl(complex);
    let ce = chevalley_eilenberg_unchecked(&dgl);
    (dgl, ce)
}

/// Scales a structure-constant table entry; test helper for fault injection.
pub fn perturb_bracket(dgl: &mut FiniteDgl, i: usize, j: usize, factor: &Q) {
    dgl.brackets[i][j] = sparse_scale(&dgl.brackets[i][j], factor);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use num_traits::Zero;
    use crate::derivation::DerComplex;
    use crate::model::SullivanModel;

    fn su6() -> SullivanModel {
        SullivanModel::from_named(
            vec![
                ("x1".into(), 4),
                ("x2".into(), 6),
                ("y1".into(), 7),
                ("y2".into(), 9),
                ("y3".into(), 11),
            ],
            |alg, id| {
                let x1 = alg.gen_element(alg.find("x1").unwrap());
                let x2 = alg.gen_element(alg.find("x2").unwrap());
                match alg.gen(id).name.as_str() {
                    "y1" => alg.pow(&x1, 2),
                    "y2" => alg.mul(&x1, &x2),
                    "y3" => alg.pow(&x2, 2),
                    _ => alg.zero(),
                }
            },
        )
        .unwrap()
    }

    #[test]
    fn reference_dgl_has_eighteen_elements() {
        let m = su6();
        let complex = DerComplex::new(&m);
        let dgl = der_dgl(&complex);
        assert_eq!(dgl.len(), 18);
        assert_eq!(
            dgl.degrees_multiset(),
            vec![11, 9, 7, 7, 6, 5, 5, 4, 4, 3, 3, 3, 2, 2, 2, 1, 1, 1]
        );
        assert!(dgl.validate().all_ok());
    }

    #[test]
    fn odd_sphere_dgl_is_a_point() {
        let m = SullivanModel::sphere_model(7);
        let complex = DerComplex::new(&m);
        let dgl = der_dgl(&complex);
        assert_eq!(dgl.len(), 1);
        assert!(dgl.brackets[0][0].is_empty());
        assert!(dgl.validate().all_ok());
    }

    #[test]
    fn two_sphere_product_dgl_brackets() {
        // Λ(v3:3, v5:5), d = 0: basis {(v3,1), (v5,1), (v5,v3)} and the only
        // nonzero bracket is [(v3,1),(v5,v3)] = (v5,1).
        let m = SullivanModel::from_named(
            vec![("v3".into(), 3), ("v5".into(), 5)],
            |alg, _| alg.zero(),
        )
        .unwrap();
        let complex = DerComplex::new(&m);
        let dgl = der_dgl(&complex);
        assert_eq!(dgl.len(), 3);
        let find = |label: &str| dgl.labels.iter().position(|l| l == label).unwrap();
        let v31 = find("(v3,1)");
        let v51 = find("(v5,1)");
        let v53 = find("(v5,v3)");
        assert_eq!(dgl.brackets[v31][v53], vec![(v51, q(1))]);
        assert_eq!(dgl.brackets[v53][v31], vec![(v51, q(-1))]);
        for (i, j) in [(v31, v51), (v51, v53), (v31, v31), (v51, v51)] {
            assert!(dgl.brackets[i][j].is_empty());
        }
        assert!(dgl.validate().all_ok());
    }

    #[test]
    fn fault_injection_is_localized() {
        let m = su6();
        let complex = DerComplex::new(&m);
        let mut dgl = der_dgl(&complex);
        assert!(dgl.validate().all_ok());
        // find a nonzero bracket and scale it
        let (i, j) = (0..dgl.len())
            .flat_map(|i| (0..dgl.len()).map(move |j| (i, j)))
            .find(|&(i, j)| !dgl.brackets[i][j].is_empty())
            .unwrap();
        perturb_bracket(&mut dgl, i, j, &q(3));
        let report = dgl.validate();
        assert!(!report.all_ok());
        assert!(
            report
                .antisymmetry_failures
                .iter()
                .any(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i))
                || report.jacobi_failures.iter().any(|t| t.0 == i || t.1 == i || t.2 == i)
                || report.leibniz_failures.iter().any(|&(a, b)| a == i || b == j)
        );
    }

    #[test]
    fn abelian_dgl_passes_and_gives_zero_differential() {
        let dgl = FiniteDgl {
            degrees: vec![3, 5],
            labels: vec!["(a,1)".into(), "(b,1)".into()],
            blocks: vec![Block::A, Block::A],
            boundary: vec![SparseVec::new(), SparseVec::new()],
            brackets: vec![vec![SparseVec::new(); 2]; 2],
        };
        assert!(dgl.validate().all_ok());
        let ce = chevalley_eilenberg(&dgl).unwrap();
        assert!(ce.is_zero_differential());
        assert_eq!(ce.degree_multiset(), vec![4, 6]);
    }

    #[test]
    fn ce_degrees_shift_by_one() {
        let m = su6();
        let ce = baut_model(&m);
        assert_eq!(
            ce.degree_multiset(),
            vec![2, 2, 2, 3, 3, 3, 4, 4, 4, 5, 5, 6, 6, 7, 8, 8, 10, 12]
        );
    }

    #[test]
    fn ce_linear_part_reference_values() {
        let m = su6();
        let ce = baut_model(&m);
        let alg = ce.algebra();
        let find = |l: &str| alg.find(l).unwrap();
        // d₁(V(y3,x2)) = 2 V(x2,1)
        let d = ce.diff_of(find("V(y3,x2)"));
        let lin = alg.word_component(d, 1);
        assert_eq!(
            lin,
            alg.scale(&q(2), &alg.gen_element(find("V(x2,1)")))
        );
        // D(V(x2,1)) = −V(x1,1) V(x2,x1)
        let d = ce.diff_of(find("V(x2,1)"));
        let expected = alg.neg(&alg.mul(
            &alg.gen_element(find("V(x1,1)")),
            &alg.gen_element(find("V(x2,x1)")),
        ));
        assert_eq!(d, &expected);
        // D² = 0 everywhere
        ce.d_squared_zero().unwrap();
    }

    #[test]
    fn ce_word_length_split() {
        let m = su6();
        let ce = baut_model(&m);
        for (id, _) in ce.algebra().gens() {
            let d = ce.diff_of(id);
            for (mono, _) in d.terms() {
                assert!(mono.word_length() == 1 || mono.word_length() == 2);
            }
        }
    }

    #[test]
    fn ce_linear_part_dual_to_boundary() {
        // dim H^k(U, d₁) = dim H_{k−1}(L, ∂)
        let m = su6();
        let complex = DerComplex::new(&m);
        let dgl = der_dgl(&complex);
        let ce = chevalley_eilenberg(&dgl).unwrap();
        let h = complex.homology();
        // linear complex on the generator space
        let n = dgl.len();
        let mut lin = crate::linalg::QMatrix::zero(n, n);
        for c in 0..n {
            for a in 0..n {
                let coeff = ce.linear_diff_coefficient(GenId(a), GenId(c));
                if !coeff.is_zero() {
                    lin.set(a, c, coeff);
                }
            }
        }
        for k in 2..=complex.max_shift + 1 {
            // degree-k generators of U
            let idx: Vec<usize> = (0..n).filter(|&i| dgl.degrees[i] + 1 == k).collect();
            let next: Vec<usize> = (0..n).filter(|&i| dgl.degrees[i] + 1 == k + 1).collect();
            let prev: Vec<usize> = (0..n).filter(|&i| dgl.degrees[i] + 1 == k - 1).collect();
            // rank of d₁ restricted to degree k and k−1
            let sub = |dom: &[usize], cod: &[usize]| {
                let cols: Vec<SparseVec> = dom
                    .iter()
                    .map(|&c| {
                        cod.iter()
                            .enumerate()
                            .filter_map(|(r, &a)| {
                                let coeff = ce.linear_diff_coefficient(GenId(a), GenId(c));
                                (!coeff.is_zero()).then_some((r, coeff))
                            })
                            .collect()
                    })
                    .collect();
                crate::linalg::QMatrix::from_columns(cod.len(), &cols)
            };
            let rank_k = sub(&idx, &next).rank();
            let rank_prev = sub(&prev, &idx).rank();
            let dim_hk = idx.len() - rank_k - rank_prev;
            assert_eq!(dim_hk, h.dim(k - 1), "degree {k}");
        }
    }
}
