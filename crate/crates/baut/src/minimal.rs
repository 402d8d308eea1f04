//! Minimalization of a free CDGA by contractible-pair elimination.
//!
//! A generator u whose differential has a linear term c·z yields a
//! contractible pair (u, z): the quotient by the ideal (u, Du) is again free,
//! on the remaining generators, with z replaced by −(Du − cz)/c throughout.
//! Degree reasons keep that replacement free of u and z, so each step removes
//! exactly two generators and termination is immediate. The accumulated
//! substitution is recorded; its linear part must induce an isomorphism from
//! the cohomology of the linear part of the input onto the surviving
//! generators, which is checked exactly.

use crate::algebra::{Element, GenId, Generator, Q};
use crate::cdga::{CdgaError, FreeCdga};
use crate::linalg::{sparse_from_dense, QMatrix, RowSpace, SparseVec};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MinimalError {
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error("input has a generator of degree < 2: `{0}`")]
    DegreeOne(String),
    #[error("input is not minimal")]
    NotMinimal,
}

/// One elimination step: the generator whose differential supplied the linear
/// term, its partner, and the substituted replacement.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub eliminated: String,
    pub partner: String,
    pub replacement: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EliminationOrder {
    /// Lowest degree first, declaration order on ties, smallest-index linear
    /// coefficient as partner.
    Canonical,
    /// Reversed tie-breaking; only used to test confluence of invariants.
    Reversed,
}

#[derive(Clone, Debug)]
pub struct MinimizationResult {
    pub minimal: FreeCdga,
    /// Original ids of the surviving generators, in declaration order; the
    /// i-th survivor is generator i of the minimal algebra.
    pub survivors: Vec<GenId>,
    pub trace: Vec<Elimination>,
    /// Accumulated substitution: image of each original generator in the
    /// minimal algebra.
    pub substitution: Vec<Element>,
}

impl MinimizationResult {
    /// Linear part of the accumulated substitution as a map from original
    /// generators to survivor coordinates.
    pub fn linear_substitution(&self, original: &FreeCdga) -> Vec<SparseVec> {
        let min_alg = self.minimal.algebra();
        (0..original.num_gens())
            .map(|i| {
                let lin = min_alg.word_component(&self.substitution[i], 1);
                let mut v = SparseVec::new();
                for (m, c) in lin.terms() {
                    let gid = m.factors()[0].0;
                    v.push((gid.0, c.clone()));
                }
                v.sort_by_key(|&(j, _)| j);
                v
            })
            .collect()
    }

    /// Checks that the substitution's linear part induces an isomorphism from
    /// H*(U, d₁) of the input onto the span of the surviving generators in
    /// every degree.
    pub fn linear_part_isomorphism(&self, original: &FreeCdga) -> bool {
        let pi = self.linear_substitution(original);
        let n = original.num_gens();
        let degrees: Vec<usize> = original.generator_degrees();
        let max_degree = degrees.iter().copied().max().unwrap_or(0);
        for k in 2..=max_degree {
            let dom: Vec<usize> = (0..n).filter(|&i| degrees[i] == k).collect();
            let next: Vec<usize> = (0..n).filter(|&i| degrees[i] == k + 1).collect();
            let prev: Vec<usize> = (0..n).filter(|&i| degrees[i] == k - 1).collect();
            let block = |doms: &[usize], cods: &[usize]| -> QMatrix {
                let cols: Vec<SparseVec> = doms
                    .iter()
                    .map(|&c| {
                        cods.iter()
                            .enumerate()
                            .filter_map(|(r, &a)| {
                                let coeff =
                                    original.linear_diff_coefficient(GenId(a), GenId(c));
                                (!coeff.is_zero()).then_some((r, coeff))
                            })
                            .collect()
                    })
                    .collect();
                QMatrix::from_columns(cods.len(), &cols)
            };
            let cycles = block(&dom, &next).kernel_basis();
            let boundaries = block(&prev, &dom).image_basis();
            let homology = crate::linalg::Homology::new(dom.len(), cycles, boundaries);
            // push representatives through the linear substitution
            let survivors_k: Vec<usize> = self
                .survivors
                .iter()
                .enumerate()
                .filter(|(_, &orig)| degrees[orig.0] == k)
                .map(|(new_idx, _)| new_idx)
                .collect();
            if homology.dim() != survivors_k.len() {
                return false;
            }
            let mut image_space = RowSpace::new(self.minimal.num_gens());
            for rep in homology.representatives() {
                let mut pushed = SparseVec::new();
                for (local, c) in rep {
                    let orig = dom[*local];
                    pushed = crate::linalg::sparse_add_scaled(&pushed, c, &pi[orig]);
                }
                if !image_space.insert(&pushed) {
                    return false; // images not independent
                }
            }
            // images must span exactly the degree-k survivors
            for &s in &survivors_k {
                if !image_space.contains(&vec![(s, Q::one())]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Repeatedly eliminates contractible pairs until the differential is
/// decomposable. Errors on D² ≠ 0 or generators of degree < 2.
pub fn minimize(input: &FreeCdga) -> Result<MinimizationResult, MinimalError> {
    minimize_with_order(input, EliminationOrder::Canonical)
}

pub fn minimize_with_order(
    input: &FreeCdga,
    order: EliminationOrder,
) -> Result<MinimizationResult, MinimalError> {
    input.d_squared_zero()?;
    let alg = input.algebra();
    for (_, g) in alg.gens() {
        if g.degree < 2 {
            return Err(MinimalError::DegreeOne(g.name.clone()));
        }
    }
    let n = alg.num_gens();
    let mut alive = vec![true; n];
    let mut diffs: Vec<Element> = input.diffs().to_vec();
    let mut images: Vec<Element> = (0..n).map(|i| alg.gen_element(GenId(i))).collect();
    let mut trace = Vec::new();

    // scan order over generators
    let mut scan: Vec<usize> = (0..n).collect();
    match order {
        EliminationOrder::Canonical => {
            scan.sort_by_key(|&i| (alg.degree(GenId(i)), i));
        }
        EliminationOrder::Reversed => {
            scan.sort_by_key(|&i| (alg.degree(GenId(i)), std::cmp::Reverse(i)));
        }
    }

    loop {
        let mut pair = None;
        'scan: for &u in &scan {
            if !alive[u] {
                continue;
            }
            let lin = alg.word_component(&diffs[u], 1);
            if lin.is_zero() {
                continue;
            }
            let mut linear_ids: Vec<(GenId, Q)> = lin
                .terms()
                .map(|(m, c)| (m.factors()[0].0, c.clone()))
                .collect();
            match order {
                EliminationOrder::Canonical => linear_ids.sort_by_key(|&(id, _)| id),
                EliminationOrder::Reversed => {
                    linear_ids.sort_by_key(|&(id, _)| std::cmp::Reverse(id))
                }
            }
            let (z, c) = linear_ids[0].clone();
            pair = Some((u, z, c));
            break 'scan;
        }
        let Some((u, z, c)) = pair else { break };
        // D(u) = c z + rest, with rest free of u and z by degree reasons
        let rest = alg.sub(&diffs[u], &alg.scale(&c, &alg.gen_element(z)));
        let zeta = alg.scale(&(-Q::one() / c), &rest);
        debug_assert!(
            rest.terms().all(|(m, _)| !m.contains(z) && !m.contains(GenId(u))),
            "replacement must not mention the eliminated pair"
        );
        trace.push(Elimination {
            eliminated: alg.gen(GenId(u)).name.clone(),
            partner: alg.gen(z).name.clone(),
            replacement: alg.render(&zeta),
        });
        alive[u] = false;
        alive[z.0] = false;
        for i in 0..n {
            if alive[i] {
                let s = alg.substitute(&diffs[i], z, &zeta);
                diffs[i] = alg.substitute(&s, GenId(u), &alg.zero());
            } else {
                diffs[i] = alg.zero();
            }
            let s = alg.substitute(&images[i], z, &zeta);
            images[i] = alg.substitute(&s, GenId(u), &alg.zero());
        }
    }

    // rebuild on the survivors
    let survivors: Vec<GenId> = (0..n).filter(|&i| alive[i]).map(GenId).collect();
    let new_index: std::collections::HashMap<usize, usize> = survivors
        .iter()
        .enumerate()
        .map(|(new, old)| (old.0, new))
        .collect();
    let new_alg = crate::algebra::Algebra::new(
        survivors
            .iter()
            .map(|&id| Generator {
                name: alg.gen(id).name.clone(),
                degree: alg.degree(id),
            })
            .collect(),
    )
    .expect("surviving names stay unique");
    let remap = |e: &Element| -> Element {
        let mut out = new_alg.zero();
        for (m, coeff) in e.terms() {
            let exps: Vec<(GenId, u32)> = m
                .factors()
                .iter()
                .map(|&(id, p)| (GenId(new_index[&id.0]), p))
                .collect();
            let mono = new_alg
                .monomial_from_exponents(&exps)
                .expect("parity preserved");
            out = new_alg.add(&out, &new_alg.from_monomial(mono, coeff.clone()));
        }
        out
    };
    let new_diffs: Vec<Element> = survivors.iter().map(|&id| remap(&diffs[id.0])).collect();
    let substitution: Vec<Element> = images.iter().map(|e| remap(e)).collect();
    let _ = &remap;
    let minimal = FreeCdga::new(new_alg, new_diffs).expect("degrees preserved");
    debug_assert!(minimal.is_decomposable());
    Ok(MinimizationResult { minimal, survivors, trace, substitution })
}

/// True when the differential of a minimal CDGA is purely quadratic.
pub fn is_coformal(minimal: &FreeCdga) -> Result<bool, MinimalError> {
    if !minimal.is_decomposable() {
        return Err(MinimalError::NotMinimal);
    }
    Ok(minimal.is_quadratic())
}

/// Zero differential means H* of the classifying space is free.
pub fn is_zero_differential(minimal: &FreeCdga) -> bool {
    minimal.is_zero_differential()
}

/// Re-exported cohomology dimension series.
pub fn hilbert(cdga: &FreeCdga, max: usize) -> Vec<usize> {
    cdga.hilbert(max)
}

pub fn sparse_unit(i: usize) -> SparseVec {
    vec![(i, Q::one())]
}

pub fn dense_unit(n: usize, i: usize) -> SparseVec {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    sparse_from_dense(&v)
}
