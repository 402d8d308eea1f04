//! Sullivan models: validation, structural classification, cohomology,
//! cocycle arithmetic and homogeneous ideal membership.

use crate::algebra::{Algebra, AlgebraError, Element, GenId, Generator, Q};
use crate::cdga::{CdgaError, CohomologySpace, FreeCdga};
use crate::linalg::{sparse_from_dense, sparse_is_zero, QMatrix, SparseVec};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error("not an F0 candidate shape: {0}")]
    NotF0Shape(String),
    #[error("expected polynomial input in the even generators")]
    NotPolynomial,
    #[error("element is not homogeneous")]
    NotHomogeneous,
}

/// A Sullivan model (ΛV, d): free CDGA whose differential drops out of
/// validation with the minimality and connectivity flags below.
#[derive(Clone, Debug, PartialEq)]
pub struct SullivanModel {
    cdga: FreeCdga,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// None when every differential value is homogeneous of degree |g|+1;
    /// otherwise the name of an offending generator.
    pub degree_ok: Result<(), String>,
    pub d_squared_zero: Result<(), String>,
    pub minimal: bool,
    pub simply_connected: bool,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.degree_ok.is_ok() && self.d_squared_zero.is_ok() && self.minimal && self.simply_connected
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub pure: bool,
    pub two_stage: bool,
    pub oddly_generated: bool,
}

/// Cocycle representatives forming a basis of H^k for each k up to a bound.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub max_degree: usize,
    pub spaces: Vec<CohomologySpace>,
}

impl CohomologyBasis {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.dim()).collect()
    }

    pub fn space(&self, k: usize) -> Option<&CohomologySpace> {
        self.spaces.get(k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClassOf {
    /// Coordinates in the canonical representative basis of H^k.
    Class { degree: usize, coords: Vec<Q> },
    Exact,
    NotACocycle,
}

impl SullivanModel {
    pub fn new(cdga: FreeCdga) -> Self {
        SullivanModel { cdga }
    }

    pub fn from_named(
        gens: Vec<(String, usize)>,
        diff_of: impl Fn(&Algebra, GenId) -> Element,
    ) -> Result<Self, CdgaError> {
        Ok(SullivanModel { cdga: FreeCdga::from_named(gens, diff_of)? })
    }

    pub fn cdga(&self) -> &FreeCdga {
        &self.cdga
    }

    pub fn algebra(&self) -> &Algebra {
        self.cdga.algebra()
    }

    pub fn differentiate(&self, e: &Element) -> Element {
        self.cdga.differentiate(e)
    }

    pub fn diff_of(&self, id: GenId) -> &Element {
        self.cdga.diff_of(id)
    }

    pub fn validate(&self) -> ValidationReport {
        let alg = self.algebra();
        let mut degree_ok = Ok(());
        for (id, g) in alg.gens() {
            let v = self.cdga.diff_of(id);
            if !v.is_zero() && !v.is_homogeneous_of_degree(g.degree + 1) {
                degree_ok = Err(g.name.clone());
                break;
            }
        }
        let d_squared_zero = match self.cdga.d_squared_zero() {
            Ok(()) => Ok(()),
            Err(CdgaError::DSquared(g)) => Err(g),
            Err(_) => unreachable!(),
        };
        let minimal = self.cdga.is_decomposable();
        let simply_connected = alg.gens().all(|(_, g)| g.degree >= 2);
        ValidationReport { degree_ok, d_squared_zero, minimal, simply_connected }
    }

    /// Structural flags. The two-stage split fixes V0 = {g : dg = 0}.
    pub fn classify(&self) -> Classification {
        let alg = self.algebra();
        let even_closed: Vec<GenId> = alg
            .gens()
            .filter(|(_, g)| !g.is_odd())
            .map(|(id, _)| id)
            .collect();
        let pure = alg.gens().all(|(id, g)| {
            let d = self.cdga.diff_of(id);
            if g.is_odd() {
                d.terms().all(|(m, _)| {
                    m.factors().iter().all(|(gid, _)| even_closed.contains(gid))
                })
            } else {
                d.is_zero()
            }
        });
        let v0: Vec<GenId> = alg
            .gens()
            .filter(|(id, _)| self.cdga.diff_of(*id).is_zero())
            .map(|(id, _)| id)
            .collect();
        let two_stage = alg.gens().all(|(id, _)| {
            let d = self.cdga.diff_of(id);
            d.terms()
                .all(|(m, _)| m.factors().iter().all(|(gid, _)| v0.contains(gid)))
        });
        let oddly_generated = alg.gens().all(|(_, g)| g.is_odd());
        Classification { pure, two_stage, oddly_generated }
    }

    /// The elliptic formal dimension Σ_odd |g| − Σ_even (|g| − 1), used as the
    /// default cohomology degree bound.
    pub fn formal_dimension(&self) -> usize {
        let mut odd = 0isize;
        let mut even = 0isize;
        for (_, g) in self.algebra().gens() {
            if g.is_odd() {
                odd += g.degree as isize;
            } else {
                even += g.degree as isize - 1;
            }
        }
        (odd - even).max(0) as usize
    }

    /// Decides whether the model has the shape of an F0 presentation
    /// Λ(x_1..x_n, y_1..y_n) with dx = 0, dy_i = f_i ∈ Q[x], and the f_i a
    /// regular sequence, by finite-dimensionality of Q[x]/(f) checked
    /// degreewise up to Σ|f_i| − Σ|x_i| + max|x_i|.
    pub fn is_f0_presentation(&self) -> Result<bool, ModelError> {
        let alg = self.algebra();
        let evens: Vec<GenId> = alg.gens().filter(|(_, g)| !g.is_odd()).map(|(i, _)| i).collect();
        let odds: Vec<GenId> = alg.gens().filter(|(_, g)| g.is_odd()).map(|(i, _)| i).collect();
        if evens.len() != odds.len() || evens.is_empty() {
            return Err(ModelError::NotF0Shape(format!(
                "{} even and {} odd generators",
                evens.len(),
                odds.len()
            )));
        }
        for &id in &evens {
            if !self.cdga.diff_of(id).is_zero() {
                return Err(ModelError::NotF0Shape(format!(
                    "even generator `{}` has nonzero differential",
                    alg.gen(id).name
                )));
            }
        }
        let poly = self.even_subalgebra();
        let mut relations = Vec::new();
        for &id in &odds {
            let f = self.cdga.diff_of(id);
            if f.is_zero() {
                return Ok(false); // a zero relation is never regular
            }
            let rel = self
                .restrict_to_even(f)
                .map_err(|_| ModelError::NotF0Shape(format!(
                    "differential of `{}` is not a polynomial in the even generators",
                    alg.gen(id).name
                )))?;
            relations.push(rel);
        }
        let sum_f: usize = relations
            .iter()
            .map(|f| f.homogeneous_degree().unwrap_or(0))
            .sum();
        let sum_x: usize = evens.iter().map(|&id| alg.degree(id)).sum();
        let max_x = evens.iter().map(|&id| alg.degree(id)).max().unwrap();
        if sum_f < sum_x {
            return Ok(false);
        }
        let socle = sum_f - sum_x;
        // The quotient of a regular sequence vanishes above the socle degree;
        // conversely max|x| consecutive zero dimensions force vanishing forever.
        let bound = socle + max_x;
        let dims = quotient_dims(&poly, &relations, bound);
        Ok(dims[socle + 1..=bound].iter().all(|&d| d == 0))
    }

    /// The polynomial subalgebra on the even generators (fresh algebra).
    pub fn even_subalgebra(&self) -> EvenSubalgebra {
        let alg = self.algebra();
        let ids: Vec<GenId> = alg.gens().filter(|(_, g)| !g.is_odd()).map(|(i, _)| i).collect();
        let sub = Algebra::new(
            ids.iter()
                .map(|&id| Generator {
                    name: alg.gen(id).name.clone(),
                    degree: alg.degree(id),
                })
                .collect(),
        )
        .expect("even generator names stay unique");
        EvenSubalgebra { ids, algebra: sub }
    }

    /// Rewrites a polynomial element of ΛV over the even subalgebra; errors
    /// when an odd generator occurs.
    pub fn restrict_to_even(&self, e: &Element) -> Result<Element, ModelError> {
        let sub = self.even_subalgebra();
        sub.restrict(self.algebra(), e)
    }

    /// Exact basis of ker d / im d in each degree k ≤ max_degree, with stored
    /// cocycle representatives.
    pub fn cohomology(&self, max_degree: usize) -> CohomologyBasis {
        let spaces = (0..=max_degree)
            .map(|k| self.cdga.cohomology_space(k))
            .collect();
        CohomologyBasis { max_degree, spaces }
    }

    /// Class of a homogeneous cocycle in the cohomology basis.
    pub fn class_of(&self, cohomology: &CohomologyBasis, e: &Element) -> Result<ClassOf, ModelError> {
        if e.is_zero() {
            return Ok(ClassOf::Exact);
        }
        let k = e.homogeneous_degree().ok_or(ModelError::NotHomogeneous)?;
        if !self.differentiate(e).is_zero() {
            return Ok(ClassOf::NotACocycle);
        }
        let space = cohomology
            .space(k)
            .unwrap_or_else(|| panic!("cohomology not computed to degree {k}"));
        let v = space.vector_of(self.algebra(), e)?;
        let coords = space
            .homology
            .class_coords(&v)
            .expect("cocycle vector must be a kernel vector");
        if coords.iter().all(Q::is_zero) {
            Ok(ClassOf::Exact)
        } else {
            Ok(ClassOf::Class { degree: k, coords })
        }
    }

    /// Homogeneous ideal membership f ∈ (gens) in the even polynomial part,
    /// decided degreewise by a linear solve; returns the certificate h_i with
    /// f = Σ h_i g_i on success.
    pub fn ideal_membership(
        &self,
        f: &Element,
        ideal_gens: &[Element],
    ) -> Result<Option<Vec<Element>>, ModelError> {
        let sub = self.even_subalgebra();
        let fp = sub.restrict(self.algebra(), f)?;
        let gens: Vec<Element> = ideal_gens
            .iter()
            .map(|g| sub.restrict(self.algebra(), g))
            .collect::<Result<_, _>>()?;
        let membership = polynomial_ideal_membership(&sub.algebra, &fp, &gens)?;
        // Lift certificates back to ΛV.
        Ok(membership.map(|hs| {
            hs.iter()
                .map(|h| sub.unrestrict(self.algebra(), h))
                .collect()
        }))
    }

    /// Tensor product model with disjoint generator names; collisions are
    /// resolved by priming the second factor's names.
    pub fn product_model(&self, other: &SullivanModel) -> SullivanModel {
        let a = self.algebra();
        let b = other.algebra();
        let mut names: Vec<String> = a.gens().map(|(_, g)| g.name.clone()).collect();
        let mut gens: Vec<Generator> = a
            .gens()
            .map(|(_, g)| Generator { name: g.name.clone(), degree: g.degree })
            .collect();
        for (_, g) in b.gens() {
            let mut name = g.name.clone();
            while names.contains(&name) {
                name.push('\'');
            }
            names.push(name.clone());
            gens.push(Generator { name, degree: g.degree });
        }
        let alg = Algebra::new(gens).expect("collision-free names");
        let offset = a.num_gens();
        let remap = |e: &Element, shift: usize| -> Element {
            let mut out = alg.zero();
            for (m, c) in e.terms() {
                let exps: Vec<(GenId, u32)> = m
                    .factors()
                    .iter()
                    .map(|&(id, p)| (GenId(id.0 + shift), p))
                    .collect();
                let mono = alg
                    .monomial_from_exponents(&exps)
                    .expect("parities preserved by renaming");
                out = alg.add(&out, &alg.from_monomial(mono, c.clone()));
            }
            out
        };
        let mut diff = Vec::with_capacity(alg.num_gens());
        for (id, _) in a.gens() {
            diff.push(remap(self.cdga.diff_of(id), 0));
        }
        for (id, _) in b.gens() {
            diff.push(remap(other.cdga.diff_of(id), offset));
        }
        SullivanModel {
            cdga: FreeCdga::new(alg, diff).expect("degrees preserved by renaming"),
        }
    }

    /// Minimal model of S^n: Λ(u:n) for n odd, Λ(u:n, u':2n−1) with du' = u²
    /// for n even.
    pub fn sphere_model(n: usize) -> SullivanModel {
        assert!(n >= 2, "sphere model needs n ≥ 2");
        if n % 2 == 1 {
            SullivanModel::from_named(vec![("u".into(), n)], |alg, _| alg.zero()).unwrap()
        } else {
            SullivanModel::from_named(
                vec![("u".into(), n), ("u'".into(), 2 * n - 1)],
                |alg, id| {
                    if alg.gen(id).name == "u'" {
                        let u = alg.find("u").unwrap();
                        alg.pow(&alg.gen_element(u), 2)
                    } else {
                        alg.zero()
                    }
                },
            )
            .unwrap()
        }
    }
}

/// The even polynomial subalgebra of a model, with id translation.
pub struct EvenSubalgebra {
    pub ids: Vec<GenId>,
    pub algebra: Algebra,
}

impl EvenSubalgebra {
    pub fn restrict(&self, _ambient: &Algebra, e: &Element) -> Result<Element, ModelError> {
        let mut out = self.algebra.zero();
        for (m, c) in e.terms() {
            let mut exps = Vec::new();
            for &(id, p) in m.factors() {
                let pos = self
                    .ids
                    .iter()
                    .position(|&i| i == id)
                    .ok_or(ModelError::NotPolynomial)?;
                exps.push((GenId(pos), p));
            }
            let mono = self
                .algebra
                .monomial_from_exponents(&exps)
                .expect("even powers unrestricted");
            out = self
                .algebra
                .add(&out, &self.algebra.from_monomial(mono, c.clone()));
        }
        Ok(out)
    }

    pub fn unrestrict(&self, ambient: &Algebra, e: &Element) -> Element {
        let mut out = ambient.zero();
        for (m, c) in e.terms() {
            let exps: Vec<(GenId, u32)> = m
                .factors()
                .iter()
                .map(|&(id, p)| (self.ids[id.0], p))
                .collect();
            let mono = ambient
                .monomial_from_exponents(&exps)
                .expect("even powers unrestricted");
            out = ambient.add(&out, &ambient.from_monomial(mono, c.clone()));
        }
        out
    }
}

/// dim_k Q[x]/(relations) for k = 0..=bound.
pub fn quotient_dims(sub: &EvenSubalgebra, relations: &[Element], bound: usize) -> Vec<usize> {
    let alg = &sub.algebra;
    let mut dims = Vec::with_capacity(bound + 1);
    for k in 0..=bound {
        let basis = alg.monomials_of_degree(k);
        if basis.is_empty() {
            dims.push(0);
            continue;
        }
        // span of all monomial multiples m*f_i of degree k
        let mut rows: Vec<SparseVec> = Vec::new();
        for f in relations {
            let df = match f.homogeneous_degree() {
                Some(d) => d,
                None => continue,
            };
            if df > k {
                continue;
            }
            for m in alg.monomials_of_degree(k - df) {
                let prod = alg.mul(&alg.from_monomial(m, Q::one()), f);
                let dense = alg.coeff_vector(&prod, k).expect("homogeneous product");
                rows.push(sparse_from_dense(&dense));
            }
        }
        let rank = QMatrix::from_rows(basis.len(), rows).rank();
        dims.push(basis.len() - rank);
    }
    dims
}

/// f ∈ (g_1..g_r) in a polynomial algebra, with certificate.
pub fn polynomial_ideal_membership(
    alg: &Algebra,
    f: &Element,
    gens: &[Element],
) -> Result<Option<Vec<Element>>, ModelError> {
    if f.is_zero() {
        return Ok(Some(vec![alg.zero(); gens.len()]));
    }
    let k = f.homogeneous_degree().ok_or(ModelError::NotHomogeneous)?;
    // Unknowns: coefficients of h_i over monomials of degree k - |g_i|.
    let mut columns: Vec<SparseVec> = Vec::new();
    let mut column_info: Vec<(usize, crate::algebra::Monomial)> = Vec::new();
    let target_basis = alg.monomials_of_degree(k);
    for (gi, g) in gens.iter().enumerate() {
        let dg = match g.homogeneous_degree() {
            Some(d) => d,
            None => return Err(ModelError::NotHomogeneous),
        };
        if dg > k {
            continue;
        }
        for m in alg.monomials_of_degree(k - dg) {
            let prod = alg.mul(&alg.from_monomial(m.clone(), Q::one()), g);
            let dense = alg.coeff_vector(&prod, k).expect("homogeneous product");
            columns.push(sparse_from_dense(&dense));
            column_info.push((gi, m));
        }
    }
    let matrix = QMatrix::from_columns(target_basis.len(), &columns);
    let target = sparse_from_dense(&alg.coeff_vector(f, k).expect("homogeneous"));
    let solution = matrix.preimage(&target).expect("consistent dimensions");
    Ok(solution.map(|sol| {
        let mut hs = vec![alg.zero(); gens.len()];
        for (col, c) in sol {
            let (gi, mono) = &column_info[col];
            hs[*gi] = alg.add(&hs[*gi], &alg.from_monomial(mono.clone(), c));
        }
        hs
    }))
}

/// Partial derivative of a polynomial element with respect to an even
/// generator.
pub fn partial_derivative(alg: &Algebra, e: &Element, x: GenId) -> Element {
    assert!(!alg.is_odd(x), "partial derivative only for even generators");
    let mut out = alg.zero();
    for (m, c) in e.terms() {
        let p = m.exponent(x);
        if p == 0 {
            continue;
        }
        let exps: Vec<(GenId, u32)> = m
            .factors()
            .iter()
            .map(|&(id, q)| if id == x { (id, q - 1) } else { (id, q) })
            .collect();
        let mono = alg.monomial_from_exponents(&exps).expect("lower power");
        out = alg.add(&out, &alg.from_monomial(mono, c * Q::from_integer(p.into())));
    }
    out
}

/// True when the element is a nonzero scalar multiple of x^l with l > 1;
/// returns l.
pub fn pure_power_of(_alg: &Algebra, e: &Element, x: GenId) -> Option<u32> {
    let mut terms = e.terms();
    let (m, _) = terms.next()?;
    if terms.next().is_some() {
        return None;
    }
    let l = m.exponent(x);
    if l > 1 && m.word_length() == l as usize {
        Some(l)
    } else {
        None
    }
}

pub fn is_cocycle_vector_zero(v: &SparseVec) -> bool {
    sparse_is_zero(v)
}
