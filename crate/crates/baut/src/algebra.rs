//! Free graded-commutative algebras over the rationals.
//!
//! An [`Algebra`] is the free graded-commutative algebra on a finite list of
//! generators of positive degree: odd generators square to zero, even
//! generators admit arbitrary powers. Elements are exact rational linear
//! combinations of canonical monomials; all Koszul signs are absorbed into
//! coefficients during normalization.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used everywhere in the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from(BigInt::from(n))
}

pub fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("elements belong to different algebras")]
    MismatchedGenerators,
    #[error("element is not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("generator `{0}` must have positive degree")]
    NonPositiveDegree(String),
}

/// Index of a generator in declaration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GenId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

static ALGEBRA_UID: AtomicU64 = AtomicU64::new(1);

/// The free graded-commutative algebra ΛV on a fixed ordered generator list.
#[derive(Clone, Debug)]
pub struct Algebra {
    uid: u64,
    gens: Vec<Generator>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.uid == other.uid
    }
}
impl Eq for Algebra {}

/// A canonical monomial: sorted sparse exponent vector plus cached degree.
///
/// Odd generators carry exponent at most one. The canonical total order is
/// degree first, then word-lexicographic with earlier generators smaller.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    factors: Vec<(GenId, u32)>,
    degree: usize,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new(), degree: 0 }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn word_length(&self) -> usize {
        self.factors.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn factors(&self) -> &[(GenId, u32)] {
        &self.factors
    }

    pub fn exponent(&self, g: GenId) -> u32 {
        self.factors
            .iter()
            .find(|&&(id, _)| id == g)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn contains(&self, g: GenId) -> bool {
        self.exponent(g) > 0
    }

    /// Letters of the word in canonical order, with multiplicity.
    pub fn letters(&self) -> impl Iterator<Item = GenId> + '_ {
        self.factors
            .iter()
            .flat_map(|&(id, e)| std::iter::repeat(id).take(e as usize))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match self.degree.cmp(&other.degree) {
            Equal => {}
            ord => return ord,
        }
        // Word-lexicographic: at the first difference the word whose next
        // letter has the smaller generator index comes first; a higher power
        // of the same generator also comes first.
        let mut a = self.factors.iter();
        let mut b = other.factors.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Equal,
                (None, Some(_)) => return Less,
                (Some(_), None) => return Greater,
                (Some(&(ia, ea)), Some(&(ib, eb))) => {
                    match ia.cmp(&ib) {
                        Equal => {}
                        ord => return ord,
                    }
                    match eb.cmp(&ea) {
                        Equal => {}
                        ord => return ord,
                    }
                }
            }
        }
    }
}

/// A normalized element of the algebra: monomial -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    token: u64,
    terms: BTreeMap<Monomial, Q>,
}

impl Element {
    pub fn zero() -> Self {
        Element { token: 0, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Degree if homogeneous (zero element reports None: it has every degree).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let first = it.next()?.degree();
        for m in it {
            if m.degree() != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn is_homogeneous_of_degree(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    fn insert_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }
}

impl Algebra {
    pub fn new(gens: Vec<Generator>) -> Result<Self, AlgebraError> {
        let mut seen = std::collections::HashSet::new();
        for g in &gens {
            if g.degree == 0 {
                return Err(AlgebraError::NonPositiveDegree(g.name.clone()));
            }
            if !seen.insert(g.name.clone()) {
                return Err(AlgebraError::DuplicateName(g.name.clone()));
            }
        }
        Ok(Algebra { uid: ALGEBRA_UID.fetch_add(1, Ordering::Relaxed), gens })
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> impl Iterator<Item = (GenId, &Generator)> {
        self.gens.iter().enumerate().map(|(i, g)| (GenId(i), g))
    }

    pub fn gen(&self, id: GenId) -> &Generator {
        &self.gens[id.0]
    }

    pub fn degree(&self, id: GenId) -> usize {
        self.gens[id.0].degree
    }

    pub fn is_odd(&self, id: GenId) -> bool {
        self.gens[id.0].is_odd()
    }

    pub fn find(&self, name: &str) -> Option<GenId> {
        self.gens.iter().position(|g| g.name == name).map(GenId)
    }

    pub fn same_algebra(&self, e: &Element) -> bool {
        e.token == 0 || e.token == self.uid
    }

    fn claim(&self, mut e: Element) -> Element {
        // zero is canonical across algebras
        e.token = if e.is_zero() { 0 } else { self.uid };
        e
    }

    pub fn zero(&self) -> Element {
        Element::zero()
    }

    pub fn one(&self) -> Element {
        self.from_monomial(Monomial::one(), Q::one())
    }

    pub fn constant(&self, c: Q) -> Element {
        self.from_monomial(Monomial::one(), c)
    }

    pub fn gen_element(&self, id: GenId) -> Element {
        self.monomial_from_exponents(&[(id, 1)])
            .map(|m| self.from_monomial(m, Q::one()))
            .unwrap_or_else(Element::zero)
    }

    pub fn from_monomial(&self, m: Monomial, c: Q) -> Element {
        let mut e = Element::zero();
        e.insert_term(m, c);
        self.claim(e)
    }

    /// Builds the canonical monomial with the given exponents, or None when an
    /// odd generator would carry exponent > 1.
    pub fn monomial_from_exponents(&self, exps: &[(GenId, u32)]) -> Option<Monomial> {
        let mut factors: Vec<(GenId, u32)> = Vec::new();
        for &(id, e) in exps {
            if e == 0 {
                continue;
            }
            match factors.iter_mut().find(|(i, _)| *i == id) {
                Some((_, acc)) => *acc += e,
                None => factors.push((id, e)),
            }
        }
        factors.sort_by_key(|&(id, _)| id);
        let mut degree = 0usize;
        for &(id, e) in &factors {
            if self.is_odd(id) && e > 1 {
                return None;
            }
            degree += self.degree(id) * e as usize;
        }
        Some(Monomial { factors, degree })
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let mut out = a.clone();
        for (m, c) in b.terms() {
            out.insert_term(m.clone(), c.clone());
        }
        self.claim(out)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        let mut out = a.clone();
        for (m, c) in b.terms() {
            out.insert_term(m.clone(), -c.clone());
        }
        self.claim(out)
    }

    pub fn scale(&self, c: &Q, a: &Element) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        let mut out = Element::zero();
        for (m, k) in a.terms() {
            out.insert_term(m.clone(), c * k);
        }
        self.claim(out)
    }

    pub fn neg(&self, a: &Element) -> Element {
        self.scale(&-Q::one(), a)
    }

    /// Koszul sign and product of two canonical monomials, or None when an odd
    /// generator occurs in both. The sign counts the inversions of odd letters
    /// produced by merging the two sorted words.
    fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, i32)> {
        // Odd letters of `a` by index, for the inversion count.
        let odd_a: Vec<GenId> = a
            .factors
            .iter()
            .filter(|&&(id, _)| self.is_odd(id))
            .map(|&(id, _)| id)
            .collect();
        let mut inversions = 0usize;
        for &(id, _) in b.factors.iter().filter(|&&(id, _)| self.is_odd(id)) {
            if odd_a.binary_search(&id).is_ok() {
                return None; // odd square
            }
            inversions += odd_a.iter().filter(|&&ia| ia > id).count();
        }
        // Merge exponent vectors.
        let mut factors: Vec<(GenId, u32)> = Vec::with_capacity(a.factors.len() + b.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < a.factors.len() || j < b.factors.len() {
            if j >= b.factors.len() || (i < a.factors.len() && a.factors[i].0 < b.factors[j].0) {
                factors.push(a.factors[i]);
                i += 1;
            } else if i >= a.factors.len() || b.factors[j].0 < a.factors[i].0 {
                factors.push(b.factors[j]);
                j += 1;
            } else {
                factors.push((a.factors[i].0, a.factors[i].1 + b.factors[j].1));
                i += 1;
                j += 1;
            }
        }
        let m = Monomial { factors, degree: a.degree + b.degree };
        Some((m, if inversions % 2 == 0 { 1 } else { -1 }))
    }

    /// Graded-commutative product. Errors when the operands live in different
    /// algebras.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        if !self.same_algebra(a) || !self.same_algebra(b) {
            return Err(AlgebraError::MismatchedGenerators);
        }
        Ok(self.mul(a, b))
    }

    /// Graded-commutative product (operands assumed to live here).
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((m, sign)) = self.mul_monomials(ma, mb) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.insert_term(m, c);
                }
            }
        }
        self.claim(out)
    }

    pub fn pow(&self, a: &Element, n: u32) -> Element {
        let mut out = self.one();
        for _ in 0..n {
            out = self.mul(&out, a);
        }
        out
    }

    /// The complete canonical-ordered monomial basis of (ΛV)^k.
    pub fn monomials_of_degree(&self, k: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut stack: Vec<(GenId, u32)> = Vec::new();
        self.enumerate_monomials(0, k, &mut stack, &mut out);
        out.sort();
        out
    }

    fn enumerate_monomials(
        &self,
        from: usize,
        remaining: usize,
        stack: &mut Vec<(GenId, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            let degree = stack
                .iter()
                .map(|&(id, e)| self.degree(id) * e as usize)
                .sum();
            out.push(Monomial { factors: stack.clone(), degree });
            return;
        }
        if from >= self.gens.len() {
            return;
        }
        let d = self.degree(GenId(from));
        let max_e = if self.is_odd(GenId(from)) {
            1.min(remaining / d)
        } else {
            remaining / d
        };
        // exponent 0 first so recursion covers all exponent vectors
        self.enumerate_monomials(from + 1, remaining, stack, out);
        for e in 1..=max_e as u32 {
            stack.push((GenId(from), e));
            self.enumerate_monomials(from + 1, remaining - d * e as usize, stack, out);
            stack.pop();
        }
    }

    /// Coordinates of a homogeneous element of degree k in the canonical
    /// monomial basis.
    pub fn coeff_vector(&self, e: &Element, k: usize) -> Result<Vec<Q>, AlgebraError> {
        if !e.is_homogeneous_of_degree(k) {
            return Err(AlgebraError::NotHomogeneous(k));
        }
        let basis = self.monomials_of_degree(k);
        let mut v = vec![Q::zero(); basis.len()];
        for (m, c) in e.terms() {
            let idx = basis
                .binary_search(m)
                .expect("canonical monomial not in basis");
            v[idx] = c.clone();
        }
        Ok(v)
    }

    pub fn element_from_coords(&self, basis: &[Monomial], coords: &[Q]) -> Element {
        let mut out = Element::zero();
        for (m, c) in basis.iter().zip(coords) {
            out.insert_term(m.clone(), c.clone());
        }
        self.claim(out)
    }

    /// The homogeneous component of degree k.
    pub fn component(&self, e: &Element, k: usize) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            if m.degree() == k {
                out.insert_term(m.clone(), c.clone());
            }
        }
        self.claim(out)
    }

    /// The word-length-w component.
    pub fn word_component(&self, e: &Element, w: usize) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            if m.word_length() == w {
                out.insert_term(m.clone(), c.clone());
            }
        }
        self.claim(out)
    }

    pub fn max_word_length(&self, e: &Element) -> usize {
        e.terms.keys().map(|m| m.word_length()).max().unwrap_or(0)
    }

    /// Applies a derivation given by its values on generators, extended by the
    /// graded Leibniz rule. `odd_map` selects the sign rule: an operator of
    /// odd total degree picks up (-1)^{|x|} when passing x.
    pub fn apply_derivation(
        &self,
        values: &dyn Fn(GenId) -> Element,
        odd_map: bool,
        e: &Element,
    ) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            let contrib = self.apply_derivation_monomial(values, odd_map, m);
            for (mm, cc) in contrib.terms() {
                out.insert_term(mm.clone(), c * cc);
            }
        }
        self.claim(out)
    }

    fn apply_derivation_monomial(
        &self,
        values: &dyn Fn(GenId) -> Element,
        odd_map: bool,
        m: &Monomial,
    ) -> Element {
        // σ(l1 l2 … lr) = Σ_t ±(l1…l_{t-1}) σ(l_t) (l_{t+1}…lr)
        let letters: Vec<GenId> = m.letters().collect();
        let mut out = Element::zero();
        let mut prefix = self.one();
        let mut prefix_degree = 0usize;
        for (t, &l) in letters.iter().enumerate() {
            let v = values(l);
            if !v.is_zero() {
                let mut suffix = self.one();
                for &s in &letters[t + 1..] {
                    suffix = self.mul(&suffix, &self.gen_element(s));
                }
                let mut term = self.mul(&prefix, &v);
                term = self.mul(&term, &suffix);
                if odd_map && prefix_degree % 2 == 1 {
                    term = self.neg(&term);
                }
                out = self.add(&out, &term);
            }
            prefix = self.mul(&prefix, &self.gen_element(l));
            prefix_degree += self.degree(l);
        }
        out
    }

    /// Substitutes an element for a generator; the replacement must have the
    /// same degree and parity as the generator.
    pub fn substitute(&self, e: &Element, target: GenId, replacement: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            if !m.contains(target) {
                out.insert_term(m.clone(), c.clone());
                continue;
            }
            let mut acc = self.constant(c.clone());
            for l in m.letters() {
                let f = if l == target {
                    replacement.clone()
                } else {
                    self.gen_element(l)
                };
                acc = self.mul(&acc, &f);
            }
            out = self.add(&out, &acc);
        }
        self.claim(out)
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.factors
            .iter()
            .map(|&(id, e)| {
                if e == 1 {
                    self.gen(id).name.clone()
                } else {
                    format!("{}^{}", self.gen(id).name, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn render(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in e.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coeff_is_one = abs.is_one();
            if !coeff_is_one || m.is_one() {
                s.push_str(&render_q(&abs));
                if !m.is_one() {
                    s.push('*');
                }
            }
            if !m.is_one() {
                s.push_str(&self.render_monomial(m));
            }
        }
        s
    }
}

pub fn render_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(id, e)| {
                if e == 1 {
                    format!("g{}", id.0)
                } else {
                    format!("g{}^{}", id.0, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn algebra(spec: &[(&str, usize)]) -> Algebra {
        Algebra::new(
            spec.iter()
                .map(|&(n, d)| Generator { name: n.into(), degree: d })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn odd_generator_squares_to_zero() {
        let a = algebra(&[("y1", 7)]);
        let y = a.gen_element(GenId(0));
        assert!(a.mul(&y, &y).is_zero());
    }

    #[test]
    fn even_generator_commutes() {
        let a = algebra(&[("x1", 4), ("y1", 7)]);
        let x = a.gen_element(GenId(0));
        let y = a.gen_element(GenId(1));
        assert_eq!(a.mul(&y, &x), a.mul(&x, &y));
    }

    #[test]
    fn odd_generators_anticommute() {
        let a = algebra(&[("v1", 3), ("v2", 3)]);
        let v1 = a.gen_element(GenId(0));
        let v2 = a.gen_element(GenId(1));
        assert_eq!(a.mul(&v1, &v2), a.neg(&a.mul(&v2, &v1)));
    }

    #[test]
    fn monomial_basis_matches_examples() {
        let a = algebra(&[("x1", 4), ("x2", 6)]);
        let names = |k: usize| -> Vec<String> {
            a.monomials_of_degree(k)
                .iter()
                .map(|m| a.render_monomial(m))
                .collect()
        };
        assert_eq!(names(10), vec!["x1*x2"]);
        assert_eq!(names(8), vec!["x1^2"]);
        assert_eq!(names(12), vec!["x1^3", "x2^2"]);
        assert_eq!(names(0), vec!["1"]);

        let b = algebra(&[("v1", 3), ("v2", 3)]);
        let basis = b.monomials_of_degree(6);
        assert_eq!(basis.len(), 1);
        assert_eq!(b.render_monomial(&basis[0]), "v1*v2");
    }

    #[test]
    fn coeff_vector_in_canonical_order() {
        let a = algebra(&[("x1", 4), ("x2", 6)]);
        let x1 = a.gen_element(GenId(0));
        let x2 = a.gen_element(GenId(1));
        let e = a.sub(&a.scale(&q(2), &a.pow(&x1, 3)), &a.pow(&x2, 2));
        assert_eq!(a.coeff_vector(&e, 12).unwrap(), vec![q(2), q(-1)]);
        assert_eq!(a.coeff_vector(&a.zero(), 12).unwrap(), vec![q(0), q(0)]);
        let mixed = a.add(&x1, &x2);
        assert!(a.coeff_vector(&mixed, 4).is_err());
    }

    #[test]
    fn mismatched_algebras_rejected() {
        let a = algebra(&[("x", 2)]);
        let b = algebra(&[("x", 2)]);
        let ea = a.gen_element(GenId(0));
        let eb = b.gen_element(GenId(0));
        assert_eq!(
            a.multiply(&ea, &eb).unwrap_err(),
            AlgebraError::MismatchedGenerators
        );
    }

    #[test]
    fn substitution_preserves_grading() {
        let a = algebra(&[("u", 2), ("v", 2), ("w", 3)]);
        let u = a.gen_element(GenId(0));
        let v = a.gen_element(GenId(1));
        let w = a.gen_element(GenId(2));
        // substitute u := 2v in u^2*w
        let e = a.mul(&a.pow(&u, 2), &w);
        let s = a.substitute(&e, GenId(0), &a.scale(&q(2), &v));
        assert_eq!(s, a.scale(&q(4), &a.mul(&a.pow(&v, 2), &w)));
    }

    /// Transposition-by-transposition Koszul sign oracle: bubble-sorts the
    /// letter word counting odd-odd swaps.
    fn slow_product(a: &Algebra, ma: &Monomial, mb: &Monomial) -> Option<(Monomial, i32)> {
        let mut word: Vec<GenId> = ma.letters().chain(mb.letters()).collect();
        let mut sign = 1i32;
        loop {
            let mut swapped = false;
            for i in 0..word.len().saturating_sub(1) {
                if word[i] > word[i + 1] {
                    if a.is_odd(word[i]) && a.is_odd(word[i + 1]) {
                        sign = -sign;
                    }
                    word.swap(i, i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        for i in 0..word.len().saturating_sub(1) {
            if word[i] == word[i + 1] && a.is_odd(word[i]) {
                return None;
            }
        }
        let exps: Vec<(GenId, u32)> = {
            let mut v: Vec<(GenId, u32)> = Vec::new();
            for &l in &word {
                match v.last_mut() {
                    Some((id, e)) if *id == l => *e += 1,
                    _ => v.push((l, 1)),
                }
            }
            v
        };
        a.monomial_from_exponents(&exps).map(|m| (m, sign))
    }

    #[test]
    fn koszul_sign_matches_transposition_oracle() {
        use rand::{Rng, SeedableRng};
        let a = algebra(&[("x1", 2), ("v1", 3), ("x2", 4), ("v2", 5), ("v3", 3)]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let rand_mono = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut exps = Vec::new();
                for i in 0..5 {
                    let id = GenId(i);
                    let max = if a.is_odd(id) { 1 } else { 2 };
                    let e = rng.gen_range(0..=max);
                    if e > 0 {
                        exps.push((id, e));
                    }
                }
                a.monomial_from_exponents(&exps).unwrap()
            };
            let ma = rand_mono(&mut rng);
            let mb = rand_mono(&mut rng);
            assert_eq!(a.mul_monomials(&ma, &mb), slow_product(&a, &ma, &mb));
        }
    }

    #[test]
    fn multiplication_is_graded_commutative_and_associative() {
        use rand::{Rng, SeedableRng};
        let a = algebra(&[("x", 2), ("u", 3), ("v", 5), ("w", 4)]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rand_elt = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut e = a.zero();
            for _ in 0..3 {
                let mut exps = Vec::new();
                for i in 0..4 {
                    let id = GenId(i);
                    let max = if a.is_odd(id) { 1 } else { 2 };
                    let p = rng.gen_range(0..=max);
                    if p > 0 {
                        exps.push((id, p));
                    }
                }
                let m = a.monomial_from_exponents(&exps).unwrap();
                let c = q(rng.gen_range(-3i64..=3));
                e = a.add(&e, &a.from_monomial(m, c));
            }
            e
        };
        for _ in 0..200 {
            let x = rand_elt(&mut rng);
            let y = rand_elt(&mut rng);
            let z = rand_elt(&mut rng);
            assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
            // graded commutativity on homogeneous pieces
            for ka in 0..=20 {
                for kb in 0..=20 {
                    let xa = a.component(&x, ka);
                    let yb = a.component(&y, kb);
                    if xa.is_zero() || yb.is_zero() {
                        continue;
                    }
                    let lhs = a.mul(&xa, &yb);
                    let rhs = a.mul(&yb, &xa);
                    let expected = if ka % 2 == 1 && kb % 2 == 1 {
                        a.neg(&rhs)
                    } else {
                        rhs
                    };
                    assert_eq!(lhs, expected);
                }
            }
        }
    }

    /// Series oracle for dim (ΛV)^k: Π_odd (1+t^d) Π_even 1/(1-t^d).
    fn series_dims(a: &Algebra, max: usize) -> Vec<usize> {
        let mut c = vec![0usize; max + 1];
        c[0] = 1;
        for (_, g) in a.gens() {
            if g.is_odd() {
                for k in (g.degree..=max).rev() {
                    c[k] += c[k - g.degree];
                }
            } else {
                for k in g.degree..=max {
                    c[k] += c[k - g.degree];
                }
            }
        }
        c
    }

    #[test]
    fn monomial_count_matches_series_oracle() {
        let a = algebra(&[("x1", 4), ("x2", 6), ("y1", 7), ("y2", 9), ("y3", 11)]);
        let dims = series_dims(&a, 40);
        for k in 0..=40 {
            assert_eq!(a.monomials_of_degree(k).len(), dims[k], "degree {k}");
        }
        let b = algebra(&[("u", 2), ("v", 3), ("w", 5)]);
        let dims = series_dims(&b, 40);
        for k in 0..=40 {
            assert_eq!(b.monomials_of_degree(k).len(), dims[k], "degree {k}");
        }
    }
}
