//! Linear maps `f ↦ Σ_k ξᵏ Σ_d c_{k,d}(x) f^{(d)}(x)` from vector fields to
//! graded elements, kept symbolic in `f` so that brackets with fixed elements
//! can be composed without choosing test fields.

use std::collections::BTreeMap;

use super::circle::{same_basis, Basis, CircleFunction, VectorField};
use super::truncated::{GradeBounds, TruncatedLaurent};
use crate::error::Result;
use crate::scalar::Coeff;

/// `Σ_d c_d(x) ∂^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp<C> {
    basis: Basis,
    terms: BTreeMap<u32, CircleFunction<C>>,
}

impl<C: Coeff> DiffOp<C> {
    pub fn zero(basis: Basis) -> Self {
        Self { basis, terms: BTreeMap::new() }
    }

    /// `c·∂^d` with a constant coefficient.
    pub fn constant(basis: Basis, order: u32, c: C) -> Self {
        Self::zero(basis).plus(order, &CircleFunction::constant(basis, c))
    }

    pub fn plus(mut self, order: u32, c: &CircleFunction<C>) -> Self {
        self.add_term(order, c);
        self
    }

    fn add_term(&mut self, order: u32, c: &CircleFunction<C>) {
        let e = self.terms.entry(order).or_insert_with(|| CircleFunction::zero(c.basis()));
        e.add_assign_unchecked(c);
        if e.is_zero() {
            self.terms.remove(&order);
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeMap<u32, CircleFunction<C>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// Every coefficient is constant in `x`.
    pub fn constant_coefficients(&self) -> Option<BTreeMap<u32, C>> {
        self.terms
            .iter()
            .map(|(d, c)| {
                if c.coeffs().keys().all(|n| *n == 0) {
                    Some((*d, c.constant_term()))
                } else {
                    None
                }
            })
            .collect()
    }

    pub(crate) fn add_assign(&mut self, o: &Self) {
        for (d, c) in &o.terms {
            self.add_term(*d, c);
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.basis);
        for (d, c) in &self.terms {
            out.add_term(*d, &c.map_coeffs(&f));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.map_coeffs(|c| c.scale_int(n))
    }

    /// `a(x) · D`.
    pub fn left_mul(&self, a: &CircleFunction<C>) -> Self {
        let mut out = Self::zero(self.basis);
        for (d, c) in &self.terms {
            out.add_term(*d, &a.mul_unchecked(c));
        }
        out
    }

    /// `∂ ∘ D = Σ (c_d′ ∂^d + c_d ∂^{d+1})`.
    pub fn derive(&self) -> Self {
        let mut out = Self::zero(self.basis);
        for (d, c) in &self.terms {
            out.add_term(*d, &c.derive());
            out.add_term(d + 1, c);
        }
        out
    }

    pub fn apply(&self, f: &CircleFunction<C>) -> Result<CircleFunction<C>> {
        same_basis(self.basis, f.basis())?;
        let ders = f.derivatives(self.max_order());
        let mut out = CircleFunction::zero(self.basis);
        for (d, c) in &self.terms {
            out.add_assign_unchecked(&c.mul_unchecked(&ders[*d as usize]));
        }
        Ok(out)
    }
}

/// A graded table of [`DiffOp`]s with the same bound contract as
/// [`TruncatedLaurent`]: evaluating it on any vector field yields an element
/// with these bounds.
#[derive(Clone, Debug)]
pub struct OpLaurent<C> {
    basis: Basis,
    grades: BTreeMap<i64, DiffOp<C>>,
    bounds: GradeBounds,
}

impl<C: Coeff> OpLaurent<C> {
    pub fn new(basis: Basis, grades: BTreeMap<i64, DiffOp<C>>, bounds: GradeBounds) -> Self {
        let grades = grades
            .into_iter()
            .filter(|(k, d)| *k >= bounds.floor && !d.is_zero())
            .collect();
        Self { basis, grades, bounds }
    }

    /// Exact table whose bounds are read off its grades.
    pub fn exact(basis: Basis, grades: BTreeMap<i64, DiffOp<C>>) -> Self {
        let grades: BTreeMap<i64, DiffOp<C>> = grades.into_iter().filter(|(_, d)| !d.is_zero()).collect();
        let top = grades.keys().next_back().copied().unwrap_or(0);
        let floor = grades.keys().next().copied().unwrap_or(top);
        Self { basis, grades, bounds: GradeBounds { top, floor, exact: true } }
    }

    pub fn zero(basis: Basis) -> Self {
        Self::exact(basis, BTreeMap::new())
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn bounds(&self) -> GradeBounds {
        self.bounds
    }

    pub fn grades(&self) -> &BTreeMap<i64, DiffOp<C>> {
        &self.grades
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let grades = self.grades.iter().map(|(k, d)| (*k, d.map_coeffs(&f))).collect();
        Self::new(self.basis, grades, self.bounds)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        same_basis(self.basis, o.basis)?;
        let bounds = GradeBounds::sum(self.bounds, o.bounds);
        let mut grades = self.grades.clone();
        for (k, d) in &o.grades {
            grades.entry(*k).or_insert_with(|| DiffOp::zero(self.basis)).add_assign(d);
        }
        Ok(Self::new(self.basis, grades, bounds))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    /// Evaluates the table on `X = f d/dx`.
    pub fn apply(&self, x: &VectorField<C>) -> Result<TruncatedLaurent<C>> {
        same_basis(self.basis, x.basis())?;
        let ders = x.f.derivatives(self.grades.values().map(|d| d.max_order()).max().unwrap_or(0));
        let mut grades = BTreeMap::new();
        for (k, d) in &self.grades {
            let mut g = CircleFunction::zero(self.basis);
            for (ord, c) in d.terms() {
                g.add_assign_unchecked(&c.mul_unchecked(&ders[*ord as usize]));
            }
            grades.insert(*k, g);
        }
        Ok(TruncatedLaurent::from_raw(self.basis, grades, self.bounds))
    }

    /// `X ↦ {F, Φ(X)}` for a fixed element `F`.
    pub fn bracket_from_left(f: &TruncatedLaurent<C>, phi: &Self) -> Result<Self> {
        same_basis(f.basis(), phi.basis)?;
        let bounds = GradeBounds::bilinear(f.bounds(), phi.bounds, -1);
        let mut grades: BTreeMap<i64, DiffOp<C>> = BTreeMap::new();
        for (a, fa) in f.grades() {
            let dfa = fa.derive();
            for (b, op) in &phi.grades {
                let k = a + b - 1;
                if k < bounds.floor {
                    continue;
                }
                // a·f_a·(Φ_b f)′ − b·f_a′·(Φ_b f)
                let mut term = op.derive().left_mul(fa).scale_int(*a);
                term.add_assign(&op.left_mul(&dfa).scale_int(-*b));
                grades.entry(k).or_insert_with(|| DiffOp::zero(phi.basis)).add_assign(&term);
            }
        }
        Ok(Self::new(phi.basis, grades, bounds))
    }

    /// `X ↦ {Φ(X), F}`.
    pub fn bracket_from_right(phi: &Self, f: &TruncatedLaurent<C>) -> Result<Self> {
        Ok(Self::bracket_from_left(f, phi)?.neg())
    }
}
