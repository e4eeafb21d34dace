use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::circle::{same_basis, Basis, CircleFunction};
use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Bounds carried by every graded element: the highest grade that may be
/// nonzero, the lowest reliable grade, and whether everything below that
/// floor is known to vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradeBounds {
    pub top: i64,
    pub floor: i64,
    pub exact: bool,
}

impl GradeBounds {
    /// Bounds of a bilinear operation that sends grades `(a, b)` to
    /// `a + b + shift` (`shift = −1` for the bracket, `0` for the product).
    ///
    /// An inexact operand's unknown grades lie below its floor and can only
    /// reach result grades below `floor + other.top + shift`; an exact operand
    /// contributes no unknown grades.
    pub fn bilinear(f: Self, g: Self, shift: i64) -> Self {
        let top = f.top + g.top + shift;
        if f.exact && g.exact {
            return Self { top, floor: f.floor + g.floor + shift, exact: true };
        }
        let mut floor = i64::MIN;
        if !f.exact {
            floor = floor.max(f.floor + g.top + shift);
        }
        if !g.exact {
            floor = floor.max(g.floor + f.top + shift);
        }
        Self { top, floor, exact: false }
    }

    pub fn sum(f: Self, g: Self) -> Self {
        let top = f.top.max(g.top);
        match (f.exact, g.exact) {
            (true, true) => Self { top, floor: f.floor.min(g.floor), exact: true },
            (false, true) => Self { top, floor: f.floor, exact: false },
            (true, false) => Self { top, floor: g.floor, exact: false },
            (false, false) => Self { top, floor: f.floor.max(g.floor), exact: false },
        }
    }
}

/// `Σ_k ξᵏ f_k(x)` with finitely many stored grades between `floor` and `top`.
///
/// When `exact` is set the element is a Laurent polynomial and every grade
/// below `floor` vanishes. Otherwise it is a truncation of a formal Laurent
/// series whose grades below `floor` are unknown; such elements can only be
/// compared on grades at or above their floor.
#[derive(Clone, Debug)]
pub struct TruncatedLaurent<C> {
    basis: Basis,
    grades: BTreeMap<i64, CircleFunction<C>>,
    bounds: GradeBounds,
}

impl<C: Coeff> TruncatedLaurent<C> {
    pub fn zero(basis: Basis) -> Self {
        Self { basis, grades: BTreeMap::new(), bounds: GradeBounds { top: 0, floor: 0, exact: true } }
    }

    /// A Laurent polynomial whose bounds are read off its grades.
    pub fn exact(basis: Basis, grades: impl IntoIterator<Item = (i64, CircleFunction<C>)>) -> Result<Self> {
        let mut out = Self::zero(basis);
        for (k, f) in grades {
            same_basis(basis, f.basis())?;
            out.add_grade(k, &f);
        }
        let top = out.grades.keys().next_back().copied().unwrap_or(0);
        let floor = out.grades.keys().next().copied().unwrap_or(top);
        out.bounds = GradeBounds { top, floor, exact: true };
        Ok(out)
    }

    /// `f(x)·ξᵏ`.
    pub fn monomial(f: CircleFunction<C>, k: i64) -> Self {
        let basis = f.basis();
        Self::exact(basis, [(k, f)]).expect("single basis")
    }

    /// Builds an element with explicit bounds. Grades outside `[floor, top]`
    /// are rejected for exact elements and dropped below the floor otherwise.
    pub fn with_bounds(
        basis: Basis,
        grades: impl IntoIterator<Item = (i64, CircleFunction<C>)>,
        bounds: GradeBounds,
    ) -> Result<Self> {
        let mut out = Self { basis, grades: BTreeMap::new(), bounds };
        for (k, f) in grades {
            same_basis(basis, f.basis())?;
            if k > bounds.top || (bounds.exact && k < bounds.floor) {
                if f.is_zero() {
                    continue;
                }
                return Err(Error::InvalidArgument(format!(
                    "grade {k} outside [{}, {}]",
                    bounds.floor, bounds.top
                )));
            }
            if k >= bounds.floor {
                out.add_grade(k, &f);
            }
        }
        Ok(out)
    }

    pub(crate) fn from_raw(basis: Basis, grades: BTreeMap<i64, CircleFunction<C>>, bounds: GradeBounds) -> Self {
        let mut out = Self { basis, grades: BTreeMap::new(), bounds };
        for (k, f) in grades {
            if k >= bounds.floor && !f.is_zero() {
                out.grades.insert(k, f);
            }
        }
        out
    }

    fn add_grade(&mut self, k: i64, f: &CircleFunction<C>) {
        let entry = self.grades.entry(k).or_insert_with(|| CircleFunction::zero(f.basis()));
        entry.add_assign_unchecked(f);
        if entry.is_zero() {
            self.grades.remove(&k);
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn bounds(&self) -> GradeBounds {
        self.bounds
    }

    pub fn top(&self) -> i64 {
        self.bounds.top
    }

    pub fn floor(&self) -> i64 {
        self.bounds.floor
    }

    pub fn is_exact(&self) -> bool {
        self.bounds.exact
    }

    /// Lowest grade on which this element is known, `None` when exact.
    pub fn reliable_floor(&self) -> Option<i64> {
        (!self.bounds.exact).then_some(self.bounds.floor)
    }

    pub fn grades(&self) -> &BTreeMap<i64, CircleFunction<C>> {
        &self.grades
    }

    /// The ξᵏ coefficient. Asking below the floor of an inexact element is a
    /// contract violation.
    pub fn grade(&self, k: i64) -> Result<CircleFunction<C>> {
        if let Some(fl) = self.reliable_floor() {
            if k < fl {
                return Err(Error::BelowFloor { requested: k, floor: fl });
            }
        }
        Ok(self.grades.get(&k).cloned().unwrap_or_else(|| CircleFunction::zero(self.basis)))
    }

    /// Forgets every grade below `floor`, producing an inexact element.
    pub fn truncate(&self, floor: i64) -> Result<Self> {
        if let Some(fl) = self.reliable_floor() {
            if floor < fl {
                return Err(Error::BelowFloor { requested: floor, floor: fl });
            }
        }
        let bounds = GradeBounds { top: self.bounds.top.max(floor), floor, exact: false };
        Ok(Self::from_raw(self.basis, self.grades.clone(), bounds))
    }

    /// Drops unknown-grade information when every grade is known to vanish below
    /// `floor` for reasons outside this value (e.g. polynomial coefficients).
    pub fn assume_exact(mut self) -> Self {
        self.bounds.exact = true;
        if let Some(&lo) = self.grades.keys().next() {
            self.bounds.floor = self.bounds.floor.min(lo);
        }
        self
    }

    pub fn is_zero_reliable(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let grades = self.grades.iter().map(|(k, g)| (*k, g.map_coeffs(&f))).collect();
        Self::from_raw(self.basis, grades, self.bounds)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.mul_ref(c))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        same_basis(self.basis, o.basis)?;
        let bounds = GradeBounds::sum(self.bounds, o.bounds);
        let mut grades = self.grades.clone();
        for (k, f) in &o.grades {
            let e = grades.entry(*k).or_insert_with(|| CircleFunction::zero(self.basis));
            e.add_assign_unchecked(f);
        }
        Ok(Self::from_raw(self.basis, grades, bounds))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    /// `{F, G} = F_ξ G_x − F_x G_ξ`. On monomials,
    /// `{f ξᵃ, g ξᵇ} = (a f g′ − b f′ g) ξ^{a+b−1}`.
    pub fn bracket(&self, o: &Self) -> Result<Self> {
        same_basis(self.basis, o.basis)?;
        let bounds = GradeBounds::bilinear(self.bounds, o.bounds, -1);
        let dself: BTreeMap<i64, CircleFunction<C>> = self.grades.iter().map(|(k, f)| (*k, f.derive())).collect();
        let dother: BTreeMap<i64, CircleFunction<C>> = o.grades.iter().map(|(k, f)| (*k, f.derive())).collect();
        let mut grades: BTreeMap<i64, CircleFunction<C>> = BTreeMap::new();
        for (a, f) in &self.grades {
            for (b, g) in &o.grades {
                let k = a + b - 1;
                if k < bounds.floor {
                    continue;
                }
                let mut term = CircleFunction::zero(self.basis);
                if *a != 0 {
                    term.add_assign_unchecked(&f.mul_unchecked(&dother[b]).scale_int(*a));
                }
                if *b != 0 {
                    term.add_assign_unchecked(&dself[a].mul_unchecked(g).scale_int(-*b));
                }
                grades.entry(k).or_insert_with(|| CircleFunction::zero(self.basis)).add_assign_unchecked(&term);
            }
        }
        Ok(Self::from_raw(self.basis, grades, bounds))
    }

    /// The commutative graded product.
    pub fn product(&self, o: &Self) -> Result<Self> {
        same_basis(self.basis, o.basis)?;
        let bounds = GradeBounds::bilinear(self.bounds, o.bounds, 0);
        let mut grades: BTreeMap<i64, CircleFunction<C>> = BTreeMap::new();
        for (a, f) in &self.grades {
            for (b, g) in &o.grades {
                let k = a + b;
                if k < bounds.floor {
                    continue;
                }
                grades
                    .entry(k)
                    .or_insert_with(|| CircleFunction::zero(self.basis))
                    .add_assign_unchecked(&f.mul_unchecked(g));
            }
        }
        Ok(Self::from_raw(self.basis, grades, bounds))
    }

    /// `∂/∂x`, grade by grade.
    pub fn derive_x(&self) -> Self {
        let grades = self.grades.iter().map(|(k, f)| (*k, f.derive())).collect();
        Self::from_raw(self.basis, grades, self.bounds)
    }

    /// `ξ ∂/∂ξ`: scales grade k by k.
    pub fn euler_xi(&self) -> Self {
        let grades = self.grades.iter().map(|(k, f)| (*k, f.scale_int(*k))).collect();
        Self::from_raw(self.basis, grades, self.bounds)
    }

    /// Lowest grade on which both elements are known.
    pub fn comparison_floor(&self, o: &Self) -> Option<i64> {
        match (self.reliable_floor(), o.reliable_floor()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.max(b)),
        }
    }

    /// Equality on every grade both elements know.
    pub fn agrees_with(&self, o: &Self) -> bool {
        if self.basis != o.basis {
            return false;
        }
        let fl = self.comparison_floor(o).unwrap_or(i64::MIN);
        let keys: std::collections::BTreeSet<i64> =
            self.grades.keys().chain(o.grades.keys()).copied().filter(|k| *k >= fl).collect();
        keys.into_iter().all(|k| self.grades.get(&k) == o.grades.get(&k))
    }

    /// Equality on grades `≥ floor`; errors if either side is unknown there.
    pub fn agrees_down_to(&self, o: &Self, floor: i64) -> Result<bool> {
        same_basis(self.basis, o.basis)?;
        if let Some(fl) = self.comparison_floor(o) {
            if floor < fl {
                return Err(Error::BelowFloor { requested: floor, floor: fl });
            }
        }
        let keys: std::collections::BTreeSet<i64> =
            self.grades.keys().chain(o.grades.keys()).copied().filter(|k| *k >= floor).collect();
        Ok(keys.into_iter().all(|k| self.grades.get(&k) == o.grades.get(&k)))
    }

    /// Canonical JSON: `grade → index → scalar string` plus the bounds.
    pub fn to_json(&self) -> Value {
        let mut grades = Map::new();
        for (k, f) in &self.grades {
            let mut modes = Map::new();
            for (n, c) in f.coeffs() {
                modes.insert(n.to_string(), Value::String(c.to_string()));
            }
            grades.insert(k.to_string(), Value::Object(modes));
        }
        json!({
            "basis": self.basis.to_string(),
            "top": self.bounds.top,
            "floor": self.bounds.floor,
            "exact": self.bounds.exact,
            "grades": grades,
        })
    }
}

#[cfg(test)]
mod tests {
    #[allow(unused_imports)]
    use num_traits::{One, Zero};
    #[allow(unused_imports)]
    use std::ops::Neg;
    use super::*;
    use crate::{GaussQ, ParamScalar, Var};

    type F = CircleFunction<ParamScalar>;
    type L = TruncatedLaurent<ParamScalar>;

    fn mode(n: i64, c: ParamScalar, k: i64) -> L {
        L::monomial(F::mode(n, c), k)
    }

    fn xpoly(cs: &[ParamScalar], k: i64) -> L {
        L::monomial(F::from_coeffs(Basis::Polynomial, cs.iter().cloned().enumerate().map(|(n, c)| (n as i64, c))).unwrap(), k)
    }

    #[test]
    fn bracket_of_linear_symbols_is_vector_bracket() {
        let f = F::mode(2, ParamScalar::var(Var::Lambda));
        let g = F::mode(-1, ParamScalar::int(3)).add(&F::mode(0, ParamScalar::one())).unwrap();
        let lhs = L::monomial(f.clone(), 1).bracket(&L::monomial(g.clone(), 1)).unwrap();
        let fg = f.mul(&g.derive()).unwrap().sub(&f.derive().mul(&g).unwrap()).unwrap();
        assert!(lhs.agrees_with(&L::monomial(fg, 1)));
    }

    #[test]
    fn xi_with_itself() {
        let xi = mode(0, ParamScalar::one(), 1);
        assert!(xi.bracket(&xi).unwrap().is_zero_reliable());
    }

    #[test]
    fn monomial_bracket_formula() {
        // {e^{imx}ξᵃ, e^{inx}ξᵇ} = i(an − bm) e^{i(m+n)x} ξ^{a+b−1}
        for (m, a, n, b) in [(1, 2, -3, 1), (0, -1, 2, 3), (4, 0, 4, -2)] {
            let lhs = mode(m, ParamScalar::one(), a).bracket(&mode(n, ParamScalar::one(), b)).unwrap();
            let c = ParamScalar::constant(GaussQ::from_ints(0, a * n - b * m));
            assert!(lhs.agrees_with(&mode(m + n, c, a + b - 1)), "{m} {a} {n} {b}");
        }
    }

    #[test]
    fn products() {
        let one = ParamScalar::one;
        let xi = xpoly(&[one()], 1);
        let xi_inv = xpoly(&[one()], -1);
        assert!(xi.product(&xi_inv).unwrap().agrees_with(&xpoly(&[one()], 0)));

        let lam = ParamScalar::var(Var::Lambda);
        let p = xpoly(&[ParamScalar::zero(), one()], 1).add(&xpoly(&[lam.clone()], 0)).unwrap();
        let sq = p.product(&p).unwrap();
        let expect = xpoly(&[ParamScalar::zero(), ParamScalar::zero(), one()], 2)
            .add(&xpoly(&[ParamScalar::zero(), lam.scale_int(2)], 1))
            .unwrap()
            .add(&xpoly(&[lam.pow(2)], 0))
            .unwrap();
        assert!(sq.agrees_with(&expect));
        assert!(p.product(&L::zero(Basis::Polynomial)).unwrap().is_zero_reliable());
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let a = mode(0, ParamScalar::one(), 1);
        let b = xpoly(&[ParamScalar::one()], 1);
        assert!(matches!(a.bracket(&b), Err(Error::BasisMismatch(..))));
        assert!(matches!(a.product(&b), Err(Error::BasisMismatch(..))));
    }

    #[test]
    fn floor_rules() {
        let a = mode(1, ParamScalar::one(), 1).add(&mode(0, ParamScalar::one(), -2)).unwrap().truncate(-3).unwrap();
        let b = mode(2, ParamScalar::one(), 2);
        let br = a.bracket(&b).unwrap();
        assert_eq!(br.top(), 2);
        assert_eq!(br.reliable_floor(), Some(-3 + 2 - 1));
        let both = a.bracket(&a).unwrap();
        assert_eq!(both.reliable_floor(), Some(-3 + 1 - 1));
        let e = mode(1, ParamScalar::one(), 1).bracket(&mode(0, ParamScalar::one(), -2)).unwrap();
        assert!(e.is_exact());
        assert_eq!(e.floor(), 1 - 2 - 1);
    }

    #[test]
    fn comparisons_respect_the_floor() {
        let a = mode(1, ParamScalar::one(), 0).truncate(-2).unwrap();
        let b = mode(1, ParamScalar::one(), 0).add(&mode(1, ParamScalar::one(), -5)).unwrap();
        assert!(a.agrees_with(&b));
        assert!(a.agrees_down_to(&b, -2).unwrap());
        assert_eq!(a.agrees_down_to(&b, -3), Err(Error::BelowFloor { requested: -3, floor: -2 }));
        assert!(a.grade(-3).is_err());
        assert!(a.truncate(-4).is_err());
    }

    #[test]
    fn json_is_canonical() {
        let a = mode(-1, ParamScalar::var(Var::Mu), -1).truncate(-2).unwrap();
        let j = a.to_json();
        assert_eq!(j["grades"]["-1"]["-1"], "μ");
        assert_eq!(j["exact"], false);
        assert_eq!(serde_json::to_string(&j).unwrap(), serde_json::to_string(&a.to_json()).unwrap());
    }
}
