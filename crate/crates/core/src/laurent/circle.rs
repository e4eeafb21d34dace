use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// How the index of a [`CircleFunction`] coefficient is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `n ↦ e^{inx}` on the circle.
    Fourier,
    /// `n ↦ xⁿ`, `n ≥ 0`, on the line.
    Polynomial,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Fourier => "fourier",
            Basis::Polynomial => "polynomial",
        })
    }
}

pub(crate) fn same_basis(a: Basis, b: Basis) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::BasisMismatch(a.to_string(), b.to_string()))
    }
}

/// A finite Fourier sum or a polynomial in `x`, with exact coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleFunction<C> {
    basis: Basis,
    coeffs: BTreeMap<i64, C>,
}

impl<C: Coeff> CircleFunction<C> {
    pub fn zero(basis: Basis) -> Self {
        Self { basis, coeffs: BTreeMap::new() }
    }

    pub fn constant(basis: Basis, c: C) -> Self {
        Self::zero(basis).with_term(0, c)
    }

    /// `c·e^{inx}`.
    pub fn mode(n: i64, c: C) -> Self {
        Self::zero(Basis::Fourier).with_term(n, c)
    }

    /// `c·xⁿ`.
    pub fn monomial(n: i64, c: C) -> Result<Self> {
        if n < 0 {
            return Err(Error::NegativePolynomialIndex(n));
        }
        Ok(Self::zero(Basis::Polynomial).with_term(n, c))
    }

    pub fn from_coeffs(basis: Basis, iter: impl IntoIterator<Item = (i64, C)>) -> Result<Self> {
        let mut out = Self::zero(basis);
        for (n, c) in iter {
            if basis == Basis::Polynomial && n < 0 {
                return Err(Error::NegativePolynomialIndex(n));
            }
            out.add_term(n, c);
        }
        Ok(out)
    }

    fn with_term(mut self, n: i64, c: C) -> Self {
        self.add_term(n, c);
        self
    }

    fn add_term(&mut self, n: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&n) {
            Some(old) => {
                let s = old.add_ref(&c);
                if s.is_zero() {
                    self.coeffs.remove(&n);
                } else {
                    *old = s;
                }
            }
            None => {
                self.coeffs.insert(n, c);
            }
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, C> {
        &self.coeffs
    }

    pub fn coefficient(&self, n: i64) -> C {
        self.coeffs.get(&n).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The `e^{i0x}` resp. `x⁰` coefficient; for the Fourier basis this is
    /// the mean over the circle.
    pub fn constant_term(&self) -> C {
        self.coefficient(0)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        same_basis(self.basis, o.basis)?;
        Ok(self.add_unchecked(o))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        same_basis(self.basis, o.basis)?;
        Ok(self.add_unchecked(&o.neg()))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        same_basis(self.basis, o.basis)?;
        Ok(self.mul_unchecked(o))
    }

    pub(crate) fn add_unchecked(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in &o.coeffs {
            out.add_term(*n, c.clone());
        }
        out
    }

    pub(crate) fn add_assign_unchecked(&mut self, o: &Self) {
        for (n, c) in &o.coeffs {
            self.add_term(*n, c.clone());
        }
    }

    /// Modes and monomial exponents both add under multiplication.
    pub(crate) fn mul_unchecked(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.basis);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &o.coeffs {
                out.add_term(a + b, ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.basis);
        }
        self.map_coeffs(|x| x.mul_ref(c))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&C::from_i64(n))
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.basis);
        for (n, c) in &self.coeffs {
            out.add_term(*n, f(c));
        }
        out
    }

    /// `d/dx`: mode `n` picks up `i·n`; `xⁿ ↦ n·xⁿ⁻¹`.
    pub fn derive(&self) -> Self {
        let mut out = Self::zero(self.basis);
        for (n, c) in &self.coeffs {
            match self.basis {
                Basis::Fourier => out.add_term(*n, c.scale_int(*n).mul_i()),
                Basis::Polynomial if *n > 0 => out.add_term(n - 1, c.scale_int(*n)),
                Basis::Polynomial => {}
            }
        }
        out
    }

    pub fn derive_n(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derive())
    }

    /// All derivatives `f, f′, …, f^{(k)}`.
    pub fn derivatives(&self, k: u32) -> Vec<Self> {
        let mut out = Vec::with_capacity(k as usize + 1);
        out.push(self.clone());
        for i in 0..k as usize {
            let d = out[i].derive();
            out.push(d);
        }
        out
    }
}

impl<C: Coeff> fmt::Display for CircleFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(n, c)| match self.basis {
                Basis::Fourier => format!("({c})·e^{{{n}ix}}"),
                Basis::Polynomial => format!("({c})·x^{n}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The vector field `f(x)·d/dx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField<C> {
    pub f: CircleFunction<C>,
}

impl<C: Coeff> VectorField<C> {
    pub fn new(f: CircleFunction<C>) -> Self {
        Self { f }
    }

    /// `Lₙ = z^{n+1} d/dz` with `z = e^{ix}`, i.e. `f = −i·e^{inx}`.
    pub fn basis_element(n: i64) -> Self {
        Self::new(CircleFunction::mode(n, C::one().mul_i().neg()))
    }

    /// `xⁿ d/dx` on the line.
    pub fn polynomial_monomial(n: i64) -> Self {
        Self::new(CircleFunction::monomial(n, C::one()).expect("nonnegative exponent"))
    }

    pub fn basis(&self) -> Basis {
        self.f.basis()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(Self::new(self.f.add(&o.f)?))
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.f.scale(c))
    }

    /// `[f d/dx, g d/dx] = (f g′ − f′ g) d/dx`.
    pub fn bracket(&self, o: &Self) -> Result<Self> {
        same_basis(self.basis(), o.basis())?;
        let (f, g) = (&self.f, &o.f);
        let a = f.mul_unchecked(&g.derive());
        let b = f.derive().mul_unchecked(g);
        Ok(Self::new(a.add_unchecked(&b.neg())))
    }
}

/// Weight of the tensor-density module `F_λ`: densities `a(x)(dx)^{-λ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityWeight<C> {
    pub lambda: C,
}

/// Lie derivative on densities: `f a′ − λ f′ a`.
pub fn density_action<C: Coeff>(
    w: &DensityWeight<C>,
    x: &VectorField<C>,
    a: &CircleFunction<C>,
) -> Result<CircleFunction<C>> {
    same_basis(x.basis(), a.basis())?;
    let f = &x.f;
    let lhs = f.mul_unchecked(&a.derive());
    let rhs = f.derive().mul_unchecked(a).scale(&w.lambda);
    Ok(lhs.add_unchecked(&rhs.neg()))
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
    type V = VectorField<ParamScalar>;

    fn poly(cs: &[i64]) -> F {
        F::from_coeffs(Basis::Polynomial, cs.iter().enumerate().map(|(n, c)| (n as i64, ParamScalar::int(*c)))).unwrap()
    }

    #[test]
    fn derivatives() {
        assert!(F::constant(Basis::Fourier, ParamScalar::one()).derive().is_zero());
        let e = F::mode(3, ParamScalar::one());
        assert_eq!(e.derive(), F::mode(3, ParamScalar::constant(GaussQ::from_ints(0, 3))));
        assert_eq!(poly(&[0, 0, 1]).derive(), poly(&[0, 2]));
    }

    #[test]
    fn negative_polynomial_index_rejected() {
        assert_eq!(F::monomial(-1, ParamScalar::one()), Err(Error::NegativePolynomialIndex(-1)));
    }

    #[test]
    fn vector_bracket_examples() {
        let d = V::polynomial_monomial(0);
        let xd = V::polynomial_monomial(1);
        let x2d = V::polynomial_monomial(2);
        assert_eq!(d.bracket(&xd).unwrap(), d);
        assert_eq!(xd.bracket(&x2d).unwrap(), x2d);
        assert!(x2d.bracket(&x2d).unwrap().is_zero());
        assert!(matches!(d.bracket(&V::basis_element(1)), Err(Error::BasisMismatch(..))));
    }

    #[test]
    fn witt_relation_under_this_convention() {
        // [L_m, L_n] = (n − m) L_{m+n} for the bracket (fg′ − f′g).
        for m in -3..=3 {
            for n in -3..=3 {
                let lhs = V::basis_element(m).bracket(&V::basis_element(n)).unwrap();
                let rhs = V::basis_element(m + n).scale(&ParamScalar::int(n - m));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn density_action_examples() {
        let a = F::mode(2, ParamScalar::var(Var::C0));
        let x = V::basis_element(1);
        let w0 = DensityWeight { lambda: ParamScalar::zero() };
        assert_eq!(density_action(&w0, &x, &a).unwrap(), x.f.mul(&a.derive()).unwrap());
        let one = V::new(F::constant(Basis::Fourier, ParamScalar::one()));
        let w = DensityWeight { lambda: ParamScalar::var(Var::Lambda) };
        assert_eq!(density_action(&w, &one, &a).unwrap(), a.derive());
    }
}
