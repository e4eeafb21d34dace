use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Coeff, Field, GaussianRational};
use crate::error::{Error, Result};

/// The deformation parameters a scalar may depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    Lambda,
    Mu,
    T,
    C0,
    C1,
    C2,
}

pub const VARS: [Var; 6] = [Var::Lambda, Var::Mu, Var::T, Var::C0, Var::C1, Var::C2];

impl Var {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Lambda => "λ",
            Var::Mu => "μ",
            Var::T => "t",
            Var::C0 => "c0",
            Var::C1 => "c1",
            Var::C2 => "c2",
        }
    }

    /// Accepts the canonical names plus ASCII spellings.
    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "λ" | "lambda" | "l" => Some(Var::Lambda),
            "μ" | "mu" | "m" => Some(Var::Mu),
            "t" => Some(Var::T),
            "c0" | "c₀" => Some(Var::C0),
            "c1" | "c₁" => Some(Var::C1),
            "c2" | "c₂" => Some(Var::C2),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over [`VARS`]. Ordered graded-lexicographically, so the
/// last key of a sorted map is the leading monomial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u16; 6]);

impl Monomial {
    pub fn one() -> Self {
        Self([0; 6])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 6];
        e[v.index()] = 1;
        Self(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0) {
            *a += b;
        }
        Self(e)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0) {
            *a = a.checked_sub(b)?;
        }
        Some(Self(e))
    }

    fn render(&self) -> String {
        let parts: Vec<String> = VARS
            .iter()
            .filter(|v| self.exponent(**v) > 0)
            .map(|v| match self.exponent(*v) {
                1 => v.name().to_string(),
                e => format!("{}^{}", v.name(), e),
            })
            .collect();
        parts.join("*")
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse multivariate polynomial in the deformation parameters.
///
/// No stored coefficient is zero, so derived equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Poly<C> {
    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Self { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(C::one(), Monomial::var(v))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(C::from_i64(n))
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.add_ref(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.is_constant() {
            Some(self.terms.get(&Monomial::one()).cloned().unwrap_or_else(C::zero))
        } else {
            None
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v) as u32).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<Var> {
        VARS.iter().copied().filter(|v| self.degree_in(*v) > 0).collect()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Drops every monomial whose degree in `v` exceeds `max`.
    pub fn truncate_degree(&self, v: Var, max: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(v) as u32 <= max)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        self.map_coeffs(|x| x.mul_ref(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        super::pow(self, e)
    }

    /// Composes `self` with the given bindings. Every indeterminate that
    /// occurs in `self` must be bound.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Poly<C>>) -> Result<Self> {
        for v in self.variables() {
            if !bindings.contains_key(&v) {
                return Err(Error::UnboundIndeterminate(v.name().to_string()));
            }
        }
        Ok(self.substitute_partial(bindings))
    }

    /// Like [`Poly::substitute`] but leaves unbound indeterminates in place.
    pub fn substitute_partial(&self, bindings: &BTreeMap<Var, Poly<C>>) -> Self {
        let mut powers: BTreeMap<(Var, u16), Poly<C>> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            let mut rest = Monomial::one();
            for v in VARS {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                match bindings.get(&v) {
                    Some(b) => {
                        let p = powers.entry((v, e)).or_insert_with(|| b.pow(e as u32));
                        acc = acc.mul_ref(p);
                    }
                    None => rest.0[v.index()] = e,
                }
            }
            if rest != Monomial::one() {
                acc = acc.mul_ref(&Self::term(C::one(), rest));
            }
            out = out.add_ref(&acc);
        }
        out
    }

    fn render_coeff_prefix(c: &C, bare: bool) -> String {
        let s = c.to_string();
        if bare {
            return s;
        }
        if c.is_one() {
            return String::new();
        }
        if (-c.clone()).is_one() {
            return "-".to_string();
        }
        // A Gaussian coefficient with both parts nonzero renders as `a+b*i`.
        let inner_sign = s[1..].contains(['+', '-']);
        if inner_sign {
            format!("({s})*")
        } else {
            format!("{s}*")
        }
    }

    /// Deterministic rendering, leading monomial first.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let bare = *m == Monomial::one();
            let mut t = Self::render_coeff_prefix(c, bare);
            if !bare {
                t.push_str(&m.render());
            }
            if k == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }
}

impl<C: Field> Poly<C> {
    /// Exact multivariate division: `Some(q)` with `self = q·d`, or `None`
    /// when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading_term()?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(dm)?;
            let qc = c.mul_ref(&dc_inv);
            let t = Self::term(qc, qm);
            rem = rem.sub_ref(&t.mul_ref(d));
            quot = quot.add_ref(&t);
        }
        Some(quot)
    }

    pub fn div_scalar(&self, c: &C) -> Option<Self> {
        Some(self.scale(&c.inv()?))
    }
}

impl Poly<GaussianRational<BigRational>> {
    fn coeff_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()))
    }

    fn coeff_gcd(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&c.numerator_gcd()))
    }

    fn sign_normalized(self) -> Self {
        let negative = match self.leading_term() {
            Some((_, c)) if !c.re.is_zero() => c.re.is_negative(),
            Some((_, c)) => c.im.is_negative(),
            None => false,
        };
        if negative {
            -self
        } else {
            self
        }
    }

    /// Multiplies through by the common denominator and makes the leading
    /// coefficient positive. Integer content is kept.
    pub fn clear_denominators(&self) -> Self {
        let l = GaussianRational::real(BigRational::from_integer(self.coeff_lcm()));
        self.scale(&l).sign_normalized()
    }

    /// Integer-coefficient primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        let cleared = self.clear_denominators();
        if cleared.is_zero() {
            return cleared;
        }
        let g = cleared.coeff_gcd();
        let inv = GaussianRational::real(BigRational::new(BigInt::one(), g));
        cleared.scale(&inv)
    }
}

impl<C: Coeff> Zero for Poly<C> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for Poly<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for (m, c) in o.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<C: Coeff> Mul for Poly<C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl<C: Coeff> Coeff for Poly<C> {
    fn from_i64(n: i64) -> Self {
        Self::int(n)
    }

    fn mul_i(&self) -> Self {
        self.map_coeffs(|c| c.mul_i())
    }

    fn div_int(&self, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(*m, c.div_int(n)?);
        }
        Ok(Self { terms })
    }

    fn add_ref(&self, o: &Self) -> Self {
        let (mut big, small) = if self.terms.len() >= o.terms.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(*m, c.clone());
        }
        big
    }

    fn sub_ref(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    fn mul_ref(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca.mul_ref(cb));
            }
        }
        out
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<C: Coeff> From<C> for Poly<C> {
    fn from(c: C) -> Self {
        Self::constant(c)
    }
}

impl<C: Coeff> Serialize for Poly<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    #[allow(unused_imports)]
    use num_traits::{One, Zero};
    #[allow(unused_imports)]
    use std::ops::Neg;
    use super::*;
    use crate::ParamScalar;

    fn v(x: Var) -> ParamScalar {
        ParamScalar::var(x)
    }

    #[test]
    fn products() {
        let (l, m) = (v(Var::Lambda), v(Var::Mu));
        assert_eq!(l.clone() * l.clone(), l.pow(2));
        let lhs = (l.clone() - m.clone()) * (l.clone() + m.clone());
        assert_eq!(lhs, l.pow(2) - m.pow(2));
        assert!((v(Var::C1) * ParamScalar::zero()).is_zero());
    }

    #[test]
    fn substitution_identities() {
        let (l, m) = (v(Var::Lambda), v(Var::Mu));
        let c0 = v(Var::C0);
        let c1 = v(Var::C1);
        let p = c0.pow(2) - c1.scale_int(2);
        let half = |x: ParamScalar| x.div_int(2).unwrap();
        let b = BTreeMap::from([(Var::C0, l.clone()), (Var::C1, half(l.pow(2) - m.pow(2)))]);
        assert_eq!(p.substitute(&b).unwrap(), m.pow(2));

        let b = BTreeMap::from([(Var::Lambda, ParamScalar::zero()), (Var::Mu, m.clone())]);
        assert!((l.clone() * m.clone()).substitute(&b).unwrap().is_zero());

        let b = BTreeMap::from([(Var::Lambda, ParamScalar::one()), (Var::Mu, ParamScalar::one())]);
        assert!(half(l.pow(2) - m.pow(2)).substitute(&b).unwrap().is_zero());
    }

    #[test]
    fn missing_binding_names_the_variable() {
        let p = v(Var::C2) * v(Var::Lambda);
        let b = BTreeMap::from([(Var::Lambda, ParamScalar::one())]);
        assert_eq!(p.substitute(&b), Err(Error::UnboundIndeterminate("c2".into())));
    }

    #[test]
    fn integer_division() {
        let l3 = v(Var::Lambda).pow(3);
        assert_eq!(l3.div_int(6).unwrap().render(), "1/6*λ^3");
        let p = (v(Var::C0) * v(Var::C2)).scale_int(2) - v(Var::C1).pow(2);
        assert_eq!(p.div_int(2).unwrap().render(), "c0*c2 - 1/2*c1^2");
        assert!(ParamScalar::zero().div_int(5).unwrap().is_zero());
        assert_eq!(l3.div_int(0), Err(Error::DivisionByZero));
    }

    #[test]
    fn exact_division_and_membership() {
        let (l, m) = (v(Var::Lambda), v(Var::Mu));
        let d = l.clone() - m.clone();
        let p = l.pow(3) - m.pow(3);
        let q = p.div_exact(&d).unwrap();
        assert_eq!(q, l.pow(2) + l.clone() * m.clone() + m.pow(2));
        assert!(p.add_ref(&ParamScalar::one()).div_exact(&d).is_none());
    }

    #[test]
    fn normalization() {
        let p = (v(Var::C1).scale_int(-4) + v(Var::C2).scale_int(6)).div_int(5).unwrap();
        assert_eq!(p.clear_denominators().render(), "4*c1 - 6*c2");
        assert_eq!(p.primitive().render(), "2*c1 - 3*c2");
    }

    #[test]
    fn rendering_complex_coefficients() {
        let c = crate::GaussQ::from_ints(1, -2);
        let p = ParamScalar::var(Var::Mu).scale(&c) + ParamScalar::var(Var::Lambda).mul_i().neg();
        assert_eq!(p.render(), "-i*λ + (1-2*i)*μ");
    }
}
