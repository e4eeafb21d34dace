//! Images of `d/dx, x d/dx, x² d/dx` under the universal deformation, their
//! closure relations, the quadratic Casimir and the induced orbit type.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::deformations::universal_deformation;
use crate::error::{Error, Result};
use crate::laurent::{Basis, CircleFunction, TruncatedLaurent};
use crate::scalar::Coeff;
use crate::{Laurent, ParamScalar, Vect};

#[derive(Clone, Debug)]
pub struct Sl2Triple {
    pub f1: Laurent,
    pub f2: Laurent,
    pub f3: Laurent,
}

/// `F₁ = ξ`, `F₂ = xξ + λ`, `F₃ = x²ξ + 2λx + (λ² − μ²)ξ⁻¹`.
pub fn sl2_images(lambda: &ParamScalar, mu: &ParamScalar) -> Sl2Triple {
    let image = |n| universal_deformation(lambda, mu, &Vect::polynomial_monomial(n), -3).expect("valid floor");
    Sl2Triple { f1: image(0), f2: image(1), f3: image(2) }
}

/// The triple with `F₃ = x²ξ + 2λx + λ(λ−μ)ξ⁻¹` as it appears in print.
pub fn printed_triple(lambda: &ParamScalar, mu: &ParamScalar) -> Sl2Triple {
    let mono = |n, c: ParamScalar| CircleFunction::monomial(n, c).expect("nonnegative index");
    let one = ParamScalar::one();
    let mut t = sl2_images(lambda, mu);
    t.f3 = TruncatedLaurent::exact(
        Basis::Polynomial,
        [
            (1, mono(2, one)),
            (0, mono(1, lambda.scale_int(2))),
            (-1, mono(0, lambda.mul_ref(&lambda.sub_ref(mu)))),
        ],
    )
    .expect("single basis");
    t
}

impl Sl2Triple {
    /// `{F₁,F₂} − F₁`, `{F₁,F₃} − 2F₂`, `{F₂,F₃} − F₃`.
    pub fn closure_defects(&self) -> Result<[Laurent; 3]> {
        Ok([
            self.f1.bracket(&self.f2)?.sub(&self.f1)?,
            self.f1.bracket(&self.f3)?.sub(&self.f2.scale(&ParamScalar::int(2)))?,
            self.f2.bracket(&self.f3)?.sub(&self.f3)?,
        ])
    }

    pub fn closes(&self) -> Result<bool> {
        Ok(self.closure_defects()?.iter().all(TruncatedLaurent::is_zero_reliable))
    }
}

/// `F₁F₃ − F₂²`, which must be a constant.
pub fn casimir(t: &Sl2Triple) -> Result<ParamScalar> {
    let q = t.f1.product(&t.f3)?.sub(&t.f2.product(&t.f2)?)?;
    if !q.is_exact() {
        return Err(Error::InexactOperand);
    }
    let mut out = ParamScalar::zero();
    for (k, g) in q.grades() {
        for (n, c) in g.coeffs() {
            if *k != 0 || *n != 0 {
                return Err(Error::InvalidArgument(format!("F1*F3 - F2^2 has a term at grade {k}, x^{n}")));
            }
            out = c.clone();
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitTag {
    Cone,
    TwoSheetBranch,
    OneSheet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitClass {
    pub tag: OrbitTag,
    pub casimir: ParamScalar,
}

/// Level set of `y₁y₃ − y₂²` containing the image: zero is the nilpotent
/// cone, positive a sheet of the two-sheeted hyperboloid, negative the
/// one-sheeted hyperboloid. Needs numeric real parameters.
pub fn orbit_classify(t: &Sl2Triple) -> Result<OrbitClass> {
    let c = casimir(t)?;
    let value = c.as_constant().ok_or_else(|| Error::SymbolicParameter(c.render()))?;
    if !value.is_real() {
        return Err(Error::InvalidArgument(format!("Casimir {value} is not real")));
    }
    let tag = if value.re.is_zero() {
        OrbitTag::Cone
    } else if value.re.is_positive() {
        OrbitTag::TwoSheetBranch
    } else {
        OrbitTag::OneSheet
    };
    Ok(OrbitClass { tag, casimir: c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_poly;

    fn p(s: &str) -> ParamScalar {
        parse_poly(s).unwrap()
    }

    fn poly(cs: &[(i64, &str)]) -> CircleFunction<ParamScalar> {
        CircleFunction::from_coeffs(Basis::Polynomial, cs.iter().map(|(n, c)| (*n, p(c)))).unwrap()
    }

    #[test]
    fn images_match_closed_form() {
        let t = sl2_images(&p("λ"), &p("μ"));
        assert!(t.f1.agrees_with(&TruncatedLaurent::monomial(poly(&[(0, "1")]), 1)));
        let f2 = TruncatedLaurent::exact(Basis::Polynomial, [(1, poly(&[(1, "1")])), (0, poly(&[(0, "λ")]))]).unwrap();
        assert!(t.f2.agrees_with(&f2));
        let f3 = TruncatedLaurent::exact(
            Basis::Polynomial,
            [(1, poly(&[(2, "1")])), (0, poly(&[(1, "2*λ")])), (-1, poly(&[(0, "λ^2 - μ^2")]))],
        )
        .unwrap();
        assert!(t.f3.agrees_with(&f3));
        let z = ParamScalar::zero();
        let t0 = sl2_images(&z, &z);
        assert!(t0.f3.agrees_with(&TruncatedLaurent::monomial(poly(&[(2, "1")]), 1)));
    }

    #[test]
    fn closure_and_casimir() {
        let t = sl2_images(&p("λ"), &p("μ"));
        assert!(t.closes().unwrap());
        assert_eq!(casimir(&t).unwrap(), p("-μ^2"));
        assert!(casimir(&sl2_images(&p("λ"), &ParamScalar::zero())).unwrap().is_zero());
        let printed = printed_triple(&p("λ"), &p("μ"));
        assert_eq!(casimir(&printed).unwrap(), p("-λ*μ"));
        assert!(printed.closes().unwrap());
    }

    #[test]
    fn casimir_rejects_non_sl2_input() {
        let mut t = sl2_images(&p("λ"), &p("μ"));
        t.f3 = t.f2.clone();
        assert!(casimir(&t).is_err());
    }

    #[test]
    fn orbit_examples() {
        let c = |l: &str, m: &str| orbit_classify(&sl2_images(&p(l), &p(m))).unwrap().tag;
        assert_eq!(c("1", "0"), OrbitTag::Cone);
        assert_eq!(c("2", "0"), OrbitTag::Cone);
        assert_eq!(c("1", "1"), OrbitTag::OneSheet);
        assert_eq!(c("3/2", "-2/3"), c("3/2", "2/3"));
        assert!(matches!(orbit_classify(&sl2_images(&p("λ"), &p("μ"))), Err(Error::SymbolicParameter(_))));
    }
}
