//! The Gelfand–Fuks 2-cocycle on vector fields and the Kirillov 2-cocycles
//! `∫_γ F dG` of the torus, restricted along the universal deformation.
//!
//! Circle integrals are mean-normalized. A Kirillov cocycle depends on the
//! position of `γ` inside its homology class; averaging over the transverse
//! coordinate as well keeps the cohomology class and reduces the integral to
//! the coefficient of `x`-mode 0 at ξ-grade 0 (writing `ξ = e^{iy}`).

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::deformations::DeformationMap;
use crate::error::{Error, Result};
use crate::laurent::Basis;
use crate::scalar::Coeff;
use crate::{GaussQ, Laurent, ParamScalar, Vect};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cycle {
    /// `γ = {ξ = const}`, so `dG = G_x dx`.
    XiCycle,
    /// `γ = {x = const}`, so `dG = ∂_y G dy = iξG_ξ dy`.
    XCycle,
    GelfandFuks,
}

/// `w(f d/dx, g d/dx) = ∫ f′g″`.
pub fn gelfand_fuks(x: &Vect, y: &Vect) -> Result<ParamScalar> {
    if x.basis() != Basis::Fourier || y.basis() != Basis::Fourier {
        return Err(Error::InvalidArgument("the Gelfand-Fuks cocycle needs the Fourier basis".into()));
    }
    Ok(x.f.derive().mul(&y.f.derive_n(2))?.constant_term())
}

/// Bi-constant mode of `F·dG` along the chosen cycle. The grade-0 part of
/// the product involves grades `−top(G)..=top(F)` of `F` and
/// `−top(F)..=top(G)` of `G`; both must be reliable there.
pub fn kirillov_averaged(f: &Laurent, g: &Laurent, cycle: Cycle) -> Result<ParamScalar> {
    for (a, b) in [(f, g), (g, f)] {
        if !a.is_exact() && a.floor() > -b.top() {
            return Err(Error::InsufficientDepth { required: -b.top(), actual: a.floor() });
        }
    }
    let dg = match cycle {
        Cycle::XiCycle => g.derive_x(),
        Cycle::XCycle => g.euler_xi().scale(&ParamScalar::constant(GaussQ::i())),
        Cycle::GelfandFuks => return Err(Error::InvalidArgument("not a Kirillov cycle".into())),
    };
    let prod = f.product(&dg)?;
    Ok(match prod.grades().get(&0) {
        Some(c) => c.constant_term(),
        None => ParamScalar::zero(),
    })
}

/// `value(m) = αm³ + βm` through `m = 1, 2`, checked at `m = 3`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicFit {
    pub alpha: ParamScalar,
    pub beta: ParamScalar,
    pub values: BTreeMap<i64, ParamScalar>,
    pub extrapolates: bool,
}

impl CubicFit {
    fn from_values(values: BTreeMap<i64, ParamScalar>) -> Self {
        let (v1, v2, v3) = (&values[&1], &values[&2], &values[&3]);
        let alpha = v2.sub_ref(&v1.scale_int(2)).div_int(6).expect("nonzero");
        let beta = v1.sub_ref(&alpha);
        let extrapolates = alpha.scale_int(27).add_ref(&beta.scale_int(3)) == *v3;
        Self { alpha, beta, values, extrapolates }
    }
}

/// Cubic fit of `w(L_m, L_{−m})`.
pub fn gelfand_fuks_fit() -> Result<CubicFit> {
    let mut values = BTreeMap::new();
    for m in 1..=3 {
        values.insert(m, gelfand_fuks(&Vect::basis_element(m), &Vect::basis_element(-m))?);
    }
    Ok(CubicFit::from_values(values))
}

/// Cubic fit of the Kirillov cocycle on `(π(L_m), π(L_{−m}))` with `π` the
/// universal deformation expanded to ξ-grade `−depth`.
pub fn gf_class_fit(lambda: &ParamScalar, mu: &ParamScalar, cycle: Cycle, depth: i64) -> Result<CubicFit> {
    let pi = DeformationMap::universal(Basis::Fourier, lambda.clone(), mu.clone(), -depth)?;
    let mut values = BTreeMap::new();
    for m in 1..=3 {
        let f = pi.evaluate(&Vect::basis_element(m))?;
        let g = pi.evaluate(&Vect::basis_element(-m))?;
        values.insert(m, kirillov_averaged(&f, &g, cycle)?);
    }
    Ok(CubicFit::from_values(values))
}

/// `α(cycle) / α(w)`: the multiple of the Gelfand–Fuks class carried by the
/// restricted cocycle.
pub fn class_coefficient(fit: &CubicFit, gf: &CubicFit) -> Result<ParamScalar> {
    let a = gf.alpha.as_constant().ok_or_else(|| Error::SymbolicParameter(gf.alpha.render()))?;
    fit.alpha.div_scalar(&a).ok_or(Error::DivisionByZero)
}

/// `α(x_cycle) / α(xi_cycle)` as an exact polynomial, when it is one.
pub fn cycle_ratio(x_fit: &CubicFit, xi_fit: &CubicFit) -> Option<ParamScalar> {
    if xi_fit.alpha.is_zero() {
        return None;
    }
    x_fit.alpha.div_exact(&xi_fit.alpha)
}
