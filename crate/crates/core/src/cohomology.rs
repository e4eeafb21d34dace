//! Cochains of vector fields with values in the Laurent algebra (acting
//! through the standard embedding), the three standard 1-cocycles, and an
//! exact search for trivializing 0-cochains inside a finite window.
//!
//! Nontriviality claims made here are window-bounded: "no witness" means the
//! finite linear system is inconsistent, certified by exact elimination.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::deformations::{standard_embedding, DeformationMap};
use crate::error::{Error, Result};
use crate::laurent::{Basis, CircleFunction, DiffOp, OpLaurent, TruncatedLaurent};
use crate::linalg::{solve, Equation};
use crate::{GaussQ, Laurent, OpTable, ParamScalar, Vect};

/// A linear map from vector fields to Laurent elements, as a table of
/// differential operators per ξ-grade.
pub type OneCochain = OpTable;

/// `C_w(f d/dx) = f^{(w+1)} ξ^{−w}` for `w ∈ {0, 1, 2}`.
pub fn standard_cochain(which: u8, basis: Basis) -> Result<OneCochain> {
    if which > 2 {
        return Err(Error::InvalidArgument(format!("cocycle selector {which} must be 0, 1 or 2")));
    }
    let grade = -(which as i64);
    let op = DiffOp::constant(basis, which as u32 + 1, ParamScalar::one());
    Ok(OpLaurent::exact(basis, BTreeMap::from([(grade, op)])))
}

pub fn standard_cocycle(which: u8, x: &Vect) -> Result<Laurent> {
    standard_cochain(which, x.basis())?.apply(x)
}

/// `{π(X), C(Y)} − {π(Y), C(X)} − C([X,Y])` with `π` the standard embedding.
pub fn cocycle_defect(c: &OneCochain, x: &Vect, y: &Vect) -> Result<Laurent> {
    let a = standard_embedding(x).bracket(&c.apply(y)?)?;
    let b = standard_embedding(y).bracket(&c.apply(x)?)?;
    a.sub(&b)?.sub(&c.apply(&x.bracket(y)?)?)
}

/// The coboundary `X ↦ {π(X), F}`.
pub fn zero_cochain_coboundary(f: &Laurent) -> Result<OneCochain> {
    if !f.is_exact() {
        return Err(Error::InexactOperand);
    }
    let std = DeformationMap::standard(f.basis());
    OpLaurent::bracket_from_right(std.table(), f)
}

/// If every rule of `c` has ξ-grade plus derivative order equal to one
/// common value, returns it.
pub fn homogeneity_degree(c: &OneCochain) -> Option<i64> {
    let mut seen = BTreeSet::new();
    for (k, op) in c.grades() {
        for (d, coeff) in op.terms() {
            if !coeff.is_zero() {
                seen.insert(k + *d as i64);
            }
        }
    }
    match seen.len() {
        1 => seen.into_iter().next(),
        _ => None,
    }
}

/// Finite ansatz for a witness `F = Σ u_{j,p} e^{ipx} ξ^j`, checked against
/// the basis fields `L_m` for `|m| ≤ fourier_window`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowSpec {
    pub fourier_window: i64,
    pub grade_window: (i64, i64),
    /// Bound on the x-frequencies `|p|` of the witness.
    pub mode_cap: i64,
}

impl WindowSpec {
    pub fn new(fourier_window: i64, grade_window: (i64, i64), mode_cap: i64) -> Result<Self> {
        if fourier_window < 0 || mode_cap < 0 || grade_window.0 > grade_window.1 {
            return Err(Error::InvalidArgument(format!(
                "inconsistent window N={fourier_window}, grades={grade_window:?}, modes={mode_cap}"
            )));
        }
        Ok(Self { fourier_window, grade_window, mode_cap })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessSearch {
    pub window: WindowSpec,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    #[serde(serialize_with = "witness_json")]
    pub witness: Option<Laurent>,
}

fn witness_json<S: serde::Serializer>(w: &Option<Laurent>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(f) => f.to_json().serialize(s),
        None => Value::Null.serialize(s),
    }
}

/// Sets up `C(L_m) = {π(L_m), F}` for `|m| ≤ N` over the unknown
/// coefficients of `F` and solves it exactly. A returned witness has been
/// re-checked against every equation.
pub fn coboundary_witness_search(c: &OneCochain, w: &WindowSpec) -> Result<WitnessSearch> {
    if c.basis() != Basis::Fourier {
        return Err(Error::InvalidArgument("witness search needs the Fourier basis".into()));
    }
    let (gmin, gmax) = w.grade_window;
    if let (Some(lo), Some(hi)) = (c.grades().keys().next(), c.grades().keys().next_back()) {
        if *lo < gmin || *hi > gmax {
            return Err(Error::InvalidArgument(format!("cochain grades {lo}..={hi} exceed window {gmin}..={gmax}")));
        }
    }
    let cap = w.mode_cap;
    let width = (2 * cap + 1) as usize;
    let index = |j: i64, p: i64| (j - gmin) as usize * width + (p + cap) as usize;
    let unknowns = (gmax - gmin + 1) as usize * width;

    let mut equations = Vec::new();
    for m in -w.fourier_window..=w.fourier_window {
        let target = c.apply(&Vect::basis_element(m))?;
        // {π(L_m), u e^{ipx} ξ^j} = (p − jm) u e^{i(m+p)x} ξ^j
        let mut rows: BTreeMap<(i64, i64), Equation<GaussQ>> = BTreeMap::new();
        for j in gmin..=gmax {
            for p in -cap..=cap {
                let coeff = p - j * m;
                let row = rows
                    .entry((j, m + p))
                    .or_insert_with(|| Equation { coeffs: BTreeMap::new(), rhs: GaussQ::zero() });
                if coeff != 0 {
                    row.coeffs.insert(index(j, p), GaussQ::from_ints(coeff, 0));
                }
            }
        }
        for (j, g) in target.grades() {
            for (r, v) in g.coeffs() {
                let v = v.as_constant().ok_or_else(|| Error::SymbolicParameter(v.render()))?;
                rows.entry((*j, *r)).or_insert_with(|| Equation { coeffs: BTreeMap::new(), rhs: GaussQ::zero() }).rhs =
                    v;
            }
        }
        equations.extend(rows.into_values().filter(|e| !e.coeffs.is_empty() || !e.rhs.is_zero()));
    }
    let neq = equations.len();
    let sol = solve(unknowns, equations);
    let witness = match sol.values {
        None => None,
        Some(vals) => {
            let mut grades = Vec::new();
            for j in gmin..=gmax {
                let modes = (-cap..=cap).map(|p| (p, ParamScalar::constant(vals[index(j, p)].clone())));
                grades.push((j, CircleFunction::from_coeffs(Basis::Fourier, modes)?));
            }
            let f = TruncatedLaurent::exact(Basis::Fourier, grades)?;
            let cob = zero_cochain_coboundary(&f)?;
            for m in -w.fourier_window..=w.fourier_window {
                let x = Vect::basis_element(m);
                assert!(cob.apply(&x)?.agrees_with(&c.apply(&x)?), "witness fails at m = {m}");
            }
            Some(f)
        }
    };
    Ok(WitnessSearch { window: *w, unknowns, equations: neq, rank: sol.rank, witness })
}

/// Outcome of checking a cocycle for homogeneity. Homogeneous cocycles of
/// degree other than one are coboundaries; the window search exhibits the
/// witness.
#[derive(Clone, Debug, Serialize)]
pub struct HomogeneityCheck {
    pub degree: Option<i64>,
    pub search: Option<WitnessSearch>,
}

pub fn homogeneity_filter(c: &OneCochain, w: &WindowSpec) -> Result<HomogeneityCheck> {
    let degree = homogeneity_degree(c);
    let search = match degree {
        Some(d) if d != 1 => Some(coboundary_witness_search(c, w)?),
        _ => None,
    };
    Ok(HomogeneityCheck { degree, search })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CircleFn;

    fn one() -> ParamScalar {
        ParamScalar::one()
    }

    #[test]
    fn standard_cocycle_values() {
        let d = Vect::polynomial_monomial(0);
        assert!(standard_cocycle(0, &d).unwrap().is_zero_reliable());
        let x2 = Vect::polynomial_monomial(2);
        let expect = TruncatedLaurent::monomial(CircleFn::monomial(0, ParamScalar::int(2)).unwrap(), -1);
        assert!(standard_cocycle(1, &x2).unwrap().agrees_with(&expect));
        let lm = Vect::basis_element(3);
        let expect = TruncatedLaurent::monomial(lm.f.derive_n(3), -2);
        assert!(standard_cocycle(2, &lm).unwrap().agrees_with(&expect));
        assert!(standard_cocycle(3, &lm).is_err());
    }

    #[test]
    fn standard_cocycles_are_closed() {
        for w in 0..3 {
            let c = standard_cochain(w, Basis::Fourier).unwrap();
            for m in -8..=8 {
                for n in -8..=8 {
                    let d = cocycle_defect(&c, &Vect::basis_element(m), &Vect::basis_element(n)).unwrap();
                    assert!(d.is_zero_reliable(), "C{w} at ({m},{n})");
                }
            }
        }
    }

    #[test]
    fn coboundary_examples() {
        let c = zero_cochain_coboundary(&TruncatedLaurent::monomial(CircleFn::constant(Basis::Fourier, one()), 0))
            .unwrap();
        assert!(c.apply(&Vect::basis_element(2)).unwrap().is_zero_reliable());
        let xi = TruncatedLaurent::monomial(CircleFn::constant(Basis::Fourier, one()), 1);
        let c = zero_cochain_coboundary(&xi).unwrap();
        let x = Vect::basis_element(2);
        let expect = TruncatedLaurent::monomial(x.f.derive().neg(), 1);
        assert!(c.apply(&x).unwrap().agrees_with(&expect));
        assert_eq!(homogeneity_degree(&c), Some(2));
        assert_eq!(zero_cochain_coboundary(&xi.truncate(0).unwrap()).unwrap_err(), Error::InexactOperand);
    }

    #[test]
    fn standard_classes_have_no_witness() {
        let w = WindowSpec::new(4, (-3, 2), 4).unwrap();
        for which in 0..3 {
            let c = standard_cochain(which, Basis::Fourier).unwrap();
            let r = coboundary_witness_search(&c, &w).unwrap();
            assert!(r.witness.is_none(), "C{which}");
        }
    }

    #[test]
    fn coboundaries_have_witnesses() {
        let f = TruncatedLaurent::exact(
            Basis::Fourier,
            [
                (1, CircleFn::mode(-1, ParamScalar::int(3))),
                (-1, CircleFn::mode(2, ParamScalar::constant(GaussQ::from_ints(1, -2)))),
            ],
        )
        .unwrap();
        let c = zero_cochain_coboundary(&f).unwrap();
        let w = WindowSpec::new(3, (-2, 2), 3).unwrap();
        assert!(coboundary_witness_search(&c, &w).unwrap().witness.is_some());
        let shifted = standard_cochain(1, Basis::Fourier).unwrap().add(&c).unwrap();
        assert!(coboundary_witness_search(&shifted, &w).unwrap().witness.is_none());
    }

    #[test]
    fn homogeneity_filter_trivializes_other_degrees() {
        let xi = TruncatedLaurent::monomial(CircleFn::constant(Basis::Fourier, one()), 1);
        let c = zero_cochain_coboundary(&xi).unwrap();
        let w = WindowSpec::new(3, (0, 2), 1).unwrap();
        let r = homogeneity_filter(&c, &w).unwrap();
        assert!(r.search.unwrap().witness.is_some());
        let r = homogeneity_filter(&standard_cochain(2, Basis::Fourier).unwrap(), &WindowSpec::new(3, (-2, 0), 1).unwrap())
            .unwrap();
        assert_eq!(r.degree, Some(1));
        assert!(r.search.is_none());
    }

    #[test]
    fn window_is_validated() {
        assert!(WindowSpec::new(3, (1, 0), 1).is_err());
        let c = standard_cochain(2, Basis::Fourier).unwrap();
        assert!(coboundary_witness_search(&c, &WindowSpec::new(2, (-1, 0), 1).unwrap()).is_err());
    }
}
