//! Embeddings of vector fields into the Laurent Poisson algebra: the
//! standard one, its infinitesimal deformations, the two-parameter universal
//! family, the one-parameter formal family, user tables, and their gauge
//! transforms by interior automorphisms.

use std::collections::BTreeMap;

use num_traits::One;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::laurent::{Basis, CircleFunction, DiffOp, GradeBounds, OpLaurent, TruncatedLaurent};
use crate::scalar::{div_factorial, parse_poly, Coeff, Var};
use crate::{Laurent, OpTable, ParamScalar, Vect};

/// Coefficient of `f^{(k+1)} ξ^{−k}` in the universal deformation:
/// `μ(λ−μ)ᵏ/k! + (λ−μ)^{k+1}/(k+1)!`. At `k = 0` this is `λ`.
pub fn universal_coefficient(lambda: &ParamScalar, mu: &ParamScalar, k: u32) -> ParamScalar {
    let d = lambda.sub_ref(mu);
    let a = div_factorial(&mu.mul_ref(&d.pow(k)), k);
    let b = div_factorial(&d.pow(k + 1), k + 1);
    a + b
}

/// Coefficient of `tᵏ f^{(k)} ξ^{1−k}` in the formal family, obtained from
/// the universal coefficient under `λ ↦ t, μ ↦ λt` and read off at `tᵏ`:
/// `(1 + (k−1)λ)(1−λ)^{k−1}/k!`.
pub fn formal_coefficient(lambda: &ParamScalar, k: u32) -> ParamScalar {
    if k == 0 {
        return ParamScalar::one();
    }
    let one = ParamScalar::one();
    let lead = one.add_ref(&lambda.scale_int(k as i64 - 1));
    div_factorial(&lead.mul_ref(&one.sub_ref(lambda).pow(k - 1)), k)
}

/// The sign variant `(1 − (k−1)λ)(1−λ)^{k−1}/k!` found in print, kept only
/// so reports can show the discrepancy.
pub fn printed_formal_coefficient(lambda: &ParamScalar, k: u32) -> ParamScalar {
    if k == 0 {
        return ParamScalar::one();
    }
    let one = ParamScalar::one();
    let lead = one.sub_ref(&lambda.scale_int(k as i64 - 1));
    div_factorial(&lead.mul_ref(&one.sub_ref(lambda).pow(k - 1)), k)
}

/// `f d/dx ↦ f ξ`.
pub fn standard_embedding(x: &Vect) -> Laurent {
    if x.is_zero() {
        return TruncatedLaurent::zero(x.basis());
    }
    TruncatedLaurent::monomial(x.f.clone(), 1)
}

/// `f ↦ fξ + c₀f′ + c₁f″ξ⁻¹ + c₂f‴ξ⁻²`.
pub fn infinitesimal_embedding(c0: &ParamScalar, c1: &ParamScalar, c2: &ParamScalar, x: &Vect) -> Laurent {
    let d = x.f.derivatives(3);
    let grades = [(1, d[0].clone()), (0, d[1].scale(c0)), (-1, d[2].scale(c1)), (-2, d[3].scale(c2))];
    TruncatedLaurent::exact(x.basis(), grades).expect("single basis")
}

/// `f(x + (λ−μ)/ξ)ξ + μf′(x + (λ−μ)/ξ)` expanded down to ξ-grade `floor`.
///
/// The result is exact when the dropped grades vanish identically: when
/// `λ = μ` as polynomials, or when `f` is a polynomial whose derivatives die
/// before the floor.
pub fn universal_deformation(lambda: &ParamScalar, mu: &ParamScalar, x: &Vect, floor: i64) -> Result<Laurent> {
    if floor > 1 {
        return Err(Error::InvalidArgument(format!("floor {floor} must be ≤ 1")));
    }
    let depth = (-floor).max(0) as u32;
    let ders = x.f.derivatives(depth + 1);
    let mut grades = vec![(1, ders[0].clone())];
    for k in 0..=depth {
        grades.push((-(k as i64), ders[k as usize + 1].scale(&universal_coefficient(lambda, mu, k))));
    }
    let shift_vanishes = lambda == mu;
    let derivatives_vanish = x.basis() == Basis::Polynomial && ders[depth as usize + 1].derive().is_zero();
    let out = TruncatedLaurent::with_bounds(x.basis(), grades, GradeBounds { top: 1, floor, exact: false })?;
    if shift_vanishes || derivatives_vanish {
        Ok(out.assume_exact())
    } else {
        Ok(out)
    }
}

/// `Σ_{k ≤ order} tᵏ·coeff_k·f^{(k)} ξ^{1−k}` for the formal family, built by
/// evaluating the universal coefficients at `λ ↦ t, μ ↦ λt`.
pub fn formal_deformation(lambda: &ParamScalar, t_order: u32, x: &Vect) -> Laurent {
    let t = ParamScalar::var(Var::T);
    let mu = lambda.mul_ref(&t);
    let ders = x.f.derivatives(t_order);
    let mut grades = vec![(1, ders[0].clone())];
    for k in 1..=t_order {
        let c = universal_coefficient(&t, &mu, k - 1);
        grades.push((1 - k as i64, ders[k as usize].scale(&c)));
    }
    TruncatedLaurent::exact(x.basis(), grades).expect("single basis")
}

/// What a [`DeformationMap`] was built from.
#[derive(Clone, Debug, PartialEq)]
pub enum MapKind {
    Standard,
    Infinitesimal { c0: ParamScalar, c1: ParamScalar, c2: ParamScalar },
    Universal { lambda: ParamScalar, mu: ParamScalar },
    Formal { lambda: ParamScalar, order: u32 },
    Table,
    Gauged { base: Box<MapKind>, parameter: Var, order: u32 },
}

impl MapKind {
    pub fn descriptor(&self) -> Value {
        match self {
            MapKind::Standard => json!({"kind": "standard"}),
            MapKind::Infinitesimal { c0, c1, c2 } => json!({"kind": "infinitesimal", "c0": c0, "c1": c1, "c2": c2}),
            MapKind::Universal { lambda, mu } => json!({"kind": "universal", "lambda": lambda, "mu": mu}),
            MapKind::Formal { lambda, order } => json!({"kind": "formal", "lambda": lambda, "order": order}),
            MapKind::Table => json!({"kind": "table"}),
            MapKind::Gauged { base, parameter, order } => {
                json!({"kind": "gauged", "base": base.descriptor(), "parameter": parameter.name(), "order": order})
            }
        }
    }
}

/// A linear map from vector fields to Laurent elements, stored as a graded
/// table of differential operators. An optional truncation drops every
/// parameter monomial above a given degree in one indeterminate (formal maps
/// are series in `t`).
#[derive(Clone, Debug)]
pub struct DeformationMap {
    kind: MapKind,
    table: OpTable,
    truncation: Option<(Var, u32)>,
}

fn homogeneous_table(basis: Basis, coeffs: &BTreeMap<i64, ParamScalar>, bounds: GradeBounds) -> OpTable {
    let grades = coeffs
        .iter()
        .map(|(k, c)| (*k, DiffOp::constant(basis, (1 - k) as u32, c.clone())))
        .collect();
    OpLaurent::new(basis, grades, bounds)
}

impl DeformationMap {
    pub fn standard(basis: Basis) -> Self {
        let coeffs = BTreeMap::from([(1, ParamScalar::one())]);
        let table = homogeneous_table(basis, &coeffs, GradeBounds { top: 1, floor: 1, exact: true });
        Self { kind: MapKind::Standard, table, truncation: None }
    }

    pub fn infinitesimal(basis: Basis, c0: ParamScalar, c1: ParamScalar, c2: ParamScalar) -> Self {
        let coeffs =
            BTreeMap::from([(1, ParamScalar::one()), (0, c0.clone()), (-1, c1.clone()), (-2, c2.clone())]);
        let table = homogeneous_table(basis, &coeffs, GradeBounds { top: 1, floor: -2, exact: true });
        Self { kind: MapKind::Infinitesimal { c0, c1, c2 }, table, truncation: None }
    }

    /// The universal family evaluated down to ξ-grade `floor`.
    pub fn universal(basis: Basis, lambda: ParamScalar, mu: ParamScalar, floor: i64) -> Result<Self> {
        if floor > 1 {
            return Err(Error::InvalidArgument(format!("floor {floor} must be ≤ 1")));
        }
        let mut coeffs = BTreeMap::from([(1, ParamScalar::one())]);
        for k in 0..=(-floor).max(0) as u32 {
            coeffs.insert(-(k as i64), universal_coefficient(&lambda, &mu, k));
        }
        let exact = lambda == mu;
        let table = homogeneous_table(basis, &coeffs, GradeBounds { top: 1, floor, exact });
        Ok(Self { kind: MapKind::Universal { lambda, mu }, table, truncation: None })
    }

    /// The formal family as a series in `t` up to `order`.
    pub fn formal(basis: Basis, lambda: ParamScalar, order: u32) -> Self {
        let t = ParamScalar::var(Var::T);
        let mu = lambda.mul_ref(&t);
        let mut coeffs = BTreeMap::from([(1, ParamScalar::one())]);
        for k in 1..=order {
            coeffs.insert(1 - k as i64, universal_coefficient(&t, &mu, k - 1));
        }
        let floor = 1 - order as i64;
        let table = homogeneous_table(basis, &coeffs, GradeBounds { top: 1, floor, exact: true });
        Self { kind: MapKind::Formal { lambda, order }, table, truncation: Some((Var::T, order)) }
    }

    /// `f ↦ fξ + Σ_{k≥0} P_k f^{(k+1)} ξ^{−k}` from a coefficient list
    /// indexed by `k`.
    pub fn homogeneous(basis: Basis, p: &BTreeMap<i64, ParamScalar>, floor: i64, exact: bool) -> Self {
        let mut coeffs = BTreeMap::from([(1, ParamScalar::one())]);
        for (k, c) in p {
            coeffs.insert(-k, c.clone());
        }
        let table = homogeneous_table(basis, &coeffs, GradeBounds { top: 1, floor, exact });
        Self { kind: MapKind::Table, table, truncation: None }
    }

    pub fn from_table(table: OpTable, truncation: Option<(Var, u32)>) -> Self {
        Self { kind: MapKind::Table, table, truncation }
    }

    /// Reads `{"basis", "floor", "exact", "grades": {k: {order: coeff}}}`.
    pub fn from_table_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("table: {m}"));
        let basis = match v.get("basis").and_then(Value::as_str).unwrap_or("fourier") {
            "fourier" => Basis::Fourier,
            "polynomial" => Basis::Polynomial,
            other => return Err(bad(&format!("unknown basis `{other}`"))),
        };
        let grades_v = v.get("grades").and_then(Value::as_object).ok_or_else(|| bad("missing `grades`"))?;
        let mut grades = BTreeMap::new();
        for (k, ops) in grades_v {
            let k: i64 = k.parse().map_err(|_| bad(&format!("grade `{k}`")))?;
            let ops = ops.as_object().ok_or_else(|| bad("grade entries must be objects"))?;
            let mut op = DiffOp::zero(basis);
            for (d, c) in ops {
                let d: u32 = d.parse().map_err(|_| bad(&format!("derivative order `{d}`")))?;
                let c = parse_poly(c.as_str().ok_or_else(|| bad("coefficients must be strings"))?)?;
                op = op.plus(d, &CircleFunction::constant(basis, c));
            }
            grades.insert(k, op);
        }
        let exact = v.get("exact").and_then(Value::as_bool).unwrap_or(true);
        let top = grades.keys().next_back().copied().unwrap_or(0);
        let lowest = grades.keys().next().copied().unwrap_or(top);
        let floor = match v.get("floor") {
            Some(f) => f.as_i64().ok_or_else(|| bad("`floor` must be an integer"))?,
            None => lowest,
        };
        if floor > lowest {
            return Err(bad("stored grade below `floor`"));
        }
        let table = OpLaurent::new(basis, grades, GradeBounds { top, floor, exact });
        Ok(Self::from_table(table, None))
    }

    /// Inverse of [`DeformationMap::from_table_json`] for constant-coefficient
    /// tables.
    pub fn to_table_json(&self) -> Option<Value> {
        let mut grades = Map::new();
        for (k, op) in self.table.grades() {
            let mut m = Map::new();
            for (d, c) in op.constant_coefficients()? {
                m.insert(d.to_string(), Value::String(c.render()));
            }
            grades.insert(k.to_string(), Value::Object(m));
        }
        let b = self.table.bounds();
        Some(json!({"basis": self.table.basis().to_string(), "floor": b.floor, "exact": b.exact, "grades": grades}))
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn table(&self) -> &OpTable {
        &self.table
    }

    pub fn truncation(&self) -> Option<(Var, u32)> {
        self.truncation
    }

    pub fn basis(&self) -> Basis {
        self.table.basis()
    }

    pub fn floor(&self) -> i64 {
        self.table.bounds().floor
    }

    /// Every grade `k` carries only `∂^{1−k}` with a constant coefficient.
    pub fn is_homogeneous(&self) -> bool {
        self.table.grades().iter().all(|(k, op)| match op.constant_coefficients() {
            Some(cs) => cs.keys().all(|d| *d as i64 == 1 - k),
            None => false,
        })
    }

    fn truncate_params(&self, x: &Laurent) -> Laurent {
        match self.truncation {
            Some((v, n)) => x.map_coeffs(|c| c.truncate_degree(v, n)),
            None => x.clone(),
        }
    }

    pub fn evaluate(&self, x: &Vect) -> Result<Laurent> {
        Ok(self.truncate_params(&self.table.apply(x)?))
    }
}

/// `{π(X), π(Y)} − π([X,Y])` on grades `≥ check_floor`. A reliable zero
/// certifies the homomorphism property to that depth.
pub fn homomorphism_defect(pi: &DeformationMap, x: &Vect, y: &Vect, check_floor: i64) -> Result<Laurent> {
    let bracket = pi.evaluate(x)?.bracket(&pi.evaluate(y)?)?;
    let defect = pi.truncate_params(&bracket.sub(&pi.evaluate(&x.bracket(y)?)?)?);
    if let Some(fl) = defect.reliable_floor() {
        if fl > check_floor {
            return Err(Error::InsufficientDepth { required: check_floor, actual: fl });
        }
    }
    defect.truncate(check_floor)
}

/// `exp(Σ wᵢ ad_{Fᵢ})` with each weight a multiple of a positive power of a
/// single parameter, truncated at `order` in that parameter.
#[derive(Clone, Debug)]
pub struct GaugeSeries {
    pub parameter: Var,
    pub generators: Vec<(ParamScalar, Laurent)>,
    pub order: u32,
}

impl GaugeSeries {
    fn exponent(&self, basis: Basis) -> Result<Laurent> {
        let mut w = TruncatedLaurent::zero(basis);
        for (weight, f) in &self.generators {
            if !f.is_exact() {
                return Err(Error::InexactOperand);
            }
            if weight.terms().any(|(m, _)| m.exponent(self.parameter) == 0) {
                return Err(Error::InvalidArgument(format!(
                    "gauge weight `{weight}` must vanish at {} = 0",
                    self.parameter
                )));
            }
            w = w.add(&f.scale(weight))?;
        }
        Ok(w)
    }
}

/// Returns the table of `X ↦ I(π(X))` with `I = exp(ad_W)` and
/// `ad_W(G) = {W, G}`.
pub fn apply_gauge(pi: &DeformationMap, gauge: &GaugeSeries) -> Result<DeformationMap> {
    if gauge.order == 0 {
        return Err(Error::InvalidArgument("gauge order must be ≥ 1".into()));
    }
    if gauge.generators.is_empty() {
        return Ok(pi.clone());
    }
    let order = match pi.truncation {
        Some((v, n)) if v == gauge.parameter => n.min(gauge.order),
        Some((v, _)) => {
            return Err(Error::InvalidArgument(format!(
                "map is truncated in {v}, gauge in {}",
                gauge.parameter
            )))
        }
        None => gauge.order,
    };
    let trunc = |t: &OpTable| t.map_coeffs(|c| c.truncate_degree(gauge.parameter, order));
    let w = gauge.exponent(pi.basis())?;
    let mut total = trunc(&pi.table);
    let mut term = total.clone();
    for n in 1..=order {
        let next = OpLaurent::bracket_from_left(&w, &term)?;
        term = trunc(&next.map_coeffs(|c| c.div_int(n as i64).expect("nonzero")));
        total = total.add(&term)?;
    }
    Ok(DeformationMap {
        kind: MapKind::Gauged { base: Box::new(pi.kind.clone()), parameter: gauge.parameter, order },
        table: total,
        truncation: Some((gauge.parameter, order)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{CircleFn, GaussQ};
    use num_traits::Zero;

    fn v(x: Var) -> ParamScalar {
        ParamScalar::var(x)
    }

    fn poly_field(cs: &[i64]) -> Vect {
        Vect::new(
            CircleFn::from_coeffs(Basis::Polynomial, cs.iter().enumerate().map(|(n, c)| (n as i64, ParamScalar::int(*c))))
                .unwrap(),
        )
    }

    #[test]
    fn standard_embedding_examples() {
        let d = poly_field(&[1]);
        assert!(standard_embedding(&d).agrees_with(&TruncatedLaurent::monomial(d.f.clone(), 1)));
        assert!(standard_embedding(&poly_field(&[])).is_zero_reliable());
    }

    #[test]
    fn infinitesimal_examples() {
        let x2 = poly_field(&[0, 0, 1]);
        let z = ParamScalar::zero;
        assert!(infinitesimal_embedding(&z(), &z(), &z(), &x2).agrees_with(&standard_embedding(&x2)));
        let got = infinitesimal_embedding(&v(Var::C0), &v(Var::C1), &v(Var::C2), &x2);
        let expect = TruncatedLaurent::exact(
            Basis::Polynomial,
            [
                (1, x2.f.clone()),
                (0, CircleFn::monomial(1, v(Var::C0).scale_int(2)).unwrap()),
                (-1, CircleFn::monomial(0, v(Var::C1).scale_int(2)).unwrap()),
            ],
        )
        .unwrap();
        assert!(got.agrees_with(&expect));

        let e = Vect::new(CircleFn::mode(1, ParamScalar::one()));
        let got = infinitesimal_embedding(&v(Var::C0), &v(Var::C1), &v(Var::C2), &e);
        let i = ParamScalar::constant(GaussQ::i());
        let expect = TruncatedLaurent::exact(
            Basis::Fourier,
            [
                (1, CircleFn::mode(1, ParamScalar::one())),
                (0, CircleFn::mode(1, i.mul_ref(&v(Var::C0)))),
                (-1, CircleFn::mode(1, -v(Var::C1))),
                (-2, CircleFn::mode(1, -i.mul_ref(&v(Var::C2)))),
            ],
        )
        .unwrap();
        assert!(got.agrees_with(&expect));
    }

    #[test]
    fn universal_coefficients() {
        let (l, m) = (v(Var::Lambda), v(Var::Mu));
        assert_eq!(universal_coefficient(&l, &m, 0), l);
        assert_eq!(universal_coefficient(&l, &m, 1).render(), "1/2*λ^2 - 1/2*μ^2");
        for k in 1..6 {
            assert!(universal_coefficient(&m, &m, k).is_zero());
            let pure = div_factorial(&l.pow(k + 1), k + 1);
            assert_eq!(universal_coefficient(&l, &ParamScalar::zero(), k), pure);
        }
    }

    #[test]
    fn universal_deformation_exactness() {
        let m = v(Var::Mu);
        let x = Vect::basis_element(2);
        let same = universal_deformation(&m, &m, &x, -6).unwrap();
        assert!(same.is_exact());
        let expect = standard_embedding(&x).add(&TruncatedLaurent::monomial(x.f.derive().scale(&m), 0)).unwrap();
        assert!(same.agrees_with(&expect));
        let generic = universal_deformation(&v(Var::Lambda), &m, &x, -6).unwrap();
        assert_eq!(generic.reliable_floor(), Some(-6));
        assert!(universal_deformation(&m, &m, &x, 2).is_err());
    }

    #[test]
    fn formal_coefficient_examples() {
        let l = v(Var::Lambda);
        let one = ParamScalar::one();
        assert_eq!(formal_coefficient(&l, 1), one);
        assert_eq!(formal_coefficient(&l, 2), (one.clone() - l.pow(2)).div_int(2).unwrap());
        assert_ne!(formal_coefficient(&l, 2), printed_formal_coefficient(&l, 2));
        for k in 0..8 {
            assert_eq!(formal_coefficient(&ParamScalar::zero(), k), div_factorial(&one, k));
        }
    }

    #[test]
    fn table_json_roundtrip() {
        let map = DeformationMap::universal(Basis::Fourier, v(Var::Lambda), v(Var::Mu), -4).unwrap();
        let j = map.to_table_json().unwrap();
        let back = DeformationMap::from_table_json(&j).unwrap();
        for n in -2..=2 {
            let x = Vect::basis_element(n);
            assert!(map.evaluate(&x).unwrap().agrees_with(&back.evaluate(&x).unwrap()));
        }
        assert!(back.is_homogeneous());
    }

    #[test]
    fn defect_depth_is_enforced() {
        let map = DeformationMap::universal(Basis::Fourier, v(Var::Lambda), v(Var::Mu), -3).unwrap();
        let (x, y) = (Vect::basis_element(1), Vect::basis_element(-2));
        assert_eq!(
            homomorphism_defect(&map, &x, &y, -5).unwrap_err(),
            Error::InsufficientDepth { required: -5, actual: -3 }
        );
        assert!(homomorphism_defect(&map, &x, &y, -3).unwrap().is_zero_reliable());
    }

    #[test]
    fn empty_gauge_is_identity() {
        let map = DeformationMap::standard(Basis::Fourier);
        let g = GaugeSeries { parameter: Var::T, generators: vec![], order: 3 };
        let out = apply_gauge(&map, &g).unwrap();
        let x = Vect::basis_element(3);
        assert!(out.evaluate(&x).unwrap().agrees_with(&map.evaluate(&x).unwrap()));
    }

    #[test]
    fn gauge_rejects_bad_weights() {
        let map = DeformationMap::standard(Basis::Fourier);
        let f = TruncatedLaurent::monomial(CircleFn::mode(1, ParamScalar::one()), 0);
        let g = GaugeSeries { parameter: Var::T, generators: vec![(ParamScalar::one(), f.clone())], order: 2 };
        assert!(apply_gauge(&map, &g).is_err());
        let g = GaugeSeries { parameter: Var::T, generators: vec![(v(Var::T), f.truncate(-1).unwrap())], order: 2 };
        assert_eq!(apply_gauge(&map, &g).unwrap_err(), Error::InexactOperand);
    }
}
