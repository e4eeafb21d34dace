//! Order-by-order solution of the homomorphism identities for homogeneous
//! deformations `f ↦ Σ_{k≥−1} P_k f^{(k+1)} ξ^{−k}` (with `P_{−1} = 1`), and
//! for formal series `Σ tⁿ πₙ` of the same shape.
//!
//! At ξ-grade `−k` the identity reads
//! `Σ_{i+i′=k−1} P_i P_{i′} {f^{(i+1)}ξ^{−i}, g^{(i′+1)}ξ^{−i′}} = P_k (fg′ − f′g)^{(k+1)}`.
//! Both sides are linear combinations of the formal monomials `f^{(a)} g^{(b)}`,
//! antisymmetric in `(a, b)`, so one equation per pair `a < b` suffices. The
//! unknown `P_k` appears linearly through the `i = −1` and `i′ = −1` terms.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Var};
use crate::ParamScalar;

/// Index pair `(a, b)` of the formal monomial `f^{(a)} g^{(b)}`.
pub type Deriv = (u32, u32);

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `{f^{(i+1)} ξ^{−i}, g^{(i′+1)} ξ^{−i′}} = (−i f^{(i+1)}g^{(i′+2)} + i′ f^{(i+2)}g^{(i′+1)}) ξ^{−(i+i′+1)}`.
fn pair_terms(i: i64, ip: i64) -> [(Deriv, i64); 2] {
    [(((i + 1) as u32, (ip + 2) as u32), -i), (((i + 2) as u32, (ip + 1) as u32), ip)]
}

/// `(fg′ − f′g)^{(n)}` by the Leibniz rule.
fn leibniz_bracket(n: u32) -> BTreeMap<Deriv, i64> {
    let mut out = BTreeMap::new();
    for r in 0..=n {
        let c = binomial(n, r);
        *out.entry((r, n - r + 1)).or_insert(0) += c;
        *out.entry((r + 1, n - r)).or_insert(0) -= c;
    }
    out
}

fn upper(rows: BTreeMap<Deriv, i64>) -> BTreeMap<Deriv, i64> {
    rows.into_iter().filter(|((a, b), c)| a < b && *c != 0).collect()
}

/// Integer multiplying the unknown of grade `−k` in each row `a < b`.
pub fn linear_coefficients(k: i64) -> BTreeMap<Deriv, i64> {
    let mut rows = leibniz_bracket((k + 1) as u32);
    for (d, c) in pair_terms(-1, k).into_iter().chain(pair_terms(k, -1)) {
        *rows.entry(d).or_insert(0) -= c;
    }
    upper(rows)
}

/// One row of an identity: `linear · P_k = Σ quadratic[(i,i′)] P_i P_{i′}`,
/// with `i ≤ i′`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRow {
    pub monomial: Deriv,
    pub linear: i64,
    pub quadratic: BTreeMap<(i64, i64), i64>,
}

/// The overdetermined linear system for `P_k` extracted from identity `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySystem {
    pub k: i64,
    pub rows: Vec<IdentityRow>,
}

fn symbol(i: i64) -> String {
    match i {
        0..=2 => format!("c{i}"),
        _ => format!("P{i}"),
    }
}

impl IdentityRow {
    pub fn render(&self, k: i64) -> String {
        let lhs = match self.linear {
            0 => "0".to_string(),
            1 => symbol(k),
            n => format!("{n}*{}", symbol(k)),
        };
        let mut rhs = String::new();
        for (n, ((i, ip), c)) in self.quadratic.iter().enumerate() {
            let mono = if i == ip { format!("{}^2", symbol(*i)) } else { format!("{}*{}", symbol(*i), symbol(*ip)) };
            let mag = c.unsigned_abs();
            let body = if mag == 1 { mono } else { format!("{mag}*{mono}") };
            match (n, *c < 0) {
                (0, false) => rhs.push_str(&body),
                (0, true) => rhs.push_str(&format!("-{body}")),
                (_, false) => rhs.push_str(&format!(" + {body}")),
                (_, true) => rhs.push_str(&format!(" - {body}")),
            }
        }
        if rhs.is_empty() {
            rhs.push('0');
        }
        format!("{lhs} = {rhs}")
    }
}

impl IdentitySystem {
    pub fn render(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.render(self.k)).collect()
    }

    /// Substitutes known lower coefficients, giving `(linear, rhs)` per row.
    fn evaluate(&self, p: &BTreeMap<i64, ParamScalar>) -> Vec<(i64, ParamScalar)> {
        self.rows
            .iter()
            .map(|r| {
                let rhs = r.quadratic.iter().fold(ParamScalar::zero(), |acc, ((i, ip), c)| {
                    acc + p[i].mul_ref(&p[ip]).scale_int(*c)
                });
                (r.linear, rhs)
            })
            .collect()
    }
}

/// Expands identity `k` into its rows. Orders below 3 carry the free
/// parameters `c₀, c₁, c₂` and have no identity of their own.
pub fn expand_identity(k: i64) -> Result<IdentitySystem> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("identity order {k} must be ≥ 3")));
    }
    let linear = linear_coefficients(k);
    let mut quad: BTreeMap<Deriv, BTreeMap<(i64, i64), i64>> = BTreeMap::new();
    for i in 0..k {
        let ip = k - 1 - i;
        for ((a, b), c) in pair_terms(i, ip) {
            if a < b {
                *quad.entry((a, b)).or_default().entry((i.min(ip), i.max(ip))).or_insert(0) += c;
            }
        }
    }
    let keys: std::collections::BTreeSet<Deriv> = linear.keys().chain(quad.keys()).copied().collect();
    let rows = keys
        .into_iter()
        .filter_map(|m| {
            let quadratic: BTreeMap<_, _> =
                quad.remove(&m).unwrap_or_default().into_iter().filter(|(_, c)| *c != 0).collect();
            let lin = linear.get(&m).copied().unwrap_or(0);
            (lin != 0 || !quadratic.is_empty()).then_some(IdentityRow { monomial: m, linear: lin, quadratic })
        })
        .collect();
    Ok(IdentitySystem { k, rows })
}

/// A polynomial in the parameters that must vanish for the solve to go
/// through at `order` (and, for formal solves, ξ-grade `−grade`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Obstruction {
    pub order: i64,
    pub grade: i64,
    pub polynomial: ParamScalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport<S> {
    pub solved: S,
    pub obstructions: Vec<Obstruction>,
}

impl<S> ObstructionReport<S> {
    pub fn is_obstructed(&self) -> bool {
        !self.obstructions.is_empty()
    }

    pub fn at_order(&self, order: i64) -> impl Iterator<Item = &Obstruction> {
        self.obstructions.iter().filter(move |o| o.order == order)
    }
}

/// Determines one unknown from rows `L·u = Q`. The first row with `L ≠ 0`
/// fixes `u`; every other row contributes `L_p Q_r − L_r Q_p` (or `Q_r` when
/// `L_r = 0`) as a consistency condition.
fn determine(rows: &[(i64, ParamScalar)]) -> (Option<ParamScalar>, Vec<ParamScalar>) {
    let pivot = rows.iter().position(|(l, _)| *l != 0);
    let mut conditions = Vec::new();
    let value = pivot.map(|p| {
        let (lp, qp) = &rows[p];
        qp.div_int(*lp).expect("nonzero pivot")
    });
    for (r, (lr, qr)) in rows.iter().enumerate() {
        if Some(r) == pivot {
            continue;
        }
        let cond = match pivot {
            Some(p) => qr.scale_int(rows[p].0) - rows[p].1.scale_int(*lr),
            None => qr.clone(),
        };
        if !cond.is_zero() {
            let cond = cond.clear_denominators();
            if !conditions.contains(&cond) {
                conditions.push(cond);
            }
        }
    }
    (value, conditions)
}

/// `P_k` for `k ≥ 0`, with `P₀, P₁, P₂` the supplied parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomogeneousSolution {
    pub p: BTreeMap<i64, ParamScalar>,
    pub max_order: i64,
}

impl HomogeneousSolution {
    pub fn get(&self, k: i64) -> Option<&ParamScalar> {
        self.p.get(&k)
    }
}

/// Solves identities `3..=max_order` in turn. Inconsistent rows become
/// obstructions and solving proceeds with the pivot determination.
pub fn homogeneous_solve(
    c0: &ParamScalar,
    c1: &ParamScalar,
    c2: &ParamScalar,
    max_order: i64,
) -> Result<ObstructionReport<HomogeneousSolution>> {
    if max_order < 3 {
        return Err(Error::InvalidArgument(format!("order {max_order} must be ≥ 3")));
    }
    let mut p = BTreeMap::from([(0, c0.clone()), (1, c1.clone()), (2, c2.clone())]);
    let mut obstructions = Vec::new();
    for k in 3..=max_order {
        let rows = expand_identity(k)?.evaluate(&p);
        let (value, conds) = determine(&rows);
        let value = value.unwrap_or_else(|| panic!("identity {k} does not involve P{k}"));
        obstructions.extend(conds.into_iter().map(|polynomial| Obstruction { order: k, grade: k, polynomial }));
        p.insert(k, value);
    }
    Ok(ObstructionReport { solved: HomogeneousSolution { p, max_order }, obstructions })
}

impl ObstructionReport<HomogeneousSolution> {
    /// Quotient of each obstruction by the integrability polynomial of the
    /// solved parameters, or `None` when it does not divide.
    pub fn ideal_quotients(&self) -> Vec<Option<ParamScalar>> {
        let p = &self.solved.p;
        let g = integrability_lhs(&p[&0], &p[&1], &p[&2]);
        self.obstructions
            .iter()
            .map(|o| if g.is_zero() { None } else { o.polynomial.div_exact(&g) })
            .collect()
    }
}

/// `6c₀³c₂ − 3(c₀c₁)² − 18c₀c₁c₂ + 8c₁³ + 9c₂²`; its vanishing is necessary
/// and sufficient for an infinitesimal deformation to integrate.
pub fn integrability_lhs(c0: &ParamScalar, c1: &ParamScalar, c2: &ParamScalar) -> ParamScalar {
    c0.pow(3).mul_ref(c2).scale_int(6) - c0.mul_ref(c1).pow(2).scale_int(3) - c0.mul_ref(c1).mul_ref(c2).scale_int(18)
        + c1.pow(3).scale_int(8)
        + c2.pow(2).scale_int(9)
}

/// `(c̃₁, c̃₂) = (−2c₁ + c₀², 3(c₂ − c₀c₁) + c₀³)`, in which the integrability
/// locus is the semicubic parabola `c̃₂² = c̃₁³`.
pub fn tilde_coordinates(c0: &ParamScalar, c1: &ParamScalar, c2: &ParamScalar) -> (ParamScalar, ParamScalar) {
    let t1 = c0.pow(2) - c1.scale_int(2);
    let t2 = (c2.sub_ref(&c0.mul_ref(c1))).scale_int(3) + c0.pow(3);
    (t1, t2)
}

/// The printed second tilde coordinate `3(c₂ − c₀c₁) + 1`.
pub fn printed_tilde_second(c0: &ParamScalar, c1: &ParamScalar, c2: &ParamScalar) -> ParamScalar {
    (c2.sub_ref(&c0.mul_ref(c1))).scale_int(3) + ParamScalar::one()
}

/// `c₂± = λ³/6 − λμ²/2 ± μ³/3`.
pub fn c2_branches(lambda: &ParamScalar, mu: &ParamScalar) -> (ParamScalar, ParamScalar) {
    let base = lambda.pow(3).div_int(6).unwrap() - lambda.mul_ref(&mu.pow(2)).div_int(2).unwrap();
    let cube = mu.pow(3).div_int(3).unwrap();
    (base.add_ref(&cube), base.sub_ref(&cube))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

/// `(λ, (λ²−μ²)/2, c₂±)`: the parametrization of the integrability locus.
pub fn variety_point(lambda: &ParamScalar, mu: &ParamScalar, branch: Branch) -> [ParamScalar; 3] {
    let c1 = (lambda.pow(2) - mu.pow(2)).div_int(2).unwrap();
    let (plus, minus) = c2_branches(lambda, mu);
    let c2 = match branch {
        Branch::Plus => plus,
        Branch::Minus => minus,
    };
    [lambda.clone(), c1, c2]
}

/// `α^k_j`: coefficient of `tᵏ f^{(j+1)} ξ^{−j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSolution {
    pub alpha: BTreeMap<(u32, i64), ParamScalar>,
    pub order: u32,
}

impl FormalSolution {
    pub fn get(&self, k: u32, j: i64) -> ParamScalar {
        self.alpha.get(&(k, j)).cloned().unwrap_or_else(ParamScalar::zero)
    }

    /// Solved entries (`k ≥ 2`) with `j ≥ k` that fail to vanish.
    pub fn vanishing_violations(&self) -> Vec<(u32, i64)> {
        self.alpha
            .iter()
            .filter(|((k, j), v)| *k >= 2 && *j >= *k as i64 && !v.is_zero())
            .map(|(kj, _)| *kj)
            .collect()
    }

    /// The series `Σ_k tᵏ α^k_j` for each grade `−j`.
    pub fn series(&self) -> BTreeMap<i64, ParamScalar> {
        let t = ParamScalar::var(Var::T);
        let mut out: BTreeMap<i64, ParamScalar> = BTreeMap::new();
        for ((k, j), v) in &self.alpha {
            let e = out.entry(*j).or_insert_with(ParamScalar::zero);
            *e = e.add_ref(&v.mul_ref(&t.pow(*k)));
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// Grades where the linear coefficient vanishes identically; their
/// coefficients are not fixed by the identities.
const FREE_GRADES: [i64; 3] = [0, 1, 2];

/// [`formal_solve_with`] with every free coefficient set to zero.
pub fn formal_solve(
    c0: &ParamScalar,
    c1: &ParamScalar,
    c2: &ParamScalar,
    t_order: u32,
) -> Result<ObstructionReport<FormalSolution>> {
    formal_solve_with(c0, c1, c2, t_order, &BTreeMap::new())
}

/// Solves `Σ_{p+q=n} {π_p(f), π_q(g)} = π_n([f,g])` for `n = 2..=t_order`,
/// with `π₀ = fξ` and `π₁ = c₀f′ + c₁f″ξ⁻¹ + c₂f‴ξ⁻²`. The coefficients at
/// grades `−1, −2` are free and taken from `free` (default zero); the
/// grade-0 coefficient is normalized to zero for `n ≥ 2`.
pub fn formal_solve_with(
    c0: &ParamScalar,
    c1: &ParamScalar,
    c2: &ParamScalar,
    t_order: u32,
    free: &BTreeMap<(u32, i64), ParamScalar>,
) -> Result<ObstructionReport<FormalSolution>> {
    if t_order < 2 {
        return Err(Error::InvalidArgument(format!("t-order {t_order} must be ≥ 2")));
    }
    for (k, j) in free.keys() {
        if !FREE_GRADES.contains(j) || *j == 0 || *k < 2 || *k > t_order {
            return Err(Error::InvalidArgument(format!("α[{k},{j}] is not a free coefficient")));
        }
    }
    let mut alpha: BTreeMap<(u32, i64), ParamScalar> = BTreeMap::new();
    for (j, c) in [(0, c0), (1, c1), (2, c2)] {
        if !c.is_zero() {
            alpha.insert((1, j), c.clone());
        }
    }
    let linear: BTreeMap<i64, BTreeMap<Deriv, i64>> =
        (-1..3 * t_order as i64).map(|j| (j, linear_coefficients(j))).collect();
    let mut obstructions = Vec::new();
    for n in 2..=t_order {
        for j in -1..3 * n as i64 {
            let mut rhs: BTreeMap<Deriv, ParamScalar> = BTreeMap::new();
            for p in 1..n {
                let q = n - p;
                for i in -1..=j {
                    let ip = j - 1 - i;
                    let (Some(a), Some(b)) = (alpha.get(&(p, i)), alpha.get(&(q, ip))) else { continue };
                    let ab = a.mul_ref(b);
                    for ((x, y), c) in pair_terms(i, ip) {
                        if x < y {
                            let e = rhs.entry((x, y)).or_insert_with(ParamScalar::zero);
                            *e = e.add_ref(&ab.scale_int(c));
                        }
                    }
                }
            }
            let lin = &linear[&j];
            let keys: std::collections::BTreeSet<Deriv> = lin.keys().chain(rhs.keys()).copied().collect();
            let rows: Vec<(i64, ParamScalar)> = keys
                .iter()
                .map(|m| (lin.get(m).copied().unwrap_or(0), rhs.get(m).cloned().unwrap_or_else(ParamScalar::zero)))
                .collect();
            let (value, conds) = determine(&rows);
            let value = match value {
                Some(v) => v,
                None => free.get(&(n, j)).cloned().unwrap_or_else(ParamScalar::zero),
            };
            obstructions.extend(conds.into_iter().map(|polynomial| Obstruction { order: n as i64, grade: j, polynomial }));
            if !value.is_zero() {
                alpha.insert((n, j), value);
            }
        }
    }
    Ok(ObstructionReport { solved: FormalSolution { alpha, order: t_order }, obstructions })
}
