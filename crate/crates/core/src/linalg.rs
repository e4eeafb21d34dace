//! Exact sparse Gauss–Jordan elimination over a coefficient field.

use std::collections::BTreeMap;

use crate::scalar::Field;

/// Sparse row `Σ coeffs[j]·x_j = rhs`.
#[derive(Clone, Debug)]
pub struct Equation<F> {
    pub coeffs: BTreeMap<usize, F>,
    pub rhs: F,
}

#[derive(Clone, Debug)]
pub struct Solution<F> {
    pub rank: usize,
    /// A particular solution with all free unknowns set to zero, or `None`
    /// when the system is inconsistent.
    pub values: Option<Vec<F>>,
}

fn axpy<F: Field>(row: &mut Equation<F>, factor: &F, pivot: &Equation<F>) {
    for (j, c) in &pivot.coeffs {
        let d = factor.mul_ref(c);
        let e = row.coeffs.entry(*j).or_insert_with(F::zero);
        *e = e.sub_ref(&d);
        if e.is_zero() {
            row.coeffs.remove(j);
        }
    }
    row.rhs = row.rhs.sub_ref(&factor.mul_ref(&pivot.rhs));
}

/// Reduces the system to row echelon form and back-substitutes. Exact: the
/// rank and the consistency verdict are certificates, not estimates.
pub fn solve<F: Field>(num_unknowns: usize, equations: impl IntoIterator<Item = Equation<F>>) -> Solution<F> {
    let mut pivots: BTreeMap<usize, Equation<F>> = BTreeMap::new();
    let mut consistent = true;
    for mut row in equations {
        row.coeffs.retain(|_, c| !c.is_zero());
        loop {
            let hit = row.coeffs.keys().find(|j| pivots.contains_key(j)).copied();
            match hit {
                Some(j) => {
                    let factor = row.coeffs[&j].clone();
                    axpy(&mut row, &factor, &pivots[&j]);
                }
                None => break,
            }
        }
        let Some((&col, lead)) = row.coeffs.iter().next() else {
            if !row.rhs.is_zero() {
                consistent = false;
            }
            continue;
        };
        let inv = lead.inv().expect("nonzero pivot");
        for c in row.coeffs.values_mut() {
            *c = c.mul_ref(&inv);
        }
        row.rhs = row.rhs.mul_ref(&inv);
        for other in pivots.values_mut() {
            if let Some(f) = other.coeffs.get(&col).cloned() {
                axpy(other, &f, &row);
            }
        }
        pivots.insert(col, row);
    }
    let rank = pivots.len();
    let values = consistent.then(|| {
        let mut x = vec![F::zero(); num_unknowns];
        for (col, row) in &pivots {
            x[*col] = row.rhs.clone();
        }
        x
    });
    Solution { rank, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Coeff, GaussQ};
    use num_traits::Zero;

    fn eq(cs: &[(usize, i64)], rhs: i64) -> Equation<GaussQ> {
        Equation { coeffs: cs.iter().map(|(j, c)| (*j, GaussQ::from_i64(*c))).collect(), rhs: GaussQ::from_i64(rhs) }
    }

    #[test]
    fn unique_solution() {
        let s = solve(2, [eq(&[(0, 1), (1, 1)], 3), eq(&[(0, 1), (1, -1)], 1)]);
        assert_eq!(s.rank, 2);
        assert_eq!(s.values.unwrap(), vec![GaussQ::from_i64(2), GaussQ::from_i64(1)]);
    }

    #[test]
    fn inconsistent() {
        let s = solve(1, [eq(&[(0, 2)], 2), eq(&[(0, 1)], 3)]);
        assert!(s.values.is_none());
    }

    #[test]
    fn underdetermined_and_complex() {
        let i = GaussQ::i();
        let rows = vec![
            Equation { coeffs: BTreeMap::from([(0, i.clone()), (2, GaussQ::from_i64(1))]), rhs: i.clone() },
            eq(&[(0, 2), (2, -2)], 0),
        ];
        let s = solve(3, rows.clone());
        assert_eq!(s.rank, 2);
        let x = s.values.unwrap();
        for r in &rows {
            let lhs = r.coeffs.iter().fold(GaussQ::zero(), |acc, (j, c)| acc + c.mul_ref(&x[*j]));
            assert_eq!(lhs, r.rhs);
        }
    }
}
