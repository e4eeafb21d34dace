#![allow(dead_code)]

use circle_deform::laurent::TruncatedLaurent;
use circle_deform::{Basis, CircleFn, Coeff, GaussQ, Laurent, ParamScalar, Var, Vect};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded generator of small random engine values.
pub struct Gen {
    rng: ChaCha8Rng,
    /// Allow `λ` in coefficients.
    pub symbolic: bool,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), symbolic: false }
    }

    pub fn symbolic(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), symbolic: true }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn scalar(&mut self) -> ParamScalar {
        let c = ParamScalar::constant(GaussQ::from_ints(self.int(-3, 3), self.int(-2, 2)));
        if self.symbolic && self.rng.gen_bool(0.5) {
            c + ParamScalar::var(Var::Lambda).scale_int(self.int(-2, 2))
        } else {
            c
        }
    }

    pub fn nonzero_scalar(&mut self) -> ParamScalar {
        loop {
            let c = self.scalar();
            if !num_traits::Zero::is_zero(&c) {
                return c;
            }
        }
    }

    pub fn circle(&mut self, basis: Basis) -> CircleFn {
        let terms = self.int(1, 3);
        let modes: Vec<(i64, ParamScalar)> = (0..terms)
            .map(|_| {
                let n = match basis {
                    Basis::Fourier => self.int(-3, 3),
                    Basis::Polynomial => self.int(0, 3),
                };
                (n, self.scalar())
            })
            .collect();
        CircleFn::from_coeffs(basis, modes).unwrap()
    }

    pub fn vect(&mut self, basis: Basis) -> Vect {
        Vect::new(self.circle(basis))
    }

    /// Exact element with grades in `-2..=2`.
    pub fn laurent(&mut self, basis: Basis) -> Laurent {
        let n = self.int(1, 3);
        let grades: Vec<(i64, CircleFn)> = (0..n).map(|_| (self.int(-2, 2), self.circle(basis))).collect();
        let mut out = TruncatedLaurent::zero(basis);
        for (k, f) in grades {
            out = out.add(&TruncatedLaurent::monomial(f, k)).unwrap();
        }
        out
    }

    pub fn basis(&mut self) -> Basis {
        if self.rng.gen_bool(0.5) {
            Basis::Fourier
        } else {
            Basis::Polynomial
        }
    }
}
