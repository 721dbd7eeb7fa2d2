//! Seeded generators of random desk-scale instances.

use crate::ff::{FieldSpec, Fq};
use crate::series::Laurent2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn nonzero(k: &FieldSpec, rng: &mut ChaCha8Rng) -> Fq {
    rng.gen_range(1..k.q())
}

pub fn elem(k: &FieldSpec, rng: &mut ChaCha8Rng) -> Fq {
    rng.gen_range(0..k.q())
}

/// Principal unit `1 + sum a u^i t^j` with (j >= 1) or (j = 0, i >= 1); at most `terms` extra terms.
pub fn principal_unit(k: &FieldSpec, rng: &mut ChaCha8Rng, terms: usize, u_range: i64, t_max: i64) -> Laurent2 {
    let mut f = Laurent2::one(k);
    let n = rng.gen_range(0..=terms);
    for _ in 0..n {
        let j = rng.gen_range(0..=t_max);
        let i = if j == 0 { rng.gen_range(1..=u_range.max(1)) } else { rng.gen_range(-u_range..=u_range) };
        f = f.add(&Laurent2::monomial(k, nonzero(k, rng), i, j));
    }
    f
}

/// Random unit `c u^i t^j * principal`.
pub fn unit(k: &FieldSpec, rng: &mut ChaCha8Rng, terms: usize, u_range: i64, t_max: i64) -> Laurent2 {
    let c = nonzero(k, rng);
    let i = rng.gen_range(-2..=2);
    let j = rng.gen_range(-1..=1);
    principal_unit(k, rng, terms, u_range, t_max).scale(&c).shift(i, j)
}

/// Sparse Laurent polynomial with t-exponents in [-b, t_max] and u-exponents in [-a, a].
pub fn laurent_poly(k: &FieldSpec, rng: &mut ChaCha8Rng, terms: usize, a: i64, b: i64, t_max: i64) -> Laurent2 {
    let mut f = Laurent2::zero(k);
    let n = rng.gen_range(0..=terms);
    for _ in 0..n {
        let j = rng.gen_range(-b..=t_max);
        let i = rng.gen_range(-a..=a);
        f = f.add(&Laurent2::monomial(k, nonzero(k, rng), i, j));
    }
    f
}
