//! Commutative rings used as coefficient contexts.
//!
//! A ring value is a cheap-to-clone context; elements are plain data interpreted by it.

use num_bigint::BigInt;
use std::fmt::Debug;

pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse when `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// `Some(p)` when the ring has prime characteristic p.
    fn char_p(&self) -> Option<u32>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Rings carrying exact arithmetic modulo p^s, where ghost components live.
pub trait PadicRing: Ring {
    fn prime(&self) -> u32;
    fn padic_prec(&self) -> u32;
    /// Exact division by p, `None` if `a` is not divisible.
    fn div_p(&self, a: &Self::Elem) -> Option<Self::Elem>;
}
