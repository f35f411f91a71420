//! The field GF(2^64) = GF(2)[y] / (y^64 + y^4 + y^3 + y + 1).
//!
//! Elements are 64-bit words; bit `i` is the coefficient of `y^i`, so GF(2)
//! embeds as `{0, 1}` and addition is XOR. Multiplication uses the
//! carry-less multiply instruction when the CPU has it.

use std::ops::{Add, AddAssign, Mul, MulAssign};
use std::sync::OnceLock;

use crate::rng::SplitMix64;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Gf64(pub u64);

impl Gf64 {
    pub const ZERO: Gf64 = Gf64(0);
    pub const ONE: Gf64 = Gf64(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn random(rng: &mut SplitMix64) -> Self {
        Gf64(rng.next_u64())
    }

    pub fn random_nonzero(rng: &mut SplitMix64) -> Self {
        loop {
            let x = rng.next_u64();
            if x != 0 {
                return Gf64(x);
            }
        }
    }

    pub fn pow(self, mut e: u128) -> Self {
        let mut base = self;
        let mut acc = Gf64::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `a^(2^64 - 2)`; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow((1u128 << 64) - 2))
        }
    }
}

impl std::fmt::Debug for Gf64 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Gf64({:#x})", self.0)
    }
}

// addition in characteristic 2 is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Gf64 {
    type Output = Gf64;
    #[inline]
    fn add(self, rhs: Gf64) -> Gf64 {
        Gf64(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for Gf64 {
    #[inline]
    fn add_assign(&mut self, rhs: Gf64) {
        self.0 ^= rhs.0;
    }
}

impl Mul for Gf64 {
    type Output = Gf64;
    #[inline]
    fn mul(self, rhs: Gf64) -> Gf64 {
        let (hi, lo) = clmul(self.0, rhs.0);
        Gf64(reduce(hi, lo))
    }
}

impl MulAssign for Gf64 {
    #[inline]
    fn mul_assign(&mut self, rhs: Gf64) {
        *self = *self * rhs;
    }
}

/// Reduce `hi·y^64 + lo` using `y^64 = y^4 + y^3 + y + 1`.
#[inline]
fn reduce(hi: u64, lo: u64) -> u64 {
    let fold = |h: u64| h ^ (h << 1) ^ (h << 3) ^ (h << 4);
    let carry = (hi >> 63) ^ (hi >> 61) ^ (hi >> 60);
    lo ^ fold(hi) ^ fold(carry)
}

type ClmulFn = fn(u64, u64) -> (u64, u64);

#[inline]
fn clmul(a: u64, b: u64) -> (u64, u64) {
    static IMPL: OnceLock<ClmulFn> = OnceLock::new();
    (IMPL.get_or_init(select_clmul))(a, b)
}

fn select_clmul() -> ClmulFn {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            return clmul_x86;
        }
    }
    clmul_soft
}

#[cfg(target_arch = "x86_64")]
fn clmul_x86(a: u64, b: u64) -> (u64, u64) {
    // SAFETY: only selected after runtime detection of pclmulqdq.
    unsafe { clmul_x86_inner(a, b) }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq")]
unsafe fn clmul_x86_inner(a: u64, b: u64) -> (u64, u64) {
    use std::arch::x86_64::*;
    let x = _mm_set_epi64x(0, a as i64);
    let y = _mm_set_epi64x(0, b as i64);
    let p = _mm_clmulepi64_si128(x, y, 0);
    let lo = _mm_cvtsi128_si64(p) as u64;
    let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(p, p)) as u64;
    (hi, lo)
}

/// Portable carry-less multiply, returning `(hi, lo)`.
pub(crate) fn clmul_soft(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    let mut bits = b;
    while bits != 0 {
        let i = bits.trailing_zeros();
        lo ^= a << i;
        if i > 0 {
            hi ^= a >> (64 - i);
        }
        bits &= bits - 1;
    }
    (hi, lo)
}

/// `Σ a_i·b_i`.
pub fn dot(a: &[Gf64], b: &[Gf64]) -> Gf64 {
    a.iter()
        .zip(b)
        .fold(Gf64::ZERO, |acc, (&x, &y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Schoolbook product with explicit long division by the modulus.
    fn oracle_mul(a: u64, b: u64) -> u64 {
        let mut p: u128 = 0;
        for i in 0..64 {
            if (b >> i) & 1 == 1 {
                p ^= (a as u128) << i;
            }
        }
        let modulus: u128 = (1u128 << 64) | 0b11011;
        for deg in (64..128).rev() {
            if (p >> deg) & 1 == 1 {
                p ^= modulus << (deg - 64);
            }
        }
        p as u64
    }

    #[test]
    fn small_products() {
        assert_eq!(Gf64(2) * Gf64(3), Gf64(6));
        assert_eq!(Gf64(1 << 63) * Gf64(2), Gf64(0b11011));
        assert_eq!(Gf64::ONE * Gf64(12345), Gf64(12345));
        assert_eq!(Gf64::ZERO.inv(), None);
    }

    #[test]
    fn hardware_matches_software() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..1000 {
            let (a, b) = (rng.next_u64(), rng.next_u64());
            assert_eq!(clmul(a, b), clmul_soft(a, b));
        }
    }

    proptest! {
        #[test]
        fn mul_matches_oracle(a: u64, b: u64) {
            prop_assert_eq!((Gf64(a) * Gf64(b)).0, oracle_mul(a, b));
        }

        #[test]
        fn field_axioms(a: u64, b: u64, c: u64) {
            let (a, b, c) = (Gf64(a), Gf64(b), Gf64(c));
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            if !a.is_zero() {
                prop_assert_eq!(a * a.inv().unwrap(), Gf64::ONE);
            }
        }
    }
}
