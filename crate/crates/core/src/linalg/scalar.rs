//! Scalars of the p-local integers Z_(p): rationals whose denominator is a
//! unit, i.e. coprime to p. Stored as `BigRational`; every operation that
//! produces an invariant normalizes away the unit part.

use num::{BigInt, BigRational, One, Signed, Zero};

/// The prime fixed for a computation context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(pub u32);

impl Prime {
    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// p-adic valuation of a nonzero rational; `None` for zero.
    pub fn valuation(self, x: &BigRational) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        Some(int_valuation(self, x.numer()) - int_valuation(self, x.denom()))
    }

    /// Checks that `x` lies in Z_(p), i.e. has valuation >= 0.
    pub fn is_integral(self, x: &BigRational) -> bool {
        x.is_zero() || self.valuation(x).unwrap() >= 0
    }

    /// Checks that `x` is a unit of Z_(p).
    pub fn is_unit(self, x: &BigRational) -> bool {
        !x.is_zero() && self.valuation(x).unwrap() == 0
    }

    /// p^e as a rational.
    pub fn power(self, e: u32) -> BigRational {
        BigRational::from_integer(self.big().pow(e))
    }

    /// Splits nonzero `x` as (v, u) with x = p^v * u and u a unit.
    pub fn split(self, x: &BigRational) -> (i64, BigRational) {
        let v = self.valuation(x).expect("split of zero scalar");
        let pw = pow_rational(self, v);
        (v, x / pw)
    }
}

fn pow_rational(p: Prime, v: i64) -> BigRational {
    let mag = BigRational::from_integer(p.big().pow(v.unsigned_abs() as u32));
    if v >= 0 {
        mag
    } else {
        mag.recip()
    }
}

fn int_valuation(p: Prime, n: &BigInt) -> i64 {
    assert!(!n.is_zero());
    let p = p.big();
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = num::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Residue of a p-locally integral rational mod p, in [0, p).
pub fn residue_mod_p(p: Prime, x: &BigRational) -> u32 {
    residue_mod_pk(p, x, 1)
}

/// Residue mod p^k of a p-locally integral rational, in [0, p^k).
/// The denominator is inverted mod p^k.
pub fn residue_mod_pk(p: Prime, x: &BigRational, k: u32) -> u32 {
    assert!(p.is_integral(x), "residue of a non p-integral scalar");
    if x.is_zero() {
        return 0;
    }
    let m = BigInt::from(p.0).pow(k);
    let num = x.numer().mod_floor_big(&m);
    let den_inv = mod_inverse(&x.denom().mod_floor_big(&m), &m)
        .expect("denominator must be a unit mod p^k");
    let r = (num * den_inv).mod_floor_big(&m);
    u32::try_from(&r).expect("residue fits in u32")
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = num::Integer::extended_gcd(a, m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor_big(m))
    } else {
        None
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        num::Integer::mod_floor(self, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from_i64(n).unwrap(), BigInt::from_i64(d).unwrap())
    }

    #[test]
    fn valuation_and_split() {
        let p = Prime(2);
        assert_eq!(p.valuation(&q(12, 1)), Some(2));
        assert_eq!(p.valuation(&q(3, 1)), Some(0));
        assert_eq!(p.valuation(&q(1, 2)), Some(-1));
        assert_eq!(p.valuation(&q(0, 1)), None);
        let (v, u) = p.split(&q(24, 5));
        assert_eq!(v, 3);
        assert!(p.is_unit(&u));
        assert_eq!(u * p.power(3), q(24, 5));
    }

    #[test]
    fn residues() {
        let p = Prime(3);
        assert_eq!(residue_mod_p(p, &q(7, 1)), 1);
        // 1/2 = 2 mod 3
        assert_eq!(residue_mod_p(p, &q(1, 2)), 2);
        assert_eq!(residue_mod_pk(p, &q(10, 1), 2), 1);
    }
}
