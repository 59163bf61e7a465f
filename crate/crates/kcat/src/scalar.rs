//! Coefficient fields: the rationals or a prime field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Characteristic of the coefficient field; `p = 0` means the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    pub p: u64,
}

impl Field {
    pub const RATIONALS: Field = Field { p: 0 };

    pub fn new(p: u64) -> Field {
        Field { p }
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        if self.p == 0 {
            Scalar::Q(BigRational::from_integer(BigInt::from(n)))
        } else {
            let p = self.p as i128;
            Scalar::F((n as i128).rem_euclid(p) as u64, self.p)
        }
    }

    pub fn rational(self, num: i64, den: i64) -> Scalar {
        self.int(num) / self.int(den)
    }

    /// Whether `n` is a unit in the field.
    pub fn is_unit_int(self, n: i64) -> bool {
        !self.int(n).is_zero()
    }

    pub fn is_prime_or_zero(p: u64) -> bool {
        if p == 0 {
            return true;
        }
        if p < 2 {
            return false;
        }
        let mut d = 2u64;
        while d * d <= p {
            if p % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    F(u64, u64),
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::RATIONALS,
            Scalar::F(_, p) => Field::new(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::F(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::F(v, _) => *v == 1,
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(q) => {
                assert!(!q.is_zero(), "division by zero");
                Scalar::Q(q.recip())
            }
            Scalar::F(v, p) => {
                assert!(*v != 0, "division by zero");
                Scalar::F(mod_pow(*v, p - 2, *p), *p)
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut r = self.field().one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Integer value when the scalar is an integer (or any residue mod p).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) if q.is_integer() => q.to_integer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::F(v, _) => Some(*v as i64),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            _ => None,
        }
    }

    /// Compact textual form used in JSON dumps.
    pub fn to_text(&self) -> String {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    q.to_integer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::F(v, _) => v.to_string(),
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn binop(a: &Scalar, b: &Scalar, q: impl Fn(&BigRational, &BigRational) -> BigRational, f: impl Fn(u128, u128, u128) -> u128) -> Scalar {
    match (a, b) {
        (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(q(x, y)),
        (Scalar::F(x, p), Scalar::F(y, p2)) => {
            debug_assert_eq!(p, p2, "mixed characteristics");
            Scalar::F(f(*x as u128, *y as u128, *p as u128) as u64, *p)
        }
        _ => panic!("mixed coefficient fields"),
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        binop(self, o, |x, y| x + y, |x, y, p| (x + y) % p)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        binop(self, o, |x, y| x - y, |x, y, p| (x + p - y) % p)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        binop(self, o, |x, y| x * y, |x, y, p| (x * y) % p)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(q) => Scalar::Q(-q),
            Scalar::F(v, p) => Scalar::F((p - v) % p, *p),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::new(13);
        for n in 1..13 {
            let x = f.int(n);
            assert!((&x * &x.inv()).is_one());
        }
        assert_eq!(f.int(-1), f.int(12));
    }

    #[test]
    fn rational_arithmetic() {
        let q = Field::RATIONALS;
        let a = q.rational(1, 3);
        let b = q.rational(2, 3);
        assert!((&a + &b).is_one());
        assert_eq!((&a / &b).to_text(), "1/2");
    }

    #[test]
    fn primality() {
        assert!(Field::is_prime_or_zero(32003));
        assert!(!Field::is_prime_or_zero(9));
    }
}
