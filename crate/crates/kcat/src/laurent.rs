//! Integer Laurent polynomials in `v`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::mono(0, 1)
    }

    /// `c v^e`.
    pub fn mono(e: i32, c: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        p.add_term(e, BigInt::from(c));
        p
    }

    pub fn v_pow(e: i32) -> LaurentPoly {
        LaurentPoly::mono(e, 1)
    }

    /// `v^{-1} - v`.
    pub fn vinv_minus_v() -> LaurentPoly {
        &LaurentPoly::v_pow(-1) - &LaurentPoly::v_pow(1)
    }

    pub fn from_pairs(pairs: &[(i32, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &(e, c) in pairs {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    pub fn add_term(&mut self, e: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Multiply by `v^n`.
    pub fn shift(&self, n: i32) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + n, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (e, x) in &self.terms {
            p.add_term(*e, x * c);
        }
        p
    }

    pub fn eval_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Whether the polynomial is `c v^e` for a single term.
    pub fn as_monomial(&self) -> Option<(i32, BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c.clone()))
        } else {
            None
        }
    }

    /// Bar involution `v -> v^{-1}` on coefficients.
    pub fn bar(&self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| match c.to_i64() {
                Some(x) => json!([e, x]),
                None => json!([e, c.to_string()]),
            })
            .collect();
        Value::Array(pairs)
    }

    pub fn from_json(v: &Value) -> Option<LaurentPoly> {
        let mut p = LaurentPoly::zero();
        for t in v.as_array()? {
            let e = t.get(0)?.as_i64()? as i32;
            let c = match t.get(1)? {
                Value::Number(n) => BigInt::from(n.as_i64()?),
                Value::String(s) => s.parse().ok()?,
                _ => return None,
            };
            p.add_term(e, c);
        }
        Some(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (*e, a.is_one()) {
                (0, _) => write!(f, "{}", a)?,
                (1, true) => write!(f, "v")?,
                (1, false) => write!(f, "{}v", a)?,
                (e, true) => write!(f, "v^{}", e)?,
                (e, false) => write!(f, "{}v^{}", a, e)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, -c);
        }
        r
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: LaurentPoly) -> LaurentPoly {
        &self + &o
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        &self - &o
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-4i32..4, -3i64..3), 0..5).prop_map(|v| {
            let pairs: Vec<(i32, i64)> = v;
            LaurentPoly::from_pairs(&pairs)
        })
    }

    #[test]
    fn display_and_json() {
        let p = LaurentPoly::from_pairs(&[(-1, 1), (1, -2), (0, 3)]);
        assert_eq!(p.to_string(), "-2v + 3 + v^-1");
        assert_eq!(LaurentPoly::from_json(&p.to_json()), Some(p));
    }

    #[test]
    fn quadratic_identity() {
        // (v^-1 - v)^2 + 4 = (v + v^-1)^2
        let a = LaurentPoly::vinv_minus_v();
        let b = &LaurentPoly::v_pow(1) + &LaurentPoly::v_pow(-1);
        assert_eq!(&(&a * &a) + &LaurentPoly::mono(0, 4), &b * &b);
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb(), b in arb(), c in arb()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }
    }
}
