//! Dense univariate polynomials over a coefficient field, with root finding.

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    pub f: Field,
    pub c: Vec<Scalar>,
}

impl UPoly {
    pub fn new(f: Field, mut c: Vec<Scalar>) -> UPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { f, c }
    }

    pub fn constant(f: Field, x: Scalar) -> UPoly {
        UPoly::new(f, vec![x])
    }

    /// `x - a`.
    pub fn linear(f: Field, a: &Scalar) -> UPoly {
        UPoly::new(f, vec![-a, f.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.c.last().cloned().unwrap_or_else(|| self.f.zero())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().inv();
        UPoly::new(self.f, self.c.iter().map(|x| x * &l).collect())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).cloned().unwrap_or_else(|| self.f.zero());
                match o.c.get(i) {
                    Some(b) => a + b.clone(),
                    None => a,
                }
            })
            .collect();
        UPoly::new(self.f, c)
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(self.f, self.c.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::new(self.f, vec![]);
        }
        let mut c = vec![self.f.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        UPoly::new(self.f, c)
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.deg().expect("division by zero polynomial");
        let li = d.lead().inv();
        let mut r = self.c.clone();
        let mut q = vec![self.f.zero(); self.c.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let t = &r[r.len() - 1] * &li;
            if !t.is_zero() {
                for (i, x) in d.c.iter().enumerate() {
                    r[k + i] -= &(&t * x);
                }
            }
            q[k] = t;
            r.pop();
        }
        (UPoly::new(self.f, q), UPoly::new(self.f, r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    pub fn derivative(&self) -> UPoly {
        let c = self.c.iter().enumerate().skip(1).map(|(i, x)| x * &self.f.int(i as i64)).collect();
        UPoly::new(self.f, c)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.f.zero();
        for c in self.c.iter().rev() {
            acc = &acc * x + c.clone();
        }
        acc
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &UPoly) -> (UPoly, UPoly, UPoly) {
        let f = self.f;
        let one = UPoly::constant(f, f.one());
        let zero = UPoly::new(f, vec![]);
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let l = UPoly::constant(f, r0.lead().inv());
        (r0.mul(&l), s0.mul(&l), t0.mul(&l))
    }

    /// Product of the distinct irreducible factors (characteristic zero, or `p` above the degree).
    pub fn squarefree_part(&self) -> UPoly {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Multiplicity of `a` as a root.
    pub fn multiplicity(&self, a: &Scalar) -> usize {
        let lin = UPoly::linear(self.f, a);
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        m
    }

    /// Distinct roots in the coefficient field.
    pub fn roots(&self) -> Result<Vec<Scalar>> {
        if self.deg().unwrap_or(0) == 0 {
            return Ok(vec![]);
        }
        let sf = self.squarefree_part();
        if self.f.p == 0 {
            rational_roots(&sf)
        } else {
            if self.f.p > 1 << 20 {
                return Err(Error::BoundExceeded(format!("root search in characteristic {}", self.f.p)));
            }
            Ok((0..self.f.p as i64).map(|x| self.f.int(x)).filter(|x| sf.eval(x).is_zero()).collect())
        }
    }
}

fn int_eval(c: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = acc * x + a;
    }
    acc
}

fn rem_eval(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = (acc * x + a).mod_floor(m);
    }
    acc
}

const HENSEL_PRIMES: [u64; 8] = [1009, 1013, 1019, 1021, 1031, 1033, 1039, 1049];

/// Rational roots of a squarefree polynomial over the rationals: scale to a monic integer
/// polynomial, find roots modulo a prime of good reduction, lift them and check exactly.
fn rational_roots(sf: &UPoly) -> Result<Vec<Scalar>> {
    let f = sf.f;
    let n = sf.deg().unwrap();
    let q: Vec<BigRational> = sf.c.iter().map(|x| x.as_rational().unwrap().clone()).collect();
    let den = q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    // monic `g(y) = den^n sf(y/den)`, integral: coefficient i is q_i den^{n-i}
    let g: Vec<BigInt> = (0..=n)
        .map(|i| {
            let s = &q[i] * BigRational::from_integer(num_traits::pow(den.clone(), n - i));
            debug_assert!(s.is_integer());
            s.to_integer()
        })
        .collect();
    let bound = g.iter().map(|x| x.abs()).max().unwrap() + BigInt::one();
    let dg: Vec<BigInt> = (1..=n).map(|i| &g[i] * BigInt::from(i)).collect();
    for &p in &HENSEL_PRIMES {
        let pb = BigInt::from(p);
        let gp = UPoly::new(Field::new(p), g.iter().map(|x| Field::new(p).int(x.mod_floor(&pb).try_into().unwrap())).collect());
        if gp.deg() != Some(n) || gp.gcd(&gp.derivative()).deg() != Some(0) {
            continue;
        }
        let mut out = vec![];
        for r0 in 0..p {
            let mut r = BigInt::from(r0);
            if !rem_eval(&g, &r, &pb).is_zero() {
                continue;
            }
            let mut m = pb.clone();
            while m <= &bound * 2 {
                m = &m * &m;
                let inv = rem_eval(&dg, &r, &m).modinv(&m).expect("simple root mod p");
                r = (&r - rem_eval(&g, &r, &m) * inv).mod_floor(&m);
            }
            if &r * 2 > m {
                r -= &m;
            }
            if int_eval(&g, &r).is_zero() {
                out.push(Scalar::Q(BigRational::new(r, den.clone())));
            }
        }
        debug_assert!(out.iter().all(|x| x.field() == f));
        return Ok(out);
    }
    Err(Error::BoundExceeded("no prime of good reduction for rational roots".into()))
}
