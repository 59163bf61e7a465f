//! Polynomials in at most two variables over a `Field`.
//!
//! Variables are the fundamental-weight coordinates of the weight lattice, each
//! of grading degree 2.

use crate::scalar::{Field, Scalar};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Mono = [u32; 2];

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Scalar>,
}

/// All exponent vectors of total degree `deg` in `nvars` variables.
pub fn monomials(nvars: usize, deg: u32) -> Vec<Mono> {
    match nvars {
        1 => vec![[deg, 0]],
        2 => (0..=deg).rev().map(|i| [i, deg - i]).collect(),
        _ => panic!("only one or two variables are supported"),
    }
}

/// Monic gcd of homogeneous polynomials, by dehomogenising in the first variable.
pub fn gcd_homogeneous(f: Field, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let val = |p: &Poly, k: usize| p.terms.keys().map(|m| m[k]).min().unwrap();
    let dehom = |p: &Poly| {
        let v0 = val(p, 0);
        let top = p.terms.keys().map(|m| m[0]).max().unwrap() - v0;
        let mut c = vec![f.zero(); top as usize + 1];
        for (m, x) in &p.terms {
            c[(m[0] - v0) as usize] = x.clone();
        }
        crate::upoly::UPoly::new(f, c)
    };
    let g = dehom(a).gcd(&dehom(b));
    let e = g.deg().unwrap_or(0) as u32;
    let (v0, v1) = (val(a, 0).min(val(b, 0)), val(a, 1).min(val(b, 1)));
    let mut out = Poly::zero();
    for (k, c) in g.c.iter().enumerate() {
        out.add_term([k as u32 + v0, e - k as u32 + v1], c.clone());
    }
    out
}

/// Dimension of the degree-`d` part of S (grading degree, variables of degree 2).
pub fn graded_dim(nvars: usize, d: i32) -> usize {
    if d < 0 || d % 2 != 0 {
        return 0;
    }
    let n = (d / 2) as usize;
    match nvars {
        1 => 1,
        2 => n + 1,
        _ => panic!("only one or two variables are supported"),
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::monomial([0, 0], c)
    }

    pub fn one(f: Field) -> Poly {
        Poly::constant(f.one())
    }

    pub fn monomial(m: Mono, c: Scalar) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(f: Field, i: usize) -> Poly {
        let mut m = [0, 0];
        m[i] = 1;
        Poly::monomial(m, f.one())
    }

    /// Linear form sum_i c_i x_i.
    pub fn linear(f: Field, coeffs: &[i64]) -> Poly {
        let mut p = Poly::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term([if i == 0 { 1 } else { 0 }, if i == 1 { 1 } else { 0 }], f.int(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Polynomial degree (sum of exponents) of a homogeneous polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m[0] + m[1])
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m[0] + m[1]);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Grading degree (twice the polynomial degree).
    pub fn grading(&self) -> Option<i32> {
        self.degree().map(|d| 2 * d as i32)
    }

    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&[0, 0]) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn pow(&self, f: Field, e: u32) -> Poly {
        let mut r = Poly::one(f);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Substitute x_i -> images[i].
    pub fn substitute(&self, f: Field, images: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(f, e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading().expect("division by zero polynomial");
        let dinv = dc.inv();
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            if m[0] < dm[0] || m[1] < dm[1] {
                return None;
            }
            let qm = [m[0] - dm[0], m[1] - dm[1]];
            let qc = c * &dinv;
            let t = Poly::monomial(qm, qc);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// Largest `k` with `d^k | self`; `u32::MAX` for the zero polynomial.
    pub fn valuation(&self, d: &Poly) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(d) {
            cur = q;
            k += 1;
        }
        k
    }

    pub fn map_coeffs(&self, g: impl Fn(&Scalar) -> Scalar) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, g(c));
        }
        out
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = vec![];
        for (m, c) in self.terms.iter().rev() {
            let mut s = c.to_text();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    s.push_str(&format!("*x{}", i + 1));
                    if e > 1 {
                        s.push_str(&format!("^{}", e));
                    }
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c);
        }
        r
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term([m1[0] + m2[0], m1[1] + m2[1]], c1 * c2);
            }
        }
        r
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

/// Coefficients of `p` written in the basis `{ell^j * t^(n-j)}` where `ell` is
/// a linear form and `t` the complementary variable; entry `j` is the
/// coefficient of `ell^j`. Used to test divisibility by powers of `ell`.
///
/// Returns a matrix `R` (rows indexed by j = 0..=n, columns by the monomials of
/// degree n in `monomials(nvars, n)` order) so that the j-th coefficient of `p`
/// is `R[j] . coeffs(p)`. This is linear in `p`.
pub fn linear_form_expansion(f: Field, nvars: usize, ell: &Poly, n: u32) -> Vec<Vec<Scalar>> {
    let monos = monomials(nvars, n);
    if nvars == 1 {
        // ell = a*x; x^n = a^-n ell^n.
        let a = ell.coeff(&[1, 0]).expect("linear form").clone();
        let mut r = vec![vec![f.zero(); 1]; n as usize + 1];
        r[n as usize][0] = a.pow(n).inv();
        return r;
    }
    let a = ell.coeff(&[1, 0]).cloned().unwrap_or_else(|| f.zero());
    let b = ell.coeff(&[0, 1]).cloned().unwrap_or_else(|| f.zero());
    // Eliminate the variable with nonzero coefficient. If b != 0:
    // y = (ell - a x)/b, so x^{n-i} y^i = b^{-i} sum_j C(i,j) ell^j (-a)^{i-j} x^{n-j}.
    let (swap, a, b) = if !b.is_zero() { (false, a, b) } else { (true, b, a) };
    let binv = b.inv();
    let mut binom = vec![vec![f.zero(); n as usize + 1]; n as usize + 1];
    for i in 0..=n as usize {
        binom[i][0] = f.one();
        for j in 1..=i {
            binom[i][j] = if j == i { f.one() } else { &binom[i - 1][j - 1] + &binom[i - 1][j] };
        }
    }
    let mut r = vec![vec![f.zero(); monos.len()]; n as usize + 1];
    for (col, m) in monos.iter().enumerate() {
        // exponent of the eliminated variable
        let i = if swap { m[0] } else { m[1] } as usize;
        let bpow = binv.pow(i as u32);
        let na = -&a;
        for j in 0..=i {
            let c = &(&binom[i][j] * &na.pow((i - j) as u32)) * &bpow;
            r[j][col] += &c;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::RATIONALS
    }

    #[test]
    fn exact_division() {
        let f = q();
        let x = Poly::var(f, 0);
        let y = Poly::var(f, 1);
        let a = &x - &y;
        let g = &(&x * &x) + &(&y * &x);
        let prod = &a * &g;
        assert_eq!(prod.div_exact(&a), Some(g.clone()));
        assert_eq!(g.div_exact(&a), None);
        assert_eq!((&prod * &a).valuation(&a), 2);
    }

    #[test]
    fn expansion_detects_divisibility() {
        let f = q();
        let x = Poly::var(f, 0);
        let y = Poly::var(f, 1);
        let ell = &(&x * &Poly::constant(f.int(2))) - &y;
        let p = &(&ell * &ell) * &(&x + &y);
        let r = linear_form_expansion(f, 2, &ell, 3);
        let monos = monomials(2, 3);
        let coeffs: Vec<Scalar> = monos.iter().map(|m| p.coeff(m).cloned().unwrap_or_else(|| f.zero())).collect();
        for j in 0..2 {
            let s = r[j].iter().zip(&coeffs).fold(f.zero(), |acc, (a, b)| &acc + &(a * b));
            assert!(s.is_zero());
        }
        let s2 = r[2].iter().zip(&coeffs).fold(f.zero(), |acc, (a, b)| &acc + &(a * b));
        assert!(!s2.is_zero());
    }

    #[test]
    fn graded_dims() {
        assert_eq!(graded_dim(2, 4), 3);
        assert_eq!(graded_dim(1, 6), 1);
        assert_eq!(graded_dim(2, 3), 0);
    }
}
