//! The graded ring `S = Sym(X_k)`, fractions with root-monomial denominators,
//! the `W_f`-action, per-alcove evaluation of `R = Sym(Λ_k)`, and the elements
//! `α_s`, `δ_s` attached to a wall type.

use crate::alcove::{Alcove, FaceType};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::root_datum::{gkm_check, RootDatum, Weight};
use crate::scalar::{Field, Scalar};

/// A root datum together with a coefficient field satisfying the GKM condition.
#[derive(Clone, Debug)]
pub struct Ring {
    pub d: RootDatum,
    pub f: Field,
    roots: Vec<Poly>,
}

/// `num / (c * prod_alpha alpha^den[alpha])` over the positive roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootFraction {
    pub num: Poly,
    pub den: Vec<u32>,
}

impl Ring {
    pub fn new(d: RootDatum, f: Field) -> Result<Ring> {
        if !Field::is_prime_or_zero(f.p) || !gkm_check(&d, f.p).ok {
            return Err(Error::Gkm { datum: d.name.to_string(), p: f.p });
        }
        let roots = (0..d.npos).map(|i| Poly::linear(f, &d.roots[i].weight)).collect();
        Ok(Ring { d, f, roots })
    }

    pub fn nvars(&self) -> usize {
        self.d.rank
    }

    /// Positive root `i` as a linear polynomial.
    pub fn root(&self, i: usize) -> &Poly {
        &self.roots[i]
    }

    pub fn weight(&self, lambda: &[i64]) -> Poly {
        Poly::linear(self.f, lambda)
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        self.f.int(n)
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        Poly::constant(c)
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.f)
    }

    /// `w(f)`: the `W_f`-action extended multiplicatively.
    pub fn weyl_act(&self, w: usize, p: &Poly) -> Poly {
        if w == 0 {
            return p.clone();
        }
        let images: Vec<Poly> = (0..self.nvars())
            .map(|i| {
                let e: Weight = (0..self.nvars()).map(|j| (i == j) as i64).collect();
                self.weight(&self.d.act(w, &e))
            })
            .collect();
        p.substitute(self.f, &images)
    }

    pub fn weyl_act_frac(&self, w: usize, x: &RootFraction) -> RootFraction {
        let mut num = self.weyl_act(w, &x.num);
        let mut den = vec![0; self.d.npos];
        for (i, &m) in x.den.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let (j, sign) = self.d.positive_part(self.d.root_perm[w][i]);
            den[j] += m;
            if sign < 0 && m % 2 == 1 {
                num = -&num;
            }
        }
        self.canon(RootFraction { num, den })
    }

    /// `f ↦ f_A`: an element of `R`, written in coordinates identified with `X` at the
    /// fundamental alcove, evaluated at `A`. Depends only on `A + ZΔ`.
    pub fn eval_at(&self, f: &Poly, a: &Alcove) -> Poly {
        self.weyl_act(a.w, f)
    }

    /// Root whose reflection hyperplane contains the wall `s` of `A_fund`, as an element of `R`.
    pub fn alpha_s(&self, s: FaceType) -> Poly {
        self.root(self.d.faces()[s.0].root).clone()
    }

    /// Positive root index underlying `alpha_s`.
    pub fn alpha_s_root(&self, s: FaceType) -> usize {
        self.d.faces()[s.0].root
    }

    /// A weight `δ` with `<δ, α_s^vee> = 1`: the first fundamental weight pairing oddly with
    /// `α_s^vee`, shifted by a multiple of `α_s`.
    pub fn delta_s(&self, s: FaceType) -> Weight {
        let i = self.alpha_s_root(s);
        let cor = &self.d.roots[i].coroot;
        let alpha = &self.d.roots[i].weight;
        for (j, &c) in cor.iter().enumerate() {
            if c % 2 != 0 {
                let mut v: Weight = vec![0; self.nvars()];
                v[j] = 1;
                // <v - t alpha, alpha^vee> = c - 2t = 1
                let t = (c - 1) / 2;
                return v.iter().zip(alpha).map(|(x, a)| x - t * a).collect();
            }
        }
        // every coroot coordinate even cannot happen for reduced rank <= 2 data
        unreachable!("no fundamental weight pairs oddly with the coroot")
    }

    /// Alternative choice `δ_s + ν` with `<ν, α_s^vee> = 0`, for re-verification.
    pub fn delta_s_alt(&self, s: FaceType) -> Weight {
        let d0 = self.delta_s(s);
        if self.nvars() == 1 {
            return d0;
        }
        let cor = &self.d.roots[self.alpha_s_root(s)].coroot;
        // nu = (cor[1], -cor[0]) pairs to zero against the coroot
        let nu = [cor[1], -cor[0]];
        d0.iter().zip(nu).map(|(a, b)| a + b).collect()
    }

    pub fn is_congruent_mod_root(&self, f: &Poly, g: &Poly, root: usize) -> bool {
        (f - g).div_exact(self.root(root)).is_some()
    }

    pub fn divide_exact(&self, f: &Poly, root: usize) -> Result<Poly> {
        f.div_exact(self.root(root)).ok_or(Error::NotDivisible)
    }

    /// `f mod alpha` as a polynomial in the remaining variable (substitution along the line `alpha = 0`).
    pub fn reduce_mod_root(&self, f: &Poly, root: usize) -> Poly {
        if self.nvars() == 1 {
            return f.substitute(self.f, &[Poly::zero()]);
        }
        // alpha = a x0 + b x1 vanishes on (x0, x1) = (b t, -a t); substitute x_i -> multiple of x0.
        let w = &self.d.roots[root].weight;
        let images = vec![
            Poly::linear(self.f, &[w[1], 0]),
            Poly::linear(self.f, &[-w[0], 0]),
        ];
        f.substitute(self.f, &images)
    }

    // ---- fractions ----

    pub fn frac(&self, p: Poly) -> RootFraction {
        RootFraction { num: p, den: vec![0; self.d.npos] }
    }

    pub fn frac_zero(&self) -> RootFraction {
        self.frac(Poly::zero())
    }

    /// Product of roots `prod alpha^e[alpha]`.
    pub fn root_monomial(&self, e: &[u32]) -> Poly {
        let mut p = self.one();
        for (i, &m) in e.iter().enumerate() {
            for _ in 0..m {
                p = &p * self.root(i);
            }
        }
        p
    }

    pub fn canon(&self, mut x: RootFraction) -> RootFraction {
        if x.num.is_zero() {
            x.den.iter_mut().for_each(|m| *m = 0);
            return x;
        }
        for i in 0..x.den.len() {
            while x.den[i] > 0 {
                match x.num.div_exact(self.root(i)) {
                    Some(q) => {
                        x.num = q;
                        x.den[i] -= 1;
                    }
                    None => break,
                }
            }
        }
        x
    }

    pub fn frac_add(&self, a: &RootFraction, b: &RootFraction) -> RootFraction {
        if a.num.is_zero() {
            return b.clone();
        }
        if b.num.is_zero() {
            return a.clone();
        }
        let den: Vec<u32> = a.den.iter().zip(&b.den).map(|(x, y)| *x.max(y)).collect();
        let ea: Vec<u32> = den.iter().zip(&a.den).map(|(x, y)| x - y).collect();
        let eb: Vec<u32> = den.iter().zip(&b.den).map(|(x, y)| x - y).collect();
        let num = &(&a.num * &self.root_monomial(&ea)) + &(&b.num * &self.root_monomial(&eb));
        self.canon(RootFraction { num, den })
    }

    pub fn frac_neg(&self, a: &RootFraction) -> RootFraction {
        RootFraction { num: -&a.num, den: a.den.clone() }
    }

    pub fn frac_sub(&self, a: &RootFraction, b: &RootFraction) -> RootFraction {
        self.frac_add(a, &self.frac_neg(b))
    }

    pub fn frac_mul(&self, a: &RootFraction, b: &RootFraction) -> RootFraction {
        if a.num.is_zero() || b.num.is_zero() {
            return self.frac_zero();
        }
        let den = a.den.iter().zip(&b.den).map(|(x, y)| x + y).collect();
        self.canon(RootFraction { num: &a.num * &b.num, den })
    }

    pub fn frac_mul_poly(&self, a: &RootFraction, p: &Poly) -> RootFraction {
        self.canon(RootFraction { num: &a.num * p, den: a.den.clone() })
    }

    /// Divide by a polynomial that is a constant times a root monomial.
    pub fn frac_div_root_monomial(&self, a: &RootFraction, p: &Poly) -> Result<RootFraction> {
        let (c, e) = self.factor_root_monomial(p).ok_or(Error::NotDivisible)?;
        let den = a.den.iter().zip(&e).map(|(x, y)| x + y).collect();
        Ok(self.canon(RootFraction { num: a.num.scale(&c.inv()), den }))
    }

    /// Write `p = c * prod alpha^e` if possible.
    pub fn factor_root_monomial(&self, p: &Poly) -> Option<(Scalar, Vec<u32>)> {
        if p.is_zero() {
            return None;
        }
        let (e, cur) = self.split_root_part(p);
        cur.constant_value().map(|c| (c, e))
    }

    /// `p = prod alpha^e * q` with `q` divisible by no root.
    pub fn split_root_part(&self, p: &Poly) -> (Vec<u32>, Poly) {
        let mut e = vec![0u32; self.d.npos];
        let mut cur = p.clone();
        for (i, ei) in e.iter_mut().enumerate() {
            while let Some(q) = cur.div_exact(self.root(i)) {
                cur = q;
                *ei += 1;
            }
        }
        (e, cur)
    }

    pub fn is_poly(&self, a: &RootFraction) -> bool {
        a.den.iter().all(|&m| m == 0)
    }

    pub fn to_poly(&self, a: &RootFraction) -> Option<Poly> {
        if self.is_poly(a) {
            Some(a.num.clone())
        } else {
            None
        }
    }

    /// Whether the fraction lies in `S^alpha` (no `alpha` in the reduced denominator).
    pub fn in_s_alpha(&self, a: &RootFraction, root: usize) -> bool {
        a.den[root] == 0
    }

    /// Grading degree of a homogeneous fraction.
    pub fn frac_grading(&self, a: &RootFraction) -> Option<i32> {
        a.num.grading().map(|g| g - 2 * a.den.iter().sum::<u32>() as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::DatumName;
    use proptest::prelude::*;

    fn ring(n: DatumName) -> Ring {
        Ring::new(RootDatum::build(n), Field::RATIONALS).unwrap()
    }

    fn small_poly(r: &Ring, c: &[i64]) -> Poly {
        // c0 x0^2 + c1 x0 x1 + c2 x1^2 + c3 x0 + c4 x1 (inhomogeneous is fine here)
        let mut p = Poly::zero();
        let monos = [[2, 0], [1, 1], [0, 2], [1, 0], [0, 1]];
        for (m, &v) in monos.iter().zip(c) {
            if r.nvars() == 1 && m[1] > 0 {
                continue;
            }
            p.add_term(*m, r.scalar(v));
        }
        p
    }

    #[test]
    fn reflection_negates_root() {
        for n in DatumName::ALL {
            let r = ring(n);
            for i in 0..r.d.npos {
                let s = r.d.reflection_index[i];
                assert_eq!(r.weyl_act(s, r.root(i)), -r.root(i));
            }
        }
        let r = ring(DatumName::A1);
        let x = Poly::var(r.f, 0);
        assert_eq!(r.weyl_act(1, &x), -&x);
    }

    #[test]
    fn delta_pairs_to_one() {
        for n in DatumName::ALL {
            let r = ring(n);
            for s in 0..r.d.faces().len() {
                let s = FaceType(s);
                let i = r.alpha_s_root(s);
                assert_eq!(r.d.pair_root(&r.delta_s(s), i), 1);
                assert_eq!(r.d.pair_root(&r.delta_s_alt(s), i), 1);
            }
        }
    }

    #[test]
    fn fractions_cancel() {
        let r = ring(DatumName::A2);
        let a = r.frac_mul_poly(&r.frac(r.one()), r.root(0));
        let b = r.frac_div_root_monomial(&a, r.root(0)).unwrap();
        assert_eq!(b, r.frac(r.one()));
        let c = r.frac_div_root_monomial(&r.frac(r.one()), r.root(2)).unwrap();
        assert!(!r.in_s_alpha(&c, 2) && r.in_s_alpha(&c, 0));
    }

    #[test]
    fn eval_intertwines_left_action() {
        let r = ring(DatumName::B2);
        let f = small_poly(&r, &[1, -2, 3, 1, 0]);
        for a in r.d.ball(2) {
            for y in 0..r.d.weyl_order() {
                let ya = r.d.left_act(&crate::alcove::AffineElt { w: y, mu: vec![0, 0] }, &a);
                assert_eq!(r.weyl_act(y, &r.eval_at(&f, &a)), r.eval_at(&f, &ya));
                let shifted = r.d.translate(&a, &r.d.roots[0].weight);
                assert_eq!(r.eval_at(&f, &shifted), r.eval_at(&f, &a));
            }
        }
    }

    proptest! {
        #[test]
        fn weyl_action_is_multiplicative(c in proptest::collection::vec(-5i64..5, 5), e in proptest::collection::vec(-5i64..5, 5), w in 0usize..12) {
            let r = ring(DatumName::G2);
            let f = small_poly(&r, &c);
            let g = small_poly(&r, &e);
            prop_assert_eq!(r.weyl_act(w, &(&f * &g)), &r.weyl_act(w, &f) * &r.weyl_act(w, &g));
        }

        #[test]
        fn divided_difference_is_divisible(c in proptest::collection::vec(-5i64..5, 5), i in 0usize..3) {
            let r = ring(DatumName::A2);
            let f = small_poly(&r, &c);
            let s = r.d.reflection_index[i];
            prop_assert!(r.is_congruent_mod_root(&f, &r.weyl_act(s, &f), i));
        }

        #[test]
        fn intersection_of_localizations_is_polynomial(c in proptest::collection::vec(-4i64..4, 5), m in proptest::collection::vec(0u32..3, 4)) {
            let r = ring(DatumName::B2);
            let f = small_poly(&r, &c);
            let x = r.canon(RootFraction { num: f, den: m });
            let everywhere = (0..r.d.npos).all(|i| r.in_s_alpha(&x, i));
            prop_assert_eq!(everywhere, r.is_poly(&x));
        }
    }
}
