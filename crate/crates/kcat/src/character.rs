//! Graded-rank characters and their calculus: `ch`, the `*B_s` recursion,
//! Bott-Samelson characters and triangular decomposition.

use crate::alcove::{Alcove, FaceType};
use crate::error::{Error, Result};
use crate::hecke::{e_lambda, PeriodicElt};
use crate::laurent::LaurentPoly;
use crate::root_datum::RootDatum;
use num_traits::Signed;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Graded ranks of stalks, `A -> grk(M_{A})`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CharObj {
    pub grk: BTreeMap<Alcove, LaurentPoly>,
}

impl CharObj {
    pub fn zero() -> CharObj {
        CharObj::default()
    }

    pub fn single(a: Alcove, p: LaurentPoly) -> CharObj {
        let mut c = CharObj::zero();
        c.add(a, &p);
        c
    }

    pub fn add(&mut self, a: Alcove, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.grk.entry(a.clone()).or_default();
        *e = &*e + p;
        if e.is_zero() {
            self.grk.remove(&a);
        }
    }

    pub fn get(&self, a: &Alcove) -> LaurentPoly {
        self.grk.get(a).cloned().unwrap_or_default()
    }

    pub fn sum(&self, o: &CharObj) -> CharObj {
        let mut r = self.clone();
        for (a, p) in &o.grk {
            r.add(a.clone(), p);
        }
        r
    }

    /// `grk(M(n)) = v^n grk(M)`.
    pub fn shift(&self, n: i32) -> CharObj {
        CharObj { grk: self.grk.iter().map(|(a, p)| (a.clone(), p.shift(n))).collect() }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.grk.values().all(|p| p.is_nonnegative())
    }

    pub fn support(&self) -> Vec<Alcove> {
        self.grk.keys().cloned().collect()
    }

    /// `ch(M) = sum_A v^{l(A)} grk(M_{A}) A`.
    pub fn ch(&self, d: &RootDatum) -> PeriodicElt {
        let mut p = PeriodicElt::zero();
        for (a, g) in &self.grk {
            p.add_term(a.clone(), &g.shift(d.length(a) as i32));
        }
        p
    }

    pub fn from_ch(d: &RootDatum, p: &PeriodicElt) -> CharObj {
        let mut c = CharObj::zero();
        for (a, g) in &p.terms {
            c.add(a.clone(), &g.shift(-(d.length(a) as i32)));
        }
        c
    }

    pub fn to_json(&self, d: &RootDatum) -> Value {
        let mut v: Vec<&Alcove> = self.grk.keys().collect();
        v.sort_by_cached_key(|a| (d.length(a), d.coords(a)));
        Value::Array(v.into_iter().map(|a| json!({"alcove": d.coords(a), "grk": self.grk[a].to_json()})).collect())
    }

    pub fn from_json(d: &RootDatum, v: &Value) -> Result<CharObj> {
        let mut c = CharObj::zero();
        for item in v.as_array().ok_or_else(|| Error::Parse("expected array".into()))? {
            let coords: Vec<i64> = item["alcove"]
                .as_array()
                .ok_or_else(|| Error::Parse("alcove".into()))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::Parse("alcove coordinate".into())))
                .collect::<Result<_>>()?;
            let a = d.from_coords(&coords)?;
            let g = LaurentPoly::from_json(&item["grk"]).ok_or_else(|| Error::Parse("grk".into()))?;
            c.add(a, &g);
        }
        Ok(c)
    }
}

/// Character of `Q_lambda`: rank one at each alcove of the orbit, `grk = v^{2 d(A, A_lambda^-)}`.
pub fn char_q_lambda(d: &RootDatum, lambda: &[i64]) -> Result<CharObj> {
    let amin = d.box_max(lambda)?;
    let mut c = CharObj::zero();
    for a in d.wlambda_orbit(lambda)? {
        let e = 2 * d.dist(&a, &amin) as i32;
        c.add(a, &LaurentPoly::v_pow(e));
    }
    Ok(c)
}

/// `ch(Q_lambda) = v^{2 l(A_lambda^-)} e_lambda`.
pub fn ch_q_lambda(d: &RootDatum, lambda: &[i64]) -> Result<PeriodicElt> {
    let amin = d.box_max(lambda)?;
    Ok(e_lambda(d, lambda)?.scale(&LaurentPoly::v_pow(2 * d.length(&amin) as i32)))
}

/// New graded rank at `A` is `v(c_A + c_{As})` if `As > A`, else `v^{-1}(c_A + c_{As})`.
pub fn star_bs(d: &RootDatum, c: &CharObj, s: FaceType) -> CharObj {
    let mut out = CharObj::zero();
    let mut touched: Vec<Alcove> = vec![];
    for a in c.grk.keys() {
        touched.push(a.clone());
        touched.push(d.right_act(a, s));
    }
    touched.sort();
    touched.dedup();
    for a in touched {
        let as_ = d.right_act(&a, s);
        let sum = &c.get(&a) + &c.get(&as_);
        let e = if d.length(&as_) > d.length(&a) { 1 } else { -1 };
        out.add(a, &sum.shift(e));
    }
    out
}

pub fn bott_samelson_char(d: &RootDatum, lambda: &[i64], word: &[FaceType], shift: i32) -> Result<CharObj> {
    let mut c = char_q_lambda(d, lambda)?;
    for &s in word {
        c = star_bs(d, &c, s);
    }
    Ok(c.shift(shift))
}

/// Write `c` as a nonnegative combination of shifted basis characters, each triangular with
/// leading term `grk = 1` at its alcove and support above it.
pub fn triangular_decompose(d: &RootDatum, c: &CharObj, basis: &[(Alcove, CharObj)]) -> Result<Vec<(Alcove, i32)>> {
    for (a, b) in basis {
        if b.get(a) != LaurentPoly::one() {
            return Err(Error::NonTriangularBasis(format!("{:?}", d.coords(a))));
        }
        for x in b.grk.keys() {
            if x != a && !d.leq(a, x) {
                return Err(Error::NonTriangularBasis(format!("{:?}", d.coords(a))));
            }
        }
    }
    let mut rest = c.clone();
    let mut out = vec![];
    while !rest.grk.is_empty() {
        // a minimal alcove of the remaining support
        let support = rest.support();
        let a = support
            .iter()
            .find(|x| !support.iter().any(|y| y != *x && d.leq(y, x)))
            .cloned()
            .expect("finite support has minimal elements");
        let g = rest.get(&a);
        let (_, b) = basis
            .iter()
            .find(|(x, _)| *x == a)
            .ok_or_else(|| Error::NonTriangularBasis(format!("no basis element at {:?}", d.coords(&a))))?;
        for (e, k) in g.terms() {
            if k.is_negative() {
                return Err(Error::NegativeCoefficient(format!("{:?}", d.coords(&a))));
            }
            let n: i64 = k.try_into().map_err(|_| Error::BoundExceeded("multiplicity".into()))?;
            for _ in 0..n {
                out.push((a.clone(), *e));
            }
        }
        for (e, k) in g.terms() {
            let sub = b.shift(*e);
            for (x, p) in &sub.grk {
                rest.add(x.clone(), &p.scale(&(-k)));
            }
        }
    }
    out.sort_by_cached_key(|(a, e)| (d.length(a), d.coords(a), *e));
    Ok(out)
}
