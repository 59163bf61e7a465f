//! The affine Hecke algebra in its standard basis and the periodic module.
//!
//! Affine Weyl group elements are keyed by the alcove `A_fund·x`.

use crate::alcove::{Alcove, FaceType};
use crate::error::Result;
use crate::laurent::LaurentPoly;
use crate::root_datum::RootDatum;
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeckeElt {
    pub terms: BTreeMap<Alcove, LaurentPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PeriodicElt {
    pub terms: BTreeMap<Alcove, LaurentPoly>,
}

fn add_into(m: &mut BTreeMap<Alcove, LaurentPoly>, a: Alcove, c: &LaurentPoly) {
    if c.is_zero() {
        return;
    }
    let e = m.entry(a.clone()).or_default();
    *e = &*e + c;
    if e.is_zero() {
        m.remove(&a);
    }
}

fn terms_json(d: &RootDatum, m: &BTreeMap<Alcove, LaurentPoly>) -> Value {
    let mut v: Vec<(Alcove, &LaurentPoly)> = m.iter().map(|(a, c)| (a.clone(), c)).collect();
    v.sort_by_cached_key(|(a, _)| (d.length(a), d.coords(a)));
    Value::Array(v.into_iter().map(|(a, c)| json!({"basis_key": format!("{:?}", d.coords(&a)), "coeffs": c.to_json()})).collect())
}

impl HeckeElt {
    pub fn zero() -> HeckeElt {
        HeckeElt::default()
    }

    pub fn unit(d: &RootDatum) -> HeckeElt {
        HeckeElt::basis(d.fund())
    }

    pub fn basis(x: Alcove) -> HeckeElt {
        let mut terms = BTreeMap::new();
        terms.insert(x, LaurentPoly::one());
        HeckeElt { terms }
    }

    /// `H_s`.
    pub fn simple(d: &RootDatum, s: FaceType) -> HeckeElt {
        HeckeElt::basis(d.right_act(&d.fund(), s))
    }

    /// `H_s + v`.
    pub fn bs_generator(d: &RootDatum, s: FaceType) -> HeckeElt {
        let mut h = HeckeElt::simple(d, s);
        add_into(&mut h.terms, d.fund(), &LaurentPoly::v_pow(1));
        h
    }

    pub fn add(&self, o: &HeckeElt) -> HeckeElt {
        let mut r = self.clone();
        for (a, c) in &o.terms {
            add_into(&mut r.terms, a.clone(), c);
        }
        r
    }

    pub fn scale(&self, c: &LaurentPoly) -> HeckeElt {
        let mut r = HeckeElt::zero();
        for (a, x) in &self.terms {
            add_into(&mut r.terms, a.clone(), &(x * c));
        }
        r
    }

    /// `h · H_s`.
    pub fn mul_simple(&self, d: &RootDatum, s: FaceType) -> HeckeElt {
        let mut r = HeckeElt::zero();
        for (w, c) in &self.terms {
            let ws = d.right_act(w, s);
            add_into(&mut r.terms, ws.clone(), c);
            if d.coxeter_length(&ws) < d.coxeter_length(w) {
                add_into(&mut r.terms, w.clone(), &(c * &LaurentPoly::vinv_minus_v()));
            }
        }
        r
    }

    pub fn mul(&self, d: &RootDatum, o: &HeckeElt) -> HeckeElt {
        let mut r = HeckeElt::zero();
        for (x, c) in &o.terms {
            let mut h = self.clone();
            for s in d.reduced_word(x) {
                h = h.mul_simple(d, s);
            }
            r = r.add(&h.scale(c));
        }
        r
    }

    pub fn to_json(&self, d: &RootDatum) -> Value {
        terms_json(d, &self.terms)
    }
}

/// `(H_{s_1} + v) ··· (H_{s_l} + v)`.
pub fn bs_char_element(d: &RootDatum, word: &[FaceType]) -> HeckeElt {
    let mut h = HeckeElt::unit(d);
    for &s in word {
        h = h.mul(d, &HeckeElt::bs_generator(d, s));
    }
    h
}

impl PeriodicElt {
    pub fn zero() -> PeriodicElt {
        PeriodicElt::default()
    }

    pub fn basis(a: Alcove) -> PeriodicElt {
        let mut terms = BTreeMap::new();
        terms.insert(a, LaurentPoly::one());
        PeriodicElt { terms }
    }

    pub fn add_term(&mut self, a: Alcove, c: &LaurentPoly) {
        add_into(&mut self.terms, a, c);
    }

    pub fn add(&self, o: &PeriodicElt) -> PeriodicElt {
        let mut r = self.clone();
        for (a, c) in &o.terms {
            add_into(&mut r.terms, a.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &PeriodicElt) -> PeriodicElt {
        self.add(&o.scale(&LaurentPoly::mono(0, -1)))
    }

    pub fn scale(&self, c: &LaurentPoly) -> PeriodicElt {
        let mut r = PeriodicElt::zero();
        for (a, x) in &self.terms {
            add_into(&mut r.terms, a.clone(), &(x * c));
        }
        r
    }

    pub fn coeff(&self, a: &Alcove) -> LaurentPoly {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `p · H_s`: `A H_s = As` if `As > A`, else `As + (v^{-1} - v) A`.
    pub fn act_simple(&self, d: &RootDatum, s: FaceType) -> PeriodicElt {
        let mut r = PeriodicElt::zero();
        for (a, c) in &self.terms {
            let as_ = d.right_act(a, s);
            add_into(&mut r.terms, as_.clone(), c);
            if d.length(&as_) < d.length(a) {
                add_into(&mut r.terms, a.clone(), &(c * &LaurentPoly::vinv_minus_v()));
            }
        }
        r
    }

    pub fn act(&self, d: &RootDatum, h: &HeckeElt) -> PeriodicElt {
        let mut r = PeriodicElt::zero();
        for (x, c) in &h.terms {
            let mut p = self.clone();
            for s in d.reduced_word(x) {
                p = p.act_simple(d, s);
            }
            r = r.add(&p.scale(c));
        }
        r
    }

    pub fn to_json(&self, d: &RootDatum) -> Value {
        terms_json(d, &self.terms)
    }
}

pub fn periodic_act(d: &RootDatum, p: &PeriodicElt, h: &HeckeElt) -> PeriodicElt {
    p.act(d, h)
}

/// `e_lambda = sum over the orbit of A_lambda^- of v^{-l(A)} A`.
pub fn e_lambda(d: &RootDatum, lambda: &[i64]) -> Result<PeriodicElt> {
    let mut p = PeriodicElt::zero();
    for a in d.wlambda_orbit(lambda)? {
        let l = d.length(&a) as i32;
        p.add_term(a, &LaurentPoly::v_pow(-l));
    }
    Ok(p)
}
