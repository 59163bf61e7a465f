//! Graded lattices `M ⊂ ⊕_A M_A^∅` with alcove-indexed generic decompositions.
//!
//! An object is a list of slots (copies of `S^∅` attached to an alcove, with a
//! degree offset) and a list of homogeneous generators. A generator of degree
//! `d` has, in a slot with offset `o`, a homogeneous polynomial of degree `d + o`.

pub mod hom;
pub mod sections;
pub mod split;
pub mod validate;

use crate::alcove::{Alcove, FaceType};
use crate::character::CharObj;
use crate::error::Result;
use crate::poly::Poly;
use crate::symbolic::Ring;
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub alcove: Alcove,
    pub offset: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KObj {
    pub slots: Vec<Slot>,
    /// `gens[i][j]`: component of generator `i` in slot `j`.
    pub gens: Vec<Vec<Poly>>,
    pub degrees: Vec<i32>,
}

impl KObj {
    pub fn zero() -> KObj {
        KObj { slots: vec![], gens: vec![], degrees: vec![] }
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    /// Distinct alcoves carrying slots, in slot order.
    pub fn alcoves(&self) -> Vec<Alcove> {
        let mut out: Vec<Alcove> = vec![];
        for s in &self.slots {
            if !out.contains(&s.alcove) {
                out.push(s.alcove.clone());
            }
        }
        out
    }

    pub fn slots_at(&self, a: &Alcove) -> Vec<usize> {
        (0..self.slots.len()).filter(|&j| &self.slots[j].alcove == a).collect()
    }

    pub fn rank_at(&self, a: &Alcove) -> usize {
        self.slots_at(a).len()
    }

    /// `M(n)`: degrees drop by `n`.
    pub fn shift(&self, n: i32) -> KObj {
        KObj {
            slots: self.slots.iter().map(|s| Slot { alcove: s.alcove.clone(), offset: s.offset + n }).collect(),
            gens: self.gens.clone(),
            degrees: self.degrees.iter().map(|d| d - n).collect(),
        }
    }

    pub fn direct_sum(&self, o: &KObj) -> KObj {
        let ns = self.slots.len();
        let mut slots = self.slots.clone();
        slots.extend(o.slots.iter().cloned());
        let mut gens: Vec<Vec<Poly>> = self
            .gens
            .iter()
            .map(|g| {
                let mut v = g.clone();
                v.extend((0..o.slots.len()).map(|_| Poly::zero()));
                v
            })
            .collect();
        gens.extend(o.gens.iter().map(|g| {
            let mut v: Vec<Poly> = (0..ns).map(|_| Poly::zero()).collect();
            v.extend(g.iter().cloned());
            v
        }));
        let mut degrees = self.degrees.clone();
        degrees.extend(o.degrees.iter().cloned());
        KObj { slots, gens, degrees }.sorted()
    }

    fn sorted(self) -> KObj {
        // slot order only matters for display; keep alcoves contiguous
        let order = self.alcoves();
        let mut idx: Vec<usize> = (0..self.slots.len()).collect();
        idx.sort_by_key(|&j| (order.iter().position(|a| a == &self.slots[j].alcove).unwrap(), j));
        KObj {
            slots: idx.iter().map(|&j| self.slots[j].clone()).collect(),
            gens: self.gens.iter().map(|g| idx.iter().map(|&j| g[j].clone()).collect()).collect(),
            degrees: self.degrees,
        }
    }

    /// Every component is homogeneous of the degree dictated by its generator and slot.
    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().zip(&self.degrees).all(|(g, &d)| {
            g.iter().zip(&self.slots).all(|(p, s)| p.is_zero() || (p.is_homogeneous() && p.grading() == Some(d + s.offset)))
        })
    }

    pub fn to_json(&self, r: &Ring) -> Value {
        let alcoves = self.alcoves();
        json!({
            "support": alcoves.iter().map(|a| json!({"alcove": r.d.coords(a), "rank": self.rank_at(a)})).collect::<Vec<_>>(),
            "slots": self.slots.iter().map(|s| json!({"alcove": r.d.coords(&s.alcove), "offset": s.offset})).collect::<Vec<_>>(),
            "basis": self.gens.iter().zip(&self.degrees).map(|(g, d)| json!({
                "degree": d,
                "components": g.iter().map(|p| json!({"num": p.to_text(), "den": vec![0; r.d.npos]})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `S_A(n)`: rank one on `{A}`, stalk `v^n`.
pub fn make_s_a(r: &Ring, a: &Alcove, shift: i32) -> KObj {
    KObj { slots: vec![Slot { alcove: a.clone(), offset: shift }], gens: vec![vec![r.one()]], degrees: vec![-shift] }
}

/// Free object `S^{alcoves}` with the standard basis.
pub fn free_on(r: &Ring, alcoves: &[Alcove]) -> KObj {
    let n = alcoves.len();
    KObj {
        slots: alcoves.iter().map(|a| Slot { alcove: a.clone(), offset: 0 }).collect(),
        gens: (0..n).map(|i| (0..n).map(|j| if i == j { r.one() } else { Poly::zero() }).collect()).collect(),
        degrees: vec![0; n],
    }
}

/// A linear form whose image modulo `alpha` is the coordinate used by `Ring::reduce_mod_root`.
fn lift_of_t(r: &Ring, root: usize) -> Poly {
    if r.nvars() == 1 {
        return r.one();
    }
    let w = &r.d.roots[root].weight;
    // x0 -> w1 t, x1 -> -w0 t
    if w[1] != 0 {
        Poly::var(r.f, 0).scale(&r.f.int(w[1]).inv())
    } else {
        Poly::var(r.f, 1).scale(&(-&r.f.int(w[0])).inv())
    }
}

/// Sub-lattice of `m` where slot `i` and slot `j` agree modulo the positive root `root`.
pub fn impose_congruence(r: &Ring, m: &KObj, i: usize, j: usize, root: usize) -> KObj {
    let q: Vec<Poly> = m.gens.iter().map(|g| r.reduce_mod_root(&(&g[i] - &g[j]), root)).collect();
    let Some(k) = (0..m.gens.len()).filter(|&t| !q[t].is_zero()).min_by_key(|&t| (m.degrees[t], t)) else {
        return m.clone();
    };
    let t = lift_of_t(r, root);
    let (qm, qc) = {
        let (mm, c) = q[k].leading().unwrap();
        (*mm, c.clone())
    };
    let mut gens = vec![];
    let mut degrees = vec![];
    for (t_idx, g) in m.gens.iter().enumerate() {
        if t_idx == k {
            continue;
        }
        if q[t_idx].is_zero() {
            gens.push(g.clone());
        } else {
            // q_t = c t^e q_k in one variable
            let (mm, c) = q[t_idx].leading().unwrap();
            let e = mm[0] + mm[1] - qm[0] - qm[1];
            let coef = t.pow(r.f, e).scale(&(c / &qc));
            gens.push(g.iter().zip(&m.gens[k]).map(|(x, y)| x - &(&coef * y)).collect());
        }
        degrees.push(m.degrees[t_idx]);
    }
    gens.push(m.gens[k].iter().map(|y| r.root(root) * y).collect());
    degrees.push(m.degrees[k] + 2);
    KObj { slots: m.slots.clone(), gens, degrees }
}

/// `Q_lambda`: tuples over the orbit `W'_lambda A_lambda^-` congruent across each reflection fixing `lambda`.
pub fn make_q_lambda(r: &Ring, lambda: &[i64]) -> Result<KObj> {
    let d = &r.d;
    let orbit = d.wlambda_orbit(lambda)?;
    let mut m = free_on(r, &orbit);
    for root in 0..d.npos {
        let n = d.pair_root(lambda, root);
        let refl = d.affine_reflection(root, n);
        for (i, a) in orbit.iter().enumerate() {
            let b = d.left_act(&refl, a);
            let j = orbit.iter().position(|x| x == &b).expect("orbit is stable");
            if i < j {
                m = impose_congruence(r, &m, i, j, root);
            }
        }
    }
    Ok(m)
}

/// `Q_{A,alpha}`: pairs `(f, g)` on `{A, alpha↑A}` with `f ≡ g mod alpha`.
pub fn make_q_a_alpha(r: &Ring, a: &Alcove, root: usize) -> KObj {
    let up = r.d.up(root, a);
    let m = free_on(r, &[a.clone(), up]);
    impose_congruence(r, &m, 0, 1, root)
}

/// `M * B_s`.
pub fn star_bs(r: &Ring, m: &KObj, s: FaceType) -> KObj {
    star_bs_with_delta(r, m, s, &r.delta_s(s))
}

pub fn star_bs_with_delta(r: &Ring, m: &KObj, s: FaceType, delta: &[i64]) -> KObj {
    let d = &r.d;
    let mut support: Vec<Alcove> = vec![];
    for a in m.alcoves() {
        for b in [a.clone(), d.right_act(&a, s)] {
            if !support.contains(&b) {
                support.push(b);
            }
        }
    }
    d.sort_by_length(&mut support);
    // slot map: new slot -> old slot index
    let mut slots = vec![];
    let mut origin = vec![];
    for a in &support {
        let as_ = d.right_act(a, s);
        for src in [a, &as_] {
            for j in m.slots_at(src) {
                slots.push(Slot { alcove: a.clone(), offset: m.slots[j].offset + 1 });
                origin.push(j);
            }
        }
    }
    let delta_poly = r.weight(delta);
    let delta_at: Vec<Poly> = slots.iter().map(|sl| r.eval_at(&delta_poly, &sl.alcove)).collect();
    let mut gens = vec![];
    let mut degrees = vec![];
    for (g, &deg) in m.gens.iter().zip(&m.degrees) {
        gens.push(origin.iter().map(|&j| g[j].clone()).collect());
        degrees.push(deg - 1);
        gens.push(origin.iter().zip(&delta_at).map(|(&j, dl)| dl * &g[j]).collect());
        degrees.push(deg + 1);
    }
    KObj { slots, gens, degrees }
}

pub fn star_word(r: &Ring, m: &KObj, word: &[FaceType]) -> KObj {
    let mut out = m.clone();
    for &s in word {
        out = star_bs(r, &out, s);
    }
    out
}

/// `Q_lambda * B_{s_1} * ... * B_{s_l}`.
pub fn bott_samelson(r: &Ring, lambda: &[i64], word: &[FaceType]) -> Result<KObj> {
    Ok(star_word(r, &make_q_lambda(r, lambda)?, word))
}

/// Character computed from the engine's stalks.
pub fn engine_char(r: &Ring, m: &KObj) -> Result<CharObj> {
    let mut c = CharObj::zero();
    for a in m.alcoves() {
        c.add(a.clone(), &sections::stalk(r, m, &a)?.grk());
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::{DatumName, RootDatum};
    use crate::scalar::Field;

    pub(crate) fn ring(n: DatumName) -> Ring {
        Ring::new(RootDatum::build(n), Field::RATIONALS).unwrap()
    }

    #[test]
    fn q_lambda_a1() {
        let r = ring(DatumName::A1);
        let q = make_q_lambda(&r, &[0]).unwrap();
        assert_eq!(q.num_gens(), 2);
        let mut degs = q.degrees.clone();
        degs.sort();
        assert_eq!(degs, vec![0, 2]);
        assert!(q.is_homogeneous());
    }

    #[test]
    fn q_lambda_ranks() {
        for n in DatumName::ALL {
            let r = ring(n);
            let q = make_q_lambda(&r, &vec![0; r.d.rank]).unwrap();
            assert_eq!(q.num_gens(), r.d.weyl_order());
            assert!(q.is_homogeneous());
            // every generator satisfies the congruences
            let orbit = q.alcoves();
            for root in 0..r.d.npos {
                let refl = r.d.affine_reflection(root, 0);
                for (i, a) in orbit.iter().enumerate() {
                    let j = orbit.iter().position(|x| x == &r.d.left_act(&refl, a)).unwrap();
                    for g in &q.gens {
                        assert!(r.is_congruent_mod_root(&g[i], &g[j], root));
                    }
                }
            }
        }
    }

    #[test]
    fn star_doubles_rank() {
        let r = ring(DatumName::A2);
        let q = make_q_lambda(&r, &[0, 0]).unwrap();
        let m = star_bs(&r, &q, FaceType(0));
        assert_eq!(m.num_gens(), 2 * q.num_gens());
        assert!(m.is_homogeneous());
    }
}
