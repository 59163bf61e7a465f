//! Checks of the gluing properties of a lattice: (S), (LE), standard filtration and (ES).
//!
//! Closed subsets are taken inside the support. (S) and (ES) are tested on principal
//! closed subsets `{A' >= A}` and unions of two of them.

use super::sections::{adapted_basis, coords_in_degree, multiples_in_degree, sections, sections_above, stalk};
use super::{KObj, Slot};
use crate::alcove::Alcove;
use crate::error::Result;
use crate::linalg;
use crate::poly::Poly;
use crate::symbolic::Ring;
use serde_json::{json, Value};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    S,
    LE,
    StandardFiltration,
    ES,
}

impl Property {
    pub const ALL: [Property; 4] = [Property::S, Property::LE, Property::StandardFiltration, Property::ES];

    pub fn name(&self) -> &'static str {
        match self {
            Property::S => "S",
            Property::LE => "LE",
            Property::StandardFiltration => "standard-filtration",
            Property::ES => "ES",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// Carries a witness.
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct Check {
    pub property: Property,
    pub status: Status,
    /// Number of instances examined.
    pub cases: usize,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn check(&self, p: Property) -> &Check {
        self.checks.iter().find(|c| c.property == p).expect("every property is checked")
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .checks
            .iter()
            .map(|c| {
                let (status, witness) = match &c.status {
                    Status::Pass => ("pass", None),
                    Status::Fail(w) => ("fail", Some(w.clone())),
                    Status::Skipped(w) => ("skipped", Some(w.clone())),
                };
                json!({"property": c.property.name(), "status": status, "cases": c.cases, "witness": witness})
            })
            .collect::<Vec<_>>())
    }
}

type Vecs = Vec<(Vec<Poly>, i32)>;

struct Ctx<'a> {
    r: &'a Ring,
    m: &'a KObj,
    alcoves: Vec<Alcove>,
    cache: HashMap<Vec<bool>, KObj>,
}

impl<'a> Ctx<'a> {
    fn new(r: &'a Ring, m: &'a KObj) -> Ctx<'a> {
        let mut alcoves = m.alcoves();
        r.d.sort_by_length(&mut alcoves);
        Ctx { r, m, alcoves, cache: HashMap::new() }
    }

    fn upset(&self, i: usize) -> Vec<bool> {
        self.alcoves.iter().map(|b| self.r.d.leq(&self.alcoves[i], b)).collect()
    }

    fn members(&self, mask: &[bool]) -> Vec<Alcove> {
        self.alcoves.iter().zip(mask).filter(|x| *x.1).map(|x| x.0.clone()).collect()
    }

    fn show(&self, mask: &[bool]) -> String {
        let v: Vec<Vec<i64>> = self.members(mask).iter().map(|a| self.r.d.coords(a)).collect();
        format!("{v:?}")
    }

    fn sections(&mut self, mask: &[bool]) -> Result<&KObj> {
        if !self.cache.contains_key(mask) {
            let s = sections(self.r, self.m, &self.members(mask))?;
            self.cache.insert(mask.to_vec(), s);
        }
        Ok(&self.cache[mask])
    }

    /// Generators of `M_I` padded with zeros to the full slot list.
    fn full_gens(&mut self, mask: &[bool]) -> Result<Vecs> {
        let inside: Vec<usize> = {
            let members = self.members(mask);
            (0..self.m.slots.len()).filter(|&j| members.contains(&self.m.slots[j].alcove)).collect()
        };
        let n = self.m.slots.len();
        let s = self.sections(mask)?;
        Ok(s.gens
            .iter()
            .zip(&s.degrees)
            .map(|(g, &d)| {
                let mut v = vec![Poly::zero(); n];
                for (k, &j) in inside.iter().enumerate() {
                    v[j] = g[k].clone();
                }
                (v, d)
            })
            .collect())
    }

    fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.alcoves.len();
        let d = &self.r.d;
        let mut out = vec![];
        for i in 0..n {
            for j in i + 1..n {
                if !d.leq(&self.alcoves[i], &self.alcoves[j]) && !d.leq(&self.alcoves[j], &self.alcoves[i]) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Whether the homogeneous vector `v` of degree `e` lies in the span of `gens`.
fn in_span(r: &Ring, slots: &[Slot], gens: &Vecs, v: &[Poly], e: i32) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    let all: Vec<usize> = (0..slots.len()).collect();
    let mut basis: Vec<Vec<crate::scalar::Scalar>> = vec![];
    for (g, d) in gens {
        for w in multiples_in_degree(r, g, *d, e) {
            basis.push(coords_in_degree(r, slots, &all, &w, e));
        }
    }
    let target = coords_in_degree(r, slots, &all, v, e);
    let width = target.len();
    let before = linalg::rank(&basis, width);
    basis.push(target);
    linalg::rank(&basis, width) == before
}

fn union(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| *x || *y).collect()
}

fn check_s(cx: &mut Ctx) -> Result<(Status, usize)> {
    let pairs = cx.incomparable_pairs();
    for &(i, j) in &pairs {
        let (i1, i2) = (cx.upset(i), cx.upset(j));
        let u = union(&i1, &i2);
        let mut sum = cx.full_gens(&i1)?;
        sum.extend(cx.full_gens(&i2)?);
        for (g, d) in cx.full_gens(&u)? {
            if !in_span(cx.r, &cx.m.slots, &sum, &g, d) {
                return Ok((
                    Status::Fail(format!(
                        "I1 = {}, I2 = {}: a generator of degree {d} of M_(I1 u I2) is not in M_I1 + M_I2",
                        cx.show(&i1),
                        cx.show(&i2)
                    )),
                    pairs.len(),
                ));
            }
        }
    }
    Ok((Status::Pass, pairs.len()))
}

fn check_standard(cx: &mut Ctx) -> Result<(Status, usize)> {
    for a in cx.alcoves.clone() {
        let st = stalk(cx.r, cx.m, &a)?;
        if !st.free {
            return Ok((
                Status::Fail(format!(
                    "stalk at {:?} is not graded free: generic rank {}, minimal generators in degrees {:?}",
                    cx.r.d.coords(&a),
                    st.rank,
                    st.degrees
                )),
                cx.alcoves.len(),
            ));
        }
    }
    Ok((Status::Pass, cx.alcoves.len()))
}

/// For each root, each orbit projection of each basis element must stay in `S^alpha ⊗ M`;
/// coordinates in the adapted basis decide this exactly.
fn check_le(cx: &mut Ctx) -> Result<(Status, usize)> {
    let r = cx.r;
    let ad = match adapted_basis(r, cx.m) {
        Ok(a) => a,
        Err(e) => return Ok((Status::Skipped(format!("needs an adapted basis: {e}")), 0)),
    };
    let inv = match ad.inverse(r) {
        Ok(i) => i,
        Err(e) => return Ok((Status::Skipped(format!("needs the generic inverse: {e}")), 0)),
    };
    let obj = &ad.obj;
    let mut cases = 0;
    for root in 0..r.d.npos {
        let mut orbits: Vec<Vec<Alcove>> = vec![];
        for a in &cx.alcoves {
            match orbits.iter_mut().find(|o| r.d.same_alpha_orbit(root, &o[0], a)) {
                Some(o) => o.push(a.clone()),
                None => orbits.push(vec![a.clone()]),
            }
        }
        if orbits.len() < 2 {
            continue;
        }
        for orbit in &orbits {
            let in_orbit: Vec<usize> = (0..obj.slots.len()).filter(|&s| orbit.contains(&obj.slots[s].alcove)).collect();
            for (h, hv) in obj.gens.iter().enumerate() {
                cases += 1;
                for g in 0..obj.num_gens() {
                    let mut t = r.frac_zero();
                    for &s in &in_orbit {
                        if !hv[s].is_zero() && !inv.x[g][s].num.is_zero() {
                            t = r.frac_add(&t, &r.frac_mul_poly(&inv.x[g][s], &hv[s]));
                        }
                    }
                    let ok = r.in_s_alpha(&t, root) && (inv.den[g].constant_value().is_some() || t.num.div_exact(&inv.den[g]).is_some());
                    if !ok {
                        let coords: Vec<Vec<i64>> = orbit.iter().map(|a| r.d.coords(a)).collect();
                        return Ok((
                            Status::Fail(format!(
                                "root {:?}: projection of basis element {h} onto the orbit {coords:?} is not in the localization",
                                r.d.roots[root].weight
                            )),
                            cases,
                        ));
                    }
                }
            }
        }
    }
    Ok((Status::Pass, cases))
}

/// Generators of the stalk of `x` at `a`, as vectors on the `a`-slots.
fn stalk_gens(r: &Ring, x: &KObj, a: &Alcove) -> Result<(Vec<Slot>, Vecs)> {
    let above = sections_above(r, x, a)?;
    let idx = above.slots_at(a);
    let slots = idx.iter().map(|&j| above.slots[j].clone()).collect();
    let gens = above.gens.iter().zip(&above.degrees).map(|(g, &d)| (idx.iter().map(|&j| g[j].clone()).collect(), d)).collect();
    Ok((slots, gens))
}

fn same_module(r: &Ring, slots: &[Slot], a: &Vecs, b: &Vecs) -> bool {
    a.iter().all(|(v, d)| in_span(r, slots, b, v, *d)) && b.iter().all(|(v, d)| in_span(r, slots, a, v, *d))
}

/// `M_I2 -> M_I1 -> M_(I1 \ I2)` for closed `I2 ⊂ I1`: on stalks at `A ∈ I2` the first map is
/// an equality, so exactness reduces to `(M_I1)_A = (M_(I1 \ I2))_A` for `A ∈ I1 \ I2`.
fn check_es(cx: &mut Ctx) -> Result<(Status, usize)> {
    let r = cx.r;
    let n = cx.alcoves.len();
    let mut bigs = vec![vec![true; n]];
    for (i, j) in cx.incomparable_pairs() {
        bigs.push(union(&cx.upset(i), &cx.upset(j)));
    }
    let mut cases = 0;
    for i1 in &bigs {
        for c in 0..n {
            let i2 = cx.upset(c);
            if !i2.iter().zip(i1).all(|(x, y)| !*x || *y) || &i2 == i1 {
                continue;
            }
            let m1 = cx.sections(i1)?.clone();
            let k: Vec<Alcove> = (0..n).filter(|&t| i1[t] && !i2[t]).map(|t| cx.alcoves[t].clone()).collect();
            // M_K as the projection of M_I1 onto the slots of K
            let keep: Vec<usize> = (0..m1.slots.len()).filter(|&j| k.contains(&m1.slots[j].alcove)).collect();
            let mk = KObj {
                slots: keep.iter().map(|&j| m1.slots[j].clone()).collect(),
                gens: m1.gens.iter().map(|g| keep.iter().map(|&j| g[j].clone()).collect()).collect(),
                degrees: m1.degrees.clone(),
            };
            for a in &k {
                cases += 1;
                let (slots, s1) = stalk_gens(r, &m1, a)?;
                let (_, sk) = stalk_gens(r, &mk, a)?;
                if !same_module(r, &slots, &s1, &sk) {
                    return Ok((
                        Status::Fail(format!(
                            "I1 = {}, I2 = {}, A = {:?}: stalk sequence is not exact",
                            cx.show(i1),
                            cx.show(&i2),
                            r.d.coords(a)
                        )),
                        cases,
                    ));
                }
            }
        }
    }
    Ok((Status::Pass, cases))
}

pub fn validate(r: &Ring, m: &KObj) -> Report {
    let mut cx = Ctx::new(r, m);
    let mut checks = vec![];
    for p in Property::ALL {
        let res = match p {
            Property::S => check_s(&mut cx),
            Property::LE => check_le(&mut cx),
            Property::StandardFiltration => check_standard(&mut cx),
            Property::ES => check_es(&mut cx),
        };
        let (status, cases) = res.unwrap_or_else(|e| (Status::Skipped(format!("undecided: {e}")), 0));
        checks.push(Check { property: p, status, cases });
    }
    Report { checks }
}

/// Deliberately broken lattices, one per property; each passes the other checks where possible.
pub mod corrupted {
    use super::super::{free_on, impose_congruence, KObj, Slot};
    use crate::error::Result;
    use crate::poly::Poly;
    use crate::symbolic::Ring;

    fn alc(r: &Ring, k: &[i64]) -> Result<crate::alcove::Alcove> {
        r.d.from_coords(k)
    }

    /// Two incomparable alcoves glued by a congruence: fails (S) and (ES).
    pub fn gluing(r: &Ring, a: &[i64], b: &[i64], root: usize) -> Result<KObj> {
        let m = free_on(r, &[alc(r, a)?, alc(r, b)?]);
        Ok(impose_congruence(r, &m, 0, 1, root))
    }

    /// A congruence modulo a root across alcoves in different orbits for that root: fails (LE).
    pub fn localization(r: &Ring, a: &[i64], b: &[i64], root: usize) -> Result<KObj> {
        gluing(r, a, b, root)
    }

    /// Generators `(x, 0)` and `(y, 1)` on two alcoves: the stalk at the first is the ideal `(x, y)`.
    pub fn non_free_stalk(r: &Ring, a: &[i64], b: &[i64]) -> Result<KObj> {
        let (x, y) = (r.root(0).clone(), r.root(1).clone());
        Ok(KObj {
            slots: vec![Slot { alcove: alc(r, a)?, offset: 0 }, Slot { alcove: alc(r, b)?, offset: 2 }],
            gens: vec![vec![x, Poly::zero()], vec![y, r.one()]],
            degrees: vec![2, 2],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kobj::{make_q_lambda, star_bs};
    use crate::root_datum::{DatumName, RootDatum};
    use crate::scalar::Field;

    fn ring(n: DatumName) -> Ring {
        Ring::new(RootDatum::build(n), Field::RATIONALS).unwrap()
    }

    #[test]
    fn shipped_objects_pass() {
        for n in [DatumName::A1, DatumName::A1xA1, DatumName::B2] {
            let r = ring(n);
            let q = make_q_lambda(&r, &vec![0; r.d.rank]).unwrap();
            let rep = validate(&r, &q);
            assert!(rep.passed(), "{n:?} {:?}", rep.checks);
            let s = crate::alcove::FaceType(0);
            let rep = validate(&r, &star_bs(&r, &q, s));
            assert!(rep.passed(), "{n:?} {:?}", rep.checks);
        }
    }

    fn fails(rep: &Report, p: Property) -> bool {
        matches!(rep.check(p).status, Status::Fail(_))
    }

    #[test]
    fn corrupted_objects_fail() {
        let r = ring(DatumName::A1xA1);
        let glued = validate(&r, &corrupted::gluing(&r, &[1, 2], &[2, 1], 0).unwrap());
        assert!(fails(&glued, Property::S) && fails(&glued, Property::ES));
        assert_eq!(
            glued.check(Property::S).status,
            Status::Fail("I1 = [[1, 2]], I2 = [[2, 1]]: a generator of degree 0 of M_(I1 u I2) is not in M_I1 + M_I2".into())
        );
        let loc = validate(&r, &corrupted::localization(&r, &[1, 1], &[1, 2], 0).unwrap());
        assert!(fails(&loc, Property::LE));
        for p in [Property::S, Property::StandardFiltration, Property::ES] {
            assert_eq!(loc.check(p).status, Status::Pass);
        }
        // the same congruence across an orbit of the other root is a legitimate object
        assert!(validate(&r, &corrupted::localization(&r, &[1, 1], &[1, 2], 1).unwrap()).passed());
        let nf = validate(&r, &corrupted::non_free_stalk(&r, &[1, 1], &[1, 2]).unwrap());
        assert!(fails(&nf, Property::StandardFiltration));
    }
}
