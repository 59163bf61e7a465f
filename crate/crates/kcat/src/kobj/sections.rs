//! Sections `M_I`, stalks `M_{A}`, and the block-triangular adapted basis.
//!
//! Everything is computed by peeling: removing a minimal alcove `B` from the
//! support means passing to the kernel of the projection onto the `B`-slots.

use super::{KObj, Slot};
use crate::alcove::Alcove;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{self, poly_det, Mat};
use crate::poly::{monomials, Poly};
use crate::symbolic::{RootFraction, Ring};

/// Graded stalk data: degrees of a minimal generating set of the image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stalk {
    pub degrees: Vec<i32>,
    pub free: bool,
    pub rank: usize,
}

impl Stalk {
    pub fn grk(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &d in &self.degrees {
            p = &p + &LaurentPoly::v_pow(-d);
        }
        p
    }
}

enum Membership {
    Member(Vec<Poly>),
    Independent,
    Dependent,
}

fn sub_matrix(m: &[Vec<Poly>], rows: &[usize], cols: &[usize]) -> Vec<Vec<Poly>> {
    rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect()
}

/// Evaluate a polynomial at an integer point.
pub(crate) fn eval_point(r: &Ring, p: &Poly, pt: &[i64]) -> crate::scalar::Scalar {
    let mut acc = r.f.zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (i, &e) in m.iter().enumerate() {
            if e > 0 {
                t = &t * &r.f.int(pt[i]).pow(e);
            }
        }
        acc += &t;
    }
    acc
}

pub(crate) const POINTS: [[i64; 2]; 4] = [[3, 7], [11, -5], [-13, 17], [19, 23]];

/// Rows `R` with `det K[R] != 0` for a column-independent polynomial matrix `K` (rows x m).
pub(crate) fn independent_rows(r: &Ring, k: &[Vec<Poly>], m: usize) -> Option<Vec<usize>> {
    for pt in POINTS {
        // transpose evaluated: m x rows
        let t: Mat = (0..m).map(|j| k.iter().map(|row| eval_point(r, &row[j], &pt)).collect()).collect();
        let mut a = t.clone();
        let piv = linalg::rref(&mut a, k.len());
        if piv.len() == m {
            let rows = piv;
            if !poly_det(r.f, &sub_matrix(k, &rows, &(0..m).collect::<Vec<_>>())).is_zero() {
                return Some(rows);
            }
        }
    }
    None
}

/// Express `target` in the `S`-span of the columns `kept` (which are independent).
fn express(r: &Ring, kept: &[Vec<Poly>], target: &[Poly]) -> Membership {
    let m = kept.len();
    if m == 0 {
        return Membership::Independent;
    }
    let nrows = target.len();
    // column-major kept -> row-major matrix K (nrows x m)
    let k: Vec<Vec<Poly>> = (0..nrows).map(|i| (0..m).map(|j| kept[j][i].clone()).collect()).collect();
    let Some(rows) = independent_rows(r, &k, m) else { return Membership::Dependent };
    let cols: Vec<usize> = (0..m).collect();
    let kr = sub_matrix(&k, &rows, &cols);
    let det = poly_det(r.f, &kr);
    let mut nums = vec![];
    for i in 0..m {
        let mut mi = kr.clone();
        for (t, &row) in rows.iter().enumerate() {
            mi[t][i] = target[row].clone();
        }
        nums.push(poly_det(r.f, &mi));
    }
    for row in 0..nrows {
        let mut lhs = Poly::zero();
        for i in 0..m {
            lhs = &lhs + &(&nums[i] * &k[row][i]);
        }
        if lhs != &det * &target[row] {
            return Membership::Independent;
        }
    }
    let mut q = vec![];
    for n in &nums {
        match n.div_exact(&det) {
            Some(x) => q.push(x),
            None => return Membership::Dependent,
        }
    }
    Membership::Member(q)
}

/// Result of removing the slots of one alcove.
pub(crate) struct PeelOne {
    /// Generators (full component vectors) whose projections form a basis of the image.
    pub kept: Vec<(Vec<Poly>, i32)>,
    /// Kernel generators (full component vectors, zero on the removed slots).
    pub kernel: Vec<(Vec<Poly>, i32)>,
    pub free: bool,
}

fn peel_one(r: &Ring, m: &KObj, b: &Alcove) -> Result<PeelOne> {
    let bs = m.slots_at(b);
    let mut order: Vec<usize> = (0..m.num_gens()).collect();
    order.sort_by_key(|&j| (m.degrees[j], j));
    let mut kept: Vec<usize> = vec![];
    let mut kept_proj: Vec<Vec<Poly>> = vec![];
    let mut kernel = vec![];
    let mut ok = true;
    for &j in &order {
        let p: Vec<Poly> = bs.iter().map(|&s| m.gens[j][s].clone()).collect();
        if p.iter().all(|x| x.is_zero()) {
            kernel.push((m.gens[j].clone(), m.degrees[j]));
            continue;
        }
        match express(r, &kept_proj, &p) {
            Membership::Member(q) => {
                let mut v = m.gens[j].clone();
                for (qi, &k) in q.iter().zip(&kept) {
                    if qi.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(&m.gens[k]) {
                        *x = &*x - &(qi * y);
                    }
                }
                kernel.push((v, m.degrees[j]));
            }
            Membership::Independent => {
                kept.push(j);
                kept_proj.push(p);
            }
            Membership::Dependent => {
                ok = false;
                break;
            }
        }
    }
    if ok {
        return Ok(PeelOne {
            kept: kept.iter().map(|&k| (m.gens[k].clone(), m.degrees[k])).collect(),
            kernel,
            free: true,
        });
    }
    let kernel = kernel_degreewise(r, m, &bs)?;
    Ok(PeelOne { kept: vec![], kernel, free: false })
}

/// Coordinates of a homogeneous vector of degree `e` in the (slot, monomial) basis.
pub(crate) fn coords_in_degree(r: &Ring, slots: &[Slot], which: &[usize], v: &[Poly], e: i32) -> Vec<crate::scalar::Scalar> {
    let mut out = vec![];
    for &j in which {
        let g = e + slots[j].offset;
        if g < 0 || g % 2 != 0 {
            continue;
        }
        for mono in monomials(r.nvars(), (g / 2) as u32) {
            out.push(v[j].coeff(&mono).cloned().unwrap_or_else(|| r.f.zero()));
        }
    }
    out
}

/// All products `mono * v` with `mono` of the right degree to land in degree `e`.
pub(crate) fn multiples_in_degree(r: &Ring, v: &[Poly], deg: i32, e: i32) -> Vec<Vec<Poly>> {
    let diff = e - deg;
    if diff < 0 || diff % 2 != 0 {
        return vec![];
    }
    monomials(r.nvars(), (diff / 2) as u32)
        .into_iter()
        .map(|mono| {
            let t = Poly::monomial(mono, r.f.one());
            v.iter().map(|x| &t * x).collect()
        })
        .collect()
}

/// Degree bound for kernel computations by linear algebra.
pub fn default_dmax(m: &KObj) -> i32 {
    let top = m.degrees.iter().copied().max().unwrap_or(0);
    top + 2 * m.slots.len() as i32 + 4
}

/// Kernel of the projection onto `kill` computed degree by degree, returning minimal generators.
fn kernel_degreewise(r: &Ring, m: &KObj, kill: &[usize]) -> Result<Vec<(Vec<Poly>, i32)>> {
    let all: Vec<usize> = (0..m.slots.len()).collect();
    let lo = m.degrees.iter().copied().min().unwrap_or(0);
    let hi = default_dmax(m);
    let mut found: Vec<(Vec<Poly>, i32)> = vec![];
    let mut e = lo;
    while e <= hi {
        // spanning set of M in degree e
        let mut span: Vec<Vec<Poly>> = vec![];
        for (g, &dg) in m.gens.iter().zip(&m.degrees) {
            span.extend(multiples_in_degree(r, g, dg, e));
        }
        if span.is_empty() {
            e += 1;
            continue;
        }
        // kernel of span-coefficients -> killed coordinates
        let cols: Vec<Vec<crate::scalar::Scalar>> = span.iter().map(|v| coords_in_degree(r, &m.slots, kill, v, e)).collect();
        let nrows = cols.first().map(|c| c.len()).unwrap_or(0);
        let mat: Mat = (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let ker = linalg::kernel(r.f, &mat, span.len());
        let elems: Vec<Vec<Poly>> = ker
            .iter()
            .map(|c| {
                let mut v = vec![Poly::zero(); m.slots.len()];
                for (ci, s) in c.iter().zip(&span) {
                    if ci.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(s) {
                        *x = &*x + &y.scale(ci);
                    }
                }
                v
            })
            .collect();
        // extend the span of multiples of earlier generators
        let mut basis: Vec<Vec<crate::scalar::Scalar>> = vec![];
        for (g, dg) in &found {
            for v in multiples_in_degree(r, g, *dg, e) {
                basis.push(coords_in_degree(r, &m.slots, &all, &v, e));
            }
        }
        let width = coords_in_degree(r, &m.slots, &all, &vec![Poly::zero(); m.slots.len()], e).len();
        let mut current = linalg::rank(&basis, width);
        for v in elems {
            let c = coords_in_degree(r, &m.slots, &all, &v, e);
            basis.push(c);
            let nr = linalg::rank(&basis, width);
            if nr > current {
                current = nr;
                found.push((v, e));
            } else {
                basis.pop();
            }
        }
        e += 1;
    }
    Ok(found)
}

/// Minimal generator degrees and generic rank of the submodule of `S^{slots}` generated by `vecs`.
fn image_stats(r: &Ring, slots: &[Slot], vecs: &[(Vec<Poly>, i32)]) -> (Vec<i32>, usize) {
    let all: Vec<usize> = (0..slots.len()).collect();
    let lo = vecs.iter().map(|v| v.1).min().unwrap_or(0);
    let hi = vecs.iter().map(|v| v.1).max().unwrap_or(0);
    let mut mins: Vec<(Vec<Poly>, i32)> = vec![];
    for e in lo..=hi {
        let mut basis = vec![];
        for (g, dg) in &mins {
            for v in multiples_in_degree(r, g, *dg, e) {
                basis.push(coords_in_degree(r, slots, &all, &v, e));
            }
        }
        let width = coords_in_degree(r, slots, &all, &vec![Poly::zero(); slots.len()], e).len();
        let mut cur = linalg::rank(&basis, width);
        for (v, dv) in vecs.iter().filter(|v| v.1 == e) {
            basis.push(coords_in_degree(r, slots, &all, v, e));
            let nr = linalg::rank(&basis, width);
            if nr > cur {
                cur = nr;
                mins.push((v.clone(), *dv));
            } else {
                basis.pop();
            }
        }
    }
    // generic rank by evaluation
    let mut rank = 0;
    for pt in POINTS {
        let mat: Mat = vecs.iter().map(|(v, _)| v.iter().map(|p| eval_point(r, p, &pt)).collect()).collect();
        rank = rank.max(linalg::rank(&mat, slots.len()));
    }
    (mins.iter().map(|m| m.1).collect(), rank)
}

fn drop_slots(m: &KObj, kill: &[usize], gens: Vec<(Vec<Poly>, i32)>) -> KObj {
    let keep: Vec<usize> = (0..m.slots.len()).filter(|j| !kill.contains(j)).collect();
    KObj {
        slots: keep.iter().map(|&j| m.slots[j].clone()).collect(),
        gens: gens.iter().map(|(g, _)| keep.iter().map(|&j| g[j].clone()).collect()).collect(),
        degrees: gens.iter().map(|g| g.1).collect(),
    }
}

/// `M_I` for a set `I` closed upwards within the support; alcoves of the support outside `I` are peeled.
pub fn sections(r: &Ring, m: &KObj, i: &[Alcove]) -> Result<KObj> {
    let mut out = m.clone();
    let mut remove: Vec<Alcove> = m.alcoves().into_iter().filter(|a| !i.contains(a)).collect();
    r.d.sort_by_length(&mut remove);
    for b in remove {
        let p = peel_one(r, &out, &b)?;
        let kill = out.slots_at(&b);
        out = drop_slots(&out, &kill, p.kernel);
    }
    Ok(out)
}

/// `M_{A' >= A}` within the support.
pub fn sections_above(r: &Ring, m: &KObj, a: &Alcove) -> Result<KObj> {
    let above: Vec<Alcove> = m.alcoves().into_iter().filter(|x| r.d.leq(a, x)).collect();
    sections(r, m, &above)
}

/// Stalk `M_{A}` as the image of `M_{>= A}` in the `A`-slots.
pub fn stalk(r: &Ring, m: &KObj, a: &Alcove) -> Result<Stalk> {
    if m.rank_at(a) == 0 {
        return Ok(Stalk { degrees: vec![], free: true, rank: 0 });
    }
    let above = sections_above(r, m, a)?;
    stalk_of_minimal(r, &above, a)
}

/// Image of `m` in the slots of `a`, assuming `a` is minimal in the support of `m`.
pub(crate) fn stalk_of_minimal(r: &Ring, m: &KObj, a: &Alcove) -> Result<Stalk> {
    let p = peel_one(r, m, a)?;
    let bs = m.slots_at(a);
    if p.free {
        let mut degrees: Vec<i32> = p.kept.iter().map(|k| k.1).collect();
        degrees.sort();
        let rank = degrees.len();
        return Ok(Stalk { degrees, free: true, rank });
    }
    let slots: Vec<Slot> = bs.iter().map(|&j| m.slots[j].clone()).collect();
    let vecs: Vec<(Vec<Poly>, i32)> = m.gens.iter().zip(&m.degrees).map(|(g, d)| (bs.iter().map(|&j| g[j].clone()).collect(), *d)).collect();
    let (mut degrees, rank) = image_stats(r, &slots, &vecs);
    degrees.sort();
    let free = degrees.len() == rank;
    Ok(Stalk { degrees, free, rank })
}

/// Basis adapted to a linear extension of the order: generators grouped in blocks,
/// block `t` vanishing on the alcoves of earlier blocks.
#[derive(Clone, Debug)]
pub struct Adapted {
    /// Object with slots and generators reordered by blocks.
    pub obj: KObj,
    /// `(alcove, slot indices, generator indices)` per block, in peel order.
    pub blocks: Vec<(Alcove, Vec<usize>, Vec<usize>)>,
}

pub fn adapted_basis(r: &Ring, m: &KObj) -> Result<Adapted> {
    let m = &length_sorted(r, m);
    let mut order = m.alcoves();
    r.d.sort_by_length(&mut order);
    let mut cur = m.clone();
    let mut kept_all: Vec<(Alcove, Vec<(Vec<Poly>, i32)>)> = vec![];
    for b in &order {
        let p = peel_one(r, &cur, b)?;
        if !p.free {
            return Err(Error::NotStandard(format!("stalk at {:?} is not free", r.d.coords(b))));
        }
        // kept vectors are in the coordinates of `cur`; lift back to full slot list of `m`
        let kill = cur.slots_at(b);
        kept_all.push((b.clone(), p.kept.iter().map(|(v, d)| (v.clone(), *d)).collect()));
        cur = drop_slots(&cur, &kill, p.kernel);
    }
    // rebuild full vectors: each step's vectors live on the slots remaining at that step
    let mut slots: Vec<Slot> = vec![];
    let mut blocks = vec![];
    let mut gens: Vec<Vec<Poly>> = vec![];
    let mut degrees = vec![];
    for b in &order {
        let idx: Vec<usize> = m.slots_at(b);
        let start = slots.len();
        slots.extend(idx.iter().map(|&j| m.slots[j].clone()));
        blocks.push((b.clone(), (start..slots.len()).collect::<Vec<usize>>(), vec![]));
    }
    let total = slots.len();
    for (t, (_, kept)) in kept_all.iter().enumerate() {
        // at step t the remaining slots are the blocks t.. in order
        let offset: usize = blocks[..t].iter().map(|b| b.1.len()).sum();
        for (v, d) in kept {
            let mut full = vec![Poly::zero(); total];
            for (k, x) in v.iter().enumerate() {
                full[offset + k] = x.clone();
            }
            blocks[t].2.push(gens.len());
            gens.push(full);
            degrees.push(*d);
        }
    }
    Ok(Adapted { obj: KObj { slots, gens, degrees }, blocks })
}

/// Slot order of `m` after sorting by length, keeping within-alcove order; this is the slot order of `adapted_basis`.
pub fn length_sorted(r: &Ring, m: &KObj) -> KObj {
    let mut order = m.alcoves();
    r.d.sort_by_length(&mut order);
    let mut idx = vec![];
    for a in &order {
        idx.extend(m.slots_at(a));
    }
    KObj {
        slots: idx.iter().map(|&j| m.slots[j].clone()).collect(),
        gens: m.gens.iter().map(|g| idx.iter().map(|&j| g[j].clone()).collect()).collect(),
        degrees: m.degrees.clone(),
    }
}

pub type FracMat = Vec<Vec<RootFraction>>;

/// `P^{-1}` as `x[g][s] / den[g]`: root denominators in `x`, the rest of each block determinant in `den`.
#[derive(Clone, Debug)]
pub struct ScaledInverse {
    pub x: FracMat,
    pub den: Vec<Poly>,
}

/// Inverse of a square polynomial matrix as `Y / q` with `Y` over root fractions.
pub fn invert_root_matrix(r: &Ring, h: &[Vec<Poly>]) -> Result<(FracMat, Poly)> {
    let n = h.len();
    let det = poly_det(r.f, h);
    if det.is_zero() {
        return Err(Error::NonTriangularBasis("singular diagonal block".into()));
    }
    let (roots, mut q) = r.split_root_part(&det);
    let lead = q.leading().map(|(_, c)| c.clone()).unwrap();
    q = q.scale(&lead.inv());
    let denom = r.root_monomial(&roots).scale(&lead);
    let mut out = vec![vec![r.frac_zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // cofactor C_ji
            let rows: Vec<usize> = (0..n).filter(|&x| x != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&x| x != i).collect();
            let minor = poly_det(r.f, &sub_matrix(h, &rows, &cols));
            let c = if (i + j) % 2 == 0 { minor } else { -&minor };
            out[i][j] = r.frac_div_root_monomial(&r.frac(c), &denom)?;
        }
    }
    Ok((out, q))
}

fn product(f: crate::scalar::Field, ps: &[Poly]) -> Poly {
    ps.iter().fold(Poly::one(f), |acc, p| &acc * p)
}

impl Adapted {
    /// `P^{-1}` (generators x slots) by block forward substitution.
    pub fn inverse(&self, r: &Ring) -> Result<ScaledInverse> {
        let m = &self.obj;
        let ng = m.num_gens();
        let ns = m.slots.len();
        if ng != ns {
            return Err(Error::NotStandard("lattice does not have full generic rank".into()));
        }
        let mut hinv: Vec<FracMat> = vec![];
        let mut qs: Vec<Poly> = vec![];
        for (_, sl, gl) in &self.blocks {
            let h: Vec<Vec<Poly>> = sl.iter().map(|&s| gl.iter().map(|&g| m.gens[g][s].clone()).collect()).collect();
            let (y, q) = invert_root_matrix(r, &h)?;
            hinv.push(y);
            qs.push(q);
        }
        // with Q_t = q_0 ... q_t, rows of block t are scaled by Q_t
        let mut x: FracMat = vec![vec![r.frac_zero(); ns]; ng];
        let mut den = vec![Poly::zero(); ng];
        for (t, (_, st, gt)) in self.blocks.iter().enumerate() {
            let before = product(r.f, &qs[..t]);
            for &g in gt {
                den[g] = &before * &qs[t];
            }
            for (a, &g) in gt.iter().enumerate() {
                for (b, &s) in st.iter().enumerate() {
                    x[g][s] = r.frac_mul_poly(&hinv[t][a][b], &before);
                }
            }
            for u in t + 1..self.blocks.len() {
                let (_, su, gu) = &self.blocks[u];
                // y = sum_{t <= v < u} P[S_u, G_v] X~[G_v, S_t] Q_{u-1}/Q_v
                for &s in st {
                    let mut y: Vec<RootFraction> = vec![r.frac_zero(); su.len()];
                    for v in t..u {
                        let ratio = product(r.f, &qs[v + 1..u]);
                        for &gv in &self.blocks[v].2 {
                            if x[gv][s].num.is_zero() {
                                continue;
                            }
                            let xv = r.frac_mul_poly(&x[gv][s], &ratio);
                            for (k, &row) in su.iter().enumerate() {
                                let p = &m.gens[gv][row];
                                if !p.is_zero() {
                                    y[k] = r.frac_add(&y[k], &r.frac_mul_poly(&xv, p));
                                }
                            }
                        }
                    }
                    for (a, &g) in gu.iter().enumerate() {
                        let mut acc = r.frac_zero();
                        for (k, yk) in y.iter().enumerate() {
                            if !yk.num.is_zero() {
                                acc = r.frac_add(&acc, &r.frac_mul(&hinv[u][a][k], yk));
                            }
                        }
                        x[g][s] = r.frac_neg(&acc);
                    }
                }
            }
        }
        Ok(ScaledInverse { x, den })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kobj::tests::ring;
    use crate::kobj::{make_q_lambda, make_s_a, star_bs};
    use crate::root_datum::DatumName;

    #[test]
    fn a1_q0_stalks() {
        let r = ring(DatumName::A1);
        let q = make_q_lambda(&r, &[0]).unwrap();
        let a = |n: i64| r.d.from_coords(&[n + 1]).unwrap();
        assert_eq!(stalk(&r, &q, &a(-1)).unwrap().grk(), LaurentPoly::one());
        assert_eq!(stalk(&r, &q, &a(0)).unwrap().grk(), LaurentPoly::v_pow(-2));
        let above = sections(&r, &q, &[a(0)]).unwrap();
        assert_eq!(above.num_gens(), 1);
        assert_eq!(above.degrees, vec![2]);
        assert_eq!(sections(&r, &q, &[]).unwrap().num_gens(), 0);
        assert_eq!(sections(&r, &q, &[a(-1), a(0)]).unwrap().num_gens(), 2);
    }

    #[test]
    fn s_a_stalk() {
        let r = ring(DatumName::A2);
        let m = make_s_a(&r, &r.d.fund(), 3);
        assert_eq!(stalk(&r, &m, &r.d.fund()).unwrap().grk(), LaurentPoly::v_pow(3));
    }

    #[test]
    fn adapted_inverse_is_inverse() {
        let r = ring(DatumName::B2);
        let q = make_q_lambda(&r, &[0, 0]).unwrap();
        let m = star_bs(&r, &q, crate::alcove::FaceType(1));
        let ad = adapted_basis(&r, &m).unwrap();
        let inv = ad.inverse(&r).unwrap();
        assert!(inv.den.iter().all(|q| q.constant_value().is_some_and(|c| c.is_one())));
        let x = inv.x;
        let n = ad.obj.num_gens();
        for i in 0..n {
            for j in 0..n {
                let mut acc = r.frac_zero();
                for k in 0..n {
                    acc = r.frac_add(&acc, &r.frac_mul_poly(&x[i][k], &ad.obj.gens[j][k]));
                }
                let expect = if i == j { r.frac(r.one()) } else { r.frac_zero() };
                assert_eq!(acc, expect);
            }
        }
    }
}
