//! Degree-zero endomorphism algebras, idempotents and Krull-Schmidt decompositions.
//!
//! Degree-zero maps act on the top `k ⊗_S M` through their constant blocks; the kernel of
//! that action is nilpotent, so idempotents are found on the top and lifted by
//! `e ↦ 3e² − 2e³`.

use super::hom::{compose, hom_maps, prepare, CMat, Prepared};
use super::sections::{eval_point, POINTS};
use super::{engine_char, make_q_lambda, star_bs, KObj, Slot};
use crate::alcove::FaceType;
use std::collections::HashMap;
use crate::alcove::Alcove;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::poly::{gcd_homogeneous, Poly};
use crate::symbolic::{RootFraction, Ring};
use crate::upoly::UPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct SplitOptions {
    pub seed: u64,
    /// Random elements tried before giving up on a non-local algebra.
    pub tries: usize,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions { seed: 0x5eed, tries: 64 }
    }
}

/// `End⁰(M)` with a basis and the action of each basis element on the top.
pub struct EndAlgebra {
    pub prep: Prepared,
    pub basis: Vec<CMat>,
    tops: Vec<Mat>,
}

/// Constant blocks between generators of equal degree.
pub fn top(r: &Ring, m: &KObj, c: &CMat) -> Mat {
    let n = m.num_gens();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if m.degrees[i] == m.degrees[j] && !c[j][i].is_zero() {
                        c[j][i].constant_value().expect("degree-zero block is constant")
                    } else {
                        r.f.zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn identity(r: &Ring, n: usize) -> CMat {
    (0..n).map(|j| (0..n).map(|i| if i == j { r.one() } else { Poly::zero() }).collect()).collect()
}

fn lin_comb(terms: &[(crate::scalar::Scalar, &CMat)], n: usize, k: usize) -> CMat {
    let mut out = vec![vec![Poly::zero(); k]; n];
    for (c, m) in terms {
        if c.is_zero() {
            continue;
        }
        for j in 0..n {
            for i in 0..k {
                if !m[j][i].is_zero() {
                    out[j][i] = &out[j][i] + &m[j][i].scale(c);
                }
            }
        }
    }
    out
}

fn eval_upoly(r: &Ring, u: &UPoly, b: &CMat) -> CMat {
    let n = b.len();
    let id = identity(r, n);
    let mut acc = vec![vec![Poly::zero(); n]; n];
    for c in u.c.iter().rev() {
        let prod = compose(&acc, b);
        acc = lin_comb(&[(r.f.one(), &prod), (c.clone(), &id)], n, n);
    }
    acc
}

/// Lift an idempotent modulo a nilpotent ideal.
pub fn newton_lift(r: &Ring, e: &CMat) -> Result<CMat> {
    let n = e.len();
    let mut e = e.clone();
    for _ in 0..64 {
        let e2 = compose(&e, &e);
        if e2 == e {
            return Ok(e);
        }
        let e3 = compose(&e2, &e);
        e = lin_comb(&[(r.f.int(3), &e2), (r.f.int(-2), &e3)], n, n);
    }
    Err(Error::BoundExceeded("idempotent lifting did not converge".into()))
}

impl EndAlgebra {
    pub fn new(r: &Ring, m: &KObj) -> Result<EndAlgebra> {
        let prep = prepare(r, m)?;
        let basis = hom_maps(r, &prep, &prep, 0, false);
        let tops = basis.iter().map(|c| top(r, prep.obj(), c)).collect();
        Ok(EndAlgebra { prep, basis, tops })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `dim End⁰/N` for the radical `N`, from the rank of the trace form on the top.
    pub fn semisimple_dim(&self, r: &Ring) -> Result<usize> {
        let n = self.prep.obj().num_gens();
        if r.f.p != 0 && r.f.p <= n as u64 {
            return Err(Error::BoundExceeded(format!("trace form needs characteristic above {}", n)));
        }
        let k = self.tops.len();
        let prods: Vec<Vec<Mat>> = self.tops.iter().map(|a| self.tops.iter().map(|b| linalg::mat_mul(r.f, a, b)).collect()).collect();
        let gram: Mat = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        let mut t = r.f.zero();
                        for i in 0..n {
                            t += &prods[a][b][i][i];
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        Ok(linalg::rank(&gram, k))
    }

    /// A nontrivial idempotent, found from the spectral decomposition of a random element.
    pub fn find_idempotent(&self, r: &Ring, opts: &SplitOptions) -> Result<CMat> {
        let n = self.prep.obj().num_gens();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.tries {
            let coeffs: Vec<crate::scalar::Scalar> = (0..self.dim()).map(|_| r.f.int(rng.gen_range(-3..=3))).collect();
            let terms: Vec<_> = coeffs.iter().cloned().zip(self.basis.iter()).collect();
            let b = lin_comb(&terms, n, n);
            let tb = top(r, self.prep.obj(), &b);
            let chi = UPoly::new(r.f, linalg::char_poly(r.f, &tb));
            for lam in chi.roots()? {
                let m = chi.multiplicity(&lam);
                if m == n {
                    break;
                }
                let lin = UPoly::linear(r.f, &lam);
                let mut pw = UPoly::constant(r.f, r.f.one());
                for _ in 0..m {
                    pw = pw.mul(&lin);
                }
                let h = chi.divrem(&pw).0;
                let (g, s, _) = h.ext_gcd(&pw);
                debug_assert_eq!(g.deg(), Some(0));
                let ep = s.mul(&h).rem(&chi);
                let e = eval_upoly(r, &ep, &b);
                return newton_lift(r, &e);
            }
        }
        Err(Error::SemisimpleQuotientNotSplit)
    }
}

/// The image `e(M)` as an object, through the diagonal blocks of `e` over the fraction field.
/// Slot coordinates are projections of those blocks scaled by polynomials, so the result is
/// isomorphic to `e(M)` but its generic stalks need not be unimodular over `S^∅`.
pub fn summand(r: &Ring, prep: &Prepared, e: &CMat) -> Result<KObj> {
    let m = prep.obj();
    let ng = m.num_gens();
    let inv = prep.ad.inverse(r)?;
    // work with total * P^{-1}, which has only root denominators
    let total = inv.den.iter().fold(r.one(), |acc, q| if q.constant_value().is_some() { acc } else { &acc * q });
    let scale: Vec<Poly> = inv.den.iter().map(|q| total.div_exact(q).expect("prefix product divides")).collect();
    let extra_shift = total.grading().unwrap_or(0);
    let mut t = top(r, m, e);
    let chosen = linalg::rref(&mut t, ng);
    if chosen.is_empty() {
        return Ok(KObj::zero());
    }
    // v[g] = e(g) in ambient coordinates
    let v: Vec<Vec<Poly>> = (0..ng)
        .map(|g| {
            (0..m.slots.len())
                .map(|s| {
                    let mut acc = Poly::zero();
                    for j in 0..ng {
                        if !e[j][g].is_zero() && !m.gens[j][s].is_zero() {
                            acc = &acc + &(&e[j][g] * &m.gens[j][s]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut slots = vec![];
    let mut rows: Vec<Vec<Poly>> = vec![];
    for a in m.alcoves() {
        let sa = m.slots_at(&a);
        // diagonal block total * D_A[s'][s] = sum_g v[g][s'] total P^{-1}[g][s]
        let block: Vec<Vec<RootFraction>> = sa
            .iter()
            .map(|&sp| {
                sa.iter()
                    .map(|&s| {
                        let mut acc = r.frac_zero();
                        for g in 0..ng {
                            if !v[g][sp].is_zero() && !inv.x[g][s].num.is_zero() {
                                acc = r.frac_add(&acc, &r.frac_mul_poly(&inv.x[g][s], &(&v[g][sp] * &scale[g])));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let mut cleared: Vec<(Vec<Poly>, i32)> = vec![];
        for (bi, &sp) in sa.iter().enumerate() {
            let w: Vec<RootFraction> = chosen
                .iter()
                .map(|&i| {
                    let mut acc = r.frac_zero();
                    for (bj, &s) in sa.iter().enumerate() {
                        if !v[i][s].is_zero() && !block[bi][bj].num.is_zero() {
                            acc = r.frac_add(&acc, &r.frac_mul_poly(&block[bi][bj], &v[i][s]));
                        }
                    }
                    acc
                })
                .collect();
            let mut den = vec![0u32; r.d.npos];
            for x in &w {
                for (k, &d) in x.den.iter().enumerate() {
                    den[k] = den[k].max(d);
                }
            }
            let row: Vec<Poly> = w
                .iter()
                .map(|x| {
                    let extra: Vec<u32> = den.iter().zip(&x.den).map(|(p, q)| p - q).collect();
                    &x.num * &r.root_monomial(&extra)
                })
                .collect();
            // divide the coordinate by its content
            let content = row.iter().fold(Poly::zero(), |g, p| gcd_homogeneous(r.f, &g, p));
            let row: Vec<Poly> = if content.is_zero() { row } else { row.iter().map(|p| p.div_exact(&content).expect("content divides")).collect() };
            let shift = 2 * den.iter().sum::<u32>() as i32 + extra_shift - content.grading().unwrap_or(0);
            cleared.push((row, m.slots[sp].offset + shift));
        }
        // keep a set of slots on which the block's image projects injectively
        let mut best: Vec<usize> = vec![];
        for pt in POINTS {
            let mut ev: Mat = (0..chosen.len()).map(|c| cleared.iter().map(|(row, _)| eval_point(r, &row[c], &pt)).collect()).collect();
            let piv = linalg::rref(&mut ev, cleared.len());
            if piv.len() > best.len() {
                best = piv;
            }
        }
        for k in best {
            slots.push(Slot { alcove: a.clone(), offset: cleared[k].1 });
            rows.push(cleared[k].0.clone());
        }
    }
    if slots.len() != chosen.len() {
        return Err(Error::NotStandard(format!("summand has {} generators but generic rank {}", chosen.len(), slots.len())));
    }
    let gens = (0..chosen.len()).map(|c| rows.iter().map(|row| row[c].clone()).collect()).collect();
    let degrees = chosen.iter().map(|&i| m.degrees[i]).collect();
    Ok(KObj { slots, gens, degrees })
}

/// Complete decomposition into indecomposable summands.
pub fn split(r: &Ring, m: &KObj, opts: &SplitOptions) -> Result<Vec<KObj>> {
    let mut stack = vec![m.clone()];
    let mut out = vec![];
    let mut round = 0u64;
    while let Some(x) = stack.pop() {
        if x.num_gens() == 0 {
            continue;
        }
        let alg = EndAlgebra::new(r, &x)?;
        if alg.semisimple_dim(r)? == 1 {
            out.push(alg.prep.obj().clone());
            continue;
        }
        round += 1;
        let o = SplitOptions { seed: opts.seed.wrapping_add(round), ..*opts };
        let e = alg.find_idempotent(r, &o)?;
        let n = e.len();
        let one_minus = lin_comb(&[(r.f.one(), &identity(r, n)), (r.f.int(-1), &e)], n, n);
        stack.push(summand(r, &alg.prep, &one_minus)?);
        stack.push(summand(r, &alg.prep, &e)?);
    }
    Ok(out)
}

/// For `M ≅ Q(A)(n)`: the alcove `A` (the minimum of the support) and the shift `n`.
pub fn identify(r: &Ring, m: &KObj) -> Result<(Alcove, i32)> {
    let ch = engine_char(r, m)?;
    let support = ch.support();
    let mins: Vec<&Alcove> = support.iter().filter(|a| support.iter().all(|b| b == *a || !r.d.leq(b, a))).collect();
    let [a] = mins.as_slice() else {
        return Err(Error::NotStandard(format!("support has {} minimal alcoves", mins.len())));
    };
    let g = ch.get(a);
    match g.as_monomial() {
        Some((e, c)) if c == num_bigint::BigInt::from(1) => Ok(((*a).clone(), e)),
        _ => Err(Error::NotStandard(format!("stalk at the minimum is {}", g))),
    }
}

/// Isomorphism test for indecomposables: some composite `N → M → N` is not nilpotent on the top.
pub fn is_isomorphic_indecomposable(r: &Ring, m: &KObj, n: &KObj) -> Result<bool> {
    if m.num_gens() != n.num_gens() {
        return Ok(false);
    }
    let pm = prepare(r, m)?;
    let pn = prepare(r, n)?;
    let fwd = hom_maps(r, &pm, &pn, 0, false);
    if fwd.is_empty() {
        return Ok(false);
    }
    let back = hom_maps(r, &pn, &pm, 0, false);
    let k = m.num_gens();
    for phi in &fwd {
        for psi in &back {
            let mut t = top(r, pm.obj(), &compose(psi, phi));
            // nilpotent iff the k-th power vanishes
            let base = t.clone();
            for _ in 1..k {
                t = linalg::mat_mul(r.f, &t, &base);
            }
            if t.iter().flatten().any(|x| !x.is_zero()) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Isomorphism of arbitrary objects by matching indecomposable summands.
pub fn is_isomorphic(r: &Ring, m: &KObj, n: &KObj, opts: &SplitOptions) -> Result<bool> {
    let a = split(r, m, opts)?;
    let mut b = split(r, n, opts)?;
    if a.len() != b.len() {
        return Ok(false);
    }
    for x in &a {
        let mut hit = None;
        for (k, y) in b.iter().enumerate() {
            if is_isomorphic_indecomposable(r, x, y)? {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => {
                b.remove(k);
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// Split `Q_lambda * B_{s_1} * ... * B_{s_l}` one letter at a time.
pub fn split_bott_samelson(r: &Ring, lambda: &[i64], word: &[FaceType], opts: &SplitOptions) -> Result<Vec<KObj>> {
    let mut parts = vec![make_q_lambda(r, lambda)?];
    for &s in word {
        let mut next = vec![];
        for p in &parts {
            next.extend(split(r, &star_bs(r, p, s), opts)?);
        }
        parts = next;
    }
    Ok(parts)
}

/// `Q(A)` objects already computed, keyed by alcove.
#[derive(Default)]
pub struct QCache {
    map: HashMap<Alcove, KObj>,
}

impl QCache {
    /// `Q(A)`, normalised so that its stalk at `A` is `S`: the box minimum gives `Q_lambda`,
    /// otherwise `Q(A)` is the summand of `Q(As) * B_s` with minimum `A`, for `As < A`.
    pub fn get(&mut self, r: &Ring, a: &Alcove, opts: &SplitOptions) -> Result<KObj> {
        if let Some(q) = self.map.get(a) {
            return Ok(q.clone());
        }
        let lambda = r.d.box_of(a);
        let amin = r.d.box_max(&lambda)?;
        let word = r.d.word_between(&amin, a);
        let q = match word.split_last() {
            None => make_q_lambda(r, &lambda)?,
            Some((&s, rest)) => {
                let prev = self.get(r, &r.d.right_act_word(&amin, rest), opts)?;
                let mut found = None;
                for part in split(r, &star_bs(r, &prev, s), opts)? {
                    if let Ok((b, n)) = identify(r, &part) {
                        if &b == a {
                            found = Some(part.shift(-n));
                            break;
                        }
                    }
                }
                found.ok_or_else(|| Error::NotStandard(format!("no summand with minimum {:?}", r.d.coords(a))))?
            }
        };
        self.map.insert(a.clone(), q.clone());
        Ok(q)
    }
}

pub fn indecomposable_q(r: &Ring, a: &Alcove, opts: &SplitOptions) -> Result<KObj> {
    QCache::default().get(r, a, opts)
}

/// Entry `(A, A')` is the total rank of `Q(A)` at `A'`.
pub fn multiplicity_table(r: &Ring, region: &[Alcove], opts: &SplitOptions) -> Result<Vec<Vec<i64>>> {
    let mut cache = QCache::default();
    let mut rows = vec![];
    for a in region {
        let ch = engine_char(r, &cache.get(r, a, opts)?)?;
        let row: Option<Vec<i64>> = region.iter().map(|b| i64::try_from(ch.get(b).eval_one()).ok()).collect();
        rows.push(row.ok_or_else(|| Error::BoundExceeded("rank".into()))?);
    }
    Ok(rows)
}
