//! Graded morphism spaces `Hom(M, N(d))` and their quotient by maps that are
//! strictly increasing on the support.
//!
//! A morphism is stored as the polynomial matrix `C` with `φ(m_i) = Σ_j C[j][i] n_j`
//! in adapted bases. It is admissible when `P_N C P_M^{-1}` vanishes on slot
//! pairs `(A', A)` unless `A' >= A` and `A' ∈ A + ZΔ`.

use super::sections::{adapted_basis, Adapted};
use super::KObj;
use crate::alcove::Alcove;
use crate::error::Result;
use crate::poly::{gcd_homogeneous, monomials, Mono, Poly};
use crate::scalar::{Field, Scalar};
use crate::symbolic::Ring;
use std::collections::{BTreeMap, HashMap};

pub type CMat = Vec<Vec<Poly>>;

/// An object with its adapted basis and the denominator-cleared columns of `P^{-1}`.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub ad: Adapted,
    /// `cols[a]` = `D_a * P^{-1} e_a`, a polynomial vector over generators.
    pub cols: Vec<Vec<Poly>>,
}

impl Prepared {
    pub fn obj(&self) -> &KObj {
        &self.ad.obj
    }
}

pub fn prepare(r: &Ring, m: &KObj) -> Result<Prepared> {
    let ad = adapted_basis(r, m)?;
    let inv = ad.inverse(r)?;
    let ng = ad.obj.num_gens();
    let ns = ad.obj.slots.len();
    let total = inv.den.iter().fold(r.one(), |acc, q| if q.constant_value().is_some() { acc } else { &acc * q });
    // total / den[g] is a polynomial since den[g] is a prefix product of the block factors
    let scale: Vec<Poly> = inv.den.iter().map(|q| total.div_exact(q).expect("prefix product divides")).collect();
    let mut cols = vec![];
    for a in 0..ns {
        let mut den = vec![0u32; r.d.npos];
        for row in inv.x.iter().take(ng) {
            for (k, e) in row[a].den.iter().enumerate() {
                den[k] = den[k].max(*e);
            }
        }
        let col: Vec<Poly> = (0..ng)
            .map(|g| {
                let x = &inv.x[g][a];
                let extra: Vec<u32> = den.iter().zip(&x.den).map(|(p, q)| p - q).collect();
                &(&x.num * &r.root_monomial(&extra)) * &scale[g]
            })
            .collect();
        // only the column up to a scalar matters
        let content = col.iter().fold(Poly::zero(), |acc, p| gcd_homogeneous(r.f, &acc, p));
        let col = if content.is_zero() { col } else { col.iter().map(|p| p.div_exact(&content).expect("content divides")).collect() };
        cols.push(col);
    }
    Ok(Prepared { ad, cols })
}

/// Sparse row echelon form over a field.
pub(crate) struct Echelon {
    f: Field,
    rows: BTreeMap<usize, BTreeMap<usize, Scalar>>,
}

impl Echelon {
    pub fn new(f: Field) -> Echelon {
        Echelon { f, rows: BTreeMap::new() }
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert a row; returns whether the rank grew.
    pub fn insert(&mut self, mut row: BTreeMap<usize, Scalar>) -> bool {
        row.retain(|_, v| !v.is_zero());
        while let Some((&c, v)) = row.iter().next() {
            let v = v.clone();
            match self.rows.get(&c) {
                Some(p) => {
                    for (k, x) in p {
                        let e = row.entry(*k).or_insert_with(|| self.f.zero());
                        *e -= &(&v * x);
                        if e.is_zero() {
                            row.remove(k);
                        }
                    }
                }
                None => {
                    let inv = v.inv();
                    for x in row.values_mut() {
                        *x *= &inv;
                    }
                    self.rows.insert(c, row);
                    return true;
                }
            }
        }
        false
    }

    /// Basis of the null space in `n` unknowns.
    pub fn kernel(&self, n: usize) -> Vec<Vec<Scalar>> {
        // back substitution to reduced form
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let mut reduced: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        for &p in pivots.iter().rev() {
            let mut row = self.rows[&p].clone();
            let later: Vec<usize> = row.keys().copied().filter(|&k| k != p && reduced.contains_key(&k)).collect();
            for k in later {
                let Some(v) = row.get(&k).cloned() else { continue };
                for (kk, x) in &reduced[&k] {
                    let e = row.entry(*kk).or_insert_with(|| self.f.zero());
                    *e -= &(&v * x);
                    if e.is_zero() {
                        row.remove(kk);
                    }
                }
            }
            reduced.insert(p, row);
        }
        let mut out = vec![];
        for free in (0..n).filter(|c| !reduced.contains_key(c)) {
            let mut v = vec![self.f.zero(); n];
            v[free] = self.f.one();
            for (&p, row) in &reduced {
                if let Some(x) = row.get(&free) {
                    v[p] = -x;
                }
            }
            out.push(v);
        }
        out
    }
}

struct Unknowns {
    /// `(j, i)` -> (first index, monomials)
    blocks: HashMap<(usize, usize), (usize, Vec<Mono>)>,
    count: usize,
}

fn unknowns(r: &Ring, m: &KObj, n: &KObj, d: i32) -> Unknowns {
    let mut blocks = HashMap::new();
    let mut count = 0;
    for j in 0..n.num_gens() {
        for i in 0..m.num_gens() {
            let e = m.degrees[i] + d - n.degrees[j];
            if e < 0 || e % 2 != 0 {
                continue;
            }
            let monos = monomials(r.nvars(), (e / 2) as u32);
            let len = monos.len();
            blocks.insert((j, i), (count, monos));
            count += len;
        }
    }
    Unknowns { blocks, count }
}

/// Which slot pairs `(a', a)` are allowed to carry a nonzero component.
fn allowed_pairs(r: &Ring, m: &KObj, n: &KObj, strict: bool) -> Vec<Vec<bool>> {
    let mut cache: HashMap<(Alcove, Alcove), bool> = HashMap::new();
    n.slots
        .iter()
        .map(|sn| {
            m.slots
                .iter()
                .map(|sm| {
                    let key = (sm.alcove.clone(), sn.alcove.clone());
                    *cache.entry(key).or_insert_with(|| {
                        let (a, b) = (&sm.alcove, &sn.alcove);
                        if a.w != b.w {
                            return false;
                        }
                        if strict {
                            r.d.lt(a, b)
                        } else {
                            r.d.leq(a, b)
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Basis of `Hom(M, N(d))` (or of the strictly increasing maps when `strict`), as coefficient matrices.
pub fn hom_maps(r: &Ring, m: &Prepared, n: &Prepared, d: i32, strict: bool) -> Vec<CMat> {
    let (mo, no) = (m.obj(), n.obj());
    let unk = unknowns(r, mo, no, d);
    if unk.count == 0 {
        return vec![];
    }
    let allowed = allowed_pairs(r, mo, no, strict);
    let mut ech = Echelon::new(r.f);
    for (ap, row_allowed) in allowed.iter().enumerate() {
        for (a, &ok) in row_allowed.iter().enumerate() {
            if ok {
                continue;
            }
            // entry (a', a) of P_N C (D_a P_M^{-1} e_a)
            let mut rows: BTreeMap<Mono, BTreeMap<usize, Scalar>> = BTreeMap::new();
            for (i, ui) in m.cols[a].iter().enumerate() {
                if ui.is_zero() {
                    continue;
                }
                for j in 0..no.num_gens() {
                    let pj = &no.gens[j][ap];
                    if pj.is_zero() {
                        continue;
                    }
                    let Some((start, monos)) = unk.blocks.get(&(j, i)) else { continue };
                    let w = pj * ui;
                    for (k, mono) in monos.iter().enumerate() {
                        for (wm, wc) in w.terms() {
                            let key = [wm[0] + mono[0], wm[1] + mono[1]];
                            let e = rows.entry(key).or_default().entry(start + k).or_insert_with(|| r.f.zero());
                            *e += wc;
                        }
                    }
                }
            }
            for (_, row) in rows {
                ech.insert(row);
            }
        }
    }
    ech.kernel(unk.count)
        .into_iter()
        .map(|v| {
            let mut c: CMat = vec![vec![Poly::zero(); mo.num_gens()]; no.num_gens()];
            for ((j, i), (start, monos)) in &unk.blocks {
                let mut p = Poly::zero();
                for (k, mono) in monos.iter().enumerate() {
                    p.add_term(*mono, v[start + k].clone());
                }
                c[*j][*i] = p;
            }
            c
        })
        .collect()
}

pub fn hom_dim(r: &Ring, m: &Prepared, n: &Prepared, d: i32) -> usize {
    hom_maps(r, m, n, d, false).len()
}

/// Dimension of the degree-`d` part of `Hom` in the quotient by strictly increasing maps.
pub fn hom_dim_k(r: &Ring, m: &Prepared, n: &Prepared, d: i32) -> usize {
    hom_maps(r, m, n, d, false).len() - hom_maps(r, m, n, d, true).len()
}

pub fn compose(phi: &CMat, psi: &CMat) -> CMat {
    // (phi ∘ psi) = C_phi C_psi
    let rows = phi.len();
    let inner = psi.len();
    let cols = if inner == 0 { 0 } else { psi[0].len() };
    let mut out = vec![vec![Poly::zero(); cols]; rows];
    for j in 0..rows {
        for k in 0..inner {
            if phi[j][k].is_zero() {
                continue;
            }
            for i in 0..cols {
                if !psi[k][i].is_zero() {
                    out[j][i] = &out[j][i] + &(&phi[j][k] * &psi[k][i]);
                }
            }
        }
    }
    out
}
