//! Root data of rank at most two, their finite Weyl groups and the GKM check.
//!
//! Weights are written in the basis of fundamental weights, so the pairing of a
//! weight with a simple coroot is just the corresponding coordinate. Coroots are
//! stored in simple-coroot coordinates.

use crate::error::{Error, Result};
use crate::scalar::Field;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

pub type Weight = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DatumName {
    A1,
    A1xA1,
    A2,
    B2,
    G2,
}

impl DatumName {
    pub const ALL: [DatumName; 5] = [DatumName::A1, DatumName::A1xA1, DatumName::A2, DatumName::B2, DatumName::G2];

    pub fn parse(s: &str) -> Result<DatumName> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(DatumName::A1),
            "A1XA1" | "A1A1" | "A1+A1" => Ok(DatumName::A1xA1),
            "A2" => Ok(DatumName::A2),
            "B2" | "C2" => Ok(DatumName::B2),
            "G2" => Ok(DatumName::G2),
            _ => Err(Error::UnknownDatum(s.to_string())),
        }
    }
}

impl fmt::Display for DatumName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DatumName::A1 => "A1",
            DatumName::A1xA1 => "A1xA1",
            DatumName::A2 => "A2",
            DatumName::B2 => "B2",
            DatumName::G2 => "G2",
        };
        write!(f, "{}", s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Root {
    /// Coordinates in the fundamental-weight basis.
    pub weight: Weight,
    /// Coroot in simple-coroot coordinates.
    pub coroot: Vec<i64>,
    /// Root in simple-root coordinates.
    pub simple_coords: Vec<i64>,
}

/// Finite Weyl group element as an integer matrix acting on weight coordinates
/// (column convention: `w(lambda) = M * lambda`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeylElt {
    pub mat: Vec<Vec<i64>>,
}

impl WeylElt {
    pub fn identity(r: usize) -> WeylElt {
        WeylElt { mat: (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect() }
    }

    pub fn act(&self, v: &[i64]) -> Weight {
        self.mat.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn compose(&self, o: &WeylElt) -> WeylElt {
        let r = self.mat.len();
        let mat = (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.mat[i][k] * o.mat[k][j]).sum()).collect())
            .collect();
        WeylElt { mat }
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub name: DatumName,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// All roots; the first `npos` are the positive ones, simple roots first.
    pub roots: Vec<Root>,
    pub npos: usize,
    /// Irreducible components as lists of simple-root indices.
    pub components: Vec<Vec<usize>>,
    pub weyl: Vec<WeylElt>,
    weyl_index: HashMap<WeylElt, usize>,
    /// `mul[a][b]` = index of `weyl[a] * weyl[b]`.
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    /// `root_perm[w][i]` = index of `w(root_i)`.
    pub root_perm: Vec<Vec<usize>>,
    /// Index of the reflection `s_alpha` for each root.
    pub reflection_index: Vec<usize>,
}

fn cartan_of(name: DatumName) -> (Vec<Vec<i64>>, Vec<Vec<usize>>) {
    match name {
        DatumName::A1 => (vec![vec![2]], vec![vec![0]]),
        DatumName::A1xA1 => (vec![vec![2, 0], vec![0, 2]], vec![vec![0], vec![1]]),
        DatumName::A2 => (vec![vec![2, -1], vec![-1, 2]], vec![vec![0, 1]]),
        // alpha_1 long, alpha_2 short
        DatumName::B2 => (vec![vec![2, -1], vec![-2, 2]], vec![vec![0, 1]]),
        // alpha_1 short, alpha_2 long
        DatumName::G2 => (vec![vec![2, -3], vec![-1, 2]], vec![vec![0, 1]]),
    }
}

impl RootDatum {
    pub fn build(name: DatumName) -> RootDatum {
        let (cartan, components) = cartan_of(name);
        let r = cartan.len();
        // simple root j in weight coordinates: (<alpha_j, alpha_i^vee>)_i
        let simple_w: Vec<Weight> = (0..r).map(|j| (0..r).map(|i| cartan[i][j]).collect()).collect();
        let unit = |j: usize| -> Vec<i64> { (0..r).map(|i| (i == j) as i64).collect() };
        // closure over (root weight, coroot, simple coords) under simple reflections
        let mut all: Vec<Root> = (0..r)
            .map(|j| Root { weight: simple_w[j].clone(), coroot: unit(j), simple_coords: unit(j) })
            .collect();
        let mut k = 0;
        while k < all.len() {
            let cur = all[k].clone();
            for i in 0..r {
                let c = cur.weight[i];
                let weight: Weight = (0..r).map(|t| cur.weight[t] - c * simple_w[i][t]).collect();
                let simple_coords: Vec<i64> = (0..r).map(|t| cur.simple_coords[t] - if t == i { c } else { 0 }).collect();
                // s_i on coroots: c' = c - <alpha_i, c> alpha_i^vee
                let pair: i64 = (0..r).map(|t| cur.coroot[t] * simple_w[i][t]).sum();
                let coroot: Vec<i64> = (0..r).map(|t| cur.coroot[t] - if t == i { pair } else { 0 }).collect();
                if !all.iter().any(|x| x.weight == weight) {
                    all.push(Root { weight, coroot, simple_coords });
                }
            }
            k += 1;
        }
        let is_pos = |x: &Root| x.simple_coords.iter().all(|&c| c >= 0);
        let mut pos: Vec<Root> = all.iter().filter(|x| is_pos(x)).cloned().collect();
        pos.sort_by_key(|x| (x.simple_coords.iter().sum::<i64>(), x.simple_coords.iter().map(|c| -c).collect::<Vec<i64>>()));
        let neg: Vec<Root> = pos
            .iter()
            .map(|x| Root {
                weight: x.weight.iter().map(|v| -v).collect(),
                coroot: x.coroot.iter().map(|v| -v).collect(),
                simple_coords: x.simple_coords.iter().map(|v| -v).collect(),
            })
            .collect();
        let npos = pos.len();
        let roots: Vec<Root> = pos.into_iter().chain(neg).collect();

        // finite Weyl group by closure
        let sref = |i: usize| -> WeylElt {
            // s_i(lambda) = lambda - lambda_i alpha_i: column t of matrix = s_i(e_t)
            let mut mat = vec![vec![0i64; r]; r];
            for t in 0..r {
                let e = unit(t);
                let c = e[i];
                for u in 0..r {
                    mat[u][t] = e[u] - c * simple_w[i][u];
                }
            }
            WeylElt { mat }
        };
        let gens: Vec<WeylElt> = (0..r).map(sref).collect();
        let mut weyl = vec![WeylElt::identity(r)];
        let mut weyl_index: HashMap<WeylElt, usize> = HashMap::new();
        weyl_index.insert(weyl[0].clone(), 0);
        let mut k = 0;
        while k < weyl.len() {
            for g in &gens {
                let n = g.compose(&weyl[k]);
                if !weyl_index.contains_key(&n) {
                    weyl_index.insert(n.clone(), weyl.len());
                    weyl.push(n);
                }
            }
            k += 1;
        }
        let nw = weyl.len();
        let mul: Vec<Vec<usize>> =
            (0..nw).map(|a| (0..nw).map(|b| weyl_index[&weyl[a].compose(&weyl[b])]).collect()).collect();
        let inv: Vec<usize> = (0..nw).map(|a| (0..nw).find(|&b| mul[a][b] == 0).unwrap()).collect();
        let root_index: HashMap<Weight, usize> = roots.iter().enumerate().map(|(i, x)| (x.weight.clone(), i)).collect();
        let root_perm: Vec<Vec<usize>> =
            weyl.iter().map(|w| roots.iter().map(|x| root_index[&w.act(&x.weight)]).collect()).collect();
        let mut d = RootDatum {
            name,
            rank: r,
            cartan,
            roots,
            npos,
            components,
            weyl,
            weyl_index,
            mul,
            inv,
            root_perm,
            reflection_index: vec![],
        };
        d.reflection_index = (0..d.roots.len())
            .map(|i| {
                let m = d.reflection_matrix(i);
                d.weyl_index[&m]
            })
            .collect();
        d
    }

    pub fn from_name(s: &str) -> Result<RootDatum> {
        Ok(RootDatum::build(DatumName::parse(s)?))
    }

    pub fn positive(&self) -> &[Root] {
        &self.roots[..self.npos]
    }

    pub fn simple(&self) -> &[Root] {
        &self.roots[..self.rank]
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    /// `<lambda, beta^vee>` for a weight and a coroot in simple-coroot coordinates.
    pub fn pair(&self, lambda: &[i64], coroot: &[i64]) -> i64 {
        lambda.iter().zip(coroot).map(|(a, b)| a * b).sum()
    }

    /// `<lambda, alpha^vee>` for the root with index `i`.
    pub fn pair_root(&self, lambda: &[i64], i: usize) -> i64 {
        self.pair(lambda, &self.roots[i].coroot)
    }

    fn reflection_matrix(&self, i: usize) -> WeylElt {
        let r = self.rank;
        let a = &self.roots[i];
        let mut mat = vec![vec![0i64; r]; r];
        for t in 0..r {
            let c = a.coroot[t];
            for u in 0..r {
                mat[u][t] = (u == t) as i64 - c * a.weight[u];
            }
        }
        WeylElt { mat }
    }

    /// `s_alpha(lambda) = lambda - <lambda, alpha^vee> alpha`.
    pub fn reflect(&self, i: usize, lambda: &[i64]) -> Weight {
        let c = self.pair_root(lambda, i);
        lambda.iter().zip(&self.roots[i].weight).map(|(l, a)| l - c * a).collect()
    }

    pub fn weyl_idx(&self, w: &WeylElt) -> usize {
        self.weyl_index[w]
    }

    pub fn act(&self, w: usize, lambda: &[i64]) -> Weight {
        self.weyl[w].act(lambda)
    }

    /// Index of `-root_i`.
    pub fn neg_root(&self, i: usize) -> usize {
        if i < self.npos {
            i + self.npos
        } else {
            i - self.npos
        }
    }

    /// Positive root index and sign of the root with index `i`.
    pub fn positive_part(&self, i: usize) -> (usize, i64) {
        if i < self.npos {
            (i, 1)
        } else {
            (i - self.npos, -1)
        }
    }

    pub fn root_of_weight(&self, v: &[i64]) -> Option<usize> {
        self.roots.iter().position(|x| x.weight == v)
    }

    /// Simple-root coordinates of a weight, as rationals `(num, den)` with common denominator.
    pub fn to_simple_coords(&self, lambda: &[i64]) -> (Vec<i64>, i64) {
        // lambda = sum_j n_j alpha_j, alpha_j = column j of cartan^T ... i.e. lambda_i = sum_j cartan[i][j] n_j.
        let c = &self.cartan;
        match self.rank {
            1 => (vec![lambda[0]], c[0][0]),
            2 => {
                let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
                let n0 = c[1][1] * lambda[0] - c[0][1] * lambda[1];
                let n1 = -c[1][0] * lambda[0] + c[0][0] * lambda[1];
                (vec![n0, n1], det)
            }
            _ => unreachable!(),
        }
    }

    pub fn in_root_lattice(&self, lambda: &[i64]) -> bool {
        let (n, d) = self.to_simple_coords(lambda);
        n.iter().all(|v| v % d == 0)
    }

    /// Whether `lambda` lies in the nonnegative real cone spanned by positive roots.
    pub fn in_positive_cone(&self, lambda: &[i64]) -> bool {
        let (n, d) = self.to_simple_coords(lambda);
        n.iter().all(|v| v * d.signum() >= 0)
    }

    /// Simple-root indices with respect to which the highest coroot of each component is computed;
    /// returns the positive root index whose coroot is the highest coroot of the component.
    pub fn highest_coroot_root(&self, comp: &[usize]) -> usize {
        (0..self.npos)
            .filter(|&i| {
                let c = &self.roots[i].coroot;
                c.iter().enumerate().all(|(t, &v)| v == 0 || comp.contains(&t))
            })
            .max_by_key(|&i| self.roots[i].coroot.iter().sum::<i64>())
            .unwrap()
    }

    /// Vertices of the closure of the fundamental alcove, scaled by `vertex_scale()`.
    pub fn fundamental_vertices(&self) -> Vec<Weight> {
        let s = self.vertex_scale();
        let mut per_comp: Vec<Vec<Weight>> = vec![];
        for comp in &self.components {
            let th = self.highest_coroot_root(comp);
            let c = &self.roots[th].coroot;
            let mut vs = vec![vec![0i64; self.rank]];
            for &i in comp {
                let mut v = vec![0i64; self.rank];
                v[i] = s / c[i];
                vs.push(v);
            }
            per_comp.push(vs);
        }
        let mut out = vec![vec![0i64; self.rank]];
        for vs in per_comp {
            let mut next = vec![];
            for a in &out {
                for b in &vs {
                    next.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
                }
            }
            out = next;
        }
        out
    }

    pub fn vertex_scale(&self) -> i64 {
        6
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GkmReport {
    pub ok: bool,
    pub two_invertible: bool,
    pub dependent_pairs: Vec<(usize, usize)>,
}

/// GKM admissibility: 2 is invertible and distinct positive roots stay linearly independent over k.
pub fn gkm_check(d: &RootDatum, p: u64) -> GkmReport {
    let f = Field::new(p);
    let two_invertible = f.is_unit_int(2);
    let mut dependent_pairs = vec![];
    for i in 0..d.npos {
        for j in (i + 1)..d.npos {
            let a = &d.roots[i].weight;
            let b = &d.roots[j].weight;
            let dependent = if d.rank == 1 {
                true
            } else {
                let det = a[0] * b[1] - a[1] * b[0];
                !f.is_unit_int(det)
            };
            if dependent {
                dependent_pairs.push((i, j));
            }
        }
    }
    GkmReport { ok: two_invertible && dependent_pairs.is_empty(), two_invertible, dependent_pairs }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let expect = [(DatumName::A1, 2, 2), (DatumName::A1xA1, 4, 4), (DatumName::A2, 6, 6), (DatumName::B2, 8, 8), (DatumName::G2, 12, 12)];
        for (n, nr, nw) in expect {
            let d = RootDatum::build(n);
            assert_eq!(d.roots.len(), nr, "{}", n);
            assert_eq!(d.weyl_order(), nw, "{}", n);
            assert_eq!(d.npos * 2, nr);
        }
    }

    #[test]
    fn a1_normalization() {
        let d = RootDatum::build(DatumName::A1);
        assert_eq!(d.roots[0].weight, vec![2]);
        assert_eq!(d.pair_root(&[3], 0), 3);
    }

    #[test]
    fn a2_pairings_and_reflection() {
        let d = RootDatum::build(DatumName::A2);
        let a1 = d.roots[0].weight.clone();
        let a2 = d.roots[1].weight.clone();
        assert_eq!(d.pair_root(&a1, 0), 2);
        assert_eq!(d.pair_root(&a1, 1), -1);
        let s = d.reflect(0, &a2);
        let sum: Vec<i64> = a1.iter().zip(&a2).map(|(x, y)| x + y).collect();
        assert_eq!(s, sum);
    }

    #[test]
    fn root_invariants() {
        for n in DatumName::ALL {
            let d = RootDatum::build(n);
            for (i, x) in d.roots.iter().enumerate() {
                assert_eq!(d.pair_root(&x.weight, i), 2);
                for y in &d.roots {
                    assert!(d.root_of_weight(&d.reflect(i, &y.weight)).is_some());
                }
            }
            for x in d.positive() {
                assert!(x.simple_coords.iter().all(|&c| c >= 0));
            }
        }
    }

    #[test]
    fn conjugation_of_reflections() {
        for n in DatumName::ALL {
            let d = RootDatum::build(n);
            for w in 0..d.weyl_order() {
                for i in 0..d.roots.len() {
                    let lhs = d.mul[d.mul[w][d.reflection_index[i]]][d.inv[w]];
                    let rhs = d.reflection_index[d.root_perm[w][i]];
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn gkm() {
        let a2 = RootDatum::build(DatumName::A2);
        assert!(gkm_check(&a2, 0).ok);
        assert!(!gkm_check(&a2, 2).ok);
        let b2 = RootDatum::build(DatumName::B2);
        let rep = gkm_check(&b2, 2);
        assert!(!rep.ok && !rep.dependent_pairs.is_empty());
        let g2 = RootDatum::build(DatumName::G2);
        assert!(!gkm_check(&g2, 3).ok);
        assert!(gkm_check(&g2, 5).ok);
    }

    #[test]
    fn highest_coroots() {
        let g2 = RootDatum::build(DatumName::G2);
        let th = g2.highest_coroot_root(&[0, 1]);
        assert_eq!(g2.roots[th].coroot.iter().sum::<i64>(), 5);
    }
}
