//! Alcoves, the affine Weyl group `W_f ⋉ ZΔ`, wall types, the generic Bruhat
//! order, boxes and the length function.

use crate::error::{Error, Result};
use crate::root_datum::{RootDatum, Weight};
use serde::Serialize;
use std::collections::{BTreeSet, HashSet, VecDeque};

/// Element `(w, mu)` of `W_f ⋉ ZΔ` acting by `lambda -> w(lambda) + mu`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffineElt {
    pub w: usize,
    pub mu: Weight,
}

/// The alcove `w(A_fund) + mu`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Alcove {
    pub w: usize,
    pub mu: Weight,
}

impl Alcove {
    pub fn as_affine(&self) -> AffineElt {
        AffineElt { w: self.w, mu: self.mu.clone() }
    }
}

impl AffineElt {
    pub fn as_alcove(&self) -> Alcove {
        Alcove { w: self.w, mu: self.mu.clone() }
    }
}

/// A wall type of the fundamental alcove; index into `RootDatum::faces()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FaceType(pub usize);

#[derive(Clone, Debug)]
pub struct Face {
    pub name: String,
    /// Positive root whose hyperplane contains the wall.
    pub root: usize,
    /// Level of the hyperplane: the wall lies on `<x, root^vee> = level`.
    pub level: i64,
    pub reflection: AffineElt,
}

fn add(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(a: &[i64], c: i64) -> Weight {
    a.iter().map(|x| x * c).collect()
}

impl RootDatum {
    pub fn fund(&self) -> Alcove {
        Alcove { w: 0, mu: vec![0; self.rank] }
    }

    pub fn affine_identity(&self) -> AffineElt {
        AffineElt { w: 0, mu: vec![0; self.rank] }
    }

    pub fn affine_mul(&self, x: &AffineElt, y: &AffineElt) -> AffineElt {
        AffineElt { w: self.mul[x.w][y.w], mu: add(&self.act(x.w, &y.mu), &x.mu) }
    }

    pub fn affine_inv(&self, x: &AffineElt) -> AffineElt {
        let wi = self.inv[x.w];
        AffineElt { w: wi, mu: scale(&self.act(wi, &x.mu), -1) }
    }

    pub fn affine_apply(&self, x: &AffineElt, lambda: &[i64]) -> Weight {
        add(&self.act(x.w, lambda), &x.mu)
    }

    /// `s_{alpha,n}(lambda) = s_alpha(lambda) + n alpha`.
    pub fn affine_reflection(&self, root: usize, n: i64) -> AffineElt {
        AffineElt { w: self.reflection_index[root], mu: scale(&self.roots[root].weight, n) }
    }

    pub fn translation(&self, mu: &[i64]) -> AffineElt {
        AffineElt { w: 0, mu: mu.to_vec() }
    }

    pub fn left_act(&self, x: &AffineElt, a: &Alcove) -> Alcove {
        self.affine_mul(x, &a.as_affine()).as_alcove()
    }

    pub fn translate(&self, a: &Alcove, mu: &[i64]) -> Alcove {
        Alcove { w: a.w, mu: add(&a.mu, mu) }
    }

    /// Walls of the fundamental alcove: simple walls, then one affine wall per component.
    pub fn faces(&self) -> Vec<Face> {
        let mut out = vec![];
        for i in 0..self.rank {
            out.push(Face { name: format!("s{}", i + 1), root: i, level: 0, reflection: self.affine_reflection(i, 0) });
        }
        let nc = self.components.len();
        for (c, comp) in self.components.iter().enumerate() {
            let th = self.highest_coroot_root(comp);
            let name = if nc == 1 { "s0".to_string() } else { format!("s0{}", (b'a' + c as u8) as char) };
            out.push(Face { name, root: th, level: 1, reflection: self.affine_reflection(th, 1) });
        }
        out
    }

    pub fn face_by_name(&self, s: &str) -> Result<FaceType> {
        self.faces().iter().position(|f| f.name == s).map(FaceType).ok_or_else(|| Error::UnknownFace(s.to_string()))
    }

    pub fn parse_word(&self, s: &str) -> Result<Vec<FaceType>> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        if t.trim().is_empty() {
            return Ok(vec![]);
        }
        t.split(|c| c == ',' || c == ' ').filter(|x| !x.is_empty()).map(|x| self.face_by_name(x.trim().trim_matches('"'))).collect()
    }

    pub fn word_names(&self, word: &[FaceType]) -> Vec<String> {
        let f = self.faces();
        word.iter().map(|s| f[s.0].name.clone()).collect()
    }

    pub fn right_act(&self, a: &Alcove, s: FaceType) -> Alcove {
        let f = &self.faces()[s.0];
        self.affine_mul(&a.as_affine(), &f.reflection).as_alcove()
    }

    pub fn right_act_word(&self, a: &Alcove, word: &[FaceType]) -> Alcove {
        let faces = self.faces();
        let mut x = a.as_affine();
        for s in word {
            x = self.affine_mul(&x, &faces[s.0].reflection);
        }
        x.as_alcove()
    }

    /// `k_alpha(A)` for every positive root: the integer with `k - 1 < <a, alpha^vee> < k` on `A`.
    pub fn coords(&self, a: &Alcove) -> Vec<i64> {
        let winv = self.inv[a.w];
        (0..self.npos)
            .map(|i| {
                let pre = self.root_perm[winv][i];
                self.pair_root(&a.mu, i) + (pre < self.npos) as i64
            })
            .collect()
    }

    pub fn coord(&self, a: &Alcove, i: usize) -> i64 {
        let pre = self.root_perm[self.inv[a.w]][i];
        self.pair_root(&a.mu, i) + (pre < self.npos) as i64
    }

    pub fn from_coords(&self, k: &[i64]) -> Result<Alcove> {
        if k.len() != self.npos {
            return Err(Error::InfeasibleCoords(k.to_vec()));
        }
        for w in 0..self.weyl_order() {
            let winv = self.inv[w];
            let mu: Weight = (0..self.rank).map(|i| k[i] - (self.root_perm[winv][i] < self.npos) as i64).collect();
            if !self.in_root_lattice(&mu) {
                continue;
            }
            let a = Alcove { w, mu };
            if self.coords(&a) == k {
                return Ok(a);
            }
        }
        Err(Error::InfeasibleCoords(k.to_vec()))
    }

    /// `alpha ↑ A`: reflect across the nearest `alpha`-hyperplane above `A`.
    pub fn up(&self, root: usize, a: &Alcove) -> Alcove {
        let k = self.coord(a, root);
        self.left_act(&self.affine_reflection(root, k), a)
    }

    pub fn down(&self, root: usize, a: &Alcove) -> Alcove {
        let k = self.coord(a, root);
        self.left_act(&self.affine_reflection(root, k - 1), a)
    }

    /// Signed count of hyperplanes crossed going from `a` to `b`.
    pub fn dist(&self, a: &Alcove, b: &Alcove) -> i64 {
        let ka = self.coords(a);
        let kb = self.coords(b);
        ka.iter().zip(&kb).map(|(x, y)| y - x).sum()
    }

    /// `l(A) = d(A_fund, A)`.
    pub fn length(&self, a: &Alcove) -> i64 {
        self.coords(a).iter().map(|k| k - 1).sum()
    }

    /// Number of hyperplanes separating `A_fund` from `A_fund·x`; the Coxeter length of `x`.
    pub fn coxeter_length(&self, x: &Alcove) -> i64 {
        self.coords(x).iter().map(|k| (k - 1).abs()).sum()
    }

    /// `As > A` in the generic order.
    pub fn is_up_step(&self, a: &Alcove, s: FaceType) -> bool {
        self.length(&self.right_act(a, s)) > self.length(a)
    }

    /// The unique affine element mapping `a` to `b`.
    pub fn transporter(&self, a: &Alcove, b: &Alcove) -> AffineElt {
        self.affine_mul(&b.as_affine(), &self.affine_inv(&a.as_affine()))
    }

    /// Necessary condition for `c <= b`: every vertex of the closure of `c` moves into the positive cone.
    pub fn vertex_certificate(&self, c: &Alcove, b: &Alcove) -> bool {
        let x = self.transporter(c, b);
        let s = self.vertex_scale();
        for v in self.fundamental_vertices() {
            let lam = add(&self.act(c.w, &v), &scale(&c.mu, s));
            let img = add(&self.act(x.w, &lam), &scale(&x.mu, s));
            if !self.in_positive_cone(&sub(&img, &lam)) {
                return false;
            }
        }
        true
    }

    /// Upward covers `s_{alpha,n}(A)` with `n >= k_alpha(A)` whose coordinates stay at most `hi`.
    pub fn covers_within(&self, a: &Alcove, hi: &[i64]) -> Vec<Alcove> {
        let k = self.coords(a);
        let mut out = vec![];
        for i in 0..self.npos {
            // s_{alpha,n} sends the strip (k-1,k) to (2n-k, 2n-k+1).
            let mut n = k[i];
            while 2 * n - k[i] + 1 <= hi[i] {
                out.push(self.left_act(&self.affine_reflection(i, n), a));
                n += 1;
            }
        }
        out
    }

    /// The generic Bruhat order, by bounded upward search.
    pub fn leq_with_slack(&self, a: &Alcove, b: &Alcove, slack: i64) -> bool {
        if a == b {
            return true;
        }
        if self.dist(a, b) <= 0 || !self.vertex_certificate(a, b) {
            return false;
        }
        let ka = self.coords(a);
        let kb = self.coords(b);
        let lo: Vec<i64> = ka.iter().zip(&kb).map(|(x, y)| x.min(y) - slack).collect();
        let hi: Vec<i64> = ka.iter().zip(&kb).map(|(x, y)| x.max(y) + slack).collect();
        let mut seen: HashSet<Alcove> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(a.clone());
        queue.push_back(a.clone());
        while let Some(c) = queue.pop_front() {
            for d in self.covers_within(&c, &hi) {
                if &d == b {
                    return true;
                }
                if seen.contains(&d) {
                    continue;
                }
                let kd = self.coords(&d);
                if kd.iter().zip(&lo).any(|(x, l)| x < l) {
                    continue;
                }
                if self.dist(&d, b) <= 0 || !self.vertex_certificate(&d, b) {
                    continue;
                }
                seen.insert(d.clone());
                queue.push_back(d);
            }
        }
        false
    }

    pub fn leq(&self, a: &Alcove, b: &Alcove) -> bool {
        self.leq_with_slack(a, b, 2)
    }

    pub fn lt(&self, a: &Alcove, b: &Alcove) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn interval(&self, a: &Alcove, b: &Alcove) -> Vec<Alcove> {
        if !self.leq(a, b) {
            return vec![];
        }
        let ka = self.coords(a);
        let kb = self.coords(b);
        let hi: Vec<i64> = ka.iter().zip(&kb).map(|(x, y)| x.max(y) + 2).collect();
        let mut seen: BTreeSet<Alcove> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(a.clone());
        queue.push_back(a.clone());
        while let Some(c) = queue.pop_front() {
            for d in self.covers_within(&c, &hi) {
                if !seen.contains(&d) && self.leq(&d, b) {
                    seen.insert(d.clone());
                    queue.push_back(d);
                }
            }
        }
        let mut out: Vec<Alcove> = seen.into_iter().collect();
        self.sort_by_length(&mut out);
        out
    }

    /// Sort by `(l(A), coords)`, a linear extension of the generic order.
    pub fn sort_by_length(&self, v: &mut [Alcove]) {
        v.sort_by_cached_key(|a| (self.length(a), self.coords(a)));
    }

    /// Alcoves at gallery distance at most `r` from `A_fund`.
    pub fn ball(&self, r: usize) -> Vec<Alcove> {
        self.ball_around(&self.fund(), r)
    }

    pub fn ball_around(&self, center: &Alcove, r: usize) -> Vec<Alcove> {
        let nf = self.faces().len();
        let mut seen: BTreeSet<Alcove> = BTreeSet::new();
        seen.insert(center.clone());
        let mut frontier = vec![center.clone()];
        for _ in 0..r {
            let mut next = vec![];
            for a in &frontier {
                for s in 0..nf {
                    let b = self.right_act(a, FaceType(s));
                    if seen.insert(b.clone()) {
                        next.push(b);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Alcove> = seen.into_iter().collect();
        self.sort_by_length(&mut out);
        out
    }

    /// Box label: the integral weight `lambda` with `A` in `Π_lambda`.
    pub fn box_of(&self, a: &Alcove) -> Weight {
        (0..self.rank).map(|i| self.coord(a, i)).collect()
    }

    /// `A_lambda^-`: the alcove `lambda - A_fund`.
    pub fn box_max(&self, lambda: &[i64]) -> Result<Alcove> {
        if lambda.len() != self.rank {
            return Err(Error::NonIntegral(lambda.to_vec()));
        }
        let k: Vec<i64> = (0..self.npos).map(|i| self.pair_root(lambda, i)).collect();
        self.from_coords(&k)
    }

    /// All alcoves of the box `Π_lambda`.
    pub fn box_alcoves(&self, lambda: &[i64]) -> Vec<Alcove> {
        let mut out = vec![];
        for w in 0..self.weyl_order() {
            let winv = self.inv[w];
            let mu: Weight = (0..self.rank).map(|i| lambda[i] - (self.root_perm[winv][i] < self.npos) as i64).collect();
            if self.in_root_lattice(&mu) {
                out.push(Alcove { w, mu });
            }
        }
        self.sort_by_length(&mut out);
        out
    }

    /// Stabiliser of `lambda` in `W_f ⋉ ZΔ`: the elements `(w, lambda - w(lambda))`.
    pub fn stabilizer(&self, lambda: &[i64]) -> Vec<AffineElt> {
        (0..self.weyl_order()).map(|w| AffineElt { w, mu: sub(lambda, &self.act(w, lambda)) }).collect()
    }

    /// The orbit `W'_lambda A_lambda^-`, sorted by length.
    pub fn wlambda_orbit(&self, lambda: &[i64]) -> Result<Vec<Alcove>> {
        let amin = self.box_max(lambda)?;
        let mut out: Vec<Alcove> = self.stabilizer(lambda).iter().map(|x| self.left_act(x, &amin)).collect();
        self.sort_by_length(&mut out);
        Ok(out)
    }

    /// Whether `b` lies in `W'_{alpha,aff} a`.
    pub fn same_alpha_orbit(&self, root: usize, a: &Alcove, b: &Alcove) -> bool {
        let s = self.reflection_index[root];
        let alpha = &self.roots[root].weight;
        let diff = if b.w == a.w {
            sub(&b.mu, &a.mu)
        } else if b.w == self.mul[s][a.w] {
            sub(&b.mu, &self.act(s, &a.mu))
        } else {
            return false;
        };
        // diff must be an integer multiple of alpha
        let idx = alpha.iter().position(|&x| x != 0).unwrap();
        if diff[idx] % alpha[idx] != 0 {
            return false;
        }
        let n = diff[idx] / alpha[idx];
        diff == scale(alpha, n)
    }

    pub fn same_translation_orbit(&self, a: &Alcove, b: &Alcove) -> bool {
        a.w == b.w
    }

    /// A reduced expression for the affine element `x` (identified with the alcove `A_fund·x`),
    /// found by walking down a gallery.
    pub fn reduced_word(&self, x: &Alcove) -> Vec<FaceType> {
        let nf = self.faces().len();
        let mut cur = x.clone();
        let mut rev = vec![];
        while self.coxeter_length(&cur) > 0 {
            let l = self.coxeter_length(&cur);
            let s = (0..nf).map(FaceType).find(|&s| self.coxeter_length(&self.right_act(&cur, s)) < l).expect("descent exists");
            rev.push(s);
            cur = self.right_act(&cur, s);
        }
        rev.reverse();
        rev
    }

    /// Word `s_1..s_l` with `start·s_1···s_l = target`, reduced in `W_aff`.
    pub fn word_between(&self, start: &Alcove, target: &Alcove) -> Vec<FaceType> {
        let y = self.affine_mul(&self.affine_inv(&start.as_affine()), &target.as_affine());
        self.reduced_word(&y.as_alcove())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::DatumName;

    fn a1() -> RootDatum {
        RootDatum::build(DatumName::A1)
    }

    /// A_n = (n, n+1) on the line.
    fn a1n(d: &RootDatum, n: i64) -> Alcove {
        d.from_coords(&[n + 1]).unwrap()
    }

    #[test]
    fn a1_coordinates() {
        let d = a1();
        assert_eq!(d.coords(&d.fund()), vec![1]);
        let t = d.translate(&d.fund(), &[2]);
        assert_eq!(d.coords(&t), vec![3]);
        let a0 = a1n(&d, 0);
        let s1 = d.face_by_name("s1").unwrap();
        let s0 = d.face_by_name("s0").unwrap();
        assert_eq!(d.right_act(&a0, s0), a1n(&d, 1));
        assert_eq!(d.right_act(&a0, s1), a1n(&d, -1));
        assert_eq!(d.left_act(&d.affine_reflection(0, 0), &a0), a1n(&d, -1));
        assert_eq!(d.up(0, &a0), a1n(&d, 1));
        assert_eq!(d.down(0, &a0), a1n(&d, -1));
        for n in -4..4 {
            assert_eq!(d.length(&a1n(&d, n)), n);
            assert_eq!(d.dist(&a1n(&d, 0), &a1n(&d, n)), n);
        }
    }

    #[test]
    fn a1_boxes() {
        let d = a1();
        for lam in -3..3 {
            assert_eq!(d.box_alcoves(&[lam]), vec![a1n(&d, lam - 1)]);
            assert_eq!(d.box_max(&[lam]).unwrap(), a1n(&d, lam - 1));
            let orbit = d.wlambda_orbit(&[lam]).unwrap();
            assert_eq!(orbit, vec![a1n(&d, lam - 1), a1n(&d, lam)]);
        }
        assert_eq!(d.box_of(&a1n(&d, 0)), vec![1]);
    }

    #[test]
    fn a1_order_is_line_order() {
        let d = a1();
        for m in -3..4 {
            for n in -3..4 {
                assert_eq!(d.leq(&a1n(&d, m), &a1n(&d, n)), m <= n, "{} {}", m, n);
            }
        }
        assert_eq!(d.interval(&a1n(&d, 0), &a1n(&d, 2)).len(), 3);
    }

    #[test]
    fn coords_roundtrip_and_actions_commute() {
        for n in DatumName::ALL {
            let d = RootDatum::build(n);
            let ball = d.ball(3);
            let nf = d.faces().len();
            for a in &ball {
                assert_eq!(&d.from_coords(&d.coords(a)).unwrap(), a);
                for s in 0..nf {
                    let s = FaceType(s);
                    let b = d.right_act(a, s);
                    assert_eq!(&d.right_act(&b, s), a);
                    assert_eq!((d.length(&b) - d.length(a)).abs(), 1);
                }
            }
            // left and right actions commute
            let xs: Vec<AffineElt> = ball.iter().take(12).map(|a| a.as_affine()).collect();
            for x in &xs {
                for a in ball.iter().take(12) {
                    for s in 0..nf {
                        let s = FaceType(s);
                        assert_eq!(d.right_act(&d.left_act(x, a), s), d.left_act(x, &d.right_act(a, s)));
                    }
                }
            }
        }
    }

    #[test]
    fn face_counts() {
        let expect = [(DatumName::A1, 2), (DatumName::A1xA1, 4), (DatumName::A2, 3), (DatumName::B2, 3), (DatumName::G2, 3)];
        for (n, c) in expect {
            assert_eq!(RootDatum::build(n).faces().len(), c);
        }
    }

    #[test]
    fn infeasible_coordinates() {
        let d = RootDatum::build(DatumName::A2);
        assert!(d.from_coords(&[1, 1, 1]).is_ok());
        assert!(d.from_coords(&[1, 1, 5]).is_err());
    }

    #[test]
    fn a2_up_highest_root() {
        let d = RootDatum::build(DatumName::A2);
        let f = d.fund();
        assert_eq!(d.up(2, &f), d.left_act(&d.affine_reflection(2, 1), &f));
        let s1 = d.face_by_name("s1").unwrap();
        assert_eq!(d.dist(&f, &d.right_act(&f, s1)), -1);
    }

    #[test]
    fn box_sizes() {
        // |Π_lambda| = |W_f| / [P : ZΔ]
        let expect = [(DatumName::A1, 1), (DatumName::A1xA1, 1), (DatumName::A2, 2), (DatumName::B2, 4), (DatumName::G2, 12)];
        for (n, size) in expect {
            let d = RootDatum::build(n);
            let lam = vec![0; d.rank];
            assert_eq!(d.box_alcoves(&lam).len(), size, "{}", n);
            assert_eq!(d.wlambda_orbit(&lam).unwrap().len(), d.weyl_order());
        }
    }

    #[test]
    fn reduced_words_reach_target() {
        let d = RootDatum::build(DatumName::B2);
        for a in d.ball(4) {
            let w = d.reduced_word(&a);
            assert_eq!(w.len() as i64, d.coxeter_length(&a));
            assert_eq!(d.right_act_word(&d.fund(), &w), a);
        }
    }

    /// Transitive closure of upward covers inside a coordinate box.
    fn closure_oracle(d: &RootDatum, a: &Alcove, radius: i64) -> BTreeSet<Alcove> {
        let hi = vec![radius; d.npos];
        let mut seen = BTreeSet::new();
        let mut stack = vec![a.clone()];
        seen.insert(a.clone());
        while let Some(c) = stack.pop() {
            for x in d.covers_within(&c, &hi) {
                if d.coords(&x).iter().all(|&k| k >= -radius) && seen.insert(x.clone()) {
                    stack.push(x);
                }
            }
        }
        seen
    }

    #[test]
    fn order_matches_cover_closure() {
        for n in [DatumName::A1xA1, DatumName::A2, DatumName::B2] {
            let d = RootDatum::build(n);
            let ball = d.ball(2);
            for a in &ball {
                let up = closure_oracle(&d, a, 9);
                for b in &ball {
                    assert_eq!(d.leq(a, b), up.contains(b), "{} {:?} {:?}", n, a, b);
                }
            }
        }
    }

    #[test]
    fn simple_roots_come_first() {
        for n in DatumName::ALL {
            let d = RootDatum::build(n);
            for i in 0..d.rank {
                let e: Vec<i64> = (0..d.rank).map(|j| (i == j) as i64).collect();
                assert_eq!(d.roots[i].simple_coords, e);
            }
        }
    }
}
