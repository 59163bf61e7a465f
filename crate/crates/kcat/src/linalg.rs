//! Dense linear algebra over a coefficient field, and a few polynomial-matrix helpers.

use crate::poly::Poly;
use crate::scalar::{Field, Scalar};

pub type Mat = Vec<Vec<Scalar>>;

pub fn zeros(f: Field, r: usize, c: usize) -> Mat {
    vec![vec![f.zero(); c]; r]
}

pub fn identity(f: Field, n: usize) -> Mat {
    let mut m = zeros(f, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    m
}

pub fn mat_mul(f: Field, a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(f, n, m);
    for i in 0..n {
        for (t, bt) in b.iter().enumerate() {
            let x = &a[i][t];
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                if !bt[j].is_zero() {
                    out[i][j] += &(x * &bt[j]);
                }
            }
        }
    }
    out
}

pub fn mat_vec(f: Field, a: &Mat, v: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|row| row.iter().zip(v).fold(f.zero(), |acc, (x, y)| &acc + &(x * y))).collect()
}

/// Row-reduce in place; returns pivot columns.
pub fn rref(m: &mut Mat, ncols: usize) -> Vec<usize> {
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..ncols {
        if r >= m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow).skip(c) {
                    if !y.is_zero() {
                        *x -= &(&factor * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Mat, ncols: usize) -> usize {
    let mut a = m.clone();
    rref(&mut a, ncols).len()
}

/// Basis of `{x : m x = 0}`.
pub fn kernel(f: Field, m: &Mat, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = vec![];
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&a[r][free];
        }
        out.push(v);
    }
    out
}

/// Some solution of `m x = b`, if any.
pub fn solve(f: Field, m: &Mat, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let ncols = if m.is_empty() { 0 } else { m[0].len() };
    let mut a: Mat = m.iter().zip(b).map(|(row, x)| {
        let mut r = row.clone();
        r.push(x.clone());
        r
    }).collect();
    let pivots = rref(&mut a, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![f.zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = a[r][ncols].clone();
    }
    Some(x)
}

pub fn inverse(f: Field, m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut a: Mat = m.iter().enumerate().map(|(i, row)| {
        let mut r = row.clone();
        r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
        r
    }).collect();
    let pivots = rref(&mut a, n);
    if pivots.len() < n {
        return None;
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Characteristic polynomial `det(t - m)`, coefficients from constant term upward, via Hessenberg reduction.
pub fn char_poly(f: Field, m: &Mat) -> Vec<Scalar> {
    let n = m.len();
    let mut h = m.clone();
    // reduce to upper Hessenberg form by similarity
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| !h[i][c].is_zero()) else { continue };
        if p != c + 1 {
            h.swap(p, c + 1);
            for row in h.iter_mut() {
                row.swap(p, c + 1);
            }
        }
        let pivot = h[c + 1][c].clone();
        for i in c + 2..n {
            if h[i][c].is_zero() {
                continue;
            }
            let t = &h[i][c] / &pivot;
            let rowc = h[c + 1].clone();
            for (x, y) in h[i].iter_mut().zip(&rowc) {
                *x -= &(&t * y);
            }
            for row in h.iter_mut() {
                let y = &row[i] * &t;
                row[c + 1] += &y;
            }
        }
    }
    // recurrence on leading principal minors
    let mut polys: Vec<Vec<Scalar>> = vec![vec![f.one()]];
    for k in 0..n {
        // p_{k+1} = (t - h_kk) p_k - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_i
        let mut next = vec![f.zero(); k + 2];
        for (d, c) in polys[k].iter().enumerate() {
            next[d + 1] += c;
            next[d] -= &(&h[k][k] * c);
        }
        let mut prod = f.one();
        for i in (0..k).rev() {
            prod = &prod * &h[i + 1][i];
            let coef = &h[i][k] * &prod;
            if coef.is_zero() {
                continue;
            }
            for (d, c) in polys[i].iter().enumerate() {
                next[d] -= &(&coef * c);
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Determinant of a square polynomial matrix by fraction-free elimination.
pub fn poly_det(f: Field, m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(f);
    }
    let mut a: Vec<Vec<Poly>> = m.to_vec();
    let mut sign = false;
    let mut prev = Poly::one(f);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}
