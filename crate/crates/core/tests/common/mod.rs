//! Independent reference implementations used as test oracles. None of them
//! share code with the library beyond scalar arithmetic.

#![allow(dead_code)]

use omrep::exactalg::{Matrix, Ring, Scalar, SkewMatrix};
use rand::Rng;

/// Permutations of `0..n` with their signs, by Heap's algorithm.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i8)> {
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i8;
    out.push((a.clone(), sign));
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Leibniz expansion.
pub fn leibniz_det(m: &Matrix) -> Scalar {
    assert_eq!(m.rows(), m.cols());
    let ring = m.ring();
    let mut acc = ring.zero();
    for (perm, sign) in permutations(m.rows()) {
        let mut term = ring.one();
        for (i, &j) in perm.iter().enumerate() {
            term = term * m.get(i, j);
        }
        acc = if sign > 0 { acc + term } else { acc - term };
    }
    acc
}

/// Sum over perfect matchings of `0..k` (indices into `idx`), each signed by
/// its crossing number.
pub fn matching_pfaffian(a: &SkewMatrix, idx: &[usize]) -> Scalar {
    let ring = a.ring();
    if idx.len() % 2 == 1 {
        return ring.zero();
    }
    let mut acc = ring.zero();
    let mut pairs = Vec::new();
    matchings(idx.len(), &mut vec![false; idx.len()], &mut pairs, &mut |ps: &[(usize, usize)]| {
        let crossings = ps
            .iter()
            .enumerate()
            .flat_map(|(x, &(a1, b1))| ps[x + 1..].iter().map(move |&(a2, b2)| (a1, b1, a2, b2)))
            .filter(|&(a1, b1, a2, b2)| (a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1))
            .count();
        let mut term = ring.one();
        for &(i, j) in ps {
            term = term * a.get(idx[i], idx[j]);
        }
        acc = if crossings % 2 == 0 { acc.clone() + term } else { acc.clone() - term };
    });
    acc
}

fn matchings(k: usize, used: &mut Vec<bool>, pairs: &mut Vec<(usize, usize)>, f: &mut dyn FnMut(&[(usize, usize)])) {
    let Some(first) = (0..k).find(|&i| !used[i]) else {
        f(pairs);
        return;
    };
    used[first] = true;
    for j in first + 1..k {
        if !used[j] {
            used[j] = true;
            pairs.push((first, j));
            matchings(k, used, pairs, f);
            pairs.pop();
            used[j] = false;
        }
    }
    used[first] = false;
}

pub fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Random skew matrix with entries drawn by `entry`.
pub fn random_skew(ring: Ring, n: usize, mut entry: impl FnMut() -> Scalar) -> SkewMatrix {
    let upper: Vec<Scalar> = (0..n * n.saturating_sub(1) / 2).map(|_| entry()).collect();
    SkewMatrix::from_upper(ring, n, &upper).unwrap()
}

pub fn random_rational(rng: &mut impl Rng, ring: Ring) -> Scalar {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=5);
    ring.parse(&format!("{num}/{den}")).unwrap()
}

pub fn random_residue(rng: &mut impl Rng, ring: Ring, p: u64) -> Scalar {
    ring.from_i64(rng.gen_range(0..p as i64))
}

/// Every `x ∈ {0,1}^(2^n)`, as an indicator bitmask, solving all Wick
/// equations over GF(2), found by backtracking over coordinates in mask
/// order. Each equation is checked as soon as its last coordinate is fixed.
pub fn gf2_wick_solutions(n: usize) -> Vec<u64> {
    let count = 1usize << n;
    // equation -> list of coordinate pairs
    let mut by_last: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(); count];
    for j1 in 0..count {
        for j2 in j1 + 1..count {
            let d = (j1 ^ j2) as u32;
            let terms: Vec<(usize, usize)> = bits(d).into_iter().map(|i| (j1 ^ 1 << i, j2 ^ 1 << i)).collect();
            let last = terms.iter().map(|&(a, b)| a.max(b)).max().unwrap();
            by_last[last].push(terms);
        }
    }
    let mut out = Vec::new();
    let mut x = vec![false; count];
    fn go(k: usize, x: &mut Vec<bool>, by_last: &[Vec<Vec<(usize, usize)>>], out: &mut Vec<u64>) {
        if k == x.len() {
            out.push(x.iter().enumerate().filter(|(_, &b)| b).fold(0u64, |acc, (i, _)| acc | 1 << i));
            return;
        }
        for v in [false, true] {
            x[k] = v;
            let ok = by_last[k].iter().all(|terms| terms.iter().filter(|&&(a, b)| x[a] && x[b]).count() % 2 == 0);
            if ok {
                go(k + 1, x, by_last, out);
            }
        }
        x[k] = false;
    }
    go(0, &mut x, &by_last, &mut out);
    out.retain(|&v| v != 0);
    out
}

/// Plücker coordinates as every maximal minor computed by Leibniz, colex
/// order of column sets.
pub fn leibniz_minors(a: &Matrix) -> Vec<(u32, Scalar)> {
    let (r, n) = (a.rows(), a.cols());
    let rows: Vec<usize> = (0..r).collect();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (m, leibniz_det(&a.submatrix(&rows, &bits(m)))))
        .collect()
}
