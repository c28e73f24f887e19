//! Exact rational Gaussian elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exactnum::Rational;

pub type RatMatrix = Vec<Vec<Rational>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Integer basis (as rows) of `{y : y·M = 0}`, each row primitive.
pub fn left_kernel(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    // kernel of Mᵀ
    let mut t: RatMatrix = (0..cols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect();
    let piv = rref(&mut t);
    let free: Vec<usize> = (0..rows).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); rows];
            v[f] = Rational::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -t[r][f].clone();
            }
            primitive_integer(&v)
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Some solution of `M·x = b`, or `None` if inconsistent.
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: RatMatrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &p) in piv.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2], &[2, 4], &[0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = left_kernel(&a);
        assert_eq!(k.len(), 1);
        for row in &k {
            for j in 0..2 {
                let s: Rational = row.iter().zip(&a).map(|(y, r)| Rational::from_integer(y.clone()) * &r[j]).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        let x = solve(&a, &[rat(3, 1), rat(1, 1), rat(4, 1)]).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(1, 1)]);
        assert!(solve(&a, &[rat(3, 1), rat(1, 1), rat(5, 1)]).is_none());
    }
}
