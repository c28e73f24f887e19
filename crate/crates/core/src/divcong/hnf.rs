//! Column-style Hermite normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch");
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .map(|(x, brow)| x * &brow[j])
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn col_combine(m: &mut IntMatrix, r: usize, j: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
    // (col_r, col_j) <- (s·col_r + t·col_j, u·col_r + v·col_j)
    for row in m.iter_mut() {
        let a = row[r].clone();
        let b = row[j].clone();
        row[r] = s * &a + t * &b;
        row[j] = u * &a + v * &b;
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let delta = q * &row[src];
        row[dst] -= delta;
    }
}

fn col_negate(m: &mut IntMatrix, c: usize) {
    for row in m.iter_mut() {
        row[c] = -&row[c];
    }
}

/// Returns `(H, U)` with `A·U = H`, `U` unimodular and `H` in column
/// Hermite normal form: nonzero columns first, each with a positive pivot in a
/// strictly lower row than the previous one, zeros to the right of every
/// pivot and entries to its left reduced into `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut h = a.clone();
    let mut u = identity(cols);
    let mut r = 0;
    for i in 0..rows {
        if r == cols {
            break;
        }
        for j in r + 1..cols {
            if h[i][j].is_zero() {
                continue;
            }
            let x = h[i][r].clone();
            let y = h[i][j].clone();
            let eg = x.extended_gcd(&y);
            let (mut g, mut s, mut t) = (eg.gcd, eg.x, eg.y);
            if g.is_negative() {
                g = -g;
                s = -s;
                t = -t;
            }
            let uu = -(&y / &g);
            let vv = &x / &g;
            col_combine(&mut h, r, j, &s, &t, &uu, &vv);
            col_combine(&mut u, r, j, &s, &t, &uu, &vv);
        }
        if h[i][r].is_zero() {
            continue;
        }
        if h[i][r].is_negative() {
            col_negate(&mut h, r);
            col_negate(&mut u, r);
        }
        let p = h[i][r].clone();
        for c in 0..r {
            let q = h[i][c].div_floor(&p);
            if !q.is_zero() {
                col_axpy(&mut h, c, r, &q);
                col_axpy(&mut u, c, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Pivot rows of the nonzero columns of a matrix in column HNF.
pub fn pivots(h: &IntMatrix) -> Vec<usize> {
    let cols = h.first().map_or(0, Vec::len);
    (0..cols)
        .map_while(|c| (0..h.len()).find(|&i| !h[i][c].is_zero()))
        .collect()
}

/// Checks the shape promised by [`hnf`].
pub fn is_column_hnf(h: &IntMatrix) -> bool {
    let cols = h.first().map_or(0, Vec::len);
    let piv = pivots(h);
    let rank = piv.len();
    if (rank..cols).any(|c| h.iter().any(|row| !row[c].is_zero())) {
        return false;
    }
    for (c, &p) in piv.iter().enumerate() {
        if c > 0 && p <= piv[c - 1] {
            return false;
        }
        let pv = &h[p][c];
        if !pv.is_positive() {
            return false;
        }
        if (c + 1..cols).any(|j| !h[p][j].is_zero()) {
            return false;
        }
        if (0..c).any(|j| h[p][j].is_negative() || &h[p][j] >= pv) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_i64(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn identity_is_fixed() {
        let a = identity(4);
        let (h, u) = hnf(&a);
        assert_eq!(h, a);
        assert_eq!(u, a);
    }

    #[test]
    fn two_by_two() {
        let a = from_i64(&[&[2, 1], &[0, 1]]);
        let (h, u) = hnf(&a);
        assert_eq!(mat_mul(&a, &u), h);
        assert!(is_column_hnf(&h));
        assert_eq!(det(&u).abs(), BigInt::one());
        assert_eq!(det(&h).abs(), det(&a).abs());
    }

    // The column HNF of a nonsingular 2×2 matrix is the unique lower
    // triangular [[p, 0], [x, r]] with 0 <= x < r whose columns generate the
    // same lattice; search for it directly.
    #[test]
    fn two_by_two_brute_force() {
        let cases: &[[i64; 4]] = &[[2, 1, 0, 1], [4, 6, 2, 5], [3, 5, 7, 2], [-6, 4, 9, 1]];
        for c in cases {
            let a = from_i64(&[&[c[0], c[1]], &[c[2], c[3]]]);
            let d = (c[0] * c[3] - c[1] * c[2]).abs();
            let in_lattice = |v0: i64, v1: i64| {
                // solve A·(s, t) = v over Q and test integrality
                let dd = c[0] * c[3] - c[1] * c[2];
                let s = v0 * c[3] - c[1] * v1;
                let t = c[0] * v1 - c[2] * v0;
                s % dd == 0 && t % dd == 0
            };
            let p = (1..=d)
                .find(|&p| (-d..=d).any(|x| in_lattice(p, x)))
                .unwrap();
            let r = d / p;
            let x = (0..r).find(|&x| in_lattice(p, x)).unwrap();
            let (h, _) = hnf(&a);
            assert_eq!(h, from_i64(&[&[p, 0], &[x, r]]), "case {:?}", c);
        }
    }

    #[test]
    fn rank_deficient() {
        let a = from_i64(&[&[2, 4, 6], &[1, 2, 3], &[0, 0, 0]]);
        let (h, u) = hnf(&a);
        assert_eq!(mat_mul(&a, &u), h);
        assert!(is_column_hnf(&h));
        assert_eq!(pivots(&h).len(), 1);
        assert_eq!(h[0][0], BigInt::from(2));
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
        prop::collection::vec(prop::collection::vec(-20i64..=20, cols), rows)
            .prop_map(|m| m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
    }

    proptest! {
        #[test]
        fn random_six_by_eight(a in matrix(6, 8)) {
            let (h, u) = hnf(&a);
            prop_assert_eq!(mat_mul(&a, &u), h.clone());
            prop_assert!(is_column_hnf(&h));
            prop_assert_eq!(det(&u).abs(), BigInt::one());
        }

        #[test]
        fn square_determinant_preserved(a in matrix(4, 4)) {
            let (h, _) = hnf(&a);
            prop_assert_eq!(det(&h).abs(), det(&a).abs());
        }
    }
}
