use crate::ring::InvolutiveRing;

use super::Mat;

/// Determinant over a commutative ring, by dynamic programming over the
/// sets of columns already used (division free, `O(2ⁿ·n)` products).
pub fn det<R: InvolutiveRing>(r: &R, m: &Mat<R::Elem>) -> R::Elem {
    assert!(m.is_square(), "det needs a square matrix");
    assert!(r.is_commutative(), "det needs a commutative ring");
    let n = m.rows();
    assert!(n <= 24, "det: dimension {n} too large");
    let mut dp: Vec<Option<R::Elem>> = vec![None; 1 << n];
    dp[0] = Some(r.one());
    for mask in 0usize..(1 << n) {
        let Some(cur) = dp[mask].clone() else { continue };
        if r.is_zero(&cur) {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for j in 0..n {
            if mask & (1 << j) != 0 {
                continue;
            }
            let a = m.get(row, j);
            if r.is_zero(a) {
                continue;
            }
            let larger = (mask >> (j + 1)).count_ones();
            let mut term = r.mul(&cur, a);
            if larger % 2 == 1 {
                term = r.neg(&term);
            }
            let next = mask | (1 << j);
            dp[next] = Some(match dp[next].take() {
                Some(v) => r.add(&v, &term),
                None => term,
            });
        }
    }
    dp[(1 << n) - 1].clone().unwrap_or_else(|| r.zero())
}

/// Invertibility over a commutative ring: the determinant is a unit.
pub fn is_invertible_commutative<R: InvolutiveRing>(r: &R, m: &Mat<R::Elem>) -> bool {
    r.unit_inverse(&det(r, m)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteRing, PolyRing, RingSpec};

    #[test]
    fn det_small() {
        let z7 = FiniteRing::new(&RingSpec::zn(7)).unwrap();
        let m = Mat::from_fn(3, 3, |i, j| z7.from_int([[2, 0, 1], [1, 3, 2], [1, 1, 1]][i][j]));
        // 2(3−2) − 0 + 1(1−3) = 0
        assert!(z7.is_zero(&det(&z7, &m)));
        let m2 = Mat::from_fn(2, 2, |i, j| z7.from_int([[2, 1], [1, 3]][i][j]));
        assert_eq!(det(&z7, &m2), z7.from_int(5));
    }

    #[test]
    fn polynomial_matrix_without_unit_entries_is_invertible() {
        let f2 = FiniteRing::new(&RingSpec::fp(2)).unwrap();
        let r = PolyRing::s(f2);
        let s = r.x();
        let s1 = r.add(&s, &r.one());
        let m = Mat::from_rows(vec![vec![s.clone(), s1.clone()], vec![s1, s]]).unwrap();
        assert!(is_invertible_commutative(&r, &m));
        assert!(m.invert_gauss(&r).is_none());
    }
}
