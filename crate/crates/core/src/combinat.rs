//! Small exact combinatorics: binomials, factorials, Catalan and Narayana
//! numbers, subsets, and non-crossing matchings.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::Rational;

/// `C(n, k)` as a big integer; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(n, k)` as a rational.
pub fn binom_q(n: i64, k: i64) -> Rational {
    Rational::from_integer(binomial(n, k))
}

/// `C(n, k)` as a plain integer, for counts known to be small.
pub fn binom_usize(n: usize, k: usize) -> usize {
    binomial(n as i64, k as i64).try_into().expect("binomial overflow")
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn factorial_q(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

pub fn catalan(l: u64) -> BigInt {
    binomial(2 * l as i64, l as i64) / BigInt::from(l + 1)
}

/// `(1/n) C(n,k) C(n,k+1)`.
pub fn narayana(n: usize, k: usize) -> BigInt {
    let (n, k) = (n as i64, k as i64);
    binomial(n, k) * binomial(n, k + 1) / BigInt::from(n)
}

/// The chord-diagram count `sum_l C(n-1,k-l) C(n-k+l-1,2l) Cat(l)`.
pub fn chord_count(n: usize, k: usize) -> BigInt {
    let (n, k) = (n as i64, k as i64);
    (0..=k)
        .map(|l| binomial(n - 1, k - l) * binomial(n - k + l - 1, 2 * l) * catalan(l as u64))
        .sum()
}

/// `(-1)^e` as a rational.
pub fn sign_q(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Sign of the permutation sorting `seq`; zero if `seq` has a repeat.
pub fn permutation_sign(seq: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] == seq[j] {
                return 0;
            }
            if seq[i] > seq[j] {
                s = -s;
            }
        }
    }
    s
}

/// All non-crossing perfect matchings of the sorted slice `points`.
///
/// The first point is matched to a partner that leaves an even number of
/// points strictly inside the chord; inside and outside recurse
/// independently.
pub fn noncrossing_matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![vec![]];
    }
    if points.len() % 2 == 1 {
        return vec![];
    }
    let mut out = Vec::new();
    for partner in (1..points.len()).step_by(2) {
        let inner = noncrossing_matchings(&points[1..partner]);
        let outer = noncrossing_matchings(&points[partner + 1..]);
        for i in &inner {
            for o in &outer {
                let mut m = vec![(points[0], points[partner])];
                m.extend_from_slice(i);
                m.extend_from_slice(o);
                m.sort_unstable();
                out.push(m);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn small_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
        let cats: Vec<BigInt> = (0..6).map(catalan).collect();
        assert_eq!(cats, [1, 1, 2, 5, 14, 42].map(BigInt::from));
        let row: Vec<BigInt> = (0..5).map(|k| narayana(5, k)).collect();
        assert_eq!(row, [1, 10, 20, 10, 1].map(BigInt::from));
    }

    #[test]
    fn chord_count_is_narayana() {
        for n in 1..12 {
            for k in 0..n {
                assert_eq!(chord_count(n, k), narayana(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn matchings_are_catalan_and_noncrossing() {
        for l in 0..6 {
            let pts: Vec<usize> = (0..2 * l).collect();
            let ms = noncrossing_matchings(&pts);
            assert_eq!(BigInt::from(ms.len()), catalan(l as u64));
            for m in &ms {
                for (&(a, b), &(c, d)) in m.iter().tuple_combinations() {
                    let crosses = (a < c && c < b && b < d) || (c < a && a < d && d < b);
                    assert!(!crosses, "{m:?}");
                }
            }
        }
        assert!(noncrossing_matchings(&[1, 2, 3]).is_empty());
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[2, 3, 4]), 1);
        assert_eq!(permutation_sign(&[3, 2, 4]), -1);
        assert_eq!(permutation_sign(&[4, 2, 3]), 1);
        assert_eq!(permutation_sign(&[2, 2]), 0);
    }
}
