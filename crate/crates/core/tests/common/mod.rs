//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use gassmann_core::IntMat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `M⁻¹` over ℚ by Gauss-Jordan elimination, `None` when singular.
pub fn rational_inverse(m: &IntMat) -> Option<Vec<Vec<BigRational>>> {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(m[(i, j)].clone())
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = &*x / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let row_c = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(row_c) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Membership of `v` in the column span of `m`, by solving over ℚ.
pub fn in_lattice(inv: &[Vec<BigRational>], v: &[BigInt]) -> bool {
    inv.iter().all(|row| {
        let x: BigRational = row
            .iter()
            .zip(v)
            .map(|(a, b)| a * BigRational::from_integer(b.clone()))
            .fold(BigRational::zero(), |s, t| s + t);
        x.is_integer()
    })
}

/// For each i the least k in 1..=|det| with k·eᵢ in the lattice, by
/// testing every k in turn.
pub fn brute_force_mns(m: &IntMat) -> Vec<BigInt> {
    let n = m.rows();
    let det = m.det().unwrap().abs();
    let inv = rational_inverse(m).expect("nonsingular");
    let limit = det.to_u64().expect("small determinant");
    (0..n)
        .map(|i| {
            (1..=limit)
                .map(BigInt::from)
                .find(|k| {
                    let v: Vec<BigInt> = (0..n).map(|j| if j == i { k.clone() } else { BigInt::zero() }).collect();
                    in_lattice(&inv, &v)
                })
                .expect("det·eᵢ always lies in the lattice")
        })
        .collect()
}

/// Exponent of `(ℤ/n)×` by brute-force element orders.
pub fn unit_group_exponent(n: u64) -> u64 {
    use num_integer::Integer;
    if n <= 2 {
        return 1;
    }
    (1..n)
        .filter(|x| x.gcd(&n) == 1)
        .map(|x| {
            let mut k = 1;
            let mut y = x;
            while y != 1 {
                y = y * x % n;
                k += 1;
            }
            k
        })
        .fold(1, |e, k| e.lcm(&k))
}

/// `w_i(ℚ)` straight from the defining maximum over prime powers.
pub fn w_rationals(i: u64) -> u64 {
    let mut w = 1;
    for p in 2..=i + 1 {
        if !(2..p).all(|d| p % d != 0) {
            continue;
        }
        let mut pk = p;
        while i % unit_group_exponent(pk) == 0 {
            w *= p;
            pk *= p;
        }
    }
    w
}
