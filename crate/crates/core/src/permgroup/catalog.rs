//! Standard small groups as permutation groups.

use super::{PermGroup, Permutation, Subgroup};

fn gen(degree: usize, cycles: &[&[u32]]) -> Permutation {
    let cycles: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
    Permutation::from_cycles(degree, &cycles).expect("catalog generator")
}

fn build(degree: usize, gens: Vec<Permutation>) -> PermGroup {
    PermGroup::generate(degree, gens).expect("catalog group within cap")
}

/// Cyclic group of order `n` acting regularly on `n` points.
pub fn cyclic(n: usize) -> PermGroup {
    assert!(n >= 1);
    let cycle: Vec<u32> = (0..n as u32).collect();
    build(n, vec![gen(n, &[&cycle])])
}

pub fn symmetric(n: usize) -> PermGroup {
    assert!(n >= 1);
    let mut gens = Vec::new();
    if n >= 2 {
        let cycle: Vec<u32> = (0..n as u32).collect();
        gens.push(gen(n, &[&cycle]));
        gens.push(gen(n, &[&[0, 1]]));
    }
    build(n, gens)
}

pub fn alternating(n: usize) -> PermGroup {
    assert!(n >= 1);
    let gens = (2..n as u32).map(|k| gen(n, &[&[0, 1, k]])).collect();
    build(n, gens)
}

/// Dihedral group of order `2n` on the vertices of an `n`-gon (`n ≥ 3`).
pub fn dihedral(n: usize) -> PermGroup {
    assert!(n >= 3);
    let rot: Vec<u32> = (0..n as u32).collect();
    let refl = Permutation::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect())
        .expect("reflection");
    build(n, vec![gen(n, &[&rot]), refl])
}

pub fn klein_four() -> PermGroup {
    build(4, vec![gen(4, &[&[0, 1], &[2, 3]]), gen(4, &[&[0, 2], &[1, 3]])])
}

/// Quaternion group of order 8 in its regular representation.
pub fn quaternion() -> PermGroup {
    // Points 0..8 = 1, i, -1, -i, j, k, -j, -k; left multiplication by i and j.
    let i = Permutation::from_images(vec![1, 2, 3, 0, 5, 6, 7, 4]).unwrap();
    let j = Permutation::from_images(vec![4, 7, 6, 5, 2, 1, 0, 3]).unwrap();
    build(8, vec![i, j])
}

/// Direct product of cyclic groups on disjoint point blocks.
pub fn abelian(orders: &[usize]) -> PermGroup {
    let degree: usize = orders.iter().sum();
    let mut offset = 0u32;
    let mut gens = Vec::new();
    for &n in orders {
        let cycle: Vec<u32> = (offset..offset + n as u32).collect();
        if n > 1 {
            gens.push(gen(degree, &[&cycle]));
        }
        offset += n as u32;
    }
    build(degree.max(1), gens)
}

/// `GL(3, F₂)` acting on the 7 nonzero vectors of `F₂³`; vector `v` (as a
/// 3-bit integer) is point `v - 1`.
pub fn gl3_f2() -> PermGroup {
    // Companion matrix of x³ + x + 1 (a Singer cycle) and a transvection.
    let singer = |v: u32| -> u32 {
        let (a, b, c) = (v & 1, (v >> 1) & 1, (v >> 2) & 1);
        // x·(a + b x + c x²) = c + (a + c) x + b x²
        c | ((a ^ c) << 1) | (b << 2)
    };
    let transvection = |v: u32| -> u32 { v ^ ((v >> 1) & 1) };
    let as_perm = |f: &dyn Fn(u32) -> u32| {
        Permutation::from_images((1..=7u32).map(|v| f(v) - 1).collect()).expect("linear bijection")
    };
    build(7, vec![as_perm(&singer), as_perm(&transvection)])
}

/// Stabilizer of the point `e₁` in [`gl3_f2`].
pub fn gl3_point_stabilizer(g: &PermGroup) -> Subgroup {
    g.subgroup_where(|p| p.apply(0) == 0).expect("stabilizer")
}

/// Stabilizer of the hyperplane `{v : v₁ = 0}` in [`gl3_f2`].
pub fn gl3_hyperplane_stabilizer(g: &PermGroup) -> Subgroup {
    let plane: Vec<usize> = (1..=7u32).filter(|v| v & 1 == 0).map(|v| (v - 1) as usize).collect();
    g.subgroup_where(|p| plane.iter().all(|&x| plane.contains(&p.apply(x))))
        .expect("stabilizer")
}

/// `PSL(2, F_q)` for an odd prime `q`, acting on the projective line with
/// points `0..q-1` and `∞ = q`, generated by `x ↦ x + 1` and `x ↦ −1/x`.
pub fn psl2(q: u32) -> PermGroup {
    assert!(q >= 3 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0), "q must be an odd prime");
    let inf = q;
    let shift = Permutation::from_images((0..=q).map(|x| if x == inf { inf } else { (x + 1) % q }).collect())
        .unwrap();
    let inv = |x: u32| -> u32 {
        // modular inverse by Fermat
        let mut r = 1u64;
        let mut b = x as u64;
        let mut e = (q - 2) as u64;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % q as u64;
            }
            b = b * b % q as u64;
            e >>= 1;
        }
        r as u32
    };
    let neg_recip = Permutation::from_images(
        (0..=q)
            .map(|x| {
                if x == inf {
                    0
                } else if x == 0 {
                    inf
                } else {
                    (q - inv(x)) % q
                }
            })
            .collect(),
    )
    .unwrap();
    build(q as usize + 1, vec![shift, neg_recip])
}
