use std::collections::BTreeSet;

use gassmann_core::gassmann::{
    integral_search, intertwiner_basis, is_gassmann, verify_integral_triple, GassmannError, GassmannTriple,
};
use gassmann_core::permgroup::catalog;
use gassmann_core::{IntMat, PermGroup, Permutation, Subgroup};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dimension of `{B : B P₁(g) = P₂(g) B for all generators}` by row
/// reduction of the linear equations in the n² entries of B.
fn equivariant_dimension(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> usize {
    let c1 = g.coset_action(h1).unwrap();
    let c2 = g.coset_action(h2).unwrap();
    let n = c1.len();
    let var = |j: usize, i: usize| j * n + i;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for s in g.generators() {
        let p1 = c1.action(g, s);
        let p2 = c2.action(g, s);
        // Entrywise: B[g·j][g·i] = B[j][i].
        for j in 0..n {
            for i in 0..n {
                let mut row = vec![BigRational::zero(); n * n];
                row[var(p2.apply(j), p1.apply(i))] += BigRational::one();
                row[var(j, i)] -= BigRational::one();
                rows.push(row);
            }
        }
    }
    let mut rank = 0;
    let cols = n * n;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let piv = rows[rank][c].clone();
        let pivot_row: Vec<BigRational> = rows[rank].iter().map(|x| x / &piv).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    cols - rank
}

fn matrix_rank(ms: &[IntMat]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = ms
        .iter()
        .map(|m| {
            (0..m.rows())
                .flat_map(|j| m.row(j).iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>())
                .collect()
        })
        .collect();
    let mut rank = 0;
    let width = rows.first().map_or(0, Vec::len);
    for c in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        for r in rank + 1..rows.len() {
            let f = &rows[r][c] / &rows[rank][c];
            let pr = rows[rank].clone();
            for (x, y) in rows[r].iter_mut().zip(pr) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

fn brute_double_cosets(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> usize {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for x in g.elements() {
        let set: BTreeSet<usize> = h1
            .elements(g)
            .flat_map(|a| h2.elements(g).map(move |b| a.compose(x).compose(b)))
            .map(|p| g.index_of(&p).unwrap())
            .collect();
        seen.insert(set.into_iter().collect());
    }
    seen.len()
}

fn check_basis(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> usize {
    let basis = intertwiner_basis(g, h1, h2).unwrap();
    assert_eq!(basis.len(), equivariant_dimension(g, h1, h2));
    assert_eq!(matrix_rank(&basis), basis.len());
    assert_eq!(basis.len(), g.double_cosets(h1, h2).unwrap().len());
    basis.len()
}

#[test]
fn s3_intertwiners_span_the_equivariant_space() {
    let g = catalog::symmetric(3);
    let h = g.subgroup(&[Permutation::parse_cycles(3, "(0 1)").unwrap()]).unwrap();
    assert_eq!(check_basis(&g, &h, &h), 2);
    assert_eq!(brute_double_cosets(&g, &h, &h), 2);
}

#[test]
fn gl3_intertwiners_and_double_cosets() {
    let g = catalog::gl3_f2();
    let p = catalog::gl3_point_stabilizer(&g);
    let l = catalog::gl3_hyperplane_stabilizer(&g);
    assert_eq!(check_basis(&g, &p, &p), 2);
    assert_eq!(check_basis(&g, &p, &l), 2);
    assert_eq!(g.double_cosets(&p, &p).unwrap().len(), brute_double_cosets(&g, &p, &p));
    assert_eq!(g.double_cosets(&p, &l).unwrap().len(), brute_double_cosets(&g, &p, &l));
}

#[test]
fn gl3_bounded_search_outcome() {
    // |det(a·B_in + b·B_out)| = 8·|3a + 4b|·|a − b|⁶ is never 1, so the
    // exhaustive search over the box must come back empty.
    let g = catalog::gl3_f2();
    let p = catalog::gl3_point_stabilizer(&g);
    let l = catalog::gl3_hyperplane_stabilizer(&g);
    assert!(is_gassmann(&g, &p, &l).unwrap());
    let t = GassmannTriple::new(&g, p, l).unwrap();
    assert!(!t.are_conjugate());
    match integral_search(&t, 3, 10_000, 0) {
        Err(GassmannError::NotFoundWithinBudget { trials }) => assert_eq!(trials, 48),
        Ok((a, _)) => panic!("unexpected unimodular intertwiner {:?}", a.matrix()),
        Err(e) => panic!("{}", e),
    }
}

#[test]
fn conjugate_pair_search_returns_permutation_matrix() {
    let g = catalog::symmetric(4);
    let h1 = g.subgroup(&[Permutation::parse_cycles(4, "(0 1 2)").unwrap()]).unwrap();
    let h2 = g.conjugate_subgroup(&h1, &Permutation::parse_cycles(4, "(2 3)").unwrap()).unwrap();
    let t = GassmannTriple::new(&g, h1, h2).unwrap();
    let (a, _) = integral_search(&t, 1, 1000, 0).unwrap();
    let m = a.matrix();
    for j in 0..m.rows() {
        let ones = m.row(j).iter().filter(|x| x.is_one()).count();
        let zeros = m.row(j).iter().filter(|x| x.is_zero()).count();
        assert_eq!((ones, zeros), (1, m.cols() - 1));
    }
    assert!(verify_integral_triple(&t, m).passed);
}
