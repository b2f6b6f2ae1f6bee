use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LatticeError;

/// Dense row-major matrix over arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LatticeError> {
        if rows == 0 || cols == 0 {
            return Err(LatticeError::InvalidDimensions { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LatticeError::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(IntMat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diag<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone().into();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, LatticeError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LatticeError::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        Self::new(r, c, data)
    }

    pub fn from_fn<F: FnMut(usize, usize) -> BigInt>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &IntMat) -> Result<IntMat, LatticeError> {
        if self.cols != rhs.rows {
            return Err(LatticeError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        if v.len() != self.cols {
            return Err(LatticeError::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn neg(&self) -> IntMat {
        self.scale(&BigInt::from(-1))
    }

    fn require_square(&self) -> Result<(), LatticeError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LatticeError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, LatticeError> {
        self.require_square()?;
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// The classical adjugate, so that `M * adj(M) = det(M) * I`.
    pub fn adjugate(&self) -> Result<IntMat, LatticeError> {
        self.require_square()?;
        let n = self.rows;
        if n == 1 {
            return Ok(IntMat::identity(1));
        }
        match self.adjugate_nonsingular()? {
            Some(adj) => Ok(adj),
            None => Ok(self.adjugate_by_cofactors()),
        }
    }

    /// Bareiss forward elimination on `[M | I]` followed by exact integer
    /// back-substitution of `U X = det * W`; every division is exact because
    /// `det * M⁻¹` is integral.
    fn adjugate_nonsingular(&self) -> Result<Option<IntMat>, LatticeError> {
        let n = self.rows;
        let w = 2 * n;
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { BigInt::one() } else { BigInt::zero() }));
                row
            })
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(None);
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..w {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let det = &sign * &a[n - 1][n - 1];
        let mut adj = IntMat::zeros(n, n);
        for c in 0..n {
            let mut x = vec![BigInt::zero(); n];
            for i in (0..n).rev() {
                let mut acc = &det * &a[i][n + c];
                for j in i + 1..n {
                    acc -= &a[i][j] * &x[j];
                }
                let (q, r) = acc.div_rem(&a[i][i]);
                debug_assert!(r.is_zero(), "inexact back-substitution");
                x[i] = q;
            }
            for (i, v) in x.into_iter().enumerate() {
                adj[(i, c)] = v;
            }
        }
        Ok(Some(adj))
    }

    fn adjugate_by_cofactors(&self) -> IntMat {
        let n = self.rows;
        IntMat::from_fn(n, n, |i, j| {
            // adj[i][j] = (-1)^{i+j} det(M with row j and column i removed)
            let minor = IntMat::from_fn(n - 1, n - 1, |r, c| {
                let rr = if r < j { r } else { r + 1 };
                let cc = if c < i { c } else { c + 1 };
                self[(rr, cc)].clone()
            });
            let d = minor.det().expect("minor is square");
            if (i + j) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    }

    /// Cofactor matrix `C` with `C[i][j] = (-1)^{i+j} minor(i, j)`; equals `adj(M)ᵀ`.
    pub fn cofactor_matrix(&self) -> Result<IntMat, LatticeError> {
        Ok(self.adjugate()?.transpose())
    }

    /// Column-style Hermite normal form: same column span, lower echelon
    /// shape, positive pivots, entries left of a pivot reduced into `[0, pivot)`.
    /// Zero columns are moved to the right.
    pub fn hnf(&self) -> IntMat {
        let mut m = self.clone();
        let mut pc = 0;
        for r in 0..m.rows {
            if pc >= m.cols {
                break;
            }
            for c in pc + 1..m.cols {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let ext = m[(r, pc)].extended_gcd(&m[(r, c)]);
                if m[(r, pc)].is_zero() {
                    m.swap_cols(pc, c);
                    continue;
                }
                let a = m[(r, pc)].clone();
                let b = m[(r, c)].clone();
                let ga = &a / &ext.gcd;
                let gb = &b / &ext.gcd;
                // [pc, c] <- [x*pc + y*c, -gb*pc + ga*c]; the transform has det 1.
                for i in 0..m.rows {
                    let u = m[(i, pc)].clone();
                    let v = m[(i, c)].clone();
                    m[(i, pc)] = &ext.x * &u + &ext.y * &v;
                    m[(i, c)] = &ga * &v - &gb * &u;
                }
            }
            if m[(r, pc)].is_zero() {
                continue;
            }
            if m[(r, pc)].is_negative() {
                for i in 0..m.rows {
                    m[(i, pc)] = -&m[(i, pc)];
                }
            }
            let pivot = m[(r, pc)].clone();
            for c in 0..pc {
                let q = m[(r, c)].div_floor(&pivot);
                if !q.is_zero() {
                    for i in 0..m.rows {
                        let t = &q * &m[(i, pc)];
                        m[(i, c)] -= t;
                    }
                }
            }
            pc += 1;
        }
        m
    }

    /// Smith normal form diagonal and invariant factors (nonzero diagonal
    /// entries, a divisibility chain).
    pub fn snf(&self) -> (IntMat, Vec<BigInt>) {
        let s = self.smith();
        (s.diagonal, s.invariant_factors)
    }

    /// Smith normal form with unimodular transforms: `left * M * right = diagonal`.
    pub fn smith(&self) -> SmithForm {
        let mut d = self.clone();
        let mut left = IntMat::identity(self.rows);
        let mut right = IntMat::identity(self.cols);
        let k = self.rows.min(self.cols);
        for t in 0..k {
            loop {
                // Pivot: smallest nonzero absolute value in the trailing block.
                let mut best: Option<(usize, usize)> = None;
                for i in t..d.rows {
                    for j in t..d.cols {
                        if !d[(i, j)].is_zero()
                            && best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    break;
                };
                d.swap_rows(t, pi);
                left.swap_rows(t, pi);
                d.swap_cols(t, pj);
                right.swap_cols(t, pj);
                let mut clean = true;
                for i in t + 1..d.rows {
                    let q = d[(i, t)].div_floor(&d[(t, t)]);
                    if !q.is_zero() {
                        d.add_row_multiple(i, t, &-&q);
                        left.add_row_multiple(i, t, &-&q);
                    }
                    if !d[(i, t)].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..d.cols {
                    let q = d[(t, j)].div_floor(&d[(t, t)]);
                    if !q.is_zero() {
                        d.add_col_multiple(j, t, &-&q);
                        right.add_col_multiple(j, t, &-&q);
                    }
                    if !d[(t, j)].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // Divisibility: fold any offending row into row t and retry.
                let piv = d[(t, t)].clone();
                let bad = (t + 1..d.rows)
                    .find(|&i| (t + 1..d.cols).any(|j| !d[(i, j)].is_multiple_of(&piv)));
                match bad {
                    Some(i) => {
                        d.add_row_multiple(t, i, &BigInt::one());
                        left.add_row_multiple(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            if d[(t, t)].is_negative() {
                for j in 0..d.cols {
                    d[(t, j)] = -&d[(t, j)];
                }
                for j in 0..left.cols {
                    left[(t, j)] = -&left[(t, j)];
                }
            }
        }
        let invariant_factors = (0..k)
            .map(|i| d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect();
        SmithForm {
            diagonal: d,
            invariant_factors,
            left,
            right,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let t = k * &self[(src, j)];
            self[(dst, j)] += t;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let t = k * &self[(i, src)];
            self[(i, dst)] += t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for (k, x) in self.row(r).iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x)?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntMat,
    pub invariant_factors: Vec<BigInt>,
    pub left: IntMat,
    pub right: IntMat,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMat {
        IntMat::from_rows(rows).unwrap()
    }

    #[test]
    fn det_and_adjugate_small() {
        let i3 = IntMat::identity(3);
        assert_eq!(i3.det().unwrap(), BigInt::one());
        assert_eq!(i3.adjugate().unwrap(), i3);
        let d = IntMat::diag(&[2i64, 3]);
        assert_eq!(d.det().unwrap(), BigInt::from(6));
        assert_eq!(d.adjugate().unwrap(), IntMat::diag(&[3i64, 2]));
    }

    #[test]
    fn det_needs_pivoting() {
        let a = m(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.det().unwrap(), BigInt::from(-1));
        let a = m(&[vec![2, 1, -2], vec![-1, 0, 2], vec![0, 0, 1]]);
        assert_eq!(a.det().unwrap(), BigInt::one());
    }

    #[test]
    fn singular_adjugate_uses_cofactors() {
        let a = m(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(a.det().unwrap(), BigInt::zero());
        assert_eq!(a.adjugate().unwrap(), m(&[vec![4, -2], vec![-2, 1]]));
        let prod = a.mul(&a.adjugate().unwrap()).unwrap();
        assert_eq!(prod, IntMat::zeros(2, 2));
    }

    #[test]
    fn non_square_errors() {
        let a = m(&[vec![1, 2, 3]]);
        assert!(matches!(a.det(), Err(LatticeError::NonSquare { .. })));
        assert!(matches!(a.adjugate(), Err(LatticeError::NonSquare { .. })));
        assert!(IntMat::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn hnf_of_simple_lattice() {
        let a = m(&[vec![2, 4], vec![0, 6]]);
        let h = a.hnf();
        // Column span of {(2,0), (4,6)} = {(2,0), (0,6)}.
        assert_eq!(h, m(&[vec![2, 0], vec![0, 6]]));
    }

    #[test]
    fn snf_diag_chain() {
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let (_, f) = a.snf();
        assert_eq!(f, vec![BigInt::one(), BigInt::from(6)]);
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = a.smith();
        assert_eq!(
            s.invariant_factors,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        assert_eq!(s.left.mul(&a).unwrap().mul(&s.right).unwrap(), s.diagonal);
    }
}
