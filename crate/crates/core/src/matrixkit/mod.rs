//! Dense matrices over a [`Field`] with the exact linear algebra the
//! constructive decompositions require: Gaussian elimination (exact over
//! the rationals, partially pivoted in floats), nullspaces, Kronecker
//! products and minimal polynomials.

pub mod similarity;
pub mod factor;

use crate::scalarkit::unipoly::{charpoly, UniPoly};
use crate::scalarkit::{Field, Rat};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("input must have trace zero")]
    NonzeroTrace,
    #[error("input must be nonscalar")]
    ScalarInput,
    #[error("prescribed diagonal must sum to the trace")]
    TraceMismatch,
    #[error("prescribed eigenvalues must be pairwise distinct")]
    RepeatedLambda,
    #[error("matrix must have zero diagonal")]
    NonzeroDiagonal,
    #[error("matrix has a repeated eigenvalue")]
    RepeatedEigenvalue,
    #[error("prescribed spectra do not match the determinant")]
    DeterminantMismatch,
    #[error("prescribed eigenvalues must all be nonzero")]
    SingularPrescription,
    #[error("eigenvalue computation requires a rational or approximate spectrum")]
    IrrationalSpectrum,
    #[error("construction failed after {0} attempts")]
    ConstructionFailed(usize),
    #[error("{n} is not representable as a*{p} + b*{q} with a,b >= 0")]
    NotRepresentable { n: u64, p: u64, q: u64 },
    #[error("moduli must be coprime")]
    NotCoprime,
}

/// Dense row-major matrix. The public contracts deal in square matrices;
/// rectangular shapes appear in internal solves.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<K: Field> {
    rows: usize,
    cols: usize,
    a: Vec<K>,
}

impl<K: Field> Matrix<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            a: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, K::one());
        }
        m
    }

    pub fn scalar(n: usize, c: K) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal(d: &[K]) -> Self {
        let mut m = Self::zero(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut a = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                a.push(f(i, j));
            }
        }
        Matrix { rows, cols, a }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| K::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.a[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<K> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<K> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + o.get(i, j).clone()
        })
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - o.get(i, j).clone()
        })
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self.get(i, j).clone())
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() * c.clone()
        })
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(
            self.cols, o.rows,
            "product shape mismatch {}x{} * {}x{}",
            self.rows, self.cols, o.rows, o.cols
        );
        let mut out = Self::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lhs = self.get(i, k);
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j).clone() + lhs.clone() * o.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = K::zero();
                for j in 0..self.cols {
                    acc = acc + self.get(i, j).clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> K {
        assert!(self.is_square());
        let mut acc = K::zero();
        for i in 0..self.rows {
            acc = acc + self.get(i, i).clone();
        }
        acc
    }

    pub fn diag(&self) -> Vec<K> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn is_scalar(&self) -> bool {
        if !self.is_square() || self.rows == 0 {
            return self.is_square();
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { c.clone() } else { K::zero() };
                if !(self.get(i, j).clone() - want).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.a.iter().all(|v| v.is_zero())
    }

    pub fn norm_inf(&self) -> f64 {
        self.a.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Kronecker product; `self` carries the coarse block structure.
    pub fn kron(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let c = self.get(i, j);
                if c.is_zero() {
                    continue;
                }
                for p in 0..o.rows {
                    for q in 0..o.cols {
                        out.set(
                            i * o.rows + p,
                            j * o.cols + q,
                            c.clone() * o.get(p, q).clone(),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(blocks: &[Matrix<K>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.nrows()).sum();
        let c: usize = blocks.iter().map(|b| b.ncols()).sum();
        let mut out = Self::zero(n, c);
        let mut ri = 0;
        let mut ci = 0;
        for b in blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    out.set(ri + i, ci + j, b.get(i, j).clone());
                }
            }
            ri += b.nrows();
            ci += b.ncols();
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Gaussian elimination with magnitude pivoting. Returns the echelon
    /// form, the pivot columns and the accumulated determinant sign/scale
    /// of the square part.
    fn echelon(&self) -> (Matrix<K>, Vec<usize>, K) {
        let mut m = self.clone();
        let mut det = K::one();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let mut best = row;
            let mut best_w = 0.0f64;
            for r in row..m.rows {
                let w = if m.get(r, col).is_zero() {
                    0.0
                } else if K::EXACT {
                    1.0
                } else {
                    m.get(r, col).magnitude()
                };
                if w > best_w {
                    best_w = w;
                    best = r;
                }
            }
            if best_w == 0.0 {
                det = K::zero();
                continue;
            }
            if best != row {
                for j in 0..m.cols {
                    let tmp = m.get(row, j).clone();
                    m.set(row, j, m.get(best, j).clone());
                    m.set(best, j, tmp);
                }
                det = -det;
            }
            let pivot = m.get(row, col).clone();
            det = det * pivot.clone();
            let inv = pivot.recip().expect("nonzero pivot");
            for j in col..m.cols {
                let v = m.get(row, j).clone() * inv.clone();
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for j in col..m.cols {
                    let v = m.get(r, j).clone() - f.clone() * m.get(row, j).clone();
                    m.set(r, j, v);
                }
                m.set(r, col, K::zero());
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots, det)
    }

    pub fn det(&self) -> K {
        assert!(self.is_square());
        if self.rows == 0 {
            return K::one();
        }
        let (_, pivots, det) = self.echelon();
        if pivots.len() < self.rows {
            K::zero()
        } else {
            det
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Solves `self * X = rhs` for general right-hand sides.
    pub fn solve(&self, rhs: &Matrix<K>) -> Result<Matrix<K>, MatrixError> {
        assert!(self.is_square());
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let mut aug = Matrix::zero(n, n + rhs.cols);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                aug.set(i, n + j, rhs.get(i, j).clone());
            }
        }
        let (ech, pivots, _) = aug.echelon();
        let square_pivots = pivots.iter().filter(|&&c| c < n).count();
        if square_pivots < n {
            return Err(MatrixError::SingularMatrix);
        }
        Ok(ech.submatrix(0, n, n, rhs.cols))
    }

    pub fn inverse(&self) -> Result<Matrix<K>, MatrixError> {
        self.solve(&Matrix::identity(self.rows))
    }

    /// Gaussian solve that keeps even numerically tiny pivots (rejecting
    /// only exact zeros). Near-singular systems return large solutions,
    /// which is what inverse iteration needs.
    pub fn solve_raw(&self, rhs: &Matrix<K>) -> Result<Matrix<K>, MatrixError> {
        assert!(self.is_square());
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let mut aug = Matrix::zero(n, n + rhs.cols);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                aug.set(i, n + j, rhs.get(i, j).clone());
            }
        }
        for col in 0..n {
            let mut best = col;
            let mut best_w = -1.0f64;
            for r in col..n {
                let w = aug.get(r, col).magnitude();
                if w > best_w {
                    best_w = w;
                    best = r;
                }
            }
            if best_w == 0.0 {
                return Err(MatrixError::SingularMatrix);
            }
            if best != col {
                for j in 0..aug.cols {
                    let tmp = aug.get(col, j).clone();
                    aug.set(col, j, aug.get(best, j).clone());
                    aug.set(best, j, tmp);
                }
            }
            let inv = match aug.get(col, col).recip() {
                Some(v) => v,
                None => {
                    // magnitude positive but below the backend's zero
                    // tolerance: divide through manually
                    let p = aug.get(col, col).clone();
                    let one = K::one();
                    one / p
                }
            };
            for j in col..aug.cols {
                let v = aug.get(col, j).clone() * inv.clone();
                aug.set(col, j, v);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = aug.get(r, col).clone();
                if f.is_zero() && f.magnitude() == 0.0 {
                    continue;
                }
                for j in col..aug.cols {
                    let v = aug.get(r, j).clone() - f.clone() * aug.get(col, j).clone();
                    aug.set(r, j, v);
                }
            }
        }
        Ok(aug.submatrix(0, n, n, rhs.cols))
    }

    /// Basis of the right nullspace (one column per free variable).
    pub fn nullspace(&self) -> Vec<Vec<K>> {
        let (ech, pivots, _) = self.echelon();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().cloned().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![K::zero(); self.cols];
            v[f] = K::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -ech.get(r, f).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space, as columns of the original matrix.
    pub fn column_space_basis(&self) -> Vec<Vec<K>> {
        let (_, pivots, _) = self.echelon();
        pivots.iter().map(|&c| self.col(c)).collect()
    }

    /// Reduced basis of the column space: the nonzero rows of the reduced
    /// echelon form of the transpose. Much better conditioned than raw
    /// pivot columns when the matrix is a high power.
    pub fn column_space_basis_reduced(&self) -> Vec<Vec<K>> {
        let (ech, pivots, _) = self.transpose().echelon();
        (0..pivots.len()).map(|r| ech.row(r)).collect()
    }

    /// Minimal annihilating polynomial of the vector `v` under `self`:
    /// the monic generator of {p : p(M) v = 0}, via the Krylov sequence.
    pub fn krylov_annihilator(&self, v: &[K]) -> UniPoly<K> {
        let n = self.rows;
        let mut vecs: Vec<Vec<K>> = vec![v.to_vec()];
        loop {
            let last = vecs.last().unwrap();
            let next = self.mul_vec(last);
            // solve for next in span(vecs)
            let mut sys = Matrix::zero(n, vecs.len());
            for (c, w) in vecs.iter().enumerate() {
                for r in 0..n {
                    sys.set(r, c, w[r].clone());
                }
            }
            let mut aug = Matrix::zero(n, vecs.len() + 1);
            for r in 0..n {
                for c in 0..vecs.len() {
                    aug.set(r, c, sys.get(r, c).clone());
                }
                aug.set(r, vecs.len(), next[r].clone());
            }
            let (ech, pivots, _) = aug.echelon();
            if pivots.contains(&vecs.len()) {
                // independent; extend the Krylov basis
                vecs.push(next);
                if vecs.len() > n + 1 {
                    unreachable!("Krylov sequence exceeded dimension");
                }
                continue;
            }
            // dependent: next = sum coeff_i vecs[i]
            let mut coeffs = vec![K::zero(); vecs.len() + 1];
            for (r, &p) in pivots.iter().enumerate() {
                coeffs[p] = -ech.get(r, vecs.len()).clone();
            }
            coeffs[vecs.len()] = K::one();
            return UniPoly::new(coeffs);
        }
    }

    /// Monic minimal polynomial: least common multiple of Krylov
    /// annihilators of basis/random vectors, verified by evaluation.
    pub fn minimal_polynomial(&self) -> UniPoly<K> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return UniPoly::constant(K::one());
        }
        let mut mu = UniPoly::constant(K::one());
        for i in 0..n {
            let mut v = vec![K::zero(); n];
            v[i] = K::one();
            mu = mu.lcm(&self.krylov_annihilator(&v));
            if mu.degree() == n {
                break;
            }
            if self.poly_eval_matrix(&mu).is_zero_matrix() {
                break;
            }
        }
        debug_assert!(self.poly_eval_matrix(&mu).is_zero_matrix());
        mu
    }

    /// Evaluates a polynomial at the matrix (Horner).
    pub fn poly_eval_matrix(&self, p: &UniPoly<K>) -> Matrix<K> {
        let n = self.rows;
        let mut acc = Matrix::zero(n, n);
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc);
            for i in 0..n {
                let v = acc.get(i, i).clone() + c.clone();
                acc.set(i, i, v);
            }
        }
        acc
    }

    pub fn charpoly(&self) -> UniPoly<K> {
        charpoly(self)
    }

    /// Entry-wise conversion into another backend.
    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix::from_fn(self.rows, self.cols, |i, j| f(self.get(i, j)))
    }
}

impl Matrix<Rat> {
    pub fn to_cx(&self) -> Matrix<crate::scalarkit::Cx> {
        self.map(|v| crate::scalarkit::Cx(v.to_c64()))
    }
}

/// Tuple of same-size square matrices, the argument of a noncommutative
/// expression in `m` variables.
#[derive(Clone, PartialEq, Debug)]
pub struct MatrixTuple<K: Field> {
    blocks: Vec<Matrix<K>>,
}

impl<K: Field> MatrixTuple<K> {
    pub fn new(blocks: Vec<Matrix<K>>) -> Self {
        assert!(!blocks.is_empty(), "tuple needs at least one component");
        let n = blocks[0].nrows();
        assert!(
            blocks.iter().all(|b| b.is_square() && b.nrows() == n),
            "tuple components must be square and uniformly sized"
        );
        MatrixTuple { blocks }
    }

    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.blocks[0].nrows()
    }

    pub fn component(&self, k: usize) -> &Matrix<K> {
        &self.blocks[k]
    }

    pub fn components(&self) -> &[Matrix<K>] {
        &self.blocks
    }

    /// Componentwise conjugation P X P^{-1}.
    pub fn conjugate(&self, p: &Matrix<K>, p_inv: &Matrix<K>) -> Self {
        MatrixTuple::new(
            self.blocks
                .iter()
                .map(|b| p.mul(b).mul(p_inv))
                .collect(),
        )
    }

    /// Componentwise direct sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        assert_eq!(self.m(), o.m());
        MatrixTuple::new(
            self.blocks
                .iter()
                .zip(&o.blocks)
                .map(|(a, b)| Matrix::block_diag(&[a.clone(), b.clone()]))
                .collect(),
        )
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L + Copy) -> MatrixTuple<L> {
        MatrixTuple::new(self.blocks.iter().map(|b| b.map(f)).collect())
    }
}

impl MatrixTuple<Rat> {
    pub fn to_cx(&self) -> MatrixTuple<crate::scalarkit::Cx> {
        MatrixTuple::new(self.blocks.iter().map(|b| b.to_cx()).collect())
    }
}

/// Nonnegative integers (a, b) with a*p + b*q = n, found by scanning b.
/// Guaranteed to exist for n >= (p-1)(q-1) when gcd(p, q) = 1.
pub fn sylvester_representation(n: u64, p: u64, q: u64) -> Result<(u64, u64), MatrixError> {
    if p == 0 || q == 0 || gcd_u64(p, q) != 1 {
        return Err(MatrixError::NotCoprime);
    }
    for b in 0..=(n / q) {
        let rest = n - b * q;
        if rest % p == 0 {
            return Ok((rest / p, b));
        }
    }
    Err(MatrixError::NotRepresentable { n, p, q })
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalarkit::Rat;
    use rand::{Rng, SeedableRng};

    #[test]
    fn det_and_inverse_basics() {
        let i3 = Matrix::<Rat>::identity(3);
        assert_eq!(i3.det(), Rat::int(1));
        let m = Matrix::<Rat>::from_int_rows(&[&[1, 1], &[0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, Matrix::from_int_rows(&[&[1, -1], &[0, 1]]));
        let sing = Matrix::<Rat>::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.det(), Rat::int(0));
        assert_eq!(sing.inverse(), Err(MatrixError::SingularMatrix));
    }

    #[test]
    fn random_inverse_is_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 3 {
            let m = Matrix::from_fn(6, 6, |_, _| Rat::int(rng.gen_range(-9..=9)));
            if m.det().is_zero() {
                continue;
            }
            assert_eq!(m.mul(&m.inverse().unwrap()), Matrix::identity(6));
            checked += 1;
        }
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        let m = Matrix::<Rat>::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn minimal_polynomial_of_projection() {
        // diag(1,1,0): mu = t(t-1)
        let m = Matrix::<Rat>::diagonal(&[Rat::int(1), Rat::int(1), Rat::int(0)]);
        let mu = m.minimal_polynomial();
        assert_eq!(mu, UniPoly::new(vec![Rat::int(0), Rat::int(-1), Rat::int(1)]));
        assert!(mu.is_squarefree());
        // a Jordan block is not squarefree-minimal
        let j = Matrix::<Rat>::from_int_rows(&[&[0, 1], &[0, 0]]);
        assert!(!j.minimal_polynomial().is_squarefree());
    }

    #[test]
    fn kron_matches_block_structure() {
        let a = Matrix::<Rat>::from_int_rows(&[&[1, 2], &[3, 4]]);
        let x = Matrix::<Rat>::from_int_rows(&[&[0, 1], &[1, 0]]);
        let k = a.kron(&x);
        assert_eq!(k.nrows(), 4);
        assert_eq!(*k.get(0, 1), Rat::int(1));
        assert_eq!(*k.get(0, 3), Rat::int(2));
        assert_eq!(*k.get(2, 1), Rat::int(3));
    }

    #[test]
    fn sylvester_representation_examples() {
        assert_eq!(sylvester_representation(24, 5, 7).unwrap(), (2, 2));
        assert_eq!(sylvester_representation(10, 5, 7).unwrap(), (2, 0));
        assert!(matches!(
            sylvester_representation(23, 5, 7),
            Err(MatrixError::NotRepresentable { .. })
        ));
        assert!(matches!(
            sylvester_representation(10, 4, 6),
            Err(MatrixError::NotCoprime)
        ));
    }

    #[test]
    fn sylvester_always_representable_past_frobenius() {
        for (p, q) in [(2u64, 3u64), (5, 7), (11, 13)] {
            let start = (p - 1) * (q - 1);
            for n in start..=start + 200 {
                assert!(sylvester_representation(n, p, q).is_ok(), "n={n}");
            }
            assert!(sylvester_representation(p * q - p - q, p, q).is_err());
        }
    }
}
