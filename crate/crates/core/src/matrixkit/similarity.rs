//! Similarity constructions behind the linear decompositions: zero and
//! prescribed diagonals, triangular splits with prescribed spectra, and
//! diagonalization of matrices with distinct eigenvalues.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Matrix, MatrixError};
use crate::scalarkit::{Cx, Field, Rat};

/// Incremental row-echelon span for exact independence tests.
pub(crate) struct IncSpan<K: Field> {
    rows: Vec<(usize, Vec<K>)>,
    dim: usize,
}

impl<K: Field> IncSpan<K> {
    pub fn new(dim: usize) -> Self {
        IncSpan { rows: Vec::new(), dim }
    }

    /// Adds `v` to the span; returns false when `v` was already dependent.
    pub fn try_add(&mut self, v: &[K]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (piv, row) in &self.rows {
            if !w[*piv].is_zero() {
                let f = w[*piv].clone();
                for j in 0..self.dim {
                    w[j] = w[j].clone() - f.clone() * row[j].clone();
                }
            }
        }
        let piv = match w.iter().position(|x| !x.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let inv = w[piv].recip().expect("nonzero pivot");
        for x in w.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        self.rows.push((piv, w));
        true
    }
}

/// A vector `v` with `M v` not proportional to `v`; `None` iff M is scalar.
pub(crate) fn nonproportional_vector<K: Field>(m: &Matrix<K>) -> Option<Vec<K>> {
    let n = m.nrows();
    let indep = |v: &[K]| -> bool {
        let mv = m.mul_vec(v);
        let mut span = IncSpan::new(n);
        span.try_add(v);
        span.try_add(&mv)
    };
    for i in 0..n {
        let mut v = vec![K::zero(); n];
        v[i] = K::one();
        if indep(&v) {
            return Some(v);
        }
    }
    // every e_i is an eigenvector, so M is diagonal; combine two entries
    for i in 0..n {
        for j in (i + 1)..n {
            if !(m.get(i, i).clone() - m.get(j, j).clone()).is_zero() {
                let mut v = vec![K::zero(); n];
                v[i] = K::one();
                v[j] = K::one();
                debug_assert!(indep(&v));
                return Some(v);
            }
        }
    }
    None
}

/// Completes the given columns to a basis. Deterministic completion uses
/// standard basis vectors; with an RNG, random small-integer vectors.
pub(crate) fn complete_basis<K: Field>(
    cols: &[Vec<K>],
    n: usize,
    rng: Option<&mut ChaCha8Rng>,
) -> Matrix<K> {
    let mut span = IncSpan::new(n);
    let mut chosen: Vec<Vec<K>> = Vec::new();
    for c in cols {
        let added = span.try_add(c);
        assert!(added, "seed columns must be independent");
        chosen.push(c.clone());
    }
    match rng {
        None => {
            for i in 0..n {
                if chosen.len() == n {
                    break;
                }
                let mut v = vec![K::zero(); n];
                v[i] = K::one();
                if span.try_add(&v) {
                    chosen.push(v);
                }
            }
        }
        Some(rng) => {
            while chosen.len() < n {
                let v: Vec<K> = (0..n).map(|_| K::from_i64(rng.gen_range(-3..=3))).collect();
                if span.try_add(&v) {
                    chosen.push(v);
                }
            }
        }
    }
    assert_eq!(chosen.len(), n);
    Matrix::from_fn(n, n, |i, j| chosen[j][i].clone())
}

/// Similarity M = Q M0 Q^{-1} with every diagonal entry of M0 zero.
/// Exact over the rationals. Requires trace(M) = 0.
pub fn zero_diagonal_similarity<K: Field>(
    m: &Matrix<K>,
) -> Result<(Matrix<K>, Matrix<K>), MatrixError> {
    assert!(m.is_square());
    if !m.trace().is_zero() {
        return Err(MatrixError::NonzeroTrace);
    }
    if m.diag().iter().all(|d| d.is_zero()) {
        return Ok((Matrix::identity(m.nrows()), m.clone()));
    }
    let q = zero_diag_basis(m);
    let q_inv = q.inverse().expect("basis change is invertible");
    let m0 = q_inv.mul(m).mul(&q);
    Ok((q, m0))
}

/// Basis Q such that Q^{-1} M Q has zero diagonal (trace-zero input).
fn zero_diag_basis<K: Field>(m: &Matrix<K>) -> Matrix<K> {
    let n = m.nrows();
    if n <= 1 || m.is_scalar() {
        // trace zero and scalar means zero
        return Matrix::identity(n);
    }
    let v = nonproportional_vector(m).expect("nonscalar by the checks above");
    let mv = m.mul_vec(&v);
    let s = complete_basis(&[v, mv], n, None);
    let s_inv = s.inverse().expect("basis");
    let m1 = s_inv.mul(m).mul(&s);
    debug_assert!(m1.get(0, 0).is_zero());
    let b = m1.submatrix(1, 1, n - 1, n - 1);
    let qb = zero_diag_basis(&b);
    let mut t = Matrix::identity(n);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            t.set(i + 1, j + 1, qb.get(i, j).clone());
        }
    }
    s.mul(&t)
}

/// Similarity A = Q A' Q^{-1} with diag(A') prescribed. Requires A
/// nonscalar and the prescription summing to the trace.
pub fn prescribed_diagonal_similarity<K: Field>(
    a: &Matrix<K>,
    d: &[K],
    rng: &mut ChaCha8Rng,
) -> Result<(Matrix<K>, Matrix<K>), MatrixError> {
    assert!(a.is_square());
    let n = a.nrows();
    assert_eq!(d.len(), n);
    if a.is_scalar() {
        return Err(MatrixError::ScalarInput);
    }
    let mut sum = K::zero();
    for x in d {
        sum = sum + x.clone();
    }
    if !(sum - a.trace()).is_zero() {
        return Err(MatrixError::TraceMismatch);
    }
    if a
        .diag()
        .iter()
        .zip(d)
        .all(|(x, y)| (x.clone() - y.clone()).is_zero())
    {
        return Ok((Matrix::identity(n), a.clone()));
    }
    for attempt in 0..50 {
        if let Some(q) = prescribed_diag_basis(a, d, rng, attempt > 0) {
            let q_inv = q.inverse().expect("basis change is invertible");
            let a1 = q_inv.mul(a).mul(&q);
            let ok = a1
                .diag()
                .iter()
                .zip(d)
                .all(|(x, y)| (x.clone() - y.clone()).is_zero());
            if ok {
                return Ok((q, a1));
            }
        }
    }
    Err(MatrixError::ConstructionFailed(50))
}

fn prescribed_diag_basis<K: Field>(
    a: &Matrix<K>,
    d: &[K],
    rng: &mut ChaCha8Rng,
    randomize: bool,
) -> Option<Matrix<K>> {
    let n = a.nrows();
    if n == 1 {
        // the trace condition pins the single entry
        return Some(Matrix::identity(1));
    }
    if a.is_scalar() {
        // feasible only when the remaining prescription is constant equal
        // to the scalar, in which case nothing needs moving
        let c = a.get(0, 0).clone();
        if d.iter().all(|x| (x.clone() - c.clone()).is_zero()) {
            return Some(Matrix::identity(n));
        }
        return None;
    }
    let v = if randomize {
        // random vector with A v independent of v
        let mut found = None;
        for _ in 0..20 {
            let cand: Vec<K> = (0..n).map(|_| K::from_i64(rng.gen_range(-3..=3))).collect();
            let av = a.mul_vec(&cand);
            let mut span = IncSpan::new(n);
            if span.try_add(&cand) && span.try_add(&av) {
                found = Some(cand);
                break;
            }
        }
        found.or_else(|| nonproportional_vector(a))?
    } else {
        nonproportional_vector(a)?
    };
    let av = a.mul_vec(&v);
    let u2: Vec<K> = av
        .iter()
        .zip(&v)
        .map(|(x, y)| x.clone() - d[0].clone() * y.clone())
        .collect();
    let s = complete_basis(
        &[v, u2],
        n,
        if randomize { Some(rng) } else { None },
    );
    let s_inv = s.inverse().expect("basis");
    let a1 = s_inv.mul(a).mul(&s);
    debug_assert!((a1.get(0, 0).clone() - d[0].clone()).is_zero());
    let b = a1.submatrix(1, 1, n - 1, n - 1);
    let qb = prescribed_diag_basis(&b, &d[1..], rng, randomize)?;
    let mut t = Matrix::identity(n);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            t.set(i + 1, j + 1, qb.get(i, j).clone());
        }
    }
    Some(s.mul(&t))
}

/// Splits a zero-diagonal matrix as N1 - N2 with
/// N1 = diag(lambda) + strict upper part, N2 = diag(lambda) - strict
/// lower part; both factors have spectrum exactly `lambda`.
pub fn triangular_split<K: Field>(
    m0: &Matrix<K>,
    lambda: &[K],
) -> Result<(Matrix<K>, Matrix<K>), MatrixError> {
    assert!(m0.is_square());
    let n = m0.nrows();
    assert_eq!(lambda.len(), n);
    if !m0.diag().iter().all(|x| x.is_zero()) {
        return Err(MatrixError::NonzeroDiagonal);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (lambda[i].clone() - lambda[j].clone()).is_zero() {
                return Err(MatrixError::RepeatedLambda);
            }
        }
    }
    let mut n1 = Matrix::diagonal(lambda);
    let mut n2 = Matrix::diagonal(lambda);
    for i in 0..n {
        for j in 0..n {
            if j > i {
                n1.set(i, j, m0.get(i, j).clone());
            } else if j < i {
                n2.set(i, j, -m0.get(i, j).clone());
            }
        }
    }
    Ok((n1, n2))
}

/// Eigendecomposition M = V diag(eigs) V^{-1} for matrices whose
/// characteristic polynomial is squarefree. In the exact backend the
/// spectrum must be rational; triangular matrices take a direct
/// back-substitution path.
pub fn diagonalize_distinct<K: Field>(
    m: &Matrix<K>,
) -> Result<(Matrix<K>, Vec<K>), MatrixError> {
    let eigs = distinct_eigenvalues(m)?;
    diagonalize_with_eigs(m, &eigs).map(|v| (v, eigs))
}

/// Eigenvalues of a squarefree-charpoly matrix, canonically sorted.
pub fn distinct_eigenvalues<K: Field>(m: &Matrix<K>) -> Result<Vec<K>, MatrixError> {
    assert!(m.is_square());
    let chi = m.charpoly();
    if K::EXACT {
        if !chi.is_squarefree() {
            return Err(MatrixError::RepeatedEigenvalue);
        }
    }
    let mut eigs: Vec<K> = Vec::with_capacity(m.nrows());
    let roots = chi
        .roots_approx()
        .map_err(|_| MatrixError::RepeatedEigenvalue)?;
    if K::EXACT {
        // exact backend: demand a rational spectrum
        for z in &roots {
            let cand = crate::scalarkit::rationalize(z.re, 1_000_000)
                .map(|r| K::from_rational(&r))
                .filter(|r| chi.eval(r).is_zero());
            match cand {
                Some(r) if z.im.abs() < 1e-7 * (1.0 + z.norm()) => eigs.push(r),
                _ => return Err(MatrixError::IrrationalSpectrum),
            }
        }
    } else {
        // approximate backend: reject numerically repeated roots
        for (i, zi) in roots.iter().enumerate() {
            for zj in roots.iter().skip(i + 1) {
                if (*zi - *zj).norm() < 1e-7 * (1.0 + zi.norm()) {
                    return Err(MatrixError::RepeatedEigenvalue);
                }
            }
        }
        for z in &roots {
            eigs.push(K::from_c64(*z).expect("approximate backend"));
        }
    }
    eigs.sort_by(|a, b| {
        let (x, y) = (a.to_c64(), b.to_c64());
        (x.re, x.im)
            .partial_cmp(&(y.re, y.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(eigs)
}

/// Eigenvector matrix for the given simple eigenvalues.
pub fn diagonalize_with_eigs<K: Field>(
    m: &Matrix<K>,
    eigs: &[K],
) -> Result<Matrix<K>, MatrixError> {
    let n = m.nrows();
    assert_eq!(eigs.len(), n);
    let mut cols: Vec<Vec<K>> = Vec::with_capacity(n);
    for lam in eigs {
        cols.push(eigenvector_for(m, lam)?);
    }
    let v = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    if v.det().is_zero() {
        return Err(MatrixError::RepeatedEigenvalue);
    }
    Ok(v)
}

/// One eigenvector for a simple eigenvalue: exact nullspace in the exact
/// backend (with a triangular fast path), inverse iteration in floats.
pub fn eigenvector_for<K: Field>(m: &Matrix<K>, lambda: &K) -> Result<Vec<K>, MatrixError> {
    let n = m.nrows();
    let shifted = m.sub(&Matrix::scalar(n, lambda.clone()));
    if K::EXACT {
        let ns = shifted.nullspace();
        return ns.into_iter().next().ok_or(MatrixError::RepeatedEigenvalue);
    }
    // triangular back-substitution when possible
    if let Some(v) = triangular_eigenvector(m, lambda) {
        return Ok(v);
    }
    let scale = m.norm_inf().max(1.0);
    let residual_of = |v: &[K]| {
        let mv = m.mul_vec(v);
        mv.iter()
            .zip(v)
            .map(|(a, b)| (a.clone() - lambda.clone() * b.clone()).magnitude())
            .fold(0.0, f64::max)
    };
    let normalize = |w: &mut Vec<K>| -> bool {
        let norm = w.iter().map(|x| x.magnitude()).fold(0.0, f64::max);
        if norm == 0.0 || !norm.is_finite() {
            return false;
        }
        let s = K::from_c64(num::complex::Complex64::new(1.0 / norm, 0.0)).unwrap();
        for x in w.iter_mut() {
            *x = x.clone() * s.clone();
        }
        true
    };
    // tolerance-based nullspace candidate, polished by inverse iteration
    let mut v: Vec<K> = shifted
        .nullspace()
        .into_iter()
        .next()
        .and_then(|mut w| if normalize(&mut w) { Some(w) } else { None })
        .unwrap_or_else(|| (0..n).map(|i| K::from_i64(1 + (i as i64 % 3))).collect());
    if residual_of(&v) > 1e-12 * scale {
        let jitter = 1e-11 * (1.0 + lambda.magnitude());
        let shift =
            lambda.clone() + K::from_c64(num::complex::Complex64::new(jitter, jitter)).unwrap();
        let sys = m.sub(&Matrix::scalar(n, shift));
        for _ in 0..8 {
            let rhs = Matrix::from_fn(n, 1, |i, _| v[i].clone());
            let sol = match sys.solve_raw(&rhs) {
                Ok(s) => s,
                Err(_) => break,
            };
            let mut w: Vec<K> = (0..n).map(|i| sol.get(i, 0).clone()).collect();
            if !normalize(&mut w) {
                break;
            }
            v = w;
            if residual_of(&v) <= 1e-12 * scale {
                break;
            }
        }
    }
    if residual_of(&v) > 1e-6 * scale {
        return Err(MatrixError::RepeatedEigenvalue);
    }
    Ok(v)
}

fn triangular_eigenvector<K: Field>(m: &Matrix<K>, lambda: &K) -> Option<Vec<K>> {
    let n = m.nrows();
    let upper = (0..n).all(|i| (0..i).all(|j| m.get(i, j).is_zero()));
    if upper {
        // diagonal entry matching lambda
        let k = (0..n).find(|&i| (m.get(i, i).clone() - lambda.clone()).is_zero())?;
        let mut v = vec![K::zero(); n];
        v[k] = K::one();
        for i in (0..k).rev() {
            let mut s = K::zero();
            for j in (i + 1)..=k {
                s = s + m.get(i, j).clone() * v[j].clone();
            }
            let denom = lambda.clone() - m.get(i, i).clone();
            v[i] = s * denom.recip()?;
        }
        return Some(v);
    }
    let lower = (0..n).all(|i| (i + 1..n).all(|j| m.get(i, j).is_zero()));
    if lower {
        let k = (0..n).find(|&i| (m.get(i, i).clone() - lambda.clone()).is_zero())?;
        let mut v = vec![K::zero(); n];
        v[k] = K::one();
        for i in (k + 1)..n {
            let mut s = K::zero();
            for j in k..i {
                s = s + m.get(i, j).clone() * v[j].clone();
            }
            let denom = lambda.clone() - m.get(i, i).clone();
            v[i] = s * denom.recip()?;
        }
        return Some(v);
    }
    None
}

/// A similarity P with N = P D P^{-1}, for two matrices sharing the same
/// simple spectrum. Eigenvalues are paired canonically (nearest match in
/// the approximate backend).
pub fn similarity_onto<K: Field>(
    n_mat: &Matrix<K>,
    d_mat: &Matrix<K>,
) -> Result<Matrix<K>, MatrixError> {
    let (vd, eig_d) = diagonalize_distinct(d_mat)?;
    let eig_n = distinct_eigenvalues(n_mat)?;
    // pair each of D's eigenvalues with the closest of N's
    let mut order: Vec<usize> = Vec::with_capacity(eig_d.len());
    let mut used = vec![false; eig_n.len()];
    for lam in &eig_d {
        let mut best = None;
        let mut best_dist = f64::INFINITY;
        for (j, mu) in eig_n.iter().enumerate() {
            if used[j] {
                continue;
            }
            let dist = (lam.clone() - mu.clone()).magnitude();
            if dist < best_dist {
                best_dist = dist;
                best = Some(j);
            }
        }
        let j = best.ok_or(MatrixError::RepeatedEigenvalue)?;
        if K::EXACT && !(eig_n[j].clone() - lam.clone()).is_zero() {
            return Err(MatrixError::RepeatedEigenvalue);
        }
        used[j] = true;
        order.push(j);
    }
    let paired: Vec<K> = order.iter().map(|&j| eig_n[j].clone()).collect();
    let vn = diagonalize_with_eigs(n_mat, &paired)?;
    let vd_inv = vd.inverse().map_err(|_| MatrixError::RepeatedEigenvalue)?;
    Ok(vn.mul(&vd_inv))
}

/// Converts a rational matrix and spectrum into the approximate backend.
pub fn to_cx_list(v: &[Rat]) -> Vec<Cx> {
    v.iter().map(|r| Cx(r.to_c64())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalarkit::unipoly::UniPoly;
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    #[test]
    fn zero_diag_on_diagonal_input() {
        let m = Matrix::<Rat>::diagonal(&[Rat::int(1), Rat::int(-1)]);
        let (q, m0) = zero_diagonal_similarity(&m).unwrap();
        assert!(m0.diag().iter().all(|x| x.is_zero()));
        let q_inv = q.inverse().unwrap();
        assert_eq!(q.mul(&m0).mul(&q_inv), m);
    }

    #[test]
    fn zero_diag_fixed_points() {
        let m = Matrix::<Rat>::from_int_rows(&[&[0, 2], &[3, 0]]);
        let (q, m0) = zero_diagonal_similarity(&m).unwrap();
        assert_eq!(q, Matrix::identity(2));
        assert_eq!(m0, m);
        let z = Matrix::<Rat>::zero(3, 3);
        let (q, m0) = zero_diagonal_similarity(&z).unwrap();
        assert_eq!(q, Matrix::identity(3));
        assert_eq!(m0, z);
    }

    #[test]
    fn zero_diag_rejects_nonzero_trace() {
        let m = Matrix::<Rat>::identity(2);
        assert_eq!(zero_diagonal_similarity(&m), Err(MatrixError::NonzeroTrace));
    }

    #[test]
    fn zero_diag_random_traceless() {
        use rand::Rng;
        let mut r = rng();
        for _ in 0..5 {
            let n = 5;
            let mut m = Matrix::from_fn(n, n, |_, _| Rat::int(r.gen_range(-4..=4)));
            // force trace zero
            let mut t = Rat::int(0);
            for i in 0..n - 1 {
                t = t + m.get(i, i).clone();
            }
            m.set(n - 1, n - 1, -t);
            let (q, m0) = zero_diagonal_similarity(&m).unwrap();
            assert!(m0.diag().iter().all(|x| x.is_zero()));
            let q_inv = q.inverse().unwrap();
            assert_eq!(q.mul(&m0).mul(&q_inv), m);
        }
    }

    #[test]
    fn prescribed_diag_basic() {
        let mut r = rng();
        let a = Matrix::<Rat>::diagonal(&[Rat::int(3), Rat::int(1)]);
        let d = [Rat::int(2), Rat::int(2)];
        let (q, a1) = prescribed_diagonal_similarity(&a, &d, &mut r).unwrap();
        assert_eq!(a1.diag(), d.to_vec());
        let q_inv = q.inverse().unwrap();
        assert_eq!(q.mul(&a1).mul(&q_inv), a);
    }

    #[test]
    fn prescribed_diag_identity_shortcut_and_errors() {
        let mut r = rng();
        let a = Matrix::<Rat>::from_int_rows(&[&[1, 5], &[0, 2]]);
        let d = [Rat::int(1), Rat::int(2)];
        let (q, a1) = prescribed_diagonal_similarity(&a, &d, &mut r).unwrap();
        assert_eq!(q, Matrix::identity(2));
        assert_eq!(a1, a);
        let s = Matrix::<Rat>::scalar(2, Rat::int(4));
        assert_eq!(
            prescribed_diagonal_similarity(&s, &[Rat::int(4), Rat::int(4)], &mut r),
            Err(MatrixError::ScalarInput)
        );
        let b = Matrix::<Rat>::from_int_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(
            prescribed_diagonal_similarity(&b, &[Rat::int(0), Rat::int(0)], &mut r),
            Err(MatrixError::TraceMismatch)
        );
    }

    #[test]
    fn prescribed_diag_random() {
        use rand::Rng;
        let mut r = rng();
        for _ in 0..5 {
            let n = 4;
            let a = Matrix::from_fn(n, n, |_, _| Rat::int(r.gen_range(-4..=4)));
            if a.is_scalar() {
                continue;
            }
            let mut d: Vec<Rat> = (0..n - 1).map(|_| Rat::int(r.gen_range(-5..=5))).collect();
            let mut sum = Rat::int(0);
            for x in &d {
                sum = sum + x.clone();
            }
            d.push(a.trace() - sum);
            let (q, a1) = prescribed_diagonal_similarity(&a, &d, &mut r).unwrap();
            assert_eq!(a1.diag(), d);
            let q_inv = q.inverse().unwrap();
            assert_eq!(q.mul(&a1).mul(&q_inv), a);
        }
    }

    #[test]
    fn triangular_split_examples() {
        let m0 = Matrix::<Rat>::from_int_rows(&[&[0, 1], &[1, 0]]);
        let lam = [Rat::int(1), Rat::int(2)];
        let (n1, n2) = triangular_split(&m0, &lam).unwrap();
        assert_eq!(n1, Matrix::from_int_rows(&[&[1, 1], &[0, 2]]));
        assert_eq!(n2, Matrix::from_int_rows(&[&[1, 0], &[-1, 2]]));
        assert_eq!(n1.sub(&n2), m0);

        let z = Matrix::<Rat>::zero(2, 2);
        let (n1, n2) = triangular_split(&z, &lam).unwrap();
        assert_eq!(n1, Matrix::diagonal(&lam));
        assert_eq!(n2, Matrix::diagonal(&lam));

        assert_eq!(
            triangular_split(&m0, &[Rat::int(1), Rat::int(1)]),
            Err(MatrixError::RepeatedLambda)
        );
        let bad = Matrix::<Rat>::identity(2);
        assert_eq!(
            triangular_split(&bad, &lam),
            Err(MatrixError::NonzeroDiagonal)
        );
    }

    #[test]
    fn triangular_split_spectra() {
        use rand::Rng;
        let mut r = rng();
        let n = 5;
        let mut m0 = Matrix::from_fn(n, n, |_, _| Rat::int(r.gen_range(-4..=4)));
        for i in 0..n {
            m0.set(i, i, Rat::int(0));
        }
        let lam: Vec<Rat> = (0..n).map(|i| Rat::int(i as i64 + 1)).collect();
        let (n1, n2) = triangular_split(&m0, &lam).unwrap();
        assert_eq!(n1.sub(&n2), m0);
        let expect = UniPoly::from_roots(&lam);
        assert_eq!(n1.charpoly(), expect);
        assert_eq!(n2.charpoly(), expect);
    }

    #[test]
    fn diagonalize_distinct_exact() {
        let m = Matrix::<Rat>::from_int_rows(&[&[1, 1], &[0, 2]]);
        let (v, eigs) = diagonalize_distinct(&m).unwrap();
        assert_eq!(eigs, vec![Rat::int(1), Rat::int(2)]);
        let v_inv = v.inverse().unwrap();
        assert_eq!(v_inv.mul(&m).mul(&v), Matrix::diagonal(&eigs));
        // diagonal input: eigenvectors are standard basis vectors
        let d = Matrix::<Rat>::diagonal(&[Rat::int(5), Rat::int(7)]);
        let (_, eigs) = diagonalize_distinct(&d).unwrap();
        assert_eq!(eigs, vec![Rat::int(5), Rat::int(7)]);
    }

    #[test]
    fn diagonalize_distinct_float() {
        use rand::Rng;
        let mut r = rng();
        let m_rat = Matrix::<Rat>::from_fn(6, 6, |_, _| Rat::int(r.gen_range(-4..=4)));
        let m = m_rat.to_cx();
        match diagonalize_distinct(&m) {
            Ok((v, eigs)) => {
                let lam = Matrix::diagonal(&eigs);
                let resid = m.mul(&v).sub(&v.mul(&lam)).norm_inf();
                assert!(resid <= 1e-7 * m.norm_inf().max(1.0), "residual {resid}");
            }
            Err(MatrixError::RepeatedEigenvalue) => {
                // numerically repeated spectrum; acceptable for a random draw
            }
            Err(e) => panic!("unexpected error {e:?}"),
        }
    }

    #[test]
    fn diagonalize_rejects_repeated() {
        let m = Matrix::<Rat>::identity(2);
        assert!(matches!(
            diagonalize_distinct(&m),
            Err(MatrixError::RepeatedEigenvalue)
        ));
    }

    #[test]
    fn similarity_onto_matches_spectra() {
        let mut r = rng();
        let d = Matrix::<Rat>::diagonal(&[Rat::int(1), Rat::int(2), Rat::int(3)]);
        // random conjugate of d
        let p = super::super::factor::random_invertible::<Rat>(3, 3, &mut r);
        let p_inv = p.inverse().unwrap();
        let n = p.mul(&d).mul(&p_inv);
        let q = similarity_onto(&n, &d).unwrap();
        let q_inv = q.inverse().unwrap();
        assert_eq!(q.mul(&d).mul(&q_inv), n);
    }
}
