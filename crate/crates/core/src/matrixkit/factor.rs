//! Prescribed-spectrum factorizations: M = N1 N2 with both spectra fully
//! prescribed (for nonscalar invertible M), and the decomposition of an
//! arbitrary matrix into two diagonalizable factors with exact
//! squarefree-minimal-polynomial certificates.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::similarity::{complete_basis, diagonalize_distinct, IncSpan, nonproportional_vector};
use super::{Matrix, MatrixError};
use crate::scalarkit::unipoly::UniPoly;
use crate::scalarkit::{Field, Rat};

const RETRY_BUDGET: usize = 50;

pub fn random_invertible<K: Field>(n: usize, range: i64, rng: &mut ChaCha8Rng) -> Matrix<K> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| K::from_i64(rng.gen_range(-range..=range)));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Product of a few random integer shears; unimodular, so conjugation
/// keeps integer entries integer.
pub fn random_unimodular<K: Field>(n: usize, rng: &mut ChaCha8Rng) -> Matrix<K> {
    let mut m = Matrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..(2 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = K::from_i64(rng.gen_range(-2..=2i64));
        let mut shear = Matrix::identity(n);
        shear.set(i, j, c);
        m = m.mul(&shear);
    }
    m
}

enum SourourFail {
    ScalarBlock,
    Singular,
}

/// M = N1 * N2 with spectrum(N1) = beta and spectrum(N2) = gamma (with
/// multiplicity), for nonscalar invertible M with det M = prod beta*gamma.
/// Inductive: each step conjugates the working block so its first column
/// becomes (beta_i gamma_i, *, 0, ..)^t and peels one prescribed pair;
/// scalar intermediate blocks trigger a randomized retry.
pub fn sourour_factor<K: Field>(
    m: &Matrix<K>,
    beta: &[K],
    gamma: &[K],
    rng: &mut ChaCha8Rng,
) -> Result<(Matrix<K>, Matrix<K>), MatrixError> {
    assert!(m.is_square());
    let n = m.nrows();
    assert_eq!(beta.len(), n);
    assert_eq!(gamma.len(), n);
    if beta.iter().chain(gamma.iter()).any(|x| x.is_zero()) {
        return Err(MatrixError::SingularPrescription);
    }
    if n > 1 && m.is_scalar() {
        return Err(MatrixError::ScalarInput);
    }
    let mut want = K::one();
    for (b, g) in beta.iter().zip(gamma) {
        want = want * b.clone() * g.clone();
    }
    let det = m.det();
    if K::EXACT {
        if !(det.clone() - want.clone()).is_zero() {
            return Err(MatrixError::DeterminantMismatch);
        }
    } else {
        let scale = det.magnitude().max(want.magnitude()).max(1.0);
        if (det.clone() - want.clone()).magnitude() > 1e-6 * scale {
            return Err(MatrixError::DeterminantMismatch);
        }
    }
    if det.is_zero() {
        return Err(MatrixError::SingularMatrix);
    }

    for attempt in 0..RETRY_BUDGET {
        match sourour_rec(m, beta, gamma, rng, attempt > 0) {
            Ok((n1, n2)) => {
                if K::EXACT {
                    debug_assert_eq!(n1.mul(&n2), *m);
                }
                return Ok((n1, n2));
            }
            Err(SourourFail::ScalarBlock) => continue,
            Err(SourourFail::Singular) => continue,
        }
    }
    Err(MatrixError::ConstructionFailed(RETRY_BUDGET))
}

fn sourour_rec<K: Field>(
    m: &Matrix<K>,
    beta: &[K],
    gamma: &[K],
    rng: &mut ChaCha8Rng,
    randomize: bool,
) -> Result<(Matrix<K>, Matrix<K>), SourourFail> {
    let s = m.nrows();
    if s == 1 {
        // det bookkeeping pins the entry to beta*gamma
        let n2 = m.get(0, 0).clone() * beta[0].recip().expect("nonzero beta");
        return Ok((
            Matrix::diagonal(&[beta[0].clone()]),
            Matrix::diagonal(&[n2]),
        ));
    }
    if m.is_scalar() {
        return Err(SourourFail::ScalarBlock);
    }
    let c = beta[0].clone() * gamma[0].clone();

    // x with M x independent of x
    let x = if randomize {
        let mut found = None;
        for _ in 0..20 {
            let cand: Vec<K> = (0..s).map(|_| K::from_i64(rng.gen_range(-3..=3))).collect();
            let mx = m.mul_vec(&cand);
            let mut span = IncSpan::new(s);
            if span.try_add(&cand) && span.try_add(&mx) {
                found = Some(cand);
                break;
            }
        }
        found.or_else(|| nonproportional_vector(m)).ok_or(SourourFail::ScalarBlock)?
    } else {
        nonproportional_vector(m).ok_or(SourourFail::ScalarBlock)?
    };
    let mx = m.mul_vec(&x);
    let u2: Vec<K> = mx
        .iter()
        .zip(&x)
        .map(|(a, b)| a.clone() - c.clone() * b.clone())
        .collect();
    let t = complete_basis(&[x, u2], s, if randomize { Some(rng) } else { None });
    let t_inv = t.inverse().map_err(|_| SourourFail::Singular)?;
    let a = t_inv.mul(m).mul(&t);
    // a = [[c, u^t], [v, b]] with v = e_1 by construction
    let u: Vec<K> = (1..s).map(|j| a.get(0, j).clone()).collect();
    let v: Vec<K> = (1..s).map(|i| a.get(i, 0).clone()).collect();
    let b = a.submatrix(1, 1, s - 1, s - 1);
    let c_inv = c.recip().expect("nonzero prescribed pair");
    let inner = Matrix::from_fn(s - 1, s - 1, |i, j| {
        b.get(i, j).clone() - v[i].clone() * u[j].clone() * c_inv.clone()
    });
    let (t1, t2) = sourour_rec(&inner, &beta[1..], &gamma[1..], rng, randomize)?;

    // n1 = [[beta_0, 0],[v/gamma_0, t1]], n2 = [[gamma_0, u/beta_0],[0, t2]]
    let g_inv = gamma[0].recip().expect("nonzero gamma");
    let b_inv = beta[0].recip().expect("nonzero beta");
    let mut n1 = Matrix::zero(s, s);
    let mut n2 = Matrix::zero(s, s);
    n1.set(0, 0, beta[0].clone());
    n2.set(0, 0, gamma[0].clone());
    for i in 0..s - 1 {
        n1.set(i + 1, 0, v[i].clone() * g_inv.clone());
        n2.set(0, i + 1, u[i].clone() * b_inv.clone());
        for j in 0..s - 1 {
            n1.set(i + 1, j + 1, t1.get(i, j).clone());
            n2.set(i + 1, j + 1, t2.get(i, j).clone());
        }
    }
    Ok((t.mul(&n1).mul(&t_inv), t.mul(&n2).mul(&t_inv)))
}

/// One diagonalizable factor with its exact certificate and, when the
/// construction yields it, a rational eigendecomposition.
#[derive(Clone, Debug)]
pub struct DiagFactor {
    pub mat: Matrix<Rat>,
    /// Squarefree minimal polynomial (exact diagonalizability certificate).
    pub min_poly: UniPoly<Rat>,
    /// mat = basis * diag(eigs) * basis^{-1}, when rational.
    pub eigen: Option<(Matrix<Rat>, Vec<Rat>)>,
}

#[derive(Clone, Debug)]
pub struct TwoDiagFactors {
    pub first: DiagFactor,
    pub second: DiagFactor,
}

/// Writes M = D1 * D2 with both factors diagonalizable over the algebraic
/// closure, certified by exact squarefree minimal polynomials.
///
/// Construction: the invertible core is factored with fully prescribed
/// distinct rational spectra; the nilpotent part is brought to its Jordan
/// basis, where each nilpotent block is a cyclic permutation times a 0/1
/// diagonal. The first factor is always invertible; the second always
/// carries a rational eigendecomposition.
pub fn two_diagonalizable_factor(
    m: &Matrix<Rat>,
    rng: &mut ChaCha8Rng,
) -> Result<TwoDiagFactors, MatrixError> {
    assert!(m.is_square());
    let n = m.nrows();
    if n == 0 {
        return Err(MatrixError::DimensionMismatch("empty matrix".into()));
    }

    if m.is_scalar() {
        // c I = diag(1..n) * diag(c, c/2, ..., c/n)
        let d1: Vec<Rat> = (1..=n as i64).map(Rat::int).collect();
        let c = m.get(0, 0).clone();
        let d2: Vec<Rat> = d1
            .iter()
            .map(|x| c.clone() * x.recip().unwrap())
            .collect();
        let f1 = Matrix::diagonal(&d1);
        let f2 = Matrix::diagonal(&d2);
        return finish_two_diag(m, f1, f2, Some((Matrix::identity(n), d1)), Some((Matrix::identity(n), d2)));
    }

    if !m.det().is_zero() {
        let (beta, gamma) = rational_spectra_for(&m.det(), n);
        let (f1, f2) = sourour_factor(m, &beta, &gamma, rng)?;
        let e1 = diagonalize_distinct(&f1).ok().map(|(v, e)| (v, e));
        let e2 = diagonalize_distinct(&f2).ok().map(|(v, e)| (v, e));
        return finish_two_diag(m, f1, f2, e1, e2);
    }

    // Singular nonscalar: split into invertible core + nilpotent part.
    let (s, core, nil) = fitting_decomposition(m)?;
    let k0 = core.nrows();
    let s_inv = s.inverse().expect("Fitting basis is invertible");

    let (c1, c2, c2_eigen) = if k0 == 0 {
        (Matrix::zero(0, 0), Matrix::zero(0, 0), (Matrix::zero(0, 0), vec![]))
    } else if core.is_scalar() {
        let d1: Vec<Rat> = (1..=k0 as i64).map(Rat::int).collect();
        let c = core.get(0, 0).clone();
        let d2: Vec<Rat> = d1.iter().map(|x| c.clone() * x.recip().unwrap()).collect();
        (
            Matrix::diagonal(&d1),
            Matrix::diagonal(&d2),
            (Matrix::identity(k0), d2),
        )
    } else {
        let (beta, gamma) = rational_spectra_for(&core.det(), k0);
        let (c1, c2) = sourour_factor(&core, &beta, &gamma, rng)?;
        let (v2, e2) = diagonalize_distinct(&c2)?;
        (c1, c2, (v2, e2))
    };

    let (t, blocks) = nilpotent_jordan_basis(&nil)?;
    let t_inv = t.inverse().expect("Jordan basis is invertible");
    // each upper-shift block J_s = P * D with P the inverse s-cycle and
    // D = diag(0, 1, .., 1)
    let mut p_blocks = Vec::new();
    let mut d_entries: Vec<Rat> = Vec::new();
    for &sz in &blocks {
        let mut p = Matrix::zero(sz, sz);
        for i in 0..sz {
            p.set(i, (i + 1) % sz, Rat::int(1));
        }
        p_blocks.push(p);
        d_entries.push(Rat::int(0));
        for _ in 1..sz {
            d_entries.push(Rat::int(1));
        }
    }
    let p_nil = Matrix::block_diag(&p_blocks);
    let d_nil = Matrix::diagonal(&d_entries);
    debug_assert_eq!(p_nil.mul(&d_nil), t_inv.mul(&nil).mul(&t));

    let nil1 = t.mul(&p_nil).mul(&t_inv);
    let nil2 = t.mul(&d_nil).mul(&t_inv);

    let f1 = s.mul(&Matrix::block_diag(&[c1, nil1])).mul(&s_inv);
    let f2 = s.mul(&Matrix::block_diag(&[c2, nil2])).mul(&s_inv);

    // rational eigendecomposition of the second factor: basis
    // S * diag(V_c2, T), eigenvalues (gamma.., d_nil..)
    let (v_c2, mut eigs2) = c2_eigen;
    let basis2 = s.mul(&Matrix::block_diag(&[v_c2, t]));
    eigs2.extend(d_entries);
    finish_two_diag(m, f1, f2, None, Some((basis2, eigs2)))
}

/// Distinct spectra (beta, gamma) of rational values with
/// prod beta * prod gamma = det.
fn rational_spectra_for(det: &Rat, n: usize) -> (Vec<Rat>, Vec<Rat>) {
    let beta: Vec<Rat> = (1..=n as i64).map(Rat::int).collect();
    for offset in 0..200i64 {
        let mut gamma: Vec<Rat> = (0..n as i64 - 1)
            .map(|i| Rat::int(n as i64 + 1 + i + offset))
            .collect();
        let mut prod = Rat::int(1);
        for b in &beta {
            prod = prod * b.clone();
        }
        for g in &gamma {
            prod = prod * g.clone();
        }
        let last = det.clone() * prod.recip().unwrap();
        if last.is_zero() {
            break;
        }
        if gamma.iter().all(|g| g != &last) {
            gamma.push(last);
            return (beta, gamma);
        }
    }
    unreachable!("a collision-free gamma exists within the scan range");
}

fn finish_two_diag(
    m: &Matrix<Rat>,
    f1: Matrix<Rat>,
    f2: Matrix<Rat>,
    e1: Option<(Matrix<Rat>, Vec<Rat>)>,
    e2: Option<(Matrix<Rat>, Vec<Rat>)>,
) -> Result<TwoDiagFactors, MatrixError> {
    if f1.mul(&f2) != *m {
        return Err(MatrixError::ConstructionFailed(1));
    }
    let mp1 = f1.minimal_polynomial();
    let mp2 = f2.minimal_polynomial();
    if !mp1.is_squarefree() || !mp2.is_squarefree() {
        return Err(MatrixError::ConstructionFailed(1));
    }
    Ok(TwoDiagFactors {
        first: DiagFactor {
            mat: f1,
            min_poly: mp1,
            eigen: e1,
        },
        second: DiagFactor {
            mat: f2,
            min_poly: mp2,
            eigen: e2,
        },
    })
}

/// Similarity splitting M into its invertible core and nilpotent part:
/// M = S diag(C, N) S^{-1} with C invertible and N nilpotent. Basis:
/// column space and kernel of M^n.
fn fitting_decomposition(
    m: &Matrix<Rat>,
) -> Result<(Matrix<Rat>, Matrix<Rat>, Matrix<Rat>), MatrixError> {
    let n = m.nrows();
    let power = m.pow(n as u32);
    let im_basis: Vec<Vec<Rat>> = power
        .column_space_basis_reduced()
        .into_iter()
        .map(|v| primitive_vector(&v))
        .collect();
    let ker_basis: Vec<Vec<Rat>> = power
        .nullspace()
        .into_iter()
        .map(|v| primitive_vector(&v))
        .collect();
    let k0 = im_basis.len();
    if k0 + ker_basis.len() != n {
        return Err(MatrixError::ConstructionFailed(1));
    }
    let mut cols = im_basis;
    cols.extend(ker_basis);
    let s = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    let s_inv = s.inverse().map_err(|_| MatrixError::ConstructionFailed(1))?;
    let a = s_inv.mul(m).mul(&s);
    // both subspaces are invariant, so A is block diagonal
    for i in 0..n {
        for j in 0..n {
            let off = (i < k0) != (j < k0);
            if off && !a.get(i, j).is_zero() {
                return Err(MatrixError::ConstructionFailed(1));
            }
        }
    }
    let core = a.submatrix(0, 0, k0, k0);
    let nil = a.submatrix(k0, k0, n - k0, n - k0);
    if core.det().is_zero() && k0 > 0 {
        return Err(MatrixError::ConstructionFailed(1));
    }
    if !nil.pow((n - k0) as u32).is_zero_matrix() {
        return Err(MatrixError::ConstructionFailed(1));
    }
    Ok((s, core, nil))
}

/// Scales a rational vector to a primitive integer vector (clears
/// denominators, strips the content).
fn primitive_vector(v: &[Rat]) -> Vec<Rat> {
    use num::bigint::BigInt;
    use num::{One, Zero};
    let mut lcm_den = BigInt::one();
    for x in v {
        let den = x.0.denom().clone();
        if !den.is_zero() {
            lcm_den = num::integer::lcm(lcm_den, den);
        }
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.0.numer() * (&lcm_den / x.0.denom()))
        .collect();
    let mut content = BigInt::zero();
    for i in &ints {
        content = num::integer::gcd(content, i.clone());
    }
    if content.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|i| Rat(num::rational::BigRational::from_integer(i / &content)))
        .collect()
}

/// Jordan basis of a nilpotent matrix: returns T and the block sizes,
/// with T^{-1} N T = blockdiag of upper-shift blocks (sizes descending
/// within discovery order).
fn nilpotent_jordan_basis(
    nil: &Matrix<Rat>,
) -> Result<(Matrix<Rat>, Vec<usize>), MatrixError> {
    let n = nil.nrows();
    if n == 0 {
        return Ok((Matrix::identity(0), vec![]));
    }
    // kernel filtration
    let mut kernels: Vec<Vec<Vec<Rat>>> = vec![vec![]];
    let mut power = Matrix::identity(n);
    let mut d = 0;
    loop {
        power = power.mul(nil);
        d += 1;
        let ker = power.nullspace();
        let dim = ker.len();
        kernels.push(ker);
        if dim == n {
            break;
        }
        if d > n {
            return Err(MatrixError::ConstructionFailed(1));
        }
    }

    // chains top-down: at height i, new tops extend
    // span(K_{i-1} + images of taller chains)
    let mut chains: Vec<(Vec<Rat>, usize)> = Vec::new();
    for i in (1..=d).rev() {
        let mut span = IncSpan::new(n);
        for v in &kernels[i - 1] {
            span.try_add(v);
        }
        for (top, h) in &chains {
            // the chain element at height i
            let mut w = top.clone();
            for _ in 0..(h - i) {
                w = nil.mul_vec(&w);
            }
            span.try_add(&w);
        }
        let candidates = kernels[i].clone();
        for cand in candidates {
            if span.try_add(&cand) {
                chains.push((cand, i));
            }
        }
    }

    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    for (top, h) in &chains {
        let mut chain = Vec::with_capacity(*h);
        let mut w = top.clone();
        chain.push(w.clone());
        for _ in 1..*h {
            w = nil.mul_vec(&w);
            chain.push(w.clone());
        }
        chain.reverse(); // lowest (most annihilated) first -> upper shift
        cols.extend(chain);
        blocks.push(*h);
    }
    if cols.len() != n {
        return Err(MatrixError::ConstructionFailed(1));
    }
    let t = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    if t.det().is_zero() {
        return Err(MatrixError::ConstructionFailed(1));
    }
    Ok((t, blocks))
}
