//! Arbitrary (including singular) targets as products of at most twelve
//! values of a polynomial with a scalar root: the target splits into two
//! certified-diagonalizable factors; invertible factors take three
//! product factors directly, singular ones are diagonalized and padded by
//! scalar-root blocks so each contributes at most six.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::multiplicative::decompose_product_three;
use super::{
    seal, Decomposition, DecompositionKind, DecomposeOptions, Term, TermList, WaringError,
};
use crate::matrixkit::factor::{two_diagonalizable_factor, DiagFactor};
use crate::matrixkit::{Matrix, MatrixTuple};
use crate::ncexpr::{expr_to_poly, scalar_root, NcPolynomial, RatExpr, ScalarRoot};
use crate::scalarkit::{Cx, Field, Rat};

/// Factor tuples on either arithmetic path.
enum XTuples {
    Exact(Vec<MatrixTuple<Rat>>),
    Approx(Vec<MatrixTuple<Cx>>),
}

impl XTuples {
    fn to_approx(self) -> Vec<MatrixTuple<Cx>> {
        match self {
            XTuples::Approx(v) => v,
            XTuples::Exact(v) => v.into_iter().map(|t| t.to_cx()).collect(),
        }
    }

    fn concat(self, other: XTuples) -> XTuples {
        match (self, other) {
            (XTuples::Exact(mut a), XTuples::Exact(mut b)) => {
                a.append(&mut b);
                XTuples::Exact(a)
            }
            (a, b) => {
                let mut va = a.to_approx();
                let mut vb = b.to_approx();
                va.append(&mut vb);
                XTuples::Approx(va)
            }
        }
    }

    /// Pads every component j with alpha_j * I_extra in the lower block.
    fn pad(self, alpha: &[Rat], extra: usize) -> XTuples {
        if extra == 0 {
            return self;
        }
        match self {
            XTuples::Exact(v) => XTuples::Exact(
                v.into_iter()
                    .map(|t| {
                        MatrixTuple::new(
                            (0..t.m())
                                .map(|j| {
                                    Matrix::block_diag(&[
                                        t.component(j).clone(),
                                        Matrix::scalar(extra, alpha[j].clone()),
                                    ])
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            ),
            XTuples::Approx(v) => XTuples::Approx(
                v.into_iter()
                    .map(|t| {
                        MatrixTuple::new(
                            (0..t.m())
                                .map(|j| {
                                    Matrix::block_diag(&[
                                        t.component(j).clone(),
                                        Matrix::scalar(extra, Cx(alpha[j].to_c64())),
                                    ])
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            ),
        }
    }

    fn conjugate_rational(self, p: &Matrix<Rat>) -> Result<XTuples, WaringError> {
        match self {
            XTuples::Exact(v) => {
                let p_inv = p.inverse()?;
                Ok(XTuples::Exact(
                    v.into_iter().map(|t| t.conjugate(p, &p_inv)).collect(),
                ))
            }
            XTuples::Approx(v) => {
                let pc = p.to_cx();
                let pc_inv = pc.inverse()?;
                Ok(XTuples::Approx(
                    v.into_iter().map(|t| t.conjugate(&pc, &pc_inv)).collect(),
                ))
            }
        }
    }
}

fn tuples_of(d: Decomposition) -> XTuples {
    match d.terms {
        TermList::Exact(ts) => XTuples::Exact(ts.into_iter().map(|t| t.tuple).collect()),
        TermList::Approx(ts) => XTuples::Approx(ts.into_iter().map(|t| t.tuple).collect()),
    }
}

fn sub_opts(opts: &DecomposeOptions, salt: u64) -> DecomposeOptions {
    DecomposeOptions {
        seed: opts.seed ^ salt,
        budget: opts.budget,
        box_bound: opts.box_bound,
        tol: opts.tol,
        witness: None,
    }
}

fn three_for_invertible(
    f: &RatExpr,
    m: &Matrix<Rat>,
    opts: &DecomposeOptions,
    salt: u64,
) -> Result<XTuples, WaringError> {
    let d = decompose_product_three(f, f, f, m, &sub_opts(opts, salt))?;
    Ok(tuples_of(d))
}

/// One nonzero 1x1 value of the polynomial, as a tuple.
fn nonzero_scalar_value(
    f: &NcPolynomial,
    rng: &mut ChaCha8Rng,
) -> Result<(MatrixTuple<Rat>, Rat), WaringError> {
    for _ in 0..200 {
        let x = crate::witness::random_dense_tuple(f.nvars, 1, 5, rng);
        let v = f.eval(&x).get(0, 0).clone();
        if !v.is_zero() {
            return Ok((x, v));
        }
    }
    Err(WaringError::Construction(
        "no nonzero scalar value found; the polynomial may vanish on scalars".into(),
    ))
}

/// lambda = f(a) f(b) f(c) at size 1.
fn three_scalar_factors(
    f: &NcPolynomial,
    lambda: &Rat,
    opts: &DecomposeOptions,
    salt: u64,
) -> Result<XTuples, WaringError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ salt ^ 0x5ca1a);
    let (x1, u1) = nonzero_scalar_value(f, &mut rng)?;
    let (x2, u2) = nonzero_scalar_value(f, &mut rng)?;
    let c = lambda.clone() * (u1 * u2).recip().expect("nonzero values");
    let third = super::multiplicative::solve_det_target(
        f,
        1,
        &c,
        &DecomposeOptions {
            seed: opts.seed ^ salt ^ 0x7417d,
            ..opts.clone()
        },
    )?;
    Ok(match third {
        super::multiplicative::DetValue::Exact(x3) => XTuples::Exact(vec![x1, x2, x3]),
        super::multiplicative::DetValue::Approx(x3) => {
            XTuples::Approx(vec![x1.to_cx(), x2.to_cx(), x3])
        }
    })
}

/// diag(lambda) (all entries nonzero) as a product of three values at
/// size k = lambda.len().
fn diag_three(
    f: &RatExpr,
    f_poly: &NcPolynomial,
    lambda: &[Rat],
    opts: &DecomposeOptions,
    salt: u64,
) -> Result<XTuples, WaringError> {
    if lambda.len() == 1 {
        return three_scalar_factors(f_poly, &lambda[0], opts, salt);
    }
    three_for_invertible(f, &Matrix::diagonal(lambda), opts, salt)
}

/// Nonzeros-first permutation matrix P with
/// diag(d) = P diag(nonzeros.., 0..) P^{-1}.
fn nonzeros_first(d: &[Rat]) -> (Matrix<Rat>, Vec<Rat>, usize) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).filter(|&i| !d[i].is_zero()).collect();
    let k = order.len();
    order.extend((0..n).filter(|&i| d[i].is_zero()));
    let mut p = Matrix::zero(n, n);
    for (new, &old) in order.iter().enumerate() {
        p.set(old, new, Rat::int(1));
    }
    let lambda: Vec<Rat> = order[..k].iter().map(|&i| d[i].clone()).collect();
    (p, lambda, k)
}

/// A diagonal target of rank >= n0 as three product factors at full size:
/// the nonzero block is decomposed at its own size and padded back with
/// scalar-root blocks.
fn diagonal_rank_branch(
    f: &RatExpr,
    f_poly: &NcPolynomial,
    d: &[Rat],
    alpha: &[Rat],
    opts: &DecomposeOptions,
    salt: u64,
) -> Result<XTuples, WaringError> {
    let n = d.len();
    let (p, lambda, k) = nonzeros_first(d);
    debug_assert!(k >= 1);
    if k == n {
        return three_for_invertible(f, &Matrix::diagonal(d), opts, salt);
    }
    let inner = diag_three(f, f_poly, &lambda, opts, salt)?;
    inner.pad(alpha, n - k).conjugate_rational(&p)
}

/// One certified-diagonalizable factor as at most six product factors.
fn diagonalizable_factor_tuples(
    f: &RatExpr,
    f_poly: &NcPolynomial,
    fac: &DiagFactor,
    n0: usize,
    alpha: &[Rat],
    opts: &DecomposeOptions,
    salt: u64,
) -> Result<XTuples, WaringError> {
    if !fac.mat.det().is_zero() {
        return three_for_invertible(f, &fac.mat, opts, salt);
    }
    let (w, eigs) = fac.eigen.as_ref().ok_or_else(|| {
        WaringError::Construction("singular factor lacks a rational eigendecomposition".into())
    })?;
    let n = fac.mat.nrows();
    let k = eigs.iter().filter(|e| !e.is_zero()).count();
    if k >= n0 {
        let tuples = diagonal_rank_branch(f, f_poly, eigs, alpha, opts, salt)?;
        return tuples.conjugate_rational(w);
    }
    // low rank: split into two diagonal factors of rank n0 and n-n0+k
    let (p, lambda, _) = nonzeros_first(eigs);
    let wp = w.mul(&p);
    let mut d1: Vec<Rat> = lambda.clone();
    d1.extend(std::iter::repeat(Rat::int(1)).take(n0 - k));
    d1.extend(std::iter::repeat(Rat::int(0)).take(n - n0));
    let mut d2: Vec<Rat> = std::iter::repeat(Rat::int(1)).take(k).collect();
    d2.extend(std::iter::repeat(Rat::int(0)).take(n0 - k));
    d2.extend(std::iter::repeat(Rat::int(1)).take(n - n0));
    let t1 = diagonal_rank_branch(f, f_poly, &d1, alpha, opts, salt ^ 0xd1)?;
    let t2 = diagonal_rank_branch(f, f_poly, &d2, alpha, opts, salt ^ 0xd2)?;
    t1.concat(t2).conjugate_rational(&wp)
}

/// Writes any matrix as a product of at most twelve values of `f`, a
/// nonzero polynomial with a scalar root. Requires n >= 2*n0 where n0 is
/// the operational size at which the three-factor decomposition works.
pub fn decompose_product_twelve(
    f: &RatExpr,
    target: &Matrix<Rat>,
    n0: usize,
    opts: &DecomposeOptions,
) -> Result<Decomposition, WaringError> {
    let f_poly = expr_to_poly(f).map_err(|_| WaringError::NotPolynomial)?;
    if f_poly.is_zero() {
        return Err(WaringError::NotPolynomial);
    }
    let alpha = match scalar_root(&f_poly, opts.box_bound) {
        ScalarRoot::Found(a) => a,
        ScalarRoot::NotFound => return Err(WaringError::NoScalarRoot),
    };
    let n = target.nrows();
    if n0 < 1 || n < 2 * n0 {
        return Err(WaringError::ThresholdTooLarge { n, n0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x2d1a6);
    let factors = two_diagonalizable_factor(target, &mut rng)?;
    // the inner pieces verify against their own scale, so the assembly is
    // attempt-and-verify: tighten the inner tolerance and reseed on failure
    let mut last = None;
    for attempt in 0..4u64 {
        let mut inner = opts.clone();
        inner.tol = (opts.tol * 1e-2f64.powi(attempt as i32 + 1)).max(1e-11);
        inner.seed = opts.seed ^ (attempt << 24);
        // the first factor is invertible by construction
        let first = match three_for_invertible(f, &factors.first.mat, &inner, 0xaaaa) {
            Ok(t) => t,
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        let second = match diagonalizable_factor_tuples(
            f,
            &f_poly,
            &factors.second,
            n0,
            &alpha,
            &inner,
            0xbbbb,
        ) {
            Ok(t) => t,
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        let all = first.concat(second);
        let terms = match all {
            XTuples::Exact(ts) => TermList::Exact(
                ts.into_iter()
                    .map(|t| Term::plain(Rat::int(1), t))
                    .collect(),
            ),
            XTuples::Approx(ts) => TermList::Approx(
                ts.into_iter()
                    .map(|t| Term::plain(Rat::int(1), t))
                    .collect(),
            ),
        };
        if terms.len() > 12 {
            return Err(WaringError::Construction(format!(
                "assembled {} factors, expected at most twelve",
                terms.len()
            )));
        }
        match seal(
            Decomposition {
                kind: DecompositionKind::ProductTwelve,
                terms,
                target: target.clone(),
                residual: 0.0,
                seed: opts.seed,
            },
            &[f],
            opts.tol,
        ) {
            Ok(d) => return Ok(d),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or(WaringError::Construction(
        "twelve-factor assembly failed".into(),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waring::verify;
    use crate::ncexpr::parse;

    fn opts_tol(seed: u64, tol: f64) -> DecomposeOptions {
        DecomposeOptions {
            seed,
            tol,
            ..Default::default()
        }
    }

    #[test]
    fn zero_target_square_polynomial() {
        let f = parse("x1^2", 1).unwrap();
        let m = Matrix::<Rat>::zero(4, 4);
        let d = decompose_product_twelve(&f, &m, 2, &opts_tol(3, 1e-6)).unwrap();
        assert!(d.terms.len() <= 12);
        assert!(verify(&d, &[&f], 1e-6).pass);
    }

    #[test]
    fn identity_variable_any_target_exact() {
        let f = parse("x1", 1).unwrap();
        let m = Matrix::<Rat>::from_int_rows(&[
            &[0, 1, 0, 2],
            &[0, 0, 0, 1],
            &[3, 0, 1, 0],
            &[0, 0, 0, 5],
        ]);
        let d = decompose_product_twelve(&f, &m, 2, &opts_tol(7, 1e-6)).unwrap();
        assert!(verify(&d, &[&f], 1e-6).pass);
    }

    #[test]
    fn rank_two_singular_target() {
        let f = parse("x1^2", 1).unwrap();
        // rank-2 singular 4x4
        let a = Matrix::<Rat>::from_int_rows(&[&[1, 0], &[0, 2], &[1, 1], &[0, 1]]);
        let b = Matrix::<Rat>::from_int_rows(&[&[1, 2, 0, 1], &[0, 1, 1, 0]]);
        let m = a.mul(&b);
        let d = decompose_product_twelve(&f, &m, 1, &opts_tol(11, 1e-6)).unwrap();
        assert!(d.terms.len() <= 12);
        assert!(d.residual <= 1e-6, "residual {}", d.residual);
    }

    #[test]
    fn threshold_and_root_errors() {
        let f = parse("x1^2", 1).unwrap();
        let m = Matrix::<Rat>::identity(3);
        assert_eq!(
            decompose_product_twelve(&f, &m, 2, &DecomposeOptions::default()),
            Err(WaringError::ThresholdTooLarge { n: 3, n0: 2 })
        );
        let g = parse("x1^2 + 1", 1).unwrap();
        let m4 = Matrix::<Rat>::identity(4);
        assert_eq!(
            decompose_product_twelve(&g, &m4, 2, &DecomposeOptions::default()),
            Err(WaringError::NoScalarRoot)
        );
        let inv = parse("x1^-1", 1).unwrap();
        assert_eq!(
            decompose_product_twelve(&inv, &m4, 2, &DecomposeOptions::default()),
            Err(WaringError::NotPolynomial)
        );
    }
}
