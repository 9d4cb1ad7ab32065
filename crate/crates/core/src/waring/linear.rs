//! Linear Waring decompositions: traceless targets as differences of two
//! values, nonscalar nonzero-trace targets as alpha*(value + value), and
//! arbitrary targets as three-term combinations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    obtain_witness, seal, Decomposition, DecompositionKind, DecomposeOptions, Term, TermList,
    WaringError,
};
use crate::matrixkit::similarity::{
    prescribed_diagonal_similarity, similarity_onto, triangular_split, zero_diagonal_similarity,
};
use crate::matrixkit::{Matrix, MatrixTuple};
use crate::ncexpr::RatExpr;
use crate::scalarkit::{Cx, Field, Rat};
use crate::witness::WitnessCertificate;

/// Complex spectrum of a certificate, for the approximate path.
pub(crate) fn approx_spectrum(cert: &WitnessCertificate) -> Result<Vec<Cx>, WaringError> {
    let roots = cert
        .chi
        .roots_approx()
        .map_err(|e| WaringError::Construction(format!("root finder failed: {e}")))?;
    Ok(roots.into_iter().map(Cx).collect())
}

/// Conjugates the witness tuple so the expression's value becomes
/// q * n_i * q^{-1} for each triangular factor n_i.
fn conjugate_pair<K: Field>(
    witness_x: &MatrixTuple<K>,
    witness_value: &Matrix<K>,
    q: &Matrix<K>,
    n1: &Matrix<K>,
    n2: &Matrix<K>,
) -> Result<(MatrixTuple<K>, MatrixTuple<K>), WaringError> {
    let t1 = similarity_onto(n1, witness_value)?;
    let t2 = similarity_onto(n2, witness_value)?;
    let p1 = q.mul(&t1);
    let p2 = q.mul(&t2);
    let p1_inv = p1.inverse()?;
    let p2_inv = p2.inverse()?;
    Ok((
        witness_x.conjugate(&p1, &p1_inv),
        witness_x.conjugate(&p2, &p2_inv),
    ))
}

fn difference_tuples<K: Field>(
    target: &Matrix<K>,
    witness_x: &MatrixTuple<K>,
    witness_value: &Matrix<K>,
    lambda: &[K],
) -> Result<(MatrixTuple<K>, MatrixTuple<K>), WaringError> {
    let (q, m0) = zero_diagonal_similarity(target)?;
    let (n1, n2) = triangular_split(&m0, lambda)?;
    conjugate_pair(witness_x, witness_value, &q, &n1, &n2)
}

/// Writes a traceless target as e(X1) - e(X2): the witness value's
/// spectrum is planted on the two triangular halves of a zero-diagonal
/// form of the target, and both halves are conjugated onto the witness.
/// Exact when the witness spectrum is rational.
pub fn decompose_difference(
    e: &RatExpr,
    target: &Matrix<Rat>,
    opts: &DecomposeOptions,
) -> Result<Decomposition, WaringError> {
    if !target.trace().is_zero() {
        return Err(WaringError::NonzeroTrace);
    }
    let cert = obtain_witness(e, target.nrows(), opts, false, false)?;
    let terms = match cert.rational_spectrum() {
        Some(lambda) => {
            let (x1, x2) = difference_tuples(target, &cert.x, &cert.value, &lambda)?;
            TermList::Exact(vec![
                Term::plain(Rat::int(1), x1),
                Term::plain(Rat::int(-1), x2),
            ])
        }
        None => {
            let lambda = approx_spectrum(&cert)?;
            let (x1, x2) = difference_tuples(
                &target.to_cx(),
                &cert.x.to_cx(),
                &cert.value.to_cx(),
                &lambda,
            )?;
            TermList::Approx(vec![
                Term::plain(Rat::int(1), x1),
                Term::plain(Rat::int(-1), x2),
            ])
        }
    };
    seal(
        Decomposition {
            kind: DecompositionKind::Difference,
            terms,
            target: target.clone(),
            residual: 0.0,
            seed: opts.seed,
        },
        &[e],
        opts.tol,
    )
}

fn linear_two_tuples<K: Field>(
    target: &Matrix<K>,
    witness_x: &MatrixTuple<K>,
    witness_value: &Matrix<K>,
    lambda: &[K],
    alpha: &Rat,
    rng: &mut ChaCha8Rng,
) -> Result<(MatrixTuple<K>, MatrixTuple<K>), WaringError> {
    let n = target.nrows();
    let alpha_k = K::from_rational(&alpha.0);
    let prescribed: Vec<K> = lambda
        .iter()
        .map(|l| K::from_i64(2) * alpha_k.clone() * l.clone())
        .collect();
    let (q, a1) = prescribed_diagonal_similarity(target, &prescribed, rng)?;
    let alpha_inv = alpha_k.recip().expect("alpha is nonzero");
    let mut d1 = Matrix::diagonal(lambda);
    let mut d2 = Matrix::diagonal(lambda);
    for i in 0..n {
        for j in 0..n {
            if j > i {
                d1.set(i, j, alpha_inv.clone() * a1.get(i, j).clone());
            } else if j < i {
                d2.set(i, j, alpha_inv.clone() * a1.get(i, j).clone());
            }
        }
    }
    conjugate_pair(witness_x, witness_value, &q, &d1, &d2)
}

/// Writes a nonscalar nonzero-trace target as alpha*e(X1) + alpha*e(X2):
/// the target is conjugated to carry diagonal 2*alpha*lambda_i, then split
/// into upper and lower halves with spectrum lambda.
pub fn decompose_linear_two(
    e: &RatExpr,
    target: &Matrix<Rat>,
    opts: &DecomposeOptions,
) -> Result<Decomposition, WaringError> {
    if target.is_scalar() {
        return Err(WaringError::ScalarTarget);
    }
    if target.trace().is_zero() {
        return Err(WaringError::ZeroTrace);
    }
    let cert = obtain_witness(e, target.nrows(), opts, false, true)?;
    // alpha = tr(M) / (2 * sum of witness eigenvalues); both traces are
    // rational, so the coefficient is exact on either path
    let witness_trace = cert.value.trace();
    let alpha = target.trace() * (Rat::int(2) * witness_trace).recip().expect("nonzero trace");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed_11ea);
    let terms = match cert.rational_spectrum() {
        Some(lambda) => {
            let (x1, x2) =
                linear_two_tuples(target, &cert.x, &cert.value, &lambda, &alpha, &mut rng)?;
            TermList::Exact(vec![
                Term::plain(alpha.clone(), x1),
                Term::plain(alpha, x2),
            ])
        }
        None => {
            let lambda = approx_spectrum(&cert)?;
            let (x1, x2) = linear_two_tuples(
                &target.to_cx(),
                &cert.x.to_cx(),
                &cert.value.to_cx(),
                &lambda,
                &alpha,
                &mut rng,
            )?;
            TermList::Approx(vec![
                Term::plain(alpha.clone(), x1),
                Term::plain(alpha, x2),
            ])
        }
    };
    seal(
        Decomposition {
            kind: DecompositionKind::LinearTwo,
            terms,
            target: target.clone(),
            residual: 0.0,
            seed: opts.seed,
        },
        &[e],
        opts.tol,
    )
}

/// Writes an arbitrary target as beta*e(X0) + e(X1) - e(X2): one witness
/// value absorbs the trace, the remainder goes through the difference
/// pipeline with the same witness.
pub fn decompose_linear_three(
    e: &RatExpr,
    target: &Matrix<Rat>,
    opts: &DecomposeOptions,
) -> Result<Decomposition, WaringError> {
    let cert = obtain_witness(e, target.nrows(), opts, false, true)?;
    let witness_trace = cert.value.trace();
    let beta = target.trace() * witness_trace.recip().expect("nonzero trace");
    let remainder = target.sub(&cert.value.scale(&beta));
    debug_assert!(remainder.trace().is_zero());
    let mut sub_opts = opts.clone();
    sub_opts.witness = Some(cert.clone());
    let diff = decompose_difference(e, &remainder, &sub_opts)?;
    let terms = match diff.terms {
        TermList::Exact(mut ts) => {
            let mut all = vec![Term::plain(beta, cert.x)];
            all.append(&mut ts);
            TermList::Exact(all)
        }
        TermList::Approx(mut ts) => {
            let mut all = vec![Term::plain(beta, cert.x.to_cx())];
            all.append(&mut ts);
            TermList::Approx(all)
        }
    };
    seal(
        Decomposition {
            kind: DecompositionKind::LinearThree,
            terms,
            target: target.clone(),
            residual: 0.0,
            seed: opts.seed,
        },
        &[e],
        opts.tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncexpr::parse;
    use crate::waring::verify;
    use rand::{Rng, SeedableRng};

    fn random_traceless(n: usize, rng: &mut ChaCha8Rng) -> Matrix<Rat> {
        let mut m = Matrix::from_fn(n, n, |_, _| Rat::int(rng.gen_range(-5..=5)));
        let mut t = Rat::int(0);
        for i in 0..n - 1 {
            t = t + m.get(i, i).clone();
        }
        m.set(n - 1, n - 1, -t);
        m
    }

    #[test]
    fn difference_rejects_nonzero_trace() {
        let e = parse("x1", 1).unwrap();
        let m = Matrix::<Rat>::identity(2);
        assert_eq!(
            decompose_difference(&e, &m, &DecomposeOptions::default()),
            Err(WaringError::NonzeroTrace)
        );
    }

    #[test]
    fn difference_zero_target_reuses_witness() {
        let e = parse("x1", 1).unwrap();
        let m = Matrix::<Rat>::zero(3, 3);
        let d = decompose_difference(&e, &m, &DecomposeOptions::seeded(5)).unwrap();
        assert_eq!(d.residual, 0.0);
        match &d.terms {
            TermList::Exact(ts) => assert_eq!(ts[0].tuple, ts[1].tuple),
            TermList::Approx(ts) => assert_eq!(ts[0].tuple, ts[1].tuple),
        }
    }

    #[test]
    fn difference_identity_expression_exact() {
        let e = parse("x1", 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [3usize, 4] {
            let m = random_traceless(n, &mut rng);
            let d = decompose_difference(&e, &m, &DecomposeOptions::seeded(3)).unwrap();
            let rep = verify(&d, &[&e], 1e-8);
            assert!(rep.pass);
            if d.terms.is_exact() {
                assert_eq!(d.residual, 0.0);
            }
        }
    }

    #[test]
    fn difference_commutator_float_path() {
        let e = parse("x1*x2 - x2*x1", 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_traceless(4, &mut rng);
        let d = decompose_difference(&e, &m, &DecomposeOptions::seeded(8)).unwrap();
        assert!(d.residual <= 1e-8, "residual {}", d.residual);
        // trace of the reconstruction is zero by construction
    }

    #[test]
    fn linear_two_basic_and_errors() {
        let e = parse("x1", 1).unwrap();
        let m = Matrix::<Rat>::from_int_rows(&[&[1, 2], &[3, 1]]);
        let d = decompose_linear_two(&e, &m, &DecomposeOptions::seeded(11)).unwrap();
        assert!(verify(&d, &[&e], 1e-8).pass);
        assert_eq!(d.terms.len(), 2);

        assert_eq!(
            decompose_linear_two(&e, &Matrix::identity(2), &DecomposeOptions::default()),
            Err(WaringError::ScalarTarget)
        );
        let traceless = Matrix::<Rat>::from_int_rows(&[&[1, 0], &[0, -1]]);
        assert_eq!(
            decompose_linear_two(&e, &traceless, &DecomposeOptions::default()),
            Err(WaringError::ZeroTrace)
        );
    }

    #[test]
    fn linear_two_witness_value_is_half_sum() {
        // decomposing the witness value itself: alpha = 1/2
        let e = parse("x1", 1).unwrap();
        let opts = DecomposeOptions::seeded(13);
        let cert = obtain_witness(&e, 3, &opts, false, true).unwrap();
        let mut with_witness = opts.clone();
        with_witness.witness = Some(cert.clone());
        if cert.value.is_scalar() {
            return;
        }
        let d = decompose_linear_two(&e, &cert.value, &with_witness).unwrap();
        match &d.terms {
            TermList::Exact(ts) => assert_eq!(ts[0].coefficient, Rat::new(1, 2)),
            TermList::Approx(ts) => assert_eq!(ts[0].coefficient, Rat::new(1, 2)),
        }
    }

    #[test]
    fn linear_three_covers_scalars_and_zero() {
        let e = parse("x1", 1).unwrap();
        for target in [
            Matrix::<Rat>::zero(3, 3),
            Matrix::<Rat>::identity(3),
            Matrix::<Rat>::from_int_rows(&[&[2, 1, 0], &[0, 2, -4], &[7, 0, 1]]),
        ] {
            let d = decompose_linear_three(&e, &target, &DecomposeOptions::seeded(17)).unwrap();
            assert_eq!(d.terms.len(), 3);
            assert!(verify(&d, &[&e], 1e-8).pass);
        }
    }

    #[test]
    fn linear_three_commutator_square_float() {
        let e = parse("x1^2", 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = Matrix::<Rat>::from_fn(4, 4, |_, _| Rat::int(rng.gen_range(-5..=5)));
        let d = decompose_linear_three(&e, &m, &DecomposeOptions::seeded(29)).unwrap();
        assert!(d.residual <= 1e-8, "residual {}", d.residual);
    }
}
