//! Constructive decompositions of target matrices as differences, linear
//! combinations, quotients and products of values of a fixed expression.
//! Every operation returns verified input tuples; exact runs carry
//! residual 0, approximate runs a max-norm residual within tolerance.

pub mod linear;
pub mod multiplicative;
pub mod twelve;

pub use linear::{decompose_difference, decompose_linear_three, decompose_linear_two};
pub use multiplicative::{
    decompose_product_three, decompose_product_two, decompose_quotient, solve_det_target, DetValue,
};
pub use twelve::decompose_product_twelve;

use crate::matrixkit::{Matrix, MatrixError, MatrixTuple};
use crate::ncexpr::RatExpr;
use crate::scalarkit::{Cx, Field, Rat};
use crate::witness::{find_distinct_eigs, SearchConfig, WitnessCertificate, WitnessError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecompositionKind {
    Difference,
    LinearTwo,
    LinearThree,
    Quotient,
    ProductTwo,
    ProductThree,
    ProductTwelve,
}

impl DecompositionKind {
    pub fn is_multiplicative(&self) -> bool {
        matches!(
            self,
            DecompositionKind::Quotient
                | DecompositionKind::ProductTwo
                | DecompositionKind::ProductThree
                | DecompositionKind::ProductTwelve
        )
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DecompositionKind::Difference => "difference",
            DecompositionKind::LinearTwo => "linear2",
            DecompositionKind::LinearThree => "linear3",
            DecompositionKind::Quotient => "quotient",
            DecompositionKind::ProductTwo => "product2",
            DecompositionKind::ProductThree => "product3",
            DecompositionKind::ProductTwelve => "product12",
        }
    }
}

/// One term: a coefficient (always rational, even on the approximate
/// path), an inversion flag for multiplicative kinds, and the input tuple.
#[derive(Clone, PartialEq, Debug)]
pub struct Term<K: Field> {
    pub coefficient: Rat,
    pub inverted: bool,
    pub tuple: MatrixTuple<K>,
}

impl<K: Field> Term<K> {
    pub fn plain(coefficient: Rat, tuple: MatrixTuple<K>) -> Self {
        Term {
            coefficient,
            inverted: false,
            tuple,
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum TermList {
    Exact(Vec<Term<Rat>>),
    Approx(Vec<Term<Cx>>),
}

impl TermList {
    pub fn len(&self) -> usize {
        match self {
            TermList::Exact(v) => v.len(),
            TermList::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TermList::Exact(_))
    }

    pub fn to_approx(self) -> Vec<Term<Cx>> {
        match self {
            TermList::Approx(v) => v,
            TermList::Exact(v) => v
                .into_iter()
                .map(|t| Term {
                    coefficient: t.coefficient,
                    inverted: t.inverted,
                    tuple: t.tuple.to_cx(),
                })
                .collect(),
        }
    }
}

/// A verified decomposition: replaying the recipe (sum of weighted values
/// or product of values and inverses) reproduces the target within
/// `residual`.
#[derive(Clone, PartialEq, Debug)]
pub struct Decomposition {
    pub kind: DecompositionKind,
    pub terms: TermList,
    pub target: Matrix<Rat>,
    pub residual: f64,
    pub seed: u64,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum WaringError {
    #[error("scalar targets are not supported by this mode")]
    ScalarTarget,
    #[error("target has zero trace; use the difference mode")]
    ZeroTrace,
    #[error("target must have zero trace")]
    NonzeroTrace,
    #[error("no witness value with nonzero trace was found; the expression appears to take only traceless values")]
    TracelessImage,
    #[error("witness search failed: {0}")]
    WitnessNotFound(WitnessError),
    #[error("target determinant must be exactly 1")]
    DeterminantNotOne,
    #[error("target must be invertible")]
    SingularTarget,
    #[error("no scalar root found for the polynomial")]
    NoScalarRoot,
    #[error("size {n} is below twice the operational threshold {n0}")]
    ThresholdTooLarge { n: usize, n0: usize },
    #[error("expression contains an inverse and is not a polynomial")]
    NotPolynomial,
    #[error("the expression evaluates to a constant determinant at this size")]
    ConstantFunction,
    #[error("no usable direction found after {0} attempts")]
    DegenerateDirections(usize),
    #[error("matrix kernel error: {0}")]
    Matrix(#[from] MatrixError),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("verification failed with residual {residual}")]
    VerifyFailed { residual: f64 },
}

impl WaringError {
    /// Contractual unsupported cases and precondition violations, as
    /// opposed to internal failures.
    pub fn is_contractual(&self) -> bool {
        matches!(
            self,
            WaringError::ScalarTarget
                | WaringError::ZeroTrace
                | WaringError::NonzeroTrace
                | WaringError::TracelessImage
                | WaringError::DeterminantNotOne
                | WaringError::SingularTarget
                | WaringError::NoScalarRoot
                | WaringError::ThresholdTooLarge { .. }
        )
    }
}

#[derive(Clone, Debug)]
pub struct DecomposeOptions {
    pub seed: u64,
    pub budget: usize,
    pub box_bound: i64,
    pub tol: f64,
    /// Supplied witness, bypassing the search (re-certified before use).
    pub witness: Option<WitnessCertificate>,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            seed: 0,
            budget: 1000,
            box_bound: 5,
            tol: 1e-8,
            witness: None,
        }
    }
}

impl DecomposeOptions {
    pub fn seeded(seed: u64) -> Self {
        DecomposeOptions {
            seed,
            ..Default::default()
        }
    }

    pub(crate) fn search_config(&self, require_nonzero: bool, require_trace: bool) -> SearchConfig {
        SearchConfig {
            budget: self.budget,
            box_bound: self.box_bound,
            require_nonzero,
            require_nonzero_trace: require_trace,
        }
    }
}

/// Obtains a witness: re-certifies a supplied one or searches.
pub(crate) fn obtain_witness(
    e: &RatExpr,
    n: usize,
    opts: &DecomposeOptions,
    require_nonzero: bool,
    require_trace: bool,
) -> Result<WitnessCertificate, WaringError> {
    let cfg = opts.search_config(require_nonzero, require_trace);
    if let Some(cert) = &opts.witness {
        let fresh = WitnessCertificate::certify(e, cert.x.clone(), cert.seed, cert.trial)
            .map_err(WaringError::WitnessNotFound)?;
        if fresh.n != n {
            return Err(WaringError::Construction(format!(
                "supplied witness has size {}, target needs {n}",
                fresh.n
            )));
        }
        if !fresh.meets(&cfg) {
            return Err(WaringError::Construction(
                "supplied witness fails the required certificates".into(),
            ));
        }
        return Ok(fresh);
    }
    find_distinct_eigs(e, n, &cfg, opts.seed).map_err(|err| match err {
        WitnessError::BudgetExhausted(ref stats)
            if require_trace
                && stats.zero_trace > 0
                && stats.zero_trace
                    >= stats.attempts
                        - stats.domain_failures
                        - stats.repeated_spectrum
                        - stats.zero_eigenvalue =>
        {
            WaringError::TracelessImage
        }
        other => WaringError::WitnessNotFound(other),
    })
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct VerifyReport {
    pub residual: f64,
    pub pass: bool,
}

/// Recomputes the combination or product from scratch. `exprs` holds one
/// expression per term, or a single expression shared by all terms.
pub fn verify(d: &Decomposition, exprs: &[&RatExpr], tol: f64) -> VerifyReport {
    fn expr_for<'a>(exprs: &[&'a RatExpr], i: usize) -> &'a RatExpr {
        if exprs.len() == 1 {
            exprs[0]
        } else {
            exprs[i]
        }
    }

    fn replay<K: Field>(
        kind: DecompositionKind,
        terms: &[Term<K>],
        exprs: &[&RatExpr],
        n: usize,
    ) -> Option<Matrix<K>> {
        if kind.is_multiplicative() {
            let mut acc = Matrix::<K>::identity(n);
            for (i, t) in terms.iter().enumerate() {
                let mut v = expr_for(exprs, i).eval(&t.tuple).ok()?;
                if t.inverted {
                    v = v.inverse().ok()?;
                }
                acc = acc.mul(&v);
            }
            Some(acc)
        } else {
            let mut acc = Matrix::<K>::zero(n, n);
            for (i, t) in terms.iter().enumerate() {
                let v = expr_for(exprs, i).eval(&t.tuple).ok()?;
                acc = acc.add(&v.scale(&K::from_rational(&t.coefficient.0)));
            }
            Some(acc)
        }
    }

    let n = d.target.nrows();
    match &d.terms {
        TermList::Exact(terms) => match replay(d.kind, terms, exprs, n) {
            Some(recon) if recon == d.target => VerifyReport {
                residual: 0.0,
                pass: true,
            },
            Some(recon) => {
                let resid = recon.sub(&d.target).norm_inf() / (1.0 + d.target.norm_inf());
                VerifyReport {
                    residual: resid,
                    pass: false,
                }
            }
            None => VerifyReport {
                residual: f64::INFINITY,
                pass: false,
            },
        },
        TermList::Approx(terms) => match replay(d.kind, terms, exprs, n) {
            Some(recon) => {
                let target = d.target.to_cx();
                let resid = recon.sub(&target).norm_inf() / (1.0 + target.norm_inf());
                VerifyReport {
                    residual: resid,
                    pass: resid <= tol,
                }
            }
            None => VerifyReport {
                residual: f64::INFINITY,
                pass: false,
            },
        },
    }
}

/// Verifies and stamps the decomposition, failing on a bad residual.
pub(crate) fn seal(
    mut d: Decomposition,
    exprs: &[&RatExpr],
    tol: f64,
) -> Result<Decomposition, WaringError> {
    let report = verify(&d, exprs, tol);
    if !report.pass {
        return Err(WaringError::VerifyFailed {
            residual: report.residual,
        });
    }
    d.residual = report.residual;
    Ok(d)
}
