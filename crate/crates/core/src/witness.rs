//! Search for matrix tuples where an expression attains values with n
//! distinct (and optionally nonzero) eigenvalues, with exact rational
//! certificates; assembly of large witnesses from prime-size blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrixkit::factor::random_unimodular;
use crate::matrixkit::{Matrix, MatrixTuple};
use crate::ncexpr::RatExpr;
use crate::scalarkit::unipoly::UniPoly;
use crate::scalarkit::{Field, Rat};

#[derive(Clone, PartialEq, Debug, Default)]
pub struct SearchStats {
    pub attempts: usize,
    pub domain_failures: usize,
    pub repeated_spectrum: usize,
    pub zero_eigenvalue: usize,
    pub zero_trace: usize,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum WitnessError {
    #[error(
        "budget exhausted after {} samples ({} outside domain, {} repeated spectra, {} singular values, {} traceless values)",
        .0.attempts, .0.domain_failures, .0.repeated_spectrum, .0.zero_eigenvalue, .0.zero_trace
    )]
    BudgetExhausted(SearchStats),
    #[error("no sample of {attempts} lay in the domain")]
    DomainEmpty { attempts: usize },
    #[error("supplied tuple is outside the expression's domain")]
    OutsideDomain,
    #[error("glued blocks kept colliding after {0} rounds")]
    GlueExhausted(usize),
}

/// Acceptance requirements for a witness search.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SearchConfig {
    pub budget: usize,
    /// Initial sampling box; entries are uniform integers in [-B, B].
    /// Doubles every budget/4 failures.
    pub box_bound: i64,
    /// Demand nonzero eigenvalues (det != 0).
    pub require_nonzero: bool,
    /// Demand a nonzero trace (for the linear-combination pipelines).
    pub require_nonzero_trace: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 1000,
            box_bound: 5,
            require_nonzero: true,
            require_nonzero_trace: false,
        }
    }
}

/// Exact certificate that `value = e(x)` has n distinct (and optionally
/// nonzero) eigenvalues: chi is the exact characteristic polynomial,
/// squarefreeness is certified by gcd(chi, chi') being constant
/// (equivalent to a nonzero discriminant), and chi(0) != 0 certifies
/// invertibility.
#[derive(Clone, PartialEq, Debug)]
pub struct WitnessCertificate {
    pub x: MatrixTuple<Rat>,
    pub n: usize,
    pub value: Matrix<Rat>,
    pub chi: UniPoly<Rat>,
    pub disc_nonzero: bool,
    pub det_nonzero: bool,
    pub seed: u64,
    pub trial: usize,
}

impl WitnessCertificate {
    /// Certifies a supplied tuple by exact recomputation.
    pub fn certify(
        e: &RatExpr,
        x: MatrixTuple<Rat>,
        seed: u64,
        trial: usize,
    ) -> Result<Self, WitnessError> {
        let value = e.eval(&x).map_err(|_| WitnessError::OutsideDomain)?;
        let n = x.n();
        let chi = value.charpoly();
        let disc_nonzero = chi.degree() >= 1 && chi.is_squarefree();
        let det_nonzero = !chi.coeff(0).is_zero();
        Ok(WitnessCertificate {
            x,
            n,
            value,
            chi,
            disc_nonzero,
            det_nonzero,
            seed,
            trial,
        })
    }

    pub fn meets(&self, cfg: &SearchConfig) -> bool {
        self.disc_nonzero
            && (!cfg.require_nonzero || self.det_nonzero)
            && (!cfg.require_nonzero_trace || !self.value.trace().is_zero())
    }

    /// Distinct rational spectrum, when chi splits over the rationals.
    pub fn rational_spectrum(&self) -> Option<Vec<Rat>> {
        self.chi.all_rational_distinct_roots()
    }
}

pub(crate) fn random_dense_tuple(
    m: usize,
    n: usize,
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> MatrixTuple<Rat> {
    MatrixTuple::new(
        (0..m)
            .map(|_| Matrix::from_fn(n, n, |_, _| Rat::int(rng.gen_range(-bound..=bound))))
            .collect(),
    )
}

/// Upper-triangular integer tuple conjugated by a random unimodular
/// matrix. Expressions whose values inherit the sample's triangular
/// structure (such as a bare variable) then carry rational spectra, which
/// lets the decomposition pipelines run exactly.
fn random_triangular_tuple(
    m: usize,
    n: usize,
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> MatrixTuple<Rat> {
    let u = random_unimodular::<Rat>(n, rng);
    let u_inv = u.inverse().expect("unimodular");
    let tuple = MatrixTuple::new(
        (0..m)
            .map(|_| {
                Matrix::from_fn(n, n, |i, j| {
                    if i > j {
                        Rat::int(0)
                    } else {
                        Rat::int(rng.gen_range(-bound..=bound))
                    }
                })
            })
            .collect(),
    );
    tuple.conjugate(&u, &u_inv)
}

/// Samples rational tuples until `e` attains a value passing the exact
/// certificates. Dense draws alternate with triangular-conjugate draws;
/// acceptance is deterministic in the trial index for a fixed seed.
pub fn find_distinct_eigs(
    e: &RatExpr,
    n: usize,
    cfg: &SearchConfig,
    seed: u64,
) -> Result<WitnessCertificate, WitnessError> {
    assert!(n >= 1 && cfg.budget >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SearchStats::default();
    let escalate_every = (cfg.budget / 4).max(1);
    let mut bound = cfg.box_bound.max(1);
    for trial in 0..cfg.budget {
        if trial > 0 && trial % escalate_every == 0 {
            bound = bound.saturating_mul(2).min(1 << 20);
        }
        let x = if trial % 2 == 0 {
            random_dense_tuple(e.nvars, n, bound, &mut rng)
        } else {
            random_triangular_tuple(e.nvars, n, bound, &mut rng)
        };
        stats.attempts += 1;
        let value = match e.eval(&x) {
            Ok(v) => v,
            Err(_) => {
                stats.domain_failures += 1;
                continue;
            }
        };
        let chi = value.charpoly();
        if chi.degree() < 1 || !chi.is_squarefree() {
            stats.repeated_spectrum += 1;
            continue;
        }
        let det_nonzero = !chi.coeff(0).is_zero();
        if cfg.require_nonzero && !det_nonzero {
            stats.zero_eigenvalue += 1;
            continue;
        }
        if cfg.require_nonzero_trace && value.trace().is_zero() {
            stats.zero_trace += 1;
            continue;
        }
        return Ok(WitnessCertificate {
            x,
            n,
            value,
            chi,
            disc_nonzero: true,
            det_nonzero,
            seed,
            trial,
        });
    }
    if stats.domain_failures == stats.attempts {
        return Err(WitnessError::DomainEmpty {
            attempts: stats.attempts,
        });
    }
    Err(WitnessError::BudgetExhausted(stats))
}

/// Builds a witness of size a*p + b*q from fresh independently sampled
/// blocks of sizes p and q, re-certifying the direct sum exactly. The
/// glued characteristic polynomial is checked to factor blockwise; block
/// resampling retries on eigenvalue collisions (budget 100).
pub fn glue_blocks(
    e: &RatExpr,
    cert_p: &WitnessCertificate,
    cert_q: &WitnessCertificate,
    a: usize,
    b: usize,
    cfg: &SearchConfig,
    seed: u64,
) -> Result<WitnessCertificate, WitnessError> {
    assert!(a + b >= 1);
    if a == 1 && b == 0 {
        return Ok(cert_p.clone());
    }
    if a == 0 && b == 1 {
        return Ok(cert_q.clone());
    }
    let p = cert_p.n;
    let q = cert_q.n;
    for round in 0..100u64 {
        let mut glued: Option<MatrixTuple<Rat>> = None;
        let mut chi_product = UniPoly::constant(Rat::int(1));
        let mut block_seed = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(round + 1);
        let mut ok = true;
        for block in 0..(a + b) {
            let size = if block < a { p } else { q };
            block_seed = block_seed.wrapping_add(0x632be59bd9b4e019);
            let cert = match find_distinct_eigs(e, size, cfg, block_seed) {
                Ok(c) => c,
                Err(_) => {
                    ok = false;
                    break;
                }
            };
            chi_product = chi_product.mul(&cert.chi);
            glued = Some(match glued {
                None => cert.x,
                Some(g) => g.direct_sum(&cert.x),
            });
        }
        if !ok {
            continue;
        }
        let x = glued.expect("at least one block");
        let mut cert = WitnessCertificate::certify(e, x, seed, round as usize)?;
        // direct-sum consistency: the glued charpoly factors blockwise
        if cert.chi != chi_product {
            return Err(WitnessError::OutsideDomain);
        }
        cert.seed = seed;
        if cert.meets(cfg) {
            return Ok(cert);
        }
    }
    Err(WitnessError::GlueExhausted(100))
}

/// Sampled spectral behaviour of an expression at size n.
#[derive(Clone, PartialEq, Debug)]
pub enum SpectralProfile {
    /// Every sampled value was the same scalar matrix.
    ConstantScalar(Rat),
    /// Every sampled value had at most two distinct eigenvalues
    /// (the 2-central signature).
    TwoPointSpectrum,
    Generic,
}

pub fn spectral_profile(e: &RatExpr, n: usize, samples: usize, seed: u64) -> SpectralProfile {
    assert!(samples >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut constant: Option<Rat> = None;
    let mut all_constant = true;
    let mut max_distinct = 0usize;
    let mut seen = 0usize;
    let mut trial = 0usize;
    while seen < samples && trial < samples * 10 {
        trial += 1;
        let x = random_dense_tuple(e.nvars, n, 5, &mut rng);
        let value = match e.eval(&x) {
            Ok(v) => v,
            Err(_) => continue,
        };
        seen += 1;
        if value.is_scalar() {
            let lam = value.get(0, 0).clone();
            match &constant {
                None => constant = Some(lam),
                Some(prev) if *prev == lam => {}
                Some(_) => all_constant = false,
            }
        } else {
            all_constant = false;
        }
        let chi = value.charpoly();
        max_distinct = max_distinct.max(chi.distinct_root_count());
    }
    if all_constant {
        if let Some(lam) = constant {
            return SpectralProfile::ConstantScalar(lam);
        }
    }
    if max_distinct <= 2 {
        return SpectralProfile::TwoPointSpectrum;
    }
    SpectralProfile::Generic
}
