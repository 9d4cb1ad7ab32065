//! Univariate polynomials over a [`Field`]: characteristic polynomials,
//! gcd, resultant, discriminant and squarefree certificates.

use num::complex::Complex64;

use super::roots::aberth_roots;
use super::{rationalize, Field, Rat};
use crate::matrixkit::Matrix;

/// Dense univariate polynomial, coefficients ascending, trailing zeros
/// stripped. The zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<K: Field> {
    coeffs: Vec<K>,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum PolyError {
    #[error("operation requires degree >= 1, got a constant")]
    DegreeZero,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("root finder did not converge within the iteration budget")]
    NonConvergence,
}

impl<K: Field> UniPoly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: K) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: K, deg: usize) -> Self {
        let mut coeffs = vec![K::zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    /// `t - root`
    pub fn linear_from_root(root: K) -> Self {
        Self::new(vec![-root, K::one()])
    }

    pub fn from_roots(roots: &[K]) -> Self {
        let mut p = Self::constant(K::one());
        for r in roots {
            p = p.mul(&Self::linear_from_root(r.clone()));
        }
        p
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0 alongside `is_zero`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(K::zero)
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + o.coeff(i));
        }
        Self::new(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - o.coeff(i));
        }
        Self::new(out)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|a| -a.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        let lc = self.leading();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        let inv = lc.recip().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Euclidean division: `self = q*div + r` with deg r < deg div.
    pub fn div_rem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let lc_inv = div.leading().recip().expect("nonzero leading coefficient");
        if rem.coeffs.len() < div.coeffs.len() {
            return (Self::zero(), rem);
        }
        let mut q = vec![K::zero(); rem.coeffs.len() - div.coeffs.len() + 1];
        while !rem.is_zero() && rem.coeffs.len() >= div.coeffs.len() {
            let shift = rem.coeffs.len() - div.coeffs.len();
            let factor = rem.leading() * lc_inv.clone();
            q[shift] = factor.clone();
            let mut new_coeffs = rem.coeffs.clone();
            for (j, b) in div.coeffs.iter().enumerate() {
                new_coeffs[shift + j] =
                    new_coeffs[shift + j].clone() - factor.clone() * b.clone();
            }
            // the leading term cancels by construction
            new_coeffs.pop();
            rem = Self::new(new_coeffs);
        }
        (Self::new(q), rem)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| K::from_i64(i as i64) * c.clone())
            .collect();
        Self::new(out)
    }

    /// Monic gcd via the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Least common multiple, normalized monic.
    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(o);
        let (q, r) = self.mul(o).div_rem(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }

    /// True iff gcd(f, f') is constant. Exact backend: a certificate that
    /// all roots in the algebraic closure are simple (equivalent to a
    /// nonzero discriminant).
    pub fn is_squarefree(&self) -> bool {
        assert!(self.degree() >= 1, "squarefree test requires degree >= 1");
        self.gcd(&self.derivative()).degree() == 0
    }

    /// Number of distinct roots in the algebraic closure:
    /// deg f - deg gcd(f, f').
    pub fn distinct_root_count(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        self.degree() - self.gcd(&self.derivative()).degree()
    }

    /// Resultant as the determinant of the Sylvester matrix:
    /// res(f,g) = lc(f)^deg g * lc(g)^deg f * prod (alpha_i - beta_j).
    pub fn resultant(&self, o: &Self) -> Result<K, PolyError> {
        if self.is_zero() || o.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let n = self.degree();
        let m = o.degree();
        if n == 0 && m == 0 {
            return Ok(K::one());
        }
        if n == 0 {
            // res(c, g) = c^deg g
            let mut acc = K::one();
            for _ in 0..m {
                acc = acc * self.leading();
            }
            return Ok(acc);
        }
        if m == 0 {
            let mut acc = K::one();
            for _ in 0..n {
                acc = acc * o.leading();
            }
            return Ok(acc);
        }
        let size = n + m;
        let mut s = Matrix::zero(size, size);
        for row in 0..m {
            for (k, c) in self.coeffs.iter().rev().enumerate() {
                s.set(row, row + k, c.clone());
            }
        }
        for row in 0..n {
            for (k, c) in o.coeffs.iter().rev().enumerate() {
                s.set(m + row, row + k, c.clone());
            }
        }
        Ok(s.det())
    }

    /// Discriminant under the convention
    /// disc(f) = (-1)^{n(n-1)/2} lc(f)^{-1} res(f, f');
    /// zero iff f has a repeated root in the algebraic closure.
    pub fn discriminant(&self) -> Result<K, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let n = self.degree();
        if n == 0 {
            return Err(PolyError::DegreeZero);
        }
        if n == 1 {
            return Ok(K::one());
        }
        let res = self.resultant(&self.derivative())?;
        let lc_inv = self.leading().recip().expect("nonzero leading coefficient");
        let sign = if (n * (n - 1) / 2) % 2 == 0 {
            K::one()
        } else {
            -K::one()
        };
        Ok(sign * lc_inv * res)
    }

    /// All deg f complex roots with multiplicity (Aberth simultaneous
    /// iteration on a squarefree factor, multiplicities restored from the
    /// exact squarefree decomposition when the backend is exact).
    pub fn roots_approx(&self) -> Result<Vec<Complex64>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let coeffs: Vec<Complex64> = self.coeffs.iter().map(|c| c.to_c64()).collect();
        aberth_roots(&coeffs).ok_or(PolyError::NonConvergence)
    }
}

impl UniPoly<Rat> {
    /// Extracts rational roots (with multiplicity) by rounding approximate
    /// roots and verifying exactly by synthetic division. Returns
    /// `(rational roots, nonrational cofactor)`.
    pub fn rational_roots(&self) -> (Vec<Rat>, UniPoly<Rat>) {
        let mut roots = Vec::new();
        let mut rest = self.clone();
        if rest.is_zero() || rest.degree() == 0 {
            return (roots, rest);
        }
        // strip roots at zero first
        while rest.degree() >= 1 && rest.coeff(0).is_zero() {
            roots.push(Rat::int(0));
            let coeffs = rest.coeffs()[1..].to_vec();
            rest = UniPoly::new(coeffs);
        }
        loop {
            if rest.degree() == 0 {
                break;
            }
            let approx = match rest.roots_approx() {
                Ok(r) => r,
                Err(_) => break,
            };
            let mut found = None;
            for z in approx {
                if z.im.abs() > 1e-7 * (1.0 + z.norm()) {
                    continue;
                }
                if let Some(cand) = rationalize(z.re, 1_000_000) {
                    let cand = Rat(cand);
                    if rest.eval(&cand).is_zero() {
                        found = Some(cand);
                        break;
                    }
                }
            }
            match found {
                Some(r) => {
                    let (q, rem) = rest.div_rem(&UniPoly::linear_from_root(r.clone()));
                    debug_assert!(rem.is_zero());
                    roots.push(r);
                    rest = q;
                }
                None => break,
            }
        }
        (roots, rest)
    }

    /// All roots as exact rationals when the polynomial splits over Q with
    /// simple roots; `None` otherwise.
    pub fn all_rational_distinct_roots(&self) -> Option<Vec<Rat>> {
        if self.degree() == 0 {
            return None;
        }
        let (roots, rest) = self.rational_roots();
        if rest.degree() != 0 || roots.len() != self.degree() {
            return None;
        }
        let mut sorted = roots.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return None;
            }
        }
        Some(roots)
    }
}

/// Characteristic polynomial det(tI - M), monic of degree n, by the
/// Faddeev-LeVerrier recurrence. Division-free except for exact integer
/// divisions, so it is exact over the rationals.
pub fn charpoly<K: Field>(m: &Matrix<K>) -> UniPoly<K> {
    assert!(m.is_square(), "charpoly requires a square matrix");
    let n = m.nrows();
    let mut coeffs = vec![K::zero(); n + 1];
    coeffs[n] = K::one();
    let mut aux = Matrix::zero(n, n);
    for k in 1..=n {
        // aux <- M * aux + c_{n-k+1} I ; c_{n-k} = -tr(M * aux)/k
        let mut step = m.mul(&aux);
        for i in 0..n {
            let v = step.get(i, i).clone() + coeffs[n - k + 1].clone();
            step.set(i, i, v);
        }
        let prod = m.mul(&step);
        let c = -(prod.trace() / K::from_i64(k as i64));
        coeffs[n - k] = c;
        aux = step;
    }
    UniPoly::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixkit::Matrix;

    fn rp(cs: &[i64]) -> UniPoly<Rat> {
        UniPoly::new(cs.iter().map(|&c| Rat::int(c)).collect())
    }

    #[test]
    fn charpoly_of_identity() {
        let m = Matrix::<Rat>::identity(2);
        // (t-1)^2 = t^2 - 2t + 1
        assert_eq!(charpoly(&m), rp(&[1, -2, 1]));
    }

    #[test]
    fn charpoly_of_swap() {
        let m = Matrix::from_rows(vec![
            vec![Rat::int(0), Rat::int(1)],
            vec![Rat::int(1), Rat::int(0)],
        ]);
        // eigenvalues +-1: t^2 - 1
        assert_eq!(charpoly(&m), rp(&[-1, 0, 1]));
    }

    /// Independent oracle: coefficient of t^{n-k} is (-1)^k times the sum
    /// of k x k principal minors, with minors computed by Laplace
    /// expansion.
    fn charpoly_by_minors(m: &Matrix<Rat>) -> UniPoly<Rat> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut idx: Vec<usize> = (0..k).collect();
            if k == 0 {
                return vec![vec![]];
            }
            if k > n {
                return out;
            }
            loop {
                out.push(idx.clone());
                let mut i = k;
                while i > 0 {
                    i -= 1;
                    if idx[i] != i + n - k {
                        idx[i] += 1;
                        for j in i + 1..k {
                            idx[j] = idx[j - 1] + 1;
                        }
                        break;
                    }
                    if i == 0 {
                        return out;
                    }
                }
            }
        }
        fn det_laplace(m: &Matrix<Rat>) -> Rat {
            let n = m.nrows();
            if n == 0 {
                return Rat::int(1);
            }
            if n == 1 {
                return m.get(0, 0).clone();
            }
            let mut acc = Rat::int(0);
            for j in 0..n {
                let mut sub = Matrix::zero(n - 1, n - 1);
                for r in 1..n {
                    let mut cc = 0;
                    for c in 0..n {
                        if c == j {
                            continue;
                        }
                        sub.set(r - 1, cc, m.get(r, c).clone());
                        cc += 1;
                    }
                }
                let term = m.get(0, j).clone() * det_laplace(&sub);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
        let n = m.nrows();
        let mut coeffs = vec![Rat::int(0); n + 1];
        coeffs[n] = Rat::int(1);
        for k in 1..=n {
            let mut s = Rat::int(0);
            for rows in subsets(n, k) {
                let mut sub = Matrix::zero(k, k);
                for (a, &i) in rows.iter().enumerate() {
                    for (b, &j) in rows.iter().enumerate() {
                        sub.set(a, b, m.get(i, j).clone());
                    }
                }
                s = s + det_laplace(&sub);
            }
            coeffs[n - k] = if k % 2 == 0 { s } else { -s };
        }
        UniPoly::new(coeffs)
    }

    #[test]
    fn charpoly_matches_principal_minor_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let m = Matrix::from_fn(4, 4, |_, _| Rat::int(rng.gen_range(-5..=5)));
            assert_eq!(charpoly(&m), charpoly_by_minors(&m));
        }
    }

    #[test]
    fn discriminant_examples() {
        // t^2 - 3t + 2: roots 1,2 -> disc 1
        assert_eq!(rp(&[2, -3, 1]).discriminant().unwrap(), Rat::int(1));
        // (t-1)^2
        assert_eq!(rp(&[1, -2, 1]).discriminant().unwrap(), Rat::int(0));
        // constant rejected
        assert_eq!(rp(&[5]).discriminant(), Err(PolyError::DegreeZero));
    }

    #[test]
    fn depressed_cubic_discriminant_matches_vandermonde() {
        // disc(t^3 + pt + q) = -4p^3 - 27q^2, cross-checked against the
        // squared Vandermonde of numerically computed roots.
        for (p, q) in [(1i64, 1i64), (-2, 1), (3, -5)] {
            let f = rp(&[q, p, 0, 1]);
            let disc = f.discriminant().unwrap();
            let expect = Rat::int(-4 * p * p * p - 27 * q * q);
            assert_eq!(disc, expect);
            let roots = f.roots_approx().unwrap();
            let mut vand = num::complex::Complex64::new(1.0, 0.0);
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let d = roots[i] - roots[j];
                    vand *= d * d;
                }
            }
            let disc_f = num::ToPrimitive::to_f64(&disc.0).unwrap();
            assert!((vand.re - disc_f).abs() < 1e-6 * (1.0 + vand.norm()));
            assert!(vand.im.abs() < 1e-6 * (1.0 + vand.norm()));
        }
    }

    #[test]
    fn resultant_examples() {
        // (t-1, t-2) -> 1 - 2 = -1
        let f = rp(&[-1, 1]);
        let g = rp(&[-2, 1]);
        assert_eq!(f.resultant(&g).unwrap(), Rat::int(-1));
        // shared roots
        let h = rp(&[2, -3, 1]);
        assert_eq!(h.resultant(&h).unwrap(), Rat::int(0));
        assert_eq!(
            UniPoly::<Rat>::zero().resultant(&f),
            Err(PolyError::ZeroPolynomial)
        );
    }

    /// Discriminant of a product. Under the squared-Vandermonde
    /// convention used here the law is disc(fg) = disc(f) disc(g)
    /// res(f,g)^2; under the bare res(f,f')/lc convention the same law
    /// carries the extra factor (-1)^{deg f deg g}. Both forms are
    /// checked.
    #[test]
    fn product_discriminant_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let twist = |p: &UniPoly<Rat>| {
            let n = p.degree();
            if (n * (n - 1) / 2) % 2 == 0 {
                Rat::int(1)
            } else {
                Rat::int(-1)
            }
        };
        let mut done = 0;
        while done < 20 {
            let df = rng.gen_range(1..=4);
            let dg = rng.gen_range(1..=4);
            let mut fc: Vec<Rat> = (0..=df).map(|_| Rat::int(rng.gen_range(-4..=4))).collect();
            let mut gc: Vec<Rat> = (0..=dg).map(|_| Rat::int(rng.gen_range(-4..=4))).collect();
            fc[df] = Rat::int(rng.gen_range(1..=4));
            gc[dg] = Rat::int(rng.gen_range(1..=4));
            let f = UniPoly::new(fc);
            let g = UniPoly::new(gc);
            if f.degree() == 0 || g.degree() == 0 {
                continue;
            }
            let h = f.mul(&g);
            let r = f.resultant(&g).unwrap();
            let res_sq = r.clone() * r;
            let (db, dg_, dh) = (
                f.discriminant().unwrap(),
                g.discriminant().unwrap(),
                h.discriminant().unwrap(),
            );
            assert_eq!(
                dh.clone(),
                db.clone() * dg_.clone() * res_sq.clone(),
                "squared-Vandermonde form"
            );
            // alternative convention disc'(p) = res(p, p')/lc(p)
            let sign = if (f.degree() * g.degree()) % 2 == 0 {
                Rat::int(1)
            } else {
                Rat::int(-1)
            };
            assert_eq!(
                twist(&h) * dh,
                sign * (twist(&f) * db) * (twist(&g) * dg_) * res_sq,
                "bare-resultant form"
            );
            done += 1;
        }
    }

    #[test]
    fn squarefree_examples() {
        assert!(rp(&[-1, 0, 1]).is_squarefree());
        // (t-1)^2 (t+3)
        let f = rp(&[1, -2, 1]).mul(&rp(&[3, 1]));
        assert!(!f.is_squarefree());
    }

    #[test]
    fn squarefree_agrees_with_discriminant_on_charpolys() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let m = Matrix::from_fn(5, 5, |_, _| Rat::int(rng.gen_range(-3..=3)));
            let chi = charpoly(&m);
            assert_eq!(
                chi.is_squarefree(),
                !chi.discriminant().unwrap().is_zero()
            );
        }
    }

    #[test]
    fn gcd_derivative_roots_basics() {
        assert_eq!(rp(&[-1, 0, 1]).gcd(&rp(&[-1, 1])), rp(&[-1, 1]));
        assert_eq!(rp(&[0, 0, 0, 1]).derivative(), rp(&[0, 0, 3]));
        let mut roots = rp(&[-1, 0, 1]).roots_approx().unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((roots[0].re + 1.0).abs() < 1e-12 && roots[0].im.abs() < 1e-12);
        assert!((roots[1].re - 1.0).abs() < 1e-12 && roots[1].im.abs() < 1e-12);
    }

    #[test]
    fn rational_root_extraction() {
        // (t - 1/2)(t + 3) * (t^2 + 1)
        let f = UniPoly::new(vec![Rat::new(-1, 2), Rat::int(1)])
            .mul(&rp(&[3, 1]))
            .mul(&rp(&[1, 0, 1]));
        let (roots, rest) = f.rational_roots();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&Rat::new(1, 2)));
        assert!(roots.contains(&Rat::int(-3)));
        assert_eq!(rest.degree(), 2);
        assert!(f.all_rational_distinct_roots().is_none());
        let g = UniPoly::from_roots(&[Rat::int(1), Rat::new(2, 3), Rat::int(-5)]);
        let mut rs = g.all_rational_distinct_roots().unwrap();
        rs.sort();
        assert_eq!(rs, vec![Rat::int(-5), Rat::new(2, 3), Rat::int(1)]);
    }
}
