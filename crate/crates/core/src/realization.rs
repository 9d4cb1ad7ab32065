//! Linear (pencil) representations r = c^t L^{-1} b with
//! L = A0 + A1 x1 + .. + Am xm, built by structural recursion on the
//! expression: sums stack block-diagonally, products couple through a
//! rank-one block, inversion borders the pencil (size exactly 2*delta+1),
//! and affine subexpressions invert directly at size 1.
//!
//! Validity of the composition rules is enforced by exact cross-agreement
//! with direct evaluation, not by symbolic manipulation.

use crate::matrixkit::{Matrix, MatrixTuple};
use crate::ncexpr::{expr_to_poly, Node, RatExpr};
use crate::scalarkit::{Field, Rat};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum RealizationError {
    #[error("pencil is singular at this tuple")]
    PencilSingular,
    #[error("realization expects {expected} variables, tuple has {got}")]
    ArityMismatch { expected: usize, got: usize },
}

/// Pencil data (delta; A0..Am; b; c) with r = c^t L^{-1} b.
#[derive(Clone, PartialEq, Debug)]
pub struct Realization {
    delta: usize,
    /// m+1 coefficient blocks, constant block first.
    a: Vec<Matrix<Rat>>,
    b: Vec<Rat>,
    c: Vec<Rat>,
}

impl Realization {
    pub fn new(a: Vec<Matrix<Rat>>, b: Vec<Rat>, c: Vec<Rat>) -> Self {
        assert!(!a.is_empty());
        let delta = a[0].nrows();
        assert!(a.iter().all(|blk| blk.is_square() && blk.nrows() == delta));
        assert_eq!(b.len(), delta);
        assert_eq!(c.len(), delta);
        Realization { delta, a, b, c }
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn nvars(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coefficient(&self, k: usize) -> &Matrix<Rat> {
        &self.a[k]
    }

    pub fn b(&self) -> &[Rat] {
        &self.b
    }

    pub fn c(&self) -> &[Rat] {
        &self.c
    }

    /// The evaluated pencil L(X) = A0 (x) I + sum Ak (x) Xk.
    pub fn pencil_at<K: Field>(&self, x: &MatrixTuple<K>) -> Result<Matrix<K>, RealizationError> {
        if x.m() != self.nvars() {
            return Err(RealizationError::ArityMismatch {
                expected: self.nvars(),
                got: x.m(),
            });
        }
        let n = x.n();
        let eye = Matrix::<K>::identity(n);
        let mut l = self.a[0].map(|v| K::from_rational(&v.0)).kron(&eye);
        for k in 0..x.m() {
            let ak = self.a[k + 1].map(|v| K::from_rational(&v.0));
            l = l.add(&ak.kron(x.component(k)));
        }
        Ok(l)
    }

    /// Evaluates (c^t (x) I) L(X)^{-1} (b (x) I).
    pub fn eval<K: Field>(&self, x: &MatrixTuple<K>) -> Result<Matrix<K>, RealizationError> {
        let n = x.n();
        let l = self.pencil_at(x)?;
        let mut rhs = Matrix::<K>::zero(self.delta * n, n);
        for i in 0..self.delta {
            let bi = K::from_rational(&self.b[i].0);
            for r in 0..n {
                rhs.set(i * n + r, r, bi.clone());
            }
        }
        let y = l.solve(&rhs).map_err(|_| RealizationError::PencilSingular)?;
        let mut out = Matrix::<K>::zero(n, n);
        for i in 0..self.delta {
            let ci = K::from_rational(&self.c[i].0);
            if ci.is_zero() {
                continue;
            }
            for r in 0..n {
                for s in 0..n {
                    let v = out.get(r, s).clone() + ci.clone() * y.get(i * n + r, s).clone();
                    out.set(r, s, v);
                }
            }
        }
        Ok(out)
    }

    /// det L(X) != 0: a sufficient condition for X to lie in dom_n r,
    /// exact in the rational backend.
    pub fn domain_check<K: Field>(&self, x: &MatrixTuple<K>) -> bool {
        match self.pencil_at(x) {
            Ok(l) => !l.det().is_zero(),
            Err(_) => false,
        }
    }

    /// Bordered inversion: from r = c^t L^{-1} b of size delta, builds a
    /// representation of r^{-1} of size exactly 2*delta+1 in the 3-block
    /// pattern [[L, 0, b], [0, L, b], [-c^t, 0, 0]].
    pub fn inverse_bordered(&self) -> Realization {
        let d = self.delta;
        let nd = 2 * d + 1;
        let m = self.nvars();
        let mut blocks = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut blk = Matrix::<Rat>::zero(nd, nd);
            for i in 0..d {
                for j in 0..d {
                    blk.set(i, j, self.a[k].get(i, j).clone());
                    blk.set(d + i, d + j, self.a[k].get(i, j).clone());
                }
            }
            if k == 0 {
                for i in 0..d {
                    blk.set(i, 2 * d, self.b[i].clone());
                    blk.set(d + i, 2 * d, self.b[i].clone());
                    blk.set(2 * d, i, -self.c[i].clone());
                }
            }
            blocks.push(blk);
        }
        let mut b = vec![Rat::int(0); nd];
        b[2 * d] = Rat::int(1);
        let c = b.clone();
        Realization::new(blocks, b, c)
    }

    /// Block-diagonal sum of two realizations.
    pub fn sum(&self, o: &Realization) -> Realization {
        assert_eq!(self.nvars(), o.nvars());
        let m = self.nvars();
        let blocks = (0..=m)
            .map(|k| Matrix::block_diag(&[self.a[k].clone(), o.a[k].clone()]))
            .collect();
        let mut b = self.b.clone();
        b.extend(o.b.iter().cloned());
        let mut c = self.c.clone();
        c.extend(o.c.iter().cloned());
        Realization::new(blocks, b, c)
    }

    /// Block upper-triangular product coupling through -b1 c2^t.
    pub fn product(&self, o: &Realization) -> Realization {
        assert_eq!(self.nvars(), o.nvars());
        let m = self.nvars();
        let (d1, d2) = (self.delta, o.delta);
        let blocks = (0..=m)
            .map(|k| {
                let mut blk = Matrix::<Rat>::zero(d1 + d2, d1 + d2);
                for i in 0..d1 {
                    for j in 0..d1 {
                        blk.set(i, j, self.a[k].get(i, j).clone());
                    }
                }
                for i in 0..d2 {
                    for j in 0..d2 {
                        blk.set(d1 + i, d1 + j, o.a[k].get(i, j).clone());
                    }
                }
                if k == 0 {
                    for i in 0..d1 {
                        for j in 0..d2 {
                            blk.set(i, d1 + j, -(self.b[i].clone() * o.c[j].clone()));
                        }
                    }
                }
                blk
            })
            .collect();
        let mut b = vec![Rat::int(0); d1];
        b.extend(o.b.iter().cloned());
        let mut c = self.c.clone();
        c.extend(vec![Rat::int(0); d2]);
        Realization::new(blocks, b, c)
    }

    pub fn negate(&self) -> Realization {
        let mut out = self.clone();
        out.b = out.b.iter().map(|v| -v.clone()).collect();
        out
    }
}

/// Size-based bounds attached to a realization (and optionally to a
/// polynomial degree).
#[derive(Clone, PartialEq, Debug)]
pub struct Thresholds {
    pub delta: usize,
    /// Domain nonempty for all n >= delta - 1.
    pub n_domain_nonempty: usize,
    /// Values noncentral for all n >= 2*delta.
    pub n_noncentral: usize,
    /// Smallest primes q > p > 2*delta.
    pub p: u64,
    pub q: u64,
    /// Distinct eigenvalues attainable for all n >= (p-1)(q-1).
    pub n_distinct: u64,
    /// Prime-free bound 4(delta-2)(2*delta-5).
    pub bertrand_bound: i64,
    /// For polynomials of degree d: noncentral for n >= ceil(d/2)+1.
    pub poly_noncentral: Option<usize>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn next_prime(mut n: u64) -> u64 {
    loop {
        n += 1;
        if is_prime(n) {
            return n;
        }
    }
}

pub fn thresholds(delta: usize, poly_degree: Option<usize>) -> Thresholds {
    assert!(delta >= 1);
    let p = next_prime(2 * delta as u64);
    let q = next_prime(p);
    let d = delta as i64;
    Thresholds {
        delta,
        n_domain_nonempty: delta.saturating_sub(1),
        n_noncentral: 2 * delta,
        p,
        q,
        n_distinct: (p - 1) * (q - 1),
        bertrand_bound: 4 * (d - 2) * (2 * d - 5),
        poly_noncentral: poly_degree.map(|deg| deg.div_ceil(2) + 1),
    }
}

/// Compiles an expression into a pencil representation by structural
/// recursion. Inverses of affine subexpressions take the direct size-1
/// pencil; all other inverses go through the 2*delta+1 bordering.
pub fn from_expr(e: &RatExpr) -> Realization {
    build(&e.node, e.nvars)
}

fn build(node: &Node, m: usize) -> Realization {
    match node {
        Node::Const(c) => {
            let mut blocks = vec![Matrix::<Rat>::zero(1, 1); m + 1];
            blocks[0].set(0, 0, Rat::int(1));
            Realization::new(blocks, vec![Rat(c.clone())], vec![Rat::int(1)])
        }
        Node::Var(i) => {
            // L = [[1, -x_i], [0, 1]], c = e1, b = e2 picks the (1,2)
            // entry of L^{-1}, which is x_i
            let mut blocks = vec![Matrix::<Rat>::zero(2, 2); m + 1];
            blocks[0] = Matrix::identity(2);
            blocks[i + 1].set(0, 1, Rat::int(-1));
            Realization::new(
                blocks,
                vec![Rat::int(0), Rat::int(1)],
                vec![Rat::int(1), Rat::int(0)],
            )
        }
        Node::Sum(children) => {
            let mut acc = build(&children[0], m);
            for child in &children[1..] {
                acc = acc.sum(&build(child, m));
            }
            acc
        }
        Node::Product(x, y) => build(x, m).product(&build(y, m)),
        Node::Neg(x) => build(x, m).negate(),
        Node::Inverse(x) => {
            if let Some(r) = affine_inverse(x, m) {
                return r;
            }
            build(x, m).inverse_bordered()
        }
    }
}

/// (alpha + sum beta_i x_i)^{-1} as the size-1 pencil
/// L = alpha + sum beta_i x_i with b = c = 1.
fn affine_inverse(inner: &Node, m: usize) -> Option<Realization> {
    let expr = RatExpr::new(m, inner.clone());
    let poly = expr_to_poly(&expr).ok()?;
    if poly.degree() > 1 {
        return None;
    }
    let mut blocks = vec![Matrix::<Rat>::zero(1, 1); m + 1];
    blocks[0].set(0, 0, poly.constant_term());
    for i in 0..m {
        blocks[i + 1].set(0, 0, poly.coeff(&[i]));
    }
    Some(Realization::new(
        blocks,
        vec![Rat::int(1)],
        vec![Rat::int(1)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncexpr::parse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tuple(m: usize, n: usize, rng: &mut ChaCha8Rng) -> MatrixTuple<Rat> {
        MatrixTuple::new(
            (0..m)
                .map(|_| Matrix::from_fn(n, n, |_, _| Rat::int(rng.gen_range(-4..=4))))
                .collect(),
        )
    }

    #[test]
    fn inverse_variable_is_size_one() {
        let e = parse("x1^-1", 1).unwrap();
        let r = from_expr(&e);
        assert_eq!(r.delta(), 1);
        let x = MatrixTuple::new(vec![Matrix::<Rat>::diagonal(&[
            Rat::int(2),
            Rat::int(4),
        ])]);
        let v = r.eval(&x).unwrap();
        assert_eq!(
            v,
            Matrix::diagonal(&[Rat::new(1, 2), Rat::new(1, 4)])
        );
    }

    #[test]
    fn bordered_inverse_size_law() {
        // sizes 1..6: inversion via the bordering is exactly 2*delta+1
        let exprs = [
            "x1^-1",             // delta 1 after the affine shortcut
            "x1",                // delta 2
            "x1 + 2",            // delta 3
            "x1*x1",             // 4
            "x1*x1 + x1^-1",     // 5
            "x1*x1 + x1",        // 6
        ];
        for (i, text) in exprs.iter().enumerate() {
            let r = from_expr(&parse(text, 1).unwrap());
            assert_eq!(r.delta(), i + 1, "base size for {text}");
            assert_eq!(r.inverse_bordered().delta(), 2 * (i + 1) + 1);
        }
    }

    #[test]
    fn pencil_singular_reported() {
        let e = parse("x1^-1", 1).unwrap();
        let r = from_expr(&e);
        let x = MatrixTuple::new(vec![Matrix::<Rat>::from_int_rows(&[&[1, 1], &[1, 1]])]);
        assert!(!r.domain_check(&x));
        assert_eq!(r.eval(&x), Err(RealizationError::PencilSingular));
    }

    #[test]
    fn cross_agreement_with_direct_evaluation() {
        let corpus = [
            ("x1^2 + x1*x2 - x2*x1 - x1 + 2", 2),
            ("(x1*x2^-1*x1 - x2)^-1 - x2^-1", 2),
            ("x2*(1 - x1*x2)^-1*x1", 2),
            ("(x1^-1*x2^-1 - 1)^-1", 2),
            ("x1*x2 - x2*x1", 2),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for (text, m) in corpus {
            let e = parse(text, m).unwrap();
            let r = from_expr(&e);
            let mut matched = 0;
            while matched < 20 {
                let x = random_tuple(m, 3, &mut rng);
                if !r.domain_check(&x) {
                    continue;
                }
                let via_pencil = r.eval(&x).unwrap();
                let direct = e.eval(&x).expect("pencil domain implies direct domain");
                assert_eq!(via_pencil, direct, "disagreement on {text}");
                matched += 1;
            }
        }
    }

    #[test]
    fn equivalent_representatives_equal_via_pencils() {
        let lhs = from_expr(&parse("x2*(1 - x1*x2)^-1*x1", 2).unwrap());
        let rhs = from_expr(&parse("(x1^-1*x2^-1 - 1)^-1", 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut matched = 0;
        while matched < 20 {
            let x = random_tuple(2, 2, &mut rng);
            if !lhs.domain_check(&x) || !rhs.domain_check(&x) {
                continue;
            }
            assert_eq!(lhs.eval(&x).unwrap(), rhs.eval(&x).unwrap());
            matched += 1;
        }
    }

    #[test]
    fn threshold_arithmetic() {
        let t = thresholds(4, None);
        assert_eq!(t.n_domain_nonempty, 3);
        assert_eq!(t.n_noncentral, 8);
        assert_eq!((t.p, t.q), (11, 13));
        assert_eq!(t.n_distinct, 120);
        assert_eq!(t.bertrand_bound, 24);
        for (d, want) in [(1, 2), (2, 2), (3, 3), (4, 3), (5, 4), (10, 6)] {
            assert_eq!(thresholds(1, Some(d)).poly_noncentral, Some(want));
        }
    }

    #[test]
    fn domain_hit_rate_positive_for_small_sizes() {
        // sampling consistent with dom_n nonempty for n >= delta - 1
        let e = parse("(x1*x2^-1*x1 - x2)^-1 - x2^-1", 2).unwrap();
        let r = from_expr(&e);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for n in 2..=4 {
            let mut hits = 0;
            for _ in 0..50 {
                if r.domain_check(&random_tuple(2, n, &mut rng)) {
                    hits += 1;
                }
            }
            assert!(hits > 0, "no domain hits at n={n}");
        }
    }
}
