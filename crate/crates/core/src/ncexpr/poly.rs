//! Word-coefficient form of inversion-free expressions, and a small-height
//! search for scalar roots.

use std::collections::BTreeMap;

use super::{EvalError, Node, RatExpr};
use crate::scalarkit::unipoly::UniPoly;
use crate::scalarkit::{Field, Rat};

/// Noncommutative polynomial: finite map from words over {1..m} to nonzero
/// rational coefficients. The empty word is the constant term.
#[derive(Clone, PartialEq, Debug)]
pub struct NcPolynomial {
    pub nvars: usize,
    terms: BTreeMap<Vec<usize>, Rat>,
}

impl NcPolynomial {
    pub fn zero(nvars: usize) -> Self {
        NcPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![], c);
        p
    }

    pub fn add_term(&mut self, word: Vec<usize>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &[usize]) -> Rat {
        self.terms.get(word).cloned().unwrap_or_else(|| Rat::int(0))
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&[])
    }

    /// Length of the longest stored word.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = Self::zero(self.nvars);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Evaluates on a matrix tuple (or scalars via 1x1 matrices).
    pub fn eval<K: Field>(
        &self,
        x: &crate::matrixkit::MatrixTuple<K>,
    ) -> crate::matrixkit::Matrix<K> {
        use crate::matrixkit::Matrix;
        let n = x.n();
        let mut acc = Matrix::zero(n, n);
        for (w, c) in &self.terms {
            let mut prod = Matrix::scalar(n, K::from_rational(&c.0));
            for &v in w {
                prod = prod.mul(x.component(v));
            }
            acc = acc.add(&prod);
        }
        acc
    }

    /// Evaluates at a scalar point.
    pub fn eval_scalars(&self, alpha: &[Rat]) -> Rat {
        assert_eq!(alpha.len(), self.nvars);
        let mut acc = Rat::int(0);
        for (w, c) in &self.terms {
            let mut prod = c.clone();
            for &v in w {
                prod = prod * alpha[v].clone();
            }
            acc = acc + prod;
        }
        acc
    }

    /// Commutative collapse into a univariate polynomial in x_{var}, with
    /// the other variables pinned to `alpha`.
    fn collapse_univariate(&self, var: usize, alpha: &[Rat]) -> UniPoly<Rat> {
        let mut coeffs: Vec<Rat> = vec![Rat::int(0); self.degree() + 1];
        for (w, c) in &self.terms {
            let mut deg = 0usize;
            let mut factor = c.clone();
            for &v in w {
                if v == var {
                    deg += 1;
                } else {
                    factor = factor * alpha[v].clone();
                }
            }
            coeffs[deg] = coeffs[deg].clone() + factor;
        }
        UniPoly::new(coeffs)
    }
}

/// Expands an inversion-free expression into word-coefficient form.
pub fn expr_to_poly(e: &RatExpr) -> Result<NcPolynomial, EvalError> {
    fn walk(node: &Node, m: usize) -> Result<NcPolynomial, EvalError> {
        match node {
            Node::Const(c) => Ok(NcPolynomial::constant(m, Rat(c.clone()))),
            Node::Var(i) => {
                let mut p = NcPolynomial::zero(m);
                p.add_term(vec![*i], Rat::int(1));
                Ok(p)
            }
            Node::Sum(children) => {
                let mut acc = NcPolynomial::zero(m);
                for c in children {
                    acc = acc.add(&walk(c, m)?);
                }
                Ok(acc)
            }
            Node::Product(a, b) => Ok(walk(a, m)?.mul(&walk(b, m)?)),
            Node::Neg(a) => Ok(walk(a, m)?.neg()),
            Node::Inverse(_) => Err(EvalError::NotPolynomial),
        }
    }
    walk(&e.node, e.nvars)
}

#[derive(Clone, PartialEq, Debug)]
pub enum ScalarRoot {
    Found(Vec<Rat>),
    /// Not a proof of nonexistence; the search is height-bounded.
    NotFound,
}

/// Searches for scalars (a1..am) with f(a1,..,am) = 0. Zero constant term
/// short-circuits to the origin; otherwise the commutative collapse is
/// scanned on an integer grid, refining one coordinate at a time by exact
/// rational root extraction.
pub fn scalar_root(f: &NcPolynomial, search_box: i64) -> ScalarRoot {
    assert!(!f.is_zero(), "scalar root search needs a nonzero polynomial");
    let m = f.nvars;
    if f.constant_term().is_zero() {
        return ScalarRoot::Found(vec![Rat::int(0); m]);
    }
    if m == 0 {
        return ScalarRoot::NotFound;
    }
    // grid over the non-refined coordinates, univariate solve in each
    // coordinate in turn
    let bound = search_box.max(1);
    let grid: Vec<i64> = {
        let mut g: Vec<i64> = (0..=bound).flat_map(|v| [v, -v]).collect();
        g.dedup();
        g
    };
    let mut assignment = vec![Rat::int(0); m];
    for var in 0..m {
        let others: Vec<usize> = (0..m).filter(|&v| v != var).collect();
        let mut counters = vec![0usize; others.len()];
        loop {
            for (slot, &v) in others.iter().enumerate() {
                assignment[v] = Rat::int(grid[counters[slot]]);
            }
            let uni = f.collapse_univariate(var, &assignment);
            if uni.is_zero() {
                // identically zero along this line
                assignment[var] = Rat::int(0);
                return ScalarRoot::Found(assignment);
            }
            if uni.degree() >= 1 {
                let (roots, _) = uni.rational_roots();
                if let Some(r) = roots.into_iter().next() {
                    assignment[var] = r;
                    debug_assert!(f.eval_scalars(&assignment).is_zero());
                    return ScalarRoot::Found(assignment);
                }
            }
            // advance the odometer
            let mut slot = 0;
            loop {
                if slot == counters.len() {
                    break;
                }
                counters[slot] += 1;
                if counters[slot] < grid.len() {
                    break;
                }
                counters[slot] = 0;
                slot += 1;
            }
            if slot == counters.len() {
                break;
            }
        }
    }
    ScalarRoot::NotFound
}

impl RatExpr {
    /// Degree of the expanded polynomial; errors on inversions.
    pub fn poly_degree(&self) -> Result<usize, EvalError> {
        Ok(expr_to_poly(self)?.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixkit::{Matrix, MatrixTuple};
    use crate::ncexpr::parse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn commutator_expansion() {
        let e = parse("x1*x2 - x2*x1", 2).unwrap();
        let p = expr_to_poly(&e).unwrap();
        assert_eq!(p.coeff(&[0, 1]), Rat::int(1));
        assert_eq!(p.coeff(&[1, 0]), Rat::int(-1));
        assert_eq!(p.degree(), 2);
        assert_eq!(p.terms().count(), 2);
    }

    #[test]
    fn constant_expansion() {
        let e = parse("2", 1).unwrap();
        let p = expr_to_poly(&e).unwrap();
        assert_eq!(p.constant_term(), Rat::int(2));
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn product_of_sums_expands_cross_terms() {
        // (x1+x2)(x1-x2) = x1^2 - x1 x2 + x2 x1 - x2^2
        let e = parse("(x1 + x2)*(x1 - x2)", 2).unwrap();
        let p = expr_to_poly(&e).unwrap();
        assert_eq!(p.terms().count(), 4);
        assert_eq!(p.coeff(&[0, 0]), Rat::int(1));
        assert_eq!(p.coeff(&[0, 1]), Rat::int(-1));
        assert_eq!(p.coeff(&[1, 0]), Rat::int(1));
        assert_eq!(p.coeff(&[1, 1]), Rat::int(-1));
    }

    #[test]
    fn inverse_is_not_polynomial() {
        let e = parse("x1^-1", 1).unwrap();
        assert_eq!(expr_to_poly(&e), Err(EvalError::NotPolynomial));
    }

    #[test]
    fn eval_round_trip_matches_expression() {
        let e = parse("x1^2 + 3*x1*x2 - 2", 2).unwrap();
        let p = expr_to_poly(&e).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let x = MatrixTuple::new(vec![
                Matrix::<Rat>::from_fn(3, 3, |_, _| Rat::int(rng.gen_range(-4..=4))),
                Matrix::<Rat>::from_fn(3, 3, |_, _| Rat::int(rng.gen_range(-4..=4))),
            ]);
            assert_eq!(p.eval(&x), e.eval(&x).unwrap());
        }
    }

    #[test]
    fn scalar_root_cases() {
        // zero constant term -> origin
        let f = expr_to_poly(&parse("x1*x2 - x2*x1", 2).unwrap()).unwrap();
        assert_eq!(
            scalar_root(&f, 3),
            ScalarRoot::Found(vec![Rat::int(0), Rat::int(0)])
        );
        // x1 - 2 -> 2
        let f = expr_to_poly(&parse("x1 - 2", 1).unwrap()).unwrap();
        assert_eq!(scalar_root(&f, 3), ScalarRoot::Found(vec![Rat::int(2)]));
        // x1 x2 - 1 -> some rational point, verified exactly
        let f = expr_to_poly(&parse("x1*x2 - 1", 2).unwrap()).unwrap();
        match scalar_root(&f, 3) {
            ScalarRoot::Found(alpha) => assert!(f.eval_scalars(&alpha).is_zero()),
            other => panic!("expected a root, got {other:?}"),
        }
        // x1^2 + 1 has no rational root
        let f = expr_to_poly(&parse("x1^2 + 1", 1).unwrap()).unwrap();
        assert_eq!(scalar_root(&f, 5), ScalarRoot::NotFound);
    }
}
