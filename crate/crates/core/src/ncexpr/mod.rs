//! Noncommutative rational expressions: abstract syntax, parsing, direct
//! evaluation on matrix tuples, and expansion of inversion-free
//! expressions into word-coefficient polynomials.

pub mod parse;
pub mod poly;

pub use parse::{parse, ParseError};
pub use poly::{expr_to_poly, scalar_root, NcPolynomial, ScalarRoot};

use num::rational::BigRational;

use crate::matrixkit::{Matrix, MatrixTuple};
use crate::scalarkit::Field;

/// Abstract syntax tree of a noncommutative rational expression in
/// variables x1..xm. Immutable; evaluation is pure.
#[derive(Clone, PartialEq, Debug)]
pub struct RatExpr {
    pub nvars: usize,
    pub node: Node,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Node {
    /// Rational constant.
    Const(BigRational),
    /// Variable x_i, 1-based index stored as 0-based.
    Var(usize),
    Sum(Vec<Node>),
    Product(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Inverse(Box<Node>),
}

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum EvalError {
    /// An inversion could not be carried out; the tuple lies outside the
    /// domain of this representative (not necessarily outside dom_n r).
    #[error("singular inversion at subexpression `{0}`")]
    DomainError(String),
    #[error("expression uses {expected} variables but the tuple has {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("expression contains an inverse and is not a polynomial")]
    NotPolynomial,
}

impl RatExpr {
    pub fn new(nvars: usize, node: Node) -> Self {
        RatExpr { nvars, node }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        RatExpr::new(nvars, Node::Const(c))
    }

    pub fn var(nvars: usize, index0: usize) -> Self {
        assert!(index0 < nvars);
        RatExpr::new(nvars, Node::Var(index0))
    }

    pub fn contains_inverse(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Const(_) | Node::Var(_) => false,
                Node::Sum(cs) => cs.iter().any(walk),
                Node::Product(a, b) => walk(a) || walk(b),
                Node::Neg(a) => walk(a),
                Node::Inverse(_) => true,
            }
        }
        walk(&self.node)
    }

    /// Recursive evaluation. Inverse nodes require nonsingular arguments
    /// and report the offending subexpression otherwise.
    pub fn eval<K: Field>(&self, x: &MatrixTuple<K>) -> Result<Matrix<K>, EvalError> {
        if x.m() != self.nvars {
            return Err(EvalError::ArityMismatch {
                expected: self.nvars,
                got: x.m(),
            });
        }
        eval_node(&self.node, x)
    }

    pub fn display(&self) -> String {
        display_node(&self.node)
    }
}

fn eval_node<K: Field>(node: &Node, x: &MatrixTuple<K>) -> Result<Matrix<K>, EvalError> {
    let n = x.n();
    match node {
        Node::Const(c) => Ok(Matrix::scalar(n, K::from_rational(c))),
        Node::Var(i) => Ok(x.component(*i).clone()),
        Node::Sum(children) => {
            let mut acc = Matrix::zero(n, n);
            for c in children {
                acc = acc.add(&eval_node(c, x)?);
            }
            Ok(acc)
        }
        Node::Product(a, b) => Ok(eval_node(a, x)?.mul(&eval_node(b, x)?)),
        Node::Neg(a) => Ok(eval_node(a, x)?.neg()),
        Node::Inverse(a) => {
            let inner = eval_node(a, x)?;
            inner
                .inverse()
                .map_err(|_| EvalError::DomainError(display_node(a)))
        }
    }
}

fn display_node(node: &Node) -> String {
    match node {
        Node::Const(c) => c.to_string(),
        Node::Var(i) => format!("x{}", i + 1),
        Node::Sum(children) => {
            let mut out = String::new();
            for (k, c) in children.iter().enumerate() {
                let s = display_node(c);
                if k == 0 {
                    out.push_str(&s);
                } else if let Some(stripped) = s.strip_prefix('-') {
                    out.push_str(" - ");
                    out.push_str(stripped);
                } else {
                    out.push_str(" + ");
                    out.push_str(&s);
                }
            }
            format!("({out})")
        }
        Node::Product(a, b) => format!("{}*{}", display_node(a), display_node(b)),
        Node::Neg(a) => format!("-{}", display_node(a)),
        Node::Inverse(a) => format!("{}^-1", display_node(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixkit::factor::random_invertible;
    use crate::scalarkit::Rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tuple2(a: Matrix<Rat>, b: Matrix<Rat>) -> MatrixTuple<Rat> {
        MatrixTuple::new(vec![a, b])
    }

    #[test]
    fn commutator_on_matrix_units() {
        let e12 = Matrix::<Rat>::from_int_rows(&[&[0, 1], &[0, 0]]);
        let e21 = Matrix::<Rat>::from_int_rows(&[&[0, 0], &[1, 0]]);
        let e = parse("x1*x2 - x2*x1", 2).unwrap();
        let v = e.eval(&tuple2(e12, e21)).unwrap();
        assert_eq!(v, Matrix::diagonal(&[Rat::int(1), Rat::int(-1)]));
    }

    #[test]
    fn singular_inverse_is_domain_error() {
        let e = parse("x1^-1", 1).unwrap();
        let x = MatrixTuple::new(vec![Matrix::<Rat>::from_int_rows(&[&[1, 1], &[1, 1]])]);
        assert!(matches!(e.eval(&x), Err(EvalError::DomainError(_))));
    }

    #[test]
    fn equivalent_representatives_agree_on_joint_domain() {
        // x2 (1 - x1 x2)^{-1} x1 and (x1^{-1} x2^{-1} - 1)^{-1} represent
        // the same function
        let lhs = parse("x2*(1 - x1*x2)^-1*x1", 2).unwrap();
        let rhs = parse("(x1^-1*x2^-1 - 1)^-1", 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut agreed = 0;
        while agreed < 100 {
            let a = Matrix::<Rat>::from_fn(3, 3, |_, _| Rat::int(rng.gen_range(-5..=5)));
            let b = Matrix::<Rat>::from_fn(3, 3, |_, _| Rat::int(rng.gen_range(-5..=5)));
            let x = tuple2(a, b);
            let (l, r) = match (lhs.eval(&x), rhs.eval(&x)) {
                (Ok(l), Ok(r)) => (l, r),
                _ => continue,
            };
            assert_eq!(l, r);
            agreed += 1;
        }
    }

    #[test]
    fn conjugation_equivariance() {
        let e = parse("x1^2 + x1*x2 - x2*x1 - x1 + 2", 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let a = Matrix::<Rat>::from_fn(3, 3, |_, _| Rat::int(rng.gen_range(-4..=4)));
            let b = Matrix::<Rat>::from_fn(3, 3, |_, _| Rat::int(rng.gen_range(-4..=4)));
            let x = tuple2(a, b);
            let p = random_invertible::<Rat>(3, 3, &mut rng);
            let p_inv = p.inverse().unwrap();
            let lhs = e.eval(&x.conjugate(&p, &p_inv)).unwrap();
            let rhs = p.mul(&e.eval(&x).unwrap()).mul(&p_inv);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn direct_sum_multiplicativity() {
        let e = parse("(x1*x2^-1*x1 - x2)^-1 - x2^-1", 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut done = 0;
        while done < 10 {
            let x = tuple2(
                Matrix::from_fn(2, 2, |_, _| Rat::int(rng.gen_range(-5..=5))),
                Matrix::from_fn(2, 2, |_, _| Rat::int(rng.gen_range(-5..=5))),
            );
            let y = tuple2(
                Matrix::from_fn(3, 3, |_, _| Rat::int(rng.gen_range(-5..=5))),
                Matrix::from_fn(3, 3, |_, _| Rat::int(rng.gen_range(-5..=5))),
            );
            let (vx, vy) = match (e.eval(&x), e.eval(&y)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            let glued = x.direct_sum(&y);
            let vg = match e.eval(&glued) {
                Ok(v) => v,
                Err(_) => continue,
            };
            assert_eq!(vg, Matrix::block_diag(&[vx, vy]));
            done += 1;
        }
    }
}
