//! Simultaneous root iteration (Aberth-Ehrlich) for dense complex
//! polynomials. Budget 1000 iterations; callers treat `None` as
//! non-convergence.

use num::complex::Complex64;

const MAX_ITER: usize = 1000;

fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// All roots of the polynomial with ascending `coeffs`, with multiplicity.
/// Roots at zero are deflated exactly; the rest converge to residual
/// |p(z)| <= eps * |p| coefficient scale.
pub fn aberth_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let mut cs: Vec<Complex64> = coeffs.to_vec();
    while cs.last().map_or(false, |c| c.norm() == 0.0) {
        cs.pop();
    }
    if cs.len() <= 1 {
        return if cs.is_empty() { None } else { Some(vec![]) };
    }

    let mut zero_roots = Vec::new();
    while cs.first().map_or(false, |c| c.norm() == 0.0) {
        zero_roots.push(Complex64::new(0.0, 0.0));
        cs.remove(0);
    }
    let n = cs.len() - 1;
    if n == 0 {
        return Some(zero_roots);
    }

    // normalize to a monic polynomial
    let lc = cs[n];
    let monic: Vec<Complex64> = cs.iter().map(|c| c / lc).collect();
    let deriv: Vec<Complex64> = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();

    // Cauchy-style inclusion radius
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);

    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(radius * 0.8, angle)
        })
        .collect();

    let scale = monic.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let target = 1e-13 * scale.max(1.0);

    for _ in 0..MAX_ITER {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = poly_eval(&monic, z[i]);
            if p.norm() <= target {
                continue;
            }
            let dp = poly_eval(&deriv, z[i]);
            let newton = if dp.norm() == 0.0 {
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let mut repulse = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if i != j {
                    let d = z[i] - z[j];
                    if d.norm() > 1e-300 {
                        repulse += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulse;
            let step = if denom.norm() < 1e-300 {
                newton
            } else {
                newton / denom
            };
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved <= 1e-15 * radius.max(1.0) {
            break;
        }
    }

    // polish with plain Newton and accept on residual
    for zi in z.iter_mut() {
        for _ in 0..8 {
            let p = poly_eval(&monic, *zi);
            let dp = poly_eval(&deriv, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            *zi -= step;
            if step.norm() < 1e-16 * (1.0 + zi.norm()) {
                break;
            }
        }
    }
    let loose = 1e-8 * scale.max(1.0) * radius.max(1.0).powi(n as i32);
    for &zi in &z {
        if poly_eval(&monic, zi).norm() > loose {
            return None;
        }
    }
    zero_roots.extend(z);
    Some(zero_roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn quadratic_roots() {
        // t^2 - 1
        let roots = aberth_roots(&[c(-1.0), c(0.0), c(1.0)]).unwrap();
        let mut res: Vec<f64> = roots.iter().map(|z| z.re).collect();
        res.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((res[0] + 1.0).abs() < 1e-12);
        assert!((res[1] - 1.0).abs() < 1e-12);
        assert!(roots.iter().all(|z| z.im.abs() < 1e-12));
    }

    #[test]
    fn roots_at_zero_are_deflated() {
        // t^3 - t^2 = t^2 (t - 1)
        let roots = aberth_roots(&[c(0.0), c(0.0), c(-1.0), c(1.0)]).unwrap();
        assert_eq!(roots.len(), 3);
        let zeros = roots.iter().filter(|z| z.norm() < 1e-12).count();
        assert_eq!(zeros, 2);
    }

    #[test]
    fn wilkinson_like_products() {
        // prod (t - k), k = 1..8
        let mut coeffs = vec![c(1.0)];
        for k in 1..=8 {
            let mut next = vec![c(0.0); coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i] -= a * k as f64;
                next[i + 1] += a;
            }
            coeffs = next;
        }
        let mut roots = aberth_roots(&coeffs).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (i, z) in roots.iter().enumerate() {
            assert!((z.re - (i as f64 + 1.0)).abs() < 1e-6, "{z}");
            assert!(z.im.abs() < 1e-6);
        }
    }
}
