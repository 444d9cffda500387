//! Integer relation search on `(1, t_1, …, t_n)` by PSLQ.
//!
//! PSLQ maintains a lower bound `1 / max |H_jj|` on the Euclidean norm of
//! any relation not yet found. Once that bound exceeds `max_coeff·sqrt(n+1)`
//! no relation with every `|λ_i| ≤ max_coeff` can exist and the check
//! passes. A relation is reported when an entry of `y` drops to the working
//! precision; it counts as a witness only if its coefficients respect the
//! bound and its residual is within `tol`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

const MAX_ITERATIONS: usize = 200_000;
const GAMMA: f64 = 1.1647;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub pass: bool,
    /// `(λ_0, λ_1, …)` with `λ_0 + Σ λ_i t_i = 0`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// lower bound on the norm of any relation, when the search ended
    pub norm_bound: f64,
    pub precision: u32,
    pub dimension: usize,
    pub iterations: usize,
}

fn tol_bits(tol: f64) -> u32 {
    (1.0 / tol).log2().ceil().max(1.0) as u32
}

/// Bits needed for `n` arcs: four times the tolerance's digits, and enough
/// room for PSLQ to push the norm bound past `max_coeff·sqrt(n+1)` before
/// rounding noise creates spurious relations. Spurious relations at `b` bits
/// have norm near `2^(b/(n+1))`, and the norm bound may trail the shortest
/// relation by up to `γ^(n-1)`.
pub fn required_precision(n: usize, max_coeff: u64, tol: f64) -> u32 {
    let dim = (n + 1) as f64;
    let lag = (n.max(1) - 1) as f64 * GAMMA.log2();
    let per_dim = (((max_coeff.max(1) as f64) * dim.sqrt()).log2() + lag).ceil() as u32 + 2;
    (4 * tol_bits(tol)).max(64 + (n as u32 + 1) * per_dim)
}

pub fn independence_check(arcs: &[Real], max_coeff: u64, tol: f64) -> Result<IndependenceReport> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance {tol} must lie in (0, 1)")));
    }
    let prec = arcs.iter().map(|a| a.precision()).min().unwrap_or(u32::MAX);
    let need = 4 * tol_bits(tol);
    if prec < need {
        return Err(Error::Precision(format!(
            "arcs carry {prec} bits, tolerance {tol:e} needs at least {need}"
        )));
    }
    let mut x = vec![Real::from_i64(1, prec)];
    x.extend(arcs.iter().cloned());
    let n = x.len();
    let bound = max_coeff as f64 * (n as f64).sqrt();

    let verdict = |lambda: Vec<BigInt>, norm_bound: f64, iterations: usize| -> Result<IndependenceReport> {
        let mut lambda = lambda;
        if lambda.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
            lambda.iter_mut().for_each(|v| *v = -v.clone());
        }
        let small = lambda.iter().all(|v| v.abs() <= BigInt::from(max_coeff));
        let residual = lambda
            .iter()
            .zip(&x)
            .fold(Real::zero(prec), |acc, (l, xi)| &acc + &(&Real::from_bigint(l.clone(), prec) * xi))
            .abs()
            .to_f64();
        if small && residual <= tol {
            return Ok(IndependenceReport {
                pass: false,
                witness: Some(lambda.iter().map(|v| v.to_i64().expect("bounded")).collect()),
                residual: Some(residual),
                norm_bound,
                precision: prec,
                dimension: n,
                iterations,
            });
        }
        Err(Error::Precision(format!(
            "relation candidate outside the bound after {iterations} iterations at {prec} bits; \
             recompute the arcs with at least {} bits",
            required_precision(n - 1, max_coeff, tol).max(prec + prec / 2)
        )))
    };

    if let Some(i) = x.iter().position(|v| v.is_zero()) {
        let mut lambda = vec![BigInt::zero(); n];
        lambda[i] = BigInt::one();
        return verdict(lambda, 0.0, 0);
    }

    // initialization
    let mut s = vec![Real::zero(prec); n];
    let mut acc = Real::zero(prec);
    for k in (0..n).rev() {
        acc = &acc + &x[k].square();
        s[k] = acc.sqrt();
    }
    let t = s[0].clone();
    let mut y: Vec<Real> = x.iter().map(|v| v / &t).collect();
    for v in s.iter_mut() {
        *v = &*v / &t;
    }
    let cols = n - 1;
    let mut h = vec![vec![Real::zero(prec); cols]; n];
    for j in 0..cols {
        h[j][j] = &s[j + 1] / &s[j];
        for i in j + 1..n {
            h[i][j] = -(&(&y[i] * &y[j]) / &(&s[j] * &s[j + 1]));
        }
    }
    let mut b: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();

    let reduce = |h: &mut Vec<Vec<Real>>, y: &mut Vec<Real>, b: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        if h[j][j].is_zero() {
            return;
        }
        let t = (&h[i][j] / &h[j][j]).round();
        if t.is_zero() {
            return;
        }
        let tr = Real::from_bigint(t.clone(), prec);
        y[j] = &y[j] + &(&tr * &y[i]);
        for k in 0..=j {
            h[i][k] = &h[i][k] - &(&tr * &h[j][k]);
        }
        for row in b.iter_mut() {
            let add = &t * &row[i];
            row[j] += add;
        }
    };

    for i in 1..n {
        for j in (0..i.min(cols)).rev() {
            reduce(&mut h, &mut y, &mut b, i, j);
        }
    }

    let threshold = Real::from_i64(1, prec) / Real::from_bigint(BigInt::one() << (prec - 24).max(8), prec);
    let gamma = GAMMA;
    let mut norm_bound = 0.0;
    for iteration in 1..=MAX_ITERATIONS {
        let mut m = 0;
        let mut best = f64::NEG_INFINITY;
        let mut max_diag = 0.0f64;
        for i in 0..cols {
            let mag = h[i][i].abs().to_f64();
            max_diag = max_diag.max(mag);
            let score = (i as f64 + 1.0) * gamma.ln() + mag.ln();
            if score > best {
                best = score;
                m = i;
            }
        }
        if max_diag > 0.0 {
            norm_bound = 1.0 / max_diag;
        }
        if norm_bound > bound {
            return Ok(IndependenceReport {
                pass: true,
                witness: None,
                residual: None,
                norm_bound,
                precision: prec,
                dimension: n,
                iterations: iteration - 1,
            });
        }

        y.swap(m, m + 1);
        h.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }
        if m + 2 < n {
            let t0 = (&h[m][m].square() + &h[m][m + 1].square()).sqrt();
            let t1 = &h[m][m] / &t0;
            let t2 = &h[m][m + 1] / &t0;
            for row in h.iter_mut().skip(m) {
                let (t3, t4) = (row[m].clone(), row[m + 1].clone());
                row[m] = &(&t1 * &t3) + &(&t2 * &t4);
                row[m + 1] = &(&t1 * &t4) - &(&t2 * &t3);
            }
        }
        for i in m + 1..n {
            for j in (0..(i).min(m + 2).min(cols)).rev() {
                reduce(&mut h, &mut y, &mut b, i, j);
            }
        }

        if let Some(j) = (0..n).find(|&j| y[j].abs() < threshold) {
            let lambda: Vec<BigInt> = b.iter().map(|row| row[j].clone()).collect();
            return verdict(lambda, norm_bound, iteration);
        }
    }
    Err(Error::Precision(format!("no decision after {MAX_ITERATIONS} iterations")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ratio_from_i64;

    fn r(n: i64, d: i64, prec: u32) -> Real {
        Real::from_ratio(&ratio_from_i64(n, d), prec)
    }

    fn holds(w: &[i64], x: &[f64]) -> bool {
        let s: f64 = w[0] as f64 + w[1..].iter().zip(x).map(|(&l, &t)| l as f64 * t).sum::<f64>();
        s.abs() < 1e-12 && w.iter().any(|&v| v != 0)
    }

    #[test]
    fn quarter_and_half() {
        let rep = independence_check(&[r(1, 4, 256), r(1, 2, 256)], 10, 1e-12).unwrap();
        assert!(!rep.pass);
        assert!(holds(rep.witness.as_ref().unwrap(), &[0.25, 0.5]));
    }

    #[test]
    fn third() {
        let rep = independence_check(&[r(1, 3, 256)], 3, 1e-12).unwrap();
        assert_eq!(rep.witness.unwrap(), vec![1, -3]);
    }

    #[test]
    fn generic_square_roots_pass() {
        let prec = 256;
        let arcs: Vec<Real> = [2, 3, 5, 7].iter().map(|&k| &Real::from_i64(k, prec).sqrt() / &Real::from_i64(3, prec)).collect();
        let rep = independence_check(&arcs, 10, 1e-12).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.norm_bound > 10.0 * 5f64.sqrt());
    }

    #[test]
    fn relation_beyond_the_bound_is_not_a_witness() {
        // 37·t = 1 is the only relation, and 37 > 10
        let prec = 256;
        let res = independence_check(&[r(1, 37, prec)], 10, 1e-12);
        match res {
            Ok(rep) => assert!(rep.pass),
            Err(Error::Precision(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn insufficient_precision() {
        let arcs = [r(1, 3, 128)];
        assert!(matches!(independence_check(&arcs, 10, 1e-12), Err(Error::Precision(_))));
        assert!(required_precision(10, 10, 1e-12) >= 160);
    }
}
