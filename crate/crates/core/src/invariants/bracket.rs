//! Kauffman bracket by state sum, and the Jones polynomial derived from it.
//!
//! At `[a, b, c, d]` the A-smoothing joins `a–b` and `c–d`, the B-smoothing
//! joins `a–d` and `b–c`. A state with `α` A-smoothings, `β` B-smoothings
//! and `L` loops contributes `A^{α-β} (−A² − A^{−2})^{L−1}`, so the empty
//! diagram (and any crossingless circle) has bracket 1.

use std::collections::HashMap;

use super::pd::PdCode;
use super::poly::{JonesPolynomial, LaurentPolynomial};
use crate::error::{Error, Result};

pub const STATE_SUM_LIMIT: usize = 24;

/// `−A² − A^{−2}`, the value of a free loop.
pub fn loop_value() -> LaurentPolynomial {
    LaurentPolynomial::from_terms(&[(2, -1), (-2, -1)])
}

pub fn kauffman_bracket(pd: &PdCode) -> Result<LaurentPolynomial> {
    let n = pd.len();
    if n > STATE_SUM_LIMIT {
        return Err(Error::Budget { crossings: n, limit: STATE_SUM_LIMIT });
    }
    if n == 0 {
        return Ok(LaurentPolynomial::one());
    }
    pd.validate()?;
    let mut index: HashMap<u32, usize> = HashMap::new();
    let recs: Vec<[usize; 4]> = pd
        .crossings
        .iter()
        .map(|r| {
            r.map(|l| {
                let next = index.len();
                *index.entry(l).or_insert(next)
            })
        })
        .collect();
    let arcs = index.len();

    // counts[alpha][loops]
    let mut counts = vec![vec![0u64; arcs + 1]; n + 1];
    let mut parent = vec![0usize; arcs];
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for state in 0u64..(1u64 << n) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        let mut loops = arcs;
        for (i, &[a, b, c, d]) in recs.iter().enumerate() {
            let pairs = if state >> i & 1 == 0 { [(a, b), (c, d)] } else { [(a, d), (b, c)] };
            for (u, v) in pairs {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru] = rv;
                    loops -= 1;
                }
            }
        }
        let alpha = n - state.count_ones() as usize;
        counts[alpha][loops] += 1;
    }

    let d = loop_value();
    let mut d_powers = vec![LaurentPolynomial::one()];
    for k in 1..=arcs {
        d_powers.push(&d_powers[k - 1] * &d);
    }
    let mut total = LaurentPolynomial::zero();
    for (alpha, row) in counts.iter().enumerate() {
        for (loops, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let weight = 2 * alpha as i32 - n as i32;
            let term = d_powers[loops - 1].shift(weight);
            total = &total + &(&term * &LaurentPolynomial::monomial(0, count as i64));
        }
    }
    Ok(total)
}

/// Normalize a bracket to the Jones polynomial: `(−A³)^{−w} ⟨D⟩` with
/// `A = t^{−1/4}`.
pub fn jones_from_bracket(bracket: &LaurentPolynomial, writhe: i64) -> Result<JonesPolynomial> {
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    let normalized = bracket.shift(-3 * writhe as i32);
    let mut half = LaurentPolynomial::zero();
    for (e, c) in normalized.terms() {
        // A^e = t^{-e/4} = (t^{1/2})^{-e/2}
        if e % 2 != 0 {
            return Err(Error::Domain(format!("bracket exponent {e} is odd; not a link diagram")));
        }
        half.add_term(-e / 2, sign * c);
    }
    Ok(JonesPolynomial { half_powers: half })
}

pub fn jones(pd: &PdCode, writhe: i64) -> Result<JonesPolynomial> {
    jones_from_bracket(&kauffman_bracket(pd)?, writhe)
}

/// Jones polynomial with the writhe read off the PD code itself.
pub fn jones_of(pd: &PdCode) -> Result<JonesPolynomial> {
    jones(pd, pd.writhe()?)
}
