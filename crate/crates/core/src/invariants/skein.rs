//! Kauffman bracket by recursive smoothing with label substitution.
//!
//! Shares nothing with the state-sum routine beyond the PD format, so the
//! two serve as cross-checks for each other.

use super::bracket::loop_value;
use super::pd::PdCode;
use super::poly::LaurentPolynomial;
use crate::error::{Error, Result};

pub const SKEIN_LIMIT: usize = 20;

pub fn skein_bracket(pd: &PdCode) -> Result<LaurentPolynomial> {
    if pd.len() > SKEIN_LIMIT {
        return Err(Error::Budget { crossings: pd.len(), limit: SKEIN_LIMIT });
    }
    if pd.is_empty() {
        return Ok(LaurentPolynomial::one());
    }
    pd.validate()?;
    let d = loop_value();
    let mut out = LaurentPolynomial::zero();
    recurse(&pd.crossings, 0, 0, &mut out, &d);
    Ok(out)
}

fn substitute(rest: &mut [[u32; 4]], from: u32, to: u32) {
    for rec in rest.iter_mut() {
        for l in rec.iter_mut() {
            if *l == from {
                *l = to;
            }
        }
    }
}

fn recurse(crossings: &[[u32; 4]], a_power: i32, loops: u32, out: &mut LaurentPolynomial, d: &LaurentPolynomial) {
    let Some((&[a, b, c, e], rest)) = crossings.split_first() else {
        let value = d.pow(loops.saturating_sub(1)).shift(a_power);
        *out = &*out + &value;
        return;
    };
    for (pairs, weight) in [([(a, b), (c, e)], 1), ([(a, e), (b, c)], -1)] {
        let mut rest = rest.to_vec();
        let mut pending = pairs;
        let mut new_loops = 0;
        for i in 0..2 {
            let (x, y) = pending[i];
            if x == y {
                new_loops += 1;
            } else {
                substitute(&mut rest, y, x);
                if i == 0 {
                    for p in pending.iter_mut().skip(1) {
                        if p.0 == y {
                            p.0 = x;
                        }
                        if p.1 == y {
                            p.1 = x;
                        }
                    }
                }
            }
        }
        recurse(&rest, a_power + weight, loops + new_loops, out, d);
    }
}
