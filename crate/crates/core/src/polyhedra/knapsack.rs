//! The relaxed knapsack polytope `{x in [0,1]^m : y x <= cap}`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::guard;
use crate::rational::{self, Rational};

fn check_positive(y: &[Rational]) -> Result<()> {
    if let Some(bad) = y.iter().find(|v| !v.is_positive()) {
        return Err(Error::Validation(format!(
            "weights must be strictly positive, got {}",
            rational::fmt(bad)
        )));
    }
    Ok(())
}

/// Exact volume by the alternating vertex sum over `{0,1}^m`.
pub fn knapsack_volume(y: &[Rational], cap: &Rational) -> Result<Rational> {
    let m = y.len();
    guard::check("exact_polyhedra", "knapsack dimension", m as u128, guard::KNAPSACK_DIM)?;
    check_positive(y)?;
    if m == 0 {
        return Ok(Rational::one());
    }
    let mut sum = Rational::zero();
    // Depth-first over partial sums; branches past the cap contribute nothing.
    let mut stack: Vec<(usize, Rational, bool)> = vec![(0, Rational::zero(), false)];
    while let Some((j, load, odd)) = stack.pop() {
        if &load > cap {
            continue;
        }
        if j == m {
            let g = num_traits::pow(cap - &load, m);
            if odd {
                sum -= g;
            } else {
                sum += g;
            }
            continue;
        }
        stack.push((j + 1, &load + &y[j], !odd));
        stack.push((j + 1, load, odd));
    }
    let factorial: BigInt = (1..=m).map(BigInt::from).product();
    let prod: Rational = y.iter().fold(Rational::one(), |acc, v| acc * v);
    Ok(sum / (Rational::from_integer(factorial) * prod))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DantzigSolution {
    #[serde(with = "rational::serde_q")]
    pub value: Rational,
    #[serde(with = "rational::serde_q::vec")]
    pub point: Vec<Rational>,
    /// Indices sorted by `c_j / y_j`, largest first, ties by index.
    pub order: Vec<usize>,
    /// 1-based position in `order` of the split item; `m + 1` when everything fits.
    pub r: usize,
    #[serde(with = "rational::serde_q")]
    pub sigma: Rational,
}

/// Greedy optimum of `max c x` over the relaxed knapsack polytope.
pub fn dantzig_max(c: &[Rational], y: &[Rational], cap: &Rational) -> Result<DantzigSolution> {
    if c.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: y.len(),
            got: c.len(),
        });
    }
    if c.iter().any(Signed::is_negative) {
        return Err(Error::NegativeObjective);
    }
    check_positive(y)?;
    if cap.is_negative() {
        return Err(Error::Validation("knapsack capacity must be nonnegative".into()));
    }
    let m = c.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        let ra = &c[a] / &y[a];
        let rb = &c[b] / &y[b];
        rb.cmp(&ra).then(a.cmp(&b))
    });
    let mut point = vec![Rational::zero(); m];
    let mut value = Rational::zero();
    let mut load = Rational::zero();
    for (pos, &j) in order.iter().enumerate() {
        let next = &load + &y[j];
        if &next > cap {
            let sigma = (cap - &load) / &y[j];
            value += &c[j] * &sigma;
            point[j] = sigma.clone();
            return Ok(DantzigSolution {
                value,
                point,
                order,
                r: pos + 1,
                sigma,
            });
        }
        point[j] = Rational::one();
        value += &c[j];
        load = next;
    }
    Ok(DantzigSolution {
        value,
        point,
        order,
        r: m + 1,
        sigma: Rational::zero(),
    })
}
