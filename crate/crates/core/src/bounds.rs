//! Outer bounds on the service rate region.
//!
//! The piecewise-linear bounds all have the shape
//! `sum_i max(λ_i, c_i λ_i - (c_i - 1) t_i) + constant <= n`
//! for a slope `c_i >= 1` and a threshold `t_i >= 0` per object. Each term
//! equals `min(λ_i, t_i) + c_i max(0, λ_i - t_i)` on `λ_i >= 0`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::code::{dual_min_distance, pg_hyperplane_stats, projective_points, systematic_profile};
use crate::error::{Error, Result};
use crate::ff::Elem;
use crate::generator::GeneratorMatrix;
use crate::polyhedra::{dantzig_max, DantzigSolution, HPolytope};
use crate::rational::{self, Rational};
use crate::recovery::{minimal_recovery_system, RecoverySystem};
use crate::region::{DemandVector, FractionalAllocation, RegionParams};

fn q(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    LinearHalfSpace,
    PiecewiseLinear,
    ScalarCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    #[serde(with = "rational::serde_q")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_q")]
    pub rhs: Rational,
    pub satisfied: bool,
}

impl Evaluation {
    fn new(lhs: Rational, rhs: Rational) -> Self {
        let satisfied = lhs <= rhs;
        Self { lhs, rhs, satisfied }
    }
}

/// One object's contribution `max(λ, slope λ - (slope - 1) threshold)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    #[serde(with = "rational::serde_q")]
    pub threshold: Rational,
    #[serde(with = "rational::serde_q")]
    pub slope: Rational,
}

impl Term {
    fn new(threshold: Rational, slope: Rational) -> Self {
        debug_assert!(slope >= Rational::one());
        Self { threshold, slope }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let steep = &self.slope * x - (&self.slope - Rational::one()) * &self.threshold;
        rational::max(x, &steep)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum Shape {
    /// `a·λ <= rhs`.
    HalfSpace {
        #[serde(with = "rational::serde_q::vec")]
        a: Vec<Rational>,
        #[serde(with = "rational::serde_q")]
        rhs: Rational,
    },
    /// `sum of terms + constant <= rhs`; objects without a term contribute 0.
    Piecewise {
        terms: Vec<Option<Term>>,
        #[serde(with = "rational::serde_q")]
        constant: Rational,
        #[serde(with = "rational::serde_q")]
        rhs: Rational,
    },
}

/// A named outer bound together with the quantities it was built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub family: String,
    pub kind: BoundKind,
    pub shape: Shape,
    pub metadata: serde_json::Value,
}

impl BoundReport {
    pub fn k(&self) -> usize {
        match &self.shape {
            Shape::HalfSpace { a, .. } => a.len(),
            Shape::Piecewise { terms, .. } => terms.len(),
        }
    }

    pub fn evaluate(&self, lam: &DemandVector) -> Result<Evaluation> {
        if lam.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                got: lam.len(),
            });
        }
        let x = lam.values();
        Ok(match &self.shape {
            Shape::HalfSpace { a, rhs } => Evaluation::new(rational::dot(a, x), rhs.clone()),
            Shape::Piecewise { terms, constant, rhs } => {
                let lhs = terms
                    .iter()
                    .zip(x)
                    .filter_map(|(t, v)| t.as_ref().map(|t| t.eval(v)))
                    .fold(constant.clone(), |acc, v| acc + v);
                Evaluation::new(lhs, rhs.clone())
            }
        })
    }

    /// The bound as an H-polytope in demand space (with `λ >= 0`); piecewise
    /// terms are linearized by enumerating all 2^k pieces.
    pub fn polytope(&self) -> Result<HPolytope> {
        let k = self.k();
        let mut p = HPolytope::new(k, Vec::new(), Vec::new())?;
        for i in 0..k {
            let mut row = vec![Rational::zero(); k];
            row[i] = -Rational::one();
            p.push(row, Rational::zero());
        }
        match &self.shape {
            Shape::HalfSpace { a, rhs } => p.push(a.clone(), rhs.clone()),
            Shape::Piecewise { terms, constant, rhs } => {
                crate::guard::check("outer_bounds", "linearization cells", 1u128 << k.min(127), 1 << 16)?;
                for cell in 0..1u64 << k {
                    let mut row = vec![Rational::zero(); k];
                    let mut b = rhs - constant;
                    for (i, t) in terms.iter().enumerate() {
                        let Some(t) = t else { continue };
                        if cell >> i & 1 == 1 {
                            row[i] = t.slope.clone();
                            b += (&t.slope - Rational::one()) * &t.threshold;
                        } else {
                            row[i] = Rational::one();
                        }
                    }
                    p.push(row, b);
                }
            }
        }
        Ok(p.canonical())
    }
}

fn piecewise(name: &str, family: &str, terms: Vec<Option<Term>>, constant: Rational, n: usize, metadata: serde_json::Value) -> BoundReport {
    BoundReport {
        name: name.into(),
        family: family.into(),
        kind: BoundKind::PiecewiseLinear,
        shape: Shape::Piecewise {
            terms,
            constant,
            rhs: q(n),
        },
        metadata,
    }
}

/// `sum_{i,R} |R| λ_{i,R} <= μ n`.
pub fn total_capacity_check(a: &FractionalAllocation, n: usize, mu: &Rational) -> Evaluation {
    let lhs = a
        .index
        .entries()
        .iter()
        .zip(&a.values)
        .map(|((_, s), v)| q(s.len()) * v)
        .sum();
    Evaluation::new(lhs, mu * q(n))
}

/// Each object costs one server up to rate 1 and d⊥ - 1 servers per unit beyond.
pub fn dual_distance_bound(g: &GeneratorMatrix) -> Result<BoundReport> {
    if !g.is_systematic() {
        return Err(Error::NotSystematic);
    }
    let dd = dual_min_distance(g)?;
    let slope = rational::max(&q(dd.saturating_sub(1)), &Rational::one());
    let terms = (0..g.k()).map(|_| Some(Term::new(Rational::one(), slope.clone()))).collect();
    Ok(piecewise(
        "dual",
        "dual-distance",
        terms,
        Rational::zero(),
        g.n(),
        serde_json::json!({ "d_dual": dd }),
    ))
}

/// Each object is served by its s_i systematic nodes, then by sets of size >= 2.
pub fn systematic_node_bound(g: &GeneratorMatrix) -> Result<BoundReport> {
    if !g.is_systematic() {
        return Err(Error::NotSystematic);
    }
    let s = systematic_profile(g).s;
    let terms = s.iter().map(|&si| Some(Term::new(q(si), q(2)))).collect();
    Ok(piecewise(
        "sysnode",
        "systematic-node",
        terms,
        Rational::zero(),
        g.n(),
        serde_json::json!({ "s": s }),
    ))
}

/// Systematic nodes plus the dual distance; objects without systematic nodes cost 2 per unit.
pub fn hybrid_bound(g: &GeneratorMatrix) -> Result<BoundReport> {
    let s = systematic_profile(g).s;
    let dd = dual_min_distance(g)?;
    let slope = q(dd.saturating_sub(1).max(2));
    let terms = s
        .iter()
        .map(|&si| {
            Some(if si == 0 {
                Term::new(Rational::zero(), q(2))
            } else {
                Term::new(q(si), slope.clone())
            })
        })
        .collect();
    Ok(piecewise(
        "hybrid",
        "hybrid",
        terms,
        Rational::zero(),
        g.n(),
        serde_json::json!({ "s": s, "d_dual": dd }),
    ))
}

/// μ_i (average size of the non-singleton minimal sets) and J (objects whose
/// non-singleton minimal sets all have one size).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformSizeParams {
    #[serde(with = "opt_q")]
    pub mu: Vec<Option<Rational>>,
    /// 0-based object indices.
    pub j: Vec<usize>,
    pub s: Vec<usize>,
    pub d_dual: usize,
}

mod opt_q {
    use crate::rational::{fmt, parse, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Option<Rational>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.as_ref().map(fmt)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Option<Rational>>, D::Error> {
        Vec::<Option<String>>::deserialize(d)?
            .into_iter()
            .map(|x| x.map(|t| parse(&t).map_err(D::Error::custom)).transpose())
            .collect()
    }
}

/// μ_i for one object; `DivisionByZero` when every minimal set is a singleton.
pub fn uniform_size_mu(sys: &RecoverySystem, s: &[usize], i: usize) -> Result<Rational> {
    let sets = sys.object(i);
    let big: Vec<usize> = sets.iter().map(|r| r.len()).filter(|&l| l != 1).collect();
    if sets.len() == s[i] || big.is_empty() {
        return Err(Error::DivisionByZero(i + 1));
    }
    Ok(q(big.iter().sum()) / q(sets.len() - s[i]))
}

pub fn uniform_size_params(g: &GeneratorMatrix) -> Result<UniformSizeParams> {
    let sys = minimal_recovery_system(g)?;
    let s = systematic_profile(g).s;
    let mut mu = Vec::with_capacity(g.k());
    let mut j = Vec::new();
    for i in 0..g.k() {
        match uniform_size_mu(&sys, &s, i) {
            Ok(m) => {
                let sizes: BTreeSet<usize> = sys.object(i).iter().map(|r| r.len()).filter(|&l| l != 1).collect();
                if sizes.len() == 1 {
                    j.push(i);
                }
                mu.push(Some(m));
            }
            Err(Error::DivisionByZero(_)) => mu.push(None),
            Err(e) => return Err(e),
        }
    }
    Ok(UniformSizeParams {
        mu,
        j,
        s,
        d_dual: dual_min_distance(g)?,
    })
}

/// The uniform-size bound. Objects in J pay μ_i per unit of demand beyond
/// their systematic nodes; objects whose minimal sets are all systematic
/// singletons pay λ_i (at most s_i inside the region), not a flat s_i.
pub fn uniform_size_bound(g: &GeneratorMatrix) -> Result<BoundReport> {
    let p = uniform_size_params(g)?;
    let wide = q(p.d_dual.saturating_sub(1).max(2));
    let mut terms = Vec::with_capacity(g.k());
    for i in 0..g.k() {
        let si = p.s[i];
        let in_j = p.j.contains(&i);
        let term = match &p.mu[i] {
            None => Some(Term::new(q(si), Rational::one())),
            Some(mu) if in_j => Some(Term::new(q(si), mu.clone())),
            Some(_) if si == 0 => Some(Term::new(Rational::zero(), q(2))),
            Some(_) => Some(Term::new(q(si), wide.clone())),
        };
        terms.push(term);
    }
    Ok(piecewise(
        "uniform",
        "uniform-size",
        terms,
        Rational::zero(),
        g.n(),
        serde_json::to_value(&p).expect("serializable"),
    ))
}

/// The same five-term expression taken literally: the last summand is
/// `μ_i λ_i - (1 - μ_i) min(s_i, λ_i)` and singleton-only objects add the
/// constant s_i. Returns the left-hand side only.
pub fn uniform_size_literal_lhs(g: &GeneratorMatrix, lam: &DemandVector) -> Result<Rational> {
    let p = uniform_size_params(g)?;
    let x = lam.values();
    let wide = q(p.d_dual.saturating_sub(1).max(2));
    let mut lhs = Rational::zero();
    for i in 0..g.k() {
        let si = q(p.s[i]);
        let in_j = p.j.contains(&i);
        lhs += match &p.mu[i] {
            None => si,
            Some(mu) if in_j && p.s[i] == 0 => mu * &x[i],
            Some(mu) if in_j => mu * &x[i] - (Rational::one() - mu) * rational::min(&si, &x[i]),
            Some(_) if p.s[i] == 0 => q(2) * &x[i],
            Some(_) => Term::new(si, wide.clone()).eval(&x[i]),
        };
    }
    Ok(lhs)
}

/// `sum_{i in I} λ_i <= |S \ H|` minimized over hyperplanes H avoiding every e_i, i in I.
/// `objects` are 0-based; an empty set gives the trivial bound n.
pub fn hyperplane_bound(g: &GeneratorMatrix, objects: &[usize]) -> Result<BoundReport> {
    if let Some(&bad) = objects.iter().find(|&&i| i >= g.k()) {
        return Err(Error::IndexOutOfRange(format!("object {} outside 1..{}", bad + 1, g.k())));
    }
    let mut a = vec![Rational::zero(); g.k()];
    for &i in objects {
        a[i] = Rational::one();
    }
    let label: Vec<usize> = objects.iter().map(|i| i + 1).collect();
    let name = format!(
        "hyperplane[{}]",
        label.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    );
    let report = |rhs: usize, normal: Option<Vec<Elem>>| BoundReport {
        name: name.clone(),
        family: "projective-hyperplane".into(),
        kind: BoundKind::LinearHalfSpace,
        shape: Shape::HalfSpace {
            a: a.clone(),
            rhs: q(rhs),
        },
        metadata: serde_json::json!({ "objects": label, "normal": normal }),
    };
    if objects.is_empty() {
        return Ok(report(g.n(), None));
    }
    let f = g.field();
    let cols: Vec<Vec<Elem>> = (0..g.n()).map(|c| g.column(c)).collect();
    let mut best: Option<(usize, Vec<Elem>)> = None;
    for h in projective_points(f, g.k())? {
        if objects.iter().any(|&i| h[i] == 0) {
            continue;
        }
        let outside = cols
            .iter()
            .filter(|c| c.iter().zip(&h).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y))) != 0)
            .count();
        if best.as_ref().map_or(true, |(b, _)| outside < *b) {
            best = Some((outside, h));
        }
    }
    let (rhs, normal) = best.expect("the all-ones normal avoids every e_i");
    Ok(report(rhs, Some(normal)))
}

/// Minimum distance read off the hyperplanes, for convenience in reports.
pub fn hyperplane_distance(g: &GeneratorMatrix) -> Result<usize> {
    Ok(g.n() - pg_hyperplane_stats(g)?.max_count)
}

/// Greedy bound on `c x` over the allocation polytope: the relaxed knapsack
/// with weights |R| and capacity n.
pub fn clipped_sum_bound(sys: &RecoverySystem, c: &[Rational]) -> Result<DantzigSolution> {
    if c.len() != sys.allocation_len() {
        return Err(Error::LengthMismatch {
            expected: sys.allocation_len(),
            got: c.len(),
        });
    }
    let y: Vec<Rational> = sys.sizes().into_iter().map(q).collect();
    dantzig_max(c, &y, &q(sys.n()))
}

/// `b·λ <= rhs` from lifting `b` to the allocation coordinates.
pub fn clip_srr_bound(sys: &RecoverySystem, b: &[Rational]) -> Result<BoundReport> {
    if b.len() != sys.k() {
        return Err(Error::LengthMismatch {
            expected: sys.k(),
            got: b.len(),
        });
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::NegativeObjective);
    }
    let c: Vec<Rational> = sys.index().iter().map(|(i, _)| b[*i].clone()).collect();
    let sol = clipped_sum_bound(sys, &c)?;
    Ok(BoundReport {
        name: format!("clip[{}]", b.iter().map(rational::fmt).collect::<Vec<_>>().join(",")),
        family: "clipped-sum".into(),
        kind: BoundKind::LinearHalfSpace,
        shape: Shape::HalfSpace {
            a: b.to_vec(),
            rhs: sol.value.clone(),
        },
        metadata: serde_json::json!({
            "b": b.iter().map(rational::fmt).collect::<Vec<_>>(),
            "order": sol.order.iter().map(|j| j + 1).collect::<Vec<_>>(),
            "r": sol.r,
            "sigma": rational::fmt(&sol.sigma),
        }),
    })
}

/// Every `b in {0,1}^k \ {0}`, in binary counting order.
pub fn clip_zero_one(sys: &RecoverySystem) -> Result<Vec<BoundReport>> {
    let k = sys.k();
    (1u64..1 << k)
        .map(|mask| {
            let b: Vec<Rational> = (0..k).map(|i| q((mask >> i & 1) as usize)).collect();
            clip_srr_bound(sys, &b)
        })
        .collect()
}

/// Upper bound on the hypercube parameter: `min(λ/k, δ)`.
pub fn hcube_cap(params: &RegionParams) -> Rational {
    let k = q(params.axis_maxima.len());
    rational::min(&(&params.max_sum / k), &params.delta)
}

/// Upper bound on λ²: `((k-1)/k) λ* λ + λ²/k`.
pub fn bhatia_davis_cap(params: &RegionParams, k: usize) -> Rational {
    let kq = q(k);
    (&kq - Rational::one()) / &kq * &params.lambda_star * &params.max_sum
        + &params.max_sum * &params.max_sum / kq
}

/// Max-sum capacity cap for systematic MDS systems: `k + (n-k)/k`.
pub fn mds_maxsum_cap(k: usize, n: usize) -> Result<Rational> {
    if !(n > k && k >= 2) {
        return Err(Error::RegimeViolation(format!("need n > k >= 2, got k={k}, n={n}")));
    }
    Ok(q(k) + q(n - k) / q(k))
}

/// Names accepted by [`named_bounds`].
pub const BOUND_NAMES: [&str; 6] = ["dual", "sysnode", "hybrid", "uniform", "hyperplane", "clip"];

/// Builds the requested bound families. Hyperplane bounds are produced for
/// every singleton and the full object set; clip bounds for every 0/1 vector
/// plus the extra `b` vectors.
pub fn named_bounds(g: &GeneratorMatrix, names: &[&str], extra_b: &[Vec<Rational>]) -> Result<Vec<(String, Result<BoundReport>)>> {
    let mut out = Vec::new();
    let mut sys: Option<RecoverySystem> = None;
    for &name in names {
        match name {
            "dual" => out.push((name.to_string(), dual_distance_bound(g))),
            "sysnode" => out.push((name.to_string(), systematic_node_bound(g))),
            "hybrid" => out.push((name.to_string(), hybrid_bound(g))),
            "uniform" => out.push((name.to_string(), uniform_size_bound(g))),
            "hyperplane" => {
                let mut sets: Vec<Vec<usize>> = (0..g.k()).map(|i| vec![i]).collect();
                if g.k() > 1 {
                    sets.push((0..g.k()).collect());
                }
                for s in sets {
                    let r = hyperplane_bound(g, &s);
                    let label = r.as_ref().map(|b| b.name.clone()).unwrap_or_else(|_| name.to_string());
                    out.push((label, r));
                }
            }
            "clip" => {
                if sys.is_none() {
                    sys = Some(minimal_recovery_system(g)?);
                }
                let s = sys.as_ref().expect("computed");
                for r in clip_zero_one(s)? {
                    out.push((r.name.clone(), Ok(r)));
                }
                for b in extra_b {
                    let r = clip_srr_bound(s, b);
                    let label = r.as_ref().map(|b| b.name.clone()).unwrap_or_else(|_| "clip".into());
                    out.push((label, r));
                }
            }
            other => {
                return Err(Error::Validation(format!(
                    "unknown bound {other:?}; valid names: {}",
                    BOUND_NAMES.join(", ")
                )))
            }
        }
    }
    Ok(out)
}

/// Intersection of several bounds, with `λ >= 0`.
pub fn intersect(k: usize, reports: &[&BoundReport]) -> Result<HPolytope> {
    let mut p = HPolytope::new(k, Vec::new(), Vec::new())?;
    for r in reports {
        let h = r.polytope()?;
        for (row, rhs) in h.a().iter().zip(h.b()) {
            p.push(row.clone(), rhs.clone());
        }
    }
    Ok(p.canonical())
}
