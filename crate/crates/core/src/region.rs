//! The service rate region: allocations, membership, integer allocations,
//! region geometry, shape parameters and closed forms for MDS systems.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::code::{is_mds, rs_matrix, systematic_profile};
use crate::generator::GeneratorMatrix;
use crate::error::{Error, Result};
use crate::guard;
use crate::polyhedra::{
    enumerate_vertices, fm_project, hull_facets, solve_standard, HPolytope, LPStatus, Projection,
    StandardLp, VPolytope,
};
use crate::rational::{self, Rational};
use crate::recovery::{RecoverySet, RecoverySystem};

/// A demand vector: one nonnegative rate per object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DemandVector(#[serde(with = "rational::serde_q::vec")] Vec<Rational>);

impl DemandVector {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::Validation(format!(
                "demands must be nonnegative, got {}",
                rational::fmt(v)
            )));
        }
        Ok(Self(values))
    }

    pub fn zeros(k: usize) -> Self {
        Self(vec![Rational::zero(); k])
    }

    /// Parses `"a/b,c,d.e"`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(rational::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The coordinates of the allocation polytope: (object, recovery set) pairs
/// in the order of the recovery system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllocationIndex {
    k: usize,
    n: usize,
    entries: Vec<(usize, RecoverySet)>,
}

impl AllocationIndex {
    pub fn new(sys: &RecoverySystem) -> Self {
        Self {
            k: sys.k(),
            n: sys.n(),
            entries: sys.index().into_iter().map(|(i, s)| (i, s.clone())).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, RecoverySet)] {
        &self.entries
    }

    pub fn object(&self, j: usize) -> usize {
        self.entries[j].0
    }

    pub fn set(&self, j: usize) -> &RecoverySet {
        &self.entries[j].1
    }

    /// The summation map f as a k x m 0/1 matrix.
    pub fn summation_map(&self) -> Vec<Vec<Rational>> {
        (0..self.k)
            .map(|i| {
                self.entries
                    .iter()
                    .map(|(o, _)| if *o == i { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect()
    }

    /// Server-incidence rows: entry (v, j) is 1 when server v is in set j.
    fn incidence(&self) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|v| {
                self.entries
                    .iter()
                    .map(|(_, s)| if s.contains(v) { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect()
    }

    fn rates<T: Clone + Zero + for<'a> std::ops::AddAssign<&'a T>>(&self, values: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.k];
        for (j, (i, _)) in self.entries.iter().enumerate() {
            out[*i] += &values[j];
        }
        out
    }

    fn loads<T: Clone + Zero + for<'a> std::ops::AddAssign<&'a T>>(&self, values: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.n];
        for (j, (_, s)) in self.entries.iter().enumerate() {
            for &v in s.servers() {
                out[v] += &values[j];
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    object: usize,
    set: Vec<usize>,
    value: String,
}

/// A feasible split of the demand over recovery sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalAllocation {
    pub index: AllocationIndex,
    pub values: Vec<Rational>,
    pub mu: Rational,
}

impl FractionalAllocation {
    pub fn rates(&self) -> Vec<Rational> {
        self.index.rates(&self.values)
    }

    pub fn loads(&self) -> Vec<Rational> {
        self.index.loads(&self.values)
    }

    pub fn is_feasible(&self) -> bool {
        self.values.len() == self.index.len()
            && self.values.iter().all(|v| !v.is_negative())
            && self.loads().iter().all(|l| l <= &self.mu)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<EntryJson> = self
            .index
            .entries()
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|((i, s), v)| EntryJson {
                object: i + 1,
                set: s.labels(),
                value: rational::fmt(v),
            })
            .collect();
        serde_json::json!({
            "mu": rational::fmt(&self.mu),
            "allocation": entries,
            "rates": self.rates().iter().map(rational::fmt).collect::<Vec<_>>(),
            "loads": self.loads().iter().map(rational::fmt).collect::<Vec<_>>(),
        })
    }
}

/// Integer request counts over recovery sets, served with `s` uses of each server.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerAllocation {
    pub index: AllocationIndex,
    pub counts: Vec<BigInt>,
    pub s: BigInt,
}

impl IntegerAllocation {
    /// δ_ν: number of requests served by each server.
    pub fn delta(&self) -> Vec<BigInt> {
        self.index.loads(&self.counts)
    }

    /// λ(α): integer rate per object.
    pub fn rate(&self) -> Vec<BigInt> {
        self.index.rates(&self.counts)
    }

    pub fn is_feasible(&self) -> bool {
        self.counts.iter().all(|c| !c.is_negative()) && self.delta().iter().all(|d| d <= &self.s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .index
            .entries()
            .iter()
            .zip(&self.counts)
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, s), c)| serde_json::json!({"object": i + 1, "set": s.labels(), "count": c.to_string()}))
            .collect();
        serde_json::json!({
            "s": self.s.to_string(),
            "alpha": entries,
            "delta": self.delta().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "rate": self.rate().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Capacity rows (one per server) and sign rows (one per coordinate).
pub fn allocation_polytope(sys: &RecoverySystem, mu: &Rational) -> HPolytope {
    let index = AllocationIndex::new(sys);
    let m = index.len();
    let mut a = index.incidence();
    let mut b = vec![mu.clone(); sys.n()];
    for j in 0..m {
        let mut row = vec![Rational::zero(); m];
        row[j] = -Rational::one();
        a.push(row);
        b.push(Rational::zero());
    }
    HPolytope::new(m, a, b).expect("consistent dimensions")
}

fn check_mu(mu: &Rational) -> Result<()> {
    if !mu.is_positive() {
        return Err(Error::Validation(format!(
            "capacity must be positive, got {}",
            rational::fmt(mu)
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside(FractionalAllocation),
    Outside,
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }
}

/// Decides λ ∈ Λ(R, μ) by a feasibility LP; inside points come with an exact certificate.
pub fn srr_membership(sys: &RecoverySystem, mu: &Rational, lam: &DemandVector) -> Result<Membership> {
    check_mu(mu)?;
    if lam.len() != sys.k() {
        return Err(Error::LengthMismatch {
            expected: sys.k(),
            got: lam.len(),
        });
    }
    let index = AllocationIndex::new(sys);
    let lp = StandardLp {
        c: vec![Rational::zero(); index.len()],
        a_ub: index.incidence(),
        b_ub: vec![mu.clone(); sys.n()],
        a_eq: index.summation_map(),
        b_eq: lam.values().to_vec(),
    };
    let out = solve_standard(&lp);
    Ok(match out.point {
        Some(values) if out.status == LPStatus::Optimal => Membership::Inside(FractionalAllocation {
            index,
            values,
            mu: mu.clone(),
        }),
        _ => Membership::Outside,
    })
}

/// Scales a feasible allocation to integers: with `s` the lcm of the
/// denominators of `λ_{i,R}/μ`, `α = s λ/μ` serves `s λ/μ` using at most `s`
/// requests per server.
pub fn to_integer_allocation(a: &FractionalAllocation) -> Result<(BigInt, IntegerAllocation)> {
    check_mu(&a.mu)?;
    if !a.is_feasible() {
        return Err(Error::Validation("allocation is not feasible".into()));
    }
    let normalized: Vec<Rational> = a.values.iter().map(|v| v / &a.mu).collect();
    let s = rational::denominator_lcm(&normalized);
    let sq = Rational::from_integer(s.clone());
    let counts = normalized.iter().map(|v| (v * &sq).to_integer()).collect();
    let alloc = IntegerAllocation {
        index: a.index.clone(),
        counts,
        s: s.clone(),
    };
    debug_assert!(alloc.is_feasible());
    Ok((s, alloc))
}

/// `s Λ₁(R, s)`: every integer rate vector achievable with at most `s`
/// requests per server, sorted.
pub fn one_shot_region(sys: &RecoverySystem, s: u32) -> Result<Vec<Vec<u64>>> {
    if s == 0 {
        return Err(Error::Validation("s must be positive".into()));
    }
    let index = AllocationIndex::new(sys);
    let m = index.len();
    let masks: Vec<Vec<usize>> = (0..m).map(|j| index.set(j).servers().to_vec()).collect();
    let limit = guard::limit(guard::ONE_SHOT_NODES);
    let mut out: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut seen: HashSet<(usize, Vec<u32>, Vec<u64>)> = HashSet::new();
    let mut stack: Vec<(usize, Vec<u32>, Vec<u64>)> = vec![(0, vec![s; sys.n()], vec![0; sys.k()])];
    let mut nodes: u128 = 0;
    while let Some((j, caps, rate)) = stack.pop() {
        nodes += 1;
        if nodes > limit {
            return Err(Error::TooLarge {
                module: "srr_core",
                what: "one-shot search nodes",
                size: nodes,
                limit,
            });
        }
        if j == m {
            out.insert(rate);
            continue;
        }
        // Largest count coordinate j can take with the remaining capacity.
        let most = masks[j].iter().map(|&v| caps[v]).min().unwrap_or(0);
        for c in 0..=most {
            let mut caps2 = caps.clone();
            for &v in &masks[j] {
                caps2[v] -= c;
            }
            let mut rate2 = rate.clone();
            rate2[index.object(j)] += u64::from(c);
            let key = (j + 1, caps2, rate2);
            if seen.insert(key.clone()) {
                stack.push(key);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Matched H- and V-representations of a region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub h: HPolytope,
    pub v: VPolytope,
}

/// `max w·f(x)` over `A(R, μ)`, with a maximizing rate vector.
pub fn max_linear(sys: &RecoverySystem, mu: &Rational, w: &[Rational]) -> (Rational, Vec<Rational>) {
    let index = AllocationIndex::new(sys);
    let lp = StandardLp {
        c: (0..index.len()).map(|j| w[index.object(j)].clone()).collect(),
        a_ub: index.incidence(),
        b_ub: vec![mu.clone(); sys.n()],
        ..Default::default()
    };
    let out = solve_standard(&lp);
    let x = out.point.expect("allocation polytope is nonempty and bounded");
    (out.value.expect("optimal"), index.rates(&x))
}

fn axis_maxima(sys: &RecoverySystem, mu: &Rational) -> Vec<Rational> {
    (0..sys.k())
        .map(|i| {
            let mut w = vec![Rational::zero(); sys.k()];
            w[i] = Rational::one();
            max_linear(sys, mu, &w).0
        })
        .collect()
}

/// Λ(R, μ) by hull refinement: starting from the axis points, every facet
/// of the current hull is either confirmed by an LP over the allocation
/// polytope or the LP maximizer is added to the point set.
pub fn region_polytope(sys: &RecoverySystem, mu: &Rational) -> Result<Region> {
    check_mu(mu)?;
    let k = sys.k();
    let mut points: BTreeSet<Vec<Rational>> = BTreeSet::new();
    points.insert(vec![Rational::zero(); k]);
    for (i, top) in axis_maxima(sys, mu).into_iter().enumerate() {
        let mut e = vec![Rational::zero(); k];
        e[i] = top;
        points.insert(e);
    }
    let mut confirmed: BTreeSet<(Vec<Rational>, Rational)> = BTreeSet::new();
    loop {
        let pts: Vec<Vec<Rational>> = points.iter().cloned().collect();
        let hull = hull_facets(&pts, k)?;
        let mut grew = false;
        for (row, rhs) in hull.a().iter().zip(hull.b()) {
            let key = (row.clone(), rhs.clone());
            if confirmed.contains(&key) {
                continue;
            }
            let (best, at) = max_linear(sys, mu, row);
            if &best > rhs {
                grew |= points.insert(at);
            } else {
                confirmed.insert(key);
            }
        }
        if !grew {
            let v = enumerate_vertices(&hull)?;
            return Ok(Region { h: hull, v });
        }
    }
}

/// Λ(R, μ) by Fourier–Motzkin projection of the allocation polytope.
pub fn region_polytope_fm(sys: &RecoverySystem, mu: &Rational) -> Result<Region> {
    check_mu(mu)?;
    let a = allocation_polytope(sys, mu);
    let map = AllocationIndex::new(sys).summation_map();
    let h = fm_project(&a, &Projection::Map(map))?;
    let v = enumerate_vertices(&h)?;
    Ok(Region { h, v })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionParams {
    #[serde(with = "rational::serde_q")]
    pub max_sum: Rational,
    /// λ^r for each requested exponent r.
    #[serde(with = "rmap")]
    pub r_max_sums: BTreeMap<u32, Rational>,
    #[serde(with = "rational::serde_q::vec")]
    pub axis_maxima: Vec<Rational>,
    #[serde(with = "rational::serde_q")]
    pub lambda_star: Rational,
    #[serde(with = "rational::serde_q")]
    pub h: Rational,
    #[serde(with = "rational::serde_q")]
    pub delta: Rational,
    #[serde(with = "rational::serde_q::option")]
    pub volume: Option<Rational>,
}

mod rmap {
    use std::collections::BTreeMap;

    use crate::rational::{fmt, parse, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u32, Rational>, s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|(r, v)| (r.to_string(), fmt(v)))
            .collect::<BTreeMap<_, _>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u32, Rational>, D::Error> {
        BTreeMap::<String, String>::deserialize(d)?
            .into_iter()
            .map(|(r, v)| {
                Ok((
                    r.parse().map_err(D::Error::custom)?,
                    parse(&v).map_err(D::Error::custom)?,
                ))
            })
            .collect()
    }
}

/// Largest t with (t, ..., t) ∈ Λ(R, μ): one LP with tied block sums.
pub fn hypercube(sys: &RecoverySystem, mu: &Rational) -> Rational {
    let index = AllocationIndex::new(sys);
    let m = index.len();
    let mut c = vec![Rational::zero(); m + 1];
    c[m] = Rational::one();
    let a_ub = index
        .incidence()
        .into_iter()
        .map(|mut r| {
            r.push(Rational::zero());
            r
        })
        .collect();
    let a_eq = index
        .summation_map()
        .into_iter()
        .map(|mut r| {
            r.push(-Rational::one());
            r
        })
        .collect();
    let lp = StandardLp {
        c,
        a_ub,
        b_ub: vec![mu.clone(); sys.n()],
        a_eq,
        b_eq: vec![Rational::zero(); sys.k()],
    };
    solve_standard(&lp).value.expect("t = 0 is feasible and t is bounded")
}

/// Shape parameters of Λ(R, 1). Exponents `r >= 2` need the vertex list.
pub fn region_params(sys: &RecoverySystem, rs: &[u32]) -> Result<RegionParams> {
    let mu = Rational::one();
    let (max_sum, _) = max_linear(sys, &mu, &vec![Rational::one(); sys.k()]);
    let axis = axis_maxima(sys, &mu);
    let lambda_star = axis.iter().max().expect("k >= 1").clone();
    let delta = axis.iter().min().expect("k >= 1").clone();
    let h = hypercube(sys, &mu);
    let mut r_max_sums = BTreeMap::new();
    let mut region: Option<Region> = None;
    for &r in rs {
        if r == 0 {
            return Err(Error::Validation("exponent r must be at least 1".into()));
        }
        if r == 1 {
            r_max_sums.insert(1, max_sum.clone());
            continue;
        }
        if region.is_none() {
            region = Some(region_polytope(sys, &mu)?);
        }
        let v = &region.as_ref().expect("computed").v;
        let best = v
            .vertices()
            .iter()
            .map(|p| p.iter().map(|x| num_traits::pow(x.clone(), r as usize)).sum::<Rational>())
            .max()
            .expect("nonempty region");
        r_max_sums.insert(r, best);
    }
    Ok(RegionParams {
        max_sum,
        r_max_sums,
        axis_maxima: axis,
        lambda_star,
        h,
        delta,
        volume: None,
    })
}

/// Closed-form membership for systematic MDS systems with n >= 2k.
pub fn mds_region_membership(k: usize, n: usize, lam: &DemandVector) -> Result<bool> {
    if n < 2 * k {
        return Err(Error::RegimeViolation(format!("need n >= 2k, got k={k}, n={n}")));
    }
    if lam.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: lam.len(),
        });
    }
    let one = Rational::one();
    let kq = Rational::from_integer(BigInt::from(k));
    let below = lam.values().iter().filter(|x| *x < &one).count();
    let lhs: Rational = lam
        .values()
        .iter()
        .map(|x| if x < &one { x.clone() } else { &kq * x })
        .sum();
    let rhs = Rational::from_integer(BigInt::from(n + (k - 1) * (k - below)));
    Ok(lhs <= rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum VolumeKind {
    Mds2 { n: usize },
    Mds3 { n: usize },
    Replication { s: Vec<usize> },
}

pub fn closed_form_volume(kind: &VolumeKind) -> Result<Rational> {
    let q = |v: i64| Rational::from_integer(BigInt::from(v));
    match kind {
        VolumeKind::Mds2 { n } => {
            if *n < 4 {
                return Err(Error::RegimeViolation(format!("mds2 needs n >= 4, got {n}")));
            }
            let n = *n as i64;
            Ok(q(n * n + 4 * n) / q(8))
        }
        VolumeKind::Mds3 { n } => {
            if *n < 6 {
                return Err(Error::RegimeViolation(format!("mds3 needs n >= 6, got {n}")));
            }
            let n = *n as i64;
            Ok(q(n * n * n + 18 * n * n + 54 * n - 18) / q(162))
        }
        VolumeKind::Replication { s } => {
            if s.is_empty() || s.contains(&0) {
                return Err(Error::RegimeViolation(
                    "replication needs every object on at least one server".into(),
                ));
            }
            Ok(s.iter().fold(Rational::one(), |acc, &v| acc * q(v as i64)))
        }
    }
}

/// The closed form that applies to `g`, if any: systematic MDS with k in
/// {2, 3} and n >= 2k, or replication.
pub fn detect_volume_kind(g: &GeneratorMatrix) -> Result<Option<VolumeKind>> {
    let sp = systematic_profile(g);
    if sp.is_replication {
        return Ok(Some(VolumeKind::Replication { s: sp.s }));
    }
    let (k, n) = (g.k(), g.n());
    if !sp.is_systematic || n < 2 * k || !is_mds(g)? {
        return Ok(None);
    }
    Ok(match k {
        2 => Some(VolumeKind::Mds2 { n }),
        3 => Some(VolumeKind::Mds3 { n }),
        _ => None,
    })
}

/// Spreads each λ_i evenly over all a-subsets of the b servers of the
/// Reed–Solomon system, valid whenever Σλ ≤ b/a.
pub fn rs_uniform_allocation(a: usize, b: usize, q: u64, alpha: u32, lam: &DemandVector) -> Result<FractionalAllocation> {
    let g = rs_matrix(a, b, q, alpha)?;
    if lam.len() != a {
        return Err(Error::LengthMismatch {
            expected: a,
            got: lam.len(),
        });
    }
    let total: Rational = lam.values().iter().sum();
    let limit = Rational::new(BigInt::from(b), BigInt::from(a));
    if total > limit {
        return Err(Error::DemandTooLarge(rational::fmt(&total)));
    }
    let mut subsets = Vec::new();
    crate::code::for_each_subset(b, a, |s| {
        subsets.push(RecoverySet::new(s.to_vec()).expect("nonempty"));
        true
    });
    let sys = RecoverySystem::validated(&g, vec![subsets.clone(); a])?;
    let count = Rational::from_integer(BigInt::from(subsets.len()));
    let index = AllocationIndex::new(&sys);
    let values = (0..index.len())
        .map(|j| &lam.values()[index.object(j)] / &count)
        .collect();
    Ok(FractionalAllocation {
        index,
        values,
        mu: Rational::one(),
    })
}

/// Converts a small nonnegative integer rational to `u64`.
pub fn to_u64(v: &Rational) -> Option<u64> {
    v.is_integer().then(|| v.to_integer().to_u64()).flatten()
}
