//! Recovery sets and G-systems.
//!
//! A set of servers recovers object `i` when `e_i` lies in the span of the
//! corresponding columns. Only the inclusion-minimal sets are ever
//! materialised; every superset of a minimal set is again a recovery set,
//! and the region does not change when the non-minimal sets are dropped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::in_span;
use crate::generator::GeneratorMatrix;
use crate::guard;

const MAX_SERVERS: usize = 20;

/// Server indices, 0-based, strictly increasing, nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecoverySet(Vec<usize>);

impl RecoverySet {
    pub fn new(mut servers: Vec<usize>) -> Result<Self> {
        servers.sort_unstable();
        servers.dedup();
        if servers.is_empty() {
            return Err(Error::Validation("recovery sets must be nonempty".into()));
        }
        Ok(Self(servers))
    }

    /// From 1-based server labels.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::IndexOutOfRange("server labels start at 1".into()));
        }
        Self::new(labels.iter().map(|l| l - 1).collect())
    }

    fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|b| mask >> b & 1 == 1).collect())
    }

    pub fn servers(&self) -> &[usize] {
        &self.0
    }

    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|v| v + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, server: usize) -> bool {
        self.0.binary_search(&server).is_ok()
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn is_subset_of(&self, other: &RecoverySet) -> bool {
        self.mask() & !other.mask() == 0
    }

    /// Canonical order: cardinality first, then lexicographic.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    MinimalOfG,
    UserSupplied,
}

/// One nonempty collection of recovery sets per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoverySystem {
    n: usize,
    sets: Vec<Vec<RecoverySet>>,
    origin: Origin,
}

impl RecoverySystem {
    /// A user-supplied system over `n` servers. Sets are put in canonical
    /// order and deduplicated; every object needs at least one set.
    pub fn new(n: usize, sets: Vec<Vec<RecoverySet>>) -> Result<Self> {
        Self::build(n, sets, Origin::UserSupplied)
    }

    fn build(n: usize, mut sets: Vec<Vec<RecoverySet>>, origin: Origin) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Validation("a recovery system needs at least one object".into()));
        }
        for (i, r) in sets.iter_mut().enumerate() {
            if r.is_empty() {
                return Err(Error::Validation(format!(
                    "object {} has no recovery sets",
                    i + 1
                )));
            }
            if let Some(bad) = r.iter().flat_map(|s| s.servers()).find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange(format!(
                    "server {} outside 1..{n}",
                    bad + 1
                )));
            }
            r.sort_by(RecoverySet::canonical_cmp);
            r.dedup();
        }
        Ok(Self { n, sets, origin })
    }

    /// A user-supplied system checked against `g`: every set must recover its object.
    pub fn validated(g: &GeneratorMatrix, sets: Vec<Vec<RecoverySet>>) -> Result<Self> {
        if sets.len() != g.k() {
            return Err(Error::LengthMismatch {
                expected: g.k(),
                got: sets.len(),
            });
        }
        let sys = Self::new(g.n(), sets)?;
        for (i, r) in sys.sets.iter().enumerate() {
            for s in r {
                if !is_recovery_set(g, i, s)? {
                    return Err(Error::NotARecoverySet(i + 1));
                }
            }
        }
        Ok(sys)
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn object(&self, i: usize) -> &[RecoverySet] {
        &self.sets[i]
    }

    pub fn objects(&self) -> &[Vec<RecoverySet>] {
        &self.sets
    }

    /// m(R): total number of (object, set) pairs.
    pub fn allocation_len(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// The (object, set) pairs in allocation order.
    pub fn index(&self) -> Vec<(usize, &RecoverySet)> {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |s| (i, s)))
            .collect()
    }

    /// Start offset of each object's block in allocation order.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.k() + 1);
        let mut acc = 0;
        out.push(0);
        for r in &self.sets {
            acc += r.len();
            out.push(acc);
        }
        out
    }

    /// Recovery-set sizes in allocation order.
    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().flatten().map(RecoverySet::len).collect()
    }

    /// Keeps only the sets selected by `keep(object, set)`.
    pub fn subsystem(&self, mut keep: impl FnMut(usize, &RecoverySet) -> bool) -> Result<Self> {
        let sets = self
            .sets
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().filter(|s| keep(i, s)).cloned().collect())
            .collect();
        Self::new(self.n, sets)
    }

    pub fn to_json(&self) -> Vec<RecoveryListJson> {
        self.sets
            .iter()
            .enumerate()
            .map(|(i, r)| RecoveryListJson {
                object: i + 1,
                sets: r.iter().map(RecoverySet::labels).collect(),
            })
            .collect()
    }

    pub fn from_json(n: usize, lists: &[RecoveryListJson]) -> Result<Self> {
        let k = lists.iter().map(|l| l.object).max().unwrap_or(0);
        let mut sets = vec![Vec::new(); k];
        for l in lists {
            if l.object == 0 {
                return Err(Error::IndexOutOfRange("objects are numbered from 1".into()));
            }
            for s in &l.sets {
                sets[l.object - 1].push(RecoverySet::from_labels(s)?);
            }
        }
        Self::new(n, sets)
    }
}

/// Serialized form of one object's recovery sets (1-based labels).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryListJson {
    pub object: usize,
    pub sets: Vec<Vec<usize>>,
}

fn unit(k: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; k];
    e[i] = 1;
    e
}

fn check_object(g: &GeneratorMatrix, i: usize) -> Result<()> {
    if i >= g.k() {
        return Err(Error::IndexOutOfRange(format!(
            "object {} outside 1..{}",
            i + 1,
            g.k()
        )));
    }
    Ok(())
}

/// Whether the servers in `set` recover object `i` (0-based).
pub fn is_recovery_set(g: &GeneratorMatrix, i: usize, set: &RecoverySet) -> Result<bool> {
    check_object(g, i)?;
    if let Some(&v) = set.servers().iter().find(|&&v| v >= g.n()) {
        return Err(Error::IndexOutOfRange(format!(
            "server {} outside 1..{}",
            v + 1,
            g.n()
        )));
    }
    let cols: Vec<Vec<u32>> = set.servers().iter().map(|&v| g.column(v)).collect();
    Ok(in_span(g.field(), &cols, &unit(g.k(), i))?.is_some())
}

/// Whether `set` is an i-minimal recovery set.
pub fn is_minimal(g: &GeneratorMatrix, i: usize, set: &RecoverySet) -> Result<bool> {
    if !is_recovery_set(g, i, set)? {
        return Err(Error::NotARecoverySet(i + 1));
    }
    // Span membership is monotone, so checking the maximal proper subsets suffices.
    for skip in 0..set.len() {
        let rest: Vec<usize> = set
            .servers()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != skip)
            .map(|(_, &v)| v)
            .collect();
        if rest.is_empty() {
            continue;
        }
        if is_recovery_set(g, i, &RecoverySet(rest))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_servers(n: usize) -> Result<()> {
    if n > MAX_SERVERS {
        return Err(Error::TooLarge {
            module: "recovery",
            what: "servers",
            size: n as u128,
            limit: MAX_SERVERS as u128,
        });
    }
    guard::check("recovery", "subsets", 1u128 << n, guard::SUBSETS)
}

/// Subsets of `0..n` as bit masks, by cardinality and then lexicographically.
fn subsets_canonical(n: usize) -> Vec<u64> {
    let mut all: Vec<u64> = (1..(1u64 << n)).collect();
    all.sort_by_cached_key(|&m| (m.count_ones(), (0..n).filter(|b| m >> b & 1 == 1).collect::<Vec<_>>()));
    all
}

/// R^min(G): for each object, the inclusion-minimal recovery sets in
/// canonical order.
pub fn minimal_recovery_system(g: &GeneratorMatrix) -> Result<RecoverySystem> {
    let n = g.n();
    check_servers(n)?;
    let order = subsets_canonical(n);
    let mut sets = Vec::with_capacity(g.k());
    for i in 0..g.k() {
        let mut kept: Vec<u64> = Vec::new();
        for &mask in &order {
            if kept.iter().any(|&k| k & !mask == 0) {
                continue;
            }
            let rs = RecoverySet::from_mask(mask);
            if is_recovery_set(g, i, &rs)? {
                kept.push(mask);
            }
        }
        sets.push(kept.into_iter().map(RecoverySet::from_mask).collect());
    }
    RecoverySystem::build(n, sets, Origin::MinimalOfG)
}

/// |R_i^all(G)|: the size of the upward closure of the minimal sets,
/// by inclusion-exclusion over the minimal sets.
pub fn all_recovery_supersets_count(g: &GeneratorMatrix, i: usize) -> Result<u64> {
    check_object(g, i)?;
    check_servers(g.n())?;
    let sys = minimal_recovery_system(g)?;
    Ok(upward_closure_size(g.n(), sys.object(i)))
}

/// Number of subsets of `0..n` containing at least one of `minimal`.
pub fn upward_closure_size(n: usize, minimal: &[RecoverySet]) -> u64 {
    // Inclusion-exclusion over families of minimal sets, pruned by unions:
    // accumulate signed counts per union mask.
    use std::collections::BTreeMap;
    let mut signed: BTreeMap<u64, i64> = BTreeMap::new();
    for s in minimal {
        let m = s.mask();
        let snapshot: Vec<(u64, i64)> = signed.iter().map(|(&k, &v)| (k, v)).collect();
        for (union, coeff) in snapshot {
            *signed.entry(union | m).or_insert(0) -= coeff;
        }
        *signed.entry(m).or_insert(0) += 1;
    }
    let total: i64 = signed
        .into_iter()
        .map(|(union, coeff)| coeff * (1i64 << (n - union.count_ones() as usize)))
        .sum();
    total as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sets(lists: &[&[usize]]) -> Vec<RecoverySet> {
        lists.iter().map(|l| RecoverySet::from_labels(l).unwrap()).collect()
    }

    #[test]
    fn recovery_set_membership() {
        let g2 = fixtures::sys_3x6_f3();
        let r = |l: &[usize]| RecoverySet::from_labels(l).unwrap();
        assert!(is_recovery_set(&g2, 0, &r(&[5, 6])).unwrap());
        assert!(is_recovery_set(&g2, 1, &r(&[3, 5])).unwrap());
        let g1 = fixtures::rep_2x4_f2();
        assert!(!is_recovery_set(&g1, 1, &r(&[1, 3, 4])).unwrap());
        assert!(matches!(
            is_recovery_set(&g1, 2, &r(&[1])),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            is_recovery_set(&g1, 0, &r(&[9])),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn minimality() {
        let g2 = fixtures::sys_3x6_f3();
        let r = |l: &[usize]| RecoverySet::from_labels(l).unwrap();
        assert!(is_minimal(&g2, 0, &r(&[2, 3, 4])).unwrap());
        assert!(!is_minimal(&g2, 0, &r(&[1, 2])).unwrap());
        assert!(is_minimal(&g2, 2, &r(&[2, 5])).unwrap());
        assert_eq!(
            is_minimal(&g2, 1, &r(&[1])).unwrap_err(),
            Error::NotARecoverySet(2)
        );
    }

    #[test]
    fn mds_2x4_system() {
        let sys = minimal_recovery_system(&fixtures::mds_2x4_f3()).unwrap();
        assert_eq!(sys.object(0), sets(&[&[1], &[2, 3], &[2, 4], &[3, 4]]).as_slice());
        assert_eq!(sys.object(1), sets(&[&[2], &[1, 3], &[1, 4], &[3, 4]]).as_slice());
        assert_eq!(sys.allocation_len(), 8);
        assert_eq!(sys.origin(), Origin::MinimalOfG);
    }

    #[test]
    fn antichain_and_upward_closure() {
        for g in fixtures::all() {
            let sys = minimal_recovery_system(&g).unwrap();
            for (i, r) in sys.objects().iter().enumerate() {
                for a in r {
                    for b in r {
                        assert!(a == b || !a.is_subset_of(b));
                    }
                    // Adding any server keeps it a recovery set.
                    for extra in 0..g.n() {
                        let mut s = a.servers().to_vec();
                        s.push(extra);
                        let sup = RecoverySet::new(s).unwrap();
                        assert!(is_recovery_set(&g, i, &sup).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn superset_counts() {
        let g1 = fixtures::rep_2x4_f2();
        assert_eq!(all_recovery_supersets_count(&g1, 1).unwrap(), 8);
        // Only the empty set and {2} avoid servers 1, 3 and 4.
        assert_eq!(all_recovery_supersets_count(&g1, 0).unwrap(), 14);
        // Cross-check against direct enumeration on every fixture.
        for g in fixtures::all() {
            for i in 0..g.k() {
                let direct = (1u64..1 << g.n())
                    .filter(|&m| is_recovery_set(&g, i, &RecoverySet::from_mask(m)).unwrap())
                    .count() as u64;
                assert_eq!(all_recovery_supersets_count(&g, i).unwrap(), direct);
            }
        }
    }

    #[test]
    fn user_systems_are_canonicalised_and_checked() {
        let g = fixtures::mds_2x4_f3();
        let sys = RecoverySystem::validated(
            &g,
            vec![sets(&[&[3, 4], &[1], &[1]]), sets(&[&[2]])],
        )
        .unwrap();
        assert_eq!(sys.object(0), sets(&[&[1], &[3, 4]]).as_slice());
        assert_eq!(sys.origin(), Origin::UserSupplied);
        assert_eq!(
            RecoverySystem::validated(&g, vec![sets(&[&[2]]), sets(&[&[2]])]).unwrap_err(),
            Error::NotARecoverySet(1)
        );
        assert!(RecoverySystem::new(4, vec![vec![], sets(&[&[2]])]).is_err());
        let json = sys.to_json();
        assert_eq!(RecoverySystem::from_json(4, &json).unwrap().objects(), sys.objects());
    }
}
