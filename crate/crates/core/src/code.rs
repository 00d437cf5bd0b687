//! Coding-theoretic profile of a generator matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{make_field, Elem, FFMatrix, FieldContext};
use crate::generator::GeneratorMatrix;
use crate::guard;
use crate::recovery::{minimal_recovery_system, RecoverySystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeProfile {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub d: usize,
    /// `n + 1` when the dual code is trivial (k = n).
    pub d_dual: usize,
    pub is_mds: bool,
    pub is_systematic: bool,
    pub is_replication: bool,
    pub s: Vec<usize>,
    pub availability_t: Option<usize>,
    pub max_hyperplane_points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystematicProfile {
    pub is_systematic: bool,
    pub s: Vec<usize>,
    pub is_replication: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneStats {
    /// One normal per hyperplane of PG(k-1, q) with the number of columns on it.
    pub hyperplanes: Vec<(Vec<Elem>, usize)>,
    pub max_count: usize,
}

fn pow_u128(q: u32, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(q as u128))
}

/// Minimum nonzero weight of the row space of `m`.
fn row_space_min_distance(m: &FFMatrix, module: &'static str) -> Result<usize> {
    let f = m.field();
    let q = f.order();
    guard::check(module, "codewords", pow_u128(q, m.rows()), guard::CODEWORDS)?;
    let n = m.cols();
    let mut best = usize::MAX;
    // The leading nonzero coefficient can be fixed to 1: scaling keeps the weight.
    fn walk(
        f: &FieldContext,
        m: &FFMatrix,
        row: usize,
        acc: &mut Vec<Elem>,
        leading_done: bool,
        best: &mut usize,
    ) {
        if row == m.rows() {
            if leading_done {
                let w = acc.iter().filter(|&&x| x != 0).count();
                *best = (*best).min(w);
            }
            return;
        }
        let coeffs: Vec<Elem> = if leading_done {
            (0..f.order()).collect()
        } else {
            vec![0, 1]
        };
        for c in coeffs {
            let saved = acc.clone();
            if c != 0 {
                for (j, a) in acc.iter_mut().enumerate() {
                    *a = f.add(*a, f.mul(c, m.get(row, j)));
                }
            }
            walk(f, m, row + 1, acc, leading_done || c != 0, best);
            *acc = saved;
        }
    }
    walk(f, m, 0, &mut vec![0; n], false, &mut best);
    Ok(if best == usize::MAX { n + 1 } else { best })
}

/// Minimum Hamming distance of the code generated by `g`.
pub fn min_distance(g: &GeneratorMatrix) -> Result<usize> {
    row_space_min_distance(g.matrix(), "code_analysis")
}

/// A parity-check matrix: (n-k) x n, rank n-k, with G Hᵀ = 0.
pub fn dual_matrix(g: &GeneratorMatrix) -> FFMatrix {
    let basis = g.matrix().null_space();
    if basis.is_empty() {
        return FFMatrix::zeros(g.field(), 0, g.n());
    }
    FFMatrix::from_rows(g.field(), &basis).expect("null space rows have length n")
}

/// Minimum distance of the dual code; `n + 1` when the dual is trivial.
pub fn dual_min_distance(g: &GeneratorMatrix) -> Result<usize> {
    let h = dual_matrix(g);
    if h.rows() == 0 {
        return Ok(g.n() + 1);
    }
    row_space_min_distance(&h, "code_analysis")
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Calls `visit` on every k-subset of `0..n` in lexicographic order until it returns false.
pub(crate) fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + n - k) else {
            return;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every k columns are linearly independent.
pub fn is_mds(g: &GeneratorMatrix) -> Result<bool> {
    let (k, n) = (g.k(), g.n());
    guard::check("code_analysis", "column subsets", binomial(n, k), guard::MDS_SUBSETS)?;
    let mut ok = true;
    for_each_subset(n, k, |cols| {
        ok = g.matrix().select_columns(cols).rank() == k;
        ok
    });
    Ok(ok)
}

pub fn systematic_profile(g: &GeneratorMatrix) -> SystematicProfile {
    let mut s = vec![0; g.k()];
    let mut systematic_columns = 0;
    for c in 0..g.n() {
        if let Some(i) = g.systematic_object(c) {
            s[i] += 1;
            systematic_columns += 1;
        }
    }
    SystematicProfile {
        is_systematic: g.is_systematic(),
        is_replication: systematic_columns == g.n(),
        s,
    }
}

/// Size of a largest family of pairwise disjoint sets (given as bit masks).
fn max_packing(sets: &[u64]) -> usize {
    fn go(sets: &[u64], used: u64, start: usize, depth: usize, best: &mut usize) {
        *best = (*best).max(depth);
        // Remaining disjoint candidates bound the achievable depth.
        let rest = sets[start..].iter().filter(|&&s| s & used == 0).count();
        if depth + rest <= *best {
            return;
        }
        for j in start..sets.len() {
            if sets[j] & used == 0 {
                go(sets, used | sets[j], j + 1, depth + 1, best);
            }
        }
    }
    let mut best = 0;
    go(sets, 0, 0, 0, &mut best);
    best
}

/// Largest t such that every object has t+1 pairwise disjoint recovery sets.
/// `recovery` must be the minimal system of `g`.
pub fn availability(g: &GeneratorMatrix, recovery: &RecoverySystem) -> Result<usize> {
    if !g.is_systematic() {
        return Err(Error::NotSystematic);
    }
    if recovery.k() != g.k() || recovery.n() != g.n() {
        return Err(Error::DimensionMismatch(
            "recovery system does not match the matrix".into(),
        ));
    }
    let packing = recovery
        .objects()
        .iter()
        .map(|r| max_packing(&r.iter().map(|s| s.mask()).collect::<Vec<_>>()))
        .min()
        .unwrap_or(0);
    Ok(packing.saturating_sub(1))
}

/// Points of PG(k-1, q): nonzero vectors with first nonzero coordinate 1.
pub fn projective_points(f: &FieldContext, k: usize) -> Result<Vec<Vec<Elem>>> {
    let q = f.order() as u128;
    let count = (pow_u128(f.order(), k) - 1) / (q - 1);
    guard::check("code_analysis", "projective points", count, guard::PROJECTIVE_POINTS)?;
    let mut out = Vec::with_capacity(count as usize);
    for lead in 0..k {
        let tail = k - lead - 1;
        let total = pow_u128(f.order(), tail) as u64;
        for code in 0..total {
            let mut v = vec![0; k];
            v[lead] = 1;
            let mut c = code;
            for j in (lead + 1..k).rev() {
                v[j] = (c % f.order() as u64) as Elem;
                c /= f.order() as u64;
            }
            out.push(v);
        }
    }
    Ok(out)
}

fn inner(f: &FieldContext, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Number of columns on each hyperplane `{x : h·x = 0}` of PG(k-1, q).
pub fn pg_hyperplane_stats(g: &GeneratorMatrix) -> Result<HyperplaneStats> {
    let f = g.field();
    let cols: Vec<Vec<Elem>> = (0..g.n()).map(|c| g.column(c)).collect();
    let hyperplanes: Vec<(Vec<Elem>, usize)> = projective_points(f, g.k())?
        .into_iter()
        .map(|h| {
            let count = cols.iter().filter(|c| inner(f, &h, c) == 0).count();
            (h, count)
        })
        .collect();
    let max_count = hyperplanes.iter().map(|(_, c)| *c).max().unwrap_or(0);
    Ok(HyperplaneStats {
        hyperplanes,
        max_count,
    })
}

/// The a x b Vandermonde matrix with entry (r, c) = alpha^(r c), 0-based.
pub fn rs_matrix_in(f: &FieldContext, a: usize, b: usize, alpha: Elem) -> Result<GeneratorMatrix> {
    let q = f.order();
    if b as u64 >= q as u64 {
        return Err(Error::FieldTooSmall { q, b });
    }
    if a < 2 || a >= b {
        return Err(Error::Validation(format!("need 2 <= a < b, got a={a}, b={b}")));
    }
    if alpha >= q || !f.is_primitive(alpha) {
        return Err(Error::NotPrimitive(alpha));
    }
    let rows: Vec<Vec<Elem>> = (0..a)
        .map(|r| (0..b).map(|c| f.pow(alpha, (r * c) as u64)).collect())
        .collect();
    GeneratorMatrix::from_rows(f, &rows)
}

/// `rs_matrix_in` over the prime field of order `q`.
pub fn rs_matrix(a: usize, b: usize, q: u64, alpha: Elem) -> Result<GeneratorMatrix> {
    let f = make_field(q, 1, None)?;
    rs_matrix_in(&f, a, b, alpha)
}

/// A systematic MDS matrix over the prime field F_q: the reduced echelon
/// form of the k x n Vandermonde matrix on the points 0..n-1.
pub fn systematic_mds(k: usize, n: usize, q: u64) -> Result<GeneratorMatrix> {
    let f = make_field(q, 1, None)?;
    if (n as u64) > q {
        return Err(Error::FieldTooSmall {
            q: f.order(),
            b: n,
        });
    }
    if k == 0 || k > n {
        return Err(Error::Validation(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let rows: Vec<Vec<Elem>> = (0..k)
        .map(|r| (0..n).map(|x| f.pow(x as Elem, r as u64)).collect())
        .collect();
    let (reduced, _) = FFMatrix::from_rows(&f, &rows)?.rref();
    GeneratorMatrix::new(reduced)
}

/// Full profile. Availability is only filled in for systematic matrices.
pub fn code_profile(g: &GeneratorMatrix) -> Result<CodeProfile> {
    let sp = systematic_profile(g);
    let availability_t = if sp.is_systematic {
        Some(availability(g, &minimal_recovery_system(g)?)?)
    } else {
        None
    };
    let d = min_distance(g)?;
    Ok(CodeProfile {
        n: g.n(),
        k: g.k(),
        q: g.field().order(),
        d,
        d_dual: dual_min_distance(g)?,
        is_mds: d == g.n() - g.k() + 1,
        is_systematic: sp.is_systematic,
        is_replication: sp.is_replication,
        s: sp.s,
        availability_t,
        max_hyperplane_points: pg_hyperplane_stats(g)?.max_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::recovery::RecoverySet;

    #[test]
    fn minimum_distances() {
        assert_eq!(min_distance(&fixtures::parity_3x4_f2()).unwrap(), 2);
        assert_eq!(min_distance(&fixtures::simplex_3x7_f2()).unwrap(), 4);
        assert_eq!(min_distance(&fixtures::rep_2x4_f2()).unwrap(), 1);
    }

    #[test]
    fn dual_matrices_are_orthogonal() {
        for g in fixtures::all() {
            let h = dual_matrix(&g);
            assert_eq!(h.rows(), g.n() - g.k());
            assert_eq!(h.rank(), g.n() - g.k());
            if h.rows() > 0 {
                assert!(g.matrix().mul(&h.transpose()).unwrap().is_zero());
            }
        }
        // [I | P] gives [-Pᵀ | I].
        let h = dual_matrix(&fixtures::mds_2x4_f3());
        assert_eq!(h.to_rows(), vec![vec![2, 2, 1, 0], vec![2, 1, 0, 1]]);
    }

    #[test]
    fn dual_distances() {
        assert_eq!(dual_min_distance(&fixtures::mixed_3x6_f3()).unwrap(), 2);
        assert_eq!(dual_min_distance(&fixtures::parity_3x4_f2()).unwrap(), 4);
        assert_eq!(dual_min_distance(&fixtures::rep_2x4_f2()).unwrap(), 2);
    }

    #[test]
    fn mds_flags() {
        assert!(is_mds(&fixtures::mds_2x4_f3()).unwrap());
        assert!(!is_mds(&fixtures::rep_2x4_f2()).unwrap());
        assert!(is_mds(&fixtures::parity_3x4_f2()).unwrap());
        for g in fixtures::all() {
            assert_eq!(
                is_mds(&g).unwrap(),
                min_distance(&g).unwrap() == g.n() - g.k() + 1
            );
        }
    }

    #[test]
    fn systematic_counts() {
        assert_eq!(systematic_profile(&fixtures::mixed_3x6_f3()).s, vec![0, 1, 0]);
        let p = systematic_profile(&fixtures::rep_2x4_f2());
        assert_eq!(p.s, vec![3, 1]);
        assert!(p.is_replication);
        let p = systematic_profile(&fixtures::sys_3x6_f3());
        assert_eq!(p.s, vec![1, 1, 1]);
        assert!(p.is_systematic);
        assert!(!p.is_replication);
    }

    #[test]
    fn availability_values() {
        let av = |g: &GeneratorMatrix| availability(g, &minimal_recovery_system(g).unwrap()).unwrap();
        assert_eq!(av(&fixtures::simplex_3x7_f2()), 3);
        assert_eq!(av(&fixtures::parity_3x4_f2()), 1);
        // {1}, {5,6}, {2,3,4} / {2}, {3,5}, {4,6} / {3}, {2,5}, {1,4,6}.
        assert_eq!(av(&fixtures::sys_3x6_f3()), 2);
        let g = fixtures::mixed_3x6_f3();
        assert_eq!(
            availability(&g, &minimal_recovery_system(&g).unwrap()).unwrap_err(),
            Error::NotSystematic
        );
    }

    #[test]
    fn hyperplanes_match_distance() {
        let st = pg_hyperplane_stats(&fixtures::rep_2x4_f2()).unwrap();
        assert_eq!(st.hyperplanes.len(), 3);
        assert_eq!(st.max_count, 3);
        assert!(st.hyperplanes.contains(&(vec![0, 1], 3)));
        assert_eq!(pg_hyperplane_stats(&fixtures::parity_3x4_f2()).unwrap().max_count, 2);
        assert_eq!(pg_hyperplane_stats(&fixtures::mds_2x4_f3()).unwrap().max_count, 1);
        for g in fixtures::all() {
            let st = pg_hyperplane_stats(&g).unwrap();
            assert_eq!(min_distance(&g).unwrap(), g.n() - st.max_count);
        }
    }

    #[test]
    fn reed_solomon() {
        let g = rs_matrix(2, 3, 5, 2).unwrap();
        assert_eq!(g.matrix().to_rows(), vec![vec![1, 1, 1], vec![1, 2, 4]]);
        let g = rs_matrix(2, 4, 5, 2).unwrap();
        assert!(is_mds(&g).unwrap());
        assert_eq!(rs_matrix(2, 5, 5, 2).unwrap_err(), Error::FieldTooSmall { q: 5, b: 5 });
        assert_eq!(rs_matrix(2, 4, 5, 4).unwrap_err(), Error::NotPrimitive(4));
        // Every recovery set of a Reed-Solomon system has exactly a elements.
        for (a, b, q, alpha) in [(2, 4, 5, 2), (2, 6, 7, 3), (3, 5, 7, 3), (3, 6, 11, 2), (4, 6, 7, 3)] {
            let g = rs_matrix(a, b, q, alpha).unwrap();
            let sys = minimal_recovery_system(&g).unwrap();
            // The first and last objects need exactly a columns.
            for i in [0, a - 1] {
                assert_eq!(sys.object(i).len() as u128, binomial(b, a));
                assert!(sys.object(i).iter().all(|s| s.len() == a));
            }
        }
        // Middle objects can have smaller recovery sets: over F_7 the columns
        // (1, x, x^2) and (1, -x, x^2) differ by a multiple of e_2.
        let g = rs_matrix(3, 5, 7, 3).unwrap();
        let sys = minimal_recovery_system(&g).unwrap();
        let pair = RecoverySet::new(vec![0, 3]).unwrap();
        assert!(sys.object(1).contains(&pair));
        assert_eq!(sys.object(1).len(), 6);
    }

    #[test]
    fn systematic_mds_fixtures() {
        for (k, n) in [(2, 4), (2, 8), (3, 6), (3, 9), (4, 8)] {
            let g = systematic_mds(k, n, 11).unwrap();
            assert!(g.is_systematic());
            assert!(is_mds(&g).unwrap());
            let sys = minimal_recovery_system(&g).unwrap();
            // Every k-subset of columns recovers every object.
            for i in 0..k {
                for_each_subset(n, k, |cols| {
                    let rs = RecoverySet::new(cols.to_vec()).unwrap();
                    assert!(crate::recovery::is_recovery_set(&g, i, &rs).unwrap());
                    true
                });
                assert_eq!(sys.object(i)[0].servers(), &[i]);
            }
        }
    }

    #[test]
    fn profiles_are_consistent() {
        for g in fixtures::all() {
            let p = code_profile(&g).unwrap();
            assert!(p.d >= 1 && p.d <= p.n - p.k + 1);
            assert_eq!(p.d, p.n - p.max_hyperplane_points);
            assert!(p.s.iter().sum::<usize>() <= p.n);
            if let Some(t) = p.availability_t {
                assert!(p.d > t);
            }
        }
    }

    #[test]
    fn guard_trips() {
        let f = make_field(2, 1, None).unwrap();
        let rows: Vec<Vec<Elem>> = (0..25)
            .map(|r| (0..25).map(|c| u32::from(r == c)).collect())
            .collect();
        let g = GeneratorMatrix::from_rows(&f, &rows).unwrap();
        assert!(matches!(min_distance(&g), Err(Error::TooLarge { .. })));
    }
}
