//! Exact volume by recursive fan triangulation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dd::{enumerate_vertices, hull_facets, rank};
use super::VPolytope;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeResult {
    #[serde(with = "rational::serde_q")]
    pub volume: Rational,
    /// The points do not span the ambient space; the volume is 0.
    pub degenerate: bool,
    pub simplices: usize,
}

fn affine_dim(points: &[Vec<Rational>], ids: &[usize]) -> usize {
    let Some((&first, rest)) = ids.split_first() else {
        return 0;
    };
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|&i| points[i].iter().zip(&points[first]).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut acc = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        let piv = m[c][c].clone();
        acc *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[r][j] -= t;
            }
        }
    }
    acc
}

struct Triangulator<'a> {
    points: &'a [Vec<Rational>],
    facets: Vec<BTreeSet<usize>>,
}

impl Triangulator<'_> {
    /// Simplices (as point ids) triangulating the face spanned by `face`,
    /// whose affine dimension is `j`.
    fn run(&self, face: &BTreeSet<usize>, j: usize) -> Vec<Vec<usize>> {
        let apex = *face.iter().next().expect("nonempty face");
        if j == 0 {
            return vec![vec![apex]];
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for f in &self.facets {
            let sub: BTreeSet<usize> = face.intersection(f).copied().collect();
            if sub.contains(&apex) || sub.len() < j {
                continue;
            }
            let ids: Vec<usize> = sub.iter().copied().collect();
            if seen.contains(&ids) || affine_dim(self.points, &ids) != j - 1 {
                continue;
            }
            seen.insert(ids);
            for mut s in self.run(&sub, j - 1) {
                s.push(apex);
                out.push(s);
            }
        }
        out
    }
}

/// Volume of the convex hull of the given points in their ambient dimension.
pub fn volume(p: &VPolytope) -> Result<VolumeResult> {
    let d = p.dim();
    if p.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    if d == 0 {
        return Ok(VolumeResult {
            volume: Rational::one(),
            degenerate: false,
            simplices: 1,
        });
    }
    let h = match hull_facets(p.vertices(), d) {
        Ok(h) => h,
        Err(Error::Degenerate { .. }) => {
            return Ok(VolumeResult {
                volume: Rational::zero(),
                degenerate: true,
                simplices: 0,
            })
        }
        Err(e) => return Err(e),
    };
    let verts = enumerate_vertices(&h)?;
    let points = verts.vertices();
    let facets: Vec<BTreeSet<usize>> = (0..h.len())
        .map(|r| {
            (0..points.len())
                .filter(|&i| rational::dot(&h.a()[r], &points[i]) == h.b()[r])
                .collect()
        })
        .collect();
    let t = Triangulator { points, facets };
    let all: BTreeSet<usize> = (0..points.len()).collect();
    let simplices = t.run(&all, d);
    let factorial: BigInt = (1..=d).map(BigInt::from).product();
    let mut total = Rational::zero();
    for s in &simplices {
        let base = &points[s[0]];
        let m: Vec<Vec<Rational>> = s[1..]
            .iter()
            .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        total += det(m).abs();
    }
    Ok(VolumeResult {
        volume: total / Rational::from_integer(factorial),
        degenerate: false,
        simplices: simplices.len(),
    })
}

/// Area of a simple polygon given in cyclic order (shoelace formula).
pub fn shoelace(polygon: &[Vec<Rational>]) -> Rational {
    let n = polygon.len();
    let mut twice = Rational::zero();
    for i in 0..n {
        let (a, b) = (&polygon[i], &polygon[(i + 1) % n]);
        twice += &a[0] * &b[1] - &b[0] * &a[1];
    }
    twice.abs() / rational::int(2)
}
