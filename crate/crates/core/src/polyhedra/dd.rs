//! Double description method for pointed polyhedral cones, used for both
//! vertex enumeration (H to V) and convex hulls (V to H).

use num_traits::{One, Signed, Zero};

use super::{HPolytope, VPolytope};
use crate::error::{Error, Result};
use crate::guard;
use crate::rational::{self, Rational};

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| b & !a == 0)
    }
}

/// Rank of a rational matrix and the indices of a maximal independent row subset,
/// chosen greedily in order.
pub(crate) fn independent_rows(rows: &[Vec<Rational>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut chosen = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (pc, b) in &basis {
            if !v[*pc].is_zero() {
                let f = &v[*pc] / &b[*pc];
                for j in 0..v.len() {
                    if !b[j].is_zero() {
                        let t = &f * &b[j];
                        v[j] -= t;
                    }
                }
            }
        }
        if let Some(pc) = (0..v.len()).find(|&j| !v[j].is_zero()) {
            basis.push((pc, v));
            chosen.push(r);
        }
    }
    chosen
}

pub(crate) fn rank(rows: &[Vec<Rational>]) -> usize {
    independent_rows(rows).len()
}

fn inverse(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("nonsingular");
        a.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= &inv;
        }
        let prow = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for j in 0..2 * n {
                    if !prow[j].is_zero() {
                        row[j] -= &f * &prow[j];
                    }
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Extreme rays of `{y : R y >= 0}`, each scaled to a primitive integer vector.
/// Fails with `Unbounded` when the cone contains a line.
pub fn cone_extreme_rays(rows: &[Vec<Rational>], dim: usize, module: &'static str) -> Result<Vec<Vec<Rational>>> {
    let basis = independent_rows(rows);
    if basis.len() < dim {
        return Err(Error::Unbounded);
    }
    let k: Vec<Vec<Rational>> = basis.iter().map(|&r| rows[r].clone()).collect();
    let inv = inverse(&k);
    let mut rays: Vec<Vec<Rational>> = (0..dim)
        .map(|j| rational::primitive(&inv.iter().map(|row| row[j].clone()).collect::<Vec<_>>()))
        .collect();
    let mut zeros: Vec<Bits> = (0..dim)
        .map(|j| {
            let mut b = Bits::new(rows.len());
            for (t, &r) in basis.iter().enumerate() {
                if t != j {
                    b.set(r);
                }
            }
            b
        })
        .collect();
    let limit = guard::limit(guard::DD_RAYS);
    let in_basis = {
        let mut flag = vec![false; rows.len()];
        basis.iter().for_each(|&r| flag[r] = true);
        flag
    };
    for (r, row) in rows.iter().enumerate() {
        if in_basis[r] {
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|y| rational::dot(row, y)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for i in 0..rays.len() {
                if vals[i].is_zero() {
                    zeros[i].set(r);
                }
            }
            continue;
        }
        let mut new_rays = Vec::new();
        let mut new_zeros = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = zeros[p].and(&zeros[n]);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|o| o == p || o == n || !zeros[o].contains(&common));
                if !adjacent {
                    continue;
                }
                let y: Vec<Rational> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(yn, yp)| &vals[p] * yn - &vals[n] * yp)
                    .collect();
                let mut z = common;
                z.set(r);
                new_rays.push(rational::primitive(&y));
                new_zeros.push(z);
            }
        }
        let mut next_rays = Vec::new();
        let mut next_zeros = Vec::new();
        for i in 0..rays.len() {
            if !vals[i].is_negative() {
                let mut z = zeros[i].clone();
                if vals[i].is_zero() {
                    z.set(r);
                }
                next_rays.push(rays[i].clone());
                next_zeros.push(z);
            }
        }
        next_rays.extend(new_rays);
        next_zeros.extend(new_zeros);
        if next_rays.len() as u128 > limit {
            return Err(Error::Explosion {
                module,
                size: next_rays.len(),
                limit: limit as usize,
            });
        }
        rays = next_rays;
        zeros = next_zeros;
    }
    Ok(rays)
}

/// All vertices of a bounded polytope.
pub fn enumerate_vertices(p: &HPolytope) -> Result<VPolytope> {
    let d = p.dim();
    let mut rows: Vec<Vec<Rational>> = p
        .a()
        .iter()
        .zip(p.b())
        .map(|(row, rhs)| {
            let mut r: Vec<Rational> = row.iter().map(|v| -v.clone()).collect();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut t = vec![Rational::zero(); d + 1];
    t[d] = Rational::one();
    rows.push(t);
    let rays = cone_extreme_rays(&rows, d + 1, "exact_polyhedra")?;
    let mut vertices = Vec::new();
    for y in rays {
        let t = &y[d];
        if t.is_zero() {
            return Err(Error::Unbounded);
        }
        vertices.push(y[..d].iter().map(|v| v / t).collect());
    }
    if vertices.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    VPolytope::new(d, vertices)
}

/// Facet inequalities of the convex hull of full-dimensional points,
/// as primitive integer rows in canonical order.
pub fn hull_facets(points: &[Vec<Rational>], dim: usize) -> Result<HPolytope> {
    if points.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|v| {
            let mut r: Vec<Rational> = v.iter().map(|x| -x.clone()).collect();
            r.push(Rational::one());
            r
        })
        .collect();
    if rank(&rows) < dim + 1 {
        return Err(Error::Degenerate {
            dim,
            affine_dim: rank(&rows) - 1,
        });
    }
    let rays = cone_extreme_rays(&rows, dim + 1, "exact_polyhedra")?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for y in rays {
        if y[..dim].iter().all(Zero::is_zero) {
            continue;
        }
        a.push(y[..dim].to_vec());
        b.push(y[dim].clone());
    }
    Ok(HPolytope::new(dim, a, b)?.canonical())
}
