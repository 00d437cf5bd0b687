//! Exact rational polyhedra: H- and V-representations, LP, projection,
//! vertex and facet enumeration, volumes.

pub mod dd;
pub mod fm;
pub mod knapsack;
pub mod lp;
pub mod volume;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use dd::{enumerate_vertices, hull_facets};
pub use fm::{fm_project, Projection};
pub use knapsack::{dantzig_max, knapsack_volume, DantzigSolution};
pub use lp::{lp_solve, solve_standard, LPOutcome, LPStatus, Sense, StandardLp};
pub use volume::{volume, VolumeResult};

/// `{x in Q^dim : A x <= b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPolytope {
    dim: usize,
    #[serde(with = "rational::serde_q::matrix")]
    a: Vec<Vec<Rational>>,
    #[serde(with = "rational::serde_q::vec")]
    b: Vec<Rational>,
}

impl HPolytope {
    pub fn new(dim: usize, a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        if let Some(row) = a.iter().find(|r| r.len() != dim) {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: row.len(),
            });
        }
        Ok(Self { dim, a, b })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn push(&mut self, row: Vec<Rational>, rhs: Rational) {
        assert_eq!(row.len(), self.dim);
        self.a.push(row);
        self.b.push(rhs);
    }

    /// Slack `b_r - a_r x` of every row.
    pub fn slacks(&self, x: &[Rational]) -> Vec<Rational> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, rhs)| rhs - rational::dot(row, x))
            .collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.slacks(x).iter().all(|s| !s.is_negative())
    }

    /// Rows with zero slack at `x`.
    pub fn tight_rows(&self, x: &[Rational]) -> Vec<usize> {
        self.slacks(x)
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_zero())
            .map(|(r, _)| r)
            .collect()
    }

    /// Every coordinate has a finite maximum and minimum.
    pub fn is_bounded(&self) -> bool {
        (0..self.dim).all(|j| {
            let mut c = vec![Rational::zero(); self.dim];
            c[j] = rational::int(1);
            [Sense::Max, Sense::Min]
                .iter()
                .all(|&s| lp_solve(self, &c, s).status != LPStatus::Unbounded)
        })
    }

    /// Rows scaled to primitive integers, zero rows dropped, duplicates removed, sorted.
    pub fn canonical(&self) -> Self {
        let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for (row, rhs) in self.a.iter().zip(&self.b) {
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            let mut full = row.clone();
            full.push(rhs.clone());
            let mut p = rational::primitive(&full);
            let rhs = p.pop().expect("nonempty row");
            rows.push((p, rhs));
        }
        rows.sort();
        rows.dedup();
        Self {
            dim: self.dim,
            a: rows.iter().map(|(r, _)| r.clone()).collect(),
            b: rows.into_iter().map(|(_, b)| b).collect(),
        }
    }

    /// Drops rows implied by the others (one LP per row).
    pub fn remove_redundant(&self) -> Self {
        let mut keep: Vec<bool> = vec![true; self.len()];
        for r in 0..self.len() {
            keep[r] = false;
            let rest = self.select(&keep);
            let out = lp_solve(&rest, &self.a[r], Sense::Max);
            let redundant = match out.status {
                LPStatus::Optimal => out.value.as_ref().is_some_and(|v| v <= &self.b[r]),
                LPStatus::Infeasible => true,
                LPStatus::Unbounded => false,
            };
            keep[r] = !redundant;
        }
        self.select(&keep)
    }

    fn select(&self, keep: &[bool]) -> Self {
        let idx: Vec<usize> = (0..self.len()).filter(|&r| keep[r]).collect();
        Self {
            dim: self.dim,
            a: idx.iter().map(|&r| self.a[r].clone()).collect(),
            b: idx.iter().map(|&r| self.b[r].clone()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text).map_err(|e| Error::Validation(e.to_string()))?;
        Self::new(p.dim, p.a, p.b)
    }
}

/// The convex hull of finitely many points, stored sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPolytope {
    dim: usize,
    #[serde(with = "rational::serde_q::matrix")]
    vertices: Vec<Vec<Rational>>,
}

impl VPolytope {
    pub fn new(dim: usize, mut vertices: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        vertices.sort();
        vertices.dedup();
        Ok(Self { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Whether `x` is a convex combination of the points (one feasibility LP).
    pub fn hull_contains(&self, x: &[Rational]) -> bool {
        convex_combination(&self.vertices, x, None).is_some()
    }

    /// No point lies in the hull of the others (one LP per point).
    pub fn is_irredundant(&self) -> bool {
        (0..self.len()).all(|i| convex_combination(&self.vertices, &self.vertices[i], Some(i)).is_none())
    }

    /// Keeps only the points that are not convex combinations of the others.
    pub fn reduce(&self) -> Self {
        let mut pts = self.vertices.clone();
        let mut i = 0;
        while i < pts.len() {
            if convex_combination(&pts, &pts[i].clone(), Some(i)).is_some() {
                pts.remove(i);
            } else {
                i += 1;
            }
        }
        Self {
            dim: self.dim,
            vertices: pts,
        }
    }

    /// One vertex per line, coordinates as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(
            &(1..=self.dim)
                .map(|i| format!("x{i}"))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
        for v in &self.vertices {
            out.push_str(&v.iter().map(rational::fmt).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let dim = header.split(',').count();
        let mut vertices = Vec::new();
        for (no, line) in lines {
            let v = line
                .split(',')
                .map(rational::parse)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Parse {
                    line: no + 1,
                    msg: e.to_string(),
                })?;
            vertices.push(v);
        }
        Self::new(dim, vertices)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text).map_err(|e| Error::Validation(e.to_string()))?;
        Self::new(p.dim, p.vertices)
    }
}

/// Weights `w >= 0`, `sum w = 1`, `sum w_i p_i = x`, optionally forcing `w_skip = 0`.
fn convex_combination(points: &[Vec<Rational>], x: &[Rational], skip: Option<usize>) -> Option<Vec<Rational>> {
    let cols: Vec<usize> = (0..points.len()).filter(|&i| Some(i) != skip).collect();
    let mut lp = StandardLp {
        c: vec![Rational::zero(); cols.len()],
        ..Default::default()
    };
    for j in 0..x.len() {
        lp.a_eq.push(cols.iter().map(|&i| points[i][j].clone()).collect());
        lp.b_eq.push(x[j].clone());
    }
    lp.a_eq.push(vec![rational::int(1); cols.len()]);
    lp.b_eq.push(rational::int(1));
    let out = solve_standard(&lp);
    out.point
}
