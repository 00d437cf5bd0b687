//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::HPolytope;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LPStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPOutcome {
    pub status: LPStatus,
    #[serde(with = "rational::serde_q::option")]
    pub value: Option<Rational>,
    #[serde(with = "opt_vec")]
    pub point: Option<Vec<Rational>>,
}

mod opt_vec {
    use crate::rational::{fmt, parse, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|xs| xs.iter().map(fmt).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|xs| xs.iter().map(|t| parse(t).map_err(D::Error::custom)).collect())
            .transpose()
    }
}

impl LPOutcome {
    fn infeasible() -> Self {
        Self {
            status: LPStatus::Infeasible,
            value: None,
            point: None,
        }
    }

    fn unbounded() -> Self {
        Self {
            status: LPStatus::Unbounded,
            value: None,
            point: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LPStatus::Optimal
    }
}

/// `max c x` subject to `a_ub x <= b_ub`, `a_eq x = b_eq`, `x >= 0`.
#[derive(Clone, Debug, Default)]
pub struct StandardLp {
    pub c: Vec<Rational>,
    pub a_ub: Vec<Vec<Rational>>,
    pub b_ub: Vec<Rational>,
    pub a_eq: Vec<Vec<Rational>>,
    pub b_eq: Vec<Rational>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let inv = self.rows[pr][pc].recip();
        for v in self.rows[pr].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow = self.rows[pr].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !prow[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[pc].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                let t = &f * &prow[j];
                row[j] -= t;
            }
        };
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r != pr {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[pr] = pc;
    }

    /// Runs Bland's rule over the columns in `allowed`. Returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(pc) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][pc];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((pr, _)) = best else {
                return false;
            };
            self.pivot(pr, pc);
        }
    }

    fn set_objective(&mut self, costs: &[Rational]) {
        // Row holds -c; reduced costs after canonicalizing against the basis.
        let mut obj: Vec<Rational> = vec![Rational::zero(); self.width + 1];
        for (j, c) in costs.iter().enumerate() {
            obj[j] = -c.clone();
        }
        for (r, &b) in self.basis.iter().enumerate() {
            let f = obj[b].clone();
            if f.is_zero() {
                continue;
            }
            for (j, v) in self.rows[r].iter().enumerate() {
                if !v.is_zero() {
                    obj[j] -= &f * v;
                }
            }
        }
        self.obj = obj;
    }
}

/// Solves a maximization problem in standard form.
pub fn solve_standard(lp: &StandardLp) -> LPOutcome {
    let nx = lp.c.len();
    let n_ub = lp.a_ub.len();
    let n_eq = lp.a_eq.len();
    let m = n_ub + n_eq;
    // Columns: x (nx), slacks (n_ub), artificials (m), rhs.
    let art0 = nx + n_ub;
    let width = art0 + m;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut needs_art = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = vec![Rational::zero(); width + 1];
        let (coeffs, rhs) = if r < n_ub {
            (&lp.a_ub[r], &lp.b_ub[r])
        } else {
            (&lp.a_eq[r - n_ub], &lp.b_eq[r - n_ub])
        };
        row[..nx].clone_from_slice(coeffs);
        if r < n_ub {
            row[nx + r] = Rational::from_integer(1.into());
        }
        row[width] = rhs.clone();
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        if r < n_ub && !rhs.is_negative() {
            basis.push(nx + r);
            needs_art.push(false);
        } else {
            row[art0 + r] = Rational::from_integer(1.into());
            basis.push(art0 + r);
            needs_art.push(true);
        }
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        width,
    };

    if needs_art.iter().any(|&b| b) {
        // Phase 1: maximize minus the sum of artificials.
        let mut phase1 = vec![Rational::zero(); width];
        for r in 0..m {
            if needs_art[r] {
                phase1[art0 + r] = Rational::from_integer((-1).into());
            }
        }
        t.set_objective(&phase1);
        t.optimize(width);
        if !t.obj[width].is_zero() {
            return LPOutcome::infeasible();
        }
        // Drive artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art0 {
                if let Some(pc) = (0..art0).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, pc);
                } else {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
            r += 1;
        }
    }
    // Artificial columns are never re-entered: phase 2 only scans x and slacks.
    for row in t.rows.iter_mut() {
        for v in row[art0..width].iter_mut() {
            *v = Rational::zero();
        }
    }
    let mut costs = lp.c.clone();
    costs.resize(width, Rational::zero());
    t.set_objective(&costs);
    if !t.optimize(art0) {
        return LPOutcome::unbounded();
    }
    let mut x = vec![Rational::zero(); nx];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < nx {
            x[b] = t.rhs(r).clone();
        }
    }
    LPOutcome {
        status: LPStatus::Optimal,
        value: Some(t.obj[width].clone()),
        point: Some(x),
    }
}

/// Optimizes `c x` over `{x : A x <= b}`.
///
/// Rows of the form `-x_j <= 0` are recognized as sign constraints; the
/// remaining coordinates are split into positive and negative parts.
pub fn lp_solve(p: &HPolytope, c: &[Rational], sense: Sense) -> LPOutcome {
    let d = p.dim();
    assert_eq!(c.len(), d, "objective length must equal the dimension");
    let mut nonneg = vec![false; d];
    let mut sign_row = vec![false; p.len()];
    for (r, row) in p.a().iter().enumerate() {
        if !p.b()[r].is_zero() {
            continue;
        }
        let nz: Vec<usize> = (0..d).filter(|&j| !row[j].is_zero()).collect();
        if let [j] = nz[..] {
            if row[j].is_negative() {
                nonneg[j] = true;
                sign_row[r] = true;
            }
        }
    }
    // Column layout: one per coordinate, plus one negative part for free coordinates.
    let free: Vec<usize> = (0..d).filter(|&j| !nonneg[j]).collect();
    let ncols = d + free.len();
    let lift = |row: &[Rational]| {
        let mut out = row.to_vec();
        out.extend(free.iter().map(|&j| -row[j].clone()));
        out
    };
    let mut obj = lift(c);
    if sense == Sense::Min {
        obj.iter_mut().for_each(|v| *v = -v.clone());
    }
    let mut lp = StandardLp {
        c: obj,
        ..Default::default()
    };
    for (r, row) in p.a().iter().enumerate() {
        if !sign_row[r] {
            lp.a_ub.push(lift(row));
            lp.b_ub.push(p.b()[r].clone());
        }
    }
    let mut out = solve_standard(&lp);
    if let Some(y) = out.point.take() {
        let mut x: Vec<Rational> = y[..d].to_vec();
        for (t, &j) in free.iter().enumerate() {
            x[j] -= &y[d + t];
        }
        debug_assert_eq!(ncols, y.len());
        out.point = Some(x);
    }
    if sense == Sense::Min {
        out.value = out.value.map(|v| -v);
    }
    out
}
