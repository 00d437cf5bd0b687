//! Fourier–Motzkin projection with LP-based redundancy removal.

use num_traits::{Signed, Zero};

use super::HPolytope;
use crate::error::{Error, Result};
use crate::guard;
use crate::rational::Rational;

/// What to project onto.
#[derive(Clone, Debug)]
pub enum Projection {
    /// Keep these coordinates, in this order.
    Keep(Vec<usize>),
    /// The image under `y = L x`, one row of `L` per output coordinate.
    Map(Vec<Vec<Rational>>),
}

struct System {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

impl System {
    fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    fn to_polytope(&self, width: usize) -> HPolytope {
        HPolytope::new(width, self.rows.clone(), self.rhs.clone()).expect("consistent widths")
    }

    fn drop_column(&mut self, j: usize) {
        for r in self.rows.iter_mut() {
            r.remove(j);
        }
    }

    fn clean(&mut self, width: usize) {
        let p = self.to_polytope(width).canonical().remove_redundant();
        self.rows = p.a().to_vec();
        self.rhs = p.b().to_vec();
    }
}

/// Projects a bounded polytope. Every intermediate system is made
/// irredundant; exceeding the constraint cap raises `Explosion`.
pub fn fm_project(p: &HPolytope, proj: &Projection) -> Result<HPolytope> {
    fm_project_capped(p, proj, guard::limit(guard::FM_CONSTRAINTS) as usize)
}

pub fn fm_project_capped(p: &HPolytope, proj: &Projection, cap: usize) -> Result<HPolytope> {
    let m = p.dim();
    // Columns: the m source coordinates followed by the output coordinates.
    let (out_dim, mut eqs, mut sys) = match proj {
        Projection::Keep(keep) => {
            if let Some(&bad) = keep.iter().find(|&&j| j >= m) {
                return Err(Error::IndexOutOfRange(format!("coordinate {bad} of {m}")));
            }
            let rows = p
                .a()
                .iter()
                .map(|row| {
                    let mut r = row.clone();
                    r.extend(keep.iter().map(|_| Rational::zero()));
                    r
                })
                .collect();
            let eqs: Vec<(Vec<Rational>, Rational)> = keep
                .iter()
                .enumerate()
                .map(|(t, &j)| {
                    let mut r = vec![Rational::zero(); m + keep.len()];
                    r[j] = -Rational::from_integer(1.into());
                    r[m + t] = Rational::from_integer(1.into());
                    (r, Rational::zero())
                })
                .collect();
            (keep.len(), eqs, System { rows, rhs: p.b().to_vec() })
        }
        Projection::Map(l) => {
            if let Some(row) = l.iter().find(|r| r.len() != m) {
                return Err(Error::LengthMismatch {
                    expected: m,
                    got: row.len(),
                });
            }
            let rows = p
                .a()
                .iter()
                .map(|row| {
                    let mut r = row.clone();
                    r.extend(l.iter().map(|_| Rational::zero()));
                    r
                })
                .collect();
            let eqs = l
                .iter()
                .enumerate()
                .map(|(t, lrow)| {
                    let mut r: Vec<Rational> = lrow.iter().map(|v| -v.clone()).collect();
                    r.extend((0..l.len()).map(|s| {
                        if s == t {
                            Rational::from_integer(1.into())
                        } else {
                            Rational::zero()
                        }
                    }));
                    (r, Rational::zero())
                })
                .collect();
            (l.len(), eqs, System { rows, rhs: p.b().to_vec() })
        }
    };

    // Source columns still present, by current position.
    let mut source_left = m;

    // Substitute equalities: each removes one source coordinate exactly.
    while let Some((eq, eq_rhs)) = eqs.pop() {
        let Some(j) = (0..source_left).find(|&j| !eq[j].is_zero()) else {
            continue;
        };
        let pivot = eq[j].clone();
        let substitute = |row: &mut Vec<Rational>, rhs: &mut Rational| {
            let f = &row[j] / &pivot;
            if f.is_zero() {
                return;
            }
            for (v, e) in row.iter_mut().zip(&eq) {
                *v -= &f * e;
            }
            *rhs -= &f * &eq_rhs;
        };
        for (row, rhs) in sys.rows.iter_mut().zip(sys.rhs.iter_mut()) {
            substitute(row, rhs);
        }
        for (row, rhs) in eqs.iter_mut() {
            substitute(row, rhs);
        }
        sys.drop_column(j);
        for (row, _) in eqs.iter_mut() {
            row.remove(j);
        }
        source_left -= 1;
    }
    sys.clean(source_left + out_dim);

    while source_left > 0 {
        // Eliminate the coordinate generating the fewest new rows.
        let score = |j: usize| {
            let pos = sys.rows.iter().filter(|r| r[j].is_positive()).count();
            let neg = sys.rows.iter().filter(|r| r[j].is_negative()).count();
            (pos * neg) as i64 - (pos + neg) as i64
        };
        let j = (0..source_left).min_by_key(|&j| score(j)).expect("columns left");
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next_rows = Vec::new();
        let mut next_rhs = Vec::new();
        for (row, rhs) in sys.rows.iter().zip(&sys.rhs) {
            if row[j].is_positive() {
                pos.push((row, rhs));
            } else if row[j].is_negative() {
                neg.push((row, rhs));
            } else {
                next_rows.push(row.clone());
                next_rhs.push(rhs.clone());
            }
        }
        let size = next_rows.len() + pos.len() * neg.len();
        if size > cap {
            return Err(Error::Explosion {
                module: "exact_polyhedra",
                size,
                limit: cap,
            });
        }
        for (pr, pb) in &pos {
            for (nr, nb) in &neg {
                let cp = -nr[j].clone();
                let cn = pr[j].clone();
                let row: Vec<Rational> = pr.iter().zip(nr.iter()).map(|(a, b)| a * &cp + b * &cn).collect();
                next_rows.push(row);
                next_rhs.push(*pb * &cp + *nb * &cn);
            }
        }
        sys.rows = next_rows;
        sys.rhs = next_rhs;
        sys.drop_column(j);
        source_left -= 1;
        if sys.rows.is_empty() {
            break;
        }
        sys.clean(source_left + out_dim);
    }
    if sys.rows.is_empty() {
        return HPolytope::new(out_dim, Vec::new(), Vec::new());
    }
    debug_assert_eq!(sys.width(), out_dim);
    Ok(sys.to_polytope(out_dim).canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::enumerate_vertices;
    use crate::rational::{frac, int};

    #[test]
    fn project_square_with_cut() {
        let mut p = crate::polyhedra::tests::unit_square();
        p.push(vec![int(1), int(1)], frac(3, 2));
        let h = fm_project(&p, &Projection::Keep(vec![0])).unwrap();
        assert_eq!(h.a(), &[vec![int(-1)], vec![int(1)]]);
        assert_eq!(h.b(), &[int(0), int(1)]);
    }

    #[test]
    fn project_through_sum_map() {
        // Triangle x, y >= 0, x + 2y <= 2 mapped by (x, y) -> x + y gives [0, 2].
        let p = HPolytope::new(
            2,
            vec![vec![int(-1), int(0)], vec![int(0), int(-1)], vec![int(1), int(2)]],
            vec![int(0), int(0), int(2)],
        )
        .unwrap();
        let h = fm_project(&p, &Projection::Map(vec![vec![int(1), int(1)]])).unwrap();
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.vertices(), &[vec![int(0)], vec![int(2)]]);
    }

    #[test]
    fn cap_is_enforced() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for j in 0..4 {
            let mut up = vec![int(0); 4];
            up[j] = int(1);
            a.push(up.clone());
            b.push(int(1));
            a.push(up.iter().map(|v| -v.clone()).collect());
            b.push(int(0));
        }
        let p = HPolytope::new(4, a, b).unwrap();
        let err = fm_project_capped(&p, &Projection::Map(vec![vec![int(1), int(1), int(1), int(1)]]), 1).unwrap_err();
        assert!(matches!(err, Error::Explosion { .. }));
    }
}
