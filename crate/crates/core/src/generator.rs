use crate::error::{Error, Result};
use crate::ff::{Elem, FFMatrix, FieldContext};

/// A k x n storage matrix: full row rank, no zero column. Server `v`
/// (0-based) stores the inner product of the objects with column `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    m: FFMatrix,
}

impl GeneratorMatrix {
    pub fn new(m: FFMatrix) -> Result<Self> {
        if m.rows() == 0 || m.cols() == 0 {
            return Err(Error::Validation("empty generator matrix".into()));
        }
        if let Some(c) = (0..m.cols()).find(|&c| m.column(c).iter().all(|&x| x == 0)) {
            return Err(Error::Validation(format!("column {} is zero", c + 1)));
        }
        let rank = m.rank();
        if rank != m.rows() {
            return Err(Error::Validation(format!(
                "matrix has rank {rank}, expected full row rank {}",
                m.rows()
            )));
        }
        Ok(Self { m })
    }

    pub fn from_rows(field: &FieldContext, rows: &[Vec<Elem>]) -> Result<Self> {
        Self::new(FFMatrix::from_rows(field, rows)?)
    }

    /// Convenience for prime fields.
    pub fn over_prime(p: u64, rows: &[Vec<Elem>]) -> Result<Self> {
        let f = crate::ff::make_field(p, 1, None)?;
        Self::from_rows(&f, rows)
    }

    pub fn k(&self) -> usize {
        self.m.rows()
    }

    pub fn n(&self) -> usize {
        self.m.cols()
    }

    pub fn field(&self) -> &FieldContext {
        self.m.field()
    }

    pub fn matrix(&self) -> &FFMatrix {
        &self.m
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        self.m.column(c)
    }

    /// Index of the object `e_i` whose nonzero multiple column `c` is, if any.
    pub fn systematic_object(&self, c: usize) -> Option<usize> {
        let col = self.m.column(c);
        let nonzero: Vec<usize> = (0..col.len()).filter(|&r| col[r] != 0).collect();
        (nonzero.len() == 1).then(|| nonzero[0])
    }

    /// The first k columns form the identity.
    pub fn is_systematic(&self) -> bool {
        let k = self.k();
        self.n() >= k
            && (0..k).all(|c| (0..k).all(|r| self.m.get(r, c) == u32::from(r == c)))
    }
}
