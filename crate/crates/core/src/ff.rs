//! Finite fields F_q and dense linear algebra over them.
//!
//! Elements of F_{p^e} are encoded as integers `0..q`, read as base-p digit
//! vectors of polynomial coefficients (least significant digit = constant
//! term). For prime fields this is ordinary arithmetic mod p.

use std::fmt;

use crate::error::{Error, Result};

pub type Elem = u32;

const MAX_ORDER: u64 = 1 << 16;

#[derive(Clone, PartialEq, Eq)]
pub struct FieldContext {
    p: u32,
    e: u32,
    q: u32,
    /// Low-to-high coefficients of the monic modulus, length e + 1. Empty for prime fields.
    modulus: Vec<u32>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.p, self.e, self.modulus)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Builds F_{p^e}. `modulus` lists the coefficients of a monic degree-e
/// polynomial, constant term first; it is required (and checked for
/// irreducibility) when `e > 1`.
pub fn make_field(p: u64, e: u32, modulus: Option<&[u32]>) -> Result<FieldContext> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
    }
    let q = (p as u128).checked_pow(e).filter(|&q| q <= MAX_ORDER as u128).ok_or_else(|| {
        Error::Validation(format!("field order {p}^{e} exceeds {MAX_ORDER}"))
    })? as u32;
    let p = p as u32;
    if e == 1 {
        return Ok(FieldContext {
            p,
            e,
            q,
            modulus: Vec::new(),
        });
    }
    let modulus = modulus.ok_or(Error::MissingModulus(e))?;
    if modulus.len() != e as usize + 1 {
        return Err(Error::InvalidModulus(format!(
            "expected {} coefficients, got {}",
            e + 1,
            modulus.len()
        )));
    }
    if modulus.iter().any(|&c| c >= p) {
        return Err(Error::InvalidModulus("coefficient not reduced mod p".into()));
    }
    if modulus[e as usize] != 1 {
        return Err(Error::InvalidModulus("modulus must be monic".into()));
    }
    if !is_irreducible(p, modulus) {
        return Err(Error::ReducibleModulus(p as u64));
    }
    Ok(FieldContext {
        p,
        e,
        q,
        modulus: modulus.to_vec(),
    })
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `m` over F_p.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    let p64 = p as u64;
    while r.len() > dm {
        let lead = r.pop().unwrap() % p64;
        if lead != 0 {
            let shift = r.len() - dm;
            for (j, &mc) in m[..dm].iter().enumerate() {
                let sub = lead * mc as u64 % p64;
                r[shift + j] = (r[shift + j] + p64 - sub) % p64;
            }
        }
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

impl FieldContext {
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn digits(&self, mut a: Elem) -> Vec<u32> {
        let mut out = vec![0; self.e as usize];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn undigits(&self, digits: &[u32]) -> Elem {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&sum)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.e == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let d: Vec<u32> = self.digits(a).iter().map(|x| (self.p - x) % self.p).collect();
        self.undigits(&d)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; da.len() + db.len() - 1];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + *x as u64 * *y as u64) % self.p as u64) as u32;
            }
        }
        let mut r = poly_rem(self.p, &prod, &self.modulus);
        r.resize(self.e as usize, 0);
        self.undigits(&r)
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.q as u64 - 2))
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Option<u32> {
        if a == 0 || a >= self.q {
            return None;
        }
        let mut x = a;
        let mut ord = 1;
        while x != 1 {
            x = self.mul(x, a);
            ord += 1;
        }
        Some(ord)
    }

    pub fn is_primitive(&self, a: Elem) -> bool {
        self.mult_order(a) == Some(self.q - 1)
    }
}

/// Dense matrix over a finite field, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FFMatrix {
    ctx: FieldContext,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for FFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} {}x{}", self.ctx, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FFMatrix {
    pub fn new(ctx: &FieldContext, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&x| x >= ctx.q) {
            return Err(Error::Validation(format!(
                "entry {bad} is not an element of F_{}",
                ctx.q
            )));
        }
        Ok(Self {
            ctx: ctx.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(ctx: &FieldContext, rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(ctx, rows.len(), cols, rows.concat())
    }

    pub fn zeros(ctx: &FieldContext, rows: usize, cols: usize) -> Self {
        Self {
            ctx: ctx.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ctx: &FieldContext, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn field(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Matrix built from the given columns (in order).
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(&self.ctx, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    pub fn from_columns(ctx: &FieldContext, height: usize, columns: &[Vec<Elem>]) -> Result<Self> {
        let mut m = Self::zeros(ctx, height, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != height {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has length {}, expected {height}",
                    col.len()
                )));
            }
            for (r, &v) in col.iter().enumerate() {
                if v >= ctx.q {
                    return Err(Error::Validation(format!("entry {v} outside F_{}", ctx.q)));
                }
                m.set(r, j, v);
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.ctx;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0;
                for j in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, j), other.get(j, c)));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.ctx;
        (0..self.cols)
            .map(|c| {
                v.iter()
                    .enumerate()
                    .fold(0, |acc, (r, &x)| f.add(acc, f.mul(x, self.get(r, c))))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Reduced row echelon form and the pivot columns (0-based, increasing).
    /// Pivots are chosen from the smallest available row index.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.ctx;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if pr != lead {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, lead * m.cols + j);
                }
            }
            let inv = f.inv(m.get(lead, c)).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = f.mul(m.get(lead, j), inv);
                m.set(lead, j, v);
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(lead, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space {x : M x = 0}, one vector per free column.
    pub fn null_space(&self) -> Vec<Vec<Elem>> {
        let f = &self.ctx;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![0; self.cols];
                x[fc] = 1;
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = f.neg(r.get(row, fc));
                }
                x
            })
            .collect()
    }
}

/// Whether `target` lies in the span of `vectors`; on success returns
/// coefficients `c` with `sum c_j vectors[j] = target`.
pub fn in_span(
    ctx: &FieldContext,
    vectors: &[Vec<Elem>],
    target: &[Elem],
) -> Result<Option<Vec<Elem>>> {
    let height = target.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != height) {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against target of length {height}",
            bad.len()
        )));
    }
    if target.iter().all(|&x| x == 0) {
        return Ok(Some(vec![0; vectors.len()]));
    }
    if vectors.is_empty() {
        return Ok(None);
    }
    let mut columns = vectors.to_vec();
    columns.push(target.to_vec());
    let aug = FFMatrix::from_columns(ctx, height, &columns)?;
    let (r, pivots) = aug.rref();
    let last = vectors.len();
    if pivots.contains(&last) {
        return Ok(None);
    }
    let mut coeffs = vec![0; vectors.len()];
    for (row, &pc) in pivots.iter().enumerate() {
        coeffs[pc] = r.get(row, last);
    }
    Ok(Some(coeffs))
}
