//! Dense complex vectors and matrices over ordered multipartite Hilbert spaces.
//!
//! Index layout is mixed-radix with the leftmost subsystem most significant:
//! a `MultiKet` with `dims = [d0, d1, d2]` stores the amplitude of
//! |i0⟩⊗|i1⟩⊗|i2⟩ at flat index `(i0·d1 + i1)·d2 + i2`. A `BipartiteKet`
//! with amplitudes c_jk is the special case `dims = [dA, dB]`, and is
//! identified with the dA×dB matrix A via c_jk = A[j,k]; under this
//! identification the swap of the two factors is the matrix transpose.
//!
//! Bras conjugate: contracting ⟨⟨b| against a ket multiplies by conj(c_jk).

use num_complex::Complex64;

use crate::error::{check_capacity, Error, Result};

pub type C64 = Complex64;

/// Tolerance below which a vector counts as numerically zero.
pub const ZERO_NORM_TOL: f64 = 1e-14;

/// Default max-norm tolerance for equality checks.
pub const DEFAULT_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Ket
// ---------------------------------------------------------------------------

/// Pure state on a single subsystem.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amps: Vec<C64>,
}

impl Ket {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Shape("ket must have positive dimension".into()));
        }
        check_capacity(amps.len(), "ket")?;
        Ok(Self { amps })
    }

    /// Computational basis vector |k⟩ in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::Shape(format!("basis index {k} out of range for dim {dim}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hermitian inner product ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!(
                "inner product dims {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|² for unit vectors.
    pub fn fidelity(&self, other: &Ket) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn normalized(&self) -> Result<Ket> {
        let n = self.norm();
        if n < ZERO_NORM_TOL {
            return Err(Error::Degenerate { norm: n });
        }
        Ok(Ket {
            amps: self.amps.iter().map(|a| a / n).collect(),
        })
    }

    pub fn scale(&self, c: C64) -> Ket {
        Ket {
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Ket) -> Result<Ket> {
        if self.dim() != other.dim() {
            return Err(Error::Shape("ket add dims differ".into()));
        }
        Ok(Ket {
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Ket) -> Result<Ket> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn max_diff(&self, other: &Ket) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Overlap modulus |⟨self|other⟩| / (‖self‖·‖other‖); 1 means equal up to
    /// a global phase.
    pub fn overlap_modulus(&self, other: &Ket) -> Result<f64> {
        let denom = self.norm() * other.norm();
        if denom < ZERO_NORM_TOL * ZERO_NORM_TOL {
            return Err(Error::Degenerate { norm: denom });
        }
        Ok(self.inner(other)?.norm() / denom)
    }
}

// ---------------------------------------------------------------------------
// Operator
// ---------------------------------------------------------------------------

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl Operator {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("operator must have positive dimensions".into()));
        }
        check_capacity(rows.max(cols), "operator")?;
        Ok(Self {
            rows,
            cols,
            entries: vec![C64::new(0.0, 0.0); rows * cols],
        })
    }

    pub fn identity(d: usize) -> Result<Self> {
        let mut m = Self::zeros(d, d)?;
        for i in 0..d {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        Ok(m)
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "operator {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        check_capacity(rows.max(cols), "operator")?;
        Ok(Self { rows, cols, entries })
    }

    pub fn diagonal(diag: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len(), diag.len())?;
        for (i, &c) in diag.iter().enumerate() {
            m.set(i, i, c);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Operator) -> Result<Operator> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Operator::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &Ket) -> Result<Ket> {
        if self.cols != x.dim() {
            return Err(Error::Shape(format!(
                "operator {}x{} applied to ket of dim {}",
                self.rows,
                self.cols,
                x.dim()
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * x.amps()[j];
            }
            amps[i] = acc;
        }
        Ket::new(amps)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator {
        let mut out = Operator {
            rows: self.cols,
            cols: self.rows,
            entries: vec![C64::new(0.0, 0.0); self.entries.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> Operator {
        let mut out = Operator {
            rows: self.cols,
            cols: self.rows,
            entries: vec![C64::new(0.0, 0.0); self.entries.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn conj(&self) -> Operator {
        Operator {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Operator {
        Operator {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("operator add shapes differ".into()));
        }
        Ok(Operator {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Max-norm: largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &Operator) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// ‖U†U − I‖_max; zero for exact unitaries.
    pub fn unitarity_residual(&self) -> f64 {
        let utu = self.dagger().mul(self).expect("square product");
        let id = Operator::identity(self.cols).expect("identity");
        utu.max_diff(&id)
    }

    /// Largest singular value, estimated by power iteration on A†A.
    pub fn spectral_norm(&self) -> f64 {
        let ata = self.dagger().mul(self).expect("square product");
        let n = ata.rows;
        let mut v: Vec<C64> = (0..n)
            .map(|i| C64::new(1.0 + (i as f64) * 0.37, 0.11 * (i as f64 + 1.0)))
            .collect();
        let mut lam = 0.0f64;
        for _ in 0..200 {
            let mut w = vec![C64::new(0.0, 0.0); n];
            for i in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..n {
                    acc += ata.get(i, j) * v[j];
                }
                w[i] = acc;
            }
            let norm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            let new_lam = norm;
            for c in w.iter_mut() {
                *c /= norm;
            }
            let done = (new_lam - lam).abs() <= 1e-15 * new_lam.max(1.0);
            v = w;
            lam = new_lam;
            if done {
                break;
            }
        }
        lam.sqrt()
    }

    /// Kronecker product with the standard mixed-radix layout:
    /// (A⊗B)[(i,k),(j,l)] = A[i,j]·B[k,l].
    pub fn kron(&self, other: &Operator) -> Result<Operator> {
        let rows = self.rows.checked_mul(other.rows).ok_or_else(|| {
            Error::Capacity("kron row count overflows".into(), max_total_dim_cap())
        })?;
        let cols = self.cols.checked_mul(other.cols).ok_or_else(|| {
            Error::Capacity("kron col count overflows".into(), max_total_dim_cap())
        })?;
        let mut out = Operator::zeros(rows, cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn max_total_dim_cap() -> usize {
    crate::error::max_total_dim()
}

// ---------------------------------------------------------------------------
// MultiKet
// ---------------------------------------------------------------------------

/// Pure state over an ordered list of subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiKet {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl MultiKet {
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::Shape("subsystem dimensions must be positive".into()));
        }
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::Shape(format!(
                "amps length {} does not match product of dims {total}",
                amps.len()
            )));
        }
        check_capacity(total, "multipartite ket")?;
        Ok(Self { dims, amps })
    }

    pub fn from_ket(ket: &Ket) -> Self {
        Self {
            dims: vec![ket.dim()],
            amps: ket.amps().to_vec(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &MultiKet) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::Shape("inner product dims differ".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn normalized(&self) -> Result<MultiKet> {
        let n = self.norm();
        if n < ZERO_NORM_TOL {
            return Err(Error::Degenerate { norm: n });
        }
        Ok(MultiKet {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a / n).collect(),
        })
    }

    pub fn scale(&self, c: C64) -> MultiKet {
        MultiKet {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &MultiKet) -> Result<MultiKet> {
        if self.dims != other.dims {
            return Err(Error::Shape("multiket add dims differ".into()));
        }
        Ok(MultiKet {
            dims: self.dims.clone(),
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn max_diff(&self, other: &MultiKet) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Flatten to a single-subsystem ket (amplitudes unchanged).
    pub fn to_ket(&self) -> Ket {
        Ket {
            amps: self.amps.clone(),
        }
    }

    /// Tensor product self ⊗ other (self's subsystems first).
    pub fn tensor(&self, other: &MultiKet) -> Result<MultiKet> {
        let total = self.total_dim().checked_mul(other.total_dim()).ok_or_else(|| {
            Error::Capacity("tensor product dimension overflows".into(), max_total_dim_cap())
        })?;
        check_capacity(total, "tensor product")?;
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut amps = Vec::with_capacity(total);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        MultiKet::new(dims, amps)
    }

    /// Insert a single-subsystem ket at position `pos` in the subsystem order.
    pub fn insert(&self, pos: usize, ket: &Ket) -> Result<MultiKet> {
        if pos > self.dims.len() {
            return Err(Error::Shape(format!(
                "insert position {pos} out of range for {} subsystems",
                self.dims.len()
            )));
        }
        let left: usize = self.dims[..pos].iter().product();
        let right: usize = self.dims[pos..].iter().product();
        let total = self
            .total_dim()
            .checked_mul(ket.dim())
            .ok_or_else(|| Error::Capacity("insert dimension overflows".into(), max_total_dim_cap()))?;
        check_capacity(total, "subsystem insert")?;
        let mut dims = self.dims.clone();
        dims.insert(pos, ket.dim());
        let mut amps = vec![C64::new(0.0, 0.0); total];
        for l in 0..left {
            for (k, &c) in ket.amps().iter().enumerate() {
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                for r in 0..right {
                    amps[(l * ket.dim() + k) * right + r] = c * self.amps[l * right + r];
                }
            }
        }
        MultiKet::new(dims, amps)
    }

    /// Apply an operator to one subsystem, identity elsewhere.
    pub fn apply_at(&self, slot: usize, op: &Operator) -> Result<MultiKet> {
        if slot >= self.dims.len() {
            return Err(Error::Shape(format!("slot {slot} out of range")));
        }
        let d = self.dims[slot];
        if op.rows() != d || op.cols() != d {
            return Err(Error::Shape(format!(
                "operator {}x{} on subsystem of dim {d}",
                op.rows(),
                op.cols()
            )));
        }
        let right: usize = self.dims[slot + 1..].iter().product();
        let left: usize = self.dims[..slot].iter().product();
        let mut amps = vec![C64::new(0.0, 0.0); self.total_dim()];
        for l in 0..left {
            for r in 0..right {
                for i in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..d {
                        acc += op.get(i, j) * self.amps[(l * d + j) * right + r];
                    }
                    amps[(l * d + i) * right + r] = acc;
                }
            }
        }
        MultiKet::new(self.dims.clone(), amps)
    }
}

// ---------------------------------------------------------------------------
// BipartiteKet
// ---------------------------------------------------------------------------

/// Pure state on two subsystems, amplitudes c_jk with j over subsystem A.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteKet {
    da: usize,
    db: usize,
    amps: Vec<C64>,
}

impl BipartiteKet {
    pub fn new(da: usize, db: usize, amps: Vec<C64>) -> Result<Self> {
        if da == 0 || db == 0 {
            return Err(Error::Shape("bipartite dims must be positive".into()));
        }
        if amps.len() != da * db {
            return Err(Error::Shape(format!(
                "bipartite amps length {} vs {da}x{db}",
                amps.len()
            )));
        }
        check_capacity(da * db, "bipartite ket")?;
        Ok(Self { da, db, amps })
    }

    pub fn dim_a(&self) -> usize {
        self.da
    }

    pub fn dim_b(&self) -> usize {
        self.db
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.amps[j * self.db + k]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &BipartiteKet) -> Result<C64> {
        if (self.da, self.db) != (other.da, other.db) {
            return Err(Error::Shape("bipartite inner dims differ".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn normalized(&self) -> Result<BipartiteKet> {
        let n = self.norm();
        if n < ZERO_NORM_TOL {
            return Err(Error::Degenerate { norm: n });
        }
        Ok(BipartiteKet {
            da: self.da,
            db: self.db,
            amps: self.amps.iter().map(|a| a / n).collect(),
        })
    }

    pub fn scale(&self, c: C64) -> BipartiteKet {
        BipartiteKet {
            da: self.da,
            db: self.db,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn max_diff(&self, other: &BipartiteKet) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_multiket(&self) -> MultiKet {
        MultiKet {
            dims: vec![self.da, self.db],
            amps: self.amps.clone(),
        }
    }

    pub fn from_multiket(mk: &MultiKet) -> Result<Self> {
        if mk.dims().len() != 2 {
            return Err(Error::Shape(format!(
                "expected 2 subsystems, got {}",
                mk.dims().len()
            )));
        }
        Self::new(mk.dims()[0], mk.dims()[1], mk.amps().to_vec())
    }

    /// The matrix A with A[j,k] = c_jk.
    pub fn to_matrix(&self) -> Operator {
        Operator {
            rows: self.da,
            cols: self.db,
            entries: self.amps.clone(),
        }
    }

    /// Inverse of [`BipartiteKet::to_matrix`]: c_jk = A[j,k].
    pub fn from_matrix(a: &Operator) -> BipartiteKet {
        BipartiteKet {
            da: a.rows(),
            db: a.cols(),
            amps: a.entries().to_vec(),
        }
    }
}

/// Operator ↔ bipartite-ket correspondence, c_jk = A[j,k].
pub fn mat_to_biket(a: &Operator) -> BipartiteKet {
    BipartiteKet::from_matrix(a)
}

/// Inverse of [`mat_to_biket`].
pub fn biket_to_mat(b: &BipartiteKet) -> Operator {
    b.to_matrix()
}

// ---------------------------------------------------------------------------
// Contractions
// ---------------------------------------------------------------------------

/// Apply the bra ⟨⟨bra| to subsystems `slots = (i, j)` of `target`,
/// conjugating the bra amplitudes. Returns the (generally unnormalized)
/// state on the remaining subsystems, order preserved.
pub fn contract_bra(bra: &BipartiteKet, target: &MultiKet, slots: (usize, usize)) -> Result<MultiKet> {
    let (si, sj) = slots;
    let n = target.dims().len();
    if si >= n || sj >= n {
        return Err(Error::Shape(format!("slot ({si},{sj}) out of range for {n} subsystems")));
    }
    if si == sj {
        return Err(Error::Shape("contraction slots must differ".into()));
    }
    if target.dims()[si] != bra.dim_a() || target.dims()[sj] != bra.dim_b() {
        return Err(Error::Shape(format!(
            "bra dims {}x{} vs target slots of dims {}x{}",
            bra.dim_a(),
            bra.dim_b(),
            target.dims()[si],
            target.dims()[sj]
        )));
    }

    let rest_dims: Vec<usize> = target
        .dims()
        .iter()
        .enumerate()
        .filter(|(s, _)| *s != si && *s != sj)
        .map(|(_, &d)| d)
        .collect();
    let rest_total: usize = rest_dims.iter().product::<usize>().max(1);
    let mut out = vec![C64::new(0.0, 0.0); rest_total];

    // strides of the mixed-radix layout, leftmost most significant
    let dims = target.dims();
    let mut strides = vec![1usize; n];
    for s in (0..n - 1).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }

    let mut digits = vec![0usize; n];
    for (idx, amp) in target.amps().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let mut rem = idx;
        for s in 0..n {
            digits[s] = rem / strides[s];
            rem %= strides[s];
        }
        let coeff = bra.get(digits[si], digits[sj]).conj();
        if coeff.norm_sqr() == 0.0 {
            continue;
        }
        let mut rest_idx = 0usize;
        for s in 0..n {
            if s != si && s != sj {
                rest_idx = rest_idx * dims[s] + digits[s];
            }
        }
        out[rest_idx] += coeff * amp;
    }

    let out_dims = if rest_dims.is_empty() { vec![1] } else { rest_dims };
    MultiKet::new(out_dims, out)
}

/// Matrix M (rows = output dim, cols = input dim) such that placing |φ⟩ at
/// `in_slot` of `resource`, contracting `bra` over `bra_slots`, and reading
/// off `out_slot` gives M|φ⟩. Built by contracting each basis input.
pub fn induced_map(
    bra: &BipartiteKet,
    resource: &MultiKet,
    in_slot: usize,
    bra_slots: (usize, usize),
    out_slot: usize,
) -> Result<Operator> {
    let full_subsystems = resource.dims().len() + 1;
    if in_slot >= full_subsystems || out_slot >= full_subsystems {
        return Err(Error::Shape("induced_map slot out of range".into()));
    }
    if out_slot == bra_slots.0 || out_slot == bra_slots.1 {
        return Err(Error::Shape("output slot collides with bra slots".into()));
    }
    // dims of the assembled system: resource dims with the input inserted
    let d_in = if in_slot == bra_slots.0 {
        bra.dim_a()
    } else if in_slot == bra_slots.1 {
        bra.dim_b()
    } else {
        return Err(Error::Shape("input slot must be contracted by the bra".into()));
    };
    // out_slot indexes the assembled system; recover its position among the
    // remaining subsystems after the two bra slots are removed
    let mut remaining: Vec<usize> = (0..full_subsystems)
        .filter(|s| *s != bra_slots.0 && *s != bra_slots.1)
        .collect();
    let out_pos = remaining
        .iter()
        .position(|&s| s == out_slot)
        .ok_or_else(|| Error::Shape("output slot not among remaining subsystems".into()))?;
    remaining.remove(out_pos);
    if !remaining.is_empty() {
        return Err(Error::Shape(
            "induced_map expects exactly one remaining subsystem".into(),
        ));
    }

    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(d_in);
    for k in 0..d_in {
        let basis = Ket::basis(d_in, k)?;
        let full = resource.insert(in_slot, &basis)?;
        let contracted = contract_bra(bra, &full, bra_slots)?;
        columns.push(contracted.amps().to_vec());
    }
    let d_out = columns[0].len();
    let mut m = Operator::zeros(d_out, d_in)?;
    for (k, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            m.set(i, k, v);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bell() -> BipartiteKet {
        let s = 1.0 / 2f64.sqrt();
        BipartiteKet::new(2, 2, vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap()
    }

    #[test]
    fn kron_identity_case() {
        let i2 = Operator::identity(2).unwrap();
        let i3 = Operator::identity(3).unwrap();
        let i6 = i2.kron(&i3).unwrap();
        assert_eq!(i6.max_diff(&Operator::identity(6).unwrap()), 0.0);
    }

    #[test]
    fn kron_scalar_factor() {
        let a = Operator::from_entries(1, 1, vec![c(2.0, -1.0)]).unwrap();
        let b = Operator::from_entries(2, 2, vec![c(1.0, 0.0), c(0.5, 0.0), c(0.0, 1.0), c(-1.0, 0.0)])
            .unwrap();
        let ab = a.kron(&b).unwrap();
        assert!(ab.max_diff(&b.scale(c(2.0, -1.0))) < 1e-15);
    }

    #[test]
    fn kron_matches_index_formula() {
        // brute-force index enumeration oracle
        let sx = Operator::from_entries(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let sz = Operator::from_entries(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
            .unwrap();
        let k = sx.kron(&sz).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        let expect = sx.get(i, j) * sz.get(p, q);
                        assert_eq!(k.get(i * 2 + p, j * 2 + q), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_capacity_error() {
        let big = Operator::identity(100).unwrap();
        let bigger = Operator::identity(64).unwrap();
        // 100 * 64 = 6400 > 4096 default cap
        match big.kron(&bigger) {
            Err(Error::Capacity(_, _)) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn contract_bell_against_product() {
        // bra = (|00⟩+|11⟩)/√2, target = |0⟩⊗Bell → (1/2)|0⟩ on system 3
        let target = MultiKet::from_ket(&Ket::basis(2, 0).unwrap())
            .tensor(&bell().to_multiket())
            .unwrap();
        let out = contract_bra(&bell(), &target, (0, 1)).unwrap();
        assert_eq!(out.dims(), &[2]);
        assert!((out.amps()[0] - c(0.5, 0.0)).norm() < 1e-15);
        assert!(out.amps()[1].norm() < 1e-15);
    }

    #[test]
    fn contract_matches_dense_matvec_oracle() {
        // bra on slots (0,1) of |φ⟩⊗|ψ⟩⊗|χ⟩ computed against the literal
        // sum Σ conj(b_jk) t_{jkl}
        let bra = BipartiteKet::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        let phi = Ket::new(vec![c(0.3, 0.1), c(-0.2, 0.7)]).unwrap();
        let psi = Ket::new(vec![c(0.9, 0.0), c(0.1, -0.4)]).unwrap();
        let chi = Ket::new(vec![c(0.0, 1.0), c(0.5, 0.5)]).unwrap();
        let target = MultiKet::from_ket(&phi)
            .tensor(&MultiKet::from_ket(&psi))
            .unwrap()
            .tensor(&MultiKet::from_ket(&chi))
            .unwrap();
        let out = contract_bra(&bra, &target, (0, 1)).unwrap();
        for l in 0..2 {
            let mut expect = c(0.0, 0.0);
            for j in 0..2 {
                for k in 0..2 {
                    expect += bra.get(j, k).conj() * target.amps()[(j * 2 + k) * 2 + l];
                }
            }
            assert!((out.amps()[l] - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn contract_symmetric_bra_slot_order() {
        // c_jk = c_kj ⇒ slots (1,0) equals slots (0,1)
        let sym = BipartiteKet::new(
            2,
            2,
            vec![c(0.4, 0.0), c(0.3, 0.2), c(0.3, 0.2), c(-0.1, 0.5)],
        )
        .unwrap();
        let target = MultiKet::new(
            vec![2, 2, 2],
            (0..8).map(|i| c(0.1 * i as f64, 0.05 * i as f64)).collect(),
        )
        .unwrap();
        let a = contract_bra(&sym, &target, (0, 1)).unwrap();
        let b = contract_bra(&sym, &target, (1, 0)).unwrap();
        assert!(a.max_diff(&b) < 1e-15);
    }

    #[test]
    fn contract_shape_errors() {
        let target = MultiKet::new(vec![2, 3], vec![c(1.0, 0.0); 6]).unwrap();
        assert!(contract_bra(&bell(), &target, (0, 1)).is_err()); // dim mismatch
        assert!(contract_bra(&bell(), &target, (0, 5)).is_err()); // slot range
        assert!(contract_bra(&bell(), &target, (1, 1)).is_err()); // equal slots
    }

    #[test]
    fn induced_map_one_dimensional() {
        let bra = BipartiteKet::new(1, 1, vec![c(1.0, 0.0)]).unwrap();
        let resource = MultiKet::new(vec![1, 1], vec![c(1.0, 0.0)]).unwrap();
        let m = induced_map(&bra, &resource, 0, (0, 1), 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!((m.get(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn biket_matrix_round_trip() {
        let entries: Vec<C64> = (0..12).map(|i| c(i as f64, -(i as f64) * 0.5)).collect();
        let a = Operator::from_entries(3, 4, entries).unwrap();
        let b = mat_to_biket(&a);
        assert_eq!(biket_to_mat(&b).max_diff(&a), 0.0);
    }

    #[test]
    fn bell_from_identity_matrix() {
        let a = Operator::identity(2).unwrap().scale(c(1.0 / 2f64.sqrt(), 0.0));
        let b = mat_to_biket(&a);
        assert!(b.max_diff(&bell()) < 1e-15);
    }

    #[test]
    fn inner_products() {
        let plus = Ket::new(vec![c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0)]).unwrap();
        let zero = Ket::basis(2, 0).unwrap();
        let v = plus.inner(&zero).unwrap();
        assert!((v - c(1.0 / 2f64.sqrt(), 0.0)).norm() < 1e-15);

        let x = Ket::new(vec![c(0.3, -0.4), c(0.8, 0.1)]).unwrap();
        let n2 = x.inner(&x).unwrap();
        assert!(n2.im.abs() < 1e-15);
        assert!(n2.re >= 0.0);
        assert!((n2.re - x.norm() * x.norm()).abs() < 1e-15);
    }

    #[test]
    fn dagger_involution() {
        let a = Operator::from_entries(
            2,
            3,
            vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5), c(-2.0, 0.0), c(0.7, 0.7), c(1.0, -1.0)],
        )
        .unwrap();
        assert_eq!(a.dagger().dagger().max_diff(&a), 0.0);
    }

    #[test]
    fn normalize_rejects_zero() {
        let z = Ket::new(vec![c(0.0, 0.0), c(1e-16, 0.0)]).unwrap();
        match z.normalized() {
            Err(Error::Degenerate { .. }) => {}
            other => panic!("expected degenerate error, got {other:?}"),
        }
    }

    #[test]
    fn apply_at_matches_kron() {
        let u = Operator::from_entries(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap(); // σy
        let state = MultiKet::new(
            vec![2, 2],
            vec![c(0.5, 0.0), c(0.1, 0.2), c(-0.3, 0.1), c(0.0, 0.8)],
        )
        .unwrap();
        let via_slot = state.apply_at(1, &u).unwrap();
        let big = Operator::identity(2).unwrap().kron(&u).unwrap();
        let via_kron = big.apply(&state.to_ket()).unwrap();
        assert!(via_slot.to_ket().max_diff(&via_kron) < 1e-15);
    }
}
