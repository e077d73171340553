//! Dense complex linear algebra sized for two-qubit work: Kronecker
//! products, LU-based solves and determinants, and a Hermitian
//! eigendecomposition. Everything is row-major `Complex64`.

use num_complex::Complex64;

use crate::error::{DcqdError, Result};

/// Relative pivot threshold below which a solve reports `SingularMatrix`.
pub const SINGULAR_PIVOT_RELATIVE: f64 = 1e-12;
/// Largest tolerated `max|a - a^dagger|` entry for the eigendecomposition.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// `sigma_min / sigma_max` below this reports an infinite condition number.
pub const COND_SENTINEL_RATIO: f64 = 1e-14;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Build from nested rows; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let nrows = rows.len();
        let ncols = if nrows == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let converted: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// Kronecker product; dimensions multiply.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self[(ar, ac)];
                if a == ZERO {
                    continue;
                }
                for br in 0..other.rows {
                    for bc in 0..other.cols {
                        out[(ar * other.rows + br, ac * other.cols + bc)] = a * other[(br, bc)];
                    }
                }
            }
        }
        out
    }

    /// Nearest Hermitian matrix, `(a + a^dagger) / 2`.
    pub fn hermitize(&self) -> Self {
        self.add(&self.dagger()).scale(Complex64::new(0.5, 0.0))
    }

    /// `max|a - a^dagger|` entrywise.
    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.dagger()).max_abs()
    }

    fn lu_factor(&self) -> LuFactors {
        let n = self.rows;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = lu[(col, col)].norm();
            for r in col + 1..n {
                let mag = lu[(r, col)].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_row != col {
                for c in 0..n {
                    let tmp = lu[(col, c)];
                    lu[(col, c)] = lu[(pivot_row, c)];
                    lu[(pivot_row, c)] = tmp;
                }
                perm.swap(col, pivot_row);
                sign = -sign;
            }
            let pivot = lu[(col, col)];
            if pivot == ZERO {
                continue;
            }
            for r in col + 1..n {
                let factor = lu[(r, col)] / pivot;
                lu[(r, col)] = factor;
                for c in col + 1..n {
                    let sub = factor * lu[(col, c)];
                    lu[(r, c)] -= sub;
                }
            }
        }
        LuFactors {
            lu,
            perm,
            sign,
            scale: self.max_abs(),
        }
    }

    /// Determinant via partial-pivot LU; 0 for singular input.
    pub fn det(&self) -> Complex64 {
        assert!(self.is_square(), "determinant of non-square matrix");
        if self.rows == 0 {
            return ONE;
        }
        let f = self.lu_factor();
        let mut det = Complex64::new(f.sign, 0.0);
        for i in 0..self.rows {
            det *= f.lu[(i, i)];
        }
        det
    }

    /// Solve `a x = b` by LU with partial pivoting.
    ///
    /// Reports `SingularMatrix` when a pivot falls below
    /// `SINGULAR_PIVOT_RELATIVE` times the largest entry magnitude of `a`.
    pub fn lu_solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        if !self.is_square() {
            return Err(DcqdError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if b.len() != self.rows {
            return Err(DcqdError::DimensionMismatch {
                expected: self.rows,
                actual: b.len(),
            });
        }
        let n = self.rows;
        let f = self.lu_factor();
        let threshold = SINGULAR_PIVOT_RELATIVE * f.scale;
        for i in 0..n {
            if f.lu[(i, i)].norm() <= threshold {
                return Err(DcqdError::SingularMatrix { pivot: i });
            }
        }
        // forward substitution on the permuted right-hand side
        let mut y = vec![ZERO; n];
        for r in 0..n {
            let mut acc = b[f.perm[r]];
            for (c, yc) in y.iter().enumerate().take(r) {
                acc -= f.lu[(r, c)] * yc;
            }
            y[r] = acc;
        }
        // back substitution
        let mut x = vec![ZERO; n];
        for r in (0..n).rev() {
            let mut acc = y[r];
            for (c, xc) in x.iter().enumerate().take(n).skip(r + 1) {
                acc -= f.lu[(r, c)] * xc;
            }
            x[r] = acc / f.lu[(r, r)];
        }
        Ok(x)
    }

    /// Solve `a X = B` column by column.
    pub fn lu_solve_matrix(&self, b: &Self) -> Result<Self> {
        assert_eq!(self.rows, b.rows);
        let mut out = Self::zeros(b.rows, b.cols);
        for c in 0..b.cols {
            let col: Vec<Complex64> = (0..b.rows).map(|r| b[(r, c)]).collect();
            let x = self.lu_solve(&col)?;
            for r in 0..b.rows {
                out[(r, c)] = x[r];
            }
        }
        Ok(out)
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Returns eigenvalues sorted descending and the matching eigenvector
    /// columns. Reports `NotHermitian` when `max|a - a^dagger| > 1e-10`.
    pub fn eig_hermitian(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_square() {
            return Err(DcqdError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let residual = self.hermiticity_residual();
        if residual > HERMITIAN_TOL {
            return Err(DcqdError::NotHermitian { residual });
        }
        let n = self.rows;
        let mut a = self.hermitize();
        let mut v = Self::identity(n);
        let scale = a.max_abs();
        if scale == 0.0 {
            return Ok((vec![0.0; n], v));
        }
        let target = 1e-14 * scale;
        for _sweep in 0..60 {
            let mut off = 0.0_f64;
            for p in 0..n {
                for q in p + 1..n {
                    off = off.max(a[(p, q)].norm());
                }
            }
            if off <= target {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let g = apq.norm();
                    if g <= target * 1e-2 {
                        continue;
                    }
                    let phase = apq / g;
                    let alpha = a[(p, p)].re;
                    let beta = a[(q, q)].re;
                    let tau = (beta - alpha) / (2.0 * g);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // column update: new p = c*p - s*conj(phase)... the
                    // unitary is U = [[c, s*phase],[-s*conj(phase)... kept
                    // explicit below to match U = diag(1, e^{-i phi}) R.
                    let up_q = Complex64::new(s, 0.0);
                    let uq_p = -Complex64::new(s, 0.0) * phase.conj();
                    let uq_q = Complex64::new(c, 0.0) * phase.conj();
                    let up_p = Complex64::new(c, 0.0);
                    for r in 0..n {
                        let arp = a[(r, p)];
                        let arq = a[(r, q)];
                        a[(r, p)] = arp * up_p + arq * uq_p;
                        a[(r, q)] = arp * up_q + arq * uq_q;
                    }
                    for col in 0..n {
                        let apc = a[(p, col)];
                        let aqc = a[(q, col)];
                        a[(p, col)] = up_p.conj() * apc + uq_p.conj() * aqc;
                        a[(q, col)] = up_q.conj() * apc + uq_q.conj() * aqc;
                    }
                    for r in 0..n {
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = vrp * up_p + vrq * uq_p;
                        v[(r, q)] = vrp * up_q + vrq * uq_q;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        order.sort_by(|&i, &j| eigs[j].partial_cmp(&eigs[i]).unwrap());
        let sorted: Vec<f64> = order.iter().map(|&i| eigs[i]).collect();
        let vectors = Self::from_fn(n, n, |r, c| v[(r, order[c])]);
        Ok((sorted, vectors))
    }

    /// 2-norm condition number `sigma_max / sigma_min` via Gram-matrix
    /// eigenvalues. `sigma_max` comes from `a^dagger a`; `sigma_min` from
    /// the top singular value of the LU inverse, because the small end of
    /// the squared spectrum drowns in rounding once the ratio passes ~1e-8.
    ///
    /// Returns `f64::INFINITY` when `sigma_min < 1e-14 * sigma_max` or the
    /// matrix does not factor.
    pub fn condition_number(&self) -> f64 {
        assert!(self.is_square(), "condition number of non-square matrix");
        if self.rows == 0 || self.max_abs() == 0.0 {
            return f64::INFINITY;
        }
        let gram = self.dagger().mul(self).hermitize();
        let (eigs, _) = gram
            .eig_hermitian()
            .expect("a^dagger a is Hermitian by construction");
        let sigma_max = eigs[0].max(0.0).sqrt();
        let inverse = match self.lu_solve_matrix(&Self::identity(self.rows)) {
            Ok(inv) => inv,
            Err(_) => return f64::INFINITY,
        };
        let gram_inv = inverse.dagger().mul(&inverse).hermitize();
        let (eigs_inv, _) = gram_inv
            .eig_hermitian()
            .expect("gram of the inverse is Hermitian");
        let sigma_max_inv = eigs_inv[0].max(0.0).sqrt();
        if sigma_max_inv == 0.0 {
            return f64::INFINITY;
        }
        let sigma_min = 1.0 / sigma_max_inv;
        if sigma_min < COND_SENTINEL_RATIO * sigma_max {
            f64::INFINITY
        } else {
            sigma_max * sigma_max_inv
        }
    }
}

struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
    scale: f64,
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
