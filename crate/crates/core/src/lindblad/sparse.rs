//! Compressed-row complex matrices, just enough algebra to assemble
//! Hamiltonians and collapse operators on a tensor-product space.

use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

impl Operator {
    /// From `(row, col, value)` triplets; duplicates are summed and exact
    /// zeros dropped.
    pub fn from_triplets(dim: usize, mut entries: Vec<(usize, usize, Complex64)>) -> Self {
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            assert!(
                r < dim && c < dim,
                "entry ({r}, {c}) outside dimension {dim}"
            );
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| e.2 != ZERO);
        let mut indptr = vec![0; dim + 1];
        for &(r, _, _) in &merged {
            indptr[r + 1] += 1;
        }
        for i in 0..dim {
            indptr[i + 1] += indptr[i];
        }
        Operator {
            dim,
            indptr,
            indices: merged.iter().map(|e| e.1).collect(),
            values: merged.iter().map(|e| e.2).collect(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_triplets(dim, Vec::new())
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, ONE)).collect())
    }

    /// Bosonic annihilation operator truncated to `dim` Fock states.
    pub fn destroy(dim: usize) -> Self {
        Self::from_triplets(
            dim,
            (1..dim)
                .map(|n| (n - 1, n, Complex64::new((n as f64).sqrt(), 0.0)))
                .collect(),
        )
    }

    /// `|i⟩⟨j|`.
    pub fn transition(dim: usize, i: usize, j: usize) -> Self {
        Self::from_triplets(dim, vec![(i, j, ONE)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.indptr[r]..self.indptr[r + 1]).map(move |k| (r, self.indices[k], self.values[k]))
        })
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        (self.indptr[r]..self.indptr[r + 1])
            .find(|&k| self.indices[k] == c)
            .map_or(ZERO, |k| self.values[k])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.dim,
            self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_triplets(
            self.dim,
            self.triplets().map(|(r, c, v)| (r, c, v * s)).collect(),
        )
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self::from_triplets(self.dim, self.triplets().chain(other.triplets()).collect())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Vec::new();
        for (r, k, a) in self.triplets() {
            for idx in other.indptr[k]..other.indptr[k + 1] {
                out.push((r, other.indices[idx], a * other.values[idx]));
            }
        }
        Self::from_triplets(self.dim, out)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let d = other.dim;
        let mut out = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, a) in self.triplets() {
            for (r2, c2, b) in other.triplets() {
                out.push((r1 * d + r2, c1 * d + c2, a * b));
            }
        }
        Self::from_triplets(self.dim * d, out)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        self.triplets()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `out = self · x` for column-major `dim × dim` dense `x`.
    pub fn mul_dense(&self, x: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        for j in 0..d {
            let col = &x[j * d..(j + 1) * d];
            let dst = &mut out[j * d..(j + 1) * d];
            for r in 0..d {
                let mut acc = ZERO;
                for k in self.indptr[r]..self.indptr[r + 1] {
                    acc += self.values[k] * col[self.indices[k]];
                }
                dst[r] = acc;
            }
        }
    }

    /// `out += s · self · x`.
    pub fn mul_dense_add(&self, s: Complex64, x: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        for j in 0..d {
            let col = &x[j * d..(j + 1) * d];
            let dst = &mut out[j * d..(j + 1) * d];
            for r in 0..d {
                let mut acc = ZERO;
                for k in self.indptr[r]..self.indptr[r + 1] {
                    acc += self.values[k] * col[self.indices[k]];
                }
                dst[r] += s * acc;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_commutator_below_cutoff() {
        let a = Operator::destroy(5);
        let comm = a
            .matmul(&a.adjoint())
            .add(&a.adjoint().matmul(&a).scale_re(-1.0));
        for i in 0..4 {
            assert!((comm.get(i, i) - ONE).norm() < 1e-14);
        }
        // The truncation shows up only in the last level.
        assert!((comm.get(4, 4) + Complex64::new(4.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn kron_matches_dense() {
        let a = Operator::destroy(3);
        let b = Operator::transition(2, 0, 1)
            .add(&Operator::identity(2).scale(Complex64::new(0.0, 0.5)));
        let k = a.kron(&b).to_dense();
        let (da, db) = (a.to_dense(), b.to_dense());
        for r in 0..6 {
            for c in 0..6 {
                assert_eq!(k[(r, c)], da[(r / 2, c / 2)] * db[(r % 2, c % 2)]);
            }
        }
    }

    #[test]
    fn dense_product_matches() {
        let a = Operator::destroy(4)
            .add(&Operator::transition(4, 3, 0).scale(Complex64::new(0.0, 2.0)));
        let x = DMatrix::from_fn(4, 4, |r, c| Complex64::new(r as f64 + 0.5, c as f64 - 1.0));
        let mut out = vec![ZERO; 16];
        a.mul_dense(x.as_slice(), &mut out);
        let want = a.to_dense() * &x;
        for (p, q) in out.iter().zip(want.as_slice()) {
            assert!((p - q).norm() < 1e-13);
        }
    }
}
