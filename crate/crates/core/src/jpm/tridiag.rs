//! Lowest eigenpairs of a real symmetric tridiagonal matrix with constant
//! off-diagonal, by Sturm-sequence bisection and inverse iteration.

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let off2 = off * off;
    let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + off.abs());
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for &d in &diag[1..] {
        if q == 0.0 {
            q = tiny;
        }
        q = d - x - off2 / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the spectrum.
fn bounds(diag: &[f64], off: f64) -> (f64, f64) {
    let r = 2.0 * off.abs();
    let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min) - r;
    let hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + r;
    (lo, hi)
}

/// The `k` lowest eigenvalues in ascending order.
pub fn lowest_eigenvalues(diag: &[f64], off: f64, k: usize) -> Vec<f64> {
    let (lo0, hi0) = bounds(diag, off);
    let scale = lo0.abs().max(hi0.abs());
    let mut out = Vec::with_capacity(k);
    let mut floor = lo0;
    for i in 0..k.min(diag.len()) {
        let (mut lo, mut hi) = (floor, hi0);
        // Bisection until the bracket hits machine resolution.
        loop {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * scale || mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(diag, off, mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lam = 0.5 * (lo + hi);
        out.push(lam);
        floor = lo;
    }
    out
}

/// LU factorisation with partial pivoting of `T − λ`, solved in place.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn new(diag: &[f64], off: f64, shift: f64, pivot_floor: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|x| x - shift).collect();
        let mut dl = vec![off; n - 1];
        let mut du = vec![off; n - 1];
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = pivot_floor;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = pivot_floor;
        }
        ShiftedLu {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Unit eigenvectors for the given eigenvalues (ascending).
///
/// Vectors whose eigenvalues sit within `cluster_gap` of a neighbour are
/// re-orthogonalised against the rest of their cluster on every sweep.
pub fn eigenvectors(
    diag: &[f64],
    off: f64,
    values: &[f64],
    cluster_gap: impl Fn(f64) -> f64,
) -> Vec<Vec<f64>> {
    let n = diag.len();
    let (lo, hi) = bounds(diag, off);
    let pivot_floor = f64::EPSILON * lo.abs().max(hi.abs());
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    let mut cluster_start = 0;
    for (i, &lam) in values.iter().enumerate() {
        if i > 0 && lam - values[i - 1] > cluster_gap(lam) {
            cluster_start = i;
        }
        let lu = ShiftedLu::new(diag, off, lam, pivot_floor);
        // Deterministic, non-degenerate start vector.
        let mut v: Vec<f64> = (0..n)
            .map(|j| {
                1.0 + 0.5 * ((j as f64 + 1.0) * 0.618_033_988_749_895 * (i as f64 + 1.0)).sin()
            })
            .collect();
        normalize(&mut v);
        for _ in 0..4 {
            lu.solve(&mut v);
            for prev in &out[cluster_start..i] {
                let c = dot(&v, prev);
                v.iter_mut().zip(prev).for_each(|(x, p)| *x -= c * p);
            }
            normalize(&mut v);
        }
        // Fix the sign: the largest component is positive.
        let big = v
            .iter()
            .cloned()
            .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if big < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_particle_in_box() {
        // diag 2, off −1: eigenvalues 2 − 2cos(kπ/(n+1)).
        let n = 400;
        let diag = vec![2.0; n];
        let vals = lowest_eigenvalues(&diag, -1.0, 10);
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k as f64 + 1.0) * PI / (n as f64 + 1.0)).cos();
            assert!((v - exact).abs() < 1e-13, "{k}: {v} vs {exact}");
        }
        let vecs = eigenvectors(&diag, -1.0, &vals, |_| 1e-3);
        for a in 0..vals.len() {
            for b in 0..vals.len() {
                let o = dot(&vecs[a], &vecs[b]);
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((o - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sturm_count_matches_enumeration() {
        let diag: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let vals = lowest_eigenvalues(&diag, 0.8, 50);
        for (i, v) in vals.iter().enumerate() {
            assert_eq!(sturm_count(&diag, 0.8, v - 1e-9), i);
        }
    }
}
