//! Lowest eigenpairs of symmetric tridiagonal operators.
//!
//! Eigenvalues come from Sturm-sequence bisection, which needs only the
//! coefficients and O(1) memory, so windows of any size can be solved.
//! Eigenvectors come from inverse iteration seeded at the bisection value.
//! [`DenseEigen`] is an implicit-shift QL solver used as an independent
//! reference on small problems.

use log::warn;

use crate::error::{Error, Result};
use crate::hamiltonian::DENSE_LIMIT;

/// Coefficient access for a real symmetric tridiagonal operator.
///
/// `offdiag(i)` couples rows `i` and `i + 1` and is only queried for
/// `i + 1 < dim()`.
pub trait SymTridiagonal {
    fn dim(&self) -> usize;
    fn diag(&self, i: usize) -> f64;
    fn offdiag(&self, i: usize) -> f64;

    fn offdiag_sq(&self, i: usize) -> f64 {
        let e = self.offdiag(i);
        e * e
    }

    fn max_offdiag_abs(&self) -> f64 {
        (0..self.dim().saturating_sub(1))
            .map(|i| self.offdiag(i).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest and largest diagonal entry.
    fn diag_range(&self) -> (f64, f64) {
        (0..self.dim())
            .map(|i| self.diag(i))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d), hi.max(d)))
    }

    /// Interval containing the whole spectrum.
    fn gershgorin(&self) -> (f64, f64) {
        let (lo, hi) = self.diag_range();
        let e = self.max_offdiag_abs();
        (lo - 2.0 * e, hi + 2.0 * e)
    }
}

/// Materialized symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::domain("diag", "matrix must have at least one row"));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::domain(
                "off",
                format!("expected {} off-diagonal entries, got {}", diag.len() - 1, off.len()),
            ));
        }
        Ok(Tridiagonal { diag, off })
    }

    pub fn from_operator<T: SymTridiagonal + ?Sized>(h: &T) -> Self {
        let n = h.dim();
        Tridiagonal {
            diag: (0..n).map(|i| h.diag(i)).collect(),
            off: (0..n.saturating_sub(1)).map(|i| h.offdiag(i)).collect(),
        }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off
    }

    /// `T·v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        self.diag.iter().map(|d| d * d).sum::<f64>() + 2.0 * self.off.iter().map(|e| e * e).sum::<f64>()
    }
}

impl SymTridiagonal for Tridiagonal {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn diag(&self, i: usize) -> f64 {
        self.diag[i]
    }

    fn offdiag(&self, i: usize) -> f64 {
        self.off[i]
    }
}

/// One eigenvalue with an optional unit eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Half-width of the certified bracket around `value`.
    pub error_bound: f64,
    pub vector: Option<Vec<f64>>,
    /// `‖Hv − Ev‖₂`, when a vector was computed.
    pub residual: Option<f64>,
    /// Set when a neighboring level lies within ten tolerances, so the
    /// vector is poorly determined.
    pub near_degenerate: bool,
}

/// Eigenpairs in ascending order, `E_0 ≤ E_1 ≤ …`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub pairs: Vec<EigenPair>,
    pub dim: usize,
    pub converged: bool,
}

impl Spectrum {
    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Iteration limits for the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub max_bisection_steps: usize,
    pub max_inverse_iterations: usize,
    pub dense_limit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_bisection_steps: 2200,
            max_inverse_iterations: 50,
            dense_limit: DENSE_LIMIT,
        }
    }
}

/// Minimum pivot magnitude used to keep the Sturm recurrence finite.
pub fn pivot_floor<T: SymTridiagonal + ?Sized>(h: &T) -> f64 {
    let e = h.max_offdiag_abs();
    f64::MIN_POSITIVE * (e * e).max(1.0)
}

/// Number of eigenvalues `≤ x` (negative pivots of the LDLᵀ factorization of
/// `T − x·I`).
pub fn sturm_count<T: SymTridiagonal + ?Sized>(h: &T, x: f64, pivmin: f64) -> usize {
    let n = h.dim();
    let mut count = 0;
    let mut q = h.diag(0) - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q <= 0.0 {
        count += 1;
    }
    for i in 1..n {
        q = h.diag(i) - x - h.offdiag_sq(i - 1) / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q <= 0.0 {
            count += 1;
        }
    }
    count
}

fn check_request(dim: usize, k: usize, tol: f64) -> Result<()> {
    if k == 0 || k > dim {
        return Err(Error::domain("k", format!("must be in 1..={dim}, got {k}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tol", format!("must be positive, got {tol}")));
    }
    Ok(())
}

/// Lowest `k` eigenvalues, each within `tol` of the true value.
pub fn lowest_eigenvalues<T: SymTridiagonal + ?Sized>(h: &T, k: usize, tol: f64) -> Result<Spectrum> {
    lowest_eigenvalues_with(h, k, tol, &SolverConfig::default())
}

pub fn lowest_eigenvalues_with<T: SymTridiagonal + ?Sized>(
    h: &T,
    k: usize,
    tol: f64,
    config: &SolverConfig,
) -> Result<Spectrum> {
    let dim = h.dim();
    check_request(dim, k, tol)?;
    let (mut glo, mut ghi) = h.gershgorin();
    let slack = f64::EPSILON * glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE) * 4.0 + f64::MIN_POSITIVE;
    glo -= slack;
    ghi += slack;
    let pivmin = pivot_floor(h);

    // lower[j] has count ≤ j, upper[j] has count ≥ j + 1
    let mut lower = vec![glo; k];
    let mut upper = vec![ghi; k];
    let mut pairs = Vec::with_capacity(k);
    for j in 0..k {
        let mut steps = 0;
        while upper[j] - lower[j] > tol {
            let mid = 0.5 * (lower[j] + upper[j]);
            if mid <= lower[j] || mid >= upper[j] {
                break;
            }
            if steps == config.max_bisection_steps {
                return Err(Error::NoConvergence {
                    what: "bisection bracket",
                    achieved: upper[j] - lower[j],
                    requested: tol,
                });
            }
            steps += 1;
            let count = sturm_count(h, mid, pivmin);
            for jj in j..k {
                if count > jj {
                    upper[jj] = upper[jj].min(mid);
                } else {
                    lower[jj] = lower[jj].max(mid);
                }
            }
        }
        if j + 1 < k {
            lower[j + 1] = lower[j + 1].max(lower[j]);
        }
        pairs.push(EigenPair {
            value: 0.5 * (lower[j] + upper[j]),
            error_bound: 0.5 * (upper[j] - lower[j]),
            vector: None,
            residual: None,
            near_degenerate: false,
        });
    }
    Ok(Spectrum {
        pairs,
        dim,
        converged: true,
    })
}

/// Lowest `k` eigenpairs with unit eigenvectors from inverse iteration.
pub fn lowest_eigenpairs<T: SymTridiagonal + ?Sized>(h: &T, k: usize, tol: f64) -> Result<Spectrum> {
    lowest_eigenpairs_with(h, k, tol, &SolverConfig::default())
}

pub fn lowest_eigenpairs_with<T: SymTridiagonal + ?Sized>(
    h: &T,
    k: usize,
    tol: f64,
    config: &SolverConfig,
) -> Result<Spectrum> {
    let dim = h.dim();
    if dim as u64 > crate::hamiltonian::MATERIALIZE_LIMIT {
        return Err(Error::Capacity {
            dim: dim as u64,
            limit: crate::hamiltonian::MATERIALIZE_LIMIT,
        });
    }
    // one extra level tells whether the last requested one is isolated
    let probe = (k + 1).min(dim);
    let mut spectrum = lowest_eigenvalues_with(h, probe, tol, config)?;
    let t = Tridiagonal::from_operator(h);
    let (glo, ghi) = t.gershgorin();
    let scale = glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
    let values = spectrum.values();

    let mut found: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k);
    for j in 0..k {
        let value = values[j];
        let cluster: Vec<&Vec<f64>> = found
            .iter()
            .filter(|(v, _)| (value - v).abs() < 1e-8 * scale)
            .map(|(_, vec)| vec)
            .collect();
        let (vector, residual) = inverse_iteration(&t, value, j, tol, scale, &cluster, config)?;
        let gap_below = if j > 0 { value - values[j - 1] } else { f64::INFINITY };
        let gap_above = if j + 1 < values.len() {
            values[j + 1] - value
        } else {
            f64::INFINITY
        };
        let near_degenerate = gap_below.min(gap_above) < 10.0 * tol;
        if near_degenerate {
            warn!("level {j} is within 10·tol of a neighbor; its eigenvector is ill-conditioned");
        }
        let pair = &mut spectrum.pairs[j];
        pair.residual = Some(residual);
        pair.near_degenerate = near_degenerate;
        found.push((value, vector.clone()));
        pair.vector = Some(vector);
    }
    spectrum.pairs.truncate(k);
    Ok(spectrum)
}

/// Ground state, sign-normalized so its largest component is positive.
pub fn ground_state<T: SymTridiagonal + ?Sized>(h: &T, tol: f64) -> Result<EigenPair> {
    let mut s = lowest_eigenpairs(h, 1, tol)?;
    Ok(s.pairs.remove(0))
}

/// Tridiagonal LU factors of `T − σI` with partial pivoting.
struct ShiftedLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    l: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &Tridiagonal, sigma: f64, pivmin: f64) -> Self {
        let n = t.diag.len();
        let mut u0: Vec<f64> = t.diag.iter().map(|d| d - sigma).collect();
        let mut u1 = t.off.clone();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut l = vec![0.0; n];
        let mut swapped = vec![false; n];
        for i in 0..n.saturating_sub(1) {
            let sub = t.off[i];
            if u0[i].abs() >= sub.abs() {
                if u0[i] != 0.0 {
                    let fact = sub / u0[i];
                    l[i] = fact;
                    u0[i + 1] -= fact * u1[i];
                }
            } else {
                let fact = u0[i] / sub;
                u0[i] = sub;
                l[i] = fact;
                let temp = u1[i];
                u1[i] = u0[i + 1];
                u0[i + 1] = temp - fact * u0[i + 1];
                if i + 2 < n {
                    u2[i] = u1[i + 1];
                    u1[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for u in &mut u0 {
            if u.abs() < pivmin {
                *u = if *u < 0.0 { -pivmin } else { pivmin };
            }
        }
        ShiftedLu { u0, u1, u2, l, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.l[i] * b[i];
            } else {
                b[i + 1] -= self.l[i] * b[i];
            }
        }
        b[n - 1] /= self.u0[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.u1[n - 2] * b[n - 1]) / self.u0[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.u1[i] * b[i + 1] - self.u2[i] * b[i + 2]) / self.u0[i];
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) {
    let n = norm2(v);
    v.iter_mut().for_each(|x| *x /= n);
}

fn residual(t: &Tridiagonal, value: f64, v: &[f64]) -> f64 {
    let hv = t.apply(v);
    hv.iter()
        .zip(v)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn inverse_iteration(
    t: &Tridiagonal,
    value: f64,
    level: usize,
    tol: f64,
    scale: f64,
    cluster: &[&Vec<f64>],
    config: &SolverConfig,
) -> Result<(Vec<f64>, f64)> {
    let n = t.diag.len();
    if n == 1 {
        return Ok((vec![1.0], 0.0));
    }
    let pivmin = f64::EPSILON * scale;
    let lu = ShiftedLu::factor(t, value, pivmin);
    // ground state: the all-ones start overlaps the positive Perron vector
    let mut v: Vec<f64> = if level == 0 {
        vec![1.0; n]
    } else {
        let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ level as u64;
        (0..n)
            .map(|_| {
                state = state
                    .wrapping_mul(6_364_136_223_846_793_005)
                    .wrapping_add(1_442_695_040_888_963_407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect()
    };
    normalize(&mut v);
    let target = tol.max(64.0 * f64::EPSILON * scale);
    let mut settled = 0;
    let mut last = f64::INFINITY;
    for _ in 0..config.max_inverse_iterations {
        lu.solve(&mut v);
        for q in cluster {
            let dot: f64 = v.iter().zip(q.iter()).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q.iter()).for_each(|(a, b)| *a -= dot * b);
        }
        normalize(&mut v);
        last = residual(t, value, &v);
        if last <= target {
            settled += 1;
            if settled == 2 {
                break;
            }
        }
    }
    if last > target {
        return Err(Error::NoConvergence {
            what: "inverse iteration residual",
            achieved: last,
            requested: target,
        });
    }
    let pivot = v.iter().fold(0.0f64, |m, x| if x.abs() > m.abs() { *x } else { m });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok((v, last))
}

/// Givens rotation applied by the QL sweep to columns `i, i + 1`.
#[derive(Debug, Clone, Copy)]
struct Rotation {
    i: u32,
    c: f64,
    s: f64,
}

/// Full eigendecomposition by implicit-shift QL.
///
/// With rotation recording enabled, any single eigenvector can be
/// reconstructed in O(rotations) without accumulating the full basis.
#[derive(Debug, Clone)]
pub struct DenseEigen {
    /// Eigenvalues in the order the QL sweep leaves them.
    raw: Vec<f64>,
    /// `order[j]` is the raw index of the `j`th smallest eigenvalue.
    order: Vec<usize>,
    rotations: Option<Vec<Rotation>>,
}

impl DenseEigen {
    pub fn compute<T: SymTridiagonal + ?Sized>(h: &T, record_rotations: bool, limit: usize) -> Result<Self> {
        let n = h.dim();
        if n > limit {
            return Err(Error::Capacity {
                dim: n as u64,
                limit: limit as u64,
            });
        }
        let mut rotations = record_rotations.then(Vec::new);
        let raw = tql(h, |rot| {
            if let Some(r) = rotations.as_mut() {
                r.push(rot);
            }
        })?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]).then(a.cmp(&b)));
        Ok(DenseEigen { raw, order, rotations })
    }

    /// Ascending eigenvalues.
    pub fn values(&self) -> Vec<f64> {
        self.order.iter().map(|&i| self.raw[i]).collect()
    }

    /// Unit eigenvector of the `j`th smallest eigenvalue, largest component
    /// positive. Requires rotation recording.
    pub fn vector(&self, j: usize) -> Option<Vec<f64>> {
        let rotations = self.rotations.as_ref()?;
        let mut v = vec![0.0; self.raw.len()];
        v[*self.order.get(j)?] = 1.0;
        for r in rotations.iter().rev() {
            let i = r.i as usize;
            let (a, b) = (v[i], v[i + 1]);
            v[i] = r.c * a + r.s * b;
            v[i + 1] = -r.s * a + r.c * b;
        }
        let pivot = v.iter().fold(0.0f64, |m, x| if x.abs() > m.abs() { *x } else { m });
        if pivot < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Some(v)
    }
}

/// Implicit QL with Wilkinson-style shifts; reports every rotation.
fn tql<T: SymTridiagonal + ?Sized>(h: &T, mut on_rotation: impl FnMut(Rotation)) -> Result<Vec<f64>> {
    let n = h.dim();
    let mut d: Vec<f64> = (0..n).map(|i| h.diag(i)).collect();
    let mut e: Vec<f64> = (0..n).map(|i| if i + 1 < n { h.offdiag(i) } else { 0.0 }).collect();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence {
                    what: "QL sweep",
                    achieved: e[l].abs(),
                    requested: f64::EPSILON * (d[l].abs() + d[l + 1].abs()),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                on_rotation(Rotation { i: i as u32, c, s });
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

/// All eigenvalues, ascending, by dense QL.
pub fn dense_eigenvalues<T: SymTridiagonal + ?Sized>(h: &T) -> Result<Vec<f64>> {
    Ok(DenseEigen::compute(h, false, DENSE_LIMIT)?.values())
}

/// Full spectrum with eigenvectors by dense QL.
pub fn dense_all<T: SymTridiagonal + ?Sized>(h: &T) -> Result<Spectrum> {
    dense_all_with_limit(h, DENSE_LIMIT)
}

pub fn dense_all_with_limit<T: SymTridiagonal + ?Sized>(h: &T, limit: usize) -> Result<Spectrum> {
    let n = h.dim();
    if n > limit {
        return Err(Error::Capacity {
            dim: n as u64,
            limit: limit as u64,
        });
    }
    let t = Tridiagonal::from_operator(h);
    let n = t.diag.len();
    // accumulate Z with rows as eigenvector columns so each rotation touches two contiguous rows
    let mut zt = vec![0.0; n * n];
    for i in 0..n {
        zt[i * n + i] = 1.0;
    }
    let raw = tql(&t, |rot| {
        let i = rot.i as usize;
        let (head, tail) = zt.split_at_mut((i + 1) * n);
        let zi = &mut head[i * n..];
        let zj = &mut tail[..n];
        for (a, b) in zi.iter_mut().zip(zj.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = rot.c * x - rot.s * y;
            *b = rot.s * x + rot.c * y;
        }
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]).then(a.cmp(&b)));
    let pairs = order
        .iter()
        .map(|&q| {
            let mut v = zt[q * n..(q + 1) * n].to_vec();
            let pivot = v.iter().fold(0.0f64, |m, x| if x.abs() > m.abs() { *x } else { m });
            if pivot < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            let res = residual(&t, raw[q], &v);
            EigenPair {
                value: raw[q],
                error_bound: res,
                vector: Some(v),
                residual: Some(res),
                near_degenerate: false,
            }
        })
        .collect();
    Ok(Spectrum {
        pairs,
        dim: n,
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build;
    use crate::model::CircuitParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spin_half() -> Tridiagonal {
        Tridiagonal::new(vec![0.25, 0.25], vec![-1.0]).unwrap()
    }

    #[test]
    fn two_by_two_closed_form() {
        let s = lowest_eigenvalues(&spin_half(), 2, 1e-14).unwrap();
        assert!((s.values()[0] + 0.75).abs() < 1e-14);
        assert!((s.values()[1] - 1.25).abs() < 1e-14);
        let d = dense_all(&spin_half()).unwrap();
        assert!((d.values()[0] + 0.75).abs() < 1e-15);
        assert!((d.values()[1] - 1.25).abs() < 1e-15);
    }

    #[test]
    fn ground_state_of_symmetric_pair() {
        let g = ground_state(&spin_half(), 1e-14).unwrap();
        let v = g.vector.unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0] - h).abs() < 1e-12 && (v[1] - h).abs() < 1e-12);
        assert!((g.value + 0.75).abs() < 1e-14);
        assert!(g.residual.unwrap() < 1e-13);
    }

    #[test]
    fn request_validation() {
        let t = spin_half();
        assert!(lowest_eigenvalues(&t, 0, 1e-12).is_err());
        assert!(lowest_eigenvalues(&t, 3, 1e-12).is_err());
        assert!(lowest_eigenvalues(&t, 1, 0.0).is_err());
        assert!(Tridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
    }

    #[test]
    fn iteration_cap_reports_bracket() {
        let p = CircuitParams::from_ratio(1.0, 0.3, 20).unwrap();
        let h = build(&p).unwrap();
        let config = SolverConfig {
            max_bisection_steps: 3,
            ..SolverConfig::default()
        };
        match lowest_eigenvalues_with(&h, 1, 1e-12, &config) {
            Err(Error::NoConvergence { achieved, .. }) => assert!(achieved > 1e-12),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn dense_capacity() {
        let p = CircuitParams::from_ratio(1.0, 0.0, 5000).unwrap();
        assert!(matches!(dense_all(&build(&p).unwrap()), Err(Error::Capacity { .. })));
    }

    fn random_params(rng: &mut ChaCha8Rng, max_pairs: u64) -> CircuitParams {
        let pairs = rng.gen_range(1..=max_pairs);
        let ratio = 10f64.powf(rng.gen_range(-2.0..2.0));
        let n = pairs as f64 / 2.0;
        let ng = rng.gen_range(-n - 3.0..n + 3.0);
        CircuitParams::from_ratio(ratio, ng, pairs).unwrap()
    }

    #[test]
    fn trace_and_frobenius_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let p = random_params(&mut rng, 300);
            let t = build(&p).unwrap().materialize().unwrap();
            let values = dense_eigenvalues(&t).unwrap();
            let trace: f64 = values.iter().sum();
            let expected: f64 = (0..t.dim())
                .map(|j| p.e_c * (build(&p).unwrap().charge(j) - p.n_g).powi(2))
                .sum();
            assert!(((trace - expected) / expected).abs() < 1e-10);
            let fro: f64 = values.iter().map(|v| v * v).sum();
            assert!(((fro - t.frobenius_sq()) / t.frobenius_sq()).abs() < 1e-10);
        }
    }

    #[test]
    fn bisection_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let p = random_params(&mut rng, 400);
            let h = build(&p).unwrap();
            let k = h.dim().min(6);
            let s = lowest_eigenvalues(&h, k, 1e-13).unwrap();
            let d = dense_eigenvalues(&h).unwrap();
            for (a, b) in s.values().iter().zip(&d) {
                assert!((a - b).abs() <= 1e-10 * b.abs().max(p.e_c), "{p}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn sturm_certificate_brackets_each_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let p = random_params(&mut rng, 200);
            let h = build(&p).unwrap();
            let tol = 1e-9;
            let k = h.dim().min(5);
            let s = lowest_eigenvalues(&h, k, tol).unwrap();
            let pivmin = pivot_floor(&h);
            for (j, e) in s.values().iter().enumerate() {
                assert!(sturm_count(&h, e + tol, pivmin) > j);
                assert!(sturm_count(&h, e - tol, pivmin) <= j);
            }
        }
    }

    #[test]
    fn prefix_property() {
        let p = CircuitParams::from_ratio(0.2, 2.3, 10).unwrap();
        let h = build(&p).unwrap();
        for k in 1..h.dim() {
            let a = lowest_eigenvalues(&h, k, 1e-14).unwrap().values();
            let b = lowest_eigenvalues(&h, k + 1, 1e-14).unwrap().values();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vectors_match_dense_and_are_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let p = random_params(&mut rng, 300);
            let h = build(&p).unwrap();
            let g = ground_state(&h, 1e-13).unwrap();
            let v = g.vector.as_ref().unwrap();
            assert!((norm2(v) - 1.0).abs() < 1e-12);
            assert!(v.iter().all(|x| *x > 0.0), "{p}: ground vector not positive");
            let dense = DenseEigen::compute(&h, true, DENSE_LIMIT).unwrap();
            let w = dense.vector(0).unwrap();
            let overlap: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
            assert!(overlap.abs() > 1.0 - 1e-10, "{p}: overlap {overlap}");
        }
    }

    #[test]
    fn excited_vectors_orthonormal() {
        let p = CircuitParams::from_ratio(3.0, 0.4, 40).unwrap();
        let h = build(&p).unwrap();
        let s = lowest_eigenpairs(&h, 4, 1e-13).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let va = s.pairs[a].vector.as_ref().unwrap();
                let vb = s.pairs[b].vector.as_ref().unwrap();
                let dot: f64 = va.iter().zip(vb).map(|(x, y)| x * y).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-10);
            }
            assert!(s.pairs[a].residual.unwrap() < 1e-11);
        }
    }

    #[test]
    fn recorded_rotations_reproduce_accumulated_vectors() {
        let p = CircuitParams::from_ratio(1.5, 0.7, 30).unwrap();
        let h = build(&p).unwrap();
        let full = dense_all(&h).unwrap();
        let lazy = DenseEigen::compute(&h, true, DENSE_LIMIT).unwrap();
        for j in [0, 1, 7, 30] {
            let a = full.pairs[j].vector.as_ref().unwrap();
            let b = lazy.vector(j).unwrap();
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
        }
        assert!(DenseEigen::compute(&h, false, DENSE_LIMIT).unwrap().vector(0).is_none());
    }

    #[test]
    fn degenerate_blocks_are_handled() {
        // two decoupled identical blocks: every level doubly degenerate
        let t = Tridiagonal::new(vec![1.0, 2.0, 1.0, 2.0], vec![-0.5, 0.0, -0.5]).unwrap();
        let s = lowest_eigenpairs(&t, 2, 1e-13).unwrap();
        assert!((s.values()[0] - s.values()[1]).abs() < 1e-12);
        assert!(s.pairs[0].near_degenerate);
        let va = s.pairs[0].vector.as_ref().unwrap();
        let vb = s.pairs[1].vector.as_ref().unwrap();
        let dot: f64 = va.iter().zip(vb).map(|(x, y)| x * y).sum();
        assert!(dot.abs() < 1e-8);
    }
}
