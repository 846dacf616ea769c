//! Eigenvalues, the spectral radius, and its trace-moment / operator-norm
//! upper bounds.
//!
//! The dense eigensolver is a backward-stable Hessenberg/Schur reduction
//! (provided by `faer`); everything layered on top — the bound chain, the
//! scaled matrix powers, the tail estimate — is computed here.

use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::ensemble::CMatrix;
use crate::error::{Error, Result};

/// Dense eigensolves above this dimension are refused; use the bounds instead.
pub const EIG_DIM_CAP: usize = 4096;

/// Entry-magnitude window kept during matrix powering; outside it the matrix
/// is renormalized and the log of the scale is accumulated.
const POWER_RESCALE_HI: f64 = 1e100;
const POWER_RESCALE_LO: f64 = 1e-100;

/// Power-iteration bracket tolerance.
const POWER_ITER_TOL: f64 = 1e-10;
/// Rayleigh-quotient relative-change stagnation threshold, held for three
/// consecutive iterations.
const POWER_ITER_STAGNATION: f64 = 1e-12;
const POWER_ITER_MAX: usize = 20_000;

/// All n eigenvalues of a realization; `scaled` marks division by sqrt(n).
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub n: usize,
    pub scaled: bool,
}

impl Spectrum {
    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues sorted by (re, im), for multiset comparisons.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }
}

/// The spectral radius together with its stored upper bounds.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusBounds {
    pub rho_exact: Option<f64>,
    pub trace_bound_k: BTreeMap<u32, f64>,
    pub power_bound_m: BTreeMap<u32, f64>,
}

#[derive(Serialize)]
struct BoundRow<'a> {
    kind: &'a str,
    k_or_m: u32,
    value: f64,
}

impl RadiusBounds {
    /// True when every stored bound dominates `rho_exact` within
    /// `1e-9 * scale`, `scale = sqrt(n) * max(1, max|X_ij|)`.
    pub fn dominance_holds(&self, scale: f64) -> bool {
        let rho = match self.rho_exact {
            Some(r) => r,
            None => return true,
        };
        let slack = 1e-9 * scale;
        self.trace_bound_k.values().all(|&b| rho <= b + slack)
            && self.power_bound_m.values().all(|&b| rho <= b + slack)
    }

    /// Export shape: `{"rho": ..., "bounds": [{"kind", "k_or_m", "value"}]}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Export<'a> {
            rho: Option<f64>,
            bounds: Vec<BoundRow<'a>>,
        }
        let mut bounds = Vec::new();
        for (&k, &v) in &self.trace_bound_k {
            bounds.push(BoundRow {
                kind: "trace_moment",
                k_or_m: k,
                value: v,
            });
        }
        for (&m, &v) in &self.power_bound_m {
            bounds.push(BoundRow {
                kind: "power_norm",
                k_or_m: m,
                value: v,
            });
        }
        serde_json::to_string_pretty(&Export {
            rho: self.rho_exact,
            bounds,
        })
        .expect("bounds serialize")
    }
}

fn to_faer(x: &CMatrix) -> Mat<Complex64> {
    let n = x.n();
    Mat::from_fn(n, n, |i, j| x.get(i, j))
}

/// All eigenvalues of the (generally non-normal) matrix.
///
/// Sanity contract: the eigenvalue sum must match the trace within
/// `1e-8 * n * max|X_ij|`, else the solve is rejected as numerical failure.
pub fn eigenvalues(x: &CMatrix) -> Result<Spectrum> {
    let n = x.n();
    if n > EIG_DIM_CAP {
        return Err(Error::Unsupported(format!(
            "dense eigensolver capped at n = {EIG_DIM_CAP}, got {n}"
        )));
    }
    let mat = to_faer(x);
    let eigenvalues: Vec<Complex64> = mat.eigenvalues().map_err(|e| Error::Numerical {
        op: "eigenvalues",
        iterations: 30 * n, // QR sweep budget used by the backend
        detail: format!("{e:?}"),
    })?;
    let sum: Complex64 = eigenvalues.iter().sum();
    let trace = x.trace();
    let tol = 1e-8 * n as f64 * x.max_abs();
    if (sum - trace).norm() > tol {
        return Err(Error::Numerical {
            op: "eigenvalues",
            iterations: 30 * n,
            detail: format!(
                "eigenvalue sum {sum} disagrees with trace {trace} beyond {tol:e}"
            ),
        });
    }
    Ok(Spectrum {
        eigenvalues,
        n,
        scaled: false,
    })
}

/// `max |lambda|` over the spectrum.
pub fn spectral_radius(x: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(x)?.max_modulus())
}

/// Eigenvalues of `X / sqrt(n)` — the empirical spectral distribution points.
pub fn esd(x: &CMatrix) -> Result<Spectrum> {
    let mut s = eigenvalues(x)?;
    let scale = 1.0 / (s.n as f64).sqrt();
    for z in &mut s.eigenvalues {
        *z *= scale;
    }
    s.scaled = true;
    Ok(s)
}

/// Number of eigenvalues with modulus strictly greater than `radius`.
pub fn outlier_count(spectrum: &Spectrum, radius: f64) -> usize {
    spectrum
        .eigenvalues
        .iter()
        .filter(|z| z.norm() > radius)
        .count()
}

/// Matrix power with running renormalization: tracks `exp(ln_scale) * m`.
struct ScaledMat {
    m: Mat<Complex64>,
    ln_scale: f64,
}

impl ScaledMat {
    fn renorm(&mut self) -> Result<()> {
        let mut a: f64 = 0.0;
        for j in 0..self.m.ncols() {
            for i in 0..self.m.nrows() {
                a = a.max(self.m[(i, j)].norm());
            }
        }
        if !a.is_finite() {
            return Err(Error::Numerical {
                op: "matrix_power",
                iterations: 0,
                detail: "non-finite entries during powering; evaluate in log domain".into(),
            });
        }
        if a > POWER_RESCALE_HI || (a > 0.0 && a < POWER_RESCALE_LO) {
            let inv = 1.0 / a;
            for j in 0..self.m.ncols() {
                for i in 0..self.m.nrows() {
                    let v = self.m[(i, j)] * inv;
                    self.m[(i, j)] = v;
                }
            }
            self.ln_scale += a.ln();
        }
        Ok(())
    }

    fn mul(&self, other: &ScaledMat) -> Result<ScaledMat> {
        let mut out = ScaledMat {
            m: &self.m * &other.m,
            ln_scale: self.ln_scale + other.ln_scale,
        };
        out.renorm()?;
        Ok(out)
    }
}

/// `exp(ln_scale) * m == x^e`, computed by repeated squaring.
fn scaled_power(x: &CMatrix, e: u32) -> Result<ScaledMat> {
    assert!(e >= 1);
    let mut base = ScaledMat {
        m: to_faer(x),
        ln_scale: 0.0,
    };
    base.renorm()?;
    let mut result: Option<ScaledMat> = None;
    let mut e = e;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => ScaledMat {
                    m: base.m.clone(),
                    ln_scale: base.ln_scale,
                },
                Some(r) => r.mul(&base)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.mul(&base)?;
    }
    Ok(result.expect("e >= 1"))
}

/// The trace-moment bound `(Tr((X*)^{k-1} X^{k-1}))^{1/(2k-2)}`, computed as
/// the squared Frobenius norm of `X^{k-1}` with periodic rescaling, so entry
/// growth like `n^{k/2}` cannot overflow.
pub fn trace_moment_bound(x: &CMatrix, k: u32) -> Result<f64> {
    assert!(k >= 2, "trace-moment bound needs k >= 2");
    let p = scaled_power(x, k - 1)?;
    let mut frob_sqr: f64 = 0.0;
    for j in 0..p.m.ncols() {
        for i in 0..p.m.nrows() {
            frob_sqr += p.m[(i, j)].norm_sqr();
        }
    }
    if !frob_sqr.is_finite() {
        return Err(Error::Numerical {
            op: "trace_moment_bound",
            iterations: 0,
            detail: "overflow in Frobenius accumulation; evaluate in log domain".into(),
        });
    }
    if frob_sqr == 0.0 {
        return Ok(0.0);
    }
    let ln_trace = frob_sqr.ln() + 2.0 * p.ln_scale;
    Ok((ln_trace / (2.0 * k as f64 - 2.0)).exp())
}

/// `||X^m||^{1/m}` via power iteration on `(X^m)* (X^m)`, matvec-only.
///
/// Convergence is certified by the two-sided Rayleigh bracket
/// `v*Bv <= ||Bv|| <= lambda_max`: the iteration stops when the bracket width
/// falls below `1e-10` relative, or when the Rayleigh quotient stagnates
/// (relative change < 1e-12 over three consecutive iterations).
pub fn power_norm_bound(x: &CMatrix, m: u32) -> Result<f64> {
    assert!(m >= 1, "power-norm bound needs m >= 1");
    let n = x.n();
    // fixed seeded start vector
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_17e2);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    normalize(&mut v);

    let mut buf_a = vec![Complex64::new(0.0, 0.0); n];
    let mut buf_b = vec![Complex64::new(0.0, 0.0); n];
    // w = X^m v, then z = (X*)^m w
    let apply = |v: &[Complex64], w: &mut Vec<Complex64>, z: &mut Vec<Complex64>| {
        w.copy_from_slice(v);
        for _ in 0..m {
            let mut tmp = vec![Complex64::new(0.0, 0.0); n];
            x.matvec(w, &mut tmp);
            *w = tmp;
        }
        z.copy_from_slice(w);
        for _ in 0..m {
            let mut tmp = vec![Complex64::new(0.0, 0.0); n];
            x.adjoint_matvec(z, &mut tmp);
            *z = tmp;
        }
    };

    let mut prev_rayleigh = f64::NAN;
    let mut stagnant = 0usize;
    for iter in 0..POWER_ITER_MAX {
        apply(&v, &mut buf_a, &mut buf_b);
        // ||v|| = 1 here
        let rayleigh: f64 = buf_a.iter().map(|z| z.norm_sqr()).sum();
        let upper: f64 = buf_b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if rayleigh == 0.0 || upper == 0.0 {
            return Ok(0.0);
        }
        let bracket_ok = (upper - rayleigh).abs() <= POWER_ITER_TOL * upper.max(1e-300);
        if prev_rayleigh.is_finite() {
            let rel = (rayleigh - prev_rayleigh).abs() / rayleigh.max(1e-300);
            if rel < POWER_ITER_STAGNATION {
                stagnant += 1;
            } else {
                stagnant = 0;
            }
        }
        prev_rayleigh = rayleigh;
        if bracket_ok || stagnant >= 3 {
            let lambda = upper.max(rayleigh);
            return Ok(lambda.powf(1.0 / (2.0 * m as f64)));
        }
        v.copy_from_slice(&buf_b);
        normalize(&mut v);
        if iter + 1 == POWER_ITER_MAX {
            return Err(Error::Numerical {
                op: "power_norm_bound",
                iterations: POWER_ITER_MAX,
                detail: "power iteration failed to converge".into(),
            });
        }
    }
    unreachable!()
}

fn normalize(v: &mut [Complex64]) {
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

/// The tail estimate `(1+delta)^{-2k+2} n^{-k+1} E[rho^{2k-2}]`, evaluated in
/// the log domain.
pub fn markov_tail_bound(k: u32, n: usize, delta: f64, moment_2k2: f64) -> f64 {
    assert!(moment_2k2 >= 0.0);
    if moment_2k2 == 0.0 {
        return 0.0;
    }
    markov_tail_bound_ln(k, n, delta, moment_2k2.ln())
}

/// Same bound with the moment supplied as a natural log, for magnitudes far
/// outside the double range.
pub fn markov_tail_bound_ln(k: u32, n: usize, delta: f64, ln_moment_2k2: f64) -> f64 {
    assert!(k >= 2 && n >= 1 && delta >= 0.0);
    let kk = k as f64;
    let ln = (-2.0 * kk + 2.0) * delta.ln_1p() + (-kk + 1.0) * (n as f64).ln() + ln_moment_2k2;
    ln.exp()
}

/// Default moment order for experiments at dimension n: `ceil((ln n)^2)`,
/// floored at 2.
pub fn default_k(n: usize) -> u32 {
    let l = (n as f64).ln();
    (l * l).ceil().max(2.0) as u32
}

/// Spectral radius (when the dimension permits) plus the requested bounds.
pub fn compute_radius_bounds(x: &CMatrix, ks: &[u32], ms: &[u32]) -> Result<RadiusBounds> {
    let rho_exact = if x.n() <= EIG_DIM_CAP {
        Some(spectral_radius(x)?)
    } else {
        None
    };
    let mut trace_bound_k = BTreeMap::new();
    for &k in ks {
        trace_bound_k.insert(k, trace_moment_bound(x, k)?);
    }
    let mut power_bound_m = BTreeMap::new();
    for &m in ms {
        power_bound_m.insert(m, power_norm_bound(x, m)?);
    }
    Ok(RadiusBounds {
        rho_exact,
        trace_bound_k,
        power_bound_m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::EntryDistribution;
    use crate::ensemble::{sample_matrix, Storage};

    fn seeded(dist: &EntryDistribution, n: usize, seed: u64) -> CMatrix {
        sample_matrix(dist, n, seed, Storage::Dense)
            .unwrap()
            .to_dense()
    }

    #[test]
    fn identity_eigenvalues() {
        let s = eigenvalues(&CMatrix::identity(5)).unwrap();
        assert_eq!(s.eigenvalues.len(), 5);
        for z in &s.eigenvalues {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn nilpotent_eigenvalues() {
        let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let s = eigenvalues(&x).unwrap();
        for z in &s.eigenvalues {
            assert!(z.norm() < 1e-12);
        }
    }

    #[test]
    fn companion_matrix_cube_roots_of_unity() {
        // companion of z^3 - 1
        let x = CMatrix::from_real_rows(&[
            &[0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
        ]);
        let s = eigenvalues(&x).unwrap();
        let mut got = s.sorted();
        let mut expect = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.5, 3.0f64.sqrt() / 2.0),
            Complex64::new(-0.5, -3.0f64.sqrt() / 2.0),
        ];
        expect.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        for (g, e) in got.drain(..).zip(expect) {
            assert!((g - e).norm() < 1e-10, "{g} vs {e}");
        }
    }

    #[test]
    fn permutation_cycle_radius_one() {
        let n = 6;
        let mut x = CMatrix::zeros(n);
        for i in 0..n {
            x.set(i, (i + 1) % n, Complex64::new(1.0, 0.0));
        }
        assert!((spectral_radius(&x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_radius() {
        let mut x = CMatrix::zeros(3);
        x.set(0, 0, Complex64::new(3.0, 0.0));
        x.set(1, 1, Complex64::new(-1.0, 0.0));
        x.set(2, 2, Complex64::new(0.0, 2.0));
        assert!((spectral_radius(&x).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn trace_moment_bound_identity() {
        for k in [2u32, 3, 6] {
            let n = 7usize;
            let b = trace_moment_bound(&CMatrix::identity(n), k).unwrap();
            let expect = (n as f64).powf(1.0 / (2.0 * k as f64 - 2.0));
            assert!((b - expect).abs() < 1e-12, "k={k}: {b} vs {expect}");
        }
    }

    #[test]
    fn trace_moment_bound_nilpotent() {
        let x = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        let b = trace_moment_bound(&x, 2).unwrap();
        assert!((b - 2.0).abs() < 1e-12);
        // k = 3: X^2 = 0, bound collapses to zero, still >= rho = 0
        assert_eq!(trace_moment_bound(&x, 3).unwrap(), 0.0);
    }

    #[test]
    fn trace_moment_dominates_radius_gaussian() {
        let x = seeded(&EntryDistribution::GaussianReal, 50, 2024);
        let rho = spectral_radius(&x).unwrap();
        let b = trace_moment_bound(&x, 6).unwrap();
        assert!(rho <= b * (1.0 + 1e-9), "rho {rho} bound {b}");
    }

    #[test]
    fn power_norm_identity_and_diag() {
        assert!((power_norm_bound(&CMatrix::identity(5), 3).unwrap() - 1.0).abs() < 1e-9);
        let mut d = CMatrix::zeros(2);
        d.set(0, 0, Complex64::new(2.0, 0.0));
        d.set(1, 1, Complex64::new(1.0, 0.0));
        let b = power_norm_bound(&d, 10).unwrap();
        assert!((b - 2.0).abs() < 1e-9, "{b}");
    }

    #[test]
    fn power_norm_zero_matrix() {
        assert_eq!(power_norm_bound(&CMatrix::zeros(4), 2).unwrap(), 0.0);
    }

    #[test]
    fn power_norm_sequence_decreases_toward_radius() {
        let x = seeded(&EntryDistribution::GaussianReal, 100, 7);
        let rho = spectral_radius(&x).unwrap();
        let bounds: Vec<f64> = [1u32, 2, 4, 8]
            .iter()
            .map(|&m| power_norm_bound(&x, m).unwrap())
            .collect();
        for b in &bounds {
            assert!(rho <= b * (1.0 + 1e-9), "rho {rho} bound {b}");
        }
        for w in bounds.windows(2) {
            // ||X^{2m}||^{1/2m} <= sqrt(||X^m||^{1/m} * ||X^m||^{1/m}) = ||X^m||^{1/m}
            assert!(w[1] <= w[0] * (1.0 + 1e-9), "{bounds:?} not decreasing");
        }
        // the m = 8 bound should already be reasonably close to rho
        assert!(bounds[3] <= rho * 1.6, "rho {rho} bounds {bounds:?}");
    }

    #[test]
    fn esd_trivials() {
        let s = esd(&CMatrix::identity(4)).unwrap();
        for z in &s.eigenvalues {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        }
        assert!(s.scaled);
        let z = esd(&CMatrix::zeros(3)).unwrap();
        for v in &z.eigenvalues {
            assert_eq!(v.norm(), 0.0);
        }
    }

    #[test]
    fn outlier_count_trivials() {
        let s = eigenvalues(&CMatrix::identity(3)).unwrap();
        assert_eq!(outlier_count(&s, 2.0), 0);
        let mut d = CMatrix::zeros(3);
        d.set(0, 0, Complex64::new(3.0, 0.0));
        let s = eigenvalues(&d).unwrap();
        assert_eq!(outlier_count(&s, 2.0), 1);
    }

    #[test]
    fn markov_tail_bound_values() {
        // saturated: delta = 0, moment = n^{k-1}
        let v = markov_tail_bound(4, 10, 0.0, 1e3);
        assert!((v - 1.0).abs() < 1e-12);
        // arithmetic: 4^{-1} * 10^{-1} * 100 = 2.5
        let v = markov_tail_bound(2, 10, 1.0, 100.0);
        assert!((v - 2.5).abs() < 1e-12);
    }

    #[test]
    fn markov_tail_bound_log_domain_large_k() {
        // moment = n^k k^3 with n = 10^4 and k = ceil((log2 n)^2) = 177: the
        // moment alone is ~1e344, far outside f64, hence the ln form. The
        // resulting tail bound is (1+0.1)^{-2k+2} * n * k^3 < 1e-3.
        let n = 10_000usize;
        let k = ((n as f64).log2().powi(2)).ceil() as u32;
        assert_eq!(k, 177);
        let ln_moment = k as f64 * (n as f64).ln() + 3.0 * (k as f64).ln();
        let v = markov_tail_bound_ln(k, n, 0.1, ln_moment);
        assert!(v < 1e-3, "v = {v}");
        assert!(v > 0.0);
    }

    #[test]
    fn scale_equivariance() {
        let x = seeded(&EntryDistribution::GaussianComplex, 30, 11);
        let rho = spectral_radius(&x).unwrap();
        for c in [
            Complex64::new(2.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
        ] {
            let mut y = x.clone();
            y.scale_in_place(c);
            let r = spectral_radius(&y).unwrap();
            assert!(
                (r - c.norm() * rho).abs() <= 1e-10 * rho.max(1.0),
                "c = {c}: {r} vs {}",
                c.norm() * rho
            );
        }
    }

    #[test]
    fn similarity_invariance_under_permutation() {
        let x = seeded(&EntryDistribution::GaussianReal, 24, 3);
        let n = x.n();
        // deterministic pseudo-random permutation
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let mut y = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                y.set(perm[i], perm[j], x.get(i, j));
            }
        }
        let sx = eigenvalues(&x).unwrap().sorted();
        let mut sy = eigenvalues(&y).unwrap().sorted();
        // sorted-order comparison is fragile for near-ties (conjugate pairs
        // perturbed at roundoff), so match as multisets: greedy nearest
        for a in &sx {
            let (idx, dist) = sy
                .iter()
                .enumerate()
                .map(|(i, b)| (i, (a - b).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap();
            assert!(dist < 1e-8, "{a} unmatched, nearest {dist:e}");
            sy.swap_remove(idx);
        }
    }

    #[test]
    fn dominance_chain_on_samples() {
        for (seed, dist) in [
            (1u64, EntryDistribution::GaussianReal),
            (2, EntryDistribution::Rademacher),
            (3, EntryDistribution::GaussianComplex),
        ] {
            let x = seeded(&dist, 40, seed);
            let bounds = compute_radius_bounds(&x, &[2, 3, 4], &[1, 2, 4]).unwrap();
            let scale = (x.n() as f64).sqrt() * x.max_abs().max(1.0);
            assert!(bounds.dominance_holds(scale), "{dist:?}: {bounds:?}");
            // ||X^m||^{1/m} <= ||X|| for every stored m
            let op_norm = bounds.power_bound_m[&1];
            for (&m, &b) in &bounds.power_bound_m {
                assert!(b <= op_norm * (1.0 + 1e-9), "m = {m}");
            }
        }
    }

    #[test]
    fn eig_cap_is_enforced() {
        // don't allocate a real 4097^2 matrix; the cap check happens first
        let x = CMatrix::zeros(2);
        assert!(eigenvalues(&x).is_ok());
        let big = CMatrix::zeros(EIG_DIM_CAP + 1);
        assert!(matches!(eigenvalues(&big), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bounds_json_shape() {
        let x = CMatrix::identity(3);
        let b = compute_radius_bounds(&x, &[2], &[1]).unwrap();
        let j = b.to_json();
        assert!(j.contains("\"rho\""));
        assert!(j.contains("\"trace_moment\""));
        assert!(j.contains("\"power_norm\""));
    }
}
