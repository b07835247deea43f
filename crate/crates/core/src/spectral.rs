//! Principal curvatures of level hypersurfaces `M_t = {x ∈ Sⁿ : F(x) = t}`.
//!
//! Conventions: the unit normal is `ξ = +grad_S F / |grad_S F|` with
//! `grad_S F = ∇F − ⟨x, ∇F⟩x`, and the shape operator on `T_xM` is
//! `A = −(D²F − ⟨x, ∇F⟩ Id)|_{T_xM} / |grad_S F|`. A principal curvature `λ`
//! is written `λ = cot θ` with `θ ∈ (0, π)`; clusters are listed by increasing
//! `θ`. With these choices the focal set `F = +1` lies at distance `θ_1` along
//! `ξ`, and moving to `cos s·x + sin s·ξ` turns `cot θ_k` into `cot(θ_k − s)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::IsoparametricFamily;
use crate::polyalg::CompiledPoly;

/// Values of `p` allowed by Münzner's theorem.
pub const ALLOWED_P: [usize; 5] = [1, 2, 3, 4, 6];

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-4;

pub const CONVENTION: &str =
    "xi = +grad_S F/|grad_S F|; A = -Hess_S F/|grad_S F|; lambda = cot(theta), theta in (0, pi)";

/// Compiled `F`, `∇F` and `D²F` of a family.
#[derive(Clone, Debug)]
pub struct LevelGeometry {
    name: String,
    p: u32,
    dim: usize,
    f: CompiledPoly,
    grad: Vec<CompiledPoly>,
    hess: Vec<CompiledPoly>,
}

impl LevelGeometry {
    pub fn new(fam: &IsoparametricFamily) -> Result<Self> {
        let dim = fam.ambient_dim;
        let grad_polys = fam.poly.gradient();
        let mut hess = Vec::with_capacity(dim * (dim + 1) / 2);
        for (i, g) in grad_polys.iter().enumerate() {
            for j in i..dim {
                hess.push(CompiledPoly::new(&g.differentiate(j)?));
            }
        }
        Ok(Self {
            name: fam.name.clone(),
            p: fam.p,
            dim,
            f: CompiledPoly::new(&fam.poly),
            grad: grad_polys.iter().map(CompiledPoly::new).collect(),
            hess,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Ambient dimension `n + 1`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.f.eval(x)
    }

    pub fn gradient(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.dim, self.grad.iter().map(|g| g.eval(x)))
    }

    pub fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.dim, self.dim);
        let mut idx = 0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.hess[idx].eval(x);
                h[(i, j)] = v;
                h[(j, i)] = v;
                idx += 1;
            }
        }
        h
    }

    /// `∇F(y) − ⟨ŷ, ∇F(y)⟩ŷ` with `ŷ = y/|y|`; defined off the sphere too.
    pub fn sphere_gradient(&self, y: &[f64]) -> DVector<f64> {
        let yv = DVector::from_column_slice(y);
        let u = &yv / yv.norm();
        let g = self.gradient(y);
        let radial = u.dot(&g);
        g - u * radial
    }

    /// The unit normal field `ξ`, extended to all nonzero `y`.
    pub fn normal(&self, y: &[f64]) -> Result<DVector<f64>> {
        let gs = self.sphere_gradient(y);
        let norm = gs.norm();
        if norm < 1e-6 {
            return Err(Error::DegenerateGradient(format!(
                "|grad_S F| = {norm:.3e}; the point is (nearly) focal, choose another level"
            )));
        }
        Ok(gs / norm)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub x: Vec<f64>,
    pub t: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct SamplingOptions {
    /// Levels with `|t|` above this are refused; they sit too close to the focal sets.
    pub max_abs_t: f64,
    pub max_iters: usize,
    pub max_attempts: usize,
    pub tol: f64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self {
            max_abs_t: 0.95,
            max_iters: 200,
            max_attempts: 32,
            tol: 1e-12,
        }
    }
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= n);
}

/// Finds `x ∈ Sⁿ` with `F(x) = t` by Newton steps along the spherical gradient,
/// starting from a seeded Gaussian point.
pub fn sample_level(geom: &LevelGeometry, t: f64, seed: u64, opts: &SamplingOptions) -> Result<SurfacePoint> {
    if !(t > -1.0 && t < 1.0) {
        return Err(Error::Domain(format!("level t = {t} must lie in (-1, 1)")));
    }
    if t.abs() > opts.max_abs_t {
        return Err(Error::Domain(format!(
            "|t| = {} exceeds the sampling guard {}; raise it explicitly to go closer to the focal sets",
            t.abs(),
            opts.max_abs_t
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = geom.dim();
    for _ in 0..opts.max_attempts {
        let mut x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        normalize(&mut x);
        for _ in 0..opts.max_iters {
            let r = geom.value(&x) - t;
            let gs = geom.sphere_gradient(&x);
            let g2 = gs.norm_squared();
            if r.abs() <= opts.tol && g2.sqrt() > 1e-6 {
                return Ok(SurfacePoint { x, t, seed });
            }
            if g2 < 1e-20 {
                break;
            }
            let mut step: Vec<f64> = gs.iter().map(|g| -r * g / g2).collect();
            let len = step.iter().map(|a| a * a).sum::<f64>().sqrt();
            if len > 0.3 {
                step.iter_mut().for_each(|a| *a *= 0.3 / len);
            }
            x.iter_mut().zip(&step).for_each(|(a, s)| *a += s);
            normalize(&mut x);
        }
    }
    Err(Error::Sampling(format!(
        "no convergence to F = {t} on {} after {} attempts (seed {seed})",
        geom.name(),
        opts.max_attempts
    )))
}

#[derive(Clone, Debug)]
pub struct ShapeOperator {
    /// Orthonormal basis of `T_xM` as columns.
    pub basis: DMatrix<f64>,
    pub xi: DVector<f64>,
    pub matrix: DMatrix<f64>,
    /// Largest entry of `|A − Aᵀ|` before symmetrization.
    pub asymmetry: f64,
}

/// Columns spanning the orthogonal complement of `{x, ξ}`.
fn tangent_basis(x: &DVector<f64>, xi: &DVector<f64>) -> DMatrix<f64> {
    let n = x.len();
    let proj = DMatrix::identity(n, n) - x * x.transpose() - xi * xi.transpose();
    let eig = SymmetricEigen::new(proj);
    let mut cols: Vec<(usize, DVector<f64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(i, _)| (i, eig.eigenvectors.column(i).into_owned()))
        .collect();
    cols.sort_by_key(|(i, _)| *i);
    let vs: Vec<DVector<f64>> = cols.into_iter().map(|(_, v)| v).collect();
    DMatrix::from_columns(&vs)
}

/// Shape operator at `x` for the normal `orientation·ξ`, `orientation = ±1`.
pub fn shape_operator_oriented(geom: &LevelGeometry, x: &[f64], orientation: f64) -> Result<ShapeOperator> {
    let xv = DVector::from_column_slice(x);
    let gs = geom.sphere_gradient(x);
    let gnorm = gs.norm();
    if gnorm < 1e-6 {
        return Err(Error::DegenerateGradient(format!(
            "|grad_S F| = {gnorm:.3e} at this point; it is (nearly) focal, choose a level further from +-1"
        )));
    }
    let xi = &gs / gnorm * orientation;
    let basis = tangent_basis(&xv, &xi);
    let radial = xv.dot(&geom.gradient(x));
    let n = geom.dim();
    let hs = geom.hessian(x) - DMatrix::identity(n, n) * radial;
    let raw = -(basis.transpose() * hs * &basis) * (orientation / gnorm);
    let asymmetry = (&raw - raw.transpose()).abs().max();
    let matrix = (&raw + raw.transpose()) * 0.5;
    Ok(ShapeOperator {
        basis,
        xi,
        matrix,
        asymmetry,
    })
}

pub fn shape_operator(geom: &LevelGeometry, pt: &SurfacePoint) -> Result<ShapeOperator> {
    shape_operator_oriented(geom, &pt.x, 1.0)
}

/// `−Bᵀ Dξ B` with `Dξ` from central differences along the tangent basis.
pub fn shape_operator_fd(geom: &LevelGeometry, pt: &SurfacePoint, h: f64) -> Result<DMatrix<f64>> {
    let so = shape_operator(geom, pt)?;
    let b = &so.basis;
    let k = b.ncols();
    let mut dxi = DMatrix::zeros(geom.dim(), k);
    for j in 0..k {
        let dir = b.column(j);
        let plus: Vec<f64> = pt.x.iter().zip(dir.iter()).map(|(a, d)| a + h * d).collect();
        let minus: Vec<f64> = pt.x.iter().zip(dir.iter()).map(|(a, d)| a - h * d).collect();
        let col = (geom.normal(&plus)? - geom.normal(&minus)?) / (2.0 * h);
        dxi.set_column(j, &col);
    }
    Ok(-(b.transpose() * dxi))
}

pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Ordered by increasing `θ`, i.e. decreasing curvature.
    pub clusters: Vec<Cluster>,
    pub p: usize,
    pub thetas: Vec<f64>,
    pub convention: String,
}

impl Spectrum {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.multiplicity).collect()
    }
}

/// `θ ∈ (0, π)` with `cot θ = λ`.
pub fn cot_angle(lambda: f64) -> f64 {
    1f64.atan2(lambda)
}

/// Single-linkage clustering of eigenvalues with gap threshold `tol`.
pub fn cluster_spectrum(eigs: &[f64], tol: f64) -> Result<Spectrum> {
    if eigs.is_empty() {
        return Err(Error::Precondition("empty eigenvalue list".into()));
    }
    let mut sorted = eigs.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut groups: Vec<Vec<f64>> = vec![vec![sorted[0]]];
    let mut max_within = 0f64;
    let mut min_between = f64::INFINITY;
    for w in sorted.windows(2) {
        let gap = w[1] - w[0];
        if gap > tol {
            min_between = min_between.min(gap);
            groups.push(vec![w[1]]);
        } else {
            max_within = max_within.max(gap);
            groups.last_mut().expect("nonempty").push(w[1]);
        }
    }
    if groups.len() > 1 {
        if min_between <= 10.0 * tol {
            return Err(Error::Instability(format!(
                "smallest gap between clusters {min_between:.3e} is within 10x the tolerance {tol:.1e}"
            )));
        }
        if max_within > min_between / 10.0 {
            return Err(Error::Instability(format!(
                "largest gap inside a cluster {max_within:.3e} is not small against the smallest gap between clusters {min_between:.3e}"
            )));
        }
    }
    let mut clusters: Vec<Cluster> = groups
        .iter()
        .rev()
        .map(|g| {
            let value = g.iter().sum::<f64>() / g.len() as f64;
            Cluster {
                value,
                multiplicity: g.len(),
                theta: cot_angle(value),
            }
        })
        .collect();
    clusters.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(Spectrum {
        eigenvalues: sorted,
        thetas: clusters.iter().map(|c| c.theta).collect(),
        p: clusters.len(),
        clusters,
        convention: CONVENTION.to_string(),
    })
}

/// Samples a point on `M_t`, computes and clusters its shape operator.
pub fn level_spectrum(
    geom: &LevelGeometry,
    t: f64,
    seed: u64,
    opts: &SamplingOptions,
    tol: f64,
) -> Result<(SurfacePoint, Spectrum)> {
    let pt = sample_level(geom, t, seed, opts)?;
    let so = shape_operator(geom, &pt)?;
    let spectrum = cluster_spectrum(&sorted_eigenvalues(&so.matrix), tol)?;
    Ok((pt, spectrum))
}

/// [`level_spectrum`] for several seeds in parallel; output follows `seeds`.
pub fn spectra_over_seeds(
    geom: &LevelGeometry,
    t: f64,
    seeds: &[u64],
    opts: &SamplingOptions,
    tol: f64,
) -> Result<Vec<(SurfacePoint, Spectrum)>> {
    seeds
        .par_iter()
        .map(|&s| level_spectrum(geom, t, s, opts, tol))
        .collect()
}

/// Largest eigenvalue difference between any two spectra, compared in sorted order.
pub fn max_spectrum_deviation(spectra: &[Spectrum]) -> f64 {
    let Some(first) = spectra.first() else {
        return 0.0;
    };
    spectra
        .iter()
        .map(|s| {
            if s.eigenvalues.len() != first.eigenvalues.len() {
                return f64::INFINITY;
            }
            s.eigenvalues
                .iter()
                .zip(&first.eigenvalues)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MunznerReport {
    pub p: usize,
    pub p_allowed: bool,
    pub spacings: Vec<f64>,
    pub max_spacing_error: f64,
    pub spacing_ok: bool,
    pub multiplicities: Vec<usize>,
    pub periodic_multiplicities: bool,
    pub passed: bool,
}

/// Checks `p ∈ {1,2,3,4,6}`, `θ_{k+1} − θ_k = π/p` and `m_k = m_{k+2}`.
pub fn munzner_check(s: &Spectrum, spacing_tol: f64) -> MunznerReport {
    let p = s.p;
    let p_allowed = ALLOWED_P.contains(&p);
    let spacings: Vec<f64> = s.thetas.windows(2).map(|w| w[1] - w[0]).collect();
    let target = PI / p as f64;
    let max_spacing_error = spacings.iter().map(|d| (d - target).abs()).fold(0.0, f64::max);
    let spacing_ok = max_spacing_error <= spacing_tol;
    let multiplicities = s.multiplicities();
    let periodic_multiplicities = (0..p.saturating_sub(2)).all(|k| multiplicities[k] == multiplicities[k + 2]);
    MunznerReport {
        p,
        p_allowed,
        spacings,
        max_spacing_error,
        spacing_ok,
        multiplicities,
        periodic_multiplicities,
        passed: p_allowed && spacing_ok && periodic_multiplicities,
    }
}

fn expected_parallel(s: &Spectrum, shift: f64) -> Vec<f64> {
    let mut v: Vec<f64> = s
        .clusters
        .iter()
        .flat_map(|c| std::iter::repeat_n(1.0 / (c.theta - shift).tan(), c.multiplicity))
        .collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

fn check_not_focal(s: &Spectrum, shift: f64) -> Result<()> {
    for c in &s.clusters {
        if (c.theta - shift).sin().abs() < 1e-6 {
            return Err(Error::Focal(format!(
                "displacement {shift} hits the focal angle theta = {} (multiplicity {})",
                c.theta, c.multiplicity
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParallelReport {
    pub shift: f64,
    pub expected: Vec<f64>,
    pub observed: Vec<f64>,
    pub max_error: f64,
    pub level_value: f64,
    pub expected_level_value: f64,
    pub level_ok: bool,
    pub passed: bool,
}

/// Moves `pt` to `cos s·x + sin s·ξ` and compares the curvatures there with
/// `cot(θ_k − s)`, using the transported normal `−sin s·x + cos s·ξ`.
pub fn parallel_check(geom: &LevelGeometry, pt: &SurfacePoint, shift: f64, tol: f64) -> Result<ParallelReport> {
    let so = shape_operator(geom, pt)?;
    let spectrum = cluster_spectrum(&sorted_eigenvalues(&so.matrix), DEFAULT_CLUSTER_TOL)?;
    check_not_focal(&spectrum, shift)?;
    let x = DVector::from_column_slice(&pt.x);
    let xs = &x * shift.cos() + &so.xi * shift.sin();
    let xi_s = -&x * shift.sin() + &so.xi * shift.cos();
    let xs_vec: Vec<f64> = xs.iter().copied().collect();
    let natural = geom.normal(&xs_vec)?;
    let orientation = if natural.dot(&xi_s) >= 0.0 { 1.0 } else { -1.0 };
    let moved = shape_operator_oriented(geom, &xs_vec, orientation)?;
    let observed = sorted_eigenvalues(&moved.matrix);
    let expected = expected_parallel(&spectrum, shift);
    let max_error = observed
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let level_value = geom.value(&xs_vec);
    let p = geom.p() as f64;
    let expected_level_value = (p * (spectrum.thetas[0] - shift)).cos();
    let level_ok = (level_value - expected_level_value).abs() <= 1e-8;
    Ok(ParallelReport {
        shift,
        passed: max_error <= tol && level_ok,
        expected,
        observed,
        max_error,
        level_value,
        expected_level_value,
        level_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FocalReport {
    pub k: usize,
    pub theta: f64,
    pub expected_nullity: usize,
    pub nullity: usize,
    /// Smallest singular values, ascending.
    pub smallest_singular_values: Vec<f64>,
    pub step: f64,
    pub passed: bool,
}

pub const FOCAL_SV_THRESHOLD: f64 = 1e-5;

fn focal_jacobian(geom: &LevelGeometry, x: &DVector<f64>, basis: &DMatrix<f64>, xi: &DVector<f64>, s: f64, h: f64) -> Result<DMatrix<f64>> {
    let n = geom.dim();
    let k = basis.ncols();
    let mut jac = DMatrix::zeros(n, k + 1);
    let phi = |y: &[f64]| -> Result<DVector<f64>> {
        let yv = DVector::from_column_slice(y);
        Ok(yv * s.cos() + geom.normal(y)? * s.sin())
    };
    for j in 0..k {
        let dir = basis.column(j);
        let plus: Vec<f64> = x.iter().zip(dir.iter()).map(|(a, d)| a + h * d).collect();
        let minus: Vec<f64> = x.iter().zip(dir.iter()).map(|(a, d)| a - h * d).collect();
        jac.set_column(j, &((phi(&plus)? - phi(&minus)?) / (2.0 * h)));
    }
    // ∂Φ/∂s = −sin s·x + cos s·ξ
    jac.set_column(k, &(-x * s.sin() + xi * s.cos()));
    Ok(jac)
}

/// Rank drop of `(y, s) ↦ cos s·y + sin s·ξ(y)` at `(x, θ_k)`; it should equal `m_k`.
pub fn focal_check(geom: &LevelGeometry, pt: &SurfacePoint, k: usize) -> Result<FocalReport> {
    let so = shape_operator(geom, pt)?;
    let spectrum = cluster_spectrum(&sorted_eigenvalues(&so.matrix), DEFAULT_CLUSTER_TOL)?;
    let cluster = spectrum
        .clusters
        .get(k)
        .ok_or_else(|| Error::Domain(format!("curvature index {k} out of range (p = {})", spectrum.p)))?;
    let x = DVector::from_column_slice(&pt.x);
    let mut last = None;
    for h in [1e-5, 1e-4, 1e-6] {
        let jac = focal_jacobian(geom, &x, &so.basis, &so.xi, cluster.theta, h)?;
        let mut sv: Vec<f64> = jac.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| a.total_cmp(b));
        let ambiguous = sv.iter().any(|&v| (FOCAL_SV_THRESHOLD..1e-3).contains(&v));
        let nullity = sv.iter().filter(|&&v| v < FOCAL_SV_THRESHOLD).count();
        let report = FocalReport {
            k,
            theta: cluster.theta,
            expected_nullity: cluster.multiplicity,
            nullity,
            smallest_singular_values: sv.iter().take(cluster.multiplicity + 2).copied().collect(),
            step: h,
            passed: nullity == cluster.multiplicity,
        };
        if !ambiguous {
            return Ok(report);
        }
        last = Some(report);
    }
    Err(Error::Instability(format!(
        "finite-difference Jacobian stays ill-conditioned for every step; last attempt: {:?}",
        last.map(|r| r.smallest_singular_values)
    )))
}

/// Numerical rank with an absolute singular-value threshold.
pub fn numerical_rank(m: &DMatrix<f64>, threshold: f64) -> usize {
    m.singular_values().iter().filter(|&&v| v >= threshold).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division_algebras::AlgebraTag;
    use crate::families::{cartan_cubic, fkm, linear_family, product_family};

    fn geom(f: &IsoparametricFamily) -> LevelGeometry {
        LevelGeometry::new(f).unwrap()
    }

    #[test]
    fn sampling_postconditions() {
        let g = geom(&cartan_cubic(AlgebraTag::R).unwrap());
        for seed in 0..5 {
            let pt = sample_level(&g, 0.0, seed, &SamplingOptions::default()).unwrap();
            let norm: f64 = pt.x.iter().map(|a| a * a).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            assert!(g.value(&pt.x).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = geom(&product_family(7, 4).unwrap());
        let a = sample_level(&g, 0.3, 11, &SamplingOptions::default()).unwrap();
        let b = sample_level(&g, 0.3, 11, &SamplingOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn product_level_is_closed_form() {
        let g = geom(&product_family(7, 4).unwrap());
        let pt = sample_level(&g, 0.0, 3, &SamplingOptions::default()).unwrap();
        let first: f64 = pt.x[..4].iter().map(|a| a * a).sum();
        assert!((first - 0.5).abs() < 1e-12);
    }

    #[test]
    fn linear_level_radius() {
        let g = geom(&linear_family(7).unwrap());
        let pt = sample_level(&g, 0.5, 1, &SamplingOptions::default()).unwrap();
        assert!((pt.x[7] - 0.5).abs() < 1e-12);
        let rest: f64 = pt.x[..7].iter().map(|a| a * a).sum();
        assert!((rest - 0.75).abs() < 1e-12);
    }

    #[test]
    fn sampling_domain_errors() {
        let g = geom(&linear_family(3).unwrap());
        let o = SamplingOptions::default();
        assert!(matches!(sample_level(&g, 1.0, 0, &o), Err(Error::Domain(_))));
        assert!(matches!(sample_level(&g, 0.97, 0, &o), Err(Error::Domain(_))));
        let loose = SamplingOptions {
            max_abs_t: 0.99,
            ..o
        };
        assert!(sample_level(&g, 0.97, 0, &loose).is_ok());
    }

    #[test]
    fn linear_is_umbilic() {
        let g = geom(&linear_family(7).unwrap());
        let pt = sample_level(&g, 0.5, 2, &SamplingOptions::default()).unwrap();
        let s = cluster_spectrum(&sorted_eigenvalues(&shape_operator(&g, &pt).unwrap().matrix), 1e-4).unwrap();
        assert_eq!(s.p, 1);
        assert_eq!(s.multiplicities(), vec![6]);
        // small sphere of spherical radius arccos t
        assert!((s.thetas[0] - 0.5f64.acos()).abs() < 1e-9);
    }

    #[test]
    fn product_spectrum() {
        let g = geom(&product_family(7, 4).unwrap());
        let (_, s) = level_spectrum(&g, 0.0, 5, &SamplingOptions::default(), 1e-4).unwrap();
        assert_eq!(s.p, 2);
        assert_eq!(s.multiplicities(), vec![3, 3]);
        assert!((s.clusters[0].value - 1.0).abs() < 1e-9);
        assert!((s.clusters[1].value + 1.0).abs() < 1e-9);
        let m = munzner_check(&s, 1e-6);
        assert!(m.passed);
    }

    #[test]
    fn real_cubic_spectrum() {
        let g = geom(&cartan_cubic(AlgebraTag::R).unwrap());
        let (_, s) = level_spectrum(&g, 0.0, 9, &SamplingOptions::default(), 1e-4).unwrap();
        let r3 = 3f64.sqrt();
        let vals: Vec<f64> = s.clusters.iter().map(|c| c.value).collect();
        assert_eq!(s.multiplicities(), vec![1, 1, 1]);
        for (v, e) in vals.iter().zip([r3, 0.0, -r3]) {
            assert!((v - e).abs() < 1e-9, "{vals:?}");
        }
    }

    /// `θ_1 = arccos(t)/p` fixes the orientation: at `t = 0` the largest
    /// curvature `cot(π/8)` of fkm(2,2) carries multiplicity `m1 = 2`.
    #[test]
    fn fkm_orientation() {
        let g = geom(&fkm(2, 2).unwrap());
        let (_, s) = level_spectrum(&g, 0.0, 1, &SamplingOptions::default(), 1e-4).unwrap();
        assert_eq!(s.multiplicities(), vec![2, 1, 2, 1]);
        assert!((s.thetas[0] - PI / 8.0).abs() < 1e-8);
        let (_, s2) = level_spectrum(&g, 0.4, 1, &SamplingOptions::default(), 1e-4).unwrap();
        assert!((s2.thetas[0] - 0.4f64.acos() / 4.0).abs() < 1e-8);
    }

    #[test]
    fn fd_shape_operator_agrees() {
        for fam in [cartan_cubic(AlgebraTag::C).unwrap(), fkm(2, 2).unwrap(), product_family(6, 3).unwrap()] {
            let g = geom(&fam);
            let pt = sample_level(&g, 0.2, 4, &SamplingOptions::default()).unwrap();
            let a = shape_operator(&g, &pt).unwrap();
            assert!(a.asymmetry < 1e-8);
            let fd = shape_operator_fd(&g, &pt, 1e-5).unwrap();
            assert!((&a.matrix - fd).abs().max() < 1e-6, "{}", fam.name);
        }
    }

    #[test]
    fn orientation_flip_negates() {
        let g = geom(&fkm(2, 2).unwrap());
        let pt = sample_level(&g, 0.1, 8, &SamplingOptions::default()).unwrap();
        let a = sorted_eigenvalues(&shape_operator_oriented(&g, &pt.x, 1.0).unwrap().matrix);
        let mut b: Vec<f64> = sorted_eigenvalues(&shape_operator_oriented(&g, &pt.x, -1.0).unwrap().matrix)
            .into_iter()
            .map(|v| -v)
            .collect();
        b.sort_by(|x, y| x.total_cmp(y));
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn clustering_cases() {
        let s = cluster_spectrum(&[0.5; 4], 1e-4).unwrap();
        assert_eq!(s.p, 1);
        assert_eq!(s.multiplicities(), vec![4]);
        assert!(matches!(cluster_spectrum(&[0.0, 5e-4, 1.0], 1e-4), Err(Error::Instability(_))));
        assert!(cluster_spectrum(&[], 1e-4).is_err());
    }

    #[test]
    fn p5_is_flagged() {
        let eigs: Vec<f64> = (0..5).map(|k| 1.0 / (PI / 10.0 + k as f64 * PI / 5.0).tan()).collect();
        let s = cluster_spectrum(&eigs, 1e-4).unwrap();
        assert_eq!(s.p, 5);
        let m = munzner_check(&s, 1e-6);
        assert!(m.spacing_ok);
        assert!(!m.p_allowed);
        assert!(!m.passed);
    }

    #[test]
    fn parallel_product() {
        let g = geom(&product_family(7, 4).unwrap());
        let pt = sample_level(&g, 0.0, 2, &SamplingOptions::default()).unwrap();
        let r0 = parallel_check(&g, &pt, 0.0, 1e-6).unwrap();
        assert!(r0.passed);
        let r = parallel_check(&g, &pt, PI / 8.0, 1e-6).unwrap();
        assert!(r.passed, "{r:?}");
        let e1 = 1.0 / (PI / 8.0).tan();
        assert!((r.observed[5] - e1).abs() < 1e-6);
        assert!(matches!(parallel_check(&g, &pt, PI / 4.0, 1e-6), Err(Error::Focal(_))));
    }

    #[test]
    fn focal_nullities() {
        let g = geom(&product_family(7, 4).unwrap());
        let pt = sample_level(&g, 0.0, 2, &SamplingOptions::default()).unwrap();
        for k in 0..2 {
            let r = focal_check(&g, &pt, k).unwrap();
            assert_eq!(r.nullity, 3, "{r:?}");
        }
        let lin = geom(&linear_family(7).unwrap());
        let pt = sample_level(&lin, 0.3, 2, &SamplingOptions::default()).unwrap();
        assert_eq!(focal_check(&lin, &pt, 0).unwrap().nullity, 6);
        assert!(focal_check(&lin, &pt, 1).is_err());
    }

    #[test]
    fn generic_point_is_immersion() {
        let g = geom(&product_family(7, 4).unwrap());
        let pt = sample_level(&g, 0.0, 2, &SamplingOptions::default()).unwrap();
        let so = shape_operator(&g, &pt).unwrap();
        let x = DVector::from_column_slice(&pt.x);
        let jac = focal_jacobian(&g, &x, &so.basis, &so.xi, 0.3, 1e-5).unwrap();
        assert_eq!(numerical_rank(&jac, FOCAL_SV_THRESHOLD), 7);
    }
}
