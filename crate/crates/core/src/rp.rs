//! Ring-polymer potentials on the three surface kinds, analytic gradients,
//! finite-difference Hessians and normal-mode classification.
//!
//! The mean-field surface is U_MF = -(1/beta_N) ln Tr[M_1 M_2 ... M_N] with
//! per-bead Boltzmann factors M_i = exp(-beta_N V(x_i)). The zero-hop-corrected
//! surface subtracts the trace of the diagonal-only product; it is evaluated in
//! the numerically stable one-forced-hop form
//!
//!   U = -(1/beta_N) ln sum_i Tr[M0_1 .. M0_{i-1} (M_i - M0_i) M_{i+1} .. M_N]
//!
//! which is an algebraic identity with the two-trace difference but avoids the
//! cancellation of two large, nearly equal traces. All running products carry
//! log scales. Gradients use forward/backward accumulation of shared prefix
//! and suffix tables, so one gradient costs O(N) matrix products.

use crate::error::{Error, Result};
use crate::linalg;
use crate::mat2::{Mat2, Scaled};
use crate::models::{lower_adiabat_from_point, DiabaticModel, DiabaticPoint};
use ndarray::{Array1, Array2};
use rayon::prelude::*;
use serde::Serialize;

/// Imaginary-time discretization: inverse temperature, bead count and the
/// effective inverse temperature beta_N = beta/N.
#[derive(Debug, Clone, Copy)]
pub struct RingPolymerGrid {
    pub beta: f64,
    pub n_beads: usize,
    pub beta_n: f64,
    pub hbar: f64,
}

impl RingPolymerGrid {
    pub fn new(beta: f64, n_beads: usize) -> Result<Self> {
        if !(beta > 0.0) || n_beads < 1 {
            return Err(Error::InvalidInput("grid requires beta > 0 and N >= 1".into()));
        }
        Ok(RingPolymerGrid {
            beta,
            n_beads,
            beta_n: beta / n_beads as f64,
            hbar: 1.0,
        })
    }

    /// Bead count such that beta_N <= beta_n_max, at least `n_min`, rounded up
    /// to the next even number.
    pub fn with_beta_n_max(beta: f64, beta_n_max: f64, n_min: usize) -> Result<Self> {
        let mut n = ((beta / beta_n_max).ceil() as usize).max(n_min).max(1);
        if n % 2 == 1 {
            n += 1;
        }
        Self::new(beta, n)
    }
}

/// Closed imaginary-time path: N beads by f coordinates, cyclic in the bead
/// index (bead 0 follows bead N-1).
#[derive(Debug, Clone)]
pub struct BeadPath {
    pub coords: Array2<f64>,
}

impl BeadPath {
    pub fn new(coords: Array2<f64>) -> Result<Self> {
        if !coords.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("bead path has non-finite entries".into()));
        }
        Ok(BeadPath { coords })
    }

    pub fn collapsed(point: &[f64], n_beads: usize) -> Self {
        let f = point.len();
        let mut coords = Array2::zeros((n_beads, f));
        for i in 0..n_beads {
            for d in 0..f {
                coords[[i, d]] = point[d];
            }
        }
        BeadPath { coords }
    }

    pub fn n_beads(&self) -> usize {
        self.coords.nrows()
    }

    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }

    pub fn centroid(&self) -> Vec<f64> {
        let n = self.n_beads() as f64;
        (0..self.dim())
            .map(|d| self.coords.column(d).sum() / n)
            .collect()
    }

    /// Largest displacement of any bead from the centroid (max norm).
    pub fn spread(&self) -> f64 {
        let c = self.centroid();
        let mut s = 0.0f64;
        for i in 0..self.n_beads() {
            for d in 0..self.dim() {
                s = s.max((self.coords[[i, d]] - c[d]).abs());
            }
        }
        s
    }

    /// Mass-weighted squared cyclic path length sum_i sum_d m_d (x_i - x_{i+1})^2.
    pub fn b_n(&self, masses: &[f64]) -> f64 {
        let n = self.n_beads();
        let mut b = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            for d in 0..self.dim() {
                let dx = self.coords[[i, d]] - self.coords[[j, d]];
                b += masses[d] * dx * dx;
            }
        }
        b
    }
}

/// Which effective surface the beads move on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    /// Lower-adiabat (Born-Oppenheimer) sum over beads.
    Bo,
    /// Mean-field trace of the ordered matrix-exponential product.
    Mf,
    /// Mean-field trace with the zero-hop term removed.
    Nimf,
}

impl std::fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SurfaceKind::Bo => write!(f, "bo"),
            SurfaceKind::Mf => write!(f, "mf"),
            SurfaceKind::Nimf => write!(f, "nimf"),
        }
    }
}

// ---------------------------------------------------------------------------
// Per-bead matrix exponentials
// ---------------------------------------------------------------------------

/// sinh(u)/u with a series fallback near zero.
fn sinch(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 + u2 / 6.0 * (1.0 + u2 / 20.0)
    } else {
        u.sinh() / u
    }
}

/// (t R cosh(tR) - sinh(tR)) / R^3, finite as R -> 0 (limit t^3/3).
fn g3(t: f64, r: f64) -> f64 {
    let u = t * r;
    if u.abs() < 1e-3 {
        t * t * t * (1.0 / 3.0 + u * u / 30.0)
    } else {
        (u * u.cosh() - u.sinh()) / (r * r * r)
    }
}

/// Per-bead matrices M = exp(-beta_N V), the diagonal M0, and the derivative
/// basis matrices dM/dV0, dM/dV1, dM/dDelta (and the diagonal pair for M0).
/// Contracting the bases with the model gradients gives dM/dx for every
/// nuclear coordinate; the closed form stays finite at exact degeneracies
/// (R -> 0), which replaces the eigenvector-division Frechet formula there.
#[derive(Debug, Clone)]
pub struct BeadMatrices {
    pub m: Mat2,
    pub m0: Mat2,
    pub dm_dv0: Mat2,
    pub dm_dv1: Mat2,
    pub dm_dd: Mat2,
    /// d(M0_00)/dV0 (the 11 element depends only on V1 and vice versa)
    pub dm0_dv0: f64,
    pub dm0_dv1: f64,
}

pub fn bead_matrices(p: &DiabaticPoint, beta_n: f64) -> BeadMatrices {
    let t = beta_n;
    let vbar = 0.5 * (p.v0 + p.v1);
    let dd = 0.5 * (p.v0 - p.v1);
    let r = (dd * dd + p.delta * p.delta).sqrt();
    let u = t * r;
    let ch = u.cosh();
    let sh_r = t * sinch(u); // sinh(tR)/R
    let e = (-t * vbar).exp();
    let m = Mat2::symmetric(
        e * (ch - dd * sh_r),
        -e * p.delta * sh_r,
        e * (ch + dd * sh_r),
    );
    let m0 = Mat2::diag((-t * p.v0).exp(), (-t * p.v1).exp());
    let g3v = g3(t, r);

    // dM for a perturbation (dvbar, ddd, ddelta):
    //   -t dvbar M + e [ t shR P I - g3 P A - shR dA ],  P = dd*ddd + delta*ddelta
    // where A = [[dd, delta], [delta, -dd]].
    let basis = |dvbar: f64, ddd: f64, ddelta: f64| -> Mat2 {
        let pp = dd * ddd + p.delta * ddelta;
        let t00 = t * sh_r * pp - g3v * pp * dd - sh_r * ddd;
        let t11 = t * sh_r * pp + g3v * pp * dd + sh_r * ddd;
        let t01 = -g3v * pp * p.delta - sh_r * ddelta;
        Mat2::symmetric(
            -t * dvbar * m.0[0][0] + e * t00,
            -t * dvbar * m.0[0][1] + e * t01,
            -t * dvbar * m.0[1][1] + e * t11,
        )
    };
    BeadMatrices {
        m,
        m0,
        dm_dv0: basis(0.5, 0.5, 0.0),
        dm_dv1: basis(0.5, -0.5, 0.0),
        dm_dd: basis(0.0, 0.0, 1.0),
        dm0_dv0: -t * m0.0[0][0],
        dm0_dv1: -t * m0.0[1][1],
    }
}

// ---------------------------------------------------------------------------
// Spring term
// ---------------------------------------------------------------------------

/// Cyclic spring energy sum_i sum_d m_d (x_{i,d} - x_{i-1,d})^2 / (2 beta_N^2 hbar^2)
/// and its analytic gradient.
pub fn spring_energy(path: &BeadPath, grid: &RingPolymerGrid, masses: &[f64]) -> (f64, Array2<f64>) {
    let n = path.n_beads();
    let f = path.dim();
    let pref = 1.0 / (grid.beta_n * grid.beta_n * grid.hbar * grid.hbar);
    let x = &path.coords;
    let mut e = 0.0;
    let mut g = Array2::zeros((n, f));
    for i in 0..n {
        let im = (i + n - 1) % n;
        let ip = (i + 1) % n;
        for d in 0..f {
            let dx = x[[i, d]] - x[[im, d]];
            e += 0.5 * masses[d] * pref * dx * dx;
            g[[i, d]] = masses[d] * pref * (2.0 * x[[i, d]] - x[[im, d]] - x[[ip, d]]);
        }
    }
    (e, g)
}

// ---------------------------------------------------------------------------
// Surface terms
// ---------------------------------------------------------------------------

fn eval_beads(model: &dyn DiabaticModel, path: &BeadPath) -> Result<Vec<DiabaticPoint>> {
    let n = path.n_beads();
    let mut pts = vec![DiabaticPoint::default(); n];
    let row: Vec<Vec<f64>> = (0..n).map(|i| path.coords.row(i).to_vec()).collect();
    for i in 0..n {
        crate::models::eval_diabatic(model, &row[i], &mut pts[i])?;
    }
    Ok(pts)
}

struct MfTables {
    /// prefix[i] = M_1 .. M_i (prefix[0] = I)
    prefix: Vec<Scaled>,
    /// suffix[i] = M_{i+1} .. M_N (suffix[N] = I), indexed 0..=N
    suffix: Vec<Scaled>,
    log_trace: f64,
}

fn mf_tables(mats: &[BeadMatrices]) -> Result<MfTables> {
    let n = mats.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(Scaled::IDENTITY);
    for i in 0..n {
        let last = prefix[i];
        prefix.push(last.mul_plain(&mats[i].m));
    }
    let mut suffix = vec![Scaled::IDENTITY; n + 1];
    for i in (0..n).rev() {
        let next = suffix[i + 1];
        suffix[i] = Scaled {
            m: mats[i].m.matmul(&next.m),
            log: next.log,
        }
        .normalized();
    }
    let full = prefix[n];
    let tr = full.m.trace();
    if !(tr > 0.0) {
        return Err(Error::NumericalDomain {
            what: "trace of the bead-matrix product is not positive",
            value: tr * full.log.exp(),
        });
    }
    Ok(MfTables {
        log_trace: tr.ln() + full.log,
        prefix,
        suffix,
    })
}

struct NimfTables {
    /// p0[i] = M0_1 .. M0_i
    p0: Vec<Scaled>,
    /// suffix[i] = M_{i+1} .. M_N
    suffix: Vec<Scaled>,
    /// g[i] = sum_{k<=i} M0_1..M0_{k-1} Mt_k M_{k+1}..M_i
    g: Vec<Scaled>,
    /// h[i] = sum_{k>=i} M0_i..M0_{k-1} Mt_k M_{k+1}..M_N, indexed 1..=N+1
    h: Vec<Scaled>,
    log_kernel: f64,
}

fn nimf_tables(mats: &[BeadMatrices], need_gradient: bool) -> Result<NimfTables> {
    let n = mats.len();
    let mut p0 = Vec::with_capacity(n + 1);
    p0.push(Scaled::IDENTITY);
    for i in 0..n {
        let last = p0[i];
        p0.push(last.mul_plain(&mats[i].m0));
    }
    let mut suffix = vec![Scaled::IDENTITY; n + 2];
    for i in (0..n).rev() {
        let next = suffix[i + 1];
        suffix[i] = Scaled {
            m: mats[i].m.matmul(&next.m),
            log: next.log,
        }
        .normalized();
    }

    // log-sum-exp over the N one-forced-hop terms (each is nonnegative: every
    // closed electronic path uses an even number of off-diagonal steps)
    let mut terms = Vec::with_capacity(n);
    let mut smax = f64::NEG_INFINITY;
    for i in 0..n {
        let mt = mats[i].m.sub(&mats[i].m0);
        let pm = p0[i].mul_plain(&mt);
        let (tr, s) = pm.trace_mul(&suffix[i + 1]);
        if tr > 0.0 && s > smax {
            smax = s;
        }
        terms.push((tr, s));
    }
    if !smax.is_finite() {
        return Err(Error::NumericalDomain {
            what: "zero-hop-corrected kernel vanished (is the diabatic coupling zero?)",
            value: 0.0,
        });
    }
    let mut total = 0.0;
    for (tr, s) in &terms {
        total += tr.max(0.0) * (s - smax).exp();
    }
    if !(total > 0.0) {
        return Err(Error::NumericalDomain {
            what: "zero-hop-corrected kernel is not positive",
            value: total,
        });
    }
    let log_kernel = total.ln() + smax;

    let (g, h) = if need_gradient {
        let mut g = Vec::with_capacity(n + 1);
        g.push(Scaled::ZERO);
        for i in 0..n {
            let mt = mats[i].m.sub(&mats[i].m0);
            let a = g[i].mul_plain(&mats[i].m);
            let b = p0[i].mul_plain(&mt);
            g.push(a.add(&b));
        }
        let mut h = vec![Scaled::ZERO; n + 2];
        for i in (0..n).rev() {
            let mt = mats[i].m.sub(&mats[i].m0);
            let a = Scaled {
                m: mt.matmul(&suffix[i + 1].m),
                log: suffix[i + 1].log,
            }
            .normalized();
            let b = Scaled {
                m: mats[i].m0.matmul(&h[i + 2].m),
                log: h[i + 2].log,
            }
            .normalized();
            h[i + 1] = a.add(&b);
        }
        (g, h)
    } else {
        (Vec::new(), Vec::new())
    };

    Ok(NimfTables {
        p0,
        suffix,
        g,
        h,
        log_kernel,
    })
}

/// Total ring-polymer potential U_springs + U_surface.
pub fn rp_energy(
    model: &dyn DiabaticModel,
    path: &BeadPath,
    grid: &RingPolymerGrid,
    kind: SurfaceKind,
) -> Result<f64> {
    let (es, _) = spring_energy(path, grid, model.masses());
    Ok(es + surface_energy(model, path, grid, kind)?)
}

/// Surface part of the ring-polymer potential.
pub fn surface_energy(
    model: &dyn DiabaticModel,
    path: &BeadPath,
    grid: &RingPolymerGrid,
    kind: SurfaceKind,
) -> Result<f64> {
    let pts = eval_beads(model, path)?;
    match kind {
        SurfaceKind::Bo => Ok(pts.iter().map(|p| lower_adiabat_from_point(p).0).sum()),
        SurfaceKind::Mf => {
            let mats: Vec<BeadMatrices> = pts.iter().map(|p| bead_matrices(p, grid.beta_n)).collect();
            Ok(-mf_tables(&mats)?.log_trace / grid.beta_n)
        }
        SurfaceKind::Nimf => {
            let mats: Vec<BeadMatrices> = pts.iter().map(|p| bead_matrices(p, grid.beta_n)).collect();
            Ok(-nimf_tables(&mats, false)?.log_kernel / grid.beta_n)
        }
    }
}

/// Direct two-trace form of the zero-hop-corrected surface energy,
/// U = -(1/beta_N) ln( Tr prod M - Tr prod M0 ). Numerically unstable when the
/// two traces nearly cancel; kept as an independent cross-check of the stable
/// one-forced-hop sum.
pub fn surface_nimf_direct(
    model: &dyn DiabaticModel,
    path: &BeadPath,
    grid: &RingPolymerGrid,
) -> Result<f64> {
    let pts = eval_beads(model, path)?;
    let mut full = Scaled::IDENTITY;
    let mut diag = Scaled::IDENTITY;
    for p in &pts {
        let b = bead_matrices(p, grid.beta_n);
        full = full.mul_plain(&b.m);
        diag = diag.mul_plain(&b.m0);
    }
    let (t1, s1) = (full.m.trace(), full.log);
    let (t0, s0) = (diag.m.trace(), diag.log);
    let s = s1.max(s0);
    let diff = t1 * (s1 - s).exp() - t0 * (s0 - s).exp();
    if !(diff > 0.0) {
        return Err(Error::NumericalDomain {
            what: "two-trace difference is not positive",
            value: diff,
        });
    }
    Ok(-(diff.ln() + s) / grid.beta_n)
}

/// Total energy and analytic gradient of U_springs + U_surface.
pub fn rp_energy_gradient(
    model: &dyn DiabaticModel,
    path: &BeadPath,
    grid: &RingPolymerGrid,
    kind: SurfaceKind,
) -> Result<(f64, Array2<f64>)> {
    let n = path.n_beads();
    let f = path.dim();
    let (es, mut grad) = spring_energy(path, grid, model.masses());
    let pts = eval_beads(model, path)?;
    let bn = grid.beta_n;

    let esurf = match kind {
        SurfaceKind::Bo => {
            let mut e = 0.0;
            for i in 0..n {
                let (v, g) = lower_adiabat_from_point(&pts[i]);
                e += v;
                for d in 0..f {
                    grad[[i, d]] += g[d];
                }
            }
            e
        }
        SurfaceKind::Mf => {
            let mats: Vec<BeadMatrices> = pts.iter().map(|p| bead_matrices(p, bn)).collect();
            let t = mf_tables(&mats)?;
            for i in 0..n {
                // Tr[L_{i-1} dM_i S_{i+1}] = Tr[(S_{i+1} L_{i-1}) dM_i]
                let w = Scaled {
                    m: t.suffix[i + 1].m.matmul(&t.prefix[i].m),
                    log: t.suffix[i + 1].log + t.prefix[i].log,
                };
                let scale = (w.log - t.log_trace).exp();
                let c0 = w.m.trace_mul(&mats[i].dm_dv0) * scale;
                let c1 = w.m.trace_mul(&mats[i].dm_dv1) * scale;
                let cd = w.m.trace_mul(&mats[i].dm_dd) * scale;
                let p = &pts[i];
                for d in 0..f {
                    grad[[i, d]] += -(1.0 / bn)
                        * (c0 * p.grad_v0[d] + c1 * p.grad_v1[d] + cd * p.grad_delta[d]);
                }
            }
            -t.log_trace / bn
        }
        SurfaceKind::Nimf => {
            let mats: Vec<BeadMatrices> = pts.iter().map(|p| bead_matrices(p, bn)).collect();
            let t = nimf_tables(&mats, true)?;
            for i in 0..n {
                // full-M derivative couples through both the forced-hop term at
                // bead i and every suffix containing bead i:
                //   Tr[(G_{i-1} + P_{i-1}) dM_i S_{i+1}]
                let a = t.g[i].add(&t.p0[i]);
                let wm = Scaled {
                    m: t.suffix[i + 1].m.matmul(&a.m),
                    log: t.suffix[i + 1].log + a.log,
                };
                // diagonal-only derivative couples through every prefix and
                // through the forced-hop subtraction:
                //   Tr[P_{i-1} dM0_i (H_{i+1} - S_{i+1})]
                let hm = t.h[i + 2].add(&Scaled {
                    m: t.suffix[i + 1].m.scale(-1.0),
                    log: t.suffix[i + 1].log,
                });
                let wz = Scaled {
                    m: hm.m.matmul(&t.p0[i].m),
                    log: hm.log + t.p0[i].log,
                };
                let sm = (wm.log - t.log_kernel).exp();
                let sz = (wz.log - t.log_kernel).exp();
                let c0 = wm.m.trace_mul(&mats[i].dm_dv0) * sm
                    + wz.m.0[0][0] * mats[i].dm0_dv0 * sz;
                let c1 = wm.m.trace_mul(&mats[i].dm_dv1) * sm
                    + wz.m.0[1][1] * mats[i].dm0_dv1 * sz;
                let cd = wm.m.trace_mul(&mats[i].dm_dd) * sm;
                let p = &pts[i];
                for d in 0..f {
                    grad[[i, d]] += -(1.0 / bn)
                        * (c0 * p.grad_v0[d] + c1 * p.grad_v1[d] + cd * p.grad_delta[d]);
                }
            }
            -t.log_kernel / bn
        }
    };
    Ok((es + esurf, grad))
}

/// Full-path gradient of U_springs + U_surface (shape N x f).
pub fn rp_gradient(
    model: &dyn DiabaticModel,
    path: &BeadPath,
    grid: &RingPolymerGrid,
    kind: SurfaceKind,
) -> Result<Array2<f64>> {
    Ok(rp_energy_gradient(model, path, grid, kind)?.1)
}

/// Ring-polymer Hessian (Nf x Nf) by central finite differences of the analytic
/// gradient; symmetrized. The displacement per coordinate is `h` in
/// mass-weighted units (default 1e-5). Columns are differentiated by
/// concurrent workers; memory is O((Nf)^2).
pub fn rp_hessian(
    model: &dyn DiabaticModel,
    path: &BeadPath,
    grid: &RingPolymerGrid,
    kind: SurfaceKind,
    h: f64,
) -> Result<Array2<f64>> {
    let n = path.n_beads();
    let f = path.dim();
    let nf = n * f;
    let masses = model.masses();
    let cols: Vec<Result<Vec<f64>>> = (0..nf)
        .into_par_iter()
        .map(|idx| {
            let (i, d) = (idx / f, idx % f);
            let step = h / masses[d].sqrt();
            let mut p = path.clone();
            p.coords[[i, d]] += step;
            let gp = rp_gradient(model, &p, grid, kind)?;
            p.coords[[i, d]] -= 2.0 * step;
            let gm = rp_gradient(model, &p, grid, kind)?;
            let col: Vec<f64> = gp
                .iter()
                .zip(gm.iter())
                .map(|(a, b)| (a - b) / (2.0 * step))
                .collect();
            Ok(col)
        })
        .collect();
    let mut hess = Array2::zeros((nf, nf));
    for (idx, col) in cols.into_iter().enumerate() {
        let col = col?;
        for r in 0..nf {
            hess[[r, idx]] = col[r];
        }
    }
    let ht = hess.t().to_owned();
    Ok(0.5 * (&hess + &ht))
}

// ---------------------------------------------------------------------------
// Mode spectrum
// ---------------------------------------------------------------------------

/// Classified mass-weighted normal modes of a ring-polymer Hessian.
#[derive(Debug, Clone, Serialize)]
pub struct ModeSpectrum {
    /// Eigenvalues of the mass-weighted Hessian, ascending.
    pub eigenvalues: Vec<f64>,
    /// Frequencies sign(lambda) sqrt(|lambda|).
    pub frequencies: Vec<f64>,
    pub n_negative: usize,
    pub n_zero: usize,
    pub n_positive: usize,
    pub zero_tol: f64,
}

impl ModeSpectrum {
    /// Index of the smallest-magnitude eigenvalue (the permutational mode at a
    /// converged instanton).
    pub fn softest_index(&self) -> usize {
        let mut best = 0;
        for (k, l) in self.eigenvalues.iter().enumerate() {
            if l.abs() < self.eigenvalues[best].abs() {
                best = k;
            }
        }
        best
    }
}

/// Mass-weighted eigendecomposition with near-zero classification at
/// |lambda| < zero_tol * max|lambda|.
pub fn mode_spectrum(hessian: &Array2<f64>, masses: &[f64], zero_tol: f64) -> Result<ModeSpectrum> {
    let nf = hessian.nrows();
    let f = masses.len();
    if nf % f != 0 {
        return Err(Error::InvalidInput(
            "hessian size is not a multiple of the coordinate count".into(),
        ));
    }
    let mut hw = hessian.clone();
    for i in 0..nf {
        for j in 0..nf {
            hw[[i, j]] /= (masses[i % f] * masses[j % f]).sqrt();
        }
    }
    let mut vals = linalg::eigvalsh(&hw)?.to_vec();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lmax = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = zero_tol * lmax;
    let mut n_negative = 0;
    let mut n_zero = 0;
    let mut n_positive = 0;
    let mut frequencies = Vec::with_capacity(vals.len());
    for &l in &vals {
        if l.abs() <= tol {
            n_zero += 1;
        } else if l < 0.0 {
            n_negative += 1;
        } else {
            n_positive += 1;
        }
        frequencies.push(l.signum() * l.abs().sqrt());
    }
    Ok(ModeSpectrum {
        eigenvalues: vals,
        frequencies,
        n_negative,
        n_zero,
        n_positive,
        zero_tol,
    })
}

/// Mass-weighted Hessian eigenpairs (used by saddle searches).
pub fn mass_weighted_eigh(hessian: &Array2<f64>, masses: &[f64]) -> Result<linalg::Eigh> {
    let nf = hessian.nrows();
    let f = masses.len();
    let mut hw = hessian.clone();
    for i in 0..nf {
        for j in 0..nf {
            hw[[i, j]] /= (masses[i % f] * masses[j % f]).sqrt();
        }
    }
    linalg::eigh(&hw)
}

/// Default finite-difference step for ring-polymer Hessians.
pub const DEFAULT_HESSIAN_STEP: f64 = 1e-5;
/// Default relative tolerance classifying near-zero modes.
pub const DEFAULT_ZERO_TOL: f64 = 1e-8;
