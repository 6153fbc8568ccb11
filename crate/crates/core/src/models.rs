//! Two-state diabatic potential models and derived adiabatic quantities.
//!
//! Every model exposes the diabatic matrix elements V0, V1, Delta and their
//! gradients on f nuclear coordinates. Coordinates are mass-weighted only
//! through the explicit per-coordinate masses carried by the model; the
//! default parameterizations use reduced units m = hbar = 1.

use crate::error::{Error, Result};
use crate::linalg;
use ndarray::{Array1, Array2};
use std::f64::consts::PI;

/// Diabatic matrix elements and gradients at one nuclear configuration.
#[derive(Debug, Clone, Default)]
pub struct DiabaticPoint {
    pub v0: f64,
    pub v1: f64,
    pub delta: f64,
    pub grad_v0: Vec<f64>,
    pub grad_v1: Vec<f64>,
    pub grad_delta: Vec<f64>,
}

/// A two-state diabatic model on f nuclear coordinates.
pub trait DiabaticModel: Send + Sync {
    fn dim(&self) -> usize;
    fn masses(&self) -> &[f64];
    fn name(&self) -> &str;

    /// Sign of the diabatic coupling registered at construction. Models with
    /// sign-changing Delta are rejected (geometric-phase effects are out of
    /// scope); `eval_diabatic` enforces this at every call.
    fn delta_sign(&self) -> f64;

    /// Raw evaluation without input validation.
    fn eval_raw(&self, x: &[f64], out: &mut DiabaticPoint);

    /// Collapsed start point for barrier searches (defaults to the origin).
    fn barrier_start(&self) -> Vec<f64> {
        vec![0.0; self.dim()]
    }

    /// Bracketing interval along the first coordinate for 1D barrier location.
    fn barrier_bracket(&self) -> (f64, f64) {
        (-10.0, 10.0)
    }

    /// Reactant-minimum start point; `None` for scattering (unbound) models.
    fn reactant_start(&self) -> Option<Vec<f64>> {
        None
    }
}

/// Validated evaluation of the diabatic matrix and its gradients.
pub fn eval_diabatic(model: &dyn DiabaticModel, x: &[f64], out: &mut DiabaticPoint) -> Result<()> {
    if x.len() != model.dim() {
        return Err(Error::InvalidInput(format!(
            "coordinate length {} does not match model dimension {}",
            x.len(),
            model.dim()
        )));
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("non-finite coordinate".into()));
    }
    model.eval_raw(x, out);
    let s = model.delta_sign();
    if s != 0.0 && out.delta * s < 0.0 {
        return Err(Error::UnsupportedModel(format!(
            "diabatic coupling changed sign (delta = {:e} against registered sign {})",
            out.delta, s
        )));
    }
    Ok(())
}

/// Lower adiabatic surface V_BO = (V0+V1)/2 - sqrt(((V0-V1)/2)^2 + Delta^2)
/// and its gradient by the chain rule.
pub fn lower_adiabat(model: &dyn DiabaticModel, x: &[f64]) -> Result<(f64, Vec<f64>)> {
    let mut p = DiabaticPoint::default();
    eval_diabatic(model, x, &mut p)?;
    Ok(lower_adiabat_from_point(&p))
}

pub(crate) fn lower_adiabat_from_point(p: &DiabaticPoint) -> (f64, Vec<f64>) {
    let half_gap = 0.5 * (p.v0 - p.v1);
    let r = (half_gap * half_gap + p.delta * p.delta).sqrt();
    let v = 0.5 * (p.v0 + p.v1) - r;
    let f = p.grad_v0.len();
    let mut g = vec![0.0; f];
    for d in 0..f {
        let gbar = 0.5 * (p.grad_v0[d] + p.grad_v1[d]);
        let ghalf = 0.5 * (p.grad_v0[d] - p.grad_v1[d]);
        let gr = if r > 0.0 {
            (half_gap * ghalf + p.delta * p.grad_delta[d]) / r
        } else {
            0.0
        };
        g[d] = gbar - gr;
    }
    (v, g)
}

// ---------------------------------------------------------------------------
// Linear crossing
// ---------------------------------------------------------------------------

/// One-dimensional linear crossing V_n(x) = V_dagger + kappa_n x with constant
/// diabatic coupling.
#[derive(Debug, Clone)]
pub struct LinearCrossingModel {
    pub kappa0: f64,
    pub kappa1: f64,
    pub delta: f64,
    pub v_dagger: f64,
    pub mass: f64,
    masses: [f64; 1],
    name: String,
}

impl LinearCrossingModel {
    pub fn new(kappa0: f64, kappa1: f64, delta: f64, v_dagger: f64, mass: f64) -> Result<Self> {
        if kappa0 == kappa1 {
            return Err(Error::InvalidInput("linear crossing requires kappa0 != kappa1".into()));
        }
        if !(mass > 0.0) {
            return Err(Error::InvalidInput("mass must be positive".into()));
        }
        Ok(LinearCrossingModel {
            kappa0,
            kappa1,
            delta,
            v_dagger,
            mass,
            masses: [mass],
            name: format!("linear_crossing(k0={kappa0},k1={kappa1})"),
        })
    }

    /// The symmetric model kappa0 = -kappa1 = kappa with barrier offset zero.
    pub fn symmetric(kappa: f64, delta: f64) -> Self {
        Self::new(kappa, -kappa, delta, 0.0, 1.0).expect("kappa != -kappa")
    }
}

impl DiabaticModel for LinearCrossingModel {
    fn dim(&self) -> usize {
        1
    }
    fn masses(&self) -> &[f64] {
        &self.masses
    }
    fn name(&self) -> &str {
        &self.name
    }
    fn delta_sign(&self) -> f64 {
        if self.delta == 0.0 {
            0.0
        } else {
            self.delta.signum()
        }
    }
    fn eval_raw(&self, x: &[f64], out: &mut DiabaticPoint) {
        let xx = x[0];
        out.v0 = self.v_dagger + self.kappa0 * xx;
        out.v1 = self.v_dagger + self.kappa1 * xx;
        out.delta = self.delta;
        out.grad_v0.clear();
        out.grad_v0.push(self.kappa0);
        out.grad_v1.clear();
        out.grad_v1.push(self.kappa1);
        out.grad_delta.clear();
        out.grad_delta.push(0.0);
    }
    fn barrier_bracket(&self) -> (f64, f64) {
        // the avoided crossing sits at x = 0 by construction
        (-20.0, 20.0)
    }
}

// ---------------------------------------------------------------------------
// System-bath (spin-boson) model
// ---------------------------------------------------------------------------

/// Parameters of the Brownian-oscillator environment: a harmonic reaction
/// coordinate of frequency `omega` under Ohmic friction `gamma`, reorganisation
/// energy `lambda`, discretized into `f - 1` explicit bath oscillators up to
/// the cutoff `omega_max`.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct BathSpec {
    pub lambda: f64,
    pub omega: f64,
    pub gamma: f64,
    pub f: usize,
    pub omega_max: f64,
}

impl BathSpec {
    pub fn new(lambda: f64, omega: f64, gamma: f64, f: usize, omega_max: Option<f64>) -> Result<Self> {
        if !(lambda > 0.0 && omega > 0.0 && gamma >= 0.0) {
            return Err(Error::InvalidInput(
                "bath spec requires lambda, omega > 0 and gamma >= 0".into(),
            ));
        }
        if f < 2 {
            return Err(Error::InvalidInput("system-bath model requires f >= 2".into()));
        }
        let omega_max = omega_max.unwrap_or(10.0 * omega.max(gamma));
        if !(omega_max > 0.0) {
            return Err(Error::InvalidInput("omega_max must be positive".into()));
        }
        Ok(BathSpec {
            lambda,
            omega,
            gamma,
            f,
            omega_max,
        })
    }
}

/// Spin-boson model in explicit system-bath form:
///
/// V_n(Q, q) = 1/2 Omega^2 (Q + (-1)^n a)^2 + sum_j 1/2 w_j^2 (q_j - c_j Q / w_j)^2
///
/// with displacement a = sqrt(lambda/2)/Omega so that the Marcus reorganisation
/// energy equals `lambda`, and Ohmic bath couplings c_j = sqrt(2 gamma dw / pi)
/// on the uniform grid w_j = omega_max (j - 1/2)/(f - 1).
#[derive(Debug, Clone)]
pub struct SystemBathModel {
    pub spec: BathSpec,
    pub delta: f64,
    pub displacement: f64,
    pub bath_omega: Vec<f64>,
    pub bath_coupling: Vec<f64>,
    masses: Vec<f64>,
    name: String,
}

/// Deterministic discretization of the Ohmic friction kernel: same spec gives
/// bit-identical couplings.
pub fn discretize_bath(spec: &BathSpec, delta: f64) -> Result<SystemBathModel> {
    let nb = spec.f - 1;
    if nb < 1 {
        return Err(Error::InvalidInput("bath size must be at least 1".into()));
    }
    let dw = spec.omega_max / nb as f64;
    let mut bath_omega = Vec::with_capacity(nb);
    let mut bath_coupling = Vec::with_capacity(nb);
    let c = (2.0 * spec.gamma * dw / PI).sqrt();
    for j in 1..=nb {
        bath_omega.push(spec.omega_max * (j as f64 - 0.5) / nb as f64);
        bath_coupling.push(c);
    }
    let displacement = (spec.lambda / 2.0).sqrt() / spec.omega;
    Ok(SystemBathModel {
        delta,
        displacement,
        bath_omega,
        bath_coupling,
        masses: vec![1.0; spec.f],
        name: format!(
            "system_bath(lambda={},omega={},gamma={},f={})",
            spec.lambda, spec.omega, spec.gamma, spec.f
        ),
        spec: spec.clone(),
    })
}

impl SystemBathModel {
    /// Discrete friction kernel sum_j c_j^2 cos(w_j t) on the reaction coordinate.
    pub fn friction_kernel(&self, t: f64) -> f64 {
        self.bath_coupling
            .iter()
            .zip(&self.bath_omega)
            .map(|(c, w)| c * c * (w * t).cos())
            .sum()
    }
}

impl DiabaticModel for SystemBathModel {
    fn dim(&self) -> usize {
        self.spec.f
    }
    fn masses(&self) -> &[f64] {
        &self.masses
    }
    fn name(&self) -> &str {
        &self.name
    }
    fn delta_sign(&self) -> f64 {
        if self.delta == 0.0 {
            0.0
        } else {
            self.delta.signum()
        }
    }
    fn eval_raw(&self, x: &[f64], out: &mut DiabaticPoint) {
        let f = self.spec.f;
        let q = x[0];
        let om2 = self.spec.omega * self.spec.omega;
        let a = self.displacement;
        out.grad_v0.resize(f, 0.0);
        out.grad_v1.resize(f, 0.0);
        out.grad_delta.resize(f, 0.0);
        out.grad_delta.fill(0.0);

        let mut vb = 0.0;
        let mut dvb_dq = 0.0;
        for j in 0..f - 1 {
            let w = self.bath_omega[j];
            let c = self.bath_coupling[j];
            let dev = x[1 + j] - c * q / w;
            vb += 0.5 * w * w * dev * dev;
            dvb_dq -= w * c * dev;
            let g = w * w * dev;
            out.grad_v0[1 + j] = g;
            out.grad_v1[1 + j] = g;
        }
        out.v0 = 0.5 * om2 * (q + a) * (q + a) + vb;
        out.v1 = 0.5 * om2 * (q - a) * (q - a) + vb;
        out.delta = self.delta;
        out.grad_v0[0] = om2 * (q + a) + dvb_dq;
        out.grad_v1[0] = om2 * (q - a) + dvb_dq;
    }
    fn reactant_start(&self) -> Option<Vec<f64>> {
        let mut x = vec![0.0; self.spec.f];
        x[0] = -self.displacement;
        for j in 0..self.spec.f - 1 {
            x[1 + j] = self.bath_coupling[j] * x[0] / self.bath_omega[j];
        }
        Some(x)
    }
    fn barrier_bracket(&self) -> (f64, f64) {
        let a = self.displacement;
        (-1.5 * a, 1.5 * a)
    }
}

// ---------------------------------------------------------------------------
// Barrier characterization on the lower adiabat
// ---------------------------------------------------------------------------

/// Stationary-point data of the lower adiabatic surface.
#[derive(Debug, Clone)]
pub struct AdiabatInfo {
    pub barrier_x: Vec<f64>,
    pub barrier_v: f64,
    /// Magnitude of the imaginary barrier frequency from the mass-weighted
    /// Hessian's single negative eigenvalue.
    pub omega_b: f64,
    /// Stable barrier frequencies (f - 1 of them).
    pub barrier_omegas: Vec<f64>,
    /// Reactant minimum; absent for scattering models.
    pub reactant_x: Option<Vec<f64>>,
    pub reactant_v: Option<f64>,
    pub reactant_omegas: Option<Vec<f64>>,
}

fn adiabat_hessian(model: &dyn DiabaticModel, x: &[f64], h: f64) -> Result<Array2<f64>> {
    let f = model.dim();
    let mut hess = Array2::zeros((f, f));
    let mut xp = x.to_vec();
    for d in 0..f {
        xp[d] = x[d] + h;
        let (_, gp) = lower_adiabat(model, &xp)?;
        xp[d] = x[d] - h;
        let (_, gm) = lower_adiabat(model, &xp)?;
        xp[d] = x[d];
        for i in 0..f {
            hess[[i, d]] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    let hess_t = hess.t().to_owned();
    Ok(0.5 * (&hess + &hess_t))
}

/// Newton search for a stationary point of the lower adiabat from `x0`.
fn adiabat_stationary(model: &dyn DiabaticModel, x0: &[f64]) -> Result<Vec<f64>> {
    let mut x = x0.to_vec();
    for _ in 0..200 {
        let (_, g) = lower_adiabat(model, &x)?;
        let gi = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if gi < 1e-12 {
            return Ok(x);
        }
        let hess = adiabat_hessian(model, &x, 1e-5)?;
        let step = linalg::solve(&hess, &Array1::from_vec(g.clone()))?;
        let norm = step.iter().map(|v| v * v).sum::<f64>().sqrt();
        let damp = if norm > 1.0 { 1.0 / norm } else { 1.0 };
        for d in 0..x.len() {
            x[d] -= damp * step[d];
        }
    }
    Err(Error::SearchFailure(
        "adiabat stationary-point Newton iteration did not converge".into(),
    ))
}

/// Golden-section maximization of V_BO along the first coordinate.
fn maximize_1d(model: &dyn DiabaticModel, lo: f64, hi: f64) -> Result<f64> {
    let f = |x: f64| -> Result<f64> {
        let (v, _) = lower_adiabat(model, &[x])?;
        Ok(v)
    };
    let gr = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..300 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d)?;
        }
        if (b - a).abs() < 1e-13 * (1.0 + b.abs()) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    if (x - lo).abs() < 1e-6 * (hi - lo) || (x - hi).abs() < 1e-6 * (hi - lo) {
        return Err(Error::SearchFailure(format!(
            "no interior barrier maximum in bracket [{lo}, {hi}]"
        )));
    }
    Ok(x)
}

fn mass_weighted_adiabat_eigs(model: &dyn DiabaticModel, x: &[f64]) -> Result<Array1<f64>> {
    let hess = adiabat_hessian(model, x, 1e-5)?;
    let masses = model.masses();
    let f = model.dim();
    let mut hw = Array2::zeros((f, f));
    for i in 0..f {
        for j in 0..f {
            hw[[i, j]] = hess[[i, j]] / (masses[i] * masses[j]).sqrt();
        }
    }
    linalg::eigvalsh(&hw)
}

/// Locate the barrier top of the lower adiabat (1D maximization or f-dim
/// Newton saddle search) and, for bound models, the reactant minimum.
pub fn barrier_top(model: &dyn DiabaticModel) -> Result<AdiabatInfo> {
    let f = model.dim();
    let barrier_x = if f == 1 {
        let (lo, hi) = model.barrier_bracket();
        let x = maximize_1d(model, lo, hi)?;
        // polish with Newton on the gradient
        adiabat_stationary(model, &[x]).unwrap_or(vec![x])
    } else {
        adiabat_stationary(model, &model.barrier_start())?
    };
    let (barrier_v, _) = lower_adiabat(model, &barrier_x)?;
    let eigs = mass_weighted_adiabat_eigs(model, &barrier_x)?;
    let n_neg = eigs.iter().filter(|&&l| l < 0.0).count();
    if n_neg != 1 {
        return Err(Error::SearchFailure(format!(
            "barrier Hessian has {n_neg} negative eigenvalues (expected exactly 1)"
        )));
    }
    let omega_b = (-eigs[0]).sqrt();
    let barrier_omegas: Vec<f64> = eigs.iter().skip(1).map(|l| l.sqrt()).collect();

    let (reactant_x, reactant_v, reactant_omegas) = match model.reactant_start() {
        Some(x0) => {
            let xr = adiabat_stationary(model, &x0)?;
            let (vr, _) = lower_adiabat(model, &xr)?;
            let er = mass_weighted_adiabat_eigs(model, &xr)?;
            if er.iter().any(|&l| l <= 0.0) {
                return Err(Error::SearchFailure(
                    "reactant stationary point is not a minimum".into(),
                ));
            }
            let ws: Vec<f64> = er.iter().map(|l| l.sqrt()).collect();
            (Some(xr), Some(vr), Some(ws))
        }
        None => (None, None, None),
    };

    Ok(AdiabatInfo {
        barrier_x,
        barrier_v,
        omega_b,
        barrier_omegas,
        reactant_x,
        reactant_v,
        reactant_omegas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn linear_crossing_at_origin() {
        // kappa0 = 1, kappa1 = -10 crossing with the crossing point at x = 0
        let m = LinearCrossingModel::new(1.0, -10.0, 0.1, 0.0, 1.0).unwrap();
        let mut p = DiabaticPoint::default();
        eval_diabatic(&m, &[0.0], &mut p).unwrap();
        assert_eq!((p.v0, p.v1, p.delta), (0.0, 0.0, 0.1));
    }

    #[test]
    fn symmetric_crossing_degenerate_at_origin() {
        let m = LinearCrossingModel::symmetric(1.0, 0.7);
        let mut p = DiabaticPoint::default();
        eval_diabatic(&m, &[0.0], &mut p).unwrap();
        assert_eq!(p.v0, 0.0);
        assert_eq!(p.v1, 0.0);
    }

    #[test]
    fn non_finite_input_rejected() {
        let m = LinearCrossingModel::symmetric(1.0, 0.5);
        let mut p = DiabaticPoint::default();
        assert!(matches!(
            eval_diabatic(&m, &[f64::NAN], &mut p),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn lower_adiabat_closed_forms() {
        // degenerate diabats: V_BO = Vbar - Delta
        let m = LinearCrossingModel::symmetric(1.0, 1.0);
        let (v, _) = lower_adiabat(&m, &[0.0]).unwrap();
        assert_relative_eq!(v, -1.0, epsilon = 1e-14);
        // kappa = +-1, Delta = 1, x = 2: V_BO = -sqrt(5)
        let (v, _) = lower_adiabat(&m, &[2.0]).unwrap();
        assert_relative_eq!(v, -(5.0f64).sqrt(), epsilon = 1e-14);
        // Delta = 0: pointwise min of the diabats
        let m0 = LinearCrossingModel::new(1.0, -1.0, 0.0, 0.3, 1.0).unwrap();
        let (v, _) = lower_adiabat(&m0, &[1.5]).unwrap();
        assert_relative_eq!(v, 0.3 - 1.5, epsilon = 1e-14);
    }

    #[test]
    fn lower_adiabat_swap_invariance() {
        let a = LinearCrossingModel::new(0.7, -2.0, 0.4, 0.1, 1.0).unwrap();
        let b = LinearCrossingModel::new(-2.0, 0.7, 0.4, 0.1, 1.0).unwrap();
        for &x in &[-1.3, 0.0, 0.8, 2.2] {
            let (va, _) = lower_adiabat(&a, &[x]).unwrap();
            let (vb, _) = lower_adiabat(&b, &[x]).unwrap();
            assert_relative_eq!(va, vb, epsilon = 1e-14);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let spec = BathSpec::new(60.0, 4.0, 4.0, 6, None).unwrap();
        let sb = discretize_bath(&spec, 1.3).unwrap();
        let models: [&dyn DiabaticModel; 2] = [
            &LinearCrossingModel::new(1.0, -10.0, 0.37, 0.2, 1.0).unwrap(),
            &sb,
        ];
        for model in models {
            let f = model.dim();
            for _ in 0..20 {
                let x: Vec<f64> = (0..f).map(|_| rng.random_range(-1.5..1.5)).collect();
                let mut p = DiabaticPoint::default();
                eval_diabatic(model, &x, &mut p).unwrap();
                let h = 1e-5;
                let mut xp = x.clone();
                for d in 0..f {
                    xp[d] = x[d] + h;
                    let mut pp = DiabaticPoint::default();
                    eval_diabatic(model, &xp, &mut pp).unwrap();
                    xp[d] = x[d] - h;
                    let mut pm = DiabaticPoint::default();
                    eval_diabatic(model, &xp, &mut pm).unwrap();
                    xp[d] = x[d];
                    let scale = 1.0 + p.grad_v0[d].abs().max(p.grad_v1[d].abs());
                    assert_relative_eq!(
                        p.grad_v0[d],
                        (pp.v0 - pm.v0) / (2.0 * h),
                        max_relative = 1e-7,
                        epsilon = 1e-7 * scale
                    );
                    assert_relative_eq!(
                        p.grad_v1[d],
                        (pp.v1 - pm.v1) / (2.0 * h),
                        max_relative = 1e-7,
                        epsilon = 1e-7 * scale
                    );
                }
            }
        }
    }

    #[test]
    fn system_bath_completed_square_vanishes() {
        let spec = BathSpec::new(60.0, 4.0, 4.0, 8, None).unwrap();
        let sb = discretize_bath(&spec, 1.0).unwrap();
        // bath relaxed at q_j = c_j Q / w_j: the V_sb term is zero, so
        // V0 reduces to the bare displaced well.
        let q = -0.7;
        let mut x = vec![0.0; 8];
        x[0] = q;
        for j in 0..7 {
            x[1 + j] = sb.bath_coupling[j] * q / sb.bath_omega[j];
        }
        let mut p = DiabaticPoint::default();
        eval_diabatic(&sb, &x, &mut p).unwrap();
        let a = sb.displacement;
        let bare = 0.5 * spec.omega * spec.omega * (q + a) * (q + a);
        assert_relative_eq!(p.v0, bare, max_relative = 1e-13);
    }

    #[test]
    fn discretize_bath_deterministic_and_sized() {
        let spec = BathSpec::new(60.0, 4.0, 4.0, 14, None).unwrap();
        let a = discretize_bath(&spec, 1.0).unwrap();
        let b = discretize_bath(&spec, 1.0).unwrap();
        assert_eq!(a.dim(), 14);
        assert_eq!(a.bath_omega, b.bath_omega);
        assert_eq!(a.bath_coupling, b.bath_coupling);
    }

    #[test]
    fn zero_friction_decouples_bath() {
        let spec = BathSpec::new(60.0, 4.0, 0.0, 8, Some(40.0)).unwrap();
        let sb = discretize_bath(&spec, 1.0).unwrap();
        assert!(sb.bath_coupling.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn friction_kernel_matches_continuum_at_t0() {
        // continuum Ohmic kernel at t = 0 is (2 gamma / pi) * omega_max
        let gamma = 4.0;
        let wmax = 40.0;
        for &f in &[8usize, 64] {
            let spec = BathSpec::new(60.0, 4.0, gamma, f, Some(wmax)).unwrap();
            let sb = discretize_bath(&spec, 1.0).unwrap();
            let cont = 2.0 * gamma * wmax / PI;
            let rel = (sb.friction_kernel(0.0) - cont).abs() / cont;
            assert!(rel < 0.02, "f={f}: rel error {rel}");
        }
    }

    #[test]
    fn barrier_top_symmetric_crossing() {
        let m = LinearCrossingModel::symmetric(1.0, 2.5);
        let info = barrier_top(&m).unwrap();
        assert!(info.barrier_x[0].abs() < 1e-8);
        assert_relative_eq!(info.barrier_v, -2.5, epsilon = 1e-9);
        // V_BO'' = -1/Delta for the symmetric crossing at the top
        assert_relative_eq!(info.omega_b, (1.0 / 2.5f64).sqrt(), max_relative = 1e-6);
        assert!(info.reactant_x.is_none());
    }

    #[test]
    fn barrier_top_asymmetric_regression() {
        // kappa0 = 1, kappa1 = -10, Delta = 2.5: maximum of the lower adiabat,
        // frozen from a dense-grid scan cross-check.
        let m = LinearCrossingModel::new(1.0, -10.0, 2.5, 0.0, 1.0).unwrap();
        let info = barrier_top(&m).unwrap();
        // independent dense-grid scan oracle
        let mut best = (f64::NEG_INFINITY, 0.0);
        let n = 400_001;
        for i in 0..n {
            let x = -4.0 + 8.0 * i as f64 / (n - 1) as f64;
            let (v, _) = lower_adiabat(&m, &[x]).unwrap();
            if v > best.0 {
                best = (v, x);
            }
        }
        assert!((info.barrier_x[0] - best.1).abs() < 1e-4);
        assert_relative_eq!(info.barrier_v, best.0, epsilon = 1e-9);
    }

    #[test]
    fn barrier_top_system_bath_at_symmetry_point() {
        let spec = BathSpec::new(60.0, 4.0, 4.0, 6, None).unwrap();
        let sb = discretize_bath(&spec, 1.0).unwrap();
        let info = barrier_top(&sb).unwrap();
        for d in 0..6 {
            assert!(info.barrier_x[d].abs() < 1e-8, "coordinate {d} off symmetry");
        }
        assert!(info.reactant_x.is_some());
        let vr = info.reactant_v.unwrap();
        assert!(vr < 0.0 && vr > -0.1, "reactant shifted only by the small avoided-crossing mixing: {vr}");
    }
}
