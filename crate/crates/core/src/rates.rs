//! Rate assembly: steepest-descent partition functions, instanton Im Z with
//! zero-mode handling, deep-tunnelling and high-temperature rates, and regime
//! dispatch.
//!
//! Sign convention: Im Z and Im F are stored as positive magnitudes; the rate
//! formulas absorb the minus signs so every reported rate is positive.

use crate::error::{Error, Result};
use crate::models::DiabaticModel;
use crate::rp::{RingPolymerGrid, SurfaceKind};
use crate::saddle::{
    crossover_beta, find_collapsed_barrier, find_instanton, minimize_reactant, BeadPolicy,
    Classification, GuessSpec, OptimizerSettings, StationaryPoint,
};
use serde::Serialize;
use std::f64::consts::PI;

/// Where a reactant partition function came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionOrigin {
    SteepestDescentMinimum,
    FreeParticlePerLength,
    /// log Z_R = 0: the bare-trace normalization used by the closed-form
    /// linear-crossing expressions.
    Unit,
}

/// Reactant partition function in log form.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionFactors {
    pub log_zr: f64,
    pub origin: PartitionOrigin,
    /// -sum ln(beta_N hbar omega_k) over all Nf modes (steepest-descent only).
    pub log_mode_product: Option<f64>,
    pub n_modes: Option<usize>,
}

impl PartitionFactors {
    /// Free particle per unit length, exact at any bead count.
    pub fn free_particle(beta: f64, mass: f64, hbar: f64) -> Self {
        PartitionFactors {
            log_zr: 0.5 * (mass / (2.0 * PI * beta * hbar * hbar)).ln(),
            origin: PartitionOrigin::FreeParticlePerLength,
            log_mode_product: None,
            n_modes: None,
        }
    }

    /// Unit normalization (log Z_R = 0).
    pub fn unit() -> Self {
        PartitionFactors {
            log_zr: 0.0,
            origin: PartitionOrigin::Unit,
            log_mode_product: None,
            n_modes: None,
        }
    }
}

/// N-bead steepest-descent reactant partition function from a converged
/// minimum: Z_R = prod_k (beta_N hbar omega_k)^{-1} exp(-beta_N U_RP). The
/// N-bead form (rather than the analytic N -> infinity limit) is used for
/// error cancellation against the instanton mode product.
pub fn reactant_partition(sp: &StationaryPoint, grid: &RingPolymerGrid) -> Result<PartitionFactors> {
    if sp.classification != Classification::Minimum {
        return Err(Error::InvalidState("reactant partition needs a converged minimum".into()));
    }
    let mut log_prod = 0.0;
    for &l in &sp.spectrum.eigenvalues {
        if l <= 0.0 {
            return Err(Error::InvalidState(format!(
                "imaginary reactant frequency (lambda = {l:e})"
            )));
        }
        log_prod -= (grid.beta_n * grid.hbar * l.sqrt()).ln();
    }
    Ok(PartitionFactors {
        log_zr: log_prod - grid.beta_n * sp.energy,
        origin: PartitionOrigin::SteepestDescentMinimum,
        log_mode_product: Some(log_prod),
        n_modes: Some(sp.spectrum.eigenvalues.len()),
    })
}

/// ln Im Z for an extended instanton:
///   ln(N/2) + (1/2) ln(B_N / (2 pi beta_N hbar^2)) - sum' ln(beta_N hbar |omega_k|) - beta_N U_RP
/// The primed sum excludes exactly the one near-zero (permutational) mode; the
/// single negative mode enters by absolute value.
pub fn im_z_instanton(sp: &StationaryPoint, grid: &RingPolymerGrid) -> Result<f64> {
    if sp.classification != Classification::Instanton {
        return Err(Error::InvalidState("im_z_instanton needs an instanton".into()));
    }
    if !(sp.b_n > 0.0) {
        return Err(Error::InvalidState(
            "zero-mode volume vanishes (collapsed path has B_N = 0)".into(),
        ));
    }
    let soft = sp.spectrum.softest_index();
    let mut log_prod = 0.0;
    let mut n_neg = 0;
    for (k, &l) in sp.spectrum.eigenvalues.iter().enumerate() {
        if k == soft {
            continue;
        }
        if l < 0.0 {
            n_neg += 1;
        }
        log_prod -= (grid.beta_n * grid.hbar * l.abs().sqrt()).ln();
    }
    if n_neg != 1 {
        return Err(Error::InvalidState(format!(
            "instanton mode product kept {n_neg} negative modes (expected 1)"
        )));
    }
    let n = grid.n_beads as f64;
    Ok((n / 2.0).ln()
        + 0.5 * (sp.b_n / (2.0 * PI * grid.beta_n * grid.hbar * grid.hbar)).ln()
        + log_prod
        - grid.beta_n * sp.energy)
}

/// ln Im Z for a collapsed barrier configuration:
///   ln(1/2) - sum_{all modes} ln(beta_N hbar |omega_k|) - beta_N U_RP
pub fn im_z_collapsed(sp: &StationaryPoint, grid: &RingPolymerGrid) -> Result<f64> {
    if sp.classification != Classification::CollapsedBarrier {
        return Err(Error::InvalidState("im_z_collapsed needs a collapsed barrier point".into()));
    }
    if sp.spectrum.n_zero > 0 {
        return Err(Error::InvalidState(
            "collapsed barrier point has a near-zero mode (too close to crossover)".into(),
        ));
    }
    let mut log_prod = 0.0;
    let mut n_neg = 0;
    for &l in &sp.spectrum.eigenvalues {
        if l < 0.0 {
            n_neg += 1;
        }
        log_prod -= (grid.beta_n * grid.hbar * l.abs().sqrt()).ln();
    }
    if n_neg != 1 {
        return Err(Error::InvalidState(format!(
            "collapsed barrier has {n_neg} negative modes (expected 1)"
        )));
    }
    Ok(0.5f64.ln() + log_prod - grid.beta_n * sp.energy)
}

/// Temperature regime of a rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    DeepTunnelling,
    HighTemperature,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::DeepTunnelling => write!(f, "deep-tunnelling"),
            Regime::HighTemperature => write!(f, "high-temperature"),
        }
    }
}

/// Stored pieces from which the rate is re-derivable.
#[derive(Debug, Clone, Serialize)]
pub struct RateComponents {
    pub log_im_z: f64,
    pub log_zr: f64,
    pub b_n: Option<f64>,
    /// |omega_0| of the collapsed ring polymer (high-temperature only).
    pub omega0: Option<f64>,
    /// Prefactor exponent eta of the high-temperature family (-2 for the
    /// zero-hop-corrected surface, +1 for the Born-Oppenheimer form).
    pub eta: Option<f64>,
}

/// A computed rate with its regime tag and decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct RateResult {
    pub log10_k: f64,
    pub regime: Regime,
    pub beta: f64,
    pub beta_c: Option<f64>,
    pub n_beads: usize,
    pub kind: SurfaceKind,
    pub components: RateComponents,
    pub warnings: Vec<String>,
}

const LN10: f64 = std::f64::consts::LN_10;

/// Deep-tunnelling rate k = (2 / beta hbar) Im Z / Z_R.
pub fn rate_deep_tunnelling(
    log_im_z: f64,
    zr: &PartitionFactors,
    grid: &RingPolymerGrid,
    kind: SurfaceKind,
) -> RateResult {
    let ln_k = (2.0 / (grid.beta * grid.hbar)).ln() + log_im_z - zr.log_zr;
    RateResult {
        log10_k: ln_k / LN10,
        regime: Regime::DeepTunnelling,
        beta: grid.beta,
        beta_c: None,
        n_beads: grid.n_beads,
        kind,
        components: RateComponents {
            log_im_z,
            log_zr: zr.log_zr,
            b_n: None,
            omega0: None,
            eta: None,
        },
        warnings: Vec::new(),
    }
}

/// High-temperature rate on the adiabatic surface (parabolic-barrier form):
/// k = (omega_b / pi) Im Z / Z_R.
pub fn rate_high_t_bo(
    log_im_z: f64,
    zr: &PartitionFactors,
    grid: &RingPolymerGrid,
    kind: SurfaceKind,
    omega_b: f64,
) -> RateResult {
    let ln_k = (omega_b / PI).ln() + log_im_z - zr.log_zr;
    RateResult {
        log10_k: ln_k / LN10,
        regime: Regime::HighTemperature,
        beta: grid.beta,
        beta_c: None,
        n_beads: grid.n_beads,
        kind,
        components: RateComponents {
            log_im_z,
            log_zr: zr.log_zr,
            b_n: None,
            omega0: Some(omega_b),
            eta: Some(1.0),
        },
        warnings: Vec::new(),
    }
}

/// High-temperature rate of the zero-hop-corrected theory (eta = -2):
/// k = (2/hbar) (beta/beta_c) (beta_c hbar |omega_0| / 2 pi)^{-2} Im F
/// with Im F = (1/beta) Im Z / Z_R and omega_0 = sqrt(-lambda_min) of the
/// collapsed ring-polymer Hessian.
pub fn rate_high_t_nimf(
    log_im_z: f64,
    zr: &PartitionFactors,
    grid: &RingPolymerGrid,
    beta_c: f64,
    omega0_sq_neg: f64,
) -> Result<RateResult> {
    if !(omega0_sq_neg < 0.0) {
        return Err(Error::InvalidState(format!(
            "collapsed ring polymer has no unstable mode (lambda_min = {omega0_sq_neg:e})"
        )));
    }
    let omega0 = (-omega0_sq_neg).sqrt();
    let ln_imf = -grid.beta.ln() + log_im_z - zr.log_zr;
    let ln_k = (2.0 / grid.hbar).ln() + (grid.beta / beta_c).ln()
        - 2.0 * (beta_c * grid.hbar * omega0 / (2.0 * PI)).ln()
        + ln_imf;
    Ok(RateResult {
        log10_k: ln_k / LN10,
        regime: Regime::HighTemperature,
        beta: grid.beta,
        beta_c: Some(beta_c),
        n_beads: grid.n_beads,
        kind: SurfaceKind::Nimf,
        components: RateComponents {
            log_im_z,
            log_zr: zr.log_zr,
            b_n: None,
            omega0: Some(omega0),
            eta: Some(-2.0),
        },
        warnings: Vec::new(),
    })
}

/// Re-derive log10 k from the stored components (reconstruction invariant).
pub fn reconstruct_log10_k(r: &RateResult, grid: &RingPolymerGrid) -> f64 {
    let c = &r.components;
    let ln_k = match (r.regime, c.eta) {
        (Regime::DeepTunnelling, _) => {
            (2.0 / (grid.beta * grid.hbar)).ln() + c.log_im_z - c.log_zr
        }
        (Regime::HighTemperature, Some(e)) if e == -2.0 => {
            let bc = r.beta_c.expect("nimf high-T stores beta_c");
            let w0 = c.omega0.expect("nimf high-T stores omega0");
            (2.0 / grid.hbar).ln() + (grid.beta / bc).ln()
                - 2.0 * (bc * grid.hbar * w0 / (2.0 * PI)).ln()
                + (-grid.beta.ln() + c.log_im_z - c.log_zr)
        }
        (Regime::HighTemperature, _) => {
            (c.omega0.expect("bo high-T stores omega_b") / PI).ln() + c.log_im_z - c.log_zr
        }
    };
    ln_k / LN10
}

// ---------------------------------------------------------------------------
// Regime dispatch
// ---------------------------------------------------------------------------

/// Options steering `compute_rate`.
#[derive(Debug, Clone)]
pub struct RateOptions {
    pub settings: OptimizerSettings,
    pub bead_policy: BeadPolicy,
    /// Initial crossover bracket (auto-expanded if needed).
    pub crossover_bracket: (f64, f64),
    pub crossover_rel_tol: f64,
    /// Spread amplitudes tried when no continuation path is available.
    pub guess_amplitudes: Vec<f64>,
    /// Reactant partition choice: steepest-descent minimum on the mean-field
    /// surface for bound models, free-particle per length for scattering.
    pub zr_mode: ZrMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZrMode {
    Auto,
    FreeParticlePerLength,
    Unit,
}

impl Default for RateOptions {
    fn default() -> Self {
        RateOptions {
            settings: OptimizerSettings::default(),
            bead_policy: BeadPolicy::default(),
            crossover_bracket: (0.05, 5.0),
            crossover_rel_tol: 1e-4,
            guess_amplitudes: vec![0.3, 0.6, 1.2, 2.4],
            zr_mode: ZrMode::Auto,
        }
    }
}

/// Computes rates for one model, caching the crossover temperature per surface
/// kind. Pure assembly over immutable inputs; scan-level concurrency is the
/// caller's business.
pub struct RateEngine<'m> {
    pub model: &'m dyn DiabaticModel,
    pub options: RateOptions,
    beta_c_cache: std::sync::Mutex<std::collections::HashMap<SurfaceKind, f64>>,
    /// Continuation seed shared across scan cells of the same model/kind.
    last_instanton: std::sync::Mutex<std::collections::HashMap<SurfaceKind, crate::rp::BeadPath>>,
}

impl<'m> RateEngine<'m> {
    pub fn new(model: &'m dyn DiabaticModel, options: RateOptions) -> Self {
        RateEngine {
            model,
            options,
            beta_c_cache: std::sync::Mutex::new(std::collections::HashMap::new()),
            last_instanton: std::sync::Mutex::new(std::collections::HashMap::new()),
        }
    }

    pub fn beta_c(&self, kind: SurfaceKind) -> Result<f64> {
        if let Some(&b) = self.beta_c_cache.lock().unwrap().get(&kind) {
            return Ok(b);
        }
        let res = crossover_beta(
            self.model,
            kind,
            self.options.crossover_bracket,
            &self.options.bead_policy,
            &self.options.settings,
            self.options.crossover_rel_tol,
        )?;
        self.beta_c_cache.lock().unwrap().insert(kind, res.beta_c);
        Ok(res.beta_c)
    }

    pub fn reactant_factors(&self, grid: &RingPolymerGrid) -> Result<PartitionFactors> {
        match self.options.zr_mode {
            ZrMode::Unit => Ok(PartitionFactors::unit()),
            ZrMode::FreeParticlePerLength => Ok(PartitionFactors::free_particle(
                grid.beta,
                self.model.masses()[0],
                grid.hbar,
            )),
            ZrMode::Auto => {
                if self.model.reactant_start().is_some() {
                    // bound reactant: steepest descent on the mean-field surface
                    let sp = minimize_reactant(
                        self.model,
                        grid,
                        SurfaceKind::Mf,
                        None,
                        &self.options.settings,
                    )?;
                    reactant_partition(&sp, grid)
                } else {
                    Ok(PartitionFactors::free_particle(
                        grid.beta,
                        self.model.masses()[0],
                        grid.hbar,
                    ))
                }
            }
        }
    }

    /// Full pipeline for one (kind, grid) cell: crossover lookup, stationary
    /// point, Im Z, regime-appropriate rate. Above-crossover results carry the
    /// "*" marker as a warning; within 10% of beta_c a proximity warning is
    /// attached. The mean-field surface has no high-temperature rate.
    pub fn compute_rate(&self, grid: &RingPolymerGrid, kind: SurfaceKind) -> Result<RateResult> {
        let beta_c = self.beta_c(kind)?;
        let zr = self.reactant_factors(grid)?;
        let mut warnings = Vec::new();
        if (grid.beta / beta_c - 1.0).abs() < 0.1 {
            warnings.push(format!("within 10% of beta_c = {beta_c:.4}"));
        }
        let deep = grid.beta > beta_c;
        let mut result = if deep {
            let seed = self.last_instanton.lock().unwrap().get(&kind).cloned();
            let sp = match seed {
                Some(prev) => find_instanton(
                    self.model,
                    grid,
                    kind,
                    GuessSpec::Continue(&prev),
                    &self.options.settings,
                )
                .or_else(|_| self.instanton_from_spread(grid, kind))?,
                None => self.instanton_from_spread(grid, kind)?,
            };
            if sp.classification == Classification::CollapsedBarrier {
                return Err(Error::InvalidState(format!(
                    "instanton search collapsed although beta = {} > beta_c = {beta_c}",
                    grid.beta
                )));
            }
            self.last_instanton
                .lock()
                .unwrap()
                .insert(kind, sp.path.clone());
            let log_im_z = im_z_instanton(&sp, grid)?;
            let mut r = rate_deep_tunnelling(log_im_z, &zr, grid, kind);
            r.components.b_n = Some(sp.b_n);
            r
        } else {
            warnings.push("*".into());
            match kind {
                SurfaceKind::Mf => {
                    return Err(Error::InvalidState(
                        "no high-temperature rate is defined for the mean-field surface".into(),
                    ));
                }
                SurfaceKind::Bo => {
                    let sp = find_collapsed_barrier(self.model, grid, kind, &self.options.settings)?;
                    let log_im_z = im_z_collapsed(&sp, grid)?;
                    let omega_b = (-sp.spectrum.eigenvalues[0]).sqrt();
                    rate_high_t_bo(log_im_z, &zr, grid, kind, omega_b)
                }
                SurfaceKind::Nimf => {
                    let sp = find_collapsed_barrier(self.model, grid, kind, &self.options.settings)?;
                    let log_im_z = im_z_collapsed(&sp, grid)?;
                    rate_high_t_nimf(log_im_z, &zr, grid, beta_c, sp.spectrum.eigenvalues[0])?
                }
            }
        };
        result.beta_c = Some(beta_c);
        result.warnings.extend(warnings);
        Ok(result)
    }

    fn instanton_from_spread(
        &self,
        grid: &RingPolymerGrid,
        kind: SurfaceKind,
    ) -> Result<StationaryPoint> {
        find_instanton(
            self.model,
            grid,
            kind,
            GuessSpec::SpreadFromCollapsed {
                amplitudes: &self.options.guess_amplitudes,
            },
            &self.options.settings,
        )
    }
}
