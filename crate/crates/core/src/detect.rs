//! Iterative detection of the outer rotation that maps a reference field
//! `v` onto a rotated pattern `u`.
//!
//! Both detectors repeatedly correlate `u` against `v`, rotate `u` back by
//! the rotor the correlation encodes and fold that rotor into a running
//! total `(α, P)`. The accelerated variant follows every full step with a
//! second one whose angle comes from the correlation of the in-plane parts
//! only, which behaves like the exact two-dimensional case once the plane is
//! nearly right.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use crate::corr::{correlate_origin, correlate_projected, CorrelationResult};
use crate::error::{Error, Result};
use crate::field::{RotationSpec, VectorField};
use crate::ga3::{compose_rotation, exp_bivector, Bivector3};

/// A degenerate first correlation whose normalized scalar part is at least
/// `1 - ALIGNED_TOLERANCE` means the fields already coincide.
pub const ALIGNED_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Plain iterative geometric correlation.
    Plain,
    /// Plain step followed by a plane-projected refinement step.
    Accelerated,
}

impl Algorithm {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Algorithm::Plain),
            2 => Ok(Algorithm::Accelerated),
            _ => Err(Error::arg(format!("algorithm must be 1 or 2, got {n}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Algorithm::Plain => 1,
            Algorithm::Accelerated => 2,
        }
    }

    pub fn run(
        self,
        v: &VectorField,
        u: &VectorField,
        cfg: &DetectorConfig,
    ) -> Result<DetectionResult> {
        match self {
            Algorithm::Plain => algorithm1(v, u, cfg),
            Algorithm::Accelerated => algorithm2(v, u, cfg),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectorConfig {
    /// Stop once the correction angle of a full correlation is `<= epsilon`.
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Rotation injected when the first correlation is real but the fields
    /// differ (the half-turn ambiguity).
    pub disturbance_angle: f64,
    pub disturbance_plane: Bivector3,
    /// Iteration counts at which to keep a copy of the corrected field.
    /// `0` is the uncorrected pattern.
    pub checkpoints: Vec<usize>,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            epsilon: 1e-10,
            max_iterations: 5000,
            disturbance_angle: FRAC_PI_4,
            disturbance_plane: Bivector3::E12,
            checkpoints: Vec::new(),
        }
    }
}

impl DetectorConfig {
    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    pub fn with_checkpoints(mut self, checkpoints: impl Into<Vec<usize>>) -> Self {
        self.checkpoints = checkpoints.into();
        self
    }

    fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::arg(format!(
                "epsilon {} must be positive",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::arg("max_iterations must be at least 1"));
        }
        if !self.disturbance_plane.is_unit() {
            return Err(Error::arg("disturbance plane must be a unit bivector"));
        }
        Ok(())
    }
}

/// One pass through the loop body.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Angle and plane read off the full correlation.
    pub correlation_angle: f64,
    pub correlation_plane: Bivector3,
    /// The disturbance rotation replaced the correlation rotor.
    pub disturbed: bool,
    /// Rotation applied after the full correlation.
    pub applied_angle: f64,
    pub applied_plane: Bivector3,
    /// Angle and plane of the projected refinement step (accelerated only).
    pub refinement: Option<(f64, Bivector3)>,
    /// Running total `(α, P)` after this iteration.
    pub total: RotationSpec,
    /// `Σ |u(x) - v(x)|` after this iteration.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub iteration: usize,
    pub total: RotationSpec,
    pub field: VectorField,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct DetectionResult {
    /// Total correction angle `α ∈ [0, π]`.
    pub angle: f64,
    /// Total correction plane `P`.
    pub plane: Bivector3,
    /// The pattern after every correction: `e^{-α/2 P} u e^{α/2 P}`.
    pub corrected: VectorField,
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
    pub snapshots: Vec<Snapshot>,
    pub elapsed: Duration,
}

impl DetectionResult {
    /// The rotation that maps `u` back onto `v`.
    pub fn correction(&self) -> RotationSpec {
        RotationSpec {
            plane: self.plane,
            angle: self.angle,
        }
    }

    /// The estimated outer rotation with `u ≈ R(v)`.
    pub fn distortion(&self) -> RotationSpec {
        self.correction().inverse()
    }

    /// Corrected field and elapsed time after `iteration` steps, if that state
    /// was kept: either a requested checkpoint or any count at or beyond the
    /// final iteration.
    pub fn state_at(&self, iteration: usize) -> Option<(&VectorField, Duration)> {
        if let Some(s) = self.snapshots.iter().find(|s| s.iteration == iteration) {
            return Some((&s.field, s.elapsed));
        }
        (iteration >= self.iterations).then_some((&self.corrected, self.elapsed))
    }
}

/// Angle of the rotation left between `v` and the pattern `u = R_d(v)` after
/// correcting `u` by `correction`.
pub fn misalignment(distortion: &RotationSpec, correction: &RotationSpec) -> f64 {
    let r = (distortion.rotor() * correction.rotor()).canonical();
    2.0 * r.b.norm().atan2(r.s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    /// `Σ |u(x) - v(x)|`, one unweighted term per sample.
    pub absolute: f64,
    pub per_sample: f64,
}

pub fn residual_error(corrected: &VectorField, original: &VectorField) -> Result<Residual> {
    corrected.same_grid(original)?;
    let absolute: f64 = corrected
        .values()
        .iter()
        .zip(original.values())
        .map(|(a, b)| {
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
        })
        .sum();
    Ok(Residual {
        absolute,
        per_sample: absolute / corrected.len().max(1) as f64,
    })
}

struct State<'a> {
    v: &'a VectorField,
    u: VectorField,
    alpha: f64,
    plane: Bivector3,
    cfg: &'a DetectorConfig,
    start: Instant,
    snapshots: Vec<Snapshot>,
    trace: Vec<IterationRecord>,
}

impl<'a> State<'a> {
    fn new(v: &'a VectorField, u: &VectorField, cfg: &'a DetectorConfig) -> Result<Self> {
        cfg.validate()?;
        v.same_grid(u)?;
        if v.values().iter().all(|x| *x == [0.0; 3]) {
            return Err(Error::ZeroField);
        }
        let mut state = State {
            v,
            u: u.clone(),
            alpha: 0.0,
            plane: Bivector3::E12,
            cfg,
            start: Instant::now(),
            snapshots: Vec::new(),
            trace: Vec::new(),
        };
        state.checkpoint(0);
        Ok(state)
    }

    fn total(&self) -> RotationSpec {
        RotationSpec {
            plane: self.plane,
            angle: self.alpha,
        }
    }

    fn checkpoint(&mut self, iteration: usize) {
        if self.cfg.checkpoints.contains(&iteration) {
            self.snapshots.push(Snapshot {
                iteration,
                total: self.total(),
                field: self.u.clone(),
                elapsed: self.start.elapsed(),
            });
        }
    }

    /// Correlate, apply the disturbance on a real first correlation, rotate
    /// `u` back and fold the rotation into the total.
    fn full_step(&mut self, iteration: usize) -> Result<(CorrelationResult, f64, Bivector3, bool)> {
        let cor = correlate_origin(&self.u, self.v)?;
        let (mut phi, mut q) = (cor.angle, cor.plane);
        let disturbed =
            iteration == 1 && cor.degenerate && cor.alignment() < 1.0 - ALIGNED_TOLERANCE;
        if disturbed {
            phi = self.cfg.disturbance_angle;
            q = self.cfg.disturbance_plane;
        }
        self.rotate(phi, q)?;
        Ok((cor, phi, q, disturbed))
    }

    fn rotate(&mut self, phi: f64, q: Bivector3) -> Result<()> {
        self.u = self.u.sandwich(&exp_bivector(q, phi / 2.0)?);
        let total = compose_rotation(self.alpha, self.plane, phi, q)?;
        self.alpha = total.angle;
        self.plane = total.plane;
        Ok(())
    }

    fn record(
        &mut self,
        iteration: usize,
        step: (CorrelationResult, f64, Bivector3, bool),
        refinement: Option<(f64, Bivector3)>,
    ) -> Result<()> {
        let (cor, applied_angle, applied_plane, disturbed) = step;
        let residual = residual_error(&self.u, self.v)?.absolute;
        self.trace.push(IterationRecord {
            iteration,
            correlation_angle: cor.angle,
            correlation_plane: cor.plane,
            disturbed,
            applied_angle,
            applied_plane,
            refinement,
            total: self.total(),
            residual,
        });
        self.checkpoint(iteration);
        Ok(())
    }

    fn finish(self, phi: f64) -> DetectionResult {
        DetectionResult {
            angle: self.alpha,
            plane: self.plane,
            iterations: self.trace.len(),
            converged: phi <= self.cfg.epsilon,
            corrected: self.u,
            trace: self.trace,
            snapshots: self.snapshots,
            elapsed: self.start.elapsed(),
        }
    }
}

/// Plain iterative geometric correlation.
///
/// `v` is the reference field and `u` its rotated copy.
pub fn algorithm1(
    v: &VectorField,
    u: &VectorField,
    cfg: &DetectorConfig,
) -> Result<DetectionResult> {
    let mut st = State::new(v, u, cfg)?;
    let mut phi = PI;
    let mut iter = 0;
    while phi > cfg.epsilon && iter < cfg.max_iterations {
        iter += 1;
        let step = st.full_step(iter)?;
        phi = step.1;
        st.record(iter, step, None)?;
    }
    Ok(st.finish(phi))
}

/// Accelerated detection: each iteration does a full step, then picks the
/// plane from a fresh full correlation and the angle from the correlation of
/// the parts of `u` and `v` inside that plane.
pub fn algorithm2(
    v: &VectorField,
    u: &VectorField,
    cfg: &DetectorConfig,
) -> Result<DetectionResult> {
    let mut st = State::new(v, u, cfg)?;
    let mut phi = PI;
    let mut iter = 0;
    while phi > cfg.epsilon && iter < cfg.max_iterations {
        iter += 1;
        let step = st.full_step(iter)?;
        phi = step.1;

        let plane = correlate_origin(&st.u, v)?.plane;
        let inplane = correlate_projected(&st.u, v, &plane)?;
        // the projected bivector is ±plane; keep the orientation it asks for
        let q = if inplane.plane.dot(&plane) < 0.0 {
            -plane
        } else {
            plane
        };
        st.rotate(inplane.angle, q)?;
        st.record(iter, step, Some((inplane.angle, q)))?;
    }
    Ok(st.finish(phi))
}
