//! Vector fields sampled on regular grids, linear fields on the cube
//! `(-1, 1)³`, and outer rotations of field values.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

use crate::error::{Error, Result};
use crate::ga3::{exp_bivector, project_parallel, Bivector3, Multivector3, Rotor3};

/// Neumaier-compensated running sum with a fixed accumulation order.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// A rotation by `angle ∈ [0, π]` inside the oriented unit plane `plane`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationSpec {
    pub plane: Bivector3,
    pub angle: f64,
}

impl RotationSpec {
    pub fn new(plane: Bivector3, angle: f64) -> Result<Self> {
        if !plane.is_unit() {
            return Err(Error::arg(format!("rotation plane {plane} is not unit")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&angle) {
            return Err(Error::arg(format!("rotation angle {angle} outside [0, π]")));
        }
        Ok(RotationSpec { plane, angle })
    }

    pub const fn identity() -> Self {
        RotationSpec {
            plane: Bivector3::E12,
            angle: 0.0,
        }
    }

    /// The half-angle rotor `e^{angle/2 plane}` used in `r̃ v r`.
    pub fn rotor(&self) -> Rotor3 {
        exp_bivector(self.plane, self.angle / 2.0).expect("RotationSpec plane is unit")
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        self.rotor().to_matrix()
    }

    /// Same angle, opposite orientation.
    pub fn inverse(&self) -> Self {
        RotationSpec {
            plane: -self.plane,
            angle: self.angle,
        }
    }

    /// Plane dual to a uniform point on the sphere, angle uniform on `[0, π]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let n: [f64; 3] = UnitSphere.sample(rng);
        let plane = Bivector3::from_axis(n).normalized().expect("unit normal");
        RotationSpec {
            plane,
            angle: rng.gen_range(0.0..=std::f64::consts::PI),
        }
    }
}

/// A field `x ↦ A x` supported on the open cube `(-1, 1)³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearField {
    pub coeffs: Matrix3<f64>,
}

impl LinearField {
    pub fn new(coeffs: Matrix3<f64>) -> Self {
        LinearField { coeffs }
    }

    pub fn eval(&self, x: [f64; 3]) -> [f64; 3] {
        (self.coeffs * Vector3::from(x)).into()
    }

    /// Nine coefficients drawn uniformly from `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        LinearField::new(Matrix3::from_fn(|_, _| rng.gen_range(-1.0..=1.0)))
    }

    /// The linear field of the rotated values, `R A`.
    pub fn rotated(&self, rot: &RotationSpec) -> Self {
        LinearField::new(rot.matrix() * self.coeffs)
    }

    /// Midpoint samples on a `resolution³` grid covering the cube.
    pub fn sample(&self, resolution: usize) -> Result<VectorField> {
        VectorField::cube(resolution, |x| self.eval(x))
    }

    /// Least-squares fit of `A` to a 3D field: `(Σ v xᵀ)(Σ x xᵀ)⁻¹`.
    pub fn refit(field: &VectorField) -> Result<Self> {
        if field.dim() != 3 {
            return Err(Error::arg("linear refit needs a field over a 3D grid"));
        }
        let mut vx = Matrix3::zeros();
        let mut xx = Matrix3::zeros();
        for (i, v) in field.values().iter().enumerate() {
            let x = Vector3::from(field.position(i));
            vx += Vector3::from(*v) * x.transpose();
            xx += x * x.transpose();
        }
        let inv = xx
            .try_inverse()
            .ok_or_else(|| Error::arg("sample positions do not span 3D"))?;
        Ok(LinearField::new(vx * inv))
    }
}

pub fn random_linear_field(seed: u64) -> LinearField {
    LinearField::random(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_rotation(seed: u64) -> RotationSpec {
    RotationSpec::random(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// `Σ_ij (detected_ij - truth_ij)²`.
pub fn coefficient_error(detected: &LinearField, truth: &LinearField) -> f64 {
    (detected.coeffs - truth.coeffs).norm_squared()
}

/// [`coefficient_error`] after a least-squares refit of a sampled field.
pub fn field_coefficient_error(detected: &VectorField, truth: &LinearField) -> Result<f64> {
    Ok(coefficient_error(&LinearField::refit(detected)?, truth))
}

/// Samples of `v: R^m → R³` on a regular grid, `m ∈ {2, 3}`.
///
/// Samples are stored row-major: the last axis varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    dims: Vec<usize>,
    spacing: Vec<f64>,
    origin: Vec<f64>,
    values: Vec<[f64; 3]>,
}

impl VectorField {
    pub fn new(
        dims: Vec<usize>,
        spacing: Vec<f64>,
        origin: Vec<f64>,
        values: Vec<[f64; 3]>,
    ) -> Result<Self> {
        let m = dims.len();
        if !(2..=3).contains(&m) {
            return Err(Error::arg(format!("grid dimension {m} not in 2..=3")));
        }
        if spacing.len() != m || origin.len() != m {
            return Err(Error::arg("spacing and origin need one entry per axis"));
        }
        if let Some(h) = spacing.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
            return Err(Error::arg(format!("grid spacing {h} must be positive")));
        }
        let n: usize = dims.iter().product();
        if n != values.len() {
            return Err(Error::arg(format!(
                "{} values for a grid of {n} points",
                values.len()
            )));
        }
        Ok(VectorField {
            dims,
            spacing,
            origin,
            values,
        })
    }

    pub fn from_fn(
        dims: Vec<usize>,
        spacing: Vec<f64>,
        origin: Vec<f64>,
        f: impl Fn([f64; 3]) -> [f64; 3],
    ) -> Result<Self> {
        let mut field = VectorField::new(
            dims.clone(),
            spacing,
            origin,
            vec![[0.0; 3]; dims.iter().product()],
        )?;
        for i in 0..field.values.len() {
            field.values[i] = f(field.position(i));
        }
        Ok(field)
    }

    /// Cell-midpoint samples of `f` on `(-1, 1)³`, spacing `2 / resolution`.
    pub fn cube(resolution: usize, f: impl Fn([f64; 3]) -> [f64; 3]) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::arg(format!("resolution {resolution} below 2")));
        }
        let h = 2.0 / resolution as f64;
        let o = -1.0 + h / 2.0;
        VectorField::from_fn(vec![resolution; 3], vec![h; 3], vec![o; 3], f)
    }

    /// Piecewise-constant cube field: `pos` where `x1 >= 0`, `neg` elsewhere.
    pub fn half_split(resolution: usize, pos: [f64; 3], neg: [f64; 3]) -> Result<Self> {
        VectorField::cube(resolution, |x| if x[0] >= 0.0 { pos } else { neg })
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn values(&self) -> &[[f64; 3]] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Position of sample `index`, padded with zeros for 2D grids.
    pub fn position(&self, index: usize) -> [f64; 3] {
        let mut pos = [0.0; 3];
        let mut rest = index;
        for axis in (0..self.dims.len()).rev() {
            let i = rest % self.dims[axis];
            rest /= self.dims[axis];
            pos[axis] = self.origin[axis] + i as f64 * self.spacing[axis];
        }
        pos
    }

    pub fn same_grid(&self, other: &VectorField) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::GridMismatch(format!(
                "dims {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        if self.spacing != other.spacing {
            return Err(Error::GridMismatch(format!(
                "spacing {:?} vs {:?}",
                self.spacing, other.spacing
            )));
        }
        Ok(())
    }

    /// Same grid, values replaced pointwise.
    pub fn map(&self, f: impl Fn([f64; 3]) -> [f64; 3]) -> VectorField {
        VectorField {
            values: self.values.iter().map(|v| f(*v)).collect(),
            ..self.clone()
        }
    }

    /// Apply a fixed linear map to every value.
    pub fn transform(&self, m: &Matrix3<f64>) -> VectorField {
        self.map(|v| (m * Vector3::from(v)).into())
    }

    /// `r̃ v(x) r` at every sample, for a unit rotor `r`.
    pub fn sandwich(&self, r: &Rotor3) -> VectorField {
        self.transform(&r.to_matrix())
    }

    /// Riemann sum `Σ |v(x)|² · cell volume`.
    pub fn l2_norm_sq(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for v in &self.values {
            acc.add(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        }
        acc.value() * self.cell_volume()
    }

    /// Every value replaced by its component inside the unit plane `q`.
    pub fn project_parallel(&self, q: &Bivector3) -> Result<VectorField> {
        let values = self
            .values
            .iter()
            .map(|v| project_parallel(&Multivector3::from_vec3(*v), q).map(|p| p.vec3()))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField {
            values,
            ..self.clone()
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vfield {}", self.dim());
        for d in &self.dims {
            write!(out, " {d}").unwrap();
        }
        for h in &self.spacing {
            write!(out, " {h}").unwrap();
        }
        out.push('\n');
        for v in &self.values {
            writeln!(out, "{} {} {}", v[0], v[1], v[2]).unwrap();
        }
        out
    }

    /// Parse the text field format. `source` labels error messages.
    ///
    /// The origin is not part of the format; parsed grids start at zero.
    pub fn parse_text(text: &str, source: &str) -> Result<Self> {
        let err = |line: usize, column: usize, message: String| Error::Parse {
            path: source.to_string(),
            line,
            column,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty());

        let (hline, header) = lines
            .next()
            .ok_or_else(|| err(1, 1, "missing `vfield` header".into()))?;
        let tokens = tokenize(header);
        let mut tok = tokens.iter();
        match tok.next() {
            Some((_, "vfield")) => {}
            Some((c, t)) => return Err(err(hline, *c, format!("expected `vfield`, found `{t}`"))),
            None => return Err(err(hline, 1, "missing `vfield` header".into())),
        }
        let (c, t) = tok
            .next()
            .ok_or_else(|| err(hline, header.len() + 1, "missing grid dimension".into()))?;
        let m: usize = match t.parse() {
            Ok(m @ 2..=3) => m,
            _ => {
                return Err(err(
                    hline,
                    *c,
                    format!("grid dimension must be 2 or 3, found `{t}`"),
                ))
            }
        };
        let mut dims = Vec::with_capacity(m);
        for _ in 0..m {
            let (c, t) = tok
                .next()
                .ok_or_else(|| err(hline, header.len() + 1, "missing grid extent".into()))?;
            match t.parse::<usize>() {
                Ok(d) if d > 0 => dims.push(d),
                _ => return Err(err(hline, *c, format!("invalid grid extent `{t}`"))),
            }
        }
        let mut spacing = Vec::with_capacity(m);
        for _ in 0..m {
            let (c, t) = tok
                .next()
                .ok_or_else(|| err(hline, header.len() + 1, "missing grid spacing".into()))?;
            match t.parse::<f64>() {
                Ok(h) if h > 0.0 && h.is_finite() => spacing.push(h),
                _ => return Err(err(hline, *c, format!("invalid grid spacing `{t}`"))),
            }
        }
        if let Some((c, t)) = tok.next() {
            return Err(err(hline, *c, format!("unexpected header token `{t}`")));
        }

        let n: usize = dims.iter().product();
        let mut values = Vec::with_capacity(n);
        for (lno, line) in lines {
            if values.len() == n {
                return Err(err(lno, 1, format!("more than {n} samples")));
            }
            let tokens = tokenize(line);
            if tokens.len() != 3 {
                let col = tokens.get(3).map_or(line.len() + 1, |t| t.0);
                return Err(err(
                    lno,
                    col,
                    format!("expected 3 components, found {}", tokens.len()),
                ));
            }
            let mut v = [0.0; 3];
            for (k, (c, t)) in tokens.iter().enumerate() {
                v[k] = t
                    .parse()
                    .map_err(|_| err(lno, *c, format!("invalid number `{t}`")))?;
            }
            values.push(v);
        }
        if values.len() != n {
            let last = text.lines().count().max(1);
            return Err(err(
                last,
                1,
                format!("expected {n} samples, found {}", values.len()),
            ));
        }
        VectorField::new(dims, spacing, vec![0.0; m], values)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        VectorField::parse_text(&text, &path.display().to_string())
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// Whitespace-separated tokens with their 1-based byte columns.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Rotate every value of `f` by `rot`; positions stay where they are.
pub fn apply_outer_rotation(f: &VectorField, rot: &RotationSpec) -> VectorField {
    f.sandwich(&rot.rotor())
}

pub fn sample_linear(f: &LinearField, resolution: usize) -> Result<VectorField> {
    f.sample(resolution)
}

pub fn l2_norm_sq(f: &VectorField) -> f64 {
    f.l2_norm_sq()
}
