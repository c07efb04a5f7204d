//! Chart-level differential forms.
//!
//! A form is an evaluation closure on the coordinates of a named chart:
//! 1-forms take `(point, tangent)` and return a `𝔲(1)` value, 2-forms take
//! `(point, v, w)` and return a real number. Exterior derivatives are taken
//! numerically with central differences, which is all the prequantization
//! identities need.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::u1::Imag;

/// Central-difference step for [`numeric_d`].
pub const DEFAULT_STEP: f64 = 1e-5;

type TangentBasisFn = dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync;
type ConstraintFn = dyn Fn(&[f64]) -> Option<String> + Send + Sync;
type OneFormFn = dyn Fn(&[f64], &[f64]) -> Imag + Send + Sync;
type TwoFormFn = dyn Fn(&[f64], &[f64], &[f64]) -> f64 + Send + Sync;
type FieldFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Named coordinate system. Points and tangent vectors are plain coordinate
/// slices of length [`Chart::dim`].
///
/// When the chart is an ambient parametrization of a constrained space (for
/// instance `ℂ² ⊃ S³`), `tangent_basis` returns a basis of the tangent space
/// of the constrained space at a point.
#[derive(Clone)]
pub struct Chart {
    name: String,
    coords: Vec<String>,
    tangent_basis: Option<Arc<TangentBasisFn>>,
    constraint: Option<Arc<ConstraintFn>>,
}

impl Chart {
    pub fn new(name: impl Into<String>, coords: &[&str]) -> Self {
        Chart {
            name: name.into(),
            coords: coords.iter().map(|s| s.to_string()).collect(),
            tangent_basis: None,
            constraint: None,
        }
    }

    /// Rejects points for which `f` returns a reason.
    pub fn with_constraint(
        mut self,
        f: impl Fn(&[f64]) -> Option<String> + Send + Sync + 'static,
    ) -> Self {
        self.constraint = Some(Arc::new(f));
        self
    }

    /// Same coordinates and constraint under a new name and tangent basis.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Chart {
            name: name.into(),
            coords: self.coords.clone(),
            tangent_basis: None,
            constraint: self.constraint.clone(),
        }
    }

    pub fn with_tangent_basis(
        mut self,
        f: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.tangent_basis = Some(Arc::new(f));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Index of a named coordinate.
    pub fn coord(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    /// Unit vector along the named coordinate.
    pub fn direction(&self, name: &str) -> Vec<f64> {
        let i = self
            .coord(name)
            .unwrap_or_else(|| panic!("chart `{}` has no coordinate `{name}`", self.name));
        let mut v = vec![0.0; self.dim()];
        v[i] = 1.0;
        v
    }

    pub fn tangent_basis(&self, p: &[f64]) -> Vec<Vec<f64>> {
        match &self.tangent_basis {
            Some(f) => f(p),
            None => (0..self.dim())
                .map(|i| {
                    let mut e = vec![0.0; self.dim()];
                    e[i] = 1.0;
                    e
                })
                .collect(),
        }
    }

    pub fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.len(),
            });
        }
        Ok(())
    }

    /// Dimension and constraint check for a point.
    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        self.check_dim(p)?;
        match self.constraint.as_ref().and_then(|f| f(p)) {
            Some(reason) => Err(Error::InvalidPoint(reason)),
            None => Ok(()),
        }
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({}: {:?})", self.name, self.coords)
    }
}

fn same_chart(expected: &Chart, found: &Chart) -> Result<()> {
    if expected.name != found.name {
        return Err(Error::ChartMismatch {
            expected: expected.name.clone(),
            found: found.name.clone(),
        });
    }
    Ok(())
}

fn check_same_coords(from: &Chart, to: &Chart) -> Result<()> {
    if from.coords != to.coords {
        return Err(Error::ChartMismatch {
            expected: from.name.clone(),
            found: to.name.clone(),
        });
    }
    Ok(())
}

/// A `𝔲(1)`-valued 1-form on a chart.
#[derive(Clone)]
pub struct ChartOneForm {
    chart: Arc<Chart>,
    eval: Arc<OneFormFn>,
}

impl ChartOneForm {
    pub fn new(
        chart: Arc<Chart>,
        eval: impl Fn(&[f64], &[f64]) -> Imag + Send + Sync + 'static,
    ) -> Self {
        ChartOneForm {
            chart,
            eval: Arc::new(eval),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    /// `θ_p(v)` without dimension checks.
    pub fn eval(&self, p: &[f64], v: &[f64]) -> Imag {
        (self.eval)(p, v)
    }

    pub fn at(&self, p: &[f64], v: &[f64]) -> Result<Imag> {
        self.chart.check_point(p)?;
        self.chart.check_dim(v)?;
        Ok(self.eval(p, v))
    }

    /// The same evaluation on another chart with identical coordinates.
    pub fn on_chart(&self, chart: Arc<Chart>) -> Result<ChartOneForm> {
        check_same_coords(&self.chart, &chart)?;
        Ok(ChartOneForm {
            chart,
            eval: self.eval.clone(),
        })
    }

    /// Pullback along `map` whose differential is `push`.
    pub fn pullback(
        &self,
        chart: Arc<Chart>,
        map: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        push: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> ChartOneForm {
        let inner = self.eval.clone();
        ChartOneForm::new(chart, move |p, v| inner(&map(p), &push(p, v)))
    }

    pub fn scaled(&self, s: f64) -> ChartOneForm {
        let inner = self.eval.clone();
        ChartOneForm::new(self.chart.clone(), move |p, v| inner(p, v) * s)
    }

    pub fn try_add(&self, other: &ChartOneForm) -> Result<ChartOneForm> {
        same_chart(&self.chart, &other.chart)?;
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Ok(ChartOneForm::new(self.chart.clone(), move |p, v| {
            a(p, v) + b(p, v)
        }))
    }
}

impl fmt::Debug for ChartOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChartOneForm on {}", self.chart.name)
    }
}

/// A real 2-form on a chart.
#[derive(Clone)]
pub struct ChartTwoForm {
    chart: Arc<Chart>,
    eval: Arc<TwoFormFn>,
}

impl ChartTwoForm {
    pub fn new(
        chart: Arc<Chart>,
        eval: impl Fn(&[f64], &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ChartTwoForm {
            chart,
            eval: Arc::new(eval),
        }
    }

    /// Constant-coefficient form `Σ c_ij dx_i ∧ dx_j` from `(i, j, c_ij)` entries.
    pub fn constant(chart: Arc<Chart>, entries: &[(usize, usize, f64)]) -> Self {
        let entries = entries.to_vec();
        ChartTwoForm::new(chart, move |_, v, w| {
            entries
                .iter()
                .map(|&(i, j, c)| c * (v[i] * w[j] - v[j] * w[i]))
                .sum()
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn eval(&self, p: &[f64], v: &[f64], w: &[f64]) -> f64 {
        (self.eval)(p, v, w)
    }

    pub fn on_chart(&self, chart: Arc<Chart>) -> Result<ChartTwoForm> {
        check_same_coords(&self.chart, &chart)?;
        Ok(ChartTwoForm {
            chart,
            eval: self.eval.clone(),
        })
    }

    pub fn scaled(&self, s: f64) -> ChartTwoForm {
        let inner = self.eval.clone();
        ChartTwoForm::new(self.chart.clone(), move |p, v, w| s * inner(p, v, w))
    }

    pub fn pullback(
        &self,
        chart: Arc<Chart>,
        map: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        push: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> ChartTwoForm {
        let inner = self.eval.clone();
        ChartTwoForm::new(chart, move |p, v, w| {
            inner(&map(p), &push(p, v), &push(p, w))
        })
    }

    pub fn try_add(&self, other: &ChartTwoForm) -> Result<ChartTwoForm> {
        same_chart(&self.chart, &other.chart)?;
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Ok(ChartTwoForm::new(self.chart.clone(), move |p, v, w| {
            a(p, v, w) + b(p, v, w)
        }))
    }
}

impl fmt::Debug for ChartTwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChartTwoForm on {}", self.chart.name)
    }
}

/// A vector field on a chart.
#[derive(Clone)]
pub struct VectorField {
    chart: Arc<Chart>,
    eval: Arc<FieldFn>,
}

impl VectorField {
    pub fn new(
        chart: Arc<Chart>,
        eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        VectorField {
            chart,
            eval: Arc::new(eval),
        }
    }

    /// The constant field equal to `v` everywhere.
    pub fn constant(chart: Arc<Chart>, v: Vec<f64>) -> Self {
        VectorField::new(chart, move |_| v.clone())
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn eval(&self, p: &[f64]) -> Vec<f64> {
        (self.eval)(p)
    }

    pub fn on_chart(&self, chart: Arc<Chart>) -> Result<VectorField> {
        check_same_coords(&self.chart, &chart)?;
        Ok(VectorField {
            chart,
            eval: self.eval.clone(),
        })
    }

    pub fn try_add(&self, other: &VectorField) -> Result<VectorField> {
        same_chart(&self.chart, &other.chart)?;
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Ok(VectorField::new(self.chart.clone(), move |p| {
            a(p).iter().zip(b(p)).map(|(x, y)| x + y).collect()
        }))
    }

    pub fn scaled(&self, s: f64) -> VectorField {
        let inner = self.eval.clone();
        VectorField::new(self.chart.clone(), move |p| {
            inner(p).into_iter().map(|x| s * x).collect()
        })
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField on {}", self.chart.name)
    }
}

/// `θ_p(X(p))`.
pub fn pair(theta: &ChartOneForm, field: &VectorField, p: &[f64]) -> Result<Imag> {
    same_chart(&theta.chart, &field.chart)?;
    theta.chart.check_point(p)?;
    Ok(theta.eval(p, &field.eval(p)))
}

pub(crate) fn offset(p: &[f64], v: &[f64], t: f64) -> Vec<f64> {
    p.iter().zip(v).map(|(a, b)| a + t * b).collect()
}

/// Derivative of `f` at `p` along `v`, by central differences.
pub fn directional_derivative(f: impl Fn(&[f64]) -> f64, p: &[f64], v: &[f64], h: f64) -> f64 {
    (f(&offset(p, v, h)) - f(&offset(p, v, -h))) / (2.0 * h)
}

/// `dθ(v, w)` at `p` for the constant fields `v`, `w` (whose bracket vanishes),
/// with the default step.
pub fn numeric_d(theta: &ChartOneForm, p: &[f64], v: &[f64], w: &[f64]) -> Result<Imag> {
    numeric_d_with_step(theta, p, v, w, DEFAULT_STEP)
}

pub fn numeric_d_with_step(
    theta: &ChartOneForm,
    p: &[f64],
    v: &[f64],
    w: &[f64],
    h: f64,
) -> Result<Imag> {
    theta.chart.check_point(p)?;
    theta.chart.check_dim(v)?;
    theta.chart.check_dim(w)?;
    let v_theta_w = directional_derivative(|q| theta.eval(q, w).0, p, v, h);
    let w_theta_v = directional_derivative(|q| theta.eval(q, v).0, p, w, h);
    Ok(Imag(v_theta_w - w_theta_v))
}

/// `dθ(V, W) = V θ(W) − W θ(V) − θ([V, W])` for general fields.
///
/// Without an explicit bracket the fields must be constant near `p`;
/// anything else is rejected.
pub fn numeric_d_fields(
    theta: &ChartOneForm,
    p: &[f64],
    v: &VectorField,
    w: &VectorField,
    bracket: Option<&VectorField>,
    h: f64,
) -> Result<Imag> {
    same_chart(&theta.chart, &v.chart)?;
    same_chart(&theta.chart, &w.chart)?;
    theta.chart.check_point(p)?;
    let (vp, wp) = (v.eval(p), w.eval(p));
    let bracket_term = match bracket {
        Some(b) => {
            same_chart(&theta.chart, &b.chart)?;
            theta.eval(p, &b.eval(p)).0
        }
        None => {
            let probe = |f: &VectorField, dir: &[f64]| -> f64 {
                let a = f.eval(&offset(p, dir, h));
                let b = f.eval(&offset(p, dir, -h));
                a.iter()
                    .zip(&b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max)
            };
            let variation = probe(v, &wp)
                .max(probe(v, &vp))
                .max(probe(w, &vp))
                .max(probe(w, &wp));
            if variation > 1e-12 {
                return Err(Error::Unsupported(
                    "non-constant fields need an explicit bracket".into(),
                ));
            }
            0.0
        }
    };
    let v_theta_w = directional_derivative(|q| theta.eval(q, &w.eval(q)).0, p, &vp, h);
    let w_theta_v = directional_derivative(|q| theta.eval(q, &v.eval(q)).0, p, &wp, h);
    Ok(Imag(v_theta_w - w_theta_v - bracket_term))
}

/// Outcome of a `dθ = π*(−i·ω)` check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub max_residual: f64,
    pub samples: usize,
    pub pairs: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks `dθ = −i·ω` (with `ω` already pulled back to the chart of `θ`)
/// on every pair of tangent-basis vectors at every sample point.
///
/// The residual is `max |numeric_d(θ)(v, w) + i·ω(v, w)|`.
pub fn verify_curvature(
    theta: &ChartOneForm,
    omega: &ChartTwoForm,
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<CurvatureReport> {
    if theta.chart.name != omega.chart.name {
        return Err(Error::ProjectionUndeclared(
            theta.chart.name.clone(),
            omega.chart.name.clone(),
        ));
    }
    for p in samples {
        theta.chart.check_point(p)?;
    }
    let per_sample: Vec<Result<(f64, usize)>> = samples
        .par_iter()
        .map(|p| {
            let basis = theta.chart.tangent_basis(p);
            let mut worst = 0.0f64;
            let mut pairs = 0;
            for i in 0..basis.len() {
                for j in (i + 1)..basis.len() {
                    let d = numeric_d(theta, p, &basis[i], &basis[j])?;
                    let w = omega.eval(p, &basis[i], &basis[j]);
                    worst = worst.max((d.0 + w).abs());
                    pairs += 1;
                }
            }
            Ok((worst, pairs))
        })
        .collect();
    let mut max_residual = 0.0f64;
    let mut pairs = 0;
    for r in per_sample {
        let (w, n) = r?;
        max_residual = max_residual.max(w);
        pairs += n;
    }
    Ok(CurvatureReport {
        max_residual,
        samples: samples.len(),
        pairs,
        tolerance: tol,
        pass: max_residual < tol,
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis (Gram–Schmidt) of the span of `vectors`.
pub fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut u = v.clone();
        for q in &out {
            let c = dot(&u, q);
            u.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        let n = dot(&u, &u).sqrt();
        if n > 1e-10 {
            out.push(u.into_iter().map(|a| a / n).collect());
        }
    }
    out
}

/// Orthonormal basis of `{v ∈ span(basis) : ⟨covector, v⟩ = 0}`.
pub fn kernel_basis(basis: &[Vec<f64>], covector: &[f64]) -> Vec<Vec<f64>> {
    let q = orthonormalize(basis);
    let c: Vec<f64> = q.iter().map(|qi| dot(qi, covector)).collect();
    let cn = dot(&c, &c).sqrt();
    if cn < 1e-14 {
        return q;
    }
    let dim = basis.first().map_or(0, Vec::len);
    let mut normal = vec![0.0; dim];
    for (qi, ci) in q.iter().zip(&c) {
        normal
            .iter_mut()
            .zip(qi)
            .for_each(|(n, x)| *n += ci / cn * x);
    }
    let mut candidates = vec![normal];
    candidates.extend(q);
    let mut ortho = orthonormalize(&candidates);
    ortho.remove(0);
    ortho
}
