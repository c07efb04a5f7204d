//! Command-line front end: every command runs a suite of checks and emits a
//! [`Report`]. JSON goes to stdout with `--json`; a human summary always goes
//! to stderr.
//!
//! Exit codes: 0 when every check passes, 1 when one fails, 2 on usage errors.

use std::f64::consts::PI;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::clifford::{blade_mul, BladeIndex, Multivector};
use crate::cutting::{self, SampleConfig, ADMISSIBLE_TOL};
use crate::error::{Error, Result};
use crate::forms::verify_curvature;
use crate::models::{
    self, classify_cpn, curvature_cpn, curvature_cpn_numeric, lift_f, moment_image_sphere,
    moment_map, moment_pairing_residual, plane_invariance_residual, realify_matrix, sphere_moment,
    ModelPoint, PrequantDescriptor, SpherePoint,
};
use crate::spin::{det_map, lambda, lambda_c, orthogonality_residual, SpinElement};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "spinc",
    version,
    about = "Verify spin^c prequantizations and symplectic cuts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Number of random samples per check.
    #[arg(long, global = true, default_value_t = 50)]
    pub samples: usize,
    /// Tolerance for finite-difference checks.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Seed of the sampling RNG.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Print the JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the identity suite of one model.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        ell: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        k: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 2)]
        n: i64,
    },
    /// Cut the sphere `P_{k,n}` with the plane `P_ℂ^ℓ`.
    Cut {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Moment map of `P_{k,n}` at a point or along a meridian.
    Moment {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// `z,w` (real) or `re z,im z,re w,im w`.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        point: Option<Vec<f64>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Clifford,
    Plane,
    Sphere,
    Cpn,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            pass: residual < tolerance,
        }
    }

    /// A check whose residual is 0 when `ok` and 1 otherwise.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            residual: if ok { 0.0 } else { 1.0 },
            tolerance: 0.5,
            pass: ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub checks: Vec<Check>,
    pub overall: bool,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Report {
    fn new(command: &str, inputs: Value, checks: Vec<Check>, details: Value) -> Self {
        let overall = checks.iter().all(|c| c.pass);
        Report {
            command: command.into(),
            inputs,
            checks,
            overall,
            details,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.overall {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn summary(&self) -> String {
        let mut out = format!("{} {}\n", self.command, self.inputs);
        for c in &self.checks {
            out += &format!(
                "  [{}] {:<28} residual {:.3e} (tol {:.1e})\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.tolerance
            );
        }
        if !self.details.is_null() {
            out += &format!("  {}\n", self.details);
        }
        out += if self.overall {
            "overall: pass"
        } else {
            "overall: FAIL"
        };
        out
    }
}

/// Errors that mean the command line itself was wrong.
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::EvenParameter(_)
            | Error::InvalidPoint(_)
            | Error::Unsupported(_)
            | Error::DimensionMismatch { .. }
            | Error::Dimension { .. }
    )
}

pub fn run(cli: &Cli) -> Result<Report> {
    let cfg = SampleConfig {
        samples: cli.samples.max(1),
        seed: cli.seed,
    };
    match &cli.command {
        Command::Verify { target, ell, k, n } => match target {
            Target::Clifford => verify_clifford(&cfg),
            Target::Plane => verify_plane(*ell, cli.tol, &cfg),
            Target::Sphere => verify_sphere(*k, *n, cli.tol, &cfg),
            Target::Cpn => {
                let n = u32::try_from(*n)
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::Unsupported(format!("ℂP^n needs n ≥ 1, got {n}")))?;
                verify_cpn(n, &cfg)
            }
        },
        Command::Cut { k, n, ell, alpha } => cut(*k, *n, *ell, *alpha, &cfg),
        Command::Moment { k, n, point } => moment(*k, *n, point.as_deref()),
    }
}

/// Parses `args`, runs the command and prints; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("reports serialize")
                );
            }
            eprintln!("{}", report.summary());
            report.exit_code()
        }
        Err(e) if is_usage_error(&e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            let report = Report::new(
                "error",
                json!({}),
                vec![Check::flag(e.to_string(), false)],
                Value::Null,
            );
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("reports serialize")
                );
            }
            eprintln!("{}", report.summary());
            EXIT_FAIL
        }
    }
}

fn random_multivector(dim: usize, rng: &mut ChaCha8Rng) -> Multivector<i64> {
    let coeffs = (0..1u32 << dim).map(|m| (BladeIndex::from_mask(m), rng.random_range(-3..=3)));
    Multivector::from_terms(dim, coeffs).expect("masks are in range")
}

fn random_rotor(dim: usize, rng: &mut ChaCha8Rng) -> SpinElement {
    let mut x = SpinElement::identity(dim);
    for _ in 0..4 {
        let i = rng.random_range(1..=dim);
        let j = rng.random_range(1..=dim);
        if i == j {
            continue;
        }
        let r = SpinElement::planar(dim, i, j, rng.random_range(-PI..PI)).expect("valid plane");
        x = x.mul(&r).expect("same dimension");
    }
    x
}

fn verify_clifford(cfg: &SampleConfig) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dim = 5;
    let mut relation = 0i64;
    for i in 1..=dim {
        for j in 1..=dim {
            let (ei, ej) = (
                Multivector::<i64>::basis_vector(dim, i)?,
                Multivector::<i64>::basis_vector(dim, j)?,
            );
            let anti = &(&ei * &ej) + &(&ej * &ei);
            let expected = Multivector::scalar(dim, if i == j { -2 } else { 0 });
            relation = relation.max(
                (&anti - &expected)
                    .coeffs()
                    .iter()
                    .map(|c| c.abs())
                    .max()
                    .unwrap_or(0),
            );
        }
    }
    let mut assoc = 0i64;
    let mut anti = 0i64;
    for _ in 0..cfg.samples {
        let (a, b, c) = (
            random_multivector(dim, &mut rng),
            random_multivector(dim, &mut rng),
            random_multivector(dim, &mut rng),
        );
        let d = &(&(&a * &b) * &c) - &(&a * &(&b * &c));
        assoc = assoc.max(d.coeffs().iter().map(|x| x.abs()).max().unwrap_or(0));
        let t = &(&a * &b).transpose() - &(&b.transpose() * &a.transpose());
        anti = anti.max(t.coeffs().iter().map(|x| x.abs()).max().unwrap_or(0));
    }
    let mut squares = 0i64;
    for m in 0..1u32 << dim {
        let b = BladeIndex::from_mask(m);
        let (sign, unit) = blade_mul(b, b, dim)?;
        let g = b.grade() as i64;
        // e_A e_A = (−1)^{g(g+1)/2}
        let expected = if (g * (g + 1) / 2) % 2 == 0 { 1 } else { -1 };
        if unit != BladeIndex::UNIT || sign as i64 != expected {
            squares += 1;
        }
    }

    let phi: f64 = 0.37;
    let rot = lambda(&SpinElement::planar(2, 1, 2, phi)?)?;
    let expected = DMatrix::from_row_slice(
        2,
        2,
        &[
            (2.0 * phi).cos(),
            -(2.0 * phi).sin(),
            (2.0 * phi).sin(),
            (2.0 * phi).cos(),
        ],
    );
    let mut hom = 0.0f64;
    let mut kernel = 0.0f64;
    let mut ortho = 0.0f64;
    for _ in 0..cfg.samples {
        let (x, y) = (random_rotor(4, &mut rng), random_rotor(4, &mut rng));
        let (lx, ly) = (lambda(&x)?, lambda(&y)?);
        let lxy = lambda(&x.mul(&y)?)?;
        hom = hom.max(lxy.max_abs_diff(&(lx.matrix() * ly.matrix())));
        kernel = kernel.max(lambda(&x.neg())?.max_abs_diff(lx.matrix()));
        ortho = ortho.max(orthogonality_residual(lx.matrix()));
    }
    let checks = vec![
        Check::new("clifford relation", relation as f64, 0.5),
        Check::new("blade squares", squares as f64, 0.5),
        Check::new("associativity", assoc as f64, 0.5),
        Check::new("transpose anti-automorphism", anti as f64, 0.5),
        Check::new(
            "lambda(x_phi) rotates by 2phi",
            rot.max_abs_diff(&expected),
            1e-12,
        ),
        Check::new("lambda homomorphism", hom, 1e-10),
        Check::new("lambda(-x) = lambda(x)", kernel, 1e-12),
        Check::new("orthogonality", ortho, 1e-10),
    ];
    Ok(Report::new(
        "verify clifford",
        json!({ "dim": dim, "samples": cfg.samples }),
        checks,
        Value::Null,
    ))
}

fn verify_plane(ell: i64, tol: f64, cfg: &SampleConfig) -> Result<Report> {
    let pq = models::plane_prequant(ell)?;
    let samples = pq.samples(cfg.samples, cfg.seed);
    let curvature = verify_curvature(pq.theta(), pq.omega(), &samples, tol)?;
    let angles: Vec<f64> = (0..8)
        .map(|j| -PI + 2.0 * PI * (j as f64 + 0.5) / 8.0)
        .collect();
    let checks = vec![
        Check::new("curvature d(theta) = -i omega", curvature.max_residual, tol),
        Check::new(
            "generator pairing",
            moment_pairing_residual(&pq, &samples),
            1e-9,
        ),
        Check::new(
            "S1 invariance",
            plane_invariance_residual(ell, &samples, &angles)?,
            1e-9,
        ),
        Check::new(
            "moment identity",
            models::moment_identity_residual(&pq, &samples),
            tol,
        ),
    ];
    Ok(Report::new(
        "verify plane",
        json!({ "ell": ell, "samples": cfg.samples, "seed": cfg.seed }),
        checks,
        json!({ "descriptor": pq.descriptor() }),
    ))
}

fn verify_sphere(k: i64, n: i64, tol: f64, cfg: &SampleConfig) -> Result<Report> {
    let pq = models::sphere_prequant(k, n);
    let samples = pq.samples(cfg.samples, cfg.seed);
    let curvature = verify_curvature(pq.theta(), pq.omega(), &samples, tol)?;
    let image = moment_image_sphere(k, n);
    let d = PrequantDescriptor::sphere(k, n);
    let pole = |z: f64, w: f64| -> Result<f64> {
        let p = SpherePoint::new(Complex64::new(z, 0.0), Complex64::new(w, 0.0))?;
        Ok(moment_map(&d, &ModelPoint::Sphere(p))?.alpha)
    };
    let (north, south) = (pole(1.0, 0.0)?, pole(0.0, 1.0)?);
    let endpoints = (north.min(south) - image.lo).abs() + (north.max(south) - image.hi).abs();
    let checks = vec![
        Check::new("curvature d(theta) = -i omega", curvature.max_residual, tol),
        Check::new(
            "moment closed form",
            moment_pairing_residual(&pq, &samples),
            1e-9,
        ),
        Check::new(
            "moment identity",
            models::moment_identity_residual(&pq, &samples),
            tol,
        ),
        Check::new("image endpoints", endpoints, 1e-12),
    ];
    Ok(Report::new(
        "verify sphere",
        json!({ "k": k, "n": n, "samples": cfg.samples, "seed": cfg.seed }),
        checks,
        json!({ "descriptor": pq.descriptor(), "moment_image": [image.lo, image.hi] }),
    ))
}

fn verify_cpn(n: u32, cfg: &SampleConfig) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dim = n as usize;
    let mut curvature = 0.0f64;
    for _ in 0..cfg.samples.min(20) {
        let (a, b) = (
            models::random_su(dim + 1, &mut rng),
            models::random_su(dim + 1, &mut rng),
        );
        let exact = curvature_cpn(dim, &a, &b)?;
        let numeric = curvature_cpn_numeric(dim, &a, &b)?;
        curvature = curvature.max((exact - numeric).abs());
    }
    let lift_dim = dim.min(3);
    let (mut real, mut det) = (0.0f64, 0.0f64);
    for _ in 0..cfg.samples {
        let a = models::random_unitary(lift_dim, &mut rng);
        let f = lift_f(&a)?;
        real = real.max(lambda_c(&f)?.max_abs_diff(&realify_matrix(&a)));
        det = det.max((det_map(&f) - a.determinant()).norm());
    }
    let t_builtin = Rational64::new(-(n as i64 + 1), 2);
    let parity_ok = (-4..=4).all(|j| {
        let t = Rational64::new(j, 2);
        let expected = if n % 2 == 1 {
            t.is_integer()
        } else {
            !t.is_integer()
        };
        classify_cpn(n, t) == expected
    });
    let checks = vec![
        Check::new("curvature vs local section", curvature, 1e-5),
        Check::new("lambda_c(F(A)) = A_R", real, 1e-8),
        Check::new("det(F(A)) = det A", det, 1e-8),
        Check::flag("classify parity rule", parity_ok),
        Check::flag(
            "builtin class t = -(n+1)/2 admissible",
            classify_cpn(n, t_builtin),
        ),
    ];
    Ok(Report::new(
        "verify cpn",
        json!({ "n": n, "samples": cfg.samples, "seed": cfg.seed }),
        checks,
        json!({ "descriptor": PrequantDescriptor::projective_space(n)?, "lift_dim": lift_dim }),
    ))
}

fn cut(k: i64, n: i64, ell: i64, alpha: Option<f64>, cfg: &SampleConfig) -> Result<Report> {
    models::check_odd(ell)?;
    let inputs = json!({ "k": k, "n": n, "ell": ell, "alpha": alpha });
    let report = match cutting::cut_sphere_with(k, n, ell, alpha, cfg) {
        Ok(r) => r,
        Err(e @ Error::BoundaryCut { .. }) => {
            let details = json!({
                "admissible": false,
                "residual": null,
                "validity": false,
                "cut_plus": null,
                "cut_minus": null,
                "reason": e.to_string(),
            });
            return Ok(Report::new(
                "cut",
                inputs,
                vec![Check::flag("validity", false)],
                details,
            ));
        }
        Err(e) => return Err(e),
    };
    let mut checks = vec![
        Check::flag("validity", report.validity),
        Check::new("descent residual", report.residual, ADMISSIBLE_TOL),
    ];
    if let (Some(plus), Some(minus)) = (report.cut_plus, report.cut_minus) {
        checks.push(Check::new(
            "two-form coefficients sum to n",
            (plus.omega + minus.omega - n).abs() as f64,
            0.5,
        ));
        checks.push(Check::new(
            "cut chart map pullback",
            cutting::verify_cut_chart_map_with(k, n, ell, cfg, cutting::ChartMapScale::Stated)?,
            1e-5,
        ));
    }
    let details = serde_json::to_value(&report).expect("cut reports serialize");
    Ok(Report::new("cut", inputs, checks, details))
}

fn moment(k: i64, n: i64, point: Option<&[f64]>) -> Result<Report> {
    let d = PrequantDescriptor::sphere(k, n);
    let pq = models::sphere_prequant(k, n);
    let image = moment_image_sphere(k, n);
    let points: Vec<SpherePoint> = match point {
        Some([z, w]) => vec![SpherePoint::new(
            Complex64::new(*z, 0.0),
            Complex64::new(*w, 0.0),
        )?],
        Some([a, b, c, e]) => vec![SpherePoint::new(
            Complex64::new(*a, *b),
            Complex64::new(*c, *e),
        )?],
        Some(other) => {
            return Err(Error::InvalidPoint(format!(
                "expected 2 or 4 coordinates, got {}",
                other.len()
            )))
        }
        None => (0..=10)
            .map(|j| SpherePoint::from_height(-1.0 + 0.2 * j as f64, 0.3, -0.8))
            .collect::<Result<_>>()?,
    };
    let mut closed = 0.0f64;
    let mut values = Vec::new();
    for p in &points {
        let phi = moment_map(&d, &ModelPoint::Sphere(*p))?.alpha;
        closed = closed.max((phi - sphere_moment(k, n, p)).abs());
        values.push(json!({ "h": p.height(), "phi": phi }));
    }
    let phis: Vec<f64> = values
        .iter()
        .map(|v| v["phi"].as_f64().unwrap_or(0.0))
        .collect();
    // affine in h with slope n/2, so consecutive differences have the sign of n
    let monotone = phis
        .windows(2)
        .map(|w| {
            if n >= 0 {
                (w[0] - w[1]).max(0.0)
            } else {
                (w[1] - w[0]).max(0.0)
            }
        })
        .fold(0.0, f64::max);
    let outside = phis
        .iter()
        .map(|&phi| (image.lo - phi).max(phi - image.hi).max(0.0))
        .fold(0.0, f64::max);
    let samples = pq.samples(8, 1);
    let checks = vec![
        Check::new("closed form vs pairing", closed, 1e-9),
        Check::new("values inside image", outside, 1e-9),
        Check::new("monotone in h", monotone, 1e-12),
        Check::new(
            "lift consistency",
            moment_pairing_residual(&pq, &samples),
            1e-9,
        ),
    ];
    Ok(Report::new(
        "moment",
        json!({ "k": k, "n": n, "point": point }),
        checks,
        json!({ "values": values, "moment_image": [image.lo, image.hi] }),
    ))
}
