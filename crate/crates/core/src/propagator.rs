//! Numeric kernel `M_{μν} = k² η_{μν} + q_{μν} k_μ k_ν` and its matrix inverse.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;

/// Tolerance for the reciprocity check on numeric q-matrices.
pub const RECIPROCITY_TOL: f64 = 1e-12;

/// Diagonal metric signature.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    signs: Vec<f64>,
}

impl Metric {
    /// `diag(+1, -1, ..., -1)`.
    pub fn mostly_minus(d: usize) -> Self {
        Metric { signs: (0..d).map(|i| if i == 0 { 1.0 } else { -1.0 }).collect() }
    }

    /// `diag(-1, +1, ..., +1)`.
    pub fn mostly_plus(d: usize) -> Self {
        Metric { signs: (0..d).map(|i| if i == 0 { -1.0 } else { 1.0 }).collect() }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn sign(&self, mu: usize) -> f64 {
        self.signs[mu]
    }

    pub fn square(&self, k: &Momentum) -> f64 {
        k.components.iter().zip(&self.signs).map(|(x, s)| s * x * x).sum()
    }

    /// `η k`.
    pub fn raise(&self, k: &Momentum) -> Vec<f64> {
        k.components.iter().zip(&self.signs).map(|(x, s)| s * x).collect()
    }
}

/// `D = 1 + d` real components with `d >= 2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Momentum {
    components: Vec<f64>,
}

impl Momentum {
    pub fn new(components: Vec<f64>) -> Result<Self, Error> {
        if components.len() < 3 {
            return Err(Error::InvalidMomentum(format!("need D >= 3, got {}", components.len())));
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMomentum("non-finite component".into()));
        }
        Ok(Momentum { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn scaled(&self, lambda: f64) -> Momentum {
        Momentum { components: self.components.iter().map(|x| x * lambda).collect() }
    }

    /// Components drawn uniformly from `[-1, 1]`.
    pub fn random<R: Rng>(d: usize, rng: &mut R) -> Result<Self, Error> {
        Momentum::new((0..d).map(|_| rng.random_range(-1.0..=1.0)).collect())
    }
}

/// Complex exchange parameters with `q_{νμ} = 1/q_{μν}` to [`RECIPROCITY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct NumericQMatrix {
    values: DMatrix<Complex64>,
}

impl NumericQMatrix {
    pub fn new(values: DMatrix<Complex64>) -> Result<Self, Error> {
        if !values.is_square() || values.nrows() == 0 {
            return Err(Error::InvalidQMatrix(format!("shape {}x{}", values.nrows(), values.ncols())));
        }
        let n = values.nrows();
        for i in 0..n {
            for j in 0..n {
                let v = values[(i, j)];
                if v.norm() == 0.0 || !v.is_finite() {
                    return Err(Error::InvalidQMatrix(format!("entry [{},{}] = {v} is not invertible", i + 1, j + 1)));
                }
                let err = (v * values[(j, i)] - Complex64::new(1.0, 0.0)).norm();
                if err > RECIPROCITY_TOL {
                    return Err(Error::InvalidQMatrix(format!(
                        "q[{0},{1}]*q[{1},{0}] differs from 1 by {err:e}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(NumericQMatrix { values })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, Error> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidQMatrix("rows of unequal length".into()));
        }
        NumericQMatrix::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn constant(d: usize, c: Complex64) -> Result<Self, Error> {
        NumericQMatrix::new(DMatrix::from_element(d, d, c))
    }

    /// Every entry `-1`: the undeformed transverse kernel.
    pub fn all_minus_one(d: usize) -> Self {
        NumericQMatrix::constant(d, Complex64::new(-1.0, 0.0)).expect("-1 is its own inverse")
    }

    /// Random reciprocal matrix with diagonal `-1` and upper entries
    /// `r e^{iθ}`, `r ∈ [1/2, 2]`.
    pub fn random<R: Rng>(d: usize, rng: &mut R) -> Self {
        let mut values = DMatrix::from_element(d, d, Complex64::new(-1.0, 0.0));
        for i in 0..d {
            for j in i + 1..d {
                let r: f64 = rng.random_range(0.5..=2.0);
                let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let v = Complex64::from_polar(r, theta);
                values[(i, j)] = v;
                values[(j, i)] = v.inv();
            }
        }
        NumericQMatrix::new(values).expect("constructed reciprocal")
    }

    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    pub fn get(&self, mu: usize, nu: usize) -> Complex64 {
        self.values[(mu, nu)]
    }
}

pub fn inf_norm(m: &DMatrix<Complex64>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `M_{μν} = k² η_{μν} + q_{μν} k_μ k_ν`, no summation inside an entry.
pub fn build_kernel(k: &Momentum, q: &NumericQMatrix, metric: &Metric) -> Result<DMatrix<Complex64>, Error> {
    let d = k.dim();
    if q.dim() != d {
        return Err(Error::DimMismatch(d, q.dim()));
    }
    if metric.dim() != d {
        return Err(Error::DimMismatch(d, metric.dim()));
    }
    let k2 = metric.square(k);
    let kc = k.components();
    Ok(DMatrix::from_fn(d, d, |mu, nu| {
        let eta = if mu == nu { metric.sign(mu) } else { 0.0 };
        Complex64::new(k2 * eta, 0.0) + q.get(mu, nu) * (kc[mu] * kc[nu])
    }))
}

/// A successful inversion.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub inverse: DMatrix<Complex64>,
    /// `‖M‖∞ ‖Δ‖∞`.
    pub condition: f64,
    /// `max(‖MΔ - I‖∞, ‖ΔM - I‖∞)`.
    pub residual: f64,
}

/// Inverts `m`, refusing when the condition estimate exceeds `1/tol` or the
/// two-sided residual exceeds `tol`.
pub fn invert_kernel(m: &DMatrix<Complex64>, tol: f64) -> Result<Inversion, Error> {
    if !m.is_square() {
        return Err(Error::DimMismatch(m.nrows(), m.ncols()));
    }
    let Some(inverse) = m.clone().try_inverse() else {
        return Err(Error::Singular { condition: f64::INFINITY, residual: f64::NAN });
    };
    let condition = inf_norm(m) * inf_norm(&inverse);
    let id = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
    let residual = inf_norm(&(m * &inverse - &id)).max(inf_norm(&(&inverse * m - &id)));
    if !condition.is_finite() || condition > 1.0 / tol || residual.is_nan() || residual > tol {
        return Err(Error::Singular { condition, residual });
    }
    Ok(Inversion { inverse, condition, residual })
}

/// `‖M η k‖∞`; vanishes when every `q_{μν} = -1`.
pub fn null_vector_residual(k: &Momentum, q: &NumericQMatrix, metric: &Metric) -> Result<f64, Error> {
    let m = build_kernel(k, q, metric)?;
    let v = DMatrix::from_iterator(k.dim(), 1, metric.raise(k).into_iter().map(|x| Complex64::new(x, 0.0)));
    Ok(inf_norm(&(m * v)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSample {
    pub momentum: Vec<f64>,
    pub invertible: bool,
    pub condition: Option<f64>,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub samples: usize,
    pub successes: usize,
    pub fraction: f64,
    /// Largest condition estimate among successful inversions.
    pub worst_condition: Option<f64>,
    /// Largest residual among successful inversions.
    pub worst_residual: Option<f64>,
    pub examples: Vec<ScanSample>,
}

/// Number of leading samples echoed in [`ScanReport::examples`].
pub const SCAN_EXAMPLES: usize = 3;

/// Inverts the kernel at `samples` seeded random momenta.
pub fn invertibility_scan(
    q: &NumericQMatrix,
    samples: usize,
    seed: u64,
    metric: &Metric,
    tol: f64,
) -> Result<ScanReport, Error> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0;
    let mut worst_condition: Option<f64> = None;
    let mut worst_residual: Option<f64> = None;
    let mut examples = Vec::new();
    for s in 0..samples {
        let k = Momentum::random(q.dim(), &mut rng)?;
        let outcome = invert_kernel(&build_kernel(&k, q, metric)?, tol);
        let sample = match &outcome {
            Ok(inv) => {
                successes += 1;
                worst_condition = Some(worst_condition.map_or(inv.condition, |w| w.max(inv.condition)));
                worst_residual = Some(worst_residual.map_or(inv.residual, |w| w.max(inv.residual)));
                ScanSample { momentum: k.components.clone(), invertible: true, condition: Some(inv.condition), residual: Some(inv.residual) }
            }
            Err(_) => ScanSample { momentum: k.components.clone(), invertible: false, condition: None, residual: None },
        };
        if s < SCAN_EXAMPLES {
            examples.push(sample);
        }
    }
    Ok(ScanReport {
        samples,
        successes,
        fraction: successes as f64 / samples as f64,
        worst_condition,
        worst_residual,
        examples,
    })
}
