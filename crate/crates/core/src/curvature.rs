//! Curvature tower of a matrix connection and the identities it satisfies.
//!
//! With `Ω_0 = 1` the tower is `Ω_k = dΩ_{k-1} + q^{k-1} Ω_{k-1} ω`. When
//! `d^k = 0` and `q` is a primitive `k`-th root of unity, `Ω_k` satisfies
//! `dΩ_k - ωΩ_k + Ω_kω = 0`; without those relations the left-hand side is a
//! non-zero residual that plays the role of a source current.

use crate::coeff::{qbinom, Coefficient, RingMode};
use crate::dga::{cyclic_canonical, Base, FormExpr, Gen, MatrixForm, Nilpotency};
use crate::error::Error;
use crate::report::{CheckReport, Modes};

/// A grade-1 matrix of forms.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    omega: MatrixForm,
}

impl Connection {
    pub fn new(omega: MatrixForm) -> Result<Self, Error> {
        match omega.grade() {
            Some(1) | None => Ok(Connection { omega }),
            Some(g) => Err(Error::GradeMixing(1, g)),
        }
    }

    /// The connection with independent generators `w[i,j]`.
    pub fn generic(dim: usize) -> Self {
        Connection { omega: MatrixForm::generic(dim, Gen::omega) }
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn omega(&self) -> &MatrixForm {
        &self.omega
    }
}

#[derive(Clone, Debug)]
pub struct CurvatureTower {
    levels: Vec<MatrixForm>,
    modes: Modes,
}

impl CurvatureTower {
    /// `Ω_r`.
    pub fn level(&self, r: usize) -> &MatrixForm {
        &self.levels[r]
    }

    pub fn levels(&self) -> &[MatrixForm] {
        &self.levels
    }

    /// Highest level built.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn modes(&self) -> Modes {
        self.modes
    }
}

/// One recursion step from level `level - 1` to `level`.
fn tower_step(prev: &MatrixForm, level: u32, c: &Connection, modes: Modes) -> Result<MatrixForm, Error> {
    let twist = Coefficient::q_pow(level as i64 - 1, modes.ring);
    prev.d(modes.nil).add(&prev.mul(c.omega())?.scale(&twist))
}

/// Builds `Ω_0 ... Ω_k`.
pub fn omega_tower(c: &Connection, k: usize, modes: Modes) -> Result<CurvatureTower, Error> {
    if k == 0 {
        return Err(Error::InvalidArgument("tower height must be positive".into()));
    }
    let mut levels = vec![MatrixForm::identity(c.dim(), modes.ring)];
    for level in 1..=k {
        let next = tower_step(&levels[level - 1], level as u32, c, modes)?;
        levels.push(next);
    }
    Ok(CurvatureTower { levels, modes })
}

/// Runs the recursion from an arbitrary `seed` placed at level `start`,
/// returning the levels `start ..= start + steps`.
pub fn continue_tower(
    seed: MatrixForm,
    start: u32,
    steps: u32,
    c: &Connection,
    modes: Modes,
) -> Result<Vec<MatrixForm>, Error> {
    let mut out = vec![seed];
    for s in 1..=steps {
        let next = tower_step(out.last().expect("seeded"), start + s, c, modes)?;
        out.push(next);
    }
    Ok(out)
}

/// `DΩ = dΩ - ωΩ + Ωω`.
pub fn covariant_derivative(omega_k: &MatrixForm, c: &Connection, modes: Modes) -> Result<MatrixForm, Error> {
    if omega_k.dim() != c.dim() {
        return Err(Error::DimMismatch(omega_k.dim(), c.dim()));
    }
    omega_k
        .d(modes.nil)
        .sub(&c.omega().mul(omega_k)?)?
        .add(&omega_k.mul(c.omega())?)
}

fn first_nonzero(m: &MatrixForm) -> Option<String> {
    let n = m.dim();
    (0..n * n).find_map(|k| {
        let e = m.get(k / n, k % n);
        (!e.is_zero()).then(|| {
            let s = e.to_string();
            let s = if s.len() > 160 { format!("{}...", &s[..160]) } else { s };
            format!("entry [{},{}] = {s}", k / n + 1, k % n + 1)
        })
    })
}

/// `DΩ_k` for the generic connection of size `n`; passes when it vanishes.
pub fn bianchi_check(k: u32, n: usize, modes: Modes) -> Result<CheckReport, Error> {
    let c = Connection::generic(n);
    let tower = omega_tower(&c, k as usize, modes)?;
    let residual = covariant_derivative(tower.level(k as usize), &c, modes)?;
    let report = CheckReport::new(format!("bianchi k={k} n={n}"), modes, residual.term_count(), residual.is_zero());
    Ok(match first_nonzero(&residual) {
        Some(d) => report.with_detail(d),
        None => report,
    })
}

/// Checks `Tr(ωΩ_k) = q^k Tr(Ω_kω)` in the q-cyclic quotient and that
/// `d Tr Ω_k` vanishes there.
pub fn trace_identity_check(k: u32, n: usize, modes: Modes) -> Result<Vec<CheckReport>, Error> {
    let c = Connection::generic(n);
    let tower = omega_tower(&c, k as usize, modes)?;
    let omega_k = tower.level(k as usize);

    let left = c.omega().mul(omega_k)?.cyclic_trace(modes.ring)?;
    let right = omega_k
        .mul(c.omega())?
        .cyclic_trace(modes.ring)?
        .scale(&Coefficient::q_pow(k as i64, modes.ring));
    let diff = cyclic_canonical(&(&left - &right), modes.ring)?;
    let cyclic = CheckReport::new(format!("trace-cyclic k={k} n={n}"), modes, diff.len(), diff.is_zero())
        .with_detail(format!("{} canonical terms in Tr(w Omega_k)", left.len()));

    let d_trace = cyclic_canonical(&omega_k.trace().d(modes.nil), modes.ring)?;
    let closed = CheckReport::new(format!("trace-closed k={k} n={n}"), modes, d_trace.len(), d_trace.is_zero());
    Ok(vec![cyclic, closed])
}

/// The Maurer–Cartan tower `Θ_1 = dg g^{-1}`,
/// `Θ_r = dΘ_{r-1} + q^{r-1} Θ_{r-1} Θ_1`, up to `Θ_top`.
pub fn maurer_cartan_thetas(top: u32, modes: Modes) -> Vec<FormExpr> {
    let g = FormExpr::gen(Gen::new(Base::Group));
    let ginv = FormExpr::gen(Gen::new(Base::GroupInv));
    let theta = g.d(modes.nil).mul(&ginv).with_ring(modes.ring);
    let mut out = vec![FormExpr::one().with_ring(modes.ring), theta.clone()];
    for r in 2..=top {
        let prev = out.last().expect("non-empty");
        let twist = Coefficient::q_pow(r as i64 - 1, modes.ring);
        let next = prev.d(modes.nil) + prev.mul(&theta).scale(&twist);
        out.push(next);
    }
    out.truncate(top as usize + 1);
    out
}

/// Builds the tower with `d^k = 0` and checks `Θ_r = d^r g · g^{-1}` for
/// `1 <= r < k` and `Θ_k = 0`.
pub fn maurer_cartan_tower(k: u32, ring: RingMode) -> Result<Vec<CheckReport>, Error> {
    if k < 2 {
        return Err(Error::InvalidArgument("Maurer-Cartan order must be at least 2".into()));
    }
    let modes = Modes::new(ring, Nilpotency::Order(k));
    let thetas = maurer_cartan_thetas(k, modes);
    let ginv = FormExpr::gen(Gen::new(Base::GroupInv));
    let mut reports = Vec::new();
    for (r, theta) in thetas.iter().enumerate().skip(1) {
        let r = r as u32;
        let residual = if r < k {
            let expect = FormExpr::gen(Gen::with_order(Base::Group, r)).mul(&ginv);
            theta - &expect
        } else {
            theta.clone()
        };
        let name = if r < k { format!("maurer-cartan theta_{r} = {} ginv", Gen::with_order(Base::Group, r)) } else { format!("maurer-cartan theta_{r} = 0") };
        reports.push(CheckReport::new(name, modes, residual.len(), residual.is_zero()));
    }
    Ok(reports)
}

/// `v = ṽ^i e_i` over a frame with `d e_i = ω_i^j e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    dim: u32,
}

impl VectorField {
    pub fn generic(dim: usize) -> Self {
        VectorField { dim: dim as u32 }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    /// `d^order ṽ^i`.
    pub fn component(&self, i: u32, order: u32) -> Gen {
        Gen::with_order(Base::VectorComp(i), order)
    }

    pub fn frame(&self, i: u32) -> Gen {
        Gen::new(Base::Frame { index: i, dim: self.dim })
    }

    /// `Σ_i ṽ^i e_i`.
    pub fn expr(&self) -> FormExpr {
        (1..=self.dim).fold(FormExpr::zero(), |acc, i| acc + FormExpr::word([self.component(i, 0), self.frame(i)]))
    }
}

/// Outcome of expanding `d^k(v^i e_i)` with `d e_i = ω_i^j e_j`.
#[derive(Clone, Debug)]
pub struct DkExpansion {
    /// Coefficient of `d^{k-r} v · Ω_r · e`, indexed by `r`.
    pub coefficients: Vec<Coefficient>,
    pub report: CheckReport,
}

/// Expands `d^k` of a vector field in a free calculus and compares with
/// `Σ_r [k r]_q d^{k-r} v Ω_r e`.
pub fn dk_expansion_check(k: u32, v: &VectorField) -> Result<DkExpansion, Error> {
    let modes = Modes::free();
    let n = v.dim();
    let dim = n as u32;
    let frame = |i: u32| v.frame(i);
    let lhs = v.expr().d_pow(k, modes.nil);

    let c = Connection::generic(n);
    let tower = omega_tower(&c, k.max(1) as usize, modes)?;
    let mut rhs = FormExpr::zero();
    for r in 0..=k {
        let binom = qbinom(k, r as i64, modes.ring);
        let omega_r = tower.level(r as usize);
        for i in 1..=dim {
            let dv = FormExpr::gen(v.component(i, k - r));
            for j in 1..=dim {
                let entry = omega_r.get(i as usize - 1, j as usize - 1);
                rhs = rhs + dv.mul(entry).mul(&FormExpr::gen(frame(j))).scale(&binom);
            }
        }
    }

    // d^{k-r} v_1 · d^{r-1} w[1,1] · e_1 occurs only in the r-th summand,
    // with unit weight inside Ω_r.
    let coefficients: Vec<Coefficient> = (0..=k)
        .map(|r| {
            let mut w = vec![v.component(1, k - r)];
            if r > 0 {
                w.push(Gen::with_order(Base::Connection(1, 1), r - 1));
            }
            w.push(frame(1));
            lhs.coefficient_of(&w)
        })
        .collect();
    let matches = coefficients.iter().enumerate().all(|(r, c)| *c == qbinom(k, r as i64, modes.ring));
    let residual = &lhs - &rhs;
    let report = CheckReport::new(
        format!("dk-expansion k={k} n={n}"),
        modes,
        residual.len(),
        residual.is_zero() && matches,
    )
    .with_detail(format!(
        "coefficients [{}]",
        coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
    ));
    Ok(DkExpansion { coefficients, report })
}

/// Flat closed generator matrix `P{grade}[i,j]`.
pub fn flat_generator(dim: usize, grade: u32) -> MatrixForm {
    MatrixForm::generic(dim, |row, col| Gen::new(Base::Flat { grade, row, col }))
}

fn matrix_pow(m: &MatrixForm, e: u32, mode: RingMode) -> Result<MatrixForm, Error> {
    (0..e).try_fold(MatrixForm::identity(m.dim(), mode), |acc, _| acc.mul(m))
}

/// With `q^k = 1` and a closed `P` standing in for `Ω_k`, continuing the
/// recursion from `P^{r1}` at level `r1·k` for `r` steps gives `P^{r1} Ω_r`.
pub fn product_identity_check(k: u32, r: u32, r1: u32, n: usize) -> Result<CheckReport, Error> {
    if k < 2 || r1 == 0 {
        return Err(Error::InvalidArgument("need k >= 2 and r1 >= 1".into()));
    }
    let modes = Modes::new(RingMode::root_of_unity(k)?, Nilpotency::Unbounded);
    let c = Connection::generic(n);
    let p = flat_generator(n, k);
    let seed = matrix_pow(&p, r1, modes.ring)?;
    let continued = continue_tower(seed.clone(), r1 * k, r, &c, modes)?;
    let tower = omega_tower(&c, r.max(1) as usize, modes)?;
    let expect = seed.mul(tower.level(r as usize))?;
    let residual = continued.last().expect("seeded").sub(&expect)?;
    Ok(CheckReport::new(
        format!("product k={k} r={r} r1={r1} n={n}"),
        modes,
        residual.term_count(),
        residual.is_zero(),
    ))
}

/// `J = (dΩ_k - ωΩ_k + Ω_kω) α`.
#[derive(Clone, Debug)]
pub struct SourceCurrent {
    pub k: u32,
    pub current: MatrixForm,
    pub alpha: FormExpr,
    pub modes: Modes,
}

impl SourceCurrent {
    /// The current with `d^k = 0` and a primitive `k`-th root imposed.
    pub fn reimpose_paired(&self) -> MatrixForm {
        let paired = Modes::paired(self.k);
        self.current.with_nilpotency(paired.nil).with_ring(paired.ring)
    }

    pub fn grade(&self) -> Option<u32> {
        self.current.grade()
    }
}

pub fn source_residual(c: &Connection, k: u32, alpha: &FormExpr, modes: Modes) -> Result<SourceCurrent, Error> {
    if alpha.grade()?.is_some_and(|g| g != 0) {
        return Err(Error::InvalidArgument("the current multiplier must be a scalar".into()));
    }
    let tower = omega_tower(c, k as usize, modes)?;
    let residual = covariant_derivative(tower.level(k as usize), c, modes)?;
    Ok(SourceCurrent { k, current: residual.mul_right(alpha)?, alpha: alpha.clone(), modes })
}
