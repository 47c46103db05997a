//! The self-test behind `qcurv check-all`: one group of reports per
//! acceptance item.

use qcurv_core::curvature::{
    bianchi_check, dk_expansion_check, maurer_cartan_tower, omega_tower, product_identity_check, source_residual,
    trace_identity_check, Connection, VectorField,
};
use qcurv_core::perm::{qfactor_oracle, qfactor_rule, SwapPath};
use qcurv_core::propagator::{
    build_kernel, invert_kernel, invertibility_scan, null_vector_residual, Metric, Momentum, NumericQMatrix,
};
use qcurv_core::sample::{self, rng, ExprConfig};
use qcurv_core::symmetrize::{check_qsymmetry, em_field_strength, qsymmetrize, QMatrix};
use qcurv_core::{
    generate_sm, qbinom, Base, CheckReport, Coefficient, Error, FormExpr, Gen, Modes, Nilpotency, Permutation,
    QFactorTable, RingMode,
};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::parser::parse_expr;

pub const PROPAGATOR_TOL: f64 = 1e-10;
pub const NULL_VECTOR_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub title: String,
    pub pass: bool,
    pub reports: Vec<CheckReport>,
}

impl Criterion {
    fn new(id: u32, title: &str, reports: Vec<CheckReport>) -> Self {
        let pass = !reports.is_empty() && reports.iter().all(|r| r.pass);
        Criterion { id, title: title.into(), pass, reports }
    }
}

fn boolean(name: impl Into<String>, pass: bool) -> CheckReport {
    CheckReport::new(name, "exact", usize::from(!pass), pass)
}

/// Passes when the wrapped report fails.
fn negative_control(mut r: CheckReport) -> CheckReport {
    r.check = format!("negative control: {}", r.check);
    r.pass = !r.pass;
    r
}

pub fn bianchi() -> Result<Vec<CheckReport>, Error> {
    let mut out = Vec::new();
    for (k, n) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        out.push(bianchi_check(k, n, Modes::paired(k))?);
        out.push(negative_control(bianchi_check(k, n, Modes::new(RingMode::Free, Nilpotency::Order(k)))?));
    }
    Ok(out)
}

pub fn tower_closed_forms() -> Result<Vec<CheckReport>, Error> {
    let mut out = Vec::new();
    let one = omega_tower(&Connection::generic(1), 3, Modes::free())?;
    let printed = one.level(2).get(0, 0).to_string();
    let expect = parse_expr("d(w[1,1]) + q*w[1,1]^2").expect("literal parses");
    out.push(
        boolean("omega_2 = dw + q w^2 (n=1)", one.level(2).get(0, 0) == &expect).with_detail(format!("printed {printed}")),
    );
    let expect3 = parse_expr("d^2(w[1,1]) + (q + q^2)*d(w[1,1])*w[1,1] + q^2*w[1,1]*d(w[1,1]) + q^3*w[1,1]^3")
        .expect("literal parses");
    out.push(boolean("omega_3 hand expansion (n=1)", one.level(3).get(0, 0) == &expect3));

    let nil = Nilpotency::Unbounded;
    let q = |e| Coefficient::q_pow(e, RingMode::Free);
    for n in 2..=3 {
        let c = Connection::generic(n);
        let w = c.omega();
        let dw = w.d(nil);
        let tower = omega_tower(&c, 3, Modes::free())?;
        let omega2 = dw.add(&w.mul(w)?.scale(&q(1)))?;
        let omega3 = dw
            .d(nil)
            .add(&dw.mul(w)?.scale(&(&q(1) + &q(2))))?
            .add(&w.mul(&dw)?.scale(&q(2)))?
            .add(&w.mul(w)?.mul(w)?.scale(&q(3)))?;
        out.push(boolean(format!("omega_2 closed form n={n}"), tower.level(2) == &omega2));
        out.push(boolean(format!("omega_3 closed form n={n}"), tower.level(3) == &omega3));
    }
    Ok(out)
}

pub fn q_binomial() -> Result<Vec<CheckReport>, Error> {
    let mut out = Vec::new();
    for k in 0..=5 {
        out.push(dk_expansion_check(k, &VectorField::generic(2))?.report);
    }
    let modes = [
        RingMode::Free,
        RingMode::primitive_root(3)?,
        RingMode::primitive_root(4)?,
        RingMode::root_of_unity(5)?,
    ];
    let mut pascal = true;
    let mut classical = true;
    for k in 1..=8u32 {
        for r in 0..=k as i64 {
            for mode in modes {
                let rec = &qbinom(k - 1, r - 1, mode) + &(&Coefficient::q_pow(r, mode) * &qbinom(k - 1, r, mode));
                pascal &= qbinom(k, r, mode) == rec;
            }
            let at_one = qbinom(k, r, RingMode::Free).eval_q(&BigRational::one());
            classical &= at_one
                == Coefficient::from_rational(qcurv_core::coeff::binomial(k, r as u32).into());
        }
    }
    out.push(boolean("qbinom satisfies the q-Pascal rule, k <= 8", pascal));
    out.push(boolean("qbinom at q = 1 is the binomial coefficient, k <= 8", classical));
    Ok(out)
}

pub fn nilpotency(seed: u64) -> Vec<CheckReport> {
    let cfg = ExprConfig { max_order: 0, ..ExprConfig::default() };
    let mut out = Vec::new();
    for k in 2..=4u32 {
        let modes = Modes::paired(k);
        let mut r = rng(seed ^ k as u64);
        let mut survivors = 0;
        let mut free_nonzero = 0;
        for i in 0..100 {
            let p = sample::product(&mut r, &cfg, 2 + i % 3);
            if !p.with_ring(modes.ring).d_pow(k, modes.nil).is_zero() {
                survivors += 1;
            }
            if !p.d_pow(k, modes.nil).is_zero() {
                free_nonzero += 1;
            }
        }
        out.push(CheckReport::new(format!("d^{k} of 100 random products vanishes"), modes, survivors, survivors == 0));
        out.push(
            CheckReport::new(
                format!("negative control: d^{k} in free ring mostly survives"),
                Modes::new(RingMode::Free, modes.nil),
                100 - free_nonzero,
                free_nonzero >= 50,
            )
            .with_detail(format!("{free_nonzero}/100 nonzero")),
        );
    }
    out
}

fn pairs(list: &[(u32, u32)]) -> Coefficient {
    list.iter().fold(Coefficient::one(), |acc, &(a, b)| &acc * &Coefficient::pair(a, b).expect("distinct"))
}

/// The six coefficients of the rank-3 symmetriser, read off at `(i,j,k) = (1,2,3)`.
pub fn rank_three_table() -> Vec<(Permutation, Coefficient)> {
    let (i, j, k) = (1, 2, 3);
    [
        ([1, 2, 3], Coefficient::one()),
        ([3, 1, 2], pairs(&[(j, k), (i, k)])),
        ([2, 3, 1], pairs(&[(i, j), (i, k)])),
        ([2, 1, 3], pairs(&[(i, j)])),
        ([3, 2, 1], pairs(&[(i, j), (i, k), (j, k)])),
        ([1, 3, 2], pairs(&[(j, k)])),
    ]
    .into_iter()
    .map(|(p, c)| (Permutation::new(p.to_vec()).expect("valid"), c))
    .collect()
}

pub fn qfactor_tables() -> Result<Vec<CheckReport>, Error> {
    let mut out = Vec::new();
    let table = QFactorTable::new(3)?;
    let expect = rank_three_table();
    let matches = table.len() == expect.len() && expect.iter().all(|(p, c)| table.get(p) == Some(c));
    out.push(boolean("rank-3 table matches the printed six coefficients", matches));

    let mut cases = 0;
    let mut mismatches = 0;
    for m in 1..=5 {
        for (idx, p) in generate_sm(m)?.iter().enumerate() {
            let rule = qfactor_rule(p);
            for path in [SwapPath::BubbleForward, SwapPath::BubbleBackward, SwapPath::Random(idx as u64)] {
                if qfactor_oracle(p, path) != rule {
                    mismatches += 1;
                }
            }
            cases += 1;
        }
    }
    out.push(
        CheckReport::new("rule vs swap oracle, m <= 5", "exact", mismatches, mismatches == 0 && cases == 153)
            .with_detail(format!("{cases} permutations")),
    );
    let mut sizes = true;
    let mut fact = 1;
    for m in 1..=7 {
        fact *= m;
        let all = generate_sm(m)?;
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        sizes &= all.len() == fact && distinct.len() == fact;
    }
    out.push(boolean("|S_m| = m! with no repeats, m <= 7", sizes));
    Ok(out)
}

pub fn symmetrizer(seed: u64) -> Result<Vec<CheckReport>, Error> {
    let mut r = rng(seed);
    let mut sym_fail = 0;
    let mut idem_fail = 0;
    let mut cases = 0;
    for m in 2..=4 {
        for n in 1..=3 {
            for abelian in [false, true] {
                let q = sample::qmatrix(&mut r, n);
                let t = sample::tensor(&mut r, m, n, abelian)?;
                let f = qsymmetrize(&t, &q)?;
                sym_fail += usize::from(!check_qsymmetry(&f, &q)?.pass);
                idem_fail += usize::from(qsymmetrize(&f, &q)? != f);
                cases += 1;
            }
        }
    }
    Ok(vec![
        CheckReport::new("adjacent-swap relation on symmetrised tensors", "exact", sym_fail, sym_fail == 0)
            .with_detail(format!("{cases} random tensors, m <= 4, n <= 3")),
        CheckReport::new("symmetriser is idempotent", "exact", idem_fail, idem_fail == 0),
    ])
}

pub fn em_example() -> Result<Vec<CheckReport>, Error> {
    let mut out = Vec::new();
    let minus = Coefficient::from_integer(-1);
    let n = 3;
    let q = QMatrix::symbolic_uniform(n, minus.clone())?;
    let em = em_field_strength(n, true, &q)?;
    out.push(em.diagonal.clone());
    out.push(em.raised.clone());
    for flip in 1..=n {
        let mut diag = vec![minus.clone(); n];
        diag[flip - 1] = Coefficient::one();
        let em = em_field_strength(n, true, &QMatrix::symbolic(&diag)?)?;
        out.push(negative_control(em.diagonal));
    }
    let mut offdiag = true;
    for mu in 1..=n as u32 {
        for nu in 1..=n as u32 {
            if mu == nu {
                continue;
            }
            let text = format!("1/2*(dA[{mu},{nu}] + q[{mu},{nu}]*dA[{nu},{mu}] + q[{mu},{nu}]*(1 + q[{nu},{mu}])*A[{mu}]*A[{nu}])");
            let expect = parse_expr(&text).expect("literal parses").commutative_normal();
            offdiag &= em.lower.get(&[mu, nu]) == &expect;
        }
    }
    out.push(boolean("abelian off-diagonal components match the printed first line", offdiag));
    Ok(out)
}

pub fn maurer_cartan() -> Result<Vec<CheckReport>, Error> {
    let mut out = maurer_cartan_tower(4, RingMode::Free)?;
    out.extend(maurer_cartan_tower(3, RingMode::Free)?.into_iter().filter(|r| r.check.ends_with("= 0")));
    Ok(out)
}

pub fn traces() -> Result<Vec<CheckReport>, Error> {
    let mut out = Vec::new();
    for k in 2..=3 {
        for n in 2..=3 {
            out.extend(trace_identity_check(k, n, Modes::paired(k))?);
        }
    }
    Ok(out)
}

pub fn products() -> Result<Vec<CheckReport>, Error> {
    [(2, 1), (2, 2), (3, 1), (3, 2)].into_iter().map(|(k, r)| product_identity_check(k, r, 1, 2)).collect()
}

pub fn source() -> Result<Vec<CheckReport>, Error> {
    let mut out = Vec::new();
    let alpha = FormExpr::gen(Gen::new(Base::Alpha));
    for k in 2..=3 {
        let j = source_residual(&Connection::generic(2), k, &alpha, Modes::free())?;
        let reduced = j.reimpose_paired();
        out.push(
            CheckReport::new(format!("source current k={k} vanishes under the paired relations"), Modes::paired(k), reduced.term_count(), reduced.is_zero())
                .with_detail(format!("{} terms before reduction", j.current.term_count())),
        );
        out.push(boolean(format!("source current k={k} has grade {}", k + 1), j.grade() == Some(k + 1)));
    }
    Ok(out)
}

pub fn propagator(seed: u64) -> Result<Vec<CheckReport>, Error> {
    let mut out = Vec::new();
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    let mut inverted = 0;
    for d in [3, 4, 5] {
        let metric = Metric::mostly_minus(d);
        for _ in 0..40 {
            let q = NumericQMatrix::random(d, &mut r);
            let k = Momentum::random(d, &mut r)?;
            if let Ok(inv) = invert_kernel(&build_kernel(&k, &q, &metric)?, PROPAGATOR_TOL) {
                inverted += 1;
                worst = worst.max(inv.residual);
            }
        }
    }
    out.push(
        CheckReport::new(
            "successful inversions have residual <= 1e-10",
            "numeric",
            0,
            inverted > 0 && worst <= PROPAGATOR_TOL,
        )
        .with_detail(format!("{inverted}/120 inverted, worst residual {worst:e}")),
    );

    let d = 4;
    let metric = Metric::mostly_minus(d);
    let all = NumericQMatrix::all_minus_one(d);
    let mut singular = 0;
    let mut worst_null: f64 = 0.0;
    for _ in 0..100 {
        let k = Momentum::random(d, &mut r)?;
        worst_null = worst_null.max(null_vector_residual(&k, &all, &metric)?);
        if invert_kernel(&build_kernel(&k, &all, &metric)?, PROPAGATOR_TOL).is_err() {
            singular += 1;
        }
    }
    out.push(
        CheckReport::new("all -1 kernel singular for sampled momenta", "numeric", 100 - singular, singular == 100 && worst_null <= NULL_VECTOR_TOL)
            .with_detail(format!("{singular}/100 singular, worst |M eta k| {worst_null:e}")),
    );

    let q = NumericQMatrix::random(d, &mut r);
    let a = invertibility_scan(&q, 200, seed, &metric, PROPAGATOR_TOL)?;
    let b = invertibility_scan(&q, 200, seed, &metric, PROPAGATOR_TOL)?;
    let same = serde_json::to_string(&a).ok() == serde_json::to_string(&b).ok() && a == b;
    out.push(boolean("seeded scans are reproducible", same).with_detail(format!("fraction {}", a.fraction)));
    Ok(out)
}

pub fn round_trip(seed: u64, count: usize) -> CheckReport {
    let cfg = ExprConfig::default();
    let mut r = rng(seed);
    let mut failures = 0;
    let mut first = None;
    for _ in 0..count {
        let e = sample::homogeneous_expr(&mut r, &cfg, RingMode::Free);
        let printed = e.to_string();
        match parse_expr(&printed) {
            Ok(back) if back == e => {}
            Ok(back) => {
                failures += 1;
                first.get_or_insert(format!("{printed} reparsed as {back}"));
            }
            Err(err) => {
                failures += 1;
                first.get_or_insert(format!("{printed}: {err}"));
            }
        }
    }
    let report = CheckReport::new(format!("parse(print(e)) = e on {count} random expressions"), "exact", failures, failures == 0);
    match first {
        Some(d) => report.with_detail(d),
        None => report,
    }
}

/// Every acceptance item that can be checked from inside the binary.
pub fn all(seed: u64) -> Result<Vec<Criterion>, Error> {
    Ok(vec![
        Criterion::new(1, "Bianchi identity", bianchi()?),
        Criterion::new(2, "curvature tower closed forms", tower_closed_forms()?),
        Criterion::new(3, "q-binomial theorem", q_binomial()?),
        Criterion::new(4, "nilpotency propagation", nilpotency(seed)),
        Criterion::new(5, "Q-factor tables", qfactor_tables()?),
        Criterion::new(6, "q-symmetrizer", symmetrizer(seed)?),
        Criterion::new(7, "electromagnetic example", em_example()?),
        Criterion::new(8, "Maurer-Cartan tower", maurer_cartan()?),
        Criterion::new(9, "trace identities", traces()?),
        Criterion::new(10, "product identities", products()?),
        Criterion::new(11, "source residual", source()?),
        Criterion::new(12, "propagator", propagator(seed)?),
        Criterion::new(13, "parser round trip", vec![round_trip(seed, 200)]),
    ])
}
