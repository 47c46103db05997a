//! q-symmetrisation of component tensors and the deformed field strength.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::Coefficient;
use crate::dga::{Base, FormExpr, Gen};
use crate::error::Error;
use crate::perm::{instantiate, QFactorTable};
use crate::report::CheckReport;

/// Exchange parameters `q_{μν}` with `q_{νμ} = 1/q_{μν}`, diagonal included,
/// so every diagonal entry squares to one. Indices are one-based.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    n: usize,
    values: Vec<Coefficient>,
}

impl QMatrix {
    pub fn new(rows: Vec<Vec<Coefficient>>) -> Result<Self, Error> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidQMatrix("empty matrix".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidQMatrix(format!("row of length {} in a {n}x{n} matrix", r.len())));
        }
        let values: Vec<Coefficient> = rows.into_iter().flatten().collect();
        for i in 0..n {
            for j in 0..n {
                let v = &values[i * n + j];
                v.inverse()
                    .map_err(|_| Error::InvalidQMatrix(format!("entry [{},{}] = {v} is not invertible", i + 1, j + 1)))?;
                let product = v * &values[j * n + i];
                if !product.is_one() {
                    return Err(Error::InvalidQMatrix(format!(
                        "q[{0},{1}]*q[{1},{0}] = {product}, expected 1",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(QMatrix { n, values })
    }

    /// Off-diagonal entries are the symbols `q[i,j]`; the diagonal is given.
    pub fn symbolic(diagonal: &[Coefficient]) -> Result<Self, Error> {
        let n = diagonal.len();
        let rows = (1..=n as u32)
            .map(|i| {
                (1..=n as u32)
                    .map(|j| if i == j { Ok(diagonal[i as usize - 1].clone()) } else { Coefficient::pair(i, j) })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        QMatrix::new(rows)
    }

    /// Symbolic off-diagonal entries with every diagonal entry equal to `d`.
    pub fn symbolic_uniform(n: usize, d: Coefficient) -> Result<Self, Error> {
        QMatrix::symbolic(&vec![d; n])
    }

    /// Every entry equal to `c`; needs `c^2 = 1`.
    pub fn constant(n: usize, c: Coefficient) -> Result<Self, Error> {
        QMatrix::new(vec![vec![c; n]; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `q_{ij}`, one-based.
    pub fn get(&self, i: u32, j: u32) -> &Coefficient {
        &self.values[(i as usize - 1) * self.n + (j as usize - 1)]
    }

    pub fn transpose(&self) -> QMatrix {
        let n = self.n;
        let values = (0..n * n).map(|k| self.values[(k % n) * n + k / n].clone()).collect();
        QMatrix { n, values }
    }

    pub fn rows(&self) -> Vec<Vec<Coefficient>> {
        self.values.chunks(self.n).map(<[Coefficient]>::to_vec).collect()
    }
}

/// Rank-`m` array of grade-0 expressions over index range `1..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentTensor {
    rank: usize,
    dim: usize,
    entries: Vec<FormExpr>,
    abelian: bool,
}

impl ComponentTensor {
    pub fn new(rank: usize, dim: usize, entries: Vec<FormExpr>, abelian: bool) -> Result<Self, Error> {
        if rank == 0 || dim == 0 {
            return Err(Error::InvalidTensor("rank and dimension must be positive".into()));
        }
        let expected = dim.pow(rank as u32);
        if entries.len() != expected {
            return Err(Error::DimMismatch(entries.len(), expected));
        }
        for e in &entries {
            if let Some(g) = e.grade()? {
                if g != 0 {
                    return Err(Error::InvalidTensor(format!("component of grade {g}")));
                }
            }
        }
        let entries = if abelian { entries.iter().map(FormExpr::commutative_normal).collect() } else { entries };
        Ok(ComponentTensor { rank, dim, entries, abelian })
    }

    pub fn from_fn<F>(rank: usize, dim: usize, abelian: bool, mut f: F) -> Result<Self, Error>
    where
        F: FnMut(&[u32]) -> FormExpr,
    {
        let entries = index_tuples(rank, dim).map(|t| f(&t)).collect();
        ComponentTensor::new(rank, dim, entries, abelian)
    }

    /// Independent symbols `f[i_1,...,i_m]`.
    pub fn generic(rank: usize, dim: usize, abelian: bool) -> Result<Self, Error> {
        ComponentTensor::from_fn(rank, dim, abelian, |t| FormExpr::gen(Gen::new(Base::Component(t.to_vec()))))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    fn offset(&self, tuple: &[u32]) -> usize {
        assert_eq!(tuple.len(), self.rank, "index tuple of wrong length");
        tuple.iter().fold(0, |acc, &i| {
            assert!(i >= 1 && i as usize <= self.dim, "index {i} out of range");
            acc * self.dim + (i as usize - 1)
        })
    }

    pub fn get(&self, tuple: &[u32]) -> &FormExpr {
        &self.entries[self.offset(tuple)]
    }

    /// All index tuples in lexicographic order, paired with their components.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u32>, &FormExpr)> {
        index_tuples(self.rank, self.dim).zip(&self.entries)
    }

    fn normal(&self, e: FormExpr) -> FormExpr {
        if self.abelian {
            e.commutative_normal()
        } else {
            e
        }
    }
}

/// `(1,..,1), (1,..,2), ..., (n,..,n)`.
pub fn index_tuples(rank: usize, dim: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = dim.pow(rank as u32);
    (0..total).map(move |mut k| {
        let mut t = vec![0u32; rank];
        for slot in t.iter_mut().rev() {
            *slot = (k % dim) as u32 + 1;
            k /= dim;
        }
        t
    })
}

fn check_q_dim(t: &ComponentTensor, q: &QMatrix) -> Result<(), Error> {
    if t.dim != q.n {
        return Err(Error::DimMismatch(t.dim, q.n));
    }
    Ok(())
}

/// `F_i = (1/m!) Σ_p Q_p(i) f_{i∘p}` with the exchange factor of `p`
/// bound to the indices of `i`.
pub fn qsymmetrize(t: &ComponentTensor, q: &QMatrix) -> Result<ComponentTensor, Error> {
    if t.rank < 2 {
        return Err(Error::InvalidTensor("q-symmetrisation needs rank at least 2".into()));
    }
    check_q_dim(t, q)?;
    let table = QFactorTable::new(t.rank)?;
    let norm = Coefficient::from_rational(BigRational::new(
        BigInt::from(1),
        (1..=t.rank as u64).product::<u64>().into(),
    ));
    let mut entries = Vec::with_capacity(t.entries.len());
    for tuple in index_tuples(t.rank, t.dim) {
        let mut acc = FormExpr::zero();
        for (p, factor) in table.iter() {
            let weight = instantiate(factor, &tuple, |a, b| Ok(q.get(a, b).clone()))?;
            acc = acc + t.get(&p.permute(&tuple)).scale(&weight);
        }
        entries.push(acc.scale(&norm));
    }
    ComponentTensor::new(t.rank, t.dim, entries, t.abelian)
}

/// Checks `F_{..ab..} = q_{ab} F_{..ba..}` for every tuple and every
/// adjacent slot pair.
pub fn check_qsymmetry(f: &ComponentTensor, q: &QMatrix) -> Result<CheckReport, Error> {
    check_q_dim(f, q)?;
    let mut violations = 0;
    let mut residual_terms = 0;
    let mut first = None;
    for (tuple, value) in f.iter() {
        for s in 0..f.rank.saturating_sub(1) {
            let (a, b) = (tuple[s], tuple[s + 1]);
            let mut swapped = tuple.clone();
            swapped.swap(s, s + 1);
            let diff = f.normal(value - &f.get(&swapped).scale(q.get(a, b)));
            if !diff.is_zero() {
                violations += 1;
                residual_terms += diff.len();
                first.get_or_insert_with(|| format!("first violation at {tuple:?}, slots {},{}", s + 1, s + 2));
            }
        }
    }
    let name = format!("q-symmetry m={} n={}", f.rank, f.dim);
    let report = CheckReport::new(name, "exact", residual_terms, violations == 0);
    Ok(match first {
        Some(d) => report.with_detail(format!("{violations} violations, {d}")),
        None => report,
    })
}

fn potential(mu: u32) -> FormExpr {
    FormExpr::gen(Gen::new(Base::Potential(mu)))
}

fn potential_grad(mu: u32, nu: u32) -> FormExpr {
    FormExpr::gen(Gen::new(Base::PotentialGrad(mu, nu)))
}

/// Unsymmetrised components `f_{μν} = ∂A[μ,ν] + q_{μν} A[μ] A[ν]`.
pub fn em_raw_components(n: usize, abelian: bool, q: &QMatrix) -> Result<ComponentTensor, Error> {
    if q.n() != n {
        return Err(Error::DimMismatch(n, q.n()));
    }
    ComponentTensor::from_fn(2, n, abelian, |t| {
        let (mu, nu) = (t[0], t[1]);
        potential_grad(mu, nu) + potential(mu).mul(&potential(nu)).scale(q.get(mu, nu))
    })
}

/// `((1+x)/2)(∂A[μ,μ] + x A[μ]^2)`: the diagonal field strength for an
/// arbitrary diagonal exchange parameter `x`.
pub fn diagonal_component(mu: u32, x: &Coefficient) -> FormExpr {
    let half = Coefficient::from_rational(BigRational::new(1.into(), 2.into()));
    let prefactor = &(&Coefficient::one() + x) * &half;
    (potential_grad(mu, mu) + potential(mu).mul(&potential(mu)).scale(x)).scale(&prefactor)
}

/// Field strength, its formally raised counterpart and the consistency
/// reports that go with them.
#[derive(Clone, Debug)]
pub struct EmField {
    pub raw: ComponentTensor,
    /// `F_{μν}`.
    pub lower: ComponentTensor,
    /// `F^{μν}`: the same symbols weighted with the transposed exchange matrix.
    pub upper: ComponentTensor,
    /// Whether every diagonal `F_{μμ}` vanishes.
    pub diagonal: CheckReport,
    /// `F^{μν} = q_{νμ} F^{νμ}`.
    pub raised: CheckReport,
}

impl EmField {
    /// `Σ_{μν} F_{μν} F^{μν}` as a formal sum.
    pub fn lagrangian(&self) -> FormExpr {
        let mut out = FormExpr::zero();
        for (tuple, lower) in self.lower.iter() {
            out = out + lower.mul(self.upper.get(&tuple));
        }
        self.lower.normal(out)
    }
}

pub fn em_field_strength(n: usize, abelian: bool, q: &QMatrix) -> Result<EmField, Error> {
    if n < 2 {
        return Err(Error::InvalidArgument("field strength needs at least two dimensions".into()));
    }
    let raw = em_raw_components(n, abelian, q)?;
    let lower = qsymmetrize(&raw, q)?;
    let qt = q.transpose();
    let upper = qsymmetrize(&raw, &qt)?;

    let mut nonzero = Vec::new();
    let mut terms = 0;
    let mut closed_form = true;
    for mu in 1..=n as u32 {
        let f = lower.get(&[mu, mu]);
        closed_form &= *f == lower.normal(diagonal_component(mu, q.get(mu, mu)));
        if !f.is_zero() {
            terms += f.len();
            nonzero.push(format!("F[{mu},{mu}] = {f}"));
        }
    }
    let constraint_holds = (1..=n as u32).all(|mu| *q.get(mu, mu) == Coefficient::from_integer(-1));
    let detail = format!(
        "q_mumu = -1 for all mu: {constraint_holds}; closed form matches: {closed_form}{}",
        if nonzero.is_empty() { String::new() } else { format!("; {}", nonzero.join("; ")) }
    );
    let diagonal = CheckReport::new(format!("em-diagonal n={n} abelian={abelian}"), "exact", terms, nonzero.is_empty())
        .with_detail(detail);
    let mut raised = check_qsymmetry(&upper, &qt)?;
    raised.check = format!("em-raised n={n} abelian={abelian}");
    Ok(EmField { raw, lower, upper, diagonal, raised })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(i: u32, j: u32) -> Coefficient {
        Coefficient::pair(i, j).unwrap()
    }

    fn comp(t: &[u32]) -> FormExpr {
        FormExpr::gen(Gen::new(Base::Component(t.to_vec())))
    }

    fn minus_one() -> Coefficient {
        Coefficient::from_integer(-1)
    }

    #[test]
    fn qmatrix_validation() {
        assert!(QMatrix::symbolic_uniform(3, minus_one()).is_ok());
        assert!(QMatrix::constant(2, Coefficient::from_integer(2)).is_err());
        let bad = vec![vec![minus_one(), pair(1, 2)], vec![pair(1, 2), minus_one()]];
        assert!(matches!(QMatrix::new(bad), Err(Error::InvalidQMatrix(_))));
        let q = QMatrix::symbolic_uniform(2, minus_one()).unwrap();
        assert_eq!(q.transpose().get(1, 2), &pair(2, 1));
    }

    #[test]
    fn rank_two_average() {
        let q = QMatrix::symbolic_uniform(3, minus_one()).unwrap();
        let t = ComponentTensor::generic(2, 3, false).unwrap();
        let f = qsymmetrize(&t, &q).unwrap();
        let half = Coefficient::from_rational(BigRational::new(1.into(), 2.into()));
        let expect = (comp(&[1, 3]) + comp(&[3, 1]).scale(&pair(1, 3))).scale(&half);
        assert_eq!(f.get(&[1, 3]), &expect);
        assert!(f.get(&[2, 2]).is_zero());
        assert!(check_qsymmetry(&f, &q).unwrap().pass);
        assert!(!check_qsymmetry(&t, &q).unwrap().pass);
    }

    #[test]
    fn rank_three_term_list() {
        let q = QMatrix::symbolic_uniform(3, minus_one()).unwrap();
        let t = ComponentTensor::generic(3, 3, false).unwrap();
        let f = qsymmetrize(&t, &q).unwrap();
        let (i, j, k) = (1, 2, 3);
        let terms = [
            (Coefficient::one(), [i, j, k]),
            (pair(j, k) * pair(i, k), [k, i, j]),
            (pair(i, j) * pair(i, k), [j, k, i]),
            (pair(i, j), [j, i, k]),
            (pair(i, j) * pair(i, k) * pair(j, k), [k, j, i]),
            (pair(j, k), [i, k, j]),
        ];
        let sixth = Coefficient::from_rational(BigRational::new(1.into(), 6.into()));
        let expect = terms.iter().fold(FormExpr::zero(), |acc, (c, t)| acc + comp(t).scale(c)).scale(&sixth);
        assert_eq!(f.get(&[i, j, k]), &expect);
    }

    #[test]
    fn classical_symmetric_is_fixed() {
        let q = QMatrix::constant(2, Coefficient::one()).unwrap();
        let t = ComponentTensor::from_fn(2, 2, true, |t| {
            let mut s = t.to_vec();
            s.sort();
            FormExpr::gen(Gen::new(Base::Component(s)))
        })
        .unwrap();
        assert_eq!(qsymmetrize(&t, &q).unwrap(), t);
    }

    #[test]
    fn diagonal_constraint_both_ways() {
        let q = QMatrix::symbolic_uniform(3, minus_one()).unwrap();
        let em = em_field_strength(3, true, &q).unwrap();
        assert!(em.diagonal.pass, "{}", em.diagonal);
        assert!(em.raised.pass);

        let mut diag = vec![minus_one(); 3];
        diag[0] = Coefficient::one();
        let q = QMatrix::symbolic(&diag).unwrap();
        let em = em_field_strength(3, true, &q).unwrap();
        assert!(!em.diagonal.pass);
        let expect = potential_grad(1, 1) + potential(1).mul(&potential(1));
        assert_eq!(em.lower.get(&[1, 1]), &expect);
    }

    #[test]
    fn diagonal_helper() {
        assert!(diagonal_component(1, &minus_one()).is_zero());
        assert!(!diagonal_component(1, &Coefficient::one()).is_zero());
        let q = Coefficient::q_pow(1, crate::coeff::RingMode::Free);
        assert!(!diagonal_component(1, &q).is_zero());
    }

    #[test]
    fn classical_limit() {
        let q = QMatrix::constant(4, minus_one()).unwrap();
        let em = em_field_strength(4, true, &q).unwrap();
        let half = Coefficient::from_rational(BigRational::new(1.into(), 2.into()));
        let expect = (potential_grad(1, 2) - potential_grad(2, 1)).scale(&half);
        assert_eq!(em.lower.get(&[1, 2]), &expect);
        assert!(em.diagonal.pass);
    }

    #[test]
    fn lagrangian_is_scalar() {
        let q = QMatrix::symbolic_uniform(2, minus_one()).unwrap();
        let em = em_field_strength(2, true, &q).unwrap();
        let l = em.lagrangian();
        assert!(!l.is_zero());
        assert_eq!(l.grade().unwrap(), Some(0));
    }
}
