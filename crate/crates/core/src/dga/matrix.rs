use std::fmt;

use super::expr::{FormExpr, Nilpotency, Word};
use super::gen::Gen;
use crate::coeff::{Coefficient, RingMode};
use crate::error::Error;

/// Square, grade-homogeneous matrix of forms. Entries are row-major and
/// indexed from zero; generator indices built from them are one-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixForm {
    dim: usize,
    entries: Vec<FormExpr>,
    grade: Option<u32>,
}

impl MatrixForm {
    pub fn new(dim: usize, entries: Vec<FormExpr>) -> Result<Self, Error> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch(entries.len(), dim * dim));
        }
        let mut grade = None;
        for e in &entries {
            if let Some(g) = e.grade()? {
                match grade {
                    None => grade = Some(g),
                    Some(h) if h != g => return Err(Error::GradeMixing(h, g)),
                    _ => {}
                }
            }
        }
        Ok(MatrixForm { dim, entries, grade })
    }

    pub fn from_fn<F>(dim: usize, mut f: F) -> Result<Self, Error>
    where
        F: FnMut(usize, usize) -> FormExpr,
    {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        MatrixForm::new(dim, entries)
    }

    pub fn zero(dim: usize) -> Self {
        MatrixForm { dim, entries: vec![FormExpr::zero(); dim * dim], grade: None }
    }

    pub fn identity(dim: usize, mode: RingMode) -> Self {
        let one = FormExpr::scalar(Coefficient::one().with_mode(mode));
        let entries = (0..dim * dim)
            .map(|k| if k / dim == k % dim { one.clone() } else { FormExpr::zero() })
            .collect();
        MatrixForm { dim, entries, grade: Some(0) }
    }

    /// Matrix whose `(i, j)` entry is the generator `make(i + 1, j + 1)`.
    pub fn generic<F>(dim: usize, mut make: F) -> Self
    where
        F: FnMut(u32, u32) -> Gen,
    {
        MatrixForm::from_fn(dim, |i, j| FormExpr::gen(make(i as u32 + 1, j as u32 + 1)))
            .expect("generators of one family share a grade")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Common grade of the entries; `None` for the zero matrix.
    pub fn grade(&self) -> Option<u32> {
        self.grade
    }

    pub fn get(&self, i: usize, j: usize) -> &FormExpr {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[FormExpr] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FormExpr::is_zero)
    }

    /// Total number of terms across all entries.
    pub fn term_count(&self) -> usize {
        self.entries.iter().map(FormExpr::len).sum()
    }

    fn check_dim(&self, other: &MatrixForm) -> Result<(), Error> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    fn map<F: FnMut(&FormExpr) -> FormExpr>(&self, f: F) -> MatrixForm {
        MatrixForm::new(self.dim, self.entries.iter().map(f).collect())
            .expect("entrywise maps preserve homogeneity")
    }

    pub fn mul(&self, other: &MatrixForm) -> Result<MatrixForm, Error> {
        self.check_dim(other)?;
        let n = self.dim;
        MatrixForm::from_fn(n, |i, j| {
            (0..n).fold(FormExpr::zero(), |acc, k| acc + self.get(i, k).mul(other.get(k, j)))
        })
    }

    pub fn add(&self, other: &MatrixForm) -> Result<MatrixForm, Error> {
        self.check_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        MatrixForm::new(self.dim, entries)
    }

    pub fn sub(&self, other: &MatrixForm) -> Result<MatrixForm, Error> {
        self.check_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        MatrixForm::new(self.dim, entries)
    }

    pub fn scale(&self, c: &Coefficient) -> MatrixForm {
        self.map(|e| e.scale(c))
    }

    /// Right multiplication of every entry by a form.
    pub fn mul_right(&self, e: &FormExpr) -> Result<MatrixForm, Error> {
        MatrixForm::new(self.dim, self.entries.iter().map(|x| x.mul(e)).collect())
    }

    /// Entrywise differential.
    pub fn d(&self, nil: Nilpotency) -> MatrixForm {
        self.map(|e| e.d(nil))
    }

    pub fn with_ring(&self, mode: RingMode) -> MatrixForm {
        self.map(|e| e.with_ring(mode))
    }

    pub fn with_nilpotency(&self, nil: Nilpotency) -> MatrixForm {
        self.map(|e| e.with_nilpotency(nil))
    }

    /// Plain sum of the diagonal, no cyclic identification.
    pub fn trace(&self) -> FormExpr {
        (0..self.dim).fold(FormExpr::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Trace in the q-cyclic quotient; see [`cyclic_canonical`].
    pub fn cyclic_trace(&self, mode: RingMode) -> Result<FormExpr, Error> {
        cyclic_canonical(&self.trace(), mode)
    }
}

impl fmt::Display for MatrixForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            for j in 0..self.dim {
                writeln!(f, "[{},{}] {}", i + 1, j + 1, self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// Canonical representative of a trace in the q-cyclic quotient.
///
/// Moving the leading letter (grade `a`) of a word of total grade `g` to the
/// rear multiplies by `q^{a(g-a)}`. Each word is replaced by its
/// lexicographically least rotation with the accumulated factor. If a word
/// returns to itself after `p` rotations with phase `q^e`, its class is
/// annihilated by `1 - q^e`, so the coefficient is reduced modulo that
/// relation as well (to zero when `q` is primitive).
pub fn cyclic_canonical(e: &FormExpr, mode: RingMode) -> Result<FormExpr, Error> {
    let n = mode.order().ok_or(Error::CyclicTraceInFreeMode)? as i64;
    let mut out = FormExpr::zero();
    for (w, c) in e.terms() {
        if w.is_empty() {
            out = out + FormExpr::scalar(c.clone().with_mode(mode));
            continue;
        }
        let total: i64 = w.iter().map(|g| g.grade() as i64).sum();
        let mut best: (Word, i64) = (w.clone(), 0);
        let mut phase = 0i64;
        let mut period_phase = None;
        let mut rot = w.clone();
        for _ in 1..=w.len() {
            let a = rot[0].grade() as i64;
            phase += a * (total - a);
            rot.rotate_left(1);
            if rot == *w && period_phase.is_none() {
                period_phase = Some(phase);
            }
            if rot < best.0 {
                best = (rot.clone(), phase);
            }
        }
        let mut coeff = c.mul_monomial(&crate::coeff::Monomial::q_pow(best.1)).with_mode(mode);
        let period_phase = period_phase.expect("a full rotation restores the word");
        if !mode.q_power_is_one(period_phase) {
            match mode {
                RingMode::PrimitiveRoot(_) => continue,
                _ => {
                    let h = gcd(period_phase.rem_euclid(n), n);
                    coeff = coeff.reduce_q_period(h as u32);
                }
            }
        }
        out = out + FormExpr::term(coeff, best.0);
    }
    Ok(out)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::gen::Base;

    fn omega(n: usize) -> MatrixForm {
        MatrixForm::generic(n, Gen::omega)
    }

    #[test]
    fn identity_is_neutral() {
        let a = omega(2);
        let id = MatrixForm::identity(2, RingMode::Free);
        assert_eq!(id.mul(&a).unwrap(), a);
        assert_eq!(a.mul(&id).unwrap(), a);
    }

    #[test]
    fn mixed_grades_rejected() {
        let entries = vec![
            FormExpr::gen(Gen::omega(1, 1)),
            FormExpr::gen(Gen::new(Base::Potential(1))),
            FormExpr::zero(),
            FormExpr::zero(),
        ];
        assert_eq!(MatrixForm::new(2, entries), Err(Error::GradeMixing(1, 0)));
        assert!(omega(2).mul(&omega(3)).is_err());
    }

    #[test]
    fn matrix_leibniz() {
        let a = omega(2);
        let b = MatrixForm::generic(2, |i, j| Gen::new(Base::Flat { grade: 2, row: i, col: j }));
        let b = b.add(&omega(2).d(Nilpotency::Unbounded)).unwrap();
        let nil = Nilpotency::Unbounded;
        let lhs = a.mul(&b).unwrap().d(nil);
        let q = Coefficient::q_pow(1, RingMode::Free);
        let rhs = a.d(nil).mul(&b).unwrap().add(&a.mul(&b.d(nil)).unwrap().scale(&q)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn one_by_one_trace() {
        let m = MatrixForm::new(1, vec![FormExpr::gen(Gen::omega(1, 1))]).unwrap();
        assert_eq!(m.trace(), FormExpr::gen(Gen::omega(1, 1)));
    }

    #[test]
    fn cyclic_trace_needs_root_of_unity() {
        assert_eq!(omega(2).cyclic_trace(RingMode::Free), Err(Error::CyclicTraceInFreeMode));
    }

    #[test]
    fn rotation_phase() {
        // Tr(w11 dw11) ~ q^{1·2} Tr(dw11 w11); the orbit phase q^4 is trivial at q^4 = 1
        let mode = RingMode::root_of_unity(4).unwrap();
        let a = FormExpr::gen(Gen::omega(1, 1));
        let da = a.d(Nilpotency::Unbounded);
        let lhs = cyclic_canonical(&a.mul(&da), mode).unwrap();
        let rhs = cyclic_canonical(&da.mul(&a), mode).unwrap().scale(&Coefficient::q_pow(2, mode));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inconsistent_orbit_vanishes_at_primitive_root() {
        // w11^3: full-cycle phase q^{3·2} = q^6; at a primitive 4th root this is q^2 != 1
        let a = FormExpr::gen(Gen::omega(1, 1));
        let e = a.pow(3);
        assert!(cyclic_canonical(&e, RingMode::primitive_root(4).unwrap()).unwrap().is_zero());
        // in q^4 = 1 the class survives with q-exponents reduced mod 2
        let r = cyclic_canonical(&e.scale(&Coefficient::q_pow(3, RingMode::Free)), RingMode::root_of_unity(4).unwrap()).unwrap();
        assert_eq!(r, e.scale(&Coefficient::q_pow(1, RingMode::Free)));
    }
}
