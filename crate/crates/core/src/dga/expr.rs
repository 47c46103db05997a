use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::gen::{Base, Gen};
use crate::coeff::{Coefficient, Monomial, RingMode};
use crate::error::Error;

pub type Word = Vec<Gen>;

/// Nilpotency of `d` on generators: with `Order(n)`, any generator that
/// would carry `n` or more differentials is zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Nilpotency {
    #[default]
    Unbounded,
    Order(u32),
}

impl Nilpotency {
    pub fn allows(self, order: u32) -> bool {
        match self {
            Nilpotency::Unbounded => true,
            Nilpotency::Order(n) => order < n,
        }
    }
}

impl fmt::Display for Nilpotency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nilpotency::Unbounded => write!(f, "unbounded"),
            Nilpotency::Order(n) => write!(f, "{n}"),
        }
    }
}

/// A finite sum of coefficient × word of generators.
///
/// Values produced by the arithmetic here are always normalised; only
/// [`FormExpr::from_raw`] can hold a non-canonical sum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormExpr {
    terms: BTreeMap<Word, Coefficient>,
}

impl FormExpr {
    pub fn zero() -> Self {
        FormExpr::default()
    }

    pub fn one() -> Self {
        FormExpr::scalar(Coefficient::one())
    }

    pub fn scalar(c: Coefficient) -> Self {
        FormExpr::term(c, Vec::new())
    }

    pub fn gen(g: Gen) -> Self {
        FormExpr::term(Coefficient::one(), vec![g])
    }

    /// A single term, normalised.
    pub fn term(c: Coefficient, word: Word) -> Self {
        FormExpr::from_raw(vec![(c, word)]).normalize()
    }

    /// Product of generators in the given order.
    pub fn word(gens: impl IntoIterator<Item = Gen>) -> Self {
        FormExpr::term(Coefficient::one(), gens.into_iter().collect())
    }

    /// Collects terms without applying any relation besides merging
    /// identical words.
    pub fn from_raw(terms: impl IntoIterator<Item = (Coefficient, Word)>) -> Self {
        let mut out = FormExpr::zero();
        for (c, w) in terms {
            out.add_term(w, &c);
        }
        out
    }

    fn add_term(&mut self, w: Word, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, w: &[Gen]) -> Coefficient {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Common grade of all terms; `None` for zero.
    pub fn grade(&self) -> Result<Option<u32>, Error> {
        let mut grade = None;
        for w in self.terms.keys() {
            let g = word_grade(w);
            match grade {
                None => grade = Some(g),
                Some(h) if h != g => return Err(Error::Inhomogeneous(h, g)),
                _ => {}
            }
        }
        Ok(grade)
    }

    /// Canonical form: inverse pairs cancelled, runs of coordinate
    /// differentials sorted by index with exchange factors absorbed, like
    /// words merged, zero terms dropped.
    pub fn normalize(&self) -> FormExpr {
        let mut out = FormExpr::zero();
        for (w, c) in &self.terms {
            let (factor, w) = normalize_word(w);
            out.add_term(w, &c.mul_monomial(&factor));
        }
        out
    }

    pub fn scale(&self, c: &Coefficient) -> FormExpr {
        let mut out = FormExpr::zero();
        for (w, k) in &self.terms {
            out.add_term(w.clone(), &(k * c));
        }
        out
    }

    pub fn mul(&self, other: &FormExpr) -> FormExpr {
        let mut raw = FormExpr::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = Vec::with_capacity(wa.len() + wb.len());
                w.extend_from_slice(wa);
                w.extend_from_slice(wb);
                raw.add_term(w, &(ca * cb));
            }
        }
        raw.normalize()
    }

    pub fn pow(&self, e: u32) -> FormExpr {
        (0..e).fold(FormExpr::one(), |acc, _| acc.mul(self))
    }

    /// The differential: raises grade by one, obeys
    /// `d(ab) = da·b + q^{|a|} a·db` letter by letter, and kills generators
    /// beyond the nilpotency order.
    pub fn d(&self, nil: Nilpotency) -> FormExpr {
        let mut raw = FormExpr::zero();
        for (w, c) in &self.terms {
            let mut prefix_grade = 0i64;
            for (pos, letter) in w.iter().enumerate() {
                let sign = Coefficient::q_pow(prefix_grade, c.mode());
                for (dc, dw) in d_letter(letter, nil) {
                    let mut nw = Vec::with_capacity(w.len() + dw.len());
                    nw.extend_from_slice(&w[..pos]);
                    nw.extend(dw);
                    nw.extend_from_slice(&w[pos + 1..]);
                    raw.add_term(nw, &(&(c * &sign) * &dc));
                }
                prefix_grade += letter.grade() as i64;
            }
        }
        raw.normalize()
    }

    pub fn d_pow(&self, r: u32, nil: Nilpotency) -> FormExpr {
        (0..r).fold(self.clone(), |acc, _| acc.d(nil))
    }

    /// Re-impose a ring relation on every coefficient.
    pub fn with_ring(&self, mode: RingMode) -> FormExpr {
        let mut out = FormExpr::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &c.clone().with_mode(mode));
        }
        out
    }

    /// Re-impose `d^n = 0` on generators.
    pub fn with_nilpotency(&self, nil: Nilpotency) -> FormExpr {
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.iter().all(|g| nil.allows(g.depth())))
            .map(|(w, c)| (c.clone(), w.clone()));
        FormExpr::from_raw(terms)
    }

    /// Sort the letters of every word; valid only for commuting grade-0
    /// symbols such as abelian potentials.
    pub fn commutative_normal(&self) -> FormExpr {
        let mut out = FormExpr::zero();
        for (w, c) in &self.terms {
            debug_assert!(w.iter().all(|g| g.grade() == 0));
            let mut w = w.clone();
            w.sort();
            out.add_term(w, c);
        }
        out
    }

    /// Apply `f` to every word, keeping coefficients.
    pub fn map_words<F>(&self, mut f: F) -> FormExpr
    where
        F: FnMut(&Word) -> FormExpr,
    {
        let mut out = FormExpr::zero();
        for (w, c) in &self.terms {
            out = out + f(w).scale(c);
        }
        out
    }
}

pub fn word_grade(w: &[Gen]) -> u32 {
    w.iter().map(Gen::grade).sum()
}

fn d_letter(g: &Gen, nil: Nilpotency) -> Vec<(Coefficient, Word)> {
    match &g.base {
        Base::Flat { .. } => Vec::new(),
        Base::Frame { index, dim } => (1..=*dim)
            .map(|j| {
                let w = vec![Gen::omega(*index, j), Gen::new(Base::Frame { index: j, dim: *dim })];
                (Coefficient::one(), w)
            })
            .collect(),
        Base::GroupInv => {
            if !nil.allows(1) {
                return Vec::new();
            }
            let inv = Gen::new(Base::GroupInv);
            let w = vec![inv.clone(), Gen::with_order(Base::Group, 1), inv];
            vec![(Coefficient::from_integer(-1), w)]
        }
        _ => {
            if nil.allows(g.depth() + 1) {
                vec![(Coefficient::one(), vec![Gen::with_order(g.base.clone(), g.order + 1)])]
            } else {
                Vec::new()
            }
        }
    }
}

fn normalize_word(w: &[Gen]) -> (Monomial, Word) {
    let mut out: Word = Vec::with_capacity(w.len());
    for g in w {
        if out.last().is_some_and(|prev| prev.cancels_with(g)) {
            out.pop();
        } else {
            out.push(g.clone());
        }
    }
    // insertion sort inside each maximal run of dx letters:
    // dx[a] dx[b] = q[b,a] dx[b] dx[a]
    let mut factor = Monomial::one();
    let mut start = 0;
    while start < out.len() {
        if !out[start].is_coordinate_differential() {
            start += 1;
            continue;
        }
        let mut end = start;
        while end < out.len() && out[end].is_coordinate_differential() {
            end += 1;
        }
        for i in start + 1..end {
            let mut j = i;
            while j > start {
                let (Base::Coord(a), Base::Coord(b)) = (&out[j - 1].base, &out[j].base) else {
                    unreachable!()
                };
                if a <= b {
                    break;
                }
                factor = factor.mul(&Monomial::pair(*b, *a, 1).expect("distinct indices"));
                out.swap(j - 1, j);
                j -= 1;
            }
        }
        start = end;
    }
    (factor, out)
}

impl Add for FormExpr {
    type Output = FormExpr;
    fn add(mut self, rhs: FormExpr) -> FormExpr {
        for (w, c) in rhs.terms {
            self.add_term(w, &c);
        }
        self
    }
}

impl Add<&FormExpr> for &FormExpr {
    type Output = FormExpr;
    fn add(self, rhs: &FormExpr) -> FormExpr {
        self.clone() + rhs.clone()
    }
}

impl Neg for &FormExpr {
    type Output = FormExpr;
    fn neg(self) -> FormExpr {
        FormExpr { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Neg for FormExpr {
    type Output = FormExpr;
    fn neg(self) -> FormExpr {
        -&self
    }
}

impl Sub for FormExpr {
    type Output = FormExpr;
    fn sub(self, rhs: FormExpr) -> FormExpr {
        self + (-rhs)
    }
}

impl Sub<&FormExpr> for &FormExpr {
    type Output = FormExpr;
    fn sub(self, rhs: &FormExpr) -> FormExpr {
        self.clone() + (-rhs)
    }
}

impl From<Gen> for FormExpr {
    fn from(g: Gen) -> Self {
        FormExpr::gen(g)
    }
}

impl From<Coefficient> for FormExpr {
    fn from(c: Coefficient) -> Self {
        FormExpr::scalar(c)
    }
}

fn word_string(w: &[Gen]) -> String {
    w.iter().map(Gen::to_string).collect::<Vec<_>>().join("*")
}

/// One printed summand: sign and unsigned body.
fn chunks(w: &[Gen], c: &Coefficient) -> Vec<(bool, String)> {
    if let Some((m, r)) = c.as_monomial() {
        let neg = r.is_negative();
        let r = r.abs();
        let mut parts = Vec::new();
        if !r.is_one() || (m.is_one() && w.is_empty()) {
            parts.push(rational_string(&r));
        }
        if !m.is_one() {
            parts.push(m.to_string());
        }
        if !w.is_empty() {
            parts.push(word_string(w));
        }
        return vec![(neg, parts.join("*"))];
    }
    if w.is_empty() {
        return c
            .terms()
            .flat_map(|(m, r)| chunks(&[], &Coefficient::from_monomial(m.clone(), r.clone())))
            .collect();
    }
    vec![(false, format!("({c})*{}", word_string(w)))]
}

fn rational_string(r: &BigRational) -> String {
    r.to_string()
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            for (neg, body) in chunks(w, c) {
                match (first, neg) {
                    (true, true) => write!(f, "-{body}")?,
                    (true, false) => write!(f, "{body}")?,
                    (false, true) => write!(f, " - {body}")?,
                    (false, false) => write!(f, " + {body}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(i: u32, j: u32) -> FormExpr {
        FormExpr::gen(Gen::omega(i, j))
    }

    fn g() -> FormExpr {
        FormExpr::gen(Gen::new(Base::Group))
    }

    fn ginv() -> FormExpr {
        FormExpr::gen(Gen::new(Base::GroupInv))
    }

    fn q(e: i64) -> Coefficient {
        Coefficient::q_pow(e, RingMode::Free)
    }

    fn pair(i: u32, j: u32) -> Coefficient {
        Coefficient::pair(i, j).unwrap()
    }

    #[test]
    fn exchange_rule_for_two_differentials() {
        let e = FormExpr::from_raw(vec![(Coefficient::one(), vec![Gen::dx(2), Gen::dx(1)])]).normalize();
        assert_eq!(e, FormExpr::term(pair(1, 2), vec![Gen::dx(1), Gen::dx(2)]));
    }

    #[test]
    fn exchange_rule_for_three_differentials() {
        // dx^{kij} = q_ik q_jk dx^{ijk}
        let (i, j, k) = (1, 2, 3);
        let e = FormExpr::word([Gen::dx(k), Gen::dx(i), Gen::dx(j)]);
        let expect = FormExpr::term(pair(i, k) * pair(j, k), vec![Gen::dx(i), Gen::dx(j), Gen::dx(k)]);
        assert_eq!(e, expect);
    }

    #[test]
    fn inverse_pairs_cancel() {
        assert_eq!(g().mul(&ginv()).mul(&w(1, 2)), w(1, 2));
        assert_eq!(w(1, 1).mul(&ginv()).mul(&g()).mul(&w(2, 2)), w(1, 1).mul(&w(2, 2)));
    }

    #[test]
    fn free_entries_keep_order() {
        let e = w(1, 2).mul(&w(2, 1));
        assert_eq!(e.terms().next().unwrap().0, &vec![Gen::omega(1, 2), Gen::omega(2, 1)]);
        assert_ne!(e, w(2, 1).mul(&w(1, 2)));
    }

    #[test]
    fn unit_and_distributivity() {
        let f = w(1, 2) + w(2, 2).scale(&q(2));
        let h = w(3, 1);
        assert_eq!(FormExpr::one().mul(&f), f);
        assert_eq!(f.mul(&FormExpr::one()), f);
        let g = w(1, 1).scale(&pair(1, 2));
        assert_eq!((&f + &g).mul(&h), f.mul(&h) + g.mul(&h));
    }

    #[test]
    fn d_on_dx_respects_nilpotency() {
        assert!(FormExpr::gen(Gen::dx(1)).d(Nilpotency::Order(2)).is_zero());
        assert!(!FormExpr::gen(Gen::dx(1)).d(Nilpotency::Order(3)).is_zero());
    }

    #[test]
    fn graded_leibniz_on_two_one_forms() {
        let (a, b) = (w(1, 2), w(2, 1));
        let nil = Nilpotency::Unbounded;
        let lhs = a.mul(&b).d(nil);
        let rhs = a.d(nil).mul(&b) + a.mul(&b.d(nil)).scale(&q(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_of_inverse() {
        let dg = FormExpr::gen(Gen::with_order(Base::Group, 1));
        let expect = -ginv().mul(&dg).mul(&ginv());
        assert_eq!(ginv().d(Nilpotency::Unbounded), expect);
        // d(g ginv) = d(1) = 0 computed letterwise
        let raw = FormExpr::from_raw(vec![(Coefficient::one(), vec![Gen::new(Base::Group), Gen::new(Base::GroupInv)])]);
        assert!(raw.d(Nilpotency::Unbounded).is_zero());
    }

    #[test]
    fn grade_checks() {
        assert_eq!(w(1, 2).mul(&w(2, 1)).grade().unwrap(), Some(2));
        assert_eq!(FormExpr::zero().grade().unwrap(), None);
        assert_eq!((w(1, 1) + w(1, 1).mul(&w(1, 1))).grade(), Err(Error::Inhomogeneous(1, 2)));
    }

    #[test]
    fn printing() {
        let e = w(1, 2).d(Nilpotency::Unbounded) + w(1, 2).mul(&w(2, 1)).scale(&q(1));
        assert_eq!(e.to_string(), "q*w[1,2]*w[2,1] + d(w[1,2])");
        let s = FormExpr::scalar(q(0) + q(1));
        assert_eq!(s.to_string(), "1 + q");
        let t = w(1, 1).scale(&(q(0) - q(2)));
        assert_eq!(t.to_string(), "(1 - q^2)*w[1,1]");
        assert_eq!((-w(1, 1)).to_string(), "-w[1,1]");
    }
}
