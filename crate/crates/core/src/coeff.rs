//! The scalar ring: Laurent polynomials in `q` and in the pair symbols
//! `q[i,j]`, with exact rational coefficients and an optional root-of-unity
//! quotient on the `q` part.
//!
//! Pair symbols are stored only for `i < j`; `q[j,i]` is `q[i,j]^-1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Order of a root of unity; always at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Order(u32);

impl Order {
    pub fn new(n: u32) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        Ok(Order(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for Order {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self, Error> {
        Order::new(n)
    }
}

impl From<Order> for u32 {
    fn from(o: Order) -> u32 {
        o.0
    }
}

/// Relation imposed on the deformation parameter `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingMode {
    /// No relation.
    #[default]
    Free,
    /// `q^N = 1`.
    RootOfUnity(Order),
    /// `q` is a primitive `N`-th root of unity: reduction modulo the
    /// cyclotomic polynomial `Φ_N`, which divides both `[N]_q` and `q^N - 1`.
    PrimitiveRoot(Order),
}

impl RingMode {
    pub fn root_of_unity(n: u32) -> Result<Self, Error> {
        Ok(RingMode::RootOfUnity(Order::new(n)?))
    }

    pub fn primitive_root(n: u32) -> Result<Self, Error> {
        Ok(RingMode::PrimitiveRoot(Order::new(n)?))
    }

    pub fn is_free(self) -> bool {
        matches!(self, RingMode::Free)
    }

    /// The `N` of a quotient mode.
    pub fn order(self) -> Option<u32> {
        match self {
            RingMode::Free => None,
            RingMode::RootOfUnity(n) | RingMode::PrimitiveRoot(n) => Some(n.get()),
        }
    }

    /// Whether `q^e` reduces to 1 in this mode.
    pub fn q_power_is_one(self, e: i64) -> bool {
        match self.order() {
            None => e == 0,
            Some(n) => e.rem_euclid(n as i64) == 0,
        }
    }

    fn unify(self, other: RingMode) -> RingMode {
        match (self, other) {
            (a, b) if a == b => a,
            (RingMode::Free, b) => b,
            (a, RingMode::Free) => a,
            (a, b) => panic!("cannot combine coefficients from ring modes {a} and {b}"),
        }
    }
}

impl fmt::Display for RingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingMode::Free => write!(f, "free"),
            RingMode::RootOfUnity(n) => write!(f, "root:{}", n.get()),
            RingMode::PrimitiveRoot(n) => write!(f, "prim:{}", n.get()),
        }
    }
}

impl std::str::FromStr for RingMode {
    type Err = Error;

    /// Accepts `free`, `root:N` and `prim:N`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidRingMode(s.to_string());
        if s == "free" {
            return Ok(RingMode::Free);
        }
        let (kind, n) = s.split_once(':').ok_or_else(bad)?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "root" => RingMode::root_of_unity(n),
            "prim" => RingMode::primitive_root(n),
            _ => Err(bad()),
        }
    }
}

/// A Laurent monomial `q^a · Π q[i,j]^e`. Pair exponents are kept sorted by
/// `(i, j)` with `i < j` and never zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    q: i64,
    pairs: Vec<((u32, u32), i64)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn q_pow(e: i64) -> Self {
        Monomial { q: e, pairs: Vec::new() }
    }

    /// `q[i,j]^e`, canonicalised so that the stored pair has `i < j`.
    /// Diagonal pairs are not symbols of the ring.
    pub fn pair(i: u32, j: u32, e: i64) -> Result<Self, Error> {
        if i == j {
            return Err(Error::DiagonalPairSymbol(i));
        }
        let (key, e) = if i < j { ((i, j), e) } else { ((j, i), -e) };
        let pairs = if e == 0 { Vec::new() } else { vec![(key, e)] };
        Ok(Monomial { q: 0, pairs })
    }

    pub fn q_exponent(&self) -> i64 {
        self.q
    }

    pub fn pairs(&self) -> &[((u32, u32), i64)] {
        &self.pairs
    }

    pub fn is_one(&self) -> bool {
        self.q == 0 && self.pairs.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut pairs = Vec::with_capacity(self.pairs.len() + other.pairs.len());
        let (mut a, mut b) = (self.pairs.iter().peekable(), other.pairs.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ka, ea)), Some(&&(kb, eb))) => {
                    if ka < kb {
                        pairs.push((ka, ea));
                        a.next();
                    } else if kb < ka {
                        pairs.push((kb, eb));
                        b.next();
                    } else {
                        if ea + eb != 0 {
                            pairs.push((ka, ea + eb));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&p), None) => {
                    pairs.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    pairs.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial { q: self.q + other.q, pairs }
    }

    pub fn inverse(&self) -> Monomial {
        Monomial {
            q: -self.q,
            pairs: self.pairs.iter().map(|&(k, e)| (k, -e)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            q: self.q * e,
            pairs: self.pairs.iter().map(|&(k, x)| (k, x * e)).collect(),
        }
    }

    fn with_q(&self, q: i64) -> Monomial {
        Monomial { q, pairs: self.pairs.clone() }
    }

    fn without_q(&self) -> Monomial {
        self.with_q(0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut factors = Vec::new();
        match self.q {
            0 => {}
            1 => factors.push("q".to_string()),
            e => factors.push(format!("q^{e}")),
        }
        for &((i, j), e) in &self.pairs {
            if e == 1 {
                factors.push(format!("q[{i},{j}]"));
            } else {
                factors.push(format!("q[{i},{j}]^{e}"));
            }
        }
        write!(f, "{}", factors.join("*"))
    }
}

/// Exact element of the scalar ring, always in canonical form for its mode.
#[derive(Clone, Debug, Default)]
pub struct Coefficient {
    terms: BTreeMap<Monomial, BigRational>,
    mode: RingMode,
}

impl PartialEq for Coefficient {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Coefficient {}

impl std::hash::Hash for Coefficient {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn one() -> Self {
        Coefficient::from_monomial(Monomial::one(), BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Coefficient::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Coefficient::from_monomial(Monomial::one(), r)
    }

    pub fn from_monomial(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Coefficient { terms, mode: RingMode::Free }
    }

    /// `q^e`, reduced in `mode`.
    pub fn q_pow(e: i64, mode: RingMode) -> Self {
        Coefficient::from_monomial(Monomial::q_pow(e), BigRational::one()).with_mode(mode)
    }

    /// The pair symbol `q[i,j]`; `q[j,i]` comes back as `q[i,j]^-1`.
    pub fn pair(i: u32, j: u32) -> Result<Self, Error> {
        Ok(Coefficient::from_monomial(Monomial::pair(i, j, 1)?, BigRational::one()))
    }

    pub fn mode(&self) -> RingMode {
        self.mode
    }

    /// Re-express in another mode. Moving to a quotient reduces; moving back
    /// to `Free` keeps the canonical representative.
    pub fn with_mode(mut self, mode: RingMode) -> Self {
        self.mode = mode;
        self.reduce();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Single term, if this is one.
    pub fn as_monomial(&self) -> Option<(&Monomial, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Rational constant, if there is no symbol dependence.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.as_monomial().filter(|(m, _)| m.is_one()).map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Coefficient {
        if r.is_zero() {
            return Coefficient { terms: BTreeMap::new(), mode: self.mode };
        }
        Coefficient {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
            mode: self.mode,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Coefficient {
        let mut out = Coefficient {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
            mode: self.mode,
        };
        out.reduce();
        out
    }

    /// Inverse of a single-term coefficient. Sums are not inverted.
    pub fn inverse(&self) -> Result<Coefficient, Error> {
        let (m, c) = self.as_monomial().ok_or_else(|| Error::NotInvertible(self.to_string()))?;
        Ok(Coefficient::from_monomial(m.inverse(), c.recip()).with_mode(self.mode))
    }

    /// Non-negative integer power.
    pub fn pow(&self, e: u32) -> Coefficient {
        let mut acc = Coefficient::one().with_mode(self.mode);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute a rational value for `q`; pair symbols are kept.
    pub fn eval_q(&self, value: &BigRational) -> Coefficient {
        let mut out = Coefficient::zero();
        for (m, c) in &self.terms {
            let e = m.q_exponent();
            let base = if e >= 0 { value.clone() } else { value.recip() };
            let factor = num_traits::pow(base, e.unsigned_abs() as usize);
            out += &Coefficient::from_monomial(m.without_q(), c * factor);
        }
        out
    }

    /// Reduce the `q`-exponents modulo `h`, i.e. impose `q^h = 1` on top of
    /// the current mode. Used for trace classes whose cyclic orbit carries a
    /// non-trivial phase.
    pub fn reduce_q_period(&self, h: u32) -> Coefficient {
        let mut out = Coefficient { terms: BTreeMap::new(), mode: self.mode };
        for (m, c) in &self.terms {
            out.add_term(m.with_q(m.q.rem_euclid(h as i64)), c.clone());
        }
        out.reduce();
        out
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn reduce(&mut self) {
        match self.mode {
            RingMode::Free => {}
            RingMode::RootOfUnity(n) => {
                let n = n.get() as i64;
                if self.terms.keys().all(|m| (0..n).contains(&m.q)) {
                    return;
                }
                let old = std::mem::take(&mut self.terms);
                for (m, c) in old {
                    let q = m.q.rem_euclid(n);
                    self.add_term(m.with_q(q), c);
                }
            }
            RingMode::PrimitiveRoot(n) => {
                let n = n.get();
                let phi = cyclotomic(n);
                let deg = (phi.len() - 1) as i64;
                if self.terms.keys().all(|m| (0..deg).contains(&m.q)) {
                    return;
                }
                // Group by pair part, reduce each univariate q-polynomial.
                let mut groups: BTreeMap<Monomial, Vec<BigRational>> = BTreeMap::new();
                for (m, c) in std::mem::take(&mut self.terms) {
                    let e = m.q.rem_euclid(n as i64) as usize;
                    let dense = groups
                        .entry(m.without_q())
                        .or_insert_with(|| vec![BigRational::zero(); n as usize]);
                    dense[e] += c;
                }
                for (rest, mut dense) in groups {
                    rem_monic(&mut dense, &phi);
                    for (e, c) in dense.into_iter().enumerate() {
                        self.add_term(rest.with_q(e as i64), c);
                    }
                }
            }
        }
    }
}

/// Remainder of `dense` (coefficients by ascending degree) modulo a monic
/// integer polynomial; the result occupies degrees below `deg(modulus)`.
fn rem_monic(dense: &mut Vec<BigRational>, modulus: &[i64]) {
    let deg = modulus.len() - 1;
    for top in (deg..dense.len()).rev() {
        let lead = std::mem::replace(&mut dense[top], BigRational::zero());
        if lead.is_zero() {
            continue;
        }
        for (i, &m) in modulus[..deg].iter().enumerate() {
            if m != 0 {
                dense[top - deg + i] -= &lead * BigRational::from_integer(BigInt::from(m));
            }
        }
    }
    dense.truncate(deg);
}

/// Integer coefficients of the cyclotomic polynomial `Φ_n`, ascending degree.
pub fn cyclotomic(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    // q^n - 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = exact_div_monic(&num, &cyclotomic(d));
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for top in (dn..num.len()).rev() {
        let lead = rem[top];
        quot[top - dn] = lead;
        for (i, &c) in den.iter().enumerate() {
            rem[top - dn + i] -= lead * c;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write_term(f, m, &c.abs())?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, m: &Monomial, c: &BigRational) -> fmt::Result {
    if m.is_one() {
        write!(f, "{c}")
    } else if c.is_one() {
        write!(f, "{m}")
    } else {
        write!(f, "{c}*{m}")
    }
}

impl Add<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        let mode = self.mode.unify(rhs.mode);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
        if mode != self.mode {
            self.mode = mode;
        }
        self.reduce();
    }
}

impl Sub<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&Coefficient> for Coefficient {
    fn sub_assign(&mut self, rhs: &Coefficient) {
        *self += &-rhs;
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            mode: self.mode,
        }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

impl Mul<&Coefficient> for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mode = self.mode.unify(rhs.mode);
        let mut out = Coefficient { terms: BTreeMap::new(), mode };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out.reduce();
        out
    }
}

impl MulAssign<&Coefficient> for Coefficient {
    fn mul_assign(&mut self, rhs: &Coefficient) {
        *self = &*self * rhs;
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $f(self, rhs: Coefficient) -> Coefficient {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $f(self, rhs: &Coefficient) -> Coefficient {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::from_integer(n)
    }
}

/// `[n]_q = 1 + q + ... + q^{n-1}`.
pub fn qint(n: u32, mode: RingMode) -> Coefficient {
    let mut out = Coefficient::zero();
    for e in 0..n {
        out.add_term(Monomial::q_pow(e as i64), BigRational::one());
    }
    out.with_mode(mode)
}

/// `[n]_q! = [n]_q [n-1]_q ... [1]_q`, with `[0]_q! = 1`.
pub fn qfact(n: u32, mode: RingMode) -> Coefficient {
    (1..=n).fold(Coefficient::one().with_mode(mode), |acc, i| acc * qint(i, mode))
}

/// Gaussian binomial. Built in the free ring by the q-Pascal rule
/// `[k, r] = [k-1, r-1] + q^r [k-1, r]` and only then reduced, so no
/// division happens even where the factorials vanish.
pub fn qbinom(k: u32, r: i64, mode: RingMode) -> Coefficient {
    if r < 0 || r > k as i64 {
        return Coefficient::zero().with_mode(mode);
    }
    let r = r as usize;
    // row[j] = [n, j]_q for the current n
    let mut row = vec![Coefficient::one()];
    for n in 1..=k as usize {
        let mut next = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut c = if j >= 1 { row[j - 1].clone() } else { Coefficient::zero() };
            if j < n {
                c += &row[j].mul_monomial(&Monomial::q_pow(j as i64));
            }
            next.push(c);
        }
        row = next;
    }
    row.swap_remove(r).with_mode(mode)
}

/// Ordinary binomial coefficient, used as the classical reference.
pub fn binomial(k: u32, r: u32) -> BigInt {
    if r > k {
        return BigInt::zero();
    }
    (0..r).fold(BigInt::one(), |acc, i| acc * BigInt::from(k - i) / BigInt::from(i + 1))
}

/// Integer part of a rational, if it is one and fits.
pub fn rational_to_i64(r: &BigRational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Coefficient {
        Coefficient::q_pow(1, RingMode::Free)
    }

    fn prim(n: u32) -> RingMode {
        RingMode::primitive_root(n).unwrap()
    }

    fn poly(coeffs: &[i64]) -> Coefficient {
        let mut out = Coefficient::zero();
        for (e, &c) in coeffs.iter().enumerate() {
            out += &Coefficient::q_pow(e as i64, RingMode::Free).scale(&BigRational::from_integer(c.into()));
        }
        out
    }

    #[test]
    fn qint_examples() {
        assert_eq!(qint(3, RingMode::Free), poly(&[1, 1, 1]));
        assert_eq!(qint(3, RingMode::Free).to_string(), "1 + q + q^2");
        assert!(qint(1, RingMode::Free).is_one());
        assert!(qint(0, RingMode::Free).is_zero());
        assert!(qint(4, prim(2)).is_zero());
    }

    #[test]
    fn qfact_examples() {
        assert!(qfact(0, RingMode::Free).is_one());
        assert_eq!(qfact(3, RingMode::Free), poly(&[1, 2, 2, 1]));
        assert!(qfact(2, prim(2)).is_zero());
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(2, 1, RingMode::Free), poly(&[1, 1]));
        for k in 0..6 {
            assert!(qbinom(k, 0, RingMode::Free).is_one());
        }
        assert!(qbinom(3, -1, RingMode::Free).is_zero());
        assert!(qbinom(3, 4, RingMode::Free).is_zero());
        assert_eq!(qbinom(4, 2, RingMode::Free), poly(&[1, 1, 2, 1, 1]));
        // Φ_4 = 1 + q^2 divides (1 + q^2)(1 + q + q^2)
        assert!(qbinom(4, 2, prim(4)).is_zero());
    }

    #[test]
    fn qbinom_matches_factorial_quotient_in_free_mode() {
        // [k]! = [r]! [k-r]! C(k,r) checked without dividing
        for k in 0..=8 {
            for r in 0..=k {
                let lhs = qfact(k, RingMode::Free);
                let rhs = qfact(r, RingMode::Free)
                    * qfact(k - r, RingMode::Free)
                    * qbinom(k, r as i64, RingMode::Free);
                assert_eq!(lhs, rhs, "k={k} r={r}");
            }
        }
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(5), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn root_of_unity_wraps_exponents() {
        let m = RingMode::root_of_unity(3).unwrap();
        assert!(Coefficient::q_pow(3, m).is_one());
        assert_eq!(Coefficient::q_pow(-1, m), Coefficient::q_pow(2, RingMode::Free));
        // q^3 - 1 vanishes but [3]_q does not
        assert!(!qint(3, m).is_zero());
    }

    #[test]
    fn pair_symbols_are_canonical() {
        let a = Coefficient::pair(2, 1).unwrap();
        assert_eq!(a.to_string(), "q[1,2]^-1");
        assert!((a * Coefficient::pair(1, 2).unwrap()).is_one());
        assert!(Coefficient::pair(3, 3).is_err());
        let b = Coefficient::pair(3, 1).unwrap();
        assert_eq!(b.to_string(), "q[1,3]^-1");
    }

    #[test]
    fn display_normal_form() {
        let c = poly(&[1, 2, 1]);
        assert_eq!(c.to_string(), "1 + 2*q + q^2");
        let d = -(q() * Coefficient::from_rational(BigRational::new(1.into(), 2.into())));
        assert_eq!(d.to_string(), "-1/2*q");
        assert_eq!(Coefficient::zero().to_string(), "0");
    }

    #[test]
    fn eval_at_one_gives_binomials() {
        let one = BigRational::one();
        for k in 0..=8u32 {
            for r in 0..=k {
                let v = qbinom(k, r as i64, RingMode::Free).eval_q(&one);
                assert_eq!(v.as_rational().unwrap(), BigRational::from_integer(binomial(k, r)));
            }
        }
    }

    #[test]
    fn ring_mode_parsing() {
        assert_eq!("free".parse::<RingMode>().unwrap(), RingMode::Free);
        assert_eq!("prim:3".parse::<RingMode>().unwrap(), prim(3));
        assert!("prim:1".parse::<RingMode>().is_err());
        assert!("root".parse::<RingMode>().is_err());
    }

    #[test]
    fn inverse_of_monomials() {
        let c = Coefficient::pair(1, 2).unwrap() * Coefficient::q_pow(2, RingMode::Free).scale(&BigRational::from_integer(3.into()));
        let inv = c.inverse().unwrap();
        assert!((c * inv).is_one());
        assert!(poly(&[1, 1]).inverse().is_err());
    }
}
