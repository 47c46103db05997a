//! Seeded random inputs for property checks and the CLI self-test.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Coefficient, Monomial, RingMode};
use crate::dga::{word_grade, Base, FormExpr, Gen};
use crate::error::Error;
use crate::symmetrize::{ComponentTensor, QMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which generators [`expr`] and [`product`] may draw.
#[derive(Clone, Debug)]
pub struct ExprConfig {
    /// Index range `1..=dim` for generator indices.
    pub dim: u32,
    pub max_terms: usize,
    pub max_word: usize,
    /// Highest number of differentials stacked on a drawn generator.
    pub max_order: u32,
    /// Draw `dx[i]` letters and their higher differentials.
    pub coordinate_differentials: bool,
    pub group: bool,
    pub flat: bool,
}

impl Default for ExprConfig {
    fn default() -> Self {
        ExprConfig {
            dim: 3,
            max_terms: 3,
            max_word: 3,
            max_order: 1,
            coordinate_differentials: true,
            group: true,
            flat: true,
        }
    }
}

fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num = loop {
        let n: i64 = rng.random_range(-4..=4);
        if n != 0 {
            break n;
        }
    };
    let den: i64 = *[1, 1, 1, 2, 3].choose(rng).expect("non-empty");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Non-zero rational times `q^a` times at most one pair symbol.
pub fn monomial_coefficient<R: Rng>(rng: &mut R, dim: u32, mode: RingMode) -> Coefficient {
    let mut m = Monomial::q_pow(rng.random_range(-2..=3));
    if dim >= 2 && rng.random_bool(0.3) {
        let i = rng.random_range(1..=dim);
        let j = loop {
            let j = rng.random_range(1..=dim);
            if j != i {
                break j;
            }
        };
        let e = *[-1, 1, 2].choose(rng).expect("non-empty");
        m = m.mul(&Monomial::pair(i, j, e).expect("distinct"));
    }
    Coefficient::from_monomial(m, small_rational(rng)).with_mode(mode)
}

/// Sum of one to three monomial coefficients; may cancel to zero.
pub fn coefficient<R: Rng>(rng: &mut R, dim: u32, mode: RingMode) -> Coefficient {
    let n = rng.random_range(1..=3);
    (0..n).fold(Coefficient::zero().with_mode(mode), |acc, _| acc + monomial_coefficient(rng, dim, mode))
}

pub fn gen<R: Rng>(rng: &mut R, cfg: &ExprConfig) -> Gen {
    let mut i = || rng.random_range(1..=cfg.dim);
    let (a, b) = (i(), i());
    let mut kinds = vec![1, 2, 3, 4, 5, 6];
    if cfg.coordinate_differentials {
        kinds.extend([0, 7, 7]);
    }
    if cfg.group {
        kinds.extend([8, 9]);
    }
    if cfg.flat {
        kinds.push(10);
    }
    let kind = *kinds.choose(rng).expect("non-empty");
    let order = rng.random_range(0..=cfg.max_order);
    match kind {
        0 => Gen::with_order(Base::Coord(a), order),
        1 => Gen::with_order(Base::Connection(a, b), order),
        2 => Gen::with_order(Base::Potential(a), order),
        3 => Gen::with_order(Base::PotentialGrad(a, b), order),
        4 => Gen::with_order(Base::VectorComp(a), order),
        5 => Gen::with_order(Base::Component(vec![a, b]), order),
        6 => Gen::with_order(Base::Alpha, order),
        7 => Gen::dx(a),
        8 => Gen::with_order(Base::Group, order),
        9 => Gen::new(Base::GroupInv),
        _ => Gen::new(Base::Flat { grade: rng.random_range(1..=2), row: a, col: b }),
    }
}

/// A single word of `len` random generators with unit coefficient.
pub fn product<R: Rng>(rng: &mut R, cfg: &ExprConfig, len: usize) -> FormExpr {
    FormExpr::word((0..len).map(|_| gen(rng, cfg)).collect::<Vec<_>>())
}

/// Random sum of words with random coefficients.
pub fn expr<R: Rng>(rng: &mut R, cfg: &ExprConfig, mode: RingMode) -> FormExpr {
    let terms = rng.random_range(1..=cfg.max_terms);
    (0..terms).fold(FormExpr::zero(), |acc, _| {
        let len = rng.random_range(0..=cfg.max_word);
        let c = coefficient(rng, cfg.dim, mode);
        acc + product(rng, cfg, len).scale(&c)
    })
}

/// [`expr`] restricted to the grade of its first term.
pub fn homogeneous_expr<R: Rng>(rng: &mut R, cfg: &ExprConfig, mode: RingMode) -> FormExpr {
    let e = expr(rng, cfg, mode);
    let Some(grade) = e.terms().next().map(|(w, _)| word_grade(w)) else {
        return e;
    };
    FormExpr::from_raw(e.terms().filter(|(w, _)| word_grade(w) == grade).map(|(w, c)| (c.clone(), w.clone())))
}

/// Random grade-0 entries built from component and potential symbols.
pub fn tensor<R: Rng>(rng: &mut R, rank: usize, dim: usize, abelian: bool) -> Result<ComponentTensor, Error> {
    let d = dim as u32;
    ComponentTensor::from_fn(rank, dim, abelian, |_| {
        let terms = rng.random_range(1..=2);
        (0..terms).fold(FormExpr::zero(), |acc, _| {
            let ix = (0..rank).map(|_| rng.random_range(1..=d)).collect();
            let mut word = vec![Gen::new(Base::Component(ix))];
            if rng.random_bool(0.3) {
                word.push(Gen::new(Base::Potential(rng.random_range(1..=d))));
            }
            acc + FormExpr::word(word).scale(&Coefficient::from_rational(small_rational(rng)))
        })
    })
}

/// Random reciprocal exchange matrix: upper entries are monomial
/// coefficients, lower ones their inverses, diagonal `±1`.
#[allow(clippy::needless_range_loop)]
pub fn qmatrix<R: Rng>(rng: &mut R, n: usize) -> QMatrix {
    let mut rows = vec![vec![Coefficient::one(); n]; n];
    for i in 0..n {
        rows[i][i] = Coefficient::from_integer(if rng.random_bool(0.5) { -1 } else { 1 });
        for j in i + 1..n {
            let c = monomial_coefficient(rng, n as u32, RingMode::Free);
            rows[j][i] = c.inverse().expect("monomial");
            rows[i][j] = c;
        }
    }
    QMatrix::new(rows).expect("constructed reciprocal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_draws_repeat() {
        let cfg = ExprConfig::default();
        let a = expr(&mut rng(9), &cfg, RingMode::Free);
        let b = expr(&mut rng(9), &cfg, RingMode::Free);
        assert_eq!(a, b);
        assert_eq!(qmatrix(&mut rng(4), 3), qmatrix(&mut rng(4), 3));
    }

    #[test]
    fn random_tensor_is_scalar() {
        let t = tensor(&mut rng(1), 3, 2, false).unwrap();
        assert!(t.iter().all(|(_, e)| e.grade().unwrap().unwrap_or(0) == 0));
    }
}
