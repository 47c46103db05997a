//! Permutations of `{1..m}` and the exchange factors that reorder a permuted
//! coordinate-differential monomial back to identity order.
//!
//! A factor is a Laurent monomial in abstract slot-pair symbols `q[a,b]`
//! (`1 <= a < b <= m`). Slot pairs are bound to concrete indices only when a
//! tensor is symmetrised.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::Coefficient;
use crate::error::Error;

/// A bijection of `{1..m}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    pub fn new(image: Vec<u32>) -> Result<Self, Error> {
        let m = image.len();
        let mut seen = vec![false; m];
        for &x in &image {
            let ok = x >= 1 && (x as usize) <= m && !seen[x as usize - 1];
            if !ok {
                return Err(Error::InvalidPermutation(image, m));
            }
            seen[x as usize - 1] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(m: usize) -> Self {
        Permutation { image: (1..=m as u32).collect() }
    }

    pub fn rank(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// `(self ∘ other)(s) = self(other(s))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.rank(), other.rank());
        Permutation { image: other.image.iter().map(|&s| self.image[s as usize - 1]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.rank()];
        for (pos, &x) in self.image.iter().enumerate() {
            inv[x as usize - 1] = pos as u32 + 1;
        }
        Permutation { image: inv }
    }

    /// The tuple `(t_{p(1)}, ..., t_{p(m)})`.
    pub fn permute<T: Clone>(&self, tuple: &[T]) -> Vec<T> {
        assert_eq!(tuple.len(), self.rank());
        self.image.iter().map(|&s| tuple[s as usize - 1].clone()).collect()
    }

    /// Cycling operator: `i_1 i_2 ... i_m ↦ i_m i_1 ... i_{m-1}`.
    pub fn cycle(&self) -> Permutation {
        let mut image = self.image.clone();
        image.rotate_right(1);
        Permutation { image }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All of `S_m`, ordered as `S_{m-1} ∪ C_m S_{m-1} ∪ ... ∪ C_m^{m-1} S_{m-1}`
/// with `S_{m-1}` embedded by fixing `m` in the last slot.
pub fn generate_sm(m: usize) -> Result<Vec<Permutation>, Error> {
    if m == 0 {
        return Err(Error::ZeroRank);
    }
    let mut perms = vec![Permutation::identity(1)];
    for size in 2..=m {
        let base: Vec<Permutation> = perms
            .iter()
            .map(|p| {
                let mut image = p.image.clone();
                image.push(size as u32);
                Permutation { image }
            })
            .collect();
        let mut next = Vec::with_capacity(base.len() * size);
        let mut block = base;
        for _ in 0..size {
            let cycled = block.iter().map(Permutation::cycle).collect();
            next.append(&mut block);
            block = cycled;
        }
        perms = next;
    }
    Ok(perms)
}

/// Exchange factor picked up when `dx^a dx^b` is rewritten as `dx^b dx^a`:
/// `dx^{..a b..} = q[b,a] dx^{..b a..}`.
fn exchange(a: u32, b: u32) -> Coefficient {
    Coefficient::pair(b, a).expect("permutation slots are distinct")
}

/// Restores identity order by moving the largest slot to the rightmost
/// position, then the next largest, and so on, collecting one exchange
/// factor per adjacent swap.
pub fn qfactor_rule(p: &Permutation) -> Coefficient {
    let mut word = p.image.clone();
    let mut factor = Coefficient::one();
    for slot in (1..=word.len() as u32).rev() {
        let home = slot as usize - 1;
        let mut pos = word.iter().position(|&x| x == slot).expect("slot present");
        while pos < home {
            factor *= &exchange(word[pos], word[pos + 1]);
            word.swap(pos, pos + 1);
            pos += 1;
        }
    }
    factor
}

/// Swap order used by [`qfactor_oracle`].
#[derive(Clone, Copy, Debug)]
pub enum SwapPath {
    /// Classic bubble sort, sweeping left to right.
    BubbleForward,
    /// Bubble sort sweeping right to left.
    BubbleBackward,
    /// Random adjacent swaps, occasionally against the sort order.
    Random(u64),
}

/// Brute-force exchange factor: sort the slot word with adjacent swaps along
/// `path`, multiplying the exchange factor for every swap actually made.
pub fn qfactor_oracle(p: &Permutation, path: SwapPath) -> Coefficient {
    let mut word = p.image.clone();
    let mut factor = Coefficient::one();
    let n = word.len();
    let swap = |word: &mut Vec<u32>, i: usize, factor: &mut Coefficient| {
        *factor *= &exchange(word[i], word[i + 1]);
        word.swap(i, i + 1);
    };
    match path {
        SwapPath::BubbleForward => loop {
            let mut changed = false;
            for i in 0..n.saturating_sub(1) {
                if word[i] > word[i + 1] {
                    swap(&mut word, i, &mut factor);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        },
        SwapPath::BubbleBackward => loop {
            let mut changed = false;
            for i in (0..n.saturating_sub(1)).rev() {
                if word[i] > word[i + 1] {
                    swap(&mut word, i, &mut factor);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        },
        SwapPath::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            while n > 1 && word.windows(2).any(|w| w[0] > w[1]) {
                let i = rng.random_range(0..n - 1);
                if word[i] > word[i + 1] || rng.random_bool(0.2) {
                    swap(&mut word, i, &mut factor);
                }
            }
        }
    }
    factor
}

/// Exchange factors for every element of `S_m`, in generation order.
#[derive(Clone, Debug)]
pub struct QFactorTable {
    m: usize,
    entries: Vec<(Permutation, Coefficient)>,
    index: HashMap<Permutation, usize>,
}

impl QFactorTable {
    pub fn new(m: usize) -> Result<Self, Error> {
        let entries: Vec<_> = generate_sm(m)?
            .into_iter()
            .map(|p| {
                let f = qfactor_rule(&p);
                (p, f)
            })
            .collect();
        let index = entries.iter().enumerate().map(|(i, (p, _))| (p.clone(), i)).collect();
        Ok(QFactorTable { m, entries, index })
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, p: &Permutation) -> Option<&Coefficient> {
        self.index.get(p).map(|&i| &self.entries[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, &Coefficient)> {
        self.entries.iter().map(|(p, c)| (p, c))
    }
}

/// Bind the slot pairs of an exchange factor to concrete indices:
/// `q[a,b]^e ↦ lookup(tuple[a], tuple[b])^e`.
pub fn instantiate<F>(factor: &Coefficient, tuple: &[u32], mut lookup: F) -> Result<Coefficient, Error>
where
    F: FnMut(u32, u32) -> Result<Coefficient, Error>,
{
    let mut total = Coefficient::zero();
    for (mono, c) in factor.terms() {
        let mut term = Coefficient::q_pow(mono.q_exponent(), factor.mode()).scale(c);
        for &((a, b), e) in mono.pairs() {
            let (ia, ib) = (tuple[a as usize - 1], tuple[b as usize - 1]);
            let base = lookup(ia, ib)?;
            let base = if e < 0 { base.inverse()? } else { base };
            term *= &base.pow(e.unsigned_abs() as u32);
        }
        total += &term;
    }
    Ok(total)
}
