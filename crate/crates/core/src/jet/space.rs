use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Exponent vector `i = (i_1, …, i_n)` of a monomial `z^i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        assert!(!exps.is_empty(), "multi-index needs at least one variable");
        Self(exps)
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        Self(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self::new(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        Self::new(v.to_vec())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Number of monomials of degree exactly `d` in `n` variables.
pub fn count_degree(n: usize, d: usize) -> usize {
    binomial(d + n - 1, n - 1)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Monomials of degree `d` in graded-lexicographic order: `z_1^d` first, `z_n^d` last.
fn monomials_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(prefix: &mut Vec<u32>, n: usize, rem: u32, out: &mut Vec<MultiIndex>) {
        if prefix.len() == n - 1 {
            prefix.push(rem);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=rem).rev() {
            prefix.push(e);
            rec(prefix, n, rem - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(count_degree(n, d as usize));
    rec(&mut Vec::with_capacity(n), n, d, &mut out);
    out
}

/// Index bookkeeping for jets of `n` variables truncated at order `m`.
///
/// Monomials of degree `0..=m` are stored densely in graded-lex order. The
/// layout of degrees `≤ m'` does not depend on `m`, so truncation and lifting
/// between orders are prefix operations on coefficient vectors.
pub struct JetSpace {
    n: usize,
    m: usize,
    monomials: Vec<MultiIndex>,
    offsets: Vec<usize>,
    lookup: HashMap<MultiIndex, usize>,
    products: Vec<Vec<u32>>,
}

impl JetSpace {
    /// Shared space for `(n, m)`.
    pub fn get(n: usize, m: usize) -> Arc<JetSpace> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(s) = cache.lock().expect("jet space cache").get(&(n, m)) {
            return s.clone();
        }
        let space = Arc::new(JetSpace::build(n, m));
        cache.lock().expect("jet space cache").entry((n, m)).or_insert(space).clone()
    }

    fn build(n: usize, m: usize) -> JetSpace {
        assert!(n >= 1, "at least one variable");
        let mut monomials = Vec::new();
        let mut offsets = Vec::with_capacity(m + 2);
        for d in 0..=m {
            offsets.push(monomials.len());
            monomials.extend(monomials_of_degree(n, d as u32));
        }
        offsets.push(monomials.len());
        let lookup: HashMap<MultiIndex, usize> =
            monomials.iter().enumerate().map(|(k, e)| (e.clone(), k)).collect();
        let products = monomials
            .iter()
            .map(|a| {
                let limit = offsets[m - a.degree() + 1];
                monomials[..limit].iter().map(|b| lookup[&a.add(b)] as u32).collect()
            })
            .collect();
        JetSpace { n, m, monomials, offsets, lookup, products }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.m
    }

    /// Number of stored monomials, degrees `0..=m`.
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, idx: usize) -> &MultiIndex {
        &self.monomials[idx]
    }

    pub fn index_of(&self, i: &MultiIndex) -> Option<usize> {
        self.lookup.get(i).copied()
    }

    /// Storage indices of the monomials of degree `d`.
    pub fn degree_range(&self, d: usize) -> Range<usize> {
        self.offsets[d]..self.offsets[d + 1]
    }

    /// Storage indices of the monomials of degree `≤ d`.
    pub fn up_to(&self, d: usize) -> usize {
        self.offsets[d + 1]
    }

    pub(crate) fn products(&self, idx: usize) -> &[u32] {
        &self.products[idx]
    }

    /// Position of `i` among monomials of degree `1..=m` in graded-lex order.
    pub fn monomial_rank(&self, i: &MultiIndex) -> Result<usize> {
        if i.n() != self.n {
            return Err(Error::DimensionMismatch(format!("{} exponents for {} variables", i.n(), self.n)));
        }
        let d = i.degree();
        if d == 0 || d > self.m {
            return Err(Error::DegreeOutOfRange { degree: d, max: self.m });
        }
        Ok(self.lookup[i] - 1)
    }

    /// Inverse of [`monomial_rank`](Self::monomial_rank).
    pub fn monomial_at_rank(&self, rank: usize) -> Result<&MultiIndex> {
        self.monomials
            .get(rank + 1)
            .ok_or(Error::DegreeOutOfRange { degree: self.m + 1, max: self.m })
    }

    /// Position of `i` within its homogeneous degree.
    pub fn rank_in_degree(&self, i: &MultiIndex) -> usize {
        self.lookup[i] - self.offsets[i.degree()]
    }

    /// `n ·` (number of monomials of degree `1..=m`).
    pub fn dim_map(&self) -> usize {
        self.n * (self.len() - 1)
    }

    /// `n ·` (number of monomials of degree `2..=m`): coordinates of tangent-to-identity jets.
    pub fn dim_tangent_identity(&self) -> usize {
        self.n * (self.len() - 1 - self.n.min(self.len() - 1))
    }
}

impl fmt::Debug for JetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JetSpace(n={}, m={})", self.n, self.m)
    }
}
