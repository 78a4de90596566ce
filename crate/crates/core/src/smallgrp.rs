//! Exhaustive subgroup enumeration for groups of order at most a few hundred.
//!
//! A [`CayleyTable`] is built once from an enumerated matrix group; subgroups
//! are bitsets over element indices.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{log_exact, FiniteMatrixGroup};

/// Default order limit for [`small_group_ranks`].
pub const SMALL_GROUP_CAP: usize = 512;

/// Stop enumerating after this many subgroups.
const MAX_SUBGROUPS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitset(Vec<u64>);

impl Bitset {
    fn new(len: usize) -> Self {
        Bitset(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b)
        })
    }

    pub fn is_subset(&self, other: &Bitset) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Multiplication table of a finite group; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    p: u32,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl CayleyTable {
    pub fn from_group(g: &FiniteMatrixGroup, cap: usize) -> Result<Self> {
        let order = g.order()?;
        if order > cap {
            return Err(Error::CapExceeded { cap });
        }
        let els = g.elements()?;
        let mut mul = vec![0u32; order * order];
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                let c = g
                    .position(&(a * b))?
                    .ok_or_else(|| Error::invariant("group not closed"))?;
                mul[i * order + j] = c as u32;
            }
        }
        let inv = (0..order)
            .map(|i| {
                (0..order)
                    .find(|&j| mul[i * order + j] == 0)
                    .map(|j| j as u32)
                    .ok_or_else(|| Error::invariant("element without inverse"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CayleyTable {
            p: g.modulus().get(),
            order,
            mul,
            inv,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn whole(&self) -> Bitset {
        let mut s = Bitset::new(self.order);
        for i in 0..self.order {
            s.insert(i);
        }
        s
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: impl IntoIterator<Item = usize>) -> Bitset {
        let gens: Vec<usize> = gens.into_iter().collect();
        self.extend(&Bitset::new(self.order), &gens)
    }

    /// Subgroup generated by `sub` (already a subgroup, or empty) and `gens`.
    fn extend(&self, sub: &Bitset, gens: &[usize]) -> Bitset {
        let mut set = sub.clone();
        set.insert(0);
        let mut all_gens: Vec<usize> = sub.iter().collect();
        all_gens.extend_from_slice(gens);
        let mut queue: Vec<usize> = set.iter().collect();
        while let Some(x) = queue.pop() {
            for &g in &all_gens {
                let y = self.mul(x, g);
                if !set.contains(y) {
                    set.insert(y);
                    queue.push(y);
                }
            }
        }
        set
    }

    pub fn is_abelian(&self, h: &Bitset) -> bool {
        let els: Vec<usize> = h.iter().collect();
        els.iter()
            .all(|&a| els.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_normal(&self, h: &Bitset) -> bool {
        h.iter().all(|x| {
            (0..self.order).all(|g| h.contains(self.mul(self.mul(self.inv(g), x), g)))
        })
    }

    pub fn is_elementary_abelian(&self, h: &Bitset) -> bool {
        self.is_abelian(h) && h.iter().all(|x| self.pow(x, self.p as u64) == 0)
    }

    /// `H′ H^p`.
    pub fn frattini(&self, h: &Bitset) -> Bitset {
        let els: Vec<usize> = h.iter().collect();
        let mut gens: HashSet<usize> = els.iter().map(|&x| self.pow(x, self.p as u64)).collect();
        for &a in &els {
            for &b in &els {
                gens.insert(self.commutator(a, b));
            }
        }
        let mut gens: Vec<usize> = gens.into_iter().collect();
        gens.sort_unstable();
        self.generate(gens)
    }

    /// `d(H)` for a `p`-subgroup `H`.
    pub fn rank(&self, h: &Bitset) -> Result<u32> {
        let a = log_exact(h.len(), self.p).ok_or(Error::NotAPGroup {
            order: h.len(),
            p: self.p,
        })?;
        let b = log_exact(self.frattini(h).len(), self.p)
            .ok_or_else(|| Error::invariant("Frattini subgroup order is not a prime power"))?;
        Ok(a - b)
    }

    /// Every subgroup, by repeated cyclic extension from the trivial group.
    pub fn all_subgroups(&self) -> Result<Vec<Bitset>> {
        let mut trivial = Bitset::new(self.order);
        trivial.insert(0);
        let mut seen: HashSet<Bitset> = HashSet::new();
        seen.insert(trivial.clone());
        let mut out = vec![trivial];
        let mut next = 0;
        while next < out.len() {
            let s = out[next].clone();
            for g in 0..self.order {
                if s.contains(g) {
                    continue;
                }
                let t = self.extend(&s, &[g]);
                if seen.insert(t.clone()) {
                    if out.len() >= MAX_SUBGROUPS {
                        return Err(Error::TooLarge(format!(
                            "more than {MAX_SUBGROUPS} subgroups"
                        )));
                    }
                    out.push(t);
                }
            }
            next += 1;
        }
        out.sort_by_key(|s| (s.len(), s.clone()));
        Ok(out)
    }
}

/// `r(G)`, `nr(G)` and `sr(G)` computed over every subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallGroupRanks {
    pub r: u32,
    pub nr: u32,
    pub sr: u32,
}

pub fn small_group_ranks(group: &FiniteMatrixGroup, cap: usize) -> Result<SmallGroupRanks> {
    let t = CayleyTable::from_group(group, cap)?;
    let mut ranks = SmallGroupRanks { r: 0, nr: 0, sr: 0 };
    for h in t.all_subgroups()? {
        let d = t.rank(&h)?;
        ranks.sr = ranks.sr.max(d);
        if t.is_abelian(&h) {
            ranks.r = ranks.r.max(d);
            if t.is_normal(&h) {
                ranks.nr = ranks.nr.max(d);
            }
        }
    }
    Ok(ranks)
}

/// Normal elementary abelian subgroups of `group`, smallest first.
pub fn normal_elementary_abelian(t: &CayleyTable) -> Result<Vec<Bitset>> {
    Ok(t
        .all_subgroups()?
        .into_iter()
        .filter(|h| t.is_elementary_abelian(h) && t.is_normal(h))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{Matrix, PrimeModulus};

    fn perm(n: usize, images: &[usize]) -> Matrix {
        Matrix::from_fn(2, n, n, |i, j| (images[j] == i) as u64)
    }

    fn d8() -> FiniteMatrixGroup {
        let r = perm(4, &[1, 2, 3, 0]);
        let s = perm(4, &[0, 3, 2, 1]);
        FiniteMatrixGroup::new(PrimeModulus::new(2).unwrap(), 4, vec![r, s]).unwrap()
    }

    #[test]
    fn d8_ranks() {
        let ranks = small_group_ranks(&d8(), SMALL_GROUP_CAP).unwrap();
        assert_eq!(ranks, SmallGroupRanks { r: 2, nr: 2, sr: 2 });
    }

    #[test]
    fn d8_has_ten_subgroups() {
        let t = CayleyTable::from_group(&d8(), 64).unwrap();
        assert_eq!(t.all_subgroups().unwrap().len(), 10);
    }

    #[test]
    fn elementary_abelian_ranks() {
        let p = PrimeModulus::new(2).unwrap();
        let gens = (0..3)
            .map(|i| {
                let mut m = Matrix::identity(2, 6);
                m.set(2 * i, 2 * i + 1, 1);
                m
            })
            .collect();
        let g = FiniteMatrixGroup::new(p, 6, gens).unwrap();
        let ranks = small_group_ranks(&g, SMALL_GROUP_CAP).unwrap();
        assert_eq!(ranks, SmallGroupRanks { r: 3, nr: 3, sr: 3 });
    }

    #[test]
    fn cap_applies() {
        assert_eq!(
            small_group_ranks(&d8(), 4).unwrap_err(),
            Error::CapExceeded { cap: 4 }
        );
    }
}
