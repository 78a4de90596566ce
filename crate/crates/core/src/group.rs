//! Finite matrix groups given by generators, enumerated on demand.
//!
//! Groups here are desk-scale: every element is materialized by a
//! breadth-first closure and membership is a hash lookup. Subgroups built
//! from a group (derived subgroup, Frattini subgroup, center, …) carry their
//! own element lists.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exactla::{Matrix, PrimeModulus};
use crate::DEFAULT_ENUM_CAP;

/// `a⁻¹ b⁻¹ a b`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let ai = a.inverse()?;
    let bi = b.inverse()?;
    Ok(&(&(&ai * &bi) * a) * b)
}

/// Incrementally maintained closure of a generator list.
#[derive(Clone, Debug)]
struct Closure {
    gens: Vec<Matrix>,
    elements: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
    cap: usize,
}

impl Closure {
    fn trivial(p: u32, n: usize, cap: usize) -> Self {
        let id = Matrix::identity(p, n);
        let mut index = HashMap::new();
        index.insert(id.clone(), 0);
        Closure {
            gens: Vec::new(),
            elements: vec![id],
            index,
            cap,
        }
    }

    fn contains(&self, m: &Matrix) -> bool {
        self.index.contains_key(m)
    }

    fn push(&mut self, m: Matrix) -> Result<()> {
        if self.elements.len() >= self.cap {
            return Err(Error::CapExceeded { cap: self.cap });
        }
        self.index.insert(m.clone(), self.elements.len());
        self.elements.push(m);
        Ok(())
    }

    /// Adds `g` as a generator. Returns `false` (and changes nothing) when
    /// `g` already lies in the closure.
    fn add(&mut self, g: Matrix) -> Result<bool> {
        if self.contains(&g) {
            return Ok(false);
        }
        self.gens.push(g);
        let new_gen = self.gens.len() - 1;
        // Old elements are already closed under the old generators, so they
        // only need the new one; newly reached elements need all of them.
        let old = self.elements.len();
        for i in 0..old {
            let y = &self.elements[i] * &self.gens[new_gen];
            if !self.contains(&y) {
                self.push(y)?;
            }
        }
        let mut next = old;
        while next < self.elements.len() {
            for gi in 0..self.gens.len() {
                let y = &self.elements[next] * &self.gens[gi];
                if !self.contains(&y) {
                    self.push(y)?;
                }
            }
            next += 1;
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
struct Enumerated {
    elements: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
}

impl From<Closure> for Enumerated {
    fn from(c: Closure) -> Self {
        Enumerated {
            elements: c.elements,
            index: c.index,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    p: PrimeModulus,
    n: usize,
    generators: Vec<Matrix>,
    cap: usize,
    enumerated: OnceLock<Enumerated>,
}

impl FiniteMatrixGroup {
    /// The group generated by `gens`, each an invertible `n × n` matrix mod `p`.
    pub fn new(p: PrimeModulus, n: usize, gens: Vec<Matrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::shape("matrix size must be positive"));
        }
        for g in &gens {
            if g.modulus() != p.get() || g.rows() != n || g.cols() != n {
                return Err(Error::shape(format!(
                    "generator {}x{} mod {} in a group of {n}x{n} matrices mod {p}",
                    g.rows(),
                    g.cols(),
                    g.modulus()
                )));
            }
            if !g.is_invertible()? {
                return Err(Error::NotInvertible);
            }
        }
        Ok(FiniteMatrixGroup {
            p,
            n,
            generators: gens,
            cap: DEFAULT_ENUM_CAP,
            enumerated: OnceLock::new(),
        })
    }

    /// Infers `p` and `n` from the first generator.
    pub fn from_generators(gens: Vec<Matrix>) -> Result<Self> {
        let first = gens
            .first()
            .ok_or_else(|| Error::shape("at least one generator is required"))?;
        let p = PrimeModulus::new(first.modulus() as u64)?;
        let n = first.rows();
        FiniteMatrixGroup::new(p, n, gens)
    }

    pub fn trivial(p: PrimeModulus, n: usize) -> Self {
        FiniteMatrixGroup {
            p,
            n,
            generators: Vec::new(),
            cap: DEFAULT_ENUM_CAP,
            enumerated: OnceLock::new(),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        if self.enumerated.get().is_some_and(|e| e.elements.len() > cap) {
            self.enumerated = OnceLock::new();
        }
        self.cap = cap;
        self
    }

    /// The subgroup whose elements are exactly `elements`. Fails if the set
    /// is not closed under multiplication.
    pub fn from_elements(
        p: PrimeModulus,
        n: usize,
        elements: &[Matrix],
        cap: usize,
    ) -> Result<Self> {
        let mut c = Closure::trivial(p.get(), n, cap);
        for x in elements {
            if x.modulus() != p.get() || x.rows() != n || x.cols() != n {
                return Err(Error::shape("element of the wrong shape"));
            }
            c.add(x.clone())?;
        }
        let set: std::collections::HashSet<&Matrix> = elements.iter().collect();
        if c.elements.len() != set.len() || !c.elements.iter().all(|e| set.contains(e)) {
            return Err(Error::InvalidArgument(
                "element set is not a group".into(),
            ));
        }
        Ok(Self::from_closure(p, n, c))
    }

    fn from_closure(p: PrimeModulus, n: usize, c: Closure) -> Self {
        let generators = c.gens.clone();
        let cap = c.cap;
        let enumerated = OnceLock::new();
        let _ = enumerated.set(Enumerated::from(c));
        FiniteMatrixGroup {
            p,
            n,
            generators,
            cap,
            enumerated,
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.p.get(), self.n)
    }

    fn enumerated(&self) -> Result<&Enumerated> {
        if let Some(e) = self.enumerated.get() {
            return Ok(e);
        }
        let mut c = Closure::trivial(self.p.get(), self.n, self.cap);
        for g in &self.generators {
            c.add(g.clone())?;
        }
        let _ = self.enumerated.set(Enumerated::from(c));
        Ok(self.enumerated.get().expect("just initialized"))
    }

    /// All elements in breadth-first order from the identity.
    pub fn elements(&self) -> Result<&[Matrix]> {
        Ok(&self.enumerated()?.elements)
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.enumerated()?.elements.len())
    }

    pub fn contains(&self, m: &Matrix) -> Result<bool> {
        Ok(self.enumerated()?.index.contains_key(m))
    }

    /// Position of `m` in [`elements`](Self::elements).
    pub fn position(&self, m: &Matrix) -> Result<Option<usize>> {
        Ok(self.enumerated()?.index.get(m).copied())
    }

    /// Commutativity of the generators, hence of the group.
    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| &g[i] * &g[j] == &g[j] * &g[i]))
    }

    pub fn exponent_divides(&self, e: u64) -> Result<bool> {
        let id = self.identity();
        for x in self.elements()? {
            if x.pow(e)? != id {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_elementary_abelian(&self) -> Result<bool> {
        if !self.is_abelian() {
            return Ok(false);
        }
        let id = self.identity();
        for g in &self.generators {
            if g.pow(self.p.get() as u64)? != id {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Subgroup generated by `gens`, which must be elements of `self`.
    pub fn subgroup(&self, gens: &[Matrix]) -> Result<FiniteMatrixGroup> {
        let mut c = Closure::trivial(self.p.get(), self.n, self.cap);
        for g in gens {
            c.add(g.clone())?;
        }
        Ok(Self::from_closure(self.p, self.n, c))
    }

    /// Smallest normal subgroup of `self` containing `gens`.
    pub fn normal_closure(&self, gens: &[Matrix]) -> Result<FiniteMatrixGroup> {
        let mut c = Closure::trivial(self.p.get(), self.n, self.cap);
        for g in gens {
            c.add(g.clone())?;
        }
        let conj: Vec<(Matrix, &Matrix)> = self
            .generators
            .iter()
            .map(|g| Ok((g.inverse()?, g)))
            .collect::<Result<_>>()?;
        // Conjugates of the closure's own generators suffice; the list grows
        // while we scan it.
        let mut i = 0;
        while i < c.gens.len() {
            let h = c.gens[i].clone();
            for (gi, g) in &conj {
                let y = &(gi * &h) * *g;
                c.add(y)?;
            }
            i += 1;
        }
        Ok(Self::from_closure(self.p, self.n, c))
    }

    /// `G′`, the normal closure of commutators of generators.
    pub fn derived_subgroup(&self) -> Result<FiniteMatrixGroup> {
        let g = &self.generators;
        let mut comms = Vec::new();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                comms.push(commutator(&g[i], &g[j])?);
            }
        }
        self.normal_closure(&comms)
    }

    /// `Φ(G) = G′ G^p` for a `p`-group, as the normal closure of generator
    /// commutators and `p`-th powers.
    pub fn frattini(&self) -> Result<FiniteMatrixGroup> {
        self.require_p_group()?;
        let g = &self.generators;
        let mut seeds = Vec::new();
        for i in 0..g.len() {
            seeds.push(g[i].pow(self.p.get() as u64)?);
            for j in i + 1..g.len() {
                seeds.push(commutator(&g[i], &g[j])?);
            }
        }
        self.normal_closure(&seeds)
    }

    /// `℧_1(G)`, generated by all `p`-th powers.
    pub fn mho_1(&self) -> Result<FiniteMatrixGroup> {
        let p = self.p.get() as u64;
        let powers = self
            .elements()?
            .iter()
            .map(|x| x.pow(p))
            .collect::<Result<Vec<_>>>()?;
        self.subgroup(&powers)
    }

    /// `log_p |G|` when `|G|` is a power of `p`.
    pub fn log_order(&self) -> Result<u32> {
        let order = self.order()?;
        log_exact(order, self.p.get()).ok_or(Error::NotAPGroup {
            order,
            p: self.p.get(),
        })
    }

    fn require_p_group(&self) -> Result<()> {
        self.log_order().map(|_| ())
    }

    /// `d(G) = log_p |G : Φ(G)|`.
    pub fn rank(&self) -> Result<u32> {
        let phi = self.frattini()?;
        Ok(self.log_order()? - phi.log_order()?)
    }

    /// A generating set none of whose members can be dropped, obtained by
    /// removing redundant generators one at a time. For a `p`-group its size
    /// is `d(G)`.
    pub fn irredundant_generators(&self) -> Result<Vec<Matrix>> {
        let order = self.order()?;
        let mut gens: Vec<Matrix> = self.generators.clone();
        let mut i = 0;
        while i < gens.len() {
            let rest: Vec<Matrix> = gens
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            if self.subgroup(&rest)?.order()? == order {
                gens = rest;
            } else {
                i += 1;
            }
        }
        Ok(gens)
    }

    pub fn center(&self) -> Result<FiniteMatrixGroup> {
        self.centralizer_of(&self.generators)
    }

    /// `C_G(H)`.
    pub fn centralizer(&self, h: &FiniteMatrixGroup) -> Result<FiniteMatrixGroup> {
        self.centralizer_of(h.generators())
    }

    fn centralizer_of(&self, xs: &[Matrix]) -> Result<FiniteMatrixGroup> {
        let els: Vec<Matrix> = self
            .elements()?
            .iter()
            .filter(|g| xs.iter().all(|x| (*g * x) == (x * *g)))
            .cloned()
            .collect();
        FiniteMatrixGroup::from_elements(self.p, self.n, &els, self.cap)
    }

    pub fn is_subgroup_of(&self, other: &FiniteMatrixGroup) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `h ⊴ self`, including `h ⊆ self`.
    pub fn is_normal(&self, h: &FiniteMatrixGroup) -> Result<bool> {
        if !h.is_subgroup_of(self)? {
            return Ok(false);
        }
        for g in &self.generators {
            let gi = g.inverse()?;
            for x in h.generators() {
                if !h.contains(&(&(&gi * x) * g))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Equality as sets of matrices.
    pub fn same_elements(&self, other: &FiniteMatrixGroup) -> Result<bool> {
        Ok(self.order()? == other.order()? && self.is_subgroup_of(other)?)
    }

    pub fn element_order(&self, x: &Matrix) -> Result<u64> {
        element_order(x, self.cap as u64)
    }
}

/// Multiplicative order of an invertible matrix, failing above `limit`.
pub fn element_order(x: &Matrix, limit: u64) -> Result<u64> {
    let id = Matrix::identity(x.modulus(), x.rows());
    let mut y = x.clone();
    let mut k = 1u64;
    while y != id {
        if k >= limit {
            return Err(Error::CapExceeded {
                cap: limit as usize,
            });
        }
        y = &y * x;
        k += 1;
    }
    Ok(k)
}

/// `e` with `base^e = value`, if any.
pub fn log_exact(value: usize, base: u32) -> Option<u32> {
    let base = base as usize;
    let mut v = value;
    let mut e = 0;
    if v == 0 {
        return None;
    }
    while v.is_multiple_of(base) {
        v /= base;
        e += 1;
    }
    (v == 1).then_some(e)
}
