//! Abelian matrix groups: `Ω_t`, `℧_t`, Sylow parts, invariant factors, and
//! the index `|A : Ω_1(O_p(A))|` for abelian `A ≤ GL(n, p)`.
//!
//! All subgroups here are computed as element sets, which is only valid for
//! abelian groups; the functions return [`Error::NonAbelian`] otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{commutator, element_order, log_exact, FiniteMatrixGroup};
use crate::exactla::{Matrix, PrimeModulus};
use crate::matalg::MatAlgebra;

fn require_abelian(g: &FiniteMatrixGroup) -> Result<()> {
    if g.is_abelian() {
        Ok(())
    } else {
        Err(Error::NonAbelian)
    }
}

fn filter_subgroup(
    g: &FiniteMatrixGroup,
    keep: impl Fn(&Matrix) -> Result<bool>,
) -> Result<FiniteMatrixGroup> {
    let mut els = Vec::new();
    for x in g.elements()? {
        if keep(x)? {
            els.push(x.clone());
        }
    }
    FiniteMatrixGroup::from_elements(g.modulus(), g.n(), &els, g.cap())
}

fn p_power(p: u32, t: u32) -> Result<u64> {
    (p as u64)
        .checked_pow(t)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{t} overflows")))
}

/// `Ω_t(A) = {x : x^{p^t} = 1}`.
pub fn omega_t(g: &FiniteMatrixGroup, t: u32) -> Result<FiniteMatrixGroup> {
    require_abelian(g)?;
    let e = p_power(g.modulus().get(), t)?;
    let id = g.identity();
    filter_subgroup(g, |x| Ok(x.pow(e)? == id))
}

/// `℧_t(A) = {x^{p^t}}`.
pub fn mho_t(g: &FiniteMatrixGroup, t: u32) -> Result<FiniteMatrixGroup> {
    require_abelian(g)?;
    let e = p_power(g.modulus().get(), t)?;
    let mut powers = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for x in g.elements()? {
        let y = x.pow(e)?;
        if seen.insert(y.clone()) {
            powers.push(y);
        }
    }
    FiniteMatrixGroup::from_elements(g.modulus(), g.n(), &powers, g.cap())
}

fn is_power_of(mut v: u64, p: u64) -> bool {
    while v.is_multiple_of(p) {
        v /= p;
    }
    v == 1
}

/// `O_p(A)`: the elements of `p`-power order.
pub fn o_p_part(g: &FiniteMatrixGroup) -> Result<FiniteMatrixGroup> {
    require_abelian(g)?;
    let p = g.modulus().get() as u64;
    let limit = g.order()? as u64;
    filter_subgroup(g, |x| Ok(is_power_of(element_order(x, limit)?, p)))
}

/// `O_{p′}(A)`: the elements of order prime to `p`.
pub fn o_p_prime_part(g: &FiniteMatrixGroup) -> Result<FiniteMatrixGroup> {
    require_abelian(g)?;
    let p = g.modulus().get() as u64;
    let limit = g.order()? as u64;
    filter_subgroup(g, |x| Ok(element_order(x, limit)? % p != 0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaIndex {
    pub order: usize,
    pub omega_order: usize,
    pub index: usize,
    /// `p^n`, absent when it does not fit in 128 bits.
    pub bound: Option<u128>,
    pub bound_ok: bool,
}

/// `|A : Ω_1(O_p(A))|` against `p^n`.
pub fn omega_index_check(g: &FiniteMatrixGroup) -> Result<OmegaIndex> {
    let op = o_p_part(g)?;
    let om = omega_t(&op, 1)?;
    let order = g.order()?;
    let omega_order = om.order()?;
    if order % omega_order != 0 {
        return Err(Error::invariant("subgroup order does not divide group order"));
    }
    let index = order / omega_order;
    let bound = (g.modulus().get() as u128).checked_pow(g.n() as u32);
    Ok(OmegaIndex {
        order,
        omega_order,
        index,
        bound,
        bound_ok: bound.is_none_or(|b| index as u128 <= b),
    })
}

/// `m` copies of `C_order`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CyclicFactor {
    pub prime: u64,
    pub order: u64,
    pub multiplicity: u32,
}

/// Invariant factors of a finite abelian group, sorted by prime then order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianType {
    pub factors: Vec<CyclicFactor>,
}

impl FiniteAbelianType {
    pub fn order(&self) -> u128 {
        self.factors
            .iter()
            .map(|f| (f.order as u128).pow(f.multiplicity))
            .product()
    }

    /// Number of cyclic factors of order at least `p²` for the prime `p`.
    pub fn count_at_least_square(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .filter(|f| f.prime == p && f.order >= p * p)
            .map(|f| f.multiplicity)
            .sum()
    }

    /// Total number of cyclic factors of `p`-power order.
    pub fn rank_at(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .filter(|f| f.prime == p)
            .map(|f| f.multiplicity)
            .sum()
    }
}

impl std::fmt::Display for FiniteAbelianType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|c| {
                if c.multiplicity == 1 {
                    format!("C{}", c.order)
                } else {
                    format!("C{}^{}", c.order, c.multiplicity)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors from element-order counts: with
/// `a_i = log_q #{x ∈ A_q : x^{q^i} = 1}`, the factor `C_{q^j}` occurs
/// `2a_j − a_{j−1} − a_{j+1}` times.
pub fn abelian_type(g: &FiniteMatrixGroup) -> Result<FiniteAbelianType> {
    require_abelian(g)?;
    let order = g.order()? as u64;
    let orders: Vec<u64> = g
        .elements()?
        .iter()
        .map(|x| element_order(x, order))
        .collect::<Result<_>>()?;
    abelian_type_from_orders(&orders)
}

/// Same as [`abelian_type`] given the order of every element.
pub fn abelian_type_from_orders(orders: &[u64]) -> Result<FiniteAbelianType> {
    let total = orders.len() as u64;
    let mut factors = Vec::new();
    for q in prime_factors(total) {
        // a[i] for i = 0, 1, … until it stabilizes at log_q |A_q|.
        let mut a: Vec<i64> = vec![0];
        let mut qi = 1u64;
        loop {
            qi *= q;
            let count = orders
                .iter()
                .filter(|&&o| is_power_of(o, q) && qi.is_multiple_of(o))
                .count();
            let log = log_exact(count, q as u32)
                .ok_or_else(|| Error::invariant("element count is not a prime power"))?;
            a.push(log as i64);
            if a[a.len() - 1] == a[a.len() - 2] {
                break;
            }
        }
        let mut qj = 1u64;
        for j in 1..a.len() - 1 {
            qj *= q;
            let mult = 2 * a[j] - a[j - 1] - a[j + 1];
            if mult < 0 {
                return Err(Error::invariant("negative invariant-factor multiplicity"));
            }
            if mult > 0 {
                factors.push(CyclicFactor {
                    prime: q,
                    order: qj,
                    multiplicity: mult as u32,
                });
            }
        }
    }
    let t = FiniteAbelianType { factors };
    if t.order() != total as u128 {
        return Err(Error::invariant("invariant factors do not multiply to |A|"));
    }
    Ok(t)
}

/// `d(Φ(A))` for an abelian `p`-group: the number of cyclic factors of
/// order at least `p²`.
pub fn d_phi(g: &FiniteMatrixGroup) -> Result<u32> {
    g.log_order()?;
    let p = g.modulus().get() as u64;
    Ok(abelian_type(g)?.count_at_least_square(p))
}

/// `|P : w(P)|` for the word `w = x^{p²}[y, z]`. The verbal subgroup is
/// generated by the `p²`-th powers together with `P′`.
pub fn verbal_w_index(g: &FiniteMatrixGroup) -> Result<usize> {
    let p2 = (g.modulus().get() as u64).pow(2);
    let derived = g.derived_subgroup()?;
    let mut gens: Vec<Matrix> = derived.generators().to_vec();
    let mut seen = std::collections::HashSet::new();
    for x in g.elements()? {
        let y = x.pow(p2)?;
        if seen.insert(y.clone()) {
            gens.push(y);
        }
    }
    let w = g.subgroup(&gens)?;
    Ok(g.order()? / w.order()?)
}

/// The set of word values `x^{p²}[y, z]`, for small groups only.
pub fn verbal_w_values(g: &FiniteMatrixGroup) -> Result<Vec<Matrix>> {
    let p2 = (g.modulus().get() as u64).pow(2);
    let els = g.elements()?;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for x in els {
        let xp = x.pow(p2)?;
        for y in els {
            for z in els {
                let v = &xp * &commutator(y, z)?;
                if seen.insert(v.clone()) {
                    out.push(v);
                }
            }
        }
    }
    Ok(out)
}

/// `U(𝒜)`, the invertible elements of a commutative algebra.
pub fn unit_group_of_algebra(alg: &MatAlgebra, cap: usize) -> Result<FiniteMatrixGroup> {
    if !alg.is_commutative() {
        return Err(Error::NonCommutativeInput);
    }
    let mut units = Vec::new();
    for m in alg.elements(cap)? {
        if m.is_invertible()? {
            units.push(m);
        }
    }
    if units.is_empty() {
        return Err(Error::InvalidArgument("algebra has no units".into()));
    }
    FiniteMatrixGroup::from_elements(alg.modulus(), alg.n(), &units, cap)
}

/// `1 + ℬ` for a square-zero algebra `ℬ`.
pub fn one_plus(b: &MatAlgebra, cap: usize) -> Result<FiniteMatrixGroup> {
    let id = Matrix::identity(b.modulus().get(), b.n());
    let els = b
        .elements(cap)?
        .iter()
        .map(|m| m.checked_add(&id))
        .collect::<Result<Vec<_>>>()?;
    FiniteMatrixGroup::from_elements(b.modulus(), b.n(), &els, cap)
}

/// `⟨g_1, …, g_k⟩ ≅ C_{p²}^k` in `GL(k(p+1), p)`: `g_i` is a unipotent
/// Jordan block of size `p + 1` on the `i`-th summand and the identity
/// elsewhere.
pub fn jordan_family(k: usize, p: PrimeModulus) -> Result<FiniteMatrixGroup> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let pm = p.get();
    let size = pm as usize + 1;
    let mut block = Matrix::nilpotent_jordan(pm, size);
    for i in 0..size {
        block.set(i, i, 1);
    }
    let gens = (0..k)
        .map(|i| {
            let blocks: Vec<Matrix> = (0..k)
                .map(|j| {
                    if i == j {
                        block.clone()
                    } else {
                        Matrix::identity(pm, size)
                    }
                })
                .collect();
            Matrix::block_diagonal(&blocks)
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteMatrixGroup::new(p, k * size, gens)
}

/// Companion matrix of `x^n + c_{n−1} x^{n−1} + … + c_0`.
pub fn companion(p: PrimeModulus, coeffs: &[u32]) -> Matrix {
    let n = coeffs.len();
    let pm = p.get();
    Matrix::from_fn(pm, n, n, |i, j| {
        if j == n - 1 {
            ((pm - coeffs[i] % pm) % pm) as u64
        } else {
            (i == j + 1) as u64
        }
    })
}

/// A generator of a Singer cycle in `GL(n, p)`: the companion matrix of the
/// first primitive polynomial of degree `n` in lexicographic order.
pub fn singer_cycle(n: usize, p: PrimeModulus) -> Result<Matrix> {
    let q = (p.get() as u64)
        .checked_pow(n as u32)
        .filter(|q| *q <= 1 << 40)
        .ok_or_else(|| Error::TooLarge(format!("{p}^{n}")))?;
    let target = q - 1;
    let factors = prime_factors(target);
    let id = Matrix::identity(p.get(), n);
    let mut coeffs = vec![0u32; n];
    loop {
        if coeffs[0] != 0 {
            let c = companion(p, &coeffs);
            if c.pow(target)? == id && factors.iter().all(|f| c.pow(target / f).unwrap() != id) {
                return Ok(c);
            }
        }
        if !crate::exactla::increment(&mut coeffs, p.get()) {
            return Err(Error::invariant("no primitive polynomial found"));
        }
    }
}
