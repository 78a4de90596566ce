//! The ring `S = A ⊕ B` over `R = Z/p^r` with `S³ = 0`, built from an
//! alternating form `φ : A × A → B`, and the class-two group `G = 1 + S`.
//!
//! With `A = R^n` and `B = R^k`, the product is `(a, b)(a′, b′) = (0, q(a, a′))`
//! where `q(a, a′)_c = Σ_{i<j} a_i a′_j M_c[i][j]`. Only the strict upper
//! triangle of each `M_c` enters the product; the full alternating matrix is
//! used for commutation tests.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::is_prime;

fn mulmod(a: u32, b: u32, m: u32) -> u32 {
    ((a as u64 * b as u64) % m as u64) as u32
}

fn addmod(a: u32, b: u32, m: u32) -> u32 {
    ((a as u64 + b as u64) % m as u64) as u32
}

fn negmod(a: u32, m: u32) -> u32 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// A `k`-tuple of alternating `n × n` matrices over `Z/p^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VectorForm {
    p: u32,
    r: u32,
    modulus: u32,
    n: usize,
    k: usize,
    mats: Vec<Vec<Vec<u32>>>,
}

impl VectorForm {
    /// Validates `mats` (reduced, zero diagonal, `M[j][i] = −M[i][j]`).
    pub fn new(p: u32, r: u32, mats: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        let modulus = Self::check_modulus(p, r)?;
        let k = mats.len();
        if k == 0 {
            return Err(Error::shape("a form needs at least one component"));
        }
        let n = mats[0].len();
        if n == 0 {
            return Err(Error::shape("forms on a zero-dimensional space"));
        }
        for (c, m) in mats.iter().enumerate() {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::shape(format!("component {c} is not {n}x{n}")));
            }
            for i in 0..n {
                if m[i].iter().any(|&x| x >= modulus) {
                    return Err(Error::shape(format!(
                        "component {c} has an entry outside [0, {modulus})"
                    )));
                }
                if m[i][i] != 0 {
                    return Err(Error::NotAlternating(format!(
                        "component {c} has a nonzero diagonal entry at {i}"
                    )));
                }
                for j in i + 1..n {
                    if m[j][i] != negmod(m[i][j], modulus) {
                        return Err(Error::NotAlternating(format!(
                            "component {c}: entry ({j},{i}) is not the negative of ({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(VectorForm {
            p,
            r,
            modulus,
            n,
            k,
            mats,
        })
    }

    fn check_modulus(p: u32, r: u32) -> Result<u32> {
        if !is_prime(p as u64) {
            return Err(Error::ModulusNotPrime(p as u64));
        }
        if r == 0 {
            return Err(Error::InvalidArgument("r must be positive".into()));
        }
        (p as u64)
            .checked_pow(r)
            .filter(|&m| m < 1 << 31)
            .map(|m| m as u32)
            .ok_or(Error::InvalidModulus(p as u64))
    }

    /// Builds the form from its strict upper triangles; other entries of
    /// `mats` are ignored.
    pub fn from_upper(p: u32, r: u32, mats: &[Vec<Vec<u32>>]) -> Result<Self> {
        let modulus = Self::check_modulus(p, r)?;
        let n = mats.first().map_or(0, |m| m.len());
        let full = mats
            .iter()
            .map(|m| {
                if m.len() != n || m.iter().any(|row| row.len() != n) {
                    return Err(Error::shape(format!("component is not {n}x{n}")));
                }
                let mut out = vec![vec![0u32; n]; n];
                for i in 0..n {
                    for j in i + 1..n {
                        let v = m[i][j] % modulus;
                        out[i][j] = v;
                        out[j][i] = negmod(v, modulus);
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        VectorForm::new(p, r, full)
    }

    pub fn zero(p: u32, r: u32, n: usize, k: usize) -> Result<Self> {
        VectorForm::new(p, r, vec![vec![vec![0; n]; n]; k])
    }

    /// `k = 1`, `n = 2m`, with `φ(e_{2i}, e_{2i+1}) = 1`.
    pub fn symplectic(p: u32, r: u32, m: usize) -> Result<Self> {
        let n = 2 * m;
        let mut upper = vec![vec![0u32; n]; n];
        for i in 0..m {
            upper[2 * i][2 * i + 1] = 1;
        }
        VectorForm::from_upper(p, r, &[upper])
    }

    /// Upper-triangle entries drawn uniformly from `Z/p^r`.
    pub fn random<R: Rng + ?Sized>(p: u32, r: u32, n: usize, k: usize, rng: &mut R) -> Result<Self> {
        let modulus = Self::check_modulus(p, r)?;
        let mats: Vec<Vec<Vec<u32>>> = (0..k)
            .map(|_| {
                let mut m = vec![vec![0u32; n]; n];
                for i in 0..n {
                    for j in i + 1..n {
                        m[i][j] = rng.gen_range(0..modulus);
                    }
                }
                m
            })
            .collect();
        VectorForm::from_upper(p, r, &mats)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mats(&self) -> &[Vec<Vec<u32>>] {
        &self.mats
    }

    /// `M_c[i][j]`.
    pub fn entry(&self, c: usize, i: usize, j: usize) -> u32 {
        self.mats[c][i][j]
    }

    /// `φ(e_i, e_j)` as a vector in `B`.
    pub fn value(&self, i: usize, j: usize) -> Vec<u32> {
        (0..self.k).map(|c| self.mats[c][i][j]).collect()
    }

    pub fn reduce_mod_p(&self) -> VectorForm {
        let mats = self
            .mats
            .iter()
            .map(|m| {
                m.iter()
                    .map(|row| row.iter().map(|&x| x % self.p).collect())
                    .collect()
            })
            .collect();
        VectorForm::new(self.p, 1, mats).expect("reduction of an alternating form is alternating")
    }

    /// `q(a, a′)` (strict upper triangle).
    fn product(&self, a: &[u32], a2: &[u32]) -> Vec<u32> {
        let m = self.modulus;
        (0..self.k)
            .map(|c| {
                let mc = &self.mats[c];
                let mut acc = 0u64;
                for i in 0..self.n {
                    if a[i] == 0 {
                        continue;
                    }
                    let mut row = 0u64;
                    for j in i + 1..self.n {
                        row += a2[j] as u64 * mc[i][j] as u64;
                    }
                    acc = (acc + (row % m as u64) * a[i] as u64) % m as u64;
                }
                acc as u32
            })
            .collect()
    }

    /// `Σ_{i,j} a_i a′_j M_c[i][j]` over the full matrix.
    pub fn evaluate(&self, a: &[u32], a2: &[u32]) -> Vec<u32> {
        let m = self.modulus as u64;
        (0..self.k)
            .map(|c| {
                let mc = &self.mats[c];
                let mut acc = 0u64;
                for i in 0..self.n {
                    let mut row = 0u64;
                    for j in 0..self.n {
                        row += a2[j] as u64 * mc[i][j] as u64;
                    }
                    acc = (acc + (row % m) * a[i] as u64) % m;
                }
                acc as u32
            })
            .collect()
    }
}

/// `(a, b) ∈ A ⊕ B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NilRingElement {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl NilRingElement {
    pub fn zero(form: &VectorForm) -> Self {
        NilRingElement {
            a: vec![0; form.n],
            b: vec![0; form.k],
        }
    }

    /// `(e_i, 0)`.
    pub fn basis_a(form: &VectorForm, i: usize) -> Self {
        let mut s = NilRingElement::zero(form);
        s.a[i] = 1;
        s
    }

    /// `(0, e_c)`.
    pub fn basis_b(form: &VectorForm, c: usize) -> Self {
        let mut s = NilRingElement::zero(form);
        s.b[c] = 1;
        s
    }

    pub fn random<R: Rng + ?Sized>(form: &VectorForm, rng: &mut R) -> Self {
        let m = form.modulus;
        NilRingElement {
            a: (0..form.n).map(|_| rng.gen_range(0..m)).collect(),
            b: (0..form.k).map(|_| rng.gen_range(0..m)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(&self.b).all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self, m: u32) -> Self {
        NilRingElement {
            a: self.a.iter().zip(&other.a).map(|(&x, &y)| addmod(x, y, m)).collect(),
            b: self.b.iter().zip(&other.b).map(|(&x, &y)| addmod(x, y, m)).collect(),
        }
    }

    pub fn neg(&self, m: u32) -> Self {
        NilRingElement {
            a: self.a.iter().map(|&x| negmod(x, m)).collect(),
            b: self.b.iter().map(|&x| negmod(x, m)).collect(),
        }
    }

    pub fn scale(&self, c: u64, m: u32) -> Self {
        let c = (c % m as u64) as u32;
        NilRingElement {
            a: self.a.iter().map(|&x| mulmod(x, c, m)).collect(),
            b: self.b.iter().map(|&x| mulmod(x, c, m)).collect(),
        }
    }

    fn check(&self, form: &VectorForm) -> Result<()> {
        if self.a.len() != form.n || self.b.len() != form.k {
            return Err(Error::shape(format!(
                "element with |a| = {}, |b| = {} for a form with n = {}, k = {}",
                self.a.len(),
                self.b.len(),
                form.n,
                form.k
            )));
        }
        if self.a.iter().chain(&self.b).any(|&x| x >= form.modulus) {
            return Err(Error::shape("element entry not reduced"));
        }
        Ok(())
    }
}

/// `s · t = (0, q(s.a, t.a))`.
pub fn ring_mul(s: &NilRingElement, t: &NilRingElement, form: &VectorForm) -> NilRingElement {
    NilRingElement {
        a: vec![0; form.n],
        b: form.product(&s.a, &t.a),
    }
}

/// The group element `1 + s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub s: NilRingElement,
}

impl GroupElement {
    pub fn identity(form: &VectorForm) -> Self {
        GroupElement {
            s: NilRingElement::zero(form),
        }
    }

    pub fn new(s: NilRingElement, form: &VectorForm) -> Result<Self> {
        s.check(form)?;
        Ok(GroupElement { s })
    }

    pub fn is_identity(&self) -> bool {
        self.s.is_zero()
    }

    /// Lies in `N = 1 + B`.
    pub fn in_b(&self) -> bool {
        self.s.a.iter().all(|&x| x == 0)
    }
}

/// `(1 + s)(1 + t) = 1 + s + t + st`.
pub fn group_mul(g: &GroupElement, h: &GroupElement, form: &VectorForm) -> GroupElement {
    let m = form.modulus;
    GroupElement {
        s: g.s.add(&h.s, m).add(&ring_mul(&g.s, &h.s, form), m),
    }
}

/// `(1 + s)^{-1} = 1 − s + s²`.
pub fn group_inv(g: &GroupElement, form: &VectorForm) -> GroupElement {
    let m = form.modulus;
    GroupElement {
        s: g.s.neg(m).add(&ring_mul(&g.s, &g.s, form), m),
    }
}

/// `g⁻¹ h⁻¹ g h`, which equals `1 + st − ts`.
pub fn commutator(g: &GroupElement, h: &GroupElement, form: &VectorForm) -> GroupElement {
    let gi = group_inv(g, form);
    let hi = group_inv(h, form);
    let c = group_mul(&group_mul(&gi, &hi, form), &group_mul(g, h, form), form);
    debug_assert_eq!(c, commutator_formula(g, h, form));
    c
}

/// `1 + st − ts`.
pub fn commutator_formula(g: &GroupElement, h: &GroupElement, form: &VectorForm) -> GroupElement {
    let m = form.modulus;
    let st = ring_mul(&g.s, &h.s, form);
    let ts = ring_mul(&h.s, &g.s, form);
    GroupElement {
        s: st.add(&ts.neg(m), m),
    }
}

/// `(1 + s)^e = 1 + e·s + C(e, 2)·s²`, exact because `s³ = 0`.
pub fn group_pow(g: &GroupElement, e: u64, form: &VectorForm) -> GroupElement {
    let m = form.modulus;
    let e128 = e as u128;
    let binom = if e < 2 { 0 } else { e128 * (e128 - 1) / 2 };
    let binom = (binom % m as u128) as u64;
    let s2 = ring_mul(&g.s, &g.s, form);
    GroupElement {
        s: g.s.scale(e, m).add(&s2.scale(binom, m), m),
    }
}

/// `1 + s ↦ 1 + (s mod p)`, into the group of `form.reduce_mod_p()`.
pub fn reduce_mod_p(g: &GroupElement, form: &VectorForm) -> GroupElement {
    let p = form.p;
    GroupElement {
        s: NilRingElement {
            a: g.s.a.iter().map(|&x| x % p).collect(),
            b: g.s.b.iter().map(|&x| x % p).collect(),
        },
    }
}

/// Lifts a form over `F_p` to `Z/p^r` using the representatives `0..p` on
/// the upper triangle.
pub fn lift_form(form: &VectorForm, r: u32) -> Result<VectorForm> {
    if form.r != 1 {
        return Err(Error::InvalidArgument(format!(
            "lift expects a form over F_p, got modulus {}",
            form.modulus
        )));
    }
    VectorForm::from_upper(form.p, r, &form.mats)
}

/// `G/N ≅ C_{p^r}^n` for `N = 1 + B`: each `1 + e_i` has order exactly
/// `p^r` modulo `N`, and the images commute.
pub fn quotient_type_check(form: &VectorForm) -> bool {
    let pr = form.modulus as u64;
    let pr1 = pr / form.p as u64;
    let gens: Vec<GroupElement> = (0..form.n)
        .map(|i| GroupElement {
            s: NilRingElement::basis_a(form, i),
        })
        .collect();
    let orders_ok = gens.iter().all(|g| {
        group_pow(g, pr, form).in_b() && !group_pow(g, pr1, form).in_b()
    });
    let commute = gens
        .iter()
        .all(|g| gens.iter().all(|h| commutator(g, h, form).in_b()));
    orders_ok && commute
}

/// `1 + s` and `1 + t` commute iff the full form vanishes on `(s.a, t.a)`.
pub fn commutes_by_form(g: &GroupElement, h: &GroupElement, form: &VectorForm) -> bool {
    form.evaluate(&g.s.a, &h.s.a).iter().all(|&x| x == 0)
}

/// `[1 + e_i, 1 + e_j] = 1 + φ(e_i, e_j)` for every `i < j`.
pub fn basis_commutators_check(form: &VectorForm) -> bool {
    let g = |i| GroupElement {
        s: NilRingElement::basis_a(form, i),
    };
    (0..form.n).all(|i| {
        (i + 1..form.n).all(|j| {
            let c = commutator(&g(i), &g(j), form);
            c.in_b() && c.s.b == form.value(i, j)
        })
    })
}

/// `(1 + p·s)^{p^{r−1}} = 1` for `samples` random `s`, drawn from a ChaCha8
/// stream seeded with `seed`.
pub fn kernel_exponent_check(form: &VectorForm, samples: u64, seed: u64) -> bool {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let e = (form.modulus / form.p) as u64;
    (0..samples).all(|_| {
        let s = NilRingElement::random(form, &mut rng).scale(form.p as u64, form.modulus);
        group_pow(&GroupElement { s }, e, form).is_identity()
    })
}

/// Every element of `G`, for tiny parameters only.
pub fn enumerate_group(form: &VectorForm, limit: usize) -> Result<Vec<GroupElement>> {
    let len = form.n + form.k;
    let count = (form.modulus as usize)
        .checked_pow(len as u32)
        .filter(|&c| c <= limit)
        .ok_or_else(|| Error::TooLarge(format!("|G| = {}^{len}", form.modulus)))?;
    let mut v = vec![0u32; len];
    let mut out = Vec::with_capacity(count);
    loop {
        out.push(GroupElement {
            s: NilRingElement {
                a: v[..form.n].to_vec(),
                b: v[form.n..].to_vec(),
            },
        });
        if !crate::exactla::increment(&mut v, form.modulus) {
            break;
        }
    }
    Ok(out)
}
