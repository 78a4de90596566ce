//! Subalgebras of `n × n` matrices over `F_p`.
//!
//! An algebra is held as a subspace of `F_p^{n²}` (row-major vectorization),
//! so its basis is canonical and equality is structural.

use crate::error::{Error, Result};
use crate::exactla::{kernel, Matrix, PrimeModulus, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatAlgebra {
    n: usize,
    space: Subspace,
    unital: bool,
}

fn to_matrix(p: PrimeModulus, n: usize, v: &[u32]) -> Matrix {
    Matrix::from_fn(p.get(), n, n, |i, j| v[i * n + j] as u64)
}

fn check_generators(gens: &[Matrix]) -> Result<(PrimeModulus, usize)> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Shape("at least one generator is required".into()))?;
    if !first.is_square() {
        return Err(Error::Shape("generators must be square".into()));
    }
    let (m, n) = (first.modulus(), first.rows());
    if let Some(g) = gens
        .iter()
        .find(|g| g.modulus() != m || g.rows() != n || g.cols() != n)
    {
        return Err(Error::Shape(format!(
            "generator {}x{} mod {} does not match {n}x{n} mod {m}",
            g.rows(),
            g.cols(),
            g.modulus()
        )));
    }
    Ok((PrimeModulus::new(m as u64)?, n))
}

impl MatAlgebra {
    fn from_space(n: usize, space: Subspace) -> Self {
        let unital = space.contains(&Matrix::identity(space.modulus().get(), n).vectorize());
        MatAlgebra { n, space, unital }
    }

    /// The span of `mats`, which must already be closed under multiplication.
    pub fn from_span(p: PrimeModulus, n: usize, mats: &[Matrix]) -> Result<Self> {
        let alg = MatAlgebra::from_span_unchecked(p, n, mats)?;
        if !alg.is_closed() {
            return Err(Error::NotClosedInput);
        }
        Ok(alg)
    }

    /// The span of `mats` without the closure check. Used to hold untrusted
    /// data (such as a certificate being verified) long enough to reject it.
    pub fn from_span_unchecked(p: PrimeModulus, n: usize, mats: &[Matrix]) -> Result<Self> {
        if mats
            .iter()
            .any(|m| m.modulus() != p.get() || m.rows() != n || m.cols() != n)
        {
            return Err(Error::Shape(format!("expected {n}x{n} matrices mod {p}")));
        }
        let space = Subspace::span(p, n * n, mats.iter().map(Matrix::vectorize))?;
        Ok(MatAlgebra::from_space(n, space))
    }

    pub fn zero(p: PrimeModulus, n: usize) -> Self {
        MatAlgebra::from_space(n, Subspace::zero(p, n * n))
    }

    pub fn full(p: PrimeModulus, n: usize) -> Self {
        MatAlgebra::from_space(n, Subspace::full(p, n * n))
    }

    /// All diagonal matrices.
    pub fn diagonal(p: PrimeModulus, n: usize) -> Self {
        let units: Vec<Matrix> = (0..n).map(|i| Matrix::unit(p.get(), n, i, i)).collect();
        MatAlgebra::from_span(p, n, &units).expect("diagonal matrices form an algebra")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.space.modulus()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn unital(&self) -> bool {
        self.unital
    }

    /// The vectorized span inside `F_p^{n²}`.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn basis(&self) -> Vec<Matrix> {
        let p = self.modulus();
        self.space
            .basis()
            .iter()
            .map(|v| to_matrix(p, self.n, v))
            .collect()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.modulus() == self.modulus().get()
            && m.rows() == self.n
            && m.cols() == self.n
            && self.space.contains(m.data())
    }

    /// Every element of the algebra; at most `limit` of them.
    pub fn elements(&self, limit: usize) -> Result<Vec<Matrix>> {
        let p = self.modulus();
        Ok(self
            .space
            .elements(limit)?
            .iter()
            .map(|v| to_matrix(p, self.n, v))
            .collect())
    }

    fn products(&self) -> Vec<Vec<u32>> {
        let basis = self.basis();
        let mut out = Vec::with_capacity(basis.len() * basis.len());
        for a in &basis {
            for b in &basis {
                out.push((a * b).vectorize());
            }
        }
        out
    }

    /// Whether the product of every pair of basis elements lies in the span.
    pub fn is_closed(&self) -> bool {
        self.products().iter().all(|v| self.space.contains(v))
    }

    pub fn is_commutative(&self) -> bool {
        let basis = self.basis();
        basis.iter().enumerate().all(|(i, a)| {
            basis[i + 1..].iter().all(|b| a * b == b * a)
        })
    }

    /// `𝒜²`: the span of all products. The span of products of a closed span
    /// is itself closed; a failure of that check means corrupted input.
    pub fn square(&self) -> Result<MatAlgebra> {
        let space = Subspace::span(self.modulus(), self.n * self.n, self.products())?;
        let sq = MatAlgebra::from_space(self.n, space);
        if !sq.is_closed() {
            return Err(Error::invariant("product span of an algebra is not closed"));
        }
        Ok(sq)
    }

    /// `ker(𝒜) = {v : a v = 0 for all a ∈ 𝒜}`.
    pub fn common_kernel(&self) -> Subspace {
        let p = self.modulus();
        let basis = self.basis();
        if basis.is_empty() {
            return Subspace::full(p, self.n);
        }
        let rows: Vec<Vec<u32>> = basis
            .iter()
            .flat_map(|b| (0..self.n).map(move |i| b.row(i).to_vec()))
            .collect();
        let stacked = Matrix::from_rows(p.get(), &rows).expect("stacked basis is well formed");
        kernel(&stacked).expect("common kernel of a valid algebra")
    }

    /// `𝒜(x) = {a(x) : a ∈ 𝒜}`, the span of the basis applied to `x`.
    pub fn image_of_vector(&self, x: &[u32]) -> Result<Subspace> {
        if x.len() != self.n {
            return Err(Error::Shape(format!(
                "vector of length {} for {}x{} matrices",
                x.len(),
                self.n,
                self.n
            )));
        }
        let images = self
            .basis()
            .iter()
            .map(|b| b.apply(x))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(self.modulus(), self.n, images)
    }

    /// Whether `self` is a two-sided ideal of `alg`.
    pub fn is_ideal_of(&self, alg: &MatAlgebra) -> bool {
        if self.n != alg.n || self.modulus() != alg.modulus() {
            return false;
        }
        if !self.space.is_subspace_of(&alg.space) {
            return false;
        }
        let mine = self.basis();
        let theirs = alg.basis();
        mine.iter().all(|b| {
            theirs
                .iter()
                .all(|a| self.contains(&(a * b)) && self.contains(&(b * a)))
        })
    }

    /// Whether every product of two elements vanishes.
    pub fn is_square_zero(&self) -> bool {
        let basis = self.basis();
        basis.iter().all(|a| basis.iter().all(|b| (a * b).is_zero()))
    }
}

/// The smallest multiplication-closed subspace containing `gens` (and the
/// identity when `include_identity`), by iterating "append all pairwise
/// basis products, re-canonicalize" to a fixpoint.
pub fn generate_algebra(gens: &[Matrix], include_identity: bool) -> Result<MatAlgebra> {
    let (p, n) = check_generators(gens)?;
    let mut seeds: Vec<Vec<u32>> = gens.iter().map(Matrix::vectorize).collect();
    if include_identity {
        seeds.push(Matrix::identity(p.get(), n).vectorize());
    }
    let mut alg = MatAlgebra::from_space(n, Subspace::span(p, n * n, seeds)?);
    loop {
        let grown = Subspace::span(
            p,
            n * n,
            alg.space.basis().iter().cloned().chain(alg.products()),
        )?;
        if grown.dim() == alg.dim() {
            return Ok(alg);
        }
        alg = MatAlgebra::from_space(n, grown);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn jordan_alg() -> MatAlgebra {
        generate_algebra(&[Matrix::nilpotent_jordan(2, 3)], false).unwrap()
    }

    #[test]
    fn generate_examples() {
        let id = Matrix::identity(2, 3);
        let a = generate_algebra(std::slice::from_ref(&id), false).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(a.unital());
        assert!(a.contains(&id));

        let j = Matrix::nilpotent_jordan(2, 3);
        let a = jordan_alg();
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&j));
        assert!(a.contains(&(&j * &j)));
        assert!(!a.unital());

        let d = Matrix::diagonal(3, &[1, 2]);
        let a = generate_algebra(std::slice::from_ref(&d), true).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&Matrix::identity(3, 2)));
        assert!(a.contains(&d));
    }

    #[test]
    fn generate_rejects_mixed_shapes() {
        let err = generate_algebra(&[Matrix::identity(2, 2), Matrix::identity(2, 3)], false);
        assert!(matches!(err, Err(Error::Shape(_))));
        let err = generate_algebra(&[Matrix::identity(2, 2), Matrix::identity(3, 2)], false);
        assert!(matches!(err, Err(Error::Shape(_))));
        assert!(generate_algebra(&[], true).is_err());
        assert!(matches!(
            generate_algebra(&[Matrix::identity(4, 2)], true),
            Err(Error::ModulusNotPrime(4))
        ));
    }

    #[test]
    fn commutativity() {
        assert!(MatAlgebra::diagonal(f(3), 3).is_commutative());
        assert!(!MatAlgebra::full(f(2), 2).is_commutative());
        assert!(jordan_alg().is_commutative());
    }

    #[test]
    fn square_examples() {
        let e12 = MatAlgebra::from_span(f(2), 2, &[Matrix::unit(2, 2, 0, 1)]).unwrap();
        assert_eq!(e12.square().unwrap().dim(), 0);

        let j = Matrix::nilpotent_jordan(2, 3);
        let sq = jordan_alg().square().unwrap();
        assert_eq!(sq, MatAlgebra::from_span(f(2), 3, &[&j * &j]).unwrap());

        let d = MatAlgebra::diagonal(f(5), 4);
        assert_eq!(d.square().unwrap(), d);
    }

    #[test]
    fn common_kernel_examples() {
        let d = MatAlgebra::diagonal(f(3), 3);
        assert!(d.unital());
        assert!(d.common_kernel().is_zero());
        assert!(MatAlgebra::zero(f(2), 3).common_kernel().is_full());
        assert_eq!(
            jordan_alg().common_kernel(),
            Subspace::span(f(2), 3, [vec![1, 0, 0]]).unwrap()
        );
    }

    #[test]
    fn image_of_vector_examples() {
        let a = jordan_alg();
        assert!(a.image_of_vector(&[0, 0, 0]).unwrap().is_zero());
        assert_eq!(
            a.image_of_vector(&[0, 0, 1]).unwrap(),
            Subspace::span(f(2), 3, [vec![1, 0, 0], vec![0, 1, 0]]).unwrap()
        );
        let u = MatAlgebra::diagonal(f(3), 2);
        assert!(u.image_of_vector(&[1, 2]).unwrap().contains(&[1, 2]));
        assert!(a.image_of_vector(&[1, 0]).is_err());
    }

    #[test]
    fn ideal_examples() {
        let d = MatAlgebra::diagonal(f(2), 2);
        assert!(d.is_ideal_of(&d));
        assert!(MatAlgebra::zero(f(2), 2).is_ideal_of(&d));
        let scalars = MatAlgebra::from_span(f(2), 2, &[Matrix::identity(2, 2)]).unwrap();
        assert!(!scalars.is_ideal_of(&d));
    }

    #[test]
    fn from_span_rejects_unclosed() {
        // span{E12, E21} is not closed: E12·E21 = E11.
        let mats = [Matrix::unit(2, 2, 0, 1), Matrix::unit(2, 2, 1, 0)];
        assert_eq!(MatAlgebra::from_span(f(2), 2, &mats), Err(Error::NotClosedInput));
    }
}
