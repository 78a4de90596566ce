//! Square-zero ideals of small codimension in commutative matrix algebras.
//!
//! Given a commutative algebra `𝒜` of `n × n` matrices over `F_p` whose
//! common kernel has dimension `k`, [`extract_zero_ideal`] returns an ideal
//! `ℬ ⊴ 𝒜` with `ℬ² = 0` and `codim(ℬ, 𝒜) ≤ n − k`.
//!
//! The construction shrinks a chain of ideals `𝒜 = 𝒜_0 > 𝒜_1 > …`. At step
//! `i` a vector `x ∉ ker(𝒜_i²)` is fixed, and `𝒜_{i+1}` is the set of
//! `a ∈ 𝒜_i` with `a(x) ∈ U_i ∩ V_i`, where `U_i = ker(𝒜_i)` and
//! `V_i = 𝒜_i(x)`. Each step removes `m_i = codim(U_i ∩ V_i, V_i) ≥ 1`
//! dimensions from the algebra and adds at least as many to its kernel,
//! so the chain stops after at most `n − k` reductions.
//!
//! Every step is recorded in a [`ZeroIdealCertificate`] that
//! [`verify_certificate`] re-checks without rerunning the reduction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{codim, preimage, unit_vector, Matrix, PrimeModulus};
use crate::matalg::MatAlgebra;

/// One reduction `𝒜_i → 𝒜_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepRecord {
    #[serde(rename = "i")]
    pub index: usize,
    /// `codim(𝒜_i, 𝒜)`.
    pub l: usize,
    /// Index `j` of the standard basis vector `x = e_j`.
    pub x_index: usize,
    /// `codim(U_i ∩ V_i, V_i)`.
    pub m: usize,
    /// `dim ker(𝒜_i)`.
    pub dim_ker: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZeroIdealCertificate {
    pub n: usize,
    pub p: u32,
    pub dim_a: usize,
    pub k: usize,
    pub steps: Vec<StepRecord>,
    pub output: MatAlgebra,
    pub final_codim: usize,
}

/// Extracts a square-zero ideal of codimension at most `n − dim ker(𝒜)`.
///
/// The vector `x` at each step is the standard basis vector of smallest
/// index outside `ker(𝒜_i²)`, which makes runs reproducible.
pub fn extract_zero_ideal(alg: &MatAlgebra) -> Result<(MatAlgebra, ZeroIdealCertificate)> {
    if !alg.is_commutative() {
        return Err(Error::NonCommutativeInput);
    }
    if !alg.is_closed() {
        return Err(Error::NotClosedInput);
    }
    let n = alg.n();
    let p = alg.modulus();
    let k = alg.common_kernel().dim();
    let mut current = alg.clone();
    let mut steps = Vec::new();
    let mut l = 0usize;

    loop {
        let ker_sq = current.square()?.common_kernel();
        if ker_sq.is_full() {
            break;
        }
        let index = steps.len();
        if index >= n - k {
            return Err(Error::invariant(format!(
                "step {index} exceeds the n - k = {} bound",
                n - k
            )));
        }
        let x_index = (0..n)
            .find(|&j| !ker_sq.contains(&unit_vector(n, j)))
            .ok_or_else(|| Error::invariant("proper kernel contains every e_j"))?;
        let x = unit_vector(n, x_index);

        let u = current.common_kernel();
        let v = current.image_of_vector(&x)?;
        let w = u.intersect(&v)?;
        let m = codim(&w, &v)?;
        let dim_ker = u.dim();
        if m == 0 {
            return Err(Error::invariant(format!("step {index}: m_i = 0")));
        }
        if dim_ker < l + k {
            return Err(Error::invariant(format!(
                "step {index}: dim ker = {dim_ker} < l + k = {}",
                l + k
            )));
        }

        let next = pull_back(&current, &x, &w, p)?;
        if codim(next.space(), current.space())? != m {
            return Err(Error::invariant(format!(
                "step {index}: codim(A_(i+1), A_i) != m_i"
            )));
        }
        let next_ker = next.common_kernel();
        if !u.sum(&v)?.is_subspace_of(&next_ker) {
            return Err(Error::invariant(format!(
                "step {index}: U_i + V_i not inside ker(A_(i+1))"
            )));
        }

        steps.push(StepRecord {
            index,
            l,
            x_index,
            m,
            dim_ker,
        });
        l += m;
        current = next;
    }

    let final_codim = codim(current.space(), alg.space())?;
    if final_codim != l || final_codim > n - k {
        return Err(Error::invariant(format!(
            "final codimension {final_codim} (chain total {l}, bound {})",
            n - k
        )));
    }
    if !current.is_ideal_of(alg) || !current.is_square_zero() {
        return Err(Error::invariant("output is not a square-zero ideal"));
    }
    let cert = ZeroIdealCertificate {
        n,
        p: p.get(),
        dim_a: alg.dim(),
        k,
        steps,
        output: current.clone(),
        final_codim,
    };
    Ok((current, cert))
}

/// `φ_x^{-1}(w)` for `φ_x : a ↦ a(x)` on `current`, as a subalgebra.
fn pull_back(
    current: &MatAlgebra,
    x: &[u32],
    w: &crate::exactla::Subspace,
    p: PrimeModulus,
) -> Result<MatAlgebra> {
    let n = current.n();
    let basis = current.basis();
    let images = basis
        .iter()
        .map(|b| b.apply(x))
        .collect::<Result<Vec<_>>>()?;
    // Column c of φ_x is b_c(x), so φ_x · coeffs = (Σ coeffs_c b_c)(x).
    let phi = Matrix::from_fn(p.get(), n, basis.len(), |r, c| images[c][r] as u64);
    let coeffs = preimage(&phi, w)?;
    let members: Vec<Matrix> = coeffs
        .basis()
        .iter()
        .map(|c| {
            let v = current.space().combination(c);
            Matrix::from_fn(p.get(), n, n, |i, j| v[i * n + j] as u64)
        })
        .collect();
    MatAlgebra::from_span(p, n, &members).map_err(|e| match e {
        Error::NotClosedInput => Error::invariant("pulled-back ideal is not closed"),
        other => other,
    })
}

/// Re-checks a certificate against `alg`: the step chain, the output's
/// ideal and square-zero properties, and the codimension bound.
pub fn verify_certificate(alg: &MatAlgebra, cert: &ZeroIdealCertificate) -> bool {
    let n = alg.n();
    if cert.n != n || cert.p != alg.modulus().get() || cert.dim_a != alg.dim() {
        return false;
    }
    let k = alg.common_kernel().dim();
    if cert.k != k || cert.steps.len() > n - k {
        return false;
    }
    let mut l = 0usize;
    for (i, s) in cert.steps.iter().enumerate() {
        let ok = s.index == i
            && s.l == l
            && s.m >= 1
            && s.x_index < n
            && s.dim_ker >= s.l + k
            && (i > 0 || s.dim_ker == k);
        if !ok {
            return false;
        }
        l += s.m;
    }
    if cert.final_codim != l || l > n - k {
        return false;
    }
    let b = &cert.output;
    if b.n() != n || b.modulus() != alg.modulus() {
        return false;
    }
    match codim(b.space(), alg.space()) {
        Ok(c) if c == cert.final_codim => {}
        _ => return false,
    }
    b.is_ideal_of(alg) && b.is_square_zero()
}

/// JSON form of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub n: usize,
    pub p: u32,
    #[serde(rename = "dim_A")]
    pub dim_a: usize,
    pub k: usize,
    pub steps: Vec<StepRecord>,
    #[serde(rename = "dim_B")]
    pub dim_b: usize,
    pub codim: usize,
    pub checks: CertificateChecks,
    /// Basis of `ℬ` as `n × n` integer matrices.
    #[serde(rename = "basis_B")]
    pub basis_b: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateChecks {
    pub ideal: bool,
    pub square_zero: bool,
    pub bound: bool,
}

impl ZeroIdealCertificate {
    pub fn report(&self, alg: &MatAlgebra) -> CertificateReport {
        let b = &self.output;
        CertificateReport {
            n: self.n,
            p: self.p,
            dim_a: self.dim_a,
            k: self.k,
            steps: self.steps.clone(),
            dim_b: b.dim(),
            codim: self.final_codim,
            checks: CertificateChecks {
                ideal: b.is_ideal_of(alg),
                square_zero: b.is_square_zero(),
                bound: self.final_codim + self.k <= self.n,
            },
            basis_b: b
                .basis()
                .iter()
                .map(|m| (0..m.rows()).map(|i| m.row(i).to_vec()).collect())
                .collect(),
        }
    }

    /// Rebuilds a certificate from its JSON form. Only shape errors are
    /// reported here; mathematical validity is [`verify_certificate`]'s job.
    pub fn from_report(report: &CertificateReport) -> Result<Self> {
        let p = PrimeModulus::new(report.p as u64)?;
        let mats = report
            .basis_b
            .iter()
            .map(|rows| Matrix::from_rows(report.p, rows))
            .collect::<Result<Vec<_>>>()?;
        let output = match MatAlgebra::from_span(p, report.n, &mats) {
            Ok(b) => b,
            // An unclosed span cannot be square-zero; keep it so verification fails.
            Err(Error::NotClosedInput) => MatAlgebra::from_span_unchecked(p, report.n, &mats)?,
            Err(e) => return Err(e),
        };
        Ok(ZeroIdealCertificate {
            n: report.n,
            p: report.p,
            dim_a: report.dim_a,
            k: report.k,
            steps: report.steps.clone(),
            output,
            final_codim: report.codim,
        })
    }
}
