//! Totally isotropic subspaces of alternating `F_p^k`-valued forms.
//!
//! Because the form is alternating, `W + ⟨v⟩` is isotropic for isotropic `W`
//! exactly when `v ∈ W^⊥ = {v : φ(w, v) = 0 ∀ w ∈ W}`. The search extends
//! isotropic subspaces inside their perps and stops as soon as `dim W^⊥`
//! cannot beat the best dimension found.

use std::collections::{BTreeMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{enumerate_subspaces, increment, kernel, Matrix, PrimeModulus, Subspace};
use crate::nilring::VectorForm;

/// Largest `p^n` accepted by the exhaustive searches.
pub const MAX_SEARCH_SPACE: u64 = 1 << 24;

fn field_of(form: &VectorForm) -> Result<PrimeModulus> {
    if form.r() != 1 {
        return Err(Error::InvalidArgument(format!(
            "isotropy needs a form over F_p, got modulus {}",
            form.modulus()
        )));
    }
    PrimeModulus::new(form.p() as u64)
}

fn check_size(form: &VectorForm) -> Result<()> {
    match (form.p() as u64).checked_pow(form.n() as u32) {
        Some(s) if s <= MAX_SEARCH_SPACE => Ok(()),
        _ => Err(Error::TooLarge(format!(
            "{}^{} exceeds the exhaustive limit 2^24",
            form.p(),
            form.n()
        ))),
    }
}

/// `φ(a, a′)` using the full alternating matrices.
pub fn form_eval(form: &VectorForm, a: &[u32], a2: &[u32]) -> Vec<u32> {
    form.evaluate(a, a2)
}

pub fn is_totally_isotropic(form: &VectorForm, w: &Subspace) -> bool {
    let b = w.basis();
    (0..b.len()).all(|i| {
        (i + 1..b.len()).all(|j| form_eval(form, &b[i], &b[j]).iter().all(|&x| x == 0))
    })
}

/// `W^⊥`: solutions of `Σ_i w_i M_c[i][j] v_j = 0` for every basis vector `w`
/// and component `c`.
fn perp(form: &VectorForm, p: PrimeModulus, w: &Subspace) -> Result<Subspace> {
    let n = form.n();
    if w.is_zero() {
        return Ok(Subspace::full(p, n));
    }
    let pm = p.get() as u64;
    let mut rows = Vec::new();
    for b in w.basis() {
        for c in 0..form.k() {
            let row: Vec<u64> = (0..n)
                .map(|j| (0..n).map(|i| b[i] as u64 * form.entry(c, i, j) as u64).sum::<u64>() % pm)
                .collect();
            rows.push(row);
        }
    }
    let m = Matrix::from_fn(p.get(), rows.len(), n, |i, j| rows[i][j]);
    kernel(&m)
}

/// Maximum dimension of a totally isotropic subspace, with a witness.
pub fn max_isotropic_dim(form: &VectorForm) -> Result<(usize, Subspace)> {
    let p = field_of(form)?;
    check_size(form)?;
    let mut search = Search {
        form,
        p,
        best: Subspace::zero(p, form.n()),
        visited: HashSet::new(),
    };
    let start = Subspace::zero(p, form.n());
    search.visit(start)?;
    Ok((search.best.dim(), search.best))
}

struct Search<'a> {
    form: &'a VectorForm,
    p: PrimeModulus,
    best: Subspace,
    visited: HashSet<Subspace>,
}

impl Search<'_> {
    fn visit(&mut self, w: Subspace) -> Result<()> {
        if w.dim() > self.best.dim() {
            self.best = w.clone();
        }
        let perp = perp(self.form, self.p, &w)?;
        if perp.dim() <= self.best.dim() {
            return Ok(());
        }
        if perp.dim() == w.dim() {
            return Ok(());
        }
        // The perp itself may be isotropic, which settles this branch.
        if is_totally_isotropic(self.form, &perp) {
            if perp.dim() > self.best.dim() {
                self.best = perp;
            }
            return Ok(());
        }
        for v in extension_vectors(&perp, &w)? {
            let next = w.sum(&Subspace::span(self.p, self.form.n(), [&v])?)?;
            if self.visited.insert(next.clone()) {
                self.visit(next)?;
                if self.best.dim() >= perp.dim() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

/// Representatives of the lines of `outer / inner`: vectors of `outer`
/// reduced modulo `inner`, nonzero, with leading entry 1, in lexicographic
/// order of their coordinates.
fn extension_vectors(outer: &Subspace, inner: &Subspace) -> Result<Vec<Vec<u32>>> {
    let p = outer.modulus().get();
    let mut coords = vec![0u32; outer.dim()];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    while increment(&mut coords, p) {
        let v = inner.reduce(&outer.combination(&coords));
        let lead = match v.iter().find(|&&x| x != 0) {
            Some(&x) => x,
            None => continue,
        };
        if lead != 1 {
            continue;
        }
        if seen.insert(v.clone()) {
            out.push(v);
        }
    }
    out.sort();
    Ok(out)
}

/// The same maximum, by checking every subspace of `F_p^n`.
pub fn brute_force_max_isotropic_dim(form: &VectorForm) -> Result<usize> {
    let p = field_of(form)?;
    check_size(form)?;
    let all = enumerate_subspaces(p, form.n(), None, usize::MAX)?;
    Ok(all
        .iter()
        .filter(|w| is_totally_isotropic(form, w))
        .map(Subspace::dim)
        .max()
        .unwrap_or(0))
}

/// Whether some `d`-dimensional subspace is totally isotropic, by checking
/// all of them.
pub fn has_isotropic_subspace_of_dim(form: &VectorForm, d: usize) -> Result<bool> {
    let p = field_of(form)?;
    check_size(form)?;
    if d > form.n() {
        return Ok(false);
    }
    let all = enumerate_subspaces(p, form.n(), Some(d), usize::MAX)?;
    Ok(all.iter().any(|w| is_totally_isotropic(form, w)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: usize,
    pub k: usize,
    pub p: u32,
    pub trials: u64,
    pub seed: u64,
    /// Upper-triangular components of the best form, if any trial ran.
    pub best_form: Option<Vec<Vec<Vec<u32>>>>,
    pub best_max_isotropic_dim: Option<usize>,
    pub best_trial: Option<u64>,
    /// Maximum isotropic dimension ↦ number of trials.
    pub histogram: BTreeMap<usize, u64>,
    pub success: bool,
    /// The best form's value was re-derived by checking every subspace.
    pub exhaustive_confirmed: Option<bool>,
}

/// Samples `trials` forms and keeps the one with the smallest maximum
/// isotropic dimension. Trial `t` draws from a ChaCha8 stream keyed by
/// `(seed, t)`, so the report does not depend on scheduling.
pub fn random_form_search(
    n: usize,
    k: usize,
    p: u32,
    trials: u64,
    seed: u64,
    exhaustive: bool,
) -> Result<SearchReport> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("n and k must be positive".into()));
    }
    PrimeModulus::new(p as u64)?;
    check_size(&VectorForm::zero(p, 1, n, k)?)?;
    let results: Vec<(u64, VectorForm, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let form = VectorForm::random(p, 1, n, k, &mut rng)?;
            let (d, _) = max_isotropic_dim(&form)?;
            Ok((t, form, d))
        })
        .collect::<Result<_>>()?;
    let mut histogram = BTreeMap::new();
    for (_, _, d) in &results {
        *histogram.entry(*d).or_insert(0) += 1;
    }
    let best = results.iter().min_by_key(|(t, _, d)| (*d, *t));
    let exhaustive_confirmed = match (exhaustive, best) {
        (true, Some((_, form, d))) => Some(brute_force_max_isotropic_dim(form)? == *d),
        _ => None,
    };
    Ok(SearchReport {
        n,
        k,
        p,
        trials,
        seed,
        best_form: best.map(|(_, f, _)| upper_triangles(f)),
        best_max_isotropic_dim: best.map(|(_, _, d)| *d),
        best_trial: best.map(|(t, _, _)| *t),
        histogram,
        success: best.is_some_and(|(_, _, d)| *d < k),
        exhaustive_confirmed,
    })
}

fn upper_triangles(f: &VectorForm) -> Vec<Vec<Vec<u32>>> {
    f.mats()
        .iter()
        .map(|m| {
            m.iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, &x)| if j > i { x } else { 0 })
                        .collect()
                })
                .collect()
        })
        .collect()
}
