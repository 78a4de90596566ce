//! Generators and brute-force oracles shared by the integration tests.
//! The oracles use plain `Vec<u64>` arithmetic and never call into the
//! library's linear algebra.
#![allow(dead_code)]

use std::collections::BTreeSet;

use pgrl::matalg::{generate_algebra, MatAlgebra};
use pgrl::nilring::VectorForm;
use pgrl::Matrix;
use rand::Rng;

pub type Mat = Vec<Vec<u64>>;

pub fn to_mat(m: &Matrix) -> Mat {
    (0..m.rows()).map(|i| m.row(i).iter().map(|&x| x as u64).collect()).collect()
}

pub fn mat_mul(p: u64, a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let mut c = vec![vec![0u64; m]; n];
    for i in 0..n {
        for (t, brow) in b.iter().enumerate() {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                c[i][j] = (c[i][j] + x * brow[j]) % p;
            }
        }
    }
    c
}

pub fn mat_pow(p: u64, a: &Mat, mut e: u64) -> Mat {
    let n = a.len();
    let mut r: Mat = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
    let mut b = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            r = mat_mul(p, &r, &b);
        }
        b = mat_mul(p, &b, &b);
        e >>= 1;
    }
    r
}

pub fn is_identity(a: &Mat) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == (i == j) as u64))
}

pub fn flatten(a: &Mat) -> Vec<u64> {
    a.iter().flatten().copied().collect()
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank over `F_p` by straightforward Gaussian elimination.
pub fn rank(p: u64, rows: &[Vec<u64>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p - f * m[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn in_span(p: u64, span: &[Vec<u64>], v: &[u64]) -> bool {
    let mut with = span.to_vec();
    with.push(v.to_vec());
    rank(p, span) == rank(p, &with)
}

/// All vectors of `F_p^len` in lexicographic order.
pub fn all_vectors(p: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn random_matrix<R: Rng>(rng: &mut R, p: u32, n: usize) -> Matrix {
    let data = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
    Matrix::new(p, n, n, data).unwrap()
}

/// A random matrix with a forced kernel: strictly upper triangular with
/// probability 1/3, otherwise a random matrix with some zeroed columns.
fn random_generator<R: Rng>(rng: &mut R, p: u32, n: usize) -> Matrix {
    let mut m = random_matrix(rng, p, n);
    match rng.gen_range(0..3) {
        0 => {
            for i in 0..n {
                for j in 0..=i {
                    m.set(i, j, 0);
                }
            }
        }
        1 => {
            for j in 0..n {
                if rng.gen_bool(0.3) {
                    for i in 0..n {
                        m.set(i, j, 0);
                    }
                }
            }
        }
        _ => {}
    }
    m
}

fn embed(m: &Matrix, offset: usize, n: usize) -> Matrix {
    let p = m.modulus();
    let mut out = Matrix::zeros(p, n, n);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(offset + i, offset + j, m.get(i, j) as u64);
        }
    }
    out
}

/// A random commutative algebra in `Hom(F_p^n)`: polynomials in one random
/// matrix, or a direct sum of two such algebras on complementary blocks.
pub fn random_commutative_algebra<R: Rng>(rng: &mut R, p: u32, n: usize) -> MatAlgebra {
    let unital = rng.gen_bool(0.5);
    if n >= 2 && rng.gen_bool(0.4) {
        let n1 = rng.gen_range(1..n);
        let a = random_generator(rng, p, n1);
        let b = random_generator(rng, p, n - n1);
        let gens = [embed(&a, 0, n), embed(&b, n1, n)];
        generate_algebra(&gens, unital).unwrap()
    } else {
        generate_algebra(&[random_generator(rng, p, n)], unital).unwrap()
    }
}

/// Elements of a subspace of `F_p^len` spanned by `gens`, as a sorted set.
pub fn span_set(p: u64, len: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut set = BTreeSet::new();
    set.insert(vec![0; len]);
    for g in gens {
        let current: Vec<Vec<u64>> = set.iter().cloned().collect();
        for v in current {
            for c in 1..p {
                let w: Vec<u64> = v.iter().zip(g).map(|(x, y)| (x + c * y) % p).collect();
                set.insert(w);
            }
        }
    }
    set
}

/// Every subspace of the span of `basis` (vectors of length `len`), each as
/// its element set.
pub fn all_subspaces(p: u64, len: usize, basis: &[Vec<u64>]) -> BTreeSet<BTreeSet<Vec<u64>>> {
    let elements: Vec<Vec<u64>> = span_set(p, len, basis).into_iter().collect();
    let mut out = BTreeSet::new();
    fn grow(
        p: u64,
        len: usize,
        elements: &[Vec<u64>],
        start: usize,
        gens: &mut Vec<Vec<u64>>,
        depth: usize,
        out: &mut BTreeSet<BTreeSet<Vec<u64>>>,
    ) {
        out.insert(span_set(p, len, gens));
        if depth == 0 {
            return;
        }
        for i in start..elements.len() {
            gens.push(elements[i].clone());
            grow(p, len, elements, i + 1, gens, depth - 1, out);
            gens.pop();
        }
    }
    grow(p, len, &elements, 1, &mut Vec::new(), basis.len(), &mut out);
    out
}

fn unflatten(v: &[u64], n: usize) -> Mat {
    v.chunks(n).map(|c| c.to_vec()).collect()
}

/// Largest dimension of a square-zero ideal of the algebra spanned by
/// `basis` (flattened `n × n` matrices), by checking every subspace.
pub fn max_square_zero_ideal_dim(p: u64, n: usize, basis: &[Vec<u64>]) -> usize {
    let mats: Vec<Mat> = basis.iter().map(|b| unflatten(b, n)).collect();
    let mut best = 0;
    for sub in all_subspaces(p, n * n, basis) {
        let els: Vec<Mat> = sub.iter().map(|v| unflatten(v, n)).collect();
        let ideal = els.iter().all(|b| {
            mats.iter()
                .all(|a| sub.contains(&flatten(&mat_mul(p, a, b))) && sub.contains(&flatten(&mat_mul(p, b, a))))
        });
        let square_zero = els
            .iter()
            .all(|b| els.iter().all(|c| mat_mul(p, b, c).iter().flatten().all(|&x| x == 0)));
        if ideal && square_zero {
            let d = (sub.len() as f64).log(p as f64).round() as usize;
            best = best.max(d);
        }
    }
    best
}

/// Full alternating evaluation of a form over `F_p` (`r = 1`).
pub fn form_value(form: &VectorForm, x: &[u64], y: &[u64]) -> Vec<u64> {
    let p = form.p() as u64;
    let n = form.n();
    (0..form.k())
        .map(|c| {
            let mut s = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    let m = form.entry(c, i, j) as u64 % p;
                    s += m * (x[i] * y[j] % p) % p;
                    s += (p - m) % p * (x[j] * y[i] % p) % p;
                }
            }
            s % p
        })
        .collect()
}

/// Maximum dimension of a totally isotropic subspace, by searching for the
/// largest set of linearly independent, pairwise orthogonal vectors among
/// normalized representatives (first nonzero coordinate 1).
pub fn clique_max_isotropic_dim(form: &VectorForm) -> usize {
    let p = form.p() as u64;
    let n = form.n();
    let reps: Vec<Vec<u64>> = all_vectors(p, n)
        .into_iter()
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect();
    let orth = |a: &[u64], b: &[u64]| form_value(form, a, b).iter().all(|&x| x == 0);
    fn search(
        p: u64,
        reps: &[Vec<u64>],
        orth: &dyn Fn(&[u64], &[u64]) -> bool,
        start: usize,
        chosen: &mut Vec<Vec<u64>>,
        best: &mut usize,
    ) {
        *best = (*best).max(chosen.len());
        for i in start..reps.len() {
            let v = &reps[i];
            if in_span(p, chosen, v) || !chosen.iter().all(|c| orth(c, v)) {
                continue;
            }
            chosen.push(v.clone());
            search(p, reps, orth, i + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = 0;
    search(p, &reps, &orth, 0, &mut Vec::new(), &mut best);
    best
}

/// Ring product in `S = A ⊕ B` over `Z/m`: `(a, b)(a', b') = (0, Σ_{i<j} a_i a'_j M_ij)`.
pub fn nil_mul(form: &VectorForm, s: &(Vec<u64>, Vec<u64>), t: &(Vec<u64>, Vec<u64>)) -> (Vec<u64>, Vec<u64>) {
    let m = form.modulus() as u64;
    let n = form.n();
    let b = (0..form.k())
        .map(|c| {
            let mut acc = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    acc = (acc + s.0[i] * t.0[j] % m * form.entry(c, i, j) as u64) % m;
                }
            }
            acc
        })
        .collect();
    (vec![0; n], b)
}

pub fn nil_add(m: u64, s: &(Vec<u64>, Vec<u64>), t: &(Vec<u64>, Vec<u64>)) -> (Vec<u64>, Vec<u64>) {
    let add = |x: &[u64], y: &[u64]| x.iter().zip(y).map(|(a, b)| (a + b) % m).collect();
    (add(&s.0, &t.0), add(&s.1, &t.1))
}

pub fn nil_neg(m: u64, s: &(Vec<u64>, Vec<u64>)) -> (Vec<u64>, Vec<u64>) {
    let neg = |x: &[u64]| x.iter().map(|a| (m - a) % m).collect();
    (neg(&s.0), neg(&s.1))
}

/// `(1 + s)(1 + t) = 1 + s + t + st`.
pub fn unit_mul(form: &VectorForm, s: &(Vec<u64>, Vec<u64>), t: &(Vec<u64>, Vec<u64>)) -> (Vec<u64>, Vec<u64>) {
    let m = form.modulus() as u64;
    nil_add(m, &nil_add(m, s, t), &nil_mul(form, s, t))
}

/// `(1 + s)^{-1} = 1 − s + s²`.
pub fn unit_inv(form: &VectorForm, s: &(Vec<u64>, Vec<u64>)) -> (Vec<u64>, Vec<u64>) {
    let m = form.modulus() as u64;
    nil_add(m, &nil_neg(m, s), &nil_mul(form, s, s))
}

pub fn unit_commutator(
    form: &VectorForm,
    s: &(Vec<u64>, Vec<u64>),
    t: &(Vec<u64>, Vec<u64>),
) -> (Vec<u64>, Vec<u64>) {
    let si = unit_inv(form, s);
    let ti = unit_inv(form, t);
    unit_mul(form, &unit_mul(form, &si, &ti), &unit_mul(form, s, t))
}

/// Closure of `gens` under multiplication, as a set of flattened matrices.
pub fn group_closure(p: u64, gens: &[Mat]) -> BTreeSet<Vec<u64>> {
    let n = gens[0].len();
    let id: Mat = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
    let mut set = BTreeSet::new();
    set.insert(flatten(&id));
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mat_mul(p, &x, g);
            if set.insert(flatten(&y)) {
                frontier.push(y);
            }
        }
    }
    set
}
