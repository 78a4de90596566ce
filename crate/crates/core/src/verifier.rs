//! Explicit example families, each built as a matrix group and measured by
//! enumeration. Every builder returns a [`Report`] pairing the value a
//! closed formula predicts with the value enumeration measures.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_table, format_ratio, Q};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, PrimeModulus};
use crate::group::FiniteMatrixGroup;
use crate::smallgrp::{normal_elementary_abelian, small_group_ranks, CayleyTable, SmallGroupRanks};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    AtMost,
    Holds,
    /// Recorded without being asserted.
    Reported,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub relation: Relation,
    pub expected: String,
    pub measured: String,
    pub ok: bool,
}

impl Check {
    pub fn equal(name: impl Into<String>, expected: Q, measured: Q) -> Self {
        Check {
            name: name.into(),
            relation: Relation::Equal,
            expected: format_ratio(&expected),
            measured: format_ratio(&measured),
            ok: expected == measured,
        }
    }

    pub fn at_most(name: impl Into<String>, bound: Q, measured: Q) -> Self {
        Check {
            name: name.into(),
            relation: Relation::AtMost,
            expected: format_ratio(&bound),
            measured: format_ratio(&measured),
            ok: measured <= bound,
        }
    }

    pub fn holds(name: impl Into<String>, value: bool) -> Self {
        Check {
            name: name.into(),
            relation: Relation::Holds,
            expected: "true".into(),
            measured: value.to_string(),
            ok: value,
        }
    }

    pub fn reported(name: impl Into<String>, formula: Q, measured: Q) -> Self {
        Check {
            name: name.into(),
            relation: Relation::Reported,
            expected: format_ratio(&formula),
            measured: format_ratio(&measured),
            ok: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub family: String,
    pub params: Vec<(String, u64)>,
    pub checks: Vec<Check>,
    pub ok: bool,
}

impl Report {
    fn new(family: &str, params: &[(&str, u64)]) -> Self {
        Report {
            family: family.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            checks: Vec::new(),
            ok: true,
        }
    }

    fn push(&mut self, c: Check) {
        self.ok &= c.ok;
        self.checks.push(c);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn qi(x: impl Into<i64>) -> Q {
    Q::from_integer(x.into())
}

fn field(p: u32) -> Result<PrimeModulus> {
    PrimeModulus::new(p as u64)
}

/// `I + E_{ij}`.
fn elementary(p: u32, n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::identity(p, n);
    m.set(i, j, 1);
    m
}

/// Self-centralizing and normal: the certificate used for maximality of a
/// normal abelian subgroup.
fn push_maximality(
    r: &mut Report,
    name: &str,
    g: &FiniteMatrixGroup,
    a: &FiniteMatrixGroup,
) -> Result<()> {
    r.push(Check::holds(format!("{name} normal"), g.is_normal(a)?));
    let c = g.centralizer(a)?;
    r.push(Check::holds(format!("{name} self-centralizing"), c.same_elements(a)?));
    Ok(())
}

pub struct SemidirectExample {
    pub m: usize,
    pub p: u32,
    pub k: u32,
    pub group: FiniteMatrixGroup,
    pub v: FiniteMatrixGroup,
    pub v1_h: FiniteMatrixGroup,
    pub report: Report,
}

/// `G = V ⋊ H` with `V = F_p^{2m}` and `H` the maps fixing `V_1` (the first
/// `m` coordinates) and acting trivially on `V/V_1`, realized as affine
/// matrices `[[h, v], [0, 1]]` in `GL(2m+1, p)`.
pub fn build_example_semidirect(m: usize, p: u32, cap: usize) -> Result<SemidirectExample> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let f = field(p)?;
    let dim = 2 * m + 1;
    let translation = |i: usize| elementary(p, dim, i, 2 * m);
    let h_gens: Vec<Matrix> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| elementary(p, dim, i, m + j))
        .collect();
    let v_gens: Vec<Matrix> = (0..2 * m).map(translation).collect();
    let mut g_gens = v_gens.clone();
    g_gens.extend(h_gens.iter().cloned());
    let mut v1h_gens: Vec<Matrix> = (0..m).map(translation).collect();
    v1h_gens.extend(h_gens);

    let group = FiniteMatrixGroup::new(f, dim, g_gens)?.with_cap(cap);
    let v = group.subgroup(&v_gens)?;
    let v1_h = group.subgroup(&v1h_gens)?;
    let k = (2 * m) as u32;
    let table = bound_table(k, None)?;

    let mut r = Report::new("example_semidirect", &[("m", m as u64), ("p", p as u64)]);
    r.push(Check::equal(
        "log_p |G|",
        qi((2 * m + m * m) as i64),
        qi(group.log_order()?),
    ));
    r.push(Check::equal("d(V)", qi(k), qi(v.rank()?)));
    r.push(Check::equal(
        "d(V1 x H)",
        *table.get("semidirect_example_rank").expect("present"),
        qi(v1_h.rank()?),
    ));
    r.push(Check::holds("V elementary abelian", v.is_elementary_abelian()?));
    r.push(Check::holds(
        "V1 x H elementary abelian",
        v1_h.is_elementary_abelian()?,
    ));
    push_maximality(&mut r, "V", &group, &v)?;
    push_maximality(&mut r, "V1 x H", &group, &v1_h)?;
    Ok(SemidirectExample {
        m,
        p,
        k,
        group,
        v,
        v1_h,
        report: r,
    })
}

pub struct PatternExample {
    pub n: usize,
    pub p: u32,
    pub group: FiniteMatrixGroup,
    pub phi: FiniteMatrixGroup,
    /// The normal subgroup supported on rows above the middle row; it is
    /// elementary abelian and self-centralizing.
    pub e: FiniteMatrixGroup,
    pub report: Report,
}

/// Unipotent matrices `1 + Σ a_{ij} E_{ij}` with `a_{ij} = 0` unless
/// `i ≤ h ≤ j` (1-based), `h = ⌈n/2⌉`.
pub fn build_pattern_group(n: usize, p: u32, cap: usize) -> Result<PatternExample> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    let f = field(p)?;
    let h = n.div_ceil(2);
    // 0-based: allowed (i, j) with i < j, i ≤ h−1 ≤ j.
    let allowed: Vec<(usize, usize)> = (0..h)
        .flat_map(|i| ((h - 1).max(i + 1)..n).map(move |j| (i, j)))
        .collect();
    let gens: Vec<Matrix> = allowed.iter().map(|&(i, j)| elementary(p, n, i, j)).collect();
    let e_gens: Vec<Matrix> = allowed
        .iter()
        .filter(|&&(i, _)| i < h - 1)
        .map(|&(i, j)| elementary(p, n, i, j))
        .collect();
    let group = FiniteMatrixGroup::new(f, n, gens)?.with_cap(cap);
    let e = group.subgroup(&e_gens)?;

    let mut r = Report::new("pattern_group", &[("n", n as u64), ("p", p as u64)]);
    r.push(Check::equal(
        "log_p |G|",
        qi((h * (n - h + 1) - 1) as i64),
        qi(group.log_order()?),
    ));
    let phi = group.frattini()?;
    let derived = group.derived_subgroup()?;
    let center = group.center()?;
    r.push(Check::holds("Phi(G) = G'", phi.same_elements(&derived)?));
    r.push(Check::holds("G' = Z(G)", derived.same_elements(&center)?));
    let fl = (n / 2) as i64;
    let cl = h as i64;
    r.push(Check::equal("d(Phi(G))", qi(fl * (cl - 1)), qi(phi.rank()?)));
    r.push(Check::holds("E elementary abelian", e.is_elementary_abelian()?));
    push_maximality(&mut r, "E", &group, &e)?;
    Ok(PatternExample {
        n,
        p,
        group,
        phi,
        e,
        report: r,
    })
}

/// Upper unitriangular group `UT(n, p)`, a Sylow `p`-subgroup of `GL(n, p)`.
pub fn unitriangular(n: usize, p: u32, cap: usize) -> Result<FiniteMatrixGroup> {
    let gens = (0..n.saturating_sub(1))
        .map(|i| elementary(p, n, i, i + 1))
        .collect();
    Ok(FiniteMatrixGroup::new(field(p)?, n, gens)?.with_cap(cap))
}

pub struct SylowFrattini {
    pub d_phi: u32,
    pub report: Report,
}

/// `d(Φ(UT(n, p)))`, asserted equal to `2n − 5` for `n ∈ {4, 5}` and only
/// reported otherwise.
pub fn sylow_frattini_check(n: usize, p: u32, cap: usize) -> Result<SylowFrattini> {
    if n < 3 {
        return Err(Error::InvalidArgument("n must be at least 3".into()));
    }
    let g = unitriangular(n, p, cap)?;
    let d_phi = g.frattini()?.rank()?;
    let mut r = Report::new("sylow_frattini", &[("n", n as u64), ("p", p as u64)]);
    let formula = qi(2 * n as i64 - 5);
    if (4..=5).contains(&n) {
        r.push(Check::equal("d(Phi(G))", formula, qi(d_phi)));
    } else {
        r.push(Check::reported("d(Phi(G))", formula, qi(d_phi)));
    }
    Ok(SylowFrattini { d_phi, report: r })
}

fn permutation(images: &[usize]) -> Matrix {
    let n = images.len();
    Matrix::from_fn(2, n, n, |i, j| (images[j] == i) as u64)
}

/// `D_16` acting on the vertices `Z/8` of an octagon: `r: i ↦ i+1`,
/// `s: i ↦ −i`.
pub fn dihedral16() -> Result<FiniteMatrixGroup> {
    let r = permutation(&(0..8).map(|i| (i + 1) % 8).collect::<Vec<_>>());
    let s = permutation(&(0..8).map(|i| (8 - i) % 8).collect::<Vec<_>>());
    FiniteMatrixGroup::new(field(2)?, 8, vec![r, s])
}

pub struct D16Evidence {
    pub ranks: SmallGroupRanks,
    pub max_normal_elementary_rank: u32,
    pub max_elementary_rank: u32,
    pub square_witness_rank: u32,
    pub square_center_rank: u32,
    pub report: Report,
}

pub fn build_d16_power_evidence() -> Result<D16Evidence> {
    let g = dihedral16()?;
    let t = CayleyTable::from_group(&g, 64)?;
    let mut r = Report::new("d16", &[]);
    r.push(Check::equal("|G|", qi(16), qi(g.order()? as i64)));

    let max_normal_elementary_rank = normal_elementary_abelian(&t)?
        .iter()
        .map(|h| t.rank(h))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let max_elementary_rank = t
        .all_subgroups()?
        .iter()
        .filter(|h| t.is_elementary_abelian(h))
        .map(|h| t.rank(h))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    r.push(Check::equal(
        "max rank of a normal elementary abelian subgroup",
        qi(1),
        qi(max_normal_elementary_rank),
    ));
    r.push(Check::equal(
        "max rank of an elementary abelian subgroup",
        qi(2),
        qi(max_elementary_rank),
    ));

    let gens = g.generators();
    let (rot, refl) = (&gens[0], &gens[1]);
    let r4 = rot.pow(4)?;
    let klein = g.subgroup(&[r4.clone(), refl.clone()])?;
    r.push(Check::holds("<r^4, s> elementary abelian", klein.is_elementary_abelian()?));
    r.push(Check::equal("d(<r^4, s>)", qi(2), qi(klein.rank()?)));
    r.push(Check::holds("<r^4, s> not normal", !g.is_normal(&klein)?));

    let ranks = small_group_ranks(&g, 64)?;
    r.push(Check::holds("nr <= r <= sr", ranks.nr <= ranks.r && ranks.r <= ranks.sr));

    // D16 x D16 as block-diagonal 16 x 16 matrices.
    let id = Matrix::identity(2, 8);
    let left = |x: &Matrix| Matrix::block_diagonal(&[x.clone(), id.clone()]);
    let right = |x: &Matrix| Matrix::block_diagonal(&[id.clone(), x.clone()]);
    let f2 = field(2)?;
    let witness = FiniteMatrixGroup::new(
        f2,
        16,
        vec![left(&r4)?, left(refl)?, right(&r4)?, right(refl)?],
    )?;
    let centers = FiniteMatrixGroup::new(f2, 16, vec![left(&r4)?, right(&r4)?])?;
    let square = FiniteMatrixGroup::new(
        f2,
        16,
        vec![left(rot)?, left(refl)?, right(rot)?, right(refl)?],
    )?;
    r.push(Check::holds("witness inside D16^2", witness.is_subgroup_of(&square)?));
    r.push(Check::holds(
        "witness elementary abelian",
        witness.is_elementary_abelian()?,
    ));
    let square_witness_rank = witness.rank()?;
    let square_center_rank = centers.rank()?;
    r.push(Check::equal("d(witness)", qi(4), qi(square_witness_rank)));
    r.push(Check::equal("d(Z(D16) x Z(D16))", qi(2), qi(square_center_rank)));
    r.push(Check::holds(
        "Z(D16^2) = Z(D16) x Z(D16)",
        square.center()?.same_elements(&centers)?,
    ));

    Ok(D16Evidence {
        ranks,
        max_normal_elementary_rank,
        max_elementary_rank,
        square_witness_rank,
        square_center_rank,
        report: r,
    })
}

/// The bound checks that apply to a `p`-group `G ≤ GL(n, p)` with a chosen
/// maximal elementary abelian normal subgroup of rank `k`. `subgroups` are
/// further subgroups whose rank is tested, and `abelian` abelian subgroups
/// whose Frattini rank is tested.
fn push_bound_checks(
    r: &mut Report,
    g: &FiniteMatrixGroup,
    k: u32,
    subgroups: &[(&str, &FiniteMatrixGroup)],
    abelian: &[(&str, &FiniteMatrixGroup)],
) -> Result<()> {
    let p = g.modulus().get();
    let n = g.n() as u32;
    let t = bound_table(k, None)?;
    let tn = bound_table(0, Some(n))?;
    let mut all = vec![("G", g)];
    all.extend_from_slice(subgroups);
    for (name, h) in &all {
        let d = qi(h.rank()?);
        r.push(Check::at_most(
            format!("d({name}) vs n^2/4"),
            *tn.get("p_subgroup_gl").expect("present"),
            d,
        ));
        if p == 2 {
            r.push(Check::at_most(
                format!("d({name}) vs k^2 + k(k+1)/2"),
                *t.get("sr_even_classical").expect("present"),
                d,
            ));
            r.push(Check::at_most(
                format!("d({name}) vs 2k + k^2/4"),
                *t.get("subgroup_rank_even").expect("present"),
                d,
            ));
        } else {
            r.push(Check::at_most(
                format!("d({name}) vs k(k+1)/2"),
                *t.get("sr_odd_classical").expect("present"),
                d,
            ));
            r.push(Check::at_most(
                format!("d({name}) vs k(k+4)/4"),
                *t.get("sr_odd_improved").expect("present"),
                d,
            ));
        }
    }
    if p == 2 {
        let index_log = g.log_order()? - g.mho_1()?.log_order()?;
        r.push(Check::at_most(
            "log_2 |G : mho_1(G)| vs k(k+5)/2",
            *t.get("mho_index_exponent_even").expect("present"),
            qi(index_log),
        ));
    }
    let key = if p == 2 { "d_phi_abelian_even" } else { "d_phi_abelian_odd" };
    for (name, a) in abelian {
        let d_phi = a.frattini()?.rank()?;
        r.push(Check::at_most(
            format!("d(Phi({name}))"),
            *t.get(key).expect("present"),
            qi(d_phi),
        ));
    }
    Ok(())
}

fn sanity_semidirect(m: usize, p: u32, cap: usize) -> Result<Report> {
    let ex = build_example_semidirect(m, p, cap)?;
    let mut r = ex.report;
    r.family = "sanity_example_semidirect".into();
    // V is normal, elementary abelian and self-centralizing, hence a maximal
    // elementary abelian normal subgroup.
    push_bound_checks(
        &mut r,
        &ex.group,
        ex.k,
        &[("V1 x H", &ex.v1_h), ("V", &ex.v)],
        &[("V1 x H", &ex.v1_h)],
    )?;
    Ok(r)
}

fn sanity_pattern(n: usize, p: u32, cap: usize) -> Result<Report> {
    let ex = build_pattern_group(n, p, cap)?;
    let mut r = ex.report;
    r.family = "sanity_pattern_group".into();
    let k = ex.e.rank()?;
    let tn = bound_table(0, Some(n as u32))?;
    r.push(Check::at_most(
        "d(G) vs n^2/4 + 1",
        *tn.get("subgroup_gl").expect("present"),
        qi(ex.group.rank()?),
    ));
    push_bound_checks(
        &mut r,
        &ex.group,
        k,
        &[("Phi(G)", &ex.phi), ("E", &ex.e)],
        &[("Phi(G)", &ex.phi)],
    )?;
    Ok(r)
}

fn sanity_unitriangular(n: usize, p: u32, cap: usize) -> Result<Report> {
    let g = unitriangular(n, p, cap)?;
    let a = n / 2;
    let e_gens: Vec<Matrix> = (0..a)
        .flat_map(|i| (a..n).map(move |j| (i, j)))
        .map(|(i, j)| elementary(p, n, i, j))
        .collect();
    let e = g.subgroup(&e_gens)?;
    let mut r = Report::new("sanity_unitriangular", &[("n", n as u64), ("p", p as u64)]);
    r.push(Check::holds("E elementary abelian", e.is_elementary_abelian()?));
    push_maximality(&mut r, "E", &g, &e)?;
    let k = e.rank()?;
    r.push(Check::equal("d(E)", qi((a * (n - a)) as i64), qi(k)));
    let phi = g.frattini()?;
    push_bound_checks(&mut r, &g, k, &[("Phi(G)", &phi)], &[("E", &e)])?;
    Ok(r)
}

fn sanity_d16() -> Result<Report> {
    let ev = build_d16_power_evidence()?;
    let mut r = ev.report;
    r.family = "sanity_d16".into();
    let k = ev.max_normal_elementary_rank;
    let t = bound_table(k, None)?;
    r.push(Check::at_most(
        "sr(D16) vs k^2 + k(k+1)/2",
        *t.get("sr_even_classical").expect("present"),
        qi(ev.ranks.sr),
    ));
    r.push(Check::at_most(
        "sr(D16) vs 2k + k^2/4",
        *t.get("subgroup_rank_even").expect("present"),
        qi(ev.ranks.sr),
    ));
    let g = dihedral16()?;
    let index_log = g.log_order()? - g.mho_1()?.log_order()?;
    r.push(Check::at_most(
        "log_2 |G : mho_1(G)| vs k(k+5)/2",
        *t.get("mho_index_exponent_even").expect("present"),
        qi(index_log),
    ));
    let rot = g.subgroup(&g.generators()[..1])?;
    r.push(Check::at_most(
        "d(Phi(<r>)) vs 3k",
        *t.get("d_phi_abelian_even").expect("present"),
        qi(rot.frattini()?.rank()?),
    ));
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub reports: Vec<Report>,
    pub ok: bool,
}

/// Runs every family at desk-scale parameters and checks each applicable
/// bound on each instance. Families run in parallel; the report order is
/// fixed.
pub fn sanity_suite(cap: usize) -> Result<SuiteReport> {
    enum Job {
        Semidirect(usize, u32),
        Pattern(usize, u32),
        Unitriangular(usize, u32),
        D16,
    }
    let jobs = vec![
        Job::Semidirect(1, 2),
        Job::Semidirect(2, 2),
        Job::Semidirect(2, 3),
        Job::Pattern(4, 2),
        Job::Pattern(5, 2),
        Job::Pattern(6, 2),
        Job::Pattern(4, 3),
        Job::Unitriangular(4, 2),
        Job::Unitriangular(5, 2),
        Job::Unitriangular(4, 3),
        Job::D16,
    ];
    let reports = jobs
        .par_iter()
        .map(|j| match *j {
            Job::Semidirect(m, p) => sanity_semidirect(m, p, cap),
            Job::Pattern(n, p) => sanity_pattern(n, p, cap),
            Job::Unitriangular(n, p) => sanity_unitriangular(n, p, cap),
            Job::D16 => sanity_d16(),
        })
        .collect::<Result<Vec<_>>>()?;
    let ok = reports.iter().all(|r| r.ok);
    Ok(SuiteReport { reports, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_ENUM_CAP;

    #[test]
    fn semidirect_m1() {
        let ex = build_example_semidirect(1, 2, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(ex.group.order().unwrap(), 8);
        assert!(ex.report.ok, "{:#?}", ex.report);
        assert_eq!(ex.report.check("d(V1 x H)").unwrap().measured, "2");
    }

    #[test]
    fn pattern_n4() {
        let ex = build_pattern_group(4, 2, DEFAULT_ENUM_CAP).unwrap();
        assert!(ex.report.ok, "{:#?}", ex.report);
        assert_eq!(ex.report.check("d(Phi(G))").unwrap().measured, "2");
    }

    #[test]
    fn sylow_n4() {
        assert_eq!(sylow_frattini_check(4, 2, DEFAULT_ENUM_CAP).unwrap().d_phi, 3);
        let r = sylow_frattini_check(3, 2, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(r.report.checks[0].relation, Relation::Reported);
    }

    #[test]
    fn d16() {
        let ev = build_d16_power_evidence().unwrap();
        assert!(ev.report.ok, "{:#?}", ev.report);
        assert_eq!(ev.ranks, SmallGroupRanks { r: 2, nr: 1, sr: 2 });
    }

    #[test]
    fn cap_exceeded() {
        assert!(matches!(
            build_example_semidirect(2, 2, 100),
            Err(Error::CapExceeded { cap: 100 })
        ));
    }
}
