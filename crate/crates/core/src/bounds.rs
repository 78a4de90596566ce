//! Exact values of the numeric rank bounds, as functions of `k` (rank of a
//! maximal elementary abelian normal subgroup) and optionally `n`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn frac(a: i64, b: i64) -> Q {
    Q::new(a, b)
}

/// Renders `a/b`, or `a` for integers.
pub fn format_ratio(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub statement: String,
    pub value: String,
    #[serde(skip)]
    pub exact: Q,
}

impl BoundEntry {
    fn new(name: &str, statement: &str, exact: Q) -> Self {
        BoundEntry {
            name: name.into(),
            statement: statement.into(),
            value: format_ratio(&exact),
            exact,
        }
    }
}

/// `k²/4 + 1 + k(n−k) = nk − 3k²/4 + 1 ≤ n²/3 + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutChain {
    pub left: String,
    pub middle: String,
    pub right: String,
    pub left_equals_middle: bool,
    pub middle_at_most_right: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTable {
    pub k: u32,
    pub n: Option<u32>,
    pub entries: Vec<BoundEntry>,
    pub aut_chain: Option<AutChain>,
    /// `k(k−1) > 2n`, the hypothesis of the isotropic-form construction.
    pub form_condition: Option<bool>,
}

impl BoundTable {
    pub fn get(&self, name: &str) -> Option<&Q> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.exact)
    }

    pub fn ok(&self) -> bool {
        self.aut_chain
            .as_ref()
            .is_none_or(|c| c.left_equals_middle && c.middle_at_most_right)
    }
}

pub fn bound_table(k: u32, n: Option<u32>) -> Result<BoundTable> {
    if let Some(n) = n {
        if k > n {
            return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
        }
    }
    let kk = k as i64;
    let mut entries = vec![
        BoundEntry::new(
            "sr_odd_classical",
            "sr(G) <= k(k+1)/2 for p odd",
            frac(kk * (kk + 1), 2),
        ),
        BoundEntry::new(
            "sr_odd_improved",
            "sr(G) <= k(k+4)/4 for p odd",
            frac(kk * (kk + 4), 4),
        ),
        BoundEntry::new(
            "sr_even_classical",
            "sr(G) <= k^2 + k(k+1)/2 for p = 2",
            q(kk * kk) + frac(kk * (kk + 1), 2),
        ),
        BoundEntry::new(
            "subgroup_rank_even",
            "d(H) <= 2k + k^2/4 for every H <= G, p = 2",
            q(2 * kk) + frac(kk * kk, 4),
        ),
        BoundEntry::new(
            "mho_index_exponent_even",
            "log_2 |G : mho_1(G)| <= k(k+5)/2 for p = 2",
            frac(kk * (kk + 5), 2),
        ),
        BoundEntry::new(
            "d_phi_abelian_odd",
            "d(Phi(A)) <= 2k for abelian A <= G, p odd",
            q(2 * kk),
        ),
        BoundEntry::new(
            "d_phi_abelian_even",
            "d(Phi(A)) <= 3k for abelian A <= G, p = 2",
            q(3 * kk),
        ),
        BoundEntry::new(
            "elementary_rank_subgroups",
            "d(H) <= k^2/4 + 2k + 1 when every elementary abelian subgroup has rank <= k",
            frac(kk * kk, 4) + q(2 * kk + 1),
        ),
        BoundEntry::new(
            "semidirect_example_rank",
            "d(V_1 x H) = k^2/4 + k/2 in the semidirect example (k even)",
            frac(kk * kk, 4) + frac(kk, 2),
        ),
    ];
    let mut aut_chain = None;
    let mut form_condition = None;
    if let Some(n) = n {
        let nn = n as i64;
        entries.extend([
            BoundEntry::new(
                "p_subgroup_gl",
                "d(P) <= n^2/4 for a p-subgroup P <= GL(n,p)",
                frac(nn * nn, 4),
            ),
            BoundEntry::new(
                "subgroup_gl",
                "d(H) <= n^2/4 + 1 for H <= GL(n,p)",
                frac(nn * nn, 4) + q(1),
            ),
            BoundEntry::new(
                "sr_aut",
                "sr(Aut(G)) <= n^2/3 + 1 for |G| = p^n",
                frac(nn * nn, 3) + q(1),
            ),
            BoundEntry::new(
                "zero_ideal_codim",
                "codim(B, A) <= n - k for a commutative A <= Hom(F_p^n) with dim ker A = k",
                q(nn - kk),
            ),
        ]);
        let left = frac(kk * kk, 4) + q(1) + q(kk * (nn - kk));
        let middle = q(nn * kk) - frac(3 * kk * kk, 4) + q(1);
        let right = frac(nn * nn, 3) + q(1);
        aut_chain = Some(AutChain {
            left: format_ratio(&left),
            middle: format_ratio(&middle),
            right: format_ratio(&right),
            left_equals_middle: left == middle,
            middle_at_most_right: middle <= right,
        });
        form_condition = Some(kk * (kk - 1) > 2 * nn);
    }
    Ok(BoundTable {
        k,
        n,
        entries,
        aut_chain,
        form_condition,
    })
}
