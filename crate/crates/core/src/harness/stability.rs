//! Slope bookkeeping for rank-one sheaves on `Y = X ∪ E`, with `E` a smooth
//! rational curve through three points of `X`, `g_X = 2k - 1`.
//!
//! `ω_Y` has degree 1 on `E` and `2 g_X + 1` on `X`, and `χ(F) = 1 - k`.
//! With `c` the number of points among `x, y, z` where `F` is invertible, the
//! subsheaves `F_E(-c)` and `F_X(-c points)` give
//! `deg F_E ≤ c - 2`, `deg F_X ≤ k + c - 1`, and `deg F_X = k + c - 2 - deg F_E`.

use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// Invertible at `x`, `y`, `z`.
    I,
    /// Invertible at two of the points.
    Ii,
    /// Invertible at one of the points.
    Iii,
    /// `F = F_E ⊕ F_X`.
    Iv,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::I, Case::Ii, Case::Iii, Case::Iv];

    pub fn invertible_points(self) -> i64 {
        match self {
            Case::I => 3,
            Case::Ii => 2,
            Case::Iii => 1,
            Case::Iv => 0,
        }
    }

    pub fn parse(s: &str) -> Result<Case> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Case::I),
            "ii" | "2" => Ok(Case::Ii),
            "iii" | "3" => Ok(Case::Iii),
            "iv" | "4" => Ok(Case::Iv),
            _ => Err(Error::Precondition(format!("unknown case {s:?}, expected i, ii, iii or iv"))),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "i",
            Case::Ii => "ii",
            Case::Iii => "iii",
            Case::Iv => "iv",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafProfile {
    pub k: i64,
    pub case: Case,
    pub deg_fe: i64,
    /// Checked against the χ-link when given.
    pub deg_fx: Option<i64>,
}

/// What an admissible profile forces on `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    /// `F_E = O_E` and `F_X` a base-point-free `g^1_{k+1}` whose fiber
    /// contains `x + y + z`.
    PencilThroughPoints,
    /// `F_X` has degree `k`: a `g^1_k`.
    PencilOfDegreeK,
    /// `F_E = O_E(-1)`: the points are base points and `F_X(-x-y-z)`, or its
    /// analogue, is a `g^1_{k-1}`.
    PencilOfDegreeKMinusOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityAudit {
    pub k: i64,
    pub g_x: i64,
    pub case: Case,
    pub deg_fe: i64,
    pub deg_fx: Option<i64>,
    /// `(1 - k) / (2 g_X + 2)`.
    pub mu_f: String,
    pub mu_sub_e: Option<String>,
    pub mu_sub_x: Option<String>,
    pub fe_bound: Option<i64>,
    pub fx_bound: Option<i64>,
    pub admissible: bool,
    pub conclusion: Option<Conclusion>,
    pub reason: String,
}

pub fn mu_f(k: i64) -> Ratio<i64> {
    Ratio::new(1 - k, 2 * (2 * k - 1) + 2)
}

fn floor(r: Ratio<i64>) -> i64 {
    r.floor().to_integer()
}

pub fn stability_audit(profile: &SheafProfile) -> Result<StabilityAudit> {
    let k = profile.k;
    if k < 2 {
        return Err(Error::Precondition(format!("k = {k}, the audit needs k ≥ 2")));
    }
    let g_x = 2 * k - 1;
    let mu = mu_f(k);
    let w_x = 2 * g_x + 1;
    let mut out = StabilityAudit {
        k,
        g_x,
        case: profile.case,
        deg_fe: profile.deg_fe,
        deg_fx: profile.deg_fx,
        mu_f: mu.to_string(),
        mu_sub_e: None,
        mu_sub_x: None,
        fe_bound: None,
        fx_bound: None,
        admissible: false,
        conclusion: None,
        reason: String::new(),
    };
    if profile.case == Case::Iv {
        // χ(F_E) ≤ χ(F)/4k and χ(F_X) ≤ χ(F)(4k-1)/4k sum to χ(F): equality
        let share = Ratio::new(1 - k, 4 * k);
        out.reason = format!("semistability forces χ(F_E) = {share}, not an integer");
        return Ok(out);
    }
    let c = profile.case.invertible_points();
    let deg_fx = k + c - 2 - profile.deg_fe;
    if let Some(given) = profile.deg_fx {
        if given != deg_fx {
            return Err(Error::Precondition(format!("deg F_X = {given} violates χ(F) = 1 - k, which forces deg F_X = {deg_fx}")));
        }
    }
    out.deg_fx = Some(deg_fx);
    let mu_e = Ratio::from_integer(profile.deg_fe - c + 1);
    let mu_x = Ratio::new(deg_fx - c + 1 - g_x, w_x);
    out.mu_sub_e = Some(mu_e.to_string());
    out.mu_sub_x = Some(mu_x.to_string());
    // integer χ(F_E(-c)) ≤ μ(F) and χ(F_X(-c)) ≤ μ(F) (2 g_X + 1)
    let fe_bound = floor(mu) + c - 1;
    let fx_bound = floor(mu * w_x) + c - 1 + g_x;
    out.fe_bound = Some(fe_bound);
    out.fx_bound = Some(fx_bound);
    debug_assert!(mu < Ratio::zero());
    if profile.deg_fe > fe_bound {
        out.reason = format!("μ(F_E(-{c})) = {mu_e} exceeds μ(F) = {mu}");
        return Ok(out);
    }
    if deg_fx > fx_bound {
        out.reason = format!("μ(F_X(-{c} pts)) = {mu_x} exceeds μ(F) = {mu}");
        return Ok(out);
    }
    out.admissible = true;
    out.conclusion = Some(match (profile.case, deg_fx - k) {
        (Case::I, 1) => Conclusion::PencilThroughPoints,
        (Case::I, 2) => Conclusion::PencilOfDegreeKMinusOne,
        (Case::Ii, 1) => Conclusion::PencilOfDegreeKMinusOne,
        (_, 0) => Conclusion::PencilOfDegreeK,
        (case, e) => return Err(Error::Consistency(format!("case {case} admitted deg F_X = k + {e}"))),
    });
    out.reason = format!("deg F_E = {} ≤ {fe_bound} and deg F_X = {deg_fx} ≤ {fx_bound}", profile.deg_fe);
    Ok(out)
}

/// One row per case: the bounds and every admissible `deg F_E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRow {
    pub case: Case,
    pub fe_bound: Option<i64>,
    pub fx_bound: Option<i64>,
    pub admissible: Vec<(i64, i64, Conclusion)>,
}

/// Enumerates `deg F_E` over a window wide enough to contain every survivor.
pub fn case_table(k: i64) -> Result<Vec<CaseRow>> {
    Case::ALL
        .iter()
        .map(|&case| {
            let mut row = CaseRow { case, fe_bound: None, fx_bound: None, admissible: Vec::new() };
            for deg_fe in -(k + 5)..=(k + 5) {
                let a = stability_audit(&SheafProfile { k, case, deg_fe, deg_fx: None })?;
                row.fe_bound = a.fe_bound;
                row.fx_bound = a.fx_bound;
                if a.admissible {
                    row.admissible.push((deg_fe, a.deg_fx.unwrap(), a.conclusion.unwrap()));
                }
            }
            Ok(row)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn audit(k: i64, case: Case, deg_fe: i64) -> StabilityAudit {
        stability_audit(&SheafProfile { k, case, deg_fe, deg_fx: None }).unwrap()
    }

    #[test]
    fn spot_values_at_k_three() {
        assert_eq!(mu_f(3), Ratio::new(-1, 6));
        let a = audit(3, Case::I, 0);
        assert!(a.admissible);
        assert_eq!(a.deg_fx, Some(4));
        assert_eq!(a.conclusion, Some(Conclusion::PencilThroughPoints));
        assert!(!audit(3, Case::I, 2).admissible);
        assert!(!audit(3, Case::Iv, 0).admissible);
    }

    #[test]
    fn chi_link_is_enforced() {
        let bad = SheafProfile { k: 3, case: Case::Ii, deg_fe: 0, deg_fx: Some(4) };
        assert!(stability_audit(&bad).is_err());
        let good = SheafProfile { deg_fx: Some(3), ..bad };
        assert!(stability_audit(&good).unwrap().admissible);
        assert!(stability_audit(&SheafProfile { k: 1, ..good }).is_err());
    }

    #[test]
    fn bounds_for_all_k() {
        for k in 2..=50 {
            let t = case_table(k).unwrap();
            assert_eq!(t[0].fe_bound, Some(1));
            assert_eq!(t[1].fe_bound, Some(0));
            assert_eq!(t[2].fe_bound, Some(-1));
            assert_eq!(t[0].fx_bound, Some(k + 2));
            assert_eq!(t[1].fx_bound, Some(k + 1));
            assert_eq!(t[2].fx_bound, Some(k));
            assert!(t[3].admissible.is_empty());
            let fe: Vec<i64> = t[0].admissible.iter().map(|a| a.0).collect();
            assert_eq!(fe, vec![-1, 0, 1]);
            assert!(t[0].admissible.contains(&(1, k, Conclusion::PencilOfDegreeK)));
        }
    }
}
