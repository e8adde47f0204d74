//! Normality of the tripod polytope for every finite abelian group up to a
//! given order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::normality::{check_normality, CheckOptions, NormalityReport, Verdict};
use crate::polytope::PolytopeModel;

/// Default largest order for [`classify`].
pub const DEFAULT_MAX_ORDER: u64 = 11;

/// All abelian groups of order `2..=max_order`, one per isomorphism class,
/// as invariant factors `d_1 | d_2 | ... | d_r`, by order and then
/// lexicographically on the factors.
pub fn abelian_groups(max_order: u64) -> Vec<GroupSpec> {
    fn rec(n: u64, last: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 1 {
            out.push(cur.clone());
            return;
        }
        // the next factor is a multiple of `last` dividing what is left
        let mut d = last;
        while d <= n {
            if n % d == 0 && d > 1 {
                cur.push(d);
                rec(n / d, d, cur, out);
                cur.pop();
            }
            d += last;
        }
    }
    let mut out = Vec::new();
    for n in 2..=max_order {
        let mut forms = Vec::new();
        rec(n, 1, &mut Vec::new(), &mut forms);
        forms.sort();
        out.extend(forms.into_iter().map(|f| GroupSpec::new(&f).expect("factors are at least 2")));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Normal,
    NonNormal,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub group: GroupSpec,
    pub order: u64,
    pub verdict: VerdictKind,
    /// Highest degree through which every point decomposes.
    pub verified_through: u64,
    /// Degree of the non-decomposable point, if one was found.
    pub witness_degree: Option<u64>,
    pub report: NormalityReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub schema_version: u32,
    pub max_order: u64,
    pub rows: Vec<ClassRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
}

/// Runs the complete normality check on `P_{G,3}` for every group from
/// [`abelian_groups`].
pub fn classify(max_order: u64, options: &CheckOptions) -> Result<ClassificationTable> {
    classify_with(max_order, options, |_| {})
}

/// As [`classify`], calling `progress` after each group.
pub fn classify_with(max_order: u64, options: &CheckOptions, mut progress: impl FnMut(&ClassRow)) -> Result<ClassificationTable> {
    if max_order < 2 {
        return Err(Error::Domain("max order must be at least 2".into()));
    }
    let mut rows = Vec::new();
    for group in abelian_groups(max_order) {
        let model = PolytopeModel::tripod(&group)?;
        let report = check_normality(&model, model.dim().saturating_sub(1).max(2) as u64, options)?;
        let (verdict, witness_degree) = match &report.verdict {
            Verdict::Normal => (VerdictKind::Normal, None),
            Verdict::NonNormal { certificate } => (VerdictKind::NonNormal, Some(certificate.degree)),
            Verdict::Inconclusive { .. } => (VerdictKind::Inconclusive, None),
        };
        let row = ClassRow {
            order: group.order(),
            group,
            verdict,
            verified_through: report.verified_through(),
            witness_degree,
            report,
        };
        progress(&row);
        rows.push(row);
    }
    Ok(ClassificationTable { schema_version: SCHEMA_VERSION, max_order, rows, config: None })
}

impl ClassificationTable {
    pub fn normal_groups(&self) -> Vec<&GroupSpec> {
        self.rows.iter().filter(|r| r.verdict == VerdictKind::Normal).map(|r| &r.group).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One line per group: `group,order,verdict,verified_through,witness_degree,witness`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("group,order,verdict,verified_through,witness_degree,witness\n");
        for r in &self.rows {
            let kind = match r.verdict {
                VerdictKind::Normal => "normal",
                VerdictKind::NonNormal => "non_normal",
                VerdictKind::Inconclusive => "inconclusive",
            };
            let witness = r.report.certificate().map(|c| c.point.to_string()).unwrap_or_default();
            let degree = r.witness_degree.map(|d| d.to_string()).unwrap_or_default();
            writeln!(s, "{},{},{kind},{},{degree},\"{witness}\"", r.group, r.order, r.verified_through).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Number of abelian groups of order n: product of partition numbers of
    /// the prime exponents.
    fn count_by_partitions(n: u64) -> usize {
        fn partitions(k: u32) -> usize {
            [1, 1, 2, 3, 5, 7, 11, 15][k as usize]
        }
        let (mut n, mut p, mut count) = (n, 2, 1);
        while n > 1 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            count *= partitions(e);
            p += 1;
        }
        count
    }

    #[test]
    fn group_list() {
        let names: Vec<String> = abelian_groups(11).iter().map(|g| g.to_string()).collect();
        assert_eq!(names.len(), 14);
        for n in 2..=64 {
            let here = abelian_groups(n).len() - abelian_groups(n - 1).len();
            assert_eq!(here, count_by_partitions(n), "order {n}");
        }
        let g8: Vec<Vec<u64>> = abelian_groups(8).iter().filter(|g| g.order() == 8).map(|g| g.orders().to_vec()).collect();
        assert_eq!(g8, vec![vec![2, 2, 2], vec![2, 4], vec![8]]);
        assert!(matches!(classify(1, &CheckOptions::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn small_table() {
        let t = classify(6, &CheckOptions::default()).unwrap();
        let normal: Vec<String> = t.normal_groups().iter().map(|g| g.to_string()).collect();
        assert_eq!(normal.len(), 5);
        let z6 = t.rows.iter().find(|r| r.group.orders() == [6]).unwrap();
        assert_eq!(z6.verdict, VerdictKind::NonNormal);
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 1 + t.rows.len());
        let back: ClassificationTable = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
