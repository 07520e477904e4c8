//! Oracle versus table comparison over a grid of local parameters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    build_model, enumerate_optimal, k_descriptor, policy_precision, ModelKind, OracleError,
    OracleOptions, OracleResult,
};
use crate::embedtables::{
    cartan_exists, division_count_nu2, division_exists, eichler_exists, EmbeddingVerdict,
};
use crate::quadarith::{eichler_factor, LocalAlgebra, LocalQuadExt, SplittingType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TableCase {
    Eichler,
    Cartan,
    Division,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Match,
    Mismatch,
    /// No table row covers the cell.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyCell {
    pub m: u32,
    pub n: u32,
    pub k_class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_class: Option<String>,
    pub table: EmbeddingVerdict,
    pub oracle: OracleResult,
    pub status: CellStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub p: u64,
    pub case: TableCase,
    pub max_m: u32,
    pub max_n: u32,
    pub cells: Vec<VerifyCell>,
    pub matches: usize,
    pub mismatches: usize,
    pub skipped: usize,
}

impl VerifyReport {
    pub fn all_match(&self) -> bool {
        self.mismatches == 0
    }
}

fn class_name(a: LocalAlgebra) -> String {
    match a {
        LocalAlgebra::Split => "split".into(),
        LocalAlgebra::Field(l) => l.short_name().into(),
    }
}

fn splitting(a: LocalAlgebra) -> SplittingType {
    match a {
        LocalAlgebra::Split => SplittingType::Split,
        LocalAlgebra::Field(l) => l.splitting(),
    }
}

struct Job {
    m: u32,
    kind: ModelKind,
    k_alg: LocalAlgebra,
    table: EmbeddingVerdict,
}

fn jobs(p: u64, case: TableCase, max_m: u32, max_n: u32) -> Vec<Job> {
    let fields: Vec<LocalAlgebra> = LocalQuadExt::classes(p)
        .iter()
        .map(|&l| LocalAlgebra::Field(l))
        .collect();
    let mut out = Vec::new();
    for m in 0..=max_m {
        match case {
            TableCase::Eichler => {
                let algs = std::iter::once(LocalAlgebra::Split).chain(fields.iter().copied());
                for n in 0..=max_n {
                    for a in algs.clone() {
                        out.push(Job {
                            m,
                            kind: ModelKind::Eichler { n },
                            k_alg: a,
                            table: eichler_exists(m, n, splitting(a)),
                        });
                    }
                }
            }
            TableCase::Cartan => {
                for n in 1..=max_n {
                    out.push(Job {
                        m,
                        kind: ModelKind::Cartan { n },
                        k_alg: LocalAlgebra::Field(LocalQuadExt::Unramified),
                        table: cartan_exists(m, n),
                    });
                }
            }
            TableCase::Division => {
                for n in 1..=max_n {
                    for &kc in LocalQuadExt::classes(p) {
                        for &lc in LocalQuadExt::classes(p) {
                            let mut table = division_exists(p, m, n, kc, lc);
                            table.count = division_table_count(p, m, n, kc, lc);
                            out.push(Job {
                                m,
                                kind: ModelKind::Division { l: lc, n },
                                k_alg: LocalAlgebra::Field(kc),
                                table,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Counts known in closed form: the maximal order, and level p^2 at odd p.
fn division_table_count(p: u64, m: u32, n: u32, kc: LocalQuadExt, lc: LocalQuadExt) -> Option<u64> {
    match n {
        1 => Some((1 - eichler_factor(m, kc.splitting())) as u64),
        2 if p != 2 && lc.is_ramified() => Some(division_count_nu2(p, m, kc.splitting())),
        _ => None,
    }
}

fn judge(table: &EmbeddingVerdict, oracle: &OracleResult) -> CellStatus {
    if table.rule_id == "no-row" {
        return CellStatus::Skipped;
    }
    let count_ok = match (table.count, oracle.class_count) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    };
    if table.exists == oracle.exists && count_ok {
        CellStatus::Match
    } else {
        CellStatus::Mismatch
    }
}

pub fn verify_table(
    p: u64,
    case: TableCase,
    max_m: u32,
    max_n: u32,
    precision: Option<u32>,
    opts: &OracleOptions,
) -> Result<VerifyReport, OracleError> {
    let n_cap = if case == TableCase::Division { 5 } else { 4 };
    if max_m > 3 || max_n > n_cap {
        return Err(OracleError::InvalidKind(format!(
            "grid m <= {max_m}, n <= {max_n} outside m <= 3, n <= {n_cap}"
        )));
    }
    let cells: Result<Vec<VerifyCell>, OracleError> = jobs(p, case, max_m, max_n)
        .into_par_iter()
        .map(|job| {
            let n = job.kind.n();
            let k = precision
                .unwrap_or_else(|| policy_precision(n, job.m))
                .max(n + 2);
            let oracle = if job.table.rule_id == "no-row" {
                OracleResult {
                    exists: false,
                    class_count: None,
                    precision_used: 0,
                    witnesses: vec![],
                }
            } else {
                let model = build_model(job.kind, p, k)?;
                let kd = k_descriptor(p, job.k_alg)?;
                let mut o = *opts;
                o.count = o.count && job.table.count.is_some();
                enumerate_optimal(&model, &kd, job.m, &o)?
            };
            let status = judge(&job.table, &oracle);
            Ok(VerifyCell {
                m: job.m,
                n,
                k_class: class_name(job.k_alg),
                l_class: match job.kind {
                    ModelKind::Division { l, .. } => Some(l.short_name().into()),
                    _ => None,
                },
                table: job.table,
                oracle,
                status,
            })
        })
        .collect();
    let cells = cells?;
    let count = |s: CellStatus| cells.iter().filter(|c| c.status == s).count();
    Ok(VerifyReport {
        p,
        case,
        max_m,
        max_n,
        matches: count(CellStatus::Match),
        mismatches: count(CellStatus::Mismatch),
        skipped: count(CellStatus::Skipped),
        cells,
    })
}
