//! Local root numbers of E/K twisted by a ring class character, the
//! quadratic character value eta_{K,p}(-1), and the set Sigma(E, chi).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localdata::{InducingField, LocalRepType, RepKind};
use crate::quadarith::{hilbert_symbol_int, splitting_at, Place, QuadOrder, SplittingType};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "value", content = "reason")]
pub enum SignValue {
    Plus,
    Minus,
    Undetermined(String),
}

impl SignValue {
    pub fn as_int(&self) -> Option<i32> {
        match self {
            SignValue::Plus => Some(1),
            SignValue::Minus => Some(-1),
            SignValue::Undetermined(_) => None,
        }
    }

    pub fn is_determined(&self) -> bool {
        !matches!(self, SignValue::Undetermined(_))
    }

    fn undetermined(reason: &str) -> Self {
        SignValue::Undetermined(reason.to_string())
    }
}

impl fmt::Display for SignValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignValue::Plus => f.write_str("+1"),
            SignValue::Minus => f.write_str("-1"),
            SignValue::Undetermined(r) => write!(f, "undetermined ({r})"),
        }
    }
}

/// Character-level data the conductors alone do not carry.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignFlags {
    /// Whether chi_p^{-1} = psi o Nr for a Steinberg twist St ⊗ psi.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steinberg_norm_relation: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSign {
    pub value: SignValue,
    pub rule_id: String,
}

impl LocalSign {
    fn new(value: SignValue, rule: &str) -> Self {
        LocalSign {
            value,
            rule_id: rule.to_string(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignError {
    #[error("inconsistent sign data at {p}: {reason}")]
    Inconsistent { p: u64, reason: String },
    #[error("{0}")]
    Override(String),
    #[error("no local type given for {0}")]
    MissingRep(u64),
}

/// eta_{K,p}(-1) = (-1, D_K)_p; +1 at split primes.
pub fn eta_minus_one(k: &QuadOrder, p: u64) -> i32 {
    if splitting_at(k, p).is_split() {
        return 1;
    }
    hilbert_symbol_int(-1, k.disc() as i128, Place::Finite(p))
}

/// Conductor exponent of psi o Nr on K_p^x when it follows from a(psi).
fn psi_norm_conductor(p: u64, a: u32, s: SplittingType) -> Option<u32> {
    match s {
        SplittingType::Inert => Some(a),
        // norms of units from a ramified extension are squares mod p
        SplittingType::Ramified if p != 2 || a == 0 => Some(0),
        _ => None,
    }
}

const NEEDS_CHARACTERS: &str = "requires character values, not just conductors";

/// epsilon_p(E/K, chi) from the local type at p, the splitting of p in K and
/// m = val_p(c). Configurations no rule covers are Undetermined.
pub fn local_epsilon(
    p: u64,
    rep: &LocalRepType,
    s: SplittingType,
    m: u32,
    flags: &SignFlags,
) -> Result<LocalSign, SignError> {
    use SignValue::{Minus, Plus};
    if s == SplittingType::Split {
        return Ok(LocalSign::new(Plus, "split"));
    }
    let n = rep.n;
    let inert = s == SplittingType::Inert;
    match rep.kind {
        RepKind::Steinberg { twist_conductor: a } => {
            let rel = flags.steinberg_norm_relation;
            if let Some(c) = psi_norm_conductor(p, a, s) {
                if c != m {
                    if rel == Some(true) {
                        return Err(SignError::Inconsistent {
                            p,
                            reason: format!(
                                "norm relation asserted but c(chi_p) = {m} and c(psi o Nr) = {c}"
                            ),
                        });
                    }
                    return Ok(LocalSign::new(Plus, "st-conductor"));
                }
            }
            if inert && a == 0 && m == 0 {
                if rel == Some(false) {
                    return Err(SignError::Inconsistent {
                        p,
                        reason:
                            "chi_p and psi o Nr are both trivial here, so the norm relation holds"
                                .into(),
                    });
                }
                return Ok(LocalSign::new(Minus, "st-unramified"));
            }
            return Ok(match rel {
                Some(true) => LocalSign::new(Minus, "st-relation"),
                Some(false) => LocalSign::new(Plus, "st-relation"),
                None => LocalSign::new(
                    SignValue::undetermined(
                        "requires character values, not just conductors (steinberg_norm_relation)",
                    ),
                    "st-relation",
                ),
            });
        }
        RepKind::PrincipalSeries => {}
        RepKind::Supercuspidal {
            inducing,
            minimal,
            exceptional,
            ..
        } => {
            if let Some(sign) = supercuspidal_rule(p, n, inducing, minimal, exceptional, s, m) {
                return Ok(sign);
            }
        }
    }
    if m == 0 && inert {
        return Ok(LocalSign::new(Plus, "unramified-twist"));
    }
    Ok(LocalSign::new(
        SignValue::undetermined(NEEDS_CHARACTERS),
        "none",
    ))
}

fn supercuspidal_rule(
    p: u64,
    n: u32,
    inducing: InducingField,
    minimal: bool,
    exceptional: bool,
    s: SplittingType,
    m: u32,
) -> Option<LocalSign> {
    use SignValue::{Minus, Plus};
    let inert = s == SplittingType::Inert;
    let pm = |minus: bool, rule: &str| Some(LocalSign::new(if minus { Minus } else { Plus }, rule));
    if p == 2 {
        if !inert {
            return None;
        }
        return match n {
            3 => pm(m <= 1, "sc2-n3"),
            5 if m < 3 => pm(true, "sc2-n5"),
            7 if exceptional && minimal && m < 4 => pm(true, "sc2-n7"),
            _ if n >= 3 && m > 0 => Some(LocalSign::new(
                SignValue::undetermined("only a one-sided bound on m is known here"),
                "sc2",
            )),
            2 if m >= 2 => pm(false, "sc-n2-deep"),
            _ => None,
        };
    }
    if n >= 3 && n % 2 == 1 && inducing.is_ramified() {
        let half = (n - 1) / 2;
        if inert {
            return pm(m <= half, "sc-ram-induced");
        }
        if m >= half {
            return pm(m == half, "sc-ram-induced");
        }
        return Some(LocalSign::new(
            SignValue::undetermined(
                "the available sign statements disagree for K ramified and m < (n-1)/2",
            ),
            "sc-ram-induced",
        ));
    }
    match (n, inert, m) {
        (4, _, 1) if p == 3 => pm(false, "sc3-n4-m1"),
        (2, true, _) if m >= 2 => pm(false, "sc-n2-deep"),
        (2, false, _) if m >= 4 => pm(false, "sc-n2-ram-deep"),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipSource {
    Rule,
    Override,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaRecord {
    pub p: u64,
    pub splitting: SplittingType,
    pub epsilon: SignValue,
    pub rule_id: String,
    pub eta_minus1: i32,
    /// None while undetermined.
    pub in_sigma: Option<bool>,
    pub source: MembershipSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub records: Vec<SigmaRecord>,
    pub includes_infinity: bool,
    /// (-1)^{|Sigma|}, infinity counted.
    pub global_sign: Option<i32>,
    /// Product of the finite members.
    pub delta: Option<u64>,
}

impl SigmaReport {
    pub fn is_determined(&self) -> bool {
        self.records.iter().all(|r| r.in_sigma.is_some())
    }

    pub fn undetermined_primes(&self) -> Vec<u64> {
        self.records
            .iter()
            .filter(|r| r.in_sigma.is_none())
            .map(|r| r.p)
            .collect()
    }

    pub fn finite_primes(&self) -> Option<Vec<u64>> {
        self.is_determined().then(|| {
            self.records
                .iter()
                .filter(|r| r.in_sigma == Some(true))
                .map(|r| r.p)
                .collect()
        })
    }

    /// |Sigma| with infinity counted.
    pub fn cardinality(&self) -> Option<usize> {
        self.finite_primes().map(|f| f.len() + 1)
    }

    pub fn contains(&self, p: u64) -> Option<bool> {
        match self.records.iter().find(|r| r.p == p) {
            Some(r) => r.in_sigma,
            None => Some(false),
        }
    }

    pub fn record(&self, p: u64) -> Option<&SigmaRecord> {
        self.records.iter().find(|r| r.p == p)
    }

    /// Every determined membership, in override form.
    pub fn as_overrides(&self) -> BTreeMap<u64, bool> {
        self.records
            .iter()
            .filter_map(|r| r.in_sigma.map(|b| (r.p, b)))
            .collect()
    }
}

/// Sigma(E, chi) from the local types at the primes of N. Overrides fill
/// undetermined memberships and must agree with determined ones.
pub fn build_sigma(
    n_factored: &[(u64, u32)],
    reps: &BTreeMap<u64, LocalRepType>,
    flags: &BTreeMap<u64, SignFlags>,
    k: &QuadOrder,
    overrides: &BTreeMap<u64, bool>,
) -> Result<SigmaReport, SignError> {
    for (&p, &inside) in overrides {
        if !inside {
            continue;
        }
        if !n_factored.iter().any(|&(q, e)| q == p && e > 0) {
            return Err(SignError::Override(format!(
                "{p} cannot lie in Σ: it does not divide N, and every finite prime of Σ divides the conductor"
            )));
        }
        if splitting_at(k, p).is_split() {
            return Err(SignError::Override(format!(
                "{p} cannot lie in Σ: it splits in K, and K_p must be a field at primes of Σ"
            )));
        }
    }
    let mut records = Vec::with_capacity(n_factored.len());
    for &(p, e) in n_factored {
        if e == 0 {
            continue;
        }
        let rep = reps.get(&p).ok_or(SignError::MissingRep(p))?;
        let s = splitting_at(k, p);
        let eta = eta_minus_one(k, p);
        let fl = flags.get(&p).copied().unwrap_or_default();
        let sign = local_epsilon(p, rep, s, k.m_at(p), &fl)?;
        let ruled = sign.value.as_int().map(|v| v != eta);
        let (in_sigma, source) = match (ruled, overrides.get(&p)) {
            (Some(r), Some(&o)) if r != o => {
                let msg = if o {
                    format!("{p} cannot lie in Σ: ε={:+}", sign.value.as_int().unwrap())
                } else {
                    format!("{p} must lie in Σ: ε={:+}", sign.value.as_int().unwrap())
                };
                return Err(SignError::Override(msg));
            }
            (Some(r), _) => (Some(r), MembershipSource::Rule),
            (None, Some(&o)) => (Some(o), MembershipSource::Override),
            (None, None) => (None, MembershipSource::Rule),
        };
        records.push(SigmaRecord {
            p,
            splitting: s,
            epsilon: sign.value,
            rule_id: sign.rule_id,
            eta_minus1: eta,
            in_sigma,
            source,
        });
    }
    records.sort_by_key(|r| r.p);
    let determined = records.iter().all(|r| r.in_sigma.is_some());
    let finite: Vec<u64> = records
        .iter()
        .filter(|r| r.in_sigma == Some(true))
        .map(|r| r.p)
        .collect();
    let (global_sign, delta) = if determined {
        let card = finite.len() + 1;
        (
            Some(if card % 2 == 0 { 1 } else { -1 }),
            Some(finite.iter().product()),
        )
    } else {
        (None, None)
    };
    Ok(SigmaReport {
        records,
        includes_infinity: true,
        global_sign,
        delta,
    })
}
