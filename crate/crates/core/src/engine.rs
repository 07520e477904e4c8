//! From a curve's local data and a ring class character to a quaternion
//! order with Heegner points: discriminant, order type, level and conductor
//! adjustment, the residual hypotheses at 2 and 3, and the final report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedtables::{
    cartan_exists, component_data, division_exists, eichler_exists, global_embedding_count,
    heegner_count, ComponentData, DivisionDatum, EmbeddingVerdict, OrderType,
};
use crate::localdata::{default_rep_type, jl_local_level, LocalDataError, LocalRepType};
use crate::quadarith::{
    class_number, is_prime, local_quad_class, splitting_at, LocalQuadExt, QuadError, QuadOrder,
    SplittingType,
};
use crate::signs::{build_sigma, MembershipSource, SigmaReport, SignError, SignFlags};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Sign(#[from] SignError),
    #[error(transparent)]
    Local(#[from] LocalDataError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("|Σ| = {0} is even: no quaternion algebra over Q ramifies exactly there")]
    EvenSigma(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// c is fixed; only level exponents at primes of Σ may grow.
    #[default]
    EllipticFixedConductor,
    AbelianAdjustable,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CurveFlags {
    pub primitive: bool,
    pub two_minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveInput {
    /// N as [prime, exponent] pairs.
    pub n: Vec<(u64, u32)>,
    pub reps: BTreeMap<u64, LocalRepType>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sign_flags: BTreeMap<u64, SignFlags>,
    #[serde(default)]
    pub flags: CurveFlags,
    #[serde(default)]
    pub mode: Mode,
}

impl CurveInput {
    /// Default local types at every prime; returns the primes where the
    /// default is a guess between several types.
    pub fn with_defaults(n: Vec<(u64, u32)>, mode: Mode) -> Result<(Self, Vec<u64>), EngineError> {
        let mut reps = BTreeMap::new();
        let mut guessed = Vec::new();
        for &(p, e) in &n {
            let d = default_rep_type(p, e)?;
            if d.override_recommended {
                guessed.push(p);
            }
            reps.insert(p, d.rep);
        }
        let input = CurveInput {
            n,
            reps,
            sign_flags: BTreeMap::new(),
            flags: CurveFlags::default(),
            mode,
        };
        Ok((input, guessed))
    }

    pub fn conductor(&self) -> Option<u64> {
        self.n
            .iter()
            .try_fold(1u64, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }

    pub fn val(&self, p: u64) -> u32 {
        self.n.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |s: String| Err(EngineError::Input(s));
        if self.n.is_empty() {
            return bad("N must be greater than 1".into());
        }
        for w in self.n.windows(2) {
            if w[0].0 >= w[1].0 {
                return bad(
                    "factorization of N must list distinct primes in increasing order".into(),
                );
            }
        }
        if self.conductor().is_none() {
            return bad("N overflows u64".into());
        }
        for &(p, e) in &self.n {
            if !is_prime(p) {
                return bad(format!("{p} is not prime"));
            }
            if e == 0 {
                return bad(format!("exponent of {p} is zero"));
            }
            let Some(rep) = self.reps.get(&p) else {
                return bad(format!("no local type given at {p}"));
            };
            if rep.n != e {
                return bad(format!(
                    "local type at {p} has exponent {} but val_{p}(N) = {e}",
                    rep.n
                ));
            }
            rep.validate(p)?;
        }
        for p in self.reps.keys() {
            if self.val(*p) == 0 {
                return bad(format!("local type given at {p}, which does not divide N"));
            }
        }
        for (p, f) in &self.sign_flags {
            let st = self.reps.get(p).is_some_and(|r| r.is_steinberg());
            if f.steinberg_norm_relation.is_some() && !st {
                return bad(format!(
                    "norm relation flag at {p} needs a Steinberg type there"
                ));
            }
        }
        if self.flags.primitive && matches!(self.val(2), 4 | 6 | 8) {
            return bad(format!(
                "val_2(N) = {} is even and at least 4, so the form is a twist of lower level and not primitive",
                self.val(2)
            ));
        }
        Ok(())
    }
}

/// User assertions echoed into the report; never checked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Assertions {
    pub l_prime_nonzero: bool,
    pub no_cm: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalPart {
    Eichler,
    Cartan,
    Division,
}

/// How T_min is built at p given membership in Σ.
fn local_part(input: &CurveInput, k: &QuadOrder, p: u64, in_sigma: bool) -> LocalPart {
    let e = input.val(p);
    if in_sigma {
        LocalPart::Division
    } else if splitting_at(k, p) == SplittingType::Inert && e % 2 == 0 && k.m_at(p) == 0 {
        LocalPart::Cartan
    } else {
        LocalPart::Eichler
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub order_type: OrderType,
    /// The same structure with another allowed class at one prime of Σ.
    pub alternatives: Vec<OrderType>,
}

fn k_class(k: &QuadOrder, p: u64) -> Option<LocalQuadExt> {
    local_quad_class(k, p).field()
}

/// Allowed classes at p, the one isomorphic to K_p first.
fn ordered_classes(k: &QuadOrder, p: u64, choices: &[LocalQuadExt]) -> Vec<LocalQuadExt> {
    let kp = k_class(k, p);
    let mut v = choices.to_vec();
    v.sort_by_key(|&l| Some(l) != kp);
    v
}

pub fn select_structure(
    input: &CurveInput,
    k: &QuadOrder,
    sigma: &SigmaReport,
) -> Result<Selection, EngineError> {
    let Some(card) = sigma.cardinality() else {
        return Err(EngineError::Input(format!(
            "Σ is undetermined at {:?}",
            sigma.undetermined_primes()
        )));
    };
    if card % 2 == 0 {
        return Err(EngineError::EvenSigma(card));
    }
    let mut t = OrderType::default();
    let mut classes = BTreeMap::new();
    for &(p, e) in &input.n {
        let inside = sigma.contains(p) == Some(true);
        if inside && splitting_at(k, p).is_split() {
            return Err(EngineError::Sign(SignError::Override(format!(
                "{p} splits in K but lies in Σ"
            ))));
        }
        match local_part(input, k, p, inside) {
            LocalPart::Division => {
                let jl = jl_local_level(p, e)?;
                let order = ordered_classes(k, p, &jl.l_class_choices);
                t.division_part.insert(
                    p,
                    DivisionDatum {
                        l: order[0],
                        nu: jl.n,
                    },
                );
                classes.insert(p, order);
            }
            LocalPart::Cartan => {
                t.cartan_part.insert(p, e / 2);
            }
            LocalPart::Eichler => {
                t.eichler_part.insert(p, e);
            }
        }
    }
    t.validate()
        .map_err(|e| EngineError::Internal(format!("selected order type is invalid: {e}")))?;
    let mut alternatives = Vec::new();
    for (p, order) in &classes {
        for &l in &order[1..] {
            let mut alt = t.clone();
            alt.division_part.get_mut(p).unwrap().l = l;
            alternatives.push(alt);
        }
    }
    Ok(Selection {
        order_type: t,
        alternatives,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeAdjustment {
    pub p: u64,
    pub part: LocalPart,
    pub splitting: SplittingType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_class: Option<LocalQuadExt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_class: Option<LocalQuadExt>,
    pub m: u32,
    pub m_prime: u32,
    pub n: u32,
    pub n_prime: u32,
    pub rule_id: String,
    pub passes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjustment {
    /// None when some prime fails.
    pub order_type: Option<OrderType>,
    pub c_prime: Option<u64>,
    pub trace: Vec<PrimeAdjustment>,
    pub violations: Vec<String>,
}

/// Local verdict for one prime of the level at (m, n) with class L.
pub fn local_verdict(
    part: LocalPart,
    p: u64,
    s: SplittingType,
    kc: Option<LocalQuadExt>,
    l: Option<LocalQuadExt>,
    m: u32,
    n: u32,
) -> EmbeddingVerdict {
    match part {
        LocalPart::Eichler => eichler_exists(m, n, s),
        LocalPart::Cartan => cartan_exists(m, n / 2),
        LocalPart::Division => match (kc, l) {
            (Some(kc), Some(l)) => division_exists(p, m, n, kc, l),
            _ => EmbeddingVerdict {
                exists: false,
                count: None,
                rule_id: "no-row".into(),
            },
        },
    }
}

fn eichler_branch(s: SplittingType, n: u32) -> String {
    match s {
        SplittingType::Inert => format!("p ∉ Σ inert in K with n = {n}: needs m >= n/2"),
        _ => format!("p ∉ Σ ramified in K with n = {n}: needs m >= (n-1)/2"),
    }
}

const M_SLACK: u32 = 4;

pub fn adjust_levels(
    t_min: &OrderType,
    input: &CurveInput,
    k: &QuadOrder,
    sigma: &SigmaReport,
) -> Result<Adjustment, EngineError> {
    let abelian = input.mode == Mode::AbelianAdjustable;
    let mut t = OrderType::default();
    let mut trace = Vec::new();
    let mut violations = Vec::new();
    let mut c_prime = k.conductor();
    for p in t_min.primes() {
        let s = splitting_at(k, p);
        let kc = k_class(k, p);
        let m = k.m_at(p);
        let mut rec = PrimeAdjustment {
            p,
            part: LocalPart::Eichler,
            splitting: s,
            k_class: kc,
            l_class: None,
            m,
            m_prime: m,
            n: t_min.level_exponent(p),
            n_prime: t_min.level_exponent(p),
            rule_id: String::new(),
            passes: false,
            note: None,
        };
        let n = rec.n;
        if let Some(&e) = t_min.cartan_part.get(&p) {
            rec.part = LocalPart::Cartan;
            let v = cartan_exists(m, e);
            rec.rule_id = v.rule_id;
            rec.passes = v.exists;
            t.cartan_part.insert(p, e);
        } else if t_min.eichler_part.contains_key(&p) {
            let v = eichler_exists(m, n, s);
            rec.rule_id = v.rule_id;
            rec.passes = v.exists;
            if !v.exists && abelian {
                let mp = (m..=m + n + M_SLACK).find(|&mp| eichler_exists(mp, n, s).exists);
                let mp = mp.ok_or_else(|| {
                    EngineError::Internal(format!("no Eichler conductor found at {p}"))
                })?;
                rec.m_prime = mp;
                rec.passes = true;
                rec.note = Some(format!("conductor raised: {}", eichler_branch(s, n)));
            } else if !v.exists {
                violations.push(format!(
                    "assumption violation at {p}: {}, but m = {m}",
                    eichler_branch(s, n)
                ));
            }
            t.eichler_part.insert(p, n);
        } else {
            rec.part = LocalPart::Division;
            let kcv =
                kc.ok_or_else(|| EngineError::Internal(format!("{p} lies in Σ but splits in K")))?;
            let allowed = ordered_classes(k, p, &jl_local_level(p, n)?.l_class_choices);
            let preferred = t_min.division_part[&p].l;
            let m_max = if abelian { m + n + M_SLACK } else { m };
            let found = (m..=m_max).find_map(|mp| {
                (n..=n + 2 * mp + M_SLACK)
                    .step_by(2)
                    .find_map(|np| {
                        allowed
                            .iter()
                            .find(|&&l| division_exists(p, mp, np, kcv, l).exists)
                            .map(|&l| (np, l))
                    })
                    .map(|(np, l)| (mp, np, l))
            });
            match found {
                Some((mp, np, l)) => {
                    let v = division_exists(p, mp, np, kcv, l);
                    rec.m_prime = mp;
                    rec.n_prime = np;
                    rec.l_class = Some(l);
                    rec.rule_id = v.rule_id;
                    rec.passes = true;
                    if l != preferred {
                        rec.note =
                            Some(format!("class {l} gives a smaller level than {preferred}"));
                    }
                    t.division_part.insert(p, DivisionDatum { l, nu: np });
                }
                None => {
                    let v = division_exists(p, m, n, kcv, preferred);
                    rec.l_class = Some(preferred);
                    rec.rule_id = v.rule_id;
                    let from_override = sigma
                        .record(p)
                        .is_some_and(|r| r.source == MembershipSource::Override);
                    if !from_override {
                        return Err(EngineError::Internal(format!(
                            "division level scan exhausted at {p}"
                        )));
                    }
                    violations.push(format!(
                        "assumption violation at {p}: p ∈ Σ by override, and no order R_n'(L) with n' <= {} admits \
                         an optimal embedding at m = {m}",
                        n + 2 * m + M_SLACK
                    ));
                    t.division_part.insert(
                        p,
                        DivisionDatum {
                            l: preferred,
                            nu: n,
                        },
                    );
                }
            }
        }
        c_prime *= p.pow(rec.m_prime - rec.m);
        trace.push(rec);
    }
    let ok = violations.is_empty();
    Ok(Adjustment {
        order_type: ok.then_some(t),
        c_prime: ok.then_some(c_prime),
        trace,
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    Pass,
    Fail,
    NotApplicable,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub id: u8,
    pub status: ConditionStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub conditions: Vec<Condition>,
}

impl AssumptionReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| {
            matches!(
                c.status,
                ConditionStatus::Pass | ConditionStatus::NotApplicable
            )
        })
    }

    pub fn status(&self, id: u8) -> ConditionStatus {
        self.conditions
            .iter()
            .find(|c| c.id == id)
            .map_or(ConditionStatus::NotApplicable, |c| c.status)
    }
}

fn part_at(input: &CurveInput, k: &QuadOrder, sigma: &SigmaReport, p: u64) -> Option<LocalPart> {
    sigma
        .contains(p)
        .map(|inside| local_part(input, k, p, inside))
}

pub fn check_assumption_2n(
    input: &CurveInput,
    k: &QuadOrder,
    sigma: &SigmaReport,
) -> AssumptionReport {
    use ConditionStatus::*;
    let v2 = input.val(2);
    let v3 = input.val(3);
    let s2 = splitting_at(k, 2);
    let s3 = splitting_at(k, 3);
    let cond = |id, status, detail: String| Condition { id, status, detail };
    let pass = |b: bool| if b { Pass } else { Fail };

    let c1 = if v2 < 3 {
        cond(1, NotApplicable, format!("val_2(N) = {v2} < 3"))
    } else {
        match part_at(input, k, sigma, 2) {
            None => cond(
                1,
                Undetermined,
                "membership of 2 in Σ is undetermined".into(),
            ),
            Some(LocalPart::Eichler) => cond(
                1,
                pass(s2 == SplittingType::Split || (v2 % 2 == 1 && s2 == SplittingType::Inert)),
                format!("2^{v2} | N_Eic and 2 is {s2:?} in K"),
            ),
            Some(_) => cond(1, NotApplicable, "2 ∤ N_Eic".into()),
        }
    };
    let c2 = match (v2 >= 3, sigma.contains(2)) {
        (false, _) => cond(2, NotApplicable, format!("val_2(N) = {v2} < 3")),
        (true, None) => cond(
            2,
            Undetermined,
            "membership of 2 in Σ is undetermined".into(),
        ),
        (true, Some(false)) => cond(2, NotApplicable, "2 ∤ Δ".into()),
        (true, Some(true)) => {
            let sc = input.reps.get(&2).is_some_and(|r| r.is_supercuspidal());
            cond(
                2,
                pass(s2 == SplittingType::Inert && (!sc || v2 % 2 == 1)),
                format!("2 | Δ, val_2(N) = {v2}, 2 is {s2:?} in K, supercuspidal at 2: {sc}"),
            )
        }
    };
    let c3 = if v2 == 0 {
        cond(3, NotApplicable, "N is odd".into())
    } else {
        cond(
            3,
            pass(input.flags.two_minimal),
            format!(
                "2-minimal conductor among twists asserted: {}",
                input.flags.two_minimal
            ),
        )
    };
    let c4 = if v3 != 4 || s3 != SplittingType::Inert {
        cond(
            4,
            NotApplicable,
            format!("val_3(N) = {v3}, 3 is {s3:?} in K"),
        )
    } else {
        match part_at(input, k, sigma, 3) {
            None => cond(
                4,
                Undetermined,
                "membership of 3 in Σ is undetermined".into(),
            ),
            Some(LocalPart::Eichler) => cond(
                4,
                pass(k.m_at(3) != 1),
                format!("3^4 | N_Eic, 3 inert, val_3(c) = {}", k.m_at(3)),
            ),
            Some(_) => cond(4, NotApplicable, "3 ∤ N_Eic".into()),
        }
    };
    AssumptionReport {
        conditions: vec![c1, c2, c3, c4],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingCases {
    /// val_3(N) = 4, 3 ∤ Δ, 3 inert, val_3(c) = 1. None when 3's membership is unknown.
    pub flag1: Option<bool>,
    /// val_2(N) >= 3, 2 ∤ Δ, 2 ramified.
    pub flag2: Option<bool>,
}

pub fn missing_case_flags(
    v3n: u32,
    v2n: u32,
    three_in_delta: bool,
    two_in_delta: bool,
    s3: SplittingType,
    s2: SplittingType,
    v3c: u32,
) -> (bool, bool) {
    let f1 = v3n == 4 && !three_in_delta && s3 == SplittingType::Inert && v3c == 1;
    let f2 = v2n >= 3 && !two_in_delta && s2 == SplittingType::Ramified;
    (f1, f2)
}

pub fn detect_missing_cases(
    input: &CurveInput,
    k: &QuadOrder,
    sigma: &SigmaReport,
) -> MissingCases {
    let (s2, s3) = (splitting_at(k, 2), splitting_at(k, 3));
    let flag = |p: u64, pick: fn((bool, bool)) -> bool| {
        let inside = sigma.contains(p)?;
        let (d3, d2) = if p == 3 {
            (inside, false)
        } else {
            (false, inside)
        };
        Some(pick(missing_case_flags(
            input.val(3),
            input.val(2),
            d3,
            d2,
            s3,
            s2,
            k.m_at(3),
        )))
    };
    MissingCases {
        flag1: flag(3, |f| f.0),
        flag2: flag(2, |f| f.1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Exists,
    /// Some membership in Σ is undetermined.
    Blocked,
    /// A local condition fails at the requested conductor.
    NoEmbedding,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeegnerReport {
    pub schema_version: String,
    pub verdict: Verdict,
    pub exists: bool,
    pub disc: i64,
    pub c: u64,
    pub mode: Mode,
    pub sigma: SigmaReport,
    pub order_type_min: Option<OrderType>,
    pub order_type: Option<OrderType>,
    pub level: Option<u64>,
    pub c_prime: Option<u64>,
    pub adjustments: Vec<PrimeAdjustment>,
    pub alternatives: Vec<OrderType>,
    pub heegner_count: Option<u64>,
    pub global_embedding_count: Option<u64>,
    pub components: Option<ComponentData>,
    pub rationality_field: Option<String>,
    pub ring_class_degree: Option<u64>,
    pub assumption_2n: AssumptionReport,
    pub missing_case_flags: MissingCases,
    pub cm_caveat_flag: bool,
    pub l_prime_nonzero: bool,
    pub certificate: Vec<String>,
    pub conclusion: Option<String>,
    pub warnings: Vec<String>,
    pub diagnostics: Vec<String>,
}

fn set_string(ps: &[u64]) -> String {
    let inner: Vec<String> = std::iter::once("∞".to_string())
        .chain(ps.iter().map(|p| p.to_string()))
        .collect();
    format!("{{{}}}", inner.join(", "))
}

/// Runs the whole pipeline. Input errors and contradictory overrides are
/// errors; undetermined signs and failing local conditions are verdicts.
pub fn analyze(
    input: &CurveInput,
    k: &QuadOrder,
    overrides: &BTreeMap<u64, bool>,
    assertions: Assertions,
) -> Result<HeegnerReport, EngineError> {
    input.validate()?;
    let sigma = build_sigma(&input.n, &input.reps, &input.sign_flags, k, overrides)?;
    let mut report = HeegnerReport {
        schema_version: SCHEMA_VERSION.to_string(),
        verdict: Verdict::Blocked,
        exists: false,
        disc: k.disc(),
        c: k.conductor(),
        mode: input.mode,
        assumption_2n: check_assumption_2n(input, k, &sigma),
        missing_case_flags: detect_missing_cases(input, k, &sigma),
        sigma,
        order_type_min: None,
        order_type: None,
        level: None,
        c_prime: None,
        adjustments: Vec::new(),
        alternatives: Vec::new(),
        heegner_count: None,
        global_embedding_count: None,
        components: None,
        rationality_field: None,
        ring_class_degree: None,
        cm_caveat_flag: assertions.no_cm,
        l_prime_nonzero: assertions.l_prime_nonzero,
        certificate: Vec::new(),
        conclusion: None,
        warnings: Vec::new(),
        diagnostics: Vec::new(),
    };
    let Some(finite) = report.sigma.finite_primes() else {
        for r in report.sigma.records.iter().filter(|r| r.in_sigma.is_none()) {
            report.diagnostics.push(format!(
                "sign at {} is {}; give membership in Σ explicitly",
                r.p, r.epsilon
            ));
        }
        return Ok(report);
    };
    let sel = select_structure(input, k, &report.sigma)?;
    if finite.is_empty() {
        report
            .warnings
            .push("Δ = 1: the quaternion algebra is split".into());
    }
    let adj = adjust_levels(&sel.order_type, input, k, &report.sigma)?;
    report.order_type_min = Some(sel.order_type.clone());
    report.alternatives = sel.alternatives;
    report.adjustments = adj.trace;
    report.diagnostics.extend(adj.violations);
    let (Some(t), Some(c_prime)) = (adj.order_type, adj.c_prime) else {
        report.verdict = Verdict::NoEmbedding;
        return Ok(report);
    };
    let kp = k.with_conductor(c_prime)?;
    let h = class_number(&kp)?;
    let level = t
        .level()
        .ok_or_else(|| EngineError::Input("level overflows u64".into()))?;
    report.certificate = vec![
        format!(
            "Σ = {}: B has discriminant {}",
            set_string(&finite),
            report.sigma.delta.unwrap_or(1)
        ),
        format!(
            "the Jacquet-Langlands lift lives on an order of type {}",
            describe(&sel.order_type)
        ),
        format!(
            "R of type {} lies in R_min, so S_2(R_min) ⊂ S_2(R) and J_R maps onto E",
            describe(&t)
        ),
        format!("R_{c_prime} embeds optimally into R_p at every p | {level}"),
    ];
    report.rationality_field = Some(format!("H_{c_prime}"));
    report.ring_class_degree = Some(h);
    report.conclusion = Some(format!(
        "if L'(E/K, chi, 1) != 0 and E has no CM over an imaginary quadratic subfield of H_{c_prime}, \
         then dim (E(H_{c_prime}) ⊗ C)^chi = 1"
    ));
    report.heegner_count = heegner_count(&t, &kp)?;
    report.global_embedding_count = global_embedding_count(&t, &kp)?;
    report.components = Some(component_data(&t));
    report.order_type = Some(t);
    report.level = Some(level);
    report.c_prime = Some(c_prime);
    report.exists = true;
    report.verdict = Verdict::Exists;
    Ok(report)
}

/// (N_Eic; N_Car; {(p: L, nu)}).
pub fn describe(t: &OrderType) -> String {
    let prod = |m: &BTreeMap<u64, u32>| -> u64 { m.iter().map(|(&p, &e)| p.pow(e)).product() };
    let d: Vec<String> = t
        .division_part
        .iter()
        .map(|(p, d)| format!("({p}: {}, {})", d.l, d.nu))
        .collect();
    format!(
        "({}; {}; {{{}}})",
        prod(&t.eichler_part),
        prod(&t.cartan_part),
        d.join(", ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(n: &[(u64, u32)], mode: Mode) -> CurveInput {
        CurveInput::with_defaults(n.to_vec(), mode).unwrap().0
    }

    fn ov(ps: &[(u64, bool)]) -> BTreeMap<u64, bool> {
        ps.iter().copied().collect()
    }

    #[test]
    fn conductor_three_character_on_level_99() {
        let k = QuadOrder::new(-4, 3).unwrap();
        let inp = input(&[(3, 2), (11, 1)], Mode::EllipticFixedConductor);
        let r = analyze(&inp, &k, &ov(&[(3, true)]), Assertions::default()).unwrap();
        assert!(r.exists);
        assert_eq!(r.c_prime, Some(3));
        assert_eq!(r.level, Some(99));
        let t = r.order_type.unwrap();
        assert_eq!(t.division_part[&3].nu, 2);
        assert_eq!(t.division_part[&11].nu, 1);
        assert!(t.eichler_part.is_empty() && t.cartan_part.is_empty());
        assert_eq!(r.heegner_count, Some(8));
        assert_eq!(r.components.unwrap().h_r(), Some(2));
        assert_eq!(r.rationality_field.as_deref(), Some("H_3"));
    }

    #[test]
    fn trivial_character_rejects_three_in_sigma() {
        let k = QuadOrder::new(-4, 1).unwrap();
        let inp = input(&[(3, 2), (11, 1)], Mode::EllipticFixedConductor);
        let err = analyze(
            &inp,
            &k,
            &ov(&[(3, true), (11, true)]),
            Assertions::default(),
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "3 cannot lie in Σ: ε=+1");
    }

    #[test]
    fn undetermined_sign_blocks() {
        let k = QuadOrder::new(-4, 3).unwrap();
        let inp = input(&[(3, 2), (11, 1)], Mode::EllipticFixedConductor);
        let r = analyze(&inp, &k, &BTreeMap::new(), Assertions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Blocked);
        assert!(!r.exists);
    }

    #[test]
    fn ramified_three_escalates_level() {
        for m in 1..=4u32 {
            let k = QuadOrder::new(-3, 3u64.pow(m)).unwrap();
            let inp = input(&[(3, 2), (11, 1)], Mode::EllipticFixedConductor);
            let r = analyze(
                &inp,
                &k,
                &ov(&[(3, true), (11, true)]),
                Assertions::default(),
            )
            .unwrap();
            assert!(r.exists, "m = {m}");
            assert_eq!(r.c_prime, Some(3u64.pow(m)));
            let a = r.adjustments.iter().find(|a| a.p == 3).unwrap();
            assert_eq!(a.n_prime, 2 * (m + 1));
            assert!(["div-1c", "div-1d", "div-1e"].contains(&a.rule_id.as_str()));
        }
    }

    #[test]
    fn abelian_mode_raises_conductor_at_eichler_prime() {
        let k3 = QuadOrder::new(-3, 1).unwrap();
        let mut inp = input(&[(5, 2), (7, 1)], Mode::AbelianAdjustable);
        inp.reps.insert(5, LocalRepType::steinberg(1));
        inp.sign_flags.insert(
            5,
            SignFlags {
                steinberg_norm_relation: None,
            },
        );
        let t_min = OrderType {
            eichler_part: [(5, 2), (7, 1)].into_iter().collect(),
            ..Default::default()
        };
        let sigma = build_sigma(&inp.n, &inp.reps, &inp.sign_flags, &k3, &BTreeMap::new()).unwrap();
        let adj = adjust_levels(&t_min, &inp, &k3, &sigma).unwrap();
        let a = adj.trace.iter().find(|a| a.p == 5).unwrap();
        assert_eq!((a.m_prime, a.n_prime), (1, 2));
        assert_eq!(adj.c_prime, Some(5));
    }

    #[test]
    fn steinberg_inert_in_sigma() {
        let k = QuadOrder::new(-4, 1).unwrap();
        let inp = input(&[(7, 1), (11, 1), (13, 1)], Mode::EllipticFixedConductor);
        let r = analyze(&inp, &k, &BTreeMap::new(), Assertions::default()).unwrap();
        assert_eq!(r.sigma.finite_primes(), Some(vec![7, 11]));
        assert!(r.exists);
        let a = r.adjustments.iter().find(|a| a.p == 7).unwrap();
        assert_eq!((a.m_prime, a.n_prime), (0, 1));
    }

    #[test]
    fn assumption_conditions() {
        let k = QuadOrder::new(-4, 3).unwrap();
        let inp = input(&[(3, 4), (5, 1)], Mode::EllipticFixedConductor);
        let sigma =
            build_sigma(&inp.n, &inp.reps, &inp.sign_flags, &k, &ov(&[(3, false)])).unwrap();
        let a = check_assumption_2n(&inp, &k, &sigma);
        assert_eq!(a.status(4), ConditionStatus::Fail);
        assert_eq!(detect_missing_cases(&inp, &k, &sigma).flag1, Some(true));

        let k = QuadOrder::new(-4, 1).unwrap();
        let mut inp = input(&[(2, 4), (3, 1)], Mode::EllipticFixedConductor);
        inp.flags.two_minimal = true;
        let sigma = build_sigma(&inp.n, &inp.reps, &inp.sign_flags, &k, &ov(&[(2, true)])).unwrap();
        assert_eq!(
            check_assumption_2n(&inp, &k, &sigma).status(2),
            ConditionStatus::Fail
        );
    }

    #[test]
    fn primitive_rejects_even_two_part() {
        let mut inp = input(&[(2, 4), (3, 1)], Mode::EllipticFixedConductor);
        inp.flags.primitive = true;
        assert!(matches!(inp.validate(), Err(EngineError::Input(_))));
    }
}
