//! The analyze request and its textual pieces: rep overrides, Σ lists.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::{
    analyze, Assertions, CurveFlags, CurveInput, EngineError, HeegnerReport, Mode, SCHEMA_VERSION,
};
use crate::localdata::{InducingField, LocalRepType, RepKind};
use crate::quadarith::{factorize, LocalQuadExt, QuadOrder};
use crate::signs::SignFlags;

pub const MAX_FACTOR: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeRequest {
    #[serde(default = "schema_version")]
    pub schema_version: String,
    /// N as [prime, exponent] pairs.
    pub n: Vec<(u64, u32)>,
    pub disc: i64,
    #[serde(default = "one")]
    pub c: u64,
    /// Local types; primes left out get the default type.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reps: BTreeMap<u64, LocalRepType>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sign_flags: BTreeMap<u64, SignFlags>,
    #[serde(default)]
    pub flags: CurveFlags,
    #[serde(default)]
    pub mode: Mode,
    /// The whole finite part of Σ; primes of N not listed are outside.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<u64>>,
    /// Membership at single primes.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sigma_overrides: BTreeMap<u64, bool>,
    #[serde(default)]
    pub assertions: Assertions,
}

fn schema_version() -> String {
    SCHEMA_VERSION.to_string()
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeOutput {
    pub schema_version: &'static str,
    pub request: AnalyzeRequest,
    pub report: HeegnerReport,
    /// Primes whose default local type was one guess among several.
    pub defaulted_ambiguous: Vec<u64>,
}

pub fn factor_n(n: u64) -> Result<Vec<(u64, u32)>, String> {
    if n < 2 {
        return Err(format!("N = {n} must be at least 2"));
    }
    if n > MAX_FACTOR {
        return Err(format!(
            "N = {n} exceeds 10^12; pass it factored in a request file"
        ));
    }
    Ok(factorize(n))
}

impl AnalyzeRequest {
    pub fn new(n: Vec<(u64, u32)>, disc: i64, c: u64) -> Self {
        AnalyzeRequest {
            schema_version: schema_version(),
            n,
            disc,
            c,
            reps: BTreeMap::new(),
            sign_flags: BTreeMap::new(),
            flags: CurveFlags::default(),
            mode: Mode::default(),
            sigma: None,
            sigma_overrides: BTreeMap::new(),
            assertions: Assertions::default(),
        }
    }

    pub fn overrides(&self) -> Result<BTreeMap<u64, bool>, EngineError> {
        let Some(list) = &self.sigma else {
            return Ok(self.sigma_overrides.clone());
        };
        if !self.sigma_overrides.is_empty() {
            return Err(EngineError::Input(
                "give either sigma or sigma_overrides, not both".into(),
            ));
        }
        let mut o: BTreeMap<u64, bool> = self.n.iter().map(|&(p, _)| (p, false)).collect();
        for &p in list {
            o.insert(p, true);
        }
        Ok(o)
    }

    pub fn curve_input(&self) -> Result<(CurveInput, Vec<u64>), EngineError> {
        let mut n = self.n.clone();
        n.sort_unstable();
        let defaults: Vec<(u64, u32)> = n
            .iter()
            .copied()
            .filter(|(p, _)| !self.reps.contains_key(p))
            .collect();
        let (mut input, guessed) = CurveInput::with_defaults(defaults, self.mode)?;
        input.n = n;
        input.reps.extend(self.reps.iter().map(|(&p, &r)| (p, r)));
        input.sign_flags = self.sign_flags.clone();
        input.flags = self.flags;
        Ok((input, guessed))
    }

    pub fn run(&self) -> Result<AnalyzeOutput, EngineError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(EngineError::Input(format!(
                "unsupported schema_version {:?}",
                self.schema_version
            )));
        }
        let k = QuadOrder::new(self.disc, self.c)?;
        let (input, guessed) = self.curve_input()?;
        let report = analyze(&input, &k, &self.overrides()?, self.assertions)?;
        Ok(AnalyzeOutput {
            schema_version: SCHEMA_VERSION,
            request: self.clone(),
            report,
            defaulted_ambiguous: guessed,
        })
    }
}

/// A per-prime override `p:kind:params`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeOverride {
    Rep(u64, RepSpec),
    Relation(u64, bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepSpec {
    PrincipalSeries,
    Steinberg(u32),
    Supercuspidal {
        inducing: InducingField,
        psi: u32,
        exceptional: bool,
        minimal: bool,
    },
}

impl RepSpec {
    /// The type at a prime with exponent n.
    pub fn with_exponent(self, n: u32) -> LocalRepType {
        match self {
            RepSpec::PrincipalSeries => LocalRepType {
                kind: RepKind::PrincipalSeries,
                n,
            },
            RepSpec::Steinberg(a) => LocalRepType::steinberg(a),
            RepSpec::Supercuspidal {
                inducing,
                psi,
                exceptional,
                minimal,
            } => LocalRepType {
                kind: RepKind::Supercuspidal {
                    inducing,
                    psi_conductor: psi,
                    minimal,
                    exceptional,
                },
                n,
            },
        }
    }
}

/// Parses `3:sc:ram,2`, `7:st:0`, `5:ps`, `7:rel:true`.
pub fn parse_override(s: &str) -> Result<PrimeOverride, String> {
    let mut it = s.trim().splitn(3, ':');
    let p: u64 = it
        .next()
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| format!("bad prime in override {s:?}"))?;
    let kind = it.next().map(str::trim).unwrap_or("");
    let params: Vec<&str> = it
        .next()
        .map(|t| t.split(',').map(str::trim).collect())
        .unwrap_or_default();
    let bad = || {
        format!("bad override {s:?}: expected p:ps, p:st:a, p:sc:field,psi[,exceptional][,nonminimal] or p:rel:bool")
    };
    let spec = match kind {
        "ps" => RepSpec::PrincipalSeries,
        "st" => RepSpec::Steinberg(
            params
                .first()
                .and_then(|a| a.parse().ok())
                .ok_or_else(bad)?,
        ),
        "sc" => {
            let field = *params.first().ok_or_else(bad)?;
            let inducing = match field {
                "unram" | "unramified" => InducingField::Unramified,
                "ram" | "ramified" => InducingField::Ramified(None),
                f => InducingField::Ramified(Some(LocalQuadExt::parse(f).ok_or_else(bad)?)),
            };
            let psi = params.get(1).and_then(|a| a.parse().ok()).ok_or_else(bad)?;
            let mut exceptional = false;
            let mut minimal = true;
            for extra in &params[2..] {
                match *extra {
                    "exceptional" => exceptional = true,
                    "nonminimal" => minimal = false,
                    _ => return Err(bad()),
                }
            }
            RepSpec::Supercuspidal {
                inducing,
                psi,
                exceptional,
                minimal,
            }
        }
        "rel" => {
            let b = params
                .first()
                .and_then(|a| a.parse().ok())
                .ok_or_else(bad)?;
            return Ok(PrimeOverride::Relation(p, b));
        }
        _ => return Err(bad()),
    };
    Ok(PrimeOverride::Rep(p, spec))
}

impl AnalyzeRequest {
    pub fn apply_override(&mut self, o: PrimeOverride) -> Result<(), String> {
        match o {
            PrimeOverride::Rep(p, spec) => {
                let e = self
                    .n
                    .iter()
                    .find(|&&(q, _)| q == p)
                    .map(|&(_, e)| e)
                    .ok_or_else(|| format!("override at {p}, which does not divide N"))?;
                self.reps.insert(p, spec.with_exponent(e));
            }
            PrimeOverride::Relation(p, b) => {
                self.sign_flags
                    .entry(p)
                    .or_default()
                    .steinberg_norm_relation = Some(b);
            }
        }
        Ok(())
    }
}

pub fn parse_sigma(s: &str) -> Result<Vec<u64>, String> {
    let s = s.trim();
    if s.is_empty() || s == "none" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad prime {t:?} in Σ list"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn override_syntax() {
        assert_eq!(
            parse_override("3:sc:ram,2").unwrap(),
            PrimeOverride::Rep(
                3,
                RepSpec::Supercuspidal {
                    inducing: InducingField::Ramified(None),
                    psi: 2,
                    exceptional: false,
                    minimal: true
                }
            )
        );
        assert_eq!(
            parse_override("7:st:0").unwrap(),
            PrimeOverride::Rep(7, RepSpec::Steinberg(0))
        );
        assert_eq!(
            parse_override("7:rel:true").unwrap(),
            PrimeOverride::Relation(7, true)
        );
        assert!(parse_override("7:xx").is_err());
        assert!(parse_override("x:st:0").is_err());
    }

    #[test]
    fn sigma_list_is_total() {
        let mut r = AnalyzeRequest::new(vec![(3, 2), (11, 1)], -4, 3);
        r.sigma = Some(vec![11]);
        assert_eq!(
            r.overrides().unwrap(),
            [(3, false), (11, true)].into_iter().collect()
        );
    }

    #[test]
    fn unknown_fields_rejected() {
        let j = r#"{"n": [[3, 2], [11, 1]], "disc": -4, "c": 3, "bogus": 1}"#;
        assert!(serde_json::from_str::<AnalyzeRequest>(j).is_err());
    }
}
