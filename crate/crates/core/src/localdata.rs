//! Local representation types at primes of bad reduction, the local level
//! of the quaternionic lift, and the t / mu symbols of quadratic extensions.

use crate::quadarith::LocalQuadExt;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalDataError {
    #[error("conductor exponent {n} is not admissible at p = {p}")]
    Inadmissible { p: u64, n: u32 },
    #[error("p = 2 with even exponent {0} >= 4 is a twist of lower level (out of scope)")]
    TwistCase(u32),
    #[error("local level requires s >= 1")]
    ZeroLevel,
    #[error("multiplicity is defined for a in {{1, 2}}, got {0}")]
    Multiplicity(u32),
    #[error("inconsistent local type at p = {p}: {reason}")]
    Inconsistent { p: u64, reason: String },
}

/// The field F_p a supercuspidal is induced from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "class")]
pub enum InducingField {
    Unramified,
    /// Ramified; the exact class when known.
    Ramified(Option<LocalQuadExt>),
}

impl InducingField {
    pub fn is_ramified(self) -> bool {
        matches!(self, InducingField::Ramified(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RepKind {
    PrincipalSeries,
    Steinberg {
        twist_conductor: u32,
    },
    Supercuspidal {
        inducing: InducingField,
        psi_conductor: u32,
        minimal: bool,
        exceptional: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalRepType {
    #[serde(flatten)]
    pub kind: RepKind,
    pub n: u32,
}

impl LocalRepType {
    pub fn steinberg(a: u32) -> Self {
        let n = if a == 0 { 1 } else { 2 * a };
        LocalRepType {
            kind: RepKind::Steinberg { twist_conductor: a },
            n,
        }
    }

    pub fn supercuspidal(n: u32, inducing: InducingField, psi_conductor: u32) -> Self {
        LocalRepType {
            kind: RepKind::Supercuspidal {
                inducing,
                psi_conductor,
                minimal: true,
                exceptional: false,
            },
            n,
        }
    }

    pub fn is_steinberg(&self) -> bool {
        matches!(self.kind, RepKind::Steinberg { .. })
    }

    pub fn is_supercuspidal(&self) -> bool {
        matches!(self.kind, RepKind::Supercuspidal { .. })
    }

    /// Checks the structural constraints on (kind, n) at p.
    pub fn validate(&self, p: u64) -> Result<(), LocalDataError> {
        let bad = |reason: &str| {
            Err(LocalDataError::Inconsistent {
                p,
                reason: reason.to_string(),
            })
        };
        admissible(p, self.n)?;
        match self.kind {
            RepKind::PrincipalSeries => {
                if self.n % 2 == 1 {
                    return bad(
                        "principal series with trivial central character has even exponent",
                    );
                }
            }
            RepKind::Steinberg { twist_conductor: a } => {
                let ok_a = if p == 2 {
                    matches!(a, 0 | 2 | 3)
                } else {
                    a <= 1
                };
                if !ok_a {
                    return bad("twist conductor out of range");
                }
                let n = if a == 0 { 1 } else { 2 * a };
                if n != self.n {
                    return bad("Steinberg exponent must be 1 (a = 0) or 2a");
                }
            }
            RepKind::Supercuspidal {
                inducing,
                exceptional,
                ..
            } => {
                if self.n < 2 {
                    return bad("supercuspidal exponent is at least 2");
                }
                if exceptional != (p == 2 && self.n == 7) {
                    return bad("the exceptional type occurs exactly at p = 2 with n = 7");
                }
                if let InducingField::Ramified(Some(l)) = inducing {
                    if !l.valid_at(p) || !l.is_ramified() {
                        return bad("inducing class is not a ramified class at p");
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for LocalRepType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RepKind::PrincipalSeries => write!(f, "ps(n={})", self.n),
            RepKind::Steinberg { twist_conductor } => write!(f, "st(a={twist_conductor})"),
            RepKind::Supercuspidal {
                inducing,
                psi_conductor,
                exceptional,
                ..
            } => {
                let fld = match inducing {
                    InducingField::Unramified => "unram".to_string(),
                    InducingField::Ramified(None) => "ram".to_string(),
                    InducingField::Ramified(Some(l)) => l.to_string(),
                };
                let ex = if exceptional { ",exceptional" } else { "" };
                write!(f, "sc({fld},{psi_conductor}{ex};n={})", self.n)
            }
        }
    }
}

fn admissible(p: u64, n: u32) -> Result<(), LocalDataError> {
    let max = match p {
        2 => 8,
        3 => 5,
        _ => 2,
    };
    if n > max {
        Err(LocalDataError::Inadmissible { p, n })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefaultRep {
    pub rep: LocalRepType,
    pub override_recommended: bool,
}

/// The type assigned to exponent n at p when the caller gives no override.
pub fn default_rep_type(p: u64, n: u32) -> Result<DefaultRep, LocalDataError> {
    admissible(p, n)?;
    if n == 0 {
        return Err(LocalDataError::Inadmissible { p, n });
    }
    let ram = InducingField::Ramified(None);
    let (rep, ambiguous) = match (p, n) {
        (_, 1) => (LocalRepType::steinberg(0), false),
        (2, 2) => (
            LocalRepType::supercuspidal(2, InducingField::Unramified, 1),
            false,
        ),
        (_, 2) => (LocalRepType::supercuspidal(2, ram, 1), true),
        (3, 3) | (3, 5) => (LocalRepType::supercuspidal(n, ram, n - 1), false),
        (3, 4) => (
            LocalRepType::supercuspidal(4, InducingField::Unramified, 2),
            false,
        ),
        (2, 3) => (LocalRepType::supercuspidal(3, ram, 2), true),
        (2, 5) => (LocalRepType::supercuspidal(5, ram, 3), false),
        (2, 7) => (
            LocalRepType {
                kind: RepKind::Supercuspidal {
                    inducing: ram,
                    psi_conductor: 0,
                    minimal: true,
                    exceptional: true,
                },
                n: 7,
            },
            false,
        ),
        (2, 4) => (LocalRepType::steinberg(2), true),
        (2, 6) => (LocalRepType::steinberg(3), true),
        (2, 8) => (LocalRepType::supercuspidal(8, ram, 0), true),
        _ => return Err(LocalDataError::Inadmissible { p, n }),
    };
    Ok(DefaultRep {
        rep,
        override_recommended: ambiguous,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JLLevelDatum {
    pub l_class_choices: Vec<LocalQuadExt>,
    pub n: u32,
}

/// Local (L, n) datum of the minimal order at a prime of the discriminant.
pub fn jl_local_level(p: u64, s: u32) -> Result<JLLevelDatum, LocalDataError> {
    use LocalQuadExt::*;
    if s == 0 {
        return Err(LocalDataError::ZeroLevel);
    }
    let choices = if s % 2 == 1 {
        vec![Unramified]
    } else if p == 2 {
        if s >= 4 {
            return Err(LocalDataError::TwistCase(s));
        }
        vec![Sqrt3, Sqrt7]
    } else {
        vec![RamifiedUnit, RamifiedPrime]
    };
    Ok(JLLevelDatum {
        l_class_choices: choices,
        n: s,
    })
}

pub fn t_symbol(l: LocalQuadExt, p: u64) -> i32 {
    use LocalQuadExt::*;
    match l {
        Unramified => -1,
        RamifiedUnit | RamifiedPrime => {
            debug_assert!(p != 2);
            0
        }
        Sqrt3 | Sqrt7 => 1,
        Sqrt2 | Sqrt6 | Sqrt10 | Sqrt14 => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mu {
    Finite(u32),
    Infinity,
}

pub fn mu_symbol(l: LocalQuadExt, l2: LocalQuadExt, p: u64) -> Mu {
    if l == l2 {
        return Mu::Infinity;
    }
    let (a, b) = {
        let (x, y) = (t_symbol(l, p), t_symbol(l2, p));
        (x.min(y), x.max(y))
    };
    Mu::Finite(match (a, b) {
        (-1, _) => 1,
        (0, 0) => 2,
        (1, 1) | (1, 2) => 3,
        (2, 2) => 5,
        _ => unreachable!("t-symbols ({a}, {b}) never occur together"),
    })
}

pub fn jl_multiplicity(a: u32) -> Result<u32, LocalDataError> {
    match a {
        1 | 2 => Ok(a),
        _ => Err(LocalDataError::Multiplicity(a)),
    }
}
