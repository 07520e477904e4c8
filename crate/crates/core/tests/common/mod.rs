#![allow(dead_code)]

use std::collections::BTreeMap;

use heegner_core::engine::{CurveFlags, CurveInput, Mode};
use heegner_core::localdata::{InducingField, LocalRepType, RepKind};
use heegner_core::quadarith::{is_fundamental, splitting_at, QuadOrder, SplittingType};
use heegner_core::signs::{build_sigma, SigmaReport, SignFlags};
use rand::seq::SliceRandom;
use rand::Rng;

pub const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

pub fn fundamental_discs(limit: i64) -> Vec<i64> {
    (3..=limit)
        .map(|d| -d)
        .filter(|&d| is_fundamental(d))
        .collect()
}

fn sc(n: u32, inducing: InducingField, psi: u32) -> LocalRepType {
    LocalRepType::supercuspidal(n, inducing, psi)
}

fn ps(n: u32) -> LocalRepType {
    LocalRepType {
        kind: RepKind::PrincipalSeries,
        n,
    }
}

/// A random admissible local type with exponent e at p.
pub fn random_rep<R: Rng>(rng: &mut R, p: u64, e: u32) -> LocalRepType {
    let ram = InducingField::Ramified(None);
    let unram = InducingField::Unramified;
    let choices: Vec<LocalRepType> = match (p, e) {
        (_, 1) => vec![LocalRepType::steinberg(0)],
        (2, 2) => vec![sc(2, unram, 1), ps(2)],
        (_, 2) => vec![
            sc(2, ram, 1),
            sc(2, unram, 1),
            ps(2),
            LocalRepType::steinberg(1),
        ],
        (3, 3) | (3, 5) => vec![sc(e, ram, e - 1)],
        (3, 4) => vec![sc(4, unram, 2), ps(4)],
        (2, 3) => vec![sc(3, ram, 2)],
        (2, 5) => vec![sc(5, ram, 3)],
        (2, 7) => vec![LocalRepType {
            kind: RepKind::Supercuspidal {
                inducing: ram,
                psi_conductor: 0,
                minimal: true,
                exceptional: true,
            },
            n: 7,
        }],
        _ => unreachable!("exponent {e} at {p}"),
    };
    *choices.choose(rng).unwrap()
}

fn exponents(p: u64) -> &'static [u32] {
    match p {
        2 => &[1, 2, 3, 5, 7],
        3 => &[1, 2, 3, 4, 5],
        _ => &[1, 2],
    }
}

pub struct Case {
    pub input: CurveInput,
    pub k: QuadOrder,
}

/// Random curve data over primes <= 13 with N <= 10^6, a random character
/// and relation flags only where the conductors allow them.
pub fn random_case<R: Rng>(rng: &mut R, discs: &[i64], mode: Mode) -> Option<Case> {
    let count = rng.gen_range(1..=3);
    let mut ps: Vec<u64> = PRIMES.choose_multiple(rng, count).copied().collect();
    ps.sort_unstable();
    let mut n = Vec::new();
    let mut total: u64 = 1;
    for &p in &ps {
        let e = *exponents(p).choose(rng).unwrap();
        total = total.checked_mul(p.pow(e))?;
        n.push((p, e));
    }
    if total > 1_000_000 {
        return None;
    }
    let disc = *discs.choose(rng).unwrap();
    let mut c: u64 = 1;
    for &p in &PRIMES {
        if rng.gen_bool(0.35) {
            c *= p.pow(rng.gen_range(1..=if p <= 3 { 4 } else { 2 }));
        }
    }
    let k = QuadOrder::new(disc, c).ok()?;
    let mut reps = BTreeMap::new();
    let mut sign_flags = BTreeMap::new();
    for &(p, e) in &n {
        let rep = random_rep(rng, p, e);
        if let RepKind::Steinberg { twist_conductor: a } = rep.kind {
            let s = splitting_at(&k, p);
            let m = k.m_at(p);
            let cond = match s {
                SplittingType::Inert => Some(a),
                // a = 1 with K ramified and m = 0 is left undetermined on purpose
                SplittingType::Ramified if a == 0 => Some(0),
                _ => None,
            };
            if cond == Some(m) && rng.gen_bool(0.8) {
                // unramified on both sides at an inert prime: the relation is forced
                let forced = s == SplittingType::Inert && a == 0;
                sign_flags.insert(
                    p,
                    SignFlags {
                        steinberg_norm_relation: Some(forced || rng.gen_bool(0.5)),
                    },
                );
            }
        }
        reps.insert(p, rep);
    }
    Some(Case {
        input: CurveInput {
            n,
            reps,
            sign_flags,
            flags: CurveFlags {
                primitive: true,
                two_minimal: true,
            },
            mode,
        },
        k,
    })
}

pub fn sigma_of(case: &Case, overrides: &BTreeMap<u64, bool>) -> SigmaReport {
    let i = &case.input;
    build_sigma(&i.n, &i.reps, &i.sign_flags, &case.k, overrides)
        .expect("flags are consistent by construction")
}
