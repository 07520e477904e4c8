//! Local optimal-embedding tables (Eichler, Cartan, division) and their
//! assembly into global embedding and Heegner point counts.

use crate::localdata::t_symbol;
use crate::quadarith::{
    class_number, eichler_factor, eichler_symbol, LocalQuadExt, QuadError, QuadOrder, SplittingType,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderTypeError {
    #[error("prime {0} appears in more than one part of the order type")]
    Overlap(u64),
    #[error("division part has an odd number of primes")]
    OddDiscriminant,
    #[error("zero exponent at {0}")]
    ZeroExponent(u64),
    #[error("{l} is not a quadratic extension of Q_{p}")]
    BadClass { p: u64, l: LocalQuadExt },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisionDatum {
    pub l: LocalQuadExt,
    pub nu: u32,
}

/// (N_Eic; N_Car; {(L_p, nu_p)}).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderType {
    pub eichler_part: BTreeMap<u64, u32>,
    pub cartan_part: BTreeMap<u64, u32>,
    pub division_part: BTreeMap<u64, DivisionDatum>,
}

impl OrderType {
    pub fn validate(&self) -> Result<(), OrderTypeError> {
        for (&p, &e) in self.eichler_part.iter().chain(self.cartan_part.iter()) {
            if e == 0 {
                return Err(OrderTypeError::ZeroExponent(p));
            }
        }
        for (&p, d) in &self.division_part {
            if d.nu == 0 {
                return Err(OrderTypeError::ZeroExponent(p));
            }
            if !d.l.valid_at(p) {
                return Err(OrderTypeError::BadClass { p, l: d.l });
            }
        }
        for p in self.eichler_part.keys() {
            if self.cartan_part.contains_key(p) || self.division_part.contains_key(p) {
                return Err(OrderTypeError::Overlap(*p));
            }
        }
        for p in self.cartan_part.keys() {
            if self.division_part.contains_key(p) {
                return Err(OrderTypeError::Overlap(*p));
            }
        }
        if self.division_part.len() % 2 == 1 {
            return Err(OrderTypeError::OddDiscriminant);
        }
        Ok(())
    }

    pub fn delta(&self) -> u64 {
        self.division_part.keys().product()
    }

    /// N_Eic · N_Car² · ∏ p^{nu_p}; None on overflow.
    pub fn level(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for (&p, &e) in &self.eichler_part {
            acc = acc.checked_mul(p.checked_pow(e)?)?;
        }
        for (&p, &e) in &self.cartan_part {
            acc = acc.checked_mul(p.checked_pow(2 * e)?)?;
        }
        for (&p, d) in &self.division_part {
            acc = acc.checked_mul(p.checked_pow(d.nu)?)?;
        }
        Some(acc)
    }

    pub fn level_exponent(&self, p: u64) -> u32 {
        if let Some(&e) = self.eichler_part.get(&p) {
            e
        } else if let Some(&e) = self.cartan_part.get(&p) {
            2 * e
        } else if let Some(d) = self.division_part.get(&p) {
            d.nu
        } else {
            0
        }
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .eichler_part
            .keys()
            .chain(self.cartan_part.keys())
            .chain(self.division_part.keys())
            .copied()
            .collect();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingVerdict {
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    pub rule_id: String,
}

impl EmbeddingVerdict {
    fn new(exists: bool, count: Option<u64>, rule: &str) -> Self {
        EmbeddingVerdict {
            exists,
            count,
            rule_id: rule.to_string(),
        }
    }
}

pub fn eichler_exists(m: u32, n: u32, s: SplittingType) -> EmbeddingVerdict {
    let (exists, rule) = match s {
        SplittingType::Split => (true, "eic-split"),
        SplittingType::Inert => (2 * m >= n, "eic-unram"),
        SplittingType::Ramified => (2 * m + 1 >= n, "eic-ram"),
    };
    let count = match n {
        0 => Some(1),
        1 => Some((1 + eichler_factor(m, s)) as u64),
        _ => None,
    };
    EmbeddingVerdict::new(exists, count, rule)
}

pub fn cartan_exists(m: u32, _n: u32) -> EmbeddingVerdict {
    EmbeddingVerdict::new(m == 0, None, "car")
}

/// The n = 2 rho or n = 2 rho + 1 parameter.
fn rho(n: u32) -> i64 {
    (n / 2) as i64
}

pub fn division_exists(
    p: u64,
    m: u32,
    n: u32,
    kc: LocalQuadExt,
    lc: LocalQuadExt,
) -> EmbeddingVerdict {
    let m = m as i64;
    let r = rho(n);
    let no_row = EmbeddingVerdict::new(false, None, "no-row");
    if n == 0 || !kc.valid_at(p) || !lc.valid_at(p) {
        return no_row;
    }
    let odd = n % 2 == 1;
    let (exists, rule) = if p != 2 {
        match (odd, kc.is_ramified(), lc.is_ramified()) {
            (true, false, false) => (m <= r, "div-1a"),
            (true, true, false) => (m == r, "div-1b"),
            (false, false, true) => (m == r, "div-1c"),
            (false, true, true) if kc != lc => (m == r - 1, "div-1d"),
            (false, true, true) => (m <= r - 1, "div-1e"),
            _ => return no_row,
        }
    } else {
        let (tk, tl) = (t_symbol(kc, 2), t_symbol(lc, 2));
        if odd {
            if tl != -1 {
                return no_row;
            }
            match (n, tk) {
                (1, _) => (m == 0, "div-2a"),
                (_, -1) => (m <= r, "div-2f"),
                _ => (m == r, "div-2g"),
            }
        } else {
            match (tk, tl) {
                (-1, 1) => (m == r, "div-2b"),
                (-1, 2) => (m == r, "div-2h"),
                (1, 1) if kc != lc => (m == r - 1, "div-2c"),
                (1, 1) => (m <= r - 1, "div-2d"),
                (2, 1) => (m == r - 1, "div-2e"),
                (1, 2) => (m == r - 1, "div-2i"),
                (2, 2) if kc != lc => (m == r - 1 || m == r - 2, "div-2j"),
                (2, 2) => (m <= r - 1, "div-2k"),
                _ => return no_row,
            }
        }
    };
    EmbeddingVerdict::new(exists, None, rule)
}

/// Optimal embeddings of O_m into the order of level p^2 in D_p, p odd.
pub fn division_count_nu2(p: u64, m: u32, s: SplittingType) -> u64 {
    match (m, s) {
        (1, SplittingType::Inert) => 2,
        (0, SplittingType::Ramified) => p + 1,
        _ => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum ComponentData {
    Determined {
        c: Vec<u64>,
        h_r: u64,
        /// p* = (-1)^{(p-1)/2} p for each p in C; components live over Q(sqrt p*, ...).
        field_desc: Vec<i64>,
    },
    Undetermined {
        reason: String,
    },
}

impl ComponentData {
    pub fn h_r(&self) -> Option<u64> {
        match self {
            ComponentData::Determined { h_r, .. } => Some(*h_r),
            ComponentData::Undetermined { .. } => None,
        }
    }
}

pub fn component_data(t: &OrderType) -> ComponentData {
    if let Some(d) = t.division_part.get(&2) {
        if d.nu >= 2 {
            return ComponentData::Undetermined {
                reason: "2 divides the discriminant with nu_2 >= 2".to_string(),
            };
        }
    }
    let c: Vec<u64> = t
        .division_part
        .iter()
        .filter(|(_, d)| d.nu > 1 && d.l.is_ramified())
        .map(|(&p, _)| p)
        .collect();
    let field_desc = c
        .iter()
        .map(|&p| if p % 4 == 1 { p as i64 } else { -(p as i64) })
        .collect();
    ComponentData::Determined {
        h_r: 1u64 << c.len(),
        c,
        field_desc,
    }
}

fn local_factors(t: &OrderType, k: &QuadOrder) -> Option<u64> {
    if !t.cartan_part.is_empty() {
        return None;
    }
    let mut prod = 1u64;
    for (&p, &nu) in &t.eichler_part {
        if nu > 1 {
            return None;
        }
        let s = crate::quadarith::splitting_at(k, p);
        let m = k.m_at(p);
        prod *= eichler_exists(m, nu, s).count?;
    }
    for (&p, d) in &t.division_part {
        let s = crate::quadarith::splitting_at(k, p);
        if s.is_split() {
            return Some(0);
        }
        let m = k.m_at(p);
        let f = match d.nu {
            1 => (1 - eichler_symbol(m, s).ok()?) as u64,
            2 if p != 2 && d.l.is_ramified() => division_count_nu2(p, m, s),
            _ => return None,
        };
        prod *= f;
    }
    Some(prod)
}

/// v(R_c, R) = h(R_c)/h(R) · ∏ v_l, when every local factor has a formula.
pub fn global_embedding_count(t: &OrderType, k: &QuadOrder) -> Result<Option<u64>, QuadError> {
    let h_r = match component_data(t).h_r() {
        Some(h) => h,
        None => return Ok(None),
    };
    let Some(hc) = heegner_count(t, k)? else {
        return Ok(None);
    };
    Ok(Some(hc / h_r))
}

/// h(R_c) · ∏ v_l.
pub fn heegner_count(t: &OrderType, k: &QuadOrder) -> Result<Option<u64>, QuadError> {
    let Some(f) = local_factors(t, k) else {
        return Ok(None);
    };
    let hc = class_number(k)?;
    Ok(hc.checked_mul(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use LocalQuadExt::*;

    #[test]
    fn eichler_rows() {
        let v = eichler_exists(0, 1, SplittingType::Inert);
        assert!(!v.exists);
        assert_eq!(v.count, Some(0));
        assert!(eichler_exists(1, 2, SplittingType::Inert).exists);
        let v = eichler_exists(0, 1, SplittingType::Ramified);
        assert!(v.exists);
        assert_eq!(v.count, Some(1));
        assert_eq!(eichler_exists(1, 1, SplittingType::Inert).count, Some(2));
        assert_eq!(eichler_exists(3, 4, SplittingType::Inert).count, None);
    }

    #[test]
    fn eichler_monotone_and_split_total() {
        for s in [SplittingType::Inert, SplittingType::Ramified] {
            for n in 0..=10 {
                for m in 0..10 {
                    if eichler_exists(m, n, s).exists {
                        assert!(eichler_exists(m + 1, n, s).exists);
                    }
                }
            }
        }
        for m in 0..=10 {
            for n in 0..=10 {
                assert!(eichler_exists(m, n, SplittingType::Split).exists);
            }
        }
    }

    #[test]
    fn count_consistent_with_existence() {
        for s in [
            SplittingType::Inert,
            SplittingType::Ramified,
            SplittingType::Split,
        ] {
            for m in 0..5 {
                for n in 0..3 {
                    let v = eichler_exists(m, n, s);
                    if let Some(c) = v.count {
                        assert_eq!(c > 0, v.exists, "m={m} n={n} {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn cartan_rows() {
        assert!(cartan_exists(0, 3).exists);
        assert!(!cartan_exists(1, 1).exists);
        assert!(!cartan_exists(2, 2).exists);
    }

    #[test]
    fn division_examples() {
        assert!(division_exists(5, 1, 3, Unramified, Unramified).exists);
        assert!(!division_exists(5, 0, 3, RamifiedUnit, Unramified).exists);
        let v = division_exists(2, 1, 4, Sqrt2, Sqrt6);
        assert!(v.exists);
        assert_eq!(v.rule_id, "div-2j");
        let v = division_exists(3, 1, 4, RamifiedUnit, RamifiedUnit);
        assert!(v.exists);
        assert_eq!(v.rule_id, "div-1e");
        assert_eq!(
            division_exists(3, 0, 3, Unramified, RamifiedPrime).rule_id,
            "no-row"
        );
        assert_eq!(
            division_exists(2, 0, 2, Sqrt3, Unramified).rule_id,
            "no-row"
        );
    }

    #[test]
    fn exactly_one_row_fires_on_consistent_cells() {
        for p in [2u64, 3, 5] {
            for &k in LocalQuadExt::classes(p) {
                for &l in LocalQuadExt::classes(p) {
                    for n in 1..=7u32 {
                        let consistent = (n % 2 == 1) != l.is_ramified();
                        for m in 0..=4 {
                            let v = division_exists(p, m, n, k, l);
                            assert_eq!(v.rule_id != "no-row", consistent, "{p} {k} {l} {n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nu2_counts() {
        assert_eq!(division_count_nu2(3, 1, SplittingType::Inert), 2);
        assert_eq!(division_count_nu2(3, 0, SplittingType::Ramified), 4);
        assert_eq!(division_count_nu2(3, 2, SplittingType::Inert), 0);
    }

    fn div(entries: &[(u64, LocalQuadExt, u32)]) -> OrderType {
        let mut t = OrderType::default();
        for &(p, l, nu) in entries {
            t.division_part.insert(p, DivisionDatum { l, nu });
        }
        t
    }

    #[test]
    fn components() {
        let t = div(&[(3, RamifiedUnit, 2), (11, Unramified, 1)]);
        match component_data(&t) {
            ComponentData::Determined { c, h_r, field_desc } => {
                assert_eq!(c, vec![3]);
                assert_eq!(h_r, 2);
                assert_eq!(field_desc, vec![-3]);
            }
            other => panic!("{other:?}"),
        }
        let t = div(&[(3, Unramified, 1), (11, Unramified, 1)]);
        assert_eq!(component_data(&t).h_r(), Some(1));
        let t = div(&[(2, Sqrt2, 3), (3, Unramified, 1)]);
        assert!(component_data(&t).h_r().is_none());
    }

    #[test]
    fn global_counts() {
        let t = div(&[(3, RamifiedUnit, 2), (11, Unramified, 1)]);
        let k = QuadOrder::new(-4, 3).unwrap();
        let hc = class_number(&k).unwrap();
        assert_eq!(heegner_count(&t, &k).unwrap(), Some(hc * 4));
        assert_eq!(global_embedding_count(&t, &k).unwrap(), Some(hc * 2));
        let k1 = QuadOrder::new(-4, 1).unwrap();
        assert_eq!(heegner_count(&t, &k1).unwrap(), Some(0));
        let t0 = OrderType::default();
        let k = QuadOrder::new(-23, 1).unwrap();
        assert_eq!(heegner_count(&t0, &k).unwrap(), Some(3));
    }

    #[test]
    fn order_type_invariants() {
        let mut t = div(&[(3, RamifiedUnit, 2), (11, Unramified, 1)]);
        t.eichler_part.insert(5, 1);
        t.cartan_part.insert(7, 1);
        assert!(t.validate().is_ok());
        assert_eq!(t.level(), Some(9 * 11 * 5 * 49));
        assert_eq!(t.delta(), 33);
        t.eichler_part.insert(3, 1);
        assert_eq!(t.validate(), Err(OrderTypeError::Overlap(3)));
        let t = div(&[(3, RamifiedUnit, 2)]);
        assert_eq!(t.validate(), Err(OrderTypeError::OddDiscriminant));
    }
}
