//! Quadratic fields and orders: Kronecker and Hilbert symbols, local
//! splitting, square classes of Q_p, and class numbers of imaginary
//! quadratic orders.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the Eichler symbol is undefined when p splits")]
    SplitSymbol,
    #[error("class number out of range for c = {0}")]
    Range(u64),
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: i128, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let a = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => is_squarefree(a),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

/// Kronecker symbol (a | n).
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut n = n as u64;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= tz;
        if tz % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    result * jacobi(a.rem_euclid(n as i64) as u64, n)
}

fn jacobi(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut r = 1;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                r = -r;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            r = -r;
        }
        a %= n;
    }
    if n == 1 {
        r
    } else {
        0
    }
}

/// Order of conductor `conductor` in the imaginary quadratic field of
/// discriminant `disc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuadOrderRaw")]
pub struct QuadOrder {
    disc: i64,
    conductor: u64,
}

#[derive(Deserialize)]
struct QuadOrderRaw {
    disc: i64,
    conductor: u64,
}

impl TryFrom<QuadOrderRaw> for QuadOrder {
    type Error = QuadError;
    fn try_from(r: QuadOrderRaw) -> Result<Self, QuadError> {
        QuadOrder::new(r.disc, r.conductor)
    }
}

impl QuadOrder {
    pub fn new(disc: i64, conductor: u64) -> Result<Self, QuadError> {
        if !is_fundamental(disc) {
            return Err(QuadError::NotFundamental(disc));
        }
        if conductor == 0 {
            return Err(QuadError::ZeroConductor);
        }
        Ok(QuadOrder { disc, conductor })
    }

    pub fn maximal(disc: i64) -> Result<Self, QuadError> {
        Self::new(disc, 1)
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn order_disc(&self) -> i128 {
        (self.conductor as i128).pow(2) * self.disc as i128
    }

    /// m = val_p(c).
    pub fn m_at(&self, p: u64) -> u32 {
        valuation(self.conductor as i128, p)
    }

    pub fn with_conductor(&self, c: u64) -> Result<Self, QuadError> {
        Self::new(self.disc, c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

impl SplittingType {
    pub fn is_split(self) -> bool {
        self == SplittingType::Split
    }
}

pub fn splitting_at(k: &QuadOrder, p: u64) -> SplittingType {
    match kronecker(k.disc, p as i64) {
        0 => SplittingType::Ramified,
        1 => SplittingType::Split,
        _ => SplittingType::Inert,
    }
}

/// Isomorphism class of a quadratic field extension of Q_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalQuadExt {
    Unramified,
    RamifiedUnit,
    RamifiedPrime,
    Sqrt3,
    Sqrt7,
    Sqrt2,
    Sqrt6,
    Sqrt10,
    Sqrt14,
}

const ODD_CLASSES: [LocalQuadExt; 3] = [
    LocalQuadExt::Unramified,
    LocalQuadExt::RamifiedUnit,
    LocalQuadExt::RamifiedPrime,
];

const TWO_CLASSES: [LocalQuadExt; 7] = [
    LocalQuadExt::Unramified,
    LocalQuadExt::Sqrt3,
    LocalQuadExt::Sqrt7,
    LocalQuadExt::Sqrt2,
    LocalQuadExt::Sqrt6,
    LocalQuadExt::Sqrt10,
    LocalQuadExt::Sqrt14,
];

impl LocalQuadExt {
    pub fn classes(p: u64) -> &'static [LocalQuadExt] {
        if p == 2 {
            &TWO_CLASSES
        } else {
            &ODD_CLASSES
        }
    }

    pub fn valid_at(self, p: u64) -> bool {
        Self::classes(p).contains(&self)
    }

    pub fn is_ramified(self) -> bool {
        self != LocalQuadExt::Unramified
    }

    pub fn disc_valuation(self) -> u32 {
        use LocalQuadExt::*;
        match self {
            Unramified => 0,
            RamifiedUnit | RamifiedPrime => 1,
            Sqrt3 | Sqrt7 => 2,
            Sqrt2 | Sqrt6 | Sqrt10 | Sqrt14 => 3,
        }
    }

    /// Representative d with the field equal to Q_2(sqrt d); only for p = 2.
    pub fn two_adic_rep(self) -> Option<i64> {
        use LocalQuadExt::*;
        Some(match self {
            Unramified => 5,
            Sqrt3 => 3,
            Sqrt7 => 7,
            Sqrt2 => 2,
            Sqrt6 => 6,
            Sqrt10 => 10,
            Sqrt14 => 14,
            _ => return None,
        })
    }

    pub fn splitting(self) -> SplittingType {
        if self.is_ramified() {
            SplittingType::Ramified
        } else {
            SplittingType::Inert
        }
    }

    pub fn short_name(self) -> &'static str {
        use LocalQuadExt::*;
        match self {
            Unramified => "unram",
            RamifiedUnit => "ram-unit",
            RamifiedPrime => "ram-prime",
            Sqrt3 => "sqrt3",
            Sqrt7 => "sqrt7",
            Sqrt2 => "sqrt2",
            Sqrt6 => "sqrt6",
            Sqrt10 => "sqrt10",
            Sqrt14 => "sqrt14",
        }
    }

    pub fn parse(s: &str) -> Option<LocalQuadExt> {
        use LocalQuadExt::*;
        Some(match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "unram" | "unramified" | "inert" => Unramified,
            "ram-unit" | "ramified-unit" | "ramunit" => RamifiedUnit,
            "ram-prime" | "ramified-prime" | "ramprime" => RamifiedPrime,
            "sqrt3" => Sqrt3,
            "sqrt7" => Sqrt7,
            "sqrt2" => Sqrt2,
            "sqrt6" => Sqrt6,
            "sqrt10" => Sqrt10,
            "sqrt14" => Sqrt14,
            _ => return None,
        })
    }
}

impl fmt::Display for LocalQuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// K ⊗ Q_p: either split or a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalAlgebra {
    Split,
    Field(LocalQuadExt),
}

impl LocalAlgebra {
    pub fn field(self) -> Option<LocalQuadExt> {
        match self {
            LocalAlgebra::Split => None,
            LocalAlgebra::Field(l) => Some(l),
        }
    }
}

/// Class of Q_p(sqrt d) for a nonzero integer d.
pub fn square_class_algebra(d: i128, p: u64) -> LocalAlgebra {
    let v = valuation(d, p);
    let u = d / (p as i128).pow(v);
    if p == 2 {
        let r = u.rem_euclid(8);
        let cls = if v % 2 == 0 { r } else { 2 * r };
        use LocalQuadExt::*;
        return match cls {
            1 => LocalAlgebra::Split,
            5 => LocalAlgebra::Field(Unramified),
            3 => LocalAlgebra::Field(Sqrt3),
            7 => LocalAlgebra::Field(Sqrt7),
            2 => LocalAlgebra::Field(Sqrt2),
            6 => LocalAlgebra::Field(Sqrt6),
            10 => LocalAlgebra::Field(Sqrt10),
            14 => LocalAlgebra::Field(Sqrt14),
            _ => unreachable!(),
        };
    }
    let residue = jacobi(u.rem_euclid(p as i128) as u64, p);
    match (v % 2, residue) {
        (0, 1) => LocalAlgebra::Split,
        (0, _) => LocalAlgebra::Field(LocalQuadExt::Unramified),
        (_, 1) => LocalAlgebra::Field(LocalQuadExt::RamifiedPrime),
        _ => LocalAlgebra::Field(LocalQuadExt::RamifiedUnit),
    }
}

pub fn local_quad_class(k: &QuadOrder, p: u64) -> LocalAlgebra {
    square_class_algebra(k.disc as i128, p)
}

/// {O_m / p}: the symbol of the local order of conductor p^m.
pub fn eichler_symbol(m: u32, s: SplittingType) -> Result<i32, QuadError> {
    match (m, s) {
        (_, SplittingType::Split) => Err(QuadError::SplitSymbol),
        (0, SplittingType::Inert) => Ok(-1),
        (0, SplittingType::Ramified) => Ok(0),
        _ => Ok(1),
    }
}

/// Local factor in the Eichler-type count convention, +1 when p splits.
pub fn eichler_factor(m: u32, s: SplittingType) -> i32 {
    eichler_symbol(m, s).unwrap_or(1)
}

/// Primitive reduced forms (a, b, c) of discriminant d < 0.
pub fn reduced_forms(d: i128) -> Vec<(i128, i128, i128)> {
    assert!(d < 0 && d.rem_euclid(4) <= 1);
    let mut out = Vec::new();
    let mut a = 1i128;
    while 3 * a * a <= -d {
        for b in (-a + 1)..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if gcd3(a, b, c) == 1 {
                out.push((a, b, c));
            }
        }
        a += 1;
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn gcd3(a: i128, b: i128, c: i128) -> i128 {
    gcd(gcd(a, b), c)
}

pub fn class_number_fundamental(d: i64) -> Result<u64, QuadError> {
    if !is_fundamental(d) {
        return Err(QuadError::NotFundamental(d));
    }
    Ok(reduced_forms(d as i128).len() as u64)
}

/// h(R_c) by the conductor formula over h(D_K).
pub fn class_number(k: &QuadOrder) -> Result<u64, QuadError> {
    let hk = class_number_fundamental(k.disc)? as u128;
    let c = k.conductor;
    if c == 1 {
        return Ok(hk as u64);
    }
    let mut prod: u128 = 1;
    for (l, e) in factorize(c) {
        let chi = kronecker(k.disc, l as i64) as i128;
        let local = (l as i128 - chi) as u128;
        let lpow = (l as u128).checked_pow(e - 1).ok_or(QuadError::Range(c))?;
        prod = prod
            .checked_mul(local)
            .and_then(|x| x.checked_mul(lpow))
            .ok_or(QuadError::Range(c))?;
    }
    let units = match k.disc {
        -3 => 3,
        -4 => 2,
        _ => 1,
    };
    let h = hk.checked_mul(prod).ok_or(QuadError::Range(c))? / units;
    u64::try_from(h).map_err(|_| QuadError::Range(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Place {
    Finite(u64),
    Infinity,
}

/// (a, b)_v for nonzero integers.
pub fn hilbert_symbol_int(a: i128, b: i128, place: Place) -> i32 {
    assert!(a != 0 && b != 0, "hilbert symbol of zero");
    let p = match place {
        Place::Infinity => return if a < 0 && b < 0 { -1 } else { 1 },
        Place::Finite(p) => p,
    };
    let pi = p as i128;
    let (alpha, beta) = (valuation(a, p), valuation(b, p));
    let u = a / pi.pow(alpha);
    let v = b / pi.pow(beta);
    if p == 2 {
        let eps = |x: i128| ((x.rem_euclid(8) - 1) / 2) % 2;
        let omega = |x: i128| {
            let r = x.rem_euclid(8);
            ((r * r - 1) / 8) % 2
        };
        let e = eps(u) * eps(v) + alpha as i128 * omega(v) + beta as i128 * omega(u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let mut s = 1;
    if (alpha * beta) % 2 == 1 && p % 4 == 3 {
        s = -s;
    }
    let leg = |x: i128| jacobi(x.rem_euclid(pi) as u64, p);
    if beta % 2 == 1 {
        s *= leg(u);
    }
    if alpha % 2 == 1 {
        s *= leg(v);
    }
    s
}

/// (a, b)_v for nonzero rationals; a/b lies in the square class of a·b.
pub fn hilbert_symbol(a: Ratio<i64>, b: Ratio<i64>, place: Place) -> i32 {
    let a = *a.numer() as i128 * *a.denom() as i128;
    let b = *b.numer() as i128 * *b.denom() as i128;
    hilbert_symbol_int(a, b, place)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(5, -1), 1);
        assert_eq!(kronecker(-5, -1), -1);
    }

    #[test]
    fn kronecker_matches_residue_search_at_odd_primes() {
        for p in [3i64, 5, 7, 11, 13, 101] {
            for a in -60i64..60 {
                let r = a.rem_euclid(p);
                let expect = if r == 0 {
                    0
                } else if (1..p).any(|x| (x * x) % p == r) {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p), expect, "({a}|{p})");
            }
        }
    }

    #[test]
    fn splitting_examples() {
        let k = QuadOrder::maximal(-4).unwrap();
        assert_eq!(splitting_at(&k, 2), SplittingType::Ramified);
        assert_eq!(splitting_at(&k, 5), SplittingType::Split);
        assert_eq!(splitting_at(&k, 3), SplittingType::Inert);
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [-3, -4, -7, -8, -11, -15, -20, -23, -24, -84] {
            assert!(is_fundamental(d), "{d}");
        }
        for d in [-1, -2, -12, -16, -27, -36, 5, 0] {
            assert!(!is_fundamental(d), "{d}");
        }
        assert!(QuadOrder::new(-12, 1).is_err());
        assert!(QuadOrder::new(-3, 0).is_err());
    }

    #[test]
    fn eichler_symbol_values() {
        assert_eq!(eichler_symbol(0, SplittingType::Inert), Ok(-1));
        assert_eq!(eichler_symbol(0, SplittingType::Ramified), Ok(0));
        assert_eq!(eichler_symbol(2, SplittingType::Inert), Ok(1));
        assert!(eichler_symbol(0, SplittingType::Split).is_err());
        assert_eq!(eichler_factor(0, SplittingType::Split), 1);
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number(&QuadOrder::new(-3, 1).unwrap()), Ok(1));
        assert_eq!(class_number(&QuadOrder::new(-23, 1).unwrap()), Ok(3));
        assert_eq!(class_number(&QuadOrder::new(-4, 5).unwrap()), Ok(2));
        assert_eq!(class_number(&QuadOrder::new(-3, 2).unwrap()), Ok(1));
        assert_eq!(class_number(&QuadOrder::new(-4, 3).unwrap()), Ok(2));
    }

    #[test]
    fn square_classes() {
        let k4 = QuadOrder::maximal(-4).unwrap();
        let k3 = QuadOrder::maximal(-3).unwrap();
        assert_eq!(
            local_quad_class(&k4, 2),
            LocalAlgebra::Field(LocalQuadExt::Sqrt7)
        );
        assert_eq!(
            local_quad_class(&k3, 3),
            LocalAlgebra::Field(LocalQuadExt::RamifiedUnit)
        );
        assert_eq!(
            local_quad_class(&k3, 2),
            LocalAlgebra::Field(LocalQuadExt::Unramified)
        );
        let k8 = QuadOrder::maximal(-8).unwrap();
        assert_eq!(
            local_quad_class(&k8, 2),
            LocalAlgebra::Field(LocalQuadExt::Sqrt14)
        );
        assert_eq!(
            local_quad_class(&QuadOrder::maximal(-7).unwrap(), 2),
            LocalAlgebra::Split
        );
    }

    #[test]
    fn class_counts_per_prime() {
        assert_eq!(LocalQuadExt::classes(2).len(), 7);
        assert_eq!(LocalQuadExt::classes(3).len(), 3);
        for p in [2u64, 3, 5] {
            for l in LocalQuadExt::classes(p) {
                assert_eq!(LocalQuadExt::parse(l.short_name()), Some(*l));
            }
        }
    }

    #[test]
    fn hilbert_examples() {
        let r = |x: i64| Ratio::from_integer(x);
        assert_eq!(hilbert_symbol(r(1), r(7), Place::Finite(3)), 1);
        assert_eq!(hilbert_symbol(r(-1), r(-3), Place::Finite(3)), -1);
        assert_eq!(hilbert_symbol(r(-1), r(-1), Place::Finite(2)), -1);
        assert_eq!(hilbert_symbol(r(-1), r(-1), Place::Infinity), -1);
        assert_eq!(hilbert_symbol(Ratio::new(-1, 3), r(3), Place::Finite(3)), 1);
    }

    #[test]
    fn primes_and_factors() {
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1));
        assert!(!is_prime(561));
        assert_eq!(factorize(99), vec![(3, 2), (11, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(999_999_999_989), vec![(999_999_999_989, 1)]);
    }
}
