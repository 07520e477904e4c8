//! Brute-force local embedding oracle.
//!
//! An order R in M_2(Q_p) or D_p is modeled by a Z-basis of an exact
//! lattice containing p^e M (M the maximal order of the model), so
//! membership is decided exactly by integer linear algebra. Embedding images
//! y are searched over R-coordinates; existence of an exact p-adic root in
//! a residue class is certified by Hensel's lemma. Class counts come from
//! unit-conjugation orbits on residue classes mod p^k M once k is large
//! enough that congruent images are conjugate by 1 + p^e M.

pub mod algebra;
pub mod lattice;
pub mod orbits;
pub mod search;
pub mod verify;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadarith::{LocalAlgebra, LocalQuadExt};
use algebra::{add, reduce, scale, Ambient, Elt};
use search::{Problem, Search, SearchError};

pub use verify::{verify_table, CellStatus, TableCase, VerifyCell, VerifyReport};

pub const MAX_PRIME: u64 = 5;
pub const DEFAULT_BUDGET: u64 = 20_000_000;
const UNIT_SAMPLES: usize = 48;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("prime exceeds oracle budget: {0}")]
    PrimeTooLarge(u64),
    #[error("invalid model: {0}")]
    InvalidKind(String),
    #[error("precision {k} below required {min}")]
    Precision { k: u32, min: u32 },
    #[error("residue search exceeded representable depth")]
    Depth,
    #[error("search budget of {0} nodes exhausted")]
    Budget(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum ModelKind {
    Eichler { n: u32 },
    Cartan { n: u32 },
    Division { l: LocalQuadExt, n: u32 },
}

impl ModelKind {
    pub fn n(&self) -> u32 {
        match *self {
            ModelKind::Eichler { n } | ModelKind::Cartan { n } | ModelKind::Division { n, .. } => n,
        }
    }
}

/// Search budget from `HEEGNER_ORACLE_BUDGET`, in residue-tree nodes.
pub fn budget_from_env() -> u64 {
    std::env::var("HEEGNER_ORACLE_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone)]
pub struct FiniteRingModel {
    pub p: u64,
    pub k: u32,
    pub kind: ModelKind,
    pub ambient: Ambient,
    /// HNF Z-basis of the order in coordinates of the maximal order.
    pub basis: [Elt; 4],
    /// p^e M is contained in the order.
    pub e: u32,
}

fn ceil_half(a: u32) -> u32 {
    a.div_ceil(2)
}

/// Lift b in Z_4 with N(b) = target mod 2^bits (target odd).
fn two_adic_norm_preimage(c1: i128, c0: i128, target: i128, bits: u32) -> (i128, i128) {
    let n = |b0: i128, b1: i128| b0 * b0 - c1 * b0 * b1 + c0 * b1 * b1;
    let mut b = (1i128, 0i128);
    for i in 1..bits {
        let m = 1i128 << (i + 1);
        if (n(b.0, b.1) - target).rem_euclid(m) == 0 {
            continue;
        }
        let h = 1i128 << i;
        b = [(h, 0), (0, h), (h, h)]
            .into_iter()
            .map(|(d0, d1)| (b.0 + d0, b.1 + d1))
            .find(|&(x, y)| (n(x, y) - target).rem_euclid(m) == 0)
            .expect("norm map is smooth on units");
    }
    b
}

/// An element of the maximal order of D_p generating the ring of integers
/// of L, correct modulo p^prec.
fn division_generator(p: u64, l: LocalQuadExt, prec: u32) -> Result<Elt, OracleError> {
    let amb = Ambient::division(p);
    let Ambient::Division { c1, c0, .. } = amb else {
        unreachable!()
    };
    if l == LocalQuadExt::Unramified {
        return Ok([0, 1, 0, 0]);
    }
    if p != 2 {
        return Ok(match l {
            LocalQuadExt::RamifiedPrime => [0, 0, 1, 0],
            LocalQuadExt::RamifiedUnit => {
                let ((b0, b1), _) = Ambient::nonresidue_norm_element(p);
                [0, 0, b0, b1]
            }
            _ => return Err(OracleError::InvalidKind(format!("{l} at p={p}"))),
        });
    }
    let d = l
        .two_adic_rep()
        .ok_or_else(|| OracleError::InvalidKind(format!("{l} at p=2")))? as i128;
    // a = a0 sqrt(-3) with sqrt(-3) = 1 + 2w, so N(a) = 3 a0^2 and
    // (a + bj)^2 = d needs N(b) = (3 a0^2 + d) / 2.
    let a0 = if d % 2 == 1 { 1 } else { 0 };
    let target = (3 * a0 * a0 + d) / 2;
    let (b0, b1) = two_adic_norm_preimage(c1, c0, target, prec + 2);
    Ok([a0, 2 * a0, b0, b1])
}

/// Builds the model of the order of the given kind at p.
pub fn build_model(kind: ModelKind, p: u64, k: u32) -> Result<FiniteRingModel, OracleError> {
    if !crate::quadarith::is_prime(p) {
        return Err(OracleError::InvalidKind(format!("{p} is not prime")));
    }
    if p > MAX_PRIME {
        return Err(OracleError::PrimeTooLarge(p));
    }
    let n = kind.n();
    if k < n + 2 {
        return Err(OracleError::Precision { k, min: n + 2 });
    }
    let pi = p as i128;
    let (ambient, gens, e) = match kind {
        ModelKind::Eichler { n } => {
            let q = pi.pow(n);
            (
                Ambient::Matrix,
                vec![[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, q, 0], [0, 0, 0, 1]],
                n,
            )
        }
        ModelKind::Cartan { n } => {
            if n == 0 {
                return Err(OracleError::InvalidKind(
                    "Cartan level must be positive".into(),
                ));
            }
            let (c1, c0) = algebra::unramified_poly(p);
            let q = pi.pow(n);
            let gens = vec![
                [1, 0, 0, 1],
                [0, -c0, 1, -c1],
                [q, 0, 0, 0],
                [0, q, 0, 0],
                [0, 0, q, 0],
                [0, 0, 0, q],
            ];
            (Ambient::Matrix, gens, n)
        }
        ModelKind::Division { l, n } => {
            if n == 0 || !l.valid_at(p) {
                return Err(OracleError::InvalidKind(format!(
                    "division order ({l}, {n}) at p={p}"
                )));
            }
            let amb = Ambient::division(p);
            let e = ceil_half(n - 1);
            let f = (n - 1) / 2;
            let xi = division_generator(p, l, e + 1)?;
            let (qa, qb) = (pi.pow(e), pi.pow(f));
            let gens = vec![
                amb.one(),
                xi,
                [qa, 0, 0, 0],
                [0, qa, 0, 0],
                [0, 0, qb, 0],
                [0, 0, 0, qb],
            ];
            (amb, gens, e)
        }
    };
    let basis =
        lattice::hnf(&gens).ok_or_else(|| OracleError::InvalidKind("degenerate lattice".into()))?;
    Ok(FiniteRingModel {
        p,
        k,
        kind,
        ambient,
        basis,
        e,
    })
}

impl FiniteRingModel {
    pub fn contains(&self, x: &Elt) -> bool {
        lattice::contains(&self.basis, x)
    }

    /// Closure under multiplication and presence of 1.
    pub fn check_ring_axioms(&self) -> bool {
        self.contains(&self.ambient.one())
            && self.basis.iter().all(|a| {
                self.basis
                    .iter()
                    .all(|b| self.contains(&self.ambient.mul(a, b)))
            })
    }

    /// Index of the order in the maximal order of the model.
    pub fn index(&self) -> i128 {
        lattice::index(&self.basis)
    }

    /// Precision from which congruent images are conjugate under the units.
    pub fn count_precision(&self, kd: &KDescriptor, m: u32) -> u32 {
        2 * m + kd.disc_val + self.e.max(1)
    }
}

/// Generator w of the maximal order of K at p, with w^2 - t w + nm = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KDescriptor {
    pub t: i64,
    pub nm: i64,
    pub disc_val: u32,
}

pub fn k_descriptor(p: u64, alg: LocalAlgebra) -> Result<KDescriptor, OracleError> {
    let pi = p as i64;
    let kd = |t, nm, disc_val| Ok(KDescriptor { t, nm, disc_val });
    match alg {
        LocalAlgebra::Split => kd(1, 0, 0),
        LocalAlgebra::Field(l) if !l.valid_at(p) => {
            Err(OracleError::InvalidKind(format!("{l} at p={p}")))
        }
        LocalAlgebra::Field(LocalQuadExt::Unramified) => {
            let (c1, c0) = algebra::unramified_poly(p);
            kd(-(c1 as i64), c0 as i64, 0)
        }
        LocalAlgebra::Field(LocalQuadExt::RamifiedPrime) => kd(0, -pi, 1),
        LocalAlgebra::Field(LocalQuadExt::RamifiedUnit) => {
            let (_, u) = Ambient::nonresidue_norm_element(p);
            kd(0, -(u as i64) * pi, 1)
        }
        LocalAlgebra::Field(l) => {
            let d = l.two_adic_rep().expect("2-adic class");
            kd(0, -d, l.disc_valuation())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_count: Option<u64>,
    pub precision_used: u32,
    /// Images mod p^precision_used in maximal-order coordinates, sorted.
    pub witnesses: Vec<[i64; 4]>,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub count: bool,
    pub budget: u64,
    pub max_witnesses: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            count: true,
            budget: budget_from_env(),
            max_witnesses: 8,
        }
    }
}

fn vp(x: i128, p: i128) -> u32 {
    if x == 0 {
        u32::MAX
    } else {
        crate::quadarith::valuation(x, p as u64)
    }
}

struct Setup {
    prob: Problem,
    /// y = u0 r0 + x1 r1 + x2 r2 + x3 r3.
    u0_num: i128,
    g_unit: i128,
    rows: [Elt; 4],
    /// Coordinates of p^e times the standard basis vectors in `rows`.
    inv_rows: [Elt; 4],
    pe: i128,
}

impl Setup {
    fn image(&self, x: &[i128; 3], modulus: i128) -> Elt {
        let inv = orbits::inv_mod(self.g_unit, modulus).expect("unit");
        let u0 = (self.u0_num.rem_euclid(modulus) * inv).rem_euclid(modulus);
        let mut y = scale(u0, &self.rows[0]);
        for i in 0..3 {
            y = add(&y, &scale(x[i].rem_euclid(modulus), &self.rows[i + 1]));
        }
        reduce(&y, modulus)
    }

    fn element(&self, u0: i128, x: &[i128; 3]) -> Elt {
        let mut y = scale(u0, &self.rows[0]);
        for i in 0..3 {
            y = add(&y, &scale(x[i], &self.rows[i + 1]));
        }
        y
    }

    fn row_coords(&self, y: &Elt) -> [i128; 4] {
        let mut c = [0i128; 4];
        for (yi, r) in y.iter().zip(&self.inv_rows) {
            for t in 0..4 {
                c[t] += yi * r[t];
            }
        }
        c.map(|v| {
            debug_assert_eq!(v % self.pe, 0);
            v / self.pe
        })
    }
}

fn trace_adapted(amb: &Ambient, basis: &[Elt; 4]) -> [Elt; 4] {
    let mut rows = *basis;
    let mut tr: Vec<i128> = rows.iter().map(|r| amb.trd(r)).collect();
    loop {
        let nz: Vec<usize> = (0..4).filter(|&i| tr[i] != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        let i = *nz.iter().min_by_key(|&&i| tr[i].abs()).unwrap();
        for &j in &nz {
            if j != i {
                let q = tr[j].div_euclid(tr[i]);
                rows[j] = add(&rows[j], &scale(-q, &rows[i]));
                tr[j] -= q * tr[i];
            }
        }
    }
    let i = (0..4).find(|&i| tr[i] != 0).expect("trace form is nonzero");
    rows.swap(0, i);
    if tr[i] < 0 {
        rows[0] = scale(-1, &rows[0]);
    }
    rows
}

fn setup(model: &FiniteRingModel, kd: &KDescriptor, m: u32) -> Option<Setup> {
    let amb = model.ambient;
    let p = model.p as i128;
    let pm = p.pow(m);
    let (t, nm) = (kd.t as i128 * pm, kd.nm as i128 * pm * pm);
    let rows = trace_adapted(&amb, &model.basis);
    let g = amb.trd(&rows[0]);
    let vg = vp(g, p);
    if t != 0 && vp(t, p) < vg {
        return None;
    }
    let pv = p.pow(vg);
    let (g_unit, u0_num) = (g / pv, t / pv);
    let base = scale(u0_num, &rows[0]);
    let dirs = [
        scale(g_unit, &rows[1]),
        scale(g_unit, &rows[2]),
        scale(g_unit, &rows[3]),
    ];
    let mut forbidden = vec![];
    if m > 0 {
        let one = lattice_coords_in(&rows, &amb.one());
        let u0_mod = (u0_num * orbits::inv_mod(g_unit, p).expect("unit")).rem_euclid(p);
        for lam in 0..p {
            if (lam * one[0] - u0_mod).rem_euclid(p) == 0 {
                forbidden.push([
                    (lam * one[1]).rem_euclid(p),
                    (lam * one[2]).rem_euclid(p),
                    (lam * one[3]).rem_euclid(p),
                ]);
            }
        }
    }
    let max_depth = (36.0 / (p as f64).log2()).floor() as u32;
    Some(Setup {
        prob: Problem {
            amb,
            p,
            base,
            dirs,
            target: g_unit * g_unit * nm,
            forbidden,
            max_depth,
        },
        u0_num,
        g_unit,
        inv_rows: std::array::from_fn(|i| {
            let mut e = [0i128; 4];
            e[i] = p.pow(model.e);
            lattice_coords_in(&rows, &e)
        }),
        pe: p.pow(model.e),
        rows,
    })
}

/// Coordinates of x in the basis `rows`, which must span a lattice containing x.
fn lattice_coords_in(rows: &[Elt; 4], x: &Elt) -> [i128; 4] {
    use num_rational::Ratio;
    let zero = Ratio::from_integer(0i128);
    let mut a: Vec<Vec<Ratio<i128>>> = (0..4)
        .map(|i| {
            let mut r: Vec<Ratio<i128>> = (0..4).map(|j| Ratio::from_integer(rows[j][i])).collect();
            r.push(Ratio::from_integer(x[i]));
            r
        })
        .collect();
    for c in 0..4 {
        let piv = (c..4).find(|&r| a[r][c] != zero).expect("basis");
        a.swap(c, piv);
        let pv = a[c][c];
        for j in c..5 {
            a[c][j] /= pv;
        }
        for r in 0..4 {
            if r != c {
                let f = a[r][c];
                for j in c..5 {
                    let d = f * a[c][j];
                    a[r][j] -= d;
                }
            }
        }
    }
    std::array::from_fn(|i| {
        assert!(a[i][4].is_integer(), "element outside the order");
        a[i][4].to_integer()
    })
}

/// Random units u of the order with u y u^-1 = y mod p^j R, reduced mod p^(j+1+e) M.
fn stabilizer_units(model: &FiniteRingModel, y: &Elt, j: u32, rng: &mut ChaCha8Rng) -> Vec<Elt> {
    let amb = model.ambient;
    let p = model.p as i128;
    let a: [Elt; 4] = std::array::from_fn(|i| {
        let b = &model.basis[i];
        let c = add(&amb.mul(b, y), &scale(-1, &amb.mul(y, b)));
        lattice::coords(&model.basis, &c).expect("order is a ring")
    });
    let lam: Vec<Elt> = lattice::kernel_mod(&a, p.pow(j))
        .iter()
        .map(|c| (0..4).fold([0; 4], |acc, i| add(&acc, &scale(c[i], &model.basis[i]))))
        .collect();
    let (q, md) = (p.pow(j + 1), p.pow(j + 1 + model.e));
    let mut out = Vec::with_capacity(UNIT_SAMPLES);
    while out.len() < UNIT_SAMPLES {
        let u = lam
            .iter()
            .fold([0; 4], |acc, l| add(&acc, &scale(rng.gen_range(0..q), l)));
        let u = reduce(&u, md);
        if amb.nrd(&u).rem_euclid(p) != 0 {
            out.push(u);
        }
    }
    out
}

fn unit_u0(model: &FiniteRingModel, st: &Setup, k: u32) -> i128 {
    let big = (model.p as i128).pow(k + model.e + 2);
    (st.u0_num.rem_euclid(big) * orbits::inv_mod(st.g_unit, big).expect("unit")).rem_euclid(big)
}

/// Representatives of the orbits of the stabilizer of x (level j) on the
/// fiber of its lifts to level j + 1.
fn merge_fiber(
    model: &FiniteRingModel,
    st: &Setup,
    u0: i128,
    x: &[i128; 3],
    j: u32,
    fiber: &[[i128; 3]],
    rng: &mut ChaCha8Rng,
) -> Vec<[i128; 3]> {
    if fiber.len() <= 1 {
        return fiber.to_vec();
    }
    let p = model.p as i128;
    let (q, md) = (p.pow(j + 1), p.pow(j + 1 + model.e));
    let index: HashMap<[i128; 3], usize> = fiber.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut parent: Vec<usize> = (0..fiber.len()).collect();
    fn root(par: &mut [usize], mut i: usize) -> usize {
        while par[i] != i {
            par[i] = par[par[i]];
            i = par[i];
        }
        i
    }
    let units = stabilizer_units(model, &st.element(u0, x), j, rng);
    for (i, f) in fiber.iter().enumerate() {
        let yf = st.element(u0, f);
        for u in &units {
            let z = orbits::conjugate(&model.ambient, u, &yf, md);
            let c = st.row_coords(&z);
            debug_assert_eq!((c[0] - u0).rem_euclid(q), 0);
            let key = [c[1].rem_euclid(q), c[2].rem_euclid(q), c[3].rem_euclid(q)];
            let jx = *index
                .get(&key)
                .expect("fiber is stable under the stabilizer");
            let (a, b) = (root(&mut parent, i), root(&mut parent, jx));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..fiber.len())
        .filter(|&i| root(&mut parent, i) == i)
        .map(|i| fiber[i])
        .collect()
}

/// Breadth-first search for a certified root, keeping one class per orbit
/// at each level.
fn orbit_exists(
    model: &FiniteRingModel,
    st: &Setup,
    budget: u64,
) -> Result<Option<[i128; 3]>, SearchError> {
    let u0 = unit_u0(model, st, st.prob.max_depth);
    let mut search = Search::new(&st.prob, budget);
    let mut rng = ChaCha8Rng::seed_from_u64((model.p << 40) ^ model.index() as u64);
    let mut reps = vec![[0i128; 3]];
    for j in 0..st.prob.max_depth {
        let mut next = Vec::new();
        for x in &reps {
            search.tick()?;
            let fiber = st.prob.children(x, j);
            if let Some(c) = fiber.iter().find(|c| st.prob.certified(c, j + 1)) {
                return search.find_root(*c, j + 1, model.k);
            }
            next.extend(merge_fiber(model, st, u0, x, j, &fiber, &mut rng));
        }
        if next.is_empty() {
            return Ok(None);
        }
        reps = next;
    }
    Err(SearchError::Depth)
}

/// Orbit representatives, in row coordinates mod p^kc, of the unit group
/// acting on residue classes of optimal images. Orbits are refined one
/// digit at a time: the orbits over a representative at level j are the
/// orbits of its stabilizer on the fiber of lifts to level j + 1.
fn orbit_reps(
    model: &FiniteRingModel,
    st: &Setup,
    kc: u32,
    budget: u64,
) -> Result<Vec<[i128; 3]>, SearchError> {
    let u0 = unit_u0(model, st, kc);
    let mut search = Search::new(&st.prob, budget);
    let mut rng =
        ChaCha8Rng::seed_from_u64((model.p << 40) ^ ((kc as u64) << 20) ^ model.index() as u64);
    let mut reps = vec![[0i128; 3]];
    for j in 0..kc {
        let mut next = Vec::new();
        for x in &reps {
            let mut fiber = Vec::new();
            for c in st.prob.children(x, j) {
                if search.find_root(c, j + 1, j + 1)?.is_some() {
                    fiber.push(c);
                }
            }
            next.extend(merge_fiber(model, st, u0, x, j, &fiber, &mut rng));
        }
        reps = next;
        if reps.is_empty() {
            break;
        }
    }
    reps.sort();
    Ok(reps)
}

/// Number of conjugacy classes computed from residues mod p^kc.
pub fn class_count_at(
    model: &FiniteRingModel,
    kd: &KDescriptor,
    m: u32,
    kc: u32,
    budget: u64,
) -> Result<Option<u64>, OracleError> {
    let Some(st) = setup(model, kd, m) else {
        return Ok(Some(0));
    };
    match orbit_reps(model, &st, kc, budget) {
        Ok(r) => Ok(Some(r.len() as u64)),
        Err(SearchError::Budget) => Ok(None),
        Err(SearchError::Depth) => Err(OracleError::Depth),
    }
}

/// Same count by listing every residue class mod p^kc and merging orbits
/// of random units; exponential in kc, used as a cross-check.
pub fn class_count_exhaustive(
    model: &FiniteRingModel,
    kd: &KDescriptor,
    m: u32,
    kc: u32,
    budget: u64,
) -> Result<Option<u64>, OracleError> {
    let Some(st) = setup(model, kd, m) else {
        return Ok(Some(0));
    };
    let p = model.p as i128;
    let mut s = Search::new(&st.prob, budget);
    let classes = match s.root_classes(kc) {
        Ok(c) => c,
        Err(SearchError::Budget) => return Ok(None),
        Err(SearchError::Depth) => return Err(OracleError::Depth),
    };
    let modulus = p.pow(kc);
    let mut imgs: Vec<Elt> = classes.iter().map(|x| st.image(x, modulus)).collect();
    imgs.sort();
    imgs.dedup();
    let seed = (model.p << 32) ^ ((kc as u64) << 16) ^ m as u64;
    let units = orbits::sample_units(&model.ambient, &model.basis, p, modulus, UNIT_SAMPLES, seed);
    Ok(orbits::count_orbits(&model.ambient, &units, &imgs, modulus).map(|c| c as u64))
}

/// Optimal embeddings of the conductor-m order of K into the modeled order.
pub fn enumerate_optimal(
    model: &FiniteRingModel,
    kd: &KDescriptor,
    m: u32,
    opts: &OracleOptions,
) -> Result<OracleResult, OracleError> {
    let Some(st) = setup(model, kd, m) else {
        return Ok(OracleResult {
            exists: false,
            class_count: Some(0),
            precision_used: model.k,
            witnesses: vec![],
        });
    };
    let p = model.p as i128;
    if opts.count {
        let kc = model.count_precision(kd, m).max(1);
        match orbit_reps(model, &st, kc, opts.budget) {
            Ok(reps) => {
                let modulus = p.pow(kc);
                return Ok(OracleResult {
                    exists: !reps.is_empty(),
                    class_count: Some(reps.len() as u64),
                    precision_used: kc,
                    witnesses: reps
                        .iter()
                        .take(opts.max_witnesses)
                        .map(|x| st.image(x, modulus).map(|c| c as i64))
                        .collect(),
                });
            }
            Err(SearchError::Depth) => return Err(OracleError::Depth),
            Err(SearchError::Budget) => {}
        }
    }
    let found = match orbit_exists(model, &st, opts.budget) {
        Ok(f) => f,
        Err(SearchError::Depth) => return Err(OracleError::Depth),
        Err(SearchError::Budget) => return Err(OracleError::Budget(opts.budget)),
    };
    let modulus = p.pow(model.k);
    Ok(OracleResult {
        exists: found.is_some(),
        class_count: None,
        precision_used: model.k,
        witnesses: found
            .iter()
            .map(|x| st.image(x, modulus).map(|c| c as i64))
            .collect(),
    })
}

/// Default precision n + 2m + 2.
pub fn policy_precision(n: u32, m: u32) -> u32 {
    n + 2 * m + 2
}
