//! Orbits of the unit group of an order acting by conjugation on residue
//! classes of embedding images.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::algebra::{reduce, Ambient, Elt};

pub(crate) fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut i = i;
        while self.0[i] != r {
            let n = self.0[i];
            self.0[i] = r;
            i = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Random units of the order with Z-basis `basis`, reduced mod `modulus`.
pub fn sample_units(
    amb: &Ambient,
    basis: &[Elt; 4],
    p: i128,
    modulus: i128,
    count: usize,
    seed: u64,
) -> Vec<Elt> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut u = [0i128; 4];
        for b in basis {
            let c: i128 = rng.gen_range(0..modulus);
            for i in 0..4 {
                u[i] += c * b[i];
            }
        }
        let u = reduce(&u, modulus);
        if amb.nrd(&u).rem_euclid(p) != 0 {
            out.push(u);
        }
    }
    out
}

pub fn conjugate(amb: &Ambient, u: &Elt, y: &Elt, modulus: i128) -> Elt {
    let n = inv_mod(amb.nrd(u), modulus).expect("unit");
    let t = reduce(&amb.mul(u, y), modulus);
    let t = reduce(&amb.mul(&t, &amb.conj(u)), modulus);
    reduce(&[t[0] * n, t[1] * n, t[2] * n, t[3] * n], modulus)
}

/// Number of orbits of the group generated by `units` on `points`; None
/// when the point set is not stable.
pub fn count_orbits(amb: &Ambient, units: &[Elt], points: &[Elt], modulus: i128) -> Option<usize> {
    let index: HashMap<Elt, usize> = points.iter().enumerate().map(|(i, y)| (*y, i)).collect();
    let mut dsu = Dsu((0..points.len()).collect());
    for (i, y) in points.iter().enumerate() {
        for u in units {
            let z = conjugate(amb, u, y, modulus);
            let j = *index.get(&z)?;
            dsu.union(i, j);
        }
    }
    Some((0..points.len()).filter(|&i| dsu.find(i) == i).count())
}
