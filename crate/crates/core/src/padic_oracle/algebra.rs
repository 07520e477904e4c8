//! Integral models of M_2(Q_p) and of the division algebra D_p.
//!
//! Elements are coordinate vectors over Z. In M_2 the basis is
//! e11, e12, e21, e22. In D_p the basis is 1, w, j, wj where Z_p[w] is the
//! unramified quadratic ring, j^2 = p and j a = conj(a) j.

pub type Elt = [i128; 4];

/// Monic f = x^2 + c1 x + c0 irreducible mod p, smallest (c1, c0).
pub fn unramified_poly(p: u64) -> (i128, i128) {
    let p = p as i128;
    for c1 in 0..p {
        for c0 in 0..p {
            if (0..p).all(|x| (x * x + c1 * x + c0).rem_euclid(p) != 0) {
                return (c1, c0);
            }
        }
    }
    unreachable!("no irreducible quadratic mod {p}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    Matrix,
    Division { p: i128, c1: i128, c0: i128 },
}

impl Ambient {
    pub fn division(p: u64) -> Self {
        let (c1, c0) = unramified_poly(p);
        Ambient::Division {
            p: p as i128,
            c1,
            c0,
        }
    }

    pub fn one(&self) -> Elt {
        match self {
            Ambient::Matrix => [1, 0, 0, 1],
            Ambient::Division { .. } => [1, 0, 0, 0],
        }
    }

    pub fn mul(&self, x: &Elt, y: &Elt) -> Elt {
        match *self {
            Ambient::Matrix => [
                x[0] * y[0] + x[1] * y[2],
                x[0] * y[1] + x[1] * y[3],
                x[2] * y[0] + x[3] * y[2],
                x[2] * y[1] + x[3] * y[3],
            ],
            Ambient::Division { p, c1, c0 } => {
                let zm = |u: (i128, i128), v: (i128, i128)| {
                    (
                        u.0 * v.0 - c0 * u.1 * v.1,
                        u.0 * v.1 + u.1 * v.0 - c1 * u.1 * v.1,
                    )
                };
                let zc = |u: (i128, i128)| (u.0 - c1 * u.1, -u.1);
                let (a, b) = ((x[0], x[1]), (x[2], x[3]));
                let (c, d) = ((y[0], y[1]), (y[2], y[3]));
                let bd = zm(b, zc(d));
                let ac = zm(a, c);
                let ad = zm(a, d);
                let bc = zm(b, zc(c));
                [ac.0 + p * bd.0, ac.1 + p * bd.1, ad.0 + bc.0, ad.1 + bc.1]
            }
        }
    }

    pub fn conj(&self, x: &Elt) -> Elt {
        match *self {
            Ambient::Matrix => [x[3], -x[1], -x[2], x[0]],
            Ambient::Division { c1, .. } => [x[0] - c1 * x[1], -x[1], -x[2], -x[3]],
        }
    }

    pub fn trd(&self, x: &Elt) -> i128 {
        match *self {
            Ambient::Matrix => x[0] + x[3],
            Ambient::Division { c1, .. } => 2 * x[0] - c1 * x[1],
        }
    }

    pub fn nrd(&self, x: &Elt) -> i128 {
        match *self {
            Ambient::Matrix => x[0] * x[3] - x[1] * x[2],
            Ambient::Division { p, c1, c0 } => {
                let n = |u0: i128, u1: i128| u0 * u0 - c1 * u0 * u1 + c0 * u1 * u1;
                n(x[0], x[1]) - p * n(x[2], x[3])
            }
        }
    }

    /// Polar form nrd(x + y) - nrd(x) - nrd(y) = trd(x conj(y)).
    pub fn polar(&self, x: &Elt, y: &Elt) -> i128 {
        self.trd(&self.mul(x, &self.conj(y)))
    }

    /// Z_p[w] element with norm a non-residue mod p (odd p).
    pub fn nonresidue_norm_element(p: u64) -> ((i128, i128), i128) {
        let (c1, c0) = unramified_poly(p);
        let pi = p as i128;
        let is_res = |a: i128| (1..pi).any(|x| (x * x - a).rem_euclid(pi) == 0);
        for s in 1..(2 * pi) {
            for b1 in 0..=s {
                let b0 = s - b1;
                let nv = b0 * b0 - c1 * b0 * b1 + c0 * b1 * b1;
                if nv.rem_euclid(pi) != 0 && !is_res(nv) {
                    return ((b0, b1), nv);
                }
            }
        }
        unreachable!("norm map onto units mod {p}")
    }
}

pub fn add(x: &Elt, y: &Elt) -> Elt {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]]
}

pub fn scale(c: i128, x: &Elt) -> Elt {
    [c * x[0], c * x[1], c * x[2], c * x[3]]
}

pub fn reduce(x: &Elt, modulus: i128) -> Elt {
    [
        x[0].rem_euclid(modulus),
        x[1].rem_euclid(modulus),
        x[2].rem_euclid(modulus),
        x[3].rem_euclid(modulus),
    ]
}
