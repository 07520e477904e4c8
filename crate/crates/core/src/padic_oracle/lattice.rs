//! Full-rank Z-lattices in Z^4 given by generators.

use super::algebra::Elt;

fn sub_mul(x: &mut Elt, q: i128, y: &Elt) {
    for i in 0..4 {
        x[i] -= q * y[i];
    }
}

/// Upper-triangular Hermite normal form of a full-rank lattice in Z^n.
pub fn hnf_rows(gens: &[Vec<i128>], n: usize) -> Option<Vec<Vec<i128>>> {
    let nonzero = |r: &Vec<i128>| r.iter().any(|&c| c != 0);
    let mut rows: Vec<Vec<i128>> = gens.iter().filter(|r| nonzero(r)).cloned().collect();
    let mut out: Vec<Vec<i128>> = Vec::with_capacity(n);
    for col in 0..n {
        loop {
            let piv = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| r[col].abs())
                .map(|(i, _)| i)?;
            let pr = rows[piv].clone();
            let mut done = true;
            for (i, r) in rows.iter_mut().enumerate() {
                if i != piv && r[col] != 0 {
                    let q = r[col].div_euclid(pr[col]);
                    r.iter_mut().zip(&pr).for_each(|(a, b)| *a -= q * b);
                    if r[col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let mut pr = rows.swap_remove(piv);
                if pr[col] < 0 {
                    pr.iter_mut().for_each(|c| *c = -*c);
                }
                out.push(pr);
                rows.retain(nonzero);
                break;
            }
        }
    }
    for i in 1..n {
        let pi = out[i].clone();
        for r in out.iter_mut().take(i) {
            let q = r[i].div_euclid(pi[i]);
            r.iter_mut().zip(&pi).for_each(|(a, b)| *a -= q * b);
        }
    }
    Some(out)
}

/// Upper-triangular Hermite normal form of the lattice spanned by `gens`.
/// Returns None when the lattice is not of full rank.
pub fn hnf(gens: &[Elt]) -> Option<[Elt; 4]> {
    let rows: Vec<Vec<i128>> = gens.iter().map(|g| g.to_vec()).collect();
    let out = hnf_rows(&rows, 4)?;
    Some(std::array::from_fn(|i| {
        [out[i][0], out[i][1], out[i][2], out[i][3]]
    }))
}

/// Basis of {c in Z^4 : sum_i c_i a_i = 0 mod q}.
pub fn kernel_mod(a: &[Elt; 4], q: i128) -> [Elt; 4] {
    let mut gens = Vec::with_capacity(8);
    for (i, ai) in a.iter().enumerate() {
        let mut r = ai.to_vec();
        r.extend((0..4).map(|l| i128::from(l == i)));
        gens.push(r);
    }
    for l in 0..4 {
        let mut r = vec![0; 8];
        r[l] = q;
        gens.push(r);
    }
    let h = hnf_rows(&gens, 8).expect("full rank");
    std::array::from_fn(|i| [h[4 + i][4], h[4 + i][5], h[4 + i][6], h[4 + i][7]])
}

/// Integer coordinates of `x` in an HNF basis, if `x` lies in the lattice.
pub fn coords(basis: &[Elt; 4], x: &Elt) -> Option<[i128; 4]> {
    let mut rest = *x;
    let mut c = [0i128; 4];
    for i in 0..4 {
        if rest[i] % basis[i][i] != 0 {
            return None;
        }
        c[i] = rest[i] / basis[i][i];
        sub_mul(&mut rest, c[i], &basis[i]);
    }
    Some(c)
}

pub fn contains(basis: &[Elt; 4], x: &Elt) -> bool {
    coords(basis, x).is_some()
}

/// Index [Z^4 : lattice].
pub fn index(basis: &[Elt; 4]) -> i128 {
    (0..4).map(|i| basis[i][i]).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eichler_shape() {
        let g = [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 9, 0],
            [0, 0, 0, 1],
            [0, 0, 27, 0],
        ];
        let b = hnf(&g).unwrap();
        assert_eq!(index(&b), 9);
        assert!(contains(&b, &[4, -2, 18, 7]));
        assert!(!contains(&b, &[0, 0, 3, 0]));
    }

    #[test]
    fn rank_deficient() {
        assert!(hnf(&[[1, 1, 0, 0], [2, 2, 0, 0]]).is_none());
    }

    #[test]
    fn kernel_lattice() {
        let a = [[1, 0, 0, 0], [2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 0, 0]];
        let k = kernel_mod(&a, 9);
        for c in &k {
            let v: Vec<i128> = (0..4)
                .map(|t| (0..4).map(|i| c[i] * a[i][t]).sum::<i128>())
                .collect();
            assert!(v.iter().all(|x| x % 9 == 0));
        }
        let b = hnf(&k).unwrap();
        // c0 + 2 c1 = 0 mod 9 and 3 c2 = 0 mod 9
        assert_eq!(index(&b), 9 * 3);
    }

    #[test]
    fn generators_recovered() {
        let g = [
            [2, 1, 0, 3],
            [0, 3, 1, 1],
            [1, 0, 0, 5],
            [4, 4, 4, 4],
            [0, 0, 7, 1],
        ];
        let b = hnf(&g).unwrap();
        for r in &g {
            assert!(contains(&b, r));
        }
        for r in &b {
            assert!(r.iter().all(|c| c.abs() < 1000));
        }
    }
}
