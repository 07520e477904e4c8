//! Residue-tree search for integral roots of nrd(Y(x)) = N with Hensel
//! certificates, where Y(x) = base + x1 d1 + x2 d2 + x3 d3.

use super::algebra::{add, scale, Ambient, Elt};

fn vp(x: i128, p: i128) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut x = x;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchError {
    /// Residue tree deeper than the representable precision.
    Depth,
    /// Node budget spent.
    Budget,
}

pub struct Problem {
    pub amb: Ambient,
    pub p: i128,
    pub base: Elt,
    pub dirs: [Elt; 3],
    pub target: i128,
    /// Residues mod p excluded for x (the imprimitive classes), if any.
    pub forbidden: Vec<[i128; 3]>,
    pub max_depth: u32,
}

pub struct Search<'a> {
    pub prob: &'a Problem,
    pub nodes: u64,
    pub budget: u64,
}

impl Problem {
    pub fn point(&self, x: &[i128; 3]) -> Elt {
        let mut y = self.base;
        for i in 0..3 {
            y = add(&y, &scale(x[i], &self.dirs[i]));
        }
        y
    }

    pub fn value(&self, y: &Elt) -> i128 {
        self.amb.nrd(y) - self.target
    }

    /// (v(G), min v of the gradient); v(G) = u32::MAX for an exact root.
    fn hensel_data(&self, x: &[i128; 3]) -> (u32, u32) {
        let y = self.point(x);
        let g = self.value(&y);
        let s = self
            .dirs
            .iter()
            .map(|d| vp(self.amb.polar(&y, d), self.p))
            .min()
            .unwrap_or(u32::MAX);
        (vp(g, self.p), s)
    }

    /// A root is certified in the class of x mod p^need.
    pub(crate) fn certified(&self, x: &[i128; 3], need: u32) -> bool {
        let (v, s) = self.hensel_data(x);
        if v == u32::MAX {
            return true;
        }
        s != u32::MAX && v > 2 * s && v - s >= need
    }

    fn allowed(&self, x: &[i128; 3]) -> bool {
        let r = [
            x[0].rem_euclid(self.p),
            x[1].rem_euclid(self.p),
            x[2].rem_euclid(self.p),
        ];
        !self.forbidden.contains(&r)
    }

    pub fn children(&self, x: &[i128; 3], j: u32) -> Vec<[i128; 3]> {
        let pj = self.p.pow(j);
        let pj1 = pj * self.p;
        let mut out = Vec::new();
        for a in 0..self.p {
            for b in 0..self.p {
                for c in 0..self.p {
                    let xc = [x[0] + pj * a, x[1] + pj * b, x[2] + pj * c];
                    if j == 0 && !self.allowed(&xc) {
                        continue;
                    }
                    if self.value(&self.point(&xc)) % pj1 == 0 {
                        out.push(xc);
                    }
                }
            }
        }
        out
    }
}

impl<'a> Search<'a> {
    pub fn new(prob: &'a Problem, budget: u64) -> Self {
        Search {
            prob,
            nodes: 0,
            budget,
        }
    }

    pub(crate) fn tick(&mut self) -> Result<(), SearchError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(SearchError::Budget)
        } else {
            Ok(())
        }
    }

    /// Depth-first search below the node (x, j) for a certified root whose
    /// class mod p^need agrees with x. Level 0 is never certified when
    /// residues are excluded.
    pub fn find_root(
        &mut self,
        x: [i128; 3],
        j: u32,
        need: u32,
    ) -> Result<Option<[i128; 3]>, SearchError> {
        self.tick()?;
        let guarded = j == 0 && !self.prob.forbidden.is_empty();
        if !guarded && self.prob.certified(&x, need) {
            return Ok(Some(x));
        }
        if j >= self.prob.max_depth {
            return Err(SearchError::Depth);
        }
        for c in self.prob.children(&x, j) {
            if let Some(r) = self.find_root(c, j + 1, need)? {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    /// Residue classes x mod p^k containing a root.
    pub fn root_classes(&mut self, k: u32) -> Result<Vec<[i128; 3]>, SearchError> {
        let mut level = vec![[0i128; 3]];
        for j in 0..k {
            let mut next = Vec::new();
            for x in &level {
                self.tick()?;
                next.extend(self.prob.children(x, j));
            }
            level = next;
        }
        let mut out = Vec::new();
        for x in level {
            if self.find_root(x, k, k)?.is_some() {
                out.push(x);
            }
        }
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_zero_problem(target: i128, p: i128) -> Problem {
        // Y = [[x3, x1], [x2, -x3]], nrd = -x3^2 - x1 x2
        Problem {
            amb: Ambient::Matrix,
            p,
            base: [0, 0, 0, 0],
            dirs: [[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, -1]],
            target,
            forbidden: vec![],
            max_depth: 20,
        }
    }

    #[test]
    fn finds_root_of_isotropic_form() {
        let prob = trace_zero_problem(-7, 3);
        let mut s = Search::new(&prob, 100_000);
        let r = s.find_root([0; 3], 0, 0).unwrap().unwrap();
        let (v, sg) = prob.hensel_data(&r);
        assert!(v == u32::MAX || v > 2 * sg);
    }

    #[test]
    fn root_classes_match_brute_count() {
        let p = 3i128;
        let prob = trace_zero_problem(-1, p);
        let mut s = Search::new(&prob, 1_000_000);
        let cls = s.root_classes(2).unwrap();
        let m = p * p;
        let mut brute = 0;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if (-c * c - a * b + 1).rem_euclid(m) == 0 {
                        brute += 1;
                    }
                }
            }
        }
        // smooth quadric: every solution mod p^2 lifts
        assert_eq!(cls.len(), brute);
    }

    #[test]
    fn all_residues_forbidden() {
        let mut prob = trace_zero_problem(0, 3);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    prob.forbidden.push([a, b, c]);
                }
            }
        }
        let mut s = Search::new(&prob, 1000);
        assert_eq!(s.find_root([0; 3], 0, 1).unwrap(), None);
    }
}
