//! Self-maps of the state set.

use std::fmt;

use crate::error::{Error, Result};
use crate::stateset::{StateSet, MAX_STATES};

/// A map `q -> map[q]` on `{0, .., n-1}`.
///
/// Composition follows the right action used for automata: `s.then(t)` maps
/// `q` to `t(s(q))`, so the action of a word is the left-to-right composition
/// of its letters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation(Vec<u8>);

impl Transformation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n > MAX_STATES {
            return Err(Error::InvalidParameter(format!(
                "{n} states exceed the limit of {MAX_STATES}"
            )));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= n) {
            return Err(Error::StateOutOfRange { state: bad, n });
        }
        Ok(Transformation(map.into_iter().map(|t| t as u8).collect()))
    }

    pub(crate) fn from_bytes(map: Vec<u8>) -> Self {
        debug_assert!(map.iter().all(|&t| (t as usize) < map.len()));
        Transformation(map)
    }

    pub fn identity(n: usize) -> Self {
        Transformation((0..n as u8).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, q: usize) -> usize {
        self.0[q] as usize
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Transformation) -> Transformation {
        Transformation(self.0.iter().map(|&t| other.0[t as usize]).collect())
    }

    pub fn image(&self, set: StateSet) -> StateSet {
        set.iter().map(|q| self.get(q)).collect()
    }

    pub fn rank(&self) -> usize {
        self.image(StateSet::full(self.n())).len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(q, &t)| q == t as usize)
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.n()
    }

    pub fn power(&self, e: usize) -> Transformation {
        let mut out = Transformation::identity(self.n());
        for _ in 0..e {
            out = out.then(self);
        }
        out
    }

    /// The cycles of the functional graph, each listed from its smallest
    /// state in the direction of the map.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        // 0 = unvisited, 1 = on current path, 2 = finished
        let mut mark = vec![0u8; n];
        let mut out = Vec::new();
        for start in 0..n {
            if mark[start] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut q = start;
            while mark[q] == 0 {
                mark[q] = 1;
                path.push(q);
                q = self.get(q);
            }
            if mark[q] == 1 {
                let pos = path.iter().position(|&p| p == q).unwrap();
                let mut cyc = path[pos..].to_vec();
                let min_pos = cyc.iter().enumerate().min_by_key(|(_, &s)| s).unwrap().0;
                cyc.rotate_left(min_pos);
                out.push(cyc);
            }
            for p in path {
                mark[p] = 2;
            }
        }
        out.sort();
        out
    }

    /// True when some cycle of the functional graph has length at least 2.
    pub fn has_nontrivial_cycle(&self) -> bool {
        let n = self.n();
        // after n steps every state sits on its cycle
        let mut q: Vec<u8> = self.0.clone();
        for _ in 1..n {
            q = q.iter().map(|&t| self.0[t as usize]).collect();
        }
        q.iter().any(|&c| self.0[c as usize] != c)
    }

    /// The state set `{q : self(q) in set}`.
    pub fn preimage(&self, set: StateSet) -> StateSet {
        (0..self.n()).filter(|&q| set.contains(self.get(q))).collect()
    }

    pub fn inverse(&self) -> Option<Transformation> {
        if !self.is_permutation() {
            return None;
        }
        let mut inv = vec![0u8; self.n()];
        for (q, &t) in self.0.iter().enumerate() {
            inv[t as usize] = q as u8;
        }
        Some(Transformation(inv))
    }

    /// `sigma^-1 . self . sigma` in right-action notation: the map
    /// `sigma(q) -> sigma(self(q))`, i.e. `self` relabelled by `sigma`.
    pub fn conjugate_by(&self, sigma: &Transformation) -> Transformation {
        let mut out = vec![0u8; self.n()];
        for (q, &t) in self.0.iter().enumerate() {
            out[sigma.0[q] as usize] = sigma.0[t as usize];
        }
        Transformation(out)
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Transformation> for Vec<u8> {
    fn from(t: Transformation) -> Vec<u8> {
        t.0
    }
}
