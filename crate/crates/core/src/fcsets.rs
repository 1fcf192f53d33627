//! Fusion-closed sets of primaries and their lattice.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::fusion::ModularData;

/// Subset of primaries stored as a bitset over `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FcSet {
    words: Vec<u64>,
    universe: usize,
}

impl FcSet {
    pub fn empty(universe: usize) -> Self {
        FcSet { words: vec![0; universe.div_ceil(64).max(1)], universe }
    }

    pub fn full(universe: usize) -> Self {
        Self::from_indices(universe, 0..universe)
    }

    pub fn vacuum(universe: usize) -> Self {
        Self::from_indices(universe, [0])
    }

    pub fn from_indices(universe: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.universe, "primary index {i} out of range");
        let had = self.contains(i);
        self.words[i / 64] |= 1 << (i % 64);
        !had
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.universe).filter(|&i| self.contains(i)).collect()
    }

    pub fn is_subset(&self, other: &FcSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &FcSet) -> FcSet {
        FcSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(), universe: self.universe }
    }

    pub fn union(&self, other: &FcSet) -> FcSet {
        FcSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(), universe: self.universe }
    }

    pub fn labels<'a>(&self, md: &'a ModularData) -> Vec<&'a str> {
        self.members().into_iter().map(|i| md.label(i)).collect()
    }

    /// `{a,b,c}` form used in reports.
    pub fn display(&self, md: &ModularData) -> String {
        format!("{{{}}}", self.labels(md).join(","))
    }
}

impl Ord for FcSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words).rev() {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for FcSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Parses a comma separated label list into a set (vacuum not added).
pub fn parse_labels(md: &ModularData, text: &str) -> Result<FcSet> {
    let mut s = FcSet::empty(md.rank());
    for l in text.split(',').map(str::trim).filter(|l| !l.is_empty()) {
        let i = md
            .base()
            .index_of(l)
            .ok_or_else(|| Error::Precondition(format!("unknown primary '{l}'")))?;
        s.insert(i);
    }
    Ok(s)
}

/// Contains the vacuum and is closed under fusion.
pub fn is_fc(s: &FcSet, md: &ModularData) -> bool {
    if !s.contains(0) {
        return false;
    }
    let m = s.members();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i..] {
            if md.base().products(a, b).any(|(r, _)| !s.contains(r)) {
                return false;
            }
        }
    }
    true
}

/// Smallest FC set containing `s`.
pub fn closure(s: &FcSet, md: &ModularData) -> FcSet {
    let mut out = s.clone();
    out.insert(0);
    let mut members = out.members();
    let mut queue: VecDeque<usize> = members.iter().copied().collect();
    while let Some(a) = queue.pop_front() {
        let snapshot = members.clone();
        for b in snapshot {
            for (r, _) in md.base().products(a, b) {
                if out.insert(r) {
                    members.push(r);
                    queue.push_back(r);
                }
            }
        }
    }
    out
}

/// `{p : ρ_p(α) = d_α for all α ∈ g}`.
fn dual_raw(g: &FcSet, md: &ModularData) -> FcSet {
    let gm = g.members();
    FcSet::from_indices(md.rank(), (0..md.rank()).filter(|&p| gm.iter().all(|&a| md.rho(p, a) == md.d(a))))
}

/// The trivial class `g^⊥`, checked to be FC and to dualize back to `g`.
pub fn dual(g: &FcSet, md: &ModularData) -> Result<FcSet> {
    let d = dual_raw(g, md);
    if !is_fc(&d, md) {
        return Err(Error::Identity(format!("dual of {} is not fusion closed", g.display(md))));
    }
    if is_fc(g, md) && dual_raw(&d, md) != *g {
        return Err(Error::Identity(format!("double dual of {} differs from it", g.display(md))));
    }
    Ok(d)
}

pub fn meet(g: &FcSet, h: &FcSet) -> FcSet {
    g.intersection(h)
}

/// `dual(dual(g) ∩ dual(h))`.
pub fn join(g: &FcSet, h: &FcSet, md: &ModularData) -> Result<FcSet> {
    let a = dual(g, md)?;
    let b = dual(h, md)?;
    dual(&a.intersection(&b), md)
}

/// All FC sets in canonical order with their covering relation.
#[derive(Clone, Debug)]
pub struct FcLattice {
    pub sets: Vec<FcSet>,
    /// `(lower, upper)` index pairs of covers.
    pub hasse: Vec<(usize, usize)>,
    index: HashMap<FcSet, usize>,
}

impl FcLattice {
    pub fn from_sets(mut sets: Vec<FcSet>) -> Self {
        sets.sort();
        sets.dedup();
        let index = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let n = sets.len();
        let mut hasse = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if sets[i] != sets[j] && sets[i].is_subset(&sets[j]) {
                    let between = (i + 1..j).any(|k| {
                        sets[i].is_subset(&sets[k]) && sets[k].is_subset(&sets[j]) && sets[k] != sets[i] && sets[k] != sets[j]
                    });
                    if !between {
                        hasse.push((i, j));
                    }
                }
            }
        }
        FcLattice { sets, hasse, index }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn index_of(&self, s: &FcSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Least upper bound inside the lattice.
    pub fn lub(&self, a: usize, b: usize) -> usize {
        let u = self.sets[a].union(&self.sets[b]);
        (0..self.len())
            .find(|&k| u.is_subset(&self.sets[k]))
            .expect("the full set bounds everything")
    }

    pub fn glb(&self, a: usize, b: usize) -> usize {
        let m = self.sets[a].intersection(&self.sets[b]);
        self.index_of(&m).expect("FC sets are closed under intersection")
    }
}

/// Closure-BFS from `{0}`, adding one primary at a time.
pub fn enumerate_fcsets(md: &ModularData, cfg: &RunConfig) -> Result<FcLattice> {
    let start = closure(&FcSet::vacuum(md.rank()), md);
    let mut seen: HashMap<FcSet, ()> = HashMap::new();
    seen.insert(start.clone(), ());
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for p in 0..md.rank() {
            if s.contains(p) {
                continue;
            }
            let mut t = s.clone();
            t.insert(p);
            let t = closure(&t, md);
            if seen.insert(t.clone(), ()).is_none() {
                if seen.len() > cfg.budget {
                    return Err(Error::Budget(cfg.budget));
                }
                queue.push_back(t);
            }
        }
    }
    Ok(FcLattice::from_sets(seen.into_keys().collect()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeProps {
    pub is_modular: bool,
    pub is_distributive: bool,
    /// `(x, a, b)` with `x ≤ b` and `x ∨ (a ∧ b) ≠ (x ∨ a) ∧ b`.
    pub modular_witness: Option<[usize; 3]>,
    /// `(a, b, c)` with `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c)`.
    pub distributive_witness: Option<[usize; 3]>,
    /// Arguesian law result when requested and small enough.
    pub arguesian: Option<bool>,
}

/// Lattices above this size skip the Arguesian test even when asked.
pub const ARGUESIAN_MAX: usize = 12;

pub fn lattice_props(l: &FcLattice, arguesian: bool) -> LatticeProps {
    let n = l.len();
    let mut j = vec![vec![0usize; n]; n];
    let mut m = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            j[a][b] = l.lub(a, b);
            m[a][b] = l.glb(a, b);
        }
    }
    let leq = |a: usize, b: usize| m[a][b] == a;
    let mut modular_witness = None;
    'm: for x in 0..n {
        for b in 0..n {
            if !leq(x, b) {
                continue;
            }
            for a in 0..n {
                if j[x][m[a][b]] != m[j[x][a]][b] {
                    modular_witness = Some([x, a, b]);
                    break 'm;
                }
            }
        }
    }
    let mut distributive_witness = None;
    'd: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if m[a][j[b][c]] != j[m[a][b]][m[a][c]] {
                    distributive_witness = Some([a, b, c]);
                    break 'd;
                }
            }
        }
    }
    let arguesian = (arguesian && n <= ARGUESIAN_MAX).then(|| arguesian_holds(n, &j, &m));
    LatticeProps {
        is_modular: modular_witness.is_none(),
        is_distributive: distributive_witness.is_none(),
        modular_witness,
        distributive_witness,
        arguesian,
    }
}

/// `(a0∨b0)∧(a1∨b1)∧(a2∨b2) ≤ a0∨(b0∧(c∨b1))` with
/// `c = c2∧(c0∨c1)` and `ci = (aj∨ak)∧(bj∨bk)`.
fn arguesian_holds(n: usize, j: &[Vec<usize>], m: &[Vec<usize>]) -> bool {
    let leq = |a: usize, b: usize| m[a][b] == a;
    for a0 in 0..n {
        for a1 in 0..n {
            for a2 in 0..n {
                let a01 = j[a0][a1];
                let a02 = j[a0][a2];
                let a12 = j[a1][a2];
                for b0 in 0..n {
                    for b1 in 0..n {
                        for b2 in 0..n {
                            let lhs = m[m[j[a0][b0]][j[a1][b1]]][j[a2][b2]];
                            let c0 = m[a12][j[b1][b2]];
                            let c1 = m[a02][j[b0][b2]];
                            let c2 = m[a01][j[b0][b1]];
                            let c = m[c2][j[c0][c1]];
                            let rhs = j[a0][m[b0][j[c][b1]]];
                            if !leq(lhs, rhs) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Graphviz rendering of the Hasse diagram.
pub fn to_dot(l: &FcLattice, md: &ModularData) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph fcsets {{");
    let _ = writeln!(out, "  rankdir=BT;");
    for (i, s) in l.sets.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", s.labels(md).join(","));
    }
    for (a, b) in &l.hasse {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagon() -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        // 0 < 1 < 2 < 4 and 0 < 3 < 4; up[x] lists the elements above x
        let n = 5;
        let up: Vec<Vec<usize>> = vec![vec![0, 1, 2, 3, 4], vec![1, 2, 4], vec![2, 4], vec![3, 4], vec![4]];
        let leq = |x: usize, y: usize| up[x].contains(&y);
        let least = |c: Vec<usize>| *c.iter().find(|&&z| c.iter().all(|&w| leq(z, w))).unwrap();
        let greatest = |c: Vec<usize>| *c.iter().find(|&&z| c.iter().all(|&w| leq(w, z))).unwrap();
        let mut j = vec![vec![0; n]; n];
        let mut m = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                j[x][y] = least((0..n).filter(|&z| leq(x, z) && leq(y, z)).collect());
                m[x][y] = greatest((0..n).filter(|&z| leq(z, x) && leq(z, y)).collect());
            }
        }
        (j, m)
    }

    #[test]
    fn pentagon_is_not_arguesian() {
        let (j, m) = pentagon();
        assert!(!arguesian_holds(5, &j, &m));
    }

    #[test]
    fn chain_is_arguesian() {
        let n = 3;
        let j: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| a.max(b)).collect()).collect();
        let m: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect();
        assert!(arguesian_holds(n, &j, &m));
    }

    #[test]
    fn bitset_order_and_ops() {
        let a = FcSet::from_indices(70, [0, 65]);
        let b = FcSet::from_indices(70, [0, 1]);
        let c = FcSet::from_indices(70, [0, 1, 2]);
        assert!(b < a);
        assert!(a < c);
        assert_eq!(a.intersection(&b), FcSet::vacuum(70));
        assert_eq!(a.union(&b).len(), 3);
        assert!(b.is_subset(&c));
        assert!(!a.is_subset(&c));
        assert_eq!(a.members(), vec![0, 65]);
    }
}
