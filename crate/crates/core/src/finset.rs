//! The ambient category: finite sets `{0, .., n-1}`, total maps between them,
//! pullbacks, coequalizers and a backtracking search for constrained maps.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::ops::Range;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet(usize);

impl FinSet {
    pub const EMPTY: FinSet = FinSet(0);
    pub const ONE: FinSet = FinSet(1);

    pub const fn new(size: usize) -> Self {
        FinSet(size)
    }

    pub const fn size(self) -> usize {
        self.0
    }

    pub fn elements(self) -> Range<usize> {
        0..self.0
    }

    pub fn contains(self, x: usize) -> bool {
        x < self.0
    }
}

impl From<usize> for FinSet {
    fn from(n: usize) -> Self {
        FinSet(n)
    }
}

/// A total function `dom -> cod`, stored as its table of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinMap {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl FinMap {
    /// Builds a map from its table; the domain is the table length.
    pub fn new(cod: impl Into<FinSet>, table: Vec<usize>) -> Result<Self> {
        let cod = cod.into();
        if let Some((i, &v)) = table.iter().enumerate().find(|(_, &v)| v >= cod.size()) {
            return Err(Error::out_of_range(format!("map entry {i}"), v, cod.size()));
        }
        Ok(FinMap {
            dom: FinSet(table.len()),
            cod,
            table,
        })
    }

    /// Tabulates `f`. Panics if `f` leaves the codomain; use [`new`](Self::new)
    /// for untrusted tables.
    pub fn from_fn(dom: impl Into<FinSet>, cod: impl Into<FinSet>, f: impl FnMut(usize) -> usize) -> Self {
        let (dom, cod) = (dom.into(), cod.into());
        let table: Vec<usize> = dom.elements().map(f).collect();
        assert!(
            table.iter().all(|&v| v < cod.size()),
            "FinMap::from_fn produced a value outside the codomain"
        );
        FinMap { dom, cod, table }
    }

    pub fn identity(set: impl Into<FinSet>) -> Self {
        let set = set.into();
        FinMap {
            dom: set,
            cod: set,
            table: set.elements().collect(),
        }
    }

    /// The unique map to the terminal set.
    pub fn to_one(dom: impl Into<FinSet>) -> Self {
        let dom = dom.into();
        FinMap {
            dom,
            cod: FinSet::ONE,
            table: vec![0; dom.size()],
        }
    }

    pub fn constant(dom: impl Into<FinSet>, cod: impl Into<FinSet>, value: usize) -> Result<Self> {
        let dom = dom.into();
        Self::new(cod, vec![value; dom.size()])
    }

    pub fn dom(&self) -> FinSet {
        self.dom
    }

    pub fn cod(&self) -> FinSet {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn into_table(self) -> Vec<usize> {
        self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &FinMap) -> Result<FinMap> {
        compose(self, g)
    }

    pub fn fiber(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.table
            .iter()
            .enumerate()
            .filter(move |(_, &v)| v == y)
            .map(|(x, _)| x)
    }

    /// All fibers at once, each in ascending order.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cod.size()];
        for (x, &y) in self.table.iter().enumerate() {
            out[y].push(x);
        }
        out
    }

    pub fn is_surjective(&self) -> bool {
        is_surjective(self)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.dom == self.cod && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.dom.size()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(FinMap {
            dom: self.cod,
            cod: self.dom,
            table,
        })
    }
}

/// Pointwise composite `f ∘ g`.
pub fn compose(f: &FinMap, g: &FinMap) -> Result<FinMap> {
    if g.cod != f.dom {
        return Err(Error::shape(format!(
            "cannot compose f: {} -> {} after g: {} -> {}",
            f.dom.size(),
            f.cod.size(),
            g.dom.size(),
            g.cod.size()
        )));
    }
    Ok(FinMap {
        dom: g.dom,
        cod: f.cod,
        table: g.table.iter().map(|&x| f.table[x]).collect(),
    })
}

pub fn is_surjective(f: &FinMap) -> bool {
    let mut hit = vec![false; f.cod.size()];
    for &y in &f.table {
        hit[y] = true;
    }
    hit.into_iter().all(|h| h)
}

/// The fibered product `{(a, b) | f(a) = g(b)}` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    apex: FinSet,
    proj1: FinMap,
    proj2: FinMap,
    pair_index: HashMap<(usize, usize), usize>,
}

impl Pullback {
    pub fn apex(&self) -> FinSet {
        self.apex
    }

    pub fn len(&self) -> usize {
        self.apex.size()
    }

    pub fn is_empty(&self) -> bool {
        self.apex.size() == 0
    }

    pub fn proj1(&self) -> &FinMap {
        &self.proj1
    }

    pub fn proj2(&self) -> &FinMap {
        &self.proj2
    }

    pub fn pair(&self, x: usize) -> (usize, usize) {
        (self.proj1.apply(x), self.proj2.apply(x))
    }

    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.pair_index.get(&(a, b)).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.apex.elements().map(|x| self.pair(x))
    }
}

pub fn pullback(f: &FinMap, g: &FinMap) -> Result<Pullback> {
    if f.cod != g.cod {
        return Err(Error::shape(format!(
            "pullback needs a common codomain, got {} and {}",
            f.cod.size(),
            g.cod.size()
        )));
    }
    let g_fibers = g.fibers();
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    let mut pair_index = HashMap::new();
    for a in f.dom.elements() {
        for &b in &g_fibers[f.apply(a)] {
            pair_index.insert((a, b), p1.len());
            p1.push(a);
            p2.push(b);
        }
    }
    let apex = FinSet(p1.len());
    Ok(Pullback {
        apex,
        proj1: FinMap { dom: apex, cod: f.dom, table: p1 },
        proj2: FinMap { dom: apex, cod: g.dom, table: p2 },
        pair_index,
    })
}

/// `a × b` as the pullback over the terminal set.
pub fn product(a: FinSet, b: FinSet) -> Pullback {
    pullback(&FinMap::to_one(a), &FinMap::to_one(b)).expect("both maps land in 1")
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Canonical quotient: classes numbered by their least member.
    pub fn into_quotient(mut self) -> Quotient {
        let n = self.parent.len();
        let mut class_of_root = vec![usize::MAX; n];
        let mut table = Vec::with_capacity(n);
        let mut classes = 0;
        for x in 0..n {
            let r = self.find(x);
            if class_of_root[r] == usize::MAX {
                class_of_root[r] = classes;
                classes += 1;
            }
            table.push(class_of_root[r]);
        }
        Quotient {
            source: FinSet(n),
            classes: FinSet(classes),
            proj: FinMap {
                dom: FinSet(n),
                cod: FinSet(classes),
                table,
            },
        }
    }
}

/// A surjection onto a set of classes, numbered by least representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    source: FinSet,
    classes: FinSet,
    proj: FinMap,
}

impl Quotient {
    /// The finest quotient identifying every listed pair.
    pub fn from_pairs(source: FinSet, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::new(source.size());
        for (a, b) in pairs {
            uf.union(a, b);
        }
        uf.into_quotient()
    }

    pub fn discrete(source: FinSet) -> Self {
        Quotient {
            source,
            classes: source,
            proj: FinMap::identity(source),
        }
    }

    pub fn source(&self) -> FinSet {
        self.source
    }

    pub fn classes(&self) -> FinSet {
        self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.size()
    }

    pub fn proj(&self) -> &FinMap {
        &self.proj
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.proj.apply(x)
    }

    /// Least member of each class; ascending by construction.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.classes.size()];
        for x in self.source.elements().rev() {
            reps[self.class_of(x)] = x;
        }
        reps
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        self.proj.fibers()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.classes.size()];
        for &c in self.proj.table() {
            sizes[c] += 1;
        }
        sizes
    }

    /// The unique `k` with `k ∘ proj = h`, if `h` is constant on classes.
    pub fn factor(&self, h: &FinMap) -> Option<FinMap> {
        if h.dom() != self.source {
            return None;
        }
        let mut table = vec![usize::MAX; self.classes.size()];
        for x in self.source.elements() {
            let c = self.class_of(x);
            if table[c] == usize::MAX {
                table[c] = h.apply(x);
            } else if table[c] != h.apply(x) {
                return None;
            }
        }
        Some(FinMap {
            dom: self.classes,
            cod: h.cod(),
            table,
        })
    }
}

/// Coequalizer of a parallel pair `f, g: A -> B`.
pub fn coequalizer(f: &FinMap, g: &FinMap) -> Result<Quotient> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::shape(format!(
            "coequalizer needs a parallel pair, got {} -> {} and {} -> {}",
            f.dom.size(),
            f.cod.size(),
            g.dom.size(),
            g.cod.size()
        )));
    }
    Ok(Quotient::from_pairs(
        f.cod,
        f.table.iter().copied().zip(g.table.iter().copied()),
    ))
}

/// Depth-first search over maps `dom -> cod`, assigning `0, 1, ..` in order
/// and trying values in ascending order (or the supplied candidate order).
#[derive(Clone, Debug)]
pub struct MapSearch {
    dom: FinSet,
    cod: FinSet,
    injective: bool,
    candidates: Option<Vec<Vec<usize>>>,
}

impl MapSearch {
    pub fn new(dom: FinSet, cod: FinSet) -> Self {
        MapSearch {
            dom,
            cod,
            injective: false,
            candidates: None,
        }
    }

    pub fn injective(mut self, yes: bool) -> Self {
        self.injective = yes;
        self
    }

    /// Restricts element `x` to `candidates[x]`, tried in the given order.
    pub fn with_candidates(mut self, candidates: Vec<Vec<usize>>) -> Self {
        assert_eq!(candidates.len(), self.dom.size());
        self.candidates = Some(candidates);
        self
    }

    /// Runs the search. `consistent` sees each partial assignment right after
    /// its last entry was set; `visit` sees every complete one and may stop.
    pub fn run(
        &self,
        mut consistent: impl FnMut(&[usize]) -> bool,
        mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
    ) {
        let n = self.dom.size();
        let all: Vec<usize> = self.cod.elements().collect();
        let cands = |x: usize| -> &[usize] {
            match &self.candidates {
                Some(c) => &c[x],
                None => &all,
            }
        };
        if n == 0 {
            let _ = visit(&[]);
            return;
        }
        let mut used = vec![false; self.cod.size()];
        let mut assignment: Vec<usize> = Vec::with_capacity(n);
        let mut cursor = vec![0usize; n];
        loop {
            let x = assignment.len();
            let options = cands(x);
            let mut advanced = false;
            while cursor[x] < options.len() {
                let y = options[cursor[x]];
                cursor[x] += 1;
                if self.injective && used[y] {
                    continue;
                }
                assignment.push(y);
                if consistent(&assignment) {
                    if self.injective {
                        used[y] = true;
                    }
                    advanced = true;
                    break;
                }
                assignment.pop();
            }
            if advanced {
                if assignment.len() == n {
                    if visit(&assignment).is_break() {
                        return;
                    }
                    let y = assignment.pop().expect("nonempty");
                    if self.injective {
                        used[y] = false;
                    }
                } else {
                    cursor[x + 1] = 0;
                }
                continue;
            }
            // exhausted x: backtrack
            if x == 0 {
                return;
            }
            let y = assignment.pop().expect("nonempty");
            if self.injective {
                used[y] = false;
            }
        }
    }

    pub fn first(&self, consistent: impl FnMut(&[usize]) -> bool) -> Option<FinMap> {
        let mut found = None;
        self.run(consistent, |a| {
            found = Some(a.to_vec());
            ControlFlow::Break(())
        });
        found.map(|table| FinMap {
            dom: self.dom,
            cod: self.cod,
            table,
        })
    }
}

/// First bijection `dom -> cod` (in lexicographic assignment order) whose
/// every prefix passes `consistent`.
pub fn find_bijection_search(
    dom: FinSet,
    cod: FinSet,
    consistent: impl FnMut(&[usize]) -> bool,
) -> Option<FinMap> {
    if dom != cod {
        return None;
    }
    MapSearch::new(dom, cod).injective(true).first(consistent)
}
