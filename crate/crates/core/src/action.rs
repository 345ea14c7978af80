//! Groupoid actions on finite sets and the maps between them.
//!
//! An action of `G` on `X` has an anchor `X -> G0`; an arrow `g` acts on
//! `x` exactly when `src g = anchor x`, and `g · x` lies over `tgt g`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finset::{self, FinMap, FinSet, Pullback, Quotient};
use crate::group::GroupTable;
use crate::groupoid::Groupoid;
use crate::report::{Law, ValidationReport};
use crate::table::PartialTable;

#[derive(Clone, PartialEq, Eq)]
pub struct GAction {
    groupoid: Arc<Groupoid>,
    anchor: FinMap,
    act: PartialTable,
}

impl fmt::Debug for GAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GAction")
            .field("carrier", &self.carrier().size())
            .field("anchor", &self.anchor.table())
            .field("act", &self.act.triples().collect::<Vec<_>>())
            .finish()
    }
}

impl GAction {
    /// Checks shapes and ranges only; see [`validate`](Self::validate).
    pub fn from_raw(groupoid: Arc<Groupoid>, anchor: FinMap, act: PartialTable) -> Result<Self> {
        if anchor.cod() != groupoid.objects() {
            return Err(Error::shape(format!(
                "anchor lands in {} objects but the groupoid has {}",
                anchor.cod().size(),
                groupoid.num_objects()
            )));
        }
        if act.rows() != groupoid.num_arrows() || act.cols() != anchor.dom().size() {
            return Err(Error::shape(format!(
                "action table is {}x{}, expected {}x{}",
                act.rows(),
                act.cols(),
                groupoid.num_arrows(),
                anchor.dom().size()
            )));
        }
        if let Some(v) = act.max_value().filter(|&v| v >= anchor.dom().size()) {
            return Err(Error::out_of_range("action value", v, anchor.dom().size()));
        }
        Ok(GAction {
            groupoid,
            anchor,
            act,
        })
    }

    pub fn new(groupoid: Arc<Groupoid>, anchor: FinMap, act: PartialTable) -> Result<Self> {
        Self::from_raw(groupoid, anchor, act)?.into_valid()
    }

    pub(crate) fn into_valid(self) -> Result<Self> {
        let report = self.validate();
        if report.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid {
                kind: "action",
                report,
            })
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let g = &*self.groupoid;
        let mut r = ValidationReport::new();
        for a in g.arrows().elements() {
            for x in self.carrier().elements() {
                let legal = g.src(a) == self.anchor(x);
                match (legal, self.act.get(a, x)) {
                    (true, None) => r.push(Law::ActionDomain, format!("arrow {a} does not act on {x}")),
                    (false, Some(_)) => r.push(
                        Law::ActionDomain,
                        format!("arrow {a} acts on {x} although {x} is not over its source"),
                    ),
                    (true, Some(y)) => r.check(self.anchor(y) == g.tgt(a), Law::ActionAnchor, || {
                        format!("{a} · {x} = {y} is not over the target of {a}")
                    }),
                    (false, None) => {}
                }
            }
        }
        for x in self.carrier().elements() {
            let e = g.unit(self.anchor(x));
            r.check(
                self.act.get(e, x).is_none_or(|y| y == x),
                Law::ActionUnit,
                || format!("unit arrow {e} moves {x}"),
            );
        }
        for (a, b, ab) in g.mul_table().triples() {
            for x in self.carrier().elements() {
                let stepwise = self.act.get(b, x).and_then(|y| self.act.get(a, y));
                let direct = self.act.get(ab, x);
                if let (Some(s), Some(d)) = (stepwise, direct) {
                    r.check(s == d, Law::ActionAssociativity, || {
                        format!("{a} · ({b} · {x}) = {s} but ({a} {b}) · {x} = {d}")
                    });
                }
            }
        }
        r
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn groupoid_arc(&self) -> &Arc<Groupoid> {
        &self.groupoid
    }

    pub fn carrier(&self) -> FinSet {
        self.anchor.dom()
    }

    pub fn len(&self) -> usize {
        self.anchor.dom().size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn anchor_map(&self) -> &FinMap {
        &self.anchor
    }

    #[inline]
    pub fn anchor(&self, x: usize) -> usize {
        self.anchor.apply(x)
    }

    pub fn act_table(&self) -> &PartialTable {
        &self.act
    }

    #[inline]
    pub fn try_act(&self, g: usize, x: usize) -> Option<usize> {
        self.act.get(g, x)
    }

    /// `g · x`. Panics unless `src g = anchor x`.
    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        match self.act.get(g, x) {
            Some(y) => y,
            None => panic!("arrow {g} cannot act on element {x}"),
        }
    }

    /// Arrows that act on `x`, ascending.
    pub fn arrows_at(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let base = self.anchor(x);
        self.groupoid
            .arrows()
            .elements()
            .filter(move |&g| self.groupoid.src(g) == base)
    }

    pub fn same_groupoid(&self, other: &GAction) -> bool {
        same_groupoid(&self.groupoid, &other.groupoid)
    }

    /// Renumbers the carrier along the bijection `to_new`.
    pub fn relabeled(&self, to_new: &FinMap) -> Result<GAction> {
        if !to_new.is_bijective() || to_new.dom() != self.carrier() {
            return Err(Error::shape("carrier relabeling is not a permutation"));
        }
        let t = to_new.table();
        let mut anchor = vec![0; self.len()];
        for x in self.carrier().elements() {
            anchor[t[x]] = self.anchor(x);
        }
        let ids: Vec<usize> = self.groupoid.arrows().elements().collect();
        Ok(GAction {
            groupoid: self.groupoid.clone(),
            anchor: FinMap::new(self.groupoid.num_objects(), anchor)?,
            act: self.act.relabeled(&ids, t, |y| t[y]),
        })
    }

    // ----- constructions -----

    /// `X × G0` with every arrow moving only the second coordinate;
    /// element `(x, u)` is numbered `x * |G0| + u`.
    pub fn trivial(groupoid: Arc<Groupoid>, set: impl Into<FinSet>) -> GAction {
        let n0 = groupoid.num_objects();
        let size = set.into().size() * n0;
        let anchor = FinMap::from_fn(size, n0, |i| i % n0);
        let mut act = PartialTable::new(groupoid.num_arrows(), size);
        for i in 0..size {
            let (x, u) = (i / n0, i % n0);
            for g in groupoid.arrows().elements().filter(|&g| groupoid.src(g) == u) {
                act.set(g, i, x * n0 + groupoid.tgt(g));
            }
        }
        GAction {
            groupoid,
            anchor,
            act,
        }
    }

    /// The terminal action: `G0` acted on by moving along arrows.
    pub fn terminal(groupoid: Arc<Groupoid>) -> GAction {
        Self::trivial(groupoid, FinSet::ONE)
    }

    /// The free action on `f: X -> G0`: pairs `(g, x)` with `src g = f x`,
    /// in lexicographic order, anchored at `tgt g` and acted on by
    /// composition.
    pub fn free(groupoid: Arc<Groupoid>, f: &FinMap) -> Result<GAction> {
        let pb = free_carrier(&groupoid, f)?;
        let anchor = FinMap::from_fn(pb.apex(), groupoid.objects(), |i| groupoid.tgt(pb.pair(i).0));
        let mut act = PartialTable::new(groupoid.num_arrows(), pb.len());
        for (i, (g2, x)) in pb.pairs().enumerate() {
            for g1 in groupoid.arrows().elements().filter(|&g1| groupoid.src(g1) == groupoid.tgt(g2)) {
                let j = pb.index_of(groupoid.mul(g1, g2), x).expect("composite stays in the pullback");
                act.set(g1, i, j);
            }
        }
        Ok(GAction {
            groupoid,
            anchor,
            act,
        })
    }

    /// The free action on the identity of `G0`, which is `G1` acting on
    /// itself by composition. Element `i` is arrow `i`.
    pub fn arrows_acting(groupoid: Arc<Groupoid>) -> GAction {
        let id = FinMap::identity(groupoid.objects());
        Self::free(groupoid, &id).expect("identity lands in the objects")
    }

    /// Arrows out of `x` modulo right multiplication by the subgroup of
    /// endo-arrows of `x` generated by `subgroup`: the transitive action
    /// with that stabilizer.
    pub fn cosets(groupoid: Arc<Groupoid>, x: usize, subgroup: &[usize]) -> Result<GAction> {
        if x >= groupoid.num_objects() {
            return Err(Error::out_of_range("object", x, groupoid.num_objects()));
        }
        if let Some(&s) = subgroup.iter().find(|&&s| groupoid.src(s) != x || groupoid.tgt(s) != x) {
            return Err(Error::shape(format!("arrow {s} is not an endo-arrow of object {x}")));
        }
        let out: Vec<usize> = groupoid.arrows().elements().filter(|&g| groupoid.src(g) == x).collect();
        let pos = |g: usize| out.binary_search(&g).expect("arrow out of x");
        let q = Quotient::from_pairs(
            FinSet::new(out.len()),
            out.iter()
                .flat_map(|&g| subgroup.iter().map(move |&s| (g, s)))
                .map(|(g, s)| (pos(g), pos(groupoid.mul(g, s)))),
        );
        let reps = q.representatives();
        let anchor = FinMap::from_fn(q.num_classes(), groupoid.num_objects(), |c| groupoid.tgt(out[reps[c]]));
        let mut act = PartialTable::new(groupoid.num_arrows(), q.num_classes());
        for (c, &r) in reps.iter().enumerate() {
            let g = out[r];
            for h in groupoid.arrows().elements().filter(|&h| groupoid.src(h) == groupoid.tgt(g)) {
                act.set(h, c, q.class_of(pos(groupoid.mul(h, g))));
            }
        }
        GAction::new(groupoid, anchor, act)
    }

    /// Disjoint union of two actions of the same groupoid.
    pub fn sum(a: &GAction, b: &GAction) -> Result<GAction> {
        check_same(a, b)?;
        let n = a.len();
        let anchor = FinMap::new(
            a.groupoid.num_objects(),
            a.anchor.table().iter().chain(b.anchor.table()).copied().collect(),
        )?;
        let mut act = PartialTable::new(a.groupoid.num_arrows(), n + b.len());
        for (g, x, y) in a.act.triples() {
            act.set(g, x, y);
        }
        for (g, x, y) in b.act.triples() {
            act.set(g, x + n, y + n);
        }
        Ok(GAction {
            groupoid: a.groupoid.clone(),
            anchor,
            act,
        })
    }

    /// Connected components: the coequalizer of the action and the
    /// projection out of the action domain.
    pub fn orbits(&self) -> Quotient {
        let domain: Vec<(usize, usize)> = self.act.triples().map(|(g, x, _)| (g, x)).collect();
        let acted = FinMap::from_fn(domain.len(), self.carrier(), |i| self.act(domain[i].0, domain[i].1));
        let projected = FinMap::from_fn(domain.len(), self.carrier(), |i| domain[i].1);
        finset::coequalizer(&acted, &projected).expect("parallel maps into the carrier")
    }

    /// The groupoid with objects the carrier and arrows `(g, x)`, running
    /// from `x` to `g · x`; arrows are in lexicographic order.
    pub fn action_groupoid(&self) -> Groupoid {
        let g = &*self.groupoid;
        let pb = finset::pullback(g.src_map(), &self.anchor).expect("both land in G0");
        let n = pb.len();
        let src = FinMap::from_fn(n, self.carrier(), |i| pb.pair(i).1);
        let tgt = FinMap::from_fn(n, self.carrier(), |i| {
            let (a, x) = pb.pair(i);
            self.act(a, x)
        });
        let unit = FinMap::from_fn(self.carrier(), n, |x| {
            pb.index_of(g.unit(self.anchor(x)), x).expect("unit acts")
        });
        let inv = FinMap::from_fn(n, n, |i| {
            let (a, x) = pb.pair(i);
            pb.index_of(g.inv(a), self.act(a, x)).expect("inverse acts")
        });
        let mut mul = PartialTable::new(n, n);
        for j in 0..n {
            let (a2, x2) = pb.pair(j);
            let y = self.act(a2, x2);
            for a1 in g.arrows().elements().filter(|&a1| g.src(a1) == self.anchor(y)) {
                let i = pb.index_of(a1, y).expect("a1 acts on y");
                mul.set(i, j, pb.index_of(g.mul(a1, a2), x2).expect("composite acts"));
            }
        }
        Groupoid::from_raw(self.carrier(), src, tgt, unit, inv, mul).expect("action groupoid shapes")
    }

    /// Fibered product over `G0` with the diagonal action; elements are
    /// the pairs `(a, b)` with equal anchors, lexicographically.
    pub fn product(a: &GAction, b: &GAction) -> Result<GAction> {
        check_same(a, b)?;
        let pb = finset::pullback(&a.anchor, &b.anchor)?;
        Ok(a.diagonal_on(&pb, b, |x| a.anchor(x)))
    }

    /// The pullback of two equivariant maps into a common action, with the
    /// diagonal action on pairs `(x, y)` with `h x = k y`.
    pub fn pullback(h: &EquivariantMap, k: &EquivariantMap) -> Result<GAction> {
        if h.cod != k.cod {
            return Err(Error::shape("pullback of maps with different codomains"));
        }
        check_same(&h.dom, &k.dom)?;
        let pb = finset::pullback(&h.map, &k.map)?;
        Ok(h.dom.diagonal_on(&pb, &k.dom, |x| h.dom.anchor(x)))
    }

    fn diagonal_on(&self, pb: &Pullback, other: &GAction, anchor_of_first: impl Fn(usize) -> usize) -> GAction {
        let g = &*self.groupoid;
        let anchor = FinMap::from_fn(pb.apex(), g.objects(), |i| anchor_of_first(pb.pair(i).0));
        let mut act = PartialTable::new(g.num_arrows(), pb.len());
        for (i, (x, y)) in pb.pairs().enumerate() {
            for a in self.arrows_at(x) {
                let j = pb
                    .index_of(self.act(a, x), other.act(a, y))
                    .expect("diagonal action stays in the fibered product");
                act.set(a, i, j);
            }
        }
        GAction {
            groupoid: self.groupoid.clone(),
            anchor,
            act,
        }
    }

    /// The action induced on a quotient of the carrier. Each class is
    /// acted on through its least member; the caller guarantees the
    /// result does not depend on that choice.
    pub(crate) fn on_quotient(&self, q: &Quotient) -> GAction {
        induced_on_quotient(&self.groupoid, q, |x| self.anchor(x), |g, x| self.try_act(g, x))
    }
}

pub(crate) fn same_groupoid(a: &Arc<Groupoid>, b: &Arc<Groupoid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn check_same(a: &GAction, b: &GAction) -> Result<()> {
    if a.same_groupoid(b) {
        Ok(())
    } else {
        Err(Error::shape("actions of different groupoids"))
    }
}

pub(crate) fn free_carrier(groupoid: &Groupoid, f: &FinMap) -> Result<Pullback> {
    if f.cod() != groupoid.objects() {
        return Err(Error::shape(format!(
            "free action needs a map into {} objects, got one into {}",
            groupoid.num_objects(),
            f.cod().size()
        )));
    }
    finset::pullback(groupoid.src_map(), f)
}

/// An action on the classes of `q`, acting on each class through its least
/// member.
pub(crate) fn induced_on_quotient(
    groupoid: &Arc<Groupoid>,
    q: &Quotient,
    anchor: impl Fn(usize) -> usize,
    act: impl Fn(usize, usize) -> Option<usize>,
) -> GAction {
    let reps = q.representatives();
    let anchor_map = FinMap::from_fn(q.num_classes(), groupoid.num_objects(), |c| anchor(reps[c]));
    let mut table = PartialTable::new(groupoid.num_arrows(), q.num_classes());
    for (c, &r) in reps.iter().enumerate() {
        for g in groupoid.arrows().elements().filter(|&g| groupoid.src(g) == anchor(r)) {
            if let Some(y) = act(g, r) {
                table.set(g, c, q.class_of(y));
            }
        }
    }
    GAction {
        groupoid: groupoid.clone(),
        anchor: anchor_map,
        act: table,
    }
}

/// A map of carriers commuting with anchors and actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantMap {
    dom: GAction,
    cod: GAction,
    map: FinMap,
}

impl EquivariantMap {
    pub fn from_raw(dom: GAction, cod: GAction, map: FinMap) -> Result<Self> {
        check_same(&dom, &cod)?;
        if map.dom() != dom.carrier() || map.cod() != cod.carrier() {
            return Err(Error::shape(format!(
                "map {} -> {} between carriers of sizes {} and {}",
                map.dom().size(),
                map.cod().size(),
                dom.len(),
                cod.len()
            )));
        }
        Ok(EquivariantMap { dom, cod, map })
    }

    pub fn new(dom: GAction, cod: GAction, map: FinMap) -> Result<Self> {
        let m = Self::from_raw(dom, cod, map)?;
        let report = m.validate();
        if report.is_empty() {
            Ok(m)
        } else {
            Err(Error::Invalid {
                kind: "equivariant map",
                report,
            })
        }
    }

    pub fn identity(a: &GAction) -> Self {
        EquivariantMap {
            dom: a.clone(),
            cod: a.clone(),
            map: FinMap::identity(a.carrier()),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        for x in self.dom.carrier().elements() {
            let y = self.map.apply(x);
            r.check(self.cod.anchor(y) == self.dom.anchor(x), Law::AnchorPreservation, || {
                format!("{x} and its image {y} lie over different objects")
            });
        }
        for (g, x, gx) in self.dom.act.triples() {
            let y = self.map.apply(x);
            r.check(self.cod.try_act(g, y) == Some(self.map.apply(gx)), Law::Equivariance, || {
                format!("image of {g} · {x} differs from {g} · image of {x}")
            });
        }
        r
    }

    pub fn dom(&self) -> &GAction {
        &self.dom
    }

    pub fn cod(&self) -> &GAction {
        &self.cod
    }

    pub fn map(&self) -> &FinMap {
        &self.map
    }

    pub fn into_map(self) -> FinMap {
        self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map.apply(x)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &EquivariantMap) -> Result<EquivariantMap> {
        if first.cod != self.dom {
            return Err(Error::shape("equivariant maps do not compose"));
        }
        Ok(EquivariantMap {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            map: self.map.compose(&first.map)?,
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.map.is_bijective()
    }
}

/// Equivariant maps out of a carrier that carries one or more actions
/// (all of which must be respected), organized by orbit of the combined
/// action: a map is an independent choice of image for each orbit.
#[derive(Clone, Debug)]
pub struct HomSpace {
    dom_size: usize,
    cod_size: usize,
    orbits: Vec<Vec<usize>>,
    /// For each orbit, the admissible images of its members (aligned with
    /// the member list), in ascending order of the image of the least member.
    options: Vec<Vec<Vec<usize>>>,
}

impl HomSpace {
    /// `doms` must share one carrier, as must `cods`; `doms[i]` and
    /// `cods[i]` must be actions of the same groupoid.
    pub fn new(doms: &[&GAction], cods: &[&GAction]) -> Result<Self> {
        if doms.len() != cods.len() || doms.is_empty() {
            return Err(Error::shape("need matching nonempty lists of actions"));
        }
        let dom_size = doms[0].len();
        let cod_size = cods[0].len();
        for (d, c) in doms.iter().zip(cods) {
            check_same(d, c)?;
            if d.len() != dom_size || c.len() != cod_size {
                return Err(Error::shape("actions in a list must share a carrier"));
            }
        }
        let orbits = Quotient::from_pairs(
            FinSet::new(dom_size),
            doms.iter().flat_map(|d| d.act.triples().map(|(_, x, y)| (x, y))),
        )
        .members();
        let mut position = vec![0; dom_size];
        for members in &orbits {
            for (i, &x) in members.iter().enumerate() {
                position[x] = i;
            }
        }
        let options = orbits
            .iter()
            .map(|members| {
                let root = members[0];
                (0..cod_size)
                    .filter_map(|y| propagate(doms, cods, members, &position, root, y))
                    .collect()
            })
            .collect();
        Ok(HomSpace {
            dom_size,
            cod_size,
            orbits,
            options,
        })
    }

    pub fn count(&self) -> u128 {
        self.options.iter().map(|o| o.len() as u128).product()
    }

    pub fn is_empty(&self) -> bool {
        self.options.iter().any(Vec::is_empty)
    }

    /// Every map, with the first orbit's choice varying slowest.
    pub fn maps(&self) -> Vec<FinMap> {
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let mut choice = vec![0; self.orbits.len()];
        loop {
            out.push(self.assemble(&choice));
            let mut k = self.orbits.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < self.options[k].len() {
                    break;
                }
                choice[k] = 0;
            }
        }
    }

    pub fn first(&self) -> Option<FinMap> {
        (!self.is_empty()).then(|| self.assemble(&vec![0; self.orbits.len()]))
    }

    /// The first bijection, found by backtracking over orbits with disjoint
    /// images.
    pub fn first_bijection(&self) -> Option<FinMap> {
        if self.dom_size != self.cod_size {
            return None;
        }
        let mut used = vec![false; self.cod_size];
        let mut choice = Vec::with_capacity(self.orbits.len());
        self.bijection_search(&mut used, &mut choice)
            .then(|| self.assemble(&choice))
    }

    fn bijection_search(&self, used: &mut [bool], choice: &mut Vec<usize>) -> bool {
        let k = choice.len();
        if k == self.orbits.len() {
            return true;
        }
        for (i, images) in self.options[k].iter().enumerate() {
            let mut distinct = images.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != images.len() || images.iter().any(|&y| used[y]) {
                continue;
            }
            images.iter().for_each(|&y| used[y] = true);
            choice.push(i);
            if self.bijection_search(used, choice) {
                return true;
            }
            choice.pop();
            images.iter().for_each(|&y| used[y] = false);
        }
        false
    }

    fn assemble(&self, choice: &[usize]) -> FinMap {
        let mut table = vec![0; self.dom_size];
        for ((members, opts), &c) in self.orbits.iter().zip(&self.options).zip(choice) {
            for (&x, &y) in members.iter().zip(&opts[c]) {
                table[x] = y;
            }
        }
        FinMap::new(self.cod_size, table).expect("images in the codomain")
    }
}

// Sends `root` to `image` and extends along every action; returns the images
// of the orbit members, or None on a conflict or anchor mismatch.
fn propagate(
    doms: &[&GAction],
    cods: &[&GAction],
    members: &[usize],
    position: &[usize],
    root: usize,
    image: usize,
) -> Option<Vec<usize>> {
    let mut images = vec![usize::MAX; members.len()];
    images[position[root]] = image;
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        let y = images[position[x]];
        for (d, c) in doms.iter().zip(cods) {
            if d.anchor(x) != c.anchor(y) {
                return None;
            }
            for g in d.arrows_at(x) {
                let gx = d.act(g, x);
                let gy = c.try_act(g, y)?;
                let slot = &mut images[position[gx]];
                if *slot == usize::MAX {
                    *slot = gy;
                    stack.push(gx);
                } else if *slot != gy {
                    return None;
                }
            }
        }
    }
    Some(images)
}

/// All equivariant maps `a -> b`, deterministic order.
pub fn equivariant_maps(a: &GAction, b: &GAction) -> Result<Vec<EquivariantMap>> {
    Ok(HomSpace::new(&[a], &[b])?
        .maps()
        .into_iter()
        .map(|map| EquivariantMap {
            dom: a.clone(),
            cod: b.clone(),
            map,
        })
        .collect())
}

pub fn count_equivariant_maps(a: &GAction, b: &GAction) -> Result<u128> {
    Ok(HomSpace::new(&[a], &[b])?.count())
}

pub fn find_equivariant_isomorphism(a: &GAction, b: &GAction) -> Result<Option<EquivariantMap>> {
    Ok(HomSpace::new(&[a], &[b])?.first_bijection().map(|map| EquivariantMap {
        dom: a.clone(),
        cod: b.clone(),
        map,
    }))
}

/// Every action of `groupoid` on a set of `size` elements, up to
/// isomorphism (possibly with repeats). Elements are sorted by anchor, and
/// each component's action is a homomorphism from the isotropy group at its
/// base into the permutations of one fiber.
pub fn enumerate_actions(groupoid: &Arc<Groupoid>, size: usize) -> Vec<GAction> {
    let frames = groupoid.frames();
    let comp_sizes: Vec<usize> = frames.members.iter().map(Vec::len).collect();
    let mut out = Vec::new();
    let mut fibers = Vec::with_capacity(frames.len());
    fiber_splits(&comp_sizes, size, &mut fibers, &mut |fibers| {
        let homs: Vec<Vec<Vec<Vec<usize>>>> = fibers
            .iter()
            .zip(&frames.groups)
            .map(|(&k, group)| {
                let perms = crate::group::permutations(k);
                group
                    .homomorphisms(&GroupTable::symmetric(k))
                    .into_iter()
                    .map(|h| h.into_iter().map(|p| perms[p].clone()).collect())
                    .collect()
            })
            .collect();
        let mut choice = vec![0; homs.len()];
        loop {
            let chosen: Vec<&Vec<Vec<usize>>> = choice.iter().zip(&homs).map(|(&c, h)| &h[c]).collect();
            out.push(action_from_frames(groupoid, &frames, fibers, &chosen));
            let mut k = homs.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < homs[k].len() {
                    break;
                }
                choice[k] = 0;
            }
        }
    });
    out
}

fn fiber_splits(comp_sizes: &[usize], remaining: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    let k = acc.len();
    if k == comp_sizes.len() {
        if remaining == 0 {
            f(acc);
        }
        return;
    }
    for fiber in 0..=remaining / comp_sizes[k] {
        acc.push(fiber);
        fiber_splits(comp_sizes, remaining - fiber * comp_sizes[k], acc, f);
        acc.pop();
    }
}

fn action_from_frames(
    groupoid: &Arc<Groupoid>,
    frames: &crate::groupoid::Frames,
    fibers: &[usize],
    reps: &[&Vec<Vec<usize>>],
) -> GAction {
    let g = &**groupoid;
    let mut start = vec![0; g.num_objects()];
    let mut anchor = Vec::new();
    for x in g.objects().elements() {
        start[x] = anchor.len();
        anchor.extend(std::iter::repeat_n(x, fibers[frames.component_of(x)]));
    }
    let mut act = PartialTable::new(g.num_arrows(), anchor.len());
    for a in g.arrows().elements() {
        let (x, y) = (g.src(a), g.tgt(a));
        let c = frames.component_of(x);
        let perm = &reps[c][frames.isotropy_part(g, a)];
        for j in 0..fibers[c] {
            act.set(a, start[x] + j, start[y] + perm[j]);
        }
    }
    let anchor = FinMap::new(g.num_objects(), anchor).expect("anchors are objects");
    GAction {
        groupoid: groupoid.clone(),
        anchor,
        act,
    }
}

// ----- the free-action monad and its adjunction -----

/// `x ↦ (unit(f x), x)`, from `X` into the free action on `f`.
pub fn free_unit(groupoid: &Groupoid, f: &FinMap) -> Result<FinMap> {
    let pb = free_carrier(groupoid, f)?;
    Ok(FinMap::from_fn(f.dom(), pb.apex(), |x| {
        pb.index_of(groupoid.unit(f.apply(x)), x).expect("unit pair")
    }))
}

/// `(g1, (g2, x)) ↦ (g1 g2, x)`, from the free action on the anchor of
/// the free action on `f` down to the free action on `f`.
pub fn free_multiplication(groupoid: &Groupoid, f: &FinMap) -> Result<FinMap> {
    let inner = free_carrier(groupoid, f)?;
    let inner_anchor = FinMap::from_fn(inner.apex(), groupoid.objects(), |i| groupoid.tgt(inner.pair(i).0));
    let outer = free_carrier(groupoid, &inner_anchor)?;
    Ok(FinMap::from_fn(outer.apex(), inner.apex(), |i| {
        let (g1, j) = outer.pair(i);
        let (g2, x) = inner.pair(j);
        inner.index_of(groupoid.mul(g1, g2), x).expect("composite pair")
    }))
}

/// The free functor on a map `h: X -> X'` over `G0`: `(g, x) ↦ (g, h x)`.
pub fn free_on_map(groupoid: &Groupoid, f: &FinMap, f2: &FinMap, h: &FinMap) -> Result<FinMap> {
    if f2.compose(h)? != *f {
        return Err(Error::shape("map does not commute with the anchors"));
    }
    let (a, b) = (free_carrier(groupoid, f)?, free_carrier(groupoid, f2)?);
    Ok(FinMap::from_fn(a.apex(), b.apex(), |i| {
        let (g, x) = a.pair(i);
        b.index_of(g, h.apply(x)).expect("same source")
    }))
}

/// The transpose of `phi: X -> A` over `G0`: `(g, x) ↦ g · phi(x)`.
pub fn free_transpose(target: &GAction, f: &FinMap, phi: &FinMap) -> Result<EquivariantMap> {
    if phi.dom() != f.dom() || phi.cod() != target.carrier() {
        return Err(Error::shape("transpose needs a map from X into the action's carrier"));
    }
    if target.anchor_map().compose(phi)? != *f {
        return Err(Error::shape("map does not lie over the objects"));
    }
    let groupoid = target.groupoid_arc().clone();
    let pb = free_carrier(&groupoid, f)?;
    let map = FinMap::from_fn(pb.apex(), target.carrier(), |i| {
        let (g, x) = pb.pair(i);
        target.act(g, phi.apply(x))
    });
    EquivariantMap::from_raw(GAction::free(groupoid, f)?, target.clone(), map)
}

/// Inverse of [`free_transpose`]: restrict along the unit.
pub fn free_untranspose(psi: &EquivariantMap, f: &FinMap) -> Result<FinMap> {
    let eta = free_unit(psi.dom().groupoid(), f)?;
    psi.map().compose(&eta)
}

// ----- Frobenius comparisons -----

/// A canonical comparison map between two finite sets, if well defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub source_size: usize,
    pub target_size: usize,
    /// `None` when the candidate formula is not constant on classes.
    pub map: Option<FinMap>,
}

impl Comparison {
    pub fn is_bijection(&self) -> bool {
        self.map.as_ref().is_some_and(FinMap::is_bijective)
    }
}

/// Orbits of `W × X` (with `X` acted on trivially) against
/// `orbits(W) × X`, by `[w, (x, u)] ↦ ([w], x)`.
pub fn frobenius_check(w: &GAction, set: FinSet) -> Comparison {
    let trivial = GAction::trivial(w.groupoid.clone(), set);
    let product = GAction::product(w, &trivial).expect("same groupoid");
    let pb = finset::pullback(w.anchor_map(), trivial.anchor_map()).expect("both over G0");
    let lhs = product.orbits();
    let w_orbits = w.orbits();
    let n0 = w.groupoid.num_objects();
    let candidate = FinMap::from_fn(pb.apex(), w_orbits.num_classes() * set.size(), |i| {
        let (x, t) = pb.pair(i);
        w_orbits.class_of(x) * set.size() + t / n0
    });
    Comparison {
        source_size: lhs.num_classes(),
        target_size: w_orbits.num_classes() * set.size(),
        map: lhs.factor(&candidate),
    }
}

/// For `g: W -> X` into a trivial action and `f: Y -> X`, the comparison
/// from orbits of `W ×_X Y` to `orbits(W) ×_X Y`, by `[w, y] ↦ ([w], y)`.
///
/// `g` is given as a map into the trivial action on `X`, whose elements
/// are pairs `(x, u)` numbered `x * |G0| + u`.
pub fn stable_frobenius_check(w: &GAction, g: &EquivariantMap, f: &FinMap) -> Result<Comparison> {
    let groupoid = w.groupoid.clone();
    let n0 = groupoid.num_objects();
    if g.dom() != w {
        return Err(Error::shape("comparison map must start at W"));
    }
    let set_x = f.cod();
    let trivial_x = GAction::trivial(groupoid.clone(), set_x);
    if *g.cod() != trivial_x {
        return Err(Error::shape("comparison map must land in the trivial action on X"));
    }
    let trivial_y = GAction::trivial(groupoid.clone(), f.dom());
    let lifted = EquivariantMap::from_raw(
        trivial_y.clone(),
        trivial_x,
        FinMap::from_fn(trivial_y.carrier(), g.cod().carrier(), |i| f.apply(i / n0) * n0 + i % n0),
    )?;
    let fibered = GAction::pullback(g, &lifted)?;
    let pb = finset::pullback(g.map(), lifted.map())?;
    let lhs = fibered.orbits();
    let w_orbits = w.orbits();
    // orbits(W) -> X, through the projection of the trivial action
    let to_x = w_orbits
        .factor(&FinMap::from_fn(w.carrier(), set_x, |x| g.apply(x) / n0))
        .ok_or_else(|| Error::Construction("orbit map into X is not well defined".into()))?;
    let rhs = finset::pullback(&to_x, f)?;
    let candidate = FinMap::from_fn(pb.apex(), rhs.apex(), |i| {
        let (x, t) = pb.pair(i);
        rhs.index_of(w_orbits.class_of(x), t / n0).expect("pair over X")
    });
    Ok(Comparison {
        source_size: lhs.num_classes(),
        target_size: rhs.len(),
        map: lhs.factor(&candidate),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(g: Groupoid) -> Arc<Groupoid> {
        Arc::new(g)
    }

    fn z2() -> Arc<Groupoid> {
        arc(Groupoid::from_group(&GroupTable::cyclic(2)))
    }

    // Union-find free orbit count: repeated relaxation of labels.
    fn orbit_count_oracle(a: &GAction) -> usize {
        let mut label: Vec<usize> = (0..a.len()).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for (_, x, y) in a.act_table().triples() {
                let m = label[x].min(label[y]);
                if label[x] != m || label[y] != m {
                    label[x] = m;
                    label[y] = m;
                    changed = true;
                }
            }
        }
        let mut l = label;
        l.sort_unstable();
        l.dedup();
        l.len()
    }

    // Exhaustive count of carrier maps that preserve anchors and actions.
    fn brute_hom_count(a: &GAction, b: &GAction) -> usize {
        let (n, m) = (a.len(), b.len());
        let mut count = 0;
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let f: Vec<usize> = (0..n)
                .map(|_| {
                    let v = c % m;
                    c /= m;
                    v
                })
                .collect();
            let ok = (0..n).all(|x| a.anchor(x) == b.anchor(f[x]))
                && a.act_table().triples().all(|(g, x, y)| b.try_act(g, f[x]) == Some(f[y]));
            if ok {
                count += 1;
            }
        }
        if n == 0 {
            1
        } else {
            count
        }
    }

    #[test]
    fn trivial_and_free_actions_validate() {
        let g = arc(Groupoid::pair(2));
        let t = GAction::trivial(g.clone(), 3);
        assert!(t.validate().is_empty());
        assert_eq!(t.len(), 6);
        assert!(GAction::trivial(g.clone(), 0).validate().is_empty());
        let terminal = GAction::terminal(g.clone());
        assert_eq!(terminal.len(), 2);
        let free = GAction::arrows_acting(g.clone());
        assert!(free.validate().is_empty());
        assert_eq!(free.len(), g.num_arrows());
        for a in g.arrows().elements() {
            assert_eq!(free.anchor(a), g.tgt(a));
        }
        // pair(2), X = 1 anchored at 0: arrows with source 0
        let at0 = GAction::free(g.clone(), &FinMap::new(2, vec![0]).unwrap()).unwrap();
        assert_eq!(at0.len(), g.arrows().elements().filter(|&a| g.src(a) == 0).count());
        assert_eq!(at0.len(), 2);
        let triv = arc(Groupoid::trivial(3));
        let f = FinMap::new(3, vec![2, 0, 2, 1]).unwrap();
        assert_eq!(GAction::free(triv, &f).unwrap().len(), 4);
    }

    #[test]
    fn corrupted_action_names_the_law() {
        let g = z2();
        let free = GAction::arrows_acting(g.clone());
        let mut act = free.act_table().clone();
        act.set(1, 0, 0);
        let broken = GAction::from_raw(g, free.anchor_map().clone(), act).unwrap();
        let report = broken.validate();
        assert!(report.contains(Law::ActionAssociativity), "{report}");
    }

    #[test]
    fn orbit_examples() {
        let g = arc(Groupoid::pair(3));
        let free = GAction::arrows_acting(g.clone());
        assert_eq!(free.orbits().num_classes(), 3);
        // trivial action: |X| times the number of components
        let u = arc(Groupoid::disjoint_union(&Groupoid::pair(2), &Groupoid::trivial(1)));
        let t = GAction::trivial(u.clone(), 3);
        assert_eq!(orbit_count_oracle(&t), 6);
        assert_eq!(t.orbits().num_classes(), 6);
        // Z/2 swapping two points
        let swap = GAction::new(
            z2(),
            FinMap::new(1, vec![0, 0]).unwrap(),
            PartialTable::from_triples(2, 2, [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(orbit_count_oracle(&swap), 1);
        assert_eq!(swap.orbits().num_classes(), 1);
    }

    #[test]
    fn action_groupoids() {
        let x = GAction::trivial(arc(Groupoid::trivial(1)), 4);
        assert_eq!(x.action_groupoid(), Groupoid::trivial(4));
        let free = GAction::arrows_acting(arc(Groupoid::pair(2)));
        assert_eq!(free.action_groupoid().num_objects(), 4);
        let swap = GAction::cosets(z2(), 0, &[]).unwrap();
        assert_eq!(swap.len(), 2);
        let ag = swap.action_groupoid();
        assert!(ag.validate().is_empty());
        assert!(ag.is_isomorphic(&Groupoid::pair(2)));
    }

    #[test]
    fn products_and_pullbacks() {
        let g = arc(Groupoid::pair(2));
        let free = GAction::arrows_acting(g.clone());
        let terminal = GAction::terminal(g.clone());
        let p = GAction::product(&free, &terminal).unwrap();
        assert!(find_equivariant_isomorphism(&p, &free).unwrap().is_some());
        let pp = GAction::product(&free, &free).unwrap();
        let brute = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).filter(|&(a, b)| g.tgt(a) == g.tgt(b)).count();
        assert_eq!(pp.len(), brute);
        assert!(pp.validate().is_empty());
        let id = EquivariantMap::identity(&free);
        let diag = GAction::pullback(&id, &id).unwrap();
        assert!(find_equivariant_isomorphism(&diag, &free).unwrap().is_some());
    }

    #[test]
    fn hom_enumeration_examples() {
        let g = z2();
        let free = GAction::arrows_acting(g.clone());
        let terminal = GAction::terminal(g.clone());
        assert_eq!(count_equivariant_maps(&free, &terminal).unwrap(), 1);
        assert_eq!(brute_hom_count(&terminal, &free), 0);
        assert_eq!(count_equivariant_maps(&terminal, &free).unwrap(), 0);
        assert_eq!(brute_hom_count(&free, &free), 2);
        let maps = equivariant_maps(&free, &free).unwrap();
        assert_eq!(maps.len(), 2);
        for m in &maps {
            assert!(m.validate().is_empty());
        }
    }

    #[test]
    fn hom_counts_match_brute_force_on_enumerated_actions() {
        let groupoids = [
            arc(Groupoid::pair(2)),
            z2(),
            arc(Groupoid::disjoint_union(&Groupoid::trivial(1), &Groupoid::from_group(&GroupTable::cyclic(3)))),
        ];
        for g in &groupoids {
            let acts: Vec<GAction> = (0..=3).flat_map(|n| enumerate_actions(g, n)).collect();
            for a in &acts {
                assert!(a.validate().is_empty(), "{a:?}");
            }
            for a in acts.iter().take(12) {
                for b in acts.iter().take(12) {
                    assert_eq!(count_equivariant_maps(a, b).unwrap(), brute_hom_count(a, b) as u128);
                }
            }
        }
    }

    #[test]
    fn enumerated_actions_cover_all_iso_classes() {
        // Z/2 on 2 points: trivial or swap, both present
        let acts = enumerate_actions(&z2(), 2);
        let swaps = acts.iter().filter(|a| a.orbits().num_classes() == 1).count();
        assert!(swaps >= 1);
        assert!(acts.iter().any(|a| a.orbits().num_classes() == 2));
    }

    #[test]
    fn frobenius_examples() {
        let g = arc(Groupoid::pair(2));
        let w = GAction::arrows_acting(g.clone());
        let c = frobenius_check(&w, FinSet::new(2));
        assert!(c.is_bijection());
        assert_eq!((c.source_size, c.target_size), (4, 4));
        assert!(frobenius_check(&w, FinSet::ONE).is_bijection());
        assert!(frobenius_check(&w, FinSet::EMPTY).is_bijection());

        let x = FinSet::new(2);
        let tx = GAction::trivial(g.clone(), x);
        let maps = equivariant_maps(&w, &tx).unwrap();
        assert!(!maps.is_empty());
        for m in &maps {
            let f = FinMap::new(2, vec![1, 0, 1]).unwrap();
            assert!(stable_frobenius_check(&w, m, &f).unwrap().is_bijection());
            assert!(stable_frobenius_check(&w, m, &FinMap::new(2, vec![1, 0]).unwrap()).unwrap().is_bijection());
        }
    }

    #[test]
    fn monad_laws() {
        let g = Groupoid::pair(2);
        let f = FinMap::new(2, vec![0, 1, 1]).unwrap();
        let tf = GAction::free(Arc::new(g.clone()), &f).unwrap();
        let mu = free_multiplication(&g, &f).unwrap();
        let eta_t = free_unit(&g, tf.anchor_map()).unwrap();
        assert_eq!(mu.compose(&eta_t).unwrap(), FinMap::identity(tf.carrier()));
        let eta = free_unit(&g, &f).unwrap();
        let t_eta = free_on_map(&g, &f, tf.anchor_map(), &eta).unwrap();
        assert_eq!(mu.compose(&t_eta).unwrap(), FinMap::identity(tf.carrier()));
    }
}
