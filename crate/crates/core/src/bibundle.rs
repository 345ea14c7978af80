//! Bibundles: a carrier acted on by `H` on the left and `G` on the right,
//! with `G` acting freely and transitively along the fibers of the left
//! anchor, which is surjective. A bibundle `H -> G` is a generalized map
//! of groupoids.

use std::sync::Arc;

use crate::action::{self, GAction, HomSpace};
use crate::biaction::BiAction;
use crate::error::{Error, Result};
use crate::finset::{self, FinMap, FinSet, Pullback, Quotient};
use crate::functor::InternalFunctor;
use crate::groupoid::Groupoid;
use crate::report::{Law, ValidationReport};
use crate::table::PartialTable;

/// A validated bibundle together with its division table: for `x'`, `x`
/// in one left-anchor fiber, the unique right arrow `g` with `g · x = x'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bibundle {
    sides: BiAction,
    division: Vec<Option<usize>>,
}

/// The two-sided action conditions plus principality of the right action
/// along the left anchor and surjectivity of the left anchor.
pub fn validate_bibundle(sides: &BiAction) -> ValidationReport {
    let mut r = sides.validate();
    if !r.is_empty() {
        return r;
    }
    let (p, right) = (sides.left().anchor_map(), sides.right());
    let n = sides.len();
    let mut hits = vec![0usize; n * n];
    for (_, x, gx) in right.act_table().triples() {
        hits[gx * n + x] += 1;
    }
    for x in 0..n {
        for y in p.fiber(p.apply(x)) {
            let count = hits[y * n + x];
            r.check(count == 1, Law::Principality, || {
                format!("pair ({y}, {x}) is reached by {count} right arrows instead of one")
            });
        }
    }
    let mut covered = vec![false; p.cod().size()];
    p.table().iter().for_each(|&o| covered[o] = true);
    if let Some(o) = covered.iter().position(|&c| !c) {
        r.push(Law::Descent, format!("left anchor misses object {o}"));
    }
    r
}

impl Bibundle {
    pub fn new(sides: BiAction) -> Result<Self> {
        let report = validate_bibundle(&sides);
        if !report.is_empty() {
            return Err(Error::Invalid {
                kind: "bibundle",
                report,
            });
        }
        let n = sides.len();
        let mut division = vec![None; n * n];
        for (g, x, gx) in sides.right().act_table().triples() {
            division[gx * n + x] = Some(g);
        }
        Ok(Bibundle { sides, division })
    }

    pub fn sides(&self) -> &BiAction {
        &self.sides
    }

    pub fn into_sides(self) -> BiAction {
        self.sides
    }

    pub fn left(&self) -> &GAction {
        self.sides.left()
    }

    pub fn right(&self) -> &GAction {
        self.sides.right()
    }

    pub fn left_groupoid(&self) -> &Arc<Groupoid> {
        self.sides.left_groupoid()
    }

    pub fn right_groupoid(&self) -> &Arc<Groupoid> {
        self.sides.right_groupoid()
    }

    pub fn carrier(&self) -> FinSet {
        self.sides.carrier()
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    /// The right arrow carrying `from` to `to`, if they share a left anchor.
    pub fn divide(&self, to: usize, from: usize) -> Option<usize> {
        self.division[to * self.len() + from]
    }

    /// `G1` with post-composition on the left and pre-composition with
    /// inverses on the right.
    pub fn identity(g: Arc<Groupoid>) -> Bibundle {
        let left = GAction::arrows_acting(g.clone());
        let n = g.num_arrows();
        let mut act = PartialTable::new(n, n);
        for a in g.arrows().elements() {
            for b in g.arrows().elements().filter(|&b| g.src(b) == g.src(a)) {
                act.set(b, a, g.mul(a, g.inv(b)));
            }
        }
        let right = GAction::from_raw(g.clone(), g.src_map().clone(), act).expect("identity shapes");
        Bibundle::new(BiAction::from_raw(left, right).expect("same carrier")).expect("identity bibundle is valid")
    }

    /// Pairs `(x, g)` with `tgt g = F x`, anchored at `x` and `src g`.
    pub fn from_functor(f: &InternalFunctor) -> Result<Bibundle> {
        let report = f.validate();
        if !report.is_empty() {
            return Err(Error::Invalid { kind: "functor", report });
        }
        let sides = f.half_induce(&GAction::terminal(f.dom().clone()))?;
        Bibundle::new(sides)
    }

    /// The bundle of the functor from the discrete groupoid on `I`
    /// picking `points`: pairs `(i, g)` with `tgt g = points(i)`.
    pub fn point_bundle(g: Arc<Groupoid>, points: &FinMap) -> Result<Bibundle> {
        Bibundle::from_functor(&InternalFunctor::point(g, points)?)
    }

    /// Sides exchanged; valid exactly when this bibundle is invertible.
    pub fn opposite(&self) -> Result<Bibundle> {
        Bibundle::new(self.sides.swapped())
    }

    /// `self` followed by `next`: pairs over the middle groupoid's objects
    /// modulo its diagonal action.
    pub fn compose(&self, next: &Bibundle) -> Result<Bibundle> {
        Bibundle::new(compose_sides(&self.sides, &next.sides)?)
    }

    pub fn apply(&self, y: &GAction) -> Result<GAction> {
        Ok(tensor_apply(&self.sides, y)?.action)
    }

    pub fn tensor(&self, y: &GAction) -> Result<Tensor> {
        tensor_apply(&self.sides, y)
    }

    pub fn coapply(&self, x: &GAction) -> Result<GAction> {
        Ok(self.cotensor(x)?.action)
    }

    pub fn cotensor(&self, x: &GAction) -> Result<Tensor> {
        tensor_apply(&self.sides.swapped(), x)
    }

    /// Transpose of `map: apply(Y) -> X` to `Y -> coapply(X)`:
    /// `y ↦ [p, map[p, y]]` for any `p` over the anchor of `y`.
    pub fn transpose_to_coapply(&self, y: &GAction, x: &GAction, map: &FinMap) -> Result<FinMap> {
        let applied = self.tensor(y)?;
        let coapplied = self.cotensor(x)?;
        if map.dom() != applied.action.carrier() || map.cod() != x.carrier() {
            return Err(Error::shape("map must run from the applied action to X"));
        }
        let p = self.left().anchor_map();
        let mut table = Vec::with_capacity(y.len());
        for el in y.carrier().elements() {
            let point = p.fiber(y.anchor(el)).next().expect("left anchor is surjective");
            let image = map.apply(applied.class_of(point, el));
            let class = coapplied
                .pairs
                .index_of(point, image)
                .map(|i| coapplied.classes.class_of(i))
                .ok_or_else(|| Error::shape("map does not preserve anchors"))?;
            table.push(class);
        }
        FinMap::new(coapplied.action.carrier(), table)
    }

    /// Transpose of `map: Y -> coapply(X)` to `apply(Y) -> X`:
    /// `[p, y] ↦` the unique `a` with `(p, a)` in the class `map(y)`.
    pub fn transpose_to_apply(&self, y: &GAction, x: &GAction, map: &FinMap) -> Result<FinMap> {
        let applied = self.tensor(y)?;
        let coapplied = self.cotensor(x)?;
        if map.dom() != y.carrier() || map.cod() != coapplied.action.carrier() {
            return Err(Error::shape("map must run from Y to the coapplied action"));
        }
        let reps = coapplied.classes.representatives();
        let mut table = Vec::with_capacity(applied.action.len());
        for &r in &applied.classes.representatives() {
            let (point, el) = applied.pairs.pair(r);
            let (base, a) = coapplied.pairs.pair(reps[map.apply(el)]);
            let image = self
                .divide(point, base)
                .and_then(|g| x.try_act(g, a))
                .ok_or_else(|| Error::shape("map does not preserve anchors"))?;
            table.push(image);
        }
        FinMap::new(x.carrier(), table)
    }

    /// For `P1: K -> H` and `P2: K -> G`, pairs over `K0` with `K` acting
    /// diagonally and `H × G` acting componentwise.
    pub fn pair(first: &Bibundle, second: &Bibundle) -> Result<Bibundle> {
        if !action::same_groupoid(first.left_groupoid(), second.left_groupoid()) {
            return Err(Error::shape("paired bibundles must share their left groupoid"));
        }
        let (k, h, g) = (first.left_groupoid(), first.right_groupoid(), second.right_groupoid());
        let product = Arc::new(Groupoid::product(h, g));
        let pb = finset::pullback(first.left().anchor_map(), second.left().anchor_map())?;
        let n = pb.len();
        let left_anchor = FinMap::from_fn(n, k.objects(), |i| first.left().anchor(pb.pair(i).0));
        let right_anchor = FinMap::from_fn(n, product.objects(), |i| {
            let (a, b) = pb.pair(i);
            first.right().anchor(a) * g.num_objects() + second.right().anchor(b)
        });
        let mut left_act = PartialTable::new(k.num_arrows(), n);
        let mut right_act = PartialTable::new(product.num_arrows(), n);
        for (i, (a, b)) in pb.pairs().enumerate() {
            for arrow in first.left().arrows_at(a) {
                let j = pb.index_of(first.left().act(arrow, a), second.left().act(arrow, b));
                left_act.set(arrow, i, j.expect("diagonal action stays in the pullback"));
            }
            for ha in first.right().arrows_at(a) {
                for ga in second.right().arrows_at(b) {
                    let j = pb.index_of(first.right().act(ha, a), second.right().act(ga, b));
                    right_act.set(ha * g.num_arrows() + ga, i, j.expect("right actions keep left anchors"));
                }
            }
        }
        let left = GAction::from_raw(k.clone(), left_anchor, left_act)?;
        let right = GAction::from_raw(product, right_anchor, right_act)?;
        Bibundle::new(BiAction::from_raw(left, right)?)
    }
}

/// The result of applying a two-sided action to an action of its left
/// groupoid: pairs `(p, y)` over the left objects, their classes under the
/// diagonal left action, and the right action on those classes.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub pairs: Pullback,
    pub classes: Quotient,
    pub action: GAction,
}

impl Tensor {
    pub fn class_of(&self, point: usize, el: usize) -> usize {
        self.classes
            .class_of(self.pairs.index_of(point, el).expect("pair over a common left object"))
    }

    /// `[p, y] ↦ [p, map y]`, from `self` to `target`.
    pub fn map_along(&self, target: &Tensor, map: &FinMap) -> Result<FinMap> {
        let mut table = Vec::with_capacity(self.classes.num_classes());
        for r in self.classes.representatives() {
            let (point, el) = self.pairs.pair(r);
            let i = target
                .pairs
                .index_of(point, map.apply(el))
                .ok_or_else(|| Error::shape("map does not preserve anchors"))?;
            table.push(target.classes.class_of(i));
        }
        FinMap::new(target.classes.num_classes(), table)
    }
}

/// Pairs `(p, y)` with equal left anchors modulo `h · (p, y) = (h p, h y)`,
/// acted on by the right groupoid through `p`.
pub fn tensor_apply(sides: &BiAction, y: &GAction) -> Result<Tensor> {
    let (left, right) = (sides.left(), sides.right());
    if !action::same_groupoid(left.groupoid_arc(), y.groupoid_arc()) {
        return Err(Error::shape("action is not over the left groupoid"));
    }
    let pairs = finset::pullback(left.anchor_map(), y.anchor_map())?;
    let classes = diagonal_classes(&pairs, left, y);
    let action = action::induced_on_quotient(
        sides.right_groupoid(),
        &classes,
        |i| right.anchor(pairs.pair(i).0),
        |g, i| {
            let (point, el) = pairs.pair(i);
            right.try_act(g, point).and_then(|gp| pairs.index_of(gp, el))
        },
    );
    Ok(Tensor { pairs, classes, action })
}

/// The composite two-sided action: pairs `(a, b)` with `q a = p b` modulo
/// the middle groupoid acting on both.
pub fn compose_sides(first: &BiAction, second: &BiAction) -> Result<BiAction> {
    if !action::same_groupoid(first.right_groupoid(), second.left_groupoid()) {
        return Err(Error::shape("middle groupoids differ"));
    }
    let (fl, fr, sl, sr) = (first.left(), first.right(), second.left(), second.right());
    let pairs = finset::pullback(fr.anchor_map(), sl.anchor_map())?;
    let classes = diagonal_classes(&pairs, fr, sl);
    let left = action::induced_on_quotient(
        first.left_groupoid(),
        &classes,
        |i| fl.anchor(pairs.pair(i).0),
        |h, i| {
            let (a, b) = pairs.pair(i);
            fl.try_act(h, a).and_then(|ha| pairs.index_of(ha, b))
        },
    );
    let right = action::induced_on_quotient(
        second.right_groupoid(),
        &classes,
        |i| sr.anchor(pairs.pair(i).1),
        |k, i| {
            let (a, b) = pairs.pair(i);
            sr.try_act(k, b).and_then(|kb| pairs.index_of(a, kb))
        },
    );
    BiAction::from_raw(left, right)
}

fn diagonal_classes(pairs: &Pullback, first: &GAction, second: &GAction) -> Quotient {
    let mut moves = Vec::new();
    for (i, (a, b)) in pairs.pairs().enumerate() {
        for g in first.arrows_at(a) {
            let j = pairs
                .index_of(first.act(g, a), second.act(g, b))
                .expect("diagonal action stays in the pullback");
            moves.push((i, j));
        }
    }
    Quotient::from_pairs(pairs.apex(), moves)
}

/// A map of carriers equivariant for both sides; always a bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BibundleMorphism {
    dom: Bibundle,
    cod: Bibundle,
    map: FinMap,
}

impl BibundleMorphism {
    pub fn new(dom: Bibundle, cod: Bibundle, map: FinMap) -> Result<Self> {
        if map.dom() != dom.carrier() || map.cod() != cod.carrier() {
            return Err(Error::shape("map does not run between the carriers"));
        }
        let m = BibundleMorphism { dom, cod, map };
        let report = m.validate();
        if report.is_empty() {
            Ok(m)
        } else {
            Err(Error::Invalid {
                kind: "bibundle morphism",
                report,
            })
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        for (scope, d, c) in [
            ("left", self.dom.left(), self.cod.left()),
            ("right", self.dom.right(), self.cod.right()),
        ] {
            match action::EquivariantMap::from_raw(d.clone(), c.clone(), self.map.clone()) {
                Ok(m) => r.merge_scoped(scope, m.validate()),
                Err(e) => r.push(Law::Equivariance, format!("{scope}: {e}")),
            }
        }
        r
    }

    pub fn identity(b: &Bibundle) -> Self {
        BibundleMorphism {
            dom: b.clone(),
            cod: b.clone(),
            map: FinMap::identity(b.carrier()),
        }
    }

    pub fn dom(&self) -> &Bibundle {
        &self.dom
    }

    pub fn cod(&self) -> &Bibundle {
        &self.cod
    }

    pub fn map(&self) -> &FinMap {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map.apply(x)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &BibundleMorphism) -> Result<Self> {
        if first.cod != self.dom {
            return Err(Error::shape("morphisms do not compose"));
        }
        Ok(BibundleMorphism {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            map: self.map.compose(&first.map)?,
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.map.is_bijective()
    }
}

fn morphism_space(dom: &Bibundle, cod: &Bibundle) -> Result<HomSpace> {
    HomSpace::new(&[dom.left(), dom.right()], &[cod.left(), cod.right()])
}

/// The first morphism `dom -> cod` in the search order, if any.
pub fn find_morphism(dom: &Bibundle, cod: &Bibundle) -> Result<Option<BibundleMorphism>> {
    let found = morphism_space(dom, cod)?.first().map(|map| BibundleMorphism {
        dom: dom.clone(),
        cod: cod.clone(),
        map,
    });
    if let Some(m) = &found {
        assert!(m.is_bijective(), "a morphism of bibundles failed to be a bijection");
    }
    Ok(found)
}

pub fn enumerate_morphisms(dom: &Bibundle, cod: &Bibundle) -> Result<Vec<BibundleMorphism>> {
    Ok(morphism_space(dom, cod)?
        .maps()
        .into_iter()
        .map(|map| BibundleMorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            map,
        })
        .collect())
}

pub fn are_isomorphic(a: &Bibundle, b: &Bibundle) -> Result<bool> {
    Ok(a.len() == b.len() && find_morphism(a, b)?.is_some())
}

/// For an arrow family `y: I -> G1`, the map between the point bundles
/// of `src ∘ y` and `tgt ∘ y` sending `(i, g)` to `(i, y(i) g)`.
pub fn point_morphism(g: &Arc<Groupoid>, family: &FinMap) -> Result<BibundleMorphism> {
    if family.cod() != g.arrows() {
        return Err(Error::shape("family must pick arrows of the groupoid"));
    }
    let from = g.src_map().compose(family)?;
    let to = g.tgt_map().compose(family)?;
    let dom = Bibundle::point_bundle(g.clone(), &from)?;
    let cod = Bibundle::point_bundle(g.clone(), &to)?;
    let dom_pairs = finset::pullback(&from, g.tgt_map())?;
    let cod_pairs = finset::pullback(&to, g.tgt_map())?;
    let map = FinMap::from_fn(dom_pairs.apex(), cod_pairs.apex(), |k| {
        let (i, a) = dom_pairs.pair(k);
        cod_pairs
            .index_of(i, g.mul(family.apply(i), a))
            .expect("image ends at the new point")
    });
    BibundleMorphism::new(dom, cod, map)
}

/// The groupoid of `I`-indexed points: the product of `I` copies of `g`
/// (after a one-object factor), with the first index most significant.
pub fn points_groupoid(g: &Groupoid, stage: usize) -> Groupoid {
    (0..stage).fold(Groupoid::trivial(1), |acc, _| Groupoid::product(&acc, g))
}

/// The objects of `g` named by an object of the points groupoid.
pub fn point_objects(g: &Groupoid, stage: usize, object: usize) -> FinMap {
    FinMap::new(g.objects(), digits(object, g.num_objects(), stage)).expect("digits are objects")
}

/// The arrows of `g` named by an arrow of the points groupoid.
pub fn point_arrows(g: &Groupoid, stage: usize, arrow: usize) -> FinMap {
    FinMap::new(g.arrows(), digits(arrow, g.num_arrows(), stage)).expect("digits are arrows")
}

fn digits(mut value: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = value % base;
        value /= base;
    }
    out
}
