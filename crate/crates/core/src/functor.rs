//! Internal functors, restriction of actions along them and its left
//! adjoint, and the essential-equivalence predicates.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::action::{EquivariantMap, GAction};
use crate::biaction::BiAction;
use crate::error::{Error, Result};
use crate::finset::{self, FinMap, Pullback, Quotient};
use crate::groupoid::Groupoid;
use crate::report::{Law, ValidationReport};
use crate::table::PartialTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalFunctor {
    dom: Arc<Groupoid>,
    cod: Arc<Groupoid>,
    obj_map: FinMap,
    arr_map: FinMap,
}

impl InternalFunctor {
    pub fn from_raw(dom: Arc<Groupoid>, cod: Arc<Groupoid>, obj_map: FinMap, arr_map: FinMap) -> Result<Self> {
        if obj_map.dom() != dom.objects() || obj_map.cod() != cod.objects() {
            return Err(Error::shape(format!(
                "object map {} -> {} between groupoids with {} and {} objects",
                obj_map.dom().size(),
                obj_map.cod().size(),
                dom.num_objects(),
                cod.num_objects()
            )));
        }
        if arr_map.dom() != dom.arrows() || arr_map.cod() != cod.arrows() {
            return Err(Error::shape(format!(
                "arrow map {} -> {} between groupoids with {} and {} arrows",
                arr_map.dom().size(),
                arr_map.cod().size(),
                dom.num_arrows(),
                cod.num_arrows()
            )));
        }
        Ok(InternalFunctor {
            dom,
            cod,
            obj_map,
            arr_map,
        })
    }

    pub fn new(dom: Arc<Groupoid>, cod: Arc<Groupoid>, obj_map: FinMap, arr_map: FinMap) -> Result<Self> {
        let f = Self::from_raw(dom, cod, obj_map, arr_map)?;
        let report = f.validate();
        if report.is_empty() {
            Ok(f)
        } else {
            Err(Error::Invalid {
                kind: "functor",
                report,
            })
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let (h, g) = (&*self.dom, &*self.cod);
        let mut r = ValidationReport::new();
        for a in h.arrows().elements() {
            let fa = self.arrow(a);
            r.check(
                g.src(fa) == self.object(h.src(a)) && g.tgt(fa) == self.object(h.tgt(a)),
                Law::FunctorEndpoints,
                || format!("arrow {a} maps to {fa} with mismatched endpoints"),
            );
        }
        for x in h.objects().elements() {
            r.check(self.arrow(h.unit(x)) == g.unit(self.object(x)), Law::FunctorUnit, || {
                format!("unit of object {x} is not sent to a unit")
            });
        }
        for (a, b, ab) in h.mul_table().triples() {
            let composite = g.try_mul(self.arrow(a), self.arrow(b));
            r.check(composite == Some(self.arrow(ab)), Law::FunctorComposition, || {
                format!("image of {a} {b} is not the composite of the images")
            });
        }
        r
    }

    pub fn dom(&self) -> &Arc<Groupoid> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Groupoid> {
        &self.cod
    }

    pub fn obj_map(&self) -> &FinMap {
        &self.obj_map
    }

    pub fn arr_map(&self) -> &FinMap {
        &self.arr_map
    }

    #[inline]
    pub fn object(&self, x: usize) -> usize {
        self.obj_map.apply(x)
    }

    #[inline]
    pub fn arrow(&self, a: usize) -> usize {
        self.arr_map.apply(a)
    }

    pub fn identity(g: Arc<Groupoid>) -> Self {
        InternalFunctor {
            obj_map: FinMap::identity(g.objects()),
            arr_map: FinMap::identity(g.arrows()),
            dom: g.clone(),
            cod: g,
        }
    }

    /// The unique functor to the one-object, one-arrow groupoid.
    pub fn to_terminal(g: Arc<Groupoid>) -> Self {
        InternalFunctor {
            obj_map: FinMap::to_one(g.objects()),
            arr_map: FinMap::to_one(g.arrows()),
            dom: g,
            cod: Arc::new(Groupoid::trivial(1)),
        }
    }

    /// The functor from the discrete groupoid on `I` picking the objects
    /// `points(i)`.
    pub fn point(g: Arc<Groupoid>, points: &FinMap) -> Result<Self> {
        if points.cod() != g.objects() {
            return Err(Error::shape("points must be objects of the groupoid"));
        }
        let arr_map = FinMap::from_fn(points.dom(), g.arrows(), |i| g.unit(points.apply(i)));
        Ok(InternalFunctor {
            dom: Arc::new(Groupoid::trivial(points.dom())),
            cod: g,
            obj_map: points.clone(),
            arr_map,
        })
    }

    /// A map of sets as a functor between discrete groupoids.
    pub fn discrete(map: &FinMap) -> Self {
        InternalFunctor {
            dom: Arc::new(Groupoid::trivial(map.dom())),
            cod: Arc::new(Groupoid::trivial(map.cod())),
            obj_map: map.clone(),
            arr_map: map.clone(),
        }
    }

    /// The two projections out of `Groupoid::product(h, g)`.
    pub fn projections(h: &Arc<Groupoid>, g: &Arc<Groupoid>) -> (Arc<Groupoid>, Self, Self) {
        let product = Arc::new(Groupoid::product(h, g));
        let (n0, n1) = (g.num_objects(), g.num_arrows());
        let first = InternalFunctor {
            dom: product.clone(),
            cod: h.clone(),
            obj_map: FinMap::from_fn(product.objects(), h.objects(), |x| x / n0),
            arr_map: FinMap::from_fn(product.arrows(), h.arrows(), |a| a / n1),
        };
        let second = InternalFunctor {
            dom: product.clone(),
            cod: g.clone(),
            obj_map: FinMap::from_fn(product.objects(), g.objects(), |x| x % n0),
            arr_map: FinMap::from_fn(product.arrows(), g.arrows(), |a| a % n1),
        };
        (product, first, second)
    }

    /// The projection from `g.pullback_along(f)` back to `g`.
    pub fn from_pullback(g: Arc<Groupoid>, f: &FinMap) -> Result<Self> {
        let (h, arrows) = g.pullback_along(f)?;
        Ok(InternalFunctor {
            dom: Arc::new(h),
            cod: g,
            obj_map: f.clone(),
            arr_map: arrows,
        })
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &InternalFunctor) -> Result<Self> {
        if !crate::action::same_groupoid(&first.cod, &self.dom) {
            return Err(Error::shape("functors do not compose"));
        }
        Ok(InternalFunctor {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            obj_map: self.obj_map.compose(&first.obj_map)?,
            arr_map: self.arr_map.compose(&first.arr_map)?,
        })
    }

    // ----- predicates -----

    /// `a ↦ (src a, tgt a, F a)` is a bijection onto the triples
    /// `(x, y, g)` with `g: F x -> F y`.
    pub fn is_fully_faithful(&self) -> bool {
        let (h, g) = (&*self.dom, &*self.cod);
        let hom_sizes = hom_size_table(g);
        let n0 = g.num_objects();
        let target: usize = h
            .objects()
            .elements()
            .flat_map(|x| h.objects().elements().map(move |y| (x, y)))
            .map(|(x, y)| hom_sizes[self.object(x) * n0 + self.object(y)])
            .sum();
        if target != h.num_arrows() {
            return false;
        }
        let mut seen = HashSet::with_capacity(h.num_arrows());
        h.arrows()
            .elements()
            .all(|a| seen.insert((h.src(a), h.tgt(a), self.arrow(a))))
    }

    /// Every object of the codomain is reached by an arrow out of the image.
    pub fn is_essentially_surjective(&self) -> bool {
        let g = &*self.cod;
        let pb = finset::pullback(&self.obj_map, g.tgt_map()).expect("both land in G0");
        let reach = FinMap::from_fn(pb.apex(), g.objects(), |i| g.src(pb.pair(i).1));
        reach.is_surjective()
    }

    pub fn is_essential_equivalence(&self) -> bool {
        self.essential_equivalence_failure().is_none()
    }

    pub(crate) fn essential_equivalence_failure(&self) -> Option<&'static str> {
        if !self.is_fully_faithful() {
            Some("functor is not fully faithful")
        } else if !self.is_essentially_surjective() {
            Some("functor is not essentially surjective")
        } else {
            None
        }
    }

    // ----- restriction and its left adjoint -----

    fn check_over(&self, a: &GAction, side: &Arc<Groupoid>) -> Result<()> {
        if crate::action::same_groupoid(a.groupoid_arc(), side) {
            Ok(())
        } else {
            Err(Error::shape("action lives over a different groupoid"))
        }
    }

    /// Pulls an action of the codomain back to the domain: pairs `(x, a)`
    /// with `F x = anchor a`, acted on by `h · (x, a) = (tgt h, F h · a)`.
    pub fn restrict(&self, a: &GAction) -> Result<GAction> {
        self.check_over(a, &self.cod)?;
        let pb = finset::pullback(&self.obj_map, a.anchor_map())?;
        Ok(self.restrict_on(a, &pb))
    }

    fn restrict_on(&self, a: &GAction, pb: &Pullback) -> GAction {
        let h = &*self.dom;
        let anchor = FinMap::from_fn(pb.apex(), h.objects(), |i| pb.pair(i).0);
        let mut act = PartialTable::new(h.num_arrows(), pb.len());
        for (i, (x, el)) in pb.pairs().enumerate() {
            for arrow in h.arrows().elements().filter(|&b| h.src(b) == x) {
                let j = pb
                    .index_of(h.tgt(arrow), a.act(self.arrow(arrow), el))
                    .expect("restricted action stays in the pullback");
                act.set(arrow, i, j);
            }
        }
        GAction::from_raw(self.dom.clone(), anchor, act).expect("restriction shapes")
    }

    /// Pairs `(y, g0)` with `F(anchor y) = tgt g0`, with the domain acting
    /// by `h · (y, g0) = (h · y, F h · g0)` over `anchor y` and the
    /// codomain acting by `g · (y, g0) = (y, g0 · g⁻¹)` over `src g0`.
    pub fn half_induce(&self, y: &GAction) -> Result<BiAction> {
        Ok(self.half_induce_pairs(y)?.0)
    }

    fn half_induce_pairs(&self, y: &GAction) -> Result<(BiAction, Pullback)> {
        self.check_over(y, &self.dom)?;
        let (h, g) = (&*self.dom, &*self.cod);
        let base = self.obj_map.compose(y.anchor_map())?;
        let pb = finset::pullback(&base, g.tgt_map())?;
        let n = pb.len();
        let left_anchor = FinMap::from_fn(n, h.objects(), |i| y.anchor(pb.pair(i).0));
        let right_anchor = FinMap::from_fn(n, g.objects(), |i| g.src(pb.pair(i).1));
        let mut left_act = PartialTable::new(h.num_arrows(), n);
        let mut right_act = PartialTable::new(g.num_arrows(), n);
        for (i, (el, g0)) in pb.pairs().enumerate() {
            for b in y.arrows_at(el) {
                let j = pb.index_of(y.act(b, el), g.mul(self.arrow(b), g0)).expect("left action closes");
                left_act.set(b, i, j);
            }
            for a in g.arrows().elements().filter(|&a| g.src(a) == g.src(g0)) {
                let j = pb.index_of(el, g.mul(g0, g.inv(a))).expect("right action closes");
                right_act.set(a, i, j);
            }
        }
        let left = GAction::from_raw(self.dom.clone(), left_anchor, left_act)?;
        let right = GAction::from_raw(self.cod.clone(), right_anchor, right_act)?;
        Ok((BiAction::from_raw(left, right)?, pb))
    }

    /// The left adjoint of restriction: [`half_induce`](Self::half_induce)
    /// with the domain's action divided out.
    pub fn induce(&self, y: &GAction) -> Result<GAction> {
        Ok(self.induced(y)?.action)
    }

    pub fn induced(&self, y: &GAction) -> Result<Induced> {
        let (half, pairs) = self.half_induce_pairs(y)?;
        let (classes, action) = half.left_orbits();
        Ok(Induced {
            half,
            pairs,
            classes,
            action,
        })
    }

    /// `y ↦ (anchor y, [y, unit])`, from `Y` to the restriction of its
    /// induced action.
    pub fn unit(&self, y: &GAction) -> Result<EquivariantMap> {
        let induced = self.induced(y)?;
        let restricted_pairs = finset::pullback(&self.obj_map, induced.action.anchor_map())?;
        let restricted = self.restrict_on(&induced.action, &restricted_pairs);
        let map = FinMap::from_fn(y.carrier(), restricted.carrier(), |el| {
            let x = y.anchor(el);
            let class = induced.class_of_pair(el, self.cod.unit(self.object(x)));
            restricted_pairs.index_of(x, class).expect("unit lands in the restriction")
        });
        EquivariantMap::from_raw(y.clone(), restricted, map)
    }

    /// `[(x, a), g0] ↦ g0⁻¹ · a`, from the induced action of a
    /// restriction back to the original action.
    pub fn counit(&self, a: &GAction) -> Result<EquivariantMap> {
        let restricted_pairs = finset::pullback(&self.obj_map, a.anchor_map())?;
        let restricted = self.restrict_on(a, &restricted_pairs);
        let induced = self.induced(&restricted)?;
        let g = &*self.cod;
        let reps = induced.classes.representatives();
        let map = FinMap::from_fn(induced.action.carrier(), a.carrier(), |c| {
            let (el, g0) = induced.pairs.pair(reps[c]);
            let (_, point) = restricted_pairs.pair(el);
            a.act(g.inv(g0), point)
        });
        EquivariantMap::from_raw(induced.action, a.clone(), map)
    }

    /// Transpose of `map: induce(Y) -> A` to `Y -> restrict(A)`:
    /// `y ↦ (anchor y, map([y, unit]))`.
    pub fn transpose_to_restriction(&self, y: &GAction, a: &GAction, map: &FinMap) -> Result<FinMap> {
        let induced = self.induced(y)?;
        if map.dom() != induced.action.carrier() || map.cod() != a.carrier() {
            return Err(Error::shape("map must run from the induced action to A"));
        }
        let pairs = finset::pullback(&self.obj_map, a.anchor_map())?;
        let mut table = Vec::with_capacity(y.len());
        for el in y.carrier().elements() {
            let x = y.anchor(el);
            let image = map.apply(induced.class_of_pair(el, self.cod.unit(self.object(x))));
            let idx = pairs
                .index_of(x, image)
                .ok_or_else(|| Error::shape("map does not preserve anchors"))?;
            table.push(idx);
        }
        FinMap::new(pairs.apex(), table)
    }

    /// Transpose of `map: Y -> restrict(A)` to `induce(Y) -> A`:
    /// `[y, g0] ↦ g0⁻¹ · a` where `map(y) = (anchor y, a)`.
    pub fn transpose_to_induced(&self, y: &GAction, a: &GAction, map: &FinMap) -> Result<FinMap> {
        let induced = self.induced(y)?;
        let pairs = finset::pullback(&self.obj_map, a.anchor_map())?;
        if map.dom() != y.carrier() || map.cod() != pairs.apex() {
            return Err(Error::shape("map must run from Y to the restriction of A"));
        }
        let g = &*self.cod;
        let reps = induced.classes.representatives();
        let mut table = Vec::with_capacity(reps.len());
        for &r in &reps {
            let (el, g0) = induced.pairs.pair(r);
            let (_, point) = pairs.pair(map.apply(el));
            let image = a
                .try_act(g.inv(g0), point)
                .ok_or_else(|| Error::shape("map does not preserve anchors"))?;
            table.push(image);
        }
        FinMap::new(a.carrier(), table)
    }
}

/// An induced action together with the data it was computed from.
#[derive(Clone, Debug)]
pub struct Induced {
    pub half: BiAction,
    /// Elements of `half` as pairs `(y, g0)`.
    pub pairs: Pullback,
    /// Orbits of the domain's action on `half`.
    pub classes: Quotient,
    pub action: GAction,
}

impl Induced {
    pub fn class_of_pair(&self, y: usize, g0: usize) -> usize {
        self.classes
            .class_of(self.pairs.index_of(y, g0).expect("pair in the half-induced carrier"))
    }
}

fn hom_size_table(g: &Groupoid) -> Vec<usize> {
    let n0 = g.num_objects();
    let mut sizes = vec![0; n0 * n0];
    for a in g.arrows().elements() {
        sizes[g.src(a) * n0 + g.tgt(a)] += 1;
    }
    sizes
}

/// Calls `visit` on every functor `h -> g`, ordered by object map (as a
/// number in base `|G0|`, first object most significant), then by the
/// isotropy homomorphisms and tree images of each component.
pub fn for_each_functor(
    h: &Arc<Groupoid>,
    g: &Arc<Groupoid>,
    mut visit: impl FnMut(InternalFunctor) -> ControlFlow<()>,
) {
    let frames = h.frames();
    let n = h.num_objects();
    let m = g.num_objects();
    if n > 0 && m == 0 {
        return;
    }
    let hom_sizes = hom_size_table(g);
    let mut obj = vec![0; n];
    loop {
        let reachable = h.arrows().elements().all(|a| hom_sizes[obj[h.src(a)] * m + obj[h.tgt(a)]] > 0);
        if reachable && functors_over(h, g, &frames, &obj, &mut visit).is_break() {
            return;
        }
        // next object map
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            obj[k] += 1;
            if obj[k] < m {
                break;
            }
            obj[k] = 0;
        }
    }
}

fn functors_over(
    h: &Arc<Groupoid>,
    g: &Arc<Groupoid>,
    frames: &crate::groupoid::Frames,
    obj: &[usize],
    visit: &mut impl FnMut(InternalFunctor) -> ControlFlow<()>,
) -> ControlFlow<()> {
    // choices per component: homomorphisms, then for each non-base member
    // an arrow from the image of the base to its image
    let mut axes: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut layout = Vec::new();
    for c in 0..frames.len() {
        let b = frames.bases[c];
        let (target, loops) = g.isotropy_group(obj[b]).expect("object of g");
        let homs: Vec<Vec<usize>> = frames.groups[c]
            .homomorphisms(&target)
            .into_iter()
            .map(|hm| hm.into_iter().map(|k| loops[k]).collect())
            .collect();
        layout.push((c, None));
        axes.push(homs);
        for &x in frames.members[c].iter().filter(|&&x| x != b) {
            layout.push((c, Some(x)));
            axes.push(g.hom(obj[b], obj[x]).into_iter().map(|a| vec![a]).collect());
        }
    }
    if axes.iter().any(Vec::is_empty) {
        return ControlFlow::Continue(());
    }
    let obj_map = FinMap::new(g.num_objects(), obj.to_vec()).expect("objects of g");
    let mut choice = vec![0; axes.len()];
    loop {
        let mut tree_images: Vec<usize> = (0..h.num_objects()).map(|x| g.unit(obj[x])).collect();
        let mut homs = vec![Vec::new(); frames.len()];
        for (axis, &(c, member)) in layout.iter().enumerate() {
            let picked = &axes[axis][choice[axis]];
            match member {
                None => homs[c] = picked.clone(),
                Some(x) => tree_images[x] = picked[0],
            }
        }
        let arrows = frames.arrow_map(h, g, &tree_images, &homs);
        let f = InternalFunctor {
            dom: h.clone(),
            cod: g.clone(),
            obj_map: obj_map.clone(),
            arr_map: FinMap::new(g.num_arrows(), arrows).expect("arrows of g"),
        };
        visit(f)?;
        let mut k = axes.len();
        loop {
            if k == 0 {
                return ControlFlow::Continue(());
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < axes[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

pub fn enumerate_functors(h: &Arc<Groupoid>, g: &Arc<Groupoid>) -> Vec<InternalFunctor> {
    let mut out = Vec::new();
    for_each_functor(h, g, |f| {
        out.push(f);
        ControlFlow::Continue(())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{count_equivariant_maps, enumerate_actions, find_equivariant_isomorphism};
    use crate::group::GroupTable;

    fn arc(g: Groupoid) -> Arc<Groupoid> {
        Arc::new(g)
    }

    fn z2() -> Arc<Groupoid> {
        arc(Groupoid::from_group(&GroupTable::cyclic(2)))
    }

    fn point_of(g: &Arc<Groupoid>, x: usize) -> InternalFunctor {
        InternalFunctor::point(g.clone(), &FinMap::new(g.num_objects(), vec![x]).unwrap()).unwrap()
    }

    // Counts functors by checking every pair of object and arrow maps.
    fn brute_functor_count(h: &Groupoid, g: &Groupoid) -> usize {
        let (n0, n1) = (h.num_objects(), h.num_arrows());
        let (m0, m1) = (g.num_objects(), g.num_arrows());
        let mut count = 0;
        for ocode in 0..m0.pow(n0 as u32) {
            let obj: Vec<usize> = (0..n0).map(|i| ocode / m0.pow(i as u32) % m0).collect();
            for acode in 0..m1.pow(n1 as u32) {
                let arr: Vec<usize> = (0..n1).map(|i| acode / m1.pow(i as u32) % m1).collect();
                let ok = h.arrows().elements().all(|a| g.src(arr[a]) == obj[h.src(a)] && g.tgt(arr[a]) == obj[h.tgt(a)])
                    && h.mul_table().triples().all(|(a, b, ab)| g.try_mul(arr[a], arr[b]) == Some(arr[ab]));
                if ok {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn validation_examples() {
        let g = arc(Groupoid::pair(2));
        assert!(InternalFunctor::identity(g.clone()).validate().is_empty());
        assert!(InternalFunctor::to_terminal(g.clone()).validate().is_empty());
        let id = InternalFunctor::identity(g.clone());
        let mut arrows = id.arr_map().table().to_vec();
        arrows[1] = 2;
        let broken = InternalFunctor::from_raw(g.clone(), g, id.obj_map().clone(), FinMap::new(4, arrows).unwrap()).unwrap();
        let report = broken.validate();
        assert!(report.contains(Law::FunctorEndpoints) || report.contains(Law::FunctorComposition));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let gs = [
            arc(Groupoid::pair(2)),
            z2(),
            arc(Groupoid::trivial(2)),
            arc(Groupoid::disjoint_union(&Groupoid::trivial(1), &Groupoid::from_group(&GroupTable::cyclic(2)))),
        ];
        for h in &gs {
            for g in &gs {
                let all = enumerate_functors(h, g);
                assert_eq!(all.len(), brute_functor_count(h, g));
                for f in &all {
                    assert!(f.validate().is_empty());
                }
            }
        }
        let empty = arc(Groupoid::trivial(0));
        assert_eq!(enumerate_functors(&empty, &z2()).len(), 1);
        assert_eq!(enumerate_functors(&z2(), &empty).len(), 0);
    }

    #[test]
    fn restriction_examples() {
        let g = arc(Groupoid::pair(2));
        let a = GAction::arrows_acting(g.clone());
        let id = InternalFunctor::identity(g.clone());
        let r = id.restrict(&a).unwrap();
        assert!(find_equivariant_isomorphism(&r, &a).unwrap().is_some());
        let to_one = InternalFunctor::to_terminal(g.clone());
        let set = GAction::trivial(to_one.cod().clone(), 3);
        let r = to_one.restrict(&set).unwrap();
        assert!(find_equivariant_isomorphism(&r, &GAction::trivial(g.clone(), 3)).unwrap().is_some());
        let r = point_of(&g, 0).restrict(&a).unwrap();
        assert_eq!(r.len(), g.arrows().elements().filter(|&x| g.tgt(x) == 0).count());
        assert_eq!(r.len(), 2);
        assert!(r.validate().is_empty());
    }

    #[test]
    fn half_induction_examples() {
        let g = arc(Groupoid::pair(2));
        let id = InternalFunctor::identity(g.clone());
        let half = id.half_induce(&GAction::terminal(g.clone())).unwrap();
        assert_eq!(half.len(), g.num_arrows());
        assert!(half.validate().is_empty());
        let f = point_of(&g, 1);
        let half = f.half_induce(&GAction::terminal(f.dom().clone())).unwrap();
        assert_eq!(half.len(), g.hom(0, 1).len() + g.hom(1, 1).len());
        assert!(half.validate().is_empty());
    }

    #[test]
    fn induction_examples() {
        let g = arc(Groupoid::pair(2));
        let a = GAction::arrows_acting(g.clone());
        let induced = InternalFunctor::identity(g.clone()).induce(&a).unwrap();
        assert!(find_equivariant_isomorphism(&induced, &a).unwrap().is_some());
        let to_one = InternalFunctor::to_terminal(z2());
        let swap = GAction::cosets(z2(), 0, &[]).unwrap();
        assert_eq!(to_one.induce(&swap).unwrap().len(), swap.orbits().num_classes());
    }

    #[test]
    fn induction_is_left_adjoint_by_counting() {
        let h = z2();
        let g = arc(Groupoid::from_group(&GroupTable::cyclic(4)));
        for f in enumerate_functors(&h, &g) {
            for y in (0..=2).flat_map(|n| enumerate_actions(&h, n)) {
                for a in (0..=2).flat_map(|n| enumerate_actions(&g, n)) {
                    let lhs = count_equivariant_maps(&f.induce(&y).unwrap(), &a).unwrap();
                    let rhs = count_equivariant_maps(&y, &f.restrict(&a).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn transposes_are_inverse() {
        let h = arc(Groupoid::pair(2));
        let g = z2();
        for f in enumerate_functors(&h, &g) {
            for y in (0..=2).flat_map(|n| enumerate_actions(&h, n)) {
                for a in (0..=2).flat_map(|n| enumerate_actions(&g, n)) {
                    let induced = f.induce(&y).unwrap();
                    let restricted = f.restrict(&a).unwrap();
                    for m in crate::action::equivariant_maps(&induced, &a).unwrap() {
                        let t = f.transpose_to_restriction(&y, &a, m.map()).unwrap();
                        EquivariantMap::new(y.clone(), restricted.clone(), t.clone()).unwrap();
                        assert_eq!(&f.transpose_to_induced(&y, &a, &t).unwrap(), m.map());
                    }
                }
            }
        }
    }

    #[test]
    fn essential_equivalence_examples() {
        let g = arc(Groupoid::pair(2));
        let id = InternalFunctor::identity(g.clone());
        assert!(id.is_fully_faithful() && id.is_essentially_surjective() && id.is_essential_equivalence());
        let p = point_of(&g, 0);
        assert!(p.is_fully_faithful());
        assert!(p.is_essentially_surjective());
        assert!(p.is_essential_equivalence());
        assert!(!InternalFunctor::to_terminal(z2()).is_fully_faithful());
        let t2 = arc(Groupoid::trivial(2));
        assert!(!point_of(&t2, 0).is_essentially_surjective());
        for table in [vec![0, 1], vec![1, 0], vec![0, 0], vec![1, 1]] {
            let f = FinMap::new(2, table).unwrap();
            assert_eq!(InternalFunctor::discrete(&f).is_essential_equivalence(), f.is_bijective());
        }
        let f = FinMap::new(3, vec![0, 2]).unwrap();
        assert!(!InternalFunctor::discrete(&f).is_essential_equivalence());
    }

    #[test]
    fn unit_and_counit_are_equivariant() {
        let g = arc(Groupoid::pair(2));
        let f = point_of(&g, 0);
        for y in (0..=3).flat_map(|n| enumerate_actions(f.dom(), n)) {
            let u = f.unit(&y).unwrap();
            assert!(u.validate().is_empty());
            assert!(u.is_isomorphism());
        }
        for a in (0..=3).flat_map(|n| enumerate_actions(&g, n)) {
            let c = f.counit(&a).unwrap();
            assert!(c.validate().is_empty());
            assert!(c.is_isomorphism());
        }
    }
}
