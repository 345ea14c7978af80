//! Random and exhaustive sources of small groupoids, actions, functors and
//! bibundles. Every groupoid here is a disjoint union of components
//! `pair(s) × K` for a group `K` of order at most 8, which covers every
//! finite groupoid up to isomorphism within those bounds.

use std::ops::ControlFlow;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::GAction;
use crate::bibundle::Bibundle;
use crate::finset::FinMap;
use crate::functor::{for_each_functor, InternalFunctor};
use crate::group::{small_groups, GroupTable};
use crate::groupoid::Groupoid;

/// One connected component: `size` objects and isotropy `small_groups(8)[group]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentShape {
    pub size: usize,
    pub group: usize,
}

fn group_catalog() -> &'static [GroupTable] {
    use std::sync::OnceLock;
    static GROUPS: OnceLock<Vec<GroupTable>> = OnceLock::new();
    GROUPS.get_or_init(|| small_groups(8))
}

pub fn component(shape: ComponentShape) -> Groupoid {
    Groupoid::product(&Groupoid::pair(shape.size), &Groupoid::from_group(&group_catalog()[shape.group]))
}

pub fn from_shapes(shapes: &[ComponentShape]) -> Groupoid {
    let parts: Vec<Groupoid> = shapes.iter().map(|&s| component(s)).collect();
    Groupoid::sum(&parts)
}

/// Every groupoid with at most `max_objects` objects and `max_arrows`
/// arrows, one per isomorphism class, the empty groupoid first.
pub fn small_groupoids(max_objects: usize, max_arrows: usize) -> Vec<Groupoid> {
    let mut shapes: Vec<ComponentShape> = Vec::new();
    for size in 1..=max_objects {
        for (group, g) in group_catalog().iter().enumerate() {
            if size * size * g.order() <= max_arrows {
                shapes.push(ComponentShape { size, group });
            }
        }
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    multisets(&shapes, 0, max_objects, max_arrows, &mut acc, &mut |m| out.push(from_shapes(m)));
    out
}

fn multisets(
    shapes: &[ComponentShape],
    start: usize,
    objects_left: usize,
    arrows_left: usize,
    acc: &mut Vec<ComponentShape>,
    visit: &mut dyn FnMut(&[ComponentShape]),
) {
    visit(acc);
    for (i, &s) in shapes.iter().enumerate().skip(start) {
        let arrows = s.size * s.size * group_catalog()[s.group].order();
        if s.size <= objects_left && arrows <= arrows_left {
            acc.push(s);
            multisets(shapes, i, objects_left - s.size, arrows_left - arrows, acc, visit);
            acc.pop();
        }
    }
}

fn random_permutation(rng: &mut impl Rng, n: usize) -> FinMap {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    FinMap::new(n, p).expect("permutation")
}

/// A random nonempty groupoid within the bounds, with objects and arrows
/// randomly renumbered.
pub fn random_groupoid(rng: &mut impl Rng, max_objects: usize, max_arrows: usize) -> Groupoid {
    let max_objects = max_objects.max(1);
    let max_arrows = max_arrows.max(1);
    let components = rng.random_range(1..=max_objects);
    let (mut objects, mut arrows) = (0, 0);
    let mut shapes = Vec::new();
    for _ in 0..components {
        let fits: Vec<ComponentShape> = (1..=max_objects - objects)
            .flat_map(|size| {
                (0..group_catalog().len()).map(move |group| ComponentShape { size, group })
            })
            .filter(|s| arrows + s.size * s.size * group_catalog()[s.group].order() <= max_arrows)
            .collect();
        let Some(&s) = fits.get(rng.random_range(0..fits.len().max(1))) else {
            break;
        };
        objects += s.size;
        arrows += s.size * s.size * group_catalog()[s.group].order();
        shapes.push(s);
    }
    let g = from_shapes(&shapes);
    let objs = random_permutation(rng, g.num_objects());
    let arrs = random_permutation(rng, g.num_arrows());
    g.relabeled(&objs, &arrs).expect("relabeling by permutations")
}

/// A random action with at most `max_size` elements: a sum of transitive
/// actions on cosets of randomly generated isotropy subgroups.
pub fn random_action(rng: &mut impl Rng, g: &Arc<Groupoid>, max_size: usize) -> GAction {
    let mut action = GAction::trivial(g.clone(), 0);
    let attempts = rng.random_range(0..=max_size.min(4));
    for _ in 0..attempts {
        if g.num_objects() == 0 {
            break;
        }
        let x = rng.random_range(0..g.num_objects());
        let loops = g.hom(x, x);
        let gens: Vec<usize> = loops.iter().copied().filter(|_| rng.random_bool(0.4)).collect();
        let part = GAction::cosets(g.clone(), x, &gens).expect("loops at x");
        if action.len() + part.len() <= max_size {
            action = GAction::sum(&action, &part).expect("same groupoid");
        }
    }
    let perm = random_permutation(rng, action.len());
    action.relabeled(&perm).expect("permutation of the carrier")
}

/// A functor chosen uniformly among the first `cap` in enumeration order.
pub fn random_functor(rng: &mut impl Rng, h: &Arc<Groupoid>, g: &Arc<Groupoid>, cap: usize) -> Option<InternalFunctor> {
    let mut all = Vec::new();
    for_each_functor(h, g, |f| {
        all.push(f);
        if all.len() >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    if all.is_empty() {
        None
    } else {
        let i = rng.random_range(0..all.len());
        Some(all.swap_remove(i))
    }
}

/// A surjective-on-components map `X -> G0` and the projection from the
/// pulled-back groupoid, which is an essential equivalence.
pub fn random_essential_equivalence(rng: &mut impl Rng, g: &Arc<Groupoid>, max_extra: usize) -> InternalFunctor {
    let frames = g.frames();
    let mut table: Vec<usize> = frames.members.iter().map(|m| m[rng.random_range(0..m.len())]).collect();
    for _ in 0..rng.random_range(0..=max_extra) {
        table.push(rng.random_range(0..g.num_objects()));
    }
    table.shuffle(rng);
    let f = FinMap::new(g.objects(), table).expect("objects of g");
    InternalFunctor::from_pullback(g.clone(), &f).expect("pullback of a map into the objects")
}

/// A random bibundle between random groupoids: either the bundle of a
/// random functor or a span through an essential equivalence.
pub fn random_bibundle(rng: &mut impl Rng, max_objects: usize, max_arrows: usize, max_carrier: usize) -> Bibundle {
    loop {
        let h = Arc::new(random_groupoid(rng, max_objects, max_arrows));
        let g = Arc::new(random_groupoid(rng, max_objects, max_arrows));
        let candidate = if rng.random_bool(0.5) {
            random_functor(rng, &h, &g, 64).map(|f| Bibundle::from_functor(&f).expect("functors give bibundles"))
        } else {
            let e = random_essential_equivalence(rng, &h, 1);
            random_functor(rng, e.dom(), &g, 64).map(|f| {
                let back = Bibundle::from_functor(&e).expect("valid functor").opposite().expect("invertible");
                back.compose(&Bibundle::from_functor(&f).expect("valid functor")).expect("composable")
            })
        };
        if let Some(b) = candidate.filter(|b| b.len() <= max_carrier) {
            return b;
        }
    }
}

/// A random bibundle out of `k`.
pub fn random_bibundle_from(rng: &mut impl Rng, k: &Arc<Groupoid>, max_objects: usize, max_arrows: usize, max_carrier: usize) -> Bibundle {
    loop {
        let g = Arc::new(random_groupoid(rng, max_objects, max_arrows));
        if let Some(f) = random_functor(rng, k, &g, 64) {
            let b = Bibundle::from_functor(&f).expect("functors give bibundles");
            if b.len() <= max_carrier {
                return b;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_groupoids_are_distinct_and_valid() {
        let all = small_groupoids(2, 6);
        assert!(all[0].num_objects() == 0);
        for (i, a) in all.iter().enumerate() {
            assert!(a.validate().is_empty());
            assert!(a.num_objects() <= 2 && a.num_arrows() <= 6);
            for b in &all[..i] {
                assert!(!a.is_isomorphic(b));
            }
        }
        // one object: the eight groups of order at most 6
        assert_eq!(all.iter().filter(|g| g.num_objects() == 1).count(), 8);
    }

    #[test]
    fn random_structures_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let g = Arc::new(random_groupoid(&mut rng, 4, 12));
            assert!(g.validate().is_empty());
            assert!(g.num_objects() <= 4 && g.num_arrows() <= 12);
            let a = random_action(&mut rng, &g, 5);
            assert!(a.validate().is_empty() && a.len() <= 5);
            let e = random_essential_equivalence(&mut rng, &g, 2);
            assert!(e.is_essential_equivalence());
            let b = random_bibundle(&mut rng, 3, 6, 8);
            assert!(crate::bibundle::validate_bibundle(b.sides()).is_empty());
        }
    }
}
