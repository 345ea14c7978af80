//! Deciding Morita equivalence with checkable certificates, and passing
//! between bibundles and groupoids internal to actions.

use std::fmt;
use std::sync::Arc;

use crate::action::{EquivariantMap, GAction};
use crate::bibundle::{find_morphism, Bibundle, BibundleMorphism, Tensor};
use crate::error::{Error, Result};
use crate::finset::{self, FinMap};
use crate::functor::InternalFunctor;
use crate::group::CanonicalGroup;
use crate::groupoid::Groupoid;
use crate::report::{Law, ValidationReport};
use crate::table::PartialTable;

/// The isotropy groups of a groupoid's components, up to isomorphism,
/// sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoritaInvariant(Vec<CanonicalGroup>);

impl MoritaInvariant {
    pub fn of(g: &Groupoid) -> Self {
        let mut groups: Vec<_> = g.frames().groups.iter().map(|grp| grp.canonical_form().0).collect();
        groups.sort();
        MoritaInvariant(groups)
    }

    pub fn groups(&self) -> &[CanonicalGroup] {
        &self.0
    }

    pub fn components(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for MoritaInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("]")
    }
}

pub fn morita_invariant(g: &Groupoid) -> MoritaInvariant {
    MoritaInvariant::of(g)
}

/// An invertible bibundle with witnesses that both composites are
/// isomorphic to identities.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub bibundle: Bibundle,
    pub inverse: Bibundle,
    /// `bibundle` then `inverse`, onto the identity of the left groupoid.
    pub unit: BibundleMorphism,
    /// `inverse` then `bibundle`, onto the identity of the right groupoid.
    pub counit: BibundleMorphism,
}

impl Equivalence {
    fn from_bibundles(bibundle: Bibundle, inverse: Bibundle) -> Result<Self> {
        let there = bibundle.compose(&inverse)?;
        let back = inverse.compose(&bibundle)?;
        let unit = find_morphism(&there, &Bibundle::identity(bibundle.left_groupoid().clone()))?
            .ok_or_else(|| Error::Construction("composite is not isomorphic to the identity".into()))?;
        let counit = find_morphism(&back, &Bibundle::identity(bibundle.right_groupoid().clone()))?
            .ok_or_else(|| Error::Construction("reverse composite is not isomorphic to the identity".into()))?;
        Ok(Equivalence {
            bibundle,
            inverse,
            unit,
            counit,
        })
    }

    /// Recomputes both composites and checks the witness maps against them.
    pub fn verify(&self) -> bool {
        let check = |first: &Bibundle, second: &Bibundle, witness: &BibundleMorphism| {
            let Ok(composite) = first.compose(second) else {
                return false;
            };
            let identity = Bibundle::identity(first.left_groupoid().clone());
            BibundleMorphism::new(composite, identity, witness.map().clone()).is_ok_and(|m| m.is_bijective())
        };
        check(&self.bibundle, &self.inverse, &self.unit) && check(&self.inverse, &self.bibundle, &self.counit)
    }
}

#[derive(Clone, Debug)]
pub enum MoritaCertificate {
    Equivalent(Box<Equivalence>),
    Inequivalent {
        left: MoritaInvariant,
        right: MoritaInvariant,
    },
}

impl MoritaCertificate {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, MoritaCertificate::Equivalent(_))
    }

    pub fn equivalence(&self) -> Option<&Equivalence> {
        match self {
            MoritaCertificate::Equivalent(e) => Some(e),
            MoritaCertificate::Inequivalent { .. } => None,
        }
    }

    /// Positive certificates are rechecked from scratch; negative ones by
    /// recomputing the invariants.
    pub fn verify(&self, h: &Groupoid, g: &Groupoid) -> bool {
        match self {
            MoritaCertificate::Equivalent(e) => {
                **e.bibundle.left_groupoid() == *h && **e.bibundle.right_groupoid() == *g && e.verify()
            }
            MoritaCertificate::Inequivalent { left, right } => {
                left != right && *left == MoritaInvariant::of(h) && *right == MoritaInvariant::of(g)
            }
        }
    }
}

/// Decides whether `h` and `g` are Morita equivalent. On a match of
/// invariants the certificate bundle comes from a functor collapsing each
/// component of `h` onto the base of a matching component of `g`.
pub fn morita_equivalent(h: &Arc<Groupoid>, g: &Arc<Groupoid>) -> Result<MoritaCertificate> {
    if h == g {
        let id = Bibundle::identity(h.clone());
        let inverse = id.opposite()?;
        return Ok(MoritaCertificate::Equivalent(Box::new(Equivalence::from_bibundles(id, inverse)?)));
    }
    let (left, right) = (MoritaInvariant::of(h), MoritaInvariant::of(g));
    if left != right {
        return Ok(MoritaCertificate::Inequivalent { left, right });
    }
    invert_essential_equivalence(&collapse_functor(h, g)?)
}

fn collapse_functor(h: &Arc<Groupoid>, g: &Arc<Groupoid>) -> Result<InternalFunctor> {
    let (hf, gf) = (h.frames(), g.frames());
    let g_forms: Vec<CanonicalGroup> = gf.groups.iter().map(|grp| grp.canonical_form().0).collect();
    let mut used = vec![false; gf.len()];
    let mut targets = Vec::with_capacity(hf.len());
    let mut isos = Vec::with_capacity(hf.len());
    for group in &hf.groups {
        let form = group.canonical_form().0;
        let d = (0..gf.len())
            .find(|&d| !used[d] && g_forms[d] == form)
            .ok_or_else(|| Error::Construction("no matching component".into()))?;
        used[d] = true;
        let iso = group
            .find_isomorphism(&gf.groups[d])
            .ok_or_else(|| Error::Construction("isotropy groups with equal forms are not isomorphic".into()))?;
        targets.push(d);
        isos.push(iso);
    }
    let obj_map = FinMap::from_fn(h.objects(), g.objects(), |x| gf.bases[targets[hf.component_of(x)]]);
    let arr_map = FinMap::from_fn(h.arrows(), g.arrows(), |a| {
        let c = hf.component_of(h.src(a));
        gf.isotropy[targets[c]][isos[c][hf.isotropy_part(h, a)]]
    });
    InternalFunctor::new(h.clone(), g.clone(), obj_map, arr_map)
}

/// The bibundle of an essential equivalence, with its opposite as inverse.
pub fn invert_essential_equivalence(f: &InternalFunctor) -> Result<MoritaCertificate> {
    if let Some(reason) = f.essential_equivalence_failure() {
        return Err(Error::NotEssentialEquivalence(reason));
    }
    let bibundle = if *f == InternalFunctor::identity(f.dom().clone()) {
        Bibundle::identity(f.dom().clone())
    } else {
        Bibundle::from_functor(f)?
    };
    let inverse = bibundle.opposite()?;
    Ok(MoritaCertificate::Equivalent(Box::new(Equivalence::from_bibundles(bibundle, inverse)?)))
}

/// A groupoid whose objects and arrows are actions of `base`, with
/// equivariant structure maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InternalGroupoidInActions {
    pub base: Arc<Groupoid>,
    pub objects: GAction,
    pub arrows: GAction,
    pub src: FinMap,
    pub tgt: FinMap,
    pub unit: FinMap,
    pub inv: FinMap,
    pub mul: PartialTable,
}

impl InternalGroupoidInActions {
    pub fn underlying(&self) -> Result<Groupoid> {
        Groupoid::from_raw(
            self.objects.carrier(),
            self.src.clone(),
            self.tgt.clone(),
            self.unit.clone(),
            self.inv.clone(),
            self.mul.clone(),
        )
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        let same_base = crate::action::same_groupoid(&self.base, self.objects.groupoid_arc())
            && crate::action::same_groupoid(&self.base, self.arrows.groupoid_arc());
        if !same_base {
            r.push(Law::StructureEquivariance, "object and arrow actions are not over the base");
            return r;
        }
        r.merge_scoped("objects", self.objects.validate());
        r.merge_scoped("arrows", self.arrows.validate());
        let underlying = match self.underlying() {
            Ok(u) => u,
            Err(e) => {
                r.push(Law::CompositionDomain, e.to_string());
                return r;
            }
        };
        r.merge_scoped("underlying groupoid", underlying.validate());
        for (name, dom, cod, map) in [
            ("source", &self.arrows, &self.objects, &self.src),
            ("target", &self.arrows, &self.objects, &self.tgt),
            ("unit", &self.objects, &self.arrows, &self.unit),
            ("inverse", &self.arrows, &self.arrows, &self.inv),
        ] {
            let report = EquivariantMap::from_raw(dom.clone(), cod.clone(), map.clone())
                .map(|m| m.validate())
                .unwrap_or_else(|e| {
                    let mut r = ValidationReport::new();
                    r.push(Law::StructureEquivariance, e.to_string());
                    r
                });
            if !report.is_empty() {
                r.push(Law::StructureEquivariance, format!("{name} map: {report}"));
            }
        }
        let k = &self.arrows;
        for (a, b, ab) in self.mul.triples() {
            for g in k.arrows_at(a) {
                let moved = k.try_act(g, b).and_then(|gb| self.mul.get(k.act(g, a), gb));
                r.check(moved == k.try_act(g, ab), Law::StructureEquivariance, || {
                    format!("composition of {a} and {b} does not commute with arrow {g}")
                });
            }
        }
        r
    }

    /// Objects and arrows both `x`, every structure map the identity.
    pub fn trivial_on(x: &GAction) -> Self {
        let id = FinMap::identity(x.carrier());
        let mul = PartialTable::from_triples(x.len(), x.len(), x.carrier().elements().map(|e| (e, e, e)))
            .expect("diagonal triples");
        InternalGroupoidInActions {
            base: x.groupoid_arc().clone(),
            objects: x.clone(),
            arrows: x.clone(),
            src: id.clone(),
            tgt: id.clone(),
            unit: id.clone(),
            inv: id,
            mul,
        }
    }

    /// A plain groupoid over the one-object base.
    pub fn from_plain(k: &Groupoid) -> Self {
        let base = Arc::new(Groupoid::trivial(1));
        InternalGroupoidInActions {
            objects: GAction::trivial(base.clone(), k.objects()),
            arrows: GAction::trivial(base.clone(), k.arrows()),
            base,
            src: k.src_map().clone(),
            tgt: k.tgt_map().clone(),
            unit: k.unit_map().clone(),
            inv: k.inv_map().clone(),
            mul: k.mul_table().clone(),
        }
    }
}

/// Objects those of `K`, arrows the pairs `(g, k)` with `src g` the anchor
/// of `k`, running from `src k` to `tgt (g · k)`.
pub fn semidirect_product(k: &InternalGroupoidInActions) -> Result<Groupoid> {
    let report = k.validate();
    if !report.is_empty() {
        return Err(Error::Invalid {
            kind: "internal groupoid",
            report,
        });
    }
    let g = &*k.base;
    let ka = &k.arrows;
    let pb = finset::pullback(g.src_map(), ka.anchor_map())?;
    let n = pb.len();
    let src = FinMap::from_fn(n, k.objects.carrier(), |i| k.src.apply(pb.pair(i).1));
    let tgt = FinMap::from_fn(n, k.objects.carrier(), |i| {
        let (a, arrow) = pb.pair(i);
        k.tgt.apply(ka.act(a, arrow))
    });
    let unit = FinMap::from_fn(k.objects.carrier(), n, |x| {
        pb.index_of(g.unit(k.objects.anchor(x)), k.unit.apply(x)).expect("unit pair")
    });
    let inv = FinMap::from_fn(n, n, |i| {
        let (a, arrow) = pb.pair(i);
        pb.index_of(g.inv(a), k.inv.apply(ka.act(a, arrow))).expect("inverse pair")
    });
    let mut mul = PartialTable::new(n, n);
    for (i, (a, first)) in pb.pairs().enumerate() {
        for (j, (b, second)) in pb.pairs().enumerate() {
            if src.apply(i) != tgt.apply(j) {
                continue;
            }
            let pulled = ka.act(g.inv(b), first);
            let composite = k.mul.get(pulled, second).ok_or_else(|| {
                Error::Construction(format!("arrows {pulled} and {second} of the internal groupoid do not compose"))
            })?;
            let index = pb
                .index_of(g.mul(a, b), composite)
                .ok_or_else(|| Error::Construction("composite leaves the arrow set".into()))?;
            mul.set(i, j, index);
        }
    }
    Groupoid::new(k.objects.carrier(), src, tgt, unit, inv, mul)
}

/// The groupoid internal to actions of the right groupoid obtained by
/// applying the bibundle to the arrows of the left groupoid and to its
/// powers: objects from `T`, arrows from `T × T`, composition from `T³`.
pub fn reconstruct_internal_groupoid(p: &Bibundle) -> Result<InternalGroupoidInActions> {
    let h = p.left_groupoid();
    let w = GAction::arrows_acting(h.clone());
    let w2 = GAction::product(&w, &w)?;
    let w3 = GAction::product(&w2, &w)?;
    let pairs2 = finset::pullback(w.anchor_map(), w.anchor_map())?;
    let pairs3 = finset::pullback(w2.anchor_map(), w.anchor_map())?;

    let project2 = |pick: fn((usize, usize)) -> usize| FinMap::from_fn(w2.carrier(), w.carrier(), |i| pick(pairs2.pair(i)));
    let first = project2(|(a, _)| a);
    let second = project2(|(_, b)| b);
    let diagonal = FinMap::from_fn(w.carrier(), w2.carrier(), |a| pairs2.index_of(a, a).expect("diagonal pair"));
    let twist = FinMap::from_fn(w2.carrier(), w2.carrier(), |i| {
        let (a, b) = pairs2.pair(i);
        pairs2.index_of(b, a).expect("swapped pair")
    });
    let triple = |i: usize| {
        let (ab, c) = pairs3.pair(i);
        let (a, b) = pairs2.pair(ab);
        (a, b, c)
    };
    let pick3 = |pick: fn((usize, usize, usize)) -> (usize, usize)| {
        FinMap::from_fn(w3.carrier(), w2.carrier(), |i| {
            let (x, y) = pick(triple(i));
            pairs2.index_of(x, y).expect("projected pair")
        })
    };
    let p12 = pick3(|(a, b, _)| (a, b));
    let p23 = pick3(|(_, b, c)| (b, c));
    let p13 = pick3(|(a, _, c)| (a, c));

    let (l1, l2, l3) = (p.tensor(&w)?, p.tensor(&w2)?, p.tensor(&w3)?);
    let along = |from: &Tensor, to: &Tensor, map: &FinMap| from.map_along(to, map);
    let src = along(&l2, &l1, &second)?;
    let tgt = along(&l2, &l1, &first)?;
    let unit = along(&l1, &l2, &diagonal)?;
    let inv = along(&l2, &l2, &twist)?;
    let (m12, m23, m13) = (along(&l3, &l2, &p12)?, along(&l3, &l2, &p23)?, along(&l3, &l2, &p13)?);
    let size = l2.action.len();
    let mut mul = PartialTable::new(size, size);
    for t in l3.action.carrier().elements() {
        let (a, b, ab) = (m12.apply(t), m23.apply(t), m13.apply(t));
        match mul.get(a, b) {
            Some(existing) if existing != ab => {
                return Err(Error::Construction(format!("composite of {a} and {b} is not well defined")));
            }
            _ => mul.set(a, b, ab),
        }
    }
    Ok(InternalGroupoidInActions {
        base: p.right_groupoid().clone(),
        objects: l1.action,
        arrows: l2.action,
        src,
        tgt,
        unit,
        inv,
        mul,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::find_equivariant_isomorphism;
    use crate::group::GroupTable;

    fn arc(g: Groupoid) -> Arc<Groupoid> {
        Arc::new(g)
    }

    fn z(n: usize) -> Arc<Groupoid> {
        arc(Groupoid::from_group(&GroupTable::cyclic(n)))
    }

    #[test]
    fn invariants() {
        for n in 1..4 {
            assert_eq!(morita_invariant(&Groupoid::pair(n)), morita_invariant(&Groupoid::trivial(1)));
        }
        assert_ne!(morita_invariant(&z(2)), morita_invariant(&z(3)));
        let two = morita_invariant(&Groupoid::trivial(2));
        assert_eq!(two.components(), 2);
        assert!(two.groups().iter().all(|g| g.order() == 1));
        let g = Groupoid::disjoint_union(&Groupoid::pair(2), &z(3));
        assert_eq!(morita_invariant(&g), morita_invariant(&g.opposite()));
        assert_eq!(morita_invariant(&g), morita_invariant(&Groupoid::product(&Groupoid::trivial(1), &g)));
    }

    #[test]
    fn decisions() {
        let pair3 = arc(Groupoid::pair(3));
        let one = arc(Groupoid::trivial(1));
        let cert = morita_equivalent(&pair3, &one).unwrap();
        assert_eq!(cert.equivalence().unwrap().bibundle.len(), 3);
        assert!(cert.verify(&pair3, &one));
        let cert = morita_equivalent(&z(2), &z(3)).unwrap();
        assert!(!cert.is_equivalent());
        assert!(cert.verify(&z(2), &z(3)));
        let g = arc(Groupoid::disjoint_union(&Groupoid::pair(2), &z(2)));
        let cert = morita_equivalent(&g, &g).unwrap();
        assert_eq!(cert.equivalence().unwrap().bibundle, Bibundle::identity(g.clone()));
        let other = arc(Groupoid::disjoint_union(&z(2), &Groupoid::trivial(1)));
        let cert = morita_equivalent(&g, &other).unwrap();
        assert!(cert.verify(&g, &other));
        let s3 = arc(Groupoid::from_group(&GroupTable::symmetric(3)));
        let cert = morita_equivalent(&arc(Groupoid::product(&Groupoid::pair(2), &s3)), &s3).unwrap();
        assert!(cert.is_equivalent());
    }

    #[test]
    fn inverting_essential_equivalences() {
        let g = arc(Groupoid::pair(2));
        let id = InternalFunctor::identity(g.clone());
        let cert = invert_essential_equivalence(&id).unwrap();
        assert_eq!(cert.equivalence().unwrap().bibundle, Bibundle::identity(g.clone()));
        let incl = InternalFunctor::point(g.clone(), &FinMap::new(2, vec![0]).unwrap()).unwrap();
        let cert = invert_essential_equivalence(&incl).unwrap();
        let e = cert.equivalence().unwrap();
        assert_eq!(e.bibundle.len(), 2);
        assert!(e.verify());
        let two = arc(Groupoid::trivial(2));
        let miss = InternalFunctor::point(two, &FinMap::new(2, vec![0]).unwrap()).unwrap();
        assert!(matches!(
            invert_essential_equivalence(&miss),
            Err(Error::NotEssentialEquivalence(_))
        ));
    }

    #[test]
    fn semidirect_examples() {
        let k = Groupoid::disjoint_union(&Groupoid::pair(2), &z(3));
        assert_eq!(semidirect_product(&InternalGroupoidInActions::from_plain(&k)).unwrap(), k);
        let g = arc(Groupoid::disjoint_union(&Groupoid::pair(2), &z(2)));
        let x = GAction::arrows_acting(g.clone());
        let s = semidirect_product(&InternalGroupoidInActions::trivial_on(&x)).unwrap();
        assert!(s.is_isomorphic(&x.action_groupoid()));
    }

    #[test]
    fn reconstruction() {
        let h = arc(Groupoid::pair(2));
        let incl = InternalFunctor::point(h.clone(), &FinMap::new(2, vec![1]).unwrap()).unwrap();
        for p in [
            Bibundle::identity(h.clone()),
            Bibundle::from_functor(&incl).unwrap(),
            Bibundle::from_functor(&incl).unwrap().opposite().unwrap(),
            Bibundle::from_functor(&InternalFunctor::to_terminal(z(2))).unwrap(),
        ] {
            let k = reconstruct_internal_groupoid(&p).unwrap();
            assert!(k.validate().is_empty(), "{}", k.validate());
            assert!(find_equivariant_isomorphism(&k.objects, p.right()).unwrap().is_some());
            let underlying = k.underlying().unwrap();
            assert!(underlying.is_isomorphic(&p.left().action_groupoid()));
            let product = arc(Groupoid::product(p.left_groupoid(), p.right_groupoid()));
            let both = p.sides().as_product_action(product).unwrap();
            assert!(semidirect_product(&k).unwrap().is_isomorphic(&both.action_groupoid()));
        }
    }
}
