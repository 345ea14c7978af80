//! Internal groupoids in finite sets.
//!
//! Arrows run from `src` to `tgt`, and `mul(a, b)` is "a after b": it is
//! defined exactly when `src a = tgt b`.

use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet, Quotient};
use crate::group::GroupTable;
use crate::report::{Law, ValidationReport};
use crate::table::PartialTable;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Groupoid {
    objects: FinSet,
    arrows: FinSet,
    src: FinMap,
    tgt: FinMap,
    unit: FinMap,
    inv: FinMap,
    mul: PartialTable,
}

impl Groupoid {
    /// Assembles groupoid data after checking only shapes and ranges.
    /// The axioms are checked by [`validate`](Self::validate).
    pub fn from_raw(
        objects: FinSet,
        src: FinMap,
        tgt: FinMap,
        unit: FinMap,
        inv: FinMap,
        mul: PartialTable,
    ) -> Result<Self> {
        let arrows = src.dom();
        let expect = |name: &str, m: &FinMap, dom: FinSet, cod: FinSet| -> Result<()> {
            if m.dom() != dom || m.cod() != cod {
                return Err(Error::shape(format!(
                    "{name} should map {} -> {}, got {} -> {}",
                    dom.size(),
                    cod.size(),
                    m.dom().size(),
                    m.cod().size()
                )));
            }
            Ok(())
        };
        expect("src", &src, arrows, objects)?;
        expect("tgt", &tgt, arrows, objects)?;
        expect("unit", &unit, objects, arrows)?;
        expect("inv", &inv, arrows, arrows)?;
        if mul.rows() != arrows.size() || mul.cols() != arrows.size() {
            return Err(Error::shape(format!(
                "composition table is {}x{}, expected {n}x{n}",
                mul.rows(),
                mul.cols(),
                n = arrows.size()
            )));
        }
        if let Some(v) = mul.max_value().filter(|&v| v >= arrows.size()) {
            return Err(Error::out_of_range("composite", v, arrows.size()));
        }
        Ok(Groupoid {
            objects,
            arrows,
            src,
            tgt,
            unit,
            inv,
            mul,
        })
    }

    /// [`from_raw`](Self::from_raw) followed by validation.
    pub fn new(
        objects: FinSet,
        src: FinMap,
        tgt: FinMap,
        unit: FinMap,
        inv: FinMap,
        mul: PartialTable,
    ) -> Result<Self> {
        let g = Self::from_raw(objects, src, tgt, unit, inv, mul)?;
        g.into_valid()
    }

    pub(crate) fn into_valid(self) -> Result<Self> {
        let report = self.validate();
        if report.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid {
                kind: "groupoid",
                report,
            })
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        for x in self.objects.elements() {
            let e = self.unit.apply(x);
            r.check(
                self.src.apply(e) == x && self.tgt.apply(e) == x,
                Law::UnitEndpoints,
                || format!("unit arrow {e} of object {x} runs {} -> {}", self.src.apply(e), self.tgt.apply(e)),
            );
        }
        for a in self.arrows.elements() {
            for b in self.arrows.elements() {
                let composable = self.src.apply(a) == self.tgt.apply(b);
                match (composable, self.mul.get(a, b)) {
                    (true, None) => r.push(Law::CompositionDomain, format!("composable pair ({a}, {b}) has no composite")),
                    (false, Some(_)) => r.push(Law::CompositionDomain, format!("non-composable pair ({a}, {b}) has a composite")),
                    (true, Some(ab)) => r.check(
                        self.src.apply(ab) == self.src.apply(b) && self.tgt.apply(ab) == self.tgt.apply(a),
                        Law::CompositionEndpoints,
                        || format!("composite {ab} of ({a}, {b}) has wrong endpoints"),
                    ),
                    (false, None) => {}
                }
            }
        }
        for g in self.arrows.elements() {
            let right = self.mul.get(g, self.unit.apply(self.src.apply(g)));
            let left = self.mul.get(self.unit.apply(self.tgt.apply(g)), g);
            r.check(
                right.is_none_or(|v| v == g) && left.is_none_or(|v| v == g),
                Law::UnitLaw,
                || format!("arrow {g} is moved by a unit"),
            );
        }
        let by_tgt = self.tgt.fibers();
        for a in self.arrows.elements() {
            for &b in &by_tgt[self.src.apply(a)] {
                for &c in &by_tgt[self.src.apply(b)] {
                    let lhs = self.mul.get(a, b).and_then(|ab| self.mul.get(ab, c));
                    let rhs = self.mul.get(b, c).and_then(|bc| self.mul.get(a, bc));
                    if let (Some(l), Some(rr)) = (lhs, rhs) {
                        r.check(l == rr, Law::Associativity, || {
                            format!("({a} {b}) {c} = {l} but {a} ({b} {c}) = {rr}")
                        });
                    }
                }
            }
        }
        for g in self.arrows.elements() {
            let i = self.inv.apply(g);
            let endpoints_ok = self.src.apply(i) == self.tgt.apply(g) && self.tgt.apply(i) == self.src.apply(g);
            r.check(endpoints_ok, Law::InverseEndpoints, || {
                format!("inverse {i} of arrow {g} has wrong endpoints")
            });
            let gi = self.mul.get(g, i);
            let ig = self.mul.get(i, g);
            r.check(
                gi == Some(self.unit.apply(self.tgt.apply(g))) && ig == Some(self.unit.apply(self.src.apply(g))),
                Law::InverseLaw,
                || format!("arrow {g} composed with its inverse {i} is not a unit"),
            );
        }
        r
    }

    pub fn objects(&self) -> FinSet {
        self.objects
    }

    pub fn arrows(&self) -> FinSet {
        self.arrows
    }

    pub fn num_objects(&self) -> usize {
        self.objects.size()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.size()
    }

    pub fn src_map(&self) -> &FinMap {
        &self.src
    }

    pub fn tgt_map(&self) -> &FinMap {
        &self.tgt
    }

    pub fn unit_map(&self) -> &FinMap {
        &self.unit
    }

    pub fn inv_map(&self) -> &FinMap {
        &self.inv
    }

    pub fn mul_table(&self) -> &PartialTable {
        &self.mul
    }

    #[inline]
    pub fn src(&self, g: usize) -> usize {
        self.src.apply(g)
    }

    #[inline]
    pub fn tgt(&self, g: usize) -> usize {
        self.tgt.apply(g)
    }

    #[inline]
    pub fn unit(&self, x: usize) -> usize {
        self.unit.apply(x)
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv.apply(g)
    }

    #[inline]
    pub fn try_mul(&self, a: usize, b: usize) -> Option<usize> {
        self.mul.get(a, b)
    }

    /// `a` after `b`. Panics if the pair is not composable.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self.mul.get(a, b) {
            Some(v) => v,
            None => panic!("arrows {a} and {b} are not composable"),
        }
    }

    /// Arrows `x -> y` in ascending order.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.arrows
            .elements()
            .filter(|&g| self.src(g) == x && self.tgt(g) == y)
            .collect()
    }

    // ----- constructors -----

    fn assemble(
        objects: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        unit: Vec<usize>,
        inv: Vec<usize>,
        mul: PartialTable,
    ) -> Self {
        let arrows = src.len();
        let g = Groupoid {
            objects: FinSet::new(objects),
            arrows: FinSet::new(arrows),
            src: FinMap::new(objects, src).expect("src in range"),
            tgt: FinMap::new(objects, tgt).expect("tgt in range"),
            unit: FinMap::new(arrows, unit).expect("unit in range"),
            inv: FinMap::new(arrows, inv).expect("inv in range"),
            mul,
        };
        debug_assert!(g.validate().is_empty(), "{}", g.validate());
        g
    }

    /// The discrete groupoid on `objects`: only identity arrows.
    pub fn trivial(objects: impl Into<FinSet>) -> Self {
        let n = objects.into().size();
        let ids: Vec<usize> = (0..n).collect();
        let mul = PartialTable::from_triples(n, n, (0..n).map(|x| (x, x, x))).expect("diagonal");
        Self::assemble(n, ids.clone(), ids.clone(), ids.clone(), ids, mul)
    }

    /// The codiscrete groupoid on `objects`: exactly one arrow `(a, b)`
    /// from `b` to `a` for each pair, numbered `a * n + b`.
    pub fn pair(objects: impl Into<FinSet>) -> Self {
        let n = objects.into().size();
        let idx = |a: usize, b: usize| a * n + b;
        let src = (0..n * n).map(|g| g % n).collect();
        let tgt = (0..n * n).map(|g| g / n).collect();
        let unit = (0..n).map(|x| idx(x, x)).collect();
        let inv = (0..n * n).map(|g| idx(g % n, g / n)).collect();
        let triples = (0..n).flat_map(|a| {
            (0..n).flat_map(move |b| (0..n).map(move |c| (idx(a, b), idx(b, c), idx(a, c))))
        });
        let mul = PartialTable::from_triples(n * n, n * n, triples).expect("pair composites");
        Self::assemble(n, src, tgt, unit, inv, mul)
    }

    /// A group as a groupoid with one object.
    pub fn from_group(group: &GroupTable) -> Self {
        let n = group.order();
        let triples = (0..n).flat_map(|a| (0..n).map(move |b| (a, b, group.mul(a, b))));
        let mul = PartialTable::from_triples(n, n, triples).expect("group table");
        Self::assemble(
            1,
            vec![0; n],
            vec![0; n],
            vec![group.identity()],
            (0..n).map(|a| group.inv(a)).collect(),
            mul,
        )
    }

    /// One-object groupoid from a multiplication table, validated as a group.
    pub fn group(rows: Vec<Vec<usize>>) -> Result<Self> {
        Ok(Self::from_group(&GroupTable::new(rows)?))
    }

    /// Componentwise product; object `(h, g)` is numbered `h * |G0| + g`
    /// and arrow `(a, b)` is numbered `a * |G1| + b`.
    pub fn product(h: &Groupoid, g: &Groupoid) -> Self {
        let (n0, n1) = (g.num_objects(), g.num_arrows());
        let arrows = h.num_arrows() * n1;
        let src = (0..arrows).map(|x| h.src(x / n1) * n0 + g.src(x % n1)).collect();
        let tgt = (0..arrows).map(|x| h.tgt(x / n1) * n0 + g.tgt(x % n1)).collect();
        let unit = (0..h.num_objects() * n0).map(|x| h.unit(x / n0) * n1 + g.unit(x % n0)).collect();
        let inv = (0..arrows).map(|x| h.inv(x / n1) * n1 + g.inv(x % n1)).collect();
        let mut mul = PartialTable::new(arrows, arrows);
        for (a1, a2, a) in h.mul.triples() {
            for (b1, b2, b) in g.mul.triples() {
                mul.set(a1 * n1 + b1, a2 * n1 + b2, a * n1 + b);
            }
        }
        Self::assemble(h.num_objects() * n0, src, tgt, unit, inv, mul)
    }

    /// Same arrows with `src` and `tgt` exchanged and composition reversed.
    pub fn opposite(&self) -> Self {
        Groupoid {
            objects: self.objects,
            arrows: self.arrows,
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            unit: self.unit.clone(),
            inv: self.inv.clone(),
            mul: self.mul.transposed(),
        }
    }

    /// `a` followed by `b`, with `b`'s objects and arrows offset.
    pub fn disjoint_union(a: &Groupoid, b: &Groupoid) -> Self {
        let (o, m) = (a.num_objects(), a.num_arrows());
        let arrows = m + b.num_arrows();
        let pick = |x: usize, fa: &dyn Fn(usize) -> usize, fb: &dyn Fn(usize) -> usize, shift: usize| {
            if x < m {
                fa(x)
            } else {
                fb(x - m) + shift
            }
        };
        let src = (0..arrows).map(|x| pick(x, &|g| a.src(g), &|g| b.src(g), o)).collect();
        let tgt = (0..arrows).map(|x| pick(x, &|g| a.tgt(g), &|g| b.tgt(g), o)).collect();
        let inv = (0..arrows).map(|x| pick(x, &|g| a.inv(g), &|g| b.inv(g), m)).collect();
        let unit = (0..o + b.num_objects())
            .map(|x| if x < o { a.unit(x) } else { b.unit(x - o) + m })
            .collect();
        let triples = a
            .mul
            .triples()
            .chain(b.mul.triples().map(|(p, q, v)| (p + m, q + m, v + m)));
        let mul = PartialTable::from_triples(arrows, arrows, triples).expect("disjoint tables");
        Self::assemble(o + b.num_objects(), src, tgt, unit, inv, mul)
    }

    /// Disjoint union of a list; the empty list gives the empty groupoid.
    pub fn sum(parts: &[Groupoid]) -> Self {
        parts
            .iter()
            .fold(Groupoid::trivial(0), |acc, g| Groupoid::disjoint_union(&acc, g))
    }

    /// The groupoid with objects `X` and arrows `x -> y` the arrows
    /// `f x -> f y` of `self`, for `f: X -> G0`. Arrows are triples
    /// `(g, x, y)` ordered by `g`, then `x`, then `y`. Also returns the
    /// arrow part of the projection back to `self`.
    pub fn pullback_along(&self, f: &FinMap) -> Result<(Groupoid, FinMap)> {
        if f.cod() != self.objects {
            return Err(Error::shape(format!(
                "map into {} objects cannot index a groupoid with {}",
                f.cod().size(),
                self.num_objects()
            )));
        }
        let fibers = f.fibers();
        let mut triples = Vec::new();
        let mut index = std::collections::HashMap::new();
        for g in self.arrows.elements() {
            for &x in &fibers[self.src(g)] {
                for &y in &fibers[self.tgt(g)] {
                    index.insert((g, x, y), triples.len());
                    triples.push((g, x, y));
                }
            }
        }
        let n = triples.len();
        let src = triples.iter().map(|t| t.1).collect();
        let tgt = triples.iter().map(|t| t.2).collect();
        let unit = f.dom().elements().map(|x| index[&(self.unit(f.apply(x)), x, x)]).collect();
        let inv = triples.iter().map(|&(g, x, y)| index[&(self.inv(g), y, x)]).collect();
        let mut mul = PartialTable::new(n, n);
        for (i, &(g1, b, c)) in triples.iter().enumerate() {
            for (j, &(g2, a, b2)) in triples.iter().enumerate() {
                if b == b2 {
                    mul.set(i, j, index[&(self.mul(g1, g2), a, c)]);
                }
            }
        }
        let proj = FinMap::new(self.num_arrows(), triples.iter().map(|t| t.0).collect())?;
        Ok((Self::assemble(f.dom().size(), src, tgt, unit, inv, mul), proj))
    }

    /// Renumbers objects and arrows: object `x` becomes `objects[x]`,
    /// arrow `g` becomes `arrows[g]`. Both must be bijections.
    pub fn relabeled(&self, objects: &FinMap, arrows: &FinMap) -> Result<Groupoid> {
        if !objects.is_bijective() || objects.dom() != self.objects {
            return Err(Error::shape("object relabeling is not a permutation of the objects"));
        }
        if !arrows.is_bijective() || arrows.dom() != self.arrows {
            return Err(Error::shape("arrow relabeling is not a permutation of the arrows"));
        }
        let n = self.num_arrows();
        let (o, a) = (objects.table(), arrows.table());
        let mut src = vec![0; n];
        let mut tgt = vec![0; n];
        let mut inv = vec![0; n];
        for g in 0..n {
            src[a[g]] = o[self.src(g)];
            tgt[a[g]] = o[self.tgt(g)];
            inv[a[g]] = a[self.inv(g)];
        }
        let mut unit = vec![0; self.num_objects()];
        for x in self.objects.elements() {
            unit[o[x]] = a[self.unit(x)];
        }
        let mul = self.mul.relabeled(a, a, |v| a[v]);
        Ok(Self::assemble(self.num_objects(), src, tgt, unit, inv, mul))
    }

    // ----- structure -----

    /// Connected components of the objects, by least member.
    pub fn object_components(&self) -> Quotient {
        Quotient::from_pairs(
            self.objects,
            self.arrows.elements().map(|g| (self.src(g), self.tgt(g))),
        )
    }

    /// The automorphism group of `x`. Element `i` of the table is the
    /// `i`-th endo-arrow of `x` in ascending order; those arrows are
    /// returned alongside.
    pub fn isotropy_group(&self, x: usize) -> Result<(GroupTable, Vec<usize>)> {
        if x >= self.num_objects() {
            return Err(Error::out_of_range("object", x, self.num_objects()));
        }
        let loops = self.hom(x, x);
        let pos = |g: usize| loops.binary_search(&g).expect("closed under composition");
        let table = loops
            .iter()
            .flat_map(|&a| loops.iter().map(move |&b| (a, b)))
            .map(|(a, b)| pos(self.mul(a, b)))
            .collect();
        let group = GroupTable::from_flat(loops.len(), table)?;
        Ok((group, loops))
    }

    /// A presentation of each component by a base object, a tree of arrows
    /// out of it and its isotropy group.
    pub fn frames(&self) -> Frames {
        Frames::new(self)
    }

    /// Some isomorphism `self -> other`, if one exists. Components are
    /// matched by size and isotropy group, then objects in ascending order.
    pub fn find_isomorphism(&self, other: &Groupoid) -> Option<GroupoidIso> {
        if self.num_objects() != other.num_objects() || self.num_arrows() != other.num_arrows() {
            return None;
        }
        let (fa, fb) = (self.frames(), other.frames());
        let mut used = vec![false; fb.len()];
        let mut obj_map = vec![0; self.num_objects()];
        let mut homs = Vec::with_capacity(fa.len());
        for c in 0..fa.len() {
            let matched = (0..fb.len()).find_map(|d| {
                if used[d] || fa.members[c].len() != fb.members[d].len() {
                    return None;
                }
                fa.groups[c].find_isomorphism(&fb.groups[d]).map(|iso| (d, iso))
            });
            let (d, iso) = matched?;
            used[d] = true;
            for (&x, &y) in fa.members[c].iter().zip(&fb.members[d]) {
                obj_map[x] = y;
            }
            homs.push(iso.iter().map(|&k| fb.isotropy[d][k]).collect::<Vec<_>>());
        }
        let tree_images: Vec<usize> = obj_map.iter().map(|&y| fb.tree[y]).collect();
        let arrows = fa.arrow_map(self, other, &tree_images, &homs);
        Some(GroupoidIso {
            objects: FinMap::new(other.num_objects(), obj_map).expect("object images"),
            arrows: FinMap::new(other.num_arrows(), arrows).expect("arrow images"),
        })
    }

    pub fn is_isomorphic(&self, other: &Groupoid) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

/// An isomorphism of groupoids given by its object and arrow bijections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidIso {
    pub objects: FinMap,
    pub arrows: FinMap,
}

impl GroupoidIso {
    /// Checks that the maps are bijections commuting with all structure.
    pub fn verify(&self, from: &Groupoid, to: &Groupoid) -> bool {
        let (o, a) = (&self.objects, &self.arrows);
        o.dom() == from.objects()
            && o.cod() == to.objects()
            && a.dom() == from.arrows()
            && a.cod() == to.arrows()
            && o.is_bijective()
            && a.is_bijective()
            && from.arrows().elements().all(|g| {
                to.src(a.apply(g)) == o.apply(from.src(g))
                    && to.tgt(a.apply(g)) == o.apply(from.tgt(g))
                    && to.inv(a.apply(g)) == a.apply(from.inv(g))
            })
            && from.objects().elements().all(|x| to.unit(o.apply(x)) == a.apply(from.unit(x)))
            && from
                .mul_table()
                .triples()
                .all(|(p, q, v)| to.try_mul(a.apply(p), a.apply(q)) == Some(a.apply(v)))
    }
}

/// Each connected component presented by its least object `b`, a chosen
/// arrow `t_x: b -> x` for every member `x` (least index, the unit at `b`)
/// and the isotropy group at `b`.
#[derive(Clone, Debug)]
pub struct Frames {
    pub components: Quotient,
    pub bases: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    /// `tree[x]` is the chosen arrow from the base of `x`'s component to `x`.
    pub tree: Vec<usize>,
    /// Endo-arrows of each base, ascending; group element `i` is `isotropy[c][i]`.
    pub isotropy: Vec<Vec<usize>>,
    pub groups: Vec<GroupTable>,
    position: Vec<usize>,
}

impl Frames {
    fn new(g: &Groupoid) -> Self {
        let components = g.object_components();
        let bases = components.representatives();
        let members = components.members();
        let mut tree = vec![usize::MAX; g.num_objects()];
        for &b in &bases {
            tree[b] = g.unit(b);
        }
        for a in g.arrows().elements() {
            let (s, t) = (g.src(a), g.tgt(a));
            if s == bases[components.class_of(s)] && tree[t] == usize::MAX {
                tree[t] = a;
            }
        }
        let mut isotropy = Vec::with_capacity(bases.len());
        let mut groups = Vec::with_capacity(bases.len());
        let mut position = vec![usize::MAX; g.num_arrows()];
        for &b in &bases {
            let (group, loops) = g.isotropy_group(b).expect("base is an object of a valid groupoid");
            for (i, &a) in loops.iter().enumerate() {
                position[a] = i;
            }
            isotropy.push(loops);
            groups.push(group);
        }
        Frames {
            components,
            bases,
            members,
            tree,
            isotropy,
            groups,
            position,
        }
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn component_of(&self, x: usize) -> usize {
        self.components.class_of(x)
    }

    /// The isotropy element `t_y⁻¹ · a · t_x` of an arrow `a: x -> y`.
    pub fn isotropy_part(&self, g: &Groupoid, a: usize) -> usize {
        let (x, y) = (g.src(a), g.tgt(a));
        let loop_arrow = g.mul(g.inv(self.tree[y]), g.mul(a, self.tree[x]));
        self.position[loop_arrow]
    }

    /// The arrow `t_y · k · t_x⁻¹` for isotropy element `k` at the base.
    pub fn arrow_from_parts(&self, g: &Groupoid, x: usize, y: usize, k: usize) -> usize {
        let c = self.component_of(x);
        g.mul(self.tree[y], g.mul(self.isotropy[c][k], g.inv(self.tree[x])))
    }

    /// Arrow part of the functor determined by images of the tree arrows
    /// and by a homomorphism on each base's isotropy group (given as target
    /// arrows, indexed by group element): `a ↦ u_y · φ(t_y⁻¹ a t_x) · u_x⁻¹`.
    pub fn arrow_map(
        &self,
        source: &Groupoid,
        target: &Groupoid,
        tree_images: &[usize],
        homs: &[Vec<usize>],
    ) -> Vec<usize> {
        source
            .arrows()
            .elements()
            .map(|a| {
                let (x, y) = (source.src(a), source.tgt(a));
                let k = homs[self.component_of(x)][self.isotropy_part(source, a)];
                target.mul(tree_images[y], target.mul(k, target.inv(tree_images[x])))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::permutations;

    // Reachability by repeated relaxation over the arrow list.
    fn reachability_classes(g: &Groupoid) -> usize {
        let n = g.num_objects();
        let mut reach = vec![vec![false; n]; n];
        for (x, row) in reach.iter_mut().enumerate() {
            row[x] = true;
        }
        for a in g.arrows().elements() {
            reach[g.src(a)][g.tgt(a)] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        (0..n).filter(|&x| (0..x).all(|y| !reach[y][x])).count()
    }

    fn brute_isomorphic(a: &Groupoid, b: &Groupoid) -> bool {
        if a.num_objects() != b.num_objects() || a.num_arrows() != b.num_arrows() {
            return false;
        }
        permutations(a.num_objects()).into_iter().any(|o| {
            permutations(a.num_arrows()).into_iter().any(|p| {
                a.arrows().elements().all(|g| {
                    b.src(p[g]) == o[a.src(g)] && b.tgt(p[g]) == o[a.tgt(g)]
                }) && a.mul_table().triples().all(|(x, y, v)| b.try_mul(p[x], p[y]) == Some(p[v]))
            })
        })
    }

    #[test]
    fn constructors_validate() {
        for n in 0..=5 {
            assert!(Groupoid::trivial(n).validate().is_empty());
            assert!(Groupoid::pair(n).validate().is_empty());
        }
        assert_eq!(Groupoid::pair(1), Groupoid::trivial(1));
        assert_eq!(Groupoid::pair(0), Groupoid::trivial(0));
        let t3 = Groupoid::trivial(3);
        assert_eq!((t3.num_objects(), t3.num_arrows()), (3, 3));
    }

    #[test]
    fn pair_hom_sets_are_singletons() {
        let p = Groupoid::pair(2);
        assert_eq!(p.num_arrows(), 4);
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(p.hom(x, y).len(), 1);
            }
        }
    }

    #[test]
    fn corrupted_inverse_is_reported() {
        let p = Groupoid::pair(3);
        let broken = Groupoid::from_raw(
            p.objects(),
            p.src_map().clone(),
            p.tgt_map().clone(),
            p.unit_map().clone(),
            FinMap::identity(p.arrows()),
            p.mul_table().clone(),
        )
        .unwrap();
        let report = broken.validate();
        assert!(report.contains(Law::InverseLaw), "{report}");
        assert!(matches!(
            Groupoid::new(
                p.objects(),
                p.src_map().clone(),
                p.tgt_map().clone(),
                p.unit_map().clone(),
                FinMap::identity(p.arrows()),
                p.mul_table().clone()
            ),
            Err(Error::Invalid { kind: "groupoid", .. })
        ));
    }

    #[test]
    fn group_groupoids() {
        let z2 = Groupoid::group(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!((z2.num_objects(), z2.num_arrows()), (1, 2));
        assert!(z2.validate().is_empty());
        assert_eq!(Groupoid::group(vec![vec![0]]).unwrap(), Groupoid::trivial(1));
        assert!(matches!(Groupoid::group(vec![vec![0, 1], vec![0, 0]]), Err(Error::NotAGroup(_))));
        let (g, loops) = z2.isotropy_group(0).unwrap();
        assert_eq!((g.order(), loops), (2, vec![0, 1]));
    }

    #[test]
    fn products() {
        let pp = Groupoid::product(&Groupoid::pair(2), &Groupoid::pair(2));
        assert_eq!((pp.num_objects(), pp.num_arrows()), (4, 16));
        assert!(pp.validate().is_empty());
        assert_eq!(Groupoid::product(&Groupoid::trivial(2), &Groupoid::trivial(3)), Groupoid::trivial(6));
        let z3 = Groupoid::from_group(&GroupTable::cyclic(3));
        let one_z3 = Groupoid::product(&Groupoid::trivial(1), &z3);
        assert_eq!(one_z3, z3);
    }

    #[test]
    fn opposites() {
        let z3 = Groupoid::from_group(&GroupTable::dihedral(3));
        for g in [Groupoid::pair(3), z3, Groupoid::trivial(2)] {
            assert_eq!(g.opposite().opposite(), g);
            assert!(g.opposite().validate().is_empty());
        }
        assert_eq!(Groupoid::trivial(3).opposite(), Groupoid::trivial(3));
        let p = Groupoid::pair(2);
        assert!(brute_isomorphic(&p.opposite(), &p));
        let iso = p.opposite().find_isomorphism(&p).unwrap();
        assert!(iso.verify(&p.opposite(), &p));
    }

    #[test]
    fn components() {
        assert_eq!(reachability_classes(&Groupoid::pair(3)), 1);
        assert_eq!(Groupoid::pair(3).object_components().num_classes(), 1);
        assert_eq!(Groupoid::trivial(3).object_components().num_classes(), 3);
        let u = Groupoid::disjoint_union(&Groupoid::pair(2), &Groupoid::trivial(1));
        assert_eq!(reachability_classes(&u), 2);
        assert_eq!(u.object_components().num_classes(), 2);
    }

    #[test]
    fn isotropy() {
        for n in 1..4 {
            let p = Groupoid::pair(n);
            for x in 0..n {
                assert_eq!(p.isotropy_group(x).unwrap().0.order(), 1);
            }
        }
        assert_eq!(Groupoid::trivial(3).isotropy_group(1).unwrap().0.order(), 1);
        assert!(Groupoid::trivial(3).isotropy_group(3).is_err());
    }

    #[test]
    fn isomorphism_search_matches_brute_force() {
        let z2 = Groupoid::from_group(&GroupTable::cyclic(2));
        let cases = [
            Groupoid::trivial(2),
            Groupoid::pair(2),
            Groupoid::disjoint_union(&z2, &Groupoid::trivial(1)),
            Groupoid::disjoint_union(&Groupoid::trivial(1), &z2),
            Groupoid::product(&z2, &Groupoid::pair(2)).opposite(),
        ];
        for a in &cases {
            for b in &cases {
                if a.num_arrows() <= 6 {
                    assert_eq!(a.is_isomorphic(b), brute_isomorphic(a, b));
                }
                if let Some(iso) = a.find_isomorphism(b) {
                    assert!(iso.verify(a, b));
                }
            }
        }
    }

    #[test]
    fn pullback_groupoid_of_surjection() {
        let z2 = Groupoid::from_group(&GroupTable::cyclic(2));
        let f = FinMap::new(1, vec![0, 0, 0]).unwrap();
        let (h, proj) = z2.pullback_along(&f).unwrap();
        assert_eq!((h.num_objects(), h.num_arrows()), (3, 18));
        assert!(h.validate().is_empty());
        assert_eq!(proj.cod().size(), 2);
    }
}
