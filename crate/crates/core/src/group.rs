//! Finite groups as multiplication tables: validation, the standard small
//! families, homomorphism enumeration, isomorphism and canonical forms.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Validates a square table. Errors name the first failed axiom.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != order) {
            return Err(Error::NotAGroup(format!(
                "row {i} has {} entries, expected {order}",
                r.len()
            )));
        }
        Self::from_flat(order, rows.into_iter().flatten().collect())
    }

    pub fn from_flat(order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::NotAGroup("empty set has no identity".into()));
        }
        if table.len() != order * order {
            return Err(Error::NotAGroup(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        let at = |a: usize, b: usize| table[a * order + b];
        if let Some(i) = table.iter().position(|&v| v >= order) {
            return Err(Error::NotAGroup(format!(
                "closure fails: {} * {} = {} is not an element",
                i / order,
                i % order,
                table[i]
            )));
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(order);
        for a in 0..order {
            let b = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::NotAGroup(format!("inverse law fails: {a} has no inverse")))?;
            inverse.push(b);
        }
        Ok(GroupTable {
            order,
            table,
            identity,
            inverse,
        })
    }

    fn from_fn(order: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let table = (0..order * order).map(|i| f(i / order, i % order)).collect();
        Self::from_flat(order, table).expect("constructor produces a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z/n`; panics for `n = 0`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        Self::from_fn(n, |a, b| (a + b) % n)
    }

    /// Symmetries of the regular `n`-gon, order `2n`. Element `r^k s^f` is
    /// numbered `2k + f`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0, "dihedral group of a 0-gon");
        Self::from_fn(2 * n, |a, b| {
            let (k1, f1) = (a / 2, a % 2);
            let (k2, f2) = (b / 2, b % 2);
            // r^k1 s^f1 r^k2 s^f2 = r^(k1 ± k2) s^(f1+f2)
            let k = if f1 == 0 { k1 + k2 } else { k1 + n - k2 } % n;
            2 * k + (f1 ^ f2)
        })
    }

    /// The quaternion group of order 8 with `±1, ±i, ±j, ±k` numbered
    /// `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // unit index: 0=1, 1=i, 2=j, 3=k; product of units and its sign
        fn unit_mul(a: usize, b: usize) -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 1) => (3, true),
                (2, 3) => (1, false),
                (3, 2) => (1, true),
                (3, 1) => (2, false),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        }
        Self::from_fn(8, |a, b| {
            let (u, neg) = unit_mul(a / 2, b / 2);
            let sign = (a % 2) ^ (b % 2) ^ usize::from(neg);
            2 * u + sign
        })
    }

    /// All permutations of `0..n` in lexicographic order, composed as
    /// functions: `(p * q)(i) = p(q(i))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("a permutation");
        let order = perms.len();
        let table = (0..order * order)
            .map(|i| {
                let (p, q) = (&perms[i / order], &perms[i % order]);
                let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                index(&pq)
            })
            .collect();
        Self::from_flat(order, table).expect("symmetric group")
    }

    /// `a × b`, with `(x, y)` numbered `x * |b| + y`.
    pub fn direct_product(a: &GroupTable, b: &GroupTable) -> Self {
        let m = b.order;
        Self::from_fn(a.order * m, |x, y| {
            a.mul(x / m, y / m) * m + b.mul(x % m, y % m)
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn flat(&self) -> &[usize] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders, a cheap isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    /// Membership vector of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        member
    }

    /// A generating tuple chosen greedily by index, irredundant by construction.
    pub fn generating_tuple(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut member = self.subgroup(&gens);
        while let Some(g) = member.iter().position(|m| !m) {
            gens.push(g);
            member = self.subgroup(&gens);
        }
        gens
    }

    /// Relabels elements along the bijection `to_new[old] = new`.
    pub fn relabeled(&self, to_new: &[usize]) -> GroupTable {
        let mut from_new = vec![0; self.order];
        for (old, &new) in to_new.iter().enumerate() {
            from_new[new] = old;
        }
        Self::from_fn(self.order, |a, b| to_new[self.mul(from_new[a], from_new[b])])
    }

    /// Extends a generator assignment to a homomorphism into `target`, if
    /// one exists. Consistency is checked on every edge of the Cayley graph.
    pub fn extend_homomorphism(
        &self,
        gens: &[usize],
        images: &[usize],
        target: &GroupTable,
    ) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order];
        map[self.identity] = target.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let want = target.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = want;
                    queue.push_back(y);
                } else if map[y] != want {
                    return None;
                }
            }
        }
        (!map.contains(&usize::MAX)).then_some(map)
    }

    /// Every homomorphism `self -> target`, ordered by generator images.
    pub fn homomorphisms(&self, target: &GroupTable) -> Vec<Vec<usize>> {
        let gens = self.generating_tuple();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let target_orders: Vec<usize> = (0..target.order).map(|a| target.element_order(a)).collect();
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(gens.len());
        self.hom_search(&gens, &orders, &target_orders, target, false, &mut images, &mut |m| {
            out.push(m);
            true
        });
        out
    }

    /// An isomorphism `self -> other`, as the image of each element.
    pub fn find_isomorphism(&self, other: &GroupTable) -> Option<Vec<usize>> {
        if self.order != other.order || self.order_profile() != other.order_profile() {
            return None;
        }
        let gens = self.generating_tuple();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let target_orders: Vec<usize> = (0..other.order).map(|a| other.element_order(a)).collect();
        let mut found = None;
        let mut images = Vec::with_capacity(gens.len());
        self.hom_search(&gens, &orders, &target_orders, other, true, &mut images, &mut |m| {
            found = Some(m);
            false
        });
        found
    }

    pub fn is_isomorphic(&self, other: &GroupTable) -> bool {
        self.find_isomorphism(other).is_some()
    }

    // Depth-first over generator images. Partial assignments are pruned by
    // checking that the generated subgroup maps consistently; `visit`
    // returns false to stop.
    #[allow(clippy::too_many_arguments)]
    fn hom_search(
        &self,
        gens: &[usize],
        orders: &[usize],
        target_orders: &[usize],
        target: &GroupTable,
        bijective: bool,
        images: &mut Vec<usize>,
        visit: &mut dyn FnMut(Vec<usize>) -> bool,
    ) -> bool {
        let depth = images.len();
        if depth == gens.len() {
            let Some(map) = self.extend_homomorphism(gens, images, target) else {
                return true;
            };
            if bijective && !is_permutation(&map) {
                return true;
            }
            return visit(map);
        }
        for img in 0..target.order {
            let ok = if bijective {
                target_orders[img] == orders[depth]
            } else {
                orders[depth].is_multiple_of(target_orders[img])
            };
            if !ok {
                continue;
            }
            images.push(img);
            let sub: Vec<bool> = self.subgroup(&gens[..=depth]);
            let sub_gens = &gens[..=depth];
            let consistent = self.partial_consistent(sub_gens, images, &sub, target, bijective);
            if consistent && !self.hom_search(gens, orders, target_orders, target, bijective, images, visit) {
                images.pop();
                return false;
            }
            images.pop();
        }
        true
    }

    fn partial_consistent(
        &self,
        gens: &[usize],
        images: &[usize],
        sub: &[bool],
        target: &GroupTable,
        bijective: bool,
    ) -> bool {
        let mut map = vec![usize::MAX; self.order];
        map[self.identity] = target.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let want = target.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = want;
                    queue.push_back(y);
                } else if map[y] != want {
                    return false;
                }
            }
        }
        if bijective {
            let mut seen = vec![false; target.order];
            for (x, &inside) in sub.iter().enumerate() {
                if inside && std::mem::replace(&mut seen[map[x]], true) {
                    return false;
                }
            }
        }
        true
    }

    /// A table that is equal for two groups exactly when they are
    /// isomorphic, together with the relabeling that produces it.
    ///
    /// Every irredundant generating tuple of minimum length induces a
    /// breadth-first labeling; the canonical table is the lexicographically
    /// least relabeled table. Intended for groups of order up to a few dozen.
    pub fn canonical_form(&self) -> (CanonicalGroup, Vec<usize>) {
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        let rank = self.generating_tuple().len();
        let rank = (0..=rank)
            .find(|&k| self.has_generating_tuple(k))
            .expect("the greedy tuple generates");
        let mut tuple = Vec::with_capacity(rank);
        self.each_irredundant_tuple(rank, &mut tuple, &mut |t| {
            let labels = self.bfs_labels(t);
            let table = self.relabeled(&labels).table;
            match &best {
                Some((b, _)) if *b <= table => {}
                _ => best = Some((table, labels)),
            }
        });
        let (table, labels) = best.expect("at least one generating tuple");
        (
            CanonicalGroup {
                order: self.order,
                table,
            },
            labels,
        )
    }

    fn has_generating_tuple(&self, k: usize) -> bool {
        let mut found = false;
        let mut tuple = Vec::with_capacity(k);
        self.each_irredundant_tuple(k, &mut tuple, &mut |_| found = true);
        found
    }

    // Calls `f` on each irredundant tuple of length `k` that generates.
    fn each_irredundant_tuple(&self, k: usize, tuple: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        let sub = self.subgroup(tuple);
        if tuple.len() == k {
            if sub.iter().all(|&m| m) {
                f(tuple);
            }
            return;
        }
        for g in 0..self.order {
            if !sub[g] {
                tuple.push(g);
                self.each_irredundant_tuple(k, tuple, f);
                tuple.pop();
            }
        }
    }

    // Label identity 0, then number elements in order of discovery by
    // right multiplication with the generators.
    fn bfs_labels(&self, gens: &[usize]) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.order];
        label[self.identity] = 0;
        let mut next = 1;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if label[y] == usize::MAX {
                    label[y] = next;
                    next += 1;
                    queue.push_back(y);
                }
            }
        }
        label
    }
}

/// The canonical representative of a group's isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalGroup {
    order: usize,
    table: Vec<usize>,
}

impl CanonicalGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn to_group(&self) -> GroupTable {
        GroupTable::from_flat(self.order, self.table.clone()).expect("canonical tables are groups")
    }
}

impl fmt::Display for CanonicalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.to_group();
        write!(f, "order {}", self.order)?;
        if self.order > 1 {
            let profile = g.order_profile();
            write!(f, " (element orders {profile:?}")?;
            if g.is_abelian() {
                f.write_str(", abelian")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub(crate) fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter().all(|&y| y < seen.len() && !std::mem::replace(&mut seen[y], true))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("pivot");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

/// One representative of each isomorphism class of groups of order at most
/// `max_order`, for `max_order <= 8`.
pub fn small_groups(max_order: usize) -> Vec<GroupTable> {
    assert!(max_order <= 8, "small_groups covers orders up to 8");
    let z = GroupTable::cyclic;
    let all = [
        z(1),
        z(2),
        z(3),
        z(4),
        GroupTable::direct_product(&z(2), &z(2)),
        z(5),
        z(6),
        GroupTable::dihedral(3),
        z(7),
        z(8),
        GroupTable::direct_product(&z(4), &z(2)),
        GroupTable::direct_product(&GroupTable::direct_product(&z(2), &z(2)), &z(2)),
        GroupTable::dihedral(4),
        GroupTable::quaternion(),
    ];
    all.into_iter().filter(|g| g.order() <= max_order).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute-force search over all bijections; independent of the generator
    // machinery above.
    fn brute_isomorphic(a: &GroupTable, b: &GroupTable) -> bool {
        a.order() == b.order()
            && permutations(a.order()).iter().any(|p| {
                (0..a.order()).all(|x| (0..a.order()).all(|y| p[a.mul(x, y)] == b.mul(p[x], p[y])))
            })
    }

    fn brute_hom_count(a: &GroupTable, b: &GroupTable) -> usize {
        let n = a.order();
        let m = b.order();
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
            if (0..n).all(|x| (0..n).all(|y| f[a.mul(x, y)] == b.mul(f[x], f[y]))) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn constructors_are_groups() {
        for g in small_groups(8) {
            GroupTable::from_flat(g.order(), g.flat().to_vec()).unwrap();
        }
        assert_eq!(GroupTable::symmetric(3).order(), 6);
        assert!(!GroupTable::symmetric(3).is_abelian());
        assert!(!GroupTable::quaternion().is_abelian());
        assert_eq!(GroupTable::quaternion().order_profile(), vec![1, 2, 4, 4, 4, 4, 4, 4]);
        assert_eq!(GroupTable::dihedral(4).order_profile(), vec![1, 2, 2, 2, 2, 2, 4, 4]);
    }

    #[test]
    fn rejects_non_groups() {
        // a magma whose only associativity failure is found by brute force
        let magma = vec![vec![0, 1], vec![0, 0]];
        let mut failing = None;
        'outer: for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    if magma[magma[a][b]][c] != magma[a][magma[b][c]] {
                        failing = Some((a, b, c));
                        break 'outer;
                    }
                }
            }
        }
        let (a, b, c) = failing.expect("magma is not associative");
        let err = GroupTable::new(magma).unwrap_err();
        assert_eq!(err, Error::NotAGroup(format!("associativity fails at ({a}, {b}, {c})")));

        assert!(matches!(GroupTable::new(vec![]), Err(Error::NotAGroup(_))));
        assert!(matches!(GroupTable::new(vec![vec![0, 0], vec![0, 0]]), Err(Error::NotAGroup(_))));
        assert!(matches!(GroupTable::new(vec![vec![0, 2], vec![1, 0]]), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn isomorphism_agrees_with_brute_force() {
        let groups = small_groups(6);
        for a in &groups {
            for b in &groups {
                assert_eq!(a.is_isomorphic(b), brute_isomorphic(a, b));
                assert_eq!(a.canonical_form().0 == b.canonical_form().0, brute_isomorphic(a, b));
            }
        }
    }

    #[test]
    fn canonical_form_survives_relabeling() {
        let q = GroupTable::quaternion();
        let d = GroupTable::dihedral(4);
        let perm = [3, 7, 0, 5, 1, 6, 2, 4];
        assert_eq!(q.relabeled(&perm).canonical_form().0, q.canonical_form().0);
        assert_eq!(d.relabeled(&perm).canonical_form().0, d.canonical_form().0);
        assert_ne!(q.canonical_form().0, d.canonical_form().0);
        let iso = q.find_isomorphism(&q.relabeled(&perm)).unwrap();
        assert!(is_permutation(&iso));
    }

    #[test]
    fn hom_counts_match_brute_force() {
        let groups = small_groups(4);
        for a in &groups {
            for b in &groups {
                assert_eq!(a.homomorphisms(b).len(), brute_hom_count(a, b), "{a:?} -> {b:?}");
            }
        }
        let v4 = GroupTable::direct_product(&GroupTable::cyclic(2), &GroupTable::cyclic(2));
        let s3 = GroupTable::symmetric(3);
        assert_eq!(v4.homomorphisms(&s3).len(), brute_hom_count(&v4, &s3));
    }

    #[test]
    fn permutations_in_order() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }
}
