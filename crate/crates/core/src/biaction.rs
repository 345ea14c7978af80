//! Sets acted on by two groupoids at once, compatibly.

use std::sync::Arc;

use crate::action::GAction;
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet, Quotient};
use crate::groupoid::Groupoid;
use crate::report::{Law, ValidationReport};
use crate::table::PartialTable;

/// A carrier with an action of `left` and an action of `right` such that
/// each anchor is invariant under the other action and the actions commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiAction {
    left: GAction,
    right: GAction,
}

impl BiAction {
    pub fn from_raw(left: GAction, right: GAction) -> Result<Self> {
        if left.carrier() != right.carrier() {
            return Err(Error::shape(format!(
                "left carrier has {} elements, right carrier {}",
                left.len(),
                right.len()
            )));
        }
        Ok(BiAction { left, right })
    }

    pub fn new(left: GAction, right: GAction) -> Result<Self> {
        let b = Self::from_raw(left, right)?;
        let report = b.validate();
        if report.is_empty() {
            Ok(b)
        } else {
            Err(Error::Invalid {
                kind: "two-sided action",
                report,
            })
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        r.merge_scoped("left action", self.left.validate());
        r.merge_scoped("right action", self.right.validate());
        for (g, x, gx) in self.right.act_table().triples() {
            r.check(self.left.anchor(gx) == self.left.anchor(x), Law::LeftAnchorInvariance, || {
                format!("right arrow {g} moves {x} to {gx} in another left fiber")
            });
        }
        for (h, x, hx) in self.left.act_table().triples() {
            r.check(self.right.anchor(hx) == self.right.anchor(x), Law::RightAnchorInvariance, || {
                format!("left arrow {h} moves {x} to {hx} in another right fiber")
            });
        }
        for (h, x, hx) in self.left.act_table().triples() {
            for g in self.right.groupoid().arrows().elements() {
                let (Some(gx), Some(ghx)) = (self.right.try_act(g, x), self.right.try_act(g, hx)) else {
                    continue;
                };
                let hgx = self.left.try_act(h, gx);
                r.check(hgx == Some(ghx), Law::Commutation, || {
                    format!("left arrow {h} and right arrow {g} do not commute on {x}")
                });
            }
        }
        r
    }

    pub fn left(&self) -> &GAction {
        &self.left
    }

    pub fn right(&self) -> &GAction {
        &self.right
    }

    pub fn into_parts(self) -> (GAction, GAction) {
        (self.left, self.right)
    }

    pub fn carrier(&self) -> FinSet {
        self.left.carrier()
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn left_groupoid(&self) -> &Arc<Groupoid> {
        self.left.groupoid_arc()
    }

    pub fn right_groupoid(&self) -> &Arc<Groupoid> {
        self.right.groupoid_arc()
    }

    /// Both sides exchanged.
    pub fn swapped(&self) -> BiAction {
        BiAction {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// The single action of `left × right`, with `(h, g)` acting as
    /// `h · (g · x)`. Requires `product` to be `Groupoid::product(left, right)`.
    pub fn as_product_action(&self, product: Arc<Groupoid>) -> Result<GAction> {
        let (h, g) = (self.left.groupoid(), self.right.groupoid());
        if *product != Groupoid::product(h, g) {
            return Err(Error::shape("groupoid is not the product of the two sides"));
        }
        let (n0, n1) = (g.num_objects(), g.num_arrows());
        let anchor = FinMap::from_fn(self.carrier(), product.objects(), |x| {
            self.left.anchor(x) * n0 + self.right.anchor(x)
        });
        let mut act = PartialTable::new(product.num_arrows(), self.len());
        for x in self.carrier().elements() {
            for a in self.left.arrows_at(x) {
                for b in self.right.arrows_at(x) {
                    let gx = self.right.act(b, x);
                    if let Some(y) = self.left.try_act(a, gx) {
                        act.set(a * n1 + b, x, y);
                    }
                }
            }
        }
        GAction::from_raw(product, anchor, act)
    }

    /// The right action induced on the orbits of the left action.
    pub fn left_orbits(&self) -> (Quotient, GAction) {
        let q = self.left.orbits();
        let induced = self.right.on_quotient(&q);
        (q, induced)
    }

    /// Both actions induced on a quotient compatible with each of them.
    pub fn on_quotient(&self, q: &Quotient) -> BiAction {
        BiAction {
            left: self.left.on_quotient(q),
            right: self.right.on_quotient(q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupTable;

    #[test]
    fn arrows_with_two_sided_composition() {
        // G1 acted on by post-composition and by pre-composition with inverses
        let g = Arc::new(Groupoid::from_group(&GroupTable::symmetric(3)));
        let left = GAction::arrows_acting(g.clone());
        let n = g.num_arrows();
        let anchor = FinMap::from_fn(n, 1, |_| 0);
        let triples = (0..n).flat_map(|a| (0..n).map(move |x| (a, x))).map(|(a, x)| (a, x, g.mul(x, g.inv(a))));
        let right = GAction::new(g.clone(), anchor, PartialTable::from_triples(n, n, triples).unwrap()).unwrap();
        let b = BiAction::new(left, right).unwrap();
        let product = Arc::new(Groupoid::product(&g, &g));
        let single = b.as_product_action(product).unwrap();
        assert!(single.validate().is_empty());
        let (q, induced) = b.left_orbits();
        assert_eq!(q.num_classes(), 1);
        assert!(induced.validate().is_empty());
    }

    #[test]
    fn non_commuting_actions_are_reported() {
        // S3 acting on itself on the left twice: left multiplications do not commute
        let g = Arc::new(Groupoid::from_group(&GroupTable::symmetric(3)));
        let left = GAction::arrows_acting(g.clone());
        let b = BiAction::from_raw(left.clone(), left).unwrap();
        assert!(b.validate().contains(Law::Commutation));
    }
}
