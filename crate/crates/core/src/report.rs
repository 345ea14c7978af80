//! Validation reports shared by every structure in the crate.

use std::fmt;

/// The named identities a structure can violate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    // groupoid
    UnitEndpoints,
    CompositionDomain,
    CompositionEndpoints,
    UnitLaw,
    Associativity,
    InverseEndpoints,
    InverseLaw,
    // actions
    ActionDomain,
    ActionAnchor,
    ActionUnit,
    ActionAssociativity,
    // maps of actions
    AnchorPreservation,
    Equivariance,
    // internal functors
    FunctorEndpoints,
    FunctorUnit,
    FunctorComposition,
    // two-sided actions and bibundles
    LeftAnchorInvariance,
    RightAnchorInvariance,
    Commutation,
    Principality,
    Descent,
    // groupoids internal to actions
    StructureEquivariance,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::UnitEndpoints => "unit endpoints",
            Law::CompositionDomain => "composition domain",
            Law::CompositionEndpoints => "composition endpoints",
            Law::UnitLaw => "unit law",
            Law::Associativity => "associativity",
            Law::InverseEndpoints => "inverse endpoints",
            Law::InverseLaw => "inverse law",
            Law::ActionDomain => "action domain",
            Law::ActionAnchor => "action anchor",
            Law::ActionUnit => "action unit",
            Law::ActionAssociativity => "action associativity",
            Law::AnchorPreservation => "anchor preservation",
            Law::Equivariance => "equivariance",
            Law::FunctorEndpoints => "functor endpoints",
            Law::FunctorUnit => "functor unit",
            Law::FunctorComposition => "functor composition",
            Law::LeftAnchorInvariance => "left anchor invariance",
            Law::RightAnchorInvariance => "right anchor invariance",
            Law::Commutation => "commutation",
            Law::Principality => "principality",
            Law::Descent => "descent",
            Law::StructureEquivariance => "structure equivariance",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.law, self.detail)
    }
}

/// Instances recorded per law; a corrupted table can break one law at
/// thousands of places and the first few are enough to locate it.
const MAX_PER_LAW: usize = 4;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, law: Law, detail: impl Into<String>) {
        if self.violations.iter().filter(|v| v.law == law).count() < MAX_PER_LAW {
            self.violations.push(Violation {
                law,
                detail: detail.into(),
            });
        }
    }

    /// Lazily formatted variant of [`push`](Self::push) for hot loops.
    pub fn check(&mut self, ok: bool, law: Law, detail: impl FnOnce() -> String) {
        if !ok {
            self.push(law, detail());
        }
    }

    /// Appends `other`, prefixing each detail with `scope`.
    pub fn merge_scoped(&mut self, scope: &str, other: ValidationReport) {
        for v in other.violations {
            self.push(v.law, format!("{scope}: {}", v.detail));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn contains(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    /// Distinct violated laws in first-seen order.
    pub fn laws(&self) -> Vec<Law> {
        let mut out = Vec::new();
        for v in &self.violations {
            if !out.contains(&v.law) {
                out.push(v.law);
            }
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
