//! The nine product kinds and how each specialises the indented product.

use core::fmt;
use core::str::FromStr;

use crate::error::Error;

/// A slot of the indented triple `(φ, ψ, θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Phi,
    Psi,
    Theta,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Phi, Component::Psi, Component::Theta];

    pub fn index(self) -> usize {
        match self {
            Component::Phi => 0,
            Component::Psi => 1,
            Component::Theta => 2,
        }
    }
}

/// Source of one slot of the indented triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// The `i`-th state supplied for the factor.
    Input(usize),
    /// The delta state, killing every nonempty word.
    Delta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProductKind {
    Free,
    Boolean,
    Monotone,
    AntiMonotone,
    CFree,
    CMonotone,
    CAntiMonotone,
    OFree,
    Indented,
}

impl ProductKind {
    pub const ALL: [ProductKind; 9] = [
        ProductKind::Free,
        ProductKind::Boolean,
        ProductKind::Monotone,
        ProductKind::AntiMonotone,
        ProductKind::CFree,
        ProductKind::CMonotone,
        ProductKind::CAntiMonotone,
        ProductKind::OFree,
        ProductKind::Indented,
    ];

    /// Number of states supplied per factor.
    pub fn arity(self) -> usize {
        use ProductKind::*;
        match self {
            Free | Boolean | Monotone | AntiMonotone => 1,
            CFree | CMonotone | CAntiMonotone | OFree => 2,
            Indented => 3,
        }
    }

    /// How the supplied states fill `(φ, ψ, θ)` of the indented product.
    pub fn slots(self) -> [Slot; 3] {
        use ProductKind::*;
        use Slot::*;
        match self {
            Free => [Input(0), Input(0), Input(0)],
            Boolean => [Input(0), Delta, Delta],
            Monotone => [Input(0), Input(0), Delta],
            AntiMonotone => [Input(0), Delta, Input(0)],
            CFree => [Input(0), Input(1), Input(1)],
            CMonotone => [Input(0), Input(1), Delta],
            CAntiMonotone => [Input(0), Delta, Input(1)],
            OFree => [Input(0), Input(0), Input(1)],
            Indented => [Input(0), Input(1), Input(2)],
        }
    }

    /// Components of the indented product that make up this product, in the
    /// order of the supplied states.
    pub fn outputs(self) -> &'static [Component] {
        use Component::*;
        use ProductKind::*;
        match self {
            Free | Boolean | Monotone | AntiMonotone => &[Phi],
            CFree | CMonotone => &[Phi, Psi],
            CAntiMonotone => &[Phi, Theta],
            OFree => &[Psi, Theta],
            Indented => &[Phi, Psi, Theta],
        }
    }

    pub fn name(self) -> &'static str {
        use ProductKind::*;
        match self {
            Free => "free",
            Boolean => "boolean",
            Monotone => "monotone",
            AntiMonotone => "antimonotone",
            CFree => "cfree",
            CMonotone => "cmonotone",
            CAntiMonotone => "cantimonotone",
            OFree => "ofree",
            Indented => "indented",
        }
    }
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProductKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        ProductKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase().replace(['-', '_'], ""))
            .ok_or(Error::UnknownKind)
    }
}
