use std::fmt;

use thiserror::Error;

/// Which multiplication an ideal, annihilator or action refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::TwoSided => "two-sided",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedSpec(String),

    #[error("axiom `{axiom}` fails at {witness:?}")]
    AxiomViolation {
        axiom: &'static str,
        witness: Vec<usize>,
    },

    #[error("module has no {0} action")]
    MissingAction(Side),

    #[error("subset {0:?} is not an ideal of the declared side")]
    NotAnIdeal(Vec<usize>),

    #[error("ring has {count} ideals, above the enumeration bound {bound}")]
    TooManyIdeals { count: usize, bound: usize },

    #[error("right Ore condition fails for r={r}, t={t}")]
    NotOre { r: usize, t: usize },

    #[error("filters are not nested")]
    NotNested,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("perfectness criteria disagree: {0}")]
    CriteriaDisagree(String),

    #[error("torsion element {element} is mapped to non-torsion element {image}")]
    TorsionNotPreserved { element: usize, image: usize },

    #[error("no extension exists")]
    NoExtension,

    #[error("formula strategy inapplicable: {0}")]
    FormulaInapplicable(String),

    #[error("search space too large: carrier of size {size} exceeds bound {bound}")]
    SearchSpaceTooLarge { size: usize, bound: usize },

    #[error("extension missing: {0}")]
    ExtensionMissing(String),

    #[error("equivalent characterizations disagree: {0}")]
    EquivalenceBroken(String),

    #[error("map is not well defined on the tensor product: {0}")]
    IllDefined(String),

    #[error("law `{law}` fails at {witness:?}")]
    LawViolation {
        law: &'static str,
        witness: Vec<usize>,
    },

    #[error("actions are incompatible: {0}")]
    IncompatibleActions(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
