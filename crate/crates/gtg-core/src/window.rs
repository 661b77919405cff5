//! Finite truncation parameters and tri-state verdicts.
//!
//! Infinite-group decisions are only ever certified within a window; a
//! verdict never silently extrapolates beyond it.

use std::fmt;

use num::BigRational;

use crate::coeff::CoeffVector;
use crate::group::{ratio_string, Element};

/// Truncation parameters for windowed decisions.
///
/// `bound` is the coordinate box radius for integer and rational carriers
/// (finite groups are always fully enumerated), `depth_n` caps the `n`
/// probed in divided-set chains, and `budget` caps enumerated elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub bound: u64,
    pub depth_n: u64,
    pub budget: u64,
}

impl Window {
    pub fn new(bound: u64, depth_n: u64, budget: u64) -> Self {
        assert!(
            bound >= 1 && depth_n >= 1 && budget >= 1,
            "window parameters must be positive"
        );
        Window {
            bound,
            depth_n,
            budget,
        }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window {
            bound: 1_000_000,
            depth_n: 64,
            budget: 100_000_000,
        }
    }
}

/// Witness payloads attached to verdicts. A failure witness always
/// re-checks against the defining predicate of the operation that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Element(Element),
    Pair(Element, Element),
    /// A pair in the `m`-divided set whose sum escapes the base set.
    EscapeAt {
        m: u64,
        x: Element,
        y: Element,
    },
    /// One escape pair per divided-set level, certifying that no level works.
    EscapeFamily(Vec<(u64, Element, Element)>),
    Coeff(CoeffVector),
    /// A violated growth inequality at step `n`; all values exact.
    Growth {
        n: usize,
        lhs: BigRational,
        eps: BigRational,
        vxn: BigRational,
    },
    /// A nontrivial cyclic subgroup inside the probed set.
    CyclicSubgroup {
        generator: Element,
        elements: Vec<Element>,
    },
    Elements(Vec<Element>),
    GammaValue(u64),
    LevelIndex(u64),
    ExponentCertificate(u64),
    Text(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Element(e) => write!(f, "{e}"),
            Witness::Pair(x, y) => write!(f, "({x}, {y})"),
            Witness::EscapeAt { m, x, y } => write!(f, "m={m}: ({x}) + ({y})"),
            Witness::EscapeFamily(v) => {
                write!(f, "escapes at m=1..{}", v.len())
            }
            Witness::Coeff(k) => write!(f, "{k}"),
            Witness::Growth { n, lhs, eps, vxn } => write!(
                f,
                "n={n}: lhs={} eps={} v(x_n)={}",
                ratio_string(lhs),
                ratio_string(eps),
                ratio_string(vxn)
            ),
            Witness::CyclicSubgroup { generator, .. } => write!(f, "<{generator}>"),
            Witness::Elements(v) => {
                write!(f, "[")?;
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "]")
            }
            Witness::GammaValue(m) => write!(f, "gamma={m}"),
            Witness::LevelIndex(m) => write!(f, "m={m}"),
            Witness::ExponentCertificate(e) => write!(f, "exponent={e}"),
            Witness::Text(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Holds => write!(f, "holds"),
            Status::Fails => write!(f, "fails"),
            Status::Unknown => write!(f, "unknown"),
        }
    }
}

/// Tri-state outcome of a windowed decision.
///
/// `exact` records whether the verdict is window-independent (finite groups
/// and genuine counterexample witnesses) or carries a window caveat.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub window: Window,
    pub exact: bool,
}

impl Verdict {
    pub fn holds(window: Window, exact: bool) -> Self {
        Verdict {
            status: Status::Holds,
            witness: None,
            window,
            exact,
        }
    }

    pub fn holds_with(witness: Witness, window: Window, exact: bool) -> Self {
        Verdict {
            status: Status::Holds,
            witness: Some(witness),
            window,
            exact,
        }
    }

    pub fn fails_with(witness: Witness, window: Window, exact: bool) -> Self {
        Verdict {
            status: Status::Fails,
            witness: Some(witness),
            window,
            exact,
        }
    }

    pub fn fails(window: Window, exact: bool) -> Self {
        Verdict {
            status: Status::Fails,
            witness: None,
            window,
            exact,
        }
    }

    pub fn unknown(window: Window) -> Self {
        Verdict {
            status: Status::Unknown,
            witness: None,
            window,
            exact: false,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn is_unknown(&self) -> bool {
        self.status == Status::Unknown
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        if let Some(w) = &self.witness {
            write!(f, " [{w}]")?;
        }
        if !self.exact {
            write!(f, " (within window)")?;
        }
        Ok(())
    }
}
