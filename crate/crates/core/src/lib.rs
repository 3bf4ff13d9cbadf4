//! Exact algebra of dual flag area measures and their local additive
//! kinematic formulas.

pub mod cli;
pub mod combinat;
pub mod error;
pub mod exterior;
pub mod invariant;
pub mod kinematics;
pub mod linalg;
pub mod measures;
pub mod oracle;
pub mod render;
pub mod report;
pub mod rotation;
pub mod scalar;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub struct ReadmeDoctests;

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    pub mod scalars {}
    #[doc = include_str!("../../../book/src/rotation.md")]
    pub mod rotation {}
    #[doc = include_str!("../../../book/src/flag.md")]
    pub mod flag {}
    #[doc = include_str!("../../../book/src/measures.md")]
    pub mod measures {}
    #[doc = include_str!("../../../book/src/kinematics.md")]
    pub mod kinematics {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
