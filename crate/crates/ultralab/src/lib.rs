//! Pro-finite ultrametric Fraïssé limits, made executable at finite depth.
//!
//! Finite relational structures and bounded amalgamation deciders live in
//! [`structure`] and [`amalgamation`]. Cochains, their limit branches and the
//! dyadic ultrametric are in [`cochain`], the Seq/Lim adjunction in [`seqlim`].
//! [`rado`] holds the explicit Rado graph constructions and the pro-Rado
//! cochain, [`dynamics`] the back-and-forth and shift machinery, and
//! [`linorder`] the lexicographic rational model.

pub mod amalgamation;
pub mod cli;
pub mod cochain;
pub mod dynamics;
pub mod error;
pub mod level;
pub mod linorder;
pub mod rado;
pub mod seqlim;
pub mod structure;

pub use error::{Budget, Error, Result};
pub use level::{Agreement, Level};
