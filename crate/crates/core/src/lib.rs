//! Default reasoning with epsilon belief functions.
//!
//! The crate decides nonmonotonic entailment `alpha |~ beta` over a
//! propositional default base with several engines:
//!
//! * [`zcore`]: tolerance, Z-stratification, the least-commitment (LC) consonant
//!   construction, system Z and system P.
//! * [`lcd`]: Dempster combination of per-rule simple support functions with
//!   least-commitment constraints on the infinitesimals (LCD).
//! * [`altorders`]: penalty, lexicographic and preferred-subtheories orders on
//!   top of the Z-stratification.
//!
//! [`ratbf`] is an exact rational belief-function kernel used to check the
//! symbolic engines numerically, and [`epsalg`] decides the order-of-magnitude
//! comparisons they rely on.

pub mod altorders;
pub mod epsalg;
pub mod error;
pub mod gen;
pub mod lcd;
pub mod oracle;
pub mod prop;
pub mod ratbf;
pub mod zcore;

pub use epsalg::{DegreeSystem, EpsSymbol, EpsTerm, OrderVerdict};
pub use error::{Error, Result};
pub use lcd::LcdModel;
pub use prop::{
    models, parse_formula, DefaultBase, DefaultRule, Formula, KnowledgeBase, RuleId, Vocabulary,
    World, WorldSet,
};
pub use ratbf::MassAssignment;
pub use zcore::{ConsonantEbf, Stratification};
