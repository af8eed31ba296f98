//! Interpreter and equivalence checker for a calculus of synchronising
//! wires.
//!
//! Terms denote components with an upper and a lower boundary of signal
//! wires. Composition `;` fuses the lower boundary of one component with
//! the upper boundary of the next, synchronising on the shared signals;
//! tensor `*` places components side by side; `+` is external choice;
//! `rec` ties behaviour loops; a prefix `<u/v>.P` fires one synchronised
//! step matching the patterns `u` above and `v` below. Absence of signal is
//! explicit (written `_`), so a component always moves — possibly silently
//! — and transition relations are saturated with silent padding, making
//! weak and strong bisimilarity coincide.
//!
//! The crate exposes the pipeline end to end: parsing ([`parse`]), sorting
//! ([`sorting`]), the transition engine ([`sos`]), reachable-graph
//! exploration and serialisation ([`lts`]), bisimilarity with witnesses and
//! counterexamples ([`equivalence`]), the constant library, term generator
//! and law harness ([`stdlib`]), and the directed dialect where every wire
//! carries a direction marker ([`directed`]).

pub mod directed;
pub mod equivalence;
pub mod error;
pub mod exec;
pub mod lts;
pub mod parse;
pub mod sorting;
pub mod sos;
pub mod stdlib;
pub mod syntax;

pub use error::Error;
pub use exec::ExecMode;
pub use lts::{explore, Lts};
pub use sorting::{infer, infer_closed, Sort, Word};
pub use sos::{Engine, Label, LabelAtom};
pub use syntax::{Alphabet, Mode, Term};
