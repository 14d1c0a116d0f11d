//! Exact arithmetic for information cohomology with Fontené-Ward coefficients.

pub mod asymptotics;
pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod fontene_ward;
pub mod functionals;
pub mod rational;
pub mod structure;
pub mod value;

pub use error::{AsymptoticsError, CohomologyError, FunctionalError, FwError, ParseError, StructureError};
pub use fontene_ward::{AdmissibleSequence, BinomialTable, FwValue};
pub use structure::{InformationStructure, RawStructure, VarId, Violation};
pub use value::PosValue;
