//! Exact computer algebra for modular linear differential operators.

pub mod annihilate;
pub mod error;
pub mod families;
pub mod linalg;
pub mod merore;
pub mod mldo;
pub mod modform;
pub mod qseries;
pub mod scalar;
pub mod spectra;

pub use error::{Error, Result};
pub use merore::MerForm;
pub use mldo::Mldo;
pub use modform::{ModForm, QuasiModForm};
pub use qseries::QSeries;
pub use scalar::{Cyc, Rat};

/// Series with rational coefficients.
pub type Series = QSeries<Rat>;
/// Series with cyclotomic coefficients.
pub type CycSeries = QSeries<Cyc>;

/// Operators with modular coefficients.
pub type Operator = Mldo<ModForm>;
/// Operators with quasimodular coefficients.
pub type QmOperator = Mldo<QuasiModForm>;
/// Operators with meromorphic coefficients.
pub type MerOperator = Mldo<MerForm>;
