//! Exact enveloping-algebra computations for the affine algebra `ô_{2n}`:
//! PBW normal forms, the vacuum module at the critical level, the Pfaffian
//! `Pf F[-1]` of the generator matrix, and the coefficients of `Pf F(z)`.
//!
//! Everything is exact: coefficients are integer polynomials in the central
//! element `K`, and every check compares canonical forms.

pub mod algebra;
pub mod error;
pub mod kpoly;
pub mod matching;
pub mod pfaffian;
pub mod report;
pub mod selftest;
pub mod sugawara;
pub mod text;
pub mod vacuum;

pub use algebra::{bracket, lie_bracket, Element, Generator, Rank, SwapOrder, Word, MAX_RANK};
pub use error::{AlgebraError, Result};
pub use kpoly::KPolynomial;
pub use matching::{enumerate_matchings, Matching};
pub use pfaffian::{
    pfaffian_full_sum_oracle, pfaffian_minus_one, pfaffian_submatrix, residual_noncritical,
};
pub use sugawara::{apply_sugawara_full, check_sugawara_commutation, sugawara_plus_coefficient};
pub use vacuum::{apply, is_annihilated_by_modes, LevelPolicy, VacuumVector};
