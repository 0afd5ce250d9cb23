//! Hasse-Witt invariants of cyclotomic function fields.
//!
//! For a monic irreducible `m` of degree `d` in `A = F_q[T]`, this crate
//! computes the genera `g_m`, `g_m^+` of `K_m` and its maximal real subfield
//! together with their Hasse-Witt invariants `lambda_m`, `lambda_m^+`. The
//! invariants are obtained from the power sums
//! `s_i(n) = sum_{a monic, deg a = i} a^n` through the polynomials `B_n(u)`:
//! `lambda_m` is the sum of the `u`-degrees of `B_n(u) mod m` over
//! `1 <= n <= q^d - 2`, and `K_m` is ordinary exactly when every such degree
//! hits its digit-sum target.

pub mod bpoly;
pub mod cli;
pub mod degree;
pub mod digits;
pub mod error;
pub mod field;
pub mod invariants;
pub mod poly;
pub mod powersums;
pub mod scan;
pub mod verify;

pub use bpoly::{b_poly, c_poly, u_degree, Mode, UPoly};
pub use degree::Degree;
pub use error::{Error, Result};
pub use field::{make_field, FieldCtx, FqElem};
pub use invariants::{genus, hasse_witt, is_ordinary, is_ordinary_plus, InvariantsReport};
pub use poly::{irreducible_enumerate, monic_enumerate, residue_pow, FqPoly, Modulus};
pub use powersums::{s_exact, s_mod, Budget};
pub use scan::{scan_degree, write_records, ScanOptions, ScanRecord};
