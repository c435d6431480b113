//! Jet modules of free modules in coordinates.
//!
//! `J^k(A^m)` is realized as the free module on the slots `(α, i)` with
//! `|α| ≤ k`; the jet map is prolongation `s ↦ (∂^α s^i)` and every order-`k`
//! operator factors uniquely through it.

mod connection;
mod forms;
mod hom;
mod space;

pub use connection::{check_splitting, Connection};
pub use forms::{d1, reassemble_j1, split_j1, OneForm, SplitJet};
pub use hom::{factorize, factorize_at, operator_from_jet_hom, row_hom, zero_hom, JetHom};
pub use space::{jet_prolong, jet_rank, JetSpace, JetVector};
