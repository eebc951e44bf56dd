//! Explicit Rado graphs and the pro-finite Rado graph.

pub mod hf;
pub mod standard;

pub use hf::Hf;
pub use standard::{omega, omega_std, section, section_std, std_edge, witness, witness_recipe};
pub mod psi;
pub mod words;

pub use psi::IsoTable;
pub use words::{least_witness, omega_word, phi, word_bit, word_edge, word_index, Word};
pub mod pro_rado;

pub use pro_rado::{free_witness, pro_rado, realize, ExtensionSpec, ProRado, RadoBranch};
