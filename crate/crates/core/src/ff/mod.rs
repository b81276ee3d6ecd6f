//! Finite-field arithmetic and character sums.

mod characters;
mod dirichlet;
mod table;

pub use characters::{
    binom_symbol, character, character_order, gauss_sum, hyp3f2, jacobi_sum, order_k_index, sign_at_minus_one,
    BinomialConvention, CharacterTable, DEFAULT_CONVENTION,
};
pub use dirichlet::{cubic_residue, dirichlet_jacobi, DirichletTable, MAX_DIRICHLET_MODULUS};
pub use table::{is_irreducible, FieldTable, MAX_FIELD_SIZE, MAX_TABLE_SIZE};

pub(crate) use table::poly_mul_mod;
