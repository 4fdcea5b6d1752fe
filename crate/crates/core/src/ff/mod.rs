//! Finite fields, polynomials over them, and residue rings `F_q[x]/(p^u)`.

mod field;
mod poly;
mod residue;

pub use field::{field_arith, make_field, prime_power, FieldElement, FieldOp, FieldSpec};
pub use poly::{
    enumerate_irreducibles, first_irreducible, is_irreducible, necklace_count, poly_divmod,
    poly_mul, Polynomial,
};
pub use residue::{reconstruct, residue_coords, teichmuller_lift, ResidueRingCoords};
pub(crate) use residue::residue_coords_unchecked;
