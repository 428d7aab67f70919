//! Cubic fields through binary cubic forms.
//!
//! Cubic rings correspond to `GL_2(Z)` classes of integral binary cubic
//! forms, with the ring's discriminant equal to the form's. Fields are the
//! irreducible classes whose ring is maximal at every prime, so enumeration
//! walks one reduced representative per class ([`enumerate`]), drops
//! reducible forms, and filters by local maximality ([`maximal`]).

pub mod enumerate;
pub mod fields;
pub mod form;
pub mod maximal;
pub mod reduce;

pub use enumerate::{enumerate_reduced_forms, for_each_form_in_unit, work_units, DiscSign, WorkUnit};
pub use fields::{enumerate_cubic_fields, CubicFieldSearch, GaloisFilter, UnitStats, MIN_CUBIC_DISCRIMINANT};
pub use form::{CubicForm, Transform};
pub use maximal::is_maximal_at;
pub use reduce::{is_class_representative, is_weakly_reduced, reduce};

/// `18abcd + b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2`.
pub fn form_discriminant(f: &CubicForm) -> i128 {
    f.discriminant()
}
