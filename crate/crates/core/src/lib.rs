//! Mod-2 homology of iterated loop spaces `QS^n`, `Q_0 S^0` and `Q Σ^2 X`: Dyer-Lashof and
//! dual Steenrod operations, the Hopf algebra structure, homology suspension, and screens for
//! spherical classes.

pub mod algebra;
pub mod bounds;
pub mod certify;
pub mod dyer_lashof;
pub mod error;
pub mod hopf;
pub mod linalg;
pub mod screen;
pub mod seq;
pub mod space;
pub mod steenrod;
pub mod suspension;

pub use algebra::{basis_enumerate, Element, Generator, Monomial, TensorElement};
pub use dyer_lashof::{adem_normalize, apply_q, apply_q_iterated};
pub use error::{Error, Result};
pub use hopf::{
    coproduct, is_primitive, kernel_of_r, make_primitive_pi, primitive_decomposition,
    primitive_space, reduced_coproduct, square_root_r, PrimitiveBasisElement,
};
pub use screen::{spherical_candidates, verify_no_even_squares, wellington_check, ScreenReport};
pub use seq::{Excess, LowerSeq, UpperSeq};
pub use space::{Cell, CellComplex, Space, SpaceDesc};
pub use steenrod::{is_A_annihilated, lucas_binom, sq_lower, BaseSteenrodAction};
pub use suspension::{loop_filtration_member, suspend, suspension_kernel_basis};
