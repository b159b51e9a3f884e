//! Koszul complexes over finite-rank commutative algebras, with exact
//! homology. An algebra is a multiplication table over Z or Z/p^N; a
//! sequence a_1..a_m spins up the exterior-algebra complex with
//! d e_I = sum_i (-1)^(i+1) a_{I(i)} e_{I minus I(i)}, and homology falls
//! out of Smith normal form. The interesting verdicts live on top:
//! regular-sequence detection and the collapse reports.
//!
//! Exterior subsets are kept in colexicographic order (as bitmasks this
//! is plain numeric order), so matrix layouts are stable across runs and
//! suitable for golden files.

pub mod algebra;
pub mod complex;
pub mod homology;
pub mod io;
pub mod regular;
pub mod snf;

pub use algebra::{
    make_monomial_algebra, make_quadratic, Base, Coords, FinAlgebra, MonomialQuotient,
};
pub use complex::{wedge, Chain, KoszulComplex};
pub use homology::{
    collapse_check, collapse_variants, homology, homology_all, quotient_module, CollapseReport,
    CollapseVariants, HomologyGroup,
};
pub use io::{
    dump_complex, homology_report, AlgebraSpec, BaseSpec, ComplexDump, ComplexSpec,
    HomologyDegree, HomologyReport, MatrixDump, MonomialSpec, TableSpec,
};
pub use regular::{is_regular, RegularityReport};
pub use snf::{kernel_basis, smith_normal_form, Mat};
