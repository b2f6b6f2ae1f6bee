//! Integral Gassmann triples and their arithmetic shadows, modeled
//! group-theoretically.
//!
//! * [`permgroup`]: enumerated permutation groups, cosets, abelianization, transfer.
//! * [`gassmann`]: permutation-character equivalence, intertwiners, unimodular search.
//! * [`lattice`]: exact integer matrices and maximal normal sublattices.
//! * [`splitting`]: splitting types and the four prime-splitting equivalences.
//! * [`abelext`]: local lattice model of corresponding abelian extensions.
//! * [`kgroups`]: odd-index K-group structure from cyclotomic Galois data.
//! * [`homology`]: degree-one restriction/corestriction compatibility checks.
//! * [`scott`]: the non-conjugate `A₅` pair in `PSL(2, F₂₉)`.

pub mod abelext;
pub mod gassmann;
pub mod homology;
pub mod kgroups;
pub mod lattice;
pub mod permgroup;
pub mod scott;
pub mod splitting;

pub use gassmann::{CorrespondenceMatrix, GassmannError, GassmannTriple, VerificationReport};
pub use lattice::{IntMat, LatticeError, LocalNormLattice};
pub use permgroup::{AbHom, ConjugacyClass, CosetSpace, FinAbGroup, PermGroup, PermGroupError, Permutation, Subgroup};
pub use splitting::{NumericalSet, SplittingError, SplittingType};
