//! Combinatorial tools for cube complexes, branched covers and discrete Morse
//! theory, with the computations needed to build groups with finitely many
//! conjugacy classes of a prescribed element.

pub mod complex;
pub mod curvature;
pub mod morse;
pub mod perm;
pub mod pi1;
pub mod product;
pub mod subdivide;
pub mod text;
pub mod rips;
pub mod voltage;
pub mod branched;
pub mod feighn_mess;
pub mod conj;
pub mod report;
