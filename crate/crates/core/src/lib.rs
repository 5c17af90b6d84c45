//! Exact-arithmetic constructions around centrally extended loop algebras:
//! split simple Lie algebras over Laurent polynomial rings, central
//! extensions defined by 2-cocycles (including the differential-form model
//! of the universal one), the automorphism lift equation, and finite Galois
//! descent to twisted multiloop algebras. Every construction is verified by
//! exhaustive identity checks on graded windows; all arithmetic is exact.

pub mod exec;
pub mod linalg;
pub mod scalars;
pub mod window;

pub mod lie;

pub mod kahler;

pub mod extension;

pub mod autlift;

pub mod descent;

pub mod sampling;
