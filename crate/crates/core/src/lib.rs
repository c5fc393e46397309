//! Computable mathematics of compact hyperkähler manifolds.
//!
//! The crate is `no_std` (it needs `alloc`) and is split by subject:
//!
//! * [`lattice`]: exact arithmetic on integral lattices (Gram matrices,
//!   signatures, the K3 lattice `U³ ⊕ E8(−1)²`).
//! * [`bbform`]: the Beauville–Bogomolov form, the Fujiki relation and its
//!   polarization, and the intersection-number identities that follow.
//! * [`period`]: period-domain membership, Hodge structures from periods,
//!   twistor conics and twistor-path search.
//! * [`riemann`]: chart-based Riemannian numerics (Christoffel symbols,
//!   curvature, geodesics, parallel transport, holonomy, Kähler checks).
//! * [`hrr`]: characteristic numbers, Hodge numbers, Göttsche series and
//!   the curve-counting identities built on them.
//!
//! Everything that can be decided exactly is decided with arbitrary
//! precision integers and rationals; only [`riemann`] uses `f64`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bbform;
pub mod error;
pub mod exact;
pub mod hrr;
pub mod lattice;
pub mod linalg;
pub mod period;
pub mod riemann;

pub use error::{Error, ErrorKind, Result};
