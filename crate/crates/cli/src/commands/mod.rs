pub mod bb;
pub mod count;
pub mod lattice;
pub mod period;
pub mod riemann;
