//! Cauchy-preserving maps, exit laws of planar Brownian motion, and ergodic
//! orbits of Newton's method for `x² + 1`.
//!
//! * [`maps`]: the Boole and Simpson-Newton maps, the Pitman-Williams family,
//!   Cayley transforms and the strip / sech-law maps.
//! * [`samplers`]: reproducible random streams and inverse-CDF samplers.
//! * [`brownian`]: exit points from half-planes (exact) and strips (Euler
//!   with bridge correction).
//! * [`ergodic`]: orbits, Birkhoff averages, empirical orbit laws.
//! * [`stats`]: reference CDFs, KS distances, empirical characteristic
//!   functions.

pub mod brownian;
pub mod ergodic;
pub mod maps;
pub mod parallel;
pub mod samplers;
pub mod stats;

pub use maps::{ComplexPoint, ExtendedReal, MapError, PwMap, PwParams};
pub use samplers::{spawn_stream, RandomSource};
pub use stats::EmpiricalDistribution;
