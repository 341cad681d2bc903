//! Exact counts and growth constants for integer-valued `h`-Lipschitz
//! functions on graphs.
//!
//! A function `f: V(G) -> Z` is `h`-Lipschitz when `|f(x) - f(y)| <= h` on
//! every edge and `f` vanishes on one designated root per connected
//! component. For a graph with `n` vertices and `k` components the number of
//! such functions is a polynomial in `h` of degree `n - k`; its leading
//! coefficient `L` gives the growth constant `c(G) = L^(1/(n-k))`, which always
//! lies in `[1, 2]`.
//!
//! The crate is organised by technique:
//!
//! * [`graph`]: graph representation, deterministic generators and the
//!   edge-list file format.
//! * [`exact`]: depth-first exact enumeration, closed forms, pinned counts and
//!   Ehrhart interpolation.
//! * [`strip`]: transfer operators for grid strips, exact strip counts and
//!   their spectra.
//! * [`continuum`]: Nyström discretisations of the limiting integral operators
//!   and the scalar constants they define.
//! * [`random_lab`]: bound evaluators and Monte-Carlo experiments on sparse
//!   random graphs.

pub mod continuum;
pub mod error;
pub mod exact;
pub mod graph;
pub mod power;
pub mod random_lab;
pub mod strip;

pub use error::{Error, Result};
pub use exact::{EhrhartPoly, LipCount, PinSpec};
pub use graph::{Graph, RngSeed};
pub use power::SpectralEstimate;
pub use strip::{OperatorKind, TransferOperator};
