//! Star–triangle kernels, their exact verification, and mixed-lattice sweeps.
//!
//! Cells use one convention throughout: triangle edge `i` joins the two outer
//! vertices other than `i`, and star arm `i` joins outer vertex `i` to the
//! centre. Under the triangle measure edge `i` is open with probability `p_i`;
//! under the star measure arm `i` is open with probability `1 − p_i`.

pub mod kernel;
pub mod sweep;
pub mod transport;
pub mod verify;

pub use kernel::{kernel_s, kernel_t, s_branches, t_branches, Bits3};
pub use sweep::{sweep, Direction, SweepPlan};
pub use transport::{transport_check, TransportReport};
pub use verify::{verify_coupling, verify_coupling_exact, CouplingReport};
