//! Single-symbol ML decodable distributed space-time block codes for two-hop
//! amplify-and-forward relay networks.
//!
//! * [`code`] and [`construct`]: symbolic codes, the code-file format and the
//!   known constructions (Alamouti, rate-halving, repetition, pairwise Alamouti).
//! * [`verify`]: exact and numeric membership checks for the no-CSI codes and
//!   the row-monomial codes with channel phase information (CPI).
//! * [`bounds`]: data-rate upper bounds, the equal-noise column partition and
//!   per-block rate analysis.
//! * [`oracle`]: exhaustive search over small code spaces.
//! * [`sim`]: Monte Carlo link-level simulation with single-symbol ML decoding.
//! * [`presets`]: named simulation and search configurations.

pub mod bounds;
pub mod channel;
pub mod code;
pub mod coeff;
pub mod construct;
pub mod gauss;
pub mod oracle;
pub mod presets;
pub mod sim;
pub mod verify;

pub use channel::ChannelRealization;
pub use code::{parse_code, render_numeric, render_symbolic, serialize_code, AssociatedPair, CodeError, DistributedCode, MonoMatrix, Rate};
pub use coeff::MonoCoeff;
pub use gauss::{GaussianInt, GaussianIntMatrix};
