//! Link-level Monte Carlo simulation of the two-hop relay network.

mod ber;
mod constellation;
mod decode;
mod link;

pub use ber::{plot_script, run_ber, to_csv, BerPoint, Scheme, SimConfig, SimError, UnknownScheme, CSV_HEADER};
pub use constellation::{Constellation, Modulation, UnknownModulation};
pub use decode::{joint_ml_decode, ss_ml_decode, DecodeError, JOINT_BUDGET};
pub use link::{destination_receive, relay_process, transmit, PowerConfig, PowerError};
