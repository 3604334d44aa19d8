//! Free-falling, spin-polarised condensate: packet bookkeeping, the
//! trajectory past the loop and the impulse-approximation kicks.
//!
//! Gravity points along `+x`; the loop axis (and quantisation axis) is `z`.
//! The packet shape is frozen while it crosses the field, only its mean
//! transverse momentum changes, and atoms do not interact.

mod kick;
mod packet;
mod semiclassical;
mod trajectory;

pub use kick::{
    constant_gradient_kick, kick_integral, kick_integral_with, weak_coupling_threshold, KickOptions,
    KickReport, ThresholdCrossing,
};
pub use packet::{make_packet, BECPacket, PacketConfig, SpinState};
pub use semiclassical::{semiclassical_split, SplitBranch};
pub use trajectory::{
    crossing_trajectory, freefall_trajectory, freefall_trajectory_with_gravity, Trajectory,
    TrajectorySample,
};
