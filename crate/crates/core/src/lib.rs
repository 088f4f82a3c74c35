//! Modeling, simulation and control of fiber-reinforced elastomeric enclosure
//! (FREE) soft actuators.
//!
//! A FREE is an elastomer tube wound with inextensible fibers at a winding
//! angle Γ. Pressurizing it twists and extends (or contracts) the free end.
//! This crate provides:
//!
//! - [`kinematics`]: helical fiber geometry linking end motion `(s, φ)` to the
//!   deformed radius and winding angle.
//! - [`materials`]: linear, neo-Hookean and first-order Ogden elastomer laws,
//!   calibration and Shore hardness conversion.
//! - [`dynamics`]: the lumped-parameter equations of motion, a fixed-step
//!   integrator, static equilibrium and winding-angle sweeps.
//! - [`control`]: PID pressure control, cubic trajectories, closed-loop
//!   simulation and characteristic-root analysis.
//! - [`sysid`]: stiffness and damping identification from test data.
//! - [`module`]: a four-FREE module surrogate with workspace estimation.
//!
//! All quantities are SI. Pressures given in psi are converted with
//! [`units::PA_PER_PSI`].
//!
//! ```
//! use freelab::dynamics::{blocked_reactions, LumpedParams};
//! use freelab::kinematics::{FreeGeometry, Handedness};
//! use freelab::units::psi;
//!
//! let geom = FreeGeometry::canonical(30f64.to_radians(), Handedness::Right).unwrap();
//! let blocked = blocked_reactions(psi(7.0), &geom).unwrap();
//! assert!(blocked.force < 0.0); // below the magic angle the tube pulls
//! let _params = LumpedParams::canonical(&geom);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod dynamics;
pub mod kinematics;
pub mod materials;
pub mod module;
pub mod numerics;
pub mod sysid;
pub mod units;

pub use dynamics::{DynamicState, LoadCondition, LumpedParams, Model};
pub use kinematics::{FreeConfiguration, FreeGeometry, Handedness};
