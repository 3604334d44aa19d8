//! Reference computations shared by the integration tests. Nothing here
//! calls into the library; constants are restated from CODATA 2018.

#![allow(dead_code)]

pub mod oracle;
