//! Library surface of the `qvr` command-line tool: configuration schema,
//! command execution and artifact writers. The binary in `main.rs` is a
//! thin argument-parsing shell over these modules.

// `!(x > y)` guards deliberately reject NaN configuration values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod execute;
pub mod outputs;
pub mod selftest;
