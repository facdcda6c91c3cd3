//! Unified posit / IEEE-754 binary32 arithmetic: codecs, a soft binary32
//! core, a posit-aware FPU, RV32IMF encoding, a cycle-counting simulator and
//! benchmark kernel generators.

pub mod fp32;
pub mod fpu;
pub mod isa;
pub mod kernels;
pub mod posit;
pub mod sim;
pub mod unpacked;
