//! Instruction-level RV32IMF simulator with the posit conversion extension.
//!
//! Execution is in-order and unpipelined: each retired instruction adds its
//! cost from [`CostModel`] to the cycle counter. Any trap halts the core.

mod exec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpu::{FpuLatency, Pcsr};
use crate::isa::{assemble, disassemble, AsmError};

pub const DEFAULT_MEM_BYTES: usize = 64 * 1024;

/// Cycles charged per retired instruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    pub alu: u32,
    pub muldiv: u32,
    pub load_store: u32,
    pub branch_not_taken: u32,
    pub branch_taken: u32,
    pub jump: u32,
    pub csr: u32,
    pub ecall: u32,
    pub fpu: FpuLatency,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            alu: 1,
            muldiv: 1,
            load_store: 1,
            branch_not_taken: 1,
            branch_taken: 3,
            jump: 2,
            csr: 1,
            ecall: 1,
            fpu: FpuLatency::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrapKind {
    IllegalInstruction,
    MemOutOfBounds,
    MisalignedAccess,
    /// `ecall` or `ebreak`; the normal way for a program to stop.
    EnvCall,
}

/// A trap: `value` is the faulting word for illegal instructions and the
/// faulting address for memory faults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{kind:?} at pc {pc:#010x} (value {value:#010x})")]
pub struct Trap {
    pub kind: TrapKind,
    pub pc: u32,
    pub value: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HaltReason {
    Trap(Trap),
    /// `run` stopped because the cycle budget was spent.
    CycleBudget,
}

impl HaltReason {
    /// True for an `ecall`/`ebreak` halt.
    pub fn is_clean(self) -> bool {
        matches!(self, HaltReason::Trap(Trap { kind: TrapKind::EnvCall, .. }))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Csrs {
    pub fflags: u32,
    pub frm: u32,
    pub pcsr: u32,
}

impl Csrs {
    pub fn fcsr(&self) -> u32 {
        (self.frm << 5) | self.fflags
    }

    pub fn pcsr(&self) -> Pcsr {
        Pcsr::unpack(self.pcsr)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreState {
    pub pc: u32,
    x: [u32; 32],
    pub f: [u32; 32],
    pub csrs: Csrs,
    mem: Vec<u8>,
    pub cycles: u64,
    pub instret: u64,
    /// Floating-point operations retired (fused ops count 2).
    pub flops: u64,
    pub halted: Option<HaltReason>,
    pub cost: CostModel,
}

/// One retired instruction, as reported to a trace sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Retired {
    pub pc: u32,
    pub word: u32,
    /// Cycle counter after the instruction.
    pub cycles: u64,
}

impl std::fmt::Display for Retired {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:08x}  {:08x}  {:<32} cycle={}",
            self.pc,
            self.word,
            disassemble(self.word),
            self.cycles
        )
    }
}

/// Final result of [`CoreState::run`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub halt: HaltReason,
    pub cycles: u64,
}

impl CoreState {
    /// A zeroed core with `mem_bytes` of memory, pc 0 and sp at the top.
    pub fn new(mem_bytes: usize) -> Self {
        let mut s = CoreState {
            pc: 0,
            x: [0; 32],
            f: [0; 32],
            csrs: Csrs::default(),
            mem: vec![0; mem_bytes],
            cycles: 0,
            instret: 0,
            flops: 0,
            halted: None,
            cost: CostModel::default(),
        };
        s.x[2] = (mem_bytes as u32) & !0xF;
        s
    }

    pub fn x(&self, r: usize) -> u32 {
        self.x[r]
    }

    /// Writes to x0 are discarded.
    pub fn set_x(&mut self, r: usize, v: u32) {
        if r != 0 {
            self.x[r] = v;
        }
    }

    pub fn xregs(&self) -> &[u32; 32] {
        &self.x
    }

    pub fn mem(&self) -> &[u8] {
        &self.mem
    }

    pub fn mem_mut(&mut self) -> &mut [u8] {
        &mut self.mem
    }

    fn range(&self, addr: u32, len: u32) -> Option<std::ops::Range<usize>> {
        let end = (addr as u64).checked_add(len as u64)?;
        (end <= self.mem.len() as u64).then_some(addr as usize..end as usize)
    }

    /// Reads `len` (1, 2 or 4) little-endian bytes.
    pub fn read(&self, addr: u32, len: u32) -> Option<u32> {
        let r = self.range(addr, len)?;
        Some(
            self.mem[r]
                .iter()
                .rev()
                .fold(0u32, |acc, &b| (acc << 8) | b as u32),
        )
    }

    pub fn write(&mut self, addr: u32, len: u32, value: u32) -> Option<()> {
        let r = self.range(addr, len)?;
        for (i, b) in self.mem[r].iter_mut().enumerate() {
            *b = (value >> (8 * i)) as u8;
        }
        Some(())
    }

    /// Executes one instruction. On a trap the state is marked halted and
    /// the trap is returned; `ecall` charges its cost before halting.
    pub fn step(&mut self) -> Result<Retired, Trap> {
        if let Some(HaltReason::Trap(t)) = self.halted {
            return Err(t);
        }
        let pc = self.pc;
        match exec::step(self) {
            Ok(word) => {
                self.instret += 1;
                Ok(Retired {
                    pc,
                    word,
                    cycles: self.cycles,
                })
            }
            Err(t) => {
                self.halted = Some(HaltReason::Trap(t));
                Err(t)
            }
        }
    }

    /// Steps until a trap (including `ecall`) or until `max_cycles` more
    /// cycles have elapsed.
    pub fn run(&mut self, max_cycles: u64) -> RunOutcome {
        self.run_traced(max_cycles, |_| {})
    }

    pub fn run_traced(&mut self, max_cycles: u64, mut trace: impl FnMut(&Retired)) -> RunOutcome {
        let limit = self.cycles.saturating_add(max_cycles);
        loop {
            if self.cycles >= limit {
                self.halted = Some(HaltReason::CycleBudget);
                return RunOutcome {
                    halt: HaltReason::CycleBudget,
                    cycles: self.cycles,
                };
            }
            let pc = self.pc;
            match self.step() {
                Ok(r) => trace(&r),
                Err(t) => {
                    if t.kind == TrapKind::EnvCall {
                        trace(&Retired {
                            pc,
                            word: t.value,
                            cycles: self.cycles,
                        });
                    }
                    return RunOutcome {
                        halt: HaltReason::Trap(t),
                        cycles: self.cycles,
                    };
                }
            }
        }
    }

    /// Serializable snapshot of the architectural state (memory excluded).
    pub fn dump(&self) -> StateDump {
        StateDump {
            pc: self.pc,
            x: self.x.to_vec(),
            f: self.f.to_vec(),
            fflags: self.csrs.fflags,
            frm: self.csrs.frm,
            fcsr: self.csrs.fcsr(),
            pcsr: self.csrs.pcsr,
            cycles: self.cycles,
            instret: self.instret,
            flops: self.flops,
            halt: self.halted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDump {
    pub pc: u32,
    pub x: Vec<u32>,
    pub f: Vec<u32>,
    pub fflags: u32,
    pub frm: u32,
    pub fcsr: u32,
    pub pcsr: u32,
    pub cycles: u64,
    pub instret: u64,
    pub flops: u64,
    pub halt: Option<HaltReason>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataSegment {
    pub addr: u32,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Asm(#[from] AsmError),
    #[error("{what} at {addr:#x}..{end:#x} does not fit in {mem} bytes of memory", end = *addr as u64 + *len as u64)]
    DoesNotFit {
        what: &'static str,
        addr: u32,
        len: usize,
        mem: usize,
    },
    #[error("text base {0:#x} is not word-aligned")]
    MisalignedBase(u32),
}

/// Places `words` at `base` and the data segments, and points pc at `base`.
pub fn load_words(
    words: &[u32],
    base: u32,
    data: &[DataSegment],
    mem_bytes: usize,
) -> Result<CoreState, LoadError> {
    if !base.is_multiple_of(4) {
        return Err(LoadError::MisalignedBase(base));
    }
    let mut s = CoreState::new(mem_bytes);
    let text_len = words.len() * 4;
    place(&mut s, "text", base, text_len)?;
    for (i, w) in words.iter().enumerate() {
        s.write(base + 4 * i as u32, 4, *w).expect("checked");
    }
    for seg in data {
        let r = place(&mut s, "data segment", seg.addr, seg.bytes.len())?;
        s.mem[r].copy_from_slice(&seg.bytes);
    }
    s.pc = base;
    Ok(s)
}

fn place(
    s: &mut CoreState,
    what: &'static str,
    addr: u32,
    len: usize,
) -> Result<std::ops::Range<usize>, LoadError> {
    let end = addr as u64 + len as u64;
    if end > s.mem.len() as u64 {
        return Err(LoadError::DoesNotFit {
            what,
            addr,
            len,
            mem: s.mem.len(),
        });
    }
    Ok(addr as usize..end as usize)
}

/// Assembles `asm` and loads it at `base`.
pub fn load_program(
    asm: &str,
    base: u32,
    data: &[DataSegment],
    mem_bytes: usize,
) -> Result<CoreState, LoadError> {
    let prog = assemble(asm)?;
    load_words(&prog.words, base, data, mem_bytes)
}
