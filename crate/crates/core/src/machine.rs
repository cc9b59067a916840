//! The reference prefix machine U0.
//!
//! A program is read as a stream of 3-bit opcodes. An opcode is fetched only
//! when the program counter runs off the end of the decoded history; `WHILE`
//! jumps back to the start of the history and replays it without reading more
//! input.
//!
//! | bits | op    | effect                                   | cost            |
//! |------|-------|------------------------------------------|-----------------|
//! | 000  | HALT  | stop; success iff the whole program read | 1               |
//! | 001  | ZERO  | append 0                                 | 1               |
//! | 010  | ONE   | append 1                                 | 1               |
//! | 011  | AUX   | append next unread bit of z, if any      | 1               |
//! | 100  | DUP   | append a copy of the whole output        | 1 + output len  |
//! | 101  | FLIP  | invert the last output bit, if any       | 1               |
//! | 110  | CHOP  | delete the last output bit, if any       | 1               |
//! | 111  | WHILE | if the last bit is 1, jump to the start  | 1               |

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::encoding::BitString;

pub const U0_VERSION: &str = "u0-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Opcode {
    Halt,
    Zero,
    One,
    Aux,
    Dup,
    Flip,
    Chop,
    While,
}

impl Opcode {
    pub const ALL: [Opcode; 8] = [
        Opcode::Halt,
        Opcode::Zero,
        Opcode::One,
        Opcode::Aux,
        Opcode::Dup,
        Opcode::Flip,
        Opcode::Chop,
        Opcode::While,
    ];

    pub fn decode(code: u8) -> Opcode {
        Opcode::ALL[(code & 7) as usize]
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn bits(self) -> BitString {
        BitString::from_uint(self.code() as u64, 3)
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Halt => "HALT",
            Opcode::Zero => "ZERO",
            Opcode::One => "ONE",
            Opcode::Aux => "AUX",
            Opcode::Dup => "DUP",
            Opcode::Flip => "FLIP",
            Opcode::Chop => "CHOP",
            Opcode::While => "WHILE",
        }
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// Assembles a program from opcodes.
pub fn assemble(ops: &[Opcode]) -> BitString {
    let mut p = BitString::new();
    for op in ops {
        p.extend_from(&op.bits());
    }
    p
}

/// The program that prints `x` literally: one ZERO/ONE per bit, then HALT.
pub fn print_literal(x: &BitString) -> BitString {
    let mut ops: Vec<Opcode> = x
        .bits()
        .iter()
        .map(|&b| if b { Opcode::One } else { Opcode::Zero })
        .collect();
    ops.push(Opcode::Halt);
    assemble(&ops)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExecutionResult {
    Success { output: BitString, steps: u64 },
    /// HALT executed before the whole program was read.
    AbortEarlyHalt { steps_spent: u64, consumed: usize },
    /// An opcode fetch needed bits beyond the end of the program.
    AbortInputUnderflow { steps_spent: u64 },
    /// The run provably never halts: a loop state repeated.
    Diverges { steps_spent: u64 },
    BudgetExceeded { steps_spent: u64 },
}

impl ExecutionResult {
    pub fn is_success(&self) -> bool {
        matches!(self, ExecutionResult::Success { .. })
    }

    pub fn steps_spent(&self) -> u64 {
        match *self {
            ExecutionResult::Success { steps, .. } => steps,
            ExecutionResult::AbortEarlyHalt { steps_spent, .. }
            | ExecutionResult::AbortInputUnderflow { steps_spent }
            | ExecutionResult::Diverges { steps_spent }
            | ExecutionResult::BudgetExceeded { steps_spent } => steps_spent,
        }
    }
}

/// A resumable run of one program.
pub trait Execution {
    /// Continues the run until it finishes or the total cost would exceed
    /// `budget`. Returns `None` while the run is still going.
    fn advance(&mut self, budget: u64) -> Option<ExecutionResult>;

    /// Total cost of the instructions executed so far.
    fn steps(&self) -> u64;
}

/// A self-delimiting machine.
///
/// Contract relied upon by the sweep: a run that does not end in
/// `AbortInputUnderflow` never looked at program bits beyond the ones it
/// consumed, so every extension of the program behaves identically up to
/// that point.
pub trait PrefixMachine: Send + Sync {
    type Exec: Execution + Send;

    fn version(&self) -> &str;

    fn start(&self, p: &BitString, z: &BitString) -> Self::Exec;

    fn run(&self, p: &BitString, z: &BitString, budget: u64) -> ExecutionResult {
        assert!(budget >= 1, "step budget must be at least 1");
        self.start(p, z)
            .advance(budget)
            .unwrap_or(ExecutionResult::BudgetExceeded { steps_spent: budget })
    }
}

/// The U0 machine. Loop detection can be switched off to get the plain
/// semantics where every non-terminating run ends in `BudgetExceeded`.
#[derive(Clone, Copy, Debug)]
pub struct U0 {
    detect_loops: bool,
}

impl Default for U0 {
    fn default() -> Self {
        U0 { detect_loops: true }
    }
}

impl U0 {
    pub fn new() -> Self {
        U0::default()
    }

    pub fn without_loop_detection() -> Self {
        U0 { detect_loops: false }
    }

    /// Runs `stream` as a self-delimiting program that may be followed by
    /// further data: returns the output, the number of bits the program
    /// occupied and its cost once HALT executes.
    pub fn run_self_delimiting(
        &self,
        stream: &BitString,
        z: &BitString,
        budget: u64,
    ) -> Option<(BitString, usize, u64)> {
        let mut exec = self.start(stream, z);
        match exec.advance(budget)? {
            ExecutionResult::Success { output, steps } => Some((output, stream.len(), steps)),
            ExecutionResult::AbortEarlyHalt { steps_spent, consumed } => {
                Some((exec.output(), consumed, steps_spent))
            }
            _ => None,
        }
    }
}

impl PrefixMachine for U0 {
    type Exec = U0Execution;

    fn version(&self) -> &str {
        U0_VERSION
    }

    fn start(&self, p: &BitString, z: &BitString) -> U0Execution {
        U0Execution {
            program: p.clone(),
            z: z.clone(),
            history: Vec::new(),
            pc: 0,
            output: Vec::new(),
            ones: 0,
            aux_head: 0,
            consumed: 0,
            steps: 0,
            loops: if self.detect_loops { Some(LoopDetector::default()) } else { None },
            result: None,
        }
    }
}

pub struct U0Execution {
    program: BitString,
    z: BitString,
    history: Vec<Opcode>,
    pc: usize,
    output: Vec<bool>,
    ones: usize,
    aux_head: usize,
    consumed: usize,
    steps: u64,
    loops: Option<LoopDetector>,
    result: Option<ExecutionResult>,
}

impl U0Execution {
    pub fn output(&self) -> BitString {
        BitString::from(&self.output[..])
    }

    pub fn history(&self) -> &[Opcode] {
        &self.history
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    fn finish(&mut self, r: ExecutionResult) -> Option<ExecutionResult> {
        self.result = Some(r.clone());
        Some(r)
    }

    fn push(&mut self, bit: bool) {
        self.output.push(bit);
        self.ones += bit as usize;
        if let Some(l) = &mut self.loops {
            l.on_push();
        }
    }
}

impl Execution for U0Execution {
    fn advance(&mut self, budget: u64) -> Option<ExecutionResult> {
        if let Some(r) = &self.result {
            return Some(r.clone());
        }
        loop {
            if self.pc == self.history.len() {
                let c = self.consumed;
                if c + 3 > self.program.len() {
                    let steps_spent = self.steps;
                    return self.finish(ExecutionResult::AbortInputUnderflow { steps_spent });
                }
                let b = self.program.bits();
                let code = (b[c] as u8) << 2 | (b[c + 1] as u8) << 1 | b[c + 2] as u8;
                self.history.push(Opcode::decode(code));
                self.consumed += 3;
                if let Some(l) = &mut self.loops {
                    l.reset();
                }
            }
            let op = self.history[self.pc];
            let cost = match op {
                Opcode::Dup => 1 + self.output.len() as u64,
                _ => 1,
            };
            if self.steps + cost > budget {
                return None;
            }
            self.steps += cost;
            match op {
                Opcode::Halt => {
                    let r = if self.consumed == self.program.len() {
                        ExecutionResult::Success { output: self.output(), steps: self.steps }
                    } else {
                        ExecutionResult::AbortEarlyHalt {
                            steps_spent: self.steps,
                            consumed: self.consumed,
                        }
                    };
                    return self.finish(r);
                }
                Opcode::Zero => self.push(false),
                Opcode::One => self.push(true),
                Opcode::Aux => {
                    if let Some(bit) = self.z.get(self.aux_head) {
                        self.aux_head += 1;
                        self.push(bit);
                    }
                }
                Opcode::Dup => {
                    self.output.extend_from_within(..);
                    self.ones *= 2;
                }
                Opcode::Flip => {
                    if let Some(b) = self.output.last_mut() {
                        *b = !*b;
                        if *b {
                            self.ones += 1;
                        } else {
                            self.ones -= 1;
                        }
                    }
                    if let Some(l) = &mut self.loops {
                        l.on_flip();
                    }
                }
                Opcode::Chop => {
                    if self.output.pop() == Some(true) {
                        self.ones -= 1;
                    }
                    if let Some(l) = &mut self.loops {
                        l.on_chop();
                    }
                }
                Opcode::While => {
                    if let Some(l) = &mut self.loops {
                        l.on_read_top();
                    }
                    if self.output.last() == Some(&true) {
                        self.pc = 0;
                        let repeated = match &mut self.loops {
                            Some(l) => l.pass_start(&self.output, self.ones, self.aux_head),
                            None => false,
                        };
                        if repeated {
                            let steps_spent = self.steps;
                            return self.finish(ExecutionResult::Diverges { steps_spent });
                        }
                        continue;
                    }
                }
            }
            self.pc += 1;
        }
    }

    fn steps(&self) -> u64 {
        self.steps
    }
}

/// Outputs at most this long are remembered verbatim at every pass start.
const EXACT_LIMIT: usize = 64;
/// Widths of the top-of-output windows used for growing loops. Small widths
/// catch loops that double the output before a wide window could repeat.
const WINDOWS: [usize; 5] = [1, 2, 4, 8, 16];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sym {
    /// A bit appended during the current pass.
    Fresh,
    /// The bit that was at depth k (1 = last) when the pass started.
    Pre(usize),
}

/// Proves non-termination of replay loops.
///
/// A pass runs from a WHILE jump to the next one. Three criteria are used,
/// all only between fetches (the history is then fixed):
///
/// * the full configuration (aux head, output) repeats at a pass start;
/// * for some width `d`, every pass since an earlier pass start was
///   *d-determined*: long enough that no CHOP or FLIP reaches below the top
///   `d` bits, with all bits it read and the new top `d` bits traced back
///   (symbolically) to the old top `d` bits or to freshly appended ones. DUP
///   only copies the top region onto itself in this view. Then the window and
///   aux head determine every future pass, and a repeat of (aux head, window)
///   at a length no smaller than before means the same passes recur forever;
/// * every pass since an earlier pass start began on a constant output (all
///   zeros or all ones) longer than the number of CHOPs it executed. Every
///   read then sees the constant bit or a fresh one, so the pass behaves the
///   same on any longer constant output, and a repeat of (aux head, bit) at a
///   length no smaller than before again means the passes recur forever.
#[derive(Default)]
struct LoopDetector {
    exact: HashSet<(usize, Vec<bool>)>,
    windows: [HashMap<(usize, u32), usize>; WINDOWS.len()],
    constant: HashMap<(usize, bool), usize>,
    tracking: bool,
    top: Vec<Sym>,
    offset: usize,
    max_read: usize,
    chops: usize,
    start_len: usize,
    start_constant: bool,
}

impl LoopDetector {
    fn reset(&mut self) {
        self.exact.clear();
        for w in &mut self.windows {
            w.clear();
        }
        self.constant.clear();
        self.tracking = false;
    }

    fn on_push(&mut self) {
        if self.tracking {
            self.top.push(Sym::Fresh);
        }
    }

    fn on_chop(&mut self) {
        if self.tracking {
            self.chops += 1;
            if self.top.pop().is_none() {
                self.offset += 1;
            }
        }
    }

    fn on_flip(&mut self) {
        if self.tracking {
            if self.top.is_empty() {
                self.offset += 1;
                self.top.push(Sym::Pre(self.offset));
            }
            if let Some(Sym::Pre(k)) = self.top.last() {
                self.max_read = self.max_read.max(*k);
            }
        }
    }

    fn on_read_top(&mut self) {
        if self.tracking {
            let depth = match self.top.last() {
                Some(Sym::Pre(k)) => *k,
                Some(Sym::Fresh) => 0,
                None => self.offset + 1,
            };
            self.max_read = self.max_read.max(depth);
        }
    }

    fn pass_was_determined(&self, width: usize) -> bool {
        if self.start_len <= width + self.chops || self.max_read > width {
            return false;
        }
        let deepest_in_top = self
            .top
            .iter()
            .rev()
            .take(width)
            .map(|s| match s {
                Sym::Pre(k) => *k,
                Sym::Fresh => 0,
            })
            .max()
            .unwrap_or(0);
        let deepest_below = if self.top.len() < width {
            self.offset + width - self.top.len()
        } else {
            0
        };
        deepest_in_top.max(deepest_below) <= width
    }

    /// Called at each WHILE jump with the configuration at the start of the
    /// next pass; `ones` counts the set bits of `output`. Returns true if the
    /// run is proven to loop forever.
    fn pass_start(&mut self, output: &[bool], ones: usize, aux_head: usize) -> bool {
        if self.tracking {
            for (i, &width) in WINDOWS.iter().enumerate() {
                if !self.pass_was_determined(width) {
                    self.windows[i].clear();
                }
            }
            if !(self.start_constant && self.start_len > self.chops) {
                self.constant.clear();
            }
        }
        if output.len() <= EXACT_LIMIT && !self.exact.insert((aux_head, output.to_vec())) {
            return true;
        }
        let len = output.len();
        let top = output[len.saturating_sub(32)..]
            .iter()
            .fold(0u32, |acc, &b| (acc << 1) | b as u32);
        for (i, &width) in WINDOWS.iter().enumerate() {
            if len > width {
                let key = (aux_head, top & ((1u32 << width) - 1));
                if seen_shorter(&mut self.windows[i], key, len) {
                    return true;
                }
            }
        }
        let constant = len > 0 && (ones == 0 || ones == len);
        if constant && seen_shorter(&mut self.constant, (aux_head, ones > 0), len) {
            return true;
        }
        self.tracking = true;
        self.top.clear();
        self.offset = 0;
        self.max_read = 0;
        self.chops = 0;
        self.start_len = len;
        self.start_constant = constant;
        false
    }
}

/// Records `len` under `key`; true if the key was already seen at a length no
/// larger than `len`.
fn seen_shorter<K: std::hash::Hash + Eq>(map: &mut HashMap<K, usize>, key: K, len: usize) -> bool {
    match map.get_mut(&key) {
        Some(prev) if *prev <= len => true,
        Some(prev) => {
            *prev = len;
            false
        }
        None => {
            map.insert(key, len);
            false
        }
    }
}
