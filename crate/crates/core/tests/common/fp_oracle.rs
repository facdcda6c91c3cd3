//! Independent binary32 reference built on host f64 arithmetic.
//!
//! Every f32 operation's exact result is captured as `s + tail` where `s` is
//! an f64 and only the sign of the tail matters (error-free transforms for
//! add/fma, an exact fused residual for div/sqrt, exact f64 products for
//! mul). Rounding to binary32 is then done by locating the two f32
//! neighbours on the f64 line and comparing against their exact midpoint.

pub const NX: u8 = 1;
pub const UF: u8 = 2;
pub const OF: u8 = 4;
pub const DZ: u8 = 8;
pub const NV: u8 = 16;
pub const QNAN: u32 = 0x7FC0_0000;

/// Rounding mode as its RISC-V `rm` encoding.
pub type Rm = u32;
pub const RNE: Rm = 0;
pub const RTZ: Rm = 1;
pub const RDN: Rm = 2;
pub const RUP: Rm = 3;
pub const RMM: Rm = 4;

fn is_nan(x: u32) -> bool {
    x & 0x7FFF_FFFF > 0x7F80_0000
}

fn is_snan(x: u32) -> bool {
    is_nan(x) && x & 0x0040_0000 == 0
}

fn val(x: u32) -> f64 {
    f32::from_bits(x) as f64
}

/// Spacing of the binary32 grid (with subnormals, unbounded above) at `m`.
fn ulp_at(m: f64) -> f64 {
    // Every m reaching here is a normal f64.
    let e = ((m.to_bits() >> 52) & 0x7FF) as i32 - 1023;
    pow2((e - 23).max(-149))
}

fn pow2(e: i32) -> f64 {
    f64::from_bits(((e + 1023) as u64) << 52)
}

fn ulp_below(m: f64) -> f64 {
    // For an exact power of two the grid below is twice as fine.
    let u = ulp_at(m);
    let half = u / 2.0;
    if half >= pow2(-149) && (m / u) == pow2(23) {
        half
    } else {
        u
    }
}

/// Chooses between magnitude neighbours `lo < v < hi`.
/// `ord` is the sign of `v - mid`; `lo_even` tells the tie-break.
fn choose(neg: bool, ord: i32, lo_even: bool, rm: Rm) -> bool {
    // Returns true to pick hi.
    match rm {
        RNE => ord > 0 || (ord == 0 && !lo_even),
        RMM => ord >= 0,
        RTZ => false,
        RDN => neg,
        RUP => !neg,
        _ => unreachable!("bad rounding mode"),
    }
}

/// Rounds the exact value `s + tail` (tail sign `dir`, tail smaller than
/// half an f64 ulp of `s`) to binary32.
pub fn round_f32(s: f64, dir: i32, rm: Rm) -> (u32, u8) {
    assert!(s != 0.0 || dir == 0);
    if s == 0.0 {
        return (if s.is_sign_negative() { 0x8000_0000 } else { 0 }, 0);
    }
    let neg = s < 0.0;
    let m = s.abs();
    let mdir = if neg { -dir } else { dir };
    let sign = if neg { 0x8000_0000u32 } else { 0 };
    let two128 = pow2(128);
    let max = f32::MAX as f64;

    let overflow = |flags: u8| {
        let to_inf = match rm {
            RNE | RMM => true,
            RTZ => false,
            RDN => neg,
            RUP => !neg,
            _ => unreachable!(),
        };
        let bits = if to_inf { 0x7F80_0000 } else { f32::MAX.to_bits() };
        (sign | bits, flags | OF | NX)
    };
    if m > two128 || (m == two128 && mdir >= 0) {
        return overflow(0);
    }

    let (lo, hi) = if m == two128 {
        (max, two128)
    } else {
        let u = ulp_at(m);
        let lo = (m / u).floor() * u;
        if lo == m {
            if mdir == 0 {
                return (sign | (m as f32).to_bits(), 0);
            }
            if mdir > 0 {
                (m, m + u)
            } else {
                (m - ulp_below(m), m)
            }
        } else {
            (lo, lo + u)
        }
    };
    let mid = (lo + hi) / 2.0;
    let ord = if m > mid {
        1
    } else if m < mid {
        -1
    } else {
        mdir
    };
    let lo_even = lo == 0.0 || (lo as f32).to_bits() & 1 == 0;
    let pick_hi = choose(neg, ord, lo_even, rm);
    let r = if pick_hi { hi } else { lo };
    if r == two128 {
        return overflow(0);
    }
    let mut flags = NX;
    let tiny_bound = pow2(-126);
    if m < tiny_bound || (m == tiny_bound && mdir < 0) {
        // Tininess after rounding: round to 24 bits with unbounded exponent.
        let lo2 = tiny_bound - pow2(-150);
        let tiny = if m < lo2 || (m == lo2 && mdir <= 0) {
            true
        } else {
            let mid2 = (lo2 + tiny_bound) / 2.0;
            let ord2 = if m > mid2 {
                1
            } else if m < mid2 {
                -1
            } else {
                mdir
            };
            // lo2 has an odd 24-bit significand.
            !choose(neg, ord2, false, rm)
        };
        if tiny {
            flags |= UF;
        }
    }
    (sign | (r as f32).to_bits(), flags)
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn sgn(x: f64) -> i32 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn nan_result(flags: u8) -> (u32, u8) {
    (QNAN, flags)
}

/// Exact sum of two f64 values (each exactly an f32 or an exact product).
fn round_sum(x: f64, y: f64, rm: Rm) -> (u32, u8) {
    if x == 0.0 && y == 0.0 {
        let neg = if x.is_sign_negative() == y.is_sign_negative() {
            x.is_sign_negative()
        } else {
            rm == RDN
        };
        return (if neg { 0x8000_0000 } else { 0 }, 0);
    }
    let (s, e) = two_sum(x, y);
    if s == 0.0 {
        return (if rm == RDN { 0x8000_0000 } else { 0 }, 0);
    }
    round_f32(s, sgn(e), rm)
}

pub fn add(a: u32, b: u32, rm: Rm) -> (u32, u8) {
    if is_nan(a) || is_nan(b) {
        return nan_result(if is_snan(a) || is_snan(b) { NV } else { 0 });
    }
    let (x, y) = (val(a), val(b));
    if x.is_infinite() || y.is_infinite() {
        if x.is_infinite() && y.is_infinite() && x != y {
            return nan_result(NV);
        }
        let r = if x.is_infinite() { x } else { y };
        return ((r as f32).to_bits(), 0);
    }
    round_sum(x, y, rm)
}

pub fn sub(a: u32, b: u32, rm: Rm) -> (u32, u8) {
    if is_nan(b) {
        return add(a, b, rm);
    }
    add(a, b ^ 0x8000_0000, rm)
}

pub fn mul(a: u32, b: u32, rm: Rm) -> (u32, u8) {
    if is_nan(a) || is_nan(b) {
        return nan_result(if is_snan(a) || is_snan(b) { NV } else { 0 });
    }
    let (x, y) = (val(a), val(b));
    if (x.is_infinite() && y == 0.0) || (y.is_infinite() && x == 0.0) {
        return nan_result(NV);
    }
    let p = x * y; // exact: 48-bit product, exponent well inside f64
    if p.is_infinite() || p == 0.0 {
        return ((p as f32).to_bits(), 0);
    }
    round_f32(p, 0, rm)
}

pub fn div(a: u32, b: u32, rm: Rm) -> (u32, u8) {
    if is_nan(a) || is_nan(b) {
        return nan_result(if is_snan(a) || is_snan(b) { NV } else { 0 });
    }
    let (x, y) = (val(a), val(b));
    if (x == 0.0 && y == 0.0) || (x.is_infinite() && y.is_infinite()) {
        return nan_result(NV);
    }
    let neg = x.is_sign_negative() != y.is_sign_negative();
    let signed = |bits: u32| if neg { bits | 0x8000_0000 } else { bits };
    if x.is_infinite() {
        return (signed(0x7F80_0000), 0);
    }
    if y == 0.0 {
        return (signed(0x7F80_0000), DZ);
    }
    if y.is_infinite() || x == 0.0 {
        return (signed(0), 0);
    }
    let q = x / y;
    // a - q*b computed exactly by the fused operation; its sign relative to
    // b gives the direction of the true quotient from q.
    let r = (-q).mul_add(y, x);
    round_f32(q, sgn(r) * sgn(y), rm)
}

pub fn sqrt(a: u32, rm: Rm) -> (u32, u8) {
    if is_nan(a) {
        return nan_result(if is_snan(a) { NV } else { 0 });
    }
    let x = val(a);
    if x == 0.0 {
        return (a, 0);
    }
    if x < 0.0 {
        return nan_result(NV);
    }
    if x.is_infinite() {
        return (a, 0);
    }
    let q = x.sqrt();
    let r = (-q).mul_add(q, x);
    round_f32(q, sgn(r), rm)
}

/// `(±a·b) ± c` for the four RISC-V fused variants: `neg_prod` negates the
/// product, `neg_c` the addend.
pub fn fma(a: u32, b: u32, c: u32, neg_prod: bool, neg_c: bool, rm: Rm) -> (u32, u8) {
    let (x, y) = (val(a), val(b));
    let inf_zero = (x.is_infinite() && y == 0.0) || (y.is_infinite() && x == 0.0);
    if inf_zero {
        return nan_result(NV);
    }
    if is_nan(a) || is_nan(b) || is_nan(c) {
        return nan_result(if is_snan(a) || is_snan(b) || is_snan(c) { NV } else { 0 });
    }
    let mut p = x * y;
    if neg_prod {
        p = -p;
    }
    let mut z = val(c);
    if neg_c {
        z = -z;
    }
    if p.is_infinite() || z.is_infinite() {
        if p.is_infinite() && z.is_infinite() && p != z {
            return nan_result(NV);
        }
        let r = if p.is_infinite() { p } else { z };
        return ((r as f32).to_bits(), 0);
    }
    round_sum(p, z, rm)
}

/// RV32F `fcvt.w[u].s`.
pub fn to_int(a: u32, rm: Rm, signed: bool) -> (u32, u8) {
    let (lo, hi) = if signed {
        (i32::MIN as f64, i32::MAX as f64)
    } else {
        (0.0, u32::MAX as f64)
    };
    let max_bits = if signed { i32::MAX as u32 } else { u32::MAX };
    let min_bits = if signed { i32::MIN as u32 } else { 0 };
    if is_nan(a) {
        return (max_bits, NV);
    }
    let x = val(a);
    let r = match rm {
        RNE => {
            let f = x.floor();
            let d = x - f;
            if d > 0.5 || (d == 0.5 && f % 2.0 != 0.0) {
                f + 1.0
            } else {
                f
            }
        }
        RTZ => x.trunc(),
        RDN => x.floor(),
        RUP => x.ceil(),
        RMM => x.round(),
        _ => unreachable!(),
    };
    if r > hi || x.is_infinite() && x > 0.0 {
        return (max_bits, NV);
    }
    if r < lo || x.is_infinite() {
        return (min_bits, NV);
    }
    let flags = if r != x { NX } else { 0 };
    let bits = if signed { (r as i64 as i32) as u32 } else { r as u64 as u32 };
    (bits, flags)
}

/// RV32F `fcvt.s.w[u]`.
pub fn from_int(w: u32, rm: Rm, signed: bool) -> (u32, u8) {
    let x = if signed { w as i32 as f64 } else { w as f64 };
    if x == 0.0 {
        return (0, 0);
    }
    round_f32(x, 0, rm)
}

/// `feq`/`flt`/`fle` (kind 0/1/2).
pub fn compare(a: u32, b: u32, kind: u32) -> (bool, u8) {
    if is_nan(a) || is_nan(b) {
        let signal = kind != 0 || is_snan(a) || is_snan(b);
        return (false, if signal { NV } else { 0 });
    }
    let (x, y) = (val(a), val(b));
    let r = match kind {
        0 => x == y,
        1 => x < y,
        _ => x <= y,
    };
    (r, 0)
}

/// RISC-V `fmin.s`/`fmax.s`.
pub fn min_max(a: u32, b: u32, max: bool) -> (u32, u8) {
    let flags = if is_snan(a) || is_snan(b) { NV } else { 0 };
    match (is_nan(a), is_nan(b)) {
        (true, true) => return (QNAN, flags),
        (true, false) => return (b, flags),
        (false, true) => return (a, flags),
        _ => {}
    }
    let (x, y) = (val(a), val(b));
    let r = if x == y {
        // Only zeros compare equal with different patterns.
        let a_neg = a >> 31 == 1;
        if a_neg == max {
            b
        } else {
            a
        }
    } else if (x < y) == max {
        b
    } else {
        a
    };
    (r, flags)
}
