//! Exact evaluation of the finite arithmetic sums: divisor functions (plain,
//! k-fold, character-twisted), primed summatories, floor-trig sums, the
//! two-phase trigonometric sums, Riesz-weighted sums, and circle-problem
//! counts, plus the growth-exponent calculator.
//!
//! The primed convention: when `x` is an integer, terms with `n = x`
//! (or product `= x` for double sums) carry weight one half.

use crate::characters::DirichletCharacter;
use num_complex::Complex64;
use num_rational::Ratio;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

pub const EULER_GAMMA: f64 = crate::specfun::EULER_GAMMA;

#[derive(Debug, Error, PartialEq)]
pub enum SumsError {
    #[error("argument must be >= 1, got {0}")]
    NonPositive(i64),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, SumsError>;

/// Boundary handling for summatories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Halve the terms sitting exactly at an integer x.
    Primed,
    /// Count boundary terms with full weight.
    Plain,
}

fn is_integral(x: f64) -> bool {
    x.floor() == x
}

/// Weight of the term at product value `n` in a sum up to `x`.
fn boundary_weight(x: f64, n: u64, b: Boundary) -> f64 {
    if b == Boundary::Primed && is_integral(x) && n as f64 == x {
        0.5
    } else {
        1.0
    }
}

// ---------------------------------------------------------------------------
// divisor-type point values
// ---------------------------------------------------------------------------

/// Number of positive divisors, by trial division.
pub fn d(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(SumsError::NonPositive(0));
    }
    let mut count = 0;
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            count += if i * i == n { 1 } else { 2 };
        }
        i += 1;
    }
    Ok(count)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i * i != n {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out
}

/// Number of ordered k-tuples of positive integers with product n.
pub fn d_k(n: u64, k: u32) -> Result<u64> {
    if n == 0 {
        return Err(SumsError::NonPositive(0));
    }
    Ok(match k {
        0 => u64::from(n == 1),
        1 => 1,
        _ => divisors(n)
            .into_iter()
            .map(|e| d_k(n / e, k - 1).unwrap())
            .sum(),
    })
}

/// Representations of n as an ordered, signed sum of two squares; r2(0) = 1.
pub fn r2(n: u64) -> u64 {
    let mut count = 0;
    let mut i = 0u64;
    while i * i <= n {
        let rem = n - i * i;
        let j = (rem as f64).sqrt() as u64;
        for jj in j.saturating_sub(1)..=j + 1 {
            if jj * jj == rem {
                let mult = if i == 0 { 1 } else { 2 } * if jj == 0 { 1 } else { 2 };
                count += mult;
            }
        }
        i += 1;
    }
    count
}

// ---------------------------------------------------------------------------
// divisor tables and block sieving
// ---------------------------------------------------------------------------

/// Sieved divisor-count table with prefix sums, for summatories up to a
/// configured bound (the growth harness default is 10^6).
pub struct DivisorTable {
    counts: Vec<u32>,
    prefix: Vec<u64>,
}

impl DivisorTable {
    pub fn up_to(n_max: usize) -> Self {
        let counts = sieve_divisor_block(1, n_max as u64 + 1);
        let mut prefix = vec![0u64; n_max + 1];
        for i in 1..=n_max {
            prefix[i] = prefix[i - 1] + counts[i - 1] as u64;
        }
        DivisorTable { counts, prefix }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn d(&self, n: u64) -> u64 {
        self.counts[(n - 1) as usize] as u64
    }

    /// D(x) = sum_{n <= x} d(n) with the requested boundary handling.
    pub fn summatory(&self, x: f64, b: Boundary) -> f64 {
        if x < 1.0 {
            return 0.0;
        }
        let n = x.floor() as u64;
        let mut s = self.prefix[n.min(self.len() as u64) as usize] as f64;
        if b == Boundary::Primed && is_integral(x) {
            s -= 0.5 * self.d(n) as f64;
        }
        s
    }
}

/// Divisor counts for n in [lo, hi), streamed one block at a time so ranges
/// past the table bound never materialize in full.
pub fn sieve_divisor_block(lo: u64, hi: u64) -> Vec<u32> {
    assert!(lo >= 1 && hi > lo);
    let len = (hi - lo) as usize;
    let mut counts = vec![0u32; len];
    for i in 1..hi {
        let first = lo.div_ceil(i) * i;
        let mut m = first;
        while m < hi {
            counts[(m - lo) as usize] += 1;
            m += i;
        }
    }
    counts
}

/// D(x) by the hyperbola pair count, exact in integer arithmetic:
/// D(x) = 2 sum_{n <= sqrt(x)} floor(x/n) - floor(sqrt(x))^2.
pub fn d_summatory_hyperbola(x: f64, b: Boundary) -> f64 {
    if x < 1.0 {
        return 0.0;
    }
    let mut r = (x.sqrt().floor()) as u64;
    while ((r + 1) * (r + 1)) as f64 <= x {
        r += 1;
    }
    while (r * r) as f64 > x {
        r -= 1;
    }
    let mut total: i64 = -((r * r) as i64);
    for n in 1..=r {
        total += 2 * (x / n as f64).floor() as i64;
    }
    let mut s = total as f64;
    if b == Boundary::Primed && is_integral(x) {
        s -= 0.5 * d(x as u64).unwrap() as f64;
    }
    s
}

/// Delta(x) = D(x) - x (log x + 2 gamma - 1), primed convention.
pub fn delta_error(x: f64) -> f64 {
    let dx = d_summatory_hyperbola(x, Boundary::Primed);
    dx - x * (x.ln() + 2.0 * EULER_GAMMA - 1.0)
}

/// Lattice points of the closed disk of radius sqrt(x) (boundary halved at
/// integer x) and the circle-problem remainder P(x) = R(x) - pi x.
pub fn circle_r_and_p(x: f64) -> (f64, f64) {
    if x < 0.0 {
        return (0.0, 0.0);
    }
    // R(x) = sum_{0 <= n <= x} r2(n) with the primed convention; counted by
    // columns: for each i, the j with i^2 + j^2 <= x
    let mut total = 0.0;
    let imax = x.sqrt().floor() as i64 + 1;
    for i in -imax..=imax {
        let rem = x - (i * i) as f64;
        if rem < 0.0 {
            continue;
        }
        let mut j = rem.sqrt().floor() as i64;
        while ((j + 1) * (j + 1)) as f64 <= rem {
            j += 1;
        }
        while j >= 0 && (j * j) as f64 > rem {
            j -= 1;
        }
        if j < 0 {
            continue;
        }
        total += (2 * j + 1) as f64;
        // boundary circle: halve the two extreme j when they sit on it
        if is_integral(x) && (i * i + j * j) as f64 == x && j > 0 {
            total -= 1.0; // two points (i, +-j) at half weight
        } else if is_integral(x) && (i * i + j * j) as f64 == x && j == 0 {
            total -= 0.5;
        }
    }
    let r = total;
    (r, r - PI * x)
}

// ---------------------------------------------------------------------------
// twisted divisor functions and summatories
// ---------------------------------------------------------------------------

/// d_{chi_1,...,chi_k}(n) with an optional factor n^weight_power at the
/// summatory level.
#[derive(Debug, Clone)]
pub struct TwistedDivisorSpec {
    pub characters: Vec<DirichletCharacter>,
    pub weight_power: u32,
}

impl TwistedDivisorSpec {
    pub fn new(characters: Vec<DirichletCharacter>, weight_power: u32) -> Result<Self> {
        if characters.is_empty() {
            return Err(SumsError::InvalidSpec("need at least one character".into()));
        }
        Ok(TwistedDivisorSpec {
            characters,
            weight_power,
        })
    }
}

/// Character-twisted divisor function. With one character this is the
/// divisor sum `d_chi(n) = sum_{d|n} chi(d)`; with k >= 2 characters it is
/// the sum of `chi_1(n_1) ... chi_k(n_k)` over ordered factorizations
/// `n_1 ... n_k = n`.
pub fn twisted_divisor(spec: &TwistedDivisorSpec, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(SumsError::NonPositive(0));
    }
    Ok(twisted_rec(&spec.characters, n))
}

fn twisted_rec(chars: &[DirichletCharacter], n: u64) -> Complex64 {
    if chars.len() == 1 {
        // single character: convolution against the constant-one function
        return divisors(n)
            .into_iter()
            .map(|e| chars[0].eval(e as i64))
            .sum();
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for e in divisors(n) {
        let head = chars[0].eval(e as i64);
        if head.norm_sqr() > 0.0 {
            acc += head * conv_rec(&chars[1..], n / e);
        }
    }
    acc
}

/// Plain multiplicative convolution chi_1 * ... * chi_k evaluated at n.
fn conv_rec(chars: &[DirichletCharacter], n: u64) -> Complex64 {
    if chars.len() == 1 {
        return chars[0].eval(n as i64);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for e in divisors(n) {
        let head = chars[0].eval(e as i64);
        if head.norm_sqr() > 0.0 {
            acc += head * conv_rec(&chars[1..], n / e);
        }
    }
    acc
}

/// What a summatory runs over.
pub enum SummatorySpec<'a> {
    PlainD,
    Dk(u32),
    Twisted(&'a TwistedDivisorSpec),
}

/// sum_{n <= x} n^w a(n) with the requested boundary convention, where a is
/// d, d_k, or a twisted divisor function (w comes from the twisted spec).
pub fn summatory(spec: &SummatorySpec, x: f64, b: Boundary) -> Complex64 {
    if x < 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    let nmax = x.floor() as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=nmax {
        let w = boundary_weight(x, n, b);
        let term = match spec {
            SummatorySpec::PlainD => Complex64::new(d(n).unwrap() as f64, 0.0),
            SummatorySpec::Dk(k) => Complex64::new(d_k(n, *k).unwrap() as f64, 0.0),
            SummatorySpec::Twisted(t) => {
                let base = twisted_rec(&t.characters, n);
                base * (n as f64).powi(t.weight_power as i32)
            }
        };
        acc += term * w;
    }
    acc
}

/// Character-twisted first-moment summatory sum_{n<=x} n d_{chi1,chi2}(n) in
/// O(x) using period prefix sums; used by the growth probes where direct
/// factorization enumeration would dominate.
pub fn dstar_chi2_fast(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    x: f64,
    b: Boundary,
) -> Complex64 {
    // sum_{ab <= x} a chi1(a) b chi2(b) = sum_a a chi1(a) W2(x/a)
    // full-period character sums must vanish for the period reduction
    debug_assert!(!chi2.is_principal());
    let q2 = chi2.modulus();
    let mut period: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); q2 as usize];
    let mut run = Complex64::new(0.0, 0.0);
    for r in 1..q2 {
        run += chi2.eval(r as i64) * r as f64;
        period[r as usize] = run;
    }
    let full = run; // sum over a complete period of b chi2(b), plus m q2 * 0
    let w2 = |bound: f64| -> Complex64 {
        if bound < 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let n = bound.floor() as u64;
        let (m, r) = (n / q2, n % q2);
        // sum_{b<=n} b chi2(b) = m * full + (offset corrections) + partial
        // with b = j q2 + r contributing (j q2 + r) chi2(r): the j q2 part
        // sums to q2 chi-sum * j over full periods, which vanishes except
        // through the r-weighted part below
        let mut acc = full * m as f64;
        // correction: terms j*q2*chi2(r) summed over j=0..m-1 for all r, plus
        // the final partial period at j=m
        // sum_{j=0}^{m-1} sum_{r=1}^{q2-1} j q2 chi2(r) = 0 for non-principal
        // chi2, so only the partial period remains:
        acc += period[r as usize];
        // partial period offset m*q2*chi2-prefix is zero only for the full
        // period; for the tail r terms the offset is m q2 sum_{s<=r} chi2(s)
        let mut chi_prefix = Complex64::new(0.0, 0.0);
        for s in 1..=r {
            chi_prefix += chi2.eval(s as i64);
        }
        acc += chi_prefix * (m * q2) as f64;
        acc
    };
    let nmax = x.floor() as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 1..=nmax {
        let c1 = chi1.eval(a as i64);
        if c1.norm_sqr() == 0.0 {
            continue;
        }
        acc += c1 * a as f64 * w2(x / a as f64);
    }
    if b == Boundary::Primed && is_integral(x) {
        let spec = TwistedDivisorSpec {
            characters: vec![chi1.clone(), chi2.clone()],
            weight_power: 1,
        };
        acc -= twisted_divisor(&spec, nmax).unwrap() * nmax as f64 * 0.5;
    }
    acc
}

/// Zero-weight analogue of [`dstar_chi2_fast`]: sum_{n<=x} d_{chi1,chi2}(n).
pub fn d_chi2_fast(
    chi1: &DirichletCharacter,
    chi2: &DirichletCharacter,
    x: f64,
    b: Boundary,
) -> Complex64 {
    debug_assert!(!chi2.is_principal());
    let q2 = chi2.modulus();
    let mut prefix: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); q2 as usize];
    let mut run = Complex64::new(0.0, 0.0);
    for r in 1..q2 {
        run += chi2.eval(r as i64);
        prefix[r as usize] = run;
    }
    // full-period chi2 sum vanishes for non-principal chi2
    let s2 = |bound: f64| -> Complex64 {
        if bound < 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        prefix[(bound.floor() as u64 % q2) as usize]
    };
    let nmax = x.floor() as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 1..=nmax {
        let c1 = chi1.eval(a as i64);
        if c1.norm_sqr() == 0.0 {
            continue;
        }
        acc += c1 * s2(x / a as f64);
    }
    if b == Boundary::Primed && is_integral(x) {
        let spec = TwistedDivisorSpec {
            characters: vec![chi1.clone(), chi2.clone()],
            weight_power: 0,
        };
        acc -= twisted_divisor(&spec, nmax).unwrap() * 0.5;
    }
    acc
}

// ---------------------------------------------------------------------------
// trigonometric sums
// ---------------------------------------------------------------------------

/// A phase, either an exact fraction a/p or a real number in (0,1).
#[derive(Debug, Clone, Copy)]
pub enum Phase {
    Rational { a: u64, p: u64 },
    Real(f64),
}

impl Phase {
    pub fn value(&self) -> f64 {
        match *self {
            Phase::Rational { a, p } => a as f64 / p as f64,
            Phase::Real(t) => t,
        }
    }

    fn validate(&self) -> Result<()> {
        let v = self.value();
        if !(v > 0.0 && v < 1.0) {
            return Err(SumsError::InvalidSpec(format!("phase {v} outside (0,1)")));
        }
        if let Phase::Rational { a, p } = *self {
            if gcd(a, p) != 1 {
                return Err(SumsError::InvalidSpec(format!("{a}/{p} not reduced")));
            }
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigSumKind {
    /// sum' cos(2 pi m phase_m) cos(2 pi n phase_n)
    Cc,
    /// sum' cos(2 pi n phase_m) sin(2 pi m phase_n) (cos paired with the
    /// first phase)
    Cs,
    /// sum' m n sin sin, optionally Riesz-weighted by (x^2 - (mn)^2)^rho
    Ss,
    /// sum' [x/n] sin(2 pi n phase)
    FloorSin,
    /// sum' [x/n] cos(2 pi n phase)
    FloorCos,
    /// sum' [x/n] sin(2 pi n theta), real theta
    Entry1Lhs,
    /// sum' [x/n] cos(2 pi n theta), real theta
    Entry2Lhs,
    /// sum' cos(2 pi m sigma) sin(2 pi n theta)
    BiLhs,
    /// sum' cos(2 pi m sigma) cos(2 pi n theta)
    TiLhs,
    /// sum' m n sin(2 pi m sigma) sin(2 pi n theta)
    TtLhs,
    /// sum over (2j+1)(2k+1) <= x of (-1)^{j+k} (2j+1)(2k+1)
    LatticeQq,
}

#[derive(Debug, Clone)]
pub struct TrigSumSpec {
    pub kind: TrigSumKind,
    /// phase attached to the m-side factor (sigma or a/p); unused by floor
    /// and lattice kinds
    pub phase_m: Option<Phase>,
    /// phase attached to the n-side factor (theta or b/q)
    pub phase_n: Option<Phase>,
    pub x: f64,
    /// Riesz exponent; only `Ss` consumes it
    pub rho: f64,
}

impl TrigSumSpec {
    pub fn two_phase(kind: TrigSumKind, phase_m: Phase, phase_n: Phase, x: f64) -> Self {
        TrigSumSpec {
            kind,
            phase_m: Some(phase_m),
            phase_n: Some(phase_n),
            x,
            rho: 0.0,
        }
    }

    pub fn one_phase(kind: TrigSumKind, phase: Phase, x: f64) -> Self {
        TrigSumSpec {
            kind,
            phase_m: None,
            phase_n: Some(phase),
            x,
            rho: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        use TrigSumKind::*;
        if !(self.x > 0.0) {
            return Err(SumsError::InvalidSpec(format!("x = {} not positive", self.x)));
        }
        if self.rho < 0.0 {
            return Err(SumsError::InvalidSpec("rho must be >= 0".into()));
        }
        match self.kind {
            Cc | Cs | Ss | BiLhs | TiLhs | TtLhs => {
                let m = self
                    .phase_m
                    .ok_or_else(|| SumsError::InvalidSpec("missing m-side phase".into()))?;
                let n = self
                    .phase_n
                    .ok_or_else(|| SumsError::InvalidSpec("missing n-side phase".into()))?;
                m.validate()?;
                n.validate()
            }
            FloorSin | FloorCos | Entry1Lhs | Entry2Lhs => {
                let n = self
                    .phase_n
                    .ok_or_else(|| SumsError::InvalidSpec("missing phase".into()))?;
                n.validate()
            }
            LatticeQq => Ok(()),
        }
    }
}

/// Exact finite evaluation of the requested trigonometric sum.
pub fn trig_sum(spec: &TrigSumSpec) -> Result<f64> {
    use TrigSumKind::*;
    spec.validate()?;
    let x = spec.x;
    Ok(match spec.kind {
        FloorSin | Entry1Lhs => floor_trig(x, spec.phase_n.unwrap().value(), f64::sin),
        FloorCos | Entry2Lhs => floor_trig(x, spec.phase_n.unwrap().value(), f64::cos),
        Cc | TiLhs => double_trig(x, spec.phase_m.unwrap().value(), f64::cos, spec.phase_n.unwrap().value(), f64::cos, false, 0.0),
        Cs | BiLhs => double_trig(x, spec.phase_m.unwrap().value(), f64::cos, spec.phase_n.unwrap().value(), f64::sin, false, 0.0),
        Ss | TtLhs => double_trig(x, spec.phase_m.unwrap().value(), f64::sin, spec.phase_n.unwrap().value(), f64::sin, true, spec.rho),
        LatticeQq => lattice_qq(x),
    })
}

fn floor_trig(x: f64, theta: f64, trig: fn(f64) -> f64) -> f64 {
    if x < 1.0 {
        return 0.0;
    }
    let nmax = x.floor() as u64;
    let xint = is_integral(x);
    let mut acc = KahanSum::default();
    for n in 1..=nmax {
        let mut w = (x / n as f64).floor();
        if xint && nmax % n == 0 {
            w -= 0.5;
        }
        acc.add(w * trig(TAU * n as f64 * theta));
    }
    acc.value()
}

fn double_trig(
    x: f64,
    sigma: f64,
    trig_m: fn(f64) -> f64,
    theta: f64,
    trig_n: fn(f64) -> f64,
    weighted: bool,
    rho: f64,
) -> f64 {
    if x < 1.0 {
        return 0.0;
    }
    let xint = is_integral(x);
    let mut acc = KahanSum::default();
    let mmax = x.floor() as u64;
    for m in 1..=mmax {
        let fm = trig_m(TAU * m as f64 * sigma);
        if fm == 0.0 {
            continue;
        }
        let nmax = (x / m as f64).floor() as u64;
        for n in 1..=nmax {
            let mut t = fm * trig_n(TAU * n as f64 * theta);
            if weighted {
                t *= (m * n) as f64;
            }
            if rho > 0.0 {
                let prod = (m * n) as f64;
                t *= (x * x - prod * prod).powf(rho);
            } else if xint && m * n == mmax {
                t *= 0.5;
            }
            acc.add(t);
        }
    }
    acc.value()
}

fn lattice_qq(x: f64) -> f64 {
    // closed inner sum: sum_{k=0}^{K} (-1)^k (2k+1) = (-1)^K (K+1)
    if x < 1.0 {
        return 0.0;
    }
    let mut acc = 0i64;
    let mut j = 0u64;
    while (2 * j + 1) as f64 <= x {
        let a = 2 * j + 1;
        let kk = ((x / a as f64 - 1.0) / 2.0).floor() as i64;
        if kk < 0 {
            break;
        }
        let inner = if kk % 2 == 0 { kk + 1 } else { -(kk + 1) };
        let signed = if j % 2 == 0 { inner } else { -inner };
        acc += a as i64 * signed;
        j += 1;
    }
    let mut total = acc as f64;
    if is_integral(x) {
        // primed convention: halve products landing exactly on x
        let xi = x as u64;
        for a in divisors(xi) {
            let b = xi / a;
            if a % 2 == 1 && b % 2 == 1 {
                let jj = (a - 1) / 2;
                let kk = (b - 1) / 2;
                let sign = if (jj + kk) % 2 == 0 { 1.0 } else { -1.0 };
                total -= 0.5 * sign * (a * b) as f64;
            }
        }
    }
    total
}

/// Compensated accumulator for long oscillatory sums.
#[derive(Default, Clone, Copy)]
pub struct KahanSum {
    s: f64,
    c: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let t = self.s + v;
        if self.s.abs() >= v.abs() {
            self.c += (self.s - t) + v;
        } else {
            self.c += (v - t) + self.s;
        }
        self.s = t;
    }

    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

// ---------------------------------------------------------------------------
// growth exponents
// ---------------------------------------------------------------------------

/// Exponent pair for the k-fold sine sums: the lower-bound power
/// (3k-1)/(2k) and the upper-bound power 2k/(k+1).
pub fn cn_exponents(k: u64) -> (Ratio<i64>, Ratio<i64>) {
    let k = k as i64;
    (
        Ratio::new(3 * k - 1, 2 * k),
        Ratio::new(2 * k, k + 1),
    )
}

/// theta = (A delta + rho (2A - 1) - 1/2) / (2A), exact in rationals.
pub fn cn_theta(a: Ratio<i64>, delta: Ratio<i64>, rho: Ratio<i64>) -> Ratio<i64> {
    let two = Ratio::from_integer(2);
    let half = Ratio::new(1, 2);
    (a * delta + rho * (two * a - Ratio::from_integer(1)) - half) / (two * a)
}
