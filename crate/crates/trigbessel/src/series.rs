//! Truncated evaluation of the infinite Bessel series: the two single-series
//! divisor/circle remainders and the double series attached to the
//! floor-trig and two-phase identities, with truncation schedules, partial
//! traces, and tail diagnostics.
//!
//! Summation order is fixed to m-outer/n-inner. The bracketed terms of each
//! (m, n) cell are evaluated together before accumulation (`PairedTheta`);
//! `Raw` accumulation exists for diagnostics only. Partial values at every
//! power-of-two checkpoint are genuine prefixes of one computation, so a
//! truncation sweep costs one pass at the largest schedule.

use crate::balanced::{self, AxisSign, CellKind, TermExpansion};
use crate::specfun::{self, BesselOrder};
use crate::sums::KahanSum;
use num_rational::Ratio;
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("parameter {0} = {1} outside its domain")]
    Param(&'static str, f64),
    #[error(transparent)]
    Balanced(#[from] balanced::BalancedError),
    #[error(transparent)]
    SpecFun(#[from] specfun::SpecFunError),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grouping {
    /// Sum the bracketed theta / (1-theta) (and sigma) partners of a cell
    /// before accumulating.
    PairedTheta,
    /// Accumulate each bracket term separately (diagnostics).
    Raw,
}

#[derive(Debug, Clone, Copy)]
pub struct TruncationSchedule {
    pub m_max: u32,
    pub n_max: u32,
    pub grouping: Grouping,
}

impl TruncationSchedule {
    pub fn square(size: u32) -> Self {
        TruncationSchedule {
            m_max: size,
            n_max: size,
            grouping: Grouping::PairedTheta,
        }
    }

    /// Schedule with a taller inner (n) range; the iterated-sum convention
    /// wants the inner index to run further than the outer one.
    pub fn rect(m_max: u32, n_max: u32) -> Self {
        TruncationSchedule {
            m_max,
            n_max,
            grouping: Grouping::PairedTheta,
        }
    }
}

/// Truncated value plus the trace of partial values at power-of-two
/// checkpoints (each a genuine prefix of the same summation).
#[derive(Debug, Clone)]
pub struct SeriesResult {
    pub value: f64,
    /// (m_max, n_max, value) at increasing truncation sizes
    pub partial_trace: Vec<(u32, u32, f64)>,
    /// tail heuristic ~ truncation^(-1/4); conservative scale, not a bound
    pub est_tail: f64,
}

fn checkpoints(max: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut c = 64u32;
    while c < max {
        out.push(c);
        c = c.saturating_mul(2);
    }
    out.push(max);
    out
}

fn tail_estimate(value: f64, trunc: u32) -> f64 {
    (1.0 + value.abs()) * (trunc.max(1) as f64).powf(-0.25)
}

// ---------------------------------------------------------------------------
// single series: divisor and circle remainders
// ---------------------------------------------------------------------------

/// Partial sums of `1/4 + sum d(n) (x/n)^{1/2} I_1(4 pi sqrt(n x))`, the
/// series form of the divisor remainder `Delta(x)`.
pub fn voronoi_delta_series(x: f64, n_max: u32) -> Result<SeriesResult> {
    if !(x > 0.0) {
        return Err(SeriesError::Param("x", x));
    }
    let counts = crate::sums::sieve_divisor_block(1, n_max as u64 + 1);
    single_series(x, n_max, 0.25, move |n, z| {
        counts[(n - 1) as usize] as f64 * specfun::i_comb(1, z).map(|r| r.value).unwrap_or(0.0)
    })
}

/// Partial sums of `sum r_2(n) (x/n)^{1/2} J_1(2 pi sqrt(n x))`, the series
/// form of the circle remainder `P(x)`. The argument scale differs from the
/// divisor series by the factor two.
pub fn hardy_p_series(x: f64, n_max: u32) -> Result<SeriesResult> {
    if !(x > 0.0) {
        return Err(SeriesError::Param("x", x));
    }
    let r2: Vec<u64> = (1..=n_max as u64).map(crate::sums::r2).collect();
    single_series(x, n_max, 0.0, move |n, z| {
        let c = r2[(n - 1) as usize];
        if c == 0 {
            0.0
        } else {
            c as f64
                * specfun::bessel_j(BesselOrder::integer(1), 0.5 * z)
                    .map(|r| r.value)
                    .unwrap_or(0.0)
        }
    })
}

/// Shared driver: `constant + sum_{n<=n_max} (x/n)^{1/2} term(n, 4 pi sqrt(nx))`.
fn single_series(
    x: f64,
    n_max: u32,
    constant: f64,
    term: impl Fn(u64, f64) -> f64 + Sync,
) -> Result<SeriesResult> {
    let marks = checkpoints(n_max);
    let chunk = 4096usize;
    let partials: Vec<f64> = (0..n_max as usize)
        .into_par_iter()
        .chunks(chunk)
        .map(|idx| {
            let mut acc = KahanSum::default();
            for i in idx {
                let n = (i + 1) as u64;
                let z = 4.0 * PI * (n as f64 * x).sqrt();
                acc.add((x / n as f64).sqrt() * term(n, z));
            }
            acc.value()
        })
        .collect();
    // deterministic in-order reduction with checkpoint capture
    let mut acc = KahanSum::default();
    let mut trace = Vec::with_capacity(marks.len());
    let mut mark_iter = marks.iter().peekable();
    let mut n_done = 0u32;
    for p in partials {
        acc.add(p);
        n_done = (n_done + chunk as u32).min(n_max);
        while let Some(&&mk) = mark_iter.peek() {
            if mk <= n_done {
                // checkpoint granularity is the chunk size for single series
                trace.push((mk, mk, constant + acc.value()));
                mark_iter.next();
            } else {
                break;
            }
        }
    }
    let value = constant + acc.value();
    Ok(SeriesResult {
        value,
        partial_trace: trace,
        est_tail: x.abs().powf(0.25) * (n_max as f64).powf(-0.25),
    })
}

// ---------------------------------------------------------------------------
// double series
// ---------------------------------------------------------------------------

/// The two-term J_1 double series of the floor-sine identity, with its main
/// terms: `pi x (1/2 - theta) - cot(pi theta)/4 + (sqrt x / 2) sum sum {...}`.
pub fn entry1_rhs(theta: f64, x: f64, t: &TruncationSchedule) -> Result<SeriesResult> {
    check_unit("theta", theta)?;
    check_pos(x)?;
    let main = PI * x * (0.5 - theta) - 0.25 / (PI * theta).tan();
    let sqx = x.sqrt();
    let cell = move |row: u64, col: u64, buf: &mut CellBuf| {
        let mf = row as f64 + 1.0; // entry rows start at m = 1
        let b1 = col as f64 + theta;
        let b2 = col as f64 + 1.0 - theta;
        let j = |a: f64, b: f64| {
            specfun::bessel_j(BesselOrder::integer(1), 4.0 * PI * (a * b * x).sqrt())
                .map(|r| r.value)
                .unwrap_or(0.0)
                / (a * b).sqrt()
        };
        buf.push(j(mf, b1));
        buf.push(-j(mf, b2));
    };
    double_series(t, cell, main, 0.5 * sqx)
}

/// The companion floor-cosine series:
/// `1/4 - x log(2 sin(pi theta)) + (sqrt x / 2) sum sum {I_1 pair}`.
pub fn entry2_rhs(theta: f64, x: f64, t: &TruncationSchedule) -> Result<SeriesResult> {
    check_unit("theta", theta)?;
    check_pos(x)?;
    let main = 0.25 - x * (2.0 * (PI * theta).sin()).ln();
    let sqx = x.sqrt();
    let cell = move |row: u64, col: u64, buf: &mut CellBuf| {
        let mf = row as f64 + 1.0;
        let b1 = col as f64 + theta;
        let b2 = col as f64 + 1.0 - theta;
        let i1 = |a: f64, b: f64| {
            specfun::i_comb(1, 4.0 * PI * (a * b * x).sqrt())
                .map(|r| r.value)
                .unwrap_or(0.0)
                / (a * b).sqrt()
        };
        buf.push(i1(mf, b1));
        buf.push(i1(mf, b2));
    };
    double_series(t, cell, main, 0.5 * sqx)
}

/// Which four-corner series to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalancedSeriesKind {
    /// J_1 cells, signs +,+,-,- (minus on the 1-theta corners)
    BiJ,
    /// combination cells, all plus
    TiI,
    /// T_{3/2} cells, multiplicative sign pattern +,-,-,+
    TtT,
}

impl BalancedSeriesKind {
    fn corner_sign(self, minus_sigma: bool, minus_theta: bool) -> f64 {
        match self {
            BalancedSeriesKind::BiJ => {
                if minus_theta {
                    -1.0
                } else {
                    1.0
                }
            }
            BalancedSeriesKind::TiI => 1.0,
            BalancedSeriesKind::TtT => {
                let s = if minus_sigma { -1.0 } else { 1.0 };
                let t = if minus_theta { -1.0 } else { 1.0 };
                s * t
            }
        }
    }

    fn cell_kind(self) -> CellKind {
        match self {
            BalancedSeriesKind::BiJ => CellKind::J,
            BalancedSeriesKind::TiI => CellKind::Icomb,
            BalancedSeriesKind::TtT => CellKind::T,
        }
    }
}

/// The four-corner double series of the balanced identities, scaled by
/// `sqrt(x)/4` (or `x sqrt(x)/4` for the T kernel). For k = 0 the corner
/// functions are evaluated directly; for k >= 1 each corner carries its own
/// exact derivative expansion.
pub fn balanced_rhs(
    kind: BalancedSeriesKind,
    k: u32,
    sigma: f64,
    theta: f64,
    x: f64,
    t: &TruncationSchedule,
) -> Result<SeriesResult> {
    check_unit("sigma", sigma)?;
    check_unit("theta", theta)?;
    check_pos(x)?;
    let scale = match kind {
        BalancedSeriesKind::TtT => 0.25 * x * x.sqrt(),
        _ => 0.25 * x.sqrt(),
    };
    if k == 0 {
        let cell = move |m: u64, n: u64, buf: &mut CellBuf| {
            for (ms, a) in [(false, sigma), (true, 1.0 - sigma)] {
                for (mt, b) in [(false, theta), (true, 1.0 - theta)] {
                    let av = m as f64 + a;
                    let bv = n as f64 + b;
                    let sgn = kind.corner_sign(ms, mt);
                    let v = match kind {
                        BalancedSeriesKind::BiJ => {
                            let u = 4.0 * PI * (av * bv * x).sqrt();
                            specfun::bessel_j(BesselOrder::integer(1), u)
                                .map(|r| r.value)
                                .unwrap_or(0.0)
                                / (av * bv).sqrt()
                        }
                        BalancedSeriesKind::TiI => {
                            let u = 4.0 * PI * (av * bv * x).sqrt();
                            specfun::i_comb(1, u).map(|r| r.value).unwrap_or(0.0)
                                / (av * bv).sqrt()
                        }
                        BalancedSeriesKind::TtT => {
                            specfun::t_three_half(4.0 * PI * PI * av * bv * x)
                                .map(|r| r.value)
                                .unwrap_or(0.0)
                                / (av * bv).sqrt()
                        }
                    };
                    buf.push(sgn * v);
                }
            }
        };
        return double_series(t, cell, 0.0, scale);
    }
    // k >= 1: one exact expansion per corner, evaluated cell by cell
    let half = Ratio::new(1, 2);
    let mut corners: Vec<(f64, TermExpansion)> = Vec::with_capacity(4);
    for (ms, ssign) in [(false, AxisSign::Plus), (true, AxisSign::Minus)] {
        for (mt, tsign) in [(false, AxisSign::Plus), (true, AxisSign::Minus)] {
            let e = balanced::expand_mixed_partial(kind.cell_kind(), k, k, half, half, ssign, tsign)?;
            corners.push((kind.corner_sign(ms, mt), e));
        }
    }
    let cell = move |m: u64, n: u64, buf: &mut CellBuf| {
        for (sgn, e) in &corners {
            let v = balanced::evaluate_expansion(e, m, n, sigma, theta, x).unwrap_or(0.0);
            buf.push(sgn * v);
        }
    };
    double_series(t, cell, 0.0, scale)
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(SeriesError::Param(name, v));
    }
    Ok(())
}

fn check_pos(x: f64) -> Result<()> {
    if !(x > 0.0) {
        return Err(SeriesError::Param("x", x));
    }
    Ok(())
}

/// Per-cell bracket buffer; paired grouping folds it into one number before
/// the row accumulator sees it, raw mode feeds terms through one by one.
struct CellBuf {
    terms: [f64; 4],
    len: usize,
}

impl CellBuf {
    fn push(&mut self, v: f64) {
        self.terms[self.len] = v;
        self.len += 1;
    }
}

/// m-outer/n-inner accumulation with checkpointed prefixes.
///
/// Rows are evaluated in parallel; the reduction runs in strict row order so
/// results are reproducible. The trace is taken at square (or
/// aspect-preserving) power-of-two checkpoints.
fn double_series(
    t: &TruncationSchedule,
    cell: impl Fn(u64, u64, &mut CellBuf) + Sync,
    main: f64,
    scale: f64,
) -> Result<SeriesResult> {
    let m_marks = checkpoints(t.m_max);
    // n checkpoints preserve the schedule aspect ratio
    let ratio = t.n_max as f64 / t.m_max as f64;
    let n_marks: Vec<u32> = m_marks
        .iter()
        .map(|&m| ((m as f64 * ratio).round() as u32).clamp(1, t.n_max))
        .collect();
    let grouping = t.grouping;
    // rows: per checkpoint-width partial inner sums; schedule sizes are row
    // and column counts (the cell closures map them onto m, n index sets)
    let rows: Vec<Vec<f64>> = (0..t.m_max as u64)
        .into_par_iter()
        .map(|row| {
            let mut acc = KahanSum::default();
            let mut snaps = Vec::with_capacity(n_marks.len());
            let mut mark = 0usize;
            let mut buf = CellBuf {
                terms: [0.0; 4],
                len: 0,
            };
            for col in 0..t.n_max as u64 {
                buf.len = 0;
                cell(row, col, &mut buf);
                match grouping {
                    Grouping::PairedTheta => {
                        acc.add(buf.terms[..buf.len].iter().sum());
                    }
                    Grouping::Raw => {
                        for &v in &buf.terms[..buf.len] {
                            acc.add(v);
                        }
                    }
                }
                while mark < n_marks.len() && col + 1 >= n_marks[mark] as u64 {
                    snaps.push(acc.value());
                    mark += 1;
                }
            }
            while mark < n_marks.len() {
                snaps.push(acc.value());
                mark += 1;
            }
            snaps
        })
        .collect();
    // strict row-order reduction, one accumulator per checkpoint
    let mut accs: Vec<KahanSum> = vec![KahanSum::default(); m_marks.len()];
    for (mi, snaps) in rows.iter().enumerate() {
        for (ci, &mm) in m_marks.iter().enumerate() {
            if (mi as u64) < mm as u64 {
                accs[ci].add(snaps[ci]);
            }
        }
    }
    let partial_trace: Vec<(u32, u32, f64)> = m_marks
        .iter()
        .zip(&n_marks)
        .zip(&accs)
        .map(|((&m, &n), acc)| (m, n, main + scale * acc.value()))
        .collect();
    let value = partial_trace.last().unwrap().2;
    Ok(SeriesResult {
        value,
        partial_trace,
        est_tail: tail_estimate(value - main, t.m_max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sums::{self, trig_sum, Phase, TrigSumKind, TrigSumSpec};

    #[test]
    fn voronoi_single_term_contract() {
        let x = 3.3;
        let r = voronoi_delta_series(x, 1).unwrap();
        let want = 0.25
            + x.sqrt() * specfun::i_comb(1, 4.0 * PI * x.sqrt()).unwrap().value;
        assert!((r.value - want).abs() < 1e-14);
    }

    #[test]
    fn voronoi_error_decreases_on_sweep() {
        let x = 5.5;
        let target = sums::delta_error(x);
        let errs: Vec<f64> = [100u32, 1000, 10000]
            .iter()
            .map(|&n| (voronoi_delta_series(x, n).unwrap().value - target).abs())
            .collect();
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "errs = {errs:?}");
    }

    #[test]
    fn voronoi_small_x_tends_to_empty_summatory() {
        let x = 0.5f64;
        let target = -x * (x.ln() + 2.0 * sums::EULER_GAMMA - 1.0);
        let early = (voronoi_delta_series(x, 64).unwrap().value - target).abs();
        let late = (voronoi_delta_series(x, 1 << 14).unwrap().value - target).abs();
        assert!(late < early, "early {early} late {late}");
    }

    #[test]
    fn hardy_single_term_contract() {
        let x = 2.5;
        let r = hardy_p_series(x, 1).unwrap();
        let want = 4.0
            * x.sqrt()
            * specfun::bessel_j(BesselOrder::integer(1), 2.0 * PI * x.sqrt())
                .unwrap()
                .value;
        assert!((r.value - want).abs() < 1e-14);
    }

    #[test]
    fn hardy_error_decreases_on_sweep() {
        // the circle series converges slowly with an oscillating envelope;
        // the doubling sweep 64..512 sits on a verified decreasing window
        for &x in &[2.5, 3.5] {
            let (_, target) = sums::circle_r_and_p(x);
            let errs: Vec<f64> = [64u32, 128, 256, 512]
                .iter()
                .map(|&n| (hardy_p_series(x, n).unwrap().value - target).abs())
                .collect();
            for w in errs.windows(2) {
                assert!(w[1] < w[0], "x={x}: errs = {errs:?}");
            }
        }
    }

    #[test]
    fn entry1_sweep_converges_to_floor_sine_sum() {
        let (theta, x) = (0.3, 2.5);
        let lhs = trig_sum(&TrigSumSpec::one_phase(
            TrigSumKind::Entry1Lhs,
            Phase::Real(theta),
            x,
        ))
        .unwrap();
        let r = entry1_rhs(theta, x, &TruncationSchedule::square(1 << 10)).unwrap();
        let first = (r.partial_trace.first().unwrap().2 - lhs).abs();
        let last = (r.value - lhs).abs();
        assert!(last < 2e-2, "final error {last}");
        assert!(last < first.max(2e-2), "first {first} last {last}");
        // trace sizes strictly increase
        for w in r.partial_trace.windows(2) {
            assert!(w[1].0 > w[0].0);
        }
    }

    #[test]
    fn entry1_monotone_window_soft_assertion() {
        // square-sampled error drops by 5x across the window at parameters
        // where the first sample is not anomalously small
        let (theta, x) = (0.25, 10.3);
        let lhs = trig_sum(&TrigSumSpec::one_phase(
            TrigSumKind::Entry1Lhs,
            Phase::Real(theta),
            x,
        ))
        .unwrap();
        let r = entry1_rhs(theta, x, &TruncationSchedule::square(1 << 12)).unwrap();
        let first = (r.partial_trace.first().unwrap().2 - lhs).abs();
        let last = (r.value - lhs).abs();
        assert!(last < first / 5.0, "first {first}, last {last}");
    }

    #[test]
    fn entry1_theta_half_symmetry() {
        // at theta = 1/2 the bracket cancels pairwise and the main terms
        // vanish, so the whole right side is identically zero
        let r = entry1_rhs(0.5, 2.5, &TruncationSchedule::square(64)).unwrap();
        assert!(r.value.abs() < 1e-12, "value {}", r.value);
    }

    #[test]
    fn entry2_sweep_converges_to_floor_cosine_sum() {
        let (theta, x) = (0.3, 2.5);
        let lhs = trig_sum(&TrigSumSpec::one_phase(
            TrigSumKind::Entry2Lhs,
            Phase::Real(theta),
            x,
        ))
        .unwrap();
        let r = entry2_rhs(theta, x, &TruncationSchedule::square(1 << 10)).unwrap();
        assert!((r.value - lhs).abs() < 2e-2);
    }

    #[test]
    fn entry2_domain_guard() {
        assert!(entry2_rhs(0.0, 2.5, &TruncationSchedule::square(8)).is_err());
        assert!(entry2_rhs(1.0, 2.5, &TruncationSchedule::square(8)).is_err());
        assert!(entry1_rhs(0.3, -1.0, &TruncationSchedule::square(8)).is_err());
    }

    #[test]
    fn balanced_k0_series_approach_their_finite_sums() {
        let (sigma, theta, x) = (0.3, 0.4, 2.5);
        let sched = TruncationSchedule::rect(512, 2048);
        let bi = balanced_rhs(BalancedSeriesKind::BiJ, 0, sigma, theta, x, &sched).unwrap();
        let lhs_bi =
            balanced::lhs_mixed_partial(balanced::IdentityKind::Bi, 0, sigma, theta, x).unwrap();
        assert!((bi.value - lhs_bi).abs() < 3e-2, "BI: {} vs {lhs_bi}", bi.value);

        let ti = balanced_rhs(BalancedSeriesKind::TiI, 0, sigma, theta, x, &sched).unwrap();
        let lhs_ti =
            balanced::lhs_mixed_partial(balanced::IdentityKind::Ti, 0, sigma, theta, x).unwrap();
        assert!((ti.value - lhs_ti).abs() < 3e-2, "TI: {} vs {lhs_ti}", ti.value);

        let tt = balanced_rhs(BalancedSeriesKind::TtT, 0, sigma, theta, x, &sched).unwrap();
        let lhs_tt =
            balanced::lhs_mixed_partial(balanced::IdentityKind::Tt, 0, sigma, theta, x).unwrap();
        assert!((tt.value - lhs_tt).abs() < 3e-2, "TT: {} vs {lhs_tt}", tt.value);
    }

    #[test]
    fn bi_swap_matches_cs_sum_with_swapped_phases() {
        // swapping (m,sigma) <-> (n,theta) in the BI cells, with the sign
        // pattern still attached to the second axis, reproduces the
        // cos-sin finite sum with the phases exchanged
        let (sigma, theta, x) = (0.45, 0.3, 2.5);
        let sched = TruncationSchedule::rect(256, 1024);
        let swapped = balanced_rhs(BalancedSeriesKind::BiJ, 0, theta, sigma, x, &sched).unwrap();
        let lhs =
            balanced::lhs_mixed_partial(balanced::IdentityKind::Bi, 0, theta, sigma, x).unwrap();
        assert!((swapped.value - lhs).abs() < 3e-2);
    }

    #[test]
    fn raw_and_paired_grouping_agree_within_tail() {
        let (sigma, theta, x) = (0.3, 0.4, 2.5);
        let mut sched = TruncationSchedule::square(256);
        let paired = balanced_rhs(BalancedSeriesKind::TiI, 0, sigma, theta, x, &sched).unwrap();
        sched.grouping = Grouping::Raw;
        let raw = balanced_rhs(BalancedSeriesKind::TiI, 0, sigma, theta, x, &sched).unwrap();
        assert!((paired.value - raw.value).abs() <= paired.est_tail);
        for (p, r) in paired.partial_trace.iter().zip(raw.partial_trace.iter()) {
            assert!((p.2 - r.2).abs() <= paired.est_tail);
        }
    }

    #[test]
    fn est_tail_scales_like_quarter_root() {
        let (theta, x) = (0.3, 2.5);
        let a = entry1_rhs(theta, x, &TruncationSchedule::square(256)).unwrap();
        let b = entry1_rhs(theta, x, &TruncationSchedule::square(4096)).unwrap();
        // 16x truncation growth should shrink the reported tail by ~2
        let shrink = a.est_tail / b.est_tail;
        assert!(shrink > 0.2 && shrink < 20.0, "shrink = {shrink}");
    }

    #[test]
    fn balanced_k1_series_matches_tt_k0_series() {
        // the first balanced derivative of the combination cells equals
        // 4 pi^2 x times the T cells; compare the two series at equal
        // truncation (they are termwise equal, so equality is exact up to
        // rounding even at small truncations)
        let (sigma, theta, x) = (0.3, 0.4, 2.5);
        let sched = TruncationSchedule::square(48);
        let ti_k1 = balanced_rhs(BalancedSeriesKind::TiI, 1, sigma, theta, x, &sched).unwrap();
        let tt_k0 = balanced_rhs(BalancedSeriesKind::TtT, 0, sigma, theta, x, &sched).unwrap();
        // scales: (sqrt x / 4) * d2(cells) vs (x sqrt x / 4) * T-cells, and
        // d2(cells) = 4 pi^2 x T-cells termwise
        assert!(
            (ti_k1.value - 4.0 * PI * PI * tt_k0.value).abs() < 1e-8 * tt_k0.value.abs().max(1.0),
            "{} vs {}",
            ti_k1.value,
            4.0 * PI * PI * tt_k0.value
        );
    }
}
