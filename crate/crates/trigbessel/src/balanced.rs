//! Symbolic engine for mixed partial derivatives of Bessel cell terms.
//!
//! A cell term is `c * pi^p * x^e * B_nu(u) / ((m+a)^gamma (n+b)^delta)` with
//! `u = 4 pi sqrt((m+a)(n+b)x)`, where `a` is `sigma` or `1-sigma` and `b` is
//! `theta` or `1-theta`. Differentiating in `sigma` or `theta` stays inside
//! this shape: the chain rule turns `B_nu` into the two-term recurrence pair
//! (`J_nu' = (J_{nu-1}-J_{nu+1})/2`, same for `Y`, and
//! `K_nu' = -(K_{nu-1}+K_{nu+1})/2`) while the power rule bumps an exponent.
//! Coefficients and exponents are exact rationals (times a power of pi);
//! only the final Bessel evaluations are floating-point.
//!
//! The combination `-Y - (2/pi)K` and the kernel `T_{3/2}` enter as seed
//! term lists over the `{Y, K}` basis, so every derivative below is an exact
//! identity of the underlying Y/K recurrences.

use crate::specfun::{self, BesselOrder};
use num_rational::Ratio;
use num_traits::Zero;
use std::f64::consts::PI;
use std::fmt;
use thiserror::Error;

type Rat = Ratio<i64>;

#[derive(Debug, Error, PartialEq)]
pub enum BalancedError {
    #[error("derivative order alpha+beta = {0} exceeds the configured maximum {1}")]
    OrderTooLarge(u32, u32),
    #[error("parameter {0} = {1} outside (0,1)")]
    ParamOutOfRange(&'static str, f64),
    #[error("evaluation failed: {0}")]
    Eval(#[from] specfun::SpecFunError),
}

pub type Result<T> = std::result::Result<T, BalancedError>;

/// Highest total derivative order the expander accepts by default.
pub const MAX_TOTAL_DERIVATIVE: u32 = 6;

/// Bessel family of a concrete expansion term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasisKind {
    J,
    Y,
    Kmod,
}

/// What gets differentiated: a plain `J_1` cell, the `-Y-(2/pi)K`
/// combination, or the `T_{3/2}` kernel (rewritten over Y/K first).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    J,
    Icomb,
    T,
}

/// Whether the factor is `m + sigma` or `m + 1 - sigma` (same for theta).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisSign {
    Plus,
    Minus,
}

impl AxisSign {
    fn deriv_sign(self) -> i64 {
        match self {
            AxisSign::Plus => 1,
            AxisSign::Minus => -1,
        }
    }

    pub fn resolve(self, t: f64) -> f64 {
        match self {
            AxisSign::Plus => t,
            AxisSign::Minus => 1.0 - t,
        }
    }
}

/// One term of an expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct CellTerm {
    pub coeff: Rat,
    pub pi_power: i32,
    /// exponent of x carried by the coefficient (half-integers appear as
    /// powers of sqrt(x))
    pub x_power: Rat,
    pub kind: BasisKind,
    pub order: i32,
    /// exponent on (m+a)
    pub gamma: Rat,
    /// exponent on (n+b)
    pub delta: Rat,
    pub sigma_sign: AxisSign,
    pub theta_sign: AxisSign,
}

/// Result of expanding a mixed partial derivative of one cell term.
#[derive(Debug, Clone)]
pub struct TermExpansion {
    pub terms: Vec<CellTerm>,
    pub main_gamma: Rat,
    pub main_delta: Rat,
}

fn seed_terms(kind: CellKind, s: Rat, w: Rat, ss: AxisSign, ts: AxisSign) -> Vec<CellTerm> {
    let half = Rat::new(1, 2);
    let term = |coeff: Rat, pi_power: i32, x_power: Rat, kind, order, dg: Rat, dd: Rat| CellTerm {
        coeff,
        pi_power,
        x_power,
        kind,
        order,
        gamma: s + dg,
        delta: w + dd,
        sigma_sign: ss,
        theta_sign: ts,
    };
    let r = |n, d| Rat::new(n, d);
    match kind {
        CellKind::J => vec![term(r(1, 1), 0, Rat::zero(), BasisKind::J, 1, Rat::zero(), Rat::zero())],
        CellKind::Icomb => vec![
            term(r(-1, 1), 0, Rat::zero(), BasisKind::Y, 1, Rat::zero(), Rat::zero()),
            term(r(-2, 1), -1, Rat::zero(), BasisKind::Kmod, 1, Rat::zero(), Rat::zero()),
        ],
        // T_{3/2}(4 pi^2 (m+a)(n+b) x) expanded over Y/K with u = 2 sqrt(arg):
        // -4/u^2 Y1 - 8/(pi u^2) K1 + 2/u Y0 - 4/(pi u) K0 + Y1 - (2/pi) K1,
        // each 1/u^j folding into (4 pi)^{-j} ((m+a)(n+b)x)^{-j/2}
        CellKind::T => vec![
            term(r(-1, 4), -2, r(-1, 1), BasisKind::Y, 1, Rat::from_integer(1), Rat::from_integer(1)),
            term(r(-1, 2), -3, r(-1, 1), BasisKind::Kmod, 1, Rat::from_integer(1), Rat::from_integer(1)),
            term(r(1, 2), -1, -half, BasisKind::Y, 0, half, half),
            term(r(-1, 1), -2, -half, BasisKind::Kmod, 0, half, half),
            term(r(1, 1), 0, Rat::zero(), BasisKind::Y, 1, Rat::zero(), Rat::zero()),
            term(r(-2, 1), -1, Rat::zero(), BasisKind::Kmod, 1, Rat::zero(), Rat::zero()),
        ],
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    Sigma,
    Theta,
}

/// One derivative pass along the given axis, followed by a canonical merge.
fn differentiate(terms: &[CellTerm], axis: Axis) -> Vec<CellTerm> {
    let half = Rat::new(1, 2);
    let mut out: Vec<CellTerm> = Vec::with_capacity(terms.len() * 3);
    for t in terms {
        let sgn = match axis {
            Axis::Sigma => t.sigma_sign.deriv_sign(),
            Axis::Theta => t.theta_sign.deriv_sign(),
        };
        let sgn = Rat::from_integer(sgn);
        // chain rule: d u / d sigma = sgn * 2 pi sqrt(x (n+b)/(m+a)), and the
        // derivative B' splits over orders nu-1, nu+1
        let pairs: [(Rat, i32); 2] = match t.kind {
            BasisKind::J | BasisKind::Y => [(half, t.order - 1), (-half, t.order + 1)],
            BasisKind::Kmod => [(-half, t.order - 1), (-half, t.order + 1)],
        };
        for (factor, order) in pairs {
            let coeff = t.coeff * factor * Rat::from_integer(2) * sgn;
            let (dg, dd) = match axis {
                Axis::Sigma => (half, -half),
                Axis::Theta => (-half, half),
            };
            out.push(CellTerm {
                coeff,
                pi_power: t.pi_power + 1,
                x_power: t.x_power + half,
                kind: t.kind,
                order,
                gamma: t.gamma + dg,
                delta: t.delta + dd,
                ..*t
            });
        }
        // power rule on the differentiated factor
        let (exp, dg, dd) = match axis {
            Axis::Sigma => (t.gamma, Rat::from_integer(1), Rat::zero()),
            Axis::Theta => (t.delta, Rat::zero(), Rat::from_integer(1)),
        };
        out.push(CellTerm {
            coeff: -exp * t.coeff * sgn,
            gamma: t.gamma + dg,
            delta: t.delta + dd,
            ..t.clone()
        });
    }
    merge(out)
}

fn merge(mut terms: Vec<CellTerm>) -> Vec<CellTerm> {
    terms.sort_by(|a, b| {
        (a.kind, a.order, a.gamma, a.delta, a.pi_power)
            .cmp(&(b.kind, b.order, b.gamma, b.delta, b.pi_power))
    });
    let mut out: Vec<CellTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        if let Some(last) = out.last_mut() {
            if last.kind == t.kind
                && last.order == t.order
                && last.gamma == t.gamma
                && last.delta == t.delta
                && last.pi_power == t.pi_power
                && last.x_power == t.x_power
            {
                last.coeff += t.coeff;
                continue;
            }
        }
        out.push(t);
    }
    out.retain(|t| !t.coeff.is_zero());
    out
}

/// Exact expansion of `d^{alpha+beta}/d sigma^alpha d theta^beta` applied to
/// the cell term of the given kind with exponents `(s, w)`.
pub fn expand_mixed_partial(
    kind: CellKind,
    alpha: u32,
    beta: u32,
    s: Rat,
    w: Rat,
    sigma_sign: AxisSign,
    theta_sign: AxisSign,
) -> Result<TermExpansion> {
    if alpha + beta > MAX_TOTAL_DERIVATIVE {
        return Err(BalancedError::OrderTooLarge(
            alpha + beta,
            MAX_TOTAL_DERIVATIVE,
        ));
    }
    let mut terms = seed_terms(kind, s, w, sigma_sign, theta_sign);
    for _ in 0..alpha {
        terms = differentiate(&terms, Axis::Sigma);
    }
    for _ in 0..beta {
        terms = differentiate(&terms, Axis::Theta);
    }
    let half = Rat::new(1, 2);
    let shift = (Rat::from_integer(alpha as i64) - Rat::from_integer(beta as i64)) * half;
    Ok(TermExpansion {
        terms,
        main_gamma: s + shift,
        main_delta: w - shift,
    })
}

/// Convergence admissibility of the almost-balanced double series:
/// `4s + 2 alpha - 2 beta > 1`, `4w + 2 beta - 2 alpha > 1`, and
/// `s + w > 25/26` at integer x (`> 5/6` otherwise).
pub fn theorem_m_admissible(alpha: u32, beta: u32, s: Rat, w: Rat, x_is_integer: bool) -> bool {
    let four = Rat::from_integer(4);
    let two = Rat::from_integer(2);
    let a = Rat::from_integer(alpha as i64);
    let b = Rat::from_integer(beta as i64);
    let one = Rat::from_integer(1);
    if four * s + two * a - two * b <= one {
        return false;
    }
    if four * w + two * b - two * a <= one {
        return false;
    }
    let threshold = if x_is_integer {
        Rat::new(25, 26)
    } else {
        Rat::new(5, 6)
    };
    s + w > threshold
}

fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Numeric value of one expansion at a concrete cell.
pub fn evaluate_expansion(
    e: &TermExpansion,
    m: u64,
    n: u64,
    sigma: f64,
    theta: f64,
    x: f64,
) -> Result<f64> {
    for (name, v) in [("sigma", sigma), ("theta", theta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(BalancedError::ParamOutOfRange(name, v));
        }
    }
    if !(x > 0.0) {
        return Err(BalancedError::ParamOutOfRange("x", x));
    }
    let mut total = 0.0;
    for t in &e.terms {
        let a = t.sigma_sign.resolve(sigma) + m as f64;
        let b = t.theta_sign.resolve(theta) + n as f64;
        let u = 4.0 * PI * (a * b * x).sqrt();
        let bval = match t.kind {
            BasisKind::J => specfun::bessel_j(BesselOrder::integer(t.order), u)?.value,
            BasisKind::Y => specfun::bessel_y(t.order, u)?.value,
            BasisKind::Kmod => specfun::bessel_k_mod(t.order, u)?.value,
        };
        total += rat_f64(t.coeff)
            * PI.powi(t.pi_power)
            * x.powf(rat_f64(t.x_power))
            * bval
            / (a.powf(rat_f64(t.gamma)) * b.powf(rat_f64(t.delta)));
    }
    Ok(total)
}

/// Both sides of the first balanced-derivative identity at one cell:
/// `lhs = (1/(4 pi^2)) d^2/(d sigma d theta) [ I_1(u)/sqrt((m+sigma)(n+theta)) ]`
/// and `rhs = x T_{3/2}(4 pi^2 (m+sigma)(n+theta) x)/sqrt((m+sigma)(n+theta))`.
pub fn verify_k1_pointwise(m: u64, n: u64, sigma: f64, theta: f64, x: f64) -> Result<(f64, f64)> {
    let half = Rat::new(1, 2);
    let e = expand_mixed_partial(
        CellKind::Icomb,
        1,
        1,
        half,
        half,
        AxisSign::Plus,
        AxisSign::Plus,
    )?;
    let lhs = evaluate_expansion(&e, m, n, sigma, theta, x)? / (4.0 * PI * PI);
    let a = m as f64 + sigma;
    let b = n as f64 + theta;
    let rhs = x * specfun::t_three_half(4.0 * PI * PI * a * b * x)?.value / (a * b).sqrt();
    Ok((lhs, rhs))
}

/// Which identity family a finite-sum derivative belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    /// cos(2 pi m sigma) sin(2 pi n theta), plus cot(pi theta)/4 at k = 0
    Bi,
    /// cos(2 pi m sigma) cos(2 pi n theta), minus 1/4 at k = 0
    Ti,
    /// m n sin(2 pi m sigma) sin(2 pi n theta)
    Tt,
}

/// k-th balanced derivative of the finite trigonometric sum, termwise:
/// each trig factor differentiates to `(2 pi m)^k trig(arg + k pi/2)`, and
/// the constant blocks survive only at k = 0 (they carry no sigma
/// dependence, so one sigma derivative kills them).
pub fn lhs_mixed_partial(
    kind: IdentityKind,
    k: u32,
    sigma: f64,
    theta: f64,
    x: f64,
) -> Result<f64> {
    for (name, v) in [("sigma", sigma), ("theta", theta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(BalancedError::ParamOutOfRange(name, v));
        }
    }
    let tau = 2.0 * PI;
    let shift = k as f64 * PI / 2.0;
    let mut acc = crate::sums::KahanSum::default();
    if x >= 1.0 {
        let mmax = x.floor() as u64;
        let x_int = x.floor() == x;
        for m in 1..=mmax {
            let mf = m as f64;
            let fac_m = (tau * mf).powi(k as i32);
            let fm = match kind {
                IdentityKind::Bi | IdentityKind::Ti => (tau * mf * sigma + shift).cos(),
                IdentityKind::Tt => (tau * mf * sigma + shift).sin(),
            };
            for n in 1..=((x / mf).floor() as u64) {
                let nf = n as f64;
                let fac_n = (tau * nf).powi(k as i32);
                let fn_ = match kind {
                    IdentityKind::Bi | IdentityKind::Tt => (tau * nf * theta + shift).sin(),
                    IdentityKind::Ti => (tau * nf * theta + shift).cos(),
                };
                let mut t = fac_m * fac_n * fm * fn_;
                if kind == IdentityKind::Tt {
                    t *= mf * nf;
                }
                if x_int && m * n == mmax {
                    t *= 0.5;
                }
                acc.add(t);
            }
        }
    }
    let mut total = acc.value();
    if k == 0 {
        total += match kind {
            IdentityKind::Bi => 0.25 / (PI * theta).tan(),
            IdentityKind::Ti => -0.25,
            IdentityKind::Tt => 0.0,
        };
    }
    Ok(total)
}

impl fmt::Display for CellTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            BasisKind::J => "J",
            BasisKind::Y => "Y",
            BasisKind::Kmod => "K",
        };
        let ss = match self.sigma_sign {
            AxisSign::Plus => "m+s",
            AxisSign::Minus => "m+1-s",
        };
        let ts = match self.theta_sign {
            AxisSign::Plus => "n+t",
            AxisSign::Minus => "n+1-t",
        };
        write!(
            f,
            "{} * pi^{} * x^{} {}_{} gamma={} delta={} [{}; {}]",
            self.coeff, self.pi_power, self.x_power, kind, self.order, self.gamma, self.delta, ss, ts
        )
    }
}

impl fmt::Display for TermExpansion {
    /// Stable line-oriented dump: one term per line, main exponents last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            writeln!(f, "{t}")?;
        }
        write!(f, "main: gamma={} delta={}", self.main_gamma, self.main_delta)
    }
}
