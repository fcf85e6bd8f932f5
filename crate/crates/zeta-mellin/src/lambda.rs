//! The two subtracted series whose Mellin transforms close in terms of
//! `zeta(1-s) / sin(pi s)^k`:
//!
//! * `lambda1(x) = sigma * sum_{n>=1} x ln(x/n) / (n (x-n)) - P(ln x)`
//! * `lambda2(x) = sigma * sum_{n>=1} x (pi^2 + ln^2(x/n)) / (n (x+n)) - P(ln x)`
//!
//! The subtraction polynomial `P` exists in two provenances: the printed
//! constants, and the coefficients recovered numerically from the residue of
//! the transform kernel at s = 1 (see `mellin::fit_residue_polynomial`).
//! The two disagree for the first series; both are kept and compared, never
//! merged.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::logpow::tail_log_pow;
use crate::quad::{integrate, IntegralResult, QuadratureConfig};
use crate::specialfn::{digamma, stieltjes_table, zeta, zeta_deriv};

/// Which of the two series is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LambdaKind {
    One,
    Two,
}

/// Sign applied to the raw series before subtraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesSign {
    Plus,
    Minus,
}

impl SeriesSign {
    pub fn factor(self) -> f64 {
        match self {
            SeriesSign::Plus => 1.0,
            SeriesSign::Minus => -1.0,
        }
    }
    pub fn as_i8(self) -> i8 {
        match self {
            SeriesSign::Plus => 1,
            SeriesSign::Minus => -1,
        }
    }
    pub fn both() -> [SeriesSign; 2] {
        [SeriesSign::Plus, SeriesSign::Minus]
    }
}

/// Where a subtraction polynomial's coefficients came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    PaperPrinted,
    OracleResolved,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::PaperPrinted => "paper-printed",
            Provenance::OracleResolved => "oracle-resolved",
        }
    }
}

/// Cubic `c0 + c1 L + c2 L^2 + c3 L^3` subtracted from the raw series,
/// tagged with the origin of its coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubtractionPolynomial {
    pub coeffs: [f64; 4],
    pub provenance: Provenance,
}

impl SubtractionPolynomial {
    pub fn eval(&self, l: f64) -> f64 {
        let c = &self.coeffs;
        ((c[3] * l + c[2]) * l + c[1]) * l + c[0]
    }
}

/// Truncation and accuracy budget for the raw series.
#[derive(Debug, Clone)]
pub struct LambdaConfig {
    /// Starting direct-summation length; at least 100.
    pub n_initial: usize,
    /// Relative half-width of the removable-singularity window; in (0, 1/4).
    pub epsilon: f64,
    /// Absolute tail tolerance; in [1e-14, 1e-6].
    pub tail_tol: f64,
    /// Hard cap on the direct-summation length.
    pub n_max: usize,
}

impl Default for LambdaConfig {
    fn default() -> Self {
        LambdaConfig {
            n_initial: 400,
            epsilon: 1e-3,
            tail_tol: 1e-10,
            n_max: 4_000_000,
        }
    }
}

impl LambdaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_initial < 100 {
            return Err(Error::domain(format!(
                "n_initial must be at least 100, got {}",
                self.n_initial
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.25) {
            return Err(Error::domain(format!(
                "epsilon must lie in (0, 1/4), got {}",
                self.epsilon
            )));
        }
        if !(1e-14..=1e-6).contains(&self.tail_tol) {
            return Err(Error::domain(format!(
                "tail_tol must lie in [1e-14, 1e-6], got {:e}",
                self.tail_tol
            )));
        }
        if self.n_max < self.n_initial {
            return Err(Error::domain(
                "n_max must be at least n_initial".to_string(),
            ));
        }
        Ok(())
    }
}

static ORACLE_POLY_ONE: OnceLock<SubtractionPolynomial> = OnceLock::new();
static ORACLE_POLY_TWO: OnceLock<SubtractionPolynomial> = OnceLock::new();

fn oracle_cell(kind: LambdaKind) -> &'static OnceLock<SubtractionPolynomial> {
    match kind {
        LambdaKind::One => &ORACLE_POLY_ONE,
        LambdaKind::Two => &ORACLE_POLY_TWO,
    }
}

/// Stores the polynomial recovered by the residue fit. Idempotent: a repeat
/// fit of the same kind keeps the first stored value (the fit is
/// deterministic, so they agree to the last bit anyway).
pub(crate) fn store_oracle_poly(kind: LambdaKind, poly: SubtractionPolynomial) {
    let _ = oracle_cell(kind).set(poly);
}

/// The subtraction polynomial for a series, by provenance.
///
/// The printed coefficients are closed forms in pi and the Stieltjes
/// constants. The oracle-resolved ones require
/// `mellin::fit_residue_polynomial` to have run; before that this returns
/// [`Error::OracleNotRun`].
pub fn subtraction_poly(kind: LambdaKind, provenance: Provenance) -> Result<SubtractionPolynomial> {
    match provenance {
        Provenance::OracleResolved => {
            oracle_cell(kind).get().copied().ok_or(Error::OracleNotRun)
        }
        Provenance::PaperPrinted => {
            let t = stieltjes_table();
            let (g0, g1, g2) = (t.gamma[0], t.gamma[1], t.gamma[2]);
            let pi2 = std::f64::consts::PI * std::f64::consts::PI;
            let coeffs = match kind {
                // (ln^2 x - 2 gamma ln x - 2 gamma_1 + pi^2/3) / 2
                LambdaKind::One => [pi2 / 6.0 - g1, -g0, 0.5, 0.0],
                // -gamma_2 + 2 gamma_1 ln x - ln^3 x / 3 - gamma (pi^2 + ln^2 x) - pi^2 ln x
                LambdaKind::Two => [-g2 - g0 * pi2, 2.0 * g1 - pi2, -g0, -1.0 / 3.0],
            };
            Ok(SubtractionPolynomial {
                coeffs,
                provenance,
            })
        }
    }
}

/// Raw series `sum_n x ln(x/n) / (n (x-n))`, removable singularities filled
/// by the local expansion inside the epsilon-window.
pub fn lambda1_raw_sum(x: f64, cfg: &LambdaConfig) -> Result<f64> {
    raw_sum(LambdaKind::One, x, cfg)
}

/// Raw series `sum_n x (pi^2 + ln^2(x/n)) / (n (x+n))`.
pub fn lambda2_raw_sum(x: f64, cfg: &LambdaConfig) -> Result<f64> {
    raw_sum(LambdaKind::Two, x, cfg)
}

/// `sigma * raw - P(ln x)`.
pub fn lambda1(
    x: f64,
    poly: &SubtractionPolynomial,
    sign: SeriesSign,
    cfg: &LambdaConfig,
) -> Result<f64> {
    Ok(sign.factor() * lambda1_raw_sum(x, cfg)? - poly.eval(x.ln()))
}

/// `sigma * raw - P(ln x)`.
pub fn lambda2(
    x: f64,
    poly: &SubtractionPolynomial,
    sign: SeriesSign,
    cfg: &LambdaConfig,
) -> Result<f64> {
    Ok(sign.factor() * lambda2_raw_sum(x, cfg)? - poly.eval(x.ln()))
}

fn raw_sum(kind: LambdaKind, x: f64, cfg: &LambdaConfig) -> Result<f64> {
    cfg.validate()?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!(
            "the raw series requires x > 0, got {x}"
        )));
    }
    // The tail expansion in powers of x/n needs n > 4x for fast geometric
    // decay; below that the direct sum carries the load. Lengths are kept on
    // the doubling ladder n_initial * 2^k so tail evaluations repeat across
    // nearby x and hit the memo in tail_log_pow_cached.
    let mut n = cfg.n_initial;
    while (n as f64) < 4.0 * x {
        if n.saturating_mul(2) > cfg.n_max {
            return Err(Error::TailBudget {
                x,
                n_reached: n,
                tol: cfg.tail_tol,
            });
        }
        n *= 2;
    }
    loop {
        let direct = direct_sum(kind, x, n, cfg.epsilon);
        if let Some((tail, bound)) = tail_sum(kind, x, n) {
            if bound <= cfg.tail_tol {
                return Ok(direct + tail);
            }
        }
        if n.saturating_mul(2) > cfg.n_max {
            return Err(Error::TailBudget {
                x,
                n_reached: n,
                tol: cfg.tail_tol,
            });
        }
        n *= 2;
    }
}

fn direct_sum(kind: LambdaKind, x: f64, n: usize, epsilon: f64) -> f64 {
    let lx = x.ln();
    let mut acc = 0.0f64;
    let mut compensation = 0.0f64;
    for k in 1..=n {
        let kf = k as f64;
        let term = match kind {
            LambdaKind::One => {
                let delta = (x - kf) / kf;
                if delta.abs() < epsilon {
                    // ln(1+d)/d expanded; exact x/n^2 in the delta = 0 limit.
                    x / (kf * kf) * (1.0 - delta * (0.5 - delta * (1.0 / 3.0 - delta * 0.25)))
                } else {
                    // ln_1p only while it gains digits; for x far below k the
                    // ratio form avoids delta rounding to -1 (ln_1p -> -inf).
                    let log_ratio = if delta.abs() <= 0.5 {
                        delta.ln_1p()
                    } else {
                        (x / kf).ln()
                    };
                    x * log_ratio / (kf * (x - kf))
                }
            }
            LambdaKind::Two => {
                let l = lx - kf.ln();
                x * (std::f64::consts::PI.powi(2) + l * l) / (kf * (x + kf))
            }
        };
        let y = term - compensation;
        let t = acc + y;
        compensation = (t - acc) - y;
        acc = t;
    }
    acc
}

/// Tail `sum_{n>N}` via the geometric expansion of `1/(x -+ n)` in `x/n`,
/// each order reduced to closed log-power tails. Returns the tail and a
/// bound combining the first omitted order with the geometric remainder.
fn tail_sum(kind: LambdaKind, x: f64, n: usize) -> Option<(f64, f64)> {
    let nf = n as f64;
    let lx = x.ln();
    let ratio = x / nf;
    debug_assert!(ratio <= 0.25 + 1e-12);
    let pi2 = std::f64::consts::PI.powi(2);

    let mut tail = 0.0f64;
    let mut xpow = x;
    for j in 0..40u32 {
        let m = j + 2;
        let s = tail_log_pow_cached(0, m, n as u32);
        let t = tail_log_pow_cached(1, m, n as u32);
        let (increment, magnitude) = match kind {
            LambdaKind::One => {
                let inc = xpow * (t - lx * s);
                (inc, xpow * (t + lx.abs() * s))
            }
            LambdaKind::Two => {
                let u = tail_log_pow_cached(2, m, n as u32);
                let body = (pi2 + lx * lx) * s - 2.0 * lx * t + u;
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                (
                    sign * xpow * body,
                    xpow * ((pi2 + lx * lx) * s + 2.0 * lx.abs() * t + u),
                )
            }
        };
        tail += increment;
        // Orders shrink at least 4x per step; bound the remainder by a
        // geometric series on the magnitude of the last included order.
        let remainder = magnitude * ratio / (1.0 - ratio);
        if remainder < 1e-16 * (1.0 + tail.abs()) || magnitude == 0.0 {
            return Some((tail, remainder + 1e-15 * tail.abs()));
        }
        if j == 39 {
            return Some((tail, remainder + 1e-15 * tail.abs()));
        }
        xpow *= x;
    }
    None
}

/// Memoized `sum_{k>n} ln(k)^q / k^m` for the integer exponents the series
/// tails use. The Mellin engine samples the series at thousands of points
/// whose truncation lengths all sit on one doubling ladder, so the hit rate
/// is near total.
fn tail_log_pow_cached(q: u32, m: u32, n: u32) -> f64 {
    use std::cell::RefCell;
    use std::collections::HashMap;
    thread_local! {
        static CACHE: RefCell<HashMap<(u32, u32, u32), f64>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|c| {
        *c.borrow_mut()
            .entry((q, m, n))
            .or_insert_with(|| tail_log_pow(q, m as f64, n))
    })
}

/// Integral form `integral_0^inf (psi(t+1) - ln t) / (x + t) dt`.
///
/// Split at 1 and x with a logarithmic substitution below 1 (the integrand
/// is log-singular at 0); beyond `T = max(20, 4x)` the digamma asymptotic is
/// integrated term by term against the geometric expansion of `1/(x+t)`.
pub fn lambda1_integral_rep(x: f64, quad: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!(
            "integral representation requires x > 0, got {x}"
        )));
    }
    quad.validate()?;
    let weight = |t: f64| -> Result<f64> { Ok(digamma(t + 1.0)? - t.ln()) };

    let mut value = 0.0f64;
    let mut err = 0.0f64;
    let mut evaluations = 0usize;

    // (0, 1] via t = e^u. e^{u_floor} * (|u_floor| + 1) / x bounds the discard.
    let u_floor = -(50.0f64.max((1.0 / (x * quad.abs_tol)).ln()));
    let lower = integrate(
        |u: f64| {
            let t = u.exp();
            Ok(t * weight(t)? / (x + t))
        },
        u_floor,
        0.0,
        quad,
    )?;
    value += lower.value;
    err += lower.error_estimate;
    evaluations += lower.evaluations;
    let discard = (u_floor.exp() / x) * (u_floor.abs() + 1.0);

    let t_break = x.max(1.0);
    let t_upper = (4.0 * x).max(20.0);
    for (a, b) in [(1.0, t_break), (t_break, t_upper)] {
        if b > a {
            let part = integrate(|t: f64| Ok(weight(t)? / (x + t)), a, b, quad)?;
            value += part.value;
            err += part.error_estimate;
            evaluations += part.evaluations;
        }
    }

    let (tail, tail_err) = integral_rep_tail(x, t_upper);
    value += tail;
    let tail_bound = tail_err + discard;

    Ok(IntegralResult {
        value,
        error_estimate: err + tail_bound,
        evaluations,
        tail_bound,
    })
}

/// `integral_T^inf (psi(t+1) - ln t)/(x+t) dt` with the integrand replaced by
/// its large-t expansion `1/(2t) - 1/(12 t^2) + 1/(120 t^4) - 1/(252 t^6)`
/// and `1/(x+t)` expanded geometrically (valid since T >= 4x).
fn integral_rep_tail(x: f64, t: f64) -> (f64, f64) {
    let mut acc = 0.0f64;
    let mut xpow = 1.0f64; // (-x)^i
    let mut last = 0.0f64;
    for i in 0..60 {
        let ke = (i + 1) as f64;
        let term = xpow
            * (0.5 / (ke * t.powf(ke))
                - 1.0 / (12.0 * (ke + 1.0) * t.powf(ke + 1.0))
                + 1.0 / (120.0 * (ke + 3.0) * t.powf(ke + 3.0))
                - 1.0 / (252.0 * (ke + 5.0) * t.powf(ke + 5.0)));
        acc += term;
        last = term.abs();
        if last < 1e-17 * acc.abs() {
            break;
        }
        xpow *= -x;
    }
    // Next asymptotic order of the digamma expansion, integrated crudely.
    let model_err = 1.0 / (240.0 * 6.0 * t.powi(7)) + last / 3.0;
    (acc, model_err)
}

/// Maclaurin-type expansions of the raw series on 0 < x < 1 built from zeta
/// values at integers:
///
/// * kind One:  `-sum_{n>=1} (ln x * zeta(1+n) + zeta'(1+n)) x^n`
/// * kind Two:  `sum_{n>=1} (zeta''(1+n) + 2 ln x zeta'(1+n) + pi^2 zeta(1+n)
///               + zeta(1+n) ln^2 x) (-x)^n`
pub fn power_series(kind: LambdaKind, x: f64, terms: usize) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!(
            "power series valid only on 0 < x < 1, got {x}"
        )));
    }
    if terms == 0 || terms > 200 {
        return Err(Error::domain(format!(
            "term count must lie in 1..=200, got {terms}"
        )));
    }
    let table = zeta_integer_table();
    let lx = x.ln();
    let pi2 = std::f64::consts::PI.powi(2);
    let mut acc = 0.0f64;
    let mut xpow = 1.0f64;
    for n in 1..=terms {
        let [z0, z1, z2] = table[n - 1];
        match kind {
            LambdaKind::One => {
                xpow *= x;
                acc -= (lx * z0 + z1) * xpow;
            }
            LambdaKind::Two => {
                xpow *= -x;
                acc += (z2 + 2.0 * lx * z1 + pi2 * z0 + z0 * lx * lx) * xpow;
            }
        }
    }
    Ok(acc)
}

/// zeta, zeta', zeta'' at integer arguments 2..=201, shared by both series.
fn zeta_integer_table() -> &'static [[f64; 3]; 200] {
    static TABLE: OnceLock<[[f64; 3]; 200]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [[0.0; 3]; 200];
        for (i, row) in out.iter_mut().enumerate() {
            let sigma = (i + 2) as f64;
            // Arguments are >= 2, far from the pole: unwrap is safe.
            row[0] = zeta(num_complex::Complex64::new(sigma, 0.0)).unwrap().re;
            row[1] = zeta_deriv(1, sigma).unwrap();
            row[2] = zeta_deriv(2, sigma).unwrap();
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> LambdaConfig {
        LambdaConfig::default()
    }

    #[test]
    fn raw_series_reference_points() {
        // Direct summation oracle with exact log-power tails, 30 digits.
        assert_relative_eq!(
            lambda1_raw_sum(0.5, &cfg()).unwrap(),
            1.49013740154499976307301623705,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            lambda1_raw_sum(1.0, &cfg()).unwrap(),
            2.25774688694436963000989983049,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            lambda2_raw_sum(1.0, &cfg()).unwrap(),
            11.6673487287077266696783450839,
            max_relative = 1e-12
        );
    }

    #[test]
    fn integer_points_hit_removable_limit() {
        // At x = n the windowed expansion reduces to the exact x/n^2 cell.
        for x in [1.0, 2.0, 3.0, 7.0] {
            assert!(lambda1_raw_sum(x, &cfg()).is_ok(), "x = {x}");
        }
        // Continuity across x = 3 at 1e-6 offsets, frozen externally.
        assert_relative_eq!(
            lambda1_raw_sum(3.0 - 1e-6, &cfg()).unwrap(),
            4.08140259918226311811950002126,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            lambda1_raw_sum(3.0 + 1e-6, &cfg()).unwrap(),
            4.08140396523127599984479959637,
            max_relative = 1e-10
        );
    }

    #[test]
    fn printed_polynomials_evaluate_to_frozen_constants() {
        let p1 = subtraction_poly(LambdaKind::One, Provenance::PaperPrinted).unwrap();
        let p2 = subtraction_poly(LambdaKind::Two, Provenance::PaperPrinted).unwrap();
        assert_relative_eq!(p1.eval(0.0), 1.71774991233190316133300154252, max_relative = 1e-13);
        assert_relative_eq!(p2.eval(0.0), -5.68719990349701682878885422736, max_relative = 1e-13);
    }

    #[test]
    fn oracle_poly_requires_fit() {
        // This test runs in the same process as others that may fit; only
        // assert the error when the cache is genuinely empty.
        if oracle_cell(LambdaKind::One).get().is_none() {
            assert_eq!(
                subtraction_poly(LambdaKind::One, Provenance::OracleResolved),
                Err(Error::OracleNotRun)
            );
        }
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.n_initial = 50;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.epsilon = 0.3;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.tail_tol = 1e-5;
        assert!(c.validate().is_err());
        assert!(cfg().validate().is_ok());
    }

    #[test]
    fn domain_and_budget_errors() {
        assert!(matches!(
            lambda1_raw_sum(-1.0, &cfg()),
            Err(Error::Domain(_))
        ));
        let tiny = LambdaConfig {
            n_max: 400,
            ..cfg()
        };
        assert!(matches!(
            lambda1_raw_sum(1e6, &tiny),
            Err(Error::TailBudget { .. })
        ));
    }

    #[test]
    fn power_series_matches_raw_inside_unit_interval() {
        for &x in &[0.1, 0.5, 0.9] {
            let series = power_series(LambdaKind::One, x, 200).unwrap();
            let raw = lambda1_raw_sum(x, &cfg()).unwrap();
            assert_relative_eq!(series, raw, max_relative = 1e-7);
        }
    }

    #[test]
    fn power_series_domain_checks() {
        assert!(matches!(
            power_series(LambdaKind::One, 1.0, 100),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            power_series(LambdaKind::One, 0.5, 201),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn integral_rep_reference_points() {
        let quad = QuadratureConfig::default();
        let cases = [
            (0.5, 1.712677673892698862975453),
            (1.0, 1.104937092235759967795517),
            (2.0, 0.6914916364833086907588402),
        ];
        for (x, want) in cases {
            let got = lambda1_integral_rep(x, &quad).unwrap();
            assert_relative_eq!(got.value, want, max_relative = 1e-8);
            assert!(got.error_estimate < 1e-8);
        }
    }
}
