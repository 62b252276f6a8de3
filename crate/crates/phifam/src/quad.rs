//! Gauss-Legendre panel quadrature with adaptive bisection, plus the
//! shell-doubling limit machinery that classifies improper integrals as
//! convergent (with geometric tail extrapolation) or divergent.

use std::sync::OnceLock;

use crate::real::{cst, Real};

const GL_ORDER: usize = 16;
/// Bisection depth cap; panels narrower than `width * 2^-MAX_DEPTH` are
/// accepted as-is and their residual error is booked as "bad".
const MAX_DEPTH: usize = 55;
/// Number of geometric shells examined before an improper integral is
/// classified by its increment ratio.
const MAX_SHELLS: usize = 64;

/// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1].
///
/// Computed once by Newton iteration on the Legendre recurrence instead of
/// being transcribed from tables.
fn gl16() -> &'static [(f64, f64); GL_ORDER] {
    static CACHE: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    CACHE.get_or_init(|| {
        let n = GL_ORDER;
        let mut out = [(0.0, 0.0); GL_ORDER];
        for (i, slot) in out.iter_mut().enumerate() {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let step = p / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// One 16-point Gauss-Legendre panel over `[a, b]`.
pub fn panel<F: Real>(f: &dyn Fn(F) -> F, a: F, b: F) -> F {
    let two = cst::<F>(2.0);
    let mid = (a + b) / two;
    let half = (b - a) / two;
    let mut acc = F::zero();
    for &(x, w) in gl16().iter() {
        acc = acc + cst::<F>(w) * f(mid + half * cst::<F>(x));
    }
    acc * half
}

/// Splits `[a, b]` at the interior breakpoints and returns the segment list.
fn segments<F: Real>(a: F, b: F, breaks: &[F]) -> Vec<(F, F)> {
    let mut cuts: Vec<F> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup_by(|p, q| (*p - *q).abs() <= F::epsilon() * (p.abs() + q.abs() + F::one()));
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut lo = a;
    for cut in cuts {
        out.push((lo, cut));
        lo = cut;
    }
    out.push((lo, b));
    out
}

/// Composite fixed-panel quadrature over `[a, b]` with panel edges pinned to
/// the breakpoints. Deterministic for a fixed panel count.
pub fn fixed_panels<F: Real>(f: &dyn Fn(F) -> F, a: F, b: F, breaks: &[F], panels: usize) -> F {
    let segs = segments(a, b, breaks);
    let total = b - a;
    if !(total > F::zero()) {
        return F::zero();
    }
    let mut acc = F::zero();
    for (lo, hi) in segs {
        let share = ((hi - lo) / total).to_f64().unwrap_or(0.0);
        let n = ((panels as f64 * share).ceil() as usize).max(1);
        let width = (hi - lo) / F::from_usize(n).unwrap();
        for i in 0..n {
            let x0 = lo + width * F::from_usize(i).unwrap();
            acc = acc + panel(f, x0, x0 + width);
        }
    }
    acc
}

/// Result of adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadOutcome<F> {
    Value(F),
    Divergent,
}

impl<F: Real> QuadOutcome<F> {
    pub fn value(self) -> Option<F> {
        match self {
            QuadOutcome::Value(v) => Some(v),
            QuadOutcome::Divergent => None,
        }
    }
}

/// Adaptive bisection quadrature over `[a, b]`.
///
/// Panels are split where a half/whole comparison misses the width-weighted
/// error budget. Panels that reach the depth cap keep their residual error on
/// a "bad" ledger; a ledger far above the budget marks the integral divergent
/// (non-integrable singularity), while integrable endpoint singularities leave
/// only a vanishing residue.
pub fn adaptive<F: Real>(
    f: &dyn Fn(F) -> F,
    a: F,
    b: F,
    rel_tol: F,
    breaks: &[F],
) -> QuadOutcome<F> {
    if !(b > a) {
        return QuadOutcome::Value(F::zero());
    }
    // Coarse magnitude pass: integral of |f| sets the error scale.
    let coarse_abs = fixed_panels(&|x| f(x).abs(), a, b, breaks, 16);
    let scale = if coarse_abs.is_finite() {
        coarse_abs.max(cst(1e-30))
    } else {
        cst(1e-30)
    };
    let abs_tol = rel_tol * scale;

    let total_width = b - a;
    let mut bad = F::zero();
    let mut acc = F::zero();
    for (lo, hi) in segments(a, b, breaks) {
        acc = acc + adaptive_segment(f, lo, hi, abs_tol, total_width, 0, &mut bad);
    }
    if !acc.is_finite() || !bad.is_finite() || bad > cst::<F>(1e3) * abs_tol {
        QuadOutcome::Divergent
    } else {
        QuadOutcome::Value(acc)
    }
}

fn adaptive_segment<F: Real>(
    f: &dyn Fn(F) -> F,
    a: F,
    b: F,
    abs_tol: F,
    total_width: F,
    depth: usize,
    bad: &mut F,
) -> F {
    let whole = panel(f, a, b);
    let mid = (a + b) / cst::<F>(2.0);
    let left = panel(f, a, mid);
    let right = panel(f, mid, b);
    let split = left + right;
    let err = (split - whole).abs();
    let width = b - a;
    let budget = abs_tol * (width / total_width);
    let width_floor = (a.abs() + b.abs() + F::one()) * F::epsilon() * cst::<F>(8.0);

    if err <= budget && split.is_finite() {
        return split;
    }
    if depth >= MAX_DEPTH || width <= width_floor {
        *bad = *bad + if err.is_finite() { err } else { F::infinity() };
        return if split.is_finite() { split } else { whole };
    }
    adaptive_segment(f, a, mid, abs_tol, total_width, depth + 1, bad)
        + adaptive_segment(f, mid, b, abs_tol, total_width, depth + 1, bad)
}

/// Outcome of a shell-doubling improper integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitOutcome<F> {
    Converged(F),
    Divergent,
}

impl<F: Real> LimitOutcome<F> {
    pub fn converged(self) -> Option<F> {
        match self {
            LimitOutcome::Converged(v) => Some(v),
            LimitOutcome::Divergent => None,
        }
    }
}

/// Classifies a sequence of shell increments and totals them.
///
/// Stops early once increments fall below the tolerance; otherwise inspects
/// the tail ratio after `MAX_SHELLS` doublings: a stable geometric decay is
/// summed by extrapolation, anything else is declared divergent.
fn run_shells<F: Real>(mut shell: impl FnMut(usize) -> F, rel_tol: F) -> LimitOutcome<F> {
    let mut total = F::zero();
    let mut deltas: Vec<F> = Vec::with_capacity(MAX_SHELLS);
    for k in 0..MAX_SHELLS {
        let d = shell(k);
        if !d.is_finite() {
            return LimitOutcome::Divergent;
        }
        total = total + d;
        deltas.push(d);
        let tol_abs = rel_tol * (total.abs() + F::one());
        if d.abs() <= tol_abs * cst(1e-3) {
            return LimitOutcome::Converged(total);
        }
    }
    // Geometric-mean ratio of the last few increments.
    let last = deltas[MAX_SHELLS - 1].abs();
    let base = deltas[MAX_SHELLS - 6].abs();
    if base <= F::zero() {
        return LimitOutcome::Converged(total);
    }
    let ratio = (last / base).powf(F::one() / cst(5.0));
    if ratio <= cst(0.995) && ratio > F::zero() {
        let tail = deltas[MAX_SHELLS - 1] * ratio / (F::one() - ratio);
        LimitOutcome::Converged(total + tail)
    } else {
        LimitOutcome::Divergent
    }
}

/// `integral of f over (0, w]` where `f` may be singular at zero.
pub fn integral_to_zero<F: Real>(
    f: &dyn Fn(F) -> F,
    w: F,
    rel_tol: F,
    breaks: &[F],
) -> LimitOutcome<F> {
    if !(w > F::zero()) {
        return LimitOutcome::Converged(F::zero());
    }
    let half = cst::<F>(0.5);
    run_shells(
        |k| {
            let hi = w * half.powi(k as i32);
            let lo = hi * half;
            fixed_panels(f, lo, hi, breaks, 4)
        },
        rel_tol,
    )
}

/// `integral of f over [a, inf)` by doubling the integration range.
pub fn integral_to_infinity<F: Real>(
    f: &dyn Fn(F) -> F,
    a: F,
    rel_tol: F,
    breaks: &[F],
) -> LimitOutcome<F> {
    let step = a.abs().max(F::one());
    let two = cst::<F>(2.0);
    run_shells(
        |k| {
            let lo = a + step * (two.powi(k as i32) - F::one());
            let hi = a + step * (two.powi(k as i32 + 1) - F::one());
            fixed_panels(f, lo, hi, breaks, 4)
        },
        rel_tol,
    )
}

/// Root of a continuous function by bisection on a sign-changing bracket.
pub fn bisect_zero<F: Real>(g: &dyn Fn(F) -> F, mut lo: F, mut hi: F) -> F {
    let mut glo = g(lo);
    if glo == F::zero() {
        return lo;
    }
    for _ in 0..200 {
        let mid = (lo + hi) / cst::<F>(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == F::zero() {
            return mid;
        }
        if (gm > F::zero()) == (glo > F::zero()) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / cst::<F>(2.0)
}

/// Locations where `g` changes sign across a sampled grid, bisected to
/// machine-level accuracy. Used to pin support cutoffs as panel edges.
pub fn sign_changes<F: Real>(g: &dyn Fn(F) -> F, samples: &[F]) -> Vec<F> {
    let mut out = Vec::new();
    let mut prev: Option<(F, F)> = None;
    for &x in samples {
        let v = g(x);
        if !v.is_finite() {
            prev = None;
            continue;
        }
        if let Some((px, pv)) = prev {
            if (pv > F::zero()) != (v > F::zero()) && pv != F::zero() {
                out.push(bisect_zero(g, px, x));
            }
        }
        prev = Some((x, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl16_integrates_high_degree_polynomials_exactly() {
        // Degree 31 is the design limit of a 16-point rule.
        let f = |x: f64| x.powi(31) + 3.0 * x.powi(10) + 1.0;
        let got = panel(&f, 0.0, 1.0);
        let want = 1.0 / 32.0 + 3.0 / 11.0 + 1.0;
        assert!((got - want).abs() < 1e-14, "got {got}, want {want}");
    }

    #[test]
    fn fixed_panels_split_at_kinks() {
        // |x - 0.3| has a kink; splitting there makes GL exact.
        let f = |x: f64| (x - 0.3f64).abs();
        let got = fixed_panels(&f, 0.0, 1.0, &[0.3], 4);
        let want = 0.3f64.powi(2) / 2.0 + 0.7f64.powi(2) / 2.0;
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_integrable_endpoint_singularity() {
        // 1/sqrt(x) on (0, 1] integrates to 2.
        let f = |x: f64| x.sqrt().recip();
        match adaptive(&f, 0.0, 1.0, 1e-9, &[]) {
            QuadOutcome::Value(v) => assert!((v - 2.0).abs() < 1e-6, "v = {v}"),
            QuadOutcome::Divergent => panic!("should converge"),
        }
    }

    #[test]
    fn adaptive_flags_log_divergence() {
        let f = |x: f64| (1.0 - x).recip();
        assert_eq!(adaptive(&f, 0.0, 1.0, 1e-9, &[]), QuadOutcome::Divergent);
    }

    #[test]
    fn shells_converge_with_extrapolated_tail() {
        // integral of x^{-1/2} over (0,1] = 2, slow geometric shells.
        let f = |x: f64| x.sqrt().recip();
        match integral_to_zero(&f, 1.0, 1e-9, &[]) {
            LimitOutcome::Converged(v) => assert!((v - 2.0).abs() < 1e-9, "v = {v}"),
            LimitOutcome::Divergent => panic!("should converge"),
        }
    }

    #[test]
    fn shells_flag_harmonic_divergence() {
        let f = |x: f64| x.recip();
        assert_eq!(integral_to_zero(&f, 1.0, 1e-9, &[]), LimitOutcome::Divergent);
        assert_eq!(
            integral_to_infinity(&f, 1.0, 1e-9, &[]),
            LimitOutcome::Divergent
        );
    }

    #[test]
    fn shells_to_infinity_converge_for_power_decay() {
        let f = |x: f64| x.powi(-2);
        match integral_to_infinity(&f, 1.0, 1e-9, &[]) {
            LimitOutcome::Converged(v) => assert!((v - 1.0).abs() < 1e-9, "v = {v}"),
            LimitOutcome::Divergent => panic!("should converge"),
        }
    }

    #[test]
    fn sign_changes_locates_cutoff() {
        let g = |x: f64| 1.5 - x;
        let samples: Vec<f64> = (0..=10).map(|i| i as f64 * 0.3).collect();
        let roots = sign_changes(&g, &samples);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.5).abs() < 1e-12);
    }
}
