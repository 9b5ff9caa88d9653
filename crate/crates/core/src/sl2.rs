//! Log-scaled 2x2 matrix arithmetic, singular frames, and the product
//! estimates for hyperbolic SL(2,R) matrices: non-resonant norm growth,
//! resonant cancellation, and mu-hyperbolicity certification.
//!
//! Products along cocycle orbits have norms like `lambda^{q_n}`, far beyond
//! f64 range, so every long product runs as `e^c * U` with `U` of unit
//! operator norm and `c` accumulated separately. Determinants are likewise
//! tracked in log form; the unit factor of a deeply hyperbolic product is
//! numerically singular and its determinant must never be recomputed from
//! entries.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::rational::Rat;
use crate::{Error, Result};

/// Plain 2x2 real matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    pub fn diag(x: f64, y: f64) -> Self {
        Mat2::new(x, 0.0, 0.0, y)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// FMA-compensated determinant; the plain form loses `||A||^2 eps`
    /// absolutely, which matters when comparing singular values of
    /// ill-conditioned SL(2,R) matrices.
    pub fn det_compensated(&self) -> f64 {
        let p = self.a * self.d;
        let ep = self.a.mul_add(self.d, -p);
        let q = self.b * self.c;
        let eq = self.b.mul_add(self.c, -q);
        (p - q) + (ep - eq)
    }

    /// Adjugate; for det = 1 this is the inverse.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    /// Compensated matrix-vector product: each component is computed with
    /// FMA-based error terms, so the result is accurate to O(eps^2) even
    /// under the catastrophic cancellation of `A * s_hat(A)` at condition
    /// numbers near 1e8.
    pub fn apply_compensated(&self, v: (f64, f64)) -> (f64, f64) {
        fn dot2(a: f64, x: f64, b: f64, y: f64) -> f64 {
            let p = a * x;
            let ep = a.mul_add(x, -p);
            let q = b * y;
            let eq = b.mul_add(y, -q);
            let s = p + q;
            // TwoSum error of p + q.
            let z = s - p;
            let es = (p - (s - z)) + (q - z);
            s + (ep + eq + es)
        }
        (
            dot2(self.a, v.0, self.b, v.1),
            dot2(self.c, v.0, self.d, v.1),
        )
    }

    /// Operator 2-norm via the closed-form singular values.
    pub fn op_norm(&self) -> f64 {
        let (s1, _) = self.singular_values();
        s1
    }

    /// `(sigma_1, sigma_2)` with `sigma_1 >= |sigma_2|`; `sigma_2` carries
    /// the sign of the determinant.
    pub fn singular_values(&self) -> (f64, f64) {
        let e = (self.a + self.d) / 2.0;
        let f = (self.a - self.d) / 2.0;
        let g = (self.c + self.b) / 2.0;
        let h = (self.c - self.b) / 2.0;
        let q = e.hypot(h);
        let r = f.hypot(g);
        (q + r, q - r)
    }

    pub fn frobenius(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        Mat2::new(
            self.a - rhs.a,
            self.b - rhs.b,
            self.c - rhs.c,
            self.d - rhs.d,
        )
    }

    /// Is this an SL(2,R) matrix up to roundoff in the entries?
    pub fn is_sl2(&self, tol: f64) -> bool {
        let n = self.op_norm();
        (self.det() - 1.0).abs() <= tol * 1.0f64.max(n * n)
    }
}

/// Rotation by `theta`: `(cos -sin; sin cos)`.
pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// Reduce an angle to the RP^1 representative in `[0, pi)`.
pub fn rp1(theta: f64) -> f64 {
    let mut t = theta % PI;
    if t < 0.0 {
        t += PI;
    }
    if t >= PI {
        t -= PI;
    }
    t
}

/// Signed RP^1 difference reduced to `(-pi/2, pi/2]`.
pub fn rp1_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b) % PI;
    if d > FRAC_PI_2 {
        d -= PI;
    } else if d <= -FRAC_PI_2 {
        d += PI;
    }
    d
}

/// Distance in RP^1, in `[0, pi/2]`.
pub fn rp1_dist(a: f64, b: f64) -> f64 {
    rp1_diff(a, b).abs()
}

/// A 2x2 matrix stored as `e^logscale * unit`, with `||unit|| = 1` after
/// every renormalization and `log |det|` carried separately in log form.
#[derive(Clone, Copy, Debug)]
pub struct LogScaledMat2 {
    unit: Mat2,
    logscale: f64,
    log_det: f64,
    /// Number of compose/invert operations accumulated, for the det-drift
    /// tolerance budget.
    ops: u64,
}

impl LogScaledMat2 {
    pub fn identity() -> Self {
        LogScaledMat2 {
            unit: Mat2::identity(),
            logscale: 0.0,
            log_det: 0.0,
            ops: 0,
        }
    }

    /// Wrap a plain matrix (entries must be finite; long products are built
    /// by [`compose`]). Requires positive determinant.
    pub fn from_mat2(m: &Mat2) -> Self {
        let n = m.op_norm();
        assert!(n.is_finite() && n > 0.0, "degenerate matrix");
        let det = m.det();
        assert!(det > 0.0, "log-scaled form requires positive determinant");
        LogScaledMat2 {
            unit: m.scale(1.0 / n),
            logscale: n.ln(),
            log_det: det.ln(),
            ops: 0,
        }
    }

    /// Assemble `R_u diag(e^l, e^{-l}) R_{pi/2 - s}` directly in log scale;
    /// valid for any `l`, including far beyond f64 linear range.
    pub fn from_frame(log_norm: f64, u_angle: f64, s_angle: f64) -> Self {
        let m = rotation(u_angle)
            .mul(&Mat2::diag(1.0, (-2.0 * log_norm).exp()))
            .mul(&rotation(FRAC_PI_2 - s_angle));
        let n = m.op_norm();
        LogScaledMat2 {
            unit: m.scale(1.0 / n),
            logscale: log_norm + n.ln(),
            log_det: 0.0,
            ops: 0,
        }
    }

    pub fn unit(&self) -> &Mat2 {
        &self.unit
    }

    /// log of the operator norm.
    pub fn log_norm(&self) -> f64 {
        self.logscale
    }

    /// log |det| of the represented matrix.
    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// The represented matrix, when it fits in f64 range.
    pub fn to_mat2(&self) -> Option<Mat2> {
        if self.logscale.abs() > 700.0 {
            return None;
        }
        Some(self.unit.scale(self.logscale.exp()))
    }

    /// SL(2) consistency in the log domain: `log|det|` should vanish within
    /// roundoff accumulated over the recorded operations.
    pub fn det_drift_ok(&self) -> bool {
        self.log_det.abs() <= 1e-9 * (self.ops.max(1) as f64)
    }

    /// Inverse via the adjugate: `A^{-1} = adj(A)/det(A)`, all in log
    /// scale, no overflow. For SL(2) inputs the norm is preserved.
    pub fn inverse(&self) -> LogScaledMat2 {
        let adj = self.unit.adjugate();
        let n = adj.op_norm(); // = ||unit|| = 1 up to roundoff
        LogScaledMat2 {
            unit: adj.scale(1.0 / n),
            logscale: self.logscale + n.ln() - self.log_det,
            log_det: -self.log_det,
            ops: self.ops + 1,
        }
    }
}

/// `B * A` in log-scaled form.
pub fn compose(b: &LogScaledMat2, a: &LogScaledMat2) -> LogScaledMat2 {
    let prod = b.unit.mul(&a.unit);
    let n = prod.op_norm();
    LogScaledMat2 {
        unit: prod.scale(1.0 / n),
        logscale: b.logscale + a.logscale + n.ln(),
        log_det: b.log_det + a.log_det,
        ops: b.ops + a.ops + 1,
    }
}

/// Singular frame of a matrix: `A = sign * R_u * diag(e^l, e^{-l}) *
/// R_{pi/2 - s}` with `u, s in [0, pi)`.
///
/// `sign` is forced by canonicalizing both angles to `[0, pi)`; it carries
/// no dynamical information (directions live in RP^1) but makes the
/// reconstruction identity exact rather than exact-up-to-sign.
#[derive(Clone, Copy, Debug)]
pub struct FrameDecomp {
    /// Most expanded direction `u(A)` in `[0, pi)`.
    pub u_angle: f64,
    /// log ||A|| >= 0.
    pub log_norm: f64,
    /// Most contracted direction `s(A)` in `[0, pi)`.
    pub s_angle: f64,
    pub sign: f64,
    /// False when `||A||` is below the frame floor and the directions are
    /// numerically meaningless (nearly conformal matrix).
    pub well_defined: bool,
}

impl FrameDecomp {
    /// Rebuild `sign * R_u diag(e^l, e^{-l}) R_{pi/2 - s}`.
    pub fn reconstruct(&self) -> Mat2 {
        let d = Mat2::diag(self.log_norm.exp(), (-self.log_norm).exp());
        rotation(self.u_angle)
            .mul(&d)
            .mul(&rotation(FRAC_PI_2 - self.s_angle))
            .scale(self.sign)
    }

    /// Unit vector spanning the contracted direction.
    pub fn s_hat(&self) -> (f64, f64) {
        (self.s_angle.cos(), self.s_angle.sin())
    }

    pub fn u_hat(&self) -> (f64, f64) {
        (self.u_angle.cos(), self.u_angle.sin())
    }
}

/// Default norm floor below which frames are flagged ill-defined.
pub const FRAME_FLOOR: f64 = 10.0;

/// Extract the singular frame of a log-scaled matrix.
///
/// `frame_floor` is a norm threshold (not a log): frames with
/// `||A|| < frame_floor` come back with `well_defined = false` and the
/// caller must branch. Requires positive determinant.
pub fn svd_frame(a: &LogScaledMat2, frame_floor: f64) -> FrameDecomp {
    let m = a.unit();
    // E/F/G/H closed form: A = R_phi diag(s1, s2) R_psi with
    // phi + psi = atan2(H, E), phi - psi = atan2(G, F).
    let e = (m.a + m.d) / 2.0;
    let f = (m.a - m.d) / 2.0;
    let g = (m.c + m.b) / 2.0;
    let h = (m.c - m.b) / 2.0;
    let sum = h.atan2(e);
    let dif = g.atan2(f);
    let phi = (sum + dif) / 2.0;
    let psi = (sum - dif) / 2.0;
    let s1_unit = e.hypot(h) + f.hypot(g);
    let log_norm = a.log_norm() + s1_unit.ln();
    // Canonicalize u = phi mod pi and s = pi/2 - psi mod pi; each shift by
    // pi flips the sign of its rotation factor.
    let u_angle = rp1(phi);
    let s_raw = FRAC_PI_2 - psi;
    let s_angle = rp1(s_raw);
    let ku = ((phi - u_angle) / PI).round() as i64;
    let ks = ((s_angle - s_raw) / PI).round() as i64;
    let sign = if (ku + ks) % 2 == 0 { 1.0 } else { -1.0 };
    FrameDecomp {
        u_angle,
        log_norm,
        s_angle,
        sign,
        well_defined: log_norm >= frame_floor.ln(),
    }
}

/// The paper's angle between consecutive blocks: `s(next) - u(prev)`,
/// reduced to `(-pi/2, pi/2]`.
pub fn angle_between(prev: &FrameDecomp, next: &FrameDecomp) -> Result<f64> {
    if !prev.well_defined || !next.well_defined {
        return Err(Error::IllDefinedFrame {
            log_norm: prev.log_norm.min(next.log_norm),
            floor: FRAME_FLOOR,
        });
    }
    Ok(rp1_diff(next.s_angle, prev.u_angle))
}

// ---------------------------------------------------------------------------
// Non-resonant product check
// ---------------------------------------------------------------------------

/// Measured quantities of one non-resonant product `E3 = E2 * E1`.
#[derive(Clone, Copy, Debug)]
pub struct NonresonantReport {
    /// Preconditions held (`e0 >> 1`, `|theta| >= e0^{-eta}`); nothing is
    /// computed when false.
    pub admissible: bool,
    pub e0: f64,
    pub theta: f64,
    pub e3: f64,
    /// `e1 * e2 * |sin theta|`.
    pub predicted: f64,
    pub discrepancy: f64,
    /// `10 * e0^{-1/2}`.
    pub norm_bound: f64,
    pub u_drift: f64,
    /// `e2^{-7/4}`.
    pub u_drift_bound: f64,
    pub s_drift: f64,
    /// `e1^{-7/4}`.
    pub s_drift_bound: f64,
    pub passes: bool,
}

/// Check `e3 = e1 e2 |sin theta| + O(e0^{-1/2})` and the angle drifts
/// `|u3 - u2| < e2^{-7/4}`, `|s3 - s1| < e1^{-7/4}` on a concrete pair.
pub fn nonresonant_product_check(
    e1: &LogScaledMat2,
    e2: &LogScaledMat2,
    eta: f64,
) -> NonresonantReport {
    let f1 = svd_frame(e1, FRAME_FLOOR);
    let f2 = svd_frame(e2, FRAME_FLOOR);
    let theta = rp1_diff(f2.s_angle, f1.u_angle);
    let e0 = f1.log_norm.min(f2.log_norm).exp();
    let admissible =
        f1.well_defined && f2.well_defined && e0 >= 10.0 && theta.abs() >= e0.powf(-eta);
    if !admissible {
        return NonresonantReport {
            admissible,
            e0,
            theta,
            e3: f64::NAN,
            predicted: f64::NAN,
            discrepancy: f64::NAN,
            norm_bound: f64::NAN,
            u_drift: f64::NAN,
            u_drift_bound: f64::NAN,
            s_drift: f64::NAN,
            s_drift_bound: f64::NAN,
            passes: false,
        };
    }
    let prod = compose(e2, e1);
    let f3 = svd_frame(&prod, FRAME_FLOOR);
    let e3 = prod.log_norm().exp();
    let predicted = (f1.log_norm + f2.log_norm).exp() * theta.sin().abs();
    let discrepancy = (e3 - predicted).abs();
    let norm_bound = 10.0 / e0.sqrt();
    let u_drift = rp1_dist(f3.u_angle, f2.u_angle);
    let s_drift = rp1_dist(f3.s_angle, f1.s_angle);
    let u_drift_bound = (-1.75 * f2.log_norm).exp();
    let s_drift_bound = (-1.75 * f1.log_norm).exp();
    NonresonantReport {
        admissible,
        e0,
        theta,
        e3,
        predicted,
        discrepancy,
        norm_bound,
        u_drift,
        u_drift_bound,
        s_drift,
        s_drift_bound,
        passes: discrepancy <= norm_bound && u_drift <= u_drift_bound && s_drift <= s_drift_bound,
    }
}

// ---------------------------------------------------------------------------
// Resonant cancellation check
// ---------------------------------------------------------------------------

/// Claimed norm decomposition `||A|| = lambda_1^m`, `||B|| = lambda_2^n`.
#[derive(Clone, Copy, Debug)]
pub struct ResonantParams {
    pub log_lambda1: f64,
    pub m: u32,
    pub log_lambda2: f64,
    pub n: u32,
}

#[derive(Clone, Copy, Debug)]
pub struct ResonantReport {
    /// `u(A) = s(B)` within the alignment tolerance.
    pub aligned: bool,
    pub angle: f64,
    /// log ||B A||.
    pub log_norm_ba: f64,
    /// `log 2 + max(m log l1 - n log l2, n log l1 - m log l2)`.
    pub log_bound: f64,
    pub passes: bool,
}

/// Alignment tolerance for complete resonance.
pub const RESONANCE_TOL: f64 = 1e-12;

/// Check the cancellation bound
/// `||BA|| <= 2 max(lambda_1^m lambda_2^{-n}, lambda_1^n lambda_2^{-m})`
/// in the log domain for a completely resonant pair (`u(A) = s(B)`).
pub fn resonant_cancellation_check(
    a: &LogScaledMat2,
    b: &LogScaledMat2,
    params: ResonantParams,
) -> ResonantReport {
    let fa = svd_frame(a, FRAME_FLOOR);
    let fb = svd_frame(b, FRAME_FLOOR);
    let angle = rp1_diff(fa.u_angle, fb.s_angle);
    let aligned = fa.well_defined && fb.well_defined && angle.abs() <= RESONANCE_TOL;
    let prod = compose(b, a);
    let log_norm_ba = prod.log_norm();
    let l1 = params.log_lambda1;
    let l2 = params.log_lambda2;
    let (m, n) = (params.m as f64, params.n as f64);
    let log_bound = 2f64.ln() + (m * l1 - n * l2).max(n * l1 - m * l2);
    ResonantReport {
        aligned,
        angle,
        log_norm_ba,
        log_bound,
        passes: aligned && log_norm_ba <= log_bound,
    }
}

// ---------------------------------------------------------------------------
// mu-hyperbolicity
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockDirection {
    Forward,
    Backward,
}

/// Outcome of the mu-hyperbolicity certificate over one block.
#[derive(Clone, Copy, Debug)]
pub struct HyperbolicityReport {
    pub passes: bool,
    /// min over i >= 1 of `log||A^i|| / (i (1-eps) log mu)`; infinite in
    /// the degenerate regime `(1-eps) log mu <= 0` where the growth
    /// condition is vacuous.
    pub worst_ratio: f64,
    /// Direction attaining the worst ratio.
    pub direction: BlockDirection,
    /// All single-step norms satisfied `||A_i|| <= lambda`.
    pub singles_ok: bool,
}

/// Certify `||A_i|| <= lambda` and `||A^i|| >= mu^{i(1-eps)}` for the
/// forward partial products and for the backward (inverse) products of the
/// block, all in the log domain.
pub fn check_mu_hyperbolic(
    blocks: &[LogScaledMat2],
    mu: f64,
    lambda: f64,
    eps: f64,
) -> Result<HyperbolicityReport> {
    if blocks.is_empty() {
        return Err(Error::InvalidInput("empty block".into()));
    }
    let log_lambda = lambda.ln();
    let singles_ok = blocks
        .iter()
        .all(|a| a.log_norm() <= log_lambda * (1.0 + 1e-12) + 1e-12);
    let rate = (1.0 - eps) * mu.ln();
    if rate <= 0.0 {
        // mu^{i(1-eps)} <= 1 <= ||A^i||: vacuous growth condition.
        return Ok(HyperbolicityReport {
            passes: singles_ok,
            worst_ratio: f64::INFINITY,
            direction: BlockDirection::Forward,
            singles_ok,
        });
    }
    let mut worst_ratio = f64::INFINITY;
    let mut direction = BlockDirection::Forward;
    // Forward partial products A^i = A_{i-1} ... A_0 for i in the block's
    // index range {1, ..., n-1} (i = 0 is the identity, trivially fine).
    let mut fwd = LogScaledMat2::identity();
    for (i, a) in blocks.iter().enumerate() {
        fwd = compose(a, &fwd);
        if i + 1 == blocks.len() {
            break;
        }
        let ratio = fwd.log_norm() / ((i as f64 + 1.0) * rate);
        if ratio < worst_ratio {
            worst_ratio = ratio;
            direction = BlockDirection::Forward;
        }
    }
    // Backward: ||(A_{n-1} ... A_{n-i})^{-1}|| = ||A_{n-1} ... A_{n-i}||
    // for determinant-one blocks, so suffix products carry the condition.
    let mut bwd = LogScaledMat2::identity();
    for (i, a) in blocks.iter().rev().enumerate() {
        bwd = compose(&bwd, a);
        if i + 1 == blocks.len() {
            break;
        }
        let ratio = bwd.log_norm() / ((i as f64 + 1.0) * rate);
        if ratio < worst_ratio {
            worst_ratio = ratio;
            direction = BlockDirection::Backward;
        }
    }
    if blocks.len() == 1 {
        worst_ratio = f64::INFINITY;
    }
    // 1e-10 of slack absorbs the log-domain roundoff of the partial
    // products (a sum of per-step ln terms).
    Ok(HyperbolicityReport {
        passes: singles_ok && worst_ratio >= 1.0 - 1e-10,
        worst_ratio,
        direction,
        singles_ok,
    })
}

// ---------------------------------------------------------------------------
// Faa di Bruno partition sum
// ---------------------------------------------------------------------------

/// Exact evaluation of the partition sum
/// `sum over k_1 + 2 k_2 + ... + n k_n = n of k!/(k_1! ... k_n!) R^k`,
/// which collapses to the closed form `R (1 + R)^{n-1}`.
pub fn faa_di_bruno_partition_sum(n: usize, r: &Rat) -> Result<Rat> {
    if n == 0 || n > 20 {
        return Err(Error::InvalidInput(
            "partition enumeration budget is 1 <= n <= 20".into(),
        ));
    }
    let factorials: Vec<BigInt> = {
        let mut f = vec![BigInt::one()];
        for k in 1..=n {
            let last = f[k - 1].clone();
            f.push(last * BigInt::from(k));
        }
        f
    };
    fn recurse(
        part: usize,
        remaining: usize,
        counts: &mut Vec<usize>,
        factorials: &[BigInt],
        r: &Rat,
        total: &mut Rat,
    ) {
        if remaining == 0 {
            let k: usize = counts.iter().sum();
            let mut coeff = BigRational::from(factorials[k].clone());
            for &ki in counts.iter() {
                coeff /= BigRational::from(factorials[ki].clone());
            }
            let mut rk = Rat::one();
            for _ in 0..k {
                rk *= r;
            }
            *total += coeff * rk;
            return;
        }
        if part == 0 {
            return;
        }
        let max_count = remaining / part;
        for c in 0..=max_count {
            counts.push(c);
            recurse(part - 1, remaining - c * part, counts, factorials, r, total);
            counts.pop();
        }
    }
    let mut total = Rat::zero();
    let mut counts = Vec::new();
    recurse(n, n, &mut counts, &factorials, r, &mut total);
    Ok(total)
}

/// Closed form `R (1 + R)^{n-1}` for comparison.
pub fn faa_di_bruno_closed_form(n: usize, r: &Rat) -> Rat {
    let mut acc = r.clone();
    let base = Rat::one() + r;
    for _ in 1..n {
        acc *= &base;
    }
    acc
}

// ---------------------------------------------------------------------------
// Finite-difference drift check (order <= 2)
// ---------------------------------------------------------------------------

/// Finite-difference estimates for the derivative bounds of a product of
/// two matrix fields. Ratios are reported against the bound shapes with a
/// fitted constant; nothing here asserts.
#[derive(Clone, Debug)]
pub struct DriftReport {
    pub k_max: usize,
    /// max over grid of |d^k e3| / e3^{1 + k eta}, k = 1..=k_max (computed
    /// in the log domain as |d^k l3| terms).
    pub norm_ratio: Vec<f64>,
    /// sup |d^k (u3 - u2)| over the grid, k = 0..=k_max.
    pub u_drift_sup: Vec<f64>,
    pub s_drift_sup: Vec<f64>,
    /// Bound shapes `e2^{-2 + (k+1) eta}` / `e1^{-2 + (k+1) eta}` at the
    /// grid's weakest point, for fitting constants against.
    pub u_bound_shape: Vec<f64>,
    pub s_bound_shape: Vec<f64>,
    /// Fitted constants sup/shape at k = 0.
    pub fitted_c_u: f64,
    pub fitted_c_s: f64,
    /// Richardson disagreement above 10%: grid too coarse.
    pub inconclusive: bool,
}

/// Probe `E3(x) = E2(x) E1(x)` on a uniform grid of `[a, b]` and compare
/// finite-difference derivatives of its norm and frame angles against the
/// lemma bound shapes. Only orders `k <= 2` are probed.
pub fn derivative_drift_check<F1, F2>(
    field1: F1,
    field2: F2,
    interval: (f64, f64),
    grid: usize,
    k_max: usize,
    eta: f64,
) -> Result<DriftReport>
where
    F1: Fn(f64) -> LogScaledMat2,
    F2: Fn(f64) -> LogScaledMat2,
{
    if k_max > 2 {
        return Err(Error::InvalidInput("drift check supports k <= 2".into()));
    }
    if grid < 8 {
        return Err(Error::InvalidInput("grid too small".into()));
    }
    let (a, b) = interval;
    let sample = |m: usize| -> (Vec<f64>, Vec<f64>, Vec<f64>, f64, f64) {
        let h = (b - a) / (m as f64 - 1.0);
        let mut l3 = Vec::with_capacity(m);
        let mut du = Vec::with_capacity(m);
        let mut ds = Vec::with_capacity(m);
        let mut min_l1 = f64::INFINITY;
        let mut min_l2 = f64::INFINITY;
        for i in 0..m {
            let x = a + h * i as f64;
            let e1 = field1(x);
            let e2 = field2(x);
            let f1 = svd_frame(&e1, FRAME_FLOOR);
            let f2 = svd_frame(&e2, FRAME_FLOOR);
            let prod = compose(&e2, &e1);
            let f3 = svd_frame(&prod, FRAME_FLOOR);
            l3.push(prod.log_norm());
            du.push(rp1_diff(f3.u_angle, f2.u_angle));
            ds.push(rp1_diff(f3.s_angle, f1.s_angle));
            min_l1 = min_l1.min(f1.log_norm);
            min_l2 = min_l2.min(f2.log_norm);
        }
        (l3, du, ds, min_l1, min_l2)
    };
    let (l3, du, ds, min_l1, min_l2) = sample(grid);
    let (l3f, _, _, _, _) = sample(2 * grid - 1);
    let h = (b - a) / (grid as f64 - 1.0);
    let fd1 = |v: &[f64], i: usize, step: f64| (v[i + 1] - v[i - 1]) / (2.0 * step);
    let fd2 = |v: &[f64], i: usize, step: f64| (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (step * step);
    // Richardson consistency on the first derivative of l3.
    let mut inconclusive = false;
    for i in 1..grid - 1 {
        let coarse = fd1(&l3, i, h);
        let fine = fd1(&l3f, 2 * i, h / 2.0);
        let scale = coarse.abs().max(fine.abs()).max(1e-9);
        if (coarse - fine).abs() / scale > 0.10 {
            inconclusive = true;
            break;
        }
    }
    let mut norm_ratio = Vec::new();
    for k in 1..=k_max {
        let mut worst: f64 = 0.0;
        for i in 1..grid - 1 {
            // d e3 = e3 d l3 and d^2 e3 = e3 ((d l3)^2 + d^2 l3), so
            // |d^k e3| / e3^{1+k eta} = |...| * e3^{-k eta} stays in f64
            // range even when e3 itself does not.
            let dl = fd1(&l3, i, h);
            let expr = match k {
                1 => dl.abs(),
                _ => (dl * dl + fd2(&l3, i, h)).abs(),
            };
            let ratio = expr * (-(k as f64) * eta * l3[i]).exp();
            worst = worst.max(ratio);
        }
        norm_ratio.push(worst);
    }
    let mut u_drift_sup = vec![du.iter().fold(0.0f64, |m, v| m.max(v.abs()))];
    let mut s_drift_sup = vec![ds.iter().fold(0.0f64, |m, v| m.max(v.abs()))];
    for k in 1..=k_max {
        let mut wu: f64 = 0.0;
        let mut ws: f64 = 0.0;
        for i in 1..grid - 1 {
            let (vu, vs) = match k {
                1 => (fd1(&du, i, h), fd1(&ds, i, h)),
                _ => (fd2(&du, i, h), fd2(&ds, i, h)),
            };
            wu = wu.max(vu.abs());
            ws = ws.max(vs.abs());
        }
        u_drift_sup.push(wu);
        s_drift_sup.push(ws);
    }
    let u_bound_shape: Vec<f64> = (0..=k_max)
        .map(|k| ((-2.0 + (k as f64 + 1.0) * eta) * min_l2).exp())
        .collect();
    let s_bound_shape: Vec<f64> = (0..=k_max)
        .map(|k| ((-2.0 + (k as f64 + 1.0) * eta) * min_l1).exp())
        .collect();
    let fitted_c_u = u_drift_sup[0] / u_bound_shape[0];
    let fitted_c_s = s_drift_sup[0] / s_bound_shape[0];
    Ok(DriftReport {
        k_max,
        norm_ratio,
        u_drift_sup,
        s_drift_sup,
        u_bound_shape,
        s_bound_shape,
        fitted_c_u,
        fitted_c_s,
        inconclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    fn hyperbolic(log_norm: f64, u: f64, s: f64) -> LogScaledMat2 {
        LogScaledMat2::from_frame(log_norm, u, s)
    }

    #[test]
    fn rotation_basics() {
        let id = rotation(0.0);
        assert_eq!(id, Mat2::identity());
        let r = rotation(FRAC_PI_2);
        assert!(r.a.abs() < 1e-15 && (r.b + 1.0).abs() < 1e-15);
        assert!((r.c - 1.0).abs() < 1e-15 && r.d.abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let t: f64 = rng.gen_range(-10.0..10.0);
            assert!((rotation(t).op_norm() - 1.0).abs() < 1e-12);
            assert!((rotation(t).det() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn svd_frame_diagonal() {
        let lam = 50.0;
        let a = LogScaledMat2::from_mat2(&Mat2::diag(lam, 1.0 / lam));
        let f = svd_frame(&a, FRAME_FLOOR);
        assert!(f.well_defined);
        assert!(f.u_angle.abs() < 1e-14);
        assert!((f.s_angle - FRAC_PI_2).abs() < 1e-14);
        assert!((f.log_norm - lam.ln()).abs() < 1e-13);
    }

    #[test]
    fn svd_frame_rotated_diagonal() {
        let lam = 200.0;
        let phi = 0.7;
        let m = rotation(phi).mul(&Mat2::diag(lam, 1.0 / lam));
        let f = svd_frame(&LogScaledMat2::from_mat2(&m), FRAME_FLOOR);
        assert!((f.u_angle - phi).abs() < 1e-13);
        assert!((f.s_angle - FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn svd_frame_rotation_ill_defined() {
        let f = svd_frame(&LogScaledMat2::from_mat2(&rotation(0.3)), FRAME_FLOOR);
        assert!(!f.well_defined);
        assert!(f.log_norm.abs() < 1e-12);
    }

    #[test]
    fn svd_reconstruction_random_sl2() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            // R_a diag(e^l, e^-l) R_b with condition number up to 1e8.
            let l: f64 = rng.gen_range(0.0..9.2);
            let m = rotation(rng.gen_range(0.0..PI))
                .mul(&Mat2::diag(l.exp(), (-l).exp()))
                .mul(&rotation(rng.gen_range(0.0..PI)));
            let ls = LogScaledMat2::from_mat2(&m);
            let f = svd_frame(&ls, FRAME_FLOOR);
            let rec = f.reconstruct();
            let rel = rec.sub(&m).frobenius() / m.frobenius();
            assert!(rel <= 1e-12, "reconstruction rel err {rel}");
            // ||A s_hat|| equals the contracted singular value of the
            // stored float matrix, det(A)/sigma_1; the matvec must run
            // compensated (it loses ||A|| eps otherwise), and det(A)
            // itself drifts from 1 by eps * cond under construction, which
            // is the Mat2 SL2-tag tolerance, not frame error.
            let sv = m.apply_compensated(f.s_hat());
            let contracted = sv.0.hypot(sv.1);
            let expect = m.det_compensated() * (-f.log_norm).exp();
            assert!(
                (contracted - expect).abs() <= 1e-12 * expect,
                "contracted {contracted} vs {expect}"
            );
            assert!(m.is_sl2(1e-12));
        }
    }

    #[test]
    fn compose_identity_and_powers() {
        let a = hyperbolic(3.0, 0.4, 1.1);
        let c = compose(&LogScaledMat2::identity(), &a);
        assert!((c.log_norm() - a.log_norm()).abs() < 1e-12);
        // 1e4 copies of diag(2, 1/2): logscale = 1e4 log 2 within 1e-6.
        let d = LogScaledMat2::from_mat2(&Mat2::diag(2.0, 0.5));
        let mut acc = LogScaledMat2::identity();
        for _ in 0..10_000 {
            acc = compose(&d, &acc);
        }
        assert!((acc.log_norm() - 1e4 * 2f64.ln()).abs() < 1e-6);
        assert!(acc.det_drift_ok());
    }

    #[test]
    fn compose_associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let mut mk = |rng: &mut ChaCha8Rng| {
                hyperbolic(
                    rng.gen_range(0.5..20.0),
                    rng.gen_range(0.0..PI),
                    rng.gen_range(0.0..PI),
                )
            };
            let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            let left = compose(&compose(&c, &b), &a);
            let right = compose(&c, &compose(&b, &a));
            let rel = (left.log_norm() - right.log_norm()).abs() / left.log_norm().abs().max(1.0);
            assert!(rel < 1e-10);
        }
    }

    #[test]
    fn inverse_norm_preserved() {
        let a = hyperbolic(250.0, 0.3, 2.1); // far beyond f64 linear range
        let inv = a.inverse();
        assert!((inv.log_norm() - a.log_norm()).abs() < 1e-9);
        // Full cancellation A^{-1} A = Id is only representable while the
        // cancellation depth 2l stays well inside the ~36 nats a double
        // carries; deep products preserve norms but cannot round-trip.
        let small = hyperbolic(5.0, 0.3, 2.1);
        let prod = compose(&small.inverse(), &small);
        assert!(prod.log_norm().abs() < 1e-9, "{}", prod.log_norm());
    }

    #[test]
    fn angle_between_cases() {
        let a = hyperbolic(5.0, 0.0, FRAC_PI_2);
        let f = svd_frame(&a, FRAME_FLOOR);
        let theta = angle_between(&f, &f).unwrap();
        assert!((theta - FRAC_PI_2).abs() < 1e-12);
        // Resonant construction: u(A) = s(B) gives angle 0.
        let b = hyperbolic(5.0, 1.3, 0.0);
        let fb = svd_frame(&b, FRAME_FLOOR);
        assert!(angle_between(&f, &fb).unwrap().abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let g1 = svd_frame(
                &hyperbolic(4.0, rng.gen_range(0.0..PI), rng.gen_range(0.0..PI)),
                FRAME_FLOOR,
            );
            let g2 = svd_frame(
                &hyperbolic(4.0, rng.gen_range(0.0..PI), rng.gen_range(0.0..PI)),
                FRAME_FLOOR,
            );
            assert!(angle_between(&g1, &g2).unwrap().abs() <= FRAC_PI_2 + 1e-15);
        }
    }

    #[test]
    fn nonresonant_twisted_diagonal() {
        // E1 = E2 = diag(1e4, 1e-4) with a pi/4 angle between the frames.
        // At e0 = 1e4 the admissibility cone |theta| >= e0^{-eta} with
        // eta < 1e-2 starts at 0.91 rad, above pi/4; probe the example with
        // the cone widened (eta = 0.05), where the norm estimate is the
        // same.
        let l = 1e4f64.ln();
        let e1 = hyperbolic(l, 0.0, FRAC_PI_2);
        let e2 = hyperbolic(l, 0.0, FRAC_PI_4);
        // theta = s(E2) - u(E1) = pi/4.
        let strict = nonresonant_product_check(&e1, &e2, 0.01);
        assert!(!strict.admissible);
        let rep = nonresonant_product_check(&e1, &e2, 0.05);
        assert!(rep.admissible);
        assert!((rep.theta.abs() - FRAC_PI_4).abs() < 1e-12);
        assert!(rep.discrepancy <= rep.norm_bound, "{rep:?}");
        assert!(rep.passes);
    }

    #[test]
    fn nonresonant_orthogonal_frames() {
        let l = 1e4f64.ln();
        let e1 = hyperbolic(l, 0.0, FRAC_PI_2);
        let rep = nonresonant_product_check(&e1, &e1, 0.01);
        assert!((rep.theta.abs() - FRAC_PI_2).abs() < 1e-12);
        assert!((rep.e3 - rep.predicted).abs() <= 1.0 / rep.e0.sqrt());
        assert!(rep.passes);
    }

    #[test]
    fn nonresonant_random_ensemble() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let eta = 0.01;
        for _ in 0..2000 {
            let l1: f64 = rng.gen_range(1e4f64.ln()..1e6f64.ln());
            let l2: f64 = rng.gen_range(1e4f64.ln()..1e6f64.ln());
            let e0 = l1.min(l2).exp();
            let u1 = rng.gen_range(0.0..PI);
            // Force |theta| >= e0^{-eta} by sampling theta directly.
            let min_t = e0.powf(-eta);
            let theta: f64 =
                rng.gen_range(min_t..FRAC_PI_2) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let s2 = rp1(u1 + theta);
            let e1m = hyperbolic(l1, u1, rng.gen_range(0.0..PI));
            let e2m = hyperbolic(l2, rng.gen_range(0.0..PI), s2);
            let rep = nonresonant_product_check(&e1m, &e2m, eta);
            assert!(rep.admissible);
            assert!(rep.passes, "violation: {rep:?}");
        }
    }

    #[test]
    fn resonant_exact_diagonal() {
        // A = diag(l, 1/l) has u(A) = 0; B = diag(1/l, l) has s(B) = 0.
        let l = 1e6f64;
        let a = LogScaledMat2::from_mat2(&Mat2::diag(l, 1.0 / l));
        let b = LogScaledMat2::from_mat2(&Mat2::diag(1.0 / l, l));
        let rep = resonant_cancellation_check(
            &a,
            &b,
            ResonantParams {
                log_lambda1: l.ln(),
                m: 1,
                log_lambda2: l.ln(),
                n: 1,
            },
        );
        assert!(rep.aligned, "{rep:?}");
        // ||BA|| = 1 exactly; the computed unit product carries the
        // cancellation-depth roundoff eps * (l1 l2) ~ 1e-4.
        assert!(rep.log_norm_ba.abs() < 2e-3, "{}", rep.log_norm_ba);
        assert!(rep.passes);
    }

    #[test]
    fn resonant_random_aligned_and_misaligned_control() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let log_lambda = 10f64.ln();
        let mut control_violations = 0;
        for _ in 0..300 {
            // min(m, n) <= 6 keeps the cancellation depth 2 min(l_A, l_B)
            // under ~28 nats, inside what f64 entries can represent.
            let m = rng.gen_range(4u32..9);
            let n = rng.gen_range(4u32..7);
            let u_a = rng.gen_range(0.0..PI);
            let a = hyperbolic(log_lambda * m as f64, u_a, rng.gen_range(0.0..PI));
            let b = hyperbolic(log_lambda * n as f64, rng.gen_range(0.0..PI), u_a);
            let params = ResonantParams {
                log_lambda1: log_lambda,
                m,
                log_lambda2: log_lambda,
                n,
            };
            let rep = resonant_cancellation_check(&a, &b, params);
            assert!(rep.passes, "aligned violation {rep:?}");
            // Perturb the alignment by 1e-3: the bound may now fail.
            let b_off = hyperbolic(log_lambda * n as f64, rng.gen_range(0.0..PI), u_a + 1e-3);
            let rep_off = resonant_cancellation_check(&a, &b_off, params);
            assert!(!rep_off.aligned);
            if rep_off.log_norm_ba > rep_off.log_bound {
                control_violations += 1;
            }
        }
        assert!(
            control_violations > 0,
            "misaligned control never violated the bound"
        );
    }

    #[test]
    fn mu_hyperbolic_diag_blocks() {
        let mu = 7.0;
        let blocks: Vec<_> = (0..20)
            .map(|_| LogScaledMat2::from_mat2(&Mat2::diag(mu, 1.0 / mu)))
            .collect();
        let rep = check_mu_hyperbolic(&blocks, mu, mu, 0.0).unwrap();
        assert!(rep.passes, "{rep:?}");
        assert!(rep.worst_ratio >= 1.0 - 1e-10);
        let rep_eps = check_mu_hyperbolic(&blocks, mu, mu, 1.0).unwrap();
        assert!(rep_eps.passes);
        assert!(rep_eps.worst_ratio.is_infinite());
    }

    #[test]
    fn mu_hyperbolic_rotation_breaks() {
        let mu = 7.0;
        let mut blocks: Vec<_> = (0..10)
            .map(|_| LogScaledMat2::from_mat2(&Mat2::diag(mu, 1.0 / mu)))
            .collect();
        // A quarter turn makes the next step cancel the accumulated growth.
        blocks.insert(5, LogScaledMat2::from_mat2(&rotation(FRAC_PI_2)));
        let rep = check_mu_hyperbolic(&blocks, mu, mu, 0.05).unwrap();
        assert!(!rep.passes);
        assert!(rep.worst_ratio < 1.0);
    }

    #[test]
    fn faa_di_bruno_examples() {
        assert_eq!(faa_di_bruno_partition_sum(1, &rat(5, 1)).unwrap(), rat(5, 1));
        assert_eq!(faa_di_bruno_partition_sum(3, &rat(2, 1)).unwrap(), rat(18, 1));
        let half = rat(1, 2);
        let expect = faa_di_bruno_closed_form(12, &half);
        assert_eq!(faa_di_bruno_partition_sum(12, &half).unwrap(), expect);
        for n in 1..=12 {
            for r in [rat(1, 1), rat(2, 1), rat(1, 2), rat(5, 1)] {
                assert_eq!(
                    faa_di_bruno_partition_sum(n, &r).unwrap(),
                    faa_di_bruno_closed_form(n, &r),
                    "n = {n}"
                );
            }
        }
    }

    #[test]
    fn drift_constant_fields_zero() {
        let a = hyperbolic(8.0, 0.3, 1.2);
        let rep = derivative_drift_check(|_| a, |_| a, (0.0, 1.0), 33, 2, 0.005).unwrap();
        assert!(!rep.inconclusive);
        assert!(rep.norm_ratio.iter().all(|r| *r < 1e-9));
        assert!(rep.u_drift_sup[1] < 1e-9 && rep.s_drift_sup[1] < 1e-9);
    }
}
