//! Class-specific schedules for the per-level hyperbolicity rates
//! `lambda_n`.
//!
//! Desk-scale caveats: the recurrences are stated for astronomically large
//! lambda and fast-growing q_n. At desk parameters the threshold
//! inequalities generally fail and the recurrence factors can leave
//! (0, 1); both are computed and reported, never enforced.

use serde::{Deserialize, Serialize};

use crate::frequency::{big_log, ConvergentTable};
use crate::orbit::CriticalIntervalFamily;
use crate::{Error, Result};
use num_traits::ToPrimitive;

/// Which recurrence drives the schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleClass {
    /// log lambda_N = log lambda + (l+1) log b_N;
    /// log lambda_n = (1 - 2(l+1) q_{n-1}^{-1/2}) log lambda_{n-1}.
    Cl { l: u32 },
    /// log lambda_n = log lambda_{n-1} - 10 q_{n-1}^{-(1 - delta^{1/2})},
    /// seeded at lambda_{N-1} = lambda.
    Cinf { delta: f64 },
    /// log lambda_n = log lambda_{n-1} -+ 2*10^3 q_{n-1}^{tau/(s-1) - 1},
    /// seeded at lambda_{N-1} = lambda; the + branch gives lambda~_n.
    GevreyDc { s: f64, tau: f64, gamma: f64 },
    /// Same with exponent (2-s)/(2(s-1)).
    GevreySdc { s: f64 },
}

/// One threshold inequality computed at desk scale.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Required log lambda.
    pub log_required: f64,
    pub log_actual: f64,
    pub satisfied: bool,
    /// log_required / log_actual: how far desk scale is from the regime.
    pub relaxation: f64,
}

/// One of the class's smallness sums, evaluated over the available rows.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmallnessReport {
    pub description: String,
    pub sum: f64,
    pub bound: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LambdaSchedule {
    pub class: ScheduleClass,
    pub log_lambda: f64,
    pub epsilon: f64,
    pub n_start: usize,
    pub n_max: usize,
    /// `(n, log lambda_n)` for `n = n_start ..= n_max`.
    pub log_lambda_n: Vec<(usize, f64)>,
    /// The `+`-branch values for the Gevrey classes.
    pub log_lambda_tilde_n: Option<Vec<(usize, f64)>>,
    /// Limit estimate: the last computed value.
    pub log_lambda_inf: f64,
    /// Strictly decreasing over the computed range?
    pub monotone: bool,
    /// `lambda_inf > lambda^{1 - eps/4}`?
    pub lambda_inf_in_band: bool,
    pub threshold: ThresholdReport,
    pub smallness: Vec<SmallnessReport>,
    /// `b_{n_start}` (half width of the starting critical interval).
    pub b_start: f64,
}

impl LambdaSchedule {
    /// `log lambda_n` for a computed level.
    pub fn log_mu(&self, n: usize) -> Option<f64> {
        self.log_lambda_n
            .iter()
            .find(|(k, _)| *k == n)
            .map(|(_, v)| *v)
    }
}

fn q_f64(table: &ConvergentTable, n: usize) -> f64 {
    table.q(n).to_f64().unwrap_or(f64::INFINITY)
}

/// Compute the schedule for levels `n_start ..= n_max`.
pub fn lambda_schedule(
    class: ScheduleClass,
    log_lambda: f64,
    n_start: usize,
    n_max: usize,
    table: &ConvergentTable,
    epsilon: f64,
) -> Result<LambdaSchedule> {
    if n_start == 0 || n_max < n_start {
        return Err(Error::InvalidInput("need 1 <= n_start <= n_max".into()));
    }
    table.require_depth(n_max, n_max + 3)?;
    if !(log_lambda > 0.0) || !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(
            "need log_lambda > 0 and 0 < epsilon < 1".into(),
        ));
    }
    let b_start = CriticalIntervalFamily::b_n(table, n_start)
        .to_f64()
        .unwrap();
    let mut values: Vec<(usize, f64)> = Vec::new();
    let mut tilde: Vec<(usize, f64)> = Vec::new();
    match class {
        ScheduleClass::Cl { l } => {
            let lp1 = (l + 1) as f64;
            let mut cur = log_lambda + lp1 * b_start.ln();
            values.push((n_start, cur));
            for n in n_start + 1..=n_max {
                cur *= 1.0 - 2.0 * lp1 / q_f64(table, n - 1).sqrt();
                values.push((n, cur));
            }
        }
        ScheduleClass::Cinf { delta } => {
            if !(0.0 < delta && delta < 1.0) {
                return Err(Error::InvalidInput("Cinf needs 0 < delta < 1".into()));
            }
            let mut cur = log_lambda; // lambda_{N-1} = lambda
            for n in n_start..=n_max {
                cur -= 10.0 * q_f64(table, n - 1).powf(-(1.0 - delta.sqrt()));
                values.push((n, cur));
            }
        }
        ScheduleClass::GevreyDc { s, tau, .. } => {
            if s <= tau + 1.0 {
                return Err(Error::InvalidInput("Gevrey DC needs s > tau + 1".into()));
            }
            let expo = tau / (s - 1.0) - 1.0;
            let mut cur = log_lambda;
            let mut prev = log_lambda;
            for n in n_start..=n_max {
                let dec = 2e3 * q_f64(table, n - 1).powf(expo);
                let up = prev + dec;
                prev = cur;
                cur -= dec;
                values.push((n, cur));
                tilde.push((n, up));
            }
        }
        ScheduleClass::GevreySdc { s } => {
            if s <= 2.0 {
                return Err(Error::InvalidInput("Gevrey SDC needs s > 2".into()));
            }
            let expo = (2.0 - s) / (2.0 * (s - 1.0));
            let mut cur = log_lambda;
            let mut prev = log_lambda;
            for n in n_start..=n_max {
                let dec = 2e3 * q_f64(table, n - 1).powf(expo);
                let up = prev + dec;
                prev = cur;
                cur -= dec;
                values.push((n, cur));
                tilde.push((n, up));
            }
        }
    }
    let monotone = values.windows(2).all(|w| w[1].1 < w[0].1);
    let log_lambda_inf = values.last().unwrap().1;
    let lambda_inf_in_band = log_lambda_inf > (1.0 - epsilon / 4.0) * log_lambda;
    // Threshold inequality at desk scale.
    let log_required = match class {
        ScheduleClass::Cl { l } => {
            // lambda > q_{N+1}^{100 eps^{-1} (l+1)}.
            100.0 * (l + 1) as f64 / epsilon * big_log(table.q(n_start + 1))
        }
        ScheduleClass::Cinf { .. } => {
            // lambda > e^{q_N^{q_N}} (the dominating term at desk scale).
            let qn = q_f64(table, n_start);
            qn.powf(qn)
        }
        ScheduleClass::GevreyDc { s, tau, gamma } => {
            let qn = q_f64(table, n_start);
            (1e4 / epsilon * gamma.powf(-1.0 / tau)).max(qn.powf(qn)).max({
                let _ = s;
                0.0
            })
        }
        ScheduleClass::GevreySdc { .. } => {
            let qn = q_f64(table, n_start);
            (1e3 / epsilon).max(qn.powf(qn))
        }
    };
    let threshold = ThresholdReport {
        log_required,
        log_actual: log_lambda,
        satisfied: log_lambda > log_required,
        relaxation: log_required / log_lambda,
    };
    // Smallness sums over the available rows (n up to depth - 1).
    let top = table.depth() - 1;
    let sum_over = |from: usize, f: &dyn Fn(usize) -> f64| -> f64 {
        (from..=top).map(f).sum()
    };
    let smallness = match class {
        ScheduleClass::Cl { l } => {
            let lp1 = (l + 1) as f64;
            vec![SmallnessReport {
                description: "sum_{n>N} (l+1) q_{n+1}^{-1/2} <= eps/8".into(),
                sum: sum_over(n_start + 1, &|n| lp1 / q_f64(table, n + 1).sqrt()),
                bound: epsilon / 8.0,
                satisfied: sum_over(n_start + 1, &|n| lp1 / q_f64(table, n + 1).sqrt())
                    <= epsilon / 8.0,
            }]
        }
        ScheduleClass::Cinf { delta } => {
            let e1 = 1.0 - delta.sqrt();
            let s1 = sum_over(n_start, &|n| q_f64(table, n - 1).powf(-e1));
            let s2 = sum_over(n_start + 1, &|n| q_f64(table, n + 1).powf(-0.5));
            vec![
                SmallnessReport {
                    description: "sum_{n>=N} q_{n-1}^{-(1-delta^{1/2})} < eps/10".into(),
                    sum: s1,
                    bound: epsilon / 10.0,
                    satisfied: s1 < epsilon / 10.0,
                },
                SmallnessReport {
                    description: "sum_{n>N} q_{n+1}^{-1/2} <= eps/4".into(),
                    sum: s2,
                    bound: epsilon / 4.0,
                    satisfied: s2 <= epsilon / 4.0,
                },
            ]
        }
        ScheduleClass::GevreyDc { s, tau, .. } => {
            let s1 = sum_over(n_start, &|n| q_f64(table, n).powf(tau / (s - 1.0) - 1.0));
            let s2 = sum_over(n_start, &|n| {
                q_f64(table, n).powf(0.5 * (1.0 - (s - 1.0) / tau))
            });
            vec![
                SmallnessReport {
                    description: "sum q_n^{tau/(s-1)-1} < eps/10^4".into(),
                    sum: s1,
                    bound: epsilon / 1e4,
                    satisfied: s1 < epsilon / 1e4,
                },
                SmallnessReport {
                    description: "sum q_n^{(1-(s-1)/tau)/2} < eps/10^4".into(),
                    sum: s2,
                    bound: epsilon / 1e4,
                    satisfied: s2 < epsilon / 1e4,
                },
            ]
        }
        ScheduleClass::GevreySdc { s } => {
            let s1 = sum_over(n_start, &|n| {
                q_f64(table, n).powf((2.0 - s) / (2.0 * (s - 1.0)))
            });
            let s2 = sum_over(n_start, &|n| q_f64(table, n).powf((2.0 - s) / 2.0));
            vec![
                SmallnessReport {
                    description: "sum q_n^{(2-s)/(2(s-1))} < eps/10^4".into(),
                    sum: s1,
                    bound: epsilon / 1e4,
                    satisfied: s1 < epsilon / 1e4,
                },
                SmallnessReport {
                    description: "sum q_n^{(2-s)/2} < eps/10^4".into(),
                    sum: s2,
                    bound: epsilon / 1e4,
                    satisfied: s2 < epsilon / 1e4,
                },
            ]
        }
    };
    Ok(LambdaSchedule {
        class,
        log_lambda,
        epsilon,
        n_start,
        n_max,
        log_lambda_n: values,
        log_lambda_tilde_n: if tilde.is_empty() { None } else { Some(tilde) },
        log_lambda_inf,
        monotone,
        lambda_inf_in_band,
        threshold,
        smallness,
        b_start,
    })
}
