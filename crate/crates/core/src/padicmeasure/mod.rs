//! p-adic side at an ordinary split prime: the period Ω_p, the two-variable
//! measure attached to the starred theta function at the origin, its
//! restriction to Z_p^× × Z_p^×, and moment checks.

mod interpolation;
mod measure;
mod period;

pub use interpolation::{
    crt_epsilon, kummer_congruences, kummer_origin, prime_above, restriction_order, verify_interpolation_origin,
    InterpolationReport, InterpolationRow, KummerReport,
};
pub use measure::{
    coefficient_precision, measure_from_theta, measure_with_period, moment, moment_table, restrict_to_units,
    MeasureSeries, MomentEntry, MomentTable, UnitRestrictor,
};
pub use period::{
    required_log_order, solve_padic_period, solve_padic_period_capped, solve_period_for_log, Certificate, Frobenius,
    PadicPeriod, DEFAULT_F_CAP, MAX_LOG_ORDER,
};
