//! Bundled benchmark instances.
//!
//! Three ready-made problem instances (`m1`, `m2`, `m3`) exercise each
//! influence-function family in both the engagement-dependent and the
//! awareness-dependent role, at different horizons and budgets.  A fourth
//! instance, [`sensitivity_base`], is the common baseline that the parameter
//! sweeps in [`crate::experiments`] perturb one coordinate at a time.
//!
//! All four construct infallibly; a unit test asserts they pass validation
//! and produce no advisory warnings.

use crate::influence::InfluenceFunction;
use crate::instance::CrpInstance;

/// Medium community, short horizon, arctan-shaped response to spending and
/// logarithmic word-of-mouth reinforcement.
pub fn m1() -> CrpInstance {
    CrpInstance::new(
        50.0,
        10_000.0,
        50.0,
        10.0,
        12.0,
        1e-4,
        1e-3,
        0.1,
        InfluenceFunction::scaled_arctan(0.05, 0.3).expect("valid bundled coefficients"),
        InfluenceFunction::scaled_log(0.01, 0.01).expect("valid bundled coefficients"),
        1000.0,
        20.0,
    )
    .expect("bundled instance m1 is valid")
}

/// Larger seed community and budget with power-law influence on both
/// channels; the spending response has a steep (infinite-slope) origin.
pub fn m2() -> CrpInstance {
    CrpInstance::new(
        100.0,
        10_000.0,
        80.0,
        15.0,
        15.0,
        1e-4,
        1e-3,
        0.15,
        InfluenceFunction::power_law(0.06, 0.25).expect("valid bundled coefficients"),
        InfluenceFunction::power_law(0.003, 1.0 / 3.0).expect("valid bundled coefficients"),
        1200.0,
        20.0,
    )
    .expect("bundled instance m2 is valid")
}

/// Long horizon with logarithmic response to spending and a nearly linear
/// (small-slope arctan) reinforcement term.
pub fn m3() -> CrpInstance {
    CrpInstance::new(
        150.0,
        10_000.0,
        100.0,
        20.0,
        10.0,
        3e-4,
        1e-3,
        0.2,
        InfluenceFunction::scaled_log(0.04, 1.0).expect("valid bundled coefficients"),
        InfluenceFunction::scaled_arctan(0.04, 0.001).expect("valid bundled coefficients"),
        1000.0,
        25.0,
    )
    .expect("bundled instance m3 is valid")
}

/// Baseline instance for one-parameter sensitivity sweeps.
pub fn sensitivity_base() -> CrpInstance {
    CrpInstance::new(
        100.0,
        10_000.0,
        100.0,
        15.0,
        12.0,
        1e-4,
        1e-3,
        0.1,
        InfluenceFunction::scaled_arctan(0.05, 0.3).expect("valid bundled coefficients"),
        InfluenceFunction::scaled_log(0.01, 0.01).expect("valid bundled coefficients"),
        800.0,
        20.0,
    )
    .expect("bundled sensitivity baseline is valid")
}
