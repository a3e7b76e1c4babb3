use backbend_core::estimate::{estimate_theta, ExperimentPlan};
use backbend_core::{BackbendSpec, Region, Window};

/// Oriented survival across a 64³ window on either side of the threshold.
#[test]
fn oriented_survival_brackets_threshold() {
    let window = Window::centered(3, 32, 64).unwrap();
    let plan = ExperimentPlan::new(Region::HalfSpace, window, BackbendSpec::oriented(), 1000, 31);
    let above = estimate_theta(&plan, 0.35).unwrap();
    let below = estimate_theta(&plan, 0.22).unwrap();
    assert!(above.ci_lo > 0.5, "{above:?}");
    assert!(below.ci_hi < 0.1, "{below:?}");
}
