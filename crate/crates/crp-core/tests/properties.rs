//! Property-based checks: format round-trips, parser totality on arbitrary
//! input, and optimality of the closed-form pointwise control.

use crp_core::format::{
    parse_influence, parse_instance, parse_policy_csv, parse_values_spec, resample_policy,
    serialize_instance, PolicySpec,
};
use crp_core::{
    benchmarks, pointwise_optimal_control, ControlPolicy, CrpInstance, InfluenceFunction,
    TimeGrid,
};
use proptest::prelude::*;

fn influence_strategy() -> impl Strategy<Value = InfluenceFunction> {
    prop_oneof![
        (1e-3..1.0f64, 1e-3..2.0f64)
            .prop_map(|(a, b)| InfluenceFunction::scaled_arctan(a, b).unwrap()),
        (1e-3..1.0f64, 1e-3..2.0f64)
            .prop_map(|(a, b)| InfluenceFunction::scaled_log(a, b).unwrap()),
        (1e-3..1.0f64, 0.05..0.95f64)
            .prop_map(|(a, p)| InfluenceFunction::power_law(a, p).unwrap()),
    ]
}

fn instance_strategy() -> impl Strategy<Value = CrpInstance> {
    (
        (0.0..100.0f64, 0.0..1e5f64, 1.0..200.0f64, 1.0..50.0f64),
        (0.1..50.0f64, 1e-5..0.1f64, 1e-5..0.1f64, 1e-3..1.0f64),
        (influence_strategy(), influence_strategy()),
        (1.0..2000.0f64, 1.0..2000.0f64),
    )
        .prop_map(
            |(
                (a0, i0, t_end, x_max),
                (mu, delta1, delta2, alpha),
                (beta1, beta2),
                (omega1, omega2),
            )| {
                CrpInstance::new(
                    a0, i0, t_end, x_max, mu, delta1, delta2, alpha, beta1, beta2, omega1,
                    omega2,
                )
                .unwrap()
            },
        )
}

proptest! {
    #[test]
    fn influence_display_round_trips(f in influence_strategy()) {
        prop_assert_eq!(f.to_string().parse::<InfluenceFunction>().unwrap(), f);
    }

    #[test]
    fn instance_documents_round_trip(inst in instance_strategy()) {
        let doc = serialize_instance(&inst);
        prop_assert_eq!(parse_instance(&doc).unwrap(), inst);
    }

    #[test]
    fn parsers_never_panic_on_arbitrary_text(s in any::<String>()) {
        let _ = parse_instance(&s);
        let _ = parse_influence(&s);
        let _ = parse_values_spec(&s);
        let _ = parse_policy_csv(&s);
        let _ = s.parse::<PolicySpec>();
    }

    #[test]
    fn integer_ranges_expand_to_the_exact_count(
        start in 1u32..50,
        step in 1u32..10,
        k in 0u32..60,
    ) {
        let stop = start + step * k;
        let spec = format!("{start}:{step}:{stop}");
        let values = parse_values_spec(&spec).unwrap();
        prop_assert_eq!(values.len(), k as usize + 1);
        prop_assert_eq!(values[0], f64::from(start));
        prop_assert_eq!(*values.last().unwrap(), f64::from(stop));
    }

    #[test]
    fn policy_csv_round_trips_through_formatting(
        (n, raw) in (2usize..30).prop_flat_map(|n| {
            (Just(n), prop::collection::vec(0.0..10.0f64, n + 1))
        }),
        t_end in 1.0..100.0f64,
    ) {
        let grid = TimeGrid::new(n, t_end).unwrap();
        let policy = ControlPolicy::new(grid, raw, 10.0).unwrap();
        let mut csv = String::from("t,x\n");
        for (i, t) in grid.nodes().enumerate() {
            csv.push_str(&format!(
                "{},{}\n",
                crp_core::format::format_number(t),
                crp_core::format::format_number(policy.values()[i]),
            ));
        }
        let samples = parse_policy_csv(&csv).unwrap();
        let back = resample_policy(&samples, grid, 10.0).unwrap();
        for (got, want) in back.values().iter().zip(policy.values()) {
            prop_assert!(
                (got - want).abs() <= 1e-9 + 1e-9 * want.abs(),
                "{got} vs {want}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The closed-form node update must globally maximize
    /// `G(x) = coeff·β1(x) − ω1·x` over the feasible interval; a 2000-point
    /// grid search is the referee.
    #[test]
    fn pointwise_control_beats_grid_search(
        beta1 in influence_strategy(),
        coeff in -1e3..1e7f64,
        omega1 in 1.0..5e3f64,
        x_max in 0.5..50.0f64,
    ) {
        let mut inst = benchmarks::m1();
        inst.beta1 = beta1;
        inst.omega1 = omega1;
        inst.x_max = x_max;
        let x_star = pointwise_optimal_control(&inst, coeff);
        prop_assert!((0.0..=x_max).contains(&x_star));
        let g = |x: f64| coeff * inst.beta1.eval(x).unwrap() - omega1 * x;
        let g_star = g(x_star);
        let mut g_best = f64::NEG_INFINITY;
        for i in 0..=2000 {
            g_best = g_best.max(g(x_max * i as f64 / 2000.0));
        }
        prop_assert!(
            g_star >= g_best - 1e-6 * (1.0 + g_best.abs()),
            "x* = {} scores {} but the grid found {}",
            x_star,
            g_star,
            g_best
        );
    }
}
