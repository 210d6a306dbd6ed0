use proptest::prelude::*;
use simplexwise::metrics::{bottleneck, bottleneck_assignment, emd, lac, CostMatrix, WeightedDistribution};
use simplexwise::oracle::{assignment_bruteforce, transport_bruteforce, Objective};

fn square(k: std::ops::RangeInclusive<usize>, integers: bool) -> impl Strategy<Value = CostMatrix> {
    k.prop_flat_map(move |k| {
        let cell = if integers { (0u8..4).prop_map(f64::from).boxed() } else { (0.0..10.0f64).boxed() };
        prop::collection::vec(cell, k * k).prop_map(move |data| CostMatrix::new(k, k, data).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bottleneck_and_lac_match_enumeration(costs in square(1..=7, false)) {
        let b = bottleneck_assignment(&costs).unwrap();
        prop_assert!((b - assignment_bruteforce(&costs, Objective::Bottleneck).unwrap()).abs() <= 1e-12);
        let l = lac(&costs).unwrap();
        prop_assert!((l - assignment_bruteforce(&costs, Objective::Sum).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn ties_are_handled(costs in square(2..=7, true)) {
        prop_assert_eq!(bottleneck_assignment(&costs).unwrap(), assignment_bruteforce(&costs, Objective::Bottleneck).unwrap());
        prop_assert!((lac(&costs).unwrap() - assignment_bruteforce(&costs, Objective::Sum).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn emd_matches_vertex_enumeration(
        costs in square(3..=3, false),
        sa in prop::collection::vec(1u64..5, 3),
        sb in prop::collection::vec(1u64..5, 3),
    ) {
        let u = WeightedDistribution::uniform(3).unwrap();
        prop_assert!((emd(&u, &u, &costs).unwrap() - transport_bruteforce(&u, &u, &costs).unwrap()).abs() <= 1e-9);
        let (a, b) = (WeightedDistribution::from_counts(&sa).unwrap(), WeightedDistribution::from_counts(&sb).unwrap());
        prop_assert!((emd(&a, &b, &costs).unwrap() - transport_bruteforce(&a, &b, &costs).unwrap()).abs() <= 1e-9);
        prop_assert!(emd(&u, &u, &costs).unwrap() <= lac(&costs).unwrap() + 1e-9);
    }

    #[test]
    fn point_set_bottleneck_matches_enumeration(
        a in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 2), 6),
        b in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 2), 6),
    ) {
        let costs = CostMatrix::from_fn(6, 6, |i, j| {
            Ok(a[i].iter().zip(&b[j]).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs())))
        }).unwrap();
        let brute = assignment_bruteforce(&costs, Objective::Bottleneck).unwrap();
        prop_assert!((bottleneck(&a, &b).unwrap() - brute).abs() <= 1e-12);
    }
}

#[test]
fn non_finite_costs_name_the_cell() {
    let err = CostMatrix::new(2, 2, vec![0.0, 1.0, f64::NAN, 2.0]).unwrap_err();
    assert!(matches!(err, simplexwise::Error::NonFiniteCost { row: 1, col: 0 }), "{err}");
}
