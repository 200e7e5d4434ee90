use batchlp::{corner_enumerate, gen_random_boxes, solve_box, solve_box_batch, BoxLP};
use proptest::prelude::*;

fn arb_box(max_dim: usize) -> impl Strategy<Value = BoxLP> {
    (1..=max_dim).prop_flat_map(|n| {
        (
            proptest::collection::vec((-1e3..1e3f64, 0.0..1e3f64), n),
            proptest::collection::vec(prop_oneof![Just(0.0), -10.0..10.0f64], n),
        )
            .prop_map(|(bounds, direction)| {
                let lower = bounds.iter().map(|(a, _)| *a).collect();
                let upper = bounds.iter().map(|(a, w)| a + w).collect();
                BoxLP::new(lower, upper, direction)
            })
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * 1f64.max(a.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn matches_corner_enumeration(lp in arb_box(12)) {
        let sol = solve_box(&lp).unwrap();
        prop_assert!(close(sol.value, corner_enumerate(&lp).unwrap()));
        let at_point: f64 = lp.direction.iter().zip(&sol.point).map(|(d, h)| d * h).sum();
        prop_assert_eq!(at_point, sol.value);
    }
}

proptest! {
    #[test]
    fn zero_direction_coordinates_do_not_matter(lp in arb_box(8)) {
        let sol = solve_box(&lp).unwrap();
        let mut flipped = sol.point.clone();
        for i in 0..lp.dim() {
            if lp.direction[i] == 0.0 {
                flipped[i] = lp.lower[i];
            }
        }
        let v: f64 = lp.direction.iter().zip(&flipped).map(|(d, h)| d * h).sum();
        prop_assert!(close(v, sol.value));
    }

    #[test]
    fn corner_oracle_permutation_invariant(lp in arb_box(8), rot in 0usize..8) {
        let n = lp.dim();
        let k = rot % n;
        let rotate = |v: &Vec<f64>| { let mut v = v.clone(); v.rotate_left(k); v };
        let permuted = BoxLP::new(rotate(&lp.lower), rotate(&lp.upper), rotate(&lp.direction));
        prop_assert!(close(corner_enumerate(&lp).unwrap(), corner_enumerate(&permuted).unwrap()));
    }
}

#[test]
fn batch_independent_of_worker_count() {
    let boxes = gen_random_boxes(6, 2000, 5);
    let one = solve_box_batch(&boxes, 1);
    let four = solve_box_batch(&boxes, 4);
    assert_eq!(one, four);
    for (b, r) in boxes.iter().zip(&one) {
        assert_eq!(&solve_box(b), r);
    }
}
