use num_rational::Ratio;
use pibi::label::CorrelatorLabel;
use pibi::polytope::{enumerate_vertices, facet_check};
use pibi::{
    builtin_catalog, eval_partition_correlators, family, verify_classical_bound, Partition,
};
use proptest::prelude::*;

fn falling(n: i128, k: u8) -> i128 {
    (0..k as i128).map(|i| n - i).product()
}

fn partition() -> impl Strategy<Value = Partition> {
    (1u32..=80).prop_flat_map(|n| {
        (0..=n, 0..=n, 0..=n).prop_map(move |(x, y, z)| {
            let mut c = [x, y, z];
            c.sort_unstable();
            Partition::new(c[0], c[1] - c[0], c[2] - c[1], n - c[2])
        })
    })
}

proptest! {
    #[test]
    fn correlators_are_bounded_by_tuple_counts(p in partition()) {
        let v = eval_partition_correlators(p, 4);
        for l in CorrelatorLabel::all_up_to(4) {
            prop_assert!(v.get(l).unwrap().abs() <= falling(p.n() as i128, l.order()));
        }
    }

    #[test]
    fn swapping_settings_exchanges_mixed_strategies(p in partition()) {
        let swapped = Partition::new(p.a, p.c, p.b, p.d);
        prop_assert_eq!(eval_partition_correlators(p, 4).swap_settings(), eval_partition_correlators(swapped, 4));
    }

    #[test]
    fn every_family_is_nonnegative(p in partition()) {
        for f in builtin_catalog() {
            prop_assert!(f.eval_partition(p) >= Ratio::from(0), "{} at {:?}", f.name, p);
        }
    }
}

#[test]
fn fully_aligned_strategies_saturate_the_tuple_count() {
    let v = eval_partition_correlators(Partition::new(7, 0, 0, 0), 4);
    for l in CorrelatorLabel::all_up_to(4) {
        assert_eq!(v.get(l).unwrap(), falling(7, l.order()));
    }
}

#[test]
fn every_family_is_tight_somewhere() {
    for f in builtin_catalog() {
        let r = verify_classical_bound(&f, [12, 13]);
        assert!(r.pass());
        assert!(
            r.rows.iter().all(|row| row.min_value == Ratio::from(0)),
            "{} is not tight",
            f.name
        );
    }
}

#[test]
fn i2_scale_at_the_antialigned_strategy() {
    for n in [2u32, 9, 40] {
        assert_eq!(
            family("I2").eval_partition(Partition::new(0, 0, 0, n)),
            Ratio::from(4 * n as i128)
        );
    }
}

#[test]
fn vertex_count_grows_and_stays_distinct() {
    let small = enumerate_vertices(4, 3).unwrap();
    let large = enumerate_vertices(8, 3).unwrap();
    assert!(large.points.len() > small.points.len());
    let mut keys: Vec<_> = large.points.iter().map(|p| p.values().to_vec()).collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), large.points.len());
    assert!(enumerate_vertices(61, 2).is_err());
}

#[test]
fn facet_reports_are_consistent() {
    for name in ["I2", "I3", "I4"] {
        let r = facet_check(&family(name), 8).unwrap();
        assert!(r.valid, "{name}");
        assert_eq!(r.min_value, 0);
        assert!(r.tight_affine_rank < r.ambient_dim);
        assert_eq!(r.is_facet, r.tight_affine_rank + 1 == r.ambient_dim);
    }
}
