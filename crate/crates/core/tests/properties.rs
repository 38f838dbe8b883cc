use locman::cost::{expected_las_paged, paging_cost_as, paging_cost_cs};
use locman::grid::PartitionScheme;
use locman::savings::params_for_k;
use locman::*;
use proptest::prelude::*;

fn list_strategy() -> impl Strategy<Value = ProbabilityList> {
    (prop::collection::vec(0.01f64..1.0, 1..10), 0.0f64..1.0).prop_map(|(mut w, outside)| {
        let total: f64 = w.iter().sum::<f64>() + outside;
        w.iter_mut().for_each(|x| *x /= total);
        w.sort_by(|a, b| b.total_cmp(a));
        ProbabilityList::new(w).unwrap()
    })
}

proptest! {
    #[test]
    fn as_paging_never_below_cs(list in list_strategy(), n in 1u32..60, reading in prop::sample::select(vec![PagingReading::Literal, PagingReading::Principled])) {
        let params = NetworkParams::default();
        let bytes = ByteTable::default();
        let cs = paging_cost_cs(&params, &bytes, RADIO, n).unwrap();
        let as_ = paging_cost_as(&params, &bytes, RADIO, n, &list, reading).unwrap();
        prop_assert!(as_ >= cs - 1e-9 * cs);
    }

    #[test]
    fn expected_las_paged_within_list(list in list_strategy()) {
        let e = expected_las_paged(&list).unwrap();
        prop_assert!(e >= 1.0 - 1e-12 && e <= list.k() as f64 + 1e-12);
    }

    #[test]
    fn optimum_invariant_under_cost_scaling(f in 0.1f64..2.0, scale in 0.01f64..100.0) {
        let mut p = SavingsParams::radio_default();
        p.cost_next_paging = f;
        let dist = Distribution::UniformConditional;
        let (k, _) = optimum_k(&p, 1..=60, &dist).unwrap();
        p.cost_update *= scale;
        p.cost_paging_area *= scale;
        let (k_scaled, _) = optimum_k(&p, 1..=60, &dist).unwrap();
        prop_assert_eq!(k, k_scaled);
    }

    #[test]
    fn savings_grow_with_p_inside(k in 1usize..40, p in 0.0f64..0.9) {
        let t = SavingsParams::radio_default();
        let dist = Distribution::UniformConditional;
        let mut lo = params_for_k(&t, k, &dist).unwrap();
        lo.p_inside = p;
        let mut hi = lo.clone();
        hi.p_inside = p + 0.1;
        let (s_lo, s_hi) = (savings(&lo).unwrap(), savings(&hi).unwrap());
        // The bracket is positive whenever savings at p = 1 are.
        prop_assert_eq!(s_hi > s_lo, savings(&SavingsParams { p_inside: 1.0, ..lo }).unwrap() > 0.0);
    }

    #[test]
    fn beta_pair_sums_to_one(m in 2usize..16, hex in any::<bool>(), strips in 1usize..4) {
        let geometry = if hex { Geometry::Hexagonal } else { Geometry::Square };
        let grid = CellGrid::new(geometry, m).unwrap();
        let Ok(partition) = make_partition(&grid, &PartitionScheme::VerticalStrips(strips)) else {
            return Ok(());
        };
        for t in [tally_simple(&grid, &partition), tally_advanced(&grid, &partition)] {
            let b = betas_from_tally(&t).unwrap();
            prop_assert!((b.beta1 + b.beta2 - 1.0).abs() < 1e-12);
            prop_assert!((b.beta21 + b.beta22 - b.beta2).abs() < 1e-12);
        }
    }
}
