use capregion::closed_form::{hybrid_compose, hybrid_theorem_boundary, mds_outer_bound, simplex_allocation, simplex_membership};
use capregion::exactlp::{lp_solve, LpProblem, LpStatus, Relation};
use capregion::recovery::can_recover;
use capregion::schedulers::{validate_allocation, waterfill, WaterfillOutcome};
use capregion::verify::{brute_force_membership, compare_boundaries, sweep_outer_bound};
use capregion::{
    enumerate_recovery_sets, make_hybrid, make_mds_systematic, make_replication, make_simplex, max_rate, membership,
    project_fm, trace_boundary_2d, CodeSpec, Config, Demand, HybridSpec, Rational, Scalar,
};
use itertools::Itertools;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

fn unit(code: CodeSpec) -> Config {
    Config::new(code, q(1, 1)).unwrap()
}

fn quarters(v: &[i64]) -> Demand {
    Demand::new(v.iter().map(|&x| q(x, 4)).collect()).unwrap()
}

fn small_configs() -> Vec<Config> {
    vec![
        unit(make_replication(4, &[2, 2]).unwrap()),
        unit(make_mds_systematic(4, 2).unwrap()),
        unit(make_mds_systematic(5, 2).unwrap()),
        unit(make_hybrid(HybridSpec::new(2, 1, 1)).unwrap()),
        unit(make_hybrid(HybridSpec::new(1, 2, 3)).unwrap()),
        unit(make_simplex(2).unwrap()),
    ]
}

/// Bounded LPs: nonnegative constraint rows with positive right-hand sides
/// plus a box, maximizing an arbitrary-sign objective.
fn bounded_lp() -> impl Strategy<Value = LpProblem<Rational>> {
    (1usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec(0i64..=4, n), 0..=4),
            prop::collection::vec(1i64..=12, 4),
            prop::collection::vec(-3i64..=5, n),
            prop::option::of(prop::collection::vec(-2i64..=2, n)),
        )
            .prop_map(move |(rows, rhs, obj, eq)| {
                let mut lp = LpProblem::new(n);
                for (row, b) in rows.into_iter().zip(rhs) {
                    lp.push_le(row.into_iter().map(Rational::from_int).collect(), Rational::from_int(b));
                }
                for i in 0..n {
                    let mut e = vec![q(0, 1); n];
                    e[i] = q(1, 1);
                    lp.push_le(e, q(10, 1));
                }
                if let Some(eq) = eq {
                    lp.push_eq(eq.into_iter().map(Rational::from_int).collect(), q(1, 1));
                }
                lp.maximize(obj.into_iter().map(Rational::from_int).collect())
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_solutions_are_exact_and_optimal(lp in bounded_lp()) {
        let res = lp_solve(&lp).unwrap();
        prop_assert_ne!(res.status, LpStatus::Unbounded);
        if res.status == LpStatus::Optimal {
            let x = res.solution.clone().unwrap();
            let v = res.value.clone().unwrap();
            prop_assert!(lp.is_feasible_point(&x));
            prop_assert_eq!(lp.objective_value(&x), v.clone());

            let mut tighter = lp.clone();
            let negated = lp.objective.iter().map(|c| -c).collect();
            tighter.push(negated, Relation::Le, -(v + q(1, 1_000_000)));
            prop_assert_eq!(lp_solve(&tighter).unwrap().status, LpStatus::Infeasible);
        }
        prop_assert_eq!(lp_solve(&lp).unwrap(), res);
    }

    #[test]
    fn membership_is_monotone_with_valid_witness(
        which in 0usize..6,
        d in prop::collection::vec(0i64..=12, 2),
        shrink in prop::collection::vec(0i64..=12, 2),
    ) {
        let config = &small_configs()[which];
        let demand = quarters(&d);
        if let Some(alloc) = membership(config, &demand).unwrap() {
            let (loads, ok) = validate_allocation(config, &alloc, &demand).unwrap();
            prop_assert!(ok);
            prop_assert!(loads.within(config.mu()));
            let lower: Vec<i64> = d.iter().zip(&shrink).map(|(a, b)| (*a).min(*b)).collect();
            prop_assert!(membership(config, &quarters(&lower)).unwrap().is_some());
        }
    }

    #[test]
    fn region_is_convex(
        which in 0usize..6,
        a in prop::collection::vec(0i64..=12, 2),
        b in prop::collection::vec(0i64..=12, 2),
    ) {
        let config = &small_configs()[which];
        let (da, db) = (quarters(&a), quarters(&b));
        if membership(config, &da).unwrap().is_some() && membership(config, &db).unwrap().is_some() {
            let mid: Vec<Rational> = da.rates().iter().zip(db.rates()).map(|(x, y)| (x + y) / q(2, 1)).collect();
            prop_assert!(membership(config, &Demand::new(mid).unwrap()).unwrap().is_some());
        }
    }

    #[test]
    fn tracer_matches_fm_and_max_rate(a in 0usize..=3, b in 0usize..=3, c in 0usize..=4) {
        let Ok(code) = make_hybrid(HybridSpec::new(a, b, c)) else { return Ok(()); };
        let config = unit(code);
        prop_assume!(config.num_vars() <= capregion::region::FM_MAX_VARIABLES);
        let traced = trace_boundary_2d(&config).unwrap();
        prop_assert_eq!(&project_fm(&config).unwrap(), &traced);
        for (x, y) in traced.upper() {
            prop_assert_eq!(&max_rate(&config, std::slice::from_ref(x), 1).unwrap(), y);
        }
        prop_assert_eq!(compare_boundaries(&traced, &traced).max_abs_gap, q(0, 1));
    }

    #[test]
    fn recovering_sets_are_minimal_and_complete(
        cols in prop::collection::vec(prop::collection::vec(0u64..3, 2), 2..=6),
    ) {
        let generator: Vec<Vec<u64>> = (0..2).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let Ok(code) = CodeSpec::from_generator(3, generator) else { return Ok(()); };
        let rec = enumerate_recovery_sets(&code).unwrap();
        let n = code.n();
        for file in 0..2 {
            for set in rec.sets(file) {
                prop_assert!(can_recover(&code, file, set));
                for drop in 0..set.len() {
                    let mut smaller = set.clone();
                    smaller.remove(drop);
                    prop_assert!(!can_recover(&code, file, &smaller));
                }
            }
            let mut minimal: Vec<Vec<usize>> = (1..=n)
                .flat_map(|size| (0..n).combinations(size))
                .filter(|s| can_recover(&code, file, s))
                .filter(|s| (0..s.len()).all(|i| {
                    let mut t = s.clone();
                    t.remove(i);
                    !can_recover(&code, file, &t)
                }))
                .collect();
            minimal.sort();
            prop_assert_eq!(rec.sets(file), minimal.as_slice());
        }
    }

    #[test]
    fn waterfill_matches_membership_when_bound_is_tight(
        nk in prop::sample::select(vec![(4usize, 2usize), (5, 2), (6, 2), (6, 3), (7, 3), (8, 4)]),
        raw in prop::collection::vec(0i64..=10, 4),
    ) {
        let (n, k) = nk;
        let config = unit(make_mds_systematic(n, k).unwrap());
        let demand = quarters(&raw[..k]);
        let lp = membership(&config, &demand).unwrap().is_some();
        prop_assert_eq!(mds_outer_bound(&demand, n, k, config.mu()), lp);
        match waterfill(&config, &demand).unwrap() {
            WaterfillOutcome::Served { allocation, .. } => {
                prop_assert!(lp);
                prop_assert!(validate_allocation(&config, &allocation, &demand).unwrap().1);
                for (file, rate) in demand.rates().iter().enumerate() {
                    if rate < config.mu() {
                        let coded = config.recovery().sets(file).iter().zip(&allocation.shares()[file]);
                        for (set, share) in coded {
                            prop_assert!(set.len() == 1 || *share == q(0, 1));
                        }
                    }
                }
            }
            WaterfillOutcome::Infeasible { .. } => prop_assert!(!lp),
        }
    }

    #[test]
    fn lp_region_lies_inside_outer_bound(
        nk in prop::sample::select(vec![(3usize, 2usize), (5, 3), (4, 3), (6, 4)]),
        raw in prop::collection::vec(0i64..=10, 4),
    ) {
        let (n, k) = nk;
        let config = unit(make_mds_systematic(n, k).unwrap());
        let demand = quarters(&raw[..k]);
        if membership(&config, &demand).unwrap().is_some() {
            prop_assert!(mds_outer_bound(&demand, n, k, config.mu()));
        }
    }

    #[test]
    fn simplex_region_is_the_sum_simplex(raw in prop::collection::vec(0i64..=18, 3)) {
        let config = unit(make_simplex(3).unwrap());
        let demand = quarters(&raw);
        let closed = simplex_membership(&demand, 3, config.mu()).unwrap();
        prop_assert_eq!(membership(&config, &demand).unwrap().is_some(), closed);
        if closed {
            let alloc = simplex_allocation(&config, &demand).unwrap();
            prop_assert!(validate_allocation(&config, &alloc, &demand).unwrap().1);
        }
    }

    #[test]
    fn composition_reproduces_closed_form(a in 0usize..=8, b in 0usize..=8, c in 0usize..=10) {
        let spec = HybridSpec::new(a, b, c);
        let mu = q(3, 2);
        prop_assert_eq!(hybrid_compose(spec, &mu).unwrap(), hybrid_theorem_boundary(spec, &mu));
    }

    #[test]
    fn grid_certificates_are_sound(which in 0usize..6, den in 1u32..=4, raw in prop::collection::vec(0i64..=12, 2)) {
        let config = &small_configs()[which];
        prop_assume!(config.num_vars() <= capregion::verify::BRUTE_FORCE_MAX_SETS);
        let demand = Demand::new(raw.iter().map(|&v| q(v, i64::from(den))).collect()).unwrap();
        if brute_force_membership(config, &demand, den).unwrap() {
            prop_assert!(membership(config, &demand).unwrap().is_some());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reports_are_reproducible(seed in any::<u64>()) {
        let config = unit(make_mds_systematic(4, 2).unwrap());
        let first = serde_json::to_string(&sweep_outer_bound(&config, 30, seed).unwrap()).unwrap();
        let second = serde_json::to_string(&sweep_outer_bound(&config, 30, seed).unwrap()).unwrap();
        prop_assert_eq!(first, second);
    }
}
