use hk_core::exact::{int, Integer};
use hk_core::hrr::{
    chi_decomposition_enumerate, goettsche_series, hilb2_euler, hilb_h2_rank, hrr_chi_surface, jacobian_euler,
    k3_hodge_diamond, moduli_dims, BundleChernData, DecompositionFactor, FactorKind, SurfaceChernData,
};
use hk_core::lattice::k3_lattice;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

// Partitions of n into parts carrying one of `colors` colors, counted by an
// unbounded knapsack over (part, color) pairs.
fn colored_partitions(colors: usize, order: usize) -> Vec<Integer> {
    let mut ways = vec![Integer::zero(); order + 1];
    ways[0] = int(1);
    for part in 1..=order {
        for _ in 0..colors {
            for n in part..=order {
                let add = ways[n - part].clone();
                ways[n] += add;
            }
        }
    }
    ways
}

// e((ℂ*)^m) from its Betti numbers C(m, i).
fn euler_of_torus(m: u32) -> Integer {
    let mut binom = int(1);
    let mut e = Integer::zero();
    for i in 0..=m {
        if i % 2 == 0 {
            e += &binom;
        } else {
            e -= &binom;
        }
        binom = binom * int(i64::from(m - i)) / int(i64::from(i + 1));
    }
    e
}

#[test]
fn k3_series_matches_colored_partitions() {
    let series = goettsche_series(24, 12);
    assert_eq!(series.coeffs(), &colored_partitions(24, 12)[..]);
    assert_eq!(&series.coeffs()[..4], &[int(1), int(24), int(324), int(3200)]);
    for e in [0usize, 1, 2, 5] {
        assert_eq!(goettsche_series(e as i64, 10).coeffs(), &colored_partitions(e, 10)[..]);
    }
}

#[test]
fn hilbert_square_two_routes() {
    for e in -10i64..=30 {
        assert_eq!(hilb2_euler(e), goettsche_series(e, 2).coeffs()[2], "e = {e}");
    }
}

#[test]
fn series_is_monotone_in_euler_number() {
    let order = 10;
    let mut previous = goettsche_series(0, order);
    for e in 1..=30 {
        let s = goettsche_series(e, order);
        for k in 0..=order {
            assert!(!s.coeffs()[k].is_negative());
            assert!(s.coeffs()[k] >= previous.coeffs()[k], "e = {e}, k = {k}");
        }
        previous = s;
    }
}

#[test]
fn jacobian_euler_matches_stratification() {
    for g in 0..=20u32 {
        // strata indexed by node subsets S carry (ℂ*)^{g−|S|}
        let mut oracle = Integer::zero();
        let mut binom = int(1);
        for k in 0..=g {
            oracle += &binom * euler_of_torus(g - k);
            binom = binom * int(i64::from(g - k)) / int(i64::from(k + 1));
        }
        assert_eq!(oracle, int(1));
        assert_eq!(jacobian_euler(0, g), oracle, "g = {g}");
        assert_eq!(jacobian_euler(1 + g % 3, g), Integer::zero());
        let (hilb, jac) = moduli_dims(u64::from(g));
        assert_eq!(hilb, jac);
    }
}

#[test]
fn k3_diamond_agrees_with_lattice_and_series() {
    let d = k3_hodge_diamond().unwrap();
    let b = d.betti();
    assert_eq!(b[2], int(k3_lattice().rank() as i64));
    assert_eq!(d.euler(), SurfaceChernData::k3().c2);
    assert_eq!(d.euler(), goettsche_series(24, 1).coeffs()[1]);
    assert_eq!(hilb_h2_rank(0, 22), int(k3_lattice().extend_by_rank_one(int(-2)).rank() as i64));
}

fn bundle() -> impl Strategy<Value = BundleChernData> {
    (1u32..=5, -20i64..=20, -20i64..=20, -20i64..=20)
        .prop_map(|(r, a, b, c)| BundleChernData::new(r, a, b, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponents_add(e1 in -10i64..=30, e2 in -10i64..=30, order in 0usize..=10) {
        let lhs = goettsche_series(e1 + e2, order);
        let rhs = goettsche_series(e1, order).mul(&goettsche_series(e2, order));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn riemann_roch_is_additive(
        c1_sq in -10i64..=10, chi_o in -3i64..=5,
        f in bundle(), g in bundle(),
    ) {
        let x = SurfaceChernData::new(c1_sq, 12 * chi_o - c1_sq);
        let (Ok(a), Ok(b)) = (hrr_chi_surface(&x, &f), hrr_chi_surface(&x, &g)) else {
            return Ok(());
        };
        prop_assert_eq!(hrr_chi_surface(&x, &f.direct_sum(&g)).unwrap(), a + b);
        prop_assert_eq!(hrr_chi_surface(&x, &BundleChernData::trivial()).unwrap(), int(chi_o));
    }

    #[test]
    fn decompositions_are_consistent(dim in 1u32..=9, chi in -2i64..=8) {
        let report = chi_decomposition_enumerate(dim, chi).unwrap();
        prop_assert_eq!(report.ambiguous, chi == 0);
        for factors in &report.decompositions {
            prop_assert_eq!(factors.iter().map(|f| f.complex_dim).sum::<u32>(), dim);
            prop_assert_eq!(factors.iter().map(DecompositionFactor::chi).product::<i64>(), chi);
            prop_assert!(factors.iter().filter(|f| f.kind == FactorKind::Torus).count() <= 1);
            if chi != 0 {
                prop_assert!(factors.iter().all(|f| f.kind != FactorKind::Torus));
            }
        }
        let mut sorted = report.decompositions.clone();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), report.decompositions.len());
    }
}

#[test]
fn chi_three_in_dimension_four_is_irreducible() {
    let hk4 = DecompositionFactor::new(FactorKind::Hyperkahler, 4).unwrap();
    assert_eq!(chi_decomposition_enumerate(4, 3).unwrap().decompositions, vec![vec![hk4]]);
    let six = chi_decomposition_enumerate(6, 4).unwrap().decompositions;
    assert_eq!(six.len(), 2);
    assert!(six.contains(&vec![DecompositionFactor::new(FactorKind::Hyperkahler, 6).unwrap()]));
}
