mod common;

use common::{cyclic_on_points, z3_module};
use eqstack::exactalg::{Field, Mat, PrimeField, Rationals};
use eqstack::groupcoh::group_cohomology;
use eqstack::simplicial::{Coefficients, FiniteCategory, FiniteGroupoid};
use eqstack::spectra::discrete_borel_ss;
use eqstack::stackact::{equivariant_cohomology, equivariant_cohomology_via_tot, FiniteGroup, GroupoidAction};
use proptest::prelude::*;

fn matrix<F: Field>(f: &F, rows: usize, cols: usize, entries: &[i64]) -> Mat<F> {
    let t = (0..rows * cols).filter_map(|i| {
        let v = entries[i % entries.len()];
        (v != 0).then(|| (i / cols, i % cols, f.from_i64(v)))
    });
    Mat::from_triplets(f, rows, cols, t)
}

fn check_rank_nullity<F: Field>(m: &Mat<F>) {
    let kernel = m.kernel_basis();
    assert_eq!(m.rank() + kernel.len(), m.ncols());
    for v in &kernel {
        assert!(m.apply(v).iter().all(|x| m.field().is_zero(x)));
    }
    assert_eq!(m.rank(), m.transpose().rank());
}

fn permutation_strategy(k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..k).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(rows in 0usize..7, cols in 0usize..7, entries in prop::collection::vec(-3i64..4, 1..50), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        check_rank_nullity(&matrix(&Rationals, rows, cols, &entries));
        check_rank_nullity(&matrix(&PrimeField::new(p).unwrap(), rows, cols, &entries));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Over ℚ a ℤ/3-module has no higher cohomology, so the discrete Borel
    /// spectral sequence sits in the column `p = 0` and degenerates at E_2.
    #[test]
    fn maschke_degeneration(a in 0usize..3, b in 0usize..2, ops in prop::collection::vec((0usize..5, 0usize..5, -2i64..3), 0..6), which in 0usize..3) {
        prop_assume!(a + b > 0);
        let m = z3_module(a, b, &ops);
        prop_assert_eq!(group_cohomology(&m, 0..=4).unwrap(), vec![a, 0, 0, 0, 0]);
        let action = match which {
            0 => common::point(FiniteGroup::cyclic(3)),
            1 => common::rotation_hexagon(),
            _ => common::pair_cyclic(),
        };
        let trunc = if which == 2 { 3 } else { 4 };
        let ss = discrete_borel_ss(&action, &Coefficients::Module(m), trunc, 0).unwrap();
        prop_assert!(ss.is_consistent());
        let e2 = ss.sequence.page(2).unwrap();
        for (&(s, t), &dim) in &e2.entries {
            if s > 0 && !ss.sequence.is_boundary(s, t) {
                prop_assert_eq!(dim, 0, "E_2^{{{},{}}}", s, t);
            }
        }
        let e_inf = ss.sequence.e_infinity();
        for (&(s, t), &dim) in &e2.entries {
            if !ss.sequence.is_boundary(s, t) {
                prop_assert_eq!(e_inf.dim(s, t), dim);
            }
        }
    }

    /// The pair groupoid is equivalent to a point, so any action on it has
    /// the equivariant cohomology of the point.
    #[test]
    fn morita_invariance_of_pair_groupoids(sigma in (1usize..=4).prop_flat_map(permutation_strategy), factor in 1usize..=2) {
        let (group, table) = cyclic_on_points(&sigma, factor);
        prop_assume!(group.order() <= 4);
        let k = sigma.len();
        let pair = GroupoidAction::from_object_action(group.clone(), FiniteGroupoid::pair(k).category().clone(), table).unwrap();
        let point = common::point(group);
        let f2 = PrimeField::new(2).unwrap();
        let coeff = Coefficients::Field(Rationals);
        prop_assert_eq!(equivariant_cohomology(&pair, &coeff, 0..=2, Some(3)).unwrap(), equivariant_cohomology(&point, &coeff, 0..=2, Some(3)).unwrap());
        let coeff = Coefficients::Field(f2);
        prop_assert_eq!(equivariant_cohomology(&pair, &coeff, 0..=2, Some(3)).unwrap(), equivariant_cohomology(&point, &coeff, 0..=2, Some(3)).unwrap());
    }

    /// Diagonal and totalization agree for random cyclic actions on
    /// zigzag circles and discrete sets.
    #[test]
    fn diagonal_equals_totalization(k in 2usize..4, shift in 0usize..3, flip in any::<bool>(), discrete in any::<bool>()) {
        let n = 2 * k;
        let (atlas, g, table): (FiniteCategory, FiniteGroup, Vec<Vec<usize>>) = if discrete {
            let sigma: Vec<usize> = (0..n).map(|x| (x + 1) % n).collect();
            let (g, t) = cyclic_on_points(&sigma, 1);
            (FiniteCategory::discrete(n), g, t)
        } else if flip {
            let t = vec![(0..n).collect(), (0..n).map(|x| (n - x) % n).collect()];
            (FiniteCategory::cycle(k), FiniteGroup::cyclic(2), t)
        } else {
            // Rotations by an even amount keep the zigzag orientation.
            let step = 2 * (shift % k).max(1);
            let sigma: Vec<usize> = (0..n).map(|x| (x + step) % n).collect();
            let (g, t) = cyclic_on_points(&sigma, 1);
            (FiniteCategory::cycle(k), g, t)
        };
        let a = GroupoidAction::from_object_action(g, atlas, table).unwrap();
        let coeff = Coefficients::Field(Rationals);
        prop_assert_eq!(
            equivariant_cohomology(&a, &coeff, 0..=2, Some(3)).unwrap(),
            equivariant_cohomology_via_tot(&a, &coeff, 0..=2, Some(3)).unwrap()
        );
    }
}
