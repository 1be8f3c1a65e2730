use arealaw::fcs::{presets, QuantumChannel};
use arealaw::info::{check_correlator_bound, mutual_information, relative_entropy, Bipartition};
use arealaw::linalg::{r, CMat};
use arealaw::peps::OperatorSchmidt;
use arealaw::qstate::{trace_norm_distance, von_neumann_entropy};
use arealaw::random;
use arealaw::thermal::models::classical_ising;
use arealaw::thermal::{classical_area_check, BoundarySplit, ClassicalGibbs, Geometry};
use arealaw::{DensityMatrix, Observable, SiteSpace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn qubits(n: usize) -> SiteSpace {
    SiteSpace::chain(2, n).unwrap()
}

fn state(seed: u64, n: usize, rank: Option<usize>) -> DensityMatrix {
    random::density_matrix(&mut ChaCha8Rng::seed_from_u64(seed), qubits(n), rank)
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_traces_compose(seed in any::<u64>(), x in 0usize..4, y in 0usize..4) {
        prop_assume!(x != y);
        let rho = state(seed, 4, None);
        let keep_all = |drop: &[usize]| (0..4).filter(|s| !drop.contains(s)).collect::<Vec<_>>();
        let stepwise = rho.partial_trace(&keep_all(&[x])).unwrap().partial_trace(&keep_all(&[x, y])).unwrap();
        let direct = rho.partial_trace(&keep_all(&[x, y])).unwrap();
        prop_assert!(max_abs(&(stepwise.matrix() - direct.matrix())) <= 1e-12);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), rank in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random::density_matrix(&mut rng, qubits(3), Some(rank));
        let u = random::unitary(&mut rng, 8);
        let rotated = rho.conjugate(&u).unwrap();
        let gap = von_neumann_entropy(&rho).unwrap() - von_neumann_entropy(&rotated).unwrap();
        prop_assert!(gap.abs() <= 1e-10);
    }

    #[test]
    fn subadditivity_and_araki_lieb(seed in any::<u64>(), rank in 1usize..17, cut in 1usize..4) {
        let rho = state(seed, 4, Some(rank));
        let a: Vec<usize> = (0..cut).collect();
        let b: Vec<usize> = (cut..4).collect();
        let s_ab = von_neumann_entropy(&rho).unwrap();
        let s_a = von_neumann_entropy(&rho.partial_trace(&a).unwrap()).unwrap();
        let s_b = von_neumann_entropy(&rho.partial_trace(&b).unwrap()).unwrap();
        prop_assert!(s_a + s_b - s_ab >= -1e-10);
        prop_assert!(s_ab - (s_a - s_b).abs() >= -1e-10);
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>()) {
        let [a, b, c] = [0, 1, 2].map(|k| state(seed.wrapping_add(k), 3, None));
        let d = |x: &DensityMatrix, y: &DensityMatrix| trace_norm_distance(x, y).unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &a) <= 1e-12);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    }

    #[test]
    fn mutual_information_is_symmetric_and_monotone(seed in any::<u64>(), n in 4usize..6) {
        let rho = state(seed, n, Some(2));
        let space = rho.space().clone();
        let i = |a: Vec<usize>, b: Vec<usize>| mutual_information(&rho, &Bipartition::new(&space, a, b).unwrap()).unwrap();
        let ab = i(vec![0], vec![1]);
        prop_assert!(ab >= -1e-12);
        prop_assert!((ab - i(vec![1], vec![0])).abs() <= 1e-12);
        let wider = i(vec![0], (1..n).collect());
        prop_assert!(wider - ab >= -1e-10);
    }

    #[test]
    fn correlators_bound_mutual_information(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random::density_matrix(&mut rng, qubits(n), None);
        let space = rho.space().clone();
        let ma = random::observable(&mut rng, space.restrict(&[0]).unwrap());
        let mb = random::observable(&mut rng, space.restrict(&[n - 1]).unwrap());
        prop_assert!(check_correlator_bound(&rho, &ma, &mb).unwrap().slack >= -1e-12);
    }

    #[test]
    fn pinsker_inequality(seed in any::<u64>()) {
        let rho = state(seed, 2, None);
        let sigma = state(seed ^ 0x9e37_79b9, 2, None);
        let s = relative_entropy(&rho, &sigma).unwrap().finite().unwrap();
        let t = trace_norm_distance(&rho, &sigma).unwrap();
        prop_assert!(s - 0.5 * t * t >= -1e-10);
    }

    #[test]
    fn transfer_operator_preserves_trace(seed in any::<u64>(), bond in 2usize..4, k in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fcs = presets::random(&mut rng, bond, 2, 2).unwrap();
        let x = random::ginibre(&mut rng, bond, bond);
        let y = fcs.apply_transfer(&x, k);
        prop_assert!((y.trace() - x.trace()).norm() <= 1e-10 * (1.0 + x.trace().norm()));
    }

    #[test]
    fn kraus_sets_from_isometries_are_trace_preserving(seed in any::<u64>(), bond in 1usize..4, phys in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random::unitary(&mut rng, bond * phys);
        let kraus: Vec<CMat> = (0..phys).map(|s| v.view((s * bond, 0), (bond, bond)).into_owned()).collect();
        let channel = QuantumChannel::new(kraus).unwrap();
        let mut sum = CMat::zeros(bond, bond);
        for k in channel.kraus() {
            sum += k.adjoint() * k;
        }
        prop_assert!(max_abs(&(sum - CMat::identity(bond, bond))) <= 1e-10);
    }

    #[test]
    fn operator_schmidt_reconstructs(seed in any::<u64>(), d in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = random::hermitian(&mut rng, d * d);
        let schmidt = OperatorSchmidt::decompose(&op, d).unwrap();
        prop_assert!(max_abs(&(schmidt.reconstruct() - &op)) <= 1e-10 * (1.0 + max_abs(&op)));
        let w = schmidt.weights();
        prop_assert!(w.windows(2).all(|p| p[0] >= p[1]));
        prop_assert!(schmidt.rank() <= d * d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classical_ring_boundary_equality(beta in 0.0f64..4.0, field in -1.0f64..1.0, start in 0usize..8, len in 1usize..7) {
        let h = classical_ising(Geometry::Ring { sites: 8 }, 1.0, field).unwrap();
        let g = ClassicalGibbs::build(&h, beta).unwrap();
        let a: Vec<usize> = (0..len).map(|k| (start + k) % 8).collect();
        let b: Vec<usize> = (0..8).filter(|s| !a.contains(s)).collect();
        let report = classical_area_check(&g, &BoundarySplit::new(&h, a, b).unwrap()).unwrap();
        prop_assert!(report.holds(1e-9), "{report:?}");
    }

    #[test]
    fn maximally_mixed_state_has_no_correlations(n in 2usize..6, cut in 1usize..5) {
        prop_assume!(cut < n);
        let rho = DensityMatrix::maximally_mixed(qubits(n));
        let part = Bipartition::against_complement(rho.space(), (0..cut).collect()).unwrap();
        prop_assert!(mutual_information(&rho, &part).unwrap().abs() <= 1e-12);
        let z = Observable::new(rho.space().restrict(&[0]).unwrap(), CMat::identity(2, 2) * r(2.0)).unwrap();
        prop_assert!((z.operator_norm() - 2.0).abs() <= 1e-12);
    }
}
