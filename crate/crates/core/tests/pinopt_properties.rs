use certkit::kernel::{shoelace_doubled, LatticePoint};
use certkit::pinopt::{lower_bound, min_moves, oracle_min_moves, CertificateStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn family_matches_oracle_for_small_areas() {
    for d in 1..=25u64 {
        let bound = lower_bound(d).unwrap();
        let oracle = oracle_min_moves(d, bound + 2).unwrap();
        let cert = min_moves(d, 100).unwrap();
        assert!(bound <= oracle, "D = {d}: bound {bound} > oracle {oracle}");
        assert_eq!(cert.cost, oracle, "D = {d}");
        assert_eq!(cert.witness.doubled_area(), u128::from(d));
        assert_eq!(cert.status, CertificateStatus::CertifiedOptimal, "D = {d}");
    }
}

#[test]
fn triangle_is_at_most_half_its_bounding_box() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0c5);
    for _ in 0..100_000 {
        let pts: Vec<LatticePoint> =
            (0..3).map(|_| LatticePoint::new(rng.random_range(-50..=50), rng.random_range(-50..=50))).collect();
        let width = pts.iter().map(|p| p.x).max().unwrap() - pts.iter().map(|p| p.x).min().unwrap();
        let height = pts.iter().map(|p| p.y).max().unwrap() - pts.iter().map(|p| p.y).min().unwrap();
        assert!(shoelace_doubled(pts[0], pts[1], pts[2]) <= (width * height) as u128);
    }
}

#[test]
fn witnesses_hit_their_target_exactly() {
    for d in [1u64, 2, 7, 60, 61, 97, 500, 1000, 2021, 4042] {
        let cert = min_moves(d, 400).unwrap();
        assert_eq!(cert.witness.doubled_area(), u128::from(d));
        assert_eq!(cert.witness.move_cost(), cert.cost);
        assert!(cert.cost >= cert.lower_bound);
    }
}
