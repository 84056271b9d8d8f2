mod common;
mod oracle;

use gmmsp_core::metrics::{achievable_accuracy, boundary_recall, undersegmentation_error, GroundTruth};
use gmmsp_core::LabelMap;

#[test]
fn random_maps_match_set_oracles() {
    let mut rng = common::rng(23);
    for round in 0..40 {
        let sp = if round % 2 == 0 {
            common::blocky_labels(&mut rng, 16, 16, 4, 12)
        } else {
            common::random_labels(&mut rng, 16, 16, 6)
        };
        let gt_map = common::blocky_labels(&mut rng, 16, 16, 5, 3);
        let gt = GroundTruth::from(gt_map.clone());
        assert_eq!(undersegmentation_error(&sp, &gt).unwrap(), oracle::metrics::undersegmentation_error(&sp, &gt_map));
        assert_eq!(achievable_accuracy(&sp, &gt).unwrap(), oracle::metrics::achievable_accuracy(&sp, &gt_map));
        for tol in [0, 1, 2] {
            assert_eq!(boundary_recall(&sp, &gt, tol as usize).unwrap(), oracle::metrics::boundary_recall(&sp, &gt_map, tol));
        }
    }
}

#[test]
fn asa_is_one_exactly_for_pure_superpixels() {
    let mut rng = common::rng(29);
    for _ in 0..20 {
        let sp = common::blocky_labels(&mut rng, 16, 16, 2, 40);
        let gt = GroundTruth::from(common::blocky_labels(&mut rng, 16, 16, 4, 3));
        let asa = achievable_accuracy(&sp, &gt).unwrap();
        assert!(asa <= 1.0);
        // Refining ground truth by superpixel cells gives a pure map.
        let refined = LabelMap::new(
            16,
            16,
            sp.as_slice().iter().zip(gt.segments().as_slice()).map(|(a, b)| a * 8 + b).collect(),
        )
        .unwrap();
        assert_eq!(achievable_accuracy(&refined, &gt).unwrap(), 1.0);
        assert_eq!(undersegmentation_error(&refined, &gt).unwrap(), 0.0);
        assert!(undersegmentation_error(&sp, &gt).unwrap() >= 0.0);
    }
}
