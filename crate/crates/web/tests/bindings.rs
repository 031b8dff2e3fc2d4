use cohcool::bloch::{epsilon_after_rotation, epsilon_star};
use cohcool_web::{
    band_optimum, confidence_band, cooling_regions, hbac_limit, hbac_trajectory, BAND_STRIDE, TRAJECTORY_STRIDE,
};

#[test]
fn band_rows_match_the_library() {
    let flat = confidence_band(0.8, 0.78, 0.8, 101).unwrap();
    assert_eq!(flat.len(), 101 * BAND_STRIDE);
    for row in flat.chunks(BAND_STRIDE) {
        let want = epsilon_after_rotation(0.8, 0.79, row[0]).unwrap();
        assert!((row[2] - want).abs() < 1e-15);
        assert!(row[1] <= row[2] + 1e-15 && row[2] <= row[3] + 1e-15);
    }
}

#[test]
fn band_optimum_sits_near_the_midpoint() {
    let peak = band_optimum(0.8, 0.78, 0.8, 1001).unwrap();
    assert!((peak[0] - 0.79).abs() <= 1e-3);
    assert!((peak[1] - 0.93).abs() <= 0.005);
}

#[test]
fn region_codes_cover_the_grid() {
    let codes = cooling_regions(0.8, 41).unwrap();
    assert_eq!(codes.len(), 41 * 41);
    assert!(codes.iter().all(|&c| c <= 2));
    // gamma = 0.6 sits on row 24 of a 41-point grid; every nonzero rotation cools.
    assert!(codes[24 * 41 + 1..25 * 41].iter().all(|&c| c == 2));
    assert!(codes[1..41].iter().all(|&c| c != 2));
}

#[test]
fn trajectory_converges_to_the_matched_limit() {
    let flat = hbac_trajectory(0.5, 0.5, 1.0, 0.3, 60).unwrap();
    assert_eq!(flat.len(), 61 * TRAJECTORY_STRIDE);
    assert_eq!(&flat[..3], &[0.0, 0.0, 0.0]);
    let last = &flat[flat.len() - TRAJECTORY_STRIDE..];
    assert!(last[3] < 1e-12);
    let limit = hbac_limit(0.5, 0.5, 1.0, 0.3).unwrap();
    assert!((last[2] - limit[0]).abs() < 1e-12);
    assert!((limit[0] - 0.8).abs() < 1e-12);
    assert!((limit[3] - epsilon_star(0.8, 1.0).unwrap()).abs() < 1e-15);
}

#[test]
fn invalid_inputs_become_messages() {
    assert!(confidence_band(0.8, 0.9, 0.1, 11)
        .unwrap_err()
        .contains("InvalidParameter"));
    assert!(cooling_regions(0.8, 4).is_err());
    assert!(hbac_trajectory(1.5, 0.5, 0.0, 0.0, 3)
        .unwrap_err()
        .contains("InvalidPolarization"));
    assert!(confidence_band(0.8, 0.7, 0.8, 1).is_err());
}
