use gmmsp::io::{decode_image, load_image, load_labels, save_image, save_labels};
use gmmsp::pnm;
use gmmsp::Error;
use gmmsp_core::{LabelMap, RasterImage};
use proptest::prelude::*;

#[test]
fn p6_file_decodes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.ppm");
    std::fs::write(&path, b"P6\n2 1\n255\n\xff\x00\x00\x00\x00\x00").unwrap();
    let img = load_image(&path).unwrap();
    assert_eq!(img, RasterImage::new(2, 1, 3, vec![255, 0, 0, 0, 0, 0]).unwrap());
}

#[test]
fn p5_file_decodes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.pgm");
    std::fs::write(&path, b"P5\n1 1\n255\n\x80").unwrap();
    assert_eq!(load_image(&path).unwrap(), RasterImage::new(1, 1, 1, vec![128]).unwrap());
}

#[test]
fn truncated_file_is_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cut.ppm");
    std::fs::write(&path, b"P6\n4 4\n255\n\x01\x02\x03").unwrap();
    let err = load_image(&path).unwrap_err();
    assert!(err.to_string().contains("malformed image"), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn unknown_bytes_are_rejected() {
    assert!(matches!(decode_image(b"GIF89a"), Err(Error::Malformed(_))));
    let mut png = b"\x89PNG\r\n\x1a\n".to_vec();
    png.extend_from_slice(&[0; 8]);
    assert!(matches!(decode_image(&png), Err(Error::Malformed(_))));
}

#[test]
fn png_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let img = RasterImage::new(3, 2, 3, (0..18).map(|v| v * 13).collect()).unwrap();
    let path = dir.path().join("x.png");
    save_image(&img, &path).unwrap();
    assert_eq!(load_image(&path).unwrap(), img);
}

#[test]
fn label_map_files() {
    let dir = tempfile::tempdir().unwrap();
    let m = LabelMap::new(4, 2, vec![0, 1, 2, 3, 400, 400, 65535, 9]).unwrap();
    for name in ["l.pgm", "l.png"] {
        let path = dir.path().join(name);
        save_labels(&m, &path).unwrap();
        assert_eq!(load_labels(&path).unwrap(), m, "{name}");
    }
    let raw = std::fs::read(dir.path().join("l.pgm")).unwrap();
    assert!(raw.starts_with(b"P5\n4 2\n65535\n"));
    assert_eq!(&raw[raw.len() - 4..], &[0xff, 0xff, 0x00, 0x09]);
}

fn raster() -> impl Strategy<Value = RasterImage> {
    (1usize..12, 1usize..12, prop_oneof![Just(1usize), Just(3usize)]).prop_flat_map(|(w, h, c)| {
        proptest::collection::vec(any::<u8>(), w * h * c)
            .prop_map(move |data| RasterImage::new(w, h, c, data).unwrap())
    })
}

proptest! {
    #[test]
    fn pnm_round_trip_is_bit_identical(img in raster()) {
        let bytes = pnm::encode(&img);
        prop_assert_eq!(pnm::decode(&bytes).unwrap(), img.clone());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(if img.channels() == 1 { "a.pgm" } else { "a.ppm" });
        save_image(&img, &path).unwrap();
        prop_assert_eq!(std::fs::read(&path).unwrap(), bytes);
        prop_assert_eq!(load_image(&path).unwrap(), img);
    }

    #[test]
    fn truncation_never_panics(img in raster(), cut in 0usize..64) {
        let bytes = pnm::encode(&img);
        let cut = cut.min(bytes.len().saturating_sub(1));
        prop_assert!(pnm::decode(&bytes[..cut]).is_err());
    }
}
