use polycut::error::Error;
use polycut::generators::{gen_correlated, gen_fixed_charge};
use polycut::instance::Instance;

#[test]
fn round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    for inst in [gen_fixed_charge(30, 0.05, 3).unwrap(), gen_correlated(30, 0.2, 1.0, 0.05, 3).unwrap()] {
        let mut inst = inst;
        inst.sigma0 = 0.1 + 0.2;
        inst.d[0] = std::f64::consts::PI * 1e-7;
        let path = dir.path().join("inst.json");
        inst.save(&path).unwrap();
        let back = Instance::load(&path).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.sigma0.to_bits(), inst.sigma0.to_bits());
        assert_eq!(back.write(), inst.write());
    }
}

#[test]
fn bounds_are_folded_into_the_data() {
    let text = br#"{"n": 2, "a": [4.0, 1.0], "c": [1.0, 1.0], "d": [-2.0, -3.0],
        "sigma0": 0.0, "omega": 1.0, "bounds": [0.5, 2.0]}"#;
    let inst = Instance::read(text).unwrap();
    assert_eq!(inst.a, vec![1.0, 4.0]);
    assert_eq!(inst.d, vec![-1.0, -6.0]);
}

#[test]
fn malformed_documents_are_rejected() {
    let parse = |s: &str| Instance::read(s.as_bytes());
    assert!(matches!(parse("{"), Err(Error::Parse(_))));
    assert!(matches!(
        parse(r#"{"n": 1, "a": [1.0], "c": [0.0], "d": [0.0], "sigma0": 0.0, "omega": 1.0, "extra": 1}"#),
        Err(Error::Parse(_))
    ));
    let bad = parse(r#"{"n": 2, "a": [1.0, -1.0], "c": [0.0], "d": [0.0, 0.0], "sigma0": -1.0, "omega": 1.0}"#);
    match bad {
        Err(Error::InvalidInstance(problems)) => assert_eq!(problems.len(), 3, "{problems:?}"),
        other => panic!("unexpected {other:?}"),
    }
    let asym = parse(
        r#"{"n": 2, "a": [1.0, 1.0], "c": [0.0, 0.0], "d": [0.0, 0.0], "sigma0": 0.0, "omega": 1.0,
            "covariance": [[1.0, 0.5], [0.4, 1.0]]}"#,
    );
    assert!(matches!(asym, Err(Error::InvalidInstance(_))));
    let indefinite = parse(
        r#"{"n": 2, "a": [1.0, 1.0], "c": [0.0, 0.0], "d": [0.0, 0.0], "sigma0": 0.0, "omega": 1.0,
            "covariance": [[1.0, 2.0], [2.0, 1.0]]}"#,
    );
    assert!(matches!(indefinite, Err(Error::InvalidInstance(_))));
}
