use kcenter::csv::{load_csv, parse_csv, to_csv, write_csv};
use kcenter::synth::generate_gaussian;
use kcenter_core::{root_region, Dataset};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Dataset> {
    (1usize..12, 1usize..5).prop_flat_map(|(s, a)| {
        proptest::collection::vec(
            prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), -1e3f64..1e3],
            s * a,
        )
        .prop_map(move |v| Dataset::new(s, a, v).unwrap())
    })
}

proptest! {
    #[test]
    fn csv_round_trips_bitwise(d in matrix(), header in any::<bool>()) {
        let names: Vec<String> = (0..d.n_attrs()).map(|a| format!("x{a}")).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let text = to_csv(&d, header.then_some(&names[..]));
        let back = parse_csv(&text, header).unwrap();
        prop_assert_eq!(back.n_samples(), d.n_samples());
        let same = back.values().iter().zip(d.values()).all(|(a, b)| a.to_bits() == b.to_bits());
        prop_assert!(same);
    }

    #[test]
    fn generator_is_reproducible(n in 3usize..60, k in 1usize..4, a in 1usize..4, seed in any::<u64>()) {
        let d = generate_gaussian(n, k, a, seed).unwrap();
        prop_assert_eq!((d.n_samples(), d.n_attrs()), (n, a));
        let again = generate_gaussian(n, k, a, seed).unwrap();
        prop_assert!(d.values().iter().zip(again.values()).all(|(x, y)| x.to_bits() == y.to_bits()));
        for b in &root_region(&d, k).unwrap().boxes {
            prop_assert!(d.rows().all(|x| b.contains(x)));
        }
    }
}

#[test]
fn files_round_trip() {
    let dir = std::env::temp_dir().join(format!("kcenter-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("d.csv");
    let d = generate_gaussian(50, 3, 2, 1).unwrap();
    write_csv(&p, &d, Some(&["a", "b"])).unwrap();
    assert_eq!(load_csv(&p, true).unwrap(), d);
    assert!(load_csv(&dir.join("missing.csv"), false).is_err());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bundled_datasets_load() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let iris = load_csv(&root.join("iris.csv"), true).unwrap();
    assert_eq!((iris.n_samples(), iris.n_attrs()), (150, 4));
    let glass = load_csv(&root.join("glass.csv"), true).unwrap();
    assert_eq!((glass.n_samples(), glass.n_attrs()), (214, 9));
    let b = root_region(&iris, 3).unwrap().boxes[0].clone();
    assert_eq!((b.lo[0], b.hi[0]), (4.3, 7.9));
}
