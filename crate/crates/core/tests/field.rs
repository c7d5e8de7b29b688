mod common;

use common::{dense_scan_max, height_oracle, planar_oracle};
use proxfield_core::{
    max_z_discomfort, normalization_constant, person_discomfort, scene_discomfort, Person,
    PersonField, Scene, SceneOptions,
};
use rand::{Rng, SeedableRng};

fn field(x: f64, y: f64, theta: f64, h: f64) -> PersonField {
    PersonField::new(
        Person::new([x, y], theta, h).unwrap(),
        &SceneOptions::default(),
    )
    .unwrap()
}

#[test]
fn kappa_from_dense_scan() {
    for (h, lo, hi) in [(1.75, 0.949, 0.975), (2.20, 0.96, 0.99)] {
        let k = field(0.0, 0.0, 0.0, h).kappa();
        let (_, f) = dense_scan_max(h, 1e-4);
        assert!((k - f.sqrt()).abs() < 1e-8);
        assert!((lo..=hi).contains(&k), "h={h}: {k}");
    }
    // The shortest profile peaks lower than the wider ranges quoted for it.
    let k = field(0.0, 0.0, 0.0, 1.30).kappa();
    assert!((k - dense_scan_max(1.30, 1e-4).1.sqrt()).abs() < 1e-8);
    assert!((0.92..0.93).contains(&k), "{k}");
}

#[test]
fn peak_is_one() {
    let f = field(0.0, 0.0, 0.0, 1.75);
    let (z_star, _) = max_z_discomfort(f.z_model());
    assert!((person_discomfort(&f, [0.0, 0.0, z_star]).unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(normalization_constant(f.z_model()), f.kappa());
}

#[test]
fn matches_geometric_mean_oracle() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    for _ in 0..10_000 {
        let (x, y, theta, h) = (
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.2..3.2),
            rng.gen_range(1.0..2.4),
        );
        let f = field(x, y, theta, h);
        let r = [
            x + rng.gen_range(-2.5..2.5),
            y + rng.gen_range(-2.5..2.5),
            rng.gen_range(0.0..h + 2.5),
        ];
        let want = ((planar_oracle([x, y], theta, 1.0, r[0], r[1]) * height_oracle(r[2], h))
            .sqrt()
            / f.kappa())
        .min(1.0);
        let got = person_discomfort(&f, r).unwrap();
        assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
    }
}

#[test]
fn scene_aggregation() {
    let p = Person::new([0.0, 0.0], 0.3, 1.75).unwrap();
    let one = Scene::new(vec![p], SceneOptions::default()).unwrap();
    let two = Scene::new(vec![p, p], SceneOptions::default()).unwrap();
    let single = &one.fields()[0];
    for r in [[0.1, 0.2, 1.0], [0.8, -0.4, 0.2], [2.0, 2.0, 3.0]] {
        let s = scene_discomfort(&one, r).unwrap();
        assert_eq!(s, person_discomfort(single, r).unwrap());
        assert!((scene_discomfort(&two, r).unwrap() - s).abs() <= 1e-12);
        assert_eq!(scene_discomfort(&Scene::empty(), r).unwrap(), 0.0);
    }
    assert!(scene_discomfort(&one, [0.0, 0.0, -0.1]).is_err());
    assert!(Person::new([0.0, 0.0], 0.0, 0.0).is_err());
    assert!(Person::new([0.0, 0.0], 0.0, 1.7)
        .unwrap()
        .with_speed(-1.0)
        .is_err());
}
