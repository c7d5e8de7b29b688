use std::f64::consts::PI;

use proptest::prelude::*;
use proxfield_core::{
    agf_eval, build_region_table, discomfort_from_mpp, person_discomfort, region_anchor_height,
    scene_discomfort, z_discomfort, AgfParams, Aggregation, ElongationRule, Person, PersonField,
    Region, Scene, SceneOptions, ZDiscomfortModel, ZModelOptions,
};

fn model(h: f64) -> ZDiscomfortModel {
    ZDiscomfortModel::from_table(
        &build_region_table(h, None).unwrap(),
        &ZModelOptions::default(),
    )
    .unwrap()
}

fn rotate(p: [f64; 2], about: [f64; 2], a: f64) -> [f64; 2] {
    let (dx, dy) = (p[0] - about[0], p[1] - about[1]);
    [
        about[0] + a.cos() * dx - a.sin() * dy,
        about[1] + a.sin() * dx + a.cos() * dy,
    ]
}

fn person() -> impl Strategy<Value = Person> {
    (
        -3.0..3.0f64,
        -3.0..3.0f64,
        -PI..PI,
        1.0..2.4f64,
        0.0..2.0f64,
    )
        .prop_map(|(x, y, t, h, v)| Person::new([x, y], t, h).unwrap().with_speed(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn anchors_strictly_increase(h in 0.05..5.0f64) {
        let t = build_region_table(h, None).unwrap();
        let order = [Region::Ground, Region::Legs, Region::Hips, Region::Torso, Region::Head, Region::Top];
        for w in order.windows(2) {
            prop_assert!(t.get(w[0]).center < t.get(w[1]).center);
        }
    }

    #[test]
    fn anchors_scale_with_height(h in 0.2..3.0f64, a in 0.2..3.0f64) {
        for r in [Region::Legs, Region::Hips, Region::Torso, Region::Head] {
            let scaled = region_anchor_height(r, a * h).unwrap();
            prop_assert!((scaled - a * region_anchor_height(r, h).unwrap()).abs() < 1e-12);
        }
        let top = region_anchor_height(Region::Top, a * h).unwrap();
        prop_assert!((top - (a * h + 0.75)).abs() < 1e-12);
    }

    #[test]
    fn mpp_mapping_decreases(a in 65.0..500.0f64, d in 0.01..100.0f64) {
        prop_assert!(discomfort_from_mpp(a + d, 65.0).unwrap() < discomfort_from_mpp(a, 65.0).unwrap());
    }

    #[test]
    fn height_model_range_and_continuity(h in 1.0..2.5f64, z in 0.0..4.0f64) {
        let m = model(h);
        let f = z_discomfort(&m, z).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((z_discomfort(&m, z + 1e-6).unwrap() - f).abs() < 1e-3);
    }

    #[test]
    fn head_above_hips(h in 1.0..2.5f64) {
        let t = build_region_table(h, None).unwrap();
        let m = model(h);
        prop_assert!(
            z_discomfort(&m, t.get(Region::Head).center).unwrap()
                > z_discomfort(&m, t.get(Region::Hips).center).unwrap()
        );
    }

    #[test]
    fn planar_lateral_symmetry(t in -PI..PI, v in 0.0..2.0f64, d in 0.0..3.0f64, a in 0.0..PI) {
        let p = AgfParams::new([0.3, -0.2], t, v, ElongationRule::Kirby2v).unwrap();
        let at = |b: f64| agf_eval(&p, 0.3 + d * (t + b).cos(), -0.2 + d * (t + b).sin());
        prop_assert!((at(a) - at(-a)).abs() <= 1e-12);
    }

    #[test]
    fn planar_front_dominates_rear(t in -PI..PI, v in 0.0..2.0f64, d in 0.01..3.0f64) {
        let p = AgfParams::new([0.0, 0.0], t, v, ElongationRule::Kirby2v).unwrap();
        prop_assert!(agf_eval(&p, d * t.cos(), d * t.sin()) >= agf_eval(&p, -d * t.cos(), -d * t.sin()));
    }

    #[test]
    fn planar_radial_decay(t in -PI..PI, b in -PI..PI, d in 0.0..2.0f64, dd in 0.01..1.0f64) {
        let p = AgfParams::new([0.0, 0.0], t, 1.0, ElongationRule::Kirby2v).unwrap();
        let at = |r: f64| agf_eval(&p, r * (t + b).cos(), r * (t + b).sin());
        prop_assert!(at(d + dd) < at(d));
    }

    #[test]
    fn planar_rigid_invariance(
        c in prop::array::uniform2(-3.0..3.0f64), t in -PI..PI, v in 0.0..2.0f64,
        q in prop::array::uniform2(-3.0..3.0f64), rot in -PI..PI,
        shift in prop::array::uniform2(-5.0..5.0f64),
    ) {
        let base = agf_eval(&AgfParams::new(c, t, v, ElongationRule::Kirby2v).unwrap(), q[0], q[1]);
        let qr = rotate(q, c, rot);
        let rotated = agf_eval(&AgfParams::new(c, t + rot, v, ElongationRule::Kirby2v).unwrap(), qr[0], qr[1]);
        prop_assert!((rotated - base).abs() <= 1e-9);
        let cs = [c[0] + shift[0], c[1] + shift[1]];
        let moved = agf_eval(&AgfParams::new(cs, t, v, ElongationRule::Kirby2v).unwrap(), q[0] + shift[0], q[1] + shift[1]);
        prop_assert!((moved - base).abs() <= 1e-12);
    }

    #[test]
    fn field_bounds(p in person(), r in (-5.0..5.0f64, -5.0..5.0f64, 0.0..5.0f64)) {
        let f = PersonField::new(p, &SceneOptions::default()).unwrap();
        let r = [r.0, r.1, r.2];
        let s = person_discomfort(&f, r).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
        let a = agf_eval(f.agf(), r[0], r[1]);
        let z = z_discomfort(f.z_model(), r[2]).unwrap();
        let g = (a * z).sqrt();
        prop_assert!(a.min(z) <= g + 1e-15 && g <= a.max(z) + 1e-15);
    }

    #[test]
    fn field_separable(p in person(), xy in prop::array::uniform2(-2.0..2.0f64), z1 in 0.0..3.0f64, z2 in 0.0..3.0f64) {
        let f = PersonField::new(p, &SceneOptions::default()).unwrap();
        let s1 = person_discomfort(&f, [xy[0], xy[1], z1]).unwrap();
        let s2 = person_discomfort(&f, [xy[0], xy[1], z2]).unwrap();
        let f1 = z_discomfort(f.z_model(), z1).unwrap().sqrt();
        let f2 = z_discomfort(f.z_model(), z2).unwrap().sqrt();
        // Unclamped region only.
        if s1 < 1.0 && s2 < 1.0 {
            prop_assert!((s1 * f2 - s2 * f1).abs() <= 1e-12);
        }
    }

    #[test]
    fn field_rigid_invariance(p in person(), q in (-3.0..3.0f64, -3.0..3.0f64, 0.0..3.0f64), rot in -PI..PI, shift in prop::array::uniform2(-5.0..5.0f64)) {
        let base = person_discomfort(&PersonField::new(p, &SceneOptions::default()).unwrap(), [q.0, q.1, q.2]).unwrap();
        let c = p.position;
        let moved = Person::new([c[0] + shift[0], c[1] + shift[1]], p.orientation + rot, p.height).unwrap().with_speed(p.speed).unwrap();
        let qr = rotate([q.0, q.1], c, rot);
        let f = PersonField::new(moved, &SceneOptions::default()).unwrap();
        let s = person_discomfort(&f, [qr[0] + shift[0], qr[1] + shift[1], q.2]).unwrap();
        prop_assert!((s - base).abs() < 1e-9);
    }

    #[test]
    fn adding_a_person_never_lowers(ps in prop::collection::vec(person(), 0..4), extra in person(), r in (-4.0..4.0f64, -4.0..4.0f64, 0.0..4.0f64), sum in any::<bool>()) {
        let options = SceneOptions {
            aggregation: if sum { Aggregation::SumClamp } else { Aggregation::Max },
            ..Default::default()
        };
        let r = [r.0, r.1, r.2];
        let before = scene_discomfort(&Scene::new(ps.clone(), options.clone()).unwrap(), r).unwrap();
        let mut more = ps;
        more.push(extra);
        let after = scene_discomfort(&Scene::new(more, options).unwrap(), r).unwrap();
        prop_assert!(after >= before);
        prop_assert!((0.0..=1.0).contains(&after));
    }
}
