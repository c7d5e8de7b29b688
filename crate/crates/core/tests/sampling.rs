use proxfield_core::{
    marching_cubes, marching_cubes_capped, mesh_vertex_residuals, sample_grid, sample_slice,
    scene_discomfort, Field3D, GridSpec, Person, Plane, Scene, SceneOptions, SliceWindow,
};

fn scene() -> Scene {
    Scene::new(
        vec![Person::new([0.2, -0.1], 0.7, 1.75).unwrap()],
        SceneOptions::default(),
    )
    .unwrap()
}

#[test]
fn grid_is_x_fastest() {
    let s = scene();
    let spec = GridSpec::new([-1.0, -1.0, 0.0], [1.0, 0.5, 2.0], 0.25).unwrap();
    let g = sample_grid(&s, &spec).unwrap();
    assert_eq!(spec.dims(), [9, 7, 9]);
    assert_eq!(g.values().len(), 9 * 7 * 9);
    let [nx, ny, nz] = spec.dims();
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let n = i + nx * (j + ny * k);
                assert_eq!(
                    g.values()[n],
                    scene_discomfort(&s, spec.point(i, j, k)).unwrap()
                );
            }
        }
    }
    assert!(GridSpec::new([0.0; 3], [1.0, 1.0, 1.0], 0.0).is_err());
    assert!(sample_grid(&s, &GridSpec::new([0.0, 0.0, -1.0], [1.0; 3], 0.5).unwrap()).is_err());
}

#[test]
fn slices_agree_with_grid() {
    let s = scene();
    let spec = GridSpec::new([-1.0, -1.0, 0.0], [1.0, 1.0, 2.0], 0.1).unwrap();
    let g = sample_grid(&s, &spec).unwrap();
    let window = SliceWindow {
        a: [-1.0, 1.0],
        b: [0.0, 2.0],
        resolution: 0.1,
    };
    let slice = sample_slice(
        &s,
        Plane::Xz {
            y: spec.point(0, 10, 0)[1],
        },
        &window,
    )
    .unwrap();
    assert_eq!(slice.dims(), [21, 21]);
    for ib in 0..21 {
        for ia in 0..21 {
            assert!((slice.get(ia, ib) - g.get(ia, 10, ib)).abs() < 1e-12);
        }
    }
    let below = SliceWindow {
        a: [-1.0, 1.0],
        b: [-0.5, 1.0],
        resolution: 0.1,
    };
    assert!(sample_slice(&s, Plane::Yz { x: 0.0 }, &below).is_err());
}

#[test]
fn person_isosurface() {
    let s = scene();
    let spec = GridSpec::new([-2.0, -2.0, 0.0], [2.5, 2.0, 3.0], 0.1).unwrap();
    let g = sample_grid(&s, &spec).unwrap();
    let open = marching_cubes(&g, 0.5).unwrap();
    let closed = marching_cubes_capped(&g, 0.5).unwrap();
    assert!(!open.is_empty());
    assert!(closed.is_watertight());
    assert!(closed.is_consistently_oriented());
    assert!(closed.signed_volume() > 0.0);
    let r = mesh_vertex_residuals(&closed, &s, 0.5);
    assert_eq!(r.count, closed.surface_vertices().len());
    assert!(r.max < 0.05, "{}", r.max);
    assert!(marching_cubes(&g, 1.5).is_err());
    let zero = Field3D::from_fn(spec, |_| 0.0).unwrap();
    assert!(marching_cubes_capped(&zero, 0.5).unwrap().is_empty());
}
