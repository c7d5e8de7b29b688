mod common;

use std::f64::consts::PI;

use common::dijkstra_cost;
use proptest::prelude::*;
use proxfield_core::{
    path_metrics, plan_path, scene_discomfort, Error, GridSpec, Person, PlanRequest, Scene,
    SceneOptions,
};

fn blocking_scene() -> Scene {
    Scene::new(
        vec![Person::new([0.0, 0.0], 0.0, 1.75).unwrap()],
        SceneOptions::default(),
    )
    .unwrap()
}

fn request<'a>(
    scene: &'a Scene,
    grid: GridSpec,
    start: [f64; 3],
    goal: [f64; 3],
    lambda: f64,
    tau: Option<f64>,
) -> PlanRequest<'a> {
    PlanRequest {
        scene,
        grid,
        start,
        goal,
        lambda,
        tau,
    }
}

/// Optimal cost on an obstacle-free 26-connected lattice between nodes `d` apart.
fn octile(d: [f64; 3], res: f64) -> f64 {
    let mut n: Vec<f64> = d.iter().map(|v| (v / res).round().abs()).collect();
    n.sort_by(f64::total_cmp);
    let (a, b, c) = (n[0], n[1], n[2]);
    res * (a * 3f64.sqrt() + (b - a) * 2f64.sqrt() + (c - b))
}

#[test]
fn empty_scene_geometry() {
    let scene = Scene::empty();
    let grid = GridSpec::new([0.0; 3], [2.0, 2.0, 2.0], 0.1).unwrap();
    for (goal, lambda) in [
        ([2.0, 0.0, 0.0], 3.0),
        ([1.5, 1.5, 1.5], 0.0),
        ([1.7, 0.4, 1.1], 10.0),
    ] {
        let path = plan_path(&request(&scene, grid, [0.0; 3], goal, lambda, None)).unwrap();
        let straight = (goal[0].powi(2) + goal[1].powi(2) + goal[2].powi(2)).sqrt();
        assert!((path.metrics.length - octile(goal, 0.1)).abs() < 1e-9);
        assert!(path.metrics.length >= straight - 1e-9);
        if goal[1] == goal[2] && (goal[1] == 0.0 || goal[1] == goal[0]) {
            assert!(path.metrics.length - straight <= 0.1 + 1e-9);
        }
        assert_eq!(path.metrics.integrated_discomfort, 0.0);
    }
}

#[test]
fn lambda_zero_ignores_field() {
    let scene = blocking_scene();
    let grid = GridSpec::new([-2.0, -1.0, 0.0], [2.0, 1.0, 2.6], 0.1).unwrap();
    let a = plan_path(&request(
        &scene,
        grid,
        [-1.5, 0.0, 1.1],
        [1.5, 0.0, 1.1],
        0.0,
        None,
    ))
    .unwrap();
    let b = plan_path(&request(
        &Scene::empty(),
        grid,
        [-1.5, 0.0, 1.1],
        [1.5, 0.0, 1.1],
        0.0,
        None,
    ))
    .unwrap();
    assert_eq!(a.waypoints, b.waypoints);
}

#[test]
fn lambda_sweep_on_blocking_person() {
    let scene = blocking_scene();
    let grid = GridSpec::new([-2.0, -1.5, 0.0], [2.0, 1.5, 2.6], 0.1).unwrap();
    let runs: Vec<_> = [0.0, 5.0, 20.0]
        .iter()
        .map(|&l| {
            plan_path(&request(
                &scene,
                grid,
                [-1.5, 0.0, 1.1],
                [1.5, 0.0, 1.1],
                l,
                None,
            ))
            .unwrap()
        })
        .collect();
    for w in runs.windows(2) {
        assert!(w[1].metrics.integrated_discomfort <= w[0].metrics.integrated_discomfort + 1e-12);
        assert!(w[1].metrics.length >= w[0].metrics.length - 1e-12);
    }
    assert!(runs[2].metrics.max_discomfort < runs[0].metrics.max_discomfort);
    let deviates = runs[2]
        .waypoints
        .iter()
        .any(|w| w[1].abs() > 0.5 || w[2] > 1.75);
    assert!(deviates);
    for p in &runs {
        let m = path_metrics(&p.waypoints, p.resolution, &scene).unwrap();
        assert!((m.length - p.metrics.length).abs() <= 1e-9);
        assert!((m.max_discomfort - p.metrics.max_discomfort).abs() <= 1e-9);
        assert!((m.integrated_discomfort - p.metrics.integrated_discomfort).abs() <= 1e-9);
    }
}

#[test]
fn coarse_blocking_scene_matches_dijkstra() {
    let scene = blocking_scene();
    let grid = GridSpec::new([-1.8, -1.8, 0.0], [1.8, 1.8, 3.6], 0.4).unwrap();
    assert_eq!(grid.dims(), [10, 10, 10]);
    for lambda in [0.0, 5.0, 20.0] {
        let p = plan_path(&request(
            &scene,
            grid,
            [-1.4, 0.2, 1.2],
            [1.4, 0.2, 1.2],
            lambda,
            None,
        ))
        .unwrap();
        let d = dijkstra_cost(
            &scene,
            &grid,
            [-1.4, 0.2, 1.2],
            [1.4, 0.2, 1.2],
            lambda,
            None,
        )
        .unwrap();
        assert!((p.cost - d).abs() <= 1e-12 * d, "{} vs {d}", p.cost);
    }
}

#[test]
fn tau_cap() {
    let scene = blocking_scene();
    let grid = GridSpec::new([-2.0, -1.5, 0.0], [2.0, 1.5, 2.6], 0.1).unwrap();
    let p = plan_path(&request(
        &scene,
        grid,
        [-1.5, 0.0, 1.1],
        [1.5, 0.0, 1.1],
        0.0,
        Some(0.5),
    ))
    .unwrap();
    for w in &p.waypoints {
        assert!(scene_discomfort(&scene, *w).unwrap() <= 0.5 + 1e-12);
    }
    let blocked = plan_path(&request(
        &scene,
        grid,
        [0.0, 0.0, 1.6],
        [1.5, 0.0, 1.1],
        0.0,
        Some(0.5),
    ));
    assert!(matches!(blocked, Err(Error::Infeasible { .. })));
}

#[test]
fn request_errors() {
    let scene = Scene::empty();
    let grid = GridSpec::new([0.0; 3], [1.0; 3], 0.1).unwrap();
    let bad = |s, g, l, t| plan_path(&request(&scene, grid, s, g, l, t)).unwrap_err();
    assert!(matches!(
        bad([0.0; 3], [2.0, 0.0, 0.0], 0.0, None),
        Error::Infeasible { .. }
    ));
    assert!(matches!(
        bad([0.0; 3], [0.0; 3], 0.0, None),
        Error::InvalidArgument { .. }
    ));
    assert!(matches!(
        bad([0.0; 3], [1.0; 3], -1.0, None),
        Error::InvalidArgument { .. }
    ));
    assert!(matches!(
        bad([0.0; 3], [1.0; 3], 0.0, Some(0.0)),
        Error::InvalidArgument { .. }
    ));
    assert!(matches!(
        bad([0.0; 3], [1.0; 3], 0.0, Some(1.5)),
        Error::InvalidArgument { .. }
    ));
}

#[test]
fn metrics_of_single_step() {
    let m = path_metrics(&[[0.0; 3], [0.1, 0.0, 0.0]], 0.1, &Scene::empty()).unwrap();
    assert!((m.length - 0.1).abs() < 1e-15);
    assert_eq!(m.max_discomfort, 0.0);
    assert_eq!(m.integrated_discomfort, 0.0);
    assert!(path_metrics(&[[0.0; 3], [0.2, 0.0, 0.0]], 0.1, &Scene::empty()).is_err());
}

/// Persons as (x, y, θ, h), lattice size, start and goal indices, λ, τ.
type Case = (
    Vec<(f64, f64, f64, f64)>,
    usize,
    [usize; 3],
    [usize; 3],
    f64,
    Option<f64>,
);

fn small_case() -> impl Strategy<Value = Case> {
    (
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -PI..PI, 1.2..2.2f64), 0..3),
        4usize..=15,
        prop::array::uniform3(0usize..15),
        prop::array::uniform3(0usize..15),
        prop_oneof![Just(0.0), 0.0..30.0f64],
        prop_oneof![Just(None), (0.2..1.0f64).prop_map(Some)],
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn astar_matches_dijkstra((people, n, s, g, lambda, tau) in small_case()) {
        let persons = people.iter().map(|&(x, y, t, h)| Person::new([x, y], t, h).unwrap()).collect();
        let scene = Scene::new(persons, SceneOptions::default()).unwrap();
        let res = 2.6 / (n - 1) as f64;
        let grid = GridSpec::new([-1.3, -1.3, 0.0], [1.3, 1.3, 2.6], res).unwrap();
        prop_assert_eq!(grid.dims(), [n, n, n]);
        let node = |i: [usize; 3]| grid.point(i[0] % n, i[1] % n, i[2] % n);
        let (start, goal) = (node(s), node(g));
        prop_assume!(start != goal);
        let oracle = dijkstra_cost(&scene, &grid, start, goal, lambda, tau);
        match plan_path(&PlanRequest { scene: &scene, grid, start, goal, lambda, tau }) {
            Ok(p) => {
                let d = oracle.expect("oracle found no path");
                prop_assert!((p.cost - d).abs() <= 1e-12 * d, "{} vs {}", p.cost, d);
                if let Some(t) = tau {
                    for w in &p.waypoints {
                        prop_assert!(scene_discomfort(&scene, *w).unwrap() <= t + 1e-12);
                    }
                }
            }
            Err(Error::Infeasible { .. }) => prop_assert!(oracle.is_none()),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
