//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 invalid scene.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use proxfield_core::{
    build_region_table, marching_cubes, marching_cubes_capped, mesh_vertex_residuals, plan_path,
    sample_slice, scene_discomfort, z_profile, GridSpec, PlanRequest, Plane, Scene, SliceWindow,
    ZDiscomfortModel, ZModelOptions,
};

use crate::error::{Error, Result};
use crate::export::{grid_vtk, heatmap_pgm, mesh_obj, profile_csv, slice_csv, write_atomic};
use crate::sampling::{sample_grid_parallel, worker_count};
use crate::scene::parse_scene;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SCENE: i32 = 3;

/// Horizontal margin around persons for default isosurface bounds, meters.
const DEFAULT_MARGIN: f64 = 3.0;
/// Headroom above the tallest person for default bounds, meters.
const DEFAULT_HEADROOM: f64 = 1.25;

#[derive(Debug, Parser)]
#[command(
    name = "proxfield",
    version,
    about = "Evaluate, sample and export 3D personal-space discomfort fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlaneArg {
    Xz,
    Yz,
    Xy,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the discomfort at one point.
    Eval {
        #[arg(long)]
        scene: PathBuf,
        /// X,Y,Z in meters.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: [f64; 3],
    },
    /// Write the height profile of a default person as CSV.
    Zprofile {
        #[arg(long)]
        height: f64,
        #[arg(long, default_value_t = 0.0)]
        zmin: f64,
        /// Defaults to height + 1.5 m.
        #[arg(long)]
        zmax: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample an axis-aligned plane to CSV and optionally a PGM heatmap.
    Slice {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, value_enum)]
        plane: PlaneArg,
        /// Plane offset along its normal axis.
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        /// AMIN,AMAX,BMIN,BMAX over the two plane axes.
        #[arg(long, value_parser = parse_bounds2, allow_hyphen_values = true)]
        bounds: [f64; 4],
        #[arg(long)]
        res: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pgm: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        pgm_min: f64,
        #[arg(long, default_value_t = 1.0)]
        pgm_max: f64,
    },
    /// Sample a 3D grid to a VTK structured-points file.
    Grid {
        #[arg(long)]
        scene: PathBuf,
        /// XMIN,XMAX,YMIN,YMAX,ZMIN,ZMAX.
        #[arg(long, value_parser = parse_bounds3, allow_hyphen_values = true)]
        bounds: [f64; 6],
        #[arg(long)]
        res: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract an isosurface to Wavefront OBJ.
    Iso {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        level: f64,
        /// XMIN,XMAX,YMIN,YMAX,ZMIN,ZMAX; defaults to persons ± 3 m, ground to h + 1.25 m.
        #[arg(long, value_parser = parse_bounds3, allow_hyphen_values = true)]
        bounds: Option<[f64; 6]>,
        #[arg(long, default_value_t = 0.05)]
        res: f64,
        #[arg(long)]
        out: PathBuf,
        /// Close the surface where it meets the sampling box.
        #[arg(long)]
        cap: bool,
        #[arg(long)]
        report_residuals: bool,
    },
    /// Plan a discomfort-aware lattice path and write its waypoints as CSV.
    Plan {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        start: [f64; 3],
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        goal: [f64; 3],
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        res: f64,
        /// XMIN,XMAX,YMIN,YMAX,ZMIN,ZMAX; defaults to the scene box grown to hold start and goal.
        #[arg(long, value_parser = parse_bounds3, allow_hyphen_values = true)]
        bounds: Option<[f64; 6]>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a scene file against the schema.
    Validate {
        #[arg(long)]
        scene: PathBuf,
    },
}

fn parse_list<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!(
            "expected {N} comma-separated numbers, got {}",
            parts.len()
        ));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"))?;
        if !o.is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
    }
    Ok(out)
}

fn parse_point(s: &str) -> std::result::Result<[f64; 3], String> {
    parse_list::<3>(s)
}

fn parse_bounds2(s: &str) -> std::result::Result<[f64; 4], String> {
    parse_list::<4>(s)
}

fn parse_bounds3(s: &str) -> std::result::Result<[f64; 6], String> {
    parse_list::<6>(s)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. } | Error::Schema { .. } | Error::Invalid { .. } => EXIT_SCENE,
        Error::Argument(_) => EXIT_USAGE,
        Error::Model(proxfield_core::Error::InvalidArgument { .. }) => EXIT_USAGE,
        Error::Model(proxfield_core::Error::Infeasible { .. }) | Error::Io { .. } => EXIT_RUNTIME,
    }
}

/// Runs one command. `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn load_scene(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scene(&text)
}

fn spec_from(bounds: [f64; 6], res: f64) -> Result<GridSpec> {
    Ok(GridSpec::from_bounds(
        [
            [bounds[0], bounds[1]],
            [bounds[2], bounds[3]],
            [bounds[4], bounds[5]],
        ],
        res,
    )?)
}

fn default_bounds(scene: &Scene) -> Result<[f64; 6]> {
    let b = scene
        .default_bounds(DEFAULT_MARGIN, DEFAULT_HEADROOM)
        .ok_or_else(|| Error::Argument("scene has no persons; pass --bounds".into()))?;
    Ok([b[0][0], b[0][1], b[1][0], b[1][1], b[2][0], b[2][1]])
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<()> {
    let say = |out: &mut dyn Write, line: String| -> Result<()> {
        writeln!(out, "{line}").map_err(|e| Error::io("<stdout>", e))
    };
    match command {
        Command::Eval { scene, point } => {
            let scene = load_scene(&scene)?;
            let s = scene_discomfort(&scene, point)?;
            say(stdout, format!("{s:.9}"))
        }
        Command::Zprofile {
            height,
            zmin,
            zmax,
            step,
            out,
        } => {
            let table = build_region_table(height, None)?;
            let model = ZDiscomfortModel::from_table(&table, &ZModelOptions::default())?;
            let series = z_profile(&model, zmin, zmax.unwrap_or(height + 1.5), step)?;
            write_atomic(&out, &profile_csv(&series)?)?;
            say(
                stdout,
                format!("wrote {} samples to {}", series.len(), out.display()),
            )
        }
        Command::Slice {
            scene,
            plane,
            at,
            bounds,
            res,
            out,
            pgm,
            pgm_min,
            pgm_max,
        } => {
            let scene = load_scene(&scene)?;
            let plane = match plane {
                PlaneArg::Xz => Plane::Xz { y: at },
                PlaneArg::Yz => Plane::Yz { x: at },
                PlaneArg::Xy => Plane::Xy { z: at },
            };
            let window = SliceWindow {
                a: [bounds[0], bounds[1]],
                b: [bounds[2], bounds[3]],
                resolution: res,
            };
            let field = sample_slice(&scene, plane, &window)?;
            let csv = slice_csv(&field)?;
            let raster = pgm
                .as_ref()
                .map(|_| heatmap_pgm(&field, pgm_min, pgm_max))
                .transpose()?;
            write_atomic(&out, &csv)?;
            if let (Some(path), Some(bytes)) = (pgm, raster) {
                write_atomic(&path, &bytes)?;
            }
            let [na, nb] = field.dims();
            say(
                stdout,
                format!("wrote {na}x{nb} slice to {}", out.display()),
            )
        }
        Command::Grid {
            scene,
            bounds,
            res,
            out,
        } => {
            let scene = load_scene(&scene)?;
            let spec = spec_from(bounds, res)?;
            let field = sample_grid_parallel(&scene, &spec, worker_count())?;
            write_atomic(&out, &grid_vtk(&field))?;
            let [nx, ny, nz] = spec.dims();
            say(
                stdout,
                format!("wrote {nx}x{ny}x{nz} grid to {}", out.display()),
            )
        }
        Command::Iso {
            scene,
            level,
            bounds,
            res,
            out,
            cap,
            report_residuals,
        } => {
            let scene = load_scene(&scene)?;
            let bounds = match bounds {
                Some(b) => b,
                None => default_bounds(&scene)?,
            };
            let spec = spec_from(bounds, res)?;
            let field = sample_grid_parallel(&scene, &spec, worker_count())?;
            let mesh = if cap {
                marching_cubes_capped(&field, level)?
            } else {
                marching_cubes(&field, level)?
            };
            write_atomic(&out, &mesh_obj(&mesh))?;
            say(
                stdout,
                format!(
                    "wrote {} vertices, {} triangles to {}",
                    mesh.vertices().len(),
                    mesh.triangles().len(),
                    out.display()
                ),
            )?;
            if report_residuals {
                let r = mesh_vertex_residuals(&mesh, &scene, level);
                say(
                    stdout,
                    format!(
                        "residual max {:.9} mean {:.9} vertices {}",
                        r.max, r.mean_abs, r.count
                    ),
                )?;
            }
            Ok(())
        }
        Command::Plan {
            scene,
            start,
            goal,
            lambda,
            tau,
            res,
            bounds,
            out,
        } => {
            let scene = load_scene(&scene)?;
            let bounds = match bounds {
                Some(b) => b,
                None => {
                    let mut b = default_bounds(&scene)
                        .unwrap_or([start[0], start[0], start[1], start[1], 0.0, start[2]]);
                    for p in [start, goal] {
                        for a in 0..3 {
                            b[2 * a] = b[2 * a].min(p[a]);
                            b[2 * a + 1] = b[2 * a + 1].max(p[a]);
                        }
                    }
                    b
                }
            };
            let request = PlanRequest {
                scene: &scene,
                grid: spec_from(bounds, res)?,
                start,
                goal,
                lambda,
                tau,
            };
            let path = plan_path(&request)?;
            let mut csv = String::from("x,y,z,discomfort\n");
            for w in &path.waypoints {
                let s = scene_discomfort(&scene, *w)?;
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    crate::export::format_sig9(w[0]),
                    crate::export::format_sig9(w[1]),
                    crate::export::format_sig9(w[2]),
                    crate::export::format_sig9(s)
                ));
            }
            write_atomic(&out, csv.as_bytes())?;
            let m = path.metrics;
            say(
                stdout,
                format!(
                    "waypoints {} length {:.9} max_discomfort {:.9} integrated_discomfort {:.9} cost {:.9}",
                    path.waypoints.len(),
                    m.length,
                    m.max_discomfort,
                    m.integrated_discomfort,
                    path.cost
                ),
            )
        }
        Command::Validate { scene } => {
            let scene = load_scene(&scene)?;
            say(stdout, format!("ok: {} persons", scene.fields().len()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_parsing() {
        assert_eq!(parse_point("1,-2.5, 3").unwrap(), [1.0, -2.5, 3.0]);
        assert!(parse_point("1,2").is_err());
        assert!(parse_point("1,x,3").is_err());
        assert!(parse_bounds3("-3,3,-3,3,0,3").is_ok());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
