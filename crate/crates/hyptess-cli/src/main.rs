//! `hyptess`: reproduce the published tables and constants, run the
//! verification pipelines, and tessellate point sets and surfaces.
//!
//! Exit status is 0 when every assertion passes, 1 when one fails and 2 on
//! invalid input (including arguments the computation cannot accept).

mod report;

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hyptess::admissible::{admissible_interval, bound_report, RootedTree};
use hyptess::cyclic;
use hyptess::hypgeo::{dist, HPoint};
use hyptess::reference::{self, Check, Comparison};
use hyptess::surfaces::{self, build_surface, covering_radius_geometric, injectivity_radius, Model};
use hyptess::tessellation::{
    cell_defect, centered_dual, delaunay, empty_circumdisk_violation, half_min_distance, voronoi, ComplexReport,
    PointSet,
};
use hyptess::svg::render_complex;

use report::{count_check, digest, Cell, RunReport};

/// Default tolerance for published table cells.
const TABLE_TOL: f64 = 2e-5;
/// Default tolerance for identities.
const IDENTITY_TOL: f64 = 1e-9;
/// Area budget left outside an embedded disk of radius `r₁`.
const AREA_BUDGET: f64 = 1.07;
/// SVG canvas size in pixels.
const SVG_SIZE: f64 = 800.0;

#[derive(Parser)]
#[command(name = "hyptess", version, about = "Hyperbolic Delaunay tessellations, cyclic-polygon defects and surface bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the full report as JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print the report table as CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Override the assertion tolerance (default 2e-5 for table cells,
    /// 1e-9 for identities).
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Named constants of the extremal surfaces, with their defining checks.
    Constants,
    /// Radius-r₁ defects of regular polygons with side d₁.
    Table1,
    /// Defect bounds for the trees of five-edge cells.
    Table2,
    /// Numerical gates and geometric checks for the genus-2 extremal bound.
    VerifyMain,
    /// Sampled check of sinh J ≤ √2 sinh r over the one-vertex length space.
    VerifyInjToCov {
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Voronoi, Delaunay and centered-dual complexes of a JSON point set.
    Tessellate {
        /// JSON point set `{"model": "hyperboloid", "points": [[x0, x1, x2], …]}`.
        points: PathBuf,
        /// Clip radius about the origin (default: farthest site + 1).
        #[arg(long)]
        clip: Option<f64>,
        /// Write the complex as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Draw the complexes in the Poincaré disk as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Build and tessellate one of the genus-2 model surfaces.
    Surface {
        model: ModelArg,
        /// Deformation parameter for the `t` model.
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        /// Write the octagon presentation as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write the lifted sites as a JSON point set.
        #[arg(long)]
        sites: Option<PathBuf>,
        /// Draw the complexes in the Poincaré disk as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Defect lower bounds for a rooted tree given as JSON.
    TreeBound {
        /// Rooted tree and frontier lengths as JSON.
        tree: PathBuf,
        /// Disk radius `R` at which the bounds are evaluated.
        radius: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Alpha,
    Beta,
    T,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&report).map(|s| s + "\n").map_err(anyhow::Error::from)
            } else if cli.csv {
                report.to_csv()
            } else {
                Ok(report.to_text())
            };
            match text {
                Ok(t) => print!("{t}"),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(2);
                }
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<RunReport> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t >= 0.0) {
            bail!("--tol must be a non-negative number, got {t}");
        }
    }
    let table_tol = cli.tol.unwrap_or(TABLE_TOL);
    let id_tol = cli.tol.unwrap_or(IDENTITY_TOL);
    let report = match &cli.command {
        Command::Constants => cmd_constants(id_tol)?,
        Command::Table1 => cmd_table1(table_tol)?,
        Command::Table2 => cmd_table2(table_tol)?,
        Command::VerifyMain => cmd_verify_main(table_tol, id_tol)?,
        Command::VerifyInjToCov { grid, samples, seed } => cmd_verify_inj_to_cov(*grid, *samples, *seed, id_tol)?,
        Command::Tessellate { points, clip, output, svg } => {
            cmd_tessellate(points, *clip, output.as_deref(), svg.as_deref(), id_tol)?
        }
        Command::Surface { model, t, output, sites, svg } => {
            let model = match (model, t) {
                (ModelArg::Alpha, None) => Model::FAlpha,
                (ModelArg::Beta, None) => Model::FBeta,
                (ModelArg::T, Some(t)) => Model::FT(*t),
                (ModelArg::T, None) => bail!("the t model needs --t"),
                (_, Some(_)) => bail!("--t only applies to the t model"),
            };
            cmd_surface(model, output.as_deref(), sites.as_deref(), svg.as_deref())?
        }
        Command::TreeBound { tree, radius } => cmd_tree_bound(tree, *radius)?,
    };
    Ok(report.finish())
}

fn read_input(path: &Path, report: &mut RunReport) -> Result<String> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    report.input(&path.display().to_string(), digest(text.as_bytes()));
    Ok(text)
}

fn write_output(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn check_rows(report: &mut RunReport) {
    let rows: Vec<Vec<Cell>> = report
        .assertions
        .iter()
        .map(|c| vec![c.name.clone().into(), c.computed.into(), c.published.into(), c.pass.into()])
        .collect();
    for r in rows {
        report.row(r);
    }
}

fn cmd_constants(id_tol: f64) -> Result<RunReport> {
    let c = surfaces::constants();
    let mut rep = RunReport::new(&["constant", "value"]);
    for (name, v) in [
        ("cosh d_alpha", c.cosh_d_alpha),
        ("cosh r_alpha", c.cosh_r_alpha),
        ("d_alpha", c.d_alpha),
        ("r_alpha", c.r_alpha),
        ("cosh d_beta", c.cosh_d_beta),
        ("cosh r_beta", c.cosh_r_beta),
        ("d_beta", c.d_beta),
        ("r_beta", c.r_beta),
        ("b_beta", c.b_beta),
        ("r_1", reference::r1()),
        ("d_1", reference::d1()),
    ] {
        rep.row(vec![name.into(), v.into()]);
    }
    let x = c.cosh_d_beta;
    let residual = ((x - 14.0) * x - 15.0) * x - 4.0;
    rep.check(Check::new("cubic residual at cosh d_beta (relative)", residual / x.powi(3), 0.0, Comparison::Within, id_tol));
    rep.check(Check::new("cosh d_beta lower", x, 15.0166, Comparison::Above, 0.0));
    rep.check(Check::new("cosh d_beta upper", x, 15.0167, Comparison::Below, 0.0));
    rep.check(Check::new("cosh r_beta lower", c.cosh_r_beta, 2.8298, Comparison::Above, 0.0));
    rep.check(Check::new("cosh r_beta upper", c.cosh_r_beta, 2.8299, Comparison::Below, 0.0));
    rep.check(Check::new("cosh r_alpha to 4 decimals", c.cosh_r_alpha, 2.8794, Comparison::Within, 5e-5));
    rep.check(Check::new("cosh d_alpha to 4 decimals", c.cosh_d_alpha, 15.5817, Comparison::Within, 5e-5));
    rep.check(Check::new(
        "cosh r_alpha = 1/(2 sin(pi/18))",
        c.cosh_r_alpha,
        1.0 / (2.0 * (PI / 18.0).sin()),
        Comparison::Within,
        id_tol,
    ));
    rep.checks(reference::defining_identities(id_tol)?);
    Ok(rep)
}

fn cmd_table1(tol: f64) -> Result<RunReport> {
    let mut rep = RunReport::new(&["n", "computed", "published", "window upper", "pass"]);
    let checks = reference::regular_polygon_defects(tol)?;
    for ((n, _), c) in reference::REGULAR_POLYGON_DEFECTS.iter().zip(&checks) {
        rep.row(vec![(*n).into(), c.computed.into(), c.published.into(), (c.published + tol).into(), c.pass.into()]);
    }
    rep.checks(checks);
    Ok(rep)
}

fn cmd_table2(tol: f64) -> Result<RunReport> {
    let mut rep = RunReport::new(&["tree", "Basic", "Case 1", "Case 2A", "Case 2B", "Case 3", "best"]);
    for row in reference::tree_bound_table(tol)? {
        let r = &row.report;
        rep.row(vec![
            row.name.clone().into(),
            r.basic.into(),
            Cell::opt(r.case1),
            Cell::opt(r.case2a),
            Cell::opt(r.case2b),
            Cell::opt(r.case3),
            r.best.into(),
        ]);
        rep.checks(row.checks);
    }
    Ok(rep)
}

fn cmd_verify_main(table_tol: f64, id_tol: f64) -> Result<RunReport> {
    let mut rep = RunReport::new(&["check", "computed", "reference", "pass"]);
    rep.checks(reference::area_gates());
    for row in reference::tree_bound_table(table_tol)? {
        rep.check(Check::new(format!("{} best bound exceeds budget", row.name), row.report.best, AREA_BUDGET, Comparison::Above, 0.0));
        rep.checks(row.checks);
    }
    let p6 = cyclic::defect_of(&[reference::d1(); 6], reference::r1())?;
    rep.check(Check::new("centered six-edge cell defect exceeds budget", p6, AREA_BUDGET, Comparison::Above, 0.0));
    rep.checks(reference::quoted_bounds(table_tol)?);
    rep.checks(reference::defining_identities(id_tol)?);

    let alpha = build_surface(Model::FAlpha)?.tessellate()?;
    let tri = |t: &surfaces::SurfaceTessellation, n: usize| t.faces.iter().filter(|&&f| t.delaunay.faces[f].sides.len() == n).count();
    rep.check(count_check("F_alpha Delaunay faces", alpha.faces.len(), 6));
    rep.check(count_check("F_alpha triangles", tri(&alpha, 3), 6));
    let beta = build_surface(Model::FBeta)?.tessellate()?;
    rep.check(count_check("F_beta triangles", tri(&beta, 3), 4));
    rep.check(count_check("F_beta quadrilaterals", tri(&beta, 4), 1));
    rep.check(count_check("F_beta Delaunay faces", beta.faces.len(), 5));
    let ft = build_surface(Model::FT(-1e-3))?.tessellate()?;
    rep.check(count_check("F_t (t = -0.001) non-centered edge classes", ft.noncentered_edges.len(), 1));
    check_rows(&mut rep);
    Ok(rep)
}

fn cmd_verify_inj_to_cov(grid: usize, samples: usize, seed: u64, id_tol: f64) -> Result<RunReport> {
    let mut rep = RunReport::new(&["r", "accepted", "attempts", "max sampled J", "max ratio", "extremal J", "extremal ratio"]);
    rep.input("grid", grid.to_string());
    rep.input("samples", samples.to_string());
    rep.input("seed", seed.to_string());
    let out = surfaces::verify_inj_to_cov(grid, samples, seed)?;
    for g in &out.grid {
        rep.row(vec![
            g.r.into(),
            g.accepted.into(),
            g.attempts.into(),
            g.max_sampled_j.into(),
            g.max_ratio.into(),
            g.extremal_j.into(),
            g.extremal_ratio.into(),
        ]);
    }
    let first = out.grid.first().context("empty grid")?;
    rep.check(Check::new("ratio at the extremal point, r = r_beta", first.extremal_ratio, 1.0, Comparison::Within, id_tol));
    rep.check(Check::new("largest ratio", out.max_ratio, 1.0 + id_tol, Comparison::Below, 0.0));
    let worst_closed_form =
        out.grid.iter().map(|g| (g.extremal_j - g.extremal_j_numeric).abs()).fold(0.0, f64::max);
    rep.check(Check::new("extremal covering radius, closed form vs triangles", worst_closed_form, 0.0, Comparison::Within, id_tol));
    let overshoot = out.grid.iter().map(|g| g.max_sampled_j - g.extremal_j).fold(f64::NEG_INFINITY, f64::max);
    rep.check(Check::new("sampled covering radius never exceeds the extremal one", overshoot, id_tol, Comparison::Below, 0.0));
    Ok(rep)
}

fn cmd_tessellate(points: &Path, clip: Option<f64>, output: Option<&Path>, svg: Option<&Path>, id_tol: f64) -> Result<RunReport> {
    let mut rep = RunReport::new(&["quantity", "value"]);
    let text = read_input(points, &mut rep)?;
    let sites = PointSet::from_json(&text).with_context(|| format!("parsing {}", points.display()))?;
    let origin = HPoint::origin();
    let far = sites.iter().map(|s| dist(s, &origin)).fold(0.0, f64::max);
    let clip = clip.unwrap_or(far + 1.0);
    if !(clip.is_finite() && clip > 0.0) {
        bail!("clip radius must be positive, got {clip}");
    }
    rep.input("clip", clip.to_string());
    let vor = voronoi(&sites, clip, &origin)?;
    let del = delaunay(&vor)?;
    let dual = centered_dual(&del)?;

    let faces_with = |pred: &dyn Fn(usize) -> bool| del.faces.iter().filter(|f| pred(f.sides.len())).count();
    let rmin = half_min_distance(&sites);
    let interior_vertices = vor.vertices.iter().filter(|v| v.interior).count();
    for (name, value) in [
        ("sites", Cell::from(sites.len())),
        ("Voronoi vertices", vor.vertices.len().into()),
        ("interior Voronoi vertices", interior_vertices.into()),
        ("Voronoi edges", vor.edges.len().into()),
        ("Delaunay edges", del.edges.len().into()),
        ("non-centered edges", del.edges.iter().filter(|e| !e.centered).count().into()),
        ("Delaunay faces", del.faces.len().into()),
        ("triangles", faces_with(&|n| n == 3).into()),
        ("quadrilaterals", faces_with(&|n| n == 4).into()),
        ("faces with five or more sides", faces_with(&|n| n >= 5).into()),
        ("dual cells", dual.cells.len().into()),
        ("cells with non-centered trees", dual.forest.len().into()),
        ("unresolved vertices (incl. clip corners)", dual.unresolved_vertices.into()),
        ("half minimum distance", rmin.into()),
    ] {
        rep.row(vec![name.into(), value]);
    }

    let violation = empty_circumdisk_violation(&del).max(0.0);
    rep.check(Check::new("empty circumdisk violation", violation, 0.0, Comparison::Within, id_tol.max(1e-9)));
    let spread = del
        .faces
        .iter()
        .map(|f| {
            let v = &vor.vertices[f.voronoi_vertex];
            f.sites.iter().map(|&s| (dist(&v.position, &sites[s]) - v.radius).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    rep.check(Check::new("vertices equidistant from their sites", spread, 0.0, Comparison::Within, 1e-9));
    let members: usize = dual.cells.iter().map(|c| c.members.len()).sum();
    rep.check(count_check("Voronoi vertices split into cell members and unresolved", members + dual.unresolved_vertices, vor.vertices.len()));
    let faceless = dual.cells.iter().flat_map(|c| &c.members).filter(|&&m| del.face_of_vertex[m].is_none()).count();
    rep.check(count_check("cell members without a Delaunay face", faceless, 0));
    let min_cell_defect = dual
        .cells
        .iter()
        .map(|c| cell_defect(c, &del, rmin))
        .collect::<hyptess::Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if min_cell_defect.is_finite() {
        rep.check(Check::new("cell defects at half the minimum distance", min_cell_defect, -id_tol.max(1e-9), Comparison::Above, 0.0));
    }

    if let Some(path) = output {
        let json = serde_json::to_string_pretty(&ComplexReport::new(&del, &dual))?;
        let back: ComplexReport = serde_json::from_str(&json).context("complex JSON failed to round-trip")?;
        if back.sites.len() != sites.len() || back.faces.len() != del.faces.len() {
            bail!("complex JSON failed validation");
        }
        write_output(path, &json)?;
    }
    if let Some(path) = svg {
        write_output(path, &render_complex(&del, Some(&dual), clip, SVG_SIZE))?;
    }
    Ok(rep)
}

fn cmd_surface(model: Model, output: Option<&Path>, sites: Option<&Path>, svg: Option<&Path>) -> Result<RunReport> {
    let mut rep = RunReport::new(&["quantity", "value"]);
    rep.input("model", format!("{model:?}"));
    let s = build_surface(model)?;
    let t = s.tessellate()?;
    let d = &t.delaunay;
    let sided = |n: usize| t.faces.iter().filter(|&&f| d.faces[f].sides.len() == n).count();
    let inj = injectivity_radius(&t.lift);
    let area: f64 = t
        .faces
        .iter()
        .map(|&f| cyclic::defect_of(&d.faces[f].sides, 0.0))
        .collect::<hyptess::Result<Vec<_>>>()?
        .iter()
        .sum();
    for (name, value) in [
        ("octagon area", Cell::from(s.area)),
        ("octagon vertex angle sum", s.vertex_angle_sum.into()),
        ("lifted sites", t.lift.sites.len().into()),
        ("injectivity radius", inj.into()),
        ("covering radius", covering_radius_geometric(&t).into()),
        ("Delaunay faces", t.faces.len().into()),
        ("triangles", sided(3).into()),
        ("quadrilaterals", sided(4).into()),
        ("dual cells", t.cells.len().into()),
        ("non-centered edges", t.noncentered_edges.len().into()),
        ("total face area", area.into()),
    ] {
        rep.row(vec![name.into(), value]);
    }
    rep.check(Check::new("face areas sum to 4 pi", area, 4.0 * PI, Comparison::Within, 1e-7));
    rep.check(Check::new("octagon angle sum is 2 pi", s.vertex_angle_sum, 2.0 * PI, Comparison::Within, 1e-7));
    let c = surfaces::constants();
    match model {
        Model::FAlpha => {
            rep.check(count_check("triangles", sided(3), 6));
            rep.check(Check::new("injectivity radius = r_alpha", inj, c.r_alpha, Comparison::Within, 1e-8));
        }
        Model::FBeta => {
            rep.check(count_check("triangles", sided(3), 4));
            rep.check(count_check("quadrilaterals", sided(4), 1));
            rep.check(Check::new("injectivity radius = r_beta", inj, c.r_beta, Comparison::Within, 1e-8));
        }
        Model::FT(t_param) if t_param < 0.0 => {
            rep.check(count_check("non-centered edge classes", t.noncentered_edges.len(), 1));
        }
        Model::FT(_) => {}
    }
    if let Some(path) = output {
        write_output(path, &s.to_json()?)?;
    }
    if let Some(path) = sites {
        write_output(path, &PointSet::to_json(&t.lift.sites)?)?;
    }
    if let Some(path) = svg {
        write_output(path, &render_complex(d, Some(&t.dual), t.lift.ball_radius, SVG_SIZE))?;
    }
    Ok(rep)
}

fn cmd_tree_bound(path: &Path, radius: f64) -> Result<RunReport> {
    let mut rep = RunReport::new(&["quantity", "value"]);
    let text = read_input(path, &mut rep)?;
    rep.input("radius", radius.to_string());
    let (tree, bounds) = RootedTree::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let r = bound_report(&tree, &bounds, radius)?;
    for (name, value) in [
        ("vertices", Cell::from(tree.len())),
        ("frontier edges", tree.frontier.len().into()),
        ("Basic", r.basic.into()),
        ("Case 1", Cell::opt(r.case1)),
        ("Case 2A", Cell::opt(r.case2a)),
        ("Case 2B", Cell::opt(r.case2b)),
        ("Case 3", Cell::opt(r.case3)),
        ("best", r.best.into()),
        ("admissible space possibly empty", r.possibly_empty.into()),
    ] {
        rep.row(vec![name.into(), value]);
    }
    for (k, (b, h)) in r.intermediates.b_e.iter().zip(&r.intermediates.h_e).enumerate() {
        rep.row(vec![format!("edge {k}: b_e").into(), (*b).into()]);
        rep.row(vec![format!("edge {k}: h_e").into(), (*h).into()]);
    }
    if tree.edges.len() == 1 {
        let iv = admissible_interval(&tree, &bounds)?;
        rep.row(vec!["admissible interval lower".into(), iv.lower.into()]);
        rep.row(vec!["admissible interval upper".into(), iv.upper.into()]);
        rep.row(vec!["admissible interval empty".into(), iv.empty.into()]);
    }
    rep.check(Check::new("best bound is finite", f64::from(u8::from(r.best.is_finite())), 1.0, Comparison::Within, 0.0));
    rep.check(Check {
        name: "best bound is at least the basic bound".into(),
        computed: r.best,
        published: r.basic,
        comparison: Comparison::Above,
        tol: 0.0,
        pass: r.best >= r.basic,
    });
    Ok(rep)
}
