use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use inclab::applications::{
    bipartite_distinct_distances, distinct_distances, repeated_distances, similar_triangles_via_incidences,
    TriangleShape,
};
use inclab::bounds::{eval_bound, fit_exponent, verify_instance_with, BoundFormula, FormulaName};
use inclab::constructions::{
    gen_distance_spheres, gen_elekes_grid, gen_packing_copies, gen_random_on_variety, gen_unit_spheres,
    lift_planar_instance, Instance, Variety,
};
use inclab::incidence::{count_incidences, decompose, j_value};
use inclab::io::{
    curves_to_json, format_scalar, objects_from_json, parse_params, parse_scalar, partition_to_json,
    points_from_csv, points_to_csv, split_objects, surfaces_from_json, surfaces_to_json, ObjectRecord,
};
use inclab::partition::{
    build_partition_with, cell_census, crossing_census, max_open_population, BuildOptions, DEFAULT_BUDGET,
};
use inclab::{Curve, Error, ExactField, Point3, Result, Scalar};
use serde_json::{json, Value};

const DEFAULT_THRESHOLD: f64 = 10.0;

#[derive(Parser, Debug)]
#[command(name = "inclab", version, about = "Exact incidence experiments in R^3")]
struct Cli {
    /// Output file; stdout when absent. Written atomically.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Writes an instance into a directory (`points.csv`, `curves.json`, `surfaces.json`).
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Exact incidence count.
    Count {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        objects: PathBuf,
    },
    /// Builds a partitioning polynomial.
    Partition {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        rounds: usize,
        #[arg(long, default_value = "0")]
        delta: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the exact per-cell census.
        #[arg(long)]
        census: bool,
        /// Count cells crossed by this many seeded random lines.
        #[arg(long)]
        cross_lines: Option<usize>,
        /// Also write the partition record here.
        #[arg(long)]
        save: Option<PathBuf>,
        /// Candidate polynomials tried per round before giving up.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Complete bipartite decomposition for planes and spheres.
    Decompose {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        surfaces: PathBuf,
    },
    /// Similar-triangle census through circle incidences.
    Triangles {
        #[arg(long)]
        points: PathBuf,
        /// Squared side ratios `rho1,rho2`.
        #[arg(long)]
        shape: String,
    },
    /// Distance counts.
    Distances {
        #[arg(long, value_enum)]
        mode: DistanceMode,
        #[arg(long)]
        points: PathBuf,
        /// Second point set for `bipartite`.
        #[arg(long)]
        points2: Option<PathBuf>,
        /// Squared distance for `repeated`.
        #[arg(long)]
        d2: Option<String>,
    },
    /// Evaluates a bound and compares it with an observed value.
    Verify {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        observed: u64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Scaling report over a `scale,observed` CSV series.
    Report {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        fit: bool,
        /// Bound evaluated per row, with the scale substituted for `--scale-param`.
        #[arg(long)]
        formula: Option<String>,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value = "m")]
        scale_param: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DistanceMode {
    Distinct,
    Bipartite,
    Repeated,
}

#[derive(Args, Debug)]
struct OutDir {
    /// Directory receiving the instance files.
    #[arg(long)]
    dir: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// The extremal point-line grid.
    Elekes {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        dir: OutDir,
    },
    /// Lift of the Elekes grid to the paraboloid `z = x^2 + y^2`.
    Paraboloid {
        #[arg(long)]
        k: u32,
        /// Witness coefficient triples `c0,c1,c2;c0,c1,c2`.
        #[arg(long, default_value = "1,0,0")]
        witnesses: String,
        #[command(flatten)]
        dir: OutDir,
    },
    /// Disjoint translated copies of a template instance.
    Packing {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        objects: PathBuf,
        #[arg(long)]
        copies: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        dir: OutDir,
    },
    /// Rational points sampled on a sphere, plane or the paraboloid.
    Variety {
        #[arg(long, value_enum)]
        kind: VarietyKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0,0,0")]
        center: String,
        #[arg(long, default_value = "1")]
        radius2: String,
        /// Plane coefficients `a,b,c,d`.
        #[arg(long, default_value = "0,0,1,0")]
        plane: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        dir: OutDir,
    },
    /// Spheres about `p2` with every distance realized between the sets.
    DistanceSpheres {
        #[arg(long)]
        p1: PathBuf,
        #[arg(long)]
        p2: PathBuf,
        #[command(flatten)]
        dir: OutDir,
    },
    /// One sphere of squared radius `radius2` about every point.
    UnitSpheres {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value = "1")]
        radius2: String,
        #[command(flatten)]
        dir: OutDir,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VarietyKind {
    Sphere,
    Plane,
    Paraboloid,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Error::Parse(e.to_string())),
    };
    if let Err(e) = init_threads() {
        return fail(&e);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    let rec = json!({ "error": e.kind(), "message": e.to_string() });
    eprintln!("{rec}");
    ExitCode::from(if e.is_search_failure() { 2 } else { 1 })
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("INCLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::OutOfRange(format!("INCLAB_THREADS = {v:?} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Io(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_points(path: &Path) -> Result<Vec<Point3>> {
    points_from_csv(&read(path)?)
}

/// Writes through a temp file in the target directory, then renames.
fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn emit(cli: &Cli, content: &str) -> Result<()> {
    match &cli.out {
        Some(p) => write_atomic(p, content),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Renders a flat record as JSON or a two-line CSV.
fn emit_record<K: AsRef<str>>(cli: &Cli, rec: &BTreeMap<K, Value>) -> Result<()> {
    match cli.format {
        Format::Json => {
            let m: serde_json::Map<String, Value> =
                rec.iter().map(|(k, v)| (k.as_ref().to_string(), v.clone())).collect();
            emit(cli, &pretty(&Value::Object(m)))
        }
        Format::Csv => {
            let header: Vec<&str> = rec.keys().map(AsRef::as_ref).collect();
            let row: Vec<String> = rec
                .values()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            emit(cli, &format!("{}\n{}\n", header.join(","), row.join(",")))
        }
    }
}

fn scalar_list(s: &str, len: usize, what: &str) -> Result<Vec<Scalar>> {
    let v = s.split(',').map(|p| parse_scalar(p.trim())).collect::<Result<Vec<_>>>()?;
    if v.len() != len {
        return Err(Error::Parse(format!("{what} needs {len} comma-separated values, got {s:?}")));
    }
    Ok(v)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate { family } => generate(cli, family),
        Command::Count { points, objects } => {
            let pts = read_points(points)?;
            let (curves, surfaces) = split_objects(objects_from_json(&read(objects)?)?);
            let n = count_incidences(&pts, &curves).0 + count_incidences(&pts, &surfaces).0;
            emit_record(cli, &BTreeMap::from([("incidences", json!(n))]))
        }
        Command::Partition { points, rounds, delta, seed, census, cross_lines, save, budget } => {
            let opts = BuildOptions { budget: *budget };
            partition(cli, points, *rounds, delta, *seed, *census, *cross_lines, save.as_deref(), opts)
        }
        Command::Decompose { points, surfaces } => {
            let pts = read_points(points)?;
            let surfs = surfaces_from_json(&read(surfaces)?)?;
            let d = decompose(&pts, &surfs)?;
            let j = j_value(&d);
            let components: Vec<Value> = d
                .components
                .iter()
                .map(|c| json!({ "gamma": ObjectRecord::from(&c.gamma), "points": c.p_ids, "surfaces": c.s_ids }))
                .collect();
            let residual: Vec<[usize; 2]> = d.residual_edges.iter().map(|&(p, s)| [p, s]).collect();
            emit(
                cli,
                &pretty(&json!({
                    "components": components,
                    "residual": residual,
                    "J": j.j,
                    "sum_p": j.sum_p,
                    "sum_s": j.sum_s,
                    "g0": j.g0,
                    "max_pair_multiplicity": d.max_pair_multiplicity,
                    "max_components_per_surface": d.max_components_per_surface,
                })),
            )
        }
        Command::Triangles { points, shape } => {
            let pts = read_points(points)?;
            let r = scalar_list(shape, 2, "--shape")?;
            let shape = TriangleShape::new(r[0].clone(), r[1].clone())?;
            let census = similar_triangles_via_incidences(&pts, &shape)?;
            let v = serde_json::to_value(&census).map_err(|e| Error::Io(e.to_string()))?;
            let Value::Object(m) = v else { unreachable!("census serializes as an object") };
            let rec: BTreeMap<String, Value> = m.into_iter().collect();
            emit_record(cli, &rec)
        }
        Command::Distances { mode, points, points2, d2 } => {
            let pts = read_points(points)?;
            let (key, n) = match mode {
                DistanceMode::Distinct => ("distinct", distinct_distances(&pts)?),
                DistanceMode::Bipartite => {
                    let p2 = points2
                        .as_deref()
                        .ok_or_else(|| Error::MissingParam("points2".into()))?;
                    ("bipartite_distinct", bipartite_distinct_distances(&pts, &read_points(p2)?)?)
                }
                DistanceMode::Repeated => {
                    let d2 = d2.as_deref().ok_or_else(|| Error::MissingParam("d2".into()))?;
                    ("repeated", repeated_distances(&pts, &parse_scalar(d2)?)?)
                }
            };
            emit_record(cli, &BTreeMap::from([(key, json!(n)), ("points", json!(pts.len()))]))
        }
        Command::Verify { formula, params, observed, threshold } => {
            let f = formula_from(formula, params)?;
            let rep = verify_instance_with(*observed, &f, *threshold)?;
            let mut rec = BTreeMap::from([
                ("formula", json!(rep.formula.as_str())),
                ("observed", json!(rep.observed)),
                ("bound", json!(rep.bound)),
                ("ratio", json!(rep.ratio)),
                ("flag", json!(rep.flag)),
            ]);
            if cli.format == Format::Json {
                rec.insert("params", json!(rep.params));
            }
            emit_record(cli, &rec)
        }
        Command::Report { series, fit, formula, params, scale_param } => {
            report(cli, series, *fit, formula.as_deref(), params, scale_param)
        }
    }
}

fn formula_from(name: &str, params: &str) -> Result<BoundFormula> {
    let name: FormulaName = name.parse()?;
    Ok(BoundFormula { name, params: parse_params(params)? })
}

fn generate(cli: &Cli, family: &Family) -> Result<()> {
    let (inst, dir, extra) = match family {
        Family::Elekes { k, dir } => (gen_elekes_grid(*k)?, dir, None),
        Family::Paraboloid { k, witnesses, dir } => {
            let ws = witnesses
                .split(';')
                .filter(|w| !w.trim().is_empty())
                .map(|w| {
                    let v = scalar_list(w, 3, "witness")?;
                    Ok([v[0].clone(), v[1].clone(), v[2].clone()])
                })
                .collect::<Result<Vec<_>>>()?;
            (lift_planar_instance(&gen_elekes_grid(*k)?, &ws)?, dir, None)
        }
        Family::Packing { points, objects, copies, seed, dir } => {
            let (curves, surfaces) = split_objects(objects_from_json(&read(objects)?)?);
            let template = Instance {
                points: read_points(points)?,
                curves,
                surfaces,
                family: inclab::constructions::FamilyDescriptor::lines(),
                label: "template".into(),
            };
            (gen_packing_copies(&template, *copies, *seed)?, dir, None)
        }
        Family::Variety { kind, n, center, radius2, plane, seed, dir } => {
            let which = match kind {
                VarietyKind::Sphere => {
                    let c = scalar_list(center, 3, "--center")?;
                    Variety::Sphere {
                        center: Point3::new(c[0].clone(), c[1].clone(), c[2].clone()),
                        radius2: parse_scalar(radius2)?,
                    }
                }
                VarietyKind::Plane => {
                    let c = scalar_list(plane, 4, "--plane")?;
                    Variety::Plane { a: c[0].clone(), b: c[1].clone(), c: c[2].clone(), d: c[3].clone() }
                }
                VarietyKind::Paraboloid => Variety::Paraboloid,
            };
            (gen_random_on_variety(&which, *n, *seed)?, dir, None)
        }
        Family::DistanceSpheres { p1, p2, dir } => {
            let a = read_points(p1)?;
            let b = read_points(p2)?;
            let (spheres, t) = gen_distance_spheres(&a, &b)?;
            let inst = Instance {
                points: a,
                curves: Vec::new(),
                surfaces: spheres,
                family: inclab::constructions::FamilyDescriptor::spheres(),
                label: "distance-spheres".into(),
            };
            (inst, dir, Some(("t", json!(t))))
        }
        Family::UnitSpheres { points, radius2, dir } => {
            let pts = read_points(points)?;
            let r2 = parse_scalar(radius2)?;
            let surfaces = gen_unit_spheres(&pts, &r2)?;
            let inst = Instance {
                points: pts,
                curves: Vec::new(),
                surfaces,
                family: inclab::constructions::FamilyDescriptor::spheres(),
                label: format!("unit-spheres(radius2={})", format_scalar(&r2)),
            };
            (inst, dir, None)
        }
    };
    write_instance(cli, &inst, &dir.dir, extra)
}

fn write_instance(cli: &Cli, inst: &Instance, dir: &Path, extra: Option<(&str, Value)>) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut files = vec!["points.csv"];
    write_atomic(&dir.join("points.csv"), &points_to_csv(&inst.points))?;
    if !inst.curves.is_empty() {
        write_atomic(&dir.join("curves.json"), &curves_to_json(&inst.curves))?;
        files.push("curves.json");
    }
    if !inst.surfaces.is_empty() {
        write_atomic(&dir.join("surfaces.json"), &surfaces_to_json(&inst.surfaces))?;
        files.push("surfaces.json");
    }
    let mut rec = BTreeMap::from([
        ("label", json!(inst.label)),
        ("points", json!(inst.points.len())),
        ("curves", json!(inst.curves.len())),
        ("surfaces", json!(inst.surfaces.len())),
        ("files", json!(files.join(";"))),
    ]);
    if let Some((k, v)) = extra {
        rec.insert(k, v);
    }
    emit_record(cli, &rec)
}

/// Seeded lines with small integer origins and directions.
fn random_lines(count: usize, seed: u64) -> Result<Vec<Curve>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut c = || Scalar::from_frac(rng.gen_range(-1000..=1000), 1000);
        let o = Point3::new(c(), c(), c());
        let d = Point3::new(c(), c(), c());
        if d.is_zero() {
            continue;
        }
        out.push(Curve::line(o, d)?);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn partition(
    cli: &Cli,
    points: &Path,
    rounds: usize,
    delta: &str,
    seed: u64,
    census: bool,
    cross_lines: Option<usize>,
    save: Option<&Path>,
    opts: BuildOptions,
) -> Result<()> {
    let pts = read_points(points)?;
    let part = build_partition_with(&pts, rounds, &parse_scalar(delta)?, seed, opts)?;
    if let Some(p) = save {
        write_atomic(p, &partition_to_json(&part))?;
    }
    let cells = cell_census(&pts, &part);
    let mut rec = BTreeMap::from([
        ("rounds", json!(part.rounds)),
        ("total_degree", json!(part.total_degree)),
        ("max_open", json!(max_open_population(&cells))),
        ("zero_set", json!(cells.get(&inclab::partition::CellLabel::Zero).copied().unwrap_or(0))),
    ]);
    if cli.format == Format::Json {
        let factors: Vec<Value> = part
            .round_factors
            .iter()
            .map(|f| json!(inclab::io::poly_record(f)))
            .collect();
        rec.insert("factors", json!(factors));
        rec.insert("delta", json!(format_scalar(&part.delta)));
        rec.insert("seed", json!(part.seed));
        if census {
            let m: BTreeMap<String, usize> = cells.iter().map(|(l, &c)| (l.to_string(), c)).collect();
            rec.insert("census", json!(m));
        }
    }
    if let Some(n) = cross_lines {
        let lines = random_lines(n, seed)?;
        let crossed = lines.iter().map(|l| crossing_census(l, &part)).collect::<Result<Vec<_>>>()?;
        rec.insert("cross_lines", json!(n));
        rec.insert("max_cells_crossed", json!(crossed.iter().copied().max().unwrap_or(0)));
    }
    emit_record(cli, &rec)
}

fn read_series(path: &Path) -> Result<Vec<(u64, u64)>> {
    let text = read(path)?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["scale", "observed"] {
        return Err(Error::Parse(format!("series header must be scale,observed, got {headers:?}")));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let num = |i: usize| -> Result<u64> {
            rec[i].parse().map_err(|_| Error::Parse(format!("bad integer {:?}", &rec[i])))
        };
        out.push((num(0)?, num(1)?));
    }
    Ok(out)
}

fn report(
    cli: &Cli,
    series: &Path,
    fit: bool,
    formula: Option<&str>,
    params: &str,
    scale_param: &str,
) -> Result<()> {
    let rows = read_series(series)?;
    let mut bounds = Vec::with_capacity(rows.len());
    if let Some(name) = formula {
        let mut f = formula_from(name, params)?;
        for &(s, _) in &rows {
            f.params.insert(scale_param.to_string(), Scalar::from_frac(s as i64, 1));
            bounds.push(eval_bound(&f)?);
        }
    }
    let fitted = if fit { Some(fit_exponent(&rows)?) } else { None };
    match cli.format {
        Format::Csv => {
            // plot-ready table; the fit, if any, repeats on every row
            let mut out = String::from("scale,observed,ln_scale,ln_observed");
            if formula.is_some() {
                out.push_str(",bound,ratio");
            }
            if fitted.is_some() {
                out.push_str(",slope,intercept,residual");
            }
            out.push('\n');
            for (i, &(s, o)) in rows.iter().enumerate() {
                out.push_str(&format!("{s},{o},{},{}", (s as f64).ln(), (o as f64).ln()));
                if let Some(b) = bounds.get(i) {
                    out.push_str(&format!(",{b},{}", o as f64 / b));
                }
                if let Some(f) = &fitted {
                    out.push_str(&format!(",{},{},{}", f.slope, f.intercept, f.residual));
                }
                out.push('\n');
            }
            emit(cli, &out)
        }
        Format::Json => {
            let pts: Vec<Value> = rows
                .iter()
                .enumerate()
                .map(|(i, &(s, o))| match bounds.get(i) {
                    Some(b) => json!({ "scale": s, "observed": o, "bound": b, "ratio": o as f64 / b }),
                    None => json!({ "scale": s, "observed": o }),
                })
                .collect();
            emit(cli, &pretty(&json!({ "series": pts, "fit": fitted })))
        }
    }
}
