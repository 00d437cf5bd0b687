use std::fmt;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};
use srr_core::bounds::{named_bounds, BoundReport, BOUND_NAMES};
use srr_core::code::code_profile;
use srr_core::io::parse_matrix;
use srr_core::polyhedra::{enumerate_vertices, volume as polytope_volume, HPolytope};
use srr_core::rational::{self, Rational};
use srr_core::recovery::minimal_recovery_system;
use srr_core::region::{
    closed_form_volume, detect_volume_kind, region_params, region_polytope, region_polytope_fm, srr_membership,
    to_integer_allocation, DemandVector, Membership, Region,
};
use srr_core::{Error, GeneratorMatrix};

use crate::report::envelope;
use crate::svg::{self, Layer};
use crate::{Format, RegionMethod, VolumeMethod};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    /// Malformed command-line values.
    Parse(String),
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Parse { .. }) | CliError::Parse(_) => 4,
            CliError::Core(Error::TooLarge { .. } | Error::Explosion { .. }) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Parse(m) | CliError::Verify(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub enum Output {
    Json(Value),
    Text(String),
}

impl Output {
    pub fn emit(self, path: Option<&Path>) -> Result<()> {
        let text = match self {
            Output::Json(v) => {
                let mut s = serde_json::to_string_pretty(&v).expect("serializable");
                s.push('\n');
                s
            }
            Output::Text(s) => s,
        };
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

struct Input {
    bytes: Vec<u8>,
    g: GeneratorMatrix,
    start: Instant,
}

impl Input {
    fn load(path: &Path) -> Result<Self> {
        let start = Instant::now();
        let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let text = String::from_utf8_lossy(&bytes);
        let g = parse_matrix(&text)?;
        Ok(Self { bytes, g, start })
    }

    fn finish(&self, command: &str, result: Value) -> Output {
        Output::Json(envelope(command, &self.bytes, result, self.start.elapsed()))
    }
}

fn parse_rational(flag: &str, text: &str) -> Result<Rational> {
    rational::parse(text).map_err(|e| CliError::Parse(format!("--{flag}: {e}")))
}

fn parse_vector(flag: &str, text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(|t| parse_rational(flag, t)).collect()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::fmt).collect()
}

fn point_list(points: &[Vec<Rational>]) -> Vec<Vec<String>> {
    points.iter().map(|p| strings(p)).collect()
}

pub fn analyze(path: &Path, r2: bool) -> Result<Output> {
    let input = Input::load(path)?;
    let g = &input.g;
    let profile = code_profile(g)?;
    let sys = minimal_recovery_system(g)?;
    let params = region_params(&sys, if r2 { &[2] } else { &[] })?;
    let result = json!({
        "profile": profile,
        "recovery": sys.to_json(),
        "params": params,
    });
    Ok(input.finish("analyze", result))
}

pub fn member(path: &Path, lambda: &str, mu: &str, integerize: bool) -> Result<Output> {
    let input = Input::load(path)?;
    let lam = DemandVector::new(parse_vector("lambda", lambda)?).map_err(|e| CliError::Parse(format!("--lambda: {e}")))?;
    let mu = parse_rational("mu", mu)?;
    let sys = minimal_recovery_system(&input.g)?;
    let mut result = json!({
        "lambda": strings(lam.values()),
        "mu": rational::fmt(&mu),
    });
    match srr_membership(&sys, &mu, &lam)? {
        Membership::Inside(a) => {
            result["inside"] = json!(true);
            result["certificate"] = a.to_json();
            if integerize {
                let (s, alloc) = to_integer_allocation(&a)?;
                result["integer"] = json!({
                    "s": s.to_string(),
                    "feasible": alloc.is_feasible(),
                    "allocation": alloc.to_json(),
                });
            }
        }
        Membership::Outside => result["inside"] = json!(false),
    }
    Ok(input.finish("member", result))
}

fn compute_region(g: &GeneratorMatrix, mu: &Rational, method: RegionMethod) -> Result<Region> {
    let sys = minimal_recovery_system(g)?;
    Ok(match method {
        RegionMethod::Refine => region_polytope(&sys, mu)?,
        RegionMethod::Fm => region_polytope_fm(&sys, mu)?,
    })
}

fn extent(points: &[Vec<Rational>]) -> Rational {
    points
        .iter()
        .flatten()
        .max()
        .cloned()
        .unwrap_or_else(|| rational::int(1))
}

pub fn region(path: &Path, format: Format, mu: &str, method: RegionMethod) -> Result<Output> {
    let input = Input::load(path)?;
    let k = input.g.k();
    if matches!(format, Format::Svg) && k > 3 {
        return Err(Error::UnsupportedDimension(k).into());
    }
    let mu = parse_rational("mu", mu)?;
    let region = compute_region(&input.g, &mu, method)?;
    match format {
        Format::Csv => Ok(Output::Text(region.v.to_csv())),
        Format::Svg if k == 2 => {
            let top = rational::to_f64(&extent(region.v.vertices())) * 1.1;
            let layer = Layer {
                label: "region".into(),
                vertices: region.v.vertices().to_vec(),
                filled: true,
            };
            Ok(Output::Text(svg::plot(&[layer], top)))
        }
        _ => {
            let result = json!({
                "k": k,
                "mu": rational::fmt(&mu),
                "method": match method { RegionMethod::Refine => "refine", RegionMethod::Fm => "fm" },
                "vertices": point_list(region.v.vertices()),
                "h": region.h,
                "vertex_count": region.v.vertices().len(),
                "facet_count": region.h.len(),
            });
            Ok(input.finish("region", result))
        }
    }
}

/// The bound's polytope cut to `x_i <= cap`, for drawing.
fn clipped(p: &HPolytope, cap: &Rational) -> Result<Vec<Vec<Rational>>> {
    let mut p = p.clone();
    for i in 0..p.dim() {
        let mut row = vec![rational::int(0); p.dim()];
        row[i] = rational::int(1);
        p.push(row, cap.clone());
    }
    Ok(enumerate_vertices(&p)?.vertices().to_vec())
}

pub fn bounds(path: &Path, set: &str, b: &[String], svg_path: Option<&Path>) -> Result<Output> {
    let input = Input::load(path)?;
    let g = &input.g;
    let k = g.k();
    if svg_path.is_some() && k != 2 {
        return Err(Error::UnsupportedDimension(k).into());
    }
    let mut names: Vec<&str> = if set.trim() == "all" {
        BOUND_NAMES.to_vec()
    } else {
        set.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
    };
    if let Some(bad) = names.iter().find(|n| !BOUND_NAMES.contains(n)) {
        return Err(Error::Validation(format!(
            "unknown bound {bad:?}; valid names: {}",
            BOUND_NAMES.join(", ")
        ))
        .into());
    }
    if !b.is_empty() && !names.contains(&"clip") {
        names.push("clip");
    }
    let extra: Vec<Vec<Rational>> = b.iter().map(|t| parse_vector("b", t)).collect::<Result<_>>()?;
    let region = compute_region(g, &rational::int(1), RegionMethod::Refine)?;
    let mut entries = Vec::new();
    let mut good: Vec<BoundReport> = Vec::new();
    for (label, outcome) in named_bounds(g, &names, &extra)? {
        match outcome {
            Ok(report) => {
                let mut violations = Vec::new();
                for v in region.v.vertices() {
                    let lam = DemandVector::new(v.clone())?;
                    if !report.evaluate(&lam)?.satisfied {
                        violations.push(strings(v));
                    }
                }
                let polygon = if k <= 3 {
                    match enumerate_vertices(&report.polytope()?) {
                        Ok(v) => json!(point_list(v.vertices())),
                        Err(Error::Unbounded) => Value::Null,
                        Err(e) => return Err(e.into()),
                    }
                } else {
                    Value::Null
                };
                let mut entry = serde_json::to_value(&report).expect("serializable");
                entry["polygon"] = polygon;
                entry["contains_region"] = json!(violations.is_empty());
                entry["violations"] = json!(violations);
                entries.push(entry);
                good.push(report);
            }
            Err(e) => entries.push(json!({ "name": label, "error": e.to_string() })),
        }
    }
    let mut result = json!({
        "region_vertices": point_list(region.v.vertices()),
        "bounds": entries,
    });
    if k <= 3 && !good.is_empty() {
        let refs: Vec<&BoundReport> = good.iter().collect();
        let both = srr_core::bounds::intersect(k, &refs)?;
        result["intersection"] = if both.is_bounded() {
            let v = enumerate_vertices(&both)?;
            let vol = polytope_volume(&v)?;
            json!({
                "vertices": point_list(v.vertices()),
                "volume": rational::fmt(&vol.volume),
            })
        } else {
            json!({ "vertices": null, "volume": null })
        };
    }
    if let Some(p) = svg_path {
        let cap = extent(region.v.vertices()) * Rational::new(3.into(), 2.into());
        let mut layers = vec![Layer {
            label: "region".into(),
            vertices: region.v.vertices().to_vec(),
            filled: true,
        }];
        for r in &good {
            layers.push(Layer {
                label: r.name.clone(),
                vertices: clipped(&r.polytope()?, &cap)?,
                filled: false,
            });
        }
        let text = svg::plot(&layers, rational::to_f64(&cap));
        std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(input.finish("bounds", result))
}

pub fn volume(path: &Path, method: VolumeMethod, verify: bool) -> Result<Output> {
    let input = Input::load(path)?;
    let g = &input.g;
    let kind = detect_volume_kind(g)?;
    let triangulate = || -> Result<(Rational, usize)> {
        let region = compute_region(g, &rational::int(1), RegionMethod::Refine)?;
        let v = polytope_volume(&region.v)?;
        Ok((v.volume, v.simplices))
    };
    let closed = match (method, &kind) {
        (VolumeMethod::Triangulate, _) => None,
        (_, Some(kind)) => Some(closed_form_volume(kind)?),
        (VolumeMethod::ClosedForm, None) => {
            return Err(Error::RegimeViolation(
                "no closed form applies (needs replication, or systematic MDS with k in {2,3} and n >= 2k)".into(),
            )
            .into())
        }
        (VolumeMethod::Auto, None) => None,
    };
    let run_triangulation =
        matches!(method, VolumeMethod::Triangulate) || closed.is_none() || (verify && matches!(method, VolumeMethod::Auto));
    let tri = if run_triangulation { Some(triangulate()?) } else { None };
    if let (Some(c), Some((t, _))) = (&closed, &tri) {
        if c != t {
            return Err(CliError::Verify(format!(
                "closed form {} disagrees with triangulation {}",
                rational::fmt(c),
                rational::fmt(t)
            )));
        }
    }
    let (value, used) = match (&closed, &tri) {
        (Some(c), _) => (c.clone(), "closed-form"),
        (None, Some((t, _))) => (t.clone(), "triangulate"),
        (None, None) => unreachable!("one path always runs"),
    };
    let result = json!({
        "volume": rational::fmt(&value),
        "method": used,
        "kind": kind,
        "closed_form": closed.as_ref().map(rational::fmt),
        "triangulated": tri.as_ref().map(|(t, _)| rational::fmt(t)),
        "simplices": tri.as_ref().map(|(_, s)| *s),
        "verified": closed.is_some() && tri.is_some(),
    });
    Ok(input.finish("volume", result))
}
