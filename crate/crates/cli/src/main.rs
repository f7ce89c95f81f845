use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use ggk_core::dissection::{algebra_from_dissection, Dissection};
use ggk_core::fixtures::fixture_pair;
use ggk_core::gentle::{AlgebraFile, GentlePair};
use ggk_core::homalg::{hom_dims, table_json, DgModule, FieldKind, DEFAULT_PRIME};
use ggk_core::intersect::int_table;
use ggk_core::koszul::{
    half_rotate, half_rotate_open, koszul_object, simple_resolution, smooth_thread, ThreadFile,
};
use ggk_core::string::{
    build_x_module, display_string, validate_string, ArcFile, GradedString, Over,
};
use ggk_core::verify::{self, Config, Suite};

#[derive(Parser)]
#[command(
    name = "ggk",
    version,
    about = "Graded gentle algebras, arcs on surfaces and Koszul duality"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Algebra file the arcs refer to; the built-in example algebra if absent.
    #[arg(long, global = true, value_name = "FILE")]
    algebra: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an algebra, arc or dissection file.
    Validate {
        file: PathBuf,
        /// File kind; guessed from the keys when absent.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// The algebra of a dissection.
    FromDissection { file: PathBuf },
    /// The quadratic dual of an algebra.
    Dual { file: PathBuf },
    /// The string dg module of an arc.
    Xmod { arc: PathBuf },
    /// Cohomology dimensions of the Hom complex between two arcs.
    Hom { from: PathBuf, to: PathBuf },
    /// Oriented intersection counts between two arcs, by index.
    Int { from: PathBuf, to: PathBuf },
    /// The arc of the projective resolution of a simple module.
    ResolveSimple { vertex: String },
    /// Half rotation: closed arcs to open arcs and back.
    Rotate { arc: PathBuf },
    /// Smoothing of a thread file.
    Smooth { thread: PathBuf },
    /// The object of the Koszul functor of a closed arc.
    KoszulObj { arc: PathBuf },
    /// Run the seeded verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value = "q")]
        field: FieldArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Algebra,
    Arc,
    Dissection,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    IntDim,
    Smoothing,
    Koszul,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Q,
    P,
}

/// Why a command did not succeed; decides the exit code.
enum Failure {
    /// A check ran and failed (exit 1).
    Verification(Value),
    /// Unreadable, malformed or inconsistent input (exit 2).
    Input(Value),
}

type Outcome = Result<Output, Failure>;

/// Successful output: the JSON form and its human-readable rendering.
struct Output {
    json: Value,
    human: String,
}

fn input(msg: impl std::fmt::Display) -> Failure {
    Failure::Input(json!({ "error": msg.to_string() }))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// Parses a JSON file into `T`, reporting the position of syntax and schema
/// errors.
fn parse<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Input(json!({
            "error": format!("{}: {e}", path.display()),
            "file": path.display().to_string(),
            "line": e.line(),
            "column": e.column(),
        }))
    })
}

fn load_algebra_file(path: &Path) -> Result<GentlePair, Failure> {
    let f: AlgebraFile = parse(path)?;
    let pair = GentlePair::from_file(&f).map_err(|e| input(format!("{}: {e}", path.display())))?;
    if !pair.is_gentle() {
        let v: Vec<String> = pair
            .validate_gentle()
            .violations
            .iter()
            .map(|v| v.message.clone())
            .collect();
        return Err(input(format!(
            "{}: not gentle: {}",
            path.display(),
            v.join("; ")
        )));
    }
    Ok(pair)
}

struct Ctx {
    primal: GentlePair,
    dual: GentlePair,
}

impl Ctx {
    fn new(algebra: Option<&Path>) -> Result<Self, Failure> {
        let primal = match algebra {
            Some(p) => load_algebra_file(p)?,
            None => fixture_pair(),
        };
        let dual = primal.quadratic_dual().map_err(input)?;
        Ok(Ctx { primal, dual })
    }

    fn side(&self, over: Over) -> &GentlePair {
        match over {
            Over::Primal => &self.primal,
            Over::Dual => &self.dual,
        }
    }

    fn arc(&self, path: &Path) -> Result<(Over, GradedString), Failure> {
        let f: ArcFile = parse(path)?;
        let s = f
            .to_string_over(self.side(f.over))
            .map_err(|e| input(format!("{}: {e}", path.display())))?;
        Ok((f.over, s))
    }

    fn arc_output(&self, over: Over, s: &GradedString) -> Output {
        let pair = self.side(over);
        let file = ArcFile::from_string(pair, over, s);
        Output {
            json: serde_json::to_value(&file).expect("serialisable"),
            human: display_string(pair, s),
        }
    }
}

fn module_json(pair: &GentlePair, m: &DgModule) -> Result<Value, Failure> {
    let basis = pair.basis().map_err(input)?;
    let gens: Vec<Value> = m
        .gens
        .iter()
        .map(|g| json!({ "vertex": pair.vertex_name(g.vertex), "shift": g.shift }))
        .collect();
    let diff: Vec<Value> = m
        .comps
        .iter()
        .map(|c| json!({ "from": c.from, "to": c.to, "coeff": c.coeff, "path": pair.path_name(basis.get(c.path)) }))
        .collect();
    Ok(json!({ "generators": gens, "differential": diff }))
}

fn module_human(pair: &GentlePair, m: &DgModule) -> Result<String, Failure> {
    let basis = pair.basis().map_err(input)?;
    let mut lines: Vec<String> = m
        .gens
        .iter()
        .enumerate()
        .map(|(i, g)| format!("  {i}: P({})[{}]", pair.vertex_name(g.vertex), g.shift))
        .collect();
    for c in &m.comps {
        lines.push(format!(
            "  d {} -> {}: {:+} {}",
            c.from,
            c.to,
            c.coeff,
            pair.path_name(basis.get(c.path))
        ));
    }
    Ok(lines.join("\n"))
}

fn table_human(t: &BTreeMap<i64, usize>) -> String {
    if t.is_empty() {
        return "  (zero)".into();
    }
    t.iter()
        .map(|(k, v)| format!("  degree {k:>3}: {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn algebra_output(pair: &GentlePair) -> Output {
    let json = serde_json::to_value(pair.to_file()).expect("serialisable");
    let human = serde_json::to_string_pretty(&json).expect("serialisable");
    Output { json, human }
}

fn guess_kind(v: &Value) -> Option<Kind> {
    let o = v.as_object()?;
    if o.contains_key("polygons") {
        Some(Kind::Dissection)
    } else if o.contains_key("over") {
        Some(Kind::Arc)
    } else if o.contains_key("arrows") {
        Some(Kind::Algebra)
    } else {
        None
    }
}

fn invalid(kind: &str, problems: Vec<String>) -> Failure {
    Failure::Verification(json!({ "valid": false, "kind": kind, "problems": problems }))
}

fn validate(ctx: &Result<Ctx, Failure>, file: &Path, kind: Option<Kind>) -> Outcome {
    let v: Value = parse(file)?;
    let kind = kind
        .or_else(|| guess_kind(&v))
        .ok_or_else(|| input("cannot tell the kind of file; pass --kind"))?;
    match kind {
        Kind::Algebra => {
            let f: AlgebraFile = parse(file)?;
            let pair =
                GentlePair::from_file(&f).map_err(|e| invalid("algebra", vec![e.to_string()]))?;
            let report = pair.validate_gentle();
            if !report.is_ok() {
                return Err(invalid(
                    "algebra",
                    report
                        .violations
                        .iter()
                        .map(|v| v.message.clone())
                        .collect(),
                ));
            }
            if let Err(e) = pair.basis() {
                return Err(invalid("algebra", vec![e.to_string()]));
            }
            let human = format!(
                "valid gentle algebra: {} vertices, {} arrows, {} relations",
                pair.n_vertices(),
                pair.n_arrows(),
                pair.relations().len()
            );
            Ok(Output {
                json: json!({ "valid": true, "kind": "algebra" }),
                human,
            })
        }
        Kind::Dissection => {
            let d: Dissection = parse(file)?;
            let pair = algebra_from_dissection(&d)
                .map_err(|e| invalid("dissection", vec![e.to_string()]))?;
            let human = format!(
                "valid dissection: {} arcs, {} polygons, algebra with {} arrows",
                d.arcs.len(),
                d.polygons.len(),
                pair.n_arrows()
            );
            Ok(Output {
                json: json!({ "valid": true, "kind": "dissection" }),
                human,
            })
        }
        Kind::Arc => {
            let ctx = ctx.as_ref().map_err(|f| match f {
                Failure::Input(v) | Failure::Verification(v) => Failure::Input(v.clone()),
            })?;
            let f: ArcFile = parse(file)?;
            let pair = ctx.side(f.over);
            let s = resolve_names(pair, &f).map_err(|e| invalid("arc", vec![e]))?;
            let problems = validate_string(pair, &s);
            if !problems.is_empty() {
                return Err(invalid("arc", problems));
            }
            Ok(Output {
                json: json!({ "valid": true, "kind": "arc" }),
                human: format!("valid arc: {}", display_string(pair, &s)),
            })
        }
    }
}

/// The string of an arc file without running the string checks.
fn resolve_names(pair: &GentlePair, f: &ArcFile) -> Result<GradedString, String> {
    use ggk_core::string::Letter;
    let vertices = f
        .vertices
        .iter()
        .map(|v| pair.vertex(v))
        .collect::<Result<Vec<_>, _>>();
    let letters = f
        .letters
        .iter()
        .map(|l| {
            let path = l
                .path
                .iter()
                .map(|a| pair.arrow_index(a))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Letter { dir: l.dir, path })
        })
        .collect::<Result<Vec<_>, ggk_core::Error>>();
    match (vertices, letters) {
        (Ok(vertices), Ok(letters)) => Ok(GradedString {
            vertices,
            shifts: f.shifts.clone(),
            letters,
        }),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    }
}

fn same_side(a: Over, b: Over) -> Result<Over, Failure> {
    if a == b {
        Ok(a)
    } else {
        Err(input("the two arcs live over different sides"))
    }
}

fn run(cli: &Cli) -> Outcome {
    let ctx = Ctx::new(cli.algebra.as_deref());
    match &cli.command {
        Command::Validate { file, kind } => validate(&ctx, file, *kind),
        Command::FromDissection { file } => {
            let d: Dissection = parse(file)?;
            let pair = algebra_from_dissection(&d)
                .map_err(|e| input(format!("{}: {e}", file.display())))?;
            Ok(algebra_output(&pair))
        }
        Command::Dual { file } => {
            let pair = load_algebra_file(file)?;
            Ok(algebra_output(&pair.quadratic_dual().map_err(input)?))
        }
        Command::Xmod { arc } => {
            let ctx = ctx?;
            let (over, s) = ctx.arc(arc)?;
            let pair = ctx.side(over);
            let m = build_x_module(pair, &s).map_err(input)?;
            Ok(Output {
                json: module_json(pair, &m)?,
                human: format!("X{}\n{}", display_string(pair, &s), module_human(pair, &m)?),
            })
        }
        Command::Hom { from, to } => {
            let ctx = ctx?;
            let (o1, s) = ctx.arc(from)?;
            let (o2, t) = ctx.arc(to)?;
            let pair = ctx.side(same_side(o1, o2)?);
            let m = build_x_module(pair, &s).map_err(input)?;
            let n = build_x_module(pair, &t).map_err(input)?;
            let h = hom_dims(pair, &m, &n, FieldKind::Rational).map_err(input)?;
            Ok(Output {
                json: table_json(&h),
                human: format!("Hom cohomology dimensions\n{}", table_human(&h)),
            })
        }
        Command::Int { from, to } => {
            let ctx = ctx?;
            let (o1, s) = ctx.arc(from)?;
            let (o2, t) = ctx.arc(to)?;
            let pair = ctx.side(same_side(o1, o2)?);
            let table = int_table(pair, &s, &t).map_err(input)?;
            let (a, b) = (display_string(pair, &s), display_string(pair, &t));
            let human = format!("intersections {a} -> {b}\n{}", table_human(&table));
            Ok(Output {
                json: json!({ "from": a, "to": b, "table": table_json(&table) }),
                human,
            })
        }
        Command::ResolveSimple { vertex } => {
            let ctx = ctx?;
            let v = ctx.primal.vertex(vertex).map_err(input)?;
            let s = simple_resolution(&ctx.primal, v).map_err(input)?;
            Ok(ctx.arc_output(Over::Primal, &s))
        }
        Command::Rotate { arc } => {
            let ctx = ctx?;
            let (over, s) = ctx.arc(arc)?;
            match over {
                Over::Dual => {
                    Ok(ctx.arc_output(Over::Primal, &half_rotate(&ctx.primal, &s).map_err(input)?))
                }
                Over::Primal => Ok(ctx.arc_output(
                    Over::Dual,
                    &half_rotate_open(&ctx.primal, &s).map_err(input)?,
                )),
            }
        }
        Command::Smooth { thread } => {
            let ctx = ctx?;
            let f: ThreadFile = parse(thread)?;
            let over = f.over().map_err(input)?;
            let t = f
                .to_thread(ctx.side(over))
                .map_err(|e| input(format!("{}: {e}", thread.display())))?;
            let s = smooth_thread(ctx.side(over), &t).map_err(input)?;
            Ok(ctx.arc_output(over, &s))
        }
        Command::KoszulObj { arc } => {
            let ctx = ctx?;
            let (over, eta) = ctx.arc(arc)?;
            if over != Over::Dual {
                return Err(input(
                    "koszul-obj takes a closed arc, that is an arc over the dual side",
                ));
            }
            let rot = half_rotate(&ctx.primal, &eta).map_err(input)?;
            let m = koszul_object(&ctx.primal, &eta).map_err(input)?;
            let arc = ctx.arc_output(Over::Primal, &rot);
            Ok(Output {
                json: json!({ "arc": arc.json, "module": module_json(&ctx.primal, &m)? }),
                human: format!("X{}\n{}", arc.human, module_human(&ctx.primal, &m)?),
            })
        }
        Command::Verify { suite, seed, field } => {
            let suite = match suite {
                SuiteArg::All => Suite::All,
                SuiteArg::IntDim => Suite::IntDim,
                SuiteArg::Smoothing => Suite::Smoothing,
                SuiteArg::Koszul => Suite::Koszul,
            };
            let field = match field {
                FieldArg::Q => FieldKind::Rational,
                FieldArg::P => FieldKind::Prime(DEFAULT_PRIME),
            };
            let report = verify::run(suite, &Config::new(*seed, field));
            let json = serde_json::to_value(&report).expect("serialisable");
            if report.passed() {
                let mut lines: Vec<String> = report
                    .criteria
                    .iter()
                    .map(|c| {
                        format!(
                            "PASS {} {} ({} checked, {:.2}s)",
                            c.id, c.name, c.checked, c.seconds
                        )
                    })
                    .collect();
                lines.push(format!(
                    "seed {} field {}: all passed in {:.2}s",
                    report.seed, report.field, report.wall_seconds
                ));
                Ok(Output {
                    json,
                    human: lines.join("\n"),
                })
            } else {
                Err(Failure::Verification(json))
            }
        }
    }
}

fn human_failure(v: &Value) -> String {
    if let Some(criteria) = v.get("criteria").and_then(Value::as_array) {
        let mut lines = Vec::new();
        for c in criteria {
            let passed = c["passed"].as_bool().unwrap_or(false);
            lines.push(format!(
                "{} {} {} ({} checked)",
                if passed { "PASS" } else { "FAIL" },
                c["id"],
                c["name"].as_str().unwrap_or(""),
                c["checked"]
            ));
            for f in c["failures"].as_array().into_iter().flatten().take(3) {
                lines.push(format!("    reproducer: {f}"));
            }
        }
        return lines.join("\n");
    }
    if let Some(problems) = v.get("problems").and_then(Value::as_array) {
        let ps: Vec<String> = problems
            .iter()
            .filter_map(|p| p.as_str())
            .map(|p| format!("  {p}"))
            .collect();
        return format!(
            "invalid {}:\n{}",
            v["kind"].as_str().unwrap_or("input"),
            ps.join("\n")
        );
    }
    format!("error: {}", v["error"].as_str().unwrap_or("unknown"))
}

/// Writes a line to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                emit(&out.json.to_string());
            } else {
                emit(&out.human);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(v)) => {
            if cli.json {
                emit(&v.to_string());
            } else {
                eprintln!("{}", human_failure(&v));
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(v)) => {
            if cli.json {
                eprintln!("{v}");
            } else {
                eprintln!("{}", human_failure(&v));
            }
            ExitCode::from(2)
        }
    }
}
