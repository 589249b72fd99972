//! Command-line front end. `run` parses arguments, dispatches to the library
//! and returns the exit code with the JSON report.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use omrep::census::{representability_census, verify_nelson_chain, Domain};
use omrep::exactalg::{pfaffian, principal_pfaffians};
use omrep::groundset::{format_key, parse_key};
use omrep::io::{
    from_json, FamilyFile, MatrixFile, PluckerFile, RepresentationFile, ValueText, WickFile,
};
use omrep::matroid::{is_matroid, is_matroid_strong, is_orthogonal, is_orthogonal_strong, twist};
use omrep::plucker::{classify_plucker, plucker_from_matrix, reconstruct_plucker, Label};
use omrep::wick::{classify_wick, reconstruct_wick, twist_wick, wick_from_representation};
use omrep::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "omrep", version, about = "Exact checks and constructions for matroid and orthogonal matroid representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// JSON input file; `-` or nothing reads stdin.
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Every quadratic equation.
    Full,
    /// Short equations plus the support axiom.
    Short,
    #[value(name = "3term")]
    ThreeTerm,
    #[value(name = "4term")]
    FourTerm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Plucker,
    Wick,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    Gf2,
    Gf3,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Basis exchange axiom on a family file.
    CheckMatroid {
        #[arg(long)]
        strong: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Symmetric exchange axiom on a family file.
    CheckOrthogonal {
        #[arg(long)]
        strong: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Grassmann-Plücker equations on a Plücker vector file.
    CheckPlucker {
        #[arg(long, value_enum, default_value = "short")]
        mode: Mode,
        #[command(flatten)]
        input: Input,
    },
    /// Wick equations on a Wick vector file.
    CheckWick {
        #[arg(long, value_enum, default_value = "short")]
        mode: Mode,
        #[command(flatten)]
        input: Input,
    },
    /// Matrix whose maximal minors are the given Plücker vector.
    ReconstructPlucker {
        #[command(flatten)]
        input: Input,
    },
    /// Skew matrix and twist whose Pfaffians are the given Wick vector.
    ReconstructWick {
        #[command(flatten)]
        input: Input,
    },
    /// Pfaffian of a skew matrix, or all principal Pfaffians.
    Pfaffian {
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Plücker vector of a matrix file, or Wick vector of a representation file.
    FromMatrix {
        #[arg(long, value_enum, default_value = "plucker")]
        kind: Kind,
        #[command(flatten)]
        input: Input,
    },
    /// Twist a family or Wick vector by a set such as `1,3`.
    Twist {
        #[arg(long = "set", allow_hyphen_values = true)]
        set: String,
        #[command(flatten)]
        input: Input,
    },
    /// Exhaustive representability census over small fields.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "gf2")]
        field: Vec<FieldArg>,
        /// JSON-lines record stream; an existing stream is resumed.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Exact check of the counting-bound inequality chain.
    VerifyBounds {
        #[arg(long)]
        n: u64,
        /// Extra decimal digits for the transcendental bounds.
        #[arg(long, default_value_t = 0)]
        precision: u32,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct Report {
    version: &'static str,
    verdict: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Value>,
    data: Value,
}

/// Exit code for an error class.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Classification(_) => 1,
        Error::Capability(_) => 3,
        Error::Input(_)
        | Error::NotElement { .. }
        | Error::ZeroVector
        | Error::Rank(_)
        | Error::Scaling(_)
        | Error::MapUndefined(_) => 2,
    }
}

fn render(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn error_outcome(class: &str, message: String, code: i32) -> Outcome {
    let body = json!({ "version": VERSION, "error": { "class": class, "message": message } });
    Outcome { code, stdout: render(&body), stderr: String::new() }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("payload serializes")
}

struct Reply {
    verdict: Value,
    witness: Option<Value>,
    data: Value,
    stderr: String,
}

impl Reply {
    fn new(ok: bool, witness: Option<Value>, data: Value) -> Self {
        Reply { verdict: Value::Bool(ok), witness, data, stderr: String::new() }
    }

    fn success(data: Value) -> Self {
        Reply::new(true, None, data)
    }
}

/// Runs one command line (including the program name) against `stdin`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() };
            }
            return error_outcome("usage", e.to_string().trim_end().to_string(), 2);
        }
    };
    match dispatch(cli.command, stdin) {
        Ok(reply) => {
            let ok = reply.verdict != Value::Bool(false);
            let report = Report { version: VERSION, verdict: reply.verdict, witness: reply.witness, data: reply.data };
            Outcome { code: if ok { 0 } else { 1 }, stdout: render(&report), stderr: reply.stderr }
        }
        Err(e) => error_outcome(e.class(), e.to_string(), exit_code(&e)),
    }
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> omrep::Result<Value> {
    let text = match input.input.as_deref() {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Error::Input(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    let value: Value = from_json(&text)?;
    // a report from an earlier command is accepted in place of its payload
    match value {
        Value::Object(mut map) if map.contains_key("version") && map.contains_key("data") => {
            Ok(map.remove("data").expect("checked"))
        }
        v => Ok(v),
    }
}

fn parse<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> omrep::Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Input(format!("not a {what} file: {e}")))
}

fn dispatch(cmd: Command, stdin: &mut dyn Read) -> omrep::Result<Reply> {
    match cmd {
        Command::CheckMatroid { strong, input } => {
            let f = parse::<FamilyFile>(read_input(&input, stdin)?, "family")?.to_family()?;
            let v = if strong { is_matroid_strong(&f) } else { is_matroid(&f) };
            Ok(Reply::new(v.holds(), v.witness.map(to_value), json!({ "size": f.len(), "strong": strong })))
        }
        Command::CheckOrthogonal { strong, input } => {
            let f = parse::<FamilyFile>(read_input(&input, stdin)?, "family")?.to_family()?;
            let v = if strong { is_orthogonal_strong(&f) } else { is_orthogonal(&f) };
            Ok(Reply::new(v.holds(), v.witness.map(to_value), json!({ "size": f.len(), "strong": strong })))
        }
        Command::CheckPlucker { mode, input } => {
            let p = parse::<PluckerFile>(read_input(&input, stdin)?, "Plücker vector")?.to_vector()?;
            let cls = classify_plucker(&p);
            let (ok, witness) = match mode {
                Mode::Full => (cls.full.is_none(), cls.full.as_ref().map(to_value)),
                Mode::ThreeTerm => {
                    let w = omrep::plucker::check_gp_3term(&p).witness;
                    (w.is_none(), w.map(to_value))
                }
                Mode::Short => (
                    cls.label != Label::Neither,
                    cls.three_term.as_ref().map(to_value).or(cls.support.witness.as_ref().map(to_value)),
                ),
                Mode::FourTerm => return Err(Error::Input("--mode 4term applies to check-wick".into())),
            };
            Ok(Reply::new(ok, witness, json!({ "mode": mode_name(mode), "label": cls.label })))
        }
        Command::CheckWick { mode, input } => {
            let p = parse::<WickFile>(read_input(&input, stdin)?, "Wick vector")?.to_vector()?;
            let cls = classify_wick(&p);
            let (ok, witness) = match mode {
                Mode::Full => (cls.full.is_none(), cls.full.as_ref().map(to_value)),
                Mode::FourTerm => {
                    let w = omrep::wick::check_wick_4term(&p).witness;
                    (w.is_none(), w.map(to_value))
                }
                Mode::Short => (
                    cls.label != Label::Neither,
                    cls.four_term.as_ref().map(to_value).or(cls.support.witness.as_ref().map(to_value)),
                ),
                Mode::ThreeTerm => return Err(Error::Input("--mode 3term applies to check-plucker".into())),
            };
            Ok(Reply::new(ok, witness, json!({ "mode": mode_name(mode), "label": cls.label })))
        }
        Command::ReconstructPlucker { input } => {
            let file = parse::<PluckerFile>(read_input(&input, stdin)?, "Plücker vector")?;
            let m = reconstruct_plucker(&file.to_vector()?)?;
            Ok(Reply::success(to_value(MatrixFile::from_matrix(&m, file.ring))))
        }
        Command::ReconstructWick { input } => {
            let file = parse::<WickFile>(read_input(&input, stdin)?, "Wick vector")?;
            let rep = reconstruct_wick(&file.to_vector()?)?;
            Ok(Reply::success(to_value(RepresentationFile::from_representation(&rep, file.ring))))
        }
        Command::Pfaffian { all, input } => {
            let file = parse::<RepresentationFile>(read_input(&input, stdin)?, "skew matrix")?;
            let rep = file.to_representation()?;
            if all {
                let coords: serde_json::Map<String, Value> = principal_pfaffians(&rep.matrix)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (format_key(j as u32), to_value(ValueText::from(v))))
                    .collect();
                Ok(Reply::success(json!({ "n": file.n, "ring": file.ring, "pfaffians": coords })))
            } else {
                Ok(Reply::success(json!({ "pfaffian": pfaffian(&rep.matrix).to_string() })))
            }
        }
        Command::FromMatrix { kind, input } => {
            let value = read_input(&input, stdin)?;
            match kind {
                Kind::Plucker => {
                    let file = parse::<MatrixFile>(value, "matrix")?;
                    let p = plucker_from_matrix(&file.to_matrix()?, file.ring.partial_field()?)?;
                    Ok(Reply::success(to_value(PluckerFile::from_vector(&p, file.ring))))
                }
                Kind::Wick => {
                    let file = parse::<RepresentationFile>(value, "representation")?;
                    let p = wick_from_representation(&file.to_representation()?, file.ring.partial_field()?)?;
                    Ok(Reply::success(to_value(WickFile::from_vector(&p, file.ring))))
                }
            }
        }
        Command::Twist { set, input } => {
            let value = read_input(&input, stdin)?;
            let is_family = value.get("bases").is_some();
            if is_family {
                let f = parse::<FamilyFile>(value, "family")?.to_family()?;
                let t = parse_key(f.ground(), &set)?;
                Ok(Reply::success(to_value(FamilyFile::from_family(&twist(&f, t)?))))
            } else {
                let file = parse::<WickFile>(value, "family or Wick vector")?;
                let p = file.to_vector()?;
                let t = parse_key(p.ground(), &set)?;
                Ok(Reply::success(to_value(WickFile::from_vector(&twist_wick(&p, t)?, file.ring))))
            }
        }
        Command::Census { n, field, out, workers } => {
            let domains: Vec<Domain> = field
                .iter()
                .map(|f| match f {
                    FieldArg::Gf2 => Domain::Gf2,
                    FieldArg::Gf3 => Domain::Gf3,
                })
                .collect();
            let report = representability_census(n, &domains, workers, out.as_deref())?;
            let stderr = format!(
                "census n={n}: {} families, {} orthogonal, {:.3}s\n",
                report.total_families_checked, report.orthogonal_count, report.runtime_seconds
            );
            let mut data = to_value(&report);
            // wall-clock time would break byte-stable output
            data.as_object_mut().expect("report is an object").remove("runtime_seconds");
            Ok(Reply { stderr, ..Reply::success(data) })
        }
        Command::VerifyBounds { n, precision } => {
            let check = verify_nelson_chain(n, precision)?;
            Ok(Reply::new(check.verdict, None, to_value(&check)))
        }
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Full => "full",
        Mode::Short => "short",
        Mode::ThreeTerm => "3term",
        Mode::FourTerm => "4term",
    }
}
