//! Command-line front end. [`run`] takes the argument vector and returns the
//! exit code together with everything that would be printed, so the whole
//! surface can be tested in-process.

mod certificate;
mod table1;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use resonance::arrangement::default_primes;
use resonance::nbc::nbc_face_counts;
use resonance::prototype::functional_counts;
use resonance::stirling::{b2_closed, b3_closed};
use resonance::universality::parse_matrix;
use resonance::{
    b3_via_circuits, betti_via_nbc, charpoly_via_nbc, coefficients, count_intersecting_triples,
    count_rectangle_circuits, count_tetrahedron_circuits, embed, enumerate_chambers_bruteforce,
    finite_field_charpoly, fit_stirling_coeffs, minor_matroid_check, region_count,
    verify_embedding, whitney_charpoly, CharPoly, Error, Guards, StirlingCombination,
};

pub use table1::{table1_report, Cell, CellStatus, Golden};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "resonance", version, about = "Exact computations on the resonance arrangement A_n")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Lift every size guard; runs may take hours.
    #[arg(long, global = true)]
    pub guard_override: bool,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Whitney,
    Ff,
    Nbc,
    Chambers,
    Closed,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Characteristic polynomial of A_n.
    Charpoly {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Nbc)]
        method: Method,
        /// Comma-separated primes for the finite-field method.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Betti numbers b_0..b_{i-max} of A_n.
    Betti {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::Nbc)]
        method: Method,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Number of chambers of A_n.
    Regions {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Ff)]
        method: Method,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// b_i(A_n) from the closed formulas (i = 1, 2, 3).
    ClosedForm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
    },
    /// Stirling coefficients c_{i,k} fitted to b_i(A_1..A_{2^i}).
    FitCoeffs {
        #[arg(long)]
        i: usize,
        /// Comma-separated values; defaults to the Table 1 row.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<String>>,
    },
    /// Functional prototype counts and c_{i,k}.
    Prototypes {
        #[arg(long)]
        i: usize,
        /// Cross-check the resulting b_i against NBC counts for small n.
        #[arg(long)]
        verify: bool,
    },
    /// Intersecting triples, tetrahedron and rectangle circuits, b_3.
    CircuitsCensus {
        #[arg(long)]
        n: usize,
    },
    /// Embed the matroid of an integer matrix as a minor of A_N.
    Embed {
        #[arg(long)]
        input: PathBuf,
        /// Run the pivot certificate and minor check.
        #[arg(long)]
        verify: bool,
    },
    /// Check a certificate produced by `embed --format json`.
    VerifyEmbed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Recompute Table 1 and compare with the golden values.
    Table1 {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        i_max: usize,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GuardExceeded { .. } => EXIT_GUARD,
            Error::Invariant(_) | Error::ZeroPivot { .. } | Error::Overflow(_) => EXIT_INVARIANT,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// A computed result: its JSON form, its text form, and the exit code.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome { json, text, code: EXIT_OK }
    }
}

pub fn dec<T: std::fmt::Display>(x: T) -> Value {
    Value::String(x.to_string())
}

fn dec_list<T: std::fmt::Display>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(dec).collect())
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// Parses `argv` (including the program name), runs the command and returns
/// `(exit code, output)`. With `--output` the result goes to the file and the
/// returned output is empty.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    let global = cli.global.clone();
    let result = match global.threads {
        Some(0) => Err(usage("--threads must be positive")),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(usage(format!("cannot start thread pool: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(out) => {
            let body = match global.format {
                Format::Json => render_json(&out.json),
                Format::Text => out.text,
            };
            match &global.output {
                Some(path) => match fs::write(path, &body) {
                    Ok(()) => (out.code, String::new()),
                    Err(e) => (EXIT_USAGE, format!("error: cannot write {}: {e}\n", path.display())),
                },
                None => (out.code, body),
            }
        }
        Err(f) => (f.code, format!("error: {}\n", f.message)),
    }
}

fn guards(global: &Global) -> Guards {
    if global.guard_override {
        Guards::unlimited()
    } else {
        Guards::default()
    }
}

fn primes_for(n: usize, primes: &Option<Vec<u64>>) -> Vec<u64> {
    primes.clone().unwrap_or_else(|| default_primes(n))
}

fn charpoly_by(n: usize, method: Method, primes: &Option<Vec<u64>>, g: &Guards) -> Result<CharPoly, Failure> {
    Ok(match method {
        Method::Whitney => whitney_charpoly(n, g)?,
        Method::Ff => finite_field_charpoly(n, &primes_for(n, primes), g)?,
        Method::Nbc => charpoly_via_nbc(n, g)?,
        other => return Err(usage(format!("method {other:?} does not produce a polynomial"))),
    })
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let g = guards(&cli.global);
    match &cli.command {
        Command::Charpoly { n, method, primes } => {
            let p = charpoly_by(*n, *method, primes, &g)?;
            let coeffs: Vec<BigInt> = p.descending();
            Ok(Outcome::ok(json!({ "coeffs": dec_list(&coeffs) }), format!("{p}\n")))
        }
        Command::Betti { n, i_max, method, primes } => {
            let i_max = i_max.unwrap_or(*n);
            if i_max > *n {
                return Err(usage(format!("--i-max {i_max} exceeds n = {n}")));
            }
            let betti: Vec<BigUint> = match method {
                Method::Nbc => betti_via_nbc(*n, i_max, &g)?,
                Method::Closed => (0..=i_max).map(|i| closed_form(*n, i)).collect::<Result<_, _>>()?,
                m => charpoly_by(*n, *m, primes, &g)?.betti()[..=i_max].to_vec(),
            };
            let mut text = String::new();
            for (i, b) in betti.iter().enumerate() {
                writeln!(text, "b_{i}(A_{n}) = {b}").unwrap();
            }
            Ok(Outcome::ok(json!({ "n": dec(n), "betti": dec_list(&betti) }), text))
        }
        Command::Regions { n, method, primes } => {
            let r = match method {
                Method::Chambers => enumerate_chambers_bruteforce(*n, &g)?,
                m => region_count(&charpoly_by(*n, *m, primes, &g)?),
            };
            Ok(Outcome::ok(json!({ "n": dec(n), "regions": dec(&r) }), format!("{r}\n")))
        }
        Command::ClosedForm { n, i } => {
            let b = closed_form(*n, *i)?;
            Ok(Outcome::ok(
                json!({ "n": dec(n), "i": dec(i), "value": dec(&b) }),
                format!("b_{i}(A_{n}) = {b}\n"),
            ))
        }
        Command::FitCoeffs { i, values } => fit_coeffs(*i, values),
        Command::Prototypes { i, verify } => prototypes(*i, *verify, &g),
        Command::CircuitsCensus { n } => {
            let triples = count_intersecting_triples(*n)?;
            let tetra = count_tetrahedron_circuits(*n)?;
            let rect = count_rectangle_circuits(*n)?;
            let b3 = b3_via_circuits(*n)?;
            let text = format!(
                "intersecting triples: {triples}\ntetrahedron circuits: {tetra}\nrectangle circuits: {rect}\nb_3(A_{n}) = {b3}\n"
            );
            Ok(Outcome::ok(
                json!({
                    "n": dec(n),
                    "intersecting_triples": dec(&triples),
                    "tetrahedron_circuits": dec(&tetra),
                    "rectangle_circuits": dec(&rect),
                    "b3": dec(&b3),
                }),
                text,
            ))
        }
        Command::Embed { input, verify } => {
            let a = read_matrix(input)?;
            let e = embed(&a)?;
            let check = if *verify {
                let cert = verify_embedding(&e, &a)?;
                let minors = minor_matroid_check(&e, &a, 1 << 12, 0)?;
                Some((cert, minors))
            } else {
                None
            };
            let code = match &check {
                Some((cert, minors)) if !(cert.verified && *minors) => EXIT_INVARIANT,
                _ => EXIT_OK,
            };
            let json = certificate::to_json(&e, check.as_ref().map(|(c, m)| (c, *m)));
            let text = certificate::to_text(&e, check.as_ref().map(|(c, m)| (c, *m)));
            Ok(Outcome { json, text, code })
        }
        Command::VerifyEmbed { input, certificate } => {
            let a = read_matrix(input)?;
            let raw = fs::read_to_string(certificate)
                .map_err(|e| usage(format!("cannot read {}: {e}", certificate.display())))?;
            let value: Value =
                serde_json::from_str(&raw).map_err(|e| usage(format!("certificate is not JSON: {e}")))?;
            let e = certificate::from_json(&value).map_err(usage)?;
            let verified = match verify_embedding(&e, &a) {
                Ok(cert) => cert.verified && minor_matroid_check(&e, &a, 1 << 12, 0)?,
                Err(Error::ZeroPivot { .. }) => false,
                Err(err) => return Err(err.into()),
            };
            Ok(Outcome {
                json: json!({ "verified": verified }),
                text: format!("verified: {verified}\n"),
                code: if verified { EXIT_OK } else { EXIT_INVARIANT },
            })
        }
        Command::Table1 { n_max, i_max } => {
            let cells = table1_report(*n_max, *i_max, &g)?;
            let mismatch = cells.iter().any(|c| c.status == CellStatus::Mismatch);
            Ok(Outcome {
                json: table1::to_json(&cells),
                text: table1::to_text(&cells),
                code: if mismatch { EXIT_INVARIANT } else { EXIT_OK },
            })
        }
    }
}

/// `b_i(A_n)` from the closed formulas: `1`, `2^n − 1`, `b2_closed`, `b3_closed`.
pub fn closed_form(n: usize, i: usize) -> Result<BigUint, Failure> {
    match i {
        0 => Ok(BigUint::from(1u32)),
        1 => Ok((BigUint::from(1u32) << n) - 1u32),
        2 => Ok(b2_closed(n)?),
        3 => Ok(b3_closed(n)?),
        _ => Err(usage(format!("no closed form for b_{i}"))),
    }
}

fn read_matrix(path: &PathBuf) -> Result<Vec<Vec<i64>>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_matrix(&text)?)
}

fn fit_coeffs(i: usize, values: &Option<Vec<String>>) -> Result<Outcome, Failure> {
    let values: Vec<BigUint> = match values {
        Some(vs) => vs
            .iter()
            .map(|v| v.trim().parse::<BigUint>().map_err(|_| usage(format!("bad value {v:?}"))))
            .collect::<Result<_, _>>()?,
        None => {
            let golden = Golden::embedded();
            let row = golden
                .betti_row(i)
                .ok_or_else(|| usage(format!("Table 1 has no row b_{i}")))?;
            row.iter()
                .take(1 << i)
                .map(|v| v.clone().ok_or_else(|| usage(format!("Table 1 row b_{i} is incomplete"))))
                .collect::<Result<_, _>>()?
        }
    };
    let c = fit_stirling_coeffs(i, &values)?;
    Ok(Outcome::ok(combination_json(&c), format!("b_{i}(A_n) = {c}\n")))
}

fn combination_json(c: &StirlingCombination) -> Value {
    let map: serde_json::Map<String, Value> =
        c.coeffs.iter().map(|(k, v)| (k.to_string(), dec(v))).collect();
    json!({ "i": dec(c.i), "coeffs": Value::Object(map) })
}

fn prototypes(i: usize, verify: bool, g: &Guards) -> Result<Outcome, Failure> {
    let counts = functional_counts(i, g)?;
    let c = coefficients(i, g)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (&k, &f) in &counts {
        let total = resonance::prototype::prototype_count(i, k);
        writeln!(text, "k = {k}: {f} functional of {total}, c = {}", c.get(k)).unwrap();
        rows.push(json!({ "k": dec(k), "functional": dec(f), "total": dec(&total), "c": dec(c.get(k)) }));
    }
    writeln!(text, "b_{i}(A_n) = {c}").unwrap();
    let mut json = json!({ "i": dec(i), "by_k": rows, "combination": combination_json(&c) });
    let mut code = EXIT_OK;
    if verify {
        // nbc counts up to n = 6 where the guards allow
        let mut checked = Vec::new();
        for n in i..=6 {
            if g.check_nbc(n, i).is_err() {
                break;
            }
            let nbc = BigUint::from(nbc_face_counts(n, i)?[i]);
            let formula = c.eval(n);
            let ok = nbc == formula;
            if !ok {
                code = EXIT_INVARIANT;
            }
            writeln!(text, "n = {n}: formula {formula}, nbc {nbc} {}", if ok { "MATCH" } else { "MISMATCH" }).unwrap();
            checked.push(json!({ "n": dec(n), "formula": dec(&formula), "nbc": dec(&nbc), "match": ok }));
        }
        json["verify"] = Value::Array(checked);
    }
    Ok(Outcome { json, text, code })
}
