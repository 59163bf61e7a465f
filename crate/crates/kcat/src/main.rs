use clap::{Parser, Subcommand, ValueEnum};
use kcat::alcove::Alcove;
use kcat::character::bott_samelson_char;
use kcat::kobj::split::{identify, multiplicity_table, split, SplitOptions};
use kcat::kobj::{bott_samelson, engine_char};
use kcat::root_datum::{DatumName, RootDatum};
use kcat::scalar::Field;
use kcat::symbolic::Ring;
use kcat::verify::{run_suite, VerifyConfig, SUITES};
use kcat::Error;
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kcat", version, about = "Alcove combinatorics, characters and graded objects for rank <= 2 root data")]
struct Cli {
    /// A1, A1xA1, A2, B2 or G2. A leading positional datum overrides this.
    #[arg(long, global = true, default_value = "A1")]
    datum: String,
    /// Characteristic of the coefficient field, 0 for the rationals.
    #[arg(short = 'p', long = "char-p", global = true, default_value_t = 0)]
    char_p: u64,
    /// Largest |degree| checked by Hom-dimension suites.
    #[arg(long, global = true, default_value_t = 6)]
    dmax: i32,
    /// Radius of alcove balls and weight boxes.
    #[arg(long, global = true, default_value_t = 2)]
    radius: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Alcove queries: coords, leq, up, down, box, orbit, dist, length.
    Alcove {
        op: AlcoveOp,
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
    },
    /// Character of Q_lambda * B_s1 * ... * B_sl: `char [DATUM] LAMBDA [WORD]`.
    Char {
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
    },
    /// Indecomposable summands of Q_lambda * B_s1 * ... * B_sl: `decompose [DATUM] LAMBDA [WORD]`.
    Decompose {
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
    },
    /// Ranks of Q(A) at A' for A, A' in the ball of the given radius: `mult-table [DATUM]`.
    MultTable { args: Vec<String> },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlcoveOp {
    Coords,
    Leq,
    Up,
    Down,
    Box,
    Orbit,
    Dist,
    Length,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn parse_ints(s: &str) -> Res<Vec<i64>> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    t.split(|c| c == ',' || c == ' ')
        .filter(|x| !x.is_empty())
        .map(|x| x.trim().parse::<i64>().map_err(|_| Failure::Lib(Error::Parse(format!("not an integer list: `{s}`")))))
        .collect()
}

/// Splits off a leading datum name.
fn datum_and_rest(cli: &Cli, args: &[String]) -> Res<(DatumName, Vec<String>)> {
    if let Some(first) = args.first() {
        if let Ok(n) = DatumName::parse(first) {
            return Ok((n, args[1..].to_vec()));
        }
    }
    Ok((DatumName::parse(&cli.datum)?, args.to_vec()))
}

fn ring(cli: &Cli, n: DatumName) -> Res<Ring> {
    if cli.dmax <= 0 || cli.radius == 0 {
        return Err(Failure::Usage("--dmax and --radius must be positive".into()));
    }
    Ok(Ring::new(RootDatum::build(n), Field::new(cli.char_p))?)
}

fn alcove(d: &RootDatum, s: &str) -> Res<Alcove> {
    let k = parse_ints(s)?;
    if k.len() != d.npos {
        return Err(Failure::Lib(Error::Parse(format!("{} expects {} coordinates", d.name, d.npos))));
    }
    Ok(d.from_coords(&k)?)
}

fn weight(d: &RootDatum, s: &str) -> Res<Vec<i64>> {
    let w = parse_ints(s)?;
    if w.len() != d.rank {
        return Err(Failure::Lib(Error::Parse(format!("{} expects a weight with {} entries", d.name, d.rank))));
    }
    Ok(w)
}

fn arity(args: &[String], n: usize, usage: &str) -> Res<()> {
    if args.len() != n {
        return Err(Failure::Usage(format!("usage: {usage}")));
    }
    Ok(())
}

fn emit(cli: &Cli, text: String, j: Value) {
    let out = match cli.format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&j).expect("json"),
    };
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{out}");
}

fn cmd_alcove(cli: &Cli, op: AlcoveOp, args: &[String]) -> Res<()> {
    let (n, args) = datum_and_rest(cli, args)?;
    let r = ring(cli, n)?;
    let d = &r.d;
    let coords = |a: &Alcove| d.coords(a);
    match op {
        AlcoveOp::Coords => {
            arity(&args, 1, "alcove coords [DATUM] A")?;
            let a = alcove(d, &args[0])?;
            let j = json!({"coords": coords(&a), "length": d.length(&a), "box": d.box_of(&a)});
            emit(cli, format!("coords {:?} length {} box {:?}", coords(&a), d.length(&a), d.box_of(&a)), j);
        }
        AlcoveOp::Leq | AlcoveOp::Dist => {
            arity(&args, 2, "alcove leq|dist [DATUM] A B")?;
            let (a, b) = (alcove(d, &args[0])?, alcove(d, &args[1])?);
            if matches!(op, AlcoveOp::Leq) {
                let x = d.leq(&a, &b);
                emit(cli, x.to_string(), json!(x));
            } else {
                let x = d.dist(&a, &b);
                emit(cli, x.to_string(), json!(x));
            }
        }
        AlcoveOp::Up | AlcoveOp::Down => {
            arity(&args, 2, "alcove up|down [DATUM] ROOT A")?;
            let root: usize = args[0].parse().map_err(|_| Failure::Lib(Error::Parse(format!("root index `{}`", args[0]))))?;
            if root >= d.npos {
                return Err(Failure::Lib(Error::Parse(format!("{} has {} positive roots", d.name, d.npos))));
            }
            let a = alcove(d, &args[1])?;
            let b = if matches!(op, AlcoveOp::Up) { d.up(root, &a) } else { d.down(root, &a) };
            emit(cli, format!("{:?}", coords(&b)), json!(coords(&b)));
        }
        AlcoveOp::Box => {
            arity(&args, 1, "alcove box [DATUM] A")?;
            let lam = d.box_of(&alcove(d, &args[0])?);
            emit(cli, format!("{:?}", lam), json!(lam));
        }
        AlcoveOp::Orbit => {
            arity(&args, 1, "alcove orbit [DATUM] LAMBDA")?;
            let orbit: Vec<Vec<i64>> = d.wlambda_orbit(&weight(d, &args[0])?)?.iter().map(coords).collect();
            let text: Vec<String> = orbit.iter().map(|k| format!("{:?}", k)).collect();
            emit(cli, text.join("\n"), json!(orbit));
        }
        AlcoveOp::Length => {
            arity(&args, 1, "alcove length [DATUM] A")?;
            let x = d.length(&alcove(d, &args[0])?);
            emit(cli, x.to_string(), json!(x));
        }
    }
    Ok(())
}

fn lambda_and_word(d: &RootDatum, args: &[String], usage: &str) -> Res<(Vec<i64>, Vec<kcat::alcove::FaceType>)> {
    if args.is_empty() || args.len() > 2 {
        return Err(Failure::Usage(format!("usage: {usage}")));
    }
    let lam = weight(d, &args[0])?;
    let word = match args.get(1) {
        Some(w) => d.parse_word(w).map_err(|e| Failure::Usage(e.to_string()))?,
        None => vec![],
    };
    Ok((lam, word))
}

fn cmd_char(cli: &Cli, args: &[String]) -> Res<()> {
    let (n, args) = datum_and_rest(cli, args)?;
    let r = ring(cli, n)?;
    let d = &r.d;
    let (lam, word) = lambda_and_word(d, &args, "char [DATUM] LAMBDA [WORD]")?;
    let c = bott_samelson_char(d, &lam, &word, 0)?;
    let j = c.to_json(d);
    let text: Vec<String> = j.as_array().expect("array").iter().map(|x| {
        let a = d.from_coords(&serde_json::from_value::<Vec<i64>>(x["alcove"].clone()).expect("coords")).expect("alcove");
        format!("{:?}\t{}", d.coords(&a), c.get(&a))
    }).collect();
    emit(cli, text.join("\n"), j);
    Ok(())
}

fn cmd_decompose(cli: &Cli, args: &[String]) -> Res<()> {
    let (n, args) = datum_and_rest(cli, args)?;
    let r = ring(cli, n)?;
    let d = &r.d;
    let (lam, word) = lambda_and_word(d, &args, "decompose [DATUM] LAMBDA [WORD]")?;
    let m = bott_samelson(&r, &lam, &word)?;
    let opts = SplitOptions { seed: SplitOptions::default().seed ^ cli.seed, ..Default::default() };
    let mut parts = vec![];
    for p in split(&r, &m, &opts)? {
        let (a, shift) = identify(&r, &p)?;
        parts.push((d.length(&a), d.coords(&a), shift, engine_char(&r, &p)?.to_json(d)));
    }
    parts.sort_by(|x, y| (x.0, &x.1, x.2).cmp(&(y.0, &y.1, y.2)));
    let text: Vec<String> = parts.iter().map(|(_, k, s, _)| format!("Q({:?})({})", k, s)).collect();
    let j = json!({
        "datum": n.to_string(),
        "lambda": lam,
        "word": d.word_names(&word),
        "summands": parts.iter().map(|(_, k, s, c)| json!({"alcove": k, "shift": s, "character": c})).collect::<Vec<_>>(),
    });
    emit(cli, format!("{} summands\n{}", parts.len(), text.join("\n")), j);
    Ok(())
}

fn cmd_mult_table(cli: &Cli, args: &[String]) -> Res<()> {
    let (n, args) = datum_and_rest(cli, args)?;
    arity(&args, 0, "mult-table [DATUM]")?;
    let r = ring(cli, n)?;
    let d = &r.d;
    let mut region = d.ball(cli.radius);
    d.sort_by_length(&mut region);
    let t = multiplicity_table(&r, &region, &SplitOptions::default())?;
    let labels: Vec<String> = region.iter().map(|a| format!("{:?}", d.coords(a))).collect();
    let mut text = vec![format!("rows: Q(A); columns: A'; order {}", labels.join(" "))];
    for (l, row) in labels.iter().zip(&t) {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        text.push(format!("{l}\t{}", cells.join(" ")));
    }
    let region_coords: Vec<Vec<i64>> = region.iter().map(|a| d.coords(a)).collect();
    emit(cli, text.join("\n"), json!({"datum": n.to_string(), "region": region_coords, "table": t}));
    Ok(())
}

fn cmd_verify(cli: &Cli, suite: &str) -> Res<()> {
    let r = ring(cli, DatumName::parse(&cli.datum)?)?;
    let cfg = VerifyConfig { dmax: cli.dmax, radius: cli.radius, seed: cli.seed };
    let suites: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Failure::Usage(format!("unknown suite `{suite}`; one of all, {}", SUITES.join(", "))));
    };
    let mut results = vec![];
    for s in suites {
        results.push(run_suite(&r, s, &cfg)?);
    }
    let text: Vec<String> = results
        .iter()
        .map(|x| match &x.witness {
            None => format!("PASS {} ({} cases)", x.suite, x.cases),
            Some(w) => format!("FAIL {} ({} cases): {w}", x.suite, x.cases),
        })
        .collect();
    emit(cli, text.join("\n"), json!(results));
    if results.iter().all(|x| x.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::UnknownDatum(_) | Error::UnknownFace(_) => 2,
        Error::InfeasibleCoords(_) | Error::NonIntegral(_) => 3,
        Error::Gkm { .. } => 4,
        Error::BoundExceeded(_) => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Alcove { op, args } => cmd_alcove(&cli, *op, args),
        Cmd::Char { args } => cmd_char(&cli, args),
        Cmd::Decompose { args } => cmd_decompose(&cli, args),
        Cmd::MultTable { args } => cmd_mult_table(&cli, args),
        Cmd::Verify { suite } => cmd_verify(&cli, suite),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => ExitCode::from(6),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
