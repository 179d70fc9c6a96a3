use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use qcalc::gaussian::parse_ratio;
use qcalc::hermite::{hermite_classical, q_hermite, q_hermite_inverse};
use qcalc::identities::{verify_many, VerifyParams, IDENTITY_IDS};
use qcalc::json::{mpoly_to_json, verdict_to_json, wave_from_json, wave_to_json};
use qcalc::qnum::q_int;
use qcalc::qwave::{
    dalembert_solve, direct_binomial, qwave_operator, sample_grid, write_csv, GridRange,
    InitialData, NamedWave, Profile, Sign,
};
use qcalc::{CoefExpr, Error, GaussianRational, MPoly, Speed};

/// Exact q-calculus: identity checks, q-Hermite polynomials and the q-wave equation.
#[derive(Parser, Debug)]
#[command(name = "qcalc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify identities exactly and print the verdicts as a JSON array.
    Verify {
        /// Identity id, or `all`.
        #[arg(long)]
        identity: String,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long, default_value_t = 20)]
        order: u32,
        /// Draw the rational q samples and the numeric speed from this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve the q-wave initial value problem and print the solution as JSON.
    Solve {
        /// Coefficients of f, low degree first, e.g. "0,0,1".
        #[arg(long, conflicts_with = "f_named", required_unless_present = "f_named")]
        f: Option<String>,
        #[arg(long)]
        f_named: Option<String>,
        /// Coefficients of g, low degree first.
        #[arg(long, conflicts_with = "g_named", required_unless_present = "g_named")]
        g: Option<String>,
        /// cos_q, sin_q, q-gaussian or neg-2q-cx (the profile -[2]_q c x).
        #[arg(long)]
        g_named: Option<String>,
        /// Rational speed, or `c` to keep it symbolic.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Truncation order for named series profiles.
        #[arg(long, default_value_t = 16)]
        order: u32,
        /// Re-check the wave residual and refuse to print a non-solution.
        #[arg(long)]
        check: bool,
    },
    /// Sample a solution on a grid and write CSV.
    Sample {
        /// Solution JSON file, or `-` for stdin.
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// start:end:step
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// start:end:step
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print a Hermite polynomial as JSON.
    Hermite {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Kind::Q)]
        kind: Kind,
    },
    /// Expand (x - ct)_q^n or (x + ct)_q^n and print it as JSON.
    Expand {
        /// `x-ct` or `x+ct`.
        #[arg(long)]
        binomial: String,
        #[arg(long)]
        n: u32,
        /// Rational speed; symbolic when omitted.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Q,
    Classical,
    InverseQ,
}

/// Failure with the process exit code it maps to.
enum Failure {
    /// A checked identity or postcondition did not hold.
    Violated(String),
    /// Bad usage, bad input or I/O.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Postcondition(_) => Failure::Violated(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<ExitCode, Failure>;

fn print_json(v: &Value) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn parse_coef(text: &str) -> Result<CoefExpr, Failure> {
    Ok(CoefExpr::from(GaussianRational::real(parse_ratio(text)?)))
}

fn parse_speed(text: &str) -> Result<Speed, Failure> {
    let text = text.trim();
    if text == "c" || text == "symbolic" {
        return Ok(Speed::Symbolic);
    }
    let c = parse_coef(text)?;
    if c.is_zero() {
        return Err(Failure::Usage("the speed c must be nonzero".into()));
    }
    Ok(Speed::Value(c))
}

/// A float given as a decimal or as `p/r`.
fn parse_real(text: &str) -> Result<f64, Failure> {
    let text = text.trim();
    if let Ok(v) = text.parse::<f64>() {
        return Ok(v);
    }
    let r = parse_ratio(text)?;
    let v = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN)
        / r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    Ok(v)
}

fn parse_profile(
    list: Option<&str>,
    named: Option<&str>,
    speed: &Speed,
    order: u32,
) -> Result<Profile, Failure> {
    if let Some(list) = list {
        let coeffs = list
            .split(',')
            .map(parse_coef)
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Profile::from_coeffs(&coeffs));
    }
    let name = named.expect("clap requires one of the two");
    if name == "neg-2q-cx" {
        let two = -CoefExpr::from(q_int(2));
        return Ok(Profile::Poly(match speed {
            Speed::Symbolic => {
                let mut p = MPoly::zero(&["x", "c"]);
                p.add_term(vec![1, 1], two);
                p
            }
            Speed::Value(c) => {
                let mut p = MPoly::zero(&["x"]);
                p.add_term(vec![1], &two * c);
                p
            }
        }));
    }
    let wave: NamedWave = name.parse()?;
    Ok(Profile::from_series(&wave.series(order)))
}

fn random_positive_ratio(rng: &mut ChaCha8Rng) -> String {
    loop {
        let p: u32 = rng.gen_range(1..=12);
        let r: u32 = rng.gen_range(1..=12);
        if p != r {
            return format!("{p}/{r}");
        }
    }
}

fn cmd_verify(identity: &str, n_max: u32, order: u32, seed: Option<u64>) -> CliResult {
    let ids: Vec<&str> = if identity == "all" {
        IDENTITY_IDS.to_vec()
    } else if IDENTITY_IDS.contains(&identity) {
        vec![identity]
    } else {
        return Err(Failure::Usage(format!(
            "unknown identity `{identity}`; expected one of {} or all",
            IDENTITY_IDS.join(", ")
        )));
    };
    let mut params = VerifyParams {
        n_max,
        order,
        ..VerifyParams::default()
    };
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        params.q_samples = (0..3)
            .map(|_| parse_ratio(&random_positive_ratio(&mut rng)))
            .collect::<Result<_, _>>()?;
        let sign = if rng.gen_bool(0.5) { "-" } else { "" };
        params.speed = Speed::Value(parse_coef(&format!(
            "{sign}{}",
            random_positive_ratio(&mut rng)
        ))?);
    }
    let verdicts = verify_many(&ids, &params)?;
    print_json(&Value::Array(
        verdicts.iter().map(verdict_to_json).collect(),
    ))?;
    Ok(if verdicts.iter().all(|v| v.is_verified()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_solve(
    f: Option<&str>,
    f_named: Option<&str>,
    g: Option<&str>,
    g_named: Option<&str>,
    c: &str,
    order: u32,
    check: bool,
) -> CliResult {
    let speed = parse_speed(c)?;
    let data = InitialData {
        f: parse_profile(f, f_named, &speed, order)?,
        g: parse_profile(g, g_named, &speed, order)?,
    };
    let u = dalembert_solve(&data, &speed)?;
    if check {
        let residual = qwave_operator(&u);
        if !residual.is_zero() {
            return Err(Failure::Violated(format!(
                "wave residual is nonzero: {residual}"
            )));
        }
    }
    print_json(&wave_to_json(&u))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(
    input: &str,
    q: &str,
    c: &str,
    x: &str,
    t: &str,
    output: Option<&PathBuf>,
) -> CliResult {
    let q = parse_real(q)?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(Failure::Usage(format!("q must be positive, got {q}")));
    }
    let c = parse_real(c)?;
    let x: GridRange = x.parse()?;
    let t: GridRange = t.parse()?;
    let mut text = String::new();
    if input == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        File::open(input)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| Failure::Usage(format!("{input}: {e}")))?;
    }
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{input}: {e}")))?;
    let u = wave_from_json(&value)?;
    let rows = sample_grid(&u, q, c, &x, &t)?;
    match output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_csv(&rows, &mut w)?;
            w.flush()?;
        }
        None => write_csv(&rows, BufWriter::new(io::stdout().lock()))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_hermite(n: u32, kind: Kind) -> CliResult {
    let h = match kind {
        Kind::Q => q_hermite(n),
        Kind::Classical => hermite_classical(n),
        Kind::InverseQ => q_hermite_inverse(n),
    };
    print_json(&mpoly_to_json(&h))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_expand(binomial: &str, n: u32, c: Option<&str>) -> CliResult {
    let compact: String = binomial.chars().filter(|ch| !ch.is_whitespace()).collect();
    let sign = match compact.as_str() {
        "x-ct" => Sign::Minus,
        "x+ct" => Sign::Plus,
        _ => {
            return Err(Failure::Usage(format!(
                "binomial must be `x-ct` or `x+ct`, got `{binomial}`"
            )))
        }
    };
    let speed = match c {
        Some(c) => parse_speed(c)?,
        None => Speed::Symbolic,
    };
    print_json(&mpoly_to_json(&direct_binomial(n, sign, &speed).body))?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Verify {
            identity,
            n_max,
            order,
            seed,
        } => cmd_verify(&identity, n_max, order, seed),
        Command::Solve {
            f,
            f_named,
            g,
            g_named,
            c,
            order,
            check,
        } => cmd_solve(
            f.as_deref(),
            f_named.as_deref(),
            g.as_deref(),
            g_named.as_deref(),
            &c,
            order,
            check,
        ),
        Command::Sample {
            input,
            q,
            c,
            x,
            t,
            output,
        } => cmd_sample(&input, &q, &c, &x, &t, output.as_ref()),
        Command::Hermite { n, kind } => cmd_hermite(n, kind),
        Command::Expand { binomial, n, c } => cmd_expand(&binomial, n, c.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Violated(msg)) => {
            eprintln!("qcalc: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("qcalc: {msg}");
            ExitCode::from(2)
        }
    }
}
