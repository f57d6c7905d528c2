use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use finortho::approx::{project, Target};
use finortho::classical::{self, ParamsI, ParamsJ, ParamsM, ParamsN};
use finortho::incomplete::{PhiParams, PsiParams};
use finortho::numkernel::parse_rational;
use finortho::verify::{self, Status, Verdict, DEFAULT_GRAM_TOL, ORACLE_MEMBERS};
use finortho::{Family, Rational, RationalPoly, RealPoly};

mod render;

const EXIT_FAIL: u8 = 2;
const EXIT_PARAMETER: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 1;

#[derive(Parser)]
#[command(name = "finortho", version, about = "Finite and incomplete orthogonal polynomial families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one member of a family.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Closed-form norm squares for n = 0..=nmax.
    Norms {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        nmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Bound, maximum index and parameter conditions.
    Admissible {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Numerical and exact verification.
    Verify {
        #[arg(value_enum)]
        check: VerifyKind,
        #[command(flatten)]
        family: FamilyArgs,
        /// Defaults to the maximum index, truncated at 30.
        #[arg(long)]
        nmax: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_GRAM_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Weighted least-squares projection of a target function.
    Approx {
        #[command(flatten)]
        family: FamilyArgs,
        /// monomial:<j>, gauss:<j> (x^j e^{-x^2}), member:<n> or table:<csv path>
        #[arg(long)]
        target: String,
        #[arg(long)]
        nmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Gram,
    Ode,
    Oracle,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    #[value(name = "M", alias = "m")]
    M,
    #[value(name = "N", alias = "n")]
    N,
    #[value(name = "I", alias = "i")]
    I,
    #[value(name = "J", alias = "j")]
    J,
    Bessel,
    Phi,
    Psi,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    /// Do not require 2a to be an even integer for phi and psi.
    #[arg(long)]
    lenient: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(finortho::Error),
    Io(String),
}

impl From<finortho::Error> for CliError {
    fn from(e: finortho::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use finortho::Error as E;
        match self {
            CliError::Usage(_) | CliError::Core(E::Parse(_)) => EXIT_USAGE,
            CliError::Core(
                E::Parameter(_)
                | E::Admissibility(_)
                | E::Pole(_)
                | E::Divergence(_)
                | E::Realness { .. }
                | E::UnsupportedShape(_),
            ) => EXIT_PARAMETER,
            CliError::Core(_) | CliError::Io(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What the selected family resolves to.
enum Resolved {
    Family(Family),
    Bessel(Rational),
}

fn num(name: &str, v: &Option<String>) -> CliResult<Rational> {
    let raw = v.as_ref().ok_or_else(|| CliError::Usage(format!("missing --{name}")))?;
    parse_rational(raw).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

fn int(name: &str, v: Option<u32>) -> CliResult<u32> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{name}")))
}

impl FamilyArgs {
    fn resolve(&self) -> CliResult<Resolved> {
        let f = match self.family {
            FamilyKind::M => Family::M(ParamsM::new(num("p", &self.p)?, num("q", &self.q)?)),
            FamilyKind::N => Family::N(ParamsN::new(num("p", &self.p)?)),
            FamilyKind::I => Family::I(ParamsI::new(num("p", &self.p)?)),
            FamilyKind::J => Family::J(ParamsJ::new(num("p", &self.p)?, num("q", &self.q)?)),
            FamilyKind::Bessel => return Ok(Resolved::Bessel(num("alpha", &self.alpha)?)),
            FamilyKind::Phi => {
                let m = int("m", self.m)?;
                if m == 0 {
                    return Err(CliError::Usage("--m must be positive".into()));
                }
                let prm = PhiParams::new(num("a", &self.a)?, num("b", &self.b)?, m, int("r", self.r)?, int("s", self.s)?);
                Family::Phi(if self.lenient { prm.lenient() } else { prm })
            }
            FamilyKind::Psi => {
                let m = int("m", self.m)?;
                if m == 0 {
                    return Err(CliError::Usage("--m must be positive".into()));
                }
                let prm = PsiParams::new(num("a", &self.a)?, m, int("r", self.r)?, int("s", self.s)?);
                Family::Psi(if self.lenient { prm.lenient() } else { prm })
            }
        };
        Ok(Resolved::Family(f))
    }

    fn family(&self) -> CliResult<Family> {
        match self.resolve()? {
            Resolved::Family(f) => Ok(f),
            Resolved::Bessel(_) => Err(CliError::Core(finortho::Error::UnsupportedShape(
                "the Bessel family has no real weight; only gen is available".into(),
            ))),
        }
    }
}

/// Payload plus whether it represents a passing outcome.
struct Outcome {
    body: String,
    pass: bool,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, pass: true }
    }
}

fn read_table(path: &str) -> CliResult<Target> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Io(format!("{path}: {e}")))?;
        let parsed = (rec.get(0).map(str::parse::<f64>), rec.get(1).map(str::parse::<f64>));
        match parsed {
            (Some(Ok(x)), Some(Ok(y))) => rows.push((x, y)),
            // a header line
            _ if i == 0 => continue,
            _ => return Err(CliError::Usage(format!("{path}: row {} is not two numbers", i + 1))),
        }
    }
    Ok(Target::table(rows)?)
}

fn run(cli: Cli) -> CliResult<Outcome> {
    match cli.command {
        Command::Gen { family, n, format } => {
            let poly = match family.resolve()? {
                Resolved::Bessel(alpha) => PolyOut::Exact(classical::bessel_monic(n, &alpha)?),
                Resolved::Family(f) if f.has_exact_members() => PolyOut::Exact(f.member_exact(n)?),
                Resolved::Family(f) => PolyOut::Real(f.member_real(n)?),
            };
            Ok(Outcome::ok(render::poly(&poly, format)?))
        }
        Command::Norms { family, nmax, format } => {
            let f = family.family()?;
            if let Ok(top) = f.max_index() {
                if nmax > top {
                    eprintln!("warning: indices above {top} are outside the orthogonality range");
                }
            }
            let rows = (0..=nmax)
                .map(|n| Ok(render::NormRow::new(n, f.degree(n), f.norm(n)?)))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Outcome::ok(render::norms(&f, &rows, format)?))
        }
        Command::Admissible { family, format } => {
            let f = family.family()?;
            let report = render::AdmissibleReport::new(&f);
            let pass = report.max_index.is_some();
            Ok(Outcome { body: render::admissible(&report, format)?, pass })
        }
        Command::Verify { check, family, nmax, tol, format } => {
            let f = family.family()?;
            let n = || -> CliResult<u32> {
                Ok(match nmax {
                    Some(n) => n,
                    None => f.max_index()?.min(verify::DEFAULT_TRUNCATION),
                })
            };
            match check {
                VerifyKind::Gram => {
                    let g = verify::gram_matrix(&f, n()?, tol)?;
                    let pass = g.verdict == Verdict::Pass;
                    Ok(Outcome { body: render::gram(&g, format)?, pass })
                }
                VerifyKind::Ode => {
                    f.max_index()?;
                    let c = verify::check_ode(&f, n()?);
                    Ok(Outcome { pass: c.status != Status::Fail, body: render::check(&c, None, format)? })
                }
                VerifyKind::Oracle => {
                    let cmp = verify::oracle_comparisons(&f, ORACLE_MEMBERS)?;
                    let c = verify::check_oracle(&f, ORACLE_MEMBERS);
                    Ok(Outcome { pass: c.status != Status::Fail, body: render::check(&c, Some(&cmp), format)? })
                }
                VerifyKind::All => {
                    let r = verify::full_report(&f, nmax, tol);
                    Ok(Outcome { pass: r.verdict == Verdict::Pass, body: render::full(&r, format)? })
                }
            }
        }
        Command::Approx { family, target, nmax, format } => {
            let f = family.family()?;
            let t = match target.strip_prefix("table:") {
                Some(path) => read_table(path)?,
                None => Target::parse(&target, &f)?,
            };
            let p = project(&t, &f, nmax)?;
            if p.lower_accuracy {
                eprintln!("note: sampled-table target, quadrature tolerance relaxed");
            }
            if p.clamped {
                eprintln!("note: Parseval difference was negative and clamped to zero");
            }
            Ok(Outcome::ok(render::projection(&p, format)?))
        }
    }
}

pub enum PolyOut {
    Exact(RationalPoly),
    Real(RealPoly),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", out.body.trim_end());
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
