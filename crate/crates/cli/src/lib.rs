//! Command-line front end. [`dispatch`] parses arguments, runs one
//! subcommand and returns the process exit code:
//!
//! * `0`: every check passed,
//! * `1`: a mathematical check failed,
//! * `2`: usage, parse or input error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pgrl::abelgrp::{abelian_type, omega_index_check, verbal_w_index};
use pgrl::bounds::bound_table;
use pgrl::group::FiniteMatrixGroup;
use pgrl::isotropy::{max_isotropic_dim, random_form_search};
use pgrl::matalg::{generate_algebra, MatAlgebra};
use pgrl::nilring::{basis_commutators_check, kernel_exponent_check, quotient_type_check};
use pgrl::textfmt::{parse_form, parse_matrices};
use pgrl::verifier::{
    build_d16_power_evidence, build_example_semidirect, build_pattern_group, sanity_suite,
    sylow_frattini_check, Report,
};
use pgrl::zeroideal::{extract_zero_ideal, verify_certificate, CertificateReport, ZeroIdealCertificate};
use pgrl::{Error, DEFAULT_ENUM_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the enumeration cap.
pub const CAP_ENV: &str = "PGRL_MAX_ENUM";

#[derive(Parser, Debug)]
#[command(name = "pgrl", version, about = "Exact computations with p-groups and matrix algebras over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct JsonOut {
    /// Write the JSON report to this path (`-` for standard output).
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract a square-zero ideal of small codimension from a commutative algebra.
    ZeroIdeal {
        #[arg(long, value_name = "FILE")]
        gens: PathBuf,
        /// Adjoin the identity when generating the algebra.
        #[arg(long)]
        unital: bool,
        /// Check a certificate instead of computing one.
        #[arg(long, value_name = "CERT")]
        verify: Option<PathBuf>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Generate the matrix algebra spanned by products of the generators.
    Closure {
        #[arg(long, value_name = "FILE")]
        gens: PathBuf,
        #[arg(long)]
        unital: bool,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Compare |A : Omega_1(O_p(A))| with p^n for an abelian matrix group.
    OmegaIndex {
        #[arg(long, value_name = "FILE")]
        gens: PathBuf,
        /// Expected characteristic; must match the file.
        #[arg(long)]
        p: Option<u32>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Invariant factors of an abelian matrix group.
    AbelianType {
        #[arg(long, value_name = "FILE")]
        gens: PathBuf,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Index of the verbal subgroup for x^(p^2)[y,z].
    VerbalIndex {
        #[arg(long, value_name = "FILE")]
        gens: PathBuf,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Check the group 1 + S built from an alternating form.
    BuildGroup {
        #[arg(long, value_name = "FILE")]
        form: PathBuf,
        #[arg(long, value_enum, default_value_t = GroupCheck::All)]
        check: GroupCheck,
        /// Random samples for the exponent check.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Totally isotropic subspaces: random form search or a single form.
    Isotropy(IsotropyArgs),
    /// Rebuild an example family and compare formulas with enumeration.
    Verify {
        #[command(subcommand)]
        family: Family,
    },
    /// Exact values of the rank bounds.
    Bounds {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        out: JsonOut,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum GroupCheck {
    All,
    Commutators,
    Exponent,
    Quotient,
}

#[derive(Args, Debug)]
struct IsotropyArgs {
    #[arg(long, conflicts_with = "form", required_unless_present = "form")]
    n: Option<usize>,
    #[arg(long, conflicts_with = "form", required_unless_present = "form")]
    k: Option<usize>,
    #[arg(long, conflicts_with = "form", required_unless_present = "form")]
    p: Option<u32>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Re-derive the best form's value by checking every subspace.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, value_name = "FILE", requires = "max_dim")]
    form: Option<PathBuf>,
    /// With --form: report the maximum isotropic dimension.
    #[arg(long)]
    max_dim: bool,
    #[command(flatten)]
    out: JsonOut,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// V x| H with d(V1 x H) = m^2 + m.
    Semidirect {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Pattern group with Phi(G) = G' = Z(G).
    Pattern {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        out: JsonOut,
    },
    /// d(Phi(UT(n, p))).
    SylowFrattini {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Elementary abelian subgroups of D16 and D16 x D16.
    D16 {
        #[command(flatten)]
        out: JsonOut,
    },
    /// Every family plus bound checks on every instance.
    All {
        #[command(flatten)]
        out: JsonOut,
    },
}

/// A failure that maps to an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalInvariantViolation(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

/// Output sink: text goes to `stdout`, JSON to the `--json` target.
struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit<T: Serialize>(&mut self, out: &JsonOut, value: &T, text: &str) -> std::result::Result<(), Failure> {
        let json = serde_json::to_string_pretty(value).expect("reports serialize");
        match out.json.as_deref() {
            Some(p) if p == Path::new("-") => {
                writeln!(self.stdout, "{json}").map_err(io_failure)?;
            }
            Some(p) => {
                fs::write(p, format!("{json}\n"))
                    .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                write!(self.stdout, "{text}").map_err(io_failure)?;
            }
            None => write!(self.stdout, "{text}").map_err(io_failure)?,
        }
        Ok(())
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn enum_cap() -> std::result::Result<usize, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| Failure::Usage(format!("{CAP_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn load_algebra(gens: &Path, unital: bool) -> std::result::Result<MatAlgebra, Failure> {
    let mats = parse_matrices(&read(gens)?)?;
    Ok(generate_algebra(&mats, unital)?)
}

fn load_group(gens: &Path) -> std::result::Result<FiniteMatrixGroup, Failure> {
    let mats = parse_matrices(&read(gens)?)?;
    Ok(FiniteMatrixGroup::from_generators(mats)?.with_cap(enum_cap()?))
}

/// Runs the command line `argv` (including the program name), writing to the
/// given streams.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    let mut io = Io { stdout, stderr };
    match execute(cli.command, &mut io) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(io.stderr, "check failed: {msg}");
            EXIT_CHECK_FAILED
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

/// [`run`] on the process's standard streams.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn execute(cmd: Command, io: &mut Io) -> Outcome {
    match cmd {
        Command::ZeroIdeal {
            gens,
            unital,
            verify,
            out,
        } => zero_ideal(&gens, unital, verify.as_deref(), &out, io),
        Command::Closure { gens, unital, out } => closure(&gens, unital, &out, io),
        Command::OmegaIndex { gens, p, out } => omega_index(&gens, p, &out, io),
        Command::AbelianType { gens, out } => {
            let g = load_group(&gens)?;
            let t = abelian_type(&g)?;
            let report = TypeReport {
                order: g.order()?,
                r#type: t.to_string(),
                factors: t.factors.clone(),
            };
            io.emit(&out, &report, &format!("order {}\ntype {}\n", report.order, report.r#type))?;
            Ok(true)
        }
        Command::VerbalIndex { gens, out } => {
            let g = load_group(&gens)?;
            let report = VerbalReport {
                order: g.order()?,
                index: verbal_w_index(&g)?,
            };
            io.emit(&out, &report, &format!("order {}\nindex {}\n", report.order, report.index))?;
            Ok(true)
        }
        Command::BuildGroup {
            form,
            check,
            samples,
            seed,
            out,
        } => build_group(&form, check, samples, seed, &out, io),
        Command::Isotropy(args) => isotropy(args, io),
        Command::Verify { family } => verify(family, io),
        Command::Bounds { k, n, out } => {
            let t = bound_table(k, n)?;
            let mut text = String::new();
            for e in &t.entries {
                text.push_str(&format!("{:<28} {:>8}   {}\n", e.name, e.value, e.statement));
            }
            if let Some(c) = &t.aut_chain {
                text.push_str(&format!(
                    "aut chain: {} = {} <= {}  ({})\n",
                    c.left,
                    c.middle,
                    c.right,
                    if c.left_equals_middle && c.middle_at_most_right { "ok" } else { "FAILED" }
                ));
            }
            if let Some(f) = t.form_condition {
                text.push_str(&format!("k(k-1) > 2n: {f}\n"));
            }
            io.emit(&out, &t, &text)?;
            Ok(t.ok())
        }
    }
}

#[derive(Serialize)]
struct ClosureReport {
    n: usize,
    p: u32,
    dim: usize,
    unital: bool,
    commutative: bool,
    dim_ker: usize,
    basis: Vec<Vec<Vec<u32>>>,
}

#[derive(Serialize)]
struct OmegaReport {
    order: usize,
    r#type: String,
    index: usize,
    bound: Option<String>,
    ok: bool,
}

#[derive(Serialize)]
struct TypeReport {
    order: usize,
    r#type: String,
    factors: Vec<pgrl::abelgrp::CyclicFactor>,
}

#[derive(Serialize)]
struct VerbalReport {
    order: usize,
    index: usize,
}

#[derive(Serialize)]
struct VerifyReport {
    ok: bool,
}

#[derive(Serialize)]
struct GroupReport {
    p: u32,
    r: u32,
    n: usize,
    k: usize,
    check: GroupCheck,
    seed: u64,
    samples: u64,
    commutators: Option<bool>,
    exponent: Option<bool>,
    quotient: Option<bool>,
    ok: bool,
}

#[derive(Serialize)]
struct MaxDimReport {
    p: u32,
    n: usize,
    k: usize,
    max_isotropic_dim: usize,
    witness: Vec<Vec<u32>>,
}

fn matrix_rows(m: &pgrl::Matrix) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn zero_ideal(gens: &Path, unital: bool, verify: Option<&Path>, out: &JsonOut, io: &mut Io) -> Outcome {
    let alg = load_algebra(gens, unital)?;
    if let Some(cert_path) = verify {
        let report: CertificateReport = serde_json::from_str(&read(cert_path)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", cert_path.display())))?;
        let ok = match ZeroIdealCertificate::from_report(&report) {
            Ok(cert) => verify_certificate(&alg, &cert),
            // A certificate whose basis is not even a matrix span cannot verify.
            Err(Error::Shape(_)) | Err(Error::ModulusNotPrime(_)) | Err(Error::InvalidModulus(_)) => false,
            Err(e) => return Err(e.into()),
        };
        io.emit(out, &VerifyReport { ok }, &format!("certificate {}\n", if ok { "valid" } else { "INVALID" }))?;
        if !ok {
            let _ = writeln!(io.stderr, "certificate does not verify against {}", gens.display());
        }
        return Ok(ok);
    }
    let (_, cert) = extract_zero_ideal(&alg)?;
    let report = cert.report(&alg);
    let ok = report.checks.ideal && report.checks.square_zero && report.checks.bound;
    let text = format!(
        "n {} p {} dim_A {} k {}\nsteps {}\ndim_B {} codim {} (bound {})\nideal {} square_zero {} bound {}\n",
        report.n,
        report.p,
        report.dim_a,
        report.k,
        report.steps.len(),
        report.dim_b,
        report.codim,
        report.n - report.k,
        report.checks.ideal,
        report.checks.square_zero,
        report.checks.bound
    );
    io.emit(out, &report, &text)?;
    Ok(ok)
}

fn closure(gens: &Path, unital: bool, out: &JsonOut, io: &mut Io) -> Outcome {
    let alg = load_algebra(gens, unital)?;
    let report = ClosureReport {
        n: alg.n(),
        p: alg.modulus().get(),
        dim: alg.dim(),
        unital: alg.unital(),
        commutative: alg.is_commutative(),
        dim_ker: alg.common_kernel().dim(),
        basis: alg.basis().iter().map(matrix_rows).collect(),
    };
    let text = format!(
        "dim {}\nunital {}\ncommutative {}\ndim_ker {}\n",
        report.dim, report.unital, report.commutative, report.dim_ker
    );
    io.emit(out, &report, &text)?;
    Ok(true)
}

fn omega_index(gens: &Path, p: Option<u32>, out: &JsonOut, io: &mut Io) -> Outcome {
    let g = load_group(gens)?;
    if let Some(p) = p {
        if p != g.modulus().get() {
            return Err(Failure::Usage(format!(
                "--p {p} does not match the modulus {} of the generators",
                g.modulus()
            )));
        }
    }
    let r = omega_index_check(&g)?;
    let t = abelian_type(&g)?;
    let report = OmegaReport {
        order: r.order,
        r#type: t.to_string(),
        index: r.index,
        bound: r.bound.map(|b| b.to_string()),
        ok: r.bound_ok,
    };
    let text = format!(
        "order {}\ntype {}\nindex {}\nbound {}\nok {}\n",
        report.order,
        report.r#type,
        report.index,
        report.bound.as_deref().unwrap_or("overflow"),
        report.ok
    );
    io.emit(out, &report, &text)?;
    Ok(report.ok)
}

fn build_group(form: &Path, check: GroupCheck, samples: u64, seed: u64, out: &JsonOut, io: &mut Io) -> Outcome {
    let f = parse_form(&read(form)?)?;
    let want = |c| check == GroupCheck::All || check == c;
    let commutators = want(GroupCheck::Commutators).then(|| basis_commutators_check(&f));
    let exponent = want(GroupCheck::Exponent).then(|| kernel_exponent_check(&f, samples, seed));
    let quotient = want(GroupCheck::Quotient).then(|| quotient_type_check(&f));
    let ok = [commutators, exponent, quotient].iter().all(|c| c.unwrap_or(true));
    let report = GroupReport {
        p: f.p(),
        r: f.r(),
        n: f.n(),
        k: f.k(),
        check,
        seed,
        samples,
        commutators,
        exponent,
        quotient,
        ok,
    };
    let show = |c: Option<bool>| c.map_or("skipped".to_string(), |b| b.to_string());
    let text = format!(
        "p {} r {} n {} k {}\nseed {}\ncommutators {}\nexponent {}\nquotient {}\n",
        report.p,
        report.r,
        report.n,
        report.k,
        seed,
        show(commutators),
        show(exponent),
        show(quotient)
    );
    io.emit(out, &report, &text)?;
    Ok(ok)
}

fn isotropy(a: IsotropyArgs, io: &mut Io) -> Outcome {
    if let Some(path) = &a.form {
        let f = parse_form(&read(path)?)?;
        let (d, w) = max_isotropic_dim(&f)?;
        let report = MaxDimReport {
            p: f.p(),
            n: f.n(),
            k: f.k(),
            max_isotropic_dim: d,
            witness: w.basis().to_vec(),
        };
        io.emit(&a.out, &report, &format!("max_isotropic_dim {d}\n"))?;
        return Ok(true);
    }
    let (n, k, p) = match (a.n, a.k, a.p) {
        (Some(n), Some(k), Some(p)) => (n, k, p),
        _ => return Err(Failure::Usage("--n, --k and --p are required without --form".into())),
    };
    let r = random_form_search(n, k, p, a.trials, a.seed, a.exhaustive)?;
    let text = format!(
        "n {n} k {k} p {p}\nseed {}\ntrials {}\nbest_max_isotropic_dim {}\nsuccess {}\n",
        r.seed,
        r.trials,
        r.best_max_isotropic_dim.map_or("none".into(), |d| d.to_string()),
        r.success
    );
    io.emit(&a.out, &r, &text)?;
    // Success of the search is reported, not required; only an exhaustive
    // re-check that disagrees is a failure.
    Ok(r.exhaustive_confirmed != Some(false))
}

fn report_text(r: &Report) -> String {
    let mut s = String::new();
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    s.push_str(&format!("{} {}\n", r.family, params.join(" ")));
    for c in &r.checks {
        let rel = match c.relation {
            pgrl::verifier::Relation::Equal => "=",
            pgrl::verifier::Relation::AtMost => "<=",
            pgrl::verifier::Relation::Holds => "holds",
            pgrl::verifier::Relation::Reported => "(reported)",
        };
        s.push_str(&format!(
            "  [{}] {}: measured {} {} {}\n",
            if c.ok { "ok" } else { "FAIL" },
            c.name,
            c.measured,
            rel,
            c.expected
        ));
    }
    s
}

fn finish_reports(reports: &[Report], out: &JsonOut, io: &mut Io) -> Outcome {
    let ok = reports.iter().all(|r| r.ok);
    let text: String = reports.iter().map(report_text).collect();
    if reports.len() == 1 {
        io.emit(out, &reports[0], &text)?;
    } else {
        #[derive(Serialize)]
        struct All<'a> {
            reports: &'a [Report],
            ok: bool,
        }
        io.emit(out, &All { reports, ok }, &text)?;
    }
    if !ok {
        for r in reports {
            for c in r.checks.iter().filter(|c| !c.ok) {
                let diff = serde_json::to_string(c).expect("serializes");
                let _ = writeln!(io.stderr, "{}: {diff}", r.family);
            }
        }
    }
    Ok(ok)
}

fn verify(family: Family, io: &mut Io) -> Outcome {
    let cap = enum_cap()?;
    match family {
        Family::Semidirect { m, p, out } => {
            finish_reports(&[build_example_semidirect(m, p, cap)?.report], &out, io)
        }
        Family::Pattern { n, p, out } => finish_reports(&[build_pattern_group(n, p, cap)?.report], &out, io),
        Family::SylowFrattini { n, p, out } => {
            finish_reports(&[sylow_frattini_check(n, p, cap)?.report], &out, io)
        }
        Family::D16 { out } => finish_reports(&[build_d16_power_evidence()?.report], &out, io),
        Family::All { out } => finish_reports(&sanity_suite(cap)?.reports, &out, io),
    }
}
