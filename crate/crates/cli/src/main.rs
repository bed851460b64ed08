//! `germlin`: command-line front end. Every verb prints (or writes) one JSON
//! report with the inputs echoed, so a report is enough to rerun the computation.
//!
//! Exit status: 0 for any mathematical verdict, 1 for domain errors, 2 for
//! malformed input, I/O failures and usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use germlin::centralizer::{centralizer_basis, centralizer_oracle, OracleKind};
use germlin::fixtures::fixture_set;
use germlin::io::{self, germ_to_json, matrix_to_json};
use germlin::jet::GermJet;
use germlin::linearizer::{average_linearization, embed_scalar, family_linearize, finite_order_test, linearize};
use germlin::potential::{bernstein_check, radius_lower_bound, random_points, CompactSet, GrowthCertificate};
use germlin::rings::{real, ExactComplex, MIN_PRECISION};
use germlin::smalldivisors::{bruno_check, golden_theta, liouville_theta, profile, silver_theta, torsion_compare};
use germlin::spectrum::{resonances, EigenSpec, Theta};
use germlin::{Error, Result};

const FORMAT_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "germlin", version, about = "Jet-level linearization of holomorphic germs")]
struct Cli {
    /// Jet order m.
    #[arg(long, global = true, default_value_t = 6)]
    order: usize,
    /// Working precision in bits for numeric verbs.
    #[arg(long, global = true, default_value_t = 256)]
    bits: usize,
    /// Seed for randomized fixtures and sample points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report file (a directory for `fixtures`); stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Centralizer basis of a linear map, from a matrix file or a closed-form oracle.
    Centralizer(CentralizerArgs),
    /// Resonant pairs up to the jet order.
    Resonances(SpecInput),
    /// Formal linearization `h` with `f∘h = h∘A`.
    Linearize {
        #[arg(long)]
        germ: PathBuf,
        /// JSON array filling the free slots.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Linearization of a one-parameter family over Q(i)[t].
    Family {
        #[arg(long)]
        germ: PathBuf,
    },
    /// Averaged linearizer from a conjugacy of `f^q` to the identity.
    Average {
        #[arg(long)]
        germ: PathBuf,
        #[arg(long)]
        q: u64,
        /// Defaults to the identity.
        #[arg(long)]
        k: Option<PathBuf>,
    },
    /// Linearizability of a germ whose linear part has finite order.
    FiniteOrder {
        #[arg(long)]
        germ: PathBuf,
    },
    /// `Az + φ(z_j)e_j` for an eigen-axis `j` (1-based).
    Embed {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        axis: usize,
        /// One-variable germ file holding φ.
        #[arg(long)]
        phi: PathBuf,
    },
    /// Small-divisor profile Ω(2..=m).
    Omega(SpecInput),
    /// Continued-fraction Bruno sum.
    Bruno {
        /// `p/q`, `golden`, `silver`, `liouville:N`, a decimal (with --assume-irrational) or a JSON file.
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        cutoff: usize,
        #[arg(long, default_value_t = 100.0)]
        bound: f64,
        #[arg(long)]
        assume_irrational: bool,
    },
    /// Compares Ω of `A^q` with `q·Ω(A)`.
    TorsionCompare {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        q: u64,
    },
    /// Bernstein–Walsh inequality at seeded random points.
    Bernstein {
        /// JSON array of coefficients, constant term first.
        #[arg(long)]
        poly: PathBuf,
        /// `disk:c,r` or `segment:a,b`.
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Points are drawn from the disk of this many set radii around its center.
        #[arg(long, default_value_t = 3.0)]
        spread: f64,
    },
    /// Radius lower bound from a growth certificate.
    RadiusBound {
        #[arg(long)]
        cert: PathBuf,
        /// Evaluation parameter, e.g. `1/2+1i`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Writes the seeded fixture files.
    Fixtures,
}

#[derive(Args, Debug)]
struct CentralizerArgs {
    #[arg(long, conflicts_with = "oracle", required_unless_present = "oracle")]
    matrix: Option<PathBuf>,
    /// `jordan2` or `elliptic:λ`.
    #[arg(long)]
    oracle: Option<String>,
}

#[derive(Args, Debug)]
struct SpecInput {
    /// Eigenvalue spec file.
    #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
    spec: Option<PathBuf>,
    /// Diagonal matrix file.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    if cli.order < 1 {
        return Err(Error::InvalidArgument("--order must be at least 1".into()));
    }
    if cli.bits < MIN_PRECISION {
        return Err(Error::InvalidArgument(format!("--bits must be at least {MIN_PRECISION}")));
    }
    let (verb, inputs, result) = dispatch(cli)?;
    let report = json!({
        "format_version": FORMAT_VERSION,
        "tool": "germlin",
        "version": env!("CARGO_PKG_VERSION"),
        "verb": verb,
        "order": cli.order,
        "bits": cli.bits,
        "seed": cli.seed,
        "inputs": inputs,
        "result": result,
    });
    match (&cli.output, &cli.verb) {
        (Some(_), Verb::Fixtures) | (None, _) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&report).expect("serializable"));
            Ok(())
        }
        (Some(path), _) => io::write_json(&report, path),
    }
}

fn exact_germ(path: &Path) -> Result<GermJet<ExactComplex>> {
    io::read_germ(path)?.into_exact()
}

fn spec_input(s: &SpecInput) -> Result<(EigenSpec, Value)> {
    match (&s.spec, &s.matrix) {
        (Some(p), _) => {
            let spec = EigenSpec::from_json(&io::parse_json(&io::read_text(p)?)?)?;
            let echo = json!({ "spec_file": p, "spec": spec.to_json() });
            Ok((spec, echo))
        }
        (None, Some(p)) => {
            let a = io::read_matrix(p)?;
            let spec = EigenSpec::from_diagonal(&a)?;
            Ok((spec, json!({ "matrix_file": p, "matrix": matrix_to_json(&a)["matrix"] })))
        }
        (None, None) => Err(Error::InvalidArgument("give --spec or --matrix".into())),
    }
}

fn parse_oracle(s: &str) -> Result<OracleKind> {
    match s.split_once(':') {
        None if s == "jordan2" => Ok(OracleKind::Jordan2),
        Some(("elliptic", l)) => Ok(OracleKind::Elliptic(l.parse()?)),
        _ => Err(Error::InvalidArgument(format!("unknown oracle {s:?}; expected jordan2 or elliptic:λ"))),
    }
}

fn parse_theta(s: &str, assume_irrational: bool, bits: usize) -> Result<Theta> {
    if let Some(n) = s.strip_prefix("liouville:") {
        let terms = n.parse().map_err(|_| Error::InvalidArgument(format!("bad term count {n:?}")))?;
        return Ok(liouville_theta(terms, bits));
    }
    match s {
        "golden" => return Ok(golden_theta(bits)),
        "silver" => return Ok(silver_theta(bits)),
        _ => {}
    }
    if Path::new(s).is_file() {
        return Theta::from_json(&io::parse_json(&io::read_text(s)?)?, "theta");
    }
    if let Ok(c) = s.parse::<ExactComplex>() {
        if c.im == Default::default() && !s.contains('.') && !s.contains('e') {
            return Ok(Theta::Rational(c.re));
        }
    }
    if !assume_irrational {
        return Err(Error::InvalidArgument(format!(
            "{s:?} is neither a rational p/q, a named constant nor a file; pass --assume-irrational to read it as an irrational decimal"
        )));
    }
    Ok(Theta::Irrational { value: real::parse_any(s, bits)?, bits })
}

fn dispatch(cli: &Cli) -> Result<(&'static str, Value, Value)> {
    let m = cli.order;
    let bits = cli.bits;
    Ok(match &cli.verb {
        Verb::Centralizer(args) => {
            if let Some(o) = &args.oracle {
                let kind = parse_oracle(o)?;
                let closed = centralizer_oracle(&kind, m)?;
                let computed = centralizer_basis(&kind.matrix()?, m)?;
                let result = json!({
                    "delta": closed.delta,
                    "basis": closed.to_json()["basis"],
                    "null_space_delta": computed.delta,
                    "spans_agree": closed.same_span(&computed),
                });
                ("centralizer", json!({ "oracle": o, "matrix": matrix_to_json(&kind.matrix()?)["matrix"] }), result)
            } else {
                let p = args.matrix.as_ref().expect("clap enforces one source");
                let a = io::read_matrix(p)?;
                let b = centralizer_basis(&a, m)?;
                ("centralizer", json!({ "matrix_file": p, "matrix": matrix_to_json(&a)["matrix"] }), b.to_json())
            }
        }
        Verb::Resonances(s) => {
            let (spec, echo) = spec_input(s)?;
            let r = resonances(&spec, m)?;
            ("resonances", echo, json!({ "count": r.len(), "resonances": r.to_json() }))
        }
        Verb::Linearize { germ, params } => {
            let f = exact_germ(germ)?;
            let s = match params {
                Some(p) => io::read_params(p)?,
                None => Vec::new(),
            };
            let r = linearize(&f.lift_to(m), m, &s)?;
            let echo = json!({ "germ_file": germ, "germ": germ_to_json(&f), "params": s.iter().map(|x| json!(x.to_string())).collect::<Vec<_>>() });
            ("linearize", echo, r.to_json())
        }
        Verb::Family { germ } => {
            let f = io::read_germ(germ)?.into_param()?;
            let echo = json!({ "germ_file": germ, "germ": germ_to_json(&f) });
            let result = match family_linearize(&f.lift_to(m), m) {
                Ok(fam) => json!({ "status": "Linearized", "family": fam.to_json() }),
                Err(Error::FamilyObstructed { degree, exponents, coordinate, witness }) => json!({
                    "status": "Obstructed",
                    "degree": degree,
                    "exponents": exponents,
                    "coordinate": coordinate,
                    "witness": witness.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                }),
                Err(e) => return Err(e),
            };
            ("family", echo, result)
        }
        Verb::Average { germ, q, k } => {
            let f = exact_germ(germ)?;
            let kk = match k {
                Some(p) => exact_germ(p)?,
                None => GermJet::identity(f.n(), m),
            };
            let k0 = average_linearization(&f.lift_to(m), *q, &kk.lift_to(m), m)?;
            let echo = json!({ "germ_file": germ, "germ": germ_to_json(&f), "q": q, "k": germ_to_json(&kk) });
            ("average", echo, json!({ "linearizer": germ_to_json(&k0) }))
        }
        Verb::FiniteOrder { germ } => {
            let f = exact_germ(germ)?;
            let v = finite_order_test(&f.lift_to(m), m)?;
            ("finite-order", json!({ "germ_file": germ, "germ": germ_to_json(&f) }), v.to_json())
        }
        Verb::Embed { matrix, axis, phi } => {
            let a = io::read_matrix(matrix)?;
            let p = exact_germ(phi)?;
            if p.n() != 1 {
                return Err(Error::DimensionMismatch(format!("phi must have one variable, got {}", p.n())));
            }
            if *axis == 0 {
                return Err(Error::InvalidArgument("--axis is 1-based".into()));
            }
            let g = embed_scalar(&a, axis - 1, &p.components()[0], m)?;
            let echo = json!({ "matrix": matrix_to_json(&a)["matrix"], "axis": axis, "phi": germ_to_json(&p) });
            ("embed", echo, json!({ "germ": germ_to_json(&g) }))
        }
        Verb::Omega(s) => {
            let (spec, echo) = spec_input(s)?;
            ("omega", echo, profile(&spec, m.max(2), bits)?.to_json())
        }
        Verb::Bruno { theta, cutoff, bound, assume_irrational } => {
            let t = parse_theta(theta, *assume_irrational, bits)?;
            let r = bruno_check(&t, *cutoff, *bound, bits)?;
            let echo = json!({ "theta_arg": theta, "theta": t.to_json(), "cutoff": cutoff, "bound": bound });
            ("bruno", echo, r.to_json())
        }
        Verb::TorsionCompare { spec, q } => {
            let (s, echo) = spec_input(&SpecInput { spec: Some(spec.clone()), matrix: None })?;
            let mut echo = echo;
            echo["q"] = json!(q);
            ("torsion-compare", echo, torsion_compare(&s, *q, m.max(2), bits)?.to_json())
        }
        Verb::Bernstein { poly, set, samples, spread } => {
            let coeffs = io::read_params(poly)?;
            let k: CompactSet = set.parse()?;
            let pts = random_points(&k, *samples, *spread, cli.seed, bits);
            let r = bernstein_check(&coeffs, &k, &pts, bits);
            let echo = json!({
                "poly": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "set": k.to_json(),
                "samples": samples,
                "spread": spread,
            });
            ("bernstein", echo, r.to_json())
        }
        Verb::RadiusBound { cert, at } => {
            let c = GrowthCertificate::from_json(&io::parse_json(&io::read_text(cert)?)?, bits)?;
            let t: ExactComplex = at.parse()?;
            let r = radius_lower_bound(&c, &t, bits)?;
            let result = json!({
                "radius": r.as_ref().map_or("inf".to_string(), real::format_decimal),
                "radius_hex": r.as_ref().map(real::format_hex),
            });
            ("radius-bound", json!({ "certificate": c.to_json(), "at": t.to_string() }), result)
        }
        Verb::Fixtures => {
            let set = fixture_set(cli.seed, m, bits)?;
            if let Some(dir) = &cli.output {
                std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.display().to_string(), message: e.to_string() })?;
                for (name, v) in &set {
                    io::write_json(v, dir.join(name))?;
                }
            }
            let result = json!({
                "files": set.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
                "written_to": cli.output,
                "fixtures": if cli.output.is_none() { Value::Object(set.into_iter().collect()) } else { Value::Null },
            });
            ("fixtures", json!({}), result)
        }
    })
}

trait LiftTo {
    fn lift_to(&self, m: usize) -> Self;
}

impl<R: germlin::rings::Ring> LiftTo for GermJet<R> {
    /// Pads a lower-order jet with zeros; higher orders are left for the solver to project.
    fn lift_to(&self, m: usize) -> Self {
        if self.order() < m {
            self.lift(m)
        } else {
            self.clone()
        }
    }
}
