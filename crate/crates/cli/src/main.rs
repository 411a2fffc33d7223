//! `qmflab`: command line for exact period-polynomial, Dedekind-symbol and
//! quantum-modular-form computations, plus the named verification suites.
//!
//! Exit codes: 0 on success/pass, 1 when a verification check fails,
//! 2 on usage errors.

use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use qmflab_core::dedekind::Symbol;
use qmflab_core::eichler;
use qmflab_core::exactnum::{Mat2Z, Rat};
use qmflab_core::maninhecke;
use qmflab_core::modgroup::{self, MultSys};
use qmflab_core::polyspace::{self, HomPoly, Parity};
use qmflab_core::qmf;
use qmflab_core::report::Report;
use qmflab_core::sigma;
use qmflab_core::suites::{run_suite, SuiteConfig, SuiteName};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser)]
#[command(name = "qmflab", version, about = "quantum modular form laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SuiteArgs {
    /// Seed for randomized checks (reports are deterministic per seed).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Clone)]
struct SymbolSpec {
    /// Weight w (even, >= 2).
    #[arg(long)]
    weight: usize,
    /// Reciprocity polynomial: w+1 comma-separated rationals, coefficient
    /// of h^i k^(w-i) in ascending i.
    #[arg(long, value_delimiter = ',')]
    recip: Vec<String>,
    /// Normalization E(1, 0).
    #[arg(long, default_value = "0")]
    c0: String,
}

impl SymbolSpec {
    fn build(&self) -> Result<Symbol> {
        let coeffs: Vec<Rat> = self
            .recip
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<_>>()?;
        if coeffs.len() != self.weight + 1 {
            bail!(
                "need {} reciprocity coefficients for weight {}, got {}",
                self.weight + 1,
                self.weight,
                coeffs.len()
            );
        }
        let recip = HomPoly::new(self.weight, coeffs);
        let c0 = parse_rat(&self.c0)?;
        Symbol::reconstruct(recip, c0).map_err(|e| anyhow!("{e}"))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact basis of W_w or U_w.
    Basis {
        /// W (period polynomials) or U (reciprocity polynomials).
        #[arg(long)]
        space: String,
        #[arg(long)]
        weight: usize,
        /// +, - or both.
        #[arg(long, default_value = "both")]
        parity: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Dedekind symbol evaluation and Hecke images.
    Symbol {
        #[command(subcommand)]
        cmd: SymbolCmd,
    },
    /// Quantum modular form operations.
    Qmf {
        #[command(subcommand)]
        cmd: QmfCmd,
    },
    /// Commuting-diagram identities at one weight.
    DiagramCheck {
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Manin matrix sets and Hecke eigenvalues on period polynomials.
    Manin {
        #[command(subcommand)]
        cmd: ManinCmd,
    },
    /// Multiplier-system compatibility over a prime range, with
    /// per-generator value pairs.
    Compat {
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long, default_value_t = 101)]
        pmax: u64,
        /// Extend to the full range p <= 757.
        #[arg(long = "full-757", default_value_t = false)]
        full_757: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Gamma_0(2) word decomposition and multiplier values.
    Gamma02 {
        #[command(subcommand)]
        cmd: Gamma02Cmd,
    },
    /// sigma(q) tools; with no subcommand, runs the sigma suite.
    Sigma {
        #[command(subcommand)]
        cmd: Option<SigmaCmd>,
        #[command(flatten)]
        suite: SuiteArgs,
    },
    /// Discriminant-form numerics (periods, Eichler integral).
    Delta {
        #[command(subcommand)]
        cmd: DeltaCmd,
    },
    /// Suite: diagram identities, dimensions, kernel facts.
    Diagram {
        /// Comma-separated even weights.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 4, 6, 8, 10, 12])]
        weights: Vec<usize>,
        #[command(flatten)]
        suite: SuiteArgs,
    },
    /// Suite: Hecke compatibility of psi at seeded rationals.
    HeckeCompat {
        #[arg(long, value_delimiter = ',', default_values_t = vec![10usize, 12])]
        weights: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        nmax: u64,
        #[command(flatten)]
        suite: SuiteArgs,
    },
    /// Suite: tau eigenvalues of the Manin Hecke action.
    ManinEigen {
        #[command(flatten)]
        suite: SuiteArgs,
    },
    /// Suite: multiplier compatibility over the prime range.
    MultiplierCompat {
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long, default_value_t = 101)]
        pmax: u64,
        #[arg(long = "full-757", default_value_t = false)]
        full_757: bool,
        #[command(flatten)]
        suite: SuiteArgs,
    },
    /// Suite: Eichler bridge between numerics and the exact bases.
    Eichler {
        #[command(flatten)]
        suite: SuiteArgs,
    },
    /// All suites.
    All {
        #[arg(long, default_value_t = 101)]
        pmax: u64,
        #[arg(long = "full-757", default_value_t = false)]
        full_757: bool,
        #[command(flatten)]
        suite: SuiteArgs,
    },
}

#[derive(Subcommand)]
enum SymbolCmd {
    /// Evaluate E(h, k) for the symbol reconstructed from --recip/--c0.
    Eval {
        #[command(flatten)]
        spec: SymbolSpec,
        #[arg(long)]
        h: i64,
        #[arg(long)]
        k: i64,
    },
    /// Evaluate (T_n E)(h, k).
    Hecke {
        #[command(flatten)]
        spec: SymbolSpec,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        h: i64,
        #[arg(long)]
        k: i64,
    },
}

#[derive(Subcommand)]
enum QmfCmd {
    /// Evaluate psi(E) at a rational x.
    Eval {
        #[command(flatten)]
        spec: SymbolSpec,
        /// Rational point, e.g. 3/7 or -2.
        #[arg(long)]
        x: String,
    },
    /// Period polynomial of psi(E).
    Period {
        #[command(flatten)]
        spec: SymbolSpec,
    },
    /// Evaluate (T_n psi(E)) at a rational x.
    Hecke {
        #[command(flatten)]
        spec: SymbolSpec,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        x: String,
    },
}

#[derive(Subcommand)]
enum ManinCmd {
    /// List the Manin matrices of determinant n.
    List {
        #[arg(long)]
        n: u64,
    },
    /// Exact eigenvalue of T~_n on a one-dimensional basis_W(w, parity).
    Eigen {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value = "-")]
        parity: String,
    },
}

#[derive(Subcommand)]
enum Gamma02Cmd {
    /// Multiplier value chi(gamma) for gamma in Gamma_0(2).
    Chi {
        /// Matrix entries a,b,c,d.
        #[arg(long, value_delimiter = ',')]
        matrix: Vec<String>,
    },
}

#[derive(Subcommand)]
enum SigmaCmd {
    /// f(x) = q^{1/24} sigma(q) at a rational x.
    Eval {
        #[arg(long)]
        x: String,
    },
    /// Compare the two sigma(q) series as formal power series.
    SeriesCheck {
        #[arg(long, default_value_t = 50)]
        order: usize,
    },
    /// The Hecke image (T_p f)(x) by the closed formula.
    Hecke {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        x: String,
    },
    /// Cocycle smoothness probe (CSV sample chains for plotting).
    Probe {
        /// Probe T_p f instead of f.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum DeltaCmd {
    /// Complex coefficients of the period polynomial of Delta.
    Periods {
        #[arg(long, default_value_t = 200)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Truncated Eichler integral Q(x).
    Eichler {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 200)]
        terms: usize,
    },
    /// Hecke crosscheck T~_n r^- = tau(n) r^- on the numerical periods.
    HeckeCheck {
        #[arg(long)]
        n: u64,
    },
}

fn parse_rat(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|e| anyhow!("bad rational `{s}`: {e}"))
}

fn parse_parity(s: &str) -> Result<Parity> {
    Parity::from_str(s).map_err(|e| anyhow!(e))
}

fn print_report(report: &Report, format: Format) -> bool {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => print!("{}", report.to_csv()),
        Format::Text => print!("{}", report.to_text()),
    }
    report.overall_pass()
}

fn poly_json(p: &HomPoly) -> serde_json::Value {
    serde_json::Value::Array(
        p.coeffs()
            .iter()
            .map(|c| serde_json::Value::String(c.to_string()))
            .collect(),
    )
}

fn run(cli: Cli) -> Result<bool> {
    Ok(match cli.cmd {
        Cmd::Basis {
            space,
            weight,
            parity,
            format,
        } => {
            if weight < 2 || weight % 2 != 0 {
                bail!("weight must be even and >= 2");
            }
            let parity = parse_parity(&parity)?;
            let basis = match space.as_str() {
                "W" | "w" => polyspace::basis_w(weight, parity),
                "U" | "u" => polyspace::basis_u(weight, parity),
                other => bail!("unknown space `{other}` (use W or U)"),
            };
            match format {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = basis.iter().map(poly_json).collect();
                    println!(
                        "{}",
                        serde_json::json!({
                            "space": space, "weight": weight,
                            "dimension": basis.len(), "basis": rows,
                        })
                    );
                }
                _ => {
                    for p in &basis {
                        println!("{p}");
                    }
                    println!("dimension {}", basis.len());
                }
            }
            true
        }
        Cmd::Symbol { cmd } => match cmd {
            SymbolCmd::Eval { spec, h, k } => {
                let e = spec.build()?;
                println!("{}", e.eval_i64(h, k).map_err(|e| anyhow!("{e}"))?);
                true
            }
            SymbolCmd::Hecke { spec, n, h, k } => {
                let e = spec.build()?;
                println!("{}", e.hecke(n).eval_i64(h, k).map_err(|e| anyhow!("{e}"))?);
                true
            }
        },
        Cmd::Qmf { cmd } => match cmd {
            QmfCmd::Eval { spec, x } => {
                let f = qmf::psi(&spec.build()?);
                println!("{}", f.eval(&parse_rat(&x)?));
                true
            }
            QmfCmd::Period { spec } => {
                let f = qmf::psi(&spec.build()?);
                let p = qmf::hmap(&f).map_err(|e| anyhow!("{e}"))?;
                println!("{p}");
                true
            }
            QmfCmd::Hecke { spec, n, x } => {
                let f = qmf::psi(&spec.build()?).hecke(n);
                println!("{}", f.eval(&parse_rat(&x)?));
                true
            }
        },
        Cmd::DiagramCheck {
            weight,
            seed,
            format,
        } => {
            if weight < 2 || weight % 2 != 0 {
                bail!("weight must be even and >= 2");
            }
            let report = qmf::check_diagram(weight, seed);
            print_report(&report, format)
        }
        Cmd::Manin { cmd } => match cmd {
            ManinCmd::List { n } => {
                if n < 1 {
                    bail!("n must be positive");
                }
                let set = maninhecke::manin_set(n);
                for m in &set.mats {
                    println!("{m}");
                }
                println!("{} matrices of determinant {}", set.mats.len(), n);
                true
            }
            ManinCmd::Eigen { n, weight, parity } => {
                let parity = parse_parity(&parity)?;
                let lambda = maninhecke::eigenvalue_on_line(n, weight, parity)
                    .map_err(|e| anyhow!("{e}"))?;
                println!("{lambda}");
                true
            }
        },
        Cmd::Compat {
            pmin,
            pmax,
            full_757,
            seed,
            format,
        } => {
            let pmax = if full_757 { 757 } else { pmax };
            let mut report = Report::new("compat".into());
            let primes: Vec<u64> = (pmin.max(5)..=pmax)
                .filter(|&n| n >= 2 && (2..).take_while(|q| q * q <= n).all(|q| n % q != 0))
                .collect();
            for p in primes {
                let check = modgroup::compat_check(p, seed, 50).map_err(|e| anyhow!("{e}"))?;
                let pairs: Vec<String> = check
                    .generator_pairs
                    .iter()
                    .map(|pr| format!("{}: {} / {}", pr.gamma, pr.lhs, pr.rhs))
                    .collect();
                report.push(qmflab_core::report::CheckRecord::of_bool(
                    format!("compat[p={p}]"),
                    check.pass,
                    pairs.join("; "),
                ));
            }
            print_report(&report, format)
        }
        Cmd::Gamma02 { cmd } => match cmd {
            Gamma02Cmd::Chi { matrix } => {
                if matrix.len() != 4 {
                    bail!("--matrix needs exactly 4 entries a,b,c,d");
                }
                let ints: Vec<BigInt> = matrix
                    .iter()
                    .map(|s| BigInt::from_str(s.trim()).context("bad integer entry"))
                    .collect::<Result<_>>()?;
                let gamma = Mat2Z::new(
                    ints[0].clone(),
                    ints[1].clone(),
                    ints[2].clone(),
                    ints[3].clone(),
                );
                let value = modgroup::chi_eval(&gamma, &MultSys::chi()).map_err(|e| anyhow!("{e}"))?;
                let word = modgroup::decompose_gamma02(&gamma).map_err(|e| anyhow!("{e}"))?;
                println!("{value}  (word {word})");
                true
            }
        },
        Cmd::Sigma { cmd, suite } => match cmd {
            None => {
                let cfg = SuiteConfig {
                    seed: suite.seed,
                    ..SuiteConfig::default()
                };
                let report = run_suite(SuiteName::Sigma, &cfg);
                print_report(&report, suite.format)
            }
            Some(SigmaCmd::Eval { x }) => {
                let v = sigma::f_eval(&parse_rat(&x)?).map_err(|e| anyhow!("{e}"))?;
                println!("{} {:+}i", v.re, v.im);
                true
            }
            Some(SigmaCmd::SeriesCheck { order }) => {
                let check = sigma::series_identity_check(order);
                let coeffs: Vec<String> =
                    check.coeffs.iter().take(16.min(order + 1)).map(|c| c.to_string()).collect();
                match check.first_mismatch {
                    None => {
                        println!("agree to order {order}; starts {}", coeffs.join(", "));
                        true
                    }
                    Some(i) => {
                        println!("MISMATCH at q^{i}");
                        false
                    }
                }
            }
            Some(SigmaCmd::Hecke { p, x }) => {
                let v = sigma::hecke_sigma(p, &parse_rat(&x)?).map_err(|e| anyhow!("{e}"))?;
                println!("{} {:+}i", v.re, v.im);
                true
            }
            Some(SigmaCmd::Probe { p, format }) => {
                let report = sigma::cocycle_probe(p).map_err(|e| anyhow!("{e}"))?;
                match format {
                    Format::Csv => {
                        println!("base,m,x,h_re,h_im,diff_from_prev,flag");
                        for chain in &report.chains {
                            if chain.near_singular {
                                println!("{},,,,,,near-singular", chain.base);
                                continue;
                            }
                            for (i, (m, x, v)) in chain.samples.iter().enumerate() {
                                let d = if i == 0 {
                                    String::new()
                                } else {
                                    format!("{:.6e}", chain.diffs[i - 1])
                                };
                                let flag = if chain.clamped_at.is_some() { "clamped" } else { "" };
                                println!("{},{},{},{:.12e},{:.12e},{},{}", chain.base, m, x, v.re, v.im, d, flag);
                            }
                        }
                    }
                    _ => {
                        for chain in &report.chains {
                            if chain.near_singular {
                                println!("{}: near-singular, excluded", chain.base);
                            } else {
                                println!(
                                    "{}: diffs {:?} ({})",
                                    chain.base,
                                    chain.diffs,
                                    if chain.decreasing { "decreasing" } else { "NOT decreasing" }
                                );
                            }
                        }
                    }
                }
                report.pass
            }
        },
        Cmd::Delta { cmd } => match cmd {
            DeltaCmd::Periods { terms, format } => {
                let r = eichler::period_poly_delta(terms);
                match format {
                    Format::Json => {
                        let rows: Vec<serde_json::Value> = r
                            .iter()
                            .enumerate()
                            .map(|(i, c)| {
                                serde_json::json!({
                                    "monomial": format!("X^{i} Y^{}", 10 - i),
                                    "re": c.re, "im": c.im,
                                })
                            })
                            .collect();
                        println!("{}", serde_json::Value::Array(rows));
                    }
                    _ => {
                        for (i, c) in r.iter().enumerate() {
                            println!("X^{i} Y^{}: {:+.12e} {:+.12e} i", 10 - i, c.re, c.im);
                        }
                    }
                }
                true
            }
            DeltaCmd::Eichler { x, terms } => {
                let v = eichler::eichler_integral(&parse_rat(&x)?, terms);
                println!("{} {:+}i", v.re, v.im);
                true
            }
            DeltaCmd::HeckeCheck { n } => {
                let out = eichler::hecke_period_crosscheck(n, 200);
                println!(
                    "n = {}: tau = {}, relative error {:.3e}",
                    out.n, out.tau, out.rel_error
                );
                out.rel_error < 1e-5
            }
        },
        Cmd::Diagram { weights, suite } => {
            let cfg = SuiteConfig {
                seed: suite.seed,
                weights,
                ..SuiteConfig::default()
            };
            print_report(&run_suite(SuiteName::Diagram, &cfg), suite.format)
        }
        Cmd::HeckeCompat {
            weights,
            nmax,
            suite,
        } => {
            let cfg = SuiteConfig {
                seed: suite.seed,
                hecke_weights: weights,
                hecke_n_max: nmax,
                ..SuiteConfig::default()
            };
            print_report(&run_suite(SuiteName::HeckeCompat, &cfg), suite.format)
        }
        Cmd::ManinEigen { suite } => {
            let cfg = SuiteConfig {
                seed: suite.seed,
                ..SuiteConfig::default()
            };
            print_report(&run_suite(SuiteName::ManinEigen, &cfg), suite.format)
        }
        Cmd::MultiplierCompat {
            pmin,
            pmax,
            full_757,
            suite,
        } => {
            let cfg = SuiteConfig {
                seed: suite.seed,
                pmin,
                pmax,
                full_757,
                ..SuiteConfig::default()
            };
            print_report(&run_suite(SuiteName::MultiplierCompat, &cfg), suite.format)
        }
        Cmd::Eichler { suite } => {
            let cfg = SuiteConfig {
                seed: suite.seed,
                ..SuiteConfig::default()
            };
            print_report(&run_suite(SuiteName::Eichler, &cfg), suite.format)
        }
        Cmd::All {
            pmax,
            full_757,
            suite,
        } => {
            let cfg = SuiteConfig {
                seed: suite.seed,
                pmax,
                full_757,
                ..SuiteConfig::default()
            };
            print_report(&run_suite(SuiteName::All, &cfg), suite.format)
        }
    })
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("QMFLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .ok();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
