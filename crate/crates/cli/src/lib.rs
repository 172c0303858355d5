//! Command line front end for the modular-forms de Rham toolkit.
//!
//! Subcommands: `expand`, `membership`, `basis`, `reduce`, `pair`, `hecke`,
//! `phi`, `cocycle`, `period-poly`, `selftest`. Output is deterministic for
//! fixed flags and seed; exact rationals print as `p/q` (bare integer when
//! the denominator is 1).
//!
//! Exit codes: 0 success, 2 domain errors, 3 window or precision-budget
//! errors, 64 usage errors, 70 internal errors.

pub mod formats;
pub mod named;
pub mod selftest;

use clap::{Args, Parser, Subcommand};
use mfdr_core::cohomology::{canonical_rep, dr_basis, hecke as hecke_op, phi};
use mfdr_core::error::Error;
use mfdr_core::pairing::bracket;
use mfdr_core::periods::{
    eichler_cocycle, period_polynomial, BigComplex, NumForm, PrecCtx, QuadOpts, SL2Mat,
};
use serde_json::json;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_WINDOW: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "mfdr", version, about = "Exact de Rham cohomology of weakly holomorphic modular forms", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Series truncation window (q-exponents below this are computed).
    #[arg(long = "order", env = "MFDR_ORDER", default_value_t = 40)]
    order: i64,
    /// Working precision in decimal digits for numeric commands.
    #[arg(long = "prec", env = "MFDR_PREC", default_value_t = 40)]
    prec: usize,
    /// Output format.
    #[arg(long = "format", env = "MFDR_FORMAT", default_value = "text")]
    format: String,
    /// Seed for randomised checks.
    #[arg(long = "seed", env = "MFDR_SEED", default_value_t = 42)]
    seed: u64,
}

impl Common {
    fn validate(&self) -> Result<(), Error> {
        if self.order < 1 {
            return Err(Error::Domain(format!("--order must be positive, got {}", self.order)));
        }
        if self.prec < 20 {
            return Err(Error::Domain(format!("--prec must be at least 20, got {}", self.prec)));
        }
        if self.format != "text" && self.format != "json" {
            return Err(Error::Domain(format!("--format must be text or json, got {}", self.format)));
        }
        Ok(())
    }

    /// Working window: never below the floor of 10, whatever was requested
    /// for display.
    fn window(&self) -> i64 {
        self.order.max(10)
    }

    fn json(&self) -> bool {
        self.format == "json"
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fourier expansion of a named form or polynomial file.
    #[command(allow_negative_numbers = true)]
    Expand {
        /// Named form (u, v, delta, j, G<k>, E<k>, f_<m>@<k>) or a file.
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether a series is weakly modular of the given weight.
    #[command(allow_negative_numbers = true)]
    Membership {
        #[arg(long)]
        weight: i64,
        /// Series file (text or JSON), or '-' for stdin.
        #[arg(long)]
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Canonical basis f_m of the weight-k cohomology.
    #[command(allow_negative_numbers = true)]
    Basis {
        #[arg(long)]
        weight: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Canonical representative of a form's class, with certificate.
    #[command(allow_negative_numbers = true)]
    Reduce {
        #[arg(long)]
        weight: i64,
        /// Named form or series file.
        #[arg(long)]
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Residue pairing of two weight-k forms.
    #[command(allow_negative_numbers = true)]
    Pair {
        #[arg(long)]
        weight: i64,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Require the first argument to be cuspidal.
        #[arg(long, env = "MFDR_STRICT", default_value_t = false)]
        strict: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Hecke operator T_p on the class of a form.
    #[command(allow_negative_numbers = true)]
    Hecke {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        weight: i64,
        #[arg(long)]
        form: String,
        #[command(flatten)]
        common: Common,
    },
    /// The section completion of a weight -n form.
    #[command(allow_negative_numbers = true)]
    Phi {
        #[arg(long)]
        form: String,
        /// Weight of the input form (-n, even, <= 0).
        #[arg(long)]
        weight: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Eichler cocycle value of a weight-k form at a group element.
    #[command(allow_negative_numbers = true)]
    Cocycle {
        #[arg(long)]
        weight: i64,
        #[arg(long)]
        form: String,
        /// Matrix entries a,b,c,d with ad - bc = 1.
        #[arg(long)]
        gamma: String,
        /// Basepoint x+yi in the upper half plane.
        #[arg(long, default_value = "0+2i")]
        z0: String,
        #[command(flatten)]
        common: Common,
    },
    /// Period polynomial of a holomorphic cusp form.
    #[command(name = "period-poly", allow_negative_numbers = true)]
    PeriodPoly {
        #[arg(long)]
        form: String,
        /// Weight of the cusp form.
        #[arg(long, default_value_t = 12)]
        weight: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Run the full acceptance battery.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Grading(_) | Error::NotInRing(_) | Error::NonCuspidal(_) => EXIT_DOMAIN,
        Error::Window(_) | Error::Underdetermined(_) | Error::Budget(_) => EXIT_WINDOW,
        Error::Internal(_) => EXIT_INTERNAL,
    }
}

fn parse_gamma(s: &str) -> Result<SL2Mat, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Domain(format!("--gamma needs a,b,c,d, got '{s}'")));
    }
    let nums: Vec<i64> = parts
        .iter()
        .map(|p| p.parse().map_err(|e| Error::Domain(format!("bad matrix entry '{p}': {e}"))))
        .collect::<Result<_, _>>()?;
    SL2Mat::new(nums[0], nums[1], nums[2], nums[3])
}

/// Parses `x+yi` (also accepts `yi`, `x`, and negative parts).
fn parse_complex(s: &str, ctx: &PrecCtx) -> Result<BigComplex, Error> {
    let t = s.trim().replace(' ', "");
    let bad = || Error::Domain(format!("bad complex number '{s}', expected x+yi"));
    if let Some(body) = t.strip_suffix('i') {
        // split into real and imaginary at the last +/- that is not leading
        let mut split_at = None;
        for (i, ch) in body.char_indices().skip(1) {
            if (ch == '+' || ch == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E') {
                split_at = Some(i);
            }
        }
        let (re_str, im_str) = match split_at {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im_str = match im_str {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let re: f64 = re_str.parse().map_err(|_| bad())?;
        let im: f64 = im_str.parse().map_err(|_| bad())?;
        Ok(BigComplex::from_f64(ctx, re, im))
    } else {
        let re: f64 = t.parse().map_err(|_| bad())?;
        Ok(BigComplex::from_f64(ctx, re, 0.0))
    }
}

fn emit(out: &mut dyn Write, text: String) {
    let _ = writeln!(out, "{}", text.trim_end());
}

fn run_command(cmd: Command, out: &mut dyn Write) -> Result<(), Error> {
    match cmd {
        Command::Expand { poly, common } => {
            common.validate()?;
            let input = named::resolve(&poly, None, common.window())?;
            let series = input.series(common.window())?.truncated(common.order);
            if common.json() {
                emit(out, formats::series_to_json(&series).to_string());
            } else {
                emit(out, formats::series_to_text(&series));
            }
            Ok(())
        }
        Command::Membership { weight, input, common } => {
            common.validate()?;
            let form = named::resolve(&input, Some(weight), common.window())?;
            let alg = form.algebraic(weight)?;
            if common.json() {
                emit(out, formats::alg_to_json(&alg).to_string());
            } else {
                emit(out, formats::alg_to_text(&alg));
            }
            Ok(())
        }
        Command::Basis { weight, common } => {
            common.validate()?;
            let basis = dr_basis(weight, common.window())?;
            if common.json() {
                let items: Vec<_> = basis.iter().map(formats::class_to_json).collect();
                emit(out, json!({"weight": weight, "basis": items}).to_string());
            } else {
                let ell = ((basis.len() - 1) / 2) as i64;
                for (i, c) in basis.iter().enumerate() {
                    emit(out, format!("# f_{}", i as i64 - ell));
                    emit(out, formats::class_to_text(c));
                }
            }
            Ok(())
        }
        Command::Reduce { weight, input, common } => {
            common.validate()?;
            let form = named::resolve(&input, Some(weight), common.window())?;
            let alg = form.algebraic(weight)?;
            let class = canonical_rep(&alg, common.window())?;
            if common.json() {
                emit(out, formats::class_to_json(&class).to_string());
            } else {
                emit(out, formats::class_to_text(&class));
            }
            Ok(())
        }
        Command::Pair { weight, f, g, strict, common } => {
            common.validate()?;
            let fs = named::resolve(&f, Some(weight), common.window())?.series(common.window())?;
            let gs = named::resolve(&g, Some(weight), common.window())?.series(common.window())?;
            let v = bracket(&fs, &gs, weight, strict)?;
            if common.json() {
                emit(
                    out,
                    json!({"value": v.value.to_string(), "convention": v.convention_tag}).to_string(),
                );
            } else {
                emit(out, format!("{}", v.value));
                emit(out, format!("convention: {}", v.convention_tag));
            }
            Ok(())
        }
        Command::Hecke { p, weight, form, common } => {
            common.validate()?;
            let input = named::resolve(&form, Some(weight), common.window())?;
            let alg = input.algebraic(weight)?;
            let class = canonical_rep(&alg, common.window())?;
            let result = hecke_op(p, &class)?;
            if common.json() {
                emit(out, formats::class_to_json(&result).to_string());
            } else {
                emit(out, formats::class_to_text(&result));
            }
            Ok(())
        }
        Command::Phi { form, weight, common } => {
            common.validate()?;
            let input = named::resolve(&form, Some(weight), common.window())?;
            let alg = input.algebraic(weight)?;
            let section = phi(&alg)?;
            if common.json() {
                emit(out, formats::alg_section_to_json(&section).to_string());
            } else {
                let n = section.degree();
                for j in 0..=n {
                    emit(out, format!("S^{j} T^{}: {}", n - j, formats::alg_to_text(section.coeff(j))));
                }
            }
            Ok(())
        }
        Command::Cocycle { weight, form, gamma, z0, common } => {
            common.validate()?;
            if weight < 4 || weight % 2 != 0 {
                return Err(Error::Domain(format!("cocycle weight must be even and >= 4, got {weight}")));
            }
            let n = (weight - 2) as u32;
            let gamma = parse_gamma(&gamma)?;
            let ctx = &mut PrecCtx::new(common.prec)?;
            let z0 = parse_complex(&z0, ctx)?;
            // window sized to the precision and the basepoint height
            let order = common.window().max(4 * common.prec as i64);
            let series = named::resolve(&form, Some(weight), order)?.series(order)?;
            let numform = NumForm::prepare(&series, ctx)?;
            let poly = eichler_cocycle(&numform, n, &gamma, &z0, &QuadOpts::default(), ctx)?;
            emit(out, formats::complex_poly_to_json(&poly, ctx).to_string());
            Ok(())
        }
        Command::PeriodPoly { form, weight, common } => {
            common.validate()?;
            if weight < 12 || weight % 2 != 0 {
                return Err(Error::Domain(format!(
                    "period polynomials need an even weight >= 12 cusp form, got weight {weight}"
                )));
            }
            let n = (weight - 2) as u32;
            let ctx = &mut PrecCtx::new(common.prec)?;
            let order = common.window().max(2 * common.prec as i64);
            let series = named::resolve(&form, Some(weight), order)?.series(order)?;
            let numform = NumForm::prepare(&series, ctx)?;
            let (full, even, odd) = period_polynomial(&numform, n, &QuadOpts::default(), ctx)?;
            let v = json!({
                "full": formats::complex_poly_to_json(&full, ctx),
                "even": formats::complex_poly_to_json(&even, ctx),
                "odd": formats::complex_poly_to_json(&odd, ctx),
            });
            emit(out, v.to_string());
            Ok(())
        }
        Command::Selftest { common } => {
            common.validate()?;
            let results = selftest::run_all(common.seed);
            let mut ok = true;
            for (name, r) in &results {
                match r {
                    Ok(()) => emit(out, format!("[PASS] {name}")),
                    Err(msg) => {
                        ok = false;
                        emit(out, format!("[FAIL] {name}: {msg}"));
                    }
                }
            }
            if ok {
                emit(out, format!("all {} criteria passed", results.len()));
                Ok(())
            } else {
                Err(Error::Internal("selftest failures".into()))
            }
        }
    }
}

/// Entry point shared by `main` and the CLI tests.
pub fn run(args: &[String], out: &mut dyn Write, err_out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // help/version are successful exits
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            if code == EXIT_OK {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err_out, "{e}");
            }
            return code;
        }
    };
    match run_command(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err_out, "error: {e}");
            exit_code_for(&e)
        }
    }
}
