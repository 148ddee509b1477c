//! The `valq` command line: fixture loading, subcommands and reports.

pub mod fixture;

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Result, VqError};
use crate::exactalg::{Frac, UPoly};
use crate::extend::{approx_profile, extend_value, good_variable, Budgets};
use crate::nagata::{fstar, is_nagata, FactorSource, NagataPoly};
use crate::newton::{classify, newton_run, psi_f, sequence_checks, ClassKind, NewtonTrace};
use crate::ordgroup::{ok_stabilize, GroupValue, Stabilization};
use crate::valring::ValuedRing;
pub use fixture::{Expect, Fixture};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Newton iteration with per-step invariant flags
    Newton,
    /// Classify nu(h(sigma_i)) as stationary or increasing
    Classify,
    /// Convex hull of the Newton corrections
    Psi,
    /// The distinguished factor of F
    Fstar,
    /// Good-variable search
    Goodvar,
    /// Extended value of h at the distinguished root
    Extend,
    /// Approximation profile of the root
    Approx,
    /// Stabilization of the Hasse-derivative terms of h
    Ok,
    /// Newton invariant suite as a pass/fail table
    Check,
}

#[derive(Debug, Parser)]
#[command(name = "valq", version, about = "Extending monomial valuations to Nagata extensions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Fixture file
    #[arg(global = true)]
    pub fixture: Option<String>,
    #[arg(long, global = true, default_value = "F")]
    pub poly: String,
    #[arg(long, global = true)]
    pub h: Option<String>,
    #[arg(long, visible_alias = "budget", global = true, default_value_t = 8)]
    pub steps: usize,
    #[arg(long, global = true, default_value_t = 3)]
    pub window: usize,
    #[arg(long, global = true)]
    pub max_depth: Option<usize>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub points: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// What a command prints and its exit code: 0 certified, 1 error, 2
/// inconclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }
}

/// Parses arguments (without the program name) and runs the command.
pub fn run_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("valq")).chain(args.into_iter().map(Into::into));
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let res = cli
        .fixture
        .as_deref()
        .ok_or_else(|| VqError::Fixture("missing fixture path".into()))
        .and_then(|p| std::fs::read_to_string(p).map_err(|e| VqError::Fixture(format!("{p}: {e}"))))
        .and_then(|text| Fixture::parse(&text))
        .and_then(|fx| dispatch(cli, &fx));
    match res {
        Ok(o) => o,
        Err(VqError::Inconclusive(msg)) => {
            Outcome { stdout: format!("INCONCLUSIVE: {msg}\n"), stderr: String::new(), code: 2 }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 1 },
    }
}

pub fn budgets(cli: &Cli, ring: &ValuedRing) -> Budgets {
    Budgets::new(cli.steps, cli.window, cli.max_depth.unwrap_or(ring.rank()))
}

fn nagata_of(fx: &Fixture, name: &str) -> Result<NagataPoly<Frac>> {
    is_nagata(&fx.ring, fx.poly(name)?)
}

fn h_of<'a>(cli: &Cli, fx: &'a Fixture) -> Result<&'a UPoly<Frac>> {
    let name = cli.h.as_deref().ok_or_else(|| VqError::Fixture("this command needs --h NAME".into()))?;
    fx.poly(name)
}

fn dispatch(cli: &Cli, fx: &Fixture) -> Result<Outcome> {
    let ring = &fx.ring;
    let b = budgets(cli, ring);
    let oracle = fx.oracle()?;
    let f = nagata_of(fx, &cli.poly)?;
    match cli.command {
        Command::Newton => {
            let t = newton_run(ring, &f, b.steps)?;
            Ok(Outcome::ok(newton_report(fx, &t, cli.format)))
        }
        Command::Check => {
            let (text, pass) = check_report(fx, &f, b.steps, cli.format)?;
            Ok(Outcome { stdout: text, stderr: String::new(), code: if pass { 0 } else { 1 } })
        }
        Command::Classify => {
            let h = h_of(cli, fx)?;
            let mut t = NewtonTrace::new(f.clone());
            let c = classify(ring, &mut t, h, b.steps, b.window, false)?;
            let mut out = String::new();
            if cli.format == Format::Tsv {
                out.push_str("i\tnu_h\tnu_delta\n");
                for (i, v) in c.values.iter().enumerate() {
                    let d = t.nu_delta.get(i + 1).map_or("-".to_string(), |x| x.to_string());
                    let _ = writeln!(out, "{}\t{v}\t{d}", i + 1);
                }
            } else {
                let _ = writeln!(out, "h = {}", fx.show(h));
                let _ = writeln!(out, "values = {}", join(&c.values));
            }
            let since = match &c.kind {
                ClassKind::Stationary { since, .. } | ClassKind::Increasing { since, .. } => {
                    format!(" since={since}")
                }
                ClassKind::Inconclusive => String::new(),
            };
            let _ = writeln!(out, "{}{since} window={}", c.kind, c.window);
            let code = if c.kind == ClassKind::Inconclusive { 2 } else { 0 };
            Ok(Outcome { stdout: out, stderr: String::new(), code })
        }
        Command::Psi => {
            let t = newton_run(ring, &f, b.steps)?;
            let p = psi_f(&t)?;
            let hulls: Vec<String> = p.hulls.iter().map(|h| h.to_string()).collect();
            Ok(Outcome::ok(format!(
                "psi={} {} reached_at={}\nhulls = {}\nmonotone = {}\n",
                p.psi,
                p.certainty,
                p.reached_at,
                hulls.join(","),
                p.monotone
            )))
        }
        Command::Fstar => {
            let s = fstar(ring, &f, &oracle)?;
            let facs: String = s.factors.iter().map(|g| format!("({})", fx.show(g))).collect();
            Ok(Outcome::ok(format!(
                "F* = {}\ncofactor = {}\norigin = {}\nfactors = {facs}\n",
                fx.show(&s.poly),
                fx.show(&s.cofactor),
                s.origin
            )))
        }
        Command::Goodvar => {
            let g = good_variable(ring, &f, &b, &oracle)?;
            Ok(Outcome::ok(format!(
                "alpha = {}\nF_alpha = {}\npsi={} {}\n",
                ring.show(&g.alpha),
                fx.show(g.f_alpha.poly()),
                g.psi.psi,
                g.psi.certainty
            )))
        }
        Command::Extend => {
            let h = h_of(cli, fx)?;
            let e = extend_value(ring, &f, h, &b, &oracle)?;
            let mut out = format!("value={} depth={} witness={}\n", e.value, e.depth, e.witness_str);
            for l in &e.log {
                let _ = writeln!(out, "# {l}");
            }
            Ok(Outcome::ok(out))
        }
        Command::Approx => {
            let one = UPoly::constant(Frac::one_n(ring.nvars()));
            let z = match &cli.h {
                Some(n) => Some((fx.poly(n)?, &one)),
                None => None,
            };
            let mut cs = vec![];
            for n in &cli.points {
                let p = fx.poly(n)?;
                if p.degree().unwrap_or(0) > 0 {
                    return Err(VqError::Fixture(format!("point {n} must not involve X")));
                }
                cs.push((n.clone(), p.coeff(0)));
            }
            let pts: Vec<Frac> = cs.iter().map(|(_, c)| c.clone()).collect();
            let p = approx_profile(ring, &f, z, &pts, &b, &oracle)?;
            let mut out = format!("d = {}\n", join(&p.d));
            let _ = writeln!(
                out,
                "coset k={} phi={} psi={}{} {}",
                p.k,
                p.phi,
                p.psi,
                if p.psi.is_full() { " (full)" } else { "" },
                if p.coset_certified { "CERTIFIED" } else { "UNCERTIFIED" }
            );
            let mut all_below = true;
            for ((n, c), pt) in cs.iter().zip(&p.points) {
                let bel = match pt.below {
                    Some(i) => format!("< d_{i} = {}", p.d[i]),
                    None => {
                        all_below = false;
                        "not below any d_i".into()
                    }
                };
                let _ = writeln!(out, "{n} = {}: {} {bel}", ring.show(c), pt.value);
            }
            let code = if p.coset_certified && all_below { 0 } else { 2 };
            Ok(Outcome { stdout: out, stderr: String::new(), code })
        }
        Command::Ok => {
            let h = h_of(cli, fx)?;
            let (terms, gamma) = ok_terms(ring, &f, h, &b, &oracle)?;
            let mut out = String::new();
            for (beta, m) in &terms {
                let _ = writeln!(out, "beta_{m} = {beta}");
            }
            let _ = writeln!(out, "gamma = {}", join(&gamma));
            match ok_stabilize(&terms, &gamma)? {
                Stabilization::Stable { iota, order } => {
                    let ord: Vec<String> = order.iter().map(|&k| terms[k].1.to_string()).collect();
                    let _ = writeln!(out, "iota={iota} order={}", ord.join("<"));
                    Ok(Outcome::ok(out))
                }
                Stabilization::Inconclusive => {
                    out.push_str("INCONCLUSIVE\n");
                    Ok(Outcome { stdout: out, stderr: String::new(), code: 2 })
                }
            }
        }
    }
}

/// beta_m = extended value of the m-th Hasse derivative of h, paired with
/// m, and gamma_i = nu(delta_i).
pub fn ok_terms(
    ring: &ValuedRing,
    f: &NagataPoly<Frac>,
    h: &UPoly<Frac>,
    b: &Budgets,
    oracle: &FactorSource,
) -> Result<(Vec<(GroupValue, u64)>, Vec<GroupValue>)> {
    let mut terms = vec![];
    for m in 0..=h.degree().ok_or(VqError::ZeroPoly)? {
        let hm = h.hasse(m);
        if hm.is_zero() {
            continue;
        }
        terms.push((extend_value(ring, f, &hm, b, oracle)?.value, m as u64));
    }
    let t = newton_run(ring, f, b.steps)?;
    Ok((terms, t.nu_delta.clone()))
}

fn join(vs: &[GroupValue]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn newton_report(fx: &Fixture, t: &NewtonTrace<Frac>, format: Format) -> String {
    let mut out = String::new();
    if format == Format::Text {
        let _ = writeln!(out, "F = {}", fx.show(t.f.poly()));
    }
    out.push_str("step\tnu_delta\tnu_sigma\tflags\n");
    for i in 0..t.steps() {
        let (d, s) = (&t.nu_delta[i], fx.ring.value_of(&t.sigmas[i + 1]));
        let (d, s) = if format == Format::Tsv { (d.tuple(), s.tuple()) } else { (d.to_string(), s.to_string()) };
        let _ = writeln!(out, "{i}\t{d}\t{s}\t{}", t.flags[i]);
    }
    if format == Format::Text {
        let _ = writeln!(out, "status = {}", t.status);
        for i in 0..t.steps().min(3) {
            let d = fx.ring.show(&t.deltas[i]);
            let s = fx.ring.show(&t.sigmas[i + 1]);
            if d.len() + s.len() < 240 {
                let _ = writeln!(out, "delta_{i} = {d}\nsigma_{} = {s}", i + 1);
            }
        }
    }
    out
}

/// The Newton invariants of F over `steps` steps. Returns the report and
/// whether everything passed.
pub fn check_report(fx: &Fixture, f: &NagataPoly<Frac>, steps: usize, format: Format) -> Result<(String, bool)> {
    let ring = &fx.ring;
    let t = newton_run(ring, f, steps)?;
    let mut rows: Vec<(String, bool)> = vec![];
    let all = |sel: &dyn Fn(&crate::newton::StepFlags) -> Option<bool>| t.flags.iter().all(|fl| sel(fl).unwrap_or(true));
    rows.push(("nagata".into(), all(&|fl| Some(fl.nagata))));
    rows.push(("doubling".into(), all(&|fl| fl.doubling)));
    rows.push(("fvalue".into(), all(&|fl| fl.fvalue)));
    rows.push(("an_square".into(), all(&|fl| fl.an_square)));
    rows.push(("congruence".into(), all(&|fl| fl.congruence)));
    let seq = if t.sigmas.len() > 3 { sequence_checks(ring, &t.sigmas[1..], None)?.pseudo_convergent } else { true };
    rows.push(("pseudo_convergent".into(), seq));
    let psi = psi_f(&t)?;
    rows.push(("psi_monotone".into(), psi.monotone));
    let mut out = String::new();
    if format == Format::Tsv {
        out.push_str(&newton_report(fx, &t, Format::Tsv));
        out.push('\n');
    }
    out.push_str("invariant\tresult\n");
    for (name, ok) in &rows {
        let _ = writeln!(out, "{name}\t{}", if *ok { "PASS" } else { "FAIL" });
    }
    let pass = rows.iter().all(|r| r.1);
    let _ = writeln!(out, "steps={} status={} {}", t.steps(), t.status, if pass { "ALL PASS" } else { "FAILURES" });
    Ok((out, pass))
}

/// Checks one fixture annotation against the library; returns the actual
/// value alongside the verdict.
pub fn check_expect(fx: &Fixture, e: &Expect, fname: &str, b: &Budgets) -> Result<(bool, String)> {
    let ring = &fx.ring;
    let oracle = fx.oracle()?;
    let actual = match e.tag.as_str() {
        "newton" => {
            let f = nagata_of(fx, &e.name)?;
            join(&newton_run(ring, &f, b.steps)?.nu_delta)
        }
        "psi" => {
            let f = nagata_of(fx, &e.name)?;
            let p = psi_f(&newton_run(ring, &f, b.steps)?)?;
            format!("{} {}", p.psi, p.certainty)
        }
        "fstar" => {
            let f = nagata_of(fx, &e.name)?;
            fx.show(&fstar(ring, &f, &oracle)?.poly)
        }
        "goodvar" => {
            let f = nagata_of(fx, &e.name)?;
            ring.show(&good_variable(ring, &f, b, &oracle)?.alpha)
        }
        "classify" => {
            let f = nagata_of(fx, fname)?;
            let mut t = NewtonTrace::new(f);
            classify(ring, &mut t, fx.poly(&e.name)?, b.steps, b.window, false)?.kind.to_string()
        }
        "extend" => {
            let f = nagata_of(fx, fname)?;
            extend_value(ring, &f, fx.poly(&e.name)?, b, &oracle)?.value.to_string()
        }
        other => return Err(VqError::Fixture(format!("unknown expect tag {other}"))),
    };
    let norm = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
    Ok((norm(&actual) == norm(&e.value), actual))
}
