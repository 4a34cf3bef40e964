//! Command-line front end. [`run`] takes the argument vector and returns the
//! exit code with the captured standard output and error text.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use multval::hahn::{HahnField, HahnSeries};
use multval::hensel::{
    dominant_index, eventual_order, hensel_config, hensel_lift, hensel_step, is_pseudo_limit, pc_check,
    residue_equation, HenselError, LiftStatus,
};
use multval::leading_terms::{axiom4_witness, rv, rv_sum};
use multval::multi_index::MultiIndex;
use multval::residue::{RationalFunctionShift, RationalIdentity, DEFAULT_BUDGET};
use multval::rho::{LinOp, RhoSpec, Sign};
use multval::sigma_poly::{make_generic, SigmaPoly};
use multval::syntax::{
    self, parse_config, parse_gamma, parse_linop, parse_rho, parse_rv, parse_series, parse_sigmapoly, CarrierSyntax,
    ParseError, ResidueKind,
};
use multval::value_group::{Gamma, Val, ValueGroup};

pub const CONFIG_ENV: &str = "MULTVAL_CONFIG";

#[derive(Parser, Debug)]
#[command(name = "multval", version, about = "Exact arithmetic for multiplicative valued difference fields")]
pub struct Cli {
    /// Order type of ρ, e.g. "algebraic [-2,0,1] in (1,2)".
    #[arg(long, global = true)]
    pub rho: Option<String>,

    /// Residue field: rational-id or rational-shift.
    #[arg(long, global = true)]
    pub residue: Option<String>,

    /// File with `rho = ...` and `residue = ...` lines.
    #[arg(long, global = true, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SeqArgs {
    /// File with one series per line.
    pub file: PathBuf,
    /// First index checked (0-based).
    #[arg(long, default_value_t = 0)]
    pub eta0: usize,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Sign of an operator on positive elements.
    Sign {
        #[arg(allow_hyphen_values = true)]
        linop: String,
    },
    /// Compare two value-group elements.
    Cmp {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Sum of value-group elements.
    Gadd {
        #[arg(allow_hyphen_values = true)]
        items: Vec<String>,
    },
    /// γ / L in the divisible group.
    Gdiv {
        #[arg(allow_hyphen_values = true)]
        gamma: String,
        #[arg(allow_hyphen_values = true)]
        linop: String,
    },
    /// Valuation of a series.
    Veval {
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// Evaluate a σ-polynomial at a series.
    Peval {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(allow_hyphen_values = true)]
        series: String,
        /// Drop terms with exponent above this value.
        #[arg(long, allow_hyphen_values = true)]
        cutoff: Option<String>,
    },
    /// Taylor coefficient P_(I); the index is written like `1,0`.
    Taylor {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(allow_hyphen_values = true)]
        index: String,
    },
    /// (order, degree in the top variable, total degree).
    Complexity {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// σ-Hensel configuration of (P, a).
    Config {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// One Hensel improvement step.
    Step {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// Iterated Hensel lifting.
    Lift {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(allow_hyphen_values = true)]
        series: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = 32)]
        max_iter: usize,
    },
    /// Leading term of a series.
    Rv {
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// Partial sum of leading terms.
    Rvsum {
        #[arg(allow_hyphen_values = true)]
        items: Vec<String>,
    },
    /// Pseudo-convergence check of a finite sequence.
    PcCheck(SeqArgs),
    /// Whether a series is a pseudo-limit of a finite sequence.
    PseudoLimit {
        #[arg(allow_hyphen_values = true)]
        series: String,
        #[command(flatten)]
        seq: SeqArgs,
    },
    /// Eventual order of affine maps, each written `c : n`.
    EventualOrder {
        #[arg(allow_hyphen_values = true)]
        fns: Vec<String>,
    },
    /// Multi-indices dominating v(P_(I)(a)) + |I|·γ.
    Dominant {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(allow_hyphen_values = true)]
        series: String,
        #[arg(allow_hyphen_values = true)]
        gamma: String,
    },
    /// An element of value γ generic for every listed polynomial.
    Generic {
        #[arg(allow_hyphen_values = true)]
        gamma: String,
        polys: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// The witness t^γ of (P^σ)(t^γ) = 1 for the minimal polynomial P of ρ.
    Witness {
        #[arg(allow_hyphen_values = true)]
        gamma: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    /// Bad input; exit 2.
    Usage(String),
    /// A structured mathematical failure; exit 1 with a report.
    Math(String),
}

type CmdResult = Result<String, Failure>;

fn parse_err(what: &str, text: &str, e: ParseError) -> Failure {
    Failure::Usage(format!("cannot parse {what} `{text}`: {e}"))
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(out) => Output { code: 0, stdout: out, stderr: String::new() },
        Err(Failure::Math(out)) => Output { code: 1, stdout: out, stderr: String::new() },
        Err(Failure::Usage(msg)) => Output {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn settings(cli: &Cli) -> Result<(RhoSpec, ResidueKind), Failure> {
    let mut rho = None;
    let mut residue = None;
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg = parse_config(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        rho = cfg.rho;
        residue = cfg.residue;
    }
    if let Some(text) = &cli.rho {
        rho = Some(parse_rho(text).map_err(|e| parse_err("rho", text, e))?);
    }
    if let Some(text) = &cli.residue {
        residue = Some(
            ResidueKind::parse(text)
                .ok_or_else(|| Failure::Usage(format!("unknown residue field `{text}` (rational-id, rational-shift)")))?,
        );
    }
    let rho = rho.ok_or_else(|| Failure::Usage(format!("no rho given (use --rho, --config or {CONFIG_ENV})")))?;
    Ok((rho, residue.unwrap_or(ResidueKind::RationalId)))
}

fn execute(cli: &Cli) -> CmdResult {
    let (rho, kind) = settings(cli)?;
    match kind {
        ResidueKind::RationalId => run_in(&HahnField::new(rho, RationalIdentity), &cli.command),
        ResidueKind::RationalShift => run_in(&HahnField::new(rho, RationalFunctionShift), &cli.command),
    }
}

struct Ctx<'a, F: CarrierSyntax> {
    k: &'a HahnField<F>,
}

impl<'a, F: CarrierSyntax> Ctx<'a, F> {
    fn g(&self) -> &ValueGroup {
        self.k.group()
    }

    fn linop(&self, text: &str) -> Result<LinOp, Failure> {
        parse_linop(text).map_err(|e| parse_err("operator", text, e))
    }

    fn gamma(&self, text: &str) -> Result<Gamma, Failure> {
        parse_gamma(text, self.g()).map_err(|e| parse_err("value", text, e))
    }

    fn series(&self, text: &str) -> Result<HahnSeries<F::Elem>, Failure> {
        parse_series(text, self.k).map_err(|e| parse_err("series", text, e))
    }

    fn poly(&self, text: &str) -> Result<SigmaPoly<F::Elem>, Failure> {
        parse_sigmapoly(text, self.k).map_err(|e| parse_err("sigma-polynomial", text, e))
    }

    fn poly_series(&self, p: &str, a: &str) -> Result<(SigmaPoly<F::Elem>, HahnSeries<F::Elem>), Failure> {
        Ok((self.poly(p)?, self.series(a)?))
    }

    fn sequence(&self, args: &SeqArgs) -> Result<Vec<HahnSeries<F::Elem>>, Failure> {
        let text = fs::read_to_string(&args.file)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.file.display())))?;
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(n, l)| {
                parse_series(l, self.k).map_err(|e| {
                    Failure::Usage(format!("{} line {}: {}", args.file.display(), n + 1, ParseError { line: n + 1, ..e }))
                })
            })
            .collect()
    }

    fn show(&self, x: &HahnSeries<F::Elem>) -> String {
        syntax::print_series(self.k, x)
    }

    fn equation(&self, alphas: &[F::Elem]) -> String {
        let r = self.k.residue();
        let mut parts = vec![(false, "1".to_string())];
        for (j, a) in alphas.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            let var = match j {
                0 => "x".to_string(),
                1 => "σ̄(x)".to_string(),
                _ => format!("σ̄^{j}(x)"),
            };
            let (neg, mag) = r.split(a);
            let body = match mag {
                None => var,
                Some(m) => format!("{m}*{var}"),
            };
            parts.push((neg, body));
        }
        let mut out = String::new();
        for (i, (neg, body)) in parts.into_iter().enumerate() {
            if i > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            out.push_str(&body);
        }
        out + " = 0"
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn parse_index(text: &str, nvars: usize) -> Result<Option<MultiIndex>, Failure> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let entries: Vec<u32> = inner
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("cannot parse multi-index `{text}` (expected e.g. 1,0)")))?;
    if entries.iter().skip(nvars).any(|&e| e > 0) {
        return Ok(None);
    }
    Ok(Some(MultiIndex::new(entries).resized(nvars.max(1))))
}

fn run_in<F: CarrierSyntax>(k: &HahnField<F>, cmd: &Command) -> CmdResult {
    let cx = Ctx { k };
    let g = k.group();
    match cmd {
        Command::Sign { linop } => {
            let l = cx.linop(linop)?;
            Ok(match k.rho().sign(&l) {
                Sign::Positive => "positive",
                Sign::Negative => "negative",
                Sign::Zero => "zero",
            }
            .to_string()
                + "\n")
        }
        Command::Cmp { a, b } => {
            let ord = g.compare(&cx.gamma(a)?, &cx.gamma(b)?);
            Ok(format!("{}\n", match ord {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            }))
        }
        Command::Gadd { items } => {
            let xs = items.iter().map(|s| cx.gamma(s)).collect::<Result<Vec<_>, _>>()?;
            Ok(format!("{}\n", g.sum(&xs)))
        }
        Command::Gdiv { gamma, linop } => {
            let x = cx.gamma(gamma)?;
            let l = cx.linop(linop)?;
            match g.divide(&x, &l) {
                Ok(q) => Ok(format!("{q}\n")),
                Err(e) => Err(Failure::Math(format!("error: {e}\n"))),
            }
        }
        Command::Veval { series } => Ok(format!("{}\n", cx.series(series)?.valuation())),
        Command::Peval { poly, series, cutoff } => {
            let (p, a) = cx.poly_series(poly, series)?;
            let mut v = p.eval(k, &a);
            if let Some(c) = cutoff {
                v = k.truncate(&v, &Val::Finite(cx.gamma(c)?));
            }
            Ok(format!("{}\n", cx.show(&v)))
        }
        Command::Taylor { poly, index } => {
            let p = cx.poly(poly)?;
            let out = match parse_index(index, p.nvars())? {
                None => SigmaPoly::zero(p.order_bound()),
                Some(i) => p.taylor_coeff(k, &i),
            };
            Ok(format!("{}\n", syntax::print_sigmapoly(k, &out)))
        }
        Command::Complexity { poly } => {
            let c = cx.poly(poly)?.complexity();
            let show = |x: Option<String>| x.unwrap_or_else(|| "-inf".to_string());
            Ok(format!(
                "({}, {}, {})\n",
                show(c.order.map(|v| v.to_string())),
                show(c.degree_in_order.map(|v| v.to_string())),
                show(c.degree.map(|v| v.to_string()))
            ))
        }
        Command::Config { poly, series } => {
            let (p, a) = cx.poly_series(poly, series)?;
            match hensel_config(k, &p, &a) {
                Some(cfg) => {
                    let mins: Vec<String> = cfg.minimizing_indices.iter().map(|i| i.to_string()).collect();
                    let mut out = format!("gamma={} strict={}", cfg.gamma, yes_no(cfg.strict));
                    if let Some(i) = cfg.i_value {
                        out.push_str(&format!(" i={i}"));
                    }
                    out.push_str(&format!(" minimizers={}\n", mins.join(",")));
                    Ok(out)
                }
                None => Err(Failure::Math("NotInConfiguration\n".to_string())),
            }
        }
        Command::Step { poly, series } => {
            let (p, a) = cx.poly_series(poly, series)?;
            let Some(cfg) = hensel_config(k, &p, &a) else {
                return Err(Failure::Math("NotInConfiguration\n".to_string()));
            };
            match hensel_step(k, &p, &a, &cfg) {
                Ok(b) => Ok(format!("b = {}\nvP={}\n", cx.show(&b), p.eval(k, &b).valuation())),
                Err(HenselError::SolverFailed { alphas }) => {
                    Err(Failure::Math(format!("SolverFailed: {}\n", cx.equation(&alphas))))
                }
                Err(e) => Err(Failure::Math(format!("error: {e}\n"))),
            }
        }
        Command::Lift { poly, series, target, max_iter } => {
            let (p, a) = cx.poly_series(poly, series)?;
            let target = cx.gamma(target)?;
            let report = hensel_lift(k, &p, &a, &target, *max_iter);
            let mut out = format!("{} b = {}\n", report.status.name(), cx.show(&report.result));
            for (i, e) in report.trace.iter().enumerate() {
                out.push_str(&format!("iter {}: gamma={} vP={}\n", i + 1, e.gamma, e.value));
            }
            match &report.status {
                LiftStatus::RootFound | LiftStatus::PrecisionReached => Ok(out),
                LiftStatus::SolverFailed { alphas } => {
                    out.push_str(&format!("equation: {}\n", cx.equation(alphas)));
                    Err(Failure::Math(out))
                }
                _ => Err(Failure::Math(out)),
            }
        }
        Command::Rv { series } => Ok(format!("{}\n", syntax::print_rv(k, &rv(k, &cx.series(series)?)))),
        Command::Rvsum { items } => {
            let rs = items
                .iter()
                .map(|s| parse_rv(s, k).map_err(|e| parse_err("leading term", s, e)))
                .collect::<Result<Vec<_>, _>>()?;
            match rv_sum(k, &rs) {
                Some(r) => Ok(format!("{}\n", syntax::print_rv(k, &r))),
                None => Err(Failure::Math("undefined\n".to_string())),
            }
        }
        Command::PcCheck(args) => {
            let seq = cx.sequence(args)?;
            let rep = pc_check(k, &seq, args.eta0).map_err(|e| Failure::Usage(e.to_string()))?;
            let gammas: Vec<String> = rep.gammas.iter().map(|v| v.to_string()).collect();
            let mut out = format!("pc: {}\ngammas: {}\n", yes_no(rep.is_pc), gammas.join(", "));
            for v in &rep.violations {
                out.push_str(&format!("violation: {v:?}\n"));
            }
            if rep.is_pc {
                Ok(out)
            } else {
                Err(Failure::Math(out))
            }
        }
        Command::PseudoLimit { series, seq } => {
            let a = cx.series(series)?;
            let xs = cx.sequence(seq)?;
            let ok = is_pseudo_limit(k, &a, &xs, seq.eta0).map_err(|e| Failure::Usage(e.to_string()))?;
            let out = format!("pseudo-limit: {}\n", yes_no(ok));
            if ok {
                Ok(out)
            } else {
                Err(Failure::Math(out))
            }
        }
        Command::EventualOrder { fns } => {
            let mut parsed = Vec::new();
            for f in fns {
                let Some((c, n)) = f.split_once(':') else {
                    return Err(Failure::Usage(format!("expected `c : n`, got `{f}`")));
                };
                parsed.push((cx.gamma(c)?, cx.linop(n)?));
            }
            match eventual_order(g, &parsed) {
                Ok((perm, th)) => {
                    let p: Vec<String> = perm.iter().map(|i| i.to_string()).collect();
                    Ok(format!("order: {}\nthreshold: {th}\n", p.join(" ")))
                }
                Err(e) => Err(Failure::Math(format!("error: {e}\n"))),
            }
        }
        Command::Dominant { poly, series, gamma } => {
            let (p, a) = cx.poly_series(poly, series)?;
            let gm = cx.gamma(gamma)?;
            match dominant_index(k, &p, &a, &gm) {
                Ok(ix) => {
                    let s: Vec<String> = ix.iter().map(|i| i.to_string()).collect();
                    Ok(format!("{}\n", s.join(" ")))
                }
                Err(e) => Err(Failure::Math(format!("error: {e}\n"))),
            }
        }
        Command::Generic { gamma, polys, budget } => {
            let gm = cx.gamma(gamma)?;
            let ps = polys.iter().map(|p| cx.poly(p)).collect::<Result<Vec<_>, _>>()?;
            match make_generic(k, &ps, &gm, *budget) {
                Ok(Some(a)) => Ok(format!("{}\n", cx.show(&a))),
                Ok(None) => Err(Failure::Math("none\n".to_string())),
                Err(e) => Err(Failure::Math(format!("error: {e}\n"))),
            }
        }
        Command::Witness { gamma } => {
            let w = axiom4_witness(k, &cx.gamma(gamma)?);
            let status = if !w.applicable {
                "not applicable".to_string()
            } else {
                format!("verified: {}", yes_no(w.verified))
            };
            Ok(format!("{}\n{status}\n", cx.show(&w.witness)))
        }
    }
}

/// The residue equation of a configured pair, for callers that only want the
/// equation text.
pub fn equation_text<F: CarrierSyntax>(k: &HahnField<F>, p: &SigmaPoly<F::Elem>, a: &HahnSeries<F::Elem>) -> Option<String> {
    let cfg = hensel_config(k, p, a)?;
    Some(Ctx { k }.equation(&residue_equation(k, p, a, &cfg)))
}
