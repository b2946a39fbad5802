//! Command-line front end for `fo-unify`.
//!
//! [`run`] takes the argument vector and returns the exit code with the
//! rendered output, so the binary is a thin wrapper and tests can drive the
//! same code in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fo_unify::subst::MatchFailure;
use fo_unify::syntax::{parse_substitution_inferring, parse_term_inferring};
use fo_unify::term::render_positions;
use fo_unify::{
    match_terms, parse_signature, parse_substitution, parse_term, Algorithm, Failure, MatchResult,
    ParseError, Position, Signature, Substitution, Term, TraceStep, UnifyOutcome,
};

/// Environment variable naming the default signature file.
pub const SIGNATURE_ENV: &str = "FO_UNIFY_SIGNATURE";

pub const EXIT_OK: i32 = 0;
/// Not unifiable, no match, or an invalid position.
pub const EXIT_FAILED: i32 = 1;
/// Unreadable or malformed input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fo-unify",
    version,
    about = "First-order syntactic unification"
)]
struct Cli {
    /// Signature file with one `name/arity` declaration per line. Without it
    /// symbols are declared on first use.
    #[arg(long, global = true, value_name = "FILE", env = SIGNATURE_ENV)]
    sig: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Text)]
    output: OutputMode,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    /// Human-readable lines.
    Text,
    /// `key=value` lines, one record per result.
    Structured,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a most general unifier of two terms.
    Unify {
        s: String,
        t: String,
        /// classic, robinson, efficient or mm (equation-set solver).
        #[arg(long, default_value_t = Algorithm::Robinson)]
        algorithm: Algorithm,
        /// Print one line per resolved difference before the result.
        #[arg(long)]
        trace: bool,
    },
    /// List the positions of a term.
    Positions { term: String },
    /// Print the subterm at a position (`e` is the root, `2.1` a path).
    Subterm { term: String, position: String },
    /// Replace the subterm at a position.
    Replace {
        term: String,
        position: String,
        replacement: String,
    },
    /// Apply a substitution `{X -> t, ...}` to a term.
    Apply { subst: String, term: String },
    /// Compose two substitutions; the second is applied first.
    Compose { sigma: String, tau: String },
    /// Find a substitution instantiating the pattern to the target.
    Match { pattern: String, target: String },
}

/// Settings shared by all commands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionConfig {
    pub signature_path: Option<PathBuf>,
    pub algorithm: Algorithm,
    pub trace: bool,
    pub output: OutputMode,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            signature_path: None,
            algorithm: Algorithm::Robinson,
            trace: false,
            output: OutputMode::Text,
        }
    }
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(code: i32) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: String::new(),
        }
    }
}

/// Runs one invocation. The first element of `args` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let mut out = Outcome::new(code);
            if e.use_stderr() {
                out.stderr = e.render().to_string();
            } else {
                out.stdout = e.render().to_string();
            }
            return out;
        }
    };
    let mut config = SessionConfig {
        signature_path: cli.sig,
        output: cli.output,
        ..SessionConfig::default()
    };
    if let Command::Unify {
        algorithm, trace, ..
    } = &cli.command
    {
        config.algorithm = *algorithm;
        config.trace = *trace;
    }
    let mut out = Outcome::new(EXIT_OK);
    let mut session = match Session::open(&config) {
        Ok(s) => s,
        Err(message) => return error(&config, message),
    };
    let code = match &cli.command {
        Command::Unify { s, t, .. } => session.unify(s, t, &mut out.stdout),
        other => session.utility(other, &mut out.stdout, &mut out.stderr),
    };
    match code {
        Ok(code) => {
            out.code = code;
            out
        }
        Err(message) => error(&config, message),
    }
}

/// Renders an input error (exit 2).
fn error(config: &SessionConfig, message: String) -> Outcome {
    let mut out = Outcome::new(EXIT_INPUT);
    match config.output {
        OutputMode::Text => out.stderr = format!("error: {message}\n"),
        OutputMode::Structured => out.stdout = format!("status=error\nmessage={message}\n"),
    }
    out
}

struct Session {
    sig: Signature,
    inferring: bool,
    config: SessionConfig,
}

impl Session {
    fn open(config: &SessionConfig) -> Result<Session, String> {
        let (sig, inferring) = match &config.signature_path {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read signature {}: {e}", path.display()))?;
                let sig = parse_signature(&text).map_err(|e| format!("{}: {e}", path.display()))?;
                (sig, false)
            }
            None => (Signature::new(), true),
        };
        Ok(Session {
            sig,
            inferring,
            config: config.clone(),
        })
    }

    fn term(&mut self, text: &str) -> Result<Term, String> {
        let parsed = if self.inferring {
            parse_term_inferring(text, &mut self.sig)
        } else {
            parse_term(text, &self.sig)
        };
        parsed.map_err(|e| describe(text, e))
    }

    fn subst(&mut self, text: &str) -> Result<Substitution, String> {
        let parsed = if self.inferring {
            parse_substitution_inferring(text, &mut self.sig)
        } else {
            parse_substitution(text, &self.sig)
        };
        parsed.map_err(|e| describe(text, e))
    }

    fn structured(&self) -> bool {
        self.config.output == OutputMode::Structured
    }

    fn unify(&mut self, s: &str, t: &str, out: &mut String) -> Result<i32, String> {
        let s = self.term(s)?;
        let t = self.term(t)?;
        let algorithm = self.config.algorithm;
        let mut steps: Vec<TraceStep> = Vec::new();
        let outcome = if self.config.trace {
            let mut sink = |step: &TraceStep| steps.push(step.clone());
            algorithm.run_traced(&s, &t, Some(&mut sink))
        } else {
            algorithm.run(&s, &t)
        };
        let structured = self.structured();
        for step in &steps {
            if structured {
                let _ = writeln!(out, "trace={step}");
            } else {
                let _ = writeln!(out, "{step}");
            }
        }
        match &outcome {
            UnifyOutcome::Unified { mgu, steps } if structured => {
                let _ = write!(
                    out,
                    "status=unified\nalgorithm={algorithm}\nmgu={mgu}\nsteps={steps}\n"
                );
            }
            UnifyOutcome::Unified { mgu, .. } => {
                let _ = writeln!(out, "{mgu}");
            }
            UnifyOutcome::Failed(failure) if structured => {
                let _ = write!(out, "status=failed\nalgorithm={algorithm}\n");
                match failure {
                    Failure::Clash {
                        position,
                        left,
                        right,
                    } => {
                        let _ = write!(
                            out,
                            "cause=clash\nleft={left}\nright={right}\nposition={position}\n"
                        );
                    }
                    Failure::OccursCheck {
                        var,
                        term,
                        position,
                    } => {
                        let _ = write!(
                            out,
                            "cause=occurs\nvariable={var}\nterm={term}\nposition={position}\n"
                        );
                    }
                }
                let _ = writeln!(out, "diagnostic=fail: {failure}");
            }
            UnifyOutcome::Failed(failure) => {
                let _ = writeln!(out, "fail: {failure}");
            }
        }
        Ok(if outcome.is_unified() {
            EXIT_OK
        } else {
            EXIT_FAILED
        })
    }

    /// Runs a utility subcommand. Input errors are returned; domain errors
    /// are rendered and exit with [`EXIT_FAILED`].
    fn utility(
        &mut self,
        command: &Command,
        out: &mut String,
        err: &mut String,
    ) -> Result<i32, String> {
        let result: Result<String, String> = match command {
            Command::Unify { .. } => unreachable!("handled by Session::unify"),
            Command::Positions { term } => Ok(render_positions(&self.term(term)?.positions())),
            Command::Subterm { term, position } => {
                let t = self.term(term)?;
                let p = position_arg(position)?;
                t.subterm_at(&p)
                    .map(Term::to_string)
                    .map_err(|e| e.to_string())
            }
            Command::Replace {
                term,
                position,
                replacement,
            } => {
                let t = self.term(term)?;
                let p = position_arg(position)?;
                let r = self.term(replacement)?;
                t.replace_at(&p, r)
                    .map(|t| t.to_string())
                    .map_err(|e| e.to_string())
            }
            Command::Apply { subst, term } => {
                let sigma = self.subst(subst)?;
                let t = self.term(term)?;
                Ok(sigma.apply(&t).to_string())
            }
            Command::Compose { sigma, tau } => {
                let sigma = self.subst(sigma)?;
                let tau = self.subst(tau)?;
                Ok(sigma.compose(&tau).to_string())
            }
            Command::Match { pattern, target } => {
                let p = self.term(pattern)?;
                let t = self.term(target)?;
                match match_terms(&p, &t) {
                    MatchResult::Matched(w) => Ok(w.to_string()),
                    MatchResult::NoMatch { reason, at } => {
                        return Ok(self.no_match(reason, &at, out));
                    }
                }
            }
        };
        let structured = self.structured();
        Ok(match result {
            Ok(rendered) if structured => {
                let _ = write!(out, "status=ok\nresult={rendered}\n");
                EXIT_OK
            }
            Ok(rendered) => {
                let _ = writeln!(out, "{rendered}");
                EXIT_OK
            }
            Err(message) if structured => {
                let _ = write!(out, "status=failed\nmessage={message}\n");
                EXIT_FAILED
            }
            Err(message) => {
                let _ = writeln!(err, "error: {message}");
                EXIT_FAILED
            }
        })
    }

    fn no_match(&self, reason: MatchFailure, at: &Position, out: &mut String) -> i32 {
        if self.structured() {
            let cause = match reason {
                MatchFailure::Clash => "clash",
                MatchFailure::InconsistentBinding => "inconsistent",
            };
            let _ = write!(out, "status=failed\ncause={cause}\nposition={at}\n");
        } else {
            let _ = writeln!(out, "no match: {reason} at {at}");
        }
        EXIT_FAILED
    }
}

fn position_arg(text: &str) -> Result<Position, String> {
    text.parse()
        .map_err(|e: fo_unify::term::PositionParseError| e.to_string())
}

fn describe(text: &str, e: ParseError) -> String {
    format!("`{text}`: {e}")
}
