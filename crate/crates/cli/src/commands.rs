//! Command definitions and their execution, separate from process exit so
//! tests can drive them directly.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use morita_core::bibundle::{points_groupoid, Bibundle};
use morita_core::groupoid::Groupoid;
use morita_core::laws::{run_all, LawConfig, DEFAULT_SEED};
use morita_core::morita::{
    invert_essential_equivalence, morita_equivalent, reconstruct_internal_groupoid, semidirect_product, MoritaCertificate,
};
use morita_core::par::Execution;
use serde_json::json;

use crate::document::{self, Document, DocumentError, Payload};

#[derive(Debug, Parser)]
#[command(name = "morita", version, about = "Finite groupoids, their actions, bibundles and Morita equivalence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the resulting document here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a document against the laws of its kind.
    Validate { file: PathBuf },
    /// List the orbits of an action.
    Orbits { action: PathBuf },
    /// Compose two bibundles, the first applied first.
    Compose { first: PathBuf, second: PathBuf },
    /// Push an action of the left groupoid along a bibundle.
    Apply { bibundle: PathBuf, action: PathBuf },
    /// Restrict an action along a functor.
    Restrict { functor: PathBuf, action: PathBuf },
    /// Induce an action along a functor.
    Induce { functor: PathBuf, action: PathBuf },
    /// Decide Morita equivalence, writing the equivalence bibundle if any.
    Morita { first: PathBuf, second: PathBuf },
    /// Invert an essential equivalence as a bibundle.
    Invert { functor: PathBuf },
    /// The semidirect product of an internal groupoid in actions.
    Semidirect { internal_groupoid: PathBuf },
    /// Recover the internal groupoid in actions carried by a bibundle.
    Reconstruct { bibundle: PathBuf },
    /// Pair two bibundles out of the same groupoid.
    Pair { first: PathBuf, second: PathBuf },
    /// The groupoid of points of a groupoid at a stage of the given size.
    Points { groupoid: PathBuf, stage: usize },
    /// Run the randomized law suites.
    CheckLaws {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_objects: usize,
        #[arg(long, default_value_t = 16)]
        max_arrows: usize,
        /// Cases per suite, overriding each suite's default.
        #[arg(long)]
        cases: Option<usize>,
        /// Run cases one after another.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("{0}")]
    Core(#[from] morita_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Document(e) if !e.is_content_error() => 2,
            CliError::Write { .. } => 2,
            _ => 1,
        }
    }
}

/// What a command produced: text for standard output and the exit status.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub status: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, status: 0 }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn load(path: &Path) -> Result<Document, CliError> {
    Ok(document::load(path)?)
}

fn json_line(value: serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("json values serialize");
    text.push('\n');
    text
}

/// Replaces `path` with `contents` through a temporary file in the same
/// directory, so a failure never leaves a partial file behind.
pub fn write_atomically(path: &Path, contents: &str) -> Result<(), CliError> {
    let err = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut file = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    file.write_all(contents.as_bytes()).map_err(err)?;
    file.as_file().sync_all().map_err(err)?;
    file.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

impl Cli {
    pub fn run(&self) -> Result<Outcome, CliError> {
        match &self.command {
            Command::Validate { file } => self.validate(file),
            Command::Orbits { action } => self.orbits(action),
            Command::Compose { first, second } => {
                let p = load(first)?.into_bibundle()?;
                let q = load(second)?.into_bibundle()?;
                let name = format!("{}-then-{}", stem(first), stem(second));
                self.emit(Document::new(name, Payload::Bibundle(p.compose(&q)?.into_sides())))
            }
            Command::Apply { bibundle, action } => {
                let p = load(bibundle)?.into_bibundle()?;
                let y = load(action)?.into_action()?;
                let name = format!("{}-applied-to-{}", stem(bibundle), stem(action));
                self.emit(Document::new(name, Payload::Action(p.apply(&y)?)))
            }
            Command::Restrict { functor, action } => {
                let f = load(functor)?.into_functor()?;
                let a = load(action)?.into_action()?;
                let name = format!("{}-restricted-along-{}", stem(action), stem(functor));
                self.emit(Document::new(name, Payload::Action(f.restrict(&a)?)))
            }
            Command::Induce { functor, action } => {
                let f = load(functor)?.into_functor()?;
                let y = load(action)?.into_action()?;
                let name = format!("{}-induced-along-{}", stem(action), stem(functor));
                self.emit(Document::new(name, Payload::Action(f.induce(&y)?)))
            }
            Command::Morita { first, second } => self.morita(first, second),
            Command::Invert { functor } => {
                let f = load(functor)?.into_functor()?;
                let certificate = invert_essential_equivalence(&f)?;
                let e = certificate.equivalence().expect("inversion yields an equivalence");
                let name = format!("{}-inverse", stem(functor));
                self.emit(Document::new(name, Payload::Bibundle(e.inverse.sides().clone())))
            }
            Command::Semidirect { internal_groupoid } => {
                let k = load(internal_groupoid)?.into_internal_groupoid()?;
                let name = format!("{}-semidirect", stem(internal_groupoid));
                self.emit(Document::new(name, Payload::Groupoid(semidirect_product(&k)?)))
            }
            Command::Reconstruct { bibundle } => {
                let p = load(bibundle)?.into_bibundle()?;
                let name = format!("{}-internal", stem(bibundle));
                self.emit(Document::new(name, Payload::InternalGroupoid(reconstruct_internal_groupoid(&p)?)))
            }
            Command::Pair { first, second } => {
                let p = load(first)?.into_bibundle()?;
                let q = load(second)?.into_bibundle()?;
                let name = format!("{}-paired-with-{}", stem(first), stem(second));
                self.emit(Document::new(name, Payload::Bibundle(Bibundle::pair(&p, &q)?.into_sides())))
            }
            Command::Points { groupoid, stage } => {
                let g = load(groupoid)?.into_groupoid()?;
                let name = format!("{}-points-{stage}", stem(groupoid));
                self.emit(Document::new(name, Payload::Groupoid(points_groupoid(&g, *stage))))
            }
            Command::CheckLaws {
                seed,
                max_objects,
                max_arrows,
                cases,
                sequential,
            } => {
                let config = LawConfig {
                    seed: *seed,
                    max_objects: *max_objects,
                    max_arrows: *max_arrows,
                    cases: *cases,
                    execution: if *sequential { Execution::Sequential } else { Execution::Parallel },
                };
                self.check_laws(&config)
            }
        }
    }

    /// Writes a document to the output file, or prints it.
    fn emit(&self, doc: Document) -> Result<Outcome, CliError> {
        let text = document::serialize(&doc);
        match &self.output {
            None => Ok(Outcome::ok(text)),
            Some(path) => {
                write_atomically(path, &text)?;
                let summary = match self.format {
                    Format::Human => format!("wrote {} '{}' to {}\n", doc.kind(), doc.name, path.display()),
                    Format::Json => json_line(json!({
                        "kind": doc.kind().as_str(),
                        "name": doc.name,
                        "output": path.display().to_string(),
                    })),
                };
                Ok(Outcome::ok(summary))
            }
        }
    }

    fn validate(&self, file: &Path) -> Result<Outcome, CliError> {
        let doc = document::load_unchecked(file)?;
        let report = doc.validate();
        let violations: Vec<String> = report.violations().iter().map(|v| v.to_string()).collect();
        let stdout = match self.format {
            Format::Human if violations.is_empty() => format!("{} '{}': valid\n", doc.kind(), doc.name),
            Format::Human => {
                let mut s = format!("{} '{}': {} violation(s)\n", doc.kind(), doc.name, violations.len());
                for v in &violations {
                    let _ = writeln!(s, "  {v}");
                }
                s
            }
            Format::Json => json_line(json!({
                "kind": doc.kind().as_str(),
                "name": doc.name,
                "valid": violations.is_empty(),
                "violations": violations,
            })),
        };
        Ok(Outcome {
            status: if violations.is_empty() { 0 } else { 1 },
            stdout,
        })
    }

    fn orbits(&self, file: &Path) -> Result<Outcome, CliError> {
        let action = load(file)?.into_action()?;
        let orbits = action.orbits().members();
        let stdout = match self.format {
            Format::Human => {
                let mut s = format!("{} orbit(s)\n", orbits.len());
                for (i, o) in orbits.iter().enumerate() {
                    let _ = writeln!(s, "  {i}: {o:?}");
                }
                s
            }
            Format::Json => json_line(json!({ "orbits": orbits })),
        };
        Ok(Outcome::ok(stdout))
    }

    fn morita(&self, first: &Path, second: &Path) -> Result<Outcome, CliError> {
        let h = Arc::new(load(first)?.into_groupoid()?);
        let g = Arc::new(load(second)?.into_groupoid()?);
        let certificate = morita_equivalent(&h, &g)?;
        if let (Some(path), Some(e)) = (&self.output, certificate.equivalence()) {
            let name = format!("{}-to-{}", stem(first), stem(second));
            let text = document::serialize(&Document::new(name, Payload::Bibundle(e.bibundle.sides().clone())));
            write_atomically(path, &text)?;
        }
        let stdout = match (&certificate, self.format) {
            (MoritaCertificate::Equivalent(e), Format::Human) => format!(
                "verdict: equivalent\ninvariant: {}\nbibundle carrier: {}\n",
                morita_core::morita::morita_invariant(&h),
                e.bibundle.len()
            ),
            (MoritaCertificate::Inequivalent { left, right }, Format::Human) => {
                let mut s = format!("verdict: inequivalent\nleft invariant:  {left}\nright invariant: {right}\n");
                let (only_left, only_right) = invariant_diff(left.groups(), right.groups());
                let _ = writeln!(s, "only left:  {}", bracketed(&only_left));
                let _ = writeln!(s, "only right: {}", bracketed(&only_right));
                s
            }
            (MoritaCertificate::Equivalent(e), Format::Json) => json_line(json!({
                "verdict": "equivalent",
                "invariant": morita_core::morita::morita_invariant(&h).to_string(),
                "bibundle_carrier": e.bibundle.len(),
            })),
            (MoritaCertificate::Inequivalent { left, right }, Format::Json) => {
                let (only_left, only_right) = invariant_diff(left.groups(), right.groups());
                json_line(json!({
                    "verdict": "inequivalent",
                    "left_invariant": left.to_string(),
                    "right_invariant": right.to_string(),
                    "only_left": only_left,
                    "only_right": only_right,
                }))
            }
        };
        Ok(Outcome::ok(stdout))
    }

    fn check_laws(&self, config: &LawConfig) -> Result<Outcome, CliError> {
        let outcomes = run_all(config);
        let cases: usize = outcomes.iter().map(|o| o.cases).sum();
        let passed: usize = outcomes.iter().map(|o| o.passed).sum();
        let ok = cases == passed;
        let stdout = match self.format {
            Format::Human => {
                let mut s = format!("seed {}\n", config.seed);
                for o in &outcomes {
                    let _ = writeln!(s, "{o}");
                }
                let _ = writeln!(s, "total: {passed}/{cases} instances verified");
                s
            }
            Format::Json => json_line(json!({
                "seed": config.seed,
                "suites": outcomes.iter().map(|o| json!({
                    "name": o.name,
                    "cases": o.cases,
                    "passed": o.passed,
                    "failures": o.failures,
                })).collect::<Vec<_>>(),
                "cases": cases,
                "passed": passed,
            })),
        };
        Ok(Outcome {
            stdout,
            status: if ok { 0 } else { 1 },
        })
    }
}

/// Multiset difference of two sorted lists, rendered.
fn invariant_diff<T: Ord + ToString>(left: &[T], right: &[T]) -> (Vec<String>, Vec<String>) {
    let (mut i, mut j) = (0, 0);
    let (mut only_left, mut only_right) = (Vec::new(), Vec::new());
    while i < left.len() || j < right.len() {
        match (left.get(i), right.get(j)) {
            (Some(a), Some(b)) if a == b => {
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                only_left.push(a.to_string());
                i += 1;
            }
            (Some(_), Some(b)) | (None, Some(b)) => {
                only_right.push(b.to_string());
                j += 1;
            }
            (Some(a), None) => {
                only_left.push(a.to_string());
                i += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (only_left, only_right)
}

fn bracketed(items: &[String]) -> String {
    format!("[{}]", items.join(", "))
}

/// Writes a groupoid document; a convenience for tests and scripts.
pub fn save_groupoid(path: &Path, name: &str, g: &Groupoid) -> Result<(), CliError> {
    write_atomically(path, &document::serialize(&Document::new(name, Payload::Groupoid(g.clone()))))
}
