//! The job file format.
//!
//! ```text
//! field Q                      # or: field GF 32003
//! generator x 1
//! generator y 1
//! relation "y*y"
//! differential { x = "y*y" }
//! truncate D=10 L=6 Dint=9
//! assert_noetherian true
//! module trivial_k             # regular | diagonal_bimodule | semifree { e0 0 = "0" ... }
//! cmd smoothness
//! output text                  # or: structured
//! ```
//!
//! Statements may span lines; `#` starts a comment.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use dgha_core::Field;

use crate::error::JobError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Cohomology,
    Resolve,
    ConeLength,
    Smoothness,
    Gldim,
    EmCheck,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Cohomology, Command::Resolve, Command::ConeLength, Command::Smoothness, Command::Gldim, Command::EmCheck];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Cohomology => "cohomology",
            Command::Resolve => "resolve",
            Command::ConeLength => "cone-length",
            Command::Smoothness => "smoothness",
            Command::Gldim => "gldim",
            Command::EmCheck => "em-check",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown command `{s}` (expected one of cohomology, resolve, cone-length, smoothness, gldim, em-check)"))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Structured,
}

/// One generator of an inline semi-free module: `name degree = "differential"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemifreeGenerator {
    pub name: String,
    pub degree: i32,
    pub d: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleSelector {
    TrivialK,
    Regular,
    DiagonalBimodule,
    Semifree(Vec<SemifreeGenerator>),
}

impl ModuleSelector {
    pub fn keyword(&self) -> &'static str {
        match self {
            ModuleSelector::TrivialK => "trivial_k",
            ModuleSelector::Regular => "regular",
            ModuleSelector::DiagonalBimodule => "diagonal_bimodule",
            ModuleSelector::Semifree(_) => "semifree",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub field: Field,
    pub generators: Vec<(String, usize)>,
    pub relations: Vec<String>,
    /// `(generator, image)`; generators not listed have zero differential.
    pub differential: Vec<(String, String)>,
    /// Degree truncation `D`.
    pub truncation: usize,
    /// Homological length `L` of graded resolutions.
    pub stages: usize,
    /// Internal-degree cap; `None` uses the whole certified range.
    pub window: Option<i32>,
    pub assert_noetherian: bool,
    pub module: ModuleSelector,
    pub command: Command,
    pub output: OutputMode,
}

pub const DEFAULT_STAGES: usize = 6;

// ---------------------------------------------------------------------------
// Lexing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Open,
    Close,
    Eq,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, JobError> {
    let mut out = Vec::new();
    for (l, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (l + 1, i + 1);
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '{' | '}' | '=' => {
                    let tok = match c {
                        '{' => Tok::Open,
                        '}' => Tok::Close,
                        _ => Tok::Eq,
                    };
                    out.push(Token { tok, line, col });
                    i += 1;
                }
                '"' => {
                    let start = i + 1;
                    let Some(len) = chars[start..].iter().position(|&c| c == '"') else {
                        return Err(JobError::syntax(line, col, "unterminated string"));
                    };
                    out.push(Token { tok: Tok::Str(chars[start..start + len].iter().collect()), line, col });
                    i = start + len + 1;
                }
                _ => {
                    let start = i;
                    while i < chars.len() && !chars[i].is_whitespace() && !"{}=\"#".contains(chars[i]) {
                        i += 1;
                    }
                    out.push(Token { tok: Tok::Word(chars[start..i].iter().collect()), line, col });
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.col))
    }

    fn error(&self, msg: impl Into<String>) -> JobError {
        let (line, col) = self.here();
        JobError::syntax(line, col, msg)
    }

    fn next(&mut self, what: &str) -> Result<Token, JobError> {
        let t = self.peek().cloned().ok_or_else(|| self.error(format!("expected {what}, found end of input")))?;
        self.pos += 1;
        Ok(t)
    }

    fn word(&mut self, what: &str) -> Result<(String, Token), JobError> {
        let t = self.next(what)?;
        match &t.tok {
            Tok::Word(w) => Ok((w.clone(), t)),
            _ => Err(JobError::syntax(t.line, t.col, format!("expected {what}"))),
        }
    }

    fn string(&mut self, what: &str) -> Result<(String, Token), JobError> {
        let t = self.next(what)?;
        match &t.tok {
            Tok::Str(s) => Ok((s.clone(), t)),
            _ => Err(JobError::syntax(t.line, t.col, format!("expected {what} in double quotes"))),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), JobError> {
        let t = self.next(what)?;
        if t.tok == tok {
            Ok(())
        } else {
            Err(JobError::syntax(t.line, t.col, format!("expected {what}")))
        }
    }

    fn number<T: FromStr>(&mut self, what: &str) -> Result<T, JobError> {
        let (w, t) = self.word(what)?;
        w.parse().map_err(|_| JobError::syntax(t.line, t.col, format!("expected {what}, found `{w}`")))
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek().is_some_and(|t| &t.tok == tok)
    }
}

/// Where a polynomial string sits in the source, for error positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct SourcePos {
    pub line: usize,
    pub col: usize,
}

/// Source positions of the polynomial strings of a parsed job, in the
/// order relations, differential, semi-free differentials.
#[derive(Clone, Debug, Default)]
pub(crate) struct Positions {
    pub relations: Vec<SourcePos>,
    pub differential: Vec<SourcePos>,
    pub semifree: Vec<SourcePos>,
}

#[derive(Default)]
struct Draft {
    field: Option<Field>,
    generators: Vec<(String, usize)>,
    relations: Vec<String>,
    differential: Vec<(String, String)>,
    truncate: Option<(Option<usize>, Option<usize>, Option<i32>)>,
    assert_noetherian: Option<bool>,
    module: Option<ModuleSelector>,
    command: Option<Command>,
    output: Option<OutputMode>,
}

fn once<T>(slot: &mut Option<T>, value: T, t: &Token, key: &str) -> Result<(), JobError> {
    if slot.is_some() {
        return Err(JobError::syntax(t.line, t.col, format!("`{key}` given twice")));
    }
    *slot = Some(value);
    Ok(())
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn parse_with_positions(text: &str) -> Result<(JobSpec, Positions), JobError> {
    let toks = lex(text)?;
    let end = (text.lines().count().max(1), text.lines().last().map_or(0, |l| l.chars().count()) + 1);
    let mut p = Parser { toks, pos: 0, end };
    let mut d = Draft::default();
    let mut pos = Positions::default();
    while p.peek().is_some() {
        let (key, kt) = p.word("a statement keyword")?;
        match key.as_str() {
            "field" => {
                let (f, ft) = p.word("a field (Q or GF p)")?;
                let field = match f.as_str() {
                    "Q" => Field::Rationals,
                    "GF" => Field::PrimeField(p.number("a prime")?),
                    _ => return Err(JobError::syntax(ft.line, ft.col, format!("unknown field `{f}`"))),
                };
                once(&mut d.field, field, &kt, "field")?;
            }
            "generator" => {
                let (name, nt) = p.word("a generator name")?;
                if !is_identifier(&name) {
                    return Err(JobError::syntax(nt.line, nt.col, format!("`{name}` is not a valid name")));
                }
                let degree = p.number("a generator degree")?;
                d.generators.push((name, degree));
            }
            "relation" => {
                let (r, rt) = p.string("a relation")?;
                d.relations.push(r);
                pos.relations.push(SourcePos { line: rt.line, col: rt.col + 1 });
            }
            "differential" => {
                p.expect(Tok::Open, "`{`")?;
                while !p.at(&Tok::Close) {
                    let (name, _) = p.word("a generator name or `}`")?;
                    p.expect(Tok::Eq, "`=`")?;
                    let (img, it) = p.string("a differential")?;
                    d.differential.push((name, img));
                    pos.differential.push(SourcePos { line: it.line, col: it.col + 1 });
                }
                p.expect(Tok::Close, "`}`")?;
            }
            "truncate" => {
                let mut values = (None, None, None);
                while let Some(Token { tok: Tok::Word(k), .. }) = p.peek().cloned() {
                    if !matches!(k.as_str(), "D" | "L" | "Dint") {
                        break;
                    }
                    let (_, t) = p.word("a truncation key")?;
                    p.expect(Tok::Eq, "`=`")?;
                    let dup = match k.as_str() {
                        "D" => values.0.replace(p.number("a degree")?).is_some(),
                        "L" => values.1.replace(p.number("a stage count")?).is_some(),
                        _ => values.2.replace(p.number("a degree")?).is_some(),
                    };
                    if dup {
                        return Err(JobError::syntax(t.line, t.col, format!("`{k}` given twice")));
                    }
                }
                if values == (None, None, None) {
                    return Err(p.error("expected D=, L= or Dint="));
                }
                once(&mut d.truncate, values, &kt, "truncate")?;
            }
            "assert_noetherian" => {
                let (v, vt) = p.word("true or false")?;
                let flag = match v.as_str() {
                    "true" => true,
                    "false" => false,
                    _ => return Err(JobError::syntax(vt.line, vt.col, "expected true or false")),
                };
                once(&mut d.assert_noetherian, flag, &kt, "assert_noetherian")?;
            }
            "module" => {
                let (m, mt) = p.word("a module")?;
                let module = match m.as_str() {
                    "trivial_k" => ModuleSelector::TrivialK,
                    "regular" => ModuleSelector::Regular,
                    "diagonal_bimodule" => ModuleSelector::DiagonalBimodule,
                    "semifree" => {
                        p.expect(Tok::Open, "`{`")?;
                        let mut gens = Vec::new();
                        while !p.at(&Tok::Close) {
                            let (name, nt) = p.word("a generator name or `}`")?;
                            if !is_identifier(&name) {
                                return Err(JobError::syntax(nt.line, nt.col, format!("`{name}` is not a valid name")));
                            }
                            let degree = p.number("a generator degree")?;
                            p.expect(Tok::Eq, "`=`")?;
                            let (img, it) = p.string("a differential")?;
                            gens.push(SemifreeGenerator { name, degree, d: img });
                            pos.semifree.push(SourcePos { line: it.line, col: it.col + 1 });
                        }
                        p.expect(Tok::Close, "`}`")?;
                        ModuleSelector::Semifree(gens)
                    }
                    _ => return Err(JobError::syntax(mt.line, mt.col, format!("unknown module `{m}`"))),
                };
                once(&mut d.module, module, &kt, "module")?;
            }
            "cmd" => {
                let (c, ct) = p.word("a command")?;
                let cmd = c.parse().map_err(|e: String| JobError::syntax(ct.line, ct.col, e))?;
                once(&mut d.command, cmd, &kt, "cmd")?;
            }
            "output" => {
                let (o, ot) = p.word("text or structured")?;
                let mode = match o.as_str() {
                    "text" => OutputMode::Text,
                    "structured" => OutputMode::Structured,
                    _ => return Err(JobError::syntax(ot.line, ot.col, "expected text or structured")),
                };
                once(&mut d.output, mode, &kt, "output")?;
            }
            other => return Err(JobError::syntax(kt.line, kt.col, format!("unknown statement `{other}`"))),
        }
    }

    let (truncation, stages, window) = d.truncate.ok_or_else(|| JobError::Semantic("missing `truncate D=...`".into()))?;
    let truncation = truncation.ok_or_else(|| JobError::Semantic("missing truncation degree D".into()))?;
    let job = JobSpec {
        field: d.field.unwrap_or(Field::Rationals),
        generators: d.generators,
        relations: d.relations,
        differential: d.differential,
        truncation,
        stages: stages.unwrap_or(DEFAULT_STAGES),
        window,
        assert_noetherian: d.assert_noetherian.unwrap_or(false),
        module: d.module.unwrap_or(ModuleSelector::TrivialK),
        command: d.command.ok_or_else(|| JobError::Semantic("missing `cmd`".into()))?,
        output: d.output.unwrap_or(OutputMode::Text),
    };
    Ok((job, pos))
}

/// Parses and fully validates a job: syntax, names, degrees, homogeneity and
/// the consistency of module and command.
pub fn parse_jobspec(text: &str) -> Result<JobSpec, JobError> {
    let (job, pos) = parse_with_positions(text)?;
    crate::construct::validate(&job, &pos)?;
    Ok(job)
}

/// Canonical text of a job. `parse_jobspec(&render(job)) == job`.
pub fn render(job: &JobSpec) -> String {
    let mut s = String::new();
    match job.field {
        Field::Rationals => s.push_str("field Q\n"),
        Field::PrimeField(p) => writeln!(s, "field GF {p}").unwrap(),
    }
    for (name, degree) in &job.generators {
        writeln!(s, "generator {name} {degree}").unwrap();
    }
    for r in &job.relations {
        writeln!(s, "relation \"{r}\"").unwrap();
    }
    if !job.differential.is_empty() {
        s.push_str("differential {\n");
        for (name, img) in &job.differential {
            writeln!(s, "  {name} = \"{img}\"").unwrap();
        }
        s.push_str("}\n");
    }
    write!(s, "truncate D={} L={}", job.truncation, job.stages).unwrap();
    if let Some(w) = job.window {
        write!(s, " Dint={w}").unwrap();
    }
    s.push('\n');
    writeln!(s, "assert_noetherian {}", job.assert_noetherian).unwrap();
    match &job.module {
        ModuleSelector::Semifree(gens) => {
            s.push_str("module semifree {\n");
            for g in gens {
                writeln!(s, "  {} {} = \"{}\"", g.name, g.degree, g.d).unwrap();
            }
            s.push_str("}\n");
        }
        m => writeln!(s, "module {}", m.keyword()).unwrap(),
    }
    writeln!(s, "cmd {}", job.command).unwrap();
    if job.output == OutputMode::Structured {
        s.push_str("output structured\n");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_inline_blocks() {
        let toks = lex("differential { x = \"y*y\" } # note").unwrap();
        let kinds: Vec<Tok> = toks.into_iter().map(|t| t.tok).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Word("differential".into()),
                Tok::Open,
                Tok::Word("x".into()),
                Tok::Eq,
                Tok::Str("y*y".into()),
                Tok::Close
            ]
        );
    }

    #[test]
    fn unterminated_string_reports_position() {
        let e = lex("relation \"y*y").unwrap_err();
        assert_eq!(e, JobError::syntax(1, 10, "unterminated string"));
    }

    #[test]
    fn statements_may_not_repeat() {
        let e = parse_with_positions("cmd gldim\ncmd resolve\ntruncate D=4").unwrap_err();
        assert!(matches!(e, JobError::Syntax { line: 2, col: 1, .. }), "{e:?}");
    }

    #[test]
    fn defaults() {
        let (job, _) = parse_with_positions("truncate D=5\ncmd cohomology").unwrap();
        assert_eq!(job.field, Field::Rationals);
        assert_eq!(job.stages, DEFAULT_STAGES);
        assert_eq!(job.module, ModuleSelector::TrivialK);
        assert_eq!(job.output, OutputMode::Text);
    }
}
