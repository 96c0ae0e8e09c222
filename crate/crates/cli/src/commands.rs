use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use itm_core::reduction::{
    reduce_pipeline_with, InducedMap, InductionKind, ReducibilityVerdict, ReductionError,
    ReductionTrace, Side, Terminal,
};
use itm_core::typing::{detect_type_with, DetectConfig, TypeVerdict, TypingError};
use itm_core::Itm;

use crate::args::{
    BudgetArgs, Cli, Command, DetectArgs, Format, ReduceArgs, RenderArgs, SampleArgs,
};
use crate::experiment::{run_campaign, trials_to_csv, ExperimentError, SampleConfig};
use crate::render::render_svg;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Internal = 1,
    BoundaryStop = 2,
    Undecided = 3,
    Usage = 64,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => Exit::Usage,
            CliError::Reduction(ReductionError::WrongPieceCount { .. }) => Exit::Usage,
            CliError::Experiment(
                ExperimentError::EmptyCampaign | ExperimentError::DenominatorTooSmall(_),
            ) => Exit::Usage,
            _ => Exit::Internal,
        }
    }
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit: Exit,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Reduce(a) => reduce(a),
        Command::Detect(a) => detect(a),
        Command::Sample(a) => sample(a),
        Command::Render(a) => render(a),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    let result = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|s| text = s)
    };
    result.map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(text)
}

pub fn load_itm(path: &Path) -> Result<Itm, CliError> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes to `out` if given, else returns the text for stdout.
fn emit(out: Option<&Path>, quiet: bool, text: String) -> Result<String, CliError> {
    match out {
        Some(path) => {
            write_output(path, &text)?;
            Ok(String::new())
        }
        None if quiet => Ok(String::new()),
        None => Ok(text),
    }
}

fn detect_config(b: &BudgetArgs) -> Result<DetectConfig, CliError> {
    if b.max_steps == Some(0) {
        return Err(CliError::Usage("--max-steps must be at least 1".into()));
    }
    if b.max_pieces == 0 {
        return Err(CliError::Usage("--max-pieces must be at least 1".into()));
    }
    Ok(DetectConfig {
        budget: b.max_steps,
        max_pieces: b.max_pieces,
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn typing_error(e: TypingError) -> CliError {
    match e {
        TypingError::ZeroBudget => CliError::Usage(e.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

fn verdict_text(v: &TypeVerdict) -> String {
    match v {
        TypeVerdict::Finite { steps, limit } => {
            let unit = if *steps == 1 { "step" } else { "steps" };
            format!("finite after {steps} {unit}, limit {limit}")
        }
        TypeVerdict::Undecided { budget_spent, .. } => {
            format!("undecided within {budget_spent} steps")
        }
    }
}

/// One stage per line, exact rationals throughout.
pub fn format_trace(tr: &ReductionTrace) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        writeln!(s, "{k:<13}{v}").expect("writing to a String");
    };
    line("input", tr.input.to_string());
    if tr.canonical != tr.input {
        line("canonical", tr.canonical.to_string());
    }
    line(
        "reducibility",
        match tr.reducibility {
            ReducibilityVerdict::Irreducible => "irreducible".into(),
            ReducibilityVerdict::Reducible { side: Side::Left } => {
                "reducible (first piece misses the image)".into()
            }
            ReducibilityVerdict::Reducible { side: Side::Right } => {
                "reducible (last piece misses the image)".into()
            }
        },
    );
    if let Some(d) = &tr.dropped {
        line("dropped", format!("kept {} -> {}", d.domain, d.map));
    }
    if let Some(f) = &tr.fitting {
        line(
            "trap",
            format!(
                "{} (cell {}, {} pass{})",
                f.trap,
                f.first_pass.cell,
                f.passes,
                if f.passes == 1 { "" } else { "es" }
            ),
        );
        line(
            "fitted",
            format!("{} (x -> (x - {}) * {})", *f.fitted, f.offset, f.scale),
        );
    }
    if tr.mirrored {
        line("mirrored", "yes".into());
    }
    if let Some(label) = &tr.label {
        line("case", label.to_string());
    }
    if let Some(ind) = &tr.induction {
        let kind = match ind.kind {
            InductionKind::Type1 => "type 1",
            InductionKind::Type2 => "type 2",
        };
        line("induction", format!("{kind} on {}", ind.base));
        for p in &ind.pieces {
            line(
                "",
                format!(
                    "{} shifted by {} at time {}",
                    p.interval, p.translation, p.return_time
                ),
            );
        }
        line("induced", ind.induced.to_string());
        if let InducedMap::Rotation(r) = &ind.result {
            line("", format!("trap {}, length {}", r.trap, r.length));
        }
    }
    line(
        "terminal",
        match &tr.terminal {
            Terminal::DoubleRotation(f) => format!("double rotation {f}"),
            Terminal::Rotation(r) => format!("{r} (rotation number {})", r.rotation_number()),
            Terminal::BoundaryStop { witness } => format!("boundary stop: {witness}"),
        },
    );
    if let Some(v) = &tr.terminal_verdict {
        line("verdict", verdict_text(v));
    }
    s
}

fn reduce(a: ReduceArgs) -> Result<Outcome, CliError> {
    let t = load_itm(&a.input)?;
    let config = detect_config(&a.budget)?;
    let trace = reduce_pipeline_with(&t, &config).map_err(|e| match e {
        ReductionError::Typing(t) => typing_error(t),
        other => other.into(),
    })?;
    let text = if a.trace {
        format_trace(&trace)
    } else {
        to_json(&trace)?
    };
    let exit = match (&trace.terminal, &trace.terminal_verdict) {
        (Terminal::BoundaryStop { .. }, _) => Exit::BoundaryStop,
        (_, Some(TypeVerdict::Undecided { .. })) => Exit::Undecided,
        _ => Exit::Success,
    };
    Ok(Outcome {
        stdout: emit(a.out.as_deref(), a.quiet, text)?,
        exit,
    })
}

fn detect(a: DetectArgs) -> Result<Outcome, CliError> {
    let t = load_itm(&a.input)?;
    let config = detect_config(&a.budget)?;
    let verdict = detect_type_with(&t, &config).map_err(typing_error)?;
    let exit = if verdict.is_finite() {
        Exit::Success
    } else {
        Exit::Undecided
    };
    Ok(Outcome {
        stdout: emit(a.out.as_deref(), a.quiet, to_json(&verdict)?)?,
        exit,
    })
}

fn sample(a: SampleArgs) -> Result<Outcome, CliError> {
    let config = SampleConfig {
        count: a.count,
        seed: a.seed,
        den_bound: a.den_bound,
        detect: detect_config(&a.budget)?,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.threads)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let (report, trials) = pool.install(|| run_campaign(&config))?;
    let text = match a.format {
        Format::Json => to_json(&report)?,
        Format::Csv => trials_to_csv(&trials).map_err(|e| CliError::Internal(e.to_string()))?,
    };
    Ok(Outcome {
        stdout: emit(a.out.as_deref(), a.quiet, text)?,
        exit: Exit::Success,
    })
}

fn render(a: RenderArgs) -> Result<Outcome, CliError> {
    let t = load_itm(&a.input)?;
    Ok(Outcome {
        stdout: emit(a.out.as_deref(), false, render_svg(&t))?,
        exit: Exit::Success,
    })
}
