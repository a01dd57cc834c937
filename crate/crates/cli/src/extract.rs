use indisc::modelling::io::FamilyFile;
use indisc::modelling::{
    extract_array_indiscernible, extract_indiscernible_sequence, extract_str0_from_str, homogenize_levels,
};
use indisc::{FiniteStructure, IndexedFamily, ModellingError, QfTypeCode};
use serde_json::{json, Value};

use crate::args::{ExtractCmd, FileIo};
use crate::report::{read_json, write_json, Failure, Report};

fn load(path: &std::path::Path) -> Result<(FiniteStructure, IndexedFamily), Failure> {
    let file: FamilyFile = read_json(path)?;
    file.build().map_err(Failure::input)
}

/// Search failures and unmet hypotheses are violations; everything else is
/// bad input.
fn outcome(result: Result<Report, ModellingError>) -> Result<Report, Failure> {
    match result {
        Ok(r) => Ok(r),
        Err(
            e @ (ModellingError::NotIndiscernible(_)
            | ModellingError::InsufficientLength { .. }
            | ModellingError::InsufficientHeight { .. }
            | ModellingError::InsufficientSize(_)),
        ) => Ok(Report::fail(e.to_string(), Value::Null, json!({ "reason": e.to_string() }))),
        Err(e) => Err(Failure::input(e)),
    }
}

fn emit(
    io: &FileIo,
    s: &FiniteStructure,
    fam: &IndexedFamily,
    summary: String,
    mut data: Value,
) -> Result<Report, Failure> {
    let file = FamilyFile::new(s, fam);
    data["family"] = serde_json::to_value(&file).expect("serializable");
    let text = match &io.output {
        Some(path) => {
            write_json(path, &file)?;
            format!("{summary}\nwrote {}\n", path.display())
        }
        None => format!("{summary}\n{}\n", serde_json::to_string_pretty(&file).expect("serializable")),
    };
    Ok(Report::pass(text, data))
}

pub fn run(cmd: &ExtractCmd) -> Result<Report, Failure> {
    match cmd {
        ExtractCmd::Seq { io, t, h } => {
            let (s, fam) = load(&io.input)?;
            let found = match extract_indiscernible_sequence(&s, &fam, *t, *h) {
                Ok(x) => x,
                Err(e) => return outcome(Err(e)),
            };
            let sel = found.selection.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
            emit(io, &s, &found.family, format!("selection: {sel}"), json!({ "selection": found.selection }))
        }
        ExtractCmd::Tree { io, k, m, arity } => {
            let (s, fam) = load(&io.input)?;
            let out = match extract_str0_from_str(&s, &fam, *k, *m, *arity) {
                Ok(x) => x,
                Err(e) => return outcome(Err(e)),
            };
            emit(io, &s, &out, format!("str0 family over {k}^<={m}"), json!({}))
        }
        ExtractCmd::Array { io, t, rows, cols } => {
            let (s, fam) = load(&io.input)?;
            let found = match extract_array_indiscernible(&s, &fam, *t, *rows, *cols) {
                Ok(x) => x,
                Err(e) => return outcome(Err(e)),
            };
            let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
            emit(
                io,
                &s,
                &found.family,
                format!("rows: {}\ncols: {}", list(&found.rows), list(&found.cols)),
                json!({ "rows": found.rows, "cols": found.cols }),
            )
        }
        ExtractCmd::Levels { input, code, h } => {
            let (s, fam) = load(input)?;
            let code = QfTypeCode::from_hex(code).map_err(Failure::input)?;
            outcome(homogenize_levels(&s, &fam, &code, *h).map(|levels| {
                let list = levels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
                Report::pass(format!("levels: {list}"), json!({ "levels": levels }))
            }))
        }
    }
}
