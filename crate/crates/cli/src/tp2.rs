use indisc::tp2::Tp2WitnessJson;
use indisc::{check_ktp2, reduce_k_to_2, Ktp2Verdict, Tp2Error, Tp2Witness};
use serde_json::{json, Value};

use crate::args::Tp2Cmd;
use crate::report::{read_json, write_json, Failure, Report};

fn load(path: &std::path::Path) -> Result<Tp2Witness, Failure> {
    let j: Tp2WitnessJson = read_json(path)?;
    Tp2Witness::try_from(&j).map_err(Failure::input)
}

fn counterexample(v: &Ktp2Verdict) -> Value {
    match v {
        Ktp2Verdict::Holds => Value::Null,
        Ktp2Verdict::InconsistentPath { path } => json!({ "kind": "inconsistent_path", "path": path }),
        Ktp2Verdict::ConsistentRow { row, cols, witness } => {
            json!({ "kind": "consistent_row", "row": row, "cols": cols, "witness": witness })
        }
    }
}

fn describe(v: &Ktp2Verdict, k: usize) -> String {
    match v {
        Ktp2Verdict::Holds => format!("{k}-TP2"),
        Ktp2Verdict::InconsistentPath { path } => format!("not {k}-TP2: path {path:?} is inconsistent"),
        Ktp2Verdict::ConsistentRow { row, cols, witness } => {
            format!("not {k}-TP2: row {row} columns {cols:?} share element {witness}")
        }
    }
}

pub fn run(cmd: &Tp2Cmd) -> Result<Report, Failure> {
    match cmd {
        Tp2Cmd::Verify { input, k } => {
            let w = load(input)?;
            let v = check_ktp2(&w, *k).map_err(Failure::input)?;
            let data = json!({ "k": k, "rows": w.rows(), "cols": w.cols(), "holds": v.holds() });
            if v.holds() {
                Ok(Report::pass(describe(&v, *k), data))
            } else {
                Ok(Report::fail(describe(&v, *k), data, counterexample(&v)))
            }
        }
        Tp2Cmd::Reduce { input, k, output } => {
            let w = load(input)?;
            let (out, trace) = match reduce_k_to_2(&w, *k) {
                Ok(x) => x,
                Err(Tp2Error::NotKtp2(_)) => {
                    let v = check_ktp2(&w, *k).map_err(Failure::input)?;
                    return Ok(Report::fail(describe(&v, *k), Value::Null, counterexample(&v)));
                }
                Err(e @ Tp2Error::StepFailed { .. }) => {
                    return Ok(Report::fail(e.to_string(), Value::Null, json!({ "reason": e.to_string() })));
                }
                Err(e) => return Err(Failure::input(e)),
            };
            let wj = Tp2WitnessJson::from(&out);
            let data = json!({ "trace": trace, "witness": wj });
            let mut text = format!("trace: {trace}\n{}x{} witness, conj_arity {}\n", out.rows(), out.cols(), out.conj_arity());
            match output {
                Some(path) => {
                    write_json(path, &wj)?;
                    text.push_str(&format!("wrote {}\n", path.display()));
                }
                None => text.push_str(&(serde_json::to_string_pretty(&wj).expect("serializable") + "\n")),
            }
            Ok(Report::pass(text, data))
        }
    }
}
