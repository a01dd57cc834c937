use indisc::{parse_index_tuple, qftp_code, Index, QfTypeCode, Signature};
use serde_json::json;

use crate::args::QftpCmd;
use crate::report::{Failure, Report};

fn code_of(literal: &str, sig: Signature) -> Result<(Vec<Index>, QfTypeCode), Failure> {
    let tuple = parse_index_tuple(literal).map_err(Failure::input)?;
    let code = qftp_code(&tuple, sig).map_err(Failure::input)?;
    Ok((tuple, code))
}

pub fn run(cmd: &QftpCmd) -> Result<Report, Failure> {
    match cmd {
        QftpCmd::Code { sig, tuple } => {
            let (_, code) = code_of(tuple, *sig)?;
            let atoms = code.atoms();
            let mut text = format!("{}\n", code.to_hex());
            for a in &atoms {
                text.push_str(&format!("  {a}\n"));
            }
            Ok(Report::pass(text, json!({ "sig": sig.to_string(), "code": code.to_hex(), "atoms": atoms })))
        }
        QftpCmd::Equal { sig, first, second } => {
            let (a, ca) = code_of(first, *sig)?;
            let (b, cb) = code_of(second, *sig)?;
            if a.len() != b.len() {
                return Err(Failure::Input(format!("arity mismatch: {} vs {}", a.len(), b.len())));
            }
            let data = json!({ "sig": sig.to_string(), "equal": ca == cb });
            if ca == cb {
                Ok(Report::pass("equal", data))
            } else {
                let only = |x: &QfTypeCode, y: &QfTypeCode| {
                    let other = y.atoms();
                    x.atoms().into_iter().filter(|t| !other.contains(t)).collect::<Vec<_>>()
                };
                let cx = json!({
                    "first": a, "second": b,
                    "first_code": ca.to_hex(), "second_code": cb.to_hex(),
                    "only_first": only(&ca, &cb), "only_second": only(&cb, &ca),
                });
                Ok(Report::fail("different", data, cx))
            }
        }
    }
}
