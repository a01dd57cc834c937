use indisc::facts::{all_facts, FactBounds};
use indisc::modelling::io::FamilyFile;
use indisc::node::{ArrayFragment, TreeFragment};
use indisc::{is_indiscernible, IndiscernibleVerdict};
use serde_json::json;

use crate::args::CheckCmd;
use crate::report::{read_json, Failure, Report};

pub fn run(cmd: &CheckCmd) -> Result<Report, Failure> {
    match cmd {
        CheckCmd::Facts { fragment, array, arity } => {
            if fragment.0 == 0 {
                return Err(Failure::Input("tree branching must be at least 1".into()));
            }
            let bounds = FactBounds {
                fragment: TreeFragment::new(fragment.0, fragment.1 as usize),
                array: ArrayFragment::new(array.0, array.1),
                max_arity: *arity,
            };
            let reports = all_facts(&bounds);
            let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
            let rows: Vec<_> = reports
                .iter()
                .map(|r| json!({ "name": r.name, "passed": r.passed(), "checked": r.checked, "violation": r.violation }))
                .collect();
            match reports.iter().find(|r| !r.passed()) {
                None => Ok(Report::pass(text, json!(rows))),
                Some(bad) => {
                    Ok(Report::fail(text, json!(rows), json!({ "fact": bad.name, "detail": bad.violation })))
                }
            }
        }
        CheckCmd::Indiscernible { input, sig, arity } => {
            let file: FamilyFile = read_json(input)?;
            let (s, fam) = file.build().map_err(Failure::input)?;
            let data = json!({ "sig": sig.to_string(), "arity": arity });
            match is_indiscernible(&s, &fam, *sig, *arity).map_err(Failure::input)? {
                IndiscernibleVerdict::Indiscernible => Ok(Report::pass(format!("{sig}-indiscernible"), data)),
                IndiscernibleVerdict::Counterexample { first, second } => {
                    let types = |t: &[indisc::Index]| -> String {
                        let mut tuple = Vec::new();
                        for i in t {
                            tuple.extend_from_slice(fam.get(i).expect("index of the family"));
                        }
                        let ty = s.atomic_type(&tuple, fam.params()).expect("family checked against structure");
                        let shown = s.display_type(&ty).to_string();
                        shown
                    };
                    let cx = json!({
                        "first": first, "second": second,
                        "first_type": types(&first), "second_type": types(&second),
                    });
                    Ok(Report::fail(format!("not {sig}-indiscernible"), data, cx))
                }
            }
        }
    }
}
