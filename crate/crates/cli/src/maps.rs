use indisc::node::{ArrayFragment, TreeFragment};
use indisc::reindex::{
    array_stretch_map, array_to_tree_map, identity_map, level_restriction_map, path_map, str0_embedding,
    stretch_after_g,
};
use indisc::{check_qftp_respecting, IndexMap, RespectVerdict, Signature, TreeNode};
use serde_json::json;

use crate::args::{MapKind, MapSpec, MapsCmd};
use crate::report::{Failure, Report};

fn tree_fragment((k, m): (u64, u64)) -> Result<TreeFragment, Failure> {
    if k == 0 {
        return Err(Failure::Input("tree branching must be at least 1".into()));
    }
    Ok(TreeFragment::new(k, m as usize))
}

pub fn build(spec: &MapSpec) -> Result<IndexMap, Failure> {
    let array = ArrayFragment::new(spec.array.0, spec.array.1);
    let map = match spec.kind {
        MapKind::Identity => identity_map(
            tree_fragment(spec.fragment)?,
            spec.from.unwrap_or(Signature::Str),
            spec.to.unwrap_or(Signature::Str),
        )
        .map_err(Failure::input)?,
        MapKind::LevelRestriction => {
            if spec.levels.is_empty() {
                return Err(Failure::Input("--levels is required".into()));
            }
            level_restriction_map(&spec.levels, tree_fragment(spec.fragment)?).map_err(Failure::input)?
        }
        MapKind::Path => path_map(&spec.node.parse::<TreeNode>().map_err(Failure::input)?, spec.count),
        MapKind::Str0 => {
            let f = tree_fragment(spec.fragment)?;
            str0_embedding(f.k, f.m).map_err(Failure::input)?.map
        }
        MapKind::Stretch => array_stretch_map(tree_fragment(spec.fragment)?),
        MapKind::G => array_to_tree_map(array),
        MapKind::Fg => stretch_after_g(array),
    };
    if spec.from.is_none() && spec.to.is_none() || spec.kind == MapKind::Identity {
        return Ok(map);
    }
    let (from, to) = (spec.from.unwrap_or(map.source_sig()), spec.to.unwrap_or(map.target_sig()));
    map.with_signatures(from, to).map_err(Failure::input)
}

fn table(map: &IndexMap) -> serde_json::Value {
    json!({
        "source_sig": map.source_sig().to_string(),
        "target_sig": map.target_sig().to_string(),
        "pairs": map.pairs().map(|(s, t)| json!([s, t])).collect::<Vec<_>>(),
    })
}

pub fn run(cmd: &MapsCmd) -> Result<Report, Failure> {
    match cmd {
        MapsCmd::Build(spec) => {
            let map = build(spec)?;
            Ok(Report::pass(map.to_string(), table(&map)))
        }
        MapsCmd::Verify { spec, arity } => {
            let map = build(spec)?;
            let data = json!({
                "source_sig": map.source_sig().to_string(),
                "target_sig": map.target_sig().to_string(),
                "size": map.len(),
                "arity": arity,
            });
            match check_qftp_respecting(&map, *arity) {
                RespectVerdict::Respecting => Ok(Report::pass(
                    format!("respecting ({} -> {}, {} indices, arity <= {arity})", map.source_sig(), map.target_sig(), map.len()),
                    data,
                )),
                RespectVerdict::Counterexample { first, second } => {
                    let image = |t: &[indisc::Index]| t.iter().map(|i| map.apply(i).cloned()).collect::<Vec<_>>();
                    let cx = json!({
                        "first": first, "second": second,
                        "first_image": image(&first), "second_image": image(&second),
                    });
                    Ok(Report::fail("not respecting", data, cx))
                }
            }
        }
    }
}
