use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use blowup_core::apex_blowup::apex_clique_size;
use blowup_core::tree_blowup::tree_clique_size;
use blowup_core::{Error, RootedTree};
use rayon::prelude::*;

use crate::commands::run_blowup;
use crate::files::{self, fail, EXIT_MINOR, EXIT_OK};
use crate::BenchArgs;

pub const HEADER: &str =
    "name,kind,n,t,h,outcome,partition_width,partition_bound,lower_bound,host_width,host_bound,millis";

struct Instance {
    name: String,
    kind: &'static str,
}

fn instances(dir: &Path) -> Result<Vec<Instance>, Error> {
    let mut out = Vec::new();
    let mut names: Vec<String> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().to_str().and_then(|s| s.strip_suffix(".el")).map(str::to_owned))
        .collect();
    names.sort();
    for name in names {
        for kind in ["tree", "apex"] {
            if dir.join(format!("{name}.{kind}.json")).exists() {
                out.push(Instance { name: name.clone(), kind });
            }
        }
    }
    Ok(out)
}

fn row(dir: &Path, inst: &Instance, assume_free: bool) -> String {
    let start = Instant::now();
    let res = (|| {
        let g = files::graph(&dir.join(format!("{}.el", inst.name)))?;
        let t = files::tree(&dir.join(format!("{}.{}.json", inst.name, inst.kind)))?;
        let (v, code) = run_blowup(&g, &t, inst.kind == "apex", assume_free)?;
        Ok::<_, Error>((g.n(), t, v, code))
    })();
    let millis = start.elapsed().as_millis();
    let (n, t, v, code) = match res {
        Ok(x) => x,
        Err(e) => {
            return format!("{},{},,,,error:{},,,,,,{millis}", inst.name, inst.kind, e.kind());
        }
    };
    let t = RootedTree::rooted_at_center(t.t(), &t.as_graph().edges()).expect("tree");
    let h = t.height();
    let (pb, lb, hb) = if inst.kind == "tree" {
        let lb = if h == 0 { String::new() } else { (t.t() - 1).div_ceil(2 * h).to_string() };
        (tree_clique_size(t.t()), lb, 2 * h as i64 - 1)
    } else {
        (apex_clique_size(&t), String::new(), 4 * h as i64 - 1)
    };
    let (outcome, pw, hw) = match code {
        EXIT_OK => ("certificate", v["widths"]["partition"].to_string(), v["widths"]["host"].to_string()),
        EXIT_MINOR => ("minor", String::new(), String::new()),
        _ => ("error", String::new(), String::new()),
    };
    format!(
        "{},{},{n},{},{h},{outcome},{pw},{pb},{lb},{hw},{hb},{millis}",
        inst.name,
        inst.kind,
        t.t()
    )
}

pub fn run(a: &BenchArgs) -> u8 {
    let list = match instances(&a.dir) {
        Ok(l) => l,
        Err(e) => return fail(&e),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(a.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => return fail(&Error::Precondition(e.to_string())),
    };
    let rows: Vec<String> = pool.install(|| list.par_iter().map(|i| row(&a.dir, i, a.assume_minor_free)).collect());
    println!("{HEADER}");
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    for r in &rows {
        println!("{r}");
        let cols: Vec<&str> = r.split(',').collect();
        *tally.entry(format!("{} {}", cols[1], cols[5])).or_default() += 1;
    }
    eprintln!("{:<24} {:>6}", "kind outcome", "count");
    for (k, c) in &tally {
        eprintln!("{k:<24} {c:>6}");
    }
    EXIT_OK
}
