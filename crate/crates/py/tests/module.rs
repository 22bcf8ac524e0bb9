use std::ffi::CString;

use lcl::lcl as module;
use pyo3::prelude::*;

fn run(code: &str) {
    pyo3::append_to_inittab!(module);
    Python::initialize();
    Python::attach(|py| {
        let code = CString::new(code).unwrap();
        if let Err(e) = py.run(&code, None, None) {
            e.display(py);
            panic!("python code failed");
        }
    });
}

#[test]
fn module_round_trip() {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");
    run(&format!(
        r#"
import lcl
p = lcl.Problem.load("{fixtures}/two_coloring_binary.json")
assert p.is_rooted and p.delta == 2 and p.depth() == "1"
assert p.classify()["class"] == "Theta(n^{{1/1}})"
assert p.certificate(max_depth=4) is None

three = lcl.Problem.load("{fixtures}/three_coloring.json")
cert = three.certificate()
assert (cert["d1"], cert["d2"]) == (2, 3)
assert three.verify_certificate(cert) == []

g = lcl.Tree.rooted_lb(2, 1, 1, 1)
assert len(g) == 175
est = lcl.estimate(p, g, "parity-victim", 1, 200, 11)
assert est["p_hat"] >= 0.4, est
assert lcl.estimate(p, g, "offline-oracle", "n", 20, 11)["failures"] == 0

sol = lcl.solve(p, g)
assert lcl.check(p, g, sol)["verdict"] == "PASS"
bad = {{"labels": ["W"] * len(g)}}
assert lcl.check(p, g, bad)["verdict"] == "FAIL"

s = lcl.Schedule.sample(g, 1, 3)
assert sorted(s.order) == list(range(len(g)))
assert lcl.Tree.from_json(g.to_json()).parents == g.parents
assert lcl.chunk_node_count(2, 2, 3) == 6096
try:
    lcl.Tree.unrooted_lb(2, 1, 1, 1)
    raise AssertionError("delta 2 accepted")
except ValueError:
    pass
"#
    ));
}
