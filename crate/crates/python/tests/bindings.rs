use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module(script: &str) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "voting_power").unwrap();
        voting_power_py::register(&m).unwrap();
        let globals = pyo3::types::PyDict::new(py);
        globals.set_item("vp", m).unwrap();
        let code = std::ffi::CString::new(script).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python check failed");
        }
    });
}

#[test]
fn indices_round_trip_as_strings() {
    with_module(
        r#"
s = vp.VotingSystem([2, 1, 1], 3, "ge")
assert s.banzhaf() == ["3/5", "1/5", "1/5"]
assert s.shapley_shubik(engine="dp") == ["2/3", "1/6", "1/6"]
assert s.weights == ["2", "1", "1"] and s.mode == "ge" and s.players == 3
assert vp.index(["1/2", "1/4", "1/4"], "1/2", mode="gt", kind="ss") == ["2/3", "1/6", "1/6"]
"#,
    );
}

#[test]
fn errors_map_to_exceptions() {
    with_module(
        r#"
try:
    vp.VotingSystem([1], 2).shapley_shubik()
    raise AssertionError("no error")
except vp.DegenerateSystemError:
    pass
for bad in (["x"], ["1/0"], [-1]):
    try:
        vp.VotingSystem(bad, 1)
        raise AssertionError(bad)
    except vp.VotingPowerError:
        pass
try:
    vp.index([1, 1], 1, engine="montecarlo")
    raise AssertionError("engine accepted")
except ValueError:
    pass
"#,
    );
}

#[test]
fn structured_results_are_dicts() {
    with_module(
        r#"
r = vp.divisor_report(28)
assert r["sigma"] == 56 and r["witnesses"]
t = vp.iterate([1, 0, 0], "banzhaf")
assert t["outcome"]["type"] == "fixed"
assert vp.aab_fixed_solutions(3) == ["2/15"]
"#,
    );
}
