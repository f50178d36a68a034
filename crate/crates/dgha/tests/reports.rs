use dgha::registry::example;
use dgha::run;
use serde_json::json;

#[test]
fn smoothness_of_example61() {
    let r = run(&example("example61").unwrap()).unwrap().report;
    assert_eq!(r.verdict, "SmoothEvidence");
    assert_eq!(r.values["cl_k"]["value"], 2);
    assert_eq!(r.values["cl_k"]["exact"], true);
    assert_eq!(r.values["cl_envelope"]["value"], 2);
    assert_eq!(r.values["cl_envelope"]["exact"], true);
    assert_eq!(r.values["gldim"]["value"], json!({ "Exact": 2 }));
    assert_eq!(r.values["gldim"]["rule"], "envelope-equals-k");
    assert_eq!(r.certified_upto, 9);
}

#[test]
fn cohomology_of_example61() {
    let mut job = example("example61").unwrap();
    job.command = dgha::Command::Cohomology;
    let r = run(&job).unwrap().report;
    assert_eq!(r.values["dims"], json!([1, 1, 1, 1, 1, 1, 1, 1, 1, 1]));
    assert_eq!(r.evidence["indecomposables"], json!([[1, 1], [2, 1]]));
}

#[test]
fn resolving_k_over_free1_terminates() {
    let mut job = example("free1").unwrap();
    job.command = dgha::Command::Resolve;
    let r = run(&job).unwrap().report;
    assert_eq!(r.values["count"], 2);
    assert_eq!(r.verdict, "terminated");
    assert_eq!(r.evidence["graded"]["terminated"], true);
}

#[test]
fn free1_has_global_dimension_one() {
    let r = run(&example("free1").unwrap()).unwrap().report;
    assert_eq!(r.values["left"]["value"], json!({ "Exact": 1 }));
    assert_eq!(r.values["right"]["value"], json!({ "Exact": 1 }));
}

#[test]
fn em_check_on_example61() {
    let r = run(&example("example61-em").unwrap()).unwrap().report;
    assert_eq!(r.verdict, "NonMinimal");
    assert_eq!(r.values["e1_matches_input"], true);
    assert_eq!(r.values["em_generators"], 5);
    assert_eq!(r.values["minimal_generators"], 3);
}

#[test]
fn a_semifree_module_over_a_prime_field() {
    let text = "field GF 3\ngenerator y 1\nrelation \"y*y\"\ntruncate D=6 L=3\n\
                module semifree { e 0 = \"0\" f 0 = \"y*e\" }\ncmd resolve\n";
    let r = run(&dgha::parse_jobspec(text).unwrap()).unwrap().report;
    assert_eq!(r.field, "GF(3)");
    // the module is already minimal, so it is its own minimal resolution
    assert_eq!(r.values["count"], 2);
    assert_eq!(r.verdict, "terminated");
    assert_eq!(r.evidence["quasi_isomorphism"], true);
}
