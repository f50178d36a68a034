use dgha::job::{parse_jobspec, render, Command, JobSpec, ModuleSelector, OutputMode, SemifreeGenerator};
use dgha::registry::{example, EXAMPLES};
use dgha::JobError;
use dgha_core::Field;
use proptest::prelude::*;

fn base(body: &str) -> String {
    format!("generator y 1\ngenerator x 1\n{body}\ntruncate D=6\ncmd cohomology\n")
}

#[test]
fn every_example_parses_and_renders_canonically() {
    assert!(EXAMPLES.len() >= 8);
    for (name, text) in EXAMPLES {
        let job = parse_jobspec(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let canonical = render(&job);
        assert_eq!(parse_jobspec(&canonical).unwrap(), job, "{name}");
        assert_eq!(render(&parse_jobspec(&canonical).unwrap()), canonical, "{name}");
    }
}

#[test]
fn example61_is_the_square_differential_algebra() {
    let job = example("example61").unwrap();
    assert_eq!(job.generators, vec![("y".to_string(), 1), ("x".to_string(), 1)]);
    assert_eq!(job.differential, vec![("x".to_string(), "y*y".to_string())]);
    assert_eq!(job.truncation, 10);
    assert_eq!(job.field, Field::Rationals);
    let env = example("example61-envelope").unwrap();
    assert_eq!(env.module, ModuleSelector::DiagonalBimodule);
    assert_eq!(env.differential, job.differential);
}

#[test]
fn unknown_example() {
    assert_eq!(example("nope").unwrap_err(), JobError::UnknownExample("nope".into()));
}

#[test]
fn differential_degrees_are_checked() {
    assert!(parse_jobspec(&base("differential { x = \"y*y\" }")).is_ok());
    let e = parse_jobspec(&base("differential { y = \"x\" }")).unwrap_err();
    assert!(matches!(e, JobError::Semantic(_)), "{e:?}");
}

#[test]
fn semantic_errors() {
    for body in [
        "relation \"y*z\"",
        "relation \"y*y + x\"",
        "differential { z = \"y*y\" }",
        "differential { x = \"y*y\" x = \"y*y\" }",
        "generator y 2",
        "module semifree { e 0 = \"y*f\" f 0 = \"0\" }",
        "module semifree { e 0 = \"0\" f 1 = \"y*e\" }",
    ] {
        let e = parse_jobspec(&base(body)).unwrap_err();
        assert!(matches!(e, JobError::Semantic(_)), "{body}: {e:?}");
    }
    let e = parse_jobspec("field GF 4\ntruncate D=4\ncmd gldim").unwrap_err();
    assert!(matches!(e, JobError::Semantic(_)), "{e:?}");
    let e = parse_jobspec("generator y 1\ntruncate D=4\nmodule regular\ncmd gldim").unwrap_err();
    assert!(matches!(e, JobError::Semantic(_)), "{e:?}");
}

#[test]
fn syntax_errors_carry_positions() {
    let e = parse_jobspec(&base("relation \"y*\"")).unwrap_err();
    assert!(matches!(e, JobError::Syntax { line: 3, .. }), "{e:?}");
    let e = parse_jobspec("generator y 1\ntruncate D=x\ncmd gldim").unwrap_err();
    assert!(matches!(e, JobError::Syntax { line: 2, .. }), "{e:?}");
    let e = parse_jobspec("truncate D=4").unwrap_err();
    assert_eq!(e, JobError::Semantic("missing `cmd`".into()));
}

#[test]
fn truncation_floor() {
    let e = parse_jobspec("generator y 1\ntruncate D=1\ncmd gldim").unwrap_err();
    assert!(matches!(e, JobError::TruncationTooSmall { requested: 1, .. }), "{e:?}");
}

fn arb_job() -> impl Strategy<Value = JobSpec> {
    let field = prop_oneof![Just(Field::Rationals), Just(Field::PrimeField(2)), Just(Field::PrimeField(5))];
    let degrees = prop::collection::vec(1usize..4, 1..4);
    (field, degrees, any::<bool>(), 2usize..12, 1usize..8, prop::option::of(0i32..12), any::<bool>(), 0usize..4, 0usize..6, any::<bool>())
        .prop_map(|(field, degrees, square, truncation, stages, window, noeth, module, cmd, structured)| {
            let generators: Vec<(String, usize)> =
                degrees.iter().enumerate().map(|(i, &d)| (format!("g{i}"), d)).collect();
            let relations = if square { vec!["g0*g0".to_string()] } else { Vec::new() };
            let command = Command::ALL[cmd];
            let module = match (command, module) {
                (Command::Smoothness | Command::Gldim, _) | (_, 0) => ModuleSelector::TrivialK,
                (_, 1) => ModuleSelector::Regular,
                (_, 2) => ModuleSelector::DiagonalBimodule,
                _ => ModuleSelector::Semifree(vec![
                    SemifreeGenerator { name: "e".into(), degree: 0, d: "0".into() },
                    SemifreeGenerator { name: "f".into(), degree: degrees[0] as i32 - 1, d: "2*g0*e".into() },
                ]),
            };
            JobSpec {
                field,
                generators,
                relations,
                differential: Vec::new(),
                truncation,
                stages,
                window,
                assert_noetherian: noeth,
                module,
                command,
                output: if structured { OutputMode::Structured } else { OutputMode::Text },
            }
        })
}

proptest! {
    #[test]
    fn parse_inverts_render(job in arb_job()) {
        let text = render(&job);
        prop_assert_eq!(parse_jobspec(&text).unwrap(), job);
    }
}
