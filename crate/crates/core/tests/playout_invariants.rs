use ludecon::compile_source;
use ludecon::concepts::{ids, lookup, ConceptComputation};
use ludecon::playout::{analyze, PlayoutConfig};

const PLAYABLE: [(&str, &str); 6] = [
    ("Amazons", include_str!("../../../games/Amazons.lud")),
    ("Breakthrough", include_str!("../../../games/Breakthrough.lud")),
    ("Havannah", include_str!("../../../games/Havannah.lud")),
    ("Hex", include_str!("../../../games/Hex.lud")),
    ("SnakesAndLadders", include_str!("../../../games/SnakesAndLadders.lud")),
    ("TicTacToe", include_str!("../../../games/TicTacToe.lud")),
];

fn config(trials: usize) -> PlayoutConfig {
    PlayoutConfig { trials, master_seed: 42, ..PlayoutConfig::default() }
}

#[test]
fn playout_concepts_are_well_formed() {
    for (name, src) in PLAYABLE {
        let spec = compile_source(src).unwrap();
        let report = analyze(&spec, &config(100));
        let end_total: f64 = [
            ids::FREQ_LINE_END,
            ids::FREQ_CONNECTION_END,
            ids::FREQ_LOOP_END,
            ids::FREQ_NO_MOVES_END,
            ids::FREQ_REACH_END,
        ]
        .iter()
        .map(|&c| report.vector.get(c).unwrap())
        .sum();
        assert!(end_total <= 1.0 + 1e-9, "{name}: {end_total}");
        for (id, v) in report.vector.iter() {
            let def = lookup(id).unwrap();
            assert_eq!(def.computation, ConceptComputation::Playout, "{name}: {}", def.name);
            if def.name.starts_with("Frequency") || id == ids::DRAWISHNESS {
                assert!((0.0..=1.0).contains(&v), "{name}: {} = {v}", def.name);
            }
        }
        let balance = report.vector.get(ids::BALANCE).unwrap();
        assert!((-1.0..=1.0).contains(&balance));
        assert!(report.vector.get(ids::GAME_LENGTH).unwrap() > 0.0);
        assert!(report.vector.get(ids::BRANCHING_FACTOR).unwrap() >= 1.0);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let spec = compile_source(PLAYABLE[3].1).unwrap();
    let with = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| analyze(&spec, &config(64)))
    };
    let one = with(1);
    let four = with(4);
    assert_eq!(one.vector, four.vector);
    assert_eq!(one.truncated_fraction, four.truncated_fraction);
}

#[test]
fn snakes_and_ladders_always_reaches_the_goal() {
    let spec = compile_source(PLAYABLE[4].1).unwrap();
    let report = analyze(&spec, &config(200));
    assert_eq!(report.vector.get(ids::FREQ_REACH_END), Some(1.0));
    assert_eq!(report.vector.get(ids::FREQ_ROLL), Some(1.0));
    assert_eq!(report.truncated_fraction, 0.0);
}

#[test]
fn breakthrough_uses_step_and_capture() {
    let spec = compile_source(PLAYABLE[1].1).unwrap();
    let report = analyze(&spec, &config(200));
    assert_eq!(report.vector.get(ids::FREQ_STEP), Some(1.0));
    let capture = report.vector.get(ids::FREQ_CAPTURE).unwrap();
    assert!(capture > 0.0 && capture < 0.5, "{capture}");
}
