use std::path::Path;

use ludecon::concepts::ids;
use ludecon::playout::PlayoutConfig;
use ludecon::recommend::{
    build_corpus, corpus_files, distance, nearest, read_corpus, recommend, write_corpus, CorpusEntry, DistanceConfig,
};

fn corpus() -> Vec<CorpusEntry> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../games");
    let files = corpus_files(&dir).unwrap();
    let (entries, failures) = build_corpus(&files, &PlayoutConfig { trials: 200, master_seed: 5, ..PlayoutConfig::default() });
    assert!(failures.is_empty(), "{failures:?}");
    entries
}

fn entry<'a>(entries: &'a [CorpusEntry], id: &str) -> &'a CorpusEntry {
    entries.iter().find(|e| e.game_id == id).unwrap()
}

#[test]
fn bundled_corpus_builds() {
    let entries = corpus();
    assert_eq!(entries.len(), 13);
    assert_eq!(entries.iter().filter(|e| !e.scan_only).count(), 6);
    let havannah = entry(&entries, "Havannah");
    assert_eq!(havannah.vector.get(ids::HEX_TILING), Some(1.0));
    assert!(havannah.vector.get(ids::FREQ_LOOP_END).unwrap() > 0.0);
    let shogi = entry(&entries, "Shogi-scanonly");
    assert!(shogi.scan_only);
    assert_eq!(shogi.vector.get(ids::NUM_PLAYABLE_SITES), Some(95.0));
}

#[test]
fn connection_games_are_close() {
    let entries = corpus();
    let cfg = DistanceConfig::for_corpus(&entries);
    let hex = entry(&entries, "Hex");
    let d = |id| distance(hex, entry(&entries, id), &cfg).unwrap();
    assert!(d("Havannah") < d("Backgammon-scanonly"));
    assert!(d("Havannah") < d("SnakesAndLadders"));
    assert_eq!(nearest(&entries, "Hex", 1, &cfg).unwrap()[0].0, "Havannah");
}

#[test]
fn recommendation_avoids_the_dice_race() {
    let entries = corpus();
    let cfg = DistanceConfig::for_corpus(&entries);
    let likes = ["Hex".to_string(), "Havannah".to_string()];
    let ranked = recommend(&entries, &likes, &["Backgammon-scanonly".to_string()], 3, &cfg).unwrap();
    assert_eq!(ranked.len(), 3);
    let top = entry(&entries, &ranked[0].0);
    assert_ne!(top.vector.get(ids::STOCHASTIC), Some(1.0), "{}", top.game_id);
    assert!(ranked.iter().all(|(id, _)| id != "Hex" && id != "Havannah"));
}

#[test]
fn matrix_round_trips_through_disk() {
    let entries = corpus();
    let path = std::env::temp_dir().join(format!("ludecon-corpus-{}.csv", std::process::id()));
    write_corpus(&path, &entries).unwrap();
    let back = read_corpus(&path).unwrap();
    assert_eq!(back.len(), entries.len());
    for (a, b) in entries.iter().zip(&back) {
        assert_eq!(a.game_id, b.game_id);
        assert_eq!(a.scan_only, b.scan_only);
        assert_eq!(a.vector, b.vector);
    }
}
