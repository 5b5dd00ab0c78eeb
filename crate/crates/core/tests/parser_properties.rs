use ludecon::ludeme::{parse_source, print, LudemeNode, NodeKind};
use ludecon::scan_source;
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = LudemeNode> {
    prop_oneof![
        "[A-Za-z][A-Za-z0-9]{0,6}".prop_map(|s| LudemeNode::new(NodeKind::Symbol(s), Default::default())),
        "[A-Za-z0-9 ]{0,8}".prop_map(|s| LudemeNode::new(NodeKind::String(s), Default::default())),
        (-500i32..500, 0u8..4).prop_map(|(n, d)| {
            let v = n as f64 / 10f64.powi(d as i32);
            LudemeNode::new(NodeKind::Number(v), Default::default())
        }),
    ]
}

fn tree() -> impl Strategy<Value = LudemeNode> {
    leaf().prop_recursive(5, 64, 6, |inner| {
        prop_oneof![
            ("[a-z][A-Za-z]{0,7}", prop::collection::vec(inner.clone(), 0..6))
                .prop_map(|(h, c)| LudemeNode::constructor(&h, c)),
            prop::collection::vec(inner, 0..5).prop_map(|c| LudemeNode::new(NodeKind::Set(c), Default::default())),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(t in tree()) {
        let text = print(&t);
        let back = parse_source(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(print(&back), text);
    }

    #[test]
    fn scanning_arbitrary_text_never_panics(s in "[(){}\"a-z0-9 ]{0,80}") {
        let _ = scan_source(&s);
    }
}

#[test]
fn corpus_files_are_print_fixpoints() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../games");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let tree = parse_source(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let printed = print(&tree);
        assert_eq!(parse_source(&printed).unwrap(), tree, "{}", path.display());
        assert_eq!(print(&parse_source(&printed).unwrap()), printed);
    }
}
