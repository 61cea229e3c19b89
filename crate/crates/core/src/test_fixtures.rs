use crate::groupoid::{Groupoid, GroupoidSpec};

/// Two isomorphic objects with trivial automorphism groups.
pub fn iso_pair() -> Groupoid {
    // a <-> b with trivial endomorphisms
    let spec = GroupoidSpec {
        objects: vec!["a".into(), "b".into()],
        morphisms: vec![
            ("ia".into(), "a".into(), "a".into()),
            ("ib".into(), "b".into(), "b".into()),
            ("f".into(), "a".into(), "b".into()),
            ("g".into(), "b".into(), "a".into()),
        ],
        compose: vec![
            ("ia".into(), "ia".into(), "ia".into()),
            ("ib".into(), "ib".into(), "ib".into()),
            ("ia".into(), "f".into(), "f".into()),
            ("f".into(), "ib".into(), "f".into()),
            ("ib".into(), "g".into(), "g".into()),
            ("g".into(), "ia".into(), "g".into()),
            ("f".into(), "g".into(), "ia".into()),
            ("g".into(), "f".into(), "ib".into()),
        ],
    };
    Groupoid::validate(&spec).unwrap()
}
