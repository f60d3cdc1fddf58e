use std::path::PathBuf;

use ulogic::proof::{check_proof, ProofScript};

fn scripts() -> Vec<(String, ProofScript)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("proofs");
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "upl"))
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let script = ProofScript::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, script)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[test]
fn shipped_scripts_are_accepted() {
    let all = scripts();
    assert_eq!(all.len(), 9);
    for (name, s) in &all {
        let r = check_proof(s);
        assert!(r.accepted(), "{name}: {:?}", r.lines.iter().find(|l| !l.ok));
    }
}
