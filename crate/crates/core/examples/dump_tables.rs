//! Regenerates the golden table serializations under tests/golden/.

fn main() {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for name in ["A2", "B2", "G2"] {
        let sr = loopext::lie::SeriesRank::parse(name).unwrap();
        let t = loopext::lie::build_split_simple(sr.series, sr.rank).unwrap();
        let path = dir.join(format!("table_{}.txt", name.to_lowercase()));
        std::fs::write(&path, t.serialize_text()).unwrap();
        println!("wrote {}", path.display());
    }
}
