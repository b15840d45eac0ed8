use proptest::prelude::*;

use setcoh::datagen::{build_splits, load_splits, read_jsonl, save_splits, write_jsonl, SplitConfig, Style};
use setcoh::model::{from_bytes, to_bytes, ModelConfig, ModelParams, Vocabulary};

#[test]
fn splits_survive_disk() {
    for style in [Style::Snli, Style::Qa] {
        let split = build_splits(&SplitConfig::uniform(style, 15), 21).unwrap();
        let dir = tempfile::tempdir().unwrap();
        save_splits(dir.path(), &split).unwrap();
        assert_eq!(load_splits(dir.path()).unwrap(), split);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn jsonl_bytes_are_stable(seed in 0u64..1000) {
        let split = build_splits(&SplitConfig::uniform(Style::Snli, 4), seed).unwrap();
        let mut a = Vec::new();
        write_jsonl(&mut a, &split.test).unwrap();
        let back = read_jsonl(a.as_slice()).unwrap();
        prop_assert_eq!(&back, &split.test);
        let mut b = Vec::new();
        write_jsonl(&mut b, &back).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn parameter_files_round_trip(seed in 0u64..1000, dim in 1usize..6, hidden in 1usize..6) {
        let vocab = Vocabulary::from_tokens(["a", "b", "c"].map(String::from));
        let cfg = ModelConfig { dim, hidden, pair_buckets: 8, init_scale: 0.5 };
        let params = ModelParams::init(vocab, &cfg, seed);
        let bytes = to_bytes(&params);
        let back = from_bytes(&bytes).unwrap();
        prop_assert_eq!(to_bytes(&back), bytes);
        prop_assert_eq!(back.theta, params.theta);
    }
}
