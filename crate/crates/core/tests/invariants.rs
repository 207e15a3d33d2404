mod common {
    pub mod invariants;
    pub mod synth;
}

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stylo_core::conllu::{parse_conllu_str, validate, write_conllu};
use stylo_core::{builtin_registry, Lexicons, MetricRegistry};

use common::{invariants::violations, synth};

fn registry() -> &'static MetricRegistry {
    static REG: OnceLock<MetricRegistry> = OnceLock::new();
    REG.get_or_init(|| builtin_registry(Arc::new(Lexicons::bundled())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn metric_invariants_hold(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let doc = synth::document(&mut rng, "synthetic");
        for s in &doc.sentences {
            prop_assert!(validate(s).is_empty());
        }
        let v = violations(registry(), &doc);
        prop_assert!(v.is_empty(), "{}", v.join("\n"));
    }

    #[test]
    fn corrections_are_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let doc = synth::document(&mut rng, "synthetic");
        let m = registry().morphology();
        for s in &doc.sentences {
            let once = m.analyze_sentence(s).sentence;
            for pos in 0..once.len() {
                prop_assert!(m.correct_feats(&once, pos).is_empty());
            }
        }
    }

    #[test]
    fn write_then_parse_is_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let doc = synth::document(&mut rng, "synthetic");
        let text = write_conllu(std::slice::from_ref(&doc));
        let back = parse_conllu_str(&text, "x").unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(back[0].token_count(), doc.token_count());
        for (a, b) in back[0].sentences.iter().zip(&doc.sentences) {
            prop_assert_eq!(&a.tokens, &b.tokens);
        }
    }
}
