use std::sync::Arc;

use morita_cli::document::{parse_unchecked, serialize, Document, Payload};
use morita_core::gen;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sample(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Arc::new(gen::random_groupoid(&mut rng, 3, 8));
    let payload = match seed % 3 {
        0 => Payload::Groupoid((*g).clone()),
        1 => Payload::Action(gen::random_action(&mut rng, &g, 4)),
        _ => Payload::Bibundle(gen::random_bibundle(&mut rng, 2, 6, 6).into_sides()),
    };
    serialize(&Document::new("sample", payload))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Changing one number never panics the parser, and whatever still
    /// parses serializes back to the same text.
    #[test]
    fn mutated_numbers(seed in 0u64..64, pick in any::<prop::sample::Index>(), value in 0usize..12) {
        let text = sample(seed);
        let digits: Vec<usize> = text.char_indices().filter(|(_, c)| c.is_ascii_digit()).map(|(i, _)| i).collect();
        let at = digits[pick.index(digits.len())];
        let end = text[at..].find(|c: char| !c.is_ascii_digit()).map_or(text.len(), |n| at + n);
        let mutated = format!("{}{}{}", &text[..at], value, &text[end..]);
        if let Ok(doc) = parse_unchecked(&mutated, None) {
            let again = serialize(&doc);
            prop_assert_eq!(serialize(&parse_unchecked(&again, None).unwrap()), again);
        }
    }

    #[test]
    fn truncations_are_errors(seed in 0u64..64, cut in any::<prop::sample::Index>()) {
        let text = sample(seed);
        let at = cut.index(text.trim_end().len());
        prop_assert!(parse_unchecked(&text[..at], None).is_err());
    }
}
