mod common;

use common::fuzzed_poly;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use transpoly::textio::{from_json, parse_poly, parse_surint, to_json, TextError};
use transpoly::NakedPoly;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let p = fuzzed_poly(&mut StdRng::seed_from_u64(seed));
        let text = p.to_string();
        prop_assert_eq!(parse_poly(&text).unwrap(), p, "{}", text);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let p = fuzzed_poly(&mut StdRng::seed_from_u64(seed));
        prop_assert_eq!(from_json(&to_json(&p)).unwrap(), p);
    }

    #[test]
    fn printing_is_injective(a in any::<u64>(), b in any::<u64>()) {
        let pa = fuzzed_poly(&mut StdRng::seed_from_u64(a));
        let pb = fuzzed_poly(&mut StdRng::seed_from_u64(b));
        prop_assert_eq!(pa == pb, pa.to_string() == pb.to_string());
    }

    #[test]
    fn parser_is_total_on_bytes(bytes in prop::collection::vec(any::<u8>(), 0..40)) {
        let text = String::from_utf8_lossy(&bytes);
        let _ = parse_poly(&text);
        let _ = parse_surint(&text);
    }

    #[test]
    fn parser_is_total_on_grammar_soup(
        words in prop::collection::vec(
            prop::sample::select(vec![
                "X", "w", "n", "sum", "series", "(", ")", "[", "]", "^", "*", "+", "-", "/",
                ",", "<", "0", "1", "2", "17", "(-1)^n", "X^(w)", "w^(w)",
            ]),
            0..24,
        )
    ) {
        let text = words.concat();
        match parse_poly(&text) {
            Ok(_) | Err(TextError::Engine(_)) => {}
            Err(TextError::Parse(e)) => prop_assert!(e.span.offset + e.span.length <= text.len()),
            Err(TextError::Schema(_)) => prop_assert!(false, "schema error from text"),
        }
    }
}

#[test]
fn parse_errors_are_reproducible() {
    let a = parse_poly("X^(w - ) + 1").unwrap_err().to_string();
    let b = parse_poly("X^(w - ) + 1").unwrap_err().to_string();
    assert_eq!(a, b);
    assert_eq!(a, "parse error at 7..8: expected an exponent term, found `)`");
}

#[test]
fn zero_document() {
    assert_eq!(to_json(&NakedPoly::zero()), r#"{"schemaVersion":1,"families":[]}"#);
    assert!(from_json(r#"{"families":[]}"#).unwrap().is_zero());
}
