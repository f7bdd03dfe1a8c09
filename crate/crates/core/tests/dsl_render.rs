use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tw_core::dsl::{parse_diagram, parse_word, print_diagram, print_inline};
use tw_core::random::{random_diagram, random_tw};
use tw_core::render::{render_ascii, render_svg};
use tw_core::tw::{beta, tau};

#[test]
fn round_trip_on_random_diagrams() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..500 {
        let d = if i % 2 == 0 { random_diagram(&mut rng, i % 5, 10) } else { random_tw(&mut rng, 1 + i % 3, i % 3, true) };
        let text = print_diagram(&d);
        let back = parse_diagram(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(back, d);
        assert_eq!(print_diagram(&back), text);
        assert_eq!(parse_diagram(&print_inline(&d)).unwrap(), d);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let cases = [
        ("k=1\nsrc=0 1\nm(0)\n", 3),
        ("k=1\nsrc=0 2\n", 2),
        ("src=0\n", 1),
        ("k=1\nsrc=1 0\nt(0,1)\n", 3),
        ("k=0\nsrc=0 0\nm(0)\ntgt=0 0\n", 4),
        ("k=0\nsrc=0\nq(0)\n", 3),
    ];
    for (text, line) in cases {
        let e = parse_diagram(text).expect_err(text);
        assert_eq!(e.line, line, "{text}: {e}");
    }
}

#[test]
fn comments_and_separators() {
    let a = parse_diagram("k=1 # degree\nsrc=0 1 0 1\n(0) t(1,0) (1)\nm(0) (1 1)\ntgt=0 1 1\n").unwrap();
    let b = parse_diagram("k=1; src=0 1 0 1; (0) t(1,0) (1); m(0) (1 1)").unwrap();
    assert_eq!(a, b);
    assert_eq!(a, beta(2).unwrap());
    assert_eq!(parse_word("0 1 1").unwrap().len(), 3);
}

#[test]
fn tau2_ascii_matches_golden() {
    let d = tau(2).unwrap();
    let got = render_ascii(d.diagram());
    assert_eq!(got, include_str!("golden/tau2.txt"));
}

#[test]
fn beta3_svg_matches_golden() {
    let got = render_svg(&beta(3).unwrap());
    assert_eq!(got, include_str!("golden/beta3.svg"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_is_injective(seed in any::<u64>(), k in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&mut rng, k, 8);
        let e = random_diagram(&mut rng, k, 8);
        prop_assert_eq!(d == e, print_diagram(&d) == print_diagram(&e));
    }

    #[test]
    fn renders_are_total(seed in any::<u64>(), k in 0usize..4) {
        let d = random_diagram(&mut ChaCha8Rng::seed_from_u64(seed), k, 8);
        let a = render_ascii(&d);
        prop_assert_eq!(a.lines().count(), 2 + 2 * d.len());
        let s = render_svg(&d);
        prop_assert_eq!(s.matches("<circle").count(), d.generator_counts().0);
    }
}
