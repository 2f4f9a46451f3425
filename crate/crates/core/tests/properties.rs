use proptest::prelude::*;

use fermat_ws::curve::{apply_automorphism, make_curve, sample_places, AutGen, AutWord};
use fermat_ws::oracle::gap_set_oracle;
use fermat_ws::theorems::gaps::{gaps_half_int, gaps_third_int};
use fermat_ws::theorems::{closed_form_gaps, semigroup_from_gaps, POrder};

fn gen_strategy(m: u64) -> impl Strategy<Value = AutGen> {
    prop_oneof![
        (0..m, 0..m).prop_map(|(a, b)| AutGen::A(a, b)),
        Just(AutGen::S),
        Just(AutGen::T),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unordered_closed_forms_are_semigroup_complements(m in 4u64..40, extra in 0u64..4, infinite: bool) {
        let order = if infinite { POrder::Infinite } else { POrder::Finite(m - 1 + extra) };
        let g = (m - 1) * (m - 2) / 2;
        for stride in [3 * m - 1, 3 * m] {
            let gaps = gaps_third_int(m, stride, order);
            prop_assert_eq!(gaps.len() as u64, g);
            prop_assert!(semigroup_from_gaps(&gaps).is_ok(), "m = {}, stride = {}", m, stride);
        }
        for stride in [2 * m - 1, 2 * m] {
            let gaps = gaps_half_int(m, stride);
            prop_assert!(semigroup_from_gaps(&gaps).is_ok(), "m = {}, stride = {}", m, stride);
        }
    }

    #[test]
    fn closed_form_agrees_with_oracle_on_sampled_places(seed in any::<u64>()) {
        for (p, e, m) in [(11u64, 1u32, 4u64), (17, 1, 6), (3, 2, 5)] {
            let c = make_curve(p, e, m).unwrap();
            for place in sample_places(&c, 2, 2, seed).unwrap() {
                let cf = closed_form_gaps(&c, &place).unwrap().expect("closed form applies");
                prop_assert_eq!(cf.gaps, gap_set_oracle(&c, &place, None).unwrap());
            }
        }
    }

    #[test]
    fn oracle_gaps_form_semigroup_complements(seed in any::<u64>()) {
        let c = make_curve(3, 2, 5).unwrap();
        for p in sample_places(&c, 2, 3, seed).unwrap() {
            let gaps = gap_set_oracle(&c, &p, None).unwrap();
            prop_assert_eq!(gaps.len() as u64, c.genus());
            prop_assert!(semigroup_from_gaps(gaps.gaps()).is_ok());
        }
    }

    #[test]
    fn words_are_undone_by_their_inverses(
        seed in any::<u64>(),
        word in prop::collection::vec(gen_strategy(4), 0..8),
    ) {
        let c = make_curve(7, 1, 4).unwrap();
        let w = AutWord(word);
        let back = w.then(&w.inverse(c.m()));
        let mut places = c.o_places();
        places.extend(sample_places(&c, 2, 2, seed).unwrap());
        for p in places {
            let image = apply_automorphism(&c, &w, &p).unwrap();
            prop_assert_eq!(image.degree(), p.degree());
            prop_assert_eq!(apply_automorphism(&c, &back, &p).unwrap(), p);
            prop_assert_eq!(gap_set_oracle(&c, &image, None).unwrap(), gap_set_oracle(&c, &p, None).unwrap());
        }
    }
}
