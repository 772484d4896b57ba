use indel_entropy::embedding::{deletion_ball, embedding_number, insertion_ball};
use indel_entropy::entropy::{
    closed_form_1del, closed_form_1ins, closed_form_2del, closed_form_2ins,
    input_entropy_enumerated, output_entropy_enumerated, ChannelSpec,
};
use indel_entropy::words::{run_length_profile, RunLengthProfile, Word};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

/// Index-set oracle: counts increasing position tuples of `x` spelling `y`.
fn brute_embeddings(y: &[u8], x: &[u8]) -> u128 {
    if y.is_empty() {
        return 1;
    }
    (0..x.len())
        .filter(|&i| x[i] == y[0])
        .map(|i| brute_embeddings(&y[1..], &x[i + 1..]))
        .sum()
}

fn word(q: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..q, 0..=max_len).prop_map(move |s| Word::new(s, q).unwrap())
}

fn nonempty(q: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..q, 1..=max_len).prop_map(move |s| Word::new(s, q).unwrap())
}

proptest! {
    #[test]
    fn embedding_matches_index_sets(x in word(3, 10), y in word(3, 5)) {
        prop_assert_eq!(embedding_number(&y, &x).unwrap(), brute_embeddings(y.symbols(), x.symbols()));
    }

    #[test]
    fn ball_members_embed(y in word(2, 7), k in 0usize..3) {
        for (x, &c) in &insertion_ball(&y, k).unwrap().entries {
            prop_assert_eq!(c, brute_embeddings(y.symbols(), x.symbols()));
        }
        if k <= y.len() {
            for (z, &c) in &deletion_ball(&y, k).unwrap().entries {
                prop_assert_eq!(c, brute_embeddings(z.symbols(), y.symbols()));
            }
        }
    }

    #[test]
    fn duality_holds(w in nonempty(3, 6), k in 1usize..3) {
        let del = ChannelSpec::deletion(k, 3);
        let ins = ChannelSpec::insertion(k, 3);
        let a = input_entropy_enumerated(&w, del).unwrap().entropy_bits;
        let b = output_entropy_enumerated(&w, ins).unwrap().entropy_bits;
        prop_assert!((a - b).abs() <= TOL);
        if w.len() > k {
            let a = input_entropy_enumerated(&w, ins).unwrap().entropy_bits;
            let b = output_entropy_enumerated(&w, del).unwrap().entropy_bits;
            prop_assert!((a - b).abs() <= TOL);
        }
    }

    #[test]
    fn entropy_stays_within_support(w in nonempty(2, 9), k in 1usize..3) {
        for ch in [ChannelSpec::deletion(k, 2), ChannelSpec::insertion(k, 2)] {
            let Ok(r) = input_entropy_enumerated(&w, ch) else { continue };
            let support = r.support_size().unwrap() as f64;
            prop_assert!(r.entropy_bits >= 0.0);
            prop_assert!(r.entropy_bits <= support.log2() + TOL);
        }
    }

    /// Single-edit entropies depend on the run lengths only as a multiset.
    #[test]
    fn single_edit_entropy_ignores_run_order(
        (runs, shuffled) in prop::collection::vec(1usize..4, 1..6)
            .prop_flat_map(|r| (Just(r.clone()), Just(r).prop_shuffle())),
    ) {
        let spell = |r: &[usize]| RunLengthProfile {
            runs: r.to_vec(),
            symbols: (0..r.len()).map(|i| (i % 3) as u8).collect(),
        }
        .to_word(3)
        .unwrap();
        let a = spell(&runs);
        let b = spell(&shuffled);
        prop_assert!((closed_form_1del(&a).unwrap().entropy_bits - closed_form_1del(&b).unwrap().entropy_bits).abs() <= TOL);
        if a.len() >= 2 {
            prop_assert!((closed_form_1ins(&a).unwrap().entropy_bits - closed_form_1ins(&b).unwrap().entropy_bits).abs() <= TOL);
        }
        prop_assert_eq!(run_length_profile(&a).unwrap().runs.len(), runs.len());
    }

    #[test]
    fn two_edit_closed_forms_on_longer_words(w in nonempty(2, 13)) {
        let c = closed_form_2del(&w).unwrap().entropy_bits;
        let e = input_entropy_enumerated(&w, ChannelSpec::deletion(2, 2)).unwrap().entropy_bits;
        prop_assert!((c - e).abs() <= TOL);
        if w.len() >= 3 {
            let c = closed_form_2ins(&w).unwrap().entropy_bits;
            let e = input_entropy_enumerated(&w, ChannelSpec::insertion(2, 2)).unwrap().entropy_bits;
            prop_assert!((c - e).abs() <= TOL);
        }
    }
}
