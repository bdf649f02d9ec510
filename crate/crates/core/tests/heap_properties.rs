use locfree_core::heap::{heap_from_word, ColoredHeap, HeapMode, Letter, RoofSet, Sign};
use proptest::prelude::*;

fn letter(n: u32, inverses: bool) -> impl Strategy<Value = Letter> {
    let sign = if inverses {
        prop_oneof![Just(Sign::Plus), Just(Sign::Minus)].boxed()
    } else {
        Just(Sign::Plus).boxed()
    };
    (1..=n, sign).prop_map(|(i, s)| Letter::new(i, s))
}

fn word(inverses: bool, max_len: usize) -> impl Strategy<Value = (u32, Vec<Letter>)> {
    (1u32..=7).prop_flat_map(move |n| (Just(n), prop::collection::vec(letter(n, inverses), 0..max_len)))
}

/// A word on `n >= 3` generators with two columns at distance at least 2.
fn far_pair() -> impl Strategy<Value = (u32, Vec<Letter>, u32, u32)> {
    (3u32..=7).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .filter(|(i, j)| i.abs_diff(*j) >= 2)
            .collect();
        (Just(n), prop::collection::vec(letter(n, true), 0..30), prop::sample::select(pairs))
            .prop_map(|(n, w, (i, j))| (n, w, i, j))
    })
}

/// A word on `n >= n_min` generators and a column `1..=n`.
fn with_column(n_min: u32, inverses: bool) -> impl Strategy<Value = (u32, Vec<Letter>, u32)> {
    (n_min..=7).prop_flat_map(move |n| (Just(n), prop::collection::vec(letter(n, inverses), 0..30), 1..=n))
}

fn group(n: u32, w: &[Letter]) -> ColoredHeap {
    heap_from_word(w, n, HeapMode::Group).unwrap()
}

/// Free reduction: cancel adjacent `x x^-1` pairs.
fn free_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn key_round_trip((n, w) in word(true, 40)) {
        let h = group(n, &w);
        let back = ColoredHeap::from_canonical_key(&h.canonical_key(), HeapMode::Group).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn inverse_word_cancels((n, w) in word(true, 40)) {
        let mut full = w.clone();
        full.extend(w.iter().rev().map(|l| l.inverse()));
        prop_assert!(group(n, &full).is_empty());
    }

    #[test]
    fn far_letters_commute((n, w, i, j) in far_pair(), si: bool, sj: bool) {
        let a = Letter::new(i, if si { Sign::Plus } else { Sign::Minus });
        let b = Letter::new(j, if sj { Sign::Plus } else { Sign::Minus });
        let mut x = w.clone();
        x.extend([a, b]);
        let mut y = w.clone();
        y.extend([b, a]);
        prop_assert_eq!(group(n, &x), group(n, &y));
    }

    #[test]
    fn near_letters_do_not_commute((n, w, i) in with_column(2, true)) {
        let i = i.min(n - 1);
        let (a, b) = (Letter::pos(i), Letter::pos(i + 1));
        let mut x = w.clone();
        x.extend([a, b]);
        let mut y = w.clone();
        y.extend([b, a]);
        prop_assert_ne!(group(n, &x), group(n, &y));
    }

    #[test]
    fn normal_form_rebuilds_heap((n, w) in word(true, 40)) {
        let h = group(n, &w);
        let nf = h.normal_form();
        prop_assert!(nf.validate().is_ok());
        prop_assert_eq!(nf.length(), h.len() as u64);
        let rebuilt = group(n, &nf.letters());
        prop_assert_eq!(&rebuilt, &h);
        prop_assert_eq!(rebuilt.normal_form(), nf);
    }

    #[test]
    fn semigroup_normal_form((n, w) in word(false, 40)) {
        let h = heap_from_word(&w, n, HeapMode::Semigroup).unwrap();
        prop_assert_eq!(h.len(), w.len());
        let nf = h.normal_form();
        prop_assert!(nf.validate().is_ok());
        prop_assert_eq!(heap_from_word(&nf.letters(), n, HeapMode::Semigroup).unwrap(), h);
    }

    #[test]
    fn reduced_length_bounds((n, w) in word(true, 40)) {
        let h = group(n, &w);
        prop_assert!(h.len() <= free_reduce(&w).len());
        prop_assert_eq!(h.len() % 2, w.len() % 2);
        prop_assert!(h.check_invariants().is_ok());
        prop_assert_eq!(h, group(n, &free_reduce(&w)));
    }

    #[test]
    fn two_generators_are_free(w in prop::collection::vec(letter(2, true), 0..60)) {
        prop_assert_eq!(group(2, &w).len(), free_reduce(&w).len());
    }

    #[test]
    fn roof_is_the_set_of_removable_letters((n, w) in word(true, 40)) {
        let h = group(n, &w);
        let roof = h.roof();
        prop_assert!(roof.is_independent());
        prop_assert!(roof.size() <= RoofSet::max_size(n));
        for i in 1..=n {
            for s in [Sign::Plus, Sign::Minus] {
                let shorter = h.pushed(Letter::new(i, s)).unwrap().len() + 1 == h.len();
                prop_assert_eq!(shorter, roof.entries()[i as usize - 1] == Some(s.inverse()));
            }
        }
    }

    #[test]
    fn restricted_heaps_stay_geodesic((n, w) in word(true, 40), r in 2u32..8) {
        let h = heap_from_word(&w, n, HeapMode::Restricted(r)).unwrap();
        prop_assert!(h.check_invariants().is_ok());
        prop_assert!(h.len() <= w.len());
        // f^r = 1
        let mut x = w.clone();
        x.extend(std::iter::repeat_n(Letter::pos(1), r as usize));
        prop_assert_eq!(heap_from_word(&x, n, HeapMode::Restricted(r)).unwrap(), h);
    }

    #[test]
    fn projective_idempotent((n, w, i) in with_column(1, false)) {
        let mut x = w.clone();
        x.push(Letter::pos(i));
        let once = heap_from_word(&x, n, HeapMode::Projective).unwrap();
        x.push(Letter::pos(i));
        prop_assert_eq!(heap_from_word(&x, n, HeapMode::Projective).unwrap(), once);
    }
}
