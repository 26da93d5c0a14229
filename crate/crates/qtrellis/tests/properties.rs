use proptest::prelude::*;
use qtrellis::code::{builtin, rotated_surface, Split, StabilizerCode};
use qtrellis::decode::{
    brute_force_min, pure_error, Decoder, SyndromeDecoder, ViterbiOptions, WeightTable, Workspace,
};
use qtrellis::ffield::Field;
use qtrellis::pauli::{format_pauli, parse_pauli, PauliString};
use qtrellis::sim::{fit_threshold, Dataset};
use qtrellis::trellis::{census, deserialize, serialize, validate, Trellis, DEFAULT_EDGE_CAP};

fn pauli(p: u32, n: usize) -> impl Strategy<Value = PauliString> {
    let field = Field::new(p).unwrap();
    (prop::collection::vec(0..p as u8, n), prop::collection::vec(0..p as u8, n))
        .prop_map(move |(x, z)| PauliString::from_exponents(field, x, z).unwrap())
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7, 251])
}

fn table(n: usize) -> impl Strategy<Value = WeightTable> {
    prop::collection::vec(prop::collection::vec(0.0f64..8.0, 4), n).prop_map(|rows| WeightTable::new(2, rows).unwrap())
}

fn syndrome(m: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, m)
}

proptest! {
    #[test]
    fn symplectic_form_is_bilinear_and_alternating((p, a, b, c) in prime().prop_flat_map(|p| (Just(p), pauli(p, 6), pauli(p, 6), pauli(p, 6)))) {
        let f = Field::new(p).unwrap();
        prop_assert_eq!(a.sym_inner(&a).unwrap(), 0);
        prop_assert_eq!(f.add(a.sym_inner(&b).unwrap(), b.sym_inner(&a).unwrap()), 0);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.sym_inner(&c).unwrap(), f.add(a.sym_inner(&c).unwrap(), b.sym_inner(&c).unwrap()));
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.mul(&a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn text_form_round_trips((p, a) in prime().prop_flat_map(|p| (Just(p), pauli(p, 9)))) {
        let f = Field::new(p).unwrap();
        prop_assert_eq!(parse_pauli(f, &format_pauli(&a)).unwrap(), a);
    }

    #[test]
    fn viterbi_weight_is_the_coset_minimum(w in table(5), s in syndrome(4)) {
        let c = builtin("five_one_three", None).unwrap();
        let t = Trellis::for_code(&c, Split::Full, DEFAULT_EDGE_CAP).unwrap();
        let out = Decoder::new(&c, &t, &w, ViterbiOptions::default()).unwrap().decode(&s).unwrap();
        prop_assert_eq!(c.syndrome(&out.correction).unwrap(), s.clone());
        prop_assert_eq!(out.path_weight, brute_force_min(&pure_error(&c, &s).unwrap(), c.normalizer(), &w));
    }

    #[test]
    fn decoder_options_agree_on_weight(w in table(9), s in syndrome(8)) {
        let c = rotated_surface(3).unwrap();
        let t = Trellis::for_code(&c, Split::Full, DEFAULT_EDGE_CAP).unwrap();
        let mut ws = Workspace::new();
        let base = Decoder::new(&c, &t, &w, ViterbiOptions::default()).unwrap().correct(&s, &mut ws).unwrap();
        for opts in [ViterbiOptions { bidirectional: true, parallel: false }, ViterbiOptions { bidirectional: true, parallel: true }] {
            let r = Decoder::new(&c, &t, &w, opts).unwrap().correct(&s, &mut ws).unwrap();
            prop_assert!((r.weight - base.weight).abs() < 1e-9);
            prop_assert_eq!(c.syndrome(&r.correction).unwrap(), s.clone());
        }
    }

    #[test]
    fn renumbering_keeps_the_trellis_minimal(order in Just((1..=9).collect::<Vec<usize>>()).prop_shuffle()) {
        let c: StabilizerCode = rotated_surface(3).unwrap().permuted(&order).unwrap();
        for split in [Split::Full, Split::X, Split::Z] {
            let t = Trellis::for_code(&c, split, DEFAULT_EDGE_CAP).unwrap();
            prop_assert!(validate(&t, &c.profile(split).unwrap()).is_empty());
            let cs = census(&t).unwrap();
            prop_assert!(cs.identities_hold());
            prop_assert_eq!(cs.mergers, t.total_edges() + 1 - t.total_vertices());
        }
    }

    #[test]
    fn shifted_paths_share_the_syndrome(s in syndrome(4)) {
        let c = builtin("five_one_three", None).unwrap();
        let t = Trellis::for_code(&c, Split::Full, DEFAULT_EDGE_CAP).unwrap();
        let pe = pure_error(&c, &s).unwrap();
        let shifted = t.shift(&pe).materialize(Some(c.stabilizers()));
        let paths = shifted.enumerate_paths();
        prop_assert_eq!(paths.len(), 64);
        for path in paths {
            prop_assert_eq!(c.syndrome(&path).unwrap(), s.clone());
        }
        prop_assert_eq!(deserialize(&serialize(&shifted)).unwrap(), shifted);
    }

    #[test]
    fn threshold_fit_recovers_exact_data(p_th in 0.08f64..0.12, nu in 1.0f64..2.0, b in 0.5f64..2.0) {
        let data: Vec<Dataset> = [9usize, 11, 13]
            .iter()
            .map(|&d| Dataset {
                distance: d,
                points: (0..9)
                    .map(|k| {
                        let p = p_th - 0.02 + 0.005 * k as f64;
                        let x = (p - p_th) * (d as f64).powf(1.0 / nu);
                        (p, 0.1 + b * x + x * x)
                    })
                    .collect(),
            })
            .collect();
        let fit = fit_threshold(&data, 9).unwrap();
        prop_assert!((fit.p_th - p_th).abs() < 1e-3);
        prop_assert!((fit.nu - nu).abs() < 1e-2);
    }
}
