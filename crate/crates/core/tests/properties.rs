use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dstbc::bounds::{cpi_rate_bound, dostbc_rate_bound};
use dstbc::oracle::{canonical_form, Structure};
use dstbc::sim::{joint_ml_decode, run_ber, ss_ml_decode, transmit, Constellation, Modulation, PowerConfig, Scheme, SimConfig};
use dstbc::verify::{check_definition1, check_definition2, check_definition2_exact, check_theorem1, noise_covariance, NumericOptions};
use dstbc::{construct, parse_code, serialize_code, AssociatedPair, ChannelRealization, DistributedCode, MonoCoeff, MonoMatrix, Rate};

fn coeff() -> impl Strategy<Value = MonoCoeff> {
    prop::sample::select(MonoCoeff::ALL.to_vec())
}

fn unit() -> impl Strategy<Value = MonoCoeff> {
    prop::sample::select(MonoCoeff::UNITS.to_vec())
}

fn any_matrix(n: usize, t: usize) -> impl Strategy<Value = MonoMatrix> {
    prop::collection::vec(prop::collection::vec(coeff(), t), n).prop_map(|rows| MonoMatrix::from_rows(rows).unwrap())
}

/// At most one nonzero per column.
fn column_monomial(n: usize, t: usize) -> impl Strategy<Value = MonoMatrix> {
    prop::collection::vec(prop::option::weighted(0.6, (0..n, unit())), t).prop_map(move |cols| {
        let mut m = MonoMatrix::zeros(n, t);
        for (c, entry) in cols.into_iter().enumerate() {
            if let Some((r, v)) = entry {
                m.set(r, c, v);
            }
        }
        m
    })
}

/// At most one nonzero per row.
fn row_monomial(n: usize, t: usize) -> impl Strategy<Value = MonoMatrix> {
    prop::collection::vec(prop::option::weighted(0.7, (0..t, unit())), n).prop_map(move |rows| {
        let mut m = MonoMatrix::zeros(n, t);
        for (r, entry) in rows.into_iter().enumerate() {
            if let Some((c, v)) = entry {
                m.set(r, c, v);
            }
        }
        m
    })
}

fn code_from<S, F>(max: usize, matrix: F) -> impl Strategy<Value = DistributedCode>
where
    S: Strategy<Value = MonoMatrix>,
    F: Fn(usize, usize) -> S + Clone + 'static,
{
    (1..=max, 1..=max, 1..=max).prop_flat_map(move |(n, k, t)| {
        let m = matrix.clone();
        prop::collection::vec((m(n, t), m(n, t)).prop_map(|(a, b)| AssociatedPair::new(a, b)), k)
            .prop_map(move |relays| DistributedCode::new(n, t, relays).unwrap())
    })
}

fn opts() -> NumericOptions {
    NumericOptions {
        draws: 20,
        tol: 1e-9,
        seed: 17,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn code_file_round_trip(code in code_from(4, any_matrix)) {
        let text = serialize_code(&code);
        prop_assert_eq!(parse_code(&text).unwrap(), code);
    }

    #[test]
    fn exact_and_numeric_no_csi_checks_agree(code in code_from(3, column_monomial)) {
        let exact = check_theorem1(&code).passed();
        let numeric = check_definition1(&code, &opts()).unwrap().passed();
        prop_assert_eq!(exact, numeric, "\n{}", serialize_code(&code));
    }

    #[test]
    fn exact_and_numeric_cpi_checks_agree(code in code_from(3, row_monomial)) {
        let exact = check_definition2_exact(&code).passed();
        let numeric = check_definition2(&code, &opts()).unwrap().passed();
        prop_assert_eq!(exact, numeric, "\n{}", serialize_code(&code));
    }

    #[test]
    fn canonical_form_is_slot_order_invariant(code in code_from(3, row_monomial), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..code.n_slots()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let canon = canonical_form(&code, Structure::RowMonomialCpi);
        prop_assert_eq!(&canonical_form(&code.permute_slots(&perm), Structure::RowMonomialCpi), &canon);
        prop_assert_eq!(&canonical_form(&canon, Structure::RowMonomialCpi), &canon);
    }

    #[test]
    fn noise_covariance_eigenvalues_at_least_one(code in code_from(3, any_matrix), seed in any::<u64>(), snr in -5.0..30.0f64) {
        let channels = ChannelRealization::draw(code.n_relays(), &mut ChaCha8Rng::seed_from_u64(seed));
        let power = PowerConfig::from_snr_per_bit(snr, 2, code.n_relays()).unwrap();
        let r = noise_covariance(&code, &channels, power.rho()).unwrap();
        prop_assert!(r.min_eigenvalue() >= 1.0 - 1e-9);
    }

    #[test]
    fn power_split(snr in -10.0..40.0f64, bits in 1u32..=8, k in 1usize..=8) {
        let p = PowerConfig::from_snr_per_bit(snr, bits, k).unwrap();
        prop_assert!((p.es() - k as f64 * p.er()).abs() <= 1e-9 * p.es());
        prop_assert!((p.rho().powi(2) * (1.0 + p.es()) - p.er()).abs() <= 1e-9 * p.er());
    }

    #[test]
    fn bound_shapes(n in 1usize..=16, k in 1usize..=16) {
        let d = dostbc_rate_bound(n, k);
        prop_assert!(d <= Rate::new(2, k as u64));
        prop_assert_eq!(d == Rate::new(2, k as u64), (n * k) % 2 == 0);
        prop_assert!(cpi_rate_bound(k) >= Rate::new(1, 2) && cpi_rate_bound(k) <= Rate::new(1, 1));
        if k >= 4 {
            prop_assert!(d <= cpi_rate_bound(k));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_symbol_equals_joint_decoding(
        which in 0usize..5,
        seed in any::<u64>(),
        snr in 0.0..20.0f64,
        qam16 in any::<bool>(),
    ) {
        let (code, cpi) = match which {
            0 => (construct::alamouti(), true),
            1 => (construct::alamouti(), false),
            2 => (construct::rate_halving(4, 3).unwrap(), true),
            3 => (construct::repetition(3).unwrap(), false),
            _ => (construct::pairwise_alamouti(2, 4).unwrap(), false),
        };
        let m = if qam16 && code.n_symbols() <= 2 { Modulation::Qam16 } else { Modulation::Qpsk };
        let constellation = Constellation::new(m);
        let power = PowerConfig::from_snr_per_bit(snr, m.bits_per_symbol(), code.n_relays()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let channels = ChannelRealization::draw(code.n_relays(), &mut rng);
            let s: Vec<Complex64> = (0..code.n_symbols())
                .map(|i| constellation.point((seed as usize + i * 7) % constellation.order()) * power.es().sqrt())
                .collect();
            let y = transmit(&code, &channels, &power, cpi, &s, false, &mut rng);
            let ss = ss_ml_decode(&y, &channels, &code, &power, cpi, &constellation);
            let joint = joint_ml_decode(&y, &channels, &code, &power, cpi, &constellation).unwrap();
            prop_assert_eq!(ss, joint);
        }
    }
}

#[test]
fn ber_is_non_increasing_within_three_sigma() {
    for (scheme, code) in [
        (Scheme::DostbcCpi, construct::alamouti()),
        (Scheme::Dostbc, construct::pairwise_alamouti(4, 4).unwrap()),
        (Scheme::Repetition, construct::repetition(2).unwrap()),
    ] {
        let bits = code.n_symbols() as u64 * 2;
        let cfg = SimConfig::new(scheme, code, Modulation::Qpsk, vec![0.0, 4.0, 8.0, 12.0, 16.0]);
        let points = run_ber(&cfg).unwrap();
        for w in points.windows(2) {
            let slack = (w[0].three_sigma(bits).powi(2) + w[1].three_sigma(bits).powi(2)).sqrt();
            assert!(w[1].ber <= w[0].ber + slack, "{scheme:?}: {:?} -> {:?}", w[0], w[1]);
        }
    }
}
