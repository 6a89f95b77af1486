mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use suci_core::ecies::{self, EciesError, EciesKeyPair, EciesProfile};
use suci_core::identifiers::{parse_supi, tbcd_encode};

use common::{golden_value, oracle, GOLDEN};

const PROFILES: [(&str, EciesProfile); 2] = [("a", EciesProfile::ProfileA), ("b", EciesProfile::ProfileB)];

#[test]
fn library_reproduces_golden_vectors() {
    let vectors = ecies::parse_vector_file(GOLDEN).unwrap();
    for (p, profile) in PROFILES {
        let v = |name: &str| vectors[&format!("{p}_{name}")].clone();
        let home = EciesKeyPair::from_private(profile, &v("home_private")).unwrap();
        assert_eq!(home.public_key(), v("home_public"));
        let eph = EciesKeyPair::from_private(profile, &v("ephemeral_private")).unwrap();
        assert_eq!(eph.public_key(), v("ephemeral_public"));

        let shared = ecies::key_agreement(profile, eph.private_key(), home.public_key()).unwrap();
        assert_eq!(shared.as_bytes().to_vec(), v("shared_secret"));
        assert_eq!(ecies::kdf(&shared, eph.public_key(), 64), v("kdf_output"));
        let keys = ecies::derive_keys(&shared, eph.public_key());
        assert_eq!(keys.enc_key.to_vec(), v("kdf_output")[..16]);
        assert_eq!(keys.initial_counter_block.to_vec(), v("kdf_output")[16..32]);
        assert_eq!(keys.mac_key.to_vec(), v("kdf_output")[32..]);

        let env = ecies::conceal_with_ephemeral(profile, home.public_key(), &v("plaintext"), &eph).unwrap();
        assert_eq!(env.ciphertext, v("ciphertext"));
        assert_eq!(env.mac, v("mac"));
        let pt = ecies::deconceal(profile, home.private_key(), &env.ephemeral_public_key, &env.ciphertext, &env.mac)
            .unwrap();
        assert_eq!(pt, v("plaintext"));
    }
}

#[test]
fn golden_plaintext_is_the_packed_msin() {
    let supi = parse_supi("24201-534567890").unwrap();
    assert_eq!(tbcd_encode(supi.msin()).unwrap(), golden_value("a_plaintext"));
    assert_eq!(golden_value("a_plaintext"), golden_value("b_plaintext"));
}

#[test]
fn output_shapes() {
    for (p, profile) in PROFILES {
        assert_eq!(golden_value(&format!("{p}_ephemeral_public")).len(), profile.public_key_len());
        assert_eq!(golden_value(&format!("{p}_ciphertext")).len(), 5);
        assert_eq!(golden_value(&format!("{p}_mac")).len(), ecies::MAC_LEN);
    }
    assert_eq!(EciesProfile::ProfileA.public_key_len(), 32);
    assert_eq!(EciesProfile::ProfileB.public_key_len(), 33);
}

#[test]
fn every_single_bit_flip_is_rejected() {
    for (p, profile) in PROFILES {
        let home_priv = golden_value(&format!("{p}_home_private"));
        let eph = golden_value(&format!("{p}_ephemeral_public"));
        let ct = golden_value(&format!("{p}_ciphertext"));
        let mac = golden_value(&format!("{p}_mac"));
        let mut checked = 0;
        for field in 0..3 {
            let len = [eph.len(), ct.len(), mac.len()][field];
            for bit in 0..len * 8 {
                let (mut e, mut c, mut m) = (eph.clone(), ct.clone(), mac.clone());
                [&mut e, &mut c, &mut m][field][bit / 8] ^= 1 << (bit % 8);
                match ecies::deconceal(profile, &home_priv, &e, &c, &m) {
                    Err(EciesError::IntegrityFailure) => {}
                    // some ephemeral-key flips leave the curve or hit a degenerate point
                    Err(EciesError::InvalidPoint | EciesError::DegenerateKey) if field == 0 => {}
                    other => panic!("{p} field {field} bit {bit}: {other:?}"),
                }
                checked += 1;
            }
        }
        assert_eq!(checked, (eph.len() + ct.len() + mac.len()) * 8);
    }
}

#[test]
fn x25519_flip_of_top_bit_is_a_different_key() {
    // X25519 ignores bit 255 of the u-coordinate, so flipping it yields the
    // same shared secret; the KDF still binds the exact encoding and the MAC fails.
    let home_priv = golden_value("a_home_private");
    let mut eph = golden_value("a_ephemeral_public");
    eph[31] ^= 0x80;
    let r = ecies::deconceal(
        EciesProfile::ProfileA,
        &home_priv,
        &eph,
        &golden_value("a_ciphertext"),
        &golden_value("a_mac"),
    );
    assert_eq!(r, Err(EciesError::IntegrityFailure));
}

#[test]
fn keygen_matches_scalar_multiplication_oracle() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let curve = oracle::P256::new();
    for _ in 0..8 {
        let a = EciesKeyPair::generate(EciesProfile::ProfileA, &mut rng);
        let sk: [u8; 32] = a.private_key().try_into().unwrap();
        assert_eq!(a.public_key(), oracle::x25519_base(&sk));

        let b = EciesKeyPair::generate(EciesProfile::ProfileB, &mut rng);
        assert_eq!(b.public_key().len(), 33);
        assert!(matches!(b.public_key()[0], 2 | 3));
        assert_eq!(b.public_key(), curve.public_compressed(b.private_key()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conceal_agrees_with_oracle(
        eph in any::<[u8; 32]>(),
        home_seed in any::<u64>(),
        plaintext in prop::collection::vec(any::<u8>(), 1..24),
    ) {
        let mut rng = ChaCha20Rng::seed_from_u64(home_seed);

        let home = EciesKeyPair::generate(EciesProfile::ProfileA, &mut rng);
        let lib_eph = EciesKeyPair::from_private(EciesProfile::ProfileA, &eph).unwrap();
        let env = ecies::conceal_with_ephemeral(EciesProfile::ProfileA, home.public_key(), &plaintext, &lib_eph).unwrap();
        let want = oracle::conceal_profile_a(&eph, home.public_key().try_into().unwrap(), &plaintext);
        prop_assert_eq!(&env.ephemeral_public_key, &want.ephemeral_public_key);
        prop_assert_eq!(&env.ciphertext, &want.ciphertext);
        prop_assert_eq!(&env.mac, &want.mac);

        let home = EciesKeyPair::generate(EciesProfile::ProfileB, &mut rng);
        // most 32-octet strings are valid P-256 scalars; skip the rest
        if let Ok(lib_eph) = EciesKeyPair::from_private(EciesProfile::ProfileB, &eph) {
            let env = ecies::conceal_with_ephemeral(EciesProfile::ProfileB, home.public_key(), &plaintext, &lib_eph).unwrap();
            let want = oracle::conceal_profile_b(&eph, home.public_key(), &plaintext);
            prop_assert_eq!(&env.ephemeral_public_key, &want.ephemeral_public_key);
            prop_assert_eq!(&env.ciphertext, &want.ciphertext);
            prop_assert_eq!(&env.mac, &want.mac);
        }
    }

    #[test]
    fn deconceal_inverts_conceal(seed in any::<u64>(), plaintext in prop::collection::vec(any::<u8>(), 1..64)) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        for (_, profile) in PROFILES {
            let home = EciesKeyPair::generate(profile, &mut rng);
            let env = ecies::conceal(profile, home.public_key(), &plaintext, &mut rng).unwrap();
            prop_assert_eq!(env.ciphertext.len(), plaintext.len());
            let pt = ecies::deconceal(profile, home.private_key(), &env.ephemeral_public_key, &env.ciphertext, &env.mac).unwrap();
            prop_assert_eq!(pt, plaintext.clone());
        }
    }
}
