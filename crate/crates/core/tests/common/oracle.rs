//! Standalone reference implementations used to compute expected values.
//!
//! Nothing here touches the crate under test or the RustCrypto stack; every
//! primitive is written out long-hand from its textbook definition so the
//! golden vectors it produces are an independent check on the library.

#![allow(dead_code)]

use num_bigint::BigUint;

// ---------------------------------------------------------------- SHA-256

const K256: [u32; 64] = [
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5, 0xd807aa98,
    0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8,
    0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819,
    0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2,
];

pub fn sha256(msg: &[u8]) -> [u8; 32] {
    let mut h: [u32; 8] =
        [0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a, 0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19];
    let mut data = msg.to_vec();
    let bit_len = (msg.len() as u64) * 8;
    data.push(0x80);
    while data.len() % 64 != 56 {
        data.push(0);
    }
    data.extend_from_slice(&bit_len.to_be_bytes());

    for block in data.chunks(64) {
        let mut w = [0u32; 64];
        for i in 0..16 {
            w[i] = u32::from_be_bytes([block[4 * i], block[4 * i + 1], block[4 * i + 2], block[4 * i + 3]]);
        }
        for i in 16..64 {
            let s0 = w[i - 15].rotate_right(7) ^ w[i - 15].rotate_right(18) ^ (w[i - 15] >> 3);
            let s1 = w[i - 2].rotate_right(17) ^ w[i - 2].rotate_right(19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16].wrapping_add(s0).wrapping_add(w[i - 7]).wrapping_add(s1);
        }
        let [mut a, mut b, mut c, mut d, mut e, mut f, mut g, mut hh] = h;
        for i in 0..64 {
            let s1 = e.rotate_right(6) ^ e.rotate_right(11) ^ e.rotate_right(25);
            let ch = (e & f) ^ (!e & g);
            let t1 = hh.wrapping_add(s1).wrapping_add(ch).wrapping_add(K256[i]).wrapping_add(w[i]);
            let s0 = a.rotate_right(2) ^ a.rotate_right(13) ^ a.rotate_right(22);
            let maj = (a & b) ^ (a & c) ^ (b & c);
            let t2 = s0.wrapping_add(maj);
            hh = g;
            g = f;
            f = e;
            e = d.wrapping_add(t1);
            d = c;
            c = b;
            b = a;
            a = t1.wrapping_add(t2);
        }
        for (slot, v) in h.iter_mut().zip([a, b, c, d, e, f, g, hh]) {
            *slot = slot.wrapping_add(v);
        }
    }
    let mut out = [0u8; 32];
    for (i, word) in h.iter().enumerate() {
        out[4 * i..4 * i + 4].copy_from_slice(&word.to_be_bytes());
    }
    out
}

pub fn hmac_sha256(key: &[u8], msg: &[u8]) -> [u8; 32] {
    let mut k = [0u8; 64];
    if key.len() > 64 {
        k[..32].copy_from_slice(&sha256(key));
    } else {
        k[..key.len()].copy_from_slice(key);
    }
    let mut inner: Vec<u8> = k.iter().map(|b| b ^ 0x36).collect();
    inner.extend_from_slice(msg);
    let inner_hash = sha256(&inner);
    let mut outer: Vec<u8> = k.iter().map(|b| b ^ 0x5c).collect();
    outer.extend_from_slice(&inner_hash);
    sha256(&outer)
}

/// Counter-mode hash KDF, written as explicit per-block hash calls.
pub fn x963_kdf(secret: &[u8], shared_info: &[u8], out_len: usize) -> Vec<u8> {
    let mut out = Vec::new();
    let mut counter: u32 = 1;
    while out.len() < out_len {
        let mut input = secret.to_vec();
        input.extend_from_slice(&counter.to_be_bytes());
        input.extend_from_slice(shared_info);
        out.extend_from_slice(&sha256(&input));
        counter += 1;
    }
    out.truncate(out_len);
    out
}

// ---------------------------------------------------------------- AES-128

fn xtime(b: u8) -> u8 {
    (b << 1) ^ if b & 0x80 != 0 { 0x1b } else { 0 }
}

fn gmul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    p
}

fn ginv(a: u8) -> u8 {
    if a == 0 {
        return 0;
    }
    // a^254 in GF(2^8)
    let mut result = 1u8;
    let mut base = a;
    let mut e = 254u32;
    while e > 0 {
        if e & 1 != 0 {
            result = gmul(result, base);
        }
        base = gmul(base, base);
        e >>= 1;
    }
    result
}

fn sbox(a: u8) -> u8 {
    let x = ginv(a);
    x ^ x.rotate_left(1) ^ x.rotate_left(2) ^ x.rotate_left(3) ^ x.rotate_left(4) ^ 0x63
}

pub fn aes128_encrypt_block(key: &[u8; 16], block: &[u8; 16]) -> [u8; 16] {
    // key schedule
    let mut w = [[0u8; 4]; 44];
    for i in 0..4 {
        w[i].copy_from_slice(&key[4 * i..4 * i + 4]);
    }
    let mut rcon = 1u8;
    for i in 4..44 {
        let mut t = w[i - 1];
        if i % 4 == 0 {
            t = [sbox(t[1]) ^ rcon, sbox(t[2]), sbox(t[3]), sbox(t[0])];
            rcon = xtime(rcon);
        }
        for j in 0..4 {
            w[i][j] = w[i - 4][j] ^ t[j];
        }
    }
    // state[c][r], column-major as in the byte order of the block
    let mut s = *block;
    let add_round_key = |s: &mut [u8; 16], round: usize| {
        for c in 0..4 {
            for r in 0..4 {
                s[4 * c + r] ^= w[4 * round + c][r];
            }
        }
    };
    add_round_key(&mut s, 0);
    for round in 1..=10 {
        for b in s.iter_mut() {
            *b = sbox(*b);
        }
        let old = s;
        for c in 0..4 {
            for r in 0..4 {
                s[4 * c + r] = old[4 * ((c + r) % 4) + r];
            }
        }
        if round != 10 {
            for c in 0..4 {
                let col = [s[4 * c], s[4 * c + 1], s[4 * c + 2], s[4 * c + 3]];
                s[4 * c] = gmul(col[0], 2) ^ gmul(col[1], 3) ^ col[2] ^ col[3];
                s[4 * c + 1] = col[0] ^ gmul(col[1], 2) ^ gmul(col[2], 3) ^ col[3];
                s[4 * c + 2] = col[0] ^ col[1] ^ gmul(col[2], 2) ^ gmul(col[3], 3);
                s[4 * c + 3] = gmul(col[0], 3) ^ col[1] ^ col[2] ^ gmul(col[3], 2);
            }
        }
        add_round_key(&mut s, round);
    }
    s
}

/// CTR with a full 128-bit big-endian counter block.
pub fn aes128_ctr(key: &[u8; 16], icb: &[u8; 16], data: &[u8]) -> Vec<u8> {
    let mut counter = u128::from_be_bytes(*icb);
    let mut out = Vec::with_capacity(data.len());
    for chunk in data.chunks(16) {
        let ks = aes128_encrypt_block(key, &counter.to_be_bytes());
        out.extend(chunk.iter().zip(ks.iter()).map(|(d, k)| d ^ k));
        counter = counter.wrapping_add(1);
    }
    out
}

// ---------------------------------------------------------------- X25519

fn p25519() -> BigUint {
    (BigUint::from(1u8) << 255u32) - BigUint::from(19u8)
}

pub fn clamp25519(k: &[u8; 32]) -> [u8; 32] {
    let mut k = *k;
    k[0] &= 248;
    k[31] &= 127;
    k[31] |= 64;
    k
}

/// Montgomery ladder on the u-coordinate, straight from the curve's
/// differential addition formulas.
pub fn x25519(scalar: &[u8; 32], u: &[u8; 32]) -> [u8; 32] {
    let p = p25519();
    let k = BigUint::from_bytes_le(&clamp25519(scalar));
    let mut u_bytes = *u;
    u_bytes[31] &= 127;
    let x1 = BigUint::from_bytes_le(&u_bytes) % &p;
    let a24 = BigUint::from(121665u32);

    let sub = |a: &BigUint, b: &BigUint| ((a + &p) - (b % &p)) % &p;

    let mut x2 = BigUint::from(1u8);
    let mut z2 = BigUint::from(0u8);
    let mut x3 = x1.clone();
    let mut z3 = BigUint::from(1u8);
    let mut swap = false;

    for t in (0..255u64).rev() {
        let bit = k.bit(t);
        if swap != bit {
            std::mem::swap(&mut x2, &mut x3);
            std::mem::swap(&mut z2, &mut z3);
        }
        swap = bit;

        let a = (&x2 + &z2) % &p;
        let aa = (&a * &a) % &p;
        let b = sub(&x2, &z2);
        let bb = (&b * &b) % &p;
        let e = sub(&aa, &bb);
        let c = (&x3 + &z3) % &p;
        let d = sub(&x3, &z3);
        let da = (&d * &a) % &p;
        let cb = (&c * &b) % &p;
        let s = (&da + &cb) % &p;
        x3 = (&s * &s) % &p;
        let diff = sub(&da, &cb);
        z3 = (&x1 * ((&diff * &diff) % &p)) % &p;
        x2 = (&aa * &bb) % &p;
        z2 = (&e * ((&aa + &a24 * &e) % &p)) % &p;
    }
    if swap {
        std::mem::swap(&mut x2, &mut x3);
        std::mem::swap(&mut z2, &mut z3);
    }
    let inv = z2.modpow(&(&p - BigUint::from(2u8)), &p);
    let res = (&x2 * inv) % &p;
    let mut out = [0u8; 32];
    let bytes = res.to_bytes_le();
    out[..bytes.len()].copy_from_slice(&bytes);
    out
}

pub fn x25519_base(scalar: &[u8; 32]) -> [u8; 32] {
    let mut nine = [0u8; 32];
    nine[0] = 9;
    x25519(scalar, &nine)
}

// ---------------------------------------------------------------- P-256

pub struct P256 {
    pub p: BigUint,
    pub a: BigUint,
    pub b: BigUint,
    pub gx: BigUint,
    pub gy: BigUint,
    pub n: BigUint,
}

fn hexint(s: &str) -> BigUint {
    BigUint::parse_bytes(s.as_bytes(), 16).unwrap()
}

impl P256 {
    pub fn new() -> Self {
        let p = hexint("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff");
        let a = &p - BigUint::from(3u8);
        P256 {
            a,
            b: hexint("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b"),
            gx: hexint("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"),
            gy: hexint("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"),
            n: hexint("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551"),
            p,
        }
    }

    fn inv(&self, v: &BigUint) -> BigUint {
        v.modpow(&(&self.p - BigUint::from(2u8)), &self.p)
    }

    fn add(&self, a: &Option<(BigUint, BigUint)>, b: &Option<(BigUint, BigUint)>) -> Option<(BigUint, BigUint)> {
        let p = &self.p;
        match (a, b) {
            (None, q) => q.clone(),
            (q, None) => q.clone(),
            (Some((x1, y1)), Some((x2, y2))) => {
                let lambda = if x1 == x2 {
                    if (y1 + y2) % p == BigUint::from(0u8) {
                        return None;
                    }
                    let num = (BigUint::from(3u8) * x1 * x1 + &self.a) % p;
                    (num * self.inv(&((BigUint::from(2u8) * y1) % p))) % p
                } else {
                    let num = (y2 + p - y1) % p;
                    let den = (x2 + p - x1) % p;
                    (num * self.inv(&den)) % p
                };
                let x3 = (&lambda * &lambda + p + p - x1 - x2) % p;
                let y3 = (&lambda * ((x1 + p - &x3) % p) + p - y1) % p;
                Some((x3, y3))
            }
        }
    }

    pub fn mul(&self, k: &BigUint, pt: &Option<(BigUint, BigUint)>) -> Option<(BigUint, BigUint)> {
        let mut acc = None;
        for i in (0..k.bits()).rev() {
            acc = self.add(&acc, &acc);
            if k.bit(i) {
                acc = self.add(&acc, pt);
            }
        }
        acc
    }

    pub fn generator(&self) -> Option<(BigUint, BigUint)> {
        Some((self.gx.clone(), self.gy.clone()))
    }

    pub fn compress(&self, pt: &Option<(BigUint, BigUint)>) -> Vec<u8> {
        let (x, y) = pt.as_ref().expect("finite point");
        let mut out = vec![if y.bit(0) { 0x03 } else { 0x02 }];
        out.extend_from_slice(&be32(x));
        out
    }

    pub fn decompress(&self, bytes: &[u8]) -> Option<(BigUint, BigUint)> {
        let p = &self.p;
        let x = BigUint::from_bytes_be(&bytes[1..]);
        let rhs = (&x * &x * &x + &self.a * &x + &self.b) % p;
        // p = 3 mod 4
        let y = rhs.modpow(&((p + BigUint::from(1u8)) >> 2u32), p);
        assert_eq!((&y * &y) % p, rhs, "not on curve");
        let y = if y.bit(0) == (bytes[0] == 0x03) { y } else { p - y };
        Some((x, y))
    }

    /// Public key (compressed) for a big-endian private scalar.
    pub fn public_compressed(&self, scalar_be: &[u8]) -> Vec<u8> {
        let k = BigUint::from_bytes_be(scalar_be);
        self.compress(&self.mul(&k, &self.generator()))
    }

    /// x-coordinate of k * peer.
    pub fn ecdh(&self, scalar_be: &[u8], peer_compressed: &[u8]) -> [u8; 32] {
        let k = BigUint::from_bytes_be(scalar_be);
        let peer = self.decompress(peer_compressed);
        let shared = self.mul(&k, &peer);
        be32(&shared.expect("finite").0)
    }
}

fn be32(v: &BigUint) -> [u8; 32] {
    let bytes = v.to_bytes_be();
    let mut out = [0u8; 32];
    out[32 - bytes.len()..].copy_from_slice(&bytes);
    out
}

// ---------------------------------------------------------------- ECIES chain

pub struct OracleEnvelope {
    pub shared_secret: [u8; 32],
    pub kdf_output: Vec<u8>,
    pub ephemeral_public_key: Vec<u8>,
    pub ciphertext: Vec<u8>,
    pub mac: Vec<u8>,
}

fn seal(shared: [u8; 32], eph_pub: Vec<u8>, plaintext: &[u8]) -> OracleEnvelope {
    let kdf_output = x963_kdf(&shared, &eph_pub, 64);
    let enc_key: [u8; 16] = kdf_output[..16].try_into().unwrap();
    let icb: [u8; 16] = kdf_output[16..32].try_into().unwrap();
    let ciphertext = aes128_ctr(&enc_key, &icb, plaintext);
    let mac = hmac_sha256(&kdf_output[32..64], &ciphertext)[..8].to_vec();
    OracleEnvelope { shared_secret: shared, kdf_output, ephemeral_public_key: eph_pub, ciphertext, mac }
}

pub fn conceal_profile_a(eph_priv: &[u8; 32], hn_pub: &[u8; 32], plaintext: &[u8]) -> OracleEnvelope {
    let eph_pub = x25519_base(eph_priv).to_vec();
    let shared = x25519(eph_priv, hn_pub);
    seal(shared, eph_pub, plaintext)
}

pub fn conceal_profile_b(eph_priv: &[u8; 32], hn_pub: &[u8], plaintext: &[u8]) -> OracleEnvelope {
    let curve = P256::new();
    let eph_pub = curve.public_compressed(eph_priv);
    let shared = curve.ecdh(eph_priv, hn_pub);
    seal(shared, eph_pub, plaintext)
}
