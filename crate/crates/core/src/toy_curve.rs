//! Short-Weierstrass curves `y^2 = x^3 + ax + b` over small prime fields.
//!
//! Teaching-sized arithmetic only: affine chord-and-tangent addition,
//! double-and-add scalar multiplication, and a linear-scan discrete-log
//! solver. Nothing here is used by the production ECIES code.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Largest modulus accepted by [`ToyCurve::enumerate_points`].
pub const ENUMERATION_LIMIT: u64 = 10_000;

/// Largest modulus accepted at all; keeps every product inside `u64`.
pub const MODULUS_LIMIT: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("modulus {0} is not a prime greater than 3")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported range")]
    ModulusTooLarge(u64),
    #[error("curve is singular: 4a^3 + 27b^2 = 0 mod p")]
    Singular,
    #[error("modulus {p} is above the enumeration limit {limit}")]
    TooLarge { p: u64, limit: u64 },
    #[error("point ({x}, {y}) is not on the curve")]
    NotOnCurve { x: u64, y: u64 },
}

/// Point on a [`ToyCurve`]. `Infinity` sorts before every affine point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ToyPoint {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl ToyPoint {
    pub fn affine(x: u64, y: u64) -> Self {
        ToyPoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ToyPoint::Infinity)
    }
}

impl fmt::Display for ToyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToyPoint::Infinity => f.write_str("O"),
            ToyPoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ToyCurve {
    p: u64,
    a: u64,
    b: u64,
}

impl ToyCurve {
    /// Coefficients may be negative; they are reduced mod `p`.
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self, CurveError> {
        if p > MODULUS_LIMIT {
            return Err(CurveError::ModulusTooLarge(p));
        }
        if p <= 3 || !is_prime(p) {
            return Err(CurveError::NotPrime(p));
        }
        let reduce = |v: i64| v.rem_euclid(p as i64) as u64;
        let curve = ToyCurve { p, a: reduce(a), b: reduce(b) };
        let a3 = curve.mul(curve.mul(curve.a, curve.a), curve.a);
        let disc = curve.add_mod(curve.mul(4, a3), curve.mul(27, curve.mul(curve.b, curve.b)));
        if disc == 0 {
            return Err(CurveError::Singular);
        }
        Ok(curve)
    }

    /// The curve `y^2 = x^3 - x` over F_89.
    pub fn f89_example() -> Self {
        ToyCurve::new(89, -1, 0).expect("valid curve")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        (x % self.p) * (y % self.p) % self.p
    }

    fn add_mod(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.p
    }

    fn sub_mod(&self, x: u64, y: u64) -> u64 {
        (x + self.p - y % self.p) % self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Fermat inverse; `x` must be non-zero mod p.
    fn inv(&self, x: u64) -> u64 {
        debug_assert!(!x.is_multiple_of(self.p));
        self.pow(x, self.p - 2)
    }

    fn rhs(&self, x: u64) -> u64 {
        let x3 = self.mul(self.mul(x, x), x);
        self.add_mod(self.add_mod(x3, self.mul(self.a, x)), self.b)
    }

    /// Whether `(x, y)` satisfies the curve congruence.
    pub fn contains(&self, x: u64, y: u64) -> bool {
        x < self.p && y < self.p && self.mul(y, y) == self.rhs(x)
    }

    pub fn is_on_curve(&self, pt: &ToyPoint) -> bool {
        match *pt {
            ToyPoint::Infinity => true,
            ToyPoint::Affine { x, y } => self.contains(x, y),
        }
    }

    pub fn point(&self, x: u64, y: u64) -> Result<ToyPoint, CurveError> {
        if self.contains(x, y) {
            Ok(ToyPoint::Affine { x, y })
        } else {
            Err(CurveError::NotOnCurve { x, y })
        }
    }

    /// All points, including the point at infinity.
    pub fn enumerate_points(&self) -> Result<BTreeSet<ToyPoint>, CurveError> {
        if self.p > ENUMERATION_LIMIT {
            return Err(CurveError::TooLarge { p: self.p, limit: ENUMERATION_LIMIT });
        }
        // Bucket the y values by their square, then look up each x's right-hand side.
        let mut roots: Vec<Vec<u64>> = vec![Vec::new(); self.p as usize];
        for y in 0..self.p {
            roots[self.mul(y, y) as usize].push(y);
        }
        let mut points = BTreeSet::new();
        points.insert(ToyPoint::Infinity);
        for x in 0..self.p {
            for &y in &roots[self.rhs(x) as usize] {
                points.insert(ToyPoint::Affine { x, y });
            }
        }
        Ok(points)
    }

    pub fn negate(&self, pt: &ToyPoint) -> ToyPoint {
        match *pt {
            ToyPoint::Infinity => ToyPoint::Infinity,
            ToyPoint::Affine { x, y } => ToyPoint::Affine { x, y: (self.p - y) % self.p },
        }
    }

    pub fn add(&self, lhs: &ToyPoint, rhs: &ToyPoint) -> ToyPoint {
        let (x1, y1, x2, y2) = match (*lhs, *rhs) {
            (ToyPoint::Infinity, q) => return q,
            (q, ToyPoint::Infinity) => return q,
            (ToyPoint::Affine { x: x1, y: y1 }, ToyPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            // vertical line: P + (-P), which also covers doubling a point with y = 0
            if self.add_mod(y1, y2) == 0 {
                return ToyPoint::Infinity;
            }
            let num = self.add_mod(self.mul(3, self.mul(x1, x1)), self.a);
            self.mul(num, self.inv(self.mul(2, y1)))
        } else {
            self.mul(self.sub_mod(y2, y1), self.inv(self.sub_mod(x2, x1)))
        };
        let x3 = self.sub_mod(self.sub_mod(self.mul(slope, slope), x1), x2);
        let y3 = self.sub_mod(self.mul(slope, self.sub_mod(x1, x3)), y1);
        ToyPoint::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, pt: &ToyPoint) -> ToyPoint {
        self.add(pt, pt)
    }

    /// Double-and-add, most significant bit first.
    pub fn scalar_mul(&self, k: u64, g: &ToyPoint) -> ToyPoint {
        let mut acc = ToyPoint::Infinity;
        for bit in (0..u64::BITS - k.leading_zeros()).rev() {
            acc = self.double(&acc);
            if (k >> bit) & 1 == 1 {
                acc = self.add(&acc, g);
            }
        }
        acc
    }

    /// Smallest n >= 1 with n*G = O, found by repeated addition.
    pub fn order_of(&self, g: &ToyPoint) -> u64 {
        let mut n = 1;
        let mut acc = *g;
        while !acc.is_infinity() {
            acc = self.add(&acc, g);
            n += 1;
        }
        n
    }

    /// Smallest k in `[0, bound]` with `k*G == P`, by walking the multiples of G.
    pub fn ecdlp_brute_force(&self, g: &ToyPoint, target: &ToyPoint, bound: u64) -> Option<u64> {
        let mut acc = ToyPoint::Infinity;
        for k in 0..=bound {
            if acc == *target {
                return Some(k);
            }
            acc = self.add(&acc, g);
        }
        None
    }

    /// `x,y` rows (with header) of every affine point, for plotting.
    pub fn points_csv(&self) -> Result<String, CurveError> {
        let mut out = String::from("x,y\n");
        for pt in self.enumerate_points()? {
            if let ToyPoint::Affine { x, y } = pt {
                out.push_str(&format!("{x},{y}\n"));
            }
        }
        Ok(out)
    }
}
