//! Scalars. Everything downstream is generic over [`Scalar`]; the exact
//! rationals are the working field and [`Fp`] only backs randomized probes.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Num + Neg<Output = Self> + Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Image of a rational under the canonical map. Panics only if the
    /// denominator vanishes in the target field.
    fn from_rational(q: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "3", "-2/5" and similar.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Integers modulo the Mersenne prime 2^31 - 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Fp(u64);

impl Fp {
    pub const P: u64 = 2_147_483_647;

    pub fn new(n: u64) -> Self {
        Fp(n % Self::P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn from_bigint(n: &BigInt) -> Self {
        let p = BigInt::from(Self::P);
        let mut r = n % &p;
        if r.is_negative() {
            r += &p;
        }
        Fp(r.to_string().parse().expect("residue fits in u64"))
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        Fp((self.0 + o.0) % Self::P)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp((self.0 + Self::P - o.0) % Self::P)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp(self.0 * o.0 % Self::P)
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, o: Fp) -> Fp {
        assert!(o.0 != 0, "division by zero in Fp");
        self * o.pow(Self::P - 2)
    }
}

impl Rem for Fp {
    type Output = Fp;
    fn rem(self, _o: Fp) -> Fp {
        Fp(0)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp((Self::P - self.0) % Self::P)
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Num for Fp {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        u64::from_str_radix(s, radix).map(Fp::new)
    }
}

impl Scalar for Fp {
    fn from_rational(q: &Rational) -> Self {
        Fp::from_bigint(q.numer()) / Fp::from_bigint(q.denom())
    }
}
