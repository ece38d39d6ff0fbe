//! Exact elements of ℚ/ℤ, read as roots of unity in ℂ*.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::ParseRootError;

/// A reduced fraction `p/q` with `0 <= p < q`, standing for `exp(2πi p/q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct UnitRoot {
    num: i64,
    den: i64,
}

pub(crate) fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b)) * b
}

impl UnitRoot {
    pub const ZERO: UnitRoot = UnitRoot { num: 0, den: 1 };

    /// `p/q` reduced modulo 1. Panics on `q == 0`.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        let (mut p, mut q) = if q < 0 { (-p, -q) } else { (p, q) };
        p = p.rem_euclid(q);
        let g = gcd(p, q);
        if p == 0 {
            return Self::ZERO;
        }
        p /= g;
        q /= g;
        UnitRoot { num: p, den: q }
    }

    pub fn numerator(self) -> i64 {
        self.num
    }

    pub fn denominator(self) -> i64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Integer multiple `k·x`.
    pub fn scale(self, k: i64) -> Self {
        let p = ((self.num as i128 * k as i128).rem_euclid(self.den as i128)) as i64;
        Self::new(p, self.den)
    }

    /// Real lift in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `exp(2πi·self)`.
    pub fn to_complex(self) -> Complex64 {
        phase(self.to_f64())
    }

    /// Additive order in ℚ/ℤ.
    pub fn order(self) -> i64 {
        self.den
    }
}

/// `exp(2πi·x)`.
pub fn phase(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * x)
}

impl Add for UnitRoot {
    type Output = UnitRoot;
    fn add(self, o: UnitRoot) -> UnitRoot {
        let g = gcd(self.den, o.den);
        let l = (self.den / g) as i128 * o.den as i128;
        let p = self.num as i128 * (l / self.den as i128) + o.num as i128 * (l / o.den as i128);
        let p = p.rem_euclid(l);
        let g2 = gcd_i128(p, l);
        if p == 0 {
            return UnitRoot::ZERO;
        }
        UnitRoot {
            num: (p / g2) as i64,
            den: (l / g2) as i64,
        }
    }
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Neg for UnitRoot {
    type Output = UnitRoot;
    fn neg(self) -> UnitRoot {
        if self.num == 0 {
            self
        } else {
            UnitRoot {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }
}

impl Sub for UnitRoot {
    type Output = UnitRoot;
    fn sub(self, o: UnitRoot) -> UnitRoot {
        self + (-o)
    }
}

impl AddAssign for UnitRoot {
    fn add_assign(&mut self, o: UnitRoot) {
        *self = *self + o;
    }
}

impl SubAssign for UnitRoot {
    fn sub_assign(&mut self, o: UnitRoot) {
        *self = *self - o;
    }
}

impl PartialOrd for UnitRoot {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UnitRoot {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.num as i128 * o.den as i128).cmp(&(o.num as i128 * self.den as i128))
    }
}

impl fmt::Display for UnitRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for UnitRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for UnitRoot {
    type Err = ParseRootError;

    /// Accepts `p/q` or a bare integer `p` (read as `p/1`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: i64 = p.parse().map_err(|_| ParseRootError(s.into()))?;
        let q: i64 = q.parse().map_err(|_| ParseRootError(s.into()))?;
        if q == 0 {
            return Err(ParseRootError(s.into()));
        }
        Ok(UnitRoot::new(p, q))
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for UnitRoot {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn reduction_and_range() {
        assert_eq!(UnitRoot::new(3, 6), UnitRoot::new(1, 2));
        assert_eq!(UnitRoot::new(-1, 4), UnitRoot::new(3, 4));
        assert_eq!(UnitRoot::new(5, -4), UnitRoot::new(3, 4));
        assert_eq!(UnitRoot::new(4, 4), UnitRoot::ZERO);
        assert_eq!(UnitRoot::ZERO.denominator(), 1);
    }

    #[test]
    fn arithmetic() {
        let a = UnitRoot::new(1, 2);
        let b = UnitRoot::new(1, 3);
        assert_eq!(a + b, UnitRoot::new(5, 6));
        assert_eq!(a + a, UnitRoot::ZERO);
        assert_eq!(b - a, UnitRoot::new(5, 6));
        assert_eq!(b.scale(3), UnitRoot::ZERO);
        assert_eq!(b.scale(-1), -b);
    }

    #[test]
    fn text_round_trip() {
        for s in ["0/1", "1/2", "3/7"] {
            let r: UnitRoot = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("2/4".parse::<UnitRoot>().unwrap().to_string(), "1/2");
        assert!("1/0".parse::<UnitRoot>().is_err());
        assert!("x".parse::<UnitRoot>().is_err());
    }

    #[test]
    fn complex_embedding() {
        let z = UnitRoot::new(1, 4).to_complex();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
