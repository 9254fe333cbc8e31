//! Binary extension fields GF(2^w), 2 <= w <= 20, via log/antilog tables.

use crate::error::{Error, Result};

/// Primitive polynomials, including the `x^w` term.
const PRIMITIVE: [u32; 21] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B, 0x20009, 0x40081, 0x80027, 0x100009,
];

pub const MAX_WIDTH: u32 = 20;

#[derive(Debug, Clone)]
pub struct Gf {
    width: u32,
    order: usize,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf {
    pub fn new(width: u32) -> Result<Self> {
        if !(2..=MAX_WIDTH).contains(&width) {
            return Err(Error::domain(format!("field width must be in [2, {MAX_WIDTH}], got {width}")));
        }
        let size = 1usize << width;
        let order = size - 1;
        let poly = PRIMITIVE[width as usize];
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; size];
        let mut x = 1u32;
        for (i, e) in exp[..order].iter_mut().enumerate() {
            *e = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & size as u32 != 0 {
                x ^= poly;
            }
        }
        debug_assert_eq!(x, 1, "polynomial {poly:#x} is not primitive");
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Gf { width, order, exp, log })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// Multiplicative group order, `2^w - 1`.
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        assert!(b != 0, "division by zero in GF(2^{})", self.width);
        if a == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.order - self.log[b as usize] as usize]
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.div(1, a)
    }

    /// `alpha^e` for any integer exponent.
    #[inline]
    pub fn alpha_pow(&self, e: i64) -> u32 {
        self.exp[e.rem_euclid(self.order as i64) as usize]
    }

    #[inline]
    pub fn log_of(&self, a: u32) -> Option<usize> {
        (a != 0).then(|| self.log[a as usize] as usize)
    }

    /// Evaluate a polynomial (lowest degree first) at `x`.
    pub fn eval(&self, poly: &[u32], x: u32) -> u32 {
        poly.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }

    pub fn poly_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= self.mul(x, y);
            }
        }
        out
    }
}
