use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    pub p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if !prime {
            return Err(Error::Config(format!("q = {p} is not a prime")));
        }
        if p > 251 {
            return Err(Error::Config(format!("q = {p} is too large")));
        }
        Ok(PrimeField { p })
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.p) as u8
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.p - b as u32) % self.p) as u8
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.p) as u8
    }

    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "inverse of zero");
        let mut r = 1u32;
        let mut base = a as u32;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        r as u8
    }

    /// A generator of the multiplicative group.
    pub fn primitive_root(&self) -> u8 {
        (1..self.p)
            .find(|&g| {
                let mut x = 1u32;
                (1..self.p - 1).all(|_| {
                    x = x * g % self.p;
                    x != 1
                })
            })
            .unwrap_or(1) as u8
    }
}
