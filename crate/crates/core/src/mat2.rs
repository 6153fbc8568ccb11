//! Small dense 2x2 matrices and log-scaled products.
//!
//! Ordered products of per-bead Boltzmann factors span hundreds of orders of
//! magnitude, so every running product carries a separate log-scale and the
//! stored mantissa is renormalized after each operation.

/// A plain 2x2 matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[0.0; 2]; 2]);
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    #[inline]
    pub fn diag(a: f64, b: f64) -> Self {
        Mat2([[a, 0.0], [0.0, b]])
    }

    #[inline]
    pub fn symmetric(a00: f64, a01: f64, a11: f64) -> Self {
        Mat2([[a00, a01], [a01, a11]])
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    #[inline]
    pub fn matmul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    /// Tr[self * rhs]
    #[inline]
    pub fn trace_mul(&self, rhs: &Mat2) -> f64 {
        let a = &self.0;
        let b = &rhs.0;
        a[0][0] * b[0][0] + a[0][1] * b[1][0] + a[1][0] * b[0][1] + a[1][1] * b[1][1]
    }

    #[inline]
    pub fn scale(&self, s: f64) -> Mat2 {
        let a = &self.0;
        Mat2([[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]])
    }

    #[inline]
    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }

    #[inline]
    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }

    #[inline]
    pub fn max_abs(&self) -> f64 {
        let a = &self.0;
        a[0][0]
            .abs()
            .max(a[0][1].abs())
            .max(a[1][0].abs())
            .max(a[1][1].abs())
    }
}

/// A 2x2 matrix `m` representing `m * exp(log)`.
#[derive(Debug, Clone, Copy)]
pub struct Scaled {
    pub m: Mat2,
    pub log: f64,
}

impl Scaled {
    pub const IDENTITY: Scaled = Scaled {
        m: Mat2::IDENTITY,
        log: 0.0,
    };
    pub const ZERO: Scaled = Scaled {
        m: Mat2::ZERO,
        log: 0.0,
    };

    pub fn new(m: Mat2) -> Self {
        Scaled { m, log: 0.0 }.normalized()
    }

    /// Rescale so the largest mantissa entry has magnitude one.
    pub fn normalized(self) -> Self {
        let a = self.m.max_abs();
        if a == 0.0 || !a.is_finite() {
            return self;
        }
        Scaled {
            m: self.m.scale(1.0 / a),
            log: self.log + a.ln(),
        }
    }

    pub fn matmul(&self, rhs: &Scaled) -> Scaled {
        Scaled {
            m: self.m.matmul(&rhs.m),
            log: self.log + rhs.log,
        }
        .normalized()
    }

    pub fn mul_plain(&self, rhs: &Mat2) -> Scaled {
        Scaled {
            m: self.m.matmul(rhs),
            log: self.log,
        }
        .normalized()
    }

    /// self + rhs, aligning the two log scales.
    pub fn add(&self, rhs: &Scaled) -> Scaled {
        let (hi, lo) = if self.log >= rhs.log {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shift = (lo.log - hi.log).exp();
        Scaled {
            m: hi.m.add(&lo.m.scale(shift)),
            log: hi.log,
        }
        .normalized()
    }

    /// Tr[self * rhs] as (mantissa, log-scale).
    pub fn trace_mul(&self, rhs: &Scaled) -> (f64, f64) {
        (self.m.trace_mul(&rhs.m), self.log + rhs.log)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn scaled_product_matches_plain_product() {
        let a = Mat2([[0.3, -0.1], [-0.1, 0.8]]);
        let b = Mat2([[2.0, 0.4], [0.4, 1.1]]);
        let plain = a.matmul(&b).matmul(&a);
        let scaled = Scaled::new(a).matmul(&Scaled::new(b)).matmul(&Scaled::new(a));
        let recon = scaled.m.scale(scaled.log.exp());
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(plain.0[i][j], recon.0[i][j], max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn scaled_product_survives_extreme_magnitudes() {
        // 400 factors of e^{+2} would overflow a plain f64 product chain run
        // in the other direction; the log-scale absorbs it.
        let f = Mat2::diag((2.0f64).exp(), (-3.0f64).exp());
        let mut p = Scaled::IDENTITY;
        for _ in 0..400 {
            p = p.mul_plain(&f);
        }
        assert!(p.m.max_abs().is_finite());
        assert_relative_eq!(p.log + p.m.0[0][0].ln(), 800.0, epsilon = 1e-9);
    }

    #[test]
    fn scaled_add_aligns_scales() {
        let a = Scaled {
            m: Mat2::diag(1.0, 0.5),
            log: 10.0,
        };
        let b = Scaled {
            m: Mat2::diag(1.0, 1.0),
            log: 8.0,
        };
        let s = a.add(&b);
        let expect00 = (10.0f64).exp() + (8.0f64).exp();
        assert_relative_eq!(s.m.0[0][0] * s.log.exp(), expect00, max_relative = 1e-13);
    }
}
