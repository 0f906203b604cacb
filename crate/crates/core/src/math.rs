//! Float functions routed to `std` or `libm` depending on the build.

#![allow(dead_code)]

#[cfg(feature = "std")]
pub(crate) trait FloatExt {
    fn abs_(self) -> Self;
    fn sqrt_(self) -> Self;
    fn sin_(self) -> Self;
    fn cos_(self) -> Self;
    fn tan_(self) -> Self;
    fn atan2_(self, other: Self) -> Self;
    fn hypot_(self, other: Self) -> Self;
    fn floor_(self) -> Self;
    fn ceil_(self) -> Self;
    fn round_(self) -> Self;
}

#[cfg(feature = "std")]
impl FloatExt for f64 {
    #[inline]
    fn abs_(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn sqrt_(self) -> f64 {
        self.sqrt()
    }
    #[inline]
    fn sin_(self) -> f64 {
        self.sin()
    }
    #[inline]
    fn cos_(self) -> f64 {
        self.cos()
    }
    #[inline]
    fn tan_(self) -> f64 {
        self.tan()
    }
    #[inline]
    fn atan2_(self, other: f64) -> f64 {
        self.atan2(other)
    }
    #[inline]
    fn hypot_(self, other: f64) -> f64 {
        self.hypot(other)
    }
    #[inline]
    fn floor_(self) -> f64 {
        self.floor()
    }
    #[inline]
    fn ceil_(self) -> f64 {
        self.ceil()
    }
    #[inline]
    fn round_(self) -> f64 {
        self.round()
    }
}

#[cfg(not(feature = "std"))]
pub(crate) trait FloatExt {
    fn abs_(self) -> Self;
    fn sqrt_(self) -> Self;
    fn sin_(self) -> Self;
    fn cos_(self) -> Self;
    fn tan_(self) -> Self;
    fn atan2_(self, other: Self) -> Self;
    fn hypot_(self, other: Self) -> Self;
    fn floor_(self) -> Self;
    fn ceil_(self) -> Self;
    fn round_(self) -> Self;
}

#[cfg(not(feature = "std"))]
impl FloatExt for f64 {
    #[inline]
    fn abs_(self) -> f64 {
        libm::fabs(self)
    }
    #[inline]
    fn sqrt_(self) -> f64 {
        libm::sqrt(self)
    }
    #[inline]
    fn sin_(self) -> f64 {
        libm::sin(self)
    }
    #[inline]
    fn cos_(self) -> f64 {
        libm::cos(self)
    }
    #[inline]
    fn tan_(self) -> f64 {
        libm::tan(self)
    }
    #[inline]
    fn atan2_(self, other: f64) -> f64 {
        libm::atan2(self, other)
    }
    #[inline]
    fn hypot_(self, other: f64) -> f64 {
        libm::hypot(self, other)
    }
    #[inline]
    fn floor_(self) -> f64 {
        libm::floor(self)
    }
    #[inline]
    fn ceil_(self) -> f64 {
        libm::ceil(self)
    }
    #[inline]
    fn round_(self) -> f64 {
        libm::round(self)
    }
}
