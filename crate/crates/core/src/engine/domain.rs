/// Failure marker: a domain would have become empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Empty;

/// Width of the exact value set kept for small domains.
const EXACT_SPAN: i64 = 64;

/// Finite integer domain.
///
/// Always tracks bounds. Domains whose initial span fits in 64 values also
/// keep an exact membership mask, so interior values can be removed; wider
/// domains are pure intervals and interior removals are ignored (sound,
/// just weaker). Every mutation narrows, and a mutation that would empty
/// the domain returns [`Empty`] and leaves it untouched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Domain {
    min: i32,
    max: i32,
    base: i32,
    bits: u64,
    exact: bool,
}

impl Domain {
    pub fn new(lo: i32, hi: i32) -> Option<Domain> {
        if lo > hi {
            return None;
        }
        let span = i64::from(hi) - i64::from(lo) + 1;
        let exact = span <= EXACT_SPAN;
        let bits = if !exact {
            0
        } else if span == 64 {
            u64::MAX
        } else {
            (1u64 << span) - 1
        };
        Some(Domain { min: lo, max: hi, base: lo, bits, exact })
    }

    pub fn singleton(v: i32) -> Domain {
        Domain::new(v, v).expect("non-empty")
    }

    #[inline]
    pub fn min(&self) -> i32 {
        self.min
    }

    #[inline]
    pub fn max(&self) -> i32 {
        self.max
    }

    #[inline]
    pub fn is_fixed(&self) -> bool {
        self.min == self.max
    }

    pub fn value(&self) -> Option<i32> {
        self.is_fixed().then_some(self.min)
    }

    pub fn size(&self) -> u64 {
        if self.exact {
            u64::from(self.bits.count_ones())
        } else {
            (i64::from(self.max) - i64::from(self.min) + 1) as u64
        }
    }

    pub fn contains(&self, v: i32) -> bool {
        if v < self.min || v > self.max {
            return false;
        }
        !self.exact || self.bits >> (v - self.base) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = i32> + '_ {
        (self.min..=self.max).filter(move |&v| self.contains(v))
    }

    fn normalize(&mut self) -> Result<(), Empty> {
        if !self.exact {
            return if self.min > self.max { Err(Empty) } else { Ok(()) };
        }
        if self.bits == 0 {
            return Err(Empty);
        }
        self.min = self.base + self.bits.trailing_zeros() as i32;
        self.max = self.base + 63 - self.bits.leading_zeros() as i32;
        Ok(())
    }

    fn with(&mut self, f: impl FnOnce(&mut Domain)) -> Result<bool, Empty> {
        let before = *self;
        let mut next = before;
        f(&mut next);
        next.normalize()?;
        *self = next;
        Ok(next != before)
    }

    /// Keeps values `>= v`.
    pub fn remove_below(&mut self, v: i32) -> Result<bool, Empty> {
        if v <= self.min {
            return Ok(false);
        }
        self.with(|d| {
            d.min = v;
            if d.exact {
                let off = i64::from(v) - i64::from(d.base);
                d.bits = if off >= 64 { 0 } else { d.bits & (u64::MAX << off) };
            }
        })
    }

    /// Keeps values `<= v`.
    pub fn remove_above(&mut self, v: i32) -> Result<bool, Empty> {
        if v >= self.max {
            return Ok(false);
        }
        self.with(|d| {
            d.max = v;
            if d.exact {
                let off = i64::from(v) - i64::from(d.base);
                d.bits = if off < 0 { 0 } else if off >= 63 { d.bits } else { d.bits & ((2u64 << off) - 1) };
            }
        })
    }

    pub fn remove_value(&mut self, v: i32) -> Result<bool, Empty> {
        self.remove_range(v, v)
    }

    /// Removes every value in `lo..=hi`.
    pub fn remove_range(&mut self, lo: i32, hi: i32) -> Result<bool, Empty> {
        let lo = lo.max(self.min);
        let hi = hi.min(self.max);
        if lo > hi {
            return Ok(false);
        }
        if lo == self.min {
            return self.remove_below(hi.saturating_add(1));
        }
        if hi == self.max {
            return self.remove_above(lo - 1);
        }
        if !self.exact {
            return Ok(false);
        }
        self.with(|d| {
            let l = (lo - d.base) as u32;
            let h = (hi - d.base) as u32;
            let width = h - l + 1;
            let mask = if width >= 64 { u64::MAX } else { ((1u64 << width) - 1) << l };
            d.bits &= !mask;
        })
    }

    pub fn assign(&mut self, v: i32) -> Result<bool, Empty> {
        if !self.contains(v) {
            return Err(Empty);
        }
        let changed = self.remove_below(v)?;
        Ok(self.remove_above(v)? || changed)
    }
}
